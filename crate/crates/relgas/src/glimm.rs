//! Random-choice evolution on a staggered lattice with variation monitors.
//!
//! Each step solves the Riemann problem at every cell interface exactly and
//! collapses each local fan to the single state found at offset theta_n
//! inside the interface cell. The CFL condition dx/dt > 1 > |lambda| keeps
//! neighboring fans disjoint, so the evolution is exact up to the sampling
//! choice. theta comes either from a seeded pseudorandom stream or from a
//! van der Corput sequence rescaled to [-1, 1].
//!
//! Two functionals over the waves crossing a time level are tracked:
//!
//!   F = sum(alpha) + sum(beta) + V
//!   L = sum(alpha - M0 delta_alpha) + sum(beta - M0 delta_beta)
//!       + M0 sum|delta| + V
//!
//! where alpha, beta are shock strengths, delta_w the entropy-variable jump
//! a shock of strength w produces, delta the contact jumps, and V the (r, s)
//! variation of the initial data. M0 is small enough that each L summand
//! stays above half the wave strength. Both functionals are non-increasing
//! in time; a run aborts if either rises beyond rounding slack, if any cell
//! leaves the compact (r, s) box pinned down by the initial variation, or
//! if a wave reaches the domain edge.
//!
//! The sign of the M0 sum|delta| term follows the convention under which
//! the monotonicity argument closes (contacts absorb entropy jumps shed by
//! weakening shocks); the subtracting variant is also computed and logged
//! for comparison.

use crate::eos::EosParams;
use crate::error::{Error, Result};
use crate::riemann::{self, WaveFan};
use crate::states::PrimitiveState;
use crate::wavecurves::{compact_set_constants, sigma_jump};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub struct GridConfig {
    pub dx: f64,
    pub dt: f64,
    pub t_end: f64,
    pub x_min: f64,
    pub x_max: f64,
}

impl GridConfig {
    pub fn new(dx: f64, dt: f64, t_end: f64, x_min: f64, x_max: f64) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::Config(format!("dx must be positive and finite, got {dx}")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive and finite, got {dt}")));
        }
        if !(dx / dt > 1.0) {
            return Err(Error::Config(format!(
                "CFL violation: dx/dt = {} must exceed 1",
                dx / dt
            )));
        }
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be nonnegative, got {t_end}")));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Config(format!("empty domain [{x_min}, {x_max}]")));
        }
        Ok(GridConfig { dx, dt, t_end, x_min, x_max })
    }
}

/// Source of sampling offsets theta_n in [-1, 1], one per time level.
#[derive(Debug, Clone)]
pub enum SamplingSequence {
    SeededPseudorandom { rng: ChaCha8Rng },
    VanDerCorput { base: u64, index: u64 },
}

impl SamplingSequence {
    pub fn pseudorandom(seed: u64) -> Self {
        SamplingSequence::SeededPseudorandom { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn van_der_corput(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::Config(format!("van der Corput base must be >= 2, got {base}")));
        }
        Ok(SamplingSequence::VanDerCorput { base, index: 0 })
    }

    pub fn next_theta(&mut self) -> f64 {
        match self {
            SamplingSequence::SeededPseudorandom { rng } => rng.gen_range(-1.0..1.0),
            SamplingSequence::VanDerCorput { base, index } => {
                *index += 1;
                2.0 * radical_inverse(*base, *index) - 1.0
            }
        }
    }
}

/// phi_b(n): digit-reversal of n in base b, in [0, 1).
fn radical_inverse(base: u64, mut n: u64) -> f64 {
    let mut inv = 0.0;
    let mut denom = 1.0;
    while n > 0 {
        denom *= base as f64;
        inv += (n % base) as f64 / denom;
        n /= base;
    }
    inv
}

/// Piecewise-constant state on the staggered lattice: cell j is centered at
/// (k_left + 2j) dx, and cell parity alternates with the level index.
#[derive(Debug, Clone)]
pub struct GridSolution {
    pub level: usize,
    pub k_left: i64,
    pub dx: f64,
    pub cells: Vec<PrimitiveState>,
}

impl GridSolution {
    pub fn x(&self, j: usize) -> f64 {
        (self.k_left + 2 * j as i64) as f64 * self.dx
    }
}

#[derive(Debug, Clone)]
pub enum InitialProfile {
    Riemann { left: PrimitiveState, right: PrimitiveState, x_jump: f64 },
    Piecewise { breakpoints: Vec<f64>, states: Vec<PrimitiveState> },
    Smooth { kind: SmoothKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothKind {
    /// rho = 1 + 0.5 exp(-(x/0.2)^2), v = 0, S = 1. The tail reaches 1.0
    /// exactly (to the last bit) beyond |x| = 1.2.
    DensityPulse,
    /// rho = 1, v = -0.3 tanh(x/0.05), S = 1: two streams running together,
    /// exactly uniform beyond |x| = 1.
    VelocityRamp,
}

impl InitialProfile {
    pub fn riemann(left: PrimitiveState, right: PrimitiveState, x_jump: f64) -> Result<Self> {
        if !x_jump.is_finite() {
            return Err(Error::Config(format!("x_jump must be finite, got {x_jump}")));
        }
        Ok(InitialProfile::Riemann { left, right, x_jump })
    }

    pub fn piecewise(breakpoints: Vec<f64>, states: Vec<PrimitiveState>) -> Result<Self> {
        if states.len() != breakpoints.len() + 1 {
            return Err(Error::Config(format!(
                "piecewise profile needs {} states for {} breakpoints, got {}",
                breakpoints.len() + 1,
                breakpoints.len(),
                states.len()
            )));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::Config("breakpoints must be finite and strictly increasing".into()));
        }
        Ok(InitialProfile::Piecewise { breakpoints, states })
    }

    pub fn eval(&self, x: f64) -> Result<PrimitiveState> {
        match self {
            InitialProfile::Riemann { left, right, x_jump } => {
                Ok(if x < *x_jump { *left } else { *right })
            }
            InitialProfile::Piecewise { breakpoints, states } => {
                Ok(states[breakpoints.partition_point(|b| *b <= x)])
            }
            InitialProfile::Smooth { kind } => match kind {
                SmoothKind::DensityPulse => {
                    PrimitiveState::new(1.0 + 0.5 * (-(x / 0.2).powi(2)).exp(), 0.0, 1.0)
                }
                SmoothKind::VelocityRamp => {
                    PrimitiveState::new(1.0, -0.3 * (x / 0.05).tanh(), 1.0)
                }
            },
        }
    }
}

/// Waves crossing one time level, counted and summed by kind. alpha/beta
/// are 1-/3-shock strengths, mu/eta the rarefaction strengths, delta_abs
/// the contact entropy jumps, and delta_alpha/delta_beta the entropy jumps
/// the shocks themselves produce.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct WaveCensus {
    pub alpha_count: usize,
    pub alpha_sum: f64,
    pub delta_alpha_sum: f64,
    pub beta_count: usize,
    pub beta_sum: f64,
    pub delta_beta_sum: f64,
    pub mu_count: usize,
    pub mu_sum: f64,
    pub eta_count: usize,
    pub eta_sum: f64,
    pub contact_count: usize,
    pub delta_abs_sum: f64,
}

impl WaveCensus {
    fn absorb(&mut self, eos: &EosParams, fan: &WaveFan) -> Result<()> {
        if fan.eps1 < 0.0 {
            self.alpha_count += 1;
            self.alpha_sum += -fan.eps1;
            self.delta_alpha_sum += sigma_jump(eos, fan.sigma1)?;
        } else if fan.eps1 > 0.0 {
            self.mu_count += 1;
            self.mu_sum += fan.eps1;
        }
        if fan.eps3 < 0.0 {
            self.beta_count += 1;
            self.beta_sum += -fan.eps3;
            self.delta_beta_sum += sigma_jump(eos, fan.sigma3)?;
        } else if fan.eps3 > 0.0 {
            self.eta_count += 1;
            self.eta_sum += fan.eps3;
        }
        if fan.eps2 != 0.0 {
            self.contact_count += 1;
            self.delta_abs_sum += fan.eps2.abs();
        }
        Ok(())
    }
}

/// Constants of the run's compact set, fixed by the initial data. N bounds
/// the (r, s) distance between any two states ever produced; the box of
/// half-width 2N around the left limit state contains every cell; 4N bounds
/// any single wave strength, which sizes C0 (worst shock-curve slope, at
/// least 1/2), M_bar (delta_w <= M_bar w), M = M_bar / (1 - C0), and the
/// L-weight M0 = 1/(2M), taken as 1 when constant data makes M vanish.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RunConstants {
    /// V: (r, s) variation of the sampled initial data; the additive
    /// constant in F and L.
    pub var_rs_init: f64,
    /// Initial variation including the entropy variable.
    pub var_full_init: f64,
    pub n_ball: f64,
    pub omega_center: (f64, f64),
    pub omega_radius: f64,
    pub omega_bar: f64,
    pub sigma_bar: f64,
    pub c0: f64,
    /// True when the 1/2 floor in C0 exceeds the actual worst slope.
    pub c0_floor_binds: bool,
    pub m_bar: f64,
    pub m_const: f64,
    pub m0: f64,
}

impl RunConstants {
    pub fn derive(eos: &EosParams, var_rs_init: f64, var_full_init: f64, left_limit: (f64, f64)) -> Result<Self> {
        let n_ball = 8.0 * var_rs_init;
        let set = compact_set_constants(eos, 4.0 * n_ball)?;
        let m0 = if set.m_const > 0.0 { 1.0 / (2.0 * set.m_const) } else { 1.0 };
        Ok(RunConstants {
            var_rs_init,
            var_full_init,
            n_ball,
            omega_center: left_limit,
            omega_radius: 2.0 * n_ball,
            omega_bar: set.omega_bar,
            sigma_bar: set.sigma_bar,
            c0: set.c0,
            c0_floor_binds: set.c0_floor_binds,
            m_bar: set.m_bar,
            m_const: set.m_const,
            m0,
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LevelDiagnostics {
    pub level: usize,
    pub time: f64,
    pub f_value: f64,
    pub l_value: f64,
    /// L with the contact term subtracted instead of added; logged only.
    pub l_display: f64,
    pub var_rs: f64,
    pub var_lnrho: f64,
    pub var_rapidity: f64,
    pub var_sigma: f64,
    pub census: WaveCensus,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunDiagnostics {
    pub constants: RunConstants,
    pub levels: Vec<LevelDiagnostics>,
}

pub fn functional_f(census: &WaveCensus, v_init: f64) -> f64 {
    census.alpha_sum + census.beta_sum + v_init
}

pub fn functional_l(census: &WaveCensus, constants: &RunConstants) -> f64 {
    census.alpha_sum - constants.m0 * census.delta_alpha_sum + census.beta_sum
        - constants.m0 * census.delta_beta_sum
        + constants.m0 * census.delta_abs_sum
        + constants.var_rs_init
}

pub fn functional_l_display(census: &WaveCensus, constants: &RunConstants) -> f64 {
    functional_l(census, constants) - 2.0 * constants.m0 * census.delta_abs_sum
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    R,
    S,
    LnRho,
    Rapidity,
    Sigma,
}

/// Total variation of a field over the level: sum of |cell differences|.
pub fn variation(eos: &EosParams, sol: &GridSolution, field: Field) -> Result<f64> {
    let mut prev: Option<f64> = None;
    let mut tv = 0.0;
    for cell in &sol.cells {
        let value = match field {
            Field::R => cell.to_invariants(eos)?.r,
            Field::S => cell.to_invariants(eos)?.s,
            Field::LnRho => cell.rho.ln(),
            Field::Rapidity => cell.v.atanh(),
            Field::Sigma => cell.to_invariants(eos)?.sigma,
        };
        if let Some(p) = prev {
            tv += (value - p).abs();
        }
        prev = Some(value);
    }
    Ok(tv)
}

/// Staggered sampling of the initial data: cell k (k odd) takes the profile
/// value at (k + theta0) dx.
pub fn init(profile: &InitialProfile, grid: &GridConfig, theta0: f64) -> Result<GridSolution> {
    let k_lo = {
        let k = (grid.x_min / grid.dx).ceil() as i64;
        if k.rem_euclid(2) == 1 { k } else { k + 1 }
    };
    let k_hi = {
        let k = (grid.x_max / grid.dx).floor() as i64;
        if k.rem_euclid(2) == 1 { k } else { k - 1 }
    };
    if k_hi < k_lo + 2 {
        return Err(Error::Config(format!(
            "domain [{}, {}] holds fewer than two cells of width {}",
            grid.x_min, grid.x_max, grid.dx
        )));
    }
    let mut cells = Vec::with_capacity(((k_hi - k_lo) / 2 + 1) as usize);
    let mut k = k_lo;
    while k <= k_hi {
        cells.push(profile.eval((k as f64 + theta0) * grid.dx)?);
        k += 2;
    }
    Ok(GridSolution { level: 0, k_left: k_lo, dx: grid.dx, cells })
}

/// Solve every interface problem of the level, ghost-extending each end by
/// one copy (constant extrapolation). Returns one fan per interface of the
/// extended lattice plus the level's wave census; the ghost interfaces join
/// identical states and contribute nothing.
fn sweep(eos: &EosParams, sol: &GridSolution, grid: &GridConfig) -> Result<(Vec<WaveFan>, WaveCensus)> {
    let first = sol.cells[0];
    let last = *sol.cells.last().expect("nonempty grid");
    let mut census = WaveCensus::default();
    let mut fans = Vec::with_capacity(sol.cells.len() + 1);
    let ratio = grid.dx / grid.dt;
    let mut max_speed: f64 = 0.0;
    let mut left = &first;
    for right in sol.cells.iter().chain(std::iter::once(&last)) {
        let (l1, _, l3) = right.char_speeds(eos);
        max_speed = max_speed.max(l1.abs()).max(l3.abs());
        let fan = riemann::solve(eos, left, right)?;
        census.absorb(eos, &fan)?;
        fans.push(fan);
        left = right;
    }
    if max_speed >= ratio {
        return Err(Error::Monitor {
            level: sol.level,
            quantity: "CFL",
            value: max_speed,
            bound: ratio,
        });
    }
    Ok((fans, census))
}

fn advance(
    eos: &EosParams,
    sol: &GridSolution,
    fans: &[WaveFan],
    theta: f64,
    grid: &GridConfig,
) -> Result<GridSolution> {
    let xi = theta * grid.dx / grid.dt;
    let mut cells = Vec::with_capacity(fans.len());
    let mut k = sol.k_left - 1;
    let mut k_left = None;
    for fan in fans {
        let x = k as f64 * grid.dx;
        if x >= grid.x_min && x <= grid.x_max {
            cells.push(fan.sample(eos, xi)?);
            k_left.get_or_insert(k);
        }
        k += 2;
    }
    let k_left = k_left.expect("domain holds at least one cell");
    Ok(GridSolution { level: sol.level + 1, k_left, dx: sol.dx, cells })
}

/// One random-choice step: each new cell (offset half a cell from the old
/// lattice) takes the state of its interface fan at ray theta dx / dt.
pub fn step(
    eos: &EosParams,
    sol: &GridSolution,
    theta: f64,
    grid: &GridConfig,
) -> Result<GridSolution> {
    let (fans, _) = sweep(eos, sol, grid)?;
    advance(eos, sol, &fans, theta, grid)
}

struct LevelMeasures {
    var_r: f64,
    var_s: f64,
    var_lnrho: f64,
    var_rapidity: f64,
    var_sigma: f64,
    r_lo: f64,
    r_hi: f64,
    s_lo: f64,
    s_hi: f64,
}

fn measure(eos: &EosParams, sol: &GridSolution) -> Result<LevelMeasures> {
    let mut m = LevelMeasures {
        var_r: 0.0,
        var_s: 0.0,
        var_lnrho: 0.0,
        var_rapidity: 0.0,
        var_sigma: 0.0,
        r_lo: f64::INFINITY,
        r_hi: f64::NEG_INFINITY,
        s_lo: f64::INFINITY,
        s_hi: f64::NEG_INFINITY,
    };
    let mut prev: Option<(f64, f64, f64, f64, f64)> = None;
    for cell in &sol.cells {
        let inv = cell.to_invariants(eos)?;
        let lnrho = cell.rho.ln();
        let w = cell.v.atanh();
        m.r_lo = m.r_lo.min(inv.r);
        m.r_hi = m.r_hi.max(inv.r);
        m.s_lo = m.s_lo.min(inv.s);
        m.s_hi = m.s_hi.max(inv.s);
        if let Some((r, s, lr, pw, sg)) = prev {
            m.var_r += (inv.r - r).abs();
            m.var_s += (inv.s - s).abs();
            m.var_lnrho += (lnrho - lr).abs();
            m.var_rapidity += (w - pw).abs();
            m.var_sigma += (inv.sigma - sg).abs();
        }
        prev = Some((inv.r, inv.s, lnrho, w, inv.sigma));
    }
    Ok(m)
}

/// Run the scheme to t_end, emitting every level (including the initial and
/// final ones) to the observer together with its diagnostics. Monitors
/// abort the run with a structured error naming the offending level.
pub fn run<F>(
    eos: &EosParams,
    profile: &InitialProfile,
    grid: &GridConfig,
    seq: &mut SamplingSequence,
    mut observe: F,
) -> Result<(GridSolution, RunDiagnostics)>
where
    F: FnMut(&GridSolution, &LevelDiagnostics) -> Result<()>,
{
    let theta0 = seq.next_theta();
    let mut sol = init(profile, grid, theta0)?;
    let first_cell = sol.cells[0];
    let last_cell = *sol.cells.last().expect("nonempty grid");

    let init_meas = measure(eos, &sol)?;
    let var_rs_init = init_meas.var_r + init_meas.var_s;
    let var_full_init = var_rs_init + init_meas.var_sigma;
    let left_inv = first_cell.to_invariants(eos)?;
    let constants = RunConstants::derive(eos, var_rs_init, var_full_init, (left_inv.r, left_inv.s))?;

    let n_steps = ((grid.t_end / grid.dt) - 1e-12).ceil().max(0.0) as usize;
    let mut levels = Vec::with_capacity(n_steps + 1);
    let mut slack = 0.0;
    let mut prev_fl: Option<(f64, f64)> = None;
    let mut l0 = 0.0;

    loop {
        let (fans, census) = sweep(eos, &sol, grid)?;
        let meas = measure(eos, &sol)?;
        let f_value = functional_f(&census, constants.var_rs_init);
        let l_value = functional_l(&census, &constants);
        if sol.level == 0 {
            slack = 1e-12 * f_value;
            l0 = l_value;
        }
        let diag = LevelDiagnostics {
            level: sol.level,
            time: sol.level as f64 * grid.dt,
            f_value,
            l_value,
            l_display: functional_l_display(&census, &constants),
            var_rs: meas.var_r + meas.var_s,
            var_lnrho: meas.var_lnrho,
            var_rapidity: meas.var_rapidity,
            var_sigma: meas.var_sigma,
            census,
        };

        // Boundary light cone: edge cells must still be the initial edge
        // states, or a wave has reached the domain boundary.
        if sol.cells[0] != first_cell || *sol.cells.last().unwrap() != last_cell {
            return Err(Error::Monitor {
                level: sol.level,
                quantity: "boundary",
                value: 1.0,
                bound: 0.0,
            });
        }
        if let Some((pf, pl)) = prev_fl {
            if diag.f_value > pf + slack {
                return Err(Error::Monitor {
                    level: sol.level,
                    quantity: "F",
                    value: diag.f_value,
                    bound: pf + slack,
                });
            }
            if diag.l_value > pl + slack {
                return Err(Error::Monitor {
                    level: sol.level,
                    quantity: "L",
                    value: diag.l_value,
                    bound: pl + slack,
                });
            }
        }
        if diag.var_rs > 4.0 * diag.f_value + slack {
            return Err(Error::Monitor {
                level: sol.level,
                quantity: "var_rs vs 4F",
                value: diag.var_rs,
                bound: 4.0 * diag.f_value + slack,
            });
        }
        let a = eos.sound_speed();
        let a2 = eos.a_squared();
        let theorem_checks = [
            ("var_lnrho", diag.var_lnrho, 16.0 * (1.0 + a2) / a * constants.var_rs_init),
            ("var_rapidity", diag.var_rapidity, 8.0 * constants.var_rs_init),
            ("var_sigma", diag.var_sigma, 2.0 * (4.0 + constants.m_const) * l0),
        ];
        for (name, value, bound) in theorem_checks {
            if value > bound + 1e-12 * (1.0 + bound) {
                return Err(Error::Monitor { level: sol.level, quantity: name, value, bound });
            }
        }
        let box_slack = 1e-12 * (1.0 + constants.omega_radius);
        let (rc, sc) = constants.omega_center;
        let box_excess = (rc - meas.r_lo)
            .max(meas.r_hi - rc)
            .max(sc - meas.s_lo)
            .max(meas.s_hi - sc);
        if box_excess > constants.omega_radius + box_slack {
            return Err(Error::Monitor {
                level: sol.level,
                quantity: "omega box",
                value: box_excess,
                bound: constants.omega_radius,
            });
        }
        // L summands must keep at least half of each shock strength.
        let kept = diag.census.alpha_sum + diag.census.beta_sum
            - constants.m0 * (diag.census.delta_alpha_sum + diag.census.delta_beta_sum);
        if kept < 0.5 * (diag.census.alpha_sum + diag.census.beta_sum) - slack {
            return Err(Error::Monitor {
                level: sol.level,
                quantity: "L positivity",
                value: kept,
                bound: 0.5 * (diag.census.alpha_sum + diag.census.beta_sum),
            });
        }

        observe(&sol, &diag)?;
        levels.push(diag);
        prev_fl = Some((diag.f_value, diag.l_value));
        if sol.level >= n_steps {
            break;
        }
        let theta = seq.next_theta();
        sol = advance(eos, &sol, &fans, theta, grid)?;
    }

    Ok((sol, RunDiagnostics { constants, levels }))
}
