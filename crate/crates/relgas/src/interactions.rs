//! Colliding-wave audits. Two adjacent Riemann fans <U_L, U_M> and
//! <U_M, U_R> interact when their waves meet; the outcome is the single fan
//! <U_L, U_R>. This module re-solves every such diamond and checks the
//! bookkeeping that the difference scheme's functionals rely on: shock
//! strength in one family can only grow at the expense of the other family
//! with exchange rate c0 < 1, and the entropy carried by contacts and shocks
//! can only grow in proportion to the net loss -M(A+B) of shock strength.
//! A deterministic suite covers all sixteen incoming wave topologies and a
//! seeded sweep certifies random interactions inside a compact (r, s) box.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::eos::EosParams;
use crate::error::{Error, Result};
use crate::riemann::{self, WaveFan};
use crate::states::{InvariantState, PrimitiveState};
use crate::wavecurves::{
    compact_set_constants, rarefaction_curve, shock_curve, shock_rs_displacement, sigma_jump,
    CompactSetConstants, Family,
};

/// Waves weaker than this are treated as absent when naming a topology.
pub const ABSENT_STRENGTH: f64 = 1e-13;

/// Verdict tolerances are this times the report's strength scale.
pub const VERDICT_TOLERANCE: f64 = 1e-10;

/// Strengths of one resolved fan together with the entropy jumps its two
/// shocks carry. Rarefactions carry none, so delta_alpha (delta_beta) is
/// zero whenever alpha (beta) is.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FanBreakdown {
    pub alpha: f64,
    pub mu: f64,
    pub beta: f64,
    pub eta: f64,
    /// Signed Sigma jump at the contact.
    pub delta: f64,
    pub delta_alpha: f64,
    pub delta_beta: f64,
}

pub fn breakdown(eos: &EosParams, fan: &WaveFan) -> Result<FanBreakdown> {
    let s = fan.wave_strengths();
    Ok(FanBreakdown {
        alpha: s.alpha,
        mu: s.mu,
        beta: s.beta,
        eta: s.eta,
        delta: s.contact,
        delta_alpha: if s.alpha > 0.0 { sigma_jump(eos, fan.sigma1)? } else { 0.0 },
        delta_beta: if s.beta > 0.0 { sigma_jump(eos, fan.sigma3)? } else { 0.0 },
    })
}

/// One diamond <U_L, U_M> + <U_M, U_R> -> <U_L, U_R>, fully booked.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InteractionReport {
    pub u_l: PrimitiveState,
    pub u_m: PrimitiveState,
    pub u_r: PrimitiveState,
    pub left: FanBreakdown,
    pub right: FanBreakdown,
    pub merged: FanBreakdown,
    /// A: change of total 1-shock strength through the interaction.
    pub alpha_gain: f64,
    /// B: change of total 3-shock strength.
    pub beta_gain: f64,
    /// Growth of contact entropy not paid for by shock entropy jumps:
    /// |delta'| - |delta_1| - |delta_2| plus the drop in delta_alpha and
    /// delta_beta sums.
    pub entropy_combination: f64,
    /// Residual of the exact telescoping identity
    /// delta_alpha' + delta' - delta_beta' = sum of the incoming triples.
    pub net_entropy_mismatch: f64,
    /// ((r_lo, r_hi), (s_lo, s_hi)) over all nine states of the diamond.
    pub hull: ((f64, f64), (f64, f64)),
    /// Constants of the hull box; verdicts below use these.
    pub constants: CompactSetConstants,
    /// 1 + total strength content; verdict tolerances scale with it.
    pub strength_scale: f64,
    pub interaction_ok: bool,
    pub entropy_ok: bool,
}

#[derive(Debug, Clone, Copy)]
struct HullBox {
    r_lo: f64,
    r_hi: f64,
    s_lo: f64,
    s_hi: f64,
}

impl HullBox {
    fn empty() -> Self {
        HullBox { r_lo: f64::INFINITY, r_hi: f64::NEG_INFINITY, s_lo: f64::INFINITY, s_hi: f64::NEG_INFINITY }
    }

    fn add(&mut self, inv: &InvariantState) {
        self.r_lo = self.r_lo.min(inv.r);
        self.r_hi = self.r_hi.max(inv.r);
        self.s_lo = self.s_lo.min(inv.s);
        self.s_hi = self.s_hi.max(inv.s);
    }

    fn merge(&mut self, other: &((f64, f64), (f64, f64))) {
        self.r_lo = self.r_lo.min(other.0 .0);
        self.r_hi = self.r_hi.max(other.0 .1);
        self.s_lo = self.s_lo.min(other.1 .0);
        self.s_hi = self.s_hi.max(other.1 .1);
    }

    fn max_width(&self) -> f64 {
        (self.r_hi - self.r_lo).max(self.s_hi - self.s_lo).max(0.0)
    }

    fn as_tuple(&self) -> ((f64, f64), (f64, f64)) {
        ((self.r_lo, self.r_hi), (self.s_lo, self.s_hi))
    }
}

/// Solves the three Riemann problems of one diamond and assembles the
/// strength and entropy bookkeeping. The telescoping identity
/// net_entropy_mismatch is zero in exact arithmetic because each side equals
/// Sigma_R - Sigma_L.
pub fn interact(
    eos: &EosParams,
    u_l: &PrimitiveState,
    u_m: &PrimitiveState,
    u_r: &PrimitiveState,
) -> Result<InteractionReport> {
    let fan_left = riemann::solve(eos, u_l, u_m)?;
    let fan_right = riemann::solve(eos, u_m, u_r)?;
    let fan_merged = riemann::solve(eos, u_l, u_r)?;
    let left = breakdown(eos, &fan_left)?;
    let right = breakdown(eos, &fan_right)?;
    let merged = breakdown(eos, &fan_merged)?;

    let alpha_gain = merged.alpha - left.alpha - right.alpha;
    let beta_gain = merged.beta - left.beta - right.beta;
    let entropy_combination = merged.delta.abs() - left.delta.abs() - right.delta.abs()
        + (left.delta_alpha + right.delta_alpha - merged.delta_alpha)
        + (left.delta_beta + right.delta_beta - merged.delta_beta);
    let net = |f: &FanBreakdown| f.delta_alpha + f.delta - f.delta_beta;
    let net_entropy_mismatch = net(&merged) - net(&left) - net(&right);

    let mut hull = HullBox::empty();
    for st in [
        u_l,
        u_m,
        u_r,
        &fan_left.mid_left,
        &fan_left.mid_right,
        &fan_right.mid_left,
        &fan_right.mid_right,
        &fan_merged.mid_left,
        &fan_merged.mid_right,
    ] {
        hull.add(&st.to_invariants(eos)?);
    }
    let constants = compact_set_constants(eos, hull.max_width())?;

    let strength_scale = 1.0
        + [&left, &right, &merged]
            .iter()
            .map(|f| f.alpha + f.mu + f.beta + f.eta + f.delta.abs())
            .sum::<f64>();

    let mut report = InteractionReport {
        u_l: *u_l,
        u_m: *u_m,
        u_r: *u_r,
        left,
        right,
        merged,
        alpha_gain,
        beta_gain,
        entropy_combination,
        net_entropy_mismatch,
        hull: hull.as_tuple(),
        constants,
        strength_scale,
        interaction_ok: false,
        entropy_ok: false,
    };
    report.interaction_ok = check_interaction_estimate(&report, constants.c0);
    report.entropy_ok = check_entropy_estimate(&report, constants.m_const);
    Ok(report)
}

/// Smallest violation over the three admissible outcomes: both families
/// lose; the 1-family loss xi = -A pays for a 3-family gain B <= c0 xi; or
/// the mirror of that. Nonpositive means the estimate holds exactly.
pub fn interaction_excess(report: &InteractionReport, c0: f64) -> f64 {
    let a = report.alpha_gain;
    let b = report.beta_gain;
    let both_lose = a.max(b);
    let alpha_pays = a.max(b + c0 * a);
    let beta_pays = b.max(a + c0 * b);
    both_lose.min(alpha_pays).min(beta_pays)
}

pub fn check_interaction_estimate(report: &InteractionReport, c0: f64) -> bool {
    interaction_excess(report, c0) <= VERDICT_TOLERANCE * report.strength_scale
}

/// Violation of the entropy bound: positive when the combination exceeds
/// -m (A + B).
pub fn entropy_excess(report: &InteractionReport, m: f64) -> f64 {
    report.entropy_combination + m * (report.alpha_gain + report.beta_gain)
}

pub fn check_entropy_estimate(report: &InteractionReport, m: f64) -> bool {
    entropy_excess(report, m) <= VERDICT_TOLERANCE * report.strength_scale
}

/// Two characters per fan, 1-wave then 3-wave: S, R, or '-' when the
/// strength is below ABSENT_STRENGTH. Contacts do not enter the name.
pub fn fan_code(fan: &FanBreakdown) -> String {
    let one = if fan.alpha > ABSENT_STRENGTH {
        'S'
    } else if fan.mu > ABSENT_STRENGTH {
        'R'
    } else {
        '-'
    };
    let three = if fan.beta > ABSENT_STRENGTH {
        'S'
    } else if fan.eta > ABSENT_STRENGTH {
        'R'
    } else {
        '-'
    };
    format!("{one}{three}")
}

pub fn topology(report: &InteractionReport) -> String {
    format!("{}+{}", fan_code(&report.left), fan_code(&report.right))
}

#[derive(Debug, Clone, Copy)]
enum BuiltWave {
    Shock(Family, f64),
    Rarefaction(Family, f64),
}

impl BuiltWave {
    fn code(&self) -> String {
        match self {
            BuiltWave::Shock(Family::One, _) => "S-".into(),
            BuiltWave::Shock(_, _) => "-S".into(),
            BuiltWave::Rarefaction(Family::One, _) => "R-".into(),
            BuiltWave::Rarefaction(_, _) => "-R".into(),
        }
    }
}

/// State left of `m` such that <result, m> is the given single wave.
fn state_left_of(eos: &EosParams, m: &PrimitiveState, wave: BuiltWave) -> Result<PrimitiveState> {
    let b = eos.invariant_coefficient();
    match wave {
        // A 3-shock seen from its upstream right state: downstream is left.
        BuiltWave::Shock(Family::Three, sigma) => Ok(shock_curve(eos, m, sigma, Family::Three)?.downstream),
        // A 1-shock with downstream m: walk the displacement backwards.
        BuiltWave::Shock(family, sigma) => {
            let (dr, ds) = shock_rs_displacement(eos, sigma, family);
            let inv = m.to_invariants(eos)?;
            InvariantState {
                r: inv.r - dr,
                s: inv.s - ds,
                sigma: inv.sigma - sigma_jump(eos, sigma)?,
            }
            .to_primitive(eos)
        }
        BuiltWave::Rarefaction(family, eps) => {
            let sign = if matches!(family, Family::One) { 1.0 } else { -1.0 };
            let w = m.v.atanh() - 0.5 * eps;
            PrimitiveState::new(m.rho * (sign * eps / (2.0 * b)).exp(), w.tanh(), m.entropy)
        }
    }
}

/// State right of `m` such that <m, result> is the given single wave.
fn state_right_of(eos: &EosParams, m: &PrimitiveState, wave: BuiltWave) -> Result<PrimitiveState> {
    match wave {
        BuiltWave::Shock(Family::One, sigma) => Ok(shock_curve(eos, m, sigma, Family::One)?.downstream),
        // A 3-shock with downstream m: its upstream right state sits one
        // displacement back.
        BuiltWave::Shock(family, sigma) => {
            let (dr, ds) = shock_rs_displacement(eos, sigma, family);
            let inv = m.to_invariants(eos)?;
            InvariantState {
                r: inv.r - dr,
                s: inv.s - ds,
                sigma: inv.sigma - sigma_jump(eos, sigma)?,
            }
            .to_primitive(eos)
        }
        BuiltWave::Rarefaction(family, eps) => Ok(rarefaction_curve(eos, m, eps, family)?.downstream),
    }
}

/// All sixteen incoming topologies: each side of the diamond carries one
/// shock or rarefaction of either acoustic family. Returns (expected
/// topology name, report) pairs built around a fixed middle state.
pub fn incoming_topology_suite(eos: &EosParams) -> Result<Vec<(String, InteractionReport)>> {
    let m = PrimitiveState::new(1.0, 0.1, 1.2)?;
    let menu = [
        BuiltWave::Shock(Family::One, 0.9),
        BuiltWave::Rarefaction(Family::One, 0.7),
        BuiltWave::Shock(Family::Three, 0.8),
        BuiltWave::Rarefaction(Family::Three, 0.6),
    ];
    let mut out = Vec::with_capacity(16);
    for wl in menu {
        for wr in menu {
            let u_l = state_left_of(eos, &m, wl)?;
            let u_r = state_right_of(eos, &m, wr)?;
            let report = interact(eos, &u_l, &m, &u_r)?;
            out.push((format!("{}+{}", wl.code(), wr.code()), report));
        }
    }
    Ok(out)
}

/// Aggregate view of one randomized certification sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepStatistics {
    pub count: usize,
    pub seed: u64,
    pub sigma_max: f64,
    pub requested_box: ((f64, f64), (f64, f64)),
    /// Hull of every state that actually appeared, outgoing middles included.
    pub realized_hull: ((f64, f64), (f64, f64)),
    /// Constants of the realized hull; the sweep verdicts use these.
    pub constants: CompactSetConstants,
    pub topology_counts: BTreeMap<String, usize>,
    pub interaction_violations: usize,
    pub entropy_violations: usize,
    /// Smallest tol - excess over the sweep; nonnegative means a clean pass.
    pub min_interaction_margin: f64,
    pub min_entropy_margin: f64,
    pub worst_net_entropy_mismatch: f64,
    pub rejected_draws: usize,
}

/// Seeded sweep of random diamonds whose incoming states live in the given
/// (r, s) box and whose incoming waves stay below sigma_max in curve
/// parameter. Each sample draws from its own ChaCha stream, so results do
/// not depend on evaluation order and the whole sweep is reproducible from
/// the seed. Verdicts are evaluated twice: per report with its own hull
/// constants, and collectively with the constants of the realized hull.
pub fn random_sweep(
    eos: &EosParams,
    r_bounds: (f64, f64),
    s_bounds: (f64, f64),
    sigma_max: f64,
    count: usize,
    seed: u64,
) -> Result<(SweepStatistics, Vec<InteractionReport>)> {
    if !(r_bounds.0 < r_bounds.1) || !r_bounds.0.is_finite() || !r_bounds.1.is_finite() {
        return Err(Error::Config(format!("empty r bounds {:?}", r_bounds)));
    }
    if !(s_bounds.0 < s_bounds.1) || !s_bounds.0.is_finite() || !s_bounds.1.is_finite() {
        return Err(Error::Config(format!("empty s bounds {:?}", s_bounds)));
    }
    if !(sigma_max > 0.0) || !sigma_max.is_finite() {
        return Err(Error::Domain { what: "sigma_max", value: sigma_max });
    }

    let b = eos.invariant_coefficient();
    // Half-width of the (r, s) offsets between neighbors; keeps most draws
    // below sigma_max so rejection stays cheap.
    let h = b * sigma_max;
    // Samples run in parallel; each index owns a ChaCha stream and the
    // results are collected in index order, so the thread schedule cannot
    // leak into the output.
    let outcomes = (0..count)
        .into_par_iter()
        .map(|i| -> Result<(InteractionReport, usize)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut rejected = 0usize;
            let report = loop {
                let r_m = rng.gen_range(r_bounds.0..r_bounds.1);
                let s_m = rng.gen_range(s_bounds.0..s_bounds.1);
                let sig_m = rng.gen_range(0.2..0.8);
                let neighbor = |rng: &mut ChaCha8Rng| {
                    (
                        r_m + rng.gen_range(-h..h),
                        s_m + rng.gen_range(-h..h),
                        sig_m + rng.gen_range(-0.15..0.15),
                    )
                };
                let (r_l, s_l, sig_l) = neighbor(&mut rng);
                let (r_r, s_r, sig_r) = neighbor(&mut rng);
                let inside = |r: f64, s: f64| {
                    r_bounds.0 <= r && r <= r_bounds.1 && s_bounds.0 <= s && s <= s_bounds.1
                };
                if !inside(r_l, s_l) || !inside(r_r, s_r) {
                    rejected += 1;
                    continue;
                }
                let u_m = InvariantState { r: r_m, s: s_m, sigma: sig_m }.to_primitive(eos)?;
                let u_l = InvariantState { r: r_l, s: s_l, sigma: sig_l }.to_primitive(eos)?;
                let u_r = InvariantState { r: r_r, s: s_r, sigma: sig_r }.to_primitive(eos)?;
                let report = interact(eos, &u_l, &u_m, &u_r)?;
                let two_b = 2.0 * b;
                let incoming_sigma = [&report.left, &report.right]
                    .iter()
                    .map(|f| f.alpha.max(f.mu).max(f.beta).max(f.eta) / two_b)
                    .fold(0.0_f64, f64::max);
                if incoming_sigma > sigma_max {
                    rejected += 1;
                    continue;
                }
                break report;
            };
            Ok((report, rejected))
        })
        .collect::<Result<Vec<_>>>()?;
    let rejected: usize = outcomes.iter().map(|(_, n)| n).sum();
    let reports: Vec<InteractionReport> = outcomes.into_iter().map(|(rep, _)| rep).collect();

    let mut hull = HullBox::empty();
    for rep in &reports {
        hull.merge(&rep.hull);
    }
    if reports.is_empty() {
        hull.merge(&(r_bounds, s_bounds));
    }
    let constants = compact_set_constants(eos, hull.max_width())?;

    let mut topology_counts = BTreeMap::new();
    let mut interaction_violations = 0usize;
    let mut entropy_violations = 0usize;
    let mut min_interaction_margin = f64::INFINITY;
    let mut min_entropy_margin = f64::INFINITY;
    let mut worst_net = 0.0_f64;
    for rep in &reports {
        *topology_counts.entry(topology(rep)).or_insert(0) += 1;
        let tol = VERDICT_TOLERANCE * rep.strength_scale;
        let ie = interaction_excess(rep, constants.c0);
        let ee = entropy_excess(rep, constants.m_const);
        if ie > tol {
            interaction_violations += 1;
        }
        if ee > tol {
            entropy_violations += 1;
        }
        min_interaction_margin = min_interaction_margin.min(tol - ie);
        min_entropy_margin = min_entropy_margin.min(tol - ee);
        worst_net = worst_net.max(rep.net_entropy_mismatch.abs());
    }
    if reports.is_empty() {
        min_interaction_margin = 0.0;
        min_entropy_margin = 0.0;
    }

    let stats = SweepStatistics {
        count,
        seed,
        sigma_max,
        requested_box: (r_bounds, s_bounds),
        realized_hull: hull.as_tuple(),
        constants,
        topology_counts,
        interaction_violations,
        entropy_violations,
        min_interaction_margin,
        min_entropy_margin,
        worst_net_entropy_mismatch: worst_net,
        rejected_draws: rejected,
    };
    Ok((stats, reports))
}
