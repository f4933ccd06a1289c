//! Exact elementary waves: shock branches, rarefaction branches, contacts.
//!
//! A shock of either acoustic family is parametrized by sigma = ln of the
//! density ratio across it (sigma > 0 is compressive). With z = e^sigma and
//! D = (1 + a^2 z)(z + a^2), the jump conditions collapse to closed forms in
//! the upstream rest frame:
//!
//!   V(sigma)  = a (z - 1) / sqrt(D)            gas speed jump,
//!   s0(sigma) = a sqrt((z + a^2) / (1 + a^2 z)) front speed,
//!   W(sigma)  = atanh(V),  1 - V^2 = z (1+a^2)^2 / D.
//!
//! These forms are never taken on faith: every emitted shock point is held
//! to a Rankine-Hugoniot residual check in the tests.
//!
//! In Riemann-invariant coordinates a forward 1-shock displaces the base
//! state by (dr, ds) = (-(b sigma + W), b sigma - W); the 3-family mirror
//! swaps the pair. ds = O(sigma^3), which is the second-order contact of the
//! shock branch with the rarefaction branch.
//!
//! The entropy variable jumps by sigma_jump(sigma), a closed form equivalent
//! to pushing the particle density through the Taub adiabat and re-reading
//! Sigma = ln(rho / n^gamma); the tests pin the two routes together.

use crate::eos::EosParams;
use crate::error::{Error, Result};
use crate::states::PrimitiveState;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    One,
    Contact,
    Three,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::One => "1",
            Family::Contact => "2",
            Family::Three => "3",
        }
    }
}

/// One point on a shock branch. `upstream` is the pre-shock side (left for
/// family One, right for family Three); the downstream density is
/// upstream.rho * e^sigma.
#[derive(Debug, Clone, Copy)]
pub struct ShockPoint {
    pub family: Family,
    pub sigma: f64,
    pub upstream: PrimitiveState,
    pub downstream: PrimitiveState,
    pub speed: f64,
    /// Particle flux through the front, n (v - speed) / sqrt(1 - v^2);
    /// equal on both sides.
    pub mass_flux: f64,
    /// Sigma jump of the closed-form law; the realized jump of `downstream`
    /// agrees with it to 1e-10.
    pub delta_sigma_jump: f64,
}

/// One point on a rarefaction branch. The transported invariant (r for
/// family One, s for family Three) increases by `strength` from upstream to
/// downstream, and the family's characteristic speed increases with it.
/// `upstream` always names the slow-edge state, the fan's left neighbor in
/// x; in a Riemann solution that is the outer state for family One but the
/// middle state for family Three.
#[derive(Debug, Clone, Copy)]
pub struct RarefactionPoint {
    pub family: Family,
    pub strength: f64,
    pub upstream: PrimitiveState,
    pub downstream: PrimitiveState,
    /// lambda_i(upstream), the slow edge of the fan.
    pub speed_upstream: f64,
    /// lambda_i(downstream), the fast edge.
    pub speed_downstream: f64,
}

/// Margins of the entropy (Lax) inequalities; both positive for a genuine
/// compressive shock. The incoming sides are fixed by the family: a 1-shock
/// has its pre-shock gas on the left, a 3-shock on the right.
#[derive(Debug, Clone, Copy)]
pub struct LaxReport {
    /// lambda_i(state left of the front) - speed.
    pub incoming_left: f64,
    /// speed - lambda_i(state right of the front).
    pub incoming_right: f64,
    pub satisfied: bool,
}

/// Relativistic velocity addition; |u|, |w| < 1 implies |result| < 1.
pub fn compose_velocity(u: f64, w: f64) -> f64 {
    (u + w) / (1.0 + u * w)
}

fn cap_d(a2: f64, z: f64) -> f64 {
    (1.0 + a2 * z) * (z + a2)
}

/// Speed of the downstream gas in the upstream rest frame.
pub fn relative_speed(eos: &EosParams, sigma: f64) -> f64 {
    let a2 = eos.a_squared();
    let z = sigma.exp();
    eos.sound_speed() * (z - 1.0) / cap_d(a2, z).sqrt()
}

/// Shock front speed in the upstream rest frame; equals a at sigma = 0 and
/// increases toward 1.
pub fn front_speed(eos: &EosParams, sigma: f64) -> f64 {
    let a2 = eos.a_squared();
    let z = sigma.exp();
    eos.sound_speed() * ((z + a2) / (1.0 + a2 * z)).sqrt()
}

/// W(sigma) = atanh(relative_speed). The log form avoids the 1 - V^2
/// cancellation once V gets close to 1.
pub fn shock_w(eos: &EosParams, sigma: f64) -> f64 {
    if sigma <= 1.0 {
        relative_speed(eos, sigma).atanh()
    } else {
        let a = eos.sound_speed();
        let a2 = eos.a_squared();
        let z = sigma.exp();
        ((cap_d(a2, z).sqrt() + a * (z - 1.0)) / (1.0 + a2)).ln() - 0.5 * sigma
    }
}

/// dW/dsigma = a (z + 1) / (2 sqrt(D)); increases from b at 0 to 1/2.
pub fn shock_w_deriv(eos: &EosParams, sigma: f64) -> f64 {
    let a2 = eos.a_squared();
    let z = sigma.exp();
    eos.sound_speed() * (z + 1.0) / (2.0 * cap_d(a2, z).sqrt())
}

/// Particle density ratio n/n_up across a shock with energy density ratio
/// rho/rho_up (the Taub adiabat in reduced form). Satisfies
/// f(x) f(1/x) = 1: exchanging the states inverts the ratio.
pub fn taub_n_ratio(eos: &EosParams, rho_ratio: f64) -> Result<f64> {
    if !(rho_ratio > 0.0) || !rho_ratio.is_finite() {
        return Err(Error::Domain { what: "rho_ratio", value: rho_ratio });
    }
    let a2 = eos.a_squared();
    Ok((rho_ratio * (rho_ratio + a2) / (1.0 + a2 * rho_ratio)).sqrt())
}

fn ln1p_c_exp(c: f64, x: f64) -> f64 {
    // ln(1 + c e^x) without overflow for large positive x.
    if x > 0.0 {
        x + c.ln() + ((-x).exp() / c).ln_1p()
    } else {
        (c * x.exp()).ln_1p()
    }
}

/// Jump of Sigma = ln A(S) across a shock of amplitude sigma >= 0.
/// Vanishes only at 0, strictly increasing and convex, with derivative
/// saturating at (2 - gamma) / 2.
pub fn sigma_jump(eos: &EosParams, sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::Domain { what: "sigma", value: sigma });
    }
    let g = eos.gamma();
    let c = g - 1.0;
    Ok((1.0 - g) * sigma + 0.5 * g * (ln1p_c_exp(c, sigma) - ln1p_c_exp(c, -sigma)))
}

/// d(sigma_jump)/dsigma = (2-gamma)(gamma-1)(e^sigma - 1)^2 / (2 D(e^sigma)),
/// evaluated in an overflow-free form.
pub fn sigma_jump_deriv(eos: &EosParams, sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::Domain { what: "sigma", value: sigma });
    }
    let g = eos.gamma();
    let a2 = eos.a_squared();
    let em = (-sigma).exp();
    let num = (1.0 - em) * (1.0 - em);
    let den = 2.0 * (em + a2) * (1.0 + a2 * em);
    Ok((2.0 - g) * (g - 1.0) * num / den)
}

/// Displacement (dr, ds) in Riemann invariants from upstream to downstream
/// along the forward shock branch, independent of the base state. The two
/// families mirror across r = s with the orientation flipped.
pub fn shock_rs_displacement(eos: &EosParams, sigma: f64, family: Family) -> (f64, f64) {
    let b = eos.invariant_coefficient();
    let w = shock_w(eos, sigma);
    let dr = -(b * sigma + w);
    let ds = b * sigma - w;
    match family {
        Family::One => (dr, ds),
        Family::Three => (-ds, -dr),
        Family::Contact => (0.0, 0.0),
    }
}

/// Invert dr = -(b sigma + W(sigma)) for sigma >= 0 given dr <= 0.
/// dr is strictly decreasing with slope in [-(b + 1/2), -2b], which yields
/// the bracket used to safeguard the Newton iteration.
pub fn shock_sigma_from_r_drop(eos: &EosParams, dr: f64) -> Result<f64> {
    if !(dr <= 0.0) {
        return Err(Error::Domain { what: "r displacement", value: dr });
    }
    if dr == 0.0 {
        return Ok(0.0);
    }
    let b = eos.invariant_coefficient();
    let mut lo = -dr / (b + 0.5);
    let mut hi = -dr / (2.0 * b);
    let mut sigma = hi;
    for _ in 0..100 {
        let f = -(b * sigma + shock_w(eos, sigma)) - dr;
        if f > 0.0 {
            lo = sigma;
        } else {
            hi = sigma;
        }
        if f.abs() <= 1e-15 * dr.abs() {
            return Ok(sigma);
        }
        let step = f / (b + shock_w_deriv(eos, sigma));
        let next = sigma + step;
        sigma = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if (hi - lo) <= 1e-16 * hi {
            return Ok(sigma);
        }
    }
    Ok(sigma)
}

/// ds/dr along the shock branch: (W' - b) / (W' + b), which rises from 0 at
/// sigma = 0 toward shock_slope_bound and never reaches it.
pub fn shock_rs_slope(eos: &EosParams, sigma: f64) -> f64 {
    let b = eos.invariant_coefficient();
    let wp = shock_w_deriv(eos, sigma);
    (wp - b) / (wp + b)
}

/// sup of |ds/dr| over the whole branch: (1 - 2b) / (1 + 2b) with
/// 2b = 2a / (1 + a^2); strictly below 1 for every admissible gamma.
pub fn shock_slope_bound(eos: &EosParams) -> f64 {
    let b2 = 2.0 * eos.invariant_coefficient();
    (1.0 - b2) / (1.0 + b2)
}

/// Constants attached to a compact (r, s) region inside which no single wave
/// can exceed strength omega_bar.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CompactSetConstants {
    /// Largest joinable wave strength inside the region.
    pub omega_bar: f64,
    /// Shock parameter matching omega_bar: sigma_bar = omega_bar / (2b).
    pub sigma_bar: f64,
    /// Reflected-wave gain factor: worst curve slope over the region, kept
    /// at least 1/2 so downstream estimates stay uniform.
    pub c0: f64,
    /// True when the slope sup fell below 1/2 and the floor is what binds.
    pub c0_floor_binds: bool,
    /// Entropy-jump rate: delta_w <= m_bar * w for every strength w in range.
    pub m_bar: f64,
    /// m_bar / (1 - c0).
    pub m_const: f64,
}

/// Derives the interaction constants for a region of wave strengths up to
/// omega_bar. The slope and jump-rate sups are both attained at the largest
/// strength because each grows monotonically along the branch.
pub fn compact_set_constants(eos: &EosParams, omega_bar: f64) -> Result<CompactSetConstants> {
    if !(omega_bar >= 0.0) || !omega_bar.is_finite() {
        return Err(Error::Domain { what: "omega_bar", value: omega_bar });
    }
    let b = eos.invariant_coefficient();
    let sigma_bar = omega_bar / (2.0 * b);
    let slope = shock_rs_slope(eos, sigma_bar);
    let c0 = slope.max(0.5);
    let m_bar = sigma_jump_deriv(eos, sigma_bar)? / b;
    Ok(CompactSetConstants {
        omega_bar,
        sigma_bar,
        c0,
        c0_floor_binds: slope < 0.5,
        m_bar,
        m_const: m_bar / (1.0 - c0),
    })
}

/// Forward shock branch of an acoustic family. The base state is upstream
/// (left for One, right for Three); sigma >= 0. The downstream entropy is
/// read back from the equation of state after pushing the particle density
/// through the Taub adiabat.
pub fn shock_curve(
    eos: &EosParams,
    base: &PrimitiveState,
    sigma: f64,
    family: Family,
) -> Result<ShockPoint> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::Domain { what: "sigma", value: sigma });
    }
    let orient = match family {
        Family::One => -1.0,
        Family::Three => 1.0,
        Family::Contact => {
            return Err(Error::Numerical {
                what: "shock_curve",
                detail: "the contact family has no shock branch".into(),
            })
        }
    };
    let s0 = front_speed(eos, sigma);
    let speed = compose_velocity(base.v, orient * s0);
    let n_up = eos.number_density(base.rho, base.entropy)?;
    let mass_flux = n_up * (base.v - speed) / (1.0 - base.v * base.v).sqrt();
    let downstream = if sigma == 0.0 {
        *base
    } else {
        let v_down = compose_velocity(base.v, orient * relative_speed(eos, sigma));
        let rho_down = base.rho * sigma.exp();
        let n_down = n_up * taub_n_ratio(eos, sigma.exp())?;
        PrimitiveState::new(rho_down, v_down, eos.entropy_from_rho_n(rho_down, n_down)?)?
    };
    Ok(ShockPoint {
        family,
        sigma,
        upstream: *base,
        downstream,
        speed,
        mass_flux,
        delta_sigma_jump: sigma_jump(eos, sigma)?,
    })
}

/// Rarefaction branch of an acoustic family, walked from the slow edge to
/// the fast edge: the transported invariant grows by `strength` >= 0,
/// entropy is carried through unchanged, and the family's characteristic
/// speed strictly increases. The walk runs left to right in x for both
/// families, so for family Three it starts at what a Riemann solution
/// calls the middle state.
pub fn rarefaction_curve(
    eos: &EosParams,
    upstream: &PrimitiveState,
    strength: f64,
    family: Family,
) -> Result<RarefactionPoint> {
    if !(strength >= 0.0) || !strength.is_finite() {
        return Err(Error::Domain { what: "strength", value: strength });
    }
    // dr or ds = strength with the other invariant fixed: the rapidity
    // moves by strength/2 and ln rho by -+ strength/(2b).
    let dlnrho = match family {
        Family::One => -strength / (2.0 * eos.invariant_coefficient()),
        Family::Three => strength / (2.0 * eos.invariant_coefficient()),
        Family::Contact => {
            return Err(Error::Numerical {
                what: "rarefaction_curve",
                detail: "the contact family has no rarefaction branch".into(),
            })
        }
    };
    let downstream = if strength == 0.0 {
        *upstream
    } else {
        PrimitiveState::new(
            upstream.rho * dlnrho.exp(),
            (upstream.v.atanh() + 0.5 * strength).tanh(),
            upstream.entropy,
        )?
    };
    let pick = |p: &PrimitiveState| {
        let (l1, _, l3) = p.char_speeds(eos);
        match family {
            Family::One => l1,
            _ => l3,
        }
    };
    Ok(RarefactionPoint {
        family,
        strength,
        upstream: *upstream,
        downstream,
        speed_upstream: pick(upstream),
        speed_downstream: pick(&downstream),
    })
}

/// Contact discontinuity: rho and v pass through, Sigma jumps by delta, and
/// the wave moves with the gas.
pub fn contact(eos: &EosParams, upstream: &PrimitiveState, delta: f64) -> Result<PrimitiveState> {
    if delta == 0.0 {
        return Ok(*upstream);
    }
    let sig = eos.sigma_of_s(upstream.entropy)?;
    PrimitiveState::new(upstream.rho, upstream.v, eos.s_of_sigma(sig + delta)?)
}

/// Entropy-inequality margins for a front of the given family moving at
/// `speed` with the given pre- and post-shock states. Characteristics of
/// the family must impinge on the front from both sides.
pub fn lax_check(
    eos: &EosParams,
    upstream: &PrimitiveState,
    downstream: &PrimitiveState,
    speed: f64,
    family: Family,
) -> LaxReport {
    let (left, right) = match family {
        Family::One => (upstream, downstream),
        _ => (downstream, upstream),
    };
    let pick = |p: &PrimitiveState| {
        let (l1, l2, l3) = p.char_speeds(eos);
        match family {
            Family::One => l1,
            Family::Contact => l2,
            Family::Three => l3,
        }
    };
    let incoming_left = pick(left) - speed;
    let incoming_right = speed - pick(right);
    LaxReport {
        incoming_left,
        incoming_right,
        satisfied: incoming_left > 0.0 && incoming_right > 0.0,
    }
}

/// Max-norm residual of speed * [U] - [F] across the shock, relative to the
/// largest participating magnitude.
pub fn rankine_hugoniot_residual(eos: &EosParams, point: &ShockPoint) -> Result<f64> {
    let (left, right) = match point.family {
        Family::One => (&point.upstream, &point.downstream),
        _ => (&point.downstream, &point.upstream),
    };
    let ul = left.to_conserved(eos)?;
    let ur = right.to_conserved(eos)?;
    let fl = left.flux(eos)?;
    let fr = right.flux(eos)?;
    let u_l = [ul.u1, ul.u2, ul.u3];
    let u_r = [ur.u1, ur.u2, ur.u3];
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for k in 0..3 {
        let res = point.speed * (u_r[k] - u_l[k]) - (fr[k] - fl[k]);
        worst = worst.max(res.abs());
        scale = scale.max(u_l[k].abs()).max(u_r[k].abs()).max(fl[k].abs()).max(fr[k].abs());
    }
    Ok(worst / scale)
}
