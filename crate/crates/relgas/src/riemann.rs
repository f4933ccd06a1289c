//! Global exact Riemann solver.
//!
//! In the (r, s) chart the forward 1-curve from the left state is the graph
//! of a function s = phi(r) (horizontal on the rarefaction side, bending
//! down along the shock branch), and the backward 3-curve from the right
//! state is r = psi(s) with the mirrored shape. Both have slopes bounded by
//! shock_slope_bound < 1, so
//!
//!   g(r) = r - psi(phi(r))
//!
//! is strictly increasing with slope at least 1 - bound^2 and crosses zero
//! exactly once: the solver is total over all admissible state pairs. The
//! middle pair (M, M') shares (r, s) and differs only in entropy across the
//! contact, which travels at the middle velocity.

use crate::eos::EosParams;
use crate::error::{Error, Result};
use crate::states::{InvariantState, PrimitiveState};
use crate::wavecurves::{
    self, shock_rs_displacement, shock_sigma_from_r_drop, shock_w, sigma_jump, Family,
};

/// Strengths below this are snapped to exactly zero and the middle states
/// rebuilt, so degenerate waves stay bitwise degenerate.
const STRENGTH_SNAP: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum WaveKind {
    Shock { speed: f64 },
    /// `head` is the edge adjacent to the outer state, `tail` the edge
    /// adjacent to the middle.
    Fan { head: f64, tail: f64 },
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct WaveFan {
    pub left: PrimitiveState,
    pub right: PrimitiveState,
    /// Middle state left of the contact.
    pub mid_left: PrimitiveState,
    /// Middle state right of the contact; same (r, s), different entropy.
    pub mid_right: PrimitiveState,
    pub wave1: WaveKind,
    pub contact_speed: f64,
    pub wave3: WaveKind,
    /// Signed strengths: eps = -2b * (ln rho jump) across each acoustic
    /// wave, negative for shocks; eps2 is the Sigma jump at the contact.
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    /// Curve parameters: ln density ratio of each acoustic wave.
    pub sigma1: f64,
    pub sigma3: f64,
    /// Mismatch in (r, s) between the middle built from the left curve and
    /// the one built from the right curve.
    pub residual: f64,
}

/// Shock (alpha, beta) and rarefaction (mu, eta) magnitudes per family.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct WaveStrengths {
    pub alpha: f64,
    pub mu: f64,
    pub beta: f64,
    pub eta: f64,
    pub contact: f64,
}

impl WaveFan {
    pub fn wave_strengths(&self) -> WaveStrengths {
        WaveStrengths {
            alpha: (-self.eps1).max(0.0),
            mu: self.eps1.max(0.0),
            beta: (-self.eps3).max(0.0),
            eta: self.eps3.max(0.0),
            contact: self.eps2,
        }
    }

    /// State at ray x/t = xi, right-continuous at every discontinuity.
    pub fn sample(&self, eos: &EosParams, xi: f64) -> Result<PrimitiveState> {
        let a = eos.sound_speed();
        let b = eos.invariant_coefficient();
        // Left of wave 1.
        match self.wave1 {
            WaveKind::Shock { speed } => {
                if xi < speed {
                    return Ok(self.left);
                }
            }
            WaveKind::Fan { head, tail } => {
                if xi < head {
                    return Ok(self.left);
                }
                if xi < tail {
                    let v = (xi + a) / (1.0 + xi * a);
                    let s_inv = self.left.to_invariants(eos)?.s;
                    let rho = ((s_inv - v.atanh()) / b).exp();
                    return PrimitiveState::new(rho, v, self.left.entropy);
                }
            }
        }
        if xi < self.contact_speed {
            return Ok(self.mid_left);
        }
        match self.wave3 {
            WaveKind::Shock { speed } => {
                if xi < speed {
                    return Ok(self.mid_right);
                }
            }
            WaveKind::Fan { head, tail } => {
                if xi < tail {
                    return Ok(self.mid_right);
                }
                if xi < head {
                    let v = (xi - a) / (1.0 - xi * a);
                    let r_inv = self.right.to_invariants(eos)?.r;
                    let rho = ((v.atanh() - r_inv) / b).exp();
                    return PrimitiveState::new(rho, v, self.right.entropy);
                }
            }
        }
        Ok(self.right)
    }
}

/// s-coordinate of the forward 1-curve from `base` at r-coordinate `r`.
fn curve_one_s(eos: &EosParams, base: &InvariantState, r: f64) -> f64 {
    let dr = r - base.r;
    if dr >= 0.0 {
        base.s
    } else {
        let sig = shock_sigma_from_r_drop(eos, dr).expect("negative displacement");
        base.s + eos.invariant_coefficient() * sig - shock_w(eos, sig)
    }
}

/// r-coordinate of the backward 3-curve from `base` at s-coordinate `s`.
fn curve_three_r(eos: &EosParams, base: &InvariantState, s: f64) -> f64 {
    let ds = s - base.s;
    if ds <= 0.0 {
        base.r
    } else {
        let sig = shock_sigma_from_r_drop(eos, -ds).expect("negative displacement");
        base.r - (eos.invariant_coefficient() * sig - shock_w(eos, sig))
    }
}

pub fn solve(eos: &EosParams, left: &PrimitiveState, right: &PrimitiveState) -> Result<WaveFan> {
    let il = left.to_invariants(eos)?;
    let ir = right.to_invariants(eos)?;
    let b = eos.invariant_coefficient();
    let g = |r: f64| r - curve_three_r(eos, &ir, curve_one_s(eos, &il, r));

    let scale = 1.0 + il.r.abs().max(il.s.abs()).max(ir.r.abs()).max(ir.s.abs());
    let tol = 1e-15 * scale;

    // Bracket the root; g grows with slope >= 1 - bound^2 > 0, so doubling
    // steps escape in logarithmic time.
    let mut lo = il.r.min(ir.r);
    let mut hi = il.r.max(ir.r);
    let mut flo = g(lo);
    let mut fhi = g(hi);
    let mut step = (hi - lo).max(1.0);
    for _ in 0..200 {
        if flo <= 0.0 {
            break;
        }
        hi = lo;
        fhi = flo;
        lo -= step;
        step *= 2.0;
        flo = g(lo);
    }
    for _ in 0..200 {
        if fhi >= 0.0 {
            break;
        }
        lo = hi;
        flo = fhi;
        hi += step;
        step *= 2.0;
        fhi = g(hi);
    }
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::Numerical {
            what: "riemann bracket",
            detail: format!("no sign change in [{lo}, {hi}]"),
        });
    }

    // Illinois variant of regula falsi; converges superlinearly and never
    // leaves the bracket.
    let mut r_m = if flo == 0.0 { lo } else { hi };
    let mut f_m = if flo == 0.0 { flo } else { fhi };
    for _ in 0..200 {
        if f_m.abs() <= tol || (hi - lo).abs() <= f64::EPSILON * scale {
            break;
        }
        let mut mid = hi - fhi * (hi - lo) / (fhi - flo);
        if !(mid > lo && mid < hi) {
            mid = 0.5 * (lo + hi);
        }
        let fm = g(mid);
        r_m = mid;
        f_m = fm;
        if fm == 0.0 {
            break;
        }
        if (fm > 0.0) == (fhi > 0.0) {
            hi = mid;
            fhi = fm;
            flo *= 0.5;
        } else {
            lo = hi;
            flo = fhi;
            hi = mid;
            fhi = fm;
        }
    }
    let s_m = curve_one_s(eos, &il, r_m);
    let mut eps1 = (r_m - il.r) - (s_m - il.s);
    let mut eps3 = (r_m - ir.r) - (s_m - ir.s);
    if f_m.abs() > 1e-11 * scale {
        let kind = |e: f64| if e < 0.0 { "shock" } else { "rarefaction" };
        return Err(Error::Numerical {
            what: "riemann iteration",
            detail: format!(
                "residual {} after 200 iterations on a 1-{} / 3-{} pattern",
                f_m.abs(),
                kind(eps1),
                kind(eps3)
            ),
        });
    }
    if eps1.abs() < STRENGTH_SNAP {
        eps1 = 0.0;
    }
    if eps3.abs() < STRENGTH_SNAP {
        eps3 = 0.0;
    }

    // Rebuild both middles from their own curve parameters so each wave is
    // exact; the two rebuilds agree to the root-finder residual.
    let sigma1 = eps1.abs() / (2.0 * b);
    let sigma3 = eps3.abs() / (2.0 * b);
    let m_left_inv = if eps1 < 0.0 {
        let (dr, ds) = shock_rs_displacement(eos, sigma1, Family::One);
        InvariantState { r: il.r + dr, s: il.s + ds, sigma: il.sigma + sigma_jump(eos, sigma1)? }
    } else {
        InvariantState { r: il.r + eps1, s: il.s, sigma: il.sigma }
    };
    let m_right_inv = if eps3 < 0.0 {
        let (dr, ds) = shock_rs_displacement(eos, sigma3, Family::Three);
        InvariantState { r: ir.r + dr, s: ir.s + ds, sigma: ir.sigma + sigma_jump(eos, sigma3)? }
    } else {
        InvariantState { r: ir.r, s: ir.s - eps3, sigma: ir.sigma }
    };
    let residual = (m_left_inv.r - m_right_inv.r)
        .abs()
        .max((m_left_inv.s - m_right_inv.s).abs());
    let mut eps2 = m_right_inv.sigma - m_left_inv.sigma;
    if eps2.abs() < STRENGTH_SNAP {
        eps2 = 0.0;
    }

    // Degenerate waves keep the outer state bitwise; rarefactions carry the
    // entropy through untouched instead of round-tripping it through Sigma.
    let mid_left = if eps1 == 0.0 {
        *left
    } else {
        let mut p = m_left_inv.to_primitive(eos)?;
        if eps1 > 0.0 {
            p.entropy = left.entropy;
        }
        p
    };
    let mid_right = if eps3 == 0.0 {
        *right
    } else {
        let mut p = m_right_inv.to_primitive(eos)?;
        if eps3 > 0.0 {
            p.entropy = right.entropy;
        }
        p
    };

    let wave1 = if eps1 < 0.0 {
        let pt = wavecurves::shock_curve(eos, left, sigma1, Family::One)?;
        WaveKind::Shock { speed: pt.speed }
    } else {
        let (l1_l, _, _) = left.char_speeds(eos);
        let (l1_m, _, _) = mid_left.char_speeds(eos);
        WaveKind::Fan { head: l1_l, tail: l1_m }
    };
    let wave3 = if eps3 < 0.0 {
        let pt = wavecurves::shock_curve(eos, right, sigma3, Family::Three)?;
        WaveKind::Shock { speed: pt.speed }
    } else {
        let (_, _, l3_r) = right.char_speeds(eos);
        let (_, _, l3_m) = mid_right.char_speeds(eos);
        WaveKind::Fan { head: l3_r, tail: l3_m }
    };

    Ok(WaveFan {
        left: *left,
        right: *right,
        mid_left,
        mid_right,
        wave1,
        contact_speed: mid_left.v,
        wave3,
        eps1,
        eps2,
        eps3,
        sigma1,
        sigma3,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavecurves::{contact, rarefaction_curve, shock_curve};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn eos() -> EosParams {
        EosParams::polytropic(4.0 / 3.0, 1.0).unwrap()
    }

    #[test]
    fn frozen_shock_tube() {
        let eos = eos();
        let l = PrimitiveState::new(1.0, 0.0, 1.5).unwrap();
        let r = PrimitiveState::new(0.125, 0.0, 1.0).unwrap();
        let fan = solve(&eos, &l, &r).unwrap();
        assert!((fan.eps1 - 0.90505680649412801).abs() < 1e-11);
        assert!((fan.eps2 - -0.14507777734083791).abs() < 1e-11);
        assert!((fan.eps3 - -0.89579239428528751).abs() < 1e-11);
        assert!((fan.mid_left.rho - 0.35166734890681742).abs() < 1e-11);
        assert!((fan.mid_left.v - 0.42397513672989826).abs() < 1e-11);
        assert!((fan.mid_left.entropy - 1.5).abs() < 1e-12);
        assert!((fan.mid_right.entropy - 1.0647666679774863).abs() < 1e-11);
        assert!(matches!(fan.wave1, WaveKind::Fan { .. }));
        match fan.wave3 {
            WaveKind::Shock { speed } => {
                assert!((speed - 0.73572062247855643).abs() < 1e-11)
            }
            _ => panic!("expected 3-shock"),
        }
        assert!(fan.residual < 1e-13);
    }

    #[test]
    fn recovers_composed_elementary_waves() {
        let eos = eos();
        let l = PrimitiveState::new(1.0, 0.2, 1.5).unwrap();
        let m = shock_curve(&eos, &l, 0.8, Family::One).unwrap().downstream;
        let m2 = contact(&eos, &m, 0.1).unwrap();
        // Walk the 3-rarefaction forward from the middle to manufacture the
        // right state, then ask the solver to take it all apart again.
        let r = rarefaction_curve(&eos, &m2, 0.5, Family::Three).unwrap().downstream;

        let fan = solve(&eos, &l, &r).unwrap();
        assert!((fan.eps1 - -0.69282032302755092).abs() < 1e-11, "eps1 = {}", fan.eps1);
        assert!((fan.eps2 - 0.1).abs() < 1e-11);
        assert!((fan.eps3 - 0.5).abs() < 1e-11);
        assert!((fan.mid_left.rho - m.rho).abs() < 1e-10 * m.rho);
        assert!((fan.mid_left.v - m.v).abs() < 1e-11);
        assert!((fan.mid_right.entropy - m2.entropy).abs() < 1e-10);
    }

    #[test]
    fn colliding_streams_are_mirror_symmetric() {
        let eos = eos();
        let l = PrimitiveState::new(1.0, 0.6, 2.0).unwrap();
        let r = PrimitiveState::new(1.0, -0.6, 2.0).unwrap();
        let fan = solve(&eos, &l, &r).unwrap();
        assert!(fan.mid_left.v.abs() < 1e-13);
        assert!((fan.eps1 - fan.eps3).abs() < 1e-13);
        assert!(fan.eps1 < 0.0 && fan.eps3 < 0.0);
        assert!(fan.eps2.abs() < 1e-13);
        match (fan.wave1, fan.wave3) {
            (WaveKind::Shock { speed: s1 }, WaveKind::Shock { speed: s3 }) => {
                assert!((s1 + s3).abs() < 1e-13)
            }
            _ => panic!("expected two shocks"),
        }
    }

    #[test]
    fn identical_sides_collapse_to_nothing() {
        let eos = eos();
        let l = PrimitiveState::new(1.7, 0.3, 1.2).unwrap();
        let fan = solve(&eos, &l, &l).unwrap();
        assert_eq!(fan.eps1, 0.0);
        assert_eq!(fan.eps3, 0.0);
        assert_eq!(fan.eps2, 0.0);
        assert_eq!(fan.mid_left, l);
        assert_eq!(fan.mid_right, l);
        for xi in [-0.9, -0.3, 0.0, 0.3, 0.9] {
            assert_eq!(fan.sample(&eos, xi).unwrap(), l);
        }
    }

    #[test]
    fn pure_single_shock_is_recovered() {
        let eos = eos();
        let b = eos.invariant_coefficient();
        let l = PrimitiveState::new(1.0, 0.1, 1.3).unwrap();
        let pt = shock_curve(&eos, &l, 1.2, Family::One).unwrap();
        let fan = solve(&eos, &l, &pt.downstream).unwrap();
        assert!((fan.eps1 + 2.0 * b * 1.2).abs() < 1e-11);
        assert_eq!(fan.eps3, 0.0);
        assert!(fan.eps2.abs() < 1e-11);
        match fan.wave1 {
            WaveKind::Shock { speed } => assert!((speed - pt.speed).abs() < 1e-11),
            _ => panic!("expected 1-shock"),
        }
    }

    #[test]
    fn strong_separation_still_solves() {
        let eos = eos();
        let l = PrimitiveState::new(1.0, -0.99, 1.0).unwrap();
        let r = PrimitiveState::new(1.0, 0.99, 1.0).unwrap();
        let fan = solve(&eos, &l, &r).unwrap();
        assert!(fan.eps1 > 0.0 && fan.eps3 > 0.0, "double rarefaction");
        assert!(fan.mid_left.rho > 0.0 && fan.mid_left.rho < 1e-2);
        assert!(fan.mid_left.v.abs() < 1e-12);
    }

    #[test]
    fn sampling_is_right_continuous_and_consistent() {
        let eos = eos();
        let l = PrimitiveState::new(1.0, 0.0, 1.5).unwrap();
        let r = PrimitiveState::new(0.125, 0.0, 1.0).unwrap();
        let fan = solve(&eos, &l, &r).unwrap();
        let (head, tail) = match fan.wave1 {
            WaveKind::Fan { head, tail } => (head, tail),
            _ => panic!(),
        };
        assert_eq!(fan.sample(&eos, -0.99).unwrap(), l);
        assert_eq!(fan.sample(&eos, 0.99).unwrap(), r);
        // Fan edges are continuous.
        let just_in = fan.sample(&eos, head + 1e-9).unwrap();
        assert!((just_in.rho - l.rho).abs() < 1e-6);
        let near_tail = fan.sample(&eos, tail - 1e-9).unwrap();
        assert!((near_tail.rho - fan.mid_left.rho).abs() < 1e-6);
        // Contact is right-continuous.
        assert_eq!(fan.sample(&eos, fan.contact_speed).unwrap(), fan.mid_right);
        let eps_left = fan.sample(&eos, fan.contact_speed - 1e-12).unwrap();
        assert_eq!(eps_left, fan.mid_left);
        // Shock is right-continuous.
        let s3 = match fan.wave3 {
            WaveKind::Shock { speed } => speed,
            _ => panic!(),
        };
        assert_eq!(fan.sample(&eos, s3).unwrap(), r);
        assert_eq!(fan.sample(&eos, s3 - 1e-12).unwrap(), fan.mid_right);
        // Inside the fan lambda_1 of the sample equals the ray.
        let xi = 0.5 * (head + tail);
        let in_fan = fan.sample(&eos, xi).unwrap();
        let (l1, _, _) = in_fan.char_speeds(&eos);
        assert!((l1 - xi).abs() < 1e-12);
    }

    #[test]
    fn random_pairs_solve_tightly() {
        let eos = eos();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..200 {
            let mut state = || {
                PrimitiveState::new(
                    (rng.gen_range(0.1f64.ln()..10f64.ln())).exp(),
                    rng.gen_range(-0.9..0.9),
                    rng.gen_range(0.5..3.0),
                )
                .unwrap()
            };
            let l = state();
            let r = state();
            let fan = solve(&eos, &l, &r).unwrap();
            assert!(fan.residual < 1e-12, "residual {} for {l:?} | {r:?}", fan.residual);
            // Entropy passes through fans untouched and rises across shocks.
            if fan.eps1 > 0.0 {
                assert_eq!(fan.mid_left.entropy, l.entropy);
            } else {
                assert!(fan.mid_left.entropy >= l.entropy);
            }
            if fan.eps3 > 0.0 {
                assert_eq!(fan.mid_right.entropy, r.entropy);
            } else {
                assert!(fan.mid_right.entropy >= r.entropy);
            }
            // Wave ordering.
            let left_edge = match fan.wave1 {
                WaveKind::Shock { speed } => speed,
                WaveKind::Fan { tail, .. } => tail,
            };
            let right_edge = match fan.wave3 {
                WaveKind::Shock { speed } => speed,
                WaveKind::Fan { tail, .. } => tail,
            };
            assert!(left_edge <= fan.contact_speed + 1e-12);
            assert!(fan.contact_speed <= right_edge + 1e-12);
        }
    }

    #[test]
    fn grid_scan_oracle_agrees() {
        // Locate the root of g by brute force on a fine grid, independently
        // of the bracketing and Illinois logic.
        let eos = eos();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let mut state = || {
                PrimitiveState::new(
                    rng.gen_range(0.2..5.0),
                    rng.gen_range(-0.8..0.8),
                    rng.gen_range(0.8..2.5),
                )
                .unwrap()
            };
            let l = state();
            let r = state();
            let fan = solve(&eos, &l, &r).unwrap();
            let il = l.to_invariants(&eos).unwrap();
            let ir = r.to_invariants(&eos).unwrap();
            let g = |x: f64| x - curve_three_r(&eos, &ir, curve_one_s(&eos, &il, x));
            let (mut lo, mut hi) = (il.r.min(ir.r) - 8.0, il.r.max(ir.r) + 8.0);
            assert!(g(lo) < 0.0 && g(hi) > 0.0);
            for _ in 0..3 {
                // 2000-point scan, then zoom on the sign change.
                let step = (hi - lo) / 2000.0;
                let mut x = lo;
                while g(x + step) < 0.0 {
                    x += step;
                }
                lo = x;
                hi = x + step;
            }
            let i_m = fan.mid_left.to_invariants(&eos).unwrap();
            assert!(
                (0.5 * (lo + hi) - i_m.r).abs() < 1e-6,
                "grid root {} vs solver {}",
                0.5 * (lo + hi),
                i_m.r
            );
        }
    }

    #[test]
    fn mirror_reflection_swaps_the_acoustic_waves() {
        // x -> -x sends (L, R) to (reflect R, reflect L); strengths swap
        // families, the contact jump flips sign, and every speed negates.
        let eos = eos();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let mut state = || {
                PrimitiveState::new(
                    rng.gen_range(0.2..5.0),
                    rng.gen_range(-0.85..0.85),
                    rng.gen_range(0.6..2.5),
                )
                .unwrap()
            };
            let l = state();
            let r = state();
            let fan = solve(&eos, &l, &r).unwrap();
            let lm = PrimitiveState::new(r.rho, -r.v, r.entropy).unwrap();
            let rm = PrimitiveState::new(l.rho, -l.v, l.entropy).unwrap();
            let mirror = solve(&eos, &lm, &rm).unwrap();
            assert!((mirror.eps1 - fan.eps3).abs() < 1e-12);
            assert!((mirror.eps3 - fan.eps1).abs() < 1e-12);
            assert!((mirror.eps2 + fan.eps2).abs() < 1e-12);
            assert!((mirror.contact_speed + fan.contact_speed).abs() < 1e-12);
            match (fan.wave1, mirror.wave3) {
                (WaveKind::Shock { speed: s }, WaveKind::Shock { speed: sm }) => {
                    assert!((s + sm).abs() < 1e-12)
                }
                (WaveKind::Fan { head, tail }, WaveKind::Fan { head: hm, tail: tm }) => {
                    assert!((head + hm).abs() < 1e-12 && (tail + tm).abs() < 1e-12)
                }
                _ => panic!("wave kinds disagree under reflection"),
            }
        }
    }

    #[test]
    fn density_rescaling_preserves_strengths() {
        // rho -> c rho on both sides shifts r and s by the same constant, so
        // the strengths, middle velocity, and wave speeds cannot move.
        let eos = eos();
        let l = PrimitiveState::new(0.8, 0.35, 1.1).unwrap();
        let r = PrimitiveState::new(2.6, -0.4, 1.9).unwrap();
        let fan = solve(&eos, &l, &r).unwrap();
        for c in [1e-3, 0.2, 7.0, 1e4] {
            let lc = PrimitiveState::new(c * l.rho, l.v, l.entropy).unwrap();
            let rc = PrimitiveState::new(c * r.rho, r.v, r.entropy).unwrap();
            let scaled = solve(&eos, &lc, &rc).unwrap();
            assert!((scaled.eps1 - fan.eps1).abs() < 1e-11, "c = {c}");
            assert!((scaled.eps2 - fan.eps2).abs() < 1e-11, "c = {c}");
            assert!((scaled.eps3 - fan.eps3).abs() < 1e-11, "c = {c}");
            assert!((scaled.contact_speed - fan.contact_speed).abs() < 1e-11);
            assert!((scaled.mid_left.rho - c * fan.mid_left.rho).abs() < 1e-9 * c);
        }
    }
}
