//! State representations and conversions for the one-dimensional flow.
//!
//! A state carries (rho, v, S): energy density, velocity (|v| < 1), and
//! specific entropy. The conserved vector is
//!
//!   U1 = n / sqrt(1 - v^2)            (particle density)
//!   U2 = (1 + a^2) rho v / (1 - v^2)  (momentum density)
//!   U3 = rho (1 + a^2 v^2) / (1 - v^2) (energy density)
//!
//! with flux (U1 v / ... , U2 v + p, U2). Two algebraic identities pin the
//! system down: F3 == U2 and F2 - U3 == (a^2 - 1) rho.
//!
//! The characteristic coordinates are r = w - b ln(rho), s = w + b ln(rho)
//! with w = atanh(v) and b = a / (1 + a^2); together with Sigma = ln A(S)
//! they diagonalize the wave curves used by the Riemann solver.

use crate::eos::EosParams;
use crate::error::{Error, Result};

/// Velocity decoded from |U2 / U3| below this is snapped to exactly zero,
/// which keeps mirror-symmetric data bitwise symmetric.
const VELOCITY_SNAP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PrimitiveState {
    pub rho: f64,
    pub v: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedState {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

/// (r, s, Sigma): Riemann invariants of the acoustic fields plus log entropy
/// variable; a bijective chart of the physical states.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct InvariantState {
    pub r: f64,
    pub s: f64,
    pub sigma: f64,
}

/// One characteristic field: its speed, an eigenvector in (rho, v, S)
/// coordinates, and the genuine-nonlinearity product grad(lambda) . R.
#[derive(Debug, Clone, Copy)]
pub struct CharField {
    pub speed: f64,
    pub eigenvector: [f64; 3],
    pub nonlinearity: f64,
}

impl PrimitiveState {
    pub fn new(rho: f64, v: f64, entropy: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain { what: "rho", value: rho });
        }
        if !(v.abs() < 1.0) {
            return Err(Error::Domain { what: "v", value: v });
        }
        if !(entropy > 0.0) || !entropy.is_finite() {
            return Err(Error::Domain { what: "S", value: entropy });
        }
        Ok(PrimitiveState { rho, v, entropy })
    }

    pub fn to_conserved(&self, eos: &EosParams) -> Result<ConservedState> {
        let a2 = eos.a_squared();
        let n = eos.number_density(self.rho, self.entropy)?;
        let g2 = 1.0 - self.v * self.v;
        Ok(ConservedState {
            u1: n / g2.sqrt(),
            u2: (1.0 + a2) * self.rho * self.v / g2,
            u3: self.rho * (1.0 + a2 * self.v * self.v) / g2,
        })
    }

    pub fn flux(&self, eos: &EosParams) -> Result<[f64; 3]> {
        let a2 = eos.a_squared();
        let u = self.to_conserved(eos)?;
        Ok([
            u.u1 * self.v,
            (1.0 + a2) * self.rho * self.v * self.v / (1.0 - self.v * self.v) + a2 * self.rho,
            u.u2,
        ])
    }

    pub fn to_invariants(&self, eos: &EosParams) -> Result<InvariantState> {
        let b = eos.invariant_coefficient();
        let w = self.v.atanh();
        let lr = self.rho.ln();
        Ok(InvariantState {
            r: w - b * lr,
            s: w + b * lr,
            sigma: eos.sigma_of_s(self.entropy)?,
        })
    }

    /// (lambda_1, lambda_2, lambda_3) = ((v-a)/(1-va), v, (v+a)/(1+va)).
    pub fn char_speeds(&self, eos: &EosParams) -> (f64, f64, f64) {
        let a = eos.sound_speed();
        (
            (self.v - a) / (1.0 - self.v * a),
            self.v,
            (self.v + a) / (1.0 + self.v * a),
        )
    }

    /// The three characteristic fields. Fields 1 and 3 are genuinely
    /// nonlinear with grad(lambda) . R = (1 - a^2) / (1 -+ a v)^2; field 2
    /// (the contact) is linearly degenerate.
    pub fn char_fields(&self, eos: &EosParams) -> [CharField; 3] {
        let a = eos.sound_speed();
        let a2 = eos.a_squared();
        let (l1, l2, l3) = self.char_speeds(eos);
        let g2 = 1.0 - self.v * self.v;
        let drho = (a2 + 1.0) * self.rho / (a * g2);
        [
            CharField {
                speed: l1,
                eigenvector: [-drho, 1.0, 0.0],
                nonlinearity: (1.0 - a2) / ((1.0 - a * self.v) * (1.0 - a * self.v)),
            },
            CharField { speed: l2, eigenvector: [0.0, 0.0, 1.0], nonlinearity: 0.0 },
            CharField {
                speed: l3,
                eigenvector: [drho, 1.0, 0.0],
                nonlinearity: (1.0 - a2) / ((1.0 + a * self.v) * (1.0 + a * self.v)),
            },
        ]
    }

    /// det d(U1,U2,U3)/d(rho, v, S) = n^2 T (1 - a^2 v^2) / (1 - v^2)^(5/2).
    ///
    /// Positive wherever T > 0, so the conserved map is locally invertible.
    pub fn jacobian_det(&self, eos: &EosParams) -> Result<f64> {
        let a2 = eos.a_squared();
        let n = eos.number_density(self.rho, self.entropy)?;
        let t = eos.temperature(n, self.entropy)?;
        let g2 = 1.0 - self.v * self.v;
        Ok(n * n * t * (1.0 - a2 * self.v * self.v) / (g2 * g2 * g2.sqrt()))
    }
}

impl ConservedState {
    /// Invert the conserved map. The velocity comes from the smaller root of
    /// a^2 q v^2 - (1 + a^2) v + q = 0 where q = U2 / U3, written in the
    /// subtraction-free form v = 2q / ((1+a^2) + sqrt((1+a^2)^2 - 4 a^2 q^2)).
    /// Decodable iff U1 > 0, U3 > 0 and |q| < 1.
    pub fn to_primitive(&self, eos: &EosParams) -> Result<PrimitiveState> {
        let a2 = eos.a_squared();
        if !(self.u3 > 0.0) || !self.u3.is_finite() {
            return Err(Error::Decode { what: "U3", value: self.u3 });
        }
        if !(self.u1 > 0.0) || !self.u1.is_finite() {
            return Err(Error::Decode { what: "U1", value: self.u1 });
        }
        let q = self.u2 / self.u3;
        if !(q.abs() < 1.0) {
            return Err(Error::Decode { what: "U2/U3", value: q });
        }
        let v = if q.abs() < VELOCITY_SNAP {
            0.0
        } else {
            let g = 1.0 + a2;
            2.0 * q / (g + (g * g - 4.0 * a2 * q * q).sqrt())
        };
        let rho = self.u3 * (1.0 - v * v) / (1.0 + a2 * v * v);
        let n = self.u1 * (1.0 - v * v).sqrt();
        let entropy = eos.entropy_from_rho_n(rho, n)?;
        PrimitiveState::new(rho, v, entropy)
    }
}

impl InvariantState {
    pub fn from_primitive(p: &PrimitiveState, eos: &EosParams) -> Result<Self> {
        p.to_invariants(eos)
    }

    pub fn to_primitive(&self, eos: &EosParams) -> Result<PrimitiveState> {
        let b = eos.invariant_coefficient();
        let v = (0.5 * (self.r + self.s)).tanh();
        let rho = ((self.s - self.r) / (2.0 * b)).exp();
        PrimitiveState::new(rho, v, eos.s_of_sigma(self.sigma)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eos() -> EosParams {
        EosParams::polytropic(4.0 / 3.0, 1.0).unwrap()
    }

    fn states() -> Vec<PrimitiveState> {
        let mut out = Vec::new();
        for &rho in &[0.1, 1.0, 4.7] {
            for &v in &[-0.9, -0.3, 0.0, 0.5, 0.85] {
                for &s in &[0.4, 1.5, 3.0] {
                    out.push(PrimitiveState::new(rho, v, s).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn char_speed_values() {
        let p = PrimitiveState::new(1.0, 0.5, 1.0).unwrap();
        let (l1, l2, l3) = p.char_speeds(&eos());
        assert!((l1 - -0.10874112933696653).abs() < 1e-16);
        assert_eq!(l2, 0.5);
        assert!((l3 - 0.83601385660969381).abs() < 1e-15);
    }

    #[test]
    fn char_speeds_stay_subluminal_and_ordered() {
        let eos = eos();
        for p in states() {
            let (l1, l2, l3) = p.char_speeds(&eos);
            assert!(l1 < l2 && l2 < l3);
            assert!(l1.abs() < 1.0 && l3.abs() < 1.0);
        }
    }

    #[test]
    fn conserved_round_trip() {
        let eos = eos();
        for p in states() {
            let u = p.to_conserved(&eos).unwrap();
            let back = u.to_primitive(&eos).unwrap();
            assert!((back.rho - p.rho).abs() < 1e-12 * p.rho, "rho: {p:?} -> {back:?}");
            assert!((back.v - p.v).abs() < 1e-13, "v: {p:?} -> {back:?}");
            assert!(
                (back.entropy - p.entropy).abs() < 1e-11 * p.entropy,
                "S: {p:?} -> {back:?}"
            );
        }
    }

    #[test]
    fn flux_identities() {
        let eos = eos();
        let a2 = eos.a_squared();
        for p in states() {
            let u = p.to_conserved(&eos).unwrap();
            let f = p.flux(&eos).unwrap();
            assert_eq!(f[2], u.u2);
            let lhs = f[1] - u.u3;
            let rhs = (a2 - 1.0) * p.rho;
            assert!((lhs - rhs).abs() < 1e-13 * p.rho.max(1.0), "F2-U3 at {p:?}");
        }
    }

    #[test]
    fn invariants_round_trip() {
        let eos = eos();
        for p in states() {
            let i = p.to_invariants(&eos).unwrap();
            let back = i.to_primitive(&eos).unwrap();
            assert!((back.rho - p.rho).abs() < 1e-12 * p.rho);
            assert!((back.v - p.v).abs() < 1e-14);
            assert!((back.entropy - p.entropy).abs() < 1e-12 * p.entropy);
        }
    }

    #[test]
    fn invariants_order_and_velocity_split() {
        // r < s iff rho > 1; r + s = 2 atanh(v).
        let eos = eos();
        let p = PrimitiveState::new(2.0, 0.3, 1.0).unwrap();
        let i = p.to_invariants(&eos).unwrap();
        assert!(i.r < i.s);
        assert!((0.5 * (i.r + i.s) - (0.3f64).atanh()).abs() < 1e-15);
    }

    #[test]
    fn decode_rejects_unphysical_vectors() {
        let eos = eos();
        // |U2/U3| >= 1 has no subluminal root.
        assert!(ConservedState { u1: 1.0, u2: 2.0, u3: 1.0 }.to_primitive(&eos).is_err());
        assert!(ConservedState { u1: 1.0, u2: 1.0, u3: 1.0 }.to_primitive(&eos).is_err());
        assert!(ConservedState { u1: 1.0, u2: 0.0, u3: -1.0 }.to_primitive(&eos).is_err());
        assert!(ConservedState { u1: -1.0, u2: 0.0, u3: 1.0 }.to_primitive(&eos).is_err());
        assert!(ConservedState { u1: 1.0, u2: f64::NAN, u3: 1.0 }.to_primitive(&eos).is_err());
    }

    #[test]
    fn tiny_momentum_snaps_to_rest() {
        let eos = eos();
        let u = ConservedState { u1: 0.8, u2: 1e-15, u3: 1.0 };
        assert_eq!(u.to_primitive(&eos).unwrap().v, 0.0);
    }

    #[test]
    fn state_validation() {
        assert!(PrimitiveState::new(0.0, 0.0, 1.0).is_err());
        assert!(PrimitiveState::new(1.0, 1.0, 1.0).is_err());
        assert!(PrimitiveState::new(1.0, -1.2, 1.0).is_err());
        assert!(PrimitiveState::new(1.0, 0.0, 0.0).is_err());
        assert!(PrimitiveState::new(1.0, f64::NAN, 1.0).is_err());
    }

    /// Central difference of the map (rho, v, S) -> U along direction d.
    fn fd_dir(
        _eos: &EosParams,
        p: &PrimitiveState,
        d: [f64; 3],
        h: f64,
        f: impl Fn(&PrimitiveState) -> [f64; 3],
    ) -> [f64; 3] {
        let shift = |sg: f64| {
            PrimitiveState::new(
                p.rho + sg * h * d[0],
                p.v + sg * h * d[1],
                p.entropy + sg * h * d[2],
            )
            .unwrap()
        };
        let (up, dn) = (f(&shift(1.0)), f(&shift(-1.0)));
        [
            (up[0] - dn[0]) / (2.0 * h),
            (up[1] - dn[1]) / (2.0 * h),
            (up[2] - dn[2]) / (2.0 * h),
        ]
    }

    #[test]
    fn eigenvectors_satisfy_rankine_eigenrelation() {
        // dF/dh = lambda dU/dh along each eigenvector direction, by central
        // differences of both curves.
        let eos = eos();
        for p in [
            PrimitiveState::new(1.0, 0.3, 1.5).unwrap(),
            PrimitiveState::new(0.4, -0.6, 0.9).unwrap(),
            PrimitiveState::new(2.5, 0.0, 2.0).unwrap(),
        ] {
            for field in p.char_fields(&eos) {
                let h = 1e-6;
                let du = fd_dir(&eos, &p, field.eigenvector, h, |q| {
                    let u = q.to_conserved(&eos).unwrap();
                    [u.u1, u.u2, u.u3]
                });
                let df = fd_dir(&eos, &p, field.eigenvector, h, |q| q.flux(&eos).unwrap());
                for k in 0..3 {
                    let scale = du[k].abs().max(1.0);
                    assert!(
                        (df[k] - field.speed * du[k]).abs() < 1e-7 * scale,
                        "eigenrelation fails at {p:?} speed {}",
                        field.speed
                    );
                }
            }
        }
    }

    #[test]
    fn nonlinearity_products_match_directional_derivatives() {
        let eos = eos();
        let p = PrimitiveState::new(1.3, 0.25, 1.1).unwrap();
        let fields = p.char_fields(&eos);
        for (k, field) in fields.iter().enumerate() {
            let h = 1e-6;
            let lam = |q: &PrimitiveState| {
                let (l1, l2, l3) = q.char_speeds(&eos);
                [l1, l2, l3][k]
            };
            let shift = |sg: f64| {
                PrimitiveState::new(
                    p.rho + sg * h * field.eigenvector[0],
                    p.v + sg * h * field.eigenvector[1],
                    p.entropy + sg * h * field.eigenvector[2],
                )
                .unwrap()
            };
            let fd = (lam(&shift(1.0)) - lam(&shift(-1.0))) / (2.0 * h);
            assert!(
                (fd - field.nonlinearity).abs() < 1e-7,
                "field {k}: fd {fd} vs {}",
                field.nonlinearity
            );
        }
        // Middle field is exactly degenerate.
        assert_eq!(fields[1].nonlinearity, 0.0);
    }

    fn det3(m: [[f64; 3]; 3]) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    #[test]
    fn jacobian_determinant_matches_finite_differences() {
        let eos = eos();
        for p in [
            PrimitiveState::new(1.0, 0.0, 1.0).unwrap(),
            PrimitiveState::new(1.7, 0.45, 2.2).unwrap(),
            PrimitiveState::new(0.3, -0.8, 0.7).unwrap(),
        ] {
            let h = 1e-6;
            let col = |d: [f64; 3]| {
                fd_dir(&eos, &p, d, h, |q| {
                    let u = q.to_conserved(&eos).unwrap();
                    [u.u1, u.u2, u.u3]
                })
            };
            let c0 = col([1.0, 0.0, 0.0]);
            let c1 = col([0.0, 1.0, 0.0]);
            let c2 = col([0.0, 0.0, 1.0]);
            let fd = det3([
                [c0[0], c1[0], c2[0]],
                [c0[1], c1[1], c2[1]],
                [c0[2], c1[2], c2[2]],
            ]);
            let exact = p.jacobian_det(&eos).unwrap();
            assert!(
                (fd - exact).abs() < 1e-5 * exact.abs(),
                "det at {p:?}: fd {fd} vs exact {exact}"
            );
            assert!(exact > 0.0);
        }
    }

    #[test]
    fn jacobian_det_at_rest_reduces_to_n2t() {
        let eos = eos();
        let p = PrimitiveState::new(1.0, 0.0, 1.0).unwrap();
        let n = eos.number_density(1.0, 1.0).unwrap();
        let t = eos.temperature(n, 1.0).unwrap();
        let det = p.jacobian_det(&eos).unwrap();
        assert!((det - n * n * t).abs() < 1e-15 * det);
    }
}
