//! Equation-of-state family for an ultra-relativistic gas.
//!
//! The specific energy is eps(n, S) = A(S) n^(gamma - 1) with 1 < gamma < 2,
//! and the energy density closes as rho = n * eps, so the pressure law
//! collapses to p = (gamma - 1) rho = a^2 rho with constant sound speed
//! a = sqrt(gamma - 1) < 1 (units with c = 1).
//!
//! Three realizations of A(S) are supported:
//! - `Polytropic`: A(S) = exp(((gamma - 1) / R) S) for a gas constant R,
//! - `Radiation`:  A(S) = a_rad (S / (gamma a_rad))^gamma,
//! - `Tabulated`:  a strictly increasing table of (S, A) pairs interpolated
//!   with a monotone piecewise cubic, so A stays C^1 with A' > 0.
//!
//! Everything downstream touches the entropy only through Sigma = ln A(S),
//! so each family provides Sigma(S) and its inverse.

use crate::error::{Error, Result};

/// Default radiation constant in the dimensionless unit system (c = 1).
pub const RADIATION_CONSTANT: f64 = 7.56e-15;

#[derive(Debug, Clone)]
pub enum EosFamily {
    Polytropic { r_gas: f64 },
    Radiation { a_rad: f64 },
    Tabulated(MonotoneTable),
}

#[derive(Debug, Clone)]
pub struct EosParams {
    gamma: f64,
    family: EosFamily,
}

impl EosParams {
    pub fn polytropic(gamma: f64, r_gas: f64) -> Result<Self> {
        if !(r_gas > 0.0) || !r_gas.is_finite() {
            return Err(Error::Domain { what: "r_gas", value: r_gas });
        }
        Self::with_family(gamma, EosFamily::Polytropic { r_gas })
    }

    pub fn radiation(gamma: f64, a_rad: f64) -> Result<Self> {
        if !(a_rad > 0.0) || !a_rad.is_finite() {
            return Err(Error::Domain { what: "a_rad", value: a_rad });
        }
        Self::with_family(gamma, EosFamily::Radiation { a_rad })
    }

    /// Table of (S, A(S)) pairs; both coordinates must be strictly increasing and positive.
    pub fn tabulated(gamma: f64, points: &[(f64, f64)]) -> Result<Self> {
        Self::with_family(gamma, EosFamily::Tabulated(MonotoneTable::new(points)?))
    }

    fn with_family(gamma: f64, family: EosFamily) -> Result<Self> {
        // gamma in (1, 2) keeps 0 < a < 1; both endpoints are degenerate.
        if !gamma.is_finite() || gamma <= 1.0 || gamma >= 2.0 {
            return Err(Error::Domain { what: "gamma", value: gamma });
        }
        Ok(EosParams { gamma, family })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn family(&self) -> &EosFamily {
        &self.family
    }

    /// a^2 = gamma - 1, stored exactly so p / rho == gamma - 1 bitwise.
    pub fn a_squared(&self) -> f64 {
        self.gamma - 1.0
    }

    /// Constant sound speed a = sqrt(gamma - 1).
    pub fn sound_speed(&self) -> f64 {
        self.a_squared().sqrt()
    }

    /// b = a / (1 + a^2), the weight of ln(rho) in the Riemann invariants.
    pub fn invariant_coefficient(&self) -> f64 {
        self.sound_speed() / self.gamma
    }

    /// p = a^2 rho.
    pub fn pressure(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain { what: "rho", value: rho });
        }
        Ok(self.a_squared() * rho)
    }

    pub fn a_of_s(&self, s: f64) -> Result<f64> {
        self.check_entropy(s)?;
        Ok(match &self.family {
            EosFamily::Polytropic { r_gas } => ((self.gamma - 1.0) / r_gas * s).exp(),
            EosFamily::Radiation { a_rad } => a_rad * (s / (self.gamma * a_rad)).powf(self.gamma),
            EosFamily::Tabulated(t) => t.eval(s)?,
        })
    }

    /// dA/dS; positive for every admissible S (temperature is positive).
    pub fn a_derivative(&self, s: f64) -> Result<f64> {
        self.check_entropy(s)?;
        Ok(match &self.family {
            EosFamily::Polytropic { r_gas } => {
                let c = (self.gamma - 1.0) / r_gas;
                c * (c * s).exp()
            }
            EosFamily::Radiation { .. } => self.gamma * self.a_of_s(s)? / s,
            EosFamily::Tabulated(t) => t.deriv(s)?,
        })
    }

    /// Sigma(S) = ln A(S), in closed form where the family allows it.
    pub fn sigma_of_s(&self, s: f64) -> Result<f64> {
        self.check_entropy(s)?;
        Ok(match &self.family {
            EosFamily::Polytropic { r_gas } => (self.gamma - 1.0) / r_gas * s,
            EosFamily::Radiation { a_rad } => {
                a_rad.ln() + self.gamma * (s.ln() - (self.gamma * a_rad).ln())
            }
            EosFamily::Tabulated(t) => t.eval(s)?.ln(),
        })
    }

    /// Inverse of Sigma(S). For tabulated data the value must lie inside the table.
    pub fn s_of_sigma(&self, sigma: f64) -> Result<f64> {
        if !sigma.is_finite() {
            return Err(Error::Domain { what: "sigma", value: sigma });
        }
        match &self.family {
            EosFamily::Polytropic { r_gas } => {
                let s = r_gas * sigma / (self.gamma - 1.0);
                if s > 0.0 {
                    Ok(s)
                } else {
                    Err(Error::Range { what: "sigma", value: sigma })
                }
            }
            EosFamily::Radiation { a_rad } => {
                let g = self.gamma;
                Ok(g * a_rad.powf((g - 1.0) / g) * (sigma / g).exp())
            }
            EosFamily::Tabulated(t) => t.invert_ln(sigma),
        }
    }

    /// n(rho, S) = (rho / A(S))^(1/gamma).
    pub fn number_density(&self, rho: f64, s: f64) -> Result<f64> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain { what: "rho", value: rho });
        }
        Ok((rho / self.a_of_s(s)?).powf(1.0 / self.gamma))
    }

    /// Recover S from rho / n^gamma = A(S).
    pub fn entropy_from_rho_n(&self, rho: f64, n: f64) -> Result<f64> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain { what: "rho", value: rho });
        }
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Domain { what: "n", value: n });
        }
        self.s_of_sigma(rho.ln() - self.gamma * n.ln())
    }

    /// eps(n, S) = A(S) n^(gamma - 1).
    pub fn specific_energy(&self, n: f64, s: f64) -> Result<f64> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Domain { what: "n", value: n });
        }
        Ok(self.a_of_s(s)? * n.powf(self.gamma - 1.0))
    }

    /// T = d eps / d S at fixed n, i.e. A'(S) n^(gamma - 1).
    pub fn temperature(&self, n: f64, s: f64) -> Result<f64> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Domain { what: "n", value: n });
        }
        Ok(self.a_derivative(s)? * n.powf(self.gamma - 1.0))
    }

    fn check_entropy(&self, s: f64) -> Result<()> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::Domain { what: "S", value: s });
        }
        if let EosFamily::Tabulated(t) = &self.family {
            if s < t.s[0] || s > *t.s.last().unwrap() {
                return Err(Error::Range { what: "S", value: s });
            }
        }
        Ok(())
    }
}

/// Strictly increasing C^1 interpolant built from (S, A) samples.
///
/// Node tangents are harmonic means of adjacent secants (one-sided at the
/// ends), which keeps every tangent within three times the local secant, so
/// the cubic Hermite pieces are monotone and the derivative stays positive.
#[derive(Debug, Clone)]
pub struct MonotoneTable {
    s: Vec<f64>,
    a: Vec<f64>,
    m: Vec<f64>,
}

impl MonotoneTable {
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Config(format!(
                "tabulated eos needs at least 2 points, got {}",
                points.len()
            )));
        }
        let s: Vec<f64> = points.iter().map(|p| p.0).collect();
        let a: Vec<f64> = points.iter().map(|p| p.1).collect();
        if !(s[0] > 0.0) || !(a[0] > 0.0) {
            return Err(Error::Domain { what: "table start", value: s[0].min(a[0]) });
        }
        for i in 1..s.len() {
            if !(s[i] > s[i - 1]) || !(a[i] > a[i - 1]) || !s[i].is_finite() || !a[i].is_finite() {
                return Err(Error::Config(format!(
                    "tabulated eos must be strictly increasing, violated at row {i}"
                )));
            }
        }
        let n = s.len();
        let d: Vec<f64> = (0..n - 1).map(|i| (a[i + 1] - a[i]) / (s[i + 1] - s[i])).collect();
        let mut m = vec![0.0; n];
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            m[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);
        }
        Ok(MonotoneTable { s, a, m })
    }

    pub fn s_range(&self) -> (f64, f64) {
        (self.s[0], *self.s.last().unwrap())
    }

    fn segment(&self, s: f64) -> Result<usize> {
        if s < self.s[0] || s > *self.s.last().unwrap() || !s.is_finite() {
            return Err(Error::Range { what: "S", value: s });
        }
        // partition_point returns the first index with node > s.
        let k = self.s.partition_point(|&x| x <= s);
        Ok(k.min(self.s.len() - 1) - 1)
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        let i = self.segment(s)?;
        let h = self.s[i + 1] - self.s[i];
        let t = (s - self.s[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        Ok((2.0 * t3 - 3.0 * t2 + 1.0) * self.a[i]
            + (t3 - 2.0 * t2 + t) * h * self.m[i]
            + (-2.0 * t3 + 3.0 * t2) * self.a[i + 1]
            + (t3 - t2) * h * self.m[i + 1])
    }

    pub fn deriv(&self, s: f64) -> Result<f64> {
        let i = self.segment(s)?;
        let h = self.s[i + 1] - self.s[i];
        let t = (s - self.s[i]) / h;
        let t2 = t * t;
        Ok((6.0 * t2 - 6.0 * t) * (self.a[i] - self.a[i + 1]) / h
            + (3.0 * t2 - 4.0 * t + 1.0) * self.m[i]
            + (3.0 * t2 - 2.0 * t) * self.m[i + 1])
    }

    /// Solve A(S) = exp(sigma) for S by bisection; the interpolant is strictly increasing.
    fn invert_ln(&self, sigma: f64) -> Result<f64> {
        let (a_lo, a_hi) = (self.a[0], *self.a.last().unwrap());
        if sigma < a_lo.ln() || sigma > a_hi.ln() {
            return Err(Error::Range { what: "sigma", value: sigma });
        }
        let target = sigma.exp();
        let (mut lo, mut hi) = self.s_range();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
