//! Real-zero products γ·z^{0|1}·Π(z − b)·Π(1 − z²/a²) (or Π(1 − z/a)),
//! evaluated in log space.
//!
//! Arithmetic zero sets a_j = s + j·d use the closed form
//! Π_{j≥0}(1 − ζ²/(σ+j)²) = Γ(σ)² / (Γ(σ−ζ)Γ(σ+ζ)) with σ = s/d, ζ = z/d.

use crate::error::{Error, Result};
use crate::numeric::special::{ln_1p, ln_gamma, ln_gamma_diff, ln_sin_pi};
use crate::numeric::summation::NeumaierComplex;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const LACUNARY_K_CAP: i32 = 40;
pub const DEFAULT_TRUNCATION: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroSet {
    /// Explicit zeros; positive magnitudes when the product is symmetric.
    List(Vec<f64>),
    /// a_j = start + j·step, j ≥ 0 (symmetric products only).
    Arithmetic { start: f64, step: f64 },
    /// a_k = base^k, k_min ≤ k ≤ k_max.
    Lacunary { base: f64, k_min: i32, k_max: i32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroProduct {
    gamma: Complex64,
    z_factor: bool,
    zeros: ZeroSet,
    symmetric: bool,
    trunc: usize,
    added: Vec<f64>,
    removed: Vec<f64>,
}

/// Value of a truncated product together with a bound on its relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncated {
    pub ln_value: Complex64,
    pub rel_bound: f64,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * (1.0 + a.abs())
}

impl ZeroProduct {
    pub fn new(gamma: Complex64, z_factor: bool, zeros: ZeroSet, symmetric: bool) -> Result<Self> {
        match &zeros {
            ZeroSet::List(v) => {
                if v.iter().any(|&a| !a.is_finite() || a == 0.0 || (symmetric && a < 0.0)) {
                    return Err(Error::InvalidSpec(
                        "listed zeros must be finite and nonzero (positive for symmetric products)".into(),
                    ));
                }
                let mut s = v.clone();
                s.sort_by(f64::total_cmp);
                if s.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidSpec("listed zeros must be distinct".into()));
                }
            }
            ZeroSet::Arithmetic { start, step } => {
                if !symmetric || !(*start > 0.0 && *step > 0.0) {
                    return Err(Error::InvalidSpec(
                        "arithmetic zero sets need start > 0, step > 0 and a symmetric product".into(),
                    ));
                }
            }
            ZeroSet::Lacunary { base, k_min, k_max } => {
                if !(*base > 1.0) || k_min > k_max || *k_max > LACUNARY_K_CAP || *k_min < -LACUNARY_K_CAP {
                    return Err(Error::InvalidSpec(format!(
                        "lacunary zero sets need base > 1 and −{LACUNARY_K_CAP} ≤ k_min ≤ k_max ≤ {LACUNARY_K_CAP}"
                    )));
                }
            }
        }
        if !(gamma.norm() > 0.0) {
            return Err(Error::InvalidSpec("multiplier γ must be nonzero".into()));
        }
        Ok(Self {
            gamma,
            z_factor,
            zeros,
            symmetric,
            trunc: DEFAULT_TRUNCATION,
            added: Vec::new(),
            removed: Vec::new(),
        })
    }

    /// sin(πz) = π·z·Π_{k≥1}(1 − z²/k²).
    pub fn sin_pi() -> Self {
        Self::new(c(PI), true, ZeroSet::Arithmetic { start: 1.0, step: 1.0 }, true).expect("valid")
    }

    /// cos(πz) = Π_{k≥0}(1 − z²/(k+½)²).
    pub fn cos_pi() -> Self {
        Self::new(c(1.0), false, ZeroSet::Arithmetic { start: 0.5, step: 1.0 }, true).expect("valid")
    }

    pub fn with_truncation(mut self, trunc: usize) -> Self {
        self.trunc = trunc.max(1);
        self
    }

    /// Multiplies γ by `s`.
    pub fn scaled(mut self, s: Complex64) -> Self {
        self.gamma *= s;
        self
    }

    /// Multiplies by Π (z − b) over `points`.
    pub fn with_added(mut self, points: &[f64]) -> Self {
        self.added.extend_from_slice(points);
        self
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }
    pub fn z_factor(&self) -> bool {
        self.z_factor
    }
    pub fn zero_set(&self) -> &ZeroSet {
        &self.zeros
    }
    pub fn symmetric(&self) -> bool {
        self.symmetric
    }
    pub fn truncation(&self) -> usize {
        self.trunc
    }
    pub fn added(&self) -> &[f64] {
        &self.added
    }
    pub fn removed(&self) -> &[f64] {
        &self.removed
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.zeros, ZeroSet::Arithmetic { .. })
    }

    pub fn type_bound(&self) -> f64 {
        match self.zeros {
            ZeroSet::Arithmetic { step, .. } => PI / step,
            _ => 0.0,
        }
    }

    pub fn sharp(&self) -> ZeroProduct {
        ZeroProduct { gamma: self.gamma.conj(), ..self.clone() }
    }

    /// Core zero magnitudes (signed values for non-symmetric sets) of a finite set.
    fn finite_core(&self) -> Vec<f64> {
        let mut v = match &self.zeros {
            ZeroSet::List(v) => v.clone(),
            ZeroSet::Lacunary { base, k_min, k_max } => (*k_min..=*k_max).map(|k| base.powi(k)).collect(),
            ZeroSet::Arithmetic { .. } => unreachable!("arithmetic sets are infinite"),
        };
        v.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        v
    }

    /// Canonical core zero equal to `x`, if any.
    fn match_core(&self, x: f64) -> Option<f64> {
        match &self.zeros {
            ZeroSet::Arithmetic { start, step } => {
                let j = ((x.abs() - start) / step).round();
                if j < 0.0 {
                    return None;
                }
                let a = start + j * step;
                same(a, x.abs()).then(|| a.copysign(x))
            }
            _ => {
                for a in self.finite_core() {
                    if same(a, x) {
                        return Some(a);
                    }
                    if self.symmetric && same(a, -x) {
                        return Some(-a);
                    }
                }
                None
            }
        }
    }

    /// The product with the zero at `x` divided out.
    pub fn remove_zero(&self, x: f64) -> Result<ZeroProduct> {
        let mut out = self.clone();
        if x.abs() <= 1e-12 && self.z_factor && !self.removed.contains(&0.0) {
            out.removed.push(0.0);
            return Ok(out);
        }
        if let Some(i) = self.added.iter().position(|&b| same(b, x)) {
            out.added.remove(i);
            return Ok(out);
        }
        if let Some(a) = self.match_core(x) {
            if !self.removed.contains(&a) {
                out.removed.push(a);
                return Ok(out);
            }
        }
        Err(Error::NotAZero { point: format!("{x}"), residual: f64::NAN })
    }

    /// True when `x` is currently a zero of the product.
    pub fn has_zero(&self, x: f64) -> bool {
        self.remove_zero(x).is_ok()
    }

    /// Zeros sorted by (|x|, x); arithmetic sets contribute `per_side` zeros per side.
    pub fn zeros(&self, per_side: usize) -> Vec<f64> {
        let mut out = Vec::new();
        if self.z_factor && !self.removed.contains(&0.0) {
            out.push(0.0);
        }
        out.extend_from_slice(&self.added);
        let core: Vec<f64> = match &self.zeros {
            ZeroSet::Arithmetic { start, step } => (0..per_side).map(|j| start + j as f64 * step).collect(),
            _ => self.finite_core(),
        };
        for a in core {
            let cands: Vec<f64> = if self.symmetric { vec![a, -a] } else { vec![a] };
            for v in cands {
                if !self.removed.contains(&v) {
                    out.push(v);
                }
            }
        }
        out.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
        out
    }

    fn status(&self, a: f64) -> (bool, bool) {
        (self.removed.contains(&a), self.removed.contains(&-a))
    }

    /// ln of the symmetric factor for magnitude a, with removed parts divided out.
    fn symmetric_factor(z: Complex64, a: f64, status: (bool, bool)) -> Complex64 {
        match status {
            (false, false) => ln_1p(-z / a) + ln_1p(z / a),
            (true, false) => (-(z + a) / (a * a)).ln(),
            (false, true) => (-(z - a) / (a * a)).ln(),
            (true, true) => c(-1.0 / (a * a)).ln(),
        }
    }

    fn outer_factors(&self, z: Complex64, acc: &mut NeumaierComplex) {
        acc.add(self.gamma.ln());
        if self.z_factor && !self.removed.contains(&0.0) {
            acc.add(z.ln());
        }
        for &b in &self.added {
            acc.add((z - b).ln());
        }
    }

    fn finite_core_ln(&self, z: Complex64, acc: &mut NeumaierComplex) {
        for a in self.finite_core() {
            if self.symmetric {
                acc.add(Self::symmetric_factor(z, a, self.status(a)));
            } else if self.removed.contains(&a) {
                acc.add(c(-1.0 / a).ln());
            } else {
                acc.add(ln_1p(-z / a));
            }
        }
    }

    /// ln F(z), exact up to rounding for every zero set.
    pub fn eval_ln(&self, z: Complex64) -> Complex64 {
        let mut acc = NeumaierComplex::new();
        self.outer_factors(z, &mut acc);
        match self.zeros {
            ZeroSet::Arithmetic { start, step } => acc.add(self.arithmetic_core_ln(z, start, step)),
            _ => self.finite_core_ln(z, &mut acc),
        }
        acc.value()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_ln(z).exp()
    }

    fn arithmetic_core_ln(&self, z: Complex64, start: f64, step: f64) -> Complex64 {
        let sigma = start / step;
        let zeta = z / step;
        let mut idx: Vec<usize> = Vec::new();
        for &r in &self.removed {
            if r == 0.0 {
                continue;
            }
            let j = ((r.abs() - start) / step).round() as usize;
            if !idx.contains(&j) {
                idx.push(j);
            }
        }
        let factor = |j: usize| {
            let a = sigma + j as f64;
            ln_1p(-zeta / a) + ln_1p(zeta / a)
        };
        let near = idx
            .iter()
            .map(|&j| {
                let a = sigma + j as f64;
                let dp = (zeta - a).norm();
                let dn = (zeta + a).norm();
                (j, dp.min(dn), dn < dp)
            })
            .filter(|t| t.1 <= 0.5)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let mut acc = NeumaierComplex::new();
        match near {
            Some((jn, _, negative)) => {
                let zz = if negative { -zeta } else { zeta };
                acc.add(gamma_product_without(sigma, jn, zz));
                for &j in idx.iter().filter(|&&j| j != jn) {
                    acc.add(-factor(j));
                }
            }
            None => {
                acc.add(gamma_product(sigma, zeta));
                for &j in &idx {
                    acc.add(-factor(j));
                }
            }
        }
        for &j in &idx {
            let a = start + j as f64 * step;
            acc.add(Self::symmetric_factor(z, a, self.status(a)));
        }
        acc.value()
    }

    /// Product over the first `order` core zeros with a bound on the neglected
    /// tail Π_{j≥order}(1 − z²/a_j²). Finite zero sets are exact.
    pub fn eval_truncated(&self, z: Complex64, order: usize, tol: f64) -> Result<Truncated> {
        let ZeroSet::Arithmetic { start, step } = self.zeros else {
            return Ok(Truncated { ln_value: self.eval_ln(z), rel_bound: 0.0 });
        };
        let a_t = start + order as f64 * step;
        let r2 = z.norm_sqr();
        let q = r2 / (a_t * a_t);
        if q >= 0.81 {
            return Err(Error::TruncationBudgetExceeded { modulus: z.norm(), order });
        }
        let s = r2 * (1.0 / (a_t * a_t) + 1.0 / (step * a_t));
        let rel_bound = (s / (1.0 - q)).exp_m1();
        if rel_bound > tol {
            return Err(Error::TruncationBudgetExceeded { modulus: z.norm(), order });
        }
        let mut acc = NeumaierComplex::new();
        self.outer_factors(z, &mut acc);
        for j in 0..order {
            let a = start + j as f64 * step;
            acc.add(Self::symmetric_factor(z, a, self.status(a)));
        }
        let mut beyond: Vec<f64> = Vec::new();
        for &r in &self.removed {
            let a = r.abs();
            let j = ((a - start) / step).round() as usize;
            if r != 0.0 && j >= order && !beyond.contains(&a) {
                beyond.push(a);
                acc.add(Self::symmetric_factor(z, a, self.status(a)));
            }
        }
        Ok(Truncated { ln_value: acc.value(), rel_bound })
    }

    /// F′(x) at a zero x, by dividing the zero out and evaluating there.
    pub fn derivative_at_zero(&self, x: f64) -> Result<Complex64> {
        Ok(self.remove_zero(x)?.eval(c(x)))
    }
}

/// ln Π_{m≥0}(1 − ζ²/(σ+m)²) = ln Γ(σ)² − ln Γ(σ−ζ) − ln Γ(σ+ζ).
fn gamma_product(sigma: f64, zeta: Complex64) -> Complex64 {
    let u = if zeta.re < 0.0 { -zeta } else { zeta };
    let s = c(sigma);
    if u.re < 15.0 {
        return ln_gamma(s) * 2.0 - ln_gamma(s - u) - ln_gamma(s + u);
    }
    // reflect Γ(σ−u) so the two large log-gammas cancel analytically
    ln_gamma(s) * 2.0 - c(PI.ln()) + ln_sin_pi(s - u) + ln_gamma_diff(c(1.0 - sigma) + u, s + u)
}

/// ln of Π_{m≥0, m≠j}(1 − ζ²/(σ+m)²), smooth for ζ near σ + j.
fn gamma_product_without(sigma: f64, j: usize, zeta: Complex64) -> Complex64 {
    let jf = j as f64;
    let w = zeta - sigma - jf;
    let one = c(1.0);
    let parity = if j % 2 == 1 { Complex64::new(0.0, PI) } else { c(0.0) };
    ln_gamma(c(sigma)) * 2.0 + c(sigma + jf).ln() * 2.0 - (w + 2.0 * (sigma + jf)).ln()
        + parity
        + ln_gamma_diff(w + jf + 1.0, w + 2.0 * sigma + jf)
        - ln_gamma(one + w)
        - ln_gamma(one - w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sine_product_matches_sine() {
        let s = ZeroProduct::sin_pi();
        for p in [z(0.5, 0.0), z(2.3, 1.1), z(-4.7, 0.2), z(1e4 + 0.25, 0.0), z(0.1, 30.0)] {
            let want = (p * PI).sin();
            let got = s.eval(p);
            assert!((got - want).norm() <= 1e-11 * want.norm().max(1.0), "{p}: {got} vs {want}");
        }
    }

    #[test]
    fn cosine_product_matches_cosine() {
        let s = ZeroProduct::cos_pi();
        for p in [z(0.3, 0.0), z(-2.1, 0.7)] {
            let want = (p * PI).cos();
            assert!((s.eval(p) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_sine_at_integers() {
        let s = ZeroProduct::sin_pi();
        for k in [-1000i64, -7, -1, 0, 1, 2, 3, 50, 99_999] {
            let d = s.derivative_at_zero(k as f64).unwrap();
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(d.re, PI * sign, max_relative = 1e-11);
            assert!(d.im.abs() < 1e-10);
        }
    }

    #[test]
    fn removed_zero_evaluates_as_limit() {
        let s = ZeroProduct::sin_pi().remove_zero(3.0).unwrap();
        for p in [z(3.0 + 1e-3, 0.0), z(3.2, 0.1), z(-3.0, 0.5), z(10.5, 0.0)] {
            let want = (p * PI).sin() / (p - 3.0);
            assert!((s.eval(p) - want).norm() < 1e-10 * want.norm().max(1.0), "{p}");
        }
        // both ±3 removed
        let s2 = s.remove_zero(-3.0).unwrap();
        let p = z(-2.9, 0.05);
        let want = (p * PI).sin() / ((p - 3.0) * (p + 3.0));
        assert!((s2.eval(p) - want).norm() < 1e-10 * want.norm());
        assert!(s2.remove_zero(3.0).is_err());
    }

    #[test]
    fn lacunary_derivative_matches_direct_product() {
        // Π_{k=1}^{12}(1 − z²/4^k) at z = 2 with the k = 1 factor differentiated
        let b = ZeroProduct::new(c(1.0), false, ZeroSet::Lacunary { base: 2.0, k_min: 1, k_max: 12 }, true).unwrap();
        let d = b.derivative_at_zero(2.0).unwrap();
        let mut want = -(2.0 * 2.0 / 4.0);
        for k in 2..=12 {
            want *= 1.0 - 4.0 / 4f64.powi(k);
        }
        assert_relative_eq!(d.re, want, max_relative = 1e-13);
    }

    #[test]
    fn truncated_product_respects_bound() {
        let s = ZeroProduct::sin_pi();
        let p = z(0.5, 0.0);
        let t = s.eval_truncated(p, 10_000, 1e-3).unwrap();
        assert!((t.ln_value.exp() - c(1.0)).norm() <= t.rel_bound);
        let t2 = s.eval_truncated(p, 20_000, 1e-3).unwrap();
        assert!((t2.ln_value.exp() - t.ln_value.exp()).norm() <= t.rel_bound);
        assert!(matches!(s.eval_truncated(z(95.0, 0.0), 100, 1.0), Err(Error::TruncationBudgetExceeded { .. })));
    }
}
