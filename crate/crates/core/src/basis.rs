//! Orthonormal bases for the approximating families, built on weighted sample
//! points so the majorant and approximation programs stay well conditioned.
//!
//! Polynomials use Vandermonde-with-Arnoldi: q₀ is constant, and q_{k+1} is
//! x·q_k orthogonalized against q₀..q_k in the inner product Σ q(x_i)q̄(x_i)V(x_i)².
//! The Hessenberg coefficients evaluate the basis anywhere by recurrence.

use crate::error::{Error, Result};
use crate::espace::{EntireFn, ExpSum, Polynomial};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Approximating family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Family {
    /// Polynomials of degree ≤ `degree`.
    Polynomials { degree: usize },
    /// Span of e^{iλx} for `terms` equispaced λ in [−tau, tau].
    Exponentials { tau: f64, terms: usize },
}

impl Family {
    pub fn dim(&self) -> usize {
        match *self {
            Family::Polynomials { degree } => degree + 1,
            Family::Exponentials { terms, .. } => terms,
        }
    }

    pub fn frequencies(&self) -> Vec<f64> {
        match *self {
            Family::Polynomials { .. } => Vec::new(),
            Family::Exponentials { tau, terms } => {
                if terms == 1 {
                    vec![0.0]
                } else {
                    (0..terms).map(|k| -tau + 2.0 * tau * k as f64 / (terms - 1) as f64).collect()
                }
            }
        }
    }

    /// The family's members as entire functions (monomials or exponentials).
    pub fn members(&self) -> Vec<EntireFn> {
        match *self {
            Family::Polynomials { degree } => (0..=degree).map(EntireFn::monomial).collect(),
            Family::Exponentials { .. } => {
                self.frequencies().into_iter().map(|l| ExpSum::single(l, Complex64::new(1.0, 0.0)).into()).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Arnoldi { c0: f64, hess: Vec<Vec<f64>> },
    Exponential { lambdas: Vec<f64>, rinv: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    kind: Kind,
    dim: usize,
}

const BREAKDOWN: f64 = 1e-11;

impl Basis {
    /// Weighted Arnoldi basis of polynomials of degree ≤ `degree` on points
    /// `(x_i, V(x_i))`.
    pub fn polynomial(points: &[(f64, f64)], degree: usize) -> Result<Basis> {
        let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let vw: Vec<f64> = points.iter().map(|p| p.1).collect();
        let n0 = norm(&vw);
        if !(n0 > 0.0) || !n0.is_finite() {
            return Err(Error::DegenerateGrid("weighted sample points are empty".into()));
        }
        let mut vs: Vec<Vec<f64>> = vec![vw.iter().map(|a| a / n0).collect()];
        let mut hess = Vec::with_capacity(degree);
        for k in 0..degree {
            let mut w: Vec<f64> = vs[k].iter().zip(points).map(|(a, p)| a * p.0).collect();
            let wn = norm(&w);
            let mut h = vec![0.0; k + 2];
            for _pass in 0..2 {
                for (j, vj) in vs.iter().enumerate() {
                    let d: f64 = vj.iter().zip(&w).map(|(a, b)| a * b).sum();
                    h[j] += d;
                    for (wi, a) in w.iter_mut().zip(vj) {
                        *wi -= d * a;
                    }
                }
            }
            let hn = norm(&w);
            if !(hn > BREAKDOWN * wn) {
                return Err(Error::DegenerateGrid(format!(
                    "polynomials of degree {} are dependent on the {} sample points",
                    k + 1,
                    points.len()
                )));
            }
            h[k + 1] = hn;
            vs.push(w.iter().map(|a| a / hn).collect());
            hess.push(h);
        }
        Ok(Basis { kind: Kind::Arnoldi { c0: 1.0 / n0, hess }, dim: degree + 1 })
    }

    /// Orthonormalized exponentials e^{iλ_k x} on weighted points.
    pub fn exponential(points: &[(f64, f64)], lambdas: &[f64]) -> Result<Basis> {
        let m = lambdas.len();
        let cols: Vec<Vec<Complex64>> =
            lambdas.iter().map(|&l| points.iter().map(|&(x, v)| Complex64::from_polar(v, l * x)).collect()).collect();
        let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        let mut r = vec![Complex64::new(0.0, 0.0); m * m];
        for (j, col) in cols.iter().enumerate() {
            let mut w = col.clone();
            let wn: f64 = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for _pass in 0..2 {
                for (i, qi) in q.iter().enumerate() {
                    let d: Complex64 = qi.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                    r[i * m + j] += d;
                    for (wk, a) in w.iter_mut().zip(qi) {
                        *wk -= d * a;
                    }
                }
            }
            let hn: f64 = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if !(hn > BREAKDOWN * wn) {
                return Err(Error::DegenerateGrid("exponentials are dependent on the sample points".into()));
            }
            r[j * m + j] = Complex64::new(hn, 0.0);
            q.push(w.iter().map(|a| a / hn).collect());
        }
        // R⁻¹ by back substitution, column by column
        let mut rinv = vec![Complex64::new(0.0, 0.0); m * m];
        for j in 0..m {
            rinv[j * m + j] = r[j * m + j].inv();
            for i in (0..j).rev() {
                let s: Complex64 = (i + 1..=j).map(|k| r[i * m + k] * rinv[k * m + j]).sum();
                rinv[i * m + j] = -s / r[i * m + i];
            }
        }
        Ok(Basis { kind: Kind::Exponential { lambdas: lambdas.to_vec(), rinv }, dim: m })
    }

    pub fn for_family(family: &Family, points: &[(f64, f64)]) -> Result<Basis> {
        match family {
            Family::Polynomials { degree } => Basis::polynomial(points, *degree),
            Family::Exponentials { .. } => Basis::exponential(points, &family.frequencies()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when every basis function is real on the real line.
    pub fn is_real(&self) -> bool {
        matches!(self.kind, Kind::Arnoldi { .. })
    }

    /// True when the first `k` functions span the family truncated to size `k`.
    pub fn is_nested(&self) -> bool {
        self.is_real()
    }

    /// q₀(z), …, q_{k−1}(z).
    pub fn eval(&self, z: Complex64, k: usize) -> Vec<Complex64> {
        let k = k.min(self.dim);
        match &self.kind {
            Kind::Arnoldi { c0, hess } => {
                let mut q = Vec::with_capacity(k);
                q.push(Complex64::new(*c0, 0.0));
                for j in 0..k.saturating_sub(1) {
                    let h = &hess[j];
                    let mut v = z * q[j];
                    for (i, qi) in q.iter().enumerate() {
                        v -= h[i] * qi;
                    }
                    q.push(v / h[j + 1]);
                }
                q.truncate(k);
                q
            }
            Kind::Exponential { lambdas, rinv } => {
                let m = lambdas.len();
                let e: Vec<Complex64> = lambdas.iter().map(|&l| (Complex64::i() * l * z).exp()).collect();
                (0..k).map(|j| (0..=j).map(|i| e[i] * rinv[i * m + j]).sum()).collect()
            }
        }
    }

    /// Real-line values for a real basis.
    pub fn eval_real(&self, x: f64, k: usize) -> Vec<f64> {
        match &self.kind {
            Kind::Arnoldi { c0, hess } => {
                let k = k.min(self.dim);
                let mut q = Vec::with_capacity(k);
                q.push(*c0);
                for j in 0..k.saturating_sub(1) {
                    let h = &hess[j];
                    let mut v = x * q[j];
                    for (i, qi) in q.iter().enumerate() {
                        v -= h[i] * qi;
                    }
                    q.push(v / h[j + 1]);
                }
                q.truncate(k);
                q
            }
            Kind::Exponential { .. } => self.eval(Complex64::new(x, 0.0), k).iter().map(|v| v.re).collect(),
        }
    }

    /// Σ c_j q_j as an explicit polynomial or exponential sum.
    pub fn to_entire(&self, coeffs: &[Complex64]) -> EntireFn {
        let k = coeffs.len().min(self.dim);
        match &self.kind {
            Kind::Arnoldi { c0, hess } => {
                let mut qs: Vec<Vec<f64>> = vec![vec![*c0]];
                for j in 0..k.saturating_sub(1) {
                    let h = &hess[j];
                    let mut next = vec![0.0; j + 2];
                    for (i, a) in qs[j].iter().enumerate() {
                        next[i + 1] += a;
                    }
                    for (i, qi) in qs.iter().enumerate() {
                        for (t, a) in qi.iter().enumerate() {
                            next[t] -= h[i] * a;
                        }
                    }
                    qs.push(next.iter().map(|a| a / h[j + 1]).collect());
                }
                let mut out = vec![Complex64::new(0.0, 0.0); k.max(1)];
                for (cj, qj) in coeffs.iter().zip(&qs) {
                    for (t, a) in qj.iter().enumerate() {
                        out[t] += cj * a;
                    }
                }
                Polynomial::new(out).into()
            }
            Kind::Exponential { lambdas, rinv } => {
                let m = lambdas.len();
                let terms: Vec<(f64, Complex64)> =
                    (0..m).map(|i| (lambdas[i], (i..k).map(|j| rinv[i * m + j] * coeffs[j]).sum())).collect();
                ExpSum::new(terms).expect("distinct frequencies").into()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let x = -3.0 + 6.0 * i as f64 / (n - 1) as f64;
                (x, (-x * x).exp())
            })
            .collect()
    }

    #[test]
    fn arnoldi_basis_is_orthonormal_on_the_grid() {
        let pts = grid(200);
        let b = Basis::polynomial(&pts, 10).unwrap();
        let vals: Vec<Vec<f64>> =
            pts.iter().map(|&(x, v)| b.eval_real(x, 11).iter().map(|q| q * v).collect()).collect();
        for i in 0..11 {
            for j in 0..11 {
                let d: f64 = vals.iter().map(|r| r[i] * r[j]).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn explicit_polynomial_matches_recurrence() {
        let b = Basis::polynomial(&grid(50), 6).unwrap();
        let coeffs: Vec<Complex64> = (0..7).map(|k| Complex64::new(k as f64 - 2.0, 0.5)).collect();
        let p = b.to_entire(&coeffs);
        let z = Complex64::new(0.4, 1.0);
        let direct: Complex64 = b.eval(z, 7).iter().zip(&coeffs).map(|(q, c)| q * c).sum();
        assert!((p.eval(z).unwrap() - direct).norm() < 1e-10 * direct.norm());
    }

    #[test]
    fn exponential_basis_round_trip() {
        let fam = Family::Exponentials { tau: 2.0, terms: 5 };
        let b = Basis::for_family(&fam, &grid(80)).unwrap();
        let coeffs: Vec<Complex64> = (0..5).map(|k| Complex64::new(1.0, k as f64)).collect();
        let f = b.to_entire(&coeffs);
        let z = Complex64::new(-0.7, 0.3);
        let direct: Complex64 = b.eval(z, 5).iter().zip(&coeffs).map(|(q, c)| q * c).sum();
        assert!((f.eval(z).unwrap() - direct).norm() < 1e-10 * direct.norm());
    }

    #[test]
    fn too_few_points_is_degenerate() {
        let pts = vec![(-1.0, 1.0), (1.0, 1.0)];
        assert!(matches!(Basis::polynomial(&pts, 2), Err(Error::DegenerateGrid(_))));
    }
}
