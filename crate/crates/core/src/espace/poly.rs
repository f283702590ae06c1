//! Polynomials with complex coefficients, optionally carrying a real-root
//! factorization used for accurate evaluation near the roots.

use crate::numeric::summation::NeumaierComplex;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealRootForm {
    pub lead: Complex64,
    pub roots: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
    roots: Option<RealRootForm>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl Polynomial {
    /// Coefficients c₀..cₙ in ascending order; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(c(0.0));
        }
        Self { coeffs, roots: None }
    }

    pub fn real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| c(x)).collect())
    }

    pub fn monomial(n: usize) -> Self {
        let mut v = vec![c(0.0); n + 1];
        v[n] = c(1.0);
        Self::new(v)
    }

    pub fn constant(value: Complex64) -> Self {
        Self::new(vec![value])
    }

    /// lead · Π (z − r).
    pub fn from_real_roots(lead: Complex64, roots: Vec<f64>) -> Self {
        let mut coeffs = vec![lead];
        for &r in &roots {
            let mut next = vec![c(0.0); coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        let mut sorted = roots;
        sorted.sort_by(f64::total_cmp);
        Self { coeffs, roots: Some(RealRootForm { lead, roots: sorted }) }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn root_form(&self) -> Option<&RealRootForm> {
        self.roots.as_ref()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == c(0.0)
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if let Some(rf) = &self.roots {
            return rf.roots.iter().fold(rf.lead, |acc, &r| acc * (z - r));
        }
        self.coeffs.iter().rev().fold(c(0.0), |acc, &a| acc * z + a)
    }

    /// ln p(z), scaled to avoid overflow for large |z|.
    pub fn eval_ln(&self, z: Complex64) -> Complex64 {
        if let Some(rf) = &self.roots {
            let mut acc = NeumaierComplex::new();
            acc.add(rf.lead.ln());
            for &r in &rf.roots {
                acc.add((z - r).ln());
            }
            return acc.value();
        }
        if z.norm() <= 1.0 {
            return self.eval(z).ln();
        }
        let w = z.inv();
        let n = self.degree();
        let s = self.coeffs.iter().fold(c(0.0), |acc, &a| acc * w + a);
        s.ln() + (n as f64) * z.ln()
    }

    pub fn derivative(&self) -> Polynomial {
        if self.degree() == 0 {
            return Polynomial::constant(c(0.0));
        }
        Polynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect())
    }

    /// p′(z); uses the root form when available.
    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        if let Some(rf) = &self.roots {
            let n = rf.roots.len();
            let mut acc = NeumaierComplex::new();
            for i in 0..n {
                let mut t = rf.lead;
                for (k, &r) in rf.roots.iter().enumerate() {
                    if k != i {
                        t *= z - r;
                    }
                }
                acc.add(t);
            }
            return acc.value();
        }
        self.derivative().eval(z)
    }

    pub fn conj(&self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a.conj()).collect(),
            roots: self.roots.as_ref().map(|rf| RealRootForm { lead: rf.lead.conj(), roots: rf.roots.clone() }),
        }
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|&a| a * s).collect(),
            roots: self.roots.as_ref().map(|rf| RealRootForm { lead: rf.lead * s, roots: rf.roots.clone() }),
        }
        .trimmed()
    }

    fn trimmed(self) -> Polynomial {
        if self.coeffs.iter().all(|a| *a == c(0.0)) {
            Polynomial::constant(c(0.0))
        } else {
            self
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or(c(0.0));
        Polynomial::new((0..n).map(|k| get(&self.coeffs, k) + get(&other.coeffs, k)).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![c(0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        match (&self.roots, &other.roots) {
            (Some(a), Some(b)) => {
                let mut roots = a.roots.clone();
                roots.extend_from_slice(&b.roots);
                Polynomial::from_real_roots(a.lead * b.lead, roots)
            }
            _ => Polynomial::new(out),
        }
    }

    /// Synthetic division by (z − w): returns the quotient and remainder p(w).
    pub fn divide_linear(&self, w: Complex64) -> (Polynomial, Complex64) {
        let n = self.degree();
        if n == 0 {
            return (Polynomial::constant(c(0.0)), self.coeffs[0]);
        }
        let mut q = vec![c(0.0); n];
        let mut acc = self.coeffs[n];
        for k in (0..n).rev() {
            q[k] = acc;
            acc = self.coeffs[k] + acc * w;
        }
        (Polynomial::new(q), acc)
    }

    /// Removes a real root from the factorized form.
    pub fn remove_real_root(&self, index: usize) -> Polynomial {
        let rf = self.roots.as_ref().expect("root form present");
        let mut roots = rf.roots.clone();
        roots.remove(index);
        Polynomial::from_real_roots(rf.lead, roots)
    }

    /// Σ |c_k| |w|^k, the local magnitude used for zero tolerances.
    pub fn local_norm(&self, w: Complex64) -> f64 {
        let r = w.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_and_root_form_agree() {
        let p = Polynomial::from_real_roots(c(2.0), vec![-1.0, 0.5, 3.0]);
        let q = Polynomial::new(p.coeffs().to_vec());
        for z in [Complex64::new(0.3, 1.2), Complex64::new(-7.0, 0.1)] {
            assert!((p.eval(z) - q.eval(z)).norm() < 1e-12 * (1.0 + q.eval(z).norm()));
            assert!((p.eval_ln(z).exp() - q.eval_ln(z).exp()).norm() < 1e-12 * (1.0 + q.eval(z).norm()));
            assert!((p.derivative_at(z) - q.derivative_at(z)).norm() < 1e-12 * (1.0 + q.eval(z).norm()));
        }
    }

    #[test]
    fn synthetic_division() {
        let p = Polynomial::real(&[-1.0, 0.0, 1.0]);
        let (q, r) = p.divide_linear(c(1.0));
        assert_eq!(q, Polynomial::real(&[1.0, 1.0]));
        assert_eq!(r, c(0.0));
    }

    #[test]
    fn large_argument_log_does_not_overflow() {
        let p = Polynomial::monomial(80);
        let z = Complex64::new(0.0, 2f64.powi(20));
        assert!((p.eval_ln(z).re - 80.0 * 20.0 * 2f64.ln()).abs() < 1e-9);
    }
}
