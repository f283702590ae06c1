//! Finite exponential sums F(z) = Σ c_k e^{iλ_k z}.

use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct ExpSum {
    terms: Vec<(f64, Complex64)>,
}

impl ExpSum {
    /// Terms (λ_k, c_k); frequencies must be pairwise distinct.
    pub fn new(mut terms: Vec<(f64, Complex64)>) -> Result<Self> {
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidSpec("exponential sum frequencies must be distinct".into()));
        }
        if terms.iter().any(|t| !t.0.is_finite()) {
            return Err(Error::InvalidSpec("exponential sum frequencies must be finite".into()));
        }
        Ok(Self { terms })
    }

    /// c·e^{iλz}.
    pub fn single(lambda: f64, coeff: Complex64) -> Self {
        Self { terms: vec![(lambda, coeff)] }
    }

    pub fn terms(&self) -> &[(f64, Complex64)] {
        &self.terms
    }

    pub fn type_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.0.abs()).fold(0.0, f64::max)
    }

    /// ln F(z) by a log-sum-exp over the terms.
    pub fn eval_ln(&self, z: Complex64) -> Complex64 {
        let logs: Vec<Complex64> = self
            .terms
            .iter()
            .filter(|t| t.1 != Complex64::new(0.0, 0.0))
            .map(|&(l, c)| c.ln() + Complex64::i() * l * z)
            .collect();
        log_sum_exp(&logs)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|&(l, c)| c * (Complex64::i() * l * z).exp()).sum()
    }

    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|&(l, c)| c * Complex64::i() * l * (Complex64::i() * l * z).exp()).sum()
    }

    /// F#(z) = conj F(conj z) = Σ c̄_k e^{−iλ_k z}.
    pub fn sharp(&self) -> ExpSum {
        let mut terms: Vec<(f64, Complex64)> = self.terms.iter().map(|&(l, c)| (-l, c.conj())).collect();
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        ExpSum { terms }
    }

    /// e^{iαz}F(z).
    pub fn shift(&self, alpha: f64) -> ExpSum {
        ExpSum { terms: self.terms.iter().map(|&(l, c)| (l + alpha, c)).collect() }
    }

    /// Σ |c_k e^{iλ_k w}|, the local magnitude used for zero tolerances.
    pub fn local_norm(&self, w: Complex64) -> f64 {
        self.terms.iter().map(|&(l, c)| c.norm() * (-l * w.im).exp()).sum()
    }
}

/// ln Σ e^{l_k}; −∞ for an empty or vanishing sum.
pub fn log_sum_exp(logs: &[Complex64]) -> Complex64 {
    let m = logs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Complex64::new(f64::NEG_INFINITY, 0.0);
    }
    let s: Complex64 = logs.iter().map(|&l| (l - m).exp()).sum();
    s.ln() + m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_at_i() {
        let f = ExpSum::single(1.0, Complex64::new(1.0, 0.0));
        let v = f.eval(Complex64::i());
        assert!((v - Complex64::new((-1.0f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn log_evaluation_survives_huge_arguments() {
        let f = ExpSum::single(2.0, Complex64::new(1.0, 0.0));
        let y = 2f64.powi(20);
        assert_eq!(f.eval_ln(Complex64::new(0.0, y)).re, -2.0 * y);
    }

    #[test]
    fn duplicate_frequencies_rejected() {
        let one = Complex64::new(1.0, 0.0);
        assert!(ExpSum::new(vec![(1.0, one), (1.0, one)]).is_err());
    }
}
