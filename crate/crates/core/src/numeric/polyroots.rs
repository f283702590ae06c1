//! Simultaneous polynomial root finding (Aberth–Ehrlich).

use num_complex::Complex64;

/// All roots of `Σ c_k z^k` (coefficients in ascending order). Trailing zero
/// coefficients are ignored; an empty vector is returned for constants.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    if c.len() < 2 {
        return Vec::new();
    }
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let deriv: Vec<Complex64> = (1..=n).map(|k| monic[k] * k as f64).collect();

    // Fujiwara bound for the initial circle.
    let radius = (0..n).map(|k| monic[k].norm().powf(1.0 / (n - k) as f64)).fold(0.0f64, f64::max).max(1e-3) * 2.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();

    let horner = |p: &[Complex64], x: Complex64| p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a);
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = horner(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / horner(&deriv, z[i]);
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_known_roots() {
        // (z-1)(z+2)(z-i)
        let r = [Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.0), Complex64::new(0.0, 1.0)];
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &root in &r {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * root;
            }
            c = next;
        }
        let found = roots(&c);
        for root in r {
            assert!(found.iter().any(|f| (f - root).norm() < 1e-12));
        }
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(roots(&[Complex64::new(3.0, 0.0), Complex64::new(0.0, 0.0)]).is_empty());
    }
}
