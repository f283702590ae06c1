//! Small dense linear algebra: Gauss–Jordan inversion and solves.

use num_complex::Complex64;

/// Inverts the row-major `n×n` matrix with partial pivoting. Returns `None`
/// when a pivot falls below `1e-14` times the largest entry.
pub fn invert(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut w = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| w[i * n + col].abs().total_cmp(&w[j * n + col].abs()))?;
        if w[piv * n + col].abs() <= 1e-14 * scale {
            return None;
        }
        if piv != col {
            for k in 0..n {
                w.swap(piv * n + k, col * n + k);
                inv.swap(piv * n + k, col * n + k);
            }
        }
        let p = w[col * n + col];
        for k in 0..n {
            w[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = w[r * n + col];
            if f == 0.0 {
                continue;
            }
            for k in 0..n {
                w[r * n + k] -= f * w[col * n + k];
                inv[r * n + k] -= f * inv[col * n + k];
            }
        }
    }
    Some(inv)
}

/// Solves `a x = b` for a row-major square matrix.
pub fn solve(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let inv = invert(a, n)?;
    Some((0..n).map(|i| (0..n).map(|k| inv[i * n + k] * b[k]).sum()).collect())
}

/// Solves a complex square system by Gaussian elimination with partial pivoting.
pub fn solve_complex(a: &[Complex64], b: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = b.len();
    let mut w = a.to_vec();
    let mut x = b.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| w[i * n + col].norm().total_cmp(&w[j * n + col].norm()))?;
        if w[piv * n + col].norm() == 0.0 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                w.swap(piv * n + k, col * n + k);
            }
            x.swap(piv, col);
        }
        for r in col + 1..n {
            let f = w[r * n + col] / w[col * n + col];
            for k in col..n {
                let t = w[col * n + k];
                w[r * n + k] -= f * t;
            }
            let t = x[col];
            x[r] -= f * t;
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= w[i * n + k] * x[k];
        }
        x[i] = s / w[i * n + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = [4.0, 1.0, 2.0, 0.5, 3.0, -1.0, 2.0, 0.0, 5.0];
        let inv = invert(&a, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| a[i * 3 + k] * inv[k * 3 + j]).sum();
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        assert!(invert(&[1.0, 2.0, 2.0, 4.0], 2).is_none());
    }

    #[test]
    fn complex_solve() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let a = [one, i, -i, 2.0 * one];
        let x = solve_complex(&a, &[one, one]).unwrap();
        assert!((a[0] * x[0] + a[1] * x[1] - one).norm() < 1e-14);
        assert!((a[2] * x[0] + a[3] * x[1] - one).norm() < 1e-14);
    }
}
