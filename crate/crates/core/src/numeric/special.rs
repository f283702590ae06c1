//! Complex log-gamma and related elementary helpers.

use num_complex::Complex64;
use std::f64::consts::PI;

const STIRLING: [f64; 7] =
    [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0];

/// ln(1 + w) without cancellation for small |w|.
pub fn ln_1p(w: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * w.re + w.re * w.re + w.im * w.im).ln_1p();
    let im = w.im.atan2(1.0 + w.re);
    Complex64::new(re, im)
}

/// ln sin(πz), with the argument reduced to the nearest integer strip.
/// The imaginary part is correct modulo 2π.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let r = Complex64::new(z.re - n, z.im);
    let parity = if (n as i64).rem_euclid(2) == 1 { PI } else { 0.0 };
    let core = if r.im > 1.0 {
        // sin(πr) = e^{-iπr}(1 - e^{2iπr}) / (-2i)
        let e = (Complex64::i() * 2.0 * PI * r).exp();
        -Complex64::i() * PI * r + ln_1p(-e) - Complex64::new(2f64.ln(), -PI / 2.0)
    } else if r.im < -1.0 {
        let e = (-Complex64::i() * 2.0 * PI * r).exp();
        Complex64::i() * PI * r + ln_1p(-e) - Complex64::new(2f64.ln(), PI / 2.0)
    } else {
        (r * PI).sin().ln()
    };
    core + Complex64::new(0.0, parity)
}

/// ln Γ(z) for complex z. The imaginary part is correct modulo 2π; at the
/// poles the real part is +∞.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let refl = Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z);
        return refl - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 15.0 && w.norm() < 20.0 {
        shift += w.ln();
        w += 1.0;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + stirling_series(w) - shift
}

fn stirling_series(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    series
}

/// ln Γ(u) − ln Γ(v) without the cancellation of two large log-gammas when
/// u and v are large and close.
pub fn ln_gamma_diff(u: Complex64, v: Complex64) -> Complex64 {
    let d = u - v;
    if u.re < 15.0 || v.re < 15.0 || d.norm() > 0.5 * v.norm() {
        return ln_gamma(u) - ln_gamma(v);
    }
    (u - 0.5) * ln_1p(d / v) + d * v.ln() - d + stirling_series(u) - stirling_series(v)
}

/// Real ln Γ for positive arguments.
pub fn ln_gamma_real(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    statrs::function::erf::erf(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matches_real_log_gamma() {
        for &x in &[0.5, 1.0, 1.5, 3.7, 10.0, 42.25, 1e4 + 0.3] {
            assert_relative_eq!(ln_gamma(c(x, 0.0)).re, ln_gamma_real(x), max_relative = 1e-13, epsilon = 1e-14);
        }
    }

    #[test]
    fn recurrence_holds_off_axis() {
        for &z in &[c(0.3, 2.0), c(-4.2, 0.7), c(12.0, -30.0), c(-0.5, -8.0)] {
            let lhs = (ln_gamma(z + 1.0) - ln_gamma(z)).exp();
            assert_relative_eq!(lhs.re, z.re, epsilon = 1e-11 * (1.0 + z.norm()));
            assert_relative_eq!(lhs.im, z.im, epsilon = 1e-11 * (1.0 + z.norm()));
        }
    }

    #[test]
    fn reflection_gives_sine() {
        // Γ(1+z)Γ(1−z) = πz / sin(πz)
        for &z in &[c(0.25, 0.0), c(2.3, 1.1), c(-4.7, 0.2), c(0.1, 5.0)] {
            let lhs = (ln_gamma(z + 1.0) + ln_gamma(c(1.0, 0.0) - z)).exp();
            let rhs = z * PI / (z * PI).sin();
            assert_relative_eq!((lhs - rhs).norm() / rhs.norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gamma_difference_is_accurate_for_large_arguments() {
        // Γ(x+1)/Γ(x) = x
        for &x in &[20.0, 1e3, 1e5 + 0.25, 1e8] {
            let d = ln_gamma_diff(c(x + 1.0, 0.0), c(x, 0.0));
            assert_relative_eq!(d.re, f64::ln(x), max_relative = 1e-14);
        }
        let u = c(3e4, 2.0);
        let d = ln_gamma_diff(u + 0.5, u) - (ln_gamma(u + 0.5) - ln_gamma(u));
        assert!(d.norm() < 1e-9);
    }

    #[test]
    fn ln_sin_pi_large_imaginary_part() {
        let z = c(0.3, 200.0);
        // |sin(πz)| ~ e^{π·200}/2
        assert_relative_eq!(ln_sin_pi(z).re, PI * 200.0 - 2f64.ln(), max_relative = 1e-14);
        let z = c(7.25, 0.5);
        let direct = (z * PI).sin();
        let got = ln_sin_pi(z).exp();
        assert_relative_eq!((got - direct).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn ln_1p_small_argument() {
        let w = c(1e-12, -3e-13);
        let got = ln_1p(w);
        assert_relative_eq!(got.re, 1e-12, max_relative = 1e-9);
        assert_relative_eq!(got.im, -3e-13, max_relative = 1e-9);
    }
}
