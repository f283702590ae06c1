//! Majorant values against small independent solvers.

use bernstein_core::basis::Family;
use bernstein_core::majorant::{dual_bound, hall_majorant, MajorantOptions};
use bernstein_core::numeric::simplex::PricingRule;
use bernstein_core::weight::Weight;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn points(rng: &mut ChaCha8Rng, m: usize) -> Vec<(f64, f64)> {
    loop {
        let mut xs: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
        xs.sort_by(f64::total_cmp);
        if xs.windows(2).all(|p| p[1] - p[0] >= 0.2) {
            return xs.into_iter().map(|x| (x, rng.gen_range(0.5..3.0))).collect();
        }
    }
}

fn lagrange(xs: &[f64], j: usize, z: Complex64) -> Complex64 {
    (0..xs.len()).filter(|&k| k != j).map(|k| (z - xs[k]) / (xs[j] - xs[k])).product()
}

/// Real vector spanning the annihilators of degree ≤ n on n+2 points.
fn annihilator(xs: &[f64]) -> Vec<f64> {
    (0..xs.len()).map(|j| 1.0 / (0..xs.len()).filter(|&k| k != j).map(|k| xs[j] - xs[k]).product::<f64>()).collect()
}

/// Minimises a convex function of one variable on [lo, hi] by golden section.
fn golden(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = hi - r * (hi - lo);
        let b = lo + r * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f((lo + hi) / 2.0)
}

/// m(z) on n+2 points: the dual measures are ℓ(z) + t·a over complex t, so the
/// value is min_t Σ|ℓ_j(z) − t·a_j|·W_j, convex in (Re t, Im t).
fn convex_oracle(pts: &[(f64, f64)], z: Complex64) -> f64 {
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let a = annihilator(&xs);
    let l: Vec<Complex64> =
        (0..xs.len() - 1).map(|j| lagrange(&xs[..xs.len() - 1], j, z)).chain([Complex64::new(0.0, 0.0)]).collect();
    let cost = |t: Complex64| -> f64 { (0..xs.len()).map(|j| (l[j] - t * a[j]).norm() * pts[j].1).sum() };
    let span = l.iter().map(|v| v.norm()).sum::<f64>() / a.last().unwrap().abs() + 1.0;
    golden(-span, span, |u| golden(-span, span, |v| cost(Complex64::new(u, v))))
}

#[test]
fn five_points_match_convex_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = MajorantOptions { tol: 1e-12, ..MajorantOptions::default() };
    for _ in 0..40 {
        let n = rng.gen_range(0..=3);
        let pts = points(&mut rng, n + 2);
        let w = Weight::discrete(pts.clone()).unwrap();
        let z = Complex64::new(rng.gen_range(-2.5..2.5), rng.gen_range(0.1..2.5));
        let got = hall_majorant(&w, &Family::Polynomials { degree: n }, z, &opts).unwrap().value;
        let want = convex_oracle(&pts, z);
        assert!((got - want).abs() <= 1e-6 * (1.0 + want), "n={n} z={z}: {got} vs {want}");
    }
}

#[test]
fn interpolation_count_equals_lebesgue_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let n = rng.gen_range(0..=6);
        let pts = points(&mut rng, n + 1);
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let w = Weight::discrete(pts.clone()).unwrap();
        let got = hall_majorant(&w, &Family::Polynomials { degree: n }, z, &MajorantOptions::default()).unwrap().value;
        let want: f64 = (0..=n).map(|j| lagrange(&xs, j, z).norm() * pts[j].1).sum();
        assert!((got - want).abs() <= 1e-8 * (1.0 + want), "{got} vs {want}");
    }
}

#[test]
fn pricing_rules_agree_and_close_the_gap() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let w = Weight::gaussian();
    for _ in 0..6 {
        let z = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(0.2..1.5));
        let family = Family::Polynomials { degree: rng.gen_range(1..=5) };
        let mut vals = Vec::new();
        for rule in [PricingRule::Dantzig, PricingRule::Bland] {
            let opts = MajorantOptions { pricing: rule, ..MajorantOptions::default() };
            let s = hall_majorant(&w, &family, z, &opts).unwrap();
            let u = dual_bound(&s, &w, 1e-9).unwrap();
            assert!((u - s.value).abs() <= 1e-8 * u, "{rule:?} gap {}", u - s.value);
            vals.push(s.value);
        }
        assert!((vals[0] - vals[1]).abs() <= 1e-6 * vals[0], "{vals:?}");
    }
}
