use bernstein_core::basis::Family;
use bernstein_core::espace::Polynomial;
use bernstein_core::krein::{DeclaredClass, KreinCertificate};
use bernstein_core::majorant::{hall_majorant, MajorantOptions};
use bernstein_core::weight::Weight;
use num_complex::Complex64;
use proptest::prelude::*;

fn opts() -> MajorantOptions {
    MajorantOptions { tol: 1e-12, ..MajorantOptions::default() }
}

fn m(w: &Weight, n: usize, z: Complex64) -> f64 {
    hall_majorant(w, &Family::Polynomials { degree: n }, z, &opts()).unwrap().value
}

/// Distinct points in [−3, 3] at least 0.1 apart, with weights in [0.5, 4].
fn point_set(min: usize, max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-3.0..3.0f64, 0.5..4.0f64), min..=max).prop_filter_map("separated", |mut v| {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.windows(2).all(|p| p[1].0 - p[0].0 >= 0.1).then_some(v)
    })
}

fn probe() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, 0.2..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scaling_the_weight_scales_the_majorant(pts in point_set(4, 8), c in 0.1..10.0f64, z in probe()) {
        let w = Weight::discrete(pts).unwrap();
        let n = 2;
        let a = m(&w, n, z);
        let b = m(&w.scaled(c), n, z);
        prop_assert!((b - c * a).abs() <= 1e-8 * (1.0 + c * a), "{b} vs {}", c * a);
    }

    #[test]
    fn extra_points_never_increase_the_majorant(pts in point_set(5, 9), z in probe()) {
        let n = 3;
        let full = Weight::discrete(pts.clone()).unwrap();
        let sub = Weight::discrete(pts[..pts.len() - 1].to_vec()).unwrap();
        prop_assert!(m(&full, n, z) <= m(&sub, n, z) * (1.0 + 1e-9));
    }

    #[test]
    fn majorant_is_monotone_in_degree(pts in point_set(6, 9), z in probe()) {
        let w = Weight::discrete(pts).unwrap();
        let mut prev = 0.0;
        for n in 0..=4 {
            let v = m(&w, n, z);
            prop_assert!(v >= prev * (1.0 - 1e-9), "degree {n}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn even_weights_give_symmetric_majorants(half in point_set(2, 4), z in probe()) {
        let mut pts: Vec<(f64, f64)> = half.iter().map(|&(x, w)| (x.abs() + 0.05, w)).collect();
        pts.dedup_by(|a, b| (a.0 - b.0).abs() < 0.1);
        let mirrored: Vec<(f64, f64)> = pts.iter().flat_map(|&(x, w)| [(x, w), (-x, w)]).collect();
        let w = Weight::discrete(mirrored).unwrap();
        let n = 3;
        let a = m(&w, n, z);
        for other in [-z.conj(), z.conj(), -z] {
            let b = m(&w, n, other);
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a), "{a} vs {b} at {other}");
        }
    }

    #[test]
    fn residue_sums_vanish_below_degree_minus_one(pts in point_set(2, 10)) {
        let roots: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let deg = roots.len();
        let cert = KreinCertificate::new(
            Polynomial::from_real_roots(Complex64::new(1.0, 0.0), roots).into(),
            DeclaredClass::Polynomial,
        ).unwrap();
        for k in 0..deg {
            let terms: Vec<f64> = cert.deriv_at_zeros.iter().map(|e| e.x.powi(k as i32) / e.deriv).collect();
            let scale = terms.iter().map(|t| t.abs()).sum::<f64>().max(1.0);
            let want = if k + 1 == deg { 1.0 } else { 0.0 };
            prop_assert!((terms.iter().sum::<f64>() - want).abs() <= 1e-9 * scale);
        }
    }
}
