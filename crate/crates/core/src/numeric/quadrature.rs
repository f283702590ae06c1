//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// The 15 abscissae of one panel, in the order used by [`gk15_from_values`].
pub fn panel_nodes(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [0.0; 15];
    for i in 0..7 {
        out[2 * i] = c - h * XGK[i];
        out[2 * i + 1] = c + h * XGK[i];
    }
    out[14] = c;
    out
}

/// Kronrod estimate and |Kronrod − Gauss| from values at [`panel_nodes`].
pub fn gk15_from_values(a: f64, b: f64, v: &[f64; 15]) -> (f64, f64) {
    let h = 0.5 * (b - a);
    let mut k = WGK[7] * v[14];
    let mut g = WG[3] * v[14];
    for i in 0..7 {
        let pair = v[2 * i] + v[2 * i + 1];
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    (k * h, ((k - g) * h).abs())
}

pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let nodes = panel_nodes(a, b);
    let mut v = [0.0; 15];
    for (vi, x) in v.iter_mut().zip(nodes) {
        *vi = f(x);
    }
    gk15_from_values(a, b, &v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    /// Final panels, sorted by left endpoint.
    pub panels: Vec<(f64, f64)>,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]`, bisecting the panel with the largest error
/// estimate until the summed estimate meets `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_evals: usize,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(f, a, b);
    let mut evals = 15;
    heap.push(Panel { a, b, value: v, error: e });
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if !value.is_finite() {
            return Err(Error::NonFinite("quadrature integrand".into()));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            let mut panels: Vec<(f64, f64)> = heap.iter().map(|p| (p.a, p.b)).collect();
            panels.sort_by(|x, y| x.0.total_cmp(&y.0));
            return Ok(QuadResult { value, error, evaluations: evals, panels });
        }
        if evals + 30 > max_evals {
            return Err(Error::QuadratureBudget { evaluations: evals, estimate: error });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::QuadratureBudget { evaluations: evals, estimate: error });
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e) = gk15(f, lo, hi);
            heap.push(Panel { a: lo, b: hi, value: v, error: e });
        }
        evals += 30;
    }
}

/// Sums the Kronrod rule over fixed panels, returning the value and the summed
/// error estimate.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: &F, panels: &[(f64, f64)]) -> (f64, f64) {
    let mut value = crate::numeric::summation::Neumaier::new();
    let mut error = 0.0;
    for &(a, b) in panels {
        let (v, e) = gk15(f, a, b);
        value.add(v);
        error += e;
    }
    (value.value(), error)
}

/// Adaptive Kronrod quadrature that evaluates whole generations of panels
/// through `eval_batch`, so expensive integrands can be sampled in parallel.
/// Starts from `initial` equal panels and bisects every panel whose error
/// exceeds its share of the tolerance.
pub fn integrate_batched<B>(
    eval_batch: B,
    a: f64,
    b: f64,
    initial: usize,
    abs_tol: f64,
    rel_tol: f64,
    max_evals: usize,
) -> Result<QuadResult>
where
    B: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n0 = initial.max(1);
    let h = (b - a) / n0 as f64;
    let mut todo: Vec<(f64, f64)> =
        (0..n0).map(|i| (a + i as f64 * h, if i + 1 == n0 { b } else { a + (i + 1) as f64 * h })).collect();
    let mut done: Vec<Panel> = Vec::new();
    let mut evals = 0;
    loop {
        let nodes: Vec<f64> = todo.iter().flat_map(|&(lo, hi)| panel_nodes(lo, hi)).collect();
        let vals = eval_batch(&nodes)?;
        evals += nodes.len();
        let mut fresh: Vec<Panel> = todo
            .iter()
            .zip(vals.chunks(15))
            .map(|(&(lo, hi), v)| {
                let arr: [f64; 15] = v.try_into().expect("15 nodes per panel");
                let (value, error) = gk15_from_values(lo, hi, &arr);
                Panel { a: lo, b: hi, value, error }
            })
            .collect();
        done.append(&mut fresh);
        let value: f64 = done.iter().map(|p| p.value).sum();
        let error: f64 = done.iter().map(|p| p.error).sum();
        if !value.is_finite() {
            return Err(Error::NonFinite("quadrature integrand".into()));
        }
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target {
            done.sort_by(|x, y| x.a.total_cmp(&y.a));
            let panels = done.iter().map(|p| (p.a, p.b)).collect();
            return Ok(QuadResult { value, error, evaluations: evals, panels });
        }
        let (split, keep): (Vec<Panel>, Vec<Panel>) =
            done.into_iter().partition(|p| p.error > target * (p.b - p.a) / (b - a));
        done = keep;
        todo = Vec::new();
        for p in split {
            let mid = 0.5 * (p.a + p.b);
            if mid <= p.a || mid >= p.b {
                return Err(Error::QuadratureBudget { evaluations: evals, estimate: error });
            }
            todo.push((p.a, mid));
            todo.push((mid, p.b));
        }
        if evals + 15 * todo.len() > max_evals {
            return Err(Error::QuadratureBudget { evaluations: evals, estimate: error });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn batched_matches_closed_form() {
        let f = |xs: &[f64]| Ok(xs.iter().map(|x| 1.0 / (1.0 + x * x)).collect());
        let r = integrate_batched(f, -100.0, 100.0, 4, 1e-12, 1e-12, 100_000).unwrap();
        assert_relative_eq!(r.value, 2.0 * 100f64.atan(), max_relative = 1e-12);
    }

    #[test]
    fn single_panel_is_exact_for_low_degree() {
        let (v, _) = gk15(&|x: f64| x.powi(20), -1.0, 1.0);
        assert_relative_eq!(v, 2.0 / 21.0, max_relative = 1e-14);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let r = integrate(&|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-12, 100_000).unwrap();
        let exact = 2.0 * (1.0 / 1e-4f64.sqrt()) * (1.0 / 1e-2f64).atan();
        assert_relative_eq!(r.value, exact, max_relative = 1e-11);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = integrate(&|x: f64| (1.0 / x).sin(), 1e-9, 1.0, 1e-15, 0.0, 300);
        assert!(matches!(r, Err(Error::QuadratureBudget { .. })));
    }

    #[test]
    fn panels_can_be_reused() {
        let f = |x: f64| 1.0 / (1.0 + x * x);
        let r = integrate(&f, -10.0, 10.0, 1e-13, 0.0, 10_000).unwrap();
        let (v, _) = integrate_panels(&f, &r.panels);
        assert_relative_eq!(v, 2.0 * 10f64.atan(), max_relative = 1e-12);
        assert!(2.0 * 10f64.atan() < PI);
    }
}
