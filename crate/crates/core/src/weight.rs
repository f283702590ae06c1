//! Weights W: ℝ → (0, ∞], their finite domain Ω, the reciprocal V = 1/W and
//! the sampled sup-seminorm ‖f‖ = sup |f|·V.

use crate::error::{Error, Result};
use crate::espace::EntireFn;
use crate::par::{self, Execution};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A value of W: finite positive, or +∞ off Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WeightValue {
    Finite(f64),
    Infinite,
}

impl WeightValue {
    pub fn is_finite(self) -> bool {
        matches!(self, WeightValue::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            WeightValue::Finite(w) => Some(w),
            WeightValue::Infinite => None,
        }
    }

    /// 1/W, with 1/∞ = 0.
    pub fn reciprocal(self) -> f64 {
        match self {
            WeightValue::Finite(w) => 1.0 / w,
            WeightValue::Infinite => 0.0,
        }
    }

    /// |f|·V with |f|·0 = 0 even when |f| is not finite.
    pub fn scale(self, abs_f: f64) -> f64 {
        match self {
            WeightValue::Finite(w) => abs_f / w,
            WeightValue::Infinite => 0.0,
        }
    }
}

/// Closed-form weight families on the real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Formula {
    /// exp(coeff·|x|^alpha)
    ExpAbsPow {
        alpha: f64,
        #[serde(default = "one")]
        coeff: f64,
    },
    /// (1 + x²)^(p/2)
    Power {
        p: f64,
    },
    Constant {
        value: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl Formula {
    fn ln_eval(&self, x: f64) -> f64 {
        match *self {
            Formula::ExpAbsPow { alpha, coeff } => coeff * x.abs().powf(alpha),
            Formula::Power { p } => 0.5 * p * (x * x).ln_1p(),
            Formula::Constant { value } => value.ln(),
        }
    }

    fn is_even(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    /// Closed-form weight, finite on the listed closed intervals (the whole
    /// line when `domain` is `None`).
    Formula { formula: Formula, scale: f64, domain: Option<Vec<(f64, f64)>> },
    /// Finite point set with finite values; W = ∞ elsewhere.
    Discrete { points: Vec<(f64, f64)> },
    /// Grid values joined by the piecewise-constant lower envelope; W = ∞
    /// outside the grid's hull.
    Tabulated { points: Vec<(f64, f64)> },
}

/// Ω = {x : W(x) < ∞}.
#[derive(Debug, Clone, PartialEq)]
pub enum Omega {
    Line,
    Intervals(Vec<(f64, f64)>),
    Points(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    kind: WeightKind,
}

/// Grid used to sample a seminorm: step `step` on `[−radius, radius]`, plus
/// every point of Ω when Ω is discrete.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub radius: f64,
    pub step: f64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self { radius: 50.0, step: 1e-3 }
    }
}

impl SamplingPlan {
    pub fn new(radius: f64, step: f64) -> Self {
        Self { radius, step }
    }

    fn line_points(&self) -> Vec<f64> {
        let n = (self.radius / self.step).floor() as i64;
        (-n..=n).map(|k| k as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormValue {
    pub value: f64,
    pub argmax: f64,
}

impl Weight {
    pub fn formula(formula: Formula) -> Self {
        Self { kind: WeightKind::Formula { formula, scale: 1.0, domain: None } }
    }

    /// W(x) = exp(x²).
    pub fn gaussian() -> Self {
        Self::formula(Formula::ExpAbsPow { alpha: 2.0, coeff: 1.0 })
    }

    pub fn constant(value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidSpec("constant weight must be positive and finite".into()));
        }
        Ok(Self::formula(Formula::Constant { value }))
    }

    pub fn formula_on(formula: Formula, domain: Vec<(f64, f64)>) -> Result<Self> {
        if domain.is_empty() || domain.iter().any(|&(a, b)| !(a <= b)) {
            return Err(Error::InvalidSpec("domain must be a nonempty list of intervals a ≤ b".into()));
        }
        Ok(Self { kind: WeightKind::Formula { formula, scale: 1.0, domain: Some(domain) } })
    }

    pub fn discrete(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSpec("discrete weight needs at least one point".into()));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in points.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidSpec(format!("support point {} repeated", w[0].0)));
            }
        }
        if points.iter().any(|&(x, w)| !(x.is_finite() && w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidSpec("discrete weight values must be positive and finite".into()));
        }
        Ok(Self { kind: WeightKind::Discrete { points } })
    }

    /// Ω = {±base^k : k_min ≤ k ≤ k_max} with W(±base^k) = exp(log_coeff·k²),
    /// and W(0) = `origin` when given.
    pub fn lacunary(base: f64, k_min: i32, k_max: i32, log_coeff: f64, origin: Option<f64>) -> Result<Self> {
        if !(base > 1.0) || k_min > k_max {
            return Err(Error::InvalidSpec("lacunary generator needs base > 1 and k_min ≤ k_max".into()));
        }
        let mut pts = Vec::new();
        for k in k_min..=k_max {
            let x = base.powi(k);
            let w = (log_coeff * (k as f64).powi(2)).exp();
            pts.push((x, w));
            pts.push((-x, w));
        }
        if let Some(w0) = origin {
            pts.push((0.0, w0));
        }
        Self::discrete(pts)
    }

    pub fn tabulated(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidSpec("tabulated weight needs at least two grid points".into()));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.windows(2).any(|w| !(w[0].0 < w[1].0)) || points.iter().any(|p| !(p.1 > 0.0)) {
            return Err(Error::InvalidSpec("tabulated grid must be strictly increasing with positive values".into()));
        }
        Ok(Self { kind: WeightKind::Tabulated { points } })
    }

    /// c·W for c > 0.
    pub fn scaled(&self, c: f64) -> Self {
        let kind = match &self.kind {
            WeightKind::Formula { formula, scale, domain } => {
                WeightKind::Formula { formula: formula.clone(), scale: scale * c, domain: domain.clone() }
            }
            WeightKind::Discrete { points } => {
                WeightKind::Discrete { points: points.iter().map(|&(x, w)| (x, w * c)).collect() }
            }
            WeightKind::Tabulated { points } => {
                WeightKind::Tabulated { points: points.iter().map(|&(x, w)| (x, w * c)).collect() }
            }
        };
        Self { kind }
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.kind, WeightKind::Discrete { .. })
    }

    pub fn omega(&self) -> Omega {
        match &self.kind {
            WeightKind::Formula { domain: None, .. } => Omega::Line,
            WeightKind::Formula { domain: Some(d), .. } => Omega::Intervals(d.clone()),
            WeightKind::Discrete { points } => Omega::Points(points.iter().map(|p| p.0).collect()),
            WeightKind::Tabulated { points } => Omega::Intervals(vec![(points[0].0, points[points.len() - 1].0)]),
        }
    }

    /// ln W(x), +∞ off Ω.
    pub fn ln_eval(&self, x: f64) -> f64 {
        match &self.kind {
            WeightKind::Formula { formula, scale, domain } => {
                if let Some(d) = domain {
                    if !d.iter().any(|&(a, b)| a <= x && x <= b) {
                        return f64::INFINITY;
                    }
                }
                formula.ln_eval(x) + scale.ln()
            }
            WeightKind::Discrete { points } => match points.binary_search_by(|p| p.0.total_cmp(&x)) {
                Ok(i) => points[i].1.ln(),
                Err(_) => f64::INFINITY,
            },
            WeightKind::Tabulated { points } => tabulated_lower_envelope(points, x).map_or(f64::INFINITY, f64::ln),
        }
    }

    pub fn eval(&self, x: f64) -> WeightValue {
        let l = self.ln_eval(x);
        if l == f64::INFINITY {
            WeightValue::Infinite
        } else {
            WeightValue::Finite(l.exp())
        }
    }

    /// V(x) = 1/W(x), zero off Ω.
    pub fn reciprocal_v(&self, x: f64) -> f64 {
        (-self.ln_eval(x)).exp()
    }

    /// True when W(−x) = W(x) for every x.
    pub fn is_even(&self) -> bool {
        match &self.kind {
            WeightKind::Formula { formula, domain, .. } => {
                formula.is_even()
                    && domain
                        .as_ref()
                        .is_none_or(|d| d.iter().all(|&(a, b)| d.iter().any(|&(c, e)| c == -b && e == -a)))
            }
            WeightKind::Discrete { points } | WeightKind::Tabulated { points } => {
                let n = points.len();
                (0..n).all(|i| points[i].0 == -points[n - 1 - i].0 && points[i].1 == points[n - 1 - i].1)
            }
        }
    }

    /// Points of Ω sampled by the plan.
    pub fn sample_points(&self, plan: &SamplingPlan) -> Vec<f64> {
        match &self.kind {
            WeightKind::Discrete { points } => points.iter().map(|p| p.0).collect(),
            _ => {
                let mut xs: Vec<f64> =
                    plan.line_points().into_iter().filter(|&x| self.ln_eval(x) < f64::INFINITY).collect();
                if let Omega::Intervals(d) = self.omega() {
                    for (a, b) in d {
                        for e in [a, b] {
                            if e.abs() <= plan.radius {
                                xs.push(e);
                            }
                        }
                    }
                    xs.sort_by(f64::total_cmp);
                    xs.dedup();
                }
                xs
            }
        }
    }

    /// Infimum of W over the sampled Ω.
    pub fn inf_on(&self, plan: &SamplingPlan) -> Result<f64> {
        let xs = self.sample_points(plan);
        if xs.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(xs.iter().map(|&x| self.ln_eval(x)).fold(f64::INFINITY, f64::min).exp())
    }
}

fn tabulated_lower_envelope(points: &[(f64, f64)], x: f64) -> Option<f64> {
    let n = points.len();
    if x < points[0].0 || x > points[n - 1].0 {
        return None;
    }
    match points.binary_search_by(|p| p.0.total_cmp(&x)) {
        Ok(i) => {
            let mut w = points[i].1;
            if i > 0 {
                w = w.min(points[i - 1].1);
            }
            if i + 1 < n {
                w = w.min(points[i + 1].1);
            }
            Some(w)
        }
        Err(i) => Some(points[i - 1].1.min(points[i].1)),
    }
}

/// max over the plan of |f(x)|·V(x), where `abs_f` returns |f(x)|.
pub fn seminorm<F>(w: &Weight, abs_f: F, plan: &SamplingPlan, exec: Execution) -> Result<SeminormValue>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let xs = w.sample_points(plan);
    if xs.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let vals = par::map(exec, &xs, |&x| w.eval(x).scale(abs_f(x)));
    let mut best = SeminormValue { value: -1.0, argmax: xs[0] };
    for (x, v) in xs.iter().zip(vals) {
        if v.is_nan() {
            return Err(Error::NonFinite(format!("|f|·V at x = {x}")));
        }
        if v > best.value {
            best = SeminormValue { value: v, argmax: *x };
        }
    }
    Ok(best)
}

/// Seminorm of an entire function, evaluated in log space.
pub fn seminorm_entire(w: &Weight, f: &EntireFn, plan: &SamplingPlan, exec: Execution) -> Result<SeminormValue> {
    let xs = w.sample_points(plan);
    if xs.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let vals = par::map(exec, &xs, |&x| {
        let lw = w.ln_eval(x);
        if lw == f64::INFINITY {
            return Ok(0.0);
        }
        Ok((f.eval_ln(Complex64::new(x, 0.0))?.re - lw).exp())
    });
    let mut best = SeminormValue { value: -1.0, argmax: xs[0] };
    for (x, v) in xs.iter().zip(vals) {
        let v: f64 = v?;
        if v > best.value {
            best = SeminormValue { value: v, argmax: *x };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayVerdict {
    Decaying,
    NonDecaying,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
    /// sup |F|·V over the sampled points of Ω in the annulus.
    pub sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberContainment {
    pub annuli: Vec<Annulus>,
    pub verdict: DecayVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub members: Vec<MemberContainment>,
}

const ANNULUS_SAMPLES: usize = 256;

/// Sup of |F|·V on the dyadic annuli [0,1], [1,2], [2,4], … up to `radius`
/// and a decay diagnosis from the last three nonempty annuli.
pub fn check_containment(w: &Weight, family: &[EntireFn], radius: f64) -> Result<ContainmentReport> {
    let mut edges = vec![0.0, 1.0];
    while *edges.last().unwrap() < radius {
        let next = (edges.last().unwrap() * 2.0).min(radius);
        edges.push(next);
    }
    let omega = w.omega();
    let mut members = Vec::with_capacity(family.len());
    for f in family {
        let mut annuli = Vec::new();
        for pair in edges.windows(2) {
            let (r0, r1) = (pair[0], pair[1]);
            let xs: Vec<f64> = match &omega {
                Omega::Points(p) => p.iter().copied().filter(|x| x.abs() >= r0 && x.abs() <= r1).collect(),
                _ => (0..=ANNULUS_SAMPLES)
                    .flat_map(|i| {
                        let r = r0 + (r1 - r0) * i as f64 / ANNULUS_SAMPLES as f64;
                        [r, -r]
                    })
                    .filter(|&x| w.ln_eval(x) < f64::INFINITY)
                    .collect(),
            };
            if xs.is_empty() {
                continue;
            }
            let mut sup = 0.0f64;
            for x in xs {
                let l = f.eval_ln(Complex64::new(x, 0.0))?.re - w.ln_eval(x);
                sup = sup.max(l.exp());
            }
            annuli.push(Annulus { inner: r0, outer: r1, sup });
        }
        let verdict = diagnose_decay(&annuli);
        members.push(MemberContainment { annuli, verdict });
    }
    Ok(ContainmentReport { members })
}

fn diagnose_decay(annuli: &[Annulus]) -> DecayVerdict {
    if annuli.len() < 3 {
        return DecayVerdict::Inconclusive;
    }
    let tail: Vec<f64> = annuli[annuli.len() - 3..].iter().map(|a| a.sup).collect();
    if tail[0] > tail[1] && tail[1] > tail[2] {
        DecayVerdict::Decaying
    } else if tail[0] <= tail[1] && tail[1] <= tail[2] {
        DecayVerdict::NonDecaying
    } else {
        DecayVerdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn point_values() {
        assert_eq!(Weight::gaussian().eval(0.0), WeightValue::Finite(1.0));
        let lac = Weight::lacunary(2.0, 0, 8, 0.3, None).unwrap();
        assert_eq!(lac.eval(3.0), WeightValue::Infinite);
        assert_eq!(lac.reciprocal_v(3.0), 0.0);
        let root = Weight::formula(Formula::ExpAbsPow { alpha: 0.5, coeff: 1.0 });
        assert_relative_eq!(root.eval(4.0).finite().unwrap(), 7.389_056_098_930_65, max_relative = 1e-14);
        assert_relative_eq!(Weight::gaussian().reciprocal_v(1.0), (-1.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn lower_envelope_is_lower_semicontinuous() {
        let w = Weight::tabulated(vec![(0.0, 3.0), (1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_eq!(w.eval(0.5).finite(), Some(1.0));
        assert_eq!(w.eval(0.0).finite(), Some(1.0));
        assert_eq!(w.eval(1.5).finite(), Some(1.0));
        assert_eq!(w.eval(2.5), WeightValue::Infinite);
    }

    #[test]
    fn seminorm_of_identity_under_gaussian() {
        let s = seminorm(&Weight::gaussian(), |x| x.abs(), &SamplingPlan::default(), Execution::Sequential).unwrap();
        // calculus oracle: maximizer x = 1/√2
        let x = 0.5f64.sqrt();
        assert_relative_eq!(s.value, x * (-x * x).exp(), max_relative = 1e-6);
        assert_relative_eq!(s.argmax.abs(), x, epsilon = 1e-3);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let w = Weight::formula_on(Formula::Constant { value: 1.0 }, vec![(100.0, 101.0)]).unwrap();
        let r = seminorm(&w, |_| 1.0, &SamplingPlan::default(), Execution::Sequential);
        assert_eq!(r, Err(Error::EmptyGrid));
    }
}
