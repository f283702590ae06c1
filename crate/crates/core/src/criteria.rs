//! Density criteria for polynomial families: growth of the majorant at a
//! nonreal probe, the logarithmic integral of the majorant on the real line,
//! the supremum of ∫ log|P|/(1+x²) over the unit ball, and a direct
//! best-approximation probe. All are finite-budget lower bounds; the verdicts
//! are heuristics on their sequences in n.

use crate::basis::{Basis, Family};
use crate::error::{Error, Result};
use crate::espace::{EntireFn, Polynomial};
use crate::krein::{validate_certificate, CertificateValidation, KreinCertificate};
use crate::majorant::{
    annihilator_program, classify_growth, majorant_profile, ExtremalSolution, Growth, MajorantOptions, MajorantProblem,
};
use crate::numeric::polyroots;
use crate::numeric::quadrature::{gk15_from_values, integrate_batched, panel_nodes};
use crate::numeric::summation::Neumaier;
use crate::par;
use crate::weight::{check_containment, DecayVerdict, SamplingPlan, Weight};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};

/// Distance below which the best-approximation probe counts as decayed.
pub const DISTANCE_THRESHOLD: f64 = 1e-3;
/// Log-growth exponent of log m between R/2 and R from which the tail
/// ∫ log m/(1+x²) is reported as divergent.
const DIVERGENT_TAIL_EXPONENT: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergelyanReport {
    pub probe: Complex64,
    pub degrees: Vec<usize>,
    /// m_n(probe), +∞ when unbounded within budget.
    pub values: Vec<f64>,
    pub verdict: Growth,
}

/// m_n(probe) for n = 0..=n_max.
pub fn mergelyan_test(w: &Weight, n_max: usize, probe: Complex64, opts: &MajorantOptions) -> Result<MergelyanReport> {
    if probe.im == 0.0 {
        return Err(Error::Precondition(format!("probe {probe} is real")));
    }
    let degrees: Vec<usize> = (0..=n_max).collect();
    let table = majorant_profile(w, &degrees, &[probe], opts)?;
    let values = table.values[0].clone();
    Ok(MergelyanReport { probe, degrees, verdict: table.growth[0], values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AkhiezerOptions {
    /// Integration window [−R, R]; integrated in θ = atan x.
    pub radius: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub initial_panels: usize,
    pub max_evals: usize,
}

impl Default for AkhiezerOptions {
    fn default() -> Self {
        Self { radius: 100.0, abs_tol: 1e-6, rel_tol: 1e-4, initial_panels: 8, max_evals: 4000 }
    }
}

/// How log m is continued beyond the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum LogTail {
    /// log m(x) = slope·ln|x| + c_±, with c_± fitted at ±R.
    LogLinear { slope: f64 },
    /// Constant, linear-in-ln|x| or divergent, judged from log m at R/2 and R.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AkhiezerValue {
    pub n: Option<usize>,
    /// Window integral plus tail; +∞ when the tail diverges.
    pub value: f64,
    pub window: f64,
    /// ∫ log⁺ m/(1+x²) and ∫ log⁻ m/(1+x²) over the window.
    pub positive: f64,
    pub negative: f64,
    pub tail: f64,
    pub tail_divergent: bool,
    pub error: f64,
    pub evaluations: usize,
}

/// ∫_0^{1/R} (−ln u)/(1+u²) du = ∫_R^∞ ln x/(1+x²) dx.
fn log_tail_integral(radius: f64) -> f64 {
    let a = 1.0 / radius;
    let la = -a.ln();
    let mut s = Neumaier::new();
    let mut pow = a;
    for k in 0..200 {
        let m = (2 * k + 1) as f64;
        let term = pow / m * (la + 1.0 / m);
        s.add(if k % 2 == 0 { term } else { -term });
        pow *= a * a;
        if term.abs() < 1e-18 {
            break;
        }
    }
    s.value()
}

/// ∫ log m(x)/(1+x²) dx for a log-majorant given in batches. `log_m` maps a
/// slice of abscissae to log m at each.
pub fn akhiezer_log_integral<F>(log_m: F, tail: LogTail, opts: &AkhiezerOptions) -> Result<AkhiezerValue>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    Ok(log_integral_with_panels(log_m, tail, opts)?.0)
}

fn log_integral_with_panels<F>(
    log_m: F,
    tail: LogTail,
    opts: &AkhiezerOptions,
) -> Result<(AkhiezerValue, Vec<(f64, f64)>)>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let r = opts.radius;
    let t = r.atan();
    let cache: RefCell<HashMap<u64, f64>> = RefCell::new(HashMap::new());
    let eval_x = |xs: &[f64]| -> Result<Vec<f64>> {
        let missing: Vec<f64> = {
            let c = cache.borrow();
            let mut m: Vec<f64> = xs.iter().copied().filter(|x| !c.contains_key(&x.to_bits())).collect();
            m.sort_by(f64::total_cmp);
            m.dedup();
            m
        };
        if !missing.is_empty() {
            let vals = log_m(&missing)?;
            let mut c = cache.borrow_mut();
            for (x, v) in missing.iter().zip(vals) {
                if !v.is_finite() {
                    return Err(Error::NonFinite(format!("log m at x = {x}")));
                }
                c.insert(x.to_bits(), v);
            }
        }
        let c = cache.borrow();
        Ok(xs.iter().map(|x| c[&x.to_bits()]).collect())
    };
    let by_theta = |ths: &[f64]| -> Result<Vec<f64>> {
        let xs: Vec<f64> = ths.iter().map(|th| th.tan()).collect();
        eval_x(&xs)
    };
    let quad = integrate_batched(by_theta, -t, t, opts.initial_panels, opts.abs_tol, opts.rel_tol, opts.max_evals)?;
    let (mut pos, mut neg) = (Neumaier::new(), Neumaier::new());
    for &(a, b) in &quad.panels {
        let nodes = panel_nodes(a, b);
        let vals = by_theta(&nodes)?;
        let mut p = [0.0; 15];
        let mut q = [0.0; 15];
        for i in 0..15 {
            p[i] = vals[i].max(0.0);
            q[i] = vals[i].min(0.0);
        }
        pos.add(gk15_from_values(a, b, &p).0);
        neg.add(gk15_from_values(a, b, &q).0);
    }

    let ends = eval_x(&[-r, -0.5 * r, 0.5 * r, r])?;
    let arc = FRAC_PI_2 - t;
    let ln_r = r.ln();
    let (tail_value, divergent) = match tail {
        LogTail::LogLinear { slope } => {
            let c = ends[0] + ends[3] - 2.0 * slope * ln_r;
            (2.0 * slope * log_tail_integral(r) + c * arc, false)
        }
        LogTail::Auto => {
            let mut total = 0.0;
            let mut divergent = false;
            for (half, full) in [(ends[1], ends[0]), (ends[2], ends[3])] {
                let slope = (full - half) / 2f64.ln();
                if half > 0.0 && full > 0.0 && (full / half).log2() >= DIVERGENT_TAIL_EXPONENT {
                    divergent = true;
                } else {
                    let c = full - slope * ln_r;
                    total += slope * log_tail_integral(r) + c * arc;
                }
            }
            (total, divergent)
        }
    };
    let (tail_value, value) =
        if divergent { (f64::INFINITY, f64::INFINITY) } else { (tail_value, quad.value + tail_value) };
    let v = AkhiezerValue {
        n: None,
        value,
        window: quad.value,
        positive: pos.value(),
        negative: neg.value(),
        tail: tail_value,
        tail_divergent: divergent,
        error: quad.error,
        evaluations: cache.borrow().len(),
    };
    Ok((v, quad.panels))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AkhiezerReport {
    pub values: Vec<AkhiezerValue>,
    pub verdict: Growth,
}

/// Lower bounds for I_n = ∫ log m_n(x)/(1+x²) dx, n in `degrees` (ascending).
/// The panels are chosen adaptively for the largest n and reused for the
/// others; at every node the running maximum over smaller n is kept, which is
/// still a lower bound for m_n since m_n is nondecreasing in n.
pub fn akhiezer_profile(
    w: &Weight,
    degrees: &[usize],
    quad: &AkhiezerOptions,
    opts: &MajorantOptions,
) -> Result<AkhiezerReport> {
    let mut degrees = degrees.to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    let n_max = *degrees.last().ok_or_else(|| Error::Precondition("empty degree list".into()))?;
    let opts = MajorantOptions { unbounded_at: f64::INFINITY, ..opts.clone() };
    let problem = MajorantProblem::new(w, Family::Polynomials { degree: n_max }, opts.clone())?;
    let exec = opts.exec;
    // log m_n(x) for every n in `degrees`, monotone in n
    let profile_at = |x: f64| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(degrees.len());
        let mut run = f64::NEG_INFINITY;
        for &n in &degrees {
            let v = problem.solve_prefix(Complex64::new(x, 0.0), n + 1)?.value.ln();
            run = run.max(v);
            out.push(run);
        }
        Ok(out)
    };
    let table: RefCell<HashMap<u64, Vec<f64>>> = RefCell::new(HashMap::new());
    let fill = |xs: &[f64]| -> Result<()> {
        let missing: Vec<f64> = xs.iter().copied().filter(|x| !table.borrow().contains_key(&x.to_bits())).collect();
        let rows = par::map(exec, &missing, |&x| profile_at(x));
        let mut t = table.borrow_mut();
        for (x, row) in missing.iter().zip(rows) {
            t.insert(x.to_bits(), row?);
        }
        Ok(())
    };
    let last = degrees.len() - 1;
    let (top, panels) = log_integral_with_panels(
        |xs| {
            fill(xs)?;
            let t = table.borrow();
            Ok(xs.iter().map(|x| t[&x.to_bits()][last]).collect())
        },
        LogTail::LogLinear { slope: n_max as f64 },
        quad,
    )?;
    let mut values = Vec::with_capacity(degrees.len());
    for (j, &n) in degrees.iter().enumerate() {
        let mut v = if j == last {
            top.clone()
        } else {
            reuse_panels(&table.borrow(), j, n, quad.radius, &panels, top.evaluations)?
        };
        v.n = Some(n);
        values.push(v);
    }
    let verdict = classify_log_growth(&values.iter().map(|v| v.value).collect::<Vec<_>>());
    Ok(AkhiezerReport { values, verdict })
}

fn reuse_panels(
    table: &HashMap<u64, Vec<f64>>,
    j: usize,
    n: usize,
    r: f64,
    panels: &[(f64, f64)],
    evaluations: usize,
) -> Result<AkhiezerValue> {
    let lookup = |x: f64| -> Result<f64> {
        table.get(&x.to_bits()).map(|row| row[j]).ok_or_else(|| Error::NonFinite(format!("missing node {x}")))
    };
    let (mut val, mut err, mut pos, mut neg) = (Neumaier::new(), 0.0, Neumaier::new(), Neumaier::new());
    for &(a, b) in panels {
        let nodes = panel_nodes(a, b);
        let mut v = [0.0; 15];
        for i in 0..15 {
            v[i] = lookup(nodes[i].tan())?;
        }
        let (q, e) = gk15_from_values(a, b, &v);
        val.add(q);
        err += e;
        pos.add(gk15_from_values(a, b, &v.map(|x| x.max(0.0))).0);
        neg.add(gk15_from_values(a, b, &v.map(|x| x.min(0.0))).0);
    }
    let c = lookup(-r)? + lookup(r)? - 2.0 * n as f64 * r.ln();
    let tail = 2.0 * n as f64 * log_tail_integral(r) + c * (FRAC_PI_2 - r.atan());
    Ok(AkhiezerValue {
        n: Some(n),
        value: val.value() + tail,
        window: val.value(),
        positive: pos.value(),
        negative: neg.value(),
        tail,
        tail_divergent: false,
        error: err,
        evaluations,
    })
}

/// [`classify_growth`] applied to exp(I/π), the Poisson-weighted geometric
/// mean of m on the line; this puts additive growth of the log-integrals on
/// the same ratio scale as the majorant sequence.
pub fn classify_log_growth(seq: &[f64]) -> Growth {
    let g: Vec<f64> = seq.iter().map(|v| (v / PI).exp()).collect();
    classify_growth(&g)
}

/// akhiezer_profile for a single n.
pub fn akhiezer_integral(
    w: &Weight,
    n: usize,
    quad: &AkhiezerOptions,
    opts: &MajorantOptions,
) -> Result<AkhiezerValue> {
    Ok(akhiezer_profile(w, &[n], quad, opts)?.values.remove(0))
}

/// ∫ log|P(x)|/(1+x²) dx = π(ln|lead| + Σ ln|i − r̄|), roots r reflected into
/// the closed upper half-plane.
pub fn pollard_functional(p: &Polynomial) -> f64 {
    if p.is_zero() {
        return f64::NEG_INFINITY;
    }
    let roots = polyroots::roots(p.coeffs());
    let mut s = Neumaier::new();
    s.add(p.leading().norm().ln());
    for r in roots {
        s.add(0.5 * (r.re * r.re + (1.0 + r.im.abs()).powi(2)).ln());
    }
    PI * s.value()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PollardValue {
    pub n: usize,
    /// Best ∫ log|P|/(1+x²) over the feasible P tried.
    pub value: f64,
    /// Value of the best seed before perturbation.
    pub seed_value: f64,
    pub coefficients: Vec<Complex64>,
    pub accepted_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PollardReport {
    pub values: Vec<PollardValue>,
    pub verdict: Growth,
}

/// Best Pollard functional over the seeds (rescaled onto the unit sphere of
/// the sampled seminorm) and `iters` seeded random perturbations of the best.
pub fn pollard_sup(
    problem: &MajorantProblem,
    seeds: &[ExtremalSolution],
    n: usize,
    iters: usize,
    seed: u64,
) -> Result<PollardValue> {
    let k = n + 1;
    let basis = problem.basis();
    let eval = |c: &[Complex64]| -> Option<f64> {
        let norm = problem.sampled_seminorm(c, k);
        if !(norm > 0.0) || !norm.is_finite() {
            return None;
        }
        let p = match basis.to_entire(c) {
            EntireFn::Polynomial(p) => p,
            _ => return None,
        };
        let j = pollard_functional(&p) - PI * norm.ln();
        j.is_finite().then_some(j)
    };
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    let consider = |c: Vec<Complex64>, best: &mut Option<(f64, Vec<Complex64>)>| {
        if let Some(j) = eval(&c) {
            if best.as_ref().is_none_or(|b| j > b.0) {
                *best = Some((j, c));
            }
        }
    };
    let mut constant = vec![Complex64::new(0.0, 0.0); k];
    constant[0] = Complex64::new(1.0, 0.0);
    consider(constant, &mut best);
    for s in seeds {
        let mut c = s.coefficients.clone();
        c.resize(k, Complex64::new(0.0, 0.0));
        c.truncate(k);
        consider(c, &mut best);
    }
    let (seed_value, mut coeffs) = best.ok_or_else(|| Error::NonFinite("no feasible seed".into()))?;
    let mut value = seed_value;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut step = 0.05;
    let mut accepted = 0;
    for _ in 0..iters {
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let trial: Vec<Complex64> = coeffs
            .iter()
            .map(|c| c + Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * step * scale)
            .collect();
        match eval(&trial) {
            Some(j) if j > value => {
                value = j;
                coeffs = trial;
                accepted += 1;
                step *= 1.5;
            }
            _ => step *= 0.8,
        }
        step = step.clamp(1e-8, 1.0);
    }
    let norm = problem.sampled_seminorm(&coeffs, k);
    let coefficients = match basis.to_entire(&coeffs.iter().map(|c| c / norm).collect::<Vec<_>>()) {
        EntireFn::Polynomial(p) => p.coeffs().to_vec(),
        _ => Vec::new(),
    };
    Ok(PollardValue { n, value, seed_value, coefficients, accepted_steps: accepted })
}

/// ψ(x) = (erf(x+2) − erf(x−2))/2, a mollified indicator of [−2, 2]. The
/// probe approximates f = W·ψ, so the seminorm error is sup |ψ − P/W|.
pub fn window_target(x: f64) -> f64 {
    0.5 * (statrs::function::erf::erf(x + 2.0) - statrs::function::erf::erf(x - 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub degrees: Vec<usize>,
    /// inf_P sup_x |ψ(x) − P(x)/W(x)| over the sampled grid.
    pub distances: Vec<f64>,
    pub decayed: bool,
}

/// Best-approximation distance from W·ψ to polynomials of each degree, on
/// the weight's sample points under `plan`.
pub fn best_approximation_distance(
    w: &Weight,
    degrees: &[usize],
    plan: &SamplingPlan,
    opts: &MajorantOptions,
) -> Result<DistanceReport> {
    let xs = w.sample_points(plan);
    if xs.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let lw: Vec<f64> = xs.iter().map(|&x| w.ln_eval(x)).collect();
    let lmin = lw.iter().copied().fold(f64::INFINITY, f64::min);
    let keep: Vec<usize> = (0..xs.len()).filter(|&i| lw[i] <= lmin + 700.0).collect();
    let pts: Vec<(f64, f64)> = keep.iter().map(|&i| (xs[i], (-lw[i]).exp())).collect();
    let target: Vec<f64> = pts.iter().map(|&(x, _)| window_target(x)).collect();
    let mut distances = Vec::with_capacity(degrees.len());
    for &n in degrees {
        let d = match Basis::polynomial(&pts, n) {
            Ok(basis) => {
                let rows: Vec<Vec<f64>> =
                    pts.iter().map(|&(x, v)| basis.eval_real(x, n + 1).iter().map(|q| q * v).collect()).collect();
                annihilator_program(&rows, &target, opts.pricing)?.0.max(0.0)
            }
            // the polynomials interpolate every sample point
            Err(Error::DegenerateGrid(_)) => 0.0,
            Err(e) => return Err(e),
        };
        distances.push(d);
    }
    let decayed = distances.last().is_some_and(|&d| d < DISTANCE_THRESHOLD);
    Ok(DistanceReport { degrees: degrees.to_vec(), distances, decayed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overall {
    DenseLikely,
    NonDenseCertified,
    Inconclusive,
}

impl Overall {
    pub fn exit_code(self) -> i32 {
        match self {
            Overall::DenseLikely => 0,
            Overall::NonDenseCertified => 1,
            Overall::Inconclusive => 2,
        }
    }
}

/// Which hypotheses of the two frameworks the weight visibly meets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub continuous_weight: bool,
    /// x^n/W(x) decays for every n ≤ n_max on the sampled Ω.
    pub moments_decay: bool,
    /// Continuous W with decaying moments: the three growth tests apply.
    pub growth_tests_apply: bool,
    /// A certificate was supplied; its validation governs non-density.
    pub certificate_supplied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionBudget {
    pub n_max: usize,
    pub probe: Complex64,
    /// Degrees used for the log-integral and Pollard sequences.
    pub integral_degrees: Vec<usize>,
    pub akhiezer: AkhiezerOptions,
    pub pollard_iters: usize,
    pub seed: u64,
    pub distance_plan: SamplingPlan,
    pub k4_per_side: usize,
    pub majorant: MajorantOptions,
}

impl Default for DecisionBudget {
    fn default() -> Self {
        Self {
            n_max: 12,
            probe: Complex64::i(),
            integral_degrees: vec![4, 6, 8, 10, 12],
            akhiezer: AkhiezerOptions::default(),
            pollard_iters: 200,
            seed: 0,
            distance_plan: SamplingPlan::new(10.0, 0.02),
            k4_per_side: 100_000,
            majorant: MajorantOptions::default(),
        }
    }
}

impl DecisionBudget {
    /// Degrees for the integral tests, clipped to n_max.
    fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.integral_degrees.iter().copied().filter(|&n| n <= self.n_max).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub mergelyan: Option<MergelyanReport>,
    pub akhiezer: Option<AkhiezerReport>,
    pub pollard: Option<PollardReport>,
    pub distance: Option<DistanceReport>,
    pub certificate: Option<CertificateValidation>,
    pub hypotheses: Hypotheses,
    /// Failures of individual tests; the report is still produced.
    pub notes: Vec<String>,
    pub overall: Overall,
}

/// Runs the growth tests, the distance probe and, when given, validates the
/// certificate. Non-dense-certified needs a valid certificate; dense-likely
/// needs all three growth tests diverging and the distance below
/// [`DISTANCE_THRESHOLD`]. Anything else, including test failures, is
/// inconclusive.
pub fn decide_density(
    w: &Weight,
    family: &Family,
    budget: &DecisionBudget,
    cert: Option<&KreinCertificate>,
) -> CriteriaReport {
    let mut notes = Vec::new();
    let n_max = match family {
        Family::Polynomials { degree } => (*degree).min(budget.n_max),
        Family::Exponentials { .. } => {
            notes.push("growth tests are implemented for polynomial families only".into());
            0
        }
    };
    let budget = DecisionBudget { n_max, ..budget.clone() };
    let polynomial = matches!(family, Family::Polynomials { .. });
    let members: Vec<EntireFn> = (0..=n_max).map(EntireFn::monomial).collect();

    let continuous = !w.is_discrete();
    let moments_decay = match check_containment(w, &members, budget.majorant.plan.radius) {
        Ok(r) => r.members.iter().all(|m| m.verdict == DecayVerdict::Decaying),
        Err(e) => {
            notes.push(format!("containment: {e}"));
            false
        }
    };
    let hypotheses = Hypotheses {
        continuous_weight: continuous,
        moments_decay,
        growth_tests_apply: continuous && moments_decay,
        certificate_supplied: cert.is_some(),
    };

    let certificate = cert.and_then(|c| {
        let family_members = family.members();
        match validate_certificate(c, w, &family_members, &crate::espace::default_schedule(), budget.k4_per_side) {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(format!("certificate: {e}"));
                None
            }
        }
    });

    let (mergelyan, akhiezer, pollard, distance) = if polynomial {
        let mergelyan = keep(&mut notes, "mergelyan", mergelyan_test(w, n_max, budget.probe, &budget.majorant));
        let degrees = budget.degrees();
        let akhiezer = if degrees.is_empty() {
            None
        } else {
            keep(&mut notes, "akhiezer", akhiezer_profile(w, &degrees, &budget.akhiezer, &budget.majorant))
        };
        let pollard =
            if degrees.is_empty() { None } else { keep(&mut notes, "pollard", pollard_profile(w, &degrees, &budget)) };
        let ddeg: Vec<usize> = (0..=n_max).step_by(2).collect();
        let distance = keep(
            &mut notes,
            "distance",
            best_approximation_distance(w, &ddeg, &budget.distance_plan, &budget.majorant),
        );
        (mergelyan, akhiezer, pollard, distance)
    } else {
        (None, None, None, None)
    };

    let diverging = |g: Option<Growth>| g == Some(Growth::Diverging);
    let overall = if certificate.as_ref().is_some_and(|c| c.valid) {
        Overall::NonDenseCertified
    } else if diverging(mergelyan.as_ref().map(|m| m.verdict))
        && diverging(akhiezer.as_ref().map(|a| a.verdict))
        && diverging(pollard.as_ref().map(|p| p.verdict))
        && distance.as_ref().is_some_and(|d| d.decayed)
    {
        Overall::DenseLikely
    } else {
        Overall::Inconclusive
    };
    CriteriaReport { mergelyan, akhiezer, pollard, distance, certificate, hypotheses, notes, overall }
}

fn keep<T>(notes: &mut Vec<String>, name: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("{name}: {e}"));
            None
        }
    }
}

/// Pollard lower bounds for each degree, seeded by the extremal polynomials
/// of the majorant at the probe.
pub fn pollard_profile(w: &Weight, degrees: &[usize], budget: &DecisionBudget) -> Result<PollardReport> {
    let n_max = degrees.iter().copied().max().ok_or_else(|| Error::Precondition("empty degree list".into()))?;
    let problem = MajorantProblem::new(w, Family::Polynomials { degree: n_max }, budget.majorant.clone())?;
    let values = degrees
        .iter()
        .map(|&n| {
            let seeds: Vec<ExtremalSolution> = [budget.probe, Complex64::new(0.0, 2.0)]
                .iter()
                .filter_map(|&z| problem.solve_prefix(z, n + 1).ok())
                .collect();
            pollard_sup(&problem, &seeds, n, budget.pollard_iters, budget.seed.wrapping_add(n as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = classify_log_growth(&values.iter().map(|v| v.value).collect::<Vec<_>>());
    Ok(PollardReport { values, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_tail_matches_quadrature() {
        let f = |x: f64| x.ln() / (1.0 + x * x);
        // ∫_R^∞ = ∫_0^{1/R} −ln u/(1+u²) du
        let g = |u: f64| -u.ln() / (1.0 + u * u);
        let q = crate::numeric::quadrature::integrate(&g, 0.0, 0.01, 1e-15, 1e-13, 100_000).unwrap();
        assert!((log_tail_integral(100.0) - q.value).abs() < 1e-12);
        let direct = crate::numeric::quadrature::integrate(&f, 100.0, 1e7, 1e-12, 1e-12, 1_000_000).unwrap();
        // the remainder beyond 1e7 is (ln 1e7 + 1)/1e7 to leading order
        assert!((log_tail_integral(100.0) - direct.value - (1e7f64.ln() + 1.0) / 1e7).abs() < 1e-9);
    }

    #[test]
    fn constant_majorants() {
        let opts = AkhiezerOptions { abs_tol: 1e-12, rel_tol: 1e-12, ..Default::default() };
        let e = akhiezer_log_integral(|xs| Ok(vec![1.0; xs.len()]), LogTail::Auto, &opts).unwrap();
        assert!((e.value - PI).abs() < 1e-10, "{}", e.value);
        let one = akhiezer_log_integral(|xs| Ok(vec![0.0; xs.len()]), LogTail::Auto, &opts).unwrap();
        assert_eq!(one.value, 0.0);
    }

    #[test]
    fn quadratic_log_majorant_is_tail_divergent() {
        let opts = AkhiezerOptions::default();
        let r = akhiezer_log_integral(|xs| Ok(xs.iter().map(|x| x * x).collect()), LogTail::Auto, &opts).unwrap();
        assert!(r.tail_divergent && r.value.is_infinite());
        // window part ∫ x²/(1+x²) = 2R − 2 atan R
        assert!((r.window - (200.0 - 2.0 * 100f64.atan())).abs() < 1e-6 * 200.0);
    }

    #[test]
    fn pollard_of_constants() {
        assert_eq!(pollard_functional(&Polynomial::real(&[1.0])), 0.0);
        let c = 0.3;
        assert!((pollard_functional(&Polynomial::real(&[c])) - PI * c.ln()).abs() < 1e-14);
        // ∫ log|x² + 1|/(1+x²) = 2π ln 2
        let p = Polynomial::real(&[1.0, 0.0, 1.0]);
        assert!((pollard_functional(&p) - 2.0 * PI * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn real_probe_is_rejected() {
        let w = Weight::gaussian();
        let e = mergelyan_test(&w, 2, Complex64::new(0.5, 0.0), &MajorantOptions::default());
        assert!(matches!(e, Err(Error::Precondition(_))));
    }
}
