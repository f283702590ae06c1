//! Krein-class certificates: an entire B with real simple zeros, B = B#,
//! that dominates the family along the imaginary axis and whose zeros carry
//! a summable weight Σ W(x)/|B′(x)|.

use crate::error::{Error, Result};
use crate::espace::{mean_type_ratio, EntireFn, MeanTypeEstimate, Polynomial, ZeroProduct, ZeroSet};
use crate::numeric::summation::Neumaier;
use crate::par::{self, Execution};
use crate::weight::Weight;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Zeros listed per side in a certificate for infinite zero sets.
pub const LISTED_PER_SIDE: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeclaredClass {
    Polynomial,
    ZeroTypeProduct,
    SineType,
}

/// B′ at one zero; `bound` covers rounding and any imaginary residue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivEntry {
    pub x: f64,
    pub deriv: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KreinCertificate {
    pub b: EntireFn,
    /// Strictly increasing. Every zero for finite sets, otherwise the first
    /// [`LISTED_PER_SIDE`] per side.
    pub zeros: Vec<f64>,
    pub complete: bool,
    pub deriv_at_zeros: Vec<DerivEntry>,
    pub declared_class: DeclaredClass,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Real roots of a polynomial with real coefficients, ascending. Roots are
/// isolated between consecutive critical points (roots of the derivative,
/// found recursively) and refined by bisection; a multiple root shows up
/// once.
pub fn real_roots(p: &Polynomial) -> Vec<f64> {
    let a: Vec<f64> = p.coeffs().iter().map(|z| z.re).collect();
    real_roots_coeffs(&a)
}

fn horner(a: &[f64], x: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

fn real_roots_coeffs(a: &[f64]) -> Vec<f64> {
    let mut a = a.to_vec();
    while a.len() > 1 && *a.last().unwrap() == 0.0 {
        a.pop();
    }
    let d = a.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        return vec![-a[0] / a[1]];
    }
    let lead = a[d];
    let bound = 1.0 + a[..d].iter().map(|v| (v / lead).abs()).fold(0.0, f64::max);
    let da: Vec<f64> = (1..=d).map(|k| k as f64 * a[k]).collect();
    let mut knots = vec![-bound];
    knots.extend(real_roots_coeffs(&da).into_iter().filter(|x| x.abs() < bound));
    knots.push(bound);
    let scale: f64 = a.iter().map(|v| v.abs()).sum();
    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|&l| (r - l).abs() > 1e-12 * (1.0 + r.abs())) {
            roots.push(r);
        }
    };
    for w in knots.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (horner(&a, lo), horner(&a, hi));
        let touch = |x: f64, f: f64| f.abs() <= 1e-14 * scale * (1.0 + x.abs()).powi(d as i32);
        if touch(lo, flo) {
            push(lo, &mut roots);
        }
        if flo.signum() * fhi.signum() < 0.0 && !touch(lo, flo) && !touch(hi, fhi) {
            let s = flo.signum();
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if horner(&a, mid).signum() == s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            push(0.5 * (lo + hi), &mut roots);
        }
        if touch(hi, fhi) && w[1] != bound {
            push(hi, &mut roots);
        }
    }
    roots
}

impl KreinCertificate {
    /// Lists the zeros of `b` and B′ there. `b` must be a real-rooted
    /// Polynomial or a ZeroProduct.
    pub fn new(b: EntireFn, declared_class: DeclaredClass) -> Result<Self> {
        let (zeros, complete) = match &b {
            EntireFn::Polynomial(p) => {
                let z = match p.root_form() {
                    Some(rf) => {
                        let mut r = rf.roots.clone();
                        r.sort_by(f64::total_cmp);
                        r
                    }
                    None => real_roots(p),
                };
                (z, true)
            }
            EntireFn::ZeroProduct(zp) => {
                let mut z = zp.zeros(LISTED_PER_SIDE);
                z.sort_by(f64::total_cmp);
                (z, zp.is_finite())
            }
            _ => return Err(Error::InvalidSpec("certificate function must be a Polynomial or a ZeroProduct".into())),
        };
        let deriv_at_zeros = zeros.iter().map(|&x| deriv_entry(&b, x)).collect::<Result<Vec<_>>>()?;
        Ok(Self { b, zeros, complete, deriv_at_zeros, declared_class })
    }

    pub fn sin_pi() -> Self {
        Self::new(EntireFn::sin_pi(), DeclaredClass::SineType).expect("sine certificate")
    }

    /// B(z) = z·Π_{k_min ≤ k ≤ k_max}(1 − z²/base^{2k}).
    pub fn lacunary(base: f64, k_min: i32, k_max: i32) -> Result<Self> {
        let zp = ZeroProduct::new(c(1.0), true, ZeroSet::Lacunary { base, k_min, k_max }, true)?;
        Self::new(zp.into(), DeclaredClass::ZeroTypeProduct)
    }

    /// Zeros with B′, ordered by |x|. Infinite zero sets are cut at `per_side`
    /// zeros on each side of the core sequence.
    pub fn zeros_with_derivatives(&self, per_side: usize, exec: Execution) -> Result<Vec<DerivEntry>> {
        let zeros = match &self.b {
            EntireFn::ZeroProduct(zp) if !zp.is_finite() => zp.zeros(per_side),
            _ => {
                let mut z = self.zeros.clone();
                z.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
                z
            }
        };
        par::map(exec, &zeros, |&x| deriv_entry(&self.b, x)).into_iter().collect()
    }
}

fn deriv_entry(b: &EntireFn, x: f64) -> Result<DerivEntry> {
    let d = match b {
        EntireFn::Polynomial(p) => p.derivative_at(c(x)),
        EntireFn::ZeroProduct(zp) => zp.derivative_at_zero(x)?,
        other => other.derivative_at(c(x))?,
    };
    if !d.re.is_finite() {
        return Err(Error::NonFinite(format!("B′({x})")));
    }
    Ok(DerivEntry { x, deriv: d.re, bound: d.im.abs() + 1e-12 * d.norm() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub pass: bool,
    pub reasons: Vec<String>,
}

impl CheckResult {
    fn from_reasons(reasons: Vec<String>) -> Self {
        Self { pass: reasons.is_empty(), reasons }
    }
}

/// K1: zeros exist, are real and simple, and B = B#.
pub fn check_k1(cert: &KreinCertificate) -> CheckResult {
    let mut reasons = Vec::new();
    if cert.zeros.is_empty() {
        reasons.push("B has no real zeros".to_string());
    }
    if cert.zeros.windows(2).any(|w| !(w[0] < w[1])) {
        reasons.push("zeros are not strictly increasing".to_string());
    }
    for e in &cert.deriv_at_zeros {
        if !(e.deriv.abs() > 1e3 * e.bound) {
            reasons.push(format!("B′ vanishes at the zero {}", e.x));
        }
    }
    match &cert.b {
        EntireFn::Polynomial(p) => {
            if p.coeffs().iter().any(|z| z.im != 0.0) {
                reasons.push("coefficients are not real, so B ≠ B#".to_string());
            } else if p.degree() > 0 && cert.zeros.len() != p.degree() {
                reasons.push(format!(
                    "{} distinct real zeros for degree {}: the rest are complex or multiple",
                    cert.zeros.len(),
                    p.degree()
                ));
            }
            for &x in &cert.zeros {
                let r = p.eval(c(x)).norm();
                if r > 1e-8 * p.local_norm(c(x)) {
                    reasons.push(format!("B({x}) = {r:e} is not a zero"));
                }
            }
        }
        EntireFn::ZeroProduct(zp) => {
            if zp.gamma().im != 0.0 {
                reasons.push("multiplier γ is not real, so B ≠ B#".to_string());
            }
        }
        _ => reasons.push("unsupported representation for B".to_string()),
    }
    CheckResult::from_reasons(reasons)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum K2Verdict {
    Guaranteed,
    Unknown,
}

fn bounded_type_numerator(f: &EntireFn) -> bool {
    match f {
        EntireFn::Polynomial(_) | EntireFn::ExpSum(_) => true,
        EntireFn::Product(fs) => fs.iter().all(bounded_type_numerator),
        EntireFn::Combination(ts) => ts.iter().all(|(_, f)| bounded_type_numerator(f)),
        _ => false,
    }
}

/// K2 by representation class: polynomials and finite exponential sums over
/// a polynomial, a zero-type product or a sine-type product are of bounded
/// type in both half-planes. Nothing else is claimed.
pub fn check_k2_structural(cert: &KreinCertificate, family: &[EntireFn]) -> K2Verdict {
    let b_ok = match (&cert.b, cert.declared_class) {
        (EntireFn::Polynomial(_), DeclaredClass::Polynomial) => true,
        (EntireFn::ZeroProduct(zp), DeclaredClass::ZeroTypeProduct) => zp.type_bound() == 0.0,
        (EntireFn::ZeroProduct(zp), DeclaredClass::SineType) => {
            matches!(zp.zero_set(), ZeroSet::Arithmetic { .. }) && zp.added().len() == zp.removed().len()
        }
        _ => false,
    };
    if b_ok && family.iter().all(bounded_type_numerator) {
        K2Verdict::Guaranteed
    } else {
        K2Verdict::Unknown
    }
}

/// Thresholds of the K3 trend test.
pub const K3_TRAIL: usize = 5;
pub const K3_LEVEL: f64 = -10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct K3Member {
    pub pass: bool,
    /// (y, ln|F(iy)| − ln|B(iy)|) for y > 0, then for −y.
    pub upper: Vec<(f64, f64)>,
    pub lower: Vec<(f64, f64)>,
}

fn ln_ratio_at(f: &EntireFn, b: &EntireFn, y: f64) -> Result<(f64, f64)> {
    let at = |y: f64| -> Result<f64> {
        let z = Complex64::new(0.0, y);
        Ok(f.eval_ln(z)?.re - b.eval_ln(z)?.re)
    };
    let r = at(y)?;
    if r.is_finite() {
        return Ok((y, r));
    }
    // a zero of F or B on the axis: step half a geometric schedule step away
    let y2 = y * 2f64.sqrt();
    let r2 = at(y2)?;
    if r2.is_finite() {
        Ok((y2, r2))
    } else {
        Err(Error::NonFinite(format!("ln|F/B| at iy, y = {y}")))
    }
}

fn trend_passes(series: &[(f64, f64)], extra: impl Fn(f64) -> f64) -> bool {
    if series.len() < K3_TRAIL {
        return false;
    }
    let tail: Vec<f64> = series[series.len() - K3_TRAIL..].iter().map(|&(y, r)| r + extra(y)).collect();
    tail.windows(2).all(|w| w[1] < w[0]) && *tail.last().unwrap() < K3_LEVEL
}

/// K3 for each member: ln|F(iy)/B(iy)| strictly decreasing over the last
/// [`K3_TRAIL`] schedule points and below [`K3_LEVEL`], along both +i∞ and −i∞.
pub fn check_k3(cert: &KreinCertificate, family: &[EntireFn], schedule: &[f64]) -> Result<Vec<K3Member>> {
    check_k3_weighted(cert, family, schedule, |_| 0.0)
}

pub(crate) fn check_k3_weighted(
    cert: &KreinCertificate,
    family: &[EntireFn],
    schedule: &[f64],
    extra: impl Fn(f64) -> f64 + Copy,
) -> Result<Vec<K3Member>> {
    family
        .iter()
        .map(|f| {
            let upper = schedule.iter().map(|&y| ln_ratio_at(f, &cert.b, y)).collect::<Result<Vec<_>>>()?;
            let lower = schedule
                .iter()
                .map(|&y| ln_ratio_at(f, &cert.b, -y).map(|(y, r)| (-y, r)))
                .collect::<Result<Vec<_>>>()?;
            let flipped: Vec<(f64, f64)> = lower.iter().map(|&(y, r)| (-y, r)).collect();
            let pass = trend_passes(&upper, extra) && trend_passes(&flipped, extra);
            Ok(K3Member { pass, upper, lower })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum K4Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum TailModel {
    /// Every zero is listed; nothing is left over.
    Exhaustive,
    /// Terms shrink at least geometrically per magnitude level.
    Geometric {
        ratio: f64,
    },
    /// Terms decay like |x|^(−p).
    PowerLaw {
        p: f64,
    },
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct K4Term {
    pub x: f64,
    /// W(x)/|B′(x)|
    pub term: f64,
    pub ln_term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct K4Report {
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub terms: Vec<K4Term>,
    /// Least-squares slope of ln(term) against magnitude level (levels of
    /// nonzero |x|, counted from 1).
    pub level_slope: f64,
    pub tail_model: TailModel,
    pub verdict: K4Verdict,
}

/// Required decay margins for the tail models.
const GEOMETRIC_MARGIN: f64 = 0.05;
const POWER_MARGIN: f64 = 0.05;

/// K4 with the terms multiplied by |x|^power (power 1 gives the N8 sum).
pub(crate) fn k4_sum(
    cert: &KreinCertificate,
    w: &Weight,
    per_side: usize,
    power: i32,
    exec: Execution,
) -> Result<K4Report> {
    let entries = cert.zeros_with_derivatives(per_side, exec)?;
    let mut terms = Vec::with_capacity(entries.len());
    for e in &entries {
        let lw = w.ln_eval(e.x);
        if lw == f64::INFINITY {
            return Err(Error::WeightInfiniteAtZero(e.x));
        }
        let lx = if power == 0 { 0.0 } else { power as f64 * e.x.abs().ln() };
        let ln_term = lw + lx - e.deriv.abs().ln();
        terms.push(K4Term { x: e.x, term: ln_term.exp(), ln_term });
    }
    let mut acc = Neumaier::new();
    for t in &terms {
        acc.add(t.term);
    }
    let partial_sum = acc.value();

    // per magnitude level: the largest term, and the number of zeros sharing it
    let mut levels: Vec<(f64, f64, usize)> = Vec::new();
    for t in terms.iter().filter(|t| t.x != 0.0) {
        match levels.last_mut() {
            Some(l) if (l.0 - t.x.abs()).abs() <= 1e-12 * l.0 => {
                l.1 = l.1.max(t.ln_term);
                l.2 += 1;
            }
            _ => levels.push((t.x.abs(), t.ln_term, 1)),
        }
    }
    let level_slope =
        regression_slope(&levels.iter().enumerate().map(|(i, l)| ((i + 1) as f64, l.1)).collect::<Vec<_>>());
    let infinite = matches!(&cert.b, EntireFn::ZeroProduct(zp) if !zp.is_finite());

    let (tail_model, tail_bound, verdict) = if !infinite {
        let v = if partial_sum.is_finite() { K4Verdict::Convergent } else { K4Verdict::Divergent };
        (TailModel::Exhaustive, 0.0, v)
    } else {
        tail_estimate(&levels)
    };
    Ok(K4Report { partial_sum, tail_bound, terms, level_slope, tail_model, verdict })
}

fn tail_estimate(levels: &[(f64, f64, usize)]) -> (TailModel, f64, K4Verdict) {
    let n = levels.len();
    if n < 8 {
        return (TailModel::None, f64::INFINITY, K4Verdict::Inconclusive);
    }
    let (a_last, l_last, mult) = levels[n - 1];
    let window = &levels[n - n.min(10)..];
    let geo = regression_slope(&window.iter().enumerate().map(|(i, l)| (i as f64, l.1)).collect::<Vec<_>>());
    if geo >= 0.0 || !l_last.is_finite() {
        return (TailModel::None, f64::INFINITY, K4Verdict::Divergent);
    }
    let t_last = l_last.exp() * mult as f64;
    if geo < -GEOMETRIC_MARGIN {
        let r = geo.exp();
        return (TailModel::Geometric { ratio: r }, t_last * r / (1.0 - r), K4Verdict::Convergent);
    }
    let (a_mid, l_mid, _) = levels[n / 2];
    let p = -(l_last - l_mid) / (a_last / a_mid).ln();
    let spacing = a_last - levels[n - 2].0;
    if p > 1.0 + POWER_MARGIN {
        // Σ_{a > a_last} C a^{−p} ≤ (1/spacing)∫_{a_last}^∞ C a^{−p} da
        let bound = t_last * a_last / (spacing * (p - 1.0));
        (TailModel::PowerLaw { p }, bound, K4Verdict::Convergent)
    } else if p < 1.0 - POWER_MARGIN {
        (TailModel::PowerLaw { p }, f64::INFINITY, K4Verdict::Divergent)
    } else {
        (TailModel::None, f64::INFINITY, K4Verdict::Inconclusive)
    }
}

fn regression_slope(pts: &[(f64, f64)]) -> f64 {
    let pts: Vec<&(f64, f64)> = pts.iter().filter(|p| p.1.is_finite()).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// K4: Σ W(x)/|B′(x)| over the zeros, `per_side` core zeros per side for
/// infinite zero sets, with a tail bound from a fitted decay model.
pub fn check_k4(cert: &KreinCertificate, w: &Weight, per_side: usize) -> Result<K4Report> {
    k4_sum(cert, w, per_side, 0, Execution::default())
}

/// B̃(z) = Π(z − x_i)/Π(z − y_j)·B(z) for added points x_i and removed zeros
/// y_j, with B̃′ at the listed zeros from the ratio formula and the product rule.
pub fn transform_zeros(cert: &KreinCertificate, add_points: &[f64], remove_zeros: &[f64]) -> Result<KreinCertificate> {
    if add_points.len() < remove_zeros.len() {
        return Err(Error::Precondition("at least as many added points as removed zeros are required".into()));
    }
    let distinct = |v: &[f64]| {
        let mut s = v.to_vec();
        s.sort_by(f64::total_cmp);
        s.windows(2).all(|w| w[0] < w[1])
    };
    if !distinct(add_points) || !distinct(remove_zeros) {
        return Err(Error::Precondition("added points and removed zeros must be distinct".into()));
    }
    for &x in add_points {
        if cert.b.eval(c(x))?.norm() <= 1e-12 * (1.0 + x.abs()) || remove_zeros.contains(&x) {
            return Err(Error::Precondition(format!("added point {x} is already a zero of B")));
        }
    }
    let b = match &cert.b {
        EntireFn::Polynomial(p) => {
            let mut roots: Vec<f64> = match p.root_form() {
                Some(rf) => rf.roots.clone(),
                None => cert.zeros.clone(),
            };
            for &y in remove_zeros {
                let i = roots
                    .iter()
                    .position(|&r| (r - y).abs() <= 1e-12 * (1.0 + y.abs()))
                    .ok_or_else(|| Error::Precondition(format!("{y} is not a zero of B")))?;
                roots.remove(i);
            }
            roots.extend_from_slice(add_points);
            EntireFn::Polynomial(Polynomial::from_real_roots(p.leading(), roots))
        }
        EntireFn::ZeroProduct(zp) => {
            let mut out = zp.clone();
            let mut s = c(1.0);
            for &y in remove_zeros {
                out = out.remove_zero(y).map_err(|_| Error::Precondition(format!("{y} is not a zero of B")))?;
                // (1 − z/y) was divided out where (z − y) is wanted
                if y != 0.0 && !zp.added().contains(&y) {
                    s *= c(-1.0 / y);
                }
            }
            EntireFn::ZeroProduct(out.with_added(add_points).scaled(s))
        }
        _ => return Err(Error::InvalidSpec("certificate function must be a Polynomial or a ZeroProduct".into())),
    };
    let ratio = |x: f64| -> f64 {
        let num: f64 = add_points.iter().map(|&a| x - a).product();
        let den: f64 = remove_zeros.iter().map(|&y| x - y).product();
        num / den
    };
    let mut deriv_at_zeros = Vec::new();
    for e in &cert.deriv_at_zeros {
        if remove_zeros.iter().any(|&y| (y - e.x).abs() <= 1e-12 * (1.0 + y.abs())) {
            continue;
        }
        let r = ratio(e.x);
        deriv_at_zeros.push(DerivEntry { x: e.x, deriv: r * e.deriv, bound: r.abs() * e.bound });
    }
    for (i, &x) in add_points.iter().enumerate() {
        let others: f64 = add_points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &a)| x - a).product();
        let den: f64 = remove_zeros.iter().map(|&y| x - y).product();
        let bx = cert.b.eval(c(x))?;
        let d = others / den * bx.re;
        deriv_at_zeros.push(DerivEntry {
            x,
            deriv: d,
            bound: others.abs() / den.abs() * bx.im.abs() + 1e-12 * d.abs(),
        });
    }
    deriv_at_zeros.sort_by(|a, b| a.x.total_cmp(&b.x));
    let zeros = deriv_at_zeros.iter().map(|e| e.x).collect();
    Ok(KreinCertificate { b, zeros, complete: cert.complete, deriv_at_zeros, declared_class: cert.declared_class })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanTypeCondition {
    pub members: Vec<MeanTypeEstimate>,
    pub sup: f64,
}

/// sup over the family of mt(F/B).
pub fn mean_type_condition(
    cert: &KreinCertificate,
    family: &[EntireFn],
    schedule: &[f64],
) -> Result<MeanTypeCondition> {
    let members = family.iter().map(|f| mean_type_ratio(f, &cert.b, schedule)).collect::<Result<Vec<_>>>()?;
    let sup = members.iter().map(|m| m.slope).fold(f64::NEG_INFINITY, f64::max);
    Ok(MeanTypeCondition { members, sup })
}

/// K1–K4 together. `valid` requires every check to pass and K4 to converge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateValidation {
    pub k1: CheckResult,
    pub k2: K2Verdict,
    pub k3: Vec<K3Member>,
    pub k3_pass: bool,
    pub k4: K4Report,
    pub valid: bool,
}

pub fn validate_certificate(
    cert: &KreinCertificate,
    w: &Weight,
    family: &[EntireFn],
    schedule: &[f64],
    per_side: usize,
) -> Result<CertificateValidation> {
    let k1 = check_k1(cert);
    let k2 = check_k2_structural(cert, family);
    let k3 = check_k3(cert, family, schedule)?;
    let k3_pass = k3.iter().all(|m| m.pass);
    let k4 = check_k4(cert, w, per_side)?;
    let valid = k1.pass && k2 == K2Verdict::Guaranteed && k3_pass && k4.verdict == K4Verdict::Convergent;
    Ok(CertificateValidation { k1, k2, k3, k3_pass, k4, valid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::espace::default_schedule;
    use std::f64::consts::PI;

    #[test]
    fn real_roots_of_products() {
        let p = Polynomial::from_real_roots(c(1.0), vec![-3.0, 0.5, 2.0, 7.0]);
        let q = Polynomial::new(p.coeffs().to_vec());
        let r = real_roots(&q);
        assert_eq!(r.len(), 4);
        for (a, b) in r.iter().zip([-3.0, 0.5, 2.0, 7.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(real_roots(&Polynomial::real(&[1.0, 0.0, 1.0])).is_empty());
    }

    #[test]
    fn k1_examples() {
        assert!(check_k1(&KreinCertificate::sin_pi()).pass);
        let no_real =
            KreinCertificate::new(Polynomial::real(&[1.0, 0.0, 1.0]).into(), DeclaredClass::Polynomial).unwrap();
        assert!(!check_k1(&no_real).pass);
        let double =
            KreinCertificate::new(Polynomial::real(&[1.0, -2.0, 1.0]).into(), DeclaredClass::Polynomial).unwrap();
        assert!(!check_k1(&double).pass);
    }

    #[test]
    fn k2_rule_table() {
        let sine = KreinCertificate::sin_pi();
        assert_eq!(check_k2_structural(&sine, &[EntireFn::monomial(3)]), K2Verdict::Guaranteed);
        let poly =
            KreinCertificate::new(Polynomial::real(&[-1.0, 0.0, 1.0]).into(), DeclaredClass::Polynomial).unwrap();
        let e = crate::espace::ExpSum::single(0.5, c(1.0));
        assert_eq!(check_k2_structural(&poly, &[e.into()]), K2Verdict::Guaranteed);
        assert_eq!(check_k2_structural(&poly, &[EntireFn::sin_pi()]), K2Verdict::Unknown);
    }

    #[test]
    fn k3_examples() {
        let s = default_schedule();
        let sine = KreinCertificate::sin_pi();
        let r = check_k3(&sine, &[EntireFn::constant(1.0), sine.b.clone()], &s).unwrap();
        assert!(r[0].pass && !r[1].pass);
        // r(y) ≈ −πy + ln 2
        let (y, v) = r[0].upper[10];
        assert!((v - (-PI * y + 2f64.ln())).abs() < 1e-6);
        let lac = KreinCertificate::lacunary(2.0, 1, 12).unwrap();
        assert!(check_k3(&lac, &[EntireFn::monomial(5)], &s).unwrap()[0].pass);
    }

    #[test]
    fn k4_divergent_for_gaussian_weight() {
        let r = check_k4(&KreinCertificate::sin_pi(), &Weight::gaussian(), 200).unwrap();
        assert_eq!(r.verdict, K4Verdict::Divergent);
    }

    #[test]
    fn k4_rejects_weight_infinite_at_a_zero() {
        let w = Weight::discrete(vec![(0.0, 1.0), (1.0, 1.0)]).unwrap();
        assert!(matches!(check_k4(&KreinCertificate::sin_pi(), &w, 5), Err(Error::WeightInfiniteAtZero(_))));
    }

    #[test]
    fn transform_of_sine() {
        let t = transform_zeros(&KreinCertificate::sin_pi(), &[0.5], &[0.0]).unwrap();
        for e in &t.deriv_at_zeros {
            if e.x == 0.5 {
                continue;
            }
            let k = e.x;
            let sign = if (k as i64) % 2 == 0 { 1.0 } else { -1.0 };
            let want = (k - 0.5) / k * PI * sign;
            assert!((e.deriv - want).abs() < 1e-9 * want.abs(), "{k}");
            let direct = t.b.derivative_at(c(k)).unwrap().re;
            assert!((direct - want).abs() < 1e-6 * want.abs());
        }
        let id = transform_zeros(&KreinCertificate::sin_pi(), &[], &[]).unwrap();
        assert_eq!(id.deriv_at_zeros, KreinCertificate::sin_pi().deriv_at_zeros);
        assert!(transform_zeros(&KreinCertificate::sin_pi(), &[0.5], &[0.25]).is_err());
    }

    #[test]
    fn mean_type_of_ratio_with_itself_is_zero() {
        let lac = KreinCertificate::lacunary(2.0, 1, 8).unwrap();
        let m = mean_type_condition(&lac, std::slice::from_ref(&lac.b), &default_schedule()).unwrap();
        assert_eq!(m.sup, 0.0);
    }
}
