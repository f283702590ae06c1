//! Interpolation series over the zeros of a certificate, the annihilating
//! measure Σ δ_x/B′(x), and the finite model of the extremal-annihilator
//! construction: an LP vertex measure μ and the polynomial B with
//! B′(t) = 1/(g₀(t)μ({t})) on its support.

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::espace::{EntireFn, Polynomial};
use crate::krein::{self, check_k3_weighted, k4_sum, DeclaredClass, K3Member, K4Report, KreinCertificate};
use crate::majorant::annihilator_program;
use crate::numeric::simplex::PricingRule;
use crate::numeric::summation::{Neumaier, NeumaierComplex};
use crate::par::{self, Execution};
use crate::weight::Weight;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Σ masses_j·phase_j·δ_{support_j}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub support: Vec<f64>,
    pub masses: Vec<f64>,
    /// Unimodular density g₀; ±1 in the real case.
    pub phase: Vec<Complex64>,
}

impl DiscreteMeasure {
    pub fn new(support: Vec<f64>, masses: Vec<f64>, phase: Vec<Complex64>) -> Result<Self> {
        if support.len() != masses.len() || support.len() != phase.len() {
            return Err(Error::InvalidSpec("support, masses and phases differ in length".into()));
        }
        if support.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidSpec("support must be strictly increasing".into()));
        }
        if masses.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidSpec("masses must be positive and finite".into()));
        }
        if phase.iter().any(|g| (g.norm() - 1.0).abs() > 1e-9) {
            return Err(Error::InvalidSpec("phases must be unimodular".into()));
        }
        Ok(Self { support, masses, phase })
    }

    /// Real measure from signed weights.
    pub fn from_signed(support: Vec<f64>, weights: &[f64]) -> Result<Self> {
        let phase = weights.iter().map(|&w| c(w.signum())).collect();
        Self::new(support, weights.iter().map(|w| w.abs()).collect(), phase)
    }

    /// mass·phase at each support point.
    pub fn signed(&self) -> Vec<Complex64> {
        self.masses.iter().zip(&self.phase).map(|(m, g)| g * *m).collect()
    }

    pub fn total_variation(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Σ F(t)·μ({t})·g₀(t).
    pub fn integrate(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let mut acc = NeumaierComplex::new();
        for (t, s) in self.support.iter().zip(self.signed()) {
            acc.add(f(*t) * s);
        }
        acc.value()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesConditions {
    pub decays: bool,
    pub decay_trend: K3Member,
    pub summable: bool,
    pub weighted_sum: K4Report,
}

/// y|F(iy)| = o(|B(iy)|) by the K3 trend test on ln|F/B| + ln|y|, and
/// Σ |x|·W(x)/|B′(x)| < ∞ by the K4 machinery.
pub fn check_series_conditions(
    cert: &KreinCertificate,
    f: &EntireFn,
    w: &Weight,
    schedule: &[f64],
    per_side: usize,
) -> Result<SeriesConditions> {
    let decay_trend = check_k3_weighted(cert, std::slice::from_ref(f), schedule, |y: f64| y.abs().ln())?.remove(0);
    let weighted_sum = k4_sum(cert, w, per_side, 1, Execution::default())?;
    Ok(SeriesConditions {
        decays: decay_trend.pass,
        decay_trend,
        summable: weighted_sum.verdict == krein::K4Verdict::Convergent,
        weighted_sum,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub z: Complex64,
    /// zF(z)
    pub lhs: Complex64,
    /// Σ xF(x)/B′(x) · B(z)/(z − x) over the summed zeros
    pub rhs: Complex64,
    pub residual: f64,
    /// Bound on the omitted terms; zero when every zero was summed.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Truncated interpolation series for zF(z), summed in order of |x| with
/// compensated summation.
pub fn lagrange_series(cert: &KreinCertificate, f: &EntireFn, z: Complex64, per_side: usize) -> Result<SeriesValue> {
    let entries = cert.zeros_with_derivatives(per_side, Execution::default())?;
    let lhs = z * f.eval(z)?;
    let hit = entries.iter().find(|e| (c(e.x) - z).norm() <= 1e-12 * (1.0 + e.x.abs()));
    if let Some(e) = hit {
        // every other term carries B(z) = 0; the remaining one tends to xF(x)
        let rhs = c(e.x) * f.eval(c(e.x))?;
        return Ok(SeriesValue { z, lhs, rhs, residual: (lhs - rhs).norm(), tail_bound: 0.0, terms: entries.len() });
    }
    let bz = cert.b.eval(z)?;
    let fx = par::map(Execution::default(), &entries, |e| f.eval(c(e.x)));
    let mut acc = NeumaierComplex::new();
    let mut mags = Vec::with_capacity(entries.len());
    for (e, fx) in entries.iter().zip(fx) {
        let t = c(e.x) * fx? / e.deriv * bz / (z - e.x);
        acc.add(t);
        mags.push((e.x.abs(), t.norm()));
    }
    let rhs = acc.value();
    let infinite = matches!(&cert.b, EntireFn::ZeroProduct(zp) if !zp.is_finite());
    let tail_bound = if infinite { envelope_tail(&mags) } else { 0.0 };
    Ok(SeriesValue { z, lhs, rhs, residual: (lhs - rhs).norm(), tail_bound, terms: entries.len() })
}

/// Bound on Σ_{|x| > X} |t(x)| from a power-law envelope C|x|^(−p) fitted
/// to the block maxima over [X/4, X/2] and [X/2, X], assuming both sides of
/// the zero set keep the observed spacing.
fn envelope_tail(mags: &[(f64, f64)]) -> f64 {
    let x_max = mags.iter().map(|m| m.0).fold(0.0, f64::max);
    let block = |lo: f64, hi: f64| {
        mags.iter()
            .filter(|m| m.0 > lo && m.0 <= hi)
            .fold((0.0f64, 0.0f64), |acc, m| if m.1 > acc.1 { *m } else { acc })
    };
    let (xa, ta) = block(x_max / 4.0, x_max / 2.0);
    let (xb, tb) = block(x_max / 2.0, x_max);
    if !(ta > 0.0 && tb > 0.0) {
        return if ta == 0.0 && tb == 0.0 { 0.0 } else { f64::INFINITY };
    }
    let p = -(tb / ta).ln() / (xb / xa).ln();
    if !(p > 1.05) {
        return f64::INFINITY;
    }
    let per_side = mags.iter().filter(|m| m.0 > 0.0).count() as f64 / 2.0;
    let spacing = x_max / per_side.max(1.0);
    let cst = tb * xb.powf(p);
    2.0 * cst * x_max.powf(1.0 - p) / (spacing * (p - 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnihilatingMeasure {
    pub measure: DiscreteMeasure,
    /// The certificate the measure was read from (shifted when B(0) = 0).
    pub shifted_to: Option<f64>,
    /// ∫ W d|μ|, when a weight is supplied.
    pub weighted_mass: Option<f64>,
}

/// μ = Σ δ_x/B′(x) over the zeros. When B(0) = 0 the zero at the origin is
/// moved to `auto_shift` first, if given.
pub fn annihilating_measure(
    cert: &KreinCertificate,
    per_side: usize,
    auto_shift: Option<f64>,
    w: Option<&Weight>,
) -> Result<AnnihilatingMeasure> {
    let zero_at_origin = cert.b.eval(c(0.0))?.norm() == 0.0 || cert.zeros.contains(&0.0);
    let (cert, shifted_to) = match (zero_at_origin, auto_shift) {
        (false, _) => (cert.clone(), None),
        (true, None) => return Err(Error::ZeroAtOrigin),
        (true, Some(a)) => (krein::transform_zeros(cert, &[a], &[0.0])?, Some(a)),
    };
    let mut entries = cert.zeros_with_derivatives(per_side, Execution::default())?;
    entries.sort_by(|a, b| a.x.total_cmp(&b.x));
    let support: Vec<f64> = entries.iter().map(|e| e.x).collect();
    let weights: Vec<f64> = entries.iter().map(|e| 1.0 / e.deriv).collect();
    let measure = DiscreteMeasure::from_signed(support, &weights)?;
    let weighted_mass = match w {
        Some(w) => Some(k4_sum(&cert, w, per_side, 0, Execution::default())?.partial_sum),
        None => None,
    };
    Ok(AnnihilatingMeasure { measure, shifted_to, weighted_mass })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnihilationMember {
    /// Σ F(x)·μ({x})·g₀(x)
    pub phi: Complex64,
    /// Σ |F(x)|·μ({x})
    pub abs_sum: f64,
    pub pass: bool,
}

/// |∫ F dμ| ≤ tol·∫ |F| d|μ| for each member.
pub fn verify_annihilation(mu: &DiscreteMeasure, family: &[EntireFn], tol: f64) -> Result<Vec<AnnihilationMember>> {
    family
        .iter()
        .map(|f| {
            let vals = mu.support.iter().map(|&t| f.eval(c(t))).collect::<Result<Vec<_>>>()?;
            let mut acc = NeumaierComplex::new();
            let mut abs = Neumaier::new();
            for ((v, m), g) in vals.iter().zip(&mu.masses).zip(&mu.phase) {
                acc.add(v * g * *m);
                abs.add(v.norm() * m);
            }
            let phi = acc.value();
            let abs_sum = abs.value();
            Ok(AnnihilationMember { phi, abs_sum, pass: phi.norm() <= tol * abs_sum })
        })
        .collect()
}

/// Support entries below this fraction of the largest LP weight are dropped.
const SUPPORT_CUTOFF: f64 = 1e-9;

/// An extreme real annihilator of the polynomials of degree ≤ n on `grid`,
/// of total variation 1 in the C0(W) dual: an LP vertex supported on n + 2
/// points. The vertex weights are polished with the closed form
/// σ_j ∝ W(t_j)/ω′(t_j), ω = Π(z − t_j), and returned as masses σ_j/W(t_j)
/// with signs g₀ = sign σ_j (alternating along the support).
pub fn extremal_annihilator(w: &Weight, grid: &[f64], n: usize) -> Result<DiscreteMeasure> {
    let mut pts: Vec<(f64, f64)> = grid
        .iter()
        .filter_map(|&x| {
            let l = w.ln_eval(x);
            (l < f64::INFINITY).then_some((x, l))
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);
    if pts.len() < n + 2 {
        return Err(Error::DegenerateGrid(format!(
            "{} points of Ω cannot carry an annihilator of degree {n}",
            pts.len()
        )));
    }
    let lmin = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let weighted: Vec<(f64, f64)> = pts.iter().map(|&(x, l)| (x, (lmin - l).exp())).collect();
    let basis = Basis::polynomial(&weighted, n + 1)?;
    let rows: Vec<Vec<f64>> =
        weighted.iter().map(|&(x, v)| basis.eval_real(x, n + 1).iter().map(|q| q * v).collect()).collect();
    let target: Vec<f64> = weighted.iter().map(|&(x, v)| basis.eval_real(x, n + 2)[n + 1] * v).collect();
    let (_, sigma) = annihilator_program(&rows, &target, PricingRule::Bland)?;
    let peak = sigma.iter().map(|s| s.abs()).fold(0.0, f64::max);
    let mut idx: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i].abs() > SUPPORT_CUTOFF * peak).collect();
    if idx.len() < n + 2 {
        return Err(Error::DegenerateGrid(format!("LP vertex has {} support points, expected {}", idx.len(), n + 2)));
    }
    idx.sort_by(|&a, &b| sigma[b].abs().total_cmp(&sigma[a].abs()));
    idx.truncate(n + 2);
    idx.sort();
    let support: Vec<f64> = idx.iter().map(|&i| pts[i].0).collect();
    let ln_w: Vec<f64> = idx.iter().map(|&i| pts[i].1).collect();
    // σ_j ∝ W_j/ω′(t_j), scaled in log space
    let ln_abs: Vec<f64> = (0..support.len())
        .map(|j| {
            let d: f64 = (0..support.len()).filter(|&k| k != j).map(|k| (support[j] - support[k]).abs().ln()).sum();
            ln_w[j] - lmin - d
        })
        .collect();
    let top = ln_abs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sizes: Vec<f64> = ln_abs.iter().map(|l| (l - top).exp()).collect();
    let tv: f64 = sizes.iter().sum();
    let first_sign = sigma[idx[0]].signum();
    let m = support.len();
    let masses: Vec<f64> = (0..m).map(|j| sizes[j] / tv * (-ln_w[j]).exp()).collect();
    let phase: Vec<Complex64> = (0..m).map(|j| c(if j % 2 == 0 { first_sign } else { -first_sign })).collect();
    DiscreteMeasure::new(support, masses, phase)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    /// B′(t_j)·g₀(t_j)·μ({t_j}) per support point
    pub products: Vec<Complex64>,
    pub max_deviation: f64,
}

/// B = γ·Π(z − t) over the support, γ fixed by B′(t₀) = 1/(g₀(t₀)μ({t₀})).
pub fn construct_from_measure(
    mu: &DiscreteMeasure,
    t0: f64,
    tol: f64,
) -> Result<(KreinCertificate, ConsistencyReport)> {
    if mu.support.len() < 2 {
        return Err(Error::Precondition("the measure needs at least two support points".into()));
    }
    let i0 = mu
        .support
        .iter()
        .position(|&t| t == t0)
        .ok_or_else(|| Error::Precondition(format!("{t0} is not a support point")))?;
    let omega_prime = |j: usize| -> f64 {
        (0..mu.support.len()).filter(|&k| k != j).map(|k| mu.support[j] - mu.support[k]).product()
    };
    let gamma = (mu.phase[i0] * mu.masses[i0] * omega_prime(i0)).inv();
    let products: Vec<Complex64> =
        (0..mu.support.len()).map(|j| gamma * omega_prime(j) * mu.phase[j] * mu.masses[j]).collect();
    let max_deviation = products.iter().map(|p| (p - 1.0).norm()).fold(0.0, f64::max);
    if max_deviation > tol {
        return Err(Error::InconsistentMeasure(max_deviation));
    }
    let b = Polynomial::from_real_roots(gamma, mu.support.clone());
    let cert = KreinCertificate::new(b.into(), DeclaredClass::Polynomial)?;
    Ok((cert, ConsistencyReport { products, max_deviation }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HtReport {
    /// max relative spread of (z − t)H_t(z) over t, at the samples
    pub product_spread: f64,
    /// max |H_t(s)| / local scale at the expected zeros s
    pub zero_residual: f64,
    /// H_t nonvanishing at t₀ and t, and simple at its zeros
    pub simple_zeros: bool,
    /// max relative error of F(z) = Σ F(t)μ({t})g₀(t)(t − t₀)H_t(z) over monomials
    pub expansion_deviation: f64,
}

/// H_t(z) = γ·Π_{s ∉ {t₀, t}}(z − s) (for t = t₀ the product drops t₀ twice).
fn h_t(gamma: Complex64, support: &[f64], t0: f64, t: f64, z: Complex64) -> Complex64 {
    let mut skip_t0 = true;
    let mut skip_t = t != t0;
    let mut v = gamma;
    for &s in support {
        if skip_t0 && s == t0 {
            skip_t0 = false;
            if t == t0 {
                return v * support.iter().filter(|&&r| r != t0).map(|&r| z - r).product::<Complex64>() / (z - t0);
            }
            continue;
        }
        if skip_t && s == t {
            skip_t = false;
            continue;
        }
        v *= z - s;
    }
    v
}

/// Identities of the finite model: t-independence of (z − t)H_t(z), the
/// zeros of H_t, and the expansion of polynomials of degree ≤ |supp| − 2.
pub fn verify_ht_identities(mu: &DiscreteMeasure, t0: f64, samples: &[Complex64]) -> Result<HtReport> {
    let (cert, _) = construct_from_measure(mu, t0, f64::INFINITY)?;
    let gamma = match &cert.b {
        EntireFn::Polynomial(p) => p.root_form().map(|r| r.lead).unwrap_or_else(|| p.leading()),
        _ => unreachable!("finite model builds a polynomial"),
    };
    let s = &mu.support;
    let others: Vec<f64> = s.iter().copied().filter(|&t| t != t0).collect();
    let mut spread: f64 = 0.0;
    for &z in samples {
        let vals: Vec<Complex64> = others.iter().map(|&t| (z - t) * h_t(gamma, s, t0, t, z)).collect();
        let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for v in &vals {
            spread = spread.max((v - vals[0]).norm() / scale.max(f64::MIN_POSITIVE));
        }
    }
    let mut zero_res: f64 = 0.0;
    let mut simple = true;
    for &t in &others {
        let scale = |x: f64| gamma.norm() * s.iter().map(|r| 1.0 + (x - r).abs()).product::<f64>();
        for &x in s.iter().filter(|&&x| x != t0 && x != t) {
            zero_res = zero_res.max(h_t(gamma, s, t0, t, c(x)).norm() / scale(x));
            let d: Complex64 =
                gamma * s.iter().filter(|&&r| r != t0 && r != t && r != x).map(|&r| c(x - r)).product::<Complex64>();
            simple &= d.norm() > 1e-12 * scale(x);
        }
        for x in [t0, t] {
            simple &= h_t(gamma, s, t0, t, c(x)).norm() > 1e-12 * scale(x);
        }
    }
    let signed = mu.signed();
    let mut expansion: f64 = 0.0;
    for k in 0..=s.len().saturating_sub(2) {
        for &z in samples {
            let want = z.powu(k as u32);
            let mut acc = NeumaierComplex::new();
            for (j, &t) in s.iter().enumerate() {
                if t == t0 {
                    continue;
                }
                acc.add(c(t).powu(k as u32) * signed[j] * (t - t0) * h_t(gamma, s, t0, t, z));
            }
            let scale = 1.0 + want.norm();
            expansion = expansion.max((acc.value() - want).norm() / scale);
        }
    }
    Ok(HtReport {
        product_spread: spread,
        zero_residual: zero_res,
        simple_zeros: simple,
        expansion_deviation: expansion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(points: &[f64]) -> Weight {
        Weight::discrete(points.iter().map(|&x| (x, 1.0)).collect()).unwrap()
    }

    #[test]
    fn three_point_annihilator() {
        let mu = extremal_annihilator(&unit(&[-1.0, 0.0, 1.0]), &[-1.0, 0.0, 1.0], 1).unwrap();
        assert_eq!(mu.support, vec![-1.0, 0.0, 1.0]);
        let signs: Vec<f64> = mu.phase.iter().map(|g| g.re).collect();
        let flip = signs[0];
        assert_eq!(signs.iter().map(|s| s * flip).collect::<Vec<_>>(), vec![1.0, -1.0, 1.0]);
        for (m, want) in mu.masses.iter().zip([0.25, 0.5, 0.25]) {
            assert!((m - want).abs() < 1e-12);
        }
    }

    #[test]
    fn too_small_grid_is_degenerate() {
        assert!(matches!(extremal_annihilator(&unit(&[-1.0, 1.0]), &[-1.0, 1.0], 1), Err(Error::DegenerateGrid(_))));
    }

    #[test]
    fn construction_examples() {
        let mu = DiscreteMeasure::from_signed(vec![-1.0, 0.0, 1.0], &[0.25, -0.5, 0.25]).unwrap();
        let (cert, rep) = construct_from_measure(&mu, -1.0, 1e-12).unwrap();
        assert!(rep.max_deviation < 1e-14);
        let b = match &cert.b {
            EntireFn::Polynomial(p) => p.clone(),
            _ => unreachable!(),
        };
        assert!((b.derivative_at(c(0.0)) - c(-2.0)).norm() < 1e-14);
        let two = DiscreteMeasure::from_signed(vec![0.0, 1.0], &[0.5, -0.5]).unwrap();
        let (cert, _) = construct_from_measure(&two, 0.0, 1e-12).unwrap();
        assert!((cert.deriv_at_zeros[1].deriv + 2.0).abs() < 1e-14);
        let bad = DiscreteMeasure::from_signed(vec![-1.0, 0.0, 1.0], &[0.25, -0.25, 0.25]).unwrap();
        assert!(matches!(construct_from_measure(&bad, -1.0, 1e-9), Err(Error::InconsistentMeasure(_))));
    }

    #[test]
    fn ht_identities_three_points() {
        let mu = DiscreteMeasure::from_signed(vec![-1.0, 0.0, 1.0], &[0.25, -0.5, 0.25]).unwrap();
        let r = verify_ht_identities(&mu, -1.0, &[Complex64::new(0.0, 2.0), c(0.3)]).unwrap();
        assert!(r.product_spread < 1e-12);
        assert!(r.zero_residual == 0.0 && r.simple_zeros);
        assert!(r.expansion_deviation < 1e-10);
        // H_1 with t₀ = −1 is 2z
        assert!((h_t(c(2.0), &mu.support, -1.0, 1.0, c(0.7)) - c(1.4)).norm() < 1e-15);
    }

    #[test]
    fn measure_of_z_squared_minus_one() {
        let cert =
            KreinCertificate::new(Polynomial::real(&[-1.0, 0.0, 1.0]).into(), DeclaredClass::Polynomial).unwrap();
        let m = annihilating_measure(&cert, 0, None, None).unwrap().measure;
        assert_eq!(m.support, vec![-1.0, 1.0]);
        assert_eq!(m.signed(), vec![c(-0.5), c(0.5)]);
        let r = verify_annihilation(&m, &[EntireFn::constant(1.0), EntireFn::monomial(1)], 1e-12).unwrap();
        assert!(r[0].pass && !r[1].pass);
        assert!((r[1].phi - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_at_origin_needs_a_shift() {
        let cert =
            KreinCertificate::new(Polynomial::real(&[0.0, -1.0, 0.0, 1.0]).into(), DeclaredClass::Polynomial).unwrap();
        assert!(matches!(annihilating_measure(&cert, 0, None, None), Err(Error::ZeroAtOrigin)));
        let shifted = annihilating_measure(&cert, 0, Some(0.5), None).unwrap();
        assert_eq!(shifted.measure.support, vec![-1.0, 0.5, 1.0]);
    }

    #[test]
    fn cosine_measure() {
        let cert = KreinCertificate::new(crate::espace::ZeroProduct::cos_pi().into(), DeclaredClass::SineType).unwrap();
        let m = annihilating_measure(&cert, 5, None, None).unwrap().measure;
        for (t, s) in m.support.iter().zip(m.signed()) {
            let k = t - 0.5;
            let sign = if (k.round() as i64).rem_euclid(2) == 0 { -1.0 } else { 1.0 };
            assert!((s.re - sign / std::f64::consts::PI).abs() < 1e-12, "{t}");
        }
    }

    #[test]
    fn two_point_series_is_exact() {
        let cert =
            KreinCertificate::new(Polynomial::real(&[-1.0, 0.0, 1.0]).into(), DeclaredClass::Polynomial).unwrap();
        let s = lagrange_series(&cert, &EntireFn::constant(1.0), c(0.0), 0).unwrap();
        assert!(s.residual < 1e-15 && s.tail_bound == 0.0);
    }
}
