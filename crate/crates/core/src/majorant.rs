//! Hall majorant m(z) = sup{|P(z)| : P in the family, sup |P|·V ≤ 1}
//! restricted to a sampled Ω, solved as a semi-infinite LP by column
//! generation on its dual
//!
//! ```text
//! minimize Σ λ  subject to  Σ λ_{x,φ} · Re(e^{−iφ} P(x)) V(x) ≡ Re P(z),  λ ≥ 0.
//! ```
//!
//! The LP multipliers are the coefficients of the extremal P. The feasible set
//! is invariant under P ↦ e^{iθ}P, so maximizing Re P(z) already gives
//! sup |P(z)|. A column (x, φ) is priced out at the point where |P(x)|V(x) is
//! largest, with φ = arg P(x), so the master problem uses the exact modulus.

use crate::basis::{Basis, Family};
use crate::error::{Error, Result};
use crate::espace::EntireFn;
use crate::numeric::simplex::{Outcome, PricingRule, Simplex};
use crate::par::{self, Execution};
use crate::weight::{Omega, SamplingPlan, Weight};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Points whose weight exceeds the minimum by more than this factor (in log)
/// are left out of basis construction and initial columns.
const EFFECTIVE_LOG_RANGE: f64 = 700.0;
const ROW_NORM_FLOOR: f64 = 1e-10;
const INITIAL_PHASES: usize = 32;
pub const UNBOUNDED_VALUE: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorantOptions {
    /// Candidate grid for weights with a continuum Ω.
    pub plan: SamplingPlan,
    pub tol: f64,
    pub max_rounds: usize,
    /// Upper limit on the number of points the basis is orthonormalized on.
    pub basis_points: usize,
    pub exec: Execution,
    pub pricing: PricingRule,
    /// Values at or above this are reported as [`Error::Unbounded`].
    #[serde(default = "default_unbounded_at")]
    pub unbounded_at: f64,
}

fn default_unbounded_at() -> f64 {
    UNBOUNDED_VALUE
}

impl Default for MajorantOptions {
    fn default() -> Self {
        Self {
            plan: SamplingPlan::new(50.0, 1e-2),
            tol: 1e-9,
            max_rounds: 400,
            basis_points: 4000,
            exec: Execution::default(),
            pricing: PricingRule::Dantzig,
            unbounded_at: UNBOUNDED_VALUE,
        }
    }
}

/// One atom of the dual measure: P(z) = Σ mass·P(x) for every P in the family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualAtom {
    pub x: f64,
    /// |mass|·W(x)
    pub weight: f64,
    pub mass: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalSolution {
    pub z: Complex64,
    /// Guaranteed lower bound: |P(z)| for the scaled-feasible extremizer.
    pub value: f64,
    /// Dual upper bound Σ |mass|·W.
    pub upper: f64,
    pub gap: f64,
    pub extremizer: EntireFn,
    /// Coefficients of the extremizer in the orthonormal basis.
    pub coefficients: Vec<Complex64>,
    pub active_points: Vec<f64>,
    pub dual: Vec<DualAtom>,
    /// arg P(z); zero up to rounding since Re P(z) is maximized.
    pub phase: f64,
    /// max |P|·V of the unscaled LP iterate over all candidates.
    pub max_ratio: f64,
    pub rounds: usize,
}

/// A weight, a family and the sampled candidate set, with the basis values
/// precomputed so many probes can be solved against them.
#[derive(Debug, Clone)]
pub struct MajorantProblem {
    weight: Weight,
    family: Family,
    opts: MajorantOptions,
    xs: Vec<f64>,
    /// q_k(x)·V(x), row-major by candidate.
    vals: Vec<Complex64>,
    effective: Vec<usize>,
    basis: Basis,
    continuous: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mode {
    Real,
    Complex,
}

struct Column {
    lp_index: usize,
    /// the LP works with the unit-norm column; λ = value / norm
    norm: f64,
    /// index into candidates, or `usize::MAX − e` for the e-th extra point
    point: usize,
    /// phase for complex columns, 0 or π for real ones
    phase: f64,
}

impl MajorantProblem {
    pub fn new(weight: &Weight, family: Family, opts: MajorantOptions) -> Result<Self> {
        let xs = weight.sample_points(&opts.plan);
        if xs.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let lnw: Vec<f64> = xs.iter().map(|&x| weight.ln_eval(x)).collect();
        let lmin = lnw.iter().copied().fold(f64::INFINITY, f64::min);
        let effective: Vec<usize> = (0..xs.len()).filter(|&i| lnw[i] <= lmin + EFFECTIVE_LOG_RANGE).collect();
        let stride = effective.len().div_ceil(opts.basis_points).max(1);
        let basis_pts: Vec<(f64, f64)> =
            effective.iter().step_by(stride).map(|&i| (xs[i], (lmin - lnw[i]).exp())).collect();
        let basis = Basis::for_family(&family, &basis_pts)?;
        let k = basis.dim();
        let rows = par::map_range(opts.exec, xs.len(), |i| {
            let v = (-lnw[i]).exp();
            basis.eval(Complex64::new(xs[i], 0.0), k).into_iter().map(|q| q * v).collect::<Vec<_>>()
        });
        let norms: Vec<f64> = rows.iter().map(|r| r.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()).collect();
        let peak = norms.iter().copied().fold(0.0, f64::max);
        // initial columns go where the weighted basis is not negligible
        let effective: Vec<usize> = effective.into_iter().filter(|&i| norms[i] >= ROW_NORM_FLOOR * peak).collect();
        let vals = rows.into_iter().flatten().collect();
        let continuous = !matches!(weight.omega(), Omega::Points(_));
        Ok(Self { weight: weight.clone(), family, opts, xs, vals, effective, basis, continuous })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn options(&self) -> &MajorantOptions {
        &self.opts
    }

    pub fn candidates(&self) -> &[f64] {
        &self.xs
    }

    /// Weighted basis values q_k(x_i)V(x_i) for the first `k` functions.
    pub fn weighted_row(&self, i: usize, k: usize) -> &[Complex64] {
        let d = self.basis.dim();
        &self.vals[i * d..i * d + k]
    }

    fn weighted_at(&self, x: f64, k: usize) -> Vec<Complex64> {
        let v = (-self.weight.ln_eval(x)).exp();
        self.basis.eval(Complex64::new(x, 0.0), k).into_iter().map(|q| q * v).collect()
    }

    /// Largest family size solvable with this problem: the full dimension, or
    /// any prefix when the basis is nested.
    fn check_size(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.basis.dim() || (k < self.basis.dim() && !self.basis.is_nested()) {
            return Err(Error::Precondition(format!(
                "family size {k} not available (basis dimension {}, nested: {})",
                self.basis.dim(),
                self.basis.is_nested()
            )));
        }
        Ok(())
    }

    /// max over the candidates of |Σ c_j q_j|·V for the first `k` basis functions.
    pub fn sampled_seminorm(&self, coeffs: &[Complex64], k: usize) -> f64 {
        self.ratios(coeffs, k).into_iter().fold(0.0, f64::max)
    }

    /// m(z) for the full family.
    pub fn solve(&self, z: Complex64) -> Result<ExtremalSolution> {
        self.solve_prefix(z, self.basis.dim())
    }

    /// m(z) for the first `k` basis functions (polynomials of degree < k).
    pub fn solve_prefix(&self, z: Complex64, k: usize) -> Result<ExtremalSolution> {
        self.check_size(k)?;
        let mode = if z.im == 0.0 && self.basis.is_real() { Mode::Real } else { Mode::Complex };
        let qz = self.basis.eval(z, k);
        let h: Vec<f64> = match mode {
            Mode::Real => qz.iter().map(|q| q.re).collect(),
            Mode::Complex => qz.iter().map(|q| q.re).chain(qz.iter().map(|q| -q.im)).collect(),
        };
        let scale = h.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::NonFinite(format!("basis values at z = {z}")));
        }
        let mut lp = Simplex::new(h.iter().map(|a| a / scale).collect());
        lp.rule = self.opts.pricing;
        let mut cols: Vec<Column> = Vec::new();
        let mut extras: Vec<(f64, Vec<Complex64>)> = Vec::new();

        let n_init = self.effective.len().min(4 * k + 4);
        let step = self.effective.len() as f64 / n_init as f64;
        for t in 0..n_init {
            let i = self.effective[((t as f64 + 0.5) * step) as usize];
            let row = self.weighted_row(i, k).to_vec();
            match mode {
                Mode::Real => {
                    for phase in [0.0, PI] {
                        add_column(&mut lp, &mut cols, mode, i, phase, &row)?;
                    }
                }
                Mode::Complex => {
                    for m in 0..INITIAL_PHASES {
                        let phase = 2.0 * PI * m as f64 / INITIAL_PHASES as f64;
                        add_column(&mut lp, &mut cols, mode, i, phase, &row)?;
                    }
                }
            }
        }

        let tol = self.opts.tol;
        let mut best: Option<ExtremalSolution> = None;
        for round in 0..self.opts.max_rounds {
            match lp.solve()? {
                Outcome::Optimal => {}
                Outcome::Infeasible => return Err(Error::Unbounded(f64::INFINITY)),
                Outcome::Unbounded => return Err(Error::Lp("dual program unbounded below".into())),
            }
            let y = lp.duals();
            let coeffs: Vec<Complex64> = match mode {
                Mode::Real => y.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
                Mode::Complex => (0..k).map(|j| Complex64::new(y[j], y[k + j])).collect(),
            };
            let pz: Complex64 = coeffs.iter().zip(&qz).map(|(c, q)| c * q).sum();

            let ratios = self.ratios(&coeffs, k);
            let (imax, mut rmax) = argmax(&ratios);
            let mut extra_max: Option<(f64, f64)> = None;
            for (x, row) in &extras {
                let r = dot(&coeffs, row).norm();
                if r > rmax {
                    rmax = r;
                    extra_max = Some((*x, r));
                }
            }
            if self.continuous && extra_max.is_none() {
                if let Some((x, r)) = self.refine(&coeffs, k, imax) {
                    if r > rmax {
                        rmax = r;
                        extra_max = Some((x, r));
                    }
                }
            }
            let lower = pz.norm() / rmax.max(1.0);
            let dual = self.dual_atoms(&lp, &cols, &extras, mode, scale);
            let upper: f64 = dual.iter().map(|a| a.weight).sum();
            let sol_scale = 1.0 / rmax.max(1.0);
            let candidate = ExtremalSolution {
                z,
                value: lower,
                upper,
                gap: upper - lower,
                extremizer: EntireFn::Polynomial(crate::espace::Polynomial::constant(Complex64::new(0.0, 0.0))),
                coefficients: coeffs.iter().map(|c| c * sol_scale).collect(),
                active_points: Vec::new(),
                dual,
                phase: pz.arg(),
                max_ratio: rmax,
                rounds: round + 1,
            };
            if best.as_ref().is_none_or(|b| candidate.gap < b.gap) {
                best = Some(candidate);
            }
            let b = best.as_ref().unwrap();
            if b.gap <= tol * (1.0 + b.upper) || rmax <= 1.0 + 1e-3 * tol {
                break;
            }
            // add the most violated constraints
            let mut picks: Vec<usize> = self.violators(&ratios, 1.0 + tol, k.max(4));
            if let Some((x, _)) = extra_max {
                let row = self.weighted_at(x, k);
                extras.push((x, row));
                picks.retain(|&i| i != imax);
            }
            for i in picks {
                let row = self.weighted_row(i, k).to_vec();
                let phase = dot(&coeffs, &row).arg();
                add_column(&mut lp, &mut cols, mode, i, snap(mode, phase), &row)?;
            }
            if let Some((_, row)) = extras.last().filter(|_| extra_max.is_some()) {
                let phase = dot(&coeffs, row).arg();
                let id = usize::MAX - (extras.len() - 1);
                let row = row.clone();
                add_column(&mut lp, &mut cols, mode, id, snap(mode, phase), &row)?;
            }
        }
        let mut sol = best.expect("at least one round");
        if sol.value >= self.opts.unbounded_at {
            return Err(Error::Unbounded(sol.value));
        }
        sol.extremizer = self.basis.to_entire(&sol.coefficients);
        let final_ratios = self.ratios(&sol.coefficients, k);
        let mut active: Vec<f64> = self
            .xs
            .iter()
            .zip(&final_ratios)
            .filter(|(_, &r)| r >= 1.0 - 1e-6)
            .map(|(&x, _)| x)
            .chain(sol.dual.iter().map(|a| a.x))
            .collect();
        active.sort_by(f64::total_cmp);
        active.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
        sol.active_points = active;
        Ok(sol)
    }

    /// |P(x)|·V(x) at every candidate.
    fn ratios(&self, coeffs: &[Complex64], k: usize) -> Vec<f64> {
        const CHUNK: usize = 2048;
        let n = self.xs.len();
        let chunks = n.div_ceil(CHUNK);
        par::map_range(self.opts.exec, chunks, |c| {
            (c * CHUNK..((c + 1) * CHUNK).min(n))
                .map(|i| dot(coeffs, self.weighted_row(i, k)).norm())
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect()
    }

    /// Golden-section refinement of |P|·V between the grid neighbours of `i`.
    fn refine(&self, coeffs: &[Complex64], k: usize, i: usize) -> Option<(f64, f64)> {
        let lo = if i > 0 { self.xs[i - 1] } else { self.xs[i] };
        let hi = if i + 1 < self.xs.len() { self.xs[i + 1] } else { self.xs[i] };
        if hi - lo > 2.5 * self.opts.plan.step || hi <= lo {
            return None;
        }
        let f = |x: f64| {
            let lw = self.weight.ln_eval(x);
            if lw == f64::INFINITY {
                return 0.0;
            }
            dot(coeffs, &self.basis.eval(Complex64::new(x, 0.0), k)).norm() * (-lw).exp()
        };
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo, hi);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..40 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d);
            }
        }
        let x = 0.5 * (a + b);
        Some((x, f(x)))
    }

    fn violators(&self, ratios: &[f64], threshold: f64, count: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..ratios.len())
            .filter(|&i| ratios[i] > threshold)
            .filter(|&i| {
                !self.continuous
                    || ((i == 0 || ratios[i] >= ratios[i - 1]) && (i + 1 == ratios.len() || ratios[i] >= ratios[i + 1]))
            })
            .collect();
        idx.sort_by(|&a, &b| ratios[b].total_cmp(&ratios[a]));
        idx.truncate(count);
        idx
    }

    fn dual_atoms(
        &self,
        lp: &Simplex,
        cols: &[Column],
        extras: &[(f64, Vec<Complex64>)],
        mode: Mode,
        scale: f64,
    ) -> Vec<DualAtom> {
        let mut acc: Vec<(usize, Complex64)> = Vec::new();
        for col in cols {
            let lam = lp.value(col.lp_index) / col.norm;
            if lam <= 0.0 {
                continue;
            }
            let nu = match mode {
                Mode::Real => Complex64::new(lam * col.phase.cos().round(), 0.0),
                Mode::Complex => Complex64::from_polar(lam, -col.phase),
            };
            match acc.iter_mut().find(|a| a.0 == col.point) {
                Some(a) => a.1 += nu,
                None => acc.push((col.point, nu)),
            }
        }
        let mut atoms: Vec<DualAtom> = acc
            .into_iter()
            .map(|(p, nu)| {
                let x = if p >= self.xs.len() { extras[usize::MAX - p].0 } else { self.xs[p] };
                let w = self.weight.ln_eval(x);
                let nu = nu * scale;
                DualAtom { x, weight: nu.norm(), mass: nu * (-w).exp() }
            })
            .filter(|a| a.weight > 0.0)
            .collect();
        atoms.sort_by(|a, b| a.x.total_cmp(&b.x));
        atoms
    }
}

fn snap(mode: Mode, phase: f64) -> f64 {
    match mode {
        Mode::Real => {
            if phase.abs() > 0.5 * PI {
                PI
            } else {
                0.0
            }
        }
        Mode::Complex => phase,
    }
}

fn add_column(
    lp: &mut Simplex,
    cols: &mut Vec<Column>,
    mode: Mode,
    point: usize,
    phase: f64,
    row: &[Complex64],
) -> Result<()> {
    let rot = Complex64::from_polar(1.0, -phase);
    let col: Vec<f64> = match mode {
        Mode::Real => row.iter().map(|v| (rot * v).re).collect(),
        Mode::Complex => {
            let r: Vec<Complex64> = row.iter().map(|v| rot * v).collect();
            r.iter().map(|v| v.re).chain(r.iter().map(|v| -v.im)).collect()
        }
    };
    let norm = col.iter().map(|a| a * a).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Ok(());
    }
    let lp_index = lp.add_column(col.iter().map(|a| a / norm).collect(), 1.0 / norm, 0.0, f64::INFINITY)?;
    cols.push(Column { lp_index, norm, point, phase });
    Ok(())
}

fn dot(c: &[Complex64], v: &[Complex64]) -> Complex64 {
    c.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn argmax(v: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &r) in v.iter().enumerate() {
        if r > best.1 {
            best = (i, r);
        }
    }
    best
}

/// m(z) for one weight, family and probe.
pub fn hall_majorant(w: &Weight, family: &Family, z: Complex64, opts: &MajorantOptions) -> Result<ExtremalSolution> {
    MajorantProblem::new(w, family.clone(), opts.clone())?.solve(z)
}

/// Dual objective Σ |mass|·W(x) of a solution, checked against its primal value.
pub fn dual_bound(sol: &ExtremalSolution, w: &Weight, tol: f64) -> Result<f64> {
    let mut u = 0.0;
    for a in &sol.dual {
        let wx = w.eval(a.x).finite().ok_or(Error::WeightInfiniteAtZero(a.x))?;
        u += a.mass.norm() * wx;
    }
    let gap = (u - sol.value).abs();
    if gap > 10.0 * tol * (1.0 + u) {
        return Err(Error::DualityGap { gap, tol });
    }
    Ok(u)
}

/// Verdict of a growth heuristic on a sequence indexed by family size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Growth {
    Diverging,
    Bounded,
    Inconclusive,
}

/// Successive ratio at or above which growth counts as divergent.
pub const GROWTH_RATIO: f64 = 1.1;
/// max/min over the last five entries at or below which a sequence counts as bounded.
pub const BOUNDED_SPREAD: f64 = 2.0;

/// Diverging: infinite entries, or the last four strictly increase with each
/// of the last three ratios ≥ [`GROWTH_RATIO`]. Bounded: max/min over the last
/// five ≤ [`BOUNDED_SPREAD`] and the last three ratios below the growth ratio.
pub fn classify_growth(seq: &[f64]) -> Growth {
    if seq.iter().any(|v| !v.is_finite()) {
        return Growth::Diverging;
    }
    if seq.len() < 5 {
        return Growth::Inconclusive;
    }
    let n = seq.len();
    let ratios: Vec<f64> = (n - 3..n).map(|i| seq[i] / seq[i - 1]).collect();
    if ratios.iter().all(|&r| r >= GROWTH_RATIO) && seq[n - 4] > 0.0 {
        return Growth::Diverging;
    }
    let tail = &seq[n - 5..];
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    if lo > 0.0 && hi / lo <= BOUNDED_SPREAD && ratios.iter().all(|&r| r < GROWTH_RATIO) {
        return Growth::Bounded;
    }
    Growth::Inconclusive
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: usize,
    pub z: Complex64,
    /// m_n(z); `None` when the program is unbounded.
    pub value: Option<f64>,
    pub active_point_count: usize,
    pub duality_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorantTable {
    pub family_sizes: Vec<usize>,
    pub probes: Vec<Complex64>,
    /// values[p][j] = m_{n_j}(probe p), +∞ when unbounded.
    pub values: Vec<Vec<f64>>,
    pub rows: Vec<ProfileRow>,
    pub growth: Vec<Growth>,
}

impl MajorantTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,re_z,im_z,m_n,active_point_count,duality_gap\n");
        for r in &self.rows {
            let v = r.value.map_or("inf".to_string(), |v| format!("{v:.12e}"));
            let g = r.duality_gap.map_or("nan".to_string(), |g| format!("{g:.3e}"));
            s.push_str(&format!("{},{},{},{},{},{}\n", r.n, r.z.re, r.z.im, v, r.active_point_count, g));
        }
        s
    }
}

/// m_n(z) for polynomial degrees `degrees` at every probe, with a growth
/// verdict per probe.
pub fn majorant_profile(
    w: &Weight,
    degrees: &[usize],
    probes: &[Complex64],
    opts: &MajorantOptions,
) -> Result<MajorantTable> {
    let nmax = degrees.iter().copied().max().ok_or_else(|| Error::Precondition("empty degree list".into()))?;
    let problem = match MajorantProblem::new(w, Family::Polynomials { degree: nmax }, opts.clone()) {
        Ok(p) => Some(p),
        Err(Error::DegenerateGrid(_)) => None,
        Err(e) => return Err(e),
    };
    let jobs: Vec<(usize, Complex64)> = probes.iter().flat_map(|&z| degrees.iter().map(move |&n| (n, z))).collect();
    let problem_ref = &problem;
    let results = par::map(opts.exec, &jobs, |&(n, z)| -> Result<ProfileRow> {
        let solved = match problem_ref {
            Some(p) => p.solve_prefix(z, n + 1),
            None => profile_fallback(w, n, z, opts),
        };
        match solved {
            Ok(s) => Ok(ProfileRow {
                n,
                z,
                value: Some(s.value),
                active_point_count: s.active_points.len(),
                duality_gap: Some(s.gap),
            }),
            Err(Error::Unbounded(_)) => Ok(ProfileRow { n, z, value: None, active_point_count: 0, duality_gap: None }),
            Err(e) => Err(e),
        }
    });
    let rows: Vec<ProfileRow> = results.into_iter().collect::<Result<_>>()?;
    let values: Vec<Vec<f64>> =
        rows.chunks(degrees.len()).map(|ch| ch.iter().map(|r| r.value.unwrap_or(f64::INFINITY)).collect()).collect();
    let growth = values.iter().map(|v| classify_growth(v)).collect();
    Ok(MajorantTable { family_sizes: degrees.to_vec(), probes: probes.to_vec(), values, rows, growth })
}

/// Degrees the sampled Ω cannot separate make m infinite off Ω.
fn profile_fallback(w: &Weight, n: usize, z: Complex64, opts: &MajorantOptions) -> Result<ExtremalSolution> {
    match MajorantProblem::new(w, Family::Polynomials { degree: n }, opts.clone()) {
        Ok(p) => p.solve(z),
        Err(Error::DegenerateGrid(_)) => Err(Error::Unbounded(f64::INFINITY)),
        Err(e) => Err(e),
    }
}

/// Maximizes Σ σ_i·target_i subject to Σ σ_i·rows_i = 0 and Σ |σ_i| ≤ 1.
/// By duality the optimum is the distance from the target to the span of the
/// rows in the max norm. Returns the value and σ.
pub fn annihilator_program(rows: &[Vec<f64>], target: &[f64], rule: PricingRule) -> Result<(f64, Vec<f64>)> {
    let n = rows.len();
    let k = rows.first().map_or(0, |r| r.len());
    let mut b = vec![0.0; k + 1];
    b[k] = 1.0;
    let mut lp = Simplex::new(b);
    lp.rule = rule;
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut col: Vec<f64> = rows[i].iter().map(|v| s * v).collect();
            col.push(1.0);
            lp.add_column(col, -s * target[i], 0.0, f64::INFINITY)?;
        }
    }
    let mut slack = vec![0.0; k];
    slack.push(1.0);
    lp.add_column(slack, 0.0, 0.0, f64::INFINITY)?;
    match lp.solve()? {
        Outcome::Optimal => {}
        other => return Err(Error::Lp(format!("annihilator program {other:?}"))),
    }
    let sigma: Vec<f64> = (0..n).map(|i| lp.value(2 * i) - lp.value(2 * i + 1)).collect();
    Ok((-lp.objective(), sigma))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_points(xs: &[f64]) -> Weight {
        Weight::discrete(xs.iter().map(|&x| (x, 1.0)).collect()).unwrap()
    }

    #[test]
    fn two_point_majorant_is_sqrt_two() {
        let w = unit_points(&[-1.0, 1.0]);
        let opts = MajorantOptions { tol: 1e-13, ..Default::default() };
        let s = hall_majorant(&w, &Family::Polynomials { degree: 1 }, Complex64::i(), &opts).unwrap();
        assert!((s.value - 2f64.sqrt()).abs() < 1e-9, "{}", s.value);
        assert!(s.gap < 1e-8);
    }

    #[test]
    fn three_points_give_the_lebesgue_sum() {
        let w = unit_points(&[-1.0, 0.0, 1.0]);
        let opts = MajorantOptions { tol: 1e-13, ..Default::default() };
        let s = hall_majorant(&w, &Family::Polynomials { degree: 2 }, Complex64::i(), &opts).unwrap();
        assert!((s.value - (2.0 + 2f64.sqrt())).abs() < 1e-9, "{}", s.value);
        assert_eq!(s.active_points, vec![-1.0, 0.0, 1.0]);
        let u = dual_bound(&s, &w, 1e-9).unwrap();
        assert!((u - s.value).abs() < 1e-9);
    }

    #[test]
    fn constants_give_the_infimum_of_the_weight() {
        let w = Weight::discrete(vec![(-2.0, 3.0), (0.5, 1.5), (4.0, 2.0)]).unwrap();
        let s = hall_majorant(
            &w,
            &Family::Polynomials { degree: 0 },
            Complex64::new(0.3, 2.0),
            &MajorantOptions::default(),
        )
        .unwrap();
        assert!((s.value - 1.5).abs() < 1e-9);
    }

    #[test]
    fn too_few_points_is_unbounded_off_omega() {
        let w = unit_points(&[-1.0, 0.0, 1.0]);
        let t = majorant_profile(&w, &[1, 2, 3], &[Complex64::i()], &MajorantOptions::default()).unwrap();
        assert!(t.values[0][2].is_infinite());
        assert_eq!(t.growth[0], Growth::Diverging);
    }

    #[test]
    fn growth_heuristic() {
        assert_eq!(classify_growth(&[1.0, 2.0, 4.0, 8.0, 16.0]), Growth::Diverging);
        assert_eq!(classify_growth(&[1.0, 1.3, 1.35, 1.36, 1.37]), Growth::Bounded);
        assert_eq!(classify_growth(&[1.0, 2.0]), Growth::Inconclusive);
    }

    #[test]
    fn distance_to_constants() {
        // distance from (0, 1) to constants in max norm is 1/2
        let rows = vec![vec![1.0], vec![1.0]];
        let (d, sigma) = annihilator_program(&rows, &[0.0, 1.0], PricingRule::Bland).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
        assert!((sigma[0] + 0.5).abs() < 1e-12 && (sigma[1] - 0.5).abs() < 1e-12);
    }
}
