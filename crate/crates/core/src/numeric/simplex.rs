//! Dense revised simplex for bounded-variable linear programs
//!
//! ```text
//! minimize cᵀx  subject to  A x = b,  l ≤ x ≤ u
//! ```
//!
//! Columns may be appended after a solve; the next solve warm-starts from the
//! previous basis.

#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use crate::numeric::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PricingRule {
    /// Smallest eligible index enters and leaves. Never cycles, but on
    /// ill-conditioned columns (monomials past degree 5 on wide grids) it can
    /// drive the basis to numerical singularity.
    #[default]
    Bland,
    /// Most negative reduced cost enters.
    Dantzig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic(usize),
    AtLower,
    AtUpper,
}

const REFACTOR_EVERY: usize = 50;
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Simplex {
    m: usize,
    b: Vec<f64>,
    cols: Vec<Vec<f64>>,
    cost: Vec<f64>,
    lo: Vec<f64>,
    up: Vec<f64>,
    artificial: Vec<bool>,
    state: Vec<State>,
    x: Vec<f64>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    since_refactor: usize,
    feasible_basis: bool,
    pub rule: PricingRule,
    pub max_iterations: usize,
    pub tol: f64,
    pub iterations: usize,
}

impl Simplex {
    pub fn new(b: Vec<f64>) -> Self {
        let m = b.len();
        Self {
            m,
            b,
            cols: Vec::new(),
            cost: Vec::new(),
            lo: Vec::new(),
            up: Vec::new(),
            artificial: Vec::new(),
            state: Vec::new(),
            x: Vec::new(),
            basis: Vec::new(),
            binv: Vec::new(),
            since_refactor: 0,
            feasible_basis: false,
            rule: PricingRule::default(),
            max_iterations: 200_000,
            tol: 1e-9,
            iterations: 0,
        }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    /// Appends a structural column and returns its index. The variable starts
    /// nonbasic at its lower bound, or at its upper bound when the lower one is
    /// infinite.
    pub fn add_column(&mut self, col: Vec<f64>, cost: f64, lo: f64, up: f64) -> Result<usize> {
        if col.len() != self.m {
            return Err(Error::Lp(format!("column has {} rows, expected {}", col.len(), self.m)));
        }
        if !(lo <= up) || (lo == f64::NEG_INFINITY && up == f64::INFINITY) {
            return Err(Error::Lp("column needs a finite bound and lo ≤ up".into()));
        }
        let (state, value) = if lo.is_finite() { (State::AtLower, lo) } else { (State::AtUpper, up) };
        self.cols.push(col);
        self.cost.push(cost);
        self.lo.push(lo);
        self.up.push(up);
        self.artificial.push(false);
        self.state.push(state);
        self.x.push(value);
        if self.feasible_basis && value != 0.0 {
            self.recompute_basic_values();
        }
        Ok(self.cols.len() - 1)
    }

    pub fn num_columns(&self) -> usize {
        self.cols.len()
    }

    pub fn value(&self, j: usize) -> f64 {
        self.x[j]
    }

    pub fn objective(&self) -> f64 {
        self.cost.iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }

    pub fn is_basic(&self, j: usize) -> bool {
        matches!(self.state[j], State::Basic(_))
    }

    /// Simplex multipliers y = c_Bᵀ B⁻¹ of the current basis.
    pub fn duals(&self) -> Vec<f64> {
        self.multipliers(&self.cost)
    }

    pub fn reduced_cost(&self, j: usize) -> f64 {
        let y = self.duals();
        self.cost[j] - dot(&y, &self.cols[j])
    }

    pub fn solve(&mut self) -> Result<Outcome> {
        if !self.feasible_basis {
            self.start_phase_one();
            let phase_one: Vec<f64> = self.artificial.iter().map(|&a| if a { 1.0 } else { 0.0 }).collect();
            if self.iterate(&phase_one, true)? == Outcome::Unbounded {
                return Err(Error::Lp("phase one reported unbounded".into()));
            }
            let infeas: f64 = (0..self.cols.len()).filter(|&j| self.artificial[j]).map(|j| self.x[j]).sum();
            let bscale = 1.0 + self.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if infeas > 1e-8 * bscale {
                return Ok(Outcome::Infeasible);
            }
            for j in 0..self.cols.len() {
                if self.artificial[j] {
                    self.up[j] = 0.0;
                    if !self.is_basic(j) {
                        self.state[j] = State::AtLower;
                        self.x[j] = 0.0;
                    }
                }
            }
            self.feasible_basis = true;
            self.refactor()?;
        }
        let cost = self.cost.clone();
        self.iterate(&cost, false)
    }

    fn start_phase_one(&mut self) {
        let m = self.m;
        let mut resid = self.b.clone();
        for (j, col) in self.cols.iter().enumerate() {
            if self.x[j] != 0.0 {
                for i in 0..m {
                    resid[i] -= col[i] * self.x[j];
                }
            }
        }
        self.basis.clear();
        self.binv = vec![0.0; m * m];
        for (i, r) in resid.into_iter().enumerate() {
            let s = if r >= 0.0 { 1.0 } else { -1.0 };
            let mut col = vec![0.0; m];
            col[i] = s;
            self.cols.push(col);
            self.cost.push(0.0);
            self.lo.push(0.0);
            self.up.push(f64::INFINITY);
            self.artificial.push(true);
            self.state.push(State::Basic(i));
            self.x.push(r.abs());
            self.basis.push(self.cols.len() - 1);
            self.binv[i * m + i] = s;
        }
        self.since_refactor = 0;
    }

    fn multipliers(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (i, &bj) in self.basis.iter().enumerate() {
            let c = cost[bj];
            if c != 0.0 {
                for k in 0..m {
                    y[k] += c * self.binv[i * m + k];
                }
            }
        }
        y
    }

    fn ftran(&self, col: &[f64]) -> Vec<f64> {
        let m = self.m;
        (0..m).map(|i| dot(&self.binv[i * m..(i + 1) * m], col)).collect()
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        let mut bmat = vec![0.0; m * m];
        for (k, &j) in self.basis.iter().enumerate() {
            for i in 0..m {
                bmat[i * m + k] = self.cols[j][i];
            }
        }
        self.binv = linalg::invert(&bmat, m).ok_or_else(|| Error::Lp("singular basis".into()))?;
        self.since_refactor = 0;
        self.recompute_basic_values();
        Ok(())
    }

    fn recompute_basic_values(&mut self) {
        let m = self.m;
        let mut rhs = self.b.clone();
        for (j, col) in self.cols.iter().enumerate() {
            if !matches!(self.state[j], State::Basic(_)) && self.x[j] != 0.0 {
                for i in 0..m {
                    rhs[i] -= col[i] * self.x[j];
                }
            }
        }
        let xb = self.ftran(&rhs);
        for (i, &j) in self.basis.iter().enumerate() {
            self.x[j] = xb[i];
        }
    }

    fn iterate(&mut self, cost: &[f64], phase_one: bool) -> Result<Outcome> {
        let m = self.m;
        // columns whose pivot column is numerically empty; cleared after each pivot
        let mut rejected: Vec<usize> = Vec::new();
        loop {
            if self.iterations >= self.max_iterations {
                return Err(Error::Lp(format!("iteration limit {} reached", self.max_iterations)));
            }
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
            let y = self.multipliers(cost);
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.cols.len() {
                let dir = match self.state[j] {
                    State::Basic(_) => continue,
                    State::AtLower => 1.0,
                    State::AtUpper => -1.0,
                };
                if self.up[j] - self.lo[j] <= 0.0 || rejected.contains(&j) {
                    continue;
                }
                let d = cost[j] - dot(&y, &self.cols[j]);
                if dir * d < -self.tol {
                    match self.rule {
                        PricingRule::Bland => {
                            entering = Some((j, d));
                            break;
                        }
                        PricingRule::Dantzig => {
                            if entering.is_none_or(|(_, best)| d.abs() > best.abs()) {
                                entering = Some((j, d));
                            }
                        }
                    }
                }
            }
            let Some((j, d_enter)) = entering else {
                return Ok(Outcome::Optimal);
            };
            self.iterations += 1;
            let s = if self.state[j] == State::AtLower { 1.0 } else { -1.0 };
            let alpha = self.ftran(&self.cols[j]);
            let amax = alpha.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let piv_tol = 1e-9 * amax.max(1.0);
            let (t_best, leave) = match self.rule {
                PricingRule::Bland => self.ratio_test_bland(j, s, &alpha, piv_tol),
                PricingRule::Dantzig => self.ratio_test_harris(j, s, &alpha, piv_tol),
            };
            if t_best == f64::INFINITY {
                // phase one is bounded below, so an unbounded ray there is rounding
                let noise = phase_one || d_enter.abs() <= 1e3 * self.tol * (1.0 + amax);
                if noise {
                    rejected.push(j);
                    self.iterations -= 1;
                    continue;
                }
                return Ok(Outcome::Unbounded);
            }
            rejected.clear();
            self.x[j] += s * t_best;
            for i in 0..m {
                let bj = self.basis[i];
                self.x[bj] -= s * t_best * alpha[i];
            }
            match leave {
                None => {
                    self.state[j] = if s > 0.0 { State::AtUpper } else { State::AtLower };
                    self.x[j] = if s > 0.0 { self.up[j] } else { self.lo[j] };
                }
                Some((r, to_lower)) => {
                    let out = self.basis[r];
                    self.state[out] = if to_lower { State::AtLower } else { State::AtUpper };
                    self.x[out] = if to_lower { self.lo[out] } else { self.up[out] };
                    self.basis[r] = j;
                    self.state[j] = State::Basic(r);
                    let p = alpha[r];
                    for k in 0..m {
                        self.binv[r * m + k] /= p;
                    }
                    for i in 0..m {
                        if i == r || alpha[i] == 0.0 {
                            continue;
                        }
                        let f = alpha[i];
                        for k in 0..m {
                            let v = self.binv[r * m + k];
                            self.binv[i * m + k] -= f * v;
                        }
                    }
                    self.since_refactor += 1;
                }
            }
        }
    }

    /// Step length to the first blocking bound: the smallest index breaks ties.
    fn ratio_test_bland(&self, j: usize, s: f64, alpha: &[f64], piv_tol: f64) -> (f64, Option<(usize, bool)>) {
        let mut t_best = self.up[j] - self.lo[j];
        let mut leave: Option<(usize, bool)> = None;
        for (i, &ai) in alpha.iter().enumerate() {
            let Some((t, to_lower)) = self.blocking(i, s * ai, piv_tol, 0.0) else { continue };
            let better = match leave {
                None => t < t_best,
                Some((r, _)) => {
                    if (t - t_best).abs() <= 1e-12 * (1.0 + t_best.abs()) {
                        self.basis[i] < self.basis[r]
                    } else {
                        t < t_best
                    }
                }
            };
            if better {
                t_best = t;
                leave = Some((i, to_lower));
            }
        }
        (t_best, leave)
    }

    /// Longest step allowed when every bound is relaxed by the feasibility tolerance.
    fn relaxed_step(&self, s: f64, alpha: &[f64], piv_tol: f64) -> f64 {
        alpha
            .iter()
            .enumerate()
            .filter_map(|(i, &ai)| self.blocking(i, s * ai, piv_tol, FEAS_TOL).map(|b| b.0))
            .fold(f64::INFINITY, f64::min)
    }

    /// Two-pass ratio test: bounds relaxed by a small tolerance give the
    /// longest admissible step, then the largest pivot within it leaves.
    fn ratio_test_harris(&self, j: usize, s: f64, alpha: &[f64], piv_tol: f64) -> (f64, Option<(usize, bool)>) {
        let range = self.up[j] - self.lo[j];
        let relaxed = self.relaxed_step(s, alpha, piv_tol);
        if range <= relaxed {
            return (range, None);
        }
        let mut leave: Option<(usize, bool)> = None;
        let mut t_best = f64::INFINITY;
        let mut best_pivot = 0.0;
        for (i, &ai) in alpha.iter().enumerate() {
            if let Some((t, to_lower)) = self.blocking(i, s * ai, piv_tol, 0.0) {
                if t <= relaxed && ai.abs() > best_pivot {
                    best_pivot = ai.abs();
                    t_best = t;
                    leave = Some((i, to_lower));
                }
            }
        }
        (t_best, leave)
    }

    /// Step at which basic row `i` reaches a bound when it moves by −a per unit.
    fn blocking(&self, i: usize, a: f64, piv_tol: f64, slack: f64) -> Option<(f64, bool)> {
        let bj = self.basis[i];
        if a > piv_tol && self.lo[bj].is_finite() {
            Some((((self.x[bj] - self.lo[bj] + slack) / a).max(0.0), true))
        } else if a < -piv_tol && self.up[bj].is_finite() {
            Some((((self.up[bj] - self.x[bj] + slack) / -a).max(0.0), false))
        } else {
            None
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Minimum of cᵀx over Ax = b, x ≥ 0 by enumerating every basis.
    fn enumerate_vertices(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<f64> {
        let m = b.len();
        let n = c.len();
        let mut best: Option<f64> = None;
        let mut idx: Vec<usize> = (0..m).collect();
        loop {
            let mut bm = vec![0.0; m * m];
            for i in 0..m {
                for (k, &j) in idx.iter().enumerate() {
                    bm[i * m + k] = a[i][j];
                }
            }
            if let Some(xb) = linalg::solve(&bm, b) {
                if xb.iter().all(|&v| v >= -1e-9) {
                    let obj: f64 = idx.iter().zip(&xb).map(|(&j, v)| c[j] * v).sum();
                    best = Some(best.map_or(obj, |o: f64| o.min(obj)));
                }
            }
            // next combination
            let mut i = m;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if idx[i] < n - m + i {
                    idx[i] += 1;
                    for k in i + 1..m {
                        idx[k] = idx[k - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn matches_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for rule in [PricingRule::Bland, PricingRule::Dantzig] {
            for _ in 0..60 {
                let m = rng.gen_range(1..=4);
                let n = rng.gen_range(m + 1..=8);
                let a: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
                let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                let b: Vec<f64> = a.iter().map(|row| dot(row, &x0)).collect();
                let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
                let mut lp = Simplex::new(b.clone());
                lp.rule = rule;
                for j in 0..n {
                    lp.add_column(a.iter().map(|r| r[j]).collect(), c[j], 0.0, f64::INFINITY).unwrap();
                }
                assert_eq!(lp.solve().unwrap(), Outcome::Optimal);
                let oracle = enumerate_vertices(&a, &b, &c).unwrap();
                assert!((lp.objective() - oracle).abs() < 1e-8 * (1.0 + oracle.abs()));
            }
        }
    }

    #[test]
    fn bounded_variables_and_duals() {
        // min −x − y  s.t.  x + y + s = 1.5,  0 ≤ x, y ≤ 1,  s ≥ 0
        let mut lp = Simplex::new(vec![1.5]);
        lp.add_column(vec![1.0], -1.0, 0.0, 1.0).unwrap();
        lp.add_column(vec![1.0], -1.0, 0.0, 1.0).unwrap();
        lp.add_column(vec![1.0], 0.0, 0.0, f64::INFINITY).unwrap();
        assert_eq!(lp.solve().unwrap(), Outcome::Optimal);
        assert!((lp.objective() + 1.5).abs() < 1e-12);
        assert!((lp.duals()[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn warm_start_after_adding_column() {
        let mut lp = Simplex::new(vec![1.0]);
        lp.add_column(vec![1.0], 2.0, 0.0, f64::INFINITY).unwrap();
        lp.solve().unwrap();
        assert!((lp.objective() - 2.0).abs() < 1e-12);
        let j = lp.add_column(vec![2.0], 1.0, 0.0, f64::INFINITY).unwrap();
        assert!(lp.reduced_cost(j) < 0.0);
        lp.solve().unwrap();
        assert!((lp.objective() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = Simplex::new(vec![-1.0]);
        lp.add_column(vec![1.0], 1.0, 0.0, f64::INFINITY).unwrap();
        assert_eq!(lp.solve().unwrap(), Outcome::Infeasible);

        let mut lp = Simplex::new(vec![1.0]);
        lp.add_column(vec![1.0], 0.0, 0.0, f64::INFINITY).unwrap();
        lp.add_column(vec![-1.0], -1.0, 0.0, f64::INFINITY).unwrap();
        assert_eq!(lp.solve().unwrap(), Outcome::Unbounded);
    }
}
