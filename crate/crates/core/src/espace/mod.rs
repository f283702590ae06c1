//! Entire functions: polynomials, exponential sums, real-zero products and
//! formal products, combinations and quotients built from them.

mod expsum;
mod mean_type;
mod poly;
mod zeroprod;

pub use expsum::{log_sum_exp, ExpSum};
pub use mean_type::{default_schedule, mean_type, Confidence, MeanTypeEstimate};
pub use poly::{Polynomial, RealRootForm};
pub use zeroprod::{Truncated, ZeroProduct, ZeroSet, DEFAULT_TRUNCATION, LACUNARY_K_CAP};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Radius of the circle used to evaluate quotients near their divided roots.
const MEAN_VALUE_RADIUS: f64 = 0.5;
const CIRCLE_POINTS: usize = 64;
const CAUCHY_RADIUS: f64 = 0.1;
/// Relative tolerance for accepting a point as a zero.
pub const ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum EntireFn {
    Polynomial(Polynomial),
    ExpSum(ExpSum),
    ZeroProduct(ZeroProduct),
    Product(Vec<EntireFn>),
    Combination(Vec<(Complex64, EntireFn)>),
    /// numerator / Π (z − r); the numerator vanishes at every listed root.
    Quotient {
        numerator: Box<EntireFn>,
        roots: Vec<Complex64>,
    },
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn circle(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

impl From<Polynomial> for EntireFn {
    fn from(p: Polynomial) -> Self {
        EntireFn::Polynomial(p)
    }
}
impl From<ExpSum> for EntireFn {
    fn from(e: ExpSum) -> Self {
        EntireFn::ExpSum(e)
    }
}
impl From<ZeroProduct> for EntireFn {
    fn from(z: ZeroProduct) -> Self {
        EntireFn::ZeroProduct(z)
    }
}

impl EntireFn {
    pub fn constant(value: f64) -> Self {
        Polynomial::constant(c(value)).into()
    }

    pub fn monomial(n: usize) -> Self {
        Polynomial::monomial(n).into()
    }

    /// sin(πz) as a zero product.
    pub fn sin_pi() -> Self {
        ZeroProduct::sin_pi().into()
    }

    /// sin²(πz/2)/z², entire with value π²/4 at the origin.
    pub fn sin_half_squared_over_z_squared() -> Self {
        let sq = ExpSum::new(vec![(-PI, c(-0.25)), (0.0, c(0.5)), (PI, c(-0.25))]).expect("distinct");
        EntireFn::Quotient { numerator: Box::new(sq.into()), roots: vec![c(0.0), c(0.0)] }
    }

    /// ln F(z) (imaginary part modulo 2π); −∞ real part at zeros.
    pub fn eval_ln(&self, z: Complex64) -> Result<Complex64> {
        Ok(match self {
            EntireFn::Polynomial(p) => {
                if p.is_zero() {
                    c(f64::NEG_INFINITY)
                } else {
                    p.eval_ln(z)
                }
            }
            EntireFn::ExpSum(e) => e.eval_ln(z),
            EntireFn::ZeroProduct(zp) => zp.eval_ln(z),
            EntireFn::Product(fs) => {
                let mut acc = c(0.0);
                for f in fs {
                    acc += f.eval_ln(z)?;
                }
                acc
            }
            EntireFn::Combination(terms) => {
                let mut logs = Vec::with_capacity(terms.len());
                for (a, f) in terms {
                    if a.norm() > 0.0 {
                        logs.push(a.ln() + f.eval_ln(z)?);
                    }
                }
                log_sum_exp(&logs)
            }
            EntireFn::Quotient { numerator, roots } => quotient_ln(numerator, roots, z)?,
        })
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            EntireFn::Polynomial(p) => Ok(p.eval(z)),
            _ => {
                let l = self.eval_ln(z)?;
                if l.re.is_nan() || l.im.is_nan() {
                    return Err(Error::NonFinite(format!("F({z})")));
                }
                Ok(if l.re == f64::NEG_INFINITY { c(0.0) } else { l.exp() })
            }
        }
    }

    /// Declared exponential type.
    pub fn type_bound(&self) -> f64 {
        match self {
            EntireFn::Polynomial(_) => 0.0,
            EntireFn::ExpSum(e) => e.type_bound(),
            EntireFn::ZeroProduct(z) => z.type_bound(),
            EntireFn::Product(fs) => fs.iter().map(|f| f.type_bound()).sum(),
            EntireFn::Combination(t) => t.iter().map(|(_, f)| f.type_bound()).fold(0.0, f64::max),
            EntireFn::Quotient { numerator, .. } => numerator.type_bound(),
        }
    }

    /// F#(z) = conj F(conj z).
    pub fn sharp(&self) -> EntireFn {
        match self {
            EntireFn::Polynomial(p) => p.conj().into(),
            EntireFn::ExpSum(e) => e.sharp().into(),
            EntireFn::ZeroProduct(z) => z.sharp().into(),
            EntireFn::Product(fs) => EntireFn::Product(fs.iter().map(|f| f.sharp()).collect()),
            EntireFn::Combination(t) => EntireFn::Combination(t.iter().map(|(a, f)| (a.conj(), f.sharp())).collect()),
            EntireFn::Quotient { numerator, roots } => EntireFn::Quotient {
                numerator: Box::new(numerator.sharp()),
                roots: roots.iter().map(|r| r.conj()).collect(),
            },
        }
    }

    /// Average of |F| on a circle of radius 1/2 around w.
    fn local_scale(&self, w: Complex64) -> Result<f64> {
        let mut s = 0.0;
        for k in 0..16 {
            s += self.eval(w + circle(k, 16) * MEAN_VALUE_RADIUS)?.norm();
        }
        Ok(s / 16.0)
    }

    /// F(z)/(z − w) for a zero w of F.
    pub fn divide_zero(&self, w: Complex64) -> Result<EntireFn> {
        let not_zero = |residual: f64| Error::NotAZero { point: format!("{w}"), residual };
        match self {
            EntireFn::Polynomial(p) => {
                if let (Some(rf), true) = (p.root_form(), w.im.abs() <= 1e-12 * (1.0 + w.norm())) {
                    if let Some(i) = rf.roots.iter().position(|&r| (r - w.re).abs() <= 1e-10 * (1.0 + r.abs())) {
                        return Ok(p.remove_real_root(i).into());
                    }
                }
                let (q, rem) = p.divide_linear(w);
                if rem.norm() > ZERO_TOL * (1.0 + p.local_norm(w)) {
                    return Err(not_zero(rem.norm()));
                }
                Ok(q.into())
            }
            EntireFn::ZeroProduct(zp) => {
                if w.im.abs() <= 1e-12 * (1.0 + w.norm()) {
                    if let Ok(r) = zp.remove_zero(w.re) {
                        return Ok(r.into());
                    }
                }
                Err(not_zero(zp.eval(w).norm()))
            }
            EntireFn::Product(fs) => {
                for (i, f) in fs.iter().enumerate() {
                    if let Ok(g) = f.divide_zero(w) {
                        let mut out = fs.clone();
                        out[i] = g;
                        return Ok(EntireFn::Product(out));
                    }
                }
                Err(not_zero(self.eval(w)?.norm()))
            }
            _ => {
                let resid = self.eval(w)?.norm();
                let scale = match self {
                    EntireFn::ExpSum(e) => e.local_norm(w),
                    _ => self.local_scale(w)?,
                };
                if resid > ZERO_TOL * (1.0 + scale) {
                    return Err(not_zero(resid));
                }
                Ok(match self {
                    EntireFn::Quotient { numerator, roots } => {
                        let mut r = roots.clone();
                        r.push(w);
                        EntireFn::Quotient { numerator: numerator.clone(), roots: r }
                    }
                    other => EntireFn::Quotient { numerator: Box::new(other.clone()), roots: vec![w] },
                })
            }
        }
    }

    /// F′(z): closed form for polynomials, exponential sums and products at
    /// their zeros; Cauchy integral otherwise.
    pub fn derivative_at(&self, z: Complex64) -> Result<Complex64> {
        match self {
            EntireFn::Polynomial(p) => Ok(p.derivative_at(z)),
            EntireFn::ExpSum(e) => Ok(e.derivative_at(z)),
            EntireFn::ZeroProduct(zp) if z.im == 0.0 && zp.has_zero(z.re) => zp.derivative_at_zero(z.re),
            _ => self.cauchy_derivative(z),
        }
    }

    fn cauchy_derivative(&self, z: Complex64) -> Result<Complex64> {
        let mut logs = Vec::with_capacity(CIRCLE_POINTS);
        for k in 0..CIRCLE_POINTS {
            let u = circle(k, CIRCLE_POINTS);
            logs.push(self.eval_ln(z + u * CAUCHY_RADIUS)? - u.ln());
        }
        let s = log_sum_exp(&logs);
        if s.re == f64::NEG_INFINITY {
            return Ok(c(0.0));
        }
        Ok(s.exp() / (CIRCLE_POINTS as f64 * CAUCHY_RADIUS))
    }

    /// e^{iαz}F(z).
    pub fn exp_shift(&self, alpha: f64) -> EntireFn {
        if alpha == 0.0 {
            return self.clone();
        }
        match self {
            EntireFn::ExpSum(e) => e.shift(alpha).into(),
            EntireFn::Product(fs) => {
                let mut out = fs.clone();
                if let Some(i) = out.iter().position(|f| matches!(f, EntireFn::ExpSum(e) if e.terms().len() == 1)) {
                    let EntireFn::ExpSum(e) = &out[i] else { unreachable!() };
                    let shifted = e.shift(alpha);
                    if shifted.terms() == [(0.0, c(1.0))] {
                        out.remove(i);
                    } else {
                        out[i] = shifted.into();
                    }
                } else {
                    out.insert(0, ExpSum::single(alpha, c(1.0)).into());
                }
                if out.len() == 1 {
                    out.pop().unwrap()
                } else {
                    EntireFn::Product(out)
                }
            }
            other => EntireFn::Product(vec![ExpSum::single(alpha, c(1.0)).into(), other.clone()]),
        }
    }

    pub fn times(&self, other: &EntireFn) -> EntireFn {
        match (self, other) {
            (EntireFn::Polynomial(a), EntireFn::Polynomial(b)) => a.mul(b).into(),
            _ => EntireFn::Product(vec![self.clone(), other.clone()]),
        }
    }

    pub fn scale(&self, s: Complex64) -> EntireFn {
        match self {
            EntireFn::Polynomial(p) => p.scale(s).into(),
            _ => EntireFn::Combination(vec![(s, self.clone())]),
        }
    }

    /// Mean type along the positive imaginary axis.
    pub fn mean_type(&self, schedule: &[f64]) -> Result<MeanTypeEstimate> {
        mean_type(|y| Ok(self.eval_ln(Complex64::new(0.0, y))?.re), schedule)
    }
}

/// ℛ_w[F,G](z) = (F(z)G(w) − G(z)F(w)) / (z − w).
pub fn diff_quotient(w: Complex64, f: &EntireFn, g: &EntireFn) -> Result<EntireFn> {
    let fw = f.eval(w)?;
    let gw = g.eval(w)?;
    if let (EntireFn::Polynomial(p), EntireFn::Polynomial(q)) = (f, g) {
        let h = p.scale(gw).add(&q.scale(-fw));
        return Ok(h.divide_linear(w).0.into());
    }
    Ok(EntireFn::Quotient {
        numerator: Box::new(EntireFn::Combination(vec![(gw, f.clone()), (-fw, g.clone())])),
        roots: vec![w],
    })
}

/// Mean type of F/B along +i∞, computed as ln|F(iy)| − ln|B(iy)|.
pub fn mean_type_ratio(f: &EntireFn, b: &EntireFn, schedule: &[f64]) -> Result<MeanTypeEstimate> {
    mean_type(
        |y| {
            let z = Complex64::new(0.0, y);
            Ok(f.eval_ln(z)?.re - b.eval_ln(z)?.re)
        },
        schedule,
    )
}

fn quotient_direct(numerator: &EntireFn, roots: &[Complex64], z: Complex64) -> Result<Complex64> {
    let mut l = numerator.eval_ln(z)?;
    for r in roots {
        l -= (z - r).ln();
    }
    Ok(l)
}

fn quotient_ln(numerator: &EntireFn, roots: &[Complex64], z: Complex64) -> Result<Complex64> {
    let dmin = roots.iter().map(|r| (z - r).norm()).fold(f64::INFINITY, f64::min);
    if dmin > 0.5 * MEAN_VALUE_RADIUS {
        return quotient_direct(numerator, roots, z);
    }
    // Mean value over a circle that keeps clear of every divided root.
    let mut best = (MEAN_VALUE_RADIUS, -1.0);
    for k in 0..=8 {
        let rho = MEAN_VALUE_RADIUS * (1.0 + k as f64 / 8.0);
        let gap = roots.iter().map(|r| ((z - r).norm() - rho).abs()).fold(f64::INFINITY, f64::min);
        if gap > best.1 {
            best = (rho, gap);
        }
        if gap >= 0.4 * MEAN_VALUE_RADIUS {
            break;
        }
    }
    let rho = best.0;
    let mut logs = Vec::with_capacity(CIRCLE_POINTS);
    for k in 0..CIRCLE_POINTS {
        logs.push(quotient_direct(numerator, roots, z + circle(k, CIRCLE_POINTS) * rho)?);
    }
    Ok(log_sum_exp(&logs) - (CIRCLE_POINTS as f64).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sharp_examples() {
        let f: EntireFn = Polynomial::new(vec![c(0.0), Complex64::i()]).into();
        let s = f.sharp();
        assert_eq!(s.eval(z(2.0, 1.0)).unwrap(), -Complex64::i() * z(2.0, 1.0));
        let g: EntireFn = Polynomial::real(&[1.0, 0.0, 1.0]).into();
        assert_eq!(g.sharp(), g);
    }

    #[test]
    fn divide_zero_examples() {
        let p: EntireFn = Polynomial::real(&[-1.0, 0.0, 1.0]).into();
        assert_eq!(p.divide_zero(c(1.0)).unwrap(), Polynomial::real(&[1.0, 1.0]).into());
        let sq: EntireFn = Polynomial::monomial(2).into();
        assert!(matches!(sq.divide_zero(c(1.0)), Err(Error::NotAZero { .. })));
        let s = EntireFn::sin_pi().divide_zero(c(3.0)).unwrap();
        assert!((s.eval(c(3.0)).unwrap() - c(-PI)).norm() < 1e-12);
    }

    #[test]
    fn diff_quotient_examples() {
        let f: EntireFn = Polynomial::monomial(2).into();
        let one = EntireFn::constant(1.0);
        assert_eq!(diff_quotient(c(0.0), &f, &one).unwrap(), Polynomial::monomial(1).into());
        let f3: EntireFn = Polynomial::monomial(3).into();
        let f1: EntireFn = Polynomial::monomial(1).into();
        let r = diff_quotient(c(1.0), &f3, &f1).unwrap();
        assert!((r.eval(c(2.0)).unwrap() - c(6.0)).norm() < 1e-13);
    }

    #[test]
    fn mixed_diff_quotient_at_the_node() {
        let f = EntireFn::sin_pi();
        let g: EntireFn = ExpSum::single(1.0, c(1.0)).into();
        let w = z(0.3, 0.2);
        let r = diff_quotient(w, &f, &g).unwrap();
        let want = f.derivative_at(w).unwrap() * g.eval(w).unwrap() - g.derivative_at(w).unwrap() * f.eval(w).unwrap();
        assert!((r.eval(w).unwrap() - want).norm() < 1e-10 * want.norm());
    }

    #[test]
    fn quotient_closure_is_entire() {
        let f = EntireFn::sin_half_squared_over_z_squared();
        assert!((f.eval(c(0.0)).unwrap() - c(PI * PI / 4.0)).norm() < 1e-12);
        let x = z(0.5, 0.0);
        let want = (x * PI / 2.0).sin().powi(2) / (x * x);
        assert!((f.eval(x).unwrap() - want).norm() < 1e-13);
    }

    #[test]
    fn exp_shift_group_law() {
        let f = EntireFn::sin_pi();
        let back = f.exp_shift(1.5).exp_shift(-1.5);
        assert_eq!(back, f);
        let e: EntireFn = ExpSum::single(1.0, c(1.0)).into();
        assert_eq!(e.exp_shift(1.0), ExpSum::single(2.0, c(1.0)).into());
    }
}
