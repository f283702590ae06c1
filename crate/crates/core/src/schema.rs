//! JSON input formats for weights, entire functions, certificates and
//! discrete measures, with conversion into the library types.

use crate::error::{Error, Result};
use crate::espace::{EntireFn, ExpSum, Polynomial, ZeroProduct, ZeroSet};
use crate::interp::DiscreteMeasure;
use crate::krein::{DeclaredClass, KreinCertificate};
use crate::weight::{Formula, Weight};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Relative agreement required between listed and recomputed certificate data.
const LISTED_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKindSpec {
    Formula,
    Discrete,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Generator {
    /// Ω = {±base^k : kmin ≤ k ≤ kmax}, W(±base^k) = exp(logW_coeff·k²), plus
    /// W(0) = origin when given.
    Lacunary {
        base: f64,
        #[serde(default)]
        kmin: i32,
        kmax: i32,
        #[serde(rename = "logW_coeff")]
        log_w_coeff: f64,
        #[serde(default)]
        origin: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub kind: WeightKindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<Formula>,
    /// Closed intervals where a formula weight is finite; the whole line if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
}

impl WeightSpec {
    pub fn build(&self) -> Result<Weight> {
        let missing = |what: &str| Error::InvalidSpec(format!("{:?} weight needs `{what}`", self.kind).to_lowercase());
        match self.kind {
            WeightKindSpec::Formula => {
                let f = self.formula.clone().ok_or_else(|| missing("formula"))?;
                if let Formula::Constant { value } = f {
                    if !(value > 0.0 && value.is_finite()) {
                        return Err(Error::InvalidSpec("constant weight must be positive and finite".into()));
                    }
                }
                match &self.domain {
                    Some(d) => Weight::formula_on(f, d.clone()),
                    None => Ok(Weight::formula(f)),
                }
            }
            WeightKindSpec::Discrete => match (&self.points, &self.generator) {
                (Some(p), None) => Weight::discrete(p.clone()),
                (None, Some(Generator::Lacunary { base, kmin, kmax, log_w_coeff, origin })) => {
                    Weight::lacunary(*base, *kmin, *kmax, *log_w_coeff, *origin)
                }
                (Some(_), Some(_)) => Err(Error::InvalidSpec("give either `points` or `generator`, not both".into())),
                (None, None) => Err(missing("points` or `generator")),
            },
            WeightKindSpec::Table => Weight::tabulated(self.points.clone().ok_or_else(|| missing("points"))?),
        }
    }
}

/// A real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Pair(f64, f64),
}

impl Scalar {
    pub fn value(self) -> Complex64 {
        match self {
            Scalar::Real(r) => Complex64::new(r, 0.0),
            Scalar::Pair(re, im) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZerosSpec {
    List(Vec<f64>),
    Lacunary {
        base: f64,
        #[serde(default = "one_i32")]
        kmin: i32,
        kmax: i32,
    },
    Arithmetic {
        start: f64,
        step: f64,
    },
}

fn one_i32() -> i32 {
    1
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum EntireFnSpec {
    Poly {
        coeffs: Vec<(f64, f64)>,
    },
    Expsum {
        terms: Vec<(f64, f64, f64)>,
    },
    Zeroprod {
        zeros: ZerosSpec,
        gamma: Scalar,
        #[serde(default)]
        z_factor: bool,
        #[serde(default = "yes")]
        symmetric: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trunc: Option<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        added: Vec<f64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        removed: Vec<f64>,
    },
}

impl EntireFnSpec {
    pub fn build(&self) -> Result<EntireFn> {
        match self {
            EntireFnSpec::Poly { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::InvalidSpec("polynomial needs at least one coefficient".into()));
                }
                Ok(Polynomial::new(coeffs.iter().map(|&(re, im)| Complex64::new(re, im)).collect()).into())
            }
            EntireFnSpec::Expsum { terms } => {
                Ok(ExpSum::new(terms.iter().map(|&(l, re, im)| (l, Complex64::new(re, im))).collect())?.into())
            }
            EntireFnSpec::Zeroprod { zeros, gamma, z_factor, symmetric, trunc, added, removed } => {
                let set = match zeros {
                    ZerosSpec::List(v) => ZeroSet::List(v.clone()),
                    ZerosSpec::Lacunary { base, kmin, kmax } => {
                        ZeroSet::Lacunary { base: *base, k_min: *kmin, k_max: *kmax }
                    }
                    ZerosSpec::Arithmetic { start, step } => ZeroSet::Arithmetic { start: *start, step: *step },
                };
                let mut p = ZeroProduct::new(gamma.value(), *z_factor, set, *symmetric)?;
                if let Some(t) = trunc {
                    p = p.with_truncation(*t);
                }
                for &x in removed {
                    p = p.remove_zero(x)?;
                }
                Ok(p.with_added(added).into())
            }
        }
    }

    /// The JSON form of a polynomial, exponential sum or zero product.
    pub fn from_entire(f: &EntireFn) -> Option<Self> {
        match f {
            EntireFn::Polynomial(p) => {
                Some(EntireFnSpec::Poly { coeffs: p.coeffs().iter().map(|c| (c.re, c.im)).collect() })
            }
            EntireFn::ExpSum(e) => {
                Some(EntireFnSpec::Expsum { terms: e.terms().iter().map(|&(l, c)| (l, c.re, c.im)).collect() })
            }
            EntireFn::ZeroProduct(p) => {
                let zeros = match p.zero_set() {
                    ZeroSet::List(v) => ZerosSpec::List(v.clone()),
                    ZeroSet::Lacunary { base, k_min, k_max } => {
                        ZerosSpec::Lacunary { base: *base, kmin: *k_min, kmax: *k_max }
                    }
                    ZeroSet::Arithmetic { start, step } => ZerosSpec::Arithmetic { start: *start, step: *step },
                };
                let g = p.gamma();
                Some(EntireFnSpec::Zeroprod {
                    zeros,
                    gamma: if g.im == 0.0 { Scalar::Real(g.re) } else { Scalar::Pair(g.re, g.im) },
                    z_factor: p.z_factor(),
                    symmetric: p.symmetric(),
                    trunc: Some(p.truncation()),
                    added: p.added().to_vec(),
                    removed: p.removed().to_vec(),
                })
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSpec {
    #[serde(rename = "fn")]
    pub function: EntireFnSpec,
    pub class: DeclaredClass,
    /// Optional listing of zeros; checked against the recomputed zeros.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<Vec<f64>>,
    /// Optional B′ at the listed zeros; checked to relative 1e-6.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deriv: Option<Vec<f64>>,
}

impl CertificateSpec {
    pub fn build(&self) -> Result<KreinCertificate> {
        let cert = KreinCertificate::new(self.function.build()?, self.class)?;
        if let Some(zs) = &self.zeros {
            for &x in zs {
                if !cert.zeros.iter().any(|&z| (z - x).abs() <= LISTED_TOL * (1.0 + x.abs())) && cert.complete {
                    return Err(Error::InvalidSpec(format!("listed zero {x} is not a zero of the function")));
                }
                let r = cert.b.eval(Complex64::new(x, 0.0))?.norm();
                let scale = cert.b.derivative_at(Complex64::new(x, 0.0))?.norm().max(1.0);
                if r > LISTED_TOL * scale {
                    return Err(Error::InvalidSpec(format!("listed zero {x} has |B| = {r:e}")));
                }
            }
            if let Some(ds) = &self.deriv {
                if ds.len() != zs.len() {
                    return Err(Error::InvalidSpec("`deriv` and `zeros` differ in length".into()));
                }
                for (&x, &d) in zs.iter().zip(ds) {
                    let got = cert.b.derivative_at(Complex64::new(x, 0.0))?.re;
                    if (got - d).abs() > LISTED_TOL * got.abs().max(1e-300) {
                        return Err(Error::InvalidSpec(format!("B′({x}) is {got:e}, listed {d:e}")));
                    }
                }
            }
        } else if self.deriv.is_some() {
            return Err(Error::InvalidSpec("`deriv` given without `zeros`".into()));
        }
        Ok(cert)
    }

    /// JSON form of a certificate whose function has a JSON form, listing
    /// the zeros it carries.
    pub fn from_certificate(cert: &KreinCertificate) -> Option<Self> {
        Some(CertificateSpec {
            function: EntireFnSpec::from_entire(&cert.b)?,
            class: cert.declared_class,
            zeros: Some(cert.deriv_at_zeros.iter().map(|e| e.x).collect()),
            deriv: Some(cert.deriv_at_zeros.iter().map(|e| e.deriv).collect()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub support: Vec<f64>,
    pub masses: Vec<f64>,
    /// ±1, or unimodular `[re, im]` phases.
    pub signs: Vec<Scalar>,
}

impl MeasureSpec {
    pub fn build(&self) -> Result<DiscreteMeasure> {
        DiscreteMeasure::new(self.support.clone(), self.masses.clone(), self.signs.iter().map(|s| s.value()).collect())
    }

    pub fn from_measure(mu: &DiscreteMeasure) -> Self {
        MeasureSpec {
            support: mu.support.clone(),
            masses: mu.masses.clone(),
            signs: mu
                .phase
                .iter()
                .map(|p| if p.im == 0.0 { Scalar::Real(p.re) } else { Scalar::Pair(p.re, p.im) })
                .collect(),
        }
    }
}

/// Parses JSON, mapping syntax and schema errors to [`Error::InvalidSpec`].
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_and_lacunary_weights() {
        let g: WeightSpec = parse(r#"{"kind":"formula","formula":{"family":"exp_abs_pow","alpha":2}}"#).unwrap();
        assert_eq!(g.build().unwrap().ln_eval(1.5), 2.25);
        let l: WeightSpec =
            parse(r#"{"kind":"discrete","generator":{"type":"lacunary","base":2,"kmax":8,"logW_coeff":0.3}}"#).unwrap();
        let w = l.build().unwrap();
        assert!(w.eval(3.0).finite().is_none());
        assert!((w.ln_eval(-8.0) - 2.7).abs() < 1e-12);
    }

    #[test]
    fn malformed_inputs_are_invalid_specs() {
        assert!(matches!(parse::<WeightSpec>("{"), Err(Error::InvalidSpec(_))));
        let no_formula: WeightSpec = parse(r#"{"kind":"formula"}"#).unwrap();
        assert!(matches!(no_formula.build(), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn functions_round_trip() {
        let specs = [
            r#"{"variant":"poly","coeffs":[[1,0],[0,0],[-1,0]]}"#,
            r#"{"variant":"expsum","terms":[[1.5,0,1]]}"#,
            r#"{"variant":"zeroprod","zeros":{"arithmetic":{"start":1,"step":1}},"gamma":3.141592653589793,"z_factor":true}"#,
            r#"{"variant":"zeroprod","zeros":{"lacunary":{"base":2,"kmax":8}},"gamma":1,"z_factor":true}"#,
        ];
        for s in specs {
            let spec: EntireFnSpec = parse(s).unwrap();
            let f = spec.build().unwrap();
            let back = EntireFnSpec::from_entire(&f).unwrap().build().unwrap();
            let z = Complex64::new(0.3, 0.7);
            assert!((f.eval(z).unwrap() - back.eval(z).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn certificate_listing_is_checked() {
        let good: CertificateSpec = parse(
            r#"{"fn":{"variant":"poly","coeffs":[[-1,0],[0,0],[1,0]]},"class":"polynomial","zeros":[-1,1],"deriv":[-2,2]}"#,
        )
        .unwrap();
        assert_eq!(good.build().unwrap().zeros, vec![-1.0, 1.0]);
        let bad: CertificateSpec = parse(
            r#"{"fn":{"variant":"poly","coeffs":[[-1,0],[0,0],[1,0]]},"class":"polynomial","zeros":[-1,1],"deriv":[-2,3]}"#,
        )
        .unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn measure_signs() {
        let m: MeasureSpec = parse(r#"{"support":[-1,0,1],"masses":[0.25,0.5,0.25],"signs":[1,-1,1]}"#).unwrap();
        let mu = m.build().unwrap();
        assert_eq!(MeasureSpec::from_measure(&mu), m);
    }
}
