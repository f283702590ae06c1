use bernstein_core::basis::Family;
use bernstein_core::criteria::{self, AkhiezerOptions, DecisionBudget};
use bernstein_core::espace::{default_schedule, EntireFn};
use bernstein_core::interp::{self, DiscreteMeasure};
use bernstein_core::krein::{self, KreinCertificate};
use bernstein_core::majorant::{self, MajorantOptions};
use bernstein_core::par::Execution;
use bernstein_core::schema::{self, CertificateSpec, EntireFnSpec, MeasureSpec, WeightSpec};
use bernstein_core::weight::Weight;
use bernstein_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod output;

use output::{Artifact, Series};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_SOFTWARE: u8 = 70;

#[derive(Parser, Debug)]
#[command(
    name = "bernstein",
    version,
    about = "Weighted polynomial approximation: majorants, density criteria, certificates"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the result here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized searches.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Also write (x, y) series as CSV to this path.
    #[arg(long, global = true)]
    emit_plot_data: Option<PathBuf>,
    /// Relative tolerance of the linear programs.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tol: f64,
    /// Run every map on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// m_n(z) for n = 0..=degree at each probe.
    Majorant {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value_t = 12)]
        degree: usize,
        /// Probe point as `re,im`; repeatable.
        #[arg(long = "probe", value_parser = parse_complex)]
        probes: Vec<Complex64>,
    },
    /// The three growth tests and the distance probe, without a certificate.
    Criteria {
        #[arg(long)]
        weight: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// K1–K4 for a certificate against a weight and the polynomials of a degree.
    Certify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value_t = 12)]
        degree: usize,
        /// Zeros summed per side for infinite zero sets.
        #[arg(long, default_value_t = 100_000)]
        k_max: usize,
    },
    /// Interpolation series zF(z) = Σ xF(x)/B′(x)·B(z)/(z − x) at each z.
    Interpolate {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long = "z", value_parser = parse_complex, required = true)]
        points: Vec<Complex64>,
        #[arg(long, default_value_t = 10_000)]
        k_max: usize,
    },
    /// Builds B from a finite measure, or from the extremal annihilator of a
    /// weight on a grid, and checks the finite-model identities.
    Construct {
        #[arg(long, conflicts_with_all = ["weight", "grid"])]
        measure: Option<PathBuf>,
        #[arg(long, requires = "grid")]
        weight: Option<PathBuf>,
        /// Comma-separated grid points for the extremal annihilator.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Normalization point; defaults to the first support point.
        #[arg(long, allow_hyphen_values = true)]
        t0: Option<f64>,
    },
    /// Full density decision; exit 0 dense-likely, 1 non-dense-certified, 2 inconclusive.
    Decide {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 100_000)]
        k_max: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    #[arg(long, default_value_t = 12)]
    degree: usize,
    #[arg(long, value_parser = parse_complex, default_value = "0,1")]
    probe: Complex64,
    /// Half-width of the log-integral window.
    #[arg(long, default_value_t = 100.0)]
    radius: f64,
    /// Perturbation steps of the Pollard search.
    #[arg(long, default_value_t = 200)]
    iters: usize,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}

/// Failure classes, mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EX_USAGE,
            Failure::Data(_) => EX_DATAERR,
            Failure::Internal(_) => EX_SOFTWARE,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(_)
            | Error::ZeroAtOrigin
            | Error::InconsistentMeasure(_)
            | Error::WeightInfiniteAtZero(_)
            | Error::NotAZero { .. } => Failure::Data(e.to_string()),
            Error::Precondition(_) => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    schema::parse(&read_text(path)?).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load_weight(path: &Path) -> Result<Weight, Failure> {
    load::<WeightSpec>(path)?.build().map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load_cert(path: &Path) -> Result<KreinCertificate, Failure> {
    load::<CertificateSpec>(path)?.build().map_err(|e| match e {
        Error::InvalidSpec(_) => Failure::Data(format!("{}: {e}", path.display())),
        other => Failure::from(other),
    })
}

fn load_fn(path: &Path) -> Result<EntireFn, Failure> {
    load::<EntireFnSpec>(path)?.build().map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load_measure(path: &Path) -> Result<DiscreteMeasure, Failure> {
    load::<MeasureSpec>(path)?.build().map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn exec(common: &Common) -> Execution {
    if common.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn majorant_options(common: &Common) -> MajorantOptions {
    MajorantOptions { tol: common.tol, exec: exec(common), ..MajorantOptions::default() }
}

fn budget(common: &Common, b: &BudgetArgs, k_max: usize) -> DecisionBudget {
    DecisionBudget {
        n_max: b.degree,
        probe: b.probe,
        akhiezer: AkhiezerOptions { radius: b.radius, ..AkhiezerOptions::default() },
        pollard_iters: b.iters,
        seed: common.seed,
        k4_per_side: k_max,
        majorant: majorant_options(common),
        ..DecisionBudget::default()
    }
}

#[derive(Serialize)]
struct CertifyReport {
    certificate: Option<CertificateSpec>,
    validation: krein::CertificateValidation,
    mean_type: Option<krein::MeanTypeCondition>,
    verdict: criteria::Overall,
}

#[derive(Serialize)]
struct ConstructReport {
    measure: MeasureSpec,
    t0: f64,
    certificate: Option<CertificateSpec>,
    consistency: interp::ConsistencyReport,
    identities: interp::HtReport,
    /// μ recovered from the constructed B, rescaled to the input's total variation.
    round_trip_deviation: f64,
}

fn criteria_series(r: &criteria::CriteriaReport) -> Vec<Series> {
    let mut out = Vec::new();
    if let Some(m) = &r.mergelyan {
        out.push(Series::new("mergelyan", m.degrees.iter().map(|&n| n as f64).zip(m.values.iter().copied()).collect()));
    }
    if let Some(a) = &r.akhiezer {
        out.push(Series::new("akhiezer", a.values.iter().map(|v| (v.n.unwrap_or(0) as f64, v.value)).collect()));
    }
    if let Some(p) = &r.pollard {
        out.push(Series::new("pollard", p.values.iter().map(|v| (v.n as f64, v.value)).collect()));
    }
    if let Some(d) = &r.distance {
        out.push(Series::new(
            "distance",
            d.degrees.iter().map(|&n| n as f64).zip(d.distances.iter().copied()).collect(),
        ));
    }
    out
}

fn criteria_csv(r: &criteria::CriteriaReport) -> String {
    let mut s = String::from("series,n,value\n");
    for series in criteria_series(r) {
        for (x, y) in &series.points {
            s.push_str(&format!("{},{},{:.12e}\n", series.name, x, y));
        }
    }
    s
}

fn run(cli: &Cli) -> Result<(Artifact, u8), Failure> {
    let c = &cli.common;
    if c.tol.is_nan() || c.tol <= 0.0 {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    match &cli.command {
        Command::Majorant { weight, degree, probes } => {
            let w = load_weight(weight)?;
            let probes = if probes.is_empty() { vec![Complex64::i()] } else { probes.clone() };
            let degrees: Vec<usize> = (0..=*degree).collect();
            let table = majorant::majorant_profile(&w, &degrees, &probes, &majorant_options(c))?;
            let series = probes
                .iter()
                .zip(&table.values)
                .map(|(z, v)| {
                    Series::new(
                        &format!("m_n({}{:+}i)", z.re, z.im),
                        degrees.iter().map(|&n| n as f64).zip(v.iter().copied()).collect(),
                    )
                })
                .collect();
            Ok((Artifact::new(&table, table.to_csv(), series), 0))
        }
        Command::Criteria { weight, budget: b } => {
            let w = load_weight(weight)?;
            let r = criteria::decide_density(&w, &Family::Polynomials { degree: b.degree }, &budget(c, b, 0), None);
            let csv = criteria_csv(&r);
            let series = criteria_series(&r);
            Ok((Artifact::new(&r, csv, series), 0))
        }
        Command::Certify { cert, weight, degree, k_max } => {
            let w = load_weight(weight)?;
            let cert = load_cert(cert)?;
            let family = Family::Polynomials { degree: *degree }.members();
            let schedule = default_schedule();
            let validation = krein::validate_certificate(&cert, &w, &family, &schedule, *k_max)?;
            let mean_type = krein::mean_type_condition(&cert, &family, &schedule).ok();
            let verdict =
                if validation.valid { criteria::Overall::NonDenseCertified } else { criteria::Overall::Inconclusive };
            let mut csv = String::from("x,term,ln_term\n");
            for t in &validation.k4.terms {
                csv.push_str(&format!("{},{:.12e},{:.12e}\n", t.x, t.term, t.ln_term));
            }
            let series =
                vec![Series::new("k4_ln_term", validation.k4.terms.iter().map(|t| (t.x, t.ln_term)).collect())];
            let report =
                CertifyReport { certificate: CertificateSpec::from_certificate(&cert), validation, mean_type, verdict };
            Ok((Artifact::new(&report, csv, series), verdict.exit_code() as u8))
        }
        Command::Interpolate { cert, function, points, k_max } => {
            let cert = load_cert(cert)?;
            let f = load_fn(function)?;
            let values = points
                .iter()
                .map(|&z| interp::lagrange_series(&cert, &f, z, *k_max))
                .collect::<bernstein_core::Result<Vec<_>>>()?;
            let mut csv = String::from("re_z,im_z,re_lhs,im_lhs,re_rhs,im_rhs,residual,tail_bound\n");
            for v in &values {
                csv.push_str(&format!(
                    "{},{},{:.15e},{:.15e},{:.15e},{:.15e},{:.3e},{:.3e}\n",
                    v.z.re, v.z.im, v.lhs.re, v.lhs.im, v.rhs.re, v.rhs.im, v.residual, v.tail_bound
                ));
            }
            let series = vec![Series::new("residual", values.iter().map(|v| (v.z.norm(), v.residual)).collect())];
            Ok((Artifact::new(&values, csv, series), 0))
        }
        Command::Construct { measure, weight, grid, degree, t0 } => {
            let mu = match (measure, weight, grid) {
                (Some(m), _, _) => load_measure(m)?,
                (None, Some(w), Some(g)) => interp::extremal_annihilator(&load_weight(w)?, g, *degree)?,
                _ => return Err(Failure::Usage("give --measure, or --weight with --grid".into())),
            };
            let t0 = t0.unwrap_or(mu.support[0]);
            let (b, consistency) = interp::construct_from_measure(&mu, t0, 1e-9)?;
            let samples: Vec<Complex64> =
                [(0.5, 1.0), (-1.3, 0.4), (2.1, -0.7)].iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let identities = interp::verify_ht_identities(&mu, t0, &samples)?;
            // μ({t}) = 1/(g₀(t)B′(t)) read back from the constructed B
            let back: Vec<f64> = b.deriv_at_zeros.iter().map(|e| 1.0 / e.deriv).collect();
            let scale = mu.total_variation() / back.iter().map(|v| v.abs()).sum::<f64>();
            let round_trip_deviation =
                mu.signed().iter().zip(&back).map(|(a, b)| (a - b * scale).norm() / a.norm()).fold(0.0, f64::max);
            let mut csv = String::from("t,mass,sign_re,sign_im\n");
            for ((t, m), g) in mu.support.iter().zip(&mu.masses).zip(&mu.phase) {
                csv.push_str(&format!("{t},{m:.15e},{},{}\n", g.re, g.im));
            }
            let series =
                vec![Series::new("signed_mass", mu.support.iter().zip(mu.signed()).map(|(&t, s)| (t, s.re)).collect())];
            let report = ConstructReport {
                measure: MeasureSpec::from_measure(&mu),
                t0,
                certificate: CertificateSpec::from_certificate(&b),
                consistency,
                identities,
                round_trip_deviation,
            };
            Ok((Artifact::new(&report, csv, series), 0))
        }
        Command::Decide { weight, cert, budget: b, k_max } => {
            let w = load_weight(weight)?;
            let cert = cert.as_deref().map(load_cert).transpose()?;
            let r = criteria::decide_density(
                &w,
                &Family::Polynomials { degree: b.degree },
                &budget(c, b, *k_max),
                cert.as_ref(),
            );
            let code = r.overall.exit_code() as u8;
            let csv = criteria_csv(&r);
            let series = criteria_series(&r);
            Ok((Artifact::new(&r, csv, series), code))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|(artifact, code)| {
        artifact
            .write(cli.common.format == Format::Csv, cli.common.out.as_deref(), cli.common.emit_plot_data.as_deref())
            .map_err(|e| Failure::Internal(format!("writing output: {e}")))?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) | Failure::Data(m) | Failure::Internal(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
