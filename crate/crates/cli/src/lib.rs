//! Command implementations behind the `pairstab` binary.
//!
//! Every command returns its report as a string so that runs can be compared
//! byte for byte; writing it out is left to the caller.

use std::path::Path;

use pairstab::chain::{cut_certificate, make_v};
use pairstab::cones::{
    check_copositive, check_pdf, decompose_with, threshold_scan, CopositivityOptions,
    DecomposeOptions,
};
use pairstab::continuum::{pair_mu_d, BumpFunction, ContinuumPotential};
use pairstab::group::{dft, Domain};
use pairstab::io::{self, sig15, CertificateJson, KernelJson};
use pairstab::plane2d::{eval_w1, CombParams, PlaneModel, QuadratureSpec, SeriesMode};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<pairstab::Error> for CliError {
    fn from(e: pairstab::Error) -> Self {
        use pairstab::Error as E;
        match e {
            E::Inconsistent(_) | E::Unresolved(_) | E::IterationLimit(_) | E::Quadrature { .. } => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Options shared by all commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub format: Format,
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            format: Format::Json,
            tol: None,
            seed: CopositivityOptions::default().seed,
        }
    }
}

impl RunConfig {
    fn tol_or(&self, default: f64) -> CliResult<f64> {
        let tol = self.tol.unwrap_or(default);
        if !(tol >= f64::EPSILON) || !tol.is_finite() {
            return Err(CliError::Usage(format!("tolerance {tol} is below machine epsilon")));
        }
        Ok(tol)
    }
}

/// Reads `source` as inline JSON when it starts with `{`, otherwise as a file path.
pub fn read_source(source: &str) -> CliResult<String> {
    if source.trim_start().starts_with('{') {
        return Ok(source.to_string());
    }
    std::fs::read_to_string(Path::new(source)).map_err(|e| CliError::Input(format!("{source}: {e}")))
}

fn kernel(source: &str) -> CliResult<KernelJson> {
    Ok(KernelJson::parse(&read_source(source)?)?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn seed_line(seed: u64) -> String {
    format!("# seed={seed}\n")
}

pub fn cmd_spectrum(source: &str, cfg: &RunConfig) -> CliResult<String> {
    let p = kernel(source)?.to_potential()?;
    let tol = cfg.tol_or(<f64 as pairstab::Real>::DECISION_TOL)?;
    let spectrum = dft(&p)?;
    let pdf = check_pdf(&p, tol)?;
    let coeffs: Vec<f64> = spectrum.coefficients().iter().copied().map(sig15).collect();
    Ok(match cfg.format {
        Format::Json => pretty(&json!({
            "spectrum": coeffs,
            "min": sig15(spectrum.min()),
            "verdict": if pdf { "PDF" } else { "not-PDF" },
            "tol": tol,
            "seed": cfg.seed,
        })),
        Format::Csv => {
            let mut out = seed_line(cfg.seed);
            out.push_str("k,coefficient\n");
            for (k, c) in coeffs.iter().enumerate() {
                out.push_str(&format!("{k},{}\n", io::fmt15(*c)));
            }
            out
        }
    })
}

/// Copositivity verdict for a kernel, or a cut certificate when `density` is given.
pub fn cmd_check_stable(
    source: Option<&str>,
    window: Option<usize>,
    density: Option<&str>,
    cfg: &RunConfig,
) -> CliResult<String> {
    if cfg.format == Format::Csv {
        return Err(CliError::Usage("check-stable reports JSON only".into()));
    }
    let tol = cfg.tol_or(CopositivityOptions::default().tol)?;
    if let Some(d) = density {
        let rho = kernel(d)?.to_density()?;
        let v = match source {
            Some(s) => kernel(s)?.to_potential()?,
            None => make_v(),
        };
        let cert = cut_certificate(&rho, &v)?;
        cert.validate(&rho, tol).map_err(|e| CliError::Internal(e.to_string()))?;
        let mut report = serde_json::to_value(&cert).expect("serializable certificate");
        report["verdict"] = json!("stable");
        report["seed"] = json!(cfg.seed);
        report["tol"] = json!(tol);
        return Ok(pretty(&report));
    }
    let source = source.ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let p = kernel(source)?.to_potential()?;
    if window.is_some() && matches!(p.domain(), Domain::Cyclic { .. }) {
        return Err(CliError::Usage("--window applies to line kernels only".into()));
    }
    let opts = CopositivityOptions {
        tol,
        seed: cfg.seed,
        ..CopositivityOptions::default()
    };
    let verdict = check_copositive(&p, window, &opts)?;
    verdict.validate(&p, window).map_err(|e| CliError::Internal(e.to_string()))?;
    let minimal: Vec<Value> = verdict
        .faces
        .iter()
        .filter(|f| f.minimal)
        .map(|f| json!({"support": f.support, "critical_value": sig15(f.critical_value)}))
        .collect();
    let witness = verdict.witness.as_ref().map(KernelJson::from_density);
    Ok(pretty(&json!({
        "verdict": if verdict.copositive { "copositive" } else { "not-copositive" },
        "minimum": sig15(verdict.minimum),
        "cross_check_minimum": sig15(verdict.cross_check_minimum),
        "faces": verdict.faces.len(),
        "minimal_faces": minimal,
        "witness": witness,
        "window": window,
        "tol": tol,
        "seed": verdict.seed,
    })))
}

pub fn cmd_decompose(source: &str, cfg: &RunConfig) -> CliResult<String> {
    if cfg.format == Format::Csv {
        return Err(CliError::Usage("decompose reports JSON only".into()));
    }
    let p = kernel(source)?.to_potential()?;
    let opts = DecomposeOptions {
        tol: cfg.tol_or(DecomposeOptions::default().tol)?,
        ..DecomposeOptions::default()
    };
    let cert = decompose_with(&p, &opts)?;
    cert.validate().map_err(|e| CliError::Internal(e.to_string()))?;
    let body = CertificateJson::from_certificate(&cert, Some(cfg.seed));
    let mut report = serde_json::to_value(&body).expect("serializable certificate");
    report["verdict"] = json!(if cert.is_decomposition() { "decomposable" } else { "separated" });
    Ok(pretty(&report))
}

pub fn cmd_scan_threshold(lo: f64, hi: f64, cfg: &RunConfig) -> CliResult<String> {
    let tol = cfg.tol_or(1e-6)?;
    let scan = threshold_scan(lo, hi, tol)?;
    Ok(match cfg.format {
        Format::Json => pretty(&json!({
            "threshold": sig15(scan.threshold),
            "rows": scan.rows.iter().map(|r| json!({
                "a": sig15(r.a),
                "feasible": r.feasible,
                "certificate_norm": sig15(r.certificate_norm),
            })).collect::<Vec<_>>(),
            "tol": tol,
            "seed": cfg.seed,
        })),
        Format::Csv => {
            let mut out = seed_line(cfg.seed);
            out.push_str(&format!("# threshold={}\n", io::fmt15(scan.threshold)));
            out.push_str(&io::threshold_csv(&scan.rows));
            out
        }
    })
}

pub fn cmd_scan_epsilon(eps: &[f64], mode: SeriesMode, cfg: &RunConfig) -> CliResult<String> {
    if eps.is_empty() {
        return Err(CliError::Usage("--eps-list must name at least one value".into()));
    }
    let spec = QuadratureSpec {
        rel_tol: cfg.tol_or(QuadratureSpec::default().rel_tol)?,
        ..QuadratureSpec::default()
    };
    let model = PlaneModel::new(spec)?;
    let scan = model.pairing_scan(eps, mode)?;
    Ok(match cfg.format {
        Format::Json => pretty(&json!({
            "points": scan.points.iter().map(|p| json!({
                "eps": sig15(p.eps),
                "S": sig15(p.s),
                "error": sig15(p.error),
            })).collect::<Vec<_>>(),
            "slope": scan.slope.map(sig15),
            "residual": scan.residual.map(sig15),
            "predicted_slope": sig15(model.predicted_slope()),
            "mode": match mode {
                SeriesMode::AsymptoticTail => "asymptotic",
                SeriesMode::FullQuadrature => "quadrature",
            },
            "seed": cfg.seed,
        })),
        Format::Csv => seed_line(cfg.seed) + &io::epsilon_scan_csv(&scan),
    })
}

/// Which potential `cmd_sample_w` tabulates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampled {
    /// The line potential with the half-width 1/2 cosine bump.
    W,
    /// The comb-convolved potential of the planar construction.
    W1 { eps: f64 },
}

/// Samples on `from, from + step, ...` up to `to`; `source` replaces the chain kernel.
pub fn cmd_sample_w(
    which: Sampled,
    from: f64,
    to: f64,
    step: f64,
    source: Option<&str>,
    cfg: &RunConfig,
) -> CliResult<String> {
    let half_width = match which {
        Sampled::W => 0.5,
        Sampled::W1 { .. } => 0.25,
    };
    let bump = BumpFunction::cosine_with_half_width(half_width);
    let w = match source {
        Some(s) => ContinuumPotential::new(kernel(s)?.to_potential()?, bump)?,
        None => ContinuumPotential::chain(bump),
    };
    let xs = w.sample(from, to, step)?;
    let (name, rows): (&str, Vec<(f64, f64)>) = match which {
        Sampled::W => ("W", xs),
        Sampled::W1 { eps } => {
            let comb = CombParams::new(eps)?;
            ("W1", xs.into_iter().map(|(x, _)| (x, eval_w1(&w, x, &comb))).collect())
        }
    };
    Ok(match cfg.format {
        Format::Csv => seed_line(cfg.seed) + &io::samples_csv(name, &rows),
        Format::Json => pretty(&json!({
            "x": rows.iter().map(|r| sig15(r.0)).collect::<Vec<_>>(),
            name: rows.iter().map(|r| sig15(r.1)).collect::<Vec<_>>(),
            "seed": cfg.seed,
        })),
    })
}

/// Pairing of the chain kernel with the truncated separating measure, on the lattice and in the continuum.
pub fn cmd_pair_mu(periods: usize, cfg: &RunConfig) -> CliResult<String> {
    let mu = pairstab::chain::make_mu::<f64>(periods);
    let lattice = pairstab::chain::pairing(&make_v(), &mu);
    let continuum = pair_mu_d(&ContinuumPotential::chain(BumpFunction::cosine()), periods);
    Ok(match cfg.format {
        Format::Json => pretty(&json!({
            "periods": periods,
            "lattice": sig15(lattice),
            "continuum": sig15(continuum),
            "seed": cfg.seed,
        })),
        Format::Csv => format!(
            "{}periods,lattice,continuum\n{periods},{},{}\n",
            seed_line(cfg.seed),
            io::fmt15(lattice),
            io::fmt15(continuum)
        ),
    })
}
