//! Command-line front end for the `daha` crate.
//!
//! Every command produces one report; [`run`] renders it in the chosen
//! format and returns the process exit code.

mod config;
mod scan;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use daha::dsbridge::{class_spec, ds_existence_predicate, to_ds_tuple, verify_class_membership, RowCheck};
use daha::error::Error;
use daha::laurent::e_roots;
use daha::linalg::match_multisets;
use daha::rep::{
    build_quotient_rep, commutant_dim, dim_vector, kernel_dims, quotient_plan, rho_spectrum, rigidity_d,
    spectrum_of_z, verify_relations, Convention, MatrixRecord, RelationResiduals, Rep, RepFile, SignVector,
};
use daha::roots::{root_of_kind, RootKind, RootVector, Sign};
use daha::scalar::{format_scalar, Params, Scalar};
use daha::selftest::{run_selftest, SuiteConfig, SPECTRUM_TOL};
use daha::strata::{classify_params, sigma_membership, xi_table};

pub use config::{Format, GlobalArgs, RunConfig, DEFAULT_N_MAX, N_MAX_LIMIT};

/// Stable process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    PropertyFailure = 1,
    Input = 2,
    OffStratum = 3,
    Verification = 4,
}

#[derive(Clone, Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { exit: Exit::Input, message: message.into() }
    }

    pub fn from_core(e: Error) -> Self {
        let exit = match e {
            Error::NotOnStratum(_) => Exit::OffStratum,
            Error::ZeroParameter(_)
            | Error::RootOfUnity(_)
            | Error::InvalidTolerance(_)
            | Error::InvalidKind(_)
            | Error::NonPositiveEntry(_)
            | Error::ImaginaryKind
            | Error::Parse(_) => Exit::Input,
            _ => Exit::Verification,
        };
        Self { exit, message: e.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "daha", version, about = "Irreducible representations of the rank-1 DAHA of type C^vC_1")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the strict real roots whose stratum contains the parameters.
    Classify {
        /// Also report kinds whose equation holds but an inequality fails.
        #[arg(long)]
        explain: bool,
    },
    /// Build and verify the representation of a root kind.
    Construct {
        #[arg(long)]
        kind: String,
        /// Free signs `eps0 eps1 del0 del1`, e.g. `+-++`.
        #[arg(long, default_value = "++++")]
        signs: String,
        /// Write the representation as JSON.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Classify every point of a grid or of a seeded random sample.
    Scan {
        /// `PARAM=START:END:COUNT`, repeatable; the last one varies fastest.
        #[arg(long, value_name = "SPEC")]
        grid: Vec<String>,
        /// Draw this many points from the sampling box instead.
        #[arg(long, value_name = "N", conflicts_with = "grid")]
        random: Option<usize>,
    },
    /// Verify the Deligne-Simpson data of a stored representation.
    DsCheck {
        #[arg(long, value_name = "FILE")]
        rep: PathBuf,
    },
    /// Eigenvalues of `z` on a constructed representation against the roots of its modulus.
    Spectrum {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value = "++++")]
        signs: String,
    },
    /// Run the property suite.
    Selftest {
        #[arg(long, hide = true)]
        inject_convention_flip: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Construct { .. } => "construct",
            Command::Scan { .. } => "scan",
            Command::DsCheck { .. } => "ds-check",
            Command::Spectrum { .. } => "spectrum",
            Command::Selftest { .. } => "selftest",
        }
    }
}

/// What a command hands back for rendering.
pub struct Output {
    pub results: Value,
    pub residuals: Value,
    pub text: String,
    pub csv: Option<String>,
    pub exit: Exit,
}

impl Output {
    fn new(results: Value, text: String) -> Self {
        Self { results, residuals: Value::Null, text, csv: None, exit: Exit::Ok }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    tool_version: &'static str,
    params: Value,
    command: &'a str,
    results: Value,
    residuals: Value,
    exit_code: i32,
}

pub(crate) fn params_json(p: &Params) -> Value {
    json!({
        "k0": format_scalar(p.k0),
        "k1": format_scalar(p.k1),
        "u0": format_scalar(p.u0),
        "u1": format_scalar(p.u1),
        "q_half": format_scalar(p.q_half),
    })
}

fn residuals_json(r: &RelationResiduals) -> Value {
    let mut map = serde_json::Map::new();
    for (name, v) in r.as_array() {
        map.insert(name.to_string(), json!(v));
    }
    Value::Object(map)
}

fn scalars_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|z| json!(format_scalar(*z))).collect())
}

fn parse_signs(text: &str) -> Result<SignVector, CliError> {
    let s: Vec<Sign> = text.chars().filter_map(Sign::from_symbol).collect();
    match s[..] {
        [a, b, c, d] if text.chars().count() == 4 => Ok(SignVector::new(a, b, c, d)),
        _ => Err(CliError::input(format!("signs must be four of '+'/'-', got {text:?}"))),
    }
}

fn parse_kind(text: &str) -> Result<(RootKind, RootVector), CliError> {
    let kind: RootKind = text.parse().map_err(CliError::from_core)?;
    if !kind.is_real() {
        return Err(CliError::from_core(Error::ImaginaryKind));
    }
    let root = root_of_kind(kind).map_err(CliError::from_core)?;
    Ok((kind, root))
}

fn cmd_classify(cfg: &RunConfig, explain: bool) -> Result<Output, CliError> {
    let p = cfg.params()?;
    let hits = classify_params(&p, cfg.n_max);
    let rows: Vec<Value> = hits.iter().map(|(k, v)| json!({"kind": k.to_string(), "root": v.to_string()})).collect();
    let mut text: String = hits.iter().map(|(k, v)| format!("{k} {v}\n")).collect();
    if hits.is_empty() {
        text.push_str("no strict real root\n");
    }
    let mut results = json!({"n_max": cfg.n_max, "roots": rows});
    if explain {
        let mut near = Vec::new();
        for (kind, _) in daha::roots::enumerate_strict_roots(cfg.n_max).into_iter().filter(|(k, _)| k.is_real()) {
            let verdict = sigma_membership(&p, kind).map_err(CliError::from_core)?;
            if !verdict.member && !verdict.failed.iter().any(|f| f.starts_with("eq.")) {
                text.push_str(&format!("near miss {kind}: {}\n", verdict.failed.join(", ")));
                near.push(json!({"kind": kind.to_string(), "verdict": verdict}));
            }
        }
        results["near_misses"] = Value::Array(near);
    }
    let mut out = Output::new(results, text);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kind", "root"]).expect("in-memory csv");
    for (k, v) in &hits {
        w.write_record([k.to_string(), v.to_string()]).expect("in-memory csv");
    }
    out.csv = Some(String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8"));
    Ok(out)
}

/// Checks shared by `construct` and `ds-check`.
struct Verification {
    residuals: RelationResiduals,
    alpha: Option<RootVector>,
    value: Value,
    ok: bool,
}

fn verify_rep(rep: &Rep, p: &Params, expected: Option<RootVector>) -> Verification {
    let residuals = verify_relations(rep, p);
    let mut ok = residuals.max() < daha::rep::RELATION_TOL;
    let mut value = serde_json::Map::new();
    let dim = dim_vector(rep, p);
    let alpha = dim.as_ref().ok().map(|d| d.as_root());
    match &dim {
        Ok(d) => value.insert("dim_vector".into(), json!(d.as_root().to_string())),
        Err(e) => value.insert("dim_vector".into(), json!({"error": e.to_string()})),
    };
    ok &= alpha.is_some() && (expected.is_none() || alpha == expected);
    match commutant_dim(rep, &p.tol) {
        Ok(c) => {
            ok &= c == 1;
            value.insert("commutant_dim".into(), json!(c));
        }
        Err(e) => {
            ok = false;
            value.insert("commutant_dim".into(), json!({"error": e.to_string()}));
        }
    }
    if let Ok(k) = kernel_dims(rep, p) {
        let d = rigidity_d(rep.dim() as u32, k.map(|x| x as u32));
        ok &= d == 0;
        value.insert("kernel_dims".into(), json!(k));
        value.insert("rigidity_D".into(), json!(d));
    }
    let ds = match to_ds_tuple(rep, p) {
        Ok(t) => {
            let rows: Option<Vec<RowCheck>> = alpha
                .and_then(|a| class_spec(a, p).ok())
                .and_then(|c| verify_class_membership(&t, &c, &p.tol).ok())
                .map(|r| r.to_vec());
            let exists = alpha.is_some_and(|a| ds_existence_predicate(a, &xi_table(p), p));
            let rows_ok = rows.as_ref().is_some_and(|r| r.iter().all(|c| c.ok));
            ok &= rows_ok && exists;
            json!({
                "product_residual": t.product_residual(),
                "det_product": format_scalar(t.det_product()),
                "rows": rows,
                "existence": exists,
            })
        }
        Err(e) => {
            ok = false;
            json!({"error": e.to_string()})
        }
    };
    value.insert("ds".into(), ds);
    Verification { residuals, alpha, value: Value::Object(value), ok }
}

fn cmd_construct(cfg: &RunConfig, kind: &str, signs: &str, out: Option<&PathBuf>) -> Result<Output, CliError> {
    let p = cfg.params()?;
    let (kind, root) = parse_kind(kind)?;
    let signs = parse_signs(signs)?;
    let rep = build_quotient_rep(kind, signs, &p).map_err(CliError::from_core)?;
    let check = verify_rep(&rep, &p, Some(root));
    let spectrum = spectrum_of_z(&rep, &p).map_err(CliError::from_core)?;
    let mut results = check.value.clone();
    results["kind"] = json!(kind.to_string());
    results["root"] = json!(root.to_string());
    results["dim"] = json!(rep.dim());
    results["spectrum_z"] = scalars_json(&spectrum);
    results["matrices"] = json!({
        "T0": MatrixRecord::from_matrix(&rep.t0),
        "T1": MatrixRecord::from_matrix(&rep.t1),
        "T0v": MatrixRecord::from_matrix(&rep.t0v),
        "T1v": MatrixRecord::from_matrix(&rep.t1v),
    });
    if let Some(path) = out {
        RepFile::new(&rep, Some(&p)).write(path).map_err(|e| CliError::input(e.to_string()))?;
        results["written"] = json!(path.display().to_string());
    }
    let dim_vector = check.alpha.map(|a| a.to_string()).unwrap_or_else(|| "?".into());
    let text = format!(
        "{kind} root {root}\ndim vector {dim_vector}\ncommutant {}\nrigidity D {}\nworst relation residual {:e}\nverified {}\n",
        results["commutant_dim"], results["rigidity_D"], check.residuals.max(), check.ok
    );
    let mut o = Output::new(results, text);
    o.residuals = residuals_json(&check.residuals);
    if !check.ok {
        o.exit = Exit::Verification;
    }
    Ok(o)
}

fn cmd_spectrum(cfg: &RunConfig, kind: &str, signs: &str) -> Result<Output, CliError> {
    let p = cfg.params()?;
    let (kind, _) = parse_kind(kind)?;
    let signs = parse_signs(signs)?;
    let rep = build_quotient_rep(kind, signs, &p).map_err(CliError::from_core)?;
    let plan = quotient_plan(kind, signs, &p).map_err(CliError::from_core)?;
    let got = spectrum_of_z(&rep, &p).map_err(CliError::from_core)?;
    let predicted: Vec<Scalar> = e_roots(plan.n_signed, plan.a, p.q()).into_iter().map(|r| r * plan.dilation).collect();
    let mut worst = match_multisets(&got, &predicted).unwrap_or(f64::INFINITY);
    let mut results = json!({
        "kind": kind.to_string(),
        "side": plan.side.as_str(),
        "eigenvalues": scalars_json(&got),
        "modulus_roots": scalars_json(&predicted),
    });
    if let RootKind::Type2 { eps, del, n } = kind {
        let rho = rho_spectrum(n, eps[0], del[0], &p);
        worst = worst.max(match_multisets(&got, &rho).unwrap_or(f64::INFINITY));
        results["rho"] = scalars_json(&rho);
    }
    results["max_error"] = json!(worst);
    let mut text: String = got.iter().map(|z| format!("{}\n", format_scalar(*z))).collect();
    text.push_str(&format!("max error {worst:e}\n"));
    let mut o = Output::new(results, text);
    o.residuals = json!({"spectrum": worst});
    if worst.is_nan() || worst >= SPECTRUM_TOL {
        o.exit = Exit::Verification;
    }
    Ok(o)
}

fn cmd_ds_check(cfg: &RunConfig, path: &std::path::Path) -> Result<(Output, Params), CliError> {
    let file = RepFile::read(path).map_err(|e| CliError::input(e.to_string()))?;
    let rep = file.to_rep().map_err(|e| CliError::input(e.to_string()))?;
    let p = if cfg.has_params() {
        cfg.params()?
    } else {
        match file.params() {
            Some(p) => p.map_err(CliError::from_core)?.with_tolerance(cfg.tol),
            None => return Err(CliError::input("no parameters in the file or on the command line")),
        }
    };
    let expected = rep.provenance.as_ref().and_then(|pr| root_of_kind(pr.kind).ok());
    let check = verify_rep(&rep, &p, expected);
    let text = format!(
        "dim {}\ndim vector {}\nworst relation residual {:e}\nverified {}\n",
        rep.dim(),
        check.alpha.map(|a| a.to_string()).unwrap_or_else(|| "?".into()),
        check.residuals.max(),
        check.ok
    );
    let mut o = Output::new(check.value.clone(), text);
    o.residuals = residuals_json(&check.residuals);
    if !check.ok {
        o.exit = Exit::Verification;
    }
    Ok((o, p))
}

fn cmd_selftest(cfg: &RunConfig, inject: bool) -> Output {
    let suite = SuiteConfig {
        seed: cfg.seed,
        tol: cfg.tol,
        n_max: cfg.n_max,
        convention: if inject { Convention::Flipped } else { Convention::Difference },
        ..SuiteConfig::default()
    };
    let report = run_selftest(&suite);
    let mut text = String::new();
    for o in &report.outcomes {
        let verdict = if o.passed { "ok" } else { "FAIL" };
        text.push_str(&format!("{:<26} {:<4} checked {:>5}  worst {:e}\n", o.name, verdict, o.checked, o.worst));
        if let Some(d) = &o.detail {
            text.push_str(&format!("    {d}\n"));
        }
    }
    for s in &report.skipped {
        text.push_str(&format!("{s:<26} skipped\n"));
    }
    if report.passed() {
        text.push_str("all properties passed\n");
    }
    let residuals = Value::Object(report.outcomes.iter().map(|o| (o.name.to_string(), json!(o.worst))).collect());
    let mut out = Output::new(serde_json::to_value(&report).expect("serializable"), text);
    out.residuals = residuals;
    if !report.passed() {
        out.exit = Exit::PropertyFailure;
    }
    out
}

fn render(format: Format, report: &Report, output: Option<&Output>) -> Result<String, CliError> {
    match (format, output) {
        (Format::Json, _) => Ok(serde_json::to_string_pretty(report).expect("serializable") + "\n"),
        (Format::Text, Some(o)) => Ok(o.text.clone()),
        (Format::Csv, Some(o)) => {
            o.csv.clone().ok_or_else(|| CliError::input(format!("csv output is not available for {}", report.command)))
        }
        (_, None) => Ok(String::new()),
    }
}

/// Runs a parsed command line, writing the report to `out` and diagnostics
/// to `err`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let command = cli.command.name();
    let cfg = RunConfig::from_args(&cli.global);
    let format = cfg.as_ref().map(|c| c.format).unwrap_or(Format::Json);
    let result = cfg.and_then(|cfg| {
        let shown = cfg.raw_params().ok();
        let (output, shown) = match &cli.command {
            Command::Classify { explain } => (cmd_classify(&cfg, *explain)?, shown),
            Command::Construct { kind, signs, out } => (cmd_construct(&cfg, kind, signs, out.as_ref())?, shown),
            Command::Spectrum { kind, signs } => (cmd_spectrum(&cfg, kind, signs)?, shown),
            Command::Scan { grid, random } => (scan::cmd_scan(&cfg, grid, *random)?, shown),
            Command::DsCheck { rep } => {
                let (o, p) = cmd_ds_check(&cfg, rep)?;
                (o, Some(p))
            }
            Command::Selftest { inject_convention_flip } => (cmd_selftest(&cfg, *inject_convention_flip), None),
        };
        Ok((output, shown))
    });
    let (output, params, exit, error) = match result {
        Ok((o, p)) => {
            let exit = o.exit;
            (Some(o), p, exit, None)
        }
        Err(e) => (None, None, e.exit, Some(e.message)),
    };
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION"),
        params: params.as_ref().map(params_json).unwrap_or(Value::Null),
        command,
        results: match (&output, &error) {
            (Some(o), _) => o.results.clone(),
            (None, Some(e)) => json!({"error": e}),
            (None, None) => Value::Null,
        },
        residuals: output.as_ref().map(|o| o.residuals.clone()).unwrap_or(Value::Null),
        exit_code: exit as i32,
    };
    let (exit, error) = match render(format, &report, output.as_ref()) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            (exit, error)
        }
        Err(e) => (e.exit, Some(e.message)),
    };
    if let Some(e) = error {
        let _ = writeln!(err, "error: {e}");
    }
    exit as i32
}
