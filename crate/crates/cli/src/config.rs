//! Run configuration: a flat `key=value` file overridden by flags.

use std::collections::BTreeMap;
use std::path::Path;

use clap::{Args, ValueEnum};
use daha::scalar::{parse_scalar, validate_params, Params, Tolerance};

use crate::CliError;

/// Largest `n` any command will look at.
pub const N_MAX_LIMIT: u32 = 20;
pub const DEFAULT_N_MAX: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone, Debug, Default)]
pub struct GlobalArgs {
    /// Flat `key=value` file; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<std::path::PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k0: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k1: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub u0: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub u1: Option<String>,
    #[arg(long = "q-half", global = true, allow_hyphen_values = true)]
    pub q_half: Option<String>,
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<u32>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long = "rank-tol", global = true)]
    pub rank_tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

const PARAM_KEYS: [&str; 5] = ["k0", "k1", "u0", "u1", "q_half"];
const KEYS: [&str; 11] = ["k0", "k1", "u0", "u1", "q_half", "n_max", "tol", "rank_tol", "format", "jobs", "seed"];

#[derive(Clone, Debug)]
pub struct RunConfig {
    params: [Option<String>; 5],
    pub n_max: u32,
    pub tol: Tolerance,
    pub format: Format,
    pub jobs: usize,
    pub seed: u64,
}

fn read_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("{}:{}: expected key=value", path.display(), no + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::input(format!("{}:{}: unknown key {key:?}", path.display(), no + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::input(format!("bad value for {key}: {v:?}")))
}

impl RunConfig {
    pub fn from_args(args: &GlobalArgs) -> Result<Self, CliError> {
        let mut file = match &args.config {
            Some(path) => read_file(path)?,
            None => BTreeMap::new(),
        };
        let flags = [&args.k0, &args.k1, &args.u0, &args.u1, &args.q_half];
        let params = std::array::from_fn(|i| flags[i].clone().or_else(|| file.remove(PARAM_KEYS[i])));
        let n_max = match (args.n_max, file.get("n_max")) {
            (Some(n), _) => n,
            (None, Some(v)) => parse_num("n_max", v)?,
            (None, None) => DEFAULT_N_MAX,
        };
        if n_max > N_MAX_LIMIT {
            return Err(CliError::input(format!("n_max = {n_max} exceeds {N_MAX_LIMIT}")));
        }
        let default = Tolerance::default();
        let eq_tol = match (args.tol, file.get("tol")) {
            (Some(t), _) => t,
            (None, Some(v)) => parse_num("tol", v)?,
            (None, None) => default.eq_tol(),
        };
        let rank_tol = match (args.rank_tol, file.get("rank_tol")) {
            (Some(t), _) => t,
            (None, Some(v)) => parse_num("rank_tol", v)?,
            (None, None) => default.rank_tol(),
        };
        let tol = Tolerance::new(eq_tol, rank_tol).map_err(CliError::from_core)?;
        let format = match (args.format, file.get("format")) {
            (Some(f), _) => f,
            (None, Some(v)) => Format::from_str(v, true).map_err(|_| CliError::input(format!("bad format {v:?}")))?,
            (None, None) => Format::Json,
        };
        let jobs = match (args.jobs, file.get("jobs")) {
            (Some(j), _) => j,
            (None, Some(v)) => parse_num("jobs", v)?,
            (None, None) => 1,
        }
        .max(1);
        let seed = match (args.seed, file.get("seed")) {
            (Some(s), _) => s,
            (None, Some(v)) => parse_num("seed", v)?,
            (None, None) => 0,
        };
        Ok(Self { params, n_max, tol, format, jobs, seed })
    }

    pub fn has_params(&self) -> bool {
        self.params.iter().all(Option::is_some)
    }

    /// Parsed values of the parameters that were given, `None` for the rest.
    pub fn partial_params(&self) -> Result<[Option<daha::Scalar>; 5], CliError> {
        let mut vals = [None; 5];
        for (v, text) in vals.iter_mut().zip(&self.params) {
            if let Some(text) = text {
                *v = Some(parse_scalar(text).map_err(CliError::from_core)?);
            }
        }
        Ok(vals)
    }

    /// Parameter values as given, parsed but not validated.
    pub fn raw_params(&self) -> Result<Params, CliError> {
        let mut vals = [daha::Scalar::new(0.0, 0.0); 5];
        for (i, key) in PARAM_KEYS.iter().enumerate() {
            let text = self.params[i].as_deref().ok_or_else(|| CliError::input(format!("missing parameter {key}")))?;
            vals[i] = parse_scalar(text).map_err(CliError::from_core)?;
        }
        let [k0, k1, u0, u1, q_half] = vals;
        Ok(Params::unchecked(k0, k1, u0, u1, q_half).with_tolerance(self.tol))
    }

    pub fn params(&self) -> Result<Params, CliError> {
        let p = self.raw_params()?;
        validate_params(&p).map_err(CliError::from_core)?;
        Ok(p)
    }
}
