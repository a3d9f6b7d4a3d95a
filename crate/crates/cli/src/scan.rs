//! Grid and random scans over parameter space.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use daha::sampling::random_params;
use daha::scalar::{format_scalar, parse_scalar, validate_params, Params, Scalar};
use daha::strata::classify_params;

use crate::{params_json, CliError, Output, RunConfig};

const NAMES: [&str; 5] = ["k0", "k1", "u0", "u1", "q_half"];

struct Axis {
    slot: usize,
    values: Vec<Scalar>,
}

fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let bad = || CliError::input(format!("malformed grid {spec:?}; expected PARAM=START:END:COUNT"));
    let (name, range) = spec.split_once('=').ok_or_else(bad)?;
    let name = name.trim().replace('-', "_");
    let slot = NAMES.iter().position(|n| *n == name).ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    let [start, end, count] = parts[..] else { return Err(bad()) };
    let start = parse_scalar(start).map_err(|_| bad())?;
    let end = parse_scalar(end).map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 {
        return Err(bad());
    }
    let values = (0..count)
        .map(|i| if count == 1 { start } else { start + (end - start) * (i as f64 / (count - 1) as f64) })
        .collect();
    Ok(Axis { slot, values })
}

fn with_slot(p: &Params, slot: usize, v: Scalar) -> Params {
    let mut p = *p;
    match slot {
        0 => p.k0 = v,
        1 => p.k1 = v,
        2 => p.u0 = v,
        3 => p.u1 = v,
        _ => p.q_half = v,
    }
    p
}

fn grid_points(cfg: &RunConfig, specs: &[String]) -> Result<Vec<Params>, CliError> {
    let axes = specs.iter().map(|s| parse_axis(s)).collect::<Result<Vec<_>, _>>()?;
    let given = cfg.partial_params()?;
    let mut vals = [Scalar::new(1.0, 0.0); 5];
    for (i, v) in given.iter().enumerate() {
        match v {
            Some(v) => vals[i] = *v,
            None if axes.iter().any(|a| a.slot == i) => {}
            None => return Err(CliError::input(format!("missing parameter {}", NAMES[i]))),
        }
    }
    let [k0, k1, u0, u1, q_half] = vals;
    let base = Params::unchecked(k0, k1, u0, u1, q_half).with_tolerance(cfg.tol);
    let mut points = vec![base];
    for axis in &axes {
        points = points.iter().flat_map(|p| axis.values.iter().map(move |&v| with_slot(p, axis.slot, v))).collect();
    }
    Ok(points)
}

struct Row {
    params: Params,
    hits: Result<Vec<String>, String>,
}

pub fn cmd_scan(cfg: &RunConfig, grid: &[String], random: Option<usize>) -> Result<Output, CliError> {
    let points = match random {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..n).map(|_| random_params(&mut rng, cfg.tol)).collect()
        }
        None => grid_points(cfg, grid)?,
    };
    let n_max = cfg.n_max;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::input(format!("thread pool: {e}")))?;
    let rows: Vec<Row> = pool.install(|| {
        points
            .par_iter()
            .map(|p| Row {
                params: *p,
                hits: validate_params(p)
                    .map(|_| classify_params(p, n_max).iter().map(|(k, _)| k.to_string()).collect())
                    .map_err(|e| e.to_string()),
            })
            .collect()
    });

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["idx", "k0", "k1", "u0", "u1", "q_half", "hits"]).expect("in-memory csv");
    let mut json_rows = Vec::with_capacity(rows.len());
    let mut text = String::new();
    let mut total = 0;
    for (idx, row) in rows.iter().enumerate() {
        let p = &row.params;
        let hits = match &row.hits {
            Ok(h) => {
                total += h.len();
                h.join(";")
            }
            Err(e) => format!("error:{e}"),
        };
        let vals = [p.k0, p.k1, p.u0, p.u1, p.q_half].map(format_scalar);
        let mut record = vec![idx.to_string()];
        record.extend(vals.iter().cloned());
        record.push(hits.clone());
        w.write_record(&record).expect("in-memory csv");
        text.push_str(&format!("{idx} {}\n", if hits.is_empty() { "-" } else { &hits }));
        let mut entry = json!({"idx": idx, "params": params_json(p)});
        match &row.hits {
            Ok(h) => entry["hits"] = json!(h),
            Err(e) => entry["error"] = json!(e),
        }
        json_rows.push(entry);
    }
    text.push_str(&format!("{} points, {total} hits\n", rows.len()));
    let results: Value = json!({"n_max": n_max, "points": json_rows, "total_hits": total});
    let mut out = Output::new(results, text);
    out.csv = Some(String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8"));
    Ok(out)
}
