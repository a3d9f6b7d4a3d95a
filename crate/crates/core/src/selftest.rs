//! The property suite behind `daha selftest` and the acceptance target.
//!
//! Each check draws from its own seeded stream, so a property's verdict does
//! not depend on which other properties ran before it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dsbridge::{class_spec, ds_existence_predicate, to_ds_tuple, verify_class_membership};
use crate::error::Error;
use crate::linalg::{match_multisets, Matrix};
use crate::rep::{
    build_quotient_rep_with, build_truncated_polyrep_with, commutant_dim, dim_vector, kernel_dims, rho_spectrum,
    rigidity_d, spectrum_of_z, verify_relations, BuildOptions, Convention, Rep, Side, SignVector, RELATION_TOL,
};
use crate::roots::{enumerate_strict_roots, root_of_kind, tits_form, RootKind, Sign};
use crate::sampling::{generic_params, random_params, stratum_params};
use crate::scalar::{match_q_power, Params, Scalar, Tolerance};
use crate::strata::{classify_params, xi_product, xi_table};

/// Smallest residual a forced off-stratum construction must report.
pub const NEGATIVE_RESIDUAL: f64 = 1e-4;
/// Tolerance of the spectrum and xi-product comparisons.
pub const SPECTRUM_TOL: f64 = 1e-6;
pub const XI_TOL: f64 = 1e-9;
pub const DET_TOL: f64 = 1e-8;
pub const CONVENTION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub tol: Tolerance,
    pub n_max: u32,
    pub points_per_kind: usize,
    pub ds_points: usize,
    pub negative_points: usize,
    pub negative_n_max: u32,
    #[doc(hidden)]
    pub convention: Convention,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tol: Tolerance::default(),
            n_max: 4,
            points_per_kind: 5,
            ds_points: 100,
            negative_points: 100,
            negative_n_max: 3,
            convention: Convention::Difference,
        }
    }
}

impl SuiteConfig {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn options(&self) -> BuildOptions {
        BuildOptions { check_stratum: true, convention: self.convention }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Number of individual checks made.
    pub checked: usize,
    /// The property's headline number (largest residual, smallest margin,
    /// or failure count; see the property).
    pub worst: f64,
    pub detail: Option<String>,
}

struct Tally {
    name: &'static str,
    checked: usize,
    worst: f64,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str, worst: f64) -> Self {
        Self { name, checked: 0, worst, failure: None }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn finish(self) -> PropertyOutcome {
        PropertyOutcome {
            name: self.name,
            passed: self.failure.is_none(),
            checked: self.checked,
            worst: self.worst,
            detail: self.failure,
        }
    }
}

/// A constructed representation with everything needed to re-check it.
#[derive(Clone, Debug)]
pub struct Sample {
    pub kind: RootKind,
    pub free: SignVector,
    pub params: Params,
    pub rep: Rep,
}

fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> Sign {
    if rng.random_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn random_signs<R: Rng + ?Sized>(rng: &mut R) -> SignVector {
    SignVector::new(random_sign(rng), random_sign(rng), random_sign(rng), random_sign(rng))
}

/// `match_q_power(q^m, q) = m` on random validated `q`.
pub fn check_q_power_guard(cfg: &SuiteConfig) -> PropertyOutcome {
    let mut rng = cfg.rng(1);
    let mut tally = Tally::new("q-power guard", 0.0);
    for _ in 0..200 {
        let q = random_params(&mut rng, cfg.tol).q();
        let m = rng.random_range(-8..=8);
        let got = match_q_power(q.powi(m), q, -8, 8, &cfg.tol);
        tally.check(got == Ok(Some(m)), || match got {
            Err(e) => e.to_string(),
            Ok(other) => format!("q={q}: expected {m}, got {other:?}"),
        });
    }
    tally.finish()
}

/// Criterion 1: every real kind builds on its stratum with small residuals.
pub fn check_relations(cfg: &SuiteConfig) -> (PropertyOutcome, Vec<Sample>) {
    let mut rng = cfg.rng(2);
    let mut tally = Tally::new("relation suite", 0.0);
    let mut samples = Vec::new();
    for (kind, _) in enumerate_strict_roots(cfg.n_max).into_iter().filter(|(k, _)| k.is_real()) {
        for _ in 0..cfg.points_per_kind {
            let Some(params) = stratum_params(&mut rng, kind, cfg.tol) else {
                tally.check(false, || format!("{kind}: no stratum point found"));
                continue;
            };
            let free = random_signs(&mut rng);
            match build_quotient_rep_with(kind, free, &params, cfg.options()) {
                Ok(rep) => {
                    let worst = verify_relations(&rep, &params).max();
                    tally.worst = tally.worst.max(worst);
                    tally.check(worst < RELATION_TOL, || format!("{kind}: residual {worst:e}"));
                    samples.push(Sample { kind, free, params, rep });
                }
                Err(e) => tally.check(false, || format!("{kind}: {e}")),
            }
        }
    }
    (tally.finish(), samples)
}

/// Criterion 2: dimension vectors equal the roots.
pub fn check_dim_vectors(samples: &[Sample]) -> PropertyOutcome {
    let mut tally = Tally::new("dimension vectors", 0.0);
    for s in samples {
        let want = root_of_kind(s.kind).expect("real kind");
        let got = dim_vector(&s.rep, &s.params).map(|d| d.as_root());
        let ok = got.as_ref() == Ok(&want);
        if !ok {
            tally.worst += 1.0;
        }
        tally.check(ok, || format!("{}: expected {want}, got {got:?}", s.kind));
    }
    tally.finish()
}

/// Criterion 3: the spectrum of `Z` on Type2 modules is `rho_{-n..n}`.
pub fn check_spectrum(samples: &[Sample]) -> PropertyOutcome {
    let mut tally = Tally::new("spectrum of z", 0.0);
    for s in samples {
        let RootKind::Type2 { eps, del, n } = s.kind else { continue };
        let want = rho_spectrum(n, eps[0], del[0], &s.params);
        let dist = spectrum_of_z(&s.rep, &s.params).ok().and_then(|got| match_multisets(&got, &want));
        let d = dist.unwrap_or(f64::INFINITY);
        tally.worst = tally.worst.max(d);
        tally.check(d < SPECTRUM_TOL, || format!("{}: spectrum off by {d:e}", s.kind));
    }
    tally.finish()
}

/// Two one-dimensional representations at `k0 u0 = 1` differing in the
/// signs of `T0` and `T0v`, and their parameters.
pub fn two_characters() -> (Params, Rep, Rep) {
    let r = |x: f64| Scalar::new(x, 0.0);
    let p = Params::new(r(2.0), r(3.0), r(0.5), r(1.0 / 6.0), r(2.0)).expect("valid parameters");
    let m = |x: f64| Matrix::from_element(1, 1, r(x));
    let a = Rep::from_matrices(m(2.0), m(3.0), m(0.5), m(1.0 / 6.0)).expect("square");
    let b = Rep::from_matrices(m(-0.5), m(3.0), m(-2.0), m(1.0 / 6.0)).expect("square");
    (p, a, b)
}

/// Criterion 4: constructed modules are irreducible, a direct sum is not.
pub fn check_irreducibility(samples: &[Sample]) -> PropertyOutcome {
    let mut tally = Tally::new("irreducibility", 0.0);
    for s in samples {
        let c = commutant_dim(&s.rep, &s.params.tol);
        tally.check(c == Ok(1), || format!("{}: commutant {c:?}", s.kind));
    }
    let (p, a, b) = two_characters();
    let c = commutant_dim(&a.direct_sum(&b), &p.tol);
    tally.worst = c.as_ref().map(|&c| c as f64).unwrap_or(f64::NAN);
    tally.check(c == Ok(2), || format!("direct sum: commutant {c:?}"));
    tally.finish()
}

/// Criterion 5: the rigidity count vanishes on every constructed module.
pub fn check_rigidity(samples: &[Sample]) -> PropertyOutcome {
    let mut tally = Tally::new("rigidity", 0.0);
    tally.check(rigidity_d(3, [2, 2, 2, 2]) == 0, || "D(3; 2,2,2,2) != 0".into());
    tally.check(rigidity_d(2, [1, 1, 1, 1]) == 2, || "D(2; 1,1,1,1) != 2".into());
    for s in samples {
        let d = kernel_dims(&s.rep, &s.params).map(|k| rigidity_d(s.rep.dim() as u32, k.map(|x| x as u32)));
        if let Ok(v) = d {
            tally.worst = tally.worst.max(v.unsigned_abs() as f64);
        }
        tally.check(d == Ok(0), || format!("{}: D = {d:?}", s.kind));
    }
    tally.finish()
}

/// Criterion 6: `xi^[alpha] = 1` and `prod det A_i = 1` on Type2 strata,
/// plus the class data of every constructed module.
pub fn check_ds_consistency(cfg: &SuiteConfig, samples: &[Sample]) -> PropertyOutcome {
    let mut rng = cfg.rng(6);
    let mut tally = Tally::new("strata / Deligne-Simpson", 0.0);
    for n in 0..=cfg.n_max {
        for _ in 0..cfg.ds_points {
            let kind = RootKind::Type2 {
                eps: [random_sign(&mut rng), random_sign(&mut rng)],
                del: [random_sign(&mut rng), random_sign(&mut rng)],
                n,
            };
            let Some(p) = stratum_params(&mut rng, kind, cfg.tol) else {
                tally.check(false, || format!("{kind}: no stratum point found"));
                continue;
            };
            let alpha = root_of_kind(kind).expect("real kind");
            let xi_err = xi_product(alpha, &p).map(|x| (x - 1.0).norm()).unwrap_or(f64::INFINITY);
            tally.worst = tally.worst.max(xi_err);
            tally.check(xi_err < XI_TOL, || format!("{kind}: |xi - 1| = {xi_err:e}"));
            let det_err = build_quotient_rep_with(kind, SignVector::default(), &p, cfg.options())
                .and_then(|rep| to_ds_tuple(&rep, &p))
                .map(|t| (t.det_product() - 1.0).norm());
            match det_err {
                Ok(e) => {
                    tally.worst = tally.worst.max(e);
                    tally.check(e < DET_TOL, || format!("{kind}: |det - 1| = {e:e}"));
                }
                Err(e) => tally.check(false, || format!("{kind}: {e}")),
            }
        }
    }
    for s in samples {
        let alpha = root_of_kind(s.kind).expect("real kind");
        let ok = ds_existence_predicate(alpha, &xi_table(&s.params), &s.params)
            && to_ds_tuple(&s.rep, &s.params)
                .and_then(|t| verify_class_membership(&t, &class_spec(alpha, &s.params)?, &s.params.tol))
                .map(|rows| rows.iter().all(|r| r.ok))
                .unwrap_or(false);
        tally.check(ok, || format!("{}: class data or existence predicate fails", s.kind));
    }
    tally.finish()
}

/// Criterion 7: generic points lie on no stratum and forcing a Type2
/// construction there fails loudly. `worst` is the smallest residual seen.
pub fn check_negative(cfg: &SuiteConfig) -> PropertyOutcome {
    let mut rng = cfg.rng(7);
    let mut tally = Tally::new("off-stratum", f64::INFINITY);
    let opts = BuildOptions { check_stratum: false, convention: cfg.convention };
    let n_check = cfg.n_max.max(cfg.negative_n_max);
    for _ in 0..cfg.negative_points {
        let Some(p) = generic_params(&mut rng, n_check, 1e-6, cfg.tol) else {
            tally.check(false, || "no generic point found".into());
            continue;
        };
        let hits = classify_params(&p, n_check);
        tally.check(hits.is_empty(), || format!("generic point hits {} strata", hits.len()));
        for n in 0..=cfg.negative_n_max {
            let kind = RootKind::Type2 {
                eps: [random_sign(&mut rng), random_sign(&mut rng)],
                del: [random_sign(&mut rng), random_sign(&mut rng)],
                n,
            };
            let residual = match build_quotient_rep_with(kind, SignVector::default(), &p, opts) {
                Err(Error::IdealNotInvariant { residual }) | Err(Error::RelationResidual { residual, .. }) => residual,
                Err(_) | Ok(_) => 0.0,
            };
            tally.worst = tally.worst.min(residual);
            tally.check(residual > NEGATIVE_RESIDUAL, || format!("{kind}: off-stratum residual {residual:e}"));
        }
    }
    tally.finish()
}

/// Criterion 8: root counts and Tits forms up to `n = 20`.
pub fn check_roots() -> PropertyOutcome {
    let mut tally = Tally::new("root combinatorics", 0.0);
    let roots = enumerate_strict_roots(20);
    tally.worst = roots.len() as f64;
    tally.check(roots.len() == 16 * 21 + 9 * 20, || format!("{} roots", roots.len()));
    for (kind, v) in &roots {
        let want = if kind.is_real() { 1 } else { 0 };
        tally.check(tits_form(*v) == want, || format!("{kind}: tits form {}", tits_form(*v)));
    }
    tally.finish()
}

/// Criterion 10: the truncated polynomial representations at radius 5
/// satisfy the quadratic relations.
pub fn check_convention(cfg: &SuiteConfig) -> PropertyOutcome {
    let mut rng = cfg.rng(10);
    let mut tally = Tally::new("operator convention", 0.0);
    for side in [Side::P, Side::Pbar] {
        for s in SignVector::all() {
            let p = random_params(&mut rng, cfg.tol);
            let res = build_truncated_polyrep_with(side, s, 5, &p, cfg.convention).map(|t| t.quadratic_residuals(&p));
            match res {
                Ok([a, b]) => {
                    let w = a.max(b);
                    tally.worst = tally.worst.max(w);
                    tally.check(w < CONVENTION_TOL, || format!("{side:?} {s:?}: residual {w:e}"));
                }
                Err(e) => tally.check(false, || e.to_string()),
            }
        }
    }
    tally.finish()
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub outcomes: Vec<PropertyOutcome>,
    /// Properties not run because an earlier one failed.
    pub skipped: Vec<&'static str>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.skipped.is_empty() && self.outcomes.iter().all(|o| o.passed)
    }

    pub fn first_failure(&self) -> Option<&PropertyOutcome> {
        self.outcomes.iter().find(|o| !o.passed)
    }
}

const ORDER: [&str; 10] = [
    "q-power guard",
    "relation suite",
    "dimension vectors",
    "spectrum of z",
    "irreducibility",
    "rigidity",
    "strata / Deligne-Simpson",
    "off-stratum",
    "root combinatorics",
    "operator convention",
];

/// Runs the properties in a fixed order, stopping at the first failure.
pub fn run_selftest(cfg: &SuiteConfig) -> SelftestReport {
    let mut outcomes = Vec::new();
    let mut samples = Vec::new();
    for (i, name) in ORDER.iter().enumerate() {
        let outcome = match i {
            0 => check_q_power_guard(cfg),
            1 => {
                let (o, s) = check_relations(cfg);
                samples = s;
                o
            }
            2 => check_dim_vectors(&samples),
            3 => check_spectrum(&samples),
            4 => check_irreducibility(&samples),
            5 => check_rigidity(&samples),
            6 => check_ds_consistency(cfg, &samples),
            7 => check_negative(cfg),
            8 => check_roots(),
            _ => check_convention(cfg),
        };
        debug_assert_eq!(outcome.name, *name);
        let failed = !outcome.passed;
        outcomes.push(outcome);
        if failed {
            return SelftestReport { outcomes, skipped: ORDER[i + 1..].to_vec() };
        }
    }
    SelftestReport { outcomes, skipped: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig { n_max: 2, points_per_kind: 1, ds_points: 3, negative_points: 5, ..SuiteConfig::default() }
    }

    #[test]
    fn small_suite_passes() {
        let report = run_selftest(&small());
        assert!(report.passed(), "{:?}", report.first_failure());
    }

    #[test]
    fn flipped_convention_fails_at_relations() {
        let report = run_selftest(&SuiteConfig { convention: Convention::Flipped, ..small() });
        assert_eq!(report.first_failure().map(|o| o.name), Some("relation suite"));
    }

    #[test]
    fn loose_tolerance_fails_at_guard() {
        let report = run_selftest(&SuiteConfig { tol: Tolerance::new(0.5, 1e-9).unwrap(), ..small() });
        assert_eq!(report.first_failure().map(|o| o.name), Some("q-power guard"));
        assert_eq!(report.skipped.len(), 9);
    }
}
