//! JSON form of a representation.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! lists of them.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::Matrix;
use crate::roots::{RootKind, Sign};
use crate::scalar::{Params, Scalar};

use super::{Provenance, Rep, Side};

type Pair = [f64; 2];

fn pair(z: Scalar) -> Pair {
    [z.re, z.im]
}

fn scalar(p: Pair) -> Scalar {
    Scalar::new(p[0], p[1])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord(pub Vec<Vec<Pair>>);

impl MatrixRecord {
    pub fn from_matrix(m: &Matrix) -> Self {
        Self((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect()).collect())
    }

    pub fn to_matrix(&self, n: usize) -> Result<Matrix> {
        if self.0.len() != n || self.0.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!("matrix record is not {n}x{n}")));
        }
        Ok(Matrix::from_fn(n, n, |i, j| scalar(self.0[i][j])))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceRecord {
    pub kind: String,
    pub side: String,
    /// Character signs of the two directly defined generators, e.g. `"+-"`.
    pub signs: String,
    /// `(degree, [re, im])` for each term of the modulus.
    pub e: Vec<(i32, Pair)>,
    pub a: Pair,
    pub window: (i32, i32),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub k0: Pair,
    pub k1: Pair,
    pub u0: Pair,
    pub u1: Pair,
    pub q_half: Pair,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub params: Option<ParamsRecord>,
    pub dim: usize,
    #[serde(rename = "T0")]
    pub t0: MatrixRecord,
    #[serde(rename = "T1")]
    pub t1: MatrixRecord,
    #[serde(rename = "T0v")]
    pub t0v: MatrixRecord,
    #[serde(rename = "T1v")]
    pub t1v: MatrixRecord,
    pub basis: Vec<i32>,
    pub provenance: Option<ProvenanceRecord>,
}

impl RepFile {
    pub fn new(r: &Rep, p: Option<&Params>) -> Self {
        let provenance = r.provenance.as_ref().map(|pr| ProvenanceRecord {
            kind: pr.kind.to_string(),
            side: pr.side.as_str().to_string(),
            signs: pr.signs.iter().map(|s| s.symbol()).collect(),
            e: pr.e.terms().map(|(k, c)| (k, pair(c))).collect(),
            a: pair(pr.a),
            window: pr.window,
        });
        RepFile {
            params: p.map(|p| ParamsRecord {
                k0: pair(p.k0),
                k1: pair(p.k1),
                u0: pair(p.u0),
                u1: pair(p.u1),
                q_half: pair(p.q_half),
            }),
            dim: r.dim(),
            t0: MatrixRecord::from_matrix(&r.t0),
            t1: MatrixRecord::from_matrix(&r.t1),
            t0v: MatrixRecord::from_matrix(&r.t0v),
            t1v: MatrixRecord::from_matrix(&r.t1v),
            basis: r.basis.clone(),
            provenance,
        }
    }

    pub fn to_rep(&self) -> Result<Rep> {
        let n = self.dim;
        let mut rep = Rep::from_matrices(
            self.t0.to_matrix(n)?,
            self.t1.to_matrix(n)?,
            self.t0v.to_matrix(n)?,
            self.t1v.to_matrix(n)?,
        )?;
        if self.basis.len() != n {
            return Err(Error::DimensionMismatch(format!("{} basis labels for dimension {n}", self.basis.len())));
        }
        rep.basis = self.basis.clone();
        if let Some(pr) = &self.provenance {
            let kind: RootKind = pr.kind.parse()?;
            let signs: Vec<Sign> = pr.signs.chars().filter_map(Sign::from_symbol).collect();
            let [s0, s1] = signs[..] else {
                return Err(Error::Parse(format!("bad sign pair {:?}", pr.signs)));
            };
            rep.provenance = Some(Provenance {
                kind,
                side: Side::parse(&pr.side)?,
                signs: [s0, s1],
                e: LaurentPoly::from_terms(pr.e.iter().map(|&(k, c)| (k, scalar(c)))),
                a: scalar(pr.a),
                window: pr.window,
            });
        }
        Ok(rep)
    }

    /// Stored parameters, validated with the default tolerance.
    pub fn params(&self) -> Option<Result<Params>> {
        self.params
            .as_ref()
            .map(|p| Params::new(scalar(p.k0), scalar(p.k1), scalar(p.u0), scalar(p.u1), scalar(p.q_half)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rep file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("rep file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}
