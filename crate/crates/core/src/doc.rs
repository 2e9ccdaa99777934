//! JSON documents for tori, points, sublattices and integer matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::parse::{format_rational, parse_rational, parse_scalar};
use crate::scalars::{GeneratorSet, ScalarMatrix};
use crate::torus::{PolarisedTorus, TorsionPoint, DEFAULT_ASSUMPTIONS};

/// An integer written either as a JSON number or as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntEntry {
    Num(i64),
    Str(String),
}

impl IntEntry {
    pub fn from_bigint(x: &BigInt) -> Self {
        x.to_i64()
            .map_or_else(|| IntEntry::Str(x.to_string()), IntEntry::Num)
    }

    pub fn to_bigint(&self) -> Result<BigInt> {
        match self {
            IntEntry::Num(n) => Ok(BigInt::from(*n)),
            IntEntry::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Document(format!("not an integer: {s:?}"))),
        }
    }
}

pub fn int_rows(m: &IntMatrix) -> Vec<Vec<IntEntry>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(IntEntry::from_bigint).collect())
        .collect()
}

pub fn int_matrix(rows: &[Vec<IntEntry>], what: &str) -> Result<IntMatrix> {
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(IntEntry::to_bigint).collect::<Result<_>>())
        .collect::<Result<_>>()
        .map_err(|e| Error::Document(format!("{what}: {e}")))?;
    IntMatrix::from_rows(rows).map_err(|e| Error::Document(format!("{what}: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusDoc {
    pub generators: Vec<String>,
    pub dim: usize,
    /// `n` rows of `2n` scalar expressions.
    pub periods: Vec<Vec<String>>,
    /// Defaults to the standard form of a `[Z | D]` frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<IntEntry>>>,
    #[serde(default = "default_assumptions")]
    pub assumptions: String,
}

fn default_assumptions() -> String {
    DEFAULT_ASSUMPTIONS.to_string()
}

impl TorusDoc {
    pub fn from_torus(t: &PolarisedTorus) -> Self {
        TorusDoc {
            generators: t.generators().names().to_vec(),
            dim: t.dim(),
            periods: t.periods().to_strings(),
            gram: Some(int_rows(t.gram())),
            assumptions: t.assumptions().to_string(),
        }
    }

    pub fn to_torus(&self) -> Result<PolarisedTorus> {
        let gens = GeneratorSet::new(self.generators.clone())?;
        let n = self.dim;
        if self.periods.len() != n || self.periods.iter().any(|r| r.len() != 2 * n) {
            return Err(Error::Document(format!(
                "periods must be {n} rows of {} entries",
                2 * n
            )));
        }
        let rows = self
            .periods
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, e)| {
                        parse_scalar(e, &gens)
                            .map_err(|err| located(err, &format!("periods[{i}][{j}]")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let periods = ScalarMatrix::from_rows(&gens, rows)?;
        let gram = match &self.gram {
            Some(g) => int_matrix(g, "gram")?,
            None => PolarisedTorus::infer_standard_gram(&periods).ok_or_else(|| {
                Error::Document("no gram given and periods are not a [Z | D] frame".into())
            })?,
        };
        PolarisedTorus::new(periods, gram, self.assumptions.clone())
    }
}

fn located(err: Error, at: &str) -> Error {
    match err {
        Error::Parse {
            input,
            column,
            message,
        } => Error::Parse {
            input,
            column,
            message: format!("{at}: {message}"),
        },
        other => Error::Document(format!("{at}: {other}")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointBasis {
    /// Coordinates with respect to the lattice basis, read mod 1.
    Lattice,
    /// A vector of `C^n` given by rational coordinates in the complex frame.
    Ambient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub coords: Vec<String>,
    #[serde(default = "lattice_basis")]
    pub basis: PointBasis,
}

fn lattice_basis() -> PointBasis {
    PointBasis::Lattice
}

impl PointDoc {
    pub fn from_point(p: &TorsionPoint) -> Self {
        PointDoc {
            coords: p.to_strings(),
            basis: PointBasis::Lattice,
        }
    }

    pub fn to_point(&self, t: &PolarisedTorus) -> Result<TorsionPoint> {
        let coords: Vec<BigRational> = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| parse_rational(c).map_err(|e| located(e, &format!("coords[{i}]"))))
            .collect::<Result<_>>()?;
        match self.basis {
            PointBasis::Lattice => {
                if coords.len() != 2 * t.dim() {
                    return Err(Error::Document(format!(
                        "lattice point needs {} coordinates",
                        2 * t.dim()
                    )));
                }
                Ok(TorsionPoint::new(coords))
            }
            PointBasis::Ambient => t.point_from_ambient(&coords),
        }
    }
}

/// Several points, or a single point document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsDoc {
    Many { points: Vec<PointDoc> },
    One(PointDoc),
}

impl PointsDoc {
    pub fn to_points(&self, t: &PolarisedTorus) -> Result<Vec<TorsionPoint>> {
        match self {
            PointsDoc::Many { points } => points.iter().map(|p| p.to_point(t)).collect(),
            PointsDoc::One(p) => Ok(vec![p.to_point(t)?]),
        }
    }
}

/// Generators of a sublattice, as columns in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SublatticeDoc {
    pub columns: Vec<Vec<IntEntry>>,
}

impl SublatticeDoc {
    pub fn from_matrix(m: &IntMatrix) -> Self {
        SublatticeDoc {
            columns: int_rows(&m.transpose()),
        }
    }

    pub fn to_matrix(&self, rows: usize) -> Result<IntMatrix> {
        if self.columns.is_empty() {
            return Ok(IntMatrix::zeros(rows, 0));
        }
        let t = int_matrix(&self.columns, "columns")?;
        if t.cols() != rows {
            return Err(Error::Document(format!(
                "sublattice columns must have {rows} entries"
            )));
        }
        Ok(t.transpose())
    }
}

/// An integer matrix given by rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub matrix: Vec<Vec<IntEntry>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &IntMatrix) -> Self {
        MatrixDoc {
            matrix: int_rows(m),
        }
    }

    pub fn to_matrix(&self) -> Result<IntMatrix> {
        int_matrix(&self.matrix, "matrix")
    }
}

/// Deserialise, reporting JSON syntax errors with line and column.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Document(format!("line {}, column {}: {e}", e.line(), e.column())))
}

/// Pretty JSON with object keys sorted.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serialisable");
    serde_json::to_string_pretty(&v).expect("serialisable")
}

pub fn read_torus(text: &str) -> Result<PolarisedTorus> {
    from_json::<TorusDoc>(text)?.to_torus()
}

pub fn write_torus(t: &PolarisedTorus) -> String {
    to_canonical_json(&TorusDoc::from_torus(t))
}

pub fn rational_strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}
