//! Published tuple classes and verdicts for n = 6, 7, 8, loaded from the
//! bundled asset file.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Poly};

const REFERENCE_JSON: &str = include_str!("../../assets/reference_table.json");

/// Published admissibility verdict of a tuple class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PublishedVerdict {
    /// Excluded by the invariant-subspace dimension argument.
    Dimension,
    /// Excluded by a common quadrinomial relation.
    Quadrinomial,
    /// Exhaustive search found no APN permutation.
    SearchEmpty,
    /// At least one APN permutation exists.
    Admissible,
    /// Neither excluded nor exhausted.
    Open,
}

impl PublishedVerdict {
    /// Whether one of the two pruning filters is credited with the verdict.
    pub fn is_filter_rejection(self) -> bool {
        matches!(self, PublishedVerdict::Dimension | PublishedVerdict::Quadrinomial)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReferenceClass {
    pub class: usize,
    /// Diagonal blocks of `B`, top-left first: `"Ik"` or a polynomial.
    pub b: Vec<String>,
    pub a: Vec<String>,
    pub admissible: PublishedVerdict,
    pub citation: String,
    #[serde(default)]
    pub solutions: Vec<String>,
}

impl ReferenceClass {
    pub fn b_matrix(&self) -> Result<Gf2Matrix> {
        blocks_to_matrix(&self.b)
    }

    pub fn a_matrix(&self) -> Result<Gf2Matrix> {
        blocks_to_matrix(&self.a)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReferenceDimension {
    pub n: usize,
    pub classes: Vec<ReferenceClass>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub schema: u32,
    pub description: String,
    pub dimensions: Vec<ReferenceDimension>,
}

pub fn reference_table() -> &'static ReferenceTable {
    static TABLE: OnceLock<ReferenceTable> = OnceLock::new();
    TABLE.get_or_init(|| serde_json::from_str(REFERENCE_JSON).expect("bundled reference table parses"))
}

/// Published classes for `n`, or `None` outside n = 6, 7, 8.
pub fn reference_classes(n: usize) -> Option<&'static [ReferenceClass]> {
    reference_table()
        .dimensions
        .iter()
        .find(|d| d.n == n)
        .map(|d| d.classes.as_slice())
}

/// Block-diagonal matrix from block specs such as `["I2", "x^4+x^3+x^2+1"]`.
pub fn blocks_to_matrix<S: AsRef<str>>(blocks: &[S]) -> Result<Gf2Matrix> {
    let mats = blocks
        .iter()
        .map(|s| {
            let s = s.as_ref().trim();
            match s.strip_prefix('I') {
                Some(k) => {
                    let k: usize = k
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad identity block {s:?}")))?;
                    Ok(Gf2Matrix::identity(k))
                }
                None => Gf2Matrix::companion(s.parse::<Gf2Poly>()?),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Gf2Matrix::block_diag(&mats)
}
