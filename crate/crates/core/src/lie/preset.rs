//! Named Lie algebras with a metric and an optional matrix realization.
//!
//! The built-in registry is compiled in from the JSON files under `presets/`.
//! The same format is accepted for user-supplied algebras:
//!
//! ```json
//! { "dim": n, "labels": [...], "c": [[i, j, k, [p, q, r, s]], ...],
//!   "gram": [[...]], "realization": [ matrix, ... ] }
//! ```
//!
//! Each `c` entry sets `[bᵢ, bⱼ]`'s `k`-th coefficient to `p/q + (r/s)√2` and
//! implies the antisymmetric entry. `realization` is optional.

use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::algebra::{JacobiReport, StructureConstants};
use crate::error::{Error, Result};
use crate::scalar::{ExactMatrix, QSqrt2};

const BUILTIN: &[(&str, &str)] = &[
    (
        "sl2-natural",
        include_str!("../../presets/sl2-natural.json"),
    ),
    (
        "sl2-lorentz",
        include_str!("../../presets/sl2-lorentz.json"),
    ),
    (
        "so2sol2-lorentz",
        include_str!("../../presets/so2sol2-lorentz.json"),
    ),
    ("rxsol2", include_str!("../../presets/rxsol2.json")),
    ("g3-goedel", include_str!("../../presets/g3-goedel.json")),
    ("goedel4", include_str!("../../presets/goedel4.json")),
    ("aff-r3", include_str!("../../presets/aff-r3.json")),
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub labels: Vec<String>,
    pub c: Vec<(usize, usize, usize, QSqrt2)>,
    pub gram: ExactMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<Vec<ExactMatrix>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraPreset {
    pub name: String,
    pub labels: Vec<String>,
    pub constants: StructureConstants,
    pub gram: ExactMatrix,
    pub realization: Option<Vec<ExactMatrix>>,
}

impl LieAlgebraPreset {
    pub fn builtin_names() -> impl Iterator<Item = &'static str> {
        BUILTIN.iter().map(|(n, _)| *n)
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let (_, text) = BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
        let mut p = Self::from_json(text)?;
        p.name = name.to_string();
        Ok(p)
    }

    pub fn all_builtin() -> Vec<Self> {
        Self::builtin_names()
            .map(|n| Self::builtin(n).expect("built-in presets are valid"))
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra file: {e}")))?;
        Self::from_file_data(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let mut p = Self::from_json(&text)?;
        if p.name.is_empty() {
            p.name = path.display().to_string();
        }
        Ok(p)
    }

    pub fn from_file_data(file: AlgebraFile) -> Result<Self> {
        let d = file.dim;
        if d == 0 || file.labels.len() != d {
            return Err(Error::Parse(format!(
                "dim {d} does not match {} labels",
                file.labels.len()
            )));
        }
        let mut sc = StructureConstants::zero(d);
        let mut seen = vec![false; d * d * d];
        for (i, j, k, v) in file.c {
            if i >= d || j >= d || k >= d {
                return Err(Error::Parse(format!(
                    "bracket index ({i},{j},{k}) out of range"
                )));
            }
            if i == j && !v.is_zero() {
                return Err(Error::Parse(format!("[b{i}, b{i}] must vanish")));
            }
            for (a, b, val) in [(i, j, v.clone()), (j, i, -v)] {
                let slot = (a * d + b) * d + k;
                if seen[slot] && sc.get(a, b, k) != &val {
                    return Err(Error::Parse(format!(
                        "conflicting entries for c[{a}][{b}][{k}]"
                    )));
                }
                seen[slot] = true;
                sc.set(a, b, k, val);
            }
        }
        if file.gram.rows() != d || !file.gram.is_symmetric() {
            return Err(Error::Parse(
                "gram must be a symmetric dim x dim matrix".into(),
            ));
        }
        if file.gram.det()?.is_zero() {
            return Err(Error::DegenerateMetric);
        }
        if let Some(mats) = &file.realization {
            let n = mats.first().map_or(0, ExactMatrix::rows);
            if mats.len() != d || mats.iter().any(|m| !m.is_square() || m.rows() != n) {
                return Err(Error::Parse(format!(
                    "realization needs {d} square matrices of equal size"
                )));
            }
        }
        Ok(LieAlgebraPreset {
            name: file.name.unwrap_or_default(),
            labels: file.labels,
            constants: sc,
            gram: file.gram,
            realization: file.realization,
        })
    }

    pub fn to_file_data(&self) -> AlgebraFile {
        let d = self.dim();
        let mut c = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..d {
                    let v = self.constants.get(i, j, k);
                    if !v.is_zero() {
                        c.push((i, j, k, v.clone()));
                    }
                }
            }
        }
        AlgebraFile {
            name: Some(self.name.clone()),
            dim: d,
            labels: self.labels.clone(),
            c,
            gram: self.gram.clone(),
            realization: self.realization.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.constants.dim()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn jacobi_check(&self) -> JacobiReport {
        self.constants.jacobi_check()
    }

    /// Exact max deviation between matrix commutators and the bracket table.
    pub fn realization_consistency(&self) -> Result<QSqrt2> {
        let mats = self
            .realization
            .as_ref()
            .ok_or_else(|| Error::MissingRealization(self.name.clone()))?;
        self.constants.realization_deviation(mats)
    }

    /// Same algebra and metric in a new basis (columns of `t` in old coordinates).
    pub fn change_basis(&self, t: &ExactMatrix, labels: Vec<String>) -> Result<Self> {
        let constants = self.constants.change_basis(t)?;
        let gram = &(&t.transpose() * &self.gram) * t;
        let realization = match &self.realization {
            Some(mats) => Some(
                (0..self.dim())
                    .map(|i| super::algebra::combine(mats, &t.col(i)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        Ok(LieAlgebraPreset {
            name: format!("{}'", self.name),
            labels,
            constants,
            gram,
            realization,
        })
    }

    pub fn with_gram(&self, gram: ExactMatrix) -> Result<Self> {
        let mut file = self.to_file_data();
        file.gram = gram;
        let mut p = Self::from_file_data(file)?;
        p.name = self.name.clone();
        Ok(p)
    }
}
