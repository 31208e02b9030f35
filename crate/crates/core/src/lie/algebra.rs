//! Lie algebras given by structure constants over ℚ(√2).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{ExactMatrix, QSqrt2};

/// Dense table `c[i][j][k]` with `[bᵢ, bⱼ] = Σₖ c[i][j][k]·bₖ`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<QSqrt2>,
}

/// Outcome of [`StructureConstants::jacobi_check`].
#[derive(Clone, Debug, PartialEq)]
pub enum JacobiReport {
    Pass,
    Fail {
        triple: (usize, usize, usize),
        residual: Vec<QSqrt2>,
    },
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        matches!(self, JacobiReport::Pass)
    }
}

impl StructureConstants {
    pub fn zero(dim: usize) -> Self {
        StructureConstants {
            dim,
            c: vec![QSqrt2::zero(); dim * dim * dim],
        }
    }

    /// Builds a table from the nonzero brackets `[bᵢ, bⱼ]` with `i ≠ j`,
    /// filling in `[bⱼ, bᵢ] = −[bᵢ, bⱼ]`.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<QSqrt2>)]) -> Result<Self> {
        let mut sc = StructureConstants::zero(dim);
        for (i, j, v) in brackets {
            if *i >= dim || *j >= dim || v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: format!("indices < {dim} and vector length {dim}"),
                    got: format!("({i},{j}) with length {}", v.len()),
                });
            }
            for (k, x) in v.iter().enumerate() {
                sc.set(*i, *j, k, x.clone());
                sc.set(*j, *i, k, -x.clone());
            }
        }
        Ok(sc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &QSqrt2 {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Raw write of one coefficient; does not touch `c[j][i][k]`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: QSqrt2) {
        let d = self.dim;
        self.c[(i * d + j) * d + k] = v;
    }

    /// Bracket of basis vectors as a coefficient vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<QSqrt2> {
        (0..self.dim).map(|k| self.get(i, j, k).clone()).collect()
    }

    pub fn bracket(&self, v: &[QSqrt2], w: &[QSqrt2]) -> Result<Vec<QSqrt2>> {
        for x in [v, w] {
            if x.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim.to_string(),
                    got: x.len().to_string(),
                });
            }
        }
        let mut out = vec![QSqrt2::zero(); self.dim];
        for (i, vi) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, wj) in w.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let f = vi * wj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *o += &f * c;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_antisymmetric(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| (0..d).all(|k| self.get(i, j, k) == &-self.get(j, i, k).clone()))
        })
    }

    /// Checks `Σ_cyc [bᵢ,[bⱼ,bₖ]] = 0` exactly, scanning triples in
    /// lexicographic order and reporting the first violation.
    pub fn jacobi_check(&self) -> JacobiReport {
        let d = self.dim;
        let basis = |i: usize| unit(d, i);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let term = |a: usize, b: usize, c: usize| {
                        self.bracket(&basis(a), &self.basis_bracket(b, c))
                            .expect("dimensions agree")
                    };
                    let residual: Vec<QSqrt2> = term(i, j, k)
                        .into_iter()
                        .zip(term(j, k, i))
                        .zip(term(k, i, j))
                        .map(|((x, y), z)| x + y + z)
                        .collect();
                    if residual.iter().any(|x| !x.is_zero()) {
                        return JacobiReport::Fail {
                            triple: (i, j, k),
                            residual,
                        };
                    }
                }
            }
        }
        JacobiReport::Pass
    }

    /// Structure constants in the basis `b'ᵢ = Σₐ T[a][i]·bₐ` (columns of `T`
    /// are the new basis vectors in old coordinates).
    pub fn change_basis(&self, t: &ExactMatrix) -> Result<Self> {
        let d = self.dim;
        if t.rows() != d || t.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: format!("{d}x{d}"),
                got: format!("{}x{}", t.rows(), t.cols()),
            });
        }
        let t_inv = t.inverse()?;
        let mut out = StructureConstants::zero(d);
        for i in 0..d {
            for j in 0..d {
                let bi = t.col(i);
                let bj = t.col(j);
                let old = self.bracket(&bi, &bj)?;
                let new = t_inv.mul_vec(&old)?;
                for (k, x) in new.into_iter().enumerate() {
                    out.set(i, j, k, x);
                }
            }
        }
        Ok(out)
    }

    /// Largest absolute entry of `BᵢBⱼ − BⱼBᵢ − Σₖ c[i][j][k]·Bₖ` over all
    /// pairs; zero iff the matrices realize the table.
    pub fn realization_deviation(&self, mats: &[ExactMatrix]) -> Result<QSqrt2> {
        if mats.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{} matrices", self.dim),
                got: mats.len().to_string(),
            });
        }
        let mut worst = QSqrt2::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let comm = mats[i].commutator(&mats[j])?;
                let expected = combine(mats, &self.basis_bracket(i, j))?;
                let dev = comm.try_sub(&expected)?.max_abs();
                if dev > worst {
                    worst = dev;
                }
            }
        }
        Ok(worst)
    }
}

/// Coordinate unit vector.
pub fn unit(dim: usize, i: usize) -> Vec<QSqrt2> {
    (0..dim)
        .map(|k| {
            if k == i {
                QSqrt2::from_int(1)
            } else {
                QSqrt2::zero()
            }
        })
        .collect()
}

/// `Σₖ coeffs[k]·mats[k]`.
pub fn combine(mats: &[ExactMatrix], coeffs: &[QSqrt2]) -> Result<ExactMatrix> {
    let first = mats
        .first()
        .ok_or_else(|| Error::Shape("empty realization".into()))?;
    let mut acc = ExactMatrix::zeros(first.rows(), first.cols());
    for (m, c) in mats.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.try_add(&m.scale(c))?;
        }
    }
    Ok(acc)
}
