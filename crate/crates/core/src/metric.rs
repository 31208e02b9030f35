//! Left-invariant pseudo-metrics: Koszul connection, curvature, signature,
//! pseudo-orthonormalization and metric scaling.
//!
//! For left-invariant fields the metric products are constant, so the Koszul
//! formula loses its derivative terms:
//!
//! `2(∇ᵢbⱼ, bₖ) = (bₖ,[bᵢ,bⱼ]) + (bⱼ,[bₖ,bᵢ]) − (bᵢ,[bⱼ,bₖ])`
//!
//! and the connection coefficients follow from the exact Gram inverse.
//! Everything here runs over ℚ(√2) without tolerances.

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebraPreset, StructureConstants};
use crate::scalar::{ExactMatrix, Matrix, QSqrt2};

#[derive(Clone, Debug, PartialEq)]
pub struct PseudoMetric {
    gram: ExactMatrix,
    inverse: ExactMatrix,
}

impl PseudoMetric {
    pub fn new(gram: ExactMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::InvalidArgument(
                "Gram matrix must be symmetric".into(),
            ));
        }
        let inverse = gram.inverse().map_err(|_| Error::DegenerateMetric)?;
        Ok(PseudoMetric { gram, inverse })
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn inner(&self, u: &[QSqrt2], v: &[QSqrt2]) -> QSqrt2 {
        let gv = self.gram.mul_vec(v).expect("vector length matches metric");
        u.iter().zip(&gv).map(|(a, b)| a * b).sum()
    }

    /// Coordinates of the vector whose products with the basis are `covector`.
    pub fn raise(&self, covector: &[QSqrt2]) -> Vec<QSqrt2> {
        self.inverse
            .mul_vec(covector)
            .expect("covector length matches metric")
    }

    pub fn signature(&self) -> Result<(usize, usize)> {
        signature(&self.gram)
    }

    pub fn scaled(&self, c: &QSqrt2) -> Result<Self> {
        PseudoMetric::new(self.gram.scale(c))
    }
}

/// `∇_{bᵢ} bⱼ = Σₖ Γ[i][j][k] bₖ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionTable {
    dim: usize,
    gamma: Vec<QSqrt2>,
}

impl ConnectionTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &QSqrt2 {
        &self.gamma[(i * self.dim + j) * self.dim + k]
    }

    /// `∇_{bᵢ} bⱼ` as a coefficient vector.
    pub fn basis_derivative(&self, i: usize, j: usize) -> Vec<QSqrt2> {
        (0..self.dim).map(|k| self.get(i, j, k).clone()).collect()
    }

    /// `∇_u v` for left-invariant fields with constant coefficients `u`, `v`.
    pub fn nabla(&self, u: &[QSqrt2], v: &[QSqrt2]) -> Vec<QSqrt2> {
        let mut out = vec![QSqrt2::zero(); self.dim];
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let f = ui * vj;
                for (k, o) in out.iter_mut().enumerate() {
                    let g = self.get(i, j, k);
                    if !g.is_zero() {
                        *o += &f * g;
                    }
                }
            }
        }
        out
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.gamma.iter().map(QSqrt2::to_f64).collect()
    }

    /// `∇ᵢbⱼ − ∇ⱼbᵢ = [bᵢ,bⱼ]` for every pair.
    pub fn is_torsion_free(&self, sc: &StructureConstants) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                (0..self.dim).all(|k| &(self.get(i, j, k) - self.get(j, i, k)) == sc.get(i, j, k))
            })
        })
    }

    /// `(∇ᵢbⱼ, bₖ) + (bⱼ, ∇ᵢbₖ) = 0` for every triple (Gram entries are constant).
    pub fn is_metric_compatible(&self, metric: &PseudoMetric) -> bool {
        let d = self.dim;
        let e = |i: usize| crate::lie::unit(d, i);
        (0..d).all(|i| {
            (0..d).all(|j| {
                (0..d).all(|k| {
                    let a = metric.inner(&self.basis_derivative(i, j), &e(k));
                    let b = metric.inner(&e(j), &self.basis_derivative(i, k));
                    (a + b).is_zero()
                })
            })
        })
    }
}

pub fn koszul_connection(preset: &LieAlgebraPreset) -> Result<ConnectionTable> {
    koszul_connection_with(&preset.constants, &PseudoMetric::new(preset.gram.clone())?)
}

pub fn koszul_connection_with(
    sc: &StructureConstants,
    metric: &PseudoMetric,
) -> Result<ConnectionTable> {
    let d = sc.dim();
    if metric.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d.to_string(),
            got: metric.dim().to_string(),
        });
    }
    let e = |i: usize| crate::lie::unit(d, i);
    let half = QSqrt2::from_ratio(1, 2);
    let mut gamma = Vec::with_capacity(d * d * d);
    for i in 0..d {
        for j in 0..d {
            let lowered: Vec<QSqrt2> = (0..d)
                .map(|k| {
                    let t1 = metric.inner(&e(k), &sc.basis_bracket(i, j));
                    let t2 = metric.inner(&e(j), &sc.basis_bracket(k, i));
                    let t3 = metric.inner(&e(i), &sc.basis_bracket(j, k));
                    &half * &(t1 + t2 - t3)
                })
                .collect();
            gamma.extend(metric.raise(&lowered));
        }
    }
    Ok(ConnectionTable { dim: d, gamma })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub labels: Vec<String>,
    dim: usize,
    /// `R(bᵢ,bⱼ)bₖ = Σₗ R[i][j][k][l] bₗ`.
    riemann: Vec<QSqrt2>,
    /// `(R(bᵢ,bⱼ)bⱼ, bᵢ)`.
    k_raw: Vec<QSqrt2>,
    /// `k_raw / ((bᵢ,bᵢ)(bⱼ,bⱼ) − (bᵢ,bⱼ)²)` where the denominator is nonzero.
    k_normalized: Vec<Option<QSqrt2>>,
}

impl CurvatureReport {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn riemann(&self, i: usize, j: usize, k: usize, l: usize) -> &QSqrt2 {
        let d = self.dim;
        &self.riemann[((i * d + j) * d + k) * d + l]
    }

    /// `R(bᵢ,bⱼ)bₖ` as a coefficient vector.
    pub fn riemann_vector(&self, i: usize, j: usize, k: usize) -> Vec<QSqrt2> {
        (0..self.dim)
            .map(|l| self.riemann(i, j, k, l).clone())
            .collect()
    }

    pub fn k_raw(&self, i: usize, j: usize) -> &QSqrt2 {
        &self.k_raw[i * self.dim + j]
    }

    pub fn k_normalized(&self, i: usize, j: usize) -> Option<&QSqrt2> {
        self.k_normalized[i * self.dim + j].as_ref()
    }

    /// Unordered pairs `i < j`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.dim)
            .flat_map(|i| (i + 1..self.dim).map(move |j| (i, j)))
            .collect()
    }

    /// `R(x,y)z + R(y,z)x + R(z,x)y = 0` on every basis triple.
    pub fn satisfies_first_bianchi(&self) -> bool {
        let d = self.dim;
        (0..d).all(|x| {
            (0..d).all(|y| {
                (0..d).all(|z| {
                    (0..d).all(|l| {
                        (self.riemann(x, y, z, l)
                            + self.riemann(y, z, x, l)
                            + self.riemann(z, x, y, l))
                        .is_zero()
                    })
                })
            })
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| {
                (0..d).all(|k| {
                    (0..d).all(|l| (self.riemann(i, j, k, l) + self.riemann(j, i, k, l)).is_zero())
                })
            })
        })
    }

    pub fn k_raw_symmetric(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| (0..d).all(|j| self.k_raw(i, j) == self.k_raw(j, i)))
    }
}

pub fn curvature(preset: &LieAlgebraPreset) -> Result<CurvatureReport> {
    let metric = PseudoMetric::new(preset.gram.clone())?;
    let conn = koszul_connection_with(&preset.constants, &metric)?;
    curvature_with(&preset.constants, &metric, &conn, preset.labels.clone())
}

pub fn curvature_with(
    sc: &StructureConstants,
    metric: &PseudoMetric,
    conn: &ConnectionTable,
    labels: Vec<String>,
) -> Result<CurvatureReport> {
    let d = sc.dim();
    let e = |i: usize| crate::lie::unit(d, i);
    let mut riemann = Vec::with_capacity(d.pow(4));
    for i in 0..d {
        for j in 0..d {
            let br = sc.basis_bracket(i, j);
            for k in 0..d {
                let a = conn.nabla(&e(i), &conn.basis_derivative(j, k));
                let b = conn.nabla(&e(j), &conn.basis_derivative(i, k));
                let c = conn.nabla(&br, &e(k));
                riemann.extend((0..d).map(|l| &(&a[l] - &b[l]) - &c[l]));
            }
        }
    }
    let mut k_raw = Vec::with_capacity(d * d);
    let mut k_normalized = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let rv: Vec<QSqrt2> = (0..d)
                .map(|l| riemann[((i * d + j) * d + j) * d + l].clone())
                .collect();
            let k = metric.inner(&rv, &e(i));
            let denom = &(metric.inner(&e(i), &e(i)) * metric.inner(&e(j), &e(j)))
                - &(metric.inner(&e(i), &e(j)) * metric.inner(&e(i), &e(j)));
            k_normalized.push(k.checked_div(&denom).ok());
            k_raw.push(k);
        }
    }
    Ok(CurvatureReport {
        labels,
        dim: d,
        riemann,
        k_raw,
        k_normalized,
    })
}

/// Counts of positive and negative squares, by symmetric Gaussian elimination
/// over ℚ(√2) (Sylvester's law of inertia).
pub fn signature(gram: &ExactMatrix) -> Result<(usize, usize)> {
    if !gram.is_symmetric() {
        return Err(Error::InvalidArgument(
            "Gram matrix must be symmetric".into(),
        ));
    }
    let n = gram.rows();
    let mut m = gram.clone();
    let (mut plus, mut minus) = (0, 0);
    for k in 0..n {
        if let Some(p) = (k..n).find(|&i| !m[(i, i)].is_zero()) {
            swap_sym(&mut m, p, k);
        } else {
            let (i, j) = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && !m[(i, j)].is_zero())
                .ok_or(Error::DegenerateMetric)?;
            // bᵢ ← bᵢ + bⱼ makes the diagonal entry 2·m[i][j] ≠ 0
            for c in 0..n {
                let v = m[(j, c)].clone();
                m[(i, c)] += &v;
            }
            for r in 0..n {
                let v = m[(r, j)].clone();
                m[(r, i)] += &v;
            }
            swap_sym(&mut m, i, k);
        }
        let pivot = m[(k, k)].clone();
        if pivot.is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        let inv = pivot.checked_inv()?;
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = &m[(i, k)] * &inv;
            for j in k + 1..n {
                let v = &f * &m[(k, j)];
                m[(i, j)] -= &v;
            }
            m[(i, k)] = QSqrt2::zero();
            m[(k, i)] = QSqrt2::zero();
        }
    }
    Ok((plus, minus))
}

fn swap_sym(m: &mut ExactMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    m.swap_rows(a, b);
    for r in 0..m.rows() {
        let t = m[(r, a)].clone();
        m[(r, a)] = m[(r, b)].clone();
        m[(r, b)] = t;
    }
}

/// Signature of a floating symmetric matrix from its eigenvalues. Eigenvalues
/// within `tol·‖G‖` of zero count as degenerate.
pub fn signature_f64(gram: &Matrix, tol: f64) -> Result<(usize, usize)> {
    if !gram.is_square() {
        return Err(Error::NotSquare {
            rows: gram.rows(),
            cols: gram.cols(),
        });
    }
    let n = gram.rows();
    let dm = DMatrix::from_row_slice(n, n, gram.entries());
    let sym = (&dm + dm.transpose()) * 0.5;
    let eig = sym.symmetric_eigenvalues();
    let scale = gram.max_abs().max(f64::MIN_POSITIVE);
    if eig.iter().any(|l| l.abs() <= tol * scale) {
        return Err(Error::DegenerateMetric);
    }
    let plus = eig.iter().filter(|l| **l > 0.0).count();
    Ok((plus, n - plus))
}

/// Output of [`pseudo_gram_schmidt`]: columns of `basis` are the new vectors in
/// the old coordinates, listed in processing order.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalBasis {
    pub order: Vec<usize>,
    pub basis: ExactMatrix,
    pub gram: ExactMatrix,
}

/// Gram–Schmidt for an indefinite metric.
///
/// Each new vector is normalized to self-product ±1 and keeps a positive
/// coefficient on the basis vector that introduced it, so the transform is
/// upper triangular with positive diagonal in the processing order. Fails if
/// an intermediate vector is isotropic or its norm leaves ℚ(√2).
pub fn pseudo_gram_schmidt(gram: &ExactMatrix, order: &[usize]) -> Result<OrthonormalBasis> {
    let metric = PseudoMetric::new(gram.clone())?;
    let d = metric.dim();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..d).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(format!(
            "order {order:?} is not a permutation of 0..{d}"
        )));
    }
    let mut done: Vec<(Vec<QSqrt2>, QSqrt2)> = Vec::with_capacity(d);
    for (pos, &idx) in order.iter().enumerate() {
        let b = crate::lie::unit(d, idx);
        let mut v = b.clone();
        for (u, eps) in &done {
            let f = &metric.inner(&b, u) * eps;
            for (vk, uk) in v.iter_mut().zip(u) {
                *vk -= &f * uk;
            }
        }
        let n = metric.inner(&v, &v);
        if n.is_zero() {
            return Err(Error::IsotropicVector { position: pos });
        }
        let eps = if n.is_positive() {
            QSqrt2::one()
        } else {
            -QSqrt2::one()
        };
        let len = n.abs().sqrt()?;
        let inv = len.checked_inv()?;
        let u: Vec<QSqrt2> = v.iter().map(|x| x * &inv).collect();
        done.push((u, eps));
    }
    let basis = ExactMatrix::from_fn(d, d, |r, c| done[c].0[r].clone());
    let gram_out = &(&basis.transpose() * metric.gram()) * &basis;
    Ok(OrthonormalBasis {
        order: order.to_vec(),
        basis,
        gram: gram_out,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaledCurvature {
    pub factor: QSqrt2,
    pub connection_unchanged: bool,
    pub report: CurvatureReport,
}

/// Recomputes connection and curvature for the Gram matrix `c·G`.
pub fn scale_metric(preset: &LieAlgebraPreset, c: &QSqrt2) -> Result<ScaledCurvature> {
    if !c.is_positive() {
        return Err(Error::Domain(format!(
            "scale factor must be positive, got {c}"
        )));
    }
    let base = PseudoMetric::new(preset.gram.clone())?;
    let scaled = base.scaled(c)?;
    let conn0 = koszul_connection_with(&preset.constants, &base)?;
    let conn = koszul_connection_with(&preset.constants, &scaled)?;
    let report = curvature_with(&preset.constants, &scaled, &conn, preset.labels.clone())?;
    Ok(ScaledCurvature {
        factor: c.clone(),
        connection_unchanged: conn == conn0,
        report,
    })
}
