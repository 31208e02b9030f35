//! Concrete matrix groups and the explicit homomorphisms between them.
//!
//! Coordinates follow two conventions. The Gödel chart uses `(x₀, x₁, x₂)`
//! with the 4×4 form
//!
//! ```text
//! [[e^{−x₁}, 0, 0, x₂], [0, 1, 0, x₁], [0, 0, 1, x₀], [0, 0, 0, 1]]
//! ```
//!
//! while the sub-Riemannian chart swaps `x₁ ↔ x₂` and renames `x₀ → x₃`. The
//! swap is done by [`goedel_to_subriemannian`] and nowhere else.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::rotation;
use crate::scalar::{mat_exp, Matrix, EXPM_TOL};

/// Membership tolerance for [`GroupElement::new`].
pub const MEMBERSHIP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupTag {
    /// 5×5 affine form of the four-dimensional Gödel isometry group.
    G5,
    /// 4×4 form of the three-dimensional subgroup `G₃ = ℝ × A⁺(ℝ)`.
    G3x4,
    /// Upper-triangular 2×2 matrices with positive diagonal and unit determinant.
    Sol2,
    So2,
    /// 3×3 form of `A⁺(ℝ) × ℝ`.
    AffR3,
    Sl2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub tag: GroupTag,
    pub rows: Matrix,
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= MEMBERSHIP_TOL * (1.0 + b.abs())
}

/// Every entry outside `free` equals the identity's entry.
fn identity_pattern(m: &Matrix, free: &[(usize, usize)]) -> bool {
    (0..m.rows()).all(|i| {
        (0..m.cols())
            .all(|j| free.contains(&(i, j)) || near(m[(i, j)], if i == j { 1.0 } else { 0.0 }))
    })
}

impl GroupTag {
    pub fn contains(self, m: &Matrix) -> bool {
        let shape = |n: usize| m.rows() == n && m.cols() == n;
        match self {
            GroupTag::Sl2 => shape(2) && near(m.det().unwrap_or(0.0), 1.0),
            GroupTag::So2 => {
                shape(2)
                    && (&m.transpose() * m).dist(&Matrix::identity(2)) <= MEMBERSHIP_TOL
                    && near(m.det().unwrap_or(0.0), 1.0)
            }
            GroupTag::Sol2 => {
                shape(2)
                    && near(m[(1, 0)], 0.0)
                    && m[(0, 0)] > 0.0
                    && near(m[(0, 0)] * m[(1, 1)], 1.0)
            }
            GroupTag::AffR3 => {
                shape(3) && m[(0, 0)] > 0.0 && identity_pattern(m, &[(0, 0), (0, 2), (1, 2)])
            }
            GroupTag::G3x4 => {
                shape(4)
                    && identity_pattern(m, &[(0, 0), (0, 3), (1, 3), (2, 3)])
                    && near(m[(0, 0)], (-m[(1, 3)]).exp())
            }
            GroupTag::G5 => {
                shape(5)
                    && identity_pattern(m, &[(0, 0), (0, 4), (1, 4), (2, 4), (3, 4)])
                    && near(m[(0, 0)], (-m[(1, 4)]).exp())
            }
        }
    }
}

impl GroupElement {
    pub fn new(tag: GroupTag, rows: Matrix) -> Result<Self> {
        if !tag.contains(&rows) {
            return Err(Error::Shape(format!("matrix is not an element of {tag:?}")));
        }
        Ok(GroupElement { tag, rows })
    }
}

/// Element of `G₃` in Gödel coordinates `(x₀, x₁, x₂)`.
pub fn g3_element(x0: f64, x1: f64, x2: f64) -> Matrix {
    Matrix::from_rows(vec![
        vec![(-x1).exp(), 0.0, 0.0, x2],
        vec![0.0, 1.0, 0.0, x1],
        vec![0.0, 0.0, 1.0, x0],
        vec![0.0, 0.0, 0.0, 1.0],
    ])
    .expect("4x4")
}

/// Element of the four-dimensional isometry group acting on the vector
/// `(x₂, x₁, x₀, x₃, 1)`; `(a, b, c, d)` are the translation parameters of
/// `x₀`, `x₁`, `x₂`, `x₃`.
pub fn g5_element(a: f64, b: f64, c: f64, d: f64) -> Matrix {
    Matrix::from_fn(5, 5, |i, j| match (i, j) {
        (0, 0) => (-b).exp(),
        (0, 4) => c,
        (1, 4) => b,
        (2, 4) => a,
        (3, 4) => d,
        _ if i == j => 1.0,
        _ => 0.0,
    })
}

/// Chart point of the sub-Riemannian convention.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SrCoords {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Renaming `x₁ ↔ x₂`, `x₀ → x₃` from Gödel coordinates to the sub-Riemannian chart.
pub fn goedel_to_subriemannian(x0: f64, x1: f64, x2: f64) -> SrCoords {
    SrCoords {
        x1: x2,
        x2: x1,
        x3: x0,
    }
}

/// The 4×4 matrix on the left of the reduction, in sub-Riemannian coordinates.
pub fn sr_element4(c: SrCoords) -> Matrix {
    Matrix::from_rows(vec![
        vec![(-c.x2).exp(), 0.0, 0.0, c.x1],
        vec![0.0, 1.0, 0.0, c.x2],
        vec![0.0, 0.0, 1.0, c.x3],
        vec![0.0, 0.0, 0.0, 1.0],
    ])
    .expect("4x4")
}

/// Element of `A⁺(ℝ) × ℝ` in its 3×3 form.
pub fn affr3_element(c: SrCoords) -> Matrix {
    Matrix::from_rows(vec![
        vec![(-c.x2).exp(), 0.0, c.x1],
        vec![0.0, 1.0, c.x3],
        vec![0.0, 0.0, 1.0],
    ])
    .expect("3x3")
}

/// Reads the chart coordinates back from a 3×3 `A⁺(ℝ) × ℝ` element.
pub fn affr3_coords(m: &Matrix) -> Result<SrCoords> {
    if !GroupTag::AffR3.contains(m) {
        return Err(Error::Shape("not an A+(R) x R element".into()));
    }
    Ok(SrCoords {
        x1: m[(0, 2)],
        x2: -m[(0, 0)].ln(),
        x3: m[(1, 2)],
    })
}

/// Drops the idle third row/column of the 4×4 form.
pub fn reduce_4to3(g: &Matrix) -> Result<GroupElement> {
    if !GroupTag::G3x4.contains(g) {
        return Err(Error::Shape(
            "expected [[e^-x2,0,0,x1],[0,1,0,x2],[0,0,1,x3],[0,0,0,1]]".into(),
        ));
    }
    let rows = Matrix::from_rows(vec![
        vec![g[(0, 0)], 0.0, g[(0, 3)]],
        vec![0.0, 1.0, g[(2, 3)]],
        vec![0.0, 0.0, 1.0],
    ])?;
    GroupElement::new(GroupTag::AffR3, rows)
}

/// Which factor of `Sol(2)` comes first in the parametrization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolOrder {
    /// `diag(e^{−s/2}, e^{s/2}) · [[1, r], [0, 1]]`
    AN,
    /// `[[1, r], [0, 1]] · diag(e^{−s/2}, e^{s/2})`
    NA,
}

pub fn sol2_diag(s: f64) -> Matrix {
    Matrix::diag(&[(-s / 2.0).exp(), (s / 2.0).exp()])
}

pub fn sol2_unipotent(r: f64) -> Matrix {
    Matrix::from_rows(vec![vec![1.0, r], vec![0.0, 1.0]]).expect("2x2")
}

pub fn sol2_element(s: f64, r: f64, order: SolOrder) -> Matrix {
    match order {
        SolOrder::AN => &sol2_diag(s) * &sol2_unipotent(r),
        SolOrder::NA => &sol2_unipotent(r) * &sol2_diag(s),
    }
}

/// Inverse of [`sol2_element`].
pub fn sol2_coords(m: &Matrix, order: SolOrder) -> Result<(f64, f64)> {
    if !GroupTag::Sol2.contains(m) {
        return Err(Error::Shape("not a Sol(2) element".into()));
    }
    let alpha = m[(0, 0)];
    let s = -2.0 * alpha.ln();
    let r = match order {
        SolOrder::AN => m[(0, 1)] / alpha,
        SolOrder::NA => m[(0, 1)] * alpha,
    };
    Ok((s, r))
}

fn g3_generator(index: usize) -> Matrix {
    // e₀ = E₂₃, e₁ = −E₀₀ + E₁₃, e₂ = E₀₃
    let mut m = Matrix::zeros(4, 4);
    match index {
        0 => m[(2, 3)] = 1.0,
        1 => {
            m[(0, 0)] = -1.0;
            m[(1, 3)] = 1.0;
        }
        _ => m[(0, 3)] = 1.0,
    }
    m
}

fn exp_g3(index: usize, t: f64) -> Matrix {
    mat_exp(&g3_generator(index).scale(&t), EXPM_TOL).expect("square generator")
}

/// Image under ψ of `a(s)·n(r)` (order AN) or `n(r)·a(s)` (order NA).
///
/// ψ is fixed on one-parameter subgroups by `−f₁/2 ↦ e₁`, `f₂ ↦ e₂`, i.e.
/// `ψ(a(s)) = exp(s·e₁)`, `ψ(n(r)) = exp(r·e₂)`, and extended by products.
pub fn psi_iso(s: f64, r: f64, order: SolOrder) -> GroupElement {
    let a = exp_g3(1, s);
    let n = exp_g3(2, r);
    let rows = match order {
        SolOrder::AN => &a * &n,
        SolOrder::NA => &n * &a,
    };
    GroupElement {
        tag: GroupTag::G3x4,
        rows,
    }
}

/// ψ applied to a `Sol(2)` matrix, reading its coordinates in the given order.
pub fn psi_on_sol2(m: &Matrix, order: SolOrder) -> Result<Matrix> {
    let (s, r) = sol2_coords(m, order)?;
    Ok(psi_iso(s, r, order).rows)
}

/// Extension of ψ to `(ℝ,+) × Sol(2)` with `t ↦ exp(t·e₀)`.
pub fn psi_extended(t: f64, sol: &Matrix, order: SolOrder) -> Result<Matrix> {
    Ok(&exp_g3(0, t) * &psi_on_sol2(sol, order)?)
}

/// The covering `ℝ → SO(2)`, `t ↦ exp(t·f₀)`.
pub fn so2_covering(t: f64) -> Matrix {
    rotation(t)
}

/// Covering `A⁺(ℝ) × ℝ → Sol(2) × SO(2)` in the chart `(x₁, x₂, x₃)`.
///
/// The `Sol(2)` factor is `n(x₁)·a(x₂) = [[e^{−x₂/2}, x₁·e^{x₂/2}], [0, e^{x₂/2}]]`,
/// the inverse of ψ's NA form; the circle factor is the rotation by `x₃`.
pub fn covering_f(x1: f64, x2: f64, x3: f64) -> (GroupElement, GroupElement) {
    (
        GroupElement {
            tag: GroupTag::Sol2,
            rows: sol2_element(x2, x1, SolOrder::NA),
        },
        GroupElement {
            tag: GroupTag::So2,
            rows: so2_covering(x3),
        },
    )
}

/// The covering with `x₁` placed verbatim in the upper-right corner. Kept for
/// comparison: it agrees with [`covering_f`] only when `x₂ = 0` and is not a
/// homomorphism.
pub fn covering_f_verbatim(x1: f64, x2: f64, x3: f64) -> (Matrix, Matrix) {
    let sol = Matrix::from_rows(vec![
        vec![(-x2 / 2.0).exp(), x1],
        vec![0.0, (x2 / 2.0).exp()],
    ])
    .expect("2x2");
    (sol, so2_covering(x3))
}

/// Places a pair of 2×2 matrices on the diagonal of a 4×4 matrix, so that a
/// product group `H × K` can be checked with plain matrix products.
pub fn block_pair(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m[(i, j)] = a[(i, j)];
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m[(a.rows() + i, a.cols() + j)] = b[(i, j)];
        }
    }
    m
}

/// Max over `n` sampled pairs of `‖map(g₁g₂) − map(g₁)·map(g₂)‖` (max-norm).
pub fn hom_residual<R, M, S>(map: M, mut sampler: S, n: usize, rng: &mut R) -> Result<f64>
where
    R: Rng + ?Sized,
    M: Fn(&Matrix) -> Result<Matrix>,
    S: FnMut(&mut R) -> Matrix,
{
    let mut worst = 0.0f64;
    for _ in 0..n {
        let g1 = sampler(rng);
        let g2 = sampler(rng);
        let lhs = map(&(&g1 * &g2))?;
        let rhs = map(&g1)?.try_mul(&map(&g2)?)?;
        worst = worst.max(lhs.dist(&rhs));
    }
    Ok(worst)
}

pub fn sample_sol2<R: Rng + ?Sized>(rng: &mut R) -> Matrix {
    sol2_element(
        rng.random_range(-2.0..2.0),
        rng.random_range(-2.0..2.0),
        SolOrder::AN,
    )
}

pub fn sample_sr_coords<R: Rng + ?Sized>(rng: &mut R) -> SrCoords {
    SrCoords {
        x1: rng.random_range(-2.0..2.0),
        x2: rng.random_range(-2.0..2.0),
        x3: rng.random_range(-TAU..TAU),
    }
}

pub fn sample_affr3<R: Rng + ?Sized>(rng: &mut R) -> Matrix {
    affr3_element(sample_sr_coords(rng))
}

pub fn sample_g3<R: Rng + ?Sized>(rng: &mut R) -> Matrix {
    g3_element(
        rng.random_range(-2.0..2.0),
        rng.random_range(-2.0..2.0),
        rng.random_range(-2.0..2.0),
    )
}

/// `(ℝ,+) × Sol(2)` sampled as `diag(rot-line coordinate, Sol(2))`: the line
/// factor is carried as the unipotent `[[1, t], [0, 1]]` so products add `t`.
pub fn sample_line_times_sol2<R: Rng + ?Sized>(rng: &mut R) -> Matrix {
    block_pair(
        &sol2_unipotent(rng.random_range(-2.0..2.0)),
        &sample_sol2(rng),
    )
}

/// ψ extended to `(ℝ,+) × Sol(2)` in the block form of [`sample_line_times_sol2`].
pub fn psi_extended_block(m: &Matrix, order: SolOrder) -> Result<Matrix> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::Shape("expected a 4x4 block pair".into()));
    }
    let t = m[(0, 1)];
    let sol = m.submatrix(&[2, 3]);
    psi_extended(t, &sol, order)
}

/// `F` as a map on 3×3 `A⁺(ℝ) × ℝ` matrices into block pairs.
pub fn covering_f_block(m: &Matrix) -> Result<Matrix> {
    let c = affr3_coords(m)?;
    let (sol, rot) = covering_f(c.x1, c.x2, c.x3);
    Ok(block_pair(&sol.rows, &rot.rows))
}

pub fn covering_f_verbatim_block(m: &Matrix) -> Result<Matrix> {
    let c = affr3_coords(m)?;
    let (sol, rot) = covering_f_verbatim(c.x1, c.x2, c.x3);
    Ok(block_pair(&sol, &rot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_sl2, seeded};

    #[test]
    fn psi_identity() {
        for order in [SolOrder::AN, SolOrder::NA] {
            assert!(psi_iso(0.0, 0.0, order).rows.dist(&Matrix::identity(4)) < 1e-15);
        }
    }

    #[test]
    fn psi_printed_an_entries() {
        let m = psi_iso(1.0, 1.0, SolOrder::AN).rows;
        let e = (-1.0f64).exp();
        assert!((m[(0, 0)] - e).abs() < 1e-14);
        assert!((m[(0, 3)] - e).abs() < 1e-14);
        assert!((m[(1, 3)] - 1.0).abs() < 1e-14);
        assert!(GroupTag::G3x4.contains(&m));
    }

    #[test]
    fn orderings_agree_only_on_axes() {
        let mut rng = seeded(1);
        for _ in 0..50 {
            let s: f64 = rng.random_range(-2.0..2.0);
            let r: f64 = rng.random_range(-2.0..2.0);
            let d = |s, r| {
                psi_iso(s, r, SolOrder::AN)
                    .rows
                    .dist(&psi_iso(s, r, SolOrder::NA).rows)
            };
            assert!(d(s, 0.0) < 1e-14 && d(0.0, r) < 1e-14);
            if s.abs() > 0.05 && r.abs() > 0.05 {
                assert!(d(s, r) > 1e-3);
            }
        }
    }

    #[test]
    fn covering_f_kernel_and_identity() {
        let (a, b) = covering_f(0.0, 0.0, 0.0);
        assert!(a.rows.dist(&Matrix::identity(2)) < 1e-15);
        assert!(b.rows.dist(&Matrix::identity(2)) < 1e-15);
        let (a, b) = covering_f(0.0, 0.0, TAU);
        assert!(a.rows.dist(&Matrix::identity(2)) < 1e-12);
        assert!(b.rows.dist(&Matrix::identity(2)) < 1e-12);
    }

    #[test]
    fn covering_f_injective_on_the_slice() {
        let mut rng = seeded(2);
        let pts: Vec<(f64, f64)> = (0..40)
            .map(|_| (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
            .collect();
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[..i] {
                let d = covering_f(p.0, p.1, 0.0)
                    .0
                    .rows
                    .dist(&covering_f(q.0, q.1, 0.0).0.rows);
                assert!(d > 0.0);
            }
        }
    }

    #[test]
    fn verbatim_covering_is_not_multiplicative() {
        let mut rng = seeded(3);
        let res = hom_residual(covering_f_verbatim_block, sample_affr3, 100, &mut rng).unwrap();
        assert!(res > 0.1);
        let (a, _) = covering_f_verbatim(1.3, 0.0, 0.2);
        assert!(a.dist(&covering_f(1.3, 0.0, 0.2).0.rows) < 1e-15);
    }

    #[test]
    fn reduction_example_and_shape_errors() {
        let g = sr_element4(SrCoords {
            x1: 1.0,
            x2: 1.0,
            x3: 1.0,
        });
        let red = reduce_4to3(&g).unwrap();
        let e = (-1.0f64).exp();
        let expected = Matrix::from_rows(vec![
            vec![e, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert!(red.rows.dist(&expected) < 1e-15);
        assert!(
            reduce_4to3(&Matrix::identity(4))
                .unwrap()
                .rows
                .dist(&Matrix::identity(3))
                < 1e-15
        );
        let mut bad = g.clone();
        bad[(1, 0)] = 0.5;
        assert!(matches!(reduce_4to3(&bad), Err(Error::Shape(_))));
        assert!(reduce_4to3(&Matrix::identity(3)).is_err());
    }

    #[test]
    fn renaming_matches_the_goedel_form() {
        let (x0, x1, x2) = (0.3, -0.7, 1.9);
        let sr = goedel_to_subriemannian(x0, x1, x2);
        assert_eq!(
            sr,
            SrCoords {
                x1: 1.9,
                x2: -0.7,
                x3: 0.3
            }
        );
        assert_eq!(sr_element4(sr), g3_element(x0, x1, x2));
    }

    #[test]
    fn identity_and_transpose_controls() {
        let mut rng = seeded(4);
        let id = hom_residual(|m| Ok(m.clone()), sample_sl2, 100, &mut rng).unwrap();
        assert_eq!(id, 0.0);
        let tr = hom_residual(|m| Ok(m.transpose()), sample_sl2, 100, &mut rng).unwrap();
        assert!(tr > 0.1);
    }

    #[test]
    fn membership() {
        assert!(GroupElement::new(GroupTag::Sl2, Matrix::diag(&[2.0, 0.5])).is_ok());
        assert!(GroupElement::new(GroupTag::Sl2, Matrix::diag(&[2.0, 2.0])).is_err());
        assert!(GroupElement::new(GroupTag::So2, rotation(1.0)).is_ok());
        assert!(GroupElement::new(GroupTag::So2, Matrix::diag(&[1.0, -1.0])).is_err());
        assert!(GroupElement::new(GroupTag::G5, g5_element(1.0, 2.0, 3.0, 4.0)).is_ok());
        assert!(GroupElement::new(GroupTag::Sol2, sample_sol2(&mut seeded(0))).is_ok());
        let json =
            serde_json::to_string(&GroupElement::new(GroupTag::So2, Matrix::identity(2)).unwrap())
                .unwrap();
        assert_eq!(json, r#"{"tag":"So2","rows":[[1.0,0.0],[0.0,1.0]]}"#);
    }
}
