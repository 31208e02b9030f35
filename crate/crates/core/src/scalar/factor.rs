//! QR and LQ factorizations with the positive-diagonal normalization.
//!
//! Forcing the triangular factor to have a strictly positive diagonal makes
//! both factorizations unique for invertible input, which is what the
//! Iwasawa split needs (its abelian factor is a positive diagonal).

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Relative size below which a diagonal entry of `R` counts as zero.
const RANK_TOL: f64 = 1e-12;

/// `M = Q·R` with `Q` orthogonal and `R` upper triangular, `diag(R) > 0`.
pub fn qr_positive(m: &Matrix) -> Result<(Matrix, Matrix)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let scale = m.max_abs();
    if scale == 0.0 {
        return Err(Error::Singular);
    }
    let mut r = m.clone();
    let mut q = Matrix::identity(n);

    // Householder reflections H = I − 2vvᵀ/(vᵀv), accumulated as Q ← Q·H.
    for k in 0..n.saturating_sub(1) {
        let norm_x = (k..n).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let alpha = if r[(k, k)] > 0.0 { -norm_x } else { norm_x };
        let mut v: Vec<f64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        if vtv == 0.0 {
            continue;
        }
        for j in 0..n {
            let dot: f64 = (k..n).map(|i| v[i - k] * r[(i, j)]).sum();
            let f = 2.0 * dot / vtv;
            for i in k..n {
                r[(i, j)] -= f * v[i - k];
            }
        }
        for i in 0..n {
            let dot: f64 = (k..n).map(|j| q[(i, j)] * v[j - k]).sum();
            let f = 2.0 * dot / vtv;
            for j in k..n {
                q[(i, j)] -= f * v[j - k];
            }
        }
        for i in k + 1..n {
            r[(i, k)] = 0.0;
        }
    }

    for i in 0..n {
        if r[(i, i)].abs() <= RANK_TOL * scale {
            return Err(Error::Singular);
        }
        if r[(i, i)] < 0.0 {
            for j in 0..n {
                r[(i, j)] = -r[(i, j)];
                q[(j, i)] = -q[(j, i)];
            }
        }
    }
    Ok((q, r))
}

/// `M = L·Q` with `L` lower triangular, `diag(L) > 0`, and `Q` orthogonal.
///
/// Computed as the transpose of the QR factorization of `Mᵀ`. When
/// `det M > 0` the orthogonal factor is a rotation.
pub fn lq_positive(m: &Matrix) -> Result<(Matrix, Matrix)> {
    let (q, r) = qr_positive(&m.transpose())?;
    Ok((r.transpose(), q.transpose()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::matrix::parse_matrix_literal;
    use rand::{Rng, SeedableRng};

    /// Classical Gram–Schmidt on the columns: an independent route to (Q, R).
    fn gram_schmidt_qr(m: &Matrix) -> (Matrix, Matrix) {
        let n = m.rows();
        let mut q = Matrix::zeros(n, n);
        let mut r = Matrix::zeros(n, n);
        for j in 0..n {
            let mut v = m.col(j);
            for i in 0..j {
                let d: f64 = (0..n).map(|k| q[(k, i)] * m[(k, j)]).sum();
                r[(i, j)] = d;
                for k in 0..n {
                    v[k] -= d * q[(k, i)];
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            r[(j, j)] = norm;
            for k in 0..n {
                q[(k, j)] = v[k] / norm;
            }
        }
        (q, r)
    }

    fn is_orthogonal(q: &Matrix, tol: f64) -> bool {
        (&q.transpose() * q).dist(&Matrix::identity(q.rows())) < tol
    }

    fn rot(t: f64) -> Matrix {
        Matrix::from_rows(vec![vec![t.cos(), t.sin()], vec![-t.sin(), t.cos()]]).unwrap()
    }

    #[test]
    fn identity_factors_trivially() {
        let (q, r) = qr_positive(&Matrix::identity(3)).unwrap();
        assert!(q.dist(&Matrix::identity(3)) < 1e-15);
        assert!(r.dist(&Matrix::identity(3)) < 1e-15);
        let (l, q) = lq_positive(&Matrix::identity(2)).unwrap();
        assert!(l.dist(&Matrix::identity(2)) < 1e-15);
        assert!(q.dist(&Matrix::identity(2)) < 1e-15);
    }

    #[test]
    fn rotation_input_is_its_own_q() {
        let k = rot(0.7);
        let (q, r) = qr_positive(&k).unwrap();
        assert!(q.dist(&k) < 1e-15);
        assert!(r.dist(&Matrix::identity(2)) < 1e-15);
    }

    #[test]
    fn lower_unipotent_is_its_own_l() {
        let n = parse_matrix_literal("1,0;2.5,1").unwrap();
        let (l, q) = lq_positive(&n).unwrap();
        assert!(l.dist(&n) < 1e-15);
        assert!(q.dist(&Matrix::identity(2)) < 1e-15);
    }

    #[test]
    fn matches_gram_schmidt_on_random_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [2, 3, 4] {
            for _ in 0..50 {
                let m = Matrix::from_fn(n, n, |_, _| rng.random_range(-2.0..2.0));
                let (q, r) = qr_positive(&m).unwrap();
                let (q0, r0) = gram_schmidt_qr(&m);
                assert!((&q * &r).dist(&m) < 1e-12);
                assert!(is_orthogonal(&q, 1e-13));
                for i in 0..n {
                    assert!(r[(i, i)] > 0.0);
                    for j in 0..i {
                        assert_eq!(r[(i, j)], 0.0);
                    }
                }
                let cond_guard =
                    r0.max_abs() / (0..n).map(|i| r0[(i, i)]).fold(f64::INFINITY, f64::min);
                if cond_guard < 1e3 {
                    assert!(q.dist(&q0) < 1e-9 && r.dist(&r0) < 1e-9);
                }
            }
        }
    }

    #[test]
    fn lq_of_unimodular_gives_rotation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (a, b, c) = (
                rng.random_range(0.3..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            let m = parse_matrix_literal(&format!("{a},{b};{c},{}", (1.0 + b * c) / a)).unwrap();
            let (l, q) = lq_positive(&m).unwrap();
            assert!((&l * &q).dist(&m) < 1e-12);
            assert!(is_orthogonal(&q, 1e-13));
            assert!((q.det().unwrap() - 1.0).abs() < 1e-13);
            assert_eq!(l[(0, 1)], 0.0);
            assert!(l[(0, 0)] > 0.0 && l[(1, 1)] > 0.0);
        }
    }

    #[test]
    fn refactoring_is_idempotent() {
        let m = parse_matrix_literal("2,1,0;-1,3,1;0.5,0,1").unwrap();
        let (q, r) = qr_positive(&m).unwrap();
        let (q2, r2) = qr_positive(&(&q * &r)).unwrap();
        assert!(q2.dist(&q) < 1e-14 && r2.dist(&r) < 1e-14);
        let (q3, r3) = qr_positive(&q).unwrap();
        assert!(q3.dist(&q) < 1e-14 && r3.dist(&Matrix::identity(3)) < 1e-14);
        let (q4, r4) = qr_positive(&r).unwrap();
        assert!(q4.dist(&Matrix::identity(3)) < 1e-14 && r4.dist(&r) < 1e-14);
    }

    #[test]
    fn singular_input_is_rejected() {
        let m = parse_matrix_literal("1,2;2,4").unwrap();
        assert_eq!(qr_positive(&m), Err(Error::Singular));
        assert_eq!(lq_positive(&m), Err(Error::Singular));
        assert_eq!(qr_positive(&Matrix::zeros(2, 2)), Err(Error::Singular));
    }
}
