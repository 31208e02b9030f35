use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Default accuracy target for [`mat_exp`].
pub const EXPM_TOL: f64 = 1e-13;

/// Matrix exponential by scaling and squaring around a truncated Taylor series.
///
/// The scaled matrix has ∞-norm (max row sum) at most 1/2, and the series is summed until
/// the next term falls below `tol · 2^-s` (or stops contributing in f64).
pub fn mat_exp(m: &Matrix, tol: f64) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = m.rows();
    let norm = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m.scale(&(0.5f64).powi(squarings as i32));
    let term_tol = tol * (0.5f64).powi(squarings as i32);

    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=64 {
        term = (&term * &scaled).scale(&(1.0 / k as f64));
        sum = &sum + &term;
        let t = term.max_abs();
        if t <= term_tol * 1e-3 || t <= f64::EPSILON * 1e-2 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::matrix::parse_matrix_literal;
    use std::f64::consts::{E, FRAC_PI_2};

    /// Plain Taylor partial sums without scaling; valid oracle for small norms.
    fn taylor_oracle(m: &Matrix, terms: usize) -> Matrix {
        let mut sum = Matrix::identity(m.rows());
        let mut term = Matrix::identity(m.rows());
        for k in 1..terms {
            term = (&term * m).scale(&(1.0 / k as f64));
            sum = &sum + &term;
        }
        sum
    }

    #[test]
    fn exp_of_zero() {
        let e = mat_exp(&Matrix::zeros(3, 3), EXPM_TOL).unwrap();
        assert_eq!(e, Matrix::identity(3));
    }

    #[test]
    fn exp_of_diagonal() {
        let e = mat_exp(&Matrix::diag(&[1.0, -1.0]), EXPM_TOL).unwrap();
        assert!(e.dist(&Matrix::diag(&[E, 1.0 / E])) < 1e-13);
    }

    #[test]
    fn quarter_turn_of_rotation_generator() {
        let f0 = parse_matrix_literal("0,1;-1,0").unwrap();
        let e = mat_exp(&f0.scale(&FRAC_PI_2), EXPM_TOL).unwrap();
        assert!(e.dist(&f0) < 1e-13);
    }

    #[test]
    fn matches_unscaled_series() {
        let m = parse_matrix_literal("0.3,-0.2,0.1;0.05,-0.4,0.2;0.1,0.1,0.25").unwrap();
        let e = mat_exp(&m, EXPM_TOL).unwrap();
        assert!(e.dist(&taylor_oracle(&m, 40)) < 1e-13);
        let big = m.scale(&6.0);
        let e = mat_exp(&big, EXPM_TOL).unwrap();
        assert!(e.dist(&taylor_oracle(&big, 120)) / e.max_abs() < 1e-12);
    }

    #[test]
    fn nilpotent_is_exact() {
        let n = parse_matrix_literal("0,3;0,0").unwrap();
        let e = mat_exp(&n, EXPM_TOL).unwrap();
        assert!(e.dist(&parse_matrix_literal("1,3;0,1").unwrap()) < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            mat_exp(&Matrix::zeros(2, 3), 1e-13),
            Err(Error::NotSquare { .. })
        ));
        assert!(mat_exp(&Matrix::zeros(2, 2), 0.0).is_err());
    }

    #[test]
    fn one_parameter_group_law() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut m = Matrix::from_fn(2, 2, |_, _| rng.random_range(-1.0..1.0));
            let scale = rng.random_range(0.0..2.0) / m.max_abs();
            m = m.scale(&scale);
            let (s, t) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let lhs = mat_exp(&m.scale(&(s + t)), EXPM_TOL).unwrap();
            let rhs = &mat_exp(&m.scale(&s), EXPM_TOL).unwrap()
                * &mat_exp(&m.scale(&t), EXPM_TOL).unwrap();
            assert!(lhs.dist(&rhs) < 1e-10);
        }
    }
}
