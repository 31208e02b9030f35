//! The Gödel metric in global coordinates `(x₀, x₁, x₂, x₃)` on ℝ⁴:
//!
//! ```text
//! ds² = a² [ (dx₀ + e^{x₁} dx₂)² − dx₁² − ½ e^{2x₁} dx₂² − dx₃² ]
//! ```
//!
//! Coordinates are always in that order here; the permuted 5×5 convention of
//! the isometry group lives in [`crate::group`].

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::signature_f64;
use crate::scalar::{ExactMatrix, Matrix};

pub type ChartPoint = [f64; 4];

/// The metric field for a fixed scale `a > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MetricField {
    a: f64,
}

impl MetricField {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("scale a must be positive, got {a}")));
        }
        Ok(MetricField { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn at(&self, x: &ChartPoint) -> Matrix {
        components(x[1], self.a * self.a)
    }

    /// `∂g/∂x₁`; every other coordinate derivative vanishes.
    pub fn d_x1(&self, x: &ChartPoint) -> Matrix {
        let a2 = self.a * self.a;
        let e = x[1].exp();
        let mut d = Matrix::zeros(4, 4);
        d[(0, 2)] = a2 * e;
        d[(2, 0)] = a2 * e;
        d[(2, 2)] = a2 * e * e;
        d
    }

    /// `Γᵏᵢⱼ` indexed `[k][i][j]`. Independent of `a`; with `E = e^{x₁}` the
    /// nonzero symbols are `Γ⁰₀₁ = 1`, `Γ⁰₁₂ = Γ¹₀₂ = E/2`, `Γ¹₂₂ = E²/2`,
    /// `Γ²₀₁ = −1/E` and their lower-index mirrors.
    pub fn christoffel(&self, x: &ChartPoint) -> Christoffel {
        let e = x[1].exp();
        let mut gamma = [[[0.0; 4]; 4]; 4];
        let mut set = |k: usize, i: usize, j: usize, v: f64| {
            gamma[k][i][j] = v;
            gamma[k][j][i] = v;
        };
        set(0, 0, 1, 1.0);
        set(0, 1, 2, e / 2.0);
        set(1, 0, 2, e / 2.0);
        set(1, 2, 2, e * e / 2.0);
        set(2, 0, 1, -1.0 / e);
        Christoffel { gamma }
    }

    /// `Γ` from `½ gᵏˡ (∂ᵢ g_{lj} + ∂ⱼ g_{li} − ∂ₗ g_{ij})` with the analytic
    /// derivatives and a numerical inverse.
    pub fn christoffel_from_derivatives(&self, x: &ChartPoint) -> Result<Christoffel> {
        let derivs = [
            Matrix::zeros(4, 4),
            self.d_x1(x),
            Matrix::zeros(4, 4),
            Matrix::zeros(4, 4),
        ];
        christoffel_from(&self.at(x), &derivs)
    }
}

fn components(x1: f64, a2: f64) -> Matrix {
    let e = x1.exp();
    let mut g = Matrix::zeros(4, 4);
    g[(0, 0)] = a2;
    g[(0, 2)] = a2 * e;
    g[(2, 0)] = a2 * e;
    g[(2, 2)] = a2 * e * e / 2.0;
    g[(1, 1)] = -a2;
    g[(3, 3)] = -a2;
    g
}

pub fn metric_at(x: &ChartPoint, a: f64) -> Result<Matrix> {
    Ok(MetricField::new(a)?.at(x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Christoffel {
    /// `gamma[k][i][j]` = `Γᵏᵢⱼ`.
    pub gamma: [[[f64; 4]; 4]; 4],
}

impl Christoffel {
    /// `Γ(v, v)ᵏ = Γᵏᵢⱼ vⁱ vʲ`.
    pub fn contract(&self, v: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (k, o) in out.iter_mut().enumerate() {
            for i in 0..4 {
                for j in 0..4 {
                    *o += self.gamma[k][i][j] * v[i] * v[j];
                }
            }
        }
        out
    }

    pub fn max_dist(&self, other: &Christoffel) -> f64 {
        let a = self.gamma.iter().flatten().flatten();
        let b = other.gamma.iter().flatten().flatten();
        a.zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|k| (0..4).all(|i| (0..4).all(|j| self.gamma[k][i][j] == self.gamma[k][j][i])))
    }
}

/// `Γᵏᵢⱼ = ½ gᵏˡ (∂ᵢ g_{lj} + ∂ⱼ g_{li} − ∂ₗ g_{ij})` from the metric and its
/// four partial derivatives.
fn christoffel_from(g: &Matrix, derivs: &[Matrix; 4]) -> Result<Christoffel> {
    let ginv = g.inverse()?;
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for (k, gk) in gamma.iter_mut().enumerate() {
        for i in 0..4 {
            for j in 0..4 {
                gk[i][j] = 0.5
                    * (0..4)
                        .map(|l| {
                            ginv[(k, l)]
                                * (derivs[i][(l, j)] + derivs[j][(l, i)] - derivs[l][(i, j)])
                        })
                        .sum::<f64>();
            }
        }
    }
    Ok(Christoffel { gamma })
}

pub fn christoffel_at(x: &ChartPoint, a: f64) -> Result<Christoffel> {
    Ok(MetricField::new(a)?.christoffel(x))
}

/// Christoffel symbols from central differences of [`metric_at`] with step `h`.
pub fn christoffel_fd(x: &ChartPoint, a: f64, h: f64) -> Result<Christoffel> {
    let field = MetricField::new(a)?;
    let mut derivs = [
        Matrix::zeros(4, 4),
        Matrix::zeros(4, 4),
        Matrix::zeros(4, 4),
        Matrix::zeros(4, 4),
    ];
    for (m, d) in derivs.iter_mut().enumerate() {
        let (mut xp, mut xm) = (*x, *x);
        xp[m] += h;
        xm[m] -= h;
        *d = (&field.at(&xp) - &field.at(&xm)).scale(&(0.5 / h));
    }
    christoffel_from(&field.at(x), &derivs)
}

/// `ẍ + Γ(ẋ, ẋ)` for a curve given by position, velocity and acceleration.
pub fn geodesic_residual(x: &ChartPoint, v: &[f64; 4], acc: &[f64; 4], a: f64) -> Result<f64> {
    let g = christoffel_at(x, a)?.contract(v);
    Ok(g.iter()
        .zip(acc)
        .fold(0.0, |m, (p, q)| m.max((p + q).abs())))
}

/// Parameters `(a, b, c, d)` of the simply transitive isometry group.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ActionParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl ActionParams {
    pub fn apply(&self, x: &ChartPoint) -> ChartPoint {
        [
            x[0] + self.a,
            x[1] + self.b,
            x[2] * (-self.b).exp() + self.c,
            x[3] + self.d,
        ]
    }

    pub fn jacobian(&self) -> Matrix {
        Matrix::diag(&[1.0, 1.0, (-self.b).exp(), 1.0])
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        ActionParams {
            a: rng.random_range(-3.0..3.0),
            b: rng.random_range(-2.0..2.0),
            c: rng.random_range(-3.0..3.0),
            d: rng.random_range(-3.0..3.0),
        }
    }
}

pub fn sample_point<R: Rng + ?Sized>(rng: &mut R) -> ChartPoint {
    [
        rng.random_range(-3.0..3.0),
        rng.random_range(-2.0..2.0),
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum JacobianMode {
    #[default]
    Analytic,
    FiniteDifference,
}

const FD_STEP: f64 = 1e-6;

/// Jacobian of an arbitrary chart map by central differences.
pub fn jacobian_fd(map: impl Fn(&ChartPoint) -> ChartPoint, x: &ChartPoint) -> Matrix {
    let mut j = Matrix::zeros(4, 4);
    for col in 0..4 {
        let (mut xp, mut xm) = (*x, *x);
        xp[col] += FD_STEP;
        xm[col] -= FD_STEP;
        let (fp, fm) = (map(&xp), map(&xm));
        for row in 0..4 {
            j[(row, col)] = (fp[row] - fm[row]) / (2.0 * FD_STEP);
        }
    }
    j
}

/// `‖Jᵀ g(T(x)) J − g(x)‖` for an arbitrary map with the given Jacobian.
pub fn pullback_defect(
    field: &MetricField,
    image: &ChartPoint,
    jac: &Matrix,
    x: &ChartPoint,
) -> f64 {
    (&(&jac.transpose() * &field.at(image)) * jac).dist(&field.at(x))
}

pub fn pullback_residual(
    p: &ActionParams,
    x: &ChartPoint,
    a: f64,
    mode: JacobianMode,
) -> Result<f64> {
    let field = MetricField::new(a)?;
    let jac = match mode {
        JacobianMode::Analytic => p.jacobian(),
        JacobianMode::FiniteDifference => jacobian_fd(|y| p.apply(y), x),
    };
    Ok(pullback_defect(&field, &p.apply(x), &jac, x))
}

/// Comparison of `metric_at(0, a)` with the exact Grams of the three- and
/// four-dimensional algebras.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub a: f64,
    pub deviation3: f64,
    pub deviation4: f64,
    /// Common ratio chart/Gram over the nonzero entries, when there is one.
    pub factor: Option<f64>,
    pub pass: bool,
}

const CONSISTENCY_TOL: f64 = 1e-14;

pub fn identity_consistency(
    a: f64,
    gram3: &ExactMatrix,
    gram4: &ExactMatrix,
) -> Result<ConsistencyReport> {
    let g = metric_at(&[0.0; 4], a)?;
    let (g3, g4) = (gram3.to_f64(), gram4.to_f64());
    if g3.rows() != 3 || g4.rows() != 4 {
        return Err(Error::Shape("expected 3x3 and 4x4 Grams".into()));
    }
    let deviation3 = g.submatrix(&[0, 1, 2]).dist(&g3);
    let deviation4 = g.dist(&g4);
    let ratios: Vec<f64> = g4
        .entries()
        .iter()
        .zip(g.entries())
        .filter(|(r, _)| r.abs() > 0.0)
        .map(|(r, c)| c / r)
        .collect();
    let factor = ratios
        .first()
        .copied()
        .filter(|f| ratios.iter().all(|r| (r - f).abs() <= 1e-12 * f.abs()));
    Ok(ConsistencyReport {
        a,
        deviation3,
        deviation4,
        factor,
        pass: deviation3 <= CONSISTENCY_TOL && deviation4 <= CONSISTENCY_TOL,
    })
}

pub fn signature_at(x: &ChartPoint, a: f64) -> Result<(usize, usize)> {
    signature_f64(&metric_at(x, a)?, 1e-12)
}
