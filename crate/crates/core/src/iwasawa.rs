//! Iwasawa factorizations of SL(n,ℝ), the polar-coordinate map Ψ onto
//! SL(2,ℝ), and the pushforward of the sub-Riemannian frame under Ψ.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::rotation;
use crate::scalar::{lq_positive, mat_exp, qr_positive, Matrix, EXPM_TOL};

pub const UNIMODULAR_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorOrder {
    KAN,
    NAK,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IwasawaFactors {
    pub order: FactorOrder,
    pub k: Matrix,
    pub a: Matrix,
    pub n: Matrix,
}

impl IwasawaFactors {
    pub fn product(&self) -> Matrix {
        match self.order {
            FactorOrder::KAN => &(&self.k * &self.a) * &self.n,
            FactorOrder::NAK => &(&self.n * &self.a) * &self.k,
        }
    }

    pub fn reconstruction_residual(&self, m: &Matrix) -> f64 {
        self.product().dist(m)
    }

    /// Largest violation of: K orthogonal with det 1, A positive diagonal with
    /// det 1, N unipotent and triangular on the side required by the order.
    pub fn constraint_residual(&self) -> f64 {
        let dim = self.k.rows();
        let id = Matrix::identity(dim);
        let mut worst = (&self.k.transpose() * &self.k).dist(&id);
        worst = worst.max((self.k.det().unwrap_or(0.0) - 1.0).abs());
        let mut det_a = 1.0;
        for i in 0..dim {
            for j in 0..dim {
                let (a, n) = (self.a[(i, j)], self.n[(i, j)]);
                if i == j {
                    det_a *= a;
                    if a <= 0.0 {
                        worst = worst.max(a.abs() + 1.0);
                    }
                    worst = worst.max((n - 1.0).abs());
                } else {
                    worst = worst.max(a.abs());
                    let wrong_side = match self.order {
                        FactorOrder::KAN => i > j,
                        FactorOrder::NAK => i < j,
                    };
                    if wrong_side {
                        worst = worst.max(n.abs());
                    }
                }
            }
        }
        worst.max((det_a - 1.0).abs())
    }
}

fn check_unimodular(m: &Matrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let det = m.det()?;
    if (det - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::NotUnimodular { det });
    }
    Ok(())
}

fn diagonal_part(m: &Matrix) -> Matrix {
    Matrix::from_fn(
        m.rows(),
        m.cols(),
        |i, j| if i == j { m[(i, j)] } else { 0.0 },
    )
}

fn inverse_diagonal(d: &Matrix) -> Matrix {
    Matrix::from_fn(d.rows(), d.cols(), |i, j| {
        if i == j {
            1.0 / d[(i, j)]
        } else {
            0.0
        }
    })
}

/// `M = K·A·N` for `M ∈ SL(n,ℝ)`, `n ≥ 2`, from the positive-diagonal QR.
pub fn kan(m: &Matrix) -> Result<IwasawaFactors> {
    check_unimodular(m)?;
    if m.rows() < 2 {
        return Err(Error::InvalidArgument("kan needs n >= 2".into()));
    }
    let (q, r) = qr_positive(m)?;
    let a = diagonal_part(&r);
    let n = &inverse_diagonal(&a) * &r;
    Ok(IwasawaFactors {
        order: FactorOrder::KAN,
        k: q,
        a,
        n,
    })
}

/// `M = N·A·K` for `M ∈ SL(2,ℝ)` with `N` lower unipotent, from the
/// positive-diagonal LQ.
pub fn nak(m: &Matrix) -> Result<IwasawaFactors> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "2x2".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    check_unimodular(m)?;
    let (l, q) = lq_positive(m)?;
    let a = diagonal_part(&l);
    let n = &l * &inverse_diagonal(&a);
    Ok(IwasawaFactors {
        order: FactorOrder::NAK,
        k: q,
        a,
        n,
    })
}

/// Polar coordinates `(ρ, θ)` on the half-plane `a > 0` and the angle `φ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiCoords {
    pub rho: f64,
    pub theta: f64,
    pub phi: f64,
}

impl PsiCoords {
    pub fn new(rho: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::Domain(format!("rho must be positive, got {rho}")));
        }
        if theta.is_nan() || theta.abs() >= FRAC_PI_2 {
            return Err(Error::Domain(format!(
                "theta must lie in (-pi/2, pi/2), got {theta}"
            )));
        }
        if !((0.0..TAU).contains(&phi)) {
            return Err(Error::Domain(format!(
                "phi must lie in [0, 2pi), got {phi}"
            )));
        }
        Ok(PsiCoords { rho, theta, phi })
    }

    /// Half-plane coordinates `(a, b) = (ρ cos θ, ρ sin θ)`.
    pub fn ab(&self) -> (f64, f64) {
        (self.rho * self.theta.cos(), self.rho * self.theta.sin())
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        PsiCoords {
            rho: rng.random_range(0.2..5.0),
            theta: rng.random_range(-1.4..1.4),
            phi: rng.random_range(0.0..TAU),
        }
    }

    /// The lower-triangular factor `n·ā` and the rotation `k`.
    pub fn factors(&self) -> (Matrix, Matrix, Matrix) {
        let (a, b) = self.ab();
        let n = Matrix::from_rows(vec![vec![1.0, 0.0], vec![b, 1.0]]).expect("2x2");
        let abar = Matrix::diag(&[a.powf(-0.5), a.sqrt()]);
        (n, abar, rotation(self.phi))
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Distance between two angles on the circle.
pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TAU - d)
}

pub fn psi_eval(c: &PsiCoords) -> Matrix {
    let PsiCoords { rho, theta, phi } = *c;
    let s = (rho * theta.cos()).powf(-0.5);
    Matrix::from_rows(vec![
        vec![s * phi.cos(), s * phi.sin()],
        vec![s * rho * (theta - phi).sin(), s * rho * (theta - phi).cos()],
    ])
    .expect("2x2")
}

pub fn psi_inverse(m: &Matrix) -> Result<PsiCoords> {
    let f = nak(m)?;
    let b = f.n[(1, 0)];
    let a = f.a[(1, 1)] * f.a[(1, 1)];
    let phi = wrap_angle(f.k[(0, 1)].atan2(f.k[(0, 0)]));
    PsiCoords::new(a.hypot(b), b.atan2(a), phi)
}

/// `‖n·ā·k − Ψ(c)‖` in the max-norm.
pub fn verify_psiab(c: &PsiCoords) -> f64 {
    let (n, abar, k) = c.factors();
    (&(&n * &abar) * &k).dist(&psi_eval(c))
}

/// The basis `ē₁, ē₂, ē₃` of 𝔰𝔩(2,ℝ) in which pushed vectors are expanded.
pub fn sl2_bar_basis() -> [Matrix; 3] {
    let m =
        |r: [[f64; 2]; 2]| Matrix::from_rows(r.iter().map(|x| x.to_vec()).collect()).expect("2x2");
    [
        m([[0.0, 1.0], [0.0, 0.0]]),
        m([[-0.5, 0.0], [0.0, 0.5]]),
        m([[0.0, 1.0], [-1.0, 0.0]]),
    ]
}

/// Coefficients of a traceless 2×2 matrix in `ē₁, ē₂, ē₃`.
pub fn expand_sl2_bar(m: &Matrix) -> [f64; 3] {
    let (alpha, beta, gamma) = (m[(0, 0)], m[(0, 1)], m[(1, 0)]);
    [beta + gamma, -2.0 * alpha, -gamma]
}

/// A rank-two distribution spanned by two left-invariant fields declared
/// orthonormal, written as coefficient vectors in a named basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubRiemannianFrame {
    pub labels: Vec<String>,
    pub vectors: [Vec<f64>; 2],
}

impl SubRiemannianFrame {
    /// `{e₂, e₁ + e₃}` on `A⁺(ℝ) × ℝ`.
    pub fn affine() -> Self {
        SubRiemannianFrame {
            labels: vec!["e1".into(), "e2".into(), "e3".into()],
            vectors: [vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]],
        }
    }

    /// `{ē₂, ē₁ + ē₃}` on 𝔰𝔩(2,ℝ).
    pub fn sl2_bar() -> Self {
        SubRiemannianFrame {
            labels: vec!["e1bar".into(), "e2bar".into(), "e3bar".into()],
            vectors: [vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]],
        }
    }

    pub fn is_independent(&self) -> bool {
        let [u, v] = &self.vectors;
        let mut best = 0.0f64;
        for i in 0..u.len() {
            for j in i + 1..u.len() {
                best = best.max((u[i] * v[j] - u[j] * v[i]).abs());
            }
        }
        best > 1e-12
    }

    /// The fields as 2×2 matrices, for the 𝔰𝔩(2,ℝ) frame.
    pub fn sl2_matrices(&self) -> [Matrix; 2] {
        let basis = sl2_bar_basis();
        let build =
            |c: &[f64]| (0..3).fold(Matrix::zeros(2, 2), |acc, i| &acc + &basis[i].scale(&c[i]));
        [build(&self.vectors[0]), build(&self.vectors[1])]
    }
}

/// The frame `{(ē₂, 0), (ē₁, ē₃)}` on `Sol(2) × SO(2)` as pairs of 2×2 matrices.
pub fn product_frame() -> [(Matrix, Matrix); 2] {
    let [e1, e2, e3] = sl2_bar_basis();
    [(e2, Matrix::zeros(2, 2)), (e1, e3)]
}

/// Pushed frame at one point: numeric and closed-form expansions in `ē₁, ē₂, ē₃`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pushforward {
    pub coords: PsiCoords,
    pub h: f64,
    pub numeric: [[f64; 3]; 2],
    pub closed_form: [[f64; 3]; 2],
    /// Max-norm distance between the numeric and the closed-form expansions.
    pub defect: f64,
    /// Max-norm distance between the estimates at `h/2` and `h/4`.
    pub halving_disagreement: f64,
}

/// Threshold on the estimated truncation error beyond which a step is rejected as too large.
pub const PUSHFORWARD_MAX_ERROR: f64 = 1e-4;

fn central_difference(p: &Matrix, k: &Matrix, w: &(Matrix, Matrix), h: f64) -> Result<[f64; 3]> {
    let moved = |eps: f64| -> Result<Matrix> {
        let left = &(p * &mat_exp(&w.0.scale(&eps), EXPM_TOL)?) * k;
        Ok(&left * &mat_exp(&w.1.scale(&eps), EXPM_TOL)?)
    };
    let diff = &moved(h)? - &moved(-h)?;
    let base_inv = (p * k).inverse()?;
    let body = (&base_inv * &diff).scale(&(0.5 / h));
    Ok(expand_sl2_bar(&body))
}

fn vec_dist(a: &[[f64; 3]; 2], b: &[[f64; 3]; 2]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// `Ad(k⁻¹)W₁ + W₂` for each frame pair.
pub fn pushforward_closed_form(c: &PsiCoords) -> [[f64; 3]; 2] {
    let k = rotation(c.phi);
    let kt = k.transpose();
    let frame = product_frame();
    let push = |(w1, w2): &(Matrix, Matrix)| expand_sl2_bar(&(&(&(&kt * w1) * &k) + w2));
    [push(&frame[0]), push(&frame[1])]
}

/// Differentiates `(p, k) ↦ p·k` along the product frame at the preimage of
/// `Ψ(c)` with central differences of step `h`, left-translates to the
/// identity, and compares with [`pushforward_closed_form`].
///
/// Estimates at `h`, `h/2`, `h/4` are compared: when the smaller steps
/// disagree more than the larger ones, round-off dominates
/// ([`Error::StepTooSmall`]); when the Richardson estimate of the truncation
/// error exceeds [`PUSHFORWARD_MAX_ERROR`], the step is [`Error::StepTooLarge`].
pub fn pushforward_frame(c: &PsiCoords, h: f64) -> Result<Pushforward> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {h}"
        )));
    }
    let (n, abar, k) = c.factors();
    let p = &n * &abar;
    let frame = product_frame();
    let at = |step: f64| -> Result<[[f64; 3]; 2]> {
        Ok([
            central_difference(&p, &k, &frame[0], step)?,
            central_difference(&p, &k, &frame[1], step)?,
        ])
    };
    let (d0, d1, d2) = (at(h)?, at(h / 2.0)?, at(h / 4.0)?);
    let coarse = vec_dist(&d0, &d1);
    let fine = vec_dist(&d1, &d2);
    let scale = p.max_abs() * p.inverse()?.max_abs();
    let noise_floor = f64::EPSILON * scale / h;
    if fine > coarse && fine > noise_floor {
        return Err(Error::StepTooSmall {
            h,
            disagreement: fine,
        });
    }
    if coarse * 4.0 / 3.0 > PUSHFORWARD_MAX_ERROR {
        return Err(Error::StepTooLarge {
            h,
            disagreement: coarse,
        });
    }
    let closed_form = pushforward_closed_form(c);
    Ok(Pushforward {
        coords: *c,
        h,
        defect: vec_dist(&d0, &closed_form),
        numeric: d0,
        closed_form,
        halving_disagreement: fine,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_sl2, seeded};

    fn example() -> Matrix {
        let r = 2f64.sqrt();
        Matrix::from_rows(vec![vec![0.0, 1.0 / r], vec![-r, 0.0]]).unwrap()
    }

    #[test]
    fn trivial_factorizations() {
        let id = Matrix::identity(2);
        for f in [kan(&id).unwrap(), nak(&id).unwrap()] {
            assert!(f.k.dist(&id) < 1e-15 && f.a.dist(&id) < 1e-15 && f.n.dist(&id) < 1e-15);
        }
        let u = Matrix::from_rows(vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let f = kan(&u).unwrap();
        assert!(f.k.dist(&id) < 1e-15 && f.a.dist(&id) < 1e-15 && f.n.dist(&u) < 1e-15);
        let d = Matrix::diag(&[2.0, 0.5]);
        let f = kan(&d).unwrap();
        assert!(f.k.dist(&id) < 1e-15 && f.a.dist(&d) < 1e-15 && f.n.dist(&id) < 1e-15);
    }

    #[test]
    fn nak_of_the_worked_example() {
        let f = nak(&example()).unwrap();
        let r = 2f64.sqrt();
        assert!(f.n.dist(&Matrix::identity(2)) < 1e-15);
        assert!(f.a.dist(&Matrix::diag(&[1.0 / r, r])) < 1e-15);
        assert!(f.k.dist(&rotation(FRAC_PI_2)) < 1e-15);
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(matches!(
            kan(&Matrix::diag(&[2.0, 2.0])),
            Err(Error::NotUnimodular { .. })
        ));
        assert!(matches!(
            nak(&Matrix::diag(&[1.0, 2.0])),
            Err(Error::NotUnimodular { .. })
        ));
        assert!(nak(&Matrix::identity(3)).is_err());
    }

    #[test]
    fn random_roundtrips() {
        let mut rng = seeded(11);
        for _ in 0..100 {
            let m = sample_sl2(&mut rng);
            for f in [kan(&m).unwrap(), nak(&m).unwrap()] {
                assert!(f.reconstruction_residual(&m) < 1e-10);
                assert!(f.constraint_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn uniqueness_from_constructed_factors() {
        let mut rng = seeded(12);
        for _ in 0..50 {
            let k = rotation(rng.random_range(0.0..TAU));
            let t: f64 = rng.random_range(-1.0..1.0);
            let a = Matrix::diag(&[t.exp(), (-t).exp()]);
            let x = rng.random_range(-2.0..2.0);
            let upper = Matrix::from_rows(vec![vec![1.0, x], vec![0.0, 1.0]]).unwrap();
            let f = kan(&(&(&k * &a) * &upper)).unwrap();
            assert!(f.k.dist(&k) < 1e-10 && f.a.dist(&a) < 1e-10 && f.n.dist(&upper) < 1e-10);
            let lower = upper.transpose();
            let f = nak(&(&(&lower * &a) * &k)).unwrap();
            assert!(f.k.dist(&k) < 1e-10 && f.a.dist(&a) < 1e-10 && f.n.dist(&lower) < 1e-10);
        }
    }

    #[test]
    fn psi_examples() {
        let id = psi_eval(&PsiCoords::new(1.0, 0.0, 0.0).unwrap());
        assert!(id.dist(&Matrix::identity(2)) < 1e-15);
        let c = PsiCoords::new(2.0, 0.0, FRAC_PI_2).unwrap();
        assert!(psi_eval(&c).dist(&example()) < 1e-15);
        assert!(verify_psiab(&c) < 1e-15);
        let back = psi_inverse(&example()).unwrap();
        assert!((back.rho - 2.0).abs() < 1e-14 && back.theta.abs() < 1e-14);
        assert!(angle_dist(back.phi, FRAC_PI_2) < 1e-14);
        let origin = psi_inverse(&Matrix::identity(2)).unwrap();
        assert_eq!((origin.rho, origin.theta, origin.phi), (1.0, 0.0, 0.0));
    }

    #[test]
    fn domain_checks() {
        assert!(PsiCoords::new(0.0, 0.0, 0.0).is_err());
        assert!(PsiCoords::new(1.0, FRAC_PI_2, 0.0).is_err());
        assert!(PsiCoords::new(1.0, 0.0, TAU).is_err());
        assert!(PsiCoords::new(1.0, 0.0, -0.1).is_err());
        assert_eq!(wrap_angle(-FRAC_PI_2), 3.0 * FRAC_PI_2);
    }

    #[test]
    fn basis_expansion_roundtrip() {
        let basis = sl2_bar_basis();
        for (i, b) in basis.iter().enumerate() {
            let mut e = [0.0; 3];
            e[i] = 1.0;
            assert_eq!(expand_sl2_bar(b), e);
        }
        let [u, v] = SubRiemannianFrame::sl2_bar().sl2_matrices();
        assert_eq!(u, basis[1]);
        assert_eq!(v, &basis[0] + &basis[2]);
        assert!(SubRiemannianFrame::affine().is_independent());
    }

    #[test]
    fn pushforward_at_phi_zero_is_the_frame() {
        let c = PsiCoords::new(1.7, 0.4, 0.0).unwrap();
        let cf = pushforward_closed_form(&c);
        assert_eq!(cf, [[0.0, 1.0, 0.0], [1.0, 0.0, 1.0]]);
        let p = pushforward_frame(&c, 1e-4).unwrap();
        assert!(p.defect < 1e-6);
    }

    #[test]
    fn quarter_turn_flips_the_first_vector() {
        let c = PsiCoords::new(1.0, 0.0, FRAC_PI_2).unwrap();
        let cf = pushforward_closed_form(&c);
        for (x, y) in cf[0].iter().zip([0.0, -1.0, 0.0]) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn halving_the_step_quarters_the_defect() {
        let c = PsiCoords::new(0.8, -0.3, 2.1).unwrap();
        let d1 = pushforward_frame(&c, 1e-4).unwrap().defect;
        let d2 = pushforward_frame(&c, 5e-5).unwrap().defect;
        let ratio = d1 / d2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn step_errors() {
        let c = PsiCoords::new(1.3, 0.2, 1.0).unwrap();
        assert!(matches!(
            pushforward_frame(&c, 1e-11),
            Err(Error::StepTooSmall { .. })
        ));
        assert!(matches!(
            pushforward_frame(&c, 0.5),
            Err(Error::StepTooLarge { .. })
        ));
        assert!(pushforward_frame(&c, 0.0).is_err());
    }
}
