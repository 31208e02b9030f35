//! Geodesics of left-invariant metrics in the left-trivialized picture.
//!
//! A curve `g(t)` with body velocity `v(t)` (so `ġ = g·Σ vᵏ Bₖ`) is a geodesic
//! iff `v̇ᵏ = −Γ[i][j][k] vⁱ vʲ`, with `Γ` the exact connection table.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::LieAlgebraPreset;
use crate::metric::koszul_connection;
use crate::scalar::{Matrix, QSqrt2};

/// Outcome of the one-parameter-subgroup test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OneParamCheck {
    pub pass: bool,
    /// `∇_W W` in the preset basis.
    pub nabla_ww: Vec<QSqrt2>,
}

/// `t ↦ exp(tW)` is a geodesic iff `∇_W W = 0`, decided exactly.
pub fn is_geodesic_oneparam(preset: &LieAlgebraPreset, w: &[QSqrt2]) -> Result<OneParamCheck> {
    if w.len() != preset.dim() {
        return Err(Error::DimensionMismatch {
            expected: preset.dim().to_string(),
            got: w.len().to_string(),
        });
    }
    let nabla_ww = koszul_connection(preset)?.nabla(w, w);
    Ok(OneParamCheck {
        pass: nabla_ww.iter().all(|x| x.is_zero()),
        nabla_ww,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicState {
    pub t: f64,
    pub g: Matrix,
    pub v: Vec<f64>,
}

/// Float data needed to drive the reduced equations.
#[derive(Clone, Debug)]
pub struct GeodesicSystem {
    dim: usize,
    gamma: Vec<f64>,
    gram: Matrix,
    basis: Vec<Matrix>,
}

impl GeodesicSystem {
    pub fn new(preset: &LieAlgebraPreset) -> Result<Self> {
        let realization = preset
            .realization
            .as_ref()
            .ok_or_else(|| Error::MissingRealization(preset.name.clone()))?;
        Ok(GeodesicSystem {
            dim: preset.dim(),
            gamma: koszul_connection(preset)?.to_f64(),
            gram: preset.gram.to_f64(),
            basis: realization.iter().map(|m| m.to_f64()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix_size(&self) -> usize {
        self.basis[0].rows()
    }

    /// `v̇`.
    pub fn accel(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for i in 0..d {
            for j in 0..d {
                let f = v[i] * v[j];
                if f == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o -= self.gamma[(i * d + j) * d + k] * f;
                }
            }
        }
        out
    }

    /// `Σ vᵏ Bₖ`.
    pub fn algebra_element(&self, v: &[f64]) -> Matrix {
        let n = self.matrix_size();
        self.basis
            .iter()
            .zip(v)
            .fold(Matrix::zeros(n, n), |acc, (b, c)| &acc + &b.scale(c))
    }

    pub fn energy(&self, v: &[f64]) -> f64 {
        let gv = self.gram.mul_vec(v).expect("dimension checked");
        gv.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    fn step(&self, g: &Matrix, v: &[f64], h: f64) -> (Matrix, Vec<f64>) {
        let axpy = |x: &[f64], k: &[f64], s: f64| -> Vec<f64> {
            x.iter().zip(k).map(|(a, b)| a + s * b).collect()
        };
        let k1v = self.accel(v);
        let k1g = g * &self.algebra_element(v);
        let v2 = axpy(v, &k1v, h / 2.0);
        let g2 = g + &k1g.scale(&(h / 2.0));
        let k2v = self.accel(&v2);
        let k2g = &g2 * &self.algebra_element(&v2);
        let v3 = axpy(v, &k2v, h / 2.0);
        let g3 = g + &k2g.scale(&(h / 2.0));
        let k3v = self.accel(&v3);
        let k3g = &g3 * &self.algebra_element(&v3);
        let v4 = axpy(v, &k3v, h);
        let g4 = g + &k3g.scale(&h);
        let k4v = self.accel(&v4);
        let k4g = &g4 * &self.algebra_element(&v4);
        let vn = (0..self.dim)
            .map(|k| v[k] + h / 6.0 * (k1v[k] + 2.0 * k2v[k] + 2.0 * k3v[k] + k4v[k]))
            .collect();
        let dg = &(&(&k1g + &k2g.scale(&2.0)) + &k3g.scale(&2.0)) + &k4g;
        (g + &dg.scale(&(h / 6.0)), vn)
    }

    /// Classical fourth-order integration from the identity over `[0, t_end]`.
    pub fn integrate(&self, v0: &[f64], t_end: f64, steps: usize) -> Result<Vec<GeodesicState>> {
        if v0.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim.to_string(),
                got: v0.len().to_string(),
            });
        }
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be at least 1".into()));
        }
        if !t_end.is_finite() {
            return Err(Error::InvalidArgument("T must be finite".into()));
        }
        let h = t_end / steps as f64;
        let mut g = Matrix::identity(self.matrix_size());
        let mut v = v0.to_vec();
        let mut out = Vec::with_capacity(steps + 1);
        out.push(GeodesicState {
            t: 0.0,
            g: g.clone(),
            v: v.clone(),
        });
        for n in 1..=steps {
            (g, v) = self.step(&g, &v, h);
            out.push(GeodesicState {
                t: h * n as f64,
                g: g.clone(),
                v: v.clone(),
            });
        }
        Ok(out)
    }
}

pub fn integrate(
    preset: &LieAlgebraPreset,
    v0: &[f64],
    t_end: f64,
    steps: usize,
) -> Result<Vec<GeodesicState>> {
    GeodesicSystem::new(preset)?.integrate(v0, t_end, steps)
}

/// Largest `|(v(t), v(t)) − (v₀, v₀)|` along a trajectory.
pub fn energy_drift(system: &GeodesicSystem, traj: &[GeodesicState]) -> f64 {
    let e0 = system.energy(&traj[0].v);
    traj.iter()
        .fold(0.0, |m, s| m.max((system.energy(&s.v) - e0).abs()))
}
