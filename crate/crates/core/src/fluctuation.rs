//! Gaussian platform jitter and its linearized effect on the beam.
//!
//! Tilts `eps_x`, `eps_y` perturb the per-axis direction angles of both hops.
//! To first order the resulting elevation/azimuth errors are linear in the
//! tilts, and so are the two pattern shifts `z_x`, `z_y` that enter the array
//! factor. Everything downstream only needs their means and deviations.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{LinkAngles, Side};

/// Independent Gaussian tilts about the two horizontal axes (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationModel {
    pub mu_x: f64,
    pub mu_y: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
}

impl FluctuationModel {
    pub fn new(mu_x: f64, mu_y: f64, sigma_x: f64, sigma_y: f64) -> Result<Self> {
        for (name, v) in [("mu_x", mu_x), ("mu_y", mu_y), ("sigma_x", sigma_x), ("sigma_y", sigma_y)] {
            if !v.is_finite() {
                return Err(invalid(name, format!("{v} is not finite")));
            }
        }
        if sigma_x < 0.0 || sigma_y < 0.0 {
            return Err(invalid("sigma", "deviations must be non-negative"));
        }
        Ok(Self {
            mu_x,
            mu_y,
            sigma_x,
            sigma_y,
        })
    }

    pub fn from_degrees(mu_x: f64, mu_y: f64, sigma_x: f64, sigma_y: f64) -> Result<Self> {
        Self::new(mu_x.to_radians(), mu_y.to_radians(), sigma_x.to_radians(), sigma_y.to_radians())
    }

    /// Hovering platform with no jitter.
    pub fn stable() -> Self {
        Self {
            mu_x: 0.0,
            mu_y: 0.0,
            sigma_x: 0.0,
            sigma_y: 0.0,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.mu_x == 0.0 && self.mu_y == 0.0 && self.sigma_x == 0.0 && self.sigma_y == 0.0
    }

    /// Same means, deviations multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            sigma_x: self.sigma_x * c,
            sigma_y: self.sigma_y * c,
            ..*self
        }
    }
}

/// Sensitivity of elevation and azimuth to each axis tilt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleJacobian {
    pub a_theta_x: f64,
    pub a_theta_y: f64,
    pub a_phi_x: f64,
    pub a_phi_y: f64,
    pub side: Side,
}

/// First-order derivatives of elevation and azimuth in the per-axis angles.
///
/// Undefined straight below the surface, where azimuth is singular.
pub fn angle_jacobian(angles: &LinkAngles) -> Result<AngleJacobian> {
    if angles.is_nadir() {
        return Err(Error::Singular(format!(
            "{:?} direction is at nadir; azimuth has no derivative there",
            angles.side
        )));
    }
    let tx = angles.theta_x.tan();
    let ty = angles.theta_y.tan();
    let s = tx * tx + ty * ty;
    let theta_scale = 1.0 / (s.sqrt() * (1.0 + s));
    Ok(AngleJacobian {
        a_theta_x: (1.0 + tx * tx) * tx * theta_scale,
        a_theta_y: (1.0 + ty * ty) * ty * theta_scale,
        a_phi_x: -(1.0 + tx * tx) * ty / s,
        a_phi_y: (1.0 + ty * ty) * tx / s,
        side: angles.side,
    })
}

/// Mean and variance of the linearized elevation and azimuth errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleErrorStats {
    pub mu_eps_theta: f64,
    pub sigma2_eps_theta: f64,
    pub mu_eps_phi: f64,
    pub sigma2_eps_phi: f64,
}

pub fn angle_error_stats(jac: &AngleJacobian, model: &FluctuationModel) -> AngleErrorStats {
    let (sx2, sy2) = (model.sigma_x.powi(2), model.sigma_y.powi(2));
    AngleErrorStats {
        mu_eps_theta: jac.a_theta_x * model.mu_x + jac.a_theta_y * model.mu_y,
        sigma2_eps_theta: jac.a_theta_x.powi(2) * sx2 + jac.a_theta_y.powi(2) * sy2,
        mu_eps_phi: jac.a_phi_x * model.mu_x + jac.a_phi_y * model.mu_y,
        sigma2_eps_phi: jac.a_phi_x.powi(2) * sx2 + jac.a_phi_y.powi(2) * sy2,
    }
}

/// Gaussian statistics of the two linearized pattern shifts.
///
/// The four angle errors are ordered (elevation t, azimuth t, elevation r,
/// azimuth r) in `cov`, `mean_eps`, `a_x` and `a_y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftStats {
    pub mu_zx: f64,
    pub mu_zy: f64,
    pub sigma_zx: f64,
    pub sigma_zy: f64,
    pub cov: [[f64; 4]; 4],
    pub mean_eps: [f64; 4],
    pub a_x: [f64; 4],
    pub a_y: [f64; 4],
}

impl ShiftStats {
    /// No jitter: both shifts are identically zero.
    pub fn zero() -> Self {
        Self {
            mu_zx: 0.0,
            mu_zy: 0.0,
            sigma_zx: 0.0,
            sigma_zy: 0.0,
            cov: [[0.0; 4]; 4],
            mean_eps: [0.0; 4],
            a_x: [0.0; 4],
            a_y: [0.0; 4],
        }
    }

    /// Variance of `w . eps` under the joint Gaussian model.
    pub fn quadratic_form(&self, w: &[f64; 4]) -> f64 {
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += w[i] * self.cov[i][j] * w[j];
            }
        }
        acc
    }

    /// Covariance of the two shifts.
    pub fn cov_xy(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += self.a_x[i] * self.cov[i][j] * self.a_y[j];
            }
        }
        acc
    }
}

/// Builds the linearized shift statistics for both hops.
pub fn shift_stats(
    t_jac: &AngleJacobian,
    r_jac: &AngleJacobian,
    t_angles: &LinkAngles,
    r_angles: &LinkAngles,
    model: &FluctuationModel,
) -> ShiftStats {
    let (st, ct) = t_angles.theta.sin_cos();
    let (spt, cpt) = t_angles.phi.sin_cos();
    let (sr, cr) = r_angles.theta.sin_cos();
    let (spr, cpr) = r_angles.phi.sin_cos();
    let a_x = [ct * cpt, -st * spt, cr * cpr, -sr * spr];
    let a_y = [ct * spt, st * cpt, cr * spr, sr * cpr];

    // Per-error sensitivity to (eps_x, eps_y).
    let rows = [
        (t_jac.a_theta_x, t_jac.a_theta_y),
        (t_jac.a_phi_x, t_jac.a_phi_y),
        (r_jac.a_theta_x, r_jac.a_theta_y),
        (r_jac.a_phi_x, r_jac.a_phi_y),
    ];
    let (sx2, sy2) = (model.sigma_x.powi(2), model.sigma_y.powi(2));
    let mut cov = [[0.0; 4]; 4];
    let mut mean_eps = [0.0; 4];
    for (m, &(amx, amy)) in rows.iter().enumerate() {
        mean_eps[m] = amx * model.mu_x + amy * model.mu_y;
        for (n, &(anx, any)) in rows.iter().enumerate() {
            cov[m][n] = amx * anx * sx2 + amy * any * sy2;
        }
    }
    let dot = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut out = ShiftStats {
        mu_zx: dot(&a_x, &mean_eps),
        mu_zy: dot(&a_y, &mean_eps),
        sigma_zx: 0.0,
        sigma_zy: 0.0,
        cov,
        mean_eps,
        a_x,
        a_y,
    };
    out.sigma_zx = out.quadratic_form(&a_x).max(0.0).sqrt();
    out.sigma_zy = out.quadratic_form(&a_y).max(0.0).sqrt();
    out
}

/// One pair of axis tilts.
pub fn sample_fluctuation<R: Rng + ?Sized>(model: &FluctuationModel, rng: &mut R) -> (f64, f64) {
    let zx: f64 = rng.sample(StandardNormal);
    let zy: f64 = rng.sample(StandardNormal);
    (model.mu_x + model.sigma_x * zx, model.mu_y + model.sigma_y * zy)
}
