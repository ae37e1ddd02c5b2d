//! Rician cascade moments and the constants of the passive and active links.
//!
//! The phase-aligned cascade amplitude is `V = sqrt(b0 b1 (1 - zeta)) * sum |H_n| |h_n|`
//! with unit-power Rician envelopes. Its mean and variance (and the Gamma
//! parameters matched to them) feed the passive outage formulas. The active
//! link also needs the power sums `sum |h|^2`, `sum |H|^2` and their
//! correlation with `V`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::LinkAngles;
use crate::specialfn::{laguerre_half, HalfOrder};

/// Large-scale and fading parameters of the two hops (linear units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Rician factor of the base-station hop.
    pub k0: f64,
    /// Rician factor of the user hop.
    pub k1: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    /// Path loss at the 1 m reference distance.
    pub c0: f64,
    pub d0: f64,
    pub d1: f64,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("k0", self.k0 >= 0.0),
            ("k1", self.k1 >= 0.0),
            ("alpha0", self.alpha0 > 0.0),
            ("alpha1", self.alpha1 > 0.0),
            ("c0", self.c0 > 0.0),
            ("d0", self.d0 > 0.0),
            ("d1", self.d1 > 0.0),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(invalid(name, "out of range"));
            }
        }
        let all = [self.k0, self.k1, self.alpha0, self.alpha1, self.c0, self.d0, self.d1];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(invalid("channel", "non-finite parameter"));
        }
        Ok(())
    }

    /// Path gain of the base-station hop.
    pub fn beta0(&self) -> f64 {
        self.c0 * self.d0.powf(-self.alpha0)
    }

    /// Path gain of the user hop.
    pub fn beta1(&self) -> f64 {
        self.c0 * self.d1.powf(-self.alpha1)
    }
}

/// Passive reflection or reflection with amplification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum LinkVariant {
    Passive,
    Active {
        /// Amplifier noise power per element (W).
        sigma2_f: f64,
        /// Amplification power budget (W).
        p_f: f64,
    },
}

/// Transmit side, receiver noise and decision threshold (linear units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub p_t: f64,
    pub m_antennas: usize,
    pub n_elements: usize,
    pub sigma2_n: f64,
    /// Fraction of the cascaded channel replaced by estimation error.
    pub zeta: f64,
    /// Variance of the estimation error.
    pub sigma2_e: f64,
    pub gamma_th: f64,
    pub variant: LinkVariant,
}

impl LinkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_t >= 0.0 && self.p_t.is_finite()) {
            return Err(invalid("p_t", format!("{} is not a finite power", self.p_t)));
        }
        if self.m_antennas == 0 {
            return Err(invalid("m_antennas", "need at least one antenna"));
        }
        if self.n_elements == 0 {
            return Err(invalid("n_elements", "need at least one element"));
        }
        if !(self.sigma2_n > 0.0) {
            return Err(invalid("sigma2_n", "noise power must be positive"));
        }
        if !(0.0..=1.0).contains(&self.zeta) {
            return Err(invalid("zeta", format!("{} outside [0, 1]", self.zeta)));
        }
        if !(self.sigma2_e >= 0.0) {
            return Err(invalid("sigma2_e", "must be non-negative"));
        }
        if !(self.gamma_th >= 0.0) {
            return Err(invalid("gamma_th", "must be non-negative"));
        }
        if let LinkVariant::Active { sigma2_f, p_f } = self.variant {
            if !(sigma2_f >= 0.0) {
                return Err(invalid("sigma2_f", "must be non-negative"));
            }
            if !(p_f > 0.0) {
                return Err(invalid("p_f", "amplification budget must be positive"));
            }
        }
        Ok(())
    }

    /// Transmit SNR `P_t / sigma_n^2`.
    pub fn gamma0(&self) -> f64 {
        self.p_t / self.sigma2_n
    }

    /// Noise inflation from estimation error, `1 + P_t zeta sigma_e^2 / sigma_n^2`.
    pub fn b1(&self) -> f64 {
        1.0 + self.p_t * self.zeta * self.sigma2_e / self.sigma2_n
    }

    pub fn is_active(&self) -> bool {
        matches!(self.variant, LinkVariant::Active { .. })
    }
}

/// `E|h|` for a unit-power Rician envelope with factor `k`.
pub fn rician_mean_envelope(k: f64) -> f64 {
    let lag = laguerre_half(HalfOrder::OneHalf, -k).expect("Rician factor is non-negative");
    (PI / (4.0 * (k + 1.0))).sqrt() * lag
}

/// `E|h|^3` for a unit-power Rician envelope.
fn rician_third_moment(k: f64) -> f64 {
    let lag = laguerre_half(HalfOrder::ThreeHalves, -k).expect("Rician factor is non-negative");
    0.75 * PI.sqrt() * lag / (k + 1.0).powf(1.5)
}

/// Mean, variance and matched Gamma parameters of the cascade amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeMoments {
    pub mu_v: f64,
    pub sigma2_v: f64,
    /// Gamma shape `mu^2 / sigma^2`.
    pub lambda_shape: f64,
    /// Gamma scale `sigma^2 / mu`.
    pub omega_scale: f64,
    /// Set when the cascade vanishes (`zeta = 1`); the Gamma fields are then zero.
    pub degenerate: bool,
}

pub fn cascade_moments(params: &ChannelParams, zeta: f64, n_elements: usize) -> Result<CascadeMoments> {
    params.validate()?;
    if !(0.0..=1.0).contains(&zeta) {
        return Err(invalid("zeta", format!("{zeta} outside [0, 1]")));
    }
    let scale = params.beta0() * params.beta1() * (1.0 - zeta);
    let n = n_elements as f64;
    let m = rician_mean_envelope(params.k0) * rician_mean_envelope(params.k1);
    let mu_v = n * scale.sqrt() * m;
    let sigma2_v = n * scale * (1.0 - m * m);
    if mu_v == 0.0 || sigma2_v == 0.0 {
        return Ok(CascadeMoments {
            mu_v,
            sigma2_v,
            lambda_shape: 0.0,
            omega_scale: 0.0,
            degenerate: true,
        });
    }
    Ok(CascadeMoments {
        mu_v,
        sigma2_v,
        lambda_shape: mu_v * mu_v / sigma2_v,
        omega_scale: sigma2_v / mu_v,
        degenerate: false,
    })
}

/// Gaussian statistics of the two power sums seen by the active link.
///
/// `z0 = b1 * sum |h|^2` (user hop) and `z1 = b0 * sum |H|^2` (base-station hop).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSumStats {
    pub mu_z0: f64,
    pub sigma2_z0: f64,
    pub mu_z1: f64,
    pub sigma2_z1: f64,
}

/// Variance of `|h|^2` for a unit-power Rician envelope.
fn rician_power_variance(k: f64) -> f64 {
    (k * k + 4.0 * k + 2.0) / (k + 1.0).powi(2) - 1.0
}

pub fn power_sum_stats(params: &ChannelParams, n_elements: usize) -> Result<PowerSumStats> {
    params.validate()?;
    let n = n_elements as f64;
    let (b0, b1) = (params.beta0(), params.beta1());
    Ok(PowerSumStats {
        mu_z0: n * b1,
        sigma2_z0: n * b1 * b1 * rician_power_variance(params.k1),
        mu_z1: n * b0,
        sigma2_z1: n * b0 * b0 * rician_power_variance(params.k0),
    })
}

/// Weights of the active-link noise terms after normalizing by `sigma_n^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActiveCoefficients {
    /// Amplifier noise forwarded over the user hop.
    pub c1: f64,
    /// Amplification budget consumed by the incident signal.
    pub c2: f64,
    /// Amplification budget consumed by amplifier noise.
    pub c3: f64,
}

pub fn active_coefficients(
    link: &LinkConfig,
    nominal_t: &LinkAngles,
    nominal_r: &LinkAngles,
    n_elements: usize,
) -> Result<ActiveCoefficients> {
    let LinkVariant::Active { sigma2_f, p_f } = link.variant else {
        return Err(Error::Usage("active coefficients requested for a passive link".into()));
    };
    let e_t = nominal_t.theta.cos().powi(3);
    let e_r = nominal_r.theta.cos().powi(3);
    let b1 = link.b1();
    Ok(ActiveCoefficients {
        c1: sigma2_f / link.sigma2_n * e_r,
        c2: link.p_t / p_f * b1 * e_t,
        c3: n_elements as f64 * sigma2_f / p_f * b1,
    })
}

/// Cross moment of the cascade with the weighted power sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub rho: f64,
    /// `E{V (c1 z0 + c2 z1)}`.
    pub mu_vz: f64,
    /// `E{sum|H||h| * sum|H|^2}`.
    pub a0_term: f64,
    /// `E{sum|H||h| * sum|h|^2}`.
    pub a1_term: f64,
}

/// `E{sum_n |H_n||h_n| * sum_m |X_m|^2}` where `X` is the hop with factor `k_own`.
fn cross_moment(k_own: f64, k_other: f64, n: f64) -> f64 {
    let third = rician_third_moment(k_own) * rician_mean_envelope(k_other);
    let first = rician_mean_envelope(k_own) * rician_mean_envelope(k_other);
    n * third + n * (n - 1.0) * first
}

pub fn correlation_rho(
    params: &ChannelParams,
    link: &LinkConfig,
    n_elements: usize,
    c1: f64,
    c2: f64,
) -> Result<Correlation> {
    if !link.is_active() {
        return Err(Error::Usage("correlation requested for a passive link".into()));
    }
    let n = n_elements as f64;
    let moments = cascade_moments(params, link.zeta, n_elements)?;
    let sums = power_sum_stats(params, n_elements)?;
    let (b0, b1) = (params.beta0(), params.beta1());
    let a0_term = cross_moment(params.k0, params.k1, n);
    let a1_term = cross_moment(params.k1, params.k0, n);
    let amp = (b0 * b1 * (1.0 - link.zeta)).sqrt();
    let mu_vz = amp * (c1 * b1 * a1_term + c2 * b0 * a0_term);
    let sigma_z = (c1 * c1 * sums.sigma2_z0 + c2 * c2 * sums.sigma2_z1).sqrt();
    let denom = moments.sigma2_v.sqrt() * sigma_z;
    if !(denom > 0.0) {
        return Err(Error::Degenerate(format!(
            "cascade deviation {} or power-sum deviation {sigma_z} is zero",
            moments.sigma2_v.sqrt()
        )));
    }
    let rho = (mu_vz - moments.mu_v * (c1 * sums.mu_z0 + c2 * sums.mu_z1)) / denom;
    if !(rho.abs() < 1.0) {
        return Err(Error::Degenerate(format!("correlation {rho} is not inside (-1, 1)")));
    }
    Ok(Correlation {
        rho,
        mu_vz,
        a0_term,
        a1_term,
    })
}

/// Everything the active closed form needs besides the cascade moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActivePowerStats {
    pub mu_z0: f64,
    pub sigma2_z0: f64,
    pub mu_z1: f64,
    pub sigma2_z1: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub rho: f64,
    pub mu_vz: f64,
    pub a0_term: f64,
    pub a1_term: f64,
}

pub fn active_power_stats(
    params: &ChannelParams,
    link: &LinkConfig,
    nominal_t: &LinkAngles,
    nominal_r: &LinkAngles,
) -> Result<ActivePowerStats> {
    let n = link.n_elements;
    let c = active_coefficients(link, nominal_t, nominal_r, n)?;
    let sums = power_sum_stats(params, n)?;
    let corr = correlation_rho(params, link, n, c.c1, c.c2)?;
    Ok(ActivePowerStats {
        mu_z0: sums.mu_z0,
        sigma2_z0: sums.sigma2_z0,
        mu_z1: sums.mu_z1,
        sigma2_z1: sums.sigma2_z1,
        c1: c.c1,
        c2: c.c2,
        c3: c.c3,
        rho: corr.rho,
        mu_vz: corr.mu_vz,
        a0_term: corr.a0_term,
        a1_term: corr.a1_term,
    })
}
