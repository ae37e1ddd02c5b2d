//! Closed-form outage probability.
//!
//! Conditioned on a pattern-gain atom `x`, the link is in outage when the
//! cascade amplitude `V` falls below a threshold `s(x)`. Averaging over the
//! atoms of a [`PatternDistribution`] gives the outage probability. `V` is
//! modeled either as Gaussian (central limit) or as Gamma with matched
//! moments; the active link uses a Gaussian model conditioned on the
//! correlated amplifier-noise power.

use serde::{Deserialize, Serialize};

use crate::channel::{ActivePowerStats, CascadeMoments, LinkConfig};
use crate::error::{Error, Result};
use crate::pattern::PatternDistribution;
use crate::specialfn::{q, regularized_lower_gamma};

/// What to do with the probability that the beam leaves the modeled lobes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailMode {
    /// Drop it, as the plain sum over atoms does.
    PaperExact,
    /// Count it as certain outage (an upper bound).
    #[default]
    TailAsOutage,
}

/// Which model produced an outage value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PassiveClt,
    PassiveGamma,
    ActiveClt,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageResult {
    pub probability: f64,
    pub method: Method,
    pub tail_mode: TailMode,
    pub atoms_used: usize,
}

// Mixes per-atom outage over the distribution. `below(x)` is P(outage | gain x)
// for x > 0; zero-gain atoms and the tail count as certain outage.
fn mix(
    dist: &PatternDistribution,
    link: &LinkConfig,
    tail_mode: TailMode,
    method: Method,
    below: impl Fn(f64) -> f64,
) -> OutageResult {
    let zero_threshold = link.gamma_th == 0.0;
    let mut op = 0.0;
    for (&x, &p) in dist.gains.iter().zip(&dist.masses) {
        if p == 0.0 || zero_threshold {
            continue;
        }
        op += p * if x > 0.0 { below(x) } else { 1.0 };
    }
    if tail_mode == TailMode::TailAsOutage && !zero_threshold {
        op += dist.tail_mass;
    }
    OutageResult {
        probability: op.clamp(0.0, 1.0),
        method,
        tail_mode,
        atoms_used: dist.atoms(),
    }
}

// P(|X| < s) for X ~ N(mu, sigma^2); a point mass when sigma = 0.
fn gaussian_below(mu: f64, sigma: f64, s: f64) -> f64 {
    if sigma == 0.0 {
        return if mu.abs() < s { 1.0 } else { 0.0 };
    }
    q((mu - s) / sigma) - q((mu + s) / sigma)
}

fn require_passive(link: &LinkConfig) -> Result<()> {
    link.validate()?;
    if link.is_active() {
        return Err(Error::Usage("passive outage formula applied to an active link".into()));
    }
    Ok(())
}

fn passive_threshold(link: &LinkConfig) -> f64 {
    link.b1() * link.gamma_th / (link.m_antennas as f64 * link.gamma0())
}

/// Outage of the passive link with a Gaussian cascade amplitude.
pub fn outage_passive_clt(
    dist: &PatternDistribution,
    moments: &CascadeMoments,
    link: &LinkConfig,
    tail_mode: TailMode,
) -> Result<OutageResult> {
    require_passive(link)?;
    let base = passive_threshold(link);
    let sigma = moments.sigma2_v.sqrt();
    Ok(mix(dist, link, tail_mode, Method::PassiveClt, |x| {
        gaussian_below(moments.mu_v, sigma, (base / x).sqrt())
    }))
}

/// Outage of the passive link with a Gamma cascade amplitude.
pub fn outage_passive_gamma(
    dist: &PatternDistribution,
    moments: &CascadeMoments,
    link: &LinkConfig,
    tail_mode: TailMode,
) -> Result<OutageResult> {
    require_passive(link)?;
    let base = passive_threshold(link);
    Ok(mix(dist, link, tail_mode, Method::PassiveGamma, |x| {
        let s = (base / x).sqrt();
        if moments.degenerate {
            return if moments.mu_v < s { 1.0 } else { 0.0 };
        }
        regularized_lower_gamma(moments.lambda_shape, s / moments.omega_scale)
            .expect("matched Gamma shape is positive")
    }))
}

/// Outage of the active link.
pub fn outage_active_clt(
    dist: &PatternDistribution,
    moments: &CascadeMoments,
    stats: &ActivePowerStats,
    link: &LinkConfig,
    tail_mode: TailMode,
) -> Result<OutageResult> {
    link.validate()?;
    if !link.is_active() {
        return Err(Error::Usage("active outage formula applied to a passive link".into()));
    }
    if !(stats.rho.abs() < 1.0) {
        return Err(Error::Degenerate(format!("correlation {} is not inside (-1, 1)", stats.rho)));
    }
    let noise = stats.c1 * stats.mu_z0 + stats.c2 * stats.mu_z1 + stats.c3;
    let base = link.gamma_th / (link.m_antennas as f64 * link.gamma0()) * noise;
    let sigma = moments.sigma2_v.sqrt() * (1.0 - stats.rho * stats.rho).sqrt();
    Ok(mix(dist, link, tail_mode, Method::ActiveClt, |x| {
        gaussian_below(moments.mu_v, sigma, (base / x).sqrt())
    }))
}
