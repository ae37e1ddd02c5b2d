//! Ground-truth simulation.
//!
//! Every trial draws platform tilts, evaluates the exact fluctuated directions,
//! pattern shifts and array factor, then draws per-element Rician channels and
//! computes the instantaneous SNR. With optimal reflection phases only the
//! channel envelopes matter, so the default (reduced) mode never builds the
//! complex channel matrices. The full-matrix path exists to verify that
//! reduction where it provably holds, on a stable platform.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelParams, LinkConfig, LinkVariant};
use crate::error::{invalid, Error, Result};
use crate::exec::{fold_range, map_range, Execution};
use crate::fluctuation::{sample_fluctuation, FluctuationModel};
use crate::geometry::{fluctuated_angles, SystemGeometry};
use crate::pattern::{cos_cubed, exact_array_factor, shifts_from_angles, ArrayConfig};
use crate::rng::trial_rng;
use crate::stats::wilson_interval;

/// How the SNR of a trial is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimMode {
    /// Envelope sums only (phases already aligned).
    #[default]
    Reduced,
    /// Explicit complex channels, phase design and MRT; stable platform only.
    FullMatrix,
}

/// Element gain used inside a simulated pattern gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternMode {
    /// `cos^3` of the fluctuated directions.
    #[default]
    Exact,
    /// `cos^3` of the nominal directions, as the closed forms assume.
    TreatedElementGain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub mode: SimMode,
    pub pattern_mode: PatternMode,
    pub execution: Execution,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            mode: SimMode::Reduced,
            pattern_mode: PatternMode::Exact,
            execution: Execution::default(),
        }
    }

    pub fn with_execution(self, execution: Execution) -> Self {
        Self { execution, ..self }
    }

    fn validate(&self, model: &FluctuationModel) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "need at least one trial"));
        }
        if self.mode == SimMode::FullMatrix && !model.is_stable() {
            return Err(Error::Usage(
                "full-matrix simulation is only defined for a stable platform".into(),
            ));
        }
        Ok(())
    }
}

/// Simulated outage probability with a 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub events: u64,
}

impl OutageEstimate {
    pub fn from_counts(events: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(events, trials);
        Self {
            point: events as f64 / trials as f64,
            ci_low,
            ci_high,
            trials,
            events,
        }
    }
}

/// Unit-power Rician channel coefficient with a zero-phase LoS part.
pub fn sample_rician<R: Rng + ?Sized>(k_linear: f64, rng: &mut R) -> Complex64 {
    let los = (k_linear / (k_linear + 1.0)).sqrt();
    let scatter = (0.5 / (k_linear + 1.0)).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(los + scatter * re, scatter * im)
}

/// Envelope of a unit-power Rician coefficient.
pub fn sample_rician_envelope<R: Rng + ?Sized>(k_linear: f64, rng: &mut R) -> f64 {
    sample_rician(k_linear, rng).norm()
}

/// One simulated pattern gain together with the element gains it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSample {
    /// Array factor times element gain.
    pub gain: f64,
    pub e_t: f64,
    pub e_r: f64,
}

fn draw_gain<R: Rng + ?Sized>(
    geometry: &SystemGeometry,
    model: &FluctuationModel,
    n_side: usize,
    pattern_mode: PatternMode,
    rng: &mut R,
) -> Result<GainSample> {
    let (ex, ey) = sample_fluctuation(model, rng);
    let (t, r) = (&geometry.t_angles, &geometry.r_angles);
    let ft = fluctuated_angles(t, ex, ey)?;
    let fr = fluctuated_angles(r, ex, ey)?;
    let (zx, zy) = shifts_from_angles(t, r, ft, fr);
    let array = exact_array_factor(zx, zy, n_side);
    let (e_t, e_r) = match pattern_mode {
        PatternMode::Exact => (cos_cubed(ft.0), cos_cubed(fr.0)),
        PatternMode::TreatedElementGain => (cos_cubed(t.theta), cos_cubed(r.theta)),
    };
    Ok(GainSample {
        gain: array * e_t * e_r,
        e_t,
        e_r,
    })
}

/// One draw of the pattern gain.
pub fn simulate_pattern_gain<R: Rng + ?Sized>(
    geometry: &SystemGeometry,
    model: &FluctuationModel,
    config: &ArrayConfig,
    pattern_mode: PatternMode,
    rng: &mut R,
) -> Result<f64> {
    Ok(draw_gain(geometry, model, config.n_side, pattern_mode, rng)?.gain)
}

/// `trials` pattern-gain draws; draw `i` uses stream `i` of `seed`.
pub fn sample_pattern_gains(
    geometry: &SystemGeometry,
    model: &FluctuationModel,
    config: &ArrayConfig,
    pattern_mode: PatternMode,
    trials: u64,
    seed: u64,
    execution: Execution,
) -> Result<Vec<f64>> {
    map_range(execution, trials, |i| {
        let mut rng = trial_rng(seed, i);
        simulate_pattern_gain(geometry, model, config, pattern_mode, &mut rng)
    })
    .into_iter()
    .collect()
}

/// Per-trial channel statistics that fully determine the reduced SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialDraw {
    pub pattern: GainSample,
    /// `sum |H_n| |h_n|`.
    pub amplitude_sum: f64,
    /// `sum |H_n|^2`.
    pub power_bs: f64,
    /// `sum |h_n|^2`.
    pub power_ue: f64,
}

fn draw_trial<R: Rng + ?Sized>(
    geometry: &SystemGeometry,
    model: &FluctuationModel,
    n_side: usize,
    params: &ChannelParams,
    pattern_mode: PatternMode,
    rng: &mut R,
) -> Result<TrialDraw> {
    let pattern = draw_gain(geometry, model, n_side, pattern_mode, rng)?;
    let (mut amplitude_sum, mut power_bs, mut power_ue) = (0.0, 0.0, 0.0);
    for _ in 0..n_side * n_side {
        let big = sample_rician_envelope(params.k0, rng);
        let small = sample_rician_envelope(params.k1, rng);
        amplitude_sum += big * small;
        power_bs += big * big;
        power_ue += small * small;
    }
    Ok(TrialDraw {
        pattern,
        amplitude_sum,
        power_bs,
        power_ue,
    })
}

/// Squared amplification factor of the optimal active design; 1 when passive.
pub fn amplification_squared(link: &LinkConfig, params: &ChannelParams, e_t: f64, power_bs: f64) -> f64 {
    match link.variant {
        LinkVariant::Passive => 1.0,
        LinkVariant::Active { sigma2_f, p_f } => {
            p_f / (link.p_t * params.beta0() * e_t * power_bs + link.n_elements as f64 * sigma2_f)
        }
    }
}

/// Instantaneous SNR from the envelope statistics of one trial.
pub fn reduced_snr(link: &LinkConfig, params: &ChannelParams, d: &TrialDraw) -> f64 {
    let (b0, b1) = (params.beta0(), params.beta1());
    let a2 = amplification_squared(link, params, d.pattern.e_t, d.power_bs);
    let sigma2_f = match link.variant {
        LinkVariant::Passive => 0.0,
        LinkVariant::Active { sigma2_f, .. } => sigma2_f,
    };
    let signal = link.p_t
        * link.m_antennas as f64
        * (1.0 - link.zeta)
        * b0
        * b1
        * a2
        * d.pattern.gain
        * d.amplitude_sum
        * d.amplitude_sum;
    let noise = b1 * a2 * d.pattern.e_r * sigma2_f * d.power_ue
        + link.p_t * link.zeta * link.sigma2_e
        + link.sigma2_n;
    signal / noise
}

fn check_links(array: &ArrayConfig, links: &[LinkConfig]) -> Result<()> {
    for link in links {
        link.validate()?;
        if link.n_elements != array.n_elements() {
            return Err(invalid(
                "n_elements",
                format!("link has {} elements, array has {}", link.n_elements, array.n_elements()),
            ));
        }
    }
    Ok(())
}

/// Outage estimates for several links sharing one array and channel model.
///
/// Each trial's fluctuation and fading draws are reused across all links,
/// which makes sweeps over transmit power cheap and their points coupled.
pub fn simulate_outage_batch(
    geometry: &SystemGeometry,
    model: &FluctuationModel,
    array: &ArrayConfig,
    params: &ChannelParams,
    links: &[LinkConfig],
    sim: &SimConfig,
) -> Result<Vec<OutageEstimate>> {
    sim.validate(model)?;
    params.validate()?;
    check_links(array, links)?;
    if sim.mode == SimMode::FullMatrix {
        return links
            .iter()
            .map(|link| simulate_full_matrix_outage(geometry, params, link, sim))
            .collect();
    }
    let counts = fold_range(
        sim.execution,
        sim.trials,
        || Ok(vec![0u64; links.len()]),
        |acc: Result<Vec<u64>>, i| {
            let mut acc = acc?;
            let mut rng = trial_rng(sim.seed, i);
            let draw = draw_trial(geometry, model, array.n_side, params, sim.pattern_mode, &mut rng)?;
            for (count, link) in acc.iter_mut().zip(links) {
                if reduced_snr(link, params, &draw) < link.gamma_th {
                    *count += 1;
                }
            }
            Ok(acc)
        },
        |a, b| {
            let (mut a, b) = (a?, b?);
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            Ok(a)
        },
    )?;
    Ok(counts
        .into_iter()
        .map(|events| OutageEstimate::from_counts(events, sim.trials))
        .collect())
}

/// Outage estimate for a single link.
pub fn simulate_outage(
    geometry: &SystemGeometry,
    model: &FluctuationModel,
    array: &ArrayConfig,
    params: &ChannelParams,
    link: &LinkConfig,
    sim: &SimConfig,
) -> Result<OutageEstimate> {
    Ok(simulate_outage_batch(geometry, model, array, params, std::slice::from_ref(link), sim)?[0])
}

/// Complex channels of one stable-platform trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    /// Base-station hop fading per element.
    pub big_h: Vec<Complex64>,
    /// User hop fading per element.
    pub small_h: Vec<Complex64>,
}

fn unit_phase(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

// Half-wavelength steering phases of the surface towards a direction.
fn surface_steering(n_side: usize, theta: f64, phi: f64) -> Vec<Complex64> {
    let (u, v) = (theta.sin() * phi.cos(), theta.sin() * phi.sin());
    (0..n_side * n_side)
        .map(|k| {
            let (ix, iy) = ((k / n_side) as f64, (k % n_side) as f64);
            unit_phase(std::f64::consts::PI * (ix * u + iy * v))
        })
        .collect()
}

fn bs_steering(m: usize, geometry: &SystemGeometry) -> Vec<Complex64> {
    let horiz = (geometry.irs.x - geometry.bs.x).hypot(geometry.irs.y - geometry.bs.y);
    let cos_dep = horiz / geometry.d0;
    (0..m)
        .map(|k| unit_phase(std::f64::consts::PI * k as f64 * cos_dep))
        .collect()
}

/// SNR through explicit channel matrices and through the envelope reduction.
///
/// The base-station hop is a rank-one line-of-sight matrix (per-element
/// fading shared by all antennas); reflection phases co-phase the cascade and
/// the transmitter uses maximum-ratio beamforming.
pub fn full_and_reduced_snr(
    geometry: &SystemGeometry,
    params: &ChannelParams,
    link: &LinkConfig,
    draw: &ChannelDraw,
) -> (f64, f64) {
    let n = link.n_elements;
    let m = link.m_antennas;
    let n_side = (n as f64).sqrt().round() as usize;
    let e_t = cos_cubed(geometry.t_angles.theta);
    let e_r = cos_cubed(geometry.r_angles.theta);
    let (b0, b1) = (params.beta0(), params.beta1());
    let a_it = surface_steering(n_side, geometry.t_angles.theta, geometry.t_angles.phi);
    let a_ir = surface_steering(n_side, geometry.r_angles.theta, geometry.r_angles.phi);
    let a_b = bs_steering(m, geometry);

    let h_bi: Vec<Vec<Complex64>> = (0..n)
        .map(|k| a_b.iter().map(|b| (b0 * e_t).sqrt() * draw.big_h[k] * a_it[k] * b).collect())
        .collect();
    let h_iu: Vec<Complex64> = (0..n).map(|k| (b1 * e_r).sqrt() * draw.small_h[k] * a_ir[k]).collect();

    // Per-antenna incident power at the surface, normalized by the array size.
    let incident = h_bi.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>() / m as f64;
    let (a2, sigma2_f) = match link.variant {
        LinkVariant::Passive => (1.0, 0.0),
        LinkVariant::Active { sigma2_f, p_f } => (p_f / (link.p_t * incident + n as f64 * sigma2_f), sigma2_f),
    };
    let amp = a2.sqrt();

    let mut r = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..n {
        let phase = -(h_iu[k] * h_bi[k][0]).arg();
        let coeff = h_iu[k] * unit_phase(phase) * amp;
        for (acc, h) in r.iter_mut().zip(&h_bi[k]) {
            *acc += coeff * h;
        }
    }
    let r_norm = r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let gain: Complex64 = r.iter().map(|c| c * c.conj() / r_norm).sum();
    let amp_noise = a2 * sigma2_f * h_iu.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let snr_full = link.p_t * (1.0 - link.zeta) * gain.norm_sqr()
        / (amp_noise + link.p_t * link.zeta * link.sigma2_e + link.sigma2_n);

    let reduced = TrialDraw {
        pattern: GainSample {
            gain: e_t * e_r,
            e_t,
            e_r,
        },
        amplitude_sum: (0..n).map(|k| draw.big_h[k].norm() * draw.small_h[k].norm()).sum(),
        power_bs: draw.big_h.iter().map(|c| c.norm_sqr()).sum(),
        power_ue: draw.small_h.iter().map(|c| c.norm_sqr()).sum(),
    };
    (snr_full, reduced_snr(link, params, &reduced))
}

fn draw_channels<R: Rng + ?Sized>(params: &ChannelParams, n: usize, rng: &mut R) -> ChannelDraw {
    let mut big_h = Vec::with_capacity(n);
    let mut small_h = Vec::with_capacity(n);
    for _ in 0..n {
        big_h.push(sample_rician(params.k0, rng));
        small_h.push(sample_rician(params.k1, rng));
    }
    ChannelDraw { big_h, small_h }
}

/// One random channel draw evaluated both ways; returns `(full, reduced)`.
pub fn full_matrix_snr_check<R: Rng + ?Sized>(
    geometry: &SystemGeometry,
    model: &FluctuationModel,
    params: &ChannelParams,
    link: &LinkConfig,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if !model.is_stable() {
        return Err(Error::Usage("full-matrix check requires a stable platform".into()));
    }
    params.validate()?;
    link.validate()?;
    let n_side = (link.n_elements as f64).sqrt().round() as usize;
    if n_side * n_side != link.n_elements {
        return Err(invalid("n_elements", "not a perfect square"));
    }
    let draw = draw_channels(params, link.n_elements, rng);
    Ok(full_and_reduced_snr(geometry, params, link, &draw))
}

fn simulate_full_matrix_outage(
    geometry: &SystemGeometry,
    params: &ChannelParams,
    link: &LinkConfig,
    sim: &SimConfig,
) -> Result<OutageEstimate> {
    let events = fold_range(
        sim.execution,
        sim.trials,
        || 0u64,
        |acc, i| {
            let mut rng = trial_rng(sim.seed, i);
            let draw = draw_channels(params, link.n_elements, &mut rng);
            let (snr, _) = full_and_reduced_snr(geometry, params, link, &draw);
            acc + u64::from(snr < link.gamma_th)
        },
        |a, b| a + b,
    );
    Ok(OutageEstimate::from_counts(events, sim.trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::element_gain_exact;
    use crate::stats::mean_variance;

    fn reference_params() -> ChannelParams {
        let g = SystemGeometry::reference();
        ChannelParams {
            k0: 10.0,
            k1: 10.0,
            alpha0: 2.0,
            alpha1: 2.2,
            c0: 1e-3,
            d0: g.d0,
            d1: g.d1,
        }
    }

    fn link(n: usize, m: usize, variant: LinkVariant) -> LinkConfig {
        LinkConfig {
            p_t: 1.0,
            m_antennas: m,
            n_elements: n,
            sigma2_n: 1e-11,
            zeta: 0.0,
            sigma2_e: 0.0,
            gamma_th: 10.0,
            variant,
        }
    }

    #[test]
    fn los_limit_envelope() {
        let mut rng = trial_rng(3, 0);
        for _ in 0..1000 {
            assert!((sample_rician_envelope(1e9, &mut rng) - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn stable_platform_gain_is_element_gain() {
        let g = SystemGeometry::reference();
        let cfg = ArrayConfig::new(8, 15, 1).unwrap();
        let q_e = element_gain_exact(g.t_angles.theta, g.r_angles.theta);
        let mut rng = trial_rng(1, 1);
        for mode in [PatternMode::Exact, PatternMode::TreatedElementGain] {
            for _ in 0..50 {
                let x = simulate_pattern_gain(&g, &FluctuationModel::stable(), &cfg, mode, &mut rng).unwrap();
                assert!((x - q_e).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn treated_gain_never_exceeds_element_gain() {
        let g = SystemGeometry::reference();
        let cfg = ArrayConfig::new(8, 15, 1).unwrap();
        let q_e = element_gain_exact(g.t_angles.theta, g.r_angles.theta);
        let model = FluctuationModel::from_degrees(0.0, 0.0, 3.0, 3.0).unwrap();
        let xs = sample_pattern_gains(&g, &model, &cfg, PatternMode::TreatedElementGain, 20_000, 5, Execution::Parallel)
            .unwrap();
        assert!(xs.iter().all(|&x| x <= q_e && x >= 0.0));
    }

    #[test]
    fn zero_threshold_has_no_outage() {
        let g = SystemGeometry::reference();
        let cfg = ArrayConfig::new(4, 15, 1).unwrap();
        let mut l = link(16, 16, LinkVariant::Passive);
        l.gamma_th = 0.0;
        let est = simulate_outage(&g, &FluctuationModel::from_degrees(0.0, 0.0, 1.0, 1.0).unwrap(), &cfg,
            &reference_params(), &l, &SimConfig::new(5000, 1)).unwrap();
        assert_eq!(est.events, 0);
        assert_eq!(est.point, 0.0);
    }

    #[test]
    fn stable_high_power_has_no_outage() {
        let g = SystemGeometry::reference();
        let cfg = ArrayConfig::new(8, 15, 1).unwrap();
        let mut l = link(64, 16, LinkVariant::Passive);
        l.p_t = 100.0;
        let trials = 20_000;
        let est = simulate_outage(&g, &FluctuationModel::stable(), &cfg, &reference_params(), &l, &SimConfig::new(trials, 2))
            .unwrap();
        assert_eq!(est.point, 0.0);
        assert!(est.ci_high <= 3.7 / trials as f64);
    }

    #[test]
    fn full_matrix_requires_stable_platform() {
        let g = SystemGeometry::reference();
        let model = FluctuationModel::from_degrees(0.0, 0.0, 1.0, 1.0).unwrap();
        let mut rng = trial_rng(0, 0);
        let r = full_matrix_snr_check(&g, &model, &reference_params(), &link(16, 4, LinkVariant::Passive), &mut rng);
        assert!(matches!(r, Err(Error::Usage(_))));
        let cfg = ArrayConfig::new(4, 15, 1).unwrap();
        let sim = SimConfig { mode: SimMode::FullMatrix, ..SimConfig::new(10, 0) };
        assert!(simulate_outage(&g, &model, &cfg, &reference_params(), &link(16, 4, LinkVariant::Passive), &sim).is_err());
    }

    #[test]
    fn full_matrix_matches_reduced() {
        let g = SystemGeometry::reference();
        let active = LinkVariant::Active { sigma2_f: 1e-10, p_f: 0.05 };
        for variant in [LinkVariant::Passive, active] {
            let mut rng = trial_rng(11, 0);
            for _ in 0..20 {
                let (full, reduced) =
                    full_matrix_snr_check(&g, &FluctuationModel::stable(), &reference_params(), &link(16, 4, variant), &mut rng)
                        .unwrap();
                assert!(((full - reduced) / reduced).abs() < 1e-9, "{variant:?}: {full} vs {reduced}");
            }
        }
    }

    #[test]
    fn scalar_chain() {
        let g = SystemGeometry::reference();
        let p = reference_params();
        let l = link(1, 1, LinkVariant::Passive);
        let draw = ChannelDraw {
            big_h: vec![Complex64::new(0.3, -1.1)],
            small_h: vec![Complex64::new(-0.7, 0.2)],
        };
        let (full, reduced) = full_and_reduced_snr(&g, &p, &l, &draw);
        let q_e = element_gain_exact(g.t_angles.theta, g.r_angles.theta);
        let want = l.p_t * p.beta0() * p.beta1() * q_e * draw.big_h[0].norm_sqr() * draw.small_h[0].norm_sqr() / l.sigma2_n;
        assert!((full / want - 1.0).abs() < 1e-12);
        assert!((reduced / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn active_design_spends_the_whole_budget() {
        let p = reference_params();
        let l = link(49, 16, LinkVariant::Active { sigma2_f: 1e-10, p_f: 0.05 });
        let mut rng = trial_rng(4, 4);
        for _ in 0..100 {
            let d = draw_trial(&SystemGeometry::reference(), &FluctuationModel::from_degrees(0.0, 0.0, 1.0, 1.0).unwrap(),
                7, &p, PatternMode::Exact, &mut rng).unwrap();
            let a2 = amplification_squared(&l, &p, d.pattern.e_t, d.power_bs);
            let spent = l.p_t * a2 * p.beta0() * d.pattern.e_t * d.power_bs + 49.0 * a2 * 1e-10;
            assert!((spent - 0.05).abs() <= 1e-9 * 0.05);
        }
    }

    #[test]
    fn estimates_do_not_depend_on_scheduling() {
        let g = SystemGeometry::reference();
        let cfg = ArrayConfig::new(4, 15, 1).unwrap();
        let model = FluctuationModel::from_degrees(0.0, 0.0, 1.0, 1.0).unwrap();
        let mut l = link(16, 16, LinkVariant::Passive);
        l.p_t = 10.0;
        let seq = SimConfig::new(20_000, 77).with_execution(Execution::Sequential);
        let par = SimConfig::new(20_000, 77).with_execution(Execution::Parallel);
        let a = simulate_outage(&g, &model, &cfg, &reference_params(), &l, &seq).unwrap();
        let b = simulate_outage(&g, &model, &cfg, &reference_params(), &l, &par).unwrap();
        assert_eq!(a, b);
        assert!(a.events > 0 && a.events < a.trials);
    }

    #[test]
    fn unit_second_moment_small_sample() {
        let mut rng = trial_rng(8, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| sample_rician_envelope(1.0, &mut rng).powi(2)).collect();
        let (m, _) = mean_variance(&xs);
        assert!((m - 1.0).abs() < 0.02);
    }
}
