//! Acceptance checks: closed forms against the simulation oracle and the
//! published qualitative behaviour.
//!
//! Each criterion expands into named sub-checks. Failures are reported in
//! the returned [`CriterionReport`]s rather than raised, so a caller can
//! always emit a complete report.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exec::{fold_range, Execution};
use crate::fluctuation::FluctuationModel;
use crate::montecarlo::{
    full_matrix_snr_check, sample_pattern_gains, sample_rician_envelope, OutageEstimate, PatternMode, SimConfig,
};
use crate::optimizer::optimal_elements;
use crate::outage::{Method, TailMode};
use crate::rng::trial_rng;
use crate::scenario::Scenario;
use crate::specialfn::{laguerre_half, laguerre_half_series, q_function, HalfOrder};
use crate::stats::kolmogorov_distance_discrete;
use crate::units::{dbm_to_watts, watts_to_dbm};

/// Identifiers accepted by [`run_criteria`].
pub const CRITERIA: [&str; 10] = ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10"];

/// Outage below this is too rare for a relative comparison with simulation.
pub const OP_RELEVANCE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub expected: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CriterionReport {
    fn at_most(criterion: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            criterion: criterion.into(),
            expected: format!("<= {}", fmt_bound(tolerance)),
            measured,
            tolerance,
            pass: measured <= tolerance,
        }
    }

    fn above(criterion: &str, measured: f64, bound: f64) -> Self {
        Self {
            criterion: criterion.into(),
            expected: format!("> {}", fmt_bound(bound)),
            measured,
            tolerance: bound,
            pass: measured > bound,
        }
    }

    fn below(criterion: &str, measured: f64, bound: f64) -> Self {
        Self {
            criterion: criterion.into(),
            expected: format!("< {}", fmt_bound(bound)),
            measured,
            tolerance: bound,
            pass: measured < bound,
        }
    }

    fn within_one_index(criterion: &str, measured: usize, target: usize) -> Self {
        let offset = square_index(measured).abs_diff(square_index(target));
        let r = square_index(target);
        Self {
            criterion: criterion.into(),
            expected: format!("{} | {} | {}", (r - 1) * (r - 1), target, (r + 1) * (r + 1)),
            measured: measured as f64,
            tolerance: 1.0,
            pass: offset <= 1,
        }
    }

    fn errored(criterion: &str, err: &crate::Error) -> Self {
        Self {
            criterion: criterion.into(),
            expected: format!("evaluation error: {err}"),
            measured: f64::NAN,
            tolerance: f64::NAN,
            pass: false,
        }
    }

    /// One-line human summary.
    pub fn line(&self) -> String {
        format!(
            "{} {}: measured {:.9e}, expected {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.criterion,
            self.measured,
            self.expected
        )
    }
}

fn fmt_bound(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-3 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn square_index(n: usize) -> usize {
    (n as f64).sqrt().round() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    /// Monte Carlo trials per outage point and per moment check.
    pub trials: u64,
    /// Pattern-gain draws per CDF comparison.
    pub pattern_samples: u64,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            pattern_samples: 1_000_000,
            seed: 20_240_601,
            execution: Execution::default(),
        }
    }
}

impl ValidationOptions {
    fn sim(&self, seed_offset: u64) -> SimConfig {
        SimConfig::new(self.trials, self.seed.wrapping_add(seed_offset)).with_execution(self.execution)
    }
}

/// Runs the selected criteria in order; unknown identifiers are reported as failures.
pub fn run_criteria(ids: &[&str], opts: &ValidationOptions) -> Vec<CriterionReport> {
    let mut passive: Option<Result<PassiveSweep>> = None;
    let mut out = Vec::new();
    for &id in ids {
        let reports = match id {
            "C1" => pattern_cdf_fidelity(opts),
            "C2" | "C3" => {
                let sweep = passive.get_or_insert_with(|| passive_sweep(opts));
                match sweep {
                    Ok(s) if id == "C2" => Ok(passive_vs_oracle(s)),
                    Ok(s) => Ok(crossover(s)),
                    Err(e) => Err(e.clone()),
                }
            }
            "C4" => active_vs_oracle(opts),
            "C5" => optimal_count(opts.execution),
            "C6" => fluctuation_floor(),
            "C7" => active_degradation(),
            "C8" => algebraic_equivalence(opts),
            "C9" => special_function_kernel(opts),
            "C10" => imperfect_csi_floor(),
            other => Err(invalid("criterion", format!("unknown identifier {other:?}"))),
        };
        match reports {
            Ok(r) => out.extend(r),
            Err(e) => out.push(CriterionReport::errored(id, &e)),
        }
    }
    out
}

pub fn run_all(opts: &ValidationOptions) -> Vec<CriterionReport> {
    run_criteria(&CRITERIA, opts)
}

fn jitter_one_degree() -> FluctuationModel {
    FluctuationModel::from_degrees(0.0, 0.0, 1.0, 1.0).expect("valid")
}

/// Kolmogorov distance between the discrete pattern law and exact draws.
pub fn pattern_cdf_distance(scenario: &Scenario, samples: &mut [f64]) -> Result<f64> {
    let support = scenario.pattern()?.support();
    Ok(kolmogorov_distance_discrete(&support, samples))
}

/// Pattern-gain law against exact-chain simulation.
pub fn pattern_cdf_fidelity(opts: &ValidationOptions) -> Result<Vec<CriterionReport>> {
    let base = Scenario::reference_passive().with_fluctuation(jitter_one_degree());
    let mut reports = Vec::new();
    let mut slowest = Duration::ZERO;

    type Check = fn(&str, f64) -> CriterionReport;
    // (name, sectors, lobes, check)
    type Case = (&'static str, usize, usize, Check);
    let groups: [(usize, &[Case]); 2] = [
        (
            8,
            &[
                ("C1.n64_d15_l1", 15, 1, |c, m| CriterionReport::at_most(c, m, 0.05)),
                ("C1.n64_d60_l1", 60, 1, |c, m| CriterionReport::at_most(c, m, 0.02)),
            ],
        ),
        (
            32,
            &[
                ("C1.n1024_d60_l1_exceeds", 60, 1, |c, m| CriterionReport::above(c, m, 0.05)),
                ("C1.n1024_d60_l2", 60, 2, |c, m| CriterionReport::at_most(c, m, 0.03)),
            ],
        ),
    ];
    for (n_side, cases) in groups {
        let s = base.with_elements(n_side);
        let started = Instant::now();
        let samples = sample_pattern_gains(
            &s.geometry,
            &s.fluctuation,
            &s.array,
            PatternMode::Exact,
            opts.pattern_samples,
            opts.seed,
            opts.execution,
        )?;
        let sampling = started.elapsed();
        for &(name, sectors, lobes, check) in cases {
            let t = Instant::now();
            let mut work = samples.clone();
            let d = pattern_cdf_distance(&s.with_resolution(sectors, lobes)?, &mut work)?;
            slowest = slowest.max(sampling + t.elapsed());
            reports.push(check(name, d));
        }
    }
    reports.push(CriterionReport::at_most("C1.runtime_s", slowest.as_secs_f64(), 120.0));
    Ok(reports)
}

/// One closed-form/simulation comparison point of the passive sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n_elements: usize,
    pub p_t_dbm: f64,
    pub op_clt: f64,
    pub op_gamma: f64,
    pub mc: OutageEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassiveSweep {
    pub points: Vec<SweepPoint>,
    pub elapsed_s: f64,
}

impl PassiveSweep {
    fn at(&self, n: usize, p_t_dbm: f64) -> &SweepPoint {
        self.points
            .iter()
            .find(|p| p.n_elements == n && p.p_t_dbm == p_t_dbm)
            .expect("point is part of the sweep")
    }
}

/// Sweep resolution: the finest analysed sector count, main lobe only.
pub const PASSIVE_SWEEP_SECTORS: usize = 60;
pub const PASSIVE_SWEEP_POWERS_DBM: [f64; 5] = [5.0, 10.0, 20.0, 30.0, 40.0];

/// Passive reference link with 1 degree jitter at N = 64 and 256.
pub fn passive_sweep(opts: &ValidationOptions) -> Result<PassiveSweep> {
    let started = Instant::now();
    let base = Scenario::reference_passive()
        .with_fluctuation(jitter_one_degree())
        .with_resolution(PASSIVE_SWEEP_SECTORS, 1)?;
    let powers: Vec<f64> = PASSIVE_SWEEP_POWERS_DBM.iter().map(|&p| dbm_to_watts(p)).collect();
    let mut points = Vec::new();
    for (k, n_side) in [8usize, 16].into_iter().enumerate() {
        let s = base.with_elements(n_side);
        let mc = s.simulate_powers(&powers, &opts.sim(k as u64))?;
        for (&p_t, est) in powers.iter().zip(mc) {
            let at = s.with_pt(p_t);
            points.push(SweepPoint {
                n_elements: s.link.n_elements,
                p_t_dbm: watts_to_dbm(p_t).round(),
                op_clt: at.outage(Method::PassiveClt, TailMode::TailAsOutage)?.probability,
                op_gamma: at.outage(Method::PassiveGamma, TailMode::TailAsOutage)?.probability,
                mc: est,
            });
        }
    }
    Ok(PassiveSweep {
        points,
        elapsed_s: started.elapsed().as_secs_f64(),
    })
}

fn relative_error(estimate: f64, reference: f64) -> f64 {
    (estimate - reference).abs() / reference
}

/// Worst relative error over the points where the oracle is informative;
/// zero when no point qualifies.
fn worst_relative<'a>(pairs: impl Iterator<Item = (f64, &'a OutageEstimate)>) -> f64 {
    pairs
        .filter(|(_, mc)| mc.point >= OP_RELEVANCE_FLOOR)
        .map(|(closed, mc)| relative_error(closed, mc.point))
        .fold(0.0, f64::max)
}

pub fn passive_vs_oracle(sweep: &PassiveSweep) -> Vec<CriterionReport> {
    let checked = |p: &&SweepPoint| p.p_t_dbm >= 10.0;
    let clt = worst_relative(sweep.points.iter().filter(checked).map(|p| (p.op_clt, &p.mc)));
    let gamma = worst_relative(sweep.points.iter().filter(checked).map(|p| (p.op_gamma, &p.mc)));
    let agreement = sweep
        .points
        .iter()
        .filter(checked)
        .filter(|p| p.n_elements == 256 && p.mc.point >= OP_RELEVANCE_FLOOR)
        .map(|p| (p.op_clt - p.op_gamma).abs() / p.op_clt.max(p.op_gamma))
        .fold(0.0, f64::max);
    vec![
        CriterionReport::at_most("C2.clt_relative_error", clt, 0.25),
        CriterionReport::at_most("C2.gamma_relative_error", gamma, 0.25),
        CriterionReport::at_most("C2.clt_vs_gamma_n256", agreement, 0.10),
        CriterionReport::at_most("C2.runtime_s", sweep.elapsed_s, 600.0),
    ]
}

/// Two outage values closer than this (relative) are not ordered.
pub const ORDER_RESOLUTION: f64 = 1e-9;

/// Ratios resolvably below one confirm the stated ordering.
pub fn crossover(sweep: &PassiveSweep) -> Vec<CriterionReport> {
    let low = (sweep.at(256, 5.0), sweep.at(64, 5.0));
    let high = (sweep.at(64, 40.0), sweep.at(256, 40.0));
    let bound = 1.0 - ORDER_RESOLUTION;
    vec![
        CriterionReport::below("C3.analytic_5dbm_n256_over_n64", low.0.op_clt / low.1.op_clt, bound),
        CriterionReport::below("C3.analytic_40dbm_n64_over_n256", high.0.op_clt / high.1.op_clt, bound),
        CriterionReport::below("C3.montecarlo_5dbm_n256_over_n64", low.0.mc.point / low.1.mc.point, bound),
        CriterionReport::below("C3.montecarlo_40dbm_n64_over_n256", high.0.mc.point / high.1.mc.point, bound),
    ]
}

pub const ACTIVE_SWEEP_POWERS_DBM: [f64; 3] = [-10.0, 0.0, 10.0];

pub fn active_vs_oracle(opts: &ValidationOptions) -> Result<Vec<CriterionReport>> {
    let base = Scenario::reference_active()
        .with_fluctuation(jitter_one_degree())
        .with_resolution(PASSIVE_SWEEP_SECTORS, 1)?;
    let powers: Vec<f64> = ACTIVE_SWEEP_POWERS_DBM.iter().map(|&p| dbm_to_watts(p)).collect();
    let mut pairs = Vec::new();
    for (k, n_side) in [7usize, 8].into_iter().enumerate() {
        let s = base.with_elements(n_side);
        let mc = s.simulate_powers(&powers, &opts.sim(100 + k as u64))?;
        for (&p_t, est) in powers.iter().zip(mc) {
            let closed = s.with_pt(p_t).outage(Method::ActiveClt, TailMode::TailAsOutage)?.probability;
            pairs.push((closed, est));
        }
    }
    let worst = worst_relative(pairs.iter().map(|(c, e)| (*c, e)));
    let informative = pairs.iter().filter(|(_, e)| e.point >= OP_RELEVANCE_FLOOR).count();
    Ok(vec![
        CriterionReport::at_most("C4.active_relative_error", worst, 0.30),
        CriterionReport::above("C4.informative_points", informative as f64, 0.0),
    ])
}

pub fn optimal_count(execution: Execution) -> Result<Vec<CriterionReport>> {
    let started = Instant::now();
    let n_max = 400;
    let n_opt = |s: &Scenario| -> Result<usize> {
        Ok(optimal_elements(s, n_max, s.default_method(), TailMode::PaperExact, execution)?.n_opt)
    };
    let passive = Scenario::reference_passive().with_fluctuation(jitter_one_degree());
    let active = Scenario::reference_active().with_fluctuation(jitter_one_degree());
    let sigma2_e = dbm_to_watts(-80.0);

    let mut reports = Vec::new();
    for (label, s, target) in [("passive", passive, 144), ("active", active, 49)] {
        let base = n_opt(&s)?;
        let d30 = n_opt(&s.with_resolution(30, 1)?)?;
        let imperfect = n_opt(&s.with_csi_error(0.1, sigma2_e))?;
        reports.push(CriterionReport::within_one_index(&format!("C5.{label}_n_opt"), base, target));
        reports.push(CriterionReport::within_one_index(&format!("C5.{label}_d30_matches_d15"), d30, base));
        reports.push(CriterionReport::within_one_index(&format!("C5.{label}_zeta_invariant"), imperfect, base));
    }
    reports.push(CriterionReport::at_most("C5.runtime_s", started.elapsed().as_secs_f64(), 60.0));
    Ok(reports)
}

/// Passive outage floor under jitter and its absence without it.
pub fn fluctuation_floor() -> Result<Vec<CriterionReport>> {
    let base = Scenario::reference_passive().with_elements(16);
    let op = |s: &Scenario, dbm: f64| -> Result<f64> {
        Ok(s.with_pt_dbm(dbm).outage(Method::PassiveClt, TailMode::TailAsOutage)?.probability)
    };
    let vib = base.with_fluctuation(jitter_one_degree());
    let (v50, v60) = (op(&vib, 50.0)?, op(&vib, 60.0)?);
    let calm = base.with_fluctuation(FluctuationModel::stable());
    let (c50, c60) = (op(&calm, 50.0)?, op(&calm, 60.0)?);
    let bound = (c50 / 100.0).max(1e-8);
    Ok(vec![
        CriterionReport::at_most("C6.floor_relative_change", relative_error(v60, v50), 0.05),
        CriterionReport {
            criterion: "C6.stable_op_at_60dbm".into(),
            expected: format!("<= max(OP(50 dBm) / 100, 1e-8) = {bound:e}"),
            measured: c60,
            tolerance: bound,
            pass: c60 <= bound,
        },
    ])
}

/// Smallest ratio between consecutive outage values along a growing array.
pub fn active_degradation() -> Result<Vec<CriterionReport>> {
    let s = Scenario::reference_active().with_fluctuation(jitter_one_degree());
    let ops = [7usize, 20, 50]
        .iter()
        .map(|&n| Ok(s.with_elements(n).outage(Method::ActiveClt, TailMode::TailAsOutage)?.probability))
        .collect::<Result<Vec<f64>>>()?;
    let min_ratio = ops.windows(2).map(|w| w[1] / w[0]).fold(f64::INFINITY, f64::min);
    Ok(vec![CriterionReport::above("C7.min_consecutive_ratio", min_ratio, 1.0)])
}

pub const EQUIVALENCE_DRAWS: u64 = 100;

pub fn algebraic_equivalence(opts: &ValidationOptions) -> Result<Vec<CriterionReport>> {
    let mut reports = Vec::new();
    for (label, s) in [("passive", Scenario::reference_passive()), ("active", Scenario::reference_active())] {
        let s = s.with_fluctuation(FluctuationModel::stable());
        let mut worst = 0.0f64;
        for i in 0..EQUIVALENCE_DRAWS {
            let mut rng = trial_rng(opts.seed, i);
            let (full, reduced) = full_matrix_snr_check(&s.geometry, &s.fluctuation, &s.channel, &s.link, &mut rng)?;
            worst = worst.max(relative_error(full, reduced));
        }
        reports.push(CriterionReport::at_most(&format!("C8.{label}_relative_gap"), worst, 1e-9));
    }
    Ok(reports)
}

pub fn special_function_kernel(opts: &ValidationOptions) -> Result<Vec<CriterionReport>> {
    let mut laguerre = 0.0f64;
    for k in 0..=800 {
        let x = -0.05 * k as f64;
        for order in [HalfOrder::OneHalf, HalfOrder::ThreeHalves] {
            let closed = laguerre_half(order, x)?;
            let series = laguerre_half_series(order, x)?;
            laguerre = laguerre.max(relative_error(closed, series));
        }
    }
    let mut symmetry = 0.0f64;
    for k in -1000..=1000 {
        let x = 0.01 * k as f64;
        symmetry = symmetry.max((q_function(x)? + q_function(-x)? - 1.0).abs());
    }
    let mut moment = 0.0f64;
    for (j, k) in [0.0, 1.0, 10.0].into_iter().enumerate() {
        let seed = opts.seed.wrapping_add(1000 + j as u64);
        let sum = fold_range(
            opts.execution,
            opts.trials,
            || 0.0f64,
            |acc, i| {
                let a = sample_rician_envelope(k, &mut trial_rng(seed, i));
                acc + a * a
            },
            |a, b| a + b,
        );
        moment = moment.max((sum / opts.trials as f64 - 1.0).abs());
    }
    Ok(vec![
        CriterionReport::at_most("C9.laguerre_dual_path", laguerre, 1e-8),
        CriterionReport::at_most("C9.q_symmetry", symmetry, 1e-12),
        CriterionReport::at_most("C9.rician_second_moment", moment, 0.005),
    ])
}

/// Any estimation error caps the effective SNR, so outage settles at high
/// power. Checked for both variants, with and without jitter.
pub fn imperfect_csi_floor() -> Result<Vec<CriterionReport>> {
    let mut worst = 0.0f64;
    for sigma2_e_dbm in [-90.0, -80.0, -70.0, -60.0] {
        for sigma_deg in [0.0, 1.0] {
            let model = FluctuationModel::from_degrees(0.0, 0.0, sigma_deg, sigma_deg)?;
            for s in [Scenario::reference_passive(), Scenario::reference_active()] {
                let s = s.with_fluctuation(model).with_csi_error(0.1, dbm_to_watts(sigma2_e_dbm));
                let method = s.default_method();
                let at = |dbm: f64| -> Result<f64> {
                    Ok(s.with_pt_dbm(dbm).outage(method, TailMode::TailAsOutage)?.probability)
                };
                let (lo, hi) = (at(100.0)?, at(120.0)?);
                if lo > 0.0 {
                    worst = worst.max(relative_error(hi, lo));
                } else if hi > 0.0 {
                    worst = f64::INFINITY;
                }
            }
        }
    }
    Ok(vec![CriterionReport::at_most("C10.floor_relative_change_100_120dbm", worst, 0.05)])
}
