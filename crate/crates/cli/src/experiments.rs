//! Experiment runners. Each turns a config into one output table.

use anyhow::{Context, Result};
use umi_core::exec::Execution;
use umi_core::fluctuation::FluctuationModel;
use umi_core::montecarlo::{sample_pattern_gains, PatternMode};
use umi_core::pattern::pattern_cdf;
use umi_core::stats::empirical_cdf;
use umi_core::units::dbm_to_watts;
use umi_core::validation::{run_criteria, CriterionReport, ValidationOptions};
use umi_core::{optimal_elements, Method, TailMode};

use crate::config::ExperimentConfig;
use crate::table::{Cell, Table};

/// Points on the log-spaced gain grid of a pattern CDF.
pub const CDF_GRID_POINTS: usize = 256;
/// Lowest grid gain relative to the nominal element gain.
pub const CDF_GRID_FLOOR: f64 = 1e-4;

fn method_name(m: Method) -> &'static str {
    match m {
        Method::PassiveClt => "passive-clt",
        Method::PassiveGamma => "passive-gamma",
        Method::ActiveClt => "active-clt",
        Method::MonteCarlo => "monte-carlo",
    }
}

fn tail_name(t: TailMode) -> &'static str {
    match t {
        TailMode::PaperExact => "paper-exact",
        TailMode::TailAsOutage => "tail-as-outage",
    }
}

// Endpoints are exact; exp(ln(hi)) can land one ulp below a CDF jump at hi.
fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut grid: Vec<f64> = (0..points)
        .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
        .collect();
    grid[0] = lo;
    grid[points - 1] = hi;
    grid
}

/// Analytical and simulated pattern-gain CDFs for every array size and
/// sectoral resolution in the config.
pub fn pattern_cdf_table(cfg: &ExperimentConfig, execution: Execution) -> Result<Table> {
    let mut table = Table::new(&["gain", "cdf_analytical", "cdf_montecarlo", "D", "l", "N"]);
    let base = &cfg.scenario;
    for &n_side in &cfg.n_sides {
        let sized = base.with_elements(n_side);
        let samples = if cfg.sim.trials > 0 {
            let mut s = sample_pattern_gains(
                &sized.geometry,
                &sized.fluctuation,
                &sized.array,
                PatternMode::Exact,
                cfg.sim.trials,
                cfg.sim.seed,
                execution,
            )?;
            s.sort_by(f64::total_cmp);
            Some(s)
        } else {
            None
        };
        let q_e = sized.element_gain();
        let top = samples.as_ref().and_then(|s| s.last().copied()).unwrap_or(q_e).max(q_e);
        let grid = log_grid(q_e * CDF_GRID_FLOOR, top, CDF_GRID_POINTS);
        for &d in &cfg.sectors {
            for &l in &cfg.lobes {
                let dist = sized.with_resolution(d, l)?.pattern()?;
                for &g in &grid {
                    let mc = samples.as_ref().map_or(f64::NAN, |s| empirical_cdf(s, g));
                    table.push(vec![
                        g.into(),
                        pattern_cdf(&dist, g).into(),
                        mc.into(),
                        d.into(),
                        l.into(),
                        (n_side * n_side).into(),
                    ]);
                }
            }
        }
    }
    Ok(table)
}

/// Outage against transmit power, closed form next to simulation, for the
/// jittered platform and (optionally) a stable one. Simulation does not
/// depend on the sectoral resolution, so each platform, size and CSI level is
/// simulated once and shared by every `D`.
pub fn outage_sweep_table(cfg: &ExperimentConfig, execution: Execution) -> Result<Table> {
    let mut table = Table::new(&[
        "p_t_dbm",
        "N",
        "zeta",
        "method",
        "tail_mode",
        "op_analytical",
        "op_mc",
        "ci_low",
        "ci_high",
        "platform",
        "D",
    ]);
    let tail_mode = cfg.tail_mode.unwrap_or(TailMode::TailAsOutage);
    let mut platforms = vec![("vib", cfg.scenario.fluctuation)];
    if cfg.no_vib {
        platforms.push(("no-vib", FluctuationModel::stable()));
    }
    let powers: Vec<f64> = cfg.pt_dbm.iter().map(|&p| dbm_to_watts(p)).collect();
    let sim = cfg.sim.with_execution(execution);
    for (platform, fluctuation) in platforms {
        for &n_side in &cfg.n_sides {
            for &zeta in &cfg.zetas {
                let s = cfg
                    .scenario
                    .with_fluctuation(fluctuation)
                    .with_elements(n_side)
                    .with_csi_error(zeta, cfg.sigma2_e);
                let mc: Vec<(f64, f64, f64)> = if sim.trials > 0 {
                    s.simulate_powers(&powers, &sim)
                        .with_context(|| format!("simulating N = {}", n_side * n_side))?
                        .into_iter()
                        .map(|e| (e.point, e.ci_low, e.ci_high))
                        .collect()
                } else {
                    vec![(f64::NAN, f64::NAN, f64::NAN); powers.len()]
                };
                let methods: &[Method] = if s.link.is_active() {
                    &[Method::ActiveClt]
                } else {
                    &[Method::PassiveClt, Method::PassiveGamma]
                };
                for &d in &cfg.sectors {
                    let resolved = s.with_resolution(d, cfg.lobes[0])?;
                    for ((&dbm, &p_t), &(point, lo, hi)) in cfg.pt_dbm.iter().zip(&powers).zip(&mc) {
                        let at = resolved.with_pt(p_t);
                        for &method in methods {
                            let op = at.outage(method, tail_mode)?.probability;
                            table.push(vec![
                                dbm.into(),
                                (n_side * n_side).into(),
                                zeta.into(),
                                method_name(method).into(),
                                tail_name(tail_mode).into(),
                                op.into(),
                                point.into(),
                                lo.into(),
                                hi.into(),
                                platform.into(),
                                d.into(),
                            ]);
                        }
                    }
                }
            }
        }
    }
    Ok(table)
}

/// Outage profile over square arrays up to `opt.n_max`, followed by one
/// `optimum` row per profile.
pub fn optimize_table(cfg: &ExperimentConfig, execution: Execution) -> Result<Table> {
    let mut table = Table::new(&["N", "op", "variant", "zeta", "D", "p_t_dbm", "row"]);
    let tail_mode = cfg.tail_mode.unwrap_or(TailMode::PaperExact);
    for case in &cfg.cases {
        for &d in &cfg.sectors {
            for &zeta in &cfg.zetas {
                let s = case
                    .scenario
                    .with_resolution(d, cfg.lobes[0])?
                    .with_csi_error(zeta, cfg.sigma2_e);
                let r = optimal_elements(&s, cfg.n_max, s.default_method(), tail_mode, execution)?;
                let row = |n: usize, op: f64, kind: &str| -> Vec<Cell> {
                    vec![
                        n.into(),
                        op.into(),
                        case.variant.as_str().into(),
                        zeta.into(),
                        d.into(),
                        case.pt_dbm.into(),
                        kind.into(),
                    ]
                };
                for &(n, op) in &r.profile {
                    table.push(row(n, op, "profile"));
                }
                table.push(row(r.n_opt, r.op_min, "optimum"));
            }
        }
    }
    Ok(table)
}

/// Acceptance checks as a table with the report schema.
pub fn validation_table(reports: &[CriterionReport]) -> Table {
    let mut table = Table::new(&["criterion", "expected", "measured", "tolerance", "pass"]);
    for r in reports {
        table.push(vec![
            r.criterion.as_str().into(),
            r.expected.as_str().into(),
            r.measured.into(),
            r.tolerance.into(),
            r.pass.into(),
        ]);
    }
    table
}

/// Runs the selected criteria with the config's trial count and seed.
pub fn run_validation(cfg: &ExperimentConfig, ids: &[&str], execution: Execution) -> Vec<CriterionReport> {
    let opts = ValidationOptions {
        trials: cfg.sim.trials.max(1),
        pattern_samples: cfg.sim.trials.max(1),
        seed: cfg.sim.seed,
        execution,
    };
    run_criteria(ids, &opts)
}
