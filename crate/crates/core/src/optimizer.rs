//! Outage-minimizing element count.
//!
//! Admissible arrays are square, so the search runs over `N = n^2` for
//! `n = 1..=floor(sqrt(n_max))`. The profile is not convex (side-lobe
//! structure), and each point is one cheap closed-form evaluation, so the
//! search is exhaustive.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exec::{map_range, Execution};
use crate::outage::{Method, TailMode};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub n_opt: usize,
    pub op_min: f64,
    /// `(N, outage)` for every admissible `N`, ascending.
    pub profile: Vec<(usize, f64)>,
}

pub fn optimal_elements(
    scenario: &Scenario,
    n_max: usize,
    method: Method,
    tail_mode: TailMode,
    execution: Execution,
) -> Result<OptimizationResult> {
    if n_max == 0 {
        return Err(invalid("n_max", "must be at least 1"));
    }
    let sides = (n_max as f64).sqrt().floor() as u64;
    let sides = if (sides + 1) * (sides + 1) <= n_max as u64 { sides + 1 } else { sides };
    let points = map_range(execution, sides, |k| {
        let s = scenario.with_elements(k as usize + 1);
        s.outage(method, tail_mode).map(|r| (s.link.n_elements, r.probability))
    });
    let profile: Vec<(usize, f64)> = points.into_iter().collect::<Result<_>>()?;
    // First strict minimum, so ties go to the smaller array.
    let (n_opt, op_min) = profile
        .iter()
        .copied()
        .fold((0usize, f64::INFINITY), |best, p| if p.1 < best.1 { p } else { best });
    Ok(OptimizationResult {
        n_opt,
        op_min,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluctuation::FluctuationModel;

    #[test]
    fn stable_platform_outage_only_falls() {
        // Without jitter the full beam is always available, so outage is
        // non-increasing in N; it underflows to 0 and ties go to the smaller array.
        let s = Scenario::reference_passive().with_fluctuation(FluctuationModel::stable());
        let r = optimal_elements(&s, 400, Method::PassiveClt, TailMode::PaperExact, Execution::Sequential).unwrap();
        assert_eq!(r.profile.len(), 20);
        assert!(r.profile.windows(2).all(|w| w[1].1 <= w[0].1));
        let first_zero = r.profile.iter().find(|p| p.1 == 0.0).unwrap().0;
        assert_eq!((r.n_opt, r.op_min), (first_zero, 0.0));
    }

    #[test]
    fn stable_platform_prefers_the_largest_array() {
        // At 20 dBm no profile point underflows, so the decrease is strict.
        let s = Scenario::reference_passive()
            .with_fluctuation(FluctuationModel::stable())
            .with_pt_dbm(20.0);
        let r = optimal_elements(&s, 400, Method::PassiveClt, TailMode::PaperExact, Execution::Parallel).unwrap();
        assert_eq!(r.n_opt, 400);
        assert!(r.op_min > 0.0);
    }

    #[test]
    fn result_is_the_profile_minimum() {
        let s = Scenario::reference_passive();
        let r = optimal_elements(&s, 300, Method::PassiveGamma, TailMode::PaperExact, Execution::Parallel).unwrap();
        assert_eq!(r.profile.len(), 17);
        assert!(r.profile.iter().all(|&(n, op)| op >= r.op_min && (n as f64).sqrt().fract() == 0.0));
        let first_min = r.profile.iter().find(|p| p.1 == r.op_min).unwrap();
        assert_eq!(first_min.0, r.n_opt);
    }

    #[test]
    fn reference_passive_optimum_is_near_144() {
        let s = Scenario::reference_passive();
        let r = optimal_elements(&s, 400, Method::PassiveClt, TailMode::PaperExact, Execution::Parallel).unwrap();
        assert!((121..=169).contains(&r.n_opt), "n_opt = {}", r.n_opt);
    }

    #[test]
    fn reference_active_optimum_is_near_49() {
        let s = Scenario::reference_active();
        let r = optimal_elements(&s, 400, Method::ActiveClt, TailMode::PaperExact, Execution::Parallel).unwrap();
        assert!((36..=64).contains(&r.n_opt), "n_opt = {}", r.n_opt);
    }

    #[test]
    fn zero_bound_is_rejected() {
        let s = Scenario::reference_passive();
        assert!(optimal_elements(&s, 0, Method::PassiveClt, TailMode::PaperExact, Execution::Sequential).is_err());
    }
}
