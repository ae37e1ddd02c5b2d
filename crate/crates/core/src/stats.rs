//! Small statistics toolkit for comparing closed forms with simulation.

use crate::specialfn::q;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `events` out of `trials`.
///
/// When no event (or every trial) is observed the open side uses the
/// rule of three, `3 / trials`.
pub fn wilson_interval(events: u64, trials: u64) -> (f64, f64) {
    assert!(trials > 0, "wilson_interval needs at least one trial");
    let n = trials as f64;
    if events == 0 {
        return (0.0, (3.0 / n).min(1.0));
    }
    if events == trials {
        return ((1.0 - 3.0 / n).max(0.0), 1.0);
    }
    let p = events as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

/// Fraction of `sorted` samples that are `<= x`.
pub fn empirical_cdf(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&s| s <= x) as f64 / sorted.len() as f64
}

/// Sup distance between a discrete CDF and the empirical CDF of `samples`.
///
/// `atoms` are `(value, mass)` pairs sorted by value with distinct values.
/// Both functions are right-continuous steps, so the supremum is attained at
/// a jump of either one; both one-sided limits are checked there.
pub fn kolmogorov_distance_discrete(atoms: &[(f64, f64)], samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut points: Vec<f64> = atoms.iter().map(|a| a.0).collect();
    points.extend(samples.iter().copied());
    points.sort_by(f64::total_cmp);
    points.dedup();

    let (mut ai, mut si) = (0usize, 0usize);
    let (mut fa, mut fs) = (0.0f64, 0.0f64);
    let mut worst = 0.0f64;
    for &x in &points {
        // left limits
        worst = worst.max((fa - fs).abs());
        while ai < atoms.len() && atoms[ai].0 <= x {
            fa += atoms[ai].1;
            ai += 1;
        }
        while si < samples.len() && samples[si] <= x {
            si += 1;
        }
        fs = si as f64 / n;
        worst = worst.max((fa - fs).abs());
    }
    worst
}

/// Kolmogorov distance between samples and `N(mu, sigma^2)`.
pub fn kolmogorov_distance_normal(samples: &mut [f64], mu: f64, sigma: f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = 1.0 - q((x - mu) / sigma);
        worst = worst.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    worst
}

/// Sample mean and unbiased variance.
pub fn mean_variance(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(0, 1000);
        assert_eq!((lo, hi), (0.0, 0.003));
        let (lo, hi) = wilson_interval(1000, 1000);
        assert_eq!((lo, hi), (0.997, 1.0));
        let (lo, hi) = wilson_interval(50, 1000);
        assert!(lo < 0.05 && hi > 0.05);
        assert!((lo - 0.038_130_262_392_748_8).abs() < 1e-12);
        assert!((hi - 0.065_313_820_244_250_8).abs() < 1e-12);
    }

    #[test]
    fn discrete_distance_handles_ties_and_limits() {
        let atoms = [(0.0, 0.5), (1.0, 0.5)];
        let mut same = vec![0.0, 0.0, 1.0, 1.0];
        assert_eq!(kolmogorov_distance_discrete(&atoms, &mut same), 0.0);
        let mut shifted = vec![0.5, 0.5, 1.0, 1.0];
        assert_eq!(kolmogorov_distance_discrete(&atoms, &mut shifted), 0.5);
        let mut low = vec![-1.0, -1.0, -1.0, -1.0];
        assert_eq!(kolmogorov_distance_discrete(&atoms, &mut low), 1.0);
    }

    #[test]
    fn normal_distance_of_quantiles_is_small() {
        let n = 1000;
        let mut xs: Vec<f64> = (0..n)
            .map(|i| {
                let p = (i as f64 + 0.5) / n as f64;
                // bisection on the tail function
                let (mut a, mut b) = (-10.0, 10.0);
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if 1.0 - q(m) < p { a = m } else { b = m }
                }
                0.5 * (a + b)
            })
            .collect();
        assert!(kolmogorov_distance_normal(&mut xs, 0.0, 1.0) <= 0.5 / n as f64 + 1e-9);
    }

    #[test]
    fn empirical_cdf_is_right_continuous() {
        let s = [1.0, 2.0, 2.0, 3.0];
        assert_eq!(empirical_cdf(&s, 2.0), 0.75);
        assert_eq!(empirical_cdf(&s, 1.999), 0.25);
        assert_eq!(empirical_cdf(&s, 0.0), 0.0);
    }
}
