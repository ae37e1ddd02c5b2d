//! Array-factor evaluation and the sectoral distribution of the pattern gain.
//!
//! Each axis of the square array contributes a squared Dirichlet kernel in its
//! pattern shift. The sectoral model replaces the kernel's main lobe (and
//! optionally the first side lobe) by a staircase of `D` sectors per lobe, so
//! a Gaussian shift turns into a finite set of gain atoms. The two axes are
//! treated as independent and combined by an outer product.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fluctuation::ShiftStats;
use crate::geometry::LinkAngles;
use crate::specialfn::gaussian_interval;

/// Square half-wavelength array and the resolution of its sectoral model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayConfig {
    /// Elements per side.
    pub n_side: usize,
    /// Sectors per lobe.
    pub sectors: usize,
    /// Lobes modeled per axis: 1 (main lobe) or 2 (plus first side lobe).
    pub lobes: usize,
}

impl ArrayConfig {
    pub fn new(n_side: usize, sectors: usize, lobes: usize) -> Result<Self> {
        if n_side == 0 {
            return Err(invalid("n_side", "array needs at least one element"));
        }
        if sectors < 2 {
            return Err(invalid("sectors", format!("{sectors} < 2")));
        }
        if !(1..=2).contains(&lobes) {
            return Err(invalid("lobes", format!("{lobes} is not 1 or 2")));
        }
        Ok(Self {
            n_side,
            sectors,
            lobes,
        })
    }

    /// Builds from a total element count, which must be a perfect square.
    pub fn from_elements(n_elements: usize, sectors: usize, lobes: usize) -> Result<Self> {
        let side = perfect_square_root(n_elements)
            .ok_or_else(|| invalid("n_elements", format!("{n_elements} is not a perfect square")))?;
        Self::new(side, sectors, lobes)
    }

    pub fn n_elements(&self) -> usize {
        self.n_side * self.n_side
    }

    /// Sectors modeled per axis.
    pub fn axis_sectors(&self) -> usize {
        self.lobes * self.sectors
    }

    /// Number of joint gain atoms.
    pub fn atoms(&self) -> usize {
        self.axis_sectors().pow(2)
    }
}

/// Integer square root when `n` is a non-zero perfect square.
pub fn perfect_square_root(n: usize) -> Option<usize> {
    if n == 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

// Squared Dirichlet ratio; period 2 in z, removable peak at even z.
fn dirichlet_power(z: f64, n_side: usize) -> f64 {
    let w = z - 2.0 * (z / 2.0).round();
    if w == 0.0 {
        return 1.0;
    }
    let half = 0.5 * PI * w;
    let ratio = (n_side as f64 * half).sin() / (n_side as f64 * half.sin());
    (ratio * ratio).min(1.0)
}

/// Normalized array factor for pattern shifts `z_x`, `z_y`.
pub fn exact_array_factor(z_x: f64, z_y: f64, n_side: usize) -> f64 {
    dirichlet_power(z_x, n_side) * dirichlet_power(z_y, n_side)
}

/// Exact pattern shifts for fluctuated `(theta, phi)` pairs on both hops.
pub fn shifts_from_angles(
    nominal_t: &LinkAngles,
    nominal_r: &LinkAngles,
    fluct_t: (f64, f64),
    fluct_r: (f64, f64),
) -> (f64, f64) {
    let proj = |theta: f64, phi: f64| {
        let s = theta.sin();
        (s * phi.cos(), s * phi.sin())
    };
    let (tx0, ty0) = proj(nominal_t.theta, nominal_t.phi);
    let (rx0, ry0) = proj(nominal_r.theta, nominal_r.phi);
    let (tx, ty) = proj(fluct_t.0, fluct_t.1);
    let (rx, ry) = proj(fluct_r.0, fluct_r.1);
    ((tx - tx0) + (rx - rx0), (ty - ty0) + (ry - ry0))
}

/// Single-element `cos^3` pattern; zero behind the surface.
pub fn cos_cubed(theta: f64) -> f64 {
    if (0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        theta.cos().powi(3).max(0.0)
    } else {
        0.0
    }
}

/// Element pattern product `cos^3` on both hops; zero behind the surface.
pub fn element_gain_exact(theta_t: f64, theta_r: f64) -> f64 {
    cos_cubed(theta_t) * cos_cubed(theta_r)
}

/// Element gain frozen at the nominal directions.
pub fn element_gain_nominal(theta_t: f64, theta_r: f64) -> f64 {
    element_gain_exact(theta_t, theta_r)
}

/// Staircase gain of sector `i` (of `sectors` per lobe).
///
/// Sector 0 is the main-lobe plateau; sectors at multiples of `sectors` land
/// on kernel nulls and have gain zero.
pub fn sector_gain(i: usize, sectors: usize) -> f64 {
    if i == 0 {
        return 1.0;
    }
    let d = sectors as f64;
    let i = i as f64;
    let g = d * d * (1.0 - (2.0 * PI * i / d).cos()) / (2.0 * PI * PI * i * i);
    g.max(0.0)
}

/// Probability that a Gaussian shift falls in sector `i`, i.e.
/// `2i/(D n) < |Z| <= 2(i+1)/(D n)` (sector 0 includes `Z = 0`).
pub fn sector_mass(i: usize, sectors: usize, n_side: usize, mu_z: f64, sigma_z: f64) -> f64 {
    let width = 2.0 / (sectors as f64 * n_side as f64);
    let lo = i as f64 * width;
    let hi = (i + 1) as f64 * width;
    if i == 0 {
        return gaussian_interval(-hi, hi, mu_z, sigma_z);
    }
    gaussian_interval(lo, hi, mu_z, sigma_z) + gaussian_interval(lo, hi, -mu_z, sigma_z)
}

/// Discrete distribution of the pattern gain.
///
/// `gains[i * L + j]` and `masses[i * L + j]` belong to x-sector `i` and
/// y-sector `j`, with `L = lobes * sectors`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternDistribution {
    pub gains: Vec<f64>,
    pub masses: Vec<f64>,
    /// Probability that the shift leaves the modeled lobes on either axis.
    pub tail_mass: f64,
    pub element_gain: f64,
    #[serde(rename = "D")]
    pub sectors: usize,
    #[serde(rename = "l")]
    pub lobes: usize,
    pub n_side: usize,
}

impl PatternDistribution {
    pub fn atoms(&self) -> usize {
        self.gains.len()
    }

    /// Atoms merged by gain and sorted ascending, with the tail at gain 0.
    pub fn support(&self) -> Vec<(f64, f64)> {
        let mut atoms: Vec<(f64, f64)> = self
            .gains
            .iter()
            .copied()
            .zip(self.masses.iter().copied())
            .chain(std::iter::once((0.0, self.tail_mass)))
            .collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (g, m) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == g => last.1 += m,
                _ => merged.push((g, m)),
            }
        }
        merged
    }
}

/// Per-axis masses for sectors `0..lobes*sectors`.
pub fn axis_masses(config: &ArrayConfig, mu_z: f64, sigma_z: f64) -> Vec<f64> {
    (0..config.axis_sectors())
        .map(|i| sector_mass(i, config.sectors, config.n_side, mu_z, sigma_z))
        .collect()
}

/// Joint gain distribution under the sectoral model.
pub fn pattern_distribution(config: &ArrayConfig, shifts: &ShiftStats, q_e: f64) -> PatternDistribution {
    let l = config.axis_sectors();
    let axis_gains: Vec<f64> = (0..l).map(|i| sector_gain(i, config.sectors)).collect();
    let px = axis_masses(config, shifts.mu_zx, shifts.sigma_zx);
    let py = axis_masses(config, shifts.mu_zy, shifts.sigma_zy);

    let mut gains = Vec::with_capacity(l * l);
    let mut masses = Vec::with_capacity(l * l);
    for i in 0..l {
        for j in 0..l {
            gains.push(q_e * axis_gains[i] * axis_gains[j]);
            masses.push(px[i] * py[j]);
        }
    }
    let sx: f64 = px.iter().sum();
    let sy: f64 = py.iter().sum();
    PatternDistribution {
        gains,
        masses,
        tail_mass: (1.0 - sx * sy).max(0.0),
        element_gain: q_e,
        sectors: config.sectors,
        lobes: config.lobes,
        n_side: config.n_side,
    }
}

/// `P(G <= g)`; the tail mass sits at gain zero.
pub fn pattern_cdf(dist: &PatternDistribution, g: f64) -> f64 {
    if g < 0.0 {
        return 0.0;
    }
    let body: f64 = dist
        .gains
        .iter()
        .zip(&dist.masses)
        .filter(|(q, _)| **q <= g)
        .map(|(_, p)| p)
        .sum();
    (body + dist.tail_mass).min(1.0)
}
