//! Experiment configuration files.
//!
//! A config is TOML with one table per group (`geometry`, `fluct`, `array`,
//! `chan`, `link`, `sim`, `out`, plus `sweep` and `opt` for the experiment
//! grids). Every key is optional and defaults to the reference link; unknown
//! keys are rejected. Decibel quantities are converted to linear units here
//! and nowhere else.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use umi_core::channel::{ChannelParams, LinkConfig, LinkVariant};
use umi_core::fluctuation::FluctuationModel;
use umi_core::geometry::{Position3D, SystemGeometry};
use umi_core::montecarlo::{SimConfig, SimMode};
use umi_core::pattern::{perfect_square_root, ArrayConfig};
use umi_core::units::{db_to_linear, dbm_to_watts};
use umi_core::validation::ValidationOptions;
use umi_core::{Scenario, TailMode};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub geometry: GeometrySection,
    pub fluct: FluctSection,
    pub array: ArraySection,
    pub chan: ChanSection,
    pub link: LinkSection,
    pub sim: SimSection,
    pub out: OutSection,
    pub sweep: SweepSection,
    pub opt: OptSection,
}

/// Node positions in meters.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometrySection {
    pub bs: [f64; 3],
    pub irs: [f64; 3],
    pub ue: [f64; 3],
}

impl Default for GeometrySection {
    fn default() -> Self {
        Self {
            bs: [0.0, 0.0, 20.0],
            irs: [10.0, 10.0, 120.0],
            ue: [40.0, 40.0, 0.0],
        }
    }
}

/// Platform tilt statistics in degrees.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluctSection {
    pub mu_x_deg: f64,
    pub mu_y_deg: f64,
    pub sigma_x_deg: f64,
    pub sigma_y_deg: f64,
}

impl Default for FluctSection {
    fn default() -> Self {
        Self {
            mu_x_deg: 0.0,
            mu_y_deg: 0.0,
            sigma_x_deg: 1.0,
            sigma_y_deg: 1.0,
        }
    }
}

/// Array size (side or total count, not both) and sectoral resolution.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArraySection {
    pub n_side: Option<usize>,
    pub n_elements: Option<usize>,
    pub sectors: usize,
    pub lobes: usize,
}

impl Default for ArraySection {
    fn default() -> Self {
        Self {
            n_side: None,
            n_elements: None,
            sectors: 15,
            lobes: 1,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChanSection {
    pub k0_db: f64,
    pub k1_db: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub c0_db: f64,
}

impl Default for ChanSection {
    fn default() -> Self {
        Self {
            k0_db: 10.0,
            k1_db: 10.0,
            alpha0: 2.0,
            alpha1: 2.2,
            c0_db: -30.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantName {
    #[default]
    Passive,
    Active,
}

impl VariantName {
    pub fn as_str(self) -> &'static str {
        match self {
            VariantName::Passive => "passive",
            VariantName::Active => "active",
        }
    }
}

/// Transmit side and receiver. The amplification budget is either a ratio
/// of the transmit power (`pf_ratio`, default 0.05) or absolute (`pf_dbm`).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinkSection {
    pub pt_dbm: f64,
    pub m: usize,
    pub sigma2_n_dbm: f64,
    pub sigma2_f_dbm: f64,
    pub pf_ratio: Option<f64>,
    pub pf_dbm: Option<f64>,
    pub zeta: f64,
    pub sigma2_e_dbm: Option<f64>,
    pub gamma_th_db: f64,
    pub variant: VariantName,
}

impl Default for LinkSection {
    fn default() -> Self {
        Self {
            pt_dbm: 30.0,
            m: 16,
            sigma2_n_dbm: -80.0,
            sigma2_f_dbm: -70.0,
            pf_ratio: None,
            pf_dbm: None,
            zeta: 0.0,
            sigma2_e_dbm: None,
            gamma_th_db: 10.0,
            variant: VariantName::Passive,
        }
    }
}

/// Monte Carlo settings; `trials = 0` skips simulation.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub trials: u64,
    pub seed: u64,
    pub mode: SimMode,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: ValidationOptions::default().seed,
            mode: SimMode::Reduced,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutSection {
    /// Unset: outage sweeps count the tail as outage, the optimizer drops it.
    pub tail_mode: Option<TailMode>,
}

/// Grids swept by the experiments. Unset lists fall back to the single
/// value from the corresponding scenario key.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub pt_dbm: Option<Vec<f64>>,
    pub n_elements: Option<Vec<usize>>,
    pub zeta: Option<Vec<f64>>,
    pub sectors: Option<Vec<usize>>,
    pub lobes: Option<Vec<usize>>,
    /// Add rows for a stable platform next to the jittered ones.
    pub no_vib: bool,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            pt_dbm: None,
            n_elements: None,
            zeta: None,
            sectors: None,
            lobes: None,
            no_vib: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptSection {
    pub n_max: usize,
    /// Operating points to optimize; unset means the `link` settings.
    pub cases: Option<Vec<OptCaseSection>>,
}

impl Default for OptSection {
    fn default() -> Self {
        Self { n_max: 400, cases: None }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptCaseSection {
    pub variant: VariantName,
    pub pt_dbm: f64,
}

/// An optimizer operating point, ready to evaluate.
#[derive(Debug, Clone, Copy)]
pub struct OptCase {
    pub variant: VariantName,
    pub pt_dbm: f64,
    pub scenario: Scenario,
}

/// A validated configuration in linear units.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub variant: VariantName,
    pub sim: SimConfig,
    pub tail_mode: Option<TailMode>,
    pub sigma2_e: f64,
    pub pt_dbm: Vec<f64>,
    pub n_sides: Vec<usize>,
    pub zetas: Vec<f64>,
    pub sectors: Vec<usize>,
    pub lobes: Vec<usize>,
    pub no_vib: bool,
    pub n_max: usize,
    pub cases: Vec<OptCase>,
}

impl ExperimentConfig {
    /// Reference link with every default.
    pub fn reference() -> Self {
        ConfigFile::default().resolve().expect("defaults are valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).context("malformed config")?;
        file.resolve()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml_str(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.sim.seed = seed;
    }
}

fn side_of(key: &str, n: usize) -> Result<usize> {
    match perfect_square_root(n) {
        Some(side) => Ok(side),
        None => bail!("{key}: {n} is not a perfect square"),
    }
}

fn check_zeta(key: &str, zeta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&zeta) {
        bail!("{key}: {zeta} is out of range [0, 1]");
    }
    Ok(())
}

fn position(key: &str, p: [f64; 3]) -> Result<Position3D> {
    Position3D::new(p[0], p[1], p[2]).with_context(|| key.to_string())
}

fn non_empty<T>(key: &str, v: Option<Vec<T>>, fallback: T) -> Result<Vec<T>> {
    match v {
        None => Ok(vec![fallback]),
        Some(v) if v.is_empty() => bail!("{key}: list is empty"),
        Some(v) => Ok(v),
    }
}

impl ConfigFile {
    pub fn resolve(self) -> Result<ExperimentConfig> {
        let g = &self.geometry;
        let geometry = SystemGeometry::new(
            position("geometry.bs", g.bs)?,
            position("geometry.irs", g.irs)?,
            position("geometry.ue", g.ue)?,
        )
        .context("geometry")?;

        let f = &self.fluct;
        let fluctuation = FluctuationModel::from_degrees(f.mu_x_deg, f.mu_y_deg, f.sigma_x_deg, f.sigma_y_deg)
            .context("fluct")?;

        let a = &self.array;
        let n_side = match (a.n_side, a.n_elements) {
            (Some(_), Some(_)) => bail!("array: set n_side or n_elements, not both"),
            (Some(s), None) => s,
            (None, Some(n)) => side_of("array.n_elements", n)?,
            (None, None) => 8,
        };
        let array = ArrayConfig::new(n_side, a.sectors, a.lobes).context("array")?;

        let c = &self.chan;
        let channel = ChannelParams {
            k0: db_to_linear(c.k0_db),
            k1: db_to_linear(c.k1_db),
            alpha0: c.alpha0,
            alpha1: c.alpha1,
            c0: db_to_linear(c.c0_db),
            d0: geometry.d0,
            d1: geometry.d1,
        };

        let l = &self.link;
        check_zeta("link.zeta", l.zeta)?;
        let sweep = self.sweep;
        let zetas = non_empty("sweep.zeta", sweep.zeta, l.zeta)?;
        for &z in &zetas {
            check_zeta("sweep.zeta", z)?;
        }
        let sigma2_e = match l.sigma2_e_dbm {
            Some(dbm) => dbm_to_watts(dbm),
            None if zetas.iter().any(|&z| z > 0.0) => bail!("link.sigma2_e_dbm is required when zeta > 0"),
            None => 0.0,
        };
        let p_t = dbm_to_watts(l.pt_dbm);
        let (variant, pf_ratio) = match l.variant {
            VariantName::Passive => (LinkVariant::Passive, None),
            VariantName::Active => {
                let (p_f, ratio) = match (l.pf_ratio, l.pf_dbm) {
                    (Some(_), Some(_)) => bail!("link: set pf_ratio or pf_dbm, not both"),
                    (_, Some(dbm)) => (dbm_to_watts(dbm), None),
                    (r, None) => {
                        let r = r.unwrap_or(0.05);
                        (r * p_t, Some(r))
                    }
                };
                let sigma2_f = dbm_to_watts(l.sigma2_f_dbm);
                (LinkVariant::Active { sigma2_f, p_f }, ratio)
            }
        };
        let scenario = Scenario {
            geometry,
            fluctuation,
            array,
            channel,
            link: LinkConfig {
                p_t,
                m_antennas: l.m,
                n_elements: array.n_elements(),
                sigma2_n: dbm_to_watts(l.sigma2_n_dbm),
                zeta: l.zeta,
                sigma2_e,
                gamma_th: db_to_linear(l.gamma_th_db),
                variant,
            },
            pf_ratio,
        };
        scenario.validate().context("scenario")?;

        let pt_dbm = non_empty("sweep.pt_dbm", sweep.pt_dbm, l.pt_dbm)?;
        let n_sides = non_empty("sweep.n_elements", sweep.n_elements, array.n_elements())?
            .into_iter()
            .map(|n| side_of("sweep.n_elements", n))
            .collect::<Result<Vec<_>>>()?;
        let sectors = non_empty("sweep.sectors", sweep.sectors, array.sectors)?;
        let lobes = non_empty("sweep.lobes", sweep.lobes, array.lobes)?;
        for &d in &sectors {
            for &lb in &lobes {
                ArrayConfig::new(n_side, d, lb).context("sweep.sectors, sweep.lobes")?;
            }
        }

        if self.opt.n_max == 0 {
            bail!("opt.n_max: must be at least 1");
        }
        let case_specs = self.opt.cases.unwrap_or_else(|| {
            vec![OptCaseSection {
                variant: l.variant,
                pt_dbm: l.pt_dbm,
            }]
        });
        if case_specs.is_empty() {
            bail!("opt.cases: list is empty");
        }
        let cases = case_specs
            .into_iter()
            .map(|c| {
                let s = with_variant(&scenario, c.variant, l);
                OptCase {
                    variant: c.variant,
                    pt_dbm: c.pt_dbm,
                    scenario: s.with_pt_dbm(c.pt_dbm),
                }
            })
            .collect();

        if self.sim.mode == SimMode::FullMatrix && !fluctuation.is_stable() {
            bail!("sim.mode: full-matrix simulation needs a stable platform (zero fluct.sigma_*_deg and mu_*_deg)");
        }
        let sim = SimConfig {
            mode: self.sim.mode,
            ..SimConfig::new(self.sim.trials, self.sim.seed)
        };

        Ok(ExperimentConfig {
            scenario,
            variant: l.variant,
            sim,
            tail_mode: self.out.tail_mode,
            sigma2_e,
            pt_dbm,
            n_sides,
            zetas,
            sectors,
            lobes,
            no_vib: sweep.no_vib,
            n_max: self.opt.n_max,
            cases,
        })
    }
}

/// `base` switched to `variant`, taking amplifier settings from `link`.
fn with_variant(base: &Scenario, variant: VariantName, link: &LinkSection) -> Scenario {
    let mut s = *base;
    match variant {
        VariantName::Passive => {
            s.link.variant = LinkVariant::Passive;
            s.pf_ratio = None;
        }
        VariantName::Active if base.link.is_active() => {}
        VariantName::Active => {
            let ratio = link.pf_ratio.unwrap_or(0.05);
            let p_f = match link.pf_dbm {
                Some(dbm) => {
                    s.pf_ratio = None;
                    dbm_to_watts(dbm)
                }
                None => {
                    s.pf_ratio = Some(ratio);
                    ratio * s.link.p_t
                }
            };
            s.link.variant = LinkVariant::Active {
                sigma2_f: dbm_to_watts(link.sigma2_f_dbm),
                p_f,
            };
        }
    }
    s
}
