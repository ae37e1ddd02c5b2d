//! A complete link description and the glue between the analysis stages.

use serde::{Deserialize, Serialize};

use crate::channel::{active_power_stats, cascade_moments, CascadeMoments, ChannelParams, LinkConfig, LinkVariant};
use crate::error::{invalid, Error, Result};
use crate::fluctuation::{angle_jacobian, shift_stats, FluctuationModel, ShiftStats};
use crate::geometry::SystemGeometry;
use crate::montecarlo::{simulate_outage_batch, OutageEstimate, SimConfig};
use crate::outage::{outage_active_clt, outage_passive_clt, outage_passive_gamma, Method, OutageResult, TailMode};
use crate::pattern::{element_gain_nominal, pattern_distribution, ArrayConfig, PatternDistribution};
use crate::units::{db_to_linear, dbm_to_watts};

/// Everything needed to evaluate one operating point, in linear units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub geometry: SystemGeometry,
    pub fluctuation: FluctuationModel,
    pub array: ArrayConfig,
    pub channel: ChannelParams,
    pub link: LinkConfig,
    /// When set, the amplification budget follows the transmit power as
    /// `p_f = pf_ratio * p_t`.
    pub pf_ratio: Option<f64>,
}

impl Scenario {
    /// Passive reference link: 64 elements, 16 antennas, 30 dBm, 1 degree jitter.
    pub fn reference_passive() -> Self {
        let geometry = SystemGeometry::reference();
        Self {
            geometry,
            fluctuation: FluctuationModel::from_degrees(0.0, 0.0, 1.0, 1.0).expect("valid"),
            array: ArrayConfig::new(8, 15, 1).expect("valid"),
            channel: ChannelParams {
                k0: db_to_linear(10.0),
                k1: db_to_linear(10.0),
                alpha0: 2.0,
                alpha1: 2.2,
                c0: db_to_linear(-30.0),
                d0: geometry.d0,
                d1: geometry.d1,
            },
            link: LinkConfig {
                p_t: dbm_to_watts(30.0),
                m_antennas: 16,
                n_elements: 64,
                sigma2_n: dbm_to_watts(-80.0),
                zeta: 0.0,
                sigma2_e: 0.0,
                gamma_th: db_to_linear(10.0),
                variant: LinkVariant::Passive,
            },
            pf_ratio: None,
        }
    }

    /// Active reference link: 49 elements at 0 dBm, budget 5% of `p_t`.
    pub fn reference_active() -> Self {
        let base = Self::reference_passive().with_elements(7).with_pt(dbm_to_watts(0.0));
        let link = LinkConfig {
            variant: LinkVariant::Active {
                sigma2_f: dbm_to_watts(-70.0),
                p_f: 0.05 * base.link.p_t,
            },
            ..base.link
        };
        Self {
            link,
            pf_ratio: Some(0.05),
            ..base
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        self.link.validate()?;
        if self.link.n_elements != self.array.n_elements() {
            return Err(invalid(
                "n_elements",
                format!("link uses {} elements, array has {}", self.link.n_elements, self.array.n_elements()),
            ));
        }
        if let Some(r) = self.pf_ratio {
            if !(r > 0.0) {
                return Err(invalid("pf_ratio", format!("{r} must be positive")));
            }
        }
        Ok(())
    }

    /// Same scenario with an `n_side x n_side` array.
    pub fn with_elements(&self, n_side: usize) -> Self {
        let mut s = *self;
        s.array.n_side = n_side;
        s.link.n_elements = n_side * n_side;
        s
    }

    /// Same scenario at transmit power `p_t` (W), keeping any budget ratio.
    pub fn with_pt(&self, p_t: f64) -> Self {
        let mut s = *self;
        s.link.p_t = p_t;
        if let (Some(ratio), LinkVariant::Active { sigma2_f, .. }) = (self.pf_ratio, self.link.variant) {
            s.link.variant = LinkVariant::Active {
                sigma2_f,
                p_f: ratio * p_t,
            };
        }
        s
    }

    pub fn with_pt_dbm(&self, dbm: f64) -> Self {
        self.with_pt(dbm_to_watts(dbm))
    }

    pub fn with_resolution(&self, sectors: usize, lobes: usize) -> Result<Self> {
        let mut s = *self;
        s.array = ArrayConfig::new(self.array.n_side, sectors, lobes)?;
        Ok(s)
    }

    pub fn with_fluctuation(&self, fluctuation: FluctuationModel) -> Self {
        Self { fluctuation, ..*self }
    }

    pub fn with_csi_error(&self, zeta: f64, sigma2_e: f64) -> Self {
        let mut s = *self;
        s.link.zeta = zeta;
        s.link.sigma2_e = sigma2_e;
        s
    }

    /// Element gain at the nominal directions.
    pub fn element_gain(&self) -> f64 {
        element_gain_nominal(self.geometry.t_angles.theta, self.geometry.r_angles.theta)
    }

    pub fn shift_stats(&self) -> Result<ShiftStats> {
        if self.fluctuation.is_stable() {
            return Ok(ShiftStats::zero());
        }
        let g = &self.geometry;
        let tj = angle_jacobian(&g.t_angles)?;
        let rj = angle_jacobian(&g.r_angles)?;
        Ok(shift_stats(&tj, &rj, &g.t_angles, &g.r_angles, &self.fluctuation))
    }

    pub fn pattern(&self) -> Result<PatternDistribution> {
        Ok(pattern_distribution(&self.array, &self.shift_stats()?, self.element_gain()))
    }

    pub fn moments(&self) -> Result<CascadeMoments> {
        cascade_moments(&self.channel, self.link.zeta, self.link.n_elements)
    }

    /// Closed-form method matching the link variant.
    pub fn default_method(&self) -> Method {
        if self.link.is_active() {
            Method::ActiveClt
        } else {
            Method::PassiveClt
        }
    }

    pub fn outage(&self, method: Method, tail_mode: TailMode) -> Result<OutageResult> {
        self.validate()?;
        let dist = self.pattern()?;
        let moments = self.moments()?;
        match method {
            Method::PassiveClt => outage_passive_clt(&dist, &moments, &self.link, tail_mode),
            Method::PassiveGamma => outage_passive_gamma(&dist, &moments, &self.link, tail_mode),
            Method::ActiveClt => {
                let g = &self.geometry;
                let stats = active_power_stats(&self.channel, &self.link, &g.t_angles, &g.r_angles)?;
                outage_active_clt(&dist, &moments, &stats, &self.link, tail_mode)
            }
            Method::MonteCarlo => Err(Error::Usage("Monte Carlo is not a closed form; use simulate".into())),
        }
    }

    pub fn simulate(&self, sim: &SimConfig) -> Result<OutageEstimate> {
        self.validate()?;
        Ok(self.simulate_powers(&[self.link.p_t], sim)?[0])
    }

    /// Monte Carlo estimates at several transmit powers from shared draws.
    pub fn simulate_powers(&self, p_ts: &[f64], sim: &SimConfig) -> Result<Vec<OutageEstimate>> {
        let links: Vec<LinkConfig> = p_ts.iter().map(|&p| self.with_pt(p).link).collect();
        simulate_outage_batch(&self.geometry, &self.fluctuation, &self.array, &self.channel, &links, sim)
    }
}
