//! Node placement and the angles it induces at a down-facing surface.
//!
//! The surface is horizontal and faces the ground. A direction towards a node
//! is described by two per-axis angles, `atan(dx / drop)` and `atan(dy / drop)`,
//! from which elevation and azimuth follow.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in meters; `z` is altitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::Geometry(format!("non-finite position ({x}, {y}, {z})")));
        }
        if z < 0.0 {
            return Err(Error::Geometry(format!("altitude {z} is below ground")));
        }
        Ok(Self { x, y, z })
    }

    pub fn distance(&self, other: &Position3D) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Which hop of the relay a direction belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Towards the base station (incident wave).
    Transmit,
    /// Towards the user (reflected wave).
    Receive,
}

/// Direction from the surface towards one node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkAngles {
    /// Per-axis direction angle along x.
    pub theta_x: f64,
    /// Per-axis direction angle along y.
    pub theta_y: f64,
    /// Elevation measured from the surface normal, in `[0, pi/2)`.
    pub theta: f64,
    /// Azimuth in `[0, 2 pi)`; 0 by convention straight below the surface.
    pub phi: f64,
    pub side: Side,
}

impl LinkAngles {
    /// Builds elevation and azimuth from the two per-axis angles.
    pub fn from_axis_angles(theta_x: f64, theta_y: f64, side: Side) -> Result<Self> {
        let (theta, phi) = elevation_azimuth(theta_x, theta_y)?;
        Ok(Self {
            theta_x,
            theta_y,
            theta,
            phi,
            side,
        })
    }

    /// True when the node sits straight below the surface.
    pub fn is_nadir(&self) -> bool {
        self.theta_x == 0.0 && self.theta_y == 0.0
    }
}

fn elevation_azimuth(theta_x: f64, theta_y: f64) -> Result<(f64, f64)> {
    const LIMIT: f64 = std::f64::consts::FRAC_PI_2;
    if !(theta_x.abs() < LIMIT && theta_y.abs() < LIMIT) {
        return Err(Error::Domain {
            function: "elevation_azimuth",
            detail: format!("axis angles ({theta_x}, {theta_y}) reach the tangent pole"),
        });
    }
    let tx = theta_x.tan();
    let ty = theta_y.tan();
    let theta = tx.hypot(ty).atan();
    if tx == 0.0 && ty == 0.0 {
        return Ok((theta, 0.0));
    }
    let mut phi = ty.atan2(tx);
    if phi < 0.0 {
        phi += TAU;
    }
    if phi >= TAU {
        phi -= TAU;
    }
    Ok((theta, phi))
}

/// Direction from `irs` towards `target`, which must lie strictly below it.
pub fn nominal_angles(irs: &Position3D, target: &Position3D, side: Side) -> Result<LinkAngles> {
    let drop = irs.z - target.z;
    if !(drop > 0.0) {
        return Err(Error::Geometry(format!(
            "{side:?} node at altitude {} is not below the surface at {}",
            target.z, irs.z
        )));
    }
    let theta_x = ((target.x - irs.x) / drop).atan();
    let theta_y = ((target.y - irs.y) / drop).atan();
    LinkAngles::from_axis_angles(theta_x, theta_y, side)
}

/// Exact elevation and azimuth after the platform tilts by `eps_x`, `eps_y`.
pub fn fluctuated_angles(nominal: &LinkAngles, eps_x: f64, eps_y: f64) -> Result<(f64, f64)> {
    elevation_azimuth(nominal.theta_x + eps_x, nominal.theta_y + eps_y)
}

/// Distances surface to base station and surface to user.
pub fn link_distances(bs: &Position3D, irs: &Position3D, ue: &Position3D) -> Result<(f64, f64)> {
    let d0 = irs.distance(bs);
    let d1 = irs.distance(ue);
    if d0 == 0.0 || d1 == 0.0 {
        return Err(Error::Geometry("node coincides with the surface".into()));
    }
    Ok((d0, d1))
}

/// Node positions together with every derived angle and distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemGeometry {
    pub bs: Position3D,
    pub irs: Position3D,
    pub ue: Position3D,
    pub t_angles: LinkAngles,
    pub r_angles: LinkAngles,
    pub d0: f64,
    pub d1: f64,
}

impl SystemGeometry {
    pub fn new(bs: Position3D, irs: Position3D, ue: Position3D) -> Result<Self> {
        let (d0, d1) = link_distances(&bs, &irs, &ue)?;
        Ok(Self {
            bs,
            irs,
            ue,
            t_angles: nominal_angles(&irs, &bs, Side::Transmit)?,
            r_angles: nominal_angles(&irs, &ue, Side::Receive)?,
            d0,
            d1,
        })
    }

    /// Base station at (0,0,20), surface at (10,10,120), user at (40,40,0).
    pub fn reference() -> Self {
        Self::new(
            Position3D { x: 0.0, y: 0.0, z: 20.0 },
            Position3D { x: 10.0, y: 10.0, z: 120.0 },
            Position3D { x: 40.0, y: 40.0, z: 0.0 },
        )
        .expect("reference geometry is valid")
    }
}
