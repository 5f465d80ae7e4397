//! Tunable constants shared by every stage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Engine constants. Every field has a default and can be overridden from a
/// JSON file whose keys match the field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Interior polyline angle at or below which a vertex near a stroke end
    /// counts as a hook.
    pub trim_angle_deg: f64,
    /// Fraction of stroke arc length searched for hooks at each end.
    pub trim_fraction: f64,
    /// `d_max = width_factor * (w(p) + w(q)) / 2`.
    pub width_factor: f64,
    pub cone_angle_deg: f64,
    pub boundary_cone_angle_deg: f64,
    pub dominant_freq: f64,
    pub dihedral_min_deg: f64,
    pub incompatible_weight: f64,
    pub compatible_weight: f64,
    pub smoothing_normal_guard_deg: f64,
    pub small_hole_max_sides: usize,
    pub crease_angle_deg: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            trim_angle_deg: 45.0,
            trim_fraction: 0.15,
            width_factor: 1.5,
            cone_angle_deg: 60.0,
            boundary_cone_angle_deg: 80.0,
            dominant_freq: 0.30,
            dihedral_min_deg: 45.0,
            incompatible_weight: -30.0,
            compatible_weight: 1.0,
            smoothing_normal_guard_deg: 45.0,
            small_hole_max_sides: 4,
            crease_angle_deg: 90.0,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let angles = [
            ("trim_angle_deg", self.trim_angle_deg),
            ("cone_angle_deg", self.cone_angle_deg),
            ("boundary_cone_angle_deg", self.boundary_cone_angle_deg),
            ("dihedral_min_deg", self.dihedral_min_deg),
            ("smoothing_normal_guard_deg", self.smoothing_normal_guard_deg),
            ("crease_angle_deg", self.crease_angle_deg),
        ];
        for (name, v) in angles {
            if !(v > 0.0 && v < 180.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 180), got {v}")));
            }
        }
        for (name, v) in [
            ("trim_fraction", self.trim_fraction),
            ("dominant_freq", self.dominant_freq),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if !(self.width_factor > 0.0) || !self.width_factor.is_finite() {
            return Err(Error::Config("width_factor must be positive".into()));
        }
        if !(self.incompatible_weight < 0.0) {
            return Err(Error::Config("incompatible_weight must be negative".into()));
        }
        if !(self.compatible_weight > 0.0) {
            return Err(Error::Config("compatible_weight must be positive".into()));
        }
        if self.small_hole_max_sides < 3 {
            return Err(Error::Config("small_hole_max_sides must be at least 3".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Config> {
        let cfg: Config = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
