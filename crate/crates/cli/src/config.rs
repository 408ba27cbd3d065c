//! Default tolerances and the configuration echoed into every report.

use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 1;

/// Every numeric tolerance used by the checks, in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative slack allowed on the shifted-matrix bounds.
    pub bound_slack: f64,
    /// Threshold band excluded from the planar equivalence comparison.
    pub equivalence_band: f64,
    /// Band of the ternary membership verdict in the planar comparison.
    pub membership_band: f64,
    /// Resolution passed to the margin minimizer.
    pub margin_resolution: f64,
    /// Distance to `margin = -1` excluded from the spectral comparison.
    pub spectral_band: f64,
    /// Relative tolerance of the Courant-Fischer grid comparison.
    pub courant_fischer: f64,
    pub reverse_triangle: f64,
    /// Identities such as `|fzbar| = k |fz|`.
    pub identity: f64,
    /// One-sided pointwise inequalities on sampled derivatives.
    pub inequality: f64,
    pub continuity: f64,
    pub cone_floor: f64,
    pub liminf: f64,
    pub constants: f64,
    pub log2_increment: f64,
    pub vanishing_increment: f64,
    pub collision: f64,
    /// Tube around interfaces where derivatives are not sampled.
    pub interface_exclusion: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            bound_slack: 1e-9,
            equivalence_band: 1e-6,
            membership_band: 1e-6,
            margin_resolution: 1e-10,
            spectral_band: 1e-3,
            courant_fischer: 1e-3,
            reverse_triangle: 1e-12,
            identity: 1e-12,
            inequality: 1e-9,
            continuity: 1e-9,
            cone_floor: 1e-6,
            liminf: 1e-6,
            constants: 1e-12,
            log2_increment: 1e-12,
            vanishing_increment: 1e-3,
            collision: 1e-9,
            interface_exclusion: 1e-6,
        }
    }
}

/// The resolved run configuration, as echoed in the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub target: Option<String>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub distortion: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<f64>,
    pub certify: bool,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn new(command: &str, seed: u64) -> Self {
        RunConfig {
            command: command.to_string(),
            target: None,
            seed,
            samples: None,
            n: None,
            delta: None,
            k: None,
            distortion: None,
            eps: None,
            lambda: None,
            certify: false,
            tolerances: Tolerances::default(),
        }
    }
}
