//! Result records: schema, rows per command and provenance.

use serde::{Deserialize, Serialize};
use stark_shell::resonance1d::{ResonancePoint, WidthFit};
use stark_shell::starkshift::ShiftResult;
use stark_shell::validate::Check;
use stark_shell::weyl3d::DetSample;
use stark_shell::zerofield::PartialWaveBoundState;
use stark_shell::Complex64;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// One 3D resonance with its perturbative prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resonance3dRow {
    #[serde(rename = "F")]
    pub field: f64,
    pub z: Complex64,
    pub width: f64,
    pub det_residual: f64,
    pub iterations: usize,
    #[serde(rename = "E0")]
    pub e0: f64,
    pub a2: f64,
    /// `E₀ + F² a₂`.
    pub predicted: f64,
    pub l_max: usize,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Rows {
    BoundStates { states: Vec<PartialWaveBoundState> },
    StarkShift { shifts: Vec<ShiftResult> },
    #[serde(rename = "resonance-1d")]
    Resonance1d {
        trajectory: Vec<ResonancePoint>,
        fit: Option<WidthFit>,
    },
    #[serde(rename = "det-scan-3d")]
    DetScan3d { samples: Vec<DetSample> },
    #[serde(rename = "resonance-3d")]
    Resonance3d { resonances: Vec<Resonance3dRow> },
    WidthFit { fits: Vec<WidthFit> },
    Validate { checks: Vec<Check> },
}

impl Rows {
    pub fn len(&self) -> usize {
        match self {
            Self::BoundStates { states } => states.len(),
            Self::StarkShift { shifts } => shifts.len(),
            Self::Resonance1d { trajectory, .. } => trajectory.len(),
            Self::DetScan3d { samples } => samples.len(),
            Self::Resonance3d { resonances } => resonances.len(),
            Self::WidthFit { fits } => fits.len(),
            Self::Validate { checks } => checks.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch; JSON only, never in CSV.
    pub timestamp_unix: u64,
    /// Convergence diagnostics, one line each.
    pub diagnostics: Vec<String>,
    pub notes: Vec<String>,
    /// Set when the run stopped early; rows hold what was obtained.
    pub failure: Option<String>,
}

impl Provenance {
    pub fn new() -> Self {
        let timestamp_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool: "stark-shell".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp_unix,
            diagnostics: Vec::new(),
            notes: Vec::new(),
            failure: None,
        }
    }
}

impl Default for Provenance {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub config_echo: RunConfig,
    pub rows: Rows,
    pub provenance: Provenance,
}
