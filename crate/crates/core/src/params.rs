use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Physical configuration: sphere radius `a`, wall strength `alpha` and
/// field strength `field` (along x₁). The dimension is fixed to three.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellParams {
    pub a: f64,
    pub alpha: f64,
    #[serde(rename = "F")]
    pub field: f64,
}

impl ShellParams {
    pub fn new(a: f64, alpha: f64, field: f64) -> Result<Self> {
        let p = Self { a, alpha, field };
        p.validate()?;
        Ok(p)
    }

    pub fn zero_field(a: f64, alpha: f64) -> Result<Self> {
        Self::new(a, alpha, 0.0)
    }

    pub fn with_field(self, field: f64) -> Self {
        Self { field, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.alpha.is_finite() && self.field.is_finite()) {
            return Err(domain("ShellParams", "parameters must be finite"));
        }
        if self.field < 0.0 {
            return Err(domain("ShellParams", "field strength must be >= 0"));
        }
        Ok(())
    }

    /// Radius must be strictly positive for the shell; the 1D surrogate also
    /// accepts `a <= 0` since there `a` is just the position of the point
    /// interaction.
    pub fn require_shell(&self) -> Result<()> {
        self.validate()?;
        if self.a <= 0.0 {
            return Err(domain("ShellParams", format!("radius a = {} must be > 0", self.a)));
        }
        Ok(())
    }
}
