//! Numerical tolerances.
//!
//! The construction is defined in exact arithmetic. Every place where the
//! implementation has to decide "equal" or "zero" in floating point reads one
//! of these knobs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Bound on `‖A A* − I‖` for a matrix to count as unitary.
    pub eps_unitary: f64,
    /// Vector entries and Gram-Schmidt residuals at or below this are zero.
    pub eps_zero: f64,
    /// Angular radius (radians) for grouping eigenphases into one eigenvalue.
    pub eps_cluster: f64,
    /// Entry comparison slack in the column ordering.
    pub eps_cmp: f64,
    /// Step distance at which an iterated sequence is declared converged.
    pub eps_conv: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps_unitary: 1e-10,
            eps_zero: 1e-10,
            eps_cluster: 1e-8,
            eps_cmp: 1e-9,
            eps_conv: 1e-8,
        }
    }
}

impl ToleranceConfig {
    /// Every tolerance must lie in `(0, 1e-2)`.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("eps_unitary", self.eps_unitary),
            ("eps_zero", self.eps_zero),
            ("eps_cluster", self.eps_cluster),
            ("eps_cmp", self.eps_cmp),
            ("eps_conv", self.eps_conv),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value < 1e-2) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {value} must lie in (0, 1e-2)"
                )));
            }
        }
        Ok(())
    }
}
