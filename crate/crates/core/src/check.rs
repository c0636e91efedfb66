use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed on certified inequalities between exactly
/// evaluated quantities.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;

/// Outcome of testing `lhs ≤ rhs` with relative slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl BoundCheck {
    pub fn new(lhs: f64, rhs: f64, rel_tol: f64) -> Self {
        let slack = rel_tol * lhs.abs().max(rhs.abs());
        BoundCheck {
            lhs,
            rhs,
            holds: lhs <= rhs + slack,
        }
    }

    pub fn certified(lhs: f64, rhs: f64) -> Self {
        BoundCheck::new(lhs, rhs, CERTIFICATE_TOLERANCE)
    }

    /// `lhs / rhs`, or 0 when both sides vanish.
    pub fn ratio(&self) -> f64 {
        if self.rhs == 0.0 {
            if self.lhs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.lhs / self.rhs
        }
    }

    pub fn require(self, what: &str) -> Result<Self> {
        if self.holds {
            Ok(self)
        } else {
            Err(Error::BoundViolated(format!("{what}: {} > {}", self.lhs, self.rhs)))
        }
    }
}
