//! Size guardrails for user-supplied jobs.

use crate::error::{Error, Result};

/// Largest dimension and degree a job may request. These are defaults, not
/// hard limits of the engine; callers may raise them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_dim: usize,
    pub max_degree: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: 8,
            max_degree: 16,
        }
    }
}

impl Limits {
    pub fn check_dim(&self, n: usize) -> Result<()> {
        if n > self.max_dim {
            return Err(Error::InvalidRequest(format!(
                "dimension {} exceeds the limit {}",
                n, self.max_dim
            )));
        }
        Ok(())
    }

    pub fn check_degree(&self, degree: u32) -> Result<()> {
        if degree > self.max_degree {
            return Err(Error::InvalidRequest(format!(
                "degree {} exceeds the limit {}",
                degree, self.max_degree
            )));
        }
        Ok(())
    }
}
