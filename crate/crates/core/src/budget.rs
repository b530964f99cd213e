//! Wall-clock guard for long exact computations.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn with_limit(limit: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + limit),
        }
    }

    /// Reads the per-cell limit in seconds from `ODH_MAX_CELL_SECONDS`.
    pub fn from_env() -> Self {
        std::env::var("ODH_MAX_CELL_SECONDS")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|s| *s > 0.0)
            .map_or_else(Self::unlimited, |s| Self::with_limit(Duration::from_secs_f64(s)))
    }

    pub fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::ResourceLimit("time limit exceeded".into())),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::unlimited()
    }
}
