use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Limits for exhaustive searches. Oracles refuse, never approximate, once a
/// limit is hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_subsets: u64,
    pub max_embeddings: u64,
    pub time_limit: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_subsets: 100_000_000,
            max_embeddings: 100_000_000,
            time_limit: Duration::from_secs(600),
        }
    }
}

impl OracleBudget {
    pub fn new(max_subsets: u64, max_embeddings: u64, time_limit: Duration) -> Result<Self> {
        if max_subsets == 0 || max_embeddings == 0 || time_limit.is_zero() {
            return Err(Error::Input("oracle budget fields must be positive".into()));
        }
        Ok(Self { max_subsets, max_embeddings, time_limit })
    }

    pub(crate) fn check_subsets(&self, needed: u128, what: &str) -> Result<()> {
        if needed > self.max_subsets as u128 {
            return Err(Error::Capability(format!(
                "{what} needs {needed} subsets, budget allows {}",
                self.max_subsets
            )));
        }
        Ok(())
    }

    pub(crate) fn clock(&self) -> Deadline {
        Deadline { start: Instant::now(), limit: self.time_limit, ticks: 0 }
    }
}

/// Cheap periodic wall-clock check for long scans.
pub(crate) struct Deadline {
    start: Instant,
    limit: Duration,
    ticks: u32,
}

impl Deadline {
    #[inline]
    pub(crate) fn tick(&mut self, what: &str) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks & 0xffff == 0 && self.start.elapsed() > self.limit {
            return Err(Error::Capability(format!(
                "{what} exceeded the time limit of {:?}",
                self.limit
            )));
        }
        Ok(())
    }
}
