//! Deterministic work limits for the backtracking searches.
//!
//! Limits count search nodes rather than wall time so that a verdict never
//! depends on machine load.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    max_nodes: Option<u64>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_nodes: None };

    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes: Some(max_nodes) }
    }

    pub fn max_nodes(&self) -> Option<u64> {
        self.max_nodes
    }

    pub fn meter(&self) -> Meter {
        Meter { used: 0, max: self.max_nodes }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::UNLIMITED
    }
}

#[derive(Debug, Clone)]
pub struct Meter {
    used: u64,
    max: Option<u64>,
}

impl Meter {
    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        match self.max {
            Some(max) if self.used > max => Err(Error::BudgetExceeded { nodes: self.used }),
            _ => Ok(()),
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
