//! Cheap cooperative deadline checks for long-running enumerations.

use std::time::Instant;

use crate::error::{Error, Result};

const CHECK_EVERY: u32 = 1 << 12;

/// Counts work units and polls the clock every `CHECK_EVERY` ticks.
pub(crate) struct Ticker {
    deadline: Option<Instant>,
    counter: u32,
}

impl Ticker {
    pub(crate) fn new(deadline: Option<Instant>) -> Ticker {
        Ticker {
            deadline,
            counter: 0,
        }
    }

    #[inline]
    pub(crate) fn tick(&mut self, what: &str) -> Result<()> {
        if let Some(deadline) = self.deadline {
            self.counter = self.counter.wrapping_add(1);
            if self.counter.is_multiple_of(CHECK_EVERY) && Instant::now() > deadline {
                return Err(Error::BudgetExceeded(format!("{what}: time limit reached")));
            }
        }
        Ok(())
    }
}
