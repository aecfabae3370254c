//! Cooperative step/deadline budgets polled from the checkers' main loops.

use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("budget exhausted after {steps} steps")]
pub struct BudgetExceeded {
    pub steps: u64,
}

/// Limits a computation by a step count and/or a wall-clock deadline.
#[derive(Debug, Clone)]
pub struct Budget {
    max_steps: Option<u64>,
    deadline: Option<Instant>,
    steps: u64,
}

// clock polled once every this many steps
const POLL_MASK: u64 = 0x3ff;

impl Budget {
    pub fn unlimited() -> Budget {
        Budget {
            max_steps: None,
            deadline: None,
            steps: 0,
        }
    }

    pub fn steps(max_steps: u64) -> Budget {
        Budget {
            max_steps: Some(max_steps),
            ..Budget::unlimited()
        }
    }

    pub fn timeout(limit: Duration) -> Budget {
        Budget {
            deadline: Instant::now().checked_add(limit),
            ..Budget::unlimited()
        }
    }

    pub fn with_timeout(self, limit: Option<Duration>) -> Budget {
        Budget {
            deadline: limit.and_then(|l| Instant::now().checked_add(l)),
            ..self
        }
    }

    pub fn used(&self) -> u64 {
        self.steps
    }

    /// Counts one step.
    #[inline]
    pub fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.steps += 1;
        if let Some(max) = self.max_steps {
            if self.steps > max {
                return Err(BudgetExceeded { steps: self.steps });
            }
        }
        if self.steps & POLL_MASK == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(BudgetExceeded { steps: self.steps });
                }
            }
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_limit() {
        let mut b = Budget::steps(3);
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert_eq!(b.tick(), Err(BudgetExceeded { steps: 4 }));
    }

    #[test]
    fn expired_deadline_is_noticed_at_poll() {
        let mut b = Budget::timeout(Duration::ZERO);
        let mut hit = None;
        for i in 0..5000u64 {
            if b.tick().is_err() {
                hit = Some(i);
                break;
            }
        }
        assert_eq!(hit, Some(POLL_MASK));
    }
}
