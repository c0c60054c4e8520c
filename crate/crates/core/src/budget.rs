use std::time::{Duration, Instant};

use crate::error::AlgebraError;

/// Default number of stored terms allowed in any intermediate polynomial.
pub const DEFAULT_TERM_CAP: usize = 2_000_000;
/// Default wall-clock allowance per elimination stage.
pub const DEFAULT_STAGE_SECONDS: u64 = 120;

/// Resource limits threaded through the expensive operations. Exceeding
/// either limit aborts the enclosing step with `TermCap` / `TimeLimit`.
#[derive(Debug, Clone)]
pub struct Budget {
    pub max_terms: usize,
    pub stage_limit: Option<Duration>,
    deadline: Option<Instant>,
    hard_deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_TERM_CAP, Some(Duration::from_secs(DEFAULT_STAGE_SECONDS)))
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_terms: usize::MAX,
            stage_limit: None,
            deadline: None,
            hard_deadline: None,
        }
    }

    pub fn new(max_terms: usize, stage_limit: Option<Duration>) -> Self {
        let mut b = Budget {
            max_terms,
            stage_limit,
            deadline: None,
            hard_deadline: None,
        };
        b.start_stage();
        b
    }

    /// Adds a wall-clock limit on the whole computation that stage
    /// restarts do not extend.
    pub fn with_total_limit(mut self, limit: Duration) -> Self {
        self.hard_deadline = Some(Instant::now() + limit);
        self
    }

    /// Restarts the per-stage clock.
    pub fn start_stage(&mut self) {
        self.deadline = self.stage_limit.map(|d| Instant::now() + d);
    }

    pub fn check_terms(&self, terms: usize) -> Result<(), AlgebraError> {
        if terms > self.max_terms {
            Err(AlgebraError::TermCap {
                cap: self.max_terms,
                terms,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_time(&self) -> Result<(), AlgebraError> {
        let now = Instant::now();
        if self.deadline.into_iter().chain(self.hard_deadline).any(|d| now > d) {
            Err(AlgebraError::TimeLimit)
        } else {
            Ok(())
        }
    }
}
