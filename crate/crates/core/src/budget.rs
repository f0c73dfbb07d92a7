use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// A wall-clock deadline shared by long-running checks.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn seconds(secs: u64) -> Self {
        Budget {
            deadline: Some(Instant::now() + Duration::from_secs(secs)),
        }
    }

    pub fn exhausted(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn check(&self, what: &str) -> Result<()> {
        if self.exhausted() {
            Err(Error::Budget(what.to_string()))
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}
