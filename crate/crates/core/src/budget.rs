//! Enumeration budgets, measured in evaluated cells.

use thiserror::Error;

pub const BUDGET_ENV: &str = "PMIDEAL_BUDGET";
pub const DEFAULT_BUDGET: u128 = 1 << 34;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what}: projected {projected} cells exceeds the budget of {limit}")]
pub struct BudgetExceeded {
    pub what: String,
    pub projected: u128,
    pub limit: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_cells: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cells: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(max_cells: u128) -> Self {
        Budget { max_cells }
    }

    pub fn unlimited() -> Self {
        Budget { max_cells: u128::MAX }
    }

    /// Reads `PMIDEAL_BUDGET`, falling back to the default when unset or
    /// unparsable.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }

    /// `projected` of `None` means the count overflowed `u128`.
    pub fn check(&self, what: impl Into<String>, projected: Option<u128>) -> Result<(), BudgetExceeded> {
        match projected {
            Some(p) if p <= self.max_cells => Ok(()),
            p => Err(BudgetExceeded {
                what: what.into(),
                projected: p.unwrap_or(u128::MAX),
                limit: self.max_cells,
            }),
        }
    }
}
