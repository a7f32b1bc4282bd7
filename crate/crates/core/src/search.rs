//! Budgeted search outcomes.

/// Default node/candidate limit for every exhaustive search.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Result of a bounded search. Running out of budget is its own outcome and
/// never collapses into `NotFound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    NotFound,
    BudgetExceeded,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }

    pub fn is_budget_exceeded(&self) -> bool {
        matches!(self, Search::BudgetExceeded)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Search<U> {
        match self {
            Search::Found(t) => Search::Found(f(t)),
            Search::NotFound => Search::NotFound,
            Search::BudgetExceeded => Search::BudgetExceeded,
        }
    }
}

/// Marker returned when a [`Meter`] runs dry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutOfBudget;

/// Counts search nodes against a fixed limit.
#[derive(Debug, Clone)]
pub struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    pub fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }

    pub fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.used += 1;
        if self.used > self.limit {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Meter {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}
