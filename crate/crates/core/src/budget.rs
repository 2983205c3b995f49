use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Environment variable overriding the default enumeration budget.
pub const BUDGET_ENV: &str = "SYMPROG_BUDGET";

/// Default cap on enumeration steps.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Upper bound on the number of items an enumerator may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(u64);

impl Budget {
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::Input("budget must be positive".into()));
        }
        Ok(Budget(limit))
    }

    /// Reads `SYMPROG_BUDGET`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(raw) => {
                let limit = raw
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Input(format!("{BUDGET_ENV}={raw:?}: {e}")))?;
                Budget::new(limit)
            }
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn limit(&self) -> u64 {
        self.0
    }

    pub fn check(&self, required: &BigUint) -> Result<()> {
        if *required > BigUint::from(self.0) {
            Err(Error::Budget { required: required.clone(), budget: self.0 })
        } else {
            Ok(())
        }
    }

    pub fn check_u128(&self, required: u128) -> Result<()> {
        self.check(&BigUint::from(required))
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}
