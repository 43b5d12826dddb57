//! Work budgets for the enumerations.
//!
//! A budget is a count of abstract work units (subsets visited, search nodes,
//! candidate tuples). Operations either check an up-front estimate against it
//! or charge it incrementally in chunks; the shared counter is atomic so that
//! parallel workers draw from the same allowance.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    /// Fails if an up-front work estimate does not fit in what is left.
    pub fn require(&self, needed: u128) -> Result<()> {
        let left = self.limit.saturating_sub(self.used()) as u128;
        if needed > left {
            return Err(Error::BudgetExceeded {
                needed,
                budget: self.limit,
            });
        }
        Ok(())
    }

    /// Charges `units` of work. The charge is recorded even when it fails so
    /// that every worker sees the exhaustion.
    pub fn charge(&self, units: u64) -> Result<()> {
        let before = self.used.fetch_add(units, Ordering::Relaxed);
        let after = before.saturating_add(units);
        if after > self.limit {
            return Err(Error::BudgetExceeded {
                needed: after as u128,
                budget: self.limit,
            });
        }
        Ok(())
    }

    pub fn exhausted(&self) -> bool {
        self.used() > self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// Binomial coefficient in u128, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is always integral.
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(9, 3), 84);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(125, 4), 9_691_375);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn charge_reports_exhaustion() {
        let b = Budget::new(10);
        assert!(b.charge(6).is_ok());
        assert!(b.charge(6).is_err());
        assert!(b.exhausted());
        assert!(Budget::new(5).require(6).is_err());
    }
}
