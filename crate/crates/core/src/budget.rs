//! Cooperative work budgets for long-running searches.

/// Work accounting; `tick` returns false once the budget is spent.
pub trait Budget {
    fn tick(&mut self, n: u64) -> bool;
    fn used(&self) -> u64;
    fn exhausted(&self) -> bool;
}

/// A fixed number of elementary steps (e.g. reduction steps).
#[derive(Clone, Debug)]
pub struct StepBudget {
    limit: u64,
    used: u64,
}

impl StepBudget {
    pub fn new(limit: u64) -> Self {
        StepBudget { limit, used: 0 }
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used)
    }
}

impl Budget for StepBudget {
    fn tick(&mut self, n: u64) -> bool {
        if self.used + n > self.limit {
            self.used = self.limit;
            return false;
        }
        self.used += n;
        true
    }
    fn used(&self) -> u64 {
        self.used
    }
    fn exhausted(&self) -> bool {
        self.used >= self.limit
    }
}

#[derive(Clone, Debug, Default)]
pub struct Unlimited {
    used: u64,
}

impl Budget for Unlimited {
    fn tick(&mut self, n: u64) -> bool {
        self.used += n;
        true
    }
    fn used(&self) -> u64 {
        self.used
    }
    fn exhausted(&self) -> bool {
        false
    }
}

impl<B: Budget + ?Sized> Budget for &mut B {
    fn tick(&mut self, n: u64) -> bool {
        (**self).tick(n)
    }
    fn used(&self) -> u64 {
        (**self).used()
    }
    fn exhausted(&self) -> bool {
        (**self).exhausted()
    }
}
