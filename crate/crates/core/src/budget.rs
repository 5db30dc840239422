//! Step budgets, progress reporting and cancellation for long scans.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use crate::{Error, Result};

/// Default number of residue steps a single scan may take.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Steps between two progress callbacks.
pub const PROGRESS_INTERVAL: u64 = 10_000_000;

type ProgressFn = dyn Fn(u64) + Send + Sync;

/// Limits applied to every scan that iterates a residue recurrence.
///
/// `limit` bounds each individual scan. Cloning a `Budget` shares the
/// progress callback, the cancellation flag and the running step total.
#[derive(Clone)]
pub struct Budget {
    limit: u64,
    interval: u64,
    progress: Option<Arc<ProgressFn>>,
    cancel: Option<Arc<AtomicBool>>,
    used: Arc<AtomicU64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

impl fmt::Debug for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Budget")
            .field("limit", &self.limit)
            .field("used", &self.steps_used())
            .finish()
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            interval: PROGRESS_INTERVAL,
            progress: None,
            cancel: None,
            used: Arc::new(AtomicU64::new(0)),
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    /// Calls `f` with the step count of the running scan every `interval` steps.
    pub fn with_progress<F>(mut self, interval: u64, f: F) -> Self
    where
        F: Fn(u64) + Send + Sync + 'static,
    {
        self.interval = interval.max(1);
        self.progress = Some(Arc::new(f));
        self
    }

    /// Scans poll `flag` at each progress interval and stop once it is set.
    pub fn with_cancel(mut self, flag: Arc<AtomicBool>) -> Self {
        self.cancel = Some(flag);
        self
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Total steps taken by all finished scans sharing this budget.
    pub fn steps_used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    /// Fails up front when a scan of `steps` is known not to fit.
    pub fn check(&self, steps: u64) -> Result<()> {
        if steps > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn meter(&self) -> Meter<'_> {
        let mut meter = Meter {
            budget: self,
            steps: 0,
            next_event: 0,
            next_report: self.interval,
        };
        meter.next_event = meter.compute_next_event();
        meter
    }
}

/// Step counter for one scan.
pub struct Meter<'a> {
    budget: &'a Budget,
    steps: u64,
    next_event: u64,
    next_report: u64,
}

impl Meter<'_> {
    #[inline]
    pub fn step(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps >= self.next_event {
            self.event()
        } else {
            Ok(())
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn compute_next_event(&self) -> u64 {
        let over = self.budget.limit.saturating_add(1);
        over.min(self.next_report)
    }

    #[cold]
    fn event(&mut self) -> Result<()> {
        if self.steps > self.budget.limit {
            return Err(Error::BudgetExceeded {
                limit: self.budget.limit,
            });
        }
        if self.steps >= self.next_report {
            if let Some(progress) = &self.budget.progress {
                progress(self.steps);
            }
            if let Some(flag) = &self.budget.cancel {
                if flag.load(Ordering::Relaxed) {
                    return Err(Error::Interrupted { steps: self.steps });
                }
            }
            self.next_report = self.next_report.saturating_add(self.budget.interval);
        }
        self.next_event = self.compute_next_event();
        Ok(())
    }
}

impl Drop for Meter<'_> {
    fn drop(&mut self) {
        self.budget.used.fetch_add(self.steps, Ordering::Relaxed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Mutex;

    #[test]
    fn limit_is_inclusive() {
        let budget = Budget::new(3);
        let mut meter = budget.meter();
        for _ in 0..3 {
            meter.step().unwrap();
        }
        assert_eq!(meter.step(), Err(Error::BudgetExceeded { limit: 3 }));
    }

    #[test]
    fn progress_and_cancel() {
        let seen = Arc::new(Mutex::new(Vec::new()));
        let flag = Arc::new(AtomicBool::new(false));
        let sink = seen.clone();
        let budget = Budget::new(100)
            .with_progress(10, move |s| sink.lock().unwrap().push(s))
            .with_cancel(flag.clone());
        {
            let mut meter = budget.meter();
            for _ in 0..25 {
                meter.step().unwrap();
            }
            flag.store(true, Ordering::Relaxed);
            let err = (0..10).map(|_| meter.step()).find_map(|r| r.err());
            assert_eq!(err, Some(Error::Interrupted { steps: 30 }));
        }
        assert_eq!(*seen.lock().unwrap(), vec![10, 20, 30]);
        assert_eq!(budget.steps_used(), 30);
    }
}
