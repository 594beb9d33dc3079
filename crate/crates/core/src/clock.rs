//! Timestamp source used by scan reports and the usage ledger.
//!
//! Pipelines that need byte-reproducible output (mock provider runs) use
//! [`FixedClock`]; live runs use [`SystemClock`].

use std::time::{SystemTime, UNIX_EPOCH};

/// Supplies unix timestamps (seconds).
pub trait Clock: Send + Sync {
    fn now(&self) -> i64;
}

/// Wall-clock time.
#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> i64 {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs() as i64)
            .unwrap_or(0)
    }
}

/// Constant timestamp, for reproducible runs.
#[derive(Debug, Clone, Copy)]
pub struct FixedClock(pub i64);

impl Clock for FixedClock {
    fn now(&self) -> i64 {
        self.0
    }
}
