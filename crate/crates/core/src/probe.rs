//! Per-thread probe counter used to measure the work done by one query.
//!
//! Every query routine calls [`hit`] once per memory probe into an index
//! structure. Benchmarks reset the counter, run a query and read it back.

use std::cell::Cell;

thread_local! {
    static PROBES: Cell<u64> = const { Cell::new(0) };
}

/// Records `n` probes.
#[inline(always)]
pub fn hit(n: u64) {
    PROBES.with(|p| p.set(p.get() + n));
}

/// Resets the counter to zero.
pub fn reset() {
    PROBES.with(|p| p.set(0));
}

/// Returns the number of probes recorded since the last reset.
pub fn count() -> u64 {
    PROBES.with(|p| p.get())
}

/// Runs `f` and returns its result with the number of probes it made.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, u64) {
    reset();
    let out = f();
    (out, count())
}
