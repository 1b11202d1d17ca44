//! Per-thread counting of top-level field multiplications.
//!
//! Counting is off unless a [`count_muls`] scope is active on the current
//! thread. Each thread accumulates into its own cell, so parallel workers
//! never contend; callers merge per-stream totals themselves.

use std::cell::Cell;

thread_local! {
    static ACTIVE: Cell<bool> = const { Cell::new(false) };
    static COUNT: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub(crate) fn tick() {
    if ACTIVE.with(Cell::get) {
        COUNT.with(|c| c.set(c.get() + 1));
    }
}

/// Runs `f` and returns its result together with the number of
/// multiplications it performed on this thread. Scopes nest.
pub fn count_muls<R>(f: impl FnOnce() -> R) -> (R, u64) {
    let was_active = ACTIVE.with(|a| a.replace(true));
    let before = COUNT.with(Cell::get);
    let out = f();
    let after = COUNT.with(Cell::get);
    ACTIVE.with(|a| a.set(was_active));
    if !was_active {
        COUNT.with(|c| c.set(before));
    }
    (out, after - before)
}
