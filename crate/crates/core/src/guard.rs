//! Per-thread switch that forbids search code paths.
//!
//! Certificate verification must only re-execute arithmetic. Verifiers hold a
//! [`SearchLock`] while running; any search entry point reached in the
//! meantime panics.

use std::cell::Cell;

thread_local! {
    static FORBIDDEN: Cell<u32> = const { Cell::new(0) };
}

/// While alive, search entry points on this thread panic.
pub struct SearchLock {
    _not_send: std::marker::PhantomData<*const ()>,
}

pub fn forbid_search() -> SearchLock {
    FORBIDDEN.with(|f| f.set(f.get() + 1));
    SearchLock { _not_send: std::marker::PhantomData }
}

impl Drop for SearchLock {
    fn drop(&mut self) {
        FORBIDDEN.with(|f| f.set(f.get() - 1));
    }
}

pub fn search_forbidden() -> bool {
    FORBIDDEN.with(|f| f.get() > 0)
}

pub(crate) fn enter_search(name: &str) {
    assert!(!search_forbidden(), "search path `{name}` reached while searches are forbidden");
}
