//! Deliberate faults used as negative controls for the verification suites.
//!
//! A fault is installed per thread for the duration of a closure, so suites
//! running trials in parallel install it inside each trial.

use std::cell::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fault {
    /// Reflections act as the Euclidean mirror in the chord.
    EuclideanMirror,
    /// Half-turns send a rimpoint through a center nudged toward a point depending on it.
    SkewedHalfTurn,
    /// The bowtie point ignores which pairing of ends actually crosses.
    DroppedBowtieLabeling,
}

thread_local! {
    static ACTIVE: Cell<Option<Fault>> = const { Cell::new(None) };
}

pub fn active() -> Option<Fault> {
    ACTIVE.with(Cell::get)
}

pub fn is_active(f: Fault) -> bool {
    active() == Some(f)
}

/// Run `body` with `fault` installed on the current thread.
pub fn with_fault<R>(fault: Option<Fault>, body: impl FnOnce() -> R) -> R {
    struct Restore(Option<Fault>);
    impl Drop for Restore {
        fn drop(&mut self) {
            ACTIVE.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(ACTIVE.with(|c| c.replace(fault)));
    body()
}
