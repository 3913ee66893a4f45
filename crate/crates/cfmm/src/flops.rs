//! Serialized flop measurement on top of the global [`Counted`] tallies.
//!
//! [`Counted`]: cfmm_core::Counted

use std::sync::Mutex;

use cfmm_core::{flop_tally, FlopTally};

static REGION: Mutex<()> = Mutex::new(());

/// Runs `f` and returns its result with the operations it performed.
/// Regions are serialized, so concurrent callers never see each other's counts.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, FlopTally) {
    let _guard = REGION.lock().unwrap_or_else(|e| e.into_inner());
    let before = flop_tally();
    let out = f();
    (out, flop_tally().since(&before))
}
