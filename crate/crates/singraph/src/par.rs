//! Switch between rayon and sequential execution.
//!
//! With the `parallel` feature enabled the data-parallel path is used by
//! default, but it can be turned off at runtime (the benchmark suite compares
//! both paths in one binary). Without the feature everything is sequential.

use std::sync::atomic::{AtomicBool, Ordering};

static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Disable (or re-enable) the data-parallel path at runtime.
pub fn force_sequential(on: bool) {
    FORCE_SEQUENTIAL.store(on, Ordering::Relaxed);
}

/// Whether work will actually run in parallel.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.load(Ordering::Relaxed)
}

/// Apply `f` to every item, keeping the `Some` results.
pub fn maybe_parallel_filter_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().filter_map(f).collect();
    }
    items.into_iter().filter_map(f).collect()
}
