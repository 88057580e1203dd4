//! Thread-count control.
//!
//! Every parallel section in the crate collects per-task results in task
//! order and reduces them sequentially, so outputs do not depend on the
//! number of worker threads.

use rayon::ThreadPoolBuilder;

/// Environment variable capping worker parallelism.
pub const THREADS_ENV: &str = "FFSELECT_THREADS";

/// Reads [`THREADS_ENV`]; `None` when unset, empty, zero or unparsable.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs `f` inside a dedicated pool with `threads` workers.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    match ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
