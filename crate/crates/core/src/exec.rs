//! Order-stable batch evaluation: rayon when the `parallel` feature is on,
//! a plain iterator otherwise.

/// How a batch of independent cells is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// `Parallel` when compiled with the `parallel` feature.
    pub fn available() -> Execution {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

// Large enough for deep derivations in the coinductive checker.
pub(crate) const WORKER_STACK: usize = 256 << 20;

/// Maps `f` over `items`, preserving order. Falls back to sequential
/// evaluation when the crate is built without `parallel`.
pub fn map_cells<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Runs `f` on a thread with a large stack.
pub fn with_large_stack<R, F>(f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(WORKER_STACK)
            .spawn_scoped(s, f)
            .expect("failed to spawn worker thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}

/// Like [`map_cells`], but every cell runs with a large stack: a dedicated
/// rayon pool when parallel, one scoped thread per cell otherwise.
pub fn map_cells_deep<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .stack_size(WORKER_STACK)
                .build()
                .expect("failed to build worker pool");
            pool.install(|| items.par_iter().map(&f).collect())
        }
        _ => items.iter().map(|item| with_large_stack(|| f(item))).collect(),
    }
}
