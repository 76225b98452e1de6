//! Sequential or rayon-backed execution of independent jobs.
//!
//! Results are always returned in input order, so the execution mode never
//! changes what a batch produces.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecutionMode {
    Sequential,
    /// Rayon's global pool. Falls back to sequential without the `parallel` feature.
    #[default]
    Parallel,
    /// A dedicated pool with this many threads.
    Threads(usize),
}

impl ExecutionMode {
    pub fn from_jobs(jobs: Option<usize>) -> Self {
        match jobs {
            None | Some(0) => ExecutionMode::Parallel,
            Some(1) => ExecutionMode::Sequential,
            Some(n) => ExecutionMode::Threads(n),
        }
    }

    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            ExecutionMode::Sequential => items.into_iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            ExecutionMode::Parallel => {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            #[cfg(feature = "parallel")]
            ExecutionMode::Threads(n) => {
                use rayon::prelude::*;
                match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                    Ok(pool) => pool.install(|| items.into_par_iter().map(f).collect()),
                    Err(_) => items.into_iter().map(f).collect(),
                }
            }
            #[cfg(not(feature = "parallel"))]
            _ => items.into_iter().map(f).collect(),
        }
    }

    /// First item (in input order) for which `f` returns `Some`.
    pub fn find_map_first<T, R, F>(self, items: Vec<T>, f: F) -> Option<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> Option<R> + Sync + Send,
    {
        match self {
            ExecutionMode::Sequential => items.into_iter().find_map(f),
            #[cfg(feature = "parallel")]
            ExecutionMode::Parallel => {
                use rayon::prelude::*;
                items.into_par_iter().find_map_first(f)
            }
            #[cfg(feature = "parallel")]
            ExecutionMode::Threads(n) => {
                use rayon::prelude::*;
                match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                    Ok(pool) => pool.install(|| items.into_par_iter().find_map_first(f)),
                    Err(_) => items.into_iter().find_map(f),
                }
            }
            #[cfg(not(feature = "parallel"))]
            _ => items.into_iter().find_map(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let items: Vec<u64> = (0..200).collect();
        let seq = ExecutionMode::Sequential.map(items.clone(), |x| x * x);
        assert_eq!(ExecutionMode::Parallel.map(items.clone(), |x| x * x), seq);
        assert_eq!(ExecutionMode::Threads(3).map(items.clone(), |x| x * x), seq);
        let first = |x: u64| (x % 37 == 36).then_some(x);
        assert_eq!(ExecutionMode::Parallel.find_map_first(items.clone(), first), Some(36));
        assert_eq!(ExecutionMode::Sequential.find_map_first(items, first), Some(36));
    }
}
