//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the independent work items of grid
//! scans and batch suites run on the rayon pool; without it the same entry
//! points run sequentially. Results come back in input order either way, so
//! outputs are identical across both builds.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over the items, in parallel when the feature is enabled.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Always-sequential twin of [`par_map`], kept callable from benches so the
/// two code paths can be compared in one binary.
pub fn seq_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Caps the global worker pool; called once by the CLI when
/// `FOLIAGE_THREADS` is set. Later calls are ignored by rayon, which keeps
/// the first successful configuration.
pub fn cap_threads(n: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_and_seq_agree() {
        let items: Vec<u64> = (0..100).collect();
        let f = |x: &u64| x * x + 1;
        assert_eq!(par_map(&items, f), seq_map(&items, f));
    }
}
