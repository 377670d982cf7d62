//! Execution policy: every data-parallel map in the crate runs either on
//! rayon or on a plain iterator, selected at runtime. The two paths perform
//! the same scalar operations per item and never reduce across items, so
//! their outputs are bit-identical — `Sequential` exists for benchmarking
//! and for builds with the `parallel` feature disabled, where `Parallel`
//! silently degrades to the sequential path.

/// How per-item maps are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecPolicy {
    /// Plain single-threaded iteration.
    Sequential,
    /// rayon work-stealing threads (requires the `parallel` feature;
    /// otherwise equivalent to `Sequential`).
    #[default]
    Parallel,
}

/// Order-preserving map over an index range.
pub(crate) fn map_indexed<U, F>(policy: ExecPolicy, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy == ExecPolicy::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = policy;
    (0..n).map(f).collect()
}

/// Order-preserving map over a slice.
pub(crate) fn map_slice<T, U, F>(policy: ExecPolicy, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy == ExecPolicy::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = policy;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree_bitwise() {
        let xs: Vec<f64> = (0..257).map(|i| 0.37 * i as f64 - 40.0).collect();
        let f = |x: &f64| (x.sin() * x.exp_m1()).mul_add(1.25, *x);
        let seq = map_slice(ExecPolicy::Sequential, &xs, f);
        let par = map_slice(ExecPolicy::Parallel, &xs, f);
        assert_eq!(seq.len(), par.len());
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn indexed_map_preserves_order() {
        let out = map_indexed(ExecPolicy::Parallel, 1000, |i| i * i);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, i * i);
        }
    }
}
