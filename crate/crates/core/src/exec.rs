//! Data-parallel execution with a sequential fallback.
//!
//! Every hot loop in the crate is a map over an index range followed by a
//! deterministic merge. With the `parallel` feature enabled the map runs on
//! the rayon pool; without it (or with [`Exec::Sequential`]) it runs inline.
//! Results are always returned in index order, so the two modes produce
//! identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a data-parallel loop is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Exec::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `f` over `0..len`, preserving index order.
    pub fn map_range<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().map(f).collect(),
        }
    }

    /// Maps `f` over a slice, preserving order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }

    /// Finds the first index in `0..len` (in index order) for which `f`
    /// returns `Some`.
    pub fn find_first<T, F>(self, len: usize, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..len).find_map(f),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().find_map_first(f),
        }
    }

    pub fn is_parallel(self) -> bool {
        self != Exec::Sequential
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let seq = Exec::Sequential.map_range(1000, |i| i * i);
        let def = Exec::default().map_range(1000, |i| i * i);
        assert_eq!(seq, def);
        assert_eq!(
            Exec::default().find_first(1000, |i| (i % 97 == 96).then_some(i)),
            Some(96)
        );
    }
}
