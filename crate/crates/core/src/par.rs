//! Data-parallel helpers. With the `parallel` feature the work is spread
//! over the rayon pool; without it, or with [`Execution::Sequential`], it runs
//! on the calling thread. Results are always returned in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Parallel,
    Sequential,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Like [`Execution::map`] followed by concatenation.
    pub fn flat_map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Vec<R> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().flat_map_iter(f).collect(),
            _ => items.iter().flat_map(f).collect(),
        }
    }

    /// In-place sort and dedup of a large vector.
    pub fn sort_dedup<T: Ord + Send>(self, v: &mut Vec<T>) {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => v.par_sort_unstable(),
            _ => v.sort_unstable(),
        }
        v.dedup();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let f = |x: &u64| x * x % 97;
        assert_eq!(
            Execution::Parallel.map(&xs, f),
            Execution::Sequential.map(&xs, f)
        );
        let mut a = Execution::Parallel.flat_map(&xs, |x| vec![x % 7, x % 5]);
        let mut b = Execution::Sequential.flat_map(&xs, |x| vec![x % 7, x % 5]);
        Execution::Parallel.sort_dedup(&mut a);
        Execution::Sequential.sort_dedup(&mut b);
        assert_eq!(a, b);
        assert_eq!(a, (0..7).collect::<Vec<_>>());
    }
}
