//! Switch between rayon and plain iterators.
//!
//! With the `parallel` feature disabled, [`Parallelism::Parallel`] still
//! exists but runs sequentially, so callers never need their own `cfg`s.
//! Every helper returns results in input order regardless of the mode.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parallelism {
    Sequential,
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

impl Parallelism {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

pub(crate) fn map<T, R, F>(mode: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

pub(crate) fn flat_map<T, R, F>(mode: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().flat_map_iter(f).collect();
    }
    let _ = mode;
    items.iter().flat_map(f).collect()
}

/// `f(start..end)` over consecutive chunks of `0..len`, results concatenated.
pub(crate) fn chunked<R, F>(mode: Parallelism, len: u64, chunk: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64, u64) -> Vec<R> + Sync + Send,
{
    let starts: Vec<u64> = (0..len).step_by(chunk.max(1) as usize).collect();
    flat_map(mode, &starts, |&s| f(s, (s + chunk).min(len)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_keep_order() {
        let items: Vec<u32> = (0..1000).collect();
        for mode in [Parallelism::Sequential, Parallelism::Parallel] {
            assert_eq!(map(mode, &items, |x| x * 2)[10], 20);
            let fm = flat_map(mode, &items, |&x| vec![x; (x % 3) as usize]);
            assert!(fm.windows(2).all(|w| w[0] <= w[1]));
            let ch = chunked(mode, 1000, 64, |s, e| (s..e).collect());
            assert_eq!(ch, (0..1000u64).collect::<Vec<_>>());
        }
    }
}
