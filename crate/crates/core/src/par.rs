//! Execution policy for the data-parallel inner loops.
//!
//! Every helper produces bit-identical output under both policies: work is
//! split per element and never reduced in a thread-dependent order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

// a derive cannot express a feature-dependent default
#[allow(clippy::derivable_impls)]
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

/// `out[i] = f(i)` for `i in 0..len`.
pub fn map_indexed<T, F>(exec: Exec, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Exec::Sequential => (0..len).map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..len).into_par_iter().map(f).collect(),
    }
}

/// `f(i, &mut data[i])` for every element.
pub fn for_each_mut<T, F>(exec: Exec, data: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    match exec {
        Exec::Sequential => data.iter_mut().enumerate().for_each(|(i, v)| f(i, v)),
        #[cfg(feature = "parallel")]
        Exec::Parallel => data.par_iter_mut().enumerate().for_each(|(i, v)| f(i, v)),
    }
}

/// Apply `f` to consecutive chunks of `chunk` elements (the last may be short).
pub fn for_each_chunk_mut<T, F>(exec: Exec, data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    match exec {
        Exec::Sequential => data
            .chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i, c)),
        #[cfg(feature = "parallel")]
        Exec::Parallel => data
            .par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i, c)),
    }
}
