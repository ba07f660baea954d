//! Element-wise fan-out used by the grid kernels.
//!
//! Only maps whose outputs are independent go through here; reductions stay
//! sequential so that results are bit-identical whichever path runs.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Minimum number of items handed to one rayon task.
pub const MIN_CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise runs sequentially.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `out[i] = f(i)` for every index.
pub fn fill<T, F>(exec: Execution, out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        out.par_iter_mut()
            .with_min_len(MIN_CHUNK)
            .enumerate()
            .for_each(|(i, o)| *o = f(i));
        return;
    }
    let _ = exec;
    for (i, o) in out.iter_mut().enumerate() {
        *o = f(i);
    }
}

/// Applies `f(i, &mut item)` to every element.
pub fn update<T, F>(exec: Execution, data: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        data.par_iter_mut()
            .with_min_len(MIN_CHUNK)
            .enumerate()
            .for_each(|(i, o)| f(i, o));
        return;
    }
    let _ = exec;
    for (i, o) in data.iter_mut().enumerate() {
        f(i, o);
    }
}

/// Collects `f(i)` for `i in 0..n`; intended for coarse independent tasks.
pub fn map_tasks<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_agree() {
        let f = |i: usize| (i as f64).sqrt().sin();
        let mut a = vec![0.0; 5000];
        let mut b = vec![0.0; 5000];
        fill(Execution::Sequential, &mut a, f);
        fill(Execution::Parallel, &mut b, f);
        assert_eq!(a, b);
        let ta = map_tasks(Execution::Sequential, 37, |i| i * i);
        let tb = map_tasks(Execution::Parallel, 37, |i| i * i);
        assert_eq!(ta, tb);
    }
}
