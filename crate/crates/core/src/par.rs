//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the [`Execution::Parallel`]
//! strategy runs on the rayon global pool, or on whatever pool the caller
//! installed. Without the feature every strategy runs sequentially. Results
//! never depend on the strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps every item and collects results in input order.
pub fn map_collect<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// First `Some` in input order, regardless of which worker finds it first.
pub fn find_map_first<T, R, F>(exec: Execution, items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().find_map_first(f);
    }
    let _ = exec;
    items.iter().find_map(f)
}

/// Whether any item satisfies `pred`.
pub fn any<T, F>(exec: Execution, items: &[T], pred: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().any(pred);
    }
    let _ = exec;
    items.iter().any(pred)
}

/// Splits `0..total` into contiguous chunks, folds each with `chunk`, and
/// sums the partial results.
pub fn sum_over_chunks<F, E>(exec: Execution, total: u64, chunk_len: u64, chunk: F) -> Result<u64, E>
where
    F: Fn(u64, u64) -> Result<u64, E> + Sync + Send,
    E: Send,
{
    let chunk_len = chunk_len.max(1);
    let starts: Vec<u64> = (0..total.div_ceil(chunk_len)).map(|i| i * chunk_len).collect();
    let run = |&start: &u64| chunk(start, (start + chunk_len).min(total));
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return starts
            .par_iter()
            .map(run)
            .try_reduce(|| 0, |a, b| Ok(a + b));
    }
    let _ = exec;
    starts.iter().map(run).try_fold(0, |acc, r| r.map(|x| acc + x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let items: Vec<u64> = (0..1000).collect();
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(map_collect(exec, &items, |x| x * 2)[999], 1998);
            assert_eq!(
                find_map_first(exec, &items, |&x| (x % 7 == 3 && x > 100).then_some(x)),
                Some(101)
            );
            assert!(any(exec, &items, |&x| x == 500));
            let s: Result<u64, ()> =
                sum_over_chunks(exec, 1000, 64, |a, b| Ok((a..b).sum::<u64>()));
            assert_eq!(s, Ok(499_500));
        }
    }
}
