//! Independent seeded trials, run on the rayon pool when the `parallel`
//! feature is enabled and sequentially otherwise. Results always come back in
//! trial order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// `Parallel` degrades to `Sequential` without the `parallel` feature.
    pub fn effective(self) -> Self {
        if cfg!(feature = "parallel") {
            self
        } else {
            Execution::Sequential
        }
    }
}

/// Evaluates `trial(i)` for `i in 0..count`.
pub fn run_trials<T, F>(count: usize, execution: Execution, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match execution.effective() {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..count).into_par_iter().map(trial).collect(),
        _ => (0..count).map(trial).collect(),
    }
}

/// Evaluates `f` on every item.
pub fn run_over<I, T, F>(items: &[I], execution: Execution, f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    match execution.effective() {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_preserve_order() {
        let square = |i: usize| i * i;
        let seq = run_trials(100, Execution::Sequential, square);
        let par = run_trials(100, Execution::Parallel, square);
        assert_eq!(seq, par);
        assert_eq!(seq[7], 49);
        let items: Vec<u32> = (0..50).collect();
        assert_eq!(
            run_over(&items, Execution::Parallel, |x| x + 1),
            run_over(&items, Execution::Sequential, |x| x + 1)
        );
    }
}
