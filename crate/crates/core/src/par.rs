//! Deterministic fan-out of independent verification cases.
//!
//! Results come back in case order regardless of scheduling, so a report
//! assembled from them is byte-identical whether cases ran on one thread or
//! many. With the `parallel` feature disabled everything runs sequentially.

/// Runs `f` on each case index and returns the results in index order.
/// `jobs = 1` forces sequential execution; `jobs = 0` uses the default
/// thread count.
#[cfg(feature = "parallel")]
pub fn run_cases<R: Send>(cases: u64, jobs: usize, f: impl Fn(u64) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    if jobs == 1 || cases < 2 {
        return (0..cases).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs) // 0 means the rayon default
        .build();
    match pool {
        Ok(pool) => pool.install(|| (0..cases).into_par_iter().map(f).collect()),
        Err(_) => (0..cases).map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn run_cases<R>(cases: u64, _jobs: usize, f: impl Fn(u64) -> R) -> Vec<R> {
    (0..cases).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_deterministic() {
        let seq = run_cases(32, 1, |i| i * i);
        let par = run_cases(32, 0, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[5], 25);
        assert!(run_cases(0, 0, |i| i).is_empty());
    }
}
