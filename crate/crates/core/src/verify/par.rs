/// How the cases of one law are spread over threads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon work stealing; same as `Sequential` without the `parallel`
    /// feature.
    #[default]
    Parallel,
}

/// Maps `f` over `0..n`, keeping the output in index order.
pub fn map_cases<T, F>(n: u64, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_keep_order() {
        let seq = map_cases(100, Execution::Sequential, |i| i * i);
        let par = map_cases(100, Execution::Parallel, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[7], 49);
    }
}
