//! Multi-threaded drivers. Work is split into shards whose results merge
//! deterministically, so output does not depend on the number of workers.

use std::thread;

use fopkit_core::error::Result;
use fopkit_core::fop::Fop;
use fopkit_core::harness::{check_pullback_range, source_space, PullbackReport};
use fopkit_core::problems::DecisionProblem;
use fopkit_core::uniformity::{check_shard, merge_shards, UniformityQuery, UniformityReport};

/// Runs `job(0..workers)` on scoped threads and returns the results in
/// worker order.
fn fan_out<T: Send>(workers: usize, job: impl Fn(usize) -> T + Sync) -> Vec<T> {
    if workers <= 1 {
        return vec![job(0)];
    }
    let job = &job;
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers).map(|w| s.spawn(move || job(w))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

pub fn check_uniformity(p: &dyn DecisionProblem, q: &UniformityQuery, workers: usize) -> Result<UniformityReport> {
    q.validate()?;
    let workers = workers.max(1);
    let mut verdicts = Vec::new();
    for &m in &q.m_range {
        let shards = fan_out(workers, |w| check_shard(p, q.k, m, &q.options, w, workers))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        verdicts.push((m, merge_shards(shards)));
    }
    Ok(UniformityReport {
        problem: p.name().to_string(),
        n: q.n,
        k: q.k,
        verdicts,
    })
}

pub fn check_pullback(fop: &Fop, size_bound: u32, budget: u64, workers: usize) -> Result<PullbackReport> {
    let workers = workers.max(1) as u64;
    let mut report = PullbackReport::default();
    for n in 2..=size_bound {
        let (_, count) = source_space(fop, n, budget)?;
        let chunk = count.div_ceil(workers);
        let parts = fan_out(workers as usize, |w| {
            let start = (w as u64 * chunk).min(count);
            check_pullback_range(fop, n, start, (start + chunk).min(count), budget)
        });
        for part in parts {
            report = report.merge(part?);
        }
        if report.mismatch.is_some() {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fopkit_core::problems::problem;
    use fopkit_core::problems::reductions::swap_1_max;
    use fopkit_core::uniformity::Options;
    use fopkit_core::DEFAULT_BUDGET;

    #[test]
    fn results_do_not_depend_on_workers() {
        let p = problem("hp_0max").unwrap();
        let q = UniformityQuery {
            n: 2,
            k: 2,
            m_range: vec![2, 3, 4],
            options: Options::default(),
        };
        let one = check_uniformity(&p, &q, 1).unwrap();
        for w in [2, 3, 7] {
            assert_eq!(check_uniformity(&p, &q, w).unwrap(), one);
        }
        let fop = swap_1_max().unwrap();
        let seq = check_pullback(&fop, 3, DEFAULT_BUDGET, 1).unwrap();
        assert_eq!(check_pullback(&fop, 3, DEFAULT_BUDGET, 4).unwrap(), seq);
    }
}
