//! Multi-threaded subset search over contiguous rank blocks.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use polydual_core::search::{BlockResult, SearchPlan};
use polydual_core::SearchCertificate;

/// Blocks handed out per worker; more blocks balance load better.
const BLOCKS_PER_JOB: u128 = 16;

/// Runs `plan` on `jobs` threads. Blocks are claimed in increasing rank
/// order and blocks after the first witness are skipped, so the merged
/// certificate equals the single-threaded one.
pub fn run(plan: &SearchPlan<'_>, jobs: usize) -> SearchCertificate {
    let total = plan.total();
    if jobs <= 1 || total < 2 {
        return plan.certificate(&[plan.run_block(0, total)]);
    }
    let nblocks = (jobs as u128 * BLOCKS_PER_JOB).min(total);
    let block_len = total.div_ceil(nblocks);
    let nblocks = total.div_ceil(block_len) as usize;

    let next = AtomicUsize::new(0);
    let first_witness = AtomicU64::new(u64::MAX);
    let results: Mutex<Vec<Option<BlockResult>>> = Mutex::new(vec![None; nblocks]);
    thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                if k >= nblocks || k as u64 > first_witness.load(Ordering::SeqCst) {
                    break;
                }
                let start = k as u128 * block_len;
                let block = plan.run_block(start, start + block_len);
                if block.witness.is_some() {
                    first_witness.fetch_min(k as u64, Ordering::SeqCst);
                }
                results.lock().expect("no worker panicked")[k] = Some(block);
            });
        }
    });
    let results = results.into_inner().expect("no worker panicked");
    let cut = first_witness.into_inner();
    let blocks: Vec<BlockResult> = results
        .into_iter()
        .enumerate()
        .take_while(|&(k, _)| k as u64 <= cut)
        .map(|(_, b)| b.expect("every block up to the first witness was searched"))
        .collect();
    plan.certificate(&blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use polydual_core::construct::{cube, ngon, prism};
    use polydual_core::SearchOptions;

    #[test]
    fn parallel_matches_serial() {
        for q in [cube(3).unwrap(), prism(&ngon(5).unwrap()).unwrap()] {
            let plan = SearchPlan::new(&q, SearchOptions::default()).unwrap();
            let serial = run(&plan, 1);
            for jobs in [2, 3, 4, 8] {
                assert_eq!(run(&plan, jobs), serial, "jobs = {jobs}");
            }
        }
    }
}
