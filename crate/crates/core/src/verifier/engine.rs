//! Chunked, parallel enumeration of k-subsets.
//!
//! The subset family is cut into fixed-size chunks: consecutive colex ranks in
//! exhaustive mode, consecutive sample indices in sample mode. Chunk `c` of a
//! sample run draws from its own ChaCha stream `c`, so the subsets visited do not
//! depend on the worker count. Workers pull chunk indices from a shared counter and
//! fragments are merged in chunk order, which makes every report a pure function
//! of the job.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::verifier::colex;
use crate::verifier::{Mode, RunConfig};

pub(crate) const EXHAUSTIVE_CHUNK: u128 = 1 << 16;
pub(crate) const SAMPLE_CHUNK: u64 = 1 << 12;

pub(crate) trait SubsetTask: Sync {
    type Scratch;
    type Fragment: Send;

    fn scratch(&self) -> Self::Scratch;
    fn fragment(&self) -> Self::Fragment;
    fn visit(&self, s: &[usize], scratch: &mut Self::Scratch, out: &mut Self::Fragment);
    fn merge(&self, into: &mut Self::Fragment, next: Self::Fragment);
}

/// Number of subsets the run will visit.
pub(crate) fn planned(n: usize, k: usize, cfg: &RunConfig) -> Result<u128> {
    if k == 0 || k > n {
        return Err(Error::domain(format!(
            "subset size {k} must lie in 1..={n} (the vertex count)"
        )));
    }
    match cfg.mode {
        Mode::Exhaustive => {
            let total = colex::binomial(n as u64, k as u64);
            if total > cfg.exhaustive_cap {
                return Err(Error::Capacity {
                    what: "exhaustive subset count",
                    requested: total,
                    cap: cfg.exhaustive_cap,
                });
            }
            Ok(total)
        }
        Mode::Sample { samples, .. } => Ok(samples as u128),
    }
}

pub(crate) fn run<T: SubsetTask>(task: &T, n: usize, k: usize, cfg: &RunConfig) -> Result<T::Fragment> {
    let total = planned(n, k, cfg)?;
    let chunk_len = match cfg.mode {
        Mode::Exhaustive => EXHAUSTIVE_CHUNK,
        Mode::Sample { .. } => SAMPLE_CHUNK as u128,
    };
    let chunks = total.div_ceil(chunk_len) as usize;
    let workers = cfg.workers.clamp(1, chunks.max(1));
    let next = AtomicUsize::new(0);
    let done: Mutex<Vec<(usize, T::Fragment)>> = Mutex::new(Vec::with_capacity(chunks));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut scratch = task.scratch();
                let mut s = vec![0usize; k];
                let mut local = Vec::new();
                loop {
                    let c = next.fetch_add(1, Ordering::Relaxed);
                    if c >= chunks {
                        break;
                    }
                    let lo = c as u128 * chunk_len;
                    let len = (total - lo).min(chunk_len) as u64;
                    let mut frag = task.fragment();
                    match cfg.mode {
                        Mode::Exhaustive => {
                            colex::unrank(lo, k, n, &mut s);
                            for i in 0..len {
                                if i > 0 {
                                    colex::next(&mut s, n);
                                }
                                task.visit(&s, &mut scratch, &mut frag);
                            }
                        }
                        Mode::Sample { seed, .. } => {
                            let mut rng = ChaCha8Rng::seed_from_u64(seed);
                            rng.set_stream(c as u64);
                            for _ in 0..len {
                                let picked = index::sample(&mut rng, n, k);
                                for (x, v) in s.iter_mut().zip(picked.iter()) {
                                    *x = v;
                                }
                                s.sort_unstable();
                                task.visit(&s, &mut scratch, &mut frag);
                            }
                        }
                    }
                    local.push((c, frag));
                }
                done.lock().unwrap().extend(local);
            });
        }
    });

    let mut parts = done.into_inner().unwrap();
    parts.sort_unstable_by_key(|(c, _)| *c);
    let mut acc = task.fragment();
    for (_, frag) in parts {
        task.merge(&mut acc, frag);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Collect;

    impl SubsetTask for Collect {
        type Scratch = ();
        type Fragment = Vec<Vec<usize>>;
        fn scratch(&self) {}
        fn fragment(&self) -> Self::Fragment {
            Vec::new()
        }
        fn visit(&self, s: &[usize], _: &mut (), out: &mut Self::Fragment) {
            out.push(s.to_vec());
        }
        fn merge(&self, into: &mut Self::Fragment, next: Self::Fragment) {
            into.extend(next);
        }
    }

    fn cfg(mode: Mode, workers: usize) -> RunConfig {
        RunConfig { mode, workers, ..RunConfig::default() }
    }

    #[test]
    fn exhaustive_visits_every_subset_once_in_colex_order() {
        let n = 40;
        let all = run(&Collect, n, 3, &cfg(Mode::Exhaustive, 3)).unwrap();
        assert_eq!(all.len() as u128, colex::binomial(40, 3));
        for (r, s) in all.iter().enumerate() {
            assert_eq!(colex::rank(s), r as u128);
        }
    }

    #[test]
    fn sampling_ignores_worker_count() {
        let mode = Mode::Sample { samples: 10_000, seed: 9 };
        let one = run(&Collect, 30, 5, &cfg(mode, 1)).unwrap();
        let many = run(&Collect, 30, 5, &cfg(mode, 7)).unwrap();
        assert_eq!(one, many);
        assert_eq!(one.len(), 10_000);
        assert!(one.iter().all(|s| s.windows(2).all(|w| w[0] < w[1]) && s[4] < 30));
        let other = run(&Collect, 30, 5, &cfg(Mode::Sample { samples: 10_000, seed: 10 }, 1)).unwrap();
        assert_ne!(one, other);
    }

    #[test]
    fn bad_sizes_and_caps() {
        assert!(run(&Collect, 5, 6, &cfg(Mode::Exhaustive, 1)).is_err());
        assert!(run(&Collect, 5, 0, &cfg(Mode::Exhaustive, 1)).is_err());
        let small = RunConfig { exhaustive_cap: 10, ..RunConfig::default() };
        assert!(matches!(run(&Collect, 6, 3, &small), Err(Error::Capacity { .. })));
    }
}
