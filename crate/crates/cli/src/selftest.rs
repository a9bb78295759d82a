//! Acceptance checks at n <= 32, with their own brute-force oracles.

use std::collections::HashSet;
use std::time::Instant;

use pqcolor_core::cfls::{psi_coloring, CflsColoring, CflsParams};
use pqcolor_core::claims::{confinement_bound, dot_property, leftover_star_bound, star_rank, DotInstance};
use pqcolor_core::dotprod::{dotprod_color_bound, phi_coloring, DotParams};
use pqcolor_core::gf::{affine_dim, rank, Elem, GaloisField};
use pqcolor_core::structures::wildtime_feasible;
use pqcolor_core::verifier::{canonical_json, colex, count_palette, scan_deficient, scan_striped, verify_pq, RunConfig, VerifyJob};
use pqcolor_core::EdgeColoring;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const TRIALS: u64 = 2_000;
const SEED: u64 = 7;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: pqcolor_core::Error) -> String {
    e.to_string()
}

/// Reruns a job on 1 and 2 workers and remembers any report that differs.
#[derive(Default)]
struct Twice {
    compared: usize,
    mismatches: Vec<String>,
}

impl Twice {
    fn run<R, F>(&mut self, label: &str, f: F) -> Result<R, String>
    where
        R: serde::Serialize,
        F: Fn(usize) -> pqcolor_core::Result<R>,
    {
        let one = f(1).map_err(err)?;
        let two = f(2).map_err(err)?;
        let a = canonical_json(&one).map_err(err)?;
        let b = canonical_json(&two).map_err(err)?;
        self.compared += 1;
        if a != b {
            self.mismatches.push(label.to_string());
        }
        Ok(two)
    }
}

fn exhaustive(workers: usize) -> RunConfig {
    RunConfig::exhaustive().with_workers(workers)
}

/// φ_d for prime `q` from its definition, on base-(q-1) digit vectors.
fn phi_palette_oracle(q: u64, d: usize, n: usize) -> usize {
    let vec_of = |i: usize| {
        let mut v = vec![0u64; d];
        let mut r = i as u64;
        for slot in v.iter_mut().rev() {
            *slot = r % (q - 1) + 1;
            r /= q - 1;
        }
        v
    };
    let dotp = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<u64>() % q;
    let mut seen = HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let (mut x, mut y) = (vec_of(i), vec_of(j));
            if y < x {
                std::mem::swap(&mut x, &mut y);
            }
            let t = (0..d).position(|t| x[t] != y[t]).unwrap();
            let s = (x[t] + y[t]) % q;
            let xy = dotp(&x, &y);
            seen.insert(if xy == 0 {
                (0, t, s)
            } else if xy == dotp(&x, &x) {
                (1, t, s)
            } else if xy == dotp(&y, &y) {
                (2, t, s)
            } else {
                (3, d, xy)
            });
        }
    }
    seen.len()
}

fn palette() -> Outcome {
    let mut parts = Vec::new();
    for (n, d, q, bound) in [(32usize, 3usize, 5u32, 49u64), (16, 4, 3, 38)] {
        let params = DotParams::select(n, d).map_err(err)?;
        ensure(params.q() == q && dotprod_color_bound(&params) == bound, || {
            format!("n={n} d={d}: q={} bound={}", params.q(), dotprod_color_bound(&params))
        })?;
        let used = count_palette(&phi_coloring(n, d).map_err(err)?);
        let oracle = phi_palette_oracle(q as u64, d, n);
        ensure(used == oracle && used as u64 <= bound, || {
            format!("n={n} d={d}: {used} colors, oracle {oracle}, bound {bound}")
        })?;
        parts.push(format!("n={n} d={d} q={q}: {used} <= {bound}"));
    }
    Ok(parts.join("; "))
}

/// ψ_1 (or c_1) on every vertex of `{0,1}^4`.
fn full_level_one(signed: bool) -> Result<EdgeColoring, String> {
    let params = CflsParams::from_beta(1, 2).map_err(err)?;
    Ok(CflsColoring::new(16, params, signed).map_err(err)?.into_coloring())
}

fn striped_by_definition(c: &EdgeColoring) -> u64 {
    let n = c.n();
    let val = |u, v| c.color_value(u, v).unwrap();
    let mut count = 0;
    let mut s = vec![0, 1, 2, 3];
    loop {
        let [a, b, x, d] = [s[0], s[1], s[2], s[3]];
        let m = [(val(a, b), val(x, d)), (val(a, x), val(b, d)), (val(a, d), val(b, x))];
        if m.iter().all(|(u, v)| u == v) && m[0].0 != m[1].0 && m[1].0 != m[2].0 && m[0].0 != m[2].0 {
            count += 1;
        }
        if !colex::next(&mut s, n) {
            return count;
        }
    }
}

fn striped(twice: &mut Twice) -> Outcome {
    let psi = full_level_one(true)?;
    let plain = full_level_one(false)?;
    let signed = twice.run("striped psi_1", |w| scan_striped(&psi, &exhaustive(w)))?;
    let unsigned = twice.run("striped c_1", |w| scan_striped(&plain, &exhaustive(w)))?;
    let (brute_psi, brute_plain) = (striped_by_definition(&psi), striped_by_definition(&plain));
    ensure(signed.striped_count == 0 && brute_psi == 0, || {
        format!("psi_1 has {} striped ({brute_psi} by definition)", signed.striped_count)
    })?;
    ensure(unsigned.striped_count == brute_plain && brute_plain > 0, || {
        format!("c_1: scan {} vs definition {brute_plain}", unsigned.striped_count)
    })?;
    let psi32 = psi_coloring(32, 3).map_err(err)?;
    let big = twice.run("striped psi_3", |w| scan_striped(&psi32, &exhaustive(w)))?;
    ensure(big.striped_count == 0, || format!("psi_3 n=32 has {} striped", big.striped_count))?;
    Ok(format!(
        "psi_1 on {{0,1}}^4: 0 striped, c_1: {brute_plain}; psi_3 n=32: 0 of {}",
        big.inspected
    ))
}

fn structure(twice: &mut Twice) -> Outcome {
    let psi = full_level_one(true)?;
    let mut parts = Vec::new();
    for k in 3..=4 {
        let r = twice.run(&format!("deficient psi_1 k={k}"), |w| scan_deficient(&psi, k, &exhaustive(w)))?;
        ensure(r.tallies.leftover == r.deficient_count, || format!("k={k}: {:?} of {}", r.tallies, r.deficient_count))?;
        parts.push(format!("k={k}: {}/{} leftover", r.tallies.leftover, r.deficient_count));
    }
    Ok(format!("psi_1 on {{0,1}}^4 {}", parts.join(", ")))
}

fn no_leftover_six(twice: &mut Twice) -> Outcome {
    let phi = phi_coloring(32, 3).map_err(err)?;
    let r = twice.run("phi_3 k=6", |w| scan_deficient(&phi, 6, &exhaustive(w)))?;
    ensure(r.tallies.leftover == 0, || format!("{} leftover 6-subsets", r.tallies.leftover))?;
    Ok(format!("0 leftover among {} deficient of {} 6-subsets", r.deficient_count, r.inspected))
}

fn product_six(twice: &mut Twice) -> Outcome {
    let product = psi_coloring(32, 3)
        .and_then(|a| a.product(&phi_coloring(32, 3)?))
        .map_err(err)?;
    let r = twice.run("(6,6) product", |w| {
        verify_pq(&product, &VerifyJob { run: exhaustive(w), ..VerifyJob::new(6, 6) })
    })?;
    ensure(r.is_pq_coloring(), || format!("{} violations", r.violation_count))?;
    Ok(format!("psi_3 x phi_3 n=32: 0 violations over {}", r.inspected))
}

fn eight(twice: &mut Twice) -> Outcome {
    let phi = phi_coloring(16, 4).map_err(err)?;
    let scan = twice.run("phi_4 k=8", |w| scan_deficient(&phi, 8, &exhaustive(w)))?;
    ensure(scan.tallies.leftover == 0, || format!("{} leftover 8-subsets", scan.tallies.leftover))?;
    let product = psi_coloring(16, 5).and_then(|a| a.product(&phi)).map_err(err)?;
    let r = twice.run("(8,8) product", |w| {
        verify_pq(&product, &VerifyJob { run: exhaustive(w), ..VerifyJob::new(8, 8) })
    })?;
    ensure(r.is_pq_coloring(), || format!("{} violations", r.violation_count))?;
    Ok(format!("psi_5 x phi_4 n=16: 0 violations over {}", r.inspected))
}

fn ceil_log2(x: u64) -> i64 {
    (0..64).find(|&k| 1u64 << k >= x).unwrap()
}

/// Tries every split sequence directly.
fn feasible_oracle(p: u64, d: u64, t: u64, s: u64, i: u64) -> bool {
    if s == p - 1 {
        return true;
    }
    let rem = p - s;
    (1..=rem / 2).any(|x| {
        ceil_log2(x) + ceil_log2(rem - x) < d as i64
            && ceil_log2(rem - x) <= d as i64 - i as i64 - t as i64
            && feasible_oracle(p, d, t, s + x, i + 1)
    })
}

fn feasibility() -> Outcome {
    for (p, d, expect) in [(6u64, 3u64, false), (8, 4, false), (5, 3, true)] {
        let start = Instant::now();
        let found = wildtime_feasible(p, d, 0);
        let took = start.elapsed();
        ensure(found.is_some() == expect && feasible_oracle(p, d, 0, 0, 1) == expect, || {
            format!("({p},{d}): got {found:?}")
        })?;
        ensure(found.as_ref().is_none_or(|s| s.is_valid()), || format!("({p},{d}): invalid witness"))?;
        ensure(took.as_millis() < 1, || format!("({p},{d}) took {took:?}"))?;
    }
    for p in 2..=12 {
        for d in 1..=6 {
            let got = wildtime_feasible(p, d, 0).is_some();
            ensure(got == feasible_oracle(p, d, 0, 0, 1), || format!("({p},{d}) disagrees with oracle"))?;
        }
    }
    Ok("(6,3) and (8,4) infeasible, (5,3) feasible; agrees with oracle for p<=12, d<=6".into())
}

fn claims() -> Outcome {
    let inst = DotInstance::full(3, 3).map_err(err)?;
    let checks = [
        confinement_bound(3, 3, TRIALS, SEED).map_err(err)?,
        star_rank(&inst, TRIALS, SEED, 6).map_err(err)?,
        dot_property(&inst).map_err(err)?,
        leftover_star_bound(6, 4).map_err(err)?,
    ];
    for c in &checks {
        ensure(c.holds(), || format!("{}: first counterexample {:?}", c.name, c.first))?;
    }
    let total: u64 = checks.iter().map(|c| c.trials).sum();
    Ok(format!("0 counterexamples over {total} trials"))
}

/// Dimensions of the span and affine hull by listing all combinations.
fn span_oracle(q: u64, vs: &[Vec<u64>]) -> (usize, usize) {
    let (m, d) = (vs.len(), vs[0].len());
    let mut span = HashSet::new();
    let mut hull = HashSet::new();
    for code in 0..q.pow(m as u32) {
        let lambda: Vec<u64> = (0..m).map(|i| code / q.pow(i as u32) % q).collect();
        let point: Vec<u64> = (0..d)
            .map(|t| lambda.iter().zip(vs).map(|(l, v)| l * v[t]).sum::<u64>() % q)
            .collect();
        if lambda.iter().sum::<u64>() % q == 1 {
            hull.insert(point.clone());
        }
        span.insert(point);
    }
    let dim = |size: usize| (0..).find(|&k| (q as usize).pow(k) >= size).unwrap() as usize;
    (dim(span.len()), dim(hull.len()))
}

fn linalg() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut compared = 0;
    for q in [3u32, 5] {
        let field = GaloisField::new(q).map_err(err)?;
        for d in 1..=3 {
            for size in 1..=3 {
                for _ in 0..40 {
                    let vs: Vec<Vec<u64>> = (0..size).map(|_| (0..d).map(|_| rng.gen_range(0..q as u64)).collect()).collect();
                    let elems: Vec<Vec<Elem>> = vs.iter().map(|v| v.iter().map(|&x| Elem(x as u32)).collect()).collect();
                    let want = span_oracle(q as u64, &vs);
                    let got = (rank(&field, &elems).map_err(err)?, affine_dim(&field, &elems).map_err(err)?);
                    ensure(got == want, || format!("GF({q}) {vs:?}: got {got:?}, oracle {want:?}"))?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} vector sets agree with span enumeration"))
}

/// Prints one line per check; true when all pass.
pub fn run() -> bool {
    let start = Instant::now();
    let mut twice = Twice::default();
    let mut results: Vec<(&str, Outcome)> = vec![
        ("01 dot-product palette bound", palette()),
        ("02 no striped K4 under sign refinement", striped(&mut twice)),
        ("03 deficient subsets are leftover", structure(&mut twice)),
        ("04 no leftover 6-clique in dot-product coloring", no_leftover_six(&mut twice)),
        ("05 (6,6) product", product_six(&mut twice)),
        ("06 (8,8) product", eight(&mut twice)),
        ("07 split-sequence feasibility", feasibility()),
        ("08 dot-product claims", claims()),
        ("09 rank and affine dimension", linalg()),
    ];
    let det = if twice.mismatches.is_empty() {
        Ok(format!("{} jobs identical on 1 and 2 workers", twice.compared))
    } else {
        Err(format!("reports differ: {}", twice.mismatches.join(", ")))
    };
    results.push(("10 worker-count determinism", det));
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{}/{} passed in {:.1?}", results.len() - failed, results.len(), start.elapsed());
    failed == 0
}
