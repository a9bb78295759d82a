//! Desk-scale acceptance run.
//!
//! Every criterion prints one `PASS`/`FAIL` line with the measured values and the
//! limits it was held to. Criteria are run in order on one thread so the runtime
//! limits measure the work itself; the test fails if any line fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pqcolor_core::cfls::{cfls_color_bound, psi_coloring, CflsParams};
use pqcolor_core::claims::{
    confinement_bound, confinement_either_way, dot_property, leftover_star_bound, star_affine,
    star_rank, ClaimCheck, DotInstance,
};
use pqcolor_core::dotprod::{dotprod_color_bound, phi_coloring, DotParams};
use pqcolor_core::gf::{affine_dim, rank, Elem, GaloisField};
use pqcolor_core::structures::{clog2, wildtime_feasible};
use pqcolor_core::verifier::{
    canonical_json, count_palette, scan_deficient, scan_striped, verify_pq, RunConfig, VerifyJob,
};
use pqcolor_core::EdgeColoring;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Runtime limits, one per criterion.
const LIMIT_PALETTE: Duration = Duration::from_secs(1);
const LIMIT_STRIPED: Duration = Duration::from_secs(60);
const LIMIT_STRUCTURE: Duration = Duration::from_secs(600);
const LIMIT_NO_LEFTOVER_6: Duration = Duration::from_secs(600);
const LIMIT_PRODUCT_6: Duration = Duration::from_secs(600);
const LIMIT_EIGHT: Duration = Duration::from_secs(60);
const LIMIT_FEASIBILITY: Duration = Duration::from_millis(1);

const CLAIM_TRIALS: u64 = 10_000;
const STRUCTURE_SAMPLES: u64 = 1_000_000;
const WORKER_COUNTS: [usize; 3] = [1, 4, 8];
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(label: &str, took: Duration, limit: Duration) -> Result<(), String> {
    ensure(took < limit, || format!("{label} took {took:?}, limit {limit:?}"))
}

/// Canonical JSON of a report for every worker count; they must all agree.
struct Determinism {
    mismatches: Vec<String>,
    compared: usize,
}

impl Determinism {
    fn runs<R, F>(&mut self, label: &str, mut f: F) -> Result<(R, Duration), String>
    where
        R: serde::Serialize,
        F: FnMut(usize) -> pqcolor_core::Result<R>,
    {
        let mut first: Option<(String, R, Duration)> = None;
        for w in WORKER_COUNTS {
            let start = Instant::now();
            let report = f(w).map_err(|e| format!("{label}: {e}"))?;
            let took = start.elapsed();
            let json = canonical_json(&report).map_err(|e| e.to_string())?;
            match &first {
                None => first = Some((json, report, took)),
                Some((base, _, _)) => {
                    self.compared += 1;
                    if *base != json {
                        self.mismatches.push(format!("{label} with {w} workers"));
                    }
                }
            }
        }
        let (_, report, took) = first.unwrap();
        Ok((report, took))
    }
}

fn run_config(workers: usize) -> RunConfig {
    RunConfig::exhaustive().with_workers(workers)
}

/// Dot-product coloring for prime `q`, written out from its definition with plain
/// integer arithmetic. Vertex `i` is its base-(q-1) digits (most significant
/// first) shifted up by one.
fn oracle_phi_palette(q: u64, d: usize, n: usize) -> usize {
    let vec_of = |i: usize| -> Vec<u64> {
        let mut v = vec![0; d];
        let mut r = i as u64;
        for slot in v.iter_mut().rev() {
            *slot = r % (q - 1) + 1;
            r /= q - 1;
        }
        v
    };
    let dotp = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<u64>() % q;
    let mut colors = HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (vec_of(i), vec_of(j));
            let (x, y) = if x < y { (x, y) } else { (y, x) };
            let first = (0..d).find(|&t| x[t] != y[t]).unwrap();
            let sum = (x[first] + y[first]) % q;
            let xy = dotp(&x, &y);
            let color = if xy == 0 {
                (0, first, sum)
            } else if xy == dotp(&x, &x) {
                (1, first, sum)
            } else if xy == dotp(&y, &y) {
                (2, first, sum)
            } else {
                (3, usize::MAX, xy)
            };
            colors.insert(color);
        }
    }
    colors.len()
}

fn palette_bound() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (n, d, q, bound) in [(64usize, 3usize, 5u32, 49u64), (16, 4, 3, 38)] {
        let params = DotParams::select(n, d).map_err(|e| e.to_string())?;
        ensure(params.q() == q, || format!("n={n} d={d}: selected q={} expected {q}", params.q()))?;
        ensure(dotprod_color_bound(&params) == bound, || format!("bound for d={d} q={q} is not {bound}"))?;
        let first = phi_coloring(n, d).map_err(|e| e.to_string())?;
        let again = phi_coloring(n, d).map_err(|e| e.to_string())?;
        let used = count_palette(&first);
        ensure(used == count_palette(&again) && first.same_coloring(&again), || {
            format!("d={d}: rebuilding changed the coloring")
        })?;
        let expected = oracle_phi_palette(q as u64, d, n);
        ensure(used == expected, || format!("d={d} q={q}: {used} colors, oracle says {expected}"))?;
        ensure(used as u64 <= bound, || format!("d={d} q={q}: {used} colors > {bound}"))?;
        parts.push(format!("d={d},q={q}: {used} <= {bound}"));
    }
    let took = start.elapsed();
    within("palette construction", took, LIMIT_PALETTE)?;
    Ok(format!("{} ({took:.2?} < {LIMIT_PALETTE:?})", parts.join("; ")))
}

fn striped_free(det: &mut Determinism) -> Outcome {
    let psi = psi_coloring(64, 3).map_err(|e| e.to_string())?;
    let (report, took) = det.runs("striped scan", |w| scan_striped(&psi, &run_config(w)))?;
    ensure(report.inspected == 635_376, || format!("inspected {} 4-subsets", report.inspected))?;
    ensure(report.striped_count == 0, || format!("{} striped 4-subsets", report.striped_count))?;
    // Independent recount straight from the definition on color values.
    let mut brute = 0u64;
    let n = psi.n();
    let val = |u: usize, v: usize| psi.color_value(u, v).unwrap();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let m = [(val(a, b), val(c, d)), (val(a, c), val(b, d)), (val(a, d), val(b, c))];
                    if m.iter().all(|(x, y)| x == y) && m[0].0 != m[1].0 && m[1].0 != m[2].0 && m[0].0 != m[2].0 {
                        brute += 1;
                    }
                }
            }
        }
    }
    ensure(brute == 0, || format!("definition recount found {brute} striped 4-subsets"))?;
    within("striped scan", took, LIMIT_STRIPED)?;
    let note = if report.palette_size == 64 * 63 / 2 { "; palette is rainbow at n=64" } else { "" };
    Ok(format!(
        "0 striped among {} 4-subsets, palette {}{note} ({took:.2?} < {LIMIT_STRIPED:?})",
        report.inspected, report.palette_size
    ))
}

fn structure(det: &mut Determinism) -> Outcome {
    let psi = psi_coloring(64, 3).map_err(|e| e.to_string())?;
    let mut total = Duration::ZERO;
    let mut parts = Vec::new();
    for k in 3..=6 {
        let cfg = |w: usize| {
            if k == 6 {
                RunConfig::sample(STRUCTURE_SAMPLES, SEED).with_workers(w)
            } else {
                run_config(w)
            }
        };
        let (report, took) = det.runs(&format!("deficient scan k={k}"), |w| scan_deficient(&psi, k, &cfg(w)))?;
        total += took;
        ensure(report.tallies.leftover == report.deficient_count, || {
            format!(
                "k={k}: {} deficient, {} leftover, {} striped, {} unclassified",
                report.deficient_count, report.tallies.leftover, report.tallies.striped, report.tallies.unclassified
            )
        })?;
        if k == 6 {
            ensure(report.inspected >= STRUCTURE_SAMPLES, || format!("only {} samples", report.inspected))?;
        }
        parts.push(format!("k={k}: {}/{} leftover", report.tallies.leftover, report.deficient_count));
    }
    within("structure scans", total, LIMIT_STRUCTURE)?;
    Ok(format!(
        "{} over {} inspected 6-subsets sampled ({total:.2?} < {LIMIT_STRUCTURE:?})",
        parts.join(", "),
        STRUCTURE_SAMPLES
    ))
}

fn no_leftover_six(det: &mut Determinism) -> Outcome {
    let phi = phi_coloring(64, 3).map_err(|e| e.to_string())?;
    let (report, took) = det.runs("6-subsets of dot-product coloring", |w| scan_deficient(&phi, 6, &run_config(w)))?;
    ensure(report.inspected == 74_974_368, || format!("inspected {}", report.inspected))?;
    ensure(report.tallies.leftover == 0, || format!("{} leftover 6-cliques", report.tallies.leftover))?;
    for r in &report.deficient {
        if let Some(pqcolor_core::verifier::Witness::Striped(w)) = &r.witness {
            ensure(w.is_valid_for(&phi), || format!("bad striped witness {w:?}"))?;
        }
    }
    within("6-subset scan", took, LIMIT_NO_LEFTOVER_6)?;
    Ok(format!(
        "0 leftover among {} deficient of {} 6-subsets ({} striped, {} other) ({took:.2?} < {LIMIT_NO_LEFTOVER_6:?})",
        report.deficient_count, report.inspected, report.tallies.striped, report.tallies.unclassified
    ))
}

fn product_six(det: &mut Determinism) -> Outcome {
    let psi = psi_coloring(64, 3).map_err(|e| e.to_string())?;
    let phi = phi_coloring(64, 3).map_err(|e| e.to_string())?;
    let product = psi.product(&phi).map_err(|e| e.to_string())?;
    let (report, took) = det.runs("(6,6) product", |w| {
        verify_pq(&product, &VerifyJob { run: run_config(w), ..VerifyJob::new(6, 6) })
    })?;
    ensure(report.inspected == 74_974_368, || format!("inspected {}", report.inspected))?;
    ensure(report.violation_count == 0, || format!("{} violations", report.violation_count))?;
    let params = CflsParams::select(64, 3).map_err(|e| e.to_string())?;
    let bound = cfls_color_bound(&params);
    let used = report.palette_size as u128;
    ensure(bound.admits_scaled(used, 49), || format!("palette {used} exceeds 49 * 2^{}", bound.log2))?;
    ensure(used <= (count_palette(&psi) * count_palette(&phi)) as u128, || "product palette too large".into())?;
    within("(6,6) verification", took, LIMIT_PRODUCT_6)?;
    Ok(format!(
        "0 violations over {} 6-subsets, palette {used} <= 49 * 2^{} ({took:.2?} < {LIMIT_PRODUCT_6:?})",
        report.inspected, bound.log2
    ))
}

fn distinct_by_value(c: &EdgeColoring, s: &[usize]) -> usize {
    let mut seen = HashSet::new();
    for (i, &u) in s.iter().enumerate() {
        for &v in &s[i + 1..] {
            seen.insert(c.color_value(u, v).unwrap());
        }
    }
    seen.len()
}

fn eight(det: &mut Determinism) -> Outcome {
    let start = Instant::now();
    let phi = phi_coloring(16, 4).map_err(|e| e.to_string())?;
    let (scan, _) = det.runs("8-subsets of dot-product coloring", |w| scan_deficient(&phi, 8, &run_config(w)))?;
    ensure(scan.inspected == 12_870, || format!("inspected {}", scan.inspected))?;
    ensure(scan.tallies.leftover == 0, || format!("{} leftover 8-cliques", scan.tallies.leftover))?;

    let psi = psi_coloring(16, 5).map_err(|e| e.to_string())?;
    let product = psi.product(&phi).map_err(|e| e.to_string())?;
    let (report, _) = det.runs("(8,8) product", |w| {
        verify_pq(&product, &VerifyJob { run: run_config(w), ..VerifyJob::new(8, 8) })
    })?;
    ensure(report.violation_count == 0, || format!("{} violations", report.violation_count))?;
    // Recount every 8-subset directly on color values.
    let mut s: Vec<usize> = (0..8).collect();
    let mut low = 0u64;
    loop {
        if distinct_by_value(&product, &s) < 8 {
            low += 1;
        }
        if !pqcolor_core::verifier::colex::next(&mut s, 16) {
            break;
        }
    }
    ensure(low == 0, || format!("direct recount found {low} subsets with < 8 colors"))?;
    let took = start.elapsed();
    within("8-clique checks", took, LIMIT_EIGHT)?;
    Ok(format!(
        "0 leftover among {} deficient 8-subsets; (8,8) product: 0 violations over {} ({took:.2?} < {LIMIT_EIGHT:?})",
        scan.deficient_count, report.inspected
    ))
}

/// All compositions of p - 1 tried directly against the three step conditions.
fn feasibility_oracle(p: u64, d: u64, t: u64, s: u64, i: u64) -> bool {
    if s == p - 1 {
        return true;
    }
    (1..p - s).any(|x| {
        let rem = p - s;
        2 * x <= rem
            && clog2(x) + clog2(rem - x) < d as u32
            && clog2(rem - x) as i64 <= d as i64 - i as i64 - t as i64
            && feasibility_oracle(p, d, t, s + x, i + 1)
    })
}

fn feasibility() -> Outcome {
    let mut parts = Vec::new();
    for (p, d, expect) in [(6u64, 3u64, false), (8, 4, false), (5, 3, true)] {
        let start = Instant::now();
        let verdict = wildtime_feasible(p, d, 0);
        let took = start.elapsed();
        ensure(verdict.is_some() == expect, || format!("({p},{d},0): wrong verdict {verdict:?}"))?;
        ensure(feasibility_oracle(p, d, 0, 0, 1) == expect, || format!("({p},{d},0): oracle disagrees"))?;
        if let Some(seq) = &verdict {
            ensure(seq.is_valid(), || format!("({p},{d},0): invalid witness {seq:?}"))?;
        }
        within(&format!("({p},{d},0)"), took, LIMIT_FEASIBILITY)?;
        let shown = verdict.map_or("infeasible".to_string(), |s| format!("{:?}", s.x));
        parts.push(format!("({p},{d},0) {shown} in {took:.1?}"));
    }
    Ok(format!("{} (each < {LIMIT_FEASIBILITY:?})", parts.join("; ")))
}

fn claim_suites() -> Outcome {
    let mut checks: Vec<(String, ClaimCheck)> = Vec::new();
    let err = |e: pqcolor_core::Error| e.to_string();
    for (q, d) in [(3u32, 3usize), (3, 4), (5, 2), (5, 3)] {
        checks.push((format!("confinement q={q} d={d}"), confinement_bound(q, d, CLAIM_TRIALS, SEED).map_err(err)?));
    }
    for (q, d) in [(3u32, 4usize), (5, 3)] {
        let inst = DotInstance::full(q, d).map_err(err)?;
        checks.push((format!("either-way q={q} d={d}"), confinement_either_way(&inst, CLAIM_TRIALS, SEED).map_err(err)?));
        checks.push((format!("rank q={q} d={d}"), star_rank(&inst, CLAIM_TRIALS, SEED, 8).map_err(err)?));
        checks.push((format!("affine q={q} d={d}"), star_affine(&inst, CLAIM_TRIALS, SEED, 8).map_err(err)?));
    }
    // Exhaustive over edge pairs, so the instances must be large enough to reach the trial floor.
    for (q, d) in [(3u32, 6usize), (5, 3)] {
        let inst = DotInstance::full(q, d).map_err(err)?;
        checks.push((format!("dot property q={q} d={d}"), dot_property(&inst).map_err(err)?));
    }
    checks.push(("leftover stars p<=8".into(), leftover_star_bound(8, 16).map_err(err)?));
    let mut parts = Vec::new();
    for (label, c) in &checks {
        ensure(c.holds(), || format!("{label}: {} counterexamples, first {:?}", c.counterexamples, c.first))?;
        ensure(c.trials >= CLAIM_TRIALS, || format!("{label}: only {} trials", c.trials))?;
        parts.push(format!("{label} {}", c.trials));
    }
    Ok(format!("0 counterexamples [{}]", parts.join(", ")))
}

/// Span and affine hull by listing every combination of the vectors.
fn brute_dims(q: u64, vs: &[Vec<u64>]) -> (usize, usize) {
    let m = vs.len();
    let d = vs[0].len();
    let mut span = HashSet::new();
    let mut hull = HashSet::new();
    let combos = q.pow(m as u32);
    for code in 0..combos {
        let mut lambda = vec![0u64; m];
        let mut c = code;
        for l in lambda.iter_mut() {
            *l = c % q;
            c /= q;
        }
        let point: Vec<u64> = (0..d)
            .map(|t| lambda.iter().zip(vs).map(|(l, v)| l * v[t]).sum::<u64>() % q)
            .collect();
        if lambda.iter().sum::<u64>() % q == 1 {
            hull.insert(point.clone());
        }
        span.insert(point);
    }
    let log_q = |size: usize| {
        let mut k = 0;
        let mut acc = 1usize;
        while acc < size {
            acc *= q as usize;
            k += 1;
        }
        assert_eq!(acc, size, "span sizes are powers of q");
        k
    };
    (log_q(span.len()), log_q(hull.len()))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut compared = 0u64;
    for q in [3u32, 5] {
        let field = GaloisField::new(q).map_err(|e| e.to_string())?;
        for d in 1..=3usize {
            let pool: Vec<Vec<u64>> = (0..20).map(|_| (0..d).map(|_| rng.gen_range(0..q as u64)).collect()).collect();
            for size in 1..=4usize {
                let mut s: Vec<usize> = (0..size).collect();
                loop {
                    let vs: Vec<Vec<u64>> = s.iter().map(|&i| pool[i].clone()).collect();
                    let elems: Vec<Vec<Elem>> = vs.iter().map(|v| v.iter().map(|&x| Elem(x as u32)).collect()).collect();
                    let (rk, af) = brute_dims(q as u64, &vs);
                    let got_rk = rank(&field, &elems).map_err(|e| e.to_string())?;
                    let got_af = affine_dim(&field, &elems).map_err(|e| e.to_string())?;
                    ensure(rk == got_rk && af == got_af, || {
                        format!("q={q} vectors {vs:?}: rank {got_rk} vs {rk}, affine {got_af} vs {af}")
                    })?;
                    compared += 1;
                    if !pqcolor_core::verifier::colex::next(&mut s, 20) {
                        break;
                    }
                }
            }
        }
    }
    Ok(format!("{compared} subsets agree with span enumeration over GF(3), GF(5), d<=3"))
}

fn main() -> ExitCode {
    let mut det = Determinism { mismatches: Vec::new(), compared: 0 };
    let results: Vec<(&str, Outcome)> = vec![
        ("01 dot-product palette bound", palette_bound()),
        ("02 no striped K4 under psi_3, n=64", striped_free(&mut det)),
        ("03 deficient subsets of psi_3 are leftover", structure(&mut det)),
        ("04 no leftover 6-clique under phi_3, q=5", no_leftover_six(&mut det)),
        ("05 (6,6) product psi_3 x phi_3, n=64", product_six(&mut det)),
        ("06 no leftover 8-clique, (8,8) product, n=16", eight(&mut det)),
        ("07 split-sequence feasibility verdicts", feasibility()),
        ("08 dot-product and leftover claims", claim_suites()),
        ("09 rank/affine oracle equivalence", oracle_equivalence()),
    ];
    let determinism: Outcome = if det.mismatches.is_empty() && det.compared > 0 {
        Ok(format!("{} report pairs byte-identical across workers {WORKER_COUNTS:?}", det.compared))
    } else {
        Err(format!("reports differ: {:?}", det.mismatches))
    };
    let mut failed = 0;
    for (name, outcome) in results.iter().chain([("10 determinism across worker counts", determinism)].iter()) {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() + 1 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
