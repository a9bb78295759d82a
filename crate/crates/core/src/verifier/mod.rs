//! Enumeration-based checks of clique color counts.
//!
//! [`verify_pq`] tests the `(p, q)` property; [`scan_deficient`] finds and
//! classifies k-subsets with exactly `k - 1` colors; [`scan_striped`] counts
//! striped 4-subsets. All three run on [`engine`] and are deterministic for a
//! fixed [`RunConfig`] regardless of its worker count.

pub mod colex;
mod engine;

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ColorId, EdgeColoring};
use crate::structures::{find_striped_k4, is_leftover, striped_unchecked, LeftoverTree, StripedWitness};
use engine::SubsetTask;

pub const DEFAULT_EXHAUSTIVE_CAP: u128 = 200_000_000;
pub const DEFAULT_RECORD_CAP: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sample { samples: u64, seed: u64 },
}

/// How a subset family is enumerated.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub workers: usize,
    /// Largest `C(n, k)` an exhaustive run may take on.
    pub exhaustive_cap: u128,
    /// Records kept per list; counts stay exact past the cap.
    pub record_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Exhaustive,
            workers: default_workers(),
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            record_cap: DEFAULT_RECORD_CAP,
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunConfig {
    pub fn exhaustive() -> Self {
        RunConfig::default()
    }

    pub fn sample(samples: u64, seed: u64) -> Self {
        RunConfig {
            mode: Mode::Sample { samples, seed },
            ..RunConfig::default()
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

#[derive(Clone, Debug)]
pub struct VerifyJob {
    pub p: usize,
    pub q: usize,
    /// Run deficient subsets through the leftover and striped classifiers.
    pub classify: bool,
    pub run: RunConfig,
}

impl VerifyJob {
    pub fn new(p: usize, q: usize) -> Self {
        VerifyJob {
            p,
            q,
            classify: true,
            run: RunConfig::default(),
        }
    }

    fn validate(&self, c: &EdgeColoring) -> Result<()> {
        let pairs = self.p * self.p.saturating_sub(1) / 2;
        if self.q < 1 || self.q > pairs {
            return Err(Error::domain(format!(
                "q = {} must lie in 1..={pairs} for p = {}",
                self.q, self.p
            )));
        }
        if c.n() < self.p {
            return Err(Error::domain(format!(
                "coloring has {} vertices, fewer than p = {}",
                c.n(),
                self.p
            )));
        }
        Ok(())
    }
}

/// What kind of run produced a report, echoed into its JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JobEcho {
    pub kind: &'static str,
    pub n: usize,
    pub construction: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    pub k: usize,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub classify: bool,
}

impl JobEcho {
    fn new(kind: &'static str, c: &EdgeColoring, k: usize, run: &RunConfig, classify: bool) -> Self {
        let (mode, samples, seed) = match run.mode {
            Mode::Exhaustive => ("exhaustive", None, None),
            Mode::Sample { samples, seed } => ("sample", Some(samples), Some(seed)),
        };
        JobEcho {
            kind,
            n: c.n(),
            construction: c.provenance().tag(),
            p: None,
            q: None,
            k,
            mode,
            samples,
            seed,
            classify,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vertices: Vec<usize>,
    pub colors: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Leftover,
    Striped,
    Unclassified,
    /// Classification was switched off.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Leftover(LeftoverTree),
    Striped(StripedWitness),
}

/// A subset with exactly `|s| - 1` colors and what it turned out to be.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueReport {
    pub vertices: Vec<usize>,
    pub colors: usize,
    pub classification: Classification,
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tallies {
    pub leftover: u64,
    pub striped: u64,
    pub unclassified: u64,
}

impl Tallies {
    fn add(&mut self, o: Tallies) {
        self.leftover += o.leftover;
        self.striped += o.striped;
        self.unclassified += o.unclassified;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub job: JobEcho,
    pub inspected: u64,
    pub palette_size: usize,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub deficient_count: u64,
    pub deficient: Vec<CliqueReport>,
    pub tallies: Tallies,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub job: JobEcho,
    pub inspected: u64,
    pub palette_size: usize,
    pub deficient_count: u64,
    pub deficient: Vec<CliqueReport>,
    pub tallies: Tallies,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StripedReport {
    pub job: JobEcho,
    pub inspected: u64,
    pub palette_size: usize,
    pub striped_count: u64,
    pub striped: Vec<StripedWitness>,
    pub elapsed_ms: u64,
}

/// JSON with the wall-clock field removed, so equal jobs give equal bytes.
pub fn canonical_json<R: Serialize>(report: &R) -> Result<String> {
    let mut v = serde_json::to_value(report)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("elapsed_ms");
    }
    Ok(serde_json::to_string_pretty(&v)?)
}

impl VerifyReport {
    pub fn is_pq_coloring(&self) -> bool {
        self.violation_count == 0
    }
}

/// Fast color-id lookup over a materialized table, falling back to the coloring.
#[derive(Clone, Copy)]
struct Lookup<'a> {
    c: &'a EdgeColoring,
    table: Option<&'a [ColorId]>,
    n: usize,
}

impl<'a> Lookup<'a> {
    fn new(c: &'a EdgeColoring) -> Self {
        Lookup { c, table: c.dense_table(), n: c.n() }
    }

    #[inline(always)]
    fn get(&self, u: usize, v: usize) -> ColorId {
        match self.table {
            Some(t) => t[u * self.n + v],
            None => self.c.color(u, v),
        }
    }

    /// Distinct colors inside `s`, counting stops once `limit` is reached.
    #[inline]
    fn distinct_upto(&self, s: &[usize], limit: usize, seen: &mut Vec<ColorId>) -> usize {
        seen.clear();
        for i in 1..s.len() {
            let row = s[i];
            for &u in &s[..i] {
                let x = self.get(row, u);
                if !seen.contains(&x) {
                    seen.push(x);
                    if seen.len() >= limit {
                        return limit;
                    }
                }
            }
        }
        seen.len()
    }
}

fn classify(c: &EdgeColoring, s: &[usize], enabled: bool) -> (Classification, Option<Witness>) {
    if !enabled {
        return (Classification::Skipped, None);
    }
    if let Some(tree) = is_leftover(c, s).expect("valid subset") {
        return (Classification::Leftover, Some(Witness::Leftover(tree)));
    }
    if let Some(w) = find_striped_k4(c, s).expect("valid subset") {
        return (Classification::Striped, Some(Witness::Striped(w)));
    }
    (Classification::Unclassified, None)
}

fn tally(class: Classification) -> Tallies {
    let mut t = Tallies::default();
    match class {
        Classification::Leftover => t.leftover = 1,
        Classification::Striped => t.striped = 1,
        Classification::Unclassified => t.unclassified = 1,
        Classification::Skipped => {}
    }
    t
}

fn push_capped<T>(into: &mut Vec<T>, items: impl IntoIterator<Item = T>, cap: usize) {
    for x in items {
        if into.len() >= cap {
            break;
        }
        into.push(x);
    }
}

#[derive(Default)]
struct PqFragment {
    inspected: u64,
    violation_count: u64,
    violations: Vec<Violation>,
    deficient_count: u64,
    deficient: Vec<CliqueReport>,
    tallies: Tallies,
}

struct PqTask<'a> {
    c: &'a EdgeColoring,
    look: Lookup<'a>,
    p: usize,
    q: usize,
    classify: bool,
    recount: bool,
    record_cap: usize,
}

impl SubsetTask for PqTask<'_> {
    type Scratch = Vec<ColorId>;
    type Fragment = PqFragment;

    fn scratch(&self) -> Vec<ColorId> {
        Vec::with_capacity(self.q)
    }

    fn fragment(&self) -> PqFragment {
        PqFragment::default()
    }

    fn visit(&self, s: &[usize], seen: &mut Vec<ColorId>, out: &mut PqFragment) {
        out.inspected += 1;
        let mut count = self.look.distinct_upto(s, self.q, seen);
        if count >= self.q {
            return;
        }
        if self.recount {
            count = self.c.distinct_colors(s).expect("valid subset");
            if count >= self.q {
                return;
            }
        }
        out.violation_count += 1;
        if out.violations.len() < self.record_cap {
            out.violations.push(Violation { vertices: s.to_vec(), colors: count });
        }
        if count + 1 == self.p {
            out.deficient_count += 1;
            let (class, witness) = classify(self.c, s, self.classify);
            out.tallies.add(tally(class));
            if out.deficient.len() < self.record_cap {
                out.deficient.push(CliqueReport {
                    vertices: s.to_vec(),
                    colors: count,
                    classification: class,
                    witness,
                });
            }
        }
    }

    fn merge(&self, into: &mut PqFragment, next: PqFragment) {
        into.inspected += next.inspected;
        into.violation_count += next.violation_count;
        into.deficient_count += next.deficient_count;
        into.tallies.add(next.tallies);
        push_capped(&mut into.violations, next.violations, self.record_cap);
        push_capped(&mut into.deficient, next.deficient, self.record_cap);
    }
}

/// Checks that every visited p-subset spans at least q colors.
///
/// Subsets with exactly `p - 1` colors are additionally collected as deficient;
/// they are violations only when `q = p`.
pub fn verify_pq(c: &EdgeColoring, job: &VerifyJob) -> Result<VerifyReport> {
    job.validate(c)?;
    let start = Instant::now();
    let task = PqTask {
        c,
        look: Lookup::new(c),
        p: job.p,
        q: job.q,
        classify: job.classify,
        recount: matches!(job.run.mode, Mode::Sample { .. }),
        record_cap: job.run.record_cap,
    };
    let frag = engine::run(&task, c.n(), job.p, &job.run)?;
    let mut echo = JobEcho::new("verify", c, job.p, &job.run, job.classify);
    echo.p = Some(job.p);
    echo.q = Some(job.q);
    Ok(VerifyReport {
        job: echo,
        inspected: frag.inspected,
        palette_size: count_palette(c),
        violation_count: frag.violation_count,
        violations: frag.violations,
        deficient_count: frag.deficient_count,
        deficient: frag.deficient,
        tallies: frag.tallies,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[derive(Default)]
struct ScanFragment {
    inspected: u64,
    deficient_count: u64,
    deficient: Vec<CliqueReport>,
    tallies: Tallies,
}

struct DeficientTask<'a> {
    c: &'a EdgeColoring,
    look: Lookup<'a>,
    k: usize,
    record_cap: usize,
}

impl SubsetTask for DeficientTask<'_> {
    type Scratch = Vec<ColorId>;
    type Fragment = ScanFragment;

    fn scratch(&self) -> Vec<ColorId> {
        Vec::with_capacity(self.k)
    }

    fn fragment(&self) -> ScanFragment {
        ScanFragment::default()
    }

    fn visit(&self, s: &[usize], seen: &mut Vec<ColorId>, out: &mut ScanFragment) {
        out.inspected += 1;
        // Stop counting at k colors: anything that reaches k is not deficient.
        if self.look.distinct_upto(s, self.k.max(1), seen) + 1 != self.k {
            return;
        }
        out.deficient_count += 1;
        let (class, witness) = classify(self.c, s, true);
        out.tallies.add(tally(class));
        if out.deficient.len() < self.record_cap {
            out.deficient.push(CliqueReport {
                vertices: s.to_vec(),
                colors: self.k - 1,
                classification: class,
                witness,
            });
        }
    }

    fn merge(&self, into: &mut ScanFragment, next: ScanFragment) {
        into.inspected += next.inspected;
        into.deficient_count += next.deficient_count;
        into.tallies.add(next.tallies);
        push_capped(&mut into.deficient, next.deficient, self.record_cap);
    }
}

/// Finds the k-subsets with exactly `k - 1` colors and classifies each.
pub fn scan_deficient(c: &EdgeColoring, k: usize, run: &RunConfig) -> Result<ScanReport> {
    let start = Instant::now();
    let task = DeficientTask {
        c,
        look: Lookup::new(c),
        k,
        record_cap: run.record_cap,
    };
    let frag = engine::run(&task, c.n(), k, run)?;
    Ok(ScanReport {
        job: JobEcho::new("scan-deficient", c, k, run, true),
        inspected: frag.inspected,
        palette_size: count_palette(c),
        deficient_count: frag.deficient_count,
        deficient: frag.deficient,
        tallies: frag.tallies,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[derive(Default)]
struct StripedFragment {
    inspected: u64,
    count: u64,
    found: Vec<StripedWitness>,
}

struct StripedTask<'a> {
    c: &'a EdgeColoring,
    record_cap: usize,
}

impl SubsetTask for StripedTask<'_> {
    type Scratch = ();
    type Fragment = StripedFragment;

    fn scratch(&self) {}

    fn fragment(&self) -> StripedFragment {
        StripedFragment::default()
    }

    fn visit(&self, s: &[usize], _: &mut (), out: &mut StripedFragment) {
        out.inspected += 1;
        if let Some(w) = striped_unchecked(self.c, [s[0], s[1], s[2], s[3]]) {
            out.count += 1;
            if out.found.len() < self.record_cap {
                out.found.push(w);
            }
        }
    }

    fn merge(&self, into: &mut StripedFragment, next: StripedFragment) {
        into.inspected += next.inspected;
        into.count += next.count;
        push_capped(&mut into.found, next.found, self.record_cap);
    }
}

/// Counts striped 4-subsets.
pub fn scan_striped(c: &EdgeColoring, run: &RunConfig) -> Result<StripedReport> {
    let start = Instant::now();
    let task = StripedTask { c, record_cap: run.record_cap };
    let frag = engine::run(&task, c.n(), 4, run)?;
    Ok(StripedReport {
        job: JobEcho::new("scan-striped", c, 4, run, false),
        inspected: frag.inspected,
        palette_size: count_palette(c),
        striped_count: frag.count,
        striped: frag.found,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Number of distinct colors actually used on edges.
pub fn count_palette(c: &EdgeColoring) -> usize {
    if c.is_materialized() {
        // Dense palettes are interned from the edges themselves.
        return c.palette_len();
    }
    let mut used = std::collections::HashSet::new();
    for u in 0..c.n() {
        for v in u + 1..c.n() {
            used.insert(c.color(u, v));
        }
    }
    used.len()
}
