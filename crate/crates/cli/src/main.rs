//! `pqcolor`: build colorings, verify (p,q) properties, scan for structure.
//!
//! Exit status: 0 on success, 1 when `verify` finds violations or `selftest`
//! fails, 2 on usage and input errors.

mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pqcolor_core::cfls::{cfls_color_bound, CflsColoring, CflsParams};
use pqcolor_core::dotprod::{dotprod_color_bound, DotColoring, DotParams};
use pqcolor_core::model::io;
use pqcolor_core::structures::wildtime_feasible;
use pqcolor_core::verifier::{
    canonical_json, count_palette, scan_deficient, scan_striped, verify_pq, CliqueReport, Mode,
    RunConfig, Tallies, VerifyJob, DEFAULT_RECORD_CAP,
};
use pqcolor_core::EdgeColoring;
use serde_json::json;

#[derive(Parser)]
#[command(name = "pqcolor", version, about = "Explicit (p,q)-colorings of complete graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a coloring and write it to a file.
    Build {
        #[command(subcommand)]
        construction: Construction,
    },
    /// Check that every p-subset of a coloring sees at least q colors.
    Verify(VerifyArgs),
    /// List deficient k-subsets, or striped 4-subsets.
    Scan(ScanArgs),
    /// Search for a split sequence for the dot-product coloring.
    Feasibility(FeasibilityArgs),
    /// Run the acceptance checks at small scale.
    Selftest,
}

#[derive(Subcommand)]
enum Construction {
    /// Block-decomposition coloring ψ_p (or c_p with --unsigned).
    Cfls {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u32,
        /// Drop the sign component.
        #[arg(long)]
        unsigned: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Dot-product coloring φ_d over the smallest adequate odd prime power.
    Dotprod {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Product of two stored colorings on the same vertex count.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct OutArgs {
    /// Output path; a `.json` extension selects the JSON mirror.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Subsets drawn in sample mode.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, required_if_eq("mode", "sample"))]
    seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Records kept per list in the report.
    #[arg(long, default_value_t = DEFAULT_RECORD_CAP)]
    records: usize,
    #[arg(long)]
    json: bool,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        let mut cfg = match self.mode {
            ModeArg::Exhaustive => RunConfig::exhaustive(),
            ModeArg::Sample => RunConfig::sample(self.samples, self.seed.unwrap_or_default()),
        };
        if let Some(w) = self.workers {
            cfg.workers = w as usize;
        }
        cfg.record_cap = self.records;
        cfg
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    /// Skip the leftover and striped classifiers.
    #[arg(long)]
    no_classify: bool,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["k", "striped"]))]
struct ScanArgs {
    #[arg(long)]
    input: PathBuf,
    /// Subset size; subsets with exactly k-1 colors are reported.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    striped: bool,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct FeasibilityArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    p: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    d: u64,
    #[arg(long, default_value_t = 0)]
    t: u64,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Build { construction } => build(construction).map(|()| ExitCode::SUCCESS),
        Command::Verify(args) => verify(&args),
        Command::Scan(args) => scan(&args).map(|()| ExitCode::SUCCESS),
        Command::Feasibility(args) => feasibility(&args).map(|()| ExitCode::SUCCESS),
        Command::Selftest => Ok(if selftest::run() { ExitCode::SUCCESS } else { ExitCode::from(1) }),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}

fn load(path: &Path) -> anyhow::Result<EdgeColoring> {
    io::load(path).with_context(|| format!("reading {}", path.display()))
}

fn build(construction: Construction) -> anyhow::Result<()> {
    let (coloring, params, bound, out) = match construction {
        Construction::Cfls { n, p, unsigned, out } => {
            let params = CflsParams::select(n, p)?;
            let bound = cfls_color_bound(&params);
            let shown = json!({ "p": p, "beta": params.beta(), "alpha": params.alpha(), "signed": !unsigned });
            let bound = match bound.exact_exponent {
                Some(e) => format!("2^{e}"),
                None => format!("2^{:.3}", bound.log2),
            };
            let c = CflsColoring::new(n, params, !unsigned)?.into_coloring();
            (c, shown, bound, out)
        }
        Construction::Dotprod { n, d, out } => {
            let params = DotParams::select(n, d)?;
            let bound = dotprod_color_bound(&params).to_string();
            let shown = json!({ "d": d, "q": params.q() });
            (DotColoring::new(n, params)?.into_coloring(), shown, bound, out)
        }
        Construction::Product { left, right, out } => {
            let (a, b) = (load(&left)?, load(&right)?);
            let bound = (count_palette(&a) as u128 * count_palette(&b) as u128).to_string();
            let c = a.product(&b).context("forming the product")?;
            (c, json!({}), bound, out)
        }
    };
    if coloring.n() > io::JSON_MIRROR_MAX_N && out.out.extension().is_some_and(|e| e == "json") {
        bail!("JSON mirror is limited to n <= {}", io::JSON_MIRROR_MAX_N);
    }
    io::save(&coloring, &out.out).with_context(|| format!("writing {}", out.out.display()))?;
    let palette = count_palette(&coloring);
    let tag = coloring.provenance().tag();
    if out.json {
        let v = json!({
            "construction": tag,
            "n": coloring.n(),
            "params": params,
            "palette_size": palette,
            "bound": bound,
            "out": out.out,
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        let mut line = format!("{tag} n={}", coloring.n());
        if let Some(obj) = params.as_object() {
            for (k, v) in obj {
                line.push_str(&format!(" {k}={v}"));
            }
        }
        println!("{line}");
        println!("palette {palette} (bound {bound})");
        println!("wrote {}", out.out.display());
    }
    Ok(())
}

fn print_mode(run: &RunConfig) -> String {
    match run.mode {
        Mode::Exhaustive => "exhaustive".into(),
        Mode::Sample { samples, seed } => format!("sample of {samples}, seed {seed}"),
    }
}

fn print_deficient(size: usize, count: u64, tallies: &Tallies, records: &[CliqueReport]) {
    println!(
        "deficient {size}-subsets ({} colors): {count} [leftover {}, striped {}, unclassified {}]",
        size - 1,
        tallies.leftover,
        tallies.striped,
        tallies.unclassified
    );
    for r in records.iter().take(10) {
        println!("  {:?} {:?}", r.vertices, r.classification);
    }
    if count > 10 {
        println!("  ...");
    }
}

fn verify(args: &VerifyArgs) -> anyhow::Result<ExitCode> {
    let c = load(&args.input)?;
    let job = VerifyJob {
        p: args.p,
        q: args.q,
        classify: !args.no_classify,
        run: args.run.config(),
    };
    let report = verify_pq(&c, &job)?;
    if args.run.json {
        println!("{}", canonical_json(&report)?);
    } else {
        println!(
            "{} n={} palette {}: inspected {} {}-subsets ({}) in {} ms",
            report.job.construction,
            report.job.n,
            report.palette_size,
            report.inspected,
            args.p,
            print_mode(&job.run),
            report.elapsed_ms
        );
        println!("violations (< {} colors): {}", args.q, report.violation_count);
        for v in report.violations.iter().take(10) {
            println!("  {:?} {} colors", v.vertices, v.colors);
        }
        if args.q >= args.p {
            print_deficient(args.p, report.deficient_count, &report.tallies, &report.deficient);
        }
        let verdict = if report.is_pq_coloring() { "holds" } else { "fails" };
        println!("({},{})-property {verdict}", args.p, args.q);
    }
    Ok(if report.is_pq_coloring() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn scan(args: &ScanArgs) -> anyhow::Result<()> {
    let c = load(&args.input)?;
    let run = args.run.config();
    if args.striped {
        let report = scan_striped(&c, &run)?;
        if args.run.json {
            println!("{}", canonical_json(&report)?);
        } else {
            println!(
                "inspected {} 4-subsets ({}): {} striped",
                report.inspected,
                print_mode(&run),
                report.striped_count
            );
            for w in report.striped.iter().take(10) {
                println!("  {:?} colors {:?}", w.vertices, w.colors.map(|c| c.0));
            }
        }
        return Ok(());
    }
    let k = args.k.expect("clap requires --k or --striped");
    let report = scan_deficient(&c, k, &run)?;
    if args.run.json {
        println!("{}", canonical_json(&report)?);
    } else {
        println!("inspected {} {k}-subsets ({})", report.inspected, print_mode(&run));
        print_deficient(k, report.deficient_count, &report.tallies, &report.deficient);
    }
    Ok(())
}

fn feasibility(args: &FeasibilityArgs) -> anyhow::Result<()> {
    let found = wildtime_feasible(args.p, args.d, args.t);
    if args.json {
        let v = json!({
            "p": args.p,
            "d": args.d,
            "t": args.t,
            "feasible": found.is_some(),
            "sequence": found,
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
        return Ok(());
    }
    match found {
        None => println!("infeasible"),
        Some(seq) => {
            let xs: Vec<String> = seq.x.iter().map(u64::to_string).collect();
            let ss: Vec<String> = seq.partial_sums.iter().map(u64::to_string).collect();
            println!("feasible: x = {}", xs.join(" "));
            println!("partial sums: {}", ss.join(" "));
        }
    }
    Ok(())
}
