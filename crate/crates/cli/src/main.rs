use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use moea_lab::benchmarks::milestone_sets;
use moea_lab::harness::{run_experiment, write_results};
use moea_lab::verify::{self, Level};
use moea_lab::{
    bound, pareto_front, transfer, AlgorithmKind, BenchmarkKind, BenchmarkSpec, BoundReport,
    Budget, ExperimentConfig,
};

#[derive(Parser)]
#[command(
    name = "moea-lab",
    version,
    about = "Coverage-time experiments for SEMO, GSEMO, SMS-EMOA and NSGA-III"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a JSON config; flags override config fields.
    Run(RunArgs),
    /// Print the Pareto front size of a benchmark instance.
    Front(FrontArgs),
    /// Print the runtime bound of a benchmark instance.
    Bound(BoundArgs),
    /// Run the oracle self-checks.
    Verify {
        #[arg(long, default_value = "fast", value_parser = parse_level)]
        level: Level,
    },
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, value_parser = parse_benchmark)]
    benchmark: BenchmarkKind,
    #[arg(long)]
    n: usize,
    /// Number of objectives (even).
    #[arg(long)]
    m: usize,
    /// Jump width (ojzj only).
    #[arg(long)]
    k: Option<usize>,
}

impl InstanceArgs {
    fn spec(&self) -> Result<BenchmarkSpec> {
        Ok(BenchmarkSpec::with_objectives(
            self.benchmark,
            self.n,
            self.m,
            self.k,
        )?)
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_benchmark)]
    benchmark: Option<BenchmarkKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_parser = parse_algorithm)]
    algorithm: Option<AlgorithmKind>,
    #[arg(long)]
    mu: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    base_seed: Option<u64>,
    /// "auto" or an evaluation count.
    #[arg(long, value_parser = parse_budget)]
    budget: Option<Budget>,
    /// Directory for trials.csv and summary.json.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    record_wall_time: bool,
    /// Print summary.json to stdout instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FrontArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Also list every front value.
    #[arg(long)]
    enumerate: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Transfer the bound to this algorithm.
    #[arg(long, value_parser = parse_algorithm, default_value = "gsemo")]
    algorithm: AlgorithmKind,
    #[arg(long)]
    mu: Option<usize>,
    #[arg(long)]
    json: bool,
}

fn parse_benchmark(s: &str) -> Result<BenchmarkKind, String> {
    s.parse().map_err(|e: moea_lab::Error| e.to_string())
}

fn parse_algorithm(s: &str) -> Result<AlgorithmKind, String> {
    s.parse().map_err(|e: moea_lab::Error| e.to_string())
}

fn parse_budget(s: &str) -> Result<Budget, String> {
    s.parse().map_err(|e: moea_lab::Error| e.to_string())
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse().map_err(|e: moea_lab::Error| e.to_string())
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let (Some(benchmark), Some(n), Some(m), Some(algorithm)) =
                (args.benchmark, args.n, args.m, args.algorithm)
            else {
                bail!("without --config, --benchmark, --n, --m and --algorithm are required");
            };
            let mut cfg = ExperimentConfig::new(
                BenchmarkSpec::with_objectives(benchmark, n, m, args.k)?,
                algorithm,
            );
            cfg.k = args.k;
            cfg
        }
    };
    if let Some(v) = args.benchmark {
        cfg.benchmark = v;
    }
    if let Some(v) = args.n {
        cfg.n = v;
    }
    if let Some(v) = args.m {
        cfg.m = v;
    }
    if args.k.is_some() {
        cfg.k = args.k;
    }
    if let Some(v) = args.algorithm {
        cfg.algorithm = v;
    }
    if args.mu.is_some() {
        cfg.mu = args.mu;
    }
    if args.p.is_some() {
        cfg.p = args.p;
    }
    if let Some(v) = args.trials {
        cfg.trials = v;
    }
    if let Some(v) = args.base_seed {
        cfg.base_seed = v;
    }
    if let Some(v) = args.budget {
        cfg.budget = v;
    }
    if args.output.is_some() {
        cfg.output = args.output.clone();
    }
    if args.record_wall_time {
        cfg.record_wall_time = true;
    }
    Ok(cfg)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.1}"))
}

fn run(args: RunArgs) -> Result<()> {
    let cfg = build_config(&args)?;
    let outcome = run_experiment(&cfg)?;
    if let Some(dir) = &cfg.output {
        let (csv, json) = write_results(&outcome, dir)
            .with_context(|| format!("writing results to {}", dir.display()))?;
        log::info!("wrote {} and {}", csv.display(), json.display());
    }
    let s = &outcome.summary;
    if args.json {
        println!("{}", serde_json::to_string_pretty(s)?);
        return Ok(());
    }
    let st = &s.stats;
    println!("instance        {} {}", s.config.algorithm, cfg.spec()?);
    println!("trials          {}", st.trials);
    println!("covered         {}", st.covered_count);
    println!("mean            {}", fmt_opt(st.mean));
    println!("median          {}", fmt_opt(st.median));
    println!("q05             {}", fmt_opt(st.q05));
    println!("q95             {}", fmt_opt(st.q95));
    println!(
        "max             {}",
        st.max.map_or("-".into(), |m| m.to_string())
    );
    println!("whp_bound       {:.1}", s.bounds.whp);
    println!("expectation     {:.1}", s.bounds.expectation);
    println!(
        "mean/expect.    {}",
        s.ratio_mean_over_expectation_bound
            .map_or("-".into(), |r| format!("{r:.4}"))
    );
    if let Some(dir) = &cfg.output {
        println!("output          {}", dir.display());
    }
    Ok(())
}

fn front(args: FrontArgs) -> Result<()> {
    let spec = args.instance.spec()?;
    let front = pareto_front(&spec)?;
    if args.json {
        let mut doc = serde_json::json!({
            "instance": spec,
            "front_size": front.size(),
            "max_incomparable": front.max_incomparable(),
            "max_incomparable_source": front.max_incomparable_source(),
            "f_max": spec.f_max(),
        });
        if let Ok(sets) = milestone_sets(&spec) {
            doc["corners"] = sets.corners.len().into();
            if let Some(c) = sets.cliffs {
                doc["cliffs"] = c.len().into();
            }
        }
        if args.enumerate {
            doc["values"] = serde_json::to_value(front.values())?;
        }
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(());
    }
    println!("instance          {spec}");
    println!("front_size        {}", front.size());
    println!(
        "max_incomparable  {} ({:?})",
        front.max_incomparable(),
        front.max_incomparable_source()
    );
    println!("f_max             {}", spec.f_max());
    if args.enumerate {
        for v in front.values() {
            println!("{v:?}");
        }
    }
    Ok(())
}

fn print_report(r: &BoundReport) {
    println!("instance           {}", r.spec);
    if let Some(mu) = r.mu {
        println!("mu                 {mu}");
    }
    println!("provenance         {}", r.provenance);
    println!("front_size         {}", r.front_size);
    println!("S                  {}", r.incomparable_bound);
    println!("whp_bound          {:.1}", r.whp_bound);
    println!("expectation_bound  {:.1}", r.expectation_bound);
    for (name, v) in &r.phase_bounds {
        println!("phase.{name:<12} {v:.1}");
    }
    for (name, v) in &r.variants {
        println!("variant.{name} {v:.1}");
    }
    for note in &r.notes {
        println!("note               {note}");
    }
}

fn bound_cmd(args: BoundArgs) -> Result<()> {
    let spec = args.instance.spec()?;
    let base = bound(&spec)?;
    let report = transfer(&base, args.algorithm, args.mu)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_report(&report);
    }
    Ok(())
}

fn verify_cmd(level: Level) -> Result<()> {
    let checks = verify::run(level)?;
    let mut failed = 0;
    for c in &checks {
        println!(
            "{} {:<20} {}",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.detail
        );
        if !c.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        bail!("{failed} of {} checks failed", checks.len());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Front(args) => front(args),
        Command::Bound(args) => bound_cmd(args),
        Command::Verify { level } => verify_cmd(level),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
