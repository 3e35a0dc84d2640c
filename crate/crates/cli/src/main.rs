use std::fs::File;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use evaluate::bench::{self, BenchConfig, BenchRow, MethodRun, TABLE};
use evaluate::fairness::estimate_fairness;
use evaluate::ordering::{EstimateConfig, DEFAULT_SAMPLES};
use evaluate::search::{solve_alphabeta, solve_min_first, SearchError, SearchOptions, DEFAULT_MAX_VARS};
use evaluate::tree::tree_size;
use evaluate::{ExprError, Expression, Value};
use evaluate_server::{EngineConfig, ServerConfig};

#[derive(Parser)]
#[command(name = "evaluate", version, about = "Exact minimax solver for the e-Valuate expression game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an expression and print its minimax value, variation and counters.
    Solve(SolveArgs),
    /// Compare plain alpha-beta with ordered search plus transposition table
    /// on the four reference expressions.
    Bench(BenchArgs),
    /// Estimate outcome frequencies under uniformly random play.
    Fairness(FairnessArgs),
    /// Run the HTTP game server.
    Serve(ServeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Ascending,
    Heuristic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Args)]
struct EstimateArgs {
    /// Random completions per (digit, variable) pair for the digit order.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl EstimateArgs {
    fn config(&self) -> EstimateConfig {
        EstimateConfig { samples: self.samples, seed: self.seed, ..Default::default() }
    }
}

#[derive(Args)]
struct SolveArgs {
    expression: String,
    #[arg(long, value_enum, default_value = "ascending")]
    order: OrderArg,
    #[arg(long, value_enum, default_value = "off")]
    tt: Toggle,
    #[command(flatten)]
    estimate: EstimateArgs,
    #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
    max_vars: usize,
    /// Let MIN move first; the value is minus the minimax value of the
    /// negated expression.
    #[arg(long)]
    min_first: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    estimate: EstimateArgs,
    #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
    max_vars: usize,
    /// Also write the results as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Reference rows to run (1-4), comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4])]
    rows: Vec<usize>,
}

#[derive(Args)]
struct FairnessArgs {
    expression: String,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
    max_vars: usize,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, env = "EVALUATE_HOST", default_value = "127.0.0.1")]
    host: IpAddr,
    #[arg(long, env = "EVALUATE_PORT", default_value_t = 8080)]
    port: u16,
    /// Directory with the UI bundle (index.html and assets).
    #[arg(long, env = "EVALUATE_STATIC_DIR")]
    static_dir: Option<PathBuf>,
    /// JSON file where sessions are saved after every change.
    #[arg(long, env = "EVALUATE_SNAPSHOT")]
    snapshot: Option<PathBuf>,
    /// Sessions idle this long are dropped.
    #[arg(long, env = "EVALUATE_IDLE_TIMEOUT_SECS", default_value_t = 24 * 60 * 60)]
    idle_timeout_secs: u64,
    #[arg(long, env = "EVALUATE_MAX_VARS", default_value_t = 5)]
    max_vars: usize,
    #[arg(long, env = "EVALUATE_SAMPLES", default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

/// `println!` that stops quietly when stdout is closed (e.g. piped into `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn format_value(v: Value) -> String {
    match v {
        Value::Finite(r) => format!("{r} ({})", r.to_decimal_string()),
        Value::Invalid => v.to_string(),
    }
}

fn parse_expression(text: &str, max_vars: usize) -> Result<Expression> {
    let expr = Expression::parse(text).with_context(|| format!("cannot parse {text:?}"))?;
    if expr.variable_count() > max_vars {
        return Err(SearchError::TooManyVariables { n: expr.variable_count(), cap: max_vars })
            .context("raise --max-vars to solve larger expressions");
    }
    Ok(expr)
}

fn solve(args: &SolveArgs) -> Result<()> {
    let expr = parse_expression(&args.expression, args.max_vars)?;
    let mut opts = match args.order {
        OrderArg::Ascending => SearchOptions::plain(),
        OrderArg::Heuristic => SearchOptions::heuristic(&expr, &args.estimate.config())?,
    };
    opts = opts.with_tt(args.tt == Toggle::On).with_max_vars(args.max_vars);
    let start = Instant::now();
    let (res, stats) = if args.min_first { solve_min_first(&expr, &opts)? } else { solve_alphabeta(&expr, &opts)? };
    let elapsed = start.elapsed();
    out!("expression:   {}", expr.source());
    out!("minimax:      {}", format_value(res.value));
    out!("pv:           {}", res.pv_string());
    out!("digit order:  {}", opts.digit_order);
    out!("tree size:    {}", tree_size(expr.variable_count()));
    out!("visited:      {}", stats.visited);
    out!("alpha_prunes: {} ({} cutoffs)", stats.alpha_prunes, stats.alpha_cutoffs);
    out!("beta_prunes:  {} ({} cutoffs)", stats.beta_prunes, stats.beta_cutoffs);
    out!("tt_prunes:    {} ({} hits, {} stores)", stats.tt_prunes, stats.tt_hits, stats.tt_stores);
    out!("time:         {:.3} s", elapsed.as_secs_f64());
    Ok(())
}

fn print_run(run: &MethodRun) {
    out!(
        "  {:<11} {:>8}  pv {:<28} pruned {:>14}  visited {:>12}  order {}  {} ms",
        run.method.to_string(),
        run.minimax.to_string(),
        run.pv.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
        run.pruned(),
        run.visited,
        run.digit_order,
        run.millis,
    );
}

fn bench_cmd(args: &BenchArgs) -> Result<()> {
    let config = BenchConfig { estimate: args.estimate.config(), max_vars: args.max_vars };
    let mut rows: Vec<BenchRow> = Vec::new();
    let mut failures = 0;
    for &i in &args.rows {
        let Some(fixture) = i.checked_sub(1).and_then(|k| TABLE.get(k)) else {
            bail!("row {i} does not exist; rows are 1-{}", TABLE.len());
        };
        out!("row {i}: {}  (n = {})", fixture.expression, fixture.pv.len());
        match bench::run_row(&fixture.expr(), &config) {
            Ok(row) => {
                print_run(&row.plain);
                print_run(&row.ordered);
                out!("  visited ratio {:.2}", row.visit_ratio());
                rows.push(row);
            }
            Err(e) => {
                failures += 1;
                eprintln!("  row {i} failed: {e}");
            }
        }
    }
    if let Some(path) = &args.csv {
        let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        bench::write_csv(&rows, file)?;
        out!("wrote {}", path.display());
    }
    if failures > 0 {
        bail!("{failures} row(s) failed");
    }
    Ok(())
}

fn fairness_cmd(args: &FairnessArgs) -> Result<()> {
    let expr = parse_expression(&args.expression, args.max_vars)?;
    let r = estimate_fairness(&expr, args.trials, args.seed)?;
    out!("expression: {}", expr.source());
    out!("minimax:    {}", format_value(r.minimax));
    out!("trials:     {}", r.trials);
    out!("MAX wins:   {:>8}  {:.4}", r.max_wins, r.p_max_win);
    out!("MIN wins:   {:>8}  {:.4}", r.min_wins, r.p_min_win);
    out!("draws:      {:>8}  {:.4}", r.draws, r.p_draw);
    out!("undefined:  {:>8}  {:.4}", r.invalid, r.p_invalid);
    Ok(())
}

fn serve_cmd(args: &ServeArgs) -> Result<()> {
    let config = ServerConfig {
        addr: SocketAddr::new(args.host, args.port),
        static_dir: args.static_dir.clone(),
        snapshot: args.snapshot.clone(),
        idle_timeout: Duration::from_secs(args.idle_timeout_secs),
        engine: EngineConfig { max_vars: args.max_vars, samples: args.samples },
    };
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(evaluate_server::serve(config)).context("server failed")
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ExprError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<SearchError>() {
        Some(SearchError::Unsolvable) => 3,
        Some(SearchError::TooManyVariables { .. }) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Fairness(a) => fairness_cmd(a),
        Command::Serve(a) => serve_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
