//! Command-line front end.
//!
//! Exit codes: `0` success, `1` usage or input error, `2` verification
//! mismatch, `3` parameter solver divergence.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boolfn::{parse_expression, TruthTable};
use crate::diagram::{build_diagram, DiagramKind, VariableOrder};
use crate::dnc::{self, presets, DncConfig, DncLevel, DncStats};
use crate::error::{Error, Result};
use crate::fs_engine::{self, min_obdd_fs};
use crate::oracle;
use crate::params::{self, ParamSolution};
use crate::qsearch::SearchMode;
use crate::subset;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Above this the sweep needs more than a few minutes and tens of GB.
pub const MAX_SWEEP_VARS: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "optobdd", version, about = "Exact variable-order minimization for OBDDs and ZDDs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find a minimum diagram and its order; prints a JSON report.
    Minimize(MinimizeArgs),
    /// Solve the split-parameter equations.
    SolveParams(SolveParamsArgs),
    /// Cross-check the engines on random functions.
    Verify(VerifyArgs),
    /// Write the truth table of an expression.
    Parse(ParseArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fs,
    Dnc,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Obdd,
    Zdd,
}

impl From<KindArg> for DiagramKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Obdd => DiagramKind::Obdd,
            KindArg::Zdd => DiagramKind::Zdd,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Classical,
    Qsim,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Classical => SearchMode::Classical,
            ModeArg::Qsim => SearchMode::SimulatedQuantum,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct FunctionArgs {
    /// Truth-table file (`n=<n>` header, then 2^n bits, x1 least significant).
    #[arg(long, conflicts_with = "expr")]
    pub input: Option<PathBuf>,
    /// Boolean expression over x1..xn using ~ & ^ | and parentheses.
    #[arg(long, requires = "n")]
    pub expr: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
}

impl FunctionArgs {
    pub fn load(&self) -> Result<TruthTable> {
        match (&self.input, &self.expr, self.n) {
            (Some(path), _, _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
                TruthTable::from_text(&text)
            }
            (None, Some(expr), Some(n)) => parse_expression(expr, n),
            _ => Err(Error::Config("give --input <file> or --expr <text> --n <vars>".into())),
        }
    }
}

#[derive(Args, Debug)]
pub struct MinimizeArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_enum, default_value = "fs")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "obdd")]
    pub kind: KindArg,
    /// Number of splits; alone it selects the matching `table1` preset.
    #[arg(long)]
    pub k: Option<usize>,
    /// Comma-separated split fractions.
    #[arg(long, value_delimiter = ',', conflicts_with = "preset")]
    pub alpha: Option<Vec<f64>>,
    /// `table1-k<K>` (K = 1..6) or `table2-chain<L>` (L = 1..10).
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum, default_value = "classical")]
    pub mode: ModeArg,
    /// Error bound for the query accounting; defaults to 2^-n.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Disable the subset-state cache.
    #[arg(long)]
    pub no_memo: bool,
    /// Also write the diagram in Graphviz format.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveParamsArgs {
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 3.0)]
    pub gamma: f64,
    /// Run the composition chain for this many levels (k defaults to 6).
    #[arg(long)]
    pub chain: Option<usize>,
    /// Print only the JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "obdd")]
    pub kind: KindArg,
}

#[derive(Args, Debug)]
pub struct ParseArgs {
    #[arg(long)]
    pub expr: String,
    #[arg(long)]
    pub n: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    /// 1-based, root variable first.
    pub read_first_to_last: Vec<usize>,
    /// 1-based, `levels_bottom_up[0]` sits at level 1 and is read last.
    pub levels_bottom_up: Vec<usize>,
}

impl From<&VariableOrder> for OrderReport {
    fn from(o: &VariableOrder) -> Self {
        Self {
            read_first_to_last: o.read_order().iter().map(|v| v + 1).collect(),
            levels_bottom_up: o.levels().iter().map(|v| v + 1).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub method: Method,
    pub kind: DiagramKind,
    pub n: usize,
    pub order: OrderReport,
    pub min_cost: usize,
    pub total_size: usize,
    /// Level 1 first.
    pub widths_bottom_up: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<DncStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimizing_orders: Option<u64>,
    pub wall_time_ms: f64,
}

fn dnc_levels(args: &MinimizeArgs) -> Result<Vec<DncLevel>> {
    if let Some(alphas) = &args.alpha {
        if args.k.is_some_and(|k| k != alphas.len()) {
            return Err(Error::Config(format!(
                "--k {} does not match {} alpha values",
                args.k.unwrap_or_default(),
                alphas.len()
            )));
        }
        return Ok(vec![DncLevel::new(alphas.clone())?]);
    }
    if let Some(p) = &args.preset {
        let bad = || Error::Config(format!("unknown preset `{p}`"));
        if let Some(k) = p.strip_prefix("table1-k") {
            let k: usize = k.parse().map_err(|_| bad())?;
            return presets::table1(k).map(|l| vec![l]).ok_or_else(bad);
        }
        if let Some(l) = p.strip_prefix("table2-chain") {
            let l: usize = l.parse().map_err(|_| bad())?;
            return presets::table2_chain(l).ok_or_else(bad);
        }
        return Err(bad());
    }
    match args.k {
        Some(k) => presets::table1(k)
            .map(|l| vec![l])
            .ok_or_else(|| Error::Config(format!("no preset for k = {k}; pass --alpha"))),
        None => Ok(vec![DncLevel::new(vec![presets::SINGLE_SPLIT])?]),
    }
}

fn check_sweep_size(tt: &TruthTable) -> Result<()> {
    if tt.n() > MAX_SWEEP_VARS {
        return Err(Error::TooLarge {
            what: "variable count for the subset sweep",
            n: tt.n(),
            max: MAX_SWEEP_VARS,
        });
    }
    Ok(())
}

pub fn minimize(args: &MinimizeArgs) -> Result<RunReport> {
    let tt = args.function.load()?;
    let kind = DiagramKind::from(args.kind);
    let start = Instant::now();
    let (order, stats, minimizing_orders) = match args.method {
        Method::Fs => {
            check_sweep_size(&tt)?;
            (min_obdd_fs(&tt, kind).order, None, None)
        }
        Method::Dnc => {
            check_sweep_size(&tt)?;
            let mut cfg = DncConfig::chain(dnc_levels(args)?, kind, args.mode.into());
            cfg.epsilon = args.epsilon;
            cfg.memoize = !args.no_memo;
            let (state, stats) = dnc::opt_obdd_composed(&tt, &cfg)?;
            (state.completed_order(), Some(stats), None)
        }
        Method::Brute => {
            let (best, count) = oracle::brute_force_min(&tt, kind)?;
            (best.order, None, Some(count))
        }
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let diagram = build_diagram(&tt, &order, kind)?;
    if let Some(path) = &args.dot {
        std::fs::write(path, diagram.to_dot())
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    }
    Ok(RunReport {
        method: args.method,
        kind,
        n: tt.n(),
        order: OrderReport::from(&order),
        min_cost: diagram.nonterminals(),
        total_size: diagram.total_size(),
        widths_bottom_up: diagram.widths().to_vec(),
        stats,
        minimizing_orders,
        wall_time_ms,
    })
}

pub fn solve_params(args: &SolveParamsArgs) -> Result<Vec<ParamSolution>> {
    match (args.chain, args.k) {
        (Some(iters), k) => params::composition_chain(k.unwrap_or(6), args.gamma, iters),
        (None, Some(k)) => Ok(vec![params::solve_system(k, args.gamma)?]),
        (None, None) => Err(Error::Config("give --k <splits> or --chain <levels>".into())),
    }
}

/// Aligned text table, six decimals per value.
pub fn format_param_table(rows: &[ParamSolution]) -> String {
    let k = rows.iter().map(|r| r.alphas.len()).max().unwrap_or(0);
    let mut header = vec!["k".to_string(), "gamma".into(), "beta".into()];
    header.extend((1..=k).map(|i| format!("alpha_{i}")));
    let mut lines = vec![header];
    for r in rows {
        let mut line = vec![r.k.to_string(), format!("{:.6}", r.gamma_in), format!("{:.6}", r.beta_out)];
        line.extend(r.alphas.iter().map(|a| format!("{a:.6}")));
        line.resize(header_len(k), "-".into());
        lines.push(line);
    }
    let widths: Vec<usize> = (0..header_len(k))
        .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for l in &lines {
        let cells: Vec<String> = l.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn header_len(k: usize) -> usize {
    3 + k
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub kind: Option<DiagramKind>,
    pub trials: usize,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub runs: usize,
    pub mismatches: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.mismatches == 0)
    }

    fn record(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckResult {
                    name,
                    runs: 0,
                    mismatches: 0,
                    failures: Vec::new(),
                });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[idx];
        c.runs += 1;
        if !ok {
            c.mismatches += 1;
            if c.failures.len() < 5 {
                c.failures.push(detail());
            }
        }
    }
}

/// Randomized cross-checks between the sweep, the divide-and-conquer
/// driver, the diagram builder and (for small `n`) brute force.
pub fn verify(args: &VerifyArgs) -> Result<VerifyReport> {
    TruthTable::random(args.n, 0)?;
    if args.n > 12 {
        return Err(Error::TooLarge {
            what: "verification variable count",
            n: args.n,
            max: 12,
        });
    }
    let kind = DiagramKind::from(args.kind);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut report = VerifyReport {
        n: args.n,
        kind: Some(kind),
        trials: args.trials,
        checks: Vec::new(),
    };
    let n = args.n;
    let full = subset::full(n);
    for trial in 0..args.trials {
        let tt = TruthTable::random_with(n, &mut rng)?;
        let tag = |what: &str| format!("trial {trial}: {what} ({})", tt.to_text().replace('\n', " "));
        let fs = min_obdd_fs(&tt, kind);

        let d = build_diagram(&tt, &fs.order, kind)?;
        report.record("sweep order rebuilds to its cost", d.nonterminals() == fs.min_cost as usize, || {
            tag(&format!("{} vs {}", d.nonterminals(), fs.min_cost))
        });
        let evaluates = (0..tt.len()).all(|i| {
            let point: Vec<bool> = (0..n).map(|v| i >> v & 1 == 1).collect();
            d.evaluate(&point).ok() == Some(tt.get(i))
        });
        report.record("diagram evaluates to the function", evaluates, || tag("evaluation"));
        report.record("diagram is reduced", d.check_reduced().is_ok(), || tag("reduction"));

        if n <= 8 {
            let (best, _) = oracle::brute_force_min(&tt, kind)?;
            report.record("sweep equals brute force", best.nonterminals == fs.min_cost as usize, || {
                tag(&format!("{} vs {}", fs.min_cost, best.nonterminals))
            });
        }

        for level in [presets::table1(1), presets::table1(2)].into_iter().flatten() {
            let cfg = DncConfig::single(level, kind, SearchMode::SimulatedQuantum);
            match dnc::opt_obdd(&tt, &cfg) {
                Ok((st, _)) => report.record("divide and conquer equals sweep", st.min_cost() == fs.min_cost, || {
                    tag(&format!("{} vs {}", st.min_cost(), fs.min_cost))
                }),
                Err(Error::SplitCollapse { .. }) => {}
                Err(e) => return Err(e),
            }
        }

        if n >= 2 {
            let k = rng.gen_range(1..n);
            let split = dnc::best_split_cost(&fs_engine::initial_state(&tt, kind), full, k)?;
            report.record("rank split identity", split == fs.min_cost, || {
                tag(&format!("k={k}: {split} vs {}", fs.min_cost))
            });
        }
    }
    Ok(report)
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Error::Format(e.to_string()))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Format(e.to_string());
    match &cli.command {
        Command::Minimize(args) => {
            write_json(out, &minimize(args)?)?;
        }
        Command::SolveParams(args) => {
            let rows = solve_params(args)?;
            if !args.json {
                write!(out, "{}", format_param_table(&rows)).map_err(io)?;
            }
            write_json(out, &rows)?;
        }
        Command::Verify(args) => {
            let report = verify(args)?;
            for c in &report.checks {
                let verdict = if c.mismatches == 0 { "ok" } else { "MISMATCH" };
                writeln!(out, "{verdict:>8}  {:<36} {}/{}", c.name, c.runs - c.mismatches, c.runs).map_err(io)?;
                for f in &c.failures {
                    writeln!(out, "          {f}").map_err(io)?;
                }
            }
            return Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY });
        }
        Command::Parse(args) => {
            let text = parse_expression(&args.expr, args.n)?.to_text();
            match &args.out {
                Some(path) => std::fs::write(path, text).map_err(io)?,
                None => write!(out, "{text}").map_err(io)?,
            }
        }
    }
    Ok(EXIT_OK)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Solver(_) => EXIT_SOLVER,
        _ => EXIT_USAGE,
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
