//! `qauth` command line.
//!
//! Exit status is 0 on success, 1 when an analysis guard refuses the
//! request (or a self-test check fails), and 2 for anything malformed.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::auth::AuthFamily;
use crate::codes::{rm_css, sparsity_report, CssCode};
use crate::error::{Error, Result};
use crate::protocol::{self, Condition, KeyStatistic, ProbeBases, Strategy};
use crate::purity::{self, SweepConfig};
use crate::selftest::{self, CodeFixture};
use crate::symplectic::{Pauli1, PauliOp};

pub const REPORT_SCHEMA: &str = "qauth.report/v1";
pub const OUT_DIR_ENV: &str = "QAUTH_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "qauth", version, about = "Analyse keyed quantum authentication codes", args_override_self = true)]
pub struct Cli {
    /// JSON object of flag values, applied before the command-line flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a code or authentication family and print its descriptor.
    BuildCode {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Distances and weight sparsity of an inner CSS code.
    AnalyzeCode {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Worst-case undetected probability per weight class.
    SweepEpsilon {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 6)]
        max_weight: usize,
        #[arg(long, default_value_t = 10_000)]
        keys: u64,
        /// Random representatives per class above the exhaustive weight.
        #[arg(long, default_value_t = 16)]
        reps: usize,
        #[arg(long, default_value_t = 2)]
        exhaustive_weight: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Posterior over the block type of a position after one attack.
    Leakage {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Pauli string, qubit 0 first. Defaults to X on qubit 0.
        #[arg(long)]
        attack: Option<String>,
        /// Physical position whose block type is reported.
        #[arg(long, default_value_t = 0)]
        position: usize,
        #[arg(long, value_enum, default_value_t = ConditionArg::Accept)]
        condition: ConditionArg,
        #[arg(long, default_value_t = 10_000)]
        keys: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Probe every position, infer the trap layout, then forge.
    ProbeAttack {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Independent runs; more than one prints a summary.
        #[arg(long, default_value_t = 1)]
        runs: u64,
        #[arg(long)]
        x_only: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Several ciphertexts under one code key; attack the last.
    ParallelReuse {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = StrategyArg::ProbeAll)]
        strategy: StrategyArg,
        /// JSON strategy description; overrides --strategy.
        #[arg(long)]
        strategy_file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        position: usize,
        #[arg(long, default_value_t = 1)]
        follow_up: usize,
        #[arg(long, value_enum, default_value_t = BasisArg::X)]
        basis: BasisArg,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 2)]
        weight: usize,
        #[arg(long, default_value_t = 2)]
        rounds: usize,
        #[arg(long)]
        x_only: bool,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fast deterministic invariant checks.
    Selftest {
        /// Code fixture (JSON with `n` and `generator_rows_hex`) to check
        /// instead of the built-in [[7,1,3]] member.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Member `i` of the punctured Reed–Muller CSS family.
    #[arg(long)]
    pub index: Option<usize>,
    /// Inner block length, `2^(2i+1) - 1`; alternative to --index.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Work partitions. Results do not depend on this.
    #[arg(long, default_value_t = 16)]
    pub shards: usize,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file. Defaults to `$QAUTH_OUT_DIR/<command>.<ext>`, else stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record the wall-clock time in the report.
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyArg {
    RmCss,
    Trap,
    StrongTrap,
    Clifford,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum ConditionArg {
    Accept,
    Reject,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum StrategyArg {
    Identity,
    SingleProbe,
    ProbeAll,
    RandomPauli,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum BasisArg {
    X,
    Y,
    Z,
}

impl From<BasisArg> for Pauli1 {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::X => Pauli1::X,
            BasisArg::Y => Pauli1::Y,
            BasisArg::Z => Pauli1::Z,
        }
    }
}

/// Envelope shared by every JSON report.
#[derive(Serialize, Debug)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub library_version: &'static str,
    pub seed: Option<u64>,
    pub shards: Option<usize>,
    pub family: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
    pub result: Value,
}

impl FamilyArgs {
    fn index(&self) -> Result<usize> {
        match (self.index, self.n) {
            (Some(i), None) => Ok(i),
            (None, Some(n)) => (1..16)
                .find(|&i| (1usize << (2 * i + 1)) - 1 == n)
                .ok_or_else(|| Error::InvalidConfig(format!("no family member has block length {n}"))),
            (Some(i), Some(n)) if (1usize << (2 * i + 1)) - 1 == n => Ok(i),
            (Some(i), Some(n)) => Err(Error::InvalidConfig(format!("--index {i} and --n {n} disagree"))),
            (None, None) => Err(Error::InvalidConfig("give --index or --n".into())),
        }
    }

    fn css(&self) -> Result<CssCode> {
        rm_css(self.index()?)
    }

    fn auth(&self) -> Result<AuthFamily> {
        match self.family {
            FamilyArg::RmCss => Err(Error::InvalidConfig(
                "this command needs an authentication family: trap, strong-trap or clifford".into(),
            )),
            FamilyArg::Trap => AuthFamily::trap_rm(self.index()?),
            FamilyArg::StrongTrap => AuthFamily::strong_trap_rm(self.index()?),
            FamilyArg::Clifford => {
                let (m, t) = (self.m.unwrap_or(1), self.t.ok_or_else(|| Error::InvalidConfig("clifford needs --t".into()))?);
                AuthFamily::clifford(m, t)
            }
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

struct Outcome {
    command: &'static str,
    seed: Option<u64>,
    shards: Option<usize>,
    family: Option<Value>,
    result: Value,
    csv: Option<String>,
    failed: bool,
}

impl Outcome {
    fn new(command: &'static str, result: Value) -> Self {
        Self {
            command,
            seed: None,
            shards: None,
            family: None,
            result,
            csv: None,
            failed: false,
        }
    }
}

fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::BuildCode { family, .. } => {
            if family.family == FamilyArg::RmCss {
                let index = family.index()?;
                let css = rm_css(index)?;
                let mut o = Outcome::new("build-code", to_value(&css.descriptor(Some(index)))?);
                o.family = Some(to_value(&css.descriptor(Some(index)))?);
                Ok(o)
            } else {
                let f = family.auth()?;
                let d = to_value(&f.descriptor())?;
                let mut o = Outcome::new("build-code", d.clone());
                o.family = Some(d);
                Ok(o)
            }
        }
        Command::AnalyzeCode { family, .. } => {
            let index = family.index()?;
            let css = family.css()?;
            let sparsity = sparsity_report(&css)?;
            let result = serde_json::json!({
                "n": css.n(),
                "m": css.m(),
                "d": css.distance(),
                "benign_d": css.benign_distance(),
                "f_X": sparsity.f_x,
                "f_X_weight": sparsity.f_x_weight,
                "sparsity": sparsity,
            });
            let mut o = Outcome::new("analyze-code", result);
            o.family = Some(to_value(&css.descriptor(Some(index)))?);
            Ok(o)
        }
        Command::SweepEpsilon {
            family,
            run,
            max_weight,
            keys,
            reps,
            exhaustive_weight,
            ..
        } => {
            let f = family.auth()?;
            let config = SweepConfig {
                max_weight: *max_weight,
                exhaustive_weight: *exhaustive_weight,
                representatives: *reps,
                n_keys: *keys,
                seed: run.seed,
                shards: run.shards,
            };
            let report = purity::epsilon_sweep(&f, &config)?;
            let mut o = Outcome::new("sweep-epsilon", to_value(&report)?);
            o.csv = Some(report.to_csv()?);
            o.seed = Some(run.seed);
            o.shards = Some(run.shards);
            o.family = Some(to_value(&f.descriptor())?);
            Ok(o)
        }
        Command::Leakage {
            family,
            run,
            attack,
            position,
            condition,
            keys,
            ..
        } => {
            let f = family.auth()?;
            let n = f.total_qubits();
            let attack = match attack {
                Some(s) => s.parse::<PauliOp>()?,
                None => PauliOp::single(n, 0, Pauli1::X),
            };
            let condition = match condition {
                ConditionArg::Accept => Condition::Accept,
                ConditionArg::Reject => Condition::Reject,
            };
            let report = protocol::key_posterior(
                &f,
                &attack,
                condition,
                KeyStatistic::BlockType { position: *position },
                *keys,
                run.seed,
                run.shards,
            )?;
            let mut o = Outcome::new("leakage", to_value(&report)?);
            o.seed = Some(run.seed);
            o.shards = Some(run.shards);
            o.family = Some(to_value(&f.descriptor())?);
            Ok(o)
        }
        Command::ProbeAttack {
            family,
            seed,
            runs,
            x_only,
            ..
        } => {
            let f = family.auth()?;
            let bases = if *x_only { ProbeBases::XOnly } else { ProbeBases::Both };
            let result = if *runs == 1 {
                to_value(&protocol::adaptive_probe(&f, *seed, bases)?)?
            } else {
                to_value(&protocol::adaptive_probe_runs(&f, *runs, *seed, bases)?)?
            };
            let mut o = Outcome::new("probe-attack", result);
            o.seed = Some(*seed);
            o.family = Some(to_value(&f.descriptor())?);
            Ok(o)
        }
        Command::ParallelReuse {
            family,
            run,
            strategy,
            strategy_file,
            position,
            follow_up,
            basis,
            budget,
            weight,
            rounds,
            x_only,
            trials,
            ..
        } => {
            let f = family.auth()?;
            let strategy = match strategy_file {
                Some(path) => serde_json::from_str::<Strategy>(&read(path)?)?,
                None => match strategy {
                    StrategyArg::Identity => Strategy::Identity { rounds: *rounds },
                    StrategyArg::SingleProbe => Strategy::SingleProbe {
                        position: *position,
                        basis: (*basis).into(),
                        follow_up: *follow_up,
                    },
                    StrategyArg::ProbeAll => Strategy::ProbeAllThenForge {
                        bases: if *x_only { ProbeBases::XOnly } else { ProbeBases::Both },
                        budget: *budget,
                    },
                    StrategyArg::RandomPauli => Strategy::RandomPauli {
                        weight: *weight,
                        rounds: *rounds,
                    },
                },
            };
            let stats = protocol::parallel_reuse(&f, &strategy, *trials, run.seed, run.shards)?;
            let mut o = Outcome::new("parallel-reuse", to_value(&stats)?);
            o.seed = Some(run.seed);
            o.shards = Some(run.shards);
            o.family = Some(to_value(&f.descriptor())?);
            Ok(o)
        }
        Command::Selftest { fixture, .. } => {
            let fixture = match fixture {
                Some(path) => Some(serde_json::from_str::<CodeFixture>(&read(path)?)?),
                None => None,
            };
            let summary = selftest::run(fixture.as_ref());
            let mut o = Outcome::new("selftest", to_value(&summary)?);
            o.failed = !summary.passed;
            Ok(o)
        }
    }
}

fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::BuildCode { output, .. }
        | Command::AnalyzeCode { output, .. }
        | Command::SweepEpsilon { output, .. }
        | Command::Leakage { output, .. }
        | Command::ProbeAttack { output, .. }
        | Command::ParallelReuse { output, .. }
        | Command::Selftest { output, .. } => output,
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn render(outcome: &Outcome, output: &OutputArgs) -> Result<String> {
    match output.format {
        Format::Csv => outcome
            .csv
            .clone()
            .ok_or_else(|| Error::InvalidConfig(format!("{} has no CSV output", outcome.command))),
        Format::Json => {
            let report = Report {
                schema: REPORT_SCHEMA,
                command: outcome.command,
                library_version: env!("CARGO_PKG_VERSION"),
                seed: outcome.seed,
                shards: outcome.shards,
                family: outcome.family.clone(),
                timestamp_unix: output
                    .timestamp
                    .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())),
                result: outcome.result.clone(),
            };
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn destination(command: &'static str, output: &OutputArgs) -> Option<PathBuf> {
    let ext = match output.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    output.out.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{command}.{ext}")))
    })
}

const SUBCOMMANDS: [&str; 7] = [
    "build-code",
    "analyze-code",
    "sweep-epsilon",
    "leakage",
    "probe-attack",
    "parallel-reuse",
    "selftest",
];

/// Splices the flags from a `--config` JSON object in right after the
/// subcommand, so explicit flags given later take precedence.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let pos = args.iter().position(|a| a == "--config");
    let inline = args
        .iter()
        .position(|a| a.to_str().is_some_and(|s| s.starts_with("--config=")));
    let path = match (pos, inline) {
        (Some(i), _) => args
            .get(i + 1)
            .map(PathBuf::from)
            .ok_or_else(|| Error::InvalidConfig("--config needs a path".into()))?,
        (None, Some(i)) => PathBuf::from(&args[i].to_str().expect("checked")["--config=".len()..]),
        (None, None) => return Ok(args),
    };
    let Value::Object(map) = serde_json::from_str::<Value>(&read(&path)?)? else {
        return Err(Error::InvalidConfig("config file must hold a JSON object".into()));
    };
    let mut extra = Vec::new();
    let mut command = None;
    for (k, v) in map {
        if k == "command" {
            command = v.as_str().map(str::to_owned);
            continue;
        }
        let flag = format!("--{}", k.replace('_', "-"));
        match v {
            Value::Bool(true) => extra.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => extra.extend([flag, n.to_string()]),
            Value::String(s) => extra.extend([flag, s]),
            other => return Err(Error::InvalidConfig(format!("config value for {k} must be a scalar, got {other}"))),
        }
    }
    let mut args = args;
    let sub = args
        .iter()
        .position(|a| a.to_str().is_some_and(|s| SUBCOMMANDS.contains(&s)));
    let at = match (sub, command) {
        (Some(i), _) => i + 1,
        (None, Some(c)) => {
            args.insert(1, c.into());
            2
        }
        (None, None) => return Err(Error::InvalidConfig("no subcommand given".into())),
    };
    for (offset, a) in extra.into_iter().enumerate() {
        args.insert(at + offset, a.into());
    }
    Ok(args)
}

/// Parses `args` (program name first), runs the command and writes its
/// report. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let output = output_args(&cli.command);
    let result = execute(&cli.command).and_then(|o| {
        let text = render(&o, output)?;
        match destination(o.command, output) {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(&path, text)?;
            }
            None => print!("{text}"),
        }
        Ok(o.failed)
    });
    match result {
        Ok(false) => 0,
        Ok(true) => {
            eprintln!("error: self-test failures, see report");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_guard_refusal() {
                1
            } else {
                2
            }
        }
    }
}
