//! Command-line front end for `stackavg`.
//!
//! Every command reads one model file, runs one decision or computation and
//! prints a report, either for people or as JSON (see `docs/report-schema.md`).
//! Exit status: 0 for YES, 1 for NO, 2 for errors, 3 for an inconclusive
//! oracle. Commands without a yes/no answer exit with 0 on success.

pub mod format;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use stackavg::art::decide_art;
use stackavg::asc::decide_asc;
use stackavg::avglc::decide_avg_lc;
use stackavg::games::{solve_wps_game, GameObjective};
use stackavg::grammar::{pda_to_cfg, Cfg};
use stackavg::mincost::min_letter_cost;
use stackavg::omega::{decide_avginf_lc, decide_avgsup_lc, factorize};
use stackavg::oracle::{oracle_decide, CostRule};
use stackavg::{parse_rational, LetterCost, Mode, Relation, Threshold};

use format::{parse_automaton, parse_client_server, parse_model, AutomatonFile, Model};

pub const SCHEMA: &str = "stackavg-report/1";

#[derive(Parser, Debug)]
#[command(name = "stackavg", version, about = "Average stack cost and average letter cost decisions for pushdown automata")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human, global = true)]
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Inf,
    Sup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RelArg {
    Lt,
    Le,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CostArg {
    Stack,
    Letter,
}

#[derive(clap::Args, Debug, Clone)]
pub struct ThresholdArgs {
    #[arg(long, value_enum, default_value_t = RelArg::Le)]
    pub rel: RelArg,
    /// Threshold as `p/q`, an integer or a finite decimal.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Average stack cost of an ω-automaton with a `pricing:` section.
    Asc {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Inf)]
        mode: ModeArg,
        #[command(flatten)]
        threshold: ThresholdArgs,
    },
    /// Average letter cost of a grammar, a finite-word or an ω-automaton.
    Avglc {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Inf)]
        mode: ModeArg,
        #[command(flatten)]
        threshold: ThresholdArgs,
    },
    /// Least letter cost of a word of a grammar or a finite-word automaton.
    Mincost { file: PathBuf },
    /// Mean-payoff game with a Büchi objective on a weighted pushdown system.
    Game {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Inf)]
        mode: ModeArg,
        #[command(flatten)]
        threshold: ThresholdArgs,
    },
    /// Average response time of a client-server spec.
    Art {
        file: PathBuf,
        #[command(flatten)]
        threshold: ThresholdArgs,
    },
    /// Components of an ω-automaton's language.
    Factorize { file: PathBuf },
    /// Threshold check on runs of bounded stack height.
    Oracle {
        file: PathBuf,
        #[arg(long = "stack-bound")]
        stack_bound: usize,
        #[arg(long, value_enum, default_value_t = CostArg::Stack)]
        cost: CostArg,
        #[command(flatten)]
        threshold: ThresholdArgs,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Asc { .. } => "asc",
            Command::Avglc { .. } => "avglc",
            Command::Mincost { .. } => "mincost",
            Command::Game { .. } => "game",
            Command::Art { .. } => "art",
            Command::Factorize { .. } => "factorize",
            Command::Oracle { .. } => "oracle",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Asc { file, .. }
            | Command::Avglc { file, .. }
            | Command::Mincost { file }
            | Command::Game { file, .. }
            | Command::Art { file, .. }
            | Command::Factorize { file }
            | Command::Oracle { file, .. } => file,
        }
    }
}

/// Outcome of a command before rendering.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub problem: Option<String>,
    pub inputs: Vec<(String, String)>,
    pub answer: Option<String>,
    /// Extra result lines, such as a cost value or components.
    pub details: Vec<(String, Value)>,
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            return 2;
        }
        match self.answer.as_deref() {
            Some("NO") => 1,
            Some("UNKNOWN") => 3,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> Value {
        let inputs: Map<String, Value> = self
            .inputs
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let mut out = json!({
            "schema": SCHEMA,
            "command": self.command,
            "problem": self.problem,
            "input": inputs,
            "answer": self.answer,
            "elapsed_ms": self.elapsed_ms,
        });
        let obj = out.as_object_mut().unwrap();
        for (k, v) in &self.details {
            obj.insert(k.clone(), v.clone());
        }
        if let Some(e) = &self.error {
            obj.insert("error".into(), Value::String(e.clone()));
        }
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        if let Some(e) = &self.error {
            writeln!(out, "error: {e}").unwrap();
            return out;
        }
        if let Some(a) = &self.answer {
            writeln!(out, "{a}").unwrap();
        }
        if let Some(p) = &self.problem {
            writeln!(out, "  problem: {p}").unwrap();
        }
        for (k, v) in &self.inputs {
            writeln!(out, "  {k}: {v}").unwrap();
        }
        for (k, v) in &self.details {
            match v {
                Value::String(s) => writeln!(out, "  {k}: {s}").unwrap(),
                Value::Array(items) => {
                    writeln!(out, "  {k}:").unwrap();
                    for i in items {
                        writeln!(out, "    {}", i.as_str().map_or_else(|| i.to_string(), str::to_string)).unwrap();
                    }
                }
                other => writeln!(out, "  {k}: {other}").unwrap(),
            }
        }
        writeln!(out, "  time: {:.3} ms", self.elapsed_ms).unwrap();
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Human => self.to_human(),
            OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&self.to_json()).unwrap()),
        }
    }
}

fn threshold(args: &ThresholdArgs) -> Result<Threshold, String> {
    let bound = parse_rational(&args.lambda).ok_or_else(|| format!("'{}' is not a rational number", args.lambda))?;
    let relation = match args.rel {
        RelArg::Lt => Relation::Strict,
        RelArg::Le => Relation::NonStrict,
    };
    Ok(Threshold::new(relation, bound))
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Inf => Mode::Inf,
        ModeArg::Sup => Mode::Sup,
    }
}

fn yes_no(b: bool) -> String {
    if b { "YES" } else { "NO" }.to_string()
}

fn need_lc(lc: &Option<LetterCost>) -> Result<&LetterCost, String> {
    lc.as_ref().ok_or_else(|| "the model has no 'lc:' section".to_string())
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn automaton(path: &PathBuf) -> Result<AutomatonFile, String> {
    parse_automaton(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs one command and measures it. Errors end up in the report.
pub fn run_command(cmd: &Command) -> Report {
    let start = Instant::now();
    let mut report = Report {
        command: cmd.name().to_string(),
        problem: None,
        inputs: vec![("file".to_string(), cmd.file().display().to_string())],
        answer: None,
        details: Vec::new(),
        error: None,
        elapsed_ms: 0.0,
    };
    if let Err(e) = execute(cmd, &mut report) {
        report.error = Some(e);
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    log::info!("{} finished in {:.3} ms", report.command, report.elapsed_ms);
    report
}

fn record(report: &mut Report, d: stackavg::Decision) {
    report.problem = Some(d.problem.tag().to_string());
    report.inputs.extend(d.inputs);
    report.answer = Some(yes_no(d.answer));
}

fn execute(cmd: &Command, report: &mut Report) -> Result<(), String> {
    let err = |e: stackavg::ModelError| e.to_string();
    match cmd {
        Command::Asc { file, mode: m, threshold: t } => {
            let f = automaton(file)?;
            let th = threshold(t)?;
            let c = f.pricing.as_ref().ok_or("the model has no 'pricing:' section")?;
            report.inputs.push(("mode".into(), mode(*m).to_string()));
            record(report, decide_asc(&f.pda, c, &th, mode(*m)).map_err(err)?);
        }
        Command::Avglc { file, mode: m, threshold: t } => {
            let th = threshold(t)?;
            let d = match parse_model(&read(file)?).map_err(|e| e.to_string())? {
                Model::Grammar(g) => decide_avg_lc(&g.cfg, need_lc(&g.lc)?, &th),
                Model::Automaton(f) if !f.pda.is_omega() => {
                    decide_avg_lc(&pda_to_cfg(&f.pda).map_err(err)?, need_lc(&f.lc)?, &th)
                }
                Model::Automaton(f) => {
                    report.inputs.push(("mode".into(), mode(*m).to_string()));
                    match mode(*m) {
                        Mode::Inf => decide_avginf_lc(&f.pda, need_lc(&f.lc)?, &th),
                        Mode::Sup => decide_avgsup_lc(&f.pda, need_lc(&f.lc)?, &th),
                    }
                }
                Model::ClientServer(_) => return Err("avglc expects a grammar or an automaton".into()),
            };
            record(report, d.map_err(err)?);
        }
        Command::Mincost { file } => {
            let (cfg, lc): (Cfg, LetterCost) = match parse_model(&read(file)?).map_err(|e| e.to_string())? {
                Model::Grammar(g) => {
                    let lc = need_lc(&g.lc)?.clone();
                    (g.cfg, lc)
                }
                Model::Automaton(f) => (pda_to_cfg(&f.pda).map_err(err)?, need_lc(&f.lc)?.clone()),
                Model::ClientServer(_) => return Err("mincost expects a grammar or an automaton".into()),
            };
            let v = min_letter_cost(&cfg, &lc).map_err(err)?;
            report.problem = Some("min-letter-cost".into());
            report.details.push(("value".into(), Value::String(v.to_string())));
        }
        Command::Game { file, mode: m, threshold: t } => {
            let f = automaton(file)?;
            let w = f.wps()?;
            let obj = GameObjective {
                mode: mode(*m),
                threshold: threshold(t)?,
                buchi: w.buchi().clone(),
            };
            record(report, solve_wps_game(&w, &obj).map_err(err)?);
        }
        Command::Art { file, threshold: t } => {
            let spec = parse_client_server(&read(file)?).map_err(|e| format!("{}: {e}", file.display()))?;
            record(report, decide_art(&spec, &threshold(t)?).map_err(err)?);
        }
        Command::Factorize { file } => {
            let f = automaton(file)?;
            let parts = factorize(&f.pda).map_err(err)?;
            let items: Vec<Value> = parts
                .components
                .iter()
                .map(|c| Value::String(format!("({}, {})", f.pda.state_name(c.state), f.pda.format_top(c.top))))
                .collect();
            report.problem = Some("factorize".into());
            report.details.push(("components".into(), Value::Array(items)));
        }
        Command::Oracle {
            file,
            stack_bound,
            cost,
            threshold: t,
        } => {
            let f = automaton(file)?;
            let th = threshold(t)?;
            let rule = match cost {
                CostArg::Stack => CostRule::Stack(f.pricing.as_ref().ok_or("the model has no 'pricing:' section")?),
                CostArg::Letter => CostRule::Letter(need_lc(&f.lc)?),
            };
            let answer = oracle_decide(&f.pda, rule, &th, *stack_bound).map_err(err)?;
            report.problem = Some(stackavg::Problem::Oracle.tag().into());
            report.inputs.push(("threshold".into(), th.to_string()));
            report.inputs.push(("stack-bound".into(), stack_bound.to_string()));
            report.answer = Some(answer.to_string());
        }
    }
    Ok(())
}

/// Exact threshold value as parsed from the command line.
pub fn parse_threshold(rel: RelArg, lambda: &str) -> Result<Threshold, String> {
    threshold(&ThresholdArgs {
        rel,
        lambda: lambda.to_string(),
    })
}
