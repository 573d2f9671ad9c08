//! Command-line front end.
//!
//! Precision arguments (`--prec H`) are in half-units: `--prec 10` means
//! "known below q^5". Exit codes: 0 computed/verified, 1 identity mismatch,
//! 2 usage or parse error, 3 window/box not stabilized.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::identities::{CheckReport, Form, PentagonArgs};
use crate::lattice::parse_file_contents;
use crate::{Config, Engine, Error, HalfExp, IndexCharge, QSeries, Windowed};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Debug, Parser)]
#[command(name = "tetra-index", version, about = "Exact q-series for the tetrahedron index")]
struct Cli {
    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Largest half-width of a one-dimensional charge window.
    #[arg(long, global = true)]
    window_cap: Option<u32>,
    /// Largest half-width of a lattice box.
    #[arg(long, global = true)]
    box_cap: Option<u32>,
    /// Consecutive vanishing terms (or shells) required at each window end.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    margin: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The tetrahedron index I(m, e).
    #[command(allow_negative_numbers = true)]
    Tet {
        #[arg(short = 'm')]
        m: i64,
        #[arg(short = 'e')]
        e: i64,
        /// Precision in half-units.
        #[arg(long, value_parser = prec_parser())]
        prec: i64,
    },
    /// Both triality relations at (m, e).
    #[command(allow_negative_numbers = true)]
    Triality {
        #[arg(short = 'm')]
        m: i64,
        #[arg(short = 'e')]
        e: i64,
        #[arg(long, default_value = "literal")]
        form: Form,
        #[arg(long, value_parser = prec_parser())]
        prec: i64,
    },
    /// The pentagon relation (or its shifted variant with --shifted).
    #[command(allow_negative_numbers = true)]
    Pentagon {
        #[arg(long)]
        m1: i64,
        #[arg(long)]
        m2: i64,
        #[arg(long)]
        e1: i64,
        #[arg(long)]
        e2: i64,
        #[arg(long, requires = "shifted")]
        e0: Option<i64>,
        #[arg(long)]
        shifted: bool,
        #[arg(long, default_value = "literal")]
        form: Form,
        #[arg(long, value_parser = prec_parser())]
        prec: i64,
    },
    /// Seed a delta Bailey pair, apply steps, verify every level.
    #[command(allow_negative_numbers = true)]
    Bailey {
        #[arg(long)]
        n0: i64,
        #[arg(long)]
        t: i64,
        /// Comma-separated step parameters, e.g. `2,-1`.
        #[arg(long, allow_hyphen_values = true, default_value = "", value_parser = parse_steps)]
        steps: Steps,
        /// Inclusive range `A..B`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        m_range: MRange,
        #[arg(long, default_value = "literal")]
        form: Form,
        #[arg(long, value_parser = prec_parser())]
        prec: i64,
    },
    /// Evaluate a lattice-sum expression file.
    Eval {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_parser = prec_parser())]
        prec: i64,
    },
    /// The figure-eight knot index.
    Ind41 {
        #[arg(long, value_parser = prec_parser())]
        prec: i64,
    },
}

fn prec_parser() -> clap::builder::RangedI64ValueParser<i64> {
    clap::value_parser!(i64).range(0..)
}

#[derive(Clone, Debug)]
struct Steps(Vec<i64>);

#[derive(Clone, Debug)]
struct MRange(i64, i64);

fn parse_steps(s: &str) -> Result<Steps, String> {
    if s.trim().is_empty() {
        return Ok(Steps(Vec::new()));
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad step `{x}`: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Steps)
}

fn parse_range(s: &str) -> Result<MRange, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let a = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(MRange(a, b))
}

/// Reproducibility metadata attached to every result.
#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub command: Vec<String>,
    pub prec_half_exp: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    pub box_extent: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", content = "payload", rename_all = "lowercase")]
pub enum Payload {
    Series(QSeries),
    Report(CheckReport),
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    #[serde(flatten)]
    pub payload: Payload,
    pub meta: Meta,
}

impl OutputRecord {
    fn render(&self, format: OutputFormat) -> String {
        let body = match (&self.payload, format) {
            (Payload::Series(s), OutputFormat::Latex) => s.to_latex(),
            (Payload::Series(s), _) => s.to_string(),
            (Payload::Report(r), _) => r.to_string(),
        };
        match (self.meta.level, self.meta.t) {
            (Some(level), Some(t)) => format!("level {level} (t={t}): {body}"),
            _ => body,
        }
    }

    fn failed(&self) -> bool {
        matches!(&self.payload, Payload::Report(r) if !r.holds)
    }
}

/// Result of one invocation: exit code plus what goes to each stream.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and executes it.
pub fn run<S: AsRef<str>>(argv: &[S]) -> RunOutput {
    let args: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => RunOutput {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => RunOutput {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let format = cli.format;
    match execute(cli, args.into_iter().skip(1).collect()) {
        Ok(records) => {
            let stdout = match format {
                OutputFormat::Json if records.len() == 1 => {
                    serde_json::to_string_pretty(&records[0]).expect("serializable")
                }
                OutputFormat::Json => serde_json::to_string_pretty(&records).expect("serializable"),
                _ => records
                    .iter()
                    .map(|r| r.render(format))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            let code = if records.iter().any(OutputRecord::failed) {
                1
            } else {
                0
            };
            RunOutput {
                code,
                stdout: stdout + "\n",
                stderr: String::new(),
            }
        }
        Err(e) => RunOutput {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn execute(cli: Cli, command: Vec<String>) -> Result<Vec<OutputRecord>, Error> {
    let defaults = Config::default();
    let config = Config {
        window_cap: cli.window_cap.unwrap_or(defaults.window_cap),
        box_cap: cli.box_cap.or(defaults.box_cap),
        margin: cli.margin.unwrap_or(defaults.margin),
        ..defaults
    };
    let engine = Engine::new(config);
    let meta = |prec: i64| Meta {
        command: command.clone(),
        prec_half_exp: prec,
        window: None,
        box_extent: None,
        level: None,
        t: None,
    };
    let series_boxed = |w: Windowed<QSeries>, prec: i64| OutputRecord {
        payload: Payload::Series(w.value),
        meta: Meta {
            box_extent: w.extent,
            ..meta(prec)
        },
    };
    let report = |r: CheckReport, prec: i64| OutputRecord {
        meta: Meta {
            window: r.window,
            ..meta(prec)
        },
        payload: Payload::Report(r),
    };

    Ok(match cli.command {
        Command::Tet { m, e, prec } => vec![OutputRecord {
            payload: Payload::Series(engine.tet_index(IndexCharge::new(m, e), HalfExp(prec))),
            meta: meta(prec),
        }],
        Command::Triality { m, e, form, prec } => vec![report(
            engine.triality_check(IndexCharge::new(m, e), form, HalfExp(prec))?,
            prec,
        )],
        Command::Pentagon {
            m1,
            m2,
            e1,
            e2,
            e0,
            shifted,
            form,
            prec,
        } => {
            let a = PentagonArgs::new(m1, m2, e1, e2);
            let r = if shifted {
                engine.pentagon_shifted_check(a, e0.unwrap_or(0), form, HalfExp(prec))?
            } else {
                engine.pentagon_check(a, HalfExp(prec))?
            };
            vec![report(r, prec)]
        }
        Command::Bailey {
            n0,
            t,
            steps,
            m_range,
            form,
            prec,
        } => {
            let reports = engine.bailey_chain(
                n0,
                t,
                &steps.0,
                form,
                m_range.0..=m_range.1,
                HalfExp(prec),
            )?;
            let mut level_t = t;
            reports
                .into_iter()
                .enumerate()
                .map(|(level, r)| {
                    if level > 0 {
                        level_t += steps.0[level - 1];
                    }
                    let mut rec = report(r, prec);
                    rec.meta.level = Some(level);
                    rec.meta.t = Some(level_t);
                    rec
                })
                .collect()
        }
        Command::Eval { file, prec } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Error::Syntax {
                pos: 0,
                msg: format!("cannot read {}: {e}", file.display()),
            })?;
            let expr = parse_file_contents(&text)?;
            vec![series_boxed(engine.eval_expr_windowed(&expr, HalfExp(prec))?, prec)]
        }
        Command::Ind41 { prec } => vec![series_boxed(engine.ind41_windowed(HalfExp(prec))?, prec)],
    })
}
