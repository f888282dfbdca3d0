//! Command-line front end: reads lattice files, runs one command, emits a JSON report.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use latret::chains::{grid_embed, order_dimension};
use latret::io::{self, parse_lattice_file, LatticeFile, Report};
use latret::oracle::{exists_retraction, SearchMode};
use latret::retract::{classify_absolute_retract, retract_onto, ClassId, Dim, Verdict};
use latret::slim::{build_slim_rectangular, theorem1_witness, ForkScript};
use latret::verify::{run_suite, VerifyOptions, SUITES};
use latret::{Error, FiniteLattice};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;

const DEFAULT_MAX_SIZE: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "latret", version, about = "Finite lattices, retractions and absolute retracts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Largest lattice handed to exhaustive retraction search.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SIZE)]
    pub max_size: usize,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural properties.
    Analyze { file: PathBuf },
    /// Order dimension.
    Dim { file: PathBuf },
    /// Embedding into the grid spanned by the join-irreducibles.
    EmbedGrid { file: PathBuf },
    /// Retraction onto a sublattice.
    Retract {
        file: PathBuf,
        /// JSON array of element ids, or an object with a `sub` field.
        #[arg(long)]
        sub: Option<PathBuf>,
        #[arg(long)]
        class: Option<ClassId>,
    },
    /// Absolute-retract verdict within a class.
    Classify {
        file: PathBuf,
        #[arg(long)]
        class: ClassId,
    },
    /// Extension of a slim semimodular lattice with no retraction back.
    WitnessSps {
        file: PathBuf,
        #[command(flatten)]
        script: ScriptArgs,
    },
    /// Slim rectangular lattice from a grid and a fork script.
    GenSlim {
        #[command(flatten)]
        script: ScriptArgs,
    },
    /// Invariant suites.
    OracleVerify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug, Args)]
pub struct ScriptArgs {
    /// `MxN`: a grid of M by N cells.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// JSON array of `[top, left]` pairs naming 4-cells.
    #[arg(long)]
    pub forks: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected MxN, got `{s}`"))?;
    let m: usize = m.trim().parse().map_err(|_| format!("bad row count `{m}`"))?;
    let n: usize = n.trim().parse().map_err(|_| format!("bad column count `{n}`"))?;
    if m == 0 || n == 0 {
        return Err("grid needs at least one cell in each direction".into());
    }
    Ok((m, n))
}

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self { report, code: EXIT_OK }
    }

    fn checked(report: Report, holds: bool) -> Self {
        Self { report, code: if holds { EXIT_OK } else { EXIT_REFUTED } }
    }
}

fn read_lattice(path: &Path) -> anyhow::Result<(LatticeFile, FiniteLattice)> {
    let text = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_lattice_file(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_slice(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_sub(path: &Path) -> anyhow::Result<Vec<String>> {
    let v = read_json(path)?;
    let list = match &v {
        Value::Object(o) => o.get("sub").cloned().unwrap_or(Value::Null),
        _ => v,
    };
    serde_json::from_value(list).with_context(|| format!("{}: expected a list of element ids", path.display()))
}

fn script_from(args: &ScriptArgs) -> anyhow::Result<Option<ForkScript>> {
    let steps: Vec<(String, String)> = match &args.forks {
        Some(p) => serde_json::from_value(read_json(p)?).with_context(|| format!("{}: expected [[top, left], …]", p.display()))?,
        None => Vec::new(),
    };
    match args.grid {
        Some((m, n)) => Ok(Some(ForkScript { base_grid_sizes: (m + 1, n + 1), steps })),
        None if steps.is_empty() => Ok(None),
        None => bail!("--forks needs --grid"),
    }
}

fn default_class(l: &FiniteLattice) -> anyhow::Result<ClassId> {
    if !l.is_distributive() {
        bail!(Error::NotDistributive);
    }
    Ok(ClassId::Dfin(Dim::Finite(order_dimension(l)?)))
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Analyze { file } => {
            let (_, l) = read_lattice(file)?;
            let payload = json!({ "size": l.len(), "properties": l.classify_properties() });
            Ok(Outcome::ok(Report::new("analyze", "ok", payload)))
        }
        Command::Dim { file } => {
            let (_, l) = read_lattice(file)?;
            let k = order_dimension(&l)?;
            Ok(Outcome::ok(Report::new("dim", "ok", json!({ "dimension": k }))))
        }
        Command::EmbedGrid { file } => {
            let (_, l) = read_lattice(file)?;
            let e = grid_embed(&l)?;
            Ok(Outcome::ok(Report::new("embed-grid", "ok", io::embedding_json(&e))))
        }
        Command::Retract { file, sub, class } => {
            let (lf, l) = read_lattice(file)?;
            let ids = match sub {
                Some(p) => read_sub(p)?,
                None => lf.sub.clone().context("no sublattice: pass --sub or add a `sub` field")?,
            };
            let mut d = l.indices_of(&ids).context("sublattice names an unknown element")?;
            d.sort_unstable();
            d.dedup();
            let class = match class {
                Some(c) => *c,
                None => default_class(&l)?,
            };
            let (f, method) = match retract_onto(&l, &d, class) {
                Ok(f) => (Some(f), "construction"),
                Err(Error::NotEligible) if l.len() <= cli.max_size => {
                    (exists_retraction(&l, &d, SearchMode::First)?.retraction, "search")
                }
                Err(e) => return Err(e.into()),
            };
            let report = match &f {
                Some(f) => {
                    let mut payload = io::retraction_json(f);
                    payload["method"] = json!(method);
                    payload["class"] = json!(class.to_string());
                    Report::new("retract", "retraction", payload)
                }
                None => Report::new("retract", "noRetraction", json!({ "method": method, "class": class.to_string() })),
            };
            let holds = f.is_none_or(|f| f.is_retraction_onto(&d));
            Ok(Outcome::checked(report, holds))
        }
        Command::Classify { file, class } => {
            let (_, l) = read_lattice(file)?;
            let v = classify_absolute_retract(&l, *class, cli.max_size)?;
            let (verdict, holds) = match &v {
                Verdict::IsAbsoluteRetract { .. } => ("IsAbsoluteRetract", true),
                Verdict::Not(r) => ("Not", r.certificate.holds()),
            };
            let mut payload = io::verdict_json(&l, &v);
            payload["class"] = json!(class.to_string());
            Ok(Outcome::checked(Report::new("classify", verdict, payload), holds))
        }
        Command::WitnessSps { file, script } => {
            let (_, l) = read_lattice(file)?;
            let script = script_from(script)?;
            let w = theorem1_witness(&l, script.as_ref())?;
            let holds = !w.retraction_found && w.swing_holds();
            let verdict = if holds { "NotAbsoluteRetract" } else { "refuted" };
            Ok(Outcome::checked(Report::new("witness-sps", verdict, io::witness_json(&w)), holds))
        }
        Command::GenSlim { script } => {
            let script = script_from(script)?.context("gen-slim needs --grid")?;
            let d = build_slim_rectangular(&script)?;
            let (m, n) = script.grid_dims();
            let mut payload = io::diagram_json(&format!("slim-{m}x{n}"), &d);
            payload["script"] = json!(script);
            Ok(Outcome::ok(Report::new("gen-slim", "ok", payload)))
        }
        Command::OracleVerify { suite } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut opts = VerifyOptions::default();
            if let Some(seed) = cli.seed {
                opts.seed = seed;
            }
            let outcomes = names.iter().map(|s| run_suite(s, &opts)).collect::<Result<Vec<_>, _>>()?;
            let holds = outcomes.iter().all(|o| o.passed());
            let verdict = if holds { "pass" } else { "fail" };
            Ok(Outcome::checked(Report::new("oracle-verify", verdict, json!({ "suites": outcomes })), holds))
        }
    }
}

/// Parses `args`, runs the command and prints its report; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let _ = writeln!(std::io::stdout(), "{}", out.report.to_json());
            out.code
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_DOMAIN
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_flag() {
        assert_eq!(parse_grid("3x2"), Ok((3, 2)));
        assert!(parse_grid("3").is_err());
        assert!(parse_grid("0x2").is_err());
    }
}
