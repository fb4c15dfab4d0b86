//! The `graded` command line.
//!
//! Every subcommand builds one JSON report; the human output is a rendering
//! of the same value, so both carry identical data. Exit status: 0 when the
//! command succeeded and no violation was found, 1 when a violation or
//! counterexample was found, 2 on usage or parse errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::axioms::{check_axiom, AxiomId};
use crate::bridge::{classify, ingest_distance_matrix};
use crate::dynamics::{
    fixed_points, is_homomorphism, is_nonexpansive, ks_dichotomy, minimal_invariant_admissible,
    minimal_invariant_balls, orbit, regular_fixed_point, regularity_report, RegularityVariant, SelfMap,
};
use crate::error::{Error, Result};
use crate::format::{parse_map, parse_matrix, parse_system, write_system};
use crate::grade::Window;
use crate::harness::{falsify, ClaimId, VerdictOutcome};
use crate::hull::{enumerate_admissible, radii, HullMode};
use crate::pointset::PointSet;
use crate::structure::{check_compact_structure, check_normal_structure, check_spherical_completeness};
use crate::system::RelationalSystem;

#[derive(Debug, Parser)]
#[command(name = "graded", version, about = "Graded relational systems and their dyadic semimetrics")]
struct Cli {
    /// Machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing on success.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Balls centred inside the set.
    Paper,
    /// Balls with arbitrary centres.
    Closure,
}

impl From<ModeArg> for HullMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Paper => HullMode::PaperCov,
            ModeArg::Closure => HullMode::ArbitraryCenter,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a system file and check its axioms.
    Validate { system: PathBuf },
    /// Classify the induced distance.
    Classify { system: PathBuf },
    /// Enumerate admissible sets with their radii.
    Hulls {
        system: PathBuf,
        #[arg(long, value_enum, default_value = "paper")]
        mode: ModeArg,
    },
    /// Compact, normal and spherical-completeness reports.
    Structure {
        system: PathBuf,
        #[arg(long, value_enum, default_value = "paper")]
        mode: ModeArg,
    },
    /// Homomorphism, nonexpansiveness, orbits and regularity of a map.
    Dynamics { system: PathBuf, map: PathBuf },
    /// Fixed points, minimal invariant sets and balls, dichotomy.
    Fixpoint {
        system: PathBuf,
        map: PathBuf,
        #[arg(long, value_enum, default_value = "paper")]
        mode: ModeArg,
    },
    /// Search for a counterexample to a catalogued claim.
    Falsify {
        claim: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the shrunk counterexample here.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Convert a distance matrix into a system.
    Ingest {
        matrix: PathBuf,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, required = true)]
        window: Vec<i64>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// Exit status and the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, S>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if status == 0 {
                CliOutput { status, stdout: text, stderr: String::new() }
            } else {
                CliOutput { status, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok((status, report)) => {
            let stdout = if cli.quiet {
                String::new()
            } else if cli.json {
                let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                s.push('\n');
                s
            } else {
                render(&report)
            };
            CliOutput { status, stdout, stderr: String::new() }
        }
        Err(e) => {
            let status = match e {
                Error::Rejected(_) | Error::Precondition(_) => 1,
                _ => 2,
            };
            let report = error_report(&e);
            let stdout = if cli.json && !cli.quiet {
                format!("{}\n", serde_json::to_string_pretty(&report).expect("serializes"))
            } else {
                String::new()
            };
            CliOutput { status, stdout, stderr: format!("error: {e}\n") }
        }
    }
}

fn error_report(e: &Error) -> Value {
    match e {
        Error::Parse(d) => json!({ "error": "parse", "diagnostics": [d] }),
        other => json!({ "error": other.to_string() }),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<RelationalSystem> {
    parse_system(&read(path)?)
}

fn load_map(path: &Path, sys: &RelationalSystem) -> Result<SelfMap> {
    let t = parse_map(&read(path)?)?;
    if t.len() != sys.len() {
        return Err(Error::Structural(format!(
            "map has {} points, system has {}",
            t.len(),
            sys.len()
        )));
    }
    Ok(t)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn names(sys: &RelationalSystem, set: &PointSet) -> Value {
    Value::from(set.iter().map(|x| sys.label(x).to_string()).collect::<Vec<_>>())
}

fn dispatch(cmd: &Command) -> Result<(i32, Value)> {
    match cmd {
        Command::Validate { system } => {
            let sys = load_system(system)?;
            let axioms: Vec<Value> = AxiomId::ALL.iter().map(|&a| to_value(&check_axiom(&sys, a))).collect();
            Ok((
                0,
                json!({
                    "command": "validate",
                    "points": sys.len(),
                    "labels": sys.labels(),
                    "window": sys.window(),
                    "diagnostics": [],
                    "axioms": axioms,
                }),
            ))
        }
        Command::Classify { system } => {
            let sys = load_system(system)?;
            let rep = classify(&sys);
            let status = i32::from(!rep.implication_failures.is_empty());
            let mut v = json!({ "command": "classify", "labels": sys.labels() });
            merge(&mut v, to_value(&rep));
            Ok((status, v))
        }
        Command::Hulls { system, mode } => {
            let sys = load_system(system)?;
            let mode = HullMode::from(*mode);
            let mut sets = Vec::new();
            for a in enumerate_admissible(&sys, mode)? {
                let r = radii(&sys, &a.points)?;
                sets.push(json!({
                    "points": a.points,
                    "names": names(&sys, &a.points),
                    "witness_balls": a.witness_balls,
                    "cheb_grade": r.cheb_grade,
                    "diam_grade": r.diam_grade,
                    "cheb_radius": r.cheb_radius,
                    "diameter": r.diameter,
                    "normality": r.normality(),
                }));
            }
            Ok((0, json!({ "command": "hulls", "mode": mode, "count": sets.len(), "sets": sets })))
        }
        Command::Structure { system, mode } => {
            let sys = load_system(system)?;
            let mode = HullMode::from(*mode);
            let compact = check_compact_structure(&sys, mode)?;
            let normal = check_normal_structure(&sys, mode)?;
            let spherical = check_spherical_completeness(&sys);
            let consistent = [&compact, &normal, &spherical]
                .iter()
                .all(|r| r.criteria_consistent && (r.holds || r.replay(&sys)));
            Ok((
                i32::from(!consistent),
                json!({
                    "command": "structure",
                    "mode": mode,
                    "compact": compact,
                    "normal": normal,
                    "spherically_complete": spherical,
                    "witnesses_replay": consistent,
                }),
            ))
        }
        Command::Dynamics { system, map } => {
            let sys = load_system(system)?;
            let t = load_map(map, &sys)?;
            let h = is_homomorphism(&sys, &t)?;
            let n = is_nonexpansive(&sys, &t)?;
            let agree = h.holds == n.holds
                && h.witness.as_ref().map(|w| (w.x, w.y)) == n.witness.as_ref().map(|w| (w.x, w.y));
            let orbits: Vec<_> = sys.points().map(|x| orbit(&sys, &t, x)).collect::<Result<_>>()?;
            let reports: Vec<_> = sys.points().map(|x| regularity_report(&sys, &t, x)).collect::<Result<_>>()?;
            Ok((
                i32::from(!agree),
                json!({
                    "command": "dynamics",
                    "homomorphism": h,
                    "nonexpansive": n,
                    "equivalence_agrees": agree,
                    "fixed_points": names(&sys, &fixed_points(&t)),
                    "globally_regular": reports.iter().all(|r| r.regular),
                    "globally_asymptotically_regular": reports.iter().all(|r| r.asymptotically_regular),
                    "globally_weak_regular": reports.iter().all(|r| r.weak_regular),
                    "orbits": orbits,
                    "regularity": reports,
                }),
            ))
        }
        Command::Fixpoint { system, map, mode } => {
            let sys = load_system(system)?;
            let t = load_map(map, &sys)?;
            let mode = HullMode::from(*mode);
            let fixed = fixed_points(&t);
            let minimal = match minimal_invariant_admissible(&sys, &t, mode) {
                Ok(sets) => Value::from(
                    sets.iter()
                        .map(|a| json!({ "points": a.points, "names": names(&sys, &a.points) }))
                        .collect::<Vec<_>>(),
                ),
                Err(Error::Precondition(msg)) => json!({ "skipped": msg }),
                Err(e) => return Err(e),
            };
            let dichotomy = ks_dichotomy(&sys, &t)?;
            let regular = regular_fixed_point(&sys, &t, RegularityVariant::Regular)?;
            let asymptotic = regular_fixed_point(&sys, &t, RegularityVariant::Asymptotic)?;
            let hit = dichotomy.is_counterexample() || regular.is_counterexample() || asymptotic.is_counterexample();
            Ok((
                i32::from(hit),
                json!({
                    "command": "fixpoint",
                    "mode": mode,
                    "fixed_points": fixed,
                    "fixed_point_names": names(&sys, &fixed),
                    "minimal_invariant_admissible": minimal,
                    "minimal_invariant_balls": minimal_invariant_balls(&sys, &t)?,
                    "dichotomy": dichotomy,
                    "regular_fixed_point": regular,
                    "asymptotic_fixed_point": asymptotic,
                    "counterexample": hit,
                }),
            ))
        }
        Command::Falsify { claim, trials, seed, out } => {
            let claim: ClaimId = claim.parse()?;
            let verdict = falsify(claim, *trials, *seed)?;
            let text = verdict.instance_text();
            if let (Some(path), Some(text)) = (out, &text) {
                std::fs::write(path, text)
                    .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            let status = i32::from(verdict.outcome == VerdictOutcome::Counterexample);
            let mut v = json!({ "command": "falsify", "statement": claim.statement() });
            merge(&mut v, to_value(&verdict));
            if let Value::Object(m) = &mut v {
                m.insert("instance_text".into(), text.map_or(Value::Null, Value::from));
            }
            Ok((status, v))
        }
        Command::Ingest { matrix, window, output } => {
            let d = parse_matrix(&read(matrix)?)?;
            let w = Window::new(window[0], window[1])?;
            let sys = ingest_distance_matrix(&d, w)?;
            let text = write_system(&sys);
            std::fs::write(output, &text)
                .map_err(|e| Error::Usage(format!("cannot write {}: {e}", output.display())))?;
            Ok((
                0,
                json!({
                    "command": "ingest",
                    "points": sys.len(),
                    "window": w,
                    "output": output.display().to_string(),
                }),
            ))
        }
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

/// Indented `key: value` rendering of a JSON report.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => render_object(m, 0, &mut out),
        other => {
            let _ = writeln!(out, "{}", scalar(other));
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => format!(
            "{{{}}}",
            m.iter().map(|(k, v)| format!("{k}: {}", scalar(v))).collect::<Vec<_>>().join(", ")
        ),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn render_object(m: &Map<String, Value>, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for (k, v) in m {
        if let Value::String(text) = v {
            if text.contains('\n') {
                let _ = writeln!(out, "{pad}{k}: |");
                for line in text.lines() {
                    let _ = writeln!(out, "{pad}  {line}");
                }
                continue;
            }
        }
        if is_flat(v) {
            let _ = writeln!(out, "{pad}{k}: {}", scalar(v));
            continue;
        }
        let _ = writeln!(out, "{pad}{k}:");
        match v {
            Value::Object(inner) => render_object(inner, depth + 1, out),
            Value::Array(items) => {
                for item in items {
                    match item {
                        Value::Object(inner) => {
                            let _ = writeln!(out, "{pad}  -");
                            render_object(inner, depth + 2, out);
                        }
                        other => {
                            let _ = writeln!(out, "{pad}  - {}", scalar(other));
                        }
                    }
                }
            }
            _ => unreachable!("flat values handled above"),
        }
    }
}
