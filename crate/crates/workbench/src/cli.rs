//! `souslin verify | build-lusin | extract | play | export`.
//!
//! Exit codes: 0 when every check passes, 1 when some check is violated,
//! 2 for configuration errors.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::rc::Rc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use souslin_core::choquet::{copy_strategy, cylinder_strategy, extract_schemes, extraction_check, StrategyII};
use souslin_core::lusin::{build_lusin, LusinInput};
use souslin_core::schemes::standard_scheme;
use souslin_core::selectors::PrefixMap;
use souslin_core::{BaireSpaceModel, CylExpr, FinSeq, Nat, Report, SpaceModel, Status, Window};

use crate::formats::{self, OpenJson};
use crate::repl::{self, Notation};
use crate::suites::{run_suite, ConfigError, RunConfig, SpaceSpec, MAX_BREADTH, MAX_DEPTH};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "souslin", version, about = "Cylinder algebra, Souslin schemes and Choquet games on the Baire space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyName {
    Copy,
    Cylinder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportKind {
    /// A cylinder expression in the text grammar.
    Expr,
    /// A dotted sequence such as `0.3.1`.
    Seq,
    /// A space descriptor (`sierpinski`, `discrete:N`, a JSON file).
    Space,
    /// A preset prefix map by name.
    PrefixMap,
    /// `standard` or `lusin`, dumped over the window.
    Scheme,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        breadth: Option<Nat>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Synthesize a partitioning scheme from a base and check it.
    BuildLusin {
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 6)]
        breadth: Nat,
        /// File with one cylinder expression per line, used cyclically.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Extract U and V schemes from the modified strategy.
    Extract {
        #[arg(long, default_value = "sierpinski")]
        space: String,
        #[arg(long, value_enum, default_value_t = StrategyName::Copy)]
        strategy: StrategyName,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        breadth: Nat,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Play player I against the modified strategy.
    Play {
        #[arg(long, default_value = "sierpinski")]
        space: String,
        #[arg(long, value_enum, default_value_t = StrategyName::Copy)]
        strategy: StrategyName,
    },
    /// Print the JSON encoding of an object.
    Export {
        #[arg(value_enum)]
        kind: ExportKind,
        value: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        breadth: Nat,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn guard(depth: usize, breadth: Nat) -> Result<Window, ConfigError> {
    if depth > MAX_DEPTH {
        return Err(ConfigError::DepthTooLarge(depth));
    }
    if breadth > MAX_BREADTH {
        return Err(ConfigError::BreadthTooLarge(breadth));
    }
    Ok(Window::new(depth, breadth))
}

fn emit(json: &Value, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), ConfigError> {
    let text = serde_json::to_string_pretty(json).expect("values serialize") + "\n";
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| ConfigError::Invalid(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| ConfigError::Invalid(e.to_string())),
    }
}

fn summarize(report: &Report, out: &mut dyn Write) -> i32 {
    let _ = writeln!(
        out,
        "{} pass, {} violation, {} unresolved, {} breach",
        report.count(Status::Pass),
        report.count(Status::Violation),
        report.count(Status::Unresolved),
        report.count(Status::Breach)
    );
    for c in report.hard_failures().take(5) {
        let node = c.node.as_ref().map(|n| n.to_string()).unwrap_or_default();
        let _ = writeln!(out, "  {} {} at {node}: {}", c.status, c.id, c.detail);
    }
    if report.is_clean() {
        EXIT_PASS
    } else {
        EXIT_VIOLATIONS
    }
}

fn report_json(report: &Report) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "node": c.node.as_ref().map(formats::seq_to_json),
                "status": c.status.as_str(),
                "detail": c.detail,
            })
        })
        .collect();
    Value::Array(checks)
}

/// Parses `args` (program name first) and runs the command.
pub fn run(args: impl IntoIterator<Item = OsString>, input: &mut dyn BufRead, out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    match dispatch(cli.command, input, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            EXIT_CONFIG
        }
    }
}

fn dispatch(command: Command, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, ConfigError> {
    match command {
        Command::Verify { suite, depth, breadth, seed, space, json } => {
            let mut config = RunConfig::new(suite.parse()?);
            config.depth = depth.unwrap_or(config.depth);
            config.breadth = breadth.unwrap_or(config.breadth);
            config.seed = seed;
            config.space = space.as_deref().map(SpaceSpec::parse).transpose()?;
            let report = run_suite(&config)?;
            if let Some(path) = &json {
                std::fs::write(path, report.to_json())
                    .map_err(|e| ConfigError::Invalid(format!("cannot write {}: {e}", path.display())))?;
            }
            let t = report.total;
            writeln!(
                out,
                "{} (seed {}): {} pass, {} violation, {} unresolved, {} breach",
                report.suite, report.seed, t.pass, t.violation, t.unresolved, t.breach
            )
            .ok();
            for f in report.findings.iter().filter(|f| f.status != "unresolved").take(5) {
                writeln!(out, "  {} {} [{}] {}", f.status, f.id, f.context, f.detail).ok();
            }
            Ok(if report.passed { EXIT_PASS } else { EXIT_VIOLATIONS })
        }
        Command::BuildLusin { depth, breadth, base, json } => {
            let window = guard(depth, breadth)?;
            let input = match &base {
                None => LusinInput::standard(),
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| ConfigError::Invalid(format!("cannot read {}: {e}", path.display())))?;
                    let mut list = Vec::new();
                    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                        let e: CylExpr = line
                            .parse()
                            .map_err(|e| ConfigError::Invalid(format!("{}:{}: {e}", path.display(), i + 1)))?;
                        list.push(e);
                    }
                    if list.is_empty() {
                        return Err(ConfigError::Invalid("the base file lists no sets".into()));
                    }
                    LusinInput::cycling(path.display().to_string(), list)
                }
            };
            let lusin = build_lusin(input);
            let report = lusin.conditions_check(&window);
            write!(out, "lusin ({}): ", lusin.input().name()).ok();
            let code = summarize(&report, out);
            if let Some(path) = &json {
                let dump = formats::scheme_dump(lusin.scheme(), &window).map_err(|e| ConfigError::Invalid(e.to_string()))?;
                emit(&json!({"base": lusin.input().name(), "scheme": dump, "checks": report_json(&report)}), Some(path), out)?;
            }
            Ok(code)
        }
        Command::Extract { space, strategy, depth, breadth, json } => {
            let window = guard(depth, breadth)?;
            match (SpaceSpec::parse(&space)?, strategy) {
                (SpaceSpec::Finite(s), StrategyName::Copy) => {
                    let samples = s.opens().len() as Nat;
                    extract_with(s, copy_strategy(), &window, samples, samples + 1, json.as_ref(), out)
                }
                (SpaceSpec::Finite(_), StrategyName::Cylinder) => {
                    Err(ConfigError::Invalid("the cylinder strategy needs --space baire".into()))
                }
                (SpaceSpec::Baire, StrategyName::Copy) => {
                    extract_with(BaireSpaceModel, copy_strategy(), &window, 4, 16, json.as_ref(), out)
                }
                (SpaceSpec::Baire, StrategyName::Cylinder) => {
                    extract_with(BaireSpaceModel, cylinder_strategy(), &window, 4, 16, json.as_ref(), out)
                }
            }
        }
        Command::Play { space, strategy } => {
            let result = match (SpaceSpec::parse(&space)?, strategy) {
                (SpaceSpec::Finite(s), StrategyName::Copy) => repl::play(&s, copy_strategy(), input, out).map(|_| ()),
                (SpaceSpec::Finite(_), StrategyName::Cylinder) => {
                    return Err(ConfigError::Invalid("the cylinder strategy needs --space baire".into()))
                }
                (SpaceSpec::Baire, StrategyName::Copy) => {
                    repl::play(&BaireSpaceModel, copy_strategy(), input, out).map(|_| ())
                }
                (SpaceSpec::Baire, StrategyName::Cylinder) => {
                    repl::play(&BaireSpaceModel, cylinder_strategy(), input, out).map(|_| ())
                }
            };
            result.map_err(|e| ConfigError::Invalid(e.to_string()))?;
            Ok(EXIT_PASS)
        }
        Command::Export { kind, value, depth, breadth, json } => {
            let window = guard(depth, breadth)?;
            let encoded = match kind {
                ExportKind::Expr => {
                    let e: CylExpr = value.parse().map_err(|e| ConfigError::Invalid(format!("{e}")))?;
                    formats::expr_to_json(&e)
                }
                ExportKind::Seq => {
                    let s: FinSeq = value.parse().map_err(|e| ConfigError::Invalid(format!("{e}")))?;
                    formats::seq_to_json(&s)
                }
                ExportKind::Space => match SpaceSpec::parse(&value)? {
                    SpaceSpec::Finite(s) => formats::space_to_json(&s),
                    SpaceSpec::Baire => return Err(ConfigError::Invalid("the Baire model has no finite encoding".into())),
                },
                ExportKind::PrefixMap => {
                    let presets = PrefixMap::presets();
                    let names: Vec<&str> = presets.iter().map(|(n, _)| *n).collect();
                    let (_, f) = presets.iter().find(|(n, _)| *n == value).ok_or_else(|| {
                        ConfigError::Invalid(format!("unknown preset \"{value}\" (expected one of {})", names.join(", ")))
                    })?;
                    formats::prefix_map_to_json(f)
                }
                ExportKind::Scheme => {
                    let dump = match value.as_str() {
                        "standard" => formats::scheme_dump(&standard_scheme(), &window),
                        "lusin" => formats::scheme_dump(build_lusin(LusinInput::standard()).scheme(), &window),
                        other => {
                            return Err(ConfigError::Invalid(format!("unknown scheme \"{other}\" (expected standard or lusin)")))
                        }
                    };
                    dump.map_err(|e| ConfigError::Invalid(e.to_string()))?
                }
            };
            emit(&encoded, json.as_ref(), out)?;
            Ok(EXIT_PASS)
        }
    }
}

fn extract_with<M, G>(
    space: M,
    gamma: G,
    window: &Window,
    samples: Nat,
    budget: Nat,
    json: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, ConfigError>
where
    M: SpaceModel + OpenJson + Notation + Clone + 'static,
    G: StrategyII<M> + 'static,
{
    let name = gamma.name();
    let ex = extract_schemes(space, gamma);
    let report = extraction_check(&ex, window, samples, budget);
    write!(out, "extraction ({name}'): ").ok();
    let code = summarize(&report, out);
    let ex = Rc::clone(&ex);
    let u = formats::scheme_dump(&ex.u_scheme(), window).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let v = formats::scheme_dump(&ex.v_scheme(), window).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let doc = json!({"strategy": format!("{name}'"), "u": u, "v": v, "checks": report_json(&report)});
    if let Some(path) = json {
        emit(&doc, Some(path), out)?;
    }
    Ok(code)
}
