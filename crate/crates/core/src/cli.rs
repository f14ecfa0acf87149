//! The `ra-kit` command line.
//!
//! Exit codes: 0 positive verdict, 1 negative verdict, 2 usage or parse
//! error, 3 resource budget exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::algebra::RelationAlgebra;
use crate::amalgamation::{self, ApVerdict, DecideOptions, GrowOptions};
use crate::bounds::{self, Family};
use crate::error::Error;
use crate::network::{self, Network};
use crate::representation::{self, ConcreteRepresentation};

pub const BUDGET_ENV: &str = "RA_KIT_BUDGET";

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ra-kit", version, about = "Finite relation algebras: tables, networks, representations, amalgamation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit one JSON document instead of human-readable text.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Include wall-clock timings in machine output.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the relation algebra laws of a composition table.
    Validate { algebra: PathBuf },
    /// Compose two elements given as comma-separated atom lists.
    Compose { algebra: PathBuf, x: String, y: String },
    /// Run path consistency on a network.
    Pc { algebra: PathBuf, network: PathBuf },
    /// Find an atomic refinement of a network.
    Solve { algebra: PathBuf, network: PathBuf },
    /// Check whether a network is atomic.
    Atomic { algebra: PathBuf, network: PathBuf },
    /// Decide the amalgamation property of the atomic networks.
    Amalgamation {
        algebra: PathBuf,
        /// Write the failing diagram as base.net, left.net, right.net.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value = ".")]
        witness_dir: PathBuf,
        /// Largest base size to check (default: number of atoms).
        #[arg(long)]
        max_base: Option<usize>,
        /// Maximum number of diagrams to examine (overrides RA_KIT_BUDGET).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the forbidden substructures describing the atomic networks.
    Bounds { algebra: PathBuf },
    /// Solve a network inside a finite representation.
    Modelcheck { representation: PathBuf, network: PathBuf },
    /// Read the composition table off a finite representation.
    Derive { representation: PathBuf },
    /// Grow a random atomic network one node at a time.
    Grow {
        algebra: PathBuf,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allow identity atoms between distinct nodes.
        #[arg(long)]
        allow_collapse: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Compose { .. } => "compose",
            Command::Pc { .. } => "pc",
            Command::Solve { .. } => "solve",
            Command::Atomic { .. } => "atomic",
            Command::Amalgamation { .. } => "amalgamation",
            Command::Bounds { .. } => "bounds",
            Command::Modelcheck { .. } => "modelcheck",
            Command::Derive { .. } => "derive",
            Command::Grow { .. } => "grow",
        }
    }
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Human text plus the machine-mode fields of a finished command.
struct Report {
    code: i32,
    verdict: &'static str,
    text: String,
    fields: Map<String, Value>,
}

impl Report {
    fn new(code: i32, verdict: &'static str) -> Self {
        Report { code, verdict, text: String::new(), fields: Map::new() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn field(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }
}

struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse(_) => (EXIT_USAGE, "parse"),
            Error::TooLarge(_) => (EXIT_BUDGET, "budget"),
            Error::ExtensionFailed { .. } => (EXIT_NEGATIVE, "extension-failed"),
            _ => (EXIT_USAGE, "input"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_USAGE,
        kind: "io",
        message: format!("{}: {e}", path.display()),
    })
}

fn with_path<T>(path: &Path, r: Result<T, crate::error::ParseError>) -> Result<T, Failure> {
    r.map_err(|e| Failure { code: EXIT_USAGE, kind: "parse", message: format!("{}: {e}", path.display()) })
}

fn load_algebra(path: &Path) -> Result<RelationAlgebra, Failure> {
    with_path(path, RelationAlgebra::parse(&read(path)?))
}

fn load_network(ra: &RelationAlgebra, path: &Path) -> Result<Network, Failure> {
    with_path(path, Network::parse(ra, &read(path)?))
}

fn load_representation(path: &Path) -> Result<ConcreteRepresentation, Failure> {
    with_path(path, ConcreteRepresentation::parse(&read(path)?))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_POSITIVE };
            let rendered = e.render().to_string();
            if code == EXIT_POSITIVE {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let result = execute(&cli.command);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let command = cli.command.name();
    match result {
        Ok(report) => {
            if cli.machine {
                let mut doc = Map::new();
                doc.insert("command".into(), command.into());
                doc.insert("verdict".into(), report.verdict.into());
                doc.insert("exit_code".into(), report.code.into());
                for (k, v) in report.fields {
                    doc.insert(k, v);
                }
                if cli.timings {
                    doc.insert("timings".into(), json!({ "total_ms": elapsed_ms }));
                }
                let stdout = serde_json::to_string_pretty(&Value::Object(doc)).unwrap() + "\n";
                Outcome { code: report.code, stdout, stderr: String::new() }
            } else {
                Outcome { code: report.code, stdout: report.text, stderr: String::new() }
            }
        }
        Err(f) => {
            let line = format!("error: {}: {}", f.kind, f.message.replace('\n', " "));
            if cli.machine {
                let doc = json!({
                    "command": command,
                    "verdict": "error",
                    "exit_code": f.code,
                    "reason": { "kind": f.kind, "message": f.message },
                });
                let stdout = serde_json::to_string_pretty(&doc).unwrap() + "\n";
                Outcome { code: f.code, stdout, stderr: line + "\n" }
            } else {
                Outcome { code: f.code, stdout: String::new(), stderr: line + "\n" }
            }
        }
    }
}

fn budget_from_env() -> Result<Option<u64>, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| Failure {
            code: EXIT_USAGE,
            kind: "usage",
            message: format!("{BUDGET_ENV} must be a non-negative integer, got `{v}`"),
        }),
        Err(_) => Ok(None),
    }
}

fn execute(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Validate { algebra } => {
            let ra = load_algebra(algebra)?;
            let report = ra.validate();
            let mut r = if report.is_clean() {
                Report::new(EXIT_POSITIVE, "valid")
            } else {
                Report::new(EXIT_NEGATIVE, "invalid")
            };
            let mut violations = Vec::new();
            for v in &report.violations {
                let atoms: Vec<&str> = v.witness.iter().map(|&a| ra.atom_name(a)).collect();
                r.line(format!("violation {} {}", v.law, atoms.join(" ")));
                violations.push(json!({ "law": v.law.as_str(), "witness": atoms }));
            }
            let mut warnings = Vec::new();
            for w in &report.warnings {
                r.line(format!("warning {}", w.render(&ra)));
                warnings.push(Value::from(w.render(&ra)));
            }
            r.line(format!("{}: {}", ra.name(), r.verdict));
            r.field("algebra", ra.name());
            r.field("violations", violations);
            r.field("warnings", warnings);
            Ok(r)
        }
        Command::Compose { algebra, x, y } => {
            let ra = load_algebra(algebra)?;
            let x = ra.parse_element(x)?;
            let y = ra.parse_element(y)?;
            let z = ra.format_element(ra.compose(x, y));
            let mut r = Report::new(EXIT_POSITIVE, "ok");
            r.line(&z);
            r.field("result", z);
            Ok(r)
        }
        Command::Pc { algebra, network } => {
            let ra = load_algebra(algebra)?;
            let net = load_network(&ra, network)?;
            let refined = network::normalize(&ra, &net).and_then(|n| network::path_consistency(&ra, &n));
            Ok(network_report(&ra, refined, "consistent", "inconsistent"))
        }
        Command::Solve { algebra, network } => {
            let ra = load_algebra(algebra)?;
            let net = load_network(&ra, network)?;
            Ok(network_report(&ra, network::refine_solve(&ra, &net), "satisfiable", "unsatisfiable"))
        }
        Command::Atomic { algebra, network } => {
            let ra = load_algebra(algebra)?;
            let net = load_network(&ra, network)?;
            let mut r = if network::is_atomic(&ra, &net) {
                Report::new(EXIT_POSITIVE, "atomic")
            } else {
                Report::new(EXIT_NEGATIVE, "not-atomic")
            };
            r.line(r.verdict);
            Ok(r)
        }
        Command::Amalgamation { algebra, witness, witness_dir, max_base, budget, threads } => {
            let ra = load_algebra(algebra)?;
            let budget = match budget {
                Some(b) => *b,
                None => budget_from_env()?.unwrap_or(amalgamation::DEFAULT_BUDGET),
            };
            let opts = DecideOptions { max_base: *max_base, budget, threads: *threads };
            amalgamation_report(&ra, &opts, witness.then_some(witness_dir.as_path()))
        }
        Command::Bounds { algebra } => {
            let ra = load_algebra(algebra)?;
            let bs = bounds::generate_bounds(&ra)?;
            let mut r = Report::new(EXIT_POSITIVE, "ok");
            let counts = [Family::F1, Family::F2, Family::F3].map(|f| bs.count(f));
            r.line(format!("# bounds for {}: F1={} F2={} F3={}", ra.name(), counts[0], counts[1], counts[2]));
            r.text.push_str(&bs.to_text(&ra));
            r.field("counts", json!({ "F1": counts[0], "F2": counts[1], "F3": counts[2] }));
            r.field("bounds", bs.to_text(&ra));
            Ok(r)
        }
        Command::Modelcheck { representation, network } => {
            let cr = load_representation(representation)?;
            let ra = representation::derive_algebra(&cr)?;
            let net = load_network(&ra, network)?;
            let found = representation::model_check(&cr, &net)?;
            let mut r = match &found {
                Some(_) => Report::new(EXIT_POSITIVE, "satisfiable"),
                None => Report::new(EXIT_NEGATIVE, "unsatisfiable"),
            };
            r.line(r.verdict);
            if let Some(s) = found {
                let mut assignment = Map::new();
                for (node, value) in net.nodes().iter().zip(&s) {
                    r.line(format!("{node} -> {value}"));
                    assignment.insert(node.clone(), (*value).into());
                }
                r.field("assignment", assignment);
            }
            Ok(r)
        }
        Command::Derive { representation } => {
            let cr = load_representation(representation)?;
            let violations = cr.validate();
            if violations.is_empty() {
                let ra = representation::derive_algebra(&cr)?;
                let mut r = Report::new(EXIT_POSITIVE, "valid");
                r.text = ra.to_text();
                r.field("algebra", ra.to_text());
                Ok(r)
            } else {
                let mut r = Report::new(EXIT_NEGATIVE, "invalid");
                let rendered: Vec<String> = violations.iter().map(|v| v.render(&cr)).collect();
                for v in &rendered {
                    r.line(format!("violation {v}"));
                }
                r.field("violations", rendered);
                Ok(r)
            }
        }
        Command::Grow { algebra, size, seed, allow_collapse } => {
            let ra = load_algebra(algebra)?;
            let opts = GrowOptions { allow_collapse: *allow_collapse, ..GrowOptions::default() };
            let net = amalgamation::grow_limit(&ra, *size, *seed, &opts)?;
            let mut r = Report::new(EXIT_POSITIVE, "ok");
            r.text = net.to_text(&ra);
            r.field("network", net.to_text(&ra));
            Ok(r)
        }
    }
}

fn network_report(ra: &RelationAlgebra, result: Option<Network>, yes: &'static str, no: &'static str) -> Report {
    match result {
        Some(net) => {
            let mut r = Report::new(EXIT_POSITIVE, yes);
            r.line(yes);
            r.text.push_str(&net.to_text(ra));
            r.field("network", net.to_text(ra));
            r
        }
        None => {
            let mut r = Report::new(EXIT_NEGATIVE, no);
            r.line(no);
            r
        }
    }
}

fn amalgamation_report(ra: &RelationAlgebra, opts: &DecideOptions, witness_dir: Option<&Path>) -> Result<Report, Failure> {
    match amalgamation::decide_amalgamation_property(ra, opts) {
        ApVerdict::Yes { max_base, diagrams } => {
            let mut r = Report::new(EXIT_POSITIVE, "yes");
            r.line(format!("YES: all {diagrams} 2-point diagrams with base size <= {max_base} amalgamate"));
            r.field("max_base", max_base);
            r.field("diagrams", diagrams);
            Ok(r)
        }
        ApVerdict::Indeterminate { max_base, diagrams } => {
            let mut r = Report::new(EXIT_BUDGET, "indeterminate");
            r.line(format!("INDETERMINATE: budget of {} diagrams exhausted (base size <= {max_base})", opts.budget));
            r.field("max_base", max_base);
            r.field("diagrams", diagrams);
            Ok(r)
        }
        ApVerdict::No { witness, diagrams } => {
            let mut r = Report::new(EXIT_NEGATIVE, "no");
            let m = witness.base().len();
            let p = &witness.left().nodes()[m];
            let q = &witness.right().nodes()[m];
            let mut explanation = format!("NO: edge ({p},{q}) admits no atom;");
            let mut blocked = Map::new();
            for (atom, triple) in amalgamation::blocking_triples(ra, &witness) {
                let t = triple.expect("failing diagram blocks every atom");
                let _ = write!(explanation, " {}: ({},{},{})", ra.atom_name(atom), t[0], t[1], t[2]);
                blocked.insert(ra.atom_name(atom).to_string(), json!(t));
            }
            r.line(explanation);
            let parts = [("base", witness.base()), ("left", witness.left()), ("right", witness.right())];
            let mut files = Map::new();
            if let Some(dir) = witness_dir {
                std::fs::create_dir_all(dir).map_err(|e| Failure {
                    code: EXIT_USAGE,
                    kind: "io",
                    message: format!("{}: {e}", dir.display()),
                })?;
                for (label, net) in parts {
                    let path = dir.join(format!("{label}.net"));
                    std::fs::write(&path, net.to_text(ra)).map_err(|e| Failure {
                        code: EXIT_USAGE,
                        kind: "io",
                        message: format!("{}: {e}", path.display()),
                    })?;
                    r.line(format!("witness {label}: {}", path.display()));
                    files.insert(label.to_string(), path.display().to_string().into());
                }
            } else {
                for (_, net) in parts {
                    r.text.push_str(&net.to_text(ra));
                }
            }
            r.field("diagrams", diagrams);
            r.field("blocked_edge", json!([p, q]));
            r.field("blocked", blocked);
            r.field(
                "witness",
                json!({
                    "base": witness.base().to_text(ra),
                    "left": witness.left().to_text(ra),
                    "right": witness.right().to_text(ra),
                }),
            );
            if witness_dir.is_some() {
                r.field("witness_files", files);
            }
            Ok(r)
        }
    }
}
