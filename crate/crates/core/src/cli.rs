//! Command-line front end. `run` returns the exit code and both output streams so the
//! binary stays a thin wrapper and tests can drive commands directly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::geodesic::{initial_letters, verify_lemma, GeodesicError, Lemma};
use crate::graph::{ArtinGraph, GraphError};
use crate::kernel::{eliminate, poly_free_tower, KernelError, Retraction};
use crate::linear::LinearRep;
use crate::oracle::{relator_equal_capped, Ball, BallMethod, OracleError, Verdict, DEFAULT_BALL_CAP, DEFAULT_SEARCH_CAP};
use crate::rewriting::{render_traces, replay_rendered, RewriteError, ShortlexEngine};
use crate::words::{LexOrder, WordError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Relator-move budget for equality checks on graphs the engine does not cover.
const DEFAULT_ORACLE_BUDGET: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "artin", version, about = "Normal forms, geodesics and kernel bases for even Artin groups")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Letter order, smallest first, e.g. "a a^-1 b b^-1"
    #[arg(long, global = true)]
    order: Option<String>,
    /// Search budget: engine node cap, or relator-move budget for oracle checks
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the shortlex normal form of each word
    Normalize {
        graph: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Decide whether two words represent the same element
    Equal { graph: PathBuf, u: String, v: String },
    /// Geodesic length and initial letters of an element
    Geodesic { graph: PathBuf, word: String },
    /// Print the reduction trace of a normalization, or replay a saved one
    Trace {
        graph: PathBuf,
        #[arg(required_unless_present = "replay")]
        word: Option<String>,
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Prefix-set memberships, strips and descent of an element after removing a vertex
    Omega {
        graph: PathBuf,
        word: String,
        #[arg(long)]
        remove: String,
    },
    /// Bounded-radius free basis of the kernel of removing a vertex
    KernelBasis {
        graph: PathBuf,
        #[arg(long)]
        remove: String,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Vertex removal schedule with a kernel basis at each step
    Tower {
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Exhaustively check a geodesic or kernel property over a ball
    Verify {
        lemma: String,
        graph: PathBuf,
        #[arg(long, default_value_t = 5)]
        radius: usize,
    },
    /// Enumerate a ball of the Cayley graph by element
    Ball {
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("undecided within budget {0}")]
    Undecided(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Rewrite(RewriteError::Budget(_))
            | CliError::Oracle(OracleError::BallTooLarge(_))
            | CliError::Kernel(KernelError::Rewrite(RewriteError::Budget(_)))
            | CliError::Kernel(KernelError::Oracle(OracleError::BallTooLarge(_)))
            | CliError::Undecided(_) => EXIT_BUDGET,
            CliError::Kernel(KernelError::SoundnessAlarm(_)) => EXIT_FALSE,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Usage(format!("--threads: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok((code, report)) => match &cli.output {
            Some(path) => match std::fs::write(path, &report) {
                Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                Err(source) => fail(CliError::Io { path: path.display().to_string(), source }),
            },
            None => Outcome { code, stdout: report, stderr: String::new() },
        },
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> Outcome {
    Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_graph(path: &Path) -> Result<ArtinGraph, CliError> {
    let graph = ArtinGraph::parse(&read(path)?)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph").to_string();
    Ok(graph.with_name(stem))
}

fn vertex(graph: &ArtinGraph, name: &str) -> Result<u16, CliError> {
    graph
        .vertex(name)
        .ok_or_else(|| CliError::Usage(format!("no vertex `{name}` in {}", graph.name())))
}

impl Cli {
    fn order(&self, graph: &ArtinGraph) -> Result<Option<LexOrder>, CliError> {
        Ok(match &self.order {
            Some(text) => Some(graph.parse_order(text)?),
            None => None,
        })
    }

    fn engine(&self, graph: &ArtinGraph) -> Result<ShortlexEngine, CliError> {
        let order = self.order(graph)?.unwrap_or_else(|| graph.default_order());
        let engine = ShortlexEngine::new(graph.clone(), order)?;
        Ok(match self.budget {
            Some(cap) => engine.with_node_cap(cap),
            None => engine,
        })
    }
}

fn execute(cli: &Cli) -> Result<(i32, String), CliError> {
    let mut out = String::new();
    let code = match &cli.command {
        Command::Normalize { graph, words } => {
            let graph = load_graph(graph)?;
            let engine = cli.engine(&graph)?;
            for w in words {
                let nf = engine.normalize(&graph.parse_word(w)?)?;
                let _ = writeln!(out, "{}", graph.display_word(&nf));
            }
            EXIT_OK
        }
        Command::Equal { graph, u, v } => {
            let graph = load_graph(graph)?;
            let (u, v) = (graph.parse_word(u)?, graph.parse_word(v)?);
            let equal = if graph.is_large() {
                cli.engine(&graph)?.words_equal(&u, &v)?
            } else if LinearRep::new(&graph).image(&u) != LinearRep::new(&graph).image(&v) {
                false
            } else {
                let budget = cli.budget.unwrap_or(DEFAULT_ORACLE_BUDGET);
                match relator_equal_capped(&u, &v, &graph, budget, DEFAULT_SEARCH_CAP)? {
                    Verdict::Equal(_) => true,
                    Verdict::Distinct(_) => false,
                    Verdict::Inconclusive => return Err(CliError::Undecided(budget)),
                }
            };
            let _ = writeln!(out, "{}", if equal { "equal" } else { "not equal" });
            if equal {
                EXIT_OK
            } else {
                EXIT_FALSE
            }
        }
        Command::Geodesic { graph, word } => {
            let graph = load_graph(graph)?;
            let engine = cli.engine(&graph)?;
            let w = graph.parse_word(word)?;
            let report = initial_letters(&engine, &w)?;
            let initials: Vec<String> = report.initials.iter().map(|l| graph.render_word(&[*l])).collect();
            let _ = writeln!(out, "normal form: {}", graph.display_word(&report.element));
            let _ = writeln!(out, "length: {}", report.element.len());
            let _ = writeln!(out, "input geodesic: {}", report.element.len() == w.len());
            let _ = writeln!(out, "initial letters: {}", initials.join(" "));
            EXIT_OK
        }
        Command::Trace { graph, word, replay } => {
            let graph = load_graph(graph)?;
            match replay {
                Some(path) => {
                    let result = replay_rendered(&graph, &read(path)?)?;
                    let _ = writeln!(out, "{}", graph.display_word(&result));
                }
                None => {
                    let engine = cli.engine(&graph)?;
                    let w = graph.parse_word(word.as_deref().unwrap_or_default())?;
                    let (nf, traces) = engine.normalize_traced(&w)?;
                    out.push_str(&render_traces(&graph, &w, &traces, &nf));
                }
            }
            EXIT_OK
        }
        Command::Omega { graph, word, remove } => {
            let graph = load_graph(graph)?;
            let r = vertex(&graph, remove)?;
            let ret = Retraction::new(&graph, r, cli.order(&graph)?)?;
            let g = ret.normalize(&graph.parse_word(word)?)?;
            let _ = writeln!(out, "element: {}", graph.display_word(&g));
            let members = ret.omega_membership(&g)?;
            for &(v, s) in &members {
                let rho = ret.rho(&g, v, s)?;
                let _ = writeln!(out, "in {}{}: strip gives {}", graph.vertex_name(v), s, graph.display_word(&rho));
            }
            if members.is_empty() {
                let _ = writeln!(out, "in no prefix set");
            }
            let (delta, alpha) = ret.delta(&g)?;
            let shown: Vec<String> = delta.iter().map(|w| graph.display_word(w)).collect();
            let _ = writeln!(out, "descent after {alpha} steps: {{{}}}", shown.join(", "));
            EXIT_OK
        }
        Command::KernelBasis { graph, remove, radius } => {
            let graph = load_graph(graph)?;
            let r = vertex(&graph, remove)?;
            let state = eliminate(&graph, r, *radius, cli.order(&graph)?)?;
            out.push_str(&state.render(&graph));
            EXIT_OK
        }
        Command::Tower { graph, radius } => {
            let graph = load_graph(graph)?;
            if let Some(order) = cli.order(&graph)? {
                if !order.is_polyfree_compatible() {
                    return Err(CliError::Usage(
                        "tower needs an order with every generator before its inverse".into(),
                    ));
                }
            }
            let steps = poly_free_tower(&graph, *radius)?;
            for (i, step) in steps.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "step {}: remove {} from {{{}}}",
                    i + 1,
                    graph.vertex_name(step.removed),
                    step.graph.vertex_names().join(", ")
                );
                let _ = writeln!(
                    out,
                    "  retained {} eliminated {} escaped {}",
                    step.state.retained.len(),
                    step.state.eliminated.len(),
                    step.state.escaped.len()
                );
            }
            EXIT_OK
        }
        Command::Verify { lemma, graph, radius } => {
            let lemma = Lemma::parse(lemma)?;
            let graph = load_graph(graph)?;
            let order = cli.order(&graph)?;
            let report = verify_lemma(lemma, &graph, *radius, order.as_ref())?;
            out.push_str(&report.render());
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_FALSE
            }
        }
        Command::Ball { graph, radius } => {
            let graph = load_graph(graph)?;
            let ball = match cli.budget {
                Some(budget) => Ball::enumerate_with(&graph, *radius, BallMethod::RelatorMoves { budget }, DEFAULT_BALL_CAP)?,
                None => Ball::enumerate(&graph, *radius)?,
            };
            out.push_str(&ball.dump(&graph));
            if ball.unresolved().is_empty() {
                EXIT_OK
            } else {
                EXIT_BUDGET
            }
        }
    };
    Ok((code, out))
}
