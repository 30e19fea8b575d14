//! Command-line front end.
//!
//! Exit statuses: 0 success, 1 internal failure, 2 invalid input (clap
//! also uses 2 for argument errors).

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::containment::{steady_state, ContainmentError, LeaderLinks, LeaderStates};
use crate::exact::spanning_tree_count;
use crate::game::{
    game_values, nash_equilibria, outcome_matrix, se_set, solve_game, GameError, Strategy,
    DEFAULT_STRATEGY_CAP,
};
use crate::graph::{GeneratorSpec, Graph, GraphError};
use crate::output::{decimal_half_even, fraction_string, parse_rational};
use crate::reconstruct::{reconstruct_center_graphs, reference_target, FOUR_DECIMAL_TOLERANCE};
use crate::sim::{simulate, steady_state_error, trajectory_csv, SimConfig, SimError, Termination};
use crate::verify::run_suite;

#[derive(Debug, Parser)]
#[command(
    name = "leadergame",
    version,
    about = "Exact two-leader topology games on follower graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a generated graph in edge-list format.
    Gen(GraphOpt),
    /// Outcome matrix of the k-link game.
    Outcome(GameOpt),
    /// Values, security sets and all pure Nash equilibria.
    Nash(GameOpt),
    /// Upper/lower values and security sets only.
    Security(GameOpt),
    /// The k = 1 set of vertices whose 1-norm criterion holds against all others.
    SeSet(GraphOpt),
    /// Spanning-tree count.
    Tau(GraphOpt),
    /// Integrate the follower dynamics and print the trajectory as CSV.
    Simulate(SimulateOpt),
    /// Run the invariant suite against one graph.
    Verify(VerifyOpt),
    /// Brute-force the six-vertex center graph behind the built-in 4-decimal reference table.
    #[command(name = "reconstruct-example2")]
    ReconstructExample2(FormatOpt),
}

#[derive(Debug, Args)]
pub struct GraphOpt {
    /// Edge-list file, or a generator spec: path:n, cycle:n, star:n, complete:n, circulant:n:o1,o2
    #[arg(long)]
    pub graph: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FormatOpt {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Decimal places for approximate output.
    #[arg(long, default_value_t = 4)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct GameOpt {
    #[command(flatten)]
    pub graph: GraphOpt,
    /// Followers each leader links to.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Maximum number of strategies per leader.
    #[arg(long, default_value_t = DEFAULT_STRATEGY_CAP)]
    pub cap: usize,
    #[command(flatten)]
    pub format: FormatOpt,
}

#[derive(Debug, Args)]
pub struct SimOpt {
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    pub y0: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub y1: String,
    /// Step size; defaults to min(0.01, stability bound).
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = 100.0)]
    pub t_end: f64,
    /// Convergence threshold on the state change per unit time.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Record every n-th step.
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
}

impl SimOpt {
    fn config(&self) -> SimConfig {
        SimConfig {
            dt: self.dt,
            t_end: self.t_end,
            convergence_tol: self.tol,
            record_stride: self.stride,
        }
    }

    fn states(&self) -> Result<LeaderStates, CliError> {
        let y0 = parse_rational(&self.y0).map_err(CliError::Input)?;
        let y1 = parse_rational(&self.y1).map_err(CliError::Input)?;
        Ok(LeaderStates::new(y0, y1)?)
    }
}

#[derive(Debug, Args)]
pub struct SimulateOpt {
    #[command(flatten)]
    pub graph: GraphOpt,
    /// Followers linked to leader 0 (comma-separated, 1-based).
    #[arg(long)]
    pub links0: String,
    /// Followers linked to leader 1 (comma-separated, 1-based).
    #[arg(long)]
    pub links1: String,
    /// Initial follower states (comma-separated); defaults to zeros.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[command(flatten)]
    pub sim: SimOpt,
}

#[derive(Debug, Args)]
pub struct VerifyOpt {
    #[command(flatten)]
    pub graph: GraphOpt,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_STRATEGY_CAP)]
    pub cap: usize,
    #[command(flatten)]
    pub sim: SimOpt,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ContainmentError> for CliError {
    fn from(e: ContainmentError) -> Self {
        match e {
            ContainmentError::Matrix(m) => CliError::Internal(m.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::Matrix(m) => CliError::Internal(m.to_string()),
            GameError::Containment(c) => c.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Containment(c) => c.into(),
            SimError::NonFinite(_) => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

/// Loads a graph from a generator spec or, failing that, an edge-list file.
pub fn load_graph(source: &str) -> Result<Graph, CliError> {
    if let Ok(spec) = source.parse::<GeneratorSpec>() {
        return Ok(spec.build()?);
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read graph {source:?}: {e}")))?;
    Ok(Graph::parse_edge_list(&text)?)
}

fn require_connected(g: &Graph) -> Result<(), CliError> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(CliError::Input("graph not connected".into()))
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Input(format!("bad {what} entry {s:?}")))
        })
        .collect()
}

fn vertex_lists(strategies: &[Strategy], idx: &[usize]) -> Vec<Vec<usize>> {
    idx.iter()
        .map(|&i| strategies[i].vertices.clone())
        .collect()
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct OutcomeJson {
    n: usize,
    k: usize,
    strategies: Vec<Vec<usize>>,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct SecurityJson {
    upper_value: String,
    lower_value: String,
    row_security: Vec<Vec<usize>>,
    column_security: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct NashJson {
    upper_value: String,
    lower_value: String,
    security_set: Vec<Vec<usize>>,
    nash_pairs: Vec<[Vec<usize>; 2]>,
    nash_value: Option<String>,
    canonical_pair: Option<[Vec<usize>; 2]>,
    shortcut_used: bool,
}

#[derive(Serialize)]
struct TauJson {
    n: usize,
    edges: usize,
    tau: String,
}

#[derive(Serialize)]
struct SeSetJson {
    se_set: Vec<usize>,
}

#[derive(Serialize)]
struct ReconstructedGraph {
    edges: Vec<(usize, usize)>,
    upper_value: String,
    lower_value: String,
    nash_pairs: Vec<[Vec<usize>; 2]>,
}

#[derive(Serialize)]
struct ReconstructJson {
    candidates_checked: usize,
    tolerance: f64,
    matches: Vec<ReconstructedGraph>,
}

fn pair_lists(strategies: &[Strategy], pairs: &[(usize, usize)]) -> Vec<[Vec<usize>; 2]> {
    pairs
        .iter()
        .map(|&(i, j)| {
            [
                strategies[i].vertices.clone(),
                strategies[j].vertices.clone(),
            ]
        })
        .collect()
}

fn cmd_outcome(opt: &GameOpt, out: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&opt.graph.graph)?;
    require_connected(&g)?;
    let u = outcome_matrix(&g, opt.k, opt.cap)?;
    match opt.format.format {
        Format::Json => write_json(
            out,
            &OutcomeJson {
                n: u.n,
                k: u.k,
                strategies: u.strategies.iter().map(|s| s.vertices.clone()).collect(),
                matrix: u
                    .rows()
                    .iter()
                    .map(|r| r.iter().map(fraction_string).collect())
                    .collect(),
            },
        ),
        Format::Csv => {
            for row in u.rows() {
                let cells: Vec<String> = row
                    .iter()
                    .map(|x| decimal_half_even(x, opt.format.precision))
                    .collect();
                writeln!(out, "{}", cells.join(","))?;
            }
            Ok(())
        }
    }
}

fn cmd_nash(opt: &GameOpt, out: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&opt.graph.graph)?;
    require_connected(&g)?;
    let solved = solve_game(&g, opt.k, opt.cap)?;
    let r = &solved.report;
    let s = &solved.strategies;
    let canonical = r
        .canonical_pair()
        .map(|(i, j)| [s[i].vertices.clone(), s[j].vertices.clone()]);
    write_json(
        out,
        &NashJson {
            upper_value: fraction_string(&r.upper_value),
            lower_value: fraction_string(&r.lower_value),
            security_set: vertex_lists(s, r.security_set()),
            nash_pairs: pair_lists(s, &r.nash_pairs),
            nash_value: r.nash_value.as_ref().map(fraction_string),
            canonical_pair: canonical,
            shortcut_used: solved.shortcut_used,
        },
    )
}

fn cmd_security(opt: &GameOpt, out: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&opt.graph.graph)?;
    require_connected(&g)?;
    let u = outcome_matrix(&g, opt.k, opt.cap)?;
    let r = game_values(&u);
    write_json(
        out,
        &SecurityJson {
            upper_value: fraction_string(&r.upper_value),
            lower_value: fraction_string(&r.lower_value),
            row_security: vertex_lists(&u.strategies, &r.row_security),
            column_security: vertex_lists(&u.strategies, &r.column_security),
        },
    )
}

fn cmd_simulate(
    opt: &SimulateOpt,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let g = load_graph(&opt.graph.graph)?;
    require_connected(&g)?;
    let ys = opt.sim.states()?;
    let links = LeaderLinks::from_vertices(
        g.n(),
        &parse_list::<usize>(&opt.links0, "links0")?,
        &parse_list::<usize>(&opt.links1, "links1")?,
    )?;
    let x0 = match &opt.x0 {
        Some(text) => parse_list::<f64>(text, "x0")?,
        None => vec![0.0; g.n()],
    };
    let traj = simulate(&g, &links, &x0, &ys, &opt.sim.config())?;
    out.write_all(trajectory_csv(&traj, &ys).as_bytes())?;
    let exact = steady_state(&g, &links, &ys)?;
    let residual = steady_state_error(&g, &links, &ys, &traj)?;
    let state: Vec<String> = traj
        .final_state()
        .iter()
        .map(|x| format!("{x:.9}"))
        .collect();
    writeln!(
        err,
        "t={:.6} termination={} terminal=[{}] exact=[{}] max_residual={:e}",
        traj.final_time(),
        match traj.termination {
            Termination::Converged => "converged",
            Termination::Horizon => "horizon",
        },
        state.join(","),
        exact
            .iter()
            .map(fraction_string)
            .collect::<Vec<_>>()
            .join(","),
        residual
    )?;
    Ok(())
}

fn cmd_verify(opt: &VerifyOpt, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load_graph(&opt.graph.graph)?;
    let report = run_suite(&g, opt.k, opt.seed, opt.cap, &opt.sim.config())?;
    write_json(out, &report)?;
    Ok(if report.all_passed {
        0
    } else if report.input_gate_failed() {
        2
    } else {
        1
    })
}

fn cmd_reconstruct(opt: &FormatOpt, out: &mut dyn Write) -> Result<(), CliError> {
    let rec = reconstruct_center_graphs(&reference_target(), FOUR_DECIMAL_TOLERANCE)?;
    let matches = rec
        .matches
        .iter()
        .map(|g| {
            let u = outcome_matrix(g, 1, DEFAULT_STRATEGY_CAP)?;
            let r = nash_equilibria(&u);
            Ok(ReconstructedGraph {
                edges: g.edges(),
                upper_value: fraction_string(&r.upper_value),
                lower_value: fraction_string(&r.lower_value),
                nash_pairs: pair_lists(&u.strategies, &r.nash_pairs),
            })
        })
        .collect::<Result<Vec<_>, GameError>>()?;
    match opt.format {
        Format::Json => write_json(
            out,
            &ReconstructJson {
                candidates_checked: rec.candidates_checked,
                tolerance: FOUR_DECIMAL_TOLERANCE,
                matches,
            },
        ),
        Format::Csv => {
            for g in &rec.matches {
                let edges: Vec<String> =
                    g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
                writeln!(out, "{}", edges.join(","))?;
            }
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Gen(opt) => {
            let g = load_graph(&opt.graph)?;
            out.write_all(g.to_edge_list().as_bytes())?;
        }
        Command::Outcome(opt) => cmd_outcome(opt, out)?,
        Command::Nash(opt) => cmd_nash(opt, out)?,
        Command::Security(opt) => cmd_security(opt, out)?,
        Command::SeSet(opt) => {
            let g = load_graph(&opt.graph)?;
            require_connected(&g)?;
            write_json(
                out,
                &SeSetJson {
                    se_set: se_set(&g)?,
                },
            )?;
        }
        Command::Tau(opt) => {
            let g = load_graph(&opt.graph)?;
            write_json(
                out,
                &TauJson {
                    n: g.n(),
                    edges: g.edge_count(),
                    tau: spanning_tree_count(&g).to_string(),
                },
            )?;
        }
        Command::Simulate(opt) => cmd_simulate(opt, out, err)?,
        Command::Verify(opt) => return cmd_verify(opt, out),
        Command::ReconstructExample2(opt) => cmd_reconstruct(opt, out)?,
    }
    Ok(0)
}

/// Runs a parsed command, returning the process exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
