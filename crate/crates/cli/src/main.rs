//! `bosegraph`: vertex entanglement of boson condensates on graphs.

mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use bosegraph::entanglement::{entropy_curve, graph_entanglement_report, ratio_curve};
use bosegraph::fock::{
    basis_cap_from_env, build_hamiltonian, condensate_state, entropy_timeseries,
    enumerate_basis_with_cap, FockState,
};
use bosegraph::search::{search, SearchConfig, SearchMode};
use bosegraph::{compare_with_oracle, eigendecompose, Graph, GraphKind, SingleParticleState};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::{fmt_sig, json_document, Table};

/// Deviation above which `oracle` fails.
const ORACLE_FAIL_TOL: f64 = 1e-8;

const EXIT_ORACLE_MISMATCH: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "bosegraph",
    version,
    about = "Vertex mode entanglement of boson condensates on tunnelling graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ground,
    Any,
}

#[derive(clap::Args, Debug)]
struct GraphArgs {
    /// star:L | ring:L | path:L | complete:L | file:PATH
    #[arg(long)]
    graph: GraphSpec,
    /// Vertex count for file: graphs (default: largest id + 1)
    #[arg(long)]
    vertices: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Vertex entropies of condensates over every adjacency eigenvector
    Entropy {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
        particles: u64,
        /// Only report this vertex
        #[arg(long)]
        vertex: Option<usize>,
        /// Use the projector diagonal inside degenerate levels
        #[arg(long)]
        eigenspace_max: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Normalized entropy versus p for several particle numbers
    Curve {
        /// Comma-separated particle numbers
        #[arg(long, short = 'n', value_delimiter = ',', default_value = "1,2,10,100")]
        particles: Vec<usize>,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Maximal entropy over log2(N+1) at log-spaced N
    Ratio {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
        #[arg(long, default_value_t = 60)]
        samples: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Exhaustive search over connected graphs on L vertices
    Search {
        #[arg(long, short = 'l')]
        vertices: usize,
        #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
        particles: u64,
        #[arg(long, value_enum, default_value = "ground")]
        mode: Mode,
        #[arg(long)]
        eigenspace_max: bool,
        /// Worker threads
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Compare the binomial closed form with explicit Fock-space marginals
    Oracle {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
        particles: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Vertex entropy time series under the many-body Hamiltonian
    Dynamics {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
        particles: u64,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        /// site:J | condensate:K | occupation:n1,..,nL | file:PATH
        #[arg(long, default_value = "site:0")]
        initial: InitialSpec,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t_min: f64,
        #[arg(long, default_value_t = PI, allow_negative_numbers = true)]
        t_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        hubbard_u: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

#[derive(Clone, Debug)]
enum GraphSpec {
    Named(GraphKind, usize),
    File(PathBuf),
}

impl FromStr for GraphSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("graph spec `{s}` is not of the form kind:L or file:PATH"))?;
        if kind == "file" {
            return Ok(GraphSpec::File(PathBuf::from(rest)));
        }
        let kind: GraphKind = kind.parse().map_err(|e: bosegraph::Error| e.to_string())?;
        let l = rest
            .parse()
            .map_err(|_| format!("vertex count `{rest}` is not a non-negative integer"))?;
        Ok(GraphSpec::Named(kind, l))
    }
}

impl GraphArgs {
    fn build(&self) -> anyhow::Result<Graph> {
        match &self.graph {
            GraphSpec::Named(kind, l) => Ok(Graph::generate(*kind, *l)?),
            GraphSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading graph file {}", path.display()))?;
                let l = match self.vertices {
                    Some(l) => l,
                    None => infer_vertex_count(&text),
                };
                Graph::from_edge_list(&text, l)
                    .with_context(|| format!("parsing graph file {}", path.display()))
            }
        }
    }
}

fn infer_vertex_count(text: &str) -> usize {
    text.lines()
        .flat_map(|line| line.split('#').next().unwrap_or("").split_whitespace())
        .filter_map(|f| f.parse::<usize>().ok())
        .max()
        .map_or(1, |m| m + 1)
}

#[derive(Clone, Debug)]
enum InitialSpec {
    Site(usize),
    Condensate(usize),
    Occupation(Vec<u32>),
    File(PathBuf),
}

impl FromStr for InitialSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("initial state `{s}` is not of the form kind:value"))?;
        let index = || {
            rest.parse::<usize>()
                .map_err(|_| format!("`{rest}` is not an index"))
        };
        match kind {
            "site" => Ok(InitialSpec::Site(index()?)),
            "condensate" => Ok(InitialSpec::Condensate(index()?)),
            "occupation" => rest
                .split(',')
                .map(|n| n.trim().parse::<u32>().map_err(|_| format!("`{n}` is not an occupation")))
                .collect::<Result<Vec<_>, _>>()
                .map(InitialSpec::Occupation),
            "file" => Ok(InitialSpec::File(PathBuf::from(rest))),
            other => Err(format!(
                "unknown initial state kind `{other}` (expected site, condensate, occupation or file)"
            )),
        }
    }
}

#[derive(Serialize)]
struct GraphInfo {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl From<&Graph> for GraphInfo {
    fn from(g: &Graph) -> Self {
        GraphInfo {
            vertex_count: g.vertex_count(),
            edges: g.edges(),
        }
    }
}

#[derive(Serialize)]
struct Titled<'a, T: Serialize> {
    graph: GraphInfo,
    #[serde(flatten)]
    body: &'a T,
}

struct Emitted {
    text: String,
    status: u8,
}

impl Emitted {
    fn ok(text: String) -> Self {
        Emitted { text, status: 0 }
    }
}

fn check_vertex(vertex: usize, g: &Graph) -> anyhow::Result<()> {
    if vertex >= g.vertex_count() {
        bail!(bosegraph::Error::NoSuchVertex {
            vertex,
            vertex_count: g.vertex_count()
        });
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Emitted> {
    match cli.command {
        Command::Entropy {
            graph,
            particles,
            vertex,
            eigenspace_max,
            format,
        } => {
            let g = graph.build()?;
            if let Some(v) = vertex {
                check_vertex(v, &g)?;
            }
            let mut report = graph_entanglement_report(&g, particles as usize, eigenspace_max)?;
            if let Some(v) = vertex {
                report.cells.retain(|c| c.vertex == v);
            }
            Ok(Emitted::ok(match format {
                Format::Json => json_document(
                    "bosegraph.entropy/1",
                    &Titled {
                        graph: (&g).into(),
                        body: &report,
                    },
                )?,
                Format::Csv => {
                    let mut t = Table::new(&[
                        "eigenstate",
                        "vertex",
                        "eigenvalue",
                        "square_amplitude",
                        "entropy_bits",
                        "degenerate",
                    ]);
                    for c in &report.cells {
                        t.push(vec![
                            c.eigenstate.to_string(),
                            c.vertex.to_string(),
                            fmt_sig(c.eigenvalue),
                            fmt_sig(c.square_amplitude),
                            fmt_sig(c.entropy_bits),
                            c.degenerate.to_string(),
                        ]);
                    }
                    t.to_csv()
                }
            }))
        }
        Command::Curve {
            particles,
            grid,
            format,
        } => {
            let pts = entropy_curve(&particles, grid)?;
            Ok(Emitted::ok(match format {
                Format::Json => {
                    json_document("bosegraph.curve/1", &serde_json::json!({ "points": pts }))?
                }
                Format::Csv => {
                    let mut t = Table::new(&["p", "n", "entropy_bits", "normalized_entropy"]);
                    for p in &pts {
                        t.push(vec![
                            fmt_sig(p.p),
                            p.particles.to_string(),
                            fmt_sig(p.entropy_bits),
                            fmt_sig(p.normalized),
                        ]);
                    }
                    t.to_csv()
                }
            }))
        }
        Command::Ratio {
            max_n,
            samples,
            format,
        } => {
            let max_n = usize::try_from(max_n).map_err(|_| anyhow!("--max-n {max_n} too large"))?;
            let pts = ratio_curve(max_n, samples)?;
            Ok(Emitted::ok(match format {
                Format::Json => {
                    json_document("bosegraph.ratio/1", &serde_json::json!({ "points": pts }))?
                }
                Format::Csv => {
                    let mut t = Table::new(&["n", "max_entropy_bits", "ratio"]);
                    for p in &pts {
                        t.push(vec![
                            p.particles.to_string(),
                            fmt_sig(p.max_entropy_bits),
                            fmt_sig(p.ratio),
                        ]);
                    }
                    t.to_csv()
                }
            }))
        }
        Command::Search {
            vertices,
            particles,
            mode,
            eigenspace_max,
            jobs,
            format,
        } => {
            if jobs == Some(0) {
                bail!("--jobs must be at least 1");
            }
            let result = search(&SearchConfig {
                vertex_count: vertices,
                particles: particles as usize,
                mode: match mode {
                    Mode::Ground => SearchMode::GroundState,
                    Mode::Any => SearchMode::AnyEigenstate,
                },
                eigenspace_max,
                jobs,
            })?;
            Ok(Emitted::ok(match format {
                Format::Json => json_document("bosegraph.search/1", &result)?,
                Format::Csv => {
                    let mut t = Table::new(&[
                        "mask",
                        "vertex",
                        "eigenstate",
                        "square_amplitude",
                        "entropy_bits",
                        "edges",
                    ]);
                    for w in &result.witnesses {
                        let edges: Vec<String> =
                            w.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
                        t.push(vec![
                            w.mask.to_string(),
                            w.vertex.to_string(),
                            w.eigenstate.to_string(),
                            fmt_sig(w.square_amplitude),
                            fmt_sig(w.value),
                            edges.join(" "),
                        ]);
                    }
                    t.to_csv()
                }
            }))
        }
        Command::Oracle {
            graph,
            particles,
            format,
        } => {
            let g = graph.build()?;
            let report = compare_with_oracle(&g, particles as usize, basis_cap_from_env()?)?;
            let text = match format {
                Format::Json => json_document(
                    "bosegraph.oracle/1",
                    &Titled {
                        graph: (&g).into(),
                        body: &report,
                    },
                )?,
                Format::Csv => {
                    let mut t = Table::new(&[
                        "eigenstate",
                        "vertex",
                        "eigenvalue",
                        "degenerate",
                        "square_amplitude",
                        "max_deviation",
                    ]);
                    for r in &report.rows {
                        t.push(vec![
                            r.eigenstate.to_string(),
                            r.vertex.to_string(),
                            fmt_sig(r.eigenvalue),
                            r.degenerate.to_string(),
                            fmt_sig(r.square_amplitude),
                            fmt_sig(r.max_deviation),
                        ]);
                    }
                    t.to_csv()
                }
            };
            let status = if report.max_deviation > ORACLE_FAIL_TOL {
                eprintln!(
                    "error: closed form deviates from the Fock-space oracle by {:e} (> {ORACLE_FAIL_TOL:e})",
                    report.max_deviation
                );
                EXIT_ORACLE_MISMATCH
            } else {
                0
            };
            Ok(Emitted { text, status })
        }
        Command::Dynamics {
            graph,
            particles,
            vertex,
            initial,
            t_min,
            t_max,
            steps,
            hubbard_u,
            format,
        } => {
            if !t_min.is_finite() || !t_max.is_finite() {
                bail!("time range must be finite");
            }
            if steps == 0 {
                bail!("--steps must be at least 1");
            }
            let g = graph.build()?;
            check_vertex(vertex, &g)?;
            let cap = basis_cap_from_env()?;
            let basis = enumerate_basis_with_cap(g.vertex_count(), particles as usize, cap)?;
            let psi0 = match initial {
                InitialSpec::Site(j) => {
                    condensate_state(&SingleParticleState::site(g.vertex_count(), j)?, &basis)?
                }
                InitialSpec::Condensate(k) => {
                    if k >= g.vertex_count() {
                        bail!(
                            "eigenstate {k} out of range for {} vertices",
                            g.vertex_count()
                        );
                    }
                    condensate_state(&eigendecompose(&g).state(k), &basis)?
                }
                InitialSpec::Occupation(occ) => FockState::occupation(basis.clone(), &occ)?,
                InitialSpec::File(path) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading state file {}", path.display()))?;
                    let psi = FockState::from_json(&text, cap)?;
                    if psi.basis().modes() != g.vertex_count()
                        || psi.basis().particles() != particles as usize
                    {
                        bail!(
                            "state file is for L={} N={}, expected L={} N={particles}",
                            psi.basis().modes(),
                            psi.basis().particles(),
                            g.vertex_count()
                        );
                    }
                    psi
                }
            };
            let h = build_hamiltonian(&g, &basis, hubbard_u)?;
            let times: Vec<f64> = (0..=steps)
                .map(|j| t_min + (t_max - t_min) * j as f64 / steps as f64)
                .collect();
            let series = entropy_timeseries(&psi0, &h, vertex, &times)?;
            Ok(Emitted::ok(match format {
                Format::Json => {
                    let rows: Vec<_> = series
                        .iter()
                        .map(|(t, s)| serde_json::json!({ "t": t, "entropy_bits": s }))
                        .collect();
                    json_document(
                        "bosegraph.dynamics/1",
                        &serde_json::json!({
                            "graph": GraphInfo::from(&g),
                            "particles": particles,
                            "vertex": vertex,
                            "hubbard_u": hubbard_u,
                            "series": rows,
                        }),
                    )?
                }
                Format::Csv => {
                    let mut t = Table::new(&["t", "entropy_bits"]);
                    for (time, s) in &series {
                        t.push(vec![fmt_sig(*time), fmt_sig(*s)]);
                    }
                    t.to_csv()
                }
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
