//! Exhaustive search of vertex entanglement over all connected labelled
//! graphs on `L` vertices.
//!
//! Two functionals are maximized over graphs `Γ` and vertices `i`:
//! the ground-state (Perron) condensate entropy, and the best entropy over
//! every eigenstate of the adjacency matrix. All maximizers within
//! [`TIE_TOL`] are reported.

use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::vertex_entropy;
use crate::error::{Error, Result};
use crate::graph::{enumerate_graphs, graph_count, Graph};
use crate::spectral::{eigendecompose, ground_eigenvector, DEGENERACY_TOL};

/// Two entropies closer than this are a tie.
pub const TIE_TOL: f64 = 1e-10;

const CHUNK: u64 = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    GroundState,
    AnyEigenstate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub mask: u64,
    pub edges: Vec<(usize, usize)>,
    pub vertex: usize,
    pub eigenstate: usize,
    pub square_amplitude: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub mode: SearchMode,
    pub vertex_count: usize,
    pub particles: usize,
    pub eigenspace_max: bool,
    pub best_value: f64,
    pub witnesses: Vec<Witness>,
    pub evaluated_count: u64,
    pub connected_count: u64,
    pub skipped_count: u64,
}

impl SearchResult {
    pub fn has_witness(&self, graph: &Graph, vertex: usize) -> bool {
        let mask = graph.mask();
        self.witnesses
            .iter()
            .any(|w| Some(w.mask) == mask && w.vertex == vertex)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub vertex_count: usize,
    pub particles: usize,
    pub mode: SearchMode,
    pub eigenspace_max: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
}

struct Candidate {
    vertex: usize,
    eigenstate: usize,
    p: f64,
    value: f64,
}

/// Per-vertex (and, in any-eigenstate mode, per-eigenstate) entropies of
/// one connected graph.
fn evaluate(g: &Graph, cfg: &SearchConfig) -> Result<Vec<Candidate>> {
    let l = g.vertex_count();
    let sd = eigendecompose(g);
    let mut out = Vec::new();
    match cfg.mode {
        SearchMode::GroundState => {
            let x = ground_eigenvector(&sd, g)?;
            for i in 0..l {
                let p = x.square_amplitude(i).min(1.0);
                out.push(Candidate {
                    vertex: i,
                    eigenstate: 0,
                    p,
                    value: vertex_entropy(p, cfg.particles)?,
                });
            }
        }
        SearchMode::AnyEigenstate => {
            for class in sd.degeneracy_classes(DEGENERACY_TOL) {
                let projected = cfg.eigenspace_max && class.len() > 1;
                for &k in &class {
                    for i in 0..l {
                        let p = if projected {
                            sd.projector_diagonal(&class, i)
                        } else {
                            sd.square_amplitude(k, i)
                        }
                        .min(1.0);
                        out.push(Candidate {
                            vertex: i,
                            eigenstate: k,
                            p,
                            value: vertex_entropy(p, cfg.particles)?,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Default)]
struct Partial {
    best: f64,
    witnesses: Vec<Witness>,
    evaluated: u64,
    connected: u64,
}

impl Partial {
    fn empty() -> Self {
        Partial {
            best: f64::NEG_INFINITY,
            ..Default::default()
        }
    }

    fn offer(&mut self, g: &Graph, c: Candidate) {
        if c.value > self.best {
            self.best = c.value;
            let floor = self.best - TIE_TOL;
            self.witnesses.retain(|w| w.value >= floor);
        }
        if c.value >= self.best - TIE_TOL {
            self.witnesses.push(Witness {
                mask: g.mask().expect("enumerated graphs fit one word"),
                edges: g.edges(),
                vertex: c.vertex,
                eigenstate: c.eigenstate,
                square_amplitude: c.p,
                value: c.value,
            });
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.best = self.best.max(other.best);
        self.evaluated += other.evaluated;
        self.connected += other.connected;
        self.witnesses.extend(other.witnesses);
        let floor = self.best - TIE_TOL;
        self.witnesses.retain(|w| w.value >= floor);
        self
    }
}

fn scan_chunk(cfg: &SearchConfig, start: u64, end: u64) -> Result<Partial> {
    let mut part = Partial::empty();
    for g in enumerate_graphs(cfg.vertex_count, false)?.with_range(start, end) {
        part.evaluated += 1;
        if !g.is_connected() {
            continue;
        }
        part.connected += 1;
        for c in evaluate(&g, cfg)? {
            part.offer(&g, c);
        }
    }
    Ok(part)
}

/// Runs the exhaustive search described by `cfg`.
pub fn search(cfg: &SearchConfig) -> Result<SearchResult> {
    if cfg.particles == 0 {
        return Err(Error::TooFewParticles { min: 1, got: 0 });
    }
    // Validates the cap before any work is scheduled.
    enumerate_graphs(cfg.vertex_count, false)?;
    let total = graph_count(cfg.vertex_count);
    let run = || -> Result<Partial> {
        (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| scan_chunk(cfg, c * CHUNK, ((c + 1) * CHUNK).min(total)))
            .try_reduce(Partial::empty, |a, b| Ok(a.merge(b)))
    };
    let merged = match cfg.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let mut witnesses = merged.witnesses;
    witnesses.sort_by_key(|w| (w.mask, w.vertex, w.eigenstate));
    Ok(SearchResult {
        mode: cfg.mode,
        vertex_count: cfg.vertex_count,
        particles: cfg.particles,
        eigenspace_max: cfg.eigenspace_max,
        best_value: merged.best,
        witnesses,
        evaluated_count: merged.evaluated,
        connected_count: merged.connected,
        skipped_count: merged.evaluated - merged.connected,
    })
}

/// Best ground-state vertex entropy over connected graphs on `L` vertices.
pub fn search_ground(vertex_count: usize, particles: usize) -> Result<SearchResult> {
    search(&SearchConfig {
        vertex_count,
        particles,
        mode: SearchMode::GroundState,
        eigenspace_max: false,
        jobs: None,
    })
}

/// Best vertex entropy over every eigenstate of every connected graph.
pub fn search_any_eigenstate(
    vertex_count: usize,
    particles: usize,
    eigenspace_max: bool,
) -> Result<SearchResult> {
    search(&SearchConfig {
        vertex_count,
        particles,
        mode: SearchMode::AnyEigenstate,
        eigenspace_max,
        jobs: None,
    })
}
