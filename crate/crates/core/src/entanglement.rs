//! Closed-form vertex occupation laws and entanglement entropies of
//! condensates.
//!
//! Condensing `N` bosons into a single-particle wavefunction `x` leaves
//! vertex `i` with a diagonal reduced density matrix whose entries are the
//! binomial law `C(N,m) p^m (1-p)^(N-m)`, `p = |x_i|^2`. Everything in this
//! module is a function of `(p, N)` only. Entropies are in bits.

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{eigendecompose, SingleParticleState, DEGENERACY_TOL};

/// Above this particle number binomials are evaluated in log space.
pub const LOG_SPACE_THRESHOLD: usize = 64;

/// Occupation distribution `ρ_m`, `m = 0..=N`, of one vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexOccupationDistribution {
    pub vertex: Option<usize>,
    pub particles: usize,
    pub probabilities: Vec<f64>,
}

impl VertexOccupationDistribution {
    pub fn new(vertex: Option<usize>, probabilities: Vec<f64>) -> Self {
        assert!(!probabilities.is_empty());
        VertexOccupationDistribution {
            vertex,
            particles: probabilities.len() - 1,
            probabilities,
        }
    }

    /// `-Σ ρ_m log2 ρ_m`, with `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        shannon_bits(&self.probabilities)
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Largest entrywise difference; panics on mismatched particle numbers.
    pub fn max_abs_deviation(&self, other: &Self) -> f64 {
        assert_eq!(self.particles, other.particles);
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_bits(probabilities: &[f64]) -> f64 {
    -probabilities
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|&q| q * q.log2())
        .sum::<f64>()
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p))
    }
}

fn check_particles(n: usize) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::TooFewParticles { min: 1, got: n })
    }
}

/// `C(N, m)` for `m = 0..=N`, exact integers for `N <= 64`.
fn small_binomials(n: usize) -> Vec<f64> {
    debug_assert!(n <= LOG_SPACE_THRESHOLD);
    let mut row = Vec::with_capacity(n + 1);
    let mut c: u128 = 1;
    for m in 0..=n {
        row.push(c as f64);
        c = c * (n - m) as u128 / (m as u128 + 1);
    }
    row
}

/// `ln ρ_m` of `Binom(N, p)`; `-inf` where the probability is zero.
fn log_binomial_weights(p: f64, n: usize) -> Vec<f64> {
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    (0..=n)
        .map(|m| {
            let k = (n - m) as f64;
            let a = if m == 0 { 0.0 } else { m as f64 * lp };
            let b = if m == n { 0.0 } else { k * lq };
            ln_binomial(n as u64, m as u64) + a + b
        })
        .collect()
}

/// Binomial law `C(N,m) p^m (1-p)^(N-m)` for the vertex occupation.
pub fn vertex_distribution(p: f64, particles: usize) -> Result<VertexOccupationDistribution> {
    check_probability(p)?;
    check_particles(particles)?;
    let n = particles;
    let probs = if n <= LOG_SPACE_THRESHOLD {
        let q = 1.0 - p;
        small_binomials(n)
            .into_iter()
            .enumerate()
            .map(|(m, c)| c * p.powi(m as i32) * q.powi((n - m) as i32))
            .collect()
    } else {
        log_binomial_weights(p, n)
            .into_iter()
            .map(f64::exp)
            .collect()
    };
    Ok(VertexOccupationDistribution::new(None, probs))
}

/// Entanglement entropy (bits) of a vertex with square amplitude `p` in an
/// `N`-particle condensate.
pub fn vertex_entropy(p: f64, particles: usize) -> Result<f64> {
    check_probability(p)?;
    check_particles(particles)?;
    if particles <= LOG_SPACE_THRESHOLD {
        return Ok(vertex_distribution(p, particles)?.entropy());
    }
    let s: f64 = log_binomial_weights(p, particles)
        .into_iter()
        .filter(|l| l.is_finite())
        .map(|l| l.exp() * l)
        .sum();
    Ok((-s / std::f64::consts::LN_2).max(0.0))
}

/// Entropy of the vertex occupation of `x` under an `N`-particle condensate.
pub fn condensate_vertex_entropy(
    x: &SingleParticleState,
    vertex: usize,
    particles: usize,
) -> Result<f64> {
    if vertex >= x.len() {
        return Err(Error::NoSuchVertex {
            vertex,
            vertex_count: x.len(),
        });
    }
    vertex_entropy(x.square_amplitude(vertex).min(1.0), particles)
}

/// Highest attainable vertex entropy, `N - 2^-N Σ_m C(N,m) log2 C(N,m)`.
pub fn max_entropy(particles: usize) -> Result<f64> {
    check_particles(particles)?;
    let n = particles;
    if n <= LOG_SPACE_THRESHOLD {
        let s: f64 = small_binomials(n).iter().map(|c| c * c.log2()).sum();
        return Ok(n as f64 - s / 2f64.powi(n as i32));
    }
    // Same quantity as the entropy of the weights C(N,m)/2^N, normalized in
    // log space to avoid cancelling N against the sum.
    let logs: Vec<f64> = (0..=n as u64).map(|m| ln_binomial(n as u64, m)).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
    let s: f64 = logs
        .iter()
        .map(|l| {
            let d = l - lse;
            d.exp() * d
        })
        .sum();
    Ok(-s / std::f64::consts::LN_2)
}

/// `log2(N + 1)`, the entropy ceiling of an `(N+1)`-level vertex.
pub fn max_available_entropy(particles: usize) -> f64 {
    ((particles + 1) as f64).log2()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub p: f64,
    pub particles: usize,
    pub entropy_bits: f64,
    pub normalized: f64,
}

/// Normalized vertex entropy on a uniform `grid`-point mesh of `p ∈ [0,1]`,
/// one block per entry of `particle_numbers`.
pub fn entropy_curve(particle_numbers: &[usize], grid: usize) -> Result<Vec<CurvePoint>> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid must be >= 2, got {grid}"
        )));
    }
    for &n in particle_numbers {
        check_particles(n)?;
    }
    let last = (grid - 1) as f64;
    particle_numbers
        .iter()
        .flat_map(|&n| (0..grid).map(move |j| (n, j)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(n, j)| {
            let p = j as f64 / last;
            let e = vertex_entropy(p, n)?;
            Ok(CurvePoint {
                p,
                particles: n,
                entropy_bits: e,
                normalized: e / max_available_entropy(n),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioPoint {
    pub particles: usize,
    pub max_entropy_bits: f64,
    pub ratio: f64,
}

/// Logarithmically spaced particle numbers `1..=max_n`, deduplicated, ends included.
pub fn log_spaced(max_n: usize, samples: usize) -> Vec<usize> {
    let mut ns = vec![1usize];
    if max_n > 1 {
        let steps = samples.max(2) - 1;
        let top = (max_n as f64).ln();
        for j in 1..=steps {
            let n = ((top * j as f64 / steps as f64).exp().round() as usize).clamp(1, max_n);
            if n > *ns.last().unwrap() {
                ns.push(n);
            }
        }
        if *ns.last().unwrap() != max_n {
            ns.push(max_n);
        }
    }
    ns
}

/// `max_entropy(N) / log2(N+1)` at log-spaced `N` up to `max_n`.
pub fn ratio_curve(max_n: usize, samples: usize) -> Result<Vec<RatioPoint>> {
    check_particles(max_n)?;
    ratio_points(&log_spaced(max_n, samples))
}

/// Ratio at the given particle numbers, in input order.
pub fn ratio_points(particle_numbers: &[usize]) -> Result<Vec<RatioPoint>> {
    particle_numbers
        .par_iter()
        .map(|&n| {
            let e = max_entropy(n)?;
            Ok(RatioPoint {
                particles: n,
                max_entropy_bits: e,
                ratio: e / max_available_entropy(n),
            })
        })
        .collect()
}

/// One `(eigenstate, vertex)` entry of a graph report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportCell {
    pub eigenstate: usize,
    pub vertex: usize,
    pub eigenvalue: f64,
    pub square_amplitude: f64,
    pub entropy_bits: f64,
    pub degenerate: bool,
}

/// Vertex entropies of condensates over every adjacency eigenvector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub vertex_count: usize,
    pub particles: usize,
    pub eigenspace_max: bool,
    pub eigenvalues: Vec<f64>,
    pub degeneracy_classes: Vec<Vec<usize>>,
    pub cells: Vec<ReportCell>,
}

impl EntanglementReport {
    pub fn cell(&self, eigenstate: usize, vertex: usize) -> &ReportCell {
        &self.cells[eigenstate * self.vertex_count + vertex]
    }

    pub fn has_degeneracy(&self) -> bool {
        self.cells.iter().any(|c| c.degenerate)
    }
}

/// Entropy of every vertex under a condensate over every eigenvector of `g`.
///
/// Inside a degenerate level the solver's basis is used unless
/// `eigenspace_max` is set, in which case `p` is the projector diagonal
/// `(P_λ)_ii`, the largest square amplitude reachable within the level.
pub fn graph_entanglement_report(
    g: &Graph,
    particles: usize,
    eigenspace_max: bool,
) -> Result<EntanglementReport> {
    check_particles(particles)?;
    let l = g.vertex_count();
    let sd = eigendecompose(g);
    let classes = sd.degeneracy_classes(DEGENERACY_TOL);
    let mut cells = Vec::with_capacity(l * l);
    for class in &classes {
        let degenerate = class.len() > 1;
        for &k in class {
            for i in 0..l {
                let p = if degenerate && eigenspace_max {
                    sd.projector_diagonal(class, i)
                } else {
                    sd.square_amplitude(k, i)
                }
                .min(1.0);
                cells.push(ReportCell {
                    eigenstate: k,
                    vertex: i,
                    eigenvalue: sd.eigenvalues()[k],
                    square_amplitude: p,
                    entropy_bits: vertex_entropy(p, particles)?,
                    degenerate,
                });
            }
        }
    }
    Ok(EntanglementReport {
        vertex_count: l,
        particles,
        eigenspace_max,
        eigenvalues: sd.eigenvalues().to_vec(),
        degeneracy_classes: classes,
        cells,
    })
}
