//! Closed-form versus brute-force comparison for a graph.

use serde::Serialize;

use crate::entanglement::vertex_distribution;
use crate::error::Result;
use crate::fock::{condensate_state, enumerate_basis_with_cap, vertex_marginal};
use crate::graph::Graph;
use crate::spectral::{eigendecompose, DEGENERACY_TOL};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleRow {
    pub eigenstate: usize,
    pub vertex: usize,
    pub eigenvalue: f64,
    pub degenerate: bool,
    pub square_amplitude: f64,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub vertex_count: usize,
    pub particles: usize,
    pub basis_size: usize,
    pub max_deviation: f64,
    pub rows: Vec<OracleRow>,
}

/// For every adjacency eigenvector `k` and vertex `i`, the largest entrywise
/// gap between the binomial law and the marginal of the explicit condensate.
pub fn compare_with_oracle(g: &Graph, particles: usize, basis_cap: usize) -> Result<OracleReport> {
    let l = g.vertex_count();
    let basis = enumerate_basis_with_cap(l, particles, basis_cap)?;
    let sd = eigendecompose(g);
    let classes = sd.degeneracy_classes(DEGENERACY_TOL);
    let mut rows = Vec::with_capacity(l * l);
    for k in 0..l {
        let degenerate = classes.iter().any(|c| c.len() > 1 && c.contains(&k));
        let x = sd.state(k);
        let psi = condensate_state(&x, &basis)?;
        for i in 0..l {
            let p = x.square_amplitude(i).min(1.0);
            let closed = vertex_distribution(p, particles)?;
            let brute = vertex_marginal(&psi, i)?;
            rows.push(OracleRow {
                eigenstate: k,
                vertex: i,
                eigenvalue: sd.eigenvalues()[k],
                degenerate,
                square_amplitude: p,
                max_deviation: closed.max_abs_deviation(&brute),
            });
        }
    }
    Ok(OracleReport {
        vertex_count: l,
        particles,
        basis_size: basis.len(),
        max_deviation: rows.iter().map(|r| r.max_deviation).fold(0.0, f64::max),
        rows,
    })
}
