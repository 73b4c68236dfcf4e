//! Mode entanglement of one vertex against the rest of a graph, for `N`
//! non-interacting bosons condensed into a single-particle wavefunction.
//!
//! * [`graph`]: labelled simple graphs, generators, exhaustive enumeration.
//! * [`spectral`]: cyclic Jacobi eigensolver, Perron vectors, ring Fourier modes.
//! * [`entanglement`]: binomial vertex laws, entropies, figure tables.
//! * [`fock`]: explicit Fock-space oracle: condensates, marginals, dynamics.
//! * [`search`]: exhaustive topology search over connected graphs.
//! * [`verify`]: closed form versus oracle comparison.

pub mod entanglement;
pub mod error;
pub mod fock;
pub mod graph;
pub mod search;
pub mod spectral;
pub mod verify;

pub use entanglement::{
    entropy_curve, graph_entanglement_report, max_entropy, ratio_curve, vertex_distribution,
    vertex_entropy, EntanglementReport, VertexOccupationDistribution,
};
pub use error::{Error, Result};
pub use fock::{
    build_hamiltonian, condensate_state, entropy_timeseries, enumerate_basis, evolve,
    vertex_marginal, FockBasis, FockState, ManyBodyHamiltonian,
};
pub use graph::{enumerate_graphs, Bipartition, Graph, GraphKind};
pub use search::{search, search_any_eigenstate, search_ground, SearchMode, SearchResult};
pub use spectral::{
    eigendecompose, fourier_modes, ground_eigenvector, SingleParticleState, SpectralDecomposition,
};
pub use verify::{compare_with_oracle, OracleReport};
