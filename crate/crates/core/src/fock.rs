//! Brute-force many-body layer over the fixed-`N` Fock sector.
//!
//! Nothing here uses the binomial closed form: marginals are obtained by
//! summing `|C(n_1..n_L)|^2` over explicit occupation vectors, and dynamics
//! come from diagonalizing the many-body hopping matrix. This is the
//! reference the closed forms in [`crate::entanglement`] are checked against.
//!
//! Basis order is lexicographic descending on occupation vectors, e.g. for
//! `L = 3, N = 2`: `(2,0,0) (1,1,0) (1,0,1) (0,2,0) (0,1,1) (0,0,2)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::entanglement::VertexOccupationDistribution;
use crate::error::{Error, Result};
use crate::graph::{Bipartition, Graph};
use crate::spectral::{SingleParticleState, SpectralDecomposition};

/// Default ceiling on the number of basis states.
pub const DEFAULT_BASIS_CAP: usize = 2_000_000;

/// Environment variable consulted by [`basis_cap_from_env`].
pub const BASIS_CAP_ENV: &str = "BOSEGRAPH_MAX_BASIS";

/// Basis cap from [`BASIS_CAP_ENV`], falling back to [`DEFAULT_BASIS_CAP`].
pub fn basis_cap_from_env() -> Result<usize> {
    match std::env::var(BASIS_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("{BASIS_CAP_ENV}=`{v}` is not a positive integer"))
        }),
        Err(_) => Ok(DEFAULT_BASIS_CAP),
    }
}

/// `C(N+L-1, N)`, saturating at `u128::MAX`.
pub fn basis_size(modes: usize, particles: usize) -> u128 {
    if modes == 0 {
        return u128::from(particles == 0);
    }
    let k = particles.min(modes - 1) as u128;
    let top = (particles + modes - 1) as u128;
    let mut c: u128 = 1;
    for j in 0..k {
        // c * (top - j) / (j + 1) stays integral at every step.
        match c.checked_mul(top - j) {
            Some(v) => c = v / (j + 1),
            None => return u128::MAX,
        }
    }
    c
}

/// Occupation-number basis of `N` bosons on `L` modes.
#[derive(Debug)]
pub struct FockBasis {
    modes: usize,
    particles: usize,
    occupations: Vec<u32>,
    index: HashMap<Box<[u32]>, usize>,
}

impl FockBasis {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn len(&self) -> usize {
        self.occupations.len() / self.modes
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn state(&self, k: usize) -> &[u32] {
        &self.occupations[k * self.modes..(k + 1) * self.modes]
    }

    pub fn states(&self) -> impl Iterator<Item = &[u32]> {
        self.occupations.chunks_exact(self.modes)
    }

    pub fn index_of(&self, occupation: &[u32]) -> Option<usize> {
        self.index.get(occupation).copied()
    }
}

fn fill(modes: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<u32>) {
    if prefix.len() + 1 == modes {
        out.extend_from_slice(prefix);
        out.push(remaining);
        return;
    }
    for n in (0..=remaining).rev() {
        prefix.push(n);
        fill(modes, remaining - n, prefix, out);
        prefix.pop();
    }
}

/// Enumerates the fixed-`N` sector, refusing more than [`DEFAULT_BASIS_CAP`] states.
pub fn enumerate_basis(modes: usize, particles: usize) -> Result<Arc<FockBasis>> {
    enumerate_basis_with_cap(modes, particles, DEFAULT_BASIS_CAP)
}

pub fn enumerate_basis_with_cap(
    modes: usize,
    particles: usize,
    cap: usize,
) -> Result<Arc<FockBasis>> {
    if modes == 0 {
        return Err(Error::TooFewVertices {
            kind: "Fock basis",
            min: 1,
            got: 0,
        });
    }
    let size = basis_size(modes, particles);
    if size > cap as u128 {
        return Err(Error::BasisTooLarge { size, cap });
    }
    let particles_u32 = u32::try_from(particles)
        .map_err(|_| Error::InvalidArgument(format!("{particles} particles")))?;
    let mut occupations = Vec::with_capacity(size as usize * modes);
    fill(
        modes,
        particles_u32,
        &mut Vec::with_capacity(modes),
        &mut occupations,
    );
    let index = occupations
        .chunks_exact(modes)
        .enumerate()
        .map(|(k, s)| (s.to_vec().into_boxed_slice(), k))
        .collect();
    Ok(Arc::new(FockBasis {
        modes,
        particles,
        occupations,
        index,
    }))
}

fn check_basis(expected: &Arc<FockBasis>, got: &Arc<FockBasis>) -> Result<()> {
    if Arc::ptr_eq(expected, got)
        || (expected.modes == got.modes && expected.particles == got.particles)
    {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: expected.len(),
            got: got.len(),
        })
    }
}

/// Many-body pure state over a [`FockBasis`].
#[derive(Clone, Debug)]
pub struct FockState {
    basis: Arc<FockBasis>,
    coefficients: Vec<Complex64>,
}

impl FockState {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(basis: Arc<FockBasis>, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: coefficients.len(),
            });
        }
        let n2: f64 = coefficients.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(FockState {
            basis,
            coefficients,
        })
    }

    /// Rescales `coefficients` to unit norm first.
    pub fn normalized(basis: Arc<FockBasis>, coefficients: Vec<Complex64>) -> Result<Self> {
        let n = coefficients
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n * n));
        }
        Self::new(basis, coefficients.into_iter().map(|z| z / n).collect())
    }

    /// The basis vector `|n_1 .. n_L>`.
    pub fn occupation(basis: Arc<FockBasis>, occupation: &[u32]) -> Result<Self> {
        let k = basis.index_of(occupation).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "occupation {occupation:?} is not in the L={} N={} sector",
                basis.modes, basis.particles
            ))
        })?;
        let mut c = vec![Complex64::new(0.0, 0.0); basis.len()];
        c[k] = Complex64::new(1.0, 0.0);
        Ok(FockState {
            basis,
            coefficients: c,
        })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|C|^2` per basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.coefficients.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn to_document(&self) -> FockStateDocument {
        FockStateDocument {
            modes: self.basis.modes,
            particles: self.basis.particles,
            entries: self
                .basis
                .states()
                .zip(&self.coefficients)
                .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
                .map(|(s, z)| (s.to_vec(), z.re, z.im))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("state document serializes")
    }

    pub fn from_document(doc: &FockStateDocument, cap: usize) -> Result<Self> {
        let basis = enumerate_basis_with_cap(doc.modes, doc.particles, cap)?;
        let mut c = vec![Complex64::new(0.0, 0.0); basis.len()];
        for (occ, re, im) in &doc.entries {
            let k = basis.index_of(occ).ok_or_else(|| {
                Error::StateFormat(format!("occupation {occ:?} not in the sector"))
            })?;
            c[k] = Complex64::new(*re, *im);
        }
        Self::new(basis, c)
    }

    pub fn from_json(text: &str, cap: usize) -> Result<Self> {
        let doc: FockStateDocument =
            serde_json::from_str(text).map_err(|e| Error::StateFormat(e.to_string()))?;
        Self::from_document(&doc, cap)
    }
}

/// JSON form of a [`FockState`]: `{"L", "N", "entries": [[occupation], re, im]}`,
/// nonzero coefficients only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FockStateDocument {
    #[serde(rename = "L")]
    pub modes: usize,
    #[serde(rename = "N")]
    pub particles: usize,
    pub entries: Vec<(Vec<u32>, f64, f64)>,
}

/// `(B†)^N |0> / sqrt(N!)` with `B† = Σ_k x_k b_k†`: coefficient
/// `sqrt(N!/Π n_k!) Π x_k^{n_k}` on every occupation vector.
pub fn condensate_state(x: &SingleParticleState, basis: &Arc<FockBasis>) -> Result<FockState> {
    if x.len() != basis.modes {
        return Err(Error::DimensionMismatch {
            expected: basis.modes,
            got: x.len(),
        });
    }
    let ln_n_fact = ln_factorial(basis.particles as u64);
    let amps = x.amplitudes();
    let coefficients = basis
        .states()
        .map(|occ| {
            let ln_multinomial =
                ln_n_fact - occ.iter().map(|&n| ln_factorial(n as u64)).sum::<f64>();
            let product: Complex64 = occ.iter().zip(amps).map(|(&n, z)| z.powu(n)).product();
            product * (0.5 * ln_multinomial).exp()
        })
        .collect();
    Ok(FockState {
        basis: basis.clone(),
        coefficients,
    })
}

/// On-site reduced density matrix diagonal of vertex `i`: `ρ_m` is the
/// total weight of basis states with `n_i = m`.
pub fn vertex_marginal(psi: &FockState, vertex: usize) -> Result<VertexOccupationDistribution> {
    let basis = &psi.basis;
    if vertex >= basis.modes {
        return Err(Error::NoSuchVertex {
            vertex,
            vertex_count: basis.modes,
        });
    }
    let mut rho = vec![0.0; basis.particles + 1];
    for (occ, z) in basis.states().zip(&psi.coefficients) {
        rho[occ[vertex] as usize] += z.norm_sqr();
    }
    Ok(VertexOccupationDistribution::new(Some(vertex), rho))
}

/// Real symmetric many-body Hamiltonian on a Fock sector:
/// `-Σ_{ij} A_ij b_i† b_j + (u/2) Σ_j n_j (n_j - 1)`.
#[derive(Debug)]
pub struct ManyBodyHamiltonian {
    basis: Arc<FockBasis>,
    matrix: DMatrix<f64>,
    hubbard_u: f64,
    spectrum: OnceLock<SpectralDecomposition>,
}

impl ManyBodyHamiltonian {
    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn hubbard_u(&self) -> f64 {
        self.hubbard_u
    }

    /// Eigendecomposition, computed on first use.
    pub fn spectrum(&self) -> &SpectralDecomposition {
        self.spectrum
            .get_or_init(|| SpectralDecomposition::of_symmetric(&self.matrix))
    }
}

pub fn build_hamiltonian(
    g: &Graph,
    basis: &Arc<FockBasis>,
    hubbard_u: f64,
) -> Result<ManyBodyHamiltonian> {
    if g.vertex_count() != basis.modes {
        return Err(Error::DimensionMismatch {
            expected: basis.modes,
            got: g.vertex_count(),
        });
    }
    if !hubbard_u.is_finite() {
        return Err(Error::InvalidArgument(format!("hubbard_u = {hubbard_u}")));
    }
    let dim = basis.len();
    let edges = g.edges();
    let mut h = DMatrix::zeros(dim, dim);
    let mut scratch = vec![0u32; basis.modes];
    for (s, occ) in basis.states().enumerate() {
        let onsite: f64 = occ
            .iter()
            .map(|&n| {
                let n = n as f64;
                n * (n - 1.0)
            })
            .sum();
        h[(s, s)] += 0.5 * hubbard_u * onsite;
        for &(u, v) in &edges {
            // b_i† b_j and b_j† b_i for every edge.
            for (i, j) in [(u, v), (v, u)] {
                if occ[j] == 0 {
                    continue;
                }
                scratch.copy_from_slice(occ);
                let amp = ((scratch[i] as f64 + 1.0) * scratch[j] as f64).sqrt();
                scratch[j] -= 1;
                scratch[i] += 1;
                let t = basis.index_of(&scratch).expect("hop stays in sector");
                h[(t, s)] -= amp;
            }
        }
    }
    Ok(ManyBodyHamiltonian {
        basis: basis.clone(),
        matrix: h,
        hubbard_u,
        spectrum: OnceLock::new(),
    })
}

/// `e^{-iHt} ψ` through the eigendecomposition of `H`.
pub fn evolve(psi: &FockState, h: &ManyBodyHamiltonian, t: f64) -> Result<FockState> {
    Ok(evolve_many(psi, h, &[t])?.pop().unwrap())
}

/// [`evolve`] at several times, sharing the projection onto the eigenbasis.
pub fn evolve_many(
    psi: &FockState,
    h: &ManyBodyHamiltonian,
    times: &[f64],
) -> Result<Vec<FockState>> {
    check_basis(&h.basis, &psi.basis)?;
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time {t} is not finite")));
    }
    let sd = h.spectrum();
    let u = sd.eigenvectors();
    let dim = sd.dim();
    let overlaps: Vec<Complex64> = (0..dim)
        .map(|k| (0..dim).map(|s| psi.coefficients[s] * u[(k, s)]).sum())
        .collect();
    Ok(times
        .iter()
        .map(|&t| {
            let rotated: Vec<Complex64> = overlaps
                .iter()
                .zip(sd.eigenvalues())
                .map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t))
                .collect();
            let coefficients = (0..dim)
                .map(|s| (0..dim).map(|k| rotated[k] * u[(k, s)]).sum())
                .collect();
            FockState {
                basis: psi.basis.clone(),
                coefficients,
            }
        })
        .collect())
}

/// `(t, S_i(t))` with `S_i` the vertex entropy in bits of `e^{-iHt} ψ0`.
pub fn entropy_timeseries(
    psi0: &FockState,
    h: &ManyBodyHamiltonian,
    vertex: usize,
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    evolve_many(psi0, h, times)?
        .iter()
        .zip(times)
        .map(|(psi, &t)| Ok((t, vertex_marginal(psi, vertex)?.entropy())))
        .collect()
}

/// `max_t |S_i(t) - S_i(-t)|` over `times`.
pub fn reversal_asymmetry(
    psi0: &FockState,
    h: &ManyBodyHamiltonian,
    vertex: usize,
    times: &[f64],
) -> Result<f64> {
    let back: Vec<f64> = times.iter().map(|t| -t).collect();
    let fwd = entropy_timeseries(psi0, h, vertex, times)?;
    let bwd = entropy_timeseries(psi0, h, vertex, &back)?;
    Ok(fwd
        .iter()
        .zip(&bwd)
        .map(|(a, b)| (a.1 - b.1).abs())
        .fold(0.0, f64::max))
}

/// Multiplies each coefficient by `(-1)^{Σ_{j∈A} n_j}`, A = label-1 side.
pub fn sublattice_sign_flip(psi: &FockState, sides: &Bipartition) -> Result<FockState> {
    if sides.labels().len() != psi.basis.modes {
        return Err(Error::DimensionMismatch {
            expected: psi.basis.modes,
            got: sides.labels().len(),
        });
    }
    let coefficients = psi
        .basis
        .states()
        .zip(&psi.coefficients)
        .map(|(occ, &z)| {
            let on_a: u32 = occ
                .iter()
                .zip(sides.labels())
                .filter(|(_, &side)| side == 1)
                .map(|(&n, _)| n)
                .sum();
            if on_a % 2 == 1 {
                -z
            } else {
                z
            }
        })
        .collect();
    Ok(FockState {
        basis: psi.basis.clone(),
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::vertex_distribution;
    use crate::spectral::eigendecompose;
    use proptest::prelude::*;
    use std::collections::HashSet;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn basis_sizes_and_order() {
        let b = enumerate_basis(3, 2).unwrap();
        assert_eq!(b.len(), 6);
        let states: Vec<Vec<u32>> = b.states().map(|s| s.to_vec()).collect();
        assert_eq!(
            states,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        let b = enumerate_basis(2, 1).unwrap();
        assert_eq!(b.state(0), &[1, 0]);
        assert_eq!(b.state(1), &[0, 1]);
        let b = enumerate_basis(1, 5).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.state(0), &[5]);
        assert_eq!(enumerate_basis(4, 0).unwrap().len(), 1);
    }

    #[test]
    fn basis_cap_refuses() {
        assert_eq!(
            enumerate_basis_with_cap(10, 10, 1000).unwrap_err(),
            Error::BasisTooLarge {
                size: 92378,
                cap: 1000
            }
        );
        assert_eq!(basis_size(3, 2), 6);
        assert_eq!(basis_size(1, 5), 1);
        assert_eq!(basis_size(400, 400), u128::MAX);
        assert!(enumerate_basis(40, 200).is_err());
    }

    #[test]
    fn condensate_coefficients() {
        let b = enumerate_basis(2, 1).unwrap();
        let x = SingleParticleState::from_real(vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let psi = condensate_state(&x, &b).unwrap();
        for z in psi.coefficients() {
            assert!((z - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        }

        let b = enumerate_basis(2, 2).unwrap();
        let psi = condensate_state(&x, &b).unwrap();
        let want = [0.5, FRAC_1_SQRT_2, 0.5];
        for (z, w) in psi.coefficients().iter().zip(want) {
            assert!((z - c(w)).norm() < 1e-15);
        }
        let rho = vertex_marginal(&psi, 0).unwrap();
        for (r, w) in rho.probabilities.iter().zip([0.25, 0.5, 0.25]) {
            assert!((r - w).abs() < 1e-15);
        }

        let b = enumerate_basis(4, 3).unwrap();
        let x = SingleParticleState::site(4, 2).unwrap();
        let psi = condensate_state(&x, &b).unwrap();
        let k = b.index_of(&[0, 0, 3, 0]).unwrap();
        for (s, z) in psi.coefficients().iter().enumerate() {
            assert_eq!(z.norm(), if s == k { 1.0 } else { 0.0 });
        }
        assert_eq!(
            vertex_marginal(&psi, 2).unwrap().probabilities,
            vec![0.0, 0.0, 0.0, 1.0]
        );

        let wrong = SingleParticleState::site(3, 0).unwrap();
        assert!(matches!(
            condensate_state(&wrong, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn superposition_marginal() {
        let b = enumerate_basis(2, 1).unwrap();
        let psi = FockState::new(b, vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        assert_eq!(vertex_marginal(&psi, 0).unwrap().probabilities.len(), 2);
        assert!((vertex_marginal(&psi, 0).unwrap().probabilities[0] - 0.5).abs() < 1e-15);
        assert!(vertex_marginal(&psi, 2).is_err());
    }

    #[test]
    fn single_particle_sector_is_minus_adjacency() {
        for g in crate::graph::enumerate_graphs(4, false).unwrap() {
            let b = enumerate_basis(4, 1).unwrap();
            let h = build_hamiltonian(&g, &b, 0.0).unwrap();
            assert_eq!(h.matrix(), &(-g.adjacency()));
        }
        let dimer = Graph::path(2).unwrap();
        let h = build_hamiltonian(&dimer, &enumerate_basis(2, 1).unwrap(), 0.0).unwrap();
        assert_eq!(
            h.matrix(),
            &DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0])
        );
    }

    #[test]
    fn dimer_two_particles() {
        let dimer = Graph::path(2).unwrap();
        let h = build_hamiltonian(&dimer, &enumerate_basis(2, 2).unwrap(), 0.0).unwrap();
        let w = h.spectrum().eigenvalues();
        for (a, b) in w.iter().zip([2.0, 0.0, -2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(h.matrix(), &h.matrix().transpose());
    }

    #[test]
    fn hubbard_diagonal() {
        let g = Graph::empty(2);
        let b = enumerate_basis(2, 3).unwrap();
        let h = build_hamiltonian(&g, &b, 2.0).unwrap();
        // (3,0): u/2 * 3*2 = 6; (2,1): u/2 * 2 = 2
        assert_eq!(h.matrix()[(0, 0)], 6.0);
        assert_eq!(h.matrix()[(1, 1)], 2.0);
        assert!(build_hamiltonian(&Graph::empty(3), &b, 0.0).is_err());
    }

    #[test]
    fn hopping_connects_single_moves_along_edges() {
        let g = Graph::path(3).unwrap();
        let b = enumerate_basis(3, 3).unwrap();
        let h = build_hamiltonian(&g, &b, 0.0).unwrap();
        for s in 0..b.len() {
            for t in 0..b.len() {
                if s == t || h.matrix()[(t, s)] == 0.0 {
                    continue;
                }
                let diff: Vec<i64> = b
                    .state(s)
                    .iter()
                    .zip(b.state(t))
                    .map(|(&x, &y)| y as i64 - x as i64)
                    .collect();
                let gained: Vec<usize> = (0..3).filter(|&j| diff[j] == 1).collect();
                let lost: Vec<usize> = (0..3).filter(|&j| diff[j] == -1).collect();
                assert_eq!(diff.iter().map(|d| d.abs()).sum::<i64>(), 2);
                assert!(g.has_edge(gained[0], lost[0]));
            }
        }
    }

    #[test]
    fn dimer_rabi_oscillation() {
        let b = enumerate_basis(2, 1).unwrap();
        let h = build_hamiltonian(&Graph::path(2).unwrap(), &b, 0.0).unwrap();
        let psi0 = FockState::occupation(b, &[1, 0]).unwrap();
        for t in [0.0, 0.3, FRAC_PI_4, 1.7, -2.2] {
            let rho = vertex_marginal(&evolve(&psi0, &h, t).unwrap(), 0).unwrap();
            let (s, cs) = (t.sin().powi(2), t.cos().powi(2));
            assert!((rho.probabilities[0] - s).abs() < 1e-12);
            assert!((rho.probabilities[1] - cs).abs() < 1e-12);
        }
        let series = entropy_timeseries(&psi0, &h, 0, &[FRAC_PI_4]).unwrap();
        assert!((series[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stationary_states_and_zero_time() {
        let g = Graph::star(4).unwrap();
        let b = enumerate_basis(4, 2).unwrap();
        let h = build_hamiltonian(&g, &b, 0.0).unwrap();
        let x = eigendecompose(&g).state(0);
        let psi = condensate_state(&x, &b).unwrap();
        let same = evolve(&psi, &h, 0.0).unwrap();
        for (a, z) in same.coefficients().iter().zip(psi.coefficients()) {
            assert!((a - z).norm() < 1e-12);
        }
        let series = entropy_timeseries(&psi, &h, 0, &[0.0, 0.5, 3.0, -7.0]).unwrap();
        for (_, s) in &series {
            assert!((s - 1.5).abs() < 1e-10);
        }
    }

    #[test]
    fn json_round_trip_and_errors() {
        let b = enumerate_basis(3, 2).unwrap();
        let x = SingleParticleState::normalized(vec![c(1.0), Complex64::new(0.0, 1.0), c(0.0)])
            .unwrap();
        let psi = condensate_state(&x, &b).unwrap();
        let text = psi.to_json();
        assert!(text.starts_with("{\"L\":3,\"N\":2,\"entries\":[[[2,0,0],"));
        let back = FockState::from_json(&text, DEFAULT_BASIS_CAP).unwrap();
        assert_eq!(back.coefficients(), psi.coefficients());
        assert_eq!(back.to_document().entries.len(), 3);
        assert!(
            FockState::from_json("{\"L\":2,\"N\":1,\"entries\":[[[2,0],1.0,0.0]]}", 100).is_err()
        );
        assert!(
            FockState::from_json("{\"L\":2,\"N\":1,\"entries\":[[[1,0],2.0,0.0]]}", 100).is_err()
        );
        assert!(FockState::from_json("[]", 100).is_err());
    }

    #[test]
    fn sign_flip_maps_condensates_of_paired_levels() {
        let g = Graph::path(4).unwrap();
        let sides = g.bipartition().unwrap();
        let sd = eigendecompose(&g);
        let b = enumerate_basis(4, 3).unwrap();
        let plus = condensate_state(&sd.state(0), &b).unwrap();
        let minus = condensate_state(&sd.state(3), &b).unwrap();
        let flipped = sublattice_sign_flip(&plus, &sides).unwrap();
        // Same state up to a global sign.
        let overlap: Complex64 = flipped
            .coefficients()
            .iter()
            .zip(minus.coefficients())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn basis_index_is_a_bijection(l in 1usize..6, n in 0usize..6) {
            let b = enumerate_basis(l, n).unwrap();
            prop_assert_eq!(b.len() as u128, basis_size(l, n));
            let mut seen = HashSet::new();
            for (k, s) in b.states().enumerate() {
                prop_assert_eq!(s.iter().sum::<u32>() as usize, n);
                prop_assert_eq!(b.index_of(s), Some(k));
                prop_assert!(seen.insert(s.to_vec()));
            }
            let v: Vec<&[u32]> = b.states().collect();
            prop_assert!(v.windows(2).all(|w| w[0] > w[1]));
        }

        #[test]
        fn condensate_marginal_is_binomial(
            l in 2usize..5,
            n in 1usize..5,
            raw in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4),
            vertex in 0usize..4,
        ) {
            let vertex = vertex % l;
            let amps: Vec<Complex64> = raw[..l].iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            prop_assume!(amps.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3);
            let x = SingleParticleState::normalized(amps).unwrap();
            let b = enumerate_basis(l, n).unwrap();
            let psi = condensate_state(&x, &b).unwrap();
            prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
            let brute = vertex_marginal(&psi, vertex).unwrap();
            let closed = vertex_distribution(x.square_amplitude(vertex).min(1.0), n).unwrap();
            prop_assert!(brute.max_abs_deviation(&closed) < 1e-10);
        }
    }
}
