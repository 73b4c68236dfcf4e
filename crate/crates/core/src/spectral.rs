//! Symmetric eigendecomposition of adjacency (and many-body) matrices.
//!
//! The solver is a cyclic Jacobi sweep. Results are sorted by descending
//! eigenvalue and every eigenvector is sign-fixed so its largest-magnitude
//! entry is positive (lowest index wins a tie), which makes the output
//! reproducible run to run.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Relative stopping threshold on the off-diagonal Frobenius norm.
pub const OFFDIAG_TOL: f64 = 1e-12;

/// Default tolerance for grouping eigenvalues into degenerate levels.
pub const DEGENERACY_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

fn offdiag_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
///
/// Returns the (unsorted) eigenvalues and a matrix whose *columns* are the
/// matching orthonormal eigenvectors. Only the lower-left/upper-right
/// symmetry of `a` is assumed, not checked.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut a = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let threshold = OFFDIAG_TOL * (1.0 + a.norm());

    for _ in 0..MAX_SWEEPS {
        if offdiag_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // A <- A J, then A <- J^T A.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)]).collect(), v)
}

/// Eigenpairs sorted by descending eigenvalue; row `k` of `eigenvectors`
/// belongs to `eigenvalues[k]`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    /// Diagonalizes an arbitrary real symmetric matrix.
    pub fn of_symmetric(matrix: &DMatrix<f64>) -> Self {
        let n = matrix.nrows();
        let (values, columns) = jacobi_eigen(matrix);
        let mut order: Vec<usize> = (0..n).collect();
        // Stable sort keeps the solver order inside exact ties.
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));

        let mut eigenvectors = DMatrix::zeros(n, n);
        for (row, &col) in order.iter().enumerate() {
            let mut vec: Vec<f64> = columns.column(col).iter().copied().collect();
            fix_sign(&mut vec);
            for (j, x) in vec.into_iter().enumerate() {
                eigenvectors[(row, j)] = x;
            }
        }
        SpectralDecomposition {
            eigenvalues: order.iter().map(|&k| values[k]).collect(),
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Row-k-is-eigenvector matrix `U`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.row(k).iter().copied().collect()
    }

    /// `|U_{k,i}|^2`.
    pub fn square_amplitude(&self, k: usize, vertex: usize) -> f64 {
        let x = self.eigenvectors[(k, vertex)];
        x * x
    }

    /// Eigenvector `k` as a single-particle wavefunction.
    pub fn state(&self, k: usize) -> SingleParticleState {
        SingleParticleState::from_real_unchecked(self.eigenvector(k))
    }

    /// Index groups of eigenvalues equal within `tol`, formed by chaining
    /// neighbours in the sorted spectrum.
    pub fn degeneracy_classes(&self, tol: f64) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (k, &w) in self.eigenvalues.iter().enumerate() {
            match classes.last_mut() {
                Some(last) if (self.eigenvalues[*last.last().unwrap()] - w).abs() <= tol => {
                    last.push(k)
                }
                _ => classes.push(vec![k]),
            }
        }
        classes
    }

    /// Diagonal entry `(P_λ)_{ii}` of the projector onto the span of the
    /// eigenvectors in `class`; the largest `|x_i|^2` over unit vectors of
    /// that eigenspace.
    pub fn projector_diagonal(&self, class: &[usize], vertex: usize) -> f64 {
        class
            .iter()
            .map(|&k| self.square_amplitude(k, vertex))
            .sum()
    }

    /// `max |M - U^T diag(ω) U|` entrywise.
    pub fn reconstruction_error(&self, matrix: &DMatrix<f64>) -> f64 {
        let u = &self.eigenvectors;
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.eigenvalues));
        let rebuilt = u.transpose() * d * u;
        (matrix - rebuilt).amax()
    }

    /// `max |U U^T - I|` entrywise.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.dim();
        let u = &self.eigenvectors;
        (u * u.transpose() - DMatrix::<f64>::identity(n, n)).amax()
    }
}

fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tie = 1e-12 * max.max(f64::MIN_POSITIVE);
    if let Some(lead) = v.iter().position(|x| x.abs() >= max - tie) {
        if v[lead] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Eigendecomposition of the adjacency matrix of `g`.
pub fn eigendecompose(g: &Graph) -> SpectralDecomposition {
    SpectralDecomposition::of_symmetric(&g.adjacency())
}

/// Perron vector of a connected graph: the elementwise positive eigenvector
/// of the largest adjacency eigenvalue.
pub fn ground_eigenvector(sd: &SpectralDecomposition, g: &Graph) -> Result<SingleParticleState> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if sd.dim() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            got: sd.dim(),
        });
    }
    if sd.dim() > 1 {
        let gap = sd.eigenvalues[0] - sd.eigenvalues[1];
        if gap <= DEGENERACY_TOL {
            return Err(Error::DegenerateGround { gap });
        }
    }
    let v = sd.eigenvector(0);
    if v.iter().any(|&x| x <= 0.0) {
        return Err(Error::InvalidArgument(
            "Perron vector has a non-positive entry".into(),
        ));
    }
    Ok(SingleParticleState::from_real_unchecked(v))
}

/// Ring eigenvalue `2 cos(2πk/L)` of Fourier mode `k`.
pub fn fourier_eigenvalue(vertex_count: usize, k: usize) -> f64 {
    2.0 * (2.0 * PI * k as f64 / vertex_count as f64).cos()
}

/// Plane waves `x_j = L^{-1/2} e^{2πi kj/L}`, `k = 0..L`, which diagonalize
/// the `L`-ring.
pub fn fourier_modes(vertex_count: usize) -> Result<Vec<SingleParticleState>> {
    if vertex_count < 3 {
        return Err(Error::TooFewVertices {
            kind: "ring",
            min: 3,
            got: vertex_count,
        });
    }
    let l = vertex_count as f64;
    let norm = l.sqrt().recip();
    Ok((0..vertex_count)
        .map(|k| {
            let amps = (0..vertex_count)
                .map(|j| Complex64::from_polar(norm, 2.0 * PI * (k * j) as f64 / l))
                .collect();
            SingleParticleState { amplitudes: amps }
        })
        .collect())
}

/// Normalized single-particle wavefunction `x ∈ C^L`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleParticleState {
    amplitudes: Vec<Complex64>,
}

impl SingleParticleState {
    pub const NORM_TOL: f64 = 1e-12;

    /// Accepts `amplitudes` if `Σ|x_j|^2 = 1` within [`Self::NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if amplitudes.is_empty() || (n2 - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(SingleParticleState { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n * n));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub fn from_real(amplitudes: Vec<f64>) -> Result<Self> {
        Self::new(amplitudes.into_iter().map(Complex64::from).collect())
    }

    fn from_real_unchecked(amplitudes: Vec<f64>) -> Self {
        SingleParticleState {
            amplitudes: amplitudes.into_iter().map(Complex64::from).collect(),
        }
    }

    /// All weight on vertex `j`.
    pub fn site(vertex_count: usize, j: usize) -> Result<Self> {
        if j >= vertex_count {
            return Err(Error::NoSuchVertex {
                vertex: j,
                vertex_count,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); vertex_count];
        amps[j] = Complex64::new(1.0, 0.0);
        Ok(SingleParticleState { amplitudes: amps })
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|x_i|^2`, the occupation probability of vertex `i`.
    pub fn square_amplitude(&self, vertex: usize) -> f64 {
        self.amplitudes[vertex].norm_sqr()
    }
}
