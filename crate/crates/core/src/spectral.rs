//! Dominant left eigenvectors of row-stochastic matrices and the
//! state-dependent influence matrix `W(x) = diag(x) + (I - diag(x)) C`.

use nalgebra::DVector;

use crate::dynamics::SelfWeightVector;
use crate::error::{Error, Result};
use crate::linalg::{self, SquareMatrix};
use crate::netcore::{NetworkStructure, NodeId, RelativeInteractionMatrix};

/// Residual target `‖vᵀM − vᵀ‖∞` for eigenvector computations.
pub const SPECTRAL_TOL: f64 = 1e-12;

/// Iteration budget for the lazy power iteration on an `n x n` matrix.
pub fn max_power_iterations(n: usize, tol: f64) -> usize {
    (100.0 * n as f64 * (1.0 / tol).ln()).ceil() as usize
}

/// Left eigenvector for eigenvalue 1 of a row-stochastic matrix whose
/// eigenvalue-1 left eigenspace is one-dimensional (e.g. irreducible).
///
/// Runs power iteration on the lazy matrix `(I + M)/2` from the uniform
/// vector. The lazy matrix is aperiodic and has the same left eigenvector,
/// so periodic matrices such as rings converge too. If the iteration budget
/// runs out the eigenvector is obtained from a dense solve of
/// `(Mᵀ − I) v = 0, Σv = 1` instead.
pub fn dominant_left_eigenvector(m: &SquareMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = m.n();
    if n == 0 {
        return Err(Error::DimensionTooSmall { len: 0 });
    }
    let max_iters = max_power_iterations(n, tol);
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..max_iters {
        let u = m.left_mul(&v);
        if linalg::max_abs_diff(&u, &v) < tol {
            return Ok(normalized(u));
        }
        let next = v.iter().zip(&u).map(|(a, b)| 0.5 * (a + b)).collect();
        v = normalized(next);
    }

    let v = dense_left_eigenvector(m).ok_or(Error::NoConvergence { max_iters })?;
    if linalg::max_abs_diff(&m.left_mul(&v), &v) < tol {
        Ok(v)
    } else {
        Err(Error::NoConvergence { max_iters })
    }
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

fn dense_left_eigenvector(m: &SquareMatrix) -> Option<Vec<f64>> {
    let n = m.n();
    let mut a = m.transpose().to_nalgebra();
    for i in 0..n {
        a[(i, i)] -= 1.0;
    }
    // Replace the last (redundant) equation by the normalization Σv = 1.
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let v = linalg::solve_vec(a, b)?;
    let v: Vec<f64> = v.iter().map(|&x| x.max(0.0)).collect();
    Some(normalized(v))
}

/// Eigenvector centrality of `C`, globally and per condensation sink.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityProfile {
    /// Centrality on all `n` nodes; present when the condensation has a
    /// single sink, and zero outside it.
    pub global: Option<Vec<f64>>,
    /// Node sets of the sinks, in the order of [`NetworkStructure::sinks`].
    pub sinks: Vec<Vec<NodeId>>,
    /// `per_sink[k]` is the positive dominant left eigenvector of `C_kk`.
    pub per_sink: Vec<Vec<f64>>,
    /// `lifted[k]` is `per_sink[k]` embedded in `R^n`, zero off sink `k`.
    pub lifted: Vec<Vec<f64>>,
}

impl CentralityProfile {
    pub fn sink_count(&self) -> usize {
        self.sinks.len()
    }
}

pub fn centrality_profile(
    c: &RelativeInteractionMatrix,
    structure: &NetworkStructure,
) -> Result<CentralityProfile> {
    let n = c.n();
    let sinks = structure.sinks();
    let mut per_sink = Vec::with_capacity(sinks.len());
    let mut lifted = Vec::with_capacity(sinks.len());
    for sink in &sinks {
        let block = c.principal_submatrix(sink);
        let v = dominant_left_eigenvector(&block, SPECTRAL_TOL)?;
        let mut full = vec![0.0; n];
        for (&i, &vi) in sink.iter().zip(&v) {
            full[i] = vi;
        }
        per_sink.push(v);
        lifted.push(full);
    }
    let global = (sinks.len() == 1).then(|| lifted[0].clone());
    Ok(CentralityProfile { global, sinks, per_sink, lifted })
}

/// `W(x)` together with the self-weights it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceMatrix {
    pub entries: SquareMatrix,
    pub source_x: SelfWeightVector,
}

/// `w_ii = x_i`, `w_ij = (1 − x_i) c_ij`.
pub fn influence_matrix(c: &RelativeInteractionMatrix, x: &SelfWeightVector) -> InfluenceMatrix {
    let entries = influence_entries(c, x.values());
    InfluenceMatrix { entries, source_x: x.clone() }
}

pub(crate) fn influence_entries(c: &SquareMatrix, x: &[f64]) -> SquareMatrix {
    let n = c.n();
    let mut w = SquareMatrix::zeros(n);
    for i in 0..n {
        let scale = 1.0 - x[i];
        for (wij, &cij) in w.row_mut(i).iter_mut().zip(c.row(i)) {
            *wij = scale * cij;
        }
        w[(i, i)] = x[i];
    }
    w
}
