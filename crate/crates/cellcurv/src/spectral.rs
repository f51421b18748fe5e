//! Non-normalized Laplacian of the face-incidence graph, its full spectrum
//! via cyclic Jacobi rotations, and the diameter / first-eigenvalue bounds
//! implied by a positive curvature lower bound.

use num_traits::Zero;
use thiserror::Error;

use crate::complex::CellComplex;
use crate::lly::{self, LlyError};
use crate::rational::{rat_int, rat_to_f64, rat_usize, Rat};
use crate::transport::bfs_distances;

/// Default absolute threshold separating the zero eigenvalue cluster.
pub const DEFAULT_ZERO_EPS: f64 = 1e-9;

/// Jacobi sweep termination: off-diagonal Frobenius norm below this.
const JACOBI_OFF_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("Jacobi iteration did not converge in {0} sweeps")]
    NoConvergence(usize),
    #[error(
        "ambiguous zero/nonzero gap: eigenvalue {index} = {value:e} is below the threshold \
         {eps:e} but past the expected zero cluster; tighten the solve or adjust the threshold"
    )]
    AmbiguousGap { index: usize, value: f64, eps: f64 },
    #[error("spectrum has fewer than {0} eigenvalues")]
    TooSmall(usize),
    #[error(transparent)]
    Lly(#[from] LlyError),
}

/// Integer Laplacian D - A of the face-incidence graph, indexed by the
/// canonical cell order.
pub fn laplacian_matrix(c: &CellComplex) -> Vec<Vec<i64>> {
    let n = c.len();
    let mut m = vec![vec![0i64; n]; n];
    for i in c.cell_ids() {
        m[i][i] = c.degree(i) as i64;
        for j in c.neighbors(i) {
            m[i][j] -= 1;
        }
    }
    m
}

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Terminates when the off-diagonal Frobenius norm drops below
/// 1e-12.
#[allow(clippy::needless_range_loop)] // paired (i,j)/(k,p,q) matrix indexing
pub fn eigenvalues(matrix: &[Vec<f64>]) -> Result<Vec<f64>, SpectralError> {
    let n = matrix.len();
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(SpectralError::NotSymmetric(i, row.len()));
        }
        for j in 0..n {
            if (matrix[i][j] - matrix[j][i]).abs() > 1e-12 {
                return Err(SpectralError::NotSymmetric(i, j));
            }
        }
    }
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let off = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) >= JACOBI_OFF_TOL {
        sweeps += 1;
        if sweeps > JACOBI_MAX_SWEEPS {
            return Err(SpectralError::NoConvergence(JACOBI_MAX_SWEEPS));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < JACOBI_OFF_TOL / (n as f64 * n as f64) {
                    continue;
                }
                // classic 2x2 symmetric Schur rotation
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cos = 1.0 / (t * t + 1.0).sqrt();
                let sin = t * cos;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = cos * akp - sin * akq;
                    a[k][q] = sin * akp + cos * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = cos * apk - sin * aqk;
                    a[q][k] = sin * apk + cos * aqk;
                }
            }
        }
    }
    let mut evals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    evals.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(evals)
}

/// First eigenvalue past the zero cluster: asserts the first `components`
/// eigenvalues sit below `eps` and the next one above.
pub fn first_nonzero(spectrum: &[f64], components: usize, eps: f64) -> Result<f64, SpectralError> {
    if spectrum.len() <= components {
        return Err(SpectralError::TooSmall(components + 1));
    }
    for (i, &v) in spectrum.iter().take(components).enumerate() {
        if v.abs() >= eps {
            return Err(SpectralError::AmbiguousGap {
                index: i,
                value: v,
                eps,
            });
        }
    }
    let lam = spectrum[components];
    if lam.abs() < eps {
        return Err(SpectralError::AmbiguousGap {
            index: components,
            value: lam,
            eps,
        });
    }
    Ok(lam)
}

/// Number of connected components of the face-incidence graph.
pub fn component_count(c: &CellComplex) -> usize {
    let mut seen = vec![false; c.len()];
    let mut count = 0;
    for start in c.cell_ids() {
        if seen[start] {
            continue;
        }
        count += 1;
        for (i, d) in bfs_distances(c, start).into_iter().enumerate() {
            if d.is_some() {
                seen[i] = true;
            }
        }
    }
    count
}

/// BFS diameter of the face-incidence graph; `None` when disconnected.
pub fn diameter(c: &CellComplex) -> Option<usize> {
    let mut best = 0;
    for start in c.cell_ids() {
        for d in bfs_distances(c, start) {
            best = best.max(d?);
        }
    }
    Some(best)
}

/// The curvature-driven bounds, present only when the minimum curvature is
/// positive and the graph is connected.
#[derive(Debug, Clone)]
pub struct SpectralBounds {
    /// Diameter bound 2/kappa.
    pub myers_bound: Rat,
    pub myers_pass: bool,
    /// Lower bound d_max d_min kappa^2 / (kappa d_max + 2 (d_max - d_min)).
    pub lambda1_bound: Rat,
    pub lambda1_pass: bool,
}

/// Spectrum summary of a complex plus the curvature bounds of the
/// comparison theory.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub lambda1: f64,
    pub zero_multiplicity: usize,
    pub diameter: Option<usize>,
    pub kappa_min: Rat,
    /// `None` when kappa_min <= 0 or the graph is disconnected; the bounds
    /// presuppose a positive curvature floor.
    pub bounds: Option<SpectralBounds>,
}

/// Assembles the Laplacian, solves the spectrum, and evaluates the Myers
/// and first-eigenvalue bounds against the exact curvature minimum.
pub fn eigen_bound(c: &CellComplex, eps: f64) -> Result<SpectrumReport, SpectralError> {
    let matrix: Vec<Vec<f64>> = laplacian_matrix(c)
        .into_iter()
        .map(|row| row.into_iter().map(|x| x as f64).collect())
        .collect();
    let evals = eigenvalues(&matrix)?;
    let components = component_count(c);
    let lambda1 = first_nonzero(&evals, components, eps)?;
    let diam = diameter(c);
    let kappa_min = lly::global_lower_bound(c)?;

    let bounds = if kappa_min > Rat::zero() && components == 1 {
        let d_max = c.cell_ids().map(|i| c.degree(i)).max().unwrap_or(0);
        let d_min = c.cell_ids().map(|i| c.degree(i)).min().unwrap_or(0);
        let myers_bound = rat_int(2) / kappa_min.clone();
        let myers_pass = diam.map(|d| rat_usize(d) <= myers_bound).unwrap_or(false);
        let lambda1_bound =
            rat_usize(d_max) * rat_usize(d_min) * kappa_min.clone() * kappa_min.clone()
                / (kappa_min.clone() * rat_usize(d_max) + rat_int(2) * rat_usize(d_max - d_min));
        let lambda1_pass = lambda1 >= rat_to_f64(&lambda1_bound) - eps;
        Some(SpectralBounds {
            myers_bound,
            myers_pass,
            lambda1_bound,
            lambda1_pass,
        })
    } else {
        None
    };

    Ok(SpectrumReport {
        eigenvalues: evals,
        lambda1,
        zero_multiplicity: components,
        diameter: diam,
        kappa_min,
        bounds,
    })
}
