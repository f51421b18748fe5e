//! Neighbor-vector enumeration and the closed-form combinatorial Ricci
//! curvature, with the structural counting identity tying degrees to
//! neighbor counts.

use thiserror::Error;

use crate::complex::{CellComplex, CellId, ComplexError, FaceVector};

#[derive(Debug, Error)]
pub enum FormanError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(
        "counting identity violated at ({tau} > {sigma}): d_tau - n_tau - 1 = {lhs_tau}, \
         d_sigma - n_sigma - 1 = {lhs_sigma}, #N2 = {n2}; complex is not regular quasiconvex"
    )]
    CountingViolation {
        tau: String,
        sigma: String,
        lhs_tau: i64,
        lhs_sigma: i64,
        n2: usize,
    },
}

/// The 0- and 2-neighbor vectors of a base vector, split by which side of
/// the base pair mediates them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborSets {
    /// Vectors sharing a cell with the base with no mediating co/face.
    pub zero: Vec<FaceVector>,
    /// Vectors parallel to the base across a cell two dimensions away.
    pub two: Vec<FaceVector>,
    /// Count of 0-neighbors of the form (tau > sigma2).
    pub n_tau: usize,
    /// Count of 0-neighbors of the form (tau2 > sigma).
    pub n_sigma: usize,
}

/// Per-vector curvature bundle: the closed-form Ricci value plus the degree
/// and neighbor counts entering the comparison formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureRecord {
    pub vector: FaceVector,
    pub ric: i64,
    pub d_tau: usize,
    pub d_sigma: usize,
    pub n_tau: usize,
    pub n_sigma: usize,
    pub n2: usize,
}

fn require_vector(c: &CellComplex, v: FaceVector) -> Result<(), ComplexError> {
    if c.is_vector(v) {
        Ok(())
    } else {
        Err(ComplexError::NotAVector {
            tau: c
                .cell_ids()
                .nth(v.tau)
                .map(|i| c.label(i).to_string())
                .unwrap_or_else(|| format!("#{}", v.tau)),
            sigma: c
                .cell_ids()
                .nth(v.sigma)
                .map(|i| c.label(i).to_string())
                .unwrap_or_else(|| format!("#{}", v.sigma)),
        })
    }
}

fn cofaces_of(c: &CellComplex, x: CellId) -> Vec<CellId> {
    c.cofaces(x).iter().map(|(t, _)| *t).collect()
}

fn faces_of(c: &CellComplex, x: CellId) -> Vec<CellId> {
    c.faces(x).iter().map(|(s, _)| *s).collect()
}

/// Enumerates the 0- and 2-neighbor vectors of `v`.
///
/// A vector (tau' > sigma) is a 0-neighbor when tau' shares no coface with
/// tau; (tau > sigma') is a 0-neighbor when sigma' shares no face with
/// sigma. At the bottom level there are no faces at all, so the latter
/// condition is vacuous and every sibling (tau > sigma') counts.
pub fn neighbor_sets(c: &CellComplex, v: FaceVector) -> Result<NeighborSets, ComplexError> {
    require_vector(c, v)?;
    let FaceVector { tau, sigma } = v;
    let mut zero = Vec::new();
    let mut two = Vec::new();

    let tau_cofaces = cofaces_of(c, tau);
    let mut n_sigma = 0;
    for t2 in cofaces_of(c, sigma) {
        if t2 == tau {
            continue;
        }
        let shares_coface = cofaces_of(c, t2).iter().any(|m| tau_cofaces.contains(m));
        if !shares_coface {
            zero.push(FaceVector::new(t2, sigma));
            n_sigma += 1;
        }
    }

    let sigma_faces = faces_of(c, sigma);
    let mut n_tau = 0;
    for s2 in faces_of(c, tau) {
        if s2 == sigma {
            continue;
        }
        let shares_face = faces_of(c, s2).iter().any(|r| sigma_faces.contains(r));
        if !shares_face {
            zero.push(FaceVector::new(tau, s2));
            n_tau += 1;
        }
    }

    // (mu > tau'): mu > tau, mu > tau' > sigma, tau' != tau
    for mu in cofaces_of(c, tau) {
        for t2 in faces_of(c, mu) {
            if t2 != tau && faces_of(c, t2).contains(&sigma) {
                two.push(FaceVector::new(mu, t2));
            }
        }
    }
    // (sigma' > rho): tau > sigma' > rho, sigma > rho, sigma' != sigma
    for rho in faces_of(c, sigma) {
        for s2 in cofaces_of(c, rho) {
            if s2 != sigma && faces_of(c, tau).contains(&s2) {
                two.push(FaceVector::new(s2, rho));
            }
        }
    }

    zero.sort();
    two.sort();
    two.dedup();
    Ok(NeighborSets {
        zero,
        two,
        n_tau,
        n_sigma,
    })
}

/// Combinatorial Ricci curvature of a vector: 2 minus its 0-neighbor count.
pub fn ric(c: &CellComplex, v: FaceVector) -> Result<i64, ComplexError> {
    Ok(2 - neighbor_sets(c, v)?.zero.len() as i64)
}

/// Degree of a cell in the face-incidence graph.
pub fn degree(c: &CellComplex, cell: CellId) -> usize {
    c.degree(cell)
}

/// Builds the curvature record for `v` and asserts the counting identity
/// d_tau - n_tau - 1 = d_sigma - n_sigma - 1 = #N2.
pub fn counting_check(c: &CellComplex, v: FaceVector) -> Result<CurvatureRecord, FormanError> {
    let ns = neighbor_sets(c, v)?;
    let d_tau = c.degree(v.tau);
    let d_sigma = c.degree(v.sigma);
    let n2 = ns.two.len();
    let lhs_tau = d_tau as i64 - ns.n_tau as i64 - 1;
    let lhs_sigma = d_sigma as i64 - ns.n_sigma as i64 - 1;
    if lhs_tau != n2 as i64 || lhs_sigma != n2 as i64 {
        return Err(FormanError::CountingViolation {
            tau: c.label(v.tau).to_string(),
            sigma: c.label(v.sigma).to_string(),
            lhs_tau,
            lhs_sigma,
            n2,
        });
    }
    Ok(CurvatureRecord {
        vector: v,
        ric: 2 - ns.zero.len() as i64,
        d_tau,
        d_sigma,
        n_tau: ns.n_tau,
        n_sigma: ns.n_sigma,
        n2,
    })
}

/// Runs the counting identity over every vector; first violation aborts.
pub fn counting_check_all(c: &CellComplex) -> Result<Vec<CurvatureRecord>, FormanError> {
    c.vectors()
        .into_iter()
        .map(|v| counting_check(c, v))
        .collect()
}
