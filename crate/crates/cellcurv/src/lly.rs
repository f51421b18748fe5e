//! Lin-Lu-Yau curvature on the face-incidence graph: the alpha-Ricci
//! curvature, its limit as the lazy mass approaches 1, and machine
//! verification of the comparison identity against the combinatorial
//! curvature.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::complex::{self, CellComplex, CellId, ComplexError, FaceVector};
use crate::forman::{self, FormanError};
use crate::rational::{rat, rat_int, rat_usize, Rat};
use crate::transport::{self, TransportError};

/// Refinement cap for the limit computation; each step halves the distance
/// of alpha to 1.
const LIMIT_REFINEMENT_CAP: usize = 40;

#[derive(Debug, Error)]
pub enum LlyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Forman(#[from] FormanError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("alpha-Ricci curvature needs two distinct cells")]
    SameCell,
    #[error("alpha must lie in [0, 1), got {0}")]
    BadAlpha(String),
    #[error("cells `{a}` and `{b}` are in different components")]
    Disconnected { a: String, b: String },
    #[error(
        "limit not stabilized after {iterations} refinements at ({tau} > {sigma}); \
         refusing to report an unconverged value"
    )]
    LimitNotStabilized {
        tau: String,
        sigma: String,
        iterations: usize,
    },
    #[error("complex failed structural validation; curvature is undefined:\n{0}")]
    NotQuasiconvex(String),
}

/// Per-vector verification bundle: the transport-side curvature, the probe
/// evaluations it came from, and the closed-form comparison value.
#[derive(Debug, Clone)]
pub struct LlyRecord {
    pub vector: FaceVector,
    pub kappa: Rat,
    pub kappa_alpha_samples: Vec<(Rat, Rat)>,
    pub formula_value: Rat,
}

impl LlyRecord {
    pub fn matches(&self) -> bool {
        self.kappa == self.formula_value
    }
}

/// alpha-Ricci curvature of two distinct cells:
/// 1 - W(m^alpha_a, m^alpha_b) / d(a, b).
pub fn alpha_ricci(c: &CellComplex, a: CellId, b: CellId, alpha: &Rat) -> Result<Rat, LlyError> {
    if a == b {
        return Err(LlyError::SameCell);
    }
    if alpha < &Rat::zero() || alpha >= &Rat::one() {
        return Err(LlyError::BadAlpha(alpha.to_string()));
    }
    let dist = transport::graph_distance(c, a, b).ok_or_else(|| LlyError::Disconnected {
        a: c.label(a).to_string(),
        b: c.label(b).to_string(),
    })?;
    let mu = transport::measure_alpha(c, a, alpha)?;
    let nu = transport::measure_alpha(c, b, alpha)?;
    let w = transport::wasserstein(c, &mu, &nu)?.value;
    Ok(Rat::one() - w / rat_usize(dist))
}

/// h(alpha) = kappa_alpha / (1 - alpha); monotone non-decreasing on [0, 1)
/// with limit the LLY curvature.
pub fn h_value(c: &CellComplex, a: CellId, b: CellId, alpha: &Rat) -> Result<Rat, LlyError> {
    Ok(alpha_ricci(c, a, b, alpha)? / (Rat::one() - alpha.clone()))
}

fn probe_alpha(d_max: usize, step: usize) -> Rat {
    // (2^step D) / (2^step D + 1)
    let scaled = rat_usize(d_max) * Rat::from_integer(num_bigint::BigInt::from(1u64) << step);
    scaled.clone() / (scaled + Rat::one())
}

/// LLY curvature of a vector: the limit of h(alpha) as alpha approaches 1,
/// computed by exact agreement of two successive probes (alpha chosen
/// relative to the larger degree of the pair), refined geometrically
/// toward 1 when they disagree.
///
/// Returns the stabilized value and the probe samples that witnessed it.
pub fn lly_ricci_with_samples(
    c: &CellComplex,
    v: FaceVector,
) -> Result<(Rat, Vec<(Rat, Rat)>), LlyError> {
    if !c.is_vector(v) {
        return Err(ComplexError::NotAVector {
            tau: c.label(v.tau).to_string(),
            sigma: c.label(v.sigma).to_string(),
        }
        .into());
    }
    let d_max = c.degree(v.tau).max(c.degree(v.sigma));
    let alpha0 = probe_alpha(d_max, 0);
    let k0 = alpha_ricci(c, v.tau, v.sigma, &alpha0)?;
    let mut h_prev = k0.clone() / (Rat::one() - alpha0.clone());
    let mut samples = vec![(alpha0, k0)];
    for step in 1..=LIMIT_REFINEMENT_CAP {
        let alpha = probe_alpha(d_max, step);
        let k = alpha_ricci(c, v.tau, v.sigma, &alpha)?;
        let h = k.clone() / (Rat::one() - alpha.clone());
        samples.push((alpha, k));
        if h == h_prev {
            return Ok((h, samples));
        }
        h_prev = h;
    }
    Err(LlyError::LimitNotStabilized {
        tau: c.label(v.tau).to_string(),
        sigma: c.label(v.sigma).to_string(),
        iterations: LIMIT_REFINEMENT_CAP,
    })
}

/// LLY curvature of a vector (see [`lly_ricci_with_samples`]).
pub fn lly_ricci(c: &CellComplex, v: FaceVector) -> Result<Rat, LlyError> {
    Ok(lly_ricci_with_samples(c, v)?.0)
}

/// Right-hand side of the comparison identity:
/// Ric/(d_max) + 2 (1/d_min - 1/d_max) + d_min/d_max - 1.
pub fn comparison_formula(c: &CellComplex, v: FaceVector) -> Result<Rat, LlyError> {
    let rec = forman::counting_check(c, v)?;
    let d_min = rat_usize(rec.d_tau.min(rec.d_sigma));
    let d_max = rat_usize(rec.d_tau.max(rec.d_sigma));
    Ok(rat_int(rec.ric) / d_max.clone()
        + rat_int(2) * (Rat::one() / d_min.clone() - Rat::one() / d_max.clone())
        + d_min / d_max
        - Rat::one())
}

/// Verifies the comparison identity on every vector of a validated
/// quasiconvex complex. Mismatching records are returned, never swallowed.
pub fn verify_theorem(c: &CellComplex) -> Result<Vec<LlyRecord>, LlyError> {
    let report = complex::validate(c);
    if !report.regular_quasiconvex() {
        return Err(LlyError::NotQuasiconvex(report.to_string()));
    }
    let mut out = Vec::new();
    for v in c.vectors() {
        let (kappa, samples) = lly_ricci_with_samples(c, v)?;
        let formula_value = comparison_formula(c, v)?;
        out.push(LlyRecord {
            vector: v,
            kappa,
            kappa_alpha_samples: samples,
            formula_value,
        });
    }
    Ok(out)
}

/// Minimum LLY curvature over all vectors. By the Lin-Lu-Yau lemma this
/// bounds the curvature of every pair of cells from below, so pairs are
/// not enumerated.
pub fn global_lower_bound(c: &CellComplex) -> Result<Rat, LlyError> {
    let mut best: Option<Rat> = None;
    for v in c.vectors() {
        let k = lly_ricci(c, v)?;
        best = Some(match best {
            None => k,
            Some(b) => {
                if k < b {
                    k
                } else {
                    b
                }
            }
        });
    }
    best.ok_or_else(|| {
        LlyError::NotQuasiconvex("complex has no vectors; no curvature to bound".into())
    })
}

/// The sampled alpha grid used by the lemma checks: 1/4, 1/2, 3/4, 7/8 and
/// D/(D+1), sorted and deduplicated.
pub fn default_alpha_grid(d_max: usize) -> Vec<Rat> {
    let mut grid = vec![
        rat(1, 4),
        rat(1, 2),
        rat(3, 4),
        rat(7, 8),
        probe_alpha(d_max, 0),
    ];
    grid.sort();
    grid.dedup();
    grid
}

/// The graph of a complex is 2-colorable by dimension parity; equivalently
/// it has no odd cycle. Returns false only if some vector joins cells of
/// equal parity, which well-formed complexes cannot produce.
pub fn bipartite_by_dim_parity(c: &CellComplex) -> bool {
    c.vectors()
        .into_iter()
        .all(|v| (c.dim_of(v.tau) + c.dim_of(v.sigma)) % 2 == 1)
}
