//! Exact optimal transport on the face-incidence graph: lazy random-walk
//! measures, Wasserstein distance with primal/dual certificates, the
//! explicit coupling tables, and the Lipschitz dual witnesses.
//!
//! All arithmetic is exact rational; graph distances and dual potentials
//! are integers, so every certificate equality is checked with zero
//! tolerance.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::{CellComplex, CellId, ComplexError, FaceVector};
use crate::forman::{self, FormanError};
use crate::rational::{rat_int, rat_usize, Rat};

#[derive(Debug, Error)]
pub enum TransportError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Forman(#[from] FormanError),
    #[error("alpha must lie in [0, 1], got {0}")]
    BadAlpha(String),
    #[error("cell `{0}` has degree 0; the measure around it is undefined")]
    UndefinedMeasure(String),
    #[error("measure is not a probability: total mass {0}")]
    NotProbability(String),
    #[error("measure has a negative mass at `{0}`")]
    NegativeMass(String),
    #[error("supports are not in one connected component: `{a}` cannot reach `{b}`")]
    DisconnectedSupports { a: String, b: String },
    #[error("coupling entry ({row}, {col}) = {value} lies outside [0, 1]; alpha is below the feasible range")]
    AlphaInfeasible {
        row: String,
        col: String,
        value: String,
    },
    #[error("coupling marginal mismatch at `{cell}` ({side}): got {got}, expected {expected}")]
    MarginalMismatch {
        cell: String,
        side: &'static str,
        got: String,
        expected: String,
    },
    #[error("dual witness is not 1-Lipschitz: |f({a}) - f({b})| = {diff} > d = {dist}")]
    WitnessNotLipschitz {
        a: String,
        b: String,
        diff: i64,
        dist: usize,
    },
    #[error("internal solver invariant failed: {0}")]
    Internal(String),
}

// ---------------------------------------------------------------------------
// Measures and graph metric
// ---------------------------------------------------------------------------

/// Probability measure on the cells of a complex, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    mass: BTreeMap<CellId, Rat>,
}

impl Measure {
    pub fn from_entries(
        c: &CellComplex,
        entries: impl IntoIterator<Item = (CellId, Rat)>,
    ) -> Result<Self, TransportError> {
        let mut mass = BTreeMap::new();
        for (cell, m) in entries {
            if m.is_negative() {
                return Err(TransportError::NegativeMass(c.label(cell).to_string()));
            }
            if !m.is_zero() {
                *mass.entry(cell).or_insert_with(Rat::zero) += m;
            }
        }
        let me = Self { mass };
        let total = me.total();
        if !total.is_one() {
            return Err(TransportError::NotProbability(total.to_string()));
        }
        Ok(me)
    }

    pub fn dirac(cell: CellId) -> Self {
        let mut mass = BTreeMap::new();
        mass.insert(cell, Rat::one());
        Self { mass }
    }

    pub fn total(&self) -> Rat {
        self.mass.values().cloned().sum()
    }

    pub fn get(&self, cell: CellId) -> Rat {
        self.mass.get(&cell).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn support(&self) -> Vec<CellId> {
        self.mass.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (CellId, &Rat)> {
        self.mass.iter().map(|(k, v)| (*k, v))
    }
}

/// Lazy random-walk measure around `sigma`: mass alpha at the cell itself,
/// the rest spread uniformly over its faces and cofaces.
pub fn measure_alpha(
    c: &CellComplex,
    sigma: CellId,
    alpha: &Rat,
) -> Result<Measure, TransportError> {
    if alpha.is_negative() || alpha > &Rat::one() {
        return Err(TransportError::BadAlpha(alpha.to_string()));
    }
    let d = c.degree(sigma);
    if d == 0 {
        return Err(TransportError::UndefinedMeasure(c.label(sigma).to_string()));
    }
    let rest = (Rat::one() - alpha.clone()) / rat_usize(d);
    let mut entries = vec![(sigma, alpha.clone())];
    for n in c.neighbors(sigma) {
        entries.push((n, rest.clone()));
    }
    Measure::from_entries(c, entries)
}

/// BFS distances in the face-incidence graph from one cell; `None` marks
/// unreachable cells.
pub fn bfs_distances(c: &CellComplex, start: CellId) -> Vec<Option<usize>> {
    let mut dist = vec![None; c.len()];
    dist[start] = Some(0);
    let mut frontier = vec![start];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for u in frontier {
            for v in c.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(d);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Shortest-path distance between two cells in the face-incidence graph;
/// `None` when they lie in different components.
pub fn graph_distance(c: &CellComplex, a: CellId, b: CellId) -> Option<usize> {
    bfs_distances(c, a)[b]
}

// ---------------------------------------------------------------------------
// Couplings and certificates
// ---------------------------------------------------------------------------

/// Joint mass assignment with prescribed marginals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling {
    /// Nonzero joint masses, keyed by (source cell, target cell).
    pub flow: BTreeMap<(CellId, CellId), Rat>,
    pub source: Measure,
    pub target: Measure,
}

impl Coupling {
    /// Exact marginal conservation: row sums reproduce the source, column
    /// sums the target.
    pub fn verify_marginals(&self, c: &CellComplex) -> Result<(), TransportError> {
        let mut rows: BTreeMap<CellId, Rat> = BTreeMap::new();
        let mut cols: BTreeMap<CellId, Rat> = BTreeMap::new();
        for (&(x, y), m) in &self.flow {
            *rows.entry(x).or_insert_with(Rat::zero) += m.clone();
            *cols.entry(y).or_insert_with(Rat::zero) += m.clone();
        }
        let check = |got: &BTreeMap<CellId, Rat>,
                     want: &Measure,
                     side: &'static str|
         -> Result<(), TransportError> {
            let cells: std::collections::BTreeSet<CellId> =
                got.keys().copied().chain(want.support()).collect();
            for cell in cells {
                let g = got.get(&cell).cloned().unwrap_or_else(Rat::zero);
                let w = want.get(cell);
                if g != w {
                    return Err(TransportError::MarginalMismatch {
                        cell: c.label(cell).to_string(),
                        side,
                        got: g.to_string(),
                        expected: w.to_string(),
                    });
                }
            }
            Ok(())
        };
        check(&rows, &self.source, "source")?;
        check(&cols, &self.target, "target")
    }

    /// Transport cost sum of flow times graph distance.
    pub fn cost(&self, c: &CellComplex) -> Result<Rat, TransportError> {
        let mut acc = Rat::zero();
        let mut rows: BTreeMap<CellId, Vec<Option<usize>>> = BTreeMap::new();
        for (&(x, y), m) in &self.flow {
            let dist =
                rows.entry(x).or_insert_with(|| bfs_distances(c, x))[y].ok_or_else(|| {
                    TransportError::DisconnectedSupports {
                        a: c.label(x).to_string(),
                        b: c.label(y).to_string(),
                    }
                })?;
            acc += m.clone() * rat_usize(dist);
        }
        Ok(acc)
    }
}

/// Exact Wasserstein value with an optimal coupling and a matching
/// 1-Lipschitz dual potential; primal and dual agree exactly.
#[derive(Debug, Clone)]
pub struct TransportCertificate {
    pub value: Rat,
    pub optimal_coupling: Coupling,
    pub dual_witness: BTreeMap<CellId, Rat>,
    pub primal_cost: Rat,
    pub dual_value: Rat,
}

/// Exact 1-Wasserstein distance between two probability measures on the
/// complex, solved as a transportation problem over the supports by
/// successive shortest paths with integer potentials.
pub fn wasserstein(
    c: &CellComplex,
    mu: &Measure,
    nu: &Measure,
) -> Result<TransportCertificate, TransportError> {
    for (m, name) in [(mu, "source"), (nu, "target")] {
        let total = m.total();
        if !total.is_one() {
            return Err(TransportError::NotProbability(format!("{total} ({name})")));
        }
    }
    let sources = mu.support();
    let targets = nu.support();
    let m = sources.len();
    let n = targets.len();

    // distance rows from every support cell (both sides; reused by the witness)
    let mut rows: BTreeMap<CellId, Vec<Option<usize>>> = BTreeMap::new();
    for &cell in sources.iter().chain(&targets) {
        rows.entry(cell).or_insert_with(|| bfs_distances(c, cell));
    }
    let mut cost = vec![vec![0i64; n]; m];
    for (i, &x) in sources.iter().enumerate() {
        for (j, &y) in targets.iter().enumerate() {
            cost[i][j] = rows[&x][y].ok_or_else(|| TransportError::DisconnectedSupports {
                a: c.label(x).to_string(),
                b: c.label(y).to_string(),
            })? as i64;
        }
    }

    // successive shortest paths; potentials keep reduced costs nonnegative
    let total_nodes = m + n;
    let mut flow = vec![vec![Rat::zero(); n]; m];
    let mut supply: Vec<Rat> = sources.iter().map(|&x| mu.get(x)).collect();
    let mut demand: Vec<Rat> = targets.iter().map(|&y| nu.get(y)).collect();
    let mut pot = vec![0i64; total_nodes];
    const INF: i64 = i64::MAX / 4;

    while supply.iter().any(|s| !s.is_zero()) {
        let mut dist = vec![INF; total_nodes];
        let mut parent: Vec<Option<usize>> = vec![None; total_nodes];
        let mut done = vec![false; total_nodes];
        for (i, s) in supply.iter().enumerate() {
            if !s.is_zero() {
                dist[i] = 0;
            }
        }
        loop {
            let mut u = None;
            let mut best = INF;
            for v in 0..total_nodes {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = Some(v);
                }
            }
            let Some(u) = u else { break };
            done[u] = true;
            if u < m {
                for j in 0..n {
                    let rc = cost[u][j] + pot[u] - pot[m + j];
                    debug_assert!(rc >= 0);
                    if dist[u] + rc < dist[m + j] {
                        dist[m + j] = dist[u] + rc;
                        parent[m + j] = Some(u);
                    }
                }
            } else {
                let j = u - m;
                for i in 0..m {
                    if flow[i][j].is_zero() {
                        continue;
                    }
                    let rc = -cost[i][j] + pot[m + j] - pot[i];
                    debug_assert!(rc >= 0);
                    if dist[u] + rc < dist[i] {
                        dist[i] = dist[u] + rc;
                        parent[i] = Some(u);
                    }
                }
            }
        }

        let mut best_t = None;
        for j in 0..n {
            if demand[j].is_zero() || dist[m + j] == INF {
                continue;
            }
            if best_t.is_none_or(|bt: usize| dist[m + j] < dist[m + bt]) {
                best_t = Some(j);
            }
        }
        let Some(tj) = best_t else {
            return Err(TransportError::Internal(
                "no augmenting path though supply remains".into(),
            ));
        };

        // trace the path back to a supplied source
        let mut path = Vec::new();
        let mut node = m + tj;
        while let Some(prev) = parent[node] {
            path.push((prev, node));
            node = prev;
        }
        let src = node;
        if src >= m || supply[src].is_zero() {
            return Err(TransportError::Internal(
                "path does not start at a supplied source".into(),
            ));
        }

        let mut bottleneck = if supply[src] < demand[tj] {
            supply[src].clone()
        } else {
            demand[tj].clone()
        };
        for &(u, v) in &path {
            if u >= m {
                // backward arc (target u-m -> source v)
                let f = &flow[v][u - m];
                if f < &bottleneck {
                    bottleneck = f.clone();
                }
            }
        }
        if bottleneck.is_zero() {
            return Err(TransportError::Internal("zero bottleneck".into()));
        }
        for &(u, v) in &path {
            if u < m {
                flow[u][v - m] += bottleneck.clone();
            } else {
                flow[v][u - m] -= bottleneck.clone();
            }
        }
        supply[src] -= bottleneck.clone();
        demand[tj] -= bottleneck;

        for v in 0..total_nodes {
            if dist[v] < INF {
                pot[v] += dist[v];
            }
        }
    }

    let mut primal = Rat::zero();
    let mut flow_map = BTreeMap::new();
    for i in 0..m {
        for j in 0..n {
            if !flow[i][j].is_zero() {
                primal += flow[i][j].clone() * rat_int(cost[i][j]);
                flow_map.insert((sources[i], targets[j]), flow[i][j].clone());
            }
        }
    }

    // single-potential Kantorovich witness from the LP duals:
    // f(z) = min over target cells y of d(z, y) - v(y), with v(y) = pot(y).
    let v_dual: Vec<i64> = (0..n).map(|j| pot[m + j]).collect();
    let mut witness: BTreeMap<CellId, Rat> = BTreeMap::new();
    let mut witness_int: BTreeMap<CellId, i64> = BTreeMap::new();
    for &z in sources.iter().chain(&targets) {
        if witness_int.contains_key(&z) {
            continue;
        }
        let mut best = i64::MAX;
        for (j, &y) in targets.iter().enumerate() {
            let d = rows[&z][y].ok_or_else(|| TransportError::DisconnectedSupports {
                a: c.label(z).to_string(),
                b: c.label(y).to_string(),
            })? as i64;
            best = best.min(d - v_dual[j]);
        }
        witness_int.insert(z, best);
        witness.insert(z, rat_int(best));
    }
    // 1-Lipschitz over all support pairs
    for &a in witness_int.keys() {
        for &b in witness_int.keys() {
            if a == b {
                continue;
            }
            if let Some(d) = rows[&a][b] {
                let diff = (witness_int[&a] - witness_int[&b]).abs();
                if diff > d as i64 {
                    return Err(TransportError::WitnessNotLipschitz {
                        a: c.label(a).to_string(),
                        b: c.label(b).to_string(),
                        diff,
                        dist: d,
                    });
                }
            }
        }
    }
    let mut dual_value = Rat::zero();
    for (cell, f) in &witness {
        dual_value += f.clone() * (mu.get(*cell) - nu.get(*cell));
    }
    if dual_value != primal {
        return Err(TransportError::Internal(format!(
            "strong duality violated: primal {primal}, dual {dual_value}"
        )));
    }

    let coupling = Coupling {
        flow: flow_map,
        source: mu.clone(),
        target: nu.clone(),
    };
    coupling.verify_marginals(c)?;
    Ok(TransportCertificate {
        value: primal.clone(),
        optimal_coupling: coupling,
        dual_witness: witness,
        primal_cost: primal,
        dual_value,
    })
}

// ---------------------------------------------------------------------------
// The explicit coupling and dual witness around a vector
// ---------------------------------------------------------------------------

/// Cells around a vector arranged for the explicit table: `s` is the
/// lower-degree center (the table's thin side), `t` the higher-degree one.
struct VectorGeometry {
    s: CellId,
    t: CellId,
    d_s: usize,
    d_t: usize,
    /// 0-neighbor cells adjacent to s.
    x_cells: Vec<CellId>,
    /// 0-neighbor cells adjacent to t.
    y_cells: Vec<CellId>,
    /// 2-neighbor pairs (cell adjacent to s, cell adjacent to t).
    pairs: Vec<(CellId, CellId)>,
    /// True when s is the bottom cell, i.e. the primed table orientation.
    swapped: bool,
}

fn vector_geometry(c: &CellComplex, v: FaceVector) -> Result<VectorGeometry, TransportError> {
    let rec = forman::counting_check(c, v)?;
    let ns = forman::neighbor_sets(c, v)?;
    // unprimed orientation when d_sigma >= d_tau
    let swapped = rec.d_tau > rec.d_sigma;
    let (s, t) = if swapped {
        (v.sigma, v.tau)
    } else {
        (v.tau, v.sigma)
    };
    let mut x_cells = Vec::new();
    let mut y_cells = Vec::new();
    for z in &ns.zero {
        if z.tau == v.tau {
            // (tau > sigma2): sigma2 is adjacent to tau
            if swapped {
                y_cells.push(z.sigma);
            } else {
                x_cells.push(z.sigma);
            }
        } else {
            // (tau2 > sigma): tau2 is adjacent to sigma
            if swapped {
                x_cells.push(z.tau);
            } else {
                y_cells.push(z.tau);
            }
        }
    }
    let mut pairs = Vec::new();
    for w in &ns.two {
        // upper (mu > tau1): mu adjacent to tau, tau1 adjacent to sigma;
        // lower (sigma1 > rho): sigma1 adjacent to tau, rho adjacent to sigma.
        let (tau_side, sigma_side) = (w.tau, w.sigma);
        if swapped {
            pairs.push((sigma_side, tau_side));
        } else {
            pairs.push((tau_side, sigma_side));
        }
    }
    if x_cells.len() > y_cells.len() {
        return Err(TransportError::Internal(
            "0-neighbor counts inconsistent with degree ordering".into(),
        ));
    }
    Ok(VectorGeometry {
        s,
        t,
        d_s: c.degree(s),
        d_t: c.degree(t),
        x_cells,
        y_cells,
        pairs,
        swapped,
    })
}

/// Smallest alpha for which every entry of the explicit table lies in
/// [0, 1]. Zero except in the degenerate cases where the center keeps mass
/// in place.
pub fn min_feasible_alpha(c: &CellComplex, v: FaceVector) -> Result<Rat, TransportError> {
    let g = vector_geometry(c, v)?;
    if g.x_cells.is_empty() {
        // entry (s, t) = alpha - (1-alpha)/d_t must be nonnegative
        Ok(Rat::one() / rat_usize(g.d_t + 1))
    } else {
        Ok(Rat::zero())
    }
}

/// The explicit coupling between the measures around the two cells of a
/// vector. Uses the unprimed table when d_sigma >= d_tau and the primed
/// one otherwise; when a 0-neighbor class is empty the table degenerates
/// and the centers keep mass in place. Marginals are verified exactly.
pub fn paper_coupling(
    c: &CellComplex,
    v: FaceVector,
    alpha: &Rat,
) -> Result<Coupling, TransportError> {
    if alpha.is_negative() || alpha > &Rat::one() {
        return Err(TransportError::BadAlpha(alpha.to_string()));
    }
    let g = vector_geometry(c, v)?;
    let one = Rat::one();
    let a = (one.clone() - alpha.clone()) / rat_usize(g.d_s);
    let b = (one.clone() - alpha.clone()) / rat_usize(g.d_t);
    let n_x = g.x_cells.len();
    let n_y = g.y_cells.len();

    // entries in the generic (s -> t) orientation
    let mut entries: Vec<((CellId, CellId), Rat)> = Vec::new();
    if n_x >= 1 {
        // the paper's nine-case table
        entries.push(((g.s, g.t), alpha.clone()));
        for &x in &g.x_cells {
            entries.push(((x, g.s), b.clone() / rat_usize(n_x)));
        }
        for &y in &g.y_cells {
            entries.push(((g.t, y), a.clone() / rat_usize(n_y)));
        }
        for &(u, w) in &g.pairs {
            entries.push(((u, w), b.clone()));
            for &y in &g.y_cells {
                entries.push(((u, y), (a.clone() - b.clone()) / rat_usize(n_y)));
            }
        }
        for &x in &g.x_cells {
            for &y in &g.y_cells {
                entries.push((
                    (x, y),
                    (a.clone() - b.clone() / rat_usize(n_x)) / rat_usize(n_y),
                ));
            }
        }
    } else {
        // degenerate table: no 0-neighbor cells on the thin side, so the
        // centers keep mass in place and the thin center row feeds the
        // 0-neighbor columns directly
        entries.push(((g.s, g.t), alpha.clone() - b.clone()));
        entries.push(((g.s, g.s), b.clone()));
        entries.push(((g.t, g.t), b.clone()));
        for &(u, w) in &g.pairs {
            entries.push(((u, w), b.clone()));
        }
        if n_y >= 1 {
            let spread = (a.clone() - b.clone()) / rat_usize(n_y);
            for &y in &g.y_cells {
                entries.push(((g.t, y), spread.clone()));
                for &(u, _) in &g.pairs {
                    entries.push(((u, y), spread.clone()));
                }
            }
        }
    }

    let mut flow: BTreeMap<(CellId, CellId), Rat> = BTreeMap::new();
    for ((r, col), val) in entries {
        if val.is_negative() || val > one {
            return Err(TransportError::AlphaInfeasible {
                row: c.label(if g.swapped { col } else { r }).to_string(),
                col: c.label(if g.swapped { r } else { col }).to_string(),
                value: val.to_string(),
            });
        }
        if val.is_zero() {
            continue;
        }
        let key = if g.swapped { (col, r) } else { (r, col) };
        *flow.entry(key).or_insert_with(Rat::zero) += val;
    }

    let coupling = Coupling {
        flow,
        source: measure_alpha(c, v.tau, alpha)?,
        target: measure_alpha(c, v.sigma, alpha)?,
    };
    coupling.verify_marginals(c)?;
    Ok(coupling)
}

/// The six-case integer dual witness around a vector, extended to every
/// cell by the tight Lipschitz extension f(x) = min over base cells b of
/// f(b) + d(x, b). Verified 1-Lipschitz before being returned.
pub fn paper_dual_witness(
    c: &CellComplex,
    v: FaceVector,
) -> Result<BTreeMap<CellId, i64>, TransportError> {
    let g = vector_geometry(c, v)?;
    let mut base: BTreeMap<CellId, i64> = BTreeMap::new();
    base.insert(g.s, 1);
    base.insert(g.t, 0);
    for n in c.neighbors(g.s) {
        if n != g.t {
            base.insert(n, 2);
        }
    }
    for &(_, w) in &g.pairs {
        base.insert(w, 1);
    }
    for &y in &g.y_cells {
        base.insert(y, -1);
    }
    if g.swapped {
        // the primed table pairs positively against (m_sigma - m_tau);
        // negate so the returned witness always pairs with (m_tau - m_sigma)
        for f in base.values_mut() {
            *f = -*f;
        }
    }

    // raw table must already be 1-Lipschitz for the graph metric
    let rows: BTreeMap<CellId, Vec<Option<usize>>> = base
        .keys()
        .map(|&cell| (cell, bfs_distances(c, cell)))
        .collect();
    for (&p, &fp) in &base {
        for (&q, &fq) in &base {
            if p >= q {
                continue;
            }
            if let Some(d) = rows[&p][q] {
                if (fp - fq).abs() > d as i64 {
                    return Err(TransportError::WitnessNotLipschitz {
                        a: c.label(p).to_string(),
                        b: c.label(q).to_string(),
                        diff: (fp - fq).abs(),
                        dist: d,
                    });
                }
            }
        }
    }

    // tight extension; cells in components untouched by the base keep 0
    let mut out = BTreeMap::new();
    for x in c.cell_ids() {
        let mut best: Option<i64> = None;
        for (&bcell, &fb) in &base {
            if let Some(d) = rows[&bcell][x] {
                let cand = fb + d as i64;
                best = Some(best.map_or(cand, |cur: i64| cur.min(cand)));
            }
        }
        out.insert(x, best.unwrap_or(0));
    }
    for (&bcell, &fb) in &base {
        if out[&bcell] != fb {
            return Err(TransportError::Internal(format!(
                "Lipschitz extension moved base value at `{}`",
                c.label(bcell)
            )));
        }
    }
    // extension is 1-Lipschitz along every edge of the graph
    for w in c.vectors() {
        if (out[&w.tau] - out[&w.sigma]).abs() > 1 {
            return Err(TransportError::Internal(format!(
                "extension not 1-Lipschitz across ({} > {})",
                c.label(w.tau),
                c.label(w.sigma)
            )));
        }
    }
    Ok(out)
}

/// Kantorovich pairing sum f(lambda) (mu(lambda) - nu(lambda)).
pub fn witness_value(witness: &BTreeMap<CellId, i64>, mu: &Measure, nu: &Measure) -> Rat {
    let mut acc = Rat::zero();
    for (cell, m) in mu.iter() {
        acc += rat_int(*witness.get(&cell).unwrap_or(&0)) * m.clone();
    }
    for (cell, m) in nu.iter() {
        acc -= rat_int(*witness.get(&cell).unwrap_or(&0)) * m.clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_simplex_boundary, build_torus_grid};
    use crate::rational::rat;

    fn c2_edge_vertex() -> (CellComplex, FaceVector) {
        let c = build_simplex_boundary(2).unwrap();
        let v = c
            .vectors()
            .into_iter()
            .find(|v| c.dim_of(v.tau) == 1)
            .unwrap();
        (c, v)
    }

    #[test]
    fn measure_point_mass_at_alpha_one() {
        let (c, v) = c2_edge_vertex();
        let m = measure_alpha(&c, v.sigma, &Rat::one()).unwrap();
        assert_eq!(m, Measure::dirac(v.sigma));
    }

    #[test]
    fn measure_on_c2_vertex() {
        let (c, v) = c2_edge_vertex();
        let m = measure_alpha(&c, v.sigma, &rat(1, 2)).unwrap();
        assert_eq!(m.get(v.sigma), rat(1, 2));
        let mut sixth = 0;
        for cell in c.cell_ids() {
            if cell != v.sigma && !m.get(cell).is_zero() {
                assert_eq!(m.get(cell), rat(1, 6));
                sixth += 1;
            }
        }
        assert_eq!(sixth, 3);
        assert!(m.total().is_one());
    }

    #[test]
    fn measure_rejects_bad_alpha() {
        let (c, v) = c2_edge_vertex();
        assert!(matches!(
            measure_alpha(&c, v.sigma, &rat(3, 2)),
            Err(TransportError::BadAlpha(_))
        ));
    }

    #[test]
    fn measure_undefined_on_isolated_cell() {
        let mut b = crate::complex::ComplexBuilder::new();
        b.cell("lonely", 0);
        let c = b.finish().unwrap();
        let cell = c.find("lonely").unwrap();
        assert!(matches!(
            measure_alpha(&c, cell, &rat(1, 2)),
            Err(TransportError::UndefinedMeasure(_))
        ));
    }

    #[test]
    fn disconnected_supports_are_reported() {
        let mut b = crate::complex::ComplexBuilder::new();
        b.cell("a", 0).cell("b", 1).incidence("b", "a", 1);
        b.cell("c", 0).cell("d", 1).incidence("d", "c", 1);
        let c = b.finish().unwrap();
        let a = c.find("a").unwrap();
        let d = c.find("c").unwrap();
        assert_eq!(graph_distance(&c, a, d), None);
        assert!(matches!(
            wasserstein(&c, &Measure::dirac(a), &Measure::dirac(d)),
            Err(TransportError::DisconnectedSupports { .. })
        ));
    }

    #[test]
    fn distances_on_gm() {
        let (c, v) = c2_edge_vertex();
        assert_eq!(graph_distance(&c, v.tau, v.sigma), Some(1));
        assert_eq!(graph_distance(&c, v.sigma, v.sigma), Some(0));
        // vertex to an incident triangle: two steps through an edge
        let vert = c.find("0").unwrap();
        let tri = c.find("0-1-2").unwrap();
        assert_eq!(graph_distance(&c, vert, tri), Some(2));
    }

    #[test]
    fn wasserstein_identical_measures_is_zero() {
        let (c, v) = c2_edge_vertex();
        let m = measure_alpha(&c, v.sigma, &rat(1, 2)).unwrap();
        let cert = wasserstein(&c, &m, &m).unwrap();
        assert!(cert.value.is_zero());
        assert_eq!(cert.primal_cost, cert.dual_value);
    }

    #[test]
    fn wasserstein_diracs_at_distance_one() {
        let (c, v) = c2_edge_vertex();
        let cert = wasserstein(&c, &Measure::dirac(v.tau), &Measure::dirac(v.sigma)).unwrap();
        assert_eq!(cert.value, Rat::one());
    }

    #[test]
    fn wasserstein_symmetric_and_faithful() {
        let (c, v) = c2_edge_vertex();
        let mu = measure_alpha(&c, v.tau, &rat(1, 3)).unwrap();
        let nu = measure_alpha(&c, v.sigma, &rat(1, 3)).unwrap();
        let ab = wasserstein(&c, &mu, &nu).unwrap().value;
        let ba = wasserstein(&c, &nu, &mu).unwrap().value;
        assert_eq!(ab, ba);
        assert!(!ab.is_zero());
    }

    #[test]
    fn torus_wasserstein_matches_cost_expression() {
        let c = build_torus_grid(4, 4).unwrap();
        let v = c.vectors()[0];
        let alpha = rat(4, 5);
        let mu = measure_alpha(&c, v.tau, &alpha).unwrap();
        let nu = measure_alpha(&c, v.sigma, &alpha).unwrap();
        let cert = wasserstein(&c, &mu, &nu).unwrap();
        // alpha + (1-alpha)(3 - 2/4 - (3+3)/4) = 1 on the flat torus
        assert_eq!(cert.value, Rat::one());
    }

    #[test]
    fn paper_coupling_marginals_on_c2() {
        let (c, v) = c2_edge_vertex();
        let coupling = paper_coupling(&c, v, &rat(9, 10)).unwrap();
        coupling.verify_marginals(&c).unwrap();
    }

    #[test]
    fn paper_coupling_cost_matches_closed_form() {
        // cost = alpha + (1-alpha){3 - 2/d_s - ((d_t - n_y) + (d_s - n_x))/d_t}
        // with s the lower-degree side
        for cx in [
            build_simplex_boundary(2).unwrap(),
            build_torus_grid(4, 4).unwrap(),
        ] {
            for v in cx.vectors() {
                let rec = forman::counting_check(&cx, v).unwrap();
                let alpha = rat(9, 10);
                let coupling = paper_coupling(&cx, v, &alpha).unwrap();
                let cost = coupling.cost(&cx).unwrap();
                let (ds, dt, nx, ny) = if rec.d_sigma >= rec.d_tau {
                    (rec.d_tau, rec.d_sigma, rec.n_tau, rec.n_sigma)
                } else {
                    (rec.d_sigma, rec.d_tau, rec.n_sigma, rec.n_tau)
                };
                let expected = alpha.clone()
                    + (Rat::one() - alpha.clone())
                        * (rat_int(3)
                            - rat_int(2) / rat_usize(ds)
                            - (rat_usize(dt - ny) + rat_usize(ds - nx)) / rat_usize(dt));
                assert_eq!(cost, expected, "vector {:?}", v);
            }
        }
    }

    #[test]
    fn coupling_upper_bounds_wasserstein() {
        let (c, _) = c2_edge_vertex();
        let alpha = rat(4, 5);
        for v in c.vectors() {
            let coupling = paper_coupling(&c, v, &alpha).unwrap();
            let cost = coupling.cost(&c).unwrap();
            let w = wasserstein(&c, &coupling.source, &coupling.target)
                .unwrap()
                .value;
            assert!(w <= cost, "vector {:?}", v);
        }
    }

    #[test]
    fn coupling_rejects_infeasible_alpha() {
        // C^2 vectors are degenerate cases: the (s, t) entry needs
        // alpha >= 1/(d_t + 1)
        let (c, v) = c2_edge_vertex();
        let amin = min_feasible_alpha(&c, v).unwrap();
        assert_eq!(amin, rat(1, 5));
        assert!(matches!(
            paper_coupling(&c, v, &rat(1, 10)),
            Err(TransportError::AlphaInfeasible { .. })
        ));
        paper_coupling(&c, v, &amin).unwrap();
    }

    #[test]
    fn torus_min_feasible_alpha_is_zero() {
        let c = build_torus_grid(4, 4).unwrap();
        let v = c.vectors()[0];
        assert!(min_feasible_alpha(&c, v).unwrap().is_zero());
        paper_coupling(&c, v, &Rat::zero()).unwrap();
    }

    #[test]
    fn dual_witness_case_values() {
        let c = build_simplex_boundary(3).unwrap();
        // a middle vector with upper 2-neighbors mediated by 3-cells
        let v = c
            .vectors()
            .into_iter()
            .find(|v| c.dim_of(v.tau) == 2 && c.dim_of(v.sigma) == 1)
            .unwrap();
        let f = paper_dual_witness(&c, v).unwrap();
        assert_eq!(f[&v.tau] - f[&v.sigma], 1);
        let ns = forman::neighbor_sets(&c, v).unwrap();
        for w in ns.two {
            if c.dim_of(w.tau) == c.dim_of(v.tau) + 1 {
                assert_eq!(f[&w.tau], 2, "2-neighbor coface");
                assert_eq!(f[&w.sigma], 1, "2-neighbor mid cell");
            }
        }
    }

    #[test]
    fn dual_witness_value_matches_closed_form() {
        // value = alpha + (1-alpha){-Ric/d_t + 2(1/d_t - 1/d_s) - d_s/d_t + 2}
        let (c, _) = c2_edge_vertex();
        let alpha = rat(9, 10);
        for v in c.vectors() {
            let rec = forman::counting_check(&c, v).unwrap();
            let f = paper_dual_witness(&c, v).unwrap();
            let mu = measure_alpha(&c, v.tau, &alpha).unwrap();
            let nu = measure_alpha(&c, v.sigma, &alpha).unwrap();
            let got = witness_value(&f, &mu, &nu);
            let (ds, dt) = (rec.d_tau.min(rec.d_sigma), rec.d_tau.max(rec.d_sigma));
            let expected = alpha.clone()
                + (Rat::one() - alpha.clone())
                    * (-rat_int(rec.ric) / rat_usize(dt)
                        + rat_int(2) * (Rat::one() / rat_usize(dt) - Rat::one() / rat_usize(ds))
                        - rat_usize(ds) / rat_usize(dt)
                        + rat_int(2));
            assert_eq!(got, expected, "vector {:?}", v);
        }
    }

    #[test]
    fn dual_value_lower_bounds_wasserstein() {
        let (c, _) = c2_edge_vertex();
        let alpha = rat(3, 4);
        for v in c.vectors() {
            let f = paper_dual_witness(&c, v).unwrap();
            let mu = measure_alpha(&c, v.tau, &alpha).unwrap();
            let nu = measure_alpha(&c, v.sigma, &alpha).unwrap();
            let dual = witness_value(&f, &mu, &nu);
            let w = wasserstein(&c, &mu, &nu).unwrap().value;
            assert!(dual <= w, "vector {:?}", v);
        }
    }

    #[test]
    fn sandwich_equality_on_c2() {
        let (c, _) = c2_edge_vertex();
        let alpha = rat(4, 5);
        for v in c.vectors() {
            let coupling = paper_coupling(&c, v, &alpha).unwrap();
            let cost = coupling.cost(&c).unwrap();
            let f = paper_dual_witness(&c, v).unwrap();
            let dual = witness_value(&f, &coupling.source, &coupling.target);
            let w = wasserstein(&c, &coupling.source, &coupling.target)
                .unwrap()
                .value;
            assert_eq!(dual, w);
            assert_eq!(w, cost);
        }
    }
}
