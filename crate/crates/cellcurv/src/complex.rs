//! Graded cell-complex model: cells, signed incidences, builders and
//! structural validation.
//!
//! A complex is a finite graded poset of cells with incidence numbers in
//! {+1, -1} between cells of consecutive dimensions. It is frozen once
//! built; every downstream module reads it immutably.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Index of a cell inside its complex. Stable under the canonical
/// (dimension, id) ordering fixed at construction.
pub type CellId = usize;

/// An incident pair tau > sigma with dim tau = dim sigma + 1. These are the
/// edges of the face-incidence graph and the carriers of curvature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceVector {
    pub tau: CellId,
    pub sigma: CellId,
}

impl FaceVector {
    pub fn new(tau: CellId, sigma: CellId) -> Self {
        Self { tau, sigma }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("duplicate cell id `{0}`")]
    DuplicateCell(String),
    #[error("incidence references unknown cell `{0}`")]
    UnknownCell(String),
    #[error("incidence {tau} > {sigma} violates dim({tau}) = dim({sigma}) + 1")]
    DimensionMismatch { tau: String, sigma: String },
    #[error("duplicate incidence pair {tau} > {sigma}")]
    DuplicateIncidence { tau: String, sigma: String },
    #[error("incidence sign must be +1 or -1, got {0}")]
    BadSign(i64),
    #[error("simplex boundary requires n >= 1 (n = 0 leaves isolated vertices with degree 0)")]
    DegenerateSimplex,
    #[error("interval grid requires a non-empty list of positive lengths")]
    EmptyGrid,
    #[error("grid length must be >= 1, got {0}")]
    BadGridLength(usize),
    #[error(
        "torus side {0} < 4: identifications would glue a cell to itself and regularity would fail"
    )]
    TorusTooSmall(usize),
    #[error("cell `{0}` not found in complex")]
    NoSuchCell(String),
    #[error("({tau}, {sigma}) is not a vector of the complex")]
    NotAVector { tau: String, sigma: String },
}

#[derive(Debug, Clone)]
struct CellData {
    label: String,
    dim: usize,
    /// (face, incidence sign), sorted by face id.
    faces: Vec<(CellId, i8)>,
    /// (coface, incidence sign), sorted by coface id.
    cofaces: Vec<(CellId, i8)>,
}

/// Immutable graded cell complex with signed incidences.
#[derive(Debug, Clone)]
pub struct CellComplex {
    cells: Vec<CellData>,
    by_label: HashMap<String, CellId>,
    dim: usize,
}

impl PartialEq for CellComplex {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.cells.len() == other.cells.len()
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|(a, b)| a.label == b.label && a.dim == b.dim && a.faces == b.faces)
    }
}

impl CellComplex {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Dimension of the complex (max cell dimension; 0 for empty).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dim_of(&self, c: CellId) -> usize {
        self.cells[c].dim
    }

    pub fn label(&self, c: CellId) -> &str {
        &self.cells[c].label
    }

    pub fn find(&self, label: &str) -> Option<CellId> {
        self.by_label.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<CellId, ComplexError> {
        self.find(label)
            .ok_or_else(|| ComplexError::NoSuchCell(label.to_string()))
    }

    /// Faces of consecutive dimension below, with incidence signs.
    pub fn faces(&self, c: CellId) -> &[(CellId, i8)] {
        &self.cells[c].faces
    }

    /// Cofaces of consecutive dimension above, with incidence signs.
    pub fn cofaces(&self, c: CellId) -> &[(CellId, i8)] {
        &self.cells[c].cofaces
    }

    pub fn sign(&self, tau: CellId, sigma: CellId) -> Option<i8> {
        self.cells[tau]
            .faces
            .iter()
            .find(|(s, _)| *s == sigma)
            .map(|(_, sg)| *sg)
    }

    pub fn is_vector(&self, v: FaceVector) -> bool {
        self.sign(v.tau, v.sigma).is_some()
    }

    /// Degree of a cell in the face-incidence graph: cofaces plus faces.
    pub fn degree(&self, c: CellId) -> usize {
        self.cells[c].faces.len() + self.cells[c].cofaces.len()
    }

    /// Neighbors of a cell in the face-incidence graph, in index order.
    pub fn neighbors(&self, c: CellId) -> impl Iterator<Item = CellId> + '_ {
        // Faces come before cofaces in the graded order, so the chain is sorted.
        self.cells[c]
            .faces
            .iter()
            .map(|(s, _)| *s)
            .chain(self.cells[c].cofaces.iter().map(|(t, _)| *t))
    }

    /// All vectors (tau > sigma) of the complex in canonical order.
    pub fn vectors(&self) -> Vec<FaceVector> {
        let mut out = Vec::new();
        for tau in 0..self.cells.len() {
            for &(sigma, _) in &self.cells[tau].faces {
                out.push(FaceVector::new(tau, sigma));
            }
        }
        out.sort();
        out
    }

    /// Cell counts per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0usize; self.dim + 1];
        for c in &self.cells {
            f[c.dim] += 1;
        }
        f
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = CellId> {
        0..self.cells.len()
    }

    /// Closed face set of a cell (the cell and all its iterated faces).
    pub fn closure(&self, c: CellId) -> BTreeSet<CellId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            if out.insert(x) {
                stack.extend(self.cells[x].faces.iter().map(|(s, _)| *s));
            }
        }
        out
    }
}

/// Mutable accumulator; `finish` freezes into a canonical [`CellComplex`].
#[derive(Debug, Default)]
pub struct ComplexBuilder {
    cells: Vec<(String, usize)>,
    incidences: Vec<(String, String, i8)>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cell(&mut self, label: impl Into<String>, dim: usize) -> &mut Self {
        self.cells.push((label.into(), dim));
        self
    }

    pub fn incidence(
        &mut self,
        tau: impl Into<String>,
        sigma: impl Into<String>,
        sign: i8,
    ) -> &mut Self {
        self.incidences.push((tau.into(), sigma.into(), sign));
        self
    }

    /// Validates well-formedness (unique ids, known references, consecutive
    /// dims, unique pairs, signs in {+1,-1}) and freezes the complex with
    /// cells sorted by (dim, id).
    pub fn finish(self) -> Result<CellComplex, ComplexError> {
        let mut sorted: Vec<(String, usize)> = self.cells;
        sorted.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));

        let mut by_label = HashMap::new();
        let mut cells = Vec::with_capacity(sorted.len());
        let mut dim = 0;
        for (label, d) in sorted {
            if by_label.insert(label.clone(), cells.len()).is_some() {
                return Err(ComplexError::DuplicateCell(label));
            }
            dim = dim.max(d);
            cells.push(CellData {
                label,
                dim: d,
                faces: Vec::new(),
                cofaces: Vec::new(),
            });
        }

        let mut seen = BTreeSet::new();
        for (tau_l, sigma_l, sign) in self.incidences {
            if sign != 1 && sign != -1 {
                return Err(ComplexError::BadSign(sign as i64));
            }
            let tau = *by_label
                .get(&tau_l)
                .ok_or_else(|| ComplexError::UnknownCell(tau_l.clone()))?;
            let sigma = *by_label
                .get(&sigma_l)
                .ok_or_else(|| ComplexError::UnknownCell(sigma_l.clone()))?;
            if cells[tau].dim != cells[sigma].dim + 1 {
                return Err(ComplexError::DimensionMismatch {
                    tau: tau_l,
                    sigma: sigma_l,
                });
            }
            if !seen.insert((tau, sigma)) {
                return Err(ComplexError::DuplicateIncidence {
                    tau: tau_l,
                    sigma: sigma_l,
                });
            }
            cells[tau].faces.push((sigma, sign));
            cells[sigma].cofaces.push((tau, sign));
        }
        for c in &mut cells {
            c.faces.sort_by_key(|(s, _)| *s);
            c.cofaces.sort_by_key(|(t, _)| *t);
        }
        Ok(CellComplex {
            cells,
            by_label,
            dim,
        })
    }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

fn subset_label(sub: &[usize]) -> String {
    sub.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("-")
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Boundary complex of the (n+1)-simplex on vertices {0, ..., n+1}: all
/// nonempty proper subsets as cells, alternating-face signs.
pub fn build_simplex_boundary(n: usize) -> Result<CellComplex, ComplexError> {
    if n == 0 {
        return Err(ComplexError::DegenerateSimplex);
    }
    let verts = n + 2;
    let mut b = ComplexBuilder::new();
    for size in 1..=n + 1 {
        for sub in subsets_of_size(verts, size) {
            b.cell(subset_label(&sub), size - 1);
            if size >= 2 {
                for (j, _) in sub.iter().enumerate() {
                    let mut face = sub.clone();
                    face.remove(j);
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    b.incidence(subset_label(&sub), subset_label(&face), sign);
                }
            }
        }
    }
    b.finish()
}

/// Path with `len` edges: vertices v0..v{len}, edges e0..e{len-1},
/// boundary of ei is v{i+1} - vi.
pub fn build_path(len: usize) -> Result<CellComplex, ComplexError> {
    if len == 0 {
        return Err(ComplexError::BadGridLength(0));
    }
    let mut b = ComplexBuilder::new();
    for i in 0..=len {
        b.cell(format!("v{i}"), 0);
    }
    for i in 0..len {
        b.cell(format!("e{i}"), 1);
        b.incidence(format!("e{i}"), format!("v{i}"), -1);
        b.incidence(format!("e{i}"), format!("v{}", i + 1), 1);
    }
    b.finish()
}

/// Cycle with `len` edges: the last edge closes up to v0.
pub fn build_cycle(len: usize) -> Result<CellComplex, ComplexError> {
    if len < 3 {
        return Err(ComplexError::BadGridLength(len));
    }
    let mut b = ComplexBuilder::new();
    for i in 0..len {
        b.cell(format!("v{i}"), 0);
    }
    for i in 0..len {
        b.cell(format!("e{i}"), 1);
        b.incidence(format!("e{i}"), format!("v{i}"), -1);
        b.incidence(format!("e{i}"), format!("v{}", (i + 1) % len), 1);
    }
    b.finish()
}

/// Product complex: cells are pairs, dims add, signs follow
/// d(a x b) = da x b + (-1)^{dim a} a x db.
pub fn product(a: &CellComplex, b: &CellComplex) -> Result<CellComplex, ComplexError> {
    let mut out = ComplexBuilder::new();
    let pair = |ca: CellId, cb: CellId| format!("{}|{}", a.label(ca), b.label(cb));
    for ca in a.cell_ids() {
        for cb in b.cell_ids() {
            out.cell(pair(ca, cb), a.dim_of(ca) + b.dim_of(cb));
        }
    }
    for ca in a.cell_ids() {
        for cb in b.cell_ids() {
            for &(fa, sg) in a.faces(ca) {
                out.incidence(pair(ca, cb), pair(fa, cb), sg);
            }
            let flip = if a.dim_of(ca).is_multiple_of(2) {
                1
            } else {
                -1
            };
            for &(fb, sg) in b.faces(cb) {
                out.incidence(pair(ca, cb), pair(ca, fb), sg * flip);
            }
        }
    }
    out.finish()
}

/// Finite axis-aligned cube complex: product of paths with the given edge
/// counts.
pub fn build_interval_grid(lengths: &[usize]) -> Result<CellComplex, ComplexError> {
    if lengths.is_empty() {
        return Err(ComplexError::EmptyGrid);
    }
    let mut acc = build_path(lengths[0])?;
    for &len in &lengths[1..] {
        acc = product(&acc, &build_path(len)?)?;
    }
    Ok(acc)
}

/// k1 x k2 square grid with opposite sides identified (product of two
/// cycles). Sides below 4 are rejected: the quotient would stop being a
/// regular complex.
pub fn build_torus_grid(k1: usize, k2: usize) -> Result<CellComplex, ComplexError> {
    if k1 < 4 {
        return Err(ComplexError::TorusTooSmall(k1));
    }
    if k2 < 4 {
        return Err(ComplexError::TorusTooSmall(k2));
    }
    product(&build_cycle(k1)?, &build_cycle(k2)?)
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Outcome of the structural checks of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// Pairs (top cell, bottom cell) where the assembled boundary operator
    /// fails to square to zero.
    pub boundary_failures: Vec<(String, String)>,
    /// Triples (upper cell, lower cell, count) violating the diamond
    /// property: an incident pair two dimensions apart must have exactly 2
    /// cells strictly between.
    pub diamond_failures: Vec<(String, String, usize)>,
    /// Pairs of same-dimension cells whose closures share a codimension-1
    /// cell but intersect in more than that cell's closure.
    pub quasiconvex_failures: Vec<(String, String)>,
    /// Cells with neither faces nor cofaces. Allowed by the model, but
    /// measures around them are undefined downstream.
    pub isolated_cells: Vec<String>,
    /// Positive-dimensional cells with fewer than 2 facets; regular cells
    /// always have at least 2.
    pub thin_cells: Vec<String>,
}

impl ValidationReport {
    pub fn boundary_ok(&self) -> bool {
        self.boundary_failures.is_empty()
    }

    pub fn diamond_ok(&self) -> bool {
        self.diamond_failures.is_empty()
    }

    pub fn quasiconvex_ok(&self) -> bool {
        self.quasiconvex_failures.is_empty()
    }

    /// The three structural checks together.
    pub fn all_passed(&self) -> bool {
        self.boundary_ok() && self.diamond_ok() && self.quasiconvex_ok()
    }

    /// Poset-level regularity gate used before any curvature computation:
    /// the three structural checks plus the facet-count floor.
    pub fn regular_quasiconvex(&self) -> bool {
        self.all_passed() && self.thin_cells.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "boundary-squares-to-zero\t{}",
            verdict(self.boundary_ok())
        )?;
        for (t, r) in &self.boundary_failures {
            writeln!(f, "  nonzero dd coefficient at {t} -> {r}")?;
        }
        writeln!(f, "diamond-property\t{}", verdict(self.diamond_ok()))?;
        for (b, g, n) in &self.diamond_failures {
            writeln!(f, "  {g} < {b} has {n} intermediate cells (expected 2)")?;
        }
        writeln!(f, "quasiconvexity\t{}", verdict(self.quasiconvex_ok()))?;
        for (a, b) in &self.quasiconvex_failures {
            writeln!(
                f,
                "  closures of {a} and {b} overlap beyond one shared facet closure"
            )?;
        }
        if !self.isolated_cells.is_empty() {
            writeln!(
                f,
                "isolated cells (flagged): {}",
                self.isolated_cells.join(" ")
            )?;
        }
        if !self.thin_cells.is_empty() {
            writeln!(
                f,
                "cells with < 2 facets (flagged): {}",
                self.thin_cells.join(" ")
            )?;
        }
        Ok(())
    }
}

/// Runs the three structural checks (boundary squared, diamond property,
/// quasiconvexity) and flags isolated and thin cells. Read-only.
pub fn validate(c: &CellComplex) -> ValidationReport {
    let mut report = ValidationReport {
        boundary_failures: Vec::new(),
        diamond_failures: Vec::new(),
        quasiconvex_failures: Vec::new(),
        isolated_cells: Vec::new(),
        thin_cells: Vec::new(),
    };

    // dd = 0: accumulate signed counts two levels down from every cell.
    for tau in c.cell_ids() {
        if c.dim_of(tau) < 2 {
            continue;
        }
        let mut acc: HashMap<CellId, i64> = HashMap::new();
        for &(sigma, s1) in c.faces(tau) {
            for &(rho, s2) in c.faces(sigma) {
                *acc.entry(rho).or_insert(0) += s1 as i64 * s2 as i64;
            }
        }
        let mut bad: Vec<CellId> = acc
            .iter()
            .filter(|(_, v)| **v != 0)
            .map(|(k, _)| *k)
            .collect();
        bad.sort();
        for rho in bad {
            report
                .boundary_failures
                .push((c.label(tau).to_string(), c.label(rho).to_string()));
        }
    }

    // Diamond: every gamma < beta two dimensions apart has exactly 2 middles.
    for beta in c.cell_ids() {
        if c.dim_of(beta) < 1 {
            continue;
        }
        let mut middles: HashMap<CellId, usize> = HashMap::new();
        for &(sigma, _) in c.faces(beta) {
            for &(gamma, _) in c.faces(sigma) {
                *middles.entry(gamma).or_insert(0) += 1;
            }
        }
        let mut gammas: Vec<_> = middles.into_iter().collect();
        gammas.sort();
        for (gamma, count) in gammas {
            if count != 2 {
                report.diamond_failures.push((
                    c.label(beta).to_string(),
                    c.label(gamma).to_string(),
                    count,
                ));
            }
        }
    }

    // Quasiconvexity: two distinct (p+1)-cells sharing a p-cell must meet
    // exactly in that cell's closure.
    let closures: Vec<BTreeSet<CellId>> = c.cell_ids().map(|i| c.closure(i)).collect();
    for t1 in c.cell_ids() {
        if c.dim_of(t1) < 1 {
            continue;
        }
        for t2 in (t1 + 1)..c.len() {
            if c.dim_of(t2) != c.dim_of(t1) {
                continue;
            }
            let inter: BTreeSet<CellId> =
                closures[t1].intersection(&closures[t2]).copied().collect();
            let p = c.dim_of(t1) - 1;
            let shared_facets: Vec<CellId> = inter
                .iter()
                .copied()
                .filter(|&x| c.dim_of(x) == p)
                .collect();
            match shared_facets.as_slice() {
                [] => {}
                [sigma] => {
                    if inter != closures[*sigma] {
                        report
                            .quasiconvex_failures
                            .push((c.label(t1).to_string(), c.label(t2).to_string()));
                    }
                }
                _ => {
                    report
                        .quasiconvex_failures
                        .push((c.label(t1).to_string(), c.label(t2).to_string()));
                }
            }
        }
    }

    for i in c.cell_ids() {
        if c.degree(i) == 0 {
            report.isolated_cells.push(c.label(i).to_string());
        }
        if c.dim_of(i) >= 1 && c.faces(i).len() < 2 {
            report.thin_cells.push(c.label(i).to_string());
        }
    }

    report
}

/// The paper's figure of a non-quasiconvex complex: two triangles glued
/// along two of their edges. Used by tests and shipped as a CLI fixture.
pub fn non_quasiconvex_fixture() -> CellComplex {
    let mut b = ComplexBuilder::new();
    for v in ["A", "B", "C"] {
        b.cell(v, 0);
    }
    for e in ["AB", "BC", "CA1", "CA2"] {
        b.cell(e, 1);
    }
    b.incidence("AB", "A", -1).incidence("AB", "B", 1);
    b.incidence("BC", "B", -1).incidence("BC", "C", 1);
    b.incidence("CA1", "C", -1).incidence("CA1", "A", 1);
    b.incidence("CA2", "C", -1).incidence("CA2", "A", 1);
    b.cell("T1", 2)
        .incidence("T1", "AB", 1)
        .incidence("T1", "BC", 1)
        .incidence("T1", "CA1", 1);
    b.cell("T2", 2)
        .incidence("T2", "AB", 1)
        .incidence("T2", "BC", 1)
        .incidence("T2", "CA2", 1);
    b.finish().expect("fixture is well-formed")
}
