//! Combinatorial 0- and 1-forms, the differential d, codifferential d*, the
//! Laplacian on functions and on 1-forms, covariant derivative, and the
//! Bochner-style Ricci curvature identity check.
//!
//! Forms are stored sparsely: absent entries read as zero. All operations
//! are generic over the scalar, so the same code runs in f64 and in exact
//! rational mode.

use std::collections::HashMap;
use std::ops::{Mul, Neg, Sub};

use num_traits::Zero;
use thiserror::Error;

use crate::complex::{CellComplex, CellId, ComplexError, FaceVector};
use crate::forman;
use crate::rational::{rat_int, Rat};

/// Default tolerance for the float-mode Bochner identity check.
pub const DEFAULT_BOCHNER_TOL: f64 = 1e-9;

/// Scalar ring for form coefficients.
pub trait Scalar:
    Clone + PartialEq + Zero + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn half(self) -> Self;
}

impl Scalar for f64 {
    fn half(self) -> Self {
        self * 0.5
    }
}

impl Scalar for Rat {
    fn half(self) -> Self {
        self / rat_int(2)
    }
}

fn signed<T: Scalar>(sign: i8, x: T) -> T {
    if sign >= 0 {
        x
    } else {
        -x
    }
}

#[derive(Debug, Error)]
pub enum FormsError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(
        "Bochner identity violated at ({tau} > {sigma}): got {got}, closed form {expected} \
         (deviation {deviation:e}); sign conventions are inconsistent for this complex"
    )]
    BochnerMismatch {
        tau: String,
        sigma: String,
        got: f64,
        expected: f64,
        deviation: f64,
    },
    #[error("exact Bochner identity violated at ({tau} > {sigma})")]
    BochnerMismatchExact { tau: String, sigma: String },
}

/// Real-valued function on cells (f_sigma).
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroForm<T> {
    values: HashMap<CellId, T>,
}

impl<T: Scalar> Default for ZeroForm<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> ZeroForm<T> {
    pub fn new() -> Self {
        Self {
            values: HashMap::new(),
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (CellId, T)>) -> Self {
        Self {
            values: entries.into_iter().collect(),
        }
    }

    pub fn constant(c: &CellComplex, value: T) -> Self {
        Self::from_entries(c.cell_ids().map(|i| (i, value.clone())))
    }

    pub fn set(&mut self, cell: CellId, value: T) {
        self.values.insert(cell, value);
    }

    pub fn get(&self, cell: CellId) -> T {
        self.values.get(&cell).cloned().unwrap_or_else(T::zero)
    }
}

/// Real-valued assignment on vectors (omega^tau_sigma).
///
/// Every operation iterates the complex's own vector set, so entries keyed
/// by pairs that are not incidences of the complex are inert.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm<T> {
    values: HashMap<FaceVector, T>,
}

impl<T: Scalar> Default for OneForm<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> OneForm<T> {
    pub fn new() -> Self {
        Self {
            values: HashMap::new(),
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (FaceVector, T)>) -> Self {
        Self {
            values: entries.into_iter().collect(),
        }
    }

    pub fn constant(c: &CellComplex, value: T) -> Self {
        Self::from_entries(c.vectors().into_iter().map(|v| (v, value.clone())))
    }

    pub fn set(&mut self, v: FaceVector, value: T) {
        self.values.insert(v, value);
    }

    pub fn get(&self, v: FaceVector) -> T {
        self.values.get(&v).cloned().unwrap_or_else(T::zero)
    }
}

/// Differential of a function: (df)^tau_sigma = f_tau - f_sigma.
pub fn d_zero<T: Scalar>(c: &CellComplex, f: &ZeroForm<T>) -> OneForm<T> {
    OneForm::from_entries(
        c.vectors()
            .into_iter()
            .map(|v| (v, f.get(v.tau) - f.get(v.sigma))),
    )
}

/// Codifferential of a 1-form:
/// d*w(sigma) = -sum_{tau > sigma} w^tau_sigma + sum_{rho < sigma} w^sigma_rho.
pub fn d_star_one<T: Scalar>(c: &CellComplex, w: &OneForm<T>) -> ZeroForm<T> {
    ZeroForm::from_entries(c.cell_ids().map(|s| (s, d_star_one_at(c, w, s))))
}

fn d_star_one_at<T: Scalar>(c: &CellComplex, w: &OneForm<T>, sigma: CellId) -> T {
    let mut acc = T::zero();
    for &(tau, _) in c.cofaces(sigma) {
        acc = acc - w.get(FaceVector::new(tau, sigma));
    }
    for &(rho, _) in c.faces(sigma) {
        acc = acc + w.get(FaceVector::new(sigma, rho));
    }
    acc
}

/// Laplacian on functions, d* d f. Agrees with the non-normalized graph
/// Laplacian of the face-incidence graph.
pub fn laplacian_zero<T: Scalar>(c: &CellComplex, f: &ZeroForm<T>) -> ZeroForm<T> {
    d_star_one(c, &d_zero(c, f))
}

/// |nabla w|^2 at a vector: squared differences over 2-neighbors plus
/// squared sums over 0-neighbors.
pub fn covariant_sq<T: Scalar>(
    c: &CellComplex,
    w: &OneForm<T>,
    v: FaceVector,
) -> Result<T, ComplexError> {
    let ns = forman::neighbor_sets(c, v)?;
    let base = w.get(v);
    let mut acc = T::zero();
    for u in ns.two {
        let d = base.clone() - w.get(u);
        acc = acc + d.clone() * d;
    }
    for u in ns.zero {
        let s = base.clone() + w.get(u);
        acc = acc + s.clone() * s;
    }
    Ok(acc)
}

/// Laplacian of |w|^2 at a vector: own squared value minus each neighbor's,
/// over both neighbor families. Antisymmetric under swapping neighbors, so
/// it sums to zero over all vectors.
pub fn laplacian_flat_sq<T: Scalar>(
    c: &CellComplex,
    w: &OneForm<T>,
    v: FaceVector,
) -> Result<T, ComplexError> {
    let ns = forman::neighbor_sets(c, v)?;
    let own = w.get(v);
    let own_sq = own.clone() * own;
    let mut acc = T::zero();
    for u in ns.two.into_iter().chain(ns.zero) {
        let x = w.get(u);
        acc = acc + own_sq.clone() - x.clone() * x;
    }
    Ok(acc)
}

/// Sum of [`laplacian_flat_sq`] over every vector; zero by symmetry.
pub fn flat_balance<T: Scalar>(c: &CellComplex, w: &OneForm<T>) -> Result<T, ComplexError> {
    let mut acc = T::zero();
    for v in c.vectors() {
        acc = acc + laplacian_flat_sq(c, w, v)?;
    }
    Ok(acc)
}

/// Value of the 1-form Laplacian (dd* + d*d)w at a vector, read off as the
/// incidence-sign-normalized coefficient of sigma in (Delta w)(tau).
pub fn laplacian_one_value<T: Scalar>(
    c: &CellComplex,
    w: &OneForm<T>,
    v: FaceVector,
) -> Result<T, ComplexError> {
    let FaceVector { tau, sigma } = v;
    let sign_ts = c.sign(tau, sigma).ok_or_else(|| ComplexError::NotAVector {
        tau: c.label(tau).to_string(),
        sigma: c.label(sigma).to_string(),
    })?;

    // dd* part: (d g)^tau_sigma = g_tau - g_sigma for g = d* w.
    let dd_star = d_star_one_at(c, w, tau) - d_star_one_at(c, w, sigma);

    // d*d part. With U = dw (a degree-2 map), the coefficient pairing gives
    // U(x, z) = sum over chains x < y < z of sign(y,x) sign(z,y) (w^z_y + w^y_x).
    let u_entry = |x: CellId, z: CellId| -> T {
        let mut acc = T::zero();
        for &(y, sign_zy) in c.faces(z) {
            if let Some(sign_yx) = c.sign(y, x) {
                let s = w.get(FaceVector::new(z, y)) + w.get(FaceVector::new(y, x));
                acc = acc + signed(sign_zy * sign_yx, s);
            }
        }
        acc
    };
    let mut star_d = T::zero();
    for &(rho, sign_sr) in c.faces(sigma) {
        star_d = star_d + signed(sign_sr, u_entry(rho, tau));
    }
    for &(mu, sign_mt) in c.cofaces(tau) {
        star_d = star_d + signed(sign_mt, u_entry(sigma, mu));
    }

    Ok(dd_star + signed(sign_ts, star_d))
}

/// <Delta w, w> at a vector: the pointwise product of the Laplacian value
/// with the form value.
pub fn laplacian_inner<T: Scalar>(
    c: &CellComplex,
    w: &OneForm<T>,
    v: FaceVector,
) -> Result<T, ComplexError> {
    Ok(laplacian_one_value(c, w, v)? * w.get(v))
}

/// Bochner curvature of a 1-form at a vector:
/// <Delta w, w> - 1/2 |nabla w|^2 - 1/2 Delta^b |w|^2.
pub fn bochner_ric_raw<T: Scalar>(
    c: &CellComplex,
    w: &OneForm<T>,
    v: FaceVector,
) -> Result<T, ComplexError> {
    let inner = laplacian_inner(c, w, v)?;
    let cov = covariant_sq(c, w, v)?;
    let flat = laplacian_flat_sq(c, w, v)?;
    Ok(inner - cov.half() - flat.half())
}

/// Bochner curvature with the closed-form identity check: the value must
/// equal (2 - #N0) (w^tau_sigma)^2 on a regular quasiconvex complex.
pub fn bochner_ric(
    c: &CellComplex,
    w: &OneForm<f64>,
    v: FaceVector,
    tol: f64,
) -> Result<f64, FormsError> {
    let got = bochner_ric_raw(c, w, v)?;
    let n0 = forman::neighbor_sets(c, v)?.zero.len();
    let x = w.get(v);
    let expected = (2.0 - n0 as f64) * x * x;
    let deviation = (got - expected).abs();
    if deviation > tol {
        return Err(FormsError::BochnerMismatch {
            tau: c.label(v.tau).to_string(),
            sigma: c.label(v.sigma).to_string(),
            got,
            expected,
            deviation,
        });
    }
    Ok(got)
}

/// Exact-rational Bochner curvature; the identity must hold exactly.
pub fn bochner_ric_exact(
    c: &CellComplex,
    w: &OneForm<Rat>,
    v: FaceVector,
) -> Result<Rat, FormsError> {
    let got = bochner_ric_raw(c, w, v)?;
    let n0 = forman::neighbor_sets(c, v)?.zero.len();
    let x = w.get(v);
    let expected = (rat_int(2) - rat_int(n0 as i64)) * x.clone() * x;
    if got != expected {
        return Err(FormsError::BochnerMismatchExact {
            tau: c.label(v.tau).to_string(),
            sigma: c.label(v.sigma).to_string(),
        });
    }
    Ok(got)
}

/// L2 pairing of two functions under the Kronecker inner product on cells.
pub fn inner_zero<T: Scalar>(c: &CellComplex, f: &ZeroForm<T>, g: &ZeroForm<T>) -> T {
    let mut acc = T::zero();
    for i in c.cell_ids() {
        acc = acc + f.get(i) * g.get(i);
    }
    acc
}

/// L2 pairing of two 1-forms; the incidence signs square away, leaving the
/// sum of pointwise products over vectors.
pub fn inner_one<T: Scalar>(c: &CellComplex, u: &OneForm<T>, w: &OneForm<T>) -> T {
    let mut acc = T::zero();
    for v in c.vectors() {
        acc = acc + u.get(v) * w.get(v);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{
        build_interval_grid, build_path, build_simplex_boundary, build_torus_grid, product,
    };
    use crate::rational::rat;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_one_form(c: &CellComplex, rng: &mut StdRng) -> OneForm<f64> {
        OneForm::from_entries(
            c.vectors()
                .into_iter()
                .map(|v| (v, rng.gen_range(-1.0..1.0))),
        )
    }

    fn random_zero_form(c: &CellComplex, rng: &mut StdRng) -> ZeroForm<f64> {
        ZeroForm::from_entries(c.cell_ids().map(|i| (i, rng.gen_range(-1.0..1.0))))
    }

    #[test]
    fn d_of_constant_vanishes() {
        let c = build_simplex_boundary(2).unwrap();
        let df = d_zero(&c, &ZeroForm::constant(&c, 3.5));
        for v in c.vectors() {
            assert_eq!(df.get(v), 0.0);
        }
    }

    #[test]
    fn d_on_path_is_plain_difference() {
        let c = build_path(2).unwrap();
        let mut f = ZeroForm::new();
        for i in 0..=2 {
            f.set(c.find(&format!("v{i}")).unwrap(), i as f64);
        }
        for i in 0..2 {
            f.set(c.find(&format!("e{i}")).unwrap(), i as f64 + 0.5);
        }
        let df = d_zero(&c, &f);
        let v = FaceVector::new(c.find("e0").unwrap(), c.find("v0").unwrap());
        assert_eq!(df.get(v), 0.5);
    }

    #[test]
    fn d_star_of_zero_vanishes() {
        let c = build_simplex_boundary(2).unwrap();
        let g = d_star_one(&c, &OneForm::<f64>::new());
        for i in c.cell_ids() {
            assert_eq!(g.get(i), 0.0);
        }
    }

    #[test]
    fn laplacian_matches_term_expansion_on_c2() {
        let c = build_simplex_boundary(2).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        let f = random_zero_form(&c, &mut rng);
        let lap = laplacian_zero(&c, &f);
        for s in c.cell_ids() {
            // -sum_{tau > s}(f_tau - f_s) + sum_{rho < s}(f_s - f_rho)
            let mut expect = 0.0;
            for &(t, _) in c.cofaces(s) {
                expect -= f.get(t) - f.get(s);
            }
            for &(r, _) in c.faces(s) {
                expect += f.get(s) - f.get(r);
            }
            assert!((lap.get(s) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_of_constant_vanishes() {
        let c = build_torus_grid(4, 4).unwrap();
        let lap = laplacian_zero(&c, &ZeroForm::constant(&c, 1.0));
        for i in c.cell_ids() {
            assert!(lap.get(i).abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_of_vertex_indicator_on_c2() {
        let c = build_simplex_boundary(2).unwrap();
        let v = c.cell_ids().find(|&i| c.dim_of(i) == 0).unwrap();
        let mut f = ZeroForm::new();
        f.set(v, 1.0);
        let lap = laplacian_zero(&c, &f);
        assert_eq!(lap.get(v), 3.0);
        for i in c.cell_ids() {
            if i == v {
                continue;
            }
            let adjacent = c.faces(i).iter().any(|(s, _)| *s == v);
            let expect = if adjacent { -1.0 } else { 0.0 };
            assert!((lap.get(i) - expect).abs() < 1e-12, "cell {}", c.label(i));
        }
    }

    #[test]
    fn dd_vanishes_as_degree_two_map() {
        // With U = d(df) assembled the same way as in laplacian_one_value,
        // every chain coefficient must cancel.
        let c = build_simplex_boundary(2).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        let f = random_zero_form(&c, &mut rng);
        let df = d_zero(&c, &f);
        for z in c.cell_ids() {
            for x in c.cell_ids() {
                if c.dim_of(z) < 2 || c.dim_of(x) + 2 != c.dim_of(z) {
                    continue;
                }
                let mut acc = 0.0;
                for &(y, sign_zy) in c.faces(z) {
                    if let Some(sign_yx) = c.sign(y, x) {
                        let s = df.get(FaceVector::new(z, y)) + df.get(FaceVector::new(y, x));
                        acc += (sign_zy * sign_yx) as f64 * s;
                    }
                }
                assert!(acc.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn adjointness_on_torus() {
        let c = build_torus_grid(4, 4).unwrap();
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..50 {
            let u = random_one_form(&c, &mut rng);
            let v = random_zero_form(&c, &mut rng);
            let lhs = inner_zero(&c, &d_star_one(&c, &u), &v);
            let rhs = inner_one(&c, &u, &d_zero(&c, &v));
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn covariant_sq_constant_on_torus() {
        let c = build_torus_grid(4, 4).unwrap();
        let w = OneForm::constant(&c, 1.0);
        for v in c.vectors() {
            // all 2-neighbor differences vanish; two 0-neighbors contribute 4 each
            assert!((covariant_sq(&c, &w, v).unwrap() - 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn covariant_sq_nonnegative() {
        let c = build_simplex_boundary(3).unwrap();
        let mut rng = StdRng::seed_from_u64(31);
        let w = random_one_form(&c, &mut rng);
        for v in c.vectors() {
            assert!(covariant_sq(&c, &w, v).unwrap() >= 0.0);
        }
    }

    #[test]
    fn flat_sq_of_constant_vanishes_and_perturbation_counts_neighbors() {
        let c = build_torus_grid(4, 4).unwrap();
        let w = OneForm::constant(&c, 2.0);
        for v in c.vectors().into_iter().take(8) {
            assert_eq!(laplacian_flat_sq(&c, &w, v).unwrap(), 0.0);
        }
        let v0 = c.vectors()[0];
        let mut w = OneForm::constant(&c, 2.0);
        w.set(v0, 5.0);
        let ns = forman::neighbor_sets(&c, v0).unwrap();
        let expect = (ns.zero.len() + ns.two.len()) as f64 * (25.0 - 4.0);
        assert!((laplacian_flat_sq(&c, &w, v0).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn flat_balance_is_zero_exactly_in_rational_mode() {
        let c = build_simplex_boundary(2).unwrap();
        let w: OneForm<Rat> = OneForm::from_entries(
            c.vectors()
                .into_iter()
                .enumerate()
                .map(|(i, v)| (v, rat(i as i64 * 3 - 7, 5))),
        );
        assert_eq!(flat_balance(&c, &w).unwrap(), rat_int(0));
    }

    #[test]
    fn bochner_identity_random_forms() {
        let mut rng = StdRng::seed_from_u64(41);
        let complexes = vec![
            build_path(2).unwrap(),
            build_simplex_boundary(2).unwrap(),
            build_simplex_boundary(3).unwrap(),
            build_torus_grid(4, 4).unwrap(),
            build_interval_grid(&[3, 3]).unwrap(),
            product(&build_simplex_boundary(1).unwrap(), &build_path(2).unwrap()).unwrap(),
        ];
        for c in &complexes {
            for _ in 0..5 {
                let w = random_one_form(c, &mut rng);
                for v in c.vectors() {
                    bochner_ric(c, &w, v, DEFAULT_BOCHNER_TOL).unwrap();
                }
            }
        }
    }

    #[test]
    fn bochner_zero_form_is_zero() {
        let c = build_simplex_boundary(2).unwrap();
        let w = OneForm::<f64>::new();
        for v in c.vectors() {
            assert_eq!(bochner_ric(&c, &w, v, DEFAULT_BOCHNER_TOL).unwrap(), 0.0);
        }
    }

    #[test]
    fn bochner_exact_rational_mode() {
        let c = build_torus_grid(4, 4).unwrap();
        let w: OneForm<Rat> = OneForm::from_entries(
            c.vectors()
                .into_iter()
                .enumerate()
                .map(|(i, v)| (v, rat(2 * i as i64 + 1, 7))),
        );
        for v in c.vectors() {
            let got = bochner_ric_exact(&c, &w, v).unwrap();
            let x = w.get(v);
            // torus vectors have two 0-neighbors, so the curvature vanishes
            assert_eq!(got, rat_int(0) * x.clone() * x);
        }
    }

    #[test]
    fn bochner_value_on_c2_edge_vertex() {
        let c = build_simplex_boundary(2).unwrap();
        let mut rng = StdRng::seed_from_u64(43);
        let w = random_one_form(&c, &mut rng);
        let v = c
            .vectors()
            .into_iter()
            .find(|v| c.dim_of(v.tau) == 1)
            .unwrap();
        let got = bochner_ric(&c, &w, v, DEFAULT_BOCHNER_TOL).unwrap();
        let x = w.get(v);
        assert!((got - x * x).abs() < 1e-9);
    }
}
