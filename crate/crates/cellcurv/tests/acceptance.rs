//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; a failing criterion fails its test.

use cellcurv::complex::{
    build_interval_grid, build_path, build_simplex_boundary, build_torus_grid, product, validate,
    CellComplex,
};
use cellcurv::forman;
use cellcurv::forms::{
    bochner_ric, d_star_one, d_zero, flat_balance, inner_one, inner_zero, OneForm, ZeroForm,
};
use cellcurv::lly;
use cellcurv::rational::{rat, rat_int, rat_to_f64, rat_usize, Rat};
use cellcurv::spectral;
use cellcurv::transport;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn corpus() -> Vec<(&'static str, CellComplex)> {
    vec![
        ("C^2", build_simplex_boundary(2).unwrap()),
        ("C^3", build_simplex_boundary(3).unwrap()),
        ("C^4", build_simplex_boundary(4).unwrap()),
        ("torus(4,4)", build_torus_grid(4, 4).unwrap()),
        ("torus(5,4)", build_torus_grid(5, 4).unwrap()),
        ("grid([3,3])", build_interval_grid(&[3, 3]).unwrap()),
        (
            "triangle x path(2)",
            product(&build_simplex_boundary(1).unwrap(), &build_path(2).unwrap()).unwrap(),
        ),
    ]
}

#[test]
fn criterion_01_theorem_equality_on_corpus() {
    let mut vectors = 0;
    for (name, c) in corpus() {
        let records = lly::verify_theorem(&c).expect(name);
        for r in &records {
            assert!(
                r.matches(),
                "{name}: transport kappa {} != formula {} at {:?}",
                r.kappa,
                r.formula_value,
                r.vector
            );
        }
        vectors += records.len();
    }
    println!("ACCEPTANCE 1 PASS - comparison identity exact on {vectors} corpus vectors");
}

#[test]
fn criterion_02_simplex_boundary_example_values() {
    for n in 2..=4usize {
        let c = build_simplex_boundary(n).unwrap();
        let edge_kappa = rat(2, ((n + 1) * (n + 2)) as i64);
        let middle_kappa = rat(2, (n + 2) as i64);
        for v in c.vectors() {
            let dt = c.dim_of(v.tau);
            let ds = c.dim_of(v.sigma);
            if ds == 0 {
                assert_eq!(forman::ric(&c, v).unwrap(), 1, "C^{n} edge>vertex Ric");
                assert_eq!(
                    lly::lly_ricci(&c, v).unwrap(),
                    edge_kappa,
                    "C^{n} edge>vertex kappa"
                );
            } else if ds >= 1 && dt < n {
                assert_eq!(forman::ric(&c, v).unwrap(), 2, "C^{n} middle Ric");
                assert_eq!(
                    lly::lly_ricci(&c, v).unwrap(),
                    middle_kappa,
                    "C^{n} middle kappa"
                );
            }
        }
        // middle vectors exist exactly for n >= 3
        let has_middle = c
            .vectors()
            .iter()
            .any(|v| c.dim_of(v.sigma) >= 1 && c.dim_of(v.tau) < n);
        assert_eq!(has_middle, n >= 3);
    }
    println!("ACCEPTANCE 2 PASS - C^n example values exact for n = 2, 3, 4");
}

#[test]
fn criterion_03_flat_space_examples() {
    let t = build_torus_grid(4, 4).unwrap();
    for v in t.vectors() {
        assert_eq!(forman::ric(&t, v).unwrap(), 0, "torus Ric at {v:?}");
        assert!(
            lly::lly_ricci(&t, v).unwrap().is_zero(),
            "torus kappa at {v:?}"
        );
    }
    let path = build_interval_grid(&[4]).unwrap();
    let mut interior = 0;
    for v in path.vectors() {
        if path.degree(v.sigma) == 2 {
            assert_eq!(forman::ric(&path, v).unwrap(), 0, "path interior at {v:?}");
            interior += 1;
        }
    }
    assert_eq!(interior, 6, "grid([4]) has 6 interior vectors");
    println!("ACCEPTANCE 3 PASS - torus(4,4) and grid([4]) interiors are exactly flat");
}

#[test]
fn criterion_04_spectral_bound_on_c2() {
    // independent dense-eigensolver value for the 14-node graph of C^2,
    // computed before this library was built
    const LAMBDA1_GC2: f64 = 1.438447187191169;
    let c = build_simplex_boundary(2).unwrap();
    let report = spectral::eigen_bound(&c, spectral::DEFAULT_ZERO_EPS).unwrap();
    let bounds = report.bounds.expect("C^2 has positive curvature");
    assert_eq!(bounds.lambda1_bound, rat(1, 8), "bound must be exactly 1/8");
    // the paper's specialization 2/(n+2)^2 with n = 2
    assert_eq!(bounds.lambda1_bound, rat(2, 16));
    assert!(report.lambda1 >= 0.125 - 1e-9);
    assert!(
        (report.lambda1 - LAMBDA1_GC2).abs() < 1e-8,
        "lambda1 regression: got {}",
        report.lambda1
    );
    println!(
        "ACCEPTANCE 4 PASS - C^2 bound = 1/8 exactly, lambda1 = {:.12} >= 1/8",
        report.lambda1
    );
}

#[test]
fn criterion_05_myers_diameter_bound() {
    for n in 2..=4usize {
        let c = build_simplex_boundary(n).unwrap();
        let diam = spectral::diameter(&c).expect("connected");
        let bound = (n + 1) * (n + 2);
        assert!(diam <= bound, "diam(G_C{n}) = {diam} > {bound}");
        // the bound is exactly 2 / kappa_min
        let kappa = lly::global_lower_bound(&c).unwrap();
        assert_eq!(rat_int(2) / kappa, rat_usize(bound));
    }
    println!("ACCEPTANCE 5 PASS - diam(G_Cn) <= (n+1)(n+2) for n = 2, 3, 4");
}

#[test]
fn criterion_06_certificate_sandwich() {
    let mut checked = 0;
    for (name, c) in corpus() {
        for v in c.vectors() {
            let fallback = rat(4, 5);
            let min_alpha = transport::min_feasible_alpha(&c, v).expect(name);
            let alpha = if min_alpha > fallback {
                min_alpha
            } else {
                fallback
            };
            let coupling = transport::paper_coupling(&c, v, &alpha).expect(name);
            coupling.verify_marginals(&c).expect(name);
            assert_eq!(
                coupling.source,
                transport::measure_alpha(&c, v.tau, &alpha).unwrap()
            );
            assert_eq!(
                coupling.target,
                transport::measure_alpha(&c, v.sigma, &alpha).unwrap()
            );
            let cost = coupling.cost(&c).expect(name);
            let witness = transport::paper_dual_witness(&c, v).expect(name);
            let dual = transport::witness_value(&witness, &coupling.source, &coupling.target);
            let w = transport::wasserstein(&c, &coupling.source, &coupling.target)
                .expect(name)
                .value;
            assert!(dual <= w && w <= cost, "{name} {v:?}: sandwich violated");
            assert_eq!(dual, w, "{name} {v:?}: dual < W");
            assert_eq!(w, cost, "{name} {v:?}: W < coupling cost");
            checked += 1;
        }
    }
    println!("ACCEPTANCE 6 PASS - dual = W = coupling cost exactly on {checked} corpus vectors");
}

#[test]
fn criterion_07_structural_propositions() {
    for (name, c) in corpus() {
        let report = validate(&c);
        assert!(report.all_passed(), "{name}: {report}");
        assert!(report.diamond_ok(), "{name}: diamond property");
        forman::counting_check_all(&c).expect(name);
        assert!(
            lly::bipartite_by_dim_parity(&c),
            "{name}: parity 2-coloring"
        );
    }
    println!("ACCEPTANCE 7 PASS - counting identity, diamond property, bipartiteness on corpus");
}

#[test]
fn criterion_08_bochner_identity_property_suite() {
    let mut rng = StdRng::seed_from_u64(0xB0C57);
    for (name, c) in corpus() {
        let vectors = c.vectors();
        let mut samples = 0;
        while samples < 1000 {
            let w =
                OneForm::from_entries(vectors.iter().map(|&v| (v, rng.gen_range(-1.0..1.0f64))));
            let balance = flat_balance(&c, &w).expect(name);
            assert!(
                balance.abs() <= 1e-10,
                "{name}: flat Laplacian balance {balance}"
            );
            for &v in &vectors {
                // errors precisely when the identity deviates beyond 1e-9
                bochner_ric(&c, &w, v, 1e-9).expect(name);
                samples += 1;
            }
        }
        assert!(samples >= 1000);
    }
    println!("ACCEPTANCE 8 PASS - Bochner identity within 1e-9 on >= 1000 samples per complex");
}

#[test]
fn criterion_09_lly_lemma_properties() {
    let mut vectors = 0;
    for (name, c) in corpus() {
        for v in c.vectors() {
            let d_max = c.degree(v.tau).max(c.degree(v.sigma));
            let mut prev_h: Option<Rat> = None;
            let mut samples: Vec<(Rat, Rat)> = Vec::new();
            for alpha in lly::default_alpha_grid(d_max) {
                let k = lly::alpha_ricci(&c, v.tau, v.sigma, &alpha).expect(name);
                // vectors sit at graph distance 1
                let upper = (Rat::one() - alpha.clone()) * rat_int(2);
                assert!(
                    k <= upper,
                    "{name} {v:?}: upper-bound lemma at alpha {alpha}"
                );
                let h = k.clone() / (Rat::one() - alpha.clone());
                if let Some(p) = &prev_h {
                    assert!(&h >= p, "{name} {v:?}: h decreased");
                }
                prev_h = Some(h);
                samples.push((alpha, k));
            }
            // kappa_alpha is concave across the sampled grid: slopes of
            // consecutive chords never increase (exact cross-multiplied)
            for win in samples.windows(3) {
                let [(a1, k1), (a2, k2), (a3, k3)] = win else {
                    unreachable!()
                };
                let lhs = (k2.clone() - k1.clone()) * (a3.clone() - a2.clone());
                let rhs = (k3.clone() - k2.clone()) * (a2.clone() - a1.clone());
                assert!(lhs >= rhs, "{name} {v:?}: kappa_alpha not concave");
            }
            vectors += 1;
        }
    }
    println!("ACCEPTANCE 9 PASS - LLY lemma bounds exact on {vectors} corpus vectors");
}

#[test]
fn criterion_10_adjointness() {
    let mut rng = StdRng::seed_from_u64(0xAD707);
    for (name, c) in corpus() {
        for _ in 0..200 {
            let u = OneForm::from_entries(
                c.vectors()
                    .into_iter()
                    .map(|v| (v, rng.gen_range(-1.0..1.0f64))),
            );
            let f = ZeroForm::from_entries(c.cell_ids().map(|i| (i, rng.gen_range(-1.0..1.0f64))));
            let lhs = inner_zero(&c, &d_star_one(&c, &u), &f);
            let rhs = inner_one(&c, &u, &d_zero(&c, &f));
            assert!(
                (lhs - rhs).abs() <= 1e-12,
                "{name}: adjointness off by {}",
                (lhs - rhs).abs()
            );
        }
    }
    println!("ACCEPTANCE 10 PASS - adjointness within 1e-12 on 200 random pairs per complex");
}

/// Spectrum-side invariants over the corpus: PSD spectrum, zero
/// multiplicity equal to the component count, and both curvature bounds
/// passing whenever the curvature minimum is positive.
#[test]
fn spectral_invariants_on_corpus() {
    for (name, c) in corpus() {
        let report = spectral::eigen_bound(&c, spectral::DEFAULT_ZERO_EPS).expect(name);
        assert!(report.eigenvalues[0] >= -1e-9, "{name}: Laplacian not PSD");
        assert_eq!(
            report.zero_multiplicity,
            spectral::component_count(&c),
            "{name}: zero cluster vs components"
        );
        if report.kappa_min > Rat::zero() {
            let bounds = report.bounds.expect("positive curvature implies bounds");
            assert!(bounds.myers_pass, "{name}: Myers bound failed");
            assert!(bounds.lambda1_pass, "{name}: lambda1 bound failed");
        } else {
            assert!(
                report.bounds.is_none(),
                "{name}: bounds without positive curvature"
            );
        }
    }
}

/// Cross-check used by criterion 4's fixture: the spectral Laplacian agrees
/// with the forms-side operator on every basis function of every corpus
/// complex.
#[test]
fn laplacian_operator_cross_check() {
    for (name, c) in corpus() {
        let m = spectral::laplacian_matrix(&c);
        for basis in c.cell_ids() {
            let mut f = ZeroForm::new();
            f.set(basis, 1.0);
            let lap = cellcurv::forms::laplacian_zero(&c, &f);
            for i in c.cell_ids() {
                assert_eq!(lap.get(i), m[i][basis] as f64, "{name}");
            }
        }
    }
}

/// The spec's worked torus transport value, pinned end to end: at
/// alpha = 4/5 the Wasserstein distance between the measures around a
/// vector is exactly 1, so kappa_alpha vanishes.
#[test]
fn torus_transport_worked_example() {
    let c = build_torus_grid(4, 4).unwrap();
    let v = c.vectors()[0];
    let alpha = rat(4, 5);
    let w = transport::wasserstein(
        &c,
        &transport::measure_alpha(&c, v.tau, &alpha).unwrap(),
        &transport::measure_alpha(&c, v.sigma, &alpha).unwrap(),
    )
    .unwrap()
    .value;
    assert!(w.is_one());
    assert!(lly::alpha_ricci(&c, v.tau, v.sigma, &alpha)
        .unwrap()
        .is_zero());
    let _ = rat_to_f64(&w);
}
