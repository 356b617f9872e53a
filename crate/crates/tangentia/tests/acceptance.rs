//! Acceptance gate: one test per release criterion, each printing a
//! PASS line on success. Run with `--nocapture` to see the lines; the
//! per-test ok/FAILED status carries the same information either way.

mod common;

use std::time::Instant;

use common::{random_arrangement, tetrahedron, tetrahedron_lines};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tangentia::families::{
    crosspolytope_real_window, crosspolytope_tangents, in_reality_region,
    perturbed_crosspolytope_tangents, perturbed_cubic_discriminant, region_sample,
    tetra_axes_arrangement, tetra_axes_tangents, PerturbedParams, TetraAxesParams,
};
use tangentia::formulation::{
    bezout_bound_quadrics, bezout_bound_spheres, build_reduced_system, grassmannian_degree,
    simplex_cubic,
};
use tangentia::geometry::conjugate_line;
use tangentia::quadrics::ProjectiveQuadric;
use tangentia::solver::{match_lines, solve_arrangement, solve_quadrics};
use tangentia::{Sphere, SphereArrangement, TrackerConfig};

#[test]
fn c1_seeded_random_arrangements_have_generic_counts() {
    let t0 = Instant::now();
    for n in [3usize, 4, 5, 6] {
        let arr = random_arrangement(n, 2026 + n as u64);
        let cfg = TrackerConfig::with_seed(n as u64);
        let set = solve_arrangement(&arr, &cfg).unwrap();
        assert_eq!(
            set.total_multiplicity(),
            3 << (n - 1),
            "n = {n}: expected the generic count"
        );
        for rec in &set.records {
            assert!(
                rec.residual < 1e-8,
                "n = {n}: residual {:.3e}",
                rec.residual
            );
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:.2?}");
    println!("ACCEPTANCE C1 (seeded random counts n=3..6): PASS");
}

#[test]
fn c2_tetrahedron_multiplicity_structure() {
    // Cluster tolerances: endpoints within dedup_tol = 1e−6 (projective
    // chordal distance) merge into one solution record; clusters closer
    // than 5× that tolerance to each other are rejected as unresolved
    // instead of silently merged or split.
    let cfg = TrackerConfig::with_seed(1);
    assert_eq!(cfg.dedup_tol, 1e-6);

    // Generic radius: 12 distinct real tangents matching the closed form.
    let set = solve_arrangement(&tetrahedron(1.45), &cfg).unwrap();
    assert_eq!(set.records.len(), 12);
    assert_eq!(set.real_count(), 12);
    assert!(set.records.iter().all(|r| r.multiplicity == 1));
    let worst = match_lines(&tetrahedron_lines(1.45), &set.lines()).unwrap();
    assert!(worst < 1e-6, "closed-form mismatch {worst:.3e}");

    // r = √2: the three coordinate axes, each of multiplicity 4.
    let set = solve_arrangement(&tetrahedron(2f64.sqrt()), &cfg).unwrap();
    let mut mults: Vec<usize> = set.records.iter().map(|r| r.multiplicity).collect();
    mults.sort_unstable();
    assert_eq!(mults, vec![4, 4, 4]);
    // real_count is multiplicity-weighted: 3 real lines x multiplicity 4.
    assert_eq!(set.real_count(), 12);
    assert!(set.records.iter().all(|r| r.is_real));

    // r = 3/2: six tangents of multiplicity 2.
    let set = solve_arrangement(&tetrahedron(1.5), &cfg).unwrap();
    let mut mults: Vec<usize> = set.records.iter().map(|r| r.multiplicity).collect();
    mults.sort_unstable();
    assert_eq!(mults, vec![2; 6]);
    // 6 real lines x multiplicity 2.
    assert_eq!(set.real_count(), 12);
    assert!(set.records.iter().all(|r| r.is_real));

    println!("ACCEPTANCE C2 (tetrahedron multiplicity structure): PASS");
}

#[test]
fn c3_tetra_axes_closed_form_and_cross_check() {
    for (n, r2, gamma, delta) in [
        (4usize, 2.45f64, 2.4f64, 2.49f64),
        (5, 2.68, 8.0 / 3.0, 97.0 / 36.0),
    ] {
        let p = TetraAxesParams::new(n, 2.0, r2.sqrt()).unwrap();
        assert!((p.gamma() - gamma).abs() < 1e-12);
        assert!((p.delta() - delta).abs() < 1e-12);
        assert!(in_reality_region(&p));

        let cfg = TrackerConfig::with_seed(9);
        let closed = tetra_axes_tangents(&p, &cfg).unwrap();
        assert_eq!(closed.records.len(), 3 << (n - 1));
        assert_eq!(closed.real_count(), 3 << (n - 1));
        for rec in &closed.records {
            assert!(rec.residual < 1e-10, "residual {:.3e}", rec.residual);
        }

        // Independent homotopy run over the same arrangement.
        let arr = tetra_axes_arrangement(&p).unwrap();
        let solved = solve_arrangement(&arr, &cfg).unwrap();
        assert_eq!(solved.total_multiplicity(), 3 << (n - 1));
        let worst = match_lines(&closed.lines(), &solved.lines()).unwrap();
        assert!(worst < 1e-5, "cross-check distance {worst:.3e}");
    }
    println!("ACCEPTANCE C3 (tetra-axes closed form + homotopy cross-check): PASS");
}

#[test]
fn c4_reality_region_grid() {
    let a_grid: Vec<f64> = (0..100).map(|j| 1.0 + 2.0 * j as f64 / 99.0).collect();
    let r_grid: Vec<f64> = (0..100).map(|j| 3f64.sqrt() * j as f64 / 99.0).collect();

    // n = 5: the all-real region is bounded, has interior, and sits
    // inside {a² > 2} ∩ {r² < 3}.
    let rows = region_sample(5, &a_grid, &r_grid).unwrap();
    assert_eq!(rows.len(), 10_000);
    let all_real: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].all_real).collect();
    assert!(!all_real.is_empty());
    for &i in &all_real {
        let c = &rows[i];
        assert!(c.a * c.a > 2.0 && c.r * c.r < 3.0);
        assert_eq!(c.count_real, 48);
    }
    // Bounded: no all-real point touches any edge of the grid.
    for &i in &all_real {
        let (ai, rj) = (i / 100, i % 100);
        assert!(ai > 0 && ai < 99 && rj > 0 && rj < 99);
    }
    // Nonempty interior: a point whose four neighbours are also all-real.
    let idx = |i: usize, j: usize| i * 100 + j;
    let interior = (1..99)
        .flat_map(|i| (1..99).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            rows[idx(i, j)].all_real
                && rows[idx(i - 1, j)].all_real
                && rows[idx(i + 1, j)].all_real
                && rows[idx(i, j - 1)].all_real
                && rows[idx(i, j + 1)].all_real
        })
        .count();
    assert!(interior > 0, "no interior all-real point");

    // n = 4: the region escapes through the large-a edge of the same grid.
    let rows4 = region_sample(4, &a_grid, &r_grid).unwrap();
    let boundary_hits = rows4
        .iter()
        .filter(|c| c.all_real && c.a >= 3.0 - 1e-12)
        .count();
    assert!(boundary_hits > 0, "n = 4 region should reach a = 3");

    println!("ACCEPTANCE C4 (reality region on 100x100 grid): PASS");
}

#[test]
fn c5_crosspolytope_windows() {
    let cfg = TrackerConfig::default();
    for n in 3..=6usize {
        let (lo, hi) = crosspolytope_real_window(n);

        // Inside the window: all 2^n tangents real.
        let set = crosspolytope_tangents(n, 0.5 * (lo + hi), &cfg).unwrap();
        assert_eq!(set.records.len(), 1 << n);
        assert_eq!(set.real_count(), 1 << n);
        for rec in &set.records {
            assert!(rec.residual < 1e-10, "residual {:.3e}", rec.residual);
        }

        // Above the window both radicands change status: the family with
        // the free-axis moment stays real, the through-origin one turns
        // complex.
        let set = crosspolytope_tangents(n, 2.0, &cfg).unwrap();
        assert_eq!(set.records.len(), 1 << n);
        assert_eq!(set.real_count(), 1 << (n - 1));

        // Below the window no tangent is real.
        let set = crosspolytope_tangents(n, 0.45 * lo, &cfg).unwrap();
        assert_eq!(set.real_count(), 0);
    }
    println!("ACCEPTANCE C5 (crosspolytope reality windows n=3..6): PASS");
}

#[test]
fn c6_perturbed_crosspolytope_seeded_draws() {
    let cfg = TrackerConfig::default();
    for n in [4usize, 5] {
        let mut rng = ChaCha8Rng::seed_from_u64(4242 + n as u64);
        for _ in 0..10 {
            let mut a: f64;
            loop {
                a = rng.random_range(0.3..2.5);
                if (a - 1.0).abs() > 0.05 {
                    break;
                }
            }
            let r = rng.random_range(0.5..1.6);
            let p = PerturbedParams::new(n, a, r).unwrap();
            assert!(
                perturbed_cubic_discriminant(&p).abs() > 1e-10,
                "degenerate draw a = {a}, r = {r}"
            );
            let set = perturbed_crosspolytope_tangents(&p, &cfg).unwrap();
            assert_eq!(set.records.len(), 3 << (n - 1), "a = {a}, r = {r}");
            for rec in &set.records {
                assert!(
                    rec.residual < 1e-9,
                    "a = {a}, r = {r}: residual {:.3e}",
                    rec.residual
                );
            }
        }
    }
    println!("ACCEPTANCE C6 (perturbed crosspolytope, 10 draws each n=4,5): PASS");
}

#[test]
fn c7_random_quadrics() {
    // Four generic quadrics in P³: exactly 32 isolated common tangents.
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let quadrics: Vec<_> = (0..4)
        .map(|_| ProjectiveQuadric::random(3, &mut rng).unwrap())
        .collect();
    let report = solve_quadrics(&quadrics, &TrackerConfig::with_seed(11)).unwrap();
    assert_eq!(report.set.total_multiplicity(), 32);
    assert_eq!(report.set.records.len(), 32, "all tangents isolated");
    assert_eq!(report.at_infinity_paths, 0);
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:.2?}");

    // Stretch: six generic quadrics in P⁴ through the squared-up system.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let quadrics: Vec<_> = (0..6)
        .map(|_| ProjectiveQuadric::random(4, &mut rng).unwrap())
        .collect();
    let report = solve_quadrics(&quadrics, &TrackerConfig::with_seed(11)).unwrap();
    assert_eq!(report.set.total_multiplicity(), 320);

    println!("ACCEPTANCE C7 (random quadrics P3 -> 32, P4 -> 320): PASS");
}

#[test]
fn c8_count_formulas() {
    // Spheres: 3·2^{n−1}.
    for (n, want) in [(3usize, 12u128), (4, 24), (6, 96), (7, 192)] {
        assert_eq!(bezout_bound_spheres(n), Some(want));
    }
    // Quadrics: 2^{2n−2}·C(2n−2, n−1)/n. For n = 5 this is
    // 256·70/5 = 3584; a transcribed figure of 3580 circulates but does
    // not fit the formula (it is not divisible by 2^8).
    for (n, want) in [
        (3usize, 32u128),
        (4, 320),
        (5, 3584),
        (6, 43_008),
        (7, 540_672),
    ] {
        assert_eq!(bezout_bound_quadrics(n), Some(want));
    }
    // Grassmannian degree: the Catalan numbers.
    for (n, want) in [(3usize, 2u128), (6, 42), (7, 132)] {
        assert_eq!(grassmannian_degree(n), Some(want));
    }
    println!("ACCEPTANCE C8 (count formulas incl. n=5 = 3584): PASS");
}

#[test]
fn c9_identities_and_invariances() {
    // Simplex cubic factorization in three variables.
    let cubic = simplex_cubic(3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let t: Vec<Complex64> = (0..3)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let lhs = cubic.evaluate(&t).unwrap();
        let rhs = (t[0] + t[1]) * (t[0] + t[2]) * (t[1] + t[2]);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    // Conjugate closure of a seeded random solve.
    let arr = random_arrangement(4, 90);
    let set = solve_arrangement(&arr, &TrackerConfig::with_seed(2)).unwrap();
    assert_eq!(set.total_multiplicity(), 24);
    let lines = set.lines();
    for rec in set.records.iter().filter(|r| !r.is_real) {
        let d = common::nearest_distance(&conjugate_line(&rec.line), &lines);
        assert!(d < 1e-6, "conjugate closure violated ({d:.3e})");
    }

    // Count invariance under ten rigid motions and scalings.
    let base = random_arrangement(4, 91);
    let base_set = solve_arrangement(&base, &TrackerConfig::with_seed(3)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10 {
        let raw = DMatrix::<f64>::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
        let qr = raw.qr();
        let mut q = qr.q();
        if q.determinant() < 0.0 {
            // Make it a rotation.
            for i in 0..4 {
                q[(i, 0)] = -q[(i, 0)];
            }
        }
        let shift = DVector::<f64>::from_fn(4, |_, _| rng.random_range(-2.0..2.0));
        let scale = rng.random_range(0.5..2.0);
        let spheres: Vec<Sphere> = base
            .spheres()
            .iter()
            .map(|s| {
                let c = (&q * s.center()) * scale + &shift;
                Sphere::new(c, s.radius() * scale).unwrap()
            })
            .collect();
        let arr = SphereArrangement::new(4, spheres).unwrap();
        let set = solve_arrangement(&arr, &TrackerConfig::with_seed(3)).unwrap();
        assert_eq!(set.total_multiplicity(), base_set.total_multiplicity());
        assert_eq!(set.real_count(), base_set.real_count());
    }

    // Analytic Jacobian of the reduced system vs central differences.
    let arr = random_arrangement(4, 92);
    let reduced = build_reduced_system(&arr).unwrap();
    let system = reduced.system();
    let jac = system.jacobian().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x: Vec<Complex64> = (0..4)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let h = 1e-5;
    for (i, row) in jac.iter().enumerate() {
        for (k, entry) in row.iter().enumerate() {
            let analytic = entry.evaluate(&x).unwrap();
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += Complex64::new(h, 0.0);
            xm[k] -= Complex64::new(h, 0.0);
            let fd = (system.polys()[i].evaluate(&xp).unwrap()
                - system.polys()[i].evaluate(&xm).unwrap())
                / Complex64::new(2.0 * h, 0.0);
            assert!(
                (analytic - fd).norm() < 1e-6,
                "J[{i}][{k}]: analytic {analytic} vs fd {fd}"
            );
        }
    }

    println!("ACCEPTANCE C9 (identities and invariances): PASS");
}
