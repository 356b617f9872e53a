//! Integration tests for the closed-form families: continuity between
//! the perturbed arrangement and its symmetric limit, reality-window
//! boundary behaviour, and refusal at vanishing discriminants.

mod common;

use common::nearest_distance;
use tangentia::families::{
    crosspolytope_tangents, perturbed_crosspolytope_tangents, perturbed_cubic_discriminant,
    FamilyError, PerturbedParams,
};
use tangentia::solver::TrackerConfig;

/// As `a → 1` the perturbed arrangement becomes the crosspolytope.
/// Two thirds of its tangents converge to the crosspolytope tangents
/// at a rate linear in `|a − 1|`; the remaining third recedes to
/// infinity like `1 / |a − 1|`.
#[test]
fn perturbed_family_degenerates_to_the_crosspolytope() {
    let cfg = TrackerConfig::with_seed(7);
    let n = 4;
    let r = 0.9;
    let cross = crosspolytope_tangents(n, r, &cfg).unwrap();
    let cross_lines = cross.lines();
    assert_eq!(cross_lines.len(), 1 << n);

    for da in [1e-3, -1e-3, 1e-4, -1e-4] {
        let p = PerturbedParams::new(n, 1.0 + da, r).unwrap();
        let pert = perturbed_crosspolytope_tangents(&p, &cfg).unwrap();
        let pert_lines = pert.lines();
        assert_eq!(pert_lines.len(), 3 << (n - 1));

        // Every crosspolytope tangent is approximated linearly in |a − 1|.
        for line in &cross_lines {
            let d = nearest_distance(line, &pert_lines);
            assert!(
                d < 3.0 * da.abs(),
                "crosspolytope line {d:.3e} away at a = 1 + {da:+.0e}"
            );
        }

        // Exactly 2^n perturbed tangents shadow the crosspolytope; the
        // other 2^{n-1} escape (their moment points blow up).
        let near: Vec<f64> = pert_lines
            .iter()
            .map(|l| nearest_distance(l, &cross_lines))
            .collect();
        assert_eq!(near.iter().filter(|&&d| d < 0.01).count(), 1 << n);
        assert_eq!(near.iter().filter(|&&d| d > 1e2).count(), 1 << (n - 1));
    }

    // The exact limit is refused: the symmetric arrangement has its own
    // enumeration with a different count.
    let p = PerturbedParams::new(n, 1.0, r).unwrap();
    assert!(matches!(
        perturbed_crosspolytope_tangents(&p, &cfg),
        Err(FamilyError::InvalidParameter(_))
    ));
}

/// Reality flips at the ends of the crosspolytope window
/// `(sqrt(1 - 1/(n-1)), 1)`: all `2^n` tangents are real inside, the
/// through-origin half survives above, none below, and the exact
/// boundary radii are refused as degenerate.
#[test]
fn crosspolytope_window_boundaries_and_flanks() {
    let cfg = TrackerConfig::with_seed(7);
    for n in [4usize, 5] {
        let lo = (1.0 - 1.0 / (n as f64 - 1.0)).sqrt();
        let eps = 1e-3;

        for r in [lo, 1.0] {
            assert!(
                matches!(
                    crosspolytope_tangents(n, r, &cfg),
                    Err(FamilyError::DegenerateRadius(_))
                ),
                "n = {n}, boundary r = {r} must be refused"
            );
        }

        for (r, want_real) in [
            (lo - eps, 0usize),
            (lo + eps, 1 << n),
            (1.0 - eps, 1 << n),
            (1.0 + eps, 1 << (n - 1)),
        ] {
            let set = crosspolytope_tangents(n, r, &cfg).unwrap();
            assert_eq!(set.records.len(), 1 << n, "n = {n}, r = {r}");
            assert_eq!(set.real_count(), want_real, "n = {n}, r = {r}");
        }
    }
}

/// Bisecting the cubic discriminant in `r` at fixed `a` locates the
/// boundary between no-real and all-real-shadowed regimes; the solver
/// refuses the boundary radius instead of returning unstable output.
#[test]
fn perturbed_discriminant_root_is_located_and_refused() {
    let cfg = TrackerConfig::with_seed(7);
    let n = 4;
    let a = 1.5;
    let disc_at = |r: f64| perturbed_cubic_discriminant(&PerturbedParams::new(n, a, r).unwrap());

    let (mut lo, mut hi) = (0.90f64, 0.98f64);
    let sign_lo = disc_at(lo).signum();
    assert_ne!(
        sign_lo,
        disc_at(hi).signum(),
        "bracket must straddle a root"
    );
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if disc_at(mid).signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    assert!((0.93..0.95).contains(&root), "root at {root}");
    assert!(disc_at(root).abs() < 1e-10);

    let refused =
        perturbed_crosspolytope_tangents(&PerturbedParams::new(n, a, root).unwrap(), &cfg);
    assert!(matches!(
        refused,
        Err(FamilyError::DiscriminantVanishes { .. })
    ));

    // Both flanks succeed with the full count; reality flips across
    // the root together with the discriminant sign.
    let below =
        perturbed_crosspolytope_tangents(&PerturbedParams::new(n, a, 0.93).unwrap(), &cfg).unwrap();
    assert_eq!(below.records.len(), 3 << (n - 1));
    assert_eq!(below.real_count(), 0);
    assert!(disc_at(0.93) < 0.0);

    let above =
        perturbed_crosspolytope_tangents(&PerturbedParams::new(n, a, 0.99).unwrap(), &cfg).unwrap();
    assert_eq!(above.records.len(), 3 << (n - 1));
    assert_eq!(above.real_count(), 1 << n);
    assert!(disc_at(0.99) > 0.0);
}
