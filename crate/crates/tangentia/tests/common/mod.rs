//! Shared fixtures for the integration suites.
//!
//! Each test binary compiles its own copy, so helpers unused by one
//! binary are still needed by another.
#![allow(dead_code)]

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tangentia::geometry::{line_distance, CVec};
use tangentia::roots::solve_quadratic;
use tangentia::{Line, Sphere, SphereArrangement};

/// The four vertices of the symmetric tetrahedron in `R³` (pairwise
/// distance `2√2`), all spheres of the given radius.
pub fn tetrahedron(radius: f64) -> SphereArrangement {
    let vs = [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ];
    let spheres = vs
        .iter()
        .map(|c| Sphere::new(DVector::from_row_slice(c), radius).unwrap())
        .collect();
    SphereArrangement::new(3, spheres).unwrap()
}

/// Closed-form tangents of the symmetric tetrahedron: for each cyclic
/// case one direction coordinate vanishes, the matching moment coordinate
/// is `±√(r²−2)` and the remaining direction coordinate solves
/// `p t² + t + p = 0` (third coordinate normalized to 1).
pub fn tetrahedron_lines(radius: f64) -> Vec<Line> {
    let p_mag = Complex64::new(radius * radius - 2.0, 0.0).sqrt();
    let mut out = Vec::new();
    for zero in 0..3usize {
        let j = (zero + 1) % 3;
        let k = (zero + 2) % 3;
        for sign in [1.0, -1.0] {
            let p_i = p_mag * sign;
            for v_j in solve_quadratic(p_i, Complex64::new(1.0, 0.0), p_i) {
                let mut p = CVec::zeros(3);
                let mut v = CVec::zeros(3);
                p[zero] = p_i;
                v[j] = v_j;
                v[k] = Complex64::new(1.0, 0.0);
                out.push(Line::new(p, v).unwrap());
            }
        }
    }
    out
}

/// A generic arrangement of `2n−2` spheres: centers uniform in
/// `[−1, 1]^n`, radii uniform in `[0.6, 1.4]`, reproducible from the
/// seed.
pub fn random_arrangement(n: usize, seed: u64) -> SphereArrangement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spheres = (0..2 * n - 2)
        .map(|_| {
            let c = DVector::from_iterator(n, (0..n).map(|_| rng.random_range(-1.0..1.0)));
            let r = rng.random_range(0.6..1.4);
            Sphere::new(c, r).unwrap()
        })
        .collect();
    SphereArrangement::new(n, spheres).unwrap()
}

/// Worst pairing distance between two line sets that must describe the
/// same solution set; panics with a diagnostic if the sizes differ or the
/// greedy matching exceeds `tol`.
pub fn assert_sets_match(expected: &[Line], found: &[Line], tol: f64, what: &str) {
    assert_eq!(
        expected.len(),
        found.len(),
        "{what}: set sizes differ ({} vs {})",
        expected.len(),
        found.len()
    );
    let worst = tangentia::solver::match_lines(expected, found)
        .unwrap_or_else(|| panic!("{what}: matching failed"));
    assert!(
        worst < tol,
        "{what}: worst matched line distance {worst:.3e} exceeds {tol:.0e}"
    );
}

/// Distance from `line` to the nearest member of `set`.
pub fn nearest_distance(line: &Line, set: &[Line]) -> f64 {
    set.iter()
        .map(|m| line_distance(line, m))
        .fold(f64::INFINITY, f64::min)
}
