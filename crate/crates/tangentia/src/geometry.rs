//! Spheres, lines in moment coordinates, and the tangency residual.
//!
//! A line is stored as a pair `(p, v)` of complex n-vectors: `v` spans the
//! direction and `p` is the point on the line with `p·v = 0` (the moment
//! point). Throughout, `x·y = Σ x_i y_i` is the bilinear dot product — no
//! conjugation — so `v·v` may vanish for complex `v` ("isotropic" directions).
//!
//! Tangency of the line to a sphere with center `c` and radius `r` is the
//! vanishing of
//!
//! ```text
//! (v·v)(p·p) − 2(v·v)(p·c) + (v·v)(c·c) − (v·c)² − r²(v·v)
//! ```
//!
//! which is the squared-distance condition cleared of its `v·v` denominator,
//! and therefore also meaningful for complex lines.

use nalgebra::{DVector, DVectorView};
use num_complex::Complex64;
use thiserror::Error;

/// Complex column vector used for line data.
pub type CVec = DVector<Complex64>;

/// Relative threshold below which `v·v` is treated as numerically isotropic.
pub const ISOTROPY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("sphere radius must be positive (got {0})")]
    NonPositiveRadius(f64),
    #[error("ambient dimension must be at least 3 (got {0})")]
    DimensionTooSmall(usize),
    #[error("expected 2n-2 = {expected} spheres for n = {n}, got {got}")]
    WrongSphereCount {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("sphere {index} has a center of dimension {got}, expected {expected}")]
    CenterDimension {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("direction is isotropic (v·v ≈ 0), moment point undefined")]
    IsotropicDirection,
    #[error("operation requires a real line, but the line has imaginary parts")]
    ComplexLine,
    #[error("moment constraint violated: |p·v| = {0:.3e} after normalization")]
    MomentViolation(f64),
}

/// Bilinear dot product `Σ x_i y_i` (no conjugation) with a dimension check.
pub fn dot(x: &CVec, y: &CVec) -> Result<Complex64, GeometryError> {
    if x.len() != y.len() {
        return Err(GeometryError::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.dot(y))
}

/// A sphere in `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sphere {
    center: DVector<f64>,
    radius: f64,
}

impl Sphere {
    pub fn new(center: DVector<f64>, radius: f64) -> Result<Self, GeometryError> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(GeometryError::NonPositiveRadius(radius));
        }
        Ok(Sphere { center, radius })
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Center lifted to a complex vector.
    pub fn complex_center(&self) -> CVec {
        CVec::from_iterator(
            self.center.len(),
            self.center.iter().map(|&x| Complex64::new(x, 0.0)),
        )
    }
}

/// `2n-2` spheres in `R^n` — the count for which finitely many common
/// tangent lines are expected.
#[derive(Clone, Debug)]
pub struct SphereArrangement {
    n: usize,
    spheres: Vec<Sphere>,
}

impl SphereArrangement {
    pub fn new(n: usize, spheres: Vec<Sphere>) -> Result<Self, GeometryError> {
        if n < 3 {
            return Err(GeometryError::DimensionTooSmall(n));
        }
        let expected = 2 * n - 2;
        if spheres.len() != expected {
            return Err(GeometryError::WrongSphereCount {
                n,
                expected,
                got: spheres.len(),
            });
        }
        for (index, s) in spheres.iter().enumerate() {
            if s.dim() != n {
                return Err(GeometryError::CenterDimension {
                    index,
                    expected: n,
                    got: s.dim(),
                });
            }
        }
        Ok(SphereArrangement { n, spheres })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spheres(&self) -> &[Sphere] {
        &self.spheres
    }

    /// The expected number of complex common tangents, `3·2^{n-1}`.
    pub fn expected_tangent_count(&self) -> u128 {
        3u128 << (self.n - 1)
    }
}

/// A line `{p + t v}` in moment coordinates: `p·v = 0` whenever `v·v ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    pub p: CVec,
    pub v: CVec,
}

impl Line {
    /// Build a line from any point on it and a direction; the point is
    /// replaced by the moment point when the direction is non-isotropic.
    /// For isotropic directions the point is kept as given.
    pub fn new(point: CVec, direction: CVec) -> Result<Self, GeometryError> {
        if point.len() != direction.len() {
            return Err(GeometryError::DimensionMismatch {
                left: point.len(),
                right: direction.len(),
            });
        }
        let vnorm = direction.norm();
        if vnorm == 0.0 {
            return Err(GeometryError::ZeroDirection);
        }
        let v2 = direction.dot(&direction);
        if v2.norm() < ISOTROPY_TOL * vnorm * vnorm {
            return Ok(Line {
                p: point,
                v: direction,
            });
        }
        let t = point.dot(&direction) / v2;
        let p = &point - &direction.map(|x| x * t);
        Ok(Line { p, v: direction })
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// `v·v` of the stored direction.
    pub fn direction_square(&self) -> Complex64 {
        self.v.dot(&self.v)
    }

    /// Whether the stored direction is numerically isotropic relative to its
    /// magnitude.
    pub fn is_isotropic(&self) -> bool {
        let vnorm = self.v.norm();
        self.direction_square().norm() < ISOTROPY_TOL * vnorm * vnorm
    }

    /// Same line with direction scaled so its largest-modulus coordinate is
    /// exactly 1; the moment point is unchanged (it is scale-invariant).
    pub fn canonicalized(&self) -> Line {
        let k = max_modulus_index(&self.v);
        let vk = self.v[k];
        if vk.norm() == 0.0 {
            return self.clone();
        }
        Line {
            p: self.p.clone(),
            v: self.v.map(|x| x / vk),
        }
    }
}

/// Replace `p` by the moment point of the line through `p` with direction
/// `v`: the unique point `p − (p·v / v·v) v` satisfying `p·v = 0`.
pub fn normalize_moment(p: &CVec, v: &CVec) -> Result<Line, GeometryError> {
    if p.len() != v.len() {
        return Err(GeometryError::DimensionMismatch {
            left: p.len(),
            right: v.len(),
        });
    }
    let vnorm = v.norm();
    if vnorm == 0.0 {
        return Err(GeometryError::ZeroDirection);
    }
    let v2 = v.dot(v);
    if v2.norm() < ISOTROPY_TOL * vnorm * vnorm {
        return Err(GeometryError::IsotropicDirection);
    }
    let t = p.dot(v) / v2;
    Ok(Line {
        p: p - &v.map(|x| x * t),
        v: v.clone(),
    })
}

/// The cleared tangency residual of a line against a sphere:
/// `(v·v)(p·p) − 2(v·v)(p·c) + (v·v)(c·c) − (v·c)² − r²(v·v)`.
///
/// Zero exactly when the line is tangent to the sphere. The expression is
/// quadratic in `v`, so callers comparing against an absolute tolerance
/// should canonicalize the direction first (see [`Line::canonicalized`]).
pub fn tangency_residual(sphere: &Sphere, line: &Line) -> Result<Complex64, GeometryError> {
    if sphere.dim() != line.dim() {
        return Err(GeometryError::DimensionMismatch {
            left: sphere.dim(),
            right: line.dim(),
        });
    }
    let c = sphere.complex_center();
    let r2 = Complex64::new(sphere.radius * sphere.radius, 0.0);
    let v2 = line.v.dot(&line.v);
    let p2 = line.p.dot(&line.p);
    let pc = line.p.dot(&c);
    let cc = c.dot(&c);
    let vc = line.v.dot(&c);
    Ok(v2 * p2 - 2.0 * v2 * pc + v2 * cc - vc * vc - r2 * v2)
}

/// Largest tangency residual of a canonicalized line over an arrangement.
pub fn max_tangency_residual(
    arrangement: &SphereArrangement,
    line: &Line,
) -> Result<f64, GeometryError> {
    let canon = line.canonicalized();
    let mut worst: f64 = 0.0;
    for s in arrangement.spheres() {
        worst = worst.max(tangency_residual(s, &canon)?.norm());
    }
    Ok(worst)
}

/// Euclidean distance from a real point to a real line.
///
/// Errors when the line has imaginary parts or an isotropic direction.
pub fn distance_point_line(point: &DVector<f64>, line: &Line) -> Result<f64, GeometryError> {
    if point.len() != line.dim() {
        return Err(GeometryError::DimensionMismatch {
            left: point.len(),
            right: line.dim(),
        });
    }
    let canon = line.canonicalized();
    let scale = 1.0 + canon.p.norm().max(canon.v.norm());
    let imag = canon
        .p
        .iter()
        .chain(canon.v.iter())
        .map(|z| z.im.abs())
        .fold(0.0, f64::max);
    if imag > 1e-9 * scale {
        return Err(GeometryError::ComplexLine);
    }
    let p = canon.p.map(|z| z.re);
    let v = canon.v.map(|z| z.re);
    let v2 = v.dot(&v);
    if v2 <= 0.0 {
        return Err(GeometryError::IsotropicDirection);
    }
    let d = point - &p;
    let along = v.dot(&d);
    let sq = d.dot(&d) - along * along / v2;
    Ok(sq.max(0.0).sqrt())
}

/// Index of the largest-modulus coordinate (first one on ties).
pub fn max_modulus_index(v: &CVec) -> usize {
    let mut best = 0;
    let mut best_norm = v[0].norm_sqr();
    for i in 1..v.len() {
        let n = v[i].norm_sqr();
        if n > best_norm {
            best = i;
            best_norm = n;
        }
    }
    best
}

/// Scale a projective representative so its largest-modulus coordinate is 1.
pub fn canonical_projective(v: &CVec) -> CVec {
    let k = max_modulus_index(v);
    let vk = v[k];
    if vk.norm() == 0.0 {
        return v.clone();
    }
    v.map(|x| x / vk)
}

/// Chordal distance between projective points: `sin` of the Hermitian angle
/// between the spanned complex lines. Symmetric, in `[0, 1]`, zero iff the
/// points agree projectively.
pub fn chordal_distance(u: &CVec, w: &CVec) -> f64 {
    let nu = u.norm();
    let nw = w.norm();
    if nu == 0.0 || nw == 0.0 {
        return 1.0;
    }
    // Hermitian inner product for the angle (unlike the bilinear `dot`).
    // `sin` is computed from the orthogonal complement of the projection
    // rather than from `sqrt(1 − cos²)`, which would lose half the digits
    // for nearly identical points.
    let inner: Complex64 = u.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
    let perp = w - u * (inner / (nu * nu));
    (perp.norm() / nw).min(1.0)
}

/// Whether the line admits a real representative: scale `v` by its
/// largest-modulus coordinate and test all imaginary parts (of the scaled
/// direction and of the moment point) against `tol`.
pub fn is_real_line(line: &Line, tol: f64) -> bool {
    let canon = line.canonicalized();
    let v_imag = canon.v.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let v_scale = 1.0 + canon.v.norm();
    if v_imag > tol * v_scale {
        return false;
    }
    let p_imag = canon.p.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let p_scale = 1.0 + canon.p.norm();
    p_imag <= tol * p_scale
}

/// Distance between two moment-normalized lines: the larger of the chordal
/// distance between the directions (projective) and the relative Euclidean
/// distance between the moment points (which are unique, not just
/// projective). Zero iff the lines coincide.
pub fn line_distance(a: &Line, b: &Line) -> f64 {
    let dir = chordal_distance(&a.v, &b.v);
    let scale = 1.0 + a.p.norm().min(b.p.norm());
    let pts = (&a.p - &b.p).norm() / scale;
    dir.max(pts)
}

/// Coordinatewise complex conjugate of a line. Real lines are fixed points;
/// tangency residuals against real spheres conjugate along.
pub fn conjugate_line(line: &Line) -> Line {
    Line {
        p: line.p.map(|z| z.conj()),
        v: line.v.map(|z| z.conj()),
    }
}

/// One deduplicated common tangent with its certification data.
#[derive(Clone, Debug)]
pub struct SolutionRecord {
    pub line: Line,
    /// Largest cleared-residual modulus over the input, with `v` canonical.
    pub residual: f64,
    pub is_real: bool,
    /// Path-endpoint cluster size (1 for regular solutions).
    pub multiplicity: usize,
    /// Set when `v·v` is numerically zero relative to `|v|²`.
    pub v_isotropic: bool,
}

/// Helper for building real vectors in tests and constructors.
pub fn rvec(data: &[f64]) -> DVector<f64> {
    DVector::from_row_slice(data)
}

/// Lift a real vector view to a complex one.
pub fn complexify(v: DVectorView<'_, f64>) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// Build a complex vector from interleaved (re, im) parts.
pub fn cvec_from_parts(re: &[f64], im: &[f64]) -> Result<CVec, GeometryError> {
    if re.len() != im.len() {
        return Err(GeometryError::DimensionMismatch {
            left: re.len(),
            right: im.len(),
        });
    }
    Ok(CVec::from_iterator(
        re.len(),
        re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cv(data: &[(f64, f64)]) -> CVec {
        CVec::from_iterator(data.len(), data.iter().map(|&(a, b)| Complex64::new(a, b)))
    }

    fn rl(data: &[f64]) -> CVec {
        CVec::from_iterator(data.len(), data.iter().map(|&a| Complex64::new(a, 0.0)))
    }

    #[test]
    fn dot_is_bilinear_not_hermitian() {
        let x = rl(&[1.0, 2.0, 3.0]);
        let y = rl(&[4.0, 5.0, 6.0]);
        assert_eq!(dot(&x, &y).unwrap(), Complex64::new(32.0, 0.0));
        // (i, 1)·(i, 1) = i² + 1 = 0: isotropic, would be 2 under conjugation.
        let z = cv(&[(0.0, 1.0), (1.0, 0.0)]);
        assert_eq!(dot(&z, &z).unwrap(), Complex64::new(0.0, 0.0));
        let e1 = rl(&[1.0, 0.0]);
        let e2 = rl(&[0.0, 1.0]);
        assert_eq!(dot(&e1, &e2).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn dot_rejects_dimension_mismatch() {
        let x = rl(&[1.0]);
        let y = rl(&[1.0, 2.0]);
        assert!(matches!(
            dot(&x, &y),
            Err(GeometryError::DimensionMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn tangency_residual_on_the_x_axis() {
        // Sphere centered (0,3,0): the x-axis is tangent iff r = 3.
        let line = Line::new(rl(&[0.0, 0.0, 0.0]), rl(&[1.0, 0.0, 0.0])).unwrap();
        let tangent = Sphere::new(rvec(&[0.0, 3.0, 0.0]), 3.0).unwrap();
        assert!(tangency_residual(&tangent, &line).unwrap().norm() < 1e-14);
        let miss = Sphere::new(rvec(&[0.0, 3.0, 0.0]), 2.0).unwrap();
        // v² = 1, distance² − r² = 9 − 4 = 5.
        assert!(
            (tangency_residual(&miss, &line).unwrap() - Complex64::new(5.0, 0.0)).norm() < 1e-14
        );
    }

    #[test]
    fn residual_equals_direction_square_times_distance_gap() {
        // residual = v²(dist² − r²) for real moment lines.
        let mut rng_state = 123456789u64;
        let mut next = move || {
            // Tiny deterministic LCG; plenty for a smoke identity test.
            rng_state = rng_state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((rng_state >> 33) as f64 / (1u64 << 31) as f64) * 4.0 - 2.0
        };
        for _ in 0..32 {
            let p0 = rvec(&[next(), next(), next()]);
            let v0 = rvec(&[next(), next(), 1.0 + next().abs()]);
            let c0 = rvec(&[next(), next(), next()]);
            let line = Line::new(complexify(p0.as_view()), complexify(v0.as_view())).unwrap();
            let dist = distance_point_line(&c0, &line).unwrap();
            for r in [0.5, 1.0, 2.0] {
                let sphere = Sphere::new(c0.clone(), r).unwrap();
                let canon = line.canonicalized();
                let v2 = canon.direction_square();
                let expected = v2 * Complex64::new(dist * dist - r * r, 0.0);
                let got = tangency_residual(&sphere, &canon).unwrap();
                assert!(
                    (got - expected).norm() < 1e-9 * (1.0 + expected.norm()),
                    "identity failed: got {got}, expected {expected}"
                );
            }
        }
    }

    #[test]
    fn distance_examples() {
        let line = Line::new(rl(&[0.0, 0.0, 0.0]), rl(&[1.0, 0.0, 0.0])).unwrap();
        assert!((distance_point_line(&rvec(&[0.0, 3.0, 0.0]), &line).unwrap() - 3.0).abs() < 1e-14);
        assert!(distance_point_line(&rvec(&[5.0, 0.0, 0.0]), &line).unwrap() < 1e-12);
    }

    #[test]
    fn distance_rejects_complex_or_isotropic_lines() {
        let complex_line = Line {
            p: cv(&[(0.0, 1.0), (0.0, 0.0)]),
            v: rl(&[1.0, 0.0]),
        };
        assert!(matches!(
            distance_point_line(&rvec(&[0.0, 0.0]), &complex_line),
            Err(GeometryError::ComplexLine)
        ));
        let iso = Line {
            p: rl(&[0.0, 0.0]),
            v: cv(&[(0.0, 1.0), (1.0, 0.0)]),
        };
        assert!(distance_point_line(&rvec(&[0.0, 0.0]), &iso).is_err());
    }

    #[test]
    fn normalize_moment_examples() {
        let line = normalize_moment(&rl(&[1.0, 0.0]), &rl(&[1.0, 0.0])).unwrap();
        assert!(line.p.norm() < 1e-15);
        // Idempotent.
        let again = normalize_moment(&line.p, &line.v).unwrap();
        assert!((&again.p - &line.p).norm() < 1e-15);
        // Isotropic direction is rejected.
        let iso = cv(&[(0.0, 1.0), (1.0, 0.0)]);
        assert!(matches!(
            normalize_moment(&rl(&[1.0, 1.0]), &iso),
            Err(GeometryError::IsotropicDirection)
        ));
    }

    #[test]
    fn is_real_line_examples() {
        let real = Line::new(rl(&[1.0, 0.0, 0.0]), rl(&[0.0, 1.0, 0.0])).unwrap();
        assert!(is_real_line(&real, 1e-7));
        // Scaling a real line by i keeps it real (projective direction).
        let scaled = Line {
            p: real.p.clone(),
            v: real.v.map(|z| z * Complex64::new(0.0, 1.0)),
        };
        assert!(is_real_line(&scaled, 1e-7));
        let complex = Line {
            p: cv(&[(1.0, 0.5), (0.0, 0.0), (0.0, 0.0)]),
            v: rl(&[0.0, 1.0, 0.0]),
        };
        assert!(!is_real_line(&complex, 1e-7));
        let mixed = Line {
            p: rl(&[1.0, 0.0, 0.0]),
            v: cv(&[(0.0, 0.0), (1.0, 0.0), (0.3, 0.4)]),
        };
        assert!(!is_real_line(&mixed, 1e-7));
    }

    #[test]
    fn conjugate_line_examples() {
        let l = Line {
            p: cv(&[(1.0, 2.0), (0.0, 0.0)]),
            v: cv(&[(0.0, -1.0), (1.0, 0.0)]),
        };
        let lc = conjugate_line(&l);
        assert_eq!(lc.p[0], Complex64::new(1.0, -2.0));
        assert_eq!(lc.v[0], Complex64::new(0.0, 1.0));
        // Involution.
        let back = conjugate_line(&lc);
        assert_eq!(back.p, l.p);
        assert_eq!(back.v, l.v);
        // Real lines are fixed.
        let real = Line::new(rl(&[1.0, 0.0]), rl(&[0.0, 2.0])).unwrap();
        let rc = conjugate_line(&real);
        assert_eq!(rc.p, real.p);
        assert_eq!(rc.v, real.v);
    }

    #[test]
    fn conjugation_commutes_with_residual() {
        let sphere = Sphere::new(rvec(&[1.0, -2.0, 0.5]), 1.3).unwrap();
        let line = Line::new(
            cv(&[(0.3, 0.7), (1.0, -0.2), (0.0, 0.4)]),
            cv(&[(1.0, 0.1), (-0.5, 0.6), (0.2, 0.0)]),
        )
        .unwrap();
        let res = tangency_residual(&sphere, &line).unwrap();
        let res_conj = tangency_residual(&sphere, &conjugate_line(&line)).unwrap();
        assert!((res.conj() - res_conj).norm() < 1e-12 * (1.0 + res.norm()));
    }

    #[test]
    fn arrangement_validation() {
        let s = |x: f64| Sphere::new(rvec(&[x, 0.0, 0.0]), 1.0).unwrap();
        assert!(SphereArrangement::new(3, vec![s(0.0), s(1.0), s(2.0), s(3.0)]).is_ok());
        let err = SphereArrangement::new(3, vec![s(0.0), s(1.0), s(2.0), s(3.0), s(4.0)]);
        assert!(matches!(
            err,
            Err(GeometryError::WrongSphereCount {
                n: 3,
                expected: 4,
                got: 5
            })
        ));
        assert!(matches!(
            SphereArrangement::new(2, vec![s(0.0), s(1.0)]),
            Err(GeometryError::DimensionTooSmall(2))
        ));
        assert!(Sphere::new(rvec(&[0.0]), 0.0).is_err());
        assert!(Sphere::new(rvec(&[0.0]), -1.0).is_err());
    }

    #[test]
    fn chordal_distance_basics() {
        let u = rl(&[1.0, 0.0]);
        let w = cv(&[(0.0, 2.0), (0.0, 0.0)]); // i-scaled multiple: same point
        assert!(chordal_distance(&u, &w) < 1e-12);
        let e2 = rl(&[0.0, 1.0]);
        assert!((chordal_distance(&u, &e2) - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn moment_point_is_orthogonal_and_on_the_line(
            p in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 4),
            v in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 4),
        ) {
            let pv = cv(&p.iter().map(|&(a, b)| (a, b)).collect::<Vec<_>>());
            let vv = cv(&v.iter().map(|&(a, b)| (a, b)).collect::<Vec<_>>());
            let vnorm = vv.norm();
            prop_assume!(vnorm > 1e-3);
            let v2 = vv.dot(&vv);
            prop_assume!(v2.norm() > 1e-3 * vnorm * vnorm);
            let line = normalize_moment(&pv, &vv).unwrap();
            let orth = line.p.dot(&line.v).norm();
            prop_assert!(orth < 1e-10 * (1.0 + line.p.norm() * vnorm));
            // p − p' is parallel to v: (p − p') − ((p − p')·v / v·v) v = 0.
            let diff = &pv - &line.p;
            let t = diff.dot(&vv) / v2;
            let residual = (&diff - &vv.map(|x| x * t)).norm();
            prop_assert!(residual < 1e-9 * (1.0 + pv.norm()));
        }

        #[test]
        fn canonicalized_direction_has_unit_max_modulus(
            v in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 5),
        ) {
            let vv = cv(&v);
            prop_assume!(vv.norm() > 1e-3);
            let line = Line { p: CVec::zeros(5), v: vv };
            let canon = line.canonicalized();
            let max = canon.v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!((max - 1.0).abs() < 1e-12);
        }
    }
}
