//! Quadric hypersurfaces in `P^n` and line tangency in Plücker coordinates.
//!
//! A line spanned by points `x, y ∈ C^{n+1}` is tangent to the quadric
//! `zᵀQz = 0` exactly when `(xᵀQx)(yᵀQy) − (xᵀQy)² = 0`. That expression is
//! a quadratic form in the Plücker coordinates `π_ij = x_i y_j − x_j y_i`
//! (its matrix is the second compound of `Q`), so tangency to each quadric
//! is one quadric equation on the Grassmannian of lines. Combined with the
//! quadratic Grassmann relations this yields the `2^{2n-2}·C(2n-2,n-1)/n`
//! bound for `2n-2` general quadrics — and explains why spheres behave
//! differently: all sphere homogenizations contain the same imaginary
//! quadric in the hyperplane at infinity, producing an excess family of
//! common tangents there.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::{CVec, GeometryError, Line, Sphere};
use crate::poly::{PolyError, Polynomial};

#[derive(Debug, Error)]
pub enum QuadricError {
    #[error("quadric matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("quadric matrix must be symmetric (asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("quadric matrix is zero")]
    ZeroMatrix,
    #[error("ambient dimension must be at least 2, got {0}")]
    AmbientTooSmall(usize),
    #[error("Plücker vector has length {got}, expected C({m},2) = {expected}")]
    PluckerLength {
        m: usize,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A quadric hypersurface `xᵀQx = 0` in `P^n`, stored as a symmetric
/// complex `(n+1)×(n+1)` matrix normalized to unit Frobenius norm.
#[derive(Clone, Debug)]
pub struct ProjectiveQuadric {
    matrix: DMatrix<Complex64>,
}

impl ProjectiveQuadric {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self, QuadricError> {
        if matrix.nrows() != matrix.ncols() {
            return Err(QuadricError::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() < 3 {
            return Err(QuadricError::AmbientTooSmall(
                matrix.nrows().saturating_sub(1),
            ));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        if scale == 0.0 {
            return Err(QuadricError::ZeroMatrix);
        }
        let mut asym = 0.0f64;
        for i in 0..matrix.nrows() {
            for j in (i + 1)..matrix.ncols() {
                asym = asym.max((matrix[(i, j)] - matrix[(j, i)]).norm());
            }
        }
        if asym > 1e-10 * scale {
            return Err(QuadricError::NotSymmetric(asym / scale));
        }
        // Exact symmetrization, then unit Frobenius norm.
        let sym = DMatrix::from_fn(matrix.nrows(), matrix.ncols(), |i, j| {
            (matrix[(i, j)] + matrix[(j, i)]) * Complex64::new(0.5, 0.0)
        });
        let fro = sym.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Ok(ProjectiveQuadric {
            matrix: sym.map(|z| z / fro),
        })
    }

    pub fn from_real(matrix: DMatrix<f64>) -> Result<Self, QuadricError> {
        Self::new(matrix.map(|x| Complex64::new(x, 0.0)))
    }

    /// Random real symmetric quadric with standard-normal entries.
    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self, QuadricError> {
        use rand_distr::{Distribution, StandardNormal};
        let raw = DMatrix::<f64>::from_fn(n + 1, n + 1, |_, _| StandardNormal.sample(rng));
        let sym = (&raw + raw.transpose()) * 0.5;
        Self::from_real(sym)
    }

    /// The symmetric unit-Frobenius matrix.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Ambient projective dimension `n` (matrix is `(n+1)×(n+1)`).
    pub fn ambient_dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    /// `xᵀQx` at a point of `C^{n+1}`.
    pub fn evaluate(&self, x: &CVec) -> Result<Complex64, QuadricError> {
        if x.len() != self.matrix.nrows() {
            return Err(QuadricError::PluckerLength {
                m: self.matrix.nrows(),
                expected: self.matrix.nrows(),
                got: x.len(),
            });
        }
        let qx = &self.matrix * x;
        Ok(x.dot(&qx))
    }

    /// Whether the matrix is real up to `tol` (after the unit-Frobenius
    /// normalization).
    pub fn is_real(&self, tol: f64) -> bool {
        self.matrix.iter().all(|z| z.im.abs() <= tol)
    }
}

/// Homogenization of a sphere `(x−c)² = r²` to the quadric
/// `Σ x_i² − 2 x_0 Σ c_i x_i + (c² − r²) x_0² = 0` in `P^n`.
pub fn homogenize_sphere(sphere: &Sphere) -> ProjectiveQuadric {
    let n = sphere.dim();
    let c = sphere.center();
    let mut m = DMatrix::<f64>::zeros(n + 1, n + 1);
    m[(0, 0)] = c.dot(c) - sphere.radius() * sphere.radius();
    for i in 0..n {
        m[(0, i + 1)] = -c[i];
        m[(i + 1, 0)] = -c[i];
        m[(i + 1, i + 1)] = 1.0;
    }
    ProjectiveQuadric::from_real(m).expect("sphere quadric is symmetric and nonzero")
}

/// The common "imaginary" quadric every sphere meets in the hyperplane at
/// infinity: `x_1² + ⋯ + x_n² = 0` on `x_0 = 0` (as the cone
/// `diag(0, 1, …, 1)` in `P^n`).
pub fn quadric_at_infinity(n: usize) -> Result<ProjectiveQuadric, QuadricError> {
    if n < 2 {
        return Err(QuadricError::AmbientTooSmall(n));
    }
    let mut m = DMatrix::<f64>::zeros(n + 1, n + 1);
    for i in 1..=n {
        m[(i, i)] = 1.0;
    }
    ProjectiveQuadric::from_real(m)
}

/// Ordered index pairs `(i, j)` with `i < j` over `0..m`: the Plücker
/// coordinate axes for lines in `P^{m-1}`.
pub fn coordinate_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in (i + 1)..m {
            out.push((i, j));
        }
    }
    out
}

/// Position of the pair `(i, j)`, `i < j`, in [`coordinate_pairs`] order.
pub fn pair_index(i: usize, j: usize, m: usize) -> usize {
    debug_assert!(i < j && j < m);
    // Pairs with first coordinate < i come first.
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

/// Plücker coordinates `π_ij = x_i y_j − x_j y_i` of the line through two
/// points of `C^m`, in [`coordinate_pairs`] order.
pub fn plucker_of_points(x: &CVec, y: &CVec) -> Result<CVec, QuadricError> {
    if x.len() != y.len() {
        return Err(GeometryError::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        }
        .into());
    }
    let m = x.len();
    let pairs = coordinate_pairs(m);
    Ok(CVec::from_iterator(
        pairs.len(),
        pairs.iter().map(|&(i, j)| x[i] * y[j] - x[j] * y[i]),
    ))
}

/// Plücker coordinates of an affine moment line `(p, v)` in `P^n`, via the
/// points `x = (1, p)` and `y = (0, v)`: `π_{0i} = v_{i-1}`,
/// `π_{ij} = p_{i-1} v_{j-1} − p_{j-1} v_{i-1}`.
pub fn plucker_of_line(line: &Line) -> CVec {
    let n = line.dim();
    let mut x = CVec::zeros(n + 1);
    let mut y = CVec::zeros(n + 1);
    x[0] = Complex64::new(1.0, 0.0);
    for i in 0..n {
        x[i + 1] = line.p[i];
        y[i + 1] = line.v[i];
    }
    plucker_of_points(&x, &y).expect("dimensions match by construction")
}

/// The tangency condition of [`ProjectiveQuadric`] as a quadratic form in
/// Plücker coordinates: the second compound `Λ²Q`, with
/// `(Λ²Q)_{(ab),(cd)} = Q_ac Q_bd − Q_ad Q_bc`.
pub fn tangency_form(q: &ProjectiveQuadric) -> Polynomial {
    let m = q.matrix.nrows();
    let pairs = coordinate_pairs(m);
    let nv = pairs.len();
    let qm = &q.matrix;
    let mut terms: Vec<(Vec<u32>, Complex64)> = Vec::new();
    for (s, &(a, b)) in pairs.iter().enumerate() {
        for (t, &(c, d)) in pairs.iter().enumerate().skip(s) {
            let g = qm[(a, c)] * qm[(b, d)] - qm[(a, d)] * qm[(b, c)];
            let coeff = if s == t { g } else { g * 2.0 };
            if coeff.norm() == 0.0 {
                continue;
            }
            let mut exps = vec![0u32; nv];
            exps[s] += 1;
            exps[t] += 1;
            terms.push((exps, coeff));
        }
    }
    Polynomial::from_terms(nv, terms).expect("exponent lengths match by construction")
}

/// The quadratic Grassmann relations cutting out decomposable vectors:
/// `π_ij π_kl − π_ik π_jl + π_il π_jk = 0` for every `i<j<k<l` in `0..m`.
pub fn grassmann_relations(m: usize) -> Vec<Polynomial> {
    use itertools::Itertools;
    let nv = m * (m - 1) / 2;
    let one = Complex64::new(1.0, 0.0);
    (0..m)
        .combinations(4)
        .map(|q| {
            let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
            let term = |a: (usize, usize), b: (usize, usize), sign: f64| {
                let mut exps = vec![0u32; nv];
                exps[pair_index(a.0, a.1, m)] += 1;
                exps[pair_index(b.0, b.1, m)] += 1;
                (exps, one * sign)
            };
            Polynomial::from_terms(
                nv,
                [
                    term((i, j), (k, l), 1.0),
                    term((i, k), (j, l), -1.0),
                    term((i, l), (j, k), 1.0),
                ],
            )
            .expect("exponent lengths match by construction")
        })
        .collect()
}

/// Whether a Plücker vector describes a line in the hyperplane `x_0 = 0`:
/// all `π_{0i}` vanish relative to the largest coordinate.
pub fn is_at_infinity(plucker: &CVec, m: usize, tol: f64) -> bool {
    let scale = plucker.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return true;
    }
    (1..m).all(|i| plucker[pair_index(0, i, m)].norm() <= tol * scale)
}

/// Recover an affine line from Plücker coordinates of a line in `P^n` not
/// contained in the hyperplane at infinity. Returns `None` for lines at
/// infinity (relative threshold `tol`).
pub fn line_from_plucker(plucker: &CVec, n: usize, tol: f64) -> Result<Option<Line>, QuadricError> {
    let m = n + 1;
    let expected = m * (m - 1) / 2;
    if plucker.len() != expected {
        return Err(QuadricError::PluckerLength {
            m,
            expected,
            got: plucker.len(),
        });
    }
    if is_at_infinity(plucker, m, tol) {
        return Ok(None);
    }
    // Direction v_i = π_{0,i+1}; a finite point comes from the column of the
    // antisymmetric Plücker matrix with the largest |v_k| (its top entry is
    // v_k ≠ 0, so it is not at infinity).
    let v = CVec::from_iterator(n, (1..m).map(|i| plucker[pair_index(0, i, m)]));
    let mut k = 1;
    let mut best = v[0].norm();
    for i in 2..m {
        let cand = v[i - 1].norm();
        if cand > best {
            best = cand;
            k = i;
        }
    }
    let entry = |i: usize, j: usize| -> Complex64 {
        // Π_ij with antisymmetric extension.
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => plucker[pair_index(i, j, m)],
            Greater => -plucker[pair_index(j, i, m)],
            Equal => Complex64::new(0.0, 0.0),
        }
    };
    let pivot = entry(0, k);
    let point = CVec::from_iterator(n, (1..m).map(|j| entry(j, k) / pivot));
    Ok(Some(Line::new(point, v)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rvec, tangency_residual};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn rl(data: &[f64]) -> CVec {
        CVec::from_iterator(data.len(), data.iter().map(|&a| Complex64::new(a, 0.0)))
    }

    #[test]
    fn unit_sphere_homogenizes_to_signature_diagonal() {
        let s = Sphere::new(rvec(&[0.0, 0.0, 0.0]), 1.0).unwrap();
        let q = homogenize_sphere(&s);
        let m = q.matrix();
        // diag(−1, 1, 1, 1) normalized to Frobenius norm 1 ⇒ entries ±1/2.
        assert!((m[(0, 0)] - r(-0.5)).norm() < 1e-14);
        for i in 1..4 {
            assert!((m[(i, i)] - r(0.5)).norm() < 1e-14);
        }
        assert!(m[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn all_spheres_share_the_quadric_at_infinity() {
        // The x_0 = 0 restriction of any sphere quadric is proportional to
        // x_1² + ⋯ + x_n².
        let s1 = Sphere::new(rvec(&[1.0, -2.0, 0.3]), 1.7).unwrap();
        let s2 = Sphere::new(rvec(&[-4.0, 0.0, 2.0]), 0.4).unwrap();
        for s in [&s1, &s2] {
            let q = homogenize_sphere(s);
            let m = q.matrix();
            let d = m[(1, 1)];
            for i in 1..4 {
                for j in 1..4 {
                    let expected = if i == j { d } else { r(0.0) };
                    assert!((m[(i, j)] - expected).norm() < 1e-14);
                }
            }
            // Nonzero multiple; the Frobenius normalization can make it
            // small when c² − r² dominates the matrix.
            assert!(d.norm() > 1e-3);
        }
        let inf = quadric_at_infinity(3).unwrap();
        assert!((inf.matrix()[(1, 1)] - r(1.0 / 3f64.sqrt())).norm() < 1e-14);
        assert!(inf.matrix()[(0, 0)].norm() < 1e-14);
    }

    #[test]
    fn tangency_form_vanishes_exactly_on_tangent_lines() {
        let s = Sphere::new(rvec(&[0.0, 0.0, 0.0]), 1.0).unwrap();
        let q = homogenize_sphere(&s);
        let form = tangency_form(&q);
        // Tangent: the line x = (1, 0, z) at distance 1 along e₂... use
        // p = (1,0,0), v = (0,1,0): distance from origin is 1.
        let tangent = Line::new(rl(&[1.0, 0.0, 0.0]), rl(&[0.0, 1.0, 0.0])).unwrap();
        let pl = plucker_of_line(&tangent);
        assert!(form.evaluate(pl.as_slice()).unwrap().norm() < 1e-14);
        // Through the center: strictly negative value for a real line.
        let through = Line::new(rl(&[0.0, 0.0, 0.0]), rl(&[0.0, 0.0, 1.0])).unwrap();
        let pl2 = plucker_of_line(&through);
        let val = form.evaluate(pl2.as_slice()).unwrap();
        assert!(val.im.abs() < 1e-14 && val.re < -1e-3);
    }

    #[test]
    fn tangency_form_matches_affine_residual_up_to_quadric_scale() {
        // For x = (1, p), y = (0, v) and the unnormalized sphere quadric,
        // (xᵀQx)(yᵀQy) − (xᵀQy)² is literally the cleared tangency residual;
        // the unit-Frobenius normalization contributes the square of the
        // normalization factor.
        let s = Sphere::new(rvec(&[0.4, -1.2, 2.0]), 1.3).unwrap();
        let q = homogenize_sphere(&s);
        let form = tangency_form(&q);
        // Frobenius norm of the raw sphere matrix.
        let c = s.center();
        let raw_fro = {
            let mut acc = (c.dot(c) - s.radius() * s.radius()).powi(2);
            acc += 3.0; // three diagonal ones
            acc += 2.0 * c.dot(c); // the two off-diagonal center rows
            acc.sqrt()
        };
        let line = Line::new(
            CVec::from_iterator(3, [r(0.3), r(0.9), r(-0.7)]),
            CVec::from_iterator(3, [r(1.0), r(0.2), r(0.5)]),
        )
        .unwrap();
        let pl = plucker_of_line(&line);
        let lhs = form.evaluate(pl.as_slice()).unwrap();
        let rhs = tangency_residual(&s, &line).unwrap() / r(raw_fro * raw_fro);
        assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn tangency_form_scales_by_det_squared_under_basis_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = ProjectiveQuadric::random(3, &mut rng).unwrap();
        let form = tangency_form(&q);
        let x = CVec::from_fn(4, |i, _| r(0.3 * i as f64 + 0.4));
        let y = CVec::from_fn(4, |i, _| r(1.0 - 0.2 * i as f64));
        let (a, b, c, d) = (r(2.0), r(-0.5), r(1.5), r(0.7));
        let x2 = x.map(|t| t * a) + y.map(|t| t * b);
        let y2 = x.map(|t| t * c) + y.map(|t| t * d);
        let det = a * d - b * c;
        let v1 = form
            .evaluate(plucker_of_points(&x, &y).unwrap().as_slice())
            .unwrap();
        let v2 = form
            .evaluate(plucker_of_points(&x2, &y2).unwrap().as_slice())
            .unwrap();
        assert!((v2 - det * det * v1).norm() < 1e-10 * (1.0 + v2.norm()));
    }

    #[test]
    fn grassmann_relations_vanish_on_decomposables() {
        for m in [4usize, 5] {
            let rels = grassmann_relations(m);
            assert_eq!(rels.len(), if m == 4 { 1 } else { 5 });
            let x = CVec::from_fn(m, |i, _| {
                Complex64::new(0.9 * i as f64 - 1.7, 1.3 - i as f64)
            });
            let y = CVec::from_fn(m, |i, _| Complex64::new(i as f64 * 0.7 - 1.0, 0.2));
            let pl = plucker_of_points(&x, &y).unwrap();
            for rel in rels {
                assert!(rel.evaluate(pl.as_slice()).unwrap().norm() < 1e-10);
            }
        }
    }

    #[test]
    fn plucker_round_trip_recovers_the_line() {
        let line = Line::new(
            CVec::from_iterator(3, [r(0.3), r(-1.1), r(0.8)]),
            CVec::from_iterator(3, [r(0.5), r(2.0), r(-0.4)]),
        )
        .unwrap();
        let pl = plucker_of_line(&line);
        let back = line_from_plucker(&pl, 3, 1e-8).unwrap().unwrap();
        assert!(crate::geometry::chordal_distance(&back.v, &line.v) < 1e-12);
        assert!((&back.p - &line.p).norm() < 1e-10);
        // A line at infinity has no affine representative.
        let mut x = CVec::zeros(4);
        let mut y = CVec::zeros(4);
        x[1] = r(1.0);
        y[2] = r(1.0);
        let pl_inf = plucker_of_points(&x, &y).unwrap();
        assert!(is_at_infinity(&pl_inf, 4, 1e-8));
        assert!(line_from_plucker(&pl_inf, 3, 1e-8).unwrap().is_none());
    }

    #[test]
    fn quadric_validation() {
        let bad = DMatrix::from_row_slice(3, 4, &[0.0; 12]);
        assert!(matches!(
            ProjectiveQuadric::new(bad.map(|x: f64| Complex64::new(x, 0.0))),
            Err(QuadricError::NotSquare { .. })
        ));
        let mut asym = DMatrix::<f64>::identity(4, 4);
        asym[(0, 1)] = 1.0;
        assert!(matches!(
            ProjectiveQuadric::from_real(asym),
            Err(QuadricError::NotSymmetric(_))
        ));
        assert!(matches!(
            ProjectiveQuadric::from_real(DMatrix::<f64>::zeros(4, 4)),
            Err(QuadricError::ZeroMatrix)
        ));
    }
}
