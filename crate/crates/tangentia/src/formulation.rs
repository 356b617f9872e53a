//! Reduction of the common-tangent conditions to a system in the direction
//! vector alone.
//!
//! For `2n-2` spheres whose centers affinely span `R^n`, translate the last
//! center to the origin and write `r` for its radius. A moment line `(p, v)`
//! is a common tangent iff
//!
//! ```text
//! p·v = 0,    p·p = r²,    2(v·v)(p·c_i) = q_i(v)   (i = 1..2n-3)
//! ```
//!
//! where `q_i(v) = (v·v)(c_i·c_i) − (v·c_i)² − (v·v)(r_i² − r²)`. Choosing
//! `n` linearly independent centers (rows of `M`) lets `p` be eliminated:
//! `p = M⁻¹ q_B(v) / (2 v·v)`. Substituting back and clearing `v·v`
//! denominators leaves, in `v` alone,
//!
//! * one homogeneous cubic (from `p·v = 0`),
//! * one homogeneous quartic (from `p·p = r²`),
//! * `n-3` homogeneous quadrics (from the unused centers),
//!
//! whose Bézout number `3·4·2^{n-3} = 3·2^{n-1}` is the sharp bound on the
//! number of common tangents. Directions with `v·v = 0` cannot occur among
//! the solutions when the centers affinely span, so the clearing loses
//! nothing.
//!
//! The module also houses the Gram-determinant coefficient calculus for the
//! equal-radius cubic in dual-basis coordinates, and the counting bounds for
//! the sphere and general-quadric problems.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

use crate::geometry::{self, CVec, GeometryError, Line, SphereArrangement, ISOTROPY_TOL};
use crate::poly::{PolyError, PolySystem, Polynomial};

/// Relative rank tolerance for the affine-span test of the centers.
pub const SPAN_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum FormulationError {
    #[error(
        "centers do not affinely span R^{n} (rank {rank} after translation); \
         the tangent set is not finite for this formulation"
    )]
    AffinelyDependentCenters { n: usize, rank: usize },
    #[error("arrangement is degenerate: reduced equation {index} vanished identically")]
    DegenerateArrangement { index: usize },
    #[error("direction is isotropic (v·v ≈ 0); p cannot be reconstructed")]
    IsotropicDirection,
    #[error("direction vector has dimension {got}, expected {expected}")]
    DirectionDimension { expected: usize, got: usize },
    #[error("need exactly n linearly independent centers, got {got} for n = {n}")]
    BasisSize { n: usize, got: usize },
    #[error("basis matrix is numerically singular")]
    SingularBasis,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The dehomogenization-ready system in the direction variables, together
/// with everything needed to reconstruct `p` from a solution `v`.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    system: PolySystem,
    /// Indices (into the translated list `0..2n-3`) of the basis centers.
    basis_indices: Vec<usize>,
    m_inv: DMatrix<f64>,
    translated_centers: Vec<DVector<f64>>,
    radii: Vec<f64>,
    base_radius: f64,
    offset: DVector<f64>,
    arrangement: SphereArrangement,
}

impl ReducedSystem {
    /// The `n-1` homogeneous polynomials: cubic, quartic, then the quadrics.
    pub fn system(&self) -> &PolySystem {
        &self.system
    }

    pub fn n(&self) -> usize {
        self.arrangement.n()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.system.degrees()
    }

    pub fn basis_indices(&self) -> &[usize] {
        &self.basis_indices
    }

    pub fn arrangement(&self) -> &SphereArrangement {
        &self.arrangement
    }

    /// Product of the equation degrees: the Bézout path count `3·2^{n-1}`.
    pub fn bezout_count(&self) -> u128 {
        self.system.degrees().iter().map(|&d| d as u128).product()
    }

    /// Numeric `q_i(v)` for translated center index `i`.
    fn q_value(&self, i: usize, v: &CVec, v2: Complex64) -> Complex64 {
        let c = &self.translated_centers[i];
        let cc: f64 = c.dot(c);
        let ri = self.radii[i];
        let s = cc - ri * ri + self.base_radius * self.base_radius;
        let vc: Complex64 = v.iter().zip(c.iter()).map(|(&vk, &ck)| vk * ck).sum();
        v2 * s - vc * vc
    }

    /// Reconstruct the tangent line through a reduced-system solution `v`:
    /// `p = M⁻¹ q_B(v) / (2 v·v)` in translated coordinates, shifted back to
    /// the original frame and moment-normalized there.
    pub fn back_substitute(&self, v: &CVec) -> Result<Line, FormulationError> {
        let n = self.n();
        if v.len() != n {
            return Err(FormulationError::DirectionDimension {
                expected: n,
                got: v.len(),
            });
        }
        let v2 = v.dot(v);
        if v2.norm() < ISOTROPY_TOL * v.norm() * v.norm() {
            return Err(FormulationError::IsotropicDirection);
        }
        let q = CVec::from_iterator(
            n,
            self.basis_indices.iter().map(|&i| self.q_value(i, v, v2)),
        );
        let half_inv = Complex64::new(0.5, 0.0) / v2;
        let mut p = CVec::zeros(n);
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += Complex64::new(self.m_inv[(j, k)], 0.0) * q[k];
            }
            p[j] = acc * half_inv + Complex64::new(self.offset[j], 0.0);
        }
        Ok(Line::new(p, v.clone())?)
    }
}

/// Pick `n` centers with numerically independent directions via modified
/// Gram–Schmidt with greedy pivoting. Returns their indices, or the achieved
/// rank on failure.
fn select_spanning_basis(centers: &[DVector<f64>], n: usize) -> Result<Vec<usize>, usize> {
    let scale = centers
        .iter()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut residual: Vec<DVector<f64>> = centers.to_vec();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best = usize::MAX;
        let mut best_norm = -1.0;
        for (i, r) in residual.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let norm = r.norm();
            if norm > best_norm {
                best = i;
                best_norm = norm;
            }
        }
        if best == usize::MAX || best_norm <= SPAN_RANK_TOL * scale {
            return Err(chosen.len());
        }
        let q = &residual[best] / best_norm;
        for (i, r) in residual.iter_mut().enumerate() {
            if i != best && !chosen.contains(&i) {
                let proj = q.dot(r);
                *r -= &q * proj;
            }
        }
        chosen.push(best);
    }
    Ok(chosen)
}

/// Build the reduced direction system for an arrangement whose centers
/// affinely span `R^n`.
pub fn build_reduced_system(
    arrangement: &SphereArrangement,
) -> Result<ReducedSystem, FormulationError> {
    let n = arrangement.n();
    let spheres = arrangement.spheres();
    let last = &spheres[spheres.len() - 1];
    let offset = last.center().clone();
    let base_radius = last.radius();

    let translated_centers: Vec<DVector<f64>> = spheres[..spheres.len() - 1]
        .iter()
        .map(|s| s.center() - &offset)
        .collect();
    let radii: Vec<f64> = spheres[..spheres.len() - 1]
        .iter()
        .map(|s| s.radius())
        .collect();

    let basis_indices = select_spanning_basis(&translated_centers, n)
        .map_err(|rank| FormulationError::AffinelyDependentCenters { n, rank })?;

    let m = DMatrix::from_fn(n, n, |i, j| translated_centers[basis_indices[i]][j]);
    let m_inv = m
        .clone()
        .try_inverse()
        .ok_or(FormulationError::SingularBasis)?;

    // Symbolic pieces: v² and, per center, the linear form v·c_i and
    // q_i = s_i·v² − (v·c_i)²  with  s_i = c_i² − r_i² + r².
    let v2_poly = {
        let mut acc = Polynomial::zero(n);
        for k in 0..n {
            let vk = Polynomial::variable(k, n)?;
            acc = &acc + &(&vk * &vk);
        }
        acc
    };
    let linear_form = |c: &DVector<f64>| -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::zero(n);
        for k in 0..n {
            if c[k] != 0.0 {
                acc = &acc + &Polynomial::variable(k, n)?.scale(Complex64::new(c[k], 0.0));
            }
        }
        Ok(acc)
    };
    let q_poly = |i: usize| -> Result<Polynomial, PolyError> {
        let c = &translated_centers[i];
        let s = c.dot(c) - radii[i] * radii[i] + base_radius * base_radius;
        let lin = linear_form(c)?;
        Ok(&v2_poly.scale(Complex64::new(s, 0.0)) - &(&lin * &lin))
    };

    // P_j(v) = Σ_k (M⁻¹)_{jk} q_{B_k}(v): the quadratic numerators of p.
    let basis_q: Vec<Polynomial> = basis_indices
        .iter()
        .map(|&i| q_poly(i))
        .collect::<Result<_, _>>()?;
    let mut p_num: Vec<Polynomial> = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = Polynomial::zero(n);
        for k in 0..n {
            let coeff = m_inv[(j, k)];
            if coeff != 0.0 {
                acc = &acc + &basis_q[k].scale(Complex64::new(coeff, 0.0));
            }
        }
        p_num.push(acc);
    }

    // Cubic: Σ_j P_j v_j  (p·v = 0 cleared once).
    let mut cubic = Polynomial::zero(n);
    for (j, pj) in p_num.iter().enumerate() {
        cubic = &cubic + &(pj * &Polynomial::variable(j, n)?);
    }
    // Quartic: Σ_j P_j² − 4r²(v²)²  (p·p = r² cleared twice).
    let mut quartic = Polynomial::zero(n);
    for pj in &p_num {
        quartic = &quartic + &(pj * pj);
    }
    let four_r2 = 4.0 * base_radius * base_radius;
    quartic = &quartic - &(&v2_poly * &v2_poly).scale(Complex64::new(four_r2, 0.0));
    // Quadrics: Σ_j c_{ij} P_j − q_i for each unused center.
    let mut polys = vec![cubic, quartic];
    for (i, c) in translated_centers.iter().enumerate() {
        if basis_indices.contains(&i) {
            continue;
        }
        let mut acc = Polynomial::zero(n);
        for j in 0..n {
            if c[j] != 0.0 {
                acc = &acc + &p_num[j].scale(Complex64::new(c[j], 0.0));
            }
        }
        polys.push(&acc - &q_poly(i)?);
    }

    for (index, (p, expected)) in polys
        .iter()
        .zip(
            std::iter::once(3u32)
                .chain(std::iter::once(4))
                .chain(std::iter::repeat(2)),
        )
        .enumerate()
    {
        if p.is_zero() || p.total_degree() != expected || !p.is_homogeneous() {
            return Err(FormulationError::DegenerateArrangement { index });
        }
    }

    Ok(ReducedSystem {
        system: PolySystem::new(n, polys)?,
        basis_indices,
        m_inv,
        translated_centers,
        radii,
        base_radius,
        offset,
        arrangement: arrangement.clone(),
    })
}

/// Gram-determinant coefficients of the equal-radius cubic in dual-basis
/// coordinates `t` (where `v = Σ t_i c_i`):
///
/// ```text
/// Σ_{i≠j} α_ij t_i² t_j + 2 Σ_{i<j<k} β_ijk t_i t_j t_k = 0
/// ```
#[derive(Clone, Debug)]
pub struct CubicCoefficients {
    n: usize,
    alpha: DMatrix<f64>,
    beta: BTreeMap<(usize, usize, usize), f64>,
}

impl CubicCoefficients {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `α_ij = det [[c_i·c_i, c_i·c_j], [c_j·c_i, c_j·c_j]]` for `i ≠ j`.
    pub fn alpha(&self, i: usize, j: usize) -> f64 {
        self.alpha[(i, j)]
    }

    /// Cyclic sum of mixed Gram 2×2 determinants for `i < j < k`.
    pub fn beta(&self, i: usize, j: usize, k: usize) -> f64 {
        let mut idx = [i, j, k];
        idx.sort_unstable();
        self.beta[&(idx[0], idx[1], idx[2])]
    }

    /// Expand into a polynomial in the `t` variables.
    pub fn to_polynomial(&self) -> Polynomial {
        let n = self.n;
        let mut terms: Vec<(Vec<u32>, Complex64)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut exps = vec![0u32; n];
                exps[i] = 2;
                exps[j] = 1;
                terms.push((exps, Complex64::new(self.alpha[(i, j)], 0.0)));
            }
        }
        for (&(i, j, k), &b) in &self.beta {
            let mut exps = vec![0u32; n];
            exps[i] = 1;
            exps[j] = 1;
            exps[k] = 1;
            terms.push((exps, Complex64::new(2.0 * b, 0.0)));
        }
        Polynomial::from_terms(n, terms).expect("exponent lengths match by construction")
    }
}

/// Compute the `α`/`β` coefficients from `n` basis centers (equal radii are
/// the caller's responsibility — the coefficients only see the Gram matrix).
pub fn cubic_coefficients(centers: &[DVector<f64>]) -> CubicCoefficients {
    let n = centers.len();
    let gram = DMatrix::from_fn(n, n, |i, j| centers[i].dot(&centers[j]));
    let mut alpha = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                alpha[(i, j)] = gram[(i, i)] * gram[(j, j)] - gram[(i, j)] * gram[(i, j)];
            }
        }
    }
    let mut beta = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let b = gram[(k, k)] * gram[(i, j)] - gram[(i, k)] * gram[(j, k)]
                    + gram[(j, j)] * gram[(i, k)]
                    - gram[(i, j)] * gram[(j, k)]
                    + gram[(i, i)] * gram[(j, k)]
                    - gram[(i, j)] * gram[(i, k)];
                beta.insert((i, j, k), b);
            }
        }
    }
    CubicCoefficients { n, alpha, beta }
}

/// The unit-coefficient cubic attained by a regular simplex:
/// `Σ_{i≠j} t_i² t_j + 2 Σ_{i<j<k} t_i t_j t_k`.
///
/// For `n = 3` it factors as `(t₁+t₂)(t₁+t₃)(t₂+t₃)`.
pub fn simplex_cubic(n: usize) -> Polynomial {
    let mut terms: Vec<(Vec<u32>, Complex64)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut exps = vec![0u32; n];
            exps[i] = 2;
            exps[j] = 1;
            terms.push((exps, Complex64::new(1.0, 0.0)));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let mut exps = vec![0u32; n];
                exps[i] = 1;
                exps[j] = 1;
                exps[k] = 1;
                terms.push((exps, Complex64::new(2.0, 0.0)));
            }
        }
    }
    Polynomial::from_terms(n, terms).expect("exponent lengths match by construction")
}

/// Dual basis `c'_i` of a linear basis: `c'_i · c_j = δ_ij` (the columns of
/// `M⁻¹` when `M` has rows `c_i`).
pub fn dual_basis(centers: &[DVector<f64>]) -> Result<Vec<DVector<f64>>, FormulationError> {
    let n = centers.len();
    if n == 0 || centers.iter().any(|c| c.len() != n) {
        return Err(FormulationError::BasisSize {
            n: centers.first().map_or(0, |c| c.len()),
            got: n,
        });
    }
    let m = DMatrix::from_fn(n, n, |i, j| centers[i][j]);
    let m_inv = m.try_inverse().ok_or(FormulationError::SingularBasis)?;
    Ok((0..n)
        .map(|i| DVector::from_fn(n, |j, _| m_inv[(j, i)]))
        .collect())
}

/// A direction expressed in dual-basis coordinates: `t_i = c'_i · v`, so
/// that `v = Σ t_i c_i`.
#[derive(Clone, Debug)]
pub struct DualBasisCoords {
    pub t: Vec<Complex64>,
    pub dual_basis: Vec<DVector<f64>>,
}

impl DualBasisCoords {
    pub fn compute(centers: &[DVector<f64>], v: &CVec) -> Result<Self, FormulationError> {
        let duals = dual_basis(centers)?;
        if v.len() != centers.len() {
            return Err(FormulationError::DirectionDimension {
                expected: centers.len(),
                got: v.len(),
            });
        }
        let t = duals
            .iter()
            .map(|d| {
                geometry::dot(&geometry::complexify(d.as_view()), v)
                    .expect("dimensions checked above")
            })
            .collect();
        Ok(DualBasisCoords {
            t,
            dual_basis: duals,
        })
    }
}

fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128; // exact at every step for binomials
    }
    Some(acc)
}

/// Sharp bound on common tangent lines to `2n-2` spheres: `3·2^{n-1}`.
/// `None` for `n < 3`.
pub fn bezout_bound_spheres(n: usize) -> Option<u128> {
    if !(3..=120).contains(&n) {
        return None;
    }
    Some(3u128 << (n - 1))
}

/// Degree of the Grassmannian of lines in `P^n` under its Plücker embedding:
/// `C(2n-2, n-1) / n` (the (n-1)-st Catalan number). `None` for `n < 3`.
pub fn grassmannian_degree(n: usize) -> Option<u128> {
    if n < 3 {
        return None;
    }
    let b = binomial(2 * n as u64 - 2, n as u64 - 1)?;
    debug_assert_eq!(b % n as u128, 0, "Catalan division must be exact");
    Some(b / n as u128)
}

/// Bound for common tangents to `2n-2` general quadric hypersurfaces in
/// `P^n`: `2^{2n-2} · C(2n-2, n-1) / n`. `None` for `n < 3` or overflow.
pub fn bezout_bound_quadrics(n: usize) -> Option<u128> {
    if n < 3 || 2 * n - 2 > 120 {
        return None;
    }
    grassmannian_degree(n)?.checked_mul(1u128 << (2 * n - 2))
}
