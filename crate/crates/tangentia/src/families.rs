//! Closed-form enumeration of the symmetric arrangements whose common
//! tangents are known exactly: the tetrahedron-with-axes family, the
//! crosspolytope, and its one-parameter perturbation.
//!
//! These families certify the solver from the outside: their lines come
//! from radicals, not path tracking, so agreement between the two is
//! evidence for both. The crosspolytope families also exercise the
//! affinely-dependent regime the homotopy pipeline refuses (their centers
//! span only a hyperplane), where the `3·2^{n−1}` count drops to `2^n`
//! at the symmetric point `a = 1`.
//!
//! All enumerations are deterministic: sign lifts are walked in a fixed
//! binary order, and every returned line is moment-normalized.

use nalgebra::DVector;
use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::{CVec, GeometryError, Line, Sphere, SphereArrangement};
use crate::poly::Polynomial;
use crate::roots::{cubic_discriminant, solve_cubic};
use crate::solver::{solution_set_from_lines, SolutionSet, SolverError, TrackerConfig};

/// Operations refuse within this distance of a vanishing discriminant
/// factor: the counts hold only generically, and closer than this the
/// formulas return ill-conditioned garbage rather than an answer.
pub const DISCRIMINANT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("family `{family}` requires n >= {min}, got n = {n}")]
    UnsupportedDimension {
        family: &'static str,
        n: usize,
        min: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("discriminant factor {factor} = {value:.3e} vanishes (|.| <= {DISCRIMINANT_TOL:.0e})")]
    DiscriminantVanishes { factor: String, value: f64 },
    #[error("degenerate radius: {0}")]
    DegenerateRadius(String),
    #[error("cubic root with a vanishing squared coordinate: {0}")]
    ZeroCoordinateRoot(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

fn csqrt(x: f64) -> Complex64 {
    Complex64::new(x, 0.0).sqrt()
}

/// Sign vectors of length `k` in fixed binary order (bit `b` of the
/// counter flips coordinate `b`); keeps enumeration deterministic.
fn sign_vectors(k: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..(1usize << k)).map(move |mask| {
        (0..k)
            .map(|b| if (mask >> b) & 1 == 1 { -1.0 } else { 1.0 })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// Tetrahedron-with-axes family

/// Parameters of the tetrahedron-with-axes arrangement in `R^n`, `n ≥ 4`:
/// four unit-cube vertices with even coordinate products in the first
/// three coordinates plus `±a·e_j` for `j ≥ 4`, all spheres of radius `r`.
#[derive(Clone, Copy, Debug)]
pub struct TetraAxesParams {
    pub n: usize,
    pub a: f64,
    pub r: f64,
}

impl TetraAxesParams {
    pub fn new(n: usize, a: f64, r: f64) -> Result<Self, FamilyError> {
        if n < 4 {
            return Err(FamilyError::UnsupportedDimension {
                family: "tetra-axes",
                n,
                min: 4,
            });
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(FamilyError::InvalidParameter(format!(
                "axis offset a must be positive and finite, got {a}"
            )));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(FamilyError::InvalidParameter(format!(
                "radius r must be positive and finite, got {r}"
            )));
        }
        Ok(TetraAxesParams { n, a, r })
    }

    /// `γ = a²(n−1)/(a²+n−3)`, the squared tangency threshold of the family.
    pub fn gamma(&self) -> f64 {
        let a2 = self.a * self.a;
        a2 * (self.n as f64 - 1.0) / (a2 + self.n as f64 - 3.0)
    }

    /// `δ = γ + (3−γ)²/4`, the upper edge of the all-real window in `r²`.
    pub fn delta(&self) -> f64 {
        let g = self.gamma();
        g + (3.0 - g) * (3.0 - g) / 4.0
    }
}

/// The `2n−2` spheres of the family.
pub fn tetra_axes_arrangement(p: &TetraAxesParams) -> Result<SphereArrangement, FamilyError> {
    let n = p.n;
    let mut centers: Vec<DVector<f64>> = Vec::with_capacity(2 * n - 2);
    for signs in [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ] {
        let mut c = DVector::zeros(n);
        c[0] = signs[0];
        c[1] = signs[1];
        c[2] = signs[2];
        centers.push(c);
    }
    for j in 3..n {
        for s in [1.0, -1.0] {
            let mut c = DVector::zeros(n);
            c[j] = s * p.a;
            centers.push(c);
        }
    }
    let spheres = centers
        .into_iter()
        .map(|c| Sphere::new(c, p.r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SphereArrangement::new(n, spheres)?)
}

/// The factors whose simultaneous non-vanishing makes the closed-form
/// count exact: `r²−3`, `3−γ`, `a²−2`, `r²−γ`, `(3−γ)²+4γ−4r²`.
pub fn discriminant_factors(p: &TetraAxesParams) -> Vec<(&'static str, f64)> {
    let g = p.gamma();
    let r2 = p.r * p.r;
    let a2 = p.a * p.a;
    vec![
        ("r^2-3", r2 - 3.0),
        ("3-gamma", 3.0 - g),
        ("a^2-2", a2 - 2.0),
        ("r^2-gamma", r2 - g),
        (
            "(3-gamma)^2+4gamma-4r^2",
            (3.0 - g) * (3.0 - g) + 4.0 * g - 4.0 * r2,
        ),
    ]
}

/// Errs with the first discriminant factor within [`DISCRIMINANT_TOL`] of
/// zero.
pub fn discriminant_ok(p: &TetraAxesParams) -> Result<(), FamilyError> {
    for (name, value) in discriminant_factors(p) {
        if value.abs() <= DISCRIMINANT_TOL {
            return Err(FamilyError::DiscriminantVanishes {
                factor: name.to_string(),
                value,
            });
        }
    }
    Ok(())
}

/// The open parameter region where all `3·2^{n−1}` tangents are real:
/// `a² > 2`, `γ < 3`, `γ < r² < δ`.
pub fn in_reality_region(p: &TetraAxesParams) -> bool {
    let g = p.gamma();
    let r2 = p.r * p.r;
    p.a * p.a > 2.0 && g < 3.0 && g < r2 && r2 < p.delta()
}

/// The `3·2^{n−1}` tangent lines in closed form. Branch structure: one of
/// the first three coordinates of `v` vanishes (3 cases); in each case,
/// with the last of the remaining two set to 1, the nonzero `p` component
/// is `±√(r²−γ)`, its partner solves `p·v² + (3−γ)·v + p = 0`, the axis
/// coordinates carry a common magnitude with `2^{n−3}` sign choices.
fn tetra_axes_lines(p: &TetraAxesParams) -> Result<Vec<Line>, FamilyError> {
    discriminant_ok(p)?;
    let n = p.n;
    let g = p.gamma();
    let r2 = p.r * p.r;
    let a2 = p.a * p.a;
    let mut lines = Vec::with_capacity(3 << (n - 1));
    for z in 0..3usize {
        let j = (z + 1) % 3;
        let k = (z + 2) % 3;
        for p_sign in [1.0, -1.0] {
            let p_z = csqrt(r2 - g) * p_sign;
            for v_sign in [1.0, -1.0] {
                let disc = csqrt((3.0 - g) * (3.0 - g) - 4.0 * (r2 - g));
                let v_j = (-Complex64::new(3.0 - g, 0.0) + disc * v_sign)
                    / (p_z * Complex64::new(2.0, 0.0));
                // Shared magnitude of the axis coordinates j ≥ 4.
                let v_axis = ((v_j * v_j + Complex64::new(1.0, 0.0))
                    * ((a2 - 2.0) / ((3.0 - g) * (a2 + n as f64 - 3.0))))
                    .sqrt();
                for signs in sign_vectors(n - 3) {
                    let mut v = CVec::zeros(n);
                    v[j] = v_j;
                    v[k] = Complex64::new(1.0, 0.0);
                    for (idx, s) in signs.iter().enumerate() {
                        v[3 + idx] = v_axis * *s;
                    }
                    let mut pt = CVec::zeros(n);
                    pt[z] = p_z;
                    lines.push(Line::new(pt, v)?);
                }
            }
        }
    }
    Ok(lines)
}

/// Closed-form solution set of the tetrahedron-with-axes family, with
/// residuals and reality flags against its own arrangement.
pub fn tetra_axes_tangents(
    p: &TetraAxesParams,
    cfg: &TrackerConfig,
) -> Result<SolutionSet, FamilyError> {
    let lines = tetra_axes_lines(p)?;
    let arr = tetra_axes_arrangement(p)?;
    Ok(solution_set_from_lines(lines, &arr, cfg)?)
}

/// Classification of one `(a, r)` parameter point of the family.
#[derive(Clone, Copy, Debug)]
pub struct RegionClassification {
    pub a: f64,
    pub r: f64,
    pub on_discriminant: bool,
    pub all_real: bool,
    pub count_real: usize,
    pub count_complex: usize,
}

/// Classify every point of the `a × r` grid: points on the discriminant
/// are marked and skipped; elsewhere the closed-form lines are counted by
/// reality. Row order: outer loop over `a`, inner over `r`.
pub fn region_sample(
    n: usize,
    a_grid: &[f64],
    r_grid: &[f64],
) -> Result<Vec<RegionClassification>, FamilyError> {
    if n < 4 {
        return Err(FamilyError::UnsupportedDimension {
            family: "tetra-axes",
            n,
            min: 4,
        });
    }
    let reality_tol = TrackerConfig::default().reality_tol;
    let expected = 3usize << (n - 1);
    let mut rows = Vec::with_capacity(a_grid.len() * r_grid.len());
    for &a in a_grid {
        for &r in r_grid {
            let params = match TetraAxesParams::new(n, a, r) {
                Ok(p) => p,
                Err(_) => {
                    // r = 0 or a = 0 grid edges: degenerate by definition.
                    rows.push(RegionClassification {
                        a,
                        r,
                        on_discriminant: true,
                        all_real: false,
                        count_real: 0,
                        count_complex: 0,
                    });
                    continue;
                }
            };
            match tetra_axes_lines(&params) {
                Err(FamilyError::DiscriminantVanishes { .. }) => {
                    rows.push(RegionClassification {
                        a,
                        r,
                        on_discriminant: true,
                        all_real: false,
                        count_real: 0,
                        count_complex: 0,
                    });
                }
                Err(e) => return Err(e),
                Ok(lines) => {
                    let count_real = lines
                        .iter()
                        .filter(|l| crate::geometry::is_real_line(l, reality_tol))
                        .count();
                    let count_complex = expected - count_real;
                    rows.push(RegionClassification {
                        a,
                        r,
                        on_discriminant: false,
                        all_real: count_complex == 0,
                        count_real,
                        count_complex,
                    });
                }
            }
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Crosspolytope

/// The `2n−2` unit-coordinate sphere centers `±e_j`, `j = 2..n` (the
/// first coordinate axis stays free), all of radius `r`. The centers span
/// only a hyperplane, so the generic bound does not apply; the count is
/// `2^n`.
pub fn crosspolytope_arrangement(n: usize, r: f64) -> Result<SphereArrangement, FamilyError> {
    if n < 3 {
        return Err(FamilyError::UnsupportedDimension {
            family: "crosspolytope",
            n,
            min: 3,
        });
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(FamilyError::InvalidParameter(format!(
            "radius r must be positive and finite, got {r}"
        )));
    }
    let mut spheres = Vec::with_capacity(2 * n - 2);
    for j in 1..n {
        for s in [1.0, -1.0] {
            let mut c = DVector::zeros(n);
            c[j] = s;
            spheres.push(Sphere::new(c, r)?);
        }
    }
    Ok(SphereArrangement::new(n, spheres)?)
}

/// The open radius window in which all `2^n` crosspolytope tangents are
/// real: `(√(1−1/(n−1)), 1)`.
pub fn crosspolytope_real_window(n: usize) -> (f64, f64) {
    ((1.0 - 1.0 / (n as f64 - 1.0)).sqrt(), 1.0)
}

/// The `2^n` crosspolytope tangents in closed form. Two families: lines
/// with vanishing first direction coordinate and moment point
/// `(±√(r²−1+1/(n−1)), 0, …)`, and lines through the origin with first
/// direction slope `±√(1/(1−r²)+1−n)`. Both carry `2^{n−2}` sign choices
/// on the remaining direction coordinates.
pub fn crosspolytope_tangents(
    n: usize,
    r: f64,
    cfg: &TrackerConfig,
) -> Result<SolutionSet, FamilyError> {
    let arr = crosspolytope_arrangement(n, r)?;
    let r2 = r * r;
    if (1.0 - r2).abs() <= DISCRIMINANT_TOL {
        return Err(FamilyError::DegenerateRadius(format!(
            "1-r^2 = {:.3e}: the through-origin family degenerates at r = 1",
            1.0 - r2
        )));
    }
    let rad_a = r2 - 1.0 + 1.0 / (n as f64 - 1.0);
    let rad_b = 1.0 / (1.0 - r2) + 1.0 - n as f64;
    if rad_a.abs() <= DISCRIMINANT_TOL || rad_b.abs() <= DISCRIMINANT_TOL {
        return Err(FamilyError::DegenerateRadius(format!(
            "radicand vanishes at r = {r} (families collide)"
        )));
    }
    let mut lines = Vec::with_capacity(1 << n);
    // Family one: v₁ = 0, nonzero moment coordinate on the free axis.
    for p_sign in [1.0, -1.0] {
        let p0 = csqrt(rad_a) * p_sign;
        for signs in sign_vectors(n - 2) {
            let mut v = CVec::zeros(n);
            v[1] = Complex64::new(1.0, 0.0);
            for (idx, s) in signs.iter().enumerate() {
                v[2 + idx] = Complex64::new(*s, 0.0);
            }
            let mut pt = CVec::zeros(n);
            pt[0] = p0;
            lines.push(Line::new(pt, v)?);
        }
    }
    // Family two: through the origin.
    for t_sign in [1.0, -1.0] {
        let tau = csqrt(rad_b) * t_sign;
        for signs in sign_vectors(n - 2) {
            let mut v = CVec::zeros(n);
            v[0] = tau;
            v[1] = Complex64::new(1.0, 0.0);
            for (idx, s) in signs.iter().enumerate() {
                v[2 + idx] = Complex64::new(*s, 0.0);
            }
            lines.push(Line::new(CVec::zeros(n), v)?);
        }
    }
    Ok(solution_set_from_lines(lines, &arr, cfg)?)
}

// ---------------------------------------------------------------------------
// Perturbed crosspolytope

/// Crosspolytope with the `+e₂` sphere slid to `a·e₂` (the centers stay
/// affinely dependent). `a = 1` is the exact crosspolytope; `a = −1`
/// duplicates a sphere.
#[derive(Clone, Copy, Debug)]
pub struct PerturbedParams {
    pub n: usize,
    pub a: f64,
    pub r: f64,
}

impl PerturbedParams {
    pub fn new(n: usize, a: f64, r: f64) -> Result<Self, FamilyError> {
        if n < 3 {
            return Err(FamilyError::UnsupportedDimension {
                family: "perturbed",
                n,
                min: 3,
            });
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(FamilyError::InvalidParameter(format!(
                "radius r must be positive and finite, got {r}"
            )));
        }
        if !a.is_finite() || (a + 1.0).abs() <= DISCRIMINANT_TOL {
            return Err(FamilyError::InvalidParameter(format!(
                "perturbation a = {a} duplicates a sphere (a = -1 forbidden)"
            )));
        }
        Ok(PerturbedParams { n, a, r })
    }
}

/// The perturbed arrangement: `a·e₂`, `−e₂`, `±e_j` for `j = 3..n`.
pub fn perturbed_crosspolytope_arrangement(
    p: &PerturbedParams,
) -> Result<SphereArrangement, FamilyError> {
    let n = p.n;
    let mut spheres = Vec::with_capacity(2 * n - 2);
    for c1 in [p.a, -1.0] {
        let mut c = DVector::zeros(n);
        c[1] = c1;
        spheres.push(Sphere::new(c, p.r)?);
    }
    for j in 2..n {
        for s in [1.0, -1.0] {
            let mut c = DVector::zeros(n);
            c[j] = s;
            spheres.push(Sphere::new(c, p.r)?);
        }
    }
    Ok(SphereArrangement::new(n, spheres)?)
}

/// Coefficients `[c₃, c₂, c₁, c₀]` (in `x = α/g`) of the homogeneous
/// cubic governing the squared direction coordinates `α = v₁²`,
/// `g = v₃² = … = v_n²` after eliminating `β = v₂²` linearly.
pub fn perturbed_cubic_coefficients(p: &PerturbedParams) -> [f64; 4] {
    let n = p.n as f64;
    let a = p.a;
    let r2 = p.r * p.r;
    // Two formal variables: α (index 0) and g (index 1).
    let var = |i: usize| Polynomial::variable(i, 2).expect("two variables");
    let alpha = var(0);
    let g = var(1);
    let beta_a = alpha.scale(Complex64::new(a - 1.0, 0.0));
    let beta_g = g.scale(Complex64::new(a * (n - 2.0) - (n - 3.0), 0.0));
    let beta = &beta_a + &beta_g;
    let apb0 = &alpha + &beta;
    let g_term = g.scale(Complex64::new(n - 2.0, 0.0));
    let s = &apb0 + &g_term;
    let s_minus_beta = &s - &beta;
    let apb = &alpha + &beta;
    let apb_smb = &apb * &s_minus_beta;
    let term1 = (&apb_smb * &s_minus_beta).scale(Complex64::new((1.0 - a) * (1.0 - a), 0.0));
    let alpha_s = &alpha * &s;
    let term2 = (&alpha_s * &s).scale(Complex64::new(-4.0 * r2, 0.0));
    let term3 = (&alpha_s * &s_minus_beta).scale(Complex64::new(4.0 * a, 0.0));
    let t12 = &term1 + &term2;
    let expr = &t12 + &term3;
    debug_assert!(expr.is_homogeneous() && expr.total_degree() == 3);
    let c = |i: u32| expr.coefficient(&[i, 3 - i]).re;
    [c(3), c(2), c(1), c(0)]
}

/// Numeric discriminant of the perturbed-family cubic, normalized by the
/// fourth power of the largest coefficient so the scale is comparable
/// across parameters. Zero iff the cubic has a repeated root.
pub fn perturbed_cubic_discriminant(p: &PerturbedParams) -> f64 {
    let [c3, c2, c1, c0] = perturbed_cubic_coefficients(p);
    let scale = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    if scale == 0.0 {
        return 0.0;
    }
    cubic_discriminant(c3, c2, c1, c0) / scale.powi(4)
}

/// The `3·2^{n−1}` tangents of the perturbed crosspolytope: three cubic
/// roots in `x = v₁²/v₃²`, each lifted through the sign choices of
/// `v₂, v₃, …` (with `v₁` fixed to the principal square root), and the
/// moment point recovered from `p₂ = (v₂²−v₃²)/(2v²)`, `p₁ = −p₂·v₂/v₁`,
/// all other components zero.
pub fn perturbed_crosspolytope_tangents(
    p: &PerturbedParams,
    cfg: &TrackerConfig,
) -> Result<SolutionSet, FamilyError> {
    let n = p.n;
    let a = p.a;
    if (a - 1.0).abs() <= DISCRIMINANT_TOL {
        return Err(FamilyError::InvalidParameter(
            "a = 1 is the exact crosspolytope; use its own enumeration".to_string(),
        ));
    }
    let [c3, c2, c1, c0] = perturbed_cubic_coefficients(p);
    let scale = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    if scale == 0.0 || c3.abs() <= 1e-12 * scale || c0.abs() <= 1e-12 * scale {
        return Err(FamilyError::ZeroCoordinateRoot(format!(
            "cubic boundary coefficients vanish (c3 = {c3:.3e}, c0 = {c0:.3e})"
        )));
    }
    let disc = cubic_discriminant(c3, c2, c1, c0) / scale.powi(4);
    if disc.abs() <= DISCRIMINANT_TOL {
        return Err(FamilyError::DiscriminantVanishes {
            factor: "cubic discriminant".to_string(),
            value: disc,
        });
    }
    let arr = perturbed_crosspolytope_arrangement(p)?;
    let roots = solve_cubic(
        Complex64::new(c3, 0.0),
        Complex64::new(c2, 0.0),
        Complex64::new(c1, 0.0),
        Complex64::new(c0, 0.0),
    );
    let one = Complex64::new(1.0, 0.0);
    let mut lines = Vec::with_capacity(3 << (n - 1));
    for alpha in roots {
        // g is normalized to 1; β follows linearly.
        let beta = (a - 1.0) * alpha + Complex64::new(a * (n as f64 - 2.0) - (n as f64 - 3.0), 0.0);
        let s = alpha + beta + Complex64::new(n as f64 - 2.0, 0.0);
        let norm_scale = 1.0 + alpha.norm() + beta.norm();
        if s.norm() <= 1e-10 * norm_scale {
            return Err(FamilyError::DiscriminantVanishes {
                factor: "v^2".to_string(),
                value: s.norm(),
            });
        }
        if alpha.norm() <= 1e-14 * norm_scale || beta.norm() <= 1e-14 * norm_scale {
            return Err(FamilyError::ZeroCoordinateRoot(format!(
                "α = {alpha}, β = {beta}"
            )));
        }
        let v1 = alpha.sqrt();
        // Forced by the difference of the axis-pair tangency equations:
        // 2v²·p₂ = v₂² − v_j² (j ≥ 3), i.e. (β − g)/(2s) with g = 1.
        let p2 = (beta - one) / (s * 2.0);
        for v2_sign in [1.0, -1.0] {
            let v2 = beta.sqrt() * v2_sign;
            let p1 = -p2 * v2 / v1;
            for v3_sign in [1.0, -1.0] {
                for signs in sign_vectors(n - 3) {
                    let mut v = CVec::zeros(n);
                    v[0] = v1;
                    v[1] = v2;
                    v[2] = Complex64::new(v3_sign, 0.0);
                    for (idx, sgn) in signs.iter().enumerate() {
                        v[3 + idx] = Complex64::new(*sgn * v3_sign, 0.0);
                    }
                    let mut pt = CVec::zeros(n);
                    pt[0] = p1;
                    pt[1] = p2;
                    lines.push(Line::new(pt, v)?);
                }
            }
        }
    }
    Ok(solution_set_from_lines(lines, &arr, cfg)?)
}
