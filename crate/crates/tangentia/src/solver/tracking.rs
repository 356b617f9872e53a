//! Total-degree homotopy continuation: start systems, the adaptive
//! predictor–corrector path tracker, and a circular (Cauchy-integral)
//! endgame for singular endpoints.
//!
//! The homotopy is `H(x, t) = (1−t)·γ·G(x) + t·F(x)` with the start system
//! `g_i = x_i^{d_i} − γ_i` for random unit-modulus constants `γ_i` and one
//! global random `γ` (the gamma trick): for almost every `γ` the paths are
//! smooth and disjoint on `t ∈ [0, 1)`. A path is advanced by a 4th-order
//! Runge–Kutta predictor on the Davidenko equation `dx/dt = −J⁻¹ ∂H/∂t`
//! followed by a Newton corrector at fixed `t`, with step-size halving on
//! rejection and growth on acceptance.
//!
//! Endpoints where the target Jacobian degenerates (multiple roots) are
//! recovered by tracking `w` loops around the circle `t = 1 − ρe^{iθ}`
//! until the path closes up and averaging the samples: by the mean-value
//! property of the analytic branch `x(1 − u^w)` the average equals the
//! endpoint exactly, up to tracking error and (spectrally small)
//! quadrature error — far better than Newton, which stalls at
//! `ε^{1/multiplicity}` on multiple roots.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use std::f64::consts::TAU;

use super::{PathResult, PathStatus, SolverError, TrackerConfig};
use crate::poly::{PolySystem, Polynomial};

/// A point moving through complex affine space.
pub type CPoint = DVector<Complex64>;

/// Declared escape to infinity (in the affine patch) beyond this norm.
const DIVERGENCE_NORM: f64 = 1e8;
/// Hard cap on predictor attempts per path; exceeding it truncates.
const MAX_STEPS_PER_PATH: usize = 40_000;
/// Samples per loop of the endgame circle.
const ENDGAME_NODES: usize = 128;
/// Maximum winding number probed by the endgame.
const ENDGAME_MAX_LOOPS: usize = 8;
/// Relative closure tolerance deciding that an endgame loop returned home.
const ENDGAME_CLOSURE_TOL: f64 = 1e-5;
/// Distance from t = 1 at which plain tracking hands over to the final
/// Newton stage (or the endgame).
const NEAR_END: f64 = 1e-6;
/// Iterates beyond this norm at the endgame boundary are treated as
/// escaping even before they hit the hard cap.
const ESCAPE_SUSPECT_NORM: f64 = 1e5;
/// Largest polished residual accepted from the endgame average; anything
/// worse is not a solution of the target.
const ENDGAME_ACCEPT_RESIDUAL: f64 = 1e-6;
/// Relative distance between the tracked endpoint and its Newton
/// refinement beyond which the refinement is considered to have jumped
/// into a different basin. Paths escaping to infinity grow only like
/// `(1−t)^{−1/m}` and can still sit at moderate norms when tracking
/// stops; plain Newton then happily pulls them onto some genuine finite
/// root, which would fabricate a duplicate. A true endpoint — even a
/// multiple one — is within `O(endgame precision)` of the limit, far
/// inside this margin.
const NEWTON_BASIN_JUMP: f64 = 0.1;

fn cnorm(x: &CPoint) -> f64 {
    x.norm()
}

fn is_finite(x: &CPoint) -> bool {
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Straight-line homotopy from a total-degree start system to a square
/// target, with precomputed target Jacobian.
pub struct Homotopy {
    target: PolySystem,
    target_jac: Vec<Vec<Polynomial>>,
    degrees: Vec<u32>,
    start_constants: Vec<Complex64>,
    gamma: Complex64,
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let theta: f64 = rng.random_range(0.0..TAU);
    Complex64::new(theta.cos(), theta.sin())
}

impl Homotopy {
    /// Build the homotopy, drawing the start constants and the global γ
    /// from `rng`. Fails on non-square systems or zero/constant equations
    /// (the total-degree start needs every degree ≥ 1).
    pub fn new<R: Rng + ?Sized>(target: PolySystem, rng: &mut R) -> Result<Self, SolverError> {
        if !target.is_square() {
            return Err(SolverError::NotSquare {
                equations: target.len(),
                unknowns: target.nvars(),
            });
        }
        let degrees = target.degrees();
        for (i, (&d, p)) in degrees.iter().zip(target.polys()).enumerate() {
            if p.is_zero() || d == 0 {
                return Err(SolverError::ZeroDegreeEquation { index: i });
            }
        }
        let start_constants = (0..target.nvars()).map(|_| random_unit(rng)).collect();
        let gamma = random_unit(rng);
        let target_jac = target.jacobian()?;
        Ok(Homotopy {
            target,
            target_jac,
            degrees,
            start_constants,
            gamma,
        })
    }

    pub fn target(&self) -> &PolySystem {
        &self.target
    }

    pub fn target_jacobian(&self) -> &[Vec<Polynomial>] {
        &self.target_jac
    }

    /// Number of paths: the Bézout number `Π dᵢ` of the target.
    pub fn path_count(&self) -> usize {
        self.degrees.iter().map(|&d| d as usize).product()
    }

    /// All start points `x_i = γ_i^{1/d_i}·ω_{d_i}^{k_i}` in lexicographic
    /// order of the root indices `(k_1, …, k_m)`.
    pub fn start_points(&self) -> Vec<CPoint> {
        let m = self.degrees.len();
        let mut roots: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        for (i, &d) in self.degrees.iter().enumerate() {
            let base = self.start_constants[i].powf(1.0 / d as f64);
            let mut var_roots = Vec::with_capacity(d as usize);
            for k in 0..d {
                let phase = TAU * k as f64 / d as f64;
                var_roots.push(base * Complex64::new(phase.cos(), phase.sin()));
            }
            roots.push(var_roots);
        }
        let total = self.path_count();
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rem = idx;
            let mut x = CPoint::zeros(m);
            // Mixed-radix decomposition, the last variable fastest.
            for i in (0..m).rev() {
                let d = self.degrees[i] as usize;
                x[i] = roots[i][rem % d];
                rem /= d;
            }
            out.push(x);
        }
        out
    }

    fn eval_start(&self, x: &CPoint) -> (DVector<Complex64>, Vec<Complex64>) {
        let m = self.degrees.len();
        let mut g = DVector::zeros(m);
        let mut gdiag = vec![Complex64::default(); m];
        for i in 0..m {
            let d = self.degrees[i];
            g[i] = x[i].powu(d) - self.start_constants[i];
            gdiag[i] = x[i].powu(d - 1) * d as f64;
        }
        (g, gdiag)
    }

    fn eval_target(&self, x: &CPoint) -> (DVector<Complex64>, DMatrix<Complex64>) {
        let m = self.degrees.len();
        let pt = x.as_slice();
        let mut f = DVector::zeros(m);
        let mut j = DMatrix::zeros(m, m);
        for i in 0..m {
            f[i] = self.target.polys()[i]
                .evaluate(pt)
                .expect("target arity fixed at construction");
            for k in 0..m {
                j[(i, k)] = self.target_jac[i][k]
                    .evaluate(pt)
                    .expect("jacobian arity fixed at construction");
            }
        }
        (f, j)
    }

    /// `H`, `∂H/∂x` and `∂H/∂t` at `(x, t)`; `t` may be complex (the
    /// endgame walks a circle around `t = 1`).
    fn eval_all(
        &self,
        x: &CPoint,
        t: Complex64,
    ) -> (DVector<Complex64>, DMatrix<Complex64>, DVector<Complex64>) {
        let (g, gdiag) = self.eval_start(x);
        let (f, jf) = self.eval_target(x);
        let one = Complex64::new(1.0, 0.0);
        let a = (one - t) * self.gamma;
        let m = g.len();
        let mut h = DVector::zeros(m);
        let mut ht = DVector::zeros(m);
        let mut j = jf.map(|z| z * t);
        for i in 0..m {
            h[i] = a * g[i] + t * f[i];
            ht[i] = f[i] - self.gamma * g[i];
            j[(i, i)] += a * gdiag[i];
        }
        (h, j, ht)
    }

    /// Davidenko tangent `dx/dt = −J⁻¹ ∂H/∂t`; `None` on singular `J`.
    fn tangent(&self, x: &CPoint, t: Complex64) -> Option<CPoint> {
        let (_, j, ht) = self.eval_all(x, t);
        j.lu().solve(&(-ht))
    }

    /// Newton correction of `x` toward `H(·, t) = 0`. Success means the
    /// last step was below `newton_tol·(1 + |x|)`.
    fn correct(&self, x: &mut CPoint, t: Complex64, cfg: &TrackerConfig) -> bool {
        for _ in 0..cfg.newton_max_iters {
            let (h, j, _) = self.eval_all(x, t);
            let Some(delta) = j.lu().solve(&h) else {
                return false;
            };
            *x -= &delta;
            if !is_finite(x) {
                return false;
            }
            if cnorm(&delta) <= cfg.newton_tol * (1.0 + cnorm(x)) {
                return true;
            }
        }
        false
    }
}

/// Parametrized sub-path of the homotopy: maps an increasing real
/// parameter to `(t, dt/ds)`.
trait TPath {
    fn at(&self, s: f64) -> (Complex64, Complex64);
}

/// The main leg: `t = s` on the real axis.
struct RealLeg;
impl TPath for RealLeg {
    fn at(&self, s: f64) -> (Complex64, Complex64) {
        (Complex64::new(s, 0.0), Complex64::new(1.0, 0.0))
    }
}

/// The endgame circle `t(θ) = 1 − ρ·e^{iθ}`.
struct Circle {
    rho: f64,
}
impl TPath for Circle {
    fn at(&self, s: f64) -> (Complex64, Complex64) {
        let e = Complex64::new(s.cos(), s.sin());
        let i = Complex64::new(0.0, 1.0);
        (Complex64::new(1.0, 0.0) - self.rho * e, -i * self.rho * e)
    }
}

enum Segment {
    /// Reached the requested end parameter.
    Reached(CPoint),
    /// Step size collapsed below the floor twice in a row.
    Stalled { x: CPoint, s: f64 },
    /// The iterate left the affine chart (`|x| > 1e8`).
    Escaped { x: CPoint },
    /// The per-path step budget ran out.
    Exhausted { x: CPoint },
}

fn track_segment(
    hom: &Homotopy,
    mut x: CPoint,
    s0: f64,
    s1: f64,
    path: &impl TPath,
    cfg: &TrackerConfig,
    budget: &mut usize,
) -> Segment {
    let mut s = s0;
    let mut h = cfg.step_init.min(s1 - s0);
    let mut floor_hits = 0u32;
    while s < s1 {
        if *budget == 0 {
            return Segment::Exhausted { x };
        }
        *budget -= 1;
        h = h.min(s1 - s);
        let accepted = rk4_then_correct(hom, &x, s, h, path, cfg);
        match accepted {
            Some(next) => {
                if cnorm(&next) > DIVERGENCE_NORM {
                    return Segment::Escaped { x: next };
                }
                x = next;
                s += h;
                h = (h * 1.5).min(cfg.step_max);
                floor_hits = 0;
            }
            None => {
                h *= 0.5;
                if h < cfg.step_min {
                    floor_hits += 1;
                    if floor_hits >= 2 {
                        return Segment::Stalled { x, s };
                    }
                    h = cfg.step_min;
                }
            }
        }
    }
    Segment::Reached(x)
}

fn rk4_then_correct(
    hom: &Homotopy,
    x: &CPoint,
    s: f64,
    h: f64,
    path: &impl TPath,
    cfg: &TrackerConfig,
) -> Option<CPoint> {
    let phi = |y: &CPoint, sp: f64| -> Option<CPoint> {
        let (t, dt) = path.at(sp);
        let tan = hom.tangent(y, t)?;
        Some(tan.map(|z| z * dt))
    };
    let k1 = phi(x, s)?;
    let k2 = phi(&(x + k1.map(|z| z * (h / 2.0))), s + h / 2.0)?;
    let k3 = phi(&(x + k2.map(|z| z * (h / 2.0))), s + h / 2.0)?;
    let k4 = phi(&(x + k3.map(|z| z * h)), s + h)?;
    let mut next = x + (k1 + k2.map(|z| z * 2.0) + k3.map(|z| z * 2.0) + k4).map(|z| z * (h / 6.0));
    if !is_finite(&next) {
        return None;
    }
    let predicted = next.clone();
    let pred_disp = (&predicted - x).norm();
    let (t_next, _) = path.at(s + h);
    if !hom.correct(&mut next, t_next, cfg) {
        return None;
    }
    // A correction comparable to the whole predicted advance means Newton
    // fell into a *different* branch of H(·, t) — the classic path-jumping
    // failure on steep (e.g. diverging) paths. Reject so the step halves;
    // a genuine branch keeps the correction at the RK4 local error, far
    // below this bound.
    let corr_disp = (&next - &predicted).norm();
    if corr_disp > 0.5 * pred_disp + 1e-6 * (1.0 + cnorm(x)) {
        return None;
    }
    Some(next)
}

/// Newton refinement against a square system with a precomputed Jacobian.
/// Keeps the best-residual iterate. `singular` is set when the Jacobian
/// fails to factor, the condition estimate exceeds 1e8, or convergence is
/// linear rather than quadratic (multiple root).
pub struct RefineOutcome {
    pub point: CPoint,
    pub residual: f64,
    pub singular: bool,
    pub iterations: usize,
}

pub(crate) fn refine_with_jacobian(
    system: &PolySystem,
    jac: &[Vec<Polynomial>],
    x0: &CPoint,
    max_iters: usize,
    target_residual: f64,
) -> RefineOutcome {
    let m = system.len();
    let eval = |x: &CPoint| -> (DVector<Complex64>, DMatrix<Complex64>) {
        let pt = x.as_slice();
        let mut f = DVector::zeros(m);
        let mut j = DMatrix::zeros(m, m);
        for i in 0..m {
            f[i] = system.polys()[i].evaluate(pt).expect("arity checked");
            for k in 0..m {
                j[(i, k)] = jac[i][k].evaluate(pt).expect("arity checked");
            }
        }
        (f, j)
    };
    let res_norm = |f: &DVector<Complex64>| f.iter().map(|z| z.norm()).fold(0.0f64, f64::max);

    let mut x = x0.clone();
    let (mut f, mut j) = eval(&x);
    let mut best = x.clone();
    let mut best_res = res_norm(&f);
    let mut singular = false;
    let mut prev_step: Option<f64> = None;
    let mut slow_steps = 0usize;
    let mut iters = 0usize;
    for _ in 0..max_iters {
        if best_res < target_residual {
            break;
        }
        let Some(delta) = j.clone().lu().solve(&f) else {
            singular = true;
            break;
        };
        x -= &delta;
        if !is_finite(&x) {
            singular = true;
            break;
        }
        iters += 1;
        let step = cnorm(&delta);
        if let Some(p) = prev_step {
            // A well-conditioned simple root contracts super-linearly; a
            // stubborn ratio marks a multiple root.
            if p > 0.0 && step > 0.25 * p && step > 1e-13 * (1.0 + cnorm(&x)) {
                slow_steps += 1;
            }
        }
        prev_step = Some(step);
        let (nf, nj) = eval(&x);
        let r = res_norm(&nf);
        if r < best_res {
            best = x.clone();
            best_res = r;
        }
        f = nf;
        j = nj;
    }
    // Linear contraction is singularity evidence even when the residual
    // ends up tiny: near a multiple root the residual scales like
    // dist^multiplicity and dives below any threshold long before the
    // point itself is accurate.
    if slow_steps >= 2 {
        singular = true;
    }
    if !singular {
        let (_, jb) = eval(&best);
        if condition_estimate(&jb) > 1e8 {
            singular = true;
        }
    }
    RefineOutcome {
        point: best,
        residual: best_res,
        singular,
        iterations: iters,
    }
}

/// Newton-refine `x` against `system` (residual target 1e−12, 30 steps).
pub fn refine(system: &PolySystem, x0: &CPoint) -> Result<RefineOutcome, SolverError> {
    if !system.is_square() {
        return Err(SolverError::NotSquare {
            equations: system.len(),
            unknowns: system.nvars(),
        });
    }
    let jac = system.jacobian()?;
    Ok(refine_with_jacobian(system, &jac, x0, 30, 1e-12))
}

/// Ratio `σ_max/σ_min` of the matrix (∞ for exactly singular input).
pub fn condition_estimate(j: &DMatrix<Complex64>) -> f64 {
    let sv = j.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn target_residual_norm(hom: &Homotopy, x: &CPoint) -> f64 {
    let (f, _) = hom.eval_target(x);
    f.iter().map(|z| z.norm()).fold(0.0f64, f64::max)
}

/// Loop the circle `|1 − t| = ρ` from `x_on_circle` (the point at θ = 0)
/// until the path closes up, then return the sample average — the exact
/// branch value at t = 1 up to tracking and quadrature error.
fn cauchy_endgame(
    hom: &Homotopy,
    x_on_circle: &CPoint,
    rho: f64,
    cfg: &TrackerConfig,
    budget: &mut usize,
) -> Option<CPoint> {
    let circle = Circle { rho };
    let mut samples: Vec<CPoint> = Vec::with_capacity(ENDGAME_NODES * 2);
    samples.push(x_on_circle.clone());
    let mut x = x_on_circle.clone();
    // Per-node arcs are short; start each from a fraction of the arc.
    let node_cfg = TrackerConfig {
        step_init: cfg.step_init.min(TAU / ENDGAME_NODES as f64),
        ..cfg.clone()
    };
    for loop_idx in 0..ENDGAME_MAX_LOOPS {
        for node in 0..ENDGAME_NODES {
            let s0 = TAU * (loop_idx as f64 + node as f64 / ENDGAME_NODES as f64);
            let s1 = TAU * (loop_idx as f64 + (node + 1) as f64 / ENDGAME_NODES as f64);
            match track_segment(hom, x, s0, s1, &circle, &node_cfg, budget) {
                Segment::Reached(nx) => {
                    x = nx;
                    samples.push(x.clone());
                }
                _ => return None,
            }
        }
        let back = cnorm(&(&x - &samples[0])) / (1.0 + cnorm(&samples[0]));
        if back < ENDGAME_CLOSURE_TOL {
            let w = loop_idx + 1;
            let count = w * ENDGAME_NODES;
            let mut mean = CPoint::zeros(x.len());
            for s in samples.iter().take(count) {
                mean += s;
            }
            mean /= Complex64::new(count as f64, 0.0);
            return Some(mean);
        }
    }
    None
}

/// A short keep-if-better Newton polish of an endgame average.
fn polish_keep_best(hom: &Homotopy, x0: &CPoint, max_iters: usize) -> (CPoint, f64) {
    let mut best = x0.clone();
    let mut best_res = target_residual_norm(hom, x0);
    let mut x = x0.clone();
    for _ in 0..max_iters {
        let (f, j) = hom.eval_target(&x);
        let Some(delta) = j.lu().solve(&f) else { break };
        x -= &delta;
        if !is_finite(&x) {
            break;
        }
        let r = target_residual_norm(hom, &x);
        if r < best_res {
            best = x.clone();
            best_res = r;
        } else {
            break;
        }
    }
    (best, best_res)
}

/// Track one path of the homotopy from its start point to `t = 1`.
pub fn track_path(hom: &Homotopy, start: &CPoint, cfg: &TrackerConfig) -> PathResult {
    let mut budget = MAX_STEPS_PER_PATH;
    let t_endgame = 1.0 - cfg.endgame_radius;
    let t_near = 1.0 - NEAR_END;

    let finish = |x: CPoint, status: PathStatus| -> PathResult {
        let final_residual = target_residual_norm(hom, &x);
        let (_, j) = hom.eval_target(&x);
        PathResult {
            endpoint: x,
            status,
            final_residual,
            condition_estimate: condition_estimate(&j),
        }
    };
    let diverged = |x: CPoint| -> PathResult {
        PathResult {
            final_residual: f64::INFINITY,
            condition_estimate: f64::INFINITY,
            endpoint: x,
            status: PathStatus::Diverged,
        }
    };

    // Main leg: the open interval where the gamma trick guarantees
    // smoothness. A stall here means the path is running off to infinity
    // (steps shrink while the iterate accelerates), so it is declared
    // diverged rather than truncated.
    let x_mid = match track_segment(
        hom,
        start.clone(),
        0.0,
        t_endgame,
        &RealLeg,
        cfg,
        &mut budget,
    ) {
        Segment::Reached(x) => x,
        Segment::Escaped { x } => return diverged(x),
        Segment::Stalled { x, .. } => return diverged(x),
        Segment::Exhausted { x, .. } => return finish(x, PathStatus::Truncated),
    };

    // Approach leg: close in on t = 1 radially; hand over to the endgame
    // from wherever progress stops.
    let (x_near, reached_near, stall_s) =
        match track_segment(hom, x_mid, t_endgame, t_near, &RealLeg, cfg, &mut budget) {
            Segment::Reached(x) => (x, true, t_near),
            Segment::Escaped { x } => return diverged(x),
            Segment::Stalled { x, s } => (x, false, s),
            Segment::Exhausted { x, .. } => return finish(x, PathStatus::Truncated),
        };

    // A path whose iterate has grown like 1/(1−t) is escaping to infinity
    // even if it has not crossed the hard norm cap yet; the endgame would
    // happily average the garbage, so divert it here.
    if cnorm(&x_near) > ESCAPE_SUSPECT_NORM {
        return diverged(x_near);
    }

    if reached_near {
        let rr = refine_with_jacobian(hom.target(), hom.target_jacobian(), &x_near, 30, 1e-12);
        let jump = (&rr.point - &x_near).norm() / (1.0 + cnorm(&x_near));
        if jump > NEWTON_BASIN_JUMP {
            return diverged(x_near);
        }
        if !rr.singular && rr.residual < cfg.residual_tol {
            return finish(rr.point, PathStatus::Converged);
        }
        // Singular endpoint: average around the (tiny) final circle.
        if let Some(mean) = cauchy_endgame(hom, &x_near, NEAR_END, cfg, &mut budget) {
            let (polished, res) = polish_keep_best(hom, &mean, 3);
            if res < ENDGAME_ACCEPT_RESIDUAL {
                return finish(polished, PathStatus::SingularEndpoint);
            }
        }
        if rr.residual < cfg.residual_tol {
            return finish(rr.point, PathStatus::SingularEndpoint);
        }
        return finish(x_near, PathStatus::Truncated);
    }

    // The tracker stalled at distance ρ from t = 1: loop the circle of
    // exactly that radius.
    let rho = 1.0 - stall_s;
    if let Some(mean) = cauchy_endgame(hom, &x_near, rho, cfg, &mut budget) {
        let (polished, res) = polish_keep_best(hom, &mean, 3);
        if res < ENDGAME_ACCEPT_RESIDUAL {
            return finish(polished, PathStatus::SingularEndpoint);
        }
    }
    finish(x_near, PathStatus::Truncated)
}

/// Track every start point; deterministic order (and therefore output),
/// parallel execution.
pub fn track_all(hom: &Homotopy, cfg: &TrackerConfig) -> Vec<PathResult> {
    let starts = hom.start_points();
    starts.par_iter().map(|s| track_path(hom, s, cfg)).collect()
}
