//! Numerical solution of the tangency systems by total-degree homotopy
//! continuation, endpoint deduplication, and certification.
//!
//! The pipeline for spheres is: build the reduced direction system, pick a
//! random affine patch of projective direction space (a random linear
//! functional set to 1 — coordinate patches would lose the symmetric
//! families whose solutions have vanishing coordinates), track one path
//! per unit of Bézout count, cluster the endpoints projectively, and
//! back-substitute each cluster representative into a moment-normalized
//! line with its tangency residual, reality flag and multiplicity
//! (= cluster size).
//!
//! Everything is deterministic in the configured seed: random choices
//! (patch, start constants, γ) come from a counter-based generator seeded
//! from it, and paths are reduced in index order regardless of thread
//! scheduling.

mod tracking;

pub use tracking::{
    condition_estimate, refine, track_all, track_path, CPoint, Homotopy, RefineOutcome,
};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::formulation::{build_reduced_system, FormulationError, ReducedSystem};
use crate::geometry::{
    canonical_projective, chordal_distance, is_real_line, line_distance, max_tangency_residual,
    CVec, GeometryError, Line, SolutionRecord, SphereArrangement,
};
use crate::poly::{AffinePatch, PolyError, PolySystem, Polynomial};
use crate::quadrics::{
    grassmann_relations, is_at_infinity, line_from_plucker, tangency_form, ProjectiveQuadric,
    QuadricError,
};

/// Seed stream separators so the patch and the homotopy constants draw
/// from unrelated generators.
const SEED_STREAM_PATCH: u64 = 0x9E37_79B9_7F4A_7C15;
const SEED_STREAM_HOMOTOPY: u64 = 0xD1B5_4A32_D192_ED03;

/// Clusters closer than this multiple of `dedup_tol` (without merging)
/// make the clustering ambiguous.
const CLUSTER_GUARD_FACTOR: f64 = 5.0;
/// Fraction of paths allowed to end as isolated singular endpoints before
/// the solution set is suspected to be positive-dimensional.
const NON_FINITE_FRACTION: f64 = 0.2;
/// Residual bound for an endpoint of a squared system to count as a
/// solution of the original (overdetermined) one.
const ORIGINAL_SYSTEM_FILTER: f64 = 1e-6;
/// Relative size of the `π_{0i}` block below which a Plücker endpoint is
/// a line at infinity. Endpoints on a positive-dimensional component at
/// infinity are only resolved to roughly endgame accuracy, so this is
/// deliberately looser than the dedup tolerance; genuine finite tangents
/// keep direction coordinates orders of magnitude above it.
const AT_INFINITY_TOL: f64 = 1e-4;
/// Residual gate for endpoints the tracker could not certify (typically
/// stuck on an excess component, where there is no isolated limit to
/// certify). Anything under it that also lies at infinity is tallied as
/// absorbed rather than lost.
const UNCERTIFIED_ABSORB_RESIDUAL: f64 = 1e-4;
/// At-infinity test for *uncertified* endpoints: a path stalling on its
/// way into the hyperplane at infinity stops with the `π_{0i}` block
/// around `(1−t_stall)^{1/m}`, far from zero; finite tangents keep the
/// block at order one.
const UNCERTIFIED_AT_INFINITY_TOL: f64 = 1e-2;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("system is not square: {equations} equations in {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
    #[error("equation {index} has total degree 0; a total-degree start is undefined")]
    ZeroDegreeEquation { index: usize },
    #[error("invalid tracker configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "endpoint clusters separated by {distance:.3e} are ambiguous at dedup tolerance {tol:.3e}"
    )]
    UnresolvedCluster { distance: f64, tol: f64 },
    #[error(
        "{suspicious} of {total} paths ended as isolated singular endpoints; \
         the solution set appears to be positive-dimensional"
    )]
    NonFiniteSolutionSet { suspicious: usize, total: usize },
    #[error("expected {expected} quadrics in P^{n}, got {got}")]
    WrongQuadricCount {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("all quadrics must share one ambient dimension")]
    MixedAmbientDimensions,
    #[error("quadric tangents are solved in P^3 and (by squaring) P^4; got P^{0}")]
    UnsupportedQuadricDimension(usize),
    #[error(transparent)]
    Formulation(#[from] FormulationError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quadric(#[from] QuadricError),
}

/// Tolerances and step-size policy for path tracking and classification.
#[derive(Clone, Debug)]
pub struct TrackerConfig {
    /// Initial parameter step.
    pub step_init: f64,
    /// Step floor; collapsing below it twice in a row ends the path.
    pub step_min: f64,
    /// Step ceiling.
    pub step_max: f64,
    /// Relative Newton-corrector convergence threshold.
    pub newton_tol: f64,
    /// Corrector iterations per predictor step.
    pub newton_max_iters: usize,
    /// Distance from `t = 1` at which the endgame zone begins.
    pub endgame_radius: f64,
    /// Projective distance merging endpoints into one solution.
    pub dedup_tol: f64,
    /// Imaginary-part threshold for classifying a line as real.
    pub reality_tol: f64,
    /// System residual a converged path must reach.
    pub residual_tol: f64,
    /// Seed for every random choice of the run.
    pub seed: u64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            step_init: 0.05,
            step_min: 1e-10,
            step_max: 0.2,
            newton_tol: 1e-11,
            newton_max_iters: 4,
            endgame_radius: 0.01,
            dedup_tol: 1e-6,
            reality_tol: 1e-7,
            residual_tol: 1e-8,
            seed: 0,
        }
    }
}

impl TrackerConfig {
    /// Same defaults, different seed.
    pub fn with_seed(seed: u64) -> Self {
        TrackerConfig {
            seed,
            ..TrackerConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |msg: &str| Err(SolverError::InvalidConfig(msg.to_string()));
        if !(self.step_min > 0.0 && self.step_min <= self.step_init) {
            return bad("require 0 < step_min <= step_init");
        }
        if !(self.step_init <= self.step_max && self.step_max < 1.0) {
            return bad("require step_init <= step_max < 1");
        }
        if !(self.endgame_radius > 0.0 && self.endgame_radius < 0.5) {
            return bad("require 0 < endgame_radius < 0.5");
        }
        if self.newton_max_iters == 0 {
            return bad("require newton_max_iters >= 1");
        }
        for (name, v) in [
            ("newton_tol", self.newton_tol),
            ("dedup_tol", self.dedup_tol),
            ("reality_tol", self.reality_tol),
            ("residual_tol", self.residual_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SolverError::InvalidConfig(format!(
                    "tolerance {name} must be positive and finite"
                )));
            }
        }
        Ok(())
    }
}

/// Terminal state of one tracked path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathStatus {
    /// Reached `t = 1` with a regular Jacobian and a small residual.
    Converged,
    /// Escaped to infinity in the affine chart.
    Diverged,
    /// Gave up (step budget or failed endgame); endpoint is best effort.
    Truncated,
    /// Reached `t = 1` at a point where the Jacobian degenerates
    /// (multiple root); endpoint comes from the circular endgame.
    SingularEndpoint,
}

/// One path's endpoint with certification data.
#[derive(Clone, Debug)]
pub struct PathResult {
    pub endpoint: CPoint,
    pub status: PathStatus,
    /// ∞-norm of the target system at the endpoint.
    pub final_residual: f64,
    /// `σ_max/σ_min` of the target Jacobian at the endpoint.
    pub condition_estimate: f64,
}

impl PathResult {
    /// Whether the endpoint approximates an actual target solution.
    pub fn is_solution(&self) -> bool {
        matches!(
            self.status,
            PathStatus::Converged | PathStatus::SingularEndpoint
        )
    }
}

/// Tally of path statuses for a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PathStats {
    pub converged: usize,
    pub diverged: usize,
    pub truncated: usize,
    pub singular: usize,
}

impl PathStats {
    pub fn tally(paths: &[PathResult]) -> PathStats {
        let mut s = PathStats::default();
        for p in paths {
            match p.status {
                PathStatus::Converged => s.converged += 1,
                PathStatus::Diverged => s.diverged += 1,
                PathStatus::Truncated => s.truncated += 1,
                PathStatus::SingularEndpoint => s.singular += 1,
            }
        }
        s
    }

    pub fn total(&self) -> usize {
        self.converged + self.diverged + self.truncated + self.singular
    }
}

/// A deduplicated, deterministic solution list with provenance.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    /// Sorted lexicographically by the rounded canonical coordinates of
    /// `(v, p)`.
    pub records: Vec<SolutionRecord>,
    /// Number of tracked paths (the Bézout number of the tracked system);
    /// 0 for closed-form enumerations.
    pub raw_path_count: usize,
    /// Coefficients of the affine patch functional, when one was used.
    pub patch: Option<Vec<Complex64>>,
    /// Configuration the set was produced under.
    pub config: TrackerConfig,
    pub stats: PathStats,
}

impl SolutionSet {
    /// Solutions counted with multiplicity.
    pub fn total_multiplicity(&self) -> usize {
        self.records.iter().map(|r| r.multiplicity).sum()
    }

    /// Real solutions counted with multiplicity.
    pub fn real_count(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.is_real)
            .map(|r| r.multiplicity)
            .sum()
    }

    pub fn lines(&self) -> Vec<Line> {
        self.records.iter().map(|r| r.line.clone()).collect()
    }

    /// Stable ordering: lexicographic over rounded canonical coordinates.
    pub(crate) fn sort_records(records: &mut [SolutionRecord]) {
        records.sort_by_cached_key(record_sort_key);
    }
}

fn record_sort_key(r: &SolutionRecord) -> Vec<(i64, i64)> {
    let canon = r.line.canonicalized();
    let quantize = |z: &Complex64| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64);
    canon
        .v
        .iter()
        .map(&quantize)
        .chain(canon.p.iter().map(&quantize))
        .collect()
}

/// Assemble closed-form enumerations into the common output shape.
pub(crate) fn solution_set_from_lines(
    lines: Vec<Line>,
    arrangement: &SphereArrangement,
    cfg: &TrackerConfig,
) -> Result<SolutionSet, SolverError> {
    let mut records = Vec::with_capacity(lines.len());
    for line in lines {
        let residual = max_tangency_residual(arrangement, &line)?;
        let is_real = is_real_line(&line, cfg.reality_tol);
        let v_isotropic = line.is_isotropic();
        records.push(SolutionRecord {
            line,
            residual,
            is_real,
            multiplicity: 1,
            v_isotropic,
        });
    }
    SolutionSet::sort_records(&mut records);
    Ok(SolutionSet {
        records,
        raw_path_count: 0,
        patch: None,
        config: cfg.clone(),
        stats: PathStats::default(),
    })
}

// ---------------------------------------------------------------------------
// Endpoint clustering

#[derive(Debug)]
struct Clustering {
    /// Clusters as sorted member-index lists, ordered by smallest member.
    clusters: Vec<Vec<usize>>,
}

/// Single-linkage clustering of projective points at `tol`, with a guard
/// band: distinct clusters closer than `CLUSTER_GUARD_FACTOR · tol` are an
/// ambiguity error (re-run with retuned tolerance).
fn cluster_projective(points: &[CVec], tol: f64) -> Result<Clustering, SolverError> {
    let k = points.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if chordal_distance(&points[i], &points[j]) < tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..k {
        let r = find(&mut parent, i);
        by_root.entry(r).or_default().push(i);
    }
    let clusters: Vec<Vec<usize>> = by_root.into_values().collect();
    // Ambiguity guard: single linkage already merged anything below tol,
    // so inter-cluster gaps below the guard band mean the tolerance sits
    // inside a real gap in the data.
    let mut min_gap = f64::INFINITY;
    for a in 0..clusters.len() {
        for b in (a + 1)..clusters.len() {
            for &i in &clusters[a] {
                for &j in &clusters[b] {
                    min_gap = min_gap.min(chordal_distance(&points[i], &points[j]));
                }
            }
        }
    }
    if min_gap < CLUSTER_GUARD_FACTOR * tol {
        return Err(SolverError::UnresolvedCluster {
            distance: min_gap,
            tol,
        });
    }
    Ok(Clustering { clusters })
}

/// Cluster the solution endpoints of a tracked run on the patched reduced
/// system, back-substitute representatives, and classify.
pub fn deduplicate_and_classify(
    paths: &[PathResult],
    reduced: &ReducedSystem,
    patch: &AffinePatch,
    cfg: &TrackerConfig,
) -> Result<SolutionSet, SolverError> {
    let solution_paths: Vec<usize> = (0..paths.len())
        .filter(|&i| paths[i].is_solution())
        .collect();
    let lifted: Vec<CVec> = solution_paths
        .iter()
        .map(|&i| {
            let l = patch.lift(paths[i].endpoint.as_slice());
            canonical_projective(&CVec::from_vec(l))
        })
        .collect();

    let clustering = cluster_projective(&lifted, cfg.dedup_tol)?;

    // Positive-dimensional suspicion: isolated singular endpoints are the
    // signature of paths scattering along a solution curve.
    let singular_singletons = clustering
        .clusters
        .iter()
        .filter(|c| {
            c.len() == 1
                && matches!(
                    paths[solution_paths[c[0]]].status,
                    PathStatus::SingularEndpoint
                )
        })
        .count();
    if !paths.is_empty()
        && (singular_singletons as f64) > NON_FINITE_FRACTION * (paths.len() as f64)
    {
        return Err(SolverError::NonFiniteSolutionSet {
            suspicious: singular_singletons,
            total: paths.len(),
        });
    }

    // Refine each cluster's best member against the patched system before
    // back-substituting.
    let patched = patch.apply(&reduced.system().equilibrated())?;
    let patched_jac = patched.jacobian()?;

    let mut records = Vec::with_capacity(clustering.clusters.len());
    for members in &clustering.clusters {
        let best = *members
            .iter()
            .min_by(|&&a, &&b| {
                paths[solution_paths[a]]
                    .final_residual
                    .total_cmp(&paths[solution_paths[b]].final_residual)
            })
            .expect("clusters are nonempty");
        let refined = tracking::refine_with_jacobian(
            &patched,
            &patched_jac,
            &paths[solution_paths[best]].endpoint,
            20,
            1e-13,
        );
        let lifted_rep =
            canonical_projective(&CVec::from_vec(patch.lift(refined.point.as_slice())));
        let line = reduced.back_substitute(&lifted_rep)?;
        let residual = max_tangency_residual(reduced.arrangement(), &line)?;
        let is_real = is_real_line(&line, cfg.reality_tol);
        let v_isotropic = line.is_isotropic();
        records.push(SolutionRecord {
            line,
            residual,
            is_real,
            multiplicity: members.len(),
            v_isotropic,
        });
    }
    SolutionSet::sort_records(&mut records);
    Ok(SolutionSet {
        records,
        raw_path_count: paths.len(),
        patch: Some(patch.coeffs().to_vec()),
        config: cfg.clone(),
        stats: PathStats::tally(paths),
    })
}

/// Full pipeline for a sphere arrangement with a seed-derived random patch.
pub fn solve_arrangement(
    arr: &SphereArrangement,
    cfg: &TrackerConfig,
) -> Result<SolutionSet, SolverError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ SEED_STREAM_PATCH);
    let patch = AffinePatch::random(arr.n(), &mut rng);
    solve_arrangement_with_patch(arr, cfg, &patch)
}

/// Same pipeline with a caller-chosen affine patch (for reproducing runs
/// or testing patch independence).
pub fn solve_arrangement_with_patch(
    arr: &SphereArrangement,
    cfg: &TrackerConfig,
    patch: &AffinePatch,
) -> Result<SolutionSet, SolverError> {
    cfg.validate()?;
    let reduced = build_reduced_system(arr)?;
    let patched = patch.apply(&reduced.system().equilibrated())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ SEED_STREAM_HOMOTOPY);
    let hom = Homotopy::new(patched, &mut rng)?;
    let paths = track_all(&hom, cfg);
    deduplicate_and_classify(&paths, &reduced, patch, cfg)
}

// ---------------------------------------------------------------------------
// Quadrics

/// Outcome of the quadric pipeline: isolated finite tangents plus a tally
/// of paths absorbed by the hyperplane at infinity (the excess component
/// for spheres) or filtered as square-up artifacts.
#[derive(Clone, Debug)]
pub struct QuadricTangentReport {
    pub set: SolutionSet,
    /// Solution endpoints lying in the hyperplane at infinity. For 2n−2
    /// spheres fed as quadrics these populate the excess component.
    pub at_infinity_paths: usize,
    /// Endpoints of the squared system that fail the original equations
    /// (n = 4 only), plus any solution endpoint the original system
    /// rejects.
    pub filtered_paths: usize,
    pub ambient_dim: usize,
}

/// Common tangent lines to `2n−2` quadrics in `P^n` via Plücker
/// coordinates. `n = 3` tracks the Grassmann relation plus four tangency
/// forms directly; `n = 4` squares the 11 equations into 9 random complex
/// combinations and filters endpoints against the originals.
pub fn solve_quadrics(
    quadrics: &[ProjectiveQuadric],
    cfg: &TrackerConfig,
) -> Result<QuadricTangentReport, SolverError> {
    cfg.validate()?;
    let Some(first) = quadrics.first() else {
        return Err(SolverError::WrongQuadricCount {
            n: 0,
            expected: 0,
            got: 0,
        });
    };
    let n = first.ambient_dim();
    if quadrics.iter().any(|q| q.ambient_dim() != n) {
        return Err(SolverError::MixedAmbientDimensions);
    }
    if !(3..=4).contains(&n) {
        return Err(SolverError::UnsupportedQuadricDimension(n));
    }
    let expected = 2 * n - 2;
    if quadrics.len() != expected {
        return Err(SolverError::WrongQuadricCount {
            n,
            expected,
            got: quadrics.len(),
        });
    }

    let m = n + 1;
    let nv = m * (m - 1) / 2;
    let mut eqs = grassmann_relations(m);
    eqs.extend(quadrics.iter().map(tangency_form));
    let full = PolySystem::new(nv, eqs)?.equilibrated();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ SEED_STREAM_PATCH);
    let patch = AffinePatch::random(nv, &mut rng);
    let patched = patch.apply(&full)?;
    let square = if patched.is_square() {
        patched
    } else {
        random_square_combination(&patched, &mut rng)?
    };

    let mut hrng = ChaCha8Rng::seed_from_u64(cfg.seed ^ SEED_STREAM_HOMOTOPY);
    let hom = Homotopy::new(square.clone(), &mut hrng)?;
    let paths = track_all(&hom, cfg);

    // Split solution endpoints into: artifacts of the squaring, lines at
    // infinity, and finite candidates.
    let full_residual = |pt: &CVec| -> f64 {
        full.evaluate(pt.as_slice())
            .expect("arity matches")
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
    };
    let mut at_infinity = 0usize;
    let mut filtered = 0usize;
    let mut finite_paths: Vec<usize> = Vec::new();
    let mut finite_points: Vec<CVec> = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        let canon = canonical_projective(&CVec::from_vec(patch.lift(p.endpoint.as_slice())));
        let res = full_residual(&canon);
        if p.is_solution() {
            if res > ORIGINAL_SYSTEM_FILTER {
                filtered += 1;
            } else if is_at_infinity(&canon, m, AT_INFINITY_TOL) {
                at_infinity += 1;
            } else {
                finite_paths.push(i);
                finite_points.push(canon);
            }
        } else if res <= UNCERTIFIED_ABSORB_RESIDUAL
            && is_at_infinity(&canon, m, UNCERTIFIED_AT_INFINITY_TOL)
        {
            // Truncated or diverged on the excess component: the endgame
            // cannot certify a limit on a positive-dimensional set, but
            // projectively the endpoint is heading cleanly to infinity.
            at_infinity += 1;
        } else {
            filtered += 1;
        }
    }

    let clustering = cluster_projective(&finite_points, cfg.dedup_tol)?;
    let square_jac = square.jacobian()?;
    let mut records = Vec::with_capacity(clustering.clusters.len());
    for members in &clustering.clusters {
        let best = *members
            .iter()
            .min_by(|&&a, &&b| {
                paths[finite_paths[a]]
                    .final_residual
                    .total_cmp(&paths[finite_paths[b]].final_residual)
            })
            .expect("clusters are nonempty");
        let refined = tracking::refine_with_jacobian(
            &square,
            &square_jac,
            &paths[finite_paths[best]].endpoint,
            20,
            1e-13,
        );
        let canon = canonical_projective(&CVec::from_vec(patch.lift(refined.point.as_slice())));
        let Some(line) = line_from_plucker(&canon, n, AT_INFINITY_TOL)? else {
            // Refinement pushed a borderline endpoint onto the hyperplane
            // at infinity after all.
            at_infinity += members.len();
            continue;
        };
        let residual = full_residual(&canon) / canon.norm_squared();
        let is_real = is_real_line(&line, cfg.reality_tol);
        let v_isotropic = line.is_isotropic();
        records.push(SolutionRecord {
            line,
            residual,
            is_real,
            multiplicity: members.len(),
            v_isotropic,
        });
    }
    SolutionSet::sort_records(&mut records);
    let set = SolutionSet {
        records,
        raw_path_count: paths.len(),
        patch: Some(patch.coeffs().to_vec()),
        config: cfg.clone(),
        stats: PathStats::tally(&paths),
    };
    Ok(QuadricTangentReport {
        set,
        at_infinity_paths: at_infinity,
        filtered_paths: filtered,
        ambient_dim: n,
    })
}

/// Replace an overdetermined patched system (k equations, v < k unknowns)
/// by `v` random complex linear combinations of its equations: solutions
/// of the original survive; extra endpoints are filtered afterwards.
fn random_square_combination(
    system: &PolySystem,
    rng: &mut ChaCha8Rng,
) -> Result<PolySystem, SolverError> {
    let unknowns = system.nvars();
    let k = system.len();
    let mut combos = Vec::with_capacity(unknowns);
    for _ in 0..unknowns {
        let mut acc = Polynomial::zero(unknowns);
        for poly in system.polys().iter().take(k) {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            acc = &acc + &poly.scale(Complex64::new(re, im));
        }
        combos.push(acc);
    }
    Ok(PolySystem::new(unknowns, combos)?)
}

// ---------------------------------------------------------------------------
// Set matching

/// Greedy bijective matching between two equal-sized line lists; returns
/// the largest matched distance, or `None` on a size mismatch. With
/// well-separated solution sets (separation ≫ tolerance) greedy matching
/// is exact.
pub fn match_lines(expected: &[Line], found: &[Line]) -> Option<f64> {
    if expected.len() != found.len() {
        return None;
    }
    let mut used = vec![false; found.len()];
    let mut worst: f64 = 0.0;
    for e in expected {
        let mut best: Option<(usize, f64)> = None;
        for (j, f) in found.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = line_distance(e, f);
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        let (j, d) = best?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}
