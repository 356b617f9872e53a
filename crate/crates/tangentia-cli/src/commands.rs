//! One function per subcommand. Data artifacts go to `--out` or stdout;
//! the one-line run summary goes to stdout when the data went to a file
//! and to stderr otherwise, so piped output stays machine-readable.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use tangentia::families::{
    crosspolytope_arrangement, crosspolytope_tangents, perturbed_crosspolytope_arrangement,
    perturbed_crosspolytope_tangents, region_sample, tetra_axes_arrangement, tetra_axes_tangents,
    PerturbedParams, TetraAxesParams,
};
use tangentia::formulation::{bezout_bound_quadrics, bezout_bound_spheres, grassmannian_degree};
use tangentia::geometry::{
    conjugate_line, is_real_line, line_distance, max_tangency_residual, Sphere, SphereArrangement,
};
use tangentia::poly::AffinePatch;
use tangentia::solver::{
    match_lines, solve_arrangement, solve_arrangement_with_patch, solve_quadrics, SolutionSet,
    TrackerConfig,
};

use crate::schema::{
    region_csv, solutions_csv, to_json_string, ArrangementFile, QuadricsFile, SolutionsFile,
};
use crate::{CliError, FamilyName, OutputFormat, PatchArg, RunManifest};

/// Seed-stream separator for the verification perturbation, so it never
/// correlates with the solver's internal draws.
const SEED_STREAM_VERIFY: u64 = 0x7AB5_0C1A_11FE_55ED;

/// Center perturbation applied before cross-checking a closed-form family
/// whose exact arrangement is affinely degenerate. Smaller offsets make
/// the reduced system's center basis ill-conditioned (condition grows
/// like 1/eps) and path tracking unreliable; 1e-2 keeps every path
/// convergent while moving the tangents only a few times eps.
const VERIFY_PERTURBATION: f64 = 1e-2;

/// Retry budget for the perturbation draw: a small fraction of offset
/// patterns still steer paths near singularities, so the draw is
/// reseeded until the tracked set is complete.
const VERIFY_ATTEMPTS: u64 = 8;

/// Worst admissible matching distance when the family arrangement is
/// solved exactly.
const VERIFY_MATCH_TOL_EXACT: f64 = 1e-4;

/// Worst admissible matching distance against a perturbed copy of a
/// degenerate arrangement; the tangents themselves move by up to ~20x
/// the perturbation, while distinct lines stay >= 0.6 apart.
const VERIFY_MATCH_TOL_NUDGED: f64 = 0.5;

/// Relative tolerance on the stored moment constraint `p·v = 0`.
const MOMENT_TOL: f64 = 1e-8;

fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_to_string(path)?)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Write the data artifact and emit the summary on the free stream.
fn emit(manifest: &RunManifest, data: &str, summary: &str) -> Result<(), CliError> {
    match &manifest.out {
        Some(path) => {
            fs::write(path, data)
                .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
            println!("{summary}");
        }
        None => {
            print!("{data}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn render_solutions(
    set: &SolutionSet,
    n: usize,
    manifest: &RunManifest,
) -> Result<String, CliError> {
    let file = SolutionsFile::from_set(set);
    match manifest.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => to_json_string(&file),
        OutputFormat::Csv => Ok(solutions_csv(&file, n)),
    }
}

fn sphere_summary(n: usize, set: &SolutionSet) -> String {
    format!(
        "n={n} total={} real={} max={}",
        set.total_multiplicity(),
        set.real_count(),
        3u128 << (n - 1)
    )
}

pub fn cmd_solve(input: &Path, manifest: &RunManifest) -> Result<(), CliError> {
    let file: ArrangementFile = parse_json(input)?;
    let arr = file.to_arrangement()?;
    let set = match &manifest.patch {
        PatchArg::Random => solve_arrangement(&arr, &manifest.config)?,
        PatchArg::Index(i) => {
            let patch = AffinePatch::index(*i, arr.n()).map_err(CliError::input)?;
            solve_arrangement_with_patch(&arr, &manifest.config, &patch)?
        }
    };
    let data = render_solutions(&set, arr.n(), manifest)?;
    emit(manifest, &data, &sphere_summary(arr.n(), &set))
}

pub fn cmd_family(
    name: FamilyName,
    n: usize,
    a: Option<f64>,
    r: f64,
    verify_homotopy: bool,
    manifest: &RunManifest,
) -> Result<(), CliError> {
    let cfg = &manifest.config;
    let (set, arrangement) = match name {
        FamilyName::TetraAxes => {
            let a = a.ok_or_else(|| CliError::input("family tetra-axes requires --a"))?;
            let params = TetraAxesParams::new(n, a, r)?;
            (
                tetra_axes_tangents(&params, cfg)?,
                tetra_axes_arrangement(&params)?,
            )
        }
        FamilyName::Crosspolytope => {
            if a.is_some() {
                return Err(CliError::input("family crosspolytope has no --a parameter"));
            }
            (
                crosspolytope_tangents(n, r, cfg)?,
                crosspolytope_arrangement(n, r)?,
            )
        }
        FamilyName::Perturbed => {
            let a = a.ok_or_else(|| CliError::input("family perturbed requires --a"))?;
            let params = PerturbedParams::new(n, a, r)?;
            (
                perturbed_crosspolytope_tangents(&params, cfg)?,
                perturbed_crosspolytope_arrangement(&params)?,
            )
        }
    };

    let mut summary = sphere_summary(n, &set);
    if verify_homotopy {
        let worst = cross_check(name, &set, &arrangement, cfg)?;
        summary.push_str(&format!(" verify-homotopy={worst:.3e}"));
    }

    let data = render_solutions(&set, n, manifest)?;
    emit(manifest, &data, &summary)
}

/// Re-solve the family arrangement numerically and return the worst
/// projective distance from a closed-form line to the tracked set.
///
/// The tetra-axes arrangement is generic and is solved exactly. The
/// crosspolytope-like families have all centers in a coordinate
/// hyperplane, which the homotopy formulation rejects; those are solved
/// after a seeded generic perturbation of size `VERIFY_PERTURBATION`,
/// retried with fresh offsets until the tracked set carries the full
/// solution count.
fn cross_check(
    name: FamilyName,
    closed: &SolutionSet,
    arrangement: &SphereArrangement,
    cfg: &TrackerConfig,
) -> Result<f64, CliError> {
    let closed_lines = closed.lines();
    let (worst, tol) = match name {
        FamilyName::TetraAxes => {
            let solved = solve_arrangement(arrangement, cfg)?;
            let worst = match_lines(&closed_lines, &solved.lines()).ok_or_else(|| {
                CliError::mismatch(format!(
                    "verify-homotopy: closed form has {} lines, tracker found {}",
                    closed_lines.len(),
                    solved.records.len()
                ))
            })?;
            (worst, VERIFY_MATCH_TOL_EXACT)
        }
        FamilyName::Crosspolytope | FamilyName::Perturbed => {
            let solved = solve_nudged(arrangement, cfg)?;
            let solved_lines = solved.lines();
            let mut worst: f64 = 0.0;
            for line in &closed_lines {
                let nearest = solved_lines
                    .iter()
                    .map(|s| line_distance(line, s))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(nearest);
            }
            (worst, VERIFY_MATCH_TOL_NUDGED)
        }
    };
    if worst > tol {
        return Err(CliError::mismatch(format!(
            "verify-homotopy: worst matching distance {worst:.3e} exceeds {tol:.0e}"
        )));
    }
    Ok(worst)
}

/// Track a generically perturbed copy of a degenerate arrangement,
/// reseeding the offsets until every expected solution is recovered.
fn solve_nudged(
    arrangement: &SphereArrangement,
    cfg: &TrackerConfig,
) -> Result<SolutionSet, CliError> {
    let expected = 3 << (arrangement.n() - 1);
    for attempt in 0..VERIFY_ATTEMPTS {
        let nudged = perturb_centers(
            arrangement,
            VERIFY_PERTURBATION,
            cfg.seed ^ SEED_STREAM_VERIFY ^ attempt,
        )?;
        if let Ok(set) = solve_arrangement(&nudged, cfg) {
            if set.total_multiplicity() == expected {
                return Ok(set);
            }
        }
    }
    Err(CliError::degenerate(format!(
        "verify-homotopy: no perturbed copy of the degenerate arrangement tracked \
         all {expected} solutions in {VERIFY_ATTEMPTS} attempts"
    )))
}

fn perturb_centers(
    arr: &SphereArrangement,
    eps: f64,
    seed: u64,
) -> Result<SphereArrangement, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spheres = Vec::with_capacity(arr.spheres().len());
    for s in arr.spheres() {
        let mut c = s.center().clone();
        for x in c.iter_mut() {
            *x += rng.random_range(-eps..eps);
        }
        spheres.push(Sphere::new(c, s.radius()).map_err(CliError::input)?);
    }
    SphereArrangement::new(arr.n(), spheres).map_err(CliError::input)
}

fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 {
        return Err(CliError::input("grid steps must be at least 1"));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    let h = (max - min) / (steps - 1) as f64;
    Ok((0..steps).map(|i| min + h * i as f64).collect())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_region(
    n: usize,
    a_min: f64,
    a_max: f64,
    a_steps: usize,
    r_min: f64,
    r_max: f64,
    r_steps: usize,
    manifest: &RunManifest,
) -> Result<(), CliError> {
    if manifest.format == Some(OutputFormat::Json) {
        return Err(CliError::input("region output is CSV only"));
    }
    let a_grid = linspace(a_min, a_max, a_steps)?;
    let r_grid = linspace(r_min, r_max, r_steps)?;
    let rows = region_sample(n, &a_grid, &r_grid)?;
    let all_real = rows.iter().filter(|r| r.all_real).count();
    let on_disc = rows.iter().filter(|r| r.on_discriminant).count();
    let summary = format!(
        "n={n} rows={} all-real={all_real} on-discriminant={on_disc}",
        rows.len()
    );
    emit(manifest, &region_csv(&rows), &summary)
}

pub fn cmd_bound(n: usize, manifest: &RunManifest) -> Result<(), CliError> {
    if !(3..=16).contains(&n) {
        return Err(CliError::input(format!(
            "n must be between 3 and 16, got {n}"
        )));
    }
    let spheres = bezout_bound_spheres(n)
        .ok_or_else(|| CliError::input(format!("sphere bound overflows for n = {n}")))?;
    let quadrics = bezout_bound_quadrics(n)
        .ok_or_else(|| CliError::input(format!("quadric bound overflows for n = {n}")))?;
    let degree = grassmannian_degree(n)
        .ok_or_else(|| CliError::input(format!("Grassmannian degree overflows for n = {n}")))?;
    let data = match manifest.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => to_json_string(&json!({
            "n": n,
            "spheres": spheres,
            "quadrics": quadrics,
            "grassmannian_degree": degree,
        }))?,
        OutputFormat::Csv => {
            format!("n,spheres,quadrics,grassmannian_degree\n{n},{spheres},{quadrics},{degree}\n")
        }
    };
    let summary =
        format!("n={n} spheres={spheres} quadrics={quadrics} grassmannian-degree={degree}");
    emit(manifest, &data, &summary)
}

pub fn cmd_verify(
    arrangement_path: &Path,
    solutions_path: &Path,
    manifest: &RunManifest,
) -> Result<(), CliError> {
    let arr_file: ArrangementFile = parse_json(arrangement_path)?;
    let arr = arr_file.to_arrangement()?;
    let sol: SolutionsFile = parse_json(solutions_path)?;
    let cfg = &manifest.config;
    let n = arr.n();

    let mut lines = Vec::with_capacity(sol.records.len());
    for (i, rec) in sol.records.iter().enumerate() {
        lines.push(rec.to_line(i, n)?);
    }

    let mut problems: Vec<String> = Vec::new();
    for (i, (rec, line)) in sol.records.iter().zip(&lines).enumerate() {
        if rec.multiplicity == 0 {
            problems.push(format!("record {i}: multiplicity must be at least 1"));
        }
        let vnorm = line.v.norm();
        if vnorm == 0.0 {
            problems.push(format!("record {i}: direction vector is zero"));
            continue;
        }
        let moment = line.p.dot(&line.v).norm() / (1.0 + line.p.norm() * vnorm);
        if moment > MOMENT_TOL {
            problems.push(format!(
                "record {i}: moment constraint |p.v| = {moment:.3e} exceeds {MOMENT_TOL:.0e}"
            ));
        }
        match max_tangency_residual(&arr, line) {
            Ok(res) => {
                if res > cfg.residual_tol {
                    problems.push(format!(
                        "record {i}: residual {res:.3e} exceeds {:.0e}",
                        cfg.residual_tol
                    ));
                }
            }
            Err(e) => problems.push(format!("record {i}: {e}")),
        }
        let actually_real = is_real_line(line, cfg.reality_tol);
        if actually_real != rec.real {
            problems.push(format!(
                "record {i}: reality flag is {}, recomputed {}",
                rec.real, actually_real
            ));
        }
    }

    // Complex solutions must close under conjugation, multiplicities
    // included.
    let pair_tol = cfg.dedup_tol.max(1e-8);
    for (i, (rec, line)) in sol.records.iter().zip(&lines).enumerate() {
        if rec.real || line.v.norm() == 0.0 {
            continue;
        }
        let conj = conjugate_line(line);
        let mut best: Option<(usize, f64)> = None;
        for (j, other) in lines.iter().enumerate() {
            if j == i || other.v.norm() == 0.0 {
                continue;
            }
            let d = line_distance(&conj, other);
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= pair_tol => {
                if sol.records[j].multiplicity != rec.multiplicity {
                    problems.push(format!(
                        "record {i}: conjugate partner {j} has multiplicity {}, expected {}",
                        sol.records[j].multiplicity, rec.multiplicity
                    ));
                }
            }
            _ => problems.push(format!(
                "record {i}: no conjugate partner within {pair_tol:.0e}"
            )),
        }
    }

    if problems.is_empty() {
        println!("verify: PASS records={}", sol.records.len());
        Ok(())
    } else {
        for p in &problems {
            println!("{p}");
        }
        println!("verify: FAIL problems={}", problems.len());
        Err(CliError::silent_mismatch())
    }
}

pub fn cmd_quadrics(input: &Path, manifest: &RunManifest) -> Result<(), CliError> {
    if let PatchArg::Index(_) = manifest.patch {
        return Err(CliError::input(
            "quadrics always uses the seeded random patch; --patch index is not supported",
        ));
    }
    let file: QuadricsFile = parse_json(input)?;
    let quadrics = file.to_quadrics()?;
    let report = solve_quadrics(&quadrics, &manifest.config)?;
    let n = report.ambient_dim;
    let bound = bezout_bound_quadrics(n)
        .ok_or_else(|| CliError::input(format!("quadric bound overflows for n = {n}")))?;
    let set = &report.set;
    let summary = format!(
        "n={n} total={} real={} at-infinity={} filtered={} max={bound}",
        set.total_multiplicity(),
        set.real_count(),
        report.at_infinity_paths,
        report.filtered_paths
    );
    let data = render_solutions(set, n, manifest)?;
    emit(manifest, &data, &summary)
}
