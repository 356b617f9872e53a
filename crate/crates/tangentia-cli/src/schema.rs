//! On-disk formats: arrangement, solution-set, and quadric files (JSON)
//! plus the CSV renderings. All floats round-trip exactly through JSON
//! because both directions use shortest-representation printing.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use tangentia::families::RegionClassification;
use tangentia::geometry::{cvec_from_parts, Line, Sphere, SphereArrangement};
use tangentia::quadrics::ProjectiveQuadric;
use tangentia::solver::SolutionSet;

use crate::CliError;

/// `{"n": ..., "spheres": [{"center": [...], "radius": ...}, ...]}`
#[derive(Serialize, Deserialize)]
pub struct ArrangementFile {
    pub n: usize,
    pub spheres: Vec<SphereEntry>,
}

#[derive(Serialize, Deserialize)]
pub struct SphereEntry {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl ArrangementFile {
    pub fn to_arrangement(&self) -> Result<SphereArrangement, CliError> {
        let mut spheres = Vec::with_capacity(self.spheres.len());
        for s in &self.spheres {
            spheres.push(
                Sphere::new(DVector::from_row_slice(&s.center), s.radius)
                    .map_err(CliError::input)?,
            );
        }
        SphereArrangement::new(self.n, spheres).map_err(CliError::input)
    }
}

/// `{"patch": [[re, im], ...], "records": [...]}`; closed-form
/// enumerations carry an empty patch.
#[derive(Serialize, Deserialize)]
pub struct SolutionsFile {
    pub patch: Vec<[f64; 2]>,
    pub records: Vec<RecordEntry>,
}

#[derive(Serialize, Deserialize)]
pub struct RecordEntry {
    pub p_re: Vec<f64>,
    pub p_im: Vec<f64>,
    pub v_re: Vec<f64>,
    pub v_im: Vec<f64>,
    pub real: bool,
    pub residual: f64,
    pub multiplicity: usize,
}

impl SolutionsFile {
    pub fn from_set(set: &SolutionSet) -> Self {
        let patch = set
            .patch
            .as_ref()
            .map(|c| c.iter().map(|z| [z.re, z.im]).collect())
            .unwrap_or_default();
        let records = set
            .records
            .iter()
            .map(|r| RecordEntry {
                p_re: r.line.p.iter().map(|z| z.re).collect(),
                p_im: r.line.p.iter().map(|z| z.im).collect(),
                v_re: r.line.v.iter().map(|z| z.re).collect(),
                v_im: r.line.v.iter().map(|z| z.im).collect(),
                real: r.is_real,
                residual: r.residual,
                multiplicity: r.multiplicity,
            })
            .collect();
        SolutionsFile { patch, records }
    }
}

impl RecordEntry {
    /// Reconstruct the stored line verbatim (no moment re-normalization:
    /// the verifier checks the constraint as stored).
    pub fn to_line(&self, index: usize, n: usize) -> Result<Line, CliError> {
        for (name, part) in [
            ("p_re", &self.p_re),
            ("p_im", &self.p_im),
            ("v_re", &self.v_re),
            ("v_im", &self.v_im),
        ] {
            if part.len() != n {
                return Err(CliError::input(format!(
                    "record {index}: {name} has length {}, expected n = {n}",
                    part.len()
                )));
            }
        }
        let p = cvec_from_parts(&self.p_re, &self.p_im).map_err(CliError::input)?;
        let v = cvec_from_parts(&self.v_re, &self.v_im).map_err(CliError::input)?;
        Ok(Line { p, v })
    }
}

/// `{"n": ..., "quadrics": [{"matrix": [[...], ...]}, ...]}` with
/// symmetric real `(n+1)x(n+1)` matrices.
#[derive(Serialize, Deserialize)]
pub struct QuadricsFile {
    pub n: usize,
    pub quadrics: Vec<QuadricEntry>,
}

#[derive(Serialize, Deserialize)]
pub struct QuadricEntry {
    pub matrix: Vec<Vec<f64>>,
}

impl QuadricsFile {
    pub fn to_quadrics(&self) -> Result<Vec<ProjectiveQuadric>, CliError> {
        let m = self.n + 1;
        let mut out = Vec::with_capacity(self.quadrics.len());
        for (i, q) in self.quadrics.iter().enumerate() {
            if q.matrix.len() != m || q.matrix.iter().any(|row| row.len() != m) {
                return Err(CliError::input(format!(
                    "quadric {i}: matrix must be {m}x{m} for n = {}",
                    self.n
                )));
            }
            let flat: Vec<Complex64> = q
                .matrix
                .iter()
                .flatten()
                .map(|&x| Complex64::new(x, 0.0))
                .collect();
            let mat = DMatrix::from_row_slice(m, m, &flat);
            out.push(
                ProjectiveQuadric::new(mat)
                    .map_err(|e| CliError::input(format!("quadric {i}: {e}")))?,
            );
        }
        Ok(out)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(CliError::input)?;
    s.push('\n');
    Ok(s)
}

/// Flat CSV rendering of a solution set; the patch is omitted.
pub fn solutions_csv(file: &SolutionsFile, n: usize) -> String {
    let mut out = String::from("real,residual,multiplicity");
    for block in ["p_re", "p_im", "v_re", "v_im"] {
        for i in 0..n {
            out.push_str(&format!(",{block}_{i}"));
        }
    }
    out.push('\n');
    for r in &file.records {
        out.push_str(&format!(
            "{},{},{}",
            u8::from(r.real),
            r.residual,
            r.multiplicity
        ));
        for part in [&r.p_re, &r.p_im, &r.v_re, &r.v_im] {
            for x in part.iter() {
                out.push_str(&format!(",{x}"));
            }
        }
        out.push('\n');
    }
    out
}

/// Plot-ready grid classification; flags are 0/1 integers.
pub fn region_csv(rows: &[RegionClassification]) -> String {
    let mut out = String::from("a,r,on_discriminant,all_real,count_real\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.a,
            row.r,
            u8::from(row.on_discriminant),
            u8::from(row.all_real),
            row.count_real
        ));
    }
    out
}
