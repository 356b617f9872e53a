//! Sparse multivariate polynomials over `Complex64`.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, so iteration (and therefore evaluation and
//! serialization) is deterministic. Degrees in this crate are tiny (≤ 4 before
//! patching), so no effort is spent on asymptotically clever multiplication.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Errors from polynomial construction, evaluation and patching.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("variable count mismatch: expected {expected}, got {got}")]
    VariableMismatch { expected: usize, got: usize },
    #[error("point has {got} coordinates but the polynomial has {expected} variables")]
    PointLength { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("affine patch requires a homogeneous system; polynomial {index} is not homogeneous")]
    NotHomogeneous { index: usize },
    #[error("patch functional is zero (no usable pivot coordinate)")]
    ZeroPatch,
    #[error("system is not square: {npolys} equations in {nvars} variables")]
    NotSquare { npolys: usize, nvars: usize },
}

/// Exponent vector of a single term, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn evaluate(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (&e, &x) in self.0.iter().zip(point) {
            if e > 0 {
                acc *= x.powu(e);
            }
        }
        acc
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: compare total degree first, then exponents.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// A sparse polynomial in `nvars` complex variables.
///
/// Zero coefficients are never stored; the zero polynomial has an empty term
/// map. Operations on operands with differing variable counts panic in debug
/// builds and are a caller bug.
#[derive(Clone, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Complex64, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::constant(nvars), c);
        p
    }

    pub fn real_constant(c: f64, nvars: usize) -> Self {
        Self::constant(Complex64::new(c, 0.0), nvars)
    }

    /// The monomial `x_index` as a polynomial.
    pub fn variable(index: usize, nvars: usize) -> Result<Self, PolyError> {
        if index >= nvars {
            return Err(PolyError::VariableIndex { index, nvars });
        }
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::new(exps), Complex64::new(1.0, 0.0));
        Ok(p)
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(PolyError::VariableMismatch {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Complex64 {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    fn add_term(&mut self, m: Monomial, c: Complex64) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = *e.get() + c;
                if sum == Complex64::new(0.0, 0.0) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: Complex64) -> Polynomial {
        if c == Complex64::new(0.0, 0.0) {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// True when every stored term has the same total degree (vacuously true
    /// for the zero polynomial).
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &c) in &self.terms {
            acc += c * m.evaluate(point);
        }
        Ok(acc)
    }

    /// Partial derivative with respect to `var`.
    pub fn differentiate(&self, var: usize) -> Result<Polynomial, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableIndex {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, &c) in &self.terms {
            let e = m.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] = e - 1;
            out.add_term(Monomial::new(exps), c * e as f64);
        }
        Ok(out)
    }

    /// Substitute `replacement` for variable `var`. The replacement must live
    /// in the same variable space; afterwards `var` no longer occurs.
    pub fn substitute(
        &self,
        var: usize,
        replacement: &Polynomial,
    ) -> Result<Polynomial, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableIndex {
                index: var,
                nvars: self.nvars,
            });
        }
        if replacement.nvars != self.nvars {
            return Err(PolyError::VariableMismatch {
                expected: self.nvars,
                got: replacement.nvars,
            });
        }
        let max_pow = self
            .terms
            .keys()
            .map(|m| m.exponents()[var])
            .max()
            .unwrap_or(0);
        // Cache replacement powers 0..=max_pow.
        let mut powers = Vec::with_capacity(max_pow as usize + 1);
        powers.push(Polynomial::real_constant(1.0, self.nvars));
        for k in 1..=max_pow {
            let next = &powers[k as usize - 1] * replacement;
            powers.push(next);
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, &c) in &self.terms {
            let e = m.exponents()[var];
            let mut exps = m.exponents().to_vec();
            exps[var] = 0;
            let base = Polynomial::from_terms(self.nvars, [(exps, c)])?;
            out = &out + &(&base * &powers[e as usize]);
        }
        Ok(out)
    }

    /// Drop variable `var` (which must not occur) and renumber the rest.
    pub fn remove_variable(&self, var: usize) -> Result<Polynomial, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableIndex {
                index: var,
                nvars: self.nvars,
            });
        }
        debug_assert!(self.terms.keys().all(|m| m.exponents()[var] == 0));
        let mut out = Polynomial::zero(self.nvars - 1);
        for (m, &c) in &self.terms {
            let mut exps = m.exponents().to_vec();
            exps.remove(var);
            out.add_term(Monomial::new(exps), c);
        }
        Ok(out)
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficientwise comparison: largest modulus of the difference.
    pub fn max_coefficient_distance(&self, other: &Polynomial) -> f64 {
        let mut worst: f64 = 0.0;
        for (m, c) in &self.terms {
            worst = worst.max((c - other.terms.get(m).copied().unwrap_or_default()).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6e}{:+.6e}i)", c.re, c.im)?;
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// A finite list of polynomials in a shared variable space.
#[derive(Clone, Debug)]
pub struct PolySystem {
    nvars: usize,
    polys: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(nvars: usize, polys: Vec<Polynomial>) -> Result<Self, PolyError> {
        for p in &polys {
            if p.nvars() != nvars {
                return Err(PolyError::VariableMismatch {
                    expected: nvars,
                    got: p.nvars(),
                });
            }
        }
        Ok(PolySystem { nvars, polys })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.polys.len() == self.nvars
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(Polynomial::total_degree).collect()
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Vec<Complex64>, PolyError> {
        self.polys.iter().map(|p| p.evaluate(point)).collect()
    }

    /// All first partials, row-major: `jacobian()[i][j] = ∂ polys[i] / ∂ x_j`.
    pub fn jacobian(&self) -> Result<Vec<Vec<Polynomial>>, PolyError> {
        self.polys
            .iter()
            .map(|p| (0..self.nvars).map(|j| p.differentiate(j)).collect())
            .collect()
    }

    /// Scale every polynomial so its largest coefficient has modulus one.
    /// Leaves zero polynomials untouched. Root sets are unchanged; this keeps
    /// Newton steps well scaled when equations have wildly different scales.
    pub fn equilibrated(&self) -> PolySystem {
        let polys = self
            .polys
            .iter()
            .map(|p| {
                let m = p.max_coefficient_norm();
                if m > 0.0 {
                    p.scale(Complex64::new(1.0 / m, 0.0))
                } else {
                    p.clone()
                }
            })
            .collect();
        PolySystem {
            nvars: self.nvars,
            polys,
        }
    }
}

/// An affine chart `ℓ(x) = 1` of projective space, used to dehomogenize a
/// homogeneous square-to-be system.
///
/// The variable with the largest `|ℓ_k|` is eliminated:
/// `x_k = (1 − Σ_{i≠k} ℓ_i x_i) / ℓ_k`, and the remaining variables are
/// renumbered by dropping index `k`. Solutions of the patched system are in
/// bijection with projective solutions satisfying `ℓ(x) ≠ 0`; for a random
/// complex `ℓ` that excludes nothing with probability one.
#[derive(Clone, Debug)]
pub struct AffinePatch {
    coeffs: Vec<Complex64>,
    pivot: usize,
}

impl AffinePatch {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, PolyError> {
        let pivot = coeffs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i)
            .ok_or(PolyError::ZeroPatch)?;
        if coeffs[pivot].norm() == 0.0 {
            return Err(PolyError::ZeroPatch);
        }
        Ok(AffinePatch { coeffs, pivot })
    }

    /// Random complex-Gaussian functional, normalized to unit 2-norm.
    pub fn random<R: rand::Rng + ?Sized>(nvars: usize, rng: &mut R) -> Self {
        use rand_distr::{Distribution, StandardNormal};
        let mut coeffs: Vec<Complex64> = (0..nvars)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for c in &mut coeffs {
                *c /= norm;
            }
        } else {
            coeffs[0] = Complex64::new(1.0, 0.0);
        }
        AffinePatch::new(coeffs).expect("nonzero by construction")
    }

    /// The coordinate chart `x_index = 1`.
    pub fn index(index: usize, nvars: usize) -> Result<Self, PolyError> {
        if index >= nvars {
            return Err(PolyError::VariableIndex { index, nvars });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); nvars];
        coeffs[index] = Complex64::new(1.0, 0.0);
        AffinePatch::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    /// Dehomogenize a homogeneous system onto this chart. Every polynomial
    /// must be homogeneous; the result has one variable fewer.
    pub fn apply(&self, system: &PolySystem) -> Result<PolySystem, PolyError> {
        if system.nvars() != self.coeffs.len() {
            return Err(PolyError::VariableMismatch {
                expected: self.coeffs.len(),
                got: system.nvars(),
            });
        }
        for (i, p) in system.polys().iter().enumerate() {
            if !p.is_homogeneous() {
                return Err(PolyError::NotHomogeneous { index: i });
            }
        }
        let nv = system.nvars();
        // x_pivot = (1 − Σ_{i≠pivot} ℓ_i x_i) / ℓ_pivot, in the full space.
        let inv = Complex64::new(1.0, 0.0) / self.coeffs[self.pivot];
        let mut replacement = Polynomial::constant(inv, nv);
        for i in 0..nv {
            if i == self.pivot {
                continue;
            }
            let xi = Polynomial::variable(i, nv)?;
            replacement = &replacement - &xi.scale(self.coeffs[i] * inv);
        }
        let patched = system
            .polys()
            .iter()
            .map(|p| {
                p.substitute(self.pivot, &replacement)
                    .and_then(|q| q.remove_variable(self.pivot))
            })
            .collect::<Result<Vec<_>, _>>()?;
        PolySystem::new(nv - 1, patched)
    }

    /// Reconstruct the full-space point from patched coordinates.
    pub fn lift(&self, point: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(point.len() + 1, self.coeffs.len());
        let mut acc = Complex64::new(1.0, 0.0);
        let mut full = Vec::with_capacity(self.coeffs.len());
        let mut it = point.iter();
        for i in 0..self.coeffs.len() {
            if i == self.pivot {
                full.push(Complex64::new(0.0, 0.0)); // placeholder
            } else {
                let &x = it.next().expect("length checked");
                acc -= self.coeffs[i] * x;
                full.push(x);
            }
        }
        full[self.pivot] = acc / self.coeffs[self.pivot];
        full
    }

    /// Project a full-space point with `ℓ(x) ≠ 0` into patched coordinates
    /// (scales onto the chart, then drops the pivot coordinate).
    pub fn project(&self, point: &[Complex64]) -> Option<Vec<Complex64>> {
        debug_assert_eq!(point.len(), self.coeffs.len());
        let ell: Complex64 = self.coeffs.iter().zip(point).map(|(c, x)| c * x).sum();
        if ell.norm() < 1e-14 {
            return None;
        }
        Some(
            point
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != self.pivot)
                .map(|(_, x)| x / ell)
                .collect(),
        )
    }

    /// Evaluate `ℓ` at a full-space point.
    pub fn functional(&self, point: &[Complex64]) -> Complex64 {
        self.coeffs.iter().zip(point).map(|(c, x)| c * x).sum()
    }
}
