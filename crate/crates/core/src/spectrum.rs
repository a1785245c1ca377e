//! Exponent matrices, their lifted form and the nullspace coordinates.
//!
//! A spectrum is an `n × t` real matrix whose columns are the exponent
//! points of an exponential sum. Prepending a row of ones gives the lifted
//! matrix; an orthonormal basis of its right nullspace supplies the reduced
//! coordinates used everywhere else in the crate.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default relative singular-value threshold for rank and nullspace decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Row-norm threshold under which a nullspace row counts as zero.
pub const DEFAULT_ZERO_ROW_TOL: f64 = 1e-8;

/// Exponent matrix with pairwise distinct columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    matrix: DMatrix<f64>,
}

impl Spectrum {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (n, t) = matrix.shape();
        if n == 0 || t == 0 {
            return Err(Error::InvalidSpectrum(format!(
                "need at least one row and one column, got {n}x{t}"
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite entry".into()));
        }
        for i in 0..t {
            for j in (i + 1)..t {
                if matrix.column(i) == matrix.column(j) {
                    return Err(Error::InvalidSpectrum(format!(
                        "columns {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { matrix })
    }

    /// Builds a spectrum from row-major numeric rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let t = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != t) {
            return Err(Error::InvalidSpectrum("ragged rows".into()));
        }
        Self::new(DMatrix::from_fn(n, t, |i, j| rows[i][j]))
    }

    /// Builds a spectrum from row-major textual entries (see [`parse_exponent`]).
    pub fn parse_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_exponent(s.as_ref())).collect())
            .collect::<Result<Vec<Vec<f64>>>>()?;
        Self::from_rows(&parsed)
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn t(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.matrix.column(j).iter().copied().collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.t()).map(|j| self.column(j)).collect()
    }

    /// `a_j · y` for every column.
    pub fn exponents_at(&self, y: &[f64]) -> Vec<f64> {
        (0..self.t())
            .map(|j| {
                self.matrix
                    .column(j)
                    .iter()
                    .zip(y)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn lifted(&self) -> LiftedMatrix {
        build_lifted(self)
    }
}

/// Parses an exponent entry.
///
/// Accepts decimals (`-1.5`, `2e-3`), fractions (`3/4`), and square roots of
/// non-negative literals with an optional factor (`sqrt(2)`, `-3*sqrt(5)`).
pub fn parse_exponent(text: &str) -> Result<f64> {
    let err = || Error::ParseExponent(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err());
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(&s)),
    };
    let literal = |x: &str| -> Result<f64> {
        let v: f64 = x.parse().map_err(|_| err())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(err())
        }
    };
    let value = if let Some(pos) = body.find("sqrt(") {
        let inner = body[pos + 5..].strip_suffix(')').ok_or_else(err)?;
        let radicand = literal(inner)?;
        if radicand < 0.0 {
            return Err(err());
        }
        let factor = match &body[..pos] {
            "" => 1.0,
            f => literal(f.strip_suffix('*').ok_or_else(err)?)?,
        };
        factor * radicand.sqrt()
    } else if let Some((num, den)) = body.split_once('/') {
        let d = literal(den)?;
        if d == 0.0 {
            return Err(err());
        }
        literal(num)? / d
    } else {
        literal(body)?
    };
    Ok(sign * value)
}

/// The `(n+1) × t` matrix with a leading row of ones.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedMatrix(DMatrix<f64>);

impl LiftedMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn t(&self) -> usize {
        self.0.ncols()
    }
}

pub fn build_lifted(spec: &Spectrum) -> LiftedMatrix {
    let (n, t) = spec.matrix.shape();
    LiftedMatrix(DMatrix::from_fn(n + 1, t, |i, j| {
        if i == 0 {
            1.0
        } else {
            spec.matrix[(i - 1, j)]
        }
    }))
}

/// Singular values and right singular vectors of `m`, with `m` padded by
/// zero rows so that every right singular vector is available.
fn full_right_svd(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (r, c) = m.shape();
    let padded = if r < c {
        DMatrix::from_fn(c, c, |i, j| if i < r { m[(i, j)] } else { 0.0 })
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    (svd.singular_values.iter().copied().collect(), v_t)
}

fn rank_with(singular: &[f64], tol: f64) -> usize {
    let max = singular.iter().copied().fold(0.0, f64::max);
    let cutoff = tol * max;
    singular.iter().filter(|&&s| s > cutoff).count()
}

/// `d(A) = rank(Â) - 1`, with rank decided by a relative singular-value cut.
pub fn affine_dimension(lifted: &LiftedMatrix, tol: f64) -> usize {
    let (s, _) = full_right_svd(&lifted.0);
    rank_with(&s, tol).saturating_sub(1)
}

/// Orthonormal basis of the right nullspace of the lifted matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NullBasis {
    matrix: DMatrix<f64>,
    orthonormal: bool,
}

impl NullBasis {
    /// Wraps an arbitrary `t × k` basis matrix (not necessarily orthonormal).
    pub fn from_matrix(matrix: DMatrix<f64>) -> Self {
        let k = matrix.ncols();
        let gram = matrix.transpose() * &matrix;
        let orthonormal = (gram - DMatrix::identity(k, k)).amax() < 1e-12;
        Self {
            matrix,
            orthonormal,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn t(&self) -> usize {
        self.matrix.nrows()
    }

    /// Number of reduced coordinates, `t - d(A) - 1`.
    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.matrix.row(i).iter().copied().collect()
    }

    /// Rows as 2-vectors; only valid when there are exactly two reduced coordinates.
    pub fn rows2(&self) -> Result<Vec<[f64; 2]>> {
        if self.dim() != 2 {
            return Err(Error::WrongReducedDimension {
                expected: 2,
                found: self.dim(),
            });
        }
        Ok((0..self.t())
            .map(|i| [self.matrix[(i, 0)], self.matrix[(i, 1)]])
            .collect())
    }

    /// `max |Â B|`.
    pub fn residual(&self, lifted: &LiftedMatrix) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        (lifted.matrix() * &self.matrix).amax()
    }

    /// `(Log|c|) B` for a coefficient vector without zero entries.
    pub fn reduce_log_abs(&self, c: &[f64]) -> Vec<f64> {
        let logs = DVector::from_iterator(c.len(), c.iter().map(|x| x.abs().ln()));
        (self.matrix.transpose() * logs).iter().copied().collect()
    }

    /// Minimum-norm `u` with `u B = v`; equals `B v` for an orthonormal basis.
    pub fn lift(&self, v: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(v);
        if self.orthonormal {
            return (&self.matrix * v).iter().copied().collect();
        }
        let gram = self.matrix.transpose() * &self.matrix;
        let coeffs = gram
            .lu()
            .solve(&v)
            .expect("basis columns are linearly independent");
        (&self.matrix * coeffs).iter().copied().collect()
    }
}

/// Orthonormal nullspace basis of `Â` from its singular value decomposition.
///
/// Returns an empty basis (zero columns) when `Â` has full column rank.
pub fn nullspace_basis(lifted: &LiftedMatrix, tol: f64) -> Result<NullBasis> {
    let t = lifted.t();
    let (s, v_t) = full_right_svd(&lifted.0);
    let max = s.iter().copied().fold(0.0, f64::max);
    let cutoff = tol * max;
    let mut null_rows: Vec<usize> = (0..s.len()).filter(|&i| s[i] <= cutoff).collect();
    null_rows.sort_unstable();
    let k = null_rows.len();
    let mut b = DMatrix::zeros(t, k);
    for (col, &r) in null_rows.iter().enumerate() {
        // Fix the sign so that the largest-magnitude entry is positive.
        let row = v_t.row(r);
        let pivot = row
            .iter()
            .copied()
            .fold(0.0_f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        let flip = if pivot < 0.0 { -1.0 } else { 1.0 };
        for j in 0..t {
            b[(j, col)] = flip * row[j];
        }
    }
    Ok(NullBasis {
        matrix: b,
        orthonormal: true,
    })
}

/// A row `β_i` with norm at most `tol` makes the spectrum pyramidal.
///
/// With zero reduced coordinates every row is empty, hence zero: a simplex
/// is a pyramid over any of its facets.
pub fn is_pyramidal(basis: &NullBasis, tol: f64) -> bool {
    (0..basis.t()).any(|i| basis.matrix.row(i).norm() <= tol)
}

/// Structural summary of a spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub t: usize,
    pub d: usize,
    pub pyramidal: bool,
    /// `None` when the face lattice is not available (`n > 3`).
    pub combinatorially_simplicial: Option<bool>,
    /// `t - d(A)`.
    pub circuit_defect: usize,
    /// Necessary conditions for non-defectiveness hold (not pyramidal, `t - d >= 2`).
    pub plausibly_non_defective: bool,
}

pub fn analyze(spec: &Spectrum, tol: f64) -> Result<(SpectrumReport, NullBasis)> {
    let lifted = spec.lifted();
    let d = affine_dimension(&lifted, tol);
    let basis = nullspace_basis(&lifted, tol)?;
    let pyramidal = is_pyramidal(&basis, DEFAULT_ZERO_ROW_TOL);
    let combinatorially_simplicial = match crate::completion::is_combinatorially_simplicial(spec) {
        Ok(b) => Some(b),
        Err(Error::UnsupportedDimension(_)) => None,
        Err(e) => return Err(e),
    };
    let circuit_defect = spec.t() - d;
    Ok((
        SpectrumReport {
            n: spec.n(),
            t: spec.t(),
            d,
            pyramidal,
            combinatorially_simplicial,
            circuit_defect,
            plausibly_non_defective: !pyramidal && circuit_defect >= 2,
        },
        basis,
    ))
}
