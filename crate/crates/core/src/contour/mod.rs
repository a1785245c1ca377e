//! Reduced discriminant contours when the parameter space is the projective line.
//!
//! With two reduced coordinates the map `ξ(θ) = Σ_i log|λ(θ)·β_i| β_i`,
//! `λ(θ) = (cos θ, sin θ)`, is a curve in the plane. The hyperplane
//! arrangement becomes a finite set of breakpoints on `[0, π)`; between two
//! consecutive breakpoints the sign of `λ B^T` is constant and the curve runs
//! off to infinity at both ends.

mod cusps;
mod trace;

pub use cusps::{
    coordinate_derivative_polys, cusp_polynomials, find_cusps, CuspPolynomials, CuspSet,
};
pub use trace::{trace_all, trace_signed_contour, ContourArc, ContourPoint, Sampling};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::parametrization::{xi, ProjParam};
use crate::poly::Poly;
use crate::sign::SignClass;
use crate::spectrum::NullBasis;

/// Angular tolerance under which two breakpoints are the same point of `P¹`.
pub const BREAKPOINT_MERGE_TOL: f64 = 1e-9;

/// A zero `θ ∈ [0, π)` of the linear form `λ(θ)·β_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Breakpoint {
    pub theta: f64,
    pub index: usize,
}

/// Angle on `[0, π)` of the line `λ·β = 0`.
pub(crate) fn kernel_angle(beta: [f64; 2]) -> f64 {
    beta[0].atan2(-beta[1]).rem_euclid(PI)
}

/// All `t` breakpoints, sorted by angle.
pub fn breakpoints(basis: &NullBasis) -> Result<Vec<Breakpoint>> {
    let rows = basis.rows2()?;
    let mut bps: Vec<Breakpoint> = rows
        .iter()
        .enumerate()
        .map(|(index, &b)| Breakpoint {
            theta: kernel_angle(b),
            index,
        })
        .collect();
    bps.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.index.cmp(&b.index)));
    Ok(bps)
}

/// Breakpoints that coincide on `P¹`, merged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakGroup {
    pub theta: f64,
    pub indices: Vec<usize>,
}

/// Distinct points of `P¹` hit by the arrangement, sorted by angle.
pub fn breakpoint_groups(basis: &NullBasis) -> Result<Vec<BreakGroup>> {
    let bps = breakpoints(basis)?;
    let mut groups: Vec<BreakGroup> = Vec::new();
    for bp in bps {
        match groups.last_mut() {
            Some(g) if bp.theta - g.theta <= BREAKPOINT_MERGE_TOL => g.indices.push(bp.index),
            _ => groups.push(BreakGroup {
                theta: bp.theta,
                indices: vec![bp.index],
            }),
        }
    }
    // merge across the wrap θ = π ≡ 0
    if groups.len() > 1 {
        let first = groups[0].theta;
        let last = groups[groups.len() - 1].theta;
        if first + PI - last <= BREAKPOINT_MERGE_TOL {
            let tail = groups.pop().expect("nonempty");
            groups[0].indices.extend(tail.indices);
            groups[0].indices.sort_unstable();
        }
    }
    Ok(groups)
}

/// An open arc of `P¹` between consecutive breakpoint groups.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamInterval {
    pub index: usize,
    pub start: BreakGroup,
    pub end: BreakGroup,
    /// Angular length; the end angle is `start.theta + length`.
    pub length: f64,
    pub sign: SignClass,
}

impl ParamInterval {
    pub fn contains(&self, theta: f64) -> bool {
        let s = (theta - self.start.theta).rem_euclid(PI);
        s > 0.0 && s < self.length
    }
}

/// The parameter intervals of `P¹ ∖ H_A` with their sign classes.
pub fn parameter_intervals(basis: &NullBasis) -> Result<Vec<ParamInterval>> {
    let groups = breakpoint_groups(basis)?;
    let m = groups.len();
    let rows = basis.rows2()?;
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let start = groups[k].clone();
        let end = groups[(k + 1) % m].clone();
        let mut length = end.theta - start.theta;
        if k + 1 == m {
            length += PI;
        }
        let mid = start.theta + 0.5 * length;
        let forms: Vec<f64> = rows
            .iter()
            .map(|b| mid.cos() * b[0] + mid.sin() * b[1])
            .collect();
        out.push(ParamInterval {
            index: k,
            start,
            end,
            length,
            sign: SignClass::of(&forms)?,
        });
    }
    Ok(out)
}

/// Sign classes attained by some `λ ∉ H_A`, deduplicated and sorted.
pub fn attained_classes(basis: &NullBasis) -> Result<Vec<SignClass>> {
    let mut classes: Vec<SignClass> = parameter_intervals(basis)?
        .into_iter()
        .map(|iv| iv.sign)
        .collect();
    classes.sort();
    classes.dedup();
    Ok(classes)
}

/// Result of the normal-direction check along the contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussReport {
    pub max_residual: f64,
    pub samples: usize,
}

/// Uniform angles in `[0, π)` at distance more than `exclusion` from every
/// breakpoint and every cusp.
pub fn gauss_sample_angles(
    basis: &NullBasis,
    cusps: &CuspSet,
    count: usize,
    exclusion: f64,
) -> Result<Vec<f64>> {
    let mut avoid: Vec<f64> = breakpoints(basis)?.iter().map(|b| b.theta).collect();
    avoid.extend(cusps.thetas.iter().copied());
    let near = |th: f64| {
        avoid.iter().any(|&a| {
            let d = (th - a).rem_euclid(PI);
            d.min(PI - d) < exclusion
        })
    };
    Ok((0..count)
        .map(|k| PI * (k as f64 + 0.5) / count as f64)
        .filter(|&th| !near(th))
        .collect())
}

/// Largest `|ξ'(θ)·λ(θ)| / (‖ξ'(θ)‖ ‖λ(θ)‖)` over the samples, with the
/// tangent from a central difference of step `step`.
pub fn verify_gauss_normal(basis: &NullBasis, thetas: &[f64], step: f64) -> Result<GaussReport> {
    basis.rows2()?;
    let mut max_residual: f64 = 0.0;
    for &th in thetas {
        let fwd = xi(&ProjParam::from_angle(th + step), basis)?;
        let bwd = xi(&ProjParam::from_angle(th - step), basis)?;
        let tangent = [
            (fwd[0] - bwd[0]) / (2.0 * step),
            (fwd[1] - bwd[1]) / (2.0 * step),
        ];
        let lam = [th.cos(), th.sin()];
        let tn = tangent[0].hypot(tangent[1]);
        if tn == 0.0 {
            continue;
        }
        let r = (tangent[0] * lam[0] + tangent[1] * lam[1]).abs() / tn;
        max_residual = max_residual.max(r);
    }
    Ok(GaussReport {
        max_residual,
        samples: thetas.len(),
    })
}

/// The symmetric matrix `M(λ)_{kl} = Σ_i B_{ik} B_{il} / (λ·β_i)`.
///
/// It is the Jacobian of `ξ` with respect to homogeneous `λ`, so `M(λ) λ = 0`.
pub fn singular_locus_matrix(basis: &NullBasis, lambda: &[f64]) -> Result<DMatrix<f64>> {
    let k = basis.dim();
    if lambda.len() != k {
        return Err(Error::WrongReducedDimension {
            expected: k,
            found: lambda.len(),
        });
    }
    let b = basis.matrix();
    let lam = DVector::from_column_slice(lambda);
    let forms = b * &lam;
    let ln = lam.norm();
    for i in 0..basis.t() {
        if forms[i].abs() <= crate::parametrization::HYPERPLANE_GUARD * ln * b.row(i).norm() {
            return Err(Error::HyperplaneHit { index: i });
        }
    }
    Ok(DMatrix::from_fn(k, k, |r, c| {
        (0..basis.t())
            .map(|i| b[(i, r)] * b[(i, c)] / forms[i])
            .sum()
    }))
}

/// Degree bookkeeping for the singular-locus polynomials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    /// `(t - d(A) - 1)(t - 1)`.
    pub degree_bound: usize,
    /// True when `det M(λ) · ∏(β_i·λ)^{t-d-1}` vanishes at every sample.
    pub determinant_vanishes: bool,
    /// Degree of the interpolated `tr M(λ) · ∏(β_i·λ)` in the chart `λ = (1, x)`.
    pub observed_degree: Option<usize>,
    /// Coefficients of the interpolated polynomial (ascending).
    pub coefficients: Vec<f64>,
}

/// Interpolates the singular-locus polynomials on the chart `λ = (1, x)`.
///
/// `det M` is identically zero because `M(λ)λ = 0`; the report records that
/// and tracks the degree of the cleared trace, whose zeros are exactly the
/// points where `M` vanishes (the rank-deficient locus when `M` is `2 × 2`).
pub fn r_polynomial_degree_check(basis: &NullBasis) -> Result<DegreeReport> {
    let rows = basis.rows2()?;
    let t = basis.t();
    let degree_bound = 2 * (t - 1);
    let nodes = degree_bound + 1;
    let extra = 5;
    let cheb = |k: usize, total: usize| ((2 * k + 1) as f64 * PI / (2 * total) as f64).cos();

    let sample = |x: f64| -> Result<(f64, f64, f64)> {
        let lam = [1.0, x];
        let m = singular_locus_matrix(basis, &lam)?;
        let prod: f64 = rows.iter().map(|b| b[0] + b[1] * x).product();
        let det = m.determinant() * prod * prod;
        let scale = m.norm_squared() * prod * prod;
        Ok((det, scale, m.trace() * prod))
    };

    let mut xs = Vec::new();
    let mut det_vanishes = true;
    let mut values = Vec::new();
    let mut k = 0;
    // nudge nodes off the hyperplanes
    while xs.len() < nodes + extra {
        let total = nodes + extra + 8;
        let x = cheb(k, total);
        k += 1;
        if k > 4 * total {
            return Err(Error::InterpolationFailure(
                "could not place interpolation nodes off the arrangement".into(),
            ));
        }
        match sample(x) {
            Ok((det, scale, tr)) => {
                if det.abs() > 1e-9 * scale.max(f64::MIN_POSITIVE) {
                    det_vanishes = false;
                }
                xs.push(x);
                values.push(tr);
            }
            Err(Error::HyperplaneHit { .. }) => continue,
            Err(e) => return Err(e),
        }
    }

    let vander = DMatrix::from_fn(nodes, nodes, |r, c| xs[r].powi(c as i32));
    let rhs = DVector::from_column_slice(&values[..nodes]);
    let coeffs = vander
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InterpolationFailure("singular Vandermonde system".into()))?;
    let poly = Poly::new(coeffs.iter().copied().collect());
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for (x, v) in xs[nodes..].iter().zip(&values[nodes..]) {
        if (poly.eval(*x) - v).abs() > 1e-7 * scale.max(1.0) {
            return Err(Error::InterpolationFailure(format!(
                "sample at x = {x} disagrees with the interpolant"
            )));
        }
    }
    Ok(DegreeReport {
        degree_bound,
        determinant_vanishes: det_vanishes,
        observed_degree: poly.effective_degree(1e-6),
        coefficients: poly.coeffs().to_vec(),
    })
}

/// Upper bound `k(t-1)(2k(t-1)-1)^{2t-d-2}` with `k = t - d - 1` on the
/// number of smooth pieces of a signed contour; `None` on overflow.
pub fn component_bound(t: usize, d: usize) -> Option<u128> {
    if t < d + 2 {
        return Some(0);
    }
    let k = (t - d - 1) as u128;
    let deg = k.checked_mul(t as u128 - 1)?;
    let base = deg.checked_mul(2)?.checked_sub(1)?;
    let exp = u32::try_from(2 * t - d - 2).ok()?;
    deg.checked_mul(base.checked_pow(exp)?)
}
