//! Cusps of the planar contour: zeros of the singular-locus matrix on `P¹`.

use std::f64::consts::PI;

use serde::Serialize;

use super::kernel_angle;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::spectrum::NullBasis;

/// Coefficients below this fraction of the largest one count as zero when
/// isolating roots.
const TRIM_REL: f64 = 1e-10;

/// Cleared-denominator diagonal entries of `M(λ)` in the two affine charts.
///
/// `chart(x) = Σ_i β_{i2}² ∏_{j≠i} (β_{j1} + β_{j2} x)` is `M_22(1, x)` times
/// `∏(λ·β_j)`; `swapped(y) = Σ_i β_{i1}² ∏_{j≠i} (β_{j1} y + β_{j2})` is
/// `M_11(y, 1)` times the same product. Both have nominal degree `t - 1`
/// and lose their two leading coefficients because `Σ_i β_i = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspPolynomials {
    pub chart: Poly,
    pub swapped: Poly,
}

fn cleared_sum(rows: &[[f64; 2]], weight: impl Fn(&[f64; 2]) -> f64, swap: bool) -> Poly {
    let linear = |b: &[f64; 2]| {
        if swap {
            Poly::new(vec![b[1], b[0]])
        } else {
            Poly::new(vec![b[0], b[1]])
        }
    };
    let mut total = Poly::new(vec![0.0; rows.len()]);
    for (i, bi) in rows.iter().enumerate() {
        let mut term = Poly::new(vec![weight(bi)]);
        for (j, bj) in rows.iter().enumerate() {
            if j != i {
                term = term.mul(&linear(bj));
            }
        }
        total = total.add(&term);
    }
    total
}

pub fn cusp_polynomials(basis: &NullBasis) -> Result<CuspPolynomials> {
    let rows = basis.rows2()?;
    Ok(CuspPolynomials {
        chart: cleared_sum(&rows, |b| b[1] * b[1], false),
        swapped: cleared_sum(&rows, |b| b[0] * b[0], true),
    })
}

/// `p_k(x) = Σ_i B_{ik} β_{i2} ∏_{j≠i}(β_{j1} + β_{j2} x)`, the cleared
/// `∂ξ_k/∂λ_2` on the chart `λ = (1, x)`.
///
/// Since `M(λ)λ = 0`, `p_1 = -x p_2`: only `p_2` drops two degrees.
pub fn coordinate_derivative_polys(basis: &NullBasis) -> Result<[Poly; 2]> {
    let rows = basis.rows2()?;
    Ok([
        cleared_sum(&rows, |b| b[0] * b[1], false),
        cleared_sum(&rows, |b| b[1] * b[1], false),
    ])
}

/// Cusp parameters and the diagnostics gathered while finding them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspSet {
    /// Angles in `[0, π)`, sorted.
    pub thetas: Vec<f64>,
    /// Largest of the two top coefficients of either chart polynomial,
    /// relative to its largest coefficient.
    pub leading_residual: f64,
    /// Largest relative value of the other chart's polynomial at a root.
    pub chart_mismatch: f64,
    /// Largest deflation remainder, relative to the coefficient scale.
    pub deflation_residual: f64,
}

fn top_two_relative(p: &Poly, t: usize) -> f64 {
    let scale = p.max_abs_coeff();
    if scale == 0.0 {
        return 0.0;
    }
    let c = p.coeffs();
    let top = |k: usize| c.get(k).copied().unwrap_or(0.0).abs();
    top(t - 1).max(top(t.saturating_sub(2))) / scale
}

fn on_arrangement(rows: &[[f64; 2]], lam: [f64; 2]) -> bool {
    let ln = lam[0].hypot(lam[1]);
    rows.iter()
        .any(|b| (lam[0] * b[0] + lam[1] * b[1]).abs() <= 1e-7 * ln * b[0].hypot(b[1]))
}

/// Roots of `p` with the deflation remainder of each, relative to the
/// coefficient scale.
fn roots_with_deflation(p: &Poly) -> (Vec<f64>, f64) {
    let trimmed = p.trimmed(TRIM_REL);
    let roots = trimmed.real_roots(TRIM_REL);
    let scale = trimmed.max_abs_coeff().max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    let mut q = trimmed;
    for &r in &roots {
        let (next, rem) = q.deflate(r);
        let mag = q.coeffs().iter().enumerate().fold(0.0, |m: f64, (k, c)| {
            m.max(c.abs() * r.abs().powi(k as i32))
        });
        worst = worst.max(rem.abs() / mag.max(scale));
        q = next;
    }
    (roots, worst)
}

/// Parameters where `dξ/dλ` vanishes on the contour.
///
/// Each chart contributes the roots in its well-conditioned half (`|x| <= 1`),
/// which together cover `P¹` with `θ = π/2` handled by the swapped chart.
/// Roots on the arrangement (coincident breakpoints) are discarded.
pub fn find_cusps(basis: &NullBasis, tol: f64) -> Result<CuspSet> {
    let rows = basis.rows2()?;
    let t = basis.t();
    let polys = cusp_polynomials(basis)?;
    for p in [&polys.chart, &polys.swapped] {
        if p.max_abs_coeff() <= tol * tol {
            return Err(Error::DegenerateDerivative);
        }
    }
    let leading_residual =
        top_two_relative(&polys.chart, t).max(top_two_relative(&polys.swapped, t));

    let (xs, d1) = roots_with_deflation(&polys.chart);
    let (ys, d2) = roots_with_deflation(&polys.swapped);
    let mut candidates: Vec<([f64; 2], &Poly, f64)> = Vec::new();
    for x in xs.into_iter().filter(|x| x.abs() <= 1.0) {
        candidates.push((
            [1.0, x],
            &polys.swapped,
            if x == 0.0 { f64::NAN } else { 1.0 / x },
        ));
    }
    for y in ys.into_iter().filter(|y| y.abs() <= 1.0) {
        candidates.push((
            [y, 1.0],
            &polys.chart,
            if y == 0.0 { f64::NAN } else { 1.0 / y },
        ));
    }

    let mut thetas: Vec<f64> = Vec::new();
    let mut chart_mismatch: f64 = 0.0;
    for (lam, other, other_arg) in candidates {
        if on_arrangement(&rows, lam) {
            continue;
        }
        if other_arg.is_finite() {
            let scale: f64 = other
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c.abs() * other_arg.abs().powi(k as i32))
                .sum();
            chart_mismatch = chart_mismatch.max(other.eval(other_arg).abs() / scale);
        }
        let theta = kernel_angle([-lam[1], lam[0]]);
        let dup = thetas.iter().any(|&s| {
            let d = (s - theta).rem_euclid(PI);
            d.min(PI - d) <= 1e-8
        });
        if !dup {
            thetas.push(theta);
        }
    }
    thetas.sort_by(f64::total_cmp);
    Ok(CuspSet {
        thetas,
        leading_residual,
        chart_mismatch,
        deflation_residual: d1.max(d2),
    })
}
