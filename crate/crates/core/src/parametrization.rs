//! The Horn-Kapranov type parametrization `ψ`, the reduced map `ξ`, and the
//! closed-form discriminant test for circuits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sign::SignClass;
use crate::spectrum::{NullBasis, Spectrum};

/// Relative distance to a hyperplane `λ·β_i = 0` below which `λ` is rejected.
pub const HYPERPLANE_GUARD: f64 = 1e-8;

/// A point of real projective space, stored with unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjParam(Vec<f64>);

impl ProjParam {
    pub fn new(coords: &[f64]) -> Result<Self> {
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if coords.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidInput(
                "projective point needs a finite nonzero vector".into(),
            ));
        }
        Ok(Self(coords.iter().map(|x| x / norm).collect()))
    }

    /// `(cos θ, sin θ)` on the projective line.
    pub fn from_angle(theta: f64) -> Self {
        Self(vec![theta.cos(), theta.sin()])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// The arrangement of hyperplanes `λ·β_i = 0`, one per row of the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneArrangement {
    pub normals: Vec<Vec<f64>>,
}

impl HyperplaneArrangement {
    pub fn from_basis(basis: &NullBasis) -> Self {
        Self {
            normals: (0..basis.t()).map(|i| basis.row(i)).collect(),
        }
    }

    /// Index of the first hyperplane that `λ` is too close to, if any.
    pub fn hit(&self, lambda: &[f64]) -> Option<usize> {
        let ln = norm(lambda);
        self.normals.iter().position(|beta| {
            let d = dot(lambda, beta).abs();
            d <= HYPERPLANE_GUARD * ln * norm(beta)
        })
    }
}

/// A point `v` of the reduced coefficient space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedPoint(pub [f64; 2]);

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn check_dim(lambda: &ProjParam, basis: &NullBasis) -> Result<()> {
    if lambda.0.len() != basis.dim() {
        return Err(Error::WrongReducedDimension {
            expected: basis.dim(),
            found: lambda.0.len(),
        });
    }
    Ok(())
}

/// `λ B^T` with the hyperplane guard applied.
pub fn linear_forms(lambda: &ProjParam, basis: &NullBasis) -> Result<Vec<f64>> {
    check_dim(lambda, basis)?;
    let arrangement = HyperplaneArrangement::from_basis(basis);
    if let Some(index) = arrangement.hit(&lambda.0) {
        return Err(Error::HyperplaneHit { index });
    }
    Ok(arrangement
        .normals
        .iter()
        .map(|beta| dot(&lambda.0, beta))
        .collect())
}

/// `ψ([λ], y) = [(λ B^T) ⊙ e^{-yA}]`, returned with unit norm.
pub fn psi(lambda: &ProjParam, y: &[f64], basis: &NullBasis, spec: &Spectrum) -> Result<Vec<f64>> {
    if y.len() != spec.n() {
        return Err(Error::InvalidInput(format!(
            "y has length {}, spectrum has {} rows",
            y.len(),
            spec.n()
        )));
    }
    let forms = linear_forms(lambda, basis)?;
    let exps = spec.exponents_at(y);
    // Shift exponents so the largest factor is 1; the result is projective anyway.
    let shift = exps.iter().map(|e| -e).fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = forms
        .iter()
        .zip(&exps)
        .map(|(f, e)| f * (-e - shift).exp())
        .collect();
    let n = norm(&raw);
    Ok(raw.into_iter().map(|x| x / n).collect())
}

/// Reduced point `(Log|λ B^T|) B` from precomputed linear forms.
pub fn xi_from_forms(forms: &[f64], basis: &NullBasis) -> Vec<f64> {
    let b = basis.matrix();
    (0..basis.dim())
        .map(|k| {
            forms
                .iter()
                .enumerate()
                .map(|(i, f)| f.abs().ln() * b[(i, k)])
                .sum()
        })
        .collect()
}

/// `ξ([λ]) = (Log|λ B^T|) B`.
pub fn xi(lambda: &ProjParam, basis: &NullBasis) -> Result<Vec<f64>> {
    let forms = linear_forms(lambda, basis)?;
    Ok(xi_from_forms(&forms, basis))
}

/// Sign class of `λ B^T`.
pub fn orthant_sign(lambda: &ProjParam, basis: &NullBasis) -> Result<SignClass> {
    let forms = linear_forms(lambda, basis)?;
    SignClass::of(&forms)
}

/// Outcome of the circuit discriminant test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircuitTest {
    pub on_discriminant: bool,
    pub residual: f64,
    pub sign_compatible: bool,
}

/// Tests `∏ |c_j / b_j|^{b_j} = 1` together with `sign(c) = ±sign(b)`.
///
/// The generator is normalized so its first entry is positive, which makes
/// the residual invariant under `b → -b`.
pub fn circuit_membership_test(c: &[f64], b: &[f64], tol: f64) -> Result<CircuitTest> {
    if c.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "coefficient length {} does not match generator length {}",
            c.len(),
            b.len()
        )));
    }
    if let Some(j) = c.iter().position(|&x| x == 0.0) {
        return Err(Error::InvalidInput(format!(
            "coefficient {} is zero",
            j + 1
        )));
    }
    if let Some(index) = b.iter().position(|&x| x == 0.0) {
        return Err(Error::PyramidalCircuit { index });
    }
    let flip = b[0].signum();
    let residual: f64 = c
        .iter()
        .zip(b)
        .map(|(cj, bj)| flip * bj * (cj.abs().ln() - bj.abs().ln()))
        .sum();
    let sign_compatible = SignClass::of(c)? == SignClass::of(b)?;
    Ok(CircuitTest {
        on_discriminant: residual.abs() <= tol && sign_compatible,
        residual,
        sign_compatible,
    })
}

/// Circuit test against the nullspace generator of a spectrum.
pub fn circuit_membership_for(c: &[f64], basis: &NullBasis, tol: f64) -> Result<CircuitTest> {
    if basis.dim() != 1 {
        return Err(Error::NotACircuit { dim: basis.dim() });
    }
    let b: Vec<f64> = basis.matrix().column(0).iter().copied().collect();
    if let Some(index) = b
        .iter()
        .position(|x| x.abs() <= crate::spectrum::DEFAULT_ZERO_ROW_TOL)
    {
        return Err(Error::PyramidalCircuit { index });
    }
    circuit_membership_test(c, &b, tol)
}

/// Classification by nullspace dimension `t - d(A) - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EmptinessCase {
    /// `t - d(A) = 1`: the discriminant is empty.
    TrivialEmpty,
    /// `t - d(A) = 2`: closed-form product condition.
    Circuit,
    /// `t - d(A) >= 3`.
    General,
}

pub fn emptiness_case(basis: &NullBasis) -> EmptinessCase {
    match basis.dim() {
        0 => EmptinessCase::TrivialEmpty,
        1 => EmptinessCase::Circuit,
        _ => EmptinessCase::General,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{nullspace_basis, DEFAULT_RANK_TOL};
    use approx::assert_abs_diff_eq;

    fn penta() -> (Spectrum, NullBasis) {
        let s = Spectrum::from_rows(&[vec![0., 1., 0., 4., 1.], vec![0., 0., 1., 1., 4.]]).unwrap();
        let b = nullspace_basis(&s.lifted(), DEFAULT_RANK_TOL).unwrap();
        (s, b)
    }

    fn sqrt2() -> (Spectrum, NullBasis) {
        let s = Spectrum::parse_rows(&[vec!["0", "1", "sqrt(2)"]]).unwrap();
        let b = nullspace_basis(&s.lifted(), DEFAULT_RANK_TOL).unwrap();
        (s, b)
    }

    #[test]
    fn psi_at_origin_is_first_column_of_bt() {
        let (s, b) = penta();
        let lam = ProjParam::new(&[1.0, 0.0]).unwrap();
        let p = psi(&lam, &[0.0, 0.0], &b, &s).unwrap();
        let col: Vec<f64> = b.matrix().column(0).iter().copied().collect();
        let n = norm(&col);
        for j in 0..5 {
            assert_abs_diff_eq!(p[j], col[j] / n, epsilon = 1e-14);
        }
    }

    #[test]
    fn psi_scales_by_exponentials() {
        let (s, b) = penta();
        let lam = ProjParam::new(&[1.0, 0.0]).unwrap();
        let p = psi(&lam, &[1.0, 0.0], &b, &s).unwrap();
        // independent scalar evaluation
        let a1: [f64; 5] = [0.0, 1.0, 0.0, 4.0, 1.0];
        let raw: Vec<f64> = (0..5)
            .map(|j| b.matrix()[(j, 0)] * (-a1[j]).exp())
            .collect();
        let n = norm(&raw);
        for j in 0..5 {
            assert_abs_diff_eq!(p[j], raw[j] / n, epsilon = 1e-14);
        }
    }

    #[test]
    fn hyperplane_is_rejected() {
        let (s, b) = penta();
        let beta = b.row(2);
        let lam = ProjParam::new(&[-beta[1], beta[0]]).unwrap();
        assert_eq!(
            psi(&lam, &[0.0, 0.0], &b, &s).unwrap_err(),
            Error::HyperplaneHit { index: 2 }
        );
        assert!(matches!(
            xi(&lam, &b),
            Err(Error::HyperplaneHit { index: 2 })
        ));
    }

    #[test]
    fn xi_is_scale_invariant() {
        let (_, b) = penta();
        let lam = ProjParam::from_angle(0.3);
        let v = xi(&lam, &b).unwrap();
        let forms = linear_forms(&lam, &b).unwrap();
        let scaled: Vec<f64> = forms.iter().map(|f| -2.5 * f).collect();
        let w = xi_from_forms(&scaled, &b);
        assert_abs_diff_eq!(v[0], w[0], epsilon = 1e-13);
        assert_abs_diff_eq!(v[1], w[1], epsilon = 1e-13);
    }

    #[test]
    fn xi_matches_direct_sum() {
        let (_, b) = penta();
        let th: f64 = 0.3;
        let v = xi(&ProjParam::from_angle(th), &b).unwrap();
        let mut direct = [0.0; 2];
        for i in 0..5 {
            let beta = b.row(i);
            let f = (th.cos() * beta[0] + th.sin() * beta[1]).abs().ln();
            direct[0] += f * beta[0];
            direct[1] += f * beta[1];
        }
        assert_abs_diff_eq!(v[0], direct[0], epsilon = 1e-14);
        assert_abs_diff_eq!(v[1], direct[1], epsilon = 1e-14);
    }

    #[test]
    fn pentagon_has_inner_class() {
        let (_, b) = penta();
        let target: SignClass = "+--++".parse().unwrap();
        let found = (0..2000)
            .map(|k| ProjParam::from_angle(std::f64::consts::PI * (k as f64 + 0.5) / 2000.0))
            .filter_map(|l| orthant_sign(&l, &b).ok())
            .any(|s| s == target);
        assert!(found);
    }

    #[test]
    fn sqrt_two_circuit() {
        let (_, b) = sqrt2();
        let r2 = 2f64.sqrt();
        let c2 = -(r2 / (r2 - 1.0)) * (r2 - 1.0).powf(1.0 / r2);
        let t = circuit_membership_for(&[1.0, c2, 1.0], &b, 1e-12).unwrap();
        assert!(t.on_discriminant, "{t:?}");
        assert!(t.residual.abs() < 1e-12);
        let off = circuit_membership_for(&[1.0, 1.0, 1.0], &b, 1e-12).unwrap();
        assert!(!off.sign_compatible);
        assert!(!off.on_discriminant);
    }

    #[test]
    fn circuit_residual_invariances() {
        let hand = [2f64.sqrt() - 1.0, -(2f64.sqrt()), 1.0];
        let c = [0.7, -3.0, 1.9];
        let r0 = circuit_membership_test(&c, &hand, 1e-12).unwrap().residual;
        let scaled: Vec<f64> = c.iter().map(|x| -4.2 * x).collect();
        let r1 = circuit_membership_test(&scaled, &hand, 1e-12)
            .unwrap()
            .residual;
        let neg: Vec<f64> = hand.iter().map(|x| -x).collect();
        let r2 = circuit_membership_test(&c, &neg, 1e-12).unwrap().residual;
        assert_abs_diff_eq!(r0, r1, epsilon = 1e-13);
        assert_abs_diff_eq!(r0, r2, epsilon = 1e-13);
    }

    #[test]
    fn circuit_errors() {
        let (_, b) = penta();
        assert_eq!(
            circuit_membership_for(&[1.0; 5], &b, 1e-12).unwrap_err(),
            Error::NotACircuit { dim: 2 }
        );
        assert!(matches!(
            circuit_membership_test(&[1.0, 1.0], &[1.0, 0.0], 1e-12),
            Err(Error::PyramidalCircuit { index: 1 })
        ));
    }

    #[test]
    fn emptiness_classification() {
        let simplex = Spectrum::from_rows(&[vec![0., 1., 0.], vec![0., 0., 1.]]).unwrap();
        let sb = nullspace_basis(&simplex.lifted(), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(emptiness_case(&sb), EmptinessCase::TrivialEmpty);
        assert_eq!(emptiness_case(&sqrt2().1), EmptinessCase::Circuit);
        assert_eq!(emptiness_case(&penta().1), EmptinessCase::General);
    }
}
