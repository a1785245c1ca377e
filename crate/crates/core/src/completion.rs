//! Faces of the Newton polytope and the facet lines that complete a signed
//! contour when some face carries too many exponents.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::contour::{trace_signed_contour, ContourArc, Sampling};
use crate::error::{Error, Result};
use crate::sign::SignClass;
use crate::spectrum::{affine_dimension, nullspace_basis, NullBasis, Spectrum, DEFAULT_RANK_TOL};

/// Relative tolerance for coplanarity and supporting-hyperplane tests.
const HULL_TOL: f64 = 1e-9;

/// A proper face `Q^w` of `Conv{a_j}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Face {
    /// Unit inner normal: the members are exactly the minimizers of `a_j · w`.
    pub inner_normal: Vec<f64>,
    /// Column indices (0-based, sorted).
    pub members: Vec<usize>,
    pub dim: usize,
}

impl Face {
    pub fn is_simplicial(&self) -> bool {
        self.members.len() == self.dim + 1
    }
}

/// Affine-hull frame: centroid, orthonormal directions (`n × d`) and the
/// projected coordinates of every column.
struct HullFrame {
    directions: DMatrix<f64>,
    coords: Vec<Vec<f64>>,
    diameter: f64,
}

fn hull_frame(spec: &Spectrum) -> HullFrame {
    let a = spec.matrix();
    let (n, t) = a.shape();
    let centroid = a.column_sum() / t as f64;
    let centered = DMatrix::from_fn(n, t, |i, j| a[(i, j)] - centroid[i]);
    // pad to at least as many columns as rows so U is n × n
    let padded = if t < n {
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((0, 0), (n, t)).copy_from(&centered);
        m
    } else {
        centered.clone()
    };
    let svd = padded.svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| smax > 0.0 && svd.singular_values[k] > DEFAULT_RANK_TOL * smax)
        .collect();
    let directions = DMatrix::from_fn(n, keep.len(), |i, k| u[(i, keep[k])]);
    let coords: Vec<Vec<f64>> = (0..t)
        .map(|j| {
            let x = directions.transpose() * centered.column(j);
            x.iter().copied().collect()
        })
        .collect();
    let mut diameter: f64 = 0.0;
    for p in &coords {
        for q in &coords {
            let d: f64 = p.iter().zip(q).map(|(x, y)| (x - y).powi(2)).sum();
            diameter = diameter.max(d.sqrt());
        }
    }
    HullFrame {
        directions,
        coords,
        diameter,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Facets in hull coordinates as `(inner normal, members)`.
fn hull_facets(frame: &HullFrame) -> Vec<(Vec<f64>, BTreeSet<usize>)> {
    let pts = &frame.coords;
    let t = pts.len();
    let d = frame.directions.ncols();
    let eps = HULL_TOL * frame.diameter.max(1.0);
    let mut candidates: Vec<(Vec<f64>, usize)> = Vec::new();
    match d {
        1 => {
            candidates.push((vec![1.0], 0));
            candidates.push((vec![-1.0], 0));
        }
        2 => {
            for i in 0..t {
                for j in i + 1..t {
                    let e = [pts[j][0] - pts[i][0], pts[j][1] - pts[i][1]];
                    let len = e[0].hypot(e[1]);
                    candidates.push((vec![-e[1] / len, e[0] / len], i));
                }
            }
        }
        3 => {
            for i in 0..t {
                for j in i + 1..t {
                    for k in j + 1..t {
                        let u: Vec<f64> = (0..3).map(|r| pts[j][r] - pts[i][r]).collect();
                        let v: Vec<f64> = (0..3).map(|r| pts[k][r] - pts[i][r]).collect();
                        let c = [
                            u[1] * v[2] - u[2] * v[1],
                            u[2] * v[0] - u[0] * v[2],
                            u[0] * v[1] - u[1] * v[0],
                        ];
                        let len = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
                        if len <= eps * frame.diameter.max(1.0) {
                            continue;
                        }
                        candidates.push((c.iter().map(|x| x / len).collect(), i));
                    }
                }
            }
        }
        _ => {}
    }
    let mut facets: Vec<(Vec<f64>, BTreeSet<usize>)> = Vec::new();
    for (normal, anchor) in candidates {
        let vals: Vec<f64> = pts
            .iter()
            .map(|p| dot(&normal, p) - dot(&normal, &pts[anchor]))
            .collect();
        let (normal, vals) = if d == 1 {
            let m = vals.iter().copied().fold(f64::INFINITY, f64::min);
            (normal, vals.iter().map(|v| v - m).collect::<Vec<_>>())
        } else if vals.iter().all(|&v| v >= -eps) {
            (normal, vals)
        } else if vals.iter().all(|&v| v <= eps) {
            (
                normal.iter().map(|x| -x).collect(),
                vals.iter().map(|v| -v).collect(),
            )
        } else {
            continue;
        };
        let members: BTreeSet<usize> = (0..t).filter(|&k| vals[k].abs() <= eps).collect();
        if !facets.iter().any(|(_, m)| *m == members) {
            facets.push((normal, members));
        }
    }
    facets
}

fn sub_spectrum(spec: &Spectrum, members: &[usize]) -> Spectrum {
    let a = spec.matrix();
    let m = DMatrix::from_fn(a.nrows(), members.len(), |i, k| a[(i, members[k])]);
    Spectrum::new(m).expect("columns of a valid spectrum stay distinct")
}

/// All proper faces of `Conv{a_j}`, facets first, then lower faces by
/// decreasing dimension.
pub fn face_lattice(spec: &Spectrum) -> Result<Vec<Face>> {
    if spec.n() > 3 {
        return Err(Error::UnsupportedDimension(spec.n()));
    }
    let frame = hull_frame(spec);
    let facets = hull_facets(&frame);

    // every proper face is an intersection of facets
    let mut sets: Vec<BTreeSet<usize>> = facets.iter().map(|(_, m)| m.clone()).collect();
    let mut k = 0;
    while k < sets.len() {
        for j in 0..k {
            let inter: BTreeSet<usize> = sets[k].intersection(&sets[j]).copied().collect();
            if !inter.is_empty() && !sets.contains(&inter) {
                sets.push(inter);
            }
        }
        k += 1;
    }

    let mut faces: Vec<Face> = sets
        .into_iter()
        .map(|members| {
            let mut w = vec![0.0; frame.directions.ncols()];
            for (normal, fm) in &facets {
                if members.is_subset(fm) {
                    for (wi, ni) in w.iter_mut().zip(normal) {
                        *wi += ni;
                    }
                }
            }
            let w = frame.directions.clone() * DVector::from_vec(w);
            let norm = w.norm();
            let members: Vec<usize> = members.into_iter().collect();
            let dim = affine_dimension(&sub_spectrum(spec, &members).lifted(), DEFAULT_RANK_TOL);
            Face {
                inner_normal: w.iter().map(|x| x / norm).collect(),
                members,
                dim,
            }
        })
        .collect();
    faces.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.members.cmp(&b.members)));
    Ok(faces)
}

/// Every proper face carries exactly `1 + dim` exponents.
pub fn is_combinatorially_simplicial(spec: &Spectrum) -> Result<bool> {
    Ok(face_lattice(spec)?.iter().all(Face::is_simplicial))
}

/// A face with more exponents than a simplex of its dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonSimplicialFace {
    pub face: Face,
    /// Generator of the affine relations among the face's exponents, scaled
    /// so its first entry is 1; `None` unless the face is a circuit.
    pub relation: Option<Vec<f64>>,
}

/// Faces with at least `dim + 2` exponents.
pub fn non_simplicial_faces(spec: &Spectrum) -> Result<Vec<NonSimplicialFace>> {
    let faces = face_lattice(spec)?;
    Ok(faces
        .into_iter()
        .filter(|f| f.members.len() >= f.dim + 2)
        .map(|face| {
            let sub = sub_spectrum(spec, &face.members);
            let relation = nullspace_basis(&sub.lifted(), DEFAULT_RANK_TOL)
                .ok()
                .filter(|b| b.dim() == 1)
                .and_then(|b| {
                    let col: Vec<f64> = b.matrix().column(0).iter().copied().collect();
                    let first = col[0];
                    (first.abs() > 1e-12).then(|| col.iter().map(|x| x / first).collect())
                });
            NonSimplicialFace { face, relation }
        })
        .collect())
}

/// Counts of faces under the two readings of "non-simplicial".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NonSimplicialCounts {
    /// Faces with at least `dim + 2` exponents (the operational threshold).
    pub strict: usize,
    /// Faces with at least `dim + 1` exponents, i.e. every proper face.
    pub literal: usize,
}

pub fn non_simplicial_counts(spec: &Spectrum) -> Result<NonSimplicialCounts> {
    let faces = face_lattice(spec)?;
    Ok(NonSimplicialCounts {
        strict: faces
            .iter()
            .filter(|f| f.members.len() >= f.dim + 2)
            .count(),
        literal: faces.iter().filter(|f| f.members.len() > f.dim).count(),
    })
}

/// The affine line `{v : v · normal = offset}` contributed by a circuit face.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacetLine {
    pub members: Vec<usize>,
    /// `μ_w = B^T e^w`, where `e^w` is the face relation padded by zeros.
    pub normal: [f64; 2],
    /// `Σ_j b_j log|b_j|` over the face relation.
    pub offset: f64,
    /// The relation's sign pattern matches `σ` restricted to the face.
    pub admissible: bool,
    /// `‖B μ_w - e^w‖_∞`.
    pub lift_residual: f64,
}

impl FacetLine {
    /// Signed distance of `v` from the line, in units of `|normal|`.
    pub fn signed_distance(&self, v: [f64; 2]) -> f64 {
        let n = self.normal[0].hypot(self.normal[1]);
        (v[0] * self.normal[0] + v[1] * self.normal[1] - self.offset) / n
    }
}

/// Line of a circuit face in the reduced plane; `Ok(None)` when the face is
/// not a circuit or has a vanishing relation entry.
pub fn facet_line(
    face: &NonSimplicialFace,
    basis: &NullBasis,
    sign: &SignClass,
    tol: f64,
) -> Result<Option<FacetLine>> {
    basis.rows2()?;
    let Some(b) = &face.relation else {
        return Ok(None);
    };
    if b.iter().any(|x| x.abs() <= 1e-12) {
        return Ok(None);
    }
    let t = basis.t();
    let mut e = vec![0.0; t];
    for (k, &j) in face.face.members.iter().enumerate() {
        e[j] = b[k];
    }
    let e = DVector::from_vec(e);
    let bm = basis.matrix();
    // least squares B μ = e; with an orthonormal basis this is B^T e
    let mu = (bm.transpose() * bm)
        .lu()
        .solve(&(bm.transpose() * &e))
        .ok_or(Error::DegenerateNullspace)?;
    let lift_residual = (bm * &mu - &e).amax();
    if lift_residual > tol {
        return Err(Error::InconsistentLift {
            residual: lift_residual,
        });
    }
    let offset = b.iter().map(|x| x * x.abs().ln()).sum();
    let projected = sign.project(&face.face.members);
    let admissible = SignClass::of(b).is_ok_and(|s| s == projected);
    Ok(Some(FacetLine {
        members: face.face.members.clone(),
        normal: [mu[0], mu[1]],
        offset,
        admissible,
        lift_residual,
    }))
}

/// `Γ_σ` together with the facet lines of the non-simplicial faces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletedContour {
    pub sign: SignClass,
    /// Half-width of the window the arcs were traced and clipped to.
    pub window: f64,
    pub arcs: Vec<ContourArc>,
    /// All circuit-face lines; only admissible ones belong to the contour.
    pub lines: Vec<FacetLine>,
    pub warnings: Vec<String>,
}

impl CompletedContour {
    pub fn admissible_lines(&self) -> impl Iterator<Item = &FacetLine> {
        self.lines.iter().filter(|l| l.admissible)
    }
}

/// Tolerance on `‖B μ_w - e^w‖` when lifting a face relation.
pub const LIFT_TOL: f64 = 1e-8;

pub fn completed_signed_contour(
    spec: &Spectrum,
    basis: &NullBasis,
    sign: &SignClass,
    sampling: &Sampling,
) -> Result<CompletedContour> {
    let arcs = trace_signed_contour(basis, sign, sampling)?;
    let mut lines = Vec::new();
    let mut warnings = Vec::new();
    for face in non_simplicial_faces(spec)? {
        match facet_line(&face, basis, sign, LIFT_TOL)? {
            Some(line) => lines.push(line),
            None => warnings.push(format!(
                "face {:?} is not a circuit; no line drawn",
                face.face.members
            )),
        }
    }
    Ok(CompletedContour {
        sign: sign.clone(),
        window: sampling.window,
        arcs,
        lines,
        warnings,
    })
}

/// Terms of `g` whose exponents minimize `a_j · w`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialTerm {
    pub indices: Vec<usize>,
    pub coefficients: Vec<f64>,
}

pub fn initial_term(c: &[f64], spec: &Spectrum, w: &[f64]) -> Result<InitialTerm> {
    if w.len() != spec.n() || w.iter().all(|&x| x == 0.0) {
        return Err(Error::InvalidInput(
            "weight must be a nonzero n-vector".into(),
        ));
    }
    if c.len() != spec.t() {
        return Err(Error::InvalidInput(format!(
            "expected {} coefficients, got {}",
            spec.t(),
            c.len()
        )));
    }
    let vals: Vec<f64> = spec.columns().iter().map(|a| dot(a, w)).collect();
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = vals.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let indices: Vec<usize> = (0..vals.len())
        .filter(|&j| vals[j] - min <= HULL_TOL * scale)
        .collect();
    Ok(InitialTerm {
        coefficients: indices.iter().map(|&j| c[j]).collect(),
        indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::breakpoint_groups;

    fn spec(rows: &[Vec<f64>]) -> Spectrum {
        Spectrum::from_rows(rows).unwrap()
    }

    fn penta() -> Spectrum {
        spec(&[vec![0., 1., 0., 4., 1.], vec![0., 0., 1., 1., 4.]])
    }

    fn inf() -> Spectrum {
        spec(&[vec![0., 1., 0., 2., 0.], vec![0., 0., 1., 0., 2.]])
    }

    fn basis(s: &Spectrum) -> NullBasis {
        nullspace_basis(&s.lifted(), DEFAULT_RANK_TOL).unwrap()
    }

    #[test]
    fn inf_facets() {
        let faces = face_lattice(&inf()).unwrap();
        let left = faces.iter().find(|f| f.members == vec![0, 2, 4]).unwrap();
        assert!((left.inner_normal[0] - 1.0).abs() < 1e-12 && left.inner_normal[1].abs() < 1e-12);
        let bottom = faces.iter().find(|f| f.members == vec![0, 1, 3]).unwrap();
        assert!((bottom.inner_normal[1] - 1.0).abs() < 1e-12);
        assert_eq!(left.dim, 1);
        assert!(!is_combinatorially_simplicial(&inf()).unwrap());
    }

    #[test]
    fn pentagon_edges_carry_two_points() {
        let faces = face_lattice(&penta()).unwrap();
        let edges: Vec<&Face> = faces.iter().filter(|f| f.dim == 1).collect();
        assert_eq!(edges.len(), 5);
        assert!(edges.iter().all(|f| f.members.len() == 2));
        assert_eq!(faces.iter().filter(|f| f.dim == 0).count(), 5);
        assert!(is_combinatorially_simplicial(&penta()).unwrap());
        assert!(non_simplicial_faces(&penta()).unwrap().is_empty());
    }

    #[test]
    fn triangle_and_segment() {
        let tri = spec(&[vec![0., 1., 0.], vec![0., 0., 1.]]);
        assert!(is_combinatorially_simplicial(&tri).unwrap());
        let seg = spec(&[vec![0., 3.]]);
        let faces = face_lattice(&seg).unwrap();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.dim == 0 && f.members.len() == 1));
    }

    #[test]
    fn collinear_in_the_plane() {
        let s = spec(&[vec![0., 1., 2.], vec![0., 1., 2.]]);
        let faces = face_lattice(&s).unwrap();
        let mut members: Vec<Vec<usize>> = faces.iter().map(|f| f.members.clone()).collect();
        members.sort();
        assert_eq!(members, vec![vec![0], vec![2]]);
    }

    #[test]
    fn cube_lattice() {
        let mut cols = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    cols.push([x as f64, y as f64, z as f64]);
                }
            }
        }
        let rows: Vec<Vec<f64>> = (0..3)
            .map(|r| cols.iter().map(|c| c[r]).collect())
            .collect();
        let s = spec(&rows);
        let faces = face_lattice(&s).unwrap();
        assert_eq!(faces.iter().filter(|f| f.dim == 2).count(), 6);
        assert_eq!(faces.iter().filter(|f| f.dim == 1).count(), 12);
        assert_eq!(faces.iter().filter(|f| f.dim == 0).count(), 8);
        // square facets are non-simplicial
        assert!(!is_combinatorially_simplicial(&s).unwrap());
        for f in &faces {
            let vals: Vec<f64> = s
                .columns()
                .iter()
                .map(|a| dot(a, &f.inner_normal))
                .collect();
            let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let argmin: Vec<usize> = (0..8).filter(|&j| vals[j] - min < 1e-9).collect();
            assert_eq!(argmin, f.members);
        }
    }

    #[test]
    fn dimension_four_unsupported() {
        let s = spec(&[vec![0., 1.], vec![0., 0.], vec![0., 0.], vec![0., 0.]]);
        assert_eq!(
            face_lattice(&s).unwrap_err(),
            Error::UnsupportedDimension(4)
        );
    }

    #[test]
    fn inf_non_simplicial_and_lines() {
        let s = inf();
        let b = basis(&s);
        let ns = non_simplicial_faces(&s).unwrap();
        assert_eq!(ns.len(), 2);
        assert!(ns.len() <= b.dim());
        let counts = non_simplicial_counts(&s).unwrap();
        assert_eq!(counts.strict, 2);
        assert!(counts.literal >= counts.strict);
        let sigma: SignClass = "+--++".parse().unwrap();
        for f in &ns {
            let rel = f.relation.as_ref().unwrap();
            assert!((rel[0] - 1.0).abs() < 1e-12);
            assert!((rel[1] + 2.0).abs() < 1e-10 && (rel[2] - 1.0).abs() < 1e-10);
            let line = facet_line(f, &b, &sigma, LIFT_TOL).unwrap().unwrap();
            assert!((line.offset + 2.0 * 2f64.ln()).abs() < 1e-10);
            assert!(line.lift_residual < 1e-12);
        }
        assert_eq!(breakpoint_groups(&b).unwrap().len(), s.n() + 1);
    }

    #[test]
    fn facet_line_points_satisfy_relation_after_lift() {
        let s = inf();
        let b = basis(&s);
        let ns = non_simplicial_faces(&s).unwrap();
        let f = ns.iter().find(|f| f.face.members == vec![0, 2, 4]).unwrap();
        let line = facet_line(f, &b, &"+--++".parse().unwrap(), LIFT_TOL)
            .unwrap()
            .unwrap();
        let nn = line.normal[0].powi(2) + line.normal[1].powi(2);
        let foot = [
            line.normal[0] * line.offset / nn,
            line.normal[1] * line.offset / nn,
        ];
        for s_ in [-3.0, 0.0, 2.5] {
            let v = [foot[0] - s_ * line.normal[1], foot[1] + s_ * line.normal[0]];
            let u = b.lift(&v);
            let rel = u[0] - 2.0 * u[2] + u[4];
            assert!((rel + 2.0 * 2f64.ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn tangent_image_is_orthogonal_to_line_normal() {
        let s = inf();
        let b = basis(&s);
        for f in non_simplicial_faces(&s).unwrap() {
            let line = facet_line(&f, &b, &"+--++".parse().unwrap(), LIFT_TOL)
                .unwrap()
                .unwrap();
            // u in the nullspace of Â and orthogonal to e^w: u = B x with x ⊥ μ
            let x = [-line.normal[1], line.normal[0]];
            let u = b.lift(&x);
            let ub = b.reduce_log_abs(&u.iter().map(|v| v.exp()).collect::<Vec<_>>());
            assert!((ub[0] * line.normal[0] + ub[1] * line.normal[1]).abs() < 1e-8);
        }
    }

    #[test]
    fn admissibility_follows_sign() {
        let s = inf();
        let b = basis(&s);
        let sigma: SignClass = "++-++".parse().unwrap();
        let c = completed_signed_contour(&s, &b, &sigma, &Sampling::default()).unwrap();
        assert!(c.arcs.is_empty());
        let adm: Vec<&FacetLine> = c.admissible_lines().collect();
        assert_eq!(adm.len(), 1);
        assert_eq!(adm[0].members, vec![0, 2, 4]);
    }

    #[test]
    fn pentagon_completion_adds_nothing() {
        let s = penta();
        let b = basis(&s);
        let sigma: SignClass = "+--++".parse().unwrap();
        let c = completed_signed_contour(&s, &b, &sigma, &Sampling::default()).unwrap();
        assert!(c.lines.is_empty());
        assert_eq!(
            c.arcs,
            trace_signed_contour(&b, &sigma, &Sampling::default()).unwrap()
        );
    }

    #[test]
    fn initial_terms() {
        let c = [13.0 / 4.0, 1.0, -4.0, 1.0, 1.0];
        let s = inf();
        assert_eq!(
            initial_term(&c, &s, &[1.0, 0.0]).unwrap().indices,
            vec![0, 2, 4]
        );
        assert_eq!(
            initial_term(&c, &s, &[3.0, 0.0]).unwrap().indices,
            vec![0, 2, 4]
        );
        assert_eq!(initial_term(&c, &s, &[1.0, 0.3]).unwrap().indices, vec![0]);
        assert_eq!(
            initial_term(&c, &s, &[1.0, 0.0]).unwrap().coefficients,
            vec![13.0 / 4.0, -4.0, 1.0]
        );
        assert!(initial_term(&c, &s, &[0.0, 0.0]).is_err());
    }
}
