//! Chambers of a completed signed contour and the closed-form bounds they
//! are compared against.
//!
//! Chambers are counted twice: from a planar subdivision (Euler's formula,
//! cross-checked by walking face cycles) and from a raster flood fill.

mod arrangement;
mod raster;

pub use arrangement::{Arrangement, Cycle, EdgeKind};
pub use raster::{flood_fill_count, RasterCount};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::completion::{CompletedContour, FacetLine};
use crate::contour::ContourArc;
use crate::error::{Error, Result};
use arrangement::segment_crossings;

/// Vertices closer than this fraction of the window are merged.
pub const SNAP_FRACTION: f64 = 1e-6;
/// Chamber representatives are sought at least this fraction of the window
/// away from every curve.
pub const CLEARANCE_FRACTION: f64 = 1e-3;
/// Faces without any point this far (relative to the window) from the
/// curves are snapping debris: slivers between two curves that run within
/// the snapping distance of each other, typically at a flat cusp.
pub const SLIVER_FRACTION: f64 = 1e-5;
/// Arc samples within this fraction of the window from an admissible line
/// are taken to lie on it. Arcs approach their asymptotic facet lines
/// exponentially fast, so without this a tail runs inside the snapping
/// distance of the line and the snapped graph stops being planar.
pub const MERGE_FRACTION: f64 = 4.0 * SNAP_FRACTION;
/// Default raster resolution of the flood-fill oracle.
pub const RASTER_RESOLUTION: usize = 2048;
/// Resolution of the single retry when the two counts disagree: chambers
/// narrower than a few pixels (a small swallowtail) are invisible at the
/// default resolution.
pub const RASTER_FALLBACK: usize = 8192;

/// Parts of `points` inside `[-w, w]²`.
pub fn clip_polyline(points: &[[f64; 2]], w: f64) -> Vec<Vec<[f64; 2]>> {
    let mut out = Vec::new();
    let mut cur: Vec<[f64; 2]> = Vec::new();
    for seg in points.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        match clip_segment(a, b, w) {
            None => {
                if cur.len() > 1 {
                    out.push(std::mem::take(&mut cur));
                }
                cur.clear();
            }
            Some((t0, t1)) => {
                let at = |t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                if cur.is_empty() {
                    cur.push(at(t0));
                }
                cur.push(at(t1));
                if t1 < 1.0 {
                    out.push(std::mem::take(&mut cur));
                }
            }
        }
    }
    if cur.len() > 1 {
        out.push(cur);
    }
    out
}

fn clip_segment(p: [f64; 2], q: [f64; 2], w: f64) -> Option<(f64, f64)> {
    let d = [q[0] - p[0], q[1] - p[1]];
    let (mut t0, mut t1): (f64, f64) = (0.0, 1.0);
    for k in 0..2 {
        for (pk, qk) in [(-d[k], p[k] + w), (d[k], w - p[k])] {
            if pk == 0.0 {
                if qk < 0.0 {
                    return None;
                }
            } else if pk < 0.0 {
                t0 = t0.max(qk / pk);
            } else {
                t1 = t1.min(qk / pk);
            }
        }
    }
    (t0 <= t1).then_some((t0, t1))
}

/// The chord of `{v : v·normal = offset}` inside `[-w, w]²`.
pub fn clip_line(normal: [f64; 2], offset: f64, w: f64) -> Option<[[f64; 2]; 2]> {
    let n2 = normal[0] * normal[0] + normal[1] * normal[1];
    let foot = [normal[0] * offset / n2, normal[1] * offset / n2];
    let dir = [-normal[1] / n2.sqrt(), normal[0] / n2.sqrt()];
    let reach = 4.0 * w + foot[0].abs() + foot[1].abs();
    let a = [foot[0] - reach * dir[0], foot[1] - reach * dir[1]];
    let b = [foot[0] + reach * dir[0], foot[1] + reach * dir[1]];
    let (t0, t1) = clip_segment(a, b, w)?;
    let at = |t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    (t1 > t0).then(|| [at(t0), at(t1)])
}

/// Curves of a completed contour (arcs and admissible lines) clipped to `[-w, w]²`.
pub fn contour_polylines(contour: &CompletedContour, w: f64) -> Vec<Vec<[f64; 2]>> {
    let lines: Vec<&FacetLine> = contour.admissible_lines().collect();
    let mut out = Vec::new();
    for arc in &contour.arcs {
        let pts: Vec<[f64; 2]> = arc.points.iter().map(|p| p.v).collect();
        for piece in merge_into_lines(&pts, &lines, MERGE_FRACTION * w) {
            out.extend(clip_polyline(&piece, w));
        }
    }
    for line in contour.admissible_lines() {
        if let Some(seg) = clip_line(line.normal, line.offset, w) {
            out.push(seg.to_vec());
        }
    }
    out
}

/// Cuts `points` where it runs within `band` of one of `lines`; each cut
/// end is projected onto the line it meets.
fn merge_into_lines(points: &[[f64; 2]], lines: &[&FacetLine], band: f64) -> Vec<Vec<[f64; 2]>> {
    if lines.is_empty() {
        return vec![points.to_vec()];
    }
    let on_line = |p: [f64; 2]| {
        lines.iter().find_map(|l| {
            let d = l.signed_distance(p);
            (d.abs() <= band).then(|| {
                let n = l.normal[0].hypot(l.normal[1]);
                [p[0] - d * l.normal[0] / n, p[1] - d * l.normal[1] / n]
            })
        })
    };
    let mut out = Vec::new();
    let mut current: Vec<[f64; 2]> = Vec::new();
    let mut last_on: Option<[f64; 2]> = None;
    for &p in points {
        match on_line(p) {
            Some(q) => {
                if !current.is_empty() {
                    current.push(q);
                    out.push(std::mem::take(&mut current));
                }
                last_on = Some(q);
            }
            None => {
                if let Some(q) = last_on.take() {
                    current.push(q);
                }
                current.push(p);
            }
        }
    }
    if current.len() >= 2 {
        out.push(current);
    }
    out.retain(|piece| piece.len() >= 2);
    out
}

/// A connected component of the complement, seen inside the window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Chamber {
    pub id: usize,
    pub representative: [f64; 2],
    /// Distance from the representative to the nearest curve.
    pub clearance: f64,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChamberCount {
    pub window: f64,
    pub count: usize,
    pub bounded: usize,
    /// Faces discarded as snapping debris.
    pub slivers: usize,
    pub chambers: Vec<Chamber>,
}

/// Arrangement of a completed contour inside `[-w, w]²`.
pub fn contour_arrangement(contour: &CompletedContour, w: f64) -> Arrangement {
    Arrangement::build(&contour_polylines(contour, w), w, SNAP_FRACTION * w)
}

/// Faces of an arrangement with representatives, after the Euler / traversal
/// cross-check; slivers are dropped and counted.
fn resolved_faces(arr: &Arrangement) -> Result<(Vec<Chamber>, usize)> {
    let euler = arr.euler_chambers();
    let walked = arr.face_cycles().count();
    if euler != walked {
        return Err(Error::ArrangementInconsistent(format!(
            "Euler formula gives {euler} faces, face traversal {walked}"
        )));
    }
    let enclosed = arr.euler_enclosed();
    let walked_enclosed = arr
        .face_cycles()
        .filter(|(_, c)| !c.touches_boundary)
        .count();
    if enclosed != walked_enclosed {
        return Err(Error::ArrangementInconsistent(format!(
            "{enclosed} enclosed faces by Euler, {walked_enclosed} by traversal"
        )));
    }
    let min_clearance = SLIVER_FRACTION * arr.window;
    let mut slivers = 0;
    let mut chambers = Vec::new();
    for (representative, clearance, bounded) in representatives(arr) {
        if clearance < min_clearance {
            slivers += 1;
            continue;
        }
        chambers.push(Chamber {
            id: chambers.len(),
            representative,
            clearance,
            bounded,
        });
    }
    Ok((chambers, slivers))
}

fn summarize(w: f64, chambers: Vec<Chamber>, slivers: usize) -> ChamberCount {
    ChamberCount {
        window: w,
        count: chambers.len(),
        bounded: chambers.iter().filter(|c| c.bounded).count(),
        slivers,
        chambers,
    }
}

/// Counts chambers inside `[-w, w]²` and checks the count against `[-2w, 2w]²`.
///
/// The contour must have been traced with a window of at least `2w`.
pub fn count_chambers(contour: &CompletedContour, w: f64) -> Result<ChamberCount> {
    if contour.window < 2.0 * w * (1.0 - 1e-12) {
        return Err(Error::InvalidInput(format!(
            "contour traced to {}, need at least {} to check window stability",
            contour.window,
            2.0 * w
        )));
    }
    let (chambers, slivers) = resolved_faces(&contour_arrangement(contour, w))?;
    let inner = summarize(w, chambers, slivers);
    let (outer_chambers, outer_slivers) = resolved_faces(&contour_arrangement(contour, 2.0 * w))?;
    let outer = summarize(2.0 * w, outer_chambers, outer_slivers);
    if outer.count != inner.count || outer.bounded != inner.bounded {
        return Err(Error::WindowTooSmall {
            inner: inner.count,
            outer: outer.count,
        });
    }
    Ok(inner)
}

/// For every face: a grid point inside it with the largest clearance.
fn representatives(arr: &Arrangement) -> Vec<([f64; 2], f64, bool)> {
    let w = arr.window;
    let want = CLEARANCE_FRACTION * w;
    let cap = 0.25 * w;
    arr.face_cycles()
        .map(|(k, cycle)| {
            let mut best = ([0.0, 0.0], -1.0);
            for n in [24usize, 96, 384] {
                // keep the point-in-polygon work bounded on long cycles
                if n > 24 && (n * n * cycle.vertices.len()) as f64 > 4e8 {
                    break;
                }
                let [x0, y0, x1, y1] = cycle.bbox;
                for i in 0..n {
                    for j in 0..n {
                        let q = [
                            x0 + (x1 - x0) * (i as f64 + 0.5) / n as f64,
                            y0 + (y1 - y0) * (j as f64 + 0.5) / n as f64,
                        ];
                        if !arr.winds(cycle, q) {
                            continue;
                        }
                        let c = arr.clearance(q, cap);
                        if c > best.1 && arr.locate(q) == Some(k) {
                            best = (q, c);
                        }
                    }
                }
                if best.1 >= want {
                    break;
                }
            }
            (best.0, best.1.max(0.0), !cycle.touches_boundary)
        })
        .collect()
}

/// Which chamber of `count` contains `v`.
pub fn locate_chamber(
    contour: &CompletedContour,
    count: &ChamberCount,
    v: [f64; 2],
) -> Option<usize> {
    let arr = contour_arrangement(contour, count.window);
    let face = arr.locate(v)?;
    count
        .chambers
        .iter()
        .find(|c| arr.locate(c.representative) == Some(face))
        .map(|c| c.id)
}

/// Both chamber counts at the given window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DualCount {
    pub arrangement: usize,
    pub arrangement_bounded: usize,
    pub raster: usize,
    pub raster_bounded: usize,
    pub resolution: usize,
}

impl DualCount {
    pub fn agree(&self) -> bool {
        self.arrangement == self.raster && self.arrangement_bounded == self.raster_bounded
    }
}

/// Arrangement and raster counts at window `w`. The raster is retried once
/// at [`RASTER_FALLBACK`] if the two disagree; `resolution` in the result is
/// the one that was used last.
pub fn dual_count(contour: &CompletedContour, w: f64, resolution: usize) -> Result<DualCount> {
    let lines = contour_polylines(contour, w);
    let arr = Arrangement::build(&lines, w, SNAP_FRACTION * w);
    let (chambers, slivers) = resolved_faces(&arr)?;
    let summary = summarize(w, chambers, slivers);
    let mut raster = flood_fill_count(&lines, w, resolution);
    if (raster.count, raster.enclosed) != (summary.count, summary.bounded)
        && resolution < RASTER_FALLBACK
    {
        raster = flood_fill_count(&lines, w, RASTER_FALLBACK);
    }
    Ok(DualCount {
        arrangement: summary.count,
        arrangement_bounded: summary.bounded,
        raster: raster.count,
        raster_bounded: raster.enclosed,
        resolution: raster.resolution,
    })
}

/// `m(m-1)/2 + m + 1`: regions cut out by `m` lines in general position.
pub fn steiner_regions(m: u64) -> u64 {
    m * m.saturating_sub(1) / 2 + m + 1
}

/// Intersection and component bounds for a locally convex curve with `ℓ` cusps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KorbenBound {
    pub intersections: i64,
    pub components: i64,
}

pub fn korben_bound(cusps: u64) -> KorbenBound {
    let l = cusps as i64;
    let tri = l * (l + 1) / 2;
    KorbenBound {
        intersections: tri - (l + 1),
        components: tri - l + 1,
    }
}

/// `n²/2 - n/2 + 1`.
pub fn chamber_bound(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2 + 1
}

/// `n²/2 + 3n/2 + 6`.
pub fn isotopy_bound(n: u64) -> u64 {
    n * (n + 3) / 2 + 6
}

/// Crossings between two smooth sub-arcs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubArcPair {
    pub first: (usize, usize),
    pub second: (usize, usize),
    /// Transversal crossings.
    pub intersections: usize,
    /// Contacts at an angle below `1e-3` rad, such as the tails of two
    /// branches approaching the same asymptote; not counted as crossings.
    pub near_tangent: usize,
    pub shares_cusp: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub pairs: Vec<SubArcPair>,
    /// Pairs crossing more than once.
    pub multiple_crossings: usize,
    /// Cusp-sharing pairs that cross away from the cusp.
    pub cusp_crossings: usize,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.multiple_crossings == 0 && self.cusp_crossings == 0
    }
}

/// Crossing angle (radians) under which a contact counts as tangential.
const NEAR_TANGENT: f64 = 1e-3;

fn seg_dir(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    let d = [b[0] - a[0], b[1] - a[1]];
    let n = d[0].hypot(d[1]);
    [d[0] / n, d[1] / n]
}

/// Crossing points of two sets of polylines, with crossing angles.
fn crossings(a: &[Vec<[f64; 2]>], b: &[Vec<[f64; 2]>], snap: f64) -> Vec<([f64; 2], f64)> {
    let segs_b: Vec<([f64; 2], [f64; 2])> = b
        .iter()
        .flat_map(|l| l.windows(2).map(|p| (p[0], p[1])))
        .filter(|(p, q)| p != q)
        .collect();
    let mut pts: Vec<([f64; 2], f64)> = Vec::new();
    if segs_b.is_empty() {
        return pts;
    }
    // coarse bucketing of b's segments on a uniform grid
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for (p, q) in &segs_b {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k].min(q[k]));
            hi[k] = hi[k].max(p[k].max(q[k]));
        }
    }
    let g = ((segs_b.len() as f64).sqrt().ceil() as usize).clamp(4, 512);
    let cell = [
        ((hi[0] - lo[0]) / g as f64).max(1e-12),
        ((hi[1] - lo[1]) / g as f64).max(1e-12),
    ];
    let idx = |x: f64, k: usize| (((x - lo[k]) / cell[k]).floor().max(0.0) as usize).min(g - 1);
    let mut grid: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (s, (p, q)) in segs_b.iter().enumerate() {
        for i in idx(p[0].min(q[0]) - snap, 0)..=idx(p[0].max(q[0]) + snap, 0) {
            for j in idx(p[1].min(q[1]) - snap, 1)..=idx(p[1].max(q[1]) + snap, 1) {
                grid.entry((i, j)).or_default().push(s);
            }
        }
    }
    for line in a {
        for pair in line.windows(2) {
            let (p, q) = (pair[0], pair[1]);
            if p == q {
                continue;
            }
            if p[0].max(q[0]) < lo[0] - snap
                || p[0].min(q[0]) > hi[0] + snap
                || p[1].max(q[1]) < lo[1] - snap
                || p[1].min(q[1]) > hi[1] + snap
            {
                continue;
            }
            let mut cand: Vec<usize> = Vec::new();
            for i in idx(p[0].min(q[0]) - snap, 0)..=idx(p[0].max(q[0]) + snap, 0) {
                for j in idx(p[1].min(q[1]) - snap, 1)..=idx(p[1].max(q[1]) + snap, 1) {
                    if let Some(list) = grid.get(&(i, j)) {
                        cand.extend(list);
                    }
                }
            }
            cand.sort_unstable();
            cand.dedup();
            for s in cand {
                let (c, d) = segs_b[s];
                for (u, _) in segment_crossings(p, q, c, d, snap) {
                    let x = [p[0] + u * (q[0] - p[0]), p[1] + u * (q[1] - p[1])];
                    if pts
                        .iter()
                        .any(|(y, _)| (x[0] - y[0]).hypot(x[1] - y[1]) <= 10.0 * snap)
                    {
                        continue;
                    }
                    let (d1, d2) = (seg_dir(p, q), seg_dir(c, d));
                    let sin = (d1[0] * d2[1] - d1[1] * d2[0]).abs();
                    pts.push((x, sin.asin()));
                }
            }
        }
    }
    pts
}

/// Pairwise crossing counts of the smooth sub-arcs of a traced contour.
pub fn hypothesis_check(arcs: &[ContourArc], window: f64) -> HypothesisReport {
    let snap = SNAP_FRACTION * window;
    let mut groups: BTreeMap<(usize, usize), Vec<Vec<[f64; 2]>>> = BTreeMap::new();
    let mut cusp_points: BTreeMap<(usize, usize), Vec<[f64; 2]>> = BTreeMap::new();
    for arc in arcs {
        let key = (arc.branch, arc.sub_arc);
        groups
            .entry(key)
            .or_default()
            .push(arc.points.iter().map(|p| p.v).collect());
        let cp = cusp_points.entry(key).or_default();
        if arc.start_cusp {
            cp.push(arc.points[0].v);
        }
        if arc.end_cusp {
            cp.push(arc.points[arc.points.len() - 1].v);
        }
    }
    let keys: Vec<(usize, usize)> = groups.keys().copied().collect();
    let mut pairs = Vec::new();
    let exclusion = 1e-3 * window;
    for (x, &ka) in keys.iter().enumerate() {
        for &kb in &keys[x + 1..] {
            let shared: Vec<[f64; 2]> = cusp_points[&ka]
                .iter()
                .filter(|p| {
                    cusp_points[&kb]
                        .iter()
                        .any(|q| (p[0] - q[0]).hypot(p[1] - q[1]) <= snap)
                })
                .copied()
                .collect();
            let hits: Vec<([f64; 2], f64)> = crossings(&groups[&ka], &groups[&kb], snap)
                .into_iter()
                .filter(|(p, _)| {
                    shared
                        .iter()
                        .all(|c| (p[0] - c[0]).hypot(p[1] - c[1]) > exclusion)
                })
                .collect();
            pairs.push(SubArcPair {
                first: ka,
                second: kb,
                intersections: hits.iter().filter(|(_, ang)| *ang >= NEAR_TANGENT).count(),
                near_tangent: hits.iter().filter(|(_, ang)| *ang < NEAR_TANGENT).count(),
                shares_cusp: !shared.is_empty(),
            });
        }
    }
    HypothesisReport {
        multiple_crossings: pairs.iter().filter(|p| p.intersections > 1).count(),
        cusp_crossings: pairs
            .iter()
            .filter(|p| p.shares_cusp && p.intersections > 0)
            .count(),
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::completed_signed_contour;
    use crate::contour::{attained_classes, ContourPoint, Sampling};
    use crate::sign::SignClass;
    use crate::spectrum::{nullspace_basis, Spectrum, DEFAULT_RANK_TOL};

    fn penta() -> Spectrum {
        Spectrum::from_rows(&[vec![0., 1., 0., 4., 1.], vec![0., 0., 1., 1., 4.]]).unwrap()
    }

    #[test]
    fn bounds() {
        assert_eq!([0, 1, 2, 3].map(steiner_regions), [1, 2, 4, 7]);
        assert_eq!(korben_bound(2).components, 2);
        assert_eq!(korben_bound(3).components, 4);
        assert_eq!(korben_bound(0).components, 1);
        assert_eq!(korben_bound(0).intersections, -1);
        assert_eq!([1, 2, 3].map(chamber_bound), [1, 2, 4]);
        assert_eq!([1, 2, 10].map(isotopy_bound), [8, 11, 71]);
    }

    #[test]
    fn line_chord() {
        let seg = clip_line([1.0, 0.0], 0.5, 1.0).unwrap();
        assert!((seg[0][0] - 0.5).abs() < 1e-12 && (seg[1][0] - 0.5).abs() < 1e-12);
        assert!((seg[0][1] - seg[1][1]).abs() > 1.99);
        assert!(clip_line([1.0, 0.0], 2.0, 1.0).is_none());
    }

    #[test]
    fn pentagon_counts() {
        let s = penta();
        let b = nullspace_basis(&s.lifted(), DEFAULT_RANK_TOL).unwrap();
        let sampling = Sampling::default().with_window(16.0);
        let mut counts = BTreeMap::new();
        for sigma in attained_classes(&b).unwrap() {
            let c = completed_signed_contour(&s, &b, &sigma, &sampling).unwrap();
            let cc = count_chambers(&c, 8.0).unwrap();
            for ch in &cc.chambers {
                assert!(ch.clearance >= 8e-3, "{ch:?}");
            }
            counts.insert(sigma.to_string(), (cc.count, cc.bounded));
        }
        assert_eq!(counts["++--+"], (2, 0));
        assert_eq!(counts["+---+"], (2, 0));
        assert_eq!(counts["+--++"], (3, 1));
        assert_eq!(counts["+--+-"], (2, 0));
        assert_eq!(counts["+-++-"], (2, 0));
    }

    #[test]
    fn empty_contour_is_one_outer_chamber() {
        let c = CompletedContour {
            sign: "+++++".parse::<SignClass>().unwrap(),
            window: 16.0,
            arcs: vec![],
            lines: vec![],
            warnings: vec![],
        };
        let cc = count_chambers(&c, 8.0).unwrap();
        assert_eq!((cc.count, cc.bounded), (1, 0));
        assert!(!cc.chambers[0].bounded);
    }

    fn arc(branch: usize, sub_arc: usize, pts: &[[f64; 2]]) -> ContourArc {
        ContourArc {
            branch,
            sub_arc,
            theta_range: (0.0, 1.0),
            sign: "+-".parse().unwrap(),
            points: pts
                .iter()
                .map(|&v| ContourPoint { theta: 0.0, v })
                .collect(),
            start_cusp: false,
            end_cusp: false,
        }
    }

    #[test]
    fn parallel_lines_do_not_cross() {
        let arcs = [
            arc(0, 0, &[[-1.0, 0.0], [1.0, 0.0]]),
            arc(1, 0, &[[-1.0, 0.5], [1.0, 0.5]]),
        ];
        let r = hypothesis_check(&arcs, 1.0);
        assert_eq!(r.pairs[0].intersections, 0);
        assert!(r.holds());
    }

    #[test]
    fn figure_eight_is_flagged() {
        let n = 400;
        let lobe = |sgn: f64| -> Vec<[f64; 2]> {
            (0..=n)
                .map(|k| {
                    let s = -1.2 + 2.4 * k as f64 / n as f64;
                    [s, sgn * 0.3 * (3.0 * s).cos()]
                })
                .collect()
        };
        // two wiggly curves crossing twice
        let arcs = [arc(0, 0, &lobe(1.0)), arc(0, 1, &lobe(-1.0))];
        let r = hypothesis_check(&arcs, 2.0);
        assert!(r.pairs[0].intersections >= 2, "{r:?}");
        assert!(!r.holds());
    }

    #[test]
    fn pentagon_sub_arcs_cross_at_most_once() {
        let s = penta();
        let b = nullspace_basis(&s.lifted(), DEFAULT_RANK_TOL).unwrap();
        let arcs = crate::contour::trace_all(&b, &Sampling::default()).unwrap();
        let r = hypothesis_check(&arcs, 8.0);
        assert!(
            r.holds(),
            "{:?}",
            r.pairs
                .iter()
                .filter(|p| p.intersections > 1)
                .collect::<Vec<_>>()
        );
    }

    fn horizontal_line() -> FacetLine {
        FacetLine {
            members: vec![0, 1, 2],
            normal: [0.0, 2.0],
            offset: 0.0,
            admissible: true,
            lift_residual: 0.0,
        }
    }

    #[test]
    fn tail_on_a_line_is_cut() {
        let l = horizontal_line();
        // approaches y = 0 exponentially, then runs along it
        let pts: Vec<[f64; 2]> = (0..=40)
            .map(|k| {
                let x = k as f64 * 0.25;
                [x, (-4.0 * x).exp()]
            })
            .collect();
        let pieces = merge_into_lines(&pts, &[&l], 1e-5);
        assert_eq!(pieces.len(), 1);
        let end = *pieces[0].last().unwrap();
        assert_eq!(end[1], 0.0);
        assert!(end[0] <= 3.0);
    }

    #[test]
    fn crossing_sample_splits_at_the_line() {
        let l = horizontal_line();
        let pts = [[0.0, -1.0], [0.0, 0.0], [0.0, 1.0]];
        let pieces = merge_into_lines(&pts, &[&l], 1e-9);
        assert_eq!(
            pieces,
            vec![vec![[0.0, -1.0], [0.0, 0.0]], vec![[0.0, 0.0], [0.0, 1.0]]]
        );
    }

    #[test]
    fn inf_counts_agree() {
        let s = Spectrum::from_rows(&[vec![0., 1., 0., 2., 0.], vec![0., 0., 1., 0., 2.]]).unwrap();
        let b = nullspace_basis(&s.lifted(), DEFAULT_RANK_TOL).unwrap();
        let sampling = Sampling::default().with_window(16.0);
        for (sigma, expected) in [("++--+", 3), ("+--++", 5), ("+-++-", 3), ("++-++", 2)] {
            let c = completed_signed_contour(&s, &b, &sigma.parse().unwrap(), &sampling).unwrap();
            let cc = count_chambers(&c, 8.0).unwrap();
            assert_eq!(cc.count, expected, "{sigma}");
            assert!(
                dual_count(&c, 8.0, RASTER_RESOLUTION).unwrap().agree(),
                "{sigma}"
            );
        }
    }
}
