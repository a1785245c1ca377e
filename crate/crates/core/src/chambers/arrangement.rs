//! Planar subdivision induced by polylines inside a square window.

use std::collections::{HashMap, HashSet};

use crate::dsu::Dsu;

/// Segment with its owning polyline and position along it.
#[derive(Debug, Clone, Copy)]
struct Seg {
    a: [f64; 2],
    b: [f64; 2],
    poly: usize,
    idx: usize,
}

/// Uniform grid over the window that buckets segment bounding boxes.
struct Grid {
    lo: f64,
    cell: f64,
    size: usize,
}

impl Grid {
    fn new(window: f64, items: usize) -> Self {
        let size = ((items as f64).sqrt().ceil() as usize).clamp(8, 1024);
        Self {
            lo: -window,
            cell: 2.0 * window / size as f64,
            size,
        }
    }

    fn index(&self, x: f64) -> usize {
        (((x - self.lo) / self.cell).floor().max(0.0) as usize).min(self.size - 1)
    }

    fn cells(&self, a: [f64; 2], b: [f64; 2], pad: f64) -> impl Iterator<Item = usize> + '_ {
        let (x0, x1) = (
            self.index(a[0].min(b[0]) - pad),
            self.index(a[0].max(b[0]) + pad),
        );
        let (y0, y1) = (
            self.index(a[1].min(b[1]) - pad),
            self.index(a[1].max(b[1]) + pad),
        );
        (x0..=x1).flat_map(move |i| (y0..=y1).map(move |j| i * self.size + j))
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// Parameters on `s` and `t` of their intersection points; at most two
/// (collinear overlap reports the overlap endpoints).
fn intersect(s: &Seg, t: &Seg, eps: f64) -> Vec<(f64, f64)> {
    let r = sub(s.b, s.a);
    let q = sub(t.b, t.a);
    let denom = r[0] * q[1] - r[1] * q[0];
    let w = sub(t.a, s.a);
    let (lr, lq) = (norm(r), norm(q));
    if lr == 0.0 || lq == 0.0 {
        return vec![];
    }
    if denom.abs() <= 1e-14 * lr * lq {
        // parallel: only collinear overlaps matter
        if (w[0] * r[1] - w[1] * r[0]).abs() > eps * lr {
            return vec![];
        }
        let rr = lr * lr;
        let proj = |p: [f64; 2]| {
            let d = sub(p, s.a);
            (d[0] * r[0] + d[1] * r[1]) / rr
        };
        let (u0, u1) = (proj(t.a), proj(t.b));
        let lo = u0.min(u1).max(0.0);
        let hi = u0.max(u1).min(1.0);
        if lo > hi {
            return vec![];
        }
        let back = |u: f64| {
            let p = [s.a[0] + u * r[0], s.a[1] + u * r[1]];
            let d = sub(p, t.a);
            ((d[0] * q[0] + d[1] * q[1]) / (lq * lq)).clamp(0.0, 1.0)
        };
        return vec![(lo, back(lo)), (hi, back(hi))];
    }
    let u = (w[0] * q[1] - w[1] * q[0]) / denom;
    let v = (w[0] * r[1] - w[1] * r[0]) / denom;
    let (eu, ev) = (eps / lr, eps / lq);
    if u < -eu || u > 1.0 + eu || v < -ev || v > 1.0 + ev {
        return vec![];
    }
    vec![(u.clamp(0.0, 1.0), v.clamp(0.0, 1.0))]
}

/// Where a graph edge came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Curve,
    Boundary,
}

/// One face boundary cycle of the subdivision.
#[derive(Debug, Clone)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub signed_area: f64,
    pub touches_boundary: bool,
    pub bbox: [f64; 4],
}

/// The subdivision of `[-W, W]²` cut out by a set of polylines.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub window: f64,
    pub vertices: Vec<[f64; 2]>,
    pub edges: Vec<(usize, usize, EdgeKind)>,
    pub components: usize,
    pub curve_vertices: usize,
    pub curve_edges: usize,
    pub curve_components: usize,
    pub cycles: Vec<Cycle>,
    edge_grid: EdgeGrid,
}

/// Buckets of curve edges for nearest-curve queries.
#[derive(Debug, Clone, Default)]
struct EdgeGrid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl EdgeGrid {
    fn key(&self, x: f64, y: f64) -> (i64, i64) {
        (
            (x / self.cell).floor() as i64,
            (y / self.cell).floor() as i64,
        )
    }
}

impl Arrangement {
    /// Builds the arrangement of `polylines` (already clipped to the window)
    /// together with the window boundary. Points closer than `snap` merge.
    pub fn build(polylines: &[Vec<[f64; 2]>], window: f64, snap: f64) -> Self {
        let w = window;
        let mut segs: Vec<Seg> = Vec::new();
        for (p, line) in polylines.iter().enumerate() {
            for (i, pair) in line.windows(2).enumerate() {
                if pair[0] != pair[1] {
                    segs.push(Seg {
                        a: pair[0],
                        b: pair[1],
                        poly: p,
                        idx: i,
                    });
                }
            }
        }
        let first_boundary = segs.len();
        let corners = [[-w, -w], [w, -w], [w, w], [-w, w]];
        for k in 0..4 {
            segs.push(Seg {
                a: corners[k],
                b: corners[(k + 1) % 4],
                poly: usize::MAX,
                idx: k,
            });
        }

        let grid = Grid::new(w * (1.0 + 1e-9), segs.len());
        let mut buckets: HashMap<usize, Vec<usize>> = HashMap::new();
        for (k, s) in segs.iter().enumerate() {
            for c in grid.cells(s.a, s.b, snap) {
                buckets.entry(c).or_default().push(k);
            }
        }
        let mut splits: Vec<Vec<f64>> = vec![vec![0.0, 1.0]; segs.len()];
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        for bucket in buckets.values() {
            for (x, &i) in bucket.iter().enumerate() {
                for &j in &bucket[x + 1..] {
                    let (i, j) = (i.min(j), i.max(j));
                    let (si, sj) = (&segs[i], &segs[j]);
                    if si.poly == sj.poly && si.idx.abs_diff(sj.idx) <= 1 && si.poly != usize::MAX {
                        continue;
                    }
                    if !seen.insert((i, j)) {
                        continue;
                    }
                    for (u, v) in intersect(si, sj, snap) {
                        splits[i].push(u);
                        splits[j].push(v);
                    }
                }
            }
        }

        // split into pieces, then snap endpoints
        let mut raw_points: Vec<[f64; 2]> = Vec::new();
        let mut raw_edges: Vec<(usize, usize, EdgeKind)> = Vec::new();
        for (k, s) in segs.iter().enumerate() {
            let ps = &mut splits[k];
            ps.sort_by(f64::total_cmp);
            ps.dedup();
            let kind = if k >= first_boundary {
                EdgeKind::Boundary
            } else {
                EdgeKind::Curve
            };
            let at = |u: f64| {
                [
                    s.a[0] + u * (s.b[0] - s.a[0]),
                    s.a[1] + u * (s.b[1] - s.a[1]),
                ]
            };
            for pair in ps.windows(2) {
                let i0 = raw_points.len();
                raw_points.push(at(pair[0]));
                raw_points.push(at(pair[1]));
                raw_edges.push((i0, i0 + 1, kind));
            }
        }
        let mut dsu = Dsu::new(raw_points.len());
        let key = |p: [f64; 2]| ((p[0] / snap).floor() as i64, (p[1] / snap).floor() as i64);
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (k, &p) in raw_points.iter().enumerate() {
            let (cx, cy) = key(p);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(list) = cells.get(&(cx + dx, cy + dy)) {
                        for &o in list {
                            if norm(sub(raw_points[o], p)) <= snap {
                                dsu.union(o, k);
                            }
                        }
                    }
                }
            }
            cells.entry((cx, cy)).or_default().push(k);
        }
        let mut id_of: HashMap<usize, usize> = HashMap::new();
        let mut vertices = Vec::new();
        let vid: Vec<usize> = (0..raw_points.len())
            .map(|k| {
                let r = dsu.find(k);
                *id_of.entry(r).or_insert_with(|| {
                    vertices.push(raw_points[r]);
                    vertices.len() - 1
                })
            })
            .collect();
        let mut edge_set: HashMap<(usize, usize), EdgeKind> = HashMap::new();
        for &(a, b, kind) in &raw_edges {
            let (u, v) = (vid[a], vid[b]);
            if u == v {
                continue;
            }
            let e = edge_set.entry((u.min(v), u.max(v))).or_insert(kind);
            if kind == EdgeKind::Boundary {
                *e = EdgeKind::Boundary;
            }
        }
        let mut edges: Vec<(usize, usize, EdgeKind)> =
            edge_set.into_iter().map(|((u, v), k)| (u, v, k)).collect();
        edges.sort_by_key(|&(u, v, _)| (u, v));

        let components = count_components(vertices.len(), edges.iter().map(|&(u, v, _)| (u, v)));
        let curve: Vec<(usize, usize)> = edges
            .iter()
            .filter(|e| e.2 == EdgeKind::Curve)
            .map(|&(u, v, _)| (u, v))
            .collect();
        let mut used: HashSet<usize> = HashSet::new();
        for &(u, v) in &curve {
            used.insert(u);
            used.insert(v);
        }
        let curve_components = {
            let mut dsu = Dsu::new(vertices.len());
            for &(u, v) in &curve {
                dsu.union(u, v);
            }
            let roots: HashSet<usize> = used.iter().map(|&x| dsu.find(x)).collect();
            roots.len()
        };

        let mut edge_grid = EdgeGrid {
            cell: 2.0 * window / 128.0,
            buckets: HashMap::new(),
        };
        for (k, &(u, v, kind)) in edges.iter().enumerate() {
            if kind != EdgeKind::Curve {
                continue;
            }
            let (a, b) = (vertices[u], vertices[v]);
            let (i0, j0) = edge_grid.key(a[0].min(b[0]), a[1].min(b[1]));
            let (i1, j1) = edge_grid.key(a[0].max(b[0]), a[1].max(b[1]));
            for i in i0..=i1 {
                for j in j0..=j1 {
                    edge_grid.buckets.entry((i, j)).or_default().push(k);
                }
            }
        }
        let mut arr = Self {
            window,
            edge_grid,
            cycles: Vec::new(),
            curve_vertices: used.len(),
            curve_edges: curve.len(),
            curve_components,
            components,
            vertices,
            edges,
        };
        arr.cycles = arr.trace_cycles();
        arr
    }

    /// Faces of the whole arrangement inside the window, by Euler's formula.
    pub fn euler_chambers(&self) -> usize {
        // F = E - V + 1 + C counts the outside face too
        (self.edges.len() + self.components + 1 - self.vertices.len()) - 1
    }

    /// Faces enclosed by curves alone, by Euler's formula.
    pub fn euler_enclosed(&self) -> usize {
        self.curve_edges + self.curve_components - self.curve_vertices
    }

    fn trace_cycles(&self) -> Vec<Cycle> {
        let nv = self.vertices.len();
        // half-edge 2e: u->v, 2e+1: v->u
        let mut out: Vec<Vec<(f64, usize)>> = vec![Vec::new(); nv];
        for (e, &(u, v, _)) in self.edges.iter().enumerate() {
            let d = sub(self.vertices[v], self.vertices[u]);
            out[u].push((d[1].atan2(d[0]), 2 * e));
            out[v].push(((-d[1]).atan2(-d[0]), 2 * e + 1));
        }
        for list in &mut out {
            list.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        let origin = |h: usize| {
            let (u, v, _) = self.edges[h / 2];
            if h.is_multiple_of(2) {
                u
            } else {
                v
            }
        };
        // position of each half-edge in its origin's angular list
        let mut pos = vec![0; 2 * self.edges.len()];
        for list in &out {
            for (k, &(_, h)) in list.iter().enumerate() {
                pos[h] = k;
            }
        }
        let next = |h: usize| {
            let twin = h ^ 1;
            let v = origin(twin);
            let list = &out[v];
            let k = pos[twin];
            list[(k + list.len() - 1) % list.len()].1
        };
        let mut visited = vec![false; 2 * self.edges.len()];
        let mut cycles = Vec::new();
        for start in 0..visited.len() {
            if visited[start] {
                continue;
            }
            let mut h = start;
            let mut verts = Vec::new();
            let mut touches = false;
            let mut area = 0.0;
            let mut bbox = [
                f64::INFINITY,
                f64::INFINITY,
                f64::NEG_INFINITY,
                f64::NEG_INFINITY,
            ];
            loop {
                visited[h] = true;
                let u = origin(h);
                let v = origin(h ^ 1);
                if self.edges[h / 2].2 == EdgeKind::Boundary {
                    touches = true;
                }
                let (p, q) = (self.vertices[u], self.vertices[v]);
                area += 0.5 * (p[0] * q[1] - q[0] * p[1]);
                bbox = [
                    bbox[0].min(p[0]),
                    bbox[1].min(p[1]),
                    bbox[2].max(p[0]),
                    bbox[3].max(p[1]),
                ];
                verts.push(u);
                h = next(h);
                if h == start {
                    break;
                }
            }
            cycles.push(Cycle {
                vertices: verts,
                signed_area: area,
                touches_boundary: touches,
                bbox,
            });
        }
        cycles
    }

    /// Cycles bounding faces (counter-clockwise, positive area).
    pub fn face_cycles(&self) -> impl Iterator<Item = (usize, &Cycle)> {
        self.cycles
            .iter()
            .enumerate()
            .filter(|(_, c)| c.signed_area > 0.0)
    }

    /// Index of the face cycle containing `q`: the positive cycle of least
    /// area that winds around it.
    pub fn locate(&self, q: [f64; 2]) -> Option<usize> {
        self.face_cycles()
            .filter(|(_, c)| {
                q[0] >= c.bbox[0] && q[0] <= c.bbox[2] && q[1] >= c.bbox[1] && q[1] <= c.bbox[3]
            })
            .filter(|(_, c)| self.winds(c, q))
            .min_by(|a, b| a.1.signed_area.total_cmp(&b.1.signed_area))
            .map(|(k, _)| k)
    }

    /// Whether `c` has nonzero winding number around `q`.
    pub fn winds(&self, c: &Cycle, q: [f64; 2]) -> bool {
        let mut wn = 0i32;
        let n = c.vertices.len();
        for k in 0..n {
            let a = self.vertices[c.vertices[k]];
            let b = self.vertices[c.vertices[(k + 1) % n]];
            if a[1] <= q[1] {
                if b[1] > q[1] && cross(a, b, q) > 0.0 {
                    wn += 1;
                }
            } else if b[1] <= q[1] && cross(a, b, q) < 0.0 {
                wn -= 1;
            }
        }
        wn != 0
    }

    /// Distance from `q` to the nearest curve edge, capped at `cap`.
    pub fn clearance(&self, q: [f64; 2], cap: f64) -> f64 {
        let g = &self.edge_grid;
        let (ci, cj) = g.key(q[0], q[1]);
        let mut best = cap;
        let max_ring = (cap / g.cell).ceil() as i64 + 1;
        for ring in 0..=max_ring {
            // every point of ring `ring` is at least (ring - 1) cells away
            if (ring - 1) as f64 * g.cell > best {
                break;
            }
            for i in ci - ring..=ci + ring {
                for j in cj - ring..=cj + ring {
                    if (i - ci).abs() != ring && (j - cj).abs() != ring {
                        continue;
                    }
                    let Some(list) = g.buckets.get(&(i, j)) else {
                        continue;
                    };
                    for &e in list {
                        let (u, v, _) = self.edges[e];
                        best = best.min(point_segment_distance(
                            q,
                            self.vertices[u],
                            self.vertices[v],
                        ));
                    }
                }
            }
        }
        best
    }
}

pub(crate) fn point_segment_distance(q: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = sub(b, a);
    let aq = sub(q, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let s = if len2 == 0.0 {
        0.0
    } else {
        ((aq[0] * ab[0] + aq[1] * ab[1]) / len2).clamp(0.0, 1.0)
    };
    norm(sub(q, [a[0] + s * ab[0], a[1] + s * ab[1]]))
}

fn count_components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut dsu = Dsu::new(n);
    for (u, v) in edges {
        dsu.union(u, v);
    }
    (0..n).filter(|&x| dsu.find(x) == x).count()
}

/// Parameters along `s` (segment `a → b`) where it meets `t`.
pub(crate) fn segment_crossings(
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
    eps: f64,
) -> Vec<(f64, f64)> {
    intersect(
        &Seg {
            a,
            b,
            poly: 0,
            idx: 0,
        },
        &Seg {
            a: c,
            b: d,
            poly: 1,
            idx: 0,
        },
        eps,
    )
}
