//! Marching squares on a square box in `y`-space, with union-find over
//! crossing edges.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::dsu::Dsu;

use super::ExpSum;

/// One connected component of the extracted zero set.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroComponent {
    /// Number of grid edges the component crosses.
    pub crossings: usize,
    /// The component leaves the box.
    pub touches_box: bool,
    /// Smallest distance from the moment-map image of a crossing to `∂P`.
    pub moment_clearance: f64,
    /// Crossings on the box boundary.
    pub exits: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Default)]
pub struct MarchResult {
    pub components: Vec<ZeroComponent>,
    /// Extracted segments, only filled when requested.
    pub segments: Vec<[[f64; 2]; 2]>,
}

/// Box `center ± half_width` split into `r × r` cells.
#[derive(Debug, Clone, Copy)]
pub struct GridBox {
    pub center: [f64; 2],
    pub half_width: f64,
    pub resolution: usize,
}

impl GridBox {
    fn coord(&self, k: usize, axis: usize) -> f64 {
        self.center[axis] - self.half_width
            + 2.0 * self.half_width * k as f64 / self.resolution as f64
    }
}

pub fn march(
    g: &ExpSum,
    grid: GridBox,
    keep_segments: bool,
    clearance: impl Fn([f64; 2]) -> f64,
) -> MarchResult {
    let r = grid.resolution;
    let side = r + 1;
    let mut values = vec![0.0; side * side];
    values
        .par_chunks_mut(side)
        .enumerate()
        .for_each(|(j, row)| {
            let y = grid.coord(j, 1);
            for (i, v) in row.iter_mut().enumerate() {
                *v = g.eval_scaled(&[grid.coord(i, 0), y]);
            }
        });
    let at = |i: usize, j: usize| values[j * side + i];
    let positive = |v: f64| v >= 0.0;

    // Edge ids: horizontal (i, j)-(i+1, j) first, then vertical (i, j)-(i, j+1).
    let horizontal = |i: usize, j: usize| j * r + i;
    let vertical = |i: usize, j: usize| r * side + j * side + i;

    let mut nodes: HashMap<usize, usize> = HashMap::new();
    let mut points: Vec<[f64; 2]> = Vec::new();
    let mut on_box: Vec<bool> = Vec::new();
    let mut links: Vec<(usize, usize)> = Vec::new();
    let mut segments = Vec::new();

    let crossing = |(i0, j0): (usize, usize), (i1, j1): (usize, usize)| -> [f64; 2] {
        let (v0, v1) = (at(i0, j0), at(i1, j1));
        let s = v0 / (v0 - v1);
        let p0 = [grid.coord(i0, 0), grid.coord(j0, 1)];
        let p1 = [grid.coord(i1, 0), grid.coord(j1, 1)];
        [p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1])]
    };

    for j in 0..r {
        for i in 0..r {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let signs = corners.map(|(a, b)| positive(at(a, b)));
            if signs.iter().all(|&s| s == signs[0]) {
                continue;
            }
            // edge k joins corner k and corner k+1
            let ids = [
                horizontal(i, j),
                vertical(i + 1, j),
                horizontal(i, j + 1),
                vertical(i, j),
            ];
            let boundary = [j == 0, i + 1 == r, j + 1 == r, i == 0];
            let mut crossed = [usize::MAX; 4];
            for k in 0..4 {
                if signs[k] != signs[(k + 1) % 4] {
                    crossed[k] = *nodes.entry(ids[k]).or_insert_with(|| {
                        points.push(crossing(corners[k], corners[(k + 1) % 4]));
                        on_box.push(boundary[k]);
                        points.len() - 1
                    });
                }
            }
            let active: Vec<usize> = (0..4).filter(|&k| crossed[k] != usize::MAX).collect();
            let pairs: Vec<(usize, usize)> = if active.len() == 2 {
                vec![(active[0], active[1])]
            } else {
                // saddle: cut off the corners whose sign differs from the centre
                let centre = positive(corners.iter().map(|&(a, b)| at(a, b)).sum::<f64>());
                (0..4)
                    .filter(|&k| signs[k] != centre)
                    .map(|k| ((k + 3) % 4, k))
                    .collect()
            };
            for (a, b) in pairs {
                links.push((crossed[a], crossed[b]));
                if keep_segments {
                    segments.push([points[crossed[a]], points[crossed[b]]]);
                }
            }
        }
    }

    let mut dsu = Dsu::new(points.len());
    for &(a, b) in &links {
        dsu.union(a, b);
    }
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut components: Vec<ZeroComponent> = Vec::new();
    for k in 0..points.len() {
        let root = dsu.find(k);
        let idx = *by_root.entry(root).or_insert_with(|| {
            components.push(ZeroComponent {
                crossings: 0,
                touches_box: false,
                moment_clearance: f64::INFINITY,
                exits: Vec::new(),
            });
            components.len() - 1
        });
        let c = &mut components[idx];
        c.crossings += 1;
        if on_box[k] {
            c.touches_box = true;
            c.exits.push(points[k]);
        }
        c.moment_clearance = c.moment_clearance.min(clearance(points[k]));
    }
    MarchResult {
        components,
        segments,
    }
}
