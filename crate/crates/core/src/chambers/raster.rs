//! Raster flood fill: the second, independent chamber count.

/// Result of labelling the free pixels of a rasterized arrangement.
#[derive(Debug, Clone)]
pub struct RasterCount {
    pub resolution: usize,
    /// Regions containing a core pixel (see [`CORE_RADIUS`]).
    pub count: usize,
    /// Core regions that do not reach the outermost pixel ring.
    pub enclosed: usize,
    /// All 4-connected free regions, including slivers without a core.
    pub raw_count: usize,
    /// Per-pixel region label (`u32::MAX` on curve pixels), row-major with
    /// row 0 at `y = -W`.
    pub labels: Vec<u32>,
    /// Pixel area of every region.
    pub areas: Vec<usize>,
}

impl RasterCount {
    pub fn label_at(&self, q: [f64; 2], window: f64) -> Option<u32> {
        let r = self.resolution;
        let px = |x: f64| {
            (((x + window) / (2.0 * window) * r as f64).floor() as isize).clamp(0, r as isize - 1)
                as usize
        };
        let l = self.labels[px(q[1]) * r + px(q[0])];
        (l != u32::MAX).then_some(l)
    }
}

/// A region counts only if some pixel has every pixel within this
/// Chebyshev radius free. Where two curves run closer than a pixel (the
/// wedge at a cusp) the fill breaks into one-pixel pockets that are
/// rasterization debris, not chambers.
pub const CORE_RADIUS: usize = 1;

/// Marks every pixel a segment passes through (supercover traversal).
fn supercover(mask: &mut [bool], r: usize, a: [f64; 2], b: [f64; 2]) {
    let (mut x, mut y) = (a[0].floor() as isize, a[1].floor() as isize);
    let (xe, ye) = (b[0].floor() as isize, b[1].floor() as isize);
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let sx: isize = if dx > 0.0 { 1 } else { -1 };
    let sy: isize = if dy > 0.0 { 1 } else { -1 };
    let t_dx = if dx != 0.0 {
        (1.0 / dx).abs()
    } else {
        f64::INFINITY
    };
    let t_dy = if dy != 0.0 {
        (1.0 / dy).abs()
    } else {
        f64::INFINITY
    };
    let mut t_mx = if dx > 0.0 {
        (x as f64 + 1.0 - a[0]) / dx
    } else if dx < 0.0 {
        (a[0] - x as f64) / -dx
    } else {
        f64::INFINITY
    };
    let mut t_my = if dy > 0.0 {
        (y as f64 + 1.0 - a[1]) / dy
    } else if dy < 0.0 {
        (a[1] - y as f64) / -dy
    } else {
        f64::INFINITY
    };
    let mut mark = |x: isize, y: isize| {
        if x >= 0 && y >= 0 && (x as usize) < r && (y as usize) < r {
            mask[y as usize * r + x as usize] = true;
        }
    };
    let steps = (xe - x).abs() + (ye - y).abs();
    mark(x, y);
    for _ in 0..steps {
        if (t_mx - t_my).abs() < 1e-12 {
            // passing exactly through a pixel corner: mark both neighbours
            mark(x + sx, y);
            mark(x, y + sy);
            x += sx;
            y += sy;
            t_mx += t_dx;
            t_my += t_dy;
        } else if t_mx < t_my {
            x += sx;
            t_mx += t_dx;
        } else {
            y += sy;
            t_my += t_dy;
        }
        mark(x, y);
        if x == xe && y == ye {
            break;
        }
    }
}

/// Counts 4-connected free regions after rasterizing `polylines` into an
/// `r × r` grid over `[-W, W]²`.
pub fn flood_fill_count(polylines: &[Vec<[f64; 2]>], window: f64, r: usize) -> RasterCount {
    let scale = r as f64 / (2.0 * window);
    let to_px = |p: [f64; 2]| [(p[0] + window) * scale, (p[1] + window) * scale];
    let mut wall = vec![false; r * r];
    for line in polylines {
        for pair in line.windows(2) {
            supercover(&mut wall, r, to_px(pair[0]), to_px(pair[1]));
        }
    }

    let core = erode(&wall, r, CORE_RADIUS);
    let mut labels = vec![u32::MAX; r * r];
    let mut areas = Vec::new();
    let mut border_flags = Vec::new();
    let mut stack = Vec::new();
    for start in 0..r * r {
        if wall[start] || labels[start] != u32::MAX {
            continue;
        }
        let id = areas.len() as u32;
        labels[start] = id;
        stack.push(start);
        let mut area = 0;
        let mut border = false;
        while let Some(p) = stack.pop() {
            area += 1;
            let (x, y) = (p % r, p / r);
            if x == 0 || y == 0 || x == r - 1 || y == r - 1 {
                border = true;
            }
            let mut visit = |q: usize| {
                if !wall[q] && labels[q] == u32::MAX {
                    labels[q] = id;
                    stack.push(q);
                }
            };
            if x > 0 {
                visit(p - 1);
            }
            if x + 1 < r {
                visit(p + 1);
            }
            if y > 0 {
                visit(p - r);
            }
            if y + 1 < r {
                visit(p + r);
            }
        }
        border_flags.push(border);
        areas.push(area);
    }
    let mut has_core = vec![false; areas.len()];
    for (p, &c) in core.iter().enumerate() {
        if c {
            has_core[labels[p] as usize] = true;
        }
    }
    let count = has_core.iter().filter(|&&c| c).count();
    let enclosed = has_core
        .iter()
        .zip(&border_flags)
        .filter(|(&c, &b)| c && !b)
        .count();
    RasterCount {
        resolution: r,
        count,
        enclosed,
        raw_count: areas.len(),
        labels,
        areas,
    }
}

/// Pixels whose whole `(2k+1)²` neighbourhood (clipped to the grid) is free.
fn erode(wall: &[bool], r: usize, k: usize) -> Vec<bool> {
    // separable max filter of the wall mask: rows, then columns
    let mut rows = vec![false; r * r];
    for y in 0..r {
        for x in 0..r {
            let lo = x.saturating_sub(k);
            let hi = (x + k).min(r - 1);
            rows[y * r + x] = (lo..=hi).any(|i| wall[y * r + i]);
        }
    }
    let mut out = vec![false; r * r];
    for y in 0..r {
        let lo = y.saturating_sub(k);
        let hi = (y + k).min(r - 1);
        for x in 0..r {
            out[y * r + x] = !(lo..=hi).any(|j| rows[j * r + x]);
        }
    }
    out
}
