//! Polyline sampling of the contour branches.

use rayon::prelude::*;
use serde::Serialize;

use super::{find_cusps, parameter_intervals, ParamInterval};
use crate::error::Result;
use crate::sign::SignClass;
use crate::spectrum::NullBasis;

/// Largest logistic parameter; beyond it `e^{-u}` underflows the angle.
const U_MAX: f64 = 700.0;

/// Controls for tracing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sampling {
    /// Samples per unit length of the logistic parameter window `[-20, 20]`.
    pub points_per_arc: usize,
    /// Half-width of the square clip window `[-W, W]²`.
    pub window: f64,
    /// Hard cap on the samples of one branch.
    pub max_points: usize,
    /// Maximum image step as a fraction of the window diagonal.
    pub refine_fraction: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            points_per_arc: 2000,
            window: 8.0,
            max_points: 100_000,
            refine_fraction: 0.01,
        }
    }
}

impl Sampling {
    pub fn with_window(self, window: f64) -> Self {
        Self { window, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourPoint {
    /// Parameter angle; increases along the branch and may exceed `π` on
    /// the branch that wraps around.
    pub theta: f64,
    pub v: [f64; 2],
}

/// A clipped piece of one smooth sub-arc of a branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourArc {
    /// Index of the parameter interval this piece comes from.
    pub branch: usize,
    /// Index of the smooth sub-arc within the branch (cusps split branches).
    pub sub_arc: usize,
    pub theta_range: (f64, f64),
    pub sign: SignClass,
    pub points: Vec<ContourPoint>,
    pub start_cusp: bool,
    pub end_cusp: bool,
}

fn sigmoid(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

/// Evaluates one branch in the logistic parameter `u ∈ ℝ`: the angle is
/// `θ_a + L σ(u)`. Linear forms are expanded around the nearer endpoint and
/// the forms vanishing there are set to exactly zero before the offset is
/// applied, so the tails stay accurate down to offsets of `e^{-700}`.
struct Branch<'a> {
    rows: &'a [[f64; 2]],
    interval: &'a ParamInterval,
    start_perp: Vec<f64>,
    start_base: Vec<f64>,
    end_perp: Vec<f64>,
    end_base: Vec<f64>,
    start_dir: [f64; 2],
    end_dir: [f64; 2],
}

impl<'a> Branch<'a> {
    fn new(rows: &'a [[f64; 2]], interval: &'a ParamInterval) -> Self {
        let frame = |theta: f64, zero: &[usize]| {
            let (c, s) = (theta.cos(), theta.sin());
            let base: Vec<f64> = rows
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    if zero.contains(&i) {
                        0.0
                    } else {
                        c * b[0] + s * b[1]
                    }
                })
                .collect();
            let perp: Vec<f64> = rows.iter().map(|b| -s * b[0] + c * b[1]).collect();
            (base, perp)
        };
        let (start_base, start_perp) = frame(interval.start.theta, &interval.start.indices);
        let (end_base, end_perp) = frame(
            interval.start.theta + interval.length,
            &interval.end.indices,
        );
        let tail = |idx: &[usize]| {
            let mut d = [0.0; 2];
            for &i in idx {
                d[0] -= rows[i][0];
                d[1] -= rows[i][1];
            }
            d
        };
        Self {
            rows,
            interval,
            start_perp,
            start_base,
            end_perp,
            end_base,
            start_dir: tail(&interval.start.indices),
            end_dir: tail(&interval.end.indices),
        }
    }

    /// `(θ, ξ, offset from the nearer endpoint)`.
    fn eval(&self, u: f64) -> (f64, [f64; 2], f64) {
        let l = self.interval.length;
        let (theta, forms, offset): (f64, Vec<f64>, f64) = if u <= 0.0 {
            let s = l * sigmoid(u);
            let (c, sn) = (s.cos(), s.sin());
            let f = self
                .start_base
                .iter()
                .zip(&self.start_perp)
                .map(|(b, p)| c * b + sn * p)
                .collect();
            (self.interval.start.theta + s, f, s)
        } else {
            let r = l * sigmoid(-u);
            let (c, sn) = (r.cos(), r.sin());
            let f = self
                .end_base
                .iter()
                .zip(&self.end_perp)
                .map(|(b, p)| c * b - sn * p)
                .collect();
            (self.interval.start.theta + l - r, f, r)
        };
        let mut v = [0.0; 2];
        for (f, b) in forms.iter().zip(self.rows) {
            let lg = f.abs().ln();
            v[0] += lg * b[0];
            v[1] += lg * b[1];
        }
        (theta, v, offset)
    }

    /// True once the branch has left the window for good in direction `dir`
    /// (`-1` toward the start breakpoint, `+1` toward the end).
    fn done(&self, v: [f64; 2], offset: f64, dir: f64, window: f64) -> bool {
        if offset >= 1e-8 * self.interval.length {
            return false;
        }
        let d = if dir < 0.0 {
            self.start_dir
        } else {
            self.end_dir
        };
        if d[0].hypot(d[1]) < 1e-12 {
            // tail converges to a finite point
            return true;
        }
        outside(v, window) && !ray_hits_box(v, d, window)
    }
}

fn outside(v: [f64; 2], w: f64) -> bool {
    v[0].abs() > w || v[1].abs() > w
}

/// Slab test for the ray `p + s d`, `s >= 0`, against `[-w, w]²`.
fn ray_hits_box(p: [f64; 2], d: [f64; 2], w: f64) -> bool {
    let mut lo: f64 = 0.0;
    let mut hi = f64::INFINITY;
    for k in 0..2 {
        if d[k].abs() < 1e-300 {
            if p[k].abs() > w {
                return false;
            }
        } else {
            let a = (-w - p[k]) / d[k];
            let b = (w - p[k]) / d[k];
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
    }
    lo <= hi
}

struct Sample {
    u: f64,
    theta: f64,
    v: [f64; 2],
    cusp: bool,
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn march(branch: &Branch, sampling: &Sampling, dir: f64, cap: usize) -> Vec<Sample> {
    let h_max = 40.0 / sampling.points_per_arc.max(1) as f64;
    let max_step = sampling.refine_fraction * 2.0 * std::f64::consts::SQRT_2 * sampling.window;
    let mut out = Vec::new();
    let mut u = 0.0;
    let (_, mut v, _) = branch.eval(u);
    let mut h = h_max;
    while out.len() < cap {
        let mut next = u + dir * h;
        if next.abs() > U_MAX {
            break;
        }
        let (mut th, mut nv, mut off) = branch.eval(next);
        while dist(v, nv) > max_step && h > 1e-9 {
            h *= 0.5;
            next = u + dir * h;
            (th, nv, off) = branch.eval(next);
        }
        let step = dist(v, nv);
        out.push(Sample {
            u: next,
            theta: th,
            v: nv,
            cusp: false,
        });
        u = next;
        v = nv;
        if branch.done(v, off, dir, sampling.window) {
            break;
        }
        if step < 0.25 * max_step {
            h = (2.0 * h).min(h_max);
        }
    }
    out
}

fn trace_branch(
    rows: &[[f64; 2]],
    interval: &ParamInterval,
    cusp_thetas: &[f64],
    sampling: &Sampling,
) -> Vec<ContourArc> {
    let branch = Branch::new(rows, interval);
    let cap = sampling.max_points / 2;
    let mut samples: Vec<Sample> = march(&branch, sampling, -1.0, cap);
    samples.reverse();
    let (th0, v0, _) = branch.eval(0.0);
    samples.push(Sample {
        u: 0.0,
        theta: th0,
        v: v0,
        cusp: false,
    });
    samples.extend(march(&branch, sampling, 1.0, cap));

    let l = interval.length;
    for &c in cusp_thetas {
        let s = (c - interval.start.theta).rem_euclid(std::f64::consts::PI);
        if s <= 0.0 || s >= l {
            continue;
        }
        let u = (s / (l - s)).ln();
        let (theta, v, _) = branch.eval(u);
        let pos = samples.partition_point(|p| p.u < u);
        if pos > 0 && pos < samples.len() {
            samples.insert(
                pos,
                Sample {
                    u,
                    theta,
                    v,
                    cusp: true,
                },
            );
        }
    }

    // smooth sub-arcs, split at cusps
    let mut smooth: Vec<(Vec<&Sample>, bool, bool)> = Vec::new();
    let mut current: Vec<&Sample> = Vec::new();
    let mut starts_at_cusp = false;
    for s in &samples {
        current.push(s);
        if s.cusp {
            smooth.push((std::mem::take(&mut current), starts_at_cusp, true));
            current.push(s);
            starts_at_cusp = true;
        }
    }
    smooth.push((current, starts_at_cusp, false));

    let mut arcs = Vec::new();
    for (sub_arc, (pts, sc, ec)) in smooth.into_iter().enumerate() {
        for (piece, clipped_start, clipped_end) in clip_polyline(&pts, sampling.window) {
            if piece.len() < 2 {
                continue;
            }
            arcs.push(ContourArc {
                branch: interval.index,
                sub_arc,
                theta_range: (piece[0].theta, piece[piece.len() - 1].theta),
                sign: interval.sign.clone(),
                points: piece,
                start_cusp: sc && !clipped_start,
                end_cusp: ec && !clipped_end,
            });
        }
    }
    arcs
}

/// Liang-Barsky clip of one segment; returns the parameter range kept.
fn clip_segment(p: [f64; 2], q: [f64; 2], w: f64) -> Option<(f64, f64)> {
    let d = [q[0] - p[0], q[1] - p[1]];
    let mut t0: f64 = 0.0;
    let mut t1: f64 = 1.0;
    for k in 0..2 {
        for (pk, qk) in [(-d[k], p[k] + w), (d[k], w - p[k])] {
            if pk == 0.0 {
                if qk < 0.0 {
                    return None;
                }
            } else {
                let r = qk / pk;
                if pk < 0.0 {
                    t0 = t0.max(r);
                } else {
                    t1 = t1.min(r);
                }
            }
        }
    }
    (t0 <= t1).then_some((t0, t1))
}

fn lerp(a: &Sample, b: &Sample, s: f64) -> ContourPoint {
    ContourPoint {
        theta: a.theta + s * (b.theta - a.theta),
        v: [
            a.v[0] + s * (b.v[0] - a.v[0]),
            a.v[1] + s * (b.v[1] - a.v[1]),
        ],
    }
}

/// Pieces of a polyline inside `[-w, w]²`, each with flags telling whether
/// its start / end were produced by clipping.
fn clip_polyline(pts: &[&Sample], w: f64) -> Vec<(Vec<ContourPoint>, bool, bool)> {
    let mut out = Vec::new();
    let mut cur: Vec<ContourPoint> = Vec::new();
    let mut cur_clipped_start = false;
    if pts.len() == 1 && !outside(pts[0].v, w) {
        return vec![];
    }
    for seg in pts.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        match clip_segment(a.v, b.v, w) {
            None => {
                if !cur.is_empty() {
                    out.push((std::mem::take(&mut cur), cur_clipped_start, true));
                }
            }
            Some((t0, t1)) => {
                if cur.is_empty() {
                    cur_clipped_start = t0 > 0.0;
                    cur.push(if t0 > 0.0 {
                        lerp(a, b, t0)
                    } else {
                        lerp(a, b, 0.0)
                    });
                }
                cur.push(if t1 < 1.0 {
                    lerp(a, b, t1)
                } else {
                    lerp(a, b, 1.0)
                });
                if t1 < 1.0 {
                    out.push((std::mem::take(&mut cur), cur_clipped_start, true));
                }
            }
        }
    }
    if !cur.is_empty() {
        let last_inside = !outside(pts[pts.len() - 1].v, w);
        out.push((cur, cur_clipped_start, !last_inside));
    }
    out
}

fn trace_intervals(
    basis: &NullBasis,
    keep: impl Fn(&ParamInterval) -> bool,
    sampling: &Sampling,
) -> Result<Vec<ContourArc>> {
    let rows = basis.rows2()?;
    let intervals: Vec<ParamInterval> = parameter_intervals(basis)?
        .into_iter()
        .filter(|iv| keep(iv))
        .collect();
    if intervals.is_empty() {
        return Ok(vec![]);
    }
    let cusps = find_cusps(basis, 1e-10)?;
    let per_branch: Vec<Vec<ContourArc>> = intervals
        .par_iter()
        .map(|iv| trace_branch(&rows, iv, &cusps.thetas, sampling))
        .collect();
    Ok(per_branch.into_iter().flatten().collect())
}

/// Clipped polyline pieces of `Γ_σ`; empty when `σ` is not attained.
pub fn trace_signed_contour(
    basis: &NullBasis,
    sign: &SignClass,
    sampling: &Sampling,
) -> Result<Vec<ContourArc>> {
    trace_intervals(basis, |iv| &iv.sign == sign, sampling)
}

/// Clipped polyline pieces of the whole contour `Γ`.
pub fn trace_all(basis: &NullBasis, sampling: &Sampling) -> Result<Vec<ContourArc>> {
    trace_intervals(basis, |_| true, sampling)
}
