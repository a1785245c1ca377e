//! Numerical topology of the real zero set of an exponential sum in one or
//! two variables.
//!
//! Used as an oracle: coefficient vectors sampled from one chamber should
//! give zero sets with the same [`TopologySignature`].

mod marching;

pub use marching::{march, GridBox, MarchResult, ZeroComponent};

use log::warn;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::chambers::ChamberCount;
use crate::completion::face_lattice;
use crate::error::{Error, Result};
use crate::sign::SignClass;
use crate::spectrum::{NullBasis, Spectrum};

/// Default marching-squares resolution per axis.
pub const DEFAULT_GRID: usize = 1024;
/// Resolution used when the default grid and its refinement disagree.
pub const FALLBACK_GRID: usize = 4096;
/// Compactness threshold as a fraction of the diameter of `P`.
pub const DEFAULT_DELTA_FRACTION: f64 = 5e-3;
/// A component leaving the box must come this close (relative to `diam P`)
/// to `∂P`, otherwise the box is enlarged.
pub const REACH_FRACTION: f64 = 1e-3;
const MAX_BOX_DOUBLINGS: usize = 5;
const UNIVARIATE_GRID: usize = 4096;

/// `g(y) = Σ_j c_j e^{a_j·y}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSum {
    spectrum: Spectrum,
    coefficients: Vec<f64>,
}

impl ExpSum {
    pub fn new(spectrum: Spectrum, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != spectrum.t() {
            return Err(Error::InvalidInput(format!(
                "{} coefficients for {} exponents",
                coefficients.len(),
                spectrum.t()
            )));
        }
        if coefficients.iter().any(|c| *c == 0.0 || !c.is_finite()) {
            return Err(Error::InvalidInput(
                "coefficients must be finite and nonzero".into(),
            ));
        }
        Ok(Self {
            spectrum,
            coefficients,
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Canonical sign class of the coefficients.
    pub fn sign(&self) -> SignClass {
        SignClass::of(&self.coefficients).expect("coefficients are nonzero")
    }

    /// `g(y) e^{-m}` with `m = max_j a_j·y`: same sign as `g(y)`, never overflows.
    pub fn eval_scaled(&self, y: &[f64]) -> f64 {
        self.scaled(y).0
    }

    fn scaled(&self, y: &[f64]) -> (f64, f64) {
        let e = self.spectrum.exponents_at(y);
        let m = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let s = self
            .coefficients
            .iter()
            .zip(&e)
            .map(|(c, x)| c * (x - m).exp())
            .sum();
        (s, m)
    }
}

/// `g(y)`, evaluated as `e^m · Σ c_j e^{a_j·y - m}`.
pub fn eval_exp_sum(g: &ExpSum, y: &[f64]) -> f64 {
    let (s, m) = g.scaled(y);
    if s == 0.0 {
        return 0.0;
    }
    s * m.exp()
}

/// `Σ_j e^{a_j·y} a_j / Σ_j e^{a_j·y}`, a point of the interior of `Conv{a_j}`.
pub fn moment_map(spec: &Spectrum, y: &[f64]) -> Vec<f64> {
    let e = spec.exponents_at(y);
    let m = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = e.iter().map(|x| (x - m).exp()).collect();
    let total: f64 = w.iter().sum();
    (0..spec.n())
        .map(|i| {
            w.iter()
                .enumerate()
                .map(|(j, wj)| wj * spec.matrix()[(i, j)])
                .sum::<f64>()
                / total
        })
        .collect()
}

/// The Newton polytope `P = Conv{a_j}` as an intersection of half-planes.
#[derive(Debug, Clone)]
pub struct MomentPolytope {
    /// `(w, h)` with `w` a unit inner facet normal and `P ⊂ {x : w·x ≥ h}`.
    facets: Vec<(Vec<f64>, f64)>,
    pub diameter: f64,
}

impl MomentPolytope {
    pub fn new(spec: &Spectrum) -> Result<Self> {
        let n = spec.n();
        let cols = spec.columns();
        let facets = if n == 1 {
            let lo = cols.iter().map(|c| c[0]).fold(f64::INFINITY, f64::min);
            let hi = cols.iter().map(|c| c[0]).fold(f64::NEG_INFINITY, f64::max);
            vec![(vec![1.0], lo), (vec![-1.0], -hi)]
        } else {
            let faces = face_lattice(spec)?;
            let top = faces.iter().map(|f| f.dim).max().unwrap_or(0);
            if top + 1 != n {
                return Err(Error::InvalidInput(format!(
                    "moment map needs a full-dimensional spectrum, affine dimension is {}",
                    top + 1
                )));
            }
            faces
                .iter()
                .filter(|f| f.dim == top)
                .map(|f| {
                    let h = cols
                        .iter()
                        .map(|a| dot(a, &f.inner_normal))
                        .fold(f64::INFINITY, f64::min);
                    (f.inner_normal.clone(), h)
                })
                .collect()
        };
        let mut diameter: f64 = 0.0;
        for a in &cols {
            for b in &cols {
                diameter = diameter.max(
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| (x - y).powi(2))
                        .sum::<f64>()
                        .sqrt(),
                );
            }
        }
        Ok(Self { facets, diameter })
    }

    /// Distance from an interior point to the boundary.
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|(w, h)| dot(w, x) - h)
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the facet closest to `x`.
    pub fn nearest_facet(&self, x: &[f64]) -> usize {
        self.facets
            .iter()
            .enumerate()
            .min_by(|a, b| (dot(&a.1 .0, x) - a.1 .1).total_cmp(&(dot(&b.1 .0, x) - b.1 .1)))
            .map_or(0, |(k, _)| k)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coarse isotopy data of `Z_R(g)`: component counts, plus for every
/// non-compact component the facets of `P` its ends approach under the
/// moment map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TopologySignature {
    pub components: usize,
    pub compact: usize,
    /// Sorted facet indices per non-compact component, components sorted.
    pub ends: Vec<Vec<usize>>,
}

impl TopologySignature {
    pub fn counts(&self) -> (usize, usize) {
        (self.components, self.compact)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignatureOptions {
    pub grid: usize,
    /// Compare against the signature at twice the grid resolution.
    pub check_refinement: bool,
    pub delta_fraction: f64,
}

impl Default for SignatureOptions {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            check_refinement: true,
            delta_fraction: DEFAULT_DELTA_FRACTION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignatureReport {
    pub signature: TopologySignature,
    /// Box centre and half-width in `y`-space (empty for one variable).
    pub center: Vec<f64>,
    pub half_width: f64,
    /// Resolution at which the reported signature was computed.
    pub resolution: usize,
    /// The signature was confirmed at twice `resolution`.
    pub refinement_checked: bool,
}

/// Centre of the box: the `y` that makes all terms of `g` as comparable as
/// possible (least squares in `log|c_j| + a_j·y + s`), and the spread of
/// the remaining residuals. Both are unchanged by moving `c` along the
/// torus fibre.
fn tropical_center(g: &ExpSum) -> (Vec<f64>, f64) {
    let spec = g.spectrum();
    let (n, t) = (spec.n(), spec.t());
    let m = DMatrix::from_fn(
        t,
        n + 1,
        |j, k| if k == n { 1.0 } else { spec.matrix()[(k, j)] },
    );
    let rhs = DVector::from_iterator(t, g.coefficients().iter().map(|c| -c.abs().ln()));
    let sol = m
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .expect("SVD with both factors");
    let residual = &m * &sol - rhs;
    let y = sol.rows(0, n).iter().copied().collect();
    (y, residual.amax())
}

/// Half-width of the first box tried.
fn initial_half_width(g: &ExpSum, spread: f64) -> f64 {
    let cols = g.spectrum().columns();
    let mut edge = f64::INFINITY;
    for (i, a) in cols.iter().enumerate() {
        for b in &cols[i + 1..] {
            edge = edge.min(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).powi(2))
                    .sum::<f64>()
                    .sqrt(),
            );
        }
    }
    let t = cols.len() as f64;
    (2.0 * (spread + t.ln()) / edge + 4.0).max(4.0)
}

fn signature_at(
    g: &ExpSum,
    poly: &MomentPolytope,
    grid: GridBox,
    delta: f64,
) -> (TopologySignature, bool) {
    let spec = g.spectrum();
    let result = march(g, grid, false, |p| {
        poly.boundary_distance(&moment_map(spec, &p))
    });
    classify(&result, poly, spec, delta)
}

/// Signature plus whether every component leaving the box gets within
/// [`REACH_FRACTION`] of `∂P`.
fn classify(
    result: &MarchResult,
    poly: &MomentPolytope,
    spec: &Spectrum,
    delta: f64,
) -> (TopologySignature, bool) {
    let reach = REACH_FRACTION * poly.diameter;
    let mut compact = 0;
    let mut ends = Vec::new();
    let mut reached = true;
    for c in &result.components {
        if c.touches_box {
            reached &= c.moment_clearance < reach;
            let mut facets: Vec<usize> = c
                .exits
                .iter()
                .map(|p| poly.nearest_facet(&moment_map(spec, p)))
                .collect();
            facets.sort_unstable();
            ends.push(facets);
        } else if c.moment_clearance >= delta {
            compact += 1;
        }
    }
    ends.sort();
    (
        TopologySignature {
            components: result.components.len(),
            compact,
            ends,
        },
        reached,
    )
}

/// Topology signature of `Z_R(g)` for one or two variables.
///
/// For two variables the box is centred by [`tropical_center`] and doubled
/// until the signature is stable under doubling and every component that
/// leaves the box reaches `∂P` under the moment map. A component is
/// compact iff its moment-map image stays at least `δ` from `∂P`.
pub fn topology_signature(g: &ExpSum, opts: &SignatureOptions) -> Result<SignatureReport> {
    match g.spectrum().n() {
        1 => {
            let rc = univariate_root_count(g)?;
            Ok(SignatureReport {
                signature: TopologySignature {
                    components: rc.count,
                    compact: rc.count,
                    ends: Vec::new(),
                },
                center: Vec::new(),
                half_width: f64::INFINITY,
                resolution: UNIVARIATE_GRID,
                refinement_checked: true,
            })
        }
        2 => bivariate_signature(g, opts),
        n => Err(Error::InvalidInput(format!(
            "zero-set topology is implemented for one or two variables, got {n}"
        ))),
    }
}

fn bivariate_signature(g: &ExpSum, opts: &SignatureOptions) -> Result<SignatureReport> {
    let poly = MomentPolytope::new(g.spectrum())?;
    let delta = opts.delta_fraction * poly.diameter;
    let (c, spread) = tropical_center(g);
    let center = [c[0], c[1]];
    let mut half_width = initial_half_width(g, spread);
    let grid_at = |half_width: f64, resolution: usize| GridBox {
        center,
        half_width,
        resolution,
    };

    let (mut sig, mut reached) = signature_at(g, &poly, grid_at(half_width, opts.grid), delta);
    for doubling in 0..=MAX_BOX_DOUBLINGS {
        let (bigger, bigger_reached) =
            signature_at(g, &poly, grid_at(2.0 * half_width, opts.grid), delta);
        if bigger == sig && reached {
            break;
        }
        if doubling == MAX_BOX_DOUBLINGS {
            warn!("zero-set box did not stabilize at half-width {half_width}");
            break;
        }
        half_width *= 2.0;
        sig = bigger;
        reached = bigger_reached;
    }

    let mut report = SignatureReport {
        signature: sig.clone(),
        center: c,
        half_width,
        resolution: opts.grid,
        refinement_checked: false,
    };
    if !opts.check_refinement {
        return Ok(report);
    }
    let (fine, _) = signature_at(g, &poly, grid_at(half_width, 2 * opts.grid), delta);
    if fine == sig {
        report.refinement_checked = true;
        return Ok(report);
    }
    if 2 * opts.grid < FALLBACK_GRID {
        let (fallback, _) = signature_at(g, &poly, grid_at(half_width, FALLBACK_GRID), delta);
        if fallback == fine {
            warn!(
                "zero-set signature changed from {sig:?} to {fine:?} under refinement; using {FALLBACK_GRID}"
            );
            report.signature = fallback;
            report.resolution = FALLBACK_GRID;
            report.refinement_checked = true;
            return Ok(report);
        }
    }
    Err(Error::ResolutionWarning {
        coarse: sig.counts(),
        fine: fine.counts(),
    })
}

/// Segments of `Z_R(g)` in the box chosen by [`topology_signature`].
pub fn zero_set_segments(g: &ExpSum, report: &SignatureReport) -> Vec<[[f64; 2]; 2]> {
    if report.center.len() != 2 {
        return Vec::new();
    }
    let grid = GridBox {
        center: [report.center[0], report.center[1]],
        half_width: report.half_width,
        resolution: report.resolution,
    };
    march(g, grid, true, |_| 0.0).segments
}

/// Real roots of a univariate exponential sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootCount {
    pub count: usize,
    /// Sign alternations of the coefficients ordered by exponent.
    pub descartes_bound: usize,
    pub roots: Vec<f64>,
}

/// Counts real roots by bracketing sign changes on a grid over an interval
/// that provably contains all roots, then bisecting each bracket.
pub fn univariate_root_count(g: &ExpSum) -> Result<RootCount> {
    let spec = g.spectrum();
    if spec.n() != 1 {
        return Err(Error::InvalidInput(format!(
            "univariate root count needs one variable, got {}",
            spec.n()
        )));
    }
    let mut terms: Vec<(f64, f64)> = (0..spec.t())
        .map(|j| (spec.matrix()[(0, j)], g.coefficients()[j]))
        .collect();
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let descartes_bound = terms
        .windows(2)
        .filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .count();
    if terms.len() == 1 {
        return Ok(RootCount {
            count: 0,
            descartes_bound,
            roots: Vec::new(),
        });
    }

    // Outside [lo, hi] the extreme term outweighs all others together.
    let k = (terms.len() - 1) as f64;
    let (a_lo, c_lo) = terms[0];
    let (a_hi, c_hi) = terms[terms.len() - 1];
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    for &(a, c) in &terms[1..] {
        lo = lo.min((c_lo.abs() / (k * c.abs())).ln() / (a - a_lo));
    }
    for &(a, c) in &terms[..terms.len() - 1] {
        hi = hi.max((k * c.abs() / c_hi.abs()).ln() / (a_hi - a));
    }
    let (lo, hi) = (lo - 1.0, hi + 1.0);

    let scan = |n: usize| -> Vec<f64> {
        let f = |y: f64| g.eval_scaled(&[y]);
        let mut roots = Vec::new();
        let mut prev = (lo, f(lo));
        for i in 1..=n {
            let y = lo + (hi - lo) * i as f64 / n as f64;
            let v = f(y);
            if (prev.1 >= 0.0) != (v >= 0.0) {
                let (mut a, mut b, fa) = (prev.0, y, prev.1);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if (f(mid) >= 0.0) == (fa >= 0.0) {
                        a = mid;
                    } else {
                        b = mid;
                    }
                    if b - a < 1e-13 * (1.0 + mid.abs()) {
                        break;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            prev = (y, v);
        }
        roots
    };
    let roots = scan(UNIVARIATE_GRID);
    let fine = scan(2 * UNIVARIATE_GRID);
    if fine.len() != roots.len() {
        return Err(Error::ResolutionWarning {
            coarse: (roots.len(), roots.len()),
            fine: (fine.len(), fine.len()),
        });
    }
    Ok(RootCount {
        count: roots.len(),
        descartes_bound,
        roots,
    })
}

/// Coefficients of `x^0, …, x^{t-1}` for a polynomial with exactly `k`
/// positive roots (at `1, …, k`) and `t - 1 - k` negative ones, so that
/// `Σ c_j e^{j y}` has exactly `k` real roots.
pub fn attaining_coefficients(t: usize, k: usize) -> Result<Vec<f64>> {
    if t == 0 || k >= t {
        return Err(Error::InvalidInput(format!("need k < t, got k={k}, t={t}")));
    }
    let mut roots: Vec<f64> = (1..=k).map(|i| i as f64).collect();
    roots.extend((0..t - 1 - k).map(|i| -(i as f64 + 1.5)));
    for attempt in 0..16 {
        // nudge the negative roots if a coefficient cancels
        let shift = attempt as f64 * 0.137;
        let mut c = vec![1.0];
        for &r in &roots {
            let r = if r < 0.0 { r - shift } else { r };
            let mut next = vec![0.0; c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= r * ci;
            }
            c = next;
        }
        let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if c.iter().all(|x| x.abs() > 1e-9 * scale) {
            return Ok(c);
        }
    }
    Err(Error::InvalidInput(
        "could not avoid vanishing coefficients".into(),
    ))
}

/// `c = σ ⊙ exp(u)` with `u` the minimum-norm solution of `u B = v`.
pub fn lift_coefficients(basis: &NullBasis, sign: &SignClass, v: &[f64]) -> Vec<f64> {
    let u: Vec<f64> = basis.lift(v).iter().map(|x| x.exp()).collect();
    sign.apply(&u)
}

/// Moves `c` along its torus fibre: `log|c|` gains `Σ_k s_k Â_k`. The
/// first entry of `s` scales `g`, the rest translate `y`.
pub fn fiber_move(spec: &Spectrum, c: &[f64], s: &[f64]) -> Vec<f64> {
    let lifted = spec.lifted();
    let m = lifted.matrix();
    c.iter()
        .enumerate()
        .map(|(j, cj)| {
            let shift: f64 = s.iter().enumerate().map(|(k, sk)| sk * m[(k, j)]).sum();
            cj * shift.exp()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChamberSamples {
    pub chamber: usize,
    pub points: Vec<[f64; 2]>,
    pub signatures: Vec<TopologySignature>,
}

impl ChamberSamples {
    pub fn is_constant(&self) -> bool {
        self.signatures.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstancyReport {
    pub sign: SignClass,
    pub chambers: Vec<ChamberSamples>,
}

impl ConstancyReport {
    /// Number of different signatures across chambers.
    pub fn distinct_signatures(&self) -> usize {
        let mut all: Vec<TopologySignature> = self
            .chambers
            .iter()
            .filter_map(|c| c.signatures.first().cloned())
            .collect();
        all.sort();
        all.dedup();
        all.len()
    }
}

/// `k` points of a chamber: its representative and points on a circle
/// around it that stays clear of the curves and inside the window.
pub fn chamber_sample_points(count: &ChamberCount, chamber: usize, k: usize) -> Vec<[f64; 2]> {
    let ch = &count.chambers[chamber];
    let p = ch.representative;
    let to_window = (count.window - p[0].abs()).min(count.window - p[1].abs());
    let radius = 0.5 * ch.clearance.min(to_window);
    (0..k)
        .map(|i| {
            if i == 0 {
                return p;
            }
            let a = std::f64::consts::TAU * (i - 1) as f64 / (k - 1) as f64;
            [p[0] + radius * a.cos(), p[1] + radius * a.sin()]
        })
        .collect()
}

/// Lifts `k` samples from every chamber and checks that their zero-set
/// signatures agree within each chamber.
pub fn chamber_constancy_check(
    spec: &Spectrum,
    basis: &NullBasis,
    sign: &SignClass,
    count: &ChamberCount,
    k: usize,
    opts: &SignatureOptions,
) -> Result<ConstancyReport> {
    let mut chambers = Vec::new();
    for ch in &count.chambers {
        let points = chamber_sample_points(count, ch.id, k.max(1));
        let signatures = points
            .iter()
            .map(|v| {
                let g = ExpSum::new(spec.clone(), lift_coefficients(basis, sign, v))?;
                Ok(topology_signature(&g, opts)?.signature)
            })
            .collect::<Result<Vec<_>>>()?;
        let samples = ChamberSamples {
            chamber: ch.id,
            points,
            signatures,
        };
        if let Some(i) = samples
            .signatures
            .iter()
            .position(|s| *s != samples.signatures[0])
        {
            return Err(Error::ConstancyViolation {
                chamber: ch.id,
                first: 0,
                second: i,
            });
        }
        chambers.push(samples);
    }
    Ok(ConstancyReport {
        sign: sign.clone(),
        chambers,
    })
}
