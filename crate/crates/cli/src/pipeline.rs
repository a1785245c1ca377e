//! Orchestration of the `contour`, `chambers` and `verify` commands.

use rayon::prelude::*;
use serde::Serialize;

use xi_core::chambers::{
    chamber_bound, count_chambers, dual_count, hypothesis_check, isotopy_bound, korben_bound,
    locate_chamber, steiner_regions, Chamber, DualCount, KorbenBound, RASTER_RESOLUTION,
};
use xi_core::completion::{completed_signed_contour, non_simplicial_faces, CompletedContour};
use xi_core::contour::{
    attained_classes, breakpoint_groups, component_bound, find_cusps, gauss_sample_angles,
    r_polynomial_degree_check, verify_gauss_normal, BreakGroup, Sampling,
};
use xi_core::parametrization::{circuit_membership_for, CircuitTest};
use xi_core::spectrum::{analyze, SpectrumReport};
use xi_core::zeroset::{
    chamber_constancy_check, topology_signature, ConstancyReport, ExpSum, SignatureOptions,
    TopologySignature,
};
use xi_core::{Error, NullBasis, Result, SignClass, Spectrum};

use crate::config::JobConfig;

/// A parsed config with its spectrum analysis and nullspace basis.
#[derive(Debug, Clone)]
pub struct Case {
    pub cfg: JobConfig,
    pub report: SpectrumReport,
    pub basis: NullBasis,
}

impl Case {
    /// Set `corrupt_basis` to perturb `B` after it is computed, which
    /// `verify` must detect.
    pub fn prepare(cfg: JobConfig, corrupt_basis: bool) -> Result<Self> {
        let (report, mut basis) = analyze(&cfg.spectrum, cfg.tolerances.rank)?;
        if corrupt_basis && basis.dim() > 0 {
            let mut m = basis.matrix().clone();
            m[(0, 0)] += 1e-3;
            basis = NullBasis::from_matrix(m);
        }
        Ok(Self { cfg, report, basis })
    }

    fn spectrum(&self) -> &Spectrum {
        &self.cfg.spectrum
    }

    fn basis_rows(&self) -> Vec<Vec<f64>> {
        (0..self.basis.t()).map(|i| self.basis.row(i)).collect()
    }

    fn sampling(&self, window: f64) -> Sampling {
        self.cfg.sampling.with_window(window)
    }

    fn planar(&self) -> bool {
        self.basis.dim() == 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineSummary {
    /// 1-based column indices of the face.
    pub columns: Vec<usize>,
    pub normal: [f64; 2],
    pub offset: f64,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerSummary {
    pub sign: SignClass,
    pub attained: bool,
    pub arcs: usize,
    pub points: usize,
    pub cusps: usize,
    pub lines: Vec<LineSummary>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourReport {
    pub case: String,
    pub spectrum: SpectrumReport,
    pub basis: Vec<Vec<f64>>,
    pub nullspace_residual: f64,
    pub reduced_dimension: usize,
    pub window: f64,
    /// Cusp angles on `[0, π)`.
    pub cusps: Vec<f64>,
    pub breakpoints: Vec<BreakGroup>,
    pub layers: Vec<LayerSummary>,
}

pub struct ContourOutput {
    pub report: ContourReport,
    /// One completed contour per requested sign class, sorted by class.
    pub contours: Vec<CompletedContour>,
}

fn cusp_count(contour: &CompletedContour) -> usize {
    contour.arcs.iter().filter(|a| a.end_cusp).count()
}

fn layer_summary(contour: &CompletedContour, attained: bool) -> LayerSummary {
    LayerSummary {
        sign: contour.sign.clone(),
        attained,
        arcs: contour.arcs.len(),
        points: contour.arcs.iter().map(|a| a.points.len()).sum(),
        cusps: cusp_count(contour),
        lines: contour
            .lines
            .iter()
            .map(|l| LineSummary {
                columns: l.members.iter().map(|m| m + 1).collect(),
                normal: l.normal,
                offset: l.offset,
                admissible: l.admissible,
            })
            .collect(),
        warnings: contour.warnings.clone(),
    }
}

/// Completed contours for every requested sign class, traced to `window`.
fn contours(case: &Case, window: f64) -> Result<Vec<CompletedContour>> {
    let sampling = case.sampling(window);
    case.cfg
        .sign_classes()
        .par_iter()
        .map(|s| completed_signed_contour(case.spectrum(), &case.basis, s, &sampling))
        .collect()
}

pub fn run_contour(case: &Case, window: f64) -> Result<ContourOutput> {
    let residual = case.basis.residual(&case.spectrum().lifted());
    let mut report = ContourReport {
        case: case.cfg.name.clone(),
        spectrum: case.report.clone(),
        basis: case.basis_rows(),
        nullspace_residual: residual,
        reduced_dimension: case.basis.dim(),
        window,
        cusps: Vec::new(),
        breakpoints: Vec::new(),
        layers: Vec::new(),
    };
    if !case.planar() {
        return Ok(ContourOutput {
            report,
            contours: Vec::new(),
        });
    }
    report.cusps = find_cusps(&case.basis, case.cfg.tolerances.rank)?.thetas;
    report.breakpoints = breakpoint_groups(&case.basis)?;
    let attained = attained_classes(&case.basis)?;
    let contours = contours(case, window)?;
    report.layers = contours
        .iter()
        .map(|c| layer_summary(c, attained.contains(&c.sign)))
        .collect();
    Ok(ContourOutput { report, contours })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisSummary {
    pub pairs: usize,
    pub max_crossings: usize,
    pub multiple_crossings: usize,
    pub cusp_crossings: usize,
    pub near_tangent_contacts: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleLocation {
    pub name: String,
    pub point: [f64; 2],
    pub chamber: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignedChambers {
    pub sign: SignClass,
    pub attained: bool,
    pub count: Option<usize>,
    pub bounded: Option<usize>,
    pub slivers: usize,
    pub error: Option<String>,
    pub chambers: Vec<Chamber>,
    pub dual: Option<DualCount>,
    pub hypothesis: HypothesisSummary,
    pub cusps: usize,
    pub korben: KorbenBound,
    pub samples: Vec<SampleLocation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundComparison {
    pub n: usize,
    pub chamber_bound: u64,
    pub isotopy_bound: u64,
    pub max_count: usize,
    /// Reported, not asserted: the pentagon exceeds the chamber bound.
    pub within_chamber_bound: bool,
    pub within_isotopy_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChambersReport {
    pub case: String,
    pub window: f64,
    pub reduced_dimension: usize,
    pub signs: Vec<SignedChambers>,
    pub bounds: Option<BoundComparison>,
}

/// `(Log|c|) B` of a sample, with its sign class.
fn sample_point(case: &Case, coefficients: &[f64]) -> Result<(SignClass, [f64; 2])> {
    let v = case.basis.reduce_log_abs(coefficients);
    Ok((SignClass::of(coefficients)?, [v[0], v[1]]))
}

fn signed_chambers(
    case: &Case,
    contour: &CompletedContour,
    window: f64,
    attained: bool,
) -> SignedChambers {
    let hyp = hypothesis_check(&contour.arcs, window);
    let cusps = cusp_count(contour);
    let mut out = SignedChambers {
        sign: contour.sign.clone(),
        attained,
        count: None,
        bounded: None,
        slivers: 0,
        error: None,
        chambers: Vec::new(),
        dual: None,
        hypothesis: HypothesisSummary {
            pairs: hyp.pairs.len(),
            max_crossings: hyp.pairs.iter().map(|p| p.intersections).max().unwrap_or(0),
            multiple_crossings: hyp.multiple_crossings,
            cusp_crossings: hyp.cusp_crossings,
            near_tangent_contacts: hyp.pairs.iter().map(|p| p.near_tangent).sum(),
            holds: hyp.holds(),
        },
        cusps,
        korben: korben_bound(cusps as u64),
        samples: Vec::new(),
    };
    match count_chambers(contour, window) {
        Ok(count) => {
            for s in &case.cfg.samples {
                if let Ok((sign, point)) = sample_point(case, &s.coefficients) {
                    if sign == contour.sign {
                        out.samples.push(SampleLocation {
                            name: s.name.clone(),
                            point,
                            chamber: locate_chamber(contour, &count, point),
                        });
                    }
                }
            }
            out.count = Some(count.count);
            out.bounded = Some(count.bounded);
            out.slivers = count.slivers;
            out.chambers = count.chambers;
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    match dual_count(contour, window, RASTER_RESOLUTION) {
        Ok(d) => out.dual = Some(d),
        Err(e) => out.error = out.error.take().or(Some(e.to_string())),
    }
    out
}

pub struct ChambersOutput {
    pub report: ChambersReport,
    pub contours: Vec<CompletedContour>,
}

pub fn run_chambers(case: &Case, window: f64) -> Result<ChambersOutput> {
    let mut report = ChambersReport {
        case: case.cfg.name.clone(),
        window,
        reduced_dimension: case.basis.dim(),
        signs: Vec::new(),
        bounds: None,
    };
    if !case.planar() {
        return Ok(ChambersOutput {
            report,
            contours: Vec::new(),
        });
    }
    let attained = attained_classes(&case.basis)?;
    // traced to twice the window for the stability check
    let contours = contours(case, 2.0 * window)?;
    report.signs = contours
        .par_iter()
        .map(|c| signed_chambers(case, c, window, attained.contains(&c.sign)))
        .collect();
    let n = case.spectrum().n();
    let max_count = report
        .signs
        .iter()
        .filter_map(|s| s.count)
        .max()
        .unwrap_or(1);
    report.bounds = Some(BoundComparison {
        n,
        chamber_bound: chamber_bound(n as u64),
        isotopy_bound: isotopy_bound(n as u64),
        max_count,
        within_chamber_bound: max_count as u64 <= chamber_bound(n as u64),
        within_isotopy_bound: max_count as u64 <= isotopy_bound(n as u64),
    });
    Ok(ChambersOutput { report, contours })
}

/// Every bound formula for the given parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsTable {
    pub n: usize,
    pub t: usize,
    pub d: usize,
    pub isotopy_bound: u64,
    pub chamber_bound: u64,
    /// Cusps of a planar contour are at most `t - 3`.
    pub max_cusps: usize,
    pub korben: KorbenBound,
    /// Non-simplicial faces are at most `t - d - 1`; each adds a line.
    pub max_facet_lines: usize,
    pub steiner: u64,
    pub degree_bound: usize,
    pub component_bound: Option<String>,
}

pub fn bounds_table(n: usize, t: usize, d: usize) -> BoundsTable {
    let max_cusps = t.saturating_sub(3);
    let max_facet_lines = t.saturating_sub(d + 1);
    BoundsTable {
        n,
        t,
        d,
        isotopy_bound: isotopy_bound(n as u64),
        chamber_bound: chamber_bound(n as u64),
        max_cusps,
        korben: korben_bound(max_cusps as u64),
        max_facet_lines,
        steiner: steiner_regions(max_facet_lines as u64),
        degree_bound: t.saturating_sub(d + 1) * t.saturating_sub(1),
        component_bound: component_bound(t, d).map(|b| b.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported, not asserted.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub case: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub samples: Vec<SampleReport>,
    pub constancy: Vec<ConstancyReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub name: String,
    pub sign: SignClass,
    pub signature: Option<TopologySignature>,
    pub circuit: Option<CircuitTest>,
    pub error: Option<String>,
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        });
    }

    fn info(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            status: Status::Info,
            detail: detail.into(),
        });
    }

    fn error(&mut self, name: impl Into<String>, e: &Error) {
        self.push(name, false, e.to_string());
    }
}

pub fn run_verify(case: &Case, window: f64) -> VerifyReport {
    let cfg = &case.cfg;
    let tol = cfg.tolerances;
    let mut checks = Checks(Vec::new());
    let residual = case.basis.residual(&case.spectrum().lifted());
    checks.push(
        "nullspace residual",
        residual <= tol.nullspace && case.basis.is_orthonormal(),
        format!(
            "max |Â B| = {residual:.3e} (bound {:.0e}), orthonormal: {}",
            tol.nullspace,
            case.basis.is_orthonormal()
        ),
    );
    checks.info(
        "spectrum",
        format!(
            "n = {}, t = {}, d = {}, pyramidal: {}, reduced dimension {}",
            case.report.n,
            case.report.t,
            case.report.d,
            case.report.pyramidal,
            case.basis.dim()
        ),
    );

    match cfg.non_defective {
        Some(true) => checks.push(
            "non-defective assertion",
            case.report.plausibly_non_defective,
            format!(
                "asserted; necessary conditions (not pyramidal, t - d >= 2) hold: {}",
                case.report.plausibly_non_defective
            ),
        ),
        Some(false) => checks.info("non-defective assertion", "asserted defective"),
        None if !case.report.plausibly_non_defective => checks.info(
            "non-defective assertion",
            "warning: necessary conditions for non-defectiveness fail",
        ),
        None => {}
    }

    let mut samples = Vec::new();
    let mut constancy = Vec::new();

    if case.basis.dim() == 1 {
        for s in &cfg.samples {
            let result = circuit_membership_for(&s.coefficients, &case.basis, tol.circuit);
            match (&result, s.on_discriminant) {
                (Ok(ct), Some(expected)) => checks.push(
                    format!("circuit test `{}`", s.name),
                    ct.on_discriminant == expected,
                    format!(
                        "residual {:.3e}, signs compatible: {}, expected on discriminant: {expected}",
                        ct.residual, ct.sign_compatible
                    ),
                ),
                (Ok(ct), None) => checks.info(
                    format!("circuit test `{}`", s.name),
                    format!("residual {:.3e}, on discriminant: {}", ct.residual, ct.on_discriminant),
                ),
                (Err(e), _) => checks.error(format!("circuit test `{}`", s.name), e),
            }
            samples.push(SampleReport {
                name: s.name.clone(),
                sign: SignClass::of(&s.coefficients).expect("config rejects zero coefficients"),
                signature: None,
                circuit: result.ok(),
                error: None,
            });
        }
    }

    if case.planar() && cfg.runs("contour") {
        verify_contour(case, &mut checks);
    }
    if case.planar() && cfg.runs("chambers") {
        verify_chambers(case, window, &mut checks);
    }
    if cfg.runs("zeroset") && case.spectrum().n() <= 2 {
        samples.extend(verify_zeroset(case, window, &mut checks, &mut constancy));
    }

    let passed = checks.0.iter().all(|c| c.status != Status::Fail);
    VerifyReport {
        case: cfg.name.clone(),
        passed,
        checks: checks.0,
        samples,
        constancy,
    }
}

fn verify_contour(case: &Case, checks: &mut Checks) {
    let cfg = &case.cfg;
    let tol = cfg.tolerances;
    let t = case.basis.t();
    match find_cusps(&case.basis, tol.rank) {
        Ok(cusps) => {
            checks.push(
                "cusp degree drop",
                cusps.leading_residual <= tol.degree_drop,
                format!(
                    "two leading coefficients at {:.3e} relative (bound {:.0e})",
                    cusps.leading_residual, tol.degree_drop
                ),
            );
            let bound = t.saturating_sub(3);
            checks.push(
                "cusp count",
                cusps.thetas.len() <= bound,
                format!("{} cusps, at most {bound}", cusps.thetas.len()),
            );
            if let Some(expected) = cfg.expect.cusps {
                checks.push(
                    "expected cusps",
                    cusps.thetas.len() == expected,
                    format!("{} cusps, expected {expected}", cusps.thetas.len()),
                );
            }
            match gauss_sample_angles(&case.basis, &cusps, 1200, 1e-3)
                .and_then(|th| verify_gauss_normal(&case.basis, &th, 1e-6))
            {
                Ok(g) => checks.push(
                    "Gauss map",
                    g.max_residual < tol.gauss && g.samples >= 1000,
                    format!(
                        "max angular residual {:.3e} over {} points (bound {:.0e})",
                        g.max_residual, g.samples, tol.gauss
                    ),
                ),
                Err(e) => checks.error("Gauss map", &e),
            }
        }
        Err(e) => checks.error("cusps", &e),
    }
    match r_polynomial_degree_check(&case.basis) {
        Ok(d) => checks.push(
            "singular-locus degree",
            d.observed_degree.is_none_or(|k| k <= d.degree_bound),
            format!(
                "observed degree {:?}, bound {}, det M vanishes identically: {}",
                d.observed_degree, d.degree_bound, d.determinant_vanishes
            ),
        ),
        Err(e) => checks.error("singular-locus degree", &e),
    }
    match attained_classes(&case.basis) {
        Ok(a) => {
            let names: Vec<String> = a.iter().map(|s| s.to_string()).collect();
            match cfg.expect.attained {
                Some(expected) => checks.push(
                    "attained sign classes",
                    a.len() == expected,
                    format!(
                        "{} attained ({}), expected {expected}",
                        a.len(),
                        names.join(" ")
                    ),
                ),
                None => checks.info("attained sign classes", names.join(" ")),
            }
        }
        Err(e) => checks.error("attained sign classes", &e),
    }
    if let Some(expected) = cfg.expect.facet_lines {
        match non_simplicial_faces(case.spectrum()) {
            Ok(faces) => checks.push(
                "facet lines",
                faces.len() == expected,
                format!("{} non-simplicial faces, expected {expected}", faces.len()),
            ),
            Err(e) => checks.error("facet lines", &e),
        }
    }
}

fn verify_chambers(case: &Case, window: f64, checks: &mut Checks) {
    let cfg = &case.cfg;
    let out = match run_chambers(case, window) {
        Ok(o) => o,
        Err(e) => return checks.error("chambers", &e),
    };
    for s in &out.report.signs {
        let label = s.sign.to_string();
        match (&s.error, s.count, s.dual) {
            (None, Some(count), Some(d)) => {
                checks.push(
                    format!("dual count {label}"),
                    d.agree(),
                    format!(
                        "arrangement {}/{} bounded, raster {}/{} bounded at {}²",
                        d.arrangement,
                        d.arrangement_bounded,
                        d.raster,
                        d.raster_bounded,
                        d.resolution
                    ),
                );
                if let Some(&expected) = cfg.expect.counts.get(&label) {
                    checks.push(
                        format!("chamber count {label}"),
                        count == expected,
                        format!("{count} chambers, expected {expected}"),
                    );
                }
                if let Some(&expected) = cfg.expect.bounded.get(&label) {
                    let bounded = s.bounded.unwrap_or(0);
                    checks.push(
                        format!("bounded chambers {label}"),
                        bounded == expected,
                        format!("{bounded} bounded, expected {expected}"),
                    );
                }
            }
            (err, _, _) => checks.push(
                format!("chambers {label}"),
                false,
                err.clone().unwrap_or_else(|| "no count".into()),
            ),
        }
        if s.attained {
            checks.info(
                format!("sub-arc crossings {label}"),
                format!(
                    "{} pairs, max {} crossings, {} cusp-sharing crossings, {} near-tangent contacts",
                    s.hypothesis.pairs,
                    s.hypothesis.max_crossings,
                    s.hypothesis.cusp_crossings,
                    s.hypothesis.near_tangent_contacts
                ),
            );
        }
    }
    if let Some(b) = &out.report.bounds {
        checks.info(
            "bound comparison",
            format!(
                "max count {} vs chamber bound {} ({}) and isotopy bound {} ({})",
                b.max_count,
                b.chamber_bound,
                if b.within_chamber_bound { "<=" } else { ">" },
                b.isotopy_bound,
                if b.within_isotopy_bound { "<=" } else { ">" }
            ),
        );
    }
    for group in &cfg.expect.separated {
        let located: Vec<(String, Option<(SignClass, usize)>)> = group
            .iter()
            .map(|name| {
                let found = out.report.signs.iter().find_map(|s| {
                    s.samples
                        .iter()
                        .find(|l| &l.name == name)
                        .and_then(|l| l.chamber.map(|c| (s.sign.clone(), c)))
                });
                (name.clone(), found)
            })
            .collect();
        let mut ok = located.iter().all(|(_, f)| f.is_some());
        for (i, a) in located.iter().enumerate() {
            for b in &located[i + 1..] {
                ok &= a.1 != b.1;
            }
        }
        let detail: Vec<String> = located
            .iter()
            .map(|(n, f)| match f {
                Some((s, c)) => format!("{n} in chamber {c} of {s}"),
                None => format!("{n} not located"),
            })
            .collect();
        checks.push(
            format!("separated {}", group.join("/")),
            ok,
            detail.join(", "),
        );
    }
}

fn verify_zeroset(
    case: &Case,
    window: f64,
    checks: &mut Checks,
    constancy: &mut Vec<ConstancyReport>,
) -> Vec<SampleReport> {
    let cfg = &case.cfg;
    let opts = SignatureOptions {
        grid: cfg.zeroset.grid,
        check_refinement: true,
        delta_fraction: cfg.zeroset.delta_fraction,
    };
    let reports: Vec<SampleReport> = cfg
        .samples
        .par_iter()
        .map(|s| {
            let sign = SignClass::of(&s.coefficients).expect("config rejects zero coefficients");
            let sig = ExpSum::new(case.spectrum().clone(), s.coefficients.clone())
                .and_then(|g| topology_signature(&g, &opts));
            SampleReport {
                name: s.name.clone(),
                sign,
                signature: sig.as_ref().ok().map(|r| r.signature.clone()),
                circuit: None,
                error: sig.err().map(|e| e.to_string()),
            }
        })
        .collect();
    for (s, r) in cfg.samples.iter().zip(&reports) {
        let name = format!("signature `{}`", s.name);
        match (&r.signature, s.signature) {
            (Some(sig), Some([comp, compact])) => checks.push(
                name,
                sig.counts() == (comp, compact),
                format!("{sig:?}, expected ({comp}, {compact})"),
            ),
            (Some(sig), None) => checks.info(name, format!("{sig:?}")),
            (None, _) => checks.push(name, false, r.error.clone().unwrap_or_default()),
        }
    }

    if !case.planar() {
        return reports;
    }
    for label in &cfg.zeroset.constancy {
        let sign: SignClass = label.parse().expect("validated in config");
        let name = format!("chamber constancy {label}");
        let result = completed_signed_contour(
            case.spectrum(),
            &case.basis,
            &sign,
            &case.sampling(2.0 * window),
        )
        .and_then(|c| count_chambers(&c, window))
        .and_then(|count| {
            chamber_constancy_check(
                case.spectrum(),
                &case.basis,
                &sign,
                &count,
                cfg.zeroset.samples_per_chamber,
                &opts,
            )
        });
        match result {
            Ok(report) => {
                let distinct = report.distinct_signatures();
                let mut counts_only: Vec<(usize, usize)> = report
                    .chambers
                    .iter()
                    .filter_map(|c| c.signatures.first().map(|s| s.counts()))
                    .collect();
                counts_only.sort_unstable();
                counts_only.dedup();
                checks.push(
                    name,
                    true,
                    format!(
                        "{} chambers x {} samples constant; {distinct} distinct signatures ({} by counts alone)",
                        report.chambers.len(),
                        cfg.zeroset.samples_per_chamber,
                        counts_only.len()
                    ),
                );
                if let Some(&expected) = cfg.expect.distinct_signatures.get(label) {
                    checks.push(
                        format!("distinct signatures {label}"),
                        distinct == expected,
                        format!("{distinct} distinct, expected {expected}"),
                    );
                }
                constancy.push(report);
            }
            Err(e) => checks.error(name, &e),
        }
    }
    reports
}
