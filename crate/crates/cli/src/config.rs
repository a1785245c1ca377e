//! Job configuration files.
//!
//! A config is a TOML document; see `configs/` and the README for the
//! grammar. Matrices are row-major arrays of arrays whose entries are
//! numbers or strings accepted by [`xi_core::spectrum::parse_exponent`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use xi_core::contour::Sampling;
use xi_core::spectrum::{parse_exponent, DEFAULT_RANK_TOL, DEFAULT_ZERO_ROW_TOL};
use xi_core::zeroset::{DEFAULT_DELTA_FRACTION, DEFAULT_GRID};
use xi_core::{Error, Result, SignClass, Spectrum};

/// Stages `verify` can exercise.
pub const STAGES: [&str; 3] = ["contour", "chambers", "zeroset"];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: String,
    spectrum: Vec<Vec<toml::Value>>,
    #[serde(default)]
    signs: Option<toml::Value>,
    #[serde(default)]
    window: Option<f64>,
    #[serde(default)]
    commands: Option<Vec<String>>,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    non_defective: Option<bool>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    sampling: RawSampling,
    #[serde(default)]
    zeroset: ZeroSetConfig,
    #[serde(default)]
    samples: Vec<RawSample>,
    #[serde(default)]
    expect: Expectations,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Singular values below this (relative) count as zero.
    pub rank: f64,
    pub zero_row: f64,
    /// Bound on `‖Â B‖`.
    pub nullspace: f64,
    /// Bound on the normal-direction residual.
    pub gauss: f64,
    /// Bound on the relative size of the vanishing leading coefficients.
    pub degree_drop: f64,
    /// Bound on the circuit residual.
    pub circuit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: DEFAULT_RANK_TOL,
            zero_row: DEFAULT_ZERO_ROW_TOL,
            nullspace: 1e-10,
            gauss: 1e-5,
            degree_drop: 1e-8,
            circuit: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct RawSampling {
    points_per_arc: Option<usize>,
    max_points: Option<usize>,
    refine_fraction: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ZeroSetConfig {
    pub grid: usize,
    pub samples_per_chamber: usize,
    pub delta_fraction: f64,
    /// Sign classes whose chambers get the constancy check.
    pub constancy: Vec<String>,
}

impl Default for ZeroSetConfig {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            samples_per_chamber: 5,
            delta_fraction: DEFAULT_DELTA_FRACTION,
            constancy: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSample {
    name: String,
    coefficients: Vec<toml::Value>,
    #[serde(default)]
    signature: Option<[usize; 2]>,
    #[serde(default)]
    on_discriminant: Option<bool>,
}

/// A named coefficient vector to place in the chambers.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub name: String,
    pub coefficients: Vec<f64>,
    /// Expected `(components, compact)`.
    pub signature: Option<[usize; 2]>,
    /// Expected circuit test outcome.
    pub on_discriminant: Option<bool>,
}

/// Golden values checked by `verify`.
#[derive(Debug, Clone, Deserialize, Default, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Expectations {
    pub attained: Option<usize>,
    pub counts: BTreeMap<String, usize>,
    pub bounded: BTreeMap<String, usize>,
    pub facet_lines: Option<usize>,
    pub cusps: Option<usize>,
    /// Groups of sample names that must lie in pairwise different chambers.
    pub separated: Vec<Vec<String>>,
    /// Number of distinct signatures among the constancy-checked chambers.
    pub distinct_signatures: BTreeMap<String, usize>,
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub name: String,
    pub spectrum: Spectrum,
    /// `None` means every canonical class.
    pub signs: Option<Vec<SignClass>>,
    pub window: f64,
    pub commands: Vec<String>,
    /// Output root; `--out` takes precedence.
    pub out: Option<PathBuf>,
    /// User assertion that the discriminant is a hypersurface; not decided
    /// by the pipeline.
    pub non_defective: Option<bool>,
    pub tolerances: Tolerances,
    pub sampling: Sampling,
    pub zeroset: ZeroSetConfig,
    pub samples: Vec<Sample>,
    pub expect: Expectations,
}

fn entry_value(v: &toml::Value, field: &str) -> Result<f64> {
    match v {
        toml::Value::Integer(i) => Ok(*i as f64),
        toml::Value::Float(f) => Ok(*f),
        toml::Value::String(s) => parse_exponent(s)
            .map_err(|_| Error::Config(format!("{field}: cannot parse `{s}` as a number"))),
        other => Err(Error::Config(format!(
            "{field}: expected a number or string, found {}",
            other.type_str()
        ))),
    }
}

impl JobConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if raw.name.is_empty()
            || raw
                .name
                .chars()
                .any(|c| !(c.is_ascii_alphanumeric() || c == '-' || c == '_'))
        {
            return Err(Error::Config(format!(
                "name: `{}` must be nonempty ASCII letters, digits, `-` or `_`",
                raw.name
            )));
        }
        let rows = raw
            .spectrum
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| entry_value(v, &format!("spectrum[{i}][{j}]")))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let spectrum =
            Spectrum::from_rows(&rows).map_err(|e| Error::Config(format!("spectrum: {e}")))?;
        let t = spectrum.t();

        let signs = match &raw.signs {
            None => None,
            Some(toml::Value::String(s)) if s == "all" => None,
            Some(toml::Value::Array(list)) => Some(
                list.iter()
                    .enumerate()
                    .map(|(k, v)| {
                        let s = v.as_str().ok_or_else(|| {
                            Error::Config(format!("signs[{k}]: expected a string like \"+-+\""))
                        })?;
                        parse_sign(s, t, &format!("signs[{k}]"))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            Some(_) => {
                return Err(Error::Config(
                    "signs: expected \"all\" or a list of sign strings".into(),
                ))
            }
        };

        let window = raw.window.unwrap_or(8.0);
        if !(window.is_finite() && window > 0.0) {
            return Err(Error::Config(format!(
                "window: must be positive, got {window}"
            )));
        }
        let commands = raw
            .commands
            .unwrap_or_else(|| STAGES.iter().map(|s| s.to_string()).collect());
        for c in &commands {
            if !STAGES.contains(&c.as_str()) {
                return Err(Error::Config(format!(
                    "commands: unknown stage `{c}` (expected one of {STAGES:?})"
                )));
            }
        }

        let defaults = Sampling::default();
        let sampling = Sampling {
            points_per_arc: raw
                .sampling
                .points_per_arc
                .unwrap_or(defaults.points_per_arc),
            window,
            max_points: raw.sampling.max_points.unwrap_or(defaults.max_points),
            refine_fraction: raw
                .sampling
                .refine_fraction
                .unwrap_or(defaults.refine_fraction),
        };
        if sampling.points_per_arc == 0
            || sampling.max_points < 2
            || sampling.refine_fraction <= 0.0
        {
            return Err(Error::Config(
                "sampling: points_per_arc, max_points and refine_fraction must be positive".into(),
            ));
        }
        if raw.zeroset.grid < 8 {
            return Err(Error::Config(format!(
                "zeroset.grid: must be at least 8, got {}",
                raw.zeroset.grid
            )));
        }
        // sign keys are stored in canonical form so they match report labels
        for (k, s) in raw.zeroset.constancy.iter_mut().enumerate() {
            *s = parse_sign(s, t, &format!("zeroset.constancy[{k}]"))?.to_string();
        }
        for (field, map) in [
            ("expect.counts", &mut raw.expect.counts),
            ("expect.bounded", &mut raw.expect.bounded),
            (
                "expect.distinct_signatures",
                &mut raw.expect.distinct_signatures,
            ),
        ] {
            let mut canonical = BTreeMap::new();
            for (key, v) in std::mem::take(map) {
                let sign = parse_sign(&key, t, &format!("{field}.{key}"))?.to_string();
                if canonical.insert(sign.clone(), v).is_some() {
                    return Err(Error::Config(format!(
                        "{field}: `{sign}` given twice up to a global sign"
                    )));
                }
            }
            *map = canonical;
        }

        let samples = raw
            .samples
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let coefficients = s
                    .coefficients
                    .iter()
                    .enumerate()
                    .map(|(j, v)| entry_value(v, &format!("samples[{k}].coefficients[{j}]")))
                    .collect::<Result<Vec<f64>>>()?;
                if coefficients.len() != t || coefficients.contains(&0.0) {
                    return Err(Error::Config(format!(
                        "samples[{k}].coefficients: need {t} nonzero entries"
                    )));
                }
                Ok(Sample {
                    name: s.name.clone(),
                    coefficients,
                    signature: s.signature,
                    on_discriminant: s.on_discriminant,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let names: Vec<&str> = samples.iter().map(|s| s.name.as_str()).collect();
        for group in &raw.expect.separated {
            for n in group {
                if !names.contains(&n.as_str()) {
                    return Err(Error::Config(format!(
                        "expect.separated: unknown sample `{n}`"
                    )));
                }
            }
        }

        Ok(Self {
            name: raw.name,
            spectrum,
            signs,
            window,
            commands,
            out: raw.out,
            non_defective: raw.non_defective,
            tolerances: raw.tolerances,
            sampling,
            zeroset: raw.zeroset,
            samples,
            expect: raw.expect,
        })
    }

    /// The requested sign classes, deduplicated and sorted.
    pub fn sign_classes(&self) -> Vec<SignClass> {
        let mut v = match &self.signs {
            Some(list) => list.clone(),
            None => SignClass::all(self.spectrum.t()),
        };
        v.sort();
        v.dedup();
        v
    }

    pub fn runs(&self, stage: &str) -> bool {
        self.commands.iter().any(|c| c == stage)
    }
}

fn parse_sign(s: &str, t: usize, field: &str) -> Result<SignClass> {
    let sign: SignClass = s
        .parse()
        .map_err(|_| Error::Config(format!("{field}: `{s}` is not a sign string")))?;
    if sign.len() != t {
        return Err(Error::Config(format!(
            "{field}: `{s}` has {} signs, spectrum has {t} columns",
            sign.len()
        )));
    }
    Ok(sign)
}
