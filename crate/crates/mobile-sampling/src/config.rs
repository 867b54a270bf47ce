//! Experiment configuration: a versioned TOML schema describing the
//! spectrum, the surface, and the Monte Carlo budgets, plus a plain-text
//! point-cloud format for measured surfaces.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::certify::CertifyBudgets;
use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::surface::SurfaceSet;

/// Schema version this build reads and writes.
pub const CONFIG_VERSION: &str = "1";

/// Convex spectrum schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BodyConfig {
    Ball { radius: f64 },
    Cube { half_width: f64 },
    Box { half_widths: Vec<f64> },
    Ellipsoid { semi_axes: Vec<f64> },
}

impl BodyConfig {
    pub fn build(&self, dim: usize) -> Result<ConvexBody> {
        match self {
            BodyConfig::Ball { radius } => ConvexBody::ball(dim, *radius),
            BodyConfig::Cube { half_width } => ConvexBody::cube(dim, *half_width),
            BodyConfig::Box { half_widths } => {
                if half_widths.len() != dim {
                    return Err(Error::Config(format!(
                        "box half_widths has {} entries for dimension {dim}",
                        half_widths.len()
                    )));
                }
                ConvexBody::axis_box(half_widths.clone())
            }
            BodyConfig::Ellipsoid { semi_axes } => {
                if semi_axes.len() != dim {
                    return Err(Error::Config(format!(
                        "ellipsoid semi_axes has {} entries for dimension {dim}",
                        semi_axes.len()
                    )));
                }
                ConvexBody::ellipsoid(semi_axes.clone())
            }
        }
    }
}

/// Surface schema. `PointFile` loads a whitespace-separated text file with
/// one `x_1 ... x_d weight` record per line (`#` comments allowed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SurfaceConfig {
    HyperplaneFamily {
        normal: Vec<f64>,
        spacing: f64,
        #[serde(default)]
        offset: f64,
        #[serde(default)]
        excluded: Vec<i64>,
    },
    SingleHyperplane {
        normal: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
    SphereShell {
        center: Vec<f64>,
        radius: f64,
    },
    Union {
        members: Vec<SurfaceConfig>,
    },
    PointFile {
        path: String,
        resolution: f64,
    },
}

impl SurfaceConfig {
    /// Builds the surface; relative point-file paths resolve against
    /// `base_dir` (the config file's directory).
    pub fn build(&self, dim: usize, base_dir: &Path) -> Result<SurfaceSet> {
        match self {
            SurfaceConfig::HyperplaneFamily { normal, spacing, offset, excluded } => {
                check_len(normal, dim, "hyperplane normal")?;
                SurfaceSet::hyperplane_family(
                    normal.clone(),
                    *spacing,
                    *offset,
                    excluded.iter().copied().collect::<BTreeSet<i64>>(),
                )
            }
            SurfaceConfig::SingleHyperplane { normal, offset } => {
                check_len(normal, dim, "hyperplane normal")?;
                SurfaceSet::single_hyperplane(normal.clone(), *offset)
            }
            SurfaceConfig::SphereShell { center, radius } => {
                check_len(center, dim, "shell center")?;
                SurfaceSet::sphere_shell(center.clone(), *radius)
            }
            SurfaceConfig::Union { members } => {
                let built: Result<Vec<SurfaceSet>> =
                    members.iter().map(|m| m.build(dim, base_dir)).collect();
                SurfaceSet::union(built?)
            }
            SurfaceConfig::PointFile { path, resolution } => {
                let full = if Path::new(path).is_absolute() {
                    PathBuf::from(path)
                } else {
                    base_dir.join(path)
                };
                let text = std::fs::read_to_string(&full).map_err(|e| {
                    Error::Config(format!("cannot read point file {}: {e}", full.display()))
                })?;
                let (points, weights) = parse_point_file(&text, dim)?;
                SurfaceSet::weighted_points(points, weights, *resolution)
            }
        }
    }
}

fn check_len(v: &[f64], dim: usize, what: &str) -> Result<()> {
    if v.len() != dim {
        return Err(Error::Config(format!(
            "{what} has {} entries for dimension {dim}",
            v.len()
        )));
    }
    Ok(())
}

/// Parses the point-cloud text format: `d` coordinates then a weight per
/// line, whitespace separated.
pub fn parse_point_file(text: &str, dim: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != dim + 1 {
            return Err(Error::Config(format!(
                "point file line {}: expected {} fields (x_1..x_{dim} weight), found {}",
                lineno + 1,
                dim + 1,
                fields.len()
            )));
        }
        let mut record = Vec::with_capacity(dim + 1);
        for f in &fields {
            record.push(f.parse::<f64>().map_err(|e| {
                Error::Config(format!("point file line {}: bad number {f:?}: {e}", lineno + 1))
            })?);
        }
        let w = record.pop().expect("record has dim+1 entries");
        points.push(record);
        weights.push(w);
    }
    Ok((points, weights))
}

/// Monte Carlo and quadrature budgets, all optional with documented
/// defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetsConfig {
    /// Sphere-quadrature refinement; `0` means the per-dimension default.
    pub quadrature_level: usize,
    /// Random lines for Crofton / nodal-average estimators.
    pub lines: usize,
    /// Centers per radius for the density estimator.
    pub density_centers: usize,
    /// Centers per radius for the regularity profile.
    pub profile_centers: usize,
    /// Synthesized functions for corpus studies.
    pub corpus: usize,
    /// Monte Carlo samples for volume-integral terms.
    pub samples: usize,
    /// Half-side of the center-sampling window.
    pub window_half: f64,
    /// Density radius grid override (increasing, spanning a decade).
    pub density_radii: Vec<f64>,
    /// Profile radius grid override (inside (0,1)).
    pub profile_radii: Vec<f64>,
}

impl Default for BudgetsConfig {
    fn default() -> Self {
        let reference = CertifyBudgets::default();
        BudgetsConfig {
            quadrature_level: 0,
            lines: 100_000,
            density_centers: reference.density_centers,
            profile_centers: reference.profile_centers,
            corpus: 200,
            samples: 200_000,
            window_half: reference.window_half,
            density_radii: reference.density_radii,
            profile_radii: reference.profile_radii,
        }
    }
}

impl BudgetsConfig {
    /// Scales every Monte Carlo count by `factor` (quadrature level and
    /// radius grids are deterministic and stay put).
    pub fn scaled(mut self, factor: f64) -> Self {
        if factor == 1.0 {
            return self;
        }
        let scale = |n: usize| (((n as f64) * factor).round() as usize).max(4);
        self.lines = scale(self.lines);
        self.density_centers = scale(self.density_centers);
        self.profile_centers = scale(self.profile_centers);
        self.corpus = scale(self.corpus);
        self.samples = scale(self.samples);
        self
    }

    pub fn certify_budgets(&self) -> CertifyBudgets {
        CertifyBudgets {
            window_half: self.window_half,
            density_radii: self.density_radii.clone(),
            density_centers: self.density_centers,
            profile_radii: self.profile_radii.clone(),
            profile_centers: self.profile_centers,
            quadrature_level: if self.quadrature_level == 0 {
                None
            } else {
                Some(self.quadrature_level)
            },
        }
    }
}

/// Extra knobs consumed by individual subcommands.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    /// Norm exponent for ratio studies: a number or the string "inf".
    pub p: Option<PValue>,
    /// Window corners for ratio studies (defaults to the centered cube).
    pub window_lo: Option<Vec<f64>>,
    pub window_hi: Option<Vec<f64>>,
    /// Ball radius for Crofton area / Jensen checks.
    pub radius: Option<f64>,
    /// Averaging radius for nodal-average and log-integral checks.
    pub big_r: Option<f64>,
    /// Exponential-sum terms per synthesized function.
    pub terms: Option<usize>,
    /// Inequality constant for the recovery/decay checks.
    pub constant: Option<f64>,
}

/// A norm exponent: a TOML number, or the string `"inf"` for the sup norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PValue(f64);

impl PValue {
    pub fn new(p: f64) -> Self {
        PValue(p)
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl Serialize for PValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for PValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = PValue;

            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<PValue, E> {
                Ok(PValue(v))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<PValue, E> {
                Ok(PValue(v as f64))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<PValue, E> {
                match v {
                    "inf" | "infinity" | "sup" => Ok(PValue(f64::INFINITY)),
                    other => Err(E::custom(format!(
                        "unknown norm exponent {other:?}: use a number or \"inf\""
                    ))),
                }
            }
        }
        d.deserialize_any(Visitor)
    }
}

/// The full experiment file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must equal [`CONFIG_VERSION`].
    pub version: String,
    /// Mandatory: every run is seeded, never wall-clock.
    pub seed: u64,
    pub dimension: usize,
    pub spectrum: Option<BodyConfig>,
    pub surface: Option<SurfaceConfig>,
    #[serde(default)]
    pub budgets: BudgetsConfig,
    #[serde(default)]
    pub params: ParamsConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        if config.version != CONFIG_VERSION {
            return Err(Error::Config(format!(
                "config version {:?} does not match this build's schema version {CONFIG_VERSION:?}",
                config.version
            )));
        }
        if config.dimension == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn build_spectrum(&self) -> Result<ConvexBody> {
        self.spectrum
            .as_ref()
            .ok_or_else(|| Error::Config("this subcommand needs a [spectrum] table".into()))?
            .build(self.dimension)
    }

    pub fn build_surface(&self, base_dir: &Path) -> Result<SurfaceSet> {
        self.surface
            .as_ref()
            .ok_or_else(|| Error::Config("this subcommand needs a [surface] table".into()))?
            .build(self.dimension, base_dir)
    }
}
