//! Run configuration: one TOML file drives every subcommand so experiments
//! stay reproducible as committed fixtures.

use crate::bound::{arm_gaps, BoundMode, ThresholdVariant};
use crate::error::{Error, Result};
use crate::geometry::{CacheOptions, SpiralProfile};
use crate::horn::HornProfile;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub threads: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileConfig>,
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horn: Option<HornConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigs: Option<EigsConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    /// "power" | "archimedean" | "tabulated"
    pub family: String,
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_min: Option<f64>,
    /// Angular offsets of a multi-armed spiral; a single arm when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<f64>>,
}

fn default_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub theta_max: f64,
    pub margin: f64,
    pub grid_tol: f64,
    pub mc_samples: usize,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig { theta_max: 240.0, margin: 0.05, grid_tol: 1e-8, mc_samples: 65_536 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundConfig {
    pub sigma: Vec<f64>,
    pub lambda: Vec<f64>,
    #[serde(default = "default_variant")]
    pub threshold_variant: ThresholdVariant,
    #[serde(default = "default_mode")]
    pub mode: BoundMode,
}

fn default_variant() -> ThresholdVariant {
    ThresholdVariant::Conservative2Lambda
}

fn default_mode() -> BoundMode {
    BoundMode::Standard
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HornConfig {
    /// "exponential" | "power" | "constant"
    pub family: String,
    #[serde(default = "default_scale")]
    pub amplitude: f64,
    #[serde(default = "default_scale")]
    pub rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    pub lambda: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigsConfig {
    /// Mesh spacings, finest last; a trailing (h, h/2) pair is extrapolated.
    pub h: Vec<f64>,
    pub r_max: f64,
    /// The solve runs to cutoff_factor · max(Λ) so moments never touch the
    /// incomplete spectral tail.
    #[serde(default = "default_cutoff_factor")]
    pub cutoff_factor: f64,
    #[serde(default = "default_true")]
    pub extrapolate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    /// Moment powers for the emitted moments table; falls back to the
    /// [bound] sigma list.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<f64>>,
}

fn default_cutoff_factor() -> f64 {
    1.2
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: "out".into() }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Canonical serialized form.
    pub fn normalize(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("config serialize error: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.threads == 0 {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        if self.profile.is_some() {
            self.build_profile()?;
            if let Some(offsets) = self.profile.as_ref().and_then(|p| p.offsets.as_ref()) {
                arm_gaps(offsets)?;
            }
        }
        if !(self.geometry.theta_max > 2.0 * TAU) {
            return Err(Error::Config("geometry.theta_max must exceed 4π".into()));
        }
        if !(self.geometry.margin > 0.0 && self.geometry.margin < 1.0) {
            return Err(Error::Config("geometry.margin must lie in (0, 1)".into()));
        }
        if let Some(bound) = &self.bound {
            ascending_positive(&bound.lambda, "bound.lambda")?;
            for &sigma in &bound.sigma {
                let ok = match bound.mode {
                    BoundMode::Standard => sigma >= 1.5,
                    BoundMode::SmallSigma => (0.5..1.5).contains(&sigma),
                };
                if !ok {
                    return Err(Error::Config(format!(
                        "bound.sigma = {sigma} outside the supported range for {:?} mode",
                        bound.mode
                    )));
                }
            }
        }
        if let Some(horn) = &self.horn {
            ascending_positive(&horn.lambda, "horn.lambda")?;
            self.build_horn()?;
        }
        if let Some(eigs) = &self.eigs {
            if eigs.h.is_empty() || eigs.h.iter().any(|&h| !(h > 0.0)) {
                return Err(Error::Config("eigs.h must be a nonempty list of positive spacings".into()));
            }
            if !(eigs.r_max > 0.0) {
                return Err(Error::Config("eigs.r_max must be positive".into()));
            }
            if !(eigs.cutoff_factor > 1.0) {
                return Err(Error::Config("eigs.cutoff_factor must exceed 1".into()));
            }
            if let Some(lambda) = &eigs.lambda {
                ascending_positive(lambda, "eigs.lambda")?;
            }
            if let Some(sigma) = &eigs.sigma {
                if sigma.iter().any(|&v| !(v >= 0.0)) {
                    return Err(Error::Config("eigs.sigma must be nonnegative".into()));
                }
            }
        }
        Ok(())
    }

    pub fn build_profile(&self) -> Result<SpiralProfile> {
        let p = self
            .profile
            .as_ref()
            .ok_or_else(|| Error::Config("no [profile] section in the config".into()))?;
        let profile = match p.family.as_str() {
            "power" => {
                let exponent = p
                    .exponent
                    .ok_or_else(|| Error::Config("power profile requires an exponent".into()))?;
                SpiralProfile::power(p.scale, exponent)?
            }
            "archimedean" => SpiralProfile::archimedean(p.scale)?,
            "tabulated" => {
                let samples = p
                    .samples
                    .as_ref()
                    .ok_or_else(|| Error::Config("tabulated profile requires samples".into()))?;
                SpiralProfile::tabulated(samples)?
            }
            other => return Err(Error::Config(format!("unknown profile family '{other}'"))),
        };
        Ok(match p.theta_min {
            Some(t) => profile.with_theta_min(t),
            None => profile,
        })
    }

    pub fn build_horn(&self) -> Result<HornProfile> {
        let h = self
            .horn
            .as_ref()
            .ok_or_else(|| Error::Config("no [horn] section in the config".into()))?;
        match h.family.as_str() {
            "exponential" => HornProfile::exponential(h.amplitude, h.rate),
            "power" => HornProfile::power(
                h.amplitude,
                h.exponent.ok_or_else(|| Error::Config("power horn requires an exponent".into()))?,
                h.shift.unwrap_or(1.0),
            ),
            "constant" => HornProfile::constant(
                h.amplitude,
                h.length.ok_or_else(|| Error::Config("constant horn requires a length".into()))?,
            ),
            other => Err(Error::Config(format!("unknown horn family '{other}'"))),
        }
    }

    pub fn cache_options(&self) -> CacheOptions {
        CacheOptions {
            theta_hi: self.geometry.theta_max,
            margin: self.geometry.margin,
            grid_tol: self.geometry.grid_tol,
            ..Default::default()
        }
    }

    pub fn offsets(&self) -> Vec<f64> {
        self.profile
            .as_ref()
            .and_then(|p| p.offsets.clone())
            .unwrap_or_else(|| vec![0.0])
    }
}

fn ascending_positive(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Ok(());
    }
    if values.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Config(format!("{what} must be positive")));
    }
    for w in values.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Config(format!("{what} must be strictly ascending")));
        }
    }
    Ok(())
}
