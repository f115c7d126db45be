//! JSON job description (schema version 1).

use serde::Deserialize;
use spraytube::oracle::ApollonianPacking;
use spraytube::{
    builtin, BuiltinName, FractalSpray, FractalString, PieceSpec, SelfSimilarSystem, SteinerLikeRep, TruncationSpec,
};

pub const SCHEMA_VERSION: u32 = 1;
const DEFAULT_FLOOR: f64 = 1e-6;
const DEFAULT_REL_TOL: f64 = 1e-3;
const DEFAULT_QUAD_TOL: f64 = 1e-10;
const DEFAULT_SAMPLES: usize = 400;
const DEFAULT_IM_MAX: f64 = 50.0;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub version: u32,
    pub spray: Option<SprayConfig>,
    pub generator: Option<GeneratorConfig>,
    #[serde(default)]
    pub generators: Vec<GeneratorConfig>,
    #[serde(default)]
    pub job: Job,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SprayConfig {
    System { ratios: Vec<f64>, dim: usize },
    Scales(Vec<f64>),
    Apollonian { curvatures: [f64; 4], min_radius: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorConfig {
    Builtin {
        name: String,
        #[serde(default = "one")]
        size: f64,
    },
    Custom {
        d: usize,
        g: f64,
        pieces: Vec<PieceConfig>,
        volume: Option<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceConfig {
    pub upto: String,
    pub kappa: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    /// Relative scale down to which a self-similar string is materialized.
    pub floor: Option<f64>,
    pub eps: Option<EpsGrid>,
    #[serde(default)]
    pub truncation: TruncationConfig,
    pub screen: Option<ScreenConfig>,
    pub window: Option<WindowConfig>,
    #[serde(default)]
    pub s: Vec<[f64; 2]>,
    #[serde(default)]
    pub tolerance: ToleranceConfig,
    pub samples: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsGrid {
    #[serde(default)]
    pub values: Vec<f64>,
    pub log: Option<LogGrid>,
    /// Values are multiples of the smallest generator inradius.
    #[serde(default)]
    pub relative: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogGrid {
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    pub lattice_n: Option<usize>,
    pub nonlattice_height: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScreenConfig {
    pub sigma: f64,
    pub height: Option<f64>,
    pub quad_tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub re_min: Option<f64>,
    pub re_max: Option<f64>,
    pub im_max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    pub rel: Option<f64>,
}

fn one() -> f64 {
    1.0
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| format!("config: {e}"))?;
        if cfg.version != SCHEMA_VERSION {
            return Err(format!("config: unsupported schema version {} (expected {SCHEMA_VERSION})", cfg.version));
        }
        if cfg.generator.is_some() && !cfg.generators.is_empty() {
            return Err("config: give either `generator` or `generators`, not both".into());
        }
        Ok(cfg)
    }

    pub fn floor(&self) -> f64 {
        self.job.floor.unwrap_or(DEFAULT_FLOOR)
    }

    pub fn rel_tol(&self) -> f64 {
        self.job.tolerance.rel.unwrap_or(DEFAULT_REL_TOL)
    }

    pub fn samples(&self) -> usize {
        self.job.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn im_max(&self) -> f64 {
        self.job.window.as_ref().and_then(|w| w.im_max).unwrap_or(DEFAULT_IM_MAX)
    }

    pub fn quad_tol(&self) -> f64 {
        self.job.screen.as_ref().and_then(|s| s.quad_tol).unwrap_or(DEFAULT_QUAD_TOL)
    }

    pub fn truncation(&self) -> TruncationSpec {
        let d = TruncationSpec::default();
        TruncationSpec {
            lattice_n: self.job.truncation.lattice_n.unwrap_or(d.lattice_n),
            nonlattice_height: self.job.truncation.nonlattice_height.unwrap_or(d.nonlattice_height),
        }
    }

    pub fn spray_config(&self) -> Result<&SprayConfig, String> {
        self.spray.as_ref().ok_or_else(|| "config: `spray` is required for this command".into())
    }

    pub fn system(&self) -> Result<SelfSimilarSystem, String> {
        match self.spray_config()? {
            SprayConfig::System { ratios, dim } => {
                SelfSimilarSystem::new(ratios.clone(), *dim).map_err(|e| e.to_string())
            }
            _ => Err("config: this command needs a `system` spray".into()),
        }
    }

    pub fn packing(&self) -> Result<ApollonianPacking, String> {
        match self.spray_config()? {
            SprayConfig::Apollonian { curvatures, min_radius } => {
                ApollonianPacking::generate(*curvatures, *min_radius).map_err(|e| e.to_string())
            }
            _ => Err("config: this command needs an `apollonian` spray".into()),
        }
    }

    pub fn string(&self) -> Result<FractalString, String> {
        match self.spray_config()? {
            SprayConfig::System { .. } => {
                FractalString::self_similar(self.system()?, self.floor()).map_err(|e| e.to_string())
            }
            SprayConfig::Scales(scales) => FractalString::explicit(scales.clone()).map_err(|e| e.to_string()),
            SprayConfig::Apollonian { .. } => self.packing()?.string().map_err(|e| e.to_string()),
        }
    }

    pub fn generator_configs(&self) -> Vec<GeneratorConfig> {
        match &self.generator {
            Some(g) => vec![g.clone()],
            None => self.generators.clone(),
        }
    }

    /// Validated generators. An Apollonian spray without one gets a disk
    /// matching its largest circle.
    pub fn generators(&self) -> Result<Vec<SteinerLikeRep>, String> {
        let configs = self.generator_configs();
        if configs.is_empty() {
            if let Ok(SprayConfig::Apollonian { .. }) = self.spray_config() {
                let r = self.packing()?.largest_radius().ok_or("config: no circle reaches min_radius")?;
                return builtin(BuiltinName::Disk, r).map(|g| vec![g]).map_err(|e| e.to_string());
            }
            return Err("config: a `generator` is required".into());
        }
        configs.iter().map(|g| g.build(true)).collect()
    }

    pub fn spray(&self) -> Result<FractalSpray, String> {
        FractalSpray::with_generators(self.string()?, self.generators()?).map_err(|e| e.to_string())
    }
}

impl GeneratorConfig {
    /// With `validate == false` a custom representation is only assembled.
    pub fn build(&self, validate: bool) -> Result<SteinerLikeRep, String> {
        match self {
            GeneratorConfig::Builtin { name, size } => {
                let name: BuiltinName = name.parse().map_err(|e: spraytube::Error| e.to_string())?;
                builtin(name, *size).map_err(|e| e.to_string())
            }
            GeneratorConfig::Custom { d, g, pieces, volume } => {
                let specs: Vec<PieceSpec> = pieces
                    .iter()
                    .map(|p| {
                        let kappa: Vec<&str> = p.kappa.iter().map(String::as_str).collect();
                        PieceSpec::new(&p.upto, &kappa)
                    })
                    .collect();
                let result = if validate {
                    match volume {
                        Some(v) => spraytube::generators::custom_rep_with_volume(*d, *g, &specs, *v),
                        None => spraytube::custom_rep(*d, *g, &specs),
                    }
                } else {
                    spraytube::generators::assemble_rep("custom", *d, *g, &specs, *volume)
                };
                result.map_err(|e| e.to_string())
            }
        }
    }
}

impl EpsGrid {
    /// Absolute eps values; `g` is the smallest inradius.
    pub fn resolve(&self, g: f64) -> Result<Vec<f64>, String> {
        let mut out = self.values.clone();
        if let Some(log) = &self.log {
            if !(log.from > 0.0 && log.to > 0.0 && log.count >= 1) {
                return Err("config: log grid needs positive bounds and count >= 1".into());
            }
            out.extend(spraytube::numeric::log_space(log.from, log.to, log.count));
        }
        if out.is_empty() {
            return Err("config: eps grid is empty".into());
        }
        let scale = if self.relative { g } else { 1.0 };
        let out: Vec<f64> = out.into_iter().map(|e| e * scale).collect();
        if out.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err("config: eps values must be positive and finite".into());
        }
        Ok(out)
    }
}
