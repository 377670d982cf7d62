//! Job configuration: a TOML file, patched by `--param` dotted-path
//! overrides, validated, and hashed for the provenance sidecars.

use std::fmt;
use std::path::Path;

use deltawell_core::units;
use deltawell_core::{DimensionlessModel, PhysicalParameters, ProfileKind};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A configuration problem: bad file, bad field, bad override. Rendered to
/// stderr verbatim; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Physical,
    Dimensionless,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Physical => "physical",
            Mode::Dimensionless => "dimensionless",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Linear,
    Parabolic,
    Exponential,
}

impl Kind {
    pub fn to_core(self) -> ProfileKind {
        match self {
            Kind::Linear => ProfileKind::Linear,
            Kind::Parabolic => ProfileKind::Parabolic,
            Kind::Exponential => ProfileKind::Exponential,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionlessBlock {
    pub u0: f64,
    pub gamma: f64,
    #[serde(default)]
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalBlock {
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    pub delta_strength: f64,
    pub left_level: f64,
    #[serde(default)]
    pub offset: f64,
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_max: Option<f64>,
    pub margin: f64,
    pub root_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan_step: Option<f64>,
}

impl Default for SolverBlock {
    fn default() -> Self {
        SolverBlock {
            delta_max: None,
            margin: 1e-9,
            root_tol: 1e-12,
            scan_step: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleBlock {
    pub h: f64,
    /// Explicit grid span; both ends or neither (the default span is sized
    /// from the model).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_left: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_right: Option<f64>,
}

impl Default for OracleBlock {
    fn default() -> Self {
        OracleBlock {
            h: 1e-3,
            q_left: None,
            q_right: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareBlock {
    pub tolerance: f64,
}

impl Default for CompareBlock {
    fn default() -> Self {
        CompareBlock { tolerance: 1e-4 }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub samples: usize,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock { samples: 1000 }
    }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct FigureBlock {
    /// `(u0, gamma)` pairs; omitted → the six standard cases.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub mode: Mode,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimensionless: Option<DimensionlessBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalBlock>,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub oracle: OracleBlock,
    #[serde(default)]
    pub compare: CompareBlock,
    #[serde(default)]
    pub output: OutputBlock,
    #[serde(default)]
    pub figure: FigureBlock,
}

/// Read `path`, apply `--param` overrides on the raw TOML tree (flags win
/// over the file), deserialize, validate.
pub fn load(path: &Path, params: &[String]) -> Result<JobConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let mut tree: toml::Table =
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    for p in params {
        apply_override(&mut tree, p)?;
    }
    let config = JobConfig::deserialize(toml::Value::Table(tree))
        .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    config.validate()?;
    Ok(config)
}

fn apply_override(root: &mut toml::Table, spec: &str) -> Result<(), ConfigError> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError(format!("--param '{spec}' is not of the form key=value")))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(ConfigError(format!("--param '{spec}': empty path segment")));
    }
    let mut cur = root;
    for k in &keys[..keys.len() - 1] {
        cur = cur
            .entry(k.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| ConfigError(format!("--param '{spec}': '{k}' is not a table")))?;
    }
    cur.insert(keys[keys.len() - 1].to_string(), parse_fragment(raw.trim()));
    Ok(())
}

/// Parse the value side of an override as a TOML fragment, so numbers,
/// booleans, and arrays come out typed; anything unparseable is a string
/// (lets `kind=linear` work without quotes).
fn parse_fragment(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match toml::from_str::<toml::Table>(&doc) {
        Ok(mut t) => t.remove("v").unwrap(),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

impl JobConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.mode {
            Mode::Dimensionless => {
                if self.dimensionless.is_none() {
                    return Err(ConfigError(
                        "mode = \"dimensionless\" needs a [dimensionless] block".into(),
                    ));
                }
                if self.physical.is_some() {
                    return Err(ConfigError(
                        "a [physical] block conflicts with mode = \"dimensionless\"".into(),
                    ));
                }
            }
            Mode::Physical => {
                if self.physical.is_none() {
                    return Err(ConfigError(
                        "mode = \"physical\" needs a [physical] block".into(),
                    ));
                }
                if self.dimensionless.is_some() {
                    return Err(ConfigError(
                        "a [dimensionless] block conflicts with mode = \"physical\"".into(),
                    ));
                }
            }
        }
        let positives = [
            ("solver.margin", Some(self.solver.margin)),
            ("solver.root_tol", Some(self.solver.root_tol)),
            ("solver.scan_step", self.solver.scan_step),
            ("oracle.h", Some(self.oracle.h)),
            ("compare.tolerance", Some(self.compare.tolerance)),
        ];
        for (name, v) in positives {
            if let Some(v) = v {
                if !v.is_finite() || v <= 0.0 {
                    return Err(ConfigError(format!(
                        "{name} must be a positive finite number, got {v}"
                    )));
                }
            }
        }
        if self.oracle.q_left.is_some() != self.oracle.q_right.is_some() {
            return Err(ConfigError(
                "oracle.q_left and oracle.q_right must be given together".into(),
            ));
        }
        if self.output.samples < 2 {
            return Err(ConfigError(format!(
                "output.samples must be at least 2, got {}",
                self.output.samples
            )));
        }
        if let Some(cases) = &self.figure.cases {
            if cases.is_empty() {
                return Err(ConfigError("figure.cases must not be empty".into()));
            }
            if cases.len() > 26 {
                return Err(ConfigError(format!(
                    "figure supports at most 26 cases per run, got {}",
                    cases.len()
                )));
            }
            for (i, c) in cases.iter().enumerate() {
                if !c[0].is_finite() || !c[1].is_finite() {
                    return Err(ConfigError(format!(
                        "figure.cases[{i}] must be a finite [u0, gamma] pair"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The reduced model this job runs on, plus the original laboratory
    /// parameters when the input was physical. Construction failures are
    /// parameter problems, so they surface as config errors.
    pub fn build_model(
        &self,
    ) -> Result<(DimensionlessModel, Option<PhysicalParameters>), ConfigError> {
        match self.mode {
            Mode::Dimensionless => {
                let d = self.dimensionless.as_ref().unwrap();
                let model = DimensionlessModel::new(self.kind.to_core(), d.u0, d.gamma, d.a, d.b)
                    .map_err(|e| ConfigError(format!("[dimensionless]: {e}")))?;
                Ok((model, None))
            }
            Mode::Physical => {
                let p = self.physical.as_ref().unwrap();
                let params = PhysicalParameters {
                    mass: p.mass,
                    hbar: p.hbar,
                    delta_strength: p.delta_strength,
                    left_level: p.left_level,
                    offset: p.offset,
                    scale: p.scale,
                    rate: p.rate,
                };
                let model = units::reduce(self.kind.to_core(), &params)
                    .map_err(|e| ConfigError(format!("[physical]: {e}")))?;
                Ok((model, Some(params)))
            }
        }
    }

    /// SHA-256 of the canonical serialization of the *effective* config
    /// (file plus overrides). Two invocations with the same effective
    /// parameters hash identically no matter how the file was formatted.
    pub fn hash(&self) -> String {
        let canonical = toml::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let digest = hasher.finalize();
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(text: &str) -> toml::Table {
        toml::from_str(text).unwrap()
    }

    fn demo() -> JobConfig {
        JobConfig::deserialize(toml::Value::Table(table(
            "mode = \"dimensionless\"\nkind = \"linear\"\n[dimensionless]\nu0 = 1.0\ngamma = 10.0",
        )))
        .unwrap()
    }

    #[test]
    fn defaults_fill_in() {
        let c = demo();
        c.validate().unwrap();
        assert_eq!(c.solver.margin, 1e-9);
        assert_eq!(c.solver.root_tol, 1e-12);
        assert_eq!(c.oracle.h, 1e-3);
        assert_eq!(c.compare.tolerance, 1e-4);
        assert_eq!(c.output.samples, 1000);
        assert!(c.figure.cases.is_none());
        assert_eq!(c.dimensionless.as_ref().unwrap().a, 0.0);
    }

    #[test]
    fn override_patches_nested_value() {
        let mut t = table(
            "mode = \"dimensionless\"\nkind = \"linear\"\n[dimensionless]\nu0 = 1.0\ngamma = 10.0",
        );
        apply_override(&mut t, "dimensionless.u0=-1").unwrap();
        apply_override(&mut t, "solver.root_tol=1e-10").unwrap();
        apply_override(&mut t, "kind=parabolic").unwrap();
        let c = JobConfig::deserialize(toml::Value::Table(t)).unwrap();
        assert_eq!(c.dimensionless.as_ref().unwrap().u0, -1.0);
        assert_eq!(c.solver.root_tol, 1e-10);
        assert_eq!(c.kind, Kind::Parabolic);
    }

    #[test]
    fn override_without_equals_is_rejected() {
        let mut t = table("x = 1");
        assert!(apply_override(&mut t, "solver.margin").is_err());
    }

    #[test]
    fn mode_and_block_must_agree() {
        let mut c = demo();
        c.physical = Some(PhysicalBlock {
            mass: 1.0,
            hbar: 1.0,
            delta_strength: 1.0,
            left_level: 5.0,
            offset: 0.0,
            scale: 0.5,
            rate: None,
        });
        assert!(c.validate().is_err());
        c.physical = None;
        c.dimensionless = None;
        assert!(c.validate().is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let r = JobConfig::deserialize(toml::Value::Table(table(
            "mode = \"dimensionless\"\nkind = \"linear\"\ntypo = 3\n[dimensionless]\nu0 = 0.0\ngamma = 1.0",
        )));
        assert!(r.is_err());
    }

    #[test]
    fn hash_ignores_formatting_but_not_values() {
        let a = demo();
        let b = JobConfig::deserialize(toml::Value::Table(table(
            "kind = \"linear\"\nmode = \"dimensionless\"\n[dimensionless]\ngamma = 10.0\nu0 = 1.0",
        )))
        .unwrap();
        assert_eq!(a.hash(), b.hash());
        let mut c = demo();
        c.dimensionless.as_mut().unwrap().u0 = 2.0;
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn build_model_reduces_physical_input() {
        let c = JobConfig::deserialize(toml::Value::Table(table(
            "mode = \"physical\"\nkind = \"linear\"\n[physical]\ndelta_strength = 1.0\nleft_level = 5.0\nscale = 0.5",
        )))
        .unwrap();
        c.validate().unwrap();
        let (model, params) = c.build_model().unwrap();
        assert_eq!(model.length_unit, 1.0);
        assert_eq!(model.u0, 1.0);
        assert_eq!(model.gamma, 10.0);
        assert_eq!(params.unwrap().mass, 1.0);
    }

    #[test]
    fn exponential_without_b_is_a_config_error() {
        let c = JobConfig::deserialize(toml::Value::Table(table(
            "mode = \"dimensionless\"\nkind = \"exponential\"\n[dimensionless]\nu0 = 1.0\ngamma = 10.0",
        )))
        .unwrap();
        c.validate().unwrap();
        assert!(c.build_model().is_err());
    }
}
