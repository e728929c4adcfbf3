//! Run configuration: one TOML document per invocation.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use ttstar_core::{Complex64, ExpPolynomial, ExpPolynomial64, PlaneGrid};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    ModelA,
    ModelB,
    Custom,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    /// Coupling `t` as `[re, im]`.
    #[serde(default = "default_t")]
    pub t: [f64; 2],
    /// Model B: exactly one of `gamma` and `c = cosh γ`.
    pub gamma: Option<f64>,
    pub c: Option<f64>,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    /// θ-samples `M` per symbol.
    #[serde(default = "default_theta_samples")]
    pub theta_samples: usize,
    pub custom: Option<CustomSection>,
    pub plane: Option<PlaneSection>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub inputs: Inputs,
    pub modes: Option<ModesSection>,
    #[serde(default)]
    pub pcf: PcfSection,
}

fn default_t() -> [f64; 2] {
    [1.0, 0.0]
}

fn default_truncation() -> usize {
    8
}

fn default_theta_samples() -> usize {
    64
}

/// `w = t [Σ c_k e^{kx} + λ x]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomSection {
    /// `[k, re, im]` per exponential term.
    pub exp_terms: Vec<(u32, f64, f64)>,
    #[serde(default)]
    pub linear: [f64; 2],
}

/// Rectangular grid in the coupling plane.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneSection {
    pub origin: [f64; 2],
    pub spacing: f64,
    pub n1: usize,
    pub n2: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub reality: f64,
    pub invariance: f64,
    pub commutator: f64,
    pub zero_curvature: f64,
    pub su11: f64,
    pub field_equation: f64,
    /// Gate on the reconstructed Laplace residual; unset means report only.
    pub laplace: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            reality: 1e-10,
            invariance: 1e-12,
            commutator: 1e-8,
            zero_curvature: 1e-6,
            su11: 1e-10,
            field_equation: 1e-6,
            laplace: None,
        }
    }
}

impl Tolerances {
    pub fn override_all(&mut self, tol: f64) {
        self.reality = tol;
        self.invariance = tol;
        self.commutator = tol;
        self.zero_curvature = tol;
        self.su11 = tol;
        self.field_equation = tol;
        self.laplace = Some(tol);
    }

    /// `name=value` pairs in declaration order.
    pub fn describe(&self) -> String {
        let mut parts = vec![
            format!("reality={:e}", self.reality),
            format!("invariance={:e}", self.invariance),
            format!("commutator={:e}", self.commutator),
            format!("zero_curvature={:e}", self.zero_curvature),
            format!("su11={:e}", self.su11),
            format!("field_equation={:e}", self.field_equation),
        ];
        parts.push(match self.laplace {
            Some(v) => format!("laplace={v:e}"),
            None => "laplace=unset".into(),
        });
        parts.join(";")
    }

    fn validate(&self) -> Result<()> {
        let all = [
            self.reality,
            self.invariance,
            self.commutator,
            self.zero_curvature,
            self.su11,
            self.field_equation,
        ];
        if all
            .iter()
            .chain(self.laplace.iter())
            .any(|t| !(t.is_finite() && *t >= 0.0))
        {
            return Err(CliError::usage("tolerances must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Input tables, relative to the config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    pub symbols: Option<PathBuf>,
    pub boundary: Option<PathBuf>,
    pub field: Option<PathBuf>,
}

/// Exterior mode problem, in the Laplace frame `x = 2t`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesSection {
    pub r0: f64,
    pub r1: f64,
    pub radial_nodes: usize,
    /// Reconstruction grid, centred on the origin.
    #[serde(default = "default_grid_spacing")]
    pub grid_spacing: f64,
    #[serde(default = "default_grid_nodes")]
    pub grid_nodes: usize,
}

fn default_grid_spacing() -> f64 {
    0.05
}

fn default_grid_nodes() -> usize {
    81
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PcfSection {
    pub gammas: Vec<f64>,
}

impl Default for PcfSection {
    fn default() -> Self {
        Self {
            gammas: vec![0.5, 0.25, 0.125],
        }
    }
}

/// Parsed config plus what every output records about it.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: RunConfig,
    pub sha256: String,
    pub base_dir: PathBuf,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn load(path: &Path, tol_override: Option<f64>) -> Result<Loaded> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text =
        String::from_utf8(bytes.clone()).map_err(|_| CliError::usage(format!("{}: not UTF-8", path.display())))?;
    let mut config: RunConfig =
        toml::from_str(&text).map_err(|e| CliError::usage(format!("{}: {}", path.display(), e.message())))?;
    if let Some(tol) = tol_override {
        config.tolerances.override_all(tol);
    }
    config.validate()?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded {
        config,
        sha256: sha256_hex(&bytes),
        base_dir,
    })
}

/// Model B parameter after the degeneracy rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Deformation {
    Gamma(f64),
    /// `c = 1`, admitted only on the `B = 0` pathway.
    Degenerate,
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if !(self.t[0].is_finite() && self.t[1].is_finite()) {
            return Err(CliError::usage("t must be finite"));
        }
        if self.truncation == 0 {
            return Err(CliError::usage("truncation must be >= 1"));
        }
        if self.theta_samples < 2 {
            return Err(CliError::usage("theta_samples must be >= 2"));
        }
        if self.model != ModelKind::ModelB && (self.gamma.is_some() || self.c.is_some()) {
            return Err(CliError::usage("gamma and c apply to model_b only"));
        }
        if self.model == ModelKind::Custom && self.custom.is_none() {
            return Err(CliError::usage("model = \"custom\" needs a [custom] section"));
        }
        if self.pcf.gammas.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(CliError::usage("pcf.gammas must be finite and non-negative"));
        }
        self.tolerances.validate()
    }

    pub fn coupling(&self) -> Complex64 {
        Complex64::new(self.t[0], self.t[1])
    }

    /// Resolves `gamma` / `c` for model B. `c = 1` is a degeneracy unless the
    /// caller is on the `B = 0` pathway.
    pub fn deformation(&self, allow_degenerate: bool) -> Result<Deformation> {
        let gamma = match (self.gamma, self.c) {
            (Some(g), None) if g.is_finite() && g >= 0.0 => g,
            (None, Some(c)) if c.is_finite() && c >= 1.0 => c.acosh(),
            (Some(_), None) => return Err(CliError::usage("model_b needs gamma >= 0")),
            (None, Some(_)) => return Err(CliError::usage("model_b needs c >= 1")),
            _ => return Err(CliError::usage("model_b needs exactly one of gamma and c")),
        };
        if gamma > 0.0 {
            Ok(Deformation::Gamma(gamma))
        } else if allow_degenerate {
            Ok(Deformation::Degenerate)
        } else {
            Err(CliError::Degenerate(
                "c = 1 merges the two chains into one with double zeros; pass --allow-degenerate to pcf-check for the B = 0 limit"
                    .into(),
            ))
        }
    }

    /// `γ` for model B with `γ > 0`, `None` otherwise.
    pub fn gamma(&self) -> Result<Option<f64>> {
        match self.model {
            ModelKind::ModelB => match self.deformation(false)? {
                Deformation::Gamma(g) => Ok(Some(g)),
                Deformation::Degenerate => unreachable!("degenerate pathway not requested"),
            },
            _ => Ok(None),
        }
    }

    pub fn potential(&self) -> Result<ExpPolynomial64> {
        let t = self.coupling();
        Ok(match self.model {
            ModelKind::ModelA => ExpPolynomial::model_a(t)?,
            ModelKind::ModelB => ExpPolynomial::model_b_gamma(self.gamma()?.unwrap_or(0.0), t)?,
            ModelKind::Custom => {
                let custom = self
                    .custom
                    .as_ref()
                    .ok_or_else(|| CliError::usage("missing [custom] section"))?;
                let terms = custom
                    .exp_terms
                    .iter()
                    .map(|&(k, re, im)| (k, Complex64::new(re, im)))
                    .collect();
                ExpPolynomial::new(terms, Complex64::new(custom.linear[0], custom.linear[1]), t)?
            }
        })
    }

    pub fn plane_grid(&self) -> Result<PlaneGrid<f64>> {
        let p = self
            .plane
            .as_ref()
            .ok_or_else(|| CliError::usage("this command needs a [plane] section"))?;
        Ok(PlaneGrid::new((p.origin[0], p.origin[1]), p.spacing, p.n1, p.n2)?)
    }
}

impl Loaded {
    pub fn input(&self, which: &str, path: Option<&PathBuf>) -> Result<PathBuf> {
        let p = path.ok_or_else(|| CliError::usage(format!("inputs.{which} is not set")))?;
        Ok(if p.is_absolute() {
            p.clone()
        } else {
            self.base_dir.join(p)
        })
    }
}
