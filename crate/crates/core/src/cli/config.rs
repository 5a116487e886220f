//! JSON scenario configuration.
//!
//! Every key is checked: unknown keys are rejected by the parser and every
//! precondition of the modules a scenario touches is checked in
//! [`ScenarioConfig::validate`] before any computation starts.

use crate::dynamics::{cfl_limit, EvolutionConfig, ExplicitSources, Scheme, SourceMode, Sources};
use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField, VectorField};
use crate::thermo::MaterialPoint;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.nx, self.ny, self.nz, self.dx, self.dy, self.dz)
            .map_err(|e| config_error("grid", e.to_string()))
    }
}

/// One term `a·sin(2π m·x/L + φ)` of a prescribed density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SineTerm {
    /// Vector component (0..=2) for currents; ignored for charge.
    #[serde(default)]
    pub component: usize,
    pub amplitude: f64,
    /// Integer mode numbers along x, y, z.
    pub mode: [i64; 3],
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSourceConfig {
    #[serde(default)]
    pub rho: Vec<SineTerm>,
    #[serde(default)]
    pub current: Vec<SineTerm>,
    #[serde(default)]
    pub rho_rate: Vec<SineTerm>,
    #[serde(default)]
    pub current_rate: Vec<SineTerm>,
}

fn sine_phase(grid: &Grid, t: &SineTerm, p: [f64; 3]) -> f64 {
    let l = grid.lengths();
    (0..3)
        .map(|a| TAU * t.mode[a] as f64 * p[a] / l[a])
        .sum::<f64>()
        + t.phase
}

fn scalar_from_terms(grid: Grid, terms: &[SineTerm]) -> ScalarField {
    ScalarField::from_fn(grid, |p| {
        terms
            .iter()
            .map(|t| t.amplitude * sine_phase(&grid, t, p).sin())
            .sum()
    })
}

fn vector_from_terms(grid: Grid, terms: &[SineTerm]) -> VectorField {
    VectorField::from_fn(grid, |p| {
        let mut v = [0.0; 3];
        for t in terms {
            v[t.component] += t.amplitude * sine_phase(&grid, t, p).sin();
        }
        v
    })
}

impl ExplicitSourceConfig {
    fn validate(&self, grid: &Grid) -> Result<()> {
        let groups = [
            ("sources.rho", &self.rho),
            ("sources.current", &self.current),
            ("sources.rho_rate", &self.rho_rate),
            ("sources.current_rate", &self.current_rate),
        ];
        for (key, terms) in groups {
            for t in terms.iter() {
                if t.component > 2 {
                    return Err(config_error(
                        key,
                        format!("component {} out of range 0..=2", t.component),
                    ));
                }
                if !(t.amplitude.is_finite() && t.phase.is_finite()) {
                    return Err(config_error(key, "amplitude and phase must be finite"));
                }
                for a in 0..3 {
                    if grid.is_degenerate(a) && t.mode[a] != 0 {
                        return Err(config_error(
                            key,
                            format!("mode along unresolved axis {a} must be 0"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn build(&self, grid: Grid) -> Result<ExplicitSources> {
        ExplicitSources::constant(
            scalar_from_terms(grid, &self.rho),
            vector_from_terms(grid, &self.current),
        )?
        .with_rates(
            scalar_from_terms(grid, &self.rho_rate),
            vector_from_terms(grid, &self.current_rate),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub sigma: f64,
    pub dtdk: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Scenario {
    Zero,
    TransverseWave {
        amplitude: f64,
        mode: i64,
    },
    ScalarMode {
        epsilon: f64,
        mode: i64,
    },
    #[serde(rename = "gaussian_t_pulse", alias = "gaussian_T_pulse")]
    GaussianTPulse {
        amplitude: f64,
        width: f64,
    },
    /// Random travelling-wave potential drawn from `seed`.
    FromPotential {
        n_modes: usize,
        max_wavenumber: i64,
    },
    /// Point heat balance with `curl B` manufactured from the Ampère-like law.
    HeatBalance {
        current: [f64; 3],
        grad_k: [f64; 3],
        de_dt: [f64; 3],
    },
    ThomsonReversal {
        current: [f64; 3],
        grad_k: [f64; 3],
        curl_b: [f64; 3],
    },
    SeebeckJump {
        base: f64,
        jump: f64,
        width: f64,
        cells: usize,
        length: f64,
        v: f64,
    },
    HeatedBall {
        radius: f64,
        kdot: f64,
        radii: Vec<f64>,
    },
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Zero => "zero",
            Scenario::TransverseWave { .. } => "transverse_wave",
            Scenario::ScalarMode { .. } => "scalar_mode",
            Scenario::GaussianTPulse { .. } => "gaussian_t_pulse",
            Scenario::FromPotential { .. } => "from_potential",
            Scenario::HeatBalance { .. } => "heat_balance",
            Scenario::ThomsonReversal { .. } => "thomson_reversal",
            Scenario::SeebeckJump { .. } => "seebeck_jump",
            Scenario::HeatedBall { .. } => "heated_ball",
        }
    }

    /// Whether the scenario advances fields in time.
    pub fn is_evolution(&self) -> bool {
        matches!(
            self,
            Scenario::Zero
                | Scenario::TransverseWave { .. }
                | Scenario::ScalarMode { .. }
                | Scenario::GaussianTPulse { .. }
                | Scenario::FromPotential { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv_path: PathBuf,
    #[serde(default)]
    pub snapshot_path: Option<PathBuf>,
    #[serde(default)]
    pub snapshot_every: Option<usize>,
}

fn default_c() -> f64 {
    1.0
}

fn default_cfl_safety() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default = "default_cfl_safety")]
    pub cfl_safety: f64,
    #[serde(default)]
    pub spectral_filter: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    pub scenario: Scenario,
    #[serde(default = "default_source_mode")]
    pub source_mode: SourceMode,
    #[serde(default)]
    pub sources: Option<ExplicitSourceConfig>,
    #[serde(default)]
    pub material: Option<MaterialConfig>,
    pub output: OutputConfig,
}

fn default_source_mode() -> SourceMode {
    SourceMode::IdentifiedWithT
}

pub(crate) fn config_error(key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(config_error(
            key,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

fn finite(key: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(config_error(key, "must be finite"))
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| config_error("<document>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn grid(&self) -> Result<Grid> {
        self.grid
            .ok_or_else(|| config_error("grid", "required for this scenario"))?
            .build()
    }

    pub fn evolution(&self) -> Result<EvolutionConfig> {
        Ok(EvolutionConfig {
            dt: self
                .dt
                .ok_or_else(|| config_error("dt", "required for this scenario"))?,
            steps: self
                .steps
                .ok_or_else(|| config_error("steps", "required for this scenario"))?,
            scheme: self.scheme,
            cfl_safety: self.cfl_safety,
            spectral_filter: self.spectral_filter,
        })
    }

    pub fn material(&self) -> Result<MaterialPoint> {
        let m = self
            .material
            .ok_or_else(|| config_error("material", "required for this scenario"))?;
        MaterialPoint::new(m.sigma, m.dtdk).map_err(|e| config_error("material", e.to_string()))
    }

    pub fn sources(&self) -> Result<Sources> {
        match self.source_mode {
            SourceMode::IdentifiedWithT => Ok(Sources::IdentifiedWithT),
            SourceMode::Explicit => {
                let grid = self.grid()?;
                let s = self.sources.clone().unwrap_or_default();
                Ok(Sources::Explicit(s.build(grid)?))
            }
        }
    }

    /// Checks every precondition of the modules the scenario will call.
    pub fn validate(&self) -> Result<()> {
        positive("c", self.c)?;
        if self.scenario.is_evolution() {
            self.validate_evolution()?;
        } else {
            self.validate_thermo()?;
        }
        if let Some(k) = self.output.snapshot_every {
            if k == 0 {
                return Err(config_error("output.snapshot_every", "must be at least 1"));
            }
            if self.output.snapshot_path.is_none() {
                return Err(config_error(
                    "output.snapshot_every",
                    "needs output.snapshot_path",
                ));
            }
        }
        if self.output.csv_path.as_os_str().is_empty() {
            return Err(config_error("output.csv_path", "must not be empty"));
        }
        Ok(())
    }

    fn validate_evolution(&self) -> Result<()> {
        let grid = self.grid()?;
        let evo = self.evolution()?;
        evo.validate(&grid, self.c).map_err(|e| match e {
            Error::CflViolation { .. } => config_error("dt", e.to_string()),
            Error::InvalidParameter { name, reason } => config_error(name, reason),
            other => other,
        })?;
        match self.source_mode {
            SourceMode::IdentifiedWithT => {
                if self.sources.is_some() {
                    return Err(config_error(
                        "sources",
                        "only allowed with source_mode \"explicit\"",
                    ));
                }
            }
            SourceMode::Explicit => {
                self.sources
                    .as_ref()
                    .ok_or_else(|| {
                        config_error("sources", "required with source_mode \"explicit\"")
                    })?
                    .validate(&grid)?;
            }
        }
        if self.material.is_some() {
            return Err(config_error("material", "not used by evolution scenarios"));
        }
        let need_x = |key: &str| {
            if grid.is_degenerate(0) {
                Err(config_error(key, "needs a resolved x axis (nx >= 4)"))
            } else {
                Ok(())
            }
        };
        match &self.scenario {
            Scenario::Zero => {}
            Scenario::TransverseWave { amplitude, mode } => {
                finite("scenario.amplitude", &[*amplitude])?;
                need_x("scenario.mode")?;
                check_mode(*mode, grid.nx)?;
            }
            Scenario::ScalarMode { epsilon, mode } => {
                finite("scenario.epsilon", &[*epsilon])?;
                need_x("scenario.mode")?;
                check_mode(*mode, grid.nx)?;
            }
            Scenario::GaussianTPulse { amplitude, width } => {
                finite("scenario.amplitude", &[*amplitude])?;
                positive("scenario.width", *width)?;
            }
            Scenario::FromPotential {
                n_modes,
                max_wavenumber,
            } => {
                if *n_modes == 0 {
                    return Err(config_error("scenario.n_modes", "must be at least 1"));
                }
                let min_n = (0..3)
                    .filter(|&a| !grid.is_degenerate(a))
                    .map(|a| grid.dims()[a])
                    .min()
                    .unwrap_or(1);
                if *max_wavenumber < 0 || 2 * *max_wavenumber as usize >= min_n {
                    return Err(config_error(
                        "scenario.max_wavenumber",
                        format!("must lie in 0..{} for this grid", min_n.div_ceil(2)),
                    ));
                }
            }
            _ => unreachable!("thermo scenarios are validated separately"),
        }
        Ok(())
    }

    fn validate_thermo(&self) -> Result<()> {
        for (key, present) in [
            ("grid", self.grid.is_some()),
            ("dt", self.dt.is_some()),
            ("steps", self.steps.is_some()),
            ("spectral_filter", self.spectral_filter.is_some()),
            ("sources", self.sources.is_some()),
            ("output.snapshot_path", self.output.snapshot_path.is_some()),
        ] {
            if present {
                return Err(config_error(
                    key,
                    format!("not used by scenario {}", self.scenario.name()),
                ));
            }
        }
        match &self.scenario {
            Scenario::HeatBalance {
                current,
                grad_k,
                de_dt,
            } => {
                self.material()?;
                finite("scenario", &[current.as_slice(), grad_k, de_dt].concat())?;
            }
            Scenario::ThomsonReversal {
                current,
                grad_k,
                curl_b,
            } => {
                self.material()?;
                finite("scenario", &[current.as_slice(), grad_k, curl_b].concat())?;
                let jg: f64 = (0..3).map(|a| current[a] * grad_k[a]).sum();
                if jg == 0.0 {
                    return Err(config_error(
                        "scenario.current",
                        "J·grad K = 0 cannot isolate the reversible heat",
                    ));
                }
            }
            Scenario::SeebeckJump {
                base,
                jump,
                width,
                cells,
                length,
                v,
            } => {
                finite("scenario", &[*base, *jump])?;
                positive("scenario.length", *length)?;
                positive("scenario.width", *width)?;
                if *cells < 4 {
                    return Err(config_error("scenario.cells", "need at least 4 cells"));
                }
                if *width < 4.0 * length / *cells as f64 {
                    return Err(config_error(
                        "scenario.width",
                        "step must span at least 4 cells",
                    ));
                }
                if !(v.abs() < self.c) {
                    return Err(config_error(
                        "scenario.v",
                        format!("|v| must be below c = {}", self.c),
                    ));
                }
            }
            Scenario::HeatedBall {
                radius,
                kdot,
                radii,
            } => {
                positive("scenario.radius", *radius)?;
                finite("scenario.kdot", &[*kdot])?;
                finite("scenario.radii", radii)?;
                let m = self
                    .material
                    .ok_or_else(|| config_error("material", "required for this scenario"))?;
                finite("material.dtdk", &[m.dtdk])?;
            }
            _ => unreachable!("evolution scenarios are validated separately"),
        }
        Ok(())
    }

    /// The CFL bound for the configured grid, when there is one.
    pub fn cfl_limit(&self) -> Option<f64> {
        self.grid().ok().map(|g| cfl_limit(&g, self.c))
    }
}

fn check_mode(mode: i64, n: usize) -> Result<()> {
    if mode == 0 || 2 * mode.unsigned_abs() as usize >= n {
        return Err(config_error(
            "scenario.mode",
            format!("must be non-zero and below n/2 = {}", n / 2),
        ));
    }
    Ok(())
}
