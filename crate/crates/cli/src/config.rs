//! Run configuration: a TOML file with sectioned keys plus `--set` overrides
//! (overrides win). Every run embeds the fully resolved configuration in its
//! output headers.

use serde::{Deserialize, Serialize};
use workstats_core::model::ModelKind;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    Exact,
    Tfim,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    TfimPeriodic,
    ClassicalIsing,
}

impl ModelName {
    pub fn to_model(self) -> ModelKind {
        match self {
            ModelName::TfimPeriodic => ModelKind::TfimPeriodic,
            ModelName::ClassicalIsing => ModelKind::ClassicalIsingLongitudinal,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuenchSection {
    pub model: ModelName,
    pub n_sites: usize,
    pub beta: f64,
    pub lambda0: f64,
    pub lambda_tau: f64,
}

impl Default for QuenchSection {
    fn default() -> Self {
        Self {
            model: ModelName::TfimPeriodic,
            n_sites: 8,
            beta: 1.0,
            lambda0: 0.5,
            lambda_tau: 0.51,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineSection {
    pub kind: EngineKind,
}

impl Default for EngineSection {
    fn default() -> Self {
        Self {
            kind: EngineKind::Tfim,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub lambda0_min: f64,
    pub lambda0_max: f64,
    pub lambda0_steps: usize,
    pub u_min: f64,
    pub u_max: f64,
    pub u_steps: usize,
    /// Extra temperature axis for `sweep`/`cumulants`; empty means the
    /// single quench.beta.
    pub beta_list: Vec<f64>,
    /// Extra size axis for `sweep`/`cumulants`; empty means the single
    /// quench.n_sites.
    pub n_list: Vec<usize>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            lambda0_min: 0.0,
            lambda0_max: 2.0,
            lambda0_steps: 41,
            u_min: 0.0,
            u_max: 6.0,
            u_steps: 121,
            beta_list: Vec::new(),
            n_list: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LevelsSection {
    pub values: Vec<f64>,
}

impl Default for LevelsSection {
    fn default() -> Self {
        Self {
            values: vec![0.9, 0.7, 0.5, 0.3, 0.1],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingSection {
    pub n1: usize,
    pub dlam1: f64,
    pub n2: usize,
    pub dlam2: f64,
}

impl Default for ScalingSection {
    fn default() -> Self {
        Self {
            n1: 100,
            dlam1: 0.01,
            n2: 10,
            dlam2: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsSection {
    pub dense_cap: usize,
    /// 0 selects the automatic 1e-8 * ||H|| rule.
    pub degeneracy_tol: f64,
    pub fd_step: f64,
    pub cumulant_max: usize,
    pub series_n_cut: usize,
    pub series_rel_tol: f64,
}

impl Default for NumericsSection {
    fn default() -> Self {
        Self {
            dense_cap: 12,
            degeneracy_tol: 0.0,
            fd_step: 1e-3,
            cumulant_max: 4,
            series_n_cut: 200,
            series_rel_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    /// Base name for output files; empty selects the command name.
    pub name: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub quench: QuenchSection,
    pub engine: EngineSection,
    pub sweep: SweepSection,
    pub levels: LevelsSection,
    pub scaling: ScalingSection,
    pub numerics: NumericsSection,
    pub output: OutputSection,
}

impl RunConfig {
    /// Parse a TOML file, then apply `--set key=value` overrides (dotted
    /// paths; values parsed as TOML, falling back to strings).
    pub fn load(path: Option<&std::path::Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut table: toml::Table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Config(format!("cannot read config {}: {e}", p.display()))
                })?;
                text.parse()
                    .map_err(|e| CliError::Config(format!("config parse error: {e}")))?
            }
            None => toml::Table::new(),
        };
        for kv in overrides {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--set expects key=value, got {kv}")))?;
            apply_override(&mut table, key.trim(), value.trim())?;
        }
        let cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e| CliError::Config(format!("invalid configuration: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let q = &self.quench;
        self.quench_spec()
            .map_err(|e| CliError::Config(e.to_string()))?;
        for &n in std::iter::once(&q.n_sites).chain(&self.sweep.n_list) {
            if self.engine.kind != EngineKind::Tfim && n > self.numerics.dense_cap {
                return Err(CliError::Config(format!(
                    "engine '{:?}' needs n_sites <= dense cap {} (got {n})",
                    self.engine.kind, self.numerics.dense_cap
                )));
            }
            if self.engine.kind != EngineKind::Exact && n % 2 != 0 {
                return Err(CliError::Config(format!(
                    "the tfim engine needs an even n_sites, got {n}"
                )));
            }
        }
        if self.engine.kind != EngineKind::Exact && q.model != ModelName::TfimPeriodic {
            return Err(CliError::Config(
                "the tfim engine only treats model = \"tfim-periodic\"".into(),
            ));
        }
        for &beta in &self.sweep.beta_list {
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(CliError::Config(format!(
                    "sweep.beta_list entries must be finite and positive, got {beta}"
                )));
            }
        }
        if self.sweep.lambda0_steps < 1 || self.sweep.u_steps < 2 {
            return Err(CliError::Config(
                "sweep needs lambda0_steps >= 1 and u_steps >= 2".into(),
            ));
        }
        Ok(())
    }

    /// The (n_sites, beta) combinations a sweep-style command covers, with
    /// a file-name suffix per combination (empty for a single run).
    pub fn sweep_axes(&self) -> Vec<(usize, f64, String)> {
        let ns: Vec<usize> = if self.sweep.n_list.is_empty() {
            vec![self.quench.n_sites]
        } else {
            self.sweep.n_list.clone()
        };
        let betas: Vec<f64> = if self.sweep.beta_list.is_empty() {
            vec![self.quench.beta]
        } else {
            self.sweep.beta_list.clone()
        };
        let single = ns.len() == 1 && betas.len() == 1;
        let mut out = Vec::new();
        for &n in &ns {
            for &beta in &betas {
                let suffix = if single {
                    String::new()
                } else {
                    format!(".N{n}.b{beta}")
                };
                out.push((n, beta, suffix));
            }
        }
        out
    }

    /// The experiment definition with the domain-level invariants applied.
    pub fn quench_spec(&self) -> workstats_core::Result<workstats_core::QuenchSpec> {
        workstats_core::QuenchSpec::new(
            self.quench.model.to_model(),
            self.quench.n_sites,
            self.quench.beta,
            self.quench.lambda0,
            self.quench.lambda_tau,
        )
    }

    /// Resolved configuration as `# key = value` header lines, in a fixed
    /// order so identical configs produce byte-identical outputs.
    pub fn header_lines(&self) -> Vec<String> {
        let text = toml::to_string(self).expect("config serializes");
        let mut section = String::new();
        let mut lines = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                section = name.trim_end_matches(']').to_string();
            } else {
                lines.push(format!("# config.{section}.{line}"));
            }
        }
        lines
    }

    pub fn lambda0_grid(&self) -> Vec<f64> {
        workstats_core::numerics::linspace(
            self.sweep.lambda0_min,
            self.sweep.lambda0_max,
            self.sweep.lambda0_steps,
        )
    }

    pub fn u_grid(&self) -> Vec<f64> {
        workstats_core::numerics::linspace(self.sweep.u_min, self.sweep.u_max, self.sweep.u_steps)
    }
}

fn apply_override(table: &mut toml::Table, key: &str, value: &str) -> Result<(), CliError> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.is_empty() || parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("bad --set key: {key}")));
    }
    let parsed: toml::Value = value
        .parse::<toml::Value>()
        .unwrap_or_else(|_| toml::Value::String(value.to_string()));
    let mut cur = table;
    for part in &parts[..parts.len() - 1] {
        cur = cur
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("--set path {key} crosses a non-table")))?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}
