//! Experiment configuration: TOML in, CSV/JSON out, versioned schemas.

use serde::{Deserialize, Serialize};
use sweepdec::lattices::{LatticeFamily, LatticeSpec};
use sweepdec::montecarlo::MeasNoise;
use sweepdec::sweep::{Rule, SweepConfig};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub family: LatticeFamily,
    /// Single size or list; exactly one of the two must be present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_direction: Option<Vec<i64>>,
}

impl LatticeSection {
    pub fn sizes(&self) -> Result<Vec<u32>, String> {
        match (&self.size, &self.sizes) {
            (Some(l), None) => Ok(vec![*l]),
            (None, Some(ls)) if !ls.is_empty() => Ok(ls.clone()),
            _ => Err("lattice section needs exactly one of `size` or a non-empty `sizes`".into()),
        }
    }

    pub fn spec(&self, size: u32) -> LatticeSpec {
        let mut spec = LatticeSpec::new(self.family, size);
        if let Some(k) = self.k {
            spec.k = k;
        }
        spec.sweep_direction = self.sweep_direction.clone();
        spec
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<Rule>,
}

impl SweepSection {
    pub fn config(&self) -> SweepConfig {
        SweepConfig::new(self.rule.unwrap_or(Rule::Greedy))
    }
}

fn default_sweeps_per_cycle() -> u32 {
    1
}

fn default_confidence() -> f64 {
    0.95
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSection {
    pub n_cyc: u32,
    pub p_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasNoise>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_cyc: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_grid: Option<Vec<f64>>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasNoise>,
    #[serde(default = "default_sweeps_per_cycle")]
    pub sweeps_per_cycle: u32,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    /// Multiple cycle-count series with their own grids; overrides the flat
    /// n_cyc/p_grid pair.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<SeriesSection>,
}

impl PlanSection {
    pub fn series(&self) -> Result<Vec<SeriesSection>, String> {
        if !self.series.is_empty() {
            if self.n_cyc.is_some() || self.p_grid.is_some() {
                return Err("plan uses either `series` or flat n_cyc/p_grid, not both".into());
            }
            return Ok(self.series.clone());
        }
        match (self.n_cyc, &self.p_grid) {
            (Some(n), Some(grid)) => Ok(vec![SeriesSection {
                n_cyc: n,
                p_grid: grid.clone(),
                trials: None,
                measurement: None,
            }]),
            _ => Err("plan needs `n_cyc` and `p_grid` (or a `series` list)".into()),
        }
    }
}

/// A complete, self-describing experiment plan.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    pub lattice: LatticeSection,
    #[serde(default)]
    pub sweep: SweepSection,
    pub plan: PlanSection,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| anyhow::anyhow!("config schema violation in {}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if let Some(v) = self.schema_version {
            if v != CONFIG_SCHEMA_VERSION {
                anyhow::bail!("unsupported config schema version {v}");
            }
        }
        let sizes = self.lattice.sizes().map_err(|e| anyhow::anyhow!(e))?;
        for &l in &sizes {
            if l < 2 {
                anyhow::bail!("lattice size {l} must be >= 2");
            }
        }
        if self.plan.trials == 0 {
            anyhow::bail!("plan.trials must be >= 1");
        }
        let series = self.plan.series().map_err(|e| anyhow::anyhow!(e))?;
        for s in &series {
            if let Some(0) = s.trials {
                anyhow::bail!("series trials must be >= 1");
            }
            if s.p_grid.is_empty() {
                anyhow::bail!("p_grid must not be empty");
            }
            for w in s.p_grid.windows(2) {
                if w[1] <= w[0] {
                    anyhow::bail!("p_grid must be strictly increasing");
                }
            }
            for &p in &s.p_grid {
                if !(0.0..=1.0).contains(&p) {
                    anyhow::bail!("error rate {p} outside [0, 1]");
                }
            }
        }
        if !(0.0..1.0).contains(&self.plan.confidence) {
            anyhow::bail!("confidence must be in (0, 1)");
        }
        if self.plan.sweeps_per_cycle == 0 {
            anyhow::bail!("sweeps_per_cycle must be >= 1");
        }
        Ok(())
    }

    /// Stable content hash of the resolved configuration.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}
