use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ensemble::{make_partition, EnsembleSpec, EntryLaw, PartitionSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Esd,
    Moments,
    Stieltjes,
    Walks,
    Hankel,
    Charfn,
    Energy,
    Decomposition,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Esd,
        ExperimentKind::Moments,
        ExperimentKind::Stieltjes,
        ExperimentKind::Walks,
        ExperimentKind::Hankel,
        ExperimentKind::Charfn,
        ExperimentKind::Energy,
        ExperimentKind::Decomposition,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Esd => "esd",
            ExperimentKind::Moments => "moments",
            ExperimentKind::Stieltjes => "stieltjes",
            ExperimentKind::Walks => "walks",
            ExperimentKind::Hankel => "hankel",
            ExperimentKind::Charfn => "charfn",
            ExperimentKind::Energy => "energy",
            ExperimentKind::Decomposition => "decomposition",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

/// Matrix ensemble section. Without `fractions` or `part_size` the matrix
/// has a single part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fractions: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part_size: Option<usize>,
    pub law_intra: EntryLaw,
    pub law_cross: EntryLaw,
}

impl EnsembleConfig {
    pub fn partition(&self) -> Result<PartitionSpec> {
        let at = |field: &str, e: Error| Error::config(format!("ensemble.{field}"), e.to_string());
        match (&self.fractions, self.part_size) {
            (Some(_), Some(_)) => Err(Error::config(
                "ensemble",
                "give at most one of `fractions` and `part_size`",
            )),
            (Some(f), None) => make_partition(self.n, f).map_err(|e| at("fractions", e)),
            (None, Some(s)) => PartitionSpec::uniform_parts(self.n, s).map_err(|e| at("part_size", e)),
            (None, None) => PartitionSpec::from_sizes(vec![self.n]).map_err(|e| at("n", e)),
        }
    }

    pub fn spec(&self, seed: u64) -> Result<EnsembleSpec> {
        let partition = self.partition()?;
        self.law_intra
            .validate()
            .map_err(|e| Error::config("ensemble.law_intra", e.to_string()))?;
        self.law_cross
            .validate()
            .map_err(|e| Error::config("ensemble.law_cross", e.to_string()))?;
        EnsembleSpec::new(partition, self.law_intra.clone(), self.law_cross.clone(), seed)
    }
}

/// Random graph section. Without `fractions` the host is the complete graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    pub n: usize,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fractions: Option<Vec<f64>>,
    #[serde(default)]
    pub large_parts: Vec<usize>,
}

impl GraphConfig {
    pub fn partition(&self) -> Result<PartitionSpec> {
        match &self.fractions {
            Some(f) => make_partition(self.n, f)
                .map_err(|e| Error::config("graph.fractions", e.to_string())),
            None => PartitionSpec::singletons(self.n)
                .map_err(|e| Error::config("graph.n", e.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalksConfig {
    /// Longest walk length tabulated.
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HankelConfig {
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharFnConfig {
    pub nuhat_sq: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    /// Spacing of the tabulated curve.
    #[serde(default = "default_t_step")]
    pub t_step: f64,
}

fn default_sigma() -> f64 {
    1.0
}
fn default_t_max() -> f64 {
    20.0
}
fn default_t_step() -> f64 {
    0.05
}
fn default_replicates() -> usize {
    1
}
fn default_bins() -> usize {
    40
}
fn default_max_k() -> u32 {
    8
}
fn default_z_grid() -> Vec<[f64; 2]> {
    vec![[-1.0, 0.1], [-0.5, 0.1], [0.0, 0.1], [0.5, 0.1], [0.0, 1.0], [2.0, 0.5]]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ExperimentKind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphConfig>,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
    #[serde(default = "default_max_k")]
    pub max_k: u32,
    #[serde(default = "default_z_grid")]
    pub z_grid: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walks: Option<WalksConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hankel: Option<HankelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charfn: Option<CharFnConfig>,
}

impl ExperimentConfig {
    /// Parses JSON, reporting the path of the offending field on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(path, e.into_inner().to_string())
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("<file>", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn kind(&self) -> Result<ExperimentKind> {
        self.kind.ok_or_else(|| Error::config("kind", "experiment kind not set"))
    }

    pub fn ensemble(&self) -> Result<&EnsembleConfig> {
        self.ensemble
            .as_ref()
            .ok_or_else(|| Error::config("ensemble", "this experiment needs an `ensemble` section"))
    }

    pub fn graph(&self) -> Result<&GraphConfig> {
        self.graph
            .as_ref()
            .ok_or_else(|| Error::config("graph", "this experiment needs a `graph` section"))
    }

    /// Checks everything the chosen kind depends on.
    pub fn validate(&self) -> Result<()> {
        let kind = self.kind()?;
        if self.replicates < 1 {
            return Err(Error::config("replicates", "at least one replicate is required"));
        }
        if self.bins < 2 {
            return Err(Error::config("bins", "at least two bins are required"));
        }
        if let Some([lo, hi]) = self.range {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config("range", "need finite lo < hi"));
            }
        }
        for (i, z) in self.z_grid.iter().enumerate() {
            if !(z[0].is_finite() && z[1].is_finite() && z[1] > 0.0) {
                return Err(Error::config(format!("z_grid[{i}]"), "need finite re and im > 0"));
            }
        }
        if let Some(e) = &self.ensemble {
            e.spec(self.seed)?;
        }
        if let Some(g) = &self.graph {
            g.partition()?;
            if !(0.0..=1.0).contains(&g.p) {
                return Err(Error::config("graph.p", "edge probability must lie in [0, 1]"));
            }
        }
        match kind {
            ExperimentKind::Esd | ExperimentKind::Stieltjes => {
                self.ensemble()?;
            }
            ExperimentKind::Moments => {
                self.ensemble()?;
                if self.max_k < 1 || self.max_k > 16 {
                    return Err(Error::config("max_k", "max_k must lie in 1..=16"));
                }
            }
            ExperimentKind::Hankel => {
                self.ensemble()?;
                let k = self.hankel.as_ref().map_or(3, |h| h.k);
                if !(1..=5).contains(&k) {
                    return Err(Error::config("hankel.k", "k must lie in 1..=5"));
                }
            }
            ExperimentKind::Walks => {
                let w = self
                    .walks
                    .as_ref()
                    .ok_or_else(|| Error::config("walks", "this experiment needs a `walks` section"))?;
                if !(1..=crate::walks::MAX_SHAPE_LEN).contains(&w.k) {
                    return Err(Error::config("walks.k", "k must lie in 1..=12"));
                }
            }
            ExperimentKind::Charfn => {
                let c = self
                    .charfn
                    .as_ref()
                    .ok_or_else(|| Error::config("charfn", "this experiment needs a `charfn` section"))?;
                if !(c.nuhat_sq > 0.0 && c.nuhat_sq < 0.5) {
                    return Err(Error::config("charfn.nuhat_sq", "must lie in (0, 1/2)"));
                }
                if !(c.sigma > 0.0) {
                    return Err(Error::config("charfn.sigma", "must be positive"));
                }
                let limit = 60.0 / (c.nuhat_sq.sqrt() * c.sigma);
                if !(c.t_max > 0.0 && c.t_max <= limit) {
                    return Err(Error::config("charfn.t_max", format!("must lie in (0, {limit}]")));
                }
                if !(c.t_step > 0.0) {
                    return Err(Error::config("charfn.t_step", "must be positive"));
                }
            }
            ExperimentKind::Energy => {
                let g = self.graph()?;
                if !(g.p > 0.0 && g.p < 1.0) {
                    return Err(Error::config("graph.p", "energy predictions need 0 < p < 1"));
                }
            }
            ExperimentKind::Decomposition => {
                let g = self.graph()?;
                let parts = g.partition()?.num_parts();
                if g.fractions.is_none() {
                    return Err(Error::config("graph.fractions", "a multipartite host is required"));
                }
                if let Some(&bad) = g.large_parts.iter().find(|&&i| i >= parts) {
                    return Err(Error::config(
                        "graph.large_parts",
                        format!("part index {bad} out of range for {parts} parts"),
                    ));
                }
            }
        }
        Ok(())
    }
}
