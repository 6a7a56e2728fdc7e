//! The ablation registry: fifteen algorithm switches and seven layer switches.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{MemError, Result};
use crate::memory::LayerKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    TwoFactor,
    Sleep,
    VmpfcFsrs,
    Imad,
    SpectralKg,
    Compositional,
    IbBudget,
    DualProcess,
    HyperAgent,
    Neuromodulator,
    Reconsolidation,
    TripleCopy,
    PriorityMap,
    StabilityProtector,
    MetacogMonitor,
}

impl Algorithm {
    pub const ALL: [Algorithm; 15] = [
        Algorithm::TwoFactor,
        Algorithm::Sleep,
        Algorithm::VmpfcFsrs,
        Algorithm::Imad,
        Algorithm::SpectralKg,
        Algorithm::Compositional,
        Algorithm::IbBudget,
        Algorithm::DualProcess,
        Algorithm::HyperAgent,
        Algorithm::Neuromodulator,
        Algorithm::Reconsolidation,
        Algorithm::TripleCopy,
        Algorithm::PriorityMap,
        Algorithm::StabilityProtector,
        Algorithm::MetacogMonitor,
    ];

    /// The six lifecycle components layered on top of the foundational set.
    pub const LIFECYCLE: [Algorithm; 6] = [
        Algorithm::Neuromodulator,
        Algorithm::Reconsolidation,
        Algorithm::TripleCopy,
        Algorithm::PriorityMap,
        Algorithm::StabilityProtector,
        Algorithm::MetacogMonitor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::TwoFactor => "two_factor",
            Algorithm::Sleep => "sleep",
            Algorithm::VmpfcFsrs => "vmpfc_fsrs",
            Algorithm::Imad => "imad",
            Algorithm::SpectralKg => "spectral_kg",
            Algorithm::Compositional => "compositional",
            Algorithm::IbBudget => "ib_budget",
            Algorithm::DualProcess => "dual_process",
            Algorithm::HyperAgent => "hyper_agent",
            Algorithm::Neuromodulator => "neuromodulator",
            Algorithm::Reconsolidation => "reconsolidation",
            Algorithm::TripleCopy => "triple_copy",
            Algorithm::PriorityMap => "priority_map",
            Algorithm::StabilityProtector => "stability_protector",
            Algorithm::MetacogMonitor => "metacog_monitor",
        }
    }

    /// False for switches whose enabled behaviour is a documented no-op.
    pub fn is_modeled(self) -> bool {
        !matches!(
            self,
            Algorithm::Imad
                | Algorithm::SpectralKg
                | Algorithm::Compositional
                | Algorithm::IbBudget
                | Algorithm::DualProcess
                | Algorithm::HyperAgent
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = MemError;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_lowercase().replace('-', "_");
        Self::ALL.into_iter().find(|a| a.name() == wanted).ok_or_else(|| MemError::UnknownFlag(s.to_string()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub disabled: BTreeSet<Algorithm>,
    pub disabled_layers: BTreeSet<LayerKind>,
}

impl Flags {
    pub fn full() -> Self {
        Self::default()
    }

    pub fn bare() -> Self {
        Self { disabled: Algorithm::ALL.into_iter().collect(), disabled_layers: BTreeSet::new() }
    }

    pub fn without(algs: &[Algorithm]) -> Self {
        Self { disabled: algs.iter().copied().collect(), disabled_layers: BTreeSet::new() }
    }

    /// Parses names such as `sleep`, `triple_copy` or `layer:episodic`.
    pub fn parse<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut flags = Self::default();
        for raw in names {
            let name = raw.as_ref().trim();
            if name.is_empty() {
                continue;
            }
            if let Some(layer) = name.strip_prefix("layer:") {
                let kind = LayerKind::parse(layer).ok_or_else(|| MemError::UnknownFlag(name.to_string()))?;
                flags.disabled_layers.insert(kind);
            } else {
                flags.disabled.insert(name.parse()?);
            }
        }
        if flags.disabled_layers.len() == LayerKind::ALL.len() {
            return Err(MemError::InvalidArgument("at least one layer must stay enabled".into()));
        }
        Ok(flags)
    }

    pub fn on(&self, alg: Algorithm) -> bool {
        !self.disabled.contains(&alg)
    }

    pub fn layer_on(&self, layer: LayerKind) -> bool {
        !self.disabled_layers.contains(&layer)
    }

    /// Where content meant for `layer` lands once layer switches apply.
    pub fn route(&self, layer: LayerKind) -> LayerKind {
        use LayerKind::*;
        if self.layer_on(layer) {
            return layer;
        }
        let preferred: &[LayerKind] = match layer {
            Working => &[ShortTerm, Episodic, Semantic],
            ShortTerm => &[Episodic, Semantic],
            Episodic => &[Semantic, ShortTerm],
            Semantic => &[Episodic, CrossContext],
            Procedural => &[Semantic, Episodic],
            Core => &[Semantic, Episodic],
            CrossContext => &[Semantic, Episodic],
        };
        preferred
            .iter()
            .chain(LayerKind::ALL.iter())
            .copied()
            .find(|l| self.layer_on(*l))
            .unwrap_or(layer)
    }

    pub fn names(&self) -> Vec<String> {
        self.disabled
            .iter()
            .map(|a| a.name().to_string())
            .chain(self.disabled_layers.iter().map(|l| format!("layer:{}", l.name())))
            .collect()
    }
}
