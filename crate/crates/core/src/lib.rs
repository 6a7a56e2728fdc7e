//! A seven-layer agent memory engine with decay, spaced review, replay,
//! Bayesian confidence, neuromodulation and reconsolidation, plus the
//! experiment harness that ablates them.

pub mod bayes;
pub mod cli;
pub mod coordinator;
pub mod decay;
pub mod error;
pub mod fsrs;
pub mod harness;
pub mod kg;
pub mod memory;
pub mod neuro;
pub mod priority;
pub mod recon;
pub mod rng;
pub mod sleep;
pub mod text;

pub use coordinator::{ablation_registry, Algorithm, ContentKind, Draft, EngineConfig, Flags, MemoryCoordinator, Query};
pub use error::{MemError, Result};
pub use memory::{ItemId, LayerKind, MemoryItem, SimClock};
