//! Four neuromodulator channels with tonic baselines and decaying phasic bursts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, MemError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Dopamine,
    Norepinephrine,
    Serotonin,
    Acetylcholine,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::Dopamine, Channel::Norepinephrine, Channel::Serotonin, Channel::Acetylcholine];

    fn slot(self) -> usize {
        self as usize
    }

    fn opponent(self) -> Option<Channel> {
        match self {
            Channel::Dopamine => Some(Channel::Serotonin),
            Channel::Serotonin => Some(Channel::Dopamine),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Reward,
    Punishment,
    Novelty,
    Threat,
    GoalProgress,
    Contradiction,
    UserUrgency,
    Idle,
}

impl EventKind {
    pub const ALL: [EventKind; 8] = [
        EventKind::Reward,
        EventKind::Punishment,
        EventKind::Novelty,
        EventKind::Threat,
        EventKind::GoalProgress,
        EventKind::Contradiction,
        EventKind::UserUrgency,
        EventKind::Idle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EventKind::Reward => "reward",
            EventKind::Punishment => "punishment",
            EventKind::Novelty => "novelty",
            EventKind::Threat => "threat",
            EventKind::GoalProgress => "goal_progress",
            EventKind::Contradiction => "contradiction",
            EventKind::UserUrgency => "user_urgency",
            EventKind::Idle => "idle",
        }
    }

    /// Direct bursts per channel, before opposition coupling.
    pub fn bursts(self) -> &'static [(Channel, f64)] {
        use Channel::*;
        match self {
            EventKind::Reward => &[(Dopamine, 0.3)],
            EventKind::Punishment => &[(Dopamine, -0.2), (Norepinephrine, 0.1)],
            EventKind::Novelty => &[(Acetylcholine, 0.2), (Dopamine, 0.1)],
            EventKind::Threat => &[(Norepinephrine, 0.4), (Serotonin, -0.1)],
            EventKind::GoalProgress => &[(Dopamine, 0.15), (Acetylcholine, 0.05)],
            EventKind::Contradiction => &[(Norepinephrine, 0.2), (Acetylcholine, 0.1)],
            EventKind::UserUrgency => &[(Norepinephrine, 0.25), (Acetylcholine, 0.15)],
            EventKind::Idle => &[(Serotonin, 0.2)],
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EventKind {
    type Err = MemError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| MemError::UnknownEvent(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeuroConfig {
    pub baseline: f64,
    /// Fraction of the tonic offset kept per `tonic_step` seconds.
    pub tonic_decay: f64,
    pub tonic_step: f64,
    pub phasic_half_life: f64,
    pub opposition: f64,
}

impl Default for NeuroConfig {
    fn default() -> Self {
        Self {
            baseline: 0.5,
            tonic_decay: 0.95,
            tonic_step: 60.0,
            phasic_half_life: 300.0,
            opposition: -0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Burst {
    pub channel: Channel,
    /// Current contribution; halves every half-life.
    pub magnitude: f64,
    pub start_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeuroState {
    pub cfg: NeuroConfig,
    tonic: [f64; 4],
    bursts: Vec<Burst>,
    now: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationOutputs {
    pub learning_rate: f64,
    pub exploration_bias: f64,
    pub consolidation_patience: f64,
    pub attention_ratio: f64,
}

const EXPIRED: f64 = 1e-6;

impl NeuroState {
    pub fn new(cfg: NeuroConfig) -> Self {
        Self { cfg, tonic: [cfg.baseline; 4], bursts: Vec::new(), now: 0.0 }
    }

    pub fn with_tonic(cfg: NeuroConfig, tonic: [f64; 4]) -> Self {
        Self { tonic: tonic.map(|t| t.clamp(0.0, 1.0)), ..Self::new(cfg) }
    }

    pub fn level(&self, ch: Channel) -> f64 {
        let phasic: f64 = self.bursts.iter().filter(|b| b.channel == ch).map(|b| b.magnitude).sum();
        (self.tonic[ch.slot()] + phasic).clamp(0.0, 1.0)
    }

    pub fn tonic(&self, ch: Channel) -> f64 {
        self.tonic[ch.slot()]
    }

    pub fn levels(&self) -> [f64; 4] {
        Channel::ALL.map(|c| self.level(c))
    }

    pub fn bursts(&self) -> &[Burst] {
        &self.bursts
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn tick(&mut self, dt: f64) -> Result<()> {
        ensure(dt > 0.0 && dt.is_finite(), "tick needs a positive step")?;
        let keep = self.cfg.tonic_decay.powf(dt / self.cfg.tonic_step);
        let b = self.cfg.baseline;
        for t in &mut self.tonic {
            *t = b + (*t - b) * keep;
        }
        let halve = 0.5f64.powf(dt / self.cfg.phasic_half_life);
        for burst in &mut self.bursts {
            burst.magnitude *= halve;
        }
        self.bursts.retain(|b| b.magnitude.abs() > EXPIRED);
        self.now += dt;
        Ok(())
    }

    pub fn fire(&mut self, kind: EventKind) {
        for &(ch, mag) in kind.bursts() {
            self.push(ch, mag);
            if let Some(opp) = ch.opponent() {
                self.push(opp, self.cfg.opposition * mag);
            }
        }
    }

    pub fn fire_named(&mut self, kind: &str) -> Result<()> {
        self.fire(kind.parse()?);
        Ok(())
    }

    fn push(&mut self, channel: Channel, magnitude: f64) {
        if magnitude == 0.0 {
            return;
        }
        self.bursts.push(Burst { channel, magnitude, start_time: self.now });
    }

    pub fn outputs(&self) -> ModulationOutputs {
        ModulationOutputs {
            learning_rate: self.level(Channel::Norepinephrine),
            exploration_bias: self.level(Channel::Dopamine),
            consolidation_patience: self.level(Channel::Serotonin),
            attention_ratio: self.level(Channel::Acetylcholine),
        }
    }
}

impl Default for NeuroState {
    fn default() -> Self {
        Self::new(NeuroConfig::default())
    }
}
