//! Labeled energy levels shared by every engine.

use serde::{Deserialize, Serialize};

/// Which engine produced a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Exact,
    Ccm,
    Analytic,
    Variational,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Exact => "exact",
            Engine::Ccm => "ccm",
            Engine::Analytic => "analytic",
            Engine::Variational => "variational",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exact" => Some(Engine::Exact),
            "ccm" => Some(Engine::Ccm),
            "analytic" => Some(Engine::Analytic),
            "variational" => Some(Engine::Variational),
            _ => None,
        }
    }
}

/// One level. `labels` is `(m, n)` for the exact oracle, `(nx, ny)` for the
/// analytic formulas and absent for collocation eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledLevel {
    pub energy: f64,
    pub labels: Option<(i64, i64)>,
    pub s: Option<u8>,
    pub multiplicity: u32,
    pub engine: Engine,
}

impl LabeledLevel {
    pub fn unlabeled(energy: f64, engine: Engine) -> Self {
        Self {
            energy,
            labels: None,
            s: None,
            multiplicity: 1,
            engine,
        }
    }
}

/// Levels sorted by energy; degenerate levels are stored once with their
/// multiplicity, and state indices count that multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    levels: Vec<LabeledLevel>,
}

impl Spectrum {
    /// Sorts by energy, ties broken by labels so the order is deterministic.
    pub fn new(mut levels: Vec<LabeledLevel>) -> Self {
        levels.sort_by(|a, b| {
            a.energy
                .total_cmp(&b.energy)
                .then_with(|| a.labels.cmp(&b.labels))
                .then_with(|| a.s.cmp(&b.s))
        });
        Self { levels }
    }

    pub fn levels(&self) -> &[LabeledLevel] {
        &self.levels
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Number of distinct levels.
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Number of states, multiplicity counted.
    pub fn state_count(&self) -> usize {
        self.levels.iter().map(|l| l.multiplicity as usize).sum()
    }

    /// Energies with each level repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.state_count());
        for l in &self.levels {
            out.extend(std::iter::repeat_n(l.energy, l.multiplicity as usize));
        }
        out
    }

    /// Energy of state `i` (zero-based, multiplicity counted).
    pub fn state_energy(&self, i: usize) -> Option<f64> {
        let mut seen = 0usize;
        for l in &self.levels {
            seen += l.multiplicity as usize;
            if i < seen {
                return Some(l.energy);
            }
        }
        None
    }

    /// States with energy `<= e`.
    pub fn count_below(&self, e: f64) -> usize {
        self.levels
            .iter()
            .take_while(|l| l.energy <= e)
            .map(|l| l.multiplicity as usize)
            .sum()
    }

    /// Keeps the fewest leading levels holding at least `n_states` states.
    /// Degenerate levels are never split, so the result may hold one extra
    /// state.
    pub fn truncate_states(&mut self, n_states: usize) {
        let mut seen = 0usize;
        let mut keep = 0usize;
        for l in &self.levels {
            if seen >= n_states {
                break;
            }
            seen += l.multiplicity as usize;
            keep += 1;
        }
        self.levels.truncate(keep);
    }
}
