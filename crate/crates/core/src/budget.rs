use serde::{Deserialize, Serialize};

/// Work limits. Exceeding one yields `Error::BudgetExceeded` instead of a long run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Upper bound on the predicted number of node partitions explored by the
    /// minimal-multicut enumerator.
    pub max_partitions: u128,
    /// Largest edge count accepted by the hull engine.
    pub max_hull_edges: usize,
    /// Largest generator count accepted by the hull engine.
    pub max_generators: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_partitions: 100_000_000, max_hull_edges: 24, max_generators: 50_000 }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_partitions: u128::MAX, max_hull_edges: usize::MAX, max_generators: usize::MAX }
    }

    /// Scales every limit by `factor` (used by the `--budget` flag).
    pub fn scaled(factor: f64) -> Self {
        let d = Budget::default();
        let scale = |x: f64| (x * factor).max(1.0);
        Budget {
            max_partitions: scale(d.max_partitions as f64) as u128,
            max_hull_edges: scale(d.max_hull_edges as f64) as usize,
            max_generators: scale(d.max_generators as f64) as usize,
        }
    }
}
