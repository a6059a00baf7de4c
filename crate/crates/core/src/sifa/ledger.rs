//! Per-parent offspring ledger and the probability-weighted fitness targets.
//!
//! Every infeasible parent gets an entry holding the fitnesses of its
//! feasible children and a tally of all its children. The surrogate's
//! training target for a parent is a statistic of those fitnesses weighted
//! by the parent's empirical probability of producing a feasible child.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fi2pop::OffspringEvent;

/// Statistic of a parent's feasible-children fitnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Mean,
    Max,
    Min,
}

impl Statistic {
    pub const ALL: [Statistic; 3] = [Statistic::Mean, Statistic::Max, Statistic::Min];

    /// Applies the statistic; `values` must be non-empty.
    pub fn apply(&self, values: &[f64]) -> f64 {
        debug_assert!(!values.is_empty());
        match self {
            Statistic::Mean => values.iter().sum::<f64>() / values.len() as f64,
            Statistic::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Statistic::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Statistic::Mean => "mean",
            Statistic::Max => "max",
            Statistic::Min => "min",
        }
    }
}

/// Offspring record for one infeasible parent.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub parent_id: u64,
    pub parent_features: Vec<f64>,
    pub feasible_child_fitnesses: Vec<f64>,
    pub total_children: u64,
}

impl LedgerEntry {
    /// Empirical probability of producing a feasible child.
    pub fn feasible_probability(&self) -> f64 {
        if self.total_children == 0 {
            0.0
        } else {
            self.feasible_child_fitnesses.len() as f64 / self.total_children as f64
        }
    }
}

/// The surrogate training target: statistic of the feasible children's
/// fitnesses times the feasible probability. Entries whose children were all
/// infeasible fall back to `epsilon_init`, the fitness floor.
pub fn weighted_statistic(entry: &LedgerEntry, stat: Statistic, epsilon_init: f64) -> Result<f64> {
    if entry.total_children == 0 {
        return Err(Error::NoOffspringYet);
    }
    if entry.feasible_child_fitnesses.is_empty() {
        return Ok(epsilon_init);
    }
    Ok(stat.apply(&entry.feasible_child_fitnesses) * entry.feasible_probability())
}

/// All ledger entries, keyed by parent id for deterministic iteration.
#[derive(Debug, Clone, Default)]
pub struct OffspringLedger {
    entries: BTreeMap<u64, LedgerEntry>,
}

impl OffspringLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, parent_id: u64) -> Option<&LedgerEntry> {
        self.entries.get(&parent_id)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LedgerEntry> {
        self.entries.values()
    }

    /// Records one offspring event. Events with feasible parents are
    /// reported as [`Error::IgnoredEvent`] and leave the ledger unchanged;
    /// callers may treat that as a no-op.
    pub fn record_offspring(&mut self, event: &OffspringEvent) -> Result<()> {
        if event.parent_feasibility.is_feasible() {
            return Err(Error::IgnoredEvent);
        }
        let entry = self
            .entries
            .entry(event.parent_id)
            .or_insert_with(|| LedgerEntry {
                parent_id: event.parent_id,
                parent_features: event.parent_features.clone(),
                feasible_child_fitnesses: Vec::new(),
                total_children: 0,
            });
        entry.total_children += 1;
        if event.child_feasibility.is_feasible() {
            entry.feasible_child_fitnesses.push(event.child_fitness);
        }
        Ok(())
    }

    /// Training set snapshot: one `(features, target)` pair per entry, in
    /// parent-id order.
    pub fn training_examples(&self, stat: Statistic, epsilon_init: f64) -> Vec<(Vec<f64>, f64)> {
        self.entries
            .values()
            .filter(|e| e.total_children > 0)
            .map(|e| {
                let target = weighted_statistic(e, stat, epsilon_init)
                    .expect("entry with children has a target");
                (e.parent_features.clone(), target)
            })
            .collect()
    }

    /// Debug dump: one row per parent with the empirical feasible
    /// probability and all three statistic targets.
    pub fn dump_csv(&self, path: &Path, epsilon_init: f64) -> Result<()> {
        let mut file =
            std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let write_err = |e| Error::io(path.display().to_string(), e);
        writeln!(
            file,
            "parent_id,feasible_probability,mean_target,max_target,min_target"
        )
        .map_err(write_err)?;
        for entry in self.entries.values() {
            let target = |stat| {
                weighted_statistic(entry, stat, epsilon_init)
                    .map(|t| t.to_string())
                    .unwrap_or_default()
            };
            writeln!(
                file,
                "{},{},{},{},{}",
                entry.parent_id,
                entry.feasible_probability(),
                target(Statistic::Mean),
                target(Statistic::Max),
                target(Statistic::Min),
            )
            .map_err(write_err)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::Feasibility;

    fn event(
        parent_id: u64,
        parent_feasibility: Feasibility,
        child_feasibility: Feasibility,
        child_fitness: f64,
    ) -> OffspringEvent {
        OffspringEvent {
            parent_id,
            parent_feasibility,
            parent_features: vec![parent_id as f64],
            child_id: 0,
            child_feasibility,
            child_fitness,
        }
    }

    #[test]
    fn records_feasible_children_and_tallies_all() {
        let mut ledger = OffspringLedger::new();
        ledger
            .record_offspring(&event(
                7,
                Feasibility::Infeasible(2),
                Feasibility::Feasible,
                2.5,
            ))
            .unwrap();
        let e = ledger.get(7).unwrap();
        assert_eq!(e.feasible_child_fitnesses, vec![2.5]);
        assert_eq!(e.total_children, 1);

        ledger
            .record_offspring(&event(
                7,
                Feasibility::Infeasible(2),
                Feasibility::Infeasible(1),
                0.001,
            ))
            .unwrap();
        let e = ledger.get(7).unwrap();
        assert_eq!(e.feasible_child_fitnesses, vec![2.5]);
        assert_eq!(e.total_children, 2);
        assert_eq!(e.feasible_probability(), 0.5);
    }

    #[test]
    fn feasible_parent_events_are_ignored() {
        let mut ledger = OffspringLedger::new();
        let err = ledger
            .record_offspring(&event(3, Feasibility::Feasible, Feasibility::Feasible, 1.0))
            .unwrap_err();
        assert_eq!(err, Error::IgnoredEvent);
        assert!(ledger.is_empty());
    }

    #[test]
    fn weighted_statistic_examples() {
        let entry = LedgerEntry {
            parent_id: 1,
            parent_features: vec![],
            feasible_child_fitnesses: vec![2.0, 4.0],
            total_children: 4,
        };
        assert_eq!(weighted_statistic(&entry, Statistic::Mean, 0.001).unwrap(), 1.5);
        assert_eq!(weighted_statistic(&entry, Statistic::Max, 0.001).unwrap(), 2.0);
        assert_eq!(weighted_statistic(&entry, Statistic::Min, 0.001).unwrap(), 1.0);
    }

    #[test]
    fn zero_feasible_children_falls_back_to_epsilon() {
        let entry = LedgerEntry {
            parent_id: 1,
            parent_features: vec![],
            feasible_child_fitnesses: vec![],
            total_children: 3,
        };
        for stat in Statistic::ALL {
            assert_eq!(weighted_statistic(&entry, stat, 0.001).unwrap(), 0.001);
        }
    }

    #[test]
    fn no_offspring_yet_is_an_error() {
        let entry = LedgerEntry {
            parent_id: 1,
            parent_features: vec![],
            feasible_child_fitnesses: vec![],
            total_children: 0,
        };
        assert_eq!(
            weighted_statistic(&entry, Statistic::Mean, 0.001).unwrap_err(),
            Error::NoOffspringYet
        );
    }

    #[test]
    fn statistic_ordering_min_mean_max() {
        let entry = LedgerEntry {
            parent_id: 1,
            parent_features: vec![],
            feasible_child_fitnesses: vec![0.5, 2.0, 3.5, 1.0],
            total_children: 9,
        };
        let min = weighted_statistic(&entry, Statistic::Min, 0.001).unwrap();
        let mean = weighted_statistic(&entry, Statistic::Mean, 0.001).unwrap();
        let max = weighted_statistic(&entry, Statistic::Max, 0.001).unwrap();
        assert!(min <= mean && mean <= max);
    }

    #[test]
    fn more_children_shrink_the_weight() {
        let base = LedgerEntry {
            parent_id: 1,
            parent_features: vec![],
            feasible_child_fitnesses: vec![2.0, 4.0],
            total_children: 2,
        };
        let mut grown = base.clone();
        grown.total_children = 5;
        for stat in Statistic::ALL {
            let before = weighted_statistic(&base, stat, 0.001).unwrap();
            let after = weighted_statistic(&grown, stat, 0.001).unwrap();
            assert!(after < before);
        }
    }

    #[test]
    fn training_examples_are_parent_id_ordered() {
        let mut ledger = OffspringLedger::new();
        for id in [9u64, 2, 5] {
            ledger
                .record_offspring(&event(
                    id,
                    Feasibility::Infeasible(1),
                    Feasibility::Feasible,
                    id as f64,
                ))
                .unwrap();
        }
        let examples = ledger.training_examples(Statistic::Mean, 0.001);
        let keys: Vec<f64> = examples.iter().map(|(f, _)| f[0]).collect();
        assert_eq!(keys, vec![2.0, 5.0, 9.0]);
        // Single feasible child out of one: target = fitness * 1.
        assert_eq!(examples[0].1, 2.0);
    }

    #[test]
    fn dump_csv_layout() {
        let mut ledger = OffspringLedger::new();
        ledger
            .record_offspring(&event(
                4,
                Feasibility::Infeasible(1),
                Feasibility::Feasible,
                3.0,
            ))
            .unwrap();
        ledger
            .record_offspring(&event(
                4,
                Feasibility::Infeasible(1),
                Feasibility::Infeasible(2),
                0.5,
            ))
            .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ledger.csv");
        ledger.dump_csv(&path, 0.001).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "parent_id,feasible_probability,mean_target,max_target,min_target"
        );
        assert_eq!(lines.next().unwrap(), "4,0.5,1.5,1.5,1.5");
    }
}
