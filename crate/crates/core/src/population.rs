//! Bounded populations with fitness-based selection and truncation.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::solution::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PopulationKind {
    Feasible,
    Infeasible,
}

/// Ordered list of solutions of one feasibility kind, bounded by `capacity`.
#[derive(Debug, Clone)]
pub struct Population<G> {
    kind: PopulationKind,
    capacity: usize,
    members: Vec<Solution<G>>,
}

impl<G> Population<G> {
    pub fn new(kind: PopulationKind, capacity: usize) -> Self {
        assert!(capacity >= 1, "population capacity must be positive");
        Self {
            kind,
            capacity,
            members: Vec::new(),
        }
    }

    pub fn kind(&self) -> PopulationKind {
        self.kind
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Solution<G>] {
        &self.members
    }

    pub fn members_mut(&mut self) -> &mut [Solution<G>] {
        &mut self.members
    }

    /// Adds a solution. The router guarantees the feasibility matches `kind`;
    /// this is asserted in debug builds.
    pub fn push(&mut self, solution: Solution<G>) {
        debug_assert_eq!(
            solution.feasibility.is_feasible(),
            self.kind == PopulationKind::Feasible,
            "solution feasibility does not match population kind"
        );
        self.members.push(solution);
    }

    pub fn best(&self) -> Option<&Solution<G>> {
        self.members
            .iter()
            .reduce(|a, b| if b.ranks_above(a) { b } else { a })
    }

    pub fn mean_fitness(&self) -> Option<f64> {
        if self.members.is_empty() {
            None
        } else {
            Some(self.members.iter().map(|s| s.fitness).sum::<f64>() / self.members.len() as f64)
        }
    }

    /// Sorts members best-first (fitness descending, ties to lower id).
    pub fn sort_by_fitness(&mut self) {
        self.members.sort_by(|a, b| {
            b.fitness
                .total_cmp(&a.fitness)
                .then_with(|| a.id.cmp(&b.id))
        });
    }

    /// Keeps the `capacity` highest-fitness members, ties broken by lower id.
    /// Survivors end up in fitness-descending order.
    pub fn truncate(&mut self) {
        self.sort_by_fitness();
        self.members.truncate(self.capacity);
    }
}

/// Tournament selection of size 2: draw two members uniformly (with
/// replacement), keep the higher-fitness one, ties to the lower id. Returns
/// `n` winners drawn with replacement.
pub fn select_parents<G: Clone>(
    pop: &Population<G>,
    n: usize,
    rng: &mut RngStream,
) -> Result<Vec<Solution<G>>> {
    if pop.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let members = pop.members();
    let mut picked = Vec::with_capacity(n);
    for _ in 0..n {
        let a = &members[rng.index(members.len())];
        let b = &members[rng.index(members.len())];
        picked.push(if a.ranks_above(b) { a.clone() } else { b.clone() });
    }
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::Feasibility;

    fn sol(id: u64, fitness: f64) -> Solution<u8> {
        Solution {
            id,
            genome: 0,
            feasibility: Feasibility::Feasible,
            fitness,
            behavior: (0.0, 0.0),
            features: vec![],
            parent_ids: vec![],
            generation_born: 0,
        }
    }

    fn pop_of(capacity: usize, sols: Vec<Solution<u8>>) -> Population<u8> {
        let mut pop = Population::new(PopulationKind::Feasible, capacity);
        for s in sols {
            pop.push(s);
        }
        pop
    }

    #[test]
    fn tournament_picks_higher_fitness() {
        // Two members: every tournament draw pair resolves to A (fit 3.0)
        // unless both draws land on B.
        let pop = pop_of(4, vec![sol(0, 3.0), sol(1, 1.0)]);
        let mut rng = RngStream::new(5);
        let picks = select_parents(&pop, 200, &mut rng).unwrap();
        let a_share = picks.iter().filter(|s| s.id == 0).count() as f64 / 200.0;
        // P(A wins a tournament) = 3/4.
        assert!(a_share > 0.6 && a_share < 0.9, "share {a_share}");
    }

    #[test]
    fn singleton_population_always_selected() {
        let pop = pop_of(4, vec![sol(0, 2.0)]);
        let mut rng = RngStream::new(1);
        let picks = select_parents(&pop, 3, &mut rng).unwrap();
        assert_eq!(picks.len(), 3);
        assert!(picks.iter().all(|s| s.id == 0));
    }

    #[test]
    fn empty_population_errors() {
        let pop: Population<u8> = Population::new(PopulationKind::Feasible, 4);
        let mut rng = RngStream::new(1);
        assert_eq!(
            select_parents(&pop, 1, &mut rng).unwrap_err(),
            Error::EmptyPopulation
        );
    }

    #[test]
    fn truncate_keeps_highest_fitness() {
        let mut pop = pop_of(2, vec![sol(0, 5.0), sol(1, 3.0), sol(2, 1.0)]);
        pop.truncate();
        let fits: Vec<f64> = pop.members().iter().map(|s| s.fitness).collect();
        assert_eq!(fits, vec![5.0, 3.0]);
    }

    #[test]
    fn truncate_no_op_below_capacity() {
        let mut pop = pop_of(4, vec![sol(0, 5.0), sol(1, 3.0)]);
        pop.truncate();
        assert_eq!(pop.len(), 2);
    }

    #[test]
    fn truncate_tie_keeps_lower_id() {
        let mut pop = pop_of(1, vec![sol(7, 2.0), sol(3, 2.0)]);
        pop.truncate();
        assert_eq!(pop.members()[0].id, 3);
    }

    #[test]
    fn truncation_never_drops_a_fitter_solution() {
        // Randomized sweep: after truncation, every survivor ranks at or
        // above every discarded member.
        let mut rng = RngStream::new(11);
        for _ in 0..200 {
            let n = 1 + rng.index(12);
            let cap = 1 + rng.index(6);
            let sols: Vec<Solution<u8>> = (0..n)
                .map(|i| sol(i as u64, (rng.index(5) as f64) / 2.0))
                .collect();
            let mut pop = pop_of(cap, sols.clone());
            pop.truncate();
            assert!(pop.len() <= cap);
            let survivors: Vec<u64> = pop.members().iter().map(|s| s.id).collect();
            for dropped in sols.iter().filter(|s| !survivors.contains(&s.id)) {
                for kept in pop.members() {
                    assert!(
                        kept.ranks_above(dropped),
                        "dropped {} ranks above kept {}",
                        dropped.id,
                        kept.id
                    );
                }
            }
        }
    }
}
