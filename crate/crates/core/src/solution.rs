//! The solution record shared by every algorithm in the crate.

/// Constraint verdict for an evaluated solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    /// Number of violated constraints; always at least 1.
    Infeasible(u32),
}

impl Feasibility {
    pub fn from_violations(violations: u32) -> Self {
        if violations == 0 {
            Feasibility::Feasible
        } else {
            Feasibility::Infeasible(violations)
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }

    pub fn violations(&self) -> u32 {
        match self {
            Feasibility::Feasible => 0,
            Feasibility::Infeasible(v) => *v,
        }
    }
}

/// An evaluated candidate: genome plus everything derived from it.
///
/// `features` caches the domain's surrogate inputs so infeasible fitness can
/// be reassigned without re-decoding the genome.
#[derive(Debug, Clone)]
pub struct Solution<G> {
    pub id: u64,
    pub genome: G,
    pub feasibility: Feasibility,
    /// Non-negative. For feasible solutions this is the domain fitness; for
    /// infeasible solutions it is set by the active infeasible-fitness policy.
    pub fitness: f64,
    /// Behavior descriptor (BC1, BC2), present for feasible and infeasible
    /// solutions alike so grid-based algorithms can bin both.
    pub behavior: (f64, f64),
    pub features: Vec<f64>,
    pub parent_ids: Vec<u64>,
    pub generation_born: u32,
}

impl<G> Solution<G> {
    /// Ranking used everywhere: higher fitness first, ties to the lower id
    /// (the older solution survives).
    pub fn ranks_above(&self, other: &Self) -> bool {
        self.fitness > other.fitness || (self.fitness == other.fitness && self.id < other.id)
    }
}

/// Monotone id source; one per run.
#[derive(Debug, Default)]
pub struct IdGen {
    next: u64,
}

impl IdGen {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn next_id(&mut self) -> u64 {
        let id = self.next;
        self.next += 1;
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasibility_from_violations() {
        assert_eq!(Feasibility::from_violations(0), Feasibility::Feasible);
        assert_eq!(Feasibility::from_violations(3), Feasibility::Infeasible(3));
        assert_eq!(Feasibility::Infeasible(3).violations(), 3);
        assert_eq!(Feasibility::Feasible.violations(), 0);
    }

    #[test]
    fn ranking_breaks_ties_by_lower_id() {
        let mk = |id, fitness| Solution {
            id,
            genome: (),
            feasibility: Feasibility::Feasible,
            fitness,
            behavior: (0.0, 0.0),
            features: vec![],
            parent_ids: vec![],
            generation_born: 0,
        };
        assert!(mk(7, 2.0).ranks_above(&mk(3, 1.0)));
        assert!(mk(3, 2.0).ranks_above(&mk(7, 2.0)));
        assert!(!mk(7, 2.0).ranks_above(&mk(3, 2.0)));
    }
}
