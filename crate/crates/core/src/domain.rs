//! The contract a problem domain implements to plug into the algorithms.

use crate::error::Result;
use crate::rng::RngStream;
use crate::solution::{Feasibility, Solution};

/// Everything a domain derives from one genome.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Count of violated hard constraints; 0 means feasible.
    pub violations: u32,
    /// The domain utility; becomes the solution's fitness when feasible.
    pub feasible_fitness: f64,
    /// Behavior descriptor (BC1, BC2), defined for every decodable genome.
    pub behavior: (f64, f64),
    /// Surrogate input vector, length [`Domain::feature_dim`].
    pub features: Vec<f64>,
}

pub trait Domain {
    type Genome: Clone;

    /// Draws a random genome. Samplers must always produce decodable genomes.
    fn sample(&self, rng: &mut RngStream) -> Self::Genome;

    fn evaluate(&self, genome: &Self::Genome) -> Result<Evaluation>;

    fn crossover(
        &self,
        a: &Self::Genome,
        b: &Self::Genome,
        rng: &mut RngStream,
    ) -> Result<(Self::Genome, Self::Genome)>;

    /// Perturbs each gene independently with probability `rate`.
    fn mutate(&self, genome: &Self::Genome, rate: f64, rng: &mut RngStream) -> Self::Genome;

    fn feature_dim(&self) -> usize;
}

/// Evaluates a genome into a full solution record.
///
/// Feasible solutions get the domain fitness; infeasible solutions are left
/// at fitness 0 for the caller's infeasible-fitness policy to assign.
pub fn evaluate<D: Domain>(
    domain: &D,
    genome: D::Genome,
    id: u64,
    parent_ids: Vec<u64>,
    generation_born: u32,
) -> Result<Solution<D::Genome>> {
    let eval = domain.evaluate(&genome)?;
    let feasibility = Feasibility::from_violations(eval.violations);
    let fitness = if feasibility.is_feasible() {
        eval.feasible_fitness
    } else {
        0.0
    };
    Ok(Solution {
        id,
        genome,
        feasibility,
        fitness,
        behavior: eval.behavior,
        features: eval.features,
        parent_ids,
        generation_born,
    })
}
