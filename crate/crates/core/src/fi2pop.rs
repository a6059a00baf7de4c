//! The feasible-infeasible two-population generational loop.
//!
//! Two bounded populations evolve side by side: one holds only feasible
//! solutions ranked by the domain fitness, the other only infeasible ones
//! ranked by the active infeasible-fitness policy. Offspring are routed to
//! the population matching their own feasibility, so lineages hop between
//! populations. Every (parent, child) edge is reported as an
//! [`OffspringEvent`] for consumption by the surrogate ledger.

use serde::{Deserialize, Serialize};

use crate::domain::{evaluate, Domain};
use crate::error::{Error, Result};
use crate::population::{select_parents, Population, PopulationKind};
use crate::rng::RngStream;
use crate::sifa::FitnessPolicy;
use crate::solution::{Feasibility, IdGen, Solution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Fi2PopConfig {
    pub generations: u32,
    /// Offspring produced per population per generation.
    pub offspring_per_generation: usize,
    pub crossover_probability: f64,
    /// Per-gene mutation rate handed to the domain operator.
    pub mutation_probability: f64,
    pub population_capacity: usize,
    /// Maximum random samples drawn while seeding the populations.
    pub init_budget: usize,
}

impl Default for Fi2PopConfig {
    fn default() -> Self {
        Self {
            generations: 50,
            offspring_per_generation: 10,
            crossover_probability: 0.8,
            mutation_probability: 0.1,
            population_capacity: 20,
            init_budget: 1000,
        }
    }
}

impl Fi2PopConfig {
    pub fn validate(&self, path: &str) -> Result<()> {
        let field = |name: &str| format!("{path}{name}");
        if self.generations < 1 {
            return Err(Error::config(field("generations"), "must be at least 1"));
        }
        if self.offspring_per_generation < 1 {
            return Err(Error::config(
                field("offspring_per_generation"),
                "must be at least 1",
            ));
        }
        for (name, p) in [
            ("crossover_probability", self.crossover_probability),
            ("mutation_probability", self.mutation_probability),
        ] {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(Error::config(field(name), "must lie in [0, 1]"));
            }
        }
        if self.population_capacity < 1 {
            return Err(Error::config(
                field("population_capacity"),
                "must be at least 1",
            ));
        }
        if self.init_budget < 1 {
            return Err(Error::config(field("init_budget"), "must be at least 1"));
        }
        Ok(())
    }
}

/// Per-generation metrics. `coverage` is only populated by grid-based runs.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: u32,
    pub elite_feasible_fitness: f64,
    pub avg_feasible_fitness: f64,
    pub elite_infeasible_fitness: f64,
    pub avg_infeasible_fitness: f64,
    pub feasible_size: usize,
    pub infeasible_size: usize,
    pub coverage: Option<f64>,
}

/// One (parent, child) edge: each child is attributed to the parent whose
/// slot it filled during crossover, so exactly one event exists per child.
#[derive(Debug, Clone, PartialEq)]
pub struct OffspringEvent {
    pub parent_id: u64,
    pub parent_feasibility: Feasibility,
    pub parent_features: Vec<f64>,
    pub child_id: u64,
    pub child_feasibility: Feasibility,
    /// The fitness the child entered its population with.
    pub child_fitness: f64,
}

/// The baseline infeasible fitness: the inverse of the violation count.
pub fn standard_infeasible_fitness(violations: u32) -> Result<f64> {
    if violations == 0 {
        return Err(Error::NotInfeasible);
    }
    Ok(1.0 / violations as f64)
}

pub(crate) struct ParentInfo {
    pub id: u64,
    pub feasibility: Feasibility,
    pub features: Vec<f64>,
}

/// A bred genome waiting for evaluation, tagged with its primary parent.
pub(crate) struct BredChild<G> {
    pub genome: G,
    pub primary: ParentInfo,
    pub parent_ids: Vec<u64>,
}

/// Selects parent pairs from `pop` and produces exactly `count` offspring
/// genomes via crossover (per `crossover_probability`) then mutation.
pub(crate) fn breed<D: Domain>(
    pop: &Population<D::Genome>,
    count: usize,
    domain: &D,
    cfg: &Fi2PopConfig,
    rng: &mut RngStream,
) -> Result<Vec<BredChild<D::Genome>>> {
    let pairs = count.div_ceil(2);
    let parents = select_parents(pop, 2 * pairs, rng)?;
    let mut children = Vec::with_capacity(2 * pairs);
    for pair in parents.chunks_exact(2) {
        let (p1, p2) = (&pair[0], &pair[1]);
        let (g1, g2) = if rng.chance(cfg.crossover_probability) {
            domain.crossover(&p1.genome, &p2.genome, rng)?
        } else {
            (p1.genome.clone(), p2.genome.clone())
        };
        for (genome, primary) in [(g1, p1), (g2, p2)] {
            children.push(BredChild {
                genome: domain.mutate(&genome, cfg.mutation_probability, rng),
                primary: ParentInfo {
                    id: primary.id,
                    feasibility: primary.feasibility,
                    features: primary.features.clone(),
                },
                parent_ids: vec![p1.id, p2.id],
            });
        }
    }
    children.truncate(count);
    Ok(children)
}

/// Evaluates bred children, applies the infeasible-fitness policy, and pairs
/// each solution with its offspring event.
pub(crate) fn realize_children<D: Domain>(
    children: Vec<BredChild<D::Genome>>,
    domain: &D,
    policy: &mut FitnessPolicy,
    ids: &mut IdGen,
    generation: u32,
) -> Result<Vec<(Solution<D::Genome>, OffspringEvent)>> {
    let mut out = Vec::with_capacity(children.len());
    for child in children {
        let mut solution = evaluate(domain, child.genome, ids.next_id(), child.parent_ids, generation)?;
        if let Feasibility::Infeasible(v) = solution.feasibility {
            solution.fitness = policy.initial_fitness(v, &solution.features)?;
        }
        let event = OffspringEvent {
            parent_id: child.primary.id,
            parent_feasibility: child.primary.feasibility,
            parent_features: child.primary.features,
            child_id: solution.id,
            child_feasibility: solution.feasibility,
            child_fitness: solution.fitness,
        };
        out.push((solution, event));
    }
    Ok(out)
}

/// Runs one generation: breed from each non-empty population, evaluate,
/// route offspring by their own feasibility, truncate both populations.
#[allow(clippy::too_many_arguments)]
pub fn step_generation<D: Domain>(
    feas: &mut Population<D::Genome>,
    infeas: &mut Population<D::Genome>,
    domain: &D,
    policy: &mut FitnessPolicy,
    cfg: &Fi2PopConfig,
    ids: &mut IdGen,
    generation: u32,
    rng: &mut RngStream,
) -> Result<Vec<OffspringEvent>> {
    if feas.is_empty() && infeas.is_empty() {
        return Err(Error::EmptyRun);
    }
    let mut bred = Vec::new();
    for pop in [&*feas, &*infeas] {
        if !pop.is_empty() {
            bred.extend(breed(pop, cfg.offspring_per_generation, domain, cfg, rng)?);
        }
    }
    let realized = realize_children(bred, domain, policy, ids, generation)?;
    let mut events = Vec::with_capacity(realized.len());
    for (solution, event) in realized {
        if solution.feasibility.is_feasible() {
            feas.push(solution);
        } else {
            infeas.push(solution);
        }
        events.push(event);
    }
    feas.truncate();
    infeas.truncate();
    Ok(events)
}

fn record_for(
    generation: u32,
    feas: &Population<impl Clone>,
    infeas: &Population<impl Clone>,
) -> GenerationRecord {
    GenerationRecord {
        generation,
        elite_feasible_fitness: feas.best().map(|s| s.fitness).unwrap_or(0.0),
        avg_feasible_fitness: feas.mean_fitness().unwrap_or(0.0),
        elite_infeasible_fitness: infeas.best().map(|s| s.fitness).unwrap_or(0.0),
        avg_infeasible_fitness: infeas.mean_fitness().unwrap_or(0.0),
        feasible_size: feas.len(),
        infeasible_size: infeas.len(),
        coverage: None,
    }
}

/// Full run: seed both populations from the random sample stream, then
/// iterate [`step_generation`] for the configured number of generations.
pub fn run<D: Domain>(
    domain: &D,
    policy: &mut FitnessPolicy,
    cfg: &Fi2PopConfig,
    rng: &mut RngStream,
) -> Result<Vec<GenerationRecord>> {
    run_with_observer(domain, policy, cfg, rng, |_, _, _| {})
}

/// Like [`run`], with a per-generation view of both populations (generation
/// 0 is the freshly initialized state).
pub fn run_with_observer<D, F>(
    domain: &D,
    policy: &mut FitnessPolicy,
    cfg: &Fi2PopConfig,
    rng: &mut RngStream,
    mut observer: F,
) -> Result<Vec<GenerationRecord>>
where
    D: Domain,
    F: FnMut(u32, &Population<D::Genome>, &Population<D::Genome>),
{
    let mut feas = Population::new(PopulationKind::Feasible, cfg.population_capacity);
    let mut infeas = Population::new(PopulationKind::Infeasible, cfg.population_capacity);
    let mut ids = IdGen::new();

    // Sample until both populations are seeded or the budget runs out; a
    // domain may legitimately never produce one of the two kinds.
    let mut attempts = 0;
    while attempts < cfg.init_budget && (feas.is_empty() || infeas.is_empty()) {
        attempts += 1;
        let genome = domain.sample(rng);
        let mut solution = evaluate(domain, genome, ids.next_id(), vec![], 0)?;
        match solution.feasibility {
            Feasibility::Feasible => feas.push(solution),
            Feasibility::Infeasible(v) => {
                solution.fitness = policy.initial_fitness(v, &solution.features)?;
                infeas.push(solution);
            }
        }
    }
    if feas.is_empty() && infeas.is_empty() {
        return Err(Error::InitFailure(cfg.init_budget));
    }
    feas.truncate();
    infeas.truncate();
    observer(0, &feas, &infeas);

    let mut records = Vec::with_capacity(cfg.generations as usize);
    for generation in 1..=cfg.generations {
        let events = step_generation(
            &mut feas, &mut infeas, domain, policy, cfg, &mut ids, generation, rng,
        )?;
        policy.observe(&events);
        policy.finish_generation(&mut [&mut infeas])?;
        records.push(record_for(generation, &feas, &infeas));
        observer(generation, &feas, &infeas);
    }
    Ok(records)
}
