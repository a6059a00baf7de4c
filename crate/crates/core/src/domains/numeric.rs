//! Box-bounded numeric domain with linear half-space constraints.
//!
//! Ground truth here is plain arithmetic, which makes this domain the oracle
//! for the evolutionary machinery: feasibility, violation counts, and fitness
//! can all be recomputed directly in tests.

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, Evaluation};
use crate::error::{Error, Result};
use crate::rng::RngStream;

pub const NUMERIC_BOUND: f64 = 5.0;

/// Constraint `normal . x <= offset`; violated when the residual is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfSpace {
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.normal.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - self.offset
    }

    pub fn is_violated(&self, x: &[f64]) -> bool {
        self.residual(x) > 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericDomain {
    pub dim: usize,
    pub constraints: Vec<HalfSpace>,
    pub mutation_sigma: f64,
}

impl Default for NumericDomain {
    fn default() -> Self {
        // One half-space through the origin: x_1 <= 0.
        Self {
            dim: 2,
            constraints: vec![HalfSpace {
                normal: vec![1.0, 0.0],
                offset: 0.0,
            }],
            mutation_sigma: 0.3,
        }
    }
}

impl NumericDomain {
    pub fn unconstrained(dim: usize) -> Self {
        Self {
            dim,
            constraints: Vec::new(),
            mutation_sigma: 0.3,
        }
    }

    /// Gaussian kernel around the origin, 1.0 at x = 0.
    pub fn fitness(&self, x: &[f64]) -> f64 {
        let norm_sq: f64 = x.iter().map(|v| v * v).sum();
        (-norm_sq / (2.0 * self.dim as f64)).exp()
    }

    pub fn violation_count(&self, x: &[f64]) -> u32 {
        self.constraints.iter().filter(|c| c.is_violated(x)).count() as u32
    }
}

fn clamp(v: f64) -> f64 {
    v.clamp(-NUMERIC_BOUND, NUMERIC_BOUND)
}

impl Domain for NumericDomain {
    type Genome = Vec<f64>;

    fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        (0..self.dim)
            .map(|_| rng.range_f64(-NUMERIC_BOUND, NUMERIC_BOUND))
            .collect()
    }

    fn evaluate(&self, genome: &Vec<f64>) -> Result<Evaluation> {
        if genome.len() != self.dim {
            return Err(Error::InvalidGenome(format!(
                "expected {} components, got {}",
                self.dim,
                genome.len()
            )));
        }
        let bc1 = clamp(genome[0]);
        let bc2 = clamp(*genome.get(1).unwrap_or(&genome[0]));
        Ok(Evaluation {
            violations: self.violation_count(genome),
            feasible_fitness: self.fitness(genome),
            behavior: (bc1, bc2),
            features: genome
                .iter()
                .map(|v| (clamp(*v) + NUMERIC_BOUND) / (2.0 * NUMERIC_BOUND))
                .collect(),
        })
    }

    fn crossover(
        &self,
        a: &Vec<f64>,
        b: &Vec<f64>,
        rng: &mut RngStream,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        if a.len() != b.len() {
            return Err(Error::GenomeMismatch(a.len(), b.len()));
        }
        let alpha = rng.next_f64();
        let c1 = a
            .iter()
            .zip(b)
            .map(|(x, y)| alpha * x + (1.0 - alpha) * y)
            .collect();
        let c2 = a
            .iter()
            .zip(b)
            .map(|(x, y)| (1.0 - alpha) * x + alpha * y)
            .collect();
        Ok((c1, c2))
    }

    fn mutate(&self, genome: &Vec<f64>, rate: f64, rng: &mut RngStream) -> Vec<f64> {
        genome
            .iter()
            .map(|v| {
                if rng.chance(rate) {
                    clamp(v + rng.normal(self.mutation_sigma))
                } else {
                    *v
                }
            })
            .collect()
    }

    fn feature_dim(&self) -> usize {
        self.dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;

    #[test]
    fn origin_is_the_fitness_peak() {
        let d = NumericDomain::unconstrained(2);
        let eval = d.evaluate(&vec![0.0, 0.0]).unwrap();
        assert_eq!(eval.violations, 0);
        assert_eq!(eval.feasible_fitness, 1.0);
    }

    #[test]
    fn single_halfspace_violation() {
        let d = NumericDomain::default();
        let eval = d.evaluate(&vec![1.0, 0.0]).unwrap();
        assert_eq!(eval.violations, 1);
    }

    #[test]
    fn two_violated_constraints() {
        let d = NumericDomain {
            dim: 2,
            constraints: vec![
                HalfSpace {
                    normal: vec![1.0, 0.0],
                    offset: 0.0,
                },
                HalfSpace {
                    normal: vec![0.0, 1.0],
                    offset: 0.0,
                },
            ],
            mutation_sigma: 0.3,
        };
        assert_eq!(d.evaluate(&vec![1.0, 1.0]).unwrap().violations, 2);
    }

    #[test]
    fn behavior_clamps_to_bounds() {
        let d = NumericDomain::unconstrained(2);
        // Mutated genomes stay in bounds, but behavior must clamp regardless.
        let eval = d.evaluate(&vec![7.0, -9.0]).unwrap();
        assert_eq!(eval.behavior, (5.0, -5.0));
    }

    #[test]
    fn crossover_blends_and_stays_in_bounds() {
        let d = NumericDomain::unconstrained(3);
        let mut rng = RngStream::new(2);
        let a = vec![-5.0, 0.0, 5.0];
        let b = vec![5.0, 1.0, -5.0];
        let (c1, c2) = d.crossover(&a, &b, &mut rng).unwrap();
        for v in c1.iter().chain(c2.iter()) {
            assert!(v.abs() <= 5.0);
        }
        // Blend children sum to parent sum componentwise.
        for i in 0..3 {
            assert!((c1[i] + c2[i] - (a[i] + b[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn mutation_clamps_to_box() {
        let d = NumericDomain::unconstrained(2);
        let mut rng = RngStream::new(9);
        let mut x = vec![4.9, -4.9];
        for _ in 0..500 {
            x = d.mutate(&x, 1.0, &mut rng);
            assert!(x.iter().all(|v| v.abs() <= 5.0));
        }
    }

    #[test]
    fn dimension_mismatch_is_invalid_genome() {
        let d = NumericDomain::unconstrained(3);
        assert!(matches!(
            d.evaluate(&vec![0.0]),
            Err(Error::InvalidGenome(_))
        ));
    }
}
