//! The surrogate regressor: a small fully-connected network trained online
//! with full-batch gradient descent on mean-squared error.
//!
//! Written from scratch so training is bit-reproducible: given the same seed
//! and the same sequence of training calls, the parameters are identical on
//! every platform.

use crate::error::{Error, Result};
use crate::rng::RngStream;

const HIDDEN: usize = 32;
const INIT_STREAM_LABEL: u64 = 0x5347; // distinguishes weight init from run draws

/// Feed-forward regressor with two hidden layers of 32 rectified-linear
/// units and a scalar linear output.
#[derive(Debug, Clone)]
pub struct SurrogateModel {
    input_dim: usize,
    learning_rate: f64,
    /// Gradient updates applied so far.
    training_steps: u64,
    w1: Vec<f64>, // HIDDEN x input_dim
    b1: Vec<f64>,
    w2: Vec<f64>, // HIDDEN x HIDDEN
    b2: Vec<f64>,
    w3: Vec<f64>, // 1 x HIDDEN
    b3: f64,
}

fn xavier(rng: &mut RngStream, fan_in: usize, fan_out: usize, n: usize) -> Vec<f64> {
    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
    (0..n).map(|_| rng.range_f64(-limit, limit)).collect()
}

impl SurrogateModel {
    /// Weights are initialized from a stream derived from `seed`, so equal
    /// seeds give equal models.
    pub fn new(input_dim: usize, learning_rate: f64, seed: u64) -> Self {
        assert!(input_dim >= 1, "model needs at least one input");
        let mut rng = RngStream::derive(seed, INIT_STREAM_LABEL);
        Self {
            input_dim,
            learning_rate,
            training_steps: 0,
            w1: xavier(&mut rng, input_dim, HIDDEN, HIDDEN * input_dim),
            b1: vec![0.0; HIDDEN],
            w2: xavier(&mut rng, HIDDEN, HIDDEN, HIDDEN * HIDDEN),
            b2: vec![0.0; HIDDEN],
            w3: xavier(&mut rng, HIDDEN, 1, HIDDEN),
            b3: 0.0,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn training_steps(&self) -> u64 {
        self.training_steps
    }

    pub fn is_trained(&self) -> bool {
        self.training_steps > 0
    }

    fn check_dim(&self, features: &[f64]) -> Result<()> {
        if features.len() != self.input_dim {
            return Err(Error::FeatureDim {
                expected: self.input_dim,
                got: features.len(),
            });
        }
        Ok(())
    }

    fn forward(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
        let mut h1 = vec![0.0; HIDDEN];
        for (i, h) in h1.iter_mut().enumerate() {
            let row = &self.w1[i * self.input_dim..(i + 1) * self.input_dim];
            let z = row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.b1[i];
            *h = z.max(0.0);
        }
        let mut h2 = vec![0.0; HIDDEN];
        for (i, h) in h2.iter_mut().enumerate() {
            let row = &self.w2[i * HIDDEN..(i + 1) * HIDDEN];
            let z = row.iter().zip(&h1).map(|(w, v)| w * v).sum::<f64>() + self.b2[i];
            *h = z.max(0.0);
        }
        let y = self.w3.iter().zip(&h2).map(|(w, v)| w * v).sum::<f64>() + self.b3;
        (h1, h2, y)
    }

    /// Raw model output for one feature vector.
    pub fn predict(&self, features: &[f64]) -> Result<f64> {
        self.check_dim(features)?;
        let (_, _, y) = self.forward(features);
        Ok(y)
    }

    fn mse(&self, examples: &[(Vec<f64>, f64)]) -> f64 {
        examples
            .iter()
            .map(|(x, t)| {
                let (_, _, y) = self.forward(x);
                (y - t) * (y - t)
            })
            .sum::<f64>()
            / examples.len() as f64
    }

    /// Runs `epochs` full-batch gradient-descent passes on the mean-squared
    /// error over `examples` and returns the post-training error.
    pub fn train_increment(&mut self, examples: &[(Vec<f64>, f64)], epochs: usize) -> Result<f64> {
        if examples.is_empty() {
            return Err(Error::NoData);
        }
        for (x, t) in examples {
            self.check_dim(x)?;
            if !t.is_finite() {
                return Err(Error::Usage(format!("non-finite training target {t}")));
            }
        }

        let n = examples.len() as f64;
        for _ in 0..epochs {
            let mut gw1 = vec![0.0; self.w1.len()];
            let mut gb1 = vec![0.0; HIDDEN];
            let mut gw2 = vec![0.0; self.w2.len()];
            let mut gb2 = vec![0.0; HIDDEN];
            let mut gw3 = vec![0.0; HIDDEN];
            let mut gb3 = 0.0;

            for (x, t) in examples {
                let (h1, h2, y) = self.forward(x);
                let dy = 2.0 * (y - t) / n;

                for i in 0..HIDDEN {
                    gw3[i] += dy * h2[i];
                }
                gb3 += dy;

                // Backprop through the second hidden layer.
                let mut dz2 = vec![0.0; HIDDEN];
                for i in 0..HIDDEN {
                    if h2[i] > 0.0 {
                        dz2[i] = dy * self.w3[i];
                    }
                }
                for i in 0..HIDDEN {
                    if dz2[i] != 0.0 {
                        let row = &mut gw2[i * HIDDEN..(i + 1) * HIDDEN];
                        for (g, h) in row.iter_mut().zip(&h1) {
                            *g += dz2[i] * h;
                        }
                        gb2[i] += dz2[i];
                    }
                }

                // Backprop through the first hidden layer.
                let mut dz1 = vec![0.0; HIDDEN];
                for j in 0..HIDDEN {
                    if h1[j] > 0.0 {
                        let mut acc = 0.0;
                        for i in 0..HIDDEN {
                            acc += dz2[i] * self.w2[i * HIDDEN + j];
                        }
                        dz1[j] = acc;
                    }
                }
                for j in 0..HIDDEN {
                    if dz1[j] != 0.0 {
                        let row = &mut gw1[j * self.input_dim..(j + 1) * self.input_dim];
                        for (g, v) in row.iter_mut().zip(x) {
                            *g += dz1[j] * v;
                        }
                        gb1[j] += dz1[j];
                    }
                }
            }

            let lr = self.learning_rate;
            for (w, g) in self.w1.iter_mut().zip(&gw1) {
                *w -= lr * g;
            }
            for (b, g) in self.b1.iter_mut().zip(&gb1) {
                *b -= lr * g;
            }
            for (w, g) in self.w2.iter_mut().zip(&gw2) {
                *w -= lr * g;
            }
            for (b, g) in self.b2.iter_mut().zip(&gb2) {
                *b -= lr * g;
            }
            for (w, g) in self.w3.iter_mut().zip(&gw3) {
                *w -= lr * g;
            }
            self.b3 -= lr * gb3;
            self.training_steps += 1;
        }

        Ok(self.mse(examples))
    }
}

/// Acquired fitness: the model prediction floored at `epsilon`, keeping
/// infeasible fitness positive so selection stays well-defined.
pub fn acquire_fitness(model: &SurrogateModel, features: &[f64], epsilon: f64) -> Result<f64> {
    Ok(model.predict(features)?.max(epsilon))
}
