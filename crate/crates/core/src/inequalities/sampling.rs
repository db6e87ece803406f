//! Seeded random PMFs for property sweeps.
//!
//! Every sample index gets its own ChaCha stream derived from the sweep seed,
//! so a sweep produces the same inputs whatever the worker count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::pmf::OrderedPmf;

/// Generator for sample `index` of a sweep seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Symmetric Dirichlet(1) draw of length `n`, i.e. uniform on the simplex.
pub fn dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

fn finish(values: Vec<f64>) -> OrderedPmf {
    OrderedPmf::normalized(&values).expect("sampled masses are positive")
}

/// Sampler mixing uniform-simplex draws with boundary cases.
#[derive(Debug, Clone, Copy)]
pub struct PmfSampler {
    /// Probability that a draw is a boundary case.
    pub boundary_fraction: f64,
}

impl Default for PmfSampler {
    fn default() -> Self {
        PmfSampler {
            boundary_fraction: 0.1,
        }
    }
}

impl PmfSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> OrderedPmf {
        if rng.gen_bool(self.boundary_fraction) {
            boundary(rng, n)
        } else {
            finish(dirichlet(rng, n))
        }
    }
}

/// One of: a dominant atom (mass ≥ 0.9), near-ties around uniform, a
/// truncated support padded with zeros, or a deterministic PMF.
pub fn boundary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> OrderedPmf {
    match rng.gen_range(0..4) {
        0 => {
            let top = rng.gen_range(0.9..1.0);
            let mut v = vec![top];
            v.extend(dirichlet(rng, n - 1).into_iter().map(|x| x * (1.0 - top)));
            finish(v)
        }
        1 => {
            let v = (0..n)
                .map(|_| 1.0 + rng.gen_range(-1e-6..1e-6))
                .collect();
            finish(v)
        }
        2 if n > 1 => {
            let k = rng.gen_range(1..n);
            let mut v = dirichlet(rng, k);
            v.resize(n, 0.0);
            finish(v)
        }
        _ => OrderedPmf::deterministic(n),
    }
}

/// Dirichlet draw squeezed so every mass is at least `margin`, which keeps
/// the PMF at distance `margin` from every degenerate corner.
pub fn bounded<R: Rng + ?Sized>(rng: &mut R, n: usize, margin: f64) -> OrderedPmf {
    assert!(n >= 2 && margin * n as f64 <= 1.0);
    let scale = 1.0 - margin * n as f64;
    finish(dirichlet(rng, n).into_iter().map(|x| margin + scale * x).collect())
}
