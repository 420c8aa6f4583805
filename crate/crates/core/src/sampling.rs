//! Seeded low-discrepancy samples of the closed unit ball and sphere in `C^n`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 24] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Halton sequence with a seeded Cranley-Patterson rotation.
pub struct Halton {
    dim: usize,
    index: u64,
    shift: Vec<f64>,
}

impl Halton {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "Halton dimension");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Halton { dim, index: 1, shift: (0..dim).map(|_| rng.gen::<f64>()).collect() }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        let i = self.index;
        self.index += 1;
        (0..self.dim).map(|k| (radical_inverse(i, PRIMES[k]) + self.shift[k]).fract()).collect()
    }
}

/// Points of the closed unit ball or unit sphere of `C^n`.
pub struct BallSampler {
    n: usize,
    halton: Halton,
}

impl BallSampler {
    pub fn new(n: usize, seed: u64) -> Self {
        BallSampler { n, halton: Halton::new(2 * n + 1, seed) }
    }

    fn direction(&self, u: &[f64]) -> Vec<Complex64> {
        // Box-Muller on pairs of coordinates gives a Gaussian vector, hence a uniform direction.
        let mut v: Vec<Complex64> = (0..self.n)
            .map(|k| {
                let a = u[2 * k].max(1e-300);
                let b = u[2 * k + 1];
                let r = (-2.0 * a.ln()).sqrt();
                Complex64::from_polar(r, 2.0 * std::f64::consts::PI * b)
            })
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
        for z in &mut v {
            *z /= norm;
        }
        v
    }

    pub fn sphere(&mut self) -> Vec<Complex64> {
        let u = self.halton.next_point();
        self.direction(&u)
    }

    /// Uniform in the closed ball.
    pub fn ball(&mut self) -> Vec<Complex64> {
        let u = self.halton.next_point();
        let r = u[2 * self.n].powf(1.0 / (2 * self.n) as f64);
        self.direction(&u).into_iter().map(|z| z * r).collect()
    }
}
