//! Seeded random streams and the standard rotation-invariant samplers.
//!
//! Every Monte Carlo loop splits its work over a fixed number of streams.
//! Stream `w` is the ChaCha8 generator keyed by the master seed with stream
//! id `w`, so per-stream tallies and their sum do not depend on how many
//! worker threads execute the streams.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Seed used when the caller does not choose one.
pub const DEFAULT_SEED: u64 = 0x05EE_D0FA_850B;
/// Number of independent streams a Monte Carlo run is split into.
pub const DEFAULT_STREAMS: usize = 64;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sample counts per stream; the first `samples % streams` streams take one extra.
pub fn split_samples(samples: usize, streams: usize) -> Vec<usize> {
    let streams = streams.max(1);
    (0..streams).map(|w| samples / streams + usize::from(w < samples % streams)).collect()
}

/// Runs `f(rng, count)` on every stream in parallel and returns the results in stream order.
pub fn run_streams<T, F>(seed: u64, samples: usize, streams: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    split_samples(samples, streams)
        .into_par_iter()
        .enumerate()
        .map(|(w, count)| f(&mut stream_rng(seed, w as u64), count))
        .collect()
}

/// A Monte Carlo proportion with its binomial standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
    pub samples: usize,
    pub seed: u64,
    /// Fraction of samples whose classification fell in the tolerance band.
    pub ambiguous_fraction: f64,
    /// Fraction of samples with the origin strictly interior (lattice models only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior_fraction: Option<f64>,
}

impl MCEstimate {
    pub fn from_counts(hits: usize, ambiguous: usize, samples: usize, seed: u64) -> Self {
        let n = samples.max(1) as f64;
        let p = hits as f64 / n;
        let stderr = (p * (1.0 - p) / n).sqrt();
        MCEstimate {
            p_hat: p,
            stderr,
            ci95: (p - 1.96 * stderr, p + 1.96 * stderr),
            samples,
            seed,
            ambiguous_fraction: ambiguous as f64 / n,
            interior_fraction: None,
        }
    }

    /// Rescales the estimate and its error by a constant factor.
    pub fn scaled(mut self, c: f64) -> Self {
        self.p_hat *= c;
        self.stderr *= c.abs();
        self.ci95 = (self.p_hat - 1.96 * self.stderr, self.p_hat + 1.96 * self.stderr);
        self
    }

    /// `(p_hat - exact) / stderr`; infinite when the error is zero and the estimate is off.
    pub fn z_score(&self, exact: f64) -> f64 {
        let diff = self.p_hat - exact;
        if self.stderr > 0.0 {
            diff / self.stderr
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY * diff.signum()
        }
    }
}

/// Serde adapter writing non-finite floats as the strings `inf`, `-inf` and
/// `nan`, so that JSON output re-parses to the same value.
pub mod nonfinite_f64 {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(de::Error::custom(format!("expected a number, got `{t}`"))),
            },
        }
    }
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// Uniform point on the unit sphere `S^{n-1}`.
pub fn uniform_sphere<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let g = gaussian_vector(rng, n);
        let norm = g.norm();
        if norm > 1e-300 {
            return g / norm;
        }
    }
}

/// Orthonormal basis (as columns) of a uniform random `k`-dimensional subspace of `R^n`.
pub fn grassmannian_basis<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> DMatrix<f64> {
    assert!(k >= 1 && k <= n);
    let g = DMatrix::from_fn(n, k, |_, _| rng.sample::<f64, _>(StandardNormal));
    g.qr().q()
}
