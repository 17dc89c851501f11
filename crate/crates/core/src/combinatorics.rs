//! Exact coefficient families of products of linear factors.
//!
//! Every exact probability in the crate is a ratio of partial sums of one of
//! these rows:
//!
//! | family   | polynomial                                   | group order   |
//! |----------|----------------------------------------------|---------------|
//! | Stirling | `t (t+1) … (t+n-1)`                          | `n!`          |
//! | B        | `(t+1)(t+3) … (t+2n-1)`                      | `2^n n!`      |
//! | D        | `(t+1)(t+3) … (t+2n-3)(t+n-1)`               | `2^(n-1) n!`  |
//!
//! Rows are memoised in a bounded LRU cache shared across threads.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use lru::LruCache;
use num_bigint::BigUint;
use num_traits::{Float, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default largest `n` for which exact rows are built.
pub const DEFAULT_EXACT_CAP: usize = 5000;

static EXACT_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_EXACT_CAP);

/// Sets the largest `n` accepted by the exact row builders.
pub fn set_exact_cap(cap: usize) {
    EXACT_CAP.store(cap, Ordering::Relaxed);
}

pub fn exact_cap() -> usize {
    EXACT_CAP.load(Ordering::Relaxed)
}

fn check_cap(n: usize) -> Result<()> {
    let cap = exact_cap();
    if n > cap {
        return Err(Error::ExactCapExceeded { n, cap });
    }
    Ok(())
}

/// Ascending-power coefficients of a monic product of linear factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientVector {
    coeffs: Vec<BigUint>,
}

impl CoefficientVector {
    pub fn from_coeffs(coeffs: Vec<BigUint>) -> Self {
        assert!(!coeffs.is_empty(), "coefficient vector needs a constant term");
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^k`; zero outside `0..=degree`.
    pub fn get(&self, k: i64) -> BigUint {
        if k < 0 {
            return BigUint::zero();
        }
        self.coeffs.get(k as usize).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigUint> {
        self.coeffs
    }

    /// Value at `t = 1`.
    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// `c[start] + c[start-2] + …` down to index 0; `start` may exceed the degree.
    pub fn alternate_sum_down(&self, start: i64) -> BigUint {
        let mut s = BigUint::zero();
        let mut k = start.min(self.degree() as i64 + 1);
        if (start - k) % 2 != 0 {
            k -= 1;
        }
        while k >= 0 {
            s += self.get(k);
            k -= 2;
        }
        s
    }

    /// `c[start] + c[start+2] + …` up to the degree.
    pub fn alternate_sum_up(&self, start: i64) -> BigUint {
        let mut s = BigUint::zero();
        let mut k = start;
        if k < 0 {
            k += ((-k + 1) / 2) * 2;
        }
        while k <= self.degree() as i64 {
            s += self.get(k);
            k += 2;
        }
        s
    }

    pub fn decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_str_radix(10)).collect()
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &CoefficientVector) -> CoefficientVector {
        let mut out = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CoefficientVector { coeffs: out }
    }
}

/// Coefficients of `∏ (t + r_i)`; the empty product is `[1]`.
pub fn expand_linear_factors(roots: &[u64]) -> CoefficientVector {
    CoefficientVector { coeffs: expand_truncated(roots, roots.len()) }
}

/// Coefficients `0..=max_degree` of `∏ (t + r_i)`.
///
/// Truncation does not perturb the retained low-order coefficients, which makes
/// this the cheap route for large `n` when only the bottom of a row matters.
pub fn expand_linear_factors_truncated(roots: &[u64], max_degree: usize) -> Vec<BigUint> {
    expand_truncated(roots, max_degree.min(roots.len()))
}

fn expand_truncated(roots: &[u64], max_degree: usize) -> Vec<BigUint> {
    let mut c: Vec<BigUint> = Vec::with_capacity(max_degree + 1);
    c.push(BigUint::one());
    for (i, &r) in roots.iter().enumerate() {
        // multiply by (t + r): c'[k] = r c[k] + c[k-1]
        if i < max_degree {
            c.push(BigUint::zero());
        }
        let top = c.len() - 1;
        for k in (1..=top).rev() {
            let lower = c[k - 1].clone();
            let cur = std::mem::take(&mut c[k]);
            c[k] = cur * r + lower;
        }
        c[0] *= r;
    }
    c
}

/// Which coefficient family a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Stirling,
    B,
    D,
}

impl Family {
    /// The linear-factor roots generating row `n`.
    pub fn roots(self, n: usize) -> Vec<u64> {
        match self {
            Family::Stirling => (0..n as u64).collect(),
            Family::B => (1..=n as u64).map(|i| 2 * i - 1).collect(),
            Family::D => {
                let mut r: Vec<u64> = (1..n as u64).map(|i| 2 * i - 1).collect();
                r.push(n as u64 - 1);
                r
            }
        }
    }

    /// Bernoulli success probabilities whose sum has law `row / row_total`.
    pub fn bernoulli_probs(self, n: usize) -> Vec<f64> {
        match self {
            Family::Stirling => (1..=n).map(|i| 1.0 / i as f64).collect(),
            Family::B => (1..=n).map(|i| 1.0 / (2 * i) as f64).collect(),
            Family::D => {
                let mut p: Vec<f64> = (1..n).map(|i| 1.0 / (2 * i) as f64).collect();
                p.push(1.0 / n as f64);
                p
            }
        }
    }

    /// Row sum: `n!`, `2^n n!` or `2^(n-1) n!`.
    pub fn row_total(self, n: usize) -> BigUint {
        let fact: BigUint = (1..=n as u64).map(BigUint::from).product();
        match self {
            Family::Stirling => fact,
            Family::B => fact << n,
            Family::D => fact << (n - 1),
        }
    }

    fn min_n(self) -> usize {
        match self {
            Family::D => 2,
            _ => 1,
        }
    }
}

type RowKey = (Family, usize, usize);

fn cache() -> &'static Mutex<LruCache<RowKey, Arc<CoefficientVector>>> {
    static CACHE: OnceLock<Mutex<LruCache<RowKey, Arc<CoefficientVector>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(LruCache::new(NonZeroUsize::new(128).unwrap())))
}

/// Full row `n` of `family`, memoised.
pub fn row(family: Family, n: usize) -> Result<Arc<CoefficientVector>> {
    row_truncated(family, n, n)
}

/// Coefficients `0..=max_degree` of row `n`, memoised.
pub fn row_truncated(family: Family, n: usize, max_degree: usize) -> Result<Arc<CoefficientVector>> {
    if n < family.min_n() {
        return Err(Error::InvalidArgument(format!(
            "{family:?} rows need n >= {}, got {n}",
            family.min_n()
        )));
    }
    check_cap(n)?;
    let max_degree = max_degree.min(n);
    let key = (family, n, max_degree);
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let coeffs = expand_linear_factors_truncated(&family.roots(n), max_degree);
    let row = Arc::new(CoefficientVector { coeffs });
    cache().lock().unwrap().put(key, row.clone());
    Ok(row)
}

/// Unsigned Stirling number of the first kind; zero for `k ∉ 1..=n`.
pub fn stirling_unsigned(n: usize, k: i64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("stirling_unsigned needs n >= 1".into()));
    }
    Ok(row(Family::Stirling, n)?.get(k))
}

/// Coefficient of `t^k` in `(t+1)(t+3)…(t+2n-1)`.
pub fn b_coefficient(n: usize, k: i64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("b_coefficient needs n >= 1".into()));
    }
    Ok(row(Family::B, n)?.get(k))
}

/// Coefficient of `t^k` in `(t+1)(t+3)…(t+2n-3)(t+n-1)`.
pub fn d_coefficient(n: usize, k: i64) -> Result<BigUint> {
    Ok(row(Family::D, n)?.get(k))
}

/// Coefficients of `∏_i (t+1)(t+3)…(t+2n_i-1)`.
pub fn product_coefficients(ns: &[usize]) -> Result<CoefficientVector> {
    let mut acc = CoefficientVector { coeffs: vec![BigUint::one()] };
    for &n in ns {
        if n == 0 {
            return Err(Error::InvalidArgument("product factors need n_i >= 1".into()));
        }
        acc = acc.mul(&*row(Family::B, n)?);
    }
    Ok(acc)
}

/// Whether the sequence rises weakly to a single peak and then falls weakly.
pub fn is_unimodal<T: PartialOrd>(xs: &[T]) -> bool {
    let mut i = 1;
    while i < xs.len() && xs[i - 1] <= xs[i] {
        i += 1;
    }
    while i < xs.len() && xs[i - 1] >= xs[i] {
        i += 1;
    }
    i >= xs.len()
}

/// Law of a sum of independent Bernoulli variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonBinomialPmf<T> {
    pub probs: Vec<T>,
    pub pmf: Vec<T>,
}

/// Standard convolution dynamic program: `pmf[k] = P[δ_1 + … + δ_n = k]`.
pub fn poisson_binomial_pmf<T: Float>(probs: &[T]) -> Result<PoissonBinomialPmf<T>> {
    let pmf = poisson_binomial_truncated(probs, probs.len())?;
    Ok(PoissonBinomialPmf { probs: probs.to_vec(), pmf })
}

/// `P[Σ δ_i = k]` for `k = 0..=max_k` only; `O(n · max_k)`.
pub fn poisson_binomial_truncated<T: Float>(probs: &[T], max_k: usize) -> Result<Vec<T>> {
    for p in probs {
        if !(*p >= T::zero() && *p <= T::one()) {
            return Err(Error::InvalidArgument("probabilities must lie in [0, 1]".into()));
        }
    }
    let max_k = max_k.min(probs.len());
    let mut pmf = vec![T::zero(); max_k + 1];
    pmf[0] = T::one();
    let mut top = 0usize;
    for &p in probs {
        let q = T::one() - p;
        if top < max_k {
            top += 1;
        }
        for k in (1..=top).rev() {
            pmf[k] = pmf[k] * q + pmf[k - 1] * p;
        }
        pmf[0] = pmf[0] * q;
    }
    Ok(pmf)
}
