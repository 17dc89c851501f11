//! Exact absorption probabilities `P[0 ∈ Conv(S_1, …, S_n)]`.
//!
//! Each walk family pairs with a coefficient row and a group order:
//!
//! * bridge-A: Stirling row, `n!`, absorb sums start at `d + 2`;
//! * walk-B: B row, `2^n n!`, absorb sums start at `d + 1`;
//! * walk-D: D row, `2^(n-1) n!`, starting at `d + 1`;
//! * joint-B: product of B rows, `∏ 2^(n_i) n_i!`, starting at `d + 1`.
//!
//! Non-absorption is the complementary parity sum running downwards. For
//! moderate `n` both sums are computed and must add to one exactly; for large
//! `n` only the short lower tail is expanded and the parity identity
//! supplies the other side.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::binomial;
use crate::combinatorics::{self, CoefficientVector, Family};
use crate::error::{invalid, Error, Result};
use crate::scalar::ratio_to_f64;

/// Up to this many steps both parity sums are expanded and compared.
pub const FULL_ROW_LIMIT: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WalkKind {
    #[serde(rename = "bridge-A")]
    BridgeA,
    #[serde(rename = "walk-B")]
    WalkB,
    #[serde(rename = "walk-D")]
    WalkD,
    #[serde(rename = "joint-B")]
    JointB,
    #[serde(rename = "wendel")]
    Wendel,
}

impl WalkKind {
    pub fn name(self) -> &'static str {
        match self {
            WalkKind::BridgeA => "bridge-A",
            WalkKind::WalkB => "walk-B",
            WalkKind::WalkD => "walk-D",
            WalkKind::JointB => "joint-B",
            WalkKind::Wendel => "wendel",
        }
    }
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WalkKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bridge-a" => Ok(WalkKind::BridgeA),
            "walk-b" => Ok(WalkKind::WalkB),
            "walk-d" => Ok(WalkKind::WalkD),
            "joint-b" => Ok(WalkKind::JointB),
            "wendel" => Ok(WalkKind::Wendel),
            _ => invalid(format!("unknown walk family `{s}`")),
        }
    }
}

/// A walk type together with its step counts and dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WalkFamily {
    pub kind: WalkKind,
    /// One entry except for joint-B, which lists `n_1, …, n_r`, and Wendel,
    /// which stores `r` unit steps.
    pub steps: Vec<usize>,
    pub d: usize,
}

impl WalkFamily {
    pub fn new(kind: WalkKind, steps: Vec<usize>, d: usize) -> Result<Self> {
        if d == 0 {
            return invalid("dimension must be positive");
        }
        if steps.is_empty() || steps.contains(&0) {
            return invalid("step counts must be positive");
        }
        match kind {
            WalkKind::JointB | WalkKind::Wendel => {}
            _ if steps.len() != 1 => return invalid(format!("{kind} takes a single step count")),
            _ => {}
        }
        if kind == WalkKind::Wendel && steps.iter().any(|&s| s != 1) {
            return invalid("wendel families consist of unit steps");
        }
        let n = steps.iter().sum::<usize>();
        match kind {
            WalkKind::BridgeA if n < 2 => return invalid("bridge-A needs n >= 2"),
            WalkKind::WalkD if n < 2 => return invalid("walk-D needs n >= 2"),
            _ => {}
        }
        Ok(Self { kind, steps, d })
    }

    pub fn bridge_a(n: usize, d: usize) -> Result<Self> {
        Self::new(WalkKind::BridgeA, vec![n], d)
    }

    pub fn walk_b(n: usize, d: usize) -> Result<Self> {
        Self::new(WalkKind::WalkB, vec![n], d)
    }

    pub fn walk_d(n: usize, d: usize) -> Result<Self> {
        Self::new(WalkKind::WalkD, vec![n], d)
    }

    pub fn joint_b(ns: Vec<usize>, d: usize) -> Result<Self> {
        Self::new(WalkKind::JointB, ns, d)
    }

    /// `r` independent symmetric one-step walks (Wendel's setting).
    pub fn wendel(r: usize, d: usize) -> Result<Self> {
        Self::new(WalkKind::Wendel, vec![1; r], d)
    }

    /// Total number of steps.
    pub fn n(&self) -> usize {
        self.steps.iter().sum()
    }

    pub fn within_hypotheses(&self) -> bool {
        let (n, d) = (self.n(), self.d);
        match self.kind {
            WalkKind::BridgeA => n > d,
            WalkKind::WalkB | WalkKind::JointB | WalkKind::Wendel => n >= d,
            WalkKind::WalkD => n >= d.max(2),
        }
    }

    /// Index of the first term of the absorb sum; the non-absorb sum starts two below.
    fn absorb_start(&self) -> i64 {
        match self.kind {
            WalkKind::BridgeA => self.d as i64 + 2,
            _ => self.d as i64 + 1,
        }
    }

    fn family(&self) -> Option<Family> {
        match self.kind {
            WalkKind::BridgeA => Some(Family::Stirling),
            WalkKind::WalkB => Some(Family::B),
            WalkKind::WalkD => Some(Family::D),
            WalkKind::JointB | WalkKind::Wendel => None,
        }
    }

    /// Group order dividing the coefficient sums.
    pub fn group_order(&self) -> BigUint {
        match self.family() {
            Some(f) => f.row_total(self.n()),
            None => self.steps.iter().map(|&n| Family::B.row_total(n)).product(),
        }
    }

    /// Bernoulli probabilities whose sum is distributed as `row / group order`.
    pub fn bernoulli_probs(&self) -> Vec<f64> {
        match self.family() {
            Some(f) => f.bernoulli_probs(self.n()),
            None => self.steps.iter().flat_map(|&n| Family::B.bernoulli_probs(n)).collect(),
        }
    }

    /// Coefficients `0..=max_degree` of the governing row.
    fn row(&self, max_degree: usize) -> Result<CoefficientVector> {
        match self.family() {
            Some(f) => Ok((*combinatorics::row_truncated(f, self.n(), max_degree)?).clone()),
            None => {
                let c = combinatorics::product_coefficients(&self.steps)?;
                let mut v = c.into_coeffs();
                v.truncate(max_degree + 1);
                Ok(CoefficientVector::from_coeffs(v))
            }
        }
    }
}

impl fmt::Display for WalkFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WalkKind::JointB => write!(f, "{} n={:?} d={}", self.kind, self.steps, self.d),
            _ => write!(f, "{} n={} d={}", self.kind, self.n(), self.d),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionResult {
    pub family: WalkFamily,
    pub absorb: BigRational,
    pub non_absorb: BigRational,
    pub within_hypotheses: bool,
}

fn twice_over(sum: BigUint, order: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(sum) * 2, BigInt::from(order.clone()))
}

/// Both probabilities, each from its own parity sum when the row is small
/// enough to expand fully.
pub fn absorption_probability(family: &WalkFamily) -> Result<AbsorptionResult> {
    let n = family.n();
    let order = family.group_order();
    let a0 = family.absorb_start();
    let non_start = a0 - 2;
    let (absorb, non_absorb) = if n <= FULL_ROW_LIMIT || family.family().is_none() {
        let row = family.row(n)?;
        let absorb = twice_over(row.alternate_sum_up(a0), &order);
        let non = twice_over(row.alternate_sum_down(non_start), &order);
        if &absorb + &non != BigRational::one() {
            return Err(Error::ComplementMismatch(format!("{family}: {absorb} + {non} != 1")));
        }
        (absorb, non)
    } else {
        let max_degree = non_start.max(0) as usize;
        let row = family.row(max_degree)?;
        let non = twice_over(row.alternate_sum_down(non_start), &order);
        (BigRational::one() - &non, non)
    };
    Ok(AbsorptionResult { family: family.clone(), absorb, non_absorb, within_hypotheses: family.within_hypotheses() })
}

/// Non-absorption from the downward parity sum; cross-checked against `1 - absorb`
/// whenever the full row is expanded.
pub fn non_absorption_probability(family: &WalkFamily) -> Result<BigRational> {
    Ok(absorption_probability(family)?.non_absorb)
}

/// Wendel's `2^-(r-1) Σ_{k<d} C(r-1, k)`.
pub fn wendel_probability(r: usize, d: usize) -> Result<BigRational> {
    if r == 0 || d == 0 {
        return invalid("wendel_probability needs r, d >= 1");
    }
    let s: BigUint = (0..d).map(|k| binomial(r - 1, k)).sum();
    Ok(BigRational::new(BigInt::from(s), BigInt::from(BigUint::one() << (r - 1))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OneDimensional {
    /// `P[S_1, …, S_n > 0]` for a symmetric continuous walk.
    SparrePositive,
    /// `P[no sign change]` for an exchangeable bridge.
    BridgeSign,
    /// `P[S_1, …, S_n > 0]` for the simple walk.
    SimpleWalkPositive,
    /// `P[no sign change]` for the simple bridge, counting zeros as either sign.
    SimpleBridgeSign,
}

impl FromStr for OneDimensional {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparre-positive" => Ok(Self::SparrePositive),
            "bridge-sign" => Ok(Self::BridgeSign),
            "simple-walk-positive" => Ok(Self::SimpleWalkPositive),
            "simple-bridge-sign" => Ok(Self::SimpleBridgeSign),
            _ => invalid(format!("unknown one-dimensional reference `{s}`")),
        }
    }
}

pub fn one_dimensional_reference(kind: OneDimensional, n: usize) -> Result<BigRational> {
    if n == 0 {
        return invalid("n must be positive");
    }
    let q = |num: BigUint, den: BigUint| BigRational::new(num.into(), den.into());
    Ok(match kind {
        OneDimensional::SparrePositive => q(binomial(2 * n, n), BigUint::one() << (2 * n)),
        OneDimensional::BridgeSign => q(BigUint::from(2u32), BigUint::from(n)),
        OneDimensional::SimpleWalkPositive => q(binomial(n - 1, (n - 1) / 2), BigUint::one() << n),
        OneDimensional::SimpleBridgeSign => {
            if n < 2 || n % 2 == 1 {
                return invalid(format!("simple bridges need even n >= 2, got {n}"));
            }
            q(BigUint::one(), BigUint::from(n - 1))
        }
    })
}

/// Absorb and non-absorb probabilities in double precision from the
/// Bernoulli representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatAbsorption {
    pub absorb: f64,
    pub non_absorb: f64,
}

/// Relative size below which the neglected upper tail is ignored.
const TAIL_TOL: f64 = 1e-18;

/// Evaluates the two parity tails by truncated Poisson-binomial dynamic
/// programming. The lower tail is exact; the upper tail is summed until the
/// geometric bound `pmf[k+1] / pmf[k] <= μ' / (k + 1)`, `μ' = Σ p/(1-p)`,
/// makes the remainder negligible.
pub fn absorption_probability_float(family: &WalkFamily) -> Result<FloatAbsorption> {
    let probs_all = family.bernoulli_probs();
    // certain successes only shift the index
    let shift = probs_all.iter().filter(|&&p| p >= 1.0).count() as i64;
    let probs: Vec<f64> = probs_all.into_iter().filter(|&p| p < 1.0).collect();
    let m = probs.len() as i64;
    let a0 = family.absorb_start() - shift;
    let non_start = a0 - 2;

    let non = if non_start < 0 {
        0.0
    } else {
        let pmf = combinatorics::poisson_binomial_truncated(&probs, non_start as usize)?;
        2.0 * parity_sum_down(&pmf, non_start)
    };

    if a0 > m {
        return Ok(FloatAbsorption { absorb: 0.0, non_absorb: non });
    }
    let a0u = a0.max(0) as usize;
    let mu: f64 = probs.iter().map(|p| p / (1.0 - p)).sum();
    let mut k_max = (a0u + 64).max((4.0 * mu) as usize + 64);
    let absorb = loop {
        if k_max >= probs.len() {
            let pmf = combinatorics::poisson_binomial_truncated(&probs, probs.len())?;
            break 2.0 * parity_sum_up(&pmf, a0);
        }
        let pmf = combinatorics::poisson_binomial_truncated(&probs, k_max)?;
        let sum = parity_sum_up(&pmf, a0);
        let ratio = mu / (k_max as f64 + 1.0);
        if ratio < 0.5 {
            let remainder = pmf[k_max] * ratio / (1.0 - ratio);
            if remainder <= TAIL_TOL * sum || (sum == 0.0 && remainder == 0.0) {
                break 2.0 * sum;
            }
        }
        k_max *= 2;
    };
    Ok(FloatAbsorption { absorb, non_absorb: non })
}

fn parity_sum_down(pmf: &[f64], start: i64) -> f64 {
    let mut k = start;
    let mut s = 0.0;
    while k >= 0 {
        if let Some(p) = pmf.get(k as usize) {
            s += p;
        }
        k -= 2;
    }
    s
}

fn parity_sum_up(pmf: &[f64], start: i64) -> f64 {
    let mut k = start;
    if k < 0 {
        k += ((-k + 1) / 2) * 2;
    }
    let mut s = 0.0;
    while (k as usize) < pmf.len() {
        s += pmf[k as usize];
        k += 2;
    }
    s
}

/// Serialized form of an exact rational: decimal strings plus a float rendering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
    pub float: f64,
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        Self { num: r.numer().to_string(), den: r.denom().to_string(), float: ratio_to_f64(r) }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Result<BigRational> {
        let num: BigInt = self.num.parse().map_err(|_| Error::InvalidArgument(format!("bad numerator {}", self.num)))?;
        let den: BigInt = self.den.parse().map_err(|_| Error::InvalidArgument(format!("bad denominator {}", self.den)))?;
        if den.is_zero() {
            return invalid("zero denominator");
        }
        Ok(BigRational::new(num, den))
    }
}

/// Wire format of an [`AbsorptionResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionReport {
    pub family: WalkKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<usize>>,
    pub d: usize,
    pub absorb: RationalJson,
    pub non_absorb: RationalJson,
    pub within_hypotheses: bool,
}

impl From<&AbsorptionResult> for AbsorptionReport {
    fn from(r: &AbsorptionResult) -> Self {
        Self {
            family: r.family.kind,
            n: r.family.n(),
            steps: (r.family.kind == WalkKind::JointB).then(|| r.family.steps.clone()),
            d: r.family.d,
            absorb: (&r.absorb).into(),
            non_absorb: (&r.non_absorb).into(),
            within_hypotheses: r.within_hypotheses,
        }
    }
}
