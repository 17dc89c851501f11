//! Self-checks: each check states what it compares, the expected and
//! observed values, and a verdict. The numbered acceptance criteria are
//! available individually and as a batch.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::absorption::{absorption_probability, absorption_probability_float, non_absorption_probability, WalkFamily};
use crate::arrangement::{
    binomial, enumerate_regions, intersected_region_count, reflection_characteristic_polynomial,
    count_regions_meeting_subspace, whitney_characteristic_polynomial, zaslavsky_region_count, Arrangement, MeetMode,
    ReflectionType, Subspace,
};
use crate::asymptotics::{
    clt_dimension, fixed_dimension_table, large_deviation_table, mod_poisson_limit_real, phase_boundary, LdPrefactor,
};
use crate::combinatorics::{is_unimodal, poisson_binomial_pmf, row, Family};
use crate::conic::{
    crofton_mc_estimate, klivans_swartz_check, project_onto_weyl_chamber, schlafli_expected_volumes, steiner_mc,
    weyl_intrinsic_volumes, WeylChamber,
};
use crate::error::{invalid, Error, Result};
use crate::sampling::{stream_rng, DEFAULT_SEED};
use crate::scalar::ratio_to_f64;
use crate::simulate::{
    chamber_intersection_count, d_hull_identity_mismatches, estimate_absorption, make_bridge, predicted_chamber_count,
    sample_increments_with, IncrementModel,
};
use crate::special::normal_cdf;
use ReflectionType::{A, B, D};

/// Number of acceptance criteria.
pub const CRITERIA: usize = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Combinatorics,
    Arrangements,
    Conic,
    Simulation,
    Asymptotics,
    Acceptance,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "combinatorics" => Suite::Combinatorics,
            "arrangements" => Suite::Arrangements,
            "conic" => Suite::Conic,
            "simulation" => Suite::Simulation,
            "asymptotics" => Suite::Asymptotics,
            "acceptance" => Suite::Acceptance,
            "all" => Suite::All,
            _ => return invalid(format!("unknown suite `{s}`")),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Combinatorics => "combinatorics",
            Suite::Arrangements => "arrangements",
            Suite::Conic => "conic",
            Suite::Simulation => "simulation",
            Suite::Asymptotics => "asymptotics",
            Suite::Acceptance => "acceptance",
            Suite::All => "all",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Monte Carlo sample count for the statistical checks.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { samples: 100_000, seed: DEFAULT_SEED }
    }
}

impl VerifyConfig {
    /// Independent seed for the `k`-th randomized sub-run.
    fn sub_seed(&self, k: u64) -> u64 {
        self.seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    /// Acceptance criterion number, if the check is one.
    pub criterion: Option<usize>,
    pub name: String,
    /// The identity or property being compared.
    pub reference: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
    pub seconds: f64,
    pub time_limit: Option<f64>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.criterion {
            Some(c) => format!("[{c:>2}] "),
            None => String::new(),
        };
        write!(
            f,
            "{} {tag}{} ({:.2}s): expected {}; observed {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.expected,
            self.observed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub config: VerifyConfig,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Outcome of a check body: expected, observed, verdict.
type Outcome = (String, String, bool);

fn run_check(
    criterion: Option<usize>,
    name: &str,
    reference: &str,
    time_limit: Option<f64>,
    body: impl FnOnce() -> Result<Outcome>,
) -> Check {
    let start = Instant::now();
    let result = body();
    let seconds = start.elapsed().as_secs_f64();
    let (expected, mut observed, mut passed) = match result {
        Ok(o) => o,
        Err(e) => ("no error".into(), format!("error: {e}"), false),
    };
    if let Some(limit) = time_limit {
        if seconds > limit {
            passed = false;
            observed = format!("{observed}; took {seconds:.1}s over the {limit}s limit");
        }
    }
    Check { criterion, name: name.into(), reference: reference.into(), expected, observed, passed, seconds, time_limit }
}

fn rat(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Runs one acceptance criterion (1-based).
pub fn criterion(id: usize, cfg: &VerifyConfig) -> Result<Check> {
    let c = Some(id);
    Ok(match id {
        1 => run_check(c, "Sparre Andersen identities", "one-dimensional walk and bridge formulas", Some(1.0), || {
            let mut bad = Vec::new();
            for n in 1..=25usize {
                let walk = non_absorption_probability(&WalkFamily::walk_b(n, 1)?)?;
                let four_n = BigInt::one() << (2 * n);
                let want = rat(BigInt::from(binomial(2 * n, n)) * 2, four_n);
                if walk != want {
                    bad.push(format!("walk n={n}"));
                }
                if n >= 2 {
                    let bridge = non_absorption_probability(&WalkFamily::bridge_a(n, 1)?)?;
                    if bridge != rat(2, n as i64) {
                        bad.push(format!("bridge n={n}"));
                    }
                }
            }
            Ok(("walk 2C(2n,n)/4^n for n=1..25, bridge 2/n for n=2..25".into(), mismatch_text(&bad), bad.is_empty()))
        }),
        2 => run_check(c, "Wendel equivalence", "joint walks of unit steps", Some(1.0), || {
            let mut bad = Vec::new();
            for r in 1..=12usize {
                for d in 1..=r {
                    let got = non_absorption_probability(&WalkFamily::joint_b(vec![1; r], d)?)?;
                    let sum: BigInt = (0..d).map(|k| BigInt::from(binomial(r - 1, k))).sum();
                    if got != rat(sum, BigInt::one() << (r - 1)) {
                        bad.push(format!("r={r} d={d}"));
                    }
                }
            }
            Ok(("2^(1-r) sum_{k<d} C(r-1,k) for r<=12, d<=r".into(), mismatch_text(&bad), bad.is_empty()))
        }),
        3 => run_check(c, "region count oracle", "Zaslavsky count vs sign-vector enumeration", Some(60.0), || {
            let mut bad = Vec::new();
            let mut cases = 0;
            let mut compare = |label: String, arr: &Arrangement| -> Result<()> {
                cases += 1;
                let z = zaslavsky_region_count(&whitney_characteristic_polynomial(arr)?);
                let e = enumerate_regions(arr)?.len();
                if z != e.into() {
                    bad.push(format!("{label}: {z} vs {e}"));
                }
                Ok(())
            };
            for (kind, ns) in [(A, 2..=5), (B, 1..=4), (D, 2..=4)] {
                for n in ns {
                    compare(format!("{kind:?}{n}"), &Arrangement::reflection(kind, n)?)?;
                }
            }
            let mut rng = stream_rng(cfg.sub_seed(3), 0);
            for i in 0..20 {
                use rand::Rng;
                let dim = rng.random_range(1..=4usize);
                let m = rng.random_range(1..=8usize).min(if dim == 1 { 1 } else { 8 });
                compare(format!("random #{i}"), &Arrangement::random_integer(&mut rng, dim, m, 3)?)?;
            }
            Ok((format!("equality on {cases} arrangements"), mismatch_text(&bad), bad.is_empty()))
        }),
        4 => run_check(c, "intersected-region oracle", "generic-subspace region count", Some(120.0), || {
            let mut bad = Vec::new();
            let mut draws = 0;
            let mut rng = stream_rng(cfg.sub_seed(4), 0);
            for (kind, ns) in [(A, 2..=5), (B, 1..=4), (D, 2..=4)] {
                for n in ns {
                    let arr = Arrangement::reflection(kind, n)?;
                    let chi = reflection_characteristic_polynomial(kind, n)?;
                    for d in 1..n {
                        let want = intersected_region_count(&chi, d)?;
                        for _ in 0..10 {
                            draws += 1;
                            let l = Subspace::random_gaussian(&mut rng, n, n - d)?;
                            let got = count_regions_meeting_subspace(&arr, &l, MeetMode::Open)?;
                            if !got.general_position || want != got.count.into() {
                                bad.push(format!("{kind:?}{n} d={d}: {want} vs {}", got.count));
                            }
                        }
                    }
                }
            }
            Ok((format!("equality on {draws} draws"), mismatch_text(&bad), bad.is_empty()))
        }),
        5 => run_check(c, "Klivans-Swartz", "|G| v_k(chamber) = a_k", Some(1.0), || {
            let mut bad = Vec::new();
            for kind in [A, B, D] {
                for n in kind.min_n()..=6 {
                    if !klivans_swartz_check(kind, n)? {
                        bad.push(format!("{kind:?}{n}"));
                    }
                }
            }
            Ok(("exact equality for A, B, D with n <= 6".into(), mismatch_text(&bad), bad.is_empty()))
        }),
        6 => run_check(c, "kernel-chamber constancy", "chambers met by the increment kernel", Some(120.0), || {
            let mut bad = Vec::new();
            let mut rng = stream_rng(cfg.sub_seed(6), 0);
            let mut seen = Vec::new();
            for (n, d, group) in [(3, 1, B), (4, 1, B), (4, 2, B), (3, 1, A), (4, 2, A), (3, 1, D)] {
                let model = IncrementModel::Gaussian { d };
                let want = predicted_chamber_count(group, n, d)?;
                let mut counts = Vec::new();
                for _ in 0..20 {
                    let mut x = sample_increments_with(&model, n, &mut rng)?;
                    if group == A {
                        x = make_bridge(&model, &x)?;
                    }
                    counts.push(chamber_intersection_count(&x, group)? as u64);
                }
                if counts.iter().any(|&k| k != want) {
                    bad.push(format!("({n},{d},{group:?}): predicted {want}, got {counts:?}"));
                }
                seen.push(format!("({n},{d},{group:?})={want}"));
            }
            Ok((seen.join(" "), mismatch_text(&bad), bad.is_empty()))
        }),
        7 => run_check(c, "distribution-freeness", "absorption does not depend on the step law", Some(600.0), || {
            let mut bad = Vec::new();
            let mut obs = Vec::new();
            let mut k = 0;
            for (n, d) in [(6, 2), (8, 3), (10, 2)] {
                let fam = WalkFamily::walk_b(n, d)?;
                let exact = ratio_to_f64(&absorption_probability(&fam)?.absorb);
                let mut ests = Vec::new();
                for name in ["gaussian", "uniform-sphere", "heavy-tail"] {
                    k += 1;
                    let model = IncrementModel::from_name(name, d)?;
                    let e = estimate_absorption(&model, &fam, cfg.samples, cfg.sub_seed(700 + k), crate::hull::DEFAULT_TOL)?;
                    let z = e.z_score(exact);
                    obs.push(format!("({n},{d},{name}) z={z:+.2}"));
                    if z.abs() > 4.0 || e.stderr > 0.005 || e.ambiguous_fraction >= 1e-3 {
                        bad.push(format!(
                            "({n},{d},{name}): p={:.5} exact={exact:.5} se={:.5} amb={}",
                            e.p_hat, e.stderr, e.ambiguous_fraction
                        ));
                    }
                    ests.push((name, e));
                }
                for i in 0..ests.len() {
                    for j in i + 1..ests.len() {
                        let (a, b) = (&ests[i].1, &ests[j].1);
                        let se = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
                        if (a.p_hat - b.p_hat).abs() > 4.0 * se {
                            bad.push(format!("({n},{d}) {} vs {}", ests[i].0, ests[j].0));
                        }
                    }
                }
            }
            Ok(("|z| <= 4, stderr <= 0.005, ambiguous < 1e-3, models pairwise consistent".into(), format!("{}; {}", obs.join(", "), mismatch_text(&bad)), bad.is_empty()))
        }),
        8 => run_check(c, "lattice one-sided bound", "non-generic walks absorb at least as often", Some(120.0), || {
            let mut bad = Vec::new();
            let mut obs = Vec::new();
            for (i, (n, d)) in [(10usize, 2usize), (12, 3)].into_iter().enumerate() {
                let fam = WalkFamily::walk_b(n, d)?;
                let exact = ratio_to_f64(&absorption_probability(&fam)?.absorb);
                let e = estimate_absorption(&IncrementModel::LatticeSimple { d }, &fam, cfg.samples, cfg.sub_seed(800 + i as u64), crate::hull::DEFAULT_TOL)?;
                let interior = e.interior_fraction.unwrap_or(0.0);
                let interior_se = (interior * (1.0 - interior) / e.samples as f64).sqrt();
                obs.push(format!("({n},{d}) p={:.5} interior={interior:.5} generic={exact:.5}", e.p_hat));
                if e.p_hat < exact - 4.0 * e.stderr {
                    bad.push(format!("({n},{d}) closed hull below generic"));
                }
                if interior > exact + 4.0 * interior_se {
                    bad.push(format!("({n},{d}) interior above generic"));
                }
            }
            Ok(("interior - 4se <= generic <= closed + 4se".into(), format!("{}; {}", obs.join(", "), mismatch_text(&bad)), bad.is_empty()))
        }),
        9 => run_check(c, "Crofton Monte Carlo", "half-tails from random subspace hits", Some(300.0), || {
            let mut bad = Vec::new();
            let mut obs = Vec::new();
            let mut k = 0;
            for (kind, n) in [(B, 3), (B, 4), (A, 4)] {
                let chamber = WeylChamber::new(kind, n)?;
                let v = weyl_intrinsic_volumes::<f64>(kind, n)?;
                for d in 1..=2 {
                    k += 1;
                    let exact = v.half_tail(d + 1)?.value;
                    let e = crofton_mc_estimate(&chamber, d, cfg.samples, cfg.sub_seed(900 + k))?;
                    let z = e.z_score(exact);
                    obs.push(format!("{kind:?}{n} d={d} h={:.5} exact={exact:.5} z={z:+.2}", e.p_hat));
                    if z.abs() > 4.0 {
                        bad.push(format!("{kind:?}{n} d={d}"));
                    }
                }
            }
            Ok(("|z| <= 4".into(), format!("{}; {}", obs.join(", "), mismatch_text(&bad)), bad.is_empty()))
        }),
        10 => run_check(c, "Steiner Monte Carlo", "distance-to-chamber law as a Beta mixture", Some(120.0), || {
            let mut bad = Vec::new();
            let mut obs = Vec::new();
            for (i, (kind, n)) in [(B, 2), (B, 3), (A, 3)].into_iter().enumerate() {
                let r = steiner_mc(&WeylChamber::new(kind, n)?, cfg.samples, cfg.sub_seed(1000 + i as u64))?;
                obs.push(format!("{kind:?}{n} KS={:.4}", r.ks_distance));
                if r.ks_distance >= 0.01 {
                    bad.push(format!("{kind:?}{n}"));
                }
            }
            Ok(("KS < 0.01".into(), format!("{}; {}", obs.join(", "), mismatch_text(&bad)), bad.is_empty()))
        }),
        11 => run_check(c, "critical-window normal limit", "exact non-absorption vs Phi(a), B case, n = 5000", Some(60.0), || {
            let n = 5000usize;
            let mut bad = Vec::new();
            let mut obs = Vec::new();
            for a in [-1.0, 0.0, 1.0] {
                let d = clt_dimension(B, n as f64, a);
                let p = ratio_to_f64(&absorption_probability(&WalkFamily::walk_b(n, d)?)?.non_absorb);
                let phi = normal_cdf(a);
                obs.push(format!("a={a:+} d={d} exact={p:.4} Phi={phi:.4}"));
                if (p - phi).abs() > 0.05 {
                    bad.push(format!("a={a:+}: gap {:.4}", (p - phi).abs()));
                }
            }
            Ok(("|exact - Phi(a)| <= 0.05".into(), format!("{}; {}", obs.join(", "), mismatch_text(&bad)), bad.is_empty()))
        }),
        12 => run_check(c, "large deviations", "sharp asymptotic off the critical window", Some(60.0), || {
            let mut bad = Vec::new();
            let mut obs = Vec::new();
            for x in [0.5, 2.0] {
                let rows = large_deviation_table(B, x, &[10_000, 100_000, 1_000_000], LdPrefactor::Corrected)?;
                let r: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
                obs.push(format!("x={x}: ratios {:.3}/{:.3}/{:.3}", r[0], r[1], r[2]));
                if !(0.5..=2.0).contains(&r[2]) || (r[2] - 1.0).abs() >= (r[0] - 1.0).abs() {
                    bad.push(format!("x={x}"));
                }
            }
            Ok(("ratio in [0.5, 2] at 1e6 and closer to 1 than at 1e4".into(), format!("{}; {}", obs.join(", "), mismatch_text(&bad)), bad.is_empty()))
        }),
        13 => run_check(c, "fixed-dimension asymptotics", "leading-order decay at fixed d", Some(30.0), || {
            let mut bad = Vec::new();
            let mut obs = Vec::new();
            for case in [A, B] {
                for d in [2, 3] {
                    let rows = fixed_dimension_table(case, d, &[1_000, 10_000, 100_000, 1_000_000])?;
                    let gaps: Vec<f64> = rows.iter().map(|r| (r.ratio - 1.0).abs()).collect();
                    obs.push(format!("{case:?} d={d}: |ratio-1| {}", gaps.iter().map(|g| format!("{g:.3}")).collect::<Vec<_>>().join("/")));
                    if gaps.windows(2).any(|w| w[1] >= w[0]) {
                        bad.push(format!("{case:?} d={d}"));
                    }
                }
            }
            Ok(("|ratio-1| strictly decreasing over 1e3..1e6".into(), format!("{}; {}", obs.join(", "), mismatch_text(&bad)), bad.is_empty()))
        }),
        _ => return invalid(format!("criteria are numbered 1..={CRITERIA}")),
    })
}

fn mismatch_text(bad: &[String]) -> String {
    if bad.is_empty() {
        "all agree".into()
    } else {
        format!("mismatches: {}", bad.join(", "))
    }
}

fn combinatorics_checks() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(run_check(None, "row totals", "coefficient sums equal group orders", None, || {
        let mut bad = Vec::new();
        for f in [Family::Stirling, Family::B, Family::D] {
            for n in 2..=60 {
                if row(f, n)?.total() != f.row_total(n) {
                    bad.push(format!("{f:?}{n}"));
                }
            }
        }
        Ok(("n!, 2^n n!, 2^(n-1) n! for n = 2..60".into(), mismatch_text(&bad), bad.is_empty()))
    }));
    out.push(run_check(None, "parity", "even and odd coefficient sums agree", None, || {
        let mut bad = Vec::new();
        for f in [Family::Stirling, Family::B, Family::D] {
            for n in 2..=60 {
                let r = row(f, n)?;
                let (mut even, mut odd) = (num_bigint::BigUint::zero(), num_bigint::BigUint::zero());
                for (k, c) in r.coeffs().iter().enumerate() {
                    if k % 2 == 0 {
                        even += c;
                    } else {
                        odd += c;
                    }
                }
                if even != odd {
                    bad.push(format!("{f:?}{n}"));
                }
            }
        }
        Ok(("equal halves for n = 2..60".into(), mismatch_text(&bad), bad.is_empty()))
    }));
    out.push(run_check(None, "recurrences", "c(n+1,k) = r_n c(n,k) + c(n,k-1)", None, || {
        let mut bad = Vec::new();
        for (f, root) in [(Family::Stirling, 0u64), (Family::B, 1)] {
            for n in 1..=40usize {
                let (a, b) = (row(f, n)?, row(f, n + 1)?);
                // new root: n for Stirling, 2n+1 for B
                let r = if root == 0 { n as u64 } else { 2 * n as u64 + 1 };
                for k in 0..=(n as i64 + 1) {
                    if b.get(k) != a.get(k) * r + a.get(k - 1) {
                        bad.push(format!("{f:?}({n},{k})"));
                    }
                }
            }
        }
        Ok(("holds for n <= 40".into(), mismatch_text(&bad), bad.is_empty()))
    }));
    out.push(run_check(None, "unimodality", "rows rise then fall", None, || {
        let mut bad = Vec::new();
        for f in [Family::Stirling, Family::B, Family::D] {
            for n in 2..=80 {
                if !is_unimodal(row(f, n)?.coeffs()) {
                    bad.push(format!("{f:?}{n}"));
                }
            }
        }
        Ok(("unimodal for n <= 80".into(), mismatch_text(&bad), bad.is_empty()))
    }));
    out.push(run_check(None, "float rows", "Bernoulli-sum law matches exact rows", None, || {
        let mut worst: f64 = 0.0;
        for f in [Family::Stirling, Family::B, Family::D] {
            let n = 40;
            let r = row(f, n)?;
            let total = BigInt::from(f.row_total(n));
            let pmf = poisson_binomial_pmf(&f.bernoulli_probs(n))?;
            for (k, c) in r.coeffs().iter().enumerate() {
                let exact = ratio_to_f64(&BigRational::new(BigInt::from(c.clone()), total.clone()));
                let got = pmf.pmf.get(k).copied().unwrap_or(0.0);
                worst = worst.max((got - exact).abs());
            }
        }
        Ok(("max abs error <= 1e-14".into(), format!("{worst:.2e}"), worst <= 1e-14))
    }));
    out.push(run_check(None, "exact vs float absorption", "both evaluation routes agree", None, || {
        let mut worst: f64 = 0.0;
        for n in [5usize, 50, 400, 1200] {
            for d in [1usize, 2, 4, 7] {
                for fam in [WalkFamily::walk_b(n, d)?, WalkFamily::walk_d(n, d)?, WalkFamily::bridge_a(n, d)?] {
                    let e = ratio_to_f64(&absorption_probability(&fam)?.absorb);
                    let f = absorption_probability_float(&fam)?.absorb;
                    worst = worst.max((e - f).abs());
                }
            }
        }
        Ok(("max abs error <= 1e-12".into(), format!("{worst:.2e}"), worst <= 1e-12))
    }));
    out
}

fn arrangement_checks() -> Vec<Check> {
    vec![run_check(None, "closed forms", "product formulas match the Whitney sum", None, || {
        let mut bad = Vec::new();
        for (kind, ns) in [(A, 2..=5), (B, 1..=4), (D, 2..=4)] {
            for n in ns {
                let w = whitney_characteristic_polynomial(&Arrangement::reflection(kind, n)?)?;
                if w != reflection_characteristic_polynomial(kind, n)? {
                    bad.push(format!("{kind:?}{n}"));
                }
            }
        }
        Ok(("equal polynomials".into(), mismatch_text(&bad), bad.is_empty()))
    })]
}

fn conic_checks() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(run_check(None, "Gauss-Bonnet", "h_0 = h_1 = 1/2 for every chamber", None, || {
        let mut bad = Vec::new();
        for kind in [A, B, D] {
            for n in kind.min_n()..=10 {
                if !weyl_intrinsic_volumes::<BigRational>(kind, n)?.gauss_bonnet_holds() {
                    bad.push(format!("{kind:?}{n}"));
                }
            }
        }
        Ok(("holds for n <= 10".into(), mismatch_text(&bad), bad.is_empty()))
    }));
    out.push(run_check(None, "projection examples", "closest point in the B chamber", None, || {
        let b2 = WeylChamber::new(B, 2)?;
        let b3 = WeylChamber::new(B, 3)?;
        let r1 = project_onto_weyl_chamber(&b2, &[-1.0, 2.0])?;
        let r2 = project_onto_weyl_chamber(&b2, &[2.0, 1.0])?;
        let r3 = project_onto_weyl_chamber(&b3, &[3.0, 1.0, 2.0])?;
        let ok = r1 == (vec![0.0, 2.0], 1.0) && r2 == (vec![1.5, 1.5], 0.5) && (r3.1 - 2.0).abs() < 1e-14;
        Ok(("(0,2):1, (1.5,1.5):0.5, (2,2,2):2".into(), format!("{r1:?}, {r2:?}, {r3:?}"), ok))
    }));
    out.push(run_check(None, "Schlafli cones", "expected volumes sum to one and match orthants", None, || {
        let v = schlafli_expected_volumes(4, 2)?;
        let mut ok = v.v == vec![rat(3, 8), rat(1, 2), rat(1, 8)];
        for n in 1..=6 {
            for m in n..n + 6 {
                ok &= schlafli_expected_volumes(m, n)?.sum() == BigRational::one();
            }
        }
        Ok(("(4,2) = [3/8, 1/2, 1/8]; sums equal 1".into(), format!("{:?}", v.v.iter().map(|x| x.to_string()).collect::<Vec<_>>()), ok))
    }));
    out
}

fn simulation_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(run_check(None, "D hull identity", "two hulls cover the hull with the reflected endpoint", None, || {
        let mut rng = stream_rng(cfg.sub_seed(50), 0);
        let mut mismatches = 0;
        for d in 1..=3 {
            let model = IncrementModel::Gaussian { d };
            for _ in 0..20 {
                let x = sample_increments_with(&model, 6, &mut rng)?;
                mismatches += d_hull_identity_mismatches(&x, 100, &mut rng)?;
            }
        }
        Ok(("0 mismatches".into(), format!("{mismatches} mismatches"), mismatches == 0))
    }));
    out.push(run_check(None, "seed determinism", "thread count does not change estimates", None, || {
        let fam = WalkFamily::walk_b(6, 2)?;
        let model = IncrementModel::Gaussian { d: 2 };
        let run = |threads: usize| -> Result<_> {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::InvalidArgument(e.to_string()))?;
            pool.install(|| estimate_absorption(&model, &fam, 5_000, cfg.seed, crate::hull::DEFAULT_TOL))
        };
        let (a, b) = (run(1)?, run(4)?);
        Ok(("identical estimates".into(), format!("{} vs {}", a.p_hat, b.p_hat), a == b))
    }));
    out
}

fn asymptotic_checks() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(run_check(None, "normal CDF symmetry", "Phi(a) + Phi(-a) = 1", None, || {
        let worst = (0..=1000).map(|i| -10.0 + 0.02 * i as f64).map(|a| (normal_cdf(a) + normal_cdf(-a) - 1.0).abs()).fold(0.0, f64::max);
        Ok(("<= 1e-14".into(), format!("{worst:.1e}"), worst <= 1e-14))
    }));
    out.push(run_check(None, "limit function at zero", "mod-Poisson limit equals one at z = 0", None, || {
        let v = mod_poisson_limit_real(0.0);
        Ok(("1 within 1e-12".into(), format!("{v}"), (v - 1.0).abs() <= 1e-12))
    }));
    out.push(run_check(None, "phase transition", "absorption crosses 1/2 near n* = e^(d/u)", None, || {
        let d = 4;
        let ns = phase_boundary(B, d);
        let above = absorption_probability_float(&WalkFamily::walk_b((4.0 * ns).round() as usize, d)?)?.absorb;
        let below = absorption_probability_float(&WalkFamily::walk_b((ns / 4.0).round() as usize, d)?)?.absorb;
        Ok(("absorb(4n*) > 1/2 > absorb(n*/4)".into(), format!("{above:.4} / {below:.4}"), above > 0.5 && below < 0.5))
    }));
    out
}

/// Runs a suite. `All` runs every suite check and every acceptance criterion once.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Report {
    let crit = |ids: &[usize]| -> Vec<Check> {
        ids.iter()
            .map(|&i| {
                criterion(i, cfg).unwrap_or_else(|e| Check {
                    criterion: Some(i),
                    name: format!("criterion {i}"),
                    reference: String::new(),
                    expected: "no error".into(),
                    observed: format!("error: {e}"),
                    passed: false,
                    seconds: 0.0,
                    time_limit: None,
                })
            })
            .collect()
    };
    let checks = match suite {
        Suite::Combinatorics => [combinatorics_checks(), crit(&[1, 2])].concat(),
        Suite::Arrangements => [arrangement_checks(), crit(&[3, 4])].concat(),
        Suite::Conic => [conic_checks(), crit(&[5, 9, 10])].concat(),
        Suite::Simulation => [simulation_checks(cfg), crit(&[6, 7, 8])].concat(),
        Suite::Asymptotics => [asymptotic_checks(), crit(&[11, 12, 13])].concat(),
        Suite::Acceptance => crit(&(1..=CRITERIA).collect::<Vec<_>>()),
        Suite::All => [
            combinatorics_checks(),
            arrangement_checks(),
            conic_checks(),
            simulation_checks(cfg),
            asymptotic_checks(),
            crit(&(1..=CRITERIA).collect::<Vec<_>>()),
        ]
        .concat(),
    };
    Report { suite, config: *cfg, checks }
}
