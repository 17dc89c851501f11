//! Asymptotic approximations of the non-absorption and absorption
//! probabilities as `n → ∞`, for fixed `d`, in the critical window
//! `d ≈ u log n`, and in the large-deviation regime `d = u x log n`.
//!
//! The scale `u` is 1 for bridges (type A) and 1/2 for the B and D walks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::absorption::{absorption_probability_float, FloatAbsorption, WalkFamily};
use crate::arrangement::ReflectionType;
use crate::error::{invalid, Result};
use crate::special::{gamma, ln_gamma, normal_cdf, recip_gamma_complex};

/// Half-width of the excluded band around `x = 1` in the large-deviation formula.
pub const LD_GUARD: f64 = 0.05;

pub fn scale(case: ReflectionType) -> f64 {
    match case {
        ReflectionType::A => 1.0,
        ReflectionType::B | ReflectionType::D => 0.5,
    }
}

/// The walk family whose probabilities a case describes.
pub fn family_for(case: ReflectionType, n: usize, d: usize) -> Result<WalkFamily> {
    match case {
        ReflectionType::A => WalkFamily::bridge_a(n, d),
        ReflectionType::B => WalkFamily::walk_b(n, d),
        ReflectionType::D => WalkFamily::walk_d(n, d),
    }
}

/// Double-precision absorb / non-absorb probabilities for the case.
pub fn probabilities_float(case: ReflectionType, n: usize, d: usize) -> Result<FloatAbsorption> {
    absorption_probability_float(&family_for(case, n, d)?)
}

/// Leading term of the non-absorption probability at fixed `d ≥ 2`.
pub fn fixed_dimension_asymptotic(case: ReflectionType, n: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return invalid("the fixed-dimension asymptotic needs d >= 2");
    }
    if n < 3.0 {
        return invalid("the fixed-dimension asymptotic needs n >= 3");
    }
    let l = n.ln();
    let k = (d - 1) as f64;
    let log_fact = ln_gamma(k + 1.0);
    Ok(match case {
        ReflectionType::A => 2.0 * (k * l.ln() - log_fact).exp() / n,
        _ => (k * l.ln() - log_fact - (d as f64 - 2.0) * 2f64.ln()).exp() / (PI * n).sqrt(),
    })
}

/// `a = (d - u log n) / sqrt(u log n)`.
pub fn clt_parameter(case: ReflectionType, n: f64, d: f64) -> f64 {
    let m = scale(case) * n.ln();
    (d - m) / m.sqrt()
}

/// `Φ(a)`, the limiting non-absorption probability in the critical window.
pub fn clt_approximation(case: ReflectionType, n: f64, d: f64) -> Result<f64> {
    if n < 3.0 {
        return invalid("the CLT approximation needs n >= 3");
    }
    Ok(normal_cdf(clt_parameter(case, n, d)))
}

/// The dimension closest to `u log n + a sqrt(u log n)`.
pub fn clt_dimension(case: ReflectionType, n: f64, a: f64) -> usize {
    let m = scale(case) * n.ln();
    (m + a * m.sqrt()).round().max(1.0) as usize
}

/// Limit of `E[e^{z X_n}] / e^{(log n / 2)(e^z - 1)}` for the B-type counts:
/// `2^w Γ(w/2) / (2 √π Γ(w))` with `w = e^z`, evaluated as `1 / Γ((w + 1)/2)`.
pub fn mod_poisson_limit(z: Complex64) -> Complex64 {
    let w = z.exp();
    recip_gamma_complex((w + 1.0) / 2.0)
}

pub fn mod_poisson_limit_real(z: f64) -> f64 {
    mod_poisson_limit(Complex64::new(z, 0.0)).re
}

/// `E[e^{z X_n}] / e^{(log n / 2)(e^z - 1)}` for `X_n` with law `B(n, ·) / (2^n n!)`.
pub fn mod_poisson_ratio(n: usize, z: f64) -> f64 {
    let w = z.exp();
    let log_mgf: f64 = (1..=n).map(|i| (1.0 + (w - 1.0) / (2 * i) as f64).ln()).sum();
    (log_mgf - 0.5 * (n as f64).ln() * (w - 1.0)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LdPrefactor {
    /// `x 2^x Γ(x/2) / (√π Γ(x)) / |1 - x^2|` in the B/D cases.
    Corrected,
    /// `2^x √x Γ(x/2) / (√π Γ(x)) / |1 - x|` in the B/D cases.
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Absorb,
    NonAbsorb,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LargeDeviation {
    pub value: f64,
    pub side: Side,
    pub x_n: f64,
}

/// Sharp asymptotic of the small side (non-absorb for `x < 1`, absorb for `x > 1`)
/// with `x_n = d / (u log n)`.
pub fn large_deviation_asymptotic(
    case: ReflectionType,
    n: f64,
    d: usize,
    prefactor: LdPrefactor,
) -> Result<LargeDeviation> {
    if n < 3.0 || d == 0 {
        return invalid("the large-deviation asymptotic needs n >= 3 and d >= 1");
    }
    let u = scale(case);
    let l = n.ln();
    let x = d as f64 / (u * l);
    if (x - 1.0).abs() <= LD_GUARD {
        return invalid(format!("x_n = {x:.4} lies within {LD_GUARD} of the critical value 1"));
    }
    let rate = u * (x * x.ln() - x + 1.0);
    let base = (-rate * l).exp() / (2.0 * PI * x * u * l).sqrt();
    let shape = match (case, prefactor) {
        (ReflectionType::A, _) => 2.0 / gamma(x) / (1.0 - x * x).abs(),
        (_, LdPrefactor::Corrected) => 2.0 * x * recip_gamma_complex(Complex64::new((x + 1.0) / 2.0, 0.0)).re / (1.0 - x * x).abs(),
        (_, LdPrefactor::AsPrinted) => {
            let l_x = (x * 2f64.ln() + 0.5 * x.ln() + ln_gamma(x / 2.0) - 0.5 * PI.ln() - ln_gamma(x)).exp();
            l_x / (1.0 - x.powf(2.0 * u)).abs()
        }
    };
    let side = if x < 1.0 { Side::NonAbsorb } else { Side::Absorb };
    Ok(LargeDeviation { value: base * shape, side, x_n: x })
}

/// Dimension `round(u x log n)` used for large-deviation sweeps.
pub fn ld_dimension(case: ReflectionType, n: f64, x: f64) -> usize {
    (scale(case) * x * n.ln()).round().max(1.0) as usize
}

/// Location `n* = e^{d/u}` of the absorption phase transition.
pub fn phase_boundary(case: ReflectionType, d: usize) -> f64 {
    (d as f64 / scale(case)).exp()
}

/// Least-squares fit of `p ≈ C n^{-δ}` on a log-log scale, with `C` then
/// raised so that the bound holds at every sample point.
pub fn fit_power_bound(ns: &[f64], ps: &[f64]) -> Result<(f64, f64)> {
    if ns.len() != ps.len() || ns.len() < 2 {
        return invalid("need at least two matching points");
    }
    if ps.iter().any(|&p| p <= 0.0) {
        return invalid("probabilities must be positive");
    }
    let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = ps.iter().map(|p| p.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let delta = -sxy / sxx;
    let c = ns.iter().zip(ps).map(|(n, p)| p * n.powf(delta)).fold(0.0, f64::max);
    Ok((c, delta))
}

/// One row of an exact-versus-asymptotic table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: f64,
    pub d: usize,
    pub exact: f64,
    #[serde(with = "crate::sampling::nonfinite_f64")]
    pub asymptotic: f64,
    #[serde(with = "crate::sampling::nonfinite_f64")]
    pub ratio: f64,
}

/// Fixed-`d` sweep comparing the float-mode non-absorption with the leading term.
pub fn fixed_dimension_table(case: ReflectionType, d: usize, ns: &[usize]) -> Result<Vec<RatioRow>> {
    ns.iter()
        .map(|&n| {
            let exact = probabilities_float(case, n, d)?.non_absorb;
            let asymptotic = fixed_dimension_asymptotic(case, n as f64, d)?;
            Ok(RatioRow { n: n as f64, d, exact, asymptotic, ratio: exact / asymptotic })
        })
        .collect()
}

/// Critical-window sweep: non-absorption against `Φ(a)` at `d = round(u log n + a sqrt(u log n))`.
pub fn clt_table(case: ReflectionType, a: f64, ns: &[usize]) -> Result<Vec<RatioRow>> {
    ns.iter()
        .map(|&n| {
            let d = clt_dimension(case, n as f64, a);
            let exact = probabilities_float(case, n, d)?.non_absorb;
            let asymptotic = normal_cdf(a);
            Ok(RatioRow { n: n as f64, d, exact, asymptotic, ratio: exact / asymptotic })
        })
        .collect()
}

/// Large-deviation sweep at `d = round(u x log n)`.
pub fn large_deviation_table(
    case: ReflectionType,
    x: f64,
    ns: &[usize],
    prefactor: LdPrefactor,
) -> Result<Vec<RatioRow>> {
    ns.iter()
        .map(|&n| {
            let d = ld_dimension(case, n as f64, x);
            let ld = large_deviation_asymptotic(case, n as f64, d, prefactor)?;
            let p = probabilities_float(case, n, d)?;
            let exact = match ld.side {
                Side::Absorb => p.absorb,
                Side::NonAbsorb => p.non_absorb,
            };
            Ok(RatioRow { n: n as f64, d, exact, asymptotic: ld.value, ratio: exact / ld.value })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ReflectionType::*;

    #[test]
    fn fixed_dimension_plug_in() {
        let n = 10f64.exp();
        assert!((fixed_dimension_asymptotic(A, n, 2).unwrap() - 20.0 / n).abs() < 1e-15);
        let b = fixed_dimension_asymptotic(B, 100.0, 2).unwrap();
        assert!((b - 100f64.ln() / (100.0 * PI).sqrt()).abs() < 1e-15);
        assert!((b - 0.2598).abs() < 1e-4);
        assert!(fixed_dimension_asymptotic(B, 100.0, 1).is_err());
    }

    #[test]
    fn clt_values() {
        let n: f64 = 1e6;
        let d = 0.5 * n.ln();
        assert!((clt_approximation(B, n, d).unwrap() - 0.5).abs() < 1e-15);
        let m = n.ln();
        assert!((clt_approximation(A, n, m + m.sqrt()).unwrap() - 0.841_344_746_068_543).abs() < 1e-12);
    }

    #[test]
    fn mod_poisson_values() {
        assert!((mod_poisson_limit_real(0.0) - 1.0).abs() < 1e-12);
        assert!((mod_poisson_limit_real(2f64.ln()) - 2.0 / PI.sqrt()).abs() < 1e-12);
        // literal form at a generic complex point
        let z = Complex64::new(0.3, 0.7);
        let w = z.exp();
        use crate::special::ln_gamma_complex;
        let literal = (w * 2f64.ln() + ln_gamma_complex(w / 2.0) - ln_gamma_complex(w)).exp() / (2.0 * PI.sqrt());
        assert!((mod_poisson_limit(z) - literal).norm() < 1e-12 * literal.norm());
    }

    #[test]
    fn mod_poisson_ratio_converges() {
        for z in [-1.0, 1.0] {
            let target = mod_poisson_limit_real(z);
            let gaps: Vec<f64> = [1_000, 10_000, 100_000].iter().map(|&n| (mod_poisson_ratio(n, z) - target).abs()).collect();
            assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "z = {z}: {gaps:?}");
        }
    }

    #[test]
    fn large_deviation_plug_in() {
        // A, x = 2: L(2) = 2
        let n: f64 = 1e6;
        let d = (2.0 * n.ln()) as usize;
        let r = large_deviation_asymptotic(A, n, d, LdPrefactor::Corrected).unwrap();
        assert_eq!(r.side, Side::Absorb);
        // printed B prefactor at x = 2 equals 4 sqrt 2 / sqrt pi over |1 - 2|
        let x = 2.0f64;
        let printed = (x * 2f64.ln() + 0.5 * x.ln() + ln_gamma(1.0) - 0.5 * PI.ln() - ln_gamma(2.0)).exp();
        assert!((printed - 4.0 * 2f64.sqrt() / PI.sqrt()).abs() < 1e-12);
        let near = (0.5 * n.ln()).round() as usize;
        assert!(large_deviation_asymptotic(B, n, near, LdPrefactor::Corrected).is_err());
    }

    #[test]
    fn corrected_prefactor_matches_gamma_form() {
        for &x in &[0.3, 0.5, 2.0, 3.7] {
            let lit = x * (x * 2f64.ln() + ln_gamma(x / 2.0) - 0.5 * PI.ln() - ln_gamma(x)).exp();
            let dup = 2.0 * x / gamma((x + 1.0) / 2.0);
            assert!((lit - dup).abs() < 1e-12 * lit);
        }
    }

    #[test]
    fn phase_boundary_values() {
        assert!((phase_boundary(B, 3) - 6f64.exp()).abs() < 1e-9);
        assert!((phase_boundary(A, 3) - 3f64.exp()).abs() < 1e-12);
        let nstar = phase_boundary(B, 4);
        let above = probabilities_float(B, (4.0 * nstar) as usize, 4).unwrap().absorb;
        let below = probabilities_float(B, (nstar / 4.0) as usize, 4).unwrap().absorb;
        assert!(above > 0.5 && below < 0.5, "{above} {below}");
    }

    #[test]
    fn power_fit_recovers_exponent() {
        let ns = [1e3, 1e4, 1e5];
        let ps: Vec<f64> = ns.iter().map(|n: &f64| 3.0 * n.powf(-0.4)).collect();
        let (c, delta) = fit_power_bound(&ns, &ps).unwrap();
        assert!((delta - 0.4).abs() < 1e-12 && (c - 3.0).abs() < 1e-9);
    }
}
