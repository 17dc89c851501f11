//! Conic intrinsic volumes of Weyl chambers and the Monte Carlo checks built
//! on the Steiner and Crofton formulas.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::{
    binomial, reflection_characteristic_polynomial, schlafli_count, whitney_characteristic_polynomial, Arrangement,
    ReflectionType, ENUMERATION_CAP,
};
use crate::combinatorics::row;
use crate::error::{invalid, Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::sampling::{grassmannian_basis, run_streams, uniform_sphere, MCEstimate, DEFAULT_STREAMS};
use crate::scalar::Scalar;
use crate::special::beta_cdf;

/// Intrinsic volumes `v_0..v_n` of a closed convex cone in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicVolumes<T> {
    pub n: usize,
    pub v: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfTailValue<T> {
    pub k: usize,
    pub value: T,
}

impl<T: Scalar> IntrinsicVolumes<T> {
    pub fn new(v: Vec<T>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::EmptyInput);
        }
        if v.iter().any(|x| x.is_neg()) {
            return invalid("intrinsic volumes must be nonnegative");
        }
        Ok(IntrinsicVolumes { n: v.len() - 1, v })
    }

    pub fn is_exact(&self) -> bool {
        T::EXACT
    }

    pub fn sum(&self) -> T {
        self.v.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// `h_k = v_k + v_{k+2} + …`
    pub fn half_tail(&self, k: usize) -> Result<HalfTailValue<T>> {
        if k > self.n {
            return invalid(format!("half-tail index {k} exceeds n = {}", self.n));
        }
        let value = self.v.iter().skip(k).step_by(2).cloned().fold(T::zero(), |a, b| a + b);
        Ok(HalfTailValue { k, value })
    }

    /// Total mass one and, unless the cone is a subspace, even and odd sums of one half each.
    pub fn gauss_bonnet_holds(&self) -> bool {
        let half = T::one() / T::from_i64(2);
        let subspace = self.v.iter().filter(|x| !x.is_negligible()).count() == 1;
        let total_ok = (self.sum() - T::one()).is_negligible();
        if subspace {
            return total_ok;
        }
        let h0 = self.half_tail(0).map(|h| h.value).unwrap_or_else(|_| T::zero());
        let h1 = self.half_tail(1).map(|h| h.value).unwrap_or_else(|_| T::zero());
        total_ok && (h0 - half.clone()).is_negligible() && (h1 - half).is_negligible()
    }

    pub fn to_f64(&self) -> IntrinsicVolumes<f64> {
        IntrinsicVolumes { n: self.n, v: self.v.iter().map(|x| x.to_f64()).collect() }
    }
}

/// The fundamental chamber of a reflection group, given by inward normals
/// (`<r, x> >= 0` for every row `r`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylChamber {
    pub kind: ReflectionType,
    pub n: usize,
    pub normals: Vec<Vec<i64>>,
}

impl WeylChamber {
    /// A: `x_1 <= … <= x_n`; B: `0 <= x_1 <= … <= x_n`; D: `|x_1| <= x_2 <= … <= x_n`.
    pub fn new(kind: ReflectionType, n: usize) -> Result<Self> {
        kind.check(n)?;
        let diff = |i: usize| {
            let mut r = vec![0i64; n];
            r[i + 1] = 1;
            r[i] = -1;
            r
        };
        let mut normals = Vec::new();
        match kind {
            ReflectionType::A => normals.extend((0..n - 1).map(diff)),
            ReflectionType::B => {
                let mut e1 = vec![0i64; n];
                e1[0] = 1;
                normals.push(e1);
                normals.extend((0..n - 1).map(diff));
            }
            ReflectionType::D => {
                let mut plus = vec![0i64; n];
                plus[0] = 1;
                plus[1] = 1;
                normals.push(diff(0));
                normals.push(plus);
                normals.extend((1..n - 1).map(diff));
            }
        }
        Ok(WeylChamber { kind, n, normals })
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.normals.iter().all(|r| r.iter().zip(x).map(|(a, b)| *a as f64 * b).sum::<f64>() >= -tol)
    }

    fn float_normals(&self) -> Vec<DVector<f64>> {
        self.normals.iter().map(|r| DVector::from_iterator(self.n, r.iter().map(|&a| a as f64))).collect()
    }
}

/// Intrinsic volumes of the Weyl chamber: the characteristic row divided by the group order.
pub fn weyl_intrinsic_volumes<T: Scalar>(kind: ReflectionType, n: usize) -> Result<IntrinsicVolumes<T>> {
    kind.check(n)?;
    let family = kind.family();
    let r = row(family, n)?;
    let total = BigInt::from(family.row_total(n));
    let v = r
        .coeffs()
        .iter()
        .map(|c| T::from_ratio(&BigRational::new(BigInt::from(c.clone()), total.clone())))
        .collect();
    IntrinsicVolumes::new(v)
}

pub type ExactVolumes = IntrinsicVolumes<BigRational>;
pub type FloatVolumes = IntrinsicVolumes<f64>;

/// Euclidean projection onto the closed chamber and the squared distance.
pub fn project_onto_weyl_chamber(chamber: &WeylChamber, x: &[f64]) -> Result<(Vec<f64>, f64)> {
    if x.len() != chamber.n {
        return invalid(format!("point has length {}, chamber dimension {}", x.len(), chamber.n));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return invalid("point has non-finite coordinates");
    }
    let p = match chamber.kind {
        ReflectionType::A => isotonic(x),
        ReflectionType::B => isotonic(x).into_iter().map(|v| v.max(0.0)).collect(),
        ReflectionType::D => dykstra(chamber, x)?,
    };
    let dist_sq = x.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((p, dist_sq))
}

/// Nondecreasing least-squares fit by pool-adjacent-violators.
fn isotonic(x: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(x.len());
    for &v in x {
        blocks.push((v, 1));
        while blocks.len() >= 2 {
            let (m2, c2) = blocks[blocks.len() - 1];
            let (m1, c1) = blocks[blocks.len() - 2];
            if m1 <= m2 {
                break;
            }
            blocks.pop();
            let c = c1 + c2;
            *blocks.last_mut().unwrap() = ((m1 * c1 as f64 + m2 * c2 as f64) / c as f64, c);
        }
    }
    blocks.into_iter().flat_map(|(m, c)| std::iter::repeat_n(m, c)).collect()
}

pub const DYKSTRA_TOL: f64 = 1e-10;
const DYKSTRA_MAX_SWEEPS: usize = 1_000_000;

/// Dykstra's alternating projection onto the chamber's half-spaces, followed
/// by an active-set polish that snaps to the exact face projection when the
/// KKT conditions certify it.
fn dykstra(chamber: &WeylChamber, x0: &[f64]) -> Result<Vec<f64>> {
    let normals = chamber.float_normals();
    let x0 = DVector::from_column_slice(x0);
    let scale = x0.norm().max(1.0);
    let mut x = x0.clone();
    let mut incr: Vec<DVector<f64>> = vec![DVector::zeros(chamber.n); normals.len()];
    let mut converged = false;
    for _ in 0..DYKSTRA_MAX_SWEEPS {
        let before = x.clone();
        for (a, y) in normals.iter().zip(incr.iter_mut()) {
            let z = &x + &*y;
            let t = a.dot(&z);
            let p = if t < 0.0 { &z - a * (t / a.norm_squared()) } else { z.clone() };
            *y = &z - &p;
            x = p;
        }
        let violation = normals.iter().map(|a| (-a.dot(&x)).max(0.0)).fold(0.0, f64::max);
        if (&x - before).norm() <= DYKSTRA_TOL * 1e-3 * scale && violation <= DYKSTRA_TOL * scale {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Dykstra projection"));
    }
    Ok(polish(&normals, &x0, &x, scale).unwrap_or_else(|| x.iter().cloned().collect()))
}

fn polish(normals: &[DVector<f64>], x0: &DVector<f64>, approx: &DVector<f64>, scale: f64) -> Option<Vec<f64>> {
    let active: Vec<&DVector<f64>> = normals.iter().filter(|a| a.dot(approx) <= 1e-7 * scale).collect();
    if active.is_empty() {
        return Some(x0.iter().cloned().collect());
    }
    let n = x0.len();
    let a = DMatrix::from_fn(active.len(), n, |i, j| active[i][j]);
    let gram = &a * a.transpose();
    let mu = -gram.lu().solve(&(&a * x0))?;
    if mu.iter().any(|m| *m < -1e-12 * scale) {
        return None;
    }
    let z = x0 + a.transpose() * mu;
    if normals.iter().any(|r| r.dot(&z) < -1e-12 * scale) {
        return None;
    }
    Some(z.iter().cloned().collect())
}

/// `P[dist^2(θ, C) <= λ]` for `θ` uniform on the sphere: `Σ_k v_k F_k(λ)`
/// where `F_k` is the `Beta((n-k)/2, k/2)` distribution function.
pub fn steiner_tail_cdf<T: Scalar>(v: &IntrinsicVolumes<T>, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return invalid(format!("lambda = {lambda} outside [0, 1]"));
    }
    if lambda == 1.0 {
        // every component is at its top; avoid reporting the rounded mass
        return Ok(1.0);
    }
    let n = v.n as f64;
    Ok(v.v.iter().enumerate().map(|(k, vk)| vk.to_f64() * beta_cdf((n - k as f64) / 2.0, k as f64 / 2.0, lambda)).sum())
}

/// Left limit of [`steiner_tail_cdf`] at `lambda`; differs only at the atoms 0 and 1.
fn steiner_tail_cdf_left<T: Scalar>(v: &IntrinsicVolumes<T>, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        0.0
    } else if lambda >= 1.0 {
        1.0 - v.v[0].to_f64()
    } else {
        steiner_tail_cdf(v, lambda).unwrap_or(0.0)
    }
}

/// Squared distance from a uniform sphere point to the chamber, with the two
/// atoms (projection zero or the point itself) snapped exactly.
pub fn sample_dist_sq<R: Rng + ?Sized>(rng: &mut R, chamber: &WeylChamber) -> Result<f64> {
    let theta = uniform_sphere(rng, chamber.n);
    let x: Vec<f64> = theta.iter().cloned().collect();
    let (p, d2) = project_onto_weyl_chamber(chamber, &x)?;
    let pnorm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
    if pnorm <= 1e-12 {
        return Ok(1.0);
    }
    if d2.sqrt() <= 1e-12 {
        return Ok(0.0);
    }
    Ok(d2.min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinerCheck {
    pub kind: ReflectionType,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub ks_distance: f64,
}

/// Kolmogorov–Smirnov distance between sampled `dist^2(θ, C)` and the Steiner mixture.
pub fn steiner_mc(chamber: &WeylChamber, samples: usize, seed: u64) -> Result<SteinerCheck> {
    if samples == 0 {
        return invalid("need at least one sample");
    }
    let v = weyl_intrinsic_volumes::<f64>(chamber.kind, chamber.n)?;
    let chunks = run_streams(seed, samples, DEFAULT_STREAMS, |rng, count| {
        (0..count).map(|_| sample_dist_sq(rng, chamber)).collect::<Result<Vec<f64>>>()
    });
    let mut xs = Vec::with_capacity(samples);
    for c in chunks {
        xs.extend(c?);
    }
    xs.sort_by(f64::total_cmp);
    Ok(SteinerCheck { kind: chamber.kind, n: chamber.n, samples, seed, ks_distance: ks_distance(&xs, &v) })
}

/// KS distance for sorted samples against a CDF with atoms at 0 and 1.
pub fn ks_distance(sorted: &[f64], v: &FloatVolumes) -> f64 {
    let m = sorted.len() as f64;
    let mut points: Vec<f64> = vec![0.0, 1.0];
    points.extend_from_slice(sorted);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut worst: f64 = 0.0;
    let mut below = 0usize;
    for t in points {
        while below < sorted.len() && sorted[below] < t {
            below += 1;
        }
        let mut upto = below;
        while upto < sorted.len() && sorted[upto] <= t {
            upto += 1;
        }
        let left = (below as f64 / m - steiner_tail_cdf_left(v, t)).abs();
        let right = (upto as f64 / m - steiner_tail_cdf(v, t).unwrap_or(1.0)).abs();
        worst = worst.max(left).max(right);
    }
    worst
}

/// Whether the subspace spanned by the columns of `basis` meets the chamber
/// outside the origin: the maximal total slack over unit-box coefficients is positive.
pub fn subspace_meets_chamber(chamber: &WeylChamber, basis: &DMatrix<f64>) -> bool {
    let k = basis.ncols();
    let rows: Vec<Vec<f64>> = chamber
        .float_normals()
        .iter()
        .map(|a| (0..k).map(|j| a.dot(&basis.column(j))).collect())
        .collect();
    let obj: Vec<f64> = (0..k).map(|j| rows.iter().map(|r| r[j]).sum()).collect();
    let mut lp = LinearProgram::<f64>::new(k).maximize(obj);
    for j in 0..k {
        lp.set_free(j);
        let mut e = vec![0.0; k];
        e[j] = 1.0;
        lp.add_row(e.clone(), Relation::Le, 1.0);
        lp.add_row(e, Relation::Ge, -1.0);
    }
    for r in rows {
        lp.add_row(r, Relation::Ge, 0.0);
    }
    matches!(lp.solve(), LpOutcome::Optimal { value, .. } if value > 1e-9)
}

/// Estimates `h_{d+1}(C)` as half the chance that a uniform `(n-d)`-dimensional subspace hits the chamber.
pub fn crofton_mc_estimate(chamber: &WeylChamber, d: usize, samples: usize, seed: u64) -> Result<MCEstimate> {
    if d >= chamber.n {
        return invalid(format!("codimension {d} must be below n = {}", chamber.n));
    }
    if samples == 0 {
        return invalid("need at least one sample");
    }
    let k = chamber.n - d;
    let hits: usize = run_streams(seed, samples, DEFAULT_STREAMS, |rng, count| {
        (0..count).filter(|_| subspace_meets_chamber(chamber, &grassmannian_basis(rng, chamber.n, k))).count()
    })
    .into_iter()
    .sum();
    Ok(MCEstimate::from_counts(hits, 0, samples, seed).scaled(0.5))
}

/// Expected intrinsic volumes of the cone cut out by `m` generic random
/// half-spaces in `R^n`: `C(m-1, n-1)/C(m,n)` at `k = 0` and
/// `binom(m, n-k)/C(m,n)` for `k >= 1`, with `C(m,n)` the Schläfli count.
///
/// Taking the binomial formula at `k = 0` too would overshoot total mass one;
/// the constant term of the generic characteristic polynomial fixes it.
pub fn schlafli_expected_volumes(m: usize, n: usize) -> Result<ExactVolumes> {
    if n == 0 || m < n {
        return invalid(format!("need m >= n >= 1, got m = {m}, n = {n}"));
    }
    let total = BigInt::from(schlafli_count(m, n)?);
    let frac = |num: num_bigint::BigUint| BigRational::new(BigInt::from(num), total.clone());
    let mut v = vec![frac(binomial(m - 1, n - 1))];
    v.extend((1..=n).map(|k| frac(binomial(m, n - k))));
    IntrinsicVolumes::new(v)
}

/// Klivans–Swartz for reflection arrangements: `|G| · v_k(chamber) = a_k`.
/// The arrangement side uses the Whitney sum on the actual mirrors when small
/// enough and the product formula otherwise.
pub fn klivans_swartz_check(kind: ReflectionType, n: usize) -> Result<bool> {
    let arr = Arrangement::reflection(kind, n)?;
    let chi = if arr.len() <= ENUMERATION_CAP {
        whitney_characteristic_polynomial(&arr)?
    } else {
        reflection_characteristic_polynomial(kind, n)?
    };
    let v = weyl_intrinsic_volumes::<BigRational>(kind, n)?;
    let order = BigRational::from_integer(BigInt::from(kind.group_order(n)));
    if !(v.sum() == BigRational::one() && v.gauss_bonnet_holds()) {
        return Ok(false);
    }
    Ok((0..=n).all(|k| {
        let lhs = &order * &v.v[k];
        let rhs = BigRational::from_integer(BigInt::from(chi.a(k as i64)));
        lhs == rhs
    }) && chi.coefficients().len() == n + 1
        && !v.v.iter().any(|x| x < &BigRational::zero()))
}
