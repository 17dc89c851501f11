//! Does the convex hull of a point set contain the origin?
//!
//! The floating-point test runs Wolfe's minimum-norm-point algorithm and
//! returns a two-sided certificate: convex weights when the origin is
//! (numerically) inside, a separating unit vector otherwise. Distances just
//! above the tolerance are flagged rather than silently classified.
//!
//! Integer inputs (lattice walks) go through an exact rational LP instead,
//! which also decides whether the origin is an interior point.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::rank_integer;
use crate::lp::{LinearProgram, LpOutcome, Relation};

pub const DEFAULT_TOL: f64 = 1e-10;
/// The ambiguity band is `(tol, AMBIGUITY_FACTOR * tol)`.
pub const AMBIGUITY_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// Convex weights, one per input point.
    Convex(Vec<f64>),
    /// Unit vector `u` with `<u, p_i> > 0` for every point.
    Separator(DVector<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullMembership {
    pub inside: bool,
    pub certificate: Certificate,
    /// Distance from the origin to the hull.
    pub distance: f64,
    pub boundary_ambiguous: bool,
}

/// Minimum-norm point test. `tol` is relative to the largest point norm.
pub fn origin_in_hull(points: &[DVector<f64>], tol: f64) -> Result<HullMembership> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidArgument("points must share one dimension".into()));
    }
    let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        let mut w = vec![0.0; points.len()];
        w[0] = 1.0;
        return Ok(HullMembership { inside: true, certificate: Certificate::Convex(w), distance: 0.0, boundary_ambiguous: false });
    }
    let q: Vec<DVector<f64>> = points.iter().map(|p| p / scale).collect();
    let (x, weights) = wolfe(&q)?;
    let dist = x.norm();
    let distance = dist * scale;
    if dist <= tol {
        return Ok(HullMembership { inside: true, certificate: Certificate::Convex(weights), distance, boundary_ambiguous: false });
    }
    let u = &x / dist;
    Ok(HullMembership {
        inside: false,
        certificate: Certificate::Separator(u),
        distance,
        boundary_ambiguous: dist < AMBIGUITY_FACTOR * tol,
    })
}

/// Wolfe's algorithm on points of norm at most one. Returns the minimum-norm
/// point of the hull and convex weights representing it.
fn wolfe(q: &[DVector<f64>]) -> Result<(DVector<f64>, Vec<f64>)> {
    const Z1: f64 = 1e-14; // optimality
    const Z2: f64 = 1e-12; // positivity of affine weights
    let m = q.len();
    let start = (0..m).min_by(|&a, &b| q[a].norm().total_cmp(&q[b].norm())).unwrap();
    let mut active: Vec<usize> = vec![start];
    let mut lambda: Vec<f64> = vec![1.0];
    let mut x = q[start].clone();

    for _major in 0..10_000 {
        let xx = x.norm_squared();
        if xx <= Z1 * Z1 {
            break;
        }
        let (j, xj) = (0..m).map(|i| (i, x.dot(&q[i]))).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        if xj >= xx - Z1 || active.contains(&j) {
            break;
        }
        active.push(j);
        lambda.push(0.0);

        for _minor in 0..10_000 {
            let mu = affine_minimizer(q, &active);
            if mu.iter().all(|&v| v > Z2) {
                lambda = mu;
                break;
            }
            let mut theta = 1.0f64;
            for (l, m) in lambda.iter().zip(&mu) {
                if *m <= Z2 && l - m > 0.0 {
                    theta = theta.min(l / (l - m));
                }
            }
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * m;
            }
            let mut k = 0;
            while k < active.len() {
                if lambda[k] <= Z2 {
                    active.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
            if active.len() <= 1 {
                break;
            }
        }
        x = combine(q, &active, &lambda);
    }
    let mut weights = vec![0.0; m];
    for (i, l) in active.iter().zip(&lambda) {
        weights[*i] = *l;
    }
    Ok((combine(q, &active, &lambda), weights))
}

fn combine(q: &[DVector<f64>], active: &[usize], lambda: &[f64]) -> DVector<f64> {
    let mut x = DVector::zeros(q[0].len());
    for (i, l) in active.iter().zip(lambda) {
        x += &q[*i] * *l;
    }
    x
}

/// Weights `μ` (summing to one) of the point of minimum norm in the affine hull.
fn affine_minimizer(q: &[DVector<f64>], active: &[usize]) -> Vec<f64> {
    let k = active.len();
    // [G 1; 1^T 0] [μ; ν] = [0; 1] with G the Gram matrix
    let mut a = DMatrix::zeros(k + 1, k + 1);
    for (r, &i) in active.iter().enumerate() {
        for (c, &j) in active.iter().enumerate() {
            a[(r, c)] = q[i].dot(&q[j]);
        }
        a[(r, k)] = 1.0;
        a[(k, r)] = 1.0;
    }
    let mut b = DVector::zeros(k + 1);
    b[k] = 1.0;
    let sol = a.clone().lu().solve(&b).filter(|s| s.iter().all(|v| v.is_finite())).unwrap_or_else(|| {
        a.svd(true, true).solve(&b, 1e-14).expect("SVD solve")
    });
    let mut mu: Vec<f64> = sol.iter().take(k).cloned().collect();
    let s: f64 = mu.iter().sum();
    if s.abs() > 0.0 {
        mu.iter_mut().for_each(|v| *v /= s);
    }
    mu
}

/// Checks a float membership certificate against the stated tolerances.
pub fn certificate_holds(points: &[DVector<f64>], m: &HullMembership, tol: f64) -> bool {
    let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    match &m.certificate {
        Certificate::Convex(w) => {
            let total: f64 = w.iter().sum();
            let mut s = DVector::zeros(points[0].len());
            for (p, l) in points.iter().zip(w) {
                s += p * *l;
            }
            w.iter().all(|&l| l >= 0.0) && (total - 1.0).abs() <= 1e-12 && s.norm() <= 10.0 * tol * scale
        }
        Certificate::Separator(u) => points.iter().all(|p| u.dot(p) > 0.0),
    }
}

/// Exact decision for integer points.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMembership {
    pub inside: bool,
    /// The origin lies in the interior of the hull.
    pub interior: bool,
    /// Convex weights when inside.
    pub weights: Option<Vec<BigRational>>,
    /// Integer-scaled `u` with `<u, p_i> >= 1` when outside.
    pub separator: Option<Vec<BigRational>>,
}

pub fn origin_in_hull_exact(points: &[Vec<BigInt>]) -> Result<ExactMembership> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = points[0].len();
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::InvalidArgument("points must share one dimension".into()));
    }
    let m = points.len();
    let pr: Vec<Vec<BigRational>> =
        points.iter().map(|p| p.iter().cloned().map(BigRational::from_integer).collect()).collect();

    // Σ λ_i p_i = 0, Σ λ_i = 1, λ >= 0
    let mut lp = LinearProgram::<BigRational>::new(m);
    for c in 0..d {
        lp.add_row(pr.iter().map(|p| p[c].clone()).collect(), Relation::Eq, BigRational::zero());
    }
    lp.add_row(vec![BigRational::one(); m], Relation::Eq, BigRational::one());
    if let LpOutcome::Optimal { x, .. } = lp.solve() {
        let interior = interior_check(&pr, points, d);
        return Ok(ExactMembership { inside: true, interior, weights: Some(x), separator: None });
    }
    // <u, p_i> >= 1 for all i, u free
    let mut lp = LinearProgram::<BigRational>::new(d);
    for v in 0..d {
        lp.set_free(v);
    }
    for p in &pr {
        lp.add_row(p.clone(), Relation::Ge, BigRational::one());
    }
    let separator = match lp.solve() {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    };
    Ok(ExactMembership { inside: false, interior: false, weights: None, separator })
}

/// Largest number of `(r-1)`-subsets the integer dual-cone test will scan.
const DUAL_CONE_SUBSET_CAP: usize = 20_000;

/// Exact decision for small integer points without linear programming.
///
/// With `K = {u : <u, p> >= 0 for all p}`, the origin is outside the hull iff
/// `K` has interior, and interior to it iff `K = {0}` and the points span.
/// After passing to coordinates of the span, `K` is pointed and generated by
/// vectors orthogonal to `r - 1` independent points, so the sum of those
/// generators lying in `K` is an interior point of `K` whenever one exists.
/// Falls back to the LP when the scan would be large or overflow.
pub fn origin_in_hull_lattice(points: &[Vec<i64>]) -> Result<ExactMembership> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = points[0].len();
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::InvalidArgument("points must share one dimension".into()));
    }
    match dual_cone_decision(points, d) {
        Some(m) => Ok(m),
        None => origin_in_hull_exact(&points.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>()),
    }
}

fn dual_cone_decision(points: &[Vec<i64>], d: usize) -> Option<ExactMembership> {
    let mut pts: Vec<Vec<i128>> = points.iter().map(|p| p.iter().map(|&x| x as i128).collect()).collect();
    pts.sort();
    pts.dedup();
    let has_zero = pts.iter().any(|p| p.iter().all(|&x| x == 0));
    pts.retain(|p| p.iter().any(|&x| x != 0));
    // integer basis of the span, then Gram coordinates <b_l, p>
    let mut basis: Vec<Vec<i128>> = Vec::new();
    for p in &pts {
        let mut cand = basis.clone();
        cand.push(p.clone());
        if rank_i128(&cand)? > basis.len() {
            basis = cand;
        }
    }
    let r = basis.len();
    let coords: Vec<Vec<i128>> =
        pts.iter().map(|p| basis.iter().map(|b| dot_i128(b, p)).collect::<Option<Vec<_>>>()).collect::<Option<_>>()?;
    if binomial_usize(coords.len(), r.saturating_sub(1)) > DUAL_CONE_SUBSET_CAP {
        return None;
    }
    let mut generators: Vec<Vec<i128>> = Vec::new();
    if r == 1 {
        generators.extend([vec![1], vec![-1]]);
    } else if r > 1 {
        let mut subset = Vec::new();
        cofactor_rays(&coords, r, 0, &mut subset, &mut generators)?;
    }
    let in_k: Vec<&Vec<i128>> = generators
        .iter()
        .filter(|u| coords.iter().all(|c| dot_i128(u, c).is_some_and(|v| v >= 0)))
        .collect();
    let interior = r == d && in_k.is_empty() && !coords.is_empty();
    let mut u_star = vec![0i128; r];
    for u in &in_k {
        for (a, b) in u_star.iter_mut().zip(u.iter()) {
            *a = a.checked_add(*b)?;
        }
    }
    let strictly_separated =
        !in_k.is_empty() && coords.iter().all(|c| dot_i128(&u_star, c).is_some_and(|v| v > 0));
    let inside = has_zero || !strictly_separated;
    let separator = if inside {
        None
    } else {
        // pull the separator back to R^d: u = Σ_l u*_l b_l
        let mut u = vec![BigRational::zero(); d];
        for (coef, b) in u_star.iter().zip(&basis) {
            for (x, y) in u.iter_mut().zip(b) {
                *x += BigRational::from_integer(BigInt::from(coef * y));
            }
        }
        Some(u)
    };
    Some(ExactMembership { inside, interior, weights: None, separator })
}

fn dot_i128(a: &[i128], b: &[i128]) -> Option<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| acc.checked_add(x.checked_mul(*y)?))
}

fn binomial_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..k.min(n - k) {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Rank by fraction-free elimination; `None` on overflow.
fn rank_i128(rows: &[Vec<i128>]) -> Option<usize> {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            let (a, b) = (m[rank][c], m[i][c]);
            if b == 0 {
                continue;
            }
            let (top, rest) = m.split_at_mut(i);
            for (x, &y) in rest[0].iter_mut().zip(&top[rank]) {
                *x = x.checked_mul(a)?.checked_sub(y.checked_mul(b)?)?;
            }
            let g = m[i].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
            if g > 1 {
                m[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    Some(rank)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Determinant by Bareiss elimination; `None` on overflow.
fn det_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let k = m.len();
    if k == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for c in 0..k {
        if m[c][c] == 0 {
            let Some(p) = (c + 1..k).find(|&i| m[i][c] != 0) else { return Some(0) };
            m.swap(c, p);
            sign = -sign;
        }
        for i in c + 1..k {
            for j in c + 1..k {
                let v = m[i][j].checked_mul(m[c][c])?.checked_sub(m[i][c].checked_mul(m[c][j])?)?;
                m[i][j] = v / prev;
            }
        }
        prev = m[c][c];
    }
    Some(sign * m[k - 1][k - 1])
}

/// Pushes `±` the cofactor vector of every independent `(r-1)`-subset of rows.
fn cofactor_rays(coords: &[Vec<i128>], r: usize, start: usize, subset: &mut Vec<usize>, out: &mut Vec<Vec<i128>>) -> Option<()> {
    if subset.len() == r - 1 {
        let mut v = Vec::with_capacity(r);
        for l in 0..r {
            let minor: Vec<Vec<i128>> = subset
                .iter()
                .map(|&i| coords[i].iter().enumerate().filter(|&(j, _)| j != l).map(|(_, &x)| x).collect())
                .collect();
            let det = det_i128(minor)?;
            v.push(if l % 2 == 0 { det } else { -det });
        }
        if v.iter().any(|&x| x != 0) {
            out.push(v.iter().map(|x| -x).collect());
            out.push(v);
        }
        return Some(());
    }
    for j in start..coords.len() {
        subset.push(j);
        cofactor_rays(coords, r, j + 1, subset, out)?;
        subset.pop();
    }
    Some(())
}

/// The origin is interior iff the points span `R^d` and no nonzero `u` has
/// `<u, p_i> >= 0` for all points with some strict inequality.
fn interior_check(pr: &[Vec<BigRational>], points: &[Vec<BigInt>], d: usize) -> bool {
    if rank_integer(points) < d {
        return false;
    }
    let mut obj = vec![BigRational::zero(); d];
    for p in pr {
        for (o, x) in obj.iter_mut().zip(p) {
            *o += x;
        }
    }
    let mut lp = LinearProgram::<BigRational>::new(d).maximize(obj);
    for v in 0..d {
        lp.set_free(v);
        let mut e = vec![BigRational::zero(); d];
        e[v] = BigRational::one();
        lp.add_row(e.clone(), Relation::Le, BigRational::one());
        lp.add_row(e, Relation::Ge, -BigRational::one());
    }
    for p in pr {
        lp.add_row(p.clone(), Relation::Ge, BigRational::zero());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => !value.is_positive(),
        _ => false,
    }
}
