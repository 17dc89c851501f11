//! Central hyperplane arrangements over the rationals.
//!
//! The closed-form characteristic polynomials of the reflection arrangements
//! are the fast path; Whitney's subset sum and region enumeration by exact
//! linear programming are the independent oracles they are checked against.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{self, expand_linear_factors, CoefficientVector};
use crate::error::{invalid, Error, Result};
use crate::linalg::{make_primitive, primitive_integer_vector, IntegerEchelon};
use crate::lp::{LinearProgram, LpOutcome, Relation};

/// Largest arrangement accepted by the Whitney subset sum.
pub const WHITNEY_CAP: usize = 20;
/// Largest arrangement accepted by the region oracles.
pub const ENUMERATION_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReflectionType {
    A,
    B,
    D,
}

impl ReflectionType {
    pub fn min_n(self) -> usize {
        match self {
            ReflectionType::B => 1,
            _ => 2,
        }
    }

    pub fn check(self, n: usize) -> Result<()> {
        if n < self.min_n() {
            return invalid(format!("type {self:?} needs n >= {}, got {n}", self.min_n()));
        }
        Ok(())
    }

    pub fn family(self) -> combinatorics::Family {
        match self {
            ReflectionType::A => combinatorics::Family::Stirling,
            ReflectionType::B => combinatorics::Family::B,
            ReflectionType::D => combinatorics::Family::D,
        }
    }

    /// Order of the reflection group acting on `R^n`.
    pub fn group_order(self, n: usize) -> BigUint {
        self.family().row_total(n)
    }
}

impl std::str::FromStr for ReflectionType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(ReflectionType::A),
            "B" => Ok(ReflectionType::B),
            "D" => Ok(ReflectionType::D),
            _ => invalid(format!("unknown reflection type `{s}`")),
        }
    }
}

/// A linear hyperplane stored by its primitive integer normal whose first
/// nonzero entry is positive, so equal hyperplanes have equal normals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Vec<BigInt>,
}

impl Hyperplane {
    pub fn new(mut normal: Vec<BigInt>) -> Result<Self> {
        if !make_primitive(&mut normal) {
            return invalid("hyperplane normal must be nonzero");
        }
        Ok(Self { normal })
    }

    pub fn from_i64(normal: &[i64]) -> Result<Self> {
        Self::new(normal.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    fn dot_rational(&self, v: &[BigRational]) -> BigRational {
        self.normal
            .iter()
            .zip(v)
            .fold(BigRational::zero(), |acc, (a, b)| acc + b * BigRational::from_integer(a.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    /// Builds an arrangement, silently merging repeated hyperplanes.
    pub fn new(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        if dim == 0 {
            return invalid("ambient dimension must be at least 1");
        }
        let mut out: Vec<Hyperplane> = Vec::with_capacity(hyperplanes.len());
        for h in hyperplanes {
            if h.dim() != dim {
                return invalid(format!("normal of length {} in dimension {dim}", h.dim()));
            }
            if !out.contains(&h) {
                out.push(h);
            }
        }
        Ok(Self { dim, hyperplanes: out })
    }

    pub fn from_normals(dim: usize, normals: &[Vec<i64>]) -> Result<Self> {
        let hs = normals.iter().map(|v| Hyperplane::from_i64(v)).collect::<Result<Vec<_>>>()?;
        Self::new(dim, hs)
    }

    /// Mirrors of the reflection group of the given type acting on `R^n`.
    pub fn reflection(kind: ReflectionType, n: usize) -> Result<Self> {
        kind.check(n)?;
        let unit = |i: usize| {
            let mut v = vec![0i64; n];
            v[i] = 1;
            v
        };
        let mut normals = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut minus = unit(i);
                minus[j] = -1;
                normals.push(minus);
                if kind != ReflectionType::A {
                    let mut plus = unit(i);
                    plus[j] = 1;
                    normals.push(plus);
                }
            }
        }
        if kind == ReflectionType::B {
            for k in 0..n {
                normals.push(unit(k));
            }
        }
        Self::from_normals(n, &normals)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn rank(&self) -> usize {
        let mut e = IntegerEchelon::new();
        for h in &self.hyperplanes {
            e.insert(h.normal());
        }
        e.rank()
    }

    /// Parses the text format: a `dim n` line, then one normal per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut hs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = i + 1;
            match dim {
                None => {
                    let mut parts = line.split_whitespace();
                    if parts.next() != Some("dim") {
                        return Err(Error::Parse { line: lineno, msg: "expected `dim n`".into() });
                    }
                    let n = parts
                        .next()
                        .and_then(|s| s.parse::<usize>().ok())
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| Error::Parse { line: lineno, msg: "bad dimension".into() })?;
                    if parts.next().is_some() {
                        return Err(Error::Parse { line: lineno, msg: "trailing tokens".into() });
                    }
                    dim = Some(n);
                }
                Some(n) => {
                    let v = line
                        .split_whitespace()
                        .map(|s| s.parse::<BigInt>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
                    if v.len() != n {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("expected {n} entries, found {}", v.len()),
                        });
                    }
                    let h = Hyperplane::new(v).map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
                    hs.push(h);
                }
            }
        }
        let dim = dim.ok_or(Error::Parse { line: 0, msg: "missing `dim n` line".into() })?;
        Self::new(dim, hs)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("dim {}\n", self.dim);
        for h in &self.hyperplanes {
            let row: Vec<String> = h.normal.iter().map(|x| x.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// A random arrangement with integer normals in `[-bound, bound]`.
    pub fn random_integer<R: Rng + ?Sized>(rng: &mut R, dim: usize, m: usize, bound: i64) -> Result<Self> {
        let mut hs: Vec<Hyperplane> = Vec::new();
        let mut attempts = 0;
        while hs.len() < m {
            attempts += 1;
            if attempts > 10_000 {
                return invalid("could not draw enough distinct hyperplanes");
            }
            let v: Vec<i64> = (0..dim).map(|_| rng.random_range(-bound..=bound)).collect();
            if let Ok(h) = Hyperplane::from_i64(&v) {
                if !hs.contains(&h) {
                    hs.push(h);
                }
            }
        }
        Self::new(dim, hs)
    }
}

/// `χ(t) = Σ_k (-1)^(n-k) a_k t^k`, stored by the unsigned coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicPolynomial {
    dim: usize,
    a: Vec<BigUint>,
}

impl CharacteristicPolynomial {
    pub fn new(a: Vec<BigUint>) -> Result<Self> {
        if a.is_empty() {
            return invalid("characteristic polynomial needs at least one coefficient");
        }
        Ok(Self { dim: a.len() - 1, a })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.a
    }

    /// `a_k`, zero outside `0..=n`.
    pub fn a(&self, k: i64) -> BigUint {
        if k < 0 {
            return BigUint::zero();
        }
        self.a.get(k as usize).cloned().unwrap_or_default()
    }

    pub fn signed_coefficients(&self) -> Vec<BigInt> {
        self.a
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let v = BigInt::from(a.clone());
                if (self.dim - k).is_multiple_of(2) {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.signed_coefficients().iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// Checks `a_n = 1`, `a_{n-1} = #A` (when `m` is given), positivity up to
    /// the rank, unimodality and equal even/odd sums.
    pub fn check_invariants(&self, m: Option<usize>) -> Result<()> {
        let n = self.dim;
        if !self.a[n].is_one() {
            return invalid("leading coefficient is not 1");
        }
        if let (Some(m), true) = (m, n >= 1) {
            if self.a[n - 1] != BigUint::from(m) {
                return invalid(format!("a_(n-1) = {} but #A = {m}", self.a[n - 1]));
            }
        }
        // a_k > 0 exactly for n - rank <= k <= n
        let first = self.a.iter().position(|x| !x.is_zero()).unwrap();
        if self.a[first..].iter().any(|x| x.is_zero()) {
            return invalid("coefficients are not positive up to the rank");
        }
        if !combinatorics::is_unimodal(&self.a) {
            return invalid("coefficients are not unimodal");
        }
        let even: BigUint = self.a.iter().step_by(2).sum();
        let odd: BigUint = self.a.iter().skip(1).step_by(2).sum();
        if n >= 1 && even != odd {
            return invalid("even and odd coefficient sums differ");
        }
        Ok(())
    }
}

impl fmt::Display for CharacteristicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.signed_coefficients().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == Sign::Minus;
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = !mag.is_one() || k == 0;
            match (k, show_mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "{mag}t")?,
                (1, false) => write!(f, "t")?,
                (_, true) => write!(f, "{mag}t^{k}")?,
                (_, false) => write!(f, "t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Whitney's formula `χ(t) = Σ_{B ⊆ A} (-1)^{#B} t^{n - rank B}`.
///
/// The subset walk stops descending once a subset reaches the full rank of
/// the arrangement: its remaining supersets cancel in pairs.
pub fn whitney_characteristic_polynomial(arr: &Arrangement) -> Result<CharacteristicPolynomial> {
    let m = arr.len();
    if m > WHITNEY_CAP {
        return Err(Error::CapExceeded { what: "Whitney subset sum", got: m, cap: WHITNEY_CAP });
    }
    let n = arr.dim();
    let full_rank = arr.rank();
    let mut signed = vec![BigInt::zero(); n + 1];
    let normals: Vec<&[BigInt]> = arr.hyperplanes().iter().map(|h| h.normal()).collect();
    whitney_walk(&normals, 0, &IntegerEchelon::new(), 0, full_rank, n, &mut signed);

    let mut a = Vec::with_capacity(n + 1);
    for (k, c) in signed.iter().enumerate() {
        let expected_neg = (n - k) % 2 == 1;
        if !c.is_zero() && (c.is_negative() != expected_neg) {
            return invalid("Whitney sum produced a coefficient of the wrong sign");
        }
        a.push(c.abs().to_biguint().unwrap());
    }
    CharacteristicPolynomial::new(a)
}

fn whitney_walk(
    normals: &[&[BigInt]],
    start: usize,
    echelon: &IntegerEchelon,
    card: usize,
    full_rank: usize,
    n: usize,
    out: &mut [BigInt],
) {
    let sign = if card.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    if echelon.rank() == full_rank {
        if start == normals.len() {
            out[n - full_rank] += sign;
        }
        return;
    }
    out[n - echelon.rank()] += sign;
    for j in start..normals.len() {
        let mut next = echelon.clone();
        next.insert(normals[j]);
        whitney_walk(normals, j + 1, &next, card + 1, full_rank, n, out);
    }
}

/// Closed-form characteristic polynomial of `A(A_{n-1})`, `A(B_n)` or `A(D_n)` in `R^n`.
pub fn reflection_characteristic_polynomial(kind: ReflectionType, n: usize) -> Result<CharacteristicPolynomial> {
    kind.check(n)?;
    let row = expand_linear_factors(&kind.family().roots(n));
    CharacteristicPolynomial::new(row.into_coeffs())
}

/// Number of regions, `(-1)^n χ(-1) = Σ a_k`.
pub fn zaslavsky_region_count(chi: &CharacteristicPolynomial) -> BigUint {
    chi.coefficients().iter().sum()
}

/// Characteristic polynomial of the arrangement induced on a generic subspace of codimension `d`.
pub fn restrict_characteristic_polynomial(chi: &CharacteristicPolynomial, d: usize) -> Result<CharacteristicPolynomial> {
    let n = chi.dim();
    if d == 0 || d >= n {
        return invalid(format!("restriction codimension must be in 1..={}, got {d}", n.saturating_sub(1)));
    }
    let signed = chi.signed_coefficients();
    let constant: BigInt = signed[..=d].iter().sum();
    let expected_neg = (n - d) % 2 == 1;
    if !constant.is_zero() && constant.is_negative() != expected_neg {
        return invalid("restricted constant term has the wrong sign");
    }
    let mut a = vec![constant.abs().to_biguint().unwrap()];
    a.extend(chi.coefficients()[d + 1..].iter().cloned());
    CharacteristicPolynomial::new(a)
}

/// Regions met by a generic subspace of codimension `d`: `2 (a_{d+1} + a_{d+3} + …)`.
pub fn intersected_region_count(chi: &CharacteristicPolynomial, d: usize) -> Result<BigUint> {
    let n = chi.dim();
    if n == 0 || d > n - 1 {
        return invalid(format!("codimension {d} out of range for dimension {n}"));
    }
    let cv = CoefficientVector::from_coeffs(chi.coefficients().to_vec());
    Ok(cv.alternate_sum_up(d as i64 + 1) * 2u32)
}

/// Schläfli's count of regions cut by `m` generic central hyperplanes in `R^n`.
pub fn schlafli_count(m: usize, n: usize) -> Result<BigUint> {
    if n == 0 || m < n {
        return invalid(format!("schlafli_count needs m >= n >= 1, got m = {m}, n = {n}"));
    }
    let mut s = BigUint::zero();
    for k in 0..n {
        s += binomial(m - 1, k);
    }
    Ok(s * 2u32)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    r
}

/// A linear subspace of `R^n` given by a basis of rational vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<BigRational>>,
}

impl Subspace {
    pub fn new(ambient_dim: usize, basis: Vec<Vec<BigRational>>) -> Result<Self> {
        if basis.is_empty() {
            return invalid("subspace basis must be nonempty");
        }
        if basis.iter().any(|b| b.len() != ambient_dim) {
            return invalid("basis vectors must live in the ambient dimension");
        }
        let ints: Vec<Vec<BigInt>> = basis.iter().map(|b| primitive_integer_vector(b).unwrap_or_else(|| vec![BigInt::zero(); ambient_dim])).collect();
        let rank = crate::linalg::rank_integer(&ints);
        if rank != basis.len() {
            return Err(Error::DegenerateBasis { rank, expected: basis.len() });
        }
        Ok(Self { ambient_dim, basis })
    }

    pub fn from_i64(ambient_dim: usize, basis: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            ambient_dim,
            basis.iter().map(|b| b.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect(),
        )
    }

    /// Span of `dim` vectors with independent standard Gaussian entries,
    /// quantised to the grid `2^-16 Z` so the exact oracles stay cheap.
    pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, ambient_dim: usize, dim: usize) -> Result<Self> {
        loop {
            let basis: Vec<Vec<BigRational>> = (0..dim)
                .map(|_| {
                    (0..ambient_dim)
                        .map(|_| {
                            let g: f64 = rng.sample(StandardNormal);
                            BigRational::from_integer(BigInt::from((g * 65536.0).round() as i64))
                        })
                        .collect()
                })
                .collect();
            match Self::new(ambient_dim, basis) {
                Ok(s) => return Ok(s),
                Err(Error::DegenerateBasis { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    /// Coordinates of the functional `x ↦ <h, x>` restricted to the subspace.
    pub fn restrict_normal(&self, h: &Hyperplane) -> Vec<BigRational> {
        self.basis.iter().map(|b| h.dot_rational(b)).collect()
    }

    fn restricted_integer_normals(&self, arr: &Arrangement) -> Vec<Option<Vec<BigInt>>> {
        arr.hyperplanes().iter().map(|h| primitive_integer_vector(&self.restrict_normal(h))).collect()
    }

    /// Exact check that every flat of `arr` meets the subspace in the expected dimension.
    pub fn is_in_general_position(&self, arr: &Arrangement) -> bool {
        let k = self.dim();
        let full: Vec<&[BigInt]> = arr.hyperplanes().iter().map(|h| h.normal()).collect();
        let restricted: Vec<Vec<BigInt>> = self
            .restricted_integer_normals(arr)
            .into_iter()
            .map(|v| v.unwrap_or_else(|| vec![BigInt::zero(); k]))
            .collect();
        let restricted: Vec<&[BigInt]> = restricted.iter().map(|v| v.as_slice()).collect();
        general_position_walk(&full, &restricted, 0, &IntegerEchelon::new(), &IntegerEchelon::new(), arr.rank(), k)
    }

    /// The arrangement `{H ∩ L}` expressed in the subspace's coordinates.
    /// Hyperplanes containing the subspace are dropped.
    pub fn induced_arrangement(&self, arr: &Arrangement) -> Result<Arrangement> {
        let hs = self
            .restricted_integer_normals(arr)
            .into_iter()
            .flatten()
            .map(Hyperplane::new)
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(self.dim(), hs)
    }

    /// Dimension of the intersection of the subspace with every hyperplane of `arr`.
    fn lineality_dim(&self, arr: &Arrangement) -> usize {
        let rows: Vec<Vec<BigInt>> = self.restricted_integer_normals(arr).into_iter().flatten().collect();
        self.dim() - crate::linalg::rank_integer(&rows)
    }
}

fn general_position_walk(
    full: &[&[BigInt]],
    restricted: &[&[BigInt]],
    start: usize,
    ef: &IntegerEchelon,
    er: &IntegerEchelon,
    full_rank: usize,
    k: usize,
) -> bool {
    if er.rank() != ef.rank().min(k) {
        return false;
    }
    if ef.rank() == full_rank {
        // every superset has the same pair of ranks
        return true;
    }
    for j in start..full.len() {
        let mut nf = ef.clone();
        let mut nr = er.clone();
        nf.insert(full[j]);
        nr.insert(restricted[j]);
        if !general_position_walk(full, restricted, j + 1, &nf, &nr, full_rank, k) {
            return false;
        }
    }
    true
}

/// Sign vector of an open region: `true` for the positive side of each hyperplane.
pub type SignVector = Vec<bool>;

/// All open regions of `arr`, found by growing sign prefixes and pruning those
/// whose open cone is empty (exact LP).
pub fn enumerate_regions(arr: &Arrangement) -> Result<Vec<SignVector>> {
    if arr.len() > ENUMERATION_CAP {
        return Err(Error::CapExceeded { what: "region enumeration", got: arr.len(), cap: ENUMERATION_CAP });
    }
    let normals: Vec<Vec<BigRational>> = arr
        .hyperplanes()
        .iter()
        .map(|h| h.normal().iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    Ok(open_sign_vectors(&normals, arr.dim()))
}

/// Whether a region is met in its interior (`Open`) or its closure meets the
/// subspace in a nonzero vector (`Closed`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeetMode {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceCount {
    pub count: usize,
    pub general_position: bool,
}

/// Counts regions of `arr` meeting the subspace `l` in the given mode.
pub fn count_regions_meeting_subspace(arr: &Arrangement, l: &Subspace, mode: MeetMode) -> Result<SubspaceCount> {
    if arr.len() > ENUMERATION_CAP {
        return Err(Error::CapExceeded { what: "subspace region count", got: arr.len(), cap: ENUMERATION_CAP });
    }
    if l.ambient_dim() != arr.dim() {
        return invalid("subspace and arrangement live in different dimensions");
    }
    if l.codim() == 0 || l.codim() > arr.dim() - 1 {
        return invalid(format!("subspace codimension {} outside 1..={}", l.codim(), arr.dim() - 1));
    }
    let restricted: Vec<Vec<BigRational>> = arr.hyperplanes().iter().map(|h| l.restrict_normal(h)).collect();
    let general_position = l.is_in_general_position(arr);
    let count = match mode {
        MeetMode::Open => open_sign_vectors(&restricted, l.dim()).len(),
        MeetMode::Closed => {
            let regions = enumerate_regions(arr)?;
            if l.lineality_dim(arr) > 0 {
                regions.len()
            } else {
                regions.iter().filter(|s| closed_cone_meets(&restricted, s, l.dim())).count()
            }
        }
    };
    Ok(SubspaceCount { count, general_position })
}

#[cfg(test)]
fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Searches for `x` with `σ_i <g_i, x> > 0` for all constraints; returns a witness.
#[cfg(test)]
fn open_witness(constraints: &[(Vec<BigRational>, bool)], dim: usize) -> Option<Vec<BigRational>> {
    // maximize t  s.t.  σ_i <g_i, x> - t >= 0,  t <= 1,  x free
    let mut lp = LinearProgram::<BigRational>::new(dim + 1);
    let mut c = vec![BigRational::zero(); dim + 1];
    c[dim] = BigRational::one();
    lp = lp.maximize(c);
    for v in 0..dim {
        lp.set_free(v);
    }
    for (g, pos) in constraints {
        let mut row: Vec<BigRational> = if *pos { g.clone() } else { g.iter().map(|x| -x).collect() };
        row.push(-BigRational::one());
        lp.add_row(row, Relation::Ge, BigRational::zero());
    }
    let mut cap = vec![BigRational::zero(); dim + 1];
    cap[dim] = BigRational::one();
    lp.add_row(cap, Relation::Le, BigRational::one());
    match lp.solve() {
        LpOutcome::Optimal { value, mut x } if value.is_positive() => {
            x.pop();
            Some(x)
        }
        _ => None,
    }
}

/// Sign vectors of all open regions of the central arrangement with the given normals.
///
/// Signs depend only on the component of `x` in the span of the normals, so
/// the normals are rewritten in coordinates of that span. There, once a basis
/// of normals has been placed, every region is a pointed cone generated by
/// lines cut out by `r - 1` normals. A further hyperplane splits a region iff
/// those generators take both signs on it, which needs only integer sign
/// evaluations.
fn open_sign_vectors(normals: &[Vec<BigRational>], _dim: usize) -> Vec<SignVector> {
    let m = normals.len();
    let Some(ints) = normals.iter().map(|g| primitive_integer_vector(g)).collect::<Option<Vec<Vec<BigInt>>>>() else {
        // a vanishing functional has no open side
        return Vec::new();
    };
    let mut echelon = IntegerEchelon::new();
    let basis: Vec<usize> = (0..m).filter(|&i| echelon.insert(&ints[i])).collect();
    let r = basis.len();
    let coords: Vec<Vec<BigInt>> =
        ints.iter().map(|g| basis.iter().map(|&b| dot_int(&ints[b], g)).collect()).collect();
    let order: Vec<usize> = basis.iter().copied().chain((0..m).filter(|i| !basis.contains(i))).collect();

    let rays = candidate_rays(&coords, r);
    let signs: Vec<Vec<Sign>> = coords.iter().map(|c| rays.iter().map(|ray| dot_int(c, ray).sign()).collect()).collect();
    let words = rays.len().div_ceil(64).max(1);
    let mut full = vec![0u64; words];
    for i in 0..rays.len() {
        full[i / 64] |= 1 << (i % 64);
    }

    let mut regions: Vec<(Vec<bool>, Vec<u64>)> = vec![(Vec::new(), full)];
    for (step, &h) in order.iter().enumerate() {
        let mut next = Vec::with_capacity(regions.len() * 2);
        for (sv, set) in regions {
            let mut keep_pos = vec![0u64; words];
            let mut keep_neg = vec![0u64; words];
            let (mut pos, mut neg) = (false, false);
            for (i, s) in signs[h].iter().enumerate() {
                if set[i / 64] >> (i % 64) & 1 == 0 {
                    continue;
                }
                let bit = 1u64 << (i % 64);
                match s {
                    Sign::Plus => {
                        pos = true;
                        keep_pos[i / 64] |= bit;
                    }
                    Sign::Minus => {
                        neg = true;
                        keep_neg[i / 64] |= bit;
                    }
                    Sign::NoSign => {
                        keep_pos[i / 64] |= bit;
                        keep_neg[i / 64] |= bit;
                    }
                }
            }
            // the first r normals are independent, so all their sign patterns occur
            let basis_step = step < r;
            if pos || basis_step {
                let mut v = sv.clone();
                v.push(true);
                next.push((v, keep_pos));
            }
            if neg || basis_step {
                let mut v = sv;
                v.push(false);
                next.push((v, keep_neg));
            }
        }
        regions = next;
    }
    regions
        .into_iter()
        .map(|(sv, _)| {
            let mut out = vec![false; m];
            for (k, &h) in order.iter().enumerate() {
                out[h] = sv[k];
            }
            out
        })
        .collect()
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Both directions of every line cut out by `r - 1` independent rows, in `R^r`.
fn candidate_rays(coords: &[Vec<BigInt>], r: usize) -> Vec<Vec<BigInt>> {
    if r == 0 {
        return Vec::new();
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut push = |v: Vec<BigInt>| {
        let neg: Vec<BigInt> = v.iter().map(|x| -x).collect();
        for w in [v, neg] {
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
    };
    if r == 1 {
        push(vec![BigInt::one()]);
        return out;
    }
    let mut subset = Vec::with_capacity(r - 1);
    line_subsets(coords, r, 0, &mut subset, &IntegerEchelon::new(), &mut push);
    out
}

fn line_subsets(
    coords: &[Vec<BigInt>],
    r: usize,
    start: usize,
    subset: &mut Vec<usize>,
    echelon: &IntegerEchelon,
    push: &mut impl FnMut(Vec<BigInt>),
) {
    if subset.len() == r - 1 {
        let rows: Vec<Vec<BigRational>> = subset.iter().map(|&i| crate::linalg::to_rational(&coords[i])).collect();
        if let Some(v) = crate::linalg::nullspace(&rows, r).first().and_then(|v| primitive_integer_vector(v)) {
            push(v);
        }
        return;
    }
    for j in start..coords.len() {
        let mut e = echelon.clone();
        if !e.insert(&coords[j]) {
            continue;
        }
        subset.push(j);
        line_subsets(coords, r, j + 1, subset, &e, push);
        subset.pop();
    }
}

/// Region enumeration by exact feasibility LPs, one per new sign prefix.
#[cfg(test)]
fn open_sign_vectors_lp(normals: &[Vec<BigRational>], dim: usize) -> Vec<SignVector> {
    let mut out = Vec::new();
    let witness = vec![BigRational::zero(); dim];
    let mut prefix: Vec<(Vec<BigRational>, bool)> = Vec::with_capacity(normals.len());
    grow_regions(normals, &mut prefix, &witness, &mut out);
    out
}

#[cfg(test)]
fn grow_regions(
    normals: &[Vec<BigRational>],
    prefix: &mut Vec<(Vec<BigRational>, bool)>,
    witness: &[BigRational],
    out: &mut Vec<SignVector>,
) {
    let j = prefix.len();
    if j == normals.len() {
        out.push(prefix.iter().map(|(_, s)| *s).collect());
        return;
    }
    let g = &normals[j];
    let s = dot(g, witness);
    for side in [true, false] {
        prefix.push((g.clone(), side));
        let known = if side { s.is_positive() } else { s.is_negative() };
        if known {
            grow_regions(normals, prefix, witness, out);
        } else if let Some(w) = open_witness(prefix, witness.len()) {
            grow_regions(normals, prefix, &w, out);
        }
        prefix.pop();
    }
}

/// Whether `{x : σ_i <g_i, x> >= 0}` contains a vector with positive slack sum,
/// i.e. a nonzero vector off the common lineality space.
fn closed_cone_meets(normals: &[Vec<BigRational>], signs: &[bool], dim: usize) -> bool {
    // maximize Σ σ_i <g_i, c>  s.t.  σ_i <g_i, c> >= 0,  -1 <= c_j <= 1
    let oriented: Vec<Vec<BigRational>> = normals
        .iter()
        .zip(signs)
        .map(|(g, &s)| if s { g.clone() } else { g.iter().map(|x| -x).collect() })
        .collect();
    let mut obj = vec![BigRational::zero(); dim];
    for g in &oriented {
        for (o, x) in obj.iter_mut().zip(g) {
            *o += x;
        }
    }
    let mut lp = LinearProgram::<BigRational>::new(dim).maximize(obj);
    for v in 0..dim {
        lp.set_free(v);
        let mut e = vec![BigRational::zero(); dim];
        e[v] = BigRational::one();
        lp.add_row(e.clone(), Relation::Le, BigRational::one());
        lp.add_row(e, Relation::Ge, -BigRational::one());
    }
    for g in oriented {
        lp.add_row(g, Relation::Ge, BigRational::zero());
    }
    matches!(lp.solve(), LpOutcome::Optimal { value, .. } if value.is_positive())
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a_vec(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn reflection_sizes() {
        assert_eq!(Arrangement::reflection(ReflectionType::B, 2).unwrap().len(), 4);
        assert_eq!(Arrangement::reflection(ReflectionType::A, 3).unwrap().len(), 3);
        assert_eq!(Arrangement::reflection(ReflectionType::D, 3).unwrap().len(), 6);
        assert_eq!(Arrangement::reflection(ReflectionType::B, 4).unwrap().len(), 16);
        assert!(Arrangement::reflection(ReflectionType::A, 1).is_err());
    }

    #[test]
    fn whitney_examples() {
        let a2 = Arrangement::reflection(ReflectionType::A, 3).unwrap();
        assert_eq!(whitney_characteristic_polynomial(&a2).unwrap().coefficients(), a_vec(&[0, 2, 3, 1]).as_slice());
        let b2 = Arrangement::reflection(ReflectionType::B, 2).unwrap();
        let chi = whitney_characteristic_polynomial(&b2).unwrap();
        assert_eq!(chi.to_string(), "t^2 - 4t + 3");
        let generic = Arrangement::from_normals(2, &[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]]).unwrap();
        assert_eq!(whitney_characteristic_polynomial(&generic).unwrap().coefficients(), a_vec(&[3, 4, 1]).as_slice());
    }

    #[test]
    fn whitney_cap() {
        let hs: Vec<Vec<i64>> = (1..=21).map(|i| vec![1, i]).collect();
        let arr = Arrangement::from_normals(2, &hs).unwrap();
        assert!(matches!(whitney_characteristic_polynomial(&arr), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn closed_forms() {
        let b3 = reflection_characteristic_polynomial(ReflectionType::B, 3).unwrap();
        assert_eq!(b3.coefficients(), a_vec(&[15, 23, 9, 1]).as_slice());
        let a3 = reflection_characteristic_polynomial(ReflectionType::A, 3).unwrap();
        assert_eq!(a3.coefficients(), a_vec(&[0, 2, 3, 1]).as_slice());
        let d3 = reflection_characteristic_polynomial(ReflectionType::D, 3).unwrap();
        assert_eq!(d3.coefficients(), a_vec(&[6, 11, 6, 1]).as_slice());
    }

    #[test]
    fn closed_forms_match_whitney() {
        for kind in [ReflectionType::A, ReflectionType::B, ReflectionType::D] {
            for n in kind.min_n()..=4 {
                let arr = Arrangement::reflection(kind, n).unwrap();
                let w = whitney_characteristic_polynomial(&arr).unwrap();
                let c = reflection_characteristic_polynomial(kind, n).unwrap();
                assert_eq!(w, c, "{kind:?} {n}");
                c.check_invariants(Some(arr.len())).unwrap();
            }
        }
    }

    #[test]
    fn zaslavsky_examples() {
        let b2 = reflection_characteristic_polynomial(ReflectionType::B, 2).unwrap();
        assert_eq!(zaslavsky_region_count(&b2), BigUint::from(8u32));
        let a2 = reflection_characteristic_polynomial(ReflectionType::A, 3).unwrap();
        assert_eq!(zaslavsky_region_count(&a2), BigUint::from(6u32));
        for n in 1..=8usize {
            let b = reflection_characteristic_polynomial(ReflectionType::B, n).unwrap();
            assert_eq!(zaslavsky_region_count(&b), ReflectionType::B.group_order(n));
            assert_eq!(-b.eval(&BigInt::from(-1)) * if n % 2 == 0 { -1 } else { 1 }, BigInt::from(ReflectionType::B.group_order(n)));
        }
    }

    #[test]
    fn restriction_examples() {
        let b3 = reflection_characteristic_polynomial(ReflectionType::B, 3).unwrap();
        assert_eq!(restrict_characteristic_polynomial(&b3, 1).unwrap().to_string(), "t^2 - 9t + 8");
        assert_eq!(restrict_characteristic_polynomial(&b3, 2).unwrap().to_string(), "t - 1");
        let a2 = reflection_characteristic_polynomial(ReflectionType::A, 3).unwrap();
        assert_eq!(restrict_characteristic_polynomial(&a2, 1).unwrap().to_string(), "t^2 - 3t + 2");
        assert!(restrict_characteristic_polynomial(&a2, 3).is_err());
        assert!(restrict_characteristic_polynomial(&a2, 0).is_err());
    }

    #[test]
    fn intersected_examples() {
        let b2 = reflection_characteristic_polynomial(ReflectionType::B, 2).unwrap();
        assert_eq!(intersected_region_count(&b2, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(intersected_region_count(&b2, 0).unwrap(), BigUint::from(8u32));
        let b3 = reflection_characteristic_polynomial(ReflectionType::B, 3).unwrap();
        assert_eq!(intersected_region_count(&b3, 1).unwrap(), BigUint::from(18u32));
        let a3 = reflection_characteristic_polynomial(ReflectionType::A, 4).unwrap();
        assert_eq!(intersected_region_count(&a3, 2).unwrap(), BigUint::from(12u32));
        assert!(intersected_region_count(&b2, 2).is_err());
    }

    #[test]
    fn schlafli_examples() {
        assert_eq!(schlafli_count(4, 2).unwrap(), BigUint::from(8u32));
        assert_eq!(schlafli_count(3, 3).unwrap(), BigUint::from(8u32));
        assert_eq!(schlafli_count(4, 3).unwrap(), BigUint::from(14u32));
        assert!(schlafli_count(2, 3).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let b2 = Arrangement::reflection(ReflectionType::B, 2).unwrap();
        assert_eq!(enumerate_regions(&b2).unwrap().len(), 8);
        let one = Arrangement::from_normals(2, &[vec![1, 2]]).unwrap();
        assert_eq!(enumerate_regions(&one).unwrap().len(), 2);
        let a3 = Arrangement::reflection(ReflectionType::A, 4).unwrap();
        assert_eq!(enumerate_regions(&a3).unwrap().len(), 24);
    }

    #[test]
    fn subspace_counts_open_and_closed() {
        let b2 = Arrangement::reflection(ReflectionType::B, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = Subspace::random_gaussian(&mut rng, 2, 1).unwrap();
        let open = count_regions_meeting_subspace(&b2, &l, MeetMode::Open).unwrap();
        assert!(open.general_position);
        assert_eq!(open.count, 2);
        assert_eq!(count_regions_meeting_subspace(&b2, &l, MeetMode::Closed).unwrap().count, 2);

        let diag = Subspace::from_i64(2, &[vec![1, 1]]).unwrap();
        let closed = count_regions_meeting_subspace(&b2, &diag, MeetMode::Closed).unwrap();
        assert!(!closed.general_position);
        assert_eq!(closed.count, 4);
        assert_eq!(count_regions_meeting_subspace(&b2, &diag, MeetMode::Open).unwrap().count, 0);
    }

    #[test]
    fn non_essential_closed_mode() {
        // A_2 in R^3 has the all-ones line as lineality space
        let a = Arrangement::reflection(ReflectionType::A, 3).unwrap();
        let l = Subspace::from_i64(3, &[vec![1, 1, 1], vec![1, 2, 5]]).unwrap();
        assert_eq!(count_regions_meeting_subspace(&a, &l, MeetMode::Closed).unwrap().count, 6);
    }

    #[test]
    fn ray_enumeration_matches_lp_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..60 {
            let dim = rng.random_range(1..=4usize);
            let m = rng.random_range(1..=7usize).min(if dim == 1 { 1 } else { 7 });
            let arr = Arrangement::random_integer(&mut rng, dim, m, 3).unwrap();
            let normals: Vec<Vec<BigRational>> =
                arr.hyperplanes().iter().map(|h| crate::linalg::to_rational(h.normal())).collect();
            let mut fast = open_sign_vectors(&normals, dim);
            let mut slow = open_sign_vectors_lp(&normals, dim);
            fast.sort();
            slow.sort();
            assert_eq!(fast, slow, "{arr}");
        }
        // a functional that vanishes identically has no open side
        let zero = vec![vec![BigRational::zero(), BigRational::zero()]];
        assert!(open_sign_vectors(&zero, 2).is_empty());
        assert_eq!(open_sign_vectors(&[], 2), vec![Vec::<bool>::new()]);
    }

    #[test]
    fn parse_round_trip() {
        let text = "# B2\ndim 2\n1 0\n0 1 # axis\n1 -1\n\n1 1\n";
        let arr = Arrangement::parse(text).unwrap();
        let mut got = arr.hyperplanes().to_vec();
        let mut want = Arrangement::reflection(ReflectionType::B, 2).unwrap().hyperplanes().to_vec();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(arr.len(), 4);
        assert_eq!(Arrangement::parse(&arr.to_text()).unwrap(), arr);
        assert!(matches!(Arrangement::parse("dim 2\n1 2 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Arrangement::parse("1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(Arrangement::parse("dim 2\n0 0\n").is_err());
        // duplicates collapse
        assert_eq!(Arrangement::parse("dim 2\n1 1\n-2 -2\n").unwrap().len(), 1);
    }

    #[test]
    fn generic_arrangement_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (m, n) in [(4usize, 2usize), (5, 3), (6, 3)] {
            let normals: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.random_range(-50..=50)).collect()).collect();
            let arr = Arrangement::from_normals(n, &normals).unwrap();
            let full = Subspace::new(
                n,
                (0..n)
                    .map(|i| (0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))).collect())
                    .collect(),
            )
            .unwrap();
            // R^n itself is in general position iff the normals are
            let _ = full;
            let chi = whitney_characteristic_polynomial(&arr).unwrap();
            for k in 1..=n {
                assert_eq!(chi.a(k as i64), binomial(m, n - k));
            }
            assert_eq!(chi.a(0), binomial(m - 1, n - 1));
            assert_eq!(zaslavsky_region_count(&chi), schlafli_count(m, n).unwrap());
        }
    }
}
