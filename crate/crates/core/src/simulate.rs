//! Monte Carlo absorption estimates and the per-sample kernel-chamber count.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StudentT};
use serde::{Deserialize, Serialize};

use crate::absorption::{WalkFamily, WalkKind};
use crate::arrangement::{intersected_region_count, reflection_characteristic_polynomial, CharacteristicPolynomial, ReflectionType};
use crate::error::{invalid, Error, Result};
use crate::hull::{origin_in_hull, origin_in_hull_lattice};
use crate::linalg::{float_nullspace, nullspace};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::sampling::{gaussian_vector, run_streams, stream_rng, uniform_sphere, MCEstimate, DEFAULT_STREAMS};
use crate::scalar::Scalar;

/// Degrees of freedom of the heavy-tailed coordinates (finite mean, infinite variance).
pub const HEAVY_TAIL_DOF: f64 = 1.5;
/// Largest `n` accepted by the chamber count (`2^n n!` chambers for B).
pub const CHAMBER_COUNT_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum IncrementModel {
    Gaussian { d: usize },
    UniformSphere { d: usize },
    /// Independent Student-t coordinates.
    HeavyTail { d: usize },
    /// Uniform on `{±e_1, …, ±e_d}`; violates general position.
    LatticeSimple { d: usize },
    /// A fixed `d × n` matrix whose columns are randomly permuted and sign-flipped per draw.
    Matrix(DMatrix<f64>),
}

impl IncrementModel {
    pub fn from_name(name: &str, d: usize) -> Result<Self> {
        if d == 0 {
            return invalid("dimension must be positive");
        }
        Ok(match name {
            "gaussian" => IncrementModel::Gaussian { d },
            "uniform-sphere" => IncrementModel::UniformSphere { d },
            "heavy-tail" => IncrementModel::HeavyTail { d },
            "lattice-simple" => IncrementModel::LatticeSimple { d },
            _ => return invalid(format!("unknown model `{name}` (matrix models are built from a file)")),
        })
    }

    pub fn d(&self) -> usize {
        match self {
            IncrementModel::Gaussian { d }
            | IncrementModel::UniformSphere { d }
            | IncrementModel::HeavyTail { d }
            | IncrementModel::LatticeSimple { d } => *d,
            IncrementModel::Matrix(m) => m.nrows(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            IncrementModel::Gaussian { .. } => "gaussian",
            IncrementModel::UniformSphere { .. } => "uniform-sphere",
            IncrementModel::HeavyTail { .. } => "heavy-tail",
            IncrementModel::LatticeSimple { .. } => "lattice-simple",
            IncrementModel::Matrix(_) => "matrix",
        }
    }

    pub fn is_lattice(&self) -> bool {
        matches!(self, IncrementModel::LatticeSimple { .. })
    }

    /// Parses a whitespace-separated matrix, one row per line; `#` starts a comment.
    pub fn parse_matrix(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse { line: i + 1, msg: format!("`{t}`: {e}") }))
                .collect::<Result<Vec<f64>>>()?;
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse { line: i + 1, msg: "non-finite entry".into() });
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::Parse { line: i + 1, msg: "ragged row".into() });
                }
            }
            rows.push(row);
        }
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyInput);
        }
        let (d, n) = (rows.len(), rows[0].len());
        Ok(IncrementModel::Matrix(DMatrix::from_fn(d, n, |i, j| rows[i][j])))
    }
}

impl fmt::Display for IncrementModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Draws `n` increment columns.
pub fn sample_increments_with<R: Rng + ?Sized>(model: &IncrementModel, n: usize, rng: &mut R) -> Result<DMatrix<f64>> {
    if n == 0 {
        return invalid("need at least one increment");
    }
    let d = model.d();
    let mut m = DMatrix::zeros(d, n);
    match model {
        IncrementModel::Gaussian { .. } => {
            for j in 0..n {
                m.set_column(j, &gaussian_vector(rng, d));
            }
        }
        IncrementModel::UniformSphere { .. } => {
            for j in 0..n {
                m.set_column(j, &uniform_sphere(rng, d));
            }
        }
        IncrementModel::HeavyTail { .. } => {
            let t = StudentT::new(HEAVY_TAIL_DOF).expect("valid degrees of freedom");
            for v in m.iter_mut() {
                *v = t.sample(rng);
            }
        }
        IncrementModel::LatticeSimple { .. } => {
            for j in 0..n {
                let axis = rng.random_range(0..d);
                m[(axis, j)] = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            }
        }
        IncrementModel::Matrix(base) => {
            if base.ncols() != n {
                return invalid(format!("matrix model has {} columns, {n} requested", base.ncols()));
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            for (j, &p) in perm.iter().enumerate() {
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                m.set_column(j, &(base.column(p) * sign));
            }
        }
    }
    Ok(m)
}

/// Deterministic draw from stream 0 of `seed`.
pub fn sample_increments(model: &IncrementModel, n: usize, seed: u64) -> Result<DMatrix<f64>> {
    sample_increments_with(model, n, &mut stream_rng(seed, 0))
}

/// Subtracts the column mean so the increments sum to zero. The result stays
/// exchangeable for any exchangeable input; lattice steps cannot be centered
/// without leaving the lattice.
pub fn make_bridge(model: &IncrementModel, increments: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if model.is_lattice() {
        return Err(Error::NotBridgeable("lattice steps cannot be centered"));
    }
    Ok(center_columns(increments))
}

pub fn center_columns(increments: &DMatrix<f64>) -> DMatrix<f64> {
    let n = increments.ncols() as f64;
    let mean = increments.column_sum() / n;
    let mut out = increments.clone();
    for mut c in out.column_iter_mut() {
        c -= &mean;
    }
    out
}

/// Partial sums `S_1..S_n` of the columns.
pub fn partial_sums(increments: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let mut s = DVector::zeros(increments.nrows());
    increments
        .column_iter()
        .map(|c| {
            s += c;
            s.clone()
        })
        .collect()
}

/// Points whose hull is tested for the family, given one increment matrix per walk.
pub fn hull_points(family: &WalkFamily, walks: &[DMatrix<f64>]) -> Vec<DVector<f64>> {
    match family.kind {
        WalkKind::BridgeA => {
            let mut s = partial_sums(&walks[0]);
            s.pop();
            s
        }
        WalkKind::WalkB => partial_sums(&walks[0]),
        WalkKind::WalkD => {
            let inc = &walks[0];
            let n = inc.ncols();
            let mut s = partial_sums(inc);
            let star = &s[n - 2] - inc.column(n - 1);
            s.push(star);
            s
        }
        WalkKind::JointB | WalkKind::Wendel => walks.iter().flat_map(partial_sums).collect(),
    }
}

fn draw_walks<R: Rng + ?Sized>(model: &IncrementModel, family: &WalkFamily, rng: &mut R) -> Result<Vec<DMatrix<f64>>> {
    family
        .steps
        .iter()
        .map(|&n| {
            let inc = sample_increments_with(model, n, rng)?;
            if family.kind == WalkKind::BridgeA {
                make_bridge(model, &inc)
            } else {
                Ok(inc)
            }
        })
        .collect()
}

fn check_combination(model: &IncrementModel, family: &WalkFamily) -> Result<()> {
    if model.d() != family.d {
        return invalid(format!("model dimension {} differs from family dimension {}", model.d(), family.d));
    }
    if family.kind == WalkKind::BridgeA && model.is_lattice() {
        return Err(Error::NotBridgeable("lattice steps cannot be centered"));
    }
    if let IncrementModel::Matrix(m) = model {
        if family.steps.iter().any(|&n| n != m.ncols()) {
            return invalid("every walk must have as many steps as the matrix has columns");
        }
    }
    Ok(())
}

#[derive(Default)]
struct Tally {
    inside: usize,
    ambiguous: usize,
    interior: usize,
}

/// Fraction of draws whose hull contains the origin. Lattice models are
/// decided exactly and additionally report the fraction with the origin in
/// the interior.
pub fn estimate_absorption(
    model: &IncrementModel,
    family: &WalkFamily,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<MCEstimate> {
    check_combination(model, family)?;
    if samples == 0 {
        return invalid("need at least one sample");
    }
    if tol.is_nan() || tol <= 0.0 {
        return invalid("tolerance must be positive");
    }
    let lattice = model.is_lattice();
    let tallies = run_streams(seed, samples, DEFAULT_STREAMS, |rng, count| -> Result<Tally> {
        let mut t = Tally::default();
        for _ in 0..count {
            let walks = draw_walks(model, family, rng)?;
            let pts = hull_points(family, &walks);
            if lattice {
                let ints: Vec<Vec<i64>> = pts.iter().map(|p| p.iter().map(|&x| x.round() as i64).collect()).collect();
                let m = origin_in_hull_lattice(&ints)?;
                t.inside += usize::from(m.inside);
                t.interior += usize::from(m.interior);
            } else {
                let m = origin_in_hull(&pts, tol)?;
                t.inside += usize::from(m.inside);
                t.ambiguous += usize::from(m.boundary_ambiguous);
            }
        }
        Ok(t)
    });
    let mut total = Tally::default();
    for t in tallies {
        let t = t?;
        total.inside += t.inside;
        total.ambiguous += t.ambiguous;
        total.interior += t.interior;
    }
    let mut est = MCEstimate::from_counts(total.inside, total.ambiguous, samples, seed);
    if lattice {
        est.interior_fraction = Some(total.interior as f64 / samples as f64);
    }
    Ok(est)
}

/// Elements `x ↦ (s_i x_{π(i)})` of the reflection group, as (permutation, signs).
fn group_elements(group: ReflectionType, n: usize) -> Vec<(Vec<usize>, Vec<i8>)> {
    let perms = permutations(n);
    let signs: Vec<Vec<i8>> = match group {
        ReflectionType::A => vec![vec![1; n]],
        ReflectionType::B | ReflectionType::D => (0u32..1 << n)
            .filter(|m| group == ReflectionType::B || m.count_ones() % 2 == 0)
            .map(|m| (0..n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect())
            .collect(),
    };
    perms.iter().flat_map(|p| signs.iter().map(move |s| (p.clone(), s.clone()))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, a, out);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        a.swap(j, k - 1);
    }
}

fn chamber_normals(group: ReflectionType, n: usize) -> Vec<Vec<i64>> {
    crate::conic::WeylChamber::new(group, n).map(|c| c.normals).unwrap_or_default()
}

/// Counts group elements `g` with `K ∩ gC̄ ≠ {0}` for the subspace spanned by
/// `kernel`, using the maximal-slack LP. For floats the margin must exceed `1e-9`.
pub fn count_chambers_meeting<T: Scalar>(kernel: &[Vec<T>], group: ReflectionType, n: usize) -> usize {
    if kernel.is_empty() {
        return 0;
    }
    let k = kernel.len();
    let threshold = if T::EXACT { T::zero() } else { T::from_f64(1e-9) };
    let base = chamber_normals(group, n);
    group_elements(group, n)
        .into_iter()
        .filter(|(perm, signs)| {
            let normals: Vec<Vec<T>> = base
                .iter()
                .map(|r| {
                    let mut g = vec![0i64; n];
                    for i in 0..n {
                        g[perm[i]] = signs[i] as i64 * r[i];
                    }
                    (0..k)
                        .map(|j| g.iter().zip(&kernel[j]).fold(T::zero(), |acc, (a, b)| acc + T::from_i64(*a) * b.clone()))
                        .collect()
                })
                .collect();
            let obj: Vec<T> = (0..k).map(|j| normals.iter().fold(T::zero(), |acc, r| acc + r[j].clone())).collect();
            let mut lp = LinearProgram::<T>::new(k).maximize(obj);
            for j in 0..k {
                lp.set_free(j);
                let mut e = vec![T::zero(); k];
                e[j] = T::one();
                lp.add_row(e.clone(), Relation::Le, T::one());
                lp.add_row(e, Relation::Ge, -T::one());
            }
            for r in normals {
                lp.add_row(r, Relation::Ge, T::zero());
            }
            matches!(lp.solve(), LpOutcome::Optimal { value, .. } if value > threshold)
        })
        .count()
}

fn check_count_shape(group: ReflectionType, d: usize, n: usize) -> Result<()> {
    group.check(n)?;
    if n > CHAMBER_COUNT_CAP {
        return Err(Error::CapExceeded { what: "chamber count", got: n, cap: CHAMBER_COUNT_CAP });
    }
    if d == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

/// Number of chambers `gC̄` met nontrivially by the kernel of the `d × n`
/// increment matrix. Type A works inside the sum-zero hyperplane.
pub fn chamber_intersection_count(increments: &DMatrix<f64>, group: ReflectionType) -> Result<usize> {
    let (d, n) = increments.shape();
    check_count_shape(group, d, n)?;
    let mut a = increments.clone();
    if group == ReflectionType::A {
        a = a.insert_row(d, 1.0);
    }
    let expected = a.nrows().min(n);
    let (rank, kernel) = float_nullspace(&a, 1e-10);
    if rank < expected {
        return Err(Error::RankDeficient { rank, expected });
    }
    let kernel: Vec<Vec<f64>> = kernel.iter().map(|v| v.iter().cloned().collect()).collect();
    Ok(count_chambers_meeting(&kernel, group, n))
}

/// Exact version for rational increments (rows of the `d × n` matrix).
pub fn chamber_intersection_count_exact(rows: &[Vec<BigRational>], group: ReflectionType) -> Result<usize> {
    let d = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    check_count_shape(group, d, n)?;
    let mut a = rows.to_vec();
    if group == ReflectionType::A {
        a.push(vec![BigRational::from_integer(1.into()); n]);
    }
    let kernel = nullspace(&a, n);
    Ok(count_chambers_meeting(&kernel, group, n))
}

/// Chamber count predicted by the arrangement for a generic kernel.
pub fn predicted_chamber_count(group: ReflectionType, n: usize, d: usize) -> Result<u64> {
    let chi = reflection_characteristic_polynomial(group, n)?;
    let (chi, dim) = match group {
        // the sum-zero hyperplane carries the essential part; drop the factor t
        ReflectionType::A => (CharacteristicPolynomial::new(chi.coefficients()[1..].to_vec())?, n - 1),
        _ => (chi, n),
    };
    if d >= dim {
        return Ok(0);
    }
    let c = intersected_region_count(&chi, d)?;
    u64::try_from(c).map_err(|_| Error::CapExceeded { what: "chamber count", got: usize::MAX, cap: usize::MAX })
}

/// Checks `Conv(S_1..S_n) ∪ Conv(S_1..S_{n-1}, S_n*) = Conv(S_1..S_n, S_n*)`
/// at random query points near the walk. Returns the number of mismatches
/// among the queries whose classifications were all unambiguous.
pub fn d_hull_identity_mismatches<R: Rng + ?Sized>(increments: &DMatrix<f64>, queries: usize, rng: &mut R) -> Result<usize> {
    let n = increments.ncols();
    if n < 2 {
        return invalid("need at least two steps");
    }
    let s = partial_sums(increments);
    let star = &s[n - 2] - increments.column(n - 1);
    let first = s.clone();
    let mut second: Vec<DVector<f64>> = s[..n - 1].to_vec();
    second.push(star.clone());
    let mut all = s.clone();
    all.push(star);
    let centre = all.iter().fold(DVector::zeros(increments.nrows()), |a, p| a + p) / all.len() as f64;
    let spread = all.iter().map(|p| (p - &centre).norm()).fold(0.0, f64::max).max(1e-12);
    let mut mismatches = 0;
    for _ in 0..queries {
        let q = &centre + gaussian_vector(rng, increments.nrows()) * spread;
        let shift = |pts: &[DVector<f64>]| pts.iter().map(|p| p - &q).collect::<Vec<_>>();
        let a = origin_in_hull(&shift(&first), crate::hull::DEFAULT_TOL)?;
        let b = origin_in_hull(&shift(&second), crate::hull::DEFAULT_TOL)?;
        let c = origin_in_hull(&shift(&all), crate::hull::DEFAULT_TOL)?;
        if a.boundary_ambiguous || b.boundary_ambiguous || c.boundary_ambiguous {
            continue;
        }
        if (a.inside || b.inside) != c.inside {
            mismatches += 1;
        }
    }
    Ok(mismatches)
}

/// One `simulate` output row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub family: WalkKind,
    pub n: usize,
    pub d: usize,
    pub model: String,
    pub estimate: MCEstimate,
    pub exact: f64,
    #[serde(with = "crate::sampling::nonfinite_f64")]
    pub z_score: f64,
}

impl SimulationReport {
    pub const CSV_HEADER: &'static str =
        "family,n,d,model,samples,seed,p_hat,stderr,ci_lo,ci_hi,exact,z_score,ambiguous_fraction";

    pub fn csv_row(&self) -> String {
        let e = &self.estimate;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.family, self.n, self.d, self.model, e.samples, e.seed, e.p_hat, e.stderr, e.ci95.0, e.ci95.1, self.exact,
            self.z_score, e.ambiguous_fraction
        )
    }
}

/// Whether every coordinate of the column sum vanishes to `tol`.
pub fn columns_sum_to_zero(m: &DMatrix<f64>, tol: f64) -> bool {
    m.column_sum().iter().all(|v| v.abs() <= tol)
}
