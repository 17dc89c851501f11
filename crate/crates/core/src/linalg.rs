//! Exact integer/rational elimination and the small dense float helpers used
//! by the samplers.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Divides `v` by the gcd of its entries and makes the leading nonzero entry
/// positive. Returns `false` when `v` is the zero vector.
pub fn make_primitive(v: &mut [BigInt]) -> bool {
    let mut g = BigInt::zero();
    for x in v.iter() {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return false;
    }
    let lead_neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    if lead_neg {
        g = -g;
    }
    if !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    true
}

/// Row-echelon basis over the integers, grown one vector at a time.
///
/// Reduction is fraction-free: `v ← b[p]·v − v[p]·b` followed by removal of
/// the content, so entries stay small integers for small inputs.
#[derive(Debug, Clone, Default)]
pub struct IntegerEchelon {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IntegerEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the primitive remainder if nonzero.
    pub fn reduce(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut v = v.to_vec();
        for (p, b) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let a = b[*p].clone();
            let c = v[*p].clone();
            for (x, y) in v.iter_mut().zip(b) {
                *x = &a * &*x - &c * y;
            }
            make_primitive(&mut v);
        }
        if make_primitive(&mut v) {
            Some(v)
        } else {
            None
        }
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        match self.reduce(v) {
            Some(r) => {
                let p = r.iter().position(|x| !x.is_zero()).unwrap();
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).is_none()
    }
}

/// Rank of an integer matrix given by rows.
pub fn rank_integer(rows: &[Vec<BigInt>]) -> usize {
    let mut e = IntegerEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Reduced row-echelon form over any [`Scalar`]; returns pivot columns.
pub fn rref<T: Scalar>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // largest pivot for floats, first nonzero for exact
        let mut best = None;
        let mut best_abs = T::zero();
        for (i, row) in m.iter().enumerate().skip(r) {
            if row[c].is_negligible() {
                continue;
            }
            let a = row[c].abs();
            if best.is_none() || (!T::EXACT && a > best_abs) {
                best = Some(i);
                best_abs = a;
                if T::EXACT {
                    break;
                }
            }
        }
        let Some(i) = best else { continue };
        m.swap(r, i);
        let inv = T::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(rows: &[Vec<T>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : M x = 0}` for `M` given by rows of length `n`.
pub fn nullspace<T: Scalar>(rows: &[Vec<T>], n: usize) -> Vec<Vec<T>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); n];
            v[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Clears denominators and content of a rational vector.
pub fn primitive_integer_vector(v: &[BigRational]) -> Option<Vec<BigInt>> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    if make_primitive(&mut out) {
        Some(out)
    } else {
        None
    }
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

/// Orthonormal basis of the null space of the `rows × n` matrix `a`, together
/// with the numerical rank used (singular values above `rel_tol · σ_max`).
pub fn float_nullspace(a: &DMatrix<f64>, rel_tol: f64) -> (usize, Vec<DVector<f64>>) {
    let n = a.ncols();
    let svd = a.clone().svd(false, true);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let vt = svd.v_t.expect("requested V^T");
    let mut row_space: Vec<DVector<f64>> = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s > rel_tol * sigma_max && sigma_max > 0.0 {
            row_space.push(vt.row(i).transpose());
        }
    }
    let rank = row_space.len();
    let mut basis = row_space.clone();
    let mut kernel = Vec::new();
    for j in 0..n {
        let mut e = DVector::zeros(n);
        e[j] = 1.0;
        // two passes of Gram-Schmidt for stability
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&e);
                e -= b * c;
            }
        }
        let norm = e.norm();
        if norm > 1e-8 {
            e /= norm;
            basis.push(e.clone());
            kernel.push(e);
        }
        if basis.len() == n {
            break;
        }
    }
    (rank, kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn primitive_normalisation() {
        let mut v = iv(&[0, -4, 6]);
        assert!(make_primitive(&mut v));
        assert_eq!(v, iv(&[0, 2, -3]));
        let mut z = iv(&[0, 0]);
        assert!(!make_primitive(&mut z));
    }

    #[test]
    fn integer_rank() {
        let rows = vec![iv(&[1, -1, 0]), iv(&[0, 1, -1]), iv(&[1, 0, -1])];
        assert_eq!(rank_integer(&rows), 2);
        let rows = vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[1, 1]), iv(&[1, -1])];
        assert_eq!(rank_integer(&rows), 2);
    }

    #[test]
    fn rational_nullspace() {
        let rows: Vec<Vec<BigRational>> = vec![to_rational(&iv(&[1, 1, 1]))];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s: BigRational = v.iter().cloned().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn float_kernel_is_orthogonal() {
        let a = DMatrix::from_row_slice(2, 4, &[1.0, 2.0, 0.5, -1.0, 0.3, -0.7, 1.1, 2.0]);
        let (r, k) = float_nullspace(&a, 1e-10);
        assert_eq!(r, 2);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&a * v).norm() < 1e-12);
        }
        assert!(k[0].dot(&k[1]).abs() < 1e-12);
    }
}
