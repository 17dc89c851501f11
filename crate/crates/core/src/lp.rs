//! Dense two-phase simplex with Bland's rule.
//!
//! Instantiated with [`BigRational`](num_rational::BigRational) it decides
//! feasibility exactly, which is what the region-counting oracles need; with
//! `f64` it serves the Monte Carlo loops. Problems here have at most a few
//! dozen rows, so a dense tableau is the right tool.

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { value: T, x: Vec<T> },
    Infeasible,
    Unbounded,
}

impl<T: Scalar> LpOutcome<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// `maximize c·x` subject to linear rows; variables are `≥ 0` unless marked free.
#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    n_vars: usize,
    objective: Vec<T>,
    rows: Vec<(Vec<T>, Relation, T)>,
    free: Vec<bool>,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(n_vars: usize) -> Self {
        Self { n_vars, objective: vec![T::zero(); n_vars], rows: Vec::new(), free: vec![false; n_vars] }
    }

    pub fn maximize(mut self, c: Vec<T>) -> Self {
        assert_eq!(c.len(), self.n_vars);
        self.objective = c;
        self
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add_row(&mut self, coeffs: Vec<T>, rel: Relation, rhs: T) {
        assert_eq!(coeffs.len(), self.n_vars);
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn solve(&self) -> LpOutcome<T> {
        // Column layout: split variables, then one slack per inequality, then artificials.
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.n_vars);
        let mut n_cols = 0;
        for &f in &self.free {
            if f {
                col_of.push((n_cols, Some(n_cols + 1)));
                n_cols += 2;
            } else {
                col_of.push((n_cols, None));
                n_cols += 1;
            }
        }
        let n_struct = n_cols;
        let n_slack = self.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let m = self.rows.len();
        let total_before_art = n_struct + n_slack;

        let mut tab: Vec<Vec<T>> = Vec::with_capacity(m);
        let mut basis: Vec<usize> = vec![usize::MAX; m];
        let mut needs_art = Vec::new();
        let mut slack = n_struct;
        for (i, (coeffs, rel, rhs)) in self.rows.iter().enumerate() {
            let mut row = vec![T::zero(); total_before_art];
            for (v, a) in coeffs.iter().enumerate() {
                let (p, q) = col_of[v];
                row[p] = a.clone();
                if let Some(q) = q {
                    row[q] = -a.clone();
                }
            }
            let mut slack_col = None;
            match rel {
                Relation::Le => {
                    row[slack] = T::one();
                    slack_col = Some(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -T::one();
                    slack_col = Some(slack);
                    slack += 1;
                }
                Relation::Eq => {}
            }
            let mut b = rhs.clone();
            if b.is_neg() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
            }
            if b.is_negligible() && !T::EXACT {
                b = T::zero();
            }
            row.push(b);
            match slack_col {
                Some(s) if row[s].is_pos() => basis[i] = s,
                _ => needs_art.push(i),
            }
            tab.push(row);
        }

        // Insert artificial columns before the rhs column.
        let n_art = needs_art.len();
        let total = total_before_art + n_art;
        for row in tab.iter_mut() {
            let rhs = row.pop().unwrap();
            row.extend(std::iter::repeat_n(T::zero(), n_art));
            row.push(rhs);
        }
        for (a, &i) in needs_art.iter().enumerate() {
            tab[i][total_before_art + a] = T::one();
            basis[i] = total_before_art + a;
        }

        let mut t = Tableau { tab, basis, n_cols: total };

        if n_art > 0 {
            let mut c1 = vec![T::zero(); total];
            for c in c1.iter_mut().skip(total_before_art) {
                *c = -T::one();
            }
            match t.optimize(&c1, total) {
                Phase::Optimal(v) => {
                    if v.is_neg() {
                        return LpOutcome::Infeasible;
                    }
                }
                Phase::Unbounded => unreachable!("phase one is bounded"),
            }
            t.drive_out_artificials(total_before_art);
        }

        let mut c2 = vec![T::zero(); total];
        for (v, c) in self.objective.iter().enumerate() {
            let (p, q) = col_of[v];
            c2[p] = c.clone();
            if let Some(q) = q {
                c2[q] = -c.clone();
            }
        }
        match t.optimize(&c2, total_before_art) {
            Phase::Unbounded => LpOutcome::Unbounded,
            Phase::Optimal(value) => {
                let mut colval = vec![T::zero(); total];
                for (i, &b) in t.basis.iter().enumerate() {
                    colval[b] = t.tab[i][t.n_cols].clone();
                }
                let x = col_of
                    .iter()
                    .map(|&(p, q)| match q {
                        Some(q) => colval[p].clone() - colval[q].clone(),
                        None => colval[p].clone(),
                    })
                    .collect();
                LpOutcome::Optimal { value, x }
            }
        }
    }
}

enum Phase<T> {
    Optimal(T),
    Unbounded,
}

struct Tableau<T> {
    tab: Vec<Vec<T>>,
    basis: Vec<usize>,
    n_cols: usize,
}

impl<T: Scalar> Tableau<T> {
    /// Maximizes `c·x` using only columns `< allowed` as entering candidates.
    fn optimize(&mut self, c: &[T], allowed: usize) -> Phase<T> {
        let rhs = self.n_cols;
        // reduced costs r_j = c_j - Σ c_B(i) tab[i][j]
        let mut red: Vec<T> = c.to_vec();
        red.push(T::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = c[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (r, x) in red.iter_mut().zip(&self.tab[i]) {
                *r = r.clone() - cb.clone() * x.clone();
            }
        }
        let max_iter = 50_000;
        for _ in 0..max_iter {
            let Some(enter) = (0..allowed).find(|&j| red[j].is_pos()) else {
                return Phase::Optimal(-red[rhs].clone());
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.tab.iter().enumerate() {
                if !row[enter].is_pos() {
                    continue;
                }
                let ratio = row[rhs].clone() / row[enter].clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        let better = if T::EXACT {
                            ratio < lr || (ratio == lr && self.basis[i] < self.basis[li])
                        } else {
                            let diff = (ratio.clone() - lr.clone()).to_f64();
                            diff < -T::EPS || (diff.abs() <= T::EPS && self.basis[i] < self.basis[li])
                        };
                        if better {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            let Some((row, _)) = leave else {
                return Phase::Unbounded;
            };
            self.pivot(row, enter, &mut red);
        }
        panic!("simplex exceeded {max_iter} pivots");
    }

    fn pivot(&mut self, r: usize, c: usize, red: &mut [T]) {
        let inv = T::one() / self.tab[r][c].clone();
        for x in self.tab[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        self.tab[r][c] = T::one();
        let prow = self.tab[r].clone();
        for (i, row) in self.tab.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
            row[c] = T::zero();
        }
        let f = red[c].clone();
        if !f.is_zero() {
            for (x, y) in red.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
            red[c] = T::zero();
        }
        self.basis[r] = c;
    }

    fn drive_out_artificials(&mut self, first_art: usize) {
        let mut i = 0;
        while i < self.tab.len() {
            if self.basis[i] >= first_art {
                match (0..first_art).find(|&j| !self.tab[i][j].is_negligible()) {
                    Some(j) => {
                        let mut dummy = vec![T::zero(); self.n_cols + 1];
                        self.pivot(i, j, &mut dummy);
                        i += 1;
                    }
                    None => {
                        // redundant row
                        self.tab.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }
}
