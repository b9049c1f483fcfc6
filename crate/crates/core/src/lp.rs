//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
struct Constraint {
    coeffs: Vec<Q>,
    cmp: Cmp,
    rhs: Q,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

/// Minimise `c . x` subject to linear rows; variables are free unless
/// marked non-negative.
#[derive(Debug, Clone)]
pub(crate) struct LinearProgram {
    num_vars: usize,
    nonneg: Vec<bool>,
    rows: Vec<Constraint>,
}

impl LinearProgram {
    pub(crate) fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            nonneg: vec![false; num_vars],
            rows: Vec::new(),
        }
    }

    pub(crate) fn set_nonneg(&mut self, j: usize) {
        self.nonneg[j] = true;
    }

    pub(crate) fn add(&mut self, coeffs: Vec<Q>, cmp: Cmp, rhs: Q) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push(Constraint { coeffs, cmp, rhs });
    }

    pub(crate) fn minimize(&self, objective: &[Q]) -> LpOutcome {
        Tableau::build(self).solve(self, objective)
    }
}

struct Tableau {
    /// `m` rows of `width + 1` entries; the last entry is the right-hand side.
    t: Vec<Vec<Q>>,
    basis: Vec<usize>,
    width: usize,
    /// `(positive column, negative column)` per structural variable.
    columns: Vec<(usize, Option<usize>)>,
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut columns = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for j in 0..lp.num_vars {
            if lp.nonneg[j] {
                columns.push((next, None));
                next += 1;
            } else {
                columns.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let structural = next;
        let slacks = lp.rows.iter().filter(|r| r.cmp != Cmp::Eq).count();
        let artificials = lp.rows.iter().filter(|r| r.cmp != Cmp::Le).count();
        let width = structural + slacks + artificials;
        let first_artificial = structural + slacks;

        let mut t = Vec::with_capacity(lp.rows.len());
        let mut basis = Vec::with_capacity(lp.rows.len());
        let (mut slack, mut art) = (structural, first_artificial);
        for row in &lp.rows {
            let flip = row.rhs.is_negative();
            let sign = |v: &Q| if flip { -v.clone() } else { v.clone() };
            let cmp = match (row.cmp, flip) {
                (Cmp::Le, true) => Cmp::Ge,
                (Cmp::Ge, true) => Cmp::Le,
                (c, _) => c,
            };
            let mut r = vec![Q::zero(); width + 1];
            for (j, c) in row.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (p, n) = columns[j];
                r[p] = sign(c);
                if let Some(n) = n {
                    r[n] = -sign(c);
                }
            }
            r[width] = sign(&row.rhs);
            match cmp {
                Cmp::Le => {
                    r[slack] = Q::one();
                    basis.push(slack);
                    slack += 1;
                }
                Cmp::Ge => {
                    r[slack] = -Q::one();
                    slack += 1;
                    r[art] = Q::one();
                    basis.push(art);
                    art += 1;
                }
                Cmp::Eq => {
                    r[art] = Q::one();
                    basis.push(art);
                    art += 1;
                }
            }
            t.push(r);
        }
        Tableau {
            t,
            basis,
            width,
            columns,
            first_artificial,
        }
    }

    fn pivot(&mut self, z: &mut [Q], row: usize, col: usize) {
        let p = self.t[row][col].clone();
        for v in self.t[row].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &f * pv;
                }
            }
        }
        if !z[col].is_zero() {
            let f = z[col].clone();
            for (v, pv) in z.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Reduced-cost row for `cost`; the last entry is minus the objective.
    fn reduced_costs(&self, cost: &[Q]) -> Vec<Q> {
        let mut z: Vec<Q> = cost.to_vec();
        z.push(Q::zero());
        for (r, &b) in self.t.iter().zip(&self.basis) {
            if cost[b].is_zero() {
                continue;
            }
            for (v, tv) in z.iter_mut().zip(r) {
                if !tv.is_zero() {
                    *v = &*v - &cost[b] * tv;
                }
            }
        }
        z
    }

    /// Returns `false` when unbounded.
    fn run(&mut self, z: &mut [Q], allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| z[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for (i, r) in self.t.iter().enumerate() {
                if !r[col].is_positive() {
                    continue;
                }
                let ratio = &r[self.width] / &r[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((row, _)) => self.pivot(z, row, col),
            }
        }
    }

    fn solve(mut self, lp: &LinearProgram, objective: &[Q]) -> LpOutcome {
        let mut cost1 = vec![Q::zero(); self.width];
        for c in cost1.iter_mut().skip(self.first_artificial) {
            *c = Q::one();
        }
        let mut z = self.reduced_costs(&cost1);
        self.run(&mut z, self.width);
        if !z[self.width].is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.t.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.t[i][j].is_zero()) {
                    Some(j) => {
                        let mut dummy = vec![Q::zero(); self.width + 1];
                        self.pivot(&mut dummy, i, j);
                    }
                    None => {
                        self.t.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        let mut cost2 = vec![Q::zero(); self.width];
        for (j, &(p, n)) in self.columns.iter().enumerate() {
            cost2[p] = objective[j].clone();
            if let Some(n) = n {
                cost2[n] = -objective[j].clone();
            }
        }
        let mut z = self.reduced_costs(&cost2);
        if !self.run(&mut z, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut values = vec![Q::zero(); self.width];
        for (r, &b) in self.t.iter().zip(&self.basis) {
            values[b] = r[self.width].clone();
        }
        let x: Vec<Q> = self
            .columns
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &values[p] - &values[n],
                None => values[p].clone(),
            })
            .collect();
        let value = x.iter().zip(objective).fold(Q::zero(), |acc, (a, b)| acc + a * b);
        debug_assert!(lp.rows.iter().all(|r| {
            let lhs = r.coeffs.iter().zip(&x).fold(Q::zero(), |acc, (a, b)| acc + a * b);
            match r.cmp {
                Cmp::Le => lhs <= r.rhs,
                Cmp::Eq => lhs == r.rhs,
                Cmp::Ge => lhs >= r.rhs,
            }
        }));
        LpOutcome::Optimal { x, value }
    }
}
