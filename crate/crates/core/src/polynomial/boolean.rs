use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::assignment::{bit_of, Assignment};
use super::monomial::Monomial;
use super::spin::{Convention, SpinPoly};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default cap on the number of variables for exhaustive (2^n) operations.
pub const ENUMERATION_CAP: usize = 24;

/// Multilinear pseudo-Boolean polynomial with canonical term storage.
///
/// Every stored term has a nonzero coefficient and only indices below
/// `num_vars`; `x_i^2 = x_i` is applied whenever terms are multiplied.
#[derive(Debug, Clone, PartialEq)]
pub struct BooleanPoly<S> {
    num_vars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> BooleanPoly<S> {
    pub fn zero(num_vars: usize) -> Self {
        BooleanPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: S) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term_unchecked(Monomial::one(), c);
        p
    }

    /// The polynomial `x_i`.
    pub fn var(num_vars: usize, i: usize) -> Result<Self> {
        Self::from_terms(num_vars, [(Monomial::var(i), S::one())])
    }

    /// The polynomial `1 - x_i`.
    pub fn not_var(num_vars: usize, i: usize) -> Result<Self> {
        Self::from_terms(num_vars, [(Monomial::one(), S::one()), (Monomial::var(i), -S::one())])
    }

    /// Sums the given terms; duplicates are merged and zeros dropped.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(num_vars: usize, terms: I) -> Result<Self> {
        let mut p = Self::zero(num_vars);
        for (m, c) in terms {
            if let Some(v) = m.max_var() {
                if v >= num_vars {
                    return Err(Error::IndexOutOfRange {
                        index: v,
                        bound: num_vars,
                    });
                }
            }
            p.add_term_unchecked(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term_unchecked(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&Monomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Variables that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flat_map(|m| m.vars().iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Same terms over a larger variable space.
    pub fn with_num_vars(&self, num_vars: usize) -> Result<Self> {
        if let Some(&v) = self.support().last() {
            if v >= num_vars {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    bound: num_vars,
                });
            }
        }
        Ok(BooleanPoly {
            num_vars,
            terms: self.terms.clone(),
        })
    }

    pub fn eval(&self, a: &Assignment) -> Result<S> {
        if a.len() != self.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                found: a.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .filter(|(m, _)| m.vars().iter().all(|&i| a.get(i)))
            .fold(S::zero(), |acc, (_, c)| acc + c.clone()))
    }

    /// Evaluation at canonical index `index` (qubit 0 most significant).
    pub fn eval_index(&self, index: u64) -> S {
        let n = self.num_vars;
        self.terms
            .iter()
            .filter(|(m, _)| m.vars().iter().all(|&i| bit_of(index, n, i)))
            .fold(S::zero(), |acc, (_, c)| acc + c.clone())
    }

    /// Möbius transform of a truth vector (`c[idx]` is the value at the
    /// assignment with canonical index `idx`, variable 0 most significant).
    pub fn from_truth_vector(values: &[S]) -> Result<Self> {
        let len = values.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Shape(format!("truth vector length {len} is not a power of two")));
        }
        let n = len.trailing_zeros() as usize;
        if n > ENUMERATION_CAP {
            return Err(Error::Resource {
                what: "variable count",
                requested: n,
                cap: ENUMERATION_CAP,
            });
        }
        // In-place subset-difference transform over the index bits.
        let mut a: Vec<S> = values.to_vec();
        for bit in 0..n {
            let step = 1usize << bit;
            for idx in 0..len {
                if idx & step != 0 {
                    let lower = a[idx ^ step].clone();
                    a[idx] = a[idx].clone() - lower;
                }
            }
        }
        let mut p = Self::zero(n);
        for (idx, c) in a.into_iter().enumerate() {
            if !c.is_zero() {
                let m = Monomial::new((0..n).filter(|&i| bit_of(idx as u64, n, i)));
                p.terms.insert(m, c);
            }
        }
        Ok(p)
    }

    pub fn to_truth_vector(&self) -> Result<Vec<S>> {
        self.to_truth_vector_capped(ENUMERATION_CAP)
    }

    pub fn to_truth_vector_capped(&self, cap: usize) -> Result<Vec<S>> {
        let n = self.num_vars;
        if n > cap {
            return Err(Error::Resource {
                what: "variable count",
                requested: n,
                cap,
            });
        }
        let len = 1usize << n;
        let mut a = vec![S::zero(); len];
        for (m, c) in &self.terms {
            a[m.mask(n) as usize] = c.clone();
        }
        // Inverse transform: sum over sub-masks.
        for bit in 0..n {
            let step = 1usize << bit;
            for idx in 0..len {
                if idx & step != 0 {
                    let lower = a[idx ^ step].clone();
                    a[idx] = a[idx].clone() + lower;
                }
            }
        }
        Ok(a)
    }

    /// Substitutes `x_i -> 1 - x_i`.
    pub fn negate_var(&self, i: usize) -> Result<Self> {
        if i >= self.num_vars {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.num_vars,
            });
        }
        let mut p = Self::zero(self.num_vars);
        for (m, c) in &self.terms {
            if m.contains(i) {
                // c * rest * (1 - x_i) = c*rest - c*rest*x_i
                p.add_term_unchecked(m.without(i), c.clone());
                p.add_term_unchecked(m.clone(), -c.clone());
            } else {
                p.add_term_unchecked(m.clone(), c.clone());
            }
        }
        Ok(p)
    }

    /// Renames variable `i` to `map[i]` in a space of `num_vars` variables.
    pub fn relabel(&self, map: &[usize], num_vars: usize) -> Result<Self> {
        if map.len() < self.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                found: map.len(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for &t in &map[..self.num_vars] {
            if t >= num_vars {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    bound: num_vars,
                });
            }
            if !seen.insert(t) {
                return Err(Error::Aliasing(format!("target {t} used twice")));
            }
        }
        let mut p = Self::zero(num_vars);
        for (m, c) in &self.terms {
            p.add_term_unchecked(m.map_vars(|v| map[v]), c.clone());
        }
        Ok(p)
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut p = Self::zero(self.num_vars);
        if k.is_zero() {
            return p;
        }
        for (m, c) in &self.terms {
            p.terms.insert(m.clone(), c.clone() * k.clone());
        }
        p
    }

    /// Substitution `x_i = (1 ± s_i)/2` per `conv`; degree is preserved.
    pub fn to_spin(&self, conv: Convention) -> SpinPoly<S> {
        // x_i = (1 + c s_i)/2 with c = conv.x_sign(); a degree-d monomial
        // expands to 2^-d * sum_{U subset T} c^|U| s_U.
        let c_neg = conv.x_sign() < 0;
        let mut out = SpinPoly::zero(self.num_vars, conv);
        for (m, coeff) in &self.terms {
            let d = m.degree();
            let weight = coeff.clone() / pow2::<S>(d);
            for sub in m.subsets() {
                let neg = c_neg && sub.degree() % 2 == 1;
                let w = if neg { -weight.clone() } else { weight.clone() };
                out.add_term_unchecked(sub, w);
            }
        }
        out
    }

    fn binary_op(&self, other: &Self, negate_other: bool) -> Self {
        let mut p = BooleanPoly {
            num_vars: self.num_vars.max(other.num_vars),
            terms: self.terms.clone(),
        };
        for (m, c) in &other.terms {
            let c = if negate_other { -c.clone() } else { c.clone() };
            p.add_term_unchecked(m.clone(), c);
        }
        p
    }

    fn product(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.num_vars.max(other.num_vars));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                p.add_term_unchecked(ma.union(mb), ca.clone() * cb.clone());
            }
        }
        p
    }
}

pub(crate) fn pow2<S: Scalar>(d: usize) -> S {
    (0..d).fold(S::one(), |acc, _| acc * S::two())
}

impl<S: Scalar> Add for &BooleanPoly<S> {
    type Output = BooleanPoly<S>;
    fn add(self, rhs: Self) -> BooleanPoly<S> {
        self.binary_op(rhs, false)
    }
}

impl<S: Scalar> Add for BooleanPoly<S> {
    type Output = BooleanPoly<S>;
    fn add(self, rhs: Self) -> BooleanPoly<S> {
        self.binary_op(&rhs, false)
    }
}

impl<S: Scalar> Sub for &BooleanPoly<S> {
    type Output = BooleanPoly<S>;
    fn sub(self, rhs: Self) -> BooleanPoly<S> {
        self.binary_op(rhs, true)
    }
}

impl<S: Scalar> Sub for BooleanPoly<S> {
    type Output = BooleanPoly<S>;
    fn sub(self, rhs: Self) -> BooleanPoly<S> {
        self.binary_op(&rhs, true)
    }
}

impl<S: Scalar> Mul for &BooleanPoly<S> {
    type Output = BooleanPoly<S>;
    fn mul(self, rhs: Self) -> BooleanPoly<S> {
        self.product(rhs)
    }
}

impl<S: Scalar> Mul for BooleanPoly<S> {
    type Output = BooleanPoly<S>;
    fn mul(self, rhs: Self) -> BooleanPoly<S> {
        self.product(&rhs)
    }
}

impl<S: Scalar> Neg for &BooleanPoly<S> {
    type Output = BooleanPoly<S>;
    fn neg(self) -> BooleanPoly<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Neg for BooleanPoly<S> {
    type Output = BooleanPoly<S>;
    fn neg(self) -> BooleanPoly<S> {
        self.scale(&-S::one())
    }
}
