use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::assignment::{bit_of, Assignment};
use super::boolean::{pow2, BooleanPoly};
use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How a spin value `s_i ∈ {+1, -1}` relates to the bit `x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// `s = 1 - 2x`: `|0>` has spin +1.
    OneMinusTwoX,
    /// `s = 2x - 1`: `|1>` has spin +1.
    #[default]
    TwoXMinusOne,
}

impl Convention {
    /// `c` in `x = (1 + c s)/2`.
    pub fn x_sign(self) -> i8 {
        match self {
            Convention::OneMinusTwoX => -1,
            Convention::TwoXMinusOne => 1,
        }
    }

    pub fn spin_of(self, bit: bool) -> i8 {
        match (self, bit) {
            (Convention::OneMinusTwoX, false) | (Convention::TwoXMinusOne, true) => 1,
            _ => -1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::OneMinusTwoX => "1-2x",
            Convention::TwoXMinusOne => "2x-1",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1-2x" => Ok(Convention::OneMinusTwoX),
            "2x-1" => Ok(Convention::TwoXMinusOne),
            other => Err(Error::Domain(format!(
                "unknown convention `{other}` (expected `1-2x` or `2x-1`)"
            ))),
        }
    }
}

/// Polynomial in spin variables of any degree (`s_i^2 = 1` applied).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPoly<S> {
    num_vars: usize,
    convention: Convention,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> SpinPoly<S> {
    pub fn zero(num_vars: usize, convention: Convention) -> Self {
        SpinPoly {
            num_vars,
            convention,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(
        num_vars: usize,
        convention: Convention,
        terms: I,
    ) -> Result<Self> {
        let mut p = Self::zero(num_vars, convention);
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
        let sum = match self.terms.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut p = Self::zero(self.num_vars, self.convention);
        for (m, c) in &self.terms {
            p.add_term_unchecked(m.clone(), c.clone() * k.clone());
        }
        p
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.convention != other.convention {
            return Err(Error::Domain(
                "cannot add spin polynomials with different conventions".into(),
            ));
        }
        let mut p = SpinPoly {
            num_vars: self.num_vars.max(other.num_vars),
            convention: self.convention,
            terms: self.terms.clone(),
        };
        for (m, c) in &other.terms {
            p.add_term_unchecked(m.clone(), c.clone());
        }
        Ok(p)
    }

    /// Evaluates with `s_i` derived from the bits under this polynomial's convention.
    pub fn eval(&self, a: &Assignment) -> Result<S> {
        if a.len() != self.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                found: a.len(),
            });
        }
        Ok(self.eval_with(|i| a.get(i)))
    }

    pub fn eval_index(&self, index: u64) -> S {
        let n = self.num_vars;
        self.eval_with(|i| bit_of(index, n, i))
    }

    fn eval_with<F: Fn(usize) -> bool>(&self, bit: F) -> S {
        let conv = self.convention;
        self.terms.iter().fold(S::zero(), |acc, (m, c)| {
            let negative = m.vars().iter().filter(|&&i| conv.spin_of(bit(i)) < 0).count() % 2 == 1;
            if negative {
                acc - c.clone()
            } else {
                acc + c.clone()
            }
        })
    }

    /// Inverse substitution `s_i = c (2 x_i - 1)`.
    pub fn to_bool(&self) -> BooleanPoly<S> {
        let c_neg = self.convention.x_sign() < 0;
        let mut out = BooleanPoly::zero(self.num_vars);
        for (m, coeff) in &self.terms {
            // prod_{i in U} c(2x_i - 1) = c^|U| sum_{V subset U} 2^|V| (-1)^{|U|-|V|} x_V
            let d = m.degree();
            let base_negative = c_neg && d % 2 == 1;
            for sub in m.subsets() {
                let negative = base_negative ^ ((d - sub.degree()) % 2 == 1);
                let w = coeff.clone() * pow2::<S>(sub.degree());
                out.add_term_unchecked(sub, if negative { -w } else { w });
            }
        }
        out
    }

    /// Same function expressed under another convention.
    pub fn with_convention(&self, conv: Convention) -> Self {
        if conv == self.convention {
            return self.clone();
        }
        // Switching conventions negates every spin.
        let mut p = Self::zero(self.num_vars, conv);
        for (m, c) in &self.terms {
            let w = if m.degree() % 2 == 1 { -c.clone() } else { c.clone() };
            p.add_term_unchecked(m.clone(), w);
        }
        p
    }

    pub fn to_model(&self) -> Result<SpinModel<S>> {
        let degree = self.degree();
        if degree > 2 {
            return Err(Error::DegreeTooHigh { degree, max: 2 });
        }
        let mut model = SpinModel::new(self.num_vars, self.convention);
        for (m, c) in &self.terms {
            match m.vars() {
                [] => model.offset = c.clone(),
                [i] => {
                    model.linear.insert(*i, c.clone());
                }
                [i, j] => {
                    model.quadratic.insert((*i, *j), c.clone());
                }
                _ => unreachable!(),
            }
        }
        Ok(model)
    }
}

/// Ising model `offset + Σ h_i s_i + Σ J_ij s_i s_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinModel<S> {
    pub num_qubits: usize,
    pub convention: Convention,
    pub offset: S,
    pub linear: BTreeMap<usize, S>,
    /// Keys are `(i, j)` with `i < j`.
    pub quadratic: BTreeMap<(usize, usize), S>,
}

impl<S: Scalar> SpinModel<S> {
    pub fn new(num_qubits: usize, convention: Convention) -> Self {
        SpinModel {
            num_qubits,
            convention,
            offset: S::zero(),
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
        }
    }

    pub fn add_linear(&mut self, i: usize, v: S) -> Result<()> {
        self.check(i)?;
        let e = self.linear.entry(i).or_insert_with(S::zero);
        *e = e.clone() + v;
        if e.is_zero() {
            self.linear.remove(&i);
        }
        Ok(())
    }

    /// Adds `v s_i s_j`; `i` and `j` must differ.
    pub fn add_coupling(&mut self, i: usize, j: usize, v: S) -> Result<()> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(Error::Domain(format!("coupling of qubit {i} with itself")));
        }
        let key = (i.min(j), i.max(j));
        let e = self.quadratic.entry(key).or_insert_with(S::zero);
        *e = e.clone() + v;
        if e.is_zero() {
            self.quadratic.remove(&key);
        }
        Ok(())
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.num_qubits {
            Err(Error::IndexOutOfRange {
                index: i,
                bound: self.num_qubits,
            })
        } else {
            Ok(())
        }
    }

    pub fn to_spin_poly(&self) -> SpinPoly<S> {
        let mut p = SpinPoly::zero(self.num_qubits, self.convention);
        p.add_term_unchecked(Monomial::one(), self.offset.clone());
        for (&i, h) in &self.linear {
            p.add_term_unchecked(Monomial::var(i), h.clone());
        }
        for (&(i, j), jv) in &self.quadratic {
            p.add_term_unchecked(Monomial::pair(i, j), jv.clone());
        }
        p
    }

    pub fn to_bool(&self) -> BooleanPoly<S> {
        self.to_spin_poly().to_bool()
    }

    pub fn eval(&self, a: &Assignment) -> Result<S> {
        self.to_spin_poly().eval(a)
    }
}

impl<S: Scalar> BooleanPoly<S> {
    /// Degree-≤2 polynomial as an Ising model.
    pub fn to_spin_model(&self, conv: Convention) -> Result<SpinModel<S>> {
        self.to_spin(conv).to_model()
    }
}

/// Converts an Ising model back to Boolean form.
pub fn spin_to_bool<S: Scalar>(m: &SpinModel<S>) -> BooleanPoly<S> {
    m.to_bool()
}

/// Boolean → spin substitution under `conv`.
pub fn bool_to_spin<S: Scalar>(p: &BooleanPoly<S>, conv: Convention) -> SpinPoly<S> {
    p.to_spin(conv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64 as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    fn h_and() -> BooleanPoly<Q> {
        BooleanPoly::from_terms(
            3,
            [
                (Monomial::var(2), q(3, 1)),
                (Monomial::pair(0, 1), q(1, 1)),
                (Monomial::pair(0, 2), q(-2, 1)),
                (Monomial::pair(1, 2), q(-2, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn and_penalty_in_spin_form() {
        // (3 - s1 - s2 + 2 s* + s1 s2 - 2 s1 s* - 2 s2 s*)/4
        let s = h_and().to_spin(Convention::TwoXMinusOne);
        let expect = [
            (Monomial::one(), q(3, 4)),
            (Monomial::var(0), q(-1, 4)),
            (Monomial::var(1), q(-1, 4)),
            (Monomial::var(2), q(2, 4)),
            (Monomial::pair(0, 1), q(1, 4)),
            (Monomial::pair(0, 2), q(-2, 4)),
            (Monomial::pair(1, 2), q(-2, 4)),
        ];
        assert_eq!(s, SpinPoly::from_terms(3, Convention::TwoXMinusOne, expect).unwrap());
        assert_eq!(s.to_bool(), h_and());
    }

    #[test]
    fn negated_and_matches_published_spin_form() {
        // (3 + s1 - s2 + 2 s* - s1 s2 + 2 s1 s* - 2 s2 s*)/4
        let s = h_and().negate_var(0).unwrap().to_spin(Convention::TwoXMinusOne);
        let expect = SpinPoly::from_terms(
            3,
            Convention::TwoXMinusOne,
            [
                (Monomial::one(), q(3, 4)),
                (Monomial::var(0), q(1, 4)),
                (Monomial::var(1), q(-1, 4)),
                (Monomial::var(2), q(2, 4)),
                (Monomial::pair(0, 1), q(-1, 4)),
                (Monomial::pair(0, 2), q(2, 4)),
                (Monomial::pair(1, 2), q(-2, 4)),
            ],
        )
        .unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn constant_and_zero() {
        let c = BooleanPoly::constant(2, q(5, 2)).to_spin(Convention::OneMinusTwoX);
        let m = c.to_model().unwrap();
        assert_eq!(m.offset, q(5, 2));
        assert!(m.linear.is_empty() && m.quadratic.is_empty());
        let zero = SpinModel::<Q>::new(3, Convention::TwoXMinusOne);
        assert!(spin_to_bool(&zero).is_zero());
    }

    #[test]
    fn half_one_minus_sigma_under_one_minus_two_x() {
        // (1 - s) / 2 with s = 1 - 2z is z: ground state z = 0.
        let p = SpinPoly::from_terms(
            3,
            Convention::OneMinusTwoX,
            [(Monomial::one(), q(1, 2)), (Monomial::var(2), q(-1, 2))],
        )
        .unwrap();
        let b = p.to_bool();
        assert_eq!(b, BooleanPoly::var(3, 2).unwrap());
        let tv = b.to_truth_vector().unwrap();
        let ground: Vec<usize> = (0..8).filter(|&i| tv[i] == q(0, 1)).collect();
        assert_eq!(ground, vec![0, 2, 4, 6]);
    }

    #[test]
    fn degree_three_is_not_a_model() {
        let p = BooleanPoly::from_terms(3, [(Monomial::new([0, 1, 2]), q(1, 1))]).unwrap();
        let s = p.to_spin(Convention::OneMinusTwoX);
        assert_eq!(s.degree(), 3);
        assert_eq!(s.to_model(), Err(Error::DegreeTooHigh { degree: 3, max: 2 }));
    }

    #[test]
    fn convention_switch_preserves_values() {
        let s = h_and().to_spin(Convention::TwoXMinusOne);
        let t = s.with_convention(Convention::OneMinusTwoX);
        for idx in 0..8 {
            assert_eq!(s.eval_index(idx), t.eval_index(idx));
        }
        assert_eq!(t.to_bool(), h_and());
    }

    #[test]
    fn model_rejects_self_coupling() {
        let mut m = SpinModel::<Q>::new(2, Convention::OneMinusTwoX);
        assert!(m.add_coupling(1, 1, q(1, 1)).is_err());
        m.add_coupling(1, 0, q(1, 1)).unwrap();
        assert_eq!(m.quadratic.get(&(0, 1)), Some(&q(1, 1)));
    }
}
