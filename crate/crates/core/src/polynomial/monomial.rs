use std::fmt;

/// Sorted, duplicate-free set of variable indices.
///
/// The derived `Ord` is lexicographic on the sorted index list, which fixes
/// the canonical term order of every polynomial map.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Monomial(vec![i])
    }

    pub fn pair(i: usize, j: usize) -> Self {
        Monomial::new([i, j])
    }

    /// Builds the monomial of the given variables. Repeated variables collapse
    /// (`x_i * x_i = x_i`).
    pub fn new<I: IntoIterator<Item = usize>>(vars: I) -> Self {
        let mut v: Vec<usize> = vars.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Monomial(v)
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Boolean product: union of the variable sets.
    pub fn union(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Spin product: symmetric difference, since `s_i * s_i = 1`.
    pub fn sym_diff(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) if x == y => {
                    a.next();
                    b.next();
                }
                (Some(&&x), Some(&&y)) if x < y => {
                    out.push(x);
                    a.next();
                }
                (Some(_), Some(&&y)) => {
                    out.push(y);
                    b.next();
                }
                (Some(&&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    out.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    pub fn without(&self, i: usize) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&v| v != i).collect())
    }

    pub fn with(&self, i: usize) -> Monomial {
        Monomial::new(self.0.iter().copied().chain(std::iter::once(i)))
    }

    /// Relabels every variable through `map`.
    pub fn map_vars<F: Fn(usize) -> usize>(&self, map: F) -> Monomial {
        Monomial::new(self.0.iter().map(|&v| map(v)))
    }

    /// All sub-monomials, in increasing bitmask order over `self.vars()`.
    pub fn subsets(&self) -> impl Iterator<Item = Monomial> + '_ {
        let d = self.0.len();
        (0u64..(1u64 << d))
            .map(move |bits| Monomial((0..d).filter(|k| bits >> k & 1 == 1).map(|k| self.0[k]).collect()))
    }

    /// Bitmask in canonical index order: variable `i` of `n` is bit `n-1-i`.
    pub fn mask(&self, n: usize) -> u64 {
        self.0.iter().fold(0u64, |m, &i| m | 1u64 << (n - 1 - i))
    }

    /// Writes `{prefix}{i}` factors joined by `*`.
    pub(crate) fn write_vars(&self, f: &mut impl fmt::Write, prefix: char) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_char('*')?;
            }
            write!(f, "{prefix}{v}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        self.write_vars(f, 'x')
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_lexicographic() {
        let mut v = vec![
            Monomial::new([1]),
            Monomial::new([0, 1]),
            Monomial::one(),
            Monomial::new([0]),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Monomial::one(),
                Monomial::new([0]),
                Monomial::new([0, 1]),
                Monomial::new([1])
            ]
        );
    }

    #[test]
    fn products() {
        let a = Monomial::new([0, 2]);
        let b = Monomial::new([2, 3]);
        assert_eq!(a.union(&b), Monomial::new([0, 2, 3]));
        assert_eq!(a.sym_diff(&b), Monomial::new([0, 3]));
        assert_eq!(a.sym_diff(&a), Monomial::one());
        assert_eq!(Monomial::new([3, 1, 3]), Monomial::new([1, 3]));
    }

    #[test]
    fn subsets_and_masks() {
        let m = Monomial::new([0, 2]);
        let subs: Vec<_> = m.subsets().collect();
        assert_eq!(subs.len(), 4);
        assert!(subs.contains(&Monomial::one()));
        assert!(subs.contains(&m));
        assert_eq!(m.mask(3), 0b101);
        assert_eq!(Monomial::var(0).mask(4), 0b1000);
    }
}
