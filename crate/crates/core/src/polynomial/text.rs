//! Line-free text form for polynomials: `3*x2 + x0*x1 - 2*x0*x2`.
//!
//! Coefficients are written with [`Scalar::to_text`] (`p/q` for rationals),
//! a unit coefficient is omitted, variables are `x<i>` (Boolean) or `s<i>`
//! (spin) with zero-based indices. The printer is canonical, so printing a
//! parsed printout reproduces it byte for byte.

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use super::boolean::BooleanPoly;
use super::monomial::Monomial;
use super::spin::{Convention, SpinPoly};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn write_terms<'a, S: Scalar>(
    f: &mut impl Write,
    terms: impl Iterator<Item = (&'a Monomial, &'a S)>,
    prefix: char,
) -> fmt::Result {
    let mut first = true;
    for (m, c) in terms {
        let negative = c.is_negative();
        let mag = c.abs();
        if first {
            if negative {
                f.write_char('-')?;
            }
        } else {
            f.write_str(if negative { " - " } else { " + " })?;
        }
        first = false;
        if m.is_one() {
            f.write_str(&mag.to_text())?;
        } else {
            if !mag.is_one() {
                write!(f, "{}*", mag.to_text())?;
            }
            m.write_vars(f, prefix)?;
        }
    }
    if first {
        f.write_char('0')?;
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for BooleanPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms(), 'x')
    }
}

impl<S: Scalar> fmt::Display for SpinPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms(), 's')
    }
}

/// Splits `text` into signed term strings.
fn split_terms(text: &str) -> Vec<(bool, String)> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let chars: Vec<char> = compact.chars().collect();
    let mut out = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    for (k, &c) in chars.iter().enumerate() {
        let prev = if k > 0 { Some(chars[k - 1]) } else { None };
        let exponent_sign = matches!(prev, Some('e') | Some('E')) && k >= 2 && chars[k - 2].is_ascii_digit();
        if (c == '+' || c == '-') && !exponent_sign && !matches!(prev, Some('*') | Some('/')) {
            if !current.is_empty() || k > 0 {
                out.push((negative, std::mem::take(&mut current)));
            }
            negative = c == '-';
        } else {
            current.push(c);
        }
    }
    out.push((negative, current));
    out
}

fn parse_terms<S: Scalar>(text: &str, prefix: char, spin: bool) -> Result<BTreeMap<Monomial, S>> {
    let mut acc: BTreeMap<Monomial, S> = BTreeMap::new();
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::parse(1, "empty polynomial"));
    }
    for (negative, term) in split_terms(trimmed) {
        if term.is_empty() {
            return Err(Error::parse(1, "dangling sign"));
        }
        let mut coeff: Option<S> = None;
        let mut mono = Monomial::one();
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(Error::parse(1, format!("empty factor in `{term}`")));
            }
            let var = factor
                .strip_prefix(prefix)
                .filter(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()));
            if let Some(digits) = var {
                let i: usize = digits
                    .parse()
                    .map_err(|_| Error::parse(1, format!("bad variable `{factor}`")))?;
                let v = Monomial::var(i);
                mono = if spin { mono.sym_diff(&v) } else { mono.union(&v) };
            } else {
                let c = S::parse_text(factor)
                    .ok_or_else(|| Error::parse(1, format!("bad coefficient or variable `{factor}`")))?;
                coeff = Some(match coeff {
                    Some(prev) => prev * c,
                    None => c,
                });
            }
        }
        let mut c = coeff.unwrap_or_else(S::one);
        if negative {
            c = -c;
        }
        let sum = match acc.remove(&mono) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            acc.insert(mono, sum);
        }
    }
    Ok(acc)
}

fn infer_vars(terms: &BTreeMap<Monomial, impl Sized>, num_vars: Option<usize>) -> usize {
    let needed = terms.keys().filter_map(Monomial::max_var).max().map_or(0, |v| v + 1);
    num_vars.unwrap_or(needed)
}

/// Parses the Boolean text form. `num_vars` defaults to the largest index + 1.
pub fn parse_bool_poly<S: Scalar>(text: &str, num_vars: Option<usize>) -> Result<BooleanPoly<S>> {
    let terms = parse_terms::<S>(text, 'x', false)?;
    let n = infer_vars(&terms, num_vars);
    BooleanPoly::from_terms(n, terms)
}

/// Parses the spin text form (`s<i>` tokens).
pub fn parse_spin_poly<S: Scalar>(text: &str, convention: Convention, num_vars: Option<usize>) -> Result<SpinPoly<S>> {
    let terms = parse_terms::<S>(text, 's', true)?;
    let n = infer_vars(&terms, num_vars);
    SpinPoly::from_terms(n, convention, terms)
}
