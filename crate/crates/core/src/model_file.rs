//! Line-oriented Ising-model files.
//!
//! ```text
//! num_qubits 3
//! convention 2x-1
//! offset 3/4
//! h 0 -1/4
//! J 0 1 1/4
//! K 1/8 0 1 2
//! role 2 output
//! wire z 2
//! ```
//!
//! `K` lines carry terms of degree three or more (value first, then the
//! qubits) and only appear for k-local models.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::polynomial::{BooleanPoly, Convention, Monomial, SpinModel, SpinPoly};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QubitRole {
    Input,
    Output,
    Intermediate,
    Mediator,
    Logical,
}

impl QubitRole {
    pub fn as_str(self) -> &'static str {
        match self {
            QubitRole::Input => "input",
            QubitRole::Output => "output",
            QubitRole::Intermediate => "intermediate",
            QubitRole::Mediator => "mediator",
            QubitRole::Logical => "logical",
        }
    }
}

impl fmt::Display for QubitRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QubitRole {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "input" => Ok(QubitRole::Input),
            "output" => Ok(QubitRole::Output),
            "intermediate" => Ok(QubitRole::Intermediate),
            "mediator" => Ok(QubitRole::Mediator),
            "logical" => Ok(QubitRole::Logical),
            other => Err(Error::Domain(format!("unknown qubit role {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile<S> {
    pub poly: SpinPoly<S>,
    pub roles: BTreeMap<usize, QubitRole>,
    /// Named wires in file order.
    pub wires: Vec<(String, usize)>,
    /// Minimum penalty of any constraint violation, when known.
    pub delta: Option<S>,
}

impl<S: Scalar> ModelFile<S> {
    pub fn new(poly: SpinPoly<S>) -> Self {
        ModelFile {
            poly,
            roles: BTreeMap::new(),
            wires: Vec::new(),
            delta: None,
        }
    }

    pub fn from_bool(p: &BooleanPoly<S>, conv: Convention) -> Self {
        Self::new(p.to_spin(conv))
    }

    pub fn from_model(m: &SpinModel<S>) -> Self {
        Self::new(m.to_spin_poly())
    }

    pub fn num_qubits(&self) -> usize {
        self.poly.num_vars()
    }

    pub fn to_bool(&self) -> BooleanPoly<S> {
        self.poly.to_bool()
    }

    pub fn wire(&self, name: &str) -> Option<usize> {
        self.wires.iter().find(|(n, _)| n == name).map(|(_, q)| *q)
    }

    /// Qubits whose role is not mediator, ascending. Without role lines
    /// every qubit counts as logical.
    pub fn logical_qubits(&self) -> Vec<usize> {
        (0..self.num_qubits())
            .filter(|q| self.roles.get(q) != Some(&QubitRole::Mediator))
            .collect()
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("num_qubits {}\n", self.num_qubits()));
        out.push_str(&format!("convention {}\n", self.poly.convention()));
        let offset = self.poly.coeff(&Monomial::one());
        out.push_str(&format!("offset {}\n", offset.to_text()));
        if let Some(d) = &self.delta {
            out.push_str(&format!("delta {}\n", d.to_text()));
        }
        let mut linear = Vec::new();
        let mut quadratic = Vec::new();
        let mut higher = Vec::new();
        for (m, c) in self.poly.terms() {
            match m.degree() {
                0 => {}
                1 => linear.push(format!("h {} {}\n", m.vars()[0], c.to_text())),
                2 => quadratic.push(format!("J {} {} {}\n", m.vars()[0], m.vars()[1], c.to_text())),
                _ => {
                    let qs: Vec<String> = m.vars().iter().map(|v| v.to_string()).collect();
                    higher.push(format!("K {} {}\n", c.to_text(), qs.join(" ")));
                }
            }
        }
        for line in linear.into_iter().chain(quadratic).chain(higher) {
            out.push_str(&line);
        }
        for (q, r) in &self.roles {
            out.push_str(&format!("role {q} {r}\n"));
        }
        for (name, q) in &self.wires {
            out.push_str(&format!("wire {name} {q}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut num_qubits: Option<usize> = None;
        let mut convention: Option<Convention> = None;
        let mut terms: Vec<(Monomial, S, usize)> = Vec::new();
        let mut roles = BTreeMap::new();
        let mut wires: Vec<(String, usize)> = Vec::new();
        let mut delta = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: String| Error::parse(line_no, msg);
            let index = |s: &str| -> Result<usize> { s.parse().map_err(|_| err(format!("bad qubit index {s:?}"))) };
            let value = |s: &str| -> Result<S> { S::parse_text(s).ok_or_else(|| err(format!("bad number {s:?}"))) };
            let want = |n: usize| -> Result<()> {
                if toks.len() == n {
                    Ok(())
                } else {
                    Err(err(format!("`{}` takes {} fields", toks[0], n - 1)))
                }
            };
            match toks[0] {
                "num_qubits" => {
                    want(2)?;
                    num_qubits = Some(index(toks[1])?);
                }
                "convention" => {
                    want(2)?;
                    convention = Some(toks[1].parse().map_err(|e: Error| err(e.to_string()))?);
                }
                "offset" => {
                    want(2)?;
                    terms.push((Monomial::one(), value(toks[1])?, line_no));
                }
                "delta" => {
                    want(2)?;
                    let d = value(toks[1])?;
                    if !d.is_positive() {
                        return Err(err(format!("delta must be positive, got {d}")));
                    }
                    delta = Some(d);
                }
                "h" => {
                    want(3)?;
                    terms.push((Monomial::var(index(toks[1])?), value(toks[2])?, line_no));
                }
                "J" => {
                    want(4)?;
                    let (a, b) = (index(toks[1])?, index(toks[2])?);
                    if a == b {
                        return Err(err(format!("coupling J {a} {b} on a single qubit")));
                    }
                    terms.push((Monomial::pair(a, b), value(toks[3])?, line_no));
                }
                "K" => {
                    if toks.len() < 5 {
                        return Err(err("`K` needs a value and at least three qubits".into()));
                    }
                    let qs = toks[2..].iter().map(|t| index(t)).collect::<Result<Vec<_>>>()?;
                    let m = Monomial::new(qs.iter().copied());
                    if m.degree() != qs.len() {
                        return Err(err("repeated qubit in `K` term".into()));
                    }
                    terms.push((m, value(toks[1])?, line_no));
                }
                "role" => {
                    want(3)?;
                    roles.insert(index(toks[1])?, toks[2].parse().map_err(|e: Error| err(e.to_string()))?);
                }
                "wire" => {
                    want(3)?;
                    if wires.iter().any(|(n, _)| n == toks[1]) {
                        return Err(err(format!("wire {} listed twice", toks[1])));
                    }
                    wires.push((toks[1].to_string(), index(toks[2])?));
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let n = num_qubits.ok_or_else(|| Error::parse(1, "missing `num_qubits`"))?;
        let conv = convention.ok_or_else(|| Error::parse(1, "missing `convention`"))?;
        let mut poly = SpinPoly::zero(n, conv);
        for (m, c, line) in terms {
            if m.max_var().is_some_and(|v| v >= n) {
                return Err(Error::parse(line, format!("qubit index out of range for {n} qubits")));
            }
            poly.add_term_unchecked(m, c);
        }
        for &q in roles.keys() {
            if q >= n {
                return Err(Error::parse(1, format!("role for qubit {q} out of range")));
            }
        }
        if let Some((name, q)) = wires.iter().find(|(_, q)| *q >= n) {
            return Err(Error::parse(1, format!("wire {name} on qubit {q} out of range")));
        }
        Ok(ModelFile {
            poly,
            roles,
            wires,
            delta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_bool_poly;
    use num_rational::Rational64 as Q;

    #[test]
    fn round_trip() {
        let p: BooleanPoly<Q> = parse_bool_poly("3*x2 + x0*x1 - 2*x0*x2 - 2*x1*x2 + x0*x1*x2", None).unwrap();
        let mut f = ModelFile::from_bool(&p, Convention::TwoXMinusOne);
        f.roles.insert(0, QubitRole::Input);
        f.roles.insert(2, QubitRole::Output);
        f.wires.push(("a".into(), 0));
        f.delta = Some(Q::new(3, 2));
        let text = f.write();
        assert!(text.starts_with("num_qubits 3\nconvention 2x-1\noffset "));
        assert!(text.contains("\nK 1/8 0 1 2\n"));
        let back = ModelFile::<Q>::parse(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_bool(), p);
        assert_eq!(back.write(), text);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            ModelFile::<Q>::parse("num_qubits 2\nconvention 1-2x\nJ 0 0 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(ModelFile::<Q>::parse("num_qubits 2\nconvention 1-2x\nh 5 1\n").is_err());
        assert!(ModelFile::<Q>::parse("convention 1-2x\n").is_err());
        assert!(ModelFile::<Q>::parse("num_qubits 1\nconvention 1-2x\nfoo 1\n").is_err());
        assert!(ModelFile::<Q>::parse("num_qubits 1\nconvention up\n").is_err());
        assert!(ModelFile::<Q>::parse("num_qubits 1\nconvention 1-2x\ndelta 0\n").is_err());
    }

    #[test]
    fn logical_qubits_skip_mediators() {
        let mut f = ModelFile::<Q>::new(SpinPoly::zero(3, Convention::OneMinusTwoX));
        assert_eq!(f.logical_qubits(), vec![0, 1, 2]);
        f.roles.insert(1, QubitRole::Mediator);
        assert_eq!(f.logical_qubits(), vec![0, 2]);
    }
}
