//! Exact synthesis of degree-two penalty gadgets for a Boolean relation,
//! with Farkas certificates when no gadget exists.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gadget::{verify_gadget, Gadget, Role};
use crate::lp::{Cmp, LinearProgram, LpOutcome};
use crate::polynomial::{BooleanPoly, Monomial};
use crate::scalar::Scalar;

/// Largest `logical + mediator` variable count accepted.
pub const SYNTHESIS_MAX_VARS: usize = 6;

/// Largest number of mediator pinning patterns explored.
pub const SYNTHESIS_MAX_PATTERNS: usize = 1 << 16;

const CHUNK: usize = 64;

/// `1, x_i, x_i x_j (i < j)` over `n` variables.
pub fn feasibility_basis(n: usize) -> Result<Vec<Monomial>> {
    if n > SYNTHESIS_MAX_VARS {
        return Err(Error::Resource {
            what: "synthesis variables",
            requested: n,
            cap: SYNTHESIS_MAX_VARS,
        });
    }
    let mut out = vec![Monomial::one()];
    out.extend((0..n).map(Monomial::var));
    for i in 0..n {
        for j in i + 1..n {
            out.push(Monomial::pair(i, j));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Objective {
    /// Minimise the largest coefficient magnitude, then the sum of magnitudes.
    #[default]
    MaxCoefficient,
    /// Minimise the sum of coefficient magnitudes.
    SumCoefficients,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisProblem<S> {
    /// Truth table over the logical variables, variable 0 most significant.
    pub relation: Vec<bool>,
    pub mediators: usize,
    pub gap: S,
    pub objective: Objective,
    /// Roles of the logical slots; defaults to inputs with the last slot as
    /// output.
    pub roles: Option<Vec<Role>>,
}

impl<S: Scalar> SynthesisProblem<S> {
    pub fn new(relation: Vec<bool>, mediators: usize) -> Self {
        SynthesisProblem {
            relation,
            mediators,
            gap: S::one(),
            objective: Objective::default(),
            roles: None,
        }
    }

    pub fn with_gap(mut self, gap: S) -> Self {
        self.gap = gap;
        self
    }

    pub fn num_logical(&self) -> usize {
        self.relation.len().trailing_zeros() as usize
    }

    fn validate(&self) -> Result<()> {
        if self.relation.is_empty() || !self.relation.len().is_power_of_two() {
            return Err(Error::Shape(format!(
                "relation length {} is not a power of two",
                self.relation.len()
            )));
        }
        let n = self.num_logical() + self.mediators;
        if n > SYNTHESIS_MAX_VARS {
            return Err(Error::Resource {
                what: "synthesis variables",
                requested: n,
                cap: SYNTHESIS_MAX_VARS,
            });
        }
        if !self.gap.is_positive() {
            return Err(Error::Domain("gap must be positive".into()));
        }
        if !self.relation.iter().any(|&b| b) {
            return Err(Error::Precondition("relation has no satisfying row".into()));
        }
        if let Some(r) = &self.roles {
            if r.len() != self.num_logical() || r.contains(&Role::Mediator) {
                return Err(Error::Domain(
                    "roles must name each logical slot as input or output".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Farkas multipliers proving that one pinning pattern admits no gadget.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternCertificate {
    /// Mediator completion pinned to zero energy, per satisfying row.
    pub pattern: Vec<u64>,
    /// `(full assignment, y)` with non-zero `y`. Summing `y * E(assignment)`
    /// cancels every coefficient while the bounds sum to a positive value.
    pub multipliers: Vec<(u64, BigRational)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibilityCertificate {
    pub satisfying_rows: Vec<u64>,
    pub patterns: Vec<PatternCertificate>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SynthesisResult<S> {
    Feasible {
        gadget: Gadget<S>,
        /// Index of the winning pattern in lexicographic order.
        branch: usize,
        pattern: Vec<u64>,
    },
    Infeasible(InfeasibilityCertificate),
}

impl<S> SynthesisResult<S> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SynthesisResult::Feasible { .. })
    }

    pub fn gadget(&self) -> Option<&Gadget<S>> {
        match self {
            SynthesisResult::Feasible { gadget, .. } => Some(gadget),
            SynthesisResult::Infeasible(_) => None,
        }
    }
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowKind {
    Pinned,
    Free,
    Violating,
}

struct Setup {
    n: usize,
    mediators: usize,
    basis: Vec<Monomial>,
    satisfying: Vec<u64>,
    relation: Vec<bool>,
    gap: BigRational,
}

impl Setup {
    fn patterns(&self) -> Result<usize> {
        let per_row = 1usize << self.mediators;
        let mut total: usize = 1;
        for _ in &self.satisfying {
            total = total
                .checked_mul(per_row)
                .filter(|&t| t <= SYNTHESIS_MAX_PATTERNS)
                .ok_or(Error::Resource {
                    what: "mediator patterns",
                    requested: usize::MAX,
                    cap: SYNTHESIS_MAX_PATTERNS,
                })?;
        }
        Ok(total)
    }

    fn pattern(&self, branch: usize) -> Vec<u64> {
        let per_row = 1usize << self.mediators;
        let r = self.satisfying.len();
        (0..r)
            .map(|k| ((branch / per_row.pow((r - 1 - k) as u32)) % per_row) as u64)
            .collect()
    }

    fn kinds(&self, pattern: &[u64]) -> Vec<RowKind> {
        let m = self.mediators;
        (0..1u64 << self.n)
            .map(|a| {
                let logical = a >> m;
                if !self.relation[logical as usize] {
                    return RowKind::Violating;
                }
                let k = self
                    .satisfying
                    .iter()
                    .position(|&s| s == logical)
                    .expect("satisfying row");
                if a & ((1 << m) - 1) == pattern[k] {
                    RowKind::Pinned
                } else {
                    RowKind::Free
                }
            })
            .collect()
    }

    fn features(&self, a: u64) -> Vec<BigRational> {
        let mask = |m: &Monomial| m.mask(self.n);
        self.basis
            .iter()
            .map(|m| if a & mask(m) == mask(m) { big(1) } else { big(0) })
            .collect()
    }

    /// Rows `E(a) (=|>=) bound` over the coefficient variables, padded with
    /// `extra` zero columns.
    fn energy_rows(&self, lp: &mut LinearProgram, kinds: &[RowKind], extra: usize) {
        for (a, kind) in kinds.iter().enumerate() {
            let mut row = self.features(a as u64);
            row.extend(std::iter::repeat_n(big(0), extra));
            match kind {
                RowKind::Pinned => lp.add(row, Cmp::Eq, big(0)),
                RowKind::Free => lp.add(row, Cmp::Ge, big(0)),
                RowKind::Violating => lp.add(row, Cmp::Ge, self.gap.clone()),
            }
        }
    }

    /// Minimal largest-coefficient solution for a pattern, if any.
    fn solve_max(&self, kinds: &[RowKind]) -> Option<(Vec<BigRational>, BigRational)> {
        let k = self.basis.len();
        let mut lp = LinearProgram::new(k + 1);
        self.energy_rows(&mut lp, kinds, 1);
        for j in 0..k {
            for sign in [1, -1] {
                let mut row = vec![big(0); k + 1];
                row[j] = big(sign);
                row[k] = big(1);
                lp.add(row, Cmp::Ge, big(0));
            }
        }
        let mut obj = vec![big(0); k + 1];
        obj[k] = big(1);
        match lp.minimize(&obj) {
            LpOutcome::Optimal { x, value } => Some((x[..k].to_vec(), value)),
            _ => None,
        }
    }

    /// Minimal sum of magnitudes, optionally with every magnitude `<= cap`.
    fn solve_sum(&self, kinds: &[RowKind], cap: Option<&BigRational>) -> Option<Vec<BigRational>> {
        let k = self.basis.len();
        let mut lp = LinearProgram::new(2 * k);
        self.energy_rows(&mut lp, kinds, k);
        for j in 0..k {
            for sign in [1, -1] {
                let mut row = vec![big(0); 2 * k];
                row[j] = big(sign);
                row[k + j] = big(1);
                lp.add(row, Cmp::Ge, big(0));
            }
            if let Some(c) = cap {
                let mut row = vec![big(0); 2 * k];
                row[k + j] = big(1);
                lp.add(row, Cmp::Le, c.clone());
            }
        }
        let mut obj = vec![big(0); 2 * k];
        for o in obj.iter_mut().skip(k) {
            *o = big(1);
        }
        match lp.minimize(&obj) {
            LpOutcome::Optimal { x, .. } => Some(x[..k].to_vec()),
            _ => None,
        }
    }

    fn feasible(&self, kinds: &[RowKind]) -> bool {
        let k = self.basis.len();
        let mut lp = LinearProgram::new(k);
        self.energy_rows(&mut lp, kinds, 0);
        !matches!(lp.minimize(&vec![big(0); k]), LpOutcome::Infeasible)
    }

    fn farkas(&self, pattern: Vec<u64>, kinds: &[RowKind]) -> PatternCertificate {
        let rows = kinds.len();
        let k = self.basis.len();
        let mut lp = LinearProgram::new(rows);
        for (a, kind) in kinds.iter().enumerate() {
            if *kind != RowKind::Pinned {
                lp.set_nonneg(a);
            }
        }
        let features: Vec<Vec<BigRational>> = (0..rows as u64).map(|a| self.features(a)).collect();
        for j in 0..k {
            let row = features.iter().map(|f| f[j].clone()).collect();
            lp.add(row, Cmp::Eq, big(0));
        }
        let bound_row = kinds
            .iter()
            .map(|kind| {
                if *kind == RowKind::Violating {
                    self.gap.clone()
                } else {
                    big(0)
                }
            })
            .collect();
        lp.add(bound_row, Cmp::Eq, big(1));
        let obj = kinds
            .iter()
            .map(|kind| if *kind == RowKind::Pinned { big(0) } else { big(1) })
            .collect::<Vec<_>>();
        let y = match lp.minimize(&obj) {
            LpOutcome::Optimal { x, .. } => x,
            other => unreachable!("infeasible primal must admit a Farkas certificate, got {other:?}"),
        };
        PatternCertificate {
            pattern,
            multipliers: y
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(a, v)| (a as u64, v))
                .collect(),
        }
    }
}

fn setup<S: Scalar>(p: &SynthesisProblem<S>) -> Result<Setup> {
    p.validate()?;
    let n = p.num_logical() + p.mediators;
    Ok(Setup {
        n,
        mediators: p.mediators,
        basis: feasibility_basis(n)?,
        satisfying: (0..p.relation.len() as u64)
            .filter(|&r| p.relation[r as usize])
            .collect(),
        relation: p.relation.clone(),
        gap: p
            .gap
            .to_big_rational()
            .ok_or_else(|| Error::Conversion(format!("gap {} is not finite", p.gap)))?,
    })
}

/// Finds a degree-two penalty whose zero-energy space spans the satisfying
/// rows (over some mediator completion) and that charges at least the gap on
/// every violating assignment; otherwise certifies that none exists.
pub fn synthesize<S: Scalar>(p: &SynthesisProblem<S>) -> Result<SynthesisResult<S>> {
    let s = setup(p)?;
    let total = s.patterns()?;

    let mut winner = None;
    let mut start = 0;
    while start < total && winner.is_none() {
        let end = (start + CHUNK).min(total);
        winner = (start..end)
            .into_par_iter()
            .filter(|&b| s.feasible(&s.kinds(&s.pattern(b))))
            .min();
        start = end;
    }

    let Some(branch) = winner else {
        let patterns = (0..total)
            .into_par_iter()
            .map(|b| {
                let pattern = s.pattern(b);
                let kinds = s.kinds(&pattern);
                s.farkas(pattern, &kinds)
            })
            .collect();
        return Ok(SynthesisResult::Infeasible(InfeasibilityCertificate {
            satisfying_rows: s.satisfying.clone(),
            patterns,
        }));
    };

    let pattern = s.pattern(branch);
    let kinds = s.kinds(&pattern);
    let coeffs = match p.objective {
        Objective::MaxCoefficient => {
            let (_, cap) = s.solve_max(&kinds).expect("feasible branch");
            s.solve_sum(&kinds, Some(&cap))
        }
        Objective::SumCoefficients => s.solve_sum(&kinds, None),
    }
    .expect("feasible branch");

    let terms = s
        .basis
        .iter()
        .zip(&coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| {
            S::from_big_rational(c)
                .map(|v| (m.clone(), v))
                .ok_or_else(|| Error::Conversion(format!("coefficient {c} does not fit the scalar type")))
        })
        .collect::<Result<Vec<_>>>()?;
    let penalty = BooleanPoly::from_terms(s.n, terms)?;

    let l = p.num_logical();
    let mut roles = p.roles.clone().unwrap_or_else(|| {
        let mut r = vec![Role::Input; l];
        r[l - 1] = Role::Output;
        r
    });
    roles.extend(std::iter::repeat_n(Role::Mediator, p.mediators));
    let mut names: Vec<String> = (0..l).map(|i| format!("x{i}")).collect();
    names.extend((0..p.mediators).map(|j| format!("m{j}")));
    let gadget = Gadget::new("synthesized", names, roles, penalty, p.gap.clone(), p.relation.clone())?;

    let report = verify_gadget(&gadget);
    if !report.pass {
        return Err(Error::Domain(format!(
            "synthesized gadget failed verification: {}",
            report.failures.join("; ")
        )));
    }
    Ok(SynthesisResult::Feasible {
        gadget,
        branch,
        pattern,
    })
}

impl InfeasibilityCertificate {
    /// Re-checks every pattern by direct arithmetic, independent of the LP.
    pub fn verify<S: Scalar>(&self, p: &SynthesisProblem<S>) -> Result<bool> {
        let s = setup(p)?;
        let total = s.patterns()?;
        if self.satisfying_rows != s.satisfying || self.patterns.len() != total {
            return Ok(false);
        }
        for (b, cert) in self.patterns.iter().enumerate() {
            if cert.pattern != s.pattern(b) {
                return Ok(false);
            }
            let kinds = s.kinds(&cert.pattern);
            let mut combo = vec![big(0); s.basis.len()];
            let mut bound = big(0);
            for (a, y) in &cert.multipliers {
                let Some(kind) = kinds.get(*a as usize) else {
                    return Ok(false);
                };
                if *kind != RowKind::Pinned && y.is_negative() {
                    return Ok(false);
                }
                for (c, f) in combo.iter_mut().zip(s.features(*a)) {
                    *c += y * f;
                }
                if *kind == RowKind::Violating {
                    bound += y * &s.gap;
                }
            }
            if !combo.iter().all(Zero::is_zero) || !bound.is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Human-readable certificate: one line per pattern listing the multipliers.
pub fn format_certificate(cert: &InfeasibilityCertificate, num_vars: usize, mediators: usize) -> String {
    let mut out = String::new();
    let rows: Vec<String> = cert
        .satisfying_rows
        .iter()
        .map(|r| crate::polynomial::ket_label(*r, num_vars - mediators))
        .collect();
    out.push_str(&format!("satisfying rows: {}\n", rows.join(" ")));
    for c in &cert.patterns {
        let pat: Vec<String> = c
            .pattern
            .iter()
            .map(|m| crate::polynomial::ket_label(*m, mediators))
            .collect();
        let mut sum = String::new();
        for (i, (a, y)) in c.multipliers.iter().enumerate() {
            let e = format!("E({})", crate::polynomial::ket_label(*a, num_vars));
            let mag = y.abs();
            let term = if mag.is_one() { e } else { format!("{mag}*{e}") };
            match (i, y.is_negative()) {
                (0, false) => sum.push_str(&term),
                (0, true) => sum.push_str(&format!("-{term}")),
                (_, false) => sum.push_str(&format!(" + {term}")),
                (_, true) => sum.push_str(&format!(" - {term}")),
            }
        }
        let label = if mediators == 0 { "-".to_string() } else { pat.join(",") };
        out.push_str(&format!("pattern [{label}]: {sum}\n"));
    }
    out
}

impl PatternCertificate {
    pub fn is_trivial(&self) -> bool {
        self.multipliers.is_empty() || self.multipliers.iter().all(|(_, y)| y.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::GateFn;
    use crate::spectrum::enumerate;
    use num_rational::Rational64 as Q;

    #[test]
    fn basis_sizes() {
        assert_eq!(feasibility_basis(1).unwrap().len(), 2);
        assert_eq!(feasibility_basis(3).unwrap().len(), 7);
        assert_eq!(feasibility_basis(4).unwrap().len(), 11);
        assert!(feasibility_basis(7).is_err());
        let names: Vec<String> = feasibility_basis(3).unwrap().iter().map(|m| m.to_string()).collect();
        assert_eq!(names, vec!["1", "x0", "x1", "x2", "x0*x1", "x0*x2", "x1*x2"]);
    }

    #[test]
    fn and_is_feasible_without_mediators() {
        let p = SynthesisProblem::<Q>::new(GateFn::And.relation(), 0);
        let r = synthesize(&p).unwrap();
        let g = r.gadget().expect("feasible");
        let ground = enumerate(&g.penalty).unwrap();
        assert_eq!(ground.ground_kets(), vec!["000", "010", "100", "111"]);
    }

    #[test]
    fn xor_needs_a_mediator() {
        let p = SynthesisProblem::<Q>::new(GateFn::Xor.relation(), 0);
        match synthesize(&p).unwrap() {
            SynthesisResult::Infeasible(cert) => {
                assert_eq!(cert.patterns.len(), 1);
                assert!(cert.verify(&p).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let p1 = SynthesisProblem::<Q>::new(GateFn::Xor.relation(), 1);
        let r = synthesize(&p1).unwrap();
        let g = r.gadget().expect("feasible with one mediator");
        assert!(verify_gadget(g).achieved_gap.unwrap() >= Q::from_integer(1));
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let p = SynthesisProblem::<Q>::new(GateFn::Eqv.relation(), 0);
        let SynthesisResult::Infeasible(mut cert) = synthesize(&p).unwrap() else {
            panic!("EQV without mediators must be infeasible");
        };
        cert.patterns[0].multipliers[0].1 += big(1);
        assert!(!cert.verify(&p).unwrap());
    }

    #[test]
    fn problem_validation() {
        assert!(synthesize(&SynthesisProblem::<Q>::new(vec![true; 3], 0)).is_err());
        assert!(synthesize(&SynthesisProblem::<Q>::new(vec![false; 4], 0)).is_err());
        assert!(synthesize(&SynthesisProblem::<Q>::new(vec![true; 16], 3)).is_err());
        let p = SynthesisProblem::<Q>::new(GateFn::And.relation(), 0).with_gap(Q::from_integer(0));
        assert!(synthesize(&p).is_err());
    }

    #[test]
    fn larger_gap_scales() {
        let p = SynthesisProblem::<Q>::new(GateFn::Or.relation(), 0).with_gap(Q::new(5, 2));
        let g = synthesize(&p).unwrap().gadget().cloned().unwrap();
        assert!(verify_gadget(&g).achieved_gap.unwrap() >= Q::new(5, 2));
    }
}
