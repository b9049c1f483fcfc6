//! k-local to 2-local reductions: AND-chain quadratization, parity chains for
//! spin products, and multi-level spectrum embedding.

use std::collections::BTreeSet;

use crate::circuit::{compile, Arg, Circuit, GateOp, Mode};
use crate::error::{Error, Result};
use crate::gadget::{lookup, threelocal_sigma_gadget, GateFn};
use crate::kmap::sop_cover;
use crate::model_file::{ModelFile, QubitRole};
use crate::polynomial::{BooleanPoly, Convention, Monomial};
use crate::scalar::{max_of, Scalar};
use crate::spectrum::{restrict_poly, RestrictedLandscape};

/// What a reduction started from.
#[derive(Debug, Clone, PartialEq)]
pub enum Original<S> {
    Poly(BooleanPoly<S>),
    /// `J s_0 s_1 ... s_{k-1}` in the `s = 1 - 2x` convention.
    SigmaProduct {
        k: usize,
        j: S,
    },
    Levels(LevelSpec<S>),
}

/// Provenance of one introduced qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreshQubit {
    pub qubit: usize,
    /// `and`, `parity`, `mediator`, `eqv`, `indicator` or `term`.
    pub role: String,
    /// Index of the source term or level.
    pub term: usize,
    /// Position along the chain that built it, starting at 1.
    pub depth: usize,
    /// The Boolean function of the logical variables the qubit follows.
    pub computes: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTrace<S> {
    pub original: Original<S>,
    /// Degree-two polynomial over logical then fresh qubits.
    pub reduced: BooleanPoly<S>,
    pub num_logical: usize,
    pub fresh: Vec<FreshQubit>,
    pub delta: S,
}

impl<S: Scalar> ReductionTrace<S> {
    pub fn num_qubits(&self) -> usize {
        self.reduced.num_vars()
    }

    pub fn logical(&self) -> Vec<usize> {
        (0..self.num_logical).collect()
    }

    pub fn roles(&self) -> Vec<QubitRole> {
        (0..self.num_qubits())
            .map(|q| {
                if q < self.num_logical {
                    QubitRole::Logical
                } else {
                    QubitRole::Mediator
                }
            })
            .collect()
    }

    /// Minimum energy over fresh qubits for each logical assignment.
    pub fn restricted(&self) -> Result<RestrictedLandscape<S>> {
        restrict_poly(&self.reduced, &self.logical())
    }

    pub fn to_model_file(&self, conv: Convention) -> ModelFile<S> {
        let mut f = ModelFile::from_bool(&self.reduced, conv);
        f.roles = self.roles().into_iter().enumerate().collect();
        f.delta = Some(self.delta.clone());
        f
    }

    /// Trace text: one `fresh` line per introduced qubit.
    pub fn to_trace_text(&self) -> String {
        let mut out = String::new();
        let kind = match &self.original {
            Original::Poly(p) => format!("poly {p}"),
            Original::SigmaProduct { k, j } => format!("sigma_product k={k} J={}", j.to_text()),
            Original::Levels(l) => format!("levels {}", l.levels.len()),
        };
        out.push_str(&format!("source {kind}\n"));
        out.push_str(&format!("delta {}\n", self.delta.to_text()));
        out.push_str(&format!("logical {}\n", self.num_logical));
        out.push_str(&format!("qubits {}\n", self.num_qubits()));
        for f in &self.fresh {
            out.push_str(&format!(
                "fresh {} role {} term {} depth {} computes {}\n",
                f.qubit, f.role, f.term, f.depth, f.computes
            ));
        }
        out
    }
}

/// Reads the `fresh` lines of a trace file.
pub fn parse_trace_fresh(text: &str) -> Result<Vec<FreshQubit>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first() != Some(&"fresh") {
            continue;
        }
        let bad = || Error::parse(i + 1, "expected `fresh Q role R term T depth D computes F`");
        if toks.len() != 10 || toks[2] != "role" || toks[4] != "term" || toks[6] != "depth" || toks[8] != "computes" {
            return Err(bad());
        }
        out.push(FreshQubit {
            qubit: toks[1].parse().map_err(|_| bad())?,
            role: toks[3].to_string(),
            term: toks[5].parse().map_err(|_| bad())?,
            depth: toks[7].parse().map_err(|_| bad())?,
            computes: toks[9].to_string(),
        });
    }
    Ok(out)
}

fn var_name(v: usize) -> String {
    format!("x{v}")
}

struct Builder<S> {
    next: usize,
    terms: Vec<(Monomial, S)>,
    fresh: Vec<FreshQubit>,
}

impl<S: Scalar> Builder<S> {
    fn new(first_fresh: usize) -> Self {
        Builder {
            next: first_fresh,
            terms: Vec::new(),
            fresh: Vec::new(),
        }
    }

    fn alloc(&mut self, role: &str, term: usize, depth: usize, computes: String) -> usize {
        let q = self.next;
        self.next += 1;
        self.fresh.push(FreshQubit {
            qubit: q,
            role: role.to_string(),
            term,
            depth,
            computes,
        });
        q
    }

    fn add_gadget(&mut self, f: GateFn, slots: &[usize], delta: &S) {
        let g = lookup::<S>(f);
        let scale = delta.clone() / g.gap.clone();
        for (m, c) in g.penalty.terms() {
            self.terms.push((m.map_vars(|v| slots[v]), c.clone() * scale.clone()));
        }
    }

    /// `j * prod(vars)` as an AND chain; returns nothing, records fresh qubits.
    fn and_term(&mut self, vars: &[usize], j: &S, term: usize, delta: &S) {
        let k = vars.len();
        let mut acc = vars[0];
        let mut label = var_name(vars[0]);
        for (d, &v) in vars[1..k - 1].iter().enumerate() {
            label = format!("{label}*{}", var_name(v));
            let z = self.alloc("and", term, d + 1, label.clone());
            self.add_gadget(GateFn::And, &[acc, v, z], delta);
            acc = z;
        }
        self.terms.push((Monomial::pair(acc, vars[k - 1]), j.clone()));
    }

    fn finish(self, n: usize) -> Result<BooleanPoly<S>> {
        BooleanPoly::from_terms(n, self.terms)
    }
}

fn require_and_gap<S: Scalar>(j: &S, delta: &S) -> Result<()> {
    if !delta.is_positive() {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    if j.abs() > *delta {
        return Err(Error::GapCondition(format!(
            "|J| = {} exceeds delta = {delta}",
            j.abs()
        )));
    }
    Ok(())
}

/// Replaces `j * prod(vars)` (at least three variables) by a chain of
/// `k - 2` AND gadgets and one final two-local product. Requires
/// `|j| <= delta`.
pub fn reduce_and_term<S: Scalar>(vars: &[usize], j: &S, delta: &S) -> Result<ReductionTrace<S>> {
    let m = Monomial::new(vars.iter().copied());
    if m.degree() != vars.len() {
        return Err(Error::Domain("repeated variable in product".into()));
    }
    if vars.len() < 3 {
        return Err(Error::Precondition(format!(
            "AND-term reduction needs k >= 3, got {}",
            vars.len()
        )));
    }
    require_and_gap(j, delta)?;
    let n = m.max_var().expect("non-empty") + 1;
    let mut b = Builder::new(n);
    b.and_term(vars, j, 0, delta);
    let total = b.next;
    let fresh = std::mem::take(&mut b.fresh);
    let reduced = b.finish(total)?;
    let mut original = BooleanPoly::zero(n);
    original.add_term_unchecked(m, j.clone());
    Ok(ReductionTrace {
        original: Original::Poly(original),
        reduced,
        num_logical: n,
        fresh,
        delta: delta.clone(),
    })
}

/// Reduces every term of degree three or more independently; lower-degree
/// terms pass through. Requires `|J_t| <= delta` for each reduced term.
pub fn reduce_poly<S: Scalar>(p: &BooleanPoly<S>, delta: &S) -> Result<ReductionTrace<S>> {
    let n = p.num_vars();
    let mut b = Builder::new(n);
    for (t, (m, c)) in p.terms().filter(|(m, _)| m.degree() >= 3).enumerate() {
        require_and_gap(c, delta).map_err(|e| match e {
            Error::GapCondition(msg) => Error::GapCondition(format!("term {m}: {msg}")),
            other => other,
        })?;
        b.and_term(m.vars(), c, t, delta);
    }
    for (m, c) in p.terms().filter(|(m, _)| m.degree() < 3) {
        b.terms.push((m.clone(), c.clone()));
    }
    if !delta.is_positive() {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let total = b.next;
    let fresh = std::mem::take(&mut b.fresh);
    Ok(ReductionTrace {
        original: Original::Poly(p.clone()),
        reduced: b.finish(total)?,
        num_logical: n,
        fresh,
        delta: delta.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaVariant {
    /// The five-qubit two-mediator gadget; `k = 3` only.
    TwoMediatorK3,
    /// XOR chain onto an output qubit plus a one-local field.
    ParityChain,
}

impl std::str::FromStr for SigmaVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two_mediator_k3" | "two-mediator" => Ok(SigmaVariant::TwoMediatorK3),
            "parity_chain" | "parity" => Ok(SigmaVariant::ParityChain),
            other => Err(Error::Domain(format!("unknown variant {other:?}"))),
        }
    }
}

/// Emulates `J s_0 ... s_{k-1}` (`s = 1 - 2x`) with two-local terms, plus an
/// optional diagonal shift `y` of degree at most two over the logical qubits.
/// Requires `delta > 2|J|`.
///
/// The parity chain allocates the output `z` at qubit `k`, the chain's
/// intermediate outputs next and the XOR mediators last.
pub fn reduce_sigma_product<S: Scalar>(
    k: usize,
    j: &S,
    delta: &S,
    variant: SigmaVariant,
    y: Option<&BooleanPoly<S>>,
) -> Result<ReductionTrace<S>> {
    if k < 3 {
        return Err(Error::Precondition(format!(
            "spin-product reduction needs k >= 3, got {k}"
        )));
    }
    if *delta <= S::two() * j.abs() {
        return Err(Error::GapCondition(format!(
            "delta = {delta} must exceed 2|J| = {}",
            S::two() * j.abs()
        )));
    }
    if let Some(y) = y {
        if y.degree() > 2 {
            return Err(Error::DegreeTooHigh {
                degree: y.degree(),
                max: 2,
            });
        }
        if y.num_vars() > k {
            return Err(Error::Dimension {
                expected: k,
                found: y.num_vars(),
            });
        }
    }
    let (mut reduced, fresh) = match variant {
        SigmaVariant::TwoMediatorK3 => {
            if k != 3 {
                return Err(Error::Domain(format!("two_mediator_k3 handles k = 3, got {k}")));
            }
            let model = threelocal_sigma_gadget(j, delta)?;
            let fresh = vec![
                FreshQubit {
                    qubit: 3,
                    role: "eqv".into(),
                    term: 0,
                    depth: 1,
                    computes: "x1^x2^1".into(),
                },
                FreshQubit {
                    qubit: 4,
                    role: "mediator".into(),
                    term: 0,
                    depth: 1,
                    computes: "-".into(),
                },
            ];
            (model.to_bool(), fresh)
        }
        SigmaVariant::ParityChain => {
            let mut b = Builder::new(k);
            let z = b.alloc("parity", 0, k - 1, (0..k).map(var_name).collect::<Vec<_>>().join("^"));
            let mut outs = Vec::with_capacity(k - 1);
            let mut label = var_name(0);
            for d in 1..k - 1 {
                label = format!("{label}^{}", var_name(d));
                outs.push(b.alloc("parity", 0, d, label.clone()));
            }
            outs.push(z);
            let mut acc = 0;
            let mut meds = Vec::with_capacity(k - 1);
            for d in 1..k {
                meds.push(b.alloc("mediator", 0, d, "-".into()));
            }
            for d in 1..k {
                let out = outs[d - 1];
                b.add_gadget(GateFn::Xor, &[acc, d, out, meds[d - 1]], delta);
                acc = out;
            }
            // J (|0><0| - |1><1|) on z = J (1 - 2z)
            b.terms.push((Monomial::one(), j.clone()));
            b.terms.push((Monomial::var(z), -(S::two() * j.clone())));
            let total = b.next;
            let fresh = std::mem::take(&mut b.fresh);
            (b.finish(total)?, fresh)
        }
    };
    if let Some(y) = y {
        reduced = &reduced + &y.with_num_vars(reduced.num_vars())?;
    }
    Ok(ReductionTrace {
        original: Original::SigmaProduct { k, j: j.clone() },
        reduced,
        num_logical: k,
        fresh,
        delta: delta.clone(),
    })
}

/// Target spectrum: level `levels[i]` on the assignments `subspaces[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpec<S> {
    pub num_vars: usize,
    pub levels: Vec<S>,
    pub subspaces: Vec<Vec<u64>>,
}

impl<S: Scalar> LevelSpec<S> {
    /// Groups a full diagonal energy table into levels.
    pub fn from_energies(energies: &[S]) -> Result<Self> {
        let n = energies.len().trailing_zeros() as usize;
        if energies.len() != 1 << n {
            return Err(Error::Shape(format!(
                "{} energies is not a power of two",
                energies.len()
            )));
        }
        let mut levels: Vec<S> = Vec::new();
        for e in energies {
            if !levels.contains(e) {
                levels.push(e.clone());
            }
        }
        levels.sort_by(|a, b| a.partial_cmp(b).expect("comparable levels"));
        let subspaces = levels
            .iter()
            .map(|l| {
                (0..energies.len() as u64)
                    .filter(|&i| energies[i as usize] == *l)
                    .collect()
            })
            .collect();
        Ok(LevelSpec {
            num_vars: n,
            levels,
            subspaces,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.len() != self.subspaces.len() || self.levels.is_empty() {
            return Err(Error::Shape("one subspace per level is required".into()));
        }
        if self.num_vars > crate::kmap::MAX_KMAP_VARS {
            return Err(Error::Resource {
                what: "level-embedding variables",
                requested: self.num_vars,
                cap: crate::kmap::MAX_KMAP_VARS,
            });
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("levels must be strictly increasing".into()));
        }
        let mut seen = BTreeSet::new();
        for s in &self.subspaces {
            if s.is_empty() {
                return Err(Error::Domain("empty subspace".into()));
            }
            for &a in s {
                if a >> self.num_vars != 0 {
                    return Err(Error::IndexOutOfRange {
                        index: a as usize,
                        bound: 1 << self.num_vars,
                    });
                }
                if !seen.insert(a) {
                    return Err(Error::Domain(format!("assignment {a} lies in two subspaces")));
                }
            }
        }
        if seen.len() != 1 << self.num_vars {
            return Err(Error::Domain("subspaces do not cover every assignment".into()));
        }
        Ok(())
    }

    /// Target energy of each assignment.
    pub fn energies(&self) -> Vec<S> {
        let mut out = vec![S::zero(); 1 << self.num_vars];
        for (l, s) in self.levels.iter().zip(&self.subspaces) {
            for &a in s {
                out[a as usize] = l.clone();
            }
        }
        out
    }
}

/// Builds a two-local Hamiltonian whose restricted landscape equals the
/// level map. Each level gets an indicator circuit (from a sum-of-products
/// cover) whose output `z_j` is 0 exactly on the level's subspace, and the
/// field `E_j (1 - z_j)`. Requires `delta > 2 max |E_j|`.
pub fn embed_levels<S: Scalar>(spec: &LevelSpec<S>, delta: &S) -> Result<ReductionTrace<S>> {
    spec.validate()?;
    let n = spec.num_vars;
    let emax = max_of(spec.levels.iter().map(|e| e.abs())).expect("non-empty");
    if *delta <= S::two() * emax.clone() {
        return Err(Error::GapCondition(format!(
            "delta = {delta} must exceed 2 max|E| = {}",
            S::two() * emax
        )));
    }
    if spec.levels.len() == 1 {
        return Ok(ReductionTrace {
            original: Original::Levels(spec.clone()),
            reduced: BooleanPoly::constant(n, spec.levels[0].clone()),
            num_logical: n,
            fresh: Vec::new(),
            delta: delta.clone(),
        });
    }

    let mut c = Circuit::<S>::new();
    for v in 0..n {
        c.add_input(&var_name(v))?;
    }
    let mut outputs = Vec::with_capacity(spec.levels.len());
    // level, gate-within-level for every gate output
    let mut provenance: Vec<(usize, usize, &'static str)> = Vec::new();
    for (lj, sub) in spec.subspaces.iter().enumerate() {
        let tv: Vec<bool> = (0..1u64 << n).map(|a| sub.contains(&a)).collect();
        let cover = sop_cover(&tv)?;
        let mut gate_no = 0;
        let mut gate =
            |c: &mut Circuit<S>, op: GateOp, args: &[String], out: String, role: &'static str| -> Result<()> {
                let refs: Vec<&str> = args.iter().map(String::as_str).collect();
                c.add_gate(op, &refs, &out)?;
                gate_no += 1;
                provenance.push((lj, gate_no, role));
                Ok(())
            };
        let lit = |a: &Arg| {
            if a.negated {
                format!("!{}", a.wire)
            } else {
                a.wire.clone()
            }
        };
        let mut term_wires = Vec::with_capacity(cover.len());
        for (ti, imp) in cover.iter().enumerate() {
            let lits: Vec<Arg> = imp
                .fixed
                .iter()
                .map(|(&v, &b)| Arg {
                    wire: var_name(v),
                    negated: !b,
                })
                .collect();
            let mut acc = lits[0].clone();
            for (d, l) in lits[1..].iter().enumerate() {
                let out = format!("l{lj}_t{ti}_{d}");
                gate(
                    &mut c,
                    GateOp::Two(GateFn::And),
                    &[lit(&acc), lit(l)],
                    out.clone(),
                    "term",
                )?;
                acc = Arg {
                    wire: out,
                    negated: false,
                };
            }
            term_wires.push(acc);
        }
        let z = format!("z{lj}");
        match term_wires.len() {
            1 => gate(&mut c, GateOp::Not, &[lit(&term_wires[0])], z.clone(), "indicator")?,
            r => {
                let mut acc = term_wires[0].clone();
                for (d, t) in term_wires[1..r - 1].iter().enumerate() {
                    let out = format!("l{lj}_or{d}");
                    gate(
                        &mut c,
                        GateOp::Two(GateFn::Or),
                        &[lit(&acc), lit(t)],
                        out.clone(),
                        "term",
                    )?;
                    acc = Arg {
                        wire: out,
                        negated: false,
                    };
                }
                gate(
                    &mut c,
                    GateOp::Two(GateFn::Nor),
                    &[lit(&acc), lit(&term_wires[r - 1])],
                    z.clone(),
                    "indicator",
                )?;
            }
        }
        outputs.push(z);
    }
    for z in &outputs {
        c.add_output(z)?;
    }
    let compiled = compile(&c, Some(delta.clone()), Mode::TwoLocal)?;
    let total = compiled.num_qubits();
    let mut reduced = compiled.prop.clone();
    for (lj, z) in outputs.iter().enumerate() {
        let q = compiled.qubit(z).expect("level output wire");
        let e = spec.levels[lj].clone();
        reduced.add_term_unchecked(Monomial::one(), e.clone());
        reduced.add_term_unchecked(Monomial::var(q), -e);
    }
    let fresh = compiled
        .wire_map
        .iter()
        .skip(n)
        .zip(&provenance)
        .map(|((wire, q), &(lj, d, role))| FreshQubit {
            qubit: *q,
            role: role.to_string(),
            term: lj,
            depth: d,
            computes: wire.clone(),
        })
        .collect::<Vec<_>>();
    debug_assert_eq!(fresh.len(), total - n);
    Ok(ReductionTrace {
        original: Original::Levels(spec.clone()),
        reduced,
        num_logical: n,
        fresh,
        delta: delta.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_bool_poly;
    use num_rational::Rational64 as Q;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    fn and_indicator(k: usize, j: Q) -> Vec<Q> {
        (0..1u64 << k)
            .map(|a| if a == (1 << k) - 1 { j } else { q(0) })
            .collect()
    }

    #[test]
    fn three_and_uses_one_fresh_qubit() {
        let t = reduce_and_term(&[0, 1, 2], &q(1), &q(1)).unwrap();
        assert_eq!(t.fresh.len(), 1);
        assert_eq!(t.num_qubits(), 4);
        assert!(t.reduced.degree() <= 2);
        assert_eq!(t.restricted().unwrap().mins(), and_indicator(3, q(1)));
    }

    #[test]
    fn and_chains_up_to_six() {
        for k in 3..=6 {
            for j in [Q::new(1, 2), Q::new(-1, 2)] {
                let vars: Vec<usize> = (0..k).collect();
                let t = reduce_and_term(&vars, &j, &q(1)).unwrap();
                assert_eq!(t.fresh.len(), k - 2);
                assert_eq!(t.restricted().unwrap().mins(), and_indicator(k, j));
            }
        }
        assert!(reduce_and_term(&[0, 1], &q(1), &q(1)).is_err());
        assert!(matches!(
            reduce_and_term(&[0, 1, 2], &q(2), &q(1)),
            Err(Error::GapCondition(_))
        ));
    }

    #[test]
    fn poly_reduction_counts() {
        let p: BooleanPoly<Q> = parse_bool_poly("x0*x1 + x2", None).unwrap();
        let t = reduce_poly(&p, &q(1)).unwrap();
        assert_eq!(t.reduced, p);
        assert!(t.fresh.is_empty());
        let p: BooleanPoly<Q> = parse_bool_poly("x0*x1*x2 + x1*x2*x3", None).unwrap();
        let t = reduce_poly(&p, &q(1)).unwrap();
        assert_eq!(t.fresh.len(), 2);
        let p: BooleanPoly<Q> = parse_bool_poly("x0*x1 + x2 - x0*x1*x2", None).unwrap();
        let t = reduce_poly(&p, &q(1)).unwrap();
        assert_eq!(t.fresh.len(), 1);
        assert_eq!(t.restricted().unwrap().mins(), p.to_truth_vector().unwrap());
    }

    #[test]
    fn sigma_products() {
        let walsh: Vec<Q> = [1, -1, -1, 1, -1, 1, 1, -1].into_iter().map(q).collect();
        let t = reduce_sigma_product(3, &q(1), &q(3), SigmaVariant::TwoMediatorK3, None).unwrap();
        assert_eq!(t.restricted().unwrap().mins(), walsh);
        let t = reduce_sigma_product(3, &q(1), &q(3), SigmaVariant::ParityChain, None).unwrap();
        assert_eq!(t.num_qubits(), 7);
        assert_eq!(t.fresh.len(), 4);
        assert_eq!(t.restricted().unwrap().mins(), walsh);
        let t = reduce_sigma_product(4, &q(1), &q(4), SigmaVariant::ParityChain, None).unwrap();
        let walsh4: Vec<Q> = (0..16u32)
            .map(|a| if a.count_ones() % 2 == 0 { q(1) } else { q(-1) })
            .collect();
        assert_eq!(t.restricted().unwrap().mins(), walsh4);
        assert!(reduce_sigma_product(4, &q(1), &q(4), SigmaVariant::TwoMediatorK3, None).is_err());
        assert!(matches!(
            reduce_sigma_product(3, &q(1), &q(2), SigmaVariant::ParityChain, None),
            Err(Error::GapCondition(_))
        ));
    }

    #[test]
    fn sigma_product_with_shift() {
        let y: BooleanPoly<Q> = parse_bool_poly("x0 - 2*x1*x2", Some(3)).unwrap();
        let t = reduce_sigma_product(3, &q(1), &q(3), SigmaVariant::ParityChain, Some(&y)).unwrap();
        let want: Vec<Q> = (0..8u64)
            .map(|a| {
                let s = if a.count_ones() % 2 == 0 { q(1) } else { q(-1) };
                s + y.eval_index(a)
            })
            .collect();
        assert_eq!(t.restricted().unwrap().mins(), want);
        let cubic: BooleanPoly<Q> = parse_bool_poly("x0*x1*x2", None).unwrap();
        assert!(reduce_sigma_product(3, &q(1), &q(3), SigmaVariant::ParityChain, Some(&cubic)).is_err());
    }

    #[test]
    fn parity_levels() {
        let energies: Vec<Q> = (0..8u32)
            .map(|a| if a.count_ones() % 2 == 0 { q(-1) } else { q(1) })
            .collect();
        let spec = LevelSpec::from_energies(&energies).unwrap();
        let t = embed_levels(&spec, &q(3)).unwrap();
        assert!(t.reduced.degree() <= 2);
        let land = t.restricted().unwrap();
        assert_eq!(land.offset_from(&energies), Some(q(0)));
    }

    #[test]
    fn single_level_is_constant() {
        let spec = LevelSpec::from_energies(&[q(2); 4]).unwrap();
        let t = embed_levels(&spec, &q(5)).unwrap();
        assert!(t.fresh.is_empty());
        assert_eq!(t.restricted().unwrap().mins(), vec![q(2); 4]);
    }

    #[test]
    fn level_spec_validation() {
        let bad = |levels: Vec<i64>, subs: Vec<Vec<u64>>| {
            LevelSpec {
                num_vars: 2,
                levels: levels.into_iter().map(q).collect(),
                subspaces: subs,
            }
            .validate()
            .is_err()
        };
        assert!(bad(vec![1, 0], vec![vec![0, 1], vec![2, 3]]));
        assert!(bad(vec![0, 1], vec![vec![0, 1], vec![1, 2, 3]]));
        assert!(bad(vec![0, 1], vec![vec![0, 1], vec![2]]));
        assert!(!bad(vec![0, 1], vec![vec![0, 1], vec![2, 3]]));
        let spec = LevelSpec::from_energies(&[q(0), q(1), q(2), q(3)]).unwrap();
        assert!(matches!(embed_levels(&spec, &q(6)), Err(Error::GapCondition(_))));
    }

    #[test]
    fn trace_text_round_trip() {
        let t = reduce_and_term(&[0, 1, 2, 3], &q(1), &q(1)).unwrap();
        let text = t.to_trace_text();
        assert!(text.contains("fresh 4 role and term 0 depth 1 computes x0*x1\n"));
        assert_eq!(parse_trace_fresh(&text).unwrap(), t.fresh);
    }
}
