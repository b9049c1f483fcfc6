//! Lowering circuits to penalty Hamiltonians, clamping and gap checks.

use std::fmt;
use std::str::FromStr;

use super::netlist::Circuit;
use crate::error::{Error, Result};
use crate::gadget::{lookup, GateFn};
use crate::model_file::{ModelFile, QubitRole};
use crate::polynomial::{BooleanPoly, Convention, Monomial, SpinModel, SpinPoly};
use crate::scalar::Scalar;
use crate::spectrum::{check_projection_lemma, enumerate, enumerate_capped, ProjectionReport};

/// Largest model for which [`gap_check`] also runs the enumerated lemma check.
pub const LEMMA_CHECK_QUBITS: usize = 16;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Mode {
    /// Catalogue gadgets; degree at most two, XOR and EQV use a mediator.
    #[default]
    TwoLocal,
    /// One violation indicator per gate; degree up to three, no mediators.
    KLocal,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::TwoLocal => "2local",
            Mode::KLocal => "klocal",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2local" | "two_local" => Ok(Mode::TwoLocal),
            "klocal" | "k_local" => Ok(Mode::KLocal),
            other => Err(Error::Domain(format!(
                "unknown mode {other:?}; expected 2local or klocal"
            ))),
        }
    }
}

/// One gate's penalty as placed in the global model.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedGadget<S> {
    pub gate: usize,
    pub function: GateFn,
    /// Global qubits: arguments, output, then mediators.
    pub qubits: Vec<usize>,
    pub penalty: BooleanPoly<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppliedClamp<S> {
    pub wire: String,
    pub qubit: usize,
    pub value: bool,
    pub weight: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledModel<S> {
    pub mode: Mode,
    pub delta: S,
    /// Sum of gadget penalties.
    pub prop: BooleanPoly<S>,
    /// Sum of clamp projectors.
    pub clamp_poly: BooleanPoly<S>,
    pub clamps: Vec<AppliedClamp<S>>,
    pub roles: Vec<QubitRole>,
    pub wire_map: Vec<(String, usize)>,
    pub placements: Vec<PlacedGadget<S>>,
}

impl<S: Scalar> CompiledModel<S> {
    pub fn num_qubits(&self) -> usize {
        self.roles.len()
    }

    pub fn hamiltonian(&self) -> BooleanPoly<S> {
        &self.prop + &self.clamp_poly
    }

    pub fn qubit(&self, wire: &str) -> Option<usize> {
        self.wire_map.iter().find(|(w, _)| w == wire).map(|(_, q)| *q)
    }

    pub fn qubits_with(&self, role: QubitRole) -> Vec<usize> {
        (0..self.roles.len()).filter(|&q| self.roles[q] == role).collect()
    }

    /// Every qubit that is not a mediator, ascending.
    pub fn logical_qubits(&self) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&q| self.roles[q] != QubitRole::Mediator)
            .collect()
    }

    /// `sum of clamp weights`, an upper bound on the clamp norm.
    pub fn clamp_norm_bound(&self) -> S {
        self.clamps.iter().fold(S::zero(), |acc, c| acc + c.weight.clone())
    }

    pub fn spin_poly(&self, conv: Convention) -> SpinPoly<S> {
        self.hamiltonian().to_spin(conv)
    }

    /// Degree-two spin model; fails for cubic k-local models.
    pub fn spin_model(&self, conv: Convention) -> Result<SpinModel<S>> {
        self.hamiltonian().to_spin_model(conv)
    }

    pub fn to_model_file(&self, conv: Convention) -> ModelFile<S> {
        let mut f = ModelFile::new(self.spin_poly(conv));
        f.roles = self.roles.iter().copied().enumerate().collect();
        f.wires = self.wire_map.clone();
        f.delta = Some(self.delta.clone());
        f
    }
}

/// Places `p` by renaming local variable `v` to `map[v]`; variables absent
/// from `p` need no target.
fn place<S: Scalar>(p: &BooleanPoly<S>, map: &[Option<usize>], n: usize, scale: &S) -> Result<BooleanPoly<S>> {
    let terms = p
        .terms()
        .map(|(m, c)| {
            let vars = m
                .vars()
                .iter()
                .map(|&v| map[v].ok_or_else(|| Error::Wire(format!("gadget slot {v} has no qubit"))))
                .collect::<Result<Vec<_>>>()?;
            Ok((Monomial::new(vars), c.clone() * scale.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    BooleanPoly::from_terms(n, terms)
}

/// `f + z - 2 f z` over slots `(x1, x2, z)`: 1 exactly when `z != f(x1, x2)`.
fn violation_indicator<S: Scalar>(f: GateFn) -> BooleanPoly<S> {
    let tv: Vec<S> = (0..4)
        .map(|r| {
            if f.eval(r & 2 != 0, r & 1 != 0) {
                S::one()
            } else {
                S::zero()
            }
        })
        .collect();
    let fp = BooleanPoly::from_truth_vector(&tv)
        .expect("length four")
        .with_num_vars(3)
        .expect("widening");
    let z = BooleanPoly::var(3, 2).expect("slot in range");
    let two = BooleanPoly::constant(3, S::two());
    &(&fp + &z) - &(&two * &(&fp * &z))
}

/// Default gap: twice the total clamp weight plus one.
pub fn default_delta<S: Scalar>(c: &Circuit<S>) -> S {
    let total = c.clamps.iter().fold(S::zero(), |acc, cl| acc + cl.weight.clone());
    S::two() * total + S::one()
}

/// Lowers `c` to a penalty Hamiltonian whose zero-energy space is spanned by
/// the consistent executions, then applies the circuit's clamps. Every
/// penalty is normalised so that wrong states cost at least `delta`.
pub fn compile<S: Scalar>(c: &Circuit<S>, delta: Option<S>, mode: Mode) -> Result<CompiledModel<S>> {
    let delta = delta.unwrap_or_else(|| default_delta(c));
    if !delta.is_positive() {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let mut wire_map: Vec<(String, usize)> = Vec::new();
    let mut roles = Vec::new();
    for w in &c.inputs {
        wire_map.push((w.clone(), roles.len()));
        roles.push(QubitRole::Input);
    }
    for g in &c.gates {
        wire_map.push((g.out.clone(), roles.len()));
        let role = if c.outputs.contains(&g.out) {
            QubitRole::Output
        } else {
            QubitRole::Intermediate
        };
        roles.push(role);
    }
    let qubit_of = |w: &str| {
        wire_map
            .iter()
            .find(|(n, _)| n == w)
            .map(|(_, q)| *q)
            .expect("validated wire")
    };

    // Mediators follow all wires, in gate order.
    let mut mediators: Vec<Vec<usize>> = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        let count = match mode {
            Mode::TwoLocal => lookup::<S>(g.function()).num_mediators(),
            Mode::KLocal => 0,
        };
        let start = roles.len();
        roles.extend(std::iter::repeat_n(QubitRole::Mediator, count));
        mediators.push((start..start + count).collect());
    }
    let n = roles.len();

    let mut prop = BooleanPoly::zero(n);
    let mut placements = Vec::with_capacity(c.gates.len());
    for (gi, g) in c.gates.iter().enumerate() {
        let f = g.function();
        let args: Vec<usize> = g.args.iter().map(|a| qubit_of(&a.wire)).collect();
        let out = qubit_of(&g.out);
        let mut map = vec![Some(args[0]), args.get(1).copied(), Some(out)];
        map.extend(mediators[gi].iter().map(|&q| Some(q)));
        let (local, scale) = match mode {
            Mode::TwoLocal => {
                let gadget = lookup::<S>(f);
                let scale = delta.clone() / gadget.gap.clone();
                (gadget.penalty, scale)
            }
            Mode::KLocal => (violation_indicator::<S>(f), delta.clone()),
        };
        let penalty = place(&local, &map, n, &scale)?;
        prop = &prop + &penalty;
        placements.push(PlacedGadget {
            gate: gi,
            function: f,
            qubits: map.into_iter().flatten().collect(),
            penalty,
        });
    }

    let mut model = CompiledModel {
        mode,
        delta,
        prop,
        clamp_poly: BooleanPoly::zero(n),
        clamps: Vec::new(),
        roles,
        wire_map,
        placements,
    };
    for cl in &c.clamps {
        model = clamp(&model, &cl.wire, cl.value, cl.weight.clone())?;
    }
    Ok(model)
}

/// Adds `weight * |1-v><1-v|` on the wire's qubit, penalising `wire != v`.
pub fn clamp<S: Scalar>(m: &CompiledModel<S>, wire: &str, value: bool, weight: S) -> Result<CompiledModel<S>> {
    let q = m
        .qubit(wire)
        .ok_or_else(|| Error::Wire(format!("clamp on unknown wire {wire}")))?;
    if !weight.is_positive() {
        return Err(Error::Domain("clamp weight must be positive".into()));
    }
    let n = m.num_qubits();
    let x = BooleanPoly::var(n, q)?;
    let projector = if value {
        &BooleanPoly::constant(n, S::one()) - &x
    } else {
        x
    };
    let mut out = m.clone();
    out.clamp_poly = &out.clamp_poly + &projector.scale(&weight);
    out.clamps.push(AppliedClamp {
        wire: wire.to_string(),
        qubit: q,
        value,
        weight,
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport<S> {
    pub delta: S,
    /// Sum of clamp weights.
    pub clamp_norm_bound: S,
    /// Largest clamp energy over all assignments.
    pub clamp_norm_exact: S,
    /// `delta - 2 * clamp_norm_bound`.
    pub margin: S,
    /// Set when `delta <= 2 * clamp_norm_bound`.
    pub flagged: bool,
    /// Enumerated lemma check, for clamped models of at most
    /// [`LEMMA_CHECK_QUBITS`] qubits.
    pub lemma: Option<ProjectionReport<S>>,
}

/// Compares the gap against the clamp norm and, at desk scale, checks that
/// clamping selects the minimum of the clamp energy over the ground space.
pub fn gap_check<S: Scalar>(m: &CompiledModel<S>) -> Result<GapReport<S>> {
    let bound = m.clamp_norm_bound();
    // Clamps are 1-local, so the maximum splits per qubit.
    let mut per_qubit: std::collections::BTreeMap<usize, (S, S)> = Default::default();
    for c in &m.clamps {
        let e = per_qubit.entry(c.qubit).or_insert((S::zero(), S::zero()));
        if c.value {
            e.0 = e.0.clone() + c.weight.clone();
        } else {
            e.1 = e.1.clone() + c.weight.clone();
        }
    }
    let exact = per_qubit
        .into_values()
        .fold(S::zero(), |acc, (a, b)| acc + if a > b { a } else { b });
    let margin = m.delta.clone() - S::two() * bound.clone();
    let lemma = if !m.clamps.is_empty() && m.num_qubits() <= LEMMA_CHECK_QUBITS {
        let ground = enumerate(&m.prop)?;
        let zero_space: Vec<u64> = if ground.ground_energy.is_zero() {
            ground.ground_space.clone()
        } else {
            Vec::new()
        };
        if zero_space.is_empty() {
            None
        } else {
            Some(check_projection_lemma(&m.clamp_poly, &m.prop, &zero_space)?)
        }
    } else {
        None
    };
    Ok(GapReport {
        delta: m.delta.clone(),
        flagged: !margin.is_positive(),
        clamp_norm_bound: bound,
        clamp_norm_exact: exact,
        margin,
        lemma,
    })
}

/// Enumerated comparison of the propagation ground space with the circuit's
/// truth table.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingCheck<S> {
    pub ground_energy: S,
    /// First excited energy minus ground energy.
    pub gap: Option<S>,
    /// Number of ground states, mediators included.
    pub ground_states: usize,
    /// Correct wire assignments, one per input assignment, as indices over
    /// the non-mediator qubits.
    pub expected: Vec<u64>,
    pub missing: Vec<u64>,
    pub unexpected: Vec<u64>,
    pub pass: bool,
}

/// Checks that the zero-energy ground space of `m.prop`, with mediators
/// projected out, is exactly the set of consistent wire assignments, and
/// that every other state costs at least `delta`.
pub fn check_embedding<S: Scalar>(c: &Circuit<S>, m: &CompiledModel<S>, cap: usize) -> Result<EmbeddingCheck<S>> {
    let n = m.num_qubits();
    let report = enumerate_capped(&m.prop, cap)?;
    let visible: Vec<usize> = (0..n).filter(|&q| m.roles[q] != QubitRole::Mediator).collect();
    let project = |idx: u64| -> u64 {
        visible
            .iter()
            .fold(0u64, |acc, &q| (acc << 1) | ((idx >> (n - 1 - q)) & 1))
    };
    let k = c.inputs.len();
    let mut expected = Vec::with_capacity(1 << k);
    for a in 0..1u64 << k {
        let ins: Vec<bool> = (0..k).map(|i| (a >> (k - 1 - i)) & 1 == 1).collect();
        let values = c.execute(&ins)?;
        let mut full = 0u64;
        for (wire, q) in &m.wire_map {
            if values[wire] {
                full |= 1 << (n - 1 - q);
            }
        }
        expected.push(project(full));
    }
    expected.sort_unstable();
    expected.dedup();
    let mut got: Vec<u64> = report.ground_space.iter().map(|&i| project(i)).collect();
    got.sort_unstable();
    got.dedup();
    let missing: Vec<u64> = expected
        .iter()
        .copied()
        .filter(|e| got.binary_search(e).is_err())
        .collect();
    let unexpected: Vec<u64> = got
        .iter()
        .copied()
        .filter(|g| expected.binary_search(g).is_err())
        .collect();
    let gap = report.gap();
    let pass = report.ground_energy.is_zero()
        && missing.is_empty()
        && unexpected.is_empty()
        && gap.as_ref().is_none_or(|g| *g >= m.delta);
    Ok(EmbeddingCheck {
        ground_energy: report.ground_energy.clone(),
        gap,
        ground_states: report.ground_space.len(),
        expected,
        missing,
        unexpected,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::restrict;
    use num_rational::Rational64 as Q;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    const E1: &str = "input x1 x2 x3\ngate AND x1 x2 -> y\ngate OR y x3 -> z\noutput z\n";

    #[test]
    fn e1_ground_space_is_the_truth_table() {
        let c = Circuit::<Q>::parse(E1).unwrap();
        let m = compile(&c, Some(q(1)), Mode::TwoLocal).unwrap();
        assert_eq!(m.num_qubits(), 5);
        assert_eq!(m.qubit("y"), Some(3));
        assert_eq!(m.qubit("z"), Some(4));
        let r = enumerate(&m.hamiltonian()).unwrap();
        assert_eq!(r.ground_energy, q(0));
        assert_eq!(r.ground_space.len(), 8);
        for idx in &r.ground_space {
            let bits: Vec<bool> = (0..5).map(|i| (idx >> (4 - i)) & 1 == 1).collect();
            let v = c.execute(&bits[..3]).unwrap();
            assert_eq!((bits[3], bits[4]), (v["y"], v["z"]));
        }
        assert_eq!(m.roles[3], QubitRole::Intermediate);
        assert_eq!(m.roles[4], QubitRole::Output);
        assert!(m.spin_model(Convention::OneMinusTwoX).is_ok());
    }

    #[test]
    fn embedding_check_both_modes() {
        let c = Circuit::<Q>::parse("input a b c\ngate XOR a b -> d\ngate NAND d !c -> e\noutput e\n").unwrap();
        for mode in [Mode::TwoLocal, Mode::KLocal] {
            let m = compile(&c, Some(q(2)), mode).unwrap();
            let chk = check_embedding(&c, &m, 20).unwrap();
            assert!(chk.pass, "{mode:?}: {chk:?}");
            assert_eq!(chk.expected.len(), 8);
        }
        // a gadget scaled below its own gap is caught
        let mut m = compile(&c, Some(q(2)), Mode::TwoLocal).unwrap();
        m.prop = m.prop.scale(&Q::new(1, 4));
        assert!(!check_embedding(&c, &m, 20).unwrap().pass);
    }

    #[test]
    fn empty_circuit_and_single_xor() {
        let m = compile(&Circuit::<Q>::parse("input a\n").unwrap(), None, Mode::TwoLocal).unwrap();
        assert_eq!(m.num_qubits(), 1);
        assert!(m.hamiltonian().is_zero());
        let m = compile(
            &Circuit::<Q>::parse("input a b\ngate XOR a b -> c\n").unwrap(),
            Some(q(1)),
            Mode::TwoLocal,
        )
        .unwrap();
        assert_eq!(m.num_qubits(), 4);
        assert_eq!(m.roles[3], QubitRole::Mediator);
        let r = enumerate(&m.hamiltonian()).unwrap();
        assert_eq!(r.ground_kets(), vec!["0000", "0111", "1011", "1101"]);
        assert_eq!(r.gap(), Some(q(1)));
    }

    #[test]
    fn klocal_mode_has_no_mediators() {
        let c = Circuit::<Q>::parse("input a b\ngate XOR a b -> c\ngate AND !c b -> d\n").unwrap();
        let m = compile(&c, Some(q(2)), Mode::KLocal).unwrap();
        assert_eq!(m.num_qubits(), 4);
        assert_eq!(m.hamiltonian().degree(), 3);
        assert!(m.spin_model(Convention::OneMinusTwoX).is_err());
        let r = enumerate(&m.hamiltonian()).unwrap();
        assert_eq!(r.ground_space.len(), 4);
        assert_eq!(r.gap(), Some(q(2)));
    }

    #[test]
    fn clamps_select_rows() {
        let c = Circuit::<Q>::parse(E1).unwrap();
        let m = compile(&c, Some(q(3)), Mode::TwoLocal).unwrap();
        let m = clamp(&m, "z", true, q(1)).unwrap();
        let r = enumerate(&m.hamiltonian()).unwrap();
        assert_eq!(r.ground_space.len(), 5);
        assert!(clamp(&m, "nope", true, q(1)).is_err());
        let rep = gap_check(&m).unwrap();
        assert!(!rep.flagged);
        assert!(rep.lemma.unwrap().equality_holds);
    }

    #[test]
    fn gap_check_flags_small_delta() {
        let c = Circuit::<Q>::parse("input a b c\nclamp a 1\nclamp b 0\nclamp c 1\n").unwrap();
        let m = compile(&c, Some(q(1)), Mode::TwoLocal).unwrap();
        let rep = gap_check(&m).unwrap();
        assert!(rep.flagged);
        assert_eq!(rep.clamp_norm_bound, q(3));
        assert_eq!(rep.margin, q(-5));
        let unclamped = compile(&Circuit::<Q>::parse(E1).unwrap(), None, Mode::TwoLocal).unwrap();
        let rep = gap_check(&unclamped).unwrap();
        assert!(!rep.flagged);
        assert!(rep.lemma.is_none());
    }

    #[test]
    fn conflicting_clamps_norm() {
        let c = Circuit::<Q>::parse("input a\nclamp a 1\nclamp a 0 2\n").unwrap();
        let m = compile(&c, None, Mode::TwoLocal).unwrap();
        assert_eq!(m.delta, q(7));
        let rep = gap_check(&m).unwrap();
        assert_eq!(rep.clamp_norm_exact, q(2));
        assert_eq!(rep.clamp_norm_bound, q(3));
        let e = enumerate(&m.clamp_poly).unwrap();
        assert_eq!(e.energies.iter().max().cloned(), Some(rep.clamp_norm_exact));
    }

    #[test]
    fn mediator_restriction_reproduces_xor_relation() {
        let m = compile(
            &Circuit::<Q>::parse("input a b\ngate EQV a b -> c\n").unwrap(),
            Some(q(1)),
            Mode::TwoLocal,
        )
        .unwrap();
        let land = restrict(&enumerate(&m.hamiltonian()).unwrap(), &m.logical_qubits()).unwrap();
        let zeros: Vec<usize> = (0..8).filter(|&i| land.entries[i].min == q(0)).collect();
        assert_eq!(zeros, vec![0b001, 0b010, 0b100, 0b111]);
    }
}
