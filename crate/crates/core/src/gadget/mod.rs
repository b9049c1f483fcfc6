//! Penalty gadgets: verified catalogue of two-input gates, three-local
//! couplings and exhaustive gadget verification.

mod catalogue;
mod threelocal;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::polynomial::{ket_label, BooleanPoly, Convention, SpinPoly, ENUMERATION_CAP};
use crate::scalar::{min_of, Scalar};

pub use catalogue::{
    builtin_catalogue, embedded_catalogue, lookup, parse_catalogue, write_catalogue, GateFn, CATALOGUE_V1,
    CATALOGUE_VERSION,
};
pub use threelocal::{
    threelocal_and_gadget, threelocal_sigma_gadget, threelocal_sigma_gadget_unchecked, CouplingGadget,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Input,
    Output,
    Mediator,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::Output => "output",
            Role::Mediator => "mediator",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "input" => Ok(Role::Input),
            "output" => Ok(Role::Output),
            "mediator" => Ok(Role::Mediator),
            other => Err(Error::Domain(format!("unknown slot role {other:?}"))),
        }
    }
}

/// A penalty polynomial over local slots whose zero-energy space spans the
/// satisfying rows of `relation`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gadget<S> {
    pub name: String,
    pub slot_names: Vec<String>,
    pub roles: Vec<Role>,
    pub penalty: BooleanPoly<S>,
    /// Promised minimum energy on violating rows.
    pub gap: S,
    /// Truth table over the non-mediator slots, in slot order.
    pub relation: Vec<bool>,
}

impl<S: Scalar> Gadget<S> {
    pub fn new(
        name: impl Into<String>,
        slot_names: Vec<String>,
        roles: Vec<Role>,
        penalty: BooleanPoly<S>,
        gap: S,
        relation: Vec<bool>,
    ) -> Result<Self> {
        let g = Gadget {
            name: name.into(),
            slot_names,
            roles,
            penalty,
            gap,
            relation,
        };
        let slots = g.roles.len();
        if g.slot_names.len() != slots || g.penalty.num_vars() != slots {
            return Err(Error::Dimension {
                expected: slots,
                found: g.penalty.num_vars().max(g.slot_names.len()),
            });
        }
        if g.relation.len() != 1 << g.logical_slots().len() {
            return Err(Error::Shape(format!(
                "relation of length {} for {} logical slots",
                g.relation.len(),
                g.logical_slots().len()
            )));
        }
        if !g.gap.is_positive() {
            return Err(Error::Domain("gadget gap must be positive".into()));
        }
        Ok(g)
    }

    pub fn num_slots(&self) -> usize {
        self.roles.len()
    }

    /// Slots that are not mediators, ascending.
    pub fn logical_slots(&self) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&i| self.roles[i] != Role::Mediator)
            .collect()
    }

    pub fn mediator_slots(&self) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&i| self.roles[i] == Role::Mediator)
            .collect()
    }

    pub fn num_mediators(&self) -> usize {
        self.mediator_slots().len()
    }

    pub fn spin_form(&self, conv: Convention) -> SpinPoly<S> {
        self.penalty.to_spin(conv)
    }

    /// Places slot `i` on qubit `slot_map[i]` of a `num_vars`-qubit system,
    /// multiplying the penalty by `scale`.
    pub fn instantiate_into(&self, slot_map: &[usize], num_vars: usize, scale: &S) -> Result<BooleanPoly<S>> {
        if slot_map.len() != self.num_slots() {
            return Err(Error::Dimension {
                expected: self.num_slots(),
                found: slot_map.len(),
            });
        }
        Ok(self.penalty.relabel(slot_map, num_vars)?.scale(scale))
    }
}

/// Relabels the penalty of `g` onto global qubits; the system size is the
/// largest target plus one.
pub fn instantiate<S: Scalar>(g: &Gadget<S>, slot_map: &[usize]) -> Result<BooleanPoly<S>> {
    let n = slot_map.iter().max().map_or(0, |m| m + 1);
    g.instantiate_into(slot_map, n, &S::one())
}

/// Per-logical-row outcome of [`verify_gadget`].
#[derive(Debug, Clone, PartialEq)]
pub struct RowReport<S> {
    /// Canonical index over the logical slots.
    pub logical: u64,
    pub satisfying: bool,
    /// Minimum over mediator completions.
    pub min_energy: S,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GadgetReport<S> {
    /// Full assignments of minimum energy, ascending.
    pub ground_space: Vec<u64>,
    pub ground_energy: S,
    /// Minimum energy over every violating full assignment.
    pub achieved_gap: Option<S>,
    pub rows: Vec<RowReport<S>>,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl<S: Scalar> GadgetReport<S> {
    pub fn ground_kets(&self, num_slots: usize) -> Vec<String> {
        self.ground_space.iter().map(|&i| ket_label(i, num_slots)).collect()
    }
}

/// Exhaustively checks the three gadget invariants. Failures are reported,
/// not raised.
pub fn verify_gadget<S: Scalar>(g: &Gadget<S>) -> GadgetReport<S> {
    let n = g.num_slots();
    let mut failures = Vec::new();
    if n > ENUMERATION_CAP {
        failures.push(format!("{n} slots exceed the enumeration cap {ENUMERATION_CAP}"));
        return GadgetReport {
            ground_space: vec![],
            ground_energy: S::zero(),
            achieved_gap: None,
            rows: vec![],
            pass: false,
            failures,
        };
    }
    let logical = g.logical_slots();
    let l = logical.len();
    let energies: Vec<S> = (0..1u64 << n).map(|i| g.penalty.eval_index(i)).collect();
    let logical_of = |idx: u64| -> u64 {
        logical
            .iter()
            .fold(0u64, |acc, &q| (acc << 1) | ((idx >> (n - 1 - q)) & 1))
    };

    let ground_energy = min_of(energies.iter().cloned()).expect("non-empty");
    let ground_space: Vec<u64> = (0..1u64 << n)
        .filter(|&i| energies[i as usize] == ground_energy)
        .collect();
    if !ground_energy.is_zero() {
        failures.push(format!("ground energy is {ground_energy}, not 0"));
    }

    let mut row_min: Vec<Option<S>> = vec![None; 1 << l];
    for (i, e) in energies.iter().enumerate() {
        let r = logical_of(i as u64) as usize;
        if row_min[r].as_ref().is_none_or(|m| e < m) {
            row_min[r] = Some(e.clone());
        }
    }
    let achieved_gap = min_of(
        energies
            .iter()
            .enumerate()
            .filter(|(i, _)| !g.relation[logical_of(*i as u64) as usize])
            .map(|(_, e)| e.clone()),
    );
    let mut rows = Vec::with_capacity(1 << l);
    for (r, m) in row_min.into_iter().enumerate() {
        let min_energy = m.expect("every row has a completion");
        let satisfying = g.relation[r];
        let ok = if satisfying {
            min_energy.is_zero()
        } else {
            min_energy >= g.gap
        };
        if !ok {
            let label = ket_label(r as u64, l);
            if satisfying {
                failures.push(format!("satisfying row {label} has minimum energy {min_energy}, not 0"));
            } else {
                failures.push(format!(
                    "violating row {label} reaches energy {min_energy}, below gap {}",
                    g.gap
                ));
            }
        }
        rows.push(RowReport {
            logical: r as u64,
            satisfying,
            min_energy,
            ok,
        });
    }
    GadgetReport {
        pass: failures.is_empty(),
        ground_space,
        ground_energy,
        achieved_gap,
        rows,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::{parse_bool_poly, Monomial};
    use crate::spectrum::enumerate;
    use num_rational::Rational64 as Q;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn and_gadget_report() {
        let g: Gadget<Q> = lookup(GateFn::And);
        let r = verify_gadget(&g);
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.ground_kets(3), vec!["000", "010", "100", "111"]);
        assert_eq!(r.achieved_gap, Some(q(1)));
        let violating: Vec<Q> = (0..8u64)
            .filter(|&i| !g.relation[i as usize])
            .map(|i| g.penalty.eval_index(i))
            .collect();
        assert_eq!(violating, vec![q(3), q(1), q(1), q(1)]);
    }

    #[test]
    fn broken_and_gadget_fails() {
        let mut g: Gadget<Q> = lookup(GateFn::And);
        g.penalty = parse_bool_poly("x0*x1 - 2*x0*x2 - 2*x1*x2", Some(3)).unwrap();
        let r = verify_gadget(&g);
        assert!(!r.pass);
        assert!(!r.failures.is_empty());
    }

    #[test]
    fn instantiate_permutes_spectrum() {
        let g: Gadget<Q> = lookup(GateFn::And);
        let p = instantiate(&g, &[5, 9, 2]).unwrap();
        assert_eq!(p.num_vars(), 10);
        assert_eq!(p.coeff(&Monomial::var(2)), q(3));
        assert_eq!(p.coeff(&Monomial::pair(5, 9)), q(1));
        let mut a = enumerate(&p).unwrap().levels();
        let mut b = enumerate(&g.penalty).unwrap().levels();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(instantiate(&g, &[0, 1, 2]).unwrap(), g.penalty);
        assert!(matches!(instantiate(&g, &[1, 1, 2]), Err(Error::Aliasing(_))));
        assert!(instantiate(&g, &[1, 2]).is_err());
    }

    #[test]
    fn disjoint_instantiations_multiply_ground_spaces() {
        let and: Gadget<Q> = lookup(GateFn::And);
        let or: Gadget<Q> = lookup(GateFn::Or);
        let sum =
            and.instantiate_into(&[0, 1, 2], 6, &q(1)).unwrap() + or.instantiate_into(&[3, 4, 5], 6, &q(1)).unwrap();
        let ga = verify_gadget(&and).ground_space;
        let gb = verify_gadget(&or).ground_space;
        let mut product: Vec<u64> = ga.iter().flat_map(|a| gb.iter().map(move |b| (a << 3) | b)).collect();
        product.sort_unstable();
        assert_eq!(enumerate(&sum).unwrap().ground_space, product);
    }

    #[test]
    fn new_validates_shape() {
        let p = BooleanPoly::<Q>::zero(2);
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(Gadget::new(
            "x",
            names.clone(),
            vec![Role::Input, Role::Output],
            p.clone(),
            q(1),
            vec![true; 3]
        )
        .is_err());
        assert!(Gadget::new(
            "x",
            names.clone(),
            vec![Role::Input, Role::Output],
            p.clone(),
            q(0),
            vec![true; 4]
        )
        .is_err());
        assert!(Gadget::new("x", names, vec![Role::Input, Role::Mediator], p, q(1), vec![true; 2]).is_ok());
    }
}
