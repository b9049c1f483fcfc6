//! Three-local couplings realised with two-local terms and mediators.

use super::Role;
use crate::error::{Error, Result};
use crate::polynomial::{parse_bool_poly, BooleanPoly, Convention, Monomial, SpinModel};
use crate::scalar::Scalar;

/// A penalty that pins a mediator plus a two-local coupling on it, standing
/// in for a higher-degree target monomial on the logical slots.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingGadget<S> {
    pub name: String,
    pub slot_names: Vec<String>,
    pub roles: Vec<Role>,
    /// Unit-gap penalty forcing the mediator.
    pub penalty: BooleanPoly<S>,
    /// Degree-two monomial carrying the coupling strength.
    pub coupling: Monomial,
    /// Monomial over the logical slots that the coupling reproduces.
    pub target: Monomial,
}

impl<S: Scalar> CouplingGadget<S> {
    pub fn num_slots(&self) -> usize {
        self.roles.len()
    }

    pub fn logical_slots(&self) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&i| self.roles[i] != Role::Mediator)
            .collect()
    }

    /// `delta * penalty + j * coupling`. Requires `|j| <= delta` so the
    /// minimum over the mediator equals `j * target`.
    pub fn hamiltonian(&self, j: &S, delta: &S) -> Result<BooleanPoly<S>> {
        if j.abs() > *delta {
            return Err(Error::GapCondition(format!(
                "|J| = {} exceeds delta = {delta}",
                j.abs()
            )));
        }
        Ok(self.hamiltonian_unchecked(j, delta))
    }

    pub fn hamiltonian_unchecked(&self, j: &S, delta: &S) -> BooleanPoly<S> {
        let mut h = self.penalty.scale(delta);
        h.add_term_unchecked(self.coupling.clone(), j.clone());
        h
    }
}

/// `H_and(x1, x2, z) + J z x3` over slots `x1, x2, x3, z`.
pub fn threelocal_and_gadget<S: Scalar>() -> CouplingGadget<S> {
    CouplingGadget {
        name: "AND3".into(),
        slot_names: ["x1", "x2", "x3", "z"].iter().map(|s| s.to_string()).collect(),
        roles: vec![Role::Input, Role::Input, Role::Input, Role::Mediator],
        penalty: parse_bool_poly("3*x3 + x0*x1 - 2*x0*x3 - 2*x1*x3", Some(4)).expect("fixed text"),
        coupling: Monomial::pair(2, 3),
        target: Monomial::new([0, 1, 2]),
    }
}

/// Five-qubit spin gadget for `J s0 s1 s2` with mediators on qubits 3 and 4,
/// in the `s = 1 - 2x` convention. Requires `delta > 2|J|`.
pub fn threelocal_sigma_gadget<S: Scalar>(j: &S, delta: &S) -> Result<SpinModel<S>> {
    let (model, in_regime) = threelocal_sigma_gadget_unchecked(j, delta);
    if !in_regime {
        return Err(Error::GapCondition(format!(
            "delta = {delta} must exceed 2|J| = {}",
            S::two() * j.abs()
        )));
    }
    Ok(model)
}

/// As [`threelocal_sigma_gadget`], returning the model even outside the gap
/// regime together with a flag telling whether `delta > 2|J|`.
pub fn threelocal_sigma_gadget_unchecked<S: Scalar>(j: &S, delta: &S) -> (SpinModel<S>, bool) {
    let half = delta.clone() * S::half();
    let mut m = SpinModel::new(5, Convention::OneMinusTwoX);
    // (delta/2)(4 + s1 s2 + (s1 + s2) s3 + 2(1 - s1 - s2 - s3) s4 - s1 - s2 - s3)
    m.offset = S::two() * delta.clone();
    for i in 1..=3 {
        m.add_linear(i, -half.clone()).expect("qubit in range");
    }
    m.add_linear(4, delta.clone()).expect("qubit in range");
    for (a, b) in [(1, 2), (1, 3), (2, 3)] {
        m.add_coupling(a, b, half.clone()).expect("distinct qubits");
    }
    for a in 1..=3 {
        m.add_coupling(a, 4, -delta.clone()).expect("distinct qubits");
    }
    m.add_coupling(0, 3, j.clone()).expect("distinct qubits");
    let in_regime = *delta > S::two() * j.abs();
    (m, in_regime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{enumerate, restrict};
    use num_rational::Rational64 as Q;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn and3_landscape() {
        let g = threelocal_and_gadget::<Q>();
        let h = g.hamiltonian(&q(1), &q(1)).unwrap();
        assert_eq!(h.eval_index(0b1111), q(1));
        assert_eq!(h.eval_index(0), q(0));
        let half = Q::new(1, 2);
        let h = g.hamiltonian(&half, &q(1)).unwrap();
        // mediator disagreeing with x1 AND x2
        for idx in [0b0001u64, 0b0101, 0b1001, 0b1100, 0b1110] {
            assert!(h.eval_index(idx) >= q(1) - half, "{idx:04b}");
        }
        let land = restrict(&enumerate(&h).unwrap(), &g.logical_slots()).unwrap();
        let mut want = vec![q(0); 8];
        want[7] = half;
        assert_eq!(land.mins(), want);
        assert!(g.hamiltonian(&q(2), &q(1)).is_err());
    }

    #[test]
    fn sigma_gadget_spectrum() {
        let m = threelocal_sigma_gadget(&q(1), &q(3)).unwrap();
        let r = enumerate(&m).unwrap();
        let land = restrict(&r, &[0, 1, 2]).unwrap();
        let walsh: Vec<Q> = [1, -1, -1, 1, -1, 1, 1, -1].into_iter().map(q).collect();
        assert_eq!(land.mins(), walsh);
        assert!(r.ground_kets().contains(&"11101".to_string()));
    }

    #[test]
    fn sigma_gadget_zero_coupling_and_gap_condition() {
        let m = threelocal_sigma_gadget(&q(0), &q(1)).unwrap();
        let land = restrict(&enumerate(&m).unwrap(), &[0, 1, 2]).unwrap();
        assert_eq!(land.mins(), vec![q(0); 8]);
        assert!(matches!(
            threelocal_sigma_gadget(&q(1), &q(2)),
            Err(Error::GapCondition(_))
        ));
        let (_, ok) = threelocal_sigma_gadget_unchecked(&q(1), &q(2));
        assert!(!ok);
    }
}
