use std::collections::BTreeSet;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinlogic::gadget::{builtin_catalogue, lookup, verify_gadget, Gadget, GateFn};
use spinlogic::polynomial::{ket_label, parse_bool_poly};
use spinlogic::reduction::{reduce_poly, reduce_sigma_product, ReductionTrace, SigmaVariant};
use spinlogic::spectrum::{enumerate, restrict};
use spinlogic::synthesis::{synthesize, SynthesisProblem};
use spinlogic::{BooleanPoly, Convention, Monomial, Rational, SpinPoly};

type Q = Rational;

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// Logical projection of a gadget's ground space.
fn logical_ground(g: &Gadget<Q>) -> BTreeSet<String> {
    let n = g.num_slots();
    let slots = g.logical_slots();
    enumerate(&g.penalty)
        .unwrap()
        .ground_space
        .iter()
        .map(|&i| {
            slots
                .iter()
                .map(|&s| if (i >> (n - 1 - s)) & 1 == 1 { '1' } else { '0' })
                .collect()
        })
        .collect()
}

#[test]
fn catalogue_relations_match_gate_functions() {
    for g in builtin_catalogue::<Q>() {
        let f: GateFn = g.name.parse().unwrap();
        let want: BTreeSet<String> = (0..8u64)
            .filter(|&r| f.relation()[r as usize])
            .map(|r| ket_label(r, 3))
            .collect();
        assert_eq!(logical_ground(&g), want, "{}", g.name);
        assert!(verify_gadget(&g).pass, "{}", g.name);
    }
}

#[test]
fn polarity_coherence() {
    for f in GateFn::ALL {
        for i in 0..2 {
            let direct = lookup::<Q>(f.negate_input(i));
            let negated = lookup::<Q>(f).penalty.negate_var(i).unwrap();
            if matches!(f, GateFn::Xor | GateFn::Eqv) {
                // the mediator may settle differently; the logical span agrees
                let mut g = lookup::<Q>(f);
                g.penalty = negated;
                assert_eq!(logical_ground(&g), logical_ground(&direct), "{} input {i}", f.name());
            } else {
                assert_eq!(negated, direct.penalty, "{} input {i}", f.name());
            }
        }
    }
}

#[test]
fn equality_and_inequality_couplers() {
    for conv in [Convention::OneMinusTwoX, Convention::TwoXMinusOne] {
        for (sign, equal) in [(-1, true), (1, false)] {
            let h = SpinPoly::from_terms(
                2,
                conv,
                [(Monomial::one(), Q::new(1, 2)), (Monomial::pair(0, 1), Q::new(sign, 2))],
            )
            .unwrap();
            let r = enumerate(&h).unwrap();
            let want: Vec<u64> = if equal { vec![0, 3] } else { vec![1, 2] };
            assert_eq!(r.ground_space, want, "{conv} sign {sign}");
            assert_eq!(r.gap(), Some(q(1)));
        }
    }
}

#[test]
fn resynthesis_closure() {
    for g in builtin_catalogue::<Q>() {
        let f: GateFn = g.name.parse().unwrap();
        let p = SynthesisProblem::<Q>::new(f.relation(), g.num_mediators());
        let s = synthesize(&p).unwrap();
        let made = s.gadget().unwrap_or_else(|| panic!("{} not resynthesized", g.name));
        assert_eq!(logical_ground(made), logical_ground(&g), "{}", g.name);
        if g.num_mediators() == 0 {
            assert_eq!(
                enumerate(&made.penalty).unwrap().ground_space,
                enumerate(&g.penalty).unwrap().ground_space
            );
        }
    }
}

/// Value each non-mediator fresh qubit should take, from its trace entry.
fn intended(t: &ReductionTrace<Q>, logical: u64) -> Vec<(usize, bool)> {
    let k = t.num_logical;
    let bit = |name: &str| -> bool {
        let v: usize = name.trim_start_matches('x').parse().unwrap();
        (logical >> (k - 1 - v)) & 1 == 1
    };
    t.fresh
        .iter()
        .filter(|f| f.role != "mediator")
        .map(|f| {
            let v = match f.role.as_str() {
                "and" => f.computes.split('*').all(bit),
                "parity" => f.computes.split('^').filter(|x| bit(x)).count() % 2 == 1,
                other => panic!("unexpected role {other}"),
            };
            (f.qubit, v)
        })
        .collect()
}

/// Exhaustive check of mediator following and the wrong-ancilla gap.
fn check_reduction(t: &ReductionTrace<Q>, target: &[Q], margin: Q) {
    let n = t.num_qubits();
    assert!(n <= 16, "{n} qubits");
    let r = enumerate(&t.reduced).unwrap();
    let land = restrict(&r, &t.logical()).unwrap();
    assert_eq!(land.mins(), target);
    for idx in 0..1u64 << n {
        let logical = idx >> (n - t.num_logical);
        let right = intended(t, logical)
            .iter()
            .all(|&(qb, v)| ((idx >> (n - 1 - qb)) & 1 == 1) == v);
        let e = r.energies[idx as usize];
        let floor = land.entries[logical as usize].min;
        if right {
            assert!(e >= floor);
        } else {
            assert!(
                e - floor >= margin,
                "state {} energy {e}, floor {floor}",
                ket_label(idx, n)
            );
        }
    }
    for (l, entry) in land.entries.iter().enumerate() {
        let want = intended(t, l as u64);
        let hit = entry.argmin.iter().any(|&anc| {
            let full = land.full_index(l as u64, anc);
            want.iter().all(|&(qb, v)| ((full >> (n - 1 - qb)) & 1 == 1) == v)
        });
        assert!(hit, "logical {l}: minimum not at intended ancillas");
    }
}

#[test]
fn and_reductions_follow_and_keep_the_gap() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let n = rng.gen_range(3..=6usize);
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let k = rng.gen_range(1..=n.min(5));
            let mut vars: Vec<usize> = (0..n).collect();
            for i in 0..k {
                let j = rng.gen_range(i..n);
                vars.swap(i, j);
            }
            vars.truncate(k);
            terms.push((Monomial::new(vars), Q::new(rng.gen_range(-6..=6), rng.gen_range(1..=3))));
        }
        let p = BooleanPoly::from_terms(n, terms).unwrap();
        let jmax = p
            .terms()
            .filter(|(m, _)| m.degree() >= 3)
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or(q(0));
        let delta = jmax * q(2) + Q::new(rng.gen_range(1..=4), 2);
        let t = reduce_poly(&p, &delta).unwrap();
        let want_fresh: usize = p.terms().map(|(m, _)| m.degree().saturating_sub(2)).sum();
        assert_eq!(t.fresh.len(), want_fresh);
        if t.num_qubits() <= 16 {
            check_reduction(&t, &p.to_truth_vector().unwrap(), delta - q(2) * jmax);
        }
    }
}

#[test]
fn parity_reductions_follow_and_keep_the_gap() {
    for k in 3..=5usize {
        for j in [q(1), Q::new(-3, 2)] {
            let delta = j.abs() * q(2) + Q::new(1, 2);
            let t = reduce_sigma_product(k, &j, &delta, SigmaVariant::ParityChain, None).unwrap();
            assert_eq!(t.num_qubits(), 3 * k - 2);
            let target: Vec<Q> = (0..1u64 << k)
                .map(|a| if a.count_ones() % 2 == 0 { j } else { -j })
                .collect();
            check_reduction(&t, &target, delta - q(2) * j.abs());
        }
    }
}

#[test]
fn floating_point_scalars_follow_the_exact_path() {
    let exact: BooleanPoly<Q> = parse_bool_poly("3*x2 + x0*x1 - 2*x0*x2 - 2*x1*x2 + 1/4*x0*x1*x2", None).unwrap();
    let float: BooleanPoly<f64> = parse_bool_poly("3*x2 + x0*x1 - 2*x0*x2 - 2*x1*x2 + 0.25*x0*x1*x2", None).unwrap();
    let a = enumerate(&exact).unwrap();
    let b = enumerate(&float.to_spin(Convention::OneMinusTwoX)).unwrap();
    for (x, y) in a.energies.iter().zip(&b.energies) {
        assert!((*x.numer() as f64 / *x.denom() as f64 - y).abs() < 1e-12);
    }
    assert_eq!(a.ground_space, b.ground_space);
}
