use num_traits::Signed;
use proptest::prelude::*;
use spinlogic::circuit::{check_embedding, clamp, compile, Circuit, Mode};
use spinlogic::gadget::{threelocal_sigma_gadget, GateFn};
use spinlogic::kmap::{eval_sop, gray_code, sop_cover};
use spinlogic::model_file::ModelFile;
use spinlogic::polynomial::{parse_bool_poly, parse_spin_poly};
use spinlogic::spectrum::{enumerate, restrict};
use spinlogic::{BooleanPoly, Convention, Monomial, Rational};

type Q = Rational;

fn ratio() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| Q::new(n, d))
}

fn poly(max_vars: usize, max_degree: usize) -> impl Strategy<Value = BooleanPoly<Q>> {
    (1..=max_vars).prop_flat_map(move |n| {
        let term = (proptest::collection::btree_set(0..n, 0..=max_degree.min(n)), ratio());
        proptest::collection::vec(term, 0..10).prop_map(move |ts| {
            BooleanPoly::from_terms(n, ts.into_iter().map(|(vs, c)| (Monomial::new(vs), c))).unwrap()
        })
    })
}

fn convention() -> impl Strategy<Value = Convention> {
    prop_oneof![Just(Convention::OneMinusTwoX), Just(Convention::TwoXMinusOne)]
}

/// Netlist text over inputs `i0..`, gates `g0..`, each gate reading two
/// distinct earlier wires.
fn netlist() -> impl Strategy<Value = String> {
    (
        2usize..=3,
        proptest::collection::vec((0usize..16, any::<u64>(), any::<bool>()), 1..=4),
    )
        .prop_map(|(k, gates)| {
            let mut wires: Vec<String> = (0..k).map(|i| format!("i{i}")).collect();
            let mut text = format!("input {}\n", wires.join(" "));
            for (g, (f, pick, neg)) in gates.into_iter().enumerate() {
                let w = wires.len() as u64;
                let a = (pick % w) as usize;
                let b = (a + 1 + ((pick / w) % (w - 1)) as usize) % wires.len();
                let bang = if neg { "!" } else { "" };
                let out = format!("g{g}");
                text.push_str(&format!(
                    "gate {} {} {bang}{} -> {out}\n",
                    GateFn::ALL[f].name(),
                    wires[a],
                    wires[b]
                ));
                wires.push(out);
            }
            text
        })
}

proptest! {
    #[test]
    fn truth_vector_round_trip(values in (0usize..=10).prop_flat_map(|n| proptest::collection::vec(ratio(), 1 << n))) {
        let p = BooleanPoly::from_truth_vector(&values).unwrap();
        prop_assert_eq!(p.to_truth_vector().unwrap(), values);
    }

    #[test]
    fn spin_forms_agree_and_keep_degree(p in poly(10, 4), conv in convention()) {
        let s = p.to_spin(conv);
        prop_assert_eq!(s.degree(), p.degree());
        prop_assert_eq!(&s.to_bool(), &p);
        for a in 0..1u64 << p.num_vars() {
            prop_assert_eq!(s.eval_index(a), p.eval_index(a));
        }
        let r1 = enumerate(&p).unwrap();
        let r2 = enumerate(&s).unwrap();
        prop_assert_eq!(r1.energies, r2.energies);
    }

    #[test]
    fn products_stay_multilinear(a in poly(6, 3), b in poly(6, 3)) {
        let n = a.num_vars().max(b.num_vars());
        let (a, b) = (a.with_num_vars(n).unwrap(), b.with_num_vars(n).unwrap());
        let ab = &a * &b;
        for (m, _) in ab.terms() {
            prop_assert!(m.vars().windows(2).all(|w| w[0] < w[1]));
        }
        for x in 0..1u64 << n {
            prop_assert_eq!(ab.eval_index(x), a.eval_index(x) * b.eval_index(x));
        }
    }

    #[test]
    fn text_round_trips(p in poly(8, 4), conv in convention()) {
        let n = p.num_vars();
        prop_assert_eq!(parse_bool_poly::<Q>(&p.to_string(), Some(n)).unwrap(), p.clone());
        let s = p.to_spin(conv);
        prop_assert_eq!(parse_spin_poly::<Q>(&s.to_string(), conv, Some(n)).unwrap(), s.clone());
        let f = ModelFile::new(s);
        prop_assert_eq!(ModelFile::<Q>::parse(&f.write()).unwrap(), f);
    }

    #[test]
    fn negation_is_an_involution(p in poly(6, 3), i in 0usize..6) {
        prop_assume!(i < p.num_vars());
        let n = p.num_vars();
        let q = p.negate_var(i).unwrap();
        prop_assert_eq!(&q.negate_var(i).unwrap(), &p);
        for a in 0..1u64 << n {
            prop_assert_eq!(q.eval_index(a), p.eval_index(a ^ (1 << (n - 1 - i))));
        }
    }

    #[test]
    fn restriction_is_linear_in_logical_terms(h in poly(7, 3), l in poly(3, 3)) {
        prop_assume!(h.num_vars() > l.num_vars());
        let n = h.num_vars();
        let logical: Vec<usize> = (0..l.num_vars()).collect();
        let base = restrict(&enumerate(&h).unwrap(), &logical).unwrap();
        let shifted = &h + &l.with_num_vars(n).unwrap();
        let moved = restrict(&enumerate(&shifted).unwrap(), &logical).unwrap();
        for (i, (a, b)) in base.entries.iter().zip(&moved.entries).enumerate() {
            prop_assert_eq!(b.min, a.min + l.eval_index(i as u64));
        }
    }

    #[test]
    fn sop_cover_reproduces_vector(tv in (1usize..=4).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), 1 << n))) {
        let cover = sop_cover(&tv).unwrap();
        for (i, &b) in tv.iter().enumerate() {
            prop_assert_eq!(eval_sop(&cover, i), b);
        }
        for a in &cover {
            for b in &cover {
                prop_assert!(a == b || !b.contains(a));
            }
        }
    }

    #[test]
    fn gray_code_steps_one_bit(n in 1usize..=12) {
        let g = gray_code(n).unwrap();
        prop_assert_eq!(g.len(), 1 << n);
        let mut seen = g.clone();
        seen.sort_unstable();
        prop_assert!(seen.iter().enumerate().all(|(i, &v)| v as usize == i));
        for i in 0..g.len() {
            prop_assert_eq!((g[i] ^ g[(i + 1) % g.len()]).count_ones(), 1);
        }
    }

    #[test]
    fn compiled_circuits_embed_their_truth_tables(text in netlist(), mode in prop_oneof![Just(Mode::TwoLocal), Just(Mode::KLocal)]) {
        let c = Circuit::<Q>::parse(&text).unwrap();
        let m = compile(&c, Some(Q::from_integer(2)), mode).unwrap();
        prop_assert!(m.num_qubits() <= 12);
        let chk = check_embedding(&c, &m, 12).unwrap();
        prop_assert!(chk.pass, "{}\n{:?}", text, chk);
    }

    #[test]
    fn energy_is_the_sum_of_placed_gadgets(text in netlist()) {
        let c = Circuit::<Q>::parse(&text).unwrap();
        let m = compile(&c, Some(Q::new(3, 2)), Mode::TwoLocal).unwrap();
        let n = m.num_qubits();
        for a in 0..1u64 << n {
            let sum: Q = m.placements.iter().map(|p| p.penalty.eval_index(a)).sum();
            prop_assert_eq!(m.prop.eval_index(a), sum);
        }
    }

    #[test]
    fn clamps_never_lower_energy(text in netlist(), pick in any::<usize>(), value in any::<bool>(), w in 1i64..=6) {
        let c = Circuit::<Q>::parse(&text).unwrap();
        let m = compile(&c, None, Mode::TwoLocal).unwrap();
        let wire = m.wire_map[pick % m.wire_map.len()].0.clone();
        let clamped = clamp(&m, &wire, value, Q::new(w, 3)).unwrap();
        let (before, after) = (m.hamiltonian(), clamped.hamiltonian());
        for a in 0..1u64 << m.num_qubits() {
            prop_assert!(after.eval_index(a) >= before.eval_index(a));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn sigma_gadget_restricts_to_walsh(j in ratio().prop_filter("nonzero", |j| *j != Q::from_integer(0)), extra in (1i64..=20, 1i64..=4)) {
        let delta = j.abs() * Q::from_integer(2) + Q::new(extra.0, extra.1);
        let model = threelocal_sigma_gadget(&j, &delta).unwrap();
        let land = restrict(&enumerate(&model).unwrap(), &[0, 1, 2]).unwrap();
        let target: Vec<Q> = (0..8u32).map(|a| if a.count_ones() % 2 == 0 { j } else { -j }).collect();
        let mins = land.mins();
        let d = target[0] - mins[0];
        prop_assert!(mins.iter().zip(&target).all(|(m, t)| *t - *m == d), "J={} delta={}: {:?}", j, delta, mins);
    }
}
