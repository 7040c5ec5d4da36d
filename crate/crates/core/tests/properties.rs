use proptest::prelude::*;

use supergaudin::exactalg::{Poly, Rat, RatFun};
use supergaudin::gaudin::{verify_algebraic_identities, GaudinSystem, Status};
use supergaudin::opring::{op_invert, op_mul, OperatorElement};
use supergaudin::repmod::{irreducible_module, natural_module, tensor_product};
use supergaudin::spectral::{bethe_eigen_operator, delta_membership, solve_bethe, verify_bethe_eigen, DeltaSpec, FuchsianOperator};
use supergaudin::superdata::{HookPartition, Partition, Weight};

type Op = OperatorElement<RatFun>;

fn rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| Rat::new(p, q))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    rat().prop_filter("nonzero", |r| !r.is_zero())
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rat(), 0..=max_deg + 1).prop_map(Poly::new)
}

/// Polynomial plus at most one simple pole at one of a few fixed points.
fn ratfun() -> impl Strategy<Value = RatFun> {
    (poly(1), rat(), 0usize..4).prop_map(|(p, c, k)| {
        let poles = [Rat::zero(), Rat::one(), Rat::from_int(-2)];
        let base = RatFun::from_poly(p);
        if k < 3 {
            &base + &RatFun::pole(c, &poles[k], 1)
        } else {
            base
        }
    })
}

fn op(depth: usize) -> impl Strategy<Value = Op> {
    prop::collection::vec((-2i64..=2, ratfun()), 1..4)
        .prop_map(move |terms| Op::from_terms(&RatFun::one(), terms, depth))
}

/// Elements whose leading coefficient is a nonzero constant.
fn leading_invertible(depth: usize) -> impl Strategy<Value = Op> {
    (-2i64..=2, nonzero_rat(), prop::collection::vec(ratfun(), 0..3)).prop_map(move |(top, c, rest)| {
        let mut terms = vec![(top, RatFun::constant(c))];
        for (i, f) in rest.into_iter().enumerate() {
            terms.push((top - 1 - i as i64, f));
        }
        Op::from_terms(&RatFun::one(), terms, depth)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in rat(), b in rat(), c in nonzero_rat()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a / &c) * &c, a.clone());
        prop_assert_eq!(a.to_string().parse::<Rat>().unwrap(), a);
    }

    #[test]
    fn polynomial_division(a in poly(5), d in poly(3)) {
        prop_assume!(!d.is_zero());
        let (q, r) = a.div_rem(&d);
        prop_assert_eq!(&(&q * &d) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < d.degree());
    }

    #[test]
    fn partial_fraction_round_trip(f in ratfun(), g in ratfun()) {
        let h = &f * &g;
        let poles = [Rat::zero(), Rat::one(), Rat::from_int(-2)];
        let (p, terms) = h.partial_fractions(&poles).unwrap();
        prop_assert_eq!(RatFun::from_partial_fractions(&p, &terms, &poles), h);
    }

    #[test]
    fn derivative_rules(f in ratfun(), g in ratfun(), c in nonzero_rat(), k in 1u32..4) {
        prop_assert_eq!((&f * &g).derive(), &(&f.derive() * &g) + &(&f * &g.derive()));
        prop_assert_eq!((&f + &g).derive(), &f.derive() + &g.derive());
        let a = Rat::from_int(3);
        let expected = RatFun::pole(&c * &Rat::from_int(-(k as i64)), &a, k + 1);
        prop_assert_eq!(RatFun::pole(c, &a, k).derive(), expected);
    }

    #[test]
    fn conjugation_is_an_involution(mut parts in prop::collection::vec(0u32..6, 0..6)) {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let p = Partition::new(parts).unwrap();
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!(p.conjugate().size(), p.size());
    }

    #[test]
    fn fuchsian_kernels_are_solutions(ws in prop::collection::btree_set(-6i64..=6, 1..3)) {
        // D = (∂ − Σ 1/(z − w)) ∂ has the polynomial kernel {1, Π (z − w)}
        let ws: Vec<Rat> = ws.into_iter().map(Rat::from_int).collect();
        let f = ws.iter().fold(RatFun::zero(), |acc, w| &acc + &RatFun::pole(Rat::one(), w, 1));
        let d = FuchsianOperator::from_factors(&[f, RatFun::zero()]);
        let k = d.polynomial_kernel();
        prop_assert_eq!(k.len(), 2);
        for p in k {
            prop_assert!(d.apply(&RatFun::from_poly(p)).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn operator_product_is_associative(a in op(6), b in op(6), c in op(6)) {
        let left = op_mul(&op_mul(&a, &b, 6), &c, 6);
        let right = op_mul(&a, &op_mul(&b, &c, 6), 6);
        prop_assert!(left.agrees_with(&right), "{:?} vs {:?}", left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn inverse_round_trips(a in leading_invertible(6)) {
        let y = op_invert(&a, 6).unwrap();
        let one = Op::d_power(&RatFun::one(), 0, 6);
        prop_assert!(op_mul(&a, &y, 6).agrees_with(&one));
        prop_assert!(op_mul(&y, &a, 6).agrees_with(&one));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn modules_satisfy_supercommutation(
        m in 1usize..=2,
        n in 0usize..=1,
        parts in prop::collection::vec(1u32..=2, 1..=2),
        factors in 1usize..=2,
        seed in any::<u64>(),
    ) {
        let Ok(hp) = HookPartition::from_parts(&parts, m, n) else { return Ok(()); };
        let l = irreducible_module(&hp).unwrap();
        let t = tensor_product(&vec![l; factors]);
        prop_assert!(t.check_relations(100, seed).is_empty());
        prop_assert!(t.check_weights());
        let v = natural_module(m, n);
        prop_assert!(v.check_relations(100, seed).is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn identities_hold_at_random_points(zs in prop::collection::btree_set(-12i64..=12, 2..=2)) {
        let s = HookPartition::from_parts(&[1], 1, 1).unwrap();
        let z: Vec<Rat> = zs.into_iter().map(Rat::from_int).collect();
        let mut sys = GaudinSystem::new(1, 1, vec![s.clone(), s], z).unwrap();
        sys.u_order = 3;
        let rep = verify_algebraic_identities(&sys).unwrap();
        prop_assert_eq!(rep.count(Status::Fail), 0, "{}", rep.to_json(false));
    }

    #[test]
    fn gl2_single_root_bethe(a in -10i64..=10, gap in 1i64..=8) {
        // two natural sites: the root is the midpoint and D lies in Δ
        let s = HookPartition::from_parts(&[1], 2, 0).unwrap();
        let z = vec![Rat::from_int(a), Rat::from_int(a + gap)];
        let sys = GaudinSystem::new(2, 0, vec![s.clone(), s], z.clone()).unwrap();
        let sols = solve_bethe(&sys, &[1], 1, 1e-10, 100, 4).unwrap();
        prop_assert_eq!(sols.len(), 1);
        let cfg = sols[0].exact.clone().unwrap();
        prop_assert_eq!(&cfg.roots[0], &(&(&z[0] + &z[1]) / &Rat::from_int(2)));
        prop_assert!(verify_bethe_eigen(&sys, &cfg).unwrap().all_pass());
        let d = bethe_eigen_operator(&sys, &cfg).unwrap();
        let spec = DeltaSpec::for_system(&sys, &Weight::from_values(2, 0, vec![1, 1]));
        prop_assert!(delta_membership(&d, &spec).passed());
    }
}
