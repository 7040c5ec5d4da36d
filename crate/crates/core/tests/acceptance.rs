//! End-to-end acceptance criteria. Runs sequentially with its own harness so runtime
//! bounds are measured without interference and every criterion prints a line.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use supergaudin::exactalg::{algebra_closure, joint_numeric_eigen, Poly, QVector, Rat, RatFun};
use supergaudin::gaudin::{
    expansion_shape_violations, random_points, structure_checks, super_lift_spectra, verify_algebraic_identities,
    verify_module_relations, verify_shapovalov, verify_truncation, GaudinSystem, Report, Status,
};
use supergaudin::opring::{op_invert, op_mul, OperatorElement};
use supergaudin::repmod::{
    decompose, irreducible_dim, irreducible_module, natural_module, same_module, tensor_product, total_singular_space,
    truncate, ModuleSpace,
};
use supergaudin::spectral::{bethe_eigen_operator, bethe_vector, delta_membership, solve_bethe, verify_bethe_eigen, DeltaSpec, Point};
use supergaudin::superdata::{HookPartition, Perm, Weight};

type Outcome = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn no_failures(rep: &Report, what: &str) -> Outcome {
    ensure(rep.count(Status::Fail) == 0 && !rep.entries.is_empty(), || format!("{what}: {}", rep.to_json(false)))
}

fn naturals(m: usize, n: usize, z: Vec<Rat>) -> GaudinSystem {
    let s = HookPartition::from_parts(&[1], m, n).unwrap();
    GaudinSystem::new(m, n, vec![s; z.len()], z).unwrap()
}

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_int(x)).collect()
}

/// `v` is a nonzero multiple of `w`.
fn is_multiple(v: &[Rat], w: &[Rat]) -> bool {
    let Some(k) = w.iter().position(|x| !x.is_zero()) else { return false };
    let c = &v[k] / &w[k];
    !c.is_zero() && v.iter().zip(w).all(|(a, b)| *a == &c * b)
}

fn criterion_1() -> Outcome {
    let sys = naturals(2, 0, ints(&[0, 2]));
    let sols = solve_bethe(&sys, &[1], 1, 1e-12, 100, 8).map_err(|e| e.to_string())?;
    ensure(sols.len() == 1, || format!("{} solutions", sols.len()))?;
    let cfg = sols[0].exact.clone().ok_or("root not rational")?;
    ensure(cfg.roots == vec![Rat::one()], || format!("roots {:?}", cfg.roots))?;

    // basis order e1⊗e1, e1⊗e2, e2⊗e1, e2⊗e2
    let v = bethe_vector(&sys, &cfg).map_err(|e| e.to_string())?;
    let expected: QVector = ints(&[0, -1, 1, 0]);
    ensure(is_multiple(&v, &expected), || format!("Bethe vector {v:?}"))?;

    let rep = verify_bethe_eigen(&sys, &cfg).map_err(|e| e.to_string())?;
    ensure(rep.all_pass(), || format!("bethe: {}", rep.to_json(false)))?;

    let d = bethe_eigen_operator(&sys, &cfg).map_err(|e| e.to_string())?;
    let kernel = d.polynomial_kernel();
    ensure(kernel.len() == 2, || format!("kernel dim {}", kernel.len()))?;
    let z_minus_1 = Poly::new(ints(&[-1, 1]));
    let z_sq = Poly::new(ints(&[0, 0, 1]));
    for p in [&z_minus_1, &z_sq] {
        ensure(d.apply(&RatFun::from_poly(p.clone())).is_zero(), || format!("{p} not in kernel"))?;
    }
    for (pt, ex) in [
        (Point::Finite(Rat::zero()), ints(&[0, 2])),
        (Point::Finite(Rat::from_int(2)), ints(&[0, 2])),
        (Point::Infinity, ints(&[-2, -1])),
    ] {
        let got = d.exponents_at(&pt).map_err(|e| e.to_string())?;
        ensure(got == ex, || format!("exponents at {pt}: {got:?}"))?;
    }
    let spec = DeltaSpec::for_system(&sys, &Weight::from_values(2, 0, vec![1, 1]));
    let out = delta_membership(&d, &spec);
    ensure(out.passed(), || format!("Δ: {}", out.to_json()))
}

fn criterion_2() -> Outcome {
    let mut sys = naturals(1, 1, ints(&[0, 3]));
    sys.u_order = 4;
    let fam = sys.ber_u_expansion(sys.u_order).map_err(|e| e.to_string())?;
    let mats = fam.independent_matrices();
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            ensure(a.commutes_with(b), || "noncommuting Hamiltonians".into())?;
        }
    }
    let sub = total_singular_space(sys.module(), &Perm::identity(2));
    ensure(sub.dim() == 2, || format!("singular space dim {}", sub.dim()))?;
    let restricted = fam.restrict(&sub).map_err(|e| e.to_string())?;
    let closure = algebra_closure(&restricted, 2).len();
    ensure(closure == 2, || format!("closure dim {closure}"))?;
    let rep = structure_checks(&sys, &fam, &sub, 5, sys.seed, 1e-9).map_err(|e| e.to_string())?;
    let ok = rep.by_check("structure").all(|e| e.status == Status::Pass);
    ensure(ok, || format!("structure: {}", rep.to_json(false)))
}

fn random_rational_points(rng: &mut ChaCha8Rng, ell: usize) -> Vec<Rat> {
    let mut z: Vec<Rat> = Vec::new();
    while z.len() < ell {
        let c = Rat::new(rng.gen_range(-20..=20), rng.gen_range(1..=7));
        if !z.contains(&c) {
            z.push(c);
        }
    }
    z
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let z = random_rational_points(&mut rng, 2);
        let mut sys = naturals(1, 1, z.clone());
        sys.window = 6;
        let rep = super_lift_spectra(&sys, 1, 3).map_err(|e| e.to_string())?;
        let lambdas: Vec<_> = rep.entries.iter().map(|e| e.instance["lambda"].clone()).collect();
        ensure(
            lambdas.contains(&serde_json::json!([2])) && lambdas.contains(&serde_json::json!([1, 1])),
            || format!("weights covered: {lambdas:?}"),
        )?;
        ensure(rep.all_pass(), || format!("z = {z:?}: {}", rep.to_json(false)))?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut sys = naturals(2, 1, ints(&[0, 3]));
    ensure(sys.dim() == 9, || format!("module dim {}", sys.dim()))?;
    sys.u_order = 4;
    sys.window = 6;
    let rep = verify_algebraic_identities(&sys).map_err(|e| e.to_string())?;
    no_failures(&rep, "identities")?;
    for check in ["commutativity", "binomial", "permutation_invariance", "cdet_consistency"] {
        ensure(rep.by_check(check).any(|e| e.status == Status::Pass), || format!("{check} not exercised"))?;
    }
    let sigmas: Vec<_> = rep.by_check("permutation_invariance").map(|e| e.instance["sigma"].clone()).collect();
    ensure(sigmas.len() >= 2, || format!("permutations {sigmas:?}"))?;

    let rep = verify_truncation(&sys, Some(1), Some(0), None).map_err(|e| e.to_string())?;
    no_failures(&rep, "truncation")?;
    for kind in ["i", "ii"] {
        ensure(
            rep.by_check("truncation").any(|e| e.instance["kind"] == kind && e.status == Status::Pass),
            || format!("truncation ({kind}) not exercised"),
        )?;
    }
    let ok = rep.by_check("sigma_singular").any(|e| e.status == Status::Pass);
    ensure(ok, || "subspace equality not exercised".into())
}

fn criterion_5() -> Outcome {
    for (m, n) in [(1, 1), (2, 1)] {
        for t in 0..5u64 {
            let z = random_points(2, 50 + t);
            let mut sys = naturals(m, n, z.clone());
            sys.u_order = 4;
            let fam = sys.ber_u_expansion(sys.u_order).map_err(|e| e.to_string())?;
            let sub = total_singular_space(sys.module(), &Perm::identity(m + n));
            let mats = fam.restrict(&sub).map_err(|e| e.to_string())?;
            let e = joint_numeric_eigen(&mats, t, 1e-9).map_err(|e| e.to_string())?;
            let ctx = || format!("gl({m}|{n}) z = {z:?}");
            ensure(e.pairs.len() == sub.dim(), || format!("{}: {} of {} eigenvectors", ctx(), e.pairs.len(), sub.dim()))?;
            ensure(e.max_residual <= 1e-9, || format!("{}: residual {}", ctx(), e.max_residual))?;
            ensure(e.min_separation > 1e-6, || format!("{}: separation {}", ctx(), e.min_separation))?;
            ensure(e.simple, || format!("{}: spectrum not simple", ctx()))?;
        }
    }
    Ok(())
}

fn decomposition_total(module: &ModuleSpace) -> Result<usize, String> {
    let parts = decompose(module).map_err(|e| e.to_string())?;
    parts.iter().try_fold(0, |acc, (h, mult)| Ok(acc + mult * irreducible_dim(h).map_err(|e| e.to_string())?))
}

fn criterion_6() -> Outcome {
    let v11 = natural_module(1, 1);
    let t11 = tensor_product(&[v11.clone(), v11.clone(), v11.clone()]);
    let total = decomposition_total(&t11)?;
    ensure(total == 8, || format!("(C^(1|1))^3 decomposes to total dim {total}"))?;
    let v21 = natural_module(2, 1);
    let t21 = tensor_product(&[v21.clone(), v21.clone()]);
    let total = decomposition_total(&t21)?;
    ensure(total == 9, || format!("(C^(2|1))^2 decomposes to total dim {total}"))?;

    let mut modules = vec![v11, t11.clone(), v21.clone(), t21.clone()];
    for t in [&t11, &t21] {
        for (h, _) in decompose(t).map_err(|e| e.to_string())? {
            modules.push(irreducible_module(&h).map_err(|e| e.to_string())?);
        }
    }
    for (i, md) in modules.iter().enumerate() {
        let bad = md.check_relations(100, 6 + i as u64);
        ensure(bad.is_empty() && md.check_weights(), || format!("module {i}: relations {bad:?}"))?;
    }
    let sys = naturals(2, 1, ints(&[0, 3]));
    no_failures(&verify_module_relations(&sys, 100), "system modules")?;

    for p in 1..=2 {
        for k in 0..=1 {
            let left = truncate(&t21, p, k).map_err(|e| e.to_string())?.module;
            let tv = truncate(&v21, p, k).map_err(|e| e.to_string())?.module;
            let right = tensor_product(&[tv.clone(), tv]);
            ensure(same_module(&left, &right), || format!("truncation to ({p}|{k}) is not tensor compatible"))?;
        }
    }
    Ok(())
}

fn random_leading_invertible(rng: &mut ChaCha8Rng, depth: usize) -> OperatorElement<RatFun> {
    let top = rng.gen_range(-2..=2);
    let mut lead = 0;
    while lead == 0 {
        lead = rng.gen_range(-5..=5);
    }
    let mut terms = vec![(top, RatFun::constant(Rat::from_int(lead)))];
    for j in 1..=rng.gen_range(0..=3) {
        let poly = Poly::new((0..2).map(|_| Rat::new(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect());
        let pole = RatFun::pole(Rat::from_int(rng.gen_range(-3..=3)), &Rat::from_int(rng.gen_range(-2..=2)), rng.gen_range(1..=2));
        terms.push((top - j, &RatFun::from_poly(poly) + &pole));
    }
    OperatorElement::from_terms(&RatFun::one(), terms, depth)
}

fn shape_ok(sys: &GaudinSystem) -> Outcome {
    let series = sys.ber_u_series(None, sys.u_order, None).map_err(|e| e.to_string())?;
    let bad = expansion_shape_violations(&series);
    ensure(bad.is_empty(), || format!("gl({}|{}) shape violations {bad:?}", sys.m(), sys.n()))
}

fn criterion_7() -> Outcome {
    let gl3 = GaudinSystem::new(
        3,
        0,
        vec![HookPartition::from_parts(&[1], 3, 0).unwrap(), HookPartition::from_parts(&[1, 1], 3, 0).unwrap()],
        ints(&[0, 3]),
    )
    .unwrap();
    let desk = [naturals(2, 0, ints(&[0, 2])), naturals(1, 1, ints(&[0, 3])), naturals(2, 1, ints(&[0, 3])), gl3];
    for sys in &desk {
        shape_ok(sys)?;
    }
    for sys in desk.iter().filter(|s| s.n() == 0) {
        let even: Vec<usize> = (0..sys.m()).collect();
        let ber = sys.ber_u_series(Some(&even), sys.u_order, None).map_err(|e| e.to_string())?;
        let cdet = sys.cdet_u_series(Some(&even), sys.u_order);
        for i in 0..=sys.u_order {
            ensure(ber.term(i).agrees_with(cdet.term(i)), || format!("gl{} Ber and cdet differ at u^{i}", sys.m()))?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let one = OperatorElement::d_power(&RatFun::one(), 0, 6);
    for t in 0..100 {
        let a = random_leading_invertible(&mut rng, 6);
        let y = op_invert(&a, 6).map_err(|e| e.to_string())?;
        ensure(op_mul(&a, &y, 6).agrees_with(&one) && op_mul(&y, &a, 6).agrees_with(&one), || format!("inverse {t} of {a:?}"))?;
    }

    let gl2 = &desk[0];
    for fam in [gl2.ber_u_expansion(gl2.u_order), gl2.window_family(gl2.window)] {
        let fam = fam.map_err(|e| e.to_string())?;
        let rep = verify_shapovalov(gl2, &fam);
        ensure(rep.all_pass(), || format!("shapovalov: {}", rep.to_json(false)))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 7] = [
        ("gl2 Bethe walkthrough", criterion_1, Some(Duration::from_secs(5))),
        ("gl(1|1) commutative Frobenius structure", criterion_2, Some(Duration::from_secs(10))),
        ("gl(1|1) super lift against gl2", criterion_3, None),
        ("gl(2|1) identities and truncation", criterion_4, Some(Duration::from_secs(120))),
        ("simple spectrum at random points", criterion_5, None),
        ("representation theory base", criterion_6, None),
        ("ring layer", criterion_7, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|()| match limit {
            Some(l) if elapsed > *l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            _ => Ok(()),
        });
        match result {
            Ok(()) => println!("criterion {}: PASS {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({elapsed:.2?}): {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
