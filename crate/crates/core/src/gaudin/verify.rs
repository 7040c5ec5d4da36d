use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::family::{FnKey, HamiltonianFamily};
use super::report::{Report, Stamp, Status};
use super::system::{GaudinSystem, MatOp};
use crate::error::{Error, Result};
use crate::exactalg::{algebra_closure, binomial, det, joint_numeric_eigen, MatFn, QMatrix, QVector, Rat, SpanBuilder};
use crate::opring::{OperatorElement, USeries};
use crate::repmod::{
    decompose, sigma_singular_correspondence, singular_space, singular_subspace, Subspace,
};
use crate::superdata::{partition_weight_sigma, sigma_p, Partition, Perm};

impl GaudinSystem {
    pub fn stamp(&self) -> Stamp {
        Stamp {
            window: self.window,
            u_order: self.u_order,
            seed: self.seed,
        }
    }

    fn instance(&self) -> Value {
        json!({
            "m": self.m(),
            "n": self.n(),
            "sites": self.sites().iter().map(|s| s.partition.parts().to_vec()).collect::<Vec<_>>(),
            "z": self.z().iter().map(Rat::to_string).collect::<Vec<_>>(),
            "dim": self.dim(),
        })
    }

    fn instance_with(&self, extra: Value) -> Value {
        let mut v = self.instance();
        if let (Some(o), Value::Object(e)) = (v.as_object_mut(), extra) {
            o.extend(e);
        }
        v
    }
}

/// Permutations tested for Berezinian invariance: `σ_p` for `p < m` and every
/// adjacent transposition.
pub fn default_permutations(m: usize, n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    for p in 1..m {
        out.push(sigma_p(m, n, p).expect("1 <= p < m"));
    }
    for k in 0..(m + n).saturating_sub(1) {
        out.push(Perm::transposition(m + n, k, k + 1));
    }
    out
}

/// First pair of non-commuting matrices (against each other or against the module
/// action), by index; `actions` are checked after the family.
pub fn commutativity_witness(mats: &[QMatrix], actions: &[QMatrix]) -> Option<(usize, usize)> {
    for i in 0..mats.len() {
        for j in 0..i {
            if !mats[i].commutes_with(&mats[j]) {
                return Some((j, i));
            }
        }
        for (k, a) in actions.iter().enumerate() {
            if !mats[i].commutes_with(a) {
                return Some((i, mats.len() + k));
            }
        }
    }
    None
}

/// Terms of the u-series violating the shape `u^i ∂^{i−j}`, `0 ≤ j ≤ i`.
pub fn expansion_shape_violations(b: &USeries<MatFn>) -> Vec<(usize, i64)> {
    let mut bad = Vec::new();
    for i in 0..=b.order() {
        for (p, _) in b.term(i).terms() {
            if p < 0 || p > i as i64 {
                bad.push((i, p));
            }
        }
    }
    bad
}

/// First `(u-index, ∂-power)` where two u-series differ.
fn series_diff(a: &USeries<MatFn>, b: &USeries<MatFn>) -> Option<(usize, i64)> {
    for i in 0..=a.order() {
        let d = a.term(i).sub(b.term(i));
        let first = d.terms().next().map(|(p, _)| p);
        if let Some(p) = first {
            return Some((i, p));
        }
    }
    None
}

/// Binomial relation `b_ij = C(m−n−j, i−j) b_{m−n−j}` between a u-adic and a window
/// family; returns the first failing `(i, j)`.
pub fn binomial_failures(m: usize, n: usize, ufam: &HamiltonianFamily, wfam: &HamiltonianFamily) -> Result<Vec<(usize, usize)>> {
    let top = m as i64 - n as i64;
    let mut bad = Vec::new();
    for key in ufam.keys() {
        let (i, j) = key.ij().expect("u-adic key");
        let k = top - j as i64;
        if !wfam.functions().contains_key(&FnKey::window(k)) {
            return Err(Error::BadRange(format!("window family does not reach b[{k}]")));
        }
        let c = Rat::from_bigint(binomial(top - j as i64, (i - j) as u64));
        let rhs = wfam.function(&FnKey::window(k)).scale(&c);
        if ufam.function(key) != rhs {
            bad.push((i, j));
        }
    }
    Ok(bad)
}

/// `Ber(L)` applied to a fixed vector: coefficients become column functions.
pub fn apply_to_vector(op: &MatOp, v: &QVector) -> OperatorElement<MatFn> {
    let col = QMatrix::from_columns(v.len(), std::slice::from_ref(v));
    let proto = op.proto().right_mul_const(&col);
    op.map_coeffs(&proto, |c| c.right_mul_const(&col))
}

/// First power in `[low, top]` where two vector-valued expressions differ.
pub fn first_difference(a: &OperatorElement<MatFn>, b: &OperatorElement<MatFn>, low: i64, top: i64) -> Option<i64> {
    (low..=top).rev().find(|&p| a.coeff(p) != b.coeff(p))
}

/// Leading submatrices (1-based original positions) whose quasiminors the Berezinian of
/// `A^σ` inverts: the prefixes of the `<_σ` order.
pub fn quasiminor_chain(sigma: &Perm) -> Vec<Vec<usize>> {
    let order: Vec<usize> = sigma.order().iter().map(|i| i + 1).collect();
    (1..=order.len()).map(|k| order[..k].to_vec()).collect()
}

/// The four algebraic identities, plus the expansion shape.
pub fn verify_algebraic_identities(sys: &GaudinSystem) -> Result<Report> {
    let mut rep = Report::new();
    let st = sys.stamp();
    let (m, n) = (sys.m(), sys.n());
    let order = sys.u_order;
    let series = sys.ber_u_series(None, order, None)?;
    let ufam = HamiltonianFamily::from_u_series(&series, sys.poles(), super::family::Provenance::UAdic)?;

    rep.timed(st, "expansion_shape", sys.instance(), || {
        let bad = expansion_shape_violations(&series);
        let mut w = json!({"submatrices": quasiminor_chain(&Perm::identity(m + n))});
        if !bad.is_empty() {
            w["terms"] = json!(bad);
        }
        (Status::from_bool(bad.is_empty()), Some(w))
    });

    rep.timed(st, "commutativity", sys.instance(), || {
        let mats = ufam.independent_matrices();
        let w = commutativity_witness(&mats, sys.module().actions());
        let witness = json!({"independent_matrices": mats.len(), "pair": w});
        (Status::from_bool(w.is_none()), Some(witness))
    });

    let k = sys.window.max(order);
    let wfam = sys.window_family(k)?;
    rep.timed(st, "binomial", sys.instance_with(json!({"window_used": k})), || match binomial_failures(m, n, &ufam, &wfam) {
        Ok(bad) => (Status::from_bool(bad.is_empty()), (!bad.is_empty()).then(|| json!({"ij": bad}))),
        Err(e) => (Status::Fail, Some(json!(e.to_string()))),
    });

    for sigma in default_permutations(m, n) {
        let inst = sys.instance_with(json!({"sigma": sigma}));
        rep.timed(st, "permutation_invariance", inst, || match sys.ber_u_series(None, order, Some(&sigma)) {
            Ok(b) => {
                let d = series_diff(&b, &series);
                let mut w = json!({"submatrices": quasiminor_chain(&sigma)});
                if let Some((i, p)) = d {
                    w["u"] = json!(i);
                    w["power"] = json!(p);
                }
                (Status::from_bool(d.is_none()), Some(w))
            }
            Err(e) => (Status::Fail, Some(json!(e.to_string()))),
        });
    }

    let even: Vec<usize> = (0..m).collect();
    rep.timed(st, "cdet_consistency", sys.instance_with(json!({"block": format!("({m}|0)")})), || {
        match sys.ber_u_series(Some(&even), order, None) {
            Ok(b) => {
                let c = sys.cdet_u_series(Some(&even), order);
                let d = series_diff(&b, &c);
                (Status::from_bool(d.is_none()), d.map(|(i, p)| json!({"u": i, "power": p})))
            }
            Err(e) => (Status::Fail, Some(json!(e.to_string()))),
        }
    });
    Ok(rep)
}

/// Partitions carried by singular weights of the module.
pub fn singular_partitions(sys: &GaudinSystem) -> Result<Vec<Partition>> {
    Ok(decompose(sys.module())?.into_iter().map(|(h, _)| h.partition).collect())
}

fn compare_on_space(
    sys: &GaudinSystem,
    sub: &Subspace,
    lhs: &MatOp,
    rhs: &MatOp,
    low: i64,
    top: i64,
) -> Option<Value> {
    for (idx, v) in sub.basis.iter().enumerate() {
        let a = apply_to_vector(lhs, v);
        let b = apply_to_vector(rhs, v);
        if let Some(p) = first_difference(&a, &b, low, top) {
            return Some(json!({"vector": idx, "power": p, "dim": sys.dim()}));
        }
    }
    None
}

/// Truncation identities: (i) for each `λ ∈ P_{p|n}` on the `σ_p`-singular space of
/// weight `λ̄^{σ_p}`; (ii) for each singular weight vanishing at `k + 1/2`. Also the
/// singular-space correspondence for the same `λ` and `p`.
pub fn verify_truncation(sys: &GaudinSystem, p: Option<usize>, k: Option<usize>, lambda: Option<&Partition>) -> Result<Report> {
    let mut rep = Report::new();
    let st = sys.stamp();
    let (m, n) = (sys.m(), sys.n());
    let kw = sys.window;
    let top = m as i64 - n as i64;
    let low = top - kw as i64;
    let full = sys.ber_window(kw, None, 0)?;
    let partitions = match lambda {
        Some(l) => vec![l.clone()],
        None => singular_partitions(sys)?,
    };
    if let Some(p) = p {
        let sub_pos = sys.subset(p, n)?;
        let rhs = sys.ber_window(kw, Some(&sub_pos), m as i64 - p as i64)?;
        let sigma = sigma_p(m, n, p)?;
        for lam in partitions.iter().filter(|l| l.is_hook(p, n)) {
            let mu = partition_weight_sigma(lam, m, n, p)?;
            let sub = singular_subspace(sys.module(), &mu, &sigma);
            let inst = sys.instance_with(json!({"kind": "i", "p": p, "lambda": lam.parts(), "space_dim": sub.dim()}));
            if sub.is_empty() {
                rep.record(st, "truncation", inst, Status::Vacuous, Some(json!(Error::EmptyWeightSpace.to_string())));
                continue;
            }
            rep.timed(st, "truncation", inst, || {
                let w = compare_on_space(sys, &sub, &full, &rhs, low, top);
                (Status::from_bool(w.is_none()), w)
            });
            let (l, r) = sigma_singular_correspondence(sys.module(), lam, p)?;
            let inst = sys.instance_with(json!({"p": p, "lambda": lam.parts()}));
            let ok = l.same_span(&r);
            rep.record(st, "sigma_singular", inst, Status::from_bool(ok), Some(json!({"left_dim": l.dim(), "right_dim": r.dim()})));
        }
    }
    if let Some(k) = k {
        if k > n {
            return Err(Error::BadRange(format!("k = {k} exceeds n = {n}")));
        }
        let sub_pos = sys.subset(m, k)?;
        let rhs = sys.ber_window(kw, Some(&sub_pos), k as i64 - n as i64)?;
        let sing = singular_space(sys.module(), &Perm::identity(m + n));
        let mut any = false;
        for (mu, sub) in sing {
            if k < n && mu.at(m + k) != 0 {
                continue;
            }
            if let Some(l) = lambda {
                if crate::superdata::weight_to_partition(&mu).as_ref() != Some(l) {
                    continue;
                }
            }
            any = true;
            let inst = sys.instance_with(json!({"kind": "ii", "k": k, "weight": mu, "space_dim": sub.dim()}));
            rep.timed(st, "truncation", inst, || {
                let w = compare_on_space(sys, &sub, &full, &rhs, low, top);
                (Status::from_bool(w.is_none()), w)
            });
        }
        if !any {
            let inst = sys.instance_with(json!({"kind": "ii", "k": k}));
            rep.record(st, "truncation", inst, Status::Vacuous, Some(json!(Error::EmptyWeightSpace.to_string())));
        }
    }
    Ok(rep)
}

/// Outcome of the structural checks on one invariant subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureOutcome {
    pub sub_dim: usize,
    pub closure_dim: usize,
    /// First random trial (1-based) whose orbit spans the subspace.
    pub cyclic_trial: Option<usize>,
    /// First random functional (1-based) with a nondegenerate Gram matrix.
    pub frobenius_trial: Option<usize>,
}

impl StructureOutcome {
    pub fn passed(&self) -> bool {
        self.closure_dim == self.sub_dim && self.cyclic_trial.is_some() && self.frobenius_trial.is_some()
    }
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> QVector {
    (0..d).map(|_| Rat::from_int(rng.gen_range(-5..=5))).collect()
}

/// Closure dimension, cyclic vector and Frobenius functional witnesses for a commuting
/// family already restricted to a subspace of dimension `dim`.
pub fn structure_outcome(mats: &[QMatrix], dim: usize, trials: usize, seed: u64) -> StructureOutcome {
    let alg = algebra_closure(mats, dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cyclic_trial = None;
    for t in 1..=trials {
        let v = random_vector(&mut rng, dim);
        let mut s = SpanBuilder::new(dim);
        for a in &alg {
            s.insert(&a.apply(&v));
        }
        if s.dim() == dim {
            cyclic_trial = Some(t);
            break;
        }
    }
    let mut span = SpanBuilder::new(dim * dim);
    for a in &alg {
        span.insert(&a.flatten());
    }
    let r = alg.len();
    let mut frobenius_trial = None;
    for t in 1..=trials {
        let phi: Vec<Rat> = (0..r).map(|_| Rat::from_int(rng.gen_range(-5..=5))).collect();
        let mut g = Vec::with_capacity(r);
        for a in &alg {
            let mut row = Vec::with_capacity(r);
            for b in &alg {
                let c = span.coordinates(&a.mul(b).flatten()).expect("closed under products");
                row.push(c.iter().zip(&phi).fold(Rat::zero(), |s, (x, y)| &s + &(x * y)));
            }
            g.push(row);
        }
        if !det(&QMatrix::from_dense(&g)).is_zero() {
            frobenius_trial = Some(t);
            break;
        }
    }
    StructureOutcome {
        sub_dim: dim,
        closure_dim: r,
        cyclic_trial,
        frobenius_trial,
    }
}

/// Structural checks (closure dimension, cyclicity, Frobenius witness, simple
/// spectrum) on a subspace invariant under the u-adic family.
pub fn structure_checks(sys: &GaudinSystem, fam: &HamiltonianFamily, sub: &Subspace, trials: usize, seed: u64, tol: f64) -> Result<Report> {
    let mut rep = Report::new();
    let st = sys.stamp();
    let mats = fam.restrict(sub)?;
    let inst = sys.instance_with(json!({"space_dim": sub.dim()}));
    rep.timed(st, "structure", inst.clone(), || {
        let o = structure_outcome(&mats, sub.dim(), trials, seed);
        let w = json!({
            "closure_dim": o.closure_dim,
            "space_dim": o.sub_dim,
            "cyclic_trial": o.cyclic_trial,
            "frobenius_trial": o.frobenius_trial,
        });
        (Status::from_bool(o.passed()), Some(w))
    });
    rep.timed(st, "simple_spectrum", inst, || match joint_numeric_eigen(&mats, seed, tol) {
        Ok(e) => (
            Status::from_bool(e.simple && e.max_residual <= tol),
            Some(json!({
                "eigenvectors": e.pairs.len(),
                "min_separation": if e.min_separation.is_finite() { json!(e.min_separation) } else { Value::Null },
                "max_residual": e.max_residual,
            })),
        ),
        Err(e) => (Status::Fail, Some(json!(e.to_string()))),
    });
    Ok(rep)
}

/// Random supercommutation-relation checks on the module and on every site module.
pub fn verify_module_relations(sys: &GaudinSystem, trials: usize) -> Report {
    let mut rep = Report::new();
    let st = sys.stamp();
    let mut targets: Vec<(String, &crate::repmod::ModuleSpace)> = vec![("module".into(), sys.module())];
    for (i, s) in sys.site_modules().iter().enumerate() {
        targets.push((format!("site {}", i + 1), s));
    }
    for (name, md) in targets {
        rep.timed(st, "supercommutation", sys.instance_with(json!({"target": name, "trials": trials})), || {
            let bad = md.check_relations(trials, sys.seed);
            let weights = md.check_weights();
            let parity = md.parity_mismatches();
            let ok = bad.is_empty() && weights && parity.is_empty();
            let w = (!ok).then(|| json!({"relations": bad, "weights_ok": weights, "parity_mismatches": parity}));
            (Status::from_bool(ok), w)
        });
    }
    rep
}

/// Every coefficient matrix of `fam` is self-adjoint for the contravariant form
/// (`n = 0` only; vacuous otherwise).
pub fn verify_shapovalov(sys: &GaudinSystem, fam: &HamiltonianFamily) -> Report {
    let mut rep = Report::new();
    let st = sys.stamp();
    let inst = sys.instance_with(json!({"matrices": fam.entries().len()}));
    if sys.n() != 0 {
        rep.record(st, "shapovalov", inst, Status::Vacuous, Some(json!(Error::NotClassical.to_string())));
        return rep;
    }
    rep.timed(st, "shapovalov", inst, || {
        let g = match crate::repmod::shapovalov_gram(sys.module()) {
            Ok(g) => g,
            Err(e) => return (Status::Fail, Some(json!(e.to_string()))),
        };
        let bad = crate::repmod::contravariance_failures(sys.module(), &g);
        if !bad.is_empty() {
            return (Status::Fail, Some(json!({"contravariance": bad})));
        }
        for ((k, t), h) in fam.entries() {
            if h.transpose().mul(&g) != g.mul(h) {
                return (Status::Fail, Some(json!(format!("{k} {t}"))));
            }
        }
        (Status::Pass, None)
    });
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains_follow_the_sigma_order() {
        assert_eq!(quasiminor_chain(&Perm::identity(2)), vec![vec![1], vec![1, 2]]);
        let t = Perm::transposition(3, 1, 2);
        assert_eq!(quasiminor_chain(&t), vec![vec![1], vec![1, 3], vec![1, 3, 2]]);
    }
}
