use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::family::{FnKey, FracKey, HamiltonianFamily};
use super::report::{Report, Status};
use super::system::GaudinSystem;
use super::verify::{apply_to_vector, singular_partitions};
use crate::error::{Error, Result};
use crate::exactalg::{
    algebra_closure, charpoly, joint_numeric_eigen, kernel_basis, restrict_to_subspace, NumericEigen, Poly, QMatrix,
    QVector, Rat, RatFun,
};
use crate::opring::OperatorElement;
use crate::repmod::{decompose, irreducible_module, singular_subspace, truncate, Subspace};
use crate::superdata::{partition_weight, HookPartition, Perm, Weight};

/// Scalar (pseudo-)differential operator with rational coefficients.
pub type ScalarOp = OperatorElement<RatFun>;

/// An exact joint eigenvector of a restricted family.
#[derive(Clone, Debug)]
pub struct ExactEigen {
    /// Coordinates in the module.
    pub vector: QVector,
    /// Eigenvalue of each coefficient matrix.
    pub eigenvalues: BTreeMap<(FnKey, FracKey), Rat>,
    /// `D_v = Σ_k α_k(z) ∂^k`.
    pub op: ScalarOp,
}

/// Joint spectrum of the window family on an invariant subspace.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub subspace: Subspace,
    /// Present when the spectrum is rational (always on 1-dimensional spaces).
    pub exact: Option<Vec<ExactEigen>>,
    pub numeric: NumericEigen,
}

/// Keyed restriction of a family to an invariant subspace.
pub fn restrict_keyed(fam: &HamiltonianFamily, sub: &Subspace) -> Result<BTreeMap<(FnKey, FracKey), QMatrix>> {
    fam.entries()
        .iter()
        .enumerate()
        .map(|(g, (k, q))| {
            restrict_to_subspace(q, &sub.basis)
                .map(|r| (*k, r))
                .map_err(|v| Error::NotInvariant { generator: g, vector: v })
        })
        .collect()
}

fn frac_term(key: &FracKey, c: &Rat, z: &[Rat]) -> RatFun {
    match key {
        FracKey::Poly { degree } => RatFun::from_poly(Poly::monomial(c.clone(), *degree)),
        FracKey::Pole { site, order } => RatFun::pole(c.clone(), &z[*site], *order),
    }
}

/// Scalar operator from per-coefficient eigenvalues; powers below `low` are unknown.
pub fn scalar_operator(eigenvalues: &BTreeMap<(FnKey, FracKey), Rat>, z: &[Rat], low: Option<i64>) -> ScalarOp {
    let mut alpha: BTreeMap<i64, RatFun> = BTreeMap::new();
    for ((f, t), c) in eigenvalues {
        let e = alpha.entry(f.power).or_insert_with(RatFun::zero);
        *e = &*e + &frac_term(t, c, z);
    }
    let op = OperatorElement::from_terms(&RatFun::one(), alpha, 0);
    match low {
        Some(l) => op.forget_below(l),
        None => op,
    }
}

fn combination(mats: &[&QMatrix], coeffs: &[i64], dim: usize) -> QMatrix {
    mats.iter()
        .zip(coeffs)
        .fold(QMatrix::zeros(dim, dim), |acc, (q, c)| acc.add(&q.scale(&Rat::from_int(*c))))
}

/// Exact joint eigenvectors when a random combination has `dim` distinct rational
/// eigenvalues; `None` otherwise.
fn exact_eigen(
    keyed: &BTreeMap<(FnKey, FracKey), QMatrix>,
    sub: &Subspace,
    z: &[Rat],
    low: Option<i64>,
    seed: u64,
) -> Option<Vec<ExactEigen>> {
    let dim = sub.dim();
    let mats: Vec<&QMatrix> = keyed.values().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..5 {
        let coeffs: Vec<i64> = (0..mats.len()).map(|_| rng.gen_range(-7..=7)).collect();
        let x = combination(&mats, &coeffs, dim);
        let roots = charpoly(&x).rational_roots();
        if roots.len() != dim || roots.iter().any(|(_, m)| *m != 1) {
            continue;
        }
        let mut out = Vec::with_capacity(dim);
        for (theta, _) in roots {
            let k = kernel_basis(&x.sub(&QMatrix::scalar(dim, theta)));
            let c = k.into_iter().next()?;
            let pivot = c.iter().position(|v| !v.is_zero())?;
            let mut eigenvalues = BTreeMap::new();
            for (key, q) in keyed {
                let img = q.apply(&c);
                let lam = &img[pivot] / &c[pivot];
                if img.iter().zip(&c).any(|(a, b)| *a != &lam * b) {
                    return None;
                }
                if !lam.is_zero() {
                    eigenvalues.insert(*key, lam);
                }
            }
            let mut vector = vec![Rat::zero(); sub.ambient_dim];
            for (b, x) in sub.basis.iter().zip(&c) {
                for (i, y) in b.iter().enumerate() {
                    vector[i] = &vector[i] + &(x * y);
                }
            }
            let op = scalar_operator(&eigenvalues, z, low);
            out.push(ExactEigen { vector, eigenvalues, op });
        }
        return Some(out);
    }
    None
}

/// Joint eigenvectors of the window family on `sub` and the scalar operators `D_v`.
pub fn joint_eigen(sys: &GaudinSystem, fam: &HamiltonianFamily, sub: &Subspace, tol: f64) -> Result<SpectralData> {
    let keyed = restrict_keyed(fam, sub)?;
    let mats: Vec<QMatrix> = keyed.values().cloned().collect();
    let numeric = joint_numeric_eigen(&mats, sys.seed, tol)?;
    if !numeric.simple {
        return Err(Error::NotSimpleSpectrum);
    }
    let low = fam.keys().map(|k| k.power).min();
    let exact = exact_eigen(&keyed, sub, sys.z(), low, sys.seed);
    Ok(SpectralData {
        subspace: sub.clone(),
        exact,
        numeric,
    })
}

/// Check `Ber(L) v = D_v v` on every known power of `D_v`.
pub fn eigen_operator_holds(sys: &GaudinSystem, e: &ExactEigen) -> Result<bool> {
    let top = sys.window_top(None, 0);
    let low = e.op.low().unwrap_or(top - sys.window as i64);
    let k = (top - low).max(0) as usize;
    let ber = sys.ber_window(k, None, 0)?;
    let bv = apply_to_vector(&ber, &e.vector);
    for p in low..=top {
        let lhs = bv.coeff(p).expect("inside the window");
        let alpha = e.op.coeff(p).unwrap_or_else(RatFun::zero);
        for (i, x) in e.vector.iter().enumerate() {
            let expect = alpha.scale(x);
            if lhs.entry(i, 0) != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Least `r` with `l(λ) ≤ m + r` for every site and every singular partition.
pub fn minimal_r(sys: &GaudinSystem) -> Result<usize> {
    if sys.n() == 0 {
        return Ok(0);
    }
    let mut longest = sys.sites().iter().map(|s| s.partition.len()).max().unwrap_or(0);
    for p in singular_partitions(sys)? {
        longest = longest.max(p.len());
    }
    Ok(longest.saturating_sub(sys.m()))
}

/// The classical gl_{m+r} system whose sites are `L(λ_i)` of gl(m+r|n) truncated to
/// `(m+r|0)`.
pub fn companion_system(sys: &GaudinSystem, r: usize) -> Result<GaudinSystem> {
    let mr = sys.m() + r;
    let mut sites = Vec::new();
    let mut modules = Vec::new();
    for s in sys.sites() {
        let lifted = irreducible_module(&HookPartition::new(s.partition.clone(), mr, sys.n())?)?;
        modules.push(truncate(&lifted, mr, 0)?.module);
        sites.push(HookPartition::new(s.partition.clone(), mr, 0)?);
    }
    let mut c = GaudinSystem::with_site_modules(mr, 0, sites, modules, sys.z().to_vec())?;
    c.u_order = sys.u_order;
    c.window = sys.window;
    c.seed = sys.seed;
    Ok(c)
}

/// First key on which two keyed families (already aligned) disagree spectrally, using
/// each matrix alone and then `trials` random integer combinations.
fn spectral_mismatch(
    a: &BTreeMap<(FnKey, FracKey), QMatrix>,
    b: &BTreeMap<(FnKey, FracKey), QMatrix>,
    dim: usize,
    trials: usize,
    seed: u64,
) -> Option<String> {
    let keys: BTreeSet<(FnKey, FracKey)> = a.keys().chain(b.keys()).copied().collect();
    let zero = QMatrix::zeros(dim, dim);
    let get = |m: &BTreeMap<(FnKey, FracKey), QMatrix>, k: &(FnKey, FracKey)| m.get(k).cloned().unwrap_or_else(|| zero.clone());
    for k in &keys {
        if charpoly(&get(a, k)) != charpoly(&get(b, k)) {
            return Some(format!("{} {}", k.0, k.1));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let av: Vec<QMatrix> = keys.iter().map(|k| get(a, k)).collect();
    let bv: Vec<QMatrix> = keys.iter().map(|k| get(b, k)).collect();
    for t in 0..trials {
        let coeffs: Vec<i64> = (0..keys.len()).map(|_| rng.gen_range(-9..=9)).collect();
        let x = combination(&av.iter().collect::<Vec<_>>(), &coeffs, dim);
        let y = combination(&bv.iter().collect::<Vec<_>>(), &coeffs, dim);
        if charpoly(&x) != charpoly(&y) {
            return Some(format!("random combination {t}"));
        }
    }
    None
}

/// Super-lift comparison: on each singular weight `λ`, the joint spectrum of the super
/// window family equals that of the classical companion shifted by `∂^{−n−r}`.
pub fn super_lift_spectra(sys: &GaudinSystem, r: usize, trials: usize) -> Result<Report> {
    let mut rep = Report::new();
    let st = sys.stamp();
    let rmin = minimal_r(sys)?;
    if r < rmin {
        return Err(Error::BadRange(format!("r = {r} is below the minimal value {rmin}")));
    }
    let (m, n) = (sys.m(), sys.n());
    let shift = (n + r) as i64;
    let classical = companion_system(sys, r)?;
    let sfam = sys.window_family(sys.window)?;
    let cfam = classical.window_family(sys.window)?;
    let id = Perm::identity(m + n);
    let cid = Perm::identity(m + r);
    for (hp, _) in decompose(sys.module())? {
        let lam = hp.partition.clone();
        let mu_s = partition_weight(&lam, m, n)?;
        let mu_c = partition_weight(&lam, m + r, 0)?;
        let vs = singular_subspace(sys.module(), &mu_s, &id);
        let vc = singular_subspace(classical.module(), &mu_c, &cid);
        let inst = json!({
            "m": m, "n": n, "r": r,
            "z": sys.z().iter().map(Rat::to_string).collect::<Vec<_>>(),
            "lambda": lam.parts(),
            "super_dim": vs.dim(), "classical_dim": vc.dim(),
        });
        rep.timed(st, "super_lift", inst, || {
            if vs.dim() != vc.dim() {
                return (Status::Fail, Some(json!("singular space dimensions differ")));
            }
            let ks = match restrict_keyed(&sfam, &vs) {
                Ok(k) => k,
                Err(e) => return (Status::Fail, Some(json!(e.to_string()))),
            };
            let kc = match restrict_keyed(&cfam, &vc) {
                Ok(k) => k,
                Err(e) => return (Status::Fail, Some(json!(e.to_string()))),
            };
            // D ∘ ∂^{−n−r}: classical ∂^k becomes ∂^{k−n−r}; keep the super window
            let lo = sys.window_top(None, 0) - sys.window as i64;
            let kc: BTreeMap<_, _> = kc
                .into_iter()
                .map(|((f, t), q)| ((FnKey::window(f.power - shift), t), q))
                .filter(|((f, _), _)| f.power >= lo)
                .collect();
            match spectral_mismatch(&ks, &kc, vs.dim(), trials, sys.seed) {
                None => (Status::Pass, None),
                Some(w) => (Status::Fail, Some(json!(Error::MultisetMismatch(w).to_string()))),
            }
        });
    }
    Ok(rep)
}

/// Dimension of the algebra generated on the whole module by the u-adic family up to
/// each order, stopping at the first order `N` where orders `N − 1` and `N` agree.
/// Returns `(N, dims)` where `dims[i]` is the dimension at order `i + 1`.
pub fn auto_u_order(sys: &GaudinSystem, cap: usize) -> Result<(usize, Vec<usize>)> {
    let dim = sys.dim();
    let mut dims = Vec::new();
    let mut order = 2;
    loop {
        let order_now = order.min(cap);
        let fam = sys.ber_u_expansion(order_now)?;
        dims.clear();
        for k in 1..=order_now {
            dims.push(algebra_closure(&fam.matrices_up_to_u(k), dim).len());
            if k >= 2 && dims[k - 1] == dims[k - 2] {
                return Ok((k, dims));
            }
        }
        if order_now == cap {
            return Ok((cap, dims));
        }
        order += 2;
    }
}

/// Weight spaces relevant to simple-spectrum checks: all nonzero singular spaces.
pub fn singular_spaces(sys: &GaudinSystem) -> BTreeMap<Weight, Subspace> {
    crate::repmod::singular_space(sys.module(), &Perm::identity(sys.m() + sys.n()))
}
