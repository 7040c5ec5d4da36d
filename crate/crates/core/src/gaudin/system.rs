use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::family::{FnKey, HamiltonianFamily, Provenance};
use crate::error::{Error, Result};
use crate::exactalg::{MatFn, PoleSet, Rat};
use crate::opring::{op_mul, OpMatrix, OperatorElement, USeries, DEFAULT_DEPTH};
use crate::repmod::{irreducible_module, tensor_product, ModuleSpace};
use crate::superdata::{HookPartition, IndexSet, Perm, SignSeq};

/// Operator with matrix-valued rational coefficients acting on the system's module.
pub type MatOp = OperatorElement<MatFn>;

/// Default u-order when none is configured and no adaptive search is requested.
pub const DEFAULT_U_ORDER: usize = 4;

/// A gl(m|n) Gaudin model on `L(λ_1) ⊗ … ⊗ L(λ_ℓ)` at distinct points `z_1, …, z_ℓ`.
#[derive(Debug)]
pub struct GaudinSystem {
    m: usize,
    n: usize,
    sites: Vec<HookPartition>,
    z: Vec<Rat>,
    poles: PoleSet,
    site_modules: Vec<ModuleSpace>,
    module: OnceLock<ModuleSpace>,
    pub u_order: usize,
    pub window: usize,
    pub seed: u64,
}

impl GaudinSystem {
    pub fn new(m: usize, n: usize, sites: Vec<HookPartition>, z: Vec<Rat>) -> Result<Self> {
        let modules = sites.iter().map(irreducible_module).collect::<Result<Vec<_>>>()?;
        Self::with_site_modules(m, n, sites, modules, z)
    }

    /// Build from explicit realizations of the site modules.
    pub fn with_site_modules(
        m: usize,
        n: usize,
        sites: Vec<HookPartition>,
        site_modules: Vec<ModuleSpace>,
        z: Vec<Rat>,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadRange("Gaudin systems need m >= 1".into()));
        }
        if sites.is_empty() || sites.len() != z.len() || site_modules.len() != z.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} sites, {} modules and {} points",
                sites.len(),
                site_modules.len(),
                z.len()
            )));
        }
        for s in &sites {
            if s.m != m || s.n != n {
                return Err(Error::NotHook(s.partition.parts().to_vec(), m, n));
            }
        }
        if site_modules.iter().any(|s| s.m() != m || s.n() != n) {
            return Err(Error::DimensionMismatch("site module over a different algebra".into()));
        }
        for i in 0..z.len() {
            for j in 0..i {
                if z[i] == z[j] {
                    return Err(Error::BadRange(format!("points z_{} and z_{} coincide", j + 1, i + 1)));
                }
            }
        }
        Ok(GaudinSystem {
            m,
            n,
            sites,
            poles: PoleSet::new(z.clone()),
            z,
            site_modules,
            module: OnceLock::new(),
            u_order: DEFAULT_U_ORDER,
            window: DEFAULT_DEPTH,
            seed: 0,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sites(&self) -> &[HookPartition] {
        &self.sites
    }

    pub fn site_modules(&self) -> &[ModuleSpace] {
        &self.site_modules
    }

    pub fn z(&self) -> &[Rat] {
        &self.z
    }

    pub fn poles(&self) -> &PoleSet {
        &self.poles
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn index_set(&self) -> IndexSet {
        IndexSet::new(self.m, self.n)
    }

    /// The tensor product module, built on first use.
    pub fn module(&self) -> &ModuleSpace {
        self.module.get_or_init(|| tensor_product(&self.site_modules))
    }

    pub fn dim(&self) -> usize {
        self.module().dim()
    }

    /// `E_{a,b}(z) = Σ_i E^{(i)}_{a,b} / (z − z_i)`.
    pub fn e_of_z(&self, a: usize, b: usize) -> MatFn {
        let md = self.module();
        let d = md.dim();
        let mut acc = MatFn::zeros(d, d, &self.poles);
        for i in 0..self.num_sites() {
            let x = md.site_action(i, a, b);
            if !x.is_zero() {
                acc = acc.add(&MatFn::pole_term(x, &self.poles, i, 1));
            }
        }
        acc
    }

    fn proto(&self) -> MatFn {
        let d = self.dim();
        MatFn::zeros(d, d, &self.poles)
    }

    /// Positions of the standard subset `I_{p|k}`.
    pub fn subset(&self, p: usize, k: usize) -> Result<Vec<usize>> {
        if p > self.m || k > self.n || p + k == 0 {
            return Err(Error::BadRange(format!("subset ({p}|{k}) outside ({}|{})", self.m, self.n)));
        }
        Ok((0..p).chain(self.m..self.m + k).collect())
    }

    fn positions(&self, subset: Option<&[usize]>) -> Vec<usize> {
        subset.map_or_else(|| (0..self.m + self.n).collect(), <[usize]>::to_vec)
    }

    fn lax_entry(&self, a: usize, b: usize, depth: usize) -> MatOp {
        let ix = self.index_set();
        let e = self.e_of_z(a, b);
        let coeff = if ix.parity(a) == 1 { e } else { e.neg() };
        let mut op = OperatorElement::constant(coeff, depth);
        if a == b {
            op = op.add(&OperatorElement::d_power(&self.proto(), 1, depth));
        }
        op
    }

    fn signs_for(&self, pos: &[usize]) -> SignSeq {
        let ix = self.index_set();
        SignSeq(pos.iter().map(|&p| ix.parity(p)).collect())
    }

    /// `L(z) = [δ_ij ∂ − (−1)^{|i|} E_ij(z)]` on the positions `subset` (all by default),
    /// with entries carrying the window `depth`.
    pub fn lax_matrix(&self, subset: Option<&[usize]>, depth: usize) -> OpMatrix<MatOp> {
        let pos = self.positions(subset);
        let entries = pos
            .iter()
            .map(|&a| pos.iter().map(|&b| self.lax_entry(a, b, depth)).collect())
            .collect();
        OpMatrix::new(entries, self.signs_for(&pos)).expect("square by construction")
    }

    /// `1 + u L(z)` truncated at `u^{order+1}`.
    pub fn lax_u(&self, subset: Option<&[usize]>, order: usize) -> OpMatrix<USeries<MatFn>> {
        let pos = self.positions(subset);
        let proto = self.proto();
        let entries = pos
            .iter()
            .map(|&a| {
                pos.iter()
                    .map(|&b| {
                        let mut terms = vec![OperatorElement::zero(&proto, 0); order + 1];
                        if a == b {
                            terms[0] = OperatorElement::d_power(&proto, 0, 0);
                        }
                        if order >= 1 {
                            terms[1] = self.lax_entry(a, b, 0);
                        }
                        USeries::from_terms(terms).expect("differential terms")
                    })
                    .collect()
            })
            .collect();
        OpMatrix::new(entries, self.signs_for(&pos)).expect("square by construction")
    }

    /// `Ber(1 + uL)` modulo `u^{order+1}`, optionally after permuting by `σ`.
    pub fn ber_u_series(&self, subset: Option<&[usize]>, order: usize, sigma: Option<&Perm>) -> Result<USeries<MatFn>> {
        let mut a = self.lax_u(subset, order);
        if let Some(s) = sigma {
            a = a.permute(s);
        }
        a.berezinian()
    }

    /// Column determinant of `1 + uL` modulo `u^{order+1}`.
    pub fn cdet_u_series(&self, subset: Option<&[usize]>, order: usize) -> USeries<MatFn> {
        self.lax_u(subset, order).cdet()
    }

    /// Hamiltonian family `b_ij(z)` from `Ber(1 + uL)`: the coefficient of `u^i ∂^{i−j}`.
    pub fn ber_u_expansion(&self, order: usize) -> Result<HamiltonianFamily> {
        if order == 0 {
            return Err(Error::BadRange("u-order must be at least 1".into()));
        }
        let b = self.ber_u_series(None, order, None)?;
        HamiltonianFamily::from_u_series(&b, &self.poles, Provenance::UAdic)
    }

    /// Top ∂-power of `Ber(L_P)·∂^shift`.
    pub fn window_top(&self, subset: Option<&[usize]>, shift: i64) -> i64 {
        let pos = self.positions(subset);
        let s = self.signs_for(&pos);
        s.zeros() as i64 - s.ones() as i64 + shift
    }

    /// `Ber(L_P(z)) ∂^shift` with every coefficient at `∂^k`, `k ≥ top − K`, exact.
    /// The internal depth grows until the requested region is fully known.
    pub fn ber_window(&self, k: usize, subset: Option<&[usize]>, shift: i64) -> Result<MatOp> {
        let target = self.window_top(subset, shift) - k as i64;
        let mut depth = k + 2;
        loop {
            let l = self.lax_matrix(subset, depth);
            let ber = l.berezinian()?;
            let shifted = op_mul(&ber, &OperatorElement::d_power(&self.proto(), shift, depth), depth);
            if shifted.low().is_none_or(|lo| lo <= target) {
                return Ok(shifted.truncate_below(target).with_depth(k));
            }
            if depth > 4 * k + 16 {
                return Err(Error::Internal(format!(
                    "window depth {depth} did not reach power {target}"
                )));
            }
            depth += 2;
        }
    }

    /// Window family `b_k(z)`: coefficients of `Ber(L(z))` down to `top − K`.
    pub fn window_family(&self, k: usize) -> Result<HamiltonianFamily> {
        let op = self.ber_window(k, None, 0)?;
        let top = self.window_top(None, 0);
        let mut fam = HamiltonianFamily::empty(Provenance::Window, &self.poles);
        for p in (top - k as i64)..=top {
            let c = op.coeff(p).expect("inside the window");
            fam.insert(FnKey::window(p), c)?;
        }
        Ok(fam)
    }
}

/// `ℓ` distinct integers from `[−10ℓ, 10ℓ]`, drawn from a seeded generator.
pub fn random_points(ell: usize, seed: u64) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = 10 * ell as i64;
    let pool: Vec<i64> = (-bound..=bound).collect();
    pool.choose_multiple(&mut rng, ell).map(|&v| Rat::from_int(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::QMatrix;

    fn naturals(m: usize, n: usize, z: &[i64]) -> GaudinSystem {
        let site = HookPartition::from_parts(&[1], m, n).unwrap();
        GaudinSystem::new(m, n, vec![site; z.len()], z.iter().map(|&v| Rat::from_int(v)).collect()).unwrap()
    }

    #[test]
    fn lax_is_manin() {
        for (m, n) in [(2, 0), (1, 1), (2, 1)] {
            let s = naturals(m, n, &[0, 2]);
            let l = s.lax_matrix(None, 4);
            assert!(l.manin_check().is_empty(), "({m}|{n})");
        }
    }

    #[test]
    fn gl11_signs() {
        let s = naturals(1, 1, &[0]);
        let l = s.lax_matrix(None, 3);
        let e = s.e_of_z(1, 0);
        assert_eq!(l.get(1, 0), &OperatorElement::constant(e, 3));
        let e = s.e_of_z(0, 1);
        assert_eq!(l.get(0, 1), &OperatorElement::constant(e.neg(), 3));
    }

    #[test]
    fn gl2_window_is_cdet() {
        let s = naturals(2, 0, &[0, 2]);
        let w = s.ber_window(6, None, 0).unwrap();
        let c = s.lax_matrix(None, 6).cdet();
        assert!(c.is_exact());
        assert_eq!(w.top(), Some(2));
        for k in -4..=2 {
            assert_eq!(w.coeff(k), c.coeff(k));
        }
    }

    #[test]
    fn gl11_window_monic() {
        let s = naturals(1, 1, &[0, 3]);
        let w = s.ber_window(6, None, 0).unwrap();
        assert_eq!(w.coeff(0).unwrap().as_constant(), Some(QMatrix::identity(4)));
        assert_eq!(w.low(), Some(-6));
    }

    #[test]
    fn first_order_u_terms() {
        let s = naturals(2, 0, &[0, 2]);
        let fam = s.ber_u_expansion(1).unwrap();
        assert_eq!(fam.function(&FnKey::u_adic(0, 0)).as_constant(), Some(QMatrix::identity(4)));
        assert_eq!(fam.function(&FnKey::u_adic(1, 0)).as_constant(), Some(QMatrix::scalar(4, Rat::from_int(2))));
        let tr = s.e_of_z(0, 0).add(&s.e_of_z(1, 1)).neg();
        assert_eq!(fam.function(&FnKey::u_adic(1, 1)), tr);
    }

    #[test]
    fn sampler() {
        let z = random_points(3, 7);
        assert_eq!(z.len(), 3);
        assert_eq!(z, random_points(3, 7));
        assert!(z.iter().all(|v| v.to_f64().abs() <= 30.0));
    }
}
