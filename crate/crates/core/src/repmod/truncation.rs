use super::irreducible::singular_subspace;
use super::module::{ModuleSpace, Subspace};
use crate::error::{Error, Result};
use crate::exactalg::{QMatrix, Rat};
use crate::superdata::{partition_weight, partition_weight_sigma, sigma_p, weight_in_truncation, Partition, Perm};

/// `tr_{p|k}(M)` together with the indices of the surviving basis vectors in `M`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub module: ModuleSpace,
    pub indices: Vec<usize>,
}

impl Truncation {
    /// Push a vector of the truncation into the coordinates of the parent module.
    pub fn embed(&self, v: &[Rat], parent_dim: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); parent_dim];
        for (i, x) in self.indices.iter().zip(v) {
            out[*i] = x.clone();
        }
        out
    }

    pub fn embed_subspace(&self, s: &Subspace, parent_dim: usize) -> Subspace {
        Subspace::new(parent_dim, s.basis.iter().map(|v| self.embed(v, parent_dim)).collect())
    }
}

/// Positions of `I_{p|k}` inside `I_{m|n}`.
pub fn truncated_positions(m: usize, p: usize, k: usize) -> Vec<usize> {
    (0..p).chain(m..m + k).collect()
}

/// Span of weight vectors whose weights lie in `Ξ_{p|k}`, as a `gl(p|k)`-module.
/// Tensor products keep their per-site actions, which agrees with truncating each factor.
pub fn truncate(module: &ModuleSpace, p: usize, k: usize) -> Result<Truncation> {
    let (m, n) = (module.m(), module.n());
    if p > m || k > n || p == 0 {
        return Err(Error::BadRange(format!("truncation ({p}|{k}) outside 1 <= p <= {m}, 0 <= k <= {n}")));
    }
    let indices: Vec<usize> = (0..module.dim()).filter(|&i| weight_in_truncation(module.weight(i), p, k)).collect();
    let pos = truncated_positions(m, p, k);
    let restrict = |mat: &QMatrix| mat.select(&indices, &indices);
    let mut actions = Vec::with_capacity(pos.len() * pos.len());
    for &a in &pos {
        for &b in &pos {
            actions.push(restrict(module.action(a, b)));
        }
    }
    let names = indices.iter().map(|&i| module.names()[i].clone()).collect();
    let parity = indices.iter().map(|&i| module.parity(i)).collect();
    let weights = indices.iter().map(|&i| module.weight(i).restrict(p, k)).collect();
    let mut out = ModuleSpace::from_parts(p, k, names, parity, weights, actions);
    if module.num_sites() > 1 {
        let mut sites = Vec::new();
        for s in 0..module.num_sites() {
            let mut site = Vec::new();
            for &a in &pos {
                for &b in &pos {
                    site.push(restrict(module.site_action(s, a, b)));
                }
            }
            sites.push(site);
        }
        let factors = module
            .factors()
            .iter()
            .map(|f| truncate(f, p, k).map(|t| t.module))
            .collect::<Result<Vec<_>>>()?;
        out.set_sites(sites, factors);
    }
    Ok(Truncation { module: out, indices })
}

/// Structural comparison: same names, weights, parities and action matrices.
pub fn same_module(a: &ModuleSpace, b: &ModuleSpace) -> bool {
    a.m() == b.m()
        && a.n() == b.n()
        && a.names() == b.names()
        && a.weights() == b.weights()
        && a.parities() == b.parities()
        && a.actions() == b.actions()
}

/// Both sides of the singular-vector correspondence for `λ ∈ P_{p|n}`: the
/// truncation's ordinary singular space embedded in `M`, and the `σ_p`-singular space
/// of `M` of weight `λ̄^{σ_p}`.
pub fn sigma_singular_correspondence(module: &ModuleSpace, lambda: &Partition, p: usize) -> Result<(Subspace, Subspace)> {
    let (m, n) = (module.m(), module.n());
    if !lambda.is_hook(p, n) {
        return Err(Error::NotHook(lambda.parts().to_vec(), p, n));
    }
    let t = truncate(module, p, n)?;
    let mu_t = partition_weight(lambda, p, n)?;
    let left = singular_subspace(&t.module, &mu_t, &Perm::identity(p + n));
    let left = t.embed_subspace(&left, module.dim());
    let sigma = sigma_p(m, n, p)?;
    let mu_s = partition_weight_sigma(lambda, m, n, p)?;
    let right = singular_subspace(module, &mu_s, &sigma);
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmod::{natural_module, singular_space, tensor_product};

    #[test]
    fn truncation_of_tensor_is_tensor_of_truncations() {
        let v = natural_module(2, 1);
        let t = tensor_product(&[v.clone(), v.clone()]);
        let left = truncate(&t, 1, 1).unwrap().module;
        let tv = truncate(&v, 1, 1).unwrap().module;
        let right = tensor_product(&[tv.clone(), tv]);
        assert!(same_module(&left, &right));
        assert_eq!(left.dim(), 4);
    }

    #[test]
    fn correspondence() {
        let v = natural_module(2, 1);
        let t = tensor_product(&[v.clone(), v]);
        for (parts, p) in [(&[2][..], 1), (&[1, 1][..], 1), (&[2][..], 2), (&[1, 1][..], 2)] {
            let lam = Partition::new(parts.to_vec()).unwrap();
            let (l, r) = sigma_singular_correspondence(&t, &lam, p).unwrap();
            assert!(l.same_span(&r), "{parts:?} p={p}");
            let mu = partition_weight(&lam, 2, 1).unwrap();
            let full = singular_space(&t, &Perm::identity(3));
            assert_eq!(full.get(&mu).map_or(0, Subspace::dim), r.dim());
        }
    }
}
