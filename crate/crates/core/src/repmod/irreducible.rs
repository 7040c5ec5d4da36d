use std::collections::BTreeMap;

use super::module::{natural_module, tensor_product, Embedding, ModuleSpace, Subspace};
use crate::error::{Error, Result};
use crate::exactalg::{common_kernel, Rat, SpanBuilder};
use crate::superdata::{partition_weight, weight_to_partition, HookPartition, Partition, Perm, Weight};

/// Raising generators for the order `<_σ`: `E_{a,b}` with `a <_σ b`.
pub fn raising_generators(m: usize, n: usize, sigma: &Perm) -> Vec<(usize, usize)> {
    let r = m + n;
    let mut out = Vec::new();
    for a in 0..r {
        for b in 0..r {
            if a != b && sigma.less(a, b) {
                out.push((a, b));
            }
        }
    }
    out
}

/// `σ`-singular vectors of weight `μ`: the joint kernel of all `σ`-raising generators
/// on the weight space.
pub fn singular_subspace(module: &ModuleSpace, mu: &Weight, sigma: &Perm) -> Subspace {
    let dim = module.dim();
    let cols: Vec<usize> = (0..dim).filter(|&k| module.weight(k) == mu).collect();
    if cols.is_empty() {
        return Subspace::new(dim, Vec::new());
    }
    let all_rows: Vec<usize> = (0..dim).collect();
    let restricted: Vec<_> = raising_generators(module.m(), module.n(), sigma)
        .into_iter()
        .map(|(a, b)| module.action(a, b).select(&all_rows, &cols))
        .collect();
    let refs: Vec<_> = restricted.iter().collect();
    let kernel = common_kernel(&refs, cols.len());
    let basis = kernel
        .into_iter()
        .map(|v| {
            let mut full = vec![Rat::zero(); dim];
            for (c, x) in cols.iter().zip(v) {
                full[*c] = x;
            }
            full
        })
        .collect();
    Subspace::new(dim, basis)
}

/// All nonzero `σ`-singular weight spaces.
pub fn singular_space(module: &ModuleSpace, sigma: &Perm) -> BTreeMap<Weight, Subspace> {
    let mut out = BTreeMap::new();
    for mu in module.weight_spaces().into_keys() {
        let s = singular_subspace(module, &mu, sigma);
        if !s.is_empty() {
            out.insert(mu, s);
        }
    }
    out
}

/// `M^{σ-sing}`: the direct sum of all `σ`-singular weight spaces, in weight order.
pub fn total_singular_space(module: &ModuleSpace, sigma: &Perm) -> Subspace {
    let basis = singular_space(module, sigma).into_values().flat_map(|s| s.basis).collect();
    Subspace::new(module.dim(), basis)
}

/// Smallest submodule containing `seeds`, spanned by weight vectors obtained by applying
/// the given generators repeatedly. Returns the module on that span with the seeds first.
pub fn cyclic_submodule(module: &ModuleSpace, seeds: &[Vec<Rat>], gens: &[(usize, usize)]) -> Result<ModuleSpace> {
    let dim = module.dim();
    let mut span = SpanBuilder::new(dim);
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for s in seeds {
        if span.insert(s) {
            basis.push(s.clone());
            queue.push_back(basis.len() - 1);
        }
    }
    while let Some(k) = queue.pop_front() {
        for &(a, b) in gens {
            let img = module.action(a, b).apply(&basis[k]);
            if img.iter().all(Rat::is_zero) {
                continue;
            }
            if span.insert(&img) {
                basis.push(img);
                queue.push_back(basis.len() - 1);
            }
        }
    }
    restrict_module(module, &basis)
}

/// Module structure on an invariant span of weight vectors.
pub fn restrict_module(module: &ModuleSpace, basis: &[Vec<Rat>]) -> Result<ModuleSpace> {
    let dim = module.dim();
    let mut span = SpanBuilder::new(dim);
    for b in basis {
        if !span.insert(b) {
            return Err(Error::BadRange("restriction basis is linearly dependent".into()));
        }
    }
    let mut weights = Vec::with_capacity(basis.len());
    let mut parity = Vec::with_capacity(basis.len());
    for b in basis {
        let support: Vec<usize> = (0..dim).filter(|&k| !b[k].is_zero()).collect();
        let w = module.weight(support[0]).clone();
        let p = module.parity(support[0]);
        if support.iter().any(|&k| module.weight(k) != &w || module.parity(k) != p) {
            return Err(Error::BadRange("restriction basis vector is not a homogeneous weight vector".into()));
        }
        weights.push(w);
        parity.push(p);
    }
    let r = module.rank();
    let mut actions = Vec::with_capacity(r * r);
    for a in 0..r {
        for b in 0..r {
            let mut t = Vec::new();
            for (j, v) in basis.iter().enumerate() {
                let img = module.action(a, b).apply(v);
                let c = span
                    .coordinates(&img)
                    .ok_or_else(|| Error::BadRange(format!("span not invariant under generator ({a},{b})")))?;
                for (i, x) in c.into_iter().enumerate() {
                    if !x.is_zero() {
                        t.push((i, j, x));
                    }
                }
            }
            actions.push(crate::exactalg::QMatrix::from_triplets(basis.len(), basis.len(), t));
        }
    }
    let names = (0..basis.len()).map(|k| format!("v{k}")).collect();
    let mut out = ModuleSpace::from_parts(module.m(), module.n(), names, parity, weights, actions);
    let ambient = match module.embedding() {
        Some(e) => Embedding {
            ambient_dim: e.ambient_dim,
            vectors: basis
                .iter()
                .map(|b| {
                    let mut v = vec![Rat::zero(); e.ambient_dim];
                    for (k, x) in b.iter().enumerate() {
                        if !x.is_zero() {
                            for (i, y) in e.vectors[k].iter().enumerate() {
                                v[i] = &v[i] + &(x * y);
                            }
                        }
                    }
                    v
                })
                .collect(),
        },
        None => Embedding {
            ambient_dim: dim,
            vectors: basis.to_vec(),
        },
    };
    out.set_embedding(ambient);
    Ok(out)
}

/// `L(λ)` realized inside `(C^{m|n})^{⊗|λ|}` as the cyclic span of a singular vector
/// of weight `λ̄`. The first basis vector is that highest weight vector.
pub fn irreducible_module(lambda: &HookPartition) -> Result<ModuleSpace> {
    let (m, n) = (lambda.m, lambda.n);
    let mu = partition_weight(&lambda.partition, m, n)?;
    let k = lambda.partition.size() as usize;
    if k == 0 {
        let mut triv = ModuleSpace::from_parts(
            m,
            n,
            vec!["1".into()],
            vec![0],
            vec![Weight::zero(m, n)],
            vec![crate::exactalg::QMatrix::zeros(1, 1); (m + n) * (m + n)],
        );
        triv.set_embedding(Embedding {
            ambient_dim: 1,
            vectors: vec![vec![Rat::one()]],
        });
        return Ok(triv);
    }
    let v = natural_module(m, n);
    let power = tensor_product(&vec![v; k]);
    let id = Perm::identity(m + n);
    let sing = singular_subspace(&power, &mu, &id);
    let seed = sing
        .basis
        .first()
        .ok_or_else(|| Error::BadRange(format!("no singular vector of weight {mu} in the tensor power")))?;
    let lowering: Vec<(usize, usize)> = (0..m + n).flat_map(|a| (0..a).map(move |b| (a, b))).collect();
    let mut out = cyclic_submodule(&power, std::slice::from_ref(seed), &lowering)?;
    let names = (0..out.dim()).map(|i| format!("v{i}")).collect();
    out = rename(out, names);
    Ok(out)
}

fn rename(m: ModuleSpace, names: Vec<String>) -> ModuleSpace {
    let emb = m.embedding().cloned();
    let mut out = ModuleSpace::from_parts(m.m(), m.n(), names, m.parities().to_vec(), m.weights().to_vec(), m.actions().to_vec());
    if let Some(e) = emb {
        out.set_embedding(e);
    }
    out
}

/// `dim L(λ)`.
pub fn irreducible_dim(lambda: &HookPartition) -> Result<usize> {
    Ok(irreducible_module(lambda)?.dim())
}

/// Decomposition of a polynomial module into irreducibles, read off from singular
/// weight spaces. Fails if the summed dimensions do not account for the module.
pub fn decompose(module: &ModuleSpace) -> Result<Vec<(HookPartition, usize)>> {
    let id = Perm::identity(module.rank());
    let mut out = Vec::new();
    let mut total = 0;
    for (mu, s) in singular_space(module, &id) {
        let lambda: Partition = weight_to_partition(&mu)
            .ok_or_else(|| Error::BadRange(format!("singular weight {mu} is not a hook partition weight")))?;
        let hp = HookPartition::new(lambda, module.m(), module.n())?;
        total += irreducible_dim(&hp)? * s.dim();
        out.push((hp, s.dim()));
    }
    if total != module.dim() {
        return Err(Error::BadRange(format!(
            "decomposition accounts for {total} of {} dimensions",
            module.dim()
        )));
    }
    out.sort_by(|a, b| b.0.partition.cmp(&a.0.partition));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(p: &[u32], m: usize, n: usize) -> HookPartition {
        HookPartition::from_parts(p, m, n).unwrap()
    }

    #[test]
    fn dims() {
        assert_eq!(irreducible_dim(&hp(&[2], 2, 0)).unwrap(), 3);
        assert_eq!(irreducible_dim(&hp(&[1, 1], 2, 0)).unwrap(), 1);
        assert_eq!(irreducible_dim(&hp(&[2, 1], 3, 0)).unwrap(), 8);
        assert_eq!(irreducible_dim(&hp(&[2], 1, 1)).unwrap(), 2);
        assert_eq!(irreducible_dim(&hp(&[1, 1], 1, 1)).unwrap(), 2);
        assert_eq!(irreducible_dim(&hp(&[2], 2, 1)).unwrap(), 5);
        assert_eq!(irreducible_dim(&hp(&[1, 1], 2, 1)).unwrap(), 4);
        assert_eq!(irreducible_dim(&hp(&[], 2, 1)).unwrap(), 1);
    }

    #[test]
    fn irreducibles_are_modules() {
        for (p, m, n) in [(&[2, 1][..], 2, 1), (&[3][..], 1, 1), (&[2, 1][..], 1, 1)] {
            let l = irreducible_module(&hp(p, m, n)).unwrap();
            assert!(l.check_weights());
            for a in 0..m + n {
                for b in 0..m + n {
                    for c in 0..m + n {
                        for d in 0..m + n {
                            assert!(l.relation_holds(a, b, c, d));
                        }
                    }
                }
            }
            assert_eq!(decompose(&l).unwrap(), vec![(hp(p, m, n), 1)]);
        }
    }

    #[test]
    fn decompose_tensors() {
        let v = natural_module(1, 1);
        let t = tensor_product(&[v.clone(), v.clone()]);
        assert_eq!(decompose(&t).unwrap(), vec![(hp(&[2], 1, 1), 1), (hp(&[1, 1], 1, 1), 1)]);
        let t3 = tensor_product(&[v.clone(), v.clone(), v]);
        let d = decompose(&t3).unwrap();
        let sum: usize = d.iter().map(|(l, k)| irreducible_dim(l).unwrap() * k).sum();
        assert_eq!(sum, 8);
        let w = natural_module(2, 1);
        let d = decompose(&tensor_product(&[w.clone(), w])).unwrap();
        assert_eq!(d, vec![(hp(&[2], 2, 1), 1), (hp(&[1, 1], 2, 1), 1)]);
    }
}
