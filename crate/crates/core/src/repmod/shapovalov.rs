use super::module::ModuleSpace;
use crate::error::{Error, Result};
use crate::exactalg::{QMatrix, Rat};

/// Gram matrix of the contravariant form on a purely even module, normalized so the
/// highest weight vector of each factor has norm one.
///
/// Each factor must be realized inside a tensor power of `C^m` with its highest weight
/// vector first; the form restricts the standard one on the tensor power. On a tensor
/// product the Gram matrix is the Kronecker product of the factor Gram matrices.
pub fn shapovalov_gram(module: &ModuleSpace) -> Result<QMatrix> {
    if module.n() != 0 {
        return Err(Error::BadRange("the contravariant form is only built for gl_m".into()));
    }
    if module.factors().len() > 1 {
        let mut g = QMatrix::identity(1);
        for f in module.factors() {
            g = g.kron(&shapovalov_gram(f)?);
        }
        return Ok(g);
    }
    let single = module.factors().first().unwrap_or(module);
    let e = single
        .embedding()
        .ok_or_else(|| Error::BadRange("module has no tensor-power realization".into()))?;
    let d = e.vectors.len();
    let dot = |a: &[Rat], b: &[Rat]| a.iter().zip(b).fold(Rat::zero(), |s, (x, y)| &s + &(x * y));
    let norm = dot(&e.vectors[0], &e.vectors[0]);
    let mut t = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let v = &dot(&e.vectors[i], &e.vectors[j]) / &norm;
            if !v.is_zero() {
                t.push((i, j, v));
            }
        }
    }
    Ok(QMatrix::from_triplets(d, d, t))
}

/// Pairs `(a, b)` for which `S(E_ab x, y) = S(x, E_ba y)` fails.
pub fn contravariance_failures(module: &ModuleSpace, gram: &QMatrix) -> Vec<(usize, usize)> {
    let r = module.rank();
    let mut bad = Vec::new();
    for a in 0..r {
        for b in 0..r {
            let lhs = module.action(a, b).transpose().mul(gram);
            let rhs = gram.mul(module.action(b, a));
            if lhs != rhs {
                bad.push((a, b));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmod::{irreducible_module, tensor_product};
    use crate::superdata::HookPartition;

    #[test]
    fn gram_is_symmetric_and_contravariant() {
        let l = irreducible_module(&HookPartition::from_parts(&[2], 2, 0).unwrap()).unwrap();
        let m = tensor_product(&[l.clone(), l]);
        let g = shapovalov_gram(&m).unwrap();
        assert_eq!(g, g.transpose());
        assert_eq!(g.get(0, 0), Rat::one());
        assert!(contravariance_failures(&m, &g).is_empty());
    }
}
