use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::exactalg::{QMatrix, QVector, Rat, SpanBuilder};
use crate::superdata::{IndexSet, Weight};

/// A based polynomial gl(m|n)-module: every basis vector is a homogeneous weight vector
/// and every generator `E_{a,b}` acts by an exact matrix.
#[derive(Clone, Debug)]
pub struct ModuleSpace {
    m: usize,
    n: usize,
    names: Vec<String>,
    parity: Vec<u8>,
    weights: Vec<Weight>,
    actions: Vec<QMatrix>,
    /// Per-tensor-factor actions `E^{(i)}_{a,b}`; empty for a module given as one factor.
    sites: Vec<Vec<QMatrix>>,
    factors: Vec<ModuleSpace>,
    embedding: Option<Embedding>,
}

/// Realization of a module inside a tensor power of the natural module.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub ambient_dim: usize,
    /// Image of each basis vector.
    pub vectors: Vec<QVector>,
}

/// Subspace of a module given by exact coordinate vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis: Vec<QVector>,
}

impl Subspace {
    pub fn new(ambient_dim: usize, basis: Vec<QVector>) -> Self {
        Subspace { ambient_dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    fn span(&self) -> SpanBuilder {
        let mut s = SpanBuilder::new(self.ambient_dim);
        for b in &self.basis {
            s.insert(b);
        }
        s
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.span().contains(v)
    }

    /// Equality as subspaces (not as bases).
    pub fn same_span(&self, o: &Subspace) -> bool {
        let s = self.span();
        let t = o.span();
        s.dim() == t.dim() && o.basis.iter().all(|v| s.contains(v))
    }

    /// Matrix with the basis vectors as columns.
    pub fn to_matrix(&self) -> QMatrix {
        QMatrix::from_columns(self.ambient_dim, &self.basis)
    }
}

impl ModuleSpace {
    /// Assemble a module from raw parts; `actions` is indexed by `a·(m+n) + b`.
    pub fn from_parts(
        m: usize,
        n: usize,
        names: Vec<String>,
        parity: Vec<u8>,
        weights: Vec<Weight>,
        actions: Vec<QMatrix>,
    ) -> Self {
        let d = names.len();
        assert_eq!(parity.len(), d);
        assert_eq!(weights.len(), d);
        assert_eq!(actions.len(), (m + n) * (m + n));
        ModuleSpace {
            m,
            n,
            names,
            parity,
            weights,
            actions,
            sites: Vec::new(),
            factors: Vec::new(),
            embedding: None,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index_set(&self) -> IndexSet {
        IndexSet::new(self.m, self.n)
    }

    pub fn rank(&self) -> usize {
        self.m + self.n
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parity(&self, k: usize) -> u8 {
        self.parity[k]
    }

    pub fn parities(&self) -> &[u8] {
        &self.parity
    }

    pub fn weight(&self, k: usize) -> &Weight {
        &self.weights[k]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// `E_{a,b}` for positions `a, b`.
    pub fn action(&self, a: usize, b: usize) -> &QMatrix {
        &self.actions[a * self.rank() + b]
    }

    pub fn actions(&self) -> &[QMatrix] {
        &self.actions
    }

    /// Number of tensor factors (1 for a module that is not a tensor product).
    pub fn num_sites(&self) -> usize {
        self.sites.len().max(1)
    }

    /// `E^{(i)}_{a,b}`: the generator acting on the `i`-th tensor factor.
    pub fn site_action(&self, site: usize, a: usize, b: usize) -> &QMatrix {
        if self.sites.is_empty() {
            assert_eq!(site, 0);
            return self.action(a, b);
        }
        &self.sites[site][a * self.rank() + b]
    }

    pub fn factors(&self) -> &[ModuleSpace] {
        &self.factors
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    pub(crate) fn set_embedding(&mut self, e: Embedding) {
        self.embedding = Some(e);
    }

    pub(crate) fn set_sites(&mut self, sites: Vec<Vec<QMatrix>>, factors: Vec<ModuleSpace>) {
        self.sites = sites;
        self.factors = factors;
    }

    /// Basis indices grouped by weight, in order of first appearance.
    pub fn weight_spaces(&self) -> BTreeMap<Weight, Vec<usize>> {
        let mut out: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (k, w) in self.weights.iter().enumerate() {
            out.entry(w.clone()).or_default().push(k);
        }
        out
    }

    /// Basis of a weight space as coordinate vectors.
    pub fn weight_subspace(&self, mu: &Weight) -> Subspace {
        let d = self.dim();
        let basis = (0..d)
            .filter(|&k| &self.weights[k] == mu)
            .map(|k| {
                let mut v = vec![Rat::zero(); d];
                v[k] = Rat::one();
                v
            })
            .collect();
        Subspace::new(d, basis)
    }

    /// Parity of a generator `E_{a,b}`.
    pub fn generator_parity(&self, a: usize, b: usize) -> u8 {
        let ix = self.index_set();
        (ix.parity(a) + ix.parity(b)) % 2
    }

    /// Check `[E_ab, E_cd] = δ_bc E_ad − (−1)^{|ab||cd|} δ_da E_cb` on one quadruple.
    pub fn relation_holds(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let (x, y) = (self.action(a, b), self.action(c, d));
        let pxy = self.generator_parity(a, b) * self.generator_parity(c, d);
        let xy = x.mul(y);
        let yx = y.mul(x);
        let lhs = if pxy == 1 { xy.add(&yx) } else { xy.sub(&yx) };
        let dim = self.dim();
        let mut rhs = QMatrix::zeros(dim, dim);
        if b == c {
            rhs = rhs.add(self.action(a, d));
        }
        if d == a {
            let t = self.action(c, b);
            rhs = if pxy == 1 { rhs.add(t) } else { rhs.sub(t) };
        }
        lhs == rhs
    }

    /// Sample `trials` random quadruples and return those that violate the relations.
    pub fn check_relations(&self, trials: usize, seed: u64) -> Vec<(usize, usize, usize, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = self.rank();
        let mut bad = Vec::new();
        for _ in 0..trials {
            let q = (rng.gen_range(0..r), rng.gen_range(0..r), rng.gen_range(0..r), rng.gen_range(0..r));
            if !self.relation_holds(q.0, q.1, q.2, q.3) {
                bad.push(q);
            }
        }
        bad
    }

    /// Every `E_ii` acts diagonally by the recorded weights and every `E_ab` moves
    /// weights by `ε_a − ε_b` and preserves the parity rule.
    pub fn check_weights(&self) -> bool {
        let r = self.rank();
        for i in 0..r {
            let e = self.action(i, i);
            for (row, col, v) in e.triplets() {
                if row != col || *v != Rat::from_int(self.weights[col].at(i)) {
                    return false;
                }
            }
            for k in 0..self.dim() {
                if self.weights[k].at(i) != 0 && e.get(k, k).is_zero() {
                    return false;
                }
            }
        }
        for a in 0..r {
            for b in 0..r {
                let p = self.generator_parity(a, b);
                for (row, col, _) in self.action(a, b).triplets() {
                    let mut w = self.weights[col].clone();
                    w = &w + &Weight::epsilon(self.m, self.n, a);
                    w = &w - &Weight::epsilon(self.m, self.n, b);
                    if w != self.weights[row] || (self.parity[col] + p) % 2 != self.parity[row] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Basis vectors whose stored parity differs from the weight-induced parity.
    pub fn parity_mismatches(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.parity[k] != self.weights[k].parity()).collect()
    }

    pub fn to_json(&self) -> Value {
        let ix = self.index_set();
        let weights: serde_json::Map<String, Value> = self
            .names
            .iter()
            .zip(&self.weights)
            .map(|(nm, w)| (nm.clone(), serde_json::to_value(w).expect("weight serializes")))
            .collect();
        let mut actions = serde_json::Map::new();
        for a in 0..self.rank() {
            for b in 0..self.rank() {
                actions.insert(
                    format!("({},{})", ix.pi(a), ix.pi(b)),
                    serde_json::to_value(self.action(a, b)).expect("matrix serializes"),
                );
            }
        }
        json!({"basis": self.names, "weights": weights, "actions": actions})
    }
}

/// `C^{m|n}` with `E_{a,b} e_k = δ_{b,k} e_a`.
pub fn natural_module(m: usize, n: usize) -> ModuleSpace {
    assert!(m >= 1, "natural module needs m >= 1");
    let ix = IndexSet::new(m, n);
    let r = m + n;
    let names = (0..r).map(|k| format!("e{}", ix.pi(k))).collect();
    let parity = (0..r).map(|k| ix.parity(k)).collect();
    let weights = (0..r).map(|k| Weight::epsilon(m, n, k)).collect();
    let mut actions = Vec::with_capacity(r * r);
    for a in 0..r {
        for b in 0..r {
            actions.push(QMatrix::from_triplets(r, r, [(a, b, Rat::one())]));
        }
    }
    ModuleSpace::from_parts(m, n, names, parity, weights, actions)
}

/// Super tensor product with the Koszul rule: `E` acts on factor `i` with the sign
/// `(−1)^{|E|(|v_1|+…+|v_{i−1}|)}`. Basis tuples are row-major.
pub fn tensor_product(factors: &[ModuleSpace]) -> ModuleSpace {
    assert!(!factors.is_empty(), "tensor product needs a factor");
    let (m, n) = (factors[0].m, factors[0].n);
    assert!(factors.iter().all(|f| f.m == m && f.n == n), "factors over different algebras");
    let r = m + n;
    let dims: Vec<usize> = factors.iter().map(ModuleSpace::dim).collect();
    let total: usize = dims.iter().product();
    // strides for row-major indexing
    let mut strides = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let digits = |mut k: usize| -> Vec<usize> {
        let mut d = vec![0; dims.len()];
        for i in 0..dims.len() {
            d[i] = k / strides[i];
            k %= strides[i];
        }
        d
    };
    let mut names = Vec::with_capacity(total);
    let mut parity = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    for k in 0..total {
        let d = digits(k);
        names.push(d.iter().enumerate().map(|(i, &x)| factors[i].names[x].clone()).collect::<Vec<_>>().join("⊗"));
        parity.push((d.iter().enumerate().map(|(i, &x)| factors[i].parity[x] as u32).sum::<u32>() % 2) as u8);
        let mut w = Weight::zero(m, n);
        for (i, &x) in d.iter().enumerate() {
            w = &w + &factors[i].weights[x];
        }
        weights.push(w);
    }
    let mut sites: Vec<Vec<QMatrix>> = Vec::with_capacity(factors.len());
    for (i, f) in factors.iter().enumerate() {
        let mut site = Vec::with_capacity(r * r);
        for a in 0..r {
            for b in 0..r {
                let p = f.generator_parity(a, b);
                let mut t = Vec::new();
                for (row, col, v) in f.action(a, b).triplets() {
                    for k in 0..total {
                        let d = digits(k);
                        if d[i] != col {
                            continue;
                        }
                        let prefix: u32 = (0..i).map(|j| factors[j].parity[d[j]] as u32).sum();
                        let sign = p == 1 && prefix % 2 == 1;
                        let target = k - col * strides[i] + row * strides[i];
                        t.push((target, k, if sign { -v } else { v.clone() }));
                    }
                }
                site.push(QMatrix::from_triplets(total, total, t));
            }
        }
        sites.push(site);
    }
    let actions = (0..r * r)
        .map(|g| sites.iter().fold(QMatrix::zeros(total, total), |acc, s| acc.add(&s[g])))
        .collect();
    let mut out = ModuleSpace::from_parts(m, n, names, parity, weights, actions);
    if factors.len() > 1 {
        out.set_sites(sites, factors.to_vec());
    } else {
        out.factors = factors.to_vec();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(d: usize, k: usize) -> QVector {
        let mut v = vec![Rat::zero(); d];
        v[k] = Rat::one();
        v
    }

    #[test]
    fn natural() {
        let v = natural_module(1, 1);
        assert_eq!(v.dim(), 2);
        assert_eq!(v.parities(), &[0, 1]);
        assert_eq!(v.action(0, 1).apply(&basis(2, 1)), basis(2, 0));
        assert!(v.check_relations(100, 1).is_empty());
        assert!(v.check_weights());
    }

    #[test]
    fn koszul_signs() {
        let v = natural_module(1, 1);
        let t = tensor_product(&[v.clone(), v]);
        assert_eq!(t.dim(), 4);
        // basis: e1⊗e1, e1⊗e1/2, e1/2⊗e1, e1/2⊗e1/2
        let e = t.action(0, 1);
        assert_eq!(e.apply(&basis(4, 2)), basis(4, 0));
        let mut w = basis(4, 1);
        w[2] = -Rat::one();
        let img = t.action(1, 0).apply(&w);
        assert_eq!(img, vec![Rat::zero(), Rat::zero(), Rat::zero(), Rat::from_int(2)]);
        assert!(t.check_relations(100, 2).is_empty());
        assert!(t.check_weights());
        assert!(t.parity_mismatches().is_empty());
    }
}
