use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::index::{IndexSet, Label};
use crate::error::{Error, Result};

/// A partition, weakly decreasing with positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::BadRange(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `λ_i` with 1-based `i`, zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            panic!("parts are 1-indexed");
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.0.first().copied().unwrap_or(0);
        Partition((1..=w).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    pub fn is_hook(&self, m: usize, n: usize) -> bool {
        self.part(m + 1) as usize <= n
    }

    /// All partitions of `k`, in reverse lexicographic order.
    pub fn all_of_size(k: u32) -> Vec<Partition> {
        fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                go(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(k, k, &mut Vec::new(), &mut out);
        out
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Partition::new(Vec::<u32>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// A partition checked against an `(m|n)` hook condition.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct HookPartition {
    pub partition: Partition,
    pub m: usize,
    pub n: usize,
}

impl HookPartition {
    pub fn new(partition: Partition, m: usize, n: usize) -> Result<Self> {
        if !partition.is_hook(m, n) {
            return Err(Error::NotHook(partition.parts().to_vec(), m, n));
        }
        Ok(HookPartition { partition, m, n })
    }

    pub fn from_parts(parts: &[u32], m: usize, n: usize) -> Result<Self> {
        HookPartition::new(Partition::new(parts.to_vec())?, m, n)
    }

    pub fn weight(&self) -> Weight {
        partition_weight_unchecked(&self.partition, self.m, self.n)
    }
}

pub fn hook_check(lambda: &Partition, m: usize, n: usize) -> bool {
    lambda.is_hook(m, n)
}

/// `⟨r⟩ = max(r, 0)`.
fn pos(r: i64) -> i64 {
    r.max(0)
}

/// Weight of `I_{m|n}` as a total map, stored by position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    m: usize,
    n: usize,
    values: Vec<i64>,
}

impl Weight {
    pub fn zero(m: usize, n: usize) -> Self {
        Weight { m, n, values: vec![0; m + n] }
    }

    pub fn from_values(m: usize, n: usize, values: Vec<i64>) -> Self {
        assert_eq!(values.len(), m + n);
        Weight { m, n, values }
    }

    /// `ε` at a position.
    pub fn epsilon(m: usize, n: usize, pos: usize) -> Self {
        let mut w = Weight::zero(m, n);
        w.values[pos] = 1;
        w
    }

    pub fn index_set(&self) -> IndexSet {
        IndexSet::new(self.m, self.n)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `μ(E_ii)` at a position.
    pub fn at(&self, pos: usize) -> i64 {
        self.values[pos]
    }

    pub fn get(&self, l: Label) -> i64 {
        self.index_set().position(l).map_or(0, |p| self.values[p])
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0)
    }

    pub fn size(&self) -> i64 {
        self.values.iter().sum()
    }

    /// Parity `Σ_{odd i} μ(E_ii) mod 2`.
    pub fn parity(&self) -> u8 {
        (self.values[self.m..].iter().sum::<i64>().rem_euclid(2)) as u8
    }

    /// Restriction to the labels of `I_{p|k} ⊆ I_{m|n}`.
    pub fn restrict(&self, p: usize, k: usize) -> Weight {
        let mut v: Vec<i64> = self.values[..p].to_vec();
        v.extend_from_slice(&self.values[self.m..self.m + k]);
        Weight { m: p, n: k, values: v }
    }

    /// Embed a weight of `I_{p|k}` into `I_{m|n}` by zero extension.
    pub fn extend(&self, m: usize, n: usize) -> Weight {
        assert!(self.m <= m && self.n <= n);
        let mut w = Weight::zero(m, n);
        w.values[..self.m].copy_from_slice(&self.values[..self.m]);
        w.values[m..m + self.n].copy_from_slice(&self.values[self.m..]);
        w
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        assert_eq!((self.m, self.n), (o.m, o.n));
        Weight {
            m: self.m,
            n: self.n,
            values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        assert_eq!((self.m, self.n), (o.m, o.n));
        Weight {
            m: self.m,
            n: self.n,
            values: self.values.iter().zip(&o.values).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ix = self.index_set();
        let terms: Vec<String> = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(p, v)| format!("{v}e{}", ix.pi(p)))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight[{}|{}]({})", self.m, self.n, self)
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ix = self.index_set();
        let map: BTreeMap<usize, (String, i64)> = self
            .values
            .iter()
            .enumerate()
            .map(|(p, &v)| (p, (ix.pi(p).to_string(), v)))
            .collect();
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(map.len()))?;
        for (_, (k, v)) in map {
            m.serialize_entry(&k, &v)?;
        }
        m.end()
    }
}

fn partition_weight_unchecked(lambda: &Partition, m: usize, n: usize) -> Weight {
    let conj = lambda.conjugate();
    let mut w = Weight::zero(m, n);
    for i in 1..=m {
        w.values[i - 1] = lambda.part(i) as i64;
    }
    for i in 1..=n {
        w.values[m + i - 1] = pos(conj.part(i) as i64 - m as i64);
    }
    w
}

/// `λ̄^{m|n}`.
pub fn partition_weight(lambda: &Partition, m: usize, n: usize) -> Result<Weight> {
    if !lambda.is_hook(m, n) {
        return Err(Error::NotHook(lambda.parts().to_vec(), m, n));
    }
    Ok(partition_weight_unchecked(lambda, m, n))
}

/// `λ̄^{σ_p}`.
pub fn partition_weight_sigma(lambda: &Partition, m: usize, n: usize, p: usize) -> Result<Weight> {
    if !lambda.is_hook(m, n) {
        return Err(Error::NotHook(lambda.parts().to_vec(), m, n));
    }
    if p < 1 || p > m {
        return Err(Error::BadRange(format!("need 1 <= p <= m, got p={p}")));
    }
    let conj = lambda.conjugate();
    let mut w = Weight::zero(m, n);
    for i in 1..=p {
        w.values[i - 1] = lambda.part(i) as i64;
    }
    for i in 1..=n {
        w.values[m + i - 1] = pos(conj.part(i) as i64 - p as i64);
    }
    for i in p + 1..=m {
        w.values[i - 1] = pos(lambda.part(i) as i64 - n as i64);
    }
    Ok(w)
}

/// Inverse of `partition_weight` on dominant polynomial weights: the partition whose
/// first `m` rows are the even values and whose remaining columns are the odd values.
pub fn weight_to_partition(mu: &Weight) -> Option<Partition> {
    let (m, n) = (mu.m, mu.n);
    let even: Vec<u32> = mu.values[..m].iter().map(|&v| u32::try_from(v).ok()).collect::<Option<_>>()?;
    let odd: Vec<u32> = mu.values[m..].iter().map(|&v| u32::try_from(v).ok()).collect::<Option<_>>()?;
    let tail = Partition::new(odd).ok()?.conjugate();
    let mut parts = Partition::new(even).ok()?.0;
    if tail.is_empty() {
        return Some(Partition(parts));
    }
    if parts.len() < m || parts.last().copied().unwrap_or(0) < tail.part(1) {
        return None;
    }
    parts.extend_from_slice(tail.parts());
    let p = Partition(parts);
    (p.is_hook(m, n) && partition_weight_unchecked(&p, m, n) == *mu).then_some(p)
}

/// Membership `μ ∈ Ξ_{p|k}`: `μ` vanishes on even labels past `p` and odd labels past
/// `k − 1/2`.
pub fn weight_in_truncation(mu: &Weight, p: usize, k: usize) -> bool {
    mu.values[p.min(mu.m)..mu.m].iter().all(|&v| v == 0)
        && mu.values[mu.m + k.min(mu.n)..].iter().all(|&v| v == 0)
}

/// `(μ+γ)(E_ii) = 0 ⟺ μ(E_ii) = 0 = γ(E_ii)` for every label.
pub fn additivity_check(mu: &Weight, gamma: &Weight) -> bool {
    let s = mu + gamma;
    (0..s.values.len()).all(|i| (s.values[i] == 0) == (mu.values[i] == 0 && gamma.values[i] == 0))
}

/// Simple roots and coroots of `gl_m`; indices are 0-based (`α_i = ε_i − ε_{i+1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootData {
    pub m: usize,
}

impl RootData {
    pub fn new(m: usize) -> Self {
        RootData { m }
    }

    pub fn rank(&self) -> usize {
        self.m.saturating_sub(1)
    }

    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        assert!(i + 1 < self.m);
        let mut v = vec![0; self.m];
        v[i] = 1;
        v[i + 1] = -1;
        v
    }

    /// `ǎ_i(μ) = μ_i − μ_{i+1}`.
    pub fn coroot(&self, i: usize, mu: &[i64]) -> i64 {
        mu[i] - mu[i + 1]
    }

    /// `α_i(ǎ_j)`.
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        self.coroot(j, &self.simple_root(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn hooks_and_conjugates() {
        assert!(hook_check(&part(&[2, 1]), 1, 1));
        assert!(!hook_check(&part(&[2, 2]), 1, 1));
        assert!(hook_check(&part(&[5]), 1, 0));
        assert_eq!(part(&[3, 2]).conjugate(), part(&[2, 2, 1]));
        assert_eq!(Partition::all_of_size(4).len(), 5);
    }

    #[test]
    fn weights() {
        let w = partition_weight(&part(&[2, 1]), 1, 1).unwrap();
        assert_eq!(w.values(), &[2, 1]);
        let w = partition_weight(&part(&[2, 2, 1]), 1, 2).unwrap();
        assert_eq!(w.values(), &[2, 2, 1]);
        assert!(partition_weight(&part(&[2, 2]), 1, 1).is_err());
        let s = partition_weight_sigma(&part(&[2, 1]), 2, 1, 1).unwrap();
        assert_eq!(s.values(), &[2, 0, 1]);
        let s = partition_weight_sigma(&part(&[3, 3]), 2, 1, 1).unwrap();
        assert_eq!(s.values(), &[3, 2, 1]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"1":3,"2":2,"1/2":1}"#);
    }

    #[test]
    fn weight_inversion() {
        for k in 1..=6 {
            for p in Partition::all_of_size(k) {
                for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 0), (3, 2)] {
                    if let Ok(w) = partition_weight(&p, m, n) {
                        assert_eq!(weight_to_partition(&w), Some(p.clone()), "{p} in ({m}|{n})");
                    }
                }
            }
        }
        assert_eq!(weight_to_partition(&Weight::from_values(1, 1, vec![0, 1])), None);
    }

    #[test]
    fn truncation_membership() {
        assert!(weight_in_truncation(&Weight::from_values(2, 1, vec![2, 0, 0]), 1, 0));
        assert!(!weight_in_truncation(&Weight::from_values(2, 1, vec![0, 1, 0]), 1, 1));
        assert!(!weight_in_truncation(&Weight::from_values(2, 1, vec![1, 0, 1]), 1, 0));
        assert!(additivity_check(&Weight::epsilon(2, 1, 0), &Weight::epsilon(2, 1, 1)));
    }

    #[test]
    fn roots() {
        let r = RootData::new(3);
        assert_eq!(r.cartan(0, 0), 2);
        assert_eq!(r.cartan(0, 1), -1);
        assert_eq!(r.rank(), 2);
    }
}
