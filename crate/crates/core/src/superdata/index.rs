use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Element of `I_{m|n}`: a positive integer (even) or a positive half-integer (odd),
/// stored doubled so that `1/2` is `1` and `2` is `4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    twice: u32,
}

impl Label {
    pub fn even(i: u32) -> Self {
        assert!(i >= 1);
        Label { twice: 2 * i }
    }

    /// The half-integer `j − 1/2`, for `j ≥ 1`.
    pub fn odd(j: u32) -> Self {
        assert!(j >= 1);
        Label { twice: 2 * j - 1 }
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn is_odd(self) -> bool {
        self.twice % 2 == 1
    }

    /// Parity bit `|i|`.
    pub fn parity(self) -> u8 {
        (self.twice % 2) as u8
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_odd() {
            write!(f, "{}/2", self.twice)
        } else {
            write!(f, "{}", self.twice / 2)
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid index label {s:?}"));
        match s.trim().split_once('/') {
            Some((p, "2")) => {
                let p: u32 = p.trim().parse().map_err(|_| bad())?;
                if p % 2 == 1 {
                    Ok(Label { twice: p })
                } else {
                    Err(bad())
                }
            }
            Some(_) => Err(bad()),
            None => {
                let i: u32 = s.trim().parse().map_err(|_| bad())?;
                if i == 0 {
                    return Err(bad());
                }
                Ok(Label::even(i))
            }
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The ordered index set `1 < … < m < 1/2 < … < n − 1/2`. Positions are 0-based
/// throughout the library; `pi(k)` is the label at position `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct IndexSet {
    pub m: usize,
    pub n: usize,
}

impl IndexSet {
    pub fn new(m: usize, n: usize) -> Self {
        IndexSet { m, n }
    }

    pub fn len(&self) -> usize {
        self.m + self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pi(&self, pos: usize) -> Label {
        assert!(pos < self.len(), "position out of range");
        if pos < self.m {
            Label::even(pos as u32 + 1)
        } else {
            Label::odd((pos - self.m) as u32 + 1)
        }
    }

    pub fn position(&self, l: Label) -> Option<usize> {
        if l.is_odd() {
            let j = (l.twice as usize).div_ceil(2);
            (j <= self.n).then(|| self.m + j - 1)
        } else {
            let i = l.twice as usize / 2;
            (i <= self.m).then(|| i - 1)
        }
    }

    pub fn labels(&self) -> Vec<Label> {
        (0..self.len()).map(|k| self.pi(k)).collect()
    }

    /// Parity of the label at a position.
    pub fn parity(&self, pos: usize) -> u8 {
        u8::from(pos >= self.m)
    }

    /// The standard sign sequence `(0^m, 1^n)`.
    pub fn standard_signs(&self) -> SignSeq {
        SignSeq::standard(self.m, self.n)
    }
}

/// A `0^m 1^n`-sequence (sign bits must be placed by a permutation of the standard one).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignSeq(pub Vec<u8>);

impl SignSeq {
    pub fn standard(m: usize, n: usize) -> Self {
        SignSeq(std::iter::repeat_n(0, m).chain(std::iter::repeat_n(1, n)).collect())
    }

    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::BadRange("sign bits must be 0 or 1".into()));
        }
        Ok(SignSeq(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.0[i]
    }

    /// `ŝ_i = (−1)^{s_i}`.
    pub fn hat(&self, i: usize) -> i32 {
        if self.0[i] == 0 {
            1
        } else {
            -1
        }
    }

    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&b| b == 0).count()
    }

    pub fn ones(&self) -> usize {
        self.len() - self.zeros()
    }

    pub fn sub(&self, idx: &[usize]) -> SignSeq {
        SignSeq(idx.iter().map(|&i| self.0[i]).collect())
    }
}

/// Permutation of `{0, …, k−1}` in one-line notation (`images[i] = σ(i)`); serialized
/// 1-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(k: usize) -> Self {
        Perm { images: (0..k).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::BadRange(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// From 1-based one-line notation.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::BadRange("one-based images must be positive".into()));
        }
        Perm::from_images(images.iter().map(|i| i - 1).collect())
    }

    /// Transposition of positions `a` and `b`.
    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut p = Perm::identity(k);
        p.images.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `(s^σ)_i = s_{σ⁻¹(i)}`, matching `A^σ = [a_{σ⁻¹(i), σ⁻¹(j)}]`.
    pub fn act_signs(&self, s: &SignSeq) -> SignSeq {
        assert_eq!(s.len(), self.len());
        let inv = self.inverse();
        SignSeq((0..self.len()).map(|i| s.bit(inv.apply(i))).collect())
    }

    /// `a <_σ b` for positions `a, b`, i.e. `σ(a) < σ(b)`.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.images[a] < self.images[b]
    }

    /// Positions listed in `<_σ` order.
    pub fn order(&self) -> Vec<usize> {
        self.inverse().images
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Perm::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// The permutation `σ_p` with `(0^m,1^n)^{σ_p} = (0^p, 1^n, 0^{m−p})`.
pub fn sigma_p(m: usize, n: usize, p: usize) -> Result<Perm> {
    if p < 1 || p > m {
        return Err(Error::BadRange(format!("sigma_p needs 1 <= p <= m, got p={p}, m={m}")));
    }
    let images = (1..=m + n)
        .map(|i| {
            if i <= p {
                i
            } else if i <= m {
                i + n
            } else {
                i - (m - p)
            }
        })
        .collect::<Vec<_>>();
    Perm::from_one_based(&images)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        let ix = IndexSet::new(2, 2);
        let names: Vec<String> = ix.labels().iter().map(Label::to_string).collect();
        assert_eq!(names, ["1", "2", "1/2", "3/2"]);
        for k in 0..4 {
            assert_eq!(ix.position(ix.pi(k)), Some(k));
        }
        assert_eq!("3/2".parse::<Label>().unwrap(), Label::odd(2));
        assert!("2/2".parse::<Label>().is_err());
        assert!(ix.position(Label::even(3)).is_none());
    }

    #[test]
    fn sigma_p_examples() {
        assert_eq!(sigma_p(2, 1, 1).unwrap().one_based(), vec![1, 3, 2]);
        assert_eq!(sigma_p(3, 2, 1).unwrap().one_based(), vec![1, 4, 5, 2, 3]);
        assert!(sigma_p(3, 2, 3).unwrap().is_identity());
        assert!(sigma_p(2, 1, 0).is_err());
        let s = sigma_p(2, 1, 1).unwrap().act_signs(&SignSeq::standard(2, 1));
        assert_eq!(s.0, vec![0, 1, 0]);
        let s = sigma_p(3, 2, 1).unwrap().act_signs(&SignSeq::standard(3, 2));
        assert_eq!(s.0, vec![0, 1, 1, 0, 0]);
    }

    #[test]
    fn sigma_order() {
        let s = sigma_p(2, 1, 1).unwrap();
        // 1 <_σ 1/2 <_σ 2
        assert_eq!(s.order(), vec![0, 2, 1]);
        assert!(s.less(2, 1));
        assert_eq!(Perm::identity(3).order(), vec![0, 1, 2]);
    }
}
