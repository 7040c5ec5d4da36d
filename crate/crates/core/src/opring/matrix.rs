use std::fmt::Debug;

use super::coeff::Coeff;
use super::operator::OperatorElement;
use super::useries::{useries_invert, USeries};
use crate::error::{Error, Result};
use crate::exactalg::{Rat, RatFun};
use crate::superdata::{Perm, SignSeq};

/// Ring interface used by the matrix algorithms; products must be associative.
pub trait RingElem: Clone + Debug + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rat) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inverse(&self) -> Result<Self>;
    /// Zero on everything the representation knows.
    fn is_zero(&self) -> bool;
}

impl<C: Coeff> RingElem for OperatorElement<C> {
    fn zero_like(&self) -> Self {
        OperatorElement::zero(self.proto(), self.depth())
    }
    fn one_like(&self) -> Self {
        OperatorElement::d_power(self.proto(), 0, self.depth())
    }
    fn add(&self, o: &Self) -> Self {
        OperatorElement::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        OperatorElement::sub(self, o)
    }
    fn neg(&self) -> Self {
        OperatorElement::neg(self)
    }
    fn scale(&self, c: &Rat) -> Self {
        OperatorElement::scale(self, c)
    }
    fn mul(&self, o: &Self) -> Self {
        OperatorElement::mul(self, o)
    }
    fn inverse(&self) -> Result<Self> {
        OperatorElement::inverse(self)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_in_window()
    }
}

impl<C: Coeff> RingElem for USeries<C> {
    fn zero_like(&self) -> Self {
        USeries::zero(self.proto(), self.order())
    }
    fn one_like(&self) -> Self {
        USeries::one(self.proto(), self.order())
    }
    fn add(&self, o: &Self) -> Self {
        USeries::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        USeries::sub(self, o)
    }
    fn neg(&self) -> Self {
        USeries::neg(self)
    }
    fn scale(&self, c: &Rat) -> Self {
        USeries::scale(self, c)
    }
    fn mul(&self, o: &Self) -> Self {
        USeries::mul(self, o)
    }
    fn inverse(&self) -> Result<Self> {
        useries_invert(self)
    }
    fn is_zero(&self) -> bool {
        USeries::is_zero(self)
    }
}

impl RingElem for RatFun {
    fn zero_like(&self) -> Self {
        RatFun::zero()
    }
    fn one_like(&self) -> Self {
        RatFun::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rat) -> Self {
        RatFun::scale(self, c)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inverse(&self) -> Result<Self> {
        self.inv().ok_or(Error::NonInvertibleSymbol)
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
}

/// Square matrix over a ring, together with its type sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct OpMatrix<R: RingElem> {
    entries: Vec<Vec<R>>,
    signs: SignSeq,
}

impl<R: RingElem> OpMatrix<R> {
    pub fn new(entries: Vec<Vec<R>>, signs: SignSeq) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) || signs.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "need a nonempty square matrix with {n} type bits, got {} bits",
                signs.len()
            )));
        }
        Ok(OpMatrix { entries, signs })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn signs(&self) -> &SignSeq {
        &self.signs
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.entries[i][j] = v;
    }

    pub fn entries(&self) -> &[Vec<R>] {
        &self.entries
    }

    /// `|a_ij| = s_i + s_j`.
    pub fn parity(&self, i: usize, j: usize) -> u8 {
        (self.signs.bit(i) + self.signs.bit(j)) % 2
    }

    /// Standard submatrix on rows and columns `idx` (in the given order).
    pub fn submatrix(&self, idx: &[usize]) -> OpMatrix<R> {
        OpMatrix {
            entries: idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
            signs: self.signs.sub(idx),
        }
    }

    /// `A^σ = [a_{σ⁻¹(i), σ⁻¹(j)}]` with type `s^σ`.
    pub fn permute(&self, sigma: &Perm) -> OpMatrix<R> {
        assert_eq!(sigma.len(), self.size());
        let inv = sigma.inverse();
        let n = self.size();
        OpMatrix {
            entries: (0..n)
                .map(|i| (0..n).map(|j| self.entries[inv.apply(i)][inv.apply(j)].clone()).collect())
                .collect(),
            signs: sigma.act_signs(&self.signs),
        }
    }

    /// Principal quasiminors `d_1, …, d_n` by sequential Schur complements
    /// `Z − Y W⁻¹ X`.
    pub fn quasiminors(&self) -> Result<Vec<R>> {
        let n = self.size();
        let mut b = self.entries.clone();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let d = b[k][k].clone();
            if k + 1 < n {
                let inv = d.inverse().map_err(|e| Error::QuasiminorStage {
                    stage: k + 1,
                    source: Box::new(e),
                })?;
                for i in k + 1..n {
                    if b[i][k].is_zero() {
                        continue;
                    }
                    let left = b[i][k].mul(&inv);
                    for j in k + 1..n {
                        if b[k][j].is_zero() {
                            continue;
                        }
                        let t = left.mul(&b[k][j]);
                        b[i][j] = b[i][j].sub(&t);
                    }
                }
            }
            out.push(d);
        }
        Ok(out)
    }

    /// `Ber^s A = d_1^{ŝ_1} ⋯ d_n^{ŝ_n}`, multiplied left to right.
    pub fn berezinian(&self) -> Result<R> {
        let d = self.quasiminors()?;
        let mut acc: Option<R> = None;
        for (k, dk) in d.into_iter().enumerate() {
            let f = if self.signs.hat(k) == 1 {
                dk
            } else {
                dk.inverse().map_err(|e| Error::QuasiminorStage {
                    stage: k + 1,
                    source: Box::new(e),
                })?
            };
            acc = Some(match acc {
                None => f,
                Some(a) => a.mul(&f),
            });
        }
        Ok(acc.expect("nonempty matrix"))
    }

    /// Column determinant `Σ_σ sgn(σ) a_{σ(1),1} ⋯ a_{σ(n),n}`.
    pub fn cdet(&self) -> R {
        let n = self.size();
        let mut acc = self.entries[0][0].zero_like();
        for (perm, sign) in permutations(n) {
            let mut term: Option<R> = None;
            let mut vanish = false;
            for (col, &row) in perm.iter().enumerate() {
                let e = &self.entries[row][col];
                if e.is_zero() {
                    vanish = true;
                    break;
                }
                term = Some(match term {
                    None => e.clone(),
                    Some(t) => t.mul(e),
                });
            }
            if vanish {
                continue;
            }
            let t = term.unwrap();
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        acc
    }

    /// Super commutator `[x, y] = xy − (−1)^{|x||y|} yx`.
    fn supercommutator(x: &R, px: u8, y: &R, py: u8) -> R {
        let xy = x.mul(y);
        let yx = y.mul(x);
        if px * py == 1 {
            xy.add(&yx)
        } else {
            xy.sub(&yx)
        }
    }

    /// All `(i, j, k, l)` violating
    /// `[a_ij, a_kl] = (−1)^{s_i s_j + s_i s_k + s_j s_k} [a_kj, a_il]`.
    pub fn manin_check(&self) -> Vec<(usize, usize, usize, usize)> {
        let n = self.size();
        let s = |i: usize| self.signs.bit(i) as u32;
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let lhs = Self::supercommutator(
                            &self.entries[i][j],
                            self.parity(i, j),
                            &self.entries[k][l],
                            self.parity(k, l),
                        );
                        let mut rhs = Self::supercommutator(
                            &self.entries[k][j],
                            self.parity(k, j),
                            &self.entries[i][l],
                            self.parity(i, l),
                        );
                        if (s(i) * s(j) + s(i) * s(k) + s(j) * s(k)) % 2 == 1 {
                            rhs = rhs.neg();
                        }
                        if !lhs.sub(&rhs).is_zero() {
                            bad.push((i, j, k, l));
                        }
                    }
                }
            }
        }
        bad
    }

    pub fn mul_matrix(&self, o: &OpMatrix<R>) -> OpMatrix<R> {
        let n = self.size();
        let zero = self.entries[0][0].zero_like();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(zero.clone(), |acc, k| {
                            if self.entries[i][k].is_zero() || o.entries[k][j].is_zero() {
                                acc
                            } else {
                                acc.add(&self.entries[i][k].mul(&o.entries[k][j]))
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        OpMatrix {
            entries,
            signs: self.signs.clone(),
        }
    }

    /// Two-sided inverse by Gauss–Jordan elimination with diagonal pivots.
    pub fn inverse_matrix(&self) -> Result<OpMatrix<R>> {
        let n = self.size();
        let zero = self.entries[0][0].zero_like();
        let one = self.entries[0][0].one_like();
        let mut a = self.entries.clone();
        let mut inv: Vec<Vec<R>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { one.clone() } else { zero.clone() }).collect())
            .collect();
        for k in 0..n {
            let p = a[k][k].inverse().map_err(|e| Error::QuasiminorStage {
                stage: k + 1,
                source: Box::new(e),
            })?;
            for j in 0..n {
                a[k][j] = p.mul(&a[k][j]);
                inv[k][j] = p.mul(&inv[k][j]);
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..n {
                    let t = f.mul(&a[k][j]);
                    a[i][j] = a[i][j].sub(&t);
                    let t = f.mul(&inv[k][j]);
                    inv[i][j] = inv[i][j].sub(&t);
                }
            }
        }
        Ok(OpMatrix {
            entries: inv,
            signs: self.signs.clone(),
        })
    }

    /// The split `A = [[W, X], [Y, Z]]` with `W` of size `k`; returns `(W, Z − Y W⁻¹ X)`.
    pub fn schur_split(&self, k: usize) -> Result<(OpMatrix<R>, OpMatrix<R>)> {
        let n = self.size();
        assert!(k >= 1 && k < n);
        let head: Vec<usize> = (0..k).collect();
        let tail: Vec<usize> = (k..n).collect();
        let w = self.submatrix(&head);
        let winv = w.inverse_matrix()?;
        let zero = self.entries[0][0].zero_like();
        let mut comp = self.submatrix(&tail);
        for (a, &i) in tail.iter().enumerate() {
            for (b, &j) in tail.iter().enumerate() {
                let mut acc = zero.clone();
                for (p, &r) in head.iter().enumerate() {
                    if self.entries[i][r].is_zero() {
                        continue;
                    }
                    for (q, &c) in head.iter().enumerate() {
                        if winv.entries[p][q].is_zero() || self.entries[c][j].is_zero() {
                            continue;
                        }
                        acc = acc.add(&self.entries[i][r].mul(&winv.entries[p][q]).mul(&self.entries[c][j]));
                    }
                }
                comp.entries[a][b] = comp.entries[a][b].sub(&acc);
            }
        }
        Ok((w, comp))
    }
}

/// All permutations of `0..n` with their signs, in lexicographic order.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, out: &mut Vec<(Vec<usize>, i32)>) {
        if cur.len() == n {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if cur[i] > cur[j] {
                        inv += 1;
                    }
                }
            }
            out.push((cur.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, n, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], n, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Poly;

    fn rf(c: &[i64]) -> RatFun {
        RatFun::from_poly(Poly::from_ints(c))
    }

    fn scalar_matrix(e: [[i64; 2]; 2], s: Vec<u8>) -> OpMatrix<RatFun> {
        OpMatrix::new(
            e.iter().map(|r| r.iter().map(|&x| rf(&[x])).collect()).collect(),
            SignSeq(s),
        )
        .unwrap()
    }

    #[test]
    fn scalar_identities() {
        let a = scalar_matrix([[2, 3], [5, 7]], vec![0, 0]);
        let q = a.quasiminors().unwrap();
        assert_eq!(q[1], RatFun::constant(Rat::new(-1, 2)));
        assert_eq!(a.berezinian().unwrap(), a.cdet());
        assert_eq!(a.cdet(), rf(&[-1]));
        let b = scalar_matrix([[2, 0], [0, 5]], vec![0, 1]);
        assert_eq!(b.berezinian().unwrap(), RatFun::constant(Rat::new(2, 5)));
        let sw = b.permute(&Perm::transposition(2, 0, 1));
        assert_eq!(sw.get(0, 0), &rf(&[5]));
        assert_eq!(sw.signs().0, vec![1, 0]);
        assert!(a.manin_check().is_empty());
    }

    #[test]
    fn gauss_jordan_inverse() {
        let a = scalar_matrix([[2, 3], [5, 7]], vec![0, 0]);
        let inv = a.inverse_matrix().unwrap();
        let p = a.mul_matrix(&inv);
        assert_eq!(p.get(0, 0), &RatFun::one());
        assert_eq!(p.get(1, 0), &RatFun::zero());
        let (_, comp) = a.schur_split(1).unwrap();
        assert_eq!(comp.get(0, 0), &a.quasiminors().unwrap()[1]);
    }

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().map(|x| x.1).sum::<i32>(), 0);
    }
}
