use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::qmatrix::{QMatrix, QVector};
use super::rat::Rat;

/// Clear denominators of a rational row, returning a primitive integer row.
fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let l = Rat::lcm_denominators(row.iter());
    let mut out: Vec<BigInt> = row.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Fraction-free reduced echelon form of an integer matrix: every pivot column is zero
/// outside its pivot row; rows are kept primitive so coefficients stay small.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| rows[i][c].abs())
            else {
                continue;
            };
            rows.swap(r, p);
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let piv_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let g = piv_row[c].gcd(&row[c]);
                let a = &piv_row[c] / &g;
                let b = &row[c] / &g;
                for (x, y) in row.iter_mut().zip(&piv_row) {
                    *x = &a * &*x - &b * y;
                }
                make_primitive(row);
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        Echelon { rows, pivots }
    }

    fn from_rat(m: &QMatrix) -> Self {
        let rows = m.to_dense().iter().map(|r| integer_row(r)).collect();
        Echelon::new(rows, m.cols())
    }
}

pub fn rank(a: &QMatrix) -> usize {
    Echelon::from_rat(a).pivots.len()
}

/// Basis of the right null space, each vector scaled to primitive integers.
pub fn kernel_basis(a: &QMatrix) -> Vec<QVector> {
    let cols = a.cols();
    let e = Echelon::from_rat(a);
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); cols];
        v[f] = Rat::one();
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            if !row[f].is_zero() {
                v[p] = -Rat::from_big(row[f].clone(), row[p].clone());
            }
        }
        let ints = integer_row(&v);
        out.push(ints.into_iter().map(Rat::from_bigint).collect());
    }
    out
}

/// Common kernel of several matrices with the same column count.
pub fn common_kernel(mats: &[&QMatrix], cols: usize) -> Vec<QVector> {
    let total: usize = mats.iter().map(|m| m.rows()).sum();
    let mut t = Vec::new();
    let mut off = 0;
    for m in mats {
        assert_eq!(m.cols(), cols);
        for (i, j, v) in m.triplets() {
            t.push((off + i, j, v.clone()));
        }
        off += m.rows();
    }
    kernel_basis(&QMatrix::from_triplets(total, cols, t))
}

/// Some solution of `a x = b`, if one exists.
pub fn solve(a: &QMatrix, b: &[Rat]) -> Option<QVector> {
    let cols = a.cols();
    let mut dense = a.to_dense();
    for (row, bi) in dense.iter_mut().zip(b) {
        row.push(bi.clone());
    }
    let rows = dense.iter().map(|r| integer_row(r)).collect();
    let e = Echelon::new(rows, cols + 1);
    if e.pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        x[p] = Rat::from_big(row[cols].clone(), row[p].clone());
    }
    Some(x)
}

/// Determinant by Bareiss elimination.
pub fn det(a: &QMatrix) -> Rat {
    assert!(a.is_square());
    let n = a.rows();
    if n == 0 {
        return Rat::one();
    }
    let dense = a.to_dense();
    let mut scale = Rat::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in &dense {
        let l = Rat::lcm_denominators(row.iter());
        scale *= Rat::from_bigint(l.clone());
        m.push(row.iter().map(|r| r.numer() * (&l / r.denom())).collect());
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Rat::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    Rat::from_bigint(sign * &m[n - 1][n - 1]) / scale
}

pub fn inverse(a: &QMatrix) -> Option<QMatrix> {
    assert!(a.is_square());
    let n = a.rows();
    let mut dense = a.to_dense();
    for (i, row) in dense.iter_mut().enumerate() {
        row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
    }
    let rows = dense.iter().map(|r| integer_row(r)).collect();
    let e = Echelon::new(rows, 2 * n);
    if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
        return None;
    }
    let mut t = Vec::new();
    for (i, row) in e.rows.iter().enumerate() {
        for j in 0..n {
            if !row[n + j].is_zero() {
                t.push((i, j, Rat::from_big(row[n + j].clone(), row[i].clone())));
            }
        }
    }
    Some(QMatrix::from_triplets(n, n, t))
}

/// Characteristic polynomial `det(x I − A)` via Hessenberg reduction.
pub fn charpoly(a: &QMatrix) -> Poly {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.to_dense();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let piv = h[m][m - 1].clone();
        for i in m + 1..n {
            if h[i][m - 1].is_zero() {
                continue;
            }
            let u = &h[i][m - 1] / &piv;
            for j in 0..n {
                let t = &u * &h[m][j];
                h[i][j] -= t;
            }
            for row in h.iter_mut() {
                let t = &u * &row[i];
                row[m] += t;
            }
        }
    }
    let mut p: Vec<Poly> = vec![Poly::one()];
    for m in 0..n {
        let mut pm = &Poly::linear(&h[m][m]) * &p[m];
        let mut t = Rat::one();
        for i in 1..=m {
            t *= &h[m - i + 1][m - i];
            let c = &t * &h[m - i][m];
            if !c.is_zero() {
                pm = &pm - &p[m - i].scale(&c);
            }
        }
        p.push(pm);
    }
    p.pop().unwrap()
}

/// Incrementally grown row-reduced basis of a subspace of `Q^len`. Each stored row keeps
/// the combination of inserted vectors that produced it, so membership queries also
/// return coordinates with respect to the inserted (accepted) vectors.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    len: usize,
    rows: Vec<QVector>,
    tags: Vec<QVector>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(len: usize) -> Self {
        SpanBuilder {
            len,
            rows: Vec::new(),
            tags: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    /// Reduce `v` against the basis; returns the residual and the combination used.
    fn reduce(&self, v: &[Rat]) -> (QVector, QVector) {
        assert_eq!(v.len(), self.len);
        let mut r = v.to_vec();
        let mut coords = vec![Rat::zero(); self.rows.len()];
        for (k, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if r[p].is_zero() {
                continue;
            }
            let t = r[p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &t * y;
                }
            }
            coords[k] = t;
        }
        (r, coords)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).0.iter().all(Rat::is_zero)
    }

    /// Coordinates of `v` in terms of the accepted vectors, in insertion order.
    pub fn coordinates(&self, v: &[Rat]) -> Option<QVector> {
        let (r, c) = self.reduce(v);
        if !r.iter().all(Rat::is_zero) {
            return None;
        }
        let mut out = vec![Rat::zero(); self.rows.len()];
        for (ck, tag) in c.iter().zip(&self.tags) {
            if ck.is_zero() {
                continue;
            }
            for (o, t) in out.iter_mut().zip(tag) {
                if !t.is_zero() {
                    *o += ck * t;
                }
            }
        }
        Some(out)
    }

    /// Insert `v`; returns true iff it was independent of the current span.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let (mut r, c) = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let k = self.rows.len();
        // tag of the residual: e_k - sum c_i tag_i
        let mut tag = vec![Rat::zero(); k + 1];
        tag[k] = Rat::one();
        for (ci, ti) in c.iter().zip(&self.tags) {
            if ci.is_zero() {
                continue;
            }
            for (a, b) in tag.iter_mut().zip(ti) {
                *a -= ci * b;
            }
        }
        let inv = r[p].inv().unwrap();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for x in tag.iter_mut() {
            *x *= &inv;
        }
        for t in self.tags.iter_mut() {
            t.push(Rat::zero());
        }
        for i in 0..k {
            if self.rows[i][p].is_zero() {
                continue;
            }
            let f = self.rows[i][p].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            for (x, y) in self.tags[i].iter_mut().zip(&tag) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push(r);
        self.tags.push(tag);
        self.pivots.push(p);
        true
    }
}

/// Linear basis of the unital algebra generated by `gens` acting on `Q^dim`.
pub fn algebra_closure(gens: &[QMatrix], dim: usize) -> Vec<QMatrix> {
    for g in gens {
        assert!(g.rows() == dim && g.cols() == dim, "generator shape");
    }
    let mut span = SpanBuilder::new(dim * dim);
    let mut basis = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let id = QMatrix::identity(dim);
    if span.insert(&id.flatten()) {
        basis.push(id.clone());
        queue.push_back(id);
    }
    while let Some(b) = queue.pop_front() {
        for g in gens {
            let p = b.mul(g);
            if span.insert(&p.flatten()) {
                basis.push(p.clone());
                queue.push_back(p);
            }
        }
    }
    basis
}

/// Matrix of `x` on the invariant subspace spanned by `basis`; `Err(k)` names a basis
/// vector whose image leaves the subspace.
pub fn restrict_to_subspace(x: &QMatrix, basis: &[QVector]) -> Result<QMatrix, usize> {
    let len = x.cols();
    let mut span = SpanBuilder::new(len);
    for b in basis {
        assert!(span.insert(b), "subspace basis is dependent");
    }
    let d = basis.len();
    let mut t = Vec::new();
    for (k, b) in basis.iter().enumerate() {
        let img = x.apply(b);
        let c = span.coordinates(&img).ok_or(k)?;
        for (i, v) in c.into_iter().enumerate() {
            t.push((i, k, v));
        }
    }
    Ok(QMatrix::from_triplets(d, d, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_kernel(a: &QMatrix) {
        let k = kernel_basis(a);
        for v in &k {
            assert!(a.apply(v).iter().all(Rat::is_zero));
        }
        assert_eq!(rank(a) + k.len(), a.cols());
    }

    #[test]
    fn kernels() {
        let a = QMatrix::from_ints(&[&[1, 1], &[1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k, vec![vec![Rat::from_int(-1), Rat::one()]]);
        assert!(kernel_basis(&QMatrix::identity(3)).is_empty());
        let b = QMatrix::from_ints(&[&[1, 2, 3]]);
        assert_eq!(kernel_basis(&b).len(), 2);
        check_kernel(&b);
        check_kernel(&QMatrix::from_ints(&[&[2, 4, 0, 1], &[1, 2, 3, 0], &[3, 6, 3, 1]]));
    }

    #[test]
    fn closure() {
        assert_eq!(algebra_closure(&[], 3).len(), 1);
        let d = QMatrix::from_ints(&[&[1, 0], &[0, 2]]);
        assert_eq!(algebra_closure(&[d], 2).len(), 2);
        let j = QMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        assert_eq!(algebra_closure(&[j], 2).len(), 2);
    }

    #[test]
    fn determinants_and_charpoly() {
        let a = QMatrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(det(&a), Rat::from_int(18));
        let p = charpoly(&a);
        assert_eq!(p.eval(&Rat::zero()), -Rat::from_int(18));
        assert_eq!(p.degree(), Some(3));
        let b = QMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(charpoly(&b), Poly::from_ints(&[-1, 0, 1]));
        let inv = inverse(&a).unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(inverse(&QMatrix::from_ints(&[&[1, 1], &[1, 1]])).is_none());
        assert_eq!(det(&QMatrix::from_ints(&[&[0, 1], &[1, 0]])), Rat::from_int(-1));
    }

    #[test]
    fn solving_and_coordinates() {
        let a = QMatrix::from_ints(&[&[1, 2], &[3, 4]]);
        let x = solve(&a, &[Rat::from_int(5), Rat::from_int(6)]).unwrap();
        assert_eq!(a.apply(&x), vec![Rat::from_int(5), Rat::from_int(6)]);
        let mut s = SpanBuilder::new(3);
        let v1 = vec![Rat::one(), Rat::one(), Rat::zero()];
        let v2 = vec![Rat::zero(), Rat::one(), Rat::one()];
        assert!(s.insert(&v1));
        assert!(s.insert(&v2));
        let w: Vec<Rat> = vec![Rat::from_int(2), Rat::from_int(5), Rat::from_int(3)];
        assert_eq!(s.coordinates(&w), Some(vec![Rat::from_int(2), Rat::from_int(3)]));
        assert!(!s.insert(&w));
    }
}
