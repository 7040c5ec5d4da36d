use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::Rat;

/// Sparse rational matrix stored row-wise; rows hold `(col, value)` sorted by column
/// with no explicit zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Rat)>>,
}

pub type QVector = Vec<Rat>;

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Rat::one())
    }

    pub fn scalar(n: usize, c: Rat) -> Self {
        let mut m = QMatrix::zeros(n, n);
        if !c.is_zero() {
            for i in 0..n {
                m.data[i].push((i, c.clone()));
            }
        }
        m
    }

    pub fn from_triplets(rows: usize, cols: usize, t: impl IntoIterator<Item = (usize, usize, Rat)>) -> Self {
        let mut m = QMatrix::zeros(rows, cols);
        for (i, j, v) in t {
            assert!(i < rows && j < cols, "index out of bounds");
            m.add_entry(i, j, v);
        }
        m
    }

    pub fn from_dense(d: &[Vec<Rat>]) -> Self {
        let rows = d.len();
        let cols = d.first().map_or(0, Vec::len);
        let mut m = QMatrix::zeros(rows, cols);
        for (i, row) in d.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.data[i].push((j, v.clone()));
                }
            }
        }
        m
    }

    pub fn from_ints(d: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rat>> = d
            .iter()
            .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
            .collect();
        QMatrix::from_dense(&dense)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[QVector]) -> Self {
        let mut m = QMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    m.data[i].push((j, v.clone()));
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, Rat)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    /// Add `v` to entry `(i, j)`, keeping the no-explicit-zero invariant.
    pub fn add_entry(&mut self, i: usize, j: usize, v: Rat) {
        if v.is_zero() {
            return;
        }
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => {
                row[k].1 += v;
                if row[k].1.is_zero() {
                    row.remove(k);
                }
            }
            Err(k) => row.insert(k, (j, v)),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        *self == QMatrix::identity(self.rows)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rat>> {
        let mut d = vec![vec![Rat::zero(); self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for (i, j, v) in self.triplets() {
            t.data[j].push((i, v.clone()));
        }
        t
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return QMatrix::zeros(self.rows, self.cols);
        }
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(j, v)| (*j, v * c)).collect())
                .collect(),
        }
    }

    fn merge(&self, o: &QMatrix, sign: bool) -> QMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let mut out = QMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let (a, b) = (&self.data[i], &o.data[i]);
            let (mut x, mut y) = (0, 0);
            let row = &mut out.data[i];
            while x < a.len() || y < b.len() {
                let ja = a.get(x).map_or(usize::MAX, |e| e.0);
                let jb = b.get(y).map_or(usize::MAX, |e| e.0);
                if ja < jb {
                    row.push(a[x].clone());
                    x += 1;
                } else if jb < ja {
                    let v = if sign { b[y].1.clone() } else { -&b[y].1 };
                    row.push((jb, v));
                    y += 1;
                } else {
                    let v = if sign { &a[x].1 + &b[y].1 } else { &a[x].1 - &b[y].1 };
                    if !v.is_zero() {
                        row.push((ja, v));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        out
    }

    pub fn add(&self, o: &QMatrix) -> QMatrix {
        self.merge(o, true)
    }

    pub fn sub(&self, o: &QMatrix) -> QMatrix {
        self.merge(o, false)
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = QMatrix::zeros(self.rows, o.cols);
        let mut acc: Vec<Option<Rat>> = vec![None; o.cols];
        let mut touched = Vec::new();
        for i in 0..self.rows {
            for (k, a) in &self.data[i] {
                for (j, b) in &o.data[*k] {
                    let t = a * b;
                    match &mut acc[*j] {
                        Some(s) => *s += t,
                        slot @ None => {
                            *slot = Some(t);
                            touched.push(*j);
                        }
                    }
                }
            }
            touched.sort_unstable();
            for j in touched.drain(..) {
                let v = acc[j].take().unwrap();
                if !v.is_zero() {
                    out.data[i].push((j, v));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rat]) -> QVector {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| r.iter().map(|(j, a)| a * &v[*j]).sum())
            .collect()
    }

    /// `self * o - o * self`.
    pub fn commutator(&self, o: &QMatrix) -> QMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn commutes_with(&self, o: &QMatrix) -> bool {
        self.commutator(o).is_zero()
    }

    pub fn kron(&self, o: &QMatrix) -> QMatrix {
        let mut out = QMatrix::zeros(self.rows * o.rows, self.cols * o.cols);
        for (i, j, a) in self.triplets() {
            for (k, l, b) in o.triplets() {
                out.data[i * o.rows + k].push((j * o.cols + l, a * b));
            }
        }
        for r in &mut out.data {
            r.sort_by_key(|e| e.0);
        }
        out
    }

    /// Submatrix with the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            pos[c] = k;
        }
        let mut out = QMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (j, v) in &self.data[i] {
                if pos[*j] != usize::MAX {
                    out.data[a].push((pos[*j], v.clone()));
                }
            }
            out.data[a].sort_by_key(|e| e.0);
        }
        out
    }

    /// Row-major flattening, used for linear-span computations on matrix spaces.
    pub fn flatten(&self) -> QVector {
        let mut v = vec![Rat::zero(); self.rows * self.cols];
        for (i, j, a) in self.triplets() {
            v[i * self.cols + j] = a.clone();
        }
        v
    }

    pub fn unflatten(rows: usize, cols: usize, v: &[Rat]) -> QMatrix {
        let mut m = QMatrix::zeros(rows, cols);
        for (k, a) in v.iter().enumerate() {
            if !a.is_zero() {
                m.data[k / cols].push((k % cols, a.clone()));
            }
        }
        m
    }

    pub fn max_abs(&self) -> Rat {
        self.triplets().map(|(_, _, v)| v.abs()).max().unwrap_or_default()
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v.to_f64();
        }
        m
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let s: Vec<String> = row.iter().map(Rat::to_string).collect();
            writeln!(f, "  [{}]", s.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct QMatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Rat)>,
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QMatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.triplets().map(|(i, j, v)| (i, j, v.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = QMatrixRepr::deserialize(d)?;
        if r.entries.iter().any(|(i, j, _)| *i >= r.rows || *j >= r.cols) {
            return Err(D::Error::custom("matrix entry index out of bounds"));
        }
        Ok(QMatrix::from_triplets(r.rows, r.cols, r.entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_arithmetic() {
        let a = QMatrix::from_ints(&[&[1, 2], &[0, 1]]);
        let b = QMatrix::from_ints(&[&[1, -2], &[0, 1]]);
        assert!(a.mul(&b).is_identity());
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.sub(&a).nnz(), 0);
        assert_eq!(a.transpose().get(1, 0), Rat::from_int(2));
    }

    #[test]
    fn json_schema() {
        let a = QMatrix::from_triplets(2, 3, [(0, 2, Rat::new(1, 2))]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":3,"entries":[[0,2,"1/2"]]}"#);
        let back: QMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<QMatrix>(r#"{"rows":1,"cols":1,"entries":[[3,0,"1"]]}"#).is_err());
    }
}
