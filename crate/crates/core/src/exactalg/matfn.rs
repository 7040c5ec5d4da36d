use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::poly::Poly;
use super::qmatrix::QMatrix;
use super::ratfun::RatFun;
use super::rat::Rat;
use crate::error::Result;

/// Ordered set of distinct points that all denominators factor over.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoleSet(Arc<Vec<Rat>>);

impl PoleSet {
    pub fn new(points: Vec<Rat>) -> Self {
        for (i, a) in points.iter().enumerate() {
            assert!(!points[..i].contains(a), "pole points must be distinct");
        }
        PoleSet(Arc::new(points))
    }

    pub fn points(&self) -> &[Rat] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Matrix of rational functions `N(z) / Π (z − z_i)^{e_i}` with one shared denominator,
/// kept in lowest terms with respect to that denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct MatFn {
    rows: usize,
    cols: usize,
    poles: PoleSet,
    exps: Vec<u32>,
    data: Vec<Vec<(usize, Poly)>>,
}

impl MatFn {
    pub fn zeros(rows: usize, cols: usize, poles: &PoleSet) -> Self {
        MatFn {
            rows,
            cols,
            poles: poles.clone(),
            exps: vec![0; poles.len()],
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize, poles: &PoleSet) -> Self {
        MatFn::constant(&QMatrix::identity(n), poles)
    }

    pub fn constant(q: &QMatrix, poles: &PoleSet) -> Self {
        let mut m = MatFn::zeros(q.rows(), q.cols(), poles);
        for i in 0..q.rows() {
            m.data[i] = q.row(i).iter().map(|(j, v)| (*j, Poly::constant(v.clone()))).collect();
        }
        m
    }

    /// `q / (z − z_site)^order`.
    pub fn pole_term(q: &QMatrix, poles: &PoleSet, site: usize, order: u32) -> Self {
        let mut m = MatFn::constant(q, poles);
        if !m.is_zero() {
            m.exps[site] = order;
        }
        m
    }

    /// `q · z^degree`.
    pub fn poly_term(q: &QMatrix, poles: &PoleSet, degree: usize) -> Self {
        let mut m = MatFn::zeros(q.rows(), q.cols(), poles);
        for i in 0..q.rows() {
            m.data[i] = q
                .row(i)
                .iter()
                .map(|(j, v)| (*j, Poly::monomial(v.clone(), degree)))
                .collect();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn poles(&self) -> &PoleSet {
        &self.poles
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn denominator(&self) -> Poly {
        let mut d = Poly::one();
        for (a, &e) in self.poles.points().iter().zip(&self.exps) {
            if e > 0 {
                d = &d * &Poly::linear(a).pow(e);
            }
        }
        d
    }

    pub fn numerator(&self, i: usize, j: usize) -> Poly {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => Poly::zero(),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> RatFun {
        RatFun::new(self.numerator(i, j), self.denominator())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
            && self.data.iter().flatten().all(|(_, p)| p.is_constant())
    }

    /// Value as a constant matrix, if z-independent.
    pub fn as_constant(&self) -> Option<QMatrix> {
        if !self.is_constant() {
            return None;
        }
        Some(QMatrix::from_triplets(
            self.rows,
            self.cols,
            self.data
                .iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().map(move |(j, p)| (i, *j, p.coeff(0)))),
        ))
    }

    fn normalize(mut self) -> Self {
        self.data.iter_mut().for_each(|r| r.retain(|(_, p)| !p.is_zero()));
        if self.is_zero() {
            self.exps.iter_mut().for_each(|e| *e = 0);
            return self;
        }
        for s in 0..self.poles.len() {
            let a = self.poles.points()[s].clone();
            while self.exps[s] > 0 && self.data.iter().flatten().all(|(_, p)| p.eval(&a).is_zero()) {
                for (_, p) in self.data.iter_mut().flatten() {
                    *p = p.div_linear(&a).0;
                }
                self.exps[s] -= 1;
            }
        }
        self
    }

    /// Multiply all numerators by `Π (z − z_i)^{target_i − e_i}`.
    fn lift_to(&self, target: &[u32]) -> Vec<Vec<(usize, Poly)>> {
        let mut f = Poly::one();
        for (s, (&t, &e)) in target.iter().zip(&self.exps).enumerate() {
            if t > e {
                f = &f * &Poly::linear(&self.poles.points()[s]).pow(t - e);
            }
        }
        if f.is_one() {
            return self.data.clone();
        }
        self.data
            .iter()
            .map(|r| r.iter().map(|(j, p)| (*j, p * &f)).collect())
            .collect()
    }

    fn check_compatible(&self, o: &MatFn) {
        assert!(self.poles == o.poles, "pole sets differ");
    }

    fn combine(&self, o: &MatFn, sign: bool) -> MatFn {
        self.check_compatible(o);
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let target: Vec<u32> = self.exps.iter().zip(&o.exps).map(|(a, b)| *a.max(b)).collect();
        let a = self.lift_to(&target);
        let b = o.lift_to(&target);
        let mut data = Vec::with_capacity(self.rows);
        for (ra, rb) in a.into_iter().zip(b) {
            let mut m: BTreeMap<usize, Poly> = ra.into_iter().collect();
            for (j, p) in rb {
                let e = m.entry(j).or_insert_with(Poly::zero);
                *e = if sign { &*e + &p } else { &*e - &p };
            }
            data.push(m.into_iter().filter(|(_, p)| !p.is_zero()).collect());
        }
        MatFn {
            rows: self.rows,
            cols: self.cols,
            poles: self.poles.clone(),
            exps: target,
            data,
        }
        .normalize()
    }

    pub fn add(&self, o: &MatFn) -> MatFn {
        self.combine(o, true)
    }

    pub fn sub(&self, o: &MatFn) -> MatFn {
        self.combine(o, false)
    }

    pub fn neg(&self) -> MatFn {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> MatFn {
        if c.is_zero() {
            return MatFn::zeros(self.rows, self.cols, &self.poles);
        }
        let mut out = self.clone();
        for (_, p) in out.data.iter_mut().flatten() {
            *p = p.scale(c);
        }
        out
    }

    /// Multiply every entry by the scalar rational function `f`, whose poles must lie in
    /// the pole set.
    pub fn scale_fn(&self, f: &RatFun) -> Result<MatFn> {
        let (poly, terms) = f.partial_fractions(self.poles.points())?;
        let mut acc = MatFn::zeros(self.rows, self.cols, &self.poles);
        let mut pp = self.clone();
        for (_, p) in pp.data.iter_mut().flatten() {
            *p = &*p * &poly;
        }
        acc = acc.add(&pp.normalize());
        for t in terms {
            let mut q = self.clone();
            q.exps[t.pole_index] += t.order;
            acc = acc.add(&q.scale(&t.coeff).normalize());
        }
        Ok(acc)
    }

    pub fn mul(&self, o: &MatFn) -> MatFn {
        self.check_compatible(o);
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut data = Vec::with_capacity(self.rows);
        for r in &self.data {
            let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
            for (k, a) in r {
                for (j, b) in &o.data[*k] {
                    let t = a * b;
                    match acc.get_mut(j) {
                        Some(s) => *s = &*s + &t,
                        None => {
                            acc.insert(*j, t);
                        }
                    }
                }
            }
            data.push(acc.into_iter().filter(|(_, p)| !p.is_zero()).collect());
        }
        let exps = self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect();
        MatFn {
            rows: self.rows,
            cols: o.cols,
            poles: self.poles.clone(),
            exps,
            data,
        }
        .normalize()
    }

    pub fn derive(&self) -> MatFn {
        if self.is_zero() {
            return self.clone();
        }
        let pts = self.poles.points();
        let active: Vec<usize> = (0..pts.len()).filter(|&s| self.exps[s] > 0).collect();
        let mut prod_all = Poly::one();
        for &s in &active {
            prod_all = &prod_all * &Poly::linear(&pts[s]);
        }
        let mut weighted = Poly::zero();
        for &s in &active {
            let mut t = Poly::constant(Rat::from_int(self.exps[s] as i64));
            for &u in &active {
                if u != s {
                    t = &t * &Poly::linear(&pts[u]);
                }
            }
            weighted = &weighted + &t;
        }
        let data = self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(j, p)| (*j, &(&p.derive() * &prod_all) - &(p * &weighted)))
                    .collect()
            })
            .collect();
        let mut exps = self.exps.clone();
        for &s in &active {
            exps[s] += 1;
        }
        MatFn {
            rows: self.rows,
            cols: self.cols,
            poles: self.poles.clone(),
            exps,
            data,
        }
        .normalize()
    }

    pub fn transpose(&self) -> MatFn {
        let mut data = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, p) in r {
                data[*j].push((i, p.clone()));
            }
        }
        MatFn {
            rows: self.cols,
            cols: self.rows,
            poles: self.poles.clone(),
            exps: self.exps.clone(),
            data,
        }
    }

    /// Sub-block on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> MatFn {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            pos[c] = k;
        }
        let mut data = Vec::with_capacity(rows.len());
        for &i in rows {
            let mut r: Vec<(usize, Poly)> = self.data[i]
                .iter()
                .filter(|(j, _)| pos[*j] != usize::MAX)
                .map(|(j, p)| (pos[*j], p.clone()))
                .collect();
            r.sort_by_key(|e| e.0);
            data.push(r);
        }
        MatFn {
            rows: rows.len(),
            cols: cols.len(),
            poles: self.poles.clone(),
            exps: self.exps.clone(),
            data,
        }
        .normalize()
    }

    /// Exact left-multiplication by a constant matrix.
    pub fn left_mul_const(&self, q: &QMatrix) -> MatFn {
        MatFn::constant(q, &self.poles).mul(self)
    }

    pub fn right_mul_const(&self, q: &QMatrix) -> MatFn {
        self.mul(&MatFn::constant(q, &self.poles))
    }

    /// Partial-fraction coefficient matrices: `(polynomial part by degree, pole part by
    /// (site, order))`.
    pub fn partial_fractions(&self) -> Result<(BTreeMap<usize, QMatrix>, BTreeMap<(usize, u32), QMatrix>)> {
        let mut poly: BTreeMap<usize, QMatrix> = BTreeMap::new();
        let mut pole: BTreeMap<(usize, u32), QMatrix> = BTreeMap::new();
        let den = self.denominator();
        for (i, r) in self.data.iter().enumerate() {
            for (j, p) in r {
                let f = RatFun::new(p.clone(), den.clone());
                let (pp, terms) = f.partial_fractions(self.poles.points())?;
                for (d, c) in pp.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        poly.entry(d)
                            .or_insert_with(|| QMatrix::zeros(self.rows, self.cols))
                            .add_entry(i, *j, c.clone());
                    }
                }
                for t in terms {
                    pole.entry((t.pole_index, t.order))
                        .or_insert_with(|| QMatrix::zeros(self.rows, self.cols))
                        .add_entry(i, *j, t.coeff);
                }
            }
        }
        poly.retain(|_, m| !m.is_zero());
        pole.retain(|_, m| !m.is_zero());
        Ok((poly, pole))
    }

    pub fn from_partial_fractions(
        rows: usize,
        cols: usize,
        poles: &PoleSet,
        poly: &BTreeMap<usize, QMatrix>,
        pole: &BTreeMap<(usize, u32), QMatrix>,
    ) -> MatFn {
        let mut acc = MatFn::zeros(rows, cols, poles);
        for (d, q) in poly {
            acc = acc.add(&MatFn::poly_term(q, poles, *d));
        }
        for ((s, o), q) in pole {
            acc = acc.add(&MatFn::pole_term(q, poles, *s, *o));
        }
        acc
    }

    /// Value at a rational point outside the pole set.
    pub fn eval(&self, x: &Rat) -> Option<QMatrix> {
        let d = self.denominator().eval(x);
        let inv = d.inv()?;
        Some(QMatrix::from_triplets(
            self.rows,
            self.cols,
            self.data
                .iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().map(move |(j, p)| (i, *j, p.eval(x)))),
        )
        .scale(&inv))
    }

    /// Exact inverse; only z-independent invertible matrices are supported.
    pub fn try_inverse(&self) -> Option<MatFn> {
        let c = self.as_constant()?;
        if !c.is_square() {
            return None;
        }
        super::linalg::inverse(&c).map(|inv| MatFn::constant(&inv, &self.poles))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }
}

impl fmt::Debug for MatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatFn {}x{} / ({}) [", self.rows, self.cols, self.denominator())?;
        for (i, r) in self.data.iter().enumerate() {
            for (j, p) in r {
                writeln!(f, "  ({i},{j}): {p}")?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poles() -> PoleSet {
        PoleSet::new(vec![Rat::zero(), Rat::from_int(2)])
    }

    #[test]
    fn reduction_and_products() {
        let p = poles();
        let id = QMatrix::identity(2);
        let a = MatFn::pole_term(&id, &p, 0, 1);
        let b = MatFn::poly_term(&id, &p, 1);
        let c = a.mul(&b);
        assert!(c.is_constant());
        assert_eq!(c.as_constant().unwrap(), id);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.sub(&a).exponents(), &[0, 0]);
    }

    #[test]
    fn derivative_matches_scalar() {
        let p = poles();
        let q = QMatrix::from_ints(&[&[1, 2], &[0, -1]]);
        let f = MatFn::pole_term(&q, &p, 1, 2).add(&MatFn::pole_term(&q.transpose(), &p, 0, 1));
        let d = f.derive();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(d.entry(i, j), f.entry(i, j).derive());
            }
        }
    }

    #[test]
    fn partial_fraction_round_trip() {
        let p = poles();
        let q = QMatrix::from_ints(&[&[3, 0], &[1, 1]]);
        let f = MatFn::pole_term(&q, &p, 0, 1)
            .mul(&MatFn::pole_term(&QMatrix::identity(2), &p, 1, 1))
            .add(&MatFn::poly_term(&q, &p, 2));
        let (poly, pole) = f.partial_fractions().unwrap();
        let back = MatFn::from_partial_fractions(2, 2, &p, &poly, &pole);
        assert_eq!(back, f);
        assert!(f.try_inverse().is_none());
        let c = MatFn::constant(&q, &p);
        assert!(c.mul(&c.try_inverse().unwrap()).as_constant().unwrap().is_identity());
    }
}
