use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{restrict_to_subspace, MatFn, PoleSet, QMatrix, SpanBuilder};
use crate::opring::USeries;
use crate::repmod::Subspace;

/// Which expansion a family was read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Coefficients `b_ij(z)` of `u^i ∂^{i−j}` in `Ber(1 + uL)`.
    UAdic,
    /// Coefficients `b_k(z)` of `∂^k` in `Ber(L)`.
    Window,
}

/// A Hamiltonian series: `(u-index, ∂-power)`; the u-index is absent for window families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FnKey {
    pub u: Option<usize>,
    pub power: i64,
}

impl FnKey {
    /// `b_ij`.
    pub fn u_adic(i: usize, j: usize) -> Self {
        FnKey {
            u: Some(i),
            power: i as i64 - j as i64,
        }
    }

    /// `b_k`.
    pub fn window(k: i64) -> Self {
        FnKey { u: None, power: k }
    }

    /// `(i, j)` of a u-adic key.
    pub fn ij(&self) -> Option<(usize, usize)> {
        self.u.map(|i| (i, (i as i64 - self.power) as usize))
    }
}

impl fmt::Display for FnKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ij() {
            Some((i, j)) => write!(f, "b[{i},{j}]"),
            None => write!(f, "b[{}]", self.power),
        }
    }
}

/// A term of the partial-fraction expansion in `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FracKey {
    /// `z^degree`.
    Poly { degree: usize },
    /// `(z − z_site)^{−order}`.
    Pole { site: usize, order: u32 },
}

impl fmt::Display for FracKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FracKey::Poly { degree } => write!(f, "z^{degree}"),
            FracKey::Pole { site, order } => write!(f, "(z-z{})^-{order}", site + 1),
        }
    }
}

/// Matrix-valued Hamiltonian series and their exact partial-fraction coefficients.
#[derive(Clone, Debug)]
pub struct HamiltonianFamily {
    pub provenance: Provenance,
    poles: PoleSet,
    fns: BTreeMap<FnKey, MatFn>,
    entries: BTreeMap<(FnKey, FracKey), QMatrix>,
}

impl HamiltonianFamily {
    pub fn empty(provenance: Provenance, poles: &PoleSet) -> Self {
        HamiltonianFamily {
            provenance,
            poles: poles.clone(),
            fns: BTreeMap::new(),
            entries: BTreeMap::new(),
        }
    }

    /// Record a series and split it into partial fractions.
    pub fn insert(&mut self, key: FnKey, f: MatFn) -> Result<()> {
        let (poly, poles) = f.partial_fractions()?;
        for (degree, q) in poly {
            if !q.is_zero() {
                self.entries.insert((key, FracKey::Poly { degree }), q);
            }
        }
        for ((site, order), q) in poles {
            if !q.is_zero() {
                self.entries.insert((key, FracKey::Pole { site, order }), q);
            }
        }
        self.fns.insert(key, f);
        Ok(())
    }

    /// Read `b_ij` from a u-series: term `i`, power `i − j`.
    pub fn from_u_series(b: &USeries<MatFn>, poles: &PoleSet, provenance: Provenance) -> Result<Self> {
        let mut fam = HamiltonianFamily::empty(provenance, poles);
        for i in 0..=b.order() {
            for j in 0..=i {
                let p = i as i64 - j as i64;
                let c = b.term(i).coeff(p).expect("u-series terms are exact");
                fam.insert(FnKey::u_adic(i, j), c)?;
            }
        }
        Ok(fam)
    }

    pub fn poles(&self) -> &PoleSet {
        &self.poles
    }

    pub fn keys(&self) -> impl Iterator<Item = &FnKey> {
        self.fns.keys()
    }

    /// The series for `key`, zero when absent.
    pub fn function(&self, key: &FnKey) -> MatFn {
        self.fns.get(key).cloned().unwrap_or_else(|| {
            let d = self.dim();
            MatFn::zeros(d, d, &self.poles)
        })
    }

    pub fn functions(&self) -> &BTreeMap<FnKey, MatFn> {
        &self.fns
    }

    pub fn entries(&self) -> &BTreeMap<(FnKey, FracKey), QMatrix> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.fns.values().next().map_or(0, MatFn::rows)
    }

    /// Nonzero coefficient matrices in key order.
    pub fn coefficient_matrices(&self) -> Vec<QMatrix> {
        self.entries.values().cloned().collect()
    }

    /// Coefficient matrices of u-adic series with u-index at most `order`.
    pub fn matrices_up_to_u(&self, order: usize) -> Vec<QMatrix> {
        self.entries
            .iter()
            .filter(|((f, _), _)| f.u.is_none_or(|u| u <= order))
            .map(|(_, q)| q.clone())
            .collect()
    }

    /// A linearly independent subfamily spanning the same space of matrices.
    pub fn independent_matrices(&self) -> Vec<QMatrix> {
        let d = self.dim();
        let mut span = SpanBuilder::new(d * d);
        self.entries
            .values()
            .filter(|q| span.insert(&q.flatten()))
            .cloned()
            .collect()
    }

    /// Coefficient matrices expressed in the basis of an invariant subspace.
    pub fn restrict(&self, sub: &Subspace) -> Result<Vec<QMatrix>> {
        restrict_all(&self.coefficient_matrices(), sub)
    }

    pub fn to_json(&self) -> Value {
        let entries: serde_json::Map<String, Value> = self
            .entries
            .iter()
            .map(|((f, t), q)| (format!("{f} {t}"), serde_json::to_value(q).expect("matrix serializes")))
            .collect();
        json!({
            "provenance": match self.provenance { Provenance::UAdic => "u-adic", Provenance::Window => "window" },
            "entries": entries,
        })
    }
}

/// Restrict every matrix to `sub`; fails with the first non-invariant pair.
pub fn restrict_all(mats: &[QMatrix], sub: &Subspace) -> Result<Vec<QMatrix>> {
    mats.iter()
        .enumerate()
        .map(|(g, q)| restrict_to_subspace(q, &sub.basis).map_err(|v| Error::NotInvariant { generator: g, vector: v }))
        .collect()
}
