use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::qmatrix::QMatrix;
use crate::error::{Error, Result};

/// Approximate joint eigendecomposition of a commuting family.
#[derive(Clone, Debug)]
pub struct NumericEigen {
    /// `(unit eigenvector, eigenvalue of each generator)`.
    pub pairs: Vec<(Vec<f64>, Vec<f64>)>,
    /// Eigenvalues of the random combination, sorted.
    pub combination_spectrum: Vec<f64>,
    /// Smallest gap between combination eigenvalues (infinite when dim ≤ 1).
    pub min_separation: f64,
    /// Largest relative residual `‖A v − θ v‖ / (‖A‖ ‖v‖)` over accepted pairs.
    pub max_residual: f64,
    /// Count equals the dimension and all combination eigenvalues are separated.
    pub simple: bool,
}

fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Unit vector spanning the numerically smallest singular direction of `a`.
fn null_vector(a: &DMatrix<f64>) -> DVector<f64> {
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty");
    vt.row(k).transpose().normalize()
}

pub fn joint_numeric_eigen(commuting: &[QMatrix], seed: u64, tol: f64) -> Result<NumericEigen> {
    for i in 0..commuting.len() {
        for j in i + 1..commuting.len() {
            if !commuting[i].commutes_with(&commuting[j]) {
                return Err(Error::NotCommuting(i, j));
            }
        }
    }
    let dim = commuting.first().map_or(0, QMatrix::rows);
    let floats: Vec<DMatrix<f64>> = commuting.iter().map(QMatrix::to_f64).collect();
    let norms: Vec<f64> = floats.iter().map(frobenius).collect();
    if dim == 0 {
        return Ok(NumericEigen {
            pairs: Vec::new(),
            combination_spectrum: Vec::new(),
            min_separation: f64::INFINITY,
            max_residual: 0.0,
            simple: true,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comb = DMatrix::<f64>::zeros(dim, dim);
    for (f, n) in floats.iter().zip(&norms) {
        if *n > 0.0 {
            let c: f64 = rng.gen_range(0.5..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            comb += f * (c / n);
        }
    }
    let comb_norm = frobenius(&comb).max(1.0);
    let eig = comb.clone().schur().complex_eigenvalues();
    let mut real: Vec<f64> = eig
        .iter()
        .filter(|c| c.im.abs() <= 1e-8 * comb_norm)
        .map(|c| c.re)
        .collect();
    let all_real = real.len() == dim;
    real.sort_by(f64::total_cmp);
    let min_separation = real
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);

    let mut pairs = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut k = 0;
    while k < real.len() {
        // cluster numerically equal eigenvalues; one representative vector per cluster
        let mut e = k + 1;
        while e < real.len() && real[e] - real[e - 1] <= tol * comb_norm {
            e += 1;
        }
        let lambda = real[k..e].iter().sum::<f64>() / (e - k) as f64;
        let shifted = &comb - DMatrix::<f64>::identity(dim, dim) * lambda;
        let mut v = null_vector(&shifted);
        // two steps of inverse iteration polish the vector
        let nudge = DMatrix::<f64>::identity(dim, dim) * (1e-13 * comb_norm);
        let lu = (&shifted + &nudge).lu();
        for _ in 0..2 {
            if let Some(w) = lu.solve(&v) {
                let n = w.norm();
                if n.is_finite() && n > 0.0 {
                    v = w / n;
                }
            }
        }
        let mut values = Vec::with_capacity(floats.len());
        let mut ok = true;
        for (f, n) in floats.iter().zip(&norms) {
            let av = f * &v;
            let theta = v.dot(&av);
            let res = (&av - &v * theta).norm();
            let rel = if *n > 0.0 { res / n } else { res };
            if rel > tol {
                ok = false;
            }
            max_residual = max_residual.max(rel);
            values.push(theta);
        }
        if ok {
            pairs.push((v.iter().copied().collect(), values));
        }
        k = e;
    }
    let simple = all_real && pairs.len() == dim && (dim <= 1 || min_separation > tol);
    Ok(NumericEigen {
        pairs,
        combination_spectrum: real,
        min_separation,
        max_residual,
        simple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_family() {
        let d = QMatrix::from_ints(&[&[1, 0], &[0, 2]]);
        let r = joint_numeric_eigen(&[d], 7, 1e-9).unwrap();
        assert!(r.simple);
        let mut vals: Vec<f64> = r.pairs.iter().map(|p| p.1[0]).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_noncommuting() {
        let r = joint_numeric_eigen(&[QMatrix::identity(2)], 1, 1e-9).unwrap();
        assert!(!r.simple);
        let a = QMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        let b = QMatrix::from_ints(&[&[0, 0], &[1, 0]]);
        assert_eq!(joint_numeric_eigen(&[a, b], 1, 1e-9).unwrap_err(), Error::NotCommuting(0, 1));
    }
}
