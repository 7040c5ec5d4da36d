use serde::Serialize;
use serde_json::{json, Value};

use super::bethe::{
    bethe_weight, colors_for_weight, site_highest_weights, solve_bethe, super_bethe_check, verify_bethe_eigen,
    verify_bethe_numeric, BetheSolution,
};
use super::fuchsian::{FuchsianOperator, Point};
use crate::error::{Error, Result};
use crate::exactalg::{QVector, Rat};
use crate::gaudin::{companion_system, joint_eigen, minimal_r, singular_spaces, GaudinSystem, Report, Status};
use crate::superdata::Weight;

/// Data fixing the expected local behaviour of a monic operator of order `m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaSpec {
    /// Dominant gl_m weights `ξ_1, …, ξ_ℓ`.
    pub xi: Vec<Vec<i64>>,
    pub mu: Vec<i64>,
    pub z: Vec<Rat>,
}

impl DeltaSpec {
    pub fn for_system(sys: &GaudinSystem, mu: &Weight) -> Self {
        DeltaSpec {
            xi: site_highest_weights(sys),
            mu: mu.values()[..sys.m()].to_vec(),
            z: sys.z().to_vec(),
        }
    }

    fn m(&self) -> usize {
        self.mu.len()
    }

    /// `ξ_{i,m}, ξ_{i,m−1} + 1, …, ξ_{i,1} + m − 1`.
    pub fn exponents_at_site(&self, i: usize) -> Vec<Rat> {
        let m = self.m();
        let mut e: Vec<Rat> = (0..m).map(|j| Rat::from_int(self.xi[i][m - 1 - j] + j as i64)).collect();
        e.sort();
        e
    }

    /// `1 − m − μ_1, 2 − m − μ_2, …, −μ_m`.
    pub fn exponents_at_infinity(&self) -> Vec<Rat> {
        let m = self.m() as i64;
        let mut e: Vec<Rat> = self
            .mu
            .iter()
            .enumerate()
            .map(|(j, x)| Rat::from_int(j as i64 + 1 - m - x))
            .collect();
        e.sort();
        e
    }

    pub fn sum_rule(&self) -> bool {
        let total: i64 = self.xi.iter().flatten().sum();
        total == self.mu.iter().sum::<i64>()
    }
}

/// Outcome of each membership property.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaOutcome {
    pub sum_rule: bool,
    pub order: bool,
    pub singular_points: bool,
    pub exponents_at_sites: bool,
    pub exponents_at_infinity: bool,
    pub polynomial_kernel: bool,
    pub kernel_dim: usize,
    pub details: Vec<String>,
}

impl DeltaOutcome {
    pub fn passed(&self) -> bool {
        self.sum_rule
            && self.order
            && self.singular_points
            && self.exponents_at_sites
            && self.exponents_at_infinity
            && self.polynomial_kernel
    }

    pub fn to_json(&self) -> Value {
        json!(self)
    }
}

fn show(v: &[Rat]) -> String {
    format!("[{}]", v.iter().map(Rat::to_string).collect::<Vec<_>>().join(", "))
}

/// Check each defining property of the set of operators attached to `spec`.
pub fn delta_membership(d: &FuchsianOperator, spec: &DeltaSpec) -> DeltaOutcome {
    let mut details = Vec::new();
    let sum_rule = spec.sum_rule();
    if !sum_rule {
        details.push("|mu| differs from the sum of |xi_i|".into());
    }
    let order = d.order() == spec.m();
    if !order {
        details.push(format!("order {} differs from m = {}", d.order(), spec.m()));
    }
    let singular_points = d.singular_points_within(&spec.z);
    if !singular_points {
        details.push("coefficients have poles outside z".into());
    }
    let mut exponents_at_sites = true;
    for (i, zi) in spec.z.iter().enumerate() {
        match d.exponents_at(&Point::Finite(zi.clone())) {
            Ok(e) if e == spec.exponents_at_site(i) => {}
            Ok(e) => {
                exponents_at_sites = false;
                details.push(format!("exponents at {zi}: {} expected {}", show(&e), show(&spec.exponents_at_site(i))));
            }
            Err(err) => {
                exponents_at_sites = false;
                details.push(format!("exponents at {zi}: {err}"));
            }
        }
    }
    let exponents_at_infinity = match d.exponents_at(&Point::Infinity) {
        Ok(e) if e == spec.exponents_at_infinity() => true,
        Ok(e) => {
            details.push(format!("exponents at infinity: {} expected {}", show(&e), show(&spec.exponents_at_infinity())));
            false
        }
        Err(err) => {
            details.push(format!("exponents at infinity: {err}"));
            false
        }
    };
    let kernel = d.polynomial_kernel();
    let polynomial_kernel = kernel.len() == d.order();
    if !polynomial_kernel {
        details.push(format!("polynomial kernel has dimension {} of {}", kernel.len(), d.order()));
    }
    DeltaOutcome {
        sum_rule,
        order,
        singular_points,
        exponents_at_sites,
        exponents_at_infinity,
        polynomial_kernel,
        kernel_dim: kernel.len(),
        details,
    }
}

/// Joint eigenvectors on `V^sing_μ` paired with their monic operators `D_v`.
pub fn eigenbasis_fuchsian_map(sys: &GaudinSystem, mu: &Weight, tol: f64) -> Result<Vec<(QVector, FuchsianOperator)>> {
    if sys.n() != 0 {
        return Err(Error::NotClassical);
    }
    let sub = singular_spaces(sys).remove(mu).ok_or(Error::EmptyWeightSpace)?;
    let fam = sys.window_family(sys.window.max(sys.m()))?;
    let data = joint_eigen(sys, &fam, &sub, tol)?;
    let exact = data.exact.ok_or(Error::IrrationalSpectrum)?;
    exact
        .into_iter()
        .map(|e| Ok((e.vector, FuchsianOperator::from_operator(&e.op)?)))
        .collect()
}

fn z_json(sys: &GaudinSystem) -> Value {
    json!(sys.z().iter().map(Rat::to_string).collect::<Vec<_>>())
}

/// On every singular weight: `D_v` lies in the expected set, the operators are pairwise
/// distinct, and there is one per dimension of the singular weight space.
pub fn fuchsian_checks(sys: &GaudinSystem, tol: f64) -> Result<Report> {
    let st = sys.stamp();
    let mut rep = Report::new();
    for (mu, sub) in singular_spaces(sys) {
        let inst = json!({"m": sys.m(), "n": 0, "z": z_json(sys), "mu": mu.values(), "dim": sub.dim()});
        rep.timed(st, "fuchsian", inst, || match eigenbasis_fuchsian_map(sys, &mu, tol) {
            Ok(pairs) => {
                let spec = DeltaSpec::for_system(sys, &mu);
                let outcomes: Vec<DeltaOutcome> = pairs.iter().map(|(_, d)| delta_membership(d, &spec)).collect();
                let distinct = (0..pairs.len()).all(|i| (0..i).all(|j| pairs[i].1 != pairs[j].1));
                let ok = outcomes.iter().all(DeltaOutcome::passed) && distinct && pairs.len() == sub.dim();
                let witness = json!({
                    "count": pairs.len(),
                    "distinct": distinct,
                    "operators": pairs.iter().map(|(_, d)| json!(d)).collect::<Vec<_>>(),
                    "membership": outcomes.iter().map(DeltaOutcome::to_json).collect::<Vec<_>>(),
                });
                (Status::from_bool(ok), Some(witness))
            }
            Err(e @ Error::IrrationalSpectrum) => (Status::Vacuous, Some(json!(e.to_string()))),
            Err(e) => (Status::Fail, Some(json!(e.to_string()))),
        });
    }
    Ok(rep)
}

/// Largest number of Bethe roots attempted by the batch driver.
pub const MAX_BETHE_ROOTS: usize = 4;

fn solutions(sys: &GaudinSystem, colors: &[usize], tol: f64) -> Result<Vec<BetheSolution>> {
    solve_bethe(sys, colors, sys.seed, tol, 200, 24)
}

/// For every singular weight of a classical system: solve the Bethe equations and
/// verify each exact solution. Weights without solutions are reported as vacuous.
pub fn bethe_checks(sys: &GaudinSystem, tol: f64) -> Result<Report> {
    let st = sys.stamp();
    let mut rep = Report::new();
    for mu in singular_spaces(sys).into_keys() {
        let inst = json!({"m": sys.m(), "n": 0, "z": z_json(sys), "mu": mu.values()});
        let Some(colors) = colors_for_weight(sys, &mu) else {
            rep.record(st, "bethe", inst, Status::Vacuous, Some(json!("weight not reachable from the vacuum")));
            continue;
        };
        if colors.len() > MAX_BETHE_ROOTS {
            rep.record(st, "bethe", inst, Status::Vacuous, Some(json!(format!("{} roots exceeds the limit", colors.len()))));
            continue;
        }
        let sols = solutions(sys, &colors, tol)?;
        if sols.is_empty() {
            rep.record(st, "bethe", inst, Status::Vacuous, Some(json!("no solutions found")));
            continue;
        }
        for sol in sols {
            debug_assert_eq!(bethe_weight(sys, &sol.colors), mu);
            match &sol.exact {
                Some(cfg) => rep.extend(verify_bethe_eigen(sys, cfg)?),
                None => rep.extend(verify_bethe_numeric(sys, &sol, tol)?),
            }
        }
    }
    Ok(rep)
}

/// Bethe solutions of the classical companion, transported to the super system.
pub fn super_bethe_checks(sys: &GaudinSystem, tol: f64) -> Result<Report> {
    let r = minimal_r(sys)?;
    let classical = companion_system(sys, r)?;
    let st = sys.stamp();
    let mut rep = Report::new();
    for mu in singular_spaces(&classical).into_keys() {
        let Some(colors) = colors_for_weight(&classical, &mu) else {
            continue;
        };
        let inst = json!({"m": sys.m(), "n": sys.n(), "r": r, "z": z_json(sys), "classical_weight": mu.values()});
        if colors.len() > MAX_BETHE_ROOTS {
            rep.record(st, "super_bethe", inst, Status::Vacuous, Some(json!(format!("{} roots exceeds the limit", colors.len()))));
            continue;
        }
        let exact: Vec<_> = solutions(&classical, &colors, tol)?.into_iter().filter_map(|s| s.exact).collect();
        if exact.is_empty() {
            rep.record(st, "super_bethe", inst, Status::Vacuous, Some(json!("no exact solutions")));
        }
        for cfg in exact {
            rep.extend(super_bethe_check(sys, r, &cfg)?);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::RatFun;
    use crate::spectral::bethe::{bethe_eigen_operator, BetheConfig};
    use crate::superdata::HookPartition;

    fn gl2_desk() -> GaudinSystem {
        let s = HookPartition::from_parts(&[1], 2, 0).unwrap();
        GaudinSystem::new(2, 0, vec![s.clone(), s], vec![Rat::zero(), Rat::from_int(2)]).unwrap()
    }

    #[test]
    fn desk_membership() {
        let sys = gl2_desk();
        let cfg = BetheConfig { colors: vec![1], roots: vec![Rat::one()] };
        let d = bethe_eigen_operator(&sys, &cfg).unwrap();
        let mu = Weight::from_values(2, 0, vec![1, 1]);
        let spec = DeltaSpec::for_system(&sys, &mu);
        let out = delta_membership(&d, &spec);
        assert!(out.passed(), "{:?}", out.details);

        let extra = RatFun::pole(Rat::one(), &Rat::from_int(5), 1);
        let mut coeffs = d.coeffs().to_vec();
        coeffs[1] = &coeffs[1] + &extra;
        let out = delta_membership(&FuchsianOperator::new(coeffs), &spec);
        assert!(!out.singular_points);

        let bad = DeltaSpec { mu: vec![2, 1], ..spec };
        assert!(!delta_membership(&d, &bad).sum_rule);
    }

    #[test]
    fn desk_eigenbasis() {
        let sys = gl2_desk();
        let mu = Weight::from_values(2, 0, vec![1, 1]);
        let pairs = eigenbasis_fuchsian_map(&sys, &mu, 1e-9).unwrap();
        assert_eq!(pairs.len(), 1);
        let cfg = BetheConfig { colors: vec![1], roots: vec![Rat::one()] };
        assert_eq!(pairs[0].1, bethe_eigen_operator(&sys, &cfg).unwrap());
        let rep = fuchsian_checks(&sys, 1e-9).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_json(false));
        let rep = bethe_checks(&sys, 1e-10).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_json(false));
    }

    #[test]
    fn gl11_super_bethe() {
        let s = HookPartition::from_parts(&[1], 1, 1).unwrap();
        let sys = GaudinSystem::new(1, 1, vec![s.clone(), s], vec![Rat::zero(), Rat::from_int(3)]).unwrap();
        let rep = super_bethe_checks(&sys, 1e-10).unwrap();
        assert!(rep.count(Status::Pass) >= 2, "{}", rep.to_json(false));
        assert!(rep.all_pass(), "{}", rep.to_json(false));
    }
}
