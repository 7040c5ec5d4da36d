//! Batch front end: configuration parsing, check orchestration and JSON reports.

use std::collections::BTreeSet;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::Rat;
use crate::gaudin::{
    auto_u_order, companion_system, minimal_r, random_points, structure_checks, super_lift_spectra,
    verify_algebraic_identities, verify_module_relations, verify_shapovalov, verify_truncation, GaudinSystem, Report,
    Status,
};
use crate::repmod::total_singular_space;
use crate::spectral::{bethe_checks, fuchsian_checks, super_bethe_checks};
use crate::superdata::{HookPartition, Perm};

/// Every check name, in execution order.
pub const KNOWN_CHECKS: &[&str] = &[
    "expansion_shape",
    "commutativity",
    "binomial",
    "permutation_invariance",
    "cdet_consistency",
    "truncation",
    "sigma_singular",
    "structure",
    "simple_spectrum",
    "super_lift",
    "bethe",
    "fuchsian",
    "supercommutation",
    "shapovalov",
];

const ALGEBRAIC: &[&str] = &["expansion_shape", "commutativity", "binomial", "permutation_invariance", "cdet_consistency"];

/// Names of the canned scenarios.
pub const DEMOS: &[&str] = &["gl2-bethe", "gl11-lift", "gl21-trunc"];

/// Largest order tried by `u_order: "auto"`.
pub const AUTO_U_ORDER_CAP: usize = 8;

/// Trials used by the randomized structural and relation checks.
pub const STRUCTURE_TRIALS: usize = 5;
pub const RELATION_TRIALS: usize = 100;
pub const LIFT_TRIALS: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub enum ZSpec {
    Points(Vec<Rat>),
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UOrder {
    Auto,
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub m: usize,
    pub n: usize,
    pub sites: Vec<Vec<u32>>,
    pub z: ZSpec,
    pub u_order: UOrder,
    pub window: usize,
    pub seed: u64,
    pub float_tol: f64,
    pub checks: Vec<String>,
    pub output: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawZ {
    List(Vec<Value>),
    Word(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawU {
    Int(usize),
    Word(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    m: usize,
    n: usize,
    sites: Vec<Vec<u32>>,
    z: Option<RawZ>,
    u_order: Option<RawU>,
    window: Option<usize>,
    seed: Option<u64>,
    float_tol: Option<f64>,
    checks: Option<Vec<String>>,
    output: Option<String>,
}

/// Parse one rational from a JSON string or integer.
fn parse_point(v: &Value, location: &str) -> Result<Rat> {
    match v {
        Value::String(s) => s.parse().map_err(|e: Error| Error::config(location, e.to_string())),
        Value::Number(x) => x
            .as_i64()
            .map(Rat::from_int)
            .ok_or_else(|| Error::config(location, "numbers must be integers; write rationals as \"p/q\"")),
        _ => Err(Error::config(location, "expected \"p/q\" or an integer")),
    }
}

/// Comma separated rationals, as accepted by `--z`.
pub fn parse_points(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .enumerate()
        .map(|(i, t)| t.trim().parse().map_err(|e: Error| Error::config(format!("--z[{i}]"), e.to_string())))
        .collect()
}

impl RunConfig {
    /// A config with defaults for everything but the algebra and the sites.
    pub fn new(m: usize, n: usize, sites: Vec<Vec<u32>>, z: ZSpec) -> Self {
        RunConfig {
            m,
            n,
            sites,
            z,
            u_order: UOrder::Fixed(crate::gaudin::DEFAULT_U_ORDER),
            window: crate::opring::DEFAULT_DEPTH,
            seed: 0,
            float_tol: 1e-9,
            checks: KNOWN_CHECKS.iter().map(|s| s.to_string()).collect(),
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        let z = match raw.z {
            None => ZSpec::Random,
            Some(RawZ::Word(w)) if w == "random" => ZSpec::Random,
            Some(RawZ::Word(w)) => return Err(Error::config("z", format!("expected a list or \"random\", got {w:?}"))),
            Some(RawZ::List(items)) => ZSpec::Points(
                items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| parse_point(v, &format!("z[{i}]")))
                    .collect::<Result<_>>()?,
            ),
        };
        let u_order = match raw.u_order {
            None => UOrder::Fixed(crate::gaudin::DEFAULT_U_ORDER),
            Some(RawU::Int(k)) => UOrder::Fixed(k),
            Some(RawU::Word(w)) if w == "auto" => UOrder::Auto,
            Some(RawU::Word(w)) => return Err(Error::config("u_order", format!("expected an integer or \"auto\", got {w:?}"))),
        };
        let mut cfg = RunConfig::new(raw.m, raw.n, raw.sites, z);
        cfg.u_order = u_order;
        if let Some(w) = raw.window {
            cfg.window = w;
        }
        if let Some(s) = raw.seed {
            cfg.seed = s;
        }
        if let Some(t) = raw.float_tol {
            cfg.float_tol = t;
        }
        if let Some(c) = raw.checks {
            cfg.checks = c;
        }
        cfg.output = raw.output;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::config("m", "must be at least 1"));
        }
        if self.sites.is_empty() {
            return Err(Error::config("sites", "at least one site is required"));
        }
        for (i, s) in self.sites.iter().enumerate() {
            HookPartition::from_parts(s, self.m, self.n).map_err(|e| Error::config(format!("sites[{i}]"), e.to_string()))?;
        }
        if let ZSpec::Points(z) = &self.z {
            if z.len() != self.sites.len() {
                return Err(Error::config("z", format!("{} points for {} sites", z.len(), self.sites.len())));
            }
            for i in 0..z.len() {
                if let Some(j) = (0..i).find(|&j| z[j] == z[i]) {
                    return Err(Error::config(format!("z[{i}]"), format!("coincides with z[{j}]")));
                }
            }
        }
        if self.u_order == UOrder::Fixed(0) {
            return Err(Error::config("u_order", "must be at least 1"));
        }
        if self.window == 0 {
            return Err(Error::config("window", "must be at least 1"));
        }
        if !(self.float_tol > 0.0) {
            return Err(Error::config("float_tol", "must be positive"));
        }
        for (i, c) in self.checks.iter().enumerate() {
            if !KNOWN_CHECKS.contains(&c.as_str()) {
                return Err(Error::config(format!("checks[{i}]"), format!("unknown check {c:?}")));
            }
        }
        Ok(())
    }

    pub fn resolved_z(&self) -> Vec<Rat> {
        match &self.z {
            ZSpec::Points(z) => z.clone(),
            ZSpec::Random => random_points(self.sites.len(), self.seed),
        }
    }

    /// JSON echo with `z` resolved.
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "n": self.n,
            "sites": self.sites,
            "z": self.resolved_z().iter().map(Rat::to_string).collect::<Vec<_>>(),
            "z_source": if self.z == ZSpec::Random { "random" } else { "given" },
            "u_order": match self.u_order { UOrder::Auto => json!("auto"), UOrder::Fixed(k) => json!(k) },
            "window": self.window,
            "seed": self.seed,
            "float_tol": self.float_tol,
            "checks": self.checks,
        })
    }
}

/// The canned scenario `name`.
pub fn demo(name: &str) -> Result<RunConfig> {
    let ints = |v: &[i64]| ZSpec::Points(v.iter().map(|&x| Rat::from_int(x)).collect());
    let named = |c: &[&str]| c.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match name {
        "gl2-bethe" => {
            let mut c = RunConfig::new(2, 0, vec![vec![1], vec![1]], ints(&[0, 2]));
            c.checks = named(&["commutativity", "cdet_consistency", "bethe", "fuchsian", "shapovalov"]);
            Ok(c)
        }
        "gl11-lift" => {
            let mut c = RunConfig::new(1, 1, vec![vec![1], vec![1]], ints(&[0, 3]));
            c.checks = named(&["commutativity", "structure", "simple_spectrum", "super_lift", "bethe", "fuchsian"]);
            Ok(c)
        }
        "gl21-trunc" => {
            let mut c = RunConfig::new(2, 1, vec![vec![1], vec![1]], ints(&[0, 3]));
            c.checks = named(&[
                "expansion_shape",
                "commutativity",
                "binomial",
                "permutation_invariance",
                "cdet_consistency",
                "truncation",
                "sigma_singular",
                "supercommutation",
            ]);
            Ok(c)
        }
        _ => Err(Error::UnknownDemo(name.into())),
    }
}

/// Report plus the document written for it.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: Report,
    pub document: Value,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        if self.report.count(Status::Fail) == 0 {
            0
        } else {
            1
        }
    }
}

/// Build the system of a validated config; `u_order: auto` is resolved here.
pub fn build_system(cfg: &RunConfig) -> Result<(GaudinSystem, Option<Value>)> {
    cfg.validate()?;
    let sites = cfg
        .sites
        .iter()
        .map(|s| HookPartition::from_parts(s, cfg.m, cfg.n))
        .collect::<Result<Vec<_>>>()?;
    let mut sys = GaudinSystem::new(cfg.m, cfg.n, sites, cfg.resolved_z())?;
    sys.window = cfg.window;
    sys.seed = cfg.seed;
    let auto = match cfg.u_order {
        UOrder::Fixed(k) => {
            sys.u_order = k;
            None
        }
        UOrder::Auto => {
            let (k, dims) = auto_u_order(&sys, AUTO_U_ORDER_CAP)?;
            sys.u_order = k.max(1);
            Some(json!({"chosen": sys.u_order, "closure_dims": dims, "cap": AUTO_U_ORDER_CAP}))
        }
    };
    Ok((sys, auto))
}

fn keep(rep: Report, wanted: &BTreeSet<&str>) -> Report {
    let mut out = Report::new();
    for e in rep.entries {
        if wanted.contains(e.check.as_str()) {
            out.push(e);
        }
    }
    out
}

/// Run the requested checks in the fixed order of [`KNOWN_CHECKS`].
pub fn run(cfg: &RunConfig, timings: bool) -> Result<RunOutput> {
    let (sys, auto) = build_system(cfg)?;
    run_system(&sys, cfg, auto, timings)
}

/// [`run`] on a system already built from `cfg` by [`build_system`].
pub fn run_system(sys: &GaudinSystem, cfg: &RunConfig, auto: Option<Value>, timings: bool) -> Result<RunOutput> {
    let wanted: BTreeSet<&str> = cfg.checks.iter().map(String::as_str).collect();
    let tol = cfg.float_tol;
    let mut rep = Report::new();
    if ALGEBRAIC.iter().any(|c| wanted.contains(c)) {
        rep.extend(keep(verify_algebraic_identities(sys)?, &wanted));
    }
    if wanted.contains("truncation") || wanted.contains("sigma_singular") {
        rep.extend(keep(verify_truncation(sys, None, None, None)?, &wanted));
    }
    if wanted.contains("structure") || wanted.contains("simple_spectrum") {
        let fam = sys.ber_u_expansion(sys.u_order)?;
        let sub = total_singular_space(sys.module(), &Perm::identity(cfg.m + cfg.n));
        rep.extend(keep(structure_checks(sys, &fam, &sub, STRUCTURE_TRIALS, cfg.seed, tol)?, &wanted));
    }
    if wanted.contains("super_lift") {
        rep.extend(super_lift_spectra(sys, minimal_r(sys)?, LIFT_TRIALS)?);
    }
    if wanted.contains("bethe") {
        let r = if cfg.n == 0 { bethe_checks(sys, tol.min(1e-10))? } else { super_bethe_checks(sys, tol.min(1e-10))? };
        rep.extend(r);
    }
    if wanted.contains("fuchsian") {
        let r = if cfg.n == 0 {
            fuchsian_checks(sys, tol)?
        } else {
            fuchsian_checks(&companion_system(sys, minimal_r(sys)?)?, tol)?
        };
        rep.extend(r);
    }
    if wanted.contains("supercommutation") {
        rep.extend(verify_module_relations(sys, RELATION_TRIALS));
    }
    if wanted.contains("shapovalov") {
        rep.extend(verify_shapovalov(sys, &sys.ber_u_expansion(sys.u_order)?));
    }
    let mut config = cfg.to_json();
    config["u_order_resolved"] = json!(sys.u_order);
    if let Some(a) = auto {
        config["u_order_auto"] = a;
    }
    let document = json!({
        "config": config,
        "results": rep.to_json(timings),
        "summary": rep.summary(),
        "versions": {"supergaudin": env!("CARGO_PKG_VERSION")},
    });
    Ok(RunOutput { report: rep, document })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let c = RunConfig::from_json(r#"{"m":1,"n":1,"sites":[[1],[1]],"z":["0","1/2"],"u_order":"auto","checks":["commutativity"]}"#).unwrap();
        assert_eq!(c.z, ZSpec::Points(vec![Rat::zero(), Rat::new(1, 2)]));
        assert_eq!(c.u_order, UOrder::Auto);
        let e = RunConfig::from_json(r#"{"m":1,"n":1,"sites":[[1],[1]],"z":["1","1"]}"#).unwrap_err();
        assert!(matches!(e, Error::ConfigError { ref location, .. } if location == "z[1]"), "{e}");
        let e = RunConfig::from_json(r#"{"m":1,"n":1,"sites":[[1]],"checks":["nope"]}"#).unwrap_err();
        assert!(matches!(e, Error::ConfigError { ref location, .. } if location == "checks[0]"));
        assert!(RunConfig::from_json(r#"{"m":1,"n":1,"sites":[[1]],"extra":1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"m":1,"n":0,"sites":[[1,1]]}"#).is_err());
        assert_eq!(demo("nope").unwrap_err(), Error::UnknownDemo("nope".into()));
    }

    #[test]
    fn empty_and_single_check() {
        let mut c = RunConfig::new(1, 1, vec![vec![1], vec![1]], ZSpec::Points(vec![Rat::zero(), Rat::from_int(3)]));
        c.checks = vec![];
        let out = run(&c, false).unwrap();
        assert_eq!(out.report.entries.len(), 0);
        assert_eq!(out.exit_code(), 0);
        c.checks = vec!["commutativity".into()];
        let out = run(&c, false).unwrap();
        assert_eq!(out.report.count(Status::Pass), 1);
        assert_eq!(out.report.entries.len(), 1);
    }

    fn out_len(c: &RunConfig) -> usize {
        run(c, false).unwrap().report.entries.len()
    }

    #[test]
    fn random_z_is_echoed_and_stable() {
        let mut c = RunConfig::new(2, 0, vec![vec![1], vec![1]], ZSpec::Random);
        c.seed = 11;
        c.checks = vec!["commutativity".into(), "bethe".into()];
        let a = run(&c, false).unwrap().document;
        let b = run(&c, false).unwrap().document;
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let z: Vec<String> = c.resolved_z().iter().map(Rat::to_string).collect();
        assert_eq!(a["config"]["z"], json!(z));
        assert_eq!(a["results"].as_array().unwrap().len(), out_len(&c));
        assert!(a["results"][0]["millis"].is_null());
        assert_eq!(a["summary"]["fail"], json!(0));
    }
}
