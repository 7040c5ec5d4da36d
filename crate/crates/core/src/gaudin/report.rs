use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One verified identity on one instance.
#[derive(Clone, Debug, Serialize)]
pub struct ReportEntry {
    pub check: String,
    pub instance: Value,
    pub status: Status,
    pub witness: Option<Value>,
    pub window: usize,
    pub u_order: usize,
    pub seed: u64,
    pub millis: Option<u64>,
}

/// Ordered list of report entries.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

/// Shared fields stamped onto every entry of a run.
#[derive(Clone, Copy, Debug)]
pub struct Stamp {
    pub window: usize,
    pub u_order: usize,
    pub seed: u64,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, e: ReportEntry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, o: Report) {
        self.entries.extend(o.entries);
    }

    /// Record an entry, timing nothing.
    pub fn record(&mut self, stamp: Stamp, check: &str, instance: Value, status: Status, witness: Option<Value>) {
        self.push(ReportEntry {
            check: check.into(),
            instance,
            status,
            witness,
            window: stamp.window,
            u_order: stamp.u_order,
            seed: stamp.seed,
            millis: None,
        });
    }

    /// Run `f` and record its outcome with the elapsed time.
    pub fn timed(
        &mut self,
        stamp: Stamp,
        check: &str,
        instance: Value,
        f: impl FnOnce() -> (Status, Option<Value>),
    ) {
        let t = Instant::now();
        let (status, witness) = f();
        let millis = t.elapsed().as_millis() as u64;
        self.record(stamp, check, instance, status, witness);
        self.entries.last_mut().expect("just pushed").millis = Some(millis);
    }

    pub fn count(&self, s: Status) -> usize {
        self.entries.iter().filter(|e| e.status == s).count()
    }

    pub fn all_pass(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// Entries with a given check name.
    pub fn by_check<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a ReportEntry> + 'a {
        self.entries.iter().filter(move |e| e.check == check)
    }

    pub fn summary(&self) -> Value {
        json!({
            "pass": self.count(Status::Pass),
            "fail": self.count(Status::Fail),
            "vacuous": self.count(Status::Vacuous),
        })
    }

    /// Entries as a JSON array; timings are dropped unless requested so output is
    /// reproducible.
    pub fn to_json(&self, timings: bool) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    let mut v = serde_json::to_value(e).expect("entry serializes");
                    if !timings {
                        v["millis"] = Value::Null;
                    }
                    v
                })
                .collect(),
        )
    }
}
