//! Machine-readable reports: JSON with sorted keys, or a plain-text table.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use starlab_core::report::{Check, Status};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub scenario: String,
    pub seed: u64,
    /// Conventions and parameters the checks depend on.
    #[serde(default)]
    pub header: Value,
    pub checks: Vec<Check>,
    #[serde(default)]
    pub data: Value,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, scenario: &str, seed: u64) -> Self {
        Report {
            command: command.into(),
            scenario: scenario.into(),
            seed,
            header: Value::Object(Default::default()),
            checks: Vec::new(),
            data: Value::Object(Default::default()),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn set_data(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data serializes");
        self.data.as_object_mut().expect("object").insert(key.into(), v);
    }

    pub fn set_header(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report header serializes");
        self.header.as_object_mut().expect("object").insert(key.into(), v);
    }

    /// Sorts checks by name and recomputes the summary.
    pub fn finish(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.summary = Summary::default();
        for c in &self.checks {
            match c.status {
                Status::Pass => self.summary.pass += 1,
                Status::Fail => self.summary.fail += 1,
                Status::Skip => self.summary.skip += 1,
            }
        }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} [{}] seed={}\n", self.command, self.scenario, self.seed);
        if let Some(h) = self.header.as_object().filter(|h| !h.is_empty()) {
            for (k, v) in h {
                out.push_str(&format!("  {k}: {}\n", compact(v)));
            }
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            out.push_str(&format!("{:<width$}  {:<4}  samples={}\n", c.name, c.status.to_string().to_uppercase(), c.samples));
            for (k, v) in c.data.iter().chain(&c.witness) {
                out.push_str(&format!("{:<width$}    {k} = {v}\n", ""));
            }
        }
        if let Some(d) = self.data.as_object().filter(|d| !d.is_empty()) {
            for (k, v) in d {
                out.push_str(&format!("{k}: {}\n", compact(v)));
            }
        }
        out.push_str(&format!("pass={} fail={} skip={}\n", self.summary.pass, self.summary.fail, self.summary.skip));
        out
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid_json() {
        let mut r = Report::new("star-check", "", 0);
        r.finish();
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"], Value::Array(vec![]));
    }

    #[test]
    fn round_trip_and_sorted_keys() {
        let mut r = Report::new("hochschild", "m2", 3);
        let mut c = Check::new("zeta", "anchor");
        c.record(false, || vec![("f", "x0^2 + h")]);
        r.push(c);
        r.push(Check::new("alpha", "anchor").with("dims", "[1, 0]"));
        r.set_data("table", vec![1, 0, 1]);
        r.finish();
        assert_eq!(r.checks[0].name, "alpha");
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, skip: 0 });
        let json = r.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(json.find("\"checks\"").unwrap() < json.find("\"command\"").unwrap());
        assert!(r.to_text().contains("FAIL"));
    }
}
