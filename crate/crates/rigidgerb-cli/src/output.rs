//! The report document and its two renderings.

use std::fmt::Write as _;

use rigidgerb::{Report, Status};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputInfo {
    pub name: String,
    pub kind: String,
    pub sha256: String,
}

impl InputInfo {
    pub fn new(name: &str, kind: &str, bytes: &[u8]) -> InputInfo {
        InputInfo {
            name: name.to_string(),
            kind: kind.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOut {
    pub name: String,
    pub status: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub title: String,
    pub values: Vec<Value>,
    pub checks: Vec<CheckOut>,
}

impl From<&Report> for Section {
    fn from(r: &Report) -> Section {
        Section {
            title: r.title.clone(),
            values: r
                .values
                .iter()
                .map(|(k, v)| Value {
                    name: k.clone(),
                    value: v.clone(),
                })
                .collect(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckOut {
                    name: c.name.clone(),
                    status: c.status.as_str().to_string(),
                    detail: c.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub command: String,
    pub inputs: Vec<InputInfo>,
    pub sections: Vec<Section>,
    pub summary: Summary,
    pub status: String,
}

impl Document {
    pub fn new(command: String, inputs: Vec<InputInfo>, reports: &[Report]) -> Document {
        let mut summary = Summary::default();
        for c in reports.iter().flat_map(|r| &r.checks) {
            summary.checks += 1;
            match c.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        Document {
            command,
            inputs,
            sections: reports.iter().map(Section::from).collect(),
            status: String::from(if summary.failed == 0 { "pass" } else { "fail" }),
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_machine(text: &str) -> Result<Document, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_human(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command: {}", self.command).unwrap();
        for i in &self.inputs {
            writeln!(s, "input: {} ({}, sha256 {})", i.name, i.kind, i.sha256).unwrap();
        }
        for sec in &self.sections {
            writeln!(s).unwrap();
            writeln!(s, "{}", sec.title).unwrap();
            for v in &sec.values {
                writeln!(s, "  {} = {}", v.name, v.value).unwrap();
            }
            for c in &sec.checks {
                if c.detail.is_empty() {
                    writeln!(s, "  [{}] {}", c.status, c.name).unwrap();
                } else {
                    writeln!(s, "  [{}] {}: {}", c.status, c.name, c.detail).unwrap();
                }
            }
        }
        writeln!(s).unwrap();
        writeln!(
            s,
            "{}: {} checks, {} passed, {} failed, {} skipped",
            self.status, self.summary.checks, self.summary.passed, self.summary.failed, self.summary.skipped
        )
        .unwrap();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts() {
        let mut r = Report::new("t");
        r.check("a", true, "");
        r.check("b", false, "why");
        r.skip("c", "");
        let d = Document::new(String::from("x"), Vec::new(), &[r]);
        assert_eq!(d.summary.checks, 3);
        assert_eq!((d.summary.passed, d.summary.failed, d.summary.skipped), (1, 1, 1));
        assert!(!d.passed());
        assert!(d.to_human().contains("[fail] b: why"));
    }

    #[test]
    fn digest_is_sha256() {
        let i = InputInfo::new("f", "group", b"abc");
        assert_eq!(i.sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
