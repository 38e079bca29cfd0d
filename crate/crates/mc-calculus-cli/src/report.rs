//! Deterministic report rendering: versioned header, key-value echo of the
//! invocation, named sections, a check ledger, and a stable exit status.

use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: &str = "mc-calculus/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    PropertyFailure,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::PropertyFailure => 1,
            Status::InputError => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::PropertyFailure => "property-failure",
            Status::InputError => "input-error",
        }
    }
}

#[derive(Debug)]
pub struct Report {
    header: Vec<(String, String)>,
    sections: Vec<(String, Vec<String>)>,
    checks: Vec<String>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            header: vec![("command".to_string(), command.to_string())],
            sections: Vec::new(),
            checks: Vec::new(),
            status: Status::Ok,
        }
    }

    pub fn kv(&mut self, key: &str, value: impl Into<String>) {
        self.header.push((key.to_string(), value.into()));
    }

    pub fn input_digest(&mut self, path: &str, bytes: &[u8]) {
        let digest = Sha256::digest(bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.kv("input", format!("{path} sha256:{hex}"));
    }

    pub fn section(&mut self, name: &str, lines: Vec<String>) {
        self.sections.push((name.to_string(), lines));
    }

    /// A ledger line; failing checks flip the status to property failure.
    pub fn check(&mut self, pass: bool, text: &str) {
        self.checks
            .push(format!("{} {text}", if pass { "PASS" } else { "FAIL" }));
        if !pass && self.status == Status::Ok {
            self.status = Status::PropertyFailure;
        }
    }

    pub fn check_line(&mut self, line: String) {
        if line.starts_with("FAIL") && self.status == Status::Ok {
            self.status = Status::PropertyFailure;
        }
        self.checks.push(line);
    }

    pub fn fail_input(&mut self, reason: &str) {
        self.status = Status::InputError;
        self.section("error", vec![reason.to_string()]);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(FORMAT_VERSION);
        out.push('\n');
        for (k, v) in &self.header {
            out.push_str(&format!("{k}: {v}\n"));
        }
        for (name, lines) in &self.sections {
            out.push('\n');
            out.push_str(&format!("[{name}]\n"));
            for line in lines {
                out.push_str(line);
                out.push('\n');
            }
        }
        if !self.checks.is_empty() {
            out.push('\n');
            out.push_str("[checks]\n");
            for line in &self.checks {
                out.push_str(line);
                out.push('\n');
            }
        }
        out.push('\n');
        out.push_str(&format!("status: {}\n", self.status.label()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_is_stable_and_status_tracks_checks() {
        let mut r = Report::new("demo");
        r.kv("seed", "0");
        r.section("results", vec!["value: 3".to_string()]);
        r.check(true, "first");
        assert_eq!(r.status, Status::Ok);
        r.check(false, "second");
        assert_eq!(r.status, Status::PropertyFailure);
        let text = r.render();
        assert!(text.starts_with("mc-calculus/1\ncommand: demo\nseed: 0\n"));
        assert!(text.contains("[checks]\nPASS first\nFAIL second\n"));
        assert!(text.ends_with("status: property-failure\n"));
    }
}
