//! Line-oriented `key value` reports.

use std::fmt::Display;

#[derive(Debug, Default)]
pub struct Report {
    pub text: String,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report {
            text: String::new(),
            pass: true,
        };
        r.kv("command", command);
        r
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        self.text.push_str(&format!("{key} {value}\n"));
    }

    pub fn list<T: Display>(&mut self, key: &str, values: &[T]) {
        let joined: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        if joined.is_empty() {
            self.text.push_str(&format!("{key}\n"));
        } else {
            self.kv(key, joined.join(" "));
        }
    }

    /// Appends a multi-line block verbatim.
    pub fn block(&mut self, text: &str) {
        self.text.push_str(text);
        if !text.ends_with('\n') && !text.is_empty() {
            self.text.push('\n');
        }
    }

    pub fn check(&mut self, key: &str, ok: bool) {
        self.kv(key, if ok { "pass" } else { "fail" });
        self.pass &= ok;
    }
}
