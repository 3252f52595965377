//! Machine-readable reports shared by the command-line front end and the
//! acceptance run.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonReport {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub checks: Vec<Check>,
}

impl JsonReport {
    pub fn new(command: impl Into<String>, inputs: Value, result: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            inputs,
            result,
            checks: Vec::new(),
        }
    }

    pub fn check(mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        self.checks.push(Check::new(name, pass, detail));
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Big integers go out as decimal strings so no JSON reader rounds them.
pub fn ser_decimal<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn ser_decimal_vec<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}
