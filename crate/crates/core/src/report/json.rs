//! Canonical JSON: object keys sorted, floats written with 17 significant
//! digits, two-space indentation, trailing newline. Identical inputs give
//! identical bytes.
//!
//! Report layout:
//!
//! ```text
//! {
//!   "checks": [{"anchor": str, "details": str, "id": str,
//!               "residual": number | null | "inf" | "-inf" | "nan",
//!               "status": "pass" | "fail" | "inconclusive" | "skipped"}],
//!   "input_digest": hex sha256,
//!   "status": overall status,
//!   "suite_name": str,
//!   "timestamp": RFC 3339 (from SOURCE_DATE_EPOCH, default the Unix epoch),
//!   "tool_version": str
//! }
//! ```

use std::io;

use chrono::{DateTime, SecondsFormat};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use super::VerificationReport;
use crate::safe::SafeValue;

struct CanonicalFormatter<'a> {
    pretty: PrettyFormatter<'a>,
}

impl Formatter for CanonicalFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(writer)
    }
}

/// Canonical bytes for any JSON value. `serde_json::Map` keeps keys sorted.
pub fn canonical_bytes(value: &Value) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut out,
        CanonicalFormatter {
            pretty: PrettyFormatter::new(),
        },
    );
    value
        .serialize(&mut ser)
        .expect("serializing a JSON value cannot fail");
    out.push(b'\n');
    out
}

/// JSON number, or a string marker for non-finite values.
pub fn number(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

/// `[re, im]` for finite values, `{"logmag", "arg"}` otherwise.
pub fn safe_value(v: &SafeValue) -> Value {
    match *v {
        SafeValue::Finite(z) => json!([number(z.re), number(z.im)]),
        SafeValue::LogPolar { logmag, arg } => {
            json!({"logmag": number(logmag), "arg": number(arg)})
        }
        SafeValue::Saturated => json!({"logmag": "inf", "arg": number(0.0), "saturated": true}),
    }
}

pub fn report_value(report: &VerificationReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("id".into(), json!(c.id));
            m.insert("anchor".into(), json!(c.anchor));
            m.insert("status".into(), json!(c.status.as_str()));
            m.insert(
                "residual".into(),
                c.residual.map(number).unwrap_or(Value::Null),
            );
            m.insert("details".into(), json!(c.details));
            Value::Object(m)
        })
        .collect();
    json!({
        "suite_name": report.suite_name,
        "checks": checks,
        "status": report.status().as_str(),
        "tool_version": report.tool_version,
        "timestamp": report.timestamp,
        "input_digest": report.input_digest,
    })
}

pub fn emit_json(report: &VerificationReport) -> Vec<u8> {
    canonical_bytes(&report_value(report))
}

/// RFC 3339 time from `SOURCE_DATE_EPOCH`, or the Unix epoch when unset.
pub fn reproducible_timestamp() -> String {
    let secs = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .unwrap_or(0);
    DateTime::from_timestamp(secs, 0)
        .unwrap_or_default()
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Hex SHA-256.
pub fn digest(input: &str) -> String {
    hex::encode(Sha256::digest(input.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{Check, Status};

    fn parse(bytes: &[u8]) -> Value {
        serde_json::from_slice(bytes).unwrap()
    }

    #[test]
    fn empty_report() {
        let r = VerificationReport::new("empty");
        let v = parse(&emit_json(&r));
        assert_eq!(v["checks"], json!([]));
        assert_eq!(v["status"], "pass");
    }

    #[test]
    fn single_pass() {
        let mut r = VerificationReport::new("one");
        r.checks
            .push(Check::new("a", "x = x", Status::Pass).with_residual(0.1));
        let v = parse(&emit_json(&r));
        assert_eq!(v["status"], "pass");
        assert_eq!(v["checks"][0]["status"], "pass");
        let text = String::from_utf8(emit_json(&r)).unwrap();
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
    }

    #[test]
    fn one_fail_fails_report() {
        let mut r = VerificationReport::new("mixed");
        r.checks.push(Check::new("a", "x", Status::Pass));
        r.checks.push(Check::new("b", "x", Status::Fail));
        r.checks.push(Check::new("c", "x", Status::Pass));
        assert_eq!(parse(&emit_json(&r))["status"], "fail");
    }

    #[test]
    fn keys_sorted_and_stable() {
        let mut r = VerificationReport::new("s");
        r.checks
            .push(Check::new("z", "x", Status::Pass).with_residual(f64::INFINITY));
        let a = emit_json(&r);
        assert_eq!(a, emit_json(&r.clone()));
        let text = String::from_utf8(a).unwrap();
        let keys = [
            "checks",
            "input_digest",
            "status",
            "suite_name",
            "timestamp",
            "tool_version",
        ];
        let pos: Vec<usize> = keys
            .iter()
            .map(|k| text.find(&format!("\n  \"{k}\"")).unwrap())
            .collect();
        assert!(pos.windows(2).all(|p| p[0] < p[1]));
        assert!(text.contains("\"residual\": \"inf\""));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn epoch_default() {
        if std::env::var("SOURCE_DATE_EPOCH").is_err() {
            assert_eq!(reproducible_timestamp(), "1970-01-01T00:00:00Z");
        }
        assert_eq!(digest("").len(), 64);
    }
}
