//! Deterministic JSON reports: fixed field order, floats rendered with 17
//! significant digits, complex numbers as [re, im] pairs.

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;
use std::io;

/// Top-level report envelope shared by every subcommand.
#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub warnings: Vec<String>,
}

struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        // Normalize negative zero so reports stay clean and stable.
        let value = if value == 0.0 { 0.0 } else { value };
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.7e}")
    }
}

/// Serialize any value with the report float policy.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
    value.serialize(&mut ser).expect("report serialization");
    String::from_utf8(out).expect("json is utf-8")
}

impl Report {
    pub fn print(&self) {
        println!("{}", to_json(self));
    }
}

/// Convert a serializable payload into a `Value` while keeping f64 precision
/// (serde_json Values hold f64 natively; formatting happens on output).
pub fn value_of<T: Serialize>(payload: &T) -> Value {
    serde_json::to_value(payload).expect("value conversion")
}

/// Single-line machine-parseable error on stderr.
pub fn print_error(kind: &'static str, message: impl Into<String>) {
    let body = serde_json::json!({ "error": { "kind": kind, "message": message.into() } });
    eprintln!("{}", to_json(&body));
}
