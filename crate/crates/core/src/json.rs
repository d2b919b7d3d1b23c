//! JSON output with every float written at 17 significant digits.
//!
//! Seventeen significant digits are enough to round-trip any `f64`, so the
//! emitted documents can be parsed back bit-exactly. Non-finite values are
//! written as `null`.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

#[derive(Debug, Default, Clone, Copy)]
pub struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", format_f64(value))
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn write_null<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        CompactFormatter.write_null(writer)
    }
}

/// Formats a finite float with 17 significant digits in JSON-compatible
/// exponent notation, e.g. `-3.2500000000000000e-1`.
pub fn format_f64(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.16e}")
    } else {
        "null".to_string()
    }
}

/// Serializes `value` as a single-line JSON document.
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value
        .serialize(&mut ser)
        .expect("serializing to an in-memory buffer cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}
