//! JSON emission with a fixed float format.
//!
//! Every float is written as `{:.16e}` — 17 significant decimal digits — which
//! is enough to identify an IEEE double uniquely, so parse(write(x)) == x
//! bit-for-bit. Output is compact (no whitespace) and field order follows the
//! struct definitions, which keeps emitted files byte-stable across runs.

use serde::Serialize;
use std::io;

pub struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{:.16e}", value)
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{:.8e}", value)
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    String::from_utf8(out).expect("serializer emits UTF-8")
}
