use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

/// Writes every float with 17 significant digits, enough to round-trip.
pub struct RoundTrip;

impl Formatter for RoundTrip {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", fmt_f64(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Provenance attached to every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub params: Value,
    pub seed: u64,
    pub tol: Option<f64>,
    pub dims: Value,
    pub expm: String,
    pub version: &'static str,
    pub wall_time_s: Option<f64>,
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, RoundTrip);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// A JSON object `{"manifest": ..., <body fields>}`.
pub fn json_document<T: Serialize>(manifest: &RunManifest, body: &T) -> serde_json::Result<String> {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        manifest: &'a RunManifest,
        #[serde(flatten)]
        body: &'a T,
    }
    to_json(&Doc { manifest, body })
}

/// CSV with a `# manifest: {...}` comment line, a fixed header, and numeric rows.
pub fn csv_document(
    manifest: &RunManifest,
    header: &[&str],
    rows: &[Vec<f64>],
) -> serde_json::Result<String> {
    let mut out = format!("# manifest: {}\n", to_json(manifest)?);
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}
