//! Rendering of the CLI's file formats: the JSON results document, the
//! curve table, and wavefunction grids. Every float is written with 17
//! significant digits so values survive a round trip through text exactly.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

/// JSON with all numbers in scientific notation at round-trip precision.
/// Keys serialize in sorted order, so identical inputs give identical bytes.
pub fn render_json(value: &Value) -> String {
    struct SciFormatter;
    impl serde_json::ser::Formatter for SciFormatter {
        fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
            write!(w, "{v:.16e}")
        }
    }
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    let mut text = String::from_utf8(out).expect("serializer emits UTF-8");
    text.push('\n');
    text
}

/// `x y psi` rows over a square grid, row-major with x outermost, matching
/// the layout of `EigenSolution::wavefunction_grid`.
pub fn render_grid(m_grid: usize, length_x: f64, length_y: f64, values: &[f64]) -> String {
    let mut out = String::from("x y psi\n");
    for i in 0..m_grid {
        let x = length_x * i as f64 / (m_grid - 1) as f64;
        for j in 0..m_grid {
            let y = length_y * j as f64 / (m_grid - 1) as f64;
            out.push_str(&format!("{x:.16e} {y:.16e} {:.16e}\n", values[i * m_grid + j]));
        }
    }
    out
}

/// Writes to the path, or to stdout when no path was given.
pub fn write_text(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}
