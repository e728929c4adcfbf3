//! File schemas. CSV files start with `#` provenance lines; numbers are
//! written with 17 significant digits so doubles round-trip exactly.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use ttstar_core::reduced::BoundaryData;
use ttstar_core::{CMatrix64, Complex64};

use crate::config::{sha256_hex, Tolerances};
use crate::error::{CliError, Result};

/// What every output file records about its origin.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub command: &'static str,
    pub config_sha256: String,
    pub tolerances: Tolerances,
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn write_csv(path: &Path, prov: &Provenance, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut buf = Vec::new();
    writeln!(buf, "# ttstar {}", prov.command).unwrap();
    writeln!(buf, "# config_sha256 {}", prov.config_sha256).unwrap();
    writeln!(buf, "# tolerances {}", prov.tolerances.describe()).unwrap();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let csv_err = |source| CliError::Csv {
            path: path.to_path_buf(),
            source,
        };
        w.write_record(header).map_err(csv_err)?;
        for row in rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    fs::write(path, buf).map_err(|e| CliError::io(path, e))
}

/// Pretty JSON with floats in `{:.16e}` form.
struct SciFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)).map_err(|e| CliError::io(path, e))
}

pub fn file_sha256(path: &Path) -> Result<String> {
    Ok(sha256_hex(&fs::read(path).map_err(|e| CliError::io(path, e))?))
}

fn reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| CliError::Csv {
            path: path.to_path_buf(),
            source,
        })
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, rec: &csv::StringRecord, idx: usize) -> Result<T> {
    rec.get(idx).and_then(|s| s.parse().ok()).ok_or_else(|| {
        CliError::usage(format!(
            "{}: record {line}, column {}: not a number",
            path.display(),
            idx + 1
        ))
    })
}

/// `R x R` symbol samples per plane node, as read from
/// `i,j,m,g00_re,g00_im,...` rows (node-major, θ-minor, entries row-major).
#[derive(Debug, Clone)]
pub struct SymbolTable {
    pub chains: usize,
    pub nodes: Vec<((usize, usize), Vec<CMatrix64>)>,
}

pub fn symbol_header(chains: usize) -> Vec<String> {
    let mut h = vec!["i".to_string(), "j".into(), "m".into()];
    for a in 0..chains {
        for b in 0..chains {
            h.push(format!("g{a}{b}_re"));
            h.push(format!("g{a}{b}_im"));
        }
    }
    h
}

pub fn symbol_rows(node: (usize, usize), samples: &[CMatrix64]) -> Vec<Vec<String>> {
    samples
        .iter()
        .enumerate()
        .map(|(m, s)| {
            let mut row = vec![node.0.to_string(), node.1.to_string(), m.to_string()];
            for z in s.as_slice() {
                row.push(num(z.re));
                row.push(num(z.im));
            }
            row
        })
        .collect()
}

pub fn read_symbol_table(path: &Path, theta_samples: usize) -> Result<SymbolTable> {
    let mut rd = reader(path)?;
    let csv_err = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let width = rd.headers().map_err(csv_err)?.len();
    let values = width.saturating_sub(3);
    let chains = (1..=4).find(|r| 2 * r * r == values).ok_or_else(|| {
        CliError::usage(format!(
            "{}: {width} columns; expected i,j,m plus 2R² entry columns",
            path.display()
        ))
    })?;
    let mut nodes: Vec<((usize, usize), Vec<CMatrix64>)> = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = line + 1;
        let node = (field(path, line, &rec, 0)?, field(path, line, &rec, 1)?);
        let m: usize = field(path, line, &rec, 2)?;
        let mut entries = Vec::with_capacity(chains * chains);
        for e in 0..chains * chains {
            entries.push(Complex64::new(
                field(path, line, &rec, 3 + 2 * e)?,
                field(path, line, &rec, 4 + 2 * e)?,
            ));
        }
        let sample = CMatrix64::from_row_major(chains, chains, entries)?;
        match nodes.last_mut() {
            Some((last, samples)) if *last == node => {
                if m != samples.len() {
                    return Err(CliError::usage(format!(
                        "{}: record {line}: θ index {m} out of order",
                        path.display()
                    )));
                }
                samples.push(sample);
            }
            _ => {
                if m != 0 {
                    return Err(CliError::usage(format!(
                        "{}: record {line}: node starts at θ index {m}",
                        path.display()
                    )));
                }
                nodes.push((node, vec![sample]));
            }
        }
    }
    if nodes.is_empty() {
        return Err(CliError::usage(format!("{}: no symbol samples", path.display())));
    }
    if let Some((node, s)) = nodes.iter().find(|(_, s)| s.len() != theta_samples) {
        return Err(CliError::usage(format!(
            "{}: node {node:?} has {} θ-samples, config says theta_samples = {theta_samples}",
            path.display(),
            s.len()
        )));
    }
    Ok(SymbolTable { chains, nodes })
}

/// Boundary phase `φ(r₀, ϑ_a, θ_m)` from `a,m,value` rows (angle-major).
pub fn read_boundary_table(path: &Path, r0: f64, theta_samples: usize) -> Result<BoundaryData<f64>> {
    let mut rd = reader(path)?;
    let csv_err = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    if rd.headers().map_err(csv_err)?.len() != 3 {
        return Err(CliError::usage(format!(
            "{}: expected columns a,m,value",
            path.display()
        )));
    }
    let mut values = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = line + 1;
        let (a, m): (usize, usize) = (field(path, line, &rec, 0)?, field(path, line, &rec, 1)?);
        if a * theta_samples + m != values.len() || m >= theta_samples {
            return Err(CliError::usage(format!(
                "{}: record {line}: ({a}, {m}) out of order for theta_samples = {theta_samples}",
                path.display()
            )));
        }
        values.push(field(path, line, &rec, 2)?);
    }
    if values.is_empty() {
        return Err(CliError::usage(format!("{}: no boundary samples", path.display())));
    }
    if values.len() % theta_samples != 0 {
        return Err(CliError::usage(format!("{}: last angle is incomplete", path.display())));
    }
    Ok(BoundaryData {
        r0,
        angular_samples: values.len() / theta_samples,
        theta_samples,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_numbers_keep_17_digits() {
        #[derive(Serialize)]
        struct S {
            x: f64,
            y: [f64; 2],
            z: f64,
        }
        let s = to_json(&S {
            x: 0.1,
            y: [1.0, -2.5e-300],
            z: f64::NAN,
        });
        assert!(s.contains("\"x\": 1.0000000000000001e-1"));
        assert!(s.contains("-2.5000000000000000e-300"));
        assert!(s.contains("\"z\": null"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn num_round_trips() {
        for x in [0.1, std::f64::consts::PI, -1e-310, 6.02214076e23] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
