//! Raw little-endian f64 field dumps with a text header beside them.
//!
//! Variables are stored one after another, each as a full window array with
//! x varying fastest, then y, then z.

use std::path::{Path, PathBuf};

use super::keyvalue::parse_document;
use crate::error::{Error, Result};

pub const DUMP_FORMAT: &str = "mdw-field-dump-1";

#[derive(Debug, Clone, PartialEq)]
pub struct DumpVariable {
    pub name: String,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DumpHeader {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    /// Lab coordinates of cell (0, 0, 0).
    pub origin: [f64; 3],
    pub time: f64,
    pub variables: Vec<DumpVariable>,
}

impl DumpHeader {
    pub fn cells(&self) -> Option<usize> {
        self.nx.checked_mul(self.ny)?.checked_mul(self.nz)
    }

    pub fn byte_len(&self) -> Option<usize> {
        self.cells()?.checked_mul(self.variables.len())?.checked_mul(8)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("format = {DUMP_FORMAT}\n"));
        out.push_str("byte_order = little-endian\n");
        out.push_str("value_type = f64\n");
        out.push_str("layout = variable-major,x-fastest\n");
        out.push_str(&format!("nx = {}\nny = {}\nnz = {}\n", self.nx, self.ny, self.nz));
        out.push_str(&format!("dx = {:e} m\ndy = {:e} m\ndz = {:e} m\n", self.dx, self.dy, self.dz));
        out.push_str(&format!(
            "origin_x = {:e} m\norigin_y = {:e} m\norigin_z = {:e} m\n",
            self.origin[0], self.origin[1], self.origin[2]
        ));
        out.push_str(&format!("time = {:e} s\n", self.time));
        out.push_str(&format!("variables = {}\n", self.variables.len()));
        for (i, v) in self.variables.iter().enumerate() {
            out.push_str(&format!("variable.{i} = {} {}\n", v.name, v.unit));
        }
        out
    }
}

fn header_err(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message: message.into(),
    }
}

pub fn parse_dump_header(text: &str) -> Result<DumpHeader> {
    let doc = parse_document(text)?;
    let get = |key: &str| doc.get(key).ok_or_else(|| header_err(format!("dump header lacks '{key}'")));
    let exact = |key: &str, want: &str| -> Result<()> {
        let e = get(key)?;
        if e.value != want || e.unit.is_some() {
            return Err(Error::Parse {
                line: e.line,
                column: e.value_col,
                message: format!("'{key}' must be '{want}'"),
            });
        }
        Ok(())
    };
    exact("format", DUMP_FORMAT)?;
    exact("byte_order", "little-endian")?;
    exact("value_type", "f64")?;
    exact("layout", "variable-major,x-fastest")?;
    let count = |key: &str| -> Result<usize> {
        let e = get(key)?;
        e.value.parse::<usize>().map_err(|_| Error::Parse {
            line: e.line,
            column: e.value_col,
            message: format!("'{key}' is not a count"),
        })
    };
    let real = |key: &str, unit: &str| -> Result<f64> {
        let e = get(key)?;
        let v = e.value.parse::<f64>().ok().filter(|v| v.is_finite());
        match (v, e.unit.as_deref()) {
            (Some(v), Some(u)) if u == unit => Ok(v),
            _ => Err(Error::Parse {
                line: e.line,
                column: e.value_col,
                message: format!("'{key}' must be a finite number in {unit}"),
            }),
        }
    };
    let nvars = count("variables")?;
    let mut variables = Vec::new();
    for i in 0..nvars {
        let e = get(&format!("variable.{i}"))?;
        variables.push(DumpVariable {
            name: e.value.clone(),
            unit: e.unit.clone().unwrap_or_else(|| "1".to_string()),
        });
    }
    let expected = 15 + nvars;
    if doc.len() != expected {
        return Err(header_err(format!(
            "dump header has {} keys, expected {expected}",
            doc.len()
        )));
    }
    let h = DumpHeader {
        nx: count("nx")?,
        ny: count("ny")?,
        nz: count("nz")?,
        dx: real("dx", "m")?,
        dy: real("dy", "m")?,
        dz: real("dz", "m")?,
        origin: [real("origin_x", "m")?, real("origin_y", "m")?, real("origin_z", "m")?],
        time: real("time", "s")?,
        variables,
    };
    if h.byte_len().is_none() {
        return Err(header_err("dump dimensions overflow"));
    }
    Ok(h)
}

/// Decode the binary part of a dump against its header.
pub fn read_dump_values(header: &DumpHeader, bytes: &[u8]) -> Result<Vec<Vec<f64>>> {
    let len = header.byte_len().ok_or_else(|| header_err("dump dimensions overflow"))?;
    if bytes.len() != len {
        return Err(header_err(format!(
            "dump payload has {} bytes, header implies {len}",
            bytes.len()
        )));
    }
    let cells = header.cells().unwrap_or(0);
    if cells == 0 {
        return Ok(vec![Vec::new(); header.variables.len()]);
    }
    Ok(bytes
        .chunks_exact(8 * cells)
        .map(|block| {
            block
                .chunks_exact(8)
                .map(|b| f64::from_le_bytes(b.try_into().expect("8-byte chunk")))
                .collect()
        })
        .collect())
}

pub fn dump_paths(base: &Path) -> (PathBuf, PathBuf) {
    (base.with_extension("hdr"), base.with_extension("bin"))
}

pub fn write_dump(base: &Path, header: &DumpHeader, data: &[Vec<f64>]) -> Result<()> {
    let cells = header.cells().unwrap_or(0);
    if data.len() != header.variables.len() || data.iter().any(|d| d.len() != cells) {
        return Err(Error::Precondition(
            "dump data does not match its header".to_string(),
        ));
    }
    let (hdr, bin) = dump_paths(base);
    let mut bytes = Vec::with_capacity(8 * cells * data.len());
    for v in data.iter().flatten() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::write(&hdr, header.to_text()).map_err(|e| Error::io(&hdr, e))?;
    std::fs::write(&bin, bytes).map_err(|e| Error::io(&bin, e))?;
    Ok(())
}

pub fn read_dump(base: &Path) -> Result<(DumpHeader, Vec<Vec<f64>>)> {
    let (hdr, bin) = dump_paths(base);
    let text = std::fs::read_to_string(&hdr).map_err(|e| Error::io(&hdr, e))?;
    let header = parse_dump_header(&text)?;
    let bytes = std::fs::read(&bin).map_err(|e| Error::io(&bin, e))?;
    let data = read_dump_values(&header, &bytes)?;
    Ok((header, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> DumpHeader {
        DumpHeader {
            nx: 2,
            ny: 3,
            nz: 4,
            dx: 1e-6,
            dy: 1e-6,
            dz: 2.5e-7,
            origin: [-1e-6, -1.5e-6, 3.3e-5],
            time: 1.25e-13,
            variables: vec![
                DumpVariable { name: "ra_z".into(), unit: "m".into() },
                DumpVariable { name: "rho_mdw".into(), unit: "kg/m^3".into() },
            ],
        }
    }

    #[test]
    fn header_roundtrip() {
        let h = header();
        assert_eq!(parse_dump_header(&h.to_text()).unwrap(), h);
    }

    #[test]
    fn payload_roundtrip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let base = dir.path().join("state");
        let h = header();
        let data: Vec<Vec<f64>> = (0..2)
            .map(|v| (0..24).map(|i| (i as f64 + 0.1 * v as f64).sin() * 1e-9).collect())
            .collect();
        let mut odd = data.clone();
        odd[0][3] = -0.0;
        odd[1][5] = f64::MIN_POSITIVE / 3.0;
        write_dump(&base, &h, &odd).unwrap();
        let (h2, back) = read_dump(&base).unwrap();
        assert_eq!(h2, h);
        for (a, b) in odd.iter().flatten().zip(back.iter().flatten()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn truncated_payload_rejected() {
        let h = header();
        assert!(read_dump_values(&h, &[0u8; 17]).is_err());
        let huge = DumpHeader { nx: usize::MAX, ..header() };
        assert!(parse_dump_header(&huge.to_text()).is_err());
    }
}
