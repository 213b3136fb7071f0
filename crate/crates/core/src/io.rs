//! CSV and JSON serialization of paths, fields, kernels and Monte Carlo reports.
//!
//! CSV files carry a header row. Floats are written in shortest round-trip
//! form, so reading back reproduces the values exactly.

use std::io::{BufRead, BufReader, Read, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::chaos::{KernelHeader, KernelMatrix};
use crate::error::{Error, Result};
use crate::process::{Driver, FieldSample, LatticeConfig, SamplePath};
use crate::spec::HermiteSpec;
use crate::stats::{McReport, ReplicationRun};

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}: `{}` is not a number", s.trim())))
}

/// Data rows of a numeric CSV with the given header.
fn read_numeric_csv<R: Read>(r: R, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    let mut lines = BufReader::new(r).lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))??;
    let cols: Vec<&str> = first.split(',').map(str::trim).collect();
    if cols != header {
        return Err(Error::Parse(format!(
            "expected header `{}`, found `{}`",
            header.join(","),
            first.trim()
        )));
    }
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| parse_f64(s, i + 2))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != header.len() {
            return Err(Error::Parse(format!(
                "line {}: expected {} columns, found {}",
                i + 2,
                header.len(),
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Checks that `t` is the uniform grid `i·t_end/n` and returns `t_end`.
fn uniform_grid(t: &[f64], what: &str) -> Result<f64> {
    if t.len() < 2 {
        return Err(Error::Parse(format!("{what}: need at least two grid points")));
    }
    let n = t.len() - 1;
    let t_end = t[n];
    if t[0].abs() > 1e-12 * t_end.abs().max(1.0) || !(t_end > 0.0) {
        return Err(Error::Parse(format!("{what}: grid must run from 0 to a positive end")));
    }
    for (i, &ti) in t.iter().enumerate() {
        let expected = i as f64 * t_end / n as f64;
        if (ti - expected).abs() > 1e-9 * t_end {
            return Err(Error::Parse(format!(
                "{what}: grid is not uniform at index {i} ({ti} vs {expected})"
            )));
        }
    }
    Ok(t_end)
}

/// `t,value` rows.
pub fn write_path_csv<W: Write>(path: &SamplePath, mut w: W) -> Result<()> {
    writeln!(w, "t,value")?;
    for (t, v) in path.times().iter().zip(path.values()) {
        writeln!(w, "{t},{v}")?;
    }
    Ok(())
}

/// Reads a `t,value` file on a uniform grid starting at 0 as an external path.
pub fn read_path_csv<R: Read>(r: R) -> Result<SamplePath> {
    let rows = read_numeric_csv(r, &["t", "value"])?;
    let t: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let t_end = uniform_grid(&t, "path")?;
    SamplePath::new(t_end, rows.into_iter().map(|r| r[1]).collect(), Driver::External)
}

/// `t,value` for one-parameter fields, `t1,t2,value` for sheets (row-major).
pub fn write_field_csv<W: Write>(field: &FieldSample, mut w: W) -> Result<()> {
    match field.dim() {
        1 => {
            writeln!(w, "t,value")?;
            let h = field.extents()[0] / field.dims()[0] as f64;
            for (i, v) in field.values().iter().enumerate() {
                writeln!(w, "{},{v}", i as f64 * h)?;
            }
        }
        2 => {
            writeln!(w, "t1,t2,value")?;
            let (n1, n2) = (field.dims()[0], field.dims()[1]);
            let h1 = field.extents()[0] / n1 as f64;
            let h2 = field.extents()[1] / n2 as f64;
            for i in 0..=n1 {
                for j in 0..=n2 {
                    writeln!(w, "{},{},{}", i as f64 * h1, j as f64 * h2, field.get(&[i, j]))?;
                }
            }
        }
        d => return Err(Error::Grid(format!("CSV output supports d <= 2, got d = {d}"))),
    }
    Ok(())
}

/// Reads a `t1,t2,value` file written in row-major lattice order.
pub fn read_field_csv<R: Read>(r: R) -> Result<FieldSample> {
    let rows = read_numeric_csv(r, &["t1", "t2", "value"])?;
    let mut t1: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    t1.dedup();
    let n2p = rows.iter().take_while(|r| r[0] == rows[0][0]).count();
    if n2p < 2 || rows.len() % n2p != 0 || t1.len() * n2p != rows.len() {
        return Err(Error::Parse("field rows are not a full row-major lattice".into()));
    }
    let t2: Vec<f64> = rows[..n2p].iter().map(|r| r[1]).collect();
    let e1 = uniform_grid(&t1, "field axis 1")?;
    let e2 = uniform_grid(&t2, "field axis 2")?;
    for (k, r) in rows.iter().enumerate() {
        if r[0] != t1[k / n2p] || r[1] != t2[k % n2p] {
            return Err(Error::Parse(format!("line {}: lattice coordinates out of order", k + 2)));
        }
    }
    FieldSample::new(
        vec![e1, e2],
        vec![t1.len() - 1, n2p - 1],
        rows.into_iter().map(|r| r[2]).collect(),
        None,
    )
}

/// JSON envelope for a path or field with the provenance needed to redraw it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataEnvelope {
    pub spec: Option<HermiteSpec>,
    pub seed: Option<u64>,
    pub stream: Option<u64>,
    pub lattice: Option<LatticeConfig>,
    pub extents: Vec<f64>,
    pub dims: Vec<usize>,
    /// Row-major lattice values.
    pub values: Vec<f64>,
}

impl DataEnvelope {
    pub fn from_path(path: &SamplePath, seed: Option<u64>, stream: Option<u64>, lattice: Option<LatticeConfig>) -> Self {
        Self::from_field(&FieldSample::from_path(path), seed, stream, lattice)
    }

    pub fn from_field(field: &FieldSample, seed: Option<u64>, stream: Option<u64>, lattice: Option<LatticeConfig>) -> Self {
        Self {
            spec: field.spec().cloned(),
            seed,
            stream,
            lattice,
            extents: field.extents().to_vec(),
            dims: field.dims().to_vec(),
            values: field.values().to_vec(),
        }
    }

    fn checked_spec(&self) -> Result<Option<HermiteSpec>> {
        self.spec
            .as_ref()
            .map(|s| HermiteSpec::new(s.q(), s.hurst().to_vec()))
            .transpose()
    }

    pub fn to_field(&self) -> Result<FieldSample> {
        FieldSample::new(self.extents.clone(), self.dims.clone(), self.values.clone(), self.checked_spec()?)
    }

    pub fn to_path(&self) -> Result<SamplePath> {
        if self.dims.len() != 1 {
            return Err(Error::Grid(format!("envelope holds a {}-parameter field", self.dims.len())));
        }
        let driver = match self.checked_spec()? {
            Some(spec) => Driver::Hermite { spec },
            None => Driver::External,
        };
        SamplePath::new(self.extents[0], self.values.clone(), driver)
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn read_json<R: Read>(r: R) -> Result<Self> {
        Ok(serde_json::from_reader(r)?)
    }
}

/// Dense CSV of the sample matrix `a_ij`, one row per line, no header; the
/// grid lives in the JSON header.
pub fn write_kernel_csv<W: Write>(k: &KernelMatrix, mut w: W) -> Result<()> {
    let a = k.matrix();
    for i in 0..a.nrows() {
        let row: Vec<String> = (0..a.ncols()).map(|j| a[(i, j)].to_string()).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_kernel_header<W: Write>(k: &KernelMatrix, w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, &k.header())?;
    Ok(())
}

pub fn read_kernel<R1: Read, R2: Read>(csv: R1, header: R2) -> Result<KernelMatrix> {
    let h: KernelHeader = serde_json::from_reader(header)?;
    let mut data = Vec::with_capacity(h.m * h.m);
    let mut rows = 0;
    for (i, line) in BufReader::new(csv).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| parse_f64(s, i + 1))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != h.m {
            return Err(Error::Parse(format!("kernel row {} has {} entries, expected {}", i + 1, row.len(), h.m)));
        }
        data.extend(row);
        rows += 1;
    }
    if rows != h.m {
        return Err(Error::Parse(format!("kernel has {rows} rows, header says {}", h.m)));
    }
    KernelMatrix::new(h.grid, h.widths, DMatrix::from_row_slice(h.m, h.m, &data))
}

pub fn write_report_json<W: Write>(report: &McReport, w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, report)?;
    Ok(())
}

/// `replicate,value` rows; replicates are numbered in report order.
pub fn write_report_csv<W: Write>(report: &McReport, mut w: W) -> Result<()> {
    writeln!(w, "replicate,{}", report.quantity)?;
    for (i, v) in report.per_replicate.iter().enumerate() {
        writeln!(w, "{i},{v}")?;
    }
    Ok(())
}

pub fn write_run_json<W: Write>(run: &ReplicationRun, w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, run)?;
    Ok(())
}

/// Flat `quantity,replicate,value` rows for every quantity of a run.
pub fn write_run_csv<W: Write>(run: &ReplicationRun, mut w: W) -> Result<()> {
    writeln!(w, "quantity,replicate,value")?;
    for r in &run.reports {
        for (i, v) in r.per_replicate.iter().enumerate() {
            writeln!(w, "{},{i},{v}", r.quantity)?;
        }
    }
    Ok(())
}
