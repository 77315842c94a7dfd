//! Distance-table and log-Z grid files.
//!
//! Table format: a `n,metric` line followed by `d,count` lines, counts as
//! decimal integers of arbitrary precision. Grid format: a
//! `# n=<n> metric=<metric>` comment followed by `alpha,log_z,se` rows.

use super::{write_stamp, FileStamp};
use crate::error::{Error, Result};
use crate::partition_function::{DistanceFrequencyTable, LogZGrid};
use crate::rank::DistanceMetric;
use num_bigint::BigUint;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

pub fn write_distance_table(
    path: &Path,
    table: &DistanceFrequencyTable,
    stamp: &FileStamp,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    writeln!(w, "{},{}", table.n(), table.metric())?;
    for (d, count) in table.counts() {
        writeln!(w, "{d},{count}")?;
    }
    Ok(())
}

pub fn load_distance_table(path: &Path) -> Result<DistanceFrequencyTable> {
    let path_str = path.display().to_string();
    let reader = BufReader::new(File::open(path)?);
    let mut header: Option<(usize, DistanceMetric)> = None;
    let mut counts: BTreeMap<u64, BigUint> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx as u64 + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { path: path_str.clone(), line: line_no, msg };
        let (left, right) = text
            .split_once(',')
            .ok_or_else(|| parse_err("expected two comma-separated fields".into()))?;
        match header {
            None => {
                let n: usize = left
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(format!("invalid item count '{left}'")))?;
                let metric = DistanceMetric::from_str(right.trim())
                    .map_err(|e| parse_err(e.to_string()))?;
                header = Some((n, metric));
            }
            Some(_) => {
                let d: u64 = left
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(format!("invalid distance '{left}'")))?;
                let count = BigUint::parse_bytes(right.trim().as_bytes(), 10)
                    .ok_or_else(|| parse_err(format!("invalid count '{right}'")))?;
                if counts.insert(d, count).is_some() {
                    return Err(parse_err(format!("duplicate distance {d}")));
                }
            }
        }
    }
    let (n, metric) = header.ok_or_else(|| Error::Format {
        path: path_str.clone(),
        msg: "missing 'n,metric' header line".into(),
    })?;
    DistanceFrequencyTable::from_counts(n, metric, counts)
}

pub fn write_log_z_grid(path: &Path, grid: &LogZGrid, stamp: &FileStamp) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    writeln!(w, "# n={} metric={}", grid.n(), grid.metric())?;
    writeln!(w, "alpha,log_z,se")?;
    for i in 0..grid.alphas().len() {
        writeln!(
            w,
            "{},{},{}",
            grid.alphas()[i],
            grid.log_z_values()[i],
            grid.standard_errors()[i]
        )?;
    }
    Ok(())
}

pub fn load_log_z_grid(path: &Path) -> Result<LogZGrid> {
    let path_str = path.display().to_string();
    let reader = BufReader::new(File::open(path)?);
    let mut meta: Option<(usize, DistanceMetric)> = None;
    let mut alphas = Vec::new();
    let mut log_z = Vec::new();
    let mut se = Vec::new();
    let mut saw_header = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx as u64 + 1;
        let text = line.trim();
        let parse_err = |msg: String| Error::Parse { path: path_str.clone(), line: line_no, msg };
        if let Some(rest) = text.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(spec) = rest.strip_prefix("n=") {
                let mut parts = spec.split_whitespace();
                let n: usize = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| parse_err("invalid grid metadata".into()))?;
                let metric = parts
                    .next()
                    .and_then(|s| s.strip_prefix("metric="))
                    .ok_or_else(|| parse_err("grid metadata missing metric".into()))?;
                let metric =
                    DistanceMetric::from_str(metric).map_err(|e| parse_err(e.to_string()))?;
                meta = Some((n, metric));
            }
            continue;
        }
        if text.is_empty() {
            continue;
        }
        if !saw_header {
            if text != "alpha,log_z,se" {
                return Err(parse_err(format!("expected 'alpha,log_z,se' header, got '{text}'")));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_err("expected three comma-separated fields".into()));
        }
        let parse_f64 = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| parse_err(format!("invalid number '{s}'")))
        };
        alphas.push(parse_f64(fields[0])?);
        log_z.push(parse_f64(fields[1])?);
        se.push(parse_f64(fields[2])?);
    }
    let (n, metric) = meta.ok_or_else(|| Error::Format {
        path: path_str.clone(),
        msg: "missing '# n=<n> metric=<metric>' line".into(),
    })?;
    LogZGrid::new(n, metric, alphas, log_z, se)
}
