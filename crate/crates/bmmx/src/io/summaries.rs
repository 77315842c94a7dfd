//! CSV exports of the posterior summaries, the acceptance report, and the
//! benchmark results table. All ids in these files are 1-based.

use super::{write_stamp, FileStamp};
use crate::error::Result;
use crate::posterior::{AssignmentMatrix, ElbowStatistic};
use crate::sampler::AcceptanceReport;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Long-format heat matrix: `assessor,cluster,probability`.
pub fn write_assignment_matrix(
    path: &Path,
    matrix: &AssignmentMatrix,
    stamp: &FileStamp,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    writeln!(w, "assessor,cluster,probability")?;
    for (j, row) in matrix.rows().iter().enumerate() {
        for (c, &p) in row.iter().enumerate() {
            writeln!(w, "{},{},{p}", j + 1, c + 1)?;
        }
    }
    Ok(())
}

pub fn write_map_clustering(path: &Path, labels: &[u16], stamp: &FileStamp) -> Result<()> {
    super::data::write_labels(path, labels, "cluster", stamp)
}

pub fn write_elbow(path: &Path, elbow: &ElbowStatistic, stamp: &FileStamp) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    writeln!(w, "chain,iteration,distance")?;
    for p in &elbow.points {
        writeln!(w, "{},{},{}", p.chain + 1, p.iteration, p.distance)?;
    }
    Ok(())
}

/// `cluster,position,item,probability`, positions ordered by descending
/// top-k probability.
pub fn write_top_k(path: &Path, top_k: &[Vec<(usize, f64)>], stamp: &FileStamp) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    writeln!(w, "cluster,position,item,probability")?;
    for (c, items) in top_k.iter().enumerate() {
        for (pos, &(item, p)) in items.iter().enumerate() {
            writeln!(w, "{},{},{},{p}", c + 1, pos + 1, item + 1)?;
        }
    }
    Ok(())
}

pub fn write_cp_consensus(path: &Path, consensus: &[Vec<usize>], stamp: &FileStamp) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    writeln!(w, "cluster,position,item")?;
    for (c, order) in consensus.iter().enumerate() {
        for (pos, &item) in order.iter().enumerate() {
            writeln!(w, "{},{},{}", c + 1, pos + 1, item + 1)?;
        }
    }
    Ok(())
}

/// Long-format contingency table: `cluster_a,cluster_b,count`.
pub fn write_contingency(path: &Path, table: &[Vec<u64>], stamp: &FileStamp) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    writeln!(w, "cluster_a,cluster_b,count")?;
    for (a, row) in table.iter().enumerate() {
        for (b, &count) in row.iter().enumerate() {
            writeln!(w, "{},{},{count}", a + 1, b + 1)?;
        }
    }
    Ok(())
}

/// `param,accepted,proposed,rate`; the rate cell is empty for parameter
/// families that were never proposed.
pub fn write_acceptance(path: &Path, report: &AcceptanceReport, stamp: &FileStamp) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    writeln!(w, "param,accepted,proposed,rate")?;
    let c = report.counters;
    let fmt = |r: Option<f64>| r.map_or(String::new(), |x| x.to_string());
    writeln!(w, "rho,{},{},{}", c.rho_accepted, c.rho_proposed, fmt(report.rho))?;
    writeln!(w, "alpha,{},{},{}", c.alpha_accepted, c.alpha_proposed, fmt(report.alpha))?;
    writeln!(
        w,
        "augmentation,{},{},{}",
        c.aug_accepted,
        c.aug_proposed,
        fmt(report.augmentation)
    )?;
    Ok(())
}

/// One benchmark measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkRow {
    pub d_rho: usize,
    pub d_x: f64,
    pub method: String,
    /// Similarity hyperparameter description, e.g. `theta=1`.
    pub hyper: String,
    pub replicate: usize,
    pub p_hat: f64,
    pub z_post: f64,
}

pub fn write_benchmark_results(
    path: &Path,
    rows: &[BenchmarkRow],
    stamp: &FileStamp,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    writeln!(w, "d_rho,d_x,method,hyper,replicate,p_hat,z_post")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.d_rho, r.d_x, r.method, r.hyper, r.replicate, r.p_hat, r.z_post
        )?;
    }
    Ok(())
}
