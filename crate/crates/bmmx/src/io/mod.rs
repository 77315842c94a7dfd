//! File formats: rank and covariate ingestion, distance-table and log-Z
//! grid files, sample serialization (columnar CSV and a compact binary
//! stream), and the CSV exports of every posterior summary.
//!
//! Every output file starts with a comment line
//! `# config=<tag> seed=<seed>` so results can be audited back to the run
//! that produced them. Readers skip `#` comment lines.

mod data;
mod samples;
mod summaries;
mod zfiles;

pub use data::{
    load_covariates, load_labels, load_rankings, write_covariates, write_labels,
    write_partial_rankings, write_rankings, CovariateFileSpec, RankingData, RankingFileSpec,
};
pub use samples::{read_samples_binary, read_samples_csv, write_samples_binary, write_samples_csv};
pub use summaries::{
    write_acceptance, write_assignment_matrix, write_benchmark_results, write_contingency,
    write_cp_consensus, write_elbow, write_map_clustering, write_top_k, BenchmarkRow,
};
pub use zfiles::{load_distance_table, load_log_z_grid, write_distance_table, write_log_z_grid};

use std::io::Write;

/// Reproducibility stamp written as the first line of every output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileStamp {
    pub config_tag: String,
    pub seed: u64,
}

impl FileStamp {
    pub fn new(config_tag: impl Into<String>, seed: u64) -> Self {
        Self { config_tag: config_tag.into(), seed }
    }

    pub fn untagged(seed: u64) -> Self {
        Self { config_tag: String::new(), seed }
    }

    fn tag(&self) -> &str {
        if self.config_tag.is_empty() {
            "untagged"
        } else {
            &self.config_tag
        }
    }
}

pub(crate) fn write_stamp<W: Write>(w: &mut W, stamp: &FileStamp) -> std::io::Result<()> {
    writeln!(w, "# config={} seed={}", stamp.tag(), stamp.seed)
}
