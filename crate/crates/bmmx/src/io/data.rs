//! Ingestion and export of ranking files, covariate files with their
//! schema sidecars, and label files.

use super::{write_stamp, FileStamp};
use crate::covariates::{ColumnData, ColumnKind, CovariateColumn, CovariateTable};
use crate::error::{Error, Result};
use crate::rank::{PartialRanking, Ranking};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// How a rankings CSV is parsed.
#[derive(Clone, Debug)]
pub struct RankingFileSpec {
    pub path: PathBuf,
    pub delimiter: u8,
    /// Cell content marking an unranked item (default: empty cell).
    pub missing_token: String,
    pub has_header: bool,
}

impl RankingFileSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            delimiter: b',',
            missing_token: String::new(),
            has_header: false,
        }
    }
}

/// Parsed ranking data: complete when no missing token appears anywhere,
/// partial otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum RankingData {
    Complete(Vec<Ranking>),
    Partial(Vec<PartialRanking>),
}

impl RankingData {
    pub fn len(&self) -> usize {
        match self {
            RankingData::Complete(r) => r.len(),
            RankingData::Partial(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_items(&self) -> usize {
        match self {
            RankingData::Complete(r) => r.first().map_or(0, |x| x.n()),
            RankingData::Partial(p) => p.first().map_or(0, |x| x.n()),
        }
    }

    pub fn is_partial(&self) -> bool {
        matches!(self, RankingData::Partial(_))
    }

    /// View as partial rankings (complete rows become fully observed ones).
    pub fn to_partial(&self) -> Vec<PartialRanking> {
        match self {
            RankingData::Partial(p) => p.clone(),
            RankingData::Complete(r) => r.iter().map(PartialRanking::from_complete).collect(),
        }
    }
}

pub fn load_rankings(spec: &RankingFileSpec) -> Result<RankingData> {
    let path_str = spec.path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(spec.has_header)
        .comment(Some(b'#'))
        .flexible(false)
        .from_path(&spec.path)?;

    let mut rows: Vec<(u64, Vec<Option<u16>>)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let mut row = Vec::with_capacity(record.len());
        for (col, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if cell == spec.missing_token {
                row.push(None);
            } else {
                let value: u16 = cell.parse().map_err(|_| Error::Parse {
                    path: path_str.clone(),
                    line,
                    msg: format!("invalid rank '{cell}' in column {}", col + 1),
                })?;
                row.push(Some(value));
            }
        }
        rows.push((line, row));
    }
    if rows.is_empty() {
        return Err(Error::Format { path: path_str, msg: "no ranking rows".into() });
    }

    let any_missing = rows.iter().any(|(_, r)| r.iter().any(Option::is_none));
    if any_missing {
        let partials = rows
            .into_iter()
            .map(|(line, row)| {
                PartialRanking::new(row).map_err(|e| Error::Parse {
                    path: path_str.clone(),
                    line,
                    msg: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RankingData::Partial(partials))
    } else {
        let rankings = rows
            .into_iter()
            .map(|(line, row)| {
                let ranks: Vec<u16> = row.into_iter().map(Option::unwrap).collect();
                Ranking::new(ranks).map_err(|e| Error::Parse {
                    path: path_str.clone(),
                    line,
                    msg: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RankingData::Complete(rankings))
    }
}

pub fn write_rankings(path: &Path, rankings: &[Ranking], stamp: &FileStamp) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    for r in rankings {
        let row: Vec<String> = r.ranks().iter().map(|x| x.to_string()).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_partial_rankings(
    path: &Path,
    partials: &[PartialRanking],
    stamp: &FileStamp,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    for pr in partials {
        let row: Vec<String> = pr
            .observed()
            .iter()
            .map(|v| v.map_or(String::new(), |x| x.to_string()))
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Covariate file plus its schema sidecar. The sidecar has one
/// `name,continuous` or `name,categorical:<levels>` line per column.
#[derive(Clone, Debug)]
pub struct CovariateFileSpec {
    pub path: PathBuf,
    pub schema_path: PathBuf,
    pub delimiter: u8,
    pub missing_token: String,
}

impl CovariateFileSpec {
    pub fn new(path: impl Into<PathBuf>, schema_path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            schema_path: schema_path.into(),
            delimiter: b',',
            missing_token: String::new(),
        }
    }
}

fn parse_kind(text: &str) -> Option<ColumnKind> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("continuous") {
        return Some(ColumnKind::Continuous);
    }
    let rest = text.strip_prefix("categorical:")?;
    rest.trim().parse::<u32>().ok().map(|levels| ColumnKind::Categorical { levels })
}

fn load_schema(path: &Path) -> Result<Vec<(String, ColumnKind)>> {
    let path_str = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(false)
        .from_path(path)?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(Error::Parse {
                path: path_str,
                line,
                msg: "schema rows are 'name,kind'".into(),
            });
        }
        let kind = parse_kind(&record[1]).ok_or_else(|| Error::Parse {
            path: path_str.clone(),
            line,
            msg: format!("unknown column kind '{}'", &record[1]),
        })?;
        out.push((record[0].trim().to_string(), kind));
    }
    Ok(out)
}

pub fn load_covariates(spec: &CovariateFileSpec) -> Result<CovariateTable> {
    let path_str = spec.path.display().to_string();
    let schema = load_schema(&spec.schema_path)?;

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(true)
        .comment(Some(b'#'))
        .flexible(false)
        .from_path(&spec.path)?;
    let names: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let kinds: Vec<ColumnKind> = names
        .iter()
        .map(|name| {
            schema
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, k)| *k)
                .ok_or_else(|| Error::Format {
                    path: spec.schema_path.display().to_string(),
                    msg: format!("no schema entry for column '{name}'"),
                })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut raw: Vec<Vec<Option<String>>> = vec![Vec::new(); names.len()];
    let mut num_rows = 0usize;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        for (col, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if cell == spec.missing_token {
                raw[col].push(None);
            } else {
                raw[col].push(Some(cell.to_string()));
            }
        }
        let _ = line;
        num_rows += 1;
    }

    let columns = names
        .into_iter()
        .zip(kinds)
        .zip(raw)
        .map(|((name, kind), cells)| {
            let data = match kind {
                ColumnKind::Continuous => {
                    let values = cells
                        .into_iter()
                        .map(|c| {
                            c.map(|s| {
                                s.parse::<f64>().map_err(|_| Error::Format {
                                    path: path_str.clone(),
                                    msg: format!("column '{name}': invalid continuous value '{s}'"),
                                })
                            })
                            .transpose()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    ColumnData::Continuous(values)
                }
                ColumnKind::Categorical { levels } => {
                    let values = cells
                        .into_iter()
                        .map(|c| {
                            c.map(|s| {
                                let v = s.parse::<u32>().map_err(|_| Error::Format {
                                    path: path_str.clone(),
                                    msg: format!("column '{name}': invalid category '{s}'"),
                                })?;
                                if v >= levels {
                                    return Err(Error::Format {
                                        path: path_str.clone(),
                                        msg: format!(
                                            "column '{name}': category {v} outside 0..{levels}"
                                        ),
                                    });
                                }
                                Ok(v)
                            })
                            .transpose()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    ColumnData::Categorical { levels, values }
                }
            };
            Ok(CovariateColumn { name, data })
        })
        .collect::<Result<Vec<_>>>()?;

    CovariateTable::new(num_rows, columns)
}

/// Writes the covariate values and their schema sidecar.
pub fn write_covariates(
    path: &Path,
    schema_path: &Path,
    table: &CovariateTable,
    stamp: &FileStamp,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(schema_path)?);
    write_stamp(&mut w, stamp)?;
    for col in table.columns() {
        match col.kind() {
            ColumnKind::Continuous => writeln!(w, "{},continuous", col.name)?,
            ColumnKind::Categorical { levels } => writeln!(w, "{},categorical:{levels}", col.name)?,
        }
    }
    drop(w);

    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    let names: Vec<&str> = table.columns().iter().map(|c| c.name.as_str()).collect();
    writeln!(w, "{}", names.join(","))?;
    for j in 0..table.num_assessors() {
        let row: Vec<String> = table
            .columns()
            .iter()
            .map(|col| match &col.data {
                ColumnData::Continuous(values) => {
                    values[j].map_or(String::new(), |x| x.to_string())
                }
                ColumnData::Categorical { values, .. } => {
                    values[j].map_or(String::new(), |x| x.to_string())
                }
            })
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Writes an `assessor,<header>` label file with 1-based ids.
pub fn write_labels(path: &Path, labels: &[u16], header: &str, stamp: &FileStamp) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, stamp)?;
    writeln!(w, "assessor,{header}")?;
    for (j, &l) in labels.iter().enumerate() {
        writeln!(w, "{},{}", j + 1, l + 1)?;
    }
    Ok(())
}

/// Reads an `assessor,<label>` file back into 0-based labels ordered by
/// assessor.
pub fn load_labels(path: &Path) -> Result<Vec<u16>> {
    let path_str = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .flexible(false)
        .from_path(path)?;
    let mut pairs: Vec<(usize, u16)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let parse_err = |msg: String| Error::Parse { path: path_str.clone(), line, msg };
        if record.len() != 2 {
            return Err(parse_err("expected 'assessor,label' rows".into()));
        }
        let assessor: usize = record[0]
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("invalid assessor id '{}'", &record[0])))?;
        let label: u16 = record[1]
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("invalid label '{}'", &record[1])))?;
        if assessor == 0 || label == 0 {
            return Err(parse_err("assessor ids and labels are 1-based".into()));
        }
        pairs.push((assessor - 1, label - 1));
    }
    if pairs.is_empty() {
        return Err(Error::Format { path: path_str, msg: "no label rows".into() });
    }
    pairs.sort_unstable();
    let n = pairs.len();
    let mut out = vec![0u16; n];
    for (i, (assessor, label)) in pairs.into_iter().enumerate() {
        if assessor != i {
            return Err(Error::Format {
                path: path_str,
                msg: format!("assessor ids must cover 1..={n} exactly"),
            });
        }
        out[assessor] = label;
    }
    Ok(out)
}
