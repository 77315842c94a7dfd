//! Sample serialization.
//!
//! Columnar CSV: metadata in comment lines, then
//! `iteration,chain,param,cluster,index,value` rows (1-based ids). Binary:
//! little-endian, magic `BMMXSMP1`, length-prefixed records. Both formats
//! round-trip a [`PosteriorSamples`] losslessly.

use super::{write_stamp, FileStamp};
use crate::error::{Error, Result};
use crate::sampler::{AcceptanceCounters, ChainSamples, PosteriorSamples, SampleRecord};
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"BMMXSMP1";
const VERSION: u32 = 1;

pub fn write_samples_csv(path: &Path, samples: &PosteriorSamples) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_stamp(&mut w, &FileStamp::new(samples.config_tag.clone(), samples.seed))?;
    writeln!(
        w,
        "# samples n={} N={} C={} M={} burn_in={} thin={} requested_thin={} aug={} chains={}",
        samples.n_items,
        samples.num_assessors,
        samples.num_clusters,
        samples.total_iterations,
        samples.burn_in,
        samples.effective_thin,
        samples.requested_thin,
        samples.has_augmented as u8,
        samples.chains.len()
    )?;
    for chain in &samples.chains {
        let a = chain.accept;
        writeln!(
            w,
            "# chain={} seed={} rho={}/{} alpha={}/{} aug={}/{}",
            chain.chain_index + 1,
            chain.chain_seed,
            a.rho_accepted,
            a.rho_proposed,
            a.alpha_accepted,
            a.alpha_proposed,
            a.aug_accepted,
            a.aug_proposed
        )?;
    }
    writeln!(w, "iteration,chain,param,cluster,index,value")?;
    for chain in &samples.chains {
        let ci = chain.chain_index + 1;
        for rec in &chain.records {
            let it = rec.iteration;
            for (c, &t) in rec.tau.iter().enumerate() {
                writeln!(w, "{it},{ci},tau,{},0,{t}", c + 1)?;
            }
            for (c, &a) in rec.alpha.iter().enumerate() {
                writeln!(w, "{it},{ci},alpha,{},0,{a}", c + 1)?;
            }
            for (c, rho) in rec.rho.iter().enumerate() {
                for (item, &rank) in rho.iter().enumerate() {
                    writeln!(w, "{it},{ci},rho,{},{},{rank}", c + 1, item + 1)?;
                }
            }
            for (j, &z) in rec.z.iter().enumerate() {
                writeln!(w, "{it},{ci},z,0,{},{}", j + 1, z + 1)?;
            }
            if let Some(aug) = &rec.augmented {
                for (j, ranks) in aug.iter().enumerate() {
                    for (item, &rank) in ranks.iter().enumerate() {
                        writeln!(w, "{it},{ci},rtilde,{},{},{rank}", j + 1, item + 1)?;
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Default)]
struct Meta {
    n: usize,
    num_assessors: usize,
    num_clusters: usize,
    total_iterations: usize,
    burn_in: usize,
    thin: usize,
    requested_thin: usize,
    aug: bool,
    chains: usize,
}

fn parse_kv<T: std::str::FromStr>(token: &str, key: &str) -> Option<T> {
    token.strip_prefix(key)?.strip_prefix('=')?.parse().ok()
}

struct RecordBuilder {
    z: Vec<Option<u16>>,
    rho: Vec<Vec<Option<u16>>>,
    alpha: Vec<Option<f64>>,
    tau: Vec<Option<f64>>,
    augmented: Option<Vec<Vec<Option<u16>>>>,
}

impl RecordBuilder {
    fn new(meta: &Meta) -> Self {
        Self {
            z: vec![None; meta.num_assessors],
            rho: vec![vec![None; meta.n]; meta.num_clusters],
            alpha: vec![None; meta.num_clusters],
            tau: vec![None; meta.num_clusters],
            augmented: if meta.aug {
                Some(vec![vec![None; meta.n]; meta.num_assessors])
            } else {
                None
            },
        }
    }

    fn finish(self, iteration: u64) -> Result<SampleRecord> {
        let missing = || Error::InvalidParam(format!("incomplete record at iteration {iteration}"));
        Ok(SampleRecord {
            iteration,
            z: self.z.into_iter().collect::<Option<Vec<_>>>().ok_or_else(missing)?,
            rho: self
                .rho
                .into_iter()
                .map(|r| r.into_iter().collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(missing)?,
            alpha: self.alpha.into_iter().collect::<Option<Vec<_>>>().ok_or_else(missing)?,
            tau: self.tau.into_iter().collect::<Option<Vec<_>>>().ok_or_else(missing)?,
            augmented: match self.augmented {
                None => None,
                Some(aug) => Some(
                    aug.into_iter()
                        .map(|r| r.into_iter().collect::<Option<Vec<_>>>())
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(missing)?,
                ),
            },
        })
    }
}

pub fn read_samples_csv(path: &Path) -> Result<PosteriorSamples> {
    let path_str = path.display().to_string();
    let reader = BufReader::new(File::open(path)?);
    let mut seed = 0u64;
    let mut config_tag = String::new();
    let mut meta = Meta::default();
    let mut chain_meta: BTreeMap<u32, (u64, AcceptanceCounters)> = BTreeMap::new();
    let mut builders: BTreeMap<(u32, u64), RecordBuilder> = BTreeMap::new();
    let mut saw_header = false;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx as u64 + 1;
        let text = line.trim();
        let parse_err = |msg: String| Error::Parse { path: path_str.clone(), line: line_no, msg };
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix('#') {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            match tokens.first() {
                Some(&"samples") => {
                    for t in &tokens[1..] {
                        if let Some(v) = parse_kv::<usize>(t, "n") {
                            meta.n = v;
                        } else if let Some(v) = parse_kv::<usize>(t, "N") {
                            meta.num_assessors = v;
                        } else if let Some(v) = parse_kv::<usize>(t, "C") {
                            meta.num_clusters = v;
                        } else if let Some(v) = parse_kv::<usize>(t, "M") {
                            meta.total_iterations = v;
                        } else if let Some(v) = parse_kv::<usize>(t, "burn_in") {
                            meta.burn_in = v;
                        } else if let Some(v) = parse_kv::<usize>(t, "thin") {
                            meta.thin = v;
                        } else if let Some(v) = parse_kv::<usize>(t, "requested_thin") {
                            meta.requested_thin = v;
                        } else if let Some(v) = parse_kv::<u8>(t, "aug") {
                            meta.aug = v != 0;
                        } else if let Some(v) = parse_kv::<usize>(t, "chains") {
                            meta.chains = v;
                        }
                    }
                }
                Some(t) if t.starts_with("chain=") => {
                    let chain: u32 = parse_kv(t, "chain")
                        .ok_or_else(|| parse_err("invalid chain metadata".into()))?;
                    let mut cseed = 0u64;
                    let mut counters = AcceptanceCounters::default();
                    for t in &tokens[1..] {
                        if let Some(v) = parse_kv::<u64>(t, "seed") {
                            cseed = v;
                        } else {
                            for (key, acc, prop) in [
                                ("rho", &mut counters.rho_accepted, &mut counters.rho_proposed),
                                ("alpha", &mut counters.alpha_accepted, &mut counters.alpha_proposed),
                                ("aug", &mut counters.aug_accepted, &mut counters.aug_proposed),
                            ] {
                                if let Some(pair) = t.strip_prefix(key).and_then(|s| s.strip_prefix('=')) {
                                    let (a, p) = pair
                                        .split_once('/')
                                        .ok_or_else(|| parse_err("invalid counter".into()))?;
                                    *acc = a.parse().map_err(|_| parse_err("invalid counter".into()))?;
                                    *prop = p.parse().map_err(|_| parse_err("invalid counter".into()))?;
                                }
                            }
                        }
                    }
                    chain_meta.insert(chain - 1, (cseed, counters));
                }
                Some(t) if t.starts_with("config=") => {
                    for t in &tokens {
                        if let Some(v) = t.strip_prefix("config=") {
                            if v != "untagged" {
                                config_tag = v.to_string();
                            }
                        } else if let Some(v) = parse_kv::<u64>(t, "seed") {
                            seed = v;
                        }
                    }
                }
                _ => {}
            }
            continue;
        }
        if !saw_header {
            if text != "iteration,chain,param,cluster,index,value" {
                return Err(parse_err(format!("unexpected header '{text}'")));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 6 {
            return Err(parse_err("expected six comma-separated fields".into()));
        }
        let iteration: u64 =
            fields[0].parse().map_err(|_| parse_err("invalid iteration".into()))?;
        let chain: u32 = fields[1].parse().map_err(|_| parse_err("invalid chain".into()))?;
        let chain = chain.checked_sub(1).ok_or_else(|| parse_err("chain ids are 1-based".into()))?;
        let cluster: usize = fields[3].parse().map_err(|_| parse_err("invalid cluster".into()))?;
        let index: usize = fields[4].parse().map_err(|_| parse_err("invalid index".into()))?;
        let builder = builders
            .entry((chain, iteration))
            .or_insert_with(|| RecordBuilder::new(&meta));
        let value = fields[5];
        let out_of_range = || parse_err("id out of range".into());
        match fields[2] {
            "tau" => {
                let v: f64 = value.parse().map_err(|_| parse_err("invalid tau".into()))?;
                *builder.tau.get_mut(cluster.wrapping_sub(1)).ok_or_else(out_of_range)? = Some(v);
            }
            "alpha" => {
                let v: f64 = value.parse().map_err(|_| parse_err("invalid alpha".into()))?;
                *builder.alpha.get_mut(cluster.wrapping_sub(1)).ok_or_else(out_of_range)? = Some(v);
            }
            "rho" => {
                let v: u16 = value.parse().map_err(|_| parse_err("invalid rank".into()))?;
                *builder
                    .rho
                    .get_mut(cluster.wrapping_sub(1))
                    .and_then(|r| r.get_mut(index.wrapping_sub(1)))
                    .ok_or_else(out_of_range)? = Some(v);
            }
            "z" => {
                let v: u16 = value.parse().map_err(|_| parse_err("invalid label".into()))?;
                if v == 0 {
                    return Err(parse_err("labels are 1-based".into()));
                }
                *builder.z.get_mut(index.wrapping_sub(1)).ok_or_else(out_of_range)? = Some(v - 1);
            }
            "rtilde" => {
                let v: u16 = value.parse().map_err(|_| parse_err("invalid rank".into()))?;
                *builder
                    .augmented
                    .as_mut()
                    .ok_or_else(|| parse_err("rtilde rows in a non-augmented file".into()))?
                    .get_mut(cluster.wrapping_sub(1))
                    .and_then(|r| r.get_mut(index.wrapping_sub(1)))
                    .ok_or_else(out_of_range)? = Some(v);
            }
            other => return Err(parse_err(format!("unknown parameter '{other}'"))),
        }
    }

    let mut chains: BTreeMap<u32, ChainSamples> = BTreeMap::new();
    for ((chain, iteration), builder) in builders {
        let record = builder.finish(iteration)?;
        let entry = chains.entry(chain).or_insert_with(|| {
            let (chain_seed, accept) = chain_meta.get(&chain).copied().unwrap_or_default();
            ChainSamples { chain_index: chain, chain_seed, records: Vec::new(), accept }
        });
        entry.records.push(record);
    }
    // Chains mentioned only in metadata (zero retained records) still count.
    for (&chain, &(chain_seed, accept)) in &chain_meta {
        chains.entry(chain).or_insert_with(|| ChainSamples {
            chain_index: chain,
            chain_seed,
            records: Vec::new(),
            accept,
        });
    }

    Ok(PosteriorSamples {
        n_items: meta.n,
        num_assessors: meta.num_assessors,
        num_clusters: meta.num_clusters,
        total_iterations: meta.total_iterations,
        burn_in: meta.burn_in,
        requested_thin: meta.requested_thin,
        effective_thin: meta.thin,
        seed,
        config_tag,
        has_augmented: meta.aug,
        chains: chains.into_values().collect(),
    })
}

fn put_u16s(buf: &mut Vec<u8>, values: &[u16]) {
    for &v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
}

fn put_f64s(buf: &mut Vec<u8>, values: &[f64]) {
    for &v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
}

pub fn write_samples_binary(path: &Path, samples: &PosteriorSamples) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&samples.seed.to_le_bytes())?;
    let tag = samples.config_tag.as_bytes();
    w.write_all(&(tag.len() as u32).to_le_bytes())?;
    w.write_all(tag)?;
    for v in [samples.n_items, samples.num_assessors, samples.num_clusters] {
        w.write_all(&(v as u32).to_le_bytes())?;
    }
    for v in [
        samples.total_iterations,
        samples.burn_in,
        samples.requested_thin,
        samples.effective_thin,
    ] {
        w.write_all(&(v as u64).to_le_bytes())?;
    }
    w.write_all(&[samples.has_augmented as u8])?;
    w.write_all(&(samples.chains.len() as u32).to_le_bytes())?;
    for chain in &samples.chains {
        w.write_all(&chain.chain_index.to_le_bytes())?;
        w.write_all(&chain.chain_seed.to_le_bytes())?;
        let a = chain.accept;
        for v in [
            a.rho_accepted,
            a.rho_proposed,
            a.alpha_accepted,
            a.alpha_proposed,
            a.aug_accepted,
            a.aug_proposed,
        ] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&(chain.records.len() as u32).to_le_bytes())?;
        let mut payload = Vec::new();
        for rec in &chain.records {
            payload.clear();
            payload.extend_from_slice(&rec.iteration.to_le_bytes());
            put_u16s(&mut payload, &rec.z);
            for rho in &rec.rho {
                put_u16s(&mut payload, rho);
            }
            put_f64s(&mut payload, &rec.alpha);
            put_f64s(&mut payload, &rec.tau);
            match &rec.augmented {
                Some(aug) => {
                    payload.push(1);
                    for ranks in aug {
                        put_u16s(&mut payload, ranks);
                    }
                }
                None => payload.push(0),
            }
            w.write_all(&(payload.len() as u32).to_le_bytes())?;
            w.write_all(&payload)?;
        }
    }
    Ok(())
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
    path: &'a str,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.pos + len > self.buf.len() {
            return Err(Error::Format {
                path: self.path.to_string(),
                msg: "truncated binary sample file".into(),
            });
        }
        let out = &self.buf[self.pos..self.pos + len];
        self.pos += len;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u16s(&mut self, len: usize) -> Result<Vec<u16>> {
        (0..len).map(|_| self.u16()).collect()
    }

    fn f64s(&mut self, len: usize) -> Result<Vec<f64>> {
        (0..len).map(|_| self.f64()).collect()
    }
}

pub fn read_samples_binary(path: &Path) -> Result<PosteriorSamples> {
    let path_str = path.display().to_string();
    let mut buf = Vec::new();
    File::open(path)?.read_to_end(&mut buf)?;
    let mut c = Cursor { buf: &buf, pos: 0, path: &path_str };
    let bad = |msg: &str| Error::Format { path: path_str.clone(), msg: msg.into() };

    if c.take(8)? != MAGIC {
        return Err(bad("not a binary sample file (bad magic)"));
    }
    if c.u32()? != VERSION {
        return Err(bad("unsupported binary sample version"));
    }
    let seed = c.u64()?;
    let tag_len = c.u32()? as usize;
    let config_tag = String::from_utf8(c.take(tag_len)?.to_vec())
        .map_err(|_| bad("config tag is not valid utf-8"))?;
    let n = c.u32()? as usize;
    let num_assessors = c.u32()? as usize;
    let num_clusters = c.u32()? as usize;
    let total_iterations = c.u64()? as usize;
    let burn_in = c.u64()? as usize;
    let requested_thin = c.u64()? as usize;
    let effective_thin = c.u64()? as usize;
    let has_augmented = c.u8()? != 0;
    let num_chains = c.u32()? as usize;

    let mut chains = Vec::with_capacity(num_chains);
    for _ in 0..num_chains {
        let chain_index = c.u32()?;
        let chain_seed = c.u64()?;
        let accept = AcceptanceCounters {
            rho_accepted: c.u64()?,
            rho_proposed: c.u64()?,
            alpha_accepted: c.u64()?,
            alpha_proposed: c.u64()?,
            aug_accepted: c.u64()?,
            aug_proposed: c.u64()?,
        };
        let num_records = c.u32()? as usize;
        let mut records = Vec::with_capacity(num_records);
        for _ in 0..num_records {
            let payload_len = c.u32()? as usize;
            let start = c.pos;
            let iteration = c.u64()?;
            let z = c.u16s(num_assessors)?;
            let rho = (0..num_clusters).map(|_| c.u16s(n)).collect::<Result<Vec<_>>>()?;
            let alpha = c.f64s(num_clusters)?;
            let tau = c.f64s(num_clusters)?;
            let augmented = match c.u8()? {
                0 => None,
                _ => Some((0..num_assessors).map(|_| c.u16s(n)).collect::<Result<Vec<_>>>()?),
            };
            if c.pos - start != payload_len {
                return Err(bad("record length mismatch"));
            }
            records.push(SampleRecord { iteration, z, rho, alpha, tau, augmented });
        }
        chains.push(ChainSamples { chain_index, chain_seed, records, accept });
    }
    if c.pos != buf.len() {
        return Err(bad("trailing bytes after the last chain"));
    }

    Ok(PosteriorSamples {
        n_items: n,
        num_assessors,
        num_clusters,
        total_iterations,
        burn_in,
        requested_thin,
        effective_thin,
        seed,
        config_tag,
        has_augmented,
        chains,
    })
}
