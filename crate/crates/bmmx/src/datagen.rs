//! Synthetic rank-and-covariate data generation and the clustering
//! evaluation metrics.
//!
//! Consensus rankings are built by swapping item blocks of the identity at
//! a controlled footrule displacement, rankings are drawn from per-cluster
//! Mallows distributions, and covariates come from cluster-separated
//! normals or categorical scenarios. Label-switching is handled in the
//! metrics by exhaustive label alignment.

use crate::covariates::{ColumnData, CovariateColumn, CovariateTable};
use crate::error::{Error, Result};
use crate::model::accept_logratio_rho;
use crate::partition_function::DEFAULT_ENUMERATION_CAP;
use crate::posterior::AssignmentMatrix;
use crate::rank::{
    distance_unchecked, for_each_permutation, leap_and_shift_propose, DistanceMetric,
    LeapAndShiftParams, Ranking,
};
use crate::rng::rng_from_seed;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Maximum number of clusters the factorial label alignment will handle.
pub const MAX_ALIGNMENT_CLUSTERS: usize = 8;
/// Rejection-loop budget of the swap construction.
const SWAP_RETRY_BUDGET: usize = 100_000;

/// How a categorical covariate column is generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CategoricalScenario {
    /// The category equals the covariate cluster label (B = C).
    CoherentWithClusters,
    /// Uniform noise over the given number of levels.
    UniformNoise { levels: u32 },
}

/// Configuration of one synthetic dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub n_items: usize,
    /// Per-cluster assessor counts; their sum is N and their count is C.
    pub cluster_sizes: Vec<usize>,
    /// Items swapped per non-baseline cluster (`s`).
    pub swaps: usize,
    /// Rank displacement of each swap (`d_ρ`).
    pub swap_distance: usize,
    /// Separation of consecutive cluster means in the continuous covariates.
    pub covariate_separation: f64,
    /// Mallows scale used for all clusters.
    pub alpha: f64,
    /// Standard deviation of the continuous covariates.
    pub covariate_sd: f64,
    pub continuous_covariates: usize,
    pub categorical_scenarios: Vec<CategoricalScenario>,
    pub metric: DistanceMetric,
    pub seed: u64,
    /// Covariate cluster labels, when decoupled from the ranking labels.
    pub covariate_labels: Option<Vec<u16>>,
}

impl SimConfig {
    pub fn num_clusters(&self) -> usize {
        self.cluster_sizes.len()
    }

    pub fn num_assessors(&self) -> usize {
        self.cluster_sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_items < 2 {
            return Err(Error::InvalidParam("need at least 2 items".into()));
        }
        if self.cluster_sizes.is_empty() || self.cluster_sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidParam("cluster sizes must be positive".into()));
        }
        let c = self.num_clusters();
        if c > 1 {
            if self.swaps * (c - 1) > self.n_items {
                return Err(Error::InvalidParam(format!(
                    "s(C−1) = {} exceeds n = {}",
                    self.swaps * (c - 1),
                    self.n_items
                )));
            }
            if self.swaps > 0 && self.swap_distance == 0 {
                return Err(Error::InvalidParam("swap distance must be ≥ 1".into()));
            }
        }
        if !(self.covariate_sd > 0.0) {
            return Err(Error::InvalidParam("covariate sd must be positive".into()));
        }
        if !(self.alpha >= 0.0) {
            return Err(Error::InvalidParam("alpha must be nonnegative".into()));
        }
        if let Some(v) = &self.covariate_labels {
            if v.len() != self.num_assessors() {
                return Err(Error::DimensionMismatch {
                    expected: self.num_assessors(),
                    got: v.len(),
                });
            }
            if v.iter().any(|&l| (l as usize) >= c) {
                return Err(Error::InvalidParam("covariate label out of range".into()));
            }
        }
        Ok(())
    }
}

/// A generated dataset together with its ground truth.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticDataset {
    pub rankings: Vec<Ranking>,
    pub covariates: CovariateTable,
    pub true_labels: Vec<u16>,
    pub true_consensus: Vec<Ranking>,
    pub config: SimConfig,
}

/// How [`MallowsSampler`] draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SamplingMode {
    /// Exact inverse-cdf draws when `n` is small enough to enumerate,
    /// Metropolis otherwise.
    #[default]
    Auto,
    Exact,
    Metropolis,
}

/// Draws from a Mallows distribution with fixed consensus and scale.
///
/// Exact sampling enumerates the permutation space once and inverts the
/// cdf per draw; the Metropolis fallback runs a fresh leap-and-shift chain
/// from the consensus with `100·n` burn-in sweeps per draw.
pub struct MallowsSampler {
    rho: Ranking,
    alpha: f64,
    metric: DistanceMetric,
    exact: Option<ExactTable>,
}

struct ExactTable {
    perms: Vec<Vec<u16>>,
    cdf: Vec<f64>,
}

impl MallowsSampler {
    pub fn new(rho: &Ranking, alpha: f64, metric: DistanceMetric) -> Result<Self> {
        Self::with_mode(rho, alpha, metric, SamplingMode::Auto)
    }

    pub fn with_mode(
        rho: &Ranking,
        alpha: f64,
        metric: DistanceMetric,
        mode: SamplingMode,
    ) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParam(format!("alpha must be ≥ 0, got {alpha}")));
        }
        let n = rho.n();
        let use_exact = match mode {
            SamplingMode::Auto => n <= DEFAULT_ENUMERATION_CAP,
            SamplingMode::Exact => {
                if n > DEFAULT_ENUMERATION_CAP {
                    return Err(Error::EnumerationCap { n, cap: DEFAULT_ENUMERATION_CAP });
                }
                true
            }
            SamplingMode::Metropolis => false,
        };
        let exact = if use_exact {
            let identity: Vec<u16> = (1..=n as u16).collect();
            let mut perms = Vec::new();
            let mut weights = Vec::new();
            for_each_permutation(n, |p| {
                let d = distance_unchecked(p, &identity, metric);
                perms.push(p.to_vec());
                weights.push((-alpha * d as f64 / n as f64).exp());
            });
            let total: f64 = weights.iter().sum();
            let mut acc = 0.0;
            let cdf = weights
                .iter()
                .map(|w| {
                    acc += w / total;
                    acc
                })
                .collect();
            Some(ExactTable { perms, cdf })
        } else {
            None
        };
        Ok(Self { rho: rho.clone(), alpha, metric, exact })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Ranking {
        match &self.exact {
            Some(table) => {
                let u: f64 = rng.random();
                let idx = table.cdf.partition_point(|&c| c < u).min(table.perms.len() - 1);
                // σ is relative to the identity; compose onto ρ so that
                // d(R, ρ) = d(σ, identity).
                let sigma = &table.perms[idx];
                let ranks = self.rho.ranks().iter().map(|&r| sigma[r as usize - 1]).collect();
                Ranking::from_vec_unchecked(ranks)
            }
            None => self.sample_metropolis(rng),
        }
    }

    fn sample_metropolis<R: Rng + ?Sized>(&self, rng: &mut R) -> Ranking {
        let n = self.rho.n();
        let params = LeapAndShiftParams::new(1).unwrap();
        let mut current = self.rho.clone();
        let steps = 100 * n * n; // 100·n sweeps of n proposals
        for _ in 0..steps {
            let (proposal, fwd, bwd) = leap_and_shift_propose(&current, &params, rng)
                .expect("valid proposal parameters");
            let logratio = accept_logratio_rho(
                &current,
                &proposal,
                fwd,
                bwd,
                self.alpha,
                std::iter::once(&self.rho),
                self.metric,
            )
            .expect("dimensions agree");
            let u: f64 = rng.random();
            if u.ln() < logratio {
                current = proposal;
            }
        }
        current
    }
}

/// One-shot Mallows draw.
pub fn sample_mallows<R: Rng + ?Sized>(
    rho: &Ranking,
    alpha: f64,
    metric: DistanceMetric,
    rng: &mut R,
) -> Result<Ranking> {
    Ok(MallowsSampler::new(rho, alpha, metric)?.sample(rng))
}

/// Builds the cluster consensus set by the swap construction: `ρ_1` is the
/// identity; each further cluster swaps its own disjoint block of `s`
/// sampled items with partner items exactly `d_ρ` ranks away. Partners must
/// land inside `{1, …, n}`, avoid the sampled set, and be pairwise
/// distinct; the sampling is rejected and retried until all criteria hold.
pub fn generate_consensus_set<R: Rng + ?Sized>(
    n: usize,
    num_clusters: usize,
    swaps: usize,
    swap_distance: usize,
    rng: &mut R,
) -> Result<Vec<Ranking>> {
    if num_clusters == 0 {
        return Err(Error::InvalidParam("need at least one cluster".into()));
    }
    let identity = Ranking::identity(n);
    if num_clusters == 1 || swaps == 0 {
        return Ok(vec![identity; num_clusters]);
    }
    let picked = swaps * (num_clusters - 1);
    if picked > n {
        return Err(Error::InvalidParam(format!("s(C−1) = {picked} exceeds n = {n}")));
    }
    if swap_distance == 0 || swap_distance >= n {
        return Err(Error::Infeasible(format!(
            "swap distance {swap_distance} impossible for n = {n}"
        )));
    }

    let mut pool: Vec<usize> = (0..n).collect();
    for _ in 0..SWAP_RETRY_BUDGET {
        pool.shuffle(rng);
        let sampled = &pool[..picked];
        let in_sampled = {
            let mut mask = vec![false; n];
            for &i in sampled {
                mask[i] = true;
            }
            mask
        };
        let mut partners = Vec::with_capacity(picked);
        let mut partner_mask = vec![false; n];
        let mut ok = true;
        for &item in sampled {
            // Under the identity baseline, item i sits at rank i+1; the
            // partner is the item d_ρ ranks away in a random direction.
            let rank = item as i64 + 1;
            let sign = if rng.random::<bool>() { 1 } else { -1 };
            let partner_rank = rank + sign * swap_distance as i64;
            if partner_rank < 1 || partner_rank > n as i64 {
                ok = false;
                break;
            }
            let partner = (partner_rank - 1) as usize;
            if in_sampled[partner] || partner_mask[partner] {
                ok = false;
                break;
            }
            partner_mask[partner] = true;
            partners.push(partner);
        }
        if !ok {
            continue;
        }
        let mut consensus = vec![identity.clone()];
        for c in 1..num_clusters {
            let block = (c - 1) * swaps..c * swaps;
            let mut ranks = identity.ranks().to_vec();
            for idx in block {
                let (item, partner) = (sampled[idx], partners[idx]);
                ranks.swap(item, partner);
            }
            consensus.push(Ranking::new(ranks)?);
        }
        return Ok(consensus);
    }
    Err(Error::Infeasible(format!(
        "no valid swap set found for (n = {n}, s = {swaps}, d_ρ = {swap_distance}) \
         after {SWAP_RETRY_BUDGET} attempts"
    )))
}

/// Generates covariate columns for the given cluster labels: continuous
/// columns are `N(d_x·c, σ)` with `c` the 0-based label; categorical
/// columns follow their scenario.
pub fn generate_covariates<R: Rng + ?Sized>(
    labels: &[u16],
    num_clusters: usize,
    separation: f64,
    sd: f64,
    continuous_columns: usize,
    scenarios: &[CategoricalScenario],
    rng: &mut R,
) -> Result<CovariateTable> {
    if !(sd > 0.0) {
        return Err(Error::InvalidParam("covariate sd must be positive".into()));
    }
    let mut columns = Vec::new();
    for k in 0..continuous_columns {
        let noise = Normal::new(0.0, sd).map_err(|e| Error::InvalidParam(e.to_string()))?;
        let values = labels
            .iter()
            .map(|&l| Some(separation * l as f64 + noise.sample(rng)))
            .collect();
        columns.push(CovariateColumn {
            name: format!("cont{}", k + 1),
            data: ColumnData::Continuous(values),
        });
    }
    for (k, scenario) in scenarios.iter().enumerate() {
        let (levels, values) = match scenario {
            CategoricalScenario::CoherentWithClusters => (
                num_clusters as u32,
                labels.iter().map(|&l| Some(l as u32)).collect::<Vec<_>>(),
            ),
            CategoricalScenario::UniformNoise { levels } => {
                if *levels == 0 {
                    return Err(Error::InvalidParam("need at least one level".into()));
                }
                (
                    *levels,
                    labels.iter().map(|_| Some(rng.random_range(0..*levels))).collect(),
                )
            }
        };
        columns.push(CovariateColumn {
            name: format!("cat{}", k + 1),
            data: ColumnData::Categorical { levels, values },
        });
    }
    CovariateTable::new(labels.len(), columns)
}

/// Generates a full synthetic dataset from the configuration.
pub fn generate(config: &SimConfig) -> Result<SyntheticDataset> {
    config.validate()?;
    let mut rng = rng_from_seed(config.seed);
    let c_total = config.num_clusters();
    let consensus = generate_consensus_set(
        config.n_items,
        c_total,
        config.swaps,
        config.swap_distance,
        &mut rng,
    )?;

    let mut true_labels = Vec::with_capacity(config.num_assessors());
    for (c, &size) in config.cluster_sizes.iter().enumerate() {
        true_labels.extend(std::iter::repeat_n(c as u16, size));
    }

    let samplers = consensus
        .iter()
        .map(|rho| MallowsSampler::new(rho, config.alpha, config.metric))
        .collect::<Result<Vec<_>>>()?;
    let rankings = true_labels
        .iter()
        .map(|&w| samplers[w as usize].sample(&mut rng))
        .collect();

    let covariate_labels = config.covariate_labels.clone().unwrap_or_else(|| true_labels.clone());
    let covariates = generate_covariates(
        &covariate_labels,
        c_total,
        config.covariate_separation,
        config.covariate_sd,
        config.continuous_covariates,
        &config.categorical_scenarios,
        &mut rng,
    )?;

    Ok(SyntheticDataset {
        rankings,
        covariates,
        true_labels,
        true_consensus: consensus,
        config: config.clone(),
    })
}

fn label_permutations(c: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut current: Vec<u16> = (0..c as u16).collect();
    fn heap(k: usize, arr: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if k <= 1 {
            out.push(arr.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, arr, out);
            if k % 2 == 0 {
                arr.swap(i, k - 1);
            } else {
                arr.swap(0, k - 1);
            }
        }
    }
    heap(c, &mut current, &mut out);
    out
}

/// Best label alignment between an estimated clustering and the truth:
/// maximizes the match fraction over all `C!` relabelings of the estimate.
/// Returns `(p̂, mapping)` where `mapping[estimated] = aligned label`.
pub fn best_label_alignment(
    estimated: &[u16],
    truth: &[u16],
    num_clusters: usize,
) -> Result<(f64, Vec<u16>)> {
    if estimated.len() != truth.len() {
        return Err(Error::DimensionMismatch { expected: truth.len(), got: estimated.len() });
    }
    if estimated.is_empty() {
        return Err(Error::EmptyInput("no labels".into()));
    }
    if num_clusters > MAX_ALIGNMENT_CLUSTERS {
        return Err(Error::InvalidParam(format!(
            "label alignment capped at C ≤ {MAX_ALIGNMENT_CLUSTERS}, got {num_clusters}"
        )));
    }
    if estimated
        .iter()
        .chain(truth)
        .any(|&l| (l as usize) >= num_clusters)
    {
        return Err(Error::InvalidParam("label out of range".into()));
    }
    let mut best = (0usize, (0..num_clusters as u16).collect::<Vec<u16>>());
    for mapping in label_permutations(num_clusters) {
        let matches = estimated
            .iter()
            .zip(truth)
            .filter(|&(&e, &t)| mapping[e as usize] == t)
            .count();
        if matches > best.0 {
            best = (matches, mapping);
        }
    }
    Ok((best.0 as f64 / estimated.len() as f64, best.1))
}

/// Proportion of correctly clustered assessors after label alignment.
pub fn p_hat(estimated: &[u16], truth: &[u16], num_clusters: usize) -> Result<f64> {
    best_label_alignment(estimated, truth, num_clusters).map(|(p, _)| p)
}

/// Mean posterior probability of the correct (aligned) assignment:
/// `(1/N) Σ_j probs[j][σ⁻¹(truth_j)]` with σ the alignment from
/// [`best_label_alignment`].
pub fn z_post(probs: &AssignmentMatrix, truth: &[u16], alignment: &[u16]) -> Result<f64> {
    if probs.num_assessors() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: probs.num_assessors(),
            got: truth.len(),
        });
    }
    let c = probs.num_clusters();
    if alignment.len() != c {
        return Err(Error::DimensionMismatch { expected: c, got: alignment.len() });
    }
    let mut inverse = vec![u16::MAX; c];
    for (e, &t) in alignment.iter().enumerate() {
        if (t as usize) >= c || inverse[t as usize] != u16::MAX {
            return Err(Error::InvalidParam("alignment is not a label permutation".into()));
        }
        inverse[t as usize] = e as u16;
    }
    let total: f64 = truth
        .iter()
        .enumerate()
        .map(|(j, &t)| probs.prob(j, inverse[t as usize] as usize))
        .sum();
    Ok(total / truth.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition_function::enumerate_distance_table;
    use crate::rank::distance;
    use crate::rng::rng_for;
    use std::collections::HashMap;

    #[test]
    fn consensus_set_distances() {
        let mut rng = rng_for(31, 0);
        for _ in 0..50 {
            let set = generate_consensus_set(20, 3, 3, 10, &mut rng).unwrap();
            assert_eq!(set[0], Ranking::identity(20));
            for rho in &set[1..] {
                let d = distance(&set[0], rho, DistanceMetric::Footrule).unwrap();
                assert_eq!(d, 2 * 3 * 10);
            }
        }
    }

    #[test]
    fn consensus_set_validity_many_seeds() {
        for seed in 0..300u64 {
            let mut rng = rng_for(seed, 7);
            let set = generate_consensus_set(12, 4, 2, 3, &mut rng).unwrap();
            assert_eq!(set.len(), 4);
            // Ranking::new inside the generator already validates; double
            // check distances are as constructed.
            for rho in &set[1..] {
                assert_eq!(
                    distance(&set[0], rho, DistanceMetric::Footrule).unwrap(),
                    2 * 2 * 3
                );
            }
        }
    }

    #[test]
    fn consensus_single_cluster_is_identity() {
        let mut rng = rng_for(32, 0);
        let set = generate_consensus_set(5, 1, 2, 1, &mut rng).unwrap();
        assert_eq!(set, vec![Ranking::identity(5)]);
    }

    #[test]
    fn consensus_infeasible_reports_error() {
        let mut rng = rng_for(33, 0);
        assert!(generate_consensus_set(4, 3, 2, 9, &mut rng).is_err());
    }

    #[test]
    fn mallows_exact_matches_enumerated_pmf() {
        let n = 3;
        let rho = Ranking::new(vec![2, 3, 1]).unwrap();
        let alpha = 2.0;
        let sampler = MallowsSampler::new(&rho, alpha, DistanceMetric::Footrule).unwrap();
        let mut rng = rng_for(34, 0);
        let draws = 100_000usize;
        let mut counts: HashMap<Vec<u16>, u64> = HashMap::new();
        for _ in 0..draws {
            let r = sampler.sample(&mut rng);
            *counts.entry(r.ranks().to_vec()).or_insert(0) += 1;
        }
        // Enumerated pmf oracle.
        let mut tv = 0.0;
        let mut weights: HashMap<Vec<u16>, f64> = HashMap::new();
        let mut total = 0.0;
        for_each_permutation(n, |p| {
            let d = distance_unchecked(p, rho.ranks(), DistanceMetric::Footrule);
            let w = (-alpha * d as f64 / n as f64).exp();
            weights.insert(p.to_vec(), w);
            total += w;
        });
        for (p, w) in &weights {
            let emp = counts.get(p).copied().unwrap_or(0) as f64 / draws as f64;
            tv += (emp - w / total).abs();
        }
        tv /= 2.0;
        assert!(tv < 0.02, "TV distance {tv}");
    }

    #[test]
    fn mallows_alpha_zero_uniform() {
        let rho = Ranking::identity(3);
        let sampler = MallowsSampler::new(&rho, 0.0, DistanceMetric::Footrule).unwrap();
        let mut rng = rng_for(35, 0);
        let draws = 12_000usize;
        let mut counts: HashMap<Vec<u16>, u64> = HashMap::new();
        for _ in 0..draws {
            *counts.entry(sampler.sample(&mut rng).ranks().to_vec()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = draws as f64 / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 0.999 quantile of chi-square with 5 degrees of freedom.
        assert!(chi2 < 20.5, "chi-square {chi2}");
    }

    #[test]
    fn mallows_point_mass_at_large_alpha() {
        let rho = Ranking::new(vec![3, 1, 4, 2]).unwrap();
        let sampler = MallowsSampler::new(&rho, 1e6, DistanceMetric::Footrule).unwrap();
        let mut rng = rng_for(36, 0);
        for _ in 0..50 {
            assert_eq!(sampler.sample(&mut rng), rho);
        }
    }

    #[test]
    fn mallows_metropolis_close_to_exact() {
        let n = 4;
        let rho = Ranking::new(vec![2, 1, 4, 3]).unwrap();
        let alpha = 1.5;
        let sampler =
            MallowsSampler::with_mode(&rho, alpha, DistanceMetric::Footrule, SamplingMode::Metropolis)
                .unwrap();
        let mut rng = rng_for(37, 0);
        let draws = 4000usize;
        let mut counts: HashMap<Vec<u16>, u64> = HashMap::new();
        for _ in 0..draws {
            *counts.entry(sampler.sample(&mut rng).ranks().to_vec()).or_insert(0) += 1;
        }
        let table = enumerate_distance_table(n, DistanceMetric::Footrule).unwrap();
        let _ = table; // distances come from direct enumeration below
        let mut tv = 0.0;
        let mut weights: HashMap<Vec<u16>, f64> = HashMap::new();
        let mut total = 0.0;
        for_each_permutation(n, |p| {
            let d = distance_unchecked(p, rho.ranks(), DistanceMetric::Footrule);
            let w = (-alpha * d as f64 / n as f64).exp();
            weights.insert(p.to_vec(), w);
            total += w;
        });
        for (p, w) in &weights {
            let emp = counts.get(p).copied().unwrap_or(0) as f64 / draws as f64;
            tv += (emp - w / total).abs();
        }
        tv /= 2.0;
        assert!(tv < 0.08, "TV distance {tv}");
    }

    #[test]
    fn covariates_cluster_means() {
        let mut rng = rng_for(38, 0);
        let labels: Vec<u16> = (0..3000).map(|j| (j % 3) as u16).collect();
        let table = generate_covariates(&labels, 3, 4.0, 1.0, 1, &[], &mut rng).unwrap();
        let ColumnData::Continuous(values) = &table.columns()[0].data else {
            panic!("expected continuous column");
        };
        for c in 0..3u16 {
            let xs: Vec<f64> = labels
                .iter()
                .zip(values)
                .filter(|(&l, _)| l == c)
                .map(|(_, v)| v.unwrap())
                .collect();
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let expect = 4.0 * c as f64;
            let se = 1.0 / (xs.len() as f64).sqrt();
            assert!((mean - expect).abs() < 3.0 * se, "cluster {c}: {mean} vs {expect}");
        }
    }

    #[test]
    fn coherent_categorical_equals_labels() {
        let mut rng = rng_for(39, 0);
        let labels: Vec<u16> = vec![0, 1, 2, 1, 0];
        let table = generate_covariates(
            &labels,
            3,
            0.0,
            1.0,
            0,
            &[CategoricalScenario::CoherentWithClusters],
            &mut rng,
        )
        .unwrap();
        let ColumnData::Categorical { levels, values } = &table.columns()[0].data else {
            panic!("expected categorical column");
        };
        assert_eq!(*levels, 3);
        for (v, &l) in values.iter().zip(&labels) {
            assert_eq!(*v, Some(l as u32));
        }
    }

    #[test]
    fn p_hat_examples() {
        let truth = [0u16, 0, 1, 1];
        assert_eq!(p_hat(&truth, &truth, 2).unwrap(), 1.0);
        // A label permutation of the truth still scores 1.
        let swapped = [1u16, 1, 0, 0];
        assert_eq!(p_hat(&swapped, &truth, 2).unwrap(), 1.0);
        // Best of the two relabelings.
        let estimated = [0u16, 1, 1, 1];
        assert_eq!(p_hat(&estimated, &truth, 2).unwrap(), 0.75);
    }

    #[test]
    fn p_hat_invariant_under_estimate_relabeling() {
        let mut rng = rng_for(40, 0);
        for _ in 0..20 {
            let truth: Vec<u16> = (0..30).map(|_| rng.random_range(0..3) as u16).collect();
            let estimated: Vec<u16> = (0..30).map(|_| rng.random_range(0..3) as u16).collect();
            let base = p_hat(&estimated, &truth, 3).unwrap();
            for mapping in label_permutations(3) {
                let relabeled: Vec<u16> =
                    estimated.iter().map(|&e| mapping[e as usize]).collect();
                assert_eq!(p_hat(&relabeled, &truth, 3).unwrap(), base);
            }
            assert_eq!(p_hat(&estimated, &estimated, 3).unwrap(), 1.0);
        }
    }

    #[test]
    fn alignment_cap() {
        let labels = vec![0u16; 4];
        assert!(best_label_alignment(&labels, &labels, 9).is_err());
    }

    #[test]
    fn generate_respects_config() {
        let config = SimConfig {
            n_items: 10,
            cluster_sizes: vec![5, 7, 6],
            swaps: 2,
            swap_distance: 3,
            covariate_separation: 2.0,
            alpha: 3.0,
            covariate_sd: 1.0,
            continuous_covariates: 2,
            categorical_scenarios: vec![CategoricalScenario::UniformNoise { levels: 2 }],
            metric: DistanceMetric::Footrule,
            seed: 7,
            covariate_labels: None,
        };
        let data = generate(&config).unwrap();
        assert_eq!(data.rankings.len(), 18);
        assert_eq!(data.true_labels.len(), 18);
        assert_eq!(data.covariates.num_covariates(), 3);
        assert_eq!(data.true_consensus.len(), 3);
        let counts: Vec<usize> = (0..3)
            .map(|c| data.true_labels.iter().filter(|&&l| l as usize == c).count())
            .collect();
        assert_eq!(counts, vec![5, 7, 6]);
        // Deterministic in the seed.
        let again = generate(&config).unwrap();
        assert_eq!(data, again);
    }
}
