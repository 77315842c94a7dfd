//! Metropolis-within-Gibbs drivers for the mixture model: the complete-data
//! sweep (weights, per-cluster consensus and scale, labels) and the
//! partial-data variant that adds a latent-ranking augmentation sweep.
//!
//! Runs are reproducible bit-for-bit from `(data, config, seed)`. Chain `i`
//! is seeded with `seed + i`, and chains execute independently (possibly in
//! parallel) with no cross-chain adaptation.

use crate::covariates::{CovariateTable, SimilarityConfig};
use crate::error::{Error, Result};
use crate::model::{
    accept_logratio_alpha, accept_logratio_augmentation, accept_logratio_rho, gibbs_tau,
    gibbs_z_logprobs, ClusterParams, Hyperparameters, MixtureState,
};
use crate::partition_function::ZStrategy;
use crate::rank::{
    consistent, leap_and_shift_propose, uniform_completion, PartialRanking, Ranking,
};
use crate::rng::rng_from_seed;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

/// Run-level configuration of one fit.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Total MCMC iterations per chain.
    pub total_iterations: usize,
    /// Iterations discarded before recording.
    pub burn_in: usize,
    /// Keep-every stride (may be auto-raised by the memory cap).
    pub thin: usize,
    pub seed: u64,
    pub num_chains: usize,
    pub hyper: Hyperparameters,
    /// Fixes α for all clusters and disables its updates (exactness tests).
    pub alpha_fixed: Option<f64>,
    /// Fixes τ and disables its updates (exactness tests).
    pub tau_fixed: Option<Vec<f64>>,
    /// Cap on retained-sample memory; `thin` is raised to fit under it.
    pub memory_cap_bytes: usize,
    /// Free-form fingerprint echoed into sample files.
    pub config_tag: String,
}

impl RunConfig {
    pub fn new(hyper: Hyperparameters, total_iterations: usize, burn_in: usize, seed: u64) -> Self {
        Self {
            total_iterations,
            burn_in,
            thin: 1,
            seed,
            num_chains: 1,
            hyper,
            alpha_fixed: None,
            tau_fixed: None,
            memory_cap_bytes: 512 << 20,
            config_tag: String::new(),
        }
    }

    /// Whether the augmented (marginal-likelihood) similarity family is in
    /// use; derived from the similarity configuration.
    pub fn uses_augmented_similarity(&self) -> bool {
        matches!(self.hyper.similarity, SimilarityConfig::Augmented(_))
    }

    pub fn validate(&self) -> Result<()> {
        self.hyper.validate()?;
        if self.total_iterations == 0 || self.burn_in >= self.total_iterations {
            return Err(Error::InvalidParam(format!(
                "need burn_in < total_iterations (got {} ≥ {})",
                self.burn_in, self.total_iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::InvalidParam("thin must be ≥ 1".into()));
        }
        if self.num_chains == 0 {
            return Err(Error::InvalidParam("num_chains must be ≥ 1".into()));
        }
        if let Some(a) = self.alpha_fixed {
            if !(a > 0.0 && a <= self.hyper.alpha_max) {
                return Err(Error::InvalidParam(format!(
                    "fixed alpha {a} outside (0, {}]",
                    self.hyper.alpha_max
                )));
            }
        }
        if let Some(tau) = &self.tau_fixed {
            if tau.len() != self.hyper.num_clusters {
                return Err(Error::DimensionMismatch {
                    expected: self.hyper.num_clusters,
                    got: tau.len(),
                });
            }
            let total: f64 = tau.iter().sum();
            if (total - 1.0).abs() > 1e-12 || !tau.iter().all(|&t| t > 0.0) {
                return Err(Error::InvalidParam("fixed tau must be a positive simplex point".into()));
            }
        }
        Ok(())
    }
}

/// One retained MCMC state.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRecord {
    /// 1-based sweep index within the chain.
    pub iteration: u64,
    pub z: Vec<u16>,
    /// Per-cluster consensus rank vectors.
    pub rho: Vec<Vec<u16>>,
    pub alpha: Vec<f64>,
    pub tau: Vec<f64>,
    /// Latent complete rankings (partial-data runs only).
    pub augmented: Option<Vec<Vec<u16>>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AcceptanceCounters {
    pub rho_accepted: u64,
    pub rho_proposed: u64,
    pub alpha_accepted: u64,
    pub alpha_proposed: u64,
    pub aug_accepted: u64,
    pub aug_proposed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainSamples {
    pub chain_index: u32,
    pub chain_seed: u64,
    pub records: Vec<SampleRecord>,
    pub accept: AcceptanceCounters,
}

/// Thinned chain history for all parameters, plus acceptance counters and
/// reproducibility metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorSamples {
    pub n_items: usize,
    pub num_assessors: usize,
    pub num_clusters: usize,
    pub total_iterations: usize,
    pub burn_in: usize,
    pub requested_thin: usize,
    pub effective_thin: usize,
    pub seed: u64,
    pub config_tag: String,
    pub has_augmented: bool,
    pub chains: Vec<ChainSamples>,
}

impl PosteriorSamples {
    /// All retained records pooled across chains.
    pub fn records(&self) -> impl Iterator<Item = &SampleRecord> {
        self.chains.iter().flat_map(|c| c.records.iter())
    }

    pub fn num_records(&self) -> usize {
        self.chains.iter().map(|c| c.records.len()).sum()
    }
}

/// Per-parameter acceptance rates; a family with zero proposals reports
/// `None` rather than a rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcceptanceReport {
    pub rho: Option<f64>,
    pub alpha: Option<f64>,
    pub augmentation: Option<f64>,
    pub counters: AcceptanceCounters,
}

pub fn acceptance_report(samples: &PosteriorSamples) -> AcceptanceReport {
    let mut total = AcceptanceCounters::default();
    for chain in &samples.chains {
        let a = chain.accept;
        total.rho_accepted += a.rho_accepted;
        total.rho_proposed += a.rho_proposed;
        total.alpha_accepted += a.alpha_accepted;
        total.alpha_proposed += a.alpha_proposed;
        total.aug_accepted += a.aug_accepted;
        total.aug_proposed += a.aug_proposed;
    }
    let rate = |acc: u64, prop: u64| {
        if prop == 0 {
            None
        } else {
            Some(acc as f64 / prop as f64)
        }
    };
    AcceptanceReport {
        rho: rate(total.rho_accepted, total.rho_proposed),
        alpha: rate(total.alpha_accepted, total.alpha_proposed),
        augmentation: rate(total.aug_accepted, total.aug_proposed),
        counters: total,
    }
}

/// Run the complete-data sampler.
pub fn run_bmmx(
    rankings: &[Ranking],
    covariates: &CovariateTable,
    zcalc: &ZStrategy,
    config: &RunConfig,
) -> Result<PosteriorSamples> {
    run_impl(Data::Complete(rankings), covariates, zcalc, config)
}

/// Run the partial-data sampler with latent-ranking augmentation. Fully
/// observed inputs degrade gracefully: every augmentation proposal is the
/// identity move.
pub fn run_bmmx_partial(
    partials: &[PartialRanking],
    covariates: &CovariateTable,
    zcalc: &ZStrategy,
    config: &RunConfig,
) -> Result<PosteriorSamples> {
    run_impl(Data::Partial(partials), covariates, zcalc, config)
}

enum Data<'a> {
    Complete(&'a [Ranking]),
    Partial(&'a [PartialRanking]),
}

impl Data<'_> {
    fn len(&self) -> usize {
        match self {
            Data::Complete(r) => r.len(),
            Data::Partial(p) => p.len(),
        }
    }

    fn n_items(&self) -> usize {
        match self {
            Data::Complete(r) => r.first().map_or(0, |x| x.n()),
            Data::Partial(p) => p.first().map_or(0, |x| x.n()),
        }
    }

    fn is_partial(&self) -> bool {
        matches!(self, Data::Partial(_))
    }
}

fn record_bytes(n: usize, num_assessors: usize, c: usize, augmented: bool) -> usize {
    let mut b = num_assessors * 2 + c * n * 2 + c * 16 + 64;
    if augmented {
        b += num_assessors * n * 2;
    }
    b
}

fn sample_truncated_exponential<R: Rng + ?Sized>(rng: &mut R, lambda: f64, alpha_max: f64) -> f64 {
    let u: f64 = rng.random();
    let q = -(-lambda * alpha_max).exp_m1(); // 1 − e^{−λ α_max}
    -(1.0 - u * q).ln() / lambda
}

/// Keep an initial α draw inside the evaluable support (grids are range
/// limited; α = 0 is excluded everywhere).
fn clamp_to_support(zcalc: &ZStrategy, alpha: f64, alpha_max: f64) -> f64 {
    match zcalc {
        ZStrategy::Grid(g) => alpha.clamp(g.alpha_min(), g.alpha_max().min(alpha_max)),
        _ => alpha.max(1e-12),
    }
}

fn sample_from_log_probs<R: Rng + ?Sized>(logps: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, lp) in logps.iter().enumerate() {
        acc += lp.exp();
        if u < acc {
            return i;
        }
    }
    logps.len() - 1
}

fn run_impl(
    data: Data<'_>,
    covariates: &CovariateTable,
    zcalc: &ZStrategy,
    config: &RunConfig,
) -> Result<PosteriorSamples> {
    config.validate()?;
    let num_assessors = data.len();
    if num_assessors == 0 {
        return Err(Error::EmptyInput("no rankings supplied".into()));
    }
    let n = data.n_items();
    if n < 2 {
        return Err(Error::InvalidParam("need at least 2 items".into()));
    }
    match &data {
        Data::Complete(r) => {
            if let Some(bad) = r.iter().find(|x| x.n() != n) {
                return Err(Error::DimensionMismatch { expected: n, got: bad.n() });
            }
        }
        Data::Partial(p) => {
            if let Some(bad) = p.iter().find(|x| x.n() != n) {
                return Err(Error::DimensionMismatch { expected: n, got: bad.n() });
            }
        }
    }
    if covariates.num_assessors() != num_assessors {
        return Err(Error::DimensionMismatch {
            expected: num_assessors,
            got: covariates.num_assessors(),
        });
    }
    config.hyper.leap.validate_for(n)?;
    // Fail fast on an incompatible normalizing-constant source.
    let probe = match zcalc {
        ZStrategy::Grid(g) => g.alpha_min(),
        _ => 0.0,
    };
    zcalc.log_z(probe, n, config.hyper.metric)?;
    if let Some(a) = config.alpha_fixed {
        if !zcalc.supports_alpha(a) {
            return Err(Error::InvalidParam(format!(
                "fixed alpha {a} outside the supported range of the Z source"
            )));
        }
    }

    let c_total = config.hyper.num_clusters;
    let retained = (config.total_iterations - config.burn_in) / config.thin;
    let rb = record_bytes(n, num_assessors, c_total, data.is_partial());
    let budget = config.memory_cap_bytes.max(rb);
    let effective_thin = if retained * config.num_chains * rb > budget {
        let max_records = (budget / rb / config.num_chains).max(1);
        let span = config.total_iterations - config.burn_in;
        config.thin.max(span.div_ceil(max_records))
    } else {
        config.thin
    };

    let chain_indices: Vec<u32> = (0..config.num_chains as u32).collect();
    let chains: Result<Vec<ChainSamples>> = chain_indices
        .par_iter()
        .map(|&i| run_chain(i, &data, covariates, zcalc, config, effective_thin, n, num_assessors))
        .collect();

    Ok(PosteriorSamples {
        n_items: n,
        num_assessors,
        num_clusters: c_total,
        total_iterations: config.total_iterations,
        burn_in: config.burn_in,
        requested_thin: config.thin,
        effective_thin,
        seed: config.seed,
        config_tag: config.config_tag.clone(),
        has_augmented: data.is_partial(),
        chains: chains?,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_chain(
    chain_index: u32,
    data: &Data<'_>,
    covariates: &CovariateTable,
    zcalc: &ZStrategy,
    config: &RunConfig,
    effective_thin: usize,
    n: usize,
    num_assessors: usize,
) -> Result<ChainSamples> {
    let hyper = &config.hyper;
    let c_total = hyper.num_clusters;
    let chain_seed = config.seed.wrapping_add(chain_index as u64);
    let mut rng: ChaCha8Rng = rng_from_seed(chain_seed);

    // Random initialization: uniform ρ, prior-draw α, prior-draw τ, uniform z.
    let mut identity: Vec<u16> = (1..=n as u16).collect();
    let clusters: Vec<ClusterParams> = (0..c_total)
        .map(|_| {
            identity.shuffle(&mut rng);
            let alpha = config.alpha_fixed.unwrap_or_else(|| {
                clamp_to_support(
                    zcalc,
                    sample_truncated_exponential(&mut rng, hyper.lambda, hyper.alpha_max),
                    hyper.alpha_max,
                )
            });
            ClusterParams { rho: Ranking::new(identity.clone()).unwrap(), alpha }
        })
        .collect();
    let tau = match &config.tau_fixed {
        Some(t) => t.clone(),
        None => gibbs_tau(&vec![0usize; c_total], hyper.psi, &mut rng),
    };
    let z: Vec<u16> = (0..num_assessors)
        .map(|_| rng.random_range(0..c_total) as u16)
        .collect();
    let mut state = MixtureState { clusters, tau, z };

    // Latent completions for partial data.
    let mut completions: Vec<Ranking> = match data {
        Data::Partial(p) => p.iter().map(|pr| uniform_completion(pr, &mut rng)).collect(),
        Data::Complete(_) => Vec::new(),
    };

    let mut accept = AcceptanceCounters::default();
    let mut records = Vec::new();

    for m in 1..=config.total_iterations {
        let current: &[Ranking] = match data {
            Data::Complete(r) => r,
            Data::Partial(_) => &completions,
        };

        // Gibbs step: mixture weights.
        if config.tau_fixed.is_none() {
            let counts = state.cluster_counts();
            state.tau = gibbs_tau(&counts, hyper.psi, &mut rng);
        }

        // α is proposed after every `alpha_jump` completed sweeps, so
        // `alpha_jump ≥ total_iterations` leaves α at its initial value.
        let alpha_due = config.alpha_fixed.is_none() && m > 1 && (m - 1) % hyper.alpha_jump == 0;

        for c in 0..c_total {
            // M-H step: consensus ranking.
            let (proposal, fwd, bwd) = leap_and_shift_propose(&state.clusters[c].rho, &hyper.leap, &mut rng)?;
            let members = current
                .iter()
                .zip(&state.z)
                .filter(|(_, &zz)| zz as usize == c)
                .map(|(r, _)| r);
            let logratio = accept_logratio_rho(
                &state.clusters[c].rho,
                &proposal,
                fwd,
                bwd,
                state.clusters[c].alpha,
                members,
                hyper.metric,
            )?;
            accept.rho_proposed += 1;
            let u: f64 = rng.random();
            if u.ln() < logratio {
                state.clusters[c].rho = proposal;
                accept.rho_accepted += 1;
            }

            // M-H step: scale parameter (log-normal proposal).
            if alpha_due {
                let noise: f64 = rand_distr::StandardNormal.sample(&mut rng);
                let proposed_alpha = (state.clusters[c].alpha.ln() + hyper.sigma_alpha * noise).exp();
                accept.alpha_proposed += 1;
                let u: f64 = rng.random();
                // Proposals a grid cannot evaluate are rejected outright.
                if zcalc.supports_alpha(proposed_alpha) || proposed_alpha > hyper.alpha_max {
                    let members = current
                        .iter()
                        .zip(&state.z)
                        .filter(|(_, &zz)| zz as usize == c)
                        .map(|(r, _)| r);
                    let logratio = accept_logratio_alpha(
                        state.clusters[c].alpha,
                        proposed_alpha,
                        members,
                        &state.clusters[c].rho,
                        hyper,
                        zcalc,
                    )?;
                    if u.ln() < logratio {
                        state.clusters[c].alpha = proposed_alpha;
                        accept.alpha_accepted += 1;
                    }
                }
            }
        }

        // Gibbs step: cluster labels, sequential over assessors.
        for j in 0..num_assessors {
            let logps = gibbs_z_logprobs(j, current, &state, covariates, hyper, zcalc)?;
            state.z[j] = sample_from_log_probs(&logps, &mut rng) as u16;
        }

        // M-H step: latent rankings (partial data only), after the
        // parameter updates.
        if let Data::Partial(partials) = data {
            for j in 0..num_assessors {
                let proposal = uniform_completion(&partials[j], &mut rng);
                accept.aug_proposed += 1;
                let c = state.z[j] as usize;
                let logratio = accept_logratio_augmentation(
                    &completions[j],
                    &proposal,
                    &state.clusters[c].rho,
                    state.clusters[c].alpha,
                    hyper.metric,
                )?;
                let u: f64 = rng.random();
                if u.ln() < logratio {
                    completions[j] = proposal;
                    accept.aug_accepted += 1;
                }
            }
        }

        if m > config.burn_in && (m - config.burn_in) % effective_thin == 0 {
            records.push(SampleRecord {
                iteration: m as u64,
                z: state.z.clone(),
                rho: state.clusters.iter().map(|p| p.rho.ranks().to_vec()).collect(),
                alpha: state.clusters.iter().map(|p| p.alpha).collect(),
                tau: state.tau.clone(),
                augmented: match data {
                    Data::Partial(_) => {
                        Some(completions.iter().map(|r| r.ranks().to_vec()).collect())
                    }
                    Data::Complete(_) => None,
                },
            });
        }
    }

    Ok(ChainSamples { chain_index, chain_seed, records, accept })
}

/// Replay every recorded state against the structural invariants: valid
/// permutations, labels in range, simplex weights, α in the prior support,
/// and (partial runs) augmented rankings consistent with their constraints.
pub fn replay_invariants(
    samples: &PosteriorSamples,
    partials: Option<&[PartialRanking]>,
    alpha_max: f64,
) -> Result<()> {
    for chain in &samples.chains {
        for rec in &chain.records {
            if rec.z.len() != samples.num_assessors {
                return Err(Error::DimensionMismatch {
                    expected: samples.num_assessors,
                    got: rec.z.len(),
                });
            }
            if !rec.z.iter().all(|&z| (z as usize) < samples.num_clusters) {
                return Err(Error::InvalidParam("recorded label out of range".into()));
            }
            for ranks in &rec.rho {
                Ranking::new(ranks.clone())?;
            }
            let total: f64 = rec.tau.iter().sum();
            if (total - 1.0).abs() > 1e-12 || !rec.tau.iter().all(|&t| t > 0.0) {
                return Err(Error::InvalidParam(format!("recorded tau sums to {total}")));
            }
            if !rec.alpha.iter().all(|&a| a > 0.0 && a <= alpha_max) {
                return Err(Error::InvalidParam("recorded alpha outside prior support".into()));
            }
            if let (Some(aug), Some(prs)) = (&rec.augmented, partials) {
                for (ranks, pr) in aug.iter().zip(prs) {
                    let full = Ranking::new(ranks.clone())?;
                    if !consistent(&full, pr)? {
                        return Err(Error::InvalidParam(
                            "recorded augmented ranking violates its constraints".into(),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariates::GofSimParams;
    use crate::partition_function::enumerate_distance_table;
    use crate::rank::DistanceMetric;
    use std::collections::HashSet;

    fn r(v: &[u16]) -> Ranking {
        Ranking::new(v.to_vec()).unwrap()
    }

    fn basic_config(c: usize, m: usize, seed: u64) -> RunConfig {
        let hyper = Hyperparameters::default_with(
            c,
            DistanceMetric::Footrule,
            SimilarityConfig::GoodnessOfFit(GofSimParams::new(1.0, 1.0).unwrap()),
        );
        RunConfig::new(hyper, m, m / 10, seed)
    }

    fn zc(n: usize) -> ZStrategy {
        ZStrategy::Exact(enumerate_distance_table(n, DistanceMetric::Footrule).unwrap())
    }

    fn toy_rankings() -> Vec<Ranking> {
        vec![r(&[1, 2, 3]), r(&[2, 1, 3]), r(&[1, 3, 2]), r(&[1, 2, 3])]
    }

    #[test]
    fn deterministic_given_seed() {
        let config = basic_config(2, 300, 99);
        let rankings = toy_rankings();
        let cov = CovariateTable::empty(rankings.len());
        let a = run_bmmx(&rankings, &cov, &zc(3), &config).unwrap();
        let b = run_bmmx(&rankings, &cov, &zc(3), &config).unwrap();
        assert_eq!(a, b);
        let mut other = config.clone();
        other.seed = 100;
        let c = run_bmmx(&rankings, &cov, &zc(3), &other).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn alpha_jump_at_total_iterations_freezes_alpha() {
        let mut config = basic_config(1, 200, 7);
        config.hyper.alpha_jump = 200;
        config.burn_in = 0;
        let rankings = toy_rankings();
        let cov = CovariateTable::empty(rankings.len());
        let samples = run_bmmx(&rankings, &cov, &zc(3), &config).unwrap();
        let first = samples.chains[0].records[0].alpha[0];
        assert!(samples.records().all(|rec| rec.alpha[0] == first));
        assert_eq!(acceptance_report(&samples).alpha, None);
    }

    #[test]
    fn record_count_and_thinning() {
        let mut config = basic_config(1, 1000, 3);
        config.burn_in = 100;
        config.thin = 7;
        let rankings = toy_rankings();
        let cov = CovariateTable::empty(rankings.len());
        let samples = run_bmmx(&rankings, &cov, &zc(3), &config).unwrap();
        assert_eq!(samples.num_records(), (1000 - 100) / 7);
        assert_eq!(samples.effective_thin, 7);
    }

    #[test]
    fn memory_cap_raises_thin() {
        let mut config = basic_config(1, 1000, 3);
        config.burn_in = 0;
        config.memory_cap_bytes = 10 * record_bytes(3, 4, 1, false);
        let rankings = toy_rankings();
        let cov = CovariateTable::empty(rankings.len());
        let samples = run_bmmx(&rankings, &cov, &zc(3), &config).unwrap();
        assert!(samples.effective_thin > 1);
        assert!(samples.num_records() <= 10);
        assert_eq!(samples.requested_thin, 1);
    }

    #[test]
    fn ergodicity_smoke() {
        // n = 3, C = 1, α fixed at 1: all 6 permutations show up quickly.
        let mut config = basic_config(1, 10_000, 5);
        config.alpha_fixed = Some(1.0);
        config.burn_in = 0;
        let rankings = vec![r(&[1, 2, 3])];
        let cov = CovariateTable::empty(1);
        let samples = run_bmmx(&rankings, &cov, &zc(3), &config).unwrap();
        let seen: HashSet<Vec<u16>> = samples.records().map(|rec| rec.rho[0].clone()).collect();
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn replay_invariants_hold() {
        let mut config = basic_config(2, 400, 11);
        config.num_chains = 2;
        let partials = vec![
            PartialRanking::new(vec![Some(1), None, None, Some(2)]).unwrap(),
            PartialRanking::new(vec![None, None, Some(1), None]).unwrap(),
            PartialRanking::new(vec![Some(3), Some(1), Some(2), Some(4)]).unwrap(),
        ];
        let cov = CovariateTable::empty(partials.len());
        let samples = run_bmmx_partial(&partials, &cov, &zc(4), &config).unwrap();
        assert!(samples.has_augmented);
        replay_invariants(&samples, Some(&partials), config.hyper.alpha_max).unwrap();
    }

    #[test]
    fn fully_observed_partials_always_accept_identity_moves() {
        let config = basic_config(1, 200, 13);
        let complete = toy_rankings();
        let partials: Vec<PartialRanking> =
            complete.iter().map(PartialRanking::from_complete).collect();
        let cov = CovariateTable::empty(partials.len());
        let samples = run_bmmx_partial(&partials, &cov, &zc(3), &config).unwrap();
        let report = acceptance_report(&samples);
        assert_eq!(report.augmentation, Some(1.0));
        // The stored augmented rankings equal the observed ones throughout.
        for rec in samples.records() {
            let aug = rec.augmented.as_ref().unwrap();
            for (a, orig) in aug.iter().zip(&complete) {
                assert_eq!(a.as_slice(), orig.ranks());
            }
        }
    }

    #[test]
    fn multi_chain_seeds_are_offset() {
        let mut config = basic_config(1, 100, 40);
        config.num_chains = 3;
        let rankings = toy_rankings();
        let cov = CovariateTable::empty(rankings.len());
        let samples = run_bmmx(&rankings, &cov, &zc(3), &config).unwrap();
        let seeds: Vec<u64> = samples.chains.iter().map(|c| c.chain_seed).collect();
        assert_eq!(seeds, vec![40, 41, 42]);
    }
}
