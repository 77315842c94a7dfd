//! The probabilistic kernel of the Mallows mixture with covariates:
//! priors, per-cluster likelihood, Metropolis-Hastings log acceptance
//! ratios, the Gibbs full conditionals for the mixture weights and labels,
//! and the full unnormalized log posterior used by oracles and diagnostics.

use crate::covariates::{log_similarity, log_similarity_partition, CovariateTable, SimilarityConfig};
use crate::error::{Error, Result};
use crate::partition_function::{log_sum_exp, ZStrategy};
use crate::rank::{distance, DistanceMetric, LeapAndShiftParams, Ranking};
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use statrs::function::gamma::ln_gamma;

/// Fixed hyperparameters of one fit.
#[derive(Clone, Debug)]
pub struct Hyperparameters {
    /// Rate of the truncated exponential prior on α.
    pub lambda: f64,
    /// Upper truncation point of the α prior.
    pub alpha_max: f64,
    /// Concentration of the symmetric Dirichlet prior on the mixture weights.
    pub psi: f64,
    /// Standard deviation of the log-normal proposal for α.
    pub sigma_alpha: f64,
    /// α is proposed once every `alpha_jump` sweeps.
    pub alpha_jump: usize,
    pub leap: LeapAndShiftParams,
    pub num_clusters: usize,
    pub metric: DistanceMetric,
    pub similarity: SimilarityConfig,
}

impl Hyperparameters {
    /// Library defaults: λ = 0.1, α_max = 20, ψ = 10, σ_α = 0.1,
    /// α_jump = 10, leap 1.
    pub fn default_with(
        num_clusters: usize,
        metric: DistanceMetric,
        similarity: SimilarityConfig,
    ) -> Self {
        Self {
            lambda: 0.1,
            alpha_max: 20.0,
            psi: 10.0,
            sigma_alpha: 0.1,
            alpha_jump: 10,
            leap: LeapAndShiftParams::new(1).unwrap(),
            num_clusters,
            metric,
            similarity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            (self.lambda, "lambda"),
            (self.alpha_max, "alpha_max"),
            (self.psi, "psi"),
            (self.sigma_alpha, "sigma_alpha"),
        ];
        for (v, name) in pos {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParam(format!("{name} must be positive, got {v}")));
            }
        }
        if self.alpha_jump == 0 {
            return Err(Error::InvalidParam("alpha_jump must be ≥ 1".into()));
        }
        if self.num_clusters == 0 {
            return Err(Error::InvalidParam("number of clusters must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// Consensus ranking and scale of one mixture component.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterParams {
    pub rho: Ranking,
    pub alpha: f64,
}

/// Full latent state of the mixture sampler.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureState {
    pub clusters: Vec<ClusterParams>,
    pub tau: Vec<f64>,
    pub z: Vec<u16>,
}

impl MixtureState {
    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }

    /// Members per cluster.
    pub fn cluster_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_clusters()];
        for &z in &self.z {
            counts[z as usize] += 1;
        }
        counts
    }

    pub fn validate(&self, alpha_max: f64) -> Result<()> {
        let c = self.num_clusters();
        if c == 0 {
            return Err(Error::InvalidParam("state must have ≥ 1 cluster".into()));
        }
        if self.tau.len() != c {
            return Err(Error::DimensionMismatch { expected: c, got: self.tau.len() });
        }
        let total: f64 = self.tau.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParam(format!("tau sums to {total}, expected 1")));
        }
        if !self.tau.iter().all(|&t| t > 0.0) {
            return Err(Error::InvalidParam("all tau components must be positive".into()));
        }
        for p in &self.clusters {
            if !(p.alpha > 0.0 && p.alpha <= alpha_max) {
                return Err(Error::InvalidParam(format!(
                    "alpha {} outside (0, {alpha_max}]",
                    p.alpha
                )));
            }
        }
        if !self.z.iter().all(|&z| (z as usize) < c) {
            return Err(Error::InvalidParam("cluster label out of range".into()));
        }
        Ok(())
    }
}

/// Log density of the truncated exponential prior on α
/// (−∞ outside `[0, alpha_max]`).
pub fn log_prior_alpha(alpha: f64, lambda: f64, alpha_max: f64) -> f64 {
    if alpha < 0.0 || alpha > alpha_max || !alpha.is_finite() {
        return f64::NEG_INFINITY;
    }
    lambda.ln() - lambda * alpha - (-(-lambda * alpha_max).exp_m1()).ln()
}

/// Log likelihood of the rankings currently assigned to `cluster`:
/// `Σ_{j: z_j = c} −(α/n) d(R_j, ρ) − n_c log Z_n(α)`.
pub fn log_lik_cluster(
    rankings: &[Ranking],
    z: &[u16],
    cluster: u16,
    rho: &Ranking,
    alpha: f64,
    metric: DistanceMetric,
    zcalc: &ZStrategy,
) -> Result<f64> {
    let n = rho.n();
    let mut dist_sum = 0u64;
    let mut count = 0usize;
    for (r, &label) in rankings.iter().zip(z) {
        if label == cluster {
            dist_sum += distance(r, rho, metric)?;
            count += 1;
        }
    }
    if count == 0 {
        return Ok(0.0);
    }
    let log_z = zcalc.log_z(alpha, n, metric)?;
    Ok(-(alpha / n as f64) * dist_sum as f64 - count as f64 * log_z)
}

/// Log acceptance ratio of a leap-and-shift move of the consensus ranking:
/// `log P(ρ|ρ′) − log P(ρ′|ρ) − (α/n)(Σ d(R, ρ′) − Σ d(R, ρ))`.
/// The caller accepts when `log u < value`.
pub fn accept_logratio_rho<'a, I>(
    rho_old: &Ranking,
    rho_new: &Ranking,
    forward_lp: f64,
    backward_lp: f64,
    alpha: f64,
    member_rankings: I,
    metric: DistanceMetric,
) -> Result<f64>
where
    I: IntoIterator<Item = &'a Ranking>,
{
    if rho_old.n() != rho_new.n() {
        return Err(Error::DimensionMismatch { expected: rho_old.n(), got: rho_new.n() });
    }
    let n = rho_old.n() as f64;
    let mut d_old = 0u64;
    let mut d_new = 0u64;
    for r in member_rankings {
        d_old += distance(r, rho_old, metric)?;
        d_new += distance(r, rho_new, metric)?;
    }
    Ok(backward_lp - forward_lp - (alpha / n) * (d_new as f64 - d_old as f64))
}

/// Log acceptance ratio of a log-normal scale move:
/// `n_c (log Z(α) − log Z(α′)) + log π(α′) − log π(α)
///  + log α′ − log α − ((α′ − α)/n) Σ d(R_j, ρ)`.
/// The `log α′ − log α` term is the log-normal proposal Jacobian. Returns
/// −∞ when the proposal leaves the prior support.
pub fn accept_logratio_alpha<'a, I>(
    alpha_old: f64,
    alpha_new: f64,
    member_rankings: I,
    rho: &Ranking,
    hyper: &Hyperparameters,
    zcalc: &ZStrategy,
) -> Result<f64>
where
    I: IntoIterator<Item = &'a Ranking>,
{
    if !(alpha_new > 0.0) || alpha_new > hyper.alpha_max {
        return Ok(f64::NEG_INFINITY);
    }
    let n = rho.n();
    let mut dist_sum = 0u64;
    let mut count = 0usize;
    for r in member_rankings {
        dist_sum += distance(r, rho, hyper.metric)?;
        count += 1;
    }
    let prior_term = log_prior_alpha(alpha_new, hyper.lambda, hyper.alpha_max)
        - log_prior_alpha(alpha_old, hyper.lambda, hyper.alpha_max);
    let jacobian = alpha_new.ln() - alpha_old.ln();
    let z_term = if count == 0 {
        0.0
    } else {
        count as f64
            * (zcalc.log_z(alpha_old, n, hyper.metric)? - zcalc.log_z(alpha_new, n, hyper.metric)?)
    };
    Ok(z_term + prior_term + jacobian - ((alpha_new - alpha_old) / n as f64) * dist_sum as f64)
}

/// Log acceptance ratio of a data-augmentation move of one latent ranking:
/// `−(α/n)(d(R̃′, ρ) − d(R̃, ρ))`.
pub fn accept_logratio_augmentation(
    r_old: &Ranking,
    r_new: &Ranking,
    rho: &Ranking,
    alpha: f64,
    metric: DistanceMetric,
) -> Result<f64> {
    let d_old = distance(r_old, rho, metric)?;
    let d_new = distance(r_new, rho, metric)?;
    Ok(-(alpha / rho.n() as f64) * (d_new as f64 - d_old as f64))
}

/// Normalized log probabilities of the label full conditional for one
/// assessor.
///
/// For each candidate cluster the likelihood and weight terms are combined
/// with the change in the total partition similarity caused by moving the
/// assessor there, i.e. the exact full conditional of the posterior whose
/// partition prior is `Π_c τ_c^{|S_c|} g(X_c)`. The similarity set of the
/// candidate cluster is its current members plus the assessor.
pub fn gibbs_z_logprobs(
    assessor: usize,
    rankings: &[Ranking],
    state: &MixtureState,
    covariates: &CovariateTable,
    hyper: &Hyperparameters,
    zcalc: &ZStrategy,
) -> Result<Vec<f64>> {
    let c_total = hyper.num_clusters;
    if state.num_clusters() != c_total {
        return Err(Error::DimensionMismatch { expected: c_total, got: state.num_clusters() });
    }
    if assessor >= rankings.len() {
        return Err(Error::InvalidParam(format!("assessor {assessor} out of range")));
    }
    let n = rankings[assessor].n() as f64;
    let mut logps = Vec::with_capacity(c_total);
    for (c, params) in state.clusters.iter().enumerate() {
        let d = distance(&rankings[assessor], &params.rho, hyper.metric)?;
        let log_z = zcalc.log_z(params.alpha, params.rho.n(), hyper.metric)?;
        logps.push(state.tau[c].ln() - log_z - params.alpha / n * d as f64);
    }

    if covariates.num_covariates() > 0 {
        let mut scratch: Vec<u16> = state.z.clone();
        if hyper.similarity.is_local() {
            // Each cluster's similarity depends only on its own members, so
            // only the candidate cluster's factor changes.
            let mut members: Vec<Vec<usize>> = vec![Vec::new(); c_total];
            for (j, &zj) in state.z.iter().enumerate() {
                if j != assessor {
                    members[zj as usize].push(j);
                }
            }
            for c in 0..c_total {
                scratch[assessor] = c as u16;
                let without = if members[c].is_empty() {
                    0.0
                } else {
                    log_similarity(&members[c], c, covariates, &scratch, c_total, &hyper.similarity)?
                };
                members[c].push(assessor);
                let with = log_similarity(&members[c], c, covariates, &scratch, c_total, &hyper.similarity)?;
                members[c].pop();
                logps[c] += with - without;
            }
        } else {
            // Goodness-of-fit similarities couple clusters through shared
            // centroids: recompute the whole partition per candidate.
            for c in 0..c_total {
                scratch[assessor] = c as u16;
                logps[c] +=
                    log_similarity_partition(&scratch, covariates, c_total, &hyper.similarity)?;
            }
        }
    }

    let norm = log_sum_exp(logps.iter().copied());
    for lp in &mut logps {
        *lp -= norm;
    }
    Ok(logps)
}

/// Gibbs draw of the mixture weights: `τ | z ~ Dirichlet(ψ + n_1, …, ψ + n_C)`.
pub fn gibbs_tau<R: Rng + ?Sized>(counts: &[usize], psi: f64, rng: &mut R) -> Vec<f64> {
    assert!(psi > 0.0, "psi must be positive");
    if counts.len() == 1 {
        return vec![1.0];
    }
    loop {
        let draws: Vec<f64> = counts
            .iter()
            .map(|&n_c| {
                Gamma::new(psi + n_c as f64, 1.0)
                    .expect("valid gamma shape")
                    .sample(rng)
            })
            .collect();
        let total: f64 = draws.iter().sum();
        if draws.iter().all(|&g| g > 0.0) && total > 0.0 {
            return draws.into_iter().map(|g| g / total).collect();
        }
        // Underflowed to an exact zero; redraw (vanishingly rare).
    }
}

/// Unnormalized log posterior of the full state (up to an additive
/// constant): likelihood, α and ρ priors, cohesion-and-similarity partition
/// prior, and the Dirichlet density of the weights.
pub fn log_posterior_full(
    state: &MixtureState,
    rankings: &[Ranking],
    covariates: &CovariateTable,
    hyper: &Hyperparameters,
    zcalc: &ZStrategy,
) -> Result<f64> {
    let c_total = state.num_clusters();
    let n = state.clusters[0].rho.n();
    let counts = state.cluster_counts();
    let ln_nfact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();

    let mut total = 0.0;
    for (c, params) in state.clusters.iter().enumerate() {
        total += log_lik_cluster(
            rankings,
            &state.z,
            c as u16,
            &params.rho,
            params.alpha,
            hyper.metric,
            zcalc,
        )?;
        total += log_prior_alpha(params.alpha, hyper.lambda, hyper.alpha_max);
        total -= ln_nfact; // uniform prior on ρ_c
        total += counts[c] as f64 * state.tau[c].ln();
    }
    total += log_similarity_partition(&state.z, covariates, c_total, &hyper.similarity)?;
    // Dirichlet(ψ, …, ψ) density of τ.
    total += ln_gamma(hyper.psi * c_total as f64) - c_total as f64 * ln_gamma(hyper.psi);
    total += state.tau.iter().map(|&t| (hyper.psi - 1.0) * t.ln()).sum::<f64>();
    Ok(total)
}
