//! Assessor covariates and the two families of cluster similarity
//! functions: marginal-likelihood ("augmented") similarities obtained by
//! integrating a conjugate model over the cluster, and deterministic
//! goodness-of-fit similarities based on distances to cluster centroids.
//!
//! All similarity computation is done in log-space. Missing covariate
//! values are simply dropped from the per-cluster value sets, so an
//! assessor with a missing value receives no prior information from that
//! covariate.

use crate::error::{Error, Result};
use statrs::function::gamma::ln_gamma;

/// Typed covariate column.
#[derive(Clone, Debug, PartialEq)]
pub enum ColumnData {
    Continuous(Vec<Option<f64>>),
    Categorical { levels: u32, values: Vec<Option<u32>> },
}

/// Column type tag (schema-level view of [`ColumnData`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Continuous,
    Categorical { levels: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CovariateColumn {
    pub name: String,
    pub data: ColumnData,
}

impl CovariateColumn {
    pub fn kind(&self) -> ColumnKind {
        match &self.data {
            ColumnData::Continuous(_) => ColumnKind::Continuous,
            ColumnData::Categorical { levels, .. } => ColumnKind::Categorical { levels: *levels },
        }
    }

    pub fn len(&self) -> usize {
        match &self.data {
            ColumnData::Continuous(v) => v.len(),
            ColumnData::Categorical { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `N × K` table of typed covariate values with missingness.
///
/// `K = 0` is allowed and reduces the mixture prior to the plain
/// cohesion-only form.
#[derive(Clone, Debug, PartialEq)]
pub struct CovariateTable {
    num_assessors: usize,
    columns: Vec<CovariateColumn>,
}

impl CovariateTable {
    pub fn new(num_assessors: usize, columns: Vec<CovariateColumn>) -> Result<Self> {
        for col in &columns {
            if col.len() != num_assessors {
                return Err(Error::DimensionMismatch {
                    expected: num_assessors,
                    got: col.len(),
                });
            }
            if let ColumnData::Categorical { levels, values } = &col.data {
                if *levels == 0 {
                    return Err(Error::InvalidParam(format!(
                        "column '{}': categorical level count must be ≥ 1",
                        col.name
                    )));
                }
                for v in values.iter().flatten() {
                    if v >= levels {
                        return Err(Error::InvalidParam(format!(
                            "column '{}': category {v} outside 0..{levels}",
                            col.name
                        )));
                    }
                }
            }
        }
        Ok(Self { num_assessors, columns })
    }

    /// Table with no covariates at all.
    pub fn empty(num_assessors: usize) -> Self {
        Self { num_assessors, columns: Vec::new() }
    }

    pub fn num_assessors(&self) -> usize {
        self.num_assessors
    }

    pub fn num_covariates(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[CovariateColumn] {
        &self.columns
    }
}

/// Which marginal-likelihood form the continuous augmented similarity uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AugContinuousVariant {
    /// Per-observation shrinkage: each member contributes an independent
    /// factor, so the value is additive over members.
    #[default]
    PerObservation,
    /// Prior precision split across the cluster: `σ̃` and `μ̃` depend on the
    /// cluster size, coupling members through the shared posterior.
    PriorSplit,
}

/// Derived normal-normal hyperparameters for one continuous column.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuousHyper {
    pub mu0: f64,
    pub sigma: f64,
    pub sigma0: f64,
}

/// Parameters of the augmented similarity family. The per-column normal
/// hyperparameters are derived from the data: `μ₀` is the column mean and
/// `σ = c₁·ŝ_x`, `σ₀ = c₂·ŝ_x` with `ŝ_x` the column's sample standard
/// deviation. Degenerate columns (`ŝ_x = 0` or fewer than two observed
/// values) are skipped entirely.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedSimParams {
    pub c1: f64,
    pub c2: f64,
    pub phi: f64,
    pub variant: AugContinuousVariant,
    per_column: Vec<Option<ContinuousHyper>>,
}

impl AugmentedSimParams {
    pub fn derive(c1: f64, c2: f64, phi: f64, table: &CovariateTable) -> Result<Self> {
        Self::derive_with_variant(c1, c2, phi, AugContinuousVariant::PerObservation, table)
    }

    pub fn derive_with_variant(
        c1: f64,
        c2: f64,
        phi: f64,
        variant: AugContinuousVariant,
        table: &CovariateTable,
    ) -> Result<Self> {
        if !(c1 > 0.0 && c2 > 0.0 && phi > 0.0) {
            return Err(Error::InvalidParam(format!(
                "augmented similarity requires c1, c2, phi > 0 (got {c1}, {c2}, {phi})"
            )));
        }
        let per_column = table
            .columns()
            .iter()
            .map(|col| match &col.data {
                ColumnData::Categorical { .. } => None,
                ColumnData::Continuous(values) => {
                    let present: Vec<f64> = values.iter().flatten().copied().collect();
                    if present.len() < 2 {
                        return None;
                    }
                    let m = present.len() as f64;
                    let mean = present.iter().sum::<f64>() / m;
                    let var = present.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
                    let sd = var.sqrt();
                    if sd == 0.0 {
                        None
                    } else {
                        Some(ContinuousHyper {
                            mu0: mean,
                            sigma: c1 * sd,
                            sigma0: c2 * sd,
                        })
                    }
                }
            })
            .collect();
        Ok(Self { c1, c2, phi, variant, per_column })
    }

    /// Derived hyperparameters of column `k`; `None` for categorical or
    /// degenerate columns.
    pub fn column_hyper(&self, k: usize) -> Option<&ContinuousHyper> {
        self.per_column.get(k).and_then(|h| h.as_ref())
    }
}

/// Parameters of the goodness-of-fit similarity family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GofSimParams {
    pub theta: f64,
    pub gamma: f64,
}

impl GofSimParams {
    pub fn new(theta: f64, gamma: f64) -> Result<Self> {
        if theta < 0.0 || gamma < 0.0 {
            return Err(Error::InvalidParam(format!(
                "goodness-of-fit similarity requires theta, gamma ≥ 0 (got {theta}, {gamma})"
            )));
        }
        Ok(Self { theta, gamma })
    }
}

/// Active similarity family.
#[derive(Clone, Debug, PartialEq)]
pub enum SimilarityConfig {
    Augmented(AugmentedSimParams),
    GoodnessOfFit(GofSimParams),
}

impl SimilarityConfig {
    pub fn family_name(&self) -> &'static str {
        match self {
            SimilarityConfig::Augmented(_) => "augmented",
            SimilarityConfig::GoodnessOfFit(_) => "gof",
        }
    }

    /// True when a cluster's similarity depends only on its own members
    /// (augmented family), so label updates may use per-cluster deltas.
    pub(crate) fn is_local(&self) -> bool {
        matches!(self, SimilarityConfig::Augmented(_))
    }
}

/// Log augmented similarity of a continuous covariate over one cluster:
/// `|S| log(σ̃/σ) + ½ Σ_j (μ̃_j²/σ̃² − x_j²/σ²)` under normal-normal
/// conjugacy.
pub fn log_sim_aug_continuous(
    values: &[f64],
    hyper: &ContinuousHyper,
    variant: AugContinuousVariant,
) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput("augmented continuous similarity of an empty cluster".into()));
    }
    let (s2, s02) = (hyper.sigma * hyper.sigma, hyper.sigma0 * hyper.sigma0);
    if !(s2 > 0.0 && s02 > 0.0) {
        return Err(Error::InvalidParam("sigma and sigma0 must be positive".into()));
    }
    let m = values.len() as f64;
    let (tilde_var, shrink, offset) = match variant {
        AugContinuousVariant::PerObservation => {
            let tv = 1.0 / (1.0 / s2 + 1.0 / s02);
            // μ̃_j = σ₀² x_j/(σ²+σ₀²) + σ² μ₀/(σ²+σ₀²)
            (tv, s02 / (s2 + s02), s2 * hyper.mu0 / (s2 + s02))
        }
        AugContinuousVariant::PriorSplit => {
            let tv = 1.0 / (1.0 / s2 + 1.0 / (s02 * m));
            // μ̃_j = σ̃² (x_j/σ² + μ₀/(σ₀² m))
            (tv, tv / s2, tv * hyper.mu0 / (s02 * m))
        }
    };
    let mut quad = 0.0;
    for &x in values {
        let mu_t = shrink * x + offset;
        quad += mu_t * mu_t / tilde_var - x * x / s2;
    }
    Ok(m * 0.5 * (tilde_var / s2).ln() + 0.5 * quad)
}

/// Log augmented similarity of a categorical covariate over one cluster:
/// the Dirichlet-multinomial marginal (without the multinomial coefficient),
/// including its normalizing constant so that values are comparable across
/// cluster sizes:
/// `Σ_b log Γ(m_b + φ) − log Γ(M + Bφ) + log Γ(Bφ) − B log Γ(φ)`.
pub fn log_sim_aug_categorical(level_counts: &[u64], phi: f64) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(Error::InvalidParam(format!("phi must be > 0, got {phi}")));
    }
    let total: u64 = level_counts.iter().sum();
    if level_counts.is_empty() || total == 0 {
        return Err(Error::EmptyInput("augmented categorical similarity of an empty cluster".into()));
    }
    let b = level_counts.len() as f64;
    let mut out = ln_gamma(b * phi) - b * ln_gamma(phi) - ln_gamma(total as f64 + b * phi);
    for &c in level_counts {
        out += ln_gamma(c as f64 + phi);
    }
    Ok(out)
}

fn reciprocal_distance(x: f64, centroid: Option<f64>, theta: f64) -> f64 {
    match centroid {
        Some(c) => 1.0 / (1.0 + theta * (x - c).abs()),
        // A cluster with no observed value for the covariate contributes a
        // unit factor, preserving the θ = 0 identity g = 1/C.
        None => 1.0,
    }
}

/// Log goodness-of-fit similarity of a continuous covariate:
/// mean over cluster members of the normalized reciprocal distance
/// `(1+θ|x−x̄_own|)⁻¹ / Σ_l (1+θ|x−x̄_l|)⁻¹`. Always ≤ 0 in log scale.
pub fn log_sim_gof_continuous(
    cluster_values: &[f64],
    centroids: &[Option<f64>],
    own: usize,
    theta: f64,
) -> Result<f64> {
    if cluster_values.is_empty() {
        return Err(Error::EmptyInput("goodness-of-fit similarity of an empty cluster".into()));
    }
    if own >= centroids.len() {
        return Err(Error::InvalidParam(format!(
            "cluster index {own} out of range for {} centroids",
            centroids.len()
        )));
    }
    let mut acc = 0.0;
    for &x in cluster_values {
        let num = reciprocal_distance(x, centroids[own], theta);
        let den: f64 = centroids.iter().map(|&c| reciprocal_distance(x, c, theta)).sum();
        acc += num / den;
    }
    Ok((acc / cluster_values.len() as f64).ln())
}

/// Log goodness-of-fit similarity of a categorical covariate:
/// mean over members of `(1 + γ·1{x = mode_own}) / (C + γ·#{l : mode_l = x})`.
pub fn log_sim_gof_categorical(
    cluster_values: &[u32],
    modes: &[Option<u32>],
    own: usize,
    gamma: f64,
) -> Result<f64> {
    if cluster_values.is_empty() {
        return Err(Error::EmptyInput("goodness-of-fit similarity of an empty cluster".into()));
    }
    if own >= modes.len() {
        return Err(Error::InvalidParam(format!(
            "cluster index {own} out of range for {} modes",
            modes.len()
        )));
    }
    let c = modes.len() as f64;
    let mut acc = 0.0;
    for &x in cluster_values {
        let own_match = modes[own] == Some(x);
        let matches = modes.iter().filter(|&&m| m == Some(x)).count() as f64;
        acc += (1.0 + gamma * own_match as u8 as f64) / (c + gamma * matches);
    }
    Ok((acc / cluster_values.len() as f64).ln())
}

/// Cluster centroids (means of present values) of a continuous column under
/// the given assignment. Empty clusters get `None`.
pub fn continuous_centroids(
    values: &[Option<f64>],
    assignments: &[u16],
    num_clusters: usize,
) -> Vec<Option<f64>> {
    let mut sum = vec![0.0f64; num_clusters];
    let mut cnt = vec![0usize; num_clusters];
    for (j, v) in values.iter().enumerate() {
        if let Some(x) = v {
            let c = assignments[j] as usize;
            sum[c] += x;
            cnt[c] += 1;
        }
    }
    (0..num_clusters)
        .map(|c| if cnt[c] > 0 { Some(sum[c] / cnt[c] as f64) } else { None })
        .collect()
}

/// Cluster modes of a categorical column under the given assignment; ties
/// resolve to the smallest category label. Empty clusters get `None`.
pub fn categorical_modes(
    values: &[Option<u32>],
    levels: u32,
    assignments: &[u16],
    num_clusters: usize,
) -> Vec<Option<u32>> {
    let b = levels as usize;
    let mut counts = vec![0u64; num_clusters * b];
    for (j, v) in values.iter().enumerate() {
        if let Some(x) = v {
            counts[assignments[j] as usize * b + *x as usize] += 1;
        }
    }
    (0..num_clusters)
        .map(|c| {
            let slice = &counts[c * b..(c + 1) * b];
            let best = slice.iter().enumerate().fold((0usize, 0u64), |acc, (lvl, &n)| {
                if n > acc.1 { (lvl, n) } else { acc }
            });
            if best.1 > 0 { Some(best.0 as u32) } else { None }
        })
        .collect()
}

/// Sum over covariates of the log similarity of one candidate cluster.
///
/// `members` is the candidate member set for cluster `cluster_index`
/// (including the assessor under reassignment, when evaluating a label
/// move); `assignments` supplies the other clusters' membership for the
/// goodness-of-fit centroids and must be consistent with `members`.
/// Covariate values missing for a member are dropped; a covariate with no
/// observed value among the members contributes exactly 0.
pub fn log_similarity(
    members: &[usize],
    cluster_index: usize,
    covariates: &CovariateTable,
    assignments: &[u16],
    num_clusters: usize,
    config: &SimilarityConfig,
) -> Result<f64> {
    if cluster_index >= num_clusters {
        return Err(Error::InvalidParam(format!(
            "cluster index {cluster_index} out of range for C = {num_clusters}"
        )));
    }
    let mut total = 0.0;
    for (k, col) in covariates.columns().iter().enumerate() {
        total += match (&col.data, config) {
            (ColumnData::Continuous(values), SimilarityConfig::Augmented(params)) => {
                match params.column_hyper(k) {
                    None => 0.0, // degenerate column: skipped
                    Some(hyper) => {
                        let present: Vec<f64> =
                            members.iter().filter_map(|&j| values[j]).collect();
                        if present.is_empty() {
                            0.0
                        } else {
                            log_sim_aug_continuous(&present, hyper, params.variant)?
                        }
                    }
                }
            }
            (ColumnData::Categorical { levels, values }, SimilarityConfig::Augmented(params)) => {
                let mut counts = vec![0u64; *levels as usize];
                for &j in members {
                    if let Some(x) = values[j] {
                        counts[x as usize] += 1;
                    }
                }
                if counts.iter().all(|&c| c == 0) {
                    0.0
                } else {
                    log_sim_aug_categorical(&counts, params.phi)?
                }
            }
            (ColumnData::Continuous(values), SimilarityConfig::GoodnessOfFit(params)) => {
                let present: Vec<f64> = members.iter().filter_map(|&j| values[j]).collect();
                if present.is_empty() {
                    0.0
                } else {
                    let mut centroids = continuous_centroids(values, assignments, num_clusters);
                    centroids[cluster_index] =
                        Some(present.iter().sum::<f64>() / present.len() as f64);
                    log_sim_gof_continuous(&present, &centroids, cluster_index, params.theta)?
                }
            }
            (ColumnData::Categorical { levels, values }, SimilarityConfig::GoodnessOfFit(params)) => {
                let present: Vec<u32> = members.iter().filter_map(|&j| values[j]).collect();
                if present.is_empty() {
                    0.0
                } else {
                    let mut modes = categorical_modes(values, *levels, assignments, num_clusters);
                    let mut counts = vec![0u64; *levels as usize];
                    for &x in &present {
                        counts[x as usize] += 1;
                    }
                    let best = counts.iter().enumerate().fold((0usize, 0u64), |acc, (lvl, &n)| {
                        if n > acc.1 { (lvl, n) } else { acc }
                    });
                    modes[cluster_index] = Some(best.0 as u32);
                    log_sim_gof_categorical(&present, &modes, cluster_index, params.gamma)?
                }
            }
        };
    }
    Ok(total)
}

fn column_has_observations(col: &CovariateColumn) -> bool {
    match &col.data {
        ColumnData::Continuous(values) => values.iter().any(Option::is_some),
        ColumnData::Categorical { values, .. } => values.iter().any(Option::is_some),
    }
}

/// Total log similarity of a whole partition: `Σ_c Σ_k log g_k` over the
/// clusters induced by `assignments`.
///
/// An empty cluster contributes the family's neutral value per observed
/// covariate: a unit factor for the augmented family (the marginal of no
/// observations) and `1/C` for the goodness-of-fit family (its
/// no-information value). The latter keeps a constant covariate's effect on
/// the label conditionals exactly neutral even when a move empties a
/// cluster.
pub fn log_similarity_partition(
    assignments: &[u16],
    covariates: &CovariateTable,
    num_clusters: usize,
    config: &SimilarityConfig,
) -> Result<f64> {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); num_clusters];
    for (j, &z) in assignments.iter().enumerate() {
        members[z as usize].push(j);
    }
    let mut total = 0.0;
    let mut empty_clusters = 0usize;
    for c in 0..num_clusters {
        if members[c].is_empty() {
            empty_clusters += 1;
        } else {
            total += log_similarity(&members[c], c, covariates, assignments, num_clusters, config)?;
        }
    }
    if empty_clusters > 0 {
        if let SimilarityConfig::GoodnessOfFit(_) = config {
            let active = covariates.columns().iter().filter(|c| column_has_observations(c)).count();
            total += (empty_clusters * active) as f64 * -(num_clusters as f64).ln();
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_one_continuous(values: Vec<Option<f64>>) -> CovariateTable {
        CovariateTable::new(
            values.len(),
            vec![CovariateColumn {
                name: "x".into(),
                data: ColumnData::Continuous(values),
            }],
        )
        .unwrap()
    }

    #[test]
    fn aug_continuous_single_value_at_prior_mean() {
        let hyper = ContinuousHyper { mu0: 0.7, sigma: 1.0, sigma0: 1.0 };
        let x = 0.7;
        let got = log_sim_aug_continuous(&[x], &hyper, AugContinuousVariant::PerObservation).unwrap();
        // σ̃² = 1/2, μ̃ = (x + μ₀)/2 = x.
        let tilde_var: f64 = 0.5;
        let mu_t = (x + hyper.mu0) / 2.0;
        let expect = 0.5 * tilde_var.ln() + 0.5 * (mu_t * mu_t / tilde_var - x * x);
        assert!((got - expect).abs() < 1e-12);
    }

    #[test]
    fn aug_continuous_identical_beats_spread() {
        let hyper = ContinuousHyper { mu0: 0.0, sigma: 1.0, sigma0: 10.0 };
        for variant in [AugContinuousVariant::PerObservation, AugContinuousVariant::PriorSplit] {
            let same = log_sim_aug_continuous(&[0.0, 0.0], &hyper, variant).unwrap();
            let spread = log_sim_aug_continuous(&[-3.0, 3.0], &hyper, variant).unwrap();
            assert!(same >= spread, "{variant:?}: {same} < {spread}");
        }
    }

    #[test]
    fn aug_continuous_empty_errors() {
        let hyper = ContinuousHyper { mu0: 0.0, sigma: 1.0, sigma0: 1.0 };
        assert!(log_sim_aug_continuous(&[], &hyper, AugContinuousVariant::PerObservation).is_err());
    }

    #[test]
    fn aug_categorical_values() {
        // B=2, φ=1: counts (1,0) → log(1/2).
        let got = log_sim_aug_categorical(&[1, 0], 1.0).unwrap();
        assert!((got - 0.5f64.ln()).abs() < 1e-12);
        // (2,0) → 1/3 beats (1,1) → 1/6.
        let homog = log_sim_aug_categorical(&[2, 0], 1.0).unwrap();
        let split = log_sim_aug_categorical(&[1, 1], 1.0).unwrap();
        assert!(((homog) - (1.0f64 / 3.0).ln()).abs() < 1e-12);
        assert!((split - (1.0f64 / 6.0).ln()).abs() < 1e-12);
        assert!(homog > split);
        assert!(log_sim_aug_categorical(&[0, 0], 1.0).is_err());
    }

    #[test]
    fn aug_categorical_label_permutation_invariant() {
        let a = log_sim_aug_categorical(&[3, 1, 2], 0.7).unwrap();
        let b = log_sim_aug_categorical(&[2, 3, 1], 0.7).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn aug_categorical_homogeneous_maximizes() {
        // For fixed total count M the one-level count vector maximizes the
        // similarity; exhaustive over M ≤ 6, B ≤ 3.
        fn enumerate(b: usize, m: u64) -> Vec<Vec<u64>> {
            if b == 1 {
                return vec![vec![m]];
            }
            let mut out = Vec::new();
            for first in 0..=m {
                for rest in enumerate(b - 1, m - first) {
                    let mut v = vec![first];
                    v.extend(rest);
                    out.push(v);
                }
            }
            out
        }
        for b in 2..=3usize {
            for m in 1..=6u64 {
                let best = (0..b)
                    .map(|lvl| {
                        let mut v = vec![0u64; b];
                        v[lvl] = m;
                        log_sim_aug_categorical(&v, 1.3).unwrap()
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                for counts in enumerate(b, m) {
                    let val = log_sim_aug_categorical(&counts, 1.3).unwrap();
                    assert!(val <= best + 1e-12, "counts {counts:?} beat homogeneous");
                }
            }
        }
    }

    #[test]
    fn gof_continuous_examples() {
        // Own centroid at the assessor, other centroid at distance 1/θ.
        let got = log_sim_gof_continuous(&[0.0], &[Some(0.0), Some(1.0)], 0, 1.0).unwrap();
        assert!((got - (2.0f64 / 3.0).ln()).abs() < 1e-12);
        // θ = 0 → g = 1/C regardless of the data.
        let got = log_sim_gof_continuous(&[4.2, -1.0], &[Some(0.0), Some(9.0), Some(2.0)], 1, 0.0).unwrap();
        assert!((got - (1.0f64 / 3.0).ln()).abs() < 1e-12);
        // Equidistant from all centroids → each summand 1/C.
        let got = log_sim_gof_continuous(&[0.0], &[Some(1.0), Some(-1.0)], 0, 2.0).unwrap();
        assert!((got - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn gof_categorical_examples() {
        // C=3, γ=1, matches own mode only → (1+1)/(3+1) = 1/2.
        let got = log_sim_gof_categorical(&[0], &[Some(0), Some(1), Some(2)], 0, 1.0).unwrap();
        assert!((got - 0.5f64.ln()).abs() < 1e-12);
        // γ = 0 → 1/C.
        let got = log_sim_gof_categorical(&[1, 0], &[Some(0), Some(1)], 0, 0.0).unwrap();
        assert!((got - 0.5f64.ln()).abs() < 1e-12);
        // Matches no mode at all → 1/(C + 0).
        let got = log_sim_gof_categorical(&[0], &[Some(1), Some(2), Some(1)], 0, 5.0).unwrap();
        assert!((got - (1.0f64 / 3.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn gof_values_bounded() {
        let centroids = [Some(0.0), Some(3.0), Some(-2.0)];
        for theta in [0.0, 0.5, 2.0] {
            for x in [-5.0, 0.0, 0.1, 7.0] {
                let lg = log_sim_gof_continuous(&[x], &centroids, 2, theta).unwrap();
                assert!(lg <= 1e-15, "log g = {lg} > 0");
            }
        }
    }

    #[test]
    fn modes_tie_breaks_to_smallest_label() {
        let values = vec![Some(2u32), Some(0), Some(0), Some(2)];
        let modes = categorical_modes(&values, 3, &[0, 0, 0, 0], 1);
        assert_eq!(modes, vec![Some(0)]);
    }

    #[test]
    fn empty_cluster_centroid_is_none() {
        let values = vec![Some(1.0), None];
        let cents = continuous_centroids(&values, &[0, 0], 2);
        assert_eq!(cents, vec![Some(1.0), None]);
    }

    #[test]
    fn log_similarity_no_covariates_is_zero() {
        let table = CovariateTable::empty(3);
        let config = SimilarityConfig::GoodnessOfFit(GofSimParams::new(1.0, 1.0).unwrap());
        let got = log_similarity(&[0, 1], 0, &table, &[0, 0, 1], 2, &config).unwrap();
        assert_eq!(got, 0.0);
    }

    #[test]
    fn nuisance_covariate_contributes_inverse_c() {
        // A constant column multiplies the goodness-of-fit similarity by
        // exactly 1/C for every cluster.
        let table = table_one_continuous(vec![Some(5.0); 6]);
        let config = SimilarityConfig::GoodnessOfFit(GofSimParams::new(1.7, 1.0).unwrap());
        let z = [0u16, 0, 1, 1, 2, 2];
        for c in 0..3usize {
            let members: Vec<usize> = (0..6).filter(|&j| z[j] as usize == c).collect();
            let got = log_similarity(&members, c, &table, &z, 3, &config).unwrap();
            assert!((got - (1.0f64 / 3.0).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn member_order_irrelevant() {
        let table = table_one_continuous(vec![Some(1.0), Some(2.0), Some(4.0), Some(0.5)]);
        let z = [0u16, 0, 0, 1];
        let params = AugmentedSimParams::derive(0.5, 10.0, 1.0, &table).unwrap();
        let config = SimilarityConfig::Augmented(params);
        let a = log_similarity(&[0, 1, 2], 0, &table, &z, 2, &config).unwrap();
        let b = log_similarity(&[2, 0, 1], 0, &table, &z, 2, &config).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());

        let config = SimilarityConfig::GoodnessOfFit(GofSimParams::new(1.0, 1.0).unwrap());
        let a = log_similarity(&[0, 1, 2], 0, &table, &z, 2, &config).unwrap();
        let b = log_similarity(&[1, 2, 0], 0, &table, &z, 2, &config).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn degenerate_column_skipped_for_augmented() {
        let table = table_one_continuous(vec![Some(2.0); 4]);
        let params = AugmentedSimParams::derive(0.5, 10.0, 1.0, &table).unwrap();
        assert!(params.column_hyper(0).is_none());
        let config = SimilarityConfig::Augmented(params);
        let got = log_similarity(&[0, 1], 0, &table, &[0, 0, 1, 1], 2, &config).unwrap();
        assert_eq!(got, 0.0);
    }

    #[test]
    fn all_missing_column_contributes_zero() {
        let table = table_one_continuous(vec![None, None, None]);
        for config in [
            SimilarityConfig::GoodnessOfFit(GofSimParams::new(1.0, 1.0).unwrap()),
            SimilarityConfig::Augmented(AugmentedSimParams::derive(0.5, 10.0, 1.0, &table).unwrap()),
        ] {
            let got = log_similarity(&[0, 1, 2], 0, &table, &[0, 0, 0], 2, &config).unwrap();
            assert_eq!(got, 0.0);
        }
    }

    #[test]
    fn categorical_range_validation() {
        let err = CovariateTable::new(
            2,
            vec![CovariateColumn {
                name: "c".into(),
                data: ColumnData::Categorical { levels: 3, values: vec![Some(5), Some(0)] },
            }],
        );
        assert!(err.is_err());
    }

    #[test]
    fn partition_similarity_sums_clusters() {
        let table = table_one_continuous(vec![Some(0.0), Some(0.1), Some(5.0), Some(5.2)]);
        let config = SimilarityConfig::GoodnessOfFit(GofSimParams::new(1.0, 1.0).unwrap());
        let z = [0u16, 0, 1, 1];
        let total = log_similarity_partition(&z, &table, 2, &config).unwrap();
        let a = log_similarity(&[0, 1], 0, &table, &z, 2, &config).unwrap();
        let b = log_similarity(&[2, 3], 1, &table, &z, 2, &config).unwrap();
        assert!((total - (a + b)).abs() < 1e-15);
    }
}
