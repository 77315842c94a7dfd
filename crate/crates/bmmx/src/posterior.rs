//! Chain summarization: assignment probabilities, MAP clustering,
//! within-cluster distance traces, top-k membership probabilities, the
//! cumulative-probability consensus ordering, and contingency tables.
//!
//! Summaries operate on raw chains; no relabeling is applied, so cluster
//! identities across independent runs are only comparable up to label
//! switching.

use crate::error::{Error, Result};
use crate::rank::{distance_unchecked, DistanceMetric, Ranking};
use crate::sampler::PosteriorSamples;

/// N × C matrix of posterior assignment probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct AssignmentMatrix {
    probs: Vec<Vec<f64>>,
}

impl AssignmentMatrix {
    pub fn num_assessors(&self) -> usize {
        self.probs.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.probs.first().map_or(0, |r| r.len())
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.probs
    }

    pub fn prob(&self, assessor: usize, cluster: usize) -> f64 {
        self.probs[assessor][cluster]
    }
}

/// Per-assessor fractions of retained iterations spent in each cluster.
pub fn assignment_probs(samples: &PosteriorSamples) -> Result<AssignmentMatrix> {
    let total = samples.num_records();
    if total == 0 {
        return Err(Error::EmptyInput("no retained samples".into()));
    }
    let mut counts = vec![vec![0u64; samples.num_clusters]; samples.num_assessors];
    for rec in samples.records() {
        for (j, &z) in rec.z.iter().enumerate() {
            counts[j][z as usize] += 1;
        }
    }
    let probs = counts
        .into_iter()
        .map(|row| row.into_iter().map(|c| c as f64 / total as f64).collect())
        .collect();
    Ok(AssignmentMatrix { probs })
}

/// Per-assessor argmax of the assignment probabilities; ties break to the
/// smallest cluster index.
pub fn map_clustering(probs: &AssignmentMatrix) -> Vec<u16> {
    probs
        .rows()
        .iter()
        .map(|row| {
            let mut best = 0usize;
            for (c, &p) in row.iter().enumerate() {
                if p > row[best] {
                    best = c;
                }
            }
            best as u16
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElbowPoint {
    pub chain: u32,
    pub iteration: u64,
    pub distance: u64,
}

/// Posterior trace of the within-cluster distance sum
/// `Σ_c Σ_{j: z_j = c} d(R_j, ρ_c)`, one value per retained iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElbowStatistic {
    pub points: Vec<ElbowPoint>,
}

/// Computes the elbow trace. Complete rankings may be supplied explicitly;
/// partial-data chains use their stored augmented rankings instead.
pub fn elbow(
    samples: &PosteriorSamples,
    rankings: Option<&[Ranking]>,
    metric: DistanceMetric,
) -> Result<ElbowStatistic> {
    if samples.num_records() == 0 {
        return Err(Error::EmptyInput("no retained samples".into()));
    }
    if let Some(r) = rankings {
        if r.len() != samples.num_assessors {
            return Err(Error::DimensionMismatch {
                expected: samples.num_assessors,
                got: r.len(),
            });
        }
    }
    let mut points = Vec::with_capacity(samples.num_records());
    for chain in &samples.chains {
        for rec in &chain.records {
            let mut total = 0u64;
            for (j, &z) in rec.z.iter().enumerate() {
                let r: &[u16] = match (&rec.augmented, rankings) {
                    (Some(aug), _) => &aug[j],
                    (None, Some(rs)) => rs[j].ranks(),
                    (None, None) => {
                        return Err(Error::InvalidParam(
                            "complete rankings required for chains without augmented data".into(),
                        ))
                    }
                };
                total += distance_unchecked(r, &rec.rho[z as usize], metric);
            }
            points.push(ElbowPoint {
                chain: chain.chain_index,
                iteration: rec.iteration,
                distance: total,
            });
        }
    }
    Ok(ElbowStatistic { points })
}

/// Per cluster: every item with its posterior probability of being ranked
/// in the top `k` of the consensus, sorted by descending probability (ties
/// by item index). Items are 0-based.
pub fn top_k_probs(samples: &PosteriorSamples, k: usize) -> Result<Vec<Vec<(usize, f64)>>> {
    let total = samples.num_records();
    if total == 0 {
        return Err(Error::EmptyInput("no retained samples".into()));
    }
    if k > samples.n_items {
        return Err(Error::InvalidParam(format!(
            "k = {k} exceeds the number of items {}",
            samples.n_items
        )));
    }
    let mut counts = vec![vec![0u64; samples.n_items]; samples.num_clusters];
    for rec in samples.records() {
        for (c, rho) in rec.rho.iter().enumerate() {
            for (item, &rank) in rho.iter().enumerate() {
                if (rank as usize) <= k {
                    counts[c][item] += 1;
                }
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|row| {
            let mut items: Vec<(usize, f64)> = row
                .into_iter()
                .enumerate()
                .map(|(item, c)| (item, c as f64 / total as f64))
                .collect();
            items.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            items
        })
        .collect())
}

/// Cumulative-probability consensus ordering per cluster: rank 1 goes to the
/// item maximizing `P(ρ(item) ≤ 1)`; each later rank `r` goes to the
/// unassigned item maximizing `P(ρ(item) ≤ r)`, ties to the smallest item.
/// Returns, per cluster, the items (0-based) in consensus order.
pub fn cp_consensus(samples: &PosteriorSamples) -> Result<Vec<Vec<usize>>> {
    let total = samples.num_records();
    if total == 0 {
        return Err(Error::EmptyInput("no retained samples".into()));
    }
    let n = samples.n_items;
    // cum[c][item][r-1] = #records with rank(item) ≤ r.
    let mut cum = vec![vec![vec![0u64; n]; n]; samples.num_clusters];
    for rec in samples.records() {
        for (c, rho) in rec.rho.iter().enumerate() {
            for (item, &rank) in rho.iter().enumerate() {
                for r in (rank as usize - 1)..n {
                    cum[c][item][r] += 1;
                }
            }
        }
    }
    Ok(cum
        .into_iter()
        .map(|cluster| {
            let mut assigned = vec![false; n];
            let mut order = Vec::with_capacity(n);
            for r in 0..n {
                let mut best: Option<usize> = None;
                for item in 0..n {
                    if assigned[item] {
                        continue;
                    }
                    if best.is_none_or(|b| cluster[item][r] > cluster[b][r]) {
                        best = Some(item);
                    }
                }
                let chosen = best.expect("unassigned item exists");
                assigned[chosen] = true;
                order.push(chosen);
            }
            order
        })
        .collect())
}

/// Cross-tabulation of two labelings of the same assessors.
pub fn contingency(labels_a: &[u16], labels_b: &[u16]) -> Result<Vec<Vec<u64>>> {
    if labels_a.len() != labels_b.len() {
        return Err(Error::DimensionMismatch {
            expected: labels_a.len(),
            got: labels_b.len(),
        });
    }
    if labels_a.is_empty() {
        return Err(Error::EmptyInput("no labels".into()));
    }
    let ca = *labels_a.iter().max().unwrap() as usize + 1;
    let cb = *labels_b.iter().max().unwrap() as usize + 1;
    let mut table = vec![vec![0u64; cb]; ca];
    for (&a, &b) in labels_a.iter().zip(labels_b) {
        table[a as usize][b as usize] += 1;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{AcceptanceCounters, ChainSamples, SampleRecord};

    fn samples_from_records(
        n_items: usize,
        num_assessors: usize,
        num_clusters: usize,
        records: Vec<SampleRecord>,
    ) -> PosteriorSamples {
        PosteriorSamples {
            n_items,
            num_assessors,
            num_clusters,
            total_iterations: records.len(),
            burn_in: 0,
            requested_thin: 1,
            effective_thin: 1,
            seed: 0,
            config_tag: String::new(),
            has_augmented: false,
            chains: vec![ChainSamples {
                chain_index: 0,
                chain_seed: 0,
                records,
                accept: AcceptanceCounters::default(),
            }],
        }
    }

    fn record(iteration: u64, z: Vec<u16>, rho: Vec<Vec<u16>>) -> SampleRecord {
        let c = rho.len();
        SampleRecord {
            iteration,
            z,
            rho,
            alpha: vec![1.0; c],
            tau: vec![1.0 / c as f64; c],
            augmented: None,
        }
    }

    #[test]
    fn assignment_probs_constant_chain() {
        let recs = (0..4)
            .map(|i| record(i + 1, vec![1, 0], vec![vec![1, 2], vec![2, 1]]))
            .collect();
        let s = samples_from_records(2, 2, 2, recs);
        let m = assignment_probs(&s).unwrap();
        assert_eq!(m.rows()[0], vec![0.0, 1.0]);
        assert_eq!(m.rows()[1], vec![1.0, 0.0]);
        assert_eq!(map_clustering(&m), vec![1, 0]);
    }

    #[test]
    fn assignment_probs_alternating_chain() {
        let recs = vec![
            record(1, vec![0], vec![vec![1, 2], vec![1, 2]]),
            record(2, vec![1], vec![vec![1, 2], vec![1, 2]]),
        ];
        let s = samples_from_records(2, 1, 2, recs);
        let m = assignment_probs(&s).unwrap();
        assert_eq!(m.rows()[0], vec![0.5, 0.5]);
        // Tie breaks to the first cluster.
        assert_eq!(map_clustering(&m), vec![0]);
        let total: f64 = m.rows()[0].iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn map_always_achieves_row_max() {
        let recs = vec![
            record(1, vec![0, 2, 1], vec![vec![1, 2], vec![2, 1], vec![1, 2]]),
            record(2, vec![2, 2, 1], vec![vec![1, 2], vec![2, 1], vec![1, 2]]),
            record(3, vec![0, 0, 0], vec![vec![1, 2], vec![2, 1], vec![1, 2]]),
        ];
        let s = samples_from_records(2, 3, 3, recs);
        let m = assignment_probs(&s).unwrap();
        let labels = map_clustering(&m);
        for (j, &l) in labels.iter().enumerate() {
            let max = m.rows()[j].iter().cloned().fold(f64::MIN, f64::max);
            assert_eq!(m.prob(j, l as usize), max);
        }
    }

    #[test]
    fn elbow_examples() {
        let r = |v: &[u16]| Ranking::new(v.to_vec()).unwrap();
        // All members at their cluster consensus → 0.
        let recs = vec![record(1, vec![0, 1], vec![vec![1, 2, 3], vec![3, 2, 1]])];
        let s = samples_from_records(3, 2, 2, recs);
        let rankings = vec![r(&[1, 2, 3]), r(&[3, 2, 1])];
        let e = elbow(&s, Some(&rankings), DistanceMetric::Footrule).unwrap();
        assert_eq!(e.points[0].distance, 0);

        // C = 1, single iteration: plain distance sum.
        let recs = vec![record(1, vec![0, 0], vec![vec![1, 2, 3]])];
        let s = samples_from_records(3, 2, 1, recs);
        let rankings = vec![r(&[2, 1, 3]), r(&[3, 2, 1])];
        let e = elbow(&s, Some(&rankings), DistanceMetric::Footrule).unwrap();
        assert_eq!(e.points[0].distance, 2 + 4);
    }

    #[test]
    fn elbow_requires_some_ranking_source() {
        let recs = vec![record(1, vec![0], vec![vec![1, 2]])];
        let s = samples_from_records(2, 1, 1, recs);
        assert!(elbow(&s, None, DistanceMetric::Footrule).is_err());
    }

    #[test]
    fn top_k_behavior() {
        // Constant chain: probabilities are indicators.
        let recs = (0..3)
            .map(|i| record(i + 1, vec![0], vec![vec![2, 1, 3]]))
            .collect();
        let s = samples_from_records(3, 1, 1, recs);
        let tk = top_k_probs(&s, 1).unwrap();
        assert_eq!(tk[0][0], (1, 1.0)); // item 2 holds rank 1
        assert_eq!(tk[0][1].1, 0.0);

        // k = n: everything 1.
        let tk = top_k_probs(&s, 3).unwrap();
        assert!(tk[0].iter().all(|&(_, p)| p == 1.0));

        // Two-state chain: item in top-k half the time → 0.5.
        let recs = vec![
            record(1, vec![0], vec![vec![1, 2, 3]]),
            record(2, vec![0], vec![vec![2, 1, 3]]),
        ];
        let s = samples_from_records(3, 1, 1, recs);
        let tk = top_k_probs(&s, 1).unwrap();
        let p_item0 = tk[0].iter().find(|&&(i, _)| i == 0).unwrap().1;
        assert_eq!(p_item0, 0.5);

        // Monotone in k.
        let recs = vec![
            record(1, vec![0], vec![vec![3, 1, 2]]),
            record(2, vec![0], vec![vec![1, 3, 2]]),
            record(3, vec![0], vec![vec![2, 3, 1]]),
        ];
        let s = samples_from_records(3, 1, 1, recs);
        for item in 0..3 {
            let mut prev = 0.0;
            for k in 1..=3 {
                let tk = top_k_probs(&s, k).unwrap();
                let p = tk[0].iter().find(|&&(i, _)| i == item).unwrap().1;
                assert!(p >= prev);
                prev = p;
            }
        }
    }

    #[test]
    fn cp_consensus_behavior() {
        // Constant chain reproduces the fixed ordering.
        let recs = (0..5)
            .map(|i| record(i + 1, vec![0], vec![vec![2, 3, 1]]))
            .collect();
        let s = samples_from_records(3, 1, 1, recs);
        let cp = cp_consensus(&s).unwrap();
        assert_eq!(cp[0], vec![2, 0, 1]); // ranks: item3=1, item1=2, item2=3

        // A dominant state (80% of mass) dictates the consensus.
        let mut recs: Vec<SampleRecord> = (0..8)
            .map(|i| record(i + 1, vec![0], vec![vec![1, 2, 3]]))
            .collect();
        recs.push(record(9, vec![0], vec![vec![3, 2, 1]]));
        recs.push(record(10, vec![0], vec![vec![3, 2, 1]]));
        let s = samples_from_records(3, 1, 1, recs);
        let cp = cp_consensus(&s).unwrap();
        assert_eq!(cp[0], vec![0, 1, 2]);

        // Output is always a permutation of the items.
        let recs = vec![
            record(1, vec![0], vec![vec![2, 1, 3]]),
            record(2, vec![0], vec![vec![3, 2, 1]]),
            record(3, vec![0], vec![vec![1, 3, 2]]),
        ];
        let s = samples_from_records(3, 1, 1, recs);
        let mut cp = cp_consensus(&s).unwrap().remove(0);
        cp.sort_unstable();
        assert_eq!(cp, vec![0, 1, 2]);
    }

    #[test]
    fn contingency_examples() {
        let a = [0u16, 0, 1, 1];
        let t = contingency(&a, &a).unwrap();
        assert_eq!(t, vec![vec![2, 0], vec![0, 2]]);

        let b = [0u16, 1, 1, 0];
        let t_ab = contingency(&a, &b).unwrap();
        let total: u64 = t_ab.iter().flatten().sum();
        assert_eq!(total, 4);
        let t_ba = contingency(&b, &a).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(t_ab[i][j], t_ba[j][i]);
            }
        }
        assert!(contingency(&a, &[0u16]).is_err());
    }
}
