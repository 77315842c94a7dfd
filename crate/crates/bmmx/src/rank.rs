//! Permutations, rank distances, partial rankings, and the leap-and-shift
//! proposal kernel.
//!
//! Rankings are 1-based rank vectors: entry `i` holds the rank given to item
//! `i+1`. All distances here are right-invariant, which is what makes the
//! Mallows normalizing constant independent of the consensus ranking.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use std::str::FromStr;

/// A complete ranking of `n` items (a permutation of `{1, …, n}`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ranking {
    ranks: Vec<u16>,
}

impl Ranking {
    /// Validates that `ranks` is a permutation of `{1, …, n}` with `n ≥ 1`.
    pub fn new(ranks: Vec<u16>) -> Result<Self> {
        let n = ranks.len();
        if n == 0 {
            return Err(Error::InvalidRanking("empty ranking".into()));
        }
        if n > u16::MAX as usize {
            return Err(Error::InvalidRanking(format!("n = {n} too large")));
        }
        let mut seen = vec![false; n];
        for (i, &r) in ranks.iter().enumerate() {
            if r < 1 || r as usize > n {
                return Err(Error::InvalidRanking(format!(
                    "rank {r} out of range 1..={n} at item {}",
                    i + 1
                )));
            }
            if seen[r as usize - 1] {
                return Err(Error::InvalidRanking(format!("duplicate rank {r}")));
            }
            seen[r as usize - 1] = true;
        }
        Ok(Self { ranks })
    }

    /// The identity ranking `(1, 2, …, n)`.
    pub fn identity(n: usize) -> Self {
        Self {
            ranks: (1..=n as u16).collect(),
        }
    }

    pub(crate) fn from_vec_unchecked(ranks: Vec<u16>) -> Self {
        debug_assert!(Self::new(ranks.clone()).is_ok());
        Self { ranks }
    }

    pub fn n(&self) -> usize {
        self.ranks.len()
    }

    pub fn ranks(&self) -> &[u16] {
        &self.ranks
    }

    /// Rank of the 0-based item index.
    pub fn rank_of(&self, item: usize) -> u16 {
        self.ranks[item]
    }

    /// Inverse permutation: entry `r` holds the (1-based) item at rank `r+1`.
    pub fn inverse(&self) -> Ranking {
        let mut inv = vec![0u16; self.n()];
        for (item, &r) in self.ranks.iter().enumerate() {
            inv[r as usize - 1] = item as u16 + 1;
        }
        Ranking { ranks: inv }
    }

    /// Function composition `self ∘ other`: `result(i) = self(other(i))`.
    pub fn compose(&self, other: &Ranking) -> Ranking {
        let ranks = other
            .ranks
            .iter()
            .map(|&r| self.ranks[r as usize - 1])
            .collect();
        Ranking { ranks }
    }
}

/// A partially observed ranking: per item, either its rank or nothing.
///
/// The constraint a completion must satisfy is purely relational: observed
/// items keep their mutual order, everything else is free.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialRanking {
    observed: Vec<Option<u16>>,
    n_obs: usize,
}

impl PartialRanking {
    /// Present values must be distinct integers in `{1, …, n}`.
    pub fn new(observed: Vec<Option<u16>>) -> Result<Self> {
        let n = observed.len();
        if n == 0 {
            return Err(Error::InvalidRanking("empty partial ranking".into()));
        }
        let mut seen = vec![false; n];
        let mut n_obs = 0;
        for (i, v) in observed.iter().enumerate() {
            if let Some(r) = v {
                let r = *r;
                if r < 1 || r as usize > n {
                    return Err(Error::InvalidRanking(format!(
                        "rank {r} out of range 1..={n} at item {}",
                        i + 1
                    )));
                }
                if seen[r as usize - 1] {
                    return Err(Error::InvalidRanking(format!("duplicate rank {r}")));
                }
                seen[r as usize - 1] = true;
                n_obs += 1;
            }
        }
        Ok(Self { observed, n_obs })
    }

    pub fn from_complete(r: &Ranking) -> Self {
        Self {
            observed: r.ranks().iter().map(|&x| Some(x)).collect(),
            n_obs: r.n(),
        }
    }

    pub fn n(&self) -> usize {
        self.observed.len()
    }

    pub fn n_obs(&self) -> usize {
        self.n_obs
    }

    pub fn observed(&self) -> &[Option<u16>] {
        &self.observed
    }

    pub fn is_complete(&self) -> bool {
        self.n_obs == self.n()
    }

    /// 0-based item indices of the observed items, sorted by observed rank.
    pub fn items_in_rank_order(&self) -> Vec<usize> {
        let mut items: Vec<usize> = (0..self.n()).filter(|&i| self.observed[i].is_some()).collect();
        items.sort_by_key(|&i| self.observed[i].unwrap());
        items
    }
}

/// Right-invariant distance on rank vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DistanceMetric {
    /// `Σ |a_i − b_i|`, the ℓ¹ displacement. Always even.
    Footrule,
    /// Number of discordant item pairs.
    Kendall,
    /// `Σ (a_i − b_i)²`, the squared displacement sum (no normalization).
    Spearman,
}

impl DistanceMetric {
    pub fn name(&self) -> &'static str {
        match self {
            DistanceMetric::Footrule => "footrule",
            DistanceMetric::Kendall => "kendall",
            DistanceMetric::Spearman => "spearman",
        }
    }

    /// Maximum attainable distance at dimension `n` (used for table sanity).
    pub fn max_distance(&self, n: usize) -> u64 {
        let n = n as u64;
        match self {
            DistanceMetric::Footrule => (n * n) / 2,
            DistanceMetric::Kendall => n * (n - 1) / 2,
            DistanceMetric::Spearman => n * (n * n - 1) / 3,
        }
    }
}

impl FromStr for DistanceMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "footrule" => Ok(DistanceMetric::Footrule),
            "kendall" => Ok(DistanceMetric::Kendall),
            "spearman" => Ok(DistanceMetric::Spearman),
            other => Err(Error::InvalidParam(format!(
                "unknown distance metric '{other}' (expected footrule, kendall or spearman)"
            ))),
        }
    }
}

impl std::fmt::Display for DistanceMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn distance_unchecked(a: &[u16], b: &[u16], metric: DistanceMetric) -> u64 {
    match metric {
        DistanceMetric::Footrule => a
            .iter()
            .zip(b)
            .map(|(&x, &y)| (x as i64 - y as i64).unsigned_abs())
            .sum(),
        DistanceMetric::Spearman => a
            .iter()
            .zip(b)
            .map(|(&x, &y)| {
                let d = x as i64 - y as i64;
                (d * d) as u64
            })
            .sum(),
        DistanceMetric::Kendall => {
            let n = a.len();
            let mut discordant = 0u64;
            for i in 0..n {
                for j in (i + 1)..n {
                    let da = a[i] as i64 - a[j] as i64;
                    let db = b[i] as i64 - b[j] as i64;
                    if da * db < 0 {
                        discordant += 1;
                    }
                }
            }
            discordant
        }
    }
}

/// Distance between two rankings of the same dimension.
pub fn distance(a: &Ranking, b: &Ranking, metric: DistanceMetric) -> Result<u64> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    Ok(distance_unchecked(a.ranks(), b.ranks(), metric))
}

/// Test helper: does `d(a, b) = d(a ∘ b⁻¹, identity)` hold?
pub fn right_invariance_check(a: &Ranking, b: &Ranking, metric: DistanceMetric) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    let relative = a.compose(&b.inverse());
    let id = Ranking::identity(a.n());
    Ok(distance(a, b, metric)? == distance(&relative, &id, metric)?)
}

/// Leap-and-shift proposal parameters: the moved item's new rank is drawn
/// within `±leap` of its current rank, and displaced items shift by one.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LeapAndShiftParams {
    leap: usize,
}

impl LeapAndShiftParams {
    pub fn new(leap: usize) -> Result<Self> {
        if leap == 0 {
            return Err(Error::InvalidParam("leap size must be ≥ 1".into()));
        }
        Ok(Self { leap })
    }

    pub fn leap(&self) -> usize {
        self.leap
    }

    pub(crate) fn validate_for(&self, n: usize) -> Result<()> {
        if n < 2 || self.leap > n - 1 {
            return Err(Error::InvalidParam(format!(
                "leap size {} requires 1 ≤ leap ≤ n−1 (n = {n})",
                self.leap
            )));
        }
        Ok(())
    }
}

/// Window of candidate new ranks for an item currently at `rank` (1-based),
/// excluding the current rank itself. Returns (lo, hi) inclusive.
fn leap_window(rank: u16, leap: usize, n: usize) -> (u16, u16) {
    let lo = if rank as usize > leap { rank - leap as u16 } else { 1 };
    let hi = ((rank as usize + leap).min(n)) as u16;
    (lo, hi)
}

fn window_size(rank: u16, leap: usize, n: usize) -> usize {
    let (lo, hi) = leap_window(rank, leap, n);
    (hi - lo) as usize // inclusive span minus excluded current rank
}

/// Move item `item` (0-based) to `new_rank`, shifting displaced items by one
/// toward the vacated slot.
fn apply_move(ranks: &[u16], item: usize, new_rank: u16) -> Vec<u16> {
    let old_rank = ranks[item];
    let mut out = ranks.to_vec();
    if new_rank == old_rank {
        return out;
    }
    for (j, r) in out.iter_mut().enumerate() {
        if j == item {
            *r = new_rank;
        } else if old_rank < new_rank && *r > old_rank && *r <= new_rank {
            *r -= 1;
        } else if new_rank < old_rank && *r >= new_rank && *r < old_rank {
            *r += 1;
        }
    }
    out
}

/// Transition probability mass `P_l(to | from)` of the leap-and-shift kernel,
/// summed over all generating moves, returned as a log (−∞ if unreachable).
pub fn leap_and_shift_log_pmf(
    from: &Ranking,
    to: &Ranking,
    params: &LeapAndShiftParams,
) -> Result<f64> {
    if from.n() != to.n() {
        return Err(Error::DimensionMismatch {
            expected: from.n(),
            got: to.n(),
        });
    }
    params.validate_for(from.n())?;
    let n = from.n();
    let mut p = 0.0;
    for item in 0..n {
        let cur = from.ranks()[item];
        let (lo, hi) = leap_window(cur, params.leap(), n);
        let support = window_size(cur, params.leap(), n) as f64;
        for new_rank in lo..=hi {
            if new_rank == cur {
                continue;
            }
            if apply_move(from.ranks(), item, new_rank) == to.ranks() {
                p += 1.0 / (n as f64 * support);
            }
        }
    }
    Ok(if p > 0.0 { p.ln() } else { f64::NEG_INFINITY })
}

/// All distinct states reachable in one leap-and-shift move, with their
/// transition probabilities. Probabilities sum to 1 over the returned set.
pub fn leap_and_shift_transitions(
    from: &Ranking,
    params: &LeapAndShiftParams,
) -> Result<Vec<(Ranking, f64)>> {
    params.validate_for(from.n())?;
    let n = from.n();
    let mut acc: Vec<(Vec<u16>, f64)> = Vec::new();
    for item in 0..n {
        let cur = from.ranks()[item];
        let (lo, hi) = leap_window(cur, params.leap(), n);
        let support = window_size(cur, params.leap(), n) as f64;
        for new_rank in lo..=hi {
            if new_rank == cur {
                continue;
            }
            let target = apply_move(from.ranks(), item, new_rank);
            let p = 1.0 / (n as f64 * support);
            match acc.iter_mut().find(|(t, _)| *t == target) {
                Some((_, q)) => *q += p,
                None => acc.push((target, p)),
            }
        }
    }
    Ok(acc
        .into_iter()
        .map(|(t, p)| (Ranking::from_vec_unchecked(t), p))
        .collect())
}

/// Draw a leap-and-shift proposal. Returns the proposal together with the
/// log forward and log backward transition probabilities.
pub fn leap_and_shift_propose<R: Rng + ?Sized>(
    rho: &Ranking,
    params: &LeapAndShiftParams,
    rng: &mut R,
) -> Result<(Ranking, f64, f64)> {
    params.validate_for(rho.n())?;
    let n = rho.n();
    let item = rng.random_range(0..n);
    let cur = rho.ranks()[item];
    let (lo, hi) = leap_window(cur, params.leap(), n);
    // Uniform over the window minus the current rank.
    let span = (hi - lo) as u32; // number of candidates
    let mut new_rank = lo + rng.random_range(0..span) as u16;
    if new_rank >= cur {
        new_rank += 1;
    }
    let proposal = Ranking::from_vec_unchecked(apply_move(rho.ranks(), item, new_rank));
    let forward = leap_and_shift_log_pmf(rho, &proposal, params)?;
    let backward = leap_and_shift_log_pmf(&proposal, rho, params)?;
    Ok((proposal, forward, backward))
}

/// Is `full` a valid completion of `pr` (observed items keep their order)?
pub fn consistent(full: &Ranking, pr: &PartialRanking) -> Result<bool> {
    if full.n() != pr.n() {
        return Err(Error::DimensionMismatch {
            expected: full.n(),
            got: pr.n(),
        });
    }
    let items = pr.items_in_rank_order();
    Ok(items.windows(2).all(|w| full.rank_of(w[0]) < full.rank_of(w[1])))
}

/// Sample uniformly among the completions of `pr`.
///
/// A uniform permutation is drawn and the ranks it gives to the observed
/// items are reassigned, in ascending order, along the observed item order.
/// Every completion corresponds to the same number of raw permutations, so
/// the result is uniform on the constraint set.
pub fn uniform_completion<R: Rng + ?Sized>(pr: &PartialRanking, rng: &mut R) -> Ranking {
    let n = pr.n();
    let mut raw: Vec<u16> = (1..=n as u16).collect();
    raw.shuffle(rng);
    let items = pr.items_in_rank_order();
    if items.is_empty() {
        return Ranking::from_vec_unchecked(raw);
    }
    let mut obs_ranks: Vec<u16> = items.iter().map(|&i| raw[i]).collect();
    obs_ranks.sort_unstable();
    for (&item, &r) in items.iter().zip(obs_ranks.iter()) {
        raw[item] = r;
    }
    Ranking::from_vec_unchecked(raw)
}

/// Visit every permutation of `{1, …, n}` (Heap's algorithm).
pub fn for_each_permutation<F: FnMut(&[u16])>(n: usize, mut f: F) {
    assert!(n >= 1, "n must be ≥ 1");
    let mut a: Vec<u16> = (1..=n as u16).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// All `n!` rankings; intended for small `n` (tests and exact oracles).
pub fn all_permutations(n: usize) -> Vec<Ranking> {
    let mut out = Vec::new();
    for_each_permutation(n, |p| out.push(Ranking::from_vec_unchecked(p.to_vec())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_for;
    use std::collections::{HashMap, HashSet, VecDeque};

    fn r(v: &[u16]) -> Ranking {
        Ranking::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ranking_validation() {
        assert!(Ranking::new(vec![]).is_err());
        assert!(Ranking::new(vec![1, 1, 2]).is_err());
        assert!(Ranking::new(vec![0, 1, 2]).is_err());
        assert!(Ranking::new(vec![1, 2, 4]).is_err());
        assert!(Ranking::new(vec![3, 1, 2]).is_ok());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&r(&[1, 2, 3]), &r(&[1, 2, 3]), DistanceMetric::Footrule).unwrap(), 0);
        assert_eq!(distance(&r(&[1, 2, 3]), &r(&[3, 2, 1]), DistanceMetric::Footrule).unwrap(), 4);
        assert_eq!(distance(&r(&[1, 2, 3]), &r(&[2, 1, 3]), DistanceMetric::Kendall).unwrap(), 1);
        assert_eq!(distance(&r(&[1, 2, 3]), &r(&[3, 2, 1]), DistanceMetric::Spearman).unwrap(), 8);
    }

    #[test]
    fn distance_dimension_mismatch() {
        let e = distance(&r(&[1, 2]), &r(&[1, 2, 3]), DistanceMetric::Footrule);
        assert!(e.is_err());
    }

    #[test]
    fn metric_axioms_exhaustive() {
        // Symmetry, identity of indiscernibles and (footrule/Kendall)
        // triangle inequality over all pairs/triples for n ≤ 4, plus n = 5
        // for the pairwise checks.
        for n in 2..=4usize {
            let perms = all_permutations(n);
            for metric in [DistanceMetric::Footrule, DistanceMetric::Kendall, DistanceMetric::Spearman] {
                let m = perms.len();
                let mut d = vec![vec![0u64; m]; m];
                for i in 0..m {
                    for j in 0..m {
                        d[i][j] = distance(&perms[i], &perms[j], metric).unwrap();
                    }
                }
                for i in 0..m {
                    for j in 0..m {
                        assert_eq!(d[i][j], d[j][i]);
                        assert_eq!(d[i][j] == 0, i == j);
                    }
                }
                if matches!(metric, DistanceMetric::Footrule | DistanceMetric::Kendall) {
                    for i in 0..m {
                        for j in 0..m {
                            for k in 0..m {
                                assert!(d[i][k] <= d[i][j] + d[j][k]);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn triangle_inequality_n5() {
        let perms = all_permutations(5);
        let m = perms.len();
        for metric in [DistanceMetric::Footrule, DistanceMetric::Kendall] {
            let mut d = vec![vec![0u16; m]; m];
            for i in 0..m {
                for j in 0..m {
                    d[i][j] = distance(&perms[i], &perms[j], metric).unwrap() as u16;
                }
            }
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        assert!(d[i][k] <= d[i][j] + d[j][k]);
                    }
                }
            }
        }
    }

    #[test]
    fn right_invariance_exhaustive() {
        for n in 1..=5usize {
            let perms = all_permutations(n);
            for metric in [DistanceMetric::Footrule, DistanceMetric::Kendall, DistanceMetric::Spearman] {
                for a in &perms {
                    for b in &perms {
                        assert!(right_invariance_check(a, b, metric).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn right_invariance_small_example() {
        assert!(right_invariance_check(&r(&[2, 1]), &r(&[1, 2]), DistanceMetric::Footrule).unwrap());
    }

    #[test]
    fn leap_and_shift_n2_unique_move() {
        let params = LeapAndShiftParams::new(1).unwrap();
        let rho = r(&[1, 2]);
        let mut rng = rng_for(1, 0);
        let (prop, fwd, bwd) = leap_and_shift_propose(&rho, &params, &mut rng).unwrap();
        assert_eq!(prop, r(&[2, 1]));
        assert_eq!(fwd, bwd);
    }

    #[test]
    fn leap_and_shift_rows_sum_and_symmetry() {
        for n in 2..=6usize {
            for leap in 1..=3usize.min(n - 1) {
                let params = LeapAndShiftParams::new(leap).unwrap();
                let perms = all_permutations(n);
                let mut maps: HashMap<&Ranking, HashMap<Ranking, f64>> = HashMap::new();
                for p in &perms {
                    let trans = leap_and_shift_transitions(p, &params).unwrap();
                    let total: f64 = trans.iter().map(|(_, q)| q).sum();
                    assert!((total - 1.0).abs() < 1e-12, "row sum {total} at n={n} l={leap}");
                    maps.insert(p, trans.into_iter().collect());
                }
                // Support symmetry and pmf/transition-table consistency.
                for p in &perms {
                    for (t, q) in &maps[p] {
                        assert!(maps[t].contains_key(p), "support not symmetric");
                        let lp = leap_and_shift_log_pmf(p, t, &params).unwrap();
                        assert!((lp - q.ln()).abs() < 1e-12);
                    }
                }
                // Unreachable states report −∞.
                for p in &perms {
                    for t in &perms {
                        if t != p && !maps[p].contains_key(t) {
                            assert_eq!(
                                leap_and_shift_log_pmf(p, t, &params).unwrap(),
                                f64::NEG_INFINITY
                            );
                        }
                    }
                }
                // Irreducibility: every state reachable from the identity.
                let start = Ranking::identity(n);
                let mut seen: HashSet<Ranking> = HashSet::new();
                let mut queue = VecDeque::new();
                seen.insert(start.clone());
                queue.push_back(start);
                while let Some(s) = queue.pop_front() {
                    for (t, _) in &maps[&s] {
                        if seen.insert(t.clone()) {
                            queue.push_back(t.clone());
                        }
                    }
                }
                assert_eq!(seen.len(), perms.len(), "chain not irreducible at n={n} l={leap}");
            }
        }
    }

    #[test]
    fn leap_and_shift_n3_total_probability() {
        let params = LeapAndShiftParams::new(1).unwrap();
        let total: f64 = leap_and_shift_transitions(&r(&[1, 2, 3]), &params)
            .unwrap()
            .iter()
            .map(|(_, p)| p)
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn proposal_never_returns_current_state() {
        let params = LeapAndShiftParams::new(2).unwrap();
        let rho = r(&[3, 1, 4, 2, 5]);
        let mut rng = rng_for(2, 0);
        for _ in 0..200 {
            let (p, fwd, bwd) = leap_and_shift_propose(&rho, &params, &mut rng).unwrap();
            assert_ne!(p, rho);
            assert!(fwd.is_finite() && bwd.is_finite());
        }
    }

    #[test]
    fn partial_ranking_validation() {
        assert!(PartialRanking::new(vec![Some(1), None, Some(1)]).is_err());
        assert!(PartialRanking::new(vec![Some(4), None, None]).is_err());
        let pr = PartialRanking::new(vec![Some(2), None, Some(1)]).unwrap();
        assert_eq!(pr.n_obs(), 2);
        assert_eq!(pr.items_in_rank_order(), vec![2, 0]);
    }

    #[test]
    fn consistent_examples() {
        let full = r(&[1, 2, 3]);
        let pr_same = PartialRanking::from_complete(&full);
        assert!(consistent(&full, &pr_same).unwrap());

        // pr orders item1 before item2; full reverses them.
        let pr = PartialRanking::new(vec![Some(1), Some(2), None]).unwrap();
        let reversed = r(&[2, 1, 3]);
        assert!(!consistent(&reversed, &pr).unwrap());

        let empty = PartialRanking::new(vec![None, None, None]).unwrap();
        assert!(consistent(&r(&[3, 1, 2]), &empty).unwrap());
    }

    #[test]
    fn uniform_completion_fully_observed() {
        let full = r(&[2, 3, 1]);
        let pr = PartialRanking::from_complete(&full);
        let mut rng = rng_for(3, 0);
        for _ in 0..10 {
            assert_eq!(uniform_completion(&pr, &mut rng), full);
        }
    }

    #[test]
    fn uniform_completion_uniform_over_constraint_set() {
        // n=3, item2 before item3, item1 free: exactly 3 completions.
        let pr = PartialRanking::new(vec![None, Some(1), Some(2)]).unwrap();
        let mut rng = rng_for(4, 0);
        let mut counts: HashMap<Ranking, u64> = HashMap::new();
        let draws = 10_000;
        for _ in 0..draws {
            let c = uniform_completion(&pr, &mut rng);
            assert!(consistent(&c, &pr).unwrap());
            *counts.entry(c).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 3);
        // Chi-square with 2 degrees of freedom; 13.8 is the 0.999 quantile.
        let expected = draws as f64 / 3.0;
        let chi2: f64 = counts.values().map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        }).sum();
        assert!(chi2 < 13.8, "chi-square {chi2}");
    }

    #[test]
    fn uniform_completion_unconstrained_covers_all() {
        let pr = PartialRanking::new(vec![None, None, None]).unwrap();
        let mut rng = rng_for(5, 0);
        let mut seen = HashSet::new();
        for _ in 0..2000 {
            seen.insert(uniform_completion(&pr, &mut rng));
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn permutation_enumeration_counts() {
        for (n, fact) in [(1usize, 1usize), (2, 2), (3, 6), (4, 24), (5, 120)] {
            assert_eq!(all_permutations(n).len(), fact);
        }
        let set: HashSet<Ranking> = all_permutations(4).into_iter().collect();
        assert_eq!(set.len(), 24);
    }
}
