//! The Mallows normalizing constant `Z_n(α) = Σ_R exp{−(α/n) d(R, ρ)}`.
//!
//! For right-invariant distances the constant does not depend on the
//! consensus ranking, so it reduces to a sum over the distance distribution
//! `N_n(d)` of permutations relative to the identity. Three evaluation
//! routes are provided: a closed form (Kendall), exact enumeration (small
//! `n`), and a Monte Carlo grid estimate with imported-table support for
//! everything else.

use crate::error::{Error, Result};
use crate::rank::{distance_unchecked, for_each_permutation, DistanceMetric};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;

/// Default cap on exact enumeration; configurable up to [`ENUMERATION_HARD_CAP`].
pub const DEFAULT_ENUMERATION_CAP: usize = 8;
/// Hard cap: `10! = 3 628 800` permutations is the most we will enumerate.
pub const ENUMERATION_HARD_CAP: usize = 10;

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub(crate) fn log_sum_exp<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let v: Vec<f64> = terms.into_iter().collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Counts `N_n(d)` of permutations at each distance from the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceFrequencyTable {
    n: usize,
    metric: DistanceMetric,
    counts: BTreeMap<u64, BigUint>,
    /// `(d, ln N_n(d))` pairs, ascending in `d`.
    log_counts: Vec<(u64, f64)>,
}

impl DistanceFrequencyTable {
    /// Builds a table from raw counts, checking all invariants:
    /// counts positive, `N(0) = 1`, `Σ_d N(d) = n!`, distances within the
    /// metric's range, and footrule distances even.
    pub fn from_counts(
        n: usize,
        metric: DistanceMetric,
        counts: BTreeMap<u64, BigUint>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParam("n must be ≥ 1".into()));
        }
        let mut total = BigUint::zero();
        for (&d, c) in &counts {
            if c.is_zero() {
                return Err(Error::InvalidParam(format!("zero count at distance {d}")));
            }
            if d > metric.max_distance(n) {
                return Err(Error::InvalidParam(format!(
                    "distance {d} exceeds the {metric} maximum for n = {n}"
                )));
            }
            if metric == DistanceMetric::Footrule && d % 2 != 0 {
                return Err(Error::InvalidParam(format!(
                    "footrule distance {d} is odd; footrule distances are even"
                )));
            }
            total += c;
        }
        if counts.get(&0) != Some(&BigUint::one()) {
            return Err(Error::InvalidParam("table must have N(0) = 1".into()));
        }
        let mut factorial = BigUint::one();
        for k in 2..=n {
            factorial *= BigUint::from(k);
        }
        if total != factorial {
            return Err(Error::InvalidParam(format!(
                "counts sum to {total}, expected n! = {factorial}"
            )));
        }
        let log_counts = counts
            .iter()
            .map(|(&d, c)| {
                let lc = c
                    .to_f64()
                    .map(f64::ln)
                    .ok_or_else(|| Error::InvalidParam(format!("count at {d} overflows f64")))?;
                Ok((d, lc))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            metric,
            counts,
            log_counts,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn metric(&self) -> DistanceMetric {
        self.metric
    }

    pub fn counts(&self) -> &BTreeMap<u64, BigUint> {
        &self.counts
    }

    pub(crate) fn log_counts(&self) -> &[(u64, f64)] {
        &self.log_counts
    }
}

/// Enumerate `N_n(d)` exactly with the default cap of
/// [`DEFAULT_ENUMERATION_CAP`] items.
pub fn enumerate_distance_table(n: usize, metric: DistanceMetric) -> Result<DistanceFrequencyTable> {
    enumerate_distance_table_with_cap(n, metric, DEFAULT_ENUMERATION_CAP)
}

/// Enumerate `N_n(d)` exactly; `cap` may be raised to at most
/// [`ENUMERATION_HARD_CAP`].
pub fn enumerate_distance_table_with_cap(
    n: usize,
    metric: DistanceMetric,
    cap: usize,
) -> Result<DistanceFrequencyTable> {
    let cap = cap.min(ENUMERATION_HARD_CAP);
    if n == 0 {
        return Err(Error::InvalidParam("n must be ≥ 1".into()));
    }
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    let identity: Vec<u16> = (1..=n as u16).collect();
    let mut raw: BTreeMap<u64, u64> = BTreeMap::new();
    for_each_permutation(n, |p| {
        let d = distance_unchecked(p, &identity, metric);
        *raw.entry(d).or_insert(0) += 1;
    });
    let counts = raw
        .into_iter()
        .map(|(d, c)| (d, BigUint::from(c)))
        .collect();
    DistanceFrequencyTable::from_counts(n, metric, counts)
}

/// `log Z_n(α)` from an exact (or imported) distance table.
pub fn log_z_exact(alpha: f64, table: &DistanceFrequencyTable) -> Result<f64> {
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParam(format!("alpha must be ≥ 0, got {alpha}")));
    }
    let n = table.n() as f64;
    Ok(log_sum_exp(
        table
            .log_counts()
            .iter()
            .map(|&(d, lc)| lc - alpha * d as f64 / n),
    ))
}

/// Closed-form `log Z_n(α)` for the Kendall distance:
/// `Σ_{j=1}^{n} log[(1 − e^{−jα/n}) / (1 − e^{−α/n})]`, with `log n!` as the
/// α = 0 limit.
pub fn log_z_kendall_closed_form(alpha: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParam("n must be ≥ 1".into()));
    }
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParam(format!("alpha must be ≥ 0, got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(ln_factorial(n));
    }
    let rate = alpha / n as f64;
    // ln(1 − e^{−x}) via expm1 for small-x stability.
    let ln_one_minus_exp = |x: f64| (-(-x).exp_m1()).ln();
    let denom = ln_one_minus_exp(rate);
    let mut total = 0.0;
    for j in 1..=n {
        total += ln_one_minus_exp(j as f64 * rate) - denom;
    }
    Ok(total)
}

/// Monte Carlo estimates of `log Z_n(α)` on a grid of α values.
#[derive(Clone, Debug, PartialEq)]
pub struct LogZGrid {
    n: usize,
    metric: DistanceMetric,
    alphas: Vec<f64>,
    log_z: Vec<f64>,
    se: Vec<f64>,
}

impl LogZGrid {
    pub fn new(
        n: usize,
        metric: DistanceMetric,
        alphas: Vec<f64>,
        log_z: Vec<f64>,
        se: Vec<f64>,
    ) -> Result<Self> {
        if alphas.len() != log_z.len() || alphas.len() != se.len() || alphas.is_empty() {
            return Err(Error::InvalidParam("grid vectors must be nonempty and equal-length".into()));
        }
        if !alphas.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParam("grid alphas must be strictly increasing".into()));
        }
        if alphas[0] < 0.0 {
            return Err(Error::InvalidParam("grid alphas must be nonnegative".into()));
        }
        if !log_z.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParam("grid log_z values must be finite".into()));
        }
        Ok(Self { n, metric, alphas, log_z, se })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn metric(&self) -> DistanceMetric {
        self.metric
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn log_z_values(&self) -> &[f64] {
        &self.log_z
    }

    pub fn standard_errors(&self) -> &[f64] {
        &self.se
    }

    pub fn alpha_min(&self) -> f64 {
        self.alphas[0]
    }

    pub fn alpha_max(&self) -> f64 {
        *self.alphas.last().unwrap()
    }

    /// Piecewise-linear interpolation of `log Z` over the grid. No
    /// extrapolation: α outside the knot range is an error.
    pub fn interpolate(&self, alpha: f64) -> Result<f64> {
        if !alpha.is_finite() || alpha < self.alpha_min() || alpha > self.alpha_max() {
            return Err(Error::GridRange {
                alpha,
                min: self.alpha_min(),
                max: self.alpha_max(),
            });
        }
        match self.alphas.binary_search_by(|a| a.partial_cmp(&alpha).unwrap()) {
            Ok(i) => Ok(self.log_z[i]),
            Err(i) => {
                let (a0, a1) = (self.alphas[i - 1], self.alphas[i]);
                let (z0, z1) = (self.log_z[i - 1], self.log_z[i]);
                let t = (alpha - a0) / (a1 - a0);
                Ok(z0 + t * (z1 - z0))
            }
        }
    }
}

/// Importance-sample `log Ẑ_n(α) = log n! + log((1/S) Σ_s e^{−α d_s/n})`
/// where `d_s` is the distance of a uniform random permutation from the
/// identity. One distance sample set is shared by every grid point, so the
/// estimated curve is exactly monotone in α and ratios between nearby α
/// values are stable.
pub fn estimate_log_z_grid<R: Rng + ?Sized>(
    n: usize,
    metric: DistanceMetric,
    alphas: &[f64],
    num_samples: usize,
    rng: &mut R,
) -> Result<LogZGrid> {
    if n == 0 {
        return Err(Error::InvalidParam("n must be ≥ 1".into()));
    }
    if num_samples < 1000 {
        return Err(Error::InvalidParam(format!(
            "num_samples must be ≥ 1000, got {num_samples}"
        )));
    }
    if alphas.is_empty() {
        return Err(Error::InvalidParam("alpha grid must be nonempty".into()));
    }

    let identity: Vec<u16> = (1..=n as u16).collect();
    let mut perm = identity.clone();
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    for _ in 0..num_samples {
        perm.shuffle(rng);
        let d = distance_unchecked(&perm, &identity, metric);
        *histogram.entry(d).or_insert(0) += 1;
    }
    let log_hist: Vec<(f64, f64)> = histogram
        .iter()
        .map(|(&d, &c)| (d as f64, (c as f64).ln()))
        .collect();

    let ln_s = (num_samples as f64).ln();
    let ln_nf = ln_factorial(n);
    let nf = n as f64;
    let mut log_z = Vec::with_capacity(alphas.len());
    let mut se = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        if alpha < 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidParam(format!("alpha must be ≥ 0, got {alpha}")));
        }
        // log of the first and second moments of W = e^{−α d / n}.
        let l1 = log_sum_exp(log_hist.iter().map(|&(d, lc)| lc - alpha * d / nf)) - ln_s;
        let l2 = log_sum_exp(log_hist.iter().map(|&(d, lc)| lc - 2.0 * alpha * d / nf)) - ln_s;
        log_z.push(ln_nf + l1);
        // se(log Ẑ) ≈ sd(W)/(W̄ √S) = sqrt(expm1(l2 − 2 l1)/S).
        let rel_var = (l2 - 2.0 * l1).exp_m1().max(0.0);
        se.push((rel_var / num_samples as f64).sqrt());
    }
    LogZGrid::new(n, metric, alphas.to_vec(), log_z, se)
}

/// Log-spaced grid of `k ≥ 2` points from `lo` to `hi` inclusive.
pub fn log_spaced_grid(lo: f64, hi: f64, k: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && k >= 2) {
        return Err(Error::InvalidParam(format!(
            "log-spaced grid needs 0 < lo < hi and k ≥ 2 (lo={lo}, hi={hi}, k={k})"
        )));
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    Ok((0..k)
        .map(|i| {
            if i == k - 1 {
                hi
            } else {
                (llo + (lhi - llo) * i as f64 / (k - 1) as f64).exp()
            }
        })
        .collect())
}

/// How `log Z_n(α)` is evaluated inside acceptance ratios.
#[derive(Clone, Debug)]
pub enum ZStrategy {
    /// Kendall product formula; valid at any `n`.
    ClosedForm,
    /// Exact enumeration table built in-process.
    Exact(DistanceFrequencyTable),
    /// Table read from a file; evaluated exactly like [`ZStrategy::Exact`].
    ImportedTable(DistanceFrequencyTable),
    /// Interpolated Monte Carlo grid.
    Grid(LogZGrid),
}

impl ZStrategy {
    /// Single entry point used by the samplers and acceptance ratios.
    pub fn log_z(&self, alpha: f64, n: usize, metric: DistanceMetric) -> Result<f64> {
        match self {
            ZStrategy::ClosedForm => {
                if metric != DistanceMetric::Kendall {
                    return Err(Error::ZSourceMismatch(format!(
                        "closed form is Kendall-only, asked for {metric}"
                    )));
                }
                log_z_kendall_closed_form(alpha, n)
            }
            ZStrategy::Exact(t) | ZStrategy::ImportedTable(t) => {
                if t.n() != n || t.metric() != metric {
                    return Err(Error::ZSourceMismatch(format!(
                        "table is for (n = {}, {}), asked for (n = {n}, {metric})",
                        t.n(),
                        t.metric()
                    )));
                }
                log_z_exact(alpha, t)
            }
            ZStrategy::Grid(g) => {
                if g.n() != n || g.metric() != metric {
                    return Err(Error::ZSourceMismatch(format!(
                        "grid is for (n = {}, {}), asked for (n = {n}, {metric})",
                        g.n(),
                        g.metric()
                    )));
                }
                g.interpolate(alpha)
            }
        }
    }

    /// Can `log_z` be evaluated at this α? Grid sources are range-limited.
    pub fn supports_alpha(&self, alpha: f64) -> bool {
        match self {
            ZStrategy::Grid(g) => alpha >= g.alpha_min() && alpha <= g.alpha_max(),
            _ => alpha >= 0.0 && alpha.is_finite(),
        }
    }

    /// Default per-fit choice: closed form for Kendall, exact enumeration
    /// for `n ≤ 8`, otherwise a freshly estimated grid over
    /// `[min(0.001, α_max), α_max]`.
    pub fn default_for<R: Rng + ?Sized>(
        n: usize,
        metric: DistanceMetric,
        alpha_max: f64,
        grid_samples: usize,
        rng: &mut R,
    ) -> Result<ZStrategy> {
        if metric == DistanceMetric::Kendall {
            return Ok(ZStrategy::ClosedForm);
        }
        if n <= DEFAULT_ENUMERATION_CAP {
            return Ok(ZStrategy::Exact(enumerate_distance_table(n, metric)?));
        }
        let lo = 0.001_f64.min(alpha_max / 2.0);
        let alphas = log_spaced_grid(lo, alpha_max, 64)?;
        Ok(ZStrategy::Grid(estimate_log_z_grid(
            n,
            metric,
            &alphas,
            grid_samples,
            rng,
        )?))
    }
}
