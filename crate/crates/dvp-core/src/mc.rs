//! Monte Carlo estimators on finite windows, plus the direct level-by-level
//! tree simulation.
//!
//! Trials are independent and keyed by `(seed, trial)`; aggregation
//! proceeds over fixed-size trial blocks whose partial sums are combined in
//! block order, so results are bit-identical for any thread count.
//! Accumulators are integers wherever the per-trial statistic is integral.

use crate::cluster::{cluster_report, label_components, Mode};
use crate::error::{Error, Result};
use crate::graph::GraphWindow;
use crate::prob::ProbVector;
use crate::sampler::{sample_config, CounterRng};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

/// Trial budget, seed, and thread fan-out for one estimator run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub trials: u64,
    pub seed: u64,
    pub threads: usize,
}

impl Sampling {
    pub fn new(trials: u64, seed: u64) -> Self {
        Sampling { trials, seed, threads: 1 }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

/// Identifying metadata carried alongside an estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorMeta {
    pub graph: String,
    pub p: Vec<f64>,
    pub mode: Mode,
    pub seed: u64,
    pub radius: Option<u32>,
    pub shell: Option<u32>,
}

/// A point estimate with its standard error and truncation bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorResult {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    /// Fraction of trials whose observed cluster touched the window
    /// boundary (those observations are truncated from below).
    pub flagged_fraction: f64,
    pub meta: EstimatorMeta,
}

/// Trials per scheduling block. Fixed so that the grouping of partial sums
/// does not depend on the thread count.
const BLOCK: u64 = 1024;

/// Runs `work` over every trial block and folds the per-block results in
/// block order.
fn fold_blocks<B, F>(sampling: &Sampling, work: F) -> Vec<B>
where
    B: Send,
    F: Fn(std::ops::Range<u64>) -> B + Sync,
{
    let blocks = sampling.trials.div_ceil(BLOCK);
    let range_of = |b: u64| b * BLOCK..((b + 1) * BLOCK).min(sampling.trials);
    if sampling.threads <= 1 || blocks <= 1 {
        return (0..blocks).map(|b| work(range_of(b))).collect();
    }
    let next = AtomicU64::new(0);
    let slots: Mutex<Vec<Option<B>>> = Mutex::new((0..blocks).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..sampling.threads.min(blocks as usize) {
            scope.spawn(|| loop {
                let b = next.fetch_add(1, Ordering::Relaxed);
                if b >= blocks {
                    break;
                }
                let out = work(range_of(b));
                slots.lock().unwrap()[b as usize] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|s| s.expect("every block completed"))
        .collect()
}

fn meta_for(
    window: &GraphWindow,
    p: &ProbVector,
    mode: Mode,
    sampling: &Sampling,
    shell: Option<u32>,
) -> EstimatorMeta {
    EstimatorMeta {
        graph: window.kind().name(),
        p: p.entries().to_vec(),
        mode,
        seed: sampling.seed,
        radius: Some(window.radius()),
        shell,
    }
}

fn binomial_result(
    successes: u64,
    flagged: u64,
    sampling: &Sampling,
    meta: EstimatorMeta,
) -> EstimatorResult {
    let n = sampling.trials as f64;
    let estimate = successes as f64 / n;
    let std_error = (estimate * (1.0 - estimate) / n).sqrt();
    EstimatorResult {
        estimate,
        std_error,
        trials: sampling.trials,
        flagged_fraction: flagged as f64 / n,
        meta,
    }
}

/// Mean and standard error from integer sums of an integral statistic.
fn moment_result(
    sum: u128,
    sum_sq: u128,
    flagged: u64,
    sampling: &Sampling,
    scale: f64,
    meta: EstimatorMeta,
) -> EstimatorResult {
    let n = sampling.trials as f64;
    let mean = sum as f64 / n;
    let var = ((sum_sq as f64) - n * mean * mean) / (n - 1.0).max(1.0);
    EstimatorResult {
        estimate: mean * scale,
        std_error: (var.max(0.0) / n).sqrt() * scale,
        trials: sampling.trials,
        flagged_fraction: flagged as f64 / n,
        meta,
    }
}

/// Estimates the probability that the origin's cluster reaches the shell at
/// distance `n`. Exact in distribution for every `n <= R`: the event is
/// measurable inside `B(n)`.
pub fn estimate_reach(
    window: &GraphWindow,
    p: &ProbVector,
    n: u32,
    mode: Mode,
    sampling: &Sampling,
) -> Result<EstimatorResult> {
    if n > window.radius() {
        return Err(Error::ShellOutOfRange { shell: n, radius: window.radius() });
    }
    check_degree(window, p)?;
    let blocks = fold_blocks(sampling, |range| {
        let mut successes = 0u64;
        let mut flagged = 0u64;
        for trial in range {
            let config = sample_config(window, p, sampling.seed, trial).expect("degree checked");
            let report = cluster_report(window, &config, 0, mode);
            successes += u64::from(report.max_shell >= n);
            flagged += u64::from(report.touches_window_boundary);
        }
        (successes, flagged)
    });
    let successes: u64 = blocks.iter().map(|b| b.0).sum();
    let flagged: u64 = blocks.iter().map(|b| b.1).sum();
    Ok(binomial_result(
        successes,
        flagged,
        sampling,
        meta_for(window, p, mode, sampling, Some(n)),
    ))
}

/// Estimates the mean cluster size of the origin. Whenever a sampled
/// cluster touches the boundary the statistic is truncated from below;
/// `flagged_fraction` reports how often, and the estimate is then a lower
/// bound for the true mean.
pub fn estimate_chi(
    window: &GraphWindow,
    p: &ProbVector,
    mode: Mode,
    sampling: &Sampling,
) -> Result<EstimatorResult> {
    check_degree(window, p)?;
    let blocks = fold_blocks(sampling, |range| {
        let (mut sum, mut sum_sq, mut flagged) = (0u128, 0u128, 0u64);
        for trial in range {
            let config = sample_config(window, p, sampling.seed, trial).expect("degree checked");
            let report = cluster_report(window, &config, 0, mode);
            sum += report.size as u128;
            sum_sq += (report.size as u128) * (report.size as u128);
            flagged += u64::from(report.touches_window_boundary);
        }
        (sum, sum_sq, flagged)
    });
    let sum: u128 = blocks.iter().map(|b| b.0).sum();
    let sum_sq: u128 = blocks.iter().map(|b| b.1).sum();
    let flagged: u64 = blocks.iter().map(|b| b.2).sum();
    Ok(moment_result(
        sum,
        sum_sq,
        flagged,
        sampling,
        1.0,
        meta_for(window, p, mode, sampling, None),
    ))
}

/// Empirical distribution of exact cluster sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeDistribution {
    /// `(m, relative frequency of |C| = m)` for `m = 1..=m_max`, counted
    /// only over trials whose cluster stays off the boundary (those sizes
    /// are exact).
    pub per_size: Vec<(u32, f64)>,
    /// Fraction of trials whose cluster touched the boundary; they are
    /// counted here and in no size bin.
    pub touching_fraction: f64,
    pub trials: u64,
    pub meta: EstimatorMeta,
}

/// Estimates `P(|C| = m)` for `m <= m_max` from boundary-free trials.
pub fn estimate_size_distribution(
    window: &GraphWindow,
    p: &ProbVector,
    mode: Mode,
    m_max: u32,
    sampling: &Sampling,
) -> Result<SizeDistribution> {
    check_degree(window, p)?;
    assert!((m_max as usize) < window.vertex_count());
    let blocks = fold_blocks(sampling, |range| {
        let mut bins = vec![0u64; m_max as usize + 1];
        let mut touching = 0u64;
        for trial in range {
            let config = sample_config(window, p, sampling.seed, trial).expect("degree checked");
            let report = cluster_report(window, &config, 0, mode);
            if report.touches_window_boundary {
                touching += 1;
            } else if report.size <= m_max {
                bins[report.size as usize] += 1;
            }
        }
        (bins, touching)
    });
    let mut bins = vec![0u64; m_max as usize + 1];
    let mut touching = 0u64;
    for (block_bins, block_touching) in blocks {
        for (acc, v) in bins.iter_mut().zip(block_bins) {
            *acc += v;
        }
        touching += block_touching;
    }
    let n = sampling.trials as f64;
    Ok(SizeDistribution {
        per_size: (1..=m_max).map(|m| (m, bins[m as usize] as f64 / n)).collect(),
        touching_fraction: touching as f64 / n,
        trials: sampling.trials,
        meta: meta_for(window, p, mode, sampling, None),
    })
}

/// The two cluster-count estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaEstimate {
    /// Mean of `1 / |C(o)|`; truncated clusters contribute the reciprocal
    /// of their observed size, so this is an upper bound when any trial is
    /// flagged.
    pub inverse_mean: EstimatorResult,
    /// Mean of (number of components of the window subgraph) / |B(R)|.
    pub count: EstimatorResult,
}

/// Estimates the expected number of clusters per vertex both ways.
pub fn estimate_kappa(
    window: &GraphWindow,
    p: &ProbVector,
    mode: Mode,
    sampling: &Sampling,
) -> Result<KappaEstimate> {
    check_degree(window, p)?;
    let blocks = fold_blocks(sampling, |range| {
        let (mut inv_sum, mut inv_sq) = (0.0f64, 0.0f64);
        let (mut count_sum, mut count_sq) = (0u128, 0u128);
        let mut flagged = 0u64;
        for trial in range {
            let config = sample_config(window, p, sampling.seed, trial).expect("degree checked");
            let report = cluster_report(window, &config, 0, mode);
            let inv = 1.0 / report.size as f64;
            inv_sum += inv;
            inv_sq += inv * inv;
            flagged += u64::from(report.touches_window_boundary);
            let components = label_components(window, &config, mode).component_count() as u128;
            count_sum += components;
            count_sq += components * components;
        }
        (inv_sum, inv_sq, count_sum, count_sq, flagged)
    });
    let inv_sum: f64 = blocks.iter().map(|b| b.0).sum();
    let inv_sq: f64 = blocks.iter().map(|b| b.1).sum();
    let count_sum: u128 = blocks.iter().map(|b| b.2).sum();
    let count_sq: u128 = blocks.iter().map(|b| b.3).sum();
    let flagged: u64 = blocks.iter().map(|b| b.4).sum();

    let n = sampling.trials as f64;
    let meta = meta_for(window, p, mode, sampling, None);
    let inv_mean = inv_sum / n;
    let inv_var = (inv_sq - n * inv_mean * inv_mean) / (n - 1.0).max(1.0);
    let inverse_mean = EstimatorResult {
        estimate: inv_mean,
        std_error: (inv_var.max(0.0) / n).sqrt(),
        trials: sampling.trials,
        flagged_fraction: flagged as f64 / n,
        meta: meta.clone(),
    };
    let count = moment_result(
        count_sum,
        count_sq,
        flagged,
        sampling,
        1.0 / window.vertex_count() as f64,
        meta,
    );
    Ok(KappaEstimate { inverse_mean, count })
}

/// Reach estimate for one shell inside a decay scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellPoint {
    pub shell: u32,
    pub successes: u64,
    pub estimate: f64,
    pub std_error: f64,
    /// Whether the shell entered the least-squares fit.
    pub in_fit: bool,
}

/// Per-shell reach estimates with the fitted log-linear decay.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayEstimate {
    /// Least-squares slope of `ln(reach)` against the shell index.
    pub slope: f64,
    /// The implied decay rate, `-slope`.
    pub rate: f64,
    pub per_shell: Vec<ShellPoint>,
    pub trials: u64,
    pub meta: EstimatorMeta,
}

/// Minimum success count for a shell to enter the decay fit.
pub const DECAY_MIN_SUCCESSES: u64 = 10;

/// Estimates reach for every shell in `shells` from a single sweep (one
/// cluster extraction per trial) and fits `ln(reach)` against the shell by
/// unweighted least squares over the shells with at least
/// [`DECAY_MIN_SUCCESSES`] successes.
pub fn estimate_decay(
    window: &GraphWindow,
    p: &ProbVector,
    mode: Mode,
    shells: &[u32],
    sampling: &Sampling,
) -> Result<DecayEstimate> {
    check_degree(window, p)?;
    assert!(!shells.is_empty());
    for &s in shells {
        if s > window.radius() {
            return Err(Error::ShellOutOfRange { shell: s, radius: window.radius() });
        }
    }
    let blocks = fold_blocks(sampling, |range| {
        let mut successes = vec![0u64; shells.len()];
        for trial in range {
            let config = sample_config(window, p, sampling.seed, trial).expect("degree checked");
            let max_shell = cluster_report(window, &config, 0, mode).max_shell;
            for (i, &s) in shells.iter().enumerate() {
                successes[i] += u64::from(max_shell >= s);
            }
        }
        successes
    });
    let mut successes = vec![0u64; shells.len()];
    for block in blocks {
        for (acc, v) in successes.iter_mut().zip(block) {
            *acc += v;
        }
    }

    let n = sampling.trials as f64;
    let per_shell: Vec<ShellPoint> = shells
        .iter()
        .zip(&successes)
        .map(|(&shell, &succ)| {
            let estimate = succ as f64 / n;
            ShellPoint {
                shell,
                successes: succ,
                estimate,
                std_error: (estimate * (1.0 - estimate) / n).sqrt(),
                in_fit: succ >= DECAY_MIN_SUCCESSES,
            }
        })
        .collect();

    let points: Vec<(f64, f64)> = per_shell
        .iter()
        .filter(|pt| pt.in_fit)
        .map(|pt| (pt.shell as f64, pt.estimate.ln()))
        .collect();
    if points.len() < 2 {
        return Err(Error::AllZeroReach);
    }
    let slope = least_squares_slope(&points);
    Ok(DecayEstimate {
        slope,
        rate: -slope,
        per_shell,
        trials: sampling.trials,
        meta: meta_for(window, p, mode, sampling, None),
    })
}

/// Unweighted least-squares slope of `y` against `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(x, y) in points {
        num += (x - mean_x) * (y - mean_y);
        den += (x - mean_x) * (x - mean_x);
    }
    num / den
}

/// The two-size tree laws of the threshold theorems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TreeLaw {
    /// `p_1 = 1 - p`, `p_2 = p` with weak connections.
    Weak { p: f64 },
    /// `p_k = 1 - p`, `p_{k+1} = p` with strong connections.
    Strong { k: usize, p: f64 },
}

impl TreeLaw {
    fn mode(&self) -> Mode {
        match self {
            TreeLaw::Weak { .. } => Mode::Weak,
            TreeLaw::Strong { .. } => Mode::Strong,
        }
    }

    fn sizes(&self) -> (usize, usize, f64) {
        match *self {
            TreeLaw::Weak { p } => (1, 2, p),
            TreeLaw::Strong { k, p } => (k, k + 1, p),
        }
    }
}

/// Frontier safety valve: a surviving front this large at a supercritical
/// drift has a vanishing chance of dying before any reasonable horizon, so
/// the trial is scored as surviving without materializing deeper levels.
const FRONTIER_CAP: usize = 4096;

struct TreeNode {
    /// Selected-slot mask; slot 0 is the parent for non-root nodes.
    mask: u16,
    /// Type index for offspring statistics (weak: 0..4, strong: 0..2).
    kind: u8,
}

/// Draws the mask of one tree vertex under `law`; `counter` indexes the
/// deterministic per-trial stream.
fn draw_node(
    d: usize,
    law: &TreeLaw,
    seed: u64,
    trial: u64,
    counter: &mut u64,
) -> u16 {
    let (lo, hi, p) = law.sizes();
    let mut rng = CounterRng::new(seed, trial, *counter);
    *counter += 1;
    let size = if rng.next_f64() < 1.0 - p { lo } else { hi };
    // Uniform size-subset of the d slots via partial Fisher-Yates.
    let mut idx: [u8; 12] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];
    let mut mask = 0u16;
    for i in 0..size {
        let j = i + rng.below((d - i) as u32) as usize;
        idx.swap(i, j);
        mask |= 1 << idx[i];
    }
    mask
}

/// Weak-type classification of a non-root node: did it pick its parent and
/// how many children.
fn weak_kind(mask: u16) -> u8 {
    let parent = mask & 1 == 1;
    let children = (mask >> 1).count_ones();
    match (parent, children) {
        (true, 0) => 0,
        (true, _) => 1,
        (false, 1) => 2,
        _ => 3,
    }
}

fn strong_kind(mask: u16, k: usize) -> u8 {
    // Strongly connected nodes picked their parent; k-1 or k children.
    u8::from((mask >> 1).count_ones() as usize == k)
}

/// Offspring statistics per parent type, for comparison with the mean
/// matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct OffspringStats {
    pub types: usize,
    /// Number of observed parents of each type.
    pub parents: Vec<u64>,
    /// `sum[i][j]`: total type-`j` offspring over type-`i` parents.
    pub sum: Vec<Vec<u64>>,
    /// Same, squared per parent, for standard errors.
    pub sum_sq: Vec<Vec<u64>>,
}

impl OffspringStats {
    pub fn mean(&self, j: usize, i: usize) -> f64 {
        self.sum[i][j] as f64 / self.parents[i] as f64
    }

    pub fn std_error(&self, j: usize, i: usize) -> f64 {
        let n = self.parents[i] as f64;
        let mean = self.mean(j, i);
        let var = (self.sum_sq[i][j] as f64 - n * mean * mean) / (n - 1.0).max(1.0);
        (var.max(0.0) / n).sqrt()
    }
}

/// One tree trial: runs the frontier simulation to `generations` levels and
/// reports survival. When `stats` is given, offspring counts of parents at
/// generations 1..=3 are recorded by (parent type, child type).
fn tree_trial(
    d: usize,
    law: &TreeLaw,
    generations: u32,
    seed: u64,
    trial: u64,
    mut stats: Option<&mut OffspringStats>,
) -> (bool, bool) {
    let mode = law.mode();
    let (_, hi, _) = law.sizes();
    let strong_k = hi - 1;
    let mut counter = 0u64;
    if generations == 0 {
        return (true, false);
    }
    // Root: d child slots, no parent slot.
    let root_mask = draw_node(d, law, seed, trial, &mut counter);
    let mut frontier: Vec<TreeNode> = Vec::new();
    for slot in 0..d {
        let child_mask = draw_node(d, law, seed, trial, &mut counter);
        let open = match mode {
            Mode::Weak => root_mask >> slot & 1 == 1 || child_mask & 1 == 1,
            Mode::Strong => root_mask >> slot & 1 == 1 && child_mask & 1 == 1,
        };
        if open {
            let kind = match mode {
                Mode::Weak => weak_kind(child_mask),
                Mode::Strong => strong_kind(child_mask, strong_k),
            };
            frontier.push(TreeNode { mask: child_mask, kind });
        }
    }

    let mut capped = false;
    for generation in 1..generations {
        if frontier.is_empty() {
            return (false, false);
        }
        if frontier.len() >= FRONTIER_CAP {
            capped = true;
            break;
        }
        let mut next = Vec::with_capacity(frontier.len() + frontier.len() / 2);
        for node in &frontier {
            let mut offspring = [0u64; 4];
            for slot in 1..d {
                let child_mask = draw_node(d, law, seed, trial, &mut counter);
                let open = match mode {
                    Mode::Weak => node.mask >> slot & 1 == 1 || child_mask & 1 == 1,
                    Mode::Strong => node.mask >> slot & 1 == 1 && child_mask & 1 == 1,
                };
                if open {
                    let kind = match mode {
                        Mode::Weak => weak_kind(child_mask),
                        Mode::Strong => strong_kind(child_mask, strong_k),
                    };
                    offspring[kind as usize] += 1;
                    next.push(TreeNode { mask: child_mask, kind });
                }
            }
            if let Some(stats) = stats.as_deref_mut() {
                if (1..=3).contains(&generation) {
                    let i = node.kind as usize;
                    stats.parents[i] += 1;
                    for (j, &c) in offspring.iter().enumerate().take(stats.types) {
                        stats.sum[i][j] += c;
                        stats.sum_sq[i][j] += c * c;
                    }
                }
            }
        }
        frontier = next;
    }
    (capped || !frontier.is_empty(), capped)
}

/// Survival frequency of the origin's cluster out to `generations` levels
/// of the d-regular tree under a two-size law, by direct simulation of the
/// frontier. `flagged_fraction` reports trials stopped early at the
/// frontier safety cap (scored as surviving).
pub fn tree_survival(
    d: usize,
    law: TreeLaw,
    generations: u32,
    sampling: &Sampling,
) -> Result<EstimatorResult> {
    validate_tree_law(d, &law)?;
    let blocks = fold_blocks(sampling, |range| {
        let mut survived = 0u64;
        let mut capped = 0u64;
        for trial in range {
            let (s, c) = tree_trial(d, &law, generations, sampling.seed, trial, None);
            survived += u64::from(s);
            capped += u64::from(c);
        }
        (survived, capped)
    });
    let survived: u64 = blocks.iter().map(|b| b.0).sum();
    let capped: u64 = blocks.iter().map(|b| b.1).sum();
    let meta = EstimatorMeta {
        graph: format!("tree:{d}"),
        p: match law {
            TreeLaw::Weak { p } => vec![1.0 - p, p],
            TreeLaw::Strong { p, .. } => vec![1.0 - p, p],
        },
        mode: law.mode(),
        seed: sampling.seed,
        radius: Some(generations),
        shell: Some(generations),
    };
    Ok(binomial_result(survived, capped, sampling, meta))
}

/// Empirical offspring statistics of the tree simulation for parents at
/// generations 1..=3, for validation against the mean matrices.
pub fn tree_offspring_stats(
    d: usize,
    law: TreeLaw,
    sampling: &Sampling,
) -> Result<OffspringStats> {
    validate_tree_law(d, &law)?;
    let types = match law {
        TreeLaw::Weak { .. } => 4,
        TreeLaw::Strong { .. } => 2,
    };
    let blocks = fold_blocks(sampling, |range| {
        let mut stats = OffspringStats {
            types,
            parents: vec![0; types],
            sum: vec![vec![0; types]; types],
            sum_sq: vec![vec![0; types]; types],
        };
        for trial in range {
            tree_trial(d, &law, 5, sampling.seed, trial, Some(&mut stats));
        }
        stats
    });
    let mut total = OffspringStats {
        types,
        parents: vec![0; types],
        sum: vec![vec![0; types]; types],
        sum_sq: vec![vec![0; types]; types],
    };
    for block in blocks {
        for i in 0..types {
            total.parents[i] += block.parents[i];
            for j in 0..types {
                total.sum[i][j] += block.sum[i][j];
                total.sum_sq[i][j] += block.sum_sq[i][j];
            }
        }
    }
    Ok(total)
}

fn validate_tree_law(d: usize, law: &TreeLaw) -> Result<()> {
    if d < 3 {
        return Err(Error::DegreeTooSmall { degree: d, min: 3 });
    }
    let (_, _, p) = law.sizes();
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParameterOutOfRange { name: "p", value: p });
    }
    if let TreeLaw::Strong { k, .. } = law {
        if !(2..=d - 1).contains(k) {
            return Err(Error::KOutOfRange { k: *k, d });
        }
    }
    Ok(())
}

fn check_degree(window: &GraphWindow, p: &ProbVector) -> Result<()> {
    if p.degree() != window.degree() {
        return Err(Error::DegreeMismatch { left: p.degree(), right: window.degree() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{t2_chi, t2_connection, tree_strong_matrix, tree_weak_matrix};
    use crate::graph::{build_window, GraphKind};

    fn pv(entries: &[f64]) -> ProbVector {
        ProbVector::new(entries).unwrap()
    }

    #[test]
    fn reach_point_masses() {
        let w = build_window(&GraphKind::Line, 5).unwrap();
        let s = Sampling::new(500, 3);
        let full = estimate_reach(&w, &pv(&[0.0, 0.0, 1.0]), 5, Mode::Strong, &s).unwrap();
        assert_eq!(full.estimate, 1.0);
        assert_eq!(full.std_error, 0.0);
        let empty = estimate_reach(&w, &pv(&[1.0, 0.0, 0.0]), 1, Mode::Weak, &s).unwrap();
        assert_eq!(empty.estimate, 0.0);
    }

    #[test]
    fn reach_is_window_invariant() {
        let p = pv(&[0.25, 0.5, 0.25]);
        let s = Sampling::new(4000, 11);
        let small = build_window(&GraphKind::Line, 4).unwrap();
        let large = build_window(&GraphKind::Line, 9).unwrap();
        for n in 1..=4 {
            let a = estimate_reach(&small, &p, n, Mode::Weak, &s).unwrap();
            let b = estimate_reach(&large, &p, n, Mode::Weak, &s).unwrap();
            assert_eq!(a.estimate, b.estimate, "shell {n}");
        }
    }

    #[test]
    fn estimators_independent_of_thread_count() {
        let w = build_window(&GraphKind::Square, 6).unwrap();
        let p = pv(&[0.3, 0.3, 0.2, 0.1, 0.1]);
        let single = Sampling::new(3000, 5);
        let multi = Sampling::new(3000, 5).with_threads(4);
        let a = estimate_chi(&w, &p, Mode::Weak, &single).unwrap();
        let b = estimate_chi(&w, &p, Mode::Weak, &multi).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        let ka = estimate_kappa(&w, &p, Mode::Strong, &single).unwrap();
        let kb = estimate_kappa(&w, &p, Mode::Strong, &multi).unwrap();
        assert_eq!(
            ka.inverse_mean.estimate.to_bits(),
            kb.inverse_mean.estimate.to_bits()
        );
        assert_eq!(ka.count.estimate.to_bits(), kb.count.estimate.to_bits());
    }

    #[test]
    fn chi_against_closed_form_short_run() {
        let w = build_window(&GraphKind::Line, 60).unwrap();
        let p = pv(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        let s = Sampling::new(20_000, 7).with_threads(2);
        let est = estimate_chi(&w, &p, Mode::Weak, &s).unwrap();
        let exact = t2_chi(&p).unwrap().chi;
        assert!(
            (est.estimate - exact).abs() < 4.0 * est.std_error,
            "{} vs {exact} (se {})",
            est.estimate,
            est.std_error
        );
        assert!(est.flagged_fraction < 1e-3);
    }

    #[test]
    fn chi_point_mass_is_one() {
        let w = build_window(&GraphKind::Square, 4).unwrap();
        let est = estimate_chi(
            &w,
            &pv(&[1.0, 0.0, 0.0, 0.0, 0.0]),
            Mode::Weak,
            &Sampling::new(100, 0),
        )
        .unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn size_distribution_against_enumeration() {
        // Exact P(|C| = 1) at the origin of the chain: the origin picks
        // nothing and neither neighbor picks it.
        let w = build_window(&GraphKind::Line, 6).unwrap();
        let p = pv(&[0.5, 0.25, 0.25]);
        let exact_p1 = {
            let p0 = 0.5;
            let miss = 0.5 + 0.25 / 2.0; // neighbor picks elsewhere or nothing
            p0 * miss * miss
        };
        let s = Sampling::new(100_000, 13);
        let dist = estimate_size_distribution(&w, &p, Mode::Weak, 10, &s).unwrap();
        let (m, freq) = dist.per_size[0];
        assert_eq!(m, 1);
        let sigma = (exact_p1 * (1.0 - exact_p1) / s.trials as f64).sqrt();
        assert!((freq - exact_p1).abs() < 4.0 * sigma, "{freq} vs {exact_p1}");
        let mass: f64 = dist.per_size.iter().map(|&(_, f)| f).sum();
        assert!(mass + dist.touching_fraction <= 1.0 + 1e-12);

        // Nothing ever chosen: all mass sits at size one.
        let isolated = estimate_size_distribution(
            &w,
            &pv(&[1.0, 0.0, 0.0]),
            Mode::Weak,
            3,
            &Sampling::new(500, 13),
        )
        .unwrap();
        assert_eq!(isolated.per_size[0], (1, 1.0));
        assert_eq!(isolated.touching_fraction, 0.0);
    }

    #[test]
    fn size_distribution_log_ratio_stabilizes() {
        // Subcritical square lattice: -ln P(|C| = m) / m settles toward the
        // cluster-size decay rate, so consecutive differences shrink.
        let w = build_window(&GraphKind::Square, 10).unwrap();
        let p = pv(&[0.6, 0.3, 0.1, 0.0, 0.0]);
        let s = Sampling::new(200_000, 5).with_threads(2);
        let dist = estimate_size_distribution(&w, &p, Mode::Weak, 12, &s).unwrap();
        let ratios: Vec<f64> = dist
            .per_size
            .iter()
            .map(|&(m, freq)| {
                assert!(freq > 0.0, "no mass at m = {m}");
                -freq.ln() / m as f64
            })
            .collect();
        for pair in ratios.windows(2) {
            assert!(pair[1] < pair[0] + 0.01, "ratio sequence not settling: {ratios:?}");
        }
        let first_step = (ratios[1] - ratios[0]).abs();
        let last_step = (ratios[11] - ratios[10]).abs();
        assert!(last_step < 0.2 * first_step, "steps {first_step} -> {last_step}");
    }

    #[test]
    fn kappa_point_masses() {
        let w = build_window(&GraphKind::Square, 5).unwrap();
        let s = Sampling::new(200, 1);
        let isolated = estimate_kappa(&w, &pv(&[1.0, 0.0, 0.0, 0.0, 0.0]), Mode::Weak, &s).unwrap();
        assert_eq!(isolated.inverse_mean.estimate, 1.0);
        assert_eq!(isolated.count.estimate, 1.0);
        let full = estimate_kappa(&w, &pv(&[0.0, 0.0, 0.0, 0.0, 1.0]), Mode::Weak, &s).unwrap();
        let v = w.vertex_count() as f64;
        assert!((full.count.estimate - 1.0 / v).abs() < 1e-15);
        assert!((full.inverse_mean.estimate - 1.0 / v).abs() < 1e-15);
    }

    #[test]
    fn decay_on_supercritical_chain_is_flat() {
        let w = build_window(&GraphKind::Line, 12).unwrap();
        let p = pv(&[0.0, 0.0, 1.0]);
        let shells: Vec<u32> = (2..=12).collect();
        let est = estimate_decay(&w, &p, Mode::Weak, &shells, &Sampling::new(200, 2)).unwrap();
        assert_eq!(est.slope, 0.0);
        assert_eq!(est.rate, 0.0);
    }

    #[test]
    fn decay_matches_connection_probabilities() {
        let w = build_window(&GraphKind::Line, 10).unwrap();
        let p = pv(&[0.0, 1.0, 0.0]);
        // Shell 1 included: the origin always selects a side, so the
        // two-sided reach there is exactly one.
        let shells: Vec<u32> = (1..=8).collect();
        let s = Sampling::new(200_000, 21).with_threads(2);
        let est = estimate_decay(&w, &p, Mode::Weak, &shells, &s).unwrap();
        // Two-sided reach: both one-sided events minus their intersection,
        // which equals connection across twice the distance.
        for pt in &est.per_shell {
            let one = t2_connection(&p, pt.shell, Mode::Weak);
            let both = t2_connection(&p, 2 * pt.shell, Mode::Weak);
            let expected = 2.0 * one - both;
            assert!(
                (pt.estimate - expected).abs() < 4.0 * pt.std_error.max(1e-4),
                "shell {}: {} vs {expected}",
                pt.shell,
                pt.estimate
            );
        }
        assert!(est.slope < 0.0);
    }

    #[test]
    fn decay_needs_data() {
        let w = build_window(&GraphKind::Line, 8).unwrap();
        let p = pv(&[1.0, 0.0, 0.0]);
        let shells: Vec<u32> = (1..=8).collect();
        assert!(matches!(
            estimate_decay(&w, &p, Mode::Weak, &shells, &Sampling::new(1000, 0)),
            Err(Error::AllZeroReach)
        ));
    }

    #[test]
    fn tree_survival_extremes() {
        // p = 0 in weak mode leaves only single-child picks; survival decays
        // with depth (subcritical branching).
        let shallow = tree_survival(3, TreeLaw::Weak { p: 0.0 }, 5, &Sampling::new(4000, 9)).unwrap();
        let deep = tree_survival(3, TreeLaw::Weak { p: 0.0 }, 25, &Sampling::new(4000, 9)).unwrap();
        assert!(deep.estimate < shallow.estimate);
        // Supercritical strong regime survives with visible probability.
        let strong =
            tree_survival(4, TreeLaw::Strong { k: 2, p: 1.0 }, 30, &Sampling::new(4000, 9)).unwrap();
        assert!(strong.estimate > 0.5);
    }

    #[test]
    fn critical_tree_survival_decays_with_depth() {
        // At the critical point the process dies out, so survival to
        // generation g keeps falling as g grows.
        let pc = crate::exact::tree_weak_threshold(3);
        let s = Sampling::new(20_000, 27).with_threads(2);
        let shallow = tree_survival(3, TreeLaw::Weak { p: pc }, 8, &s).unwrap();
        let mid = tree_survival(3, TreeLaw::Weak { p: pc }, 20, &s).unwrap();
        let deep = tree_survival(3, TreeLaw::Weak { p: pc }, 50, &s).unwrap();
        assert!(shallow.estimate > mid.estimate);
        assert!(mid.estimate > deep.estimate);
    }

    #[test]
    fn tree_law_validation() {
        assert!(matches!(
            tree_survival(2, TreeLaw::Weak { p: 0.5 }, 5, &Sampling::new(10, 0)),
            Err(Error::DegreeTooSmall { .. })
        ));
        assert!(matches!(
            tree_survival(4, TreeLaw::Strong { k: 4, p: 0.5 }, 5, &Sampling::new(10, 0)),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(matches!(
            tree_survival(4, TreeLaw::Weak { p: 1.5 }, 5, &Sampling::new(10, 0)),
            Err(Error::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn offspring_stats_match_weak_matrix() {
        let d = 3;
        let p = 0.35;
        let stats = tree_offspring_stats(
            d,
            TreeLaw::Weak { p },
            &Sampling::new(30_000, 17).with_threads(2),
        )
        .unwrap();
        let matrix = tree_weak_matrix(d, p);
        for i in 0..4 {
            if stats.parents[i] < 100 {
                continue;
            }
            for j in 0..4 {
                let observed = stats.mean(j, i);
                let expected = matrix.entry(j, i);
                let tol = 3.0 * stats.std_error(j, i).max(1e-3);
                assert!(
                    (observed - expected).abs() < tol,
                    "m[{j}][{i}]: {observed} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn offspring_stats_match_strong_matrix() {
        let (d, k, p) = (4, 2, 0.6);
        let stats = tree_offspring_stats(
            d,
            TreeLaw::Strong { k, p },
            &Sampling::new(60_000, 19).with_threads(2),
        )
        .unwrap();
        let matrix = tree_strong_matrix(d, k, p).unwrap();
        for i in 0..2 {
            if stats.parents[i] < 100 {
                continue;
            }
            for j in 0..2 {
                let observed = stats.mean(j, i);
                let expected = matrix.entry(j, i);
                let tol = 3.0 * stats.std_error(j, i).max(1e-3);
                assert!(
                    (observed - expected).abs() < tol,
                    "m[{j}][{i}]: {observed} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn coupled_statistics_are_monotone() {
        let w = build_window(&GraphKind::Square, 5).unwrap();
        let chain = vec![
            pv(&[0.7, 0.3, 0.0, 0.0, 0.0]),
            pv(&[0.4, 0.3, 0.3, 0.0, 0.0]),
            pv(&[0.1, 0.3, 0.3, 0.2, 0.1]),
        ];
        for trial in 0..300 {
            let configs = crate::sampler::coupled_sample(&w, &chain, 31, trial).unwrap();
            for mode in [Mode::Weak, Mode::Strong] {
                let mut last_size = 0;
                let mut last_shell = 0;
                for c in &configs {
                    let rep = cluster_report(&w, c, 0, mode);
                    assert!(rep.size >= last_size);
                    assert!(rep.max_shell >= last_shell);
                    last_size = rep.size;
                    last_shell = rep.max_shell;
                }
            }
        }
    }
}
