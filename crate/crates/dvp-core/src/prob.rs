//! The choice-size distribution `p = (p_0, ..., p_d)`, its tail-sum partial
//! order, and the scalar constants derived from `(d, p)`: pair-edge
//! probabilities with their characteristic roots, dual-contour bounds, decay
//! constants, and the labelled-skeleton count.

use crate::error::{Error, Result};

/// Tolerance accepted on the input sum before renormalization.
const SUM_TOLERANCE: f64 = 1e-9;
/// Slack used by the tail-sum comparison.
const ORDER_SLACK: f64 = 1e-12;

/// A validated choice-size distribution `(p_0, ..., p_d)` for a `d`-regular
/// graph. Entries are renormalized on construction so they sum to 1 exactly
/// (up to one floating division per entry).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    entries: Vec<f64>,
}

impl ProbVector {
    /// Validates and normalizes `entries` into a `ProbVector` with
    /// `degree = entries.len() - 1`.
    pub fn new(entries: &[f64]) -> Result<Self> {
        assert!(!entries.is_empty(), "entries must be non-empty");
        for (index, &value) in entries.iter().enumerate() {
            if value < -ORDER_SLACK {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumNotOne { sum });
        }
        let entries = entries.iter().map(|&v| v.max(0.0) / sum).collect();
        Ok(ProbVector { entries })
    }

    /// The distribution concentrated on choice size `k`.
    pub fn point_mass(degree: usize, k: usize) -> Self {
        assert!(k <= degree);
        let mut entries = vec![0.0; degree + 1];
        entries[k] = 1.0;
        ProbVector { entries }
    }

    /// Mass `1 - p` on size `a` and `p` on size `b`; the two-size mixtures
    /// used by the tree threshold theorems.
    pub fn two_size_mix(degree: usize, a: usize, b: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ParameterOutOfRange { name: "p", value: p });
        }
        assert!(a <= degree && b <= degree && a != b);
        let mut entries = vec![0.0; degree + 1];
        entries[a] = 1.0 - p;
        entries[b] = p;
        Ok(ProbVector { entries })
    }

    pub fn degree(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `p_k`, zero when `k > d`.
    pub fn entry(&self, k: usize) -> f64 {
        self.entries.get(k).copied().unwrap_or(0.0)
    }

    /// Tail sum `p_i + ... + p_d`.
    pub fn tail_sum(&self, i: usize) -> f64 {
        self.entries.iter().skip(i).sum()
    }

    /// Cumulative sums `p_0, p_0 + p_1, ..., 1`; thresholds for size draws.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.entries
            .iter()
            .map(|&v| {
                acc += v;
                acc
            })
            .collect()
    }
}

/// Tail-sum partial order: true iff `p <= q`, i.e. every tail sum of `p` is
/// at most the matching tail sum of `q` (within `1e-12` slack).
pub fn dominates(p: &ProbVector, q: &ProbVector) -> Result<bool> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    let mut tp = 0.0;
    let mut tq = 0.0;
    // Walk tails from the top; i = 0 compares 1 against 1.
    for i in (0..=p.degree()).rev() {
        tp += p.entry(i);
        tq += q.entry(i);
        if tp > tq + ORDER_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Joint pair-edge probabilities for two distinct neighbors `y, z` of a site
/// `x`, together with the characteristic roots of the two-step recurrence
/// they induce along a self-avoiding path.
///
/// `p0_prime` is the probability that `x` picks neither of `y, z`,
/// `p1_prime` that it picks exactly one, `p2_prime` that it picks both;
/// `q` is the probability that a fixed adjacent pair is weakly connected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEdgeConstants {
    pub p0_prime: f64,
    pub p1_prime: f64,
    pub p2_prime: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Computes [`PairEdgeConstants`] for `p` with degree `d >= 2`.
pub fn pair_edge_constants(p: &ProbVector) -> Result<PairEdgeConstants> {
    let d = p.degree();
    if d < 2 {
        return Err(Error::DegreeTooSmall { degree: d, min: 2 });
    }
    let df = d as f64;
    let mut p0_prime = p.entry(0) + p.entry(1) * (df - 2.0) / df;
    for i in 2..=d.saturating_sub(2) {
        let fi = i as f64;
        p0_prime += p.entry(i) * (df - fi) * (df - fi - 1.0) / (df * (df - 1.0));
    }
    let mut half_p1 = p.entry(1) / df;
    for i in 2..=d.saturating_sub(1) {
        let fi = i as f64;
        half_p1 += p.entry(i) * fi * (df - fi) / (df * (df - 1.0));
    }
    let p1_prime = 2.0 * half_p1;
    let mut p2_prime = 0.0;
    for i in 2..=d {
        let fi = i as f64;
        p2_prime += p.entry(i) * fi * (fi - 1.0) / (df * (df - 1.0));
    }
    // P(x does not pick a fixed neighbor) = sum p_i (d-i)/d.
    let miss: f64 = (0..=d).map(|i| p.entry(i) * (df - i as f64) / df).sum();
    let q = 1.0 - miss * miss;
    let mean = (p1_prime + p2_prime) / 2.0;
    let disc = ((p0_prime + p1_prime / 2.0 + p2_prime / 4.0) * p2_prime).max(0.0);
    let root = disc.sqrt();
    Ok(PairEdgeConstants {
        p0_prime,
        p1_prime,
        p2_prime,
        q,
        alpha: mean + root,
        beta: mean - root,
    })
}

/// Decay-rate constants: `c` is the probability that a site picks a fixed
/// neighbor, `c_tilde` the two-sided analogue entering the strong-connection
/// bound, and `a`, `a_tilde` the concatenation constants of the cluster-size
/// submultiplicativity bounds on the hypercube lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayConstants {
    pub c: f64,
    pub c_tilde: f64,
    pub a: f64,
    pub a_tilde: f64,
}

/// Computes [`DecayConstants`]. Fails with [`Error::NoPositiveSupport`] when
/// `p_0 = 1` (the `a_tilde` minimum is over an empty set of ratios). The `a`
/// exponents are `3`, `2d - 4`, `d - 4` as printed, so `d = 4` uses a zeroth
/// power and `d < 4` a negative one.
pub fn decay_constants(p: &ProbVector) -> Result<DecayConstants> {
    let d = p.degree();
    let df = d as f64;
    let c: f64 = (1..=d).map(|i| p.entry(i) * i as f64 / df).sum();
    let pair: f64 = (2..=d)
        .map(|i| p.entry(i) * (i * (i - 1)) as f64 / (df * (df - 1.0)))
        .sum();
    let c_tilde = c * pair / (df * df);

    let avoid_two: f64 = (0..=d.saturating_sub(2))
        .map(|i| p.entry(i) * ((d - i) * (d - i - 1)) as f64 / (df * (df - 1.0)))
        .sum();
    let avoid_one: f64 = (0..=d.saturating_sub(1))
        .map(|i| p.entry(i) * (d - i) as f64 / df)
        .sum();
    let a = (2.0 * p.entry(2) / (df * (df - 1.0))).powi(3)
        * avoid_two.powi(2 * d as i32 - 4)
        * avoid_one.powi(d as i32 - 4);

    let k = (1..=d).find(|&j| p.entry(j) > 0.0).ok_or(Error::NoPositiveSupport)?;
    let mut m = 1.0_f64;
    for j in k..d {
        let ratio = p.entry(j + 1) / p.entry(j) * (j + 1) as f64 / (d - j) as f64;
        m = m.min(ratio);
    }
    let a_tilde = m * m;

    Ok(DecayConstants { c, c_tilde, a, a_tilde })
}

/// The dual-contour bound `b(p)`: the largest, over `i = 1..d-1`, of the
/// `i`-th root of the probability that a site avoids `i` marked slots.
pub fn b_value(p: &ProbVector) -> f64 {
    let d = p.degree();
    assert!(d >= 2, "b(p) needs degree >= 2");
    let mut best = 0.0_f64;
    for i in 1..d {
        let mut sum = 0.0;
        for j in 0..=(d - i) {
            let mut prod = p.entry(j);
            for k in 0..i {
                prod *= ((d - k) as f64 - j as f64) / (d - k) as f64;
            }
            sum += prod;
        }
        best = best.max(sum.powf(1.0 / i as f64));
    }
    best
}

/// Number of labelled skeletons with `n_exterior >= 3` exterior vertices:
/// the odd double factorial `1 * 3 * ... * (2 n_exterior - 5)`, computed in
/// checked integer arithmetic.
pub fn skeleton_count(n_exterior: u32) -> Result<u128> {
    assert!(n_exterior >= 3, "skeleton_count needs n_exterior >= 3");
    let mut acc: u128 = 1;
    for j in 1..=(n_exterior - 2) {
        let factor = (2 * j - 1) as u128;
        acc = acc.checked_mul(factor).ok_or(Error::Overflow(n_exterior))?;
    }
    Ok(acc)
}
