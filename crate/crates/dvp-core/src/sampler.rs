//! Drawing configurations from the product measure, plus the monotone
//! coupling that drives a whole tail-ordered chain of distributions from one
//! uniform variate per site.
//!
//! Randomness contract: every random quantity is produced by [`CounterRng`],
//! keyed by `(seed, trial, unit)` where `unit` is a vertex id (window
//! sampling) or a deterministic node counter (tree simulation). Identical
//! keys give identical draws on every platform and under any parallel
//! schedule.

use crate::error::{Error, Result};
use crate::graph::{GraphWindow, MAX_DEGREE};
use crate::prob::{dominates, ProbVector};

/// A per-site choice configuration: bit `i` of `mask(v)` is set iff slot
/// `i + 1` of `v` is selected. Ghost slots may be selected; they simply
/// never produce connections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    degree: usize,
    masks: Vec<u16>,
}

impl Configuration {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vertex_count(&self) -> usize {
        self.masks.len()
    }

    #[inline]
    pub fn mask(&self, v: u32) -> u16 {
        self.masks[v as usize]
    }

    /// True iff vertex `v` selected its slot `i`.
    #[inline]
    pub fn selects(&self, v: u32, slot: usize) -> bool {
        self.masks[v as usize] >> slot & 1 == 1
    }

    /// Builds a configuration from raw masks (test and enumeration use).
    pub fn from_masks(degree: usize, masks: Vec<u16>) -> Self {
        debug_assert!(masks.iter().all(|&m| m >> degree == 0));
        Configuration { degree, masks }
    }
}

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Counter-based generator keyed by `(seed, trial, unit)`.
///
/// The key schedule is normative for reproducibility: three SplitMix64
/// mixing rounds fold the key into a stream state, and successive outputs
/// are the SplitMix64 sequence from that state.
#[derive(Debug, Clone)]
pub struct CounterRng {
    state: u64,
}

impl CounterRng {
    pub fn new(seed: u64, trial: u64, unit: u64) -> Self {
        let s0 = mix64(seed ^ GOLDEN);
        let s1 = mix64(s0 ^ trial.wrapping_mul(0xBF58_476D_1CE4_E5B9));
        let s2 = mix64(s1 ^ unit.wrapping_mul(0x94D0_49BB_1331_11EB));
        CounterRng { state: s2 }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..n`, unbiased (Lemire widening rejection).
    #[inline]
    pub fn below(&mut self, n: u32) -> u32 {
        debug_assert!(n > 0);
        let mut x = self.next_u32();
        let mut m = x as u64 * n as u64;
        let mut lo = m as u32;
        if lo < n {
            let threshold = n.wrapping_neg() % n;
            while lo < threshold {
                x = self.next_u32();
                m = x as u64 * n as u64;
                lo = m as u32;
            }
        }
        (m >> 32) as u32
    }
}

/// Draws the size `k` given thresholds `cums[k] = p_0 + ... + p_k`.
#[inline]
fn draw_size(u: f64, cums: &[f64]) -> usize {
    cums.iter().position(|&c| u < c).unwrap_or(cums.len() - 1)
}

/// Uniform `k`-subset of `0..d` as a bitmask, via partial Fisher-Yates.
#[inline]
fn draw_subset(rng: &mut CounterRng, d: usize, k: usize) -> u16 {
    debug_assert!(d <= MAX_DEGREE);
    let mut idx: [u8; MAX_DEGREE] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];
    let mut mask = 0u16;
    for i in 0..k {
        let j = i + rng.below((d - i) as u32) as usize;
        idx.swap(i, j);
        mask |= 1 << idx[i];
    }
    mask
}

/// Samples one configuration from the product measure: each vertex draws a
/// size `k` with probability `p_k`, then a uniform `k`-subset of its `d`
/// slots. Vertex `v` uses the random stream keyed by `(seed, trial, v)`.
pub fn sample_config(
    window: &GraphWindow,
    p: &ProbVector,
    seed: u64,
    trial: u64,
) -> Result<Configuration> {
    let d = window.degree();
    if p.degree() != d {
        return Err(Error::DegreeMismatch { left: p.degree(), right: d });
    }
    let cums = p.cumulative();
    let mut masks = Vec::with_capacity(window.vertex_count());
    for v in 0..window.vertex_count() as u64 {
        let mut rng = CounterRng::new(seed, trial, v);
        let k = draw_size(rng.next_f64(), &cums);
        masks.push(draw_subset(&mut rng, d, k));
    }
    Ok(Configuration { degree: d, masks })
}

/// Number of permutations of the slot set.
fn factorial(d: usize) -> u64 {
    (1..=d as u64).product()
}

/// The `j`-th permutation of `0..d` in lexicographic order (0-based rank).
fn unrank_permutation(mut rank: u64, d: usize) -> [u8; MAX_DEGREE] {
    let mut pool: [u8; MAX_DEGREE] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];
    let mut out = [0u8; MAX_DEGREE];
    let mut base = factorial(d);
    for i in 0..d {
        base /= (d - i) as u64;
        let pick = (rank / base) as usize;
        rank %= base;
        out[i] = pool[pick];
        pool.copy_within(pick + 1..d, pick);
    }
    out
}

/// One step of the coupling: with `u` uniform on `[0, 1)`, the block index
/// selects a permutation of the slots and the within-block position selects
/// the size via the cumulative thresholds; the chosen subset is the size-`k`
/// prefix of the permutation.
#[inline]
fn eta_mask(u: f64, d: usize, fact: u64, cums: &[f64]) -> u16 {
    let scaled = u * fact as f64;
    let block = (scaled as u64).min(fact - 1);
    let within = scaled - block as f64;
    let k = draw_size(within, cums);
    let perm = unrank_permutation(block, d);
    let mut mask = 0u16;
    for &slot in perm.iter().take(k) {
        mask |= 1 << slot;
    }
    mask
}

/// Draws one coupled configuration per distribution in `ps`, which must be
/// sorted ascending in the tail-sum order. A single uniform variate per
/// vertex drives all of them, so the returned masks are nested:
/// `mask_i(v)` is a subset of `mask_{i+1}(v)` for every vertex.
pub fn coupled_sample(
    window: &GraphWindow,
    ps: &[ProbVector],
    seed: u64,
    trial: u64,
) -> Result<Vec<Configuration>> {
    assert!(!ps.is_empty());
    let d = window.degree();
    for p in ps {
        if p.degree() != d {
            return Err(Error::DegreeMismatch { left: p.degree(), right: d });
        }
    }
    for pair in ps.windows(2) {
        if !dominates(&pair[0], &pair[1])? {
            return Err(Error::NotComparable);
        }
    }
    let fact = factorial(d);
    let cums: Vec<Vec<f64>> = ps.iter().map(|p| p.cumulative()).collect();
    let mut out: Vec<Configuration> = ps
        .iter()
        .map(|_| Configuration {
            degree: d,
            masks: Vec::with_capacity(window.vertex_count()),
        })
        .collect();
    for v in 0..window.vertex_count() as u64 {
        let mut rng = CounterRng::new(seed, trial, v);
        let u = rng.next_f64();
        for (i, cum) in cums.iter().enumerate() {
            out[i].masks.push(eta_mask(u, d, fact, cum));
        }
    }
    Ok(out)
}

/// Exact subset law induced by the coupling construction, computed by
/// enumerating all `d! * (d + 1)` breakpoint intervals: entry `mask` is the
/// total length of the intervals mapping to that subset. Agrees with
/// `p_k / binom(d, k)` to within a few ulps.
pub fn eta_subset_law(d: usize, p: &ProbVector) -> Result<Vec<f64>> {
    if p.degree() != d {
        return Err(Error::DegreeMismatch { left: p.degree(), right: d });
    }
    if d > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { degree: d, max: MAX_DEGREE });
    }
    let fact = factorial(d);
    let mut law = vec![0.0f64; 1 << d];
    for block in 0..fact {
        let perm = unrank_permutation(block, d);
        let mut mask = 0u16;
        // Size-k interval inside this block has length p_k / d!.
        law[0] += p.entry(0) / fact as f64;
        for k in 1..=d {
            mask |= 1 << perm[k - 1];
            law[mask as usize] += p.entry(k) / fact as f64;
        }
    }
    Ok(law)
}

/// `binom(d, k)` for the small degrees supported here.
pub fn binomial(d: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (d - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_window, GraphKind};

    fn pv(entries: &[f64]) -> ProbVector {
        ProbVector::new(entries).unwrap()
    }

    #[test]
    fn point_masses_are_deterministic() {
        let w = build_window(&GraphKind::Line, 4).unwrap();
        let empty = sample_config(&w, &pv(&[1.0, 0.0, 0.0]), 7, 0).unwrap();
        assert!(empty.masks.iter().all(|&m| m == 0));
        let full = sample_config(&w, &pv(&[0.0, 0.0, 1.0]), 7, 0).unwrap();
        assert!(full.masks.iter().all(|&m| m == 0b11));
    }

    #[test]
    fn single_slot_frequency() {
        // d = 2, p = (0,1,0): each vertex picks exactly one side uniformly.
        let w = build_window(&GraphKind::Line, 1).unwrap();
        let p = pv(&[0.0, 1.0, 0.0]);
        let trials = 1_000_000u64;
        let mut ones = 0u64;
        for t in 0..trials {
            let c = sample_config(&w, &p, 42, t).unwrap();
            assert_eq!(c.mask(0).count_ones(), 1);
            if c.mask(0) == 0b01 {
                ones += 1;
            }
        }
        let freq = ones as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.002, "freq = {freq}");
    }

    #[test]
    fn identical_keys_reproduce() {
        let w = build_window(&GraphKind::Square, 3).unwrap();
        let p = pv(&[0.2, 0.3, 0.3, 0.1, 0.1]);
        let a = sample_config(&w, &p, 9, 17).unwrap();
        let b = sample_config(&w, &p, 9, 17).unwrap();
        assert_eq!(a, b);
        let c = sample_config(&w, &p, 9, 18).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unrank_is_lexicographic() {
        assert_eq!(&unrank_permutation(0, 3)[..3], &[0, 1, 2]);
        assert_eq!(&unrank_permutation(1, 3)[..3], &[0, 2, 1]);
        assert_eq!(&unrank_permutation(2, 3)[..3], &[1, 0, 2]);
        assert_eq!(&unrank_permutation(5, 3)[..3], &[2, 1, 0]);
    }

    #[test]
    fn eta_law_matches_subset_probabilities() {
        for d in 2..=4usize {
            let raw: Vec<f64> = (0..=d).map(|i| (i + 1) as f64).collect();
            let s: f64 = raw.iter().sum();
            let p = pv(&raw.iter().map(|v| v / s).collect::<Vec<_>>());
            let law = eta_subset_law(d, &p).unwrap();
            for mask in 0..(1usize << d) {
                let k = (mask as u32).count_ones() as usize;
                let expected = p.entry(k) / binomial(d, k);
                assert!(
                    (law[mask] - expected).abs() < 1e-15,
                    "d={d} mask={mask:b}: {} vs {}",
                    law[mask],
                    expected
                );
            }
        }
    }

    #[test]
    fn coupled_extremes_and_identical() {
        let w = build_window(&GraphKind::Line, 3).unwrap();
        let lo = pv(&[1.0, 0.0, 0.0]);
        let hi = pv(&[0.0, 0.0, 1.0]);
        let configs = coupled_sample(&w, &[lo, hi], 3, 5).unwrap();
        assert!(configs[0].masks.iter().all(|&m| m == 0));
        assert!(configs[1].masks.iter().all(|&m| m == 0b11));

        let p = pv(&[0.3, 0.4, 0.3]);
        let configs = coupled_sample(&w, &[p.clone(), p], 3, 5).unwrap();
        assert_eq!(configs[0], configs[1]);
    }

    #[test]
    fn coupled_rejects_incomparable() {
        let w = build_window(&GraphKind::Line, 2).unwrap();
        let p = pv(&[0.5, 0.0, 0.5]);
        let q = pv(&[0.0, 1.0, 0.0]);
        // Neither dominates: tails of p are (1, .5, .5), of q (1, 1, 0).
        assert!(matches!(
            coupled_sample(&w, &[p, q], 0, 0),
            Err(Error::NotComparable)
        ));
    }

    #[test]
    fn coupled_chain_is_nested() {
        let w = build_window(&GraphKind::Square, 3).unwrap();
        let chain = vec![
            pv(&[1.0, 0.0, 0.0, 0.0, 0.0]),
            pv(&[0.4, 0.3, 0.3, 0.0, 0.0]),
            pv(&[0.1, 0.2, 0.3, 0.2, 0.2]),
            pv(&[0.0, 0.0, 0.0, 0.0, 1.0]),
        ];
        for trial in 0..200 {
            let configs = coupled_sample(&w, &chain, 11, trial).unwrap();
            for pair in configs.windows(2) {
                for v in 0..w.vertex_count() as u32 {
                    let (a, b) = (pair[0].mask(v), pair[1].mask(v));
                    assert_eq!(a & !b, 0, "mask not nested at vertex {v}");
                }
            }
        }
    }

    #[test]
    fn direct_and_eta_samplers_agree_in_law() {
        // Chi-square goodness of fit of both samplers against the exact
        // subset law at d = 4; threshold is the 1e-3 quantile at 15 dof.
        let w = build_window(&GraphKind::Square, 1).unwrap();
        let p = pv(&[0.15, 0.25, 0.2, 0.25, 0.15]);
        let trials = 100_000u64;
        let mut direct = [0u64; 16];
        let mut eta = [0u64; 16];
        for t in 0..trials {
            direct[sample_config(&w, &p, 5, t).unwrap().mask(0) as usize] += 1;
            eta[coupled_sample(&w, std::slice::from_ref(&p), 5, t).unwrap()[0].mask(0) as usize] += 1;
        }
        let chi2 = |counts: &[u64; 16]| -> f64 {
            let mut stat = 0.0;
            for mask in 0..16usize {
                let k = (mask as u32).count_ones() as usize;
                let expected = trials as f64 * p.entry(k) / binomial(4, k);
                stat += (counts[mask] as f64 - expected).powi(2) / expected;
            }
            stat
        };
        const CHI2_CRIT_15_DOF_1E3: f64 = 37.6973;
        assert!(chi2(&direct) < CHI2_CRIT_15_DOF_1E3, "direct: {}", chi2(&direct));
        assert!(chi2(&eta) < CHI2_CRIT_15_DOF_1E3, "eta: {}", chi2(&eta));
    }
}
