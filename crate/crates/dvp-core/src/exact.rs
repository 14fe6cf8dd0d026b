//! Closed forms and thresholds: mean cluster sizes and connection
//! probabilities on the 2-regular chain, the tree mean matrices with their
//! critical points, and the sufficient-condition checkers for `theta = 0`
//! (via the connective constant) and `theta > 0` (via the dual contour
//! bound).

use crate::cluster::Mode;
use crate::error::{Error, Result};
use crate::prob::{b_value, pair_edge_constants, ProbVector};

/// Mean weak and strong cluster sizes on the 2-regular chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T2Chi {
    pub chi: f64,
    pub chi_tilde: f64,
}

/// Mean cluster sizes on the 2-regular chain; diverges at `p_2 = 1`.
pub fn t2_chi(p: &ProbVector) -> Result<T2Chi> {
    require_degree(p, 2)?;
    let (p0, p1, p2) = (p.entry(0), p.entry(1), p.entry(2));
    if p2 >= 1.0 {
        return Err(Error::P2IsOne);
    }
    let chi = 8.0 * (1.0 + p0) / (2.0 * p0 + p1).powi(2) - 3.0;
    let chi_tilde = (2.0 * p2 + p1).powi(2) / (2.0 * (1.0 - p2)) + 1.0;
    Ok(T2Chi { chi, chi_tilde })
}

/// Point-to-point connection probability on the chain: the probability that
/// the origin is connected to the vertex `n` steps away.
///
/// The weak value follows the two-step recurrence
/// `P_n = (p_1 + p_2) P_{n-1} - ((p_1/2)^2 - p_0 p_2) P_{n-2}`
/// from `P_0 = 1` and
/// `P_1 = (p_1/2 + p_2)(1 + p_0 + p_1/2)`; the strong value is the closed
/// form `(p_2 + p_1/2)^2 p_2^(n-1)`.
pub fn t2_connection(p: &ProbVector, n: u32, mode: Mode) -> f64 {
    debug_assert_eq!(p.degree(), 2);
    let (p0, p1, p2) = (p.entry(0), p.entry(1), p.entry(2));
    match mode {
        Mode::Weak => {
            if n == 0 {
                return 1.0;
            }
            let p1h = p1 / 2.0;
            let mut prev = 1.0;
            let mut cur = (p1h + p2) * (1.0 + p0 + p1h);
            let lin = p1 + p2;
            let sq = p1h * p1h - p0 * p2;
            for _ in 1..n {
                let next = lin * cur - sq * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
        Mode::Strong => {
            if n == 0 {
                1.0
            } else {
                (p2 + p1 / 2.0).powi(2) * p2.powi(n as i32 - 1)
            }
        }
    }
}

/// Expected-offspring matrix of the level-by-level tree reduction, with its
/// spectral radius.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanMatrix {
    pub mode: Mode,
    /// 4 for the weak reduction, 2 for the strong one.
    pub dim: usize,
    /// Row-major `m[j][i]`: expected type-`j` children of a type-`i` parent.
    pub entries: Vec<f64>,
    pub spectral_radius: f64,
}

impl MeanMatrix {
    pub fn entry(&self, j: usize, i: usize) -> f64 {
        self.entries[j * self.dim + i]
    }
}

/// Weak-mode mean matrix on the d-regular tree for the size mix
/// `p_1 = 1 - p`, `p_2 = p`. The four types record whether a vertex picked
/// its parent and how many children it picked.
pub fn tree_weak_matrix(d: usize, p: f64) -> MeanMatrix {
    assert!(d >= 3, "tree reduction needs d >= 3");
    assert!((0.0..=1.0).contains(&p));
    let df = d as f64;
    let a = (1.0 - p) * (df - 1.0) / df;
    let b = 2.0 * p * (df - 1.0) / df;
    let c = p * (df - 2.0) / df;
    let entries = vec![
        a, a, a, a, //
        b, b, b, b, //
        0.0, a, a, 2.0 * a, //
        0.0, c, c, 2.0 * c,
    ];
    MeanMatrix {
        mode: Mode::Weak,
        dim: 4,
        entries,
        spectral_radius: tree_weak_rho(d, p),
    }
}

/// Largest eigenvalue of the weak-mode tree matrix:
/// `((d-2)p + (d-1) + sqrt((3-2d)p^2 + 2(d-1)^2 p)) / d`.
pub fn tree_weak_rho(d: usize, p: f64) -> f64 {
    let df = d as f64;
    let disc = ((3.0 - 2.0 * df) * p * p + 2.0 * (df - 1.0).powi(2) * p).max(0.0);
    ((df - 2.0) * p + (df - 1.0) + disc.sqrt()) / df
}

/// Critical point of the weak tree process with sizes mixed on `{1, 2}`:
/// `1 / ((d^2 - d - 1) + sqrt((d^2 - d - 1)^2 - (d - 1)^2))`.
pub fn tree_weak_threshold(d: usize) -> f64 {
    assert!(d >= 3);
    let df = d as f64;
    let m = df * df - df - 1.0;
    1.0 / (m + (m * m - (df - 1.0).powi(2)).sqrt())
}

/// Strong-mode mean matrix for the size mix `p_k = 1 - p`,
/// `p_{k+1} = p` with `2 <= k <= d - 1`. The two types record whether a
/// vertex picked `k - 1` or `k` of its children besides the parent.
pub fn tree_strong_matrix(d: usize, k: usize, p: f64) -> Result<MeanMatrix> {
    assert!(d >= 3);
    assert!((0.0..=1.0).contains(&p));
    if !(2..=d - 1).contains(&k) {
        return Err(Error::KOutOfRange { k, d });
    }
    let df = d as f64;
    let kf = k as f64;
    let pk = 1.0 - p;
    let pk1 = p;
    let entries = vec![
        pk * kf * (kf - 1.0) / df,
        pk * kf * kf / df,
        pk1 * (kf + 1.0) * (kf - 1.0) / df,
        pk1 * (kf + 1.0) * kf / df,
    ];
    // The matrix is singular, so the spectral radius is the trace.
    let spectral_radius = kf * (2.0 * p + kf - 1.0) / df;
    Ok(MeanMatrix {
        mode: Mode::Strong,
        dim: 2,
        entries,
        spectral_radius,
    })
}

/// Where a strong threshold sits relative to the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdRegime {
    /// `0 < value < 1`: a genuine critical point.
    Interior,
    /// `value <= 0` (`d <= k(k-1)`): supercritical for every `p > 0`.
    AlwaysPercolates,
    /// `value >= 1` (`d >= k(k+1)`): subcritical for every `p <= 1`.
    NeverPercolates,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongThreshold {
    pub value: f64,
    pub regime: ThresholdRegime,
}

/// Critical point `(d - k(k-1)) / (2k)` of the strong tree process, with an
/// explicit flag when it falls outside `(0, 1)`.
pub fn tree_strong_threshold(d: usize, k: usize) -> Result<StrongThreshold> {
    assert!(d >= 3);
    if !(2..=d - 1).contains(&k) {
        return Err(Error::KOutOfRange { k, d });
    }
    let value = (d as f64 - (k * (k - 1)) as f64) / (2 * k) as f64;
    let regime = if value <= 0.0 {
        ThresholdRegime::AlwaysPercolates
    } else if value >= 1.0 {
        ThresholdRegime::NeverPercolates
    } else {
        ThresholdRegime::Interior
    };
    Ok(StrongThreshold { value, regime })
}

/// Outcome of a sufficient-condition check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    ThetaZero,
    ThetaPositive,
    Inconclusive,
}

impl Conclusion {
    pub fn name(self) -> &'static str {
        match self {
            Conclusion::ThetaZero => "theta_zero",
            Conclusion::ThetaPositive => "theta_positive",
            Conclusion::Inconclusive => "inconclusive",
        }
    }
}

/// The inequality instance behind a verdict, with its numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// Human-readable statement, e.g. `lambda * alpha < 1`.
    pub requirement: String,
    pub lambda: f64,
    pub factor: f64,
    pub product: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionVerdict {
    pub conclusion: Conclusion,
    pub mode: Mode,
    pub certificate: Certificate,
}

/// Sufficient condition for `theta = 0`: weak mode requires
/// `lambda(G) * alpha < 1` with `alpha` the larger pair-edge root; strong
/// mode requires `lambda(G) * p2' < 1`.
pub fn check_subcritical(p: &ProbVector, lambda_g: f64, mode: Mode) -> Result<ConditionVerdict> {
    require_min_degree(p, 3)?;
    let constants = pair_edge_constants(p)?;
    let (factor, name) = match mode {
        Mode::Weak => (constants.alpha, "alpha"),
        Mode::Strong => (constants.p2_prime, "p2'"),
    };
    let product = lambda_g * factor;
    let conclusion = if product < 1.0 {
        Conclusion::ThetaZero
    } else {
        Conclusion::Inconclusive
    };
    Ok(ConditionVerdict {
        conclusion,
        mode,
        certificate: Certificate {
            requirement: format!("lambda * {name} < 1"),
            lambda: lambda_g,
            factor,
            product,
        },
    })
}

/// Sufficient condition for `theta > 0` on planar graphs: weak mode requires
/// `lambda(G*) * b(p)^2 < 1`; strong mode requires `lambda(G*) * b(p) < 1`
/// together with `p_0 + p_1 < 1`.
pub fn check_supercritical(
    p: &ProbVector,
    lambda_dual: f64,
    mode: Mode,
) -> Result<ConditionVerdict> {
    require_min_degree(p, 2)?;
    let b = b_value(p);
    let (factor, name) = match mode {
        Mode::Weak => (b * b, "b^2"),
        Mode::Strong => (b, "b"),
    };
    let product = lambda_dual * factor;
    let extra_ok = match mode {
        Mode::Weak => true,
        Mode::Strong => p.entry(0) + p.entry(1) < 1.0,
    };
    let conclusion = if product < 1.0 && extra_ok {
        Conclusion::ThetaPositive
    } else {
        Conclusion::Inconclusive
    };
    let requirement = match mode {
        Mode::Weak => format!("lambda_dual * {name} < 1"),
        Mode::Strong => format!("lambda_dual * {name} < 1 and p0 + p1 < 1"),
    };
    Ok(ConditionVerdict {
        conclusion,
        mode,
        certificate: Certificate {
            requirement,
            lambda: lambda_dual,
            factor,
            product,
        },
    })
}

/// Degree-only sufficient condition via the bound
/// `lambda(G*) <= d* - 1`: percolation of heavy mixes holds when `d = k` or
/// `d* - 1 < (d/(d-k))^2` (weak) / `d* - 1 < d/(d-k)` (strong).
pub fn check_corollary_rows(d: usize, d_star: usize, k: usize, mode: Mode) -> bool {
    assert!((2..=d).contains(&k));
    check_with_lambda_dual(d, k, (d_star - 1) as f64, mode)
}

/// The same condition with an explicit dual connective constant, for
/// catalogs that know the exact value.
pub fn check_with_lambda_dual(d: usize, k: usize, lambda_dual: f64, mode: Mode) -> bool {
    assert!((2..=d).contains(&k));
    if d == k {
        return true;
    }
    let ratio = d as f64 / (d - k) as f64;
    let bound = match mode {
        Mode::Weak => ratio * ratio,
        Mode::Strong => ratio,
    };
    lambda_dual < bound
}

fn require_degree(p: &ProbVector, d: usize) -> Result<()> {
    if p.degree() != d {
        return Err(Error::DegreeMismatch { left: p.degree(), right: d });
    }
    Ok(())
}

fn require_min_degree(p: &ProbVector, min: usize) -> Result<()> {
    if p.degree() < min {
        return Err(Error::DegreeTooSmall { degree: p.degree(), min });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LAMBDA_HEXAGONAL;

    fn pv(entries: &[f64]) -> ProbVector {
        ProbVector::new(entries).unwrap()
    }

    /// Brute-force chain connection probability: enumerate the states of
    /// vertices 0..=n and multiply the one-vertex weights along each open
    /// chain. State bits per vertex: 1 = toward the origin side, 2 = away.
    fn t2_brute(p: &ProbVector, n: u32, mode: Mode) -> f64 {
        let (p0, p1, p2) = (p.entry(0), p.entry(1), p.entry(2));
        let weight = |s: usize| match s {
            0 => p0,
            1 | 2 => p1 / 2.0,
            _ => p2,
        };
        let verts = n as usize + 1;
        let mut total = 0.0;
        for code in 0..4usize.pow(verts as u32) {
            let state = |v: usize| code >> (2 * v) & 3;
            let mut w = 1.0;
            for v in 0..verts {
                w *= weight(state(v));
            }
            let mut open_all = true;
            for v in 0..verts - 1 {
                let fwd = state(v) & 2 != 0; // v picks v+1
                let bwd = state(v + 1) & 1 != 0; // v+1 picks v
                let open = match mode {
                    Mode::Weak => fwd || bwd,
                    Mode::Strong => fwd && bwd,
                };
                if !open {
                    open_all = false;
                    break;
                }
            }
            if open_all {
                total += w;
            }
        }
        total
    }

    #[test]
    fn chi_closed_forms() {
        let c = t2_chi(&pv(&[1.0, 0.0, 0.0])).unwrap();
        assert!((c.chi - 1.0).abs() < 1e-15);
        assert!((c.chi_tilde - 1.0).abs() < 1e-15);
        let c = t2_chi(&pv(&[0.0, 1.0, 0.0])).unwrap();
        assert!((c.chi - 5.0).abs() < 1e-15);
        assert!((c.chi_tilde - 1.5).abs() < 1e-15);
        let c = t2_chi(&pv(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])).unwrap();
        assert!((c.chi - 23.0 / 3.0).abs() < 1e-12);
        assert!(matches!(t2_chi(&pv(&[0.0, 0.0, 1.0])), Err(Error::P2IsOne)));
    }

    #[test]
    fn connection_examples() {
        let p = pv(&[0.0, 1.0, 0.0]);
        assert!((t2_connection(&p, 1, Mode::Weak) - 0.75).abs() < 1e-15);
        assert!((t2_connection(&p, 2, Mode::Weak) - 0.5).abs() < 1e-15);
        assert!((t2_connection(&p, 1, Mode::Strong) - 0.25).abs() < 1e-15);
        assert_eq!(t2_connection(&p, 2, Mode::Strong), 0.0);
        assert_eq!(t2_connection(&pv(&[0.2, 0.5, 0.3]), 0, Mode::Weak), 1.0);
    }

    #[test]
    fn connection_matches_brute_force() {
        for p in [
            pv(&[0.0, 1.0, 0.0]),
            pv(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]),
            pv(&[0.2, 0.5, 0.3]),
            pv(&[0.5, 0.0, 0.5]),
            pv(&[0.05, 0.15, 0.8]),
        ] {
            for n in 0..=4 {
                for mode in [Mode::Weak, Mode::Strong] {
                    let fast = t2_connection(&p, n, mode);
                    let brute = t2_brute(&p, n, mode);
                    assert!(
                        (fast - brute).abs() < 1e-12,
                        "{p:?} n={n} {mode:?}: {fast} vs {brute}"
                    );
                }
            }
        }
    }

    #[test]
    fn connection_matches_characteristic_roots() {
        // Closed form via the characteristic roots, repeated-root branch
        // included, across a deterministic grid of 100 distributions.
        let mut count = 0;
        for i in 0..10 {
            for j in 0..=10 {
                let p0 = i as f64 / 10.0;
                let p1 = (1.0 - p0) * j as f64 / 10.0;
                let p2 = 1.0 - p0 - p1;
                if p2 >= 1.0 {
                    continue;
                }
                let p = pv(&[p0, p1, p2]);
                count += 1;
                let roots = crate::prob::pair_edge_constants(&p).unwrap();
                let (alpha, beta) = (roots.alpha, roots.beta);
                let p1v = t2_connection(&p, 1, Mode::Weak);
                for n in 0..=20u32 {
                    let direct = t2_connection(&p, n, Mode::Weak);
                    let closed = if (alpha - beta).abs() >= 1e-12 {
                        (alpha.powi(n as i32) * (p1v - beta)
                            - beta.powi(n as i32) * (p1v - alpha))
                            / (alpha - beta)
                    } else if alpha > 0.0 {
                        let b = p1v / alpha - 1.0;
                        (1.0 + b * n as f64) * alpha.powi(n as i32)
                    } else {
                        if n == 0 { 1.0 } else { 0.0 }
                    };
                    assert!(
                        (direct - closed).abs() < 1e-10,
                        "p=({p0},{p1},{p2}) n={n}: {direct} vs {closed}"
                    );
                }
            }
        }
        assert!(count >= 100);
    }

    #[test]
    fn chi_equals_connection_series() {
        for p in [
            pv(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]),
            pv(&[0.0, 1.0, 0.0]),
            pv(&[0.6, 0.1, 0.3]),
        ] {
            let closed = t2_chi(&p).unwrap();
            let mut weak_sum = 0.0;
            let mut strong_sum = 0.0;
            for n in 1..5000 {
                let w = t2_connection(&p, n, Mode::Weak);
                let s = t2_connection(&p, n, Mode::Strong);
                weak_sum += w;
                strong_sum += s;
                if w < 1e-16 && s < 1e-16 {
                    break;
                }
            }
            assert!((closed.chi - (1.0 + 2.0 * weak_sum)).abs() < 1e-8);
            assert!((closed.chi_tilde - (1.0 + 2.0 * strong_sum)).abs() < 1e-8);
        }
    }

    /// Characteristic polynomial coefficients via Faddeev-LeVerrier; an
    /// eigenvalue route independent of the printed formula.
    fn char_poly(m: &MeanMatrix) -> Vec<f64> {
        let n = m.dim;
        let mut coeffs = vec![1.0];
        let mut mk = vec![0.0; n * n]; // M_0 = 0, c_0 = 1
        let mut identity_scale = 1.0;
        for k in 1..=n {
            // M_k = M (M_{k-1} + c_{k-1} I)
            let mut prev = mk.clone();
            for i in 0..n {
                prev[i * n + i] += identity_scale;
            }
            let mut next = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for t in 0..n {
                        acc += m.entry(i, t) * prev[t * n + j];
                    }
                    next[i * n + j] = acc;
                }
            }
            let trace: f64 = (0..n).map(|i| next[i * n + i]).sum();
            let ck = -trace / k as f64;
            coeffs.push(ck);
            identity_scale = ck;
            mk = next;
        }
        coeffs
    }

    #[test]
    fn weak_matrix_eigenvalues_match_printed_formula() {
        for d in 3..=10 {
            for step in 1..100 {
                let p = step as f64 / 100.0;
                let m = tree_weak_matrix(d, p);
                let c = char_poly(&m);
                // Two zero eigenvalues: the last two coefficients vanish.
                assert!(c[3].abs() < 1e-12 && c[4].abs() < 1e-12, "d={d} p={p}");
                // Remaining quadratic: x^2 + c1 x + c2.
                let disc = (c[1] * c[1] - 4.0 * c[2]).max(0.0).sqrt();
                let rho_numeric = (-c[1] + disc) / 2.0;
                assert!(
                    (rho_numeric - m.spectral_radius).abs() < 1e-10,
                    "d={d} p={p}: {rho_numeric} vs {}",
                    m.spectral_radius
                );
            }
        }
    }

    #[test]
    fn weak_threshold_properties() {
        let pc3 = tree_weak_threshold(3);
        assert!((pc3 - 1.0 / (5.0 + 21f64.sqrt())).abs() < 1e-15);
        assert!((pc3 - 0.10435608).abs() < 1e-8);
        let pc4 = tree_weak_threshold(4);
        assert!((pc4 - 1.0 / (11.0 + 112f64.sqrt())).abs() < 1e-15);
        // Criticality, monotonicity, and the 1/(2 d^2) asymptote.
        let mut last = 1.0;
        for d in 3..=10 {
            let pc = tree_weak_threshold(d);
            assert!(pc > 0.0 && pc < 1.0 && pc < last);
            last = pc;
            assert!((tree_weak_rho(d, pc) - 1.0).abs() < 1e-10);
        }
        let d = 4000;
        let scaled = (d * d) as f64 * tree_weak_threshold(d);
        assert!((scaled - 0.5).abs() < 1e-3, "d^2 p_c = {scaled}");
    }

    #[test]
    fn weak_rho_endpoints() {
        for d in 3..=8 {
            let df = d as f64;
            assert!((tree_weak_rho(d, 0.0) - (df - 1.0) / df).abs() < 1e-15);
        }
        // d = 3, p = 1: (1 + 2 + sqrt(5)) / 3.
        assert!((tree_weak_rho(3, 1.0) - (3.0 + 5f64.sqrt()) / 3.0).abs() < 1e-15);
        assert!(tree_weak_rho(3, 1.0) > 1.0);
    }

    #[test]
    fn strong_matrix_and_threshold() {
        let t = tree_strong_threshold(4, 2).unwrap();
        assert_eq!(t.value, 0.5);
        assert_eq!(t.regime, ThresholdRegime::Interior);
        let t = tree_strong_threshold(6, 3).unwrap();
        assert_eq!(t.value, 0.0);
        assert_eq!(t.regime, ThresholdRegime::AlwaysPercolates);
        let t = tree_strong_threshold(8, 2).unwrap();
        assert!(t.value >= 1.0);
        assert_eq!(t.regime, ThresholdRegime::NeverPercolates);
        assert!(matches!(
            tree_strong_matrix(4, 5, 0.5),
            Err(Error::KOutOfRange { .. })
        ));

        // rho at the threshold is 1; the 2x2 matrix is singular so the trace
        // carries the whole spectrum.
        for (d, k) in [(3, 2), (4, 2), (5, 2), (6, 3), (7, 3), (10, 3)] {
            let t = tree_strong_threshold(d, k).unwrap();
            let p = t.value.clamp(0.0, 1.0);
            let m = tree_strong_matrix(d, k, p).unwrap();
            if t.regime == ThresholdRegime::Interior || t.value == 0.0 {
                assert!((m.spectral_radius - 1.0).abs() < 1e-12, "d={d} k={k}");
            }
            let det = m.entry(0, 0) * m.entry(1, 1) - m.entry(0, 1) * m.entry(1, 0);
            assert!(det.abs() < 1e-15);
        }
    }

    #[test]
    fn subcritical_examples() {
        let v = check_subcritical(&pv(&[1.0, 0.0, 0.0, 0.0]), 2.0, Mode::Weak).unwrap();
        assert_eq!(v.conclusion, Conclusion::ThetaZero);
        assert!(v.certificate.factor.abs() < 1e-15);

        let v = check_subcritical(&pv(&[0.9, 0.1, 0.0, 0.0, 0.0]), 3.0, Mode::Weak).unwrap();
        assert_eq!(v.conclusion, Conclusion::ThetaZero);
        assert!(v.certificate.product < 1.0);

        let v = check_subcritical(&pv(&[0.0, 0.0, 0.0, 0.0, 1.0]), 3.0, Mode::Weak).unwrap();
        assert_eq!(v.conclusion, Conclusion::Inconclusive);
    }

    #[test]
    fn subcritical_verdicts_monotone_along_chain() {
        // If theta = 0 is certified at p, it stays certified after moving
        // mass down (the certificate factor only shrinks).
        let high = pv(&[0.85, 0.1, 0.05, 0.0, 0.0]);
        let low = pv(&[0.95, 0.04, 0.01, 0.0, 0.0]);
        assert!(crate::prob::dominates(&low, &high).unwrap());
        for mode in [Mode::Weak, Mode::Strong] {
            let vh = check_subcritical(&high, 3.0, mode).unwrap();
            let vl = check_subcritical(&low, 3.0, mode).unwrap();
            assert_eq!(vh.conclusion, Conclusion::ThetaZero);
            assert_eq!(vl.conclusion, Conclusion::ThetaZero);
            assert!(vl.certificate.product <= vh.certificate.product);
        }
    }

    #[test]
    fn supercritical_examples() {
        let full = pv(&[0.0, 0.0, 0.0, 0.0, 1.0]);
        for mode in [Mode::Weak, Mode::Strong] {
            let v = check_supercritical(&full, 3.0, mode).unwrap();
            assert_eq!(v.conclusion, Conclusion::ThetaPositive, "{mode:?}");
        }
        let empty = pv(&[1.0, 0.0, 0.0, 0.0, 0.0]);
        let v = check_supercritical(&empty, 1.0, Mode::Weak).unwrap();
        assert_eq!(v.conclusion, Conclusion::Inconclusive);
        // Triangular lattice, mass concentrated on sizes >= 3.
        let heavy = pv(&[0.0, 0.0, 0.01, 0.97, 0.01, 0.005, 0.005]);
        let v = check_supercritical(&heavy, LAMBDA_HEXAGONAL, Mode::Strong).unwrap();
        assert_eq!(v.conclusion, Conclusion::ThetaPositive);
    }

    #[test]
    fn corollary_rows() {
        use Mode::*;
        // Weak rows with k = 2 and their first failures.
        for (d, ds, expect) in [
            (3, 9, true),
            (3, 10, false),
            (4, 4, true),
            (4, 5, false),
            (5, 3, true),
            (5, 4, false),
            (6, 3, true),
            (6, 4, false),
        ] {
            assert_eq!(check_corollary_rows(d, ds, 2, Weak), expect, "d={d} d*={ds}");
        }
        // Strong rows with k = 3.
        assert!(check_corollary_rows(3, 100, 3, Strong)); // d = k
        assert!(check_corollary_rows(4, 4, 3, Strong));
        assert!(!check_corollary_rows(4, 5, 3, Strong));
        assert!(check_corollary_rows(5, 3, 3, Strong));
        assert!(!check_corollary_rows(5, 4, 3, Strong));
        // Triangular lattice: fails through the degree bound, passes with
        // the exact dual connective constant.
        assert!(!check_corollary_rows(6, 3, 3, Strong));
        assert!(check_with_lambda_dual(6, 3, LAMBDA_HEXAGONAL, Strong));
    }
}
