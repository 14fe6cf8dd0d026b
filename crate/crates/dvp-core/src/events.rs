//! Exact probabilities of finite-support events by enumeration, directional
//! derivatives over the probability simplex with a finite-difference cross
//! check, product-versus-intersection gaps for increasing event pairs, and
//! disjoint-occurrence probabilities.
//!
//! An event is a total predicate on the joint states of a finite vertex set
//! `W`. Joint states are enumerated as one integer with a `d`-bit digit per
//! support vertex, so the enumerable size is capped by `|W| * d <= 24`.

use crate::cluster::Mode;
use crate::error::{Error, Result};
use crate::graph::GraphWindow;
use crate::prob::ProbVector;
use crate::sampler::{binomial, Configuration, CounterRng};
use std::sync::Arc;

/// Enumeration cap in state bits for plain probabilities.
pub const MAX_STATE_BITS: usize = 24;
/// Tighter cap for disjoint-occurrence computations, which hold full
/// indicator tables and sweep every certificate split.
pub const MAX_BOX_STATE_BITS: usize = 20;

/// View of one joint state during predicate evaluation.
pub struct StateView<'a> {
    window: &'a GraphWindow,
    support: &'a [u32],
    states: &'a [u16],
}

impl<'a> StateView<'a> {
    /// Position of `v` in the support, if present.
    fn position(&self, v: u32) -> Option<usize> {
        self.support.iter().position(|&s| s == v)
    }

    /// The chosen-slot mask of `v`, or `None` when `v` is outside `W`.
    pub fn state_of(&self, v: u32) -> Option<u16> {
        self.position(v).map(|i| self.states[i])
    }

    /// True iff `x` is in `W` and selected its slot `i`.
    pub fn selects(&self, x: u32, slot: usize) -> bool {
        self.state_of(x).is_some_and(|m| m >> slot & 1 == 1)
    }

    /// Slot index of `y` within the slot list of `x`, if adjacent.
    fn slot_toward(&self, x: u32, y: u32) -> Option<usize> {
        (0..self.window.degree()).find(|&i| self.window.slot(x, i) == Some(y))
    }

    /// Openness of the `{x, y}` edge under `mode`; selections by vertices
    /// outside the support count as absent.
    pub fn edge_open(&self, x: u32, y: u32, mode: Mode) -> bool {
        let forward = self
            .slot_toward(x, y)
            .is_some_and(|i| self.selects(x, i));
        let backward = self
            .slot_toward(y, x)
            .is_some_and(|j| self.selects(y, j));
        match mode {
            Mode::Weak => forward || backward,
            Mode::Strong => forward && backward,
        }
    }

    /// Connectivity of `a` and `b` within the support subgraph.
    pub fn connected(&self, a: u32, b: u32, mode: Mode) -> bool {
        let (Some(pa), Some(pb)) = (self.position(a), self.position(b)) else {
            return false;
        };
        if pa == pb {
            return true;
        }
        debug_assert!(self.support.len() <= 32);
        let mut visited = 1u32 << pa;
        let mut frontier = vec![pa];
        while let Some(q) = frontier.pop() {
            for (r, &other) in self.support.iter().enumerate() {
                if visited >> r & 1 == 0 && self.edge_open(self.support[q], other, mode) {
                    if r == pb {
                        return true;
                    }
                    visited |= 1 << r;
                    frontier.push(r);
                }
            }
        }
        false
    }

    /// True iff the origin's mode-cluster within the support contains a
    /// vertex at distance `n`.
    pub fn reaches_shell(&self, n: u32, mode: Mode) -> bool {
        let Some(po) = self.position(0) else { return false };
        if n == 0 {
            return true;
        }
        let mut visited = 1u32 << po;
        let mut frontier = vec![po];
        while let Some(q) = frontier.pop() {
            for (r, &other) in self.support.iter().enumerate() {
                if visited >> r & 1 == 0 && self.edge_open(self.support[q], other, mode) {
                    if self.window.distance(other) >= n {
                        return true;
                    }
                    visited |= 1 << r;
                    frontier.push(r);
                }
            }
        }
        false
    }
}

/// Built-in predicate language plus an escape hatch for tests. All variants
/// are pure and total on the joint states of the support.
#[derive(Clone)]
pub enum Predicate {
    /// The sure event.
    Always,
    /// Vertex `x` selects its slot `slot`.
    Chooses { x: u32, slot: usize },
    /// The edge `{x, y}` is open under `mode`.
    EdgeOpen { x: u32, y: u32, mode: Mode },
    /// `a` and `b` are joined inside the support subgraph.
    Connected { a: u32, b: u32, mode: Mode },
    /// The origin's cluster within the support reaches distance `n`.
    ReachesShell { n: u32, mode: Mode },
    All(Vec<Predicate>),
    Any(Vec<Predicate>),
    Not(Box<Predicate>),
    Custom(Arc<dyn Fn(&StateView<'_>) -> bool + Send + Sync>),
}

impl std::fmt::Debug for Predicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Predicate::Always => write!(f, "Always"),
            Predicate::Chooses { x, slot } => write!(f, "Chooses({x}, {slot})"),
            Predicate::EdgeOpen { x, y, mode } => write!(f, "EdgeOpen({x}, {y}, {mode:?})"),
            Predicate::Connected { a, b, mode } => write!(f, "Connected({a}, {b}, {mode:?})"),
            Predicate::ReachesShell { n, mode } => write!(f, "ReachesShell({n}, {mode:?})"),
            Predicate::All(v) => write!(f, "All({v:?})"),
            Predicate::Any(v) => write!(f, "Any({v:?})"),
            Predicate::Not(p) => write!(f, "Not({p:?})"),
            Predicate::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl Predicate {
    pub fn eval(&self, view: &StateView<'_>) -> bool {
        match self {
            Predicate::Always => true,
            Predicate::Chooses { x, slot } => view.selects(*x, *slot),
            Predicate::EdgeOpen { x, y, mode } => view.edge_open(*x, *y, *mode),
            Predicate::Connected { a, b, mode } => view.connected(*a, *b, *mode),
            Predicate::ReachesShell { n, mode } => view.reaches_shell(*n, *mode),
            Predicate::All(ps) => ps.iter().all(|p| p.eval(view)),
            Predicate::Any(ps) => ps.iter().any(|p| p.eval(view)),
            Predicate::Not(p) => !p.eval(view),
            Predicate::Custom(f) => f(view),
        }
    }
}

/// A finite-support event: the vertices it depends on plus a predicate on
/// their joint states.
#[derive(Debug, Clone)]
pub struct EventSpec {
    pub support: Vec<u32>,
    pub predicate: Predicate,
    pub description: String,
}

impl EventSpec {
    pub fn new(support: Vec<u32>, predicate: Predicate, description: impl Into<String>) -> Self {
        let mut support = support;
        support.sort_unstable();
        support.dedup();
        EventSpec {
            support,
            predicate,
            description: description.into(),
        }
    }

    /// Evaluates the event on a sampled configuration by restricting it to
    /// the support.
    pub fn holds(&self, window: &GraphWindow, config: &Configuration) -> bool {
        let states: Vec<u16> = self.support.iter().map(|&v| config.mask(v)).collect();
        let view = StateView {
            window,
            support: &self.support,
            states: &states,
        };
        self.predicate.eval(&view)
    }
}

/// Shared enumeration context: weights per single-vertex state and the
/// support in sorted order.
struct Enumerator<'a> {
    window: &'a GraphWindow,
    support: Vec<u32>,
    /// `weight[mask] = p_{|mask|} / binom(d, |mask|)`.
    weight: Vec<f64>,
    degree: usize,
}

impl<'a> Enumerator<'a> {
    fn new(
        window: &'a GraphWindow,
        support: &[u32],
        p: &ProbVector,
        max_bits: usize,
    ) -> Result<Self> {
        let degree = window.degree();
        if p.degree() != degree {
            return Err(Error::DegreeMismatch { left: p.degree(), right: degree });
        }
        let mut support = support.to_vec();
        support.sort_unstable();
        support.dedup();
        let bits = support.len() * degree;
        if bits > max_bits {
            return Err(Error::SupportTooLarge { bits, max: max_bits });
        }
        assert!(
            support.iter().all(|&v| (v as usize) < window.vertex_count()),
            "support vertex outside window"
        );
        let weight = (0..1u32 << degree)
            .map(|mask| {
                let k = mask.count_ones() as usize;
                p.entry(k) / binomial(degree, k)
            })
            .collect();
        Ok(Enumerator { window, support, weight, degree })
    }

    fn state_count(&self) -> usize {
        1usize << (self.support.len() * self.degree)
    }

    fn decode(&self, index: usize, states: &mut [u16]) {
        let mask = (1usize << self.degree) - 1;
        for (i, s) in states.iter_mut().enumerate() {
            *s = (index >> (i * self.degree) & mask) as u16;
        }
    }

    fn weight_of(&self, states: &[u16]) -> f64 {
        states.iter().map(|&s| self.weight[s as usize]).product()
    }

    fn view<'b>(&'b self, states: &'b [u16]) -> StateView<'b> {
        StateView {
            window: self.window,
            support: &self.support,
            states,
        }
    }
}

/// Exact probability of `event` under the product measure, by enumerating
/// every joint state of its support.
pub fn exact_prob(window: &GraphWindow, event: &EventSpec, p: &ProbVector) -> Result<f64> {
    let enumerator = Enumerator::new(window, &event.support, p, MAX_STATE_BITS)?;
    let mut states = vec![0u16; enumerator.support.len()];
    let mut total = 0.0;
    for index in 0..enumerator.state_count() {
        enumerator.decode(index, &mut states);
        if event.predicate.eval(&enumerator.view(&states)) {
            total += enumerator.weight_of(&states);
        }
    }
    Ok(total)
}

/// The product-versus-intersection gap `P(A) P(B) - P(A and B)`, enumerated
/// over the union support. Positive values witness failures of the FKG
/// inequality for increasing pairs.
pub fn fkg_gap(
    window: &GraphWindow,
    a: &EventSpec,
    b: &EventSpec,
    p: &ProbVector,
) -> Result<f64> {
    let mut support = a.support.clone();
    support.extend_from_slice(&b.support);
    let enumerator = Enumerator::new(window, &support, p, MAX_STATE_BITS)?;
    let mut states = vec![0u16; enumerator.support.len()];
    let (mut pa, mut pb, mut pab) = (0.0, 0.0, 0.0);
    for index in 0..enumerator.state_count() {
        enumerator.decode(index, &mut states);
        let view = enumerator.view(&states);
        let (ia, ib) = (a.predicate.eval(&view), b.predicate.eval(&view));
        if ia || ib {
            let w = enumerator.weight_of(&states);
            if ia {
                pa += w;
            }
            if ib {
                pb += w;
            }
            if ia && ib {
                pab += w;
            }
        }
    }
    Ok(pa * pb - pab)
}

/// Both sides of the disjoint-occurrence inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxProb {
    /// `P(A box B)`: some split of the support certifies `A` and `B` on
    /// disjoint vertex sets.
    pub box_prob: f64,
    /// `P(A) * P(B)`.
    pub product: f64,
}

/// Computes `P(A box B)` and `P(A) P(B)` over the union support `W`: a state
/// lies in `A box B` when some `K` inside `W` is such that every state
/// agreeing on `K` lies in `A` and every state agreeing on `W - K` lies in
/// `B`.
pub fn box_prob(
    window: &GraphWindow,
    a: &EventSpec,
    b: &EventSpec,
    p: &ProbVector,
) -> Result<BoxProb> {
    let mut support = a.support.clone();
    support.extend_from_slice(&b.support);
    let enumerator = Enumerator::new(window, &support, p, MAX_BOX_STATE_BITS)?;
    let w = enumerator.support.len();
    let n = enumerator.state_count();
    let d = enumerator.degree;

    let mut ind_a = vec![false; n];
    let mut ind_b = vec![false; n];
    let mut states = vec![0u16; w];
    for index in 0..n {
        enumerator.decode(index, &mut states);
        let view = enumerator.view(&states);
        ind_a[index] = a.predicate.eval(&view);
        ind_b[index] = b.predicate.eval(&view);
    }

    // out[s] = AND over all values of the digit at `pos` of ind[s'].
    let forall_project = |ind: &[bool], pos: usize| -> Vec<bool> {
        let shift = pos * d;
        let digits = 1usize << d;
        let mut out = vec![true; n];
        for (s, o) in out.iter_mut().enumerate() {
            let base = s & !(((digits - 1)) << shift);
            for v in 0..digits {
                if !ind[base | v << shift] {
                    *o = false;
                    break;
                }
            }
        }
        out
    };

    let mut box_ind = vec![false; n];
    for split in 0..1usize << w {
        // Certify A on the vertices in `split`, B on the complement.
        let mut cert_a = ind_a.clone();
        let mut cert_b = ind_b.clone();
        for pos in 0..w {
            if split >> pos & 1 == 0 {
                cert_a = forall_project(&cert_a, pos);
            } else {
                cert_b = forall_project(&cert_b, pos);
            }
        }
        for s in 0..n {
            box_ind[s] |= cert_a[s] && cert_b[s];
        }
    }

    let (mut pa, mut pb, mut pbox) = (0.0, 0.0, 0.0);
    for index in 0..n {
        if ind_a[index] || ind_b[index] || box_ind[index] {
            enumerator.decode(index, &mut states);
            let weight = enumerator.weight_of(&states);
            if ind_a[index] {
                pa += weight;
            }
            if ind_b[index] {
                pb += weight;
            }
            if box_ind[index] {
                pbox += weight;
            }
        }
    }
    Ok(BoxProb { box_prob: pbox, product: pa * pb })
}

/// Directional derivative of `P_p(A)` along a tangent of the simplex,
/// together with a central finite difference of the exact probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RussoDerivative {
    pub formula_value: f64,
    pub finite_difference: f64,
}

const FD_EPSILON: f64 = 1e-5;

/// Evaluates the directional-derivative sum
/// `sum_x sum_S gamma'_{|S|} P(A^x_S) / binom(d, |S|)` by enumeration,
/// where `A^x_S` fixes the state of `x` to `S`, and cross-checks it against
/// a central finite difference at `eps = 1e-5`.
///
/// `direction` lists `d + 1` components summing to zero; both perturbed
/// points `p +- eps * direction` must stay inside the simplex.
pub fn russo_derivative(
    window: &GraphWindow,
    event: &EventSpec,
    p: &ProbVector,
    direction: &[f64],
) -> Result<RussoDerivative> {
    let d = window.degree();
    if direction.len() != d + 1 {
        return Err(Error::DegreeMismatch { left: direction.len() - 1, right: d });
    }
    let sum: f64 = direction.iter().sum();
    if sum.abs() > 1e-12 {
        return Err(Error::DirectionNotTangent(sum));
    }
    let perturbed = |sign: f64| -> Result<ProbVector> {
        let entries: Vec<f64> = p
            .entries()
            .iter()
            .zip(direction)
            .map(|(&pi, &di)| pi + sign * FD_EPSILON * di)
            .collect();
        if let Some(i) = entries.iter().position(|&e| e < 0.0) {
            return Err(Error::SimplexExit(i));
        }
        ProbVector::new(&entries)
    };
    let plus = perturbed(1.0)?;
    let minus = perturbed(-1.0)?;

    let formula_value = pivotal_sum(window, event, p, |size, cond| {
        direction[size] * cond / binomial(d, size)
    })?;
    let finite_difference = (exact_prob(window, event, &plus)?
        - exact_prob(window, event, &minus)?)
        / (2.0 * FD_EPSILON);
    Ok(RussoDerivative { formula_value, finite_difference })
}

/// Shared core of the derivative formulas: accumulates
/// `sum_x sum_S term(|S|, P(A^x_S-style conditional))` where the inner
/// probabilities are computed by enumerating the states off `x` and fixing
/// the digit at `x` to every subset `S`.
fn pivotal_sum(
    window: &GraphWindow,
    event: &EventSpec,
    p: &ProbVector,
    term: impl Fn(usize, f64) -> f64,
) -> Result<f64> {
    let enumerator = Enumerator::new(window, &event.support, p, MAX_STATE_BITS)?;
    let w = enumerator.support.len();
    let d = enumerator.degree;
    let digits = 1usize << d;
    let mut states = vec![0u16; w];
    let mut total = 0.0;
    for xpos in 0..w {
        // P(A^x_S) for every S at once: enumerate the other digits.
        let mut cond = vec![0.0f64; digits];
        let rest = 1usize << ((w - 1) * d);
        for rest_index in 0..rest {
            // Weave the rest digits around position xpos.
            let mask = digits - 1;
            let mut weight = 1.0;
            for i in 0..w - 1 {
                let digit = rest_index >> (i * d) & mask;
                let pos = if i < xpos { i } else { i + 1 };
                states[pos] = digit as u16;
                weight *= enumerator.weight[digit];
            }
            for s in 0..digits {
                states[xpos] = s as u16;
                if event.predicate.eval(&enumerator.view(&states)) {
                    cond[s] += weight;
                }
            }
        }
        for (s, &value) in cond.iter().enumerate() {
            total += term(s.count_ones() as usize, value);
        }
    }
    Ok(total)
}

/// Number of random state pairs used by the increasingness spot check.
const INCREASING_CHECK_PAIRS: usize = 1000;

/// Derivative of `P_p(A)` for an increasing event along the one-parameter
/// family `p_k = 1 - p`, `p_{k+1} = p`:
/// `(k! (d-k-1)! / d!) * sum_x sum_{|S|=k} sum_{y not in S}
/// P(A^x_{S+y} - A^x_S)`.
///
/// A randomized monotonicity check over state pairs runs first and rejects
/// events that are visibly not increasing.
pub fn increasing_derivative(
    window: &GraphWindow,
    event: &EventSpec,
    p: &ProbVector,
    k: usize,
) -> Result<f64> {
    let d = window.degree();
    if k + 1 > d {
        return Err(Error::KOutOfRange { k, d });
    }
    // The family fixes all mass on sizes k and k + 1.
    let off_support: f64 = (0..=d)
        .filter(|&i| i != k && i != k + 1)
        .map(|i| p.entry(i))
        .sum();
    if off_support > 1e-12 {
        return Err(Error::ParameterOutOfRange { name: "p_off_support", value: off_support });
    }
    check_increasing(window, event)?;

    // Normalizing constant k! (d-k-1)! / d!.
    let mut norm = 1.0f64;
    for i in 1..=k {
        norm *= i as f64;
    }
    for i in 1..=(d - k - 1) {
        norm *= i as f64;
    }
    for i in 1..=d {
        norm /= i as f64;
    }

    let enumerator = Enumerator::new(window, &event.support, p, MAX_STATE_BITS)?;
    let w = enumerator.support.len();
    let digits = 1usize << d;
    let mut states = vec![0u16; w];
    let mut total = 0.0;
    for xpos in 0..w {
        let rest = 1usize << ((w - 1) * d);
        let mut holds = vec![false; digits];
        for rest_index in 0..rest {
            let mask = digits - 1;
            let mut weight = 1.0;
            for i in 0..w - 1 {
                let digit = rest_index >> (i * d) & mask;
                let pos = if i < xpos { i } else { i + 1 };
                states[pos] = digit as u16;
                weight *= enumerator.weight[digit];
            }
            for (s, h) in holds.iter_mut().enumerate() {
                states[xpos] = s as u16;
                *h = event.predicate.eval(&enumerator.view(&states));
            }
            for s in 0..digits {
                if (s as u32).count_ones() as usize != k {
                    continue;
                }
                for y in 0..d {
                    if s >> y & 1 == 0 && holds[s | 1 << y] && !holds[s] {
                        total += weight;
                    }
                }
            }
        }
    }
    Ok(norm * total)
}

/// Fixed key for the increasingness probe stream.
const INCREASING_CHECK_SEED: u64 = 0x5EED_CAFE_0001;

/// Randomized increasingness probe: draws pairs `omega <= omega'` and fails
/// when any pair violates monotonicity of the indicator.
fn check_increasing(window: &GraphWindow, event: &EventSpec) -> Result<()> {
    let w = event.support.len();
    let d = window.degree();
    let mut rng = CounterRng::new(INCREASING_CHECK_SEED, 0, 0);
    let mut upper = vec![0u16; w];
    let mut lower = vec![0u16; w];
    for _ in 0..INCREASING_CHECK_PAIRS {
        for i in 0..w {
            let full = (rng.next_u32() as u16) & ((1u16 << d) - 1);
            upper[i] = full;
            lower[i] = full & (rng.next_u32() as u16);
        }
        let up = StateView {
            window,
            support: &event.support,
            states: &upper,
        };
        let lo = StateView {
            window,
            support: &event.support,
            states: &lower,
        };
        if event.predicate.eval(&lo) && !event.predicate.eval(&up) {
            return Err(Error::NotIncreasing);
        }
    }
    Ok(())
}
