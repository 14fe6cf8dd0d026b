//! Finite balls `B(R)` of the catalog graphs with ordered neighbor slots,
//! breadth-first vertex ids, distance shells, self-avoiding-walk counts and
//! the hard-coded dual-graph facts used by the condition checkers.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// Marker for a slot whose target lies outside the window.
pub const GHOST: u32 = u32::MAX;

/// Largest supported degree; the coupled sampler unranks permutations of the
/// slot set and `12!` still fits comfortably in 64 bits.
pub const MAX_DEGREE: usize = 12;

const DEFAULT_VERTEX_CAP: usize = 4_000_000;

/// Connective constant of the hexagonal lattice, `sqrt(2 + sqrt(2))`.
pub const LAMBDA_HEXAGONAL: f64 = 1.8477590650225735;

/// One of the built-in vertex-transitive graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphKind {
    /// The two-sided infinite chain (the 2-regular graph).
    Line,
    /// The d-regular tree, `d >= 3`.
    Tree { degree: usize },
    /// The hypercube lattice `Z^dim`, degree `2 * dim`.
    Hypercube { dim: usize },
    Square,
    Triangular,
    Hexagonal,
}

impl GraphKind {
    pub fn degree(&self) -> usize {
        match self {
            GraphKind::Line => 2,
            GraphKind::Tree { degree } => *degree,
            GraphKind::Hypercube { dim } => 2 * dim,
            GraphKind::Square => 4,
            GraphKind::Triangular => 6,
            GraphKind::Hexagonal => 3,
        }
    }

    pub fn name(&self) -> String {
        match self {
            GraphKind::Line => "line".into(),
            GraphKind::Tree { degree } => format!("tree:{degree}"),
            GraphKind::Hypercube { dim } => format!("hypercube:{dim}"),
            GraphKind::Square => "square".into(),
            GraphKind::Triangular => "triangular".into(),
            GraphKind::Hexagonal => "hexagonal".into(),
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownGraph(s.to_string());
        match s {
            "line" => return Ok(GraphKind::Line),
            "square" => return Ok(GraphKind::Square),
            "triangular" => return Ok(GraphKind::Triangular),
            "hexagonal" => return Ok(GraphKind::Hexagonal),
            _ => {}
        }
        if let Some(d) = s.strip_prefix("tree:") {
            let degree: usize = d.parse().map_err(|_| bad())?;
            if degree < 3 {
                return Err(Error::DegreeTooSmall { degree, min: 3 });
            }
            if degree > MAX_DEGREE {
                return Err(Error::DegreeTooLarge { degree, max: MAX_DEGREE });
            }
            return Ok(GraphKind::Tree { degree });
        }
        if let Some(d) = s.strip_prefix("hypercube:") {
            let dim: usize = d.parse().map_err(|_| bad())?;
            if dim < 1 {
                return Err(bad());
            }
            if 2 * dim > MAX_DEGREE {
                return Err(Error::DegreeTooLarge { degree: 2 * dim, max: MAX_DEGREE });
            }
            return Ok(GraphKind::Hypercube { dim });
        }
        Err(bad())
    }
}

/// Dual-graph facts for a catalog graph. `lambda_dual_exact` is a proved
/// value of the dual connective constant when one is known; otherwise the
/// checkers fall back to the bound `d* - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub degree: usize,
    pub dual_max_degree: Option<usize>,
    pub lambda_dual_exact: Option<f64>,
    pub lambda_self_exact: Option<f64>,
}

impl CatalogEntry {
    /// Best available upper value for the dual connective constant: the exact
    /// value when known, else `d* - 1`.
    pub fn lambda_dual(&self) -> Option<f64> {
        self.lambda_dual_exact
            .or(self.dual_max_degree.map(|d| (d - 1) as f64))
    }
}

/// Catalog facts for `kind`. Square is self-dual; triangular and hexagonal
/// are dual to each other. Trees and hypercubes carry no dual entry.
pub fn catalog_entry(kind: &GraphKind) -> CatalogEntry {
    let (dual_max_degree, lambda_dual_exact, lambda_self_exact) = match kind {
        GraphKind::Square => (Some(4), None, None),
        GraphKind::Triangular => (Some(3), Some(LAMBDA_HEXAGONAL), None),
        GraphKind::Hexagonal => (Some(6), None, Some(LAMBDA_HEXAGONAL)),
        _ => (None, None, None),
    };
    CatalogEntry {
        name: kind.name(),
        degree: kind.degree(),
        dual_max_degree,
        lambda_dual_exact,
        lambda_self_exact,
    }
}

/// A finite ball `B(R)` of a catalog graph.
///
/// Vertices carry ids `0..vertex_count()` assigned in breadth-first order
/// from the origin (id 0), ties broken by slot order, so ids are stable
/// across radii: the window of radius `R + 1` extends the window of radius
/// `R` without renaming. Every vertex keeps its full list of `d` slots; a
/// slot whose target falls outside the ball holds [`GHOST`].
#[derive(Debug, Clone)]
pub struct GraphWindow {
    kind: GraphKind,
    degree: usize,
    radius: u32,
    slots: Vec<u32>,
    reverse: Vec<u8>,
    distance: Vec<u32>,
    shell_offsets: Vec<usize>,
}

impl GraphWindow {
    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.distance.len()
    }

    /// Raw slot targets of `v` (`GHOST` entries included).
    #[inline]
    pub fn slots_of(&self, v: u32) -> &[u32] {
        let d = self.degree;
        &self.slots[v as usize * d..(v as usize + 1) * d]
    }

    /// In-window target of slot `i` of `v`, or `None` for a ghost.
    #[inline]
    pub fn slot(&self, v: u32, i: usize) -> Option<u32> {
        let t = self.slots[v as usize * self.degree + i];
        (t != GHOST).then_some(t)
    }

    /// For an in-window slot `(v, i)` with target `y`, the slot index of `v`
    /// within the slot list of `y`.
    #[inline]
    pub fn reverse_slot(&self, v: u32, i: usize) -> usize {
        self.reverse[v as usize * self.degree + i] as usize
    }

    #[inline]
    pub fn distance(&self, v: u32) -> u32 {
        self.distance[v as usize]
    }

    /// Ids of the shell at distance `n` (a contiguous id range).
    pub fn shell(&self, n: u32) -> std::ops::Range<u32> {
        let n = n as usize;
        self.shell_offsets[n] as u32..self.shell_offsets[n + 1] as u32
    }

    pub fn shell_size(&self, n: u32) -> usize {
        self.shell(n).len()
    }

    /// Follows a slot path from the origin; handy for naming a vertex by a
    /// deterministic route (e.g. `+1,+1` on the line).
    pub fn walk_from_origin(&self, slots: &[usize]) -> Option<u32> {
        let mut v = 0u32;
        for &i in slots {
            v = self.slot(v, i)?;
        }
        Some(v)
    }

    /// Exact number of self-avoiding paths of length `n` from the origin, by
    /// backtracking. Requires `n <= R` so that no path can touch a ghost.
    pub fn count_saw(&self, n: u32) -> Result<u64> {
        if n > self.radius {
            return Err(Error::RadiusTooSmall { radius: self.radius, needed: n });
        }
        if n == 0 {
            return Ok(1);
        }
        let mut visited = vec![false; self.vertex_count()];
        visited[0] = true;
        let mut count = 0u64;
        self.saw_rec(0, n, &mut visited, &mut count);
        Ok(count)
    }

    fn saw_rec(&self, v: u32, remaining: u32, visited: &mut [bool], count: &mut u64) {
        for i in 0..self.degree {
            let Some(y) = self.slot(v, i) else { continue };
            if visited[y as usize] {
                continue;
            }
            if remaining == 1 {
                *count += 1;
            } else {
                visited[y as usize] = true;
                self.saw_rec(y, remaining - 1, visited, count);
                visited[y as usize] = false;
            }
        }
    }
}

/// A finite-walk estimate of the connective constant together with the
/// values it is clipped against.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaEstimate {
    pub walk_length: u32,
    pub saw_count: u64,
    /// `sigma(n)^(1/n)`, an upper-biased finite-size value.
    pub root: f64,
    /// The trivial bound `d - 1`.
    pub trivial_bound: f64,
    /// `min(d - 1, root)`: the reported estimate.
    pub estimate: f64,
    /// Exact catalog value when one is known.
    pub catalog: Option<f64>,
    /// Catalog value when present, else `estimate`.
    pub preferred: f64,
}

/// Estimates the connective constant from `sigma(n_max)^(1/n_max)`, clipped
/// by the trivial bound `d - 1`; a known catalog value takes precedence.
pub fn lambda_estimate(window: &GraphWindow, n_max: u32) -> Result<LambdaEstimate> {
    let saw_count = window.count_saw(n_max)?;
    let root = (saw_count as f64).powf(1.0 / n_max as f64);
    let trivial_bound = (window.degree() - 1) as f64;
    let estimate = root.min(trivial_bound);
    let catalog = catalog_entry(window.kind()).lambda_self_exact;
    Ok(LambdaEstimate {
        walk_length: n_max,
        saw_count,
        root,
        trivial_bound,
        estimate,
        catalog,
        preferred: catalog.unwrap_or(estimate),
    })
}

/// Builds the ball of the given radius with the default vertex cap.
pub fn build_window(kind: &GraphKind, radius: u32) -> Result<GraphWindow> {
    build_window_capped(kind, radius, DEFAULT_VERTEX_CAP)
}

/// Builds the ball of the given radius, failing with
/// [`Error::RadiusTooLarge`] once more than `cap` vertices are discovered.
pub fn build_window_capped(kind: &GraphKind, radius: u32, cap: usize) -> Result<GraphWindow> {
    assert!(radius >= 1, "radius must be at least 1");
    let degree = kind.degree();
    if degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { degree, max: MAX_DEGREE });
    }
    let window = match kind {
        GraphKind::Tree { degree } => build_tree(kind.clone(), *degree, radius, cap)?,
        _ => build_coordinate_graph(kind.clone(), radius, cap)?,
    };
    debug_assert!(check_neighbor_symmetry(&window));
    Ok(window)
}

/// Lattice coordinates; `Hyper` covers every hypercube dimension.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Coord {
    Line(i64),
    Plane(i32, i32),
    Hyper(Vec<i32>),
}

fn neighbors(kind: &GraphKind, c: &Coord) -> Vec<Coord> {
    match (kind, c) {
        (GraphKind::Line, Coord::Line(x)) => vec![Coord::Line(x + 1), Coord::Line(x - 1)],
        (GraphKind::Square, Coord::Plane(x, y)) => vec![
            Coord::Plane(x + 1, *y),
            Coord::Plane(x - 1, *y),
            Coord::Plane(*x, y + 1),
            Coord::Plane(*x, y - 1),
        ],
        (GraphKind::Hypercube { dim }, Coord::Hyper(v)) => {
            let mut out = Vec::with_capacity(2 * dim);
            for axis in 0..*dim {
                for delta in [1, -1] {
                    let mut w = v.clone();
                    w[axis] += delta;
                    out.push(Coord::Hyper(w));
                }
            }
            out
        }
        // Unit triangular-lattice directions at 0, 60, ..., 300 degrees in
        // the basis u = (1,0), v = (1/2, sqrt(3)/2).
        (GraphKind::Triangular, Coord::Plane(n, m)) => vec![
            Coord::Plane(n + 1, *m),
            Coord::Plane(*n, m + 1),
            Coord::Plane(n - 1, m + 1),
            Coord::Plane(n - 1, *m),
            Coord::Plane(*n, m - 1),
            Coord::Plane(n + 1, m - 1),
        ],
        // Honeycomb = triangular lattice minus the sublattice (m - n) = 2
        // mod 3. The two kept classes alternate; each vertex keeps the three
        // unit directions that stay in the lattice, listed counterclockwise
        // from the positive x-axis.
        (GraphKind::Hexagonal, Coord::Plane(n, m)) => {
            let class = (m - n).rem_euclid(3);
            debug_assert!(class != 2, "removed sublattice vertex in hexagonal window");
            if class == 0 {
                // 60, 180, 300 degrees.
                vec![
                    Coord::Plane(*n, m + 1),
                    Coord::Plane(n - 1, *m),
                    Coord::Plane(n + 1, m - 1),
                ]
            } else {
                // 0, 120, 240 degrees.
                vec![
                    Coord::Plane(n + 1, *m),
                    Coord::Plane(n - 1, m + 1),
                    Coord::Plane(*n, m - 1),
                ]
            }
        }
        _ => unreachable!("coordinate type does not match graph kind"),
    }
}

fn origin_coord(kind: &GraphKind) -> Coord {
    match kind {
        GraphKind::Line => Coord::Line(0),
        GraphKind::Hypercube { dim } => Coord::Hyper(vec![0; *dim]),
        _ => Coord::Plane(0, 0),
    }
}

fn build_coordinate_graph(
    kind: GraphKind,
    radius: u32,
    cap: usize,
) -> Result<GraphWindow> {
    let degree = kind.degree();
    let origin = origin_coord(&kind);
    let mut ids: HashMap<Coord, u32> = HashMap::new();
    let mut coords: Vec<Coord> = Vec::new();
    let mut distance: Vec<u32> = Vec::new();
    ids.insert(origin.clone(), 0);
    coords.push(origin);
    distance.push(0);

    // Breadth-first discovery; `coords` doubles as the queue.
    let mut head = 0usize;
    while head < coords.len() {
        let dist = distance[head];
        if dist == radius {
            break; // vertices at the boundary enqueue nothing
        }
        let here = coords[head].clone();
        for nb in neighbors(&kind, &here) {
            if !ids.contains_key(&nb) {
                if coords.len() >= cap {
                    return Err(Error::RadiusTooLarge { count: coords.len() + 1, cap });
                }
                ids.insert(nb.clone(), coords.len() as u32);
                coords.push(nb);
                distance.push(dist + 1);
            }
        }
        head += 1;
    }

    let n = coords.len();
    let mut slots = vec![GHOST; n * degree];
    for v in 0..n {
        for (i, nb) in neighbors(&kind, &coords[v]).into_iter().enumerate() {
            if let Some(&id) = ids.get(&nb) {
                slots[v * degree + i] = id;
            }
        }
    }
    finish_window(kind, degree, radius, slots, distance)
}

fn build_tree(kind: GraphKind, degree: usize, radius: u32, cap: usize) -> Result<GraphWindow> {
    // Level sizes: 1, d, d(d-1), ... Parent slot first for non-root vertices.
    let mut distance: Vec<u32> = vec![0];
    let mut parent: Vec<u32> = vec![GHOST];
    let mut level_start = 0usize;
    for dist in 0..radius {
        let level_end = distance.len();
        for v in level_start..level_end {
            let children = if v == 0 { degree } else { degree - 1 };
            if distance.len() + children > cap {
                return Err(Error::RadiusTooLarge { count: distance.len() + children, cap });
            }
            for _ in 0..children {
                parent.push(v as u32);
                distance.push(dist + 1);
            }
        }
        level_start = level_end;
    }

    let n = distance.len();
    let mut slots = vec![GHOST; n * degree];
    // Children were pushed in BFS order, so each vertex's children are a
    // contiguous id range; recover it with a running cursor.
    let mut next_child: u32 = 1;
    for v in 0..n as u32 {
        let mut slot_idx = 0usize;
        if v != 0 {
            slots[v as usize * degree] = parent[v as usize];
            slot_idx = 1;
        }
        if distance[v as usize] < radius {
            let children = if v == 0 { degree } else { degree - 1 };
            for c in 0..children {
                slots[v as usize * degree + slot_idx + c] = next_child + c as u32;
            }
            next_child += children as u32;
        }
    }
    finish_window(kind, degree, radius, slots, distance)
}

fn finish_window(
    kind: GraphKind,
    degree: usize,
    radius: u32,
    slots: Vec<u32>,
    distance: Vec<u32>,
) -> Result<GraphWindow> {
    let n = distance.len();
    let mut shell_offsets = vec![0usize; radius as usize + 2];
    for &d in &distance {
        shell_offsets[d as usize + 1] += 1;
    }
    for i in 0..=radius as usize {
        shell_offsets[i + 1] += shell_offsets[i];
    }

    let mut reverse = vec![u8::MAX; n * degree];
    for v in 0..n {
        for i in 0..degree {
            let y = slots[v * degree + i];
            if y == GHOST {
                continue;
            }
            let back = (0..degree)
                .find(|&j| slots[y as usize * degree + j] == v as u32)
                .expect("neighbor relation must be symmetric");
            reverse[v * degree + i] = back as u8;
        }
    }
    Ok(GraphWindow {
        kind,
        degree,
        radius,
        slots,
        reverse,
        distance,
        shell_offsets,
    })
}

fn check_neighbor_symmetry(w: &GraphWindow) -> bool {
    for v in 0..w.vertex_count() as u32 {
        for i in 0..w.degree() {
            if let Some(y) = w.slot(v, i) {
                let j = w.reverse_slot(v, i);
                if w.slot(y, j) != Some(v) {
                    return false;
                }
                if (w.distance(v) as i64 - w.distance(y) as i64).abs() > 1 {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_window_counts() {
        let w = build_window(&GraphKind::Square, 2).unwrap();
        assert_eq!(w.vertex_count(), 13);
        assert_eq!(w.shell_size(1), 4);
        assert_eq!(w.shell_size(2), 8);
        for n in 1..=5 {
            let w = build_window(&GraphKind::Square, n).unwrap();
            assert_eq!(w.vertex_count(), (2 * n * n + 2 * n + 1) as usize);
            assert_eq!(w.shell_size(n), 4 * n as usize);
        }
    }

    #[test]
    fn tree_window_counts() {
        let w = build_window(&GraphKind::Tree { degree: 3 }, 2).unwrap();
        assert_eq!(w.vertex_count(), 10);
        assert_eq!(w.shell_size(1), 3);
        assert_eq!(w.shell_size(2), 6);
        let w = build_window(&GraphKind::Tree { degree: 4 }, 3).unwrap();
        assert_eq!(w.shell_size(3), 4 * 3 * 3);
        // Parent slot first, children afterwards.
        assert_eq!(w.slot(1, 0), Some(0));
        assert_eq!(w.reverse_slot(1, 0), 0);
    }

    #[test]
    fn line_window_slots() {
        let w = build_window(&GraphKind::Line, 5).unwrap();
        assert_eq!(w.vertex_count(), 11);
        // Interior vertices have both slots; slot 0 walks away from the
        // origin on the +1 side.
        let plus_two = w.walk_from_origin(&[0, 0]).unwrap();
        assert_eq!(w.distance(plus_two), 2);
        let minus_one = w.walk_from_origin(&[1]).unwrap();
        assert_eq!(w.distance(minus_one), 1);
        assert_ne!(minus_one, w.walk_from_origin(&[0]).unwrap());
        for n in 0..=5 {
            assert_eq!(w.shell_size(n), if n == 0 { 1 } else { 2 });
        }
    }

    #[test]
    fn hypercube_one_matches_line() {
        let w = build_window(&GraphKind::Hypercube { dim: 1 }, 4).unwrap();
        assert_eq!(w.vertex_count(), 9);
        for n in 1..=4 {
            assert_eq!(w.shell_size(n), 2);
        }
    }

    #[test]
    fn hexagonal_window_is_three_regular() {
        let w = build_window(&GraphKind::Hexagonal, 4).unwrap();
        assert_eq!(w.degree(), 3);
        // Shell profile of the honeycomb ball: 3, 6, 9, 12, ...
        assert_eq!(w.shell_size(1), 3);
        assert_eq!(w.shell_size(2), 6);
    }

    #[test]
    fn neighbor_symmetry_everywhere() {
        for kind in [
            GraphKind::Line,
            GraphKind::Square,
            GraphKind::Triangular,
            GraphKind::Hexagonal,
            GraphKind::Tree { degree: 3 },
            GraphKind::Hypercube { dim: 3 },
        ] {
            let w = build_window(&kind, 3).unwrap();
            assert!(check_neighbor_symmetry(&w), "symmetry failed for {kind}");
        }
    }

    #[test]
    fn saw_counts_square() {
        let w = build_window(&GraphKind::Square, 5).unwrap();
        assert_eq!(w.count_saw(1).unwrap(), 4);
        assert_eq!(w.count_saw(2).unwrap(), 12);
        assert_eq!(w.count_saw(3).unwrap(), 36);
        assert_eq!(w.count_saw(4).unwrap(), 100);
        assert_eq!(w.count_saw(5).unwrap(), 284);
        assert!(matches!(w.count_saw(6), Err(Error::RadiusTooSmall { .. })));
    }

    #[test]
    fn saw_counts_hexagonal_and_tree() {
        let w = build_window(&GraphKind::Hexagonal, 3).unwrap();
        assert_eq!(w.count_saw(1).unwrap(), 3);
        assert_eq!(w.count_saw(2).unwrap(), 6);
        let w = build_window(&GraphKind::Tree { degree: 3 }, 6).unwrap();
        for n in 1..=6u32 {
            assert_eq!(w.count_saw(n).unwrap(), 3 * 2u64.pow(n - 1));
        }
    }

    #[test]
    fn saw_count_independent_of_radius() {
        let small = build_window(&GraphKind::Triangular, 3).unwrap();
        let large = build_window(&GraphKind::Triangular, 6).unwrap();
        for n in 1..=3 {
            assert_eq!(small.count_saw(n).unwrap(), large.count_saw(n).unwrap());
        }
    }

    #[test]
    fn lambda_estimates() {
        let w = build_window(&GraphKind::Tree { degree: 3 }, 8).unwrap();
        for n in 1..=8 {
            let est = lambda_estimate(&w, n).unwrap();
            assert!((est.estimate - 2.0).abs() < 1e-12);
        }
        let w = build_window(&GraphKind::Square, 6).unwrap();
        let est = lambda_estimate(&w, 6).unwrap();
        assert!(est.estimate > 2.0 && est.estimate <= 3.0);
        let w = build_window(&GraphKind::Hexagonal, 4).unwrap();
        let est = lambda_estimate(&w, 4).unwrap();
        assert_eq!(est.catalog, Some(LAMBDA_HEXAGONAL));
        assert!((est.preferred - LAMBDA_HEXAGONAL).abs() < 1e-12);
    }

    #[test]
    fn catalog_rows() {
        let tri = catalog_entry(&GraphKind::Triangular);
        assert_eq!(tri.dual_max_degree, Some(3));
        assert!((tri.lambda_dual().unwrap() - LAMBDA_HEXAGONAL).abs() < 1e-12);
        // lambda(G*) <= d* - 1 whenever both are present.
        assert!(tri.lambda_dual().unwrap() <= 2.0);
        let sq = catalog_entry(&GraphKind::Square);
        assert_eq!(sq.lambda_dual(), Some(3.0));
        let hex = catalog_entry(&GraphKind::Hexagonal);
        assert_eq!(hex.lambda_dual(), Some(5.0));
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("line".parse::<GraphKind>().unwrap(), GraphKind::Line);
        assert_eq!(
            "tree:5".parse::<GraphKind>().unwrap(),
            GraphKind::Tree { degree: 5 }
        );
        assert_eq!(
            "hypercube:2".parse::<GraphKind>().unwrap(),
            GraphKind::Hypercube { dim: 2 }
        );
        assert!(matches!(
            "moebius".parse::<GraphKind>(),
            Err(Error::UnknownGraph(_))
        ));
        assert!(matches!(
            "tree:2".parse::<GraphKind>(),
            Err(Error::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn vertex_cap_enforced() {
        assert!(matches!(
            build_window_capped(&GraphKind::Square, 100, 1000),
            Err(Error::RadiusTooLarge { .. })
        ));
    }

    #[test]
    fn ids_stable_across_radii() {
        let small = build_window(&GraphKind::Square, 3).unwrap();
        let large = build_window(&GraphKind::Square, 5).unwrap();
        for v in 0..small.vertex_count() as u32 {
            assert_eq!(small.distance(v), large.distance(v));
            for i in 0..4 {
                match small.slot(v, i) {
                    Some(y) => assert_eq!(large.slot(v, i), Some(y)),
                    None => {} // ghost in the small window may be real in the large one
                }
            }
        }
    }
}
