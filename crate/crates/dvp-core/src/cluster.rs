//! Weak and strong cluster extraction from a configuration.
//!
//! A pair of adjacent in-window vertices is weakly connected when at least
//! one selected the other, strongly connected when both did. Both relations
//! are symmetric, so plain undirected connectivity machinery applies: a
//! breadth-first search for single-root reports and union-find (path
//! compression, union by size) for whole-window labelings.

use crate::error::{Error, Result};
use crate::graph::GraphWindow;
use crate::sampler::Configuration;

/// Connection mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Weak,
    Strong,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Weak => "weak",
            Mode::Strong => "strong",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "weak" => Ok(Mode::Weak),
            "strong" => Ok(Mode::Strong),
            other => Err(format!("unknown mode '{other}' (expected weak|strong)")),
        }
    }
}

/// Summary of one extracted cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterReport {
    pub size: u32,
    /// Largest distance-from-origin among cluster vertices.
    pub max_shell: u32,
    /// True iff the cluster meets the boundary shell; the true cluster may
    /// then extend beyond the window and `size` is only a lower bound.
    pub touches_window_boundary: bool,
    pub mode: Mode,
}

/// Is the `(v, slot)` edge open under `mode`? `slot` must be in-window.
#[inline]
fn edge_open(
    window: &GraphWindow,
    config: &Configuration,
    v: u32,
    slot: usize,
    y: u32,
    mode: Mode,
) -> bool {
    let forward = config.selects(v, slot);
    let backward = config.selects(y, window.reverse_slot(v, slot));
    match mode {
        Mode::Weak => forward || backward,
        Mode::Strong => forward && backward,
    }
}

/// Breadth-first extraction of the cluster containing `root`.
pub fn cluster_report(
    window: &GraphWindow,
    config: &Configuration,
    root: u32,
    mode: Mode,
) -> ClusterReport {
    let mut visited = vec![false; window.vertex_count()];
    let mut queue = vec![root];
    visited[root as usize] = true;
    let mut size = 0u32;
    let mut max_shell = window.distance(root);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        size += 1;
        max_shell = max_shell.max(window.distance(v));
        for i in 0..window.degree() {
            let Some(y) = window.slot(v, i) else { continue };
            if !visited[y as usize] && edge_open(window, config, v, i, y, mode) {
                visited[y as usize] = true;
                queue.push(y);
            }
        }
    }
    ClusterReport {
        size,
        max_shell,
        touches_window_boundary: max_shell == window.radius(),
        mode,
    }
}

/// Cluster of `root` under at-least-one-way selection.
pub fn weak_cluster(window: &GraphWindow, config: &Configuration, root: u32) -> ClusterReport {
    cluster_report(window, config, root, Mode::Weak)
}

/// Cluster of `root` under mutual selection.
pub fn strong_cluster(window: &GraphWindow, config: &Configuration, root: u32) -> ClusterReport {
    cluster_report(window, config, root, Mode::Strong)
}

/// True iff the mode-cluster of the origin contains a vertex at distance
/// `n`. Any path out of `B(n)` crosses the shell first, so for `n <= R`
/// this is free of truncation bias.
pub fn reaches_shell(
    window: &GraphWindow,
    config: &Configuration,
    n: u32,
    mode: Mode,
) -> Result<bool> {
    if n > window.radius() {
        return Err(Error::ShellOutOfRange { shell: n, radius: window.radius() });
    }
    Ok(cluster_report(window, config, 0, mode).max_shell >= n)
}

/// Union-find over the window vertices with per-component statistics.
pub struct Labeling {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: u32,
}

impl Labeling {
    pub fn component_count(&self) -> u32 {
        self.components
    }

    pub fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let grand = self.parent[self.parent[v as usize] as usize];
            self.parent[v as usize] = grand;
            v = grand;
        }
        v
    }

    pub fn component_size(&mut self, v: u32) -> u32 {
        let r = self.find(v);
        self.size[r as usize]
    }

    pub fn same_component(&mut self, a: u32, b: u32) -> bool {
        self.find(a) == self.find(b)
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.components -= 1;
    }
}

/// Labels every component of the mode-subgraph induced on the window.
pub fn label_components(window: &GraphWindow, config: &Configuration, mode: Mode) -> Labeling {
    let n = window.vertex_count();
    let mut labeling = Labeling {
        parent: (0..n as u32).collect(),
        size: vec![1; n],
        components: n as u32,
    };
    for v in 0..n as u32 {
        for i in 0..window.degree() {
            let Some(y) = window.slot(v, i) else { continue };
            if y > v && edge_open(window, config, v, i, y, mode) {
                labeling.union(v, y);
            }
        }
    }
    labeling
}
