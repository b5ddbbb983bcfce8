//! Instance generators and small exhaustive oracles.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::plane_graph::{GraphError, Node, PlaneTriangulation, NIL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    RandomStacked,
    RandomFlipped,
    NestedTriangles,
    /// Read from a file rather than generated.
    Explicit,
}

impl InstanceKind {
    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::RandomStacked => "random_stacked",
            InstanceKind::RandomFlipped => "random_flipped",
            InstanceKind::NestedTriangles => "nested_triangles",
            InstanceKind::Explicit => "explicit",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "random_stacked" => Some(InstanceKind::RandomStacked),
            "random_flipped" => Some(InstanceKind::RandomFlipped),
            "nested_triangles" => Some(InstanceKind::NestedTriangles),
            "explicit" => Some(InstanceKind::Explicit),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InstanceSpec {
    pub kind: InstanceKind,
    pub n: usize,
    pub seed: u64,
    pub flips: usize,
}

impl InstanceSpec {
    pub fn stacked(n: usize, seed: u64) -> Self {
        InstanceSpec { kind: InstanceKind::RandomStacked, n, seed, flips: 0 }
    }

    pub fn flipped(n: usize, seed: u64, flips: usize) -> Self {
        InstanceSpec { kind: InstanceKind::RandomFlipped, n, seed, flips }
    }

    pub fn nested(n: usize) -> Self {
        InstanceSpec { kind: InstanceKind::NestedTriangles, n, seed: 0, flips: 0 }
    }

    pub fn generate(&self) -> Result<PlaneTriangulation, InstanceError> {
        match self.kind {
            InstanceKind::RandomStacked => random_triangulation(self.n, self.seed, 0),
            InstanceKind::RandomFlipped => random_triangulation(self.n, self.seed, self.flips),
            InstanceKind::NestedTriangles => nested_triangle_family(self.n),
            InstanceKind::Explicit => Err(InstanceError::NotGenerated),
        }
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kind={} n={} seed={} flips={}", self.kind.name(), self.n, self.seed, self.flips)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    TooFewNodes { n: usize },
    NotGenerated,
    Graph(GraphError),
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::TooFewNodes { n } => write!(f, "instances need n >= 3, got {n}"),
            InstanceError::NotGenerated => f.write_str("explicit instances are read, not generated"),
            InstanceError::Graph(e) => write!(f, "generated graph is invalid: {e}"),
        }
    }
}

impl core::error::Error for InstanceError {}

impl From<GraphError> for InstanceError {
    fn from(e: GraphError) -> Self {
        InstanceError::Graph(e)
    }
}

/// Mutable embedding with linked rotations; half-edges come in pairs `h`,
/// `h ^ 1`.
struct Arena {
    head: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    any: Vec<u32>,
    deg: Vec<u32>,
}

impl Arena {
    fn with_capacity(n: usize) -> Self {
        let m2 = 6 * n;
        Arena {
            head: Vec::with_capacity(m2),
            next: Vec::with_capacity(m2),
            prev: Vec::with_capacity(m2),
            any: Vec::with_capacity(n),
            deg: Vec::with_capacity(n),
        }
    }

    fn tail(&self, h: usize) -> usize {
        self.head[h ^ 1] as usize
    }

    fn add_edge(&mut self, u: usize, v: usize) -> usize {
        let h = self.head.len();
        self.head.push(v as u32);
        self.head.push(u as u32);
        for _ in 0..2 {
            self.next.push(NIL);
            self.prev.push(NIL);
        }
        h
    }

    /// Splices `h` into its tail's rotation right after `after`.
    fn insert_after(&mut self, after: usize, h: usize) {
        let nx = self.next[after] as usize;
        self.next[after] = h as u32;
        self.prev[h] = after as u32;
        self.next[h] = nx as u32;
        self.prev[nx] = h as u32;
    }

    fn unlink(&mut self, h: usize) {
        let p = self.prev[h] as usize;
        let nx = self.next[h] as usize;
        self.next[p] = nx as u32;
        self.prev[nx] = p as u32;
        let v = self.tail(h);
        if self.any[v] as usize == h {
            self.any[v] = nx as u32;
        }
    }

    fn face_next(&self, h: usize) -> usize {
        self.prev[h ^ 1] as usize
    }

    fn degree(&self, v: usize) -> usize {
        self.deg[v] as usize
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        let s = self.any[a] as usize;
        let mut e = s;
        loop {
            if self.head[e] as usize == b {
                return true;
            }
            e = self.next[e] as usize;
            if e == s {
                return false;
            }
        }
    }

    fn rotations(&self) -> Vec<Vec<Node>> {
        (0..self.any.len())
            .map(|v| {
                let s = self.any[v] as usize;
                let mut r = vec![self.head[s] as Node];
                let mut e = self.next[s] as usize;
                while e != s {
                    r.push(self.head[e] as Node);
                    e = self.next[e] as usize;
                }
                r
            })
            .collect()
    }
}

/// Random stacked triangulation, optionally followed by `flips` successful
/// random diagonal flips.
///
/// Starts from a triangle and repeatedly places a new node inside a uniformly
/// chosen interior face, joined to its three corners. Node 0, 1, 2 bound the
/// exterior face throughout.
pub fn random_triangulation(n: usize, seed: u64, flips: usize) -> Result<PlaneTriangulation, InstanceError> {
    if n < 3 {
        return Err(InstanceError::TooFewNodes { n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Arena::with_capacity(n);
    let e01 = a.add_edge(0, 1);
    let e12 = a.add_edge(1, 2);
    let e20 = a.add_edge(2, 0);
    // Around 0: 1 then 2; around 1: 2 then 0; around 2: 0 then 1.
    let ring = |a: &mut Arena, x: usize, y: usize| {
        a.next[x] = y as u32;
        a.prev[x] = y as u32;
        a.next[y] = x as u32;
        a.prev[y] = x as u32;
    };
    ring(&mut a, e01, e20 ^ 1);
    ring(&mut a, e12, e01 ^ 1);
    ring(&mut a, e20, e12 ^ 1);
    a.any = vec![e01 as u32, e12 as u32, e20 as u32];
    a.deg = vec![2, 2, 2];

    // Each interior face is represented by one of its half-edges.
    let mut faces: Vec<u32> = Vec::with_capacity(2 * n);
    faces.push(e01 as u32);
    for x in 3..n {
        let fi = rng.gen_range(0..faces.len());
        let hab = faces[fi] as usize;
        let hbc = a.face_next(hab);
        let hca = a.face_next(hbc);
        let (pa, pb, pc) = (a.tail(hab), a.tail(hbc), a.tail(hca));
        let xa = a.add_edge(x, pa);
        let xb = a.add_edge(x, pb);
        let xc = a.add_edge(x, pc);
        a.next[xa] = xb as u32;
        a.next[xb] = xc as u32;
        a.next[xc] = xa as u32;
        a.prev[xa] = xc as u32;
        a.prev[xb] = xa as u32;
        a.prev[xc] = xb as u32;
        a.any.push(xa as u32);
        a.deg.push(3);
        for p in [pa, pb, pc] {
            a.deg[p] += 1;
        }
        a.insert_after(hab, xa ^ 1);
        a.insert_after(hbc, xb ^ 1);
        a.insert_after(hca, xc ^ 1);
        faces[fi] = hab as u32;
        faces.push(hbc as u32);
        faces.push(hca as u32);
    }

    let m2 = a.head.len();
    let mut done = 0;
    let mut attempts = 0usize;
    let max_attempts = flips.saturating_mul(50).saturating_add(100);
    while done < flips && attempts < max_attempts && n > 4 {
        attempts += 1;
        let h = rng.gen_range(0..m2);
        let (u, v) = (a.tail(h), a.head[h] as usize);
        if u < 3 && v < 3 {
            continue;
        }
        if a.degree(u) <= 3 || a.degree(v) <= 3 {
            continue;
        }
        let hva = a.face_next(h);
        let x = a.head[hva] as usize;
        let huy = a.face_next(h ^ 1);
        let y = a.head[huy] as usize;
        if x == y || a.adjacent(x, y) {
            continue;
        }
        // Face (u, v, x) and face (v, u, y): replace u-v by x-y.
        let hxu = a.face_next(hva);
        let hyv = a.face_next(huy);
        a.unlink(h);
        a.unlink(h ^ 1);
        a.head[h] = y as u32;
        a.head[h ^ 1] = x as u32;
        a.insert_after(hxu, h);
        a.insert_after(hyv, h ^ 1);
        a.deg[u] -= 1;
        a.deg[v] -= 1;
        a.deg[x] += 1;
        a.deg[y] += 1;
        done += 1;
    }

    let rot = breadth_first_relabel(&a.rotations());
    Ok(PlaneTriangulation::from_rotation(n, &rot, [0, 2, 1])?)
}

/// Renumbers nodes in breadth-first order from nodes 0, 1, 2, which keep
/// their ids, so that neighbors tend to have nearby ids.
fn breadth_first_relabel(rot: &[Vec<Node>]) -> Vec<Vec<Node>> {
    let n = rot.len();
    let mut id = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    for v in 0..3 {
        id[v] = v;
        order.push(v);
    }
    let mut k = 0;
    while k < order.len() {
        for &u in &rot[order[k]] {
            if id[u] == usize::MAX {
                id[u] = order.len();
                order.push(u);
            }
        }
        k += 1;
    }
    order.iter().map(|&v| rot[v].iter().map(|&u| id[u]).collect()).collect()
}

/// Interior faces (traced order) and exterior of the nested-triangle family.
fn nested_faces(n: usize) -> (Vec<[Node; 3]>, [Node; 3]) {
    let base = 3 + (n - 3) % 3;
    let (mut faces, mut e) = match base {
        3 => (vec![[0, 1, 2]], [0, 2, 1]),
        4 => (vec![[0, 1, 3], [1, 2, 3], [2, 0, 3]], [0, 2, 1]),
        _ => (vec![[0, 1, 4], [1, 3, 4], [3, 0, 4], [1, 2, 3], [2, 0, 3]], [0, 2, 1]),
    };
    for m in (base + 3..=n).step_by(3) {
        let o = [m - 3, m - 2, m - 1];
        for i in 0..3 {
            let j = (i + 1) % 3;
            faces.push([e[i], e[j], o[i]]);
            faces.push([o[i], e[j], o[j]]);
        }
        e = o;
    }
    (faces, e)
}

/// Lower-bound family: a fixed small triangulation for n = 3, 4, 5, then each
/// step wraps the previous graph in a new outer triangle and fills the annulus
/// with a zig-zag of six triangles.
pub fn nested_triangle_family(n: usize) -> Result<PlaneTriangulation, InstanceError> {
    if n < 3 {
        return Err(InstanceError::TooFewNodes { n });
    }
    let (mut faces, ext) = nested_faces(n);
    faces.push(ext);
    Ok(PlaneTriangulation::from_faces(n, &faces, ext)?)
}

/// Evaluation of the two size inequalities every floor-plan of the nested
/// family must meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowerBound {
    /// floor((2n+1)/3)
    pub min_side: usize,
    /// ceil(4n/3)
    pub side_sum: usize,
    pub min_side_margin: i64,
    pub side_sum_margin: i64,
}

impl LowerBound {
    pub fn satisfied(&self) -> bool {
        self.min_side_margin >= 0 && self.side_sum_margin >= 0
    }
}

pub fn leaf_bound(n: usize) -> usize {
    (2 * n + 1) / 3
}

pub fn lower_bound_predicate(n: usize, h: usize, w: usize) -> LowerBound {
    let min_side = leaf_bound(n);
    let side_sum = (4 * n).div_ceil(3);
    LowerBound {
        min_side,
        side_sum,
        min_side_margin: h.min(w) as i64 - min_side as i64,
        side_sum_margin: (h + w) as i64 - side_sum as i64,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForce {
    /// Pareto-minimal grid sizes `(h, w)` that admit a floor-plan.
    Feasible(Vec<(usize, usize)>),
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForceError {
    TooManyNodes { n: usize },
    GridTooLarge { max_h: usize, max_w: usize },
    BudgetExceeded { budget: u64 },
}

impl fmt::Display for BruteForceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BruteForceError::TooManyNodes { n } => write!(f, "exhaustive search supports n <= 5, got {n}"),
            BruteForceError::GridTooLarge { max_h, max_w } => {
                write!(f, "grid {max_h}x{max_w} exceeds 16 cells")
            }
            BruteForceError::BudgetExceeded { budget } => write!(f, "search exceeded {budget} steps"),
        }
    }
}

impl core::error::Error for BruteForceError {}

pub const BRUTE_FORCE_MAX_NODES: usize = 5;
pub const BRUTE_FORCE_MAX_CELLS: usize = 16;

/// Exhaustive search over all partitions of every `h x w` grid with
/// `h <= max_h`, `w <= max_w` into `n` edge-connected modules whose contact
/// graph (shared cell edges) is exactly the edge set of `g`.
///
/// `budget` caps the number of search steps over the whole call.
pub fn brute_force_min_area(
    g: &PlaneTriangulation,
    max_h: usize,
    max_w: usize,
    budget: u64,
) -> Result<BruteForce, BruteForceError> {
    let n = g.node_count();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(BruteForceError::TooManyNodes { n });
    }
    if max_h * max_w > BRUTE_FORCE_MAX_CELLS {
        return Err(BruteForceError::GridTooLarge { max_h, max_w });
    }
    let mut adj = [[false; BRUTE_FORCE_MAX_NODES]; BRUTE_FORCE_MAX_NODES];
    let mut need = 0u32;
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
        need |= 1 << pair_bit(u, v);
    }
    let mut steps = 0u64;
    let mut feasible = Vec::new();
    for h in 1..=max_h {
        for w in 1..=max_w {
            if h * w < n {
                continue;
            }
            let (rows, cols) = if w <= h { (h, w) } else { (w, h) };
            let mut s = GridSearch {
                n,
                rows,
                cols,
                adj: &adj,
                need,
                failed: BTreeSet::new(),
                steps: &mut steps,
                budget,
            };
            let start = Frontier {
                labels: [0; 4],
                comps: [0; 4],
                used: 0,
                closed: 0,
                seen: 0,
            };
            if s.solve(0, start)? {
                feasible.push((h, w));
            }
        }
    }
    let minimal: Vec<(usize, usize)> = feasible
        .iter()
        .copied()
        .filter(|&(h, w)| !feasible.iter().any(|&(a, b)| (a, b) != (h, w) && a <= h && b <= w))
        .collect();
    if minimal.is_empty() {
        Ok(BruteForce::Infeasible)
    } else {
        Ok(BruteForce::Feasible(minimal))
    }
}

fn pair_bit(u: usize, v: usize) -> u32 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (a * BRUTE_FORCE_MAX_NODES + b) as u32
}

/// The last `cols` placed cells plus what is needed to finish the search:
/// labels used, labels whose region is sealed, contacts seen so far.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Frontier {
    labels: [u8; 4],
    comps: [u8; 4],
    used: u8,
    closed: u8,
    seen: u32,
}

struct GridSearch<'a> {
    n: usize,
    rows: usize,
    cols: usize,
    adj: &'a [[bool; BRUTE_FORCE_MAX_NODES]; BRUTE_FORCE_MAX_NODES],
    need: u32,
    failed: BTreeSet<(usize, Frontier)>,
    steps: &'a mut u64,
    budget: u64,
}

impl GridSearch<'_> {
    fn solve(&mut self, k: usize, f: Frontier) -> Result<bool, BruteForceError> {
        let total = self.rows * self.cols;
        if k == total {
            return Ok(self.accept(&f));
        }
        if self.failed.contains(&(k, f)) {
            return Ok(false);
        }
        *self.steps += 1;
        if *self.steps > self.budget {
            return Err(BruteForceError::BudgetExceeded { budget: self.budget });
        }
        let (r, c) = (k / self.cols, k % self.cols);
        for lab in 0..self.n {
            if f.closed & (1 << lab) != 0 {
                continue;
            }
            if let Some(next) = self.place(&f, r, c, lab as u8) {
                if self.solve(k + 1, next)? {
                    return Ok(true);
                }
            }
        }
        self.failed.insert((k, f));
        Ok(false)
    }

    fn accept(&self, f: &Frontier) -> bool {
        let all = (1u8 << self.n) - 1;
        if f.used != all || f.seen != self.need {
            return false;
        }
        // Every label still on the frontier must form a single component.
        for i in 0..self.cols {
            for j in 0..self.cols {
                if f.labels[i] == f.labels[j] && f.comps[i] != f.comps[j] {
                    return false;
                }
            }
        }
        true
    }

    /// Places `lab` at (r, c), or returns `None` when that creates a contact
    /// outside the graph or strands part of a region.
    fn place(&self, f: &Frontier, r: usize, c: usize, lab: u8) -> Option<Frontier> {
        let w = self.cols;
        let mut seen = f.seen;
        // Slot c holds the cell above; slot c-1 holds the cell to the left.
        let up = if r > 0 { Some((f.labels[c], f.comps[c])) } else { None };
        let left = if c > 0 { Some((f.labels[c - 1], f.comps[c - 1])) } else { None };
        for (l, _) in up.iter().chain(left.iter()) {
            if *l != lab {
                if !self.adj[*l as usize][lab as usize] {
                    return None;
                }
                seen |= 1 << pair_bit(*l as usize, lab as usize);
            }
        }
        let mut labels = f.labels;
        let mut comps = f.comps;
        let fresh = 1 + comps[..w].iter().copied().max().unwrap_or(0);
        let mut comp = fresh;
        let mut merge: Option<u8> = None;
        if let Some((l, cc)) = up {
            if l == lab {
                comp = cc;
            }
        }
        if let Some((l, cc)) = left {
            if l == lab {
                if comp == fresh {
                    comp = cc;
                } else if cc != comp {
                    merge = Some(cc);
                }
            }
        }
        if let Some(old) = merge {
            for x in comps[..w].iter_mut() {
                if *x == old {
                    *x = comp;
                }
            }
        }
        let mut closed = f.closed;
        if r > 0 {
            // The cell above leaves the frontier.
            let (ol, oc) = (labels[c], comps[c]);
            let stays = (0..w).any(|i| i != c && comps[i] == oc && labels[i] == ol) || (ol == lab && comp == oc);
            if !stays {
                let other = (0..w).any(|i| i != c && labels[i] == ol) || ol == lab;
                if other {
                    return None;
                }
                closed |= 1 << ol;
            }
        }
        labels[c] = lab;
        comps[c] = comp;
        // Renumber components by first appearance so equal states compare equal.
        let mut map = [0u8; 32];
        let mut nextid = 1u8;
        let filled = if r > 0 { w } else { c + 1 };
        for i in 0..w {
            if i >= filled {
                comps[i] = 0;
                labels[i] = 0;
                continue;
            }
            let old = comps[i] as usize;
            if map[old] == 0 {
                map[old] = nextid;
                nextid += 1;
            }
            comps[i] = map[old];
        }
        Some(Frontier { labels, comps, used: f.used | (1 << lab), closed, seen })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_random_instances_are_the_forced_ones() {
        assert_eq!(random_triangulation(3, 9, 0).unwrap().edge_count(), 3);
        let k4 = random_triangulation(4, 9, 5).unwrap();
        assert_eq!(k4.edge_count(), 6);
    }

    #[test]
    fn bounds_at_the_base_cases() {
        let b = lower_bound_predicate(3, 2, 2);
        assert!(b.satisfied());
        assert_eq!((b.min_side_margin, b.side_sum_margin), (0, 0));
        assert!(!lower_bound_predicate(5, 3, 3).satisfied());
    }
}
