//! From an orderly spanning tree to a floor-plan.
//!
//! 1. Draw the tree: each node is a row of cells as wide as its leaf count,
//!    children side by side under their parent.
//! 2. Stretch nodes downward just enough that every unrelated edge becomes a
//!    horizontal visibility.
//! 3. Widen bodies and grow sideways branches so the drawing fills the
//!    bounding rectangle without gaps.
//! 4. Thin branches that are taller than one row by pushing down the single
//!    node resting on them.
//!
//! Coordinates are integers with x growing rightward and y downward; the
//! bounding rectangle has its top-left corner at the origin.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ost::{min_leaf_ost, OrderlySpanningTree, OstError};
use crate::plane_graph::{Node, PlaneTriangulation, NIL};

/// Half-open integer rectangle `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rect {
    pub x0: u32,
    pub y0: u32,
    pub x1: u32,
    pub y1: u32,
}

impl Rect {
    pub fn new(x0: u32, y0: u32, x1: u32, y1: u32) -> Self {
        Rect { x0, y0, x1, y1 }
    }

    pub fn is_empty(&self) -> bool {
        self.x0 >= self.x1 || self.y0 >= self.y1
    }

    pub fn width(&self) -> u32 {
        self.x1.saturating_sub(self.x0)
    }

    pub fn height(&self) -> u32 {
        self.y1.saturating_sub(self.y0)
    }

    pub fn area(&self) -> u64 {
        self.width() as u64 * self.height() as u64
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        self.x0 <= x && x < self.x1 && self.y0 <= y && y < self.y1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayoutError {
    Ost(OstError),
    /// The stretch recurrences refer back to themselves; only possible for a
    /// tree that is not orderly.
    CyclicDependency { node: Node },
    /// A thick branch is not covered by exactly one node's bottom side.
    NonUniqueCoveringNode { node: Node },
    Internal(&'static str),
}

impl fmt::Display for LayoutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayoutError::Ost(e) => write!(f, "{e}"),
            LayoutError::CyclicDependency { node } => write!(f, "cyclic stretch dependency at node {node}"),
            LayoutError::NonUniqueCoveringNode { node } => {
                write!(f, "thick branch of node {node} is not covered by a single node")
            }
            LayoutError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for LayoutError {}

impl From<OstError> for LayoutError {
    fn from(e: OstError) -> Self {
        LayoutError::Ost(e)
    }
}

/// Node rectangles plus, for every unrelated edge, the bottom of the row in
/// which its endpoints see each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoVisibilityDrawing {
    x_left: Vec<u32>,
    x_right: Vec<u32>,
    y_top: Vec<u32>,
    y_bot: Vec<u32>,
    /// Indexed by the half-edge leaving the smaller-label endpoint; 0 when
    /// unset.
    edge_bottom: Vec<u32>,
    width: u32,
    height: u32,
}

impl TwoVisibilityDrawing {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn rect(&self, v: Node) -> Rect {
        Rect::new(self.x_left[v], self.y_top[v], self.x_right[v], self.y_bot[v])
    }

    /// Bottom boundary of `v`.
    pub fn bottom(&self, v: Node) -> u32 {
        self.y_bot[v]
    }

    /// Bottom of the visibility row of the unrelated edge `u`-`v`.
    pub fn edge_bottom(&self, g: &PlaneTriangulation, t: &OrderlySpanningTree, u: Node, v: Node) -> Option<u32> {
        let (a, b) = if t.label(u) < t.label(v) { (u, v) } else { (v, u) };
        let h = g.find_half_edge(a, b)?;
        let y = *self.edge_bottom.get(h)?;
        (y != 0).then_some(y)
    }

    /// All unrelated edges as `(smaller-label node, larger-label node, bottom)`.
    pub fn edge_bottoms<'a>(&'a self, g: &'a PlaneTriangulation) -> impl Iterator<Item = (Node, Node, u32)> + 'a {
        self.edge_bottom
            .iter()
            .enumerate()
            .filter(|(_, &y)| y != 0)
            .map(move |(h, &y)| (g.tail(h), g.head(h), y))
    }
}

fn tree_columns(g: &PlaneTriangulation, t: &OrderlySpanningTree) -> (Vec<u32>, Vec<u32>) {
    let n = g.node_count();
    let mut x_left = vec![0u32; n];
    let mut x_right = vec![0u32; n];
    let root = t.root();
    x_right[root] = t.leaves_below(1) as u32;
    for i in 1..=n {
        let v = t.node(i);
        let mut cursor = x_left[v];
        for c in t.children(g, i) {
            let u = t.node(c);
            x_left[u] = cursor;
            cursor += t.leaves_below(c) as u32;
            x_right[u] = cursor;
        }
    }
    (x_left, x_right)
}

/// Step 1: leaves are unit squares, every other node a one-row rectangle as
/// wide as its leaf count, placed directly beneath its parent.
pub fn visibility_drawing_of_tree(g: &PlaneTriangulation, t: &OrderlySpanningTree) -> TwoVisibilityDrawing {
    let n = g.node_count();
    let (x_left, x_right) = tree_columns(g, t);
    let mut y_top = vec![0u32; n];
    let mut y_bot = vec![1u32; n];
    for i in 2..=n {
        let v = t.node(i);
        let p = t.node(t.parent_label(i));
        y_top[v] = y_bot[p];
        y_bot[v] = y_top[v] + 1;
    }
    let height = y_bot.iter().copied().max().unwrap_or(0);
    TwoVisibilityDrawing {
        x_left,
        x_right,
        y_top,
        y_bot,
        edge_bottom: Vec::new(),
        width: t.leaves_below(1) as u32,
        height,
    }
}

/// Step 2: the least downward stretch realizing every unrelated edge.
///
/// For an unrelated edge `(i, j)` with `i` the smaller label, its row sits
/// directly below the rows used higher up on both sides: below the edge to
/// the next neighbor counterclockwise after `j` around `i` (or below `i`'s
/// parent), and below the edge to the neighbor before `i` around `j` (or
/// below `j`'s parent). A node ends at the bottom of its lowest such row.
pub fn stretch_to_two_visibility(
    g: &PlaneTriangulation,
    t: &OrderlySpanningTree,
    d: &TwoVisibilityDrawing,
) -> Result<TwoVisibilityDrawing, LayoutError> {
    let n = g.node_count();
    let m2 = g.half_edge_count();
    let mut y_node = vec![0u32; n];
    let mut y_edge = vec![0u32; m2];
    let mut active = vec![false; m2 + n];
    let root = t.root();
    y_node[root] = 1;

    // Items 0..m2 are edge rows keyed by half-edge, m2.. are nodes.
    let deps = |item: usize| -> Result<[Option<usize>; 2], LayoutError> {
        if item >= m2 {
            let v = item - m2;
            let i = t.label(v);
            let l = t.left_contact_edge(g, i).map(|h| g.twin(h));
            let r = t.right_contact_edge(g, i);
            if l.is_none() && r.is_none() {
                return Err(LayoutError::Internal("node without contacts"));
            }
            Ok([l, r])
        } else {
            let h = item;
            let i = g.tail(h);
            let j = g.head(h);
            let hn = g.next_around(h);
            let left = if Some(g.head(hn)) == t.parent(i) { m2 + g.head(hn) } else { hn };
            let hp = g.prev_around(g.twin(h));
            let right = if Some(g.head(hp)) == t.parent(j) { m2 + g.head(hp) } else { g.twin(hp) };
            Ok([Some(left), Some(right)])
        }
    };
    let value = |y_node: &[u32], y_edge: &[u32], item: usize| {
        if item >= m2 {
            y_node[item - m2]
        } else {
            y_edge[item]
        }
    };

    let mut stack: Vec<usize> = Vec::new();
    for i in 1..=n {
        let v = t.node(i);
        if y_node[v] != 0 {
            continue;
        }
        stack.push(m2 + v);
        active[m2 + v] = true;
        while let Some(&item) = stack.last() {
            let ds = deps(item)?;
            let mut pending = None;
            for dep in ds.iter().flatten() {
                if value(&y_node, &y_edge, *dep) == 0 {
                    pending = Some(*dep);
                    break;
                }
            }
            if let Some(dep) = pending {
                if active[dep] {
                    let node = if dep >= m2 { dep - m2 } else { g.tail(dep) };
                    return Err(LayoutError::CyclicDependency { node });
                }
                if dep < m2 && t.label(g.tail(dep)) > t.label(g.head(dep)) {
                    return Err(LayoutError::Internal("edge row keyed from the larger label"));
                }
                active[dep] = true;
                stack.push(dep);
                continue;
            }
            let vals = ds.map(|o| o.map_or(0, |x| value(&y_node, &y_edge, x)));
            if item >= m2 {
                y_node[item - m2] = vals[0].max(vals[1]);
            } else {
                y_edge[item] = 1 + vals[0].max(vals[1]);
            }
            active[item] = false;
            stack.pop();
        }
    }

    let mut y_top = vec![0u32; n];
    for v in 0..n {
        if let Some(p) = t.parent(v) {
            y_top[v] = y_node[p];
        }
    }
    let height = y_node.iter().copied().max().unwrap_or(0);
    Ok(TwoVisibilityDrawing {
        x_left: d.x_left.clone(),
        x_right: d.x_right.clone(),
        y_top,
        y_bot: y_node,
        edge_bottom: y_edge,
        width: d.width,
        height,
    })
}

/// One module before normalization: a body plus optional one-sided branches
/// that share the body's bottom row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModuleParts {
    pub left: u32,
    pub right: u32,
    pub top: u32,
    pub bottom: u32,
    /// Left end of the left branch; equal to `left` when there is none.
    pub left_reach: u32,
    pub left_top: u32,
    left_cover: u32,
    /// Right end of the right branch; equal to `right` when there is none.
    pub right_reach: u32,
    pub right_top: u32,
    right_cover: u32,
}

impl ModuleParts {
    pub fn body(&self) -> Rect {
        Rect::new(self.left, self.top, self.right, self.bottom)
    }

    pub fn left_branch(&self) -> Option<Rect> {
        let r = Rect::new(self.left_reach, self.left_top, self.left, self.bottom);
        (!r.is_empty()).then_some(r)
    }

    pub fn right_branch(&self) -> Option<Rect> {
        let r = Rect::new(self.right, self.right_top, self.right_reach, self.bottom);
        (!r.is_empty()).then_some(r)
    }

    /// Columns covered by the bottom row.
    fn bottom_span(&self) -> (u32, u32) {
        let l = if self.left_branch().is_some() { self.left_reach } else { self.left };
        let r = if self.right_branch().is_some() { self.right_reach } else { self.right };
        (l, r)
    }
}

/// Output of step 3 and step 4 in structured form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchedLayout {
    parts: Vec<ModuleParts>,
    order: Vec<u32>,
    width: u32,
    height: u32,
}

impl BranchedLayout {
    pub fn parts(&self, v: Node) -> &ModuleParts {
        &self.parts[v]
    }

    pub fn to_floorplan(&self) -> FloorPlan {
        let mut rects = Vec::with_capacity(3);
        let mut b = FloorPlanBuilder::new(self.height, self.width, self.parts.len());
        for p in &self.parts {
            rects.clear();
            rects.push(p.body());
            rects.extend(p.left_branch());
            rects.extend(p.right_branch());
            b.push_module(&rects);
        }
        b.finish()
    }
}

fn first_child(x_left: &[u32], v: Node, p: Node) -> bool {
    x_left[v] == x_left[p]
}

/// Step 3: each body widens to the extent its parent's bottom row reaches
/// on that side, and each node grows a branch toward its left contact and
/// (except node 2, whose edge to node n is drawn from the other end) toward
/// its right contact across the rows it sees that contact.
pub fn grow_branches(
    g: &PlaneTriangulation,
    t: &OrderlySpanningTree,
    d: &TwoVisibilityDrawing,
) -> Result<BranchedLayout, LayoutError> {
    let n = g.node_count();
    // Items 0..n are left extents, n..2n right extents, indexed by node.
    let mut ext = vec![NIL; 2 * n];
    let mut active = vec![false; 2 * n];
    let last_label = n;
    let dep = |item: usize| -> Option<usize> {
        let (v, right) = if item < n { (item, false) } else { (item - n, true) };
        let p = t.parent(v)?;
        let pi = t.label(p);
        if !right {
            if !first_child(&d.x_left, v, p) {
                return None;
            }
            match t.left_contact(pi) {
                0 => Some(p),
                l => Some(n + t.node(l)),
            }
        } else {
            if d.x_right[v] != d.x_right[p] {
                return None;
            }
            match t.right_contact(pi) {
                r if r != 0 && pi != last_label => Some(t.node(r)),
                _ => Some(n + p),
            }
        }
    };
    let own = |item: usize| if item < n { d.x_left[item] } else { d.x_right[item - n] };
    let mut stack = Vec::new();
    for start in 0..2 * n {
        if ext[start] != NIL {
            continue;
        }
        stack.push(start);
        active[start] = true;
        while let Some(&item) = stack.last() {
            match dep(item) {
                Some(x) if ext[x] == NIL => {
                    if active[x] {
                        return Err(LayoutError::CyclicDependency { node: x % n });
                    }
                    active[x] = true;
                    stack.push(x);
                }
                Some(x) => {
                    ext[item] = ext[x];
                    active[item] = false;
                    stack.pop();
                }
                None => {
                    ext[item] = own(item);
                    active[item] = false;
                    stack.pop();
                }
            }
        }
    }

    let mut parts = Vec::with_capacity(n);
    for v in 0..n {
        let (l, r) = (ext[v], ext[n + v]);
        let (top, bottom) = (d.y_top[v], d.y_bot[v]);
        parts.push(ModuleParts {
            left: l,
            right: r,
            top,
            bottom,
            left_reach: l,
            left_top: bottom,
            left_cover: NIL,
            right_reach: r,
            right_top: bottom,
            right_cover: NIL,
        });
    }
    // Top of a branch: bottom of the neighbor just above the contact on the
    // same side, or the body top when that neighbor is the parent.
    let branch_top = |v: Node, k: Node| if Some(k) == t.parent(v) { d.y_top[v] } else { d.y_bot[k] };
    for i in 2..=n {
        let v = t.node(i);
        if let Some(h) = t.left_contact_edge(g, i) {
            let k = g.head(g.prev_around(h));
            let target = g.head(h);
            let p = &mut parts[v];
            p.left_reach = ext[n + target];
            p.left_top = branch_top(v, k);
            p.left_cover = k as u32;
            if p.left_reach > p.left {
                return Err(LayoutError::Internal("left branch points right"));
            }
        }
        if i != 2 {
            if let Some(h) = t.right_contact_edge(g, i) {
                let k = g.head(g.next_around(h));
                let target = g.head(h);
                let p = &mut parts[v];
                p.right_reach = ext[target];
                p.right_top = branch_top(v, k);
                p.right_cover = k as u32;
                if p.right_reach < p.right {
                    return Err(LayoutError::Internal("right branch points left"));
                }
            }
        }
    }
    let order = (0..=n).map(|i| if i == 0 { NIL } else { t.node(i) as u32 }).collect();
    Ok(BranchedLayout { parts, order, width: d.width, height: d.height })
}

/// Step 4: every branch taller than one row is cut to its bottom row by
/// extending the node resting on it downward. Nodes are visited from the
/// largest label to 3; a node that was extended is revisited because its own
/// branches grow with it.
pub fn reduce_branch_heights(mut layout: BranchedLayout) -> Result<BranchedLayout, LayoutError> {
    let n = layout.parts.len();
    let mut work: Vec<u32> = (3..=n).map(|i| layout.order[i]).collect();
    let mut budget = 4 * n + 16;
    while let Some(v) = work.pop() {
        let v = v as usize;
        for side in [Side::Left, Side::Right] {
            let m = layout.parts[v];
            let (from, to, top, cover) = match side {
                Side::Left => (m.left_reach, m.left, m.left_top, m.left_cover),
                Side::Right => (m.right, m.right_reach, m.right_top, m.right_cover),
            };
            if from >= to || m.bottom - top <= 1 || top == m.top {
                continue;
            }
            if cover == NIL {
                return Err(LayoutError::NonUniqueCoveringNode { node: v });
            }
            let k = cover as usize;
            let km = layout.parts[k];
            if km.bottom != top || km.bottom_span() != (from, to) {
                return Err(LayoutError::NonUniqueCoveringNode { node: v });
            }
            layout.parts[k].bottom = m.bottom - 1;
            match side {
                Side::Left => layout.parts[v].left_top = m.bottom - 1,
                Side::Right => layout.parts[v].right_top = m.bottom - 1,
            }
            work.push(k as u32);
            budget = budget.checked_sub(1).ok_or(LayoutError::Internal("branch thinning does not settle"))?;
        }
    }
    Ok(layout)
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

/// Steps 1 to 4 for a given orderly spanning tree.
pub fn floorplan_with_tree(g: &PlaneTriangulation, t: &OrderlySpanningTree) -> Result<FloorPlan, LayoutError> {
    let d = visibility_drawing_of_tree(g, t);
    let d = stretch_to_two_visibility(g, t, &d)?;
    let b = grow_branches(g, t, &d)?;
    let b = reduce_branch_heights(b)?;
    Ok(b.to_floorplan())
}

/// Full pipeline on the realizer tree with the fewest leaves.
pub fn floorplan(g: &PlaneTriangulation) -> Result<FloorPlan, LayoutError> {
    let t = min_leaf_ost(g)?;
    floorplan_with_tree(g, &t)
}

/// A partition of an `height x width` rectangle into modules, one per node,
/// each stored as its canonical slab decomposition: maximal runs of cells in
/// a row, merged downward while the run is unchanged, sorted by top then left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FloorPlan {
    height: u32,
    width: u32,
    starts: Vec<u32>,
    rects: Vec<Rect>,
}

impl FloorPlan {
    /// Normalizes every module; overlapping input rectangles are merged.
    pub fn new<M: AsRef<[Rect]>>(height: u32, width: u32, modules: &[M]) -> Self {
        let mut b = FloorPlanBuilder::new(height, width, modules.len());
        for m in modules {
            b.push_module(m.as_ref());
        }
        b.finish()
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn module_count(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn module(&self, v: Node) -> &[Rect] {
        &self.rects[self.starts[v] as usize..self.starts[v + 1] as usize]
    }

    pub fn modules(&self) -> impl ExactSizeIterator<Item = &[Rect]> + '_ {
        (0..self.module_count()).map(move |v| self.module(v))
    }

    pub fn module_area(&self, v: Node) -> u64 {
        self.module(v).iter().map(Rect::area).sum()
    }
}

struct FloorPlanBuilder {
    plan: FloorPlan,
    scratch: Vec<Rect>,
}

impl FloorPlanBuilder {
    fn new(height: u32, width: u32, modules: usize) -> Self {
        let mut starts = Vec::with_capacity(modules + 1);
        starts.push(0);
        FloorPlanBuilder {
            plan: FloorPlan { height, width, starts, rects: Vec::with_capacity(2 * modules) },
            scratch: Vec::new(),
        }
    }

    fn push_module(&mut self, rects: &[Rect]) {
        normalize_into(rects, &mut self.scratch);
        self.plan.rects.extend_from_slice(&self.scratch);
        self.plan.starts.push(self.plan.rects.len() as u32);
    }

    fn finish(self) -> FloorPlan {
        self.plan
    }
}

/// Canonical slab decomposition of a union of rectangles.
pub fn normalize(rects: &[Rect]) -> Vec<Rect> {
    let mut out = Vec::new();
    normalize_into(rects, &mut out);
    out
}

fn normalize_into(rects: &[Rect], out: &mut Vec<Rect>) {
    out.clear();
    let live: Vec<Rect> = rects.iter().copied().filter(|r| !r.is_empty()).collect();
    if live.len() == 1 {
        out.push(live[0]);
        return;
    }
    let mut ys: Vec<u32> = live.iter().flat_map(|r| [r.y0, r.y1]).collect();
    ys.sort_unstable();
    ys.dedup();
    let mut open: Vec<Rect> = Vec::new();
    let mut intervals: Vec<(u32, u32)> = Vec::new();
    for w in ys.windows(2) {
        let (y0, y1) = (w[0], w[1]);
        intervals.clear();
        for r in &live {
            if r.y0 <= y0 && y1 <= r.y1 {
                intervals.push((r.x0, r.x1));
            }
        }
        intervals.sort_unstable();
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(intervals.len());
        for &(a, b) in intervals.iter() {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        let mut next_open = Vec::with_capacity(merged.len());
        for (a, b) in merged {
            if let Some(k) = open.iter().position(|r| r.x0 == a && r.x1 == b && r.y1 == y0) {
                let mut r = open.swap_remove(k);
                r.y1 = y1;
                next_open.push(r);
            } else {
                next_open.push(Rect::new(a, y0, b, y1));
            }
        }
        out.append(&mut open);
        open = next_open;
    }
    out.append(&mut open);
    out.sort_unstable_by_key(|r| (r.y0, r.x0, r.y1, r.x1));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_merges_stacked_equal_runs() {
        let r = normalize(&[Rect::new(0, 0, 2, 3), Rect::new(0, 3, 2, 4), Rect::new(2, 3, 5, 4)]);
        assert_eq!(r, vec![Rect::new(0, 0, 2, 3), Rect::new(0, 3, 5, 4)]);
    }

    #[test]
    fn normalize_keeps_disjoint_runs_apart() {
        let r = normalize(&[Rect::new(0, 0, 1, 2), Rect::new(3, 1, 4, 2)]);
        assert_eq!(r, vec![Rect::new(0, 0, 1, 2), Rect::new(3, 1, 4, 2)]);
    }
}
