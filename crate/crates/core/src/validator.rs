//! Independent checks on floor-plans, working on the unit-cell raster.
//!
//! Two modules are adjacent when they share at least one cell edge; touching
//! at a corner does not count.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::instances::leaf_bound;
use crate::layout::{normalize, FloorPlan, Rect};
use crate::ost::{OrderError, OrderlySpanningTree, SpanningTree};
use crate::plane_graph::{Node, PlaneTriangulation};

/// Rasters larger than this many cells are refused.
pub const MAX_RASTER_CELLS: u64 = 1 << 27;

const GAP: u32 = 0;
const OVERLAP: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeTag {
    I,
    L,
    T,
    Z,
    Other,
}

impl ShapeTag {
    pub const ALL: [ShapeTag; 5] = [ShapeTag::I, ShapeTag::L, ShapeTag::T, ShapeTag::Z, ShapeTag::Other];

    pub fn name(self) -> &'static str {
        match self {
            ShapeTag::I => "I",
            ShapeTag::L => "L",
            ShapeTag::T => "T",
            ShapeTag::Z => "Z",
            ShapeTag::Other => "Other",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModuleShape {
    pub tag: ShapeTag,
    pub reflex_corners: u32,
    /// For two stacked rectangles `A` over `B`: how far `A` sticks out left
    /// and right past `B`, then how far `B` sticks out left and right past
    /// `A`.
    pub overhangs: Option<[u32; 4]>,
    /// Height of the rectangle carrying the overhangs of an L or T.
    pub branch_height: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    ModuleCount { expected: usize, found: usize },
    OutOfBounds { node: Node },
    RasterTooLarge { cells: u64 },
    Gap { x: u32, y: u32 },
    Overlap { x: u32, y: u32 },
    EmptyModule { node: Node },
    Disconnected { node: Node },
    MissingAdjacency { u: Node, v: Node },
    SpuriousAdjacency { u: Node, v: Node },
    ForbiddenShape { node: Node, tag: ShapeTag },
    ThickBranch { node: Node, height: u32 },
    HeightBoundViolated { height: u32, bound: usize },
    WidthMismatch { width: u32, leaves: usize },
    LeafBoundExceeded { width: u32, bound: usize },
    NotOrderly(OrderError),
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::ModuleCount { expected, found } => write!(f, "module-count expected={expected} found={found}"),
            Finding::OutOfBounds { node } => write!(f, "out-of-bounds node={node}"),
            Finding::RasterTooLarge { cells } => write!(f, "raster-too-large cells={cells}"),
            Finding::Gap { x, y } => write!(f, "gap x={x} y={y}"),
            Finding::Overlap { x, y } => write!(f, "overlap x={x} y={y}"),
            Finding::EmptyModule { node } => write!(f, "empty-module node={node}"),
            Finding::Disconnected { node } => write!(f, "disconnected node={node}"),
            Finding::MissingAdjacency { u, v } => write!(f, "missing-adjacency u={u} v={v}"),
            Finding::SpuriousAdjacency { u, v } => write!(f, "spurious-adjacency u={u} v={v}"),
            Finding::ForbiddenShape { node, tag } => write!(f, "forbidden-shape node={node} tag={}", tag.name()),
            Finding::ThickBranch { node, height } => write!(f, "thick-branch node={node} height={height}"),
            Finding::HeightBoundViolated { height, bound } => {
                write!(f, "height-bound height={height} bound={bound}")
            }
            Finding::WidthMismatch { width, leaves } => write!(f, "width-mismatch width={width} leaves={leaves}"),
            Finding::LeafBoundExceeded { width, bound } => write!(f, "leaf-bound width={width} bound={bound}"),
            Finding::NotOrderly(e) => write!(f, "not-orderly {e}"),
        }
    }
}

/// Findings of one or more checks. Warnings never fail a report.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
    pub warnings: Vec<Finding>,
    /// Findings dropped after the per-report cap.
    pub suppressed: usize,
    pub height: u32,
    pub width: u32,
    pub leaf_count: Option<usize>,
    /// Counts per [`ShapeTag`], in `ShapeTag::ALL` order.
    pub shapes: [usize; 5],
}

const MAX_FINDINGS: usize = 256;

impl ValidationReport {
    fn for_plan(fp: &FloorPlan) -> Self {
        ValidationReport { height: fp.height(), width: fp.width(), ..Default::default() }
    }

    pub fn pass(&self) -> bool {
        self.findings.is_empty() && self.suppressed == 0
    }

    fn push(&mut self, f: Finding) {
        if self.findings.len() < MAX_FINDINGS {
            self.findings.push(f);
        } else {
            self.suppressed += 1;
        }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        for f in other.findings {
            self.push(f);
        }
        self.suppressed += other.suppressed;
        self.warnings.extend(other.warnings);
        if other.leaf_count.is_some() {
            self.leaf_count = other.leaf_count;
        }
        if other.shapes.iter().any(|&c| c > 0) {
            self.shapes = other.shapes;
        }
    }

    pub fn shape_count(&self, tag: ShapeTag) -> usize {
        self.shapes[tag.index()]
    }

    /// One-line human summary.
    pub fn summary(&self) -> Summary<'_> {
        Summary(self)
    }
}

pub struct Summary<'a>(&'a ValidationReport);

impl fmt::Display for Summary<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.0;
        write!(f, "{} {}x{}", if r.pass() { "PASS" } else { "FAIL" }, r.height, r.width)?;
        if let Some(l) = r.leaf_count {
            write!(f, " leaves={l}")?;
        }
        for t in ShapeTag::ALL {
            write!(f, " {}={}", t.name(), r.shapes[t.index()])?;
        }
        write!(f, " findings={} warnings={}", r.findings.len() + r.suppressed, r.warnings.len())
    }
}

/// Line-oriented machine-readable form.
impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "report v1")?;
        writeln!(f, "pass {}", self.pass())?;
        writeln!(f, "size {} {}", self.height, self.width)?;
        if let Some(l) = self.leaf_count {
            writeln!(f, "leaves {l}")?;
        }
        write!(f, "shapes")?;
        for t in ShapeTag::ALL {
            write!(f, " {}={}", t.name(), self.shapes[t.index()])?;
        }
        writeln!(f)?;
        for x in &self.findings {
            writeln!(f, "finding {x}")?;
        }
        if self.suppressed > 0 {
            writeln!(f, "suppressed {}", self.suppressed)?;
        }
        for x in &self.warnings {
            writeln!(f, "warning {x}")?;
        }
        writeln!(f, "end")
    }
}

/// Module id per unit cell, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub height: u32,
    pub width: u32,
    cells: Vec<u32>,
}

impl Raster {
    /// Module covering `(x, y)`; `None` for a gap or an overlap.
    pub fn owner(&self, x: u32, y: u32) -> Option<Node> {
        match self.cells[(y as usize) * self.width as usize + x as usize] {
            GAP | OVERLAP => None,
            c => Some(c as Node - 1),
        }
    }

    /// Unordered adjacent module pairs `(u, v)` with `u < v`, sorted.
    pub fn adjacency(&self) -> Vec<(Node, Node)> {
        let (w, h) = (self.width as usize, self.height as usize);
        let mut pairs = Vec::new();
        let mut add = |a: u32, b: u32| {
            if a != b && a != GAP && b != GAP && a != OVERLAP && b != OVERLAP {
                let (a, b) = (a.min(b) as u64 - 1, a.max(b) as u64 - 1);
                pairs.push((a << 32) | b);
            }
        };
        for y in 0..h {
            let row = &self.cells[y * w..(y + 1) * w];
            for x in 1..w {
                add(row[x - 1], row[x]);
            }
            if y + 1 < h {
                let below = &self.cells[(y + 1) * w..(y + 2) * w];
                for x in 0..w {
                    add(row[x], below[x]);
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        pairs.into_iter().map(|k| ((k >> 32) as Node, (k & 0xffff_ffff) as Node)).collect()
    }
}

/// Paints every module onto the grid, reporting cells painted twice and
/// rectangles outside the bounding box.
pub fn rasterize(fp: &FloorPlan) -> (Option<Raster>, ValidationReport) {
    let mut rep = ValidationReport::for_plan(fp);
    let (w, h) = (fp.width() as usize, fp.height() as usize);
    let cells_total = w as u64 * h as u64;
    if cells_total > MAX_RASTER_CELLS {
        rep.push(Finding::RasterTooLarge { cells: cells_total });
        return (None, rep);
    }
    let mut cells = vec![GAP; w * h];
    let mut overlaps = Vec::new();
    for (v, m) in fp.modules().enumerate() {
        let id = v as u32 + 1;
        for r in m {
            if r.x1 as usize > w || r.y1 as usize > h {
                rep.push(Finding::OutOfBounds { node: v });
                continue;
            }
            for y in r.y0..r.y1 {
                let row = &mut cells[y as usize * w..(y as usize + 1) * w];
                for x in r.x0..r.x1 {
                    let c = &mut row[x as usize];
                    if *c == GAP {
                        *c = id;
                    } else {
                        if *c != OVERLAP {
                            overlaps.push((y, x));
                        }
                        *c = OVERLAP;
                    }
                }
            }
        }
    }
    overlaps.sort_unstable();
    for (y, x) in overlaps {
        rep.push(Finding::Overlap { x, y });
    }
    (Some(Raster { height: h as u32, width: w as u32, cells }), rep)
}

/// Full coverage, no overlap, and every module one edge-connected piece.
pub fn check_partition(fp: &FloorPlan) -> ValidationReport {
    let (raster, mut rep) = rasterize(fp);
    let Some(raster) = raster else { return rep };
    partition_on(&raster, fp.module_count(), &mut rep);
    rep
}

fn partition_on(raster: &Raster, modules: usize, rep: &mut ValidationReport) {
    let (w, h) = (raster.width as usize, raster.height as usize);
    for (k, &c) in raster.cells.iter().enumerate() {
        if c == GAP {
            rep.push(Finding::Gap { x: (k % w) as u32, y: (k / w) as u32 });
        }
    }
    let mut pieces = vec![0u32; modules];
    let mut seen = vec![false; w * h];
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        let id = raster.cells[start];
        if seen[start] || id == GAP || id == OVERLAP || id as usize > modules {
            continue;
        }
        pieces[id as usize - 1] += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(k) = queue.pop_front() {
            let (x, y) = (k % w, k / w);
            let mut visit = |j: usize| {
                if !seen[j] && raster.cells[j] == id {
                    seen[j] = true;
                    queue.push_back(j);
                }
            };
            if x > 0 {
                visit(k - 1);
            }
            if x + 1 < w {
                visit(k + 1);
            }
            if y > 0 {
                visit(k - w);
            }
            if y + 1 < h {
                visit(k + w);
            }
        }
    }
    for (v, &p) in pieces.iter().enumerate() {
        match p {
            0 => rep.push(Finding::EmptyModule { node: v }),
            1 => {}
            _ => rep.push(Finding::Disconnected { node: v }),
        }
    }
}

/// Raster contact relation against the edge set of `g`, both ways.
pub fn check_adjacency(fp: &FloorPlan, g: &PlaneTriangulation) -> ValidationReport {
    let (raster, mut rep) = rasterize(fp);
    let Some(raster) = raster else { return rep };
    adjacency_on(&raster, fp, g, &mut rep);
    rep
}

fn adjacency_on(raster: &Raster, fp: &FloorPlan, g: &PlaneTriangulation, rep: &mut ValidationReport) {
    if fp.module_count() != g.node_count() {
        rep.push(Finding::ModuleCount { expected: g.node_count(), found: fp.module_count() });
        return;
    }
    let found = raster.adjacency();
    let mut want: Vec<(Node, Node)> = g.edges().collect();
    want.sort_unstable();
    let (mut i, mut j) = (0, 0);
    while i < want.len() || j < found.len() {
        match (want.get(i), found.get(j)) {
            (Some(a), Some(b)) if a == b => {
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                rep.push(Finding::MissingAdjacency { u: a.0, v: a.1 });
                i += 1;
            }
            (Some(_), Some(b)) | (None, Some(b)) => {
                rep.push(Finding::SpuriousAdjacency { u: b.0, v: b.1 });
                j += 1;
            }
            (Some(a), None) => {
                rep.push(Finding::MissingAdjacency { u: a.0, v: a.1 });
                i += 1;
            }
            (None, None) => break,
        }
    }
}

/// Shape class of the union of `rects`.
///
/// The union is cut into maximal horizontal runs per row, stacked runs with
/// equal extent are merged, and the resulting slabs are compared. Vertical
/// mirror images share a class; other rotations do not.
pub fn classify_module(rects: &[Rect]) -> ModuleShape {
    let slabs = normalize(rects);
    let reflex_corners = reflex_corners(&slabs);
    let other = ModuleShape { tag: ShapeTag::Other, reflex_corners, overhangs: None, branch_height: None };
    if slabs.len() == 1 {
        return ModuleShape { tag: ShapeTag::I, reflex_corners, overhangs: None, branch_height: None };
    }
    if slabs.len() != 2 {
        return other;
    }
    let (a, b) = (slabs[0], slabs[1]);
    if a.y1 != b.y0 || a.x1 <= b.x0 || b.x1 <= a.x0 {
        return other;
    }
    let o = [
        b.x0.saturating_sub(a.x0),
        a.x1.saturating_sub(b.x1),
        a.x0.saturating_sub(b.x0),
        b.x1.saturating_sub(a.x1),
    ];
    let on_a = (o[0] > 0) as u32 + (o[1] > 0) as u32;
    let on_b = (o[2] > 0) as u32 + (o[3] > 0) as u32;
    let (tag, branch) = match (on_a, on_b) {
        (1, 0) => (ShapeTag::L, Some(a.height())),
        (0, 1) => (ShapeTag::L, Some(b.height())),
        (2, 0) => (ShapeTag::T, Some(a.height())),
        (0, 2) => (ShapeTag::T, Some(b.height())),
        (1, 1) => (ShapeTag::Z, None),
        _ => return other,
    };
    ModuleShape { tag, reflex_corners, overhangs: Some(o), branch_height: branch }
}

/// Corner points of the union where three of the four surrounding cells are
/// inside; a point touched by two diagonal cells counts twice.
fn reflex_corners(rects: &[Rect]) -> u32 {
    let mut xs: Vec<u32> = rects.iter().flat_map(|r| [r.x0, r.x1]).collect();
    let mut ys: Vec<u32> = rects.iter().flat_map(|r| [r.y0, r.y1]).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();
    let inside = |x: i64, y: i64| {
        x >= 0 && y >= 0 && rects.iter().any(|r| r.contains(x as u32, y as u32))
    };
    let mut count = 0;
    for &x in &xs {
        for &y in &ys {
            let (x, y) = (x as i64, y as i64);
            let q = [inside(x - 1, y - 1), inside(x, y - 1), inside(x - 1, y), inside(x, y)];
            let k = q.iter().filter(|&&b| b).count();
            if k == 3 {
                count += 1;
            } else if k == 2 && q[0] == q[3] {
                count += 2;
            }
        }
    }
    count
}

/// Every module is an I, L or T whose branch is one row high.
pub fn check_shapes(fp: &FloorPlan) -> ValidationReport {
    let mut rep = ValidationReport::for_plan(fp);
    for (v, m) in fp.modules().enumerate() {
        let s = classify_module(m);
        rep.shapes[s.tag.index()] += 1;
        match s.tag {
            ShapeTag::I => {}
            ShapeTag::L | ShapeTag::T => {
                if let Some(h) = s.branch_height.filter(|&h| h != 1) {
                    rep.push(Finding::ThickBranch { node: v, height: h });
                }
            }
            tag => rep.push(Finding::ForbiddenShape { node: v, tag }),
        }
    }
    rep
}

/// Height at most `n - 1`, width equal to the leaf count; a width above
/// floor((2n+1)/3) is only a warning.
pub fn check_bounds(fp: &FloorPlan, n: usize, leaf_count: usize) -> ValidationReport {
    let mut rep = ValidationReport::for_plan(fp);
    rep.leaf_count = Some(leaf_count);
    if fp.height() as usize > n.saturating_sub(1) {
        rep.push(Finding::HeightBoundViolated { height: fp.height(), bound: n - 1 });
    }
    if fp.width() as usize != leaf_count {
        rep.push(Finding::WidthMismatch { width: fp.width(), leaves: leaf_count });
    }
    let bound = leaf_bound(n);
    if fp.width() as usize > bound {
        rep.warnings.push(Finding::LeafBoundExceeded { width: fp.width(), bound });
    }
    rep
}

/// Orderliness of `t` as a report.
pub fn check_orderly(g: &PlaneTriangulation, t: &SpanningTree) -> (Option<OrderlySpanningTree>, ValidationReport) {
    let mut rep = ValidationReport::default();
    match OrderlySpanningTree::annotate(g, t) {
        Ok(o) => {
            rep.leaf_count = Some(o.leaf_count());
            (Some(o), rep)
        }
        Err(e) => {
            rep.push(Finding::NotOrderly(e));
            (None, rep)
        }
    }
}

/// Partition, adjacency and shape checks, plus bounds when the leaf count of
/// the tree behind the plan is known.
pub fn validate(fp: &FloorPlan, g: &PlaneTriangulation, leaf_count: Option<usize>) -> ValidationReport {
    let (raster, mut rep) = rasterize(fp);
    if let Some(raster) = raster {
        partition_on(&raster, fp.module_count(), &mut rep);
        adjacency_on(&raster, fp, g, &mut rep);
    }
    rep.merge(check_shapes(fp));
    match leaf_count {
        Some(l) => rep.merge(check_bounds(fp, g.node_count(), l)),
        None => {
            let n = g.node_count();
            if fp.height() as usize > n - 1 {
                rep.push(Finding::HeightBoundViolated { height: fp.height(), bound: n - 1 });
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_and_t_from_the_bottom_row() {
        let l = classify_module(&[Rect::new(1, 0, 2, 3), Rect::new(0, 3, 2, 4)]);
        assert_eq!(l.tag, ShapeTag::L);
        assert_eq!(l.reflex_corners, 1);
        let t = classify_module(&[Rect::new(1, 0, 2, 3), Rect::new(0, 3, 3, 4)]);
        assert_eq!(t.tag, ShapeTag::T);
        assert_eq!(t.reflex_corners, 2);
        assert_eq!(t.branch_height, Some(1));
    }

    #[test]
    fn staircase_is_z() {
        let z = classify_module(&[Rect::new(0, 0, 2, 1), Rect::new(1, 1, 3, 2)]);
        assert_eq!(z.tag, ShapeTag::Z);
        assert_eq!(z.reflex_corners, 2);
    }
}
