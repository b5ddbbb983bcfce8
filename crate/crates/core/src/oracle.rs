//! Slow reference implementations for tests.
//!
//! Nothing here shares code with the layout pipeline beyond the graph and
//! tree types; neighbor orders are re-derived from plain rotation lists.

use alloc::vec;
use alloc::vec::Vec;

use crate::ost::OrderlySpanningTree;
use crate::plane_graph::{Node, PlaneTriangulation};

/// Result of the naive stretch: bottom per node and one row per unrelated
/// edge `(smaller label node, larger label node, bottom)`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stretch {
    pub bottom: Vec<u32>,
    pub edge_rows: Vec<(Node, Node, u32)>,
    pub x_left: Vec<u32>,
    pub x_right: Vec<u32>,
}

fn rotation_from(g: &PlaneTriangulation, v: Node, anchor: Node) -> Vec<Node> {
    g.neighbors_ccw_from(v, anchor).expect("anchor is a neighbor")
}

fn anchor_of(g: &PlaneTriangulation, t: &OrderlySpanningTree, v: Node) -> Node {
    match t.parent(v) {
        Some(p) => p,
        None => {
            let ext = g.exterior();
            let i = ext.iter().position(|&x| x == v).expect("root is exterior");
            ext[(i + 2) % 3]
        }
    }
}

/// Column intervals of the tree drawing, recomputed from parent links.
pub fn tree_columns(g: &PlaneTriangulation, t: &OrderlySpanningTree) -> (Vec<u32>, Vec<u32>) {
    let n = g.node_count();
    let children: Vec<Vec<Node>> = (0..n)
        .map(|v| {
            rotation_from(g, v, anchor_of(g, t, v))
                .into_iter()
                .filter(|&u| u != t.root() && t.parent(u) == Some(v))
                .collect()
        })
        .collect();
    fn leaves(children: &[Vec<Node>], v: Node, memo: &mut [u32]) -> u32 {
        let mut stack = vec![(v, false)];
        while let Some((u, done)) = stack.pop() {
            if done {
                memo[u] = if children[u].is_empty() { 1 } else { children[u].iter().map(|&c| memo[c]).sum() };
            } else {
                stack.push((u, true));
                for &c in &children[u] {
                    stack.push((c, false));
                }
            }
        }
        memo[v]
    }
    let mut w = vec![0u32; n];
    let total = leaves(&children, t.root(), &mut w);
    let mut x_left = vec![0u32; n];
    let mut x_right = vec![0u32; n];
    x_right[t.root()] = total;
    let mut stack = vec![t.root()];
    while let Some(v) = stack.pop() {
        let mut cursor = x_left[v];
        for &c in &children[v] {
            x_left[c] = cursor;
            cursor += w[c];
            x_right[c] = cursor;
            stack.push(c);
        }
    }
    (x_left, x_right)
}

/// Pushes rows and node bottoms down until no constraint moves them: every
/// unrelated edge gets a row just below the rows used above it on both
/// sides, and every node reaches down to its lowest such row. The result is
/// then checked on a raster to be a 2-visibility drawing.
pub fn naive_stretch(g: &PlaneTriangulation, t: &OrderlySpanningTree) -> Result<Stretch, &'static str> {
    let n = g.node_count();
    let lab = |v: Node| t.label(v);
    let related = |a: Node, b: Node| t.is_ancestor(lab(a), lab(b)) || t.is_ancestor(lab(b), lab(a));
    let rot: Vec<Vec<Node>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let next_ccw = |v: Node, u: Node| {
        let r = &rot[v];
        let k = r.iter().position(|&x| x == u).unwrap();
        r[(k + 1) % r.len()]
    };
    let prev_ccw = |v: Node, u: Node| {
        let r = &rot[v];
        let k = r.iter().position(|&x| x == u).unwrap();
        r[(k + r.len() - 1) % r.len()]
    };
    let mut edges: Vec<(Node, Node)> = Vec::new();
    for (u, v) in g.edges() {
        if t.parent(u) == Some(v) || t.parent(v) == Some(u) || related(u, v) {
            continue;
        }
        edges.push(if lab(u) < lab(v) { (u, v) } else { (v, u) });
    }
    edges.sort_unstable();
    let index = |a: Node, b: Node| edges.binary_search(&(a, b)).ok();

    let mut bottom = vec![0u32; n];
    let mut rows = vec![0u32; edges.len()];
    let top_of = |bottom: &[u32], v: Node| t.parent(v).map_or(0, |p| bottom[p]);
    let mut rounds = 0usize;
    loop {
        rounds += 1;
        if rounds > 4 * n + 8 {
            return Err("stretch does not settle");
        }
        let mut changed = false;
        for v in 0..n {
            let want = top_of(&bottom, v) + 1;
            if bottom[v] < want {
                bottom[v] = want;
                changed = true;
            }
        }
        for (e, &(i, j)) in edges.iter().enumerate() {
            let jn = next_ccw(i, j);
            let above_i = if Some(jn) == t.parent(i) {
                bottom[jn]
            } else {
                rows[index(i, jn).ok_or("row above on the smaller side is missing")?]
            };
            let ip = prev_ccw(j, i);
            let above_j = if Some(ip) == t.parent(j) {
                bottom[ip]
            } else {
                rows[index(ip, j).ok_or("row above on the larger side is missing")?]
            };
            let want = 1 + above_i.max(above_j);
            if rows[e] < want {
                rows[e] = want;
                changed = true;
            }
            for v in [i, j] {
                if bottom[v] < rows[e] {
                    bottom[v] = rows[e];
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let (x_left, x_right) = tree_columns(g, t);
    let height = bottom.iter().copied().max().unwrap_or(0) as usize;
    let width = x_right[t.root()] as usize;
    let mut grid = vec![usize::MAX; height * width];
    for v in 0..n {
        for y in top_of(&bottom, v)..bottom[v] {
            for x in x_left[v]..x_right[v] {
                let c = &mut grid[y as usize * width + x as usize];
                if *c != usize::MAX {
                    return Err("node rectangles overlap");
                }
                *c = v;
            }
        }
    }
    // Horizontally consecutive rectangles must be adjacent in the graph.
    for y in 0..height {
        let mut last = usize::MAX;
        for x in 0..width {
            let c = grid[y * width + x];
            if c != usize::MAX && c != last {
                if last != usize::MAX && !g.is_adjacent(last, c) {
                    return Err("non-adjacent nodes see each other");
                }
                last = c;
            }
        }
    }
    for (e, &(i, j)) in edges.iter().enumerate() {
        let y = rows[e] as usize - 1;
        let (a, b) = if x_right[i] <= x_left[j] { (i, j) } else { (j, i) };
        let ok = (x_right[a]..x_left[b]).all(|x| grid[y * width + x as usize] == usize::MAX)
            && (x_left[a]..x_right[a]).any(|x| grid[y * width + x as usize] == a)
            && (x_left[b]..x_right[b]).any(|x| grid[y * width + x as usize] == b);
        if !ok {
            return Err("an unrelated edge is not realized");
        }
    }
    let edge_rows = edges.iter().zip(&rows).map(|(&(a, b), &y)| (a, b, y)).collect();
    Ok(Stretch { bottom, edge_rows, x_left, x_right })
}

/// Cell grid of node ids, row-major; `usize::MAX` for empty cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub height: usize,
    pub width: usize,
    pub cells: Vec<usize>,
}

impl Grid {
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.cells[y * self.width + x]
    }

    fn set(&mut self, x: usize, y: usize, v: usize) {
        self.cells[y * self.width + x] = v;
    }
}

const EMPTY: usize = usize::MAX;

/// Cell-by-cell replay of branch growth and thinning on the stretched
/// drawing.
///
/// Growth visits node n, then 3..n-1. A node first widens to the reach of
/// its parent's bottom row when it is a first or last child, overwriting
/// whatever is there; then on every row of its body it fills empty cells
/// outward on each side if they lead straight to its contact on that side.
/// Thinning repeatedly takes a node's lowest branch run taller than one row
/// and hands all but its bottom row to the single node above it.
pub fn literal_floorplan(g: &PlaneTriangulation, t: &OrderlySpanningTree, bottom: &[u32]) -> Result<Grid, &'static str> {
    let n = g.node_count();
    let (x_left, x_right) = tree_columns(g, t);
    let height = bottom.iter().copied().max().unwrap_or(0) as usize;
    let width = x_right[t.root()] as usize;
    let top: Vec<u32> = (0..n).map(|v| t.parent(v).map_or(0, |p| bottom[p])).collect();
    let mut grid = Grid { height, width, cells: vec![EMPTY; height * width] };
    for v in 0..n {
        for y in top[v]..bottom[v] {
            for x in x_left[v]..x_right[v] {
                grid.set(x as usize, y as usize, v);
            }
        }
    }
    let mut lft: Vec<usize> = x_left.iter().map(|&x| x as usize).collect();
    let mut rgt: Vec<usize> = x_right.iter().map(|&x| x as usize).collect();
    let node = |i: usize| t.node(i);
    let contact = |i: usize, left: bool| {
        let c = if left { t.left_contact(i) } else { t.right_contact(i) };
        (c != 0).then(|| t.node(c))
    };
    let mut seq = vec![n];
    seq.extend(3..n);
    for i in seq {
        let v = node(i);
        let pi = t.parent_label(i);
        if pi != 0 && pi != 1 {
            let p = node(pi);
            let y = bottom[p] as usize - 1;
            let (mut a, mut b) = (lft[p], rgt[p]);
            while a > 0 && grid.get(a - 1, y) == p {
                a -= 1;
            }
            while b < width && grid.get(b, y) == p {
                b += 1;
            }
            if x_left[v] == x_left[p] && a < lft[v] {
                for yy in top[v]..bottom[v] {
                    for x in a..lft[v] {
                        grid.set(x, yy as usize, v);
                    }
                }
                lft[v] = a;
            }
            if x_right[v] == x_right[p] && b > rgt[v] {
                for yy in top[v]..bottom[v] {
                    for x in rgt[v]..b {
                        grid.set(x, yy as usize, v);
                    }
                }
                rgt[v] = b;
            }
        }
        let sides = [(true, contact(i, true)), (false, if i == n { None } else { contact(i, false) })];
        for (left, target) in sides {
            let Some(target) = target else { continue };
            for y in top[v] as usize..bottom[v] as usize {
                let mut cells = Vec::new();
                let mut x = if left { lft[v] as isize - 1 } else { rgt[v] as isize };
                while x >= 0 && (x as usize) < width && grid.get(x as usize, y) == EMPTY {
                    cells.push(x as usize);
                    x += if left { -1 } else { 1 };
                }
                if !cells.is_empty() && x >= 0 && (x as usize) < width && grid.get(x as usize, y) == target {
                    for c in cells {
                        grid.set(c, y, v);
                    }
                }
            }
        }
    }

    let mut work: Vec<usize> = (3..=n).map(node).collect();
    let mut bot: Vec<u32> = bottom.to_vec();
    let mut steps = 0usize;
    while let Some(v) = work.pop() {
        steps += 1;
        if steps > 8 * n + 16 {
            return Err("thinning does not settle");
        }
        for left in [true, false] {
            let rows: Vec<usize> = (top[v] as usize..bot[v] as usize)
                .filter(|&y| {
                    if left {
                        lft[v] > 0 && grid.get(lft[v] - 1, y) == v
                    } else {
                        rgt[v] < width && grid.get(rgt[v], y) == v
                    }
                })
                .collect();
            if rows.len() <= 1 {
                continue;
            }
            let b = *rows.last().unwrap();
            let mut cols = Vec::new();
            let mut x = if left { lft[v] as isize - 1 } else { rgt[v] as isize };
            while x >= 0 && (x as usize) < width && grid.get(x as usize, b) == v {
                cols.push(x as usize);
                x += if left { -1 } else { 1 };
            }
            let mut top_row = b;
            while top_row > 0 && cols.iter().all(|&c| grid.get(c, top_row - 1) == v) {
                top_row -= 1;
            }
            if top_row == b {
                continue;
            }
            if top_row == 0 {
                return Err("branch reaches the top edge");
            }
            let above = grid.get(cols[0], top_row - 1);
            if cols.iter().any(|&c| grid.get(c, top_row - 1) != above) {
                return Err("thick branch under several nodes");
            }
            for y in top_row..b {
                for &c in &cols {
                    grid.set(c, y, above);
                }
            }
            bot[above] = bot[above].max(b as u32);
            work.push(above);
        }
    }
    Ok(grid)
}

/// Twelve-node sample: the graph, its 0-based tree parents (root 0), and
/// the expected plan rows as 1-based node numbers.
pub fn twelve_node_sample() -> (PlaneTriangulation, Vec<Option<Node>>, [[u8; 8]; 9]) {
    const ROT: [&[Node]; 12] = [
        &[2, 3, 6, 7, 12],
        &[1, 12, 10, 5, 4, 3],
        &[1, 2, 4, 5, 9, 6],
        &[3, 2, 5],
        &[3, 4, 2, 10, 9],
        &[1, 3, 9, 8, 7],
        &[1, 6, 8, 12],
        &[7, 6, 9, 10, 11, 12],
        &[8, 6, 3, 5, 10],
        &[8, 9, 5, 2, 12, 11],
        &[8, 10, 12],
        &[1, 7, 8, 11, 10, 2],
    ];
    let rot: Vec<Vec<Node>> = ROT.iter().map(|r| r.iter().map(|&u| u - 1).collect()).collect();
    let g = PlaneTriangulation::from_rotation(12, &rot, [0, 11, 1]).expect("sample is a triangulation");
    let one_based: [usize; 12] = [0, 1, 1, 3, 3, 1, 1, 7, 8, 8, 8, 1];
    let parents = one_based.iter().map(|&p| p.checked_sub(1)).collect();
    let rows = [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [2, 3, 3, 6, 7, 7, 7, 12],
        [2, 3, 3, 6, 8, 8, 8, 12],
        [2, 3, 3, 6, 9, 10, 11, 12],
        [2, 3, 3, 3, 9, 10, 11, 12],
        [2, 4, 5, 5, 9, 10, 11, 12],
        [2, 5, 5, 5, 5, 10, 11, 12],
        [2, 10, 10, 10, 10, 10, 10, 12],
        [2, 12, 12, 12, 12, 12, 12, 12],
    ];
    (g, parents, rows)
}
