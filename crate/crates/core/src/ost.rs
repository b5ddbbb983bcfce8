//! Orderly spanning trees.
//!
//! A spanning tree rooted on the exterior face is orderly when, walking
//! counterclockwise around any node from its parent, the neighbors come in
//! four runs: the parent, unrelated neighbors with smaller preorder label,
//! the children, and unrelated neighbors with larger label.
//!
//! Trees are built from a canonical ordering through the three trees of a
//! Schnyder realizer, and every tree is checked before use.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::plane_graph::{HalfEdge, Node, PlaneTriangulation, NIL};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderError {
    /// Parent links do not form a spanning tree; names a node that is out of
    /// place.
    NotSpanning { node: Node },
    RootNotExterior { root: Node },
    /// The neighbors of `node` are not split into the four ordered runs, or a
    /// non-tree edge joins `node` to one of its ancestors.
    BlockOrderViolation { node: Node },
    /// A node lacks the smaller or larger unrelated neighbor a triangulation
    /// guarantees it.
    MissingContact { node: Node },
    /// The other two exterior nodes do not receive labels 2 and n.
    ExteriorOrder { node: Node },
    EdgePropertyViolation { u: Node, v: Node },
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::NotSpanning { node } => write!(f, "parent links are not a spanning tree at node {node}"),
            OrderError::RootNotExterior { root } => write!(f, "root {root} is not an exterior node"),
            OrderError::BlockOrderViolation { node } => write!(f, "node {node} is not orderly"),
            OrderError::MissingContact { node } => {
                write!(f, "node {node} lacks a smaller or larger unrelated neighbor")
            }
            OrderError::ExteriorOrder { node } => write!(f, "exterior node {node} has the wrong label"),
            OrderError::EdgePropertyViolation { u, v } => {
                write!(f, "non-tree edge ({u}, {v}) is not a contact edge of exactly one endpoint")
            }
        }
    }
}

impl core::error::Error for OrderError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OstError {
    /// `u2 -> u1` is not a half-edge of the exterior face in traced order.
    BadAnchors { anchors: [Node; 2] },
    NotCanonical { node: Node },
    /// A construction invariant failed; this is a bug, not bad input.
    Internal(&'static str),
    NotOrderly(OrderError),
}

impl fmt::Display for OstError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OstError::BadAnchors { anchors } => {
                write!(f, "anchors {anchors:?} are not a clockwise exterior pair")
            }
            OstError::NotCanonical { node } => write!(f, "order is not canonical at node {node}"),
            OstError::Internal(msg) => write!(f, "internal error: {msg}"),
            OstError::NotOrderly(e) => write!(f, "tree is not orderly: {e}"),
        }
    }
}

impl core::error::Error for OstError {}

impl From<OrderError> for OstError {
    fn from(e: OrderError) -> Self {
        OstError::NotOrderly(e)
    }
}

/// Canonical ordering `u1, u2, ..., un` by repeatedly peeling a boundary node
/// without chords, starting from the apex.
///
/// `anchors = [u1, u2]` must be exterior nodes with `u2 -> u1` on the traced
/// exterior cycle. The third exterior node comes last.
pub fn canonical_order(g: &PlaneTriangulation, anchors: [Node; 2]) -> Result<Vec<Node>, OstError> {
    let n = g.node_count();
    let ext = g.exterior();
    let [u1, u2] = anchors;
    let k = ext.iter().position(|&x| x == u2).ok_or(OstError::BadAnchors { anchors })?;
    if ext[(k + 1) % 3] != u1 {
        return Err(OstError::BadAnchors { anchors });
    }
    let un = ext[(k + 2) % 3];

    let mut removed = vec![false; n];
    let mut on_boundary = vec![false; n];
    let mut prv = vec![NIL; n];
    let mut nxt = vec![NIL; n];
    let mut chords = vec![0u32; n];
    for v in [u1, un, u2] {
        on_boundary[v] = true;
    }
    nxt[u1] = un as u32;
    prv[un] = u1 as u32;
    nxt[un] = u2 as u32;
    prv[u2] = un as u32;
    let mut boundary_len = 3usize;
    let mut stack = vec![un];
    let mut peeled = Vec::with_capacity(n);
    let mut mids = Vec::new();

    while boundary_len > 2 {
        let v = stack.pop().ok_or(OstError::Internal("no removable boundary node"))?;
        if removed[v] || !on_boundary[v] || chords[v] != 0 || v == u1 || v == u2 {
            continue;
        }
        let a = prv[v] as Node;
        let b = nxt[v] as Node;
        let start = g.find_half_edge(v, a).ok_or(OstError::Internal("boundary neighbor missing"))?;
        mids.clear();
        let mut h = g.next_around(start);
        while g.head(h) != b {
            let w = g.head(h);
            if removed[w] {
                return Err(OstError::Internal("lower neighbor already removed"));
            }
            mids.push(w);
            h = g.next_around(h);
        }
        removed[v] = true;
        on_boundary[v] = false;
        peeled.push(v);
        if mids.is_empty() {
            nxt[a] = b as u32;
            prv[b] = a as u32;
            boundary_len -= 1;
            if boundary_len > 2 {
                for x in [a, b] {
                    chords[x] -= 1;
                    if chords[x] == 0 {
                        stack.push(x);
                    }
                }
            }
        } else {
            let mut last = a;
            for &w in &mids {
                nxt[last] = w as u32;
                prv[w] = last as u32;
                last = w;
            }
            nxt[last] = b as u32;
            prv[b] = last as u32;
            boundary_len += mids.len() - 1;
            for &w in &mids {
                for x in g.neighbors(w) {
                    if !on_boundary[x] || x as u32 == prv[w] || x as u32 == nxt[w] {
                        continue;
                    }
                    chords[x] += 1;
                    chords[w] += 1;
                }
                on_boundary[w] = true;
            }
            for &w in &mids {
                if chords[w] == 0 {
                    stack.push(w);
                }
            }
        }
    }
    if peeled.len() != n - 2 {
        return Err(OstError::Internal("peeling stopped early"));
    }
    peeled.push(u2);
    peeled.push(u1);
    peeled.reverse();
    Ok(peeled)
}

/// Three trees partitioning the interior edges.
///
/// Tree 0 is rooted at `u1`, tree 1 at `u2`, tree 2 at the last node of the
/// canonical order. Around every interior node the outgoing edges of colors
/// 0, 1, 2 appear counterclockwise, and the incoming edges of color `c + 2`
/// follow the outgoing edge of color `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realizer {
    roots: [Node; 3],
    parents: [Vec<u32>; 3],
}

impl Realizer {
    pub fn roots(&self) -> [Node; 3] {
        self.roots
    }

    /// Parent of `v` in tree `color`; `None` for exterior nodes.
    pub fn parent(&self, color: usize, v: Node) -> Option<Node> {
        let p = self.parents[color][v];
        (p != NIL).then_some(p as Node)
    }

    /// Color of the edge `u -> v` when it is outgoing at `u`.
    pub fn out_color(&self, u: Node, v: Node) -> Option<usize> {
        (0..3).find(|&c| self.parents[c][u] == v as u32)
    }

    /// Checks the partition and the local cyclic pattern.
    pub fn verify(&self, g: &PlaneTriangulation) -> Result<(), OstError> {
        let n = g.node_count();
        let is_root = |v: Node| self.roots.contains(&v);
        for v in 0..n {
            for u in g.neighbors(v) {
                let out = (0..3).filter(|&c| self.parents[c][v] == u as u32).count();
                let inc = (0..3).filter(|&c| self.parents[c][u] == v as u32).count();
                let expected = if is_root(u) && is_root(v) { 0 } else { 1 };
                if out + inc != expected {
                    return Err(OstError::Internal("edge colored zero or several times"));
                }
            }
            if is_root(v) {
                let c = self.roots.iter().position(|&r| r == v).unwrap_or(0);
                for u in g.neighbors(v) {
                    if !is_root(u) && self.parents[c][u] != v as u32 {
                        return Err(OstError::Internal("root edge of the wrong color"));
                    }
                }
                continue;
            }
            if (0..3).any(|c| self.parents[c][v] == NIL) {
                return Err(OstError::Internal("interior node lacks an outgoing edge"));
            }
            let start = g
                .find_half_edge(v, self.parents[0][v] as Node)
                .ok_or(OstError::Internal("parent is not a neighbor"))?;
            // Expected phases: out0, in2*, out1, in0*, out2, in1*.
            let mut phase = 0usize;
            let mut h = g.next_around(start);
            while h != start {
                let u = g.head(h);
                let step = if self.parents[1][v] == u as u32 {
                    1
                } else if self.parents[2][v] == u as u32 {
                    2
                } else {
                    let c = (0..3).find(|&c| self.parents[c][u] == v as u32).unwrap_or(3);
                    if c != (phase + 2) % 3 {
                        return Err(OstError::Internal("color pattern violated"));
                    }
                    phase
                };
                if step != phase && step != phase + 1 {
                    return Err(OstError::Internal("color pattern violated"));
                }
                phase = step;
                h = g.next_around(h);
            }
            if phase != 2 {
                return Err(OstError::Internal("color pattern violated"));
            }
        }
        Ok(())
    }
}

/// Derives the realizer of a canonical ordering: every node points to its
/// leftmost and rightmost earlier neighbor, and the earlier neighbors strictly
/// between those two point to it.
pub fn realizer_from_canonical(g: &PlaneTriangulation, order: &[Node]) -> Result<Realizer, OstError> {
    let n = g.node_count();
    if order.len() != n {
        return Err(OstError::NotCanonical { node: 0 });
    }
    let mut pos = vec![NIL; n];
    for (k, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != NIL {
            return Err(OstError::NotCanonical { node: v.min(n - 1) });
        }
        pos[v] = k as u32;
    }
    let u1 = order[0];
    let u2 = order[1];
    let un = order[n - 1];
    let mut parents = [vec![NIL; n], vec![NIL; n], vec![NIL; n]];
    for (k, &v) in order.iter().enumerate().skip(2) {
        let earlier = |h: HalfEdge| pos[g.head(h)] < k as u32;
        let first = g.first_half_edge(v);
        let d = g.degree(v);
        let mut start = None;
        let mut runs = 0;
        for i in 0..d {
            let h = first + i;
            let p = first + (i + d - 1) % d;
            if earlier(h) && !earlier(p) {
                runs += 1;
                start = Some(h);
            }
        }
        let start = match (runs, start) {
            (1, Some(h)) => h,
            (0, _) if k == n - 1 => g.find_half_edge(v, u1).ok_or(OstError::NotCanonical { node: v })?,
            _ => return Err(OstError::NotCanonical { node: v }),
        };
        let mut run = Vec::new();
        let mut h = start;
        while earlier(h) && run.len() < d {
            run.push(g.head(h));
            h = g.next_around(h);
        }
        if run.len() < 2 {
            return Err(OstError::NotCanonical { node: v });
        }
        let (a, b) = (run[0], run[run.len() - 1]);
        if k != n - 1 {
            parents[0][v] = a as u32;
            parents[1][v] = b as u32;
        } else if a != u1 || b != u2 {
            return Err(OstError::NotCanonical { node: v });
        }
        for &w in &run[1..run.len() - 1] {
            parents[2][w] = v as u32;
        }
    }
    let rz = Realizer { roots: [u1, u2, un], parents };
    rz.verify(g)?;
    Ok(rz)
}

/// A rooted spanning tree given by parent links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: Node,
    /// `parent[root]` is `None`.
    pub parent: Vec<Option<Node>>,
}

/// The two exterior nodes next to `root`: the one that must receive label 2
/// and the one that must receive label n.
pub fn exterior_partners(g: &PlaneTriangulation, root: Node) -> Option<(Node, Node)> {
    let ext = g.exterior();
    let i = ext.iter().position(|&x| x == root)?;
    Some((ext[(i + 2) % 3], ext[(i + 1) % 3]))
}

/// Tree `color` of the realizer plus the two exterior edges at its root.
pub fn ost_from_realizer(
    g: &PlaneTriangulation,
    rz: &Realizer,
    color: usize,
) -> Result<OrderlySpanningTree, OstError> {
    let root = rz.roots[color % 3];
    let (second, last) = exterior_partners(g, root).ok_or(OstError::Internal("root not exterior"))?;
    let mut parent: Vec<Option<Node>> = (0..g.node_count()).map(|v| rz.parent(color % 3, v)).collect();
    parent[root] = None;
    parent[second] = Some(root);
    parent[last] = Some(root);
    Ok(OrderlySpanningTree::annotate(g, &SpanningTree { root, parent })?)
}

/// All three realizer trees, in root order `u1`, `u2`, apex.
pub fn candidate_osts(g: &PlaneTriangulation) -> Result<[OrderlySpanningTree; 3], OstError> {
    let ext = g.exterior();
    let order = canonical_order(g, [ext[2], ext[1]])?;
    let rz = realizer_from_canonical(g, &order)?;
    Ok([ost_from_realizer(g, &rz, 0)?, ost_from_realizer(g, &rz, 1)?, ost_from_realizer(g, &rz, 2)?])
}

/// The realizer tree with the fewest leaves; ties go to the smallest root.
pub fn min_leaf_ost(g: &PlaneTriangulation) -> Result<OrderlySpanningTree, OstError> {
    let cands = candidate_osts(g)?;
    let mut best: Option<OrderlySpanningTree> = None;
    for t in cands {
        let better = match &best {
            None => true,
            Some(b) => (t.leaf_count(), t.root()) < (b.leaf_count(), b.root()),
        };
        if better {
            best = Some(t);
        }
    }
    best.ok_or(OstError::Internal("no candidate tree"))
}

/// Sizes of the four neighbor runs around a node, in counterclockwise order
/// from its anchor: parent, smaller unrelated, children, larger unrelated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Blocks {
    pub parent: u32,
    pub smaller: u32,
    pub children: u32,
    pub larger: u32,
}

/// An orderly spanning tree with its counterclockwise preorder labels.
///
/// Labels run from 1 to n. Per-label tables use index 0 as unused, and label
/// 0 stands for "none".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderlySpanningTree {
    root: Node,
    parent: Vec<u32>,
    label: Vec<u32>,
    order: Vec<u32>,
    size: Vec<u32>,
    leaves: Vec<u32>,
    left: Vec<u32>,
    right: Vec<u32>,
    anchor: Vec<u32>,
    blocks: Vec<Blocks>,
}

impl OrderlySpanningTree {
    /// Computes the preorder and the per-node runs, verifying that the tree
    /// is orderly.
    pub fn annotate(g: &PlaneTriangulation, t: &SpanningTree) -> Result<Self, OrderError> {
        let n = g.node_count();
        let root = t.root;
        if t.parent.len() != n || root >= n {
            return Err(OrderError::NotSpanning { node: root.min(n - 1) });
        }
        let (second, last) = exterior_partners(g, root).ok_or(OrderError::RootNotExterior { root })?;
        let mut parent = vec![NIL; n];
        for (v, p) in t.parent.iter().enumerate() {
            match (v == root, *p) {
                (true, None) => {}
                (false, Some(p)) if p < n && p != v => parent[v] = p as u32,
                _ => return Err(OrderError::NotSpanning { node: v }),
            }
        }
        // Anchor: the parent, or the exterior partner for the root.
        let mut anchor_of = vec![0u32; n];
        for v in 0..n {
            let a = if v == root { second } else { parent[v] as Node };
            let h = g.find_half_edge(v, a).ok_or(OrderError::NotSpanning { node: v })?;
            anchor_of[v] = h as u32;
        }
        let is_child = |v: Node, u: Node| u != root && parent[u] == v as u32;

        // Preorder with children in counterclockwise order from the anchor.
        let mut label = vec![0u32; n];
        let mut order = vec![NIL; n + 1];
        let mut next = 1u32;
        label[root] = next;
        order[next as usize] = root as u32;
        next += 1;
        let mut stack: Vec<(Node, HalfEdge, usize)> = vec![(root, anchor_of[root] as HalfEdge, g.degree(root))];
        while let Some(top) = stack.last_mut() {
            let (v, h, left) = *top;
            if left == 0 {
                stack.pop();
                continue;
            }
            top.1 = g.next_around(h);
            top.2 = left - 1;
            let u = g.head(h);
            if is_child(v, u) {
                if label[u] != 0 {
                    return Err(OrderError::NotSpanning { node: u });
                }
                label[u] = next;
                order[next as usize] = u as u32;
                next += 1;
                stack.push((u, anchor_of[u] as HalfEdge, g.degree(u)));
            }
        }
        if (next as usize) != n + 1 {
            let missing = (0..n).find(|&v| label[v] == 0).unwrap_or(0);
            return Err(OrderError::NotSpanning { node: missing });
        }
        if label[second] != 2 {
            return Err(OrderError::ExteriorOrder { node: second });
        }

        let mut size = vec![1u32; n + 1];
        let mut leaves = vec![0u32; n + 1];
        size[0] = 0;
        for i in (1..=n).rev() {
            let v = order[i] as Node;
            if leaves[i] == 0 {
                leaves[i] = 1;
            }
            if v != root {
                let p = label[parent[v] as usize] as usize;
                size[p] += size[i];
                leaves[p] += leaves[i];
            }
        }
        let mut anchor = vec![NIL; n + 1];
        let mut blocks = vec![Blocks::default(); n + 1];
        let mut left = vec![0u32; n + 1];
        let mut right = vec![0u32; n + 1];
        let related = |a: u32, b: u32| {
            let (a, b) = (a as usize, b as usize);
            (a <= b && b < a + size[a] as usize) || (b <= a && a < b + size[b] as usize)
        };
        for v in 0..n {
            let i = label[v];
            let start = anchor_of[v] as HalfEdge;
            anchor[i as usize] = start as u32;
            let mut counts = [0u32; 4];
            let mut class = 0usize;
            let mut h = start;
            for _ in 0..g.degree(v) {
                let u = g.head(h);
                let j = label[u];
                let c = if v != root && u as u32 == parent[v] {
                    0
                } else if is_child(v, u) {
                    2
                } else if related(i, j) {
                    return Err(OrderError::BlockOrderViolation { node: v });
                } else if j < i {
                    1
                } else {
                    3
                };
                if c < class {
                    return Err(OrderError::BlockOrderViolation { node: v });
                }
                class = c;
                counts[c] += 1;
                if c == 1 {
                    left[i as usize] = j;
                }
                if c == 3 && right[i as usize] == 0 {
                    right[i as usize] = j;
                }
                h = g.next_around(h);
            }
            blocks[i as usize] = Blocks { parent: counts[0], smaller: counts[1], children: counts[2], larger: counts[3] };
            let i = i as usize;
            if (i >= 3 && left[i] == 0) || (i >= 2 && i < n && right[i] == 0) {
                return Err(OrderError::MissingContact { node: v });
            }
        }
        if label[last] as usize != n {
            return Err(OrderError::ExteriorOrder { node: last });
        }
        for (u, v) in g.edges() {
            if parent[u] == v as u32 || parent[v] == u as u32 {
                continue;
            }
            let (i, j) = if label[u] < label[v] { (label[u], label[v]) } else { (label[v], label[u]) };
            let from_left = left[j as usize] == i;
            let from_right = right[i as usize] == j;
            let ok = if i == 2 && j as usize == n { from_left && from_right } else { from_left != from_right };
            if !ok {
                return Err(OrderError::EdgePropertyViolation { u, v });
            }
        }
        Ok(OrderlySpanningTree { root, parent, label, order, size, leaves, left, right, anchor, blocks })
    }

    pub fn node_count(&self) -> usize {
        self.label.len()
    }

    pub fn root(&self) -> Node {
        self.root
    }

    pub fn parent(&self, v: Node) -> Option<Node> {
        let p = self.parent[v];
        (p != NIL).then_some(p as Node)
    }

    pub fn parents(&self) -> Vec<Option<Node>> {
        (0..self.node_count()).map(|v| self.parent(v)).collect()
    }

    /// Number of leaves of the whole tree.
    pub fn leaf_count(&self) -> usize {
        self.leaves[1] as usize
    }

    /// Preorder label (1-based) of node `v`.
    pub fn label(&self, v: Node) -> usize {
        self.label[v] as usize
    }

    /// Node carrying label `i`.
    pub fn node(&self, i: usize) -> Node {
        self.order[i] as Node
    }

    /// Label of the parent of label `i`, or 0 for the root.
    pub fn parent_label(&self, i: usize) -> usize {
        let p = self.parent[self.order[i] as usize];
        if p == NIL {
            0
        } else {
            self.label[p as usize] as usize
        }
    }

    /// Leaves in the subtree of label `i`.
    pub fn leaves_below(&self, i: usize) -> usize {
        self.leaves[i] as usize
    }

    pub fn subtree_size(&self, i: usize) -> usize {
        self.size[i] as usize
    }

    /// Label of the last smaller unrelated neighbor of label `i`, or 0.
    pub fn left_contact(&self, i: usize) -> usize {
        self.left[i] as usize
    }

    /// Label of the first larger unrelated neighbor of label `i`, or 0.
    pub fn right_contact(&self, i: usize) -> usize {
        self.right[i] as usize
    }

    pub fn blocks(&self, i: usize) -> Blocks {
        self.blocks[i]
    }

    /// Half-edge from label `i` to the first neighbor of its rotation in
    /// block order: its parent, or its first child for the root.
    pub fn anchor(&self, i: usize) -> HalfEdge {
        self.anchor[i] as HalfEdge
    }

    /// True when label `a` is an ancestor of label `b` (or equal).
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        a <= b && b < a + self.size[a] as usize
    }

    /// Labels of the children of label `i`, counterclockwise.
    pub fn children<'a>(&'a self, g: &'a PlaneTriangulation, i: usize) -> impl Iterator<Item = usize> + 'a {
        let b = self.blocks[i];
        let first = self.skip(g, self.anchor(i), (b.parent + b.smaller) as usize);
        let mut h = first;
        (0..b.children).map(move |_| {
            let u = g.head(h);
            h = g.next_around(h);
            self.label[u] as usize
        })
    }

    /// Half-edge from label `i` to its left contact.
    pub fn left_contact_edge(&self, g: &PlaneTriangulation, i: usize) -> Option<HalfEdge> {
        let b = self.blocks[i];
        (b.smaller > 0).then(|| self.skip(g, self.anchor(i), (b.parent + b.smaller - 1) as usize))
    }

    /// Half-edge from label `i` to its right contact.
    pub fn right_contact_edge(&self, g: &PlaneTriangulation, i: usize) -> Option<HalfEdge> {
        let b = self.blocks[i];
        (b.larger > 0).then(|| self.skip(g, self.anchor(i), (b.parent + b.smaller + b.children) as usize))
    }

    fn skip(&self, g: &PlaneTriangulation, h: HalfEdge, k: usize) -> HalfEdge {
        let v = g.tail(h);
        let first = g.first_half_edge(v);
        first + (h - first + k) % g.degree(v)
    }
}
