//! Plane triangulations stored as rotation systems.
//!
//! Every undirected edge is split into two half-edges. The half-edges leaving
//! a node are stored contiguously in counterclockwise order, so moving around
//! a node or along a face is constant time.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Node index, 0-based.
pub type Node = usize;

/// Index of a directed half-edge.
pub type HalfEdge = usize;

pub(crate) const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    TooFewNodes { n: usize },
    TooManyNodes { n: usize },
    RotationCount { expected: usize, found: usize },
    NeighborOutOfRange { node: Node, neighbor: Node },
    /// Self-loop or repeated neighbor.
    NotSimple { node: Node, neighbor: Node },
    AsymmetricEdge { from: Node, to: Node },
    WrongEdgeCount { expected: usize, found: usize },
    /// A traced face whose length is not 3; holds its first few nodes.
    NotTriangulated { face: Vec<Node>, len: usize },
    ExteriorNotAFace { exterior: [Node; 3] },
    NotANeighbor { node: Node, anchor: Node },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::TooFewNodes { n } => write!(f, "need at least 3 nodes, got {n}"),
            GraphError::TooManyNodes { n } => write!(f, "{n} nodes exceed the supported maximum"),
            GraphError::RotationCount { expected, found } => {
                write!(f, "expected {expected} rotation lists, found {found}")
            }
            GraphError::NeighborOutOfRange { node, neighbor } => {
                write!(f, "node {node} lists neighbor {neighbor}, which is out of range")
            }
            GraphError::NotSimple { node, neighbor } => {
                write!(f, "node {node} lists neighbor {neighbor} more than once or as itself")
            }
            GraphError::AsymmetricEdge { from, to } => {
                write!(f, "node {from} lists {to} but {to} does not list {from}")
            }
            GraphError::WrongEdgeCount { expected, found } => {
                write!(f, "a triangulation needs {expected} edges, found {found}")
            }
            GraphError::NotTriangulated { face, len } => {
                write!(f, "face of length {len} starting at {face:?}")
            }
            GraphError::ExteriorNotAFace { exterior } => {
                write!(f, "exterior {exterior:?} is not a face of the embedding")
            }
            GraphError::NotANeighbor { node, anchor } => {
                write!(f, "{anchor} is not a neighbor of {node}")
            }
        }
    }
}

impl core::error::Error for GraphError {}

/// A maximal plane graph with a designated exterior face.
///
/// The exterior triple is kept in the order produced by face tracing, which
/// runs clockwise around the outer face: the half-edge `exterior[0] ->
/// exterior[1]` lies on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneTriangulation {
    offsets: Vec<u32>,
    heads: Vec<u32>,
    twins: Vec<u32>,
    exterior: [Node; 3],
}

impl PlaneTriangulation {
    /// Builds and validates a triangulation from counterclockwise rotations.
    ///
    /// The exterior may be given in either orientation; it is stored in traced
    /// order.
    pub fn from_rotation<R: AsRef<[Node]>>(
        node_count: usize,
        rotation: &[R],
        exterior: [Node; 3],
    ) -> Result<Self, GraphError> {
        if node_count < 3 {
            return Err(GraphError::TooFewNodes { n: node_count });
        }
        if node_count >= (NIL / 8) as usize {
            return Err(GraphError::TooManyNodes { n: node_count });
        }
        if rotation.len() != node_count {
            return Err(GraphError::RotationCount { expected: node_count, found: rotation.len() });
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        let mut heads = Vec::new();
        offsets.push(0u32);
        for (v, r) in rotation.iter().enumerate() {
            for &u in r.as_ref() {
                if u >= node_count {
                    return Err(GraphError::NeighborOutOfRange { node: v, neighbor: u });
                }
                heads.push(u as u32);
            }
            if heads.len() >= NIL as usize {
                return Err(GraphError::TooManyNodes { n: node_count });
            }
            offsets.push(heads.len() as u32);
        }
        let twins = pair_half_edges(node_count, &offsets, &heads)?;
        let expected = 3 * node_count - 6;
        if heads.len() != 2 * expected {
            return Err(GraphError::WrongEdgeCount { expected, found: heads.len() / 2 });
        }
        let mut g = PlaneTriangulation { offsets, heads, twins, exterior };
        g.check_faces()?;
        g.exterior = g.orient_exterior(exterior)?;
        Ok(g)
    }

    /// Builds a triangulation from its faces, each listed in traced order
    /// (the exterior face included).
    pub fn from_faces(
        node_count: usize,
        faces: &[[Node; 3]],
        exterior: [Node; 3],
    ) -> Result<Self, GraphError> {
        if node_count < 3 {
            return Err(GraphError::TooFewNodes { n: node_count });
        }
        // In a traced face (a, b, c) the neighbor after b around a is c.
        let mut succ: Vec<(Node, Node, Node)> = Vec::with_capacity(faces.len() * 3);
        for &[a, b, c] in faces {
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                if x >= node_count || y >= node_count || z >= node_count {
                    return Err(GraphError::NeighborOutOfRange { node: x, neighbor: y.max(z) });
                }
                succ.push((x, y, z));
            }
        }
        succ.sort_unstable();
        let mut rotation: Vec<Vec<Node>> = vec![Vec::new(); node_count];
        let mut start = 0;
        while start < succ.len() {
            let v = succ[start].0;
            let mut end = start;
            while end < succ.len() && succ[end].0 == v {
                end += 1;
            }
            let group = &succ[start..end];
            for w in group.windows(2) {
                if w[0].1 == w[1].1 {
                    return Err(GraphError::NotSimple { node: v, neighbor: w[0].1 });
                }
            }
            let first = group[0].1;
            let mut cur = first;
            loop {
                rotation[v].push(cur);
                let k = group
                    .binary_search_by(|e| e.1.cmp(&cur))
                    .map_err(|_| GraphError::AsymmetricEdge { from: v, to: cur })?;
                cur = group[k].2;
                if cur == first || rotation[v].len() > group.len() {
                    break;
                }
            }
            if rotation[v].len() != group.len() {
                return Err(GraphError::NotTriangulated { face: vec![v], len: rotation[v].len() });
            }
            start = end;
        }
        Self::from_rotation(node_count, &rotation, exterior)
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.heads.len() / 2
    }

    pub fn half_edge_count(&self) -> usize {
        self.heads.len()
    }

    /// Exterior nodes in traced (clockwise) order.
    pub fn exterior(&self) -> [Node; 3] {
        self.exterior
    }

    pub fn degree(&self, v: Node) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    /// Neighbors of `v` in counterclockwise order, starting from the stored
    /// first entry.
    pub fn neighbors(&self, v: Node) -> impl ExactSizeIterator<Item = Node> + '_ {
        self.heads[self.offsets[v] as usize..self.offsets[v + 1] as usize]
            .iter()
            .map(|&u| u as Node)
    }

    /// The rotation of `v` cut open at `anchor`.
    pub fn neighbors_ccw_from(&self, v: Node, anchor: Node) -> Result<Vec<Node>, GraphError> {
        let h = self.find_half_edge(v, anchor).ok_or(GraphError::NotANeighbor { node: v, anchor })?;
        let mut out = Vec::with_capacity(self.degree(v));
        let mut e = h;
        loop {
            out.push(self.head(e));
            e = self.next_around(e);
            if e == h {
                break;
            }
        }
        Ok(out)
    }

    pub fn is_adjacent(&self, u: Node, v: Node) -> bool {
        self.find_half_edge(u, v).is_some()
    }

    /// Every undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u).filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    /// All faces in traced order. Interior faces run counterclockwise, the
    /// exterior face clockwise.
    pub fn trace_faces(&self) -> Vec<[Node; 3]> {
        let mut seen = vec![false; self.heads.len()];
        let mut faces = Vec::with_capacity(self.heads.len() / 3);
        for h in 0..self.heads.len() {
            if seen[h] {
                continue;
            }
            let h1 = self.face_next(h);
            let h2 = self.face_next(h1);
            seen[h] = true;
            seen[h1] = true;
            seen[h2] = true;
            faces.push([self.tail(h), self.tail(h1), self.tail(h2)]);
        }
        faces
    }

    pub fn first_half_edge(&self, v: Node) -> HalfEdge {
        self.offsets[v] as HalfEdge
    }

    /// Position of `h` inside its tail's rotation.
    pub fn rotation_index(&self, h: HalfEdge) -> usize {
        h - self.offsets[self.tail(h)] as usize
    }

    pub fn head(&self, h: HalfEdge) -> Node {
        self.heads[h] as Node
    }

    pub fn tail(&self, h: HalfEdge) -> Node {
        self.heads[self.twins[h] as usize] as Node
    }

    pub fn twin(&self, h: HalfEdge) -> HalfEdge {
        self.twins[h] as HalfEdge
    }

    /// The half-edge leaving the same node, one step counterclockwise.
    pub fn next_around(&self, h: HalfEdge) -> HalfEdge {
        let v = self.tail(h);
        let end = self.offsets[v + 1] as usize;
        if h + 1 == end {
            self.offsets[v] as usize
        } else {
            h + 1
        }
    }

    /// The half-edge leaving the same node, one step clockwise.
    pub fn prev_around(&self, h: HalfEdge) -> HalfEdge {
        let v = self.tail(h);
        let start = self.offsets[v] as usize;
        if h == start {
            self.offsets[v + 1] as usize - 1
        } else {
            h - 1
        }
    }

    /// The next half-edge along the face to the left of `h`.
    pub fn face_next(&self, h: HalfEdge) -> HalfEdge {
        self.prev_around(self.twin(h))
    }

    pub fn find_half_edge(&self, from: Node, to: Node) -> Option<HalfEdge> {
        if from >= self.node_count() {
            return None;
        }
        let s = self.offsets[from] as usize;
        let e = self.offsets[from + 1] as usize;
        self.heads[s..e].iter().position(|&u| u as Node == to).map(|k| s + k)
    }

    fn check_faces(&self) -> Result<(), GraphError> {
        let mut seen = vec![false; self.heads.len()];
        for h in 0..self.heads.len() {
            if seen[h] {
                continue;
            }
            let mut face = Vec::new();
            let mut e = h;
            let mut len = 0usize;
            while !seen[e] {
                seen[e] = true;
                if face.len() < 8 {
                    face.push(self.tail(e));
                }
                len += 1;
                e = self.face_next(e);
            }
            if len != 3 || e != h {
                return Err(GraphError::NotTriangulated { face, len });
            }
        }
        Ok(())
    }

    fn orient_exterior(&self, ext: [Node; 3]) -> Result<[Node; 3], GraphError> {
        let n = self.node_count();
        let err = GraphError::ExteriorNotAFace { exterior: ext };
        if ext.iter().any(|&v| v >= n) || ext[0] == ext[1] || ext[1] == ext[2] || ext[0] == ext[2] {
            return Err(err);
        }
        let h = self.find_half_edge(ext[0], ext[1]).ok_or(err.clone())?;
        if self.head(self.face_next(h)) == ext[2] {
            return Ok(ext);
        }
        let h = self.find_half_edge(ext[0], ext[2]).ok_or(err.clone())?;
        if self.head(self.face_next(h)) == ext[1] {
            return Ok([ext[0], ext[2], ext[1]]);
        }
        Err(err)
    }
}

/// Links every half-edge to its reverse in linear time, rejecting loops,
/// repeated neighbors and one-sided edges.
fn pair_half_edges(n: usize, offsets: &[u32], heads: &[u32]) -> Result<Vec<u32>, GraphError> {
    let m2 = heads.len();
    let mut stamp = vec![NIL; n];
    for v in 0..n {
        for h in offsets[v] as usize..offsets[v + 1] as usize {
            let u = heads[h] as usize;
            if u == v || stamp[u] == v as u32 {
                return Err(GraphError::NotSimple { node: v, neighbor: u });
            }
            stamp[u] = v as u32;
        }
    }
    // Bucket incoming half-edges by their head.
    let mut in_start = vec![0u32; n + 1];
    for &u in heads {
        in_start[u as usize + 1] += 1;
    }
    for v in 0..n {
        in_start[v + 1] += in_start[v];
    }
    let mut fill = in_start.clone();
    let mut incoming = vec![0u32; m2];
    for v in 0..n {
        for h in offsets[v] as usize..offsets[v + 1] as usize {
            let u = heads[h] as usize;
            incoming[fill[u] as usize] = h as u32;
            fill[u] += 1;
        }
    }
    let mut tails = vec![0u32; m2];
    for v in 0..n {
        for h in offsets[v] as usize..offsets[v + 1] as usize {
            tails[h] = v as u32;
        }
    }
    let mut slot = vec![NIL; n];
    let mut twins = vec![NIL; m2];
    for v in 0..n {
        for k in in_start[v] as usize..in_start[v + 1] as usize {
            let h = incoming[k];
            slot[tails[h as usize] as usize] = h;
        }
        for h in offsets[v] as usize..offsets[v + 1] as usize {
            let u = heads[h] as usize;
            let back = slot[u];
            if back == NIL {
                return Err(GraphError::AsymmetricEdge { from: v, to: u });
            }
            twins[h] = back;
            slot[u] = NIL;
        }
        for k in in_start[v] as usize..in_start[v + 1] as usize {
            let u = tails[incoming[k] as usize] as usize;
            if slot[u] != NIL {
                return Err(GraphError::AsymmetricEdge { from: u, to: v });
            }
        }
    }
    Ok(twins)
}
