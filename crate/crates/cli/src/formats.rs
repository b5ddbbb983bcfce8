//! Line-oriented text formats for graphs, plans and trees.
//!
//! Every file starts with `<kind> v1` and ends with `end`. Blank lines and
//! lines starting with `#` are ignored by the readers.

use std::fmt::{self, Write as _};

use floorplan_core::layout::{FloorPlan, Rect};
use floorplan_core::ost::OrderlySpanningTree;
use floorplan_core::PlaneTriangulation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Token cursor over the meaningful lines of a file.
struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
    offset: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.trim_start().is_empty() && !l.trim_start().starts_with('#'))
            .collect();
        let last_line = text.lines().count().max(1);
        Lines { lines, pos: 0, last_line }
    }

    fn next(&mut self, what: &str) -> Result<Line<'a>, ParseError> {
        let Some(&(number, text)) = self.lines.get(self.pos) else {
            return Err(ParseError { line: self.last_line, column: 1, message: format!("unexpected end of file, expected {what}") });
        };
        self.pos += 1;
        Ok(Line { number, text, offset: 0 })
    }

    fn peek_keyword(&self) -> Option<&'a str> {
        self.lines.get(self.pos).and_then(|(_, l)| l.split_whitespace().next())
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        let line = self.next("`end`")?;
        if line.text.trim() != "end" {
            return Err(line.error_at(0, "expected `end`"));
        }
        if let Some(&(number, _)) = self.lines.get(self.pos) {
            return Err(ParseError { line: number, column: 1, message: "content after `end`".into() });
        }
        Ok(())
    }
}

impl<'a> Line<'a> {
    fn error_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, column: offset + 1, message: message.into() }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.offset, message)
    }

    /// Offset of the next token, or of the line end.
    fn next_start(&self) -> usize {
        let rest = &self.text[self.offset..];
        self.offset + (rest.len() - rest.trim_start().len())
    }

    /// Next whitespace-separated token and its byte offset.
    fn token(&mut self) -> Option<(usize, &'a str)> {
        let start = self.next_start();
        let tail = &self.text[start..];
        if tail.is_empty() {
            self.offset = start;
            return None;
        }
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        self.offset = start + len;
        Some((start, &tail[..len]))
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match self.token() {
            Some((_, t)) if t == word => Ok(()),
            Some((at, t)) => Err(self.error_at(at, format!("expected `{word}`, found `{t}`"))),
            None => Err(self.error(format!("expected `{word}`"))),
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        match self.token() {
            Some((at, t)) => t.parse().map_err(|_| self.error_at(at, format!("expected {what}, found `{t}`"))),
            None => Err(self.error(format!("expected {what}"))),
        }
    }

    fn rest(&mut self) -> &'a str {
        let r = self.text[self.offset..].trim();
        self.offset = self.text.len();
        r
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.token() {
            None => Ok(()),
            Some((at, t)) => Err(self.error_at(at, format!("unexpected `{t}`"))),
        }
    }
}

/// A graph file: the rotation system plus an optional free-form source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub source: Option<String>,
    pub exterior: [usize; 3],
    pub rotation: Vec<Vec<usize>>,
}

impl GraphFile {
    pub fn from_graph(g: &PlaneTriangulation, source: Option<String>) -> Self {
        GraphFile {
            source,
            exterior: g.exterior(),
            rotation: (0..g.node_count()).map(|v| g.neighbors(v).collect()).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<PlaneTriangulation, floorplan_core::GraphError> {
        PlaneTriangulation::from_rotation(self.rotation.len(), &self.rotation, self.exterior)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(text);
        let mut head = lines.next("`graph v1`")?;
        head.keyword("graph")?;
        head.keyword("v1")?;
        head.end()?;
        let source = if lines.peek_keyword() == Some("source") {
            let mut l = lines.next("source")?;
            l.keyword("source")?;
            Some(l.rest().to_string())
        } else {
            None
        };
        let mut l = lines.next("`n`")?;
        l.keyword("n")?;
        let n: usize = l.number("node count")?;
        l.end()?;
        let mut l = lines.next("`exterior`")?;
        l.keyword("exterior")?;
        let mut exterior = [0usize; 3];
        for e in &mut exterior {
            let at = l.next_start();
            *e = l.number("exterior node")?;
            if *e >= n {
                return Err(l.error_at(at, format!("node {e} out of range")));
            }
        }
        l.end()?;
        let mut rotation = Vec::with_capacity(n.min(1 << 16));
        for v in 0..n {
            let mut l = lines.next(&format!("rotation of node {v}"))?;
            let (at, label) = l.token().ok_or_else(|| l.error("expected `v:`"))?;
            if label != format!("{v}:") {
                return Err(l.error_at(at, format!("expected `{v}:`, found `{label}`")));
            }
            let mut nbrs = Vec::new();
            while let Some((at, t)) = l.token() {
                let u: usize = t.parse().map_err(|_| l.error_at(at, format!("expected node, found `{t}`")))?;
                if u >= n {
                    return Err(l.error_at(at, format!("node {u} out of range")));
                }
                nbrs.push(u);
            }
            rotation.push(nbrs);
        }
        lines.finish()?;
        Ok(GraphFile { source, exterior, rotation })
    }
}

impl fmt::Display for GraphFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph v1")?;
        if let Some(s) = &self.source {
            writeln!(f, "source {s}")?;
        }
        writeln!(f, "n {}", self.rotation.len())?;
        let [a, b, c] = self.exterior;
        writeln!(f, "exterior {a} {b} {c}")?;
        let mut line = String::new();
        for (v, r) in self.rotation.iter().enumerate() {
            line.clear();
            let _ = write!(line, "{v}:");
            for u in r {
                let _ = write!(line, " {u}");
            }
            writeln!(f, "{line}")?;
        }
        writeln!(f, "end")
    }
}

/// Where a plan came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub source: String,
    pub root: usize,
    pub leaves: usize,
    pub tool: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanFile {
    pub provenance: Provenance,
    pub plan: FloorPlan,
}

pub fn tool_version() -> String {
    format!("floorplan {}", env!("CARGO_PKG_VERSION"))
}

impl PlanFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(text);
        let mut head = lines.next("`plan v1`")?;
        head.keyword("plan")?;
        head.keyword("v1")?;
        head.end()?;
        let mut l = lines.next("`size`")?;
        l.keyword("size")?;
        let height: u32 = l.number("height")?;
        let width: u32 = l.number("width")?;
        l.end()?;
        let mut l = lines.next("`source`")?;
        l.keyword("source")?;
        let source = l.rest().to_string();
        let mut l = lines.next("`root`")?;
        l.keyword("root")?;
        let root = l.number("root node")?;
        l.end()?;
        let mut l = lines.next("`leaves`")?;
        l.keyword("leaves")?;
        let leaves = l.number("leaf count")?;
        l.end()?;
        let mut l = lines.next("`tool`")?;
        l.keyword("tool")?;
        let tool = l.rest().to_string();
        let mut modules: Vec<Vec<Rect>> = Vec::new();
        while lines.peek_keyword() == Some("module") {
            let mut l = lines.next("module")?;
            l.keyword("module")?;
            let v = modules.len();
            let (at, label) = l.token().ok_or_else(|| l.error("expected `v:`"))?;
            if label != format!("{v}:") {
                return Err(l.error_at(at, format!("expected `{v}:`, found `{label}`")));
            }
            let mut rects = Vec::new();
            loop {
                let at = l.next_start();
                let x0: u32 = l.number("x0")?;
                let y0: u32 = l.number("y0")?;
                let x1: u32 = l.number("x1")?;
                let (p, t) = l.token().ok_or_else(|| l.error("expected y1"))?;
                let more = t.ends_with(';');
                let y1: u32 = t
                    .trim_end_matches(';')
                    .parse()
                    .map_err(|_| l.error_at(p, format!("expected y1, found `{t}`")))?;
                if x1 <= x0 || y1 <= y0 || x1 > width || y1 > height {
                    return Err(l.error_at(at, "empty or out-of-bounds rectangle"));
                }
                rects.push(Rect::new(x0, y0, x1, y1));
                if !more {
                    l.end()?;
                    break;
                }
            }
            modules.push(rects);
        }
        lines.finish()?;
        let plan = FloorPlan::new(height, width, &modules);
        Ok(PlanFile { provenance: Provenance { source, root, leaves, tool }, plan })
    }
}

impl fmt::Display for PlanFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.provenance;
        writeln!(f, "plan v1")?;
        writeln!(f, "size {} {}", self.plan.height(), self.plan.width())?;
        writeln!(f, "source {}", p.source)?;
        writeln!(f, "root {}", p.root)?;
        writeln!(f, "leaves {}", p.leaves)?;
        writeln!(f, "tool {}", p.tool)?;
        let mut line = String::new();
        for (v, m) in self.plan.modules().enumerate() {
            line.clear();
            let _ = write!(line, "module {v}:");
            for (k, r) in m.iter().enumerate() {
                let sep = if k == 0 { "" } else { ";" };
                let _ = write!(line, "{sep} {} {} {} {}", r.x0, r.y0, r.x1, r.y1);
            }
            writeln!(f, "{line}")?;
        }
        writeln!(f, "end")
    }
}

/// Tree file: per node its parent (`-` at the root) and preorder label.
pub fn write_tree(t: &OrderlySpanningTree) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "ost v1");
    let _ = writeln!(s, "n {}", t.node_count());
    let _ = writeln!(s, "root {}", t.root());
    for v in 0..t.node_count() {
        match t.parent(v) {
            Some(p) => {
                let _ = writeln!(s, "{v}: {p} {}", t.label(v));
            }
            None => {
                let _ = writeln!(s, "{v}: - {}", t.label(v));
            }
        }
    }
    let _ = writeln!(s, "end");
    s
}

/// Reads a tree file back into root and parent links; labels are checked
/// later by annotation, so they are only parsed here.
pub fn parse_tree(text: &str) -> Result<(usize, Vec<Option<usize>>), ParseError> {
    let mut lines = Lines::new(text);
    let mut head = lines.next("`ost v1`")?;
    head.keyword("ost")?;
    head.keyword("v1")?;
    head.end()?;
    let mut l = lines.next("`n`")?;
    l.keyword("n")?;
    let n: usize = l.number("node count")?;
    l.end()?;
    let mut l = lines.next("`root`")?;
    l.keyword("root")?;
    let root: usize = l.number("root node")?;
    l.end()?;
    let mut parent = Vec::with_capacity(n.min(1 << 16));
    for v in 0..n {
        let mut l = lines.next(&format!("parent of node {v}"))?;
        l.keyword(&format!("{v}:"))?;
        match l.token() {
            Some((_, "-")) => parent.push(None),
            Some((at, t)) => {
                let p: usize = t.parse().map_err(|_| l.error_at(at, format!("expected parent, found `{t}`")))?;
                if p >= n {
                    return Err(l.error_at(at, format!("node {p} out of range")));
                }
                parent.push(Some(p));
            }
            None => return Err(l.error("expected parent")),
        }
        let _label: usize = l.number("label")?;
        l.end()?;
    }
    lines.finish()?;
    Ok((root, parent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use floorplan_core::instances::random_triangulation;
    use floorplan_core::layout::floorplan_with_tree;
    use floorplan_core::ost::{min_leaf_ost, SpanningTree};

    #[test]
    fn graph_round_trip() {
        let g = random_triangulation(60, 4, 90).unwrap();
        let text = GraphFile::from_graph(&g, Some("kind=random_flipped n=60 seed=4 flips=90".into())).to_string();
        let back = GraphFile::parse(&text).unwrap();
        assert_eq!(back.to_string(), text);
        assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn plan_round_trip() {
        let g = random_triangulation(80, 9, 0).unwrap();
        let t = min_leaf_ost(&g).unwrap();
        let file = PlanFile {
            provenance: Provenance { source: "kind=random_stacked n=80 seed=9 flips=0".into(), root: t.root(), leaves: t.leaf_count(), tool: tool_version() },
            plan: floorplan_with_tree(&g, &t).unwrap(),
        };
        let text = file.to_string();
        let back = PlanFile::parse(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_string(), text);
    }

    #[test]
    fn tree_round_trip() {
        let g = random_triangulation(30, 1, 30).unwrap();
        let t = min_leaf_ost(&g).unwrap();
        let (root, parent) = parse_tree(&write_tree(&t)).unwrap();
        let again = OrderlySpanningTree::annotate(&g, &SpanningTree { root, parent }).unwrap();
        assert_eq!(write_tree(&again), write_tree(&t));
    }

    #[test]
    fn errors_carry_positions() {
        let e = GraphFile::parse("graph v1\nn 3\nexterior 0 1 2\n0: 1 2\n1: 0 7\n2: 0 1\nend\n").unwrap_err();
        assert_eq!((e.line, e.column), (5, 6));
        let e = GraphFile::parse("graph v2\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        let e = GraphFile::parse("graph v1\nn 3\n").unwrap_err();
        assert!(e.message.contains("end of file"), "{e}");
        let e = PlanFile::parse("plan v1\nsize 2 2\nsource x\nroot 0\nleaves 2\ntool t\nmodule 0: 0 0 3 1\nend\n").unwrap_err();
        assert_eq!((e.line, e.column), (7, 11));
        let e = PlanFile::parse("plan v1\nsize 1 1\nsource x\nroot 0\nleaves 1\ntool t\nmodule 0: 0 0 1 1\nend\nextra\n").unwrap_err();
        assert_eq!(e.line, 9);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# made by hand\ngraph v1\n\nn 3\nexterior 0 2 1\n0: 1 2\n1: 2 0\n2: 0 1\nend\n";
        let g = GraphFile::parse(text).unwrap().to_graph().unwrap();
        assert_eq!(g.edge_count(), 3);
    }
}
