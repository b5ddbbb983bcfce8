use std::collections::BTreeMap;
use std::fmt::Write as _;

use floorplan_core::layout::{FloorPlan, Rect};
use floorplan_core::validator::{classify_module, ShapeTag};

#[derive(Debug, Clone, Copy)]
pub struct SvgOptions {
    /// Pixels per grid unit.
    pub cell: u32,
    pub grid: bool,
}

fn fill(tag: ShapeTag) -> &'static str {
    match tag {
        ShapeTag::I => "#dfe7f2",
        ShapeTag::L => "#f6e3c5",
        ShapeTag::T => "#d8efd3",
        ShapeTag::Z | ShapeTag::Other => "#f4c7c7",
    }
}

/// Closed outlines of a union of rectangles, corners only, each traced
/// clockwise on screen.
pub fn outlines(rects: &[Rect]) -> Vec<Vec<(u32, u32)>> {
    let mut xs: Vec<u32> = rects.iter().flat_map(|r| [r.x0, r.x1]).collect();
    let mut ys: Vec<u32> = rects.iter().flat_map(|r| [r.y0, r.y1]).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();
    if xs.len() < 2 || ys.len() < 2 {
        return Vec::new();
    }
    let (cw, ch) = (xs.len() - 1, ys.len() - 1);
    let inside = |i: isize, j: isize| {
        if i < 0 || j < 0 || i as usize >= cw || j as usize >= ch {
            return false;
        }
        let (x, y) = (xs[i as usize], ys[j as usize]);
        rects.iter().any(|r| r.contains(x, y))
    };
    let mut out_edges: BTreeMap<(u32, u32), Vec<(u32, u32)>> = BTreeMap::new();
    for j in 0..ch as isize {
        for i in 0..cw as isize {
            if !inside(i, j) {
                continue;
            }
            let (x0, x1) = (xs[i as usize], xs[i as usize + 1]);
            let (y0, y1) = (ys[j as usize], ys[j as usize + 1]);
            let mut add = |a: (u32, u32), b: (u32, u32)| out_edges.entry(a).or_default().push(b);
            if !inside(i, j - 1) {
                add((x0, y0), (x1, y0));
            }
            if !inside(i + 1, j) {
                add((x1, y0), (x1, y1));
            }
            if !inside(i, j + 1) {
                add((x1, y1), (x0, y1));
            }
            if !inside(i - 1, j) {
                add((x0, y1), (x0, y0));
            }
        }
    }
    let mut loops = Vec::new();
    while let Some((&start, _)) = out_edges.iter().find(|(_, v)| !v.is_empty()) {
        let mut pts = vec![start];
        let mut cur = start;
        loop {
            let next = out_edges.get_mut(&cur).and_then(|v| v.pop()).expect("outline edges form cycles");
            if next == start {
                break;
            }
            pts.push(next);
            cur = next;
        }
        // Keep corners only.
        let k = pts.len();
        let corners: Vec<(u32, u32)> = (0..k)
            .filter(|&i| {
                let (a, b, c) = (pts[(i + k - 1) % k], pts[i], pts[(i + 1) % k]);
                !((a.0 == b.0 && b.0 == c.0) || (a.1 == b.1 && b.1 == c.1))
            })
            .map(|i| pts[i])
            .collect();
        loops.push(corners);
    }
    loops
}

fn largest(rects: &[Rect]) -> Option<Rect> {
    rects.iter().copied().fold(None, |best: Option<Rect>, r| match best {
        Some(b) if b.area() >= r.area() => Some(b),
        _ => Some(r),
    })
}

pub fn render(fp: &FloorPlan, opts: SvgOptions) -> String {
    let c = opts.cell.max(1);
    let margin = c / 2;
    let (w, h) = (fp.width() * c + 2 * margin, fp.height() * c + 2 * margin);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<g transform="translate({margin},{margin})">"#);
    if opts.grid {
        let _ = writeln!(s, r##"<g stroke="#bbbbbb" stroke-width="0.5">"##);
        for x in 0..=fp.width() {
            let _ = writeln!(s, r#"<line x1="{}" y1="0" x2="{}" y2="{}"/>"#, x * c, x * c, fp.height() * c);
        }
        for y in 0..=fp.height() {
            let _ = writeln!(s, r#"<line x1="0" y1="{}" x2="{}" y2="{}"/>"#, y * c, fp.width() * c, y * c);
        }
        let _ = writeln!(s, "</g>");
    }
    let font = (c * 2 / 3).max(6);
    for (v, rects) in fp.modules().enumerate() {
        let tag = classify_module(rects).tag;
        for outline in outlines(rects) {
            let mut pts = String::new();
            for (k, (x, y)) in outline.iter().enumerate() {
                let sep = if k == 0 { "" } else { " " };
                let _ = write!(pts, "{sep}{},{}", x * c, y * c);
            }
            let _ = writeln!(
                s,
                r#"<polygon id="m{v}" points="{pts}" fill="{}" fill-opacity="{}" stroke="black" stroke-width="1"/>"#,
                fill(tag),
                if opts.grid { "0.85" } else { "1" }
            );
        }
        if let Some(r) = largest(rects) {
            let (cx, cy) = ((r.x0 + r.x1) * c / 2, (r.y0 + r.y1) * c / 2);
            let _ = writeln!(
                s,
                r#"<text x="{cx}" y="{cy}" font-family="sans-serif" font-size="{font}" text-anchor="middle" dominant-baseline="central">{v}</text>"#
            );
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}
