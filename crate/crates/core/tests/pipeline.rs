#![cfg(feature = "oracles")]

use floorplan_core::instances::{leaf_bound, nested_triangle_family, random_triangulation};
use floorplan_core::layout::{
    floorplan, floorplan_with_tree, grow_branches, reduce_branch_heights, stretch_to_two_visibility,
    visibility_drawing_of_tree,
};
use floorplan_core::oracle::{literal_floorplan, naive_stretch};
use floorplan_core::ost::min_leaf_ost;
use floorplan_core::validator::{rasterize, validate, ShapeTag};
use floorplan_core::PlaneTriangulation;

fn corpus() -> Vec<(String, PlaneTriangulation)> {
    let mut out = Vec::new();
    for n in 3..=60 {
        for seed in 0..4 {
            out.push((format!("stacked n={n} seed={seed}"), random_triangulation(n, seed, 0).unwrap()));
            out.push((format!("flipped n={n} seed={seed}"), random_triangulation(n, seed, 3 * n).unwrap()));
        }
        out.push((format!("nested n={n}"), nested_triangle_family(n).unwrap()));
    }
    for (i, n) in [100, 150, 200, 300].into_iter().enumerate() {
        out.push((format!("flipped n={n}"), random_triangulation(n, 90 + i as u64, n).unwrap()));
        out.push((format!("stacked n={n}"), random_triangulation(n, 90 + i as u64, 0).unwrap()));
    }
    out
}

#[test]
fn every_plan_validates() {
    for (name, g) in corpus() {
        let t = min_leaf_ost(&g).unwrap();
        let fp = floorplan_with_tree(&g, &t).unwrap_or_else(|e| panic!("{name}: {e}"));
        let rep = validate(&fp, &g, Some(t.leaf_count()));
        assert!(rep.pass(), "{name}: {rep}");
        assert!(rep.warnings.is_empty(), "{name}: {rep}");
        assert_eq!(rep.shape_count(ShapeTag::Z) + rep.shape_count(ShapeTag::Other), 0);
        assert!(fp.width() as usize <= leaf_bound(g.node_count()), "{name}");
    }
}

#[test]
fn stretch_matches_naive_relaxation() {
    for (name, g) in corpus() {
        let t = min_leaf_ost(&g).unwrap();
        let d = stretch_to_two_visibility(&g, &t, &visibility_drawing_of_tree(&g, &t)).unwrap();
        let naive = naive_stretch(&g, &t).unwrap_or_else(|e| panic!("{name}: {e}"));
        let bottoms: Vec<u32> = (0..g.node_count()).map(|v| d.bottom(v)).collect();
        assert_eq!(bottoms, naive.bottom, "{name}");
        let mut rows: Vec<_> = d
            .edge_bottoms(&g)
            .map(|(a, b, y)| if t.label(a) < t.label(b) { (a, b, y) } else { (b, a, y) })
            .collect();
        rows.sort_unstable();
        assert_eq!(rows, naive.edge_rows, "{name}");
    }
}

#[test]
fn branches_match_cell_replay() {
    for (name, g) in corpus() {
        let t = min_leaf_ost(&g).unwrap();
        let d = stretch_to_two_visibility(&g, &t, &visibility_drawing_of_tree(&g, &t)).unwrap();
        let bottoms: Vec<u32> = (0..g.node_count()).map(|v| d.bottom(v)).collect();
        let grid = literal_floorplan(&g, &t, &bottoms).unwrap_or_else(|e| panic!("{name}: {e}"));
        let fp = reduce_branch_heights(grow_branches(&g, &t, &d).unwrap()).unwrap().to_floorplan();
        let raster = rasterize(&fp).0.unwrap();
        for y in 0..grid.height {
            for x in 0..grid.width {
                assert_eq!(raster.owner(x as u32, y as u32), Some(grid.get(x, y)), "{name} at ({x},{y})");
            }
        }
    }
}

#[test]
fn default_pipeline_uses_fewest_leaves() {
    for (name, g) in corpus().into_iter().step_by(7) {
        let t = min_leaf_ost(&g).unwrap();
        let fp = floorplan(&g).unwrap();
        assert_eq!(fp.width() as usize, t.leaf_count(), "{name}");
    }
}

#[test]
fn small_instances_match_naive_relaxation_exhaustively() {
    for n in 3..=12 {
        for seed in 0..200u64 {
            let g = random_triangulation(n, seed, (seed % 3) as usize * n).unwrap();
            for t in floorplan_core::ost::candidate_osts(&g).unwrap() {
                let d = stretch_to_two_visibility(&g, &t, &visibility_drawing_of_tree(&g, &t)).unwrap();
                let naive = naive_stretch(&g, &t).unwrap();
                assert_eq!((0..n).map(|v| d.bottom(v)).collect::<Vec<_>>(), naive.bottom, "n={n} seed={seed}");
                assert_eq!((0..n).map(|v| d.rect(v).x0).collect::<Vec<_>>(), naive.x_left);
            }
        }
    }
}

#[test]
fn thinning_keeps_adjacency() {
    for seed in 0..10u64 {
        let g = random_triangulation(200, seed, if seed % 2 == 0 { 0 } else { 400 }).unwrap();
        let t = min_leaf_ost(&g).unwrap();
        let d = stretch_to_two_visibility(&g, &t, &visibility_drawing_of_tree(&g, &t)).unwrap();
        let grown = grow_branches(&g, &t, &d).unwrap();
        let before = grown.to_floorplan();
        let after = reduce_branch_heights(grown).unwrap().to_floorplan();
        let adj_before = rasterize(&before).0.unwrap().adjacency();
        assert_eq!(adj_before, rasterize(&after).0.unwrap().adjacency(), "seed {seed}");
        assert_eq!(adj_before.len(), g.edge_count());
        assert!(floorplan_core::validator::check_partition(&before).pass());
    }
}
