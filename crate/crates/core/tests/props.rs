use floorplan_core::instances::random_triangulation;
use floorplan_core::layout::{
    floorplan, grow_branches, reduce_branch_heights, stretch_to_two_visibility, visibility_drawing_of_tree, FloorPlan,
    Rect,
};
use floorplan_core::ost::min_leaf_ost;
use floorplan_core::validator::{classify_module, rasterize, validate};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pipeline_invariants(n in 3usize..250, seed in any::<u64>(), flip_factor in 0usize..3) {
        let g = random_triangulation(n, seed, flip_factor * n).unwrap();
        let t = min_leaf_ost(&g).unwrap();
        let d = stretch_to_two_visibility(&g, &t, &visibility_drawing_of_tree(&g, &t)).unwrap();
        prop_assert!(d.height() as usize <= n - 1);
        let grown = grow_branches(&g, &t, &d).unwrap();
        let once = reduce_branch_heights(grown).unwrap();
        let twice = reduce_branch_heights(once.clone()).unwrap();
        prop_assert_eq!(&once, &twice);
        let fp = once.to_floorplan();
        prop_assert_eq!((fp.height(), fp.width()), (d.height(), d.width()));
        prop_assert_eq!(&fp, &floorplan(&g).unwrap());
        let rep = validate(&fp, &g, Some(t.leaf_count()));
        prop_assert!(rep.pass(), "{}", rep);
        let adj = rasterize(&fp).0.unwrap().adjacency();
        prop_assert_eq!(adj.len(), 3 * n - 6);
        prop_assert!(adj.iter().all(|&(u, v)| u < v));
        // Re-normalizing a normalized plan changes nothing.
        let modules: Vec<Vec<Rect>> = fp.modules().map(|m| m.to_vec()).collect();
        prop_assert_eq!(FloorPlan::new(fp.height(), fp.width(), &modules), fp);
    }

    #[test]
    fn shape_ignores_translation(
        top in (0u32..4, 1u32..5, 1u32..4),
        bottom in (0u32..4, 1u32..5, 1u32..4),
        dx in 0u32..50,
        dy in 0u32..50,
    ) {
        let a = Rect::new(top.0, 0, top.0 + top.1, top.2);
        let b = Rect::new(bottom.0, top.2, bottom.0 + bottom.1, top.2 + bottom.2);
        let shift = |r: Rect| Rect::new(r.x0 + dx, r.y0 + dy, r.x1 + dx, r.y1 + dy);
        let here = classify_module(&[a, b]);
        let there = classify_module(&[shift(a), shift(b)]);
        prop_assert_eq!(here, there);
    }
}
