use floorplan_core::instances::{leaf_bound, nested_triangle_family, random_triangulation};
use floorplan_core::ost::{
    candidate_osts, canonical_order, min_leaf_ost, realizer_from_canonical, OrderError, OrderlySpanningTree,
    SpanningTree,
};
use floorplan_core::validator::check_orderly;
use floorplan_core::PlaneTriangulation;

fn instances() -> impl Iterator<Item = (String, PlaneTriangulation)> {
    (3..=80usize).flat_map(|n| {
        (0..3u64)
            .map(move |s| (format!("n={n} seed={s}"), random_triangulation(n, s, if s == 0 { 0 } else { 2 * n }).unwrap()))
            .chain(std::iter::once((format!("nested n={n}"), nested_triangle_family(n).unwrap())))
    })
}

/// Replays the order: every new node must see a contiguous run of at least
/// two nodes on the current boundary path from the first to the second node.
fn replay_canonical(g: &PlaneTriangulation, order: &[usize]) -> Result<(), String> {
    let n = g.node_count();
    if order.len() != n {
        return Err("wrong length".into());
    }
    let mut pos = vec![usize::MAX; n];
    for (k, &v) in order.iter().enumerate() {
        if pos[v] != usize::MAX {
            return Err(format!("node {v} repeated"));
        }
        pos[v] = k;
    }
    let mut boundary = vec![order[0], order[1]];
    for (k, &v) in order.iter().enumerate().skip(2) {
        let on: Vec<usize> = (0..boundary.len()).filter(|&i| g.is_adjacent(v, boundary[i])).collect();
        let earlier = g.neighbors(v).filter(|&u| pos[u] < k).count();
        let (a, b) = (on[0], *on.last().unwrap());
        if on.len() < 2 || on.len() != earlier || b - a + 1 != on.len() {
            return Err(format!("node {v} at step {k} does not attach to a boundary run"));
        }
        boundary.splice(a + 1..b, [v]);
    }
    if boundary != [order[0], order[n - 1], order[1]] {
        return Err("final boundary is not the exterior".into());
    }
    Ok(())
}

#[test]
fn canonical_orders_replay() {
    for (name, g) in instances() {
        let ext = g.exterior();
        for k in 0..3 {
            let anchors = [ext[(k + 2) % 3], ext[(k + 1) % 3]];
            let order = canonical_order(&g, anchors).unwrap();
            assert_eq!(&order[..2], &anchors, "{name}");
            assert_eq!(order[g.node_count() - 1], ext[k], "{name}");
            replay_canonical(&g, &order).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(canonical_order(&g, [ext[1], ext[2]]).is_err(), "{name}: reversed anchors accepted");
    }
}

#[test]
fn realizers_partition_interior_edges() {
    for (name, g) in instances() {
        let ext = g.exterior();
        let order = canonical_order(&g, [ext[2], ext[1]]).unwrap();
        let rz = realizer_from_canonical(&g, &order).unwrap();
        rz.verify(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
        let n = g.node_count();
        let mut seen = std::collections::BTreeSet::new();
        for c in 0..3 {
            for v in 0..n {
                if let Some(p) = rz.parent(c, v) {
                    assert!(g.is_adjacent(v, p));
                    assert!(seen.insert((v.min(p), v.max(p))), "{name}: edge in two trees");
                }
            }
        }
        assert_eq!(seen.len(), 3 * n - 9, "{name}");
    }
}

#[test]
fn all_candidates_are_orderly() {
    for (name, g) in instances() {
        for t in candidate_osts(&g).unwrap() {
            let st = SpanningTree { root: t.root(), parent: t.parents() };
            let (again, rep) = check_orderly(&g, &st);
            assert!(rep.pass(), "{name}: {rep}");
            assert_eq!(again.unwrap().leaf_count(), t.leaf_count());
        }
    }
}

#[test]
fn fewest_leaves_meets_the_bound() {
    let mut checked = 0;
    for n in 3..=400usize {
        for seed in 0..4u64 {
            let flips = if seed % 2 == 0 { 0 } else { n };
            let g = random_triangulation(n, seed, flips).unwrap();
            let t = min_leaf_ost(&g).unwrap();
            let best = candidate_osts(&g).unwrap().iter().map(|c| c.leaf_count()).min().unwrap();
            assert_eq!(t.leaf_count(), best);
            assert!(t.leaf_count() <= leaf_bound(n), "n={n} seed={seed}: {} leaves", t.leaf_count());
            checked += 1;
        }
    }
    assert_eq!(checked, 398 * 4);
}

#[test]
fn annotations_are_consistent() {
    for (name, g) in instances() {
        let t = min_leaf_ost(&g).unwrap();
        let n = g.node_count();
        let ext = g.exterior();
        assert!(ext.contains(&t.node(2)) && ext.contains(&t.node(n)), "{name}");
        assert_eq!(t.parent_label(2), 1);
        for i in 1..=n {
            let v = t.node(i);
            assert_eq!(t.label(v), i);
            let b = t.blocks(i);
            assert_eq!((b.parent + b.smaller + b.children + b.larger) as usize, g.degree(v));
            let kids: Vec<usize> = t.children(&g, i).collect();
            assert_eq!(kids.len(), b.children as usize, "{name}");
            // Children's subtrees occupy consecutive label ranges.
            let mut next = i + 1;
            for &c in &kids {
                assert_eq!(c, next, "{name}");
                next += t.subtree_size(c);
            }
            assert_eq!(next, i + t.subtree_size(i));
            if kids.is_empty() {
                assert_eq!(t.leaves_below(i), 1);
            } else {
                assert_eq!(t.leaves_below(i), kids.iter().map(|&c| t.leaves_below(c)).sum::<usize>());
            }
            if i >= 3 {
                assert!(t.left_contact(i) >= 1 && t.left_contact(i) < i, "{name}: left contact of {i}");
            }
            if (2..n).contains(&i) {
                assert!(t.right_contact(i) > i, "{name}: right contact of {i}");
            }
        }
    }
}

#[test]
fn reparenting_breaks_orderliness() {
    let mut block_violations = 0;
    let mut tried = 0;
    for seed in 0..20u64 {
        let g = random_triangulation(40, seed, 40).unwrap();
        let t = min_leaf_ost(&g).unwrap();
        let base = t.parents();
        for v in 0..g.node_count() {
            let Some(p) = base[v] else { continue };
            for u in g.neighbors(v) {
                if u == p || t.is_ancestor(t.label(v), t.label(u)) {
                    continue;
                }
                let mut parent = base.clone();
                parent[v] = Some(u);
                tried += 1;
                match OrderlySpanningTree::annotate(&g, &SpanningTree { root: t.root(), parent }) {
                    Ok(other) => {
                        // A different valid tree is possible; it must then really be orderly.
                        let (_, rep) = check_orderly(&g, &SpanningTree { root: other.root(), parent: other.parents() });
                        assert!(rep.pass());
                    }
                    Err(OrderError::BlockOrderViolation { .. }) => block_violations += 1,
                    Err(_) => {}
                }
            }
        }
    }
    assert!(tried > 100);
    assert!(block_violations > tried / 2, "{block_violations} of {tried}");
}

#[test]
fn non_trees_are_rejected() {
    let g = random_triangulation(10, 2, 5).unwrap();
    let t = min_leaf_ost(&g).unwrap();
    let mut parent = t.parents();
    let v = t.node(3);
    parent[t.node(2)] = Some(v);
    parent[v] = Some(t.node(2));
    let err = OrderlySpanningTree::annotate(&g, &SpanningTree { root: t.root(), parent }).unwrap_err();
    assert!(matches!(err, OrderError::NotSpanning { .. }), "{err}");
    let inner = (0..10).find(|v| !g.exterior().contains(v)).unwrap();
    let err = OrderlySpanningTree::annotate(&g, &SpanningTree { root: inner, parent: t.parents() }).unwrap_err();
    assert!(matches!(err, OrderError::RootNotExterior { .. } | OrderError::NotSpanning { .. }), "{err}");
}
