//! Acceptance criteria 1-9. Prints one line per criterion and exits non-zero
//! if any fails.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use floorplan_core::instances::{
    brute_force_min_area, leaf_bound, lower_bound_predicate, BruteForce, InstanceSpec,
};
use floorplan_core::layout::{floorplan_with_tree, stretch_to_two_visibility, visibility_drawing_of_tree, FloorPlan};
use floorplan_core::oracle::{naive_stretch, twelve_node_sample};
use floorplan_core::ost::{candidate_osts, min_leaf_ost, OrderlySpanningTree, SpanningTree};
use floorplan_core::validator::{check_adjacency, check_partition, check_shapes, rasterize, ShapeTag};
use floorplan_core::PlaneTriangulation;

const CORPUS_RANDOM: usize = 500;
const CORPUS_MAX_N: usize = 1000;
const NESTED_MAX_N: usize = 300;
const SHAPE_TIME_LIMIT: Duration = Duration::from_secs(30);
const BRUTE_TIME_LIMIT: Duration = Duration::from_secs(60);
const BRUTE_BUDGET: u64 = 200_000_000;
const DP_MAX_N: usize = 12;
const DP_SEEDS: u64 = 200;
const LINEAR_SLACK: f64 = 2.0;
const TIMING_RUNS: usize = 3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

struct Run {
    spec: InstanceSpec,
    graph: PlaneTriangulation,
    leaves: usize,
    plan: FloorPlan,
}

/// 500 random instances (alternating stacked and flipped, n spread over
/// [3, 1000]) followed by the nested family for n in [3, 300].
fn corpus_specs() -> Vec<InstanceSpec> {
    let mut specs: Vec<InstanceSpec> = (0..CORPUS_RANDOM)
        .map(|k| {
            let n = 3 + (k * 613) % (CORPUS_MAX_N - 2);
            let seed = 1000 + k as u64;
            if k % 2 == 0 {
                InstanceSpec::stacked(n, seed)
            } else {
                InstanceSpec::flipped(n, seed, 2 * n)
            }
        })
        .collect();
    specs.extend((3..=NESTED_MAX_N).map(InstanceSpec::nested));
    specs
}

fn serialize(g: &PlaneTriangulation, spec: &InstanceSpec) -> String {
    let mut s = format!("graph v1\nsource {spec}\nn {}\n", g.node_count());
    let [a, b, c] = g.exterior();
    let _ = writeln!(s, "exterior {a} {b} {c}");
    for v in 0..g.node_count() {
        let _ = write!(s, "{v}:");
        for u in g.neighbors(v) {
            let _ = write!(s, " {u}");
        }
        s.push('\n');
    }
    s.push_str("end\n");
    s
}

fn criterion_1(runs: &[Run], start: Instant) -> Outcome {
    let mut bad = Vec::new();
    let mut shapes = [0usize; 5];
    for r in runs {
        let rep = check_shapes(&r.plan);
        for (k, c) in rep.shapes.iter().enumerate() {
            shapes[k] += c;
        }
        if !rep.pass() {
            bad.push(format!("{}: {}", r.spec, rep.summary()));
        }
    }
    let elapsed = start.elapsed();
    let zo = shapes[ShapeTag::Z as usize] + shapes[ShapeTag::Other as usize];
    let pass = bad.is_empty() && zo == 0 && elapsed < SHAPE_TIME_LIMIT;
    outcome(
        pass,
        format!(
            "{} plans, I={} L={} T={} Z={} Other={}, shape failures {}, {:.2?} (limit {:?}){}",
            runs.len(),
            shapes[0],
            shapes[1],
            shapes[2],
            shapes[3],
            shapes[4],
            bad.len(),
            elapsed,
            SHAPE_TIME_LIMIT,
            bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()
        ),
    )
}

fn criterion_2(runs: &[Run]) -> Outcome {
    let mut height_bad = 0;
    let mut width_bad = 0;
    for r in runs {
        let n = r.graph.node_count();
        if r.plan.height() as usize > n - 1 {
            height_bad += 1;
            println!("  height violation: {}", r.spec);
        }
        if r.plan.width() as usize > leaf_bound(n) || r.plan.width() as usize != r.leaves {
            width_bad += 1;
            let path = std::env::temp_dir().join(format!("width-violation-{}.txt", r.spec.to_string().replace([' ', '='], "_")));
            let _ = fs::write(&path, serialize(&r.graph, &r.spec));
            println!("  width violation: {} (W={}, bound {}), saved to {}", r.spec, r.plan.width(), leaf_bound(n), path.display());
        }
    }
    outcome(height_bad == 0 && width_bad == 0, format!("H > n-1 in {height_bad} runs, W > floor((2n+1)/3) in {width_bad} runs"))
}

fn criterion_3(runs: &[Run]) -> Outcome {
    let mut bad = Vec::new();
    for r in runs {
        let mut rep = check_partition(&r.plan);
        rep.merge(check_adjacency(&r.plan, &r.graph));
        let adj = rasterize(&r.plan).0.map(|x| x.adjacency().len()).unwrap_or(0);
        if !rep.pass() || adj != 3 * r.graph.node_count() - 6 || r.graph.edge_count() != adj {
            bad.push(format!("{}: {}", r.spec, rep.summary()));
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} plans, {} with gaps, overlaps or adjacency mismatches{}", runs.len(), bad.len(), bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()),
    )
}

fn criterion_4() -> Outcome {
    let (g, parent, expected) = twelve_node_sample();
    let t = match OrderlySpanningTree::annotate(&g, &SpanningTree { root: 0, parent }) {
        Ok(t) => t,
        Err(e) => return outcome(false, format!("tree rejected: {e}")),
    };
    let annotations = (t.parent_label(3), t.leaves_below(3), t.left_contact(3), t.right_contact(3), t.leaf_count());
    let fp = match floorplan_with_tree(&g, &t) {
        Ok(fp) => fp,
        Err(e) => return outcome(false, format!("pipeline failed: {e}")),
    };
    let raster = rasterize(&fp).0;
    let cells_match = raster.is_some_and(|r| {
        expected.iter().enumerate().all(|(y, row)| {
            row.iter().enumerate().all(|(x, &v)| r.owner(x as u32, y as u32) == Some(v as usize - 1))
        })
    });
    let size = (fp.height(), fp.width());
    let pass = annotations == (1, 2, 2, 9, 8) && size == (9, 8) && size.0 <= 11;
    outcome(
        pass,
        format!(
            "p(3)={} w(3)={} l(3)={} r(3)={} leaves={}, plan {}x{} (expected exactly 9x8, bound 11x8), cells {}",
            annotations.0,
            annotations.1,
            annotations.2,
            annotations.3,
            annotations.4,
            size.0,
            size.1,
            if cells_match { "as drawn" } else { "differ from the drawing" }
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut compared = 0usize;
    let mut values = 0usize;
    let mut bad = Vec::new();
    for n in 3..=DP_MAX_N {
        for seed in 0..DP_SEEDS {
            let spec = if seed % 2 == 0 { InstanceSpec::stacked(n, seed) } else { InstanceSpec::flipped(n, seed, 2 * n) };
            let g = spec.generate().unwrap();
            for t in candidate_osts(&g).unwrap() {
                compared += 1;
                let d = stretch_to_two_visibility(&g, &t, &visibility_drawing_of_tree(&g, &t)).unwrap();
                let naive = match naive_stretch(&g, &t) {
                    Ok(x) => x,
                    Err(e) => {
                        bad.push(format!("{spec}: oracle {e}"));
                        continue;
                    }
                };
                let nodes: Vec<u32> = (0..n).map(|v| d.bottom(v)).collect();
                let mut edges: Vec<_> = d
                    .edge_bottoms(&g)
                    .map(|(a, b, y)| if t.label(a) < t.label(b) { (a, b, y) } else { (b, a, y) })
                    .collect();
                edges.sort_unstable();
                values += nodes.len() + edges.len();
                if nodes != naive.bottom || edges != naive.edge_rows {
                    bad.push(format!("{spec} root {}", t.root()));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{compared} trees on n=3..{DP_MAX_N} x {DP_SEEDS} seeds, {values} values, {} mismatches (exact){}", bad.len(), bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let k3 = InstanceSpec::nested(3).generate().unwrap();
    let k4 = InstanceSpec::nested(4).generate().unwrap();
    let k3_fits = matches!(brute_force_min_area(&k3, 2, 2, BRUTE_BUDGET), Ok(BruteForce::Feasible(ref s)) if s.contains(&(2, 2)));
    let mut notes = Vec::new();
    let mut k4_none = true;
    for (h, w) in [(2, 8), (8, 2), (1, 16), (16, 1)] {
        match brute_force_min_area(&k4, h, w, BRUTE_BUDGET) {
            Ok(BruteForce::Infeasible) => {}
            Ok(BruteForce::Feasible(s)) => {
                k4_none = false;
                notes.push(format!("K4 fits {s:?}"));
            }
            Err(e) => {
                k4_none = false;
                notes.push(format!("{h}x{w}: {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        k3_fits && k4_none && elapsed < BRUTE_TIME_LIMIT,
        format!(
            "K3 at 2x2 {}, K4 with min side <= 2 (up to 16 cells) {}, {:.2?} (limit {:?}){}",
            if k3_fits { "feasible" } else { "NOT feasible" },
            if k4_none { "infeasible" } else { "NOT ruled out" },
            elapsed,
            BRUTE_TIME_LIMIT,
            notes.iter().map(|x| format!("; {x}")).collect::<String>()
        ),
    )
}

fn criterion_7(runs: &[Run]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut tightest = i64::MAX;
    for r in runs.iter().filter(|r| r.spec.kind == floorplan_core::instances::InstanceKind::NestedTriangles) {
        checked += 1;
        let b = lower_bound_predicate(r.graph.node_count(), r.plan.height() as usize, r.plan.width() as usize);
        tightest = tightest.min(b.min_side_margin.min(b.side_sum_margin));
        if !b.satisfied() {
            bad.push(format!("{} gives {}x{}", r.spec, r.plan.height(), r.plan.width()));
        }
    }
    outcome(
        bad.is_empty() && checked == NESTED_MAX_N - 2,
        format!("{checked} nested plans, {} below the lower bounds, smallest margin {tightest}{}", bad.len(), bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()),
    )
}

fn time_plan(bin: &str, input: &Path, out: &Path) -> Result<Duration, String> {
    let mut best = Duration::MAX;
    for _ in 0..TIMING_RUNS {
        let start = Instant::now();
        let o = Command::new(bin).arg("plan").arg(input).arg("--out").arg(out).output().map_err(|e| e.to_string())?;
        let t = start.elapsed();
        if !o.status.success() {
            return Err(String::from_utf8_lossy(&o.stderr).into_owned());
        }
        best = best.min(t);
    }
    Ok(best)
}

fn criterion_8(dir: &Path) -> Outcome {
    let bin = env!("CARGO_BIN_EXE_floorplan");
    let mut times = Vec::new();
    for n in [10_000usize, 100_000, 1_000_000] {
        let g = dir.join(format!("g{n}.txt"));
        let gen = Command::new(bin)
            .args(["gen", "--kind", "flipped", "--n", &n.to_string(), "--seed", "8", "--out"])
            .arg(&g)
            .status();
        if !matches!(gen, Ok(s) if s.success()) {
            return outcome(false, format!("gen failed at n={n}"));
        }
        match time_plan(bin, &g, &dir.join(format!("p{n}.txt"))) {
            Ok(t) => times.push((n, t)),
            Err(e) => return outcome(false, format!("plan failed at n={n}: {e}")),
        }
        let _ = fs::remove_file(&g);
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1].1.as_secs_f64() / w[0].1.as_secs_f64()).collect();
    let limit = 10.0 * LINEAR_SLACK;
    outcome(
        ratios.iter().all(|&r| r <= limit),
        format!(
            "best of {TIMING_RUNS}: {}; decade ratios {} (limit {limit})",
            times.iter().map(|(n, t)| format!("n={n} {:.3}s", t.as_secs_f64())).collect::<Vec<_>>().join(", "),
            ratios.iter().map(|r| format!("{r:.1}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn criterion_9(dir: &Path) -> Outcome {
    let bin = env!("CARGO_BIN_EXE_floorplan");
    let g = dir.join("det.txt");
    let ok = Command::new(bin).args(["gen", "--kind", "flipped", "--n", "3000", "--seed", "9", "--out"]).arg(&g).status();
    if !matches!(ok, Ok(s) if s.success()) {
        return outcome(false, "gen failed");
    }
    let mut outputs = Vec::new();
    for k in 0..2 {
        let (p, s) = (dir.join(format!("det{k}.plan")), dir.join(format!("det{k}.svg")));
        let o = Command::new(bin).arg("plan").arg(&g).arg("--validate").arg("--out").arg(&p).arg("--render").arg(&s).output();
        match o {
            Ok(o) if o.status.success() => outputs.push((fs::read(&p).unwrap(), fs::read(&s).unwrap())),
            _ => return outcome(false, "plan --validate --render failed"),
        }
    }
    let same = outputs[0] == outputs[1];
    outcome(same, format!("plan {} bytes, svg {} bytes, {}", outputs[0].0.len(), outputs[0].1.len(), if same { "byte-identical" } else { "DIFFERENT" }))
}

fn main() {
    let start = Instant::now();
    let runs: Vec<Run> = corpus_specs()
        .into_iter()
        .map(|spec| {
            let graph = spec.generate().unwrap();
            let t = min_leaf_ost(&graph).unwrap();
            let plan = floorplan_with_tree(&graph, &t).unwrap_or_else(|e| panic!("{spec}: {e}"));
            Run { spec, leaves: t.leaf_count(), graph, plan }
        })
        .collect();
    let c1 = criterion_1(&runs, start);
    let dir = tempfile::tempdir().unwrap();
    let results = [
        c1,
        criterion_2(&runs),
        criterion_3(&runs),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(&runs),
        criterion_8(dir.path()),
        criterion_9(dir.path()),
    ];
    let mut failed = 0;
    for (k, r) in results.iter().enumerate() {
        println!("criterion {}: {} {}", k + 1, if r.pass { "PASS" } else { "FAIL" }, r.detail);
        failed += usize::from(!r.pass);
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
