//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines reach stdout uncaptured and in order.

use std::alloc::{GlobalAlloc, Layout, System};
use std::collections::{BTreeSet, HashSet};
use std::io::Write;
use std::ops::ControlFlow;
use std::panic;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use canonenum::fixtures::{self, octa};
use canonenum::fpp::{canonical_drawing, fpp_draw};
use canonenum::ice::{canonical_orientations, count_orientations, profile_delay, CaseLabel, WellFormedGraph};
use canonenum::oracle::{brute_force_orderings, brute_force_orientations, check_planar_straightline, OrientationSet};
use canonenum::orderings::{is_canonical_ordering, topological_sortings};
use canonenum::plane_graph::{random_stacked_triangulation, random_triangulation};
use canonenum::schnyder::{decode_wood, region_face_counts, schnyder_draw, validate_wood, wood_from_orientation};
use canonenum::{GridDrawing, MaximalPlaneGraph};
use canonenum_cli::Cli;
use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Counting;

static LIVE: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let now = LIVE.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        LIVE.fetch_sub(layout.size(), Ordering::Relaxed);
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            LIVE.fetch_sub(layout.size(), Ordering::Relaxed);
            let now = LIVE.fetch_add(new_size, Ordering::Relaxed) + new_size;
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

/// Peak live bytes above the starting level while `f` runs.
fn peak_bytes<R>(f: impl FnOnce() -> R) -> (usize, R) {
    let base = LIVE.load(Ordering::Relaxed);
    PEAK.store(base, Ordering::Relaxed);
    let r = f();
    (PEAK.load(Ordering::Relaxed) - base, r)
}

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !($cond) {
            return Err(format!($($fmt)+));
        }
    };
}

/// Per-graph cap on orientations examined in the drawing criteria.
const PER_GRAPH: usize = 200;

fn named() -> Vec<(String, MaximalPlaneGraph)> {
    fixtures::named().into_iter().map(|(n, g)| (n.to_string(), g)).collect()
}

fn drawing_corpus() -> Vec<MaximalPlaneGraph> {
    let mut out: Vec<MaximalPlaneGraph> = named().into_iter().map(|(_, g)| g).collect();
    out.extend(fixtures::random_corpus(30, 9, 50, 4000));
    out.extend(fixtures::random_flipped_corpus(30, 9, 50, 5000));
    out
}

fn ice_set(g: &MaximalPlaneGraph) -> Result<OrientationSet, String> {
    let mut set = OrientationSet::new();
    for d in canonical_orientations(g) {
        ensure!(set.insert(&d), "duplicate orientation");
    }
    Ok(set)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    for (name, g) in named() {
        for r in g.enumerate_rootings() {
            let h = g.reroot(&r);
            ensure!(ice_set(&h)? == brute_force_orientations(&h).unwrap(), "{name} under {r:?}");
            runs += 1;
        }
    }
    for (i, g) in fixtures::random_corpus(50, 3, 8, 1000).iter().enumerate() {
        ensure!(ice_set(g)? == brute_force_orientations(g).unwrap(), "stacked#{i}");
        runs += 1;
    }
    let mut solutions = 0;
    for (i, g) in fixtures::random_flipped_corpus(30, 5, 7, 1500).iter().enumerate() {
        for r in g.enumerate_rootings() {
            let h = g.reroot(&r);
            let ours = ice_set(&h)?;
            solutions += ours.len();
            ensure!(ours == brute_force_orientations(&h).unwrap(), "flipped#{i} under {r:?}");
            runs += 1;
        }
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(30), "took {t:.1?}, limit 30 s");
    Ok(format!("{runs} rooted graphs equal brute force, {solutions} flipped-graph solutions, {t:.1?}"))
}

fn criterion_2() -> Outcome {
    ensure!(count_orientations(&fixtures::triangle(), None) == 1, "triangle");
    ensure!(count_orientations(&fixtures::k4(), None) == 1, "K4");
    let g = fixtures::octahedron();
    let all: Vec<_> = canonical_orientations(&g).collect();
    ensure!(all.len() == 2, "octahedron has {}", all.len());
    let diff: Vec<usize> = (0..g.edge_count()).filter(|&e| all[0].forward[e] != all[1].forward[e]).collect();
    ensure!(diff == vec![g.edge_between(octa::A, octa::C).unwrap()], "octahedron differs in edges {diff:?}");
    Ok("triangle 1, K4 1, octahedron 2 differing only in a-c".into())
}

fn criterion_3() -> Outcome {
    let mut graphs = named();
    for g in fixtures::random_flipped_corpus(20, 5, 7, 3000) {
        graphs.extend(g.enumerate_rootings().iter().map(|r| ("flipped".to_string(), g.reroot(r))));
    }
    let mut checked = 0;
    for (name, g) in graphs.into_iter().filter(|(_, g)| g.n() <= 7) {
        let mut ours = BTreeSet::new();
        for d in canonical_orientations(&g) {
            let _ = topological_sortings::<()>(&g, &d, |s| {
                ours.insert(s.to_vec());
                ControlFlow::Continue(())
            });
        }
        for s in &ours {
            ensure!(is_canonical_ordering(&g, s).is_ok(), "{name}: {s:?} rejected");
        }
        ensure!(ours == brute_force_orderings(&g).unwrap(), "{name}: sets differ");
        checked += ours.len();
    }
    Ok(format!("{checked} orderings equal brute force"))
}

fn criterion_4() -> Outcome {
    let (mut fpp, mut sch, mut regions) = (0, 0, 0);
    for g in drawing_corpus() {
        let n = g.n() as i64;
        for d in canonical_orientations(&g).take(PER_GRAPH) {
            let dr: GridDrawing = canonical_drawing(&g, &d).unwrap();
            check_planar_straightline(&g, &dr).map_err(|e| format!("fpp n={n}: {e}"))?;
            ensure!(dr.min_coord() >= 0 && dr.max_x() <= 2 * n - 4 && dr.max_y() <= n - 2, "fpp n={n} out of grid");
            fpp += 1;
            let wd = wood_from_orientation(&g, &d).unwrap();
            validate_wood(&g, &wd).map_err(|e| e.to_string())?;
            let sd: GridDrawing = schnyder_draw(&g, &wd).unwrap();
            check_planar_straightline(&g, &sd).map_err(|e| format!("schnyder n={n}: {e}"))?;
            ensure!(sd.min_coord() >= 0 && sd.max_x() <= 2 * n - 5 && sd.max_y() <= 2 * n - 5, "schnyder n={n} out of grid");
            sch += 1;
            for w in (0..g.n()).filter(|&w| !g.is_outer_vertex(w)) {
                let c = region_face_counts(&g, &wd, w).unwrap();
                ensure!(c.iter().sum::<usize>() == 2 * g.n() - 5, "regions {c:?} at {w}");
                regions += 1;
            }
        }
    }
    Ok(format!("{fpp} FPP and {sch} Schnyder drawings, {regions} region triples, up to {PER_GRAPH} per graph"))
}

fn criterion_5() -> Outcome {
    let g = fixtures::k4();
    let d = canonical_orientations(&g).next().unwrap();
    let dr: GridDrawing = canonical_drawing(&g, &d).unwrap();
    // u = 0, v = 1, z = 2, w = 3.
    ensure!(dr.pairs() == vec![[0, 0], [4, 0], [2, 2], [2, 1]], "K4 drawing {:?}", dr.pairs());
    let tri: GridDrawing = fpp_draw(&fixtures::triangle(), &[0, 1, 2]).unwrap();
    ensure!(tri.pairs() == vec![[0, 0], [2, 0], [1, 1]], "triangle drawing {:?}", tri.pairs());
    let mut checked = 0;
    for g in drawing_corpus() {
        let n = g.n() as i64;
        let [u, v, z] = g.outer();
        for d in canonical_orientations(&g).take(20) {
            let f: GridDrawing = canonical_drawing(&g, &d).unwrap();
            ensure!(f.point(u) == canonenum::GridPoint::new(0, 0), "v1 not at the origin");
            ensure!(f.point(v) == canonenum::GridPoint::new(2 * n - 4, 0), "v2 not at (2n-4, 0)");
            let s: GridDrawing = schnyder_draw(&g, &wood_from_orientation(&g, &d).unwrap()).unwrap();
            let corners = [s.point(u), s.point(v), s.point(z)].map(|p| [p.x, p.y]);
            ensure!(corners == [[0, 0], [2 * n - 5, 0], [0, 2 * n - 5]], "schnyder corners {corners:?}");
            checked += 1;
        }
    }
    Ok(format!("K4 and triangle exact; {checked} corpus drawings pin v1, v2 and the Schnyder corners"))
}

fn criterion_6() -> Outcome {
    let mut sortings = 0;
    let mut graphs = drawing_corpus();
    graphs.extend(fixtures::random_flipped_corpus(30, 6, 12, 6000));
    for g in graphs.iter().filter(|g| g.n() <= 12) {
        for d in canonical_orientations(g).take(PER_GRAPH) {
            let mut first: Option<GridDrawing> = None;
            let mut bad = false;
            let mut k = 0;
            let _ = topological_sortings(g, &d, |s| {
                let dr: GridDrawing = fpp_draw(g, s).unwrap();
                match &first {
                    None => first = Some(dr),
                    Some(f) => bad |= *f != dr,
                }
                k += 1;
                if bad || k >= 500 {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            ensure!(!bad, "two sortings of one orientation draw differently");
            sortings += k;
        }
    }
    let mut injective = 0;
    let mut decoded = 0;
    for g in &graphs {
        let mut seen = HashSet::new();
        for d in canonical_orientations(g).take(2000) {
            let dr: GridDrawing = canonical_drawing(g, &d).unwrap();
            ensure!(seen.insert(dr), "two orientations share an FPP drawing (n = {})", g.n());
            injective += 1;
        }
        for d in canonical_orientations(g).take(PER_GRAPH) {
            let wd = wood_from_orientation(g, &d).unwrap();
            let sd: GridDrawing = schnyder_draw(g, &wd).unwrap();
            ensure!(decode_wood(g, &sd).unwrap() == wd, "decoder disagrees (n = {})", g.n());
            decoded += 1;
        }
    }
    Ok(format!("(a) {sortings} sortings, (b) {injective} distinct drawings, (c) {decoded} woods decoded"))
}

fn criterion_7() -> Outcome {
    let mut graphs: Vec<MaximalPlaneGraph> = named().into_iter().map(|(_, g)| g).collect();
    graphs.extend(fixtures::random_corpus(20, 5, 8, 7000));
    graphs.extend(fixtures::random_flipped_corpus(20, 5, 8, 7100));
    let graphs: Vec<MaximalPlaneGraph> =
        graphs.iter().flat_map(|g| g.enumerate_rootings().into_iter().map(move |r| g.reroot(&r))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut steps = 0;
    for i in 0..10_000 {
        let g = &graphs[i % graphs.len()];
        let mut w = WellFormedGraph::new(g);
        let start = w.snapshot();
        let mut trail = Vec::new();
        loop {
            w.check_well_formed().map_err(|e| format!("descent {i}: {}", e.0))?;
            let remove = match w.detect_case() {
                CaseLabel::Base => break,
                CaseLabel::Contract => false,
                CaseLabel::Remove => true,
                CaseLabel::ContractAndRemove => rng.gen_bool(0.5),
            };
            let before = w.snapshot();
            let undo = if remove { Err(w.remove()) } else { Ok(w.contract()) };
            trail.push((before, undo));
            steps += 1;
        }
        while let Some((before, undo)) = trail.pop() {
            match undo {
                Ok(e1) => w.decontract(e1),
                Err(removed) => w.reinsert(&removed),
            }
            ensure!(w.snapshot() == before, "descent {i}: undo differs");
            w.check_well_formed().map_err(|e| format!("descent {i} undo: {}", e.0))?;
        }
        ensure!(w.snapshot() == start, "descent {i}: workspace not restored");
    }
    Ok(format!("10000 descents, {steps} surgery steps validated"))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let sizes = [1000usize, 2000, 4000];
    let mut report = Vec::new();
    for (label, limit, make) in [
        ("stacked", 100, random_stacked_triangulation as fn(usize, u64) -> MaximalPlaneGraph),
        ("flipped", 1000, |n, seed| random_triangulation(n, n, seed)),
    ] {
        let profiles: Vec<_> = sizes.iter().map(|&n| profile_delay(&make(n, 1), limit)).collect();
        for (i, w) in profiles.windows(2).enumerate() {
            let max_ratio = w[1].max_ops() as f64 / w[0].max_ops() as f64;
            let setup_ratio = w[1].setup_ops as f64 / w[0].setup_ops as f64;
            ensure!(max_ratio.le(&3.0), "{label} max-ops ratio {max_ratio:.2} at n = {}", sizes[i + 1]);
            ensure!(setup_ratio.le(&3.0), "{label} setup ratio {setup_ratio:.2} at n = {}", sizes[i + 1]);
        }
        let maxes: Vec<u64> = profiles.iter().map(|p| p.max_ops()).collect();
        let setups: Vec<u64> = profiles.iter().map(|p| p.setup_ops).collect();
        report.push(format!("{label} max ops {maxes:?}, setup {setups:?}"));
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(60), "took {t:.1?}, limit 60 s");
    Ok(report.join("; "))
}

fn run_cli(args: &[&str], input: &str) -> Result<String, String> {
    let cli = Cli::try_parse_from(std::iter::once("canonenum").chain(args.iter().copied())).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    canonenum_cli::run(&cli, &mut input.as_bytes(), &mut out).map_err(|e| e.to_string())?;
    String::from_utf8(out).map_err(|e| e.to_string())
}

fn criterion_9() -> Outcome {
    let g = fixtures::k4();
    let text = run_cli(&["enumerate", "orientations", "--mode", "planar"], &g.to_json())?;
    let lines: Vec<&str> = text.lines().collect();
    let distinct: HashSet<&str> = lines.iter().copied().collect();
    ensure!(lines.len() == 24, "{} records", lines.len());
    ensure!(distinct.len() == 24, "{} distinct records", distinct.len());
    let count = run_cli(&["enumerate", "orientations", "--mode", "planar", "--format", "count"], &g.to_json())?;
    ensure!(count.trim() == "24", "count mode printed {count}");
    let oracle: usize = g
        .enumerate_rootings()
        .iter()
        .flat_map(|r| (0..3).map(move |k| (r, k)))
        .map(|(r, k)| brute_force_orientations(&g.reroot(r).with_first_vertex(k)).unwrap().len())
        .sum();
    ensure!(oracle == 24, "brute force over rootings gives {oracle}");
    Ok("24 distinct (rooting, orientation) records; brute force agrees".into())
}

fn criterion_10() -> Outcome {
    let g = random_triangulation(60, 60, 0);
    let doc = g.to_json();
    let (one, c1) = peak_bytes(|| count_orientations(&g, Some(1)));
    let (all, call) = peak_bytes(|| count_orientations(&g, None));
    ensure!(c1 == 1 && call >= 10_000, "solution counts {c1} and {call}");
    ensure!(all <= 2 * one, "count_orientations peak {all} B vs {one} B for limit 1");
    let (it_one, _) = peak_bytes(|| canonical_orientations(&g).take(1).count());
    let (it_all, n_it) = peak_bytes(|| canonical_orientations(&g).count());
    ensure!(n_it as u64 == call, "iterator yields {n_it}");
    ensure!(it_all <= 2 * it_one, "iterator peak {it_all} B vs {it_one} B");
    let (cli_one, _) = peak_bytes(|| run_cli(&["enumerate", "woods", "--format", "count", "--limit", "1"], &doc));
    let (cli_all, out) = peak_bytes(|| run_cli(&["enumerate", "woods", "--format", "count"], &doc));
    ensure!(out? .trim() == call.to_string(), "cli wood count differs");
    ensure!(cli_all <= 2 * cli_one, "cli count peak {cli_all} B vs {cli_one} B");
    Ok(format!(
        "{call} solutions; peak bytes limit-1 vs all: counter {one}/{all}, iterator {it_one}/{it_all}, cli woods {cli_one}/{cli_all}"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "orientation oracle equivalence", criterion_1),
        (2, "fixed counts", criterion_2),
        (3, "ordering oracle equivalence", criterion_3),
        (4, "drawing validity", criterion_4),
        (5, "fixed coordinates", criterion_5),
        (6, "bijection properties", criterion_6),
        (7, "surgery reversibility", criterion_7),
        (8, "delay scaling", criterion_8),
        (9, "planar mode", criterion_9),
        (10, "streaming memory", criterion_10),
    ];
    let mut failed = 0;
    let stdout = std::io::stdout();
    for (k, name, check) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        let mut out = stdout.lock();
        match outcome {
            Ok(detail) => writeln!(out, "PASS criterion {k}: {name} ({detail}) [{t:.1?}]").unwrap(),
            Err(why) => {
                failed += 1;
                writeln!(out, "FAIL criterion {k}: {name}: {why} [{t:.1?}]").unwrap();
            }
        }
    }
    if failed > 0 {
        writeln!(stdout.lock(), "{failed} acceptance criteria failed").unwrap();
        std::process::exit(1);
    }
}
