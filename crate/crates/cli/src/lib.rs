//! Command-line front end for `canonenum`: parse a graph document, run an
//! enumerator or a drawing, and stream NDJSON, a count, or SVG.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::ops::ControlFlow;
use std::path::PathBuf;
use std::thread;

use canonenum::fpp::canonical_drawing;
use canonenum::ice::{canonical_orientations, count_orientations, profile_delay};
use canonenum::oracle::{
    brute_force_orderings, brute_force_orientations, check_planar_straightline, OracleError, OrientationSet,
};
use canonenum::orderings::topological_sortings;
use canonenum::plane_graph::{parse_graph, random_stacked_triangulation, random_triangulation, GraphError};
use canonenum::schnyder::{schnyder_draw, wood_from_orientation};
use canonenum::{GridDrawing, MaximalPlaneGraph, Rooting, VertexId};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use svg::node::element::{Circle, Element, Group, Line, Text};
use svg::node::Node;
use svg::Document;
use thiserror::Error;

/// Grid unit in SVG user units.
const SCALE: i64 = 40;
const MARGIN: i64 = 40;

#[derive(Debug, Parser)]
#[command(name = "canonenum", version, about = "Enumerate canonical orientations, orderings, Schnyder woods and grid drawings of plane triangulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stream every solution of the given kind.
    Enumerate {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        run: RunArgs,
        /// Cross-check each rooting against brute force (small graphs only).
        #[arg(long)]
        verify: bool,
    },
    /// Emit grid drawings, validated for planarity.
    Draw {
        #[arg(value_enum)]
        kind: DrawKind,
        #[command(flatten)]
        run: RunArgs,
        /// Emit only the first drawing.
        #[arg(long)]
        first: bool,
    },
    /// Measure per-output cost on stacked triangulations.
    BenchDelay {
        #[arg(long, value_delimiter = ',', default_values_t = [1000, 2000, 4000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print a random stacked triangulation document.
    Generate {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random edge flips applied after stacking.
        #[arg(long, default_value_t = 0)]
        flips: usize,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Graph document; stdin when absent or `-`.
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::PlaneRooted)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Ndjson)]
    pub format: Format,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub limit: Option<u64>,
    /// Worker threads for the rootings of plane and planar mode.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Orientations,
    Orderings,
    Woods,
    FppDrawings,
    SchnyderDrawings,
}

impl Kind {
    fn is_drawing(self) -> bool {
        matches!(self, Kind::FppDrawings | Kind::SchnyderDrawings)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DrawKind {
    Fpp,
    Schnyder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// The outer triple as given, first vertex `u`.
    PlaneRooted,
    /// Each of the three outer vertices as first vertex.
    Plane,
    /// Every rooting of the underlying planar graph, each in plane mode.
    Planar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ndjson,
    Count,
    Svg,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Input { path: String, source: io::Error },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("size guard: {0}")]
    SizeGuard(#[from] OracleError),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("write failed: {0}")]
    Output(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::SizeGuard(_) => 2,
            _ => 1,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(&cli, &mut io::stdin().lock(), &mut out).and_then(|()| flush(&mut out));
    match result {
        Ok(()) => 0,
        Err(CliError::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("canonenum: {e}");
            e.exit_code()
        }
    }
}

fn flush(out: &mut impl Write) -> Result<(), CliError> {
    match out.flush() {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Output(e)),
        _ => Ok(()),
    }
}

pub fn run(cli: &Cli, stdin: &mut impl Read, out: &mut impl Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Enumerate { kind, run, verify } => {
            if run.format == Format::Svg && !kind.is_drawing() {
                return Err(CliError::Usage("svg output needs a drawing kind".into()));
            }
            let g = read_graph(run.input.as_ref(), stdin)?;
            let jobs = jobs(&g, run.mode);
            if *verify {
                for job in &jobs {
                    verify_job(&job.build(&g), *kind)?;
                }
            }
            enumerate(&g, &jobs, *kind, run, run.limit, false, out)
        }
        Command::Draw { kind, run, first } => {
            if run.format == Format::Count {
                return Err(CliError::Usage("draw writes ndjson or svg".into()));
            }
            let g = read_graph(run.input.as_ref(), stdin)?;
            let kind = match kind {
                DrawKind::Fpp => Kind::FppDrawings,
                DrawKind::Schnyder => Kind::SchnyderDrawings,
            };
            let limit = if *first { Some(1) } else { run.limit };
            enumerate(&g, &jobs(&g, run.mode), kind, run, limit, true, out)
        }
        Command::BenchDelay { sizes, limit, seed } => bench_delay(sizes, *limit, *seed, out),
        Command::Generate { n, seed, flips } => {
            if *n < 3 {
                return Err(CliError::Usage(format!("need n >= 3, got {n}")));
            }
            let g = if *flips == 0 { random_stacked_triangulation(*n, *seed) } else { random_triangulation(*n, *flips, *seed) };
            writeln!(out, "{}", g.to_json()).map_err(CliError::Output)
        }
    }
}

fn read_graph(path: Option<&PathBuf>, stdin: &mut impl Read) -> Result<MaximalPlaneGraph, CliError> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).map_err(|source| CliError::Input { path: p.display().to_string(), source })?;
        }
        _ => {
            stdin
                .read_to_string(&mut text)
                .map_err(|source| CliError::Input { path: "stdin".into(), source })?;
        }
    }
    Ok(parse_graph(&text)?)
}

/// One rooted run: an optional rooting of the input and a first-vertex shift.
#[derive(Debug, Clone, Copy)]
struct Job {
    rooting: Option<Rooting>,
    first: usize,
    tagged: bool,
}

impl Job {
    fn build(&self, g: &MaximalPlaneGraph) -> MaximalPlaneGraph {
        match &self.rooting {
            Some(r) => g.reroot(r),
            None => g.clone(),
        }
        .with_first_vertex(self.first)
    }

    fn tag(&self, g: &MaximalPlaneGraph) -> Option<Value> {
        self.tagged.then(|| {
            let outer = self.build(g).outer();
            json!({ "outer": outer, "reflected": self.rooting.is_some_and(|r| r.reflected) })
        })
    }
}

fn jobs(g: &MaximalPlaneGraph, mode: Mode) -> Vec<Job> {
    match mode {
        Mode::PlaneRooted => vec![Job { rooting: None, first: 0, tagged: false }],
        Mode::Plane => (0..3).map(|first| Job { rooting: None, first, tagged: true }).collect(),
        Mode::Planar => g
            .enumerate_rootings()
            .into_iter()
            .flat_map(|r| (0..3).map(move |first| Job { rooting: Some(r), first, tagged: true }))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Item {
    Orientation(Vec<[VertexId; 2]>),
    Ordering(Vec<VertexId>),
    Wood(Vec<(VertexId, VertexId, u8)>),
    Drawing(GridDrawing),
}

impl Item {
    fn to_json(&self, tag: Option<&Value>) -> Value {
        let mut v = match self {
            Item::Orientation(edges) => json!({ "edges": edges }),
            Item::Ordering(seq) => json!({ "order": seq }),
            Item::Wood(edges) => json!({ "edges": edges.iter().map(|&(a, b, c)| [a, b, c as usize]).collect::<Vec<_>>() }),
            Item::Drawing(d) => json!({ "coords": d.pairs() }),
        };
        if let Some(tag) = tag {
            v["rooting"] = tag.clone();
        }
        v
    }
}

/// Calls `f` with each solution of one rooted graph until it breaks.
fn produce(
    g: &MaximalPlaneGraph,
    kind: Kind,
    validate: bool,
    f: &mut dyn FnMut(Item) -> ControlFlow<()>,
) -> Result<(), CliError> {
    let checked = |d: GridDrawing| -> Result<Item, CliError> {
        if validate {
            check_planar_straightline(g, &d).map_err(internal)?;
        }
        Ok(Item::Drawing(d))
    };
    for d in canonical_orientations(g) {
        let flow = match kind {
            Kind::Orientations => f(Item::Orientation(d.directed_edges(g))),
            Kind::Orderings => topological_sortings(g, &d, |s| f(Item::Ordering(s.to_vec()))).map_err(internal)?,
            Kind::Woods => f(Item::Wood(wood_from_orientation(g, &d).map_err(internal)?.colored_edges(g))),
            Kind::FppDrawings => f(checked(canonical_drawing(g, &d).map_err(internal)?)?),
            Kind::SchnyderDrawings => {
                let wd = wood_from_orientation(g, &d).map_err(internal)?;
                f(checked(schnyder_draw(g, &wd).map_err(internal)?)?)
            }
        };
        if flow.is_break() {
            break;
        }
    }
    Ok(())
}

/// Counts the solutions of one rooted graph, up to `cap`.
fn count_job(g: &MaximalPlaneGraph, kind: Kind, cap: Option<u64>) -> Result<u64, CliError> {
    if kind == Kind::Orientations {
        return Ok(count_orientations(g, cap));
    }
    let mut count = 0;
    produce(g, kind, false, &mut |_| {
        count += 1;
        if cap.is_some_and(|c| count >= c) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(count)
}

enum Sink<'a, W: Write> {
    Ndjson(&'a mut W),
    Count(u64),
    Svg(Vec<GridDrawing>),
}

struct Emitter<'a, W: Write> {
    sink: Sink<'a, W>,
    emitted: u64,
    limit: Option<u64>,
    error: Option<io::Error>,
}

impl<W: Write> Emitter<'_, W> {
    fn remaining(&self) -> Option<u64> {
        self.limit.map(|l| l - self.emitted)
    }

    fn full(&self) -> bool {
        self.remaining() == Some(0) || self.error.is_some()
    }

    fn emit(&mut self, item: Item, tag: Option<&Value>) -> ControlFlow<()> {
        match &mut self.sink {
            Sink::Ndjson(w) => {
                if let Err(e) = writeln!(w, "{}", item.to_json(tag)) {
                    self.error = Some(e);
                }
            }
            Sink::Count(c) => *c += 1,
            Sink::Svg(all) => match item {
                Item::Drawing(d) => all.push(d),
                _ => unreachable!("svg is rejected for non-drawing kinds"),
            },
        }
        self.emitted += 1;
        if self.full() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }

    fn add_count(&mut self, n: u64) {
        let n = self.remaining().map_or(n, |r| n.min(r));
        if let Sink::Count(c) = &mut self.sink {
            *c += n;
        }
        self.emitted += n;
    }
}

fn enumerate<W: Write>(
    g: &MaximalPlaneGraph,
    jobs: &[Job],
    kind: Kind,
    run: &RunArgs,
    limit: Option<u64>,
    validate: bool,
    out: &mut W,
) -> Result<(), CliError> {
    let format = run.format;
    let mut em = Emitter {
        sink: match format {
            Format::Ndjson => Sink::Ndjson(out),
            Format::Count => Sink::Count(0),
            Format::Svg => Sink::Svg(Vec::new()),
        },
        emitted: 0,
        limit,
        error: None,
    };
    let threads = usize::try_from(run.threads).unwrap_or(usize::MAX).max(1);
    if threads == 1 || jobs.len() == 1 {
        for job in jobs {
            if em.full() {
                break;
            }
            let h = job.build(g);
            if format == Format::Count {
                let n = count_job(&h, kind, em.remaining())?;
                em.add_count(n);
            } else {
                let tag = job.tag(g);
                produce(&h, kind, validate, &mut |item| em.emit(item, tag.as_ref()))?;
            }
        }
    } else {
        // Waves of `threads` rootings; each wave is merged in rooting order.
        for wave in jobs.chunks(threads) {
            if em.full() {
                break;
            }
            let cap = em.remaining();
            let results: Vec<Result<(u64, Vec<Item>), CliError>> = thread::scope(|scope| {
                let handles: Vec<_> = wave
                    .iter()
                    .map(|job| {
                        scope.spawn(move || {
                            let h = job.build(g);
                            if format == Format::Count {
                                return Ok((count_job(&h, kind, cap)?, Vec::new()));
                            }
                            let mut items = Vec::new();
                            produce(&h, kind, validate, &mut |item| {
                                items.push(item);
                                if cap.is_some_and(|c| items.len() as u64 >= c) {
                                    ControlFlow::Break(())
                                } else {
                                    ControlFlow::Continue(())
                                }
                            })?;
                            Ok((0, items))
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
            });
            for (job, result) in wave.iter().zip(results) {
                let (count, items) = result?;
                if format == Format::Count {
                    em.add_count(count);
                    continue;
                }
                let tag = job.tag(g);
                for item in items {
                    if em.emit(item, tag.as_ref()).is_break() {
                        break;
                    }
                }
                if em.full() {
                    break;
                }
            }
        }
    }
    if let Some(e) = em.error {
        return if e.kind() == io::ErrorKind::BrokenPipe { Ok(()) } else { Err(CliError::Output(e)) };
    }
    match em.sink {
        Sink::Ndjson(_) => Ok(()),
        Sink::Count(c) => writeln!(out, "{c}").map_err(CliError::Output),
        Sink::Svg(all) => {
            let doc = render_svg(g, &all);
            writeln!(out, "{doc}").map_err(CliError::Output)
        }
    }
}

fn verify_job(g: &MaximalPlaneGraph, kind: Kind) -> Result<(), CliError> {
    let oracle = brute_force_orientations(g)?;
    let mut ours = OrientationSet::new();
    for d in canonical_orientations(g) {
        if !ours.insert(&d) {
            return Err(CliError::Verify(format!("duplicate orientation with outer {:?}", g.outer())));
        }
    }
    if ours != oracle {
        return Err(CliError::Verify(format!(
            "{} orientations with outer {:?}, brute force finds {}",
            ours.len(),
            g.outer(),
            oracle.len()
        )));
    }
    if kind == Kind::Orderings {
        let oracle = brute_force_orderings(g)?;
        let mut ours = std::collections::BTreeSet::new();
        produce(g, kind, false, &mut |item| {
            if let Item::Ordering(s) = item {
                ours.insert(s);
            }
            ControlFlow::Continue(())
        })?;
        if ours != oracle {
            return Err(CliError::Verify(format!("orderings with outer {:?} differ from brute force", g.outer())));
        }
    }
    Ok(())
}

/// All drawings stacked top to bottom in one document, one group each.
/// The grid origin is at the bottom left of its group.
pub fn render_svg(g: &MaximalPlaneGraph, drawings: &[GridDrawing]) -> Document {
    let width = drawings.iter().map(|d| d.max_x() * SCALE).max().unwrap_or(0) + 2 * MARGIN;
    let mut doc = Document::new();
    let mut top = 0;
    for (i, d) in drawings.iter().enumerate() {
        let max_y = d.max_y();
        let at = |v: VertexId| {
            let p = d.point(v);
            (MARGIN + p.x * SCALE, MARGIN + (max_y - p.y) * SCALE)
        };
        let coords = serde_json::to_string(&d.pairs()).expect("serializable");
        let mut meta = Element::new("metadata");
        meta.append(svg::node::Text::new(coords.clone()));
        let mut group = Group::new()
            .set("id", format!("drawing-{i}"))
            .set("transform", format!("translate(0,{top})"))
            .set("data-coords", coords)
            .add(meta);
        for &[a, b] in g.edges() {
            let ((x1, y1), (x2, y2)) = (at(a), at(b));
            group = group.add(
                Line::new()
                    .set("x1", x1)
                    .set("y1", y1)
                    .set("x2", x2)
                    .set("y2", y2)
                    .set("stroke", "black"),
            );
        }
        for v in 0..g.n() {
            let (x, y) = at(v);
            group = group
                .add(Circle::new().set("cx", x).set("cy", y).set("r", 10).set("fill", "white").set("stroke", "black"))
                .add(
                    Text::new(v.to_string())
                        .set("x", x)
                        .set("y", y)
                        .set("text-anchor", "middle")
                        .set("dominant-baseline", "central")
                        .set("font-size", 12),
                );
        }
        doc = doc.add(group);
        top += max_y * SCALE + 2 * MARGIN;
    }
    doc.set("width", width).set("height", top).set("viewBox", (0, 0, width, top))
}

fn bench_delay(sizes: &[usize], limit: u64, seed: u64, out: &mut impl Write) -> Result<(), CliError> {
    if let Some(n) = sizes.iter().find(|&&n| n < 3) {
        return Err(CliError::Usage(format!("sizes must be >= 3, got {n}")));
    }
    let w = |r: io::Result<()>| r.map_err(CliError::Output);
    w(writeln!(
        out,
        "{:>8} {:>8} {:>10} {:>10} {:>10} {:>6} {:>12} {:>12}",
        "n", "outputs", "setup_ops", "max_ops", "med_ops", "ratio", "max_ns", "med_ns"
    ))?;
    let mut prev: Option<u64> = None;
    for &n in sizes {
        let g = random_stacked_triangulation(n, seed);
        let p = profile_delay(&g, usize::try_from(limit).unwrap_or(usize::MAX));
        let max_ops = p.max_ops();
        let ratio = prev.filter(|&q| q > 0).map_or("-".to_string(), |q| format!("{:.2}", max_ops as f64 / q as f64));
        w(writeln!(
            out,
            "{:>8} {:>8} {:>10} {:>10} {:>10} {:>6} {:>12} {:>12}",
            n,
            p.ops_per_output.len(),
            p.setup_ops,
            max_ops,
            median(&p.ops_per_output),
            ratio,
            p.nanos_per_output.iter().max().copied().unwrap_or(0),
            median(&p.nanos_per_output)
        ))?;
        prev = Some(max_ops);
    }
    Ok(())
}

fn median(xs: &[u64]) -> u64 {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.get(v.len() / 2).copied().unwrap_or(0)
}
