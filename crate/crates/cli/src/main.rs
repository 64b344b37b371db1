//! `satcover`: trace binary images into digital paths, compute saturated
//! covers, export their arc graphs and run the randomized verification suite.

mod svg;
mod verify;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use satcover::predicate::REGISTRY;
use satcover::trace::{trace_component, BinaryImage, PbmError, TraceError};
use satcover::{
    brute_force_cover, build_arc_graph, complexity_probe, forward_cover, ssd_cover, Adjacency, CoverDocument,
    CoverError, DigitalPath, PathError, PredicateError, PredicateSpec, ProbeShape,
};

/// Exit status for unreadable or invalid input documents.
const EXIT_MALFORMED: u8 = 2;
/// Exit status when a component has more odd vertices than exact matching supports.
const EXIT_CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "satcover", version, about = "Saturated covers of digital paths")]
struct Cli {
    /// Print the registered predicates and exit.
    #[arg(long)]
    list_predicates: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace a PBM image into one path per connected component.
    Trace(TraceArgs),
    /// Compute the saturated cover of a path.
    Cover(CoverArgs),
    /// Export the arc intersection graph of a cover.
    Graph(GraphArgs),
    /// Run the randomized invariant suite.
    Verify(VerifyArgs),
    /// Count predicate calls on synthetic paths of growing size.
    Probe(ProbeArgs),
}

#[derive(Args, Debug, Clone)]
struct PredicateArgs {
    /// Registered predicate name (see --list-predicates).
    #[arg(long, default_value = "dss")]
    predicate: String,
    /// Predicate parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    params: Vec<(String, i64)>,
}

impl PredicateArgs {
    fn spec(&self) -> PredicateSpec {
        self.params.iter().fold(PredicateSpec::new(&self.predicate), |s, (k, v)| s.with(k, *v))
    }
}

fn parse_param(raw: &str) -> Result<(String, i64), String> {
    let (key, value) = raw.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got `{raw}`"))?;
    let value = value.trim().parse().map_err(|e| format!("parameter `{key}`: {e}"))?;
    Ok((key.trim().to_owned(), value))
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// PBM image (P1 or P4).
    image: PathBuf,
    #[arg(long, default_value = "8", value_parser = parse_adjacency)]
    adjacency: Adjacency,
    /// Directory for the output files; defaults to the image's directory.
    #[arg(long, short = 'o')]
    out_dir: Option<PathBuf>,
    /// Also write the curve graph of each component.
    #[arg(long)]
    emit_graph: bool,
    /// Render the image, its junctions and the traced paths.
    #[arg(long, value_name = "FILE")]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoverArgs {
    /// Path JSON document.
    path: PathBuf,
    #[command(flatten)]
    predicate: PredicateArgs,
    /// Reinterpret the path under this adjacency.
    #[arg(long, value_parser = parse_adjacency)]
    adjacency: Option<Adjacency>,
    /// Treat the path as closed.
    #[arg(long)]
    closed: bool,
    /// Use the forward-only sweep.
    #[arg(long)]
    forward: bool,
    /// Cross-check against the brute-force cover; nonzero exit on mismatch.
    #[arg(long)]
    oracle: bool,
    /// Cover JSON destination; stdout when absent.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
    /// Render the cover as arcs on a circle.
    #[arg(long, value_name = "FILE")]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Cover JSON document.
    cover: PathBuf,
    /// Graph JSON destination; stdout when absent.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
    /// Also write a Graphviz rendering.
    #[arg(long, value_name = "FILE")]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Number of random paths.
    #[arg(long, default_value_t = 200)]
    paths: usize,
    /// Largest path, in points; the brute-force oracle bounds it.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..=200))]
    max_points: u64,
    /// Restrict the suite to one predicate.
    #[arg(long)]
    predicate: Option<String>,
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    params: Vec<(String, i64)>,
    /// Randomized conservativity trials per predicate.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Shape {
    Circle,
    Line,
    Walk,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[command(flatten)]
    predicate: PredicateArgs,
    /// Requested path sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [1_000usize, 10_000, 100_000])]
    sizes: Vec<usize>,
    #[arg(long, value_enum, default_value = "circle")]
    shape: Shape,
    /// Seed of the random-walk shape.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

fn parse_adjacency(raw: &str) -> Result<Adjacency, String> {
    raw.parse()
}

/// Writes through a temporary file in the destination directory, so readers
/// never observe a partial file.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn read_text(path: &Path) -> Result<String> {
    let bytes = read_input(path)?;
    String::from_utf8(bytes).map_err(|_| Malformed(format!("{} is not UTF-8", path.display())).into())
}

/// Input rejected before any computation.
#[derive(Debug)]
struct Malformed(String);

impl std::fmt::Display for Malformed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Malformed {}

fn list_predicates() {
    for e in REGISTRY {
        let params = if e.params.is_empty() { String::new() } else { format!(" [{}]", e.params.join(", ")) };
        let tag = if e.conservative { "" } else { " [not conservative]" };
        println!("{}{params}{tag}: {}", e.name, e.summary);
    }
}

fn cmd_trace(args: &TraceArgs) -> Result<ExitCode> {
    let img = BinaryImage::parse_pbm(&read_input(&args.image)?)
        .with_context(|| format!("parsing {}", args.image.display()))?;
    if !matches!(args.adjacency, Adjacency::Four | Adjacency::Eight) {
        return Err(TraceError::UnsupportedAdjacency(args.adjacency).into());
    }
    let components = img.components(args.adjacency);
    let traced = components
        .par_iter()
        .map(|c| trace_component(c, args.adjacency))
        .collect::<Result<Vec<_>, _>>()?;
    let dir = match &args.out_dir {
        Some(d) => d.clone(),
        None => args.image.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    if !dir.as_os_str().is_empty() {
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let stem = args.image.file_stem().and_then(|s| s.to_str()).unwrap_or("image");
    traced.par_iter().enumerate().try_for_each(|(i, t)| -> Result<()> {
        write_atomic(&dir.join(format!("{stem}.{i}.path.json")), t.path.to_json().as_bytes())?;
        if args.emit_graph {
            write_atomic(&dir.join(format!("{stem}.{i}.graph.json")), t.graph.to_json().as_bytes())?;
        }
        Ok(())
    })?;
    if let Some(out) = &args.svg {
        write_atomic(out, svg::render_trace(&img, &traced).as_bytes())?;
    }
    eprintln!("{} component(s) traced into {}", traced.len(), if dir.as_os_str().is_empty() { Path::new(".") } else { &dir }.display());
    Ok(ExitCode::SUCCESS)
}

fn load_path(args: &CoverArgs) -> Result<DigitalPath> {
    let text = read_text(&args.path)?;
    let path = DigitalPath::from_json(&text).with_context(|| format!("parsing {}", args.path.display()))?;
    if args.adjacency.is_none() && !args.closed {
        return Ok(path);
    }
    let adjacency = args.adjacency.unwrap_or(path.adjacency());
    let closed = args.closed || path.is_closed();
    DigitalPath::new(path.points().to_vec(), closed, adjacency).with_context(|| format!("reinterpreting {}", args.path.display()))
}

fn cmd_cover(args: &CoverArgs) -> Result<ExitCode> {
    let path = load_path(args)?;
    let spec = args.predicate.spec();
    let predicate = spec.build()?;
    let cover = if args.forward { forward_cover(&path, predicate.as_ref())? } else { ssd_cover(&path, predicate.as_ref())? };
    let json = serde_json::to_string(&cover.to_document(spec.clone()))?;
    emit(args.out.as_deref(), &json)?;
    if let Some(out) = &args.svg {
        write_atomic(out, svg::render_cover(&path, &cover).as_bytes())?;
    }
    if args.oracle {
        let brute = brute_force_cover(&path, predicate.as_ref())?;
        if brute.segments != cover.segments {
            let missing: Vec<String> = brute.segments.iter().filter(|s| !cover.segments.contains(s)).map(|s| s.to_string()).collect();
            let extra: Vec<String> = cover.segments.iter().filter(|s| !brute.segments.contains(s)).map(|s| s.to_string()).collect();
            eprintln!("oracle mismatch for {spec}: missing [{}], extra [{}]", missing.join(" "), extra.join(" "));
            return Ok(ExitCode::FAILURE);
        }
        eprintln!("oracle agrees: {} segments", cover.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_graph(args: &GraphArgs) -> Result<ExitCode> {
    let text = read_text(&args.cover)?;
    let doc: CoverDocument = serde_json::from_str(&text).with_context(|| format!("parsing {}", args.cover.display()))?;
    let cover = doc.cover();
    for s in &cover.segments {
        let fits = s.len >= 1 && s.start < cover.n_points && s.len <= cover.n_points && (cover.closed || s.start + s.len <= cover.n_points);
        if !fits {
            bail!(Malformed(format!("segment {s} does not fit a path of {} points", cover.n_points)));
        }
    }
    let graph = build_arc_graph(&cover);
    emit(args.out.as_deref(), &serde_json::to_string(&graph.to_document())?)?;
    if let Some(dot) = &args.dot {
        write_atomic(dot, graph.to_dot().as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_probe(args: &ProbeArgs) -> Result<ExitCode> {
    let predicate = args.predicate.spec().build()?;
    let shape = match args.shape {
        Shape::Circle => ProbeShape::Circle,
        Shape::Line => ProbeShape::Line,
        Shape::Walk => ProbeShape::RandomWalk { seed: args.seed },
    };
    let rows = complexity_probe(predicate.as_ref(), &args.sizes, shape)?;
    println!("{}", serde_json::to_string_pretty(&rows)?);
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<TraceError>() {
            return match e {
                TraceError::TooManyOddVertices { .. } => EXIT_CAP,
                TraceError::Pbm(_) | TraceError::UnsupportedAdjacency(_) => EXIT_MALFORMED,
                _ => 1,
            };
        }
        if let Some(e) = cause.downcast_ref::<CoverError>() {
            return match e {
                CoverError::Predicate(_) => EXIT_MALFORMED,
                CoverError::CapExceeded { .. } => 1,
            };
        }
        let malformed = cause.is::<PbmError>()
            || cause.is::<PathError>()
            || cause.is::<PredicateError>()
            || cause.is::<serde_json::Error>()
            || cause.is::<Malformed>();
        if malformed {
            return EXIT_MALFORMED;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_predicates {
        list_predicates();
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("satcover: no command given (try --help)");
        return ExitCode::from(EXIT_MALFORMED);
    };
    let result = match &command {
        Command::Trace(a) => cmd_trace(a),
        Command::Cover(a) => cmd_cover(a),
        Command::Graph(a) => cmd_graph(a),
        Command::Verify(a) => verify::run(a),
        Command::Probe(a) => cmd_probe(a),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("satcover: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
