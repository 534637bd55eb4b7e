use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use regideal::closed_form::{
    reduced_distance, CenterFormula, DistanceValue, EccentricityRule, EccentricityValue, FormulaEngine, VertexClass,
};
use regideal::metrics::{all_pairs_distances, is_connected_predicate, shortest_path, MetricReport};
use regideal::notation::{format_ideal, parse_ideal_spec, parse_ring, parse_ring_spec, NotationError};
use regideal::regular::{build_digraph, RegularDigraph};
use regideal::ring::{Arrangement, ElementCap, Ideal, LocalDescriptor, ProductRing};
use regideal::verify::{run_family, CheckOptions, DiscrepancyReport, FamilyConfig, FamilyReport, Severity};

const SCHEMA: &str = "regideal/1";

#[derive(Parser)]
#[command(version, about = "Regular digraphs of ideals of finite Artinian rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a ring: factors, field count, vertices, connectivity.
    Info {
        ring: String,
        #[arg(long)]
        json: bool,
    },
    /// Radius, diameter, eccentricities, center and distances as JSON.
    Invariants {
        ring: String,
        #[command(flatten)]
        mode: ModeFlags,
    },
    /// Distance between two ideals by closed form and by search.
    Distance { ring: String, i: String, j: String },
    /// Write the digraph as DOT, a tab-separated arc list, or JSON.
    Export {
        ring: String,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Cross-check closed forms against search over a family of rings.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(multiple = false)]
struct ModeFlags {
    #[arg(long)]
    formula_only: bool,
    #[arg(long)]
    bfs_only: bool,
    #[arg(long)]
    both: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Edges,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random rings in addition to the regression set.
    #[arg(long, default_value_t = 32)]
    count: usize,
    #[arg(long, default_value_t = 3000)]
    max_vertices: usize,
    #[arg(long, default_value_t = 5)]
    max_components: usize,
    /// Local ring allowed in random products; repeatable.
    #[arg(long = "local", value_name = "TERM")]
    locals: Vec<String>,
    #[arg(long, default_value = "regideal-report.json")]
    report: PathBuf,
    /// Flip the arc between two vertex indices in every ring.
    #[arg(long, hide = true, value_name = "SRC,DST")]
    flip_arc: Option<String>,
}

enum Outcome {
    Clean,
    Violations,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Info { ring, json } => info(&ring, json),
        Command::Invariants { ring, mode } => invariants(&ring, &mode),
        Command::Distance { ring, i, j } => distance(&ring, &i, &j),
        Command::Export { ring, format, output } => export(&ring, format, output),
        Command::Verify(args) => verify(&args),
    };
    match result {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Renders a parse error with a caret under the offending position.
fn located(input: &str, e: NotationError) -> anyhow::Error {
    match e {
        NotationError::Parse(p) => {
            let column = input[..p.position.min(input.len())].chars().count();
            anyhow!("{p}\n  {input}\n  {}^", " ".repeat(column))
        }
        NotationError::Ring(r) => anyhow!(r),
    }
}

fn load_ring(text: &str) -> Result<ProductRing> {
    parse_ring(text, ElementCap::from_env()).map_err(|e| located(text, e))
}

fn load_vertex(ring: &ProductRing, text: &str) -> Result<Ideal> {
    let ideal = parse_ideal_spec(ring, text).map_err(|e| located(text, NotationError::Parse(e)))?;
    if ring.is_zero(&ideal) {
        bail!("`{text}` is the zero ideal, which is not a vertex");
    }
    if ring.is_unit(&ideal) {
        bail!("`{text}` is the whole ring, which is not a vertex");
    }
    Ok(ideal)
}

fn labels(ring: &ProductRing, vertices: &[Ideal]) -> Vec<String> {
    vertices.iter().map(|v| format_ideal(ring, v)).collect()
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct ComponentInfo {
    name: String,
    order: u32,
    field: bool,
    ideals: usize,
}

#[derive(Serialize)]
struct Info {
    schema: &'static str,
    ring: String,
    components: Vec<ComponentInfo>,
    n_fields: usize,
    max_ideals: usize,
    reduced: bool,
    vertices: usize,
    arrangement: Arrangement,
    predicate: bool,
    connected: bool,
}

fn info(text: &str, json: bool) -> Result<Outcome> {
    let ring = load_ring(text)?;
    let graph = build_digraph(&ring);
    let metrics = all_pairs_distances(&graph.underlying());
    let info = Info {
        schema: SCHEMA,
        ring: ring.to_string(),
        components: ring
            .components()
            .iter()
            .map(|c| ComponentInfo {
                name: c.descriptor().to_string(),
                order: c.order(),
                field: c.is_field(),
                ideals: c.ideal_count(),
            })
            .collect(),
        n_fields: ring.n_fields(),
        max_ideals: ring.max_ideal_count(),
        reduced: ring.is_reduced(),
        vertices: graph.len(),
        arrangement: ring.arrangement().clone(),
        predicate: is_connected_predicate(&ring),
        connected: !graph.is_empty() && metrics.connected(),
    };
    if json {
        print_json(&info)?;
        return Ok(Outcome::Clean);
    }
    let yes = |b: bool| if b { "yes" } else { "no" };
    println!("ring:                   {}", info.ring);
    for (k, c) in info.components.iter().enumerate() {
        let kind = if c.field { "field" } else { "local" };
        println!("  factor {k}:              {} ({kind}, {} elements, {} ideals)", c.name, c.order, c.ideals);
    }
    println!("field factors:          {}", info.n_fields);
    println!("maximal ideals:         {}", info.max_ideals);
    println!("reduced:                {}", yes(info.reduced));
    println!("vertices:               {}", info.vertices);
    let arrangement = match &info.arrangement {
        Arrangement::Reduced => "product of fields".to_string(),
        Arrangement::Unclassified => "none".to_string(),
        Arrangement::Split(s) => {
            let name = |k: usize| ring.component(k).descriptor().to_string();
            let rest: Vec<String> = s.rest.iter().map(|&k| name(k)).collect();
            format!("F1 = {}, R2 = {}, R3 = {}", name(s.field), name(s.local), rest.join(" x "))
        }
    };
    println!("arrangement:            {arrangement}");
    println!("connectivity predicate: {}", if info.predicate { "connected" } else { "not connected" });
    println!("connected by search:    {}", yes(info.connected));
    Ok(Outcome::Clean)
}

#[derive(Serialize)]
struct BfsSection<'a> {
    #[serde(flatten)]
    metrics: &'a MetricReport,
    center_ideals: Vec<String>,
}

#[derive(Serialize)]
struct FormulaEccentricity {
    value: EccentricityValue,
    rule: EccentricityRule,
}

#[derive(Serialize)]
struct FormulaSection {
    radius: u32,
    diameter: u32,
    eccentricities: Vec<FormulaEccentricity>,
    center: CenterFormula,
    center_ideals: Vec<String>,
    /// `null` on the diagonal.
    distances: Vec<Vec<Option<DistanceValue>>>,
}

#[derive(Serialize)]
struct Invariants<'a> {
    schema: &'static str,
    ring: String,
    mode: &'static str,
    vertices: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bfs: Option<BfsSection<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<FormulaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    discrepancies: Option<Vec<DiscrepancyReport>>,
}

fn formula_section(ring: &ProductRing, graph: &RegularDigraph) -> Result<FormulaSection> {
    let engine = FormulaEngine::new(ring).context("closed forms unavailable")?;
    let vertices = graph.vertices();
    let mut eccentricities = Vec::with_capacity(vertices.len());
    for v in vertices {
        let (value, rule) = engine.eccentricity_with_rule(v)?;
        eccentricities.push(FormulaEccentricity { value, rule });
    }
    let reduced = engine.is_reduced_model();
    let prepared = if reduced {
        Vec::new()
    } else {
        vertices.iter().map(|v| engine.prepare(v)).collect::<Result<_, _>>()?
    };
    let distances = (0..vertices.len())
        .map(|a| {
            (0..vertices.len())
                .map(|b| {
                    if a == b {
                        None
                    } else if reduced {
                        reduced_distance(ring, &vertices[a], &vertices[b]).ok().map(DistanceValue::Exact)
                    } else {
                        Some(engine.prepared_distance(&prepared[a], &prepared[b]).0)
                    }
                })
                .collect()
        })
        .collect();
    let center = engine.formula_center();
    Ok(FormulaSection {
        radius: engine.formula_radius(),
        diameter: engine.formula_diameter(),
        eccentricities,
        center_ideals: labels(ring, &center.vertices),
        center,
        distances,
    })
}

fn invariants(text: &str, mode: &ModeFlags) -> Result<Outcome> {
    let ring = load_ring(text)?;
    let graph = build_digraph(&ring);
    let (want_bfs, want_formula, name) = if mode.formula_only {
        (false, true, "formula-only")
    } else if mode.bfs_only {
        (true, false, "bfs-only")
    } else {
        (true, true, "both")
    };
    let formula = match (want_formula, want_bfs) {
        (false, _) => None,
        (true, false) => Some(formula_section(&ring, &graph)?),
        (true, true) if FormulaEngine::new(&ring).is_err() => None,
        (true, true) => Some(formula_section(&ring, &graph)?),
    };
    let metrics = want_bfs.then(|| all_pairs_distances(&graph.underlying()));
    let bfs = metrics.as_ref().map(|m| BfsSection {
        metrics: m,
        center_ideals: m.center().iter().map(|&v| format_ideal(&ring, &graph.vertices()[v])).collect(),
    });
    let discrepancies = (want_bfs && want_formula)
        .then(|| regideal::verify::cross_check(&ring, &CheckOptions::default()).discrepancies);
    let violated = discrepancies
        .iter()
        .flatten()
        .any(|d| d.severity == Severity::Violation);
    print_json(&Invariants {
        schema: SCHEMA,
        ring: ring.to_string(),
        mode: name,
        vertices: labels(&ring, graph.vertices()),
        bfs,
        formula,
        discrepancies,
    })?;
    Ok(if violated { Outcome::Violations } else { Outcome::Clean })
}

fn class_tag(engine: Option<&FormulaEngine>, v: &Ideal) -> String {
    engine
        .and_then(|e| e.classify_vertex(v).ok())
        .map(|c| c.tag().to_string())
        .unwrap_or_else(|| "-".into())
}

fn distance(text: &str, i_text: &str, j_text: &str) -> Result<Outcome> {
    let ring = load_ring(text)?;
    let i = load_vertex(&ring, i_text)?;
    let j = load_vertex(&ring, j_text)?;
    if i == j {
        bail!("both ideals are {}; pick two distinct vertices", format_ideal(&ring, &i));
    }
    let engine = FormulaEngine::new(&ring);
    let graph = build_digraph(&ring);
    let metrics = all_pairs_distances(&graph.underlying());
    let (a, b) = (graph.vertex_index(&i).expect("vertex"), graph.vertex_index(&j).expect("vertex"));

    let formula = match &engine {
        Err(e) => format!("unavailable ({e})"),
        Ok(e) if e.is_reduced_model() => format!("{} (support model)", reduced_distance(&ring, &i, &j)?),
        Ok(e) => {
            let (value, rule) = e.distance_with_rule(&i, &j)?;
            let rule = serde_json::to_value(rule)?;
            match value {
                DistanceValue::Exact(d) => format!("{d} ({})", rule.as_str().unwrap_or_default()),
                DistanceValue::Candidates([x, y]) => {
                    format!("{x} or {y} ({})", rule.as_str().unwrap_or_default())
                }
            }
        }
    };
    let engine = engine.ok();
    println!("ring:     {ring}");
    println!("from:     {}  [{}]", format_ideal(&ring, &i), class_tag(engine.as_ref(), &i));
    println!("to:       {}  [{}]", format_ideal(&ring, &j), class_tag(engine.as_ref(), &j));
    println!("formula:  {formula}");
    match metrics.distance(a, b) {
        Some(d) => println!("search:   {d}"),
        None => println!("search:   unreachable"),
    }
    if let Some(path) = shortest_path(&graph.underlying(), a, b) {
        let mut line = format_ideal(&ring, &graph.vertices()[path[0]]);
        for step in path.windows(2) {
            let arrow = if graph.has_arc(step[0], step[1]) { "->" } else { "<-" };
            line.push_str(&format!(" {arrow} {}", format_ideal(&ring, &graph.vertices()[step[1]])));
        }
        println!("path:     {line}");
    }
    Ok(Outcome::Clean)
}

#[derive(Serialize)]
struct ExportVertex {
    index: usize,
    ideal: String,
    class: Option<VertexClass>,
}

#[derive(Serialize)]
struct Export<'a> {
    schema: &'static str,
    ring: String,
    vertices: Vec<ExportVertex>,
    arcs: Vec<[usize; 2]>,
    metrics: &'a MetricReport,
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn export(text: &str, format: ExportFormat, output: Option<PathBuf>) -> Result<Outcome> {
    let ring = load_ring(text)?;
    let graph = build_digraph(&ring);
    let names = labels(&ring, graph.vertices());
    let body = match format {
        ExportFormat::Dot => {
            let mut s = String::from("digraph regular_ideals {\n");
            s.push_str(&format!("    label=\"{}\";\n", dot_escape(&ring.to_string())));
            for (k, name) in names.iter().enumerate() {
                s.push_str(&format!("    n{k} [label=\"{}\"];\n", dot_escape(name)));
            }
            for (a, b) in graph.arcs() {
                s.push_str(&format!("    n{a} -> n{b};\n"));
            }
            s.push_str("}\n");
            s
        }
        ExportFormat::Edges => graph.arcs().map(|(a, b)| format!("{a}\t{b}\n")).collect(),
        ExportFormat::Json => {
            let engine = FormulaEngine::new(&ring).ok();
            let metrics = all_pairs_distances(&graph.underlying());
            let doc = Export {
                schema: SCHEMA,
                ring: ring.to_string(),
                vertices: graph
                    .vertices()
                    .iter()
                    .zip(names)
                    .enumerate()
                    .map(|(index, (v, ideal))| ExportVertex {
                        index,
                        ideal,
                        class: engine.as_ref().and_then(|e| e.classify_vertex(v).ok()),
                    })
                    .collect(),
                arcs: graph.arcs().map(|(a, b)| [a, b]).collect(),
                metrics: &metrics,
            };
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    match output {
        Some(path) => fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(Outcome::Clean)
}

#[derive(Serialize)]
struct Meta {
    generated_unix: u64,
    version: &'static str,
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    schema: &'static str,
    report: &'a FamilyReport,
    meta: Meta,
}

fn parse_local(term: &str) -> Result<LocalDescriptor> {
    let mut terms = parse_ring_spec(term).map_err(|e| located(term, NotationError::Parse(e)))?;
    if terms.len() != 1 {
        bail!("`{term}` names a product; give one local ring per --local");
    }
    Ok(terms.remove(0))
}

fn parse_flip(text: &str) -> Result<(usize, usize)> {
    let (a, b) = text.split_once(',').context("expected SRC,DST")?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let mut cfg = FamilyConfig {
        seed: args.seed,
        count: args.count,
        max_vertices: args.max_vertices,
        max_components: args.max_components,
        ..FamilyConfig::default()
    };
    if !args.locals.is_empty() {
        cfg.allowed_locals = args.locals.iter().map(|t| parse_local(t)).collect::<Result<_>>()?;
    }
    let mut options = CheckOptions::default();
    options.build.flip_arc = args.flip_arc.as_deref().map(parse_flip).transpose()?;
    let report = run_family(&cfg, &options)?;
    for r in &report.rings {
        let status = match (r.violations(), r.known_open()) {
            (0, 0) => "ok".to_string(),
            (0, k) => format!("ok, {k} known-open"),
            (v, _) => format!("{v} violations"),
        };
        let metric = |m: Option<u32>| m.map_or("-".to_string(), |d| d.to_string());
        println!(
            "{:<40} {:>5} vertices  n_F={}  diameter {:>1}  radius {:>1}  {status}",
            r.ring,
            r.vertices,
            r.n_fields,
            metric(r.diameter),
            metric(r.radius)
        );
    }
    let t = &report.totals;
    println!(
        "{} rings ({} connected), {} violations, {} known-open; report in {}",
        t.rings,
        t.connected,
        t.violations,
        t.known_open,
        args.report.display()
    );
    let doc = VerifyDocument {
        schema: SCHEMA,
        report: &report,
        meta: Meta {
            generated_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            version: env!("CARGO_PKG_VERSION"),
        },
    };
    fs::write(&args.report, serde_json::to_string_pretty(&doc)? + "\n")
        .with_context(|| format!("writing {}", args.report.display()))?;
    Ok(if report.is_clean() { Outcome::Clean } else { Outcome::Violations })
}
