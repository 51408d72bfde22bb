use std::io::{IsTerminal, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fraisse_core::amalgamate::{
    component_amalgam, m3, mono_light_pair, rooted_light, simple_confluent_pair, simple_monotone_pair,
    standard, AmalgamResult,
};
use fraisse_core::dot::{amalgam_to_dot, graph_to_dot, morphism_to_dot};
use fraisse_core::factorize::{decompose_light_confluent, decompose_simple_confluent, decompose_simple_star, Outcome};
use fraisse_core::graph::GraphJson;
use fraisse_core::morphism::MorphismJson;
use fraisse_core::oracle::{enumerate_rooted_trees, enumerate_trees, search_amalgam, ClassSpec};
use fraisse_core::sequences::{
    bonding_map, cap_from_env, geometric_layout, mn_tree, projected_size, skeleton, stage, Grid, MnSequence,
};
use fraisse_core::suite::{run_criterion, SuiteConfig, TITLES};
use fraisse_core::{Error, FiniteGraph, Morphism, RootedTree};

#[derive(Parser)]
#[command(name = "fraisse", version, about = "Finite tree epimorphisms, amalgamations and inverse sequences")]
struct Cli {
    /// Output format; defaults to json when piped and table on a terminal.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Largest stage or grid tree to materialize (overrides FRAISSE_CAP).
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Seed for the randomized parts of the suite.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Standard,
    Component,
    RootedLight,
    M3,
    SimpleMonotone,
    MonoLight,
    SimpleConfluent,
    SimpleStar,
    Search,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    SimpleConfluent,
    SimpleStar,
    LightConfluent,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchClass {
    Any,
    Monotone,
    Confluent,
    LightConfluent,
}

#[derive(Subcommand)]
enum Command {
    /// Print a stage of the sequence or every tree of a given size.
    GenTree {
        /// Stage index of the sequence.
        #[arg(long, conflicts_with = "enumerate")]
        stage: Option<usize>,
        /// List all trees with this many vertices.
        #[arg(long)]
        enumerate: Option<usize>,
        /// With --enumerate: list unrooted trees.
        #[arg(long)]
        unrooted: bool,
    },
    /// Class flags of a morphism.
    Classify {
        /// Morphism JSON, as a file path or inline.
        #[arg(long)]
        input: String,
    },
    /// Decompose a tree epimorphism into elementary factors.
    Factorize {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value = "simple-confluent")]
        kind: Kind,
    },
    /// Amalgamate two maps with a common codomain, given as {"f": .., "g": ..}.
    Amalgamate {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value = "standard")]
        method: Method,
        /// Vertex bound for --method search.
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        /// Leg class for --method search.
        #[arg(long, value_enum, default_value = "confluent")]
        class: SearchClass,
    },
    /// A stage of the sequence, or the bonding map out of the next stage.
    FraisseStage {
        #[arg(long)]
        m: usize,
        /// Print only the number of vertices.
        #[arg(long)]
        count_only: bool,
        /// Print the bonding map from stage m+1 instead.
        #[arg(long)]
        bonding: bool,
    },
    /// The discrete dendroid tree of a sequence such as "2/3,1/3,0".
    MnTree {
        #[arg(long)]
        seq: String,
        /// Same as --format.
        #[arg(long, value_enum)]
        export: Option<Format>,
    },
    /// A tree of the two-index grid with its square certificate.
    Grid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Run the acceptance criteria; timings go to stderr.
    VerifySuite {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
    /// Convert a graph or morphism JSON to another format.
    Export {
        #[arg(long)]
        input: String,
    },
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Run = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format.unwrap_or(if std::io::stdout().is_terminal() { Format::Table } else { Format::Json });
    let cap = cli.cap.unwrap_or_else(cap_from_env);
    match run(&cli, format, cap) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Reads `--input`: an existing file path, or else inline JSON.
fn read_input(input: &str) -> Result<Value, Failure> {
    let text = if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| Failure::Usage(format!("--input: {e}")))?
    } else {
        input.to_string()
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("--input: {e}")))
}

fn morphism_from(v: &Value) -> Result<Morphism, Failure> {
    let json: MorphismJson =
        serde_json::from_value(v.clone()).map_err(|e| Failure::Usage(format!("--input is not a morphism: {e}")))?;
    Ok(Morphism::from_json(&json)?)
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn emit_json(v: &Value) {
    emit(&serde_json::to_string_pretty(v).expect("values serialize"));
}

fn no_dot(verb: &str) -> Failure {
    Failure::Usage(format!("--format dot is not available for {verb}"))
}

fn tree_table(t: &RootedTree) -> String {
    let mut s = format!("vertices {}  height {}  regular {}\n", t.len(), t.tree_height(), t.is_regular());
    for &v in t.preorder() {
        let parent = t.parent(v).map(|p| t.name(p)).unwrap_or("-");
        s.push_str(&format!("{:indent$}{}  (parent {parent}, sord {})\n", "", t.name(v), t.sord(v), indent = 2 * t.height(v)));
    }
    s
}

fn emit_graph(g: &FiniteGraph, format: Format) {
    match format {
        Format::Json => emit_json(&serde_json::to_value(g.to_json()).unwrap()),
        Format::Dot => emit(&graph_to_dot(g)),
        Format::Table => match RootedTree::from_graph(g.clone()) {
            Ok(t) => emit(&tree_table(&t)),
            Err(_) => {
                let mut s = format!("vertices {}\n", g.names().join(" "));
                for (a, b) in g.named_edges() {
                    s.push_str(&format!("{a} -- {b}\n"));
                }
                emit(&s);
            }
        },
    }
}

fn map_table(f: &Morphism) -> String {
    f.map_named().iter().map(|(a, b)| format!("{a} -> {b}\n")).collect()
}

fn run(cli: &Cli, format: Format, cap: u64) -> Run {
    match &cli.command {
        Command::GenTree { stage: m, enumerate, unrooted } => gen_tree(*m, *enumerate, *unrooted, format, cap),
        Command::Classify { input } => {
            let f = morphism_from(&read_input(input)?)?;
            let report = *f.classify();
            match format {
                Format::Dot => return Err(no_dot("classify")),
                Format::Json => emit_json(&serde_json::to_value(report).unwrap()),
                Format::Table => {
                    let v = serde_json::to_value(report).unwrap();
                    let rows: String =
                        v.as_object().unwrap().iter().map(|(k, b)| format!("{k:<28}{b}\n")).collect();
                    emit(&rows);
                }
            }
            Ok(())
        }
        Command::Factorize { input, kind } => factorize(&read_input(input)?, *kind, format),
        Command::Amalgamate { input, method, max_vertices, class } => {
            amalgamate(&read_input(input)?, *method, *max_vertices, *class, format)
        }
        Command::FraisseStage { m, count_only, bonding } => fraisse_stage(*m, *count_only, *bonding, format, cap),
        Command::MnTree { seq, export } => mn(seq, export.unwrap_or(format)),
        Command::Grid { n, k } => grid(*n, *k, format, cap),
        Command::VerifySuite { only } => verify_suite(only, cli.seed, cap, format),
        Command::Export { input } => {
            let v = read_input(input)?;
            if v.get("map").is_some() {
                let f = morphism_from(&v)?;
                match format {
                    Format::Json => emit_json(&serde_json::to_value(f.to_json()).unwrap()),
                    Format::Dot => emit(&morphism_to_dot(&f)),
                    Format::Table => emit(&map_table(&f)),
                }
            } else {
                let json: GraphJson = serde_json::from_value(v)
                    .map_err(|e| Failure::Usage(format!("--input is neither a graph nor a morphism: {e}")))?;
                emit_graph(&FiniteGraph::from_json(&json)?, format);
            }
            Ok(())
        }
    }
}

fn gen_tree(m: Option<usize>, enumerate: Option<usize>, unrooted: bool, format: Format, cap: u64) -> Run {
    match (m, enumerate) {
        (Some(m), None) => {
            emit_graph(stage(m, cap)?.graph(), format);
            Ok(())
        }
        (None, Some(n)) => {
            let graphs: Vec<FiniteGraph> = if unrooted {
                enumerate_trees(n)
            } else {
                enumerate_rooted_trees(n).into_iter().map(|t| t.graph().clone()).collect()
            };
            match format {
                Format::Json => emit_json(&json!(graphs.iter().map(|g| g.to_json()).collect::<Vec<_>>())),
                Format::Dot => graphs.iter().for_each(|g| emit(&graph_to_dot(g))),
                Format::Table => {
                    let mut s = format!("{} trees\n", graphs.len());
                    for g in &graphs {
                        let edges: Vec<String> = g.named_edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
                        s.push_str(&format!("{}\n", edges.join(" ")));
                    }
                    emit(&s);
                }
            }
            Ok(())
        }
        _ => Err(Failure::Usage("gen-tree needs exactly one of --stage or --enumerate".into())),
    }
}

fn factorize(input: &Value, kind: Kind, format: Format) -> Run {
    let f = morphism_from(input)?;
    let outcome: Outcome = match kind {
        Kind::SimpleConfluent => decompose_simple_confluent(&f)?,
        Kind::SimpleStar => decompose_simple_star(&f)?,
        Kind::LightConfluent => decompose_light_confluent(&f)?,
    };
    let dec = match outcome {
        Ok(dec) => dec,
        Err(w) => {
            let reason = w.reason.map(|r| format!("{r:?}")).unwrap_or_else(|| "no reduction applies".into());
            return Err(Failure::Domain(format!(
                "map does not decompose: {reason}; remaining map {:?}",
                w.remaining.map_named()
            )));
        }
    };
    match format {
        Format::Json => {
            let factors: Vec<Value> = dec
                .factors
                .iter()
                .map(|x| json!({ "kind": x.kind, "map": x.map.to_json() }))
                .collect();
            emit_json(&json!({ "factors": factors, "iso": dec.iso.to_json() }));
        }
        Format::Dot => {
            for x in &dec.factors {
                emit(&morphism_to_dot(&x.map));
            }
        }
        Format::Table => {
            let mut s = format!("{} factors\n", dec.factors.len());
            for (i, x) in dec.factors.iter().enumerate() {
                s.push_str(&format!("{i}: {:?}  {} -> {} vertices\n", x.kind, x.map.domain().len(), x.map.codomain().len()));
            }
            emit(&s);
        }
    }
    Ok(())
}

fn amalgamate(input: &Value, method: Method, max_vertices: usize, class: SearchClass, format: Format) -> Run {
    let (Some(fv), Some(gv)) = (input.get("f"), input.get("g")) else {
        return Err(Failure::Usage("--input must be an object with fields \"f\" and \"g\"".into()));
    };
    let (f, g) = (morphism_from(fv)?, morphism_from(gv)?);
    let g = if g.codomain() == f.codomain() { g } else { g.with_codomain(f.codomain().clone())? };
    let square: AmalgamResult = match method {
        Method::Standard => standard(&f, &g)?,
        Method::Component => component_amalgam(&f, &g)?,
        Method::RootedLight => rooted_light(&f, &g)?,
        Method::M3 => m3(&f, &g)?,
        Method::SimpleMonotone => simple_monotone_pair(&f, &g)?,
        Method::MonoLight => mono_light_pair(&f, &g)?,
        Method::SimpleConfluent => simple_confluent_pair(&f, &g, false)?,
        Method::SimpleStar => simple_confluent_pair(&f, &g, true)?,
        Method::Search => {
            let spec = match class {
                SearchClass::Any => ClassSpec::ANY,
                SearchClass::Monotone => ClassSpec::MONOTONE,
                SearchClass::Confluent => ClassSpec::CONFLUENT,
                SearchClass::LightConfluent => ClassSpec::LIGHT_CONFLUENT,
            };
            match search_amalgam(&f, &g, spec, max_vertices)? {
                Some(found) => AmalgamResult::new(found.to_b, found.to_c)?,
                None => {
                    return Err(Failure::Domain(format!("no amalgam with at most {max_vertices} vertices")));
                }
            }
        }
    };
    match format {
        Format::Json => emit_json(&serde_json::to_value(square.to_json(Some((&f, &g)))).unwrap()),
        Format::Dot => emit(&amalgam_to_dot(&square, &f, &g)),
        Format::Table => {
            let c = square.certificate(&f, &g);
            let mut s = format!(
                "domain {} vertices, tree {}, commutes {}\nf0: {:?}\ng0: {:?}\n",
                square.domain.len(),
                c.domain_is_tree,
                c.commutes,
                c.f0,
                c.g0
            );
            s.push_str("vertex -> (f0, g0)\n");
            for v in 0..square.domain.len() {
                let name = square.domain.name(v);
                s.push_str(&format!(
                    "{name} -> ({}, {})\n",
                    square.f0.codomain().name(square.f0.apply(v)),
                    square.g0.codomain().name(square.g0.apply(v))
                ));
            }
            emit(&s);
        }
    }
    Ok(())
}

fn fraisse_stage(m: usize, count_only: bool, bonding: bool, format: Format, cap: u64) -> Run {
    if m == 0 {
        return Err(Failure::Usage("--m starts at 1".into()));
    }
    if count_only {
        let count = projected_size(if bonding { m + 1 } else { m });
        emit(&count.to_string());
        return Ok(());
    }
    if bonding {
        let f = bonding_map(m, cap)?;
        match format {
            Format::Json => emit_json(&serde_json::to_value(f.to_json()).unwrap()),
            Format::Dot => emit(&morphism_to_dot(&f)),
            Format::Table => emit(&map_table(&f)),
        }
    } else {
        emit_graph(stage(m, cap)?.graph(), format);
    }
    Ok(())
}

fn mn(seq: &str, format: Format) -> Run {
    let seq: MnSequence = seq.parse().map_err(|e: Error| Failure::Usage(format!("--seq: {e}")))?;
    let t = mn_tree(&seq)?;
    match format {
        Format::Json => emit_json(&json!({
            "sequence": seq.to_string(),
            "leaves": t.leaf_count(),
            "graph": t.graph().to_json(),
            "heights": t.vertex_heights(),
        })),
        Format::Dot => emit(&geometric_layout(&t.tree, &t.heights)?.to_dot()),
        Format::Table => {
            let mut s = format!("sequence ({seq}): {} vertices, {} leaves\n", t.tree.len(), t.leaf_count());
            for h in t.vertex_heights() {
                s.push_str(&format!("{}  {}\n", h.name, h.height));
            }
            emit(&s);
        }
    }
    Ok(())
}

fn grid(n: usize, k: usize, format: Format, cap: u64) -> Run {
    let mut grid = Grid::new(cap);
    let tree = grid.tree(n, k)?;
    let square = if grid.tree(n + 1, k + 1).is_ok() { Some(grid.square_commutes(n, k)?) } else { None };
    match format {
        Format::Json => {
            let (skel, heights) = skeleton(&tree)?;
            emit_json(&json!({
                "n": n,
                "k": k,
                "vertices": tree.len(),
                "height": tree.tree_height(),
                "skeleton_vertices": skel.len(),
                "skeleton_heights": heights.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
                "square_commutes": square,
                "graph": tree.graph().to_json(),
            }))
        }
        Format::Dot => {
            let (skel, heights) = skeleton(&tree)?;
            emit(&geometric_layout(&skel, &heights)?.to_dot());
        }
        Format::Table => emit(&format!(
            "A_{{{n}{k}}}: {} vertices, height {}, square {}\n",
            tree.len(),
            tree.tree_height(),
            match square {
                Some(true) => "commutes",
                Some(false) => "does not commute",
                None => "beyond the size cap",
            }
        )),
    }
    Ok(())
}

fn verify_suite(only: &[usize], seed: u64, cap: u64, format: Format) -> Run {
    if let Some(bad) = only.iter().find(|&&id| id == 0 || id > TITLES.len()) {
        return Err(Failure::Usage(format!("--only: no criterion {bad}")));
    }
    if format == Format::Dot {
        return Err(no_dot("verify-suite"));
    }
    let ids: Vec<usize> = if only.is_empty() { (1..=TITLES.len()).collect() } else { only.to_vec() };
    let config = SuiteConfig { seed, cap };
    let mut reports = Vec::new();
    for id in ids {
        let start = std::time::Instant::now();
        let r = run_criterion(id, &config);
        eprintln!("criterion {id}: {:.2?}", start.elapsed());
        if format == Format::Table {
            emit(&format!("{:>2}  {}  {}: {}", r.id, if r.passed { "PASS" } else { "FAIL" }, r.title, r.detail));
        }
        reports.push(r);
    }
    if format == Format::Json {
        emit_json(&serde_json::to_value(&reports).unwrap());
    }
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Domain("some criteria failed".into()))
    }
}
