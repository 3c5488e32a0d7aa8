use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use logcone::cone::sigma_cone;
use logcone::corpus::{corpus_entry, corpus_list};
use logcone::decorations::{enumerate_edge_decorations, UndecoratedGraph};
use logcone::dims::expected_dim_stratum;
use logcone::graph::{arithmetic_genus, restrict_graph, validate_axioms};
use logcone::io::{graph_to_json, parse_context, parse_eta, parse_graph, parse_witness};
use logcone::lattice::lattice_summary;
use logcone::order::{smooth_divisor_partial_order, OrderFailure, PartialOrderResult};
use logcone::report::{self, analyze, render_text, ReportOptions};
use logcone::toric::{gluing_equations, obstruction_test, reduced_toric_ideal, toric_ideal_generators, DEFAULT_TOLERANCE};
use logcone::tropical::{tropical_feasibility, verify_witness};
use logcone::{DecoratedDualGraph, GeometryContext, SCHEMA};

/// Decorated dual graphs of log maps: validation, lattices, tropical
/// feasibility, gluing cones and dimensions.
///
/// INPUT is a graph file or `corpus:<name>` for a bundled example.
/// Exit status is 0 on success, 2 when the graph violates an axiom or is not
/// tropically realizable, and 1 on malformed input or I/O failure.
#[derive(Parser)]
#[command(name = "logcone", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    format: Format,
}

#[derive(Args, Clone, Copy)]
struct Format {
    /// JSON output (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Aligned plain-text output.
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Args)]
struct Input {
    input: String,
    /// Geometry context file; overrides a context embedded in the graph.
    #[arg(long)]
    ctx: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every axiom.
    Validate(Input),
    /// Arithmetic genus.
    Genus(Input),
    /// The lattice map, its kernel, image rank and cokernel.
    Lattice(Input),
    /// Tropical feasibility with a witness or a dual certificate.
    Tropical {
        #[command(flatten)]
        input: Input,
        /// Check this witness instead of solving.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Partial order on vertices for a single smooth divisor.
    Order(Input),
    /// Extreme rays of the gluing cone.
    Cone(Input),
    /// Binomial gluing equations.
    Gluing(Input),
    /// Toric ideal from a kernel-complement basis, and its reduced form.
    Ideal(Input),
    /// Expected dimensions; needs a context.
    Dims(Input),
    /// Restrict to a subset of divisor labels.
    Forget {
        #[command(flatten)]
        input: Input,
        /// Comma-separated labels to keep.
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<String>,
    },
    /// Whether leading-coefficient ratios lie in the image torus.
    Obstruct {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        eta: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Edge contact assignments for the graph's underlying shape.
    Decorate {
        #[command(flatten)]
        input: Input,
        /// Coordinate bound for graphs with cycles.
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// Every analysis at once. A directory is processed file by file.
    Report {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        eta: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Bundled examples.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Names, descriptions and expected verdicts.
    List,
    /// Write one example, or all of them, as graph files.
    Export {
        /// Example name; all examples when omitted.
        name: Option<String>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

/// Printed result plus whether an axiom failed.
struct Outcome {
    value: Value,
    violated: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, violated: false }
    }
}

fn read_input(input: &str) -> Result<Vec<u8>> {
    if let Some(name) = input.strip_prefix("corpus:") {
        let entry = corpus_entry(name).ok_or_else(|| anyhow!("no bundled example named `{name}`"))?;
        return Ok(entry.source.as_bytes().to_vec());
    }
    fs::read(input).with_context(|| format!("cannot read {input}"))
}

fn load(input: &Input) -> Result<(DecoratedDualGraph, Option<GeometryContext>)> {
    let bytes = read_input(&input.input)?;
    let (g, embedded) = parse_graph(&bytes).with_context(|| format!("{}: invalid graph", input.input))?;
    let ctx = match &input.ctx {
        Some(path) => {
            let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
            Some(parse_context(&bytes).with_context(|| format!("{}: invalid context", path.display()))?)
        }
        None => embedded,
    };
    Ok((g, ctx))
}

fn tagged(command: &str, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("command".into(), json!(command));
    match body {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("result".into(), other);
        }
    }
    Value::Object(out)
}

fn run(command: Command) -> Result<Outcome> {
    Ok(match command {
        Command::Validate(input) => {
            let (g, ctx) = load(&input)?;
            let r = validate_axioms(&g, ctx.as_ref());
            Outcome {
                value: tagged("validate", report::validation_json(&r)),
                violated: !r.is_valid(),
            }
        }
        Command::Genus(input) => {
            let (g, _) = load(&input)?;
            Outcome::ok(tagged("genus", json!({"genus": arithmetic_genus(&g)?})))
        }
        Command::Lattice(input) => {
            let (g, _) = load(&input)?;
            Outcome::ok(tagged("lattice", report::lattice_json(&lattice_summary(&g))))
        }
        Command::Tropical { input, witness } => {
            let (g, _) = load(&input)?;
            match witness {
                Some(path) => {
                    let w = parse_witness(&fs::read(&path)?, &g).with_context(|| format!("{}: invalid witness", path.display()))?;
                    let problems = verify_witness(&g, &w)?;
                    Outcome {
                        violated: !problems.is_empty(),
                        value: tagged(
                            "tropical",
                            json!({
                                "witness_verified": problems.is_empty(),
                                "problems": problems.iter().map(ToString::to_string).collect::<Vec<_>>(),
                            }),
                        ),
                    }
                }
                None => {
                    let v = tropical_feasibility(&g);
                    Outcome {
                        violated: !v.is_feasible(),
                        value: tagged("tropical", report::tropical_json(&g, &v)),
                    }
                }
            }
        }
        Command::Order(input) => {
            let (g, _) = load(&input)?;
            match smooth_divisor_partial_order(&g)? {
                PartialOrderResult::Levels(levels) => {
                    let map: Map<String, Value> = g.vertices().iter().zip(levels).map(|(v, l)| (v.id.clone(), json!(l))).collect();
                    Outcome::ok(tagged("order", json!({"levels": map})))
                }
                PartialOrderResult::Failure(f) => Outcome {
                    value: tagged("order", json!({"failure": order_failure_json(&f)})),
                    violated: true,
                },
            }
        }
        Command::Cone(input) => {
            let (g, _) = load(&input)?;
            let s = lattice_summary(&g);
            let mut v = report::cone_json(&sigma_cone(&g));
            v["coordinates"] = json!(s.rho.domain.labels);
            Outcome::ok(tagged("cone", v))
        }
        Command::Gluing(input) => {
            let (g, _) = load(&input)?;
            Outcome::ok(tagged("gluing", report::system_json(&gluing_equations(&g))))
        }
        Command::Ideal(input) => {
            let (g, _) = load(&input)?;
            Outcome::ok(tagged(
                "ideal",
                json!({
                    "generators": report::system_json(&toric_ideal_generators(&g)),
                    "reduced": report::reduced_json(&reduced_toric_ideal(&g)),
                }),
            ))
        }
        Command::Dims(input) => {
            let (g, ctx) = load(&input)?;
            let ctx = ctx.ok_or_else(|| anyhow!("dims needs a context: embed one or pass --ctx"))?;
            Outcome::ok(tagged("dims", report::dims_json(&expected_dim_stratum(&g, &ctx)?)))
        }
        Command::Forget { input, keep } => {
            let (g, ctx) = load(&input)?;
            let keep: Vec<&str> = keep.iter().map(String::as_str).collect();
            let restricted = restrict_graph(&g, &keep)?;
            let ctx = ctx.map(|c| c.restrict(&keep));
            Outcome::ok(graph_to_json(&restricted, ctx.as_ref()))
        }
        Command::Obstruct { input, eta, tol } => {
            let (g, _) = load(&input)?;
            let bytes = fs::read(&eta).with_context(|| format!("cannot read {}", eta.display()))?;
            let e = parse_eta(&bytes, &g).with_context(|| format!("{}: invalid eta file", eta.display()))?;
            let r = obstruction_test(&g, &e, tol)?;
            Outcome::ok(tagged("obstruct", report::obstruction_json(&r, tol)))
        }
        Command::Decorate { input, bound } => {
            let (g, ctx) = load(&input)?;
            let ctx = ctx.ok_or_else(|| anyhow!("decorate needs a context: embed one or pass --ctx"))?;
            let (u, legs) = UndecoratedGraph::from_graph(&g);
            let found = enumerate_edge_decorations(&u, &ctx, &legs, bound)?;
            let list: Vec<Value> = found
                .iter()
                .map(|contacts| {
                    let d = u.decorate(contacts, &legs);
                    let edges: Map<String, Value> = d
                        .edges()
                        .iter()
                        .map(|e| {
                            let c: Map<String, Value> = d.divisors().iter().zip(&e.contact).map(|(l, x)| (l.clone(), json!(x))).collect();
                            (e.id.clone(), Value::Object(c))
                        })
                        .collect();
                    Value::Object(edges)
                })
                .collect();
            Outcome::ok(tagged("decorate", json!({"bound": bound, "count": list.len(), "decorations": list})))
        }
        Command::Report { input, eta, tol } => report_command(&input, eta.as_deref(), tol)?,
        Command::Corpus { action } => corpus_command(action)?,
    })
}

fn order_failure_json(f: &OrderFailure) -> Value {
    match f {
        OrderFailure::IllDefined { first, second, edges } => json!({
            "kind": "ill-defined",
            "vertices": [first, second],
            "edges": edges,
        }),
        OrderFailure::Cycle { vertices } => json!({"kind": "cycle", "vertices": vertices}),
        OrderFailure::DepthConflict { off_divisor, other } => json!({
            "kind": "depth-conflict",
            "vertices": [off_divisor, other],
        }),
    }
}

fn report_command(input: &Input, eta: Option<&Path>, tol: Option<f64>) -> Result<Outcome> {
    let ctx = match &input.ctx {
        Some(path) => Some(parse_context(&fs::read(path)?).with_context(|| format!("{}: invalid context", path.display()))?),
        None => None,
    };
    let path = Path::new(&input.input);
    if !input.input.starts_with("corpus:") && path.is_dir() {
        if eta.is_some() {
            bail!("--eta applies to a single graph, not a directory");
        }
        let mut files: Vec<PathBuf> = fs::read_dir(path)?
            .map(|e| e.map(|e| e.path()))
            .collect::<io::Result<_>>()?;
        files.retain(|p| p.extension().is_some_and(|x| x == "json"));
        files.sort();
        let opts = ReportOptions {
            context: ctx,
            eta: None,
            tolerance: tol,
        };
        let results: Vec<(String, std::result::Result<report::AnalysisReport, String>)> = files
            .par_iter()
            .map(|p| {
                let name = p.display().to_string();
                let r = fs::read(p).map_err(|e| e.to_string()).and_then(|b| analyze(&b, &opts).map_err(|e| e.to_string()));
                (name, r)
            })
            .collect();
        let mut violated = false;
        let mut failed = false;
        let mut reports = Map::new();
        for (name, r) in results {
            match r {
                Ok(r) => {
                    violated |= !(r.valid && r.feasible);
                    reports.insert(name, r.json);
                }
                Err(e) => {
                    failed = true;
                    reports.insert(name, json!({"error": e}));
                }
            }
        }
        if failed {
            print_value(&tagged("report", json!({"reports": reports})), Format { json: true, text: false });
            bail!("some files could not be analyzed");
        }
        return Ok(Outcome {
            value: tagged("report", json!({"reports": reports})),
            violated,
        });
    }
    let bytes = read_input(&input.input)?;
    let eta = match eta {
        Some(p) => {
            let (g, _) = parse_graph(&bytes)?;
            Some(parse_eta(&fs::read(p)?, &g).with_context(|| format!("{}: invalid eta file", p.display()))?)
        }
        None => None,
    };
    let r = analyze(
        &bytes,
        &ReportOptions {
            context: ctx,
            eta,
            tolerance: tol,
        },
    )?;
    Ok(Outcome {
        violated: !(r.valid && r.feasible),
        value: r.json,
    })
}

fn corpus_command(action: CorpusAction) -> Result<Outcome> {
    match action {
        CorpusAction::List => {
            let list: Vec<Value> = corpus_list()
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "description": e.description,
                        "valid": e.expected.valid,
                        "feasible": e.expected.feasible,
                        "status": if e.expected.valid { "valid" } else { "deliberately-invalid" },
                    })
                })
                .collect();
            Ok(Outcome::ok(tagged("corpus", json!({"examples": list}))))
        }
        CorpusAction::Export { name, dir } => {
            let entries: Vec<_> = match name {
                Some(n) => vec![corpus_entry(&n).ok_or_else(|| anyhow!("no bundled example named `{n}`"))?],
                None => corpus_list().iter().collect(),
            };
            fs::create_dir_all(&dir)?;
            let mut written = Vec::new();
            for e in entries {
                let path = dir.join(format!("{}.json", e.name));
                fs::write(&path, e.source).with_context(|| format!("cannot write {}", path.display()))?;
                written.push(path.display().to_string());
            }
            Ok(Outcome::ok(tagged("corpus", json!({"written": written}))))
        }
    }
}

fn color_enabled() -> bool {
    matches!(
        std::env::var("LOGCONE_COLOR").as_deref(),
        Ok("1" | "always" | "true" | "yes")
    )
}

fn print_value(value: &Value, format: Format) {
    let mut out = io::stdout().lock();
    let text = if format.text {
        render_text(value)
    } else {
        let mut s = serde_json::to_string_pretty(value).expect("values serialize");
        s.push('\n');
        s
    };
    let _ = out.write_all(text.as_bytes());
}

fn status_line(violated: bool) -> String {
    let (word, code) = if violated { ("violations", "31") } else { ("ok", "32") };
    if color_enabled() {
        format!("status  \x1b[{code}m{word}\x1b[0m\n")
    } else {
        format!("status  {word}\n")
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => {
            if cli.format.text {
                let _ = io::stdout().write_all(status_line(outcome.violated).as_bytes());
            }
            print_value(&outcome.value, cli.format);
            if outcome.violated {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let msg = format!("{e:#}");
            if color_enabled() {
                eprintln!("\x1b[31merror\x1b[0m: {msg}");
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
    }
}
