use std::collections::BTreeSet;
use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use objchip::equiv::{check_binding, generate_suite, run_suite};
use objchip::frontend::{object_session, parse_program, validate_constraints};
use objchip::hw::candidates_from_text;
use objchip::interconnect::{cnn_workload, compare, rows_to_csv, simulate, TopologyKind, TopologyModel, Workload};
use objchip::layout::{compose, load_templates, render_svg, BoundingBox, Selections};
use objchip::project::{base_dir, load_project, run_pipeline, save_project};
use objchip::service::{serve, AppState};
use objchip::session::WidthPolicy;

#[derive(Parser)]
#[command(name = "objchip", version, about = "Object programs to checked protocols, interconnects and floorplans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check program objects against hardware FSMs.
    Check {
        #[arg(long)]
        project: Option<PathBuf>,
        /// Program source (`.oo`), when not using a project.
        #[arg(long)]
        program: Option<PathBuf>,
        /// `object=fsm-file`, repeatable.
        #[arg(long = "bind", value_parser = parse_pair)]
        bindings: Vec<(String, String)>,
        /// Control messages to contract out of the hardware, comma separated.
        #[arg(long, value_delimiter = ',')]
        filter: Vec<String>,
    },
    /// Run a workload on a bus or crossbar.
    Simulate {
        #[arg(long, default_value = "bus")]
        topology: TopologyKind,
        #[arg(long, default_value_t = 5)]
        nodes: usize,
        #[arg(long, default_value_t = 32)]
        width: u32,
        #[arg(long, default_value_t = 700.0)]
        freq: f64,
        /// `cnn:n=8,k=3` or `all-to-one:bits=64`.
        #[arg(long, default_value = "cnn:n=8,k=3")]
        workload: String,
        /// `nodes=LO..HI`: run every node count on both topologies.
        #[arg(long)]
        sweep: Option<String>,
        /// Write `.json` or `.csv`; prints JSON when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pack template variants into a bounding box.
    Layout {
        #[arg(long)]
        templates: PathBuf,
        /// `ip=variant` pairs, comma separated.
        #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
        select: Vec<(String, String)>,
        /// `WxH` in µm.
        #[arg(long = "box", value_parser = parse_box)]
        bbox: BoundingBox,
        #[arg(long, default_value_t = 5.0)]
        spacing: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Classify a seeded mutation suite.
    Scenarios {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1200)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        min_len: usize,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
        #[arg(long, value_delimiter = ',')]
        filter: Vec<String>,
    },
    /// Run the whole flow for a project.
    Pipeline {
        #[arg(long)]
        project: PathBuf,
        /// Store verdicts and refreshed hashes back into the project file.
        #[arg(long)]
        save: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Serve the HTTP API for one project.
    Serve {
        #[arg(long)]
        project: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    let (a, b) = s.split_once('=').ok_or_else(|| format!("expected `key=value`, got `{s}`"))?;
    Ok((a.trim().to_string(), b.trim().to_string()))
}

fn parse_box(s: &str) -> Result<BoundingBox, String> {
    let (w, h) = s.split_once('x').ok_or_else(|| format!("expected `WxH`, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok(BoundingBox { width: num(w)?, height: num(h)? })
}

fn parse_workload(text: &str, nodes: usize) -> Result<Workload, String> {
    let (kind, args) = text.split_once(':').unwrap_or((text, ""));
    let mut params = std::collections::BTreeMap::new();
    for kv in args.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = parse_pair(kv)?;
        params.insert(k, v.parse::<u64>().map_err(|e| format!("`{kv}`: {e}"))?);
    }
    match kind {
        "cnn" => {
            let (n, k) = (params.get("n").copied().unwrap_or(8), params.get("k").copied().unwrap_or(3));
            cnn_workload(n, k).map(|c| c.workload).map_err(|e| e.to_string())
        }
        "all-to-one" => Ok(Workload::all_to_one(nodes, params.get("bits").copied().unwrap_or(64))),
        other => Err(format!("unknown workload `{other}`")),
    }
}

/// Failure that maps to exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Usage> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Usage> {
    match cli.command {
        Command::Check { project: Some(path), .. } => {
            let project = load_project(&path)?;
            let report = run_pipeline(&project, &base_dir(&path))?;
            for v in &report.violations {
                println!("{v}");
            }
            for c in &report.checks {
                println!("{} ↔ {}: {} {}", c.object, c.ip, c.outcome.name(), c.witness.join(" "));
            }
            let ok = report.violations.is_empty() && report.checks.iter().all(|c| c.outcome.is_equivalent());
            Ok(u8::from(!ok))
        }
        Command::Check { project: None, program, bindings, filter } => {
            let program = program.ok_or_else(|| Usage("either --project or --program is required".into()))?;
            let source = fs::read_to_string(&program)?;
            let graph = parse_program(&source)?;
            let violations = validate_constraints(&graph, &source);
            for v in &violations {
                println!("{v}");
            }
            if !violations.is_empty() {
                return Ok(1);
            }
            let filter: BTreeSet<String> = filter.into_iter().collect();
            let mut ok = true;
            for (object, fsm) in bindings {
                let session = object_session(&graph, &object, &WidthPolicy::default())?
                    .ok_or_else(|| Usage(format!("object `{object}` takes part in no call")))?;
                let candidates = candidates_from_text(&fs::read_to_string(&fsm)?)?;
                let verdict = check_binding(&session, &candidates, &filter)?;
                println!("{object} ↔ {fsm}: {verdict}");
                ok &= verdict.outcome.is_equivalent();
            }
            Ok(u8::from(!ok))
        }
        Command::Simulate { topology, nodes, width, freq, workload, sweep, out } => {
            let base = TopologyModel { width, freq_mhz: freq, ..TopologyModel::new(topology, nodes) };
            let as_csv = out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "csv"));
            match sweep {
                None => {
                    let w = parse_workload(&workload, nodes)?;
                    let report = simulate(&base, &w)?;
                    if as_csv {
                        let rows = compare(&[(workload, w)], &[base])?;
                        write_or_print(out.as_deref(), &rows_to_csv(&rows))?;
                    } else {
                        write_or_print(out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
                    }
                }
                Some(range) => {
                    let range = range.strip_prefix("nodes=").unwrap_or(&range);
                    let (lo, hi) = range.split_once("..").ok_or_else(|| Usage(format!("bad sweep `{range}`")))?;
                    let (lo, hi): (usize, usize) = (lo.parse()?, hi.parse()?);
                    let mut rows = Vec::new();
                    for n in lo..=hi {
                        let w = parse_workload(&workload, n)?;
                        if w.nodes() > n {
                            continue;
                        }
                        let tops = [TopologyKind::SnoopyBus, TopologyKind::Crossbar].map(|k| TopologyModel { kind: k, ..base.with_nodes(n) });
                        rows.extend(compare(&[(workload.clone(), w)], &tops)?);
                    }
                    let text = if as_csv { rows_to_csv(&rows) } else { serde_json::to_string_pretty(&rows)? };
                    write_or_print(out.as_deref(), &text)?;
                }
            }
            Ok(0)
        }
        Command::Layout { templates, select, bbox, spacing, svg } => {
            let library = load_templates(&fs::read_to_string(&templates)?)?;
            let selections: Selections = select.into_iter().collect();
            let plan = compose(&library, &selections, bbox, spacing)?;
            if let Some(path) = svg {
                fs::write(path, render_svg(&plan))?;
            }
            println!("{}", serde_json::to_string_pretty(&plan)?);
            Ok(u8::from(!plan.fit))
        }
        Command::Scenarios { seed, count, min_len, max_len, filter } => {
            let suite = generate_suite(seed, count, min_len..=max_len)?;
            let summary = run_suite(&suite, &filter.into_iter().collect());
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(u8::from(summary.false_positive > 0))
        }
        Command::Pipeline { project: path, save, svg } => {
            let mut project = load_project(&path)?;
            let base = base_dir(&path);
            let report = run_pipeline(&project, &base)?;
            if let (Some(out), Some(plan)) = (svg, &report.floorplan) {
                fs::write(out, render_svg(plan))?;
            }
            if save {
                project.record(&report);
                project.refresh_hashes(&base)?;
                save_project(&project, &path)?;
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.exit_code() as u8)
        }
        Command::Serve { project: path, port } => {
            let project = load_project(&path)?;
            let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "project".into());
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async {
                let state = AppState::new();
                state.insert(id, project, base_dir(&path), Some(path.clone())).await;
                serve(SocketAddr::from(([127, 0, 0, 1], port)), state).await
            })?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
