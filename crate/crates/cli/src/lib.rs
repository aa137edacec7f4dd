//! Command line front end. Exit codes: 0 success, 1 a property violation was
//! found, 2 usage or input error.

use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::{Path, PathBuf};
use tanglekit::decomposition::{
    chain_source, chain_to_linear_decomposition, foundational_linkage, refine_chain, LinearDecomposition, TreeDecomposition,
    CHAIN_SOURCES,
};
use tanglekit::generate::connected_graphs_up_to;
use tanglekit::inducing::{
    find_inducing_set, find_inducing_weights, read_graph6_stream, verify_p11_batch, P11Options, WeightFunction,
};
use tanglekit::io::{decode_graph6, encode_graph6, parse_edge_list, write_edge_list};
use tanglekit::pipeline::{reduce, rules_by_name, transfer_theorem1, witness_subgraph, ReduceConfig, ReductionTrace, RULES};
use tanglekit::rainbow_cloud::{
    choose_edge, clique_tangle, extend_after_deletion, extract_rc, synth_rc, validate_rc, RCDecomposition, SynthParams,
};
use tanglekit::tangles::{check_axioms, checker, enumerate_tangles, Tangle, CHECKERS};
use tanglekit::{Error, Graph};

#[derive(Parser, Debug)]
#[command(name = "tanglekit", about = "Tangles in small graphs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List all k-tangles of a graph.
    Tangles {
        #[arg(long)]
        k: usize,
        graph: PathBuf,
        /// Print JSON instead of the text form.
        #[arg(long)]
        json: bool,
    },
    /// Check that an orientation is a tangle and report the axioms.
    Verify {
        graph: PathBuf,
        tangle: PathBuf,
        #[arg(long, default_value = "maximal")]
        checker: String,
    },
    /// Reduce a graph while a tangle survives and write the trace.
    Reduce {
        graph: PathBuf,
        /// Tangle file; without it the first k-tangle is used.
        #[arg(long)]
        tangle: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated rule names in the order they are tried.
        #[arg(long, value_delimiter = ',')]
        rules: Option<Vec<String>>,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Find a least inducing set and a least inducing weight function.
    Induce {
        graph: PathBuf,
        #[arg(long)]
        tangle: Option<PathBuf>,
        /// Without a tangle file, treat every k-tangle.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        #[arg(long, default_value_t = 12)]
        budget: u64,
    },
    /// Carry a weight function inducing the terminal tangle of a trace back
    /// to its root graph.
    Transfer {
        trace: PathBuf,
        weights: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Extract a small subgraph witnessing the root tangle of a trace.
    Witness { trace: PathBuf },
    /// Check that every k-tangle of the given graphs has an inducing set.
    P11(P11Args),
    /// Rainbow-cloud decompositions.
    Rc {
        #[command(subcommand)]
        command: RcCommand,
    },
}

#[derive(Args, Debug)]
struct P11Args {
    #[arg(long)]
    k: usize,
    /// All connected graphs with at most this many vertices.
    #[arg(long, conflicts_with = "stream")]
    max_n: Option<usize>,
    /// File of graph6 lines.
    #[arg(long)]
    stream: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    max_size: usize,
    /// Budget for the weight search; 0 skips it.
    #[arg(long, default_value_t = 12)]
    budget: u64,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Where to write the JSON summary.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum RcCommand {
    /// Generate a synthetic instance.
    Synth {
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        sun: usize,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 7)]
        cloud: usize,
        #[arg(long)]
        split_cloud: bool,
        /// `bag,size`: a clique of this size inside the bag.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        bag_clique: Option<Vec<usize>>,
        #[arg(long)]
        graph_out: PathBuf,
        #[arg(long)]
        rc_out: PathBuf,
        /// Also write the k-tangle of the cloud clique.
        #[arg(long, requires = "tangle_out")]
        k: Option<usize>,
        #[arg(long)]
        tangle_out: Option<PathBuf>,
    },
    /// Validate a decomposition against a graph.
    Validate { graph: PathBuf, rc: PathBuf },
    /// Choose an edge and extend the tangle to the graph without it.
    Extend {
        graph: PathBuf,
        rc: PathBuf,
        tangle: PathBuf,
        /// Skip the length and degree preconditions.
        #[arg(long)]
        relaxed: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build a decomposition from a chain of separations.
    Extract {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "longest")]
        chain: String,
        /// Tree decomposition for the `tree-decomposition` chain source.
        #[arg(long)]
        td: Option<PathBuf>,
        /// A linear decomposition with linkage to use instead of a chain.
        #[arg(long, conflicts_with = "chain")]
        decomposition: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        window: usize,
    },
}

enum Failure {
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Io(_) | Error::LabelTooLarge(_) => Failure::Usage(e.to_string()),
            other => Failure::Violation(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Edge list, or graph6 for `.g6` files (first line).
fn read_graph(path: &Path) -> std::result::Result<Graph, Failure> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "g6") {
        let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
        Ok(decode_graph6(line)?)
    } else {
        Ok(parse_edge_list(&text)?)
    }
}

fn read_tangle(path: &Path) -> std::result::Result<Tangle, Failure> {
    Ok(Tangle::parse_any(&read(path)?)?)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn first_tangle(g: &Graph, k: Option<usize>) -> std::result::Result<Tangle, Failure> {
    let k = k.ok_or_else(|| Failure::Usage("give --tangle or --k".into()))?;
    enumerate_tangles(g, k).into_iter().next().ok_or_else(|| Failure::Violation(format!("no {k}-tangle")))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Tangles { k, graph, json } => {
            let g = read_graph(&graph)?;
            let ts = enumerate_tangles(&g, k);
            if json {
                let js: Vec<_> = ts.iter().map(|t| t.to_json()).collect();
                emit(out, None, &format!("{}\n", serde_json::to_string_pretty(&js).expect("serialisable")))?;
            } else {
                let mut text = format!("{} tangle(s) of order {k}\n", ts.len());
                for t in &ts {
                    text.push('\n');
                    text.push_str(&t.to_text());
                }
                emit(out, None, &text)?;
            }
            Ok(true)
        }
        Command::Verify { graph, tangle, checker: name } => {
            let g = read_graph(&graph)?;
            let t = read_tangle(&tangle)?;
            let c = checker(&name).ok_or_else(|| Failure::Usage(format!("unknown checker {name:?}; known: {CHECKERS:?}")))?;
            let complete = tanglekit::tangles::as_orientation(&g, t.k, &t.members()).is_ok();
            let ok = complete && c.has_no_forbidden_triple(&g, &t);
            let ax = check_axioms(&t, &g);
            emit(
                out,
                None,
                &format!(
                    "orientation {complete}\ntangle {ok}\nconsistent {}\nregular {}\nprofile {}\n",
                    ax.consistent, ax.regular, ax.profile
                ),
            )?;
            Ok(ok)
        }
        Command::Reduce { graph, tangle, k, rules, max_steps, out: path } => {
            let g = read_graph(&graph)?;
            let t = match tangle {
                Some(p) => read_tangle(&p)?,
                None => first_tangle(&g, k)?,
            };
            let names: Vec<&str> = match &rules {
                Some(r) => r.iter().map(String::as_str).collect(),
                None => RULES.to_vec(),
            };
            let rules = rules_by_name(&names).map_err(|e| Failure::Usage(format!("{e}; known: {RULES:?}")))?;
            let trace = reduce(&g, &t, &ReduceConfig { rules, max_steps })?;
            emit(out, path.as_deref(), &trace.to_text())?;
            if path.is_some() {
                let tg = trace.terminal_graph();
                emit(out, None, &format!("{} steps, terminal graph {} vertices {} edges\n", trace.steps.len(), tg.order(), tg.size()))?;
            }
            Ok(true)
        }
        Command::Induce { graph, tangle, k, max_size, budget } => {
            let g = read_graph(&graph)?;
            let ts = match tangle {
                Some(p) => vec![read_tangle(&p)?],
                None => enumerate_tangles(&g, k.ok_or_else(|| Failure::Usage("give --tangle or --k".into()))?),
            };
            let mut all = true;
            let mut text = String::new();
            for (i, t) in ts.iter().enumerate() {
                let set = find_inducing_set(&g, t, max_size);
                let w = find_inducing_weights(&g, t, budget);
                all &= set.is_some();
                let set = set.map_or("none".to_string(), |x| format!("{:?}", x.to_vec()));
                let w = w.map_or("none".to_string(), |w| w.to_string());
                text.push_str(&format!("tangle {i}: set {set} weights {w}\n"));
            }
            emit(out, None, &text)?;
            Ok(all)
        }
        Command::Transfer { trace, weights, out: path } => {
            let trace = ReductionTrace::from_text(&read(&trace)?)?;
            let w = WeightFunction::from_text(&read(&weights)?)?;
            let lifted = transfer_theorem1(&trace, &w)?;
            emit(out, path.as_deref(), &lifted.to_text())?;
            Ok(true)
        }
        Command::Witness { trace } => {
            let trace = ReductionTrace::from_text(&read(&trace)?)?;
            let h = witness_subgraph(&trace)?;
            emit(out, None, &write_edge_list(&h))?;
            Ok(true)
        }
        Command::P11(a) => p11(a, out),
        Command::Rc { command } => rc(command, out),
    }
}

fn p11(a: P11Args, out: &mut dyn Write) -> Outcome {
    let stream = match (&a.stream, a.max_n) {
        (Some(p), _) => read_graph6_stream(&read(p)?),
        (None, Some(n)) => connected_graphs_up_to(n)
            .into_iter()
            .map(|g| (encode_graph6(&g).unwrap_or_default(), Ok(g)))
            .collect(),
        (None, None) => return Err(Failure::Usage("give --stream or --max-n".into())),
    };
    let mut opts = P11Options::new(a.k, a.max_size);
    opts.weight_budget = a.budget;
    opts.checkpoint = a.checkpoint;
    let report = verify_p11_batch(stream, &opts)?;
    let summary = report.summary();
    let js = serde_json::to_string_pretty(&summary).expect("serialisable");
    emit(out, None, &report.to_table())?;
    emit(out, None, &format!("{js}\n"))?;
    if let Some(p) = &a.summary {
        emit(out, Some(p), &format!("{js}\n"))?;
    }
    for e in report.entries.iter().filter(|e| !e.failures.is_empty()) {
        for f in &e.failures {
            emit(out, None, &format!("counterexample {}\n{f}", e.id))?;
        }
    }
    Ok(report.is_clean())
}

fn rc(command: RcCommand, out: &mut dyn Write) -> Outcome {
    match command {
        RcCommand::Synth { ell, sun, length, cloud, split_cloud, bag_clique, graph_out, rc_out, k, tangle_out } => {
            let mut p = SynthParams::new(ell, sun, length, cloud);
            p.split_cloud = split_cloud;
            p.bag_clique = bag_clique.map(|v| (v[0], v[1]));
            let s = synth_rc(&p)?;
            emit(out, Some(&graph_out), &write_edge_list(&s.graph))?;
            emit(out, Some(&rc_out), &s.rc.to_text())?;
            if let (Some(k), Some(tp)) = (k, tangle_out) {
                let t = clique_tangle(&s.graph, k, s.cloud_clique)?;
                emit(out, Some(&tp), &t.to_text())?;
            }
            emit(out, None, &format!("{} vertices, {} edges\n", s.graph.order(), s.graph.size()))?;
            Ok(true)
        }
        RcCommand::Validate { graph, rc } => {
            let g = read_graph(&graph)?;
            let rc = RCDecomposition::from_text(&read(&rc)?)?;
            let rep = validate_rc(&g, &rc);
            emit(out, None, &format!("{rep:#?}\nvalid {}\n", rep.is_valid()))?;
            Ok(rep.is_valid())
        }
        RcCommand::Extend { graph, rc, tangle, relaxed, out: path } => {
            let g = read_graph(&graph)?;
            let rc = RCDecomposition::from_text(&read(&rc)?)?;
            let t = read_tangle(&tangle)?;
            let choice = choose_edge(&g, &rc, &t)?;
            let t2 = extend_after_deletion(&g, &t, &choice, relaxed)?;
            emit(out, None, &format!("edge {} {}\n", choice.edge.0, choice.edge.1))?;
            emit(out, path.as_deref(), &t2.to_text())?;
            Ok(true)
        }
        RcCommand::Extract { graph, k, chain, td, decomposition, window } => {
            let g = read_graph(&graph)?;
            let (d, linkage) = match decomposition {
                Some(p) => {
                    let (d, l) = LinearDecomposition::from_text(&read(&p)?)?;
                    let l = match l {
                        Some(l) => l,
                        None => foundational_linkage(&g, &d).ok_or_else(|| Failure::Violation("no foundational linkage".into()))?,
                    };
                    (d, l)
                }
                None => {
                    let td = td.map(|p| read(&p).and_then(|t| Ok(TreeDecomposition::parse(&t)?))).transpose()?;
                    let source =
                        chain_source(&chain, td).map_err(|e| Failure::Usage(format!("{e}; known: {CHAIN_SOURCES:?}")))?;
                    let c = source.chain(&g, k)?;
                    let refined = refine_chain(&g, &c, window)?;
                    let d = chain_to_linear_decomposition(&g, &refined.chain)?;
                    let l = foundational_linkage(&g, &d).ok_or_else(|| Failure::Violation("no foundational linkage".into()))?;
                    (d, l)
                }
            };
            let rc = extract_rc(&g, &d, &linkage)?;
            emit(out, None, &rc.to_text())?;
            Ok(true)
        }
    }
}

/// Runs the CLI on `argv` (program name first), writing results to `out`
/// and diagnostics to `err`.
pub fn run_with(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match execute(cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Violation(m)) => {
            let _ = writeln!(err, "violation: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}

pub fn run(argv: Vec<String>) -> i32 {
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
