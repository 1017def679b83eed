use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use charkit::error::Error;
use charkit::families;
use charkit::group::{Group, DEFAULT_ORDER_CAP};
use charkit::io;
use charkit::lab::{Lab, TheoremSet};
use charkit::report;
use charkit::TableDump;

/// Exact character tables of small finite groups and verification of
/// derived-length bounds for product-character kernels.
#[derive(Parser)]
#[command(name = "charkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the character table of a group as JSON.
    Table {
        /// Family name (e.g. cyclic-6, dihedral-8, extraspecial-27, d4xd4)
        /// or path to a group.json file.
        group: String,
    },
    /// Decompose the product of two irreducible characters.
    Decompose {
        group: String,
        /// Character index, or conj(I) for the complex conjugate of row I.
        #[arg(long)]
        chi: String,
        #[arg(long)]
        psi: String,
    },
    /// Build the descending kernel chain for a constituent of a product.
    Chains {
        group: String,
        #[arg(long)]
        chi: String,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        alpha: String,
    },
    /// Run the theorem checks over a corpus and emit a JSON-lines report.
    Verify {
        /// `builtin` or a directory of group.json files.
        #[arg(long, default_value = "builtin")]
        corpus: String,
        /// Comma-separated subset of: A, B, supersolvable, lemmas, section4.
        #[arg(long)]
        theorems: Option<String>,
        /// Skip corpus groups of order above this bound.
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count orbits of a matrix group on the nonzero vectors of GF(q)^dim.
    Orbits {
        /// Path to an action.json file.
        action: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Tsv,
}

#[derive(Serialize)]
struct DecomposeDump {
    group: String,
    chi: usize,
    psi: usize,
    eta: usize,
    constituents: Vec<(usize, u64)>,
    constituent_degrees: Vec<i64>,
}

#[derive(Serialize)]
struct ChainDump {
    group: String,
    chi: usize,
    psi: usize,
    alpha: usize,
    r: usize,
    eta: usize,
    link_orders: Vec<usize>,
    nu_degrees: Vec<i64>,
    s_delta_sizes: Vec<usize>,
}

fn order_cap() -> usize {
    std::env::var("CHARKIT_MAX_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ORDER_CAP)
}

fn load_group(spec: &str, cap: usize) -> Result<Arc<Group>, Error> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        io::load_group_file(path, cap)
    } else {
        families::group_from_name(spec, cap)
    }
}

/// Parses `I` or `conj(I)` against a table: the latter resolves to the row
/// holding the complex conjugate of row I.
fn resolve_character(lab: &Lab, arg: &str) -> Result<usize, Error> {
    let (inner, conjugate) = match arg.strip_prefix("conj(").and_then(|s| s.strip_suffix(')')) {
        Some(inner) => (inner, true),
        None => (arg, false),
    };
    let idx: usize = inner
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad character index: {arg}")))?;
    if idx >= lab.table().len() {
        return Err(Error::InvalidInput(format!(
            "character index {idx} out of range (table has {} rows)",
            lab.table().len()
        )));
    }
    Ok(if conjugate {
        lab.table().conjugate_index(idx)
    } else {
        idx
    })
}

fn parse_theorems(arg: Option<&str>) -> Result<TheoremSet, Error> {
    let Some(list) = arg else {
        return Ok(TheoremSet::all());
    };
    let mut set = TheoremSet::none();
    for item in list.split(',') {
        match item.trim().to_ascii_lowercase().as_str() {
            "a" | "chains" => set.chains = true,
            "b" => set.theorem_b = true,
            "supersolvable" => set.supersolvable_bound = true,
            "lemmas" => set.lemmas = true,
            "section4" => set.section4 = true,
            other => {
                return Err(Error::InvalidInput(format!("unknown theorem selector: {other}")))
            }
        }
    }
    Ok(set)
}

fn load_corpus(corpus: &str, cap: usize, max_order: Option<usize>) -> Result<Vec<Arc<Group>>, Error> {
    let groups = if corpus == "builtin" {
        let mut groups = Vec::new();
        for entry in families::builtin_corpus() {
            if max_order.is_some_and(|m| entry.expected_order > m) {
                continue;
            }
            groups.push(entry.build(cap)?);
        }
        groups
    } else {
        let dir = Path::new(corpus);
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| Error::InvalidInput(format!("cannot read corpus dir {corpus}: {e}")))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
            .collect();
        paths.sort();
        let mut groups = Vec::new();
        for path in paths {
            let group = io::load_group_file(&path, cap)?;
            if max_order.is_some_and(|m| group.order() > m) {
                continue;
            }
            groups.push(group);
        }
        groups
    };
    Ok(groups)
}

fn run(cli: Cli) -> Result<i32, Error> {
    let cap = order_cap();
    match cli.command {
        Command::Table { group } => {
            let g = load_group(&group, cap)?;
            let lab = Lab::new(g)?;
            let dump = TableDump::from_table(lab.table());
            println!("{}", serde_json::to_string_pretty(&dump).expect("table serializes"));
            Ok(0)
        }
        Command::Decompose { group, chi, psi } => {
            let g = load_group(&group, cap)?;
            let lab = Lab::new(g)?;
            let chi = resolve_character(&lab, &chi)?;
            let psi = resolve_character(&lab, &psi)?;
            let pair = lab.pair(chi, psi)?;
            let dump = DecomposeDump {
                group: lab.group().name().to_string(),
                chi,
                psi,
                eta: pair.decomposition.eta,
                constituents: pair.decomposition.constituents.clone(),
                constituent_degrees: pair
                    .decomposition
                    .constituents
                    .iter()
                    .map(|&(i, _)| lab.table().character(i).degree())
                    .collect(),
            };
            println!("{}", serde_json::to_string_pretty(&dump).expect("serializes"));
            Ok(0)
        }
        Command::Chains {
            group,
            chi,
            psi,
            alpha,
        } => {
            let g = load_group(&group, cap)?;
            let lab = Lab::new(g)?;
            let chi = resolve_character(&lab, &chi)?;
            let psi = resolve_character(&lab, &psi)?;
            let alpha = resolve_character(&lab, &alpha)?;
            let pair = lab.pair(chi, psi)?;
            let chain = lab.build_chain(chi, psi, alpha)?;
            let eval = lab.evaluate_chain(&chain, &pair, alpha);
            let dump = ChainDump {
                group: lab.group().name().to_string(),
                chi,
                psi,
                alpha,
                r: chain.r(),
                eta: pair.decomposition.eta,
                link_orders: chain.links.iter().map(|l| l.order()).collect(),
                nu_degrees: chain.characters.iter().map(|f| f.degree()).collect(),
                s_delta_sizes: eval.s_delta_sets.iter().map(|s| s.len()).collect(),
            };
            println!("{}", serde_json::to_string_pretty(&dump).expect("serializes"));
            if !eval.bounds_hold() || !eval.s_delta_nonempty {
                eprintln!("counterexample: chain invariants fail");
                return Ok(1);
            }
            Ok(0)
        }
        Command::Verify {
            corpus,
            theorems,
            max_order,
            format,
            out,
        } => {
            let theorems = parse_theorems(theorems.as_deref())?;
            let groups = load_corpus(&corpus, cap, max_order)?;
            let report = report::run_verify(&groups, theorems)?;
            let text = match format {
                Format::Jsonl => report::render_jsonl(&report),
                Format::Tsv => report::render_tsv(&report),
            };
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            if let Some(record) = report.counterexample {
                eprintln!(
                    "counterexample: {}",
                    serde_json::to_string(&record).expect("records serialize")
                );
                return Ok(1);
            }
            Ok(0)
        }
        Command::Orbits { action } => {
            let action = io::load_action_file(&action)?;
            let summary = charkit::orbit::orbit_count(&action, cap)?;
            println!("{}", serde_json::to_string_pretty(&summary).expect("serializes"));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Error::Counterexample(msg)) => {
            eprintln!("counterexample: {msg}");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
