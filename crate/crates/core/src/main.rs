//! Command-line front end. Exit codes: 0 success / realized, 1 input or
//! validation error, 2 obstructed / refuted / false verdict, 3 budget
//! exhausted (unknown).

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bgroup::constructions::{named_example, Expectation, EXAMPLE_NAMES};
use bgroup::decomp::{enumerate_decompositions, partition_spectrum, DecompLimits};
use bgroup::error::Error;
use bgroup::groups::{merge_overlap, near_iso_equal, BGroup};
use bgroup::json;
use bgroup::partitions::{
    enumerate_all, family_c, family_s, hook_report, PartitionFamily,
};
use bgroup::search::{
    search_realizer, verify_theorem_table, SearchBudget, SearchMode, VerdictStatus,
};

#[derive(Parser)]
#[command(
    name = "bgroup",
    version,
    about = "Decomposition spectra and partition realizability for block-rigid crq groups"
)]
struct Cli {
    /// Emit the machine-readable JSON report on stdout
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for table/search (0 = auto)
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Partition family operations
    Partitions {
        #[command(subcommand)]
        cmd: PartitionsCmd,
    },
    /// Group validation and invariants
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Partition spectrum of a group
    Spectrum {
        /// Group JSON file (or - for stdin)
        file: String,
        /// Include witness decompositions in the report
        #[arg(long)]
        decompositions: bool,
        #[arg(long, default_value_t = 12)]
        max_rank: u32,
        #[arg(long, default_value_t = 8)]
        max_primes: usize,
    },
    /// Search for a group realizing a family
    Search {
        /// Family: inline text (`2,2;2,1,1`), a file path, or JSON
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Contains)]
        mode: ModeArg,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the witness group JSON here when realized
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Realizability verdicts for all S(n,k), n <= n_max
    Table {
        n_max: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write each realized cell's witness group JSON into this directory
        #[arg(long)]
        emit_witnesses: Option<PathBuf>,
    },
    /// List the named example groups, or emit one with its expected spectrum
    Examples { name: Option<String> },
}

#[derive(Subcommand)]
enum PartitionsCmd {
    /// All partitions of n
    Enum { n: u32 },
    /// S(n,k): max part <= k and k + length <= n + 1
    S { n: u32, k: u32 },
    /// C(n,k): partitions of n into k parts
    C { n: u32, k: u32 },
    /// Hook report for a family (inline, file, or JSON)
    Hooked { family: String },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Validate a group document
    Validate { file: String },
    /// Mu-invariants and homogeneous ranks
    Mu { file: String },
    /// Frame of each piece: edges where mu-invariants share a prime
    Frame { file: String },
    /// Merge a two-piece group with overlapping typesets
    Merge { file: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Contains,
    Equals,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 6)]
    max_primes: usize,
    #[arg(long, default_value_t = 2)]
    max_exponent: u32,
    /// 0 means "the family rank n"
    #[arg(long, default_value_t = 0)]
    max_types: usize,
    #[arg(long, default_value_t = 60)]
    time_cap_secs: u64,
}

impl BudgetArgs {
    fn budget_for(&self, n: u32) -> SearchBudget {
        SearchBudget {
            max_primes: self.max_primes,
            max_exponent: self.max_exponent,
            max_types: if self.max_types == 0 {
                n as usize
            } else {
                self.max_types
            },
            time_cap: Duration::from_secs(self.time_cap_secs),
        }
    }
}

fn read_source(source: &str) -> Result<String, Error> {
    if source == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        return Ok(buf);
    }
    Ok(fs::read_to_string(source)?)
}

fn load_group(source: &str) -> Result<BGroup, Error> {
    json::group_from_json(&read_source(source)?)
}

/// Inline family text, or a path to a family file.
fn load_family(source: &str) -> Result<PartitionFamily, Error> {
    if source != "-" && Path::new(source).exists() {
        return json::family_from_str(&read_source(source)?);
    }
    if source == "-" {
        return json::family_from_str(&read_source(source)?);
    }
    json::family_from_str(source)
}

fn print_family(fam: &PartitionFamily, as_json: bool) {
    if as_json {
        let doc: Vec<&[u32]> = fam.iter().map(|p| p.parts()).collect();
        println!("{}", serde_json::to_string(&doc).unwrap());
    } else {
        print!("{fam}");
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Partitions { cmd } => match cmd {
            PartitionsCmd::Enum { n } => {
                print_family(&enumerate_all(n)?, cli.json);
                Ok(0)
            }
            PartitionsCmd::S { n, k } => {
                print_family(&family_s(n, k)?, cli.json);
                Ok(0)
            }
            PartitionsCmd::C { n, k } => {
                print_family(&family_c(n, k)?, cli.json);
                Ok(0)
            }
            PartitionsCmd::Hooked { family } => {
                let fam = load_family(&family)?;
                let rep = hook_report(&fam)?;
                if cli.json {
                    println!("{}", serde_json::to_string_pretty(&rep).unwrap());
                } else {
                    let hooks: Vec<String> =
                        rep.hooks.iter().map(|h| format!("({h})")).collect();
                    println!(
                        "n={} r={} t={} hooked={} hooks={}",
                        fam.n(),
                        rep.r,
                        rep.t,
                        rep.hooked,
                        if hooks.is_empty() {
                            "none".to_string()
                        } else {
                            hooks.join(" ")
                        }
                    );
                }
                Ok(if rep.hooked { 0 } else { 2 })
            }
        },
        Cmd::Group { cmd } => match cmd {
            GroupCmd::Validate { file } => {
                // parse errors surface as exit 1; a structured report means
                // the document was readable but the group is invalid
                let text = read_source(&file)?;
                let doc: json::BGroupDoc = serde_json::from_str(&text)?;
                match doc.to_group() {
                    Ok(group) => {
                        let rep = group.validate();
                        if cli.json {
                            println!("{}", serde_json::to_string_pretty(&rep).unwrap());
                        } else {
                            println!("valid group of rank {}", group.rank());
                        }
                        Ok(0)
                    }
                    Err(Error::Validation(v)) => {
                        if cli.json {
                            let rep = bgroup::ValidationReport::invalid(v);
                            println!("{}", serde_json::to_string_pretty(&rep).unwrap());
                        } else {
                            eprintln!("invalid: {v}");
                        }
                        Ok(1)
                    }
                    Err(e) => Err(e),
                }
            }
            GroupCmd::Mu { file } => {
                let group = load_group(&file)?;
                let doc = json::invariants_doc(&group.invariant_data());
                if cli.json {
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                } else {
                    println!(
                        "rank {} with regulator index {}",
                        doc.rank, doc.regulator_index
                    );
                    for t in &doc.types {
                        println!(
                            "  {}: rank {}, mu = {}{}",
                            t.label,
                            t.rank,
                            t.mu,
                            t.mu_value
                                .map(|v| format!(" = {v}"))
                                .unwrap_or_default()
                        );
                    }
                }
                Ok(0)
            }
            GroupCmd::Frame { file } => {
                let group = load_group(&file)?;
                let mut payload = Vec::new();
                for (i, piece) in group.pieces().iter().enumerate() {
                    let frame = piece.frame();
                    payload.push(serde_json::json!({
                        "piece": i,
                        "connected": frame.is_connected(),
                        "indecomposable": piece.is_indecomposable(),
                        "vertices": frame.vertices().iter().map(|t| t.label()).collect::<Vec<_>>(),
                        "edges": frame.edges(),
                    }));
                    if !cli.json {
                        let edges: Vec<String> = frame
                            .edges()
                            .iter()
                            .map(|&(a, b)| {
                                format!(
                                    "{}-{}",
                                    frame.vertices()[a].label(),
                                    frame.vertices()[b].label()
                                )
                            })
                            .collect();
                        println!(
                            "piece {i}: connected={} edges: {}",
                            frame.is_connected(),
                            if edges.is_empty() {
                                "none".to_string()
                            } else {
                                edges.join(" ")
                            }
                        );
                    }
                }
                if cli.json {
                    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                }
                Ok(0)
            }
            GroupCmd::Merge { file } => {
                let group = load_group(&file)?;
                if group.pieces().len() != 2 {
                    return Err(Error::Input(format!(
                        "merge needs exactly two pieces, got {}",
                        group.pieces().len()
                    )));
                }
                let out = merge_overlap(&group.pieces()[0], &group.pieces()[1])?;
                let mut pieces = vec![out.merged.clone()];
                pieces.extend(
                    out.split_off
                        .iter()
                        .cloned()
                        .map(bgroup::groups::RigidPiece::rank_one),
                );
                let merged = bgroup::groups::direct_sum(pieces)?;
                debug_assert!(near_iso_equal(
                    &group.invariant_data(),
                    &merged.invariant_data()
                ));
                if cli.json {
                    println!("{}", json::group_to_json(&merged));
                } else {
                    println!(
                        "merged into rank-{} piece plus {} rank-one summands",
                        out.merged.rank(),
                        out.split_off.len()
                    );
                    println!("{}", json::group_to_json(&merged));
                }
                Ok(0)
            }
        },
        Cmd::Spectrum {
            file,
            decompositions,
            max_rank,
            max_primes,
        } => {
            let group = load_group(&file)?;
            let limits = DecompLimits {
                max_rank,
                max_primes,
            };
            let data = group.invariant_data();
            let spectrum = partition_spectrum(&data, &limits)?;
            let decs = if decompositions {
                Some(enumerate_decompositions(&data, &limits)?)
            } else {
                None
            };
            let doc = json::spectrum_doc(&spectrum, decs.as_deref());
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("spectrum of a rank-{} group:", spectrum.n());
                print!("{spectrum}");
                if let Some(decs) = &decs {
                    println!("{} decompositions:", decs.len());
                    for d in decs {
                        let summands: Vec<String> = d
                            .summands()
                            .iter()
                            .map(|s| {
                                let labels: Vec<&str> =
                                    s.entries().keys().map(|t| t.label()).collect();
                                format!("[{}; {}]", labels.join(" "), s.regulator_index())
                            })
                            .collect();
                        println!("  ({}) = {}", d.shape(), summands.join(" + "));
                    }
                }
            }
            Ok(0)
        }
        Cmd::Search {
            family,
            mode,
            budget,
            emit_witness,
        } => {
            let fam = load_family(&family)?;
            let mode = match mode {
                ModeArg::Contains => SearchMode::Contains,
                ModeArg::Equals => SearchMode::Equals,
            };
            let verdict = search_realizer(&fam, mode, &budget.budget_for(fam.n()))?;
            let mut witness_path = None;
            if let (Some(path), Some(witness)) = (&emit_witness, &verdict.witness) {
                fs::write(path, json::group_to_json(witness))?;
                witness_path = Some(path.display().to_string());
            }
            let doc = json::verdict_doc(&verdict, witness_path, emit_witness.is_none());
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                match verdict.status {
                    VerdictStatus::Realized => {
                        println!("REALIZED ({} candidates examined)", verdict.log.candidates);
                        if let Some(w) = &verdict.witness {
                            println!("{}", json::group_to_json(w));
                        }
                    }
                    VerdictStatus::RefutedWithinBudget => println!(
                        "REFUTED_WITHIN_BUDGET ({} candidates exhausted)",
                        verdict.log.candidates
                    ),
                    VerdictStatus::Obstructed => println!(
                        "OBSTRUCTED: {}",
                        verdict.obstruction.as_ref().unwrap()
                    ),
                    VerdictStatus::Unknown => println!(
                        "UNKNOWN: {}",
                        verdict.log.notes.join("; ")
                    ),
                }
            }
            Ok(match verdict.status {
                VerdictStatus::Realized => 0,
                VerdictStatus::Obstructed | VerdictStatus::RefutedWithinBudget => 2,
                VerdictStatus::Unknown => 3,
            })
        }
        Cmd::Table {
            n_max,
            budget,
            emit_witnesses,
        } => {
            let table = verify_theorem_table(n_max, &budget.budget_for(n_max))?;
            let mut witness_paths = std::collections::BTreeMap::new();
            if let Some(dir) = &emit_witnesses {
                fs::create_dir_all(dir)?;
                for cell in &table.cells {
                    if let Some(w) = &cell.verdict.witness {
                        let path = dir.join(format!("s_{}_{}.json", cell.n, cell.k));
                        fs::write(&path, json::group_to_json(w))?;
                        witness_paths.insert((cell.n, cell.k), path.display().to_string());
                    }
                }
            }
            if cli.json {
                let doc = json::table_doc_with_paths(&table, &witness_paths);
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                print!("{}", table.render_text());
                if !witness_paths.is_empty() {
                    println!("witnesses written to {}", emit_witnesses.unwrap().display());
                }
            }
            let unknown = table
                .cells
                .iter()
                .any(|c| c.verdict.status == VerdictStatus::Unknown);
            Ok(if unknown { 3 } else { 0 })
        }
        Cmd::Examples { name } => match name {
            None => {
                for name in EXAMPLE_NAMES {
                    let ex = named_example(name)?;
                    println!("{name}: {}", ex.description);
                }
                Ok(0)
            }
            Some(name) => {
                let ex = named_example(&name)?;
                let expected = match &ex.expected {
                    Expectation::Exact(fam) => serde_json::json!({
                        "exact": fam.iter().map(|p| p.parts().to_vec()).collect::<Vec<_>>()
                    }),
                    Expectation::Contains(parts) => serde_json::json!({
                        "contains": parts.iter().map(|p| p.parts().to_vec()).collect::<Vec<_>>()
                    }),
                };
                let payload = serde_json::json!({
                    "name": ex.name,
                    "description": ex.description,
                    "group": json::BGroupDoc::from_group(&ex.group),
                    "expected_spectrum": expected,
                    "nearly_isomorphic_to": ex.near_iso_to,
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                Ok(0)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads != 1 {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if cli.threads > 0 {
            builder = builder.num_threads(cli.threads);
        }
        // auto (0) keeps rayon's default sizing
        let _ = builder.build_global();
    } else {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
