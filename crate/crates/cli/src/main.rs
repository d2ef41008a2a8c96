use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use perfdel::catalog::{builtin, expand_record, load_catalog, parse_orbit, PolytopeRecord};
use perfdel_cli::series::format_function;
use perfdel_cli::{run_series, verify, Check, Settings};

const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "perfdel", version, about = "Verify the catalog of perfect Delaunay polytopes")]
struct Cli {
    /// Catalog file to use instead of the built-in one.
    #[arg(long, global = true, value_name = "PATH")]
    catalog: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks on catalog records.
    Verify {
        /// Record ids (comma separated or repeated); all records by default.
        #[arg(long = "id", value_delimiter = ',')]
        ids: Vec<String>,
        /// Check names (comma separated or repeated); all checks by default.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write the report as JSON lines to this file.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
        /// Per-check allowance for the budgeted searches.
        #[arg(long, value_name = "SECONDS", default_value_t = 60)]
        budget: u64,
        /// Print JSON lines instead of the aligned table.
        #[arg(long)]
        json: bool,
        /// Record wall time per check (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Print a record with its expanded vertices.
    Show { id: String },
    /// Generate and check members of the Upsilon series.
    Series {
        #[arg(required = true)]
        n: Vec<usize>,
        /// Largest n accepted.
        #[arg(long, default_value_t = 12)]
        max: usize,
    },
    /// Expand an orbit such as "[0,1^4;-2] × 5".
    Expand { notation: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("perfdel: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}

fn load(path: &Option<PathBuf>) -> Result<Vec<PolytopeRecord>, String> {
    match path {
        Some(p) => load_catalog(p).map_err(|e| e.to_string()),
        None => Ok(builtin()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Verify { ids, checks, jobs, report, budget, json, timings } => {
            let catalog = load(&cli.catalog)?;
            let records: Vec<PolytopeRecord> = if ids.is_empty() {
                catalog
            } else {
                ids.iter()
                    .map(|id| {
                        catalog.iter().find(|r| &r.id == id).cloned().ok_or_else(|| format!("unknown record {id:?}"))
                    })
                    .collect::<Result<_, _>>()?
            };
            let checks: Vec<Check> = if checks.is_empty() {
                Check::ALL.to_vec()
            } else {
                checks.iter().map(|c| c.parse()).collect::<Result<_, _>>()?
            };
            let settings = Settings { budget_seconds: budget, timings };
            let rep = verify(&records, &checks, &settings, jobs);
            if let Some(path) = report {
                std::fs::write(&path, rep.to_json_lines())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            if json {
                print!("{}", rep.to_json_lines());
            } else {
                let color = std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal();
                print!("{}", rep.to_text(color));
            }
            Ok(ExitCode::from(rep.exit_code() as u8))
        }
        Command::Show { id } => {
            let catalog = load(&cli.catalog)?;
            let r = catalog.iter().find(|r| r.id == id).ok_or_else(|| format!("unknown record {id:?}"))?;
            print!("{}", show(r)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Series { n, max } => {
            if let Some(bad) = n.iter().find(|&&k| k < 7 || k > max) {
                return Err(format!("series needs 7 <= n <= {max}, got {bad}"));
            }
            let mut all_ok = true;
            for k in n {
                let s = run_series(k).map_err(|e| e.to_string())?;
                print!("{s}");
                all_ok &= s.ok();
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Expand { notation } => {
            let o = parse_orbit(&notation).map_err(|e| e.to_string())?;
            for p in o.expand() {
                println!("{p}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn show(r: &PolytopeRecord) -> Result<String, String> {
    let mut out = format!("id = {}\ndim = {}\n", r.id, r.dim);
    if !r.is_available() {
        out.push_str("status = source unavailable\n");
        return Ok(out);
    }
    let f = r.affine_function().map_err(|e| e.to_string())?;
    out.push_str(&format_function(&f));
    let e = &r.expected;
    let mut line = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            out.push_str(&format!("{k} = {v}\n"));
        }
    };
    line("iso_order", e.iso_order.as_ref().map(ToString::to_string));
    line("lattice_aut_order", e.lattice_aut_order.as_ref().map(ToString::to_string));
    line("symmetric_subgroup_k", e.symmetric_subgroup_k.map(|k| k.to_string()));
    line("shortest_count", e.shortest_count.map(|k| k.to_string()));
    line("quadinv_dim", e.quadinv_dim.map(|k| k.to_string()));
    line(
        "spectrum",
        e.spectrum.as_ref().map(|s| format!("{{{}}}", s.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))),
    );
    line("lamina", e.lamina.map(|k| k.to_string()));
    line("symmetry_type", e.symmetry_type.map(|t| t.to_string()));
    line(
        "subpolytopes",
        e.subpolytopes.as_ref().map(|s| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")),
    );
    for n in &r.notes {
        out.push_str(&format!("note = {n}\n"));
    }
    let vertices = expand_record(r).map_err(|e| e.to_string())?;
    out.push_str(&format!("vertices = {}\n", vertices.len()));
    for v in vertices {
        out.push_str(&format!("  {v}\n"));
    }
    Ok(out)
}
