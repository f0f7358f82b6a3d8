mod inputs;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use polygpt::decompose::irreducible_components;
use polygpt::dynamics::{is_transitive, reversible_maps};
use polygpt::geometry::field::set_epsilon;
use polygpt::geometry::{Field, Float64, Matrix, Rational};
use polygpt::interactions::{is_trivial_lri, lri_decompose, LocalGroups};
use polygpt::scenario::{self, validate_report_json, Config, Mode, Report};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "polygpt", version, about = "Exact checks on polytope state spaces and their reversible dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Arithmetic: exact rationals or tolerance-based floats.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact, global = true)]
    mode: ModeArg,

    /// Comparison tolerance in float mode.
    #[arg(long, default_value_t = 1e-9, global = true)]
    eps: f64,

    /// Node budget for symmetry and interaction searches.
    #[arg(long, default_value_t = polygpt::dynamics::DEFAULT_SEARCH_BUDGET, global = true)]
    budget: u64,

    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized constructions (`scramble` without a seed).
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and report every check.
    Run { file: PathBuf },
    /// Split a space into irreducible direct summands.
    Decompose { space: String },
    /// List the reversible transformation group of a space.
    Group { space: String },
    /// Does the reversible group act transitively on pure states?
    Transitive { space: String },
    /// Decompose a map on a product space as a locally reversible interaction.
    Lri {
        /// `cnot`, `swap`, or a JSON file with the matrix rows.
        map: String,
        /// A product space, e.g. `product(gbit, gbit)`.
        space: String,
    },
    /// Validate a JSON report; with a scenario, also re-run it and compare.
    Verify {
        report: PathBuf,
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
}

/// Outcome of a subcommand: whether every check succeeded.
type Status = Result<bool>;

fn config(cli: &Cli) -> Config {
    let mode = match cli.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Float => Mode::Float,
    };
    Config { mode, eps: cli.eps, budget: cli.budget, seed: cli.seed }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("file not found: {}", path.display()))
}

fn scenario_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Parse failures are usage errors; they are reported and mapped to exit 2.
fn load_report(path: &Path, cfg: &Config) -> Result<Report> {
    let text = read(path)?;
    let ast = scenario::parse(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    Ok(scenario::execute(&ast, &scenario_name(path), cfg))
}

fn print_report(report: &Report, json: bool) {
    if json {
        println!("{}", report.to_json());
        return;
    }
    println!("scenario {} ({} mode)", report.scenario, report.mode);
    for c in &report.checks {
        let detail = c.certificate.get("error").and_then(Value::as_str).map(|e| format!(": {e}")).unwrap_or_default();
        println!("  {:<5} {:<15} {:<15} {:>6} ms{detail}", c.id, c.kind, c.verdict.as_str(), c.millis);
    }
    let passed = report.checks.iter().filter(|c| c.verdict.is_success()).count();
    println!("{passed}/{} checks succeeded", report.checks.len());
}

fn matrix_json<F: Field>(m: &Matrix<F>) -> Value {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect()
}

fn print_matrix<F: Field>(m: &Matrix<F>) {
    let rows = m.to_rows();
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for r in cells {
        let line: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
        println!("  [{}]", line.join(" "));
    }
}

fn emit(json: bool, value: Value, human: impl FnOnce()) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json value"));
    } else {
        human();
    }
}

fn decompose<F: Field>(cli: &Cli, arg: &str) -> Status {
    let space = inputs::load_space::<F>(arg)?;
    let dec = irreducible_components(&space);
    let ranks: Vec<usize> = dec.components().iter().map(|c| c.rank()).collect();
    emit(cli.json, json!({"components": dec.len(), "blocks": dec.blocks(), "ranks": ranks}), || {
        println!("{} irreducible component(s)", dec.len());
        for (b, r) in dec.blocks().iter().zip(&ranks) {
            println!("  vertices {b:?} (rank {r})");
        }
    });
    Ok(true)
}

fn group<F: Field>(cli: &Cli, arg: &str) -> Status {
    let space = inputs::load_space::<F>(arg)?;
    let g = reversible_maps(&space, cli.budget)?;
    let elements: Vec<Value> =
        g.elements().iter().map(|e| json!({"perm": e.perm, "matrix": matrix_json(&e.matrix)})).collect();
    emit(cli.json, json!({"order": g.order(), "generators": g.generators(), "elements": elements}), || {
        println!("order {}", g.order());
        for (i, e) in g.elements().iter().enumerate() {
            println!("element {i}: vertex permutation {:?}", e.perm);
            print_matrix(&e.matrix);
        }
    });
    Ok(true)
}

fn transitive<F: Field>(cli: &Cli, arg: &str) -> Status {
    let space = inputs::load_space::<F>(arg)?;
    let g = reversible_maps(&space, cli.budget)?;
    let t = is_transitive(&g);
    emit(cli.json, json!({"transitive": t, "orbits": g.orbits(), "group_order": g.order()}), || {
        println!("transitive: {t}");
        for o in g.orbits() {
            println!("  orbit {o:?}");
        }
    });
    Ok(true)
}

fn lri<F: Field>(cli: &Cli, map: &str, arg: &str) -> Status {
    let space = inputs::load_space::<F>(arg)?;
    let (a, b) = space.tensor_factors().context("lri needs a product space such as product(gbit, gbit)")?;
    let t = inputs::load_map(map, &space)?;
    let groups = LocalGroups::compute(a, b, cli.budget)?;
    let w = lri_decompose(&t, &groups)?;
    let value = match &w {
        None => json!({"witness": null}),
        Some(w) => json!({
            "trivial": is_trivial_lri(w),
            "x": w.x.iter().map(|m| matrix_json(&m.matrix)).collect::<Vec<_>>(),
            "y": w.y.iter().map(|m| matrix_json(&m.matrix)).collect::<Vec<_>>(),
            "perm": w.perm,
        }),
    };
    emit(cli.json, value, || match &w {
        None => println!("no witness: the map is not a locally reversible interaction"),
        Some(w) => {
            println!("locally reversible interaction ({})", if is_trivial_lri(w) { "trivial" } else { "nontrivial" });
            for (j, x) in w.x.iter().enumerate() {
                println!("X for vertex {j} of B: {:?}", x.perm);
            }
            for (i, y) in w.y.iter().enumerate() {
                println!("Y for vertex {i} of A: {:?}", y.perm);
            }
        }
    });
    Ok(w.is_some())
}

fn verify(cli: &Cli, report: &Path, scenario: Option<&Path>) -> Status {
    let text = read(report)?;
    let doc: Value = serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", report.display()))?;
    if let Err(e) = validate_report_json(&doc) {
        eprintln!("schema: {e}");
        return Ok(false);
    }
    let stored = Report::from_json(&text)?;
    let mut ok = stored.exit_code() == 0;
    println!("schema valid; {} checks, exit status {}", stored.checks.len(), stored.exit_code());
    if let Some(path) = scenario {
        let fresh = load_report(path, &config(cli))?;
        let same = fresh.without_timing() == stored.without_timing();
        println!("re-run {}", if same { "matches" } else { "differs" });
        ok &= same;
    }
    Ok(ok)
}

fn dispatch<F: Field>(cli: &Cli) -> Status {
    match &cli.command {
        Command::Run { file } => {
            let report = load_report(file, &config(cli))?;
            print_report(&report, cli.json);
            Ok(report.exit_code() == 0)
        }
        Command::Decompose { space } => decompose::<F>(cli, space),
        Command::Group { space } => group::<F>(cli, space),
        Command::Transitive { space } => transitive::<F>(cli, space),
        Command::Lri { map, space } => lri::<F>(cli, map, space),
        Command::Verify { report, scenario } => verify(cli, report, scenario.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.mode {
        ModeArg::Exact => dispatch::<Rational>(&cli),
        ModeArg::Float => {
            set_epsilon(cli.eps);
            dispatch::<Float64>(&cli)
        }
    };
    match status {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
