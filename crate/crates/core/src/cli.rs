//! The `subdist` command line.
//!
//! Exit codes: 0 for success or a "yes" answer, 1 for a "no" answer, 2 for
//! usage, format and cap errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::circuit::{max_routing, routing_cycle_histogram, CircuitError, PolarizedCircuit, DEFAULT_MAX_ROUTINGS};
use crate::format::{
    circuit_to_json, ids_to_json, parse_circuit_json, parse_ids_json, to_json_string, CircuitFile, FormatError,
    SCHEMA_VERSION,
};
use crate::gadget::{tabulate_circuit, tabulate_gadgets, GadgetError, GadgetKind, GadgetReport};
use crate::reduction::{circuit_to_ids, ids_to_circuit, sat_to_circuit, ReductionError};
use crate::sat::{count_satisfying, normalize_3sat, parse_dimacs, CnfFormula, DimacsError, SatError, DEFAULT_MAX_VARS};
use crate::solver::{distance_histogram, distance_to_ids_subgroup, SolverError, DEFAULT_MAX_SUBSETS};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Dimacs { path: PathBuf, source: DimacsError },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{path}: invalid gadget fixture: {source}")]
    Fixture { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "subdist", version, about = "Subgroup distance, maximal routing and the reductions from 3-SAT")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance exactly
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Transform an instance into another problem
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Cross-check solution counts through the reduction chain
    #[command(subcommand)]
    Check(CheckCommand),
    /// Verify gadget truth tables
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Count solutions
    #[command(subcommand)]
    Count(CountCommand),
}

#[derive(Debug, Subcommand)]
enum SolveCommand {
    /// Exact distance from pi to the subgroup of an IDS instance
    Distance {
        file: PathBuf,
        /// Exit 1 when the distance exceeds the instance bound k
        #[arg(long)]
        decide: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_SUBSETS)]
        max_subsets: usize,
    },
    /// Maximum cycle count over respecting routings of a circuit
    Routing {
        file: PathBuf,
        /// Exit 1 unless some routing has at least K cycles
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_ROUTINGS)]
        max_routings: u64,
    },
}

#[derive(Debug, Args)]
struct ReduceFiles {
    input: PathBuf,
    output: PathBuf,
    /// Manifest path [default: <OUTPUT>.manifest.json]
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ReduceCommand {
    /// DIMACS 3-SAT formula to polarized circuit JSON
    Sat2circuit {
        #[command(flatten)]
        files: ReduceFiles,
    },
    /// Circuit JSON and cycle target K to IDS instance JSON
    Circuit2ids {
        #[command(flatten)]
        files: ReduceFiles,
        #[arg(long)]
        k: usize,
    },
    /// IDS instance JSON to circuit JSON
    Ids2circuit {
        #[command(flatten)]
        files: ReduceFiles,
    },
}

#[derive(Debug, Subcommand)]
enum CheckCommand {
    /// Compare model count, optimal routing count and subgroup witness count
    Parsimony {
        cnf: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
        max_vars: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_ROUTINGS)]
        max_routings: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_SUBSETS)]
        max_subsets: usize,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Tabulate the I, E, F, G and A gadgets against their truth tables
    Gadgets {
        #[arg(long)]
        json: bool,
        /// Tabulate a gadget circuit from a file instead of the built-ins
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum CountCommand {
    /// Number of satisfying assignments of a DIMACS formula
    Sat {
        cnf: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
        max_vars: usize,
    },
}

/// A gadget circuit to tabulate: `{"gadget": "E", "circuit": {...}}`, class
/// `c` of the circuit carrying slot `c`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GadgetFixture {
    gadget: String,
    circuit: CircuitFile,
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Solve(SolveCommand::Distance { file, decide, json, max_subsets }) => {
            solve_distance(&file, decide, json, max_subsets, out)
        }
        Command::Solve(SolveCommand::Routing { file, k, json, max_routings }) => {
            solve_routing(&file, k, json, max_routings, out)
        }
        Command::Reduce(ReduceCommand::Sat2circuit { files }) => reduce_sat2circuit(&files, out),
        Command::Reduce(ReduceCommand::Circuit2ids { files, k }) => reduce_circuit2ids(&files, k, out),
        Command::Reduce(ReduceCommand::Ids2circuit { files }) => reduce_ids2circuit(&files, out),
        Command::Check(CheckCommand::Parsimony { cnf, json, max_vars, max_routings, max_subsets }) => {
            check_parsimony(&cnf, json, max_vars, max_routings, max_subsets, out)
        }
        Command::Verify(VerifyCommand::Gadgets { json, fixture }) => verify_gadgets(fixture.as_deref(), json, out),
        Command::Count(CountCommand::Sat { cnf, json, max_vars }) => count_sat(&cnf, json, max_vars, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn read_dimacs(path: &Path) -> Result<CnfFormula, CliError> {
    parse_dimacs(&read(path)?).map_err(|source| CliError::Dimacs { path: path.to_path_buf(), source })
}

fn read_circuit(path: &Path) -> Result<PolarizedCircuit, CliError> {
    parse_circuit_json(&read(path)?).map_err(|source| CliError::Format { path: path.to_path_buf(), source })
}

fn emit_json(out: &mut dyn Write, value: &Value) -> Result<(), CliError> {
    out.write_all(to_json_string(value).as_bytes())?;
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn one_based(indices: impl Iterator<Item = usize>) -> Vec<usize> {
    indices.map(|j| j + 1).collect()
}

fn solve_distance(path: &Path, decide: bool, json: bool, cap: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let inst =
        parse_ids_json(&read(path)?).map_err(|source| CliError::Format { path: path.to_path_buf(), source })?;
    let found = distance_to_ids_subgroup(&inst, cap)?;
    let within = found.distance <= inst.bound_k();
    let subset = one_based(found.witness.indices());
    if json {
        emit_json(
            out,
            &json!({
                "schema_version": SCHEMA_VERSION,
                "n": inst.degree(),
                "k": inst.bound_k(),
                "distance": found.distance,
                "within_bound": within,
                "witness_subset": subset,
                "witness_element": found.element.images(),
            }),
        )?;
    } else {
        writeln!(out, "distance: {}", found.distance)?;
        writeln!(out, "witness subset: {subset:?}")?;
        writeln!(out, "witness element: {:?} = {}", found.element.images(), found.element)?;
        writeln!(out, "within bound k = {}: {}", inst.bound_k(), yes_no(within))?;
    }
    Ok(if decide && !within { EXIT_NO } else { EXIT_YES })
}

fn solve_routing(path: &Path, k: Option<usize>, json: bool, cap: u64, out: &mut dyn Write) -> Result<i32, CliError> {
    let pc = read_circuit(path)?;
    let best = max_routing(&pc, cap)?;
    let witness: Vec<Vec<usize>> = best.witness.perms().iter().map(|p| p.images()).collect();
    let reaches = k.map(|k| best.max_cycles >= k);
    if json {
        emit_json(
            out,
            &json!({
                "schema_version": SCHEMA_VERSION,
                "edges": pc.num_edges(),
                "classes": pc.num_classes(),
                "max_cycles": best.max_cycles,
                "optimal_count": best.optimal_count,
                "witness_routing": witness,
                "k": k,
                "reaches_k": reaches,
            }),
        )?;
    } else {
        writeln!(out, "max cycles: {}", best.max_cycles)?;
        writeln!(out, "optimal routings: {}", best.optimal_count)?;
        for (c, images) in witness.iter().enumerate() {
            writeln!(out, "class {}: {images:?}", c + 1)?;
        }
        if let (Some(k), Some(r)) = (k, reaches) {
            writeln!(out, "at least {k} cycles: {}", yes_no(r))?;
        }
    }
    Ok(if reaches == Some(false) { EXIT_NO } else { EXIT_YES })
}

fn manifest_path(files: &ReduceFiles) -> PathBuf {
    files.manifest.clone().unwrap_or_else(|| {
        let mut name = files.output.clone().into_os_string();
        name.push(".manifest.json");
        PathBuf::from(name)
    })
}

fn finish_reduce(files: &ReduceFiles, instance: &str, manifest: &Value, out: &mut dyn Write) -> Result<i32, CliError> {
    let manifest_path = manifest_path(files);
    write_file(&files.output, instance)?;
    write_file(&manifest_path, &to_json_string(manifest))?;
    writeln!(out, "wrote {}", files.output.display())?;
    writeln!(out, "wrote {}", manifest_path.display())?;
    Ok(EXIT_YES)
}

fn reduce_sat2circuit(files: &ReduceFiles, out: &mut dyn Write) -> Result<i32, CliError> {
    let normalized = normalize_3sat(&read_dimacs(&files.input)?)?;
    let sci = sat_to_circuit(&normalized.formula)?;
    let counts = sci.counts();
    let split = sci.split();
    let classes: Vec<Value> = sci
        .class_to_variable()
        .iter()
        .enumerate()
        .map(|(c, &y)| {
            let (x, j) = split.origin(y);
            json!({"class": c + 1, "variable": y, "original": x, "occurrence": j})
        })
        .collect();
    let shape = sci.circuit().shape();
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "sat2circuit",
        "input_variables": normalized.formula.num_variables(),
        "input_clauses": normalized.formula.clauses().len(),
        "removed_tautologies": normalized.removed_tautologies,
        "split_variables": split.num_variables(),
        "b": counts.b,
        "g": counts.g,
        "i": counts.i,
        "e": counts.e,
        "m": sci.target_m(),
        "vertices": sci.circuit().circuit().vertices().len(),
        "edges": sci.circuit().num_edges(),
        "width": shape.width,
        "max_valency": shape.max_valency,
        "equivalences": split.equivalences(),
        "classes": classes,
    });
    finish_reduce(files, &circuit_to_json(sci.circuit()), &manifest, out)
}

fn reduce_circuit2ids(files: &ReduceFiles, k: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let pc = read_circuit(&files.input)?;
    let reduced = circuit_to_ids(&pc, k)?;
    let inst = &reduced.instance;
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "circuit2ids",
        "k": k,
        "n": inst.degree(),
        "bound": inst.bound_k(),
        "width": inst.ids().width(),
        "generator_classes": one_based(reduced.generator_classes.iter().copied()),
    });
    finish_reduce(files, &ids_to_json(inst), &manifest, out)
}

fn reduce_ids2circuit(files: &ReduceFiles, out: &mut dyn Write) -> Result<i32, CliError> {
    let inst = parse_ids_json(&read(&files.input)?)
        .map_err(|source| CliError::Format { path: files.input.clone(), source })?;
    let reduced = ids_to_circuit(&inst)?;
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "ids2circuit",
        "n": inst.degree(),
        "bound": inst.bound_k(),
        "k": reduced.k_routing,
        "edges": reduced.circuit.num_edges(),
        "point_vertices": reduced.point_vertex,
        "generator_vertices": reduced.transposition_vertices,
    });
    finish_reduce(files, &circuit_to_json(&reduced.circuit), &manifest, out)
}

fn check_parsimony(
    path: &Path,
    json: bool,
    max_vars: usize,
    max_routings: u64,
    max_subsets: usize,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let normalized = normalize_3sat(&read_dimacs(path)?)?;
    let phi = normalized.formula.compacted();
    let models = count_satisfying(&phi, max_vars)?;
    let sci = sat_to_circuit(&phi)?;
    let m = sci.target_m();
    let routing_hist = routing_cycle_histogram(sci.circuit(), max_routings)?;
    let max_cycles = routing_hist.keys().next_back().copied().unwrap_or(0);
    let routings_at_m = routing_hist.get(&m).copied().unwrap_or(0);
    let inst = circuit_to_ids(sci.circuit(), m)?.instance;
    let target_distance = inst.bound_k();
    let elements_at_distance = distance_histogram(&inst, max_subsets)?.get(&target_distance).copied().unwrap_or(0);
    let equal = models == routings_at_m && routings_at_m == elements_at_distance;
    if json {
        emit_json(
            out,
            &json!({
                "schema_version": SCHEMA_VERSION,
                "variables": phi.num_variables(),
                "clauses": phi.clauses().len(),
                "removed_tautologies": normalized.removed_tautologies,
                "m": m,
                "max_cycles": max_cycles,
                "n": inst.degree(),
                "distance": target_distance,
                "satisfying_assignments": models,
                "optimal_routings": routings_at_m,
                "subgroup_elements": elements_at_distance,
                "parsimonious": equal,
            }),
        )?;
    } else {
        writeln!(out, "variables: {} (clauses: {})", phi.num_variables(), phi.clauses().len())?;
        writeln!(out, "target cycles M: {m} (max cycles: {max_cycles})")?;
        writeln!(out, "target distance n - M: {} - {m} = {target_distance}", inst.degree())?;
        writeln!(out, "satisfying assignments: {models}")?;
        writeln!(out, "routings with M cycles: {routings_at_m}")?;
        writeln!(out, "subgroup elements at distance n - M: {elements_at_distance}")?;
        writeln!(out, "parsimonious: {}", yes_no(equal))?;
    }
    Ok(if equal { EXIT_YES } else { EXIT_NO })
}

fn verify_gadgets(fixture: Option<&Path>, json: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = match fixture {
        None => tabulate_gadgets()?,
        Some(path) => {
            let text = read(path)?;
            let fixture: GadgetFixture =
                serde_json::from_str(&text).map_err(|source| CliError::Fixture { path: path.to_path_buf(), source })?;
            let kind: GadgetKind = fixture.gadget.parse()?;
            let pc =
                fixture.circuit.to_circuit().map_err(|source| CliError::Format { path: path.to_path_buf(), source })?;
            GadgetReport { rows: tabulate_circuit(kind, &pc)? }
        }
    };
    let mismatches = report.mismatches().count();
    if json {
        let rows: Vec<Value> = report
            .rows
            .iter()
            .map(|r| {
                json!({
                    "gadget": r.gadget,
                    "assignment": r.assignment_string(),
                    "expected": r.expected,
                    "actual": r.actual,
                    "ok": r.matches(),
                })
            })
            .collect();
        emit_json(out, &json!({"schema_version": SCHEMA_VERSION, "rows": rows, "mismatches": mismatches}))?;
    } else {
        for r in &report.rows {
            let status = if r.matches() { "ok" } else { "MISMATCH" };
            writeln!(out, "{} {}: expected {}, got {} {status}", r.gadget, r.assignment_string(), r.expected, r.actual)?;
        }
        writeln!(out, "{} rows, {mismatches} mismatches", report.rows.len())?;
    }
    Ok(if mismatches == 0 { EXIT_YES } else { EXIT_NO })
}

fn count_sat(path: &Path, json: bool, max_vars: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let f = read_dimacs(path)?;
    let count = count_satisfying(&f, max_vars)?;
    if json {
        emit_json(
            out,
            &json!({"schema_version": SCHEMA_VERSION, "variables": f.num_variables(), "count": count}),
        )?;
    } else {
        writeln!(out, "{count}")?;
    }
    Ok(EXIT_YES)
}
