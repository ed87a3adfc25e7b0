use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use voronoi_iso::families::{scan_csv, ClassName};
use voronoi_iso::quotient::reference_table;
use voronoi_iso::{
    build_cell, classify_point, embed_euclidean, enumerate_two_value_orbits, export_obj, f_closed,
    f_geometric, minimize_f, q_from_f, random_restart_survey, ClassifyConfig, DiffConfig,
    MinimizeConfig, SellingParams,
};

mod render;

use render::{fmt6, num, nums, Emit};

#[derive(Parser)]
#[command(name = "voronoi-iso", version, about = "Isoperimetric quotient of 3-D lattice Voronoi cells")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Determinant, F on both paths, Q, face areas and volume.
    Eval {
        #[command(flatten)]
        rho: RhoArg,
        #[arg(long)]
        json: bool,
    },
    /// Finite-difference gradient, Hessian, spectra and classification.
    Analyze {
        #[command(flatten)]
        rho: RhoArg,
        #[arg(long, default_value_t = 6e-6)]
        h_grad: f64,
        #[arg(long, default_value_t = 1.2e-4)]
        h_hess: f64,
        #[arg(long)]
        json: bool,
    },
    /// SC, FCC and BCC with exact F and Q.
    Table {
        #[arg(long)]
        json: bool,
    },
    /// Two-value patterns grouped into S4 orbits.
    Orbits {
        #[arg(long)]
        json: bool,
    },
    /// CSV scan of a two-value class along p = u, q = 1.
    Family {
        #[arg(long, default_value = "O")]
        class: ClassName,
        #[arg(long, default_value_t = 0.0)]
        u_min: f64,
        #[arg(long, default_value_t = 50.0)]
        u_max: f64,
        #[arg(long, default_value_t = 5000)]
        steps: usize,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Projected descent from one start, or a seeded random-restart survey.
    Minimize {
        #[arg(long, value_parser = parse_rho, conflicts_with = "random", required_unless_present = "random")]
        start: Option<[f64; 6]>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        #[arg(long)]
        json: bool,
    },
    /// Wavefront OBJ of the cell in Euclidean coordinates.
    Export {
        #[command(flatten)]
        rho: RhoArg,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RhoArg {
    /// Selling parameters `a,b,c,d,e,f` = (ρ01, ρ02, ρ03, ρ12, ρ13, ρ23).
    #[arg(long, value_parser = parse_rho, allow_hyphen_values = true)]
    rho: [f64; 6],
}

fn parse_rho(s: &str) -> Result<[f64; 6], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!("expected 6 comma-separated values, got {}", parts.len()));
    }
    let mut out = [0.0; 6];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part.parse().map_err(|e| format!("`{part}`: {e}"))?;
    }
    Ok(out)
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] voronoi_iso::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_degenerate() => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 4,
        }
    }
}

fn params(values: [f64; 6]) -> Result<SellingParams, CliError> {
    Ok(SellingParams::new(values)?)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            render::write_stdout(text);
            Ok(())
        }
    }
}

fn eval(rho: SellingParams, emit: Emit) -> Result<(), CliError> {
    let cell = build_cell(&rho)?;
    let fc = f_closed(&rho);
    let fg = f_geometric(&rho)?;
    let faces: Vec<(String, f64)> = cell.faces.iter().map(|f| (f.id.to_string(), f.scalar_area)).collect();
    emit.print(
        || {
            json!({
                "rho": nums(rho.as_array()),
                "det": num(rho.det()),
                "F_closed": num(fc),
                "F_geometric": num(fg),
                "Q": num(q_from_f(fc)),
                "faces": faces.iter().map(|(n, a)| json!({"name": n, "area": num(*a)})).collect::<Vec<_>>(),
                "volume": num(cell.volume),
            })
        },
        || {
            let mut s = format!("rho          {rho}\n");
            s += &format!("det A        {}\n", fmt6(rho.det()));
            s += &format!("F (closed)   {}\n", fmt6(fc));
            s += &format!("F (geometry) {}\n", fmt6(fg));
            s += &format!("Q            {}\n", fmt6(q_from_f(fc)));
            s += &format!("volume       {}\n", fmt6(cell.volume));
            s += &format!("total area   {}\n", fmt6(cell.total_area));
            for (n, a) in &faces {
                s += &format!("  {n:<5} {}\n", fmt6(*a));
            }
            s
        },
    );
    Ok(())
}

fn analyze(rho: SellingParams, h_grad: f64, h_hess: f64, emit: Emit) -> Result<(), CliError> {
    let config = ClassifyConfig {
        diff: DiffConfig { h_grad, h_hess },
        ..ClassifyConfig::default()
    };
    let r = classify_point(&rho, &config)?;
    emit.print(
        || {
            json!({
                "rho": nums(rho.as_array()),
                "gradient": nums(&r.gradient),
                "hessian": r.hessian.iter().map(|row| nums(row)).collect::<Vec<_>>(),
                "full_spectrum": nums(&r.full_spectrum),
                "tangent_spectrum": nums(&r.tangent_spectrum),
                "active_set": r.active_set,
                "one_sided": r.one_sided,
                "descent_direction": r.descent_direction.as_ref().map(|v| nums(v)),
                "classification": r.classification.as_str(),
            })
        },
        || {
            let row = |v: &[f64]| v.iter().map(|x| format!("{:>10}", fmt6(*x))).collect::<Vec<_>>().join(" ");
            let mut s = format!("rho              {rho}\n");
            s += &format!("gradient         {}\n", row(&r.gradient));
            s += "hessian\n";
            for h in &r.hessian {
                s += &format!("                 {}\n", row(h));
            }
            s += &format!("full spectrum    {}\n", row(&r.full_spectrum));
            s += &format!("tangent spectrum {}\n", row(&r.tangent_spectrum));
            s += &format!("active set       {:?}\n", r.active_set);
            if r.one_sided {
                s += "one-sided stencils used\n";
            }
            if let Some(v) = &r.descent_direction {
                s += &format!("descent          {}\n", row(v));
            }
            s += &format!("classification   {}\n", r.classification);
            s
        },
    );
    Ok(())
}

fn table(emit: Emit) {
    let rows = reference_table();
    emit.print(
        || {
            Value::Array(
                rows.iter()
                    .map(|r| {
                        json!({
                            "structure": r.structure,
                            "cell": r.cell,
                            "exact": r.exact,
                            "rho": nums(r.params.as_array()),
                            "F": num(r.f),
                            "Q": format!("{:.4}", r.q),
                        })
                    })
                    .collect(),
            )
        },
        || {
            let mut s = format!("{:<10}{:<24}{:<30}{:>10}{:>8}\n", "structure", "cell", "F exact", "F", "Q");
            for r in &rows {
                s += &format!(
                    "{:<10}{:<24}{:<30}{:>10.6}{:>8.4}\n",
                    r.structure, r.cell, r.exact, r.f, r.q
                );
            }
            s
        },
    );
}

fn orbits(emit: Emit) {
    let classes = enumerate_two_value_orbits();
    let pattern = |m: &[bool; 6]| m.iter().map(|&b| if b { 'p' } else { 'q' }).collect::<String>();
    emit.print(
        || {
            Value::Array(
                classes
                    .iter()
                    .map(|c| {
                        json!({
                            "class": c.name.as_str(),
                            "weight": c.weight,
                            "representative": pattern(&c.representative),
                            "orbit_size": c.orbit_size,
                        })
                    })
                    .collect(),
            )
        },
        || {
            let mut s = String::from("class weight representative size\n");
            for c in &classes {
                s += &format!(
                    "{:<5} {:>6} {:>14} {:>4}\n",
                    c.name.as_str(),
                    c.weight,
                    pattern(&c.representative),
                    c.orbit_size
                );
            }
            s
        },
    );
}

fn minimize(start: Option<[f64; 6]>, random: Option<usize>, seed: u64, max_iter: usize, emit: Emit) -> Result<(), CliError> {
    let config = MinimizeConfig {
        max_iter,
        ..MinimizeConfig::default()
    };
    if let Some(x) = start {
        let rho = params(x)?;
        let r = minimize_f(&rho, &config);
        emit.print(
            || {
                json!({
                    "start": nums(r.start.as_array()),
                    "minimizer": nums(r.minimizer.as_array()),
                    "F": num(r.f_value),
                    "iterations": r.iterations,
                    "converged": r.converged,
                    "residual": num(r.residual),
                    "fallback_used": r.fallback_used,
                    "first_direction": r.first_direction.as_ref().map(|v| nums(v)),
                })
            },
            || {
                let mut s = format!("start      {}\n", r.start);
                s += &format!("minimizer  {}\n", r.minimizer);
                s += &format!("F          {}\n", fmt6(r.f_value));
                s += &format!("iterations {}\n", r.iterations);
                s += &format!("converged  {}\n", r.converged);
                if r.fallback_used {
                    s += "simplex fallback used\n";
                }
                s
            },
        );
        return Ok(());
    }
    let n = random.unwrap_or(1);
    if n == 0 {
        return Err(voronoi_iso::Error::Domain("--random needs at least one start".into()).into());
    }
    let summary = random_restart_survey(n, seed, &config);
    emit.print(
        || {
            json!({
                "seed": summary.seed,
                "n_starts": summary.n_starts,
                "best_F": num(summary.best_f),
                "best_minimizer": nums(summary.best_minimizer.as_array()),
                "converged_fraction": num(summary.converged_fraction),
                "counterexample_candidates": summary.counterexample_candidates,
                "note": summary.note,
                "runs": summary.runs.iter().map(|r| json!({
                    "index": r.index,
                    "start": nums(r.start.as_array()),
                    "minimizer": nums(r.minimizer.as_array()),
                    "F": num(r.f_value),
                    "iterations": r.iterations,
                    "converged": r.converged,
                })).collect::<Vec<_>>(),
            })
        },
        || {
            let mut s = format!("seed {} starts {}\n", summary.seed, summary.n_starts);
            s += &format!("best F            {}\n", fmt6(summary.best_f));
            s += &format!("best minimizer    {}\n", summary.best_minimizer);
            s += &format!("reached BCC       {:.1}%\n", 100.0 * summary.converged_fraction);
            s += &format!("counterexamples   {:?}\n", summary.counterexample_candidates);
            s += &format!("note: {}\n", summary.note);
            s
        },
    );
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval { rho, json } => eval(params(rho.rho)?, Emit::from(json)),
        Command::Analyze { rho, h_grad, h_hess, json } => {
            analyze(params(rho.rho)?, h_grad, h_hess, Emit::from(json))
        }
        Command::Table { json } => {
            table(Emit::from(json));
            Ok(())
        }
        Command::Orbits { json } => {
            orbits(Emit::from(json));
            Ok(())
        }
        Command::Family { class, u_min, u_max, steps, out } => {
            let csv = scan_csv(class, u_min, u_max, steps)?;
            write_or_print(out.as_deref(), &csv)
        }
        Command::Minimize { start, random, seed, max_iter, json } => {
            minimize(start, random, seed, max_iter, Emit::from(json))
        }
        Command::Export { rho, out } => {
            let rho = params(rho.rho)?;
            let cell = build_cell(&rho)?;
            let obj = export_obj(&cell, &embed_euclidean(&rho)?);
            write_or_print(out.as_deref(), &obj)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn rho_parsing() {
        assert_eq!(parse_rho("1, 1,1,0,0,0").unwrap(), [1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(parse_rho("1,1,1").is_err());
        assert!(parse_rho("1,1,1,1,1,x").is_err());
    }

    #[test]
    fn exit_codes() {
        let degenerate = params([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap_err();
        assert_eq!(degenerate.exit_code(), 3);
        let negative = params([1.0, -1.0, 1.0, 1.0, 1.0, 1.0]).unwrap_err();
        assert_eq!(negative.exit_code(), 2);
    }
}
