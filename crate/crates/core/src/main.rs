use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fscat::finsetcat::{hom_dimension, HomClass};
use fscat::fsfilt::{analyze_theta, filtration_level, subquotient_decompose, theta_matrix, HomModule};
use fscat::verify::{all_passed, dims_csv, reports_json, run_checks, write_file, RunOptions, VerifyError, CHECK_IDS};

/// Exact computations with linearized categories of finite sets.
#[derive(Debug, Parser)]
#[command(name = "fscat", version)]
struct Cli {
    /// Largest finite set size used by sweeps.
    #[arg(long, global = true, default_value_t = 6)]
    max_size: usize,
    /// Write machine-readable output here.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write the dimension table here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Record wall-clock time per check (makes reports non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Flavor {
    Fs,
    Fi,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hom-space and filtration dimensions for a <= b <= max-size.
    Dims,
    /// The map Θ_a(b): kFS(b,a) -> D kFI(a,b).
    Theta {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Bimodule decomposition of kFS(b,a) or kFI(a,b).
    Decompose {
        #[arg(long, value_enum)]
        flavor: Flavor,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        a: usize,
    },
    /// Levels and subquotients of the filtration of kFS(b,a).
    Filtration {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        a: usize,
    },
    /// Run one check, or `all`.
    Verify {
        #[arg(value_parser = check_id)]
        check: String,
    },
}

fn check_id(s: &str) -> Result<String, String> {
    if s == "all" || CHECK_IDS.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!("expected `all` or one of: {}", CHECK_IDS.join(", ")))
    }
}

/// Relative output paths go under `FSCAT_OUT_DIR` when it is set.
fn output_path(p: &Path) -> PathBuf {
    match std::env::var_os("FSCAT_OUT_DIR") {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn emit_json(cli: &Cli, value: &serde_json::Value) -> Result<(), VerifyError> {
    if let Some(p) = &cli.json {
        write_file(&output_path(p), &(serde_json::to_string_pretty(value)? + "\n"))?;
    }
    Ok(())
}

fn emit_csv(cli: &Cli) -> Result<(), VerifyError> {
    if let Some(p) = &cli.csv {
        write_file(&output_path(p), &dims_csv(cli.max_size))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, Box<dyn std::error::Error>> {
    match &cli.command {
        Command::Dims => {
            let mut rows = Vec::new();
            println!(
                "{:>3} {:>3} {:>8} {:>8} {:>8} {:>8} {:>8}",
                "b", "a", "FA", "FS", "FI(a,b)", "FB", "FS0"
            );
            for b in 0..=cli.max_size {
                for a in 0..=b {
                    let fa = hom_dimension(HomClass::All, b, a);
                    let fs = hom_dimension(HomClass::Surjection, b, a);
                    let fi = hom_dimension(HomClass::Injection, a, b);
                    let fb = hom_dimension(HomClass::Bijection, b, a);
                    let fs0 = filtration_level(b, a, 0).dim();
                    println!("{b:>3} {a:>3} {fa:>8} {fs:>8} {fi:>8} {fb:>8} {fs0:>8}");
                    rows.push(json!({"b": b, "a": a, "fa": fa, "fs": fs, "fi": fi, "fb": fb, "fs0": fs0}));
                }
            }
            emit_json(cli, &json!(rows))?;
            emit_csv(cli)?;
            Ok(true)
        }
        Command::Theta { a, b } => {
            let t = analyze_theta(*a, *b)?;
            println!("Θ_{a}({b}): {} -> {}, rank {}", t.domain_dim, t.target_dim, t.rank);
            println!(
                "kernel equals level {}: {}",
                *b as i64 - *a as i64 - 1,
                t.kernel_is_level
            );
            println!("cokernel: {}", t.coker);
            let m = theta_matrix(*a, *b);
            if m.rows() * m.cols() <= 400 {
                println!("{m:?}");
            }
            emit_json(cli, &json!(t))?;
            Ok(true)
        }
        Command::Decompose { flavor, b, a } => {
            let module = match flavor {
                Flavor::Fs => HomModule::new(HomClass::Surjection, *b, *a),
                Flavor::Fi => HomModule::new(HomClass::Injection, *a, *b),
            };
            let class = module.bidecompose()?;
            println!("dim {}: {}", module.dim(), class);
            emit_json(cli, &json!({"dim": module.dim(), "class": class}))?;
            Ok(true)
        }
        Command::Filtration { b, a } => {
            let mut levels = Vec::new();
            for t in -1..=*b as i64 {
                let dim = filtration_level(*b, *a, t).dim();
                let sub = if t >= 0 {
                    Some(subquotient_decompose(t as usize, *b, *a)?)
                } else {
                    None
                };
                match &sub {
                    Some(c) => println!("t={t:>2} dim {dim:>5}  subquotient {c}"),
                    None => println!("t={t:>2} dim {dim:>5}"),
                }
                levels.push(json!({"t": t, "dim": dim, "subquotient": sub}));
            }
            emit_json(cli, &json!({"b": b, "a": a, "levels": levels}))?;
            Ok(true)
        }
        Command::Verify { check } => {
            let opts = RunOptions {
                timings: cli.timings,
                ..RunOptions::new(cli.max_size)
            };
            let reports = run_checks(check, &opts)?;
            for r in &reports {
                let status = serde_json::to_value(r.status)?;
                let status = status.as_str().unwrap_or("?");
                match &r.detail {
                    Some(d) => println!("{status:<8} {:<20} {d}", r.id),
                    None => println!("{status:<8} {}", r.id),
                }
            }
            if let Some(p) = &cli.json {
                write_file(&output_path(p), &reports_json(&reports)?)?;
            }
            emit_csv(cli)?;
            Ok(all_passed(&reports))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
