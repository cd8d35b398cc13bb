use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use graphmfd::decision::{decide, DecideOptions};
use graphmfd::io::generate::{generate, GenerateParams};
use graphmfd::io::manifest::{load_manifest, parse_manifest, Manifest};
use graphmfd::io::report::{summary, ReportEnvelope, ReportJson};
use graphmfd::io::selftest::run_selftest;
use graphmfd::io::InputError;

#[derive(Parser)]
#[command(name = "graphmfd", version, about = "Decide NPC metrics and virtual fibration for graph manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a manifest, or every *.json manifest in a directory.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Report file, or directory in batch mode. Defaults to standard
        /// output (single file) or `<name>.report.json` next to each input.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Search for a strict certificate when H_M has a negative eigenvalue.
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
    },
    /// Print a seeded random manifest.
    Generate {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = parse_range, default_value = "-2..2")]
        charge_range: (i64, i64),
        #[arg(long, value_parser = parse_range, default_value = "1..3")]
        b_range: (i64, i64),
    },
    /// Convert a gluing-form manifest to reduced form.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run the built-in property checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        breadth: u32,
    },
}

/// `LO..HI`, both inclusive.
fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

fn input_error(e: &InputError) -> ExitCode {
    println!("{}", e.to_json());
    ExitCode::from(2)
}

fn read(path: &Path) -> Result<Vec<u8>, InputError> {
    fs::read(path).map_err(|e| InputError::new("IO", format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), InputError> {
    let io_err = |e: std::io::Error| InputError::new("IO", format!("{}: {e}", path.display()));
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    fs::File::create(&tmp)
        .and_then(|mut f| f.write_all(contents.as_bytes()).and_then(|_| f.sync_all()))
        .map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

fn analyze_bytes(bytes: &[u8], opts: &DecideOptions) -> Result<ReportEnvelope, InputError> {
    let start = Instant::now();
    let text = std::str::from_utf8(bytes).map_err(|e| InputError::new("BAD_JSON", e.to_string()))?;
    let data = load_manifest(text)?;
    let report = decide(&data, opts).map_err(|e| InputError::new("ANALYSIS", e.to_string()))?;
    let payload = ReportJson::new(&data, &report);
    let elapsed = u64::try_from(start.elapsed().as_micros()).unwrap_or(u64::MAX);
    Ok(ReportEnvelope::new(bytes, payload, elapsed))
}

fn analyze_one(input: &Path, output: Option<&Path>, opts: &DecideOptions) -> ExitCode {
    let env = match read(input).and_then(|b| analyze_bytes(&b, opts)) {
        Ok(env) => env,
        Err(e) => return input_error(&e),
    };
    match output {
        Some(out) => {
            if let Err(e) = write_atomic(out, &env.to_json()) {
                return input_error(&e);
            }
            println!("{}", summary(&input.display().to_string(), &env.report));
        }
        None => {
            print!("{}", env.to_json());
            eprintln!("{}", summary(&input.display().to_string(), &env.report));
        }
    }
    ExitCode::SUCCESS
}

fn analyze_dir(input: &Path, output: Option<&Path>, opts: &DecideOptions) -> ExitCode {
    let mut files: Vec<PathBuf> = match fs::read_dir(input) {
        Ok(rd) => rd
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| {
                p.extension().is_some_and(|x| x == "json")
                    && !p.to_string_lossy().ends_with(".report.json")
            })
            .collect(),
        Err(e) => return input_error(&InputError::new("IO", format!("{}: {e}", input.display()))),
    };
    files.sort();
    if let Some(out) = output {
        if let Err(e) = fs::create_dir_all(out) {
            return input_error(&InputError::new("IO", format!("{}: {e}", out.display())));
        }
    }
    let results: Vec<(PathBuf, Result<String, InputError>)> = files
        .par_iter()
        .map(|f| {
            let stem = f.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let target = match output {
                Some(dir) => dir.join(format!("{stem}.report.json")),
                None => f.with_file_name(format!("{stem}.report.json")),
            };
            let res = read(f)
                .and_then(|b| analyze_bytes(&b, opts))
                .and_then(|env| {
                    write_atomic(&target, &env.to_json())?;
                    Ok(summary(&f.display().to_string(), &env.report))
                });
            (f.clone(), res)
        })
        .collect();
    let mut failed = false;
    for (f, res) in results {
        match res {
            Ok(line) => println!("{line}"),
            Err(e) => {
                failed = true;
                println!(
                    "{}",
                    serde_json::json!({ "file": f.display().to_string(), "error": { "code": e.code, "message": e.message } })
                );
            }
        }
    }
    if failed {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            input,
            output,
            certify,
            max_iters,
        } => {
            let opts = DecideOptions { certify, max_iters };
            if input.is_dir() {
                analyze_dir(&input, output.as_deref(), &opts)
            } else {
                analyze_one(&input, output.as_deref(), &opts)
            }
        }
        Command::Generate {
            vertices,
            edges,
            seed,
            charge_range,
            b_range,
        } => {
            let params = GenerateParams {
                charge_range,
                b_range,
                ..GenerateParams::new(vertices, edges, seed)
            };
            match generate(&params) {
                Ok(data) => {
                    print!("{}", Manifest::reduced(data).to_json());
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(&InputError::new("INFEASIBLE_SHAPE", e.to_string())),
            }
        }
        Command::Ingest { input, output } => {
            let res = read(&input)
                .and_then(|b| {
                    String::from_utf8(b).map_err(|e| InputError::new("BAD_JSON", e.to_string()))
                })
                .and_then(|t| parse_manifest(&t))
                .and_then(|m| m.to_data())
                .and_then(|d| write_atomic(&output, &Manifest::reduced(d).to_json()));
            match res {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => input_error(&e),
            }
        }
        Command::Selftest { breadth } => {
            let s = run_selftest(breadth);
            if s.passed() {
                println!("selftest: {} instances, all checks passed", s.instances);
                ExitCode::SUCCESS
            } else {
                println!(
                    "selftest: {} violation(s) over {} instances",
                    s.violations.len(),
                    s.instances
                );
                for v in s.violations.iter().take(5) {
                    println!("-- {}: {}", v.check, v.detail);
                    print!("{}", v.manifest);
                }
                ExitCode::from(1)
            }
        }
    }
}
