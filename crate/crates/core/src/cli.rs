//! Command-line front end.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::airy4::{self, Airy4Config, Func};
use crate::eigenfunctions::EigenfunctionHandle;
use crate::error::{Error, Result};
use crate::spectrum::{self, SpectralTable};
use crate::verify::{Verifier, VerifyConfig};
use crate::{heat, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "airy4", version, about = "Spectrum and eigenfunctions of √(−d²/dx²) + x⁴")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalOpts {
    /// Number of eigenvalues to compute.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,
    /// Root tolerance.
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = positive)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (stdout by default).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// |y| below which the power series is used.
    #[arg(long, global = true, value_parser = positive)]
    pub switch_radius: Option<f64>,
    #[arg(long, global = true, value_parser = positive)]
    pub target_abs_err: Option<f64>,
    /// Oracle box half-width.
    #[arg(long = "oracle-L", global = true, default_value_t = 30.0, value_parser = positive)]
    pub oracle_l: f64,
    /// Oracle grid points (power of two).
    #[arg(long = "oracle-N", global = true, default_value_t = 1024)]
    pub oracle_n: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Ai₄, Ãi₄ or a derivative on a grid.
    Fn {
        /// Derivative order, 0 to 4.
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=4))]
        deriv: u8,
        /// Points as a:b:h.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grid, conflicts_with = "y")]
        grid: Option<Grid>,
        /// Comma-separated points.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Vec<f64>,
    },
    /// Compute the spectral table.
    Spec,
    /// Sample the position-space eigenfunction ψₙ.
    Eig {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
        grid: Grid,
    },
    /// Heat trace over a range of times.
    Heat {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
        tscan: Grid,
    },
    /// Run the acceptance checks.
    Verify {
        /// Criteria to run (all by default).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

/// Points `a, a+h, …` up to `b` inclusive, written `a:b:h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

pub fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected a:b:h, got {s}"));
    }
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let (a, b, h) = (nums[0], nums[1], nums[2]);
    if !(a.is_finite() && b.is_finite() && h > 0.0 && b >= a) {
        return Err(format!("need finite a ≤ b and h > 0, got {s}"));
    }
    let count = ((b - a) / h + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(format!("grid {s} has too many points"));
    }
    Ok(Grid((0..count).map(|i| a + i as f64 * h).collect()))
}

impl GlobalOpts {
    pub fn airy(&self) -> Airy4Config {
        let mut cfg = Airy4Config::default();
        if let Some(r) = self.switch_radius {
            cfg.series_switch_radius = r;
        }
        if let Some(e) = self.target_abs_err {
            cfg.target_abs_err = e;
        }
        cfg
    }
}

#[derive(Serialize)]
struct Meta<'a> {
    version: &'a str,
    command: &'a str,
    options: &'a GlobalOpts,
    airy: Airy4Config,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

#[derive(Serialize)]
struct Document<'a, R: Serialize> {
    meta: Meta<'a>,
    rows: &'a [R],
}

#[derive(Serialize)]
struct FnRow {
    y: f64,
    deriv: u8,
    ai4: f64,
    ai4_err: f64,
    ai4_tilde: f64,
    ai4_tilde_err: f64,
    method: &'static str,
}

#[derive(Serialize)]
struct SpecRow {
    n: usize,
    parity: &'static str,
    lambda: f64,
    mu: f64,
    c1: f64,
    c2: f64,
    gamma: f64,
    residual: f64,
}

#[derive(Serialize)]
struct EigRow {
    x: f64,
    psi: f64,
    abs_err: f64,
}

#[derive(Serialize)]
struct HeatRow {
    t: f64,
    trace: f64,
    lower: f64,
    upper: f64,
    scaled: f64,
    terms: usize,
}

#[derive(Serialize)]
struct VerifyRow {
    id: u8,
    title: String,
    measured: f64,
    bound: f64,
    passed: bool,
    detail: String,
}

fn emit<R: Serialize>(opts: &GlobalOpts, command: &str, rows: &[R], notes: Vec<String>) -> Result<()> {
    let mut sink: Box<dyn Write> = match &opts.out {
        Some(p) => Box::new(File::create(p).map_err(|e| Error::Domain(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let io_err = |e: &dyn std::fmt::Display| Error::Domain(format!("write failed: {e}"));
    match opts.format {
        Format::Json => {
            let doc = Document {
                meta: Meta { version: VERSION, command, options: opts, airy: opts.airy(), notes },
                rows,
            };
            serde_json::to_writer_pretty(&mut sink, &doc).map_err(|e| io_err(&e))?;
            writeln!(sink).map_err(|e| io_err(&e))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut sink);
            for r in rows {
                w.serialize(r).map_err(|e| io_err(&e))?;
            }
            w.flush().map_err(|e| io_err(&e))?;
        }
    }
    sink.flush().map_err(|e| io_err(&e))
}

fn table(opts: &GlobalOpts) -> Result<SpectralTable> {
    spectrum::spectral_table(opts.n_max as usize, opts.tol, &opts.airy())
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let opts = &cli.global;
    if let Err(e) = opts.airy().validate() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            let diag = serde_json::json!({ "meta": { "version": VERSION }, "error": e.to_string() });
            eprintln!("{diag}");
            EXIT_NUMERIC
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let opts = &cli.global;
    let cfg = opts.airy();
    match &cli.command {
        Command::Fn { deriv, grid, y } => {
            let ys = grid.as_ref().map_or_else(|| y.clone(), |g| g.0.clone());
            if ys.is_empty() {
                eprintln!("error: no evaluation points; pass --y or --grid");
                return Ok(EXIT_USAGE);
            }
            let p = *deriv as usize;
            let rows = ys
                .par_iter()
                .map(|&y| {
                    let m = cfg.default_method(y);
                    let a = airy4::eval_direct(Func::Ai4, y, p, m, &cfg)?;
                    let t = airy4::eval_direct(Func::Ai4Tilde, y, p, m, &cfg)?;
                    Ok(FnRow {
                        y,
                        deriv: *deriv,
                        ai4: a.to_f64(),
                        ai4_err: a.abs_err,
                        ai4_tilde: t.to_f64(),
                        ai4_tilde_err: t.abs_err,
                        method: m.as_str(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            emit(opts, "fn", &rows, Vec::new())?;
        }
        Command::Spec => {
            let t = table(opts)?;
            let rows: Vec<SpecRow> = t
                .records
                .iter()
                .map(|r| SpecRow {
                    n: r.n,
                    parity: r.parity.as_str(),
                    lambda: r.lambda,
                    mu: r.mu,
                    c1: r.c1,
                    c2: r.c2,
                    gamma: r.gamma,
                    residual: r.residual.to_f64(),
                })
                .collect();
            emit(opts, "spec", &rows, t.meta.notes.clone())?;
        }
        Command::Eig { n, grid } => {
            let rec = spectrum::eigenvalue(*n as usize, opts.tol, &cfg)?;
            let h = EigenfunctionHandle::new(&rec, &cfg)?;
            let rows = grid
                .0
                .par_iter()
                .map(|&x| h.psi(x).map(|e| EigRow { x, psi: e.to_f64(), abs_err: e.abs_err }))
                .collect::<Result<Vec<_>>>()?;
            emit(opts, "eig", &rows, rec.warnings)?;
        }
        Command::Heat { tscan } => {
            let t = table(opts)?;
            let scan = heat::trace_scan(&tscan.0, &t)?;
            let notes = scan.iter().filter_map(|e| e.warning.clone()).collect();
            let rows: Vec<HeatRow> = scan
                .iter()
                .map(|e| HeatRow {
                    t: e.t,
                    trace: e.midpoint(),
                    lower: e.partial_sum,
                    upper: e.partial_sum + e.tail_bound,
                    scaled: e.t.powf(1.25) * e.midpoint(),
                    terms: e.n_used,
                })
                .collect();
            emit(opts, "heat", &rows, notes)?;
        }
        Command::Verify { only } => {
            let v = Verifier::new(VerifyConfig {
                airy: cfg,
                tol: opts.tol,
                table_size: 200,
                oracle_half_width: opts.oracle_l,
                oracle_points: opts.oracle_n,
            });
            let ids: Vec<u8> = if only.is_empty() { (1..=11).collect() } else { only.clone() };
            let results: Vec<_> = ids.iter().map(|&id| v.run(id)).collect();
            for r in &results {
                eprintln!("{}", r.line());
            }
            let rows: Vec<VerifyRow> = results
                .iter()
                .map(|r| VerifyRow {
                    id: r.id,
                    title: r.title.clone(),
                    measured: r.measured,
                    bound: r.bound,
                    passed: r.passed,
                    detail: r.detail.clone(),
                })
                .collect();
            emit(opts, "verify", &rows, Vec::new())?;
            if results.iter().any(|r| !r.passed) {
                return Ok(EXIT_NUMERIC);
            }
        }
    }
    Ok(EXIT_OK)
}

fn configure_threads() {
    if let Some(n) = std::env::var("AIRY4_NUM_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Parses `args` and runs; the value to hand to `std::process::exit`.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    run(&cli)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:1:0.25").unwrap().0, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0.05:0.4:0.05").unwrap().0.len(), 8);
        assert_eq!(parse_grid("-2:-2:1").unwrap().0, vec![-2.0]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(main_with(["airy4", "spec", "--n-max", "0"]), EXIT_USAGE);
        assert_eq!(main_with(["airy4", "spec", "--tol", "-1"]), EXIT_USAGE);
        assert_eq!(main_with(["airy4", "bogus"]), EXIT_USAGE);
        assert_eq!(main_with(["airy4", "fn", "--deriv", "7", "--y", "1"]), EXIT_USAGE);
        assert_eq!(main_with(["airy4", "fn"]), EXIT_USAGE);
    }

    #[test]
    fn oracle_flags_parse() {
        let cli = Cli::try_parse_from(["airy4", "verify", "--oracle-L", "20", "--oracle-N", "512"]).unwrap();
        assert_eq!(cli.global.oracle_l, 20.0);
        assert_eq!(cli.global.oracle_n, 512);
    }
}
