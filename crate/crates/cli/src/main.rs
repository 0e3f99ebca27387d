//! `mll` — command-line front end for the mixed-Landau verification library.
//!
//! Exit codes: 0 when everything requested passed, 1 when a verification
//! check failed, 2 for unusable input (bad flags, malformed config, models
//! the theory does not cover).

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use num_complex::Complex64;

use mixed_landau::automorphy::functional_eq_residual;
use mixed_landau::kernels::projector_kernel;
use mixed_landau::lattice::{dimension_estimate, dimension_formula, periodize};
use mixed_landau::spectral::{eigenfunction, generalized_hermite};
use mixed_landau::{sample, verify, Error as MllError};

use config::RunConfig;
use report::{atomic_write, csv_document, Report};

#[derive(Parser)]
#[command(
    name = "mll",
    version,
    about = "Verification toolkit for planar magnetic Schrödinger operators with coupled automorphy weights"
)]
struct Cli {
    /// Cap the worker thread count (also honored from MLL_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a ready-to-edit configuration file.
    Init {
        /// Destination path.
        #[arg(long, default_value = "mll.json")]
        out: PathBuf,
    },
    /// Run the named verification suites against a configured model.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// JSON report destination (overrides output_path in the config).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Seed for the randomized draws inside the suites.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Sample a projector kernel K_k(z, w₀) on a square grid into CSV.
    KernelGrid {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        level: u32,
        /// Grid points per axis.
        #[arg(long, default_value_t = 64)]
        side: usize,
        /// Half-width of the sampled square centered at the origin.
        #[arg(long, default_value_t = 3.0)]
        extent: f64,
        /// Fixed second argument w₀ as "re,im".
        #[arg(long, default_value = "0,0")]
        w: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit the bivariate polynomial family for a field as CSV coefficients.
    PolyTable {
        /// Field strength B > 0.
        #[arg(long)]
        field: f64,
        /// Largest order in each index.
        #[arg(long, default_value_t = 4)]
        max_order: u32,
        /// Optional exponential shift "re,im" added on the z̄ side.
        #[arg(long, default_value = "0,0")]
        shift0: String,
        /// Optional exponential shift "re,im" added on the z side.
        #[arg(long, default_value = "0,0")]
        shift1: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the dimension of a periodized eigenspace and compare with
    /// the closed form.
    Dimension {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        level: u32,
        /// Number of seed functions spanning the candidate space.
        #[arg(long)]
        seeds: Option<usize>,
        /// Sample grid points per axis over the fundamental domain.
        #[arg(long, default_value_t = 48)]
        grid: usize,
        /// Relative singular-value cutoff for the rank decision.
        #[arg(long, default_value_t = 1e-6)]
        svd_tol: f64,
        /// Optional JSON output with the singular values.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Periodize one eigenfunction and check its functional equation at
    /// random lattice shifts.
    PeriodizeCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Series truncation budget.
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
        /// Number of random (shift, point) samples.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Residual tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        bail!("expected \"re,im\", got {text:?}");
    }
    let re: f64 = parts[0].trim().parse().context("real part is not a number")?;
    let im: f64 = parts[1].trim().parse().context("imaginary part is not a number")?;
    Ok(Complex64::new(re, im))
}

/// Shortest round-trip decimal formatting, fixed across runs.
fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn cmd_init(out: PathBuf) -> Result<i32> {
    let cfg = config::template();
    let mut text = serde_json::to_string_pretty(&cfg)?;
    text.push('\n');
    atomic_write(&out, &text)?;
    println!("wrote {}", out.display());
    Ok(0)
}

fn cmd_verify(config_path: PathBuf, output: Option<PathBuf>, seed: u64) -> Result<i32> {
    let cfg = RunConfig::load(&config_path)?;
    let model = cfg.build_model()?;
    let lattice = cfg.build_lattice()?;
    let suites = verify::run_all(&model, lattice.as_ref(), seed, &cfg.tolerances)
        .context("verification could not run on this model")?;

    println!("{:<26} {:>12} {:>12}  status", "suite", "residual", "tolerance");
    for s in &suites {
        println!(
            "{:<26} {:>12.3e} {:>12.1e}  {}",
            s.name,
            s.max_residual,
            s.tolerance,
            if s.passed { "PASS" } else { "FAIL" }
        );
    }
    let n_pass = suites.iter().filter(|s| s.passed).count();
    let all = suites.len();
    let passed = n_pass == all;
    println!(
        "{}: {n_pass}/{all} suites passed",
        if passed { "PASS" } else { "FAIL" }
    );

    let report = Report::new(seed, &cfg, &suites);
    if let Some(path) = output.or_else(|| cfg.output_path.clone()) {
        atomic_write(&path, &report.to_json())?;
        println!("report written to {}", path.display());
    }
    Ok(if passed { 0 } else { 1 })
}

fn cmd_kernel_grid(
    config_path: PathBuf,
    level: u32,
    side: usize,
    extent: f64,
    w_text: String,
    out: PathBuf,
) -> Result<i32> {
    if side < 2 || !(extent > 0.0 && extent.is_finite()) {
        bail!("need side ≥ 2 and a positive extent");
    }
    let cfg = RunConfig::load(&config_path)?;
    let model = cfg.build_model()?;
    let w0 = parse_complex(&w_text)?;
    let mut rows = Vec::with_capacity(side * side);
    let step = 2.0 * extent / (side - 1) as f64;
    for i in 0..side {
        let y = -extent + i as f64 * step;
        for j in 0..side {
            let x = -extent + j as f64 * step;
            let v = projector_kernel(&model, level, Complex64::new(x, y), w0)?;
            rows.push(vec![
                fmt_f64(x),
                fmt_f64(y),
                fmt_f64(v.re),
                fmt_f64(v.im),
                fmt_f64(v.norm()),
            ]);
        }
    }
    atomic_write(&out, &csv_document("x,y,re,im,abs", &rows))?;
    println!(
        "wrote {} samples of the level-{level} kernel to {}",
        side * side,
        out.display()
    );
    Ok(0)
}

fn cmd_poly_table(
    field: f64,
    max_order: u32,
    shift0: String,
    shift1: String,
    out: PathBuf,
) -> Result<i32> {
    if !(field > 0.0 && field.is_finite()) {
        bail!("field must be a positive number, got {field}");
    }
    let h0 = parse_complex(&shift0)?;
    let h1 = parse_complex(&shift1)?;
    let mut rows = Vec::new();
    for m in 0..=max_order {
        for n in 0..=max_order {
            let poly = generalized_hermite(field, h0, h1, m, n);
            for ((tm, tn), coeff) in poly.terms() {
                rows.push(vec![
                    m.to_string(),
                    n.to_string(),
                    tm.to_string(),
                    tn.to_string(),
                    fmt_f64(coeff.re),
                    fmt_f64(coeff.im),
                ]);
            }
        }
    }
    atomic_write(&out, &csv_document("m,n,term_m,term_n,coeff_re,coeff_im", &rows))?;
    println!("wrote {} coefficients to {}", rows.len(), out.display());
    Ok(0)
}

fn cmd_dimension(
    config_path: PathBuf,
    level: u32,
    seeds: Option<usize>,
    grid: usize,
    svd_tol: f64,
    json: Option<PathBuf>,
) -> Result<i32> {
    let cfg = RunConfig::load(&config_path)?;
    let model = cfg.build_model()?;
    let lattice = cfg
        .build_lattice()?
        .ok_or_else(|| anyhow!("the dimension command needs a lattice in the config"))?;
    let formula = dimension_formula(&model, &lattice)?;
    let n_seeds = seeds.unwrap_or((formula.round().max(1.0) as usize) + 3);
    match dimension_estimate(&model, &lattice, level, n_seeds, grid, svd_tol) {
        Ok(est) => {
            println!(
                "closed form {formula:.6}; numerical rank {} at level {level} ({grid}×{grid} grid, {n_seeds} seeds){}",
                est.rank,
                if est.near_threshold { "; rank decision near threshold" } else { "" }
            );
            if let Some(path) = json {
                #[derive(serde::Serialize)]
                struct DimOut<'a> {
                    schema: u32,
                    level: u32,
                    rank: usize,
                    formula: f64,
                    near_threshold: bool,
                    singular_values: &'a [f64],
                }
                let doc = DimOut {
                    schema: 1,
                    level,
                    rank: est.rank,
                    formula,
                    near_threshold: est.near_threshold,
                    singular_values: &est.singular_values,
                };
                let mut text = serde_json::to_string_pretty(&doc)?;
                text.push('\n');
                atomic_write(&path, &text)?;
            }
            let ok = (est.rank as f64 - formula).abs() <= 0.5 && !est.near_threshold;
            Ok(if ok { 0 } else { 1 })
        }
        Err(MllError::InconsistentCocycle { deviation }) => {
            eprintln!(
                "the twisted lattice shifts do not compose consistently (deviation {deviation:.3e}); the form space is trivial"
            );
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_periodize_check(
    config_path: PathBuf,
    m: u32,
    n: u32,
    eps: f64,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<i32> {
    use rand::RngExt;
    let cfg = RunConfig::load(&config_path)?;
    let model = cfg.build_model()?;
    let lattice = cfg
        .build_lattice()?
        .ok_or_else(|| anyhow!("the periodize-check command needs a lattice in the config"))?;
    let seed_fn = eigenfunction(&model, m, n)?;
    let form = match periodize(&model, &lattice, &seed_fn, eps) {
        Ok(f) => f,
        Err(MllError::InconsistentCocycle { deviation }) => {
            eprintln!(
                "periodization refused: the twisted lattice shifts do not compose consistently (deviation {deviation:.3e})"
            );
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let mut rng = sample::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let gamma = lattice.point(rng.random_range(-2..=2), rng.random_range(-2..=2));
        let z = sample::random_disk(&mut rng, 1.2);
        let res = functional_eq_residual(&model, |w| form.eval(w).unwrap(), gamma, z);
        worst = worst.max(res);
    }
    let passed = worst <= tol;
    println!(
        "seed ({m}, {n}): worst functional-equation residual {worst:.3e} over {samples} samples (tolerance {tol:.1e}) — {}",
        if passed { "PASS" } else { "FAIL" }
    );
    Ok(if passed { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Init { out } => cmd_init(out),
        Command::Verify { config, output, seed } => cmd_verify(config, output, seed),
        Command::KernelGrid { config, level, side, extent, w, out } => {
            cmd_kernel_grid(config, level, side, extent, w, out)
        }
        Command::PolyTable { field, max_order, shift0, shift1, out } => {
            cmd_poly_table(field, max_order, shift0, shift1, out)
        }
        Command::Dimension { config, level, seeds, grid, svd_tol, json } => {
            cmd_dimension(config, level, seeds, grid, svd_tol, json)
        }
        Command::PeriodizeCheck { config, m, n, eps, samples, tol, seed } => {
            cmd_periodize_check(config, m, n, eps, samples, tol, seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("MLL_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    mixed_landau::configure_threads(threads);
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
