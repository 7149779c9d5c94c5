use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hayman_cli::catalog::{render_catalog, run_catalog};
use hayman_cli::commands::{
    build_coefficients, cmd_classify, cmd_estimate_order, cmd_growth, cmd_series, cmd_verify,
    load_file, merge_file, CliError, NumericOptions, RawInput, EXIT_NUMERIC, EXIT_OK,
};
use hayman_cli::report::{render_text, Report};
use hayman_core::Complex64;

/// Classifier and numeric verifier for the second-order equation
/// w'' w - w'^2 + a w' w + b w^2 = alpha w + beta w' + gamma
/// with rational-function coefficients in z.
#[derive(Parser)]
#[command(name = "hayman", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide which solution branches the coefficient tuple admits.
    Classify(CommonArgs),
    /// Classify, then report the order / hyper-order of the solutions.
    Growth(CommonArgs),
    /// Instantiate a branch closed form and check its residual on a grid.
    Verify(CommonArgs),
    /// Solve the initial value problem by power series and back-substitute.
    Series(CommonArgs),
    /// Estimate the order empirically from central indices of the series.
    EstimateOrder(CommonArgs),
    /// Run the built-in worked-example catalog.
    Catalog {
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Coefficient of w' w (rational function in z, e.g. "-1/(2*z)").
    #[arg(long)]
    a: Option<String>,
    /// Coefficient of w^2.
    #[arg(long)]
    b: Option<String>,
    /// Right-hand side coefficient of w.
    #[arg(long)]
    alpha: Option<String>,
    /// Right-hand side coefficient of w'.
    #[arg(long)]
    beta: Option<String>,
    /// Right-hand side constant term.
    #[arg(long)]
    gamma: Option<String>,
    /// General-form coefficient of w' w (before normalization).
    #[arg(long)]
    tau1: Option<String>,
    /// General-form coefficient of w^2.
    #[arg(long)]
    tau2: Option<String>,
    /// General-form constant right-hand term.
    #[arg(long)]
    kappa0: Option<String>,
    /// General-form coefficient of w.
    #[arg(long)]
    kappa1: Option<String>,
    /// General-form coefficient of w'.
    #[arg(long)]
    kappa2: Option<String>,
    /// General-form coefficient of w''.
    #[arg(long)]
    kappa3: Option<String>,
    /// TOML file with [coefficients] and [options] tables; flags override it.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Series truncation order.
    #[arg(long)]
    n: Option<usize>,
    /// Base point (real part).
    #[arg(long)]
    z0: Option<f64>,
    /// Base point (imaginary part).
    #[arg(long)]
    z0_im: Option<f64>,
    /// Initial value w(z0) (real part); must be nonzero.
    #[arg(long)]
    w0: Option<f64>,
    /// Initial value w(z0) (imaginary part).
    #[arg(long)]
    w0_im: Option<f64>,
    /// Initial derivative w'(z0) (real part).
    #[arg(long)]
    w1: Option<f64>,
    /// Initial derivative w'(z0) (imaginary part).
    #[arg(long)]
    w1_im: Option<f64>,
    /// Comma-separated radii for the order estimate, e.g. "2,4,8,16".
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Free constant c1 of the closed form.
    #[arg(long)]
    c1: Option<f64>,
    /// Free constant c2 of the closed form.
    #[arg(long)]
    c2: Option<f64>,
    /// Free constant k1 of the closed form.
    #[arg(long)]
    k1: Option<f64>,
    /// Residual tolerance for verification.
    #[arg(long)]
    tol: Option<f64>,
    /// Number of grid points for residual checks.
    #[arg(long)]
    points: Option<usize>,
    /// Inner radius of the verification annulus.
    #[arg(long)]
    r_min: Option<f64>,
    /// Outer radius of the verification annulus.
    #[arg(long)]
    r_max: Option<f64>,
    /// Exclusion threshold for near-pole points.
    #[arg(long)]
    eps_pole: Option<f64>,
}

fn assemble(args: &CommonArgs) -> Result<(RawInput, NumericOptions), CliError> {
    let mut raw = RawInput {
        a: args.a.clone(),
        b: args.b.clone(),
        alpha: args.alpha.clone(),
        beta: args.beta.clone(),
        gamma: args.gamma.clone(),
        tau1: args.tau1.clone(),
        tau2: args.tau2.clone(),
        kappa0: args.kappa0.clone(),
        kappa1: args.kappa1.clone(),
        kappa2: args.kappa2.clone(),
        kappa3: args.kappa3.clone(),
    };
    let mut opts = NumericOptions::default();
    if let Some(n) = args.n {
        opts.n = n;
    }
    if args.z0.is_some() || args.z0_im.is_some() {
        opts.z0 = Complex64::new(args.z0.unwrap_or(0.0), args.z0_im.unwrap_or(0.0));
    }
    if args.w0.is_some() || args.w0_im.is_some() {
        opts.w0 = Complex64::new(args.w0.unwrap_or(0.0), args.w0_im.unwrap_or(0.0));
    }
    if args.w1.is_some() || args.w1_im.is_some() {
        opts.w1 = Complex64::new(args.w1.unwrap_or(0.0), args.w1_im.unwrap_or(0.0));
    }
    if let Some(r) = &args.radii {
        opts.radii = r.clone();
    }
    opts.c1 = args.c1;
    opts.c2 = args.c2;
    opts.k1 = args.k1;
    if let Some(v) = args.tol {
        opts.tol = v;
    }
    if let Some(v) = args.points {
        opts.points = v;
    }
    if let Some(v) = args.r_min {
        opts.r_min = v;
    }
    if let Some(v) = args.r_max {
        opts.r_max = v;
    }
    if let Some(v) = args.eps_pole {
        opts.eps_pole = v;
    }
    if let Some(path) = &args.file {
        let spec = load_file(path)?;
        merge_file(&mut raw, &mut opts, &spec);
        // File-supplied options must not clobber explicit flags: re-apply them.
        if let Some(n) = args.n {
            opts.n = n;
        }
        if args.z0.is_some() || args.z0_im.is_some() {
            opts.z0 = Complex64::new(args.z0.unwrap_or(0.0), args.z0_im.unwrap_or(0.0));
        }
        if args.w0.is_some() || args.w0_im.is_some() {
            opts.w0 = Complex64::new(args.w0.unwrap_or(0.0), args.w0_im.unwrap_or(0.0));
        }
        if args.w1.is_some() || args.w1_im.is_some() {
            opts.w1 = Complex64::new(args.w1.unwrap_or(0.0), args.w1_im.unwrap_or(0.0));
        }
        if let Some(r) = &args.radii {
            opts.radii = r.clone();
        }
        if let Some(v) = args.tol {
            opts.tol = v;
        }
        if let Some(v) = args.points {
            opts.points = v;
        }
        if let Some(v) = args.r_min {
            opts.r_min = v;
        }
        if let Some(v) = args.r_max {
            opts.r_max = v;
        }
        if let Some(v) = args.eps_pole {
            opts.eps_pole = v;
        }
    }
    Ok((raw, opts))
}

fn emit(report: &Report, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        );
    } else {
        print!("{}", render_text(report));
    }
}

fn run(args: &CommonArgs, which: &str) -> i32 {
    let (raw, opts) = match assemble(args) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.exit;
        }
    };
    let (c, echo) = match build_coefficients(&raw) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.exit;
        }
    };
    let (report, exit) = match which {
        "classify" => cmd_classify(&c, echo),
        "growth" => cmd_growth(&c, echo),
        "verify" => cmd_verify(&c, echo, &opts),
        "series" => cmd_series(&c, echo, &opts),
        "estimate-order" => cmd_estimate_order(&c, echo, &opts),
        _ => unreachable!(),
    };
    emit(&report, args.json);
    for w in &report.warnings {
        eprintln!("warning: {}", w);
    }
    exit
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.cmd {
        Cmd::Classify(a) => run(a, "classify"),
        Cmd::Growth(a) => run(a, "growth"),
        Cmd::Verify(a) => run(a, "verify"),
        Cmd::Series(a) => run(a, "series"),
        Cmd::EstimateOrder(a) => run(a, "estimate-order"),
        Cmd::Catalog { json } => {
            let results = run_catalog();
            if *json {
                #[derive(serde::Serialize)]
                struct EntryOut<'a> {
                    name: &'a str,
                    passed: bool,
                    details: &'a [String],
                }
                let out: Vec<EntryOut> = results
                    .iter()
                    .map(|r| EntryOut {
                        name: r.name,
                        passed: r.passed,
                        details: &r.details,
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out).expect("catalog serializes")
                );
            } else {
                print!("{}", render_catalog(&results));
            }
            if results.iter().all(|r| r.passed) {
                EXIT_OK
            } else {
                EXIT_NUMERIC
            }
        }
    };
    std::process::exit(code);
}
