use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use triple_nls::asymptotics::{asymptotic_exponent, classify_limit, sign_guarantees, Direction};
use triple_nls::boundary::{endpoints, gamma_omega_ne, omega_star, sample_curve};
use triple_nls::diagram::{export_contours_json, export_curve_csv, export_grid_csv, extract_contours, sweep_grid, write_curve_csv, Cell};
use triple_nls::model::normalize;
use triple_nls::profile::find_a;
use triple_nls::stability::{eval_j, eval_j0, eval_j_raw, mass_fd, StabilityValue};
use triple_nls::verify::{run_suite, Suite};
use triple_nls::{Error, NonlinearityParams, Sign};

#[derive(Parser)]
#[command(name = "triple-nls", version, about = "Standing-wave existence and stability for the triple-power NLS")]
struct Cli {
    /// Omit the trailing timing line so output is byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Exponents {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    r: f64,
    /// Sign of the lowest power: +1/-1 or f/d.
    #[arg(long, allow_hyphen_values = true)]
    s1: Sign,
    /// Sign of the highest power: +1/-1 or f/d.
    #[arg(long, allow_hyphen_values = true)]
    s3: Sign,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Special,
    Boundary,
    Signs,
    Profile,
    Stability,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Case label and the endpoint constants of the nonexistence curve.
    Classify(Exponents),
    /// Rescale general coefficients so that |a1| = |a3| = 1.
    Normalize {
        #[arg(long, allow_hyphen_values = true)]
        a1: f64,
        #[arg(long, allow_hyphen_values = true)]
        a2: f64,
        #[arg(long, allow_hyphen_values = true)]
        a3: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        r: f64,
    },
    /// Squared amplitude a(omega, gamma), U'(a) and existence.
    ProfileA {
        #[command(flatten)]
        exps: Exponents,
        #[arg(long)]
        omega: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// Sample the nonexistence curve as CSV (a, omega_ne, gamma_ne).
    CurveNe {
        #[command(flatten)]
        exps: Exponents,
        #[arg(long, default_value_t = 1e-3)]
        a_min: f64,
        #[arg(long, default_value_t = 10.0)]
        a_max: f64,
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The omega on the nonexistence curve at a given gamma.
    OmegaStar {
        #[command(flatten)]
        exps: Exponents,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// Stability functional J by all three routes.
    EvalJ {
        #[command(flatten)]
        exps: Exponents,
        #[arg(long)]
        omega: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// J(0, gamma) for the defocusing-first cases with p < 7/3.
    EvalJ0 {
        #[command(flatten)]
        exps: Exponents,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// Limits of J in every direction.
    Limits {
        #[command(flatten)]
        exps: Exponents,
        /// Fixed omega for the gamma limits.
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Fixed gamma for the omega limits.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        gamma: f64,
    },
    /// Region-wide sign guarantees for J.
    Guarantees(Exponents),
    /// Sweep J over a mesh and extract level curves.
    Diagram {
        #[command(flatten)]
        exps: Exponents,
        #[arg(long)]
        omega_min: f64,
        #[arg(long)]
        omega_max: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma_max: f64,
        #[arg(long, default_value_t = 200)]
        nx: usize,
        #[arg(long, default_value_t = 200)]
        ny: usize,
        /// Comma-separated contour levels.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        levels: Vec<f64>,
        #[arg(long)]
        grid_out: Option<PathBuf>,
        #[arg(long)]
        contours_out: Option<PathBuf>,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the built-in identity and proposition checks.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

/// Failures are split into bad input (exit 2) and numeric outcomes (exit 1).
enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn params(e: Exponents) -> Result<NonlinearityParams, Failure> {
    NonlinearityParams::new(e.p, e.q, e.r, e.s1, e.s3).map_err(|err| Failure::Usage(err.to_string()))
}

fn print_value(label: &str, v: &StabilityValue) {
    if v.diverging {
        println!("{label:<12} J = {:+}  (diverging at the nonexistence curve)", v.j);
    } else {
        println!("{label:<12} J = {:+.12e}  err = {:.2e}  verdict = {:?}", v.j, v.abs_error, v.verdict());
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Classify(e) => {
            let prm = params(e)?;
            let ends = endpoints(&prm);
            println!("case = {}", prm.case());
            println!("valid a-range = {}", ends.range.describe());
            match (prm.case(), ends.endpoint_a) {
                (triple_nls::Case::FF, Some(a)) => println!("a_sharp = {a}"),
                (_, Some(a)) => println!("a_b = {a}"),
                _ => {}
            }
            if let (Some(a), Some(g1)) = (ends.endpoint_a, ends.gamma1) {
                println!("gamma1 = {g1}");
                println!("omega_ne(endpoint) = {}", gamma_omega_ne(&prm, a).0);
            }
        }
        Command::Normalize { a1, a2, a3, p, q, r } => {
            let red = normalize(a1, a2, a3, p, q, r)?;
            println!("case = {}", red.normalized.case());
            println!("kappa = {}", red.kappa);
            println!("lambda = {}", red.lambda);
            println!("gamma = {}", red.gamma);
        }
        Command::ProfileA { exps, omega, gamma } => {
            let res = find_a(&params(exps)?, omega, gamma)?;
            println!("a = {}", res.a);
            println!("U'(a) = {}", res.uprime_at_a);
            println!("exists = {}", res.exists);
            println!("on_boundary = {}", res.on_boundary);
        }
        Command::CurveNe { exps, a_min, a_max, n, out } => {
            let curve = sample_curve(&params(exps)?, a_min, a_max, n)?;
            match out {
                Some(path) => {
                    export_curve_csv(&curve, &path)?;
                    println!("wrote {} samples to {}", curve.samples.len(), path.display());
                }
                None => write_curve_csv(&curve, std::io::stdout().lock())
                    .map_err(|e| Failure::Numeric(e.to_string()))?,
            }
        }
        Command::OmegaStar { exps, gamma } => {
            println!("omega* = {}", omega_star(&params(exps)?, gamma)?);
        }
        Command::EvalJ { exps, omega, gamma } => {
            let prm = params(exps)?;
            let t = eval_j(&prm, omega, gamma)?;
            print_value("transformed", &t);
            print_value("raw", &eval_j_raw(&prm, omega, gamma)?);
            print_value("mass_fd", &mass_fd(&prm, omega, gamma)?);
            if t.diverging {
                return Err(Failure::Numeric(Error::Diverging { sign: t.j.signum() }.to_string()));
            }
        }
        Command::EvalJ0 { exps, gamma } => {
            let v = eval_j0(&params(exps)?, gamma)?;
            print_value("omega_zero", &v);
        }
        Command::Limits { exps, omega, gamma } => {
            let prm = params(exps)?;
            for dir in Direction::ALL {
                let fixed = match dir {
                    Direction::OmegaToZero | Direction::OmegaToInf => gamma,
                    _ => omega,
                };
                let class = match classify_limit(&prm, dir, fixed) {
                    Ok(c) => c.to_string(),
                    Err(e) => format!("n/a ({e})"),
                };
                let rate = asymptotic_exponent(&prm, dir, gamma)
                    .map(|x| format!("a^{x}"))
                    .unwrap_or_else(|| "-".into());
                println!("{:<14} {:<12} rate {}", dir.to_string(), class, rate);
            }
        }
        Command::Guarantees(e) => {
            let list = sign_guarantees(&params(e)?);
            if list.is_empty() {
                println!("None");
            }
            for g in list {
                println!("{:?}: {}", g.statement, g.region);
            }
        }
        Command::Diagram {
            exps,
            omega_min,
            omega_max,
            gamma_min,
            gamma_max,
            nx,
            ny,
            levels,
            grid_out,
            contours_out,
            jobs,
        } => {
            let prm = params(exps)?;
            let grid = sweep_grid(&prm, (omega_min, omega_max), (gamma_min, gamma_max), nx, ny, jobs)?;
            let cells = grid.values.iter().flatten();
            let (mut finite, mut missing, mut divergent) = (0, 0, 0);
            for c in cells {
                match c {
                    Cell::Finite(_) => finite += 1,
                    Cell::Nonexistent => missing += 1,
                    Cell::Divergent(_) => divergent += 1,
                }
            }
            println!("cells: {finite} finite, {missing} nonexistent, {divergent} divergent");
            let contours = extract_contours(&grid, &levels);
            for c in &contours {
                let vertices: usize = c.paths.iter().map(Vec::len).sum();
                println!("level {}: {} paths, {} vertices", c.level, c.paths.len(), vertices);
            }
            if let Some(path) = grid_out {
                export_grid_csv(&grid, &path)?;
                println!("grid written to {}", path.display());
            }
            if let Some(path) = contours_out {
                export_contours_json(&prm, &contours, &path)?;
                println!("contours written to {}", path.display());
            }
        }
        Command::Verify { suite } => {
            let suites: Vec<Suite> = match suite {
                SuiteArg::Special => vec![Suite::Special],
                SuiteArg::Boundary => vec![Suite::Boundary],
                SuiteArg::Signs => vec![Suite::Signs],
                SuiteArg::Profile => vec![Suite::Profile],
                SuiteArg::Stability => vec![Suite::Stability],
                SuiteArg::All => Suite::ALL.to_vec(),
            };
            let mut failed = 0;
            for s in suites {
                println!("[{}]", s.name());
                for res in run_suite(s) {
                    failed += usize::from(!res.passed);
                    println!("{res}");
                }
            }
            if failed > 0 {
                return Err(Failure::Numeric(format!("{failed} checks failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    };
    if !cli.no_timing {
        println!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    code
}
