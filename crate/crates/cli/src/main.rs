use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use markovlab::approx::Target;
use markovlab::polyring::parse_poly;
use markovlab::runner::{run_scenario, RunError};
use markovlab::scenario::{
    ApproxBlock, CounterexampleBlock, ExtensionBlock, MarkovBlock, Precision, Scenario,
};
use markovlab::verify::{Fault, Verifier, CRITERIA};
use markovlab::Error;

#[derive(Parser)]
#[command(name = "markovlab", version, about = "Markov factors and best approximation on algebraic hypersurfaces")]
struct Cli {
    /// Directory for all artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every block of a scenario file.
    Run { file: PathBuf },
    /// Run the acceptance criteria and report pass/fail for each.
    VerifyPaper {
        /// Print the criteria without running them.
        #[arg(long)]
        list: bool,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Reduce a polynomial modulo a scenario's relation.
    Reduce {
        #[arg(long)]
        relation: PathBuf,
        #[arg(long)]
        poly: String,
    },
    /// Markov factors for one multi-index up to a degree.
    MarkovFactor {
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated multi-index, e.g. `1,0`.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        lmax: usize,
    },
    /// Best-approximation errors of a built-in target.
    Approx {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        lmax: usize,
    },
    /// Decay table of the cube-root partial sums.
    Counterexample {
        #[arg(long, default_value_t = 60)]
        nmax: usize,
    },
    /// Build the extension from a scenario's approximation target.
    Extend {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long = "L")]
        level: usize,
    },
}

fn config_error(path: &str, message: impl Into<String>) -> RunError {
    RunError::from(Error::Config {
        path: path.into(),
        message: message.into(),
    })
}

fn strip_blocks(mut s: Scenario) -> Scenario {
    s.markov = None;
    s.approx = None;
    s.counterexample = None;
    s.extension = None;
    s.determining = None;
    s
}

fn parse_alpha(text: &str, nvars: usize) -> Result<Vec<u32>, RunError> {
    let alpha = text
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| config_error("--alpha", e.to_string()))?;
    if alpha.len() != nvars || alpha.iter().sum::<u32>() == 0 {
        return Err(config_error("--alpha", format!("need {nvars} entries with positive sum")));
    }
    Ok(alpha)
}

fn execute(s: &Scenario, out: Option<&Path>) -> Result<(), RunError> {
    let outcome = run_scenario(s, out)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    println!("artifacts in {}", outcome.out_dir.display());
    Ok(())
}

fn verify(list: bool, fault: Option<String>) -> Result<ExitCode, RunError> {
    if list {
        for c in CRITERIA {
            println!("{} {}", c.id, c.title);
        }
        return Ok(ExitCode::SUCCESS);
    }
    let fault = fault
        .map(|f| Fault::from_name(&f))
        .transpose()
        .map_err(|e| config_error("--inject-fault", e.to_string()))?;
    let results = Verifier::new(fault).run_all(|r| println!("{}", r.line()));
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.criterion.id.to_string())
        .collect();
    if failed.is_empty() {
        println!("all {} criteria passed", results.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("failed criteria: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, RunError> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Run { file } => execute(&Scenario::from_file(&file)?, out)?,
        Command::VerifyPaper { list, inject_fault } => return verify(list, inject_fault),
        Command::Reduce { relation, poly } => {
            let s = Scenario::from_file(&relation)?;
            let rel = &s.relation;
            let p = parse_poly(&poly, Some(rel.nvars())).map_err(|e| config_error("--poly", e.to_string()))?;
            let nf = rel.reduce(&p)?;
            println!("{}", nf.reassemble());
            for (i, g) in nf.coefficients().iter().enumerate() {
                println!("G_{i} = {g}");
            }
        }
        Command::MarkovFactor { scenario, alpha, lmax } => {
            let s = Scenario::from_file(&scenario)?;
            let alpha = parse_alpha(&alpha, s.relation.nvars())?;
            if lmax == 0 {
                return Err(config_error("--lmax", "must be at least 1"));
            }
            let grading = s.markov.as_ref().map(|m| m.grading);
            let mut s = strip_blocks(s);
            s.markov = Some(MarkovBlock {
                alphas: vec![alpha],
                grading: grading.unwrap_or(markovlab::markov::GradingKind::TotalDegree),
                lmin: 1,
                lmax,
                bounds: Vec::new(),
                random: 0,
            });
            execute(&s, out)?;
        }
        Command::Approx { scenario, target, lmax } => {
            let s = Scenario::from_file(&scenario)?;
            let target = Target::from_name(&target).map_err(|e| config_error("--target", e.to_string()))?;
            let precision = s.approx.as_ref().map_or(Precision::DoubleDouble, |a| a.precision);
            let mut s = strip_blocks(s);
            s.approx = Some(ApproxBlock {
                target,
                lmax,
                ladder: vec![1, 2, 4, 8, 10],
                precision,
            });
            execute(&s, out)?;
        }
        Command::Counterexample { nmax } => {
            let mut s = Scenario::from_toml("name = \"cube-root\"\npreset = \"example-2-3\"\n")?;
            if nmax == 0 || nmax > markovlab::approx::MAX_ORDER {
                return Err(config_error("--nmax", format!("outside 1..={}", markovlab::approx::MAX_ORDER)));
            }
            s.counterexample = Some(CounterexampleBlock { nmax });
            execute(&s, out)?;
        }
        Command::Extend { scenario, r, level } => {
            let s = Scenario::from_file(&scenario)?;
            if r == 0 {
                return Err(config_error("--r", "must be at least 1"));
            }
            let (target, precision) = s
                .approx
                .as_ref()
                .map_or((Target::ExpXTimesY, Precision::DoubleDouble), |a| (a.target, a.precision));
            let mut s = strip_blocks(s);
            s.approx = Some(ApproxBlock {
                target,
                lmax: level,
                ladder: vec![1, 2, 4, 8, 10],
                precision,
            });
            s.extension = Some(ExtensionBlock {
                r: Some(r),
                level,
                grid: None,
            });
            execute(&s, out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn init_threads() -> Result<(), RunError> {
    if let Ok(v) = std::env::var("MARKOVLAB_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| config_error("MARKOVLAB_THREADS", format!("{v:?} is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| config_error("MARKOVLAB_THREADS", e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|_| dispatch(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
