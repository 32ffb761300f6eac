//! `xbary`: exact Wasserstein barycenters from the command line.
//!
//! Exit status: 0 on success, 1 on invalid input, infeasibility or a failed
//! check, 2 on usage errors and exhausted budgets.

mod io;
mod svg;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use exact_barycenter::barycenter::{solve_approx_with_progress, solve_exact_with, solve_exact_with_progress};
use exact_barycenter::colgen::{verify_certificate_with, ColgenConfig, IterationRecord, LpBackend, OracleKind};
use exact_barycenter::generate;
use exact_barycenter::model::{BarycenterInstance, Point};
use exact_barycenter::numeric::{parse_rational, render_rational, to_f64, Rational};
use exact_barycenter::reference::{brute_mot, coverage_probe_with};
use exact_barycenter::{CellStrategy, Error, Parallelism};
use num_traits::Signed;
use serde::Serialize;

use crate::io::{InstanceFile, QuantizationFile, Rat, SolutionFile};

#[derive(Debug)]
enum Failure {
    /// Bad input, infeasible instance or a failed verification.
    Invalid(String),
    /// Bad arguments or an exhausted budget.
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::IterationCap(_) => Failure::Usage(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "xbary", version, about = "Exact Wasserstein barycenters of discrete measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance exactly.
    Solve(SolveArgs),
    /// Solve a rounded instance whose barycenter is within eps of optimal.
    Approx {
        #[command(flatten)]
        solve: SolveArgs,
        /// Additive accuracy, a positive rational such as 1/100.
        #[arg(long, value_parser = rational)]
        eps: Rational,
    },
    /// Write a generated instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Draw an instance and its barycenter as SVG.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve random instances for several seeds and report a CSV table.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated seeds; may be empty.
        #[arg(long, default_value = "")]
        seeds: String,
        #[arg(long, default_value_t = 1000)]
        denominator: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Independent checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Geometric,
    Bruteforce,
}

#[derive(Clone, Copy, ValueEnum)]
enum CellsArg {
    Overlay,
    Arrangement,
}

#[derive(Clone, Copy, ValueEnum)]
enum LpArg {
    FloatGuided,
    Exact,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "geometric")]
    oracle: OracleArg,
    #[arg(long, value_enum, default_value = "overlay")]
    cells: CellsArg,
    /// Tuple budget of the brute-force oracle.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u128,
    #[arg(long, default_value_t = 50)]
    batch: usize,
    #[arg(long, value_enum, default_value = "float-guided")]
    lp: LpArg,
    #[arg(long)]
    sequential: bool,
    /// Per-iteration CSV log.
    #[arg(long)]
    log: Option<PathBuf>,
}

impl SolveArgs {
    fn config(&self) -> ColgenConfig {
        let cells = match self.cells {
            CellsArg::Overlay => CellStrategy::Overlay,
            CellsArg::Arrangement => CellStrategy::Arrangement,
        };
        ColgenConfig {
            oracle: match self.oracle {
                OracleArg::Geometric => OracleKind::Geometric(cells),
                OracleArg::Bruteforce => OracleKind::BruteForce { budget: self.budget },
            },
            batch: self.batch.max(1),
            lp: match self.lp {
                LpArg::FloatGuided => LpBackend::FloatGuided,
                LpArg::Exact => LpBackend::Exact,
            },
            parallelism: if self.sequential { Parallelism::Sequential } else { Parallelism::default() },
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum GenCommand {
    /// `k` uniform measures on `n` random points of the `1/denominator` grid
    /// in `[-1, 1]^2`.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        denominator: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// One Dirac per point, e.g. `--points 0,0 2,0`.
    Diracs {
        #[arg(long, num_args = 1.., required = true)]
        points: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Synthetic nested-ellipse images on an `m x m` grid.
    Ellipses {
        #[arg(long, default_value_t = 16)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Optimal value of the dense multimarginal LP.
    BruteMot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        budget: u128,
    },
    /// Random point location against the enumerated cells.
    Coverage {
        #[arg(long)]
        input: PathBuf,
        /// Take the potentials from this solution instead of zeros.
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-checks a solution's certificate from scratch.
    Certificate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<BarycenterInstance, Failure> {
    let file: InstanceFile = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    Ok(file.validate()?)
}

fn load_solution(path: &Path) -> Result<SolutionFile, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn log_line(r: &IterationRecord) -> String {
    format!(
        "{},{},{},{:.12},{:.12},{:.12},{},{},{:.3},{:.3},{:.3}\n",
        r.iteration,
        r.columns,
        r.exact_lp,
        to_f64(&r.restricted_value),
        to_f64(&r.lower_bound),
        to_f64(&r.sep_value),
        r.priced_at_duals,
        r.added,
        r.lp_time.as_secs_f64() * 1e3,
        r.oracle_time.as_secs_f64() * 1e3,
        r.elapsed.as_secs_f64(),
    )
}

fn solve(args: &SolveArgs, eps: Option<&Rational>) -> CmdResult {
    if let Some(e) = eps {
        if !e.is_positive() {
            return Err(Failure::Usage(format!("--eps must be positive, got {}", render_rational(e))));
        }
    }
    let inst = load_instance(&args.input)?;
    let config = args.config();
    let mut log = match &args.log {
        Some(p) => {
            let mut f = fs::File::create(p).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
            writeln!(
                f,
                "iteration,columns,exact_lp,restricted_value,lower_bound,sep_value,priced_at_duals,added,lp_ms,oracle_ms,elapsed_s"
            )
            .map_err(|e| Failure::Invalid(e.to_string()))?;
            Some(f)
        }
        None => None,
    };
    let start = Instant::now();
    let on_iteration = |r: &IterationRecord| {
        if let Some(f) = log.as_mut() {
            let _ = f.write_all(log_line(r).as_bytes());
        }
    };
    let (sol, quantized, solved) = match eps {
        None => {
            let sol = solve_exact_with_progress(&inst, &config, on_iteration)?;
            (sol, None, inst.clone())
        }
        Some(e) => {
            let approx = solve_approx_with_progress(&inst, e, &config, on_iteration)?;
            let q = approx.quantized;
            let file = QuantizationFile {
                eps: Rat(e.clone()),
                delta_x: Rat(q.delta_x.clone()),
                delta_lambda: Rat(q.delta_lambda.clone()),
                offset: q.offset.iter().cloned().map(Rat).collect(),
                rounded_cost: Rat(approx.solution.cost.clone()),
            };
            (approx.solution, Some(file), q.instance)
        }
    };
    let wall = start.elapsed().as_secs_f64();
    let report = verify_certificate_with(&sol.mot, &solved, &config);
    let mut file = SolutionFile::new(&sol, &report, wall);
    if let Some(q) = quantized {
        // Report the cost of the returned measure on the original instance.
        let achieved = exact_barycenter::objective(&sol.barycenter, &inst)?;
        file.cost = Rat(achieved.clone());
        file.cost_approx = to_f64(&achieved);
        file.stats.quantization = Some(q);
    }
    write(&args.output, &json(&file))?;
    if let Some(p) = &args.svg {
        write(p, &svg::render(&inst, &sol.barycenter).map_err(Failure::Invalid)?)?;
    }
    println!(
        "cost {} (~{:.9}), |supp| {}, {} iterations, {:.2}s",
        render_rational(&file.cost.0),
        file.cost_approx,
        sol.barycenter.len(),
        sol.mot.iterations,
        wall
    );
    Ok(())
}

fn parse_point(s: &str) -> Result<Point, Failure> {
    s.split(',')
        .map(|c| parse_rational(c).map_err(|e| Failure::Usage(format!("point {s:?}: {e}"))))
        .collect()
}

fn gen(cmd: &GenCommand) -> CmdResult {
    let (inst, output) = match cmd {
        GenCommand::Random { n, k, seed, denominator, output } => {
            (generate::random_instance(*n, *k, *seed, *denominator), output)
        }
        GenCommand::Diracs { points, output } => {
            let pts = points.iter().map(|p| parse_point(p)).collect::<Result<Vec<_>, _>>()?;
            (generate::diracs(pts), output)
        }
        GenCommand::Ellipses { m, k, seed, output } => (generate::ellipses(*m, *k, *seed), output),
    };
    let inst = inst.map_err(|e| Failure::Usage(e.to_string()))?;
    emit(output.as_deref(), &json(&InstanceFile::from(&inst)))
}

fn render(input: &Path, solution: &Path, out: &Path) -> CmdResult {
    let inst = load_instance(input)?;
    let sol = load_solution(solution)?;
    let nu = sol.barycenter.to_measure()?;
    if sol.transport_maps.len() != inst.k() || nu.dimension() != inst.dimension() {
        return Err(Failure::Invalid("solution does not belong to this instance".into()));
    }
    write(out, &svg::render(&inst, &nu).map_err(Failure::Invalid)?)
}

#[derive(Serialize)]
struct BenchRow {
    seed: u64,
    n: usize,
    k: usize,
    wall_time_s: f64,
    iterations: u64,
    columns_generated: usize,
    support_size: usize,
    certificate: &'static str,
    cost: String,
    cost_approx: f64,
}

fn bench(n: usize, k: usize, seeds: &str, denominator: u64, output: Option<&Path>) -> CmdResult {
    let seeds = seeds
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|e| Failure::Usage(format!("seed {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    table
        .write_record([
            "seed",
            "n",
            "k",
            "wall_time_s",
            "iterations",
            "columns_generated",
            "support_size",
            "certificate",
            "cost",
            "cost_approx",
        ])
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    for seed in seeds {
        let inst = generate::random_instance(n, k, seed, denominator).map_err(|e| Failure::Usage(e.to_string()))?;
        let config = ColgenConfig::default();
        let start = Instant::now();
        let sol = solve_exact_with(&inst, &config)?;
        let wall_time_s = start.elapsed().as_secs_f64();
        let passed = verify_certificate_with(&sol.mot, &inst, &config).passed();
        let row = BenchRow {
            seed,
            n,
            k,
            wall_time_s,
            iterations: sol.mot.iterations,
            columns_generated: sol.mot.columns_generated,
            support_size: sol.barycenter.len(),
            certificate: if passed { "pass" } else { "fail" },
            cost: render_rational(&sol.cost),
            cost_approx: to_f64(&sol.cost),
        };
        table.serialize(row).map_err(|e| Failure::Invalid(e.to_string()))?;
    }
    let bytes = table.into_inner().map_err(|e| Failure::Invalid(e.to_string()))?;
    emit(output, &String::from_utf8(bytes).expect("csv is utf-8"))
}

fn verify(cmd: &VerifyCommand) -> CmdResult {
    match cmd {
        VerifyCommand::BruteMot { input, budget } => {
            let inst = load_instance(input)?;
            let sol = brute_mot(&inst, *budget)?;
            println!("{}", render_rational(&sol.value));
            Ok(())
        }
        VerifyCommand::Coverage { input, solution, samples, seed } => {
            let inst = load_instance(input)?;
            if inst.dimension() != 2 {
                return Err(Failure::Invalid("coverage needs dimension 2".into()));
            }
            let p = match solution {
                Some(path) => load_solution(path)?.potentials(),
                None => exact_barycenter::model::DualPotentials::zeros(&inst),
            };
            let report = coverage_probe_with(&inst, &p, *samples, *seed, &Default::default())?;
            match report.counterexample {
                None => {
                    println!("pass: {} samples, {} cells", report.samples, report.candidates);
                    Ok(())
                }
                Some((y, t)) => Err(Failure::Invalid(format!(
                    "point ({}, {}) lies in cell {t}, which was not enumerated",
                    render_rational(&y.x),
                    render_rational(&y.y)
                ))),
            }
        }
        VerifyCommand::Certificate { input, solution } => {
            let inst = load_instance(input)?;
            let sol = load_solution(solution)?;
            if sol.stats.quantization.is_some() {
                return Err(Failure::Invalid("approximate solutions certify the rounded instance".into()));
            }
            let report = verify_certificate_with(&sol.mot_solution(), &inst, &ColgenConfig::default());
            match report.failure {
                None => {
                    println!("pass: value {}, gap {}", render_rational(&report.primal_value), render_rational(&report.gap()));
                    Ok(())
                }
                Some(f) => Err(Failure::Invalid(format!("certificate rejected: {f}"))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => solve(args, None),
        Command::Approx { solve: args, eps } => solve(args, Some(eps)),
        Command::Gen(cmd) => gen(cmd),
        Command::Render { input, solution, out } => render(input, solution, out),
        Command::Bench { n, k, seeds, denominator, output } => bench(*n, *k, seeds, *denominator, output.as_deref()),
        Command::Verify(cmd) => verify(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Invalid(msg) | Failure::Usage(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
