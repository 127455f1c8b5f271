use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use ellcot::modular::{CharMatrix, UnimodularMatrix};
use ellcot::numeric::{precision, set_precision, Precision};
use ellcot::quadratic::{pell_4, QuadraticNumber};
use ellcot::series::{berndt_rhs, cot_dirichlet};
use ellcot::thetakron::ModularParameter;
use ellcot::verify::{self, Criterion, SuiteOptions, Tolerance, VerificationReport, SUITES};
use ellcot::{Complex, DoubleDouble, Error, Real, TruncationPolicy};

#[derive(Parser)]
#[command(name = "ellcot", version, about = "Numerical checks of elliptic cotangent sums and their reciprocity laws")]
struct Cli {
    /// JSON file overriding truncation policy fields (max_index, tail_tol, theta_terms)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Numeric mode; defaults to ELLCOT_PRECISION or double
    #[arg(long, global = true)]
    precision: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one identity, or run the randomized suites
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
    /// Print tables of values
    Table {
        #[command(subcommand)]
        which: Table,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Tolerance the residual is compared against
    #[arg(long)]
    tol: Option<f64>,
    /// abs, rel or either
    #[arg(long, allow_hyphen_values = true, default_value = "either")]
    criterion: String,
    /// Write the JSON report(s) here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verify {
    /// ξ̃(l, α, M) − j(V; α)^{l−1} ξ̃(l, Vα, VM) = R_V(l, α, M)
    Transform {
        #[arg(long, allow_hyphen_values = true, default_value = "0,-1,1,0")]
        matrix: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,1,2,1")]
        alpha: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0.37,0.71,0.13,0.42")]
        charmat: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,1")]
        tau: String,
        #[arg(long, default_value_t = 4)]
        l: u32,
        /// Half-width of the square lattice window
        #[arg(long)]
        radius: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// R_{V₁} + j(V₁; z)^{l−1} R_{V₂}(V₁z, V₁M) = R_{V₂V₁}; give --matrix twice
    Cocycle {
        #[arg(long, num_args = 1, allow_hyphen_values = true, default_values = ["2,1,1,1", "0,-1,1,0"])]
        matrix: Vec<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0.37,0.71,0.13,0.42")]
        charmat: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,1")]
        tau: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0.3,0.7")]
        z: String,
        #[arg(long, default_value_t = 5)]
        l: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Reciprocity law for S_{1,l}(r, M; τ)
    Reciprocity {
        #[arg(long, allow_hyphen_values = true, default_value = "1,0,1,1")]
        matrix: String,
        #[arg(long, allow_hyphen_values = true, default_value = "2/3")]
        r: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0.37,0.71,0.13,0.42")]
        charmat: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0.1,1.2")]
        tau: String,
        #[arg(long, default_value_t = 3)]
        l: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Two-variable identity for Ŝ_{1,l} at a point (X, Y); needs j(V; r) > 0
    Hat {
        #[arg(long, allow_hyphen_values = true, default_value = "0,-1,1,0")]
        matrix: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1/2")]
        r: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0.37,0.71,0.13,0.42")]
        charmat: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0.1,1.2")]
        tau: String,
        #[arg(long, default_value_t = 2)]
        l: u32,
        #[arg(long, allow_hyphen_values = true, default_value = "0.11,0.07")]
        x: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-0.05,0.13")]
        y: String,
        #[command(flatten)]
        common: Common,
    },
    /// Series for ξ(2l−1, α) against the closed form
    Berndt {
        /// α = (p + q√D)/den; defaults to the unit from a² − c b² = ±4
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 5)]
        c: i128,
        /// Force ε (a wrong sign makes a failing report)
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<i32>,
        #[arg(long, default_value_t = 3)]
        l: u32,
        #[arg(long)]
        terms: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Behaviour as Im τ → ∞ (part i: the ξ̃ series; part ii: S_{m,n})
    Degeneration {
        #[arg(long, value_enum, default_value_t = Part::I)]
        part: Part,
        #[arg(long, default_value_t = 5)]
        l: u32,
        #[arg(long, allow_hyphen_values = true, default_value = "0,1,2,1")]
        alpha: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0.37,0.71,0.13,0.42")]
        charmat: String,
        #[arg(long, default_value_t = 8.0)]
        imtau: f64,
        /// (m, n) for part ii
        #[arg(long, allow_hyphen_values = true, default_value = "2,3")]
        mn: String,
        #[arg(long, allow_hyphen_values = true, default_value = "3/4")]
        r: String,
        #[arg(long)]
        radius: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized and fixed suites
    Suite {
        /// Run every suite
        #[arg(long)]
        all: bool,
        /// Suites to run
        names: Vec<String>,
        #[arg(long, default_value_t = 20240607)]
        seed: u64,
        /// Cap on cases per suite
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Part {
    I,
    Ii,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Table {
    /// ξ(2l−1, α) for the units α of a² − c b² = ±4
    Berndt {
        #[arg(long, allow_hyphen_values = true, default_value = "2,3,5")]
        c: String,
        #[arg(long, allow_hyphen_values = true, default_value = "2,3,4")]
        l: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = 100_000)]
        terms: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A usage problem; reported with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

type Res<T> = Result<T, Usage>;

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Usage(msg.into()))
}

fn parse_list<T: FromStr>(s: &str, n: usize, what: &str) -> Res<Vec<T>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return usage(format!("{what} needs {n} comma-separated values, got {s:?}"));
    }
    parts.iter().map(|p| p.parse().map_err(|_| Usage(format!("bad number {p:?} in {what}")))).collect()
}

fn parse_matrix(s: &str) -> Res<UnimodularMatrix> {
    let v = parse_list::<i64>(s, 4, "--matrix")?;
    Ok(UnimodularMatrix::new(v[0], v[1], v[2], v[3])?)
}

fn parse_alpha(s: &str) -> Res<QuadraticNumber> {
    let v = parse_list::<i128>(s, 4, "--alpha")?;
    Ok(QuadraticNumber::new(v[0], v[1], v[2], v[3])?)
}

fn parse_char<R: Real>(s: &str) -> Res<CharMatrix<R>> {
    let v = parse_list::<f64>(s, 4, "--charmat")?;
    Ok(CharMatrix::from_f64([v[0], v[1], v[2], v[3]]))
}

fn parse_complex<R: Real>(s: &str, what: &str) -> Res<Complex<R>> {
    let v = parse_list::<f64>(s, 2, what)?;
    Ok(Complex::from_f64(v[0], v[1]))
}

fn parse_ratio(s: &str) -> Res<Ratio<i64>> {
    let r = Ratio::<i64>::from_str(s.trim()).map_err(|_| Usage(format!("bad rational {s:?}; expected n/d")))?;
    Ok(r)
}

fn tolerance(c: &Common, default: f64) -> Res<Tolerance> {
    let criterion: Criterion = c.criterion.parse()?;
    Ok(Tolerance { value: c.tol.unwrap_or(default), criterion })
}

fn load_policy(path: &Option<PathBuf>) -> Res<TruncationPolicy> {
    let policy = match path {
        None => TruncationPolicy::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Usage(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Usage(format!("bad config {}: {e}", p.display())))?
        }
    };
    policy.validate()?;
    Ok(policy)
}

fn write_json(path: &Option<PathBuf>, value: &impl serde::Serialize) -> Res<()> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(value).map_err(|e| Usage(e.to_string()))?;
        std::fs::write(p, text + "\n").map_err(|e| Usage(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn finish_one(rep: VerificationReport, out: &Option<PathBuf>) -> Res<bool> {
    println!("{rep}");
    write_json(out, &rep)?;
    Ok(rep.passed())
}

fn mp_for<R: Real>(tau: &str, policy: TruncationPolicy) -> Res<ModularParameter<R>> {
    Ok(ModularParameter::with_policy(parse_complex(tau, "--tau")?, policy)?)
}

fn run_verify<R: Real>(cmd: &Verify, policy: TruncationPolicy) -> Res<bool> {
    match cmd {
        Verify::Transform { matrix, alpha, charmat, tau, l, radius, common } => {
            let policy = radius.map_or(policy, |n| policy.with_max_index(n));
            let mp = mp_for::<R>(tau, policy)?;
            let tol = tolerance(common, if *l == 3 { 1e-3 } else { 1e-4 })?;
            let rep = verify::check_transform(
                parse_matrix(matrix)?,
                *l,
                &parse_alpha(alpha)?,
                &parse_char::<R>(charmat)?,
                &mp,
                &policy,
                tol,
            )?;
            finish_one(rep, &common.out)
        }
        Verify::Cocycle { matrix, charmat, tau, z, l, common } => {
            if matrix.len() != 2 {
                return usage("cocycle needs --matrix exactly twice (V₁ then V₂)");
            }
            let mp = mp_for::<R>(tau, policy)?;
            let rep = verify::check_cocycle(
                parse_matrix(&matrix[0])?,
                parse_matrix(&matrix[1])?,
                *l,
                parse_complex(z, "--z")?,
                &parse_char::<R>(charmat)?,
                &mp,
                tolerance(common, 1e-10)?,
            )?;
            finish_one(rep, &common.out)
        }
        Verify::Reciprocity { matrix, r, charmat, tau, l, common } => {
            let mp = mp_for::<R>(tau, policy)?;
            let rep = verify::check_reciprocity(
                parse_matrix(matrix)?,
                *l,
                parse_ratio(r)?,
                &parse_char::<R>(charmat)?,
                &mp,
                tolerance(common, 1e-9)?,
            )?;
            finish_one(rep, &common.out)
        }
        Verify::Hat { matrix, r, charmat, tau, l, x, y, common } => {
            let mp = mp_for::<R>(tau, policy)?;
            let rep = verify::check_hat(
                parse_matrix(matrix)?,
                *l,
                parse_ratio(r)?,
                &parse_char::<R>(charmat)?,
                parse_complex(x, "--x")?,
                parse_complex(y, "--y")?,
                &mp,
                tolerance(common, 1e-8)?,
            )?;
            finish_one(rep, &common.out)
        }
        Verify::Berndt { alpha, c, eps, l, terms, common } => {
            let policy = policy.with_max_index(terms.unwrap_or(100_000));
            let tol = tolerance(common, 1e-8)?;
            let rep = match alpha {
                Some(a) => verify::check_berndt_alpha::<R>(*l, &parse_alpha(a)?, *eps, &policy, tol)?,
                None => verify::check_berndt::<R>(*l, *c, *eps, &policy, tol)?,
            };
            finish_one(rep, &common.out)
        }
        Verify::Degeneration { part, l, alpha, charmat, imtau, mn, r, radius, common } => {
            let policy = policy.with_max_index(radius.unwrap_or(100));
            let m = parse_char::<R>(charmat)?;
            let rep = match part {
                Part::I => verify::check_degeneration(*l, &parse_alpha(alpha)?, &m, *imtau, &policy, tolerance(common, 1e-6)?)?,
                Part::Ii => {
                    let v = parse_list::<usize>(mn, 2, "--mn")?;
                    let tol = tolerance(common, 1e-8)?;
                    verify::check_degeneration_edr(v[0], v[1], parse_ratio(r)?, &m, *imtau, &policy, tol)?
                }
            };
            finish_one(rep, &common.out)
        }
        Verify::Suite { all, names, seed, count, out } => {
            let names: Vec<String> = if *all {
                SUITES.iter().map(|s| s.to_string()).collect()
            } else if names.is_empty() {
                return usage(format!("name suites to run or pass --all; suites: {}", SUITES.join(", ")));
            } else {
                names.clone()
            };
            let opts = SuiteOptions { seed: *seed, count: *count, policy };
            let mut reports = Vec::new();
            let mut ok = true;
            for name in &names {
                let reps = verify::run_suite::<R>(name, &opts)?;
                let expect_fail = name == "negative";
                let good = reps.iter().filter(|r| r.passed() != expect_fail).count();
                for r in reps.iter().filter(|r| r.passed() == expect_fail) {
                    println!("  unexpected: {r}");
                }
                let verdict = if good == reps.len() { "ok" } else { "FAILED" };
                if expect_fail {
                    println!("suite {name}: {good}/{} falsifications detected {verdict}", reps.len());
                } else {
                    println!("suite {name}: {good}/{} passed {verdict}", reps.len());
                }
                ok &= good == reps.len();
                reports.extend(reps);
            }
            write_json(out, &reports)?;
            Ok(ok)
        }
    }
}

#[derive(serde::Serialize)]
struct BerndtRow {
    c: i128,
    l: u32,
    s: u32,
    alpha: String,
    eps: i32,
    closed_form: f64,
    series: f64,
    abs_difference: f64,
}

fn run_table<R: Real>(cmd: &Table, policy: TruncationPolicy) -> Res<bool> {
    let Table::Berndt { c, l, format, terms, out } = cmd;
    let cs: Vec<i128> = c.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>().map_err(|_| Usage(format!("bad --c {c:?}")))?;
    let ls: Vec<u32> = l.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>().map_err(|_| Usage(format!("bad --l {l:?}")))?;
    let policy = policy.with_max_index(*terms);
    let mut rows = Vec::new();
    for &c in &cs {
        let (a, b, eps) = pell_4(c)?;
        let alpha = QuadraticNumber::new(a, b, c, 2)?;
        for &l in &ls {
            if l < 2 {
                return usage("--l values must be at least 2");
            }
            let closed: R = berndt_rhs(l, &alpha, eps)?;
            let series = cot_dirichlet::<R>(2 * l - 1, &alpha, &policy)?.value.re;
            rows.push(BerndtRow {
                c,
                l,
                s: 2 * l - 1,
                alpha: alpha.to_string(),
                eps,
                closed_form: closed.to_f64(),
                series: series.to_f64(),
                abs_difference: (series - closed).abs().to_f64(),
            });
        }
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&rows).map_err(|e| Usage(e.to_string()))? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| Usage(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Usage(e.to_string()))?).map_err(|e| Usage(e.to_string()))?
        }
    };
    match out {
        Some(p) => std::fs::write(p, &text).map_err(|e| Usage(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn run(cli: &Cli) -> Res<bool> {
    if let Some(p) = &cli.precision {
        set_precision(p.parse()?)?;
    }
    let policy = load_policy(&cli.config)?;
    match (&cli.command, precision()) {
        (Command::Verify { which }, Precision::Double) => run_verify::<f64>(which, policy),
        (Command::Verify { which }, Precision::Extended) => run_verify::<DoubleDouble>(which, policy),
        (Command::Table { which }, Precision::Double) => run_table::<f64>(which, policy),
        (Command::Table { which }, Precision::Extended) => run_table::<DoubleDouble>(which, policy),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
