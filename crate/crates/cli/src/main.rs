use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use loopkit::ambiguity::{indistinguishable_family, verify_counterexample, CounterexampleReport};
use loopkit::emp::{self, ClassFilter, Emp, EmpClass, Reason, Verdict};
use loopkit::exactalg::{format_rat, parse_rat, set_degree_cap};
use loopkit::json::{self, EmpFile, IoMapFile, NetworkFile};
use loopkit::loopnet::LoopNetwork;
use loopkit::{oracle, recover, Error};

const DEGREE_CAP_VAR: &str = "LOOPKIT_DEGREE_CAP";

#[derive(Parser)]
#[command(
    name = "loopkit",
    version,
    about = "Identifiability of isolated loop networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify, enumerate and count excitation-and-measurement patterns.
    #[command(subcommand)]
    Emp(EmpCommand),
    /// Build, simulate and reconstruct loop networks.
    #[command(subcommand)]
    Net(NetCommand),
    /// Jacobian-rank cross-check of the classification.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum EmpCommand {
    /// Classify one pattern.
    Check(CheckArgs),
    /// Stream every covering pattern of a loop as NDJSON.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        /// Print only the number of matching patterns.
        #[arg(long)]
        count_only: bool,
    },
    /// Enumerated counts against the closed forms and the published table.
    Table {
        #[arg(long)]
        max_n: usize,
        /// Fixed-width text instead of JSON.
        #[arg(long)]
        human: bool,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated excited nodes, 1-based.
    #[arg(long, requires = "measured", conflicts_with = "pattern")]
    excited: Option<String>,
    /// Comma-separated measured nodes, 1-based.
    #[arg(long, requires = "excited", conflicts_with = "pattern")]
    measured: Option<String>,
    /// One character per node: E excited, M measured, B both, - neither.
    #[arg(long, required_unless_present = "excited")]
    pattern: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Minimal,
    Valid,
    Invalid,
}

impl From<ClassArg> for ClassFilter {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Minimal => ClassFilter::Minimal,
            ClassArg::Valid => ClassFilter::Valid,
            ClassArg::Invalid => ClassFilter::Invalid,
        }
    }
}

#[derive(Subcommand)]
enum NetCommand {
    /// Random network with integer coefficients in [-9, 9].
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        degree_bound: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Input-output map of a network under a pattern.
    Simulate {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        emp: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reconstruct every edge from an input-output map.
    Recover {
        #[arg(long)]
        m: PathBuf,
        #[arg(long)]
        emp: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Compare against a known network; exit 1 on any mismatch.
        #[arg(long)]
        verify_against: Option<PathBuf>,
    },
    /// A second network with the same input-output map.
    Counterexample {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        emp: PathBuf,
        /// Scale factor as p/q.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Compare rank verdicts with the classification on every covering pattern.
    Crosscheck {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io {
        path: PathBuf,
        source: io::Error,
    },
    Usage(String),
    /// Recovered network differs from the reference.
    Mismatch(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::NotIdentifiable(_) => 3,
                Error::NonGeneric(_)
                | Error::DegenerateNetwork(_)
                | Error::DegeneratePoint
                | Error::Pole { .. }
                | Error::ResampleExhausted { .. } => 4,
                _ => 2,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Usage(msg) | CliError::Mismatch(msg) => f.write_str(msg),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_json<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = read_file(path)?;
    Ok(json::parse(&path.display().to_string(), &text)?)
}

fn emit(output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn parse_list(field: &str, text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|_| {
                CliError::Core(Error::Format {
                    field: field.into(),
                    message: format!("`{s}` is not a node number"),
                })
            })
        })
        .collect()
}

fn apply_degree_cap() -> CliResult {
    if let Ok(value) = std::env::var(DEGREE_CAP_VAR) {
        let cap = value.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{DEGREE_CAP_VAR} must be a non-negative integer, got `{value}`"
            ))
        })?;
        set_degree_cap(cap);
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckOutput {
    n: usize,
    pattern: String,
    excited: Vec<usize>,
    measured: Vec<usize>,
    verdict: Verdict,
    cardinality: usize,
    minimum_cardinality: usize,
    reason: Reason,
    pairs: Vec<(usize, usize)>,
}

impl CheckOutput {
    fn new(emp: &Emp, class: EmpClass) -> Self {
        CheckOutput {
            n: emp.n(),
            pattern: emp.pattern(),
            excited: emp.excited_nodes(),
            measured: emp.measured_nodes(),
            verdict: class.verdict,
            cardinality: class.cardinality,
            minimum_cardinality: emp::minimum_valid_cardinality(emp.n()),
            reason: class.reason,
            pairs: class.pairs,
        }
    }
}

#[derive(Serialize)]
struct EnumerateLine {
    pattern: String,
    excited: Vec<usize>,
    measured: Vec<usize>,
    verdict: Verdict,
    cardinality: usize,
}

#[derive(Serialize)]
struct CountOutput {
    n: usize,
    class: &'static str,
    count: u128,
}

#[derive(Serialize)]
struct CounterexampleOutput {
    lambda: String,
    emp: EmpFile,
    original: NetworkFile,
    alternate: NetworkFile,
    report: CounterexampleReport,
}

fn check(args: CheckArgs) -> CliResult {
    let emp = match (&args.pattern, &args.excited, &args.measured) {
        (Some(pattern), _, _) => {
            if pattern.chars().count() != args.n {
                return Err(Error::Format {
                    field: "pattern".into(),
                    message: format!(
                        "pattern `{pattern}` has {} characters but --n is {}",
                        pattern.chars().count(),
                        args.n
                    ),
                }
                .into());
            }
            Emp::from_pattern(pattern)?
        }
        (None, Some(b), Some(c)) => Emp::new(
            args.n,
            &parse_list("excited", b)?,
            &parse_list("measured", c)?,
        )?,
        _ => {
            return Err(CliError::Usage(
                "give --pattern or both --excited and --measured".into(),
            ))
        }
    };
    let class = emp::nsc_check(&emp)?;
    emit(None, &json::to_string(&CheckOutput::new(&emp, class)))
}

fn enumerate(n: usize, class: Option<ClassArg>, count_only: bool) -> CliResult {
    let filter = class.map(ClassFilter::from);
    let items = emp::enumerate(n, filter)?;
    if count_only {
        let count = items.count() as u128;
        let out = CountOutput {
            n,
            class: match class {
                None => "all",
                Some(ClassArg::Minimal) => "minimal",
                Some(ClassArg::Valid) => "valid",
                Some(ClassArg::Invalid) => "invalid",
            },
            count,
        };
        return emit(
            None,
            &format!("{}\n", serde_json::to_string(&out).expect("serialisable")),
        );
    }
    let stdout = io::stdout();
    let mut w = BufWriter::new(stdout.lock());
    let io_err = |source| CliError::Io {
        path: "<stdout>".into(),
        source,
    };
    for (emp, class) in items {
        let line = EnumerateLine {
            pattern: emp.pattern(),
            excited: emp.excited_nodes(),
            measured: emp.measured_nodes(),
            verdict: class.verdict,
            cardinality: class.cardinality,
        };
        serde_json::to_writer(&mut w, &line).expect("serialisable");
        w.write_all(b"\n").map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

fn table(max_n: usize, human: bool) -> CliResult {
    let report = emp::table(max_n)?;
    if human {
        emit(None, &report.to_text())
    } else {
        emit(None, &json::to_string(&report))
    }
}

fn load_network(path: &Path) -> CliResult<LoopNetwork> {
    Ok(read_json::<NetworkFile>(path)?.to_network()?)
}

fn load_emp(path: &Path) -> CliResult<Emp> {
    Ok(read_json::<EmpFile>(path)?.to_emp()?)
}

fn recover(
    m: &Path,
    emp: &Path,
    output: Option<&Path>,
    verify_against: Option<&Path>,
) -> CliResult {
    let map = read_json::<IoMapFile>(m)?.to_map()?;
    let emp = load_emp(emp)?;
    if map.n() != emp.n() {
        return Err(Error::DimensionMismatch(format!(
            "map has n = {} but pattern has n = {}",
            map.n(),
            emp.n()
        ))
        .into());
    }
    let net = recover::recover_edges(&map, &emp)?;
    emit(output, &json::to_string(&NetworkFile::from_network(&net)))?;
    if let Some(reference) = verify_against {
        let expected = load_network(reference)?;
        if expected.n() != net.n() {
            return Err(CliError::Mismatch(format!(
                "reference has {} nodes, recovered network has {}",
                expected.n(),
                net.n()
            )));
        }
        let n = net.n();
        let differing: Vec<String> = (1..=n)
            .filter(|&i| net.edges()[i - 1] != expected.edges()[i - 1])
            .map(|i| format!("({i},{})", emp::succ(i, n)))
            .collect();
        if !differing.is_empty() {
            return Err(CliError::Mismatch(format!(
                "recovered edges differ from the reference at {}",
                differing.join(", ")
            )));
        }
        eprintln!("verified: all {n} edges match");
    }
    Ok(())
}

fn counterexample(net: &Path, emp: &Path, lambda: &str, output: Option<&Path>) -> CliResult {
    let lambda = parse_rat(lambda).map_err(|_| Error::Format {
        field: "lambda".into(),
        message: format!("`{lambda}` is not a rational p/q"),
    })?;
    let net = load_network(net)?;
    let emp = load_emp(emp)?;
    let alternate = indistinguishable_family(&net, &emp, &lambda)?;
    let report = verify_counterexample(&net, &alternate, &emp)?;
    let out = CounterexampleOutput {
        lambda: format_rat(&lambda),
        emp: EmpFile::from_emp(&emp),
        original: NetworkFile::from_network(&net),
        alternate: NetworkFile::from_network(&alternate),
        report,
    };
    emit(output, &json::to_string(&out))
}

fn run(cli: Cli) -> CliResult {
    apply_degree_cap()?;
    match cli.command {
        Command::Emp(EmpCommand::Check(args)) => check(args),
        Command::Emp(EmpCommand::Enumerate {
            n,
            class,
            count_only,
        }) => enumerate(n, class, count_only),
        Command::Emp(EmpCommand::Table { max_n, human }) => table(max_n, human),
        Command::Net(NetCommand::Random {
            n,
            seed,
            degree_bound,
            output,
        }) => {
            let net = LoopNetwork::random(n, seed, degree_bound)?;
            emit(
                output.as_deref(),
                &json::to_string(&NetworkFile::from_network(&net)),
            )
        }
        Command::Net(NetCommand::Simulate { net, emp, output }) => {
            let net = load_network(&net)?;
            let emp = load_emp(&emp)?;
            let map = net.io_map(&emp)?;
            emit(
                output.as_deref(),
                &json::to_string(&IoMapFile::from_map(&map)),
            )
        }
        Command::Net(NetCommand::Recover {
            m,
            emp,
            output,
            verify_against,
        }) => recover(&m, &emp, output.as_deref(), verify_against.as_deref()),
        Command::Net(NetCommand::Counterexample {
            net,
            emp,
            lambda,
            output,
        }) => counterexample(&net, &emp, &lambda, output.as_deref()),
        Command::Oracle(OracleCommand::Crosscheck {
            n,
            trials,
            seed,
            output,
        }) => {
            if trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let report = oracle::crosscheck(n, trials, seed)?;
            emit(output.as_deref(), &json::to_string(&report))
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
