//! Command-line front end: argument parsing, input loading, caching, and
//! JSON or text reporting.

pub mod cache;
pub mod render;
pub mod tasks;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use log::{info, LevelFilter};
use serde_json::{json, Value};

use realcstar::groups::DEFAULT_MAX_ORDER;
use realcstar::weyl::Spin;

use cache::{Cache, ENV_CACHE_DIR};
use tasks::{Homological, ModuleSource, Source, Task, Theory, MODULE_BUILTINS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "realcstar", version, about = "Real group algebras, KO-theory and Real spaces")]
pub struct Cli {
    /// Output format; JSON is authoritative, text is rendered from it.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Cache directory.
    #[arg(long, env = ENV_CACHE_DIR, global = true)]
    cache_dir: Option<PathBuf>,
    /// Always recompute and leave the cache untouched.
    #[arg(long, global = true)]
    no_cache: bool,
    /// More log output on stderr (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Largest group order accepted from input files.
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER, global = true)]
    max_group_order: usize,
    /// Run the subcommand on every `*.json` file in a directory.
    #[arg(long, value_name = "DIR", value_parser = existing_dir, global = true)]
    batch: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Character tables, indicators and real group algebras.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Graded K-groups of a point and their shifts.
    #[command(subcommand)]
    Ktheory(KCommand),
    /// Cohomology and homology of a cyclic group.
    #[command(subcommand)]
    Cyclic(CyclicCommand),
    /// Sign choices and Brauer data of simplicial Real spaces.
    #[command(subcommand)]
    Space(SpaceCommand),
    /// Compact groups through torus characters.
    #[command(subcommand)]
    Weyl(WeylCommand),
    /// Orientifold catalog, duality partition and degree-shift check.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Debug, Args)]
struct Input {
    /// Group, character-table or complex file (JSON).
    #[arg(value_parser = existing_file)]
    file: Option<PathBuf>,
    /// Builtin name instead of a file.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
}

#[derive(Debug, Subcommand)]
enum GroupCommand {
    /// Wedderburn decomposition of the real group algebra.
    Decompose(Input),
    /// Frobenius-Schur indicators and types of the irreducibles.
    Types(Input),
    /// Character table.
    Table(Input),
}

#[derive(Debug, Subcommand)]
enum KCommand {
    /// One period of ko, ku, ksp, ksc or ko-t2.
    Table {
        #[arg(value_parser = ["ko", "ku", "ksp", "ksc", "ko-t2"])]
        theory: String,
        /// Degree shift `s`, giving `G_{n-s}` in degree `n`.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        shift: i64,
    },
    /// Shifts under which two graded-group files agree.
    ShiftEq {
        #[arg(value_parser = existing_file)]
        left: PathBuf,
        #[arg(value_parser = existing_file)]
        right: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ModuleArgs {
    /// Module file `{"order": m, "matrix": [[...]]}`.
    #[arg(value_parser = existing_file)]
    file: Option<PathBuf>,
    /// trivial, sign, hyperbolic or regular.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
    /// Group order for builtin modules.
    #[arg(long, default_value_t = 2)]
    order: u32,
    /// Rank of the trivial module.
    #[arg(long, default_value_t = 1)]
    rank: usize,
    /// Degrees to compute (repeatable); default 0 through 4.
    #[arg(long = "degree")]
    degrees: Vec<u32>,
}

#[derive(Debug, Subcommand)]
enum CyclicCommand {
    Cohomology(ModuleArgs),
    Homology(ModuleArgs),
}

#[derive(Debug, Subcommand)]
enum SpaceCommand {
    /// Sign-choice group and Dixmier-Douady group.
    Brauer(Input),
    /// Enumerate sign choices on the fixed components.
    Signs(Input),
}

#[derive(Debug, Subcommand)]
enum WeylCommand {
    /// Indicator and type of SU(2) irreducibles.
    Su2 {
        /// Spin `k` such as `3/2` (repeatable).
        #[arg(long = "spin", required = true)]
        spins: Vec<String>,
    },
    /// Indicators of the 2-dimensional irreducibles of the Weil group of ℝ.
    WeilH {
        /// Index `n ≥ 1` (repeatable).
        #[arg(long = "n", required = true)]
        ns: Vec<i64>,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    List,
    Verify,
    BcCheck,
}

fn existing_file(s: &str) -> Result<PathBuf, String> {
    let p = PathBuf::from(s);
    if p.is_file() {
        Ok(p)
    } else {
        Err(format!("no such file: {s}"))
    }
}

fn existing_dir(s: &str) -> Result<PathBuf, String> {
    let p = PathBuf::from(s);
    if p.is_dir() {
        Ok(p)
    } else {
        Err(format!("no such directory: {s}"))
    }
}

fn read_source(path: &Path) -> Result<Source, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    Ok(Source::File {
        name: path.display().to_string(),
        bytes,
    })
}

/// A task builder for one input file, used both directly and in batch mode.
type FromSource = fn(Source) -> Task;

fn single_input(input: &Input, batch: bool, make: FromSource) -> Result<Plan, CliError> {
    match (&input.file, &input.builtin, batch) {
        (None, None, true) => Ok(Plan::Batch(make)),
        (_, _, true) => Err(CliError::Usage("--batch replaces the input argument".into())),
        (Some(p), None, false) => Ok(Plan::One(make(read_source(p)?))),
        (None, Some(b), false) => Ok(Plan::One(make(Source::Builtin(b.clone())))),
        (None, None, false) => Err(CliError::Usage("give an input file or --builtin NAME".into())),
        (Some(_), Some(_), false) => unreachable!("clap rejects file with --builtin"),
    }
}

fn cyclic_task(kind: Homological, args: &ModuleArgs, batch: bool) -> Result<Plan, CliError> {
    let degrees = if args.degrees.is_empty() { (0..=4).collect() } else { args.degrees.clone() };
    let module = match (&args.file, &args.builtin, batch) {
        (None, None, true) => {
            return Ok(Plan::BatchCyclic { kind, degrees });
        }
        (_, _, true) => return Err(CliError::Usage("--batch replaces the input argument".into())),
        (Some(p), None, false) => ModuleSource::File(read_source(p)?),
        (None, Some(b), false) => {
            if !MODULE_BUILTINS.contains(&b.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown builtin module `{b}`; expected one of {}",
                    MODULE_BUILTINS.join(", ")
                )));
            }
            ModuleSource::Builtin {
                name: b.clone(),
                order: args.order,
                rank: args.rank,
            }
        }
        (None, None, false) => return Err(CliError::Usage("give a module file or --builtin NAME".into())),
        (Some(_), Some(_), false) => unreachable!("clap rejects file with --builtin"),
    };
    Ok(Plan::One(Task::Cyclic { kind, module, degrees }))
}

enum Plan {
    One(Task),
    Batch(FromSource),
    BatchCyclic { kind: Homological, degrees: Vec<u32> },
}

fn no_batch(task: Task, batch: bool) -> Result<Plan, CliError> {
    if batch {
        Err(CliError::Usage(format!("`{}` does not take --batch", task.command())))
    } else {
        Ok(Plan::One(task))
    }
}

fn plan(cli: &Cli) -> Result<Plan, CliError> {
    let batch = cli.batch.is_some();
    match &cli.command {
        Command::Group(GroupCommand::Decompose(i)) => single_input(i, batch, Task::GroupDecompose),
        Command::Group(GroupCommand::Types(i)) => single_input(i, batch, Task::GroupTypes),
        Command::Group(GroupCommand::Table(i)) => single_input(i, batch, Task::GroupTable),
        Command::Space(SpaceCommand::Brauer(i)) => single_input(i, batch, Task::SpaceBrauer),
        Command::Space(SpaceCommand::Signs(i)) => single_input(i, batch, Task::SpaceSigns),
        Command::Cyclic(CyclicCommand::Cohomology(a)) => cyclic_task(Homological::Cohomology, a, batch),
        Command::Cyclic(CyclicCommand::Homology(a)) => cyclic_task(Homological::Homology, a, batch),
        Command::Ktheory(KCommand::Table { theory, shift }) => {
            let theory = Theory::parse(theory).expect("clap restricts the theory names");
            no_batch(Task::KTable { theory, shift: *shift }, batch)
        }
        Command::Ktheory(KCommand::ShiftEq { left, right }) => no_batch(
            Task::ShiftEq {
                left: read_source(left)?,
                right: read_source(right)?,
            },
            batch,
        ),
        Command::Weyl(WeylCommand::Su2 { spins }) => {
            let spins = spins
                .iter()
                .map(|s| s.parse::<Spin>().map_err(|e| CliError::Usage(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            no_batch(Task::Su2 { spins }, batch)
        }
        Command::Weyl(WeylCommand::WeilH { ns }) => {
            if let Some(bad) = ns.iter().find(|&&n| n < 1) {
                return Err(CliError::Usage(format!("--n must be at least 1, got {bad}")));
            }
            no_batch(Task::WeilH { ns: ns.clone() }, batch)
        }
        Command::Catalog(CatalogCommand::List) => no_batch(Task::CatalogList, batch),
        Command::Catalog(CatalogCommand::Verify) => no_batch(Task::CatalogVerify, batch),
        Command::Catalog(CatalogCommand::BcCheck) => no_batch(Task::CatalogBcCheck, batch),
    }
}

struct Runner {
    cache: Option<Cache>,
    max_order: usize,
}

impl Runner {
    fn execute(&self, task: &Task) -> Result<Value, CliError> {
        let key = cache::digest(task.key_material(self.max_order).as_bytes());
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.load(&key)) {
            return Ok(hit);
        }
        let value = task.compute(self.max_order)?;
        if let Some(c) = &self.cache {
            c.store(&key, &value);
        }
        Ok(value)
    }
}

fn batch_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::Domain(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Runs `make` on every file in parallel; results keep the sorted file order.
fn run_batch(runner: &Runner, dir: &Path, make: &(dyn Fn(Source) -> Task + Sync)) -> Result<(Value, bool), CliError> {
    let files = batch_files(dir)?;
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(files.len().max(1));
    let mut results: Vec<Option<Value>> = vec![None; files.len()];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::SeqCst);
                        let Some(path) = files.get(i) else { break };
                        let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
                        let outcome = read_source(path).and_then(|s| runner.execute(&make(s)));
                        let entry = match outcome {
                            Ok(v) => json!({"file": name, "ok": true, "result": v}),
                            Err(CliError::Domain(m) | CliError::Usage(m)) => json!({"file": name, "ok": false, "error": m}),
                        };
                        done.push((i, entry));
                    }
                    done
                })
            })
            .collect();
        for h in handles {
            for (i, entry) in h.join().expect("batch worker panicked") {
                results[i] = Some(entry);
            }
        }
    });
    let results: Vec<Value> = results.into_iter().map(|r| r.expect("every file processed")).collect();
    let all_ok = results.iter().all(|r| r["ok"] == json!(true));
    Ok((json!({"batch": dir.display().to_string(), "results": results}), all_ok))
}

fn batch_text(v: &Value) -> Result<String, CliError> {
    let mut out = String::new();
    for r in v["results"].as_array().into_iter().flatten() {
        out.push_str(&format!("== {} ==\n", r["file"].as_str().unwrap_or("?")));
        if r["ok"] == json!(true) {
            out.push_str(&render::text(&r["result"])?);
        } else {
            out.push_str(&format!("error: {}\n", r["error"].as_str().unwrap_or("?")));
        }
    }
    Ok(out)
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .format_target(false)
        .target(env_logger::Target::Stderr)
        .try_init();
    log::set_max_level(level);
}

fn usage_error(err: &mut dyn Write, msg: &str) -> i32 {
    let rendered = Cli::command().error(ErrorKind::InvalidValue, msg).render().to_string();
    let _ = write!(err, "{rendered}");
    EXIT_USAGE
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    init_logging(cli.verbose);
    let cache = if cli.no_cache {
        None
    } else {
        cli.cache_dir.clone().or_else(Cache::default_dir).map(Cache::new)
    };
    if let Some(c) = &cache {
        info!("cache directory {}", c.dir().display());
    }
    let runner = Runner {
        cache,
        max_order: cli.max_group_order,
    };

    let outcome = plan(&cli).and_then(|p| match p {
        Plan::One(task) => runner.execute(&task).map(|v| {
            let failed = task.command() == "catalog bc-check" && v["equal"] == json!(false);
            (v, !failed, false)
        }),
        Plan::Batch(make) => {
            run_batch(&runner, cli.batch.as_deref().expect("batch dir"), &make).map(|(v, ok)| (v, ok, true))
        }
        Plan::BatchCyclic { kind, degrees } => {
            let make = move |s: Source| Task::Cyclic {
                kind,
                module: ModuleSource::File(s),
                degrees: degrees.clone(),
            };
            run_batch(&runner, cli.batch.as_deref().expect("batch dir"), &make).map(|(v, ok)| (v, ok, true))
        }
    });
    let (value, ok, is_batch) = match outcome {
        Ok(x) => x,
        Err(CliError::Usage(m)) => return usage_error(err, &m),
        Err(CliError::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            return EXIT_DOMAIN;
        }
    };
    let rendered = match cli.format {
        Format::Json => Ok(serde_json::to_string_pretty(&value).expect("value serializes") + "\n"),
        Format::Text if is_batch => batch_text(&value),
        Format::Text => render::text(&value),
    };
    match rendered {
        Ok(s) => {
            if out.write_all(s.as_bytes()).and_then(|()| out.flush()).is_err() {
                return EXIT_DOMAIN;
            }
        }
        Err(CliError::Domain(m) | CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            return EXIT_DOMAIN;
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_DOMAIN
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
