use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rigidgerb::rigidcoh::Mode;
use rigidgerb::Report;
use rigidgerb_cli::commands::{self, DEFAULT_LEVEL};
use rigidgerb_cli::input::InputDocument;
use rigidgerb_cli::output::{Document, InputInfo};
use rigidgerb_cli::{verify, CliError};

#[derive(Parser)]
#[command(name = "rigidgerb", version, about = "Exact computations with rigid inner forms")]
struct Cli {
    /// Report rendering.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Fixed,
    Stabilized,
}

#[derive(Subcommand)]
enum Command {
    /// Tate cohomology of a gamma-module.
    Tate {
        #[arg(long)]
        input: PathBuf,
        /// One of -1, 0, 1, 2; all four when omitted.
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i32>,
    },
    /// Ybar_{+,tor} of a torus or reductive datum with its pairing table.
    Yplustor {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Stabilized)]
        mode: ModeArg,
    },
    /// Real tower checks and the invariants table of X*(u_n).
    Gerb {
        /// A group (trivial action on mu_n) or a level document.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Comma separated levels; defaults to 2..=12.
        #[arg(long, value_delimiter = ',')]
        n: Vec<i64>,
        /// A single level, shorthand for --n N.
        #[arg(long)]
        level: Option<i64>,
    },
    /// The rigidifying cocycle z of a real torus, lambda read from the input.
    Cocycle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LEVEL)]
        level: i64,
    },
    /// Strong real forms and their cocycles, in both directions.
    Strongform {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        level: Option<i64>,
    },
    /// The SL2 packet over R, or the structure of a given matrix group.
    Sl2demo {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_LEVEL)]
        level: i64,
    },
    /// Seeded invariant suites, or every check applicable to a document.
    Verify {
        /// `all` or one module name.
        #[arg(default_value = "all")]
        target: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Loaded {
    info: InputInfo,
    doc: InputDocument,
}

fn load_file(path: &Path) -> Result<Loaded, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Failure(format!("{}: {}", path.display(), e)))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Schema(format!("{}: not valid UTF-8", path.display())))?;
    let doc = InputDocument::parse(&text).map_err(|e| match e {
        CliError::Schema(m) => CliError::Schema(format!("{}: {}", path.display(), m)),
        other => other,
    })?;
    let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    Ok(Loaded {
        info: InputInfo::new(&name, doc.kind(), &bytes),
        doc,
    })
}

/// A file, or every `.toml` file of a directory in name order.
fn load(path: &Path) -> Result<Vec<Loaded>, CliError> {
    if !path.is_dir() {
        return Ok(vec![load_file(path)?]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| CliError::Failure(format!("{}: {}", path.display(), e)))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map_or(false, |x| x == "toml"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Failure(format!("{}: no .toml files", path.display())));
    }
    files.iter().map(|p| load_file(p)).collect()
}

fn display_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Runs `f` once per input document, prefixing titles in batch mode.
fn per_input<F>(input: Option<&Path>, f: F) -> Result<(Vec<InputInfo>, Vec<Report>), CliError>
where
    F: Fn(Option<&InputDocument>) -> Result<Vec<Report>, CliError>,
{
    let Some(path) = input else {
        return Ok((Vec::new(), f(None)?));
    };
    let loaded = load(path)?;
    let batch = loaded.len() > 1 || path.is_dir();
    let mut infos = Vec::new();
    let mut reports = Vec::new();
    for l in loaded {
        let mut rs = f(Some(&l.doc))?;
        if batch {
            for r in &mut rs {
                r.title = format!("{}: {}", l.info.name, r.title);
            }
        }
        infos.push(l.info);
        reports.extend(rs);
    }
    Ok((infos, reports))
}

fn required<'a>(doc: Option<&'a InputDocument>) -> &'a InputDocument {
    doc.expect("input is required by the argument parser")
}

fn verify_document(doc: &InputDocument, seed: u64) -> Result<Vec<Report>, CliError> {
    let _ = seed;
    match doc {
        InputDocument::Group(d) => {
            let g = d.group.build()?;
            Ok(vec![commands::group_invariants_table(&g, &[2, 3, 4, 6])])
        }
        InputDocument::GammaModule(_) => commands::tate(doc, None),
        InputDocument::Torus(_) | InputDocument::Reductive(_) => {
            let mut out = commands::yplustor(doc, Mode::Fixed)?;
            out.extend(commands::yplustor(doc, Mode::Stabilized)?.into_iter().take(1));
            Ok(out)
        }
        InputDocument::Level(d) => Ok(vec![commands::level_report(&d.build()?)]),
        InputDocument::StrongForm(d) => commands::strongform(Some(doc), d.level.unwrap_or(DEFAULT_LEVEL)),
        InputDocument::MatrixGroup(_) => commands::sl2demo(Some(doc), DEFAULT_LEVEL),
    }
}

fn run(cli: &Cli) -> Result<Document, CliError> {
    let opt = |p: &Option<PathBuf>| p.as_ref().map(|p| format!(" --input {}", display_name(p))).unwrap_or_default();
    let (echo, (inputs, reports)) = match &cli.command {
        Command::Tate { input, degree } => (
            format!(
                "tate{}{}",
                degree.map(|d| format!(" --degree {}", d)).unwrap_or_default(),
                opt(&Some(input.clone()))
            ),
            per_input(Some(input), |d| commands::tate(required(d), *degree))?,
        ),
        Command::Yplustor { input, mode } => {
            let mode = match mode {
                ModeArg::Fixed => Mode::Fixed,
                ModeArg::Stabilized => Mode::Stabilized,
            };
            (
                format!("yplustor --mode {}{}", mode.as_str(), opt(&Some(input.clone()))),
                per_input(Some(input), |d| commands::yplustor(required(d), mode))?,
            )
        }
        Command::Gerb { input, n, level } => {
            let mut ns = n.clone();
            ns.extend(level.iter());
            if ns.is_empty() {
                ns = (2..=12).collect();
            }
            let list: Vec<String> = ns.iter().map(|x| x.to_string()).collect();
            (
                format!("gerb --n {}{}", list.join(","), opt(input)),
                per_input(input.as_deref(), |d| commands::gerb(d, &ns))?,
            )
        }
        Command::Cocycle { input, level } => (
            format!("cocycle --level {}{}", level, opt(&Some(input.clone()))),
            per_input(Some(input), |d| commands::cocycle(required(d), *level))?,
        ),
        Command::Strongform { input, level } => (
            format!(
                "strongform{}{}",
                level.map(|n| format!(" --level {}", n)).unwrap_or_default(),
                opt(input)
            ),
            per_input(input.as_deref(), |d| {
                let from_doc = match d {
                    Some(InputDocument::StrongForm(s)) => s.level,
                    _ => None,
                };
                commands::strongform(d, level.or(from_doc).unwrap_or(DEFAULT_LEVEL))
            })?,
        ),
        Command::Sl2demo { input, level } => (
            format!("sl2demo --level {}{}", level, opt(input)),
            per_input(input.as_deref(), |d| commands::sl2demo(d, *level))?,
        ),
        Command::Verify { target, input, seed } => {
            let echo = format!("verify {} --seed {}{}", target, seed, opt(input));
            let result = match input {
                None => (Vec::new(), verify::run(target, *seed)?),
                Some(p) => per_input(Some(p), |d| verify_document(required(d), *seed))?,
            };
            (echo, result)
        }
    };
    Ok(Document::new(echo, inputs, &reports))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(doc) => {
            let text = match cli.format {
                Format::Human => doc.to_human(),
                Format::Machine => doc.to_machine(),
            };
            print!("{}", text);
            if doc.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("rigidgerb: {}", e);
            ExitCode::from(e.exit_code())
        }
    }
}
