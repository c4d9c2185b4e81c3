//! Argument parsing and dispatch for the `dpgrid` binary.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use super::{
    homology_report, invariance_report, suite_commute, suite_d2, suite_fuzz, suite_stabilize, suite_vhomotopy,
    vpromotion_report, MoveScript, Report,
};
use crate::combined::MoveKind;
use crate::error::{Error, Result};
use crate::grid::{GridDiagram, Theory};
use crate::homology::{Route, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Parser, Debug)]
#[command(name = "dpgrid", version, about = "Double-point enhanced grid homology and its invariance checks")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for random diagrams.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check chain-level identities.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Homology table of GH- or GH*.
    Homology {
        grid: PathBuf,
        #[arg(long, default_value = "bullet")]
        theory: Theory,
        /// `d0:d1,s0:s1`
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value = "collapsed")]
        route: Route,
    },
    /// Compare GH-(K) with v adjoined against GH*(K).
    CompareVpromotion {
        grid: PathBuf,
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value = "collapsed")]
        route: Route,
    },
    /// Run a move script and compare the homology of its endpoints.
    Invariance {
        grid: PathBuf,
        #[arg(long)]
        script: PathBuf,
        #[arg(long, default_value = "collapsed")]
        route: Route,
    },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// All three differentials square to zero.
    D2 { grid: PathBuf },
    /// The homotopies between consecutive variables.
    Vhomotopy { grid: PathBuf },
    /// Pentagon and hexagon counts and the commutation identities.
    Commute {
        grid: PathBuf,
        #[arg(long)]
        col: usize,
        /// Treat the move as a switch (the columns share one marking row).
        #[arg(long)]
        switch: bool,
    },
    /// Stabilization component identities and the cone tables.
    Stabilize {
        grid: PathBuf,
        #[arg(long)]
        col: usize,
    },
    /// d2 and vhomotopy on seeded random diagrams.
    Fuzz {
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Grid numbers to cycle through.
        #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
        sizes: Vec<usize>,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_outcome(e: &Error) -> Outcome {
    let body = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
    Outcome { code: 2, stdout: String::new(), stderr: serde_json::to_string(&body).expect("json") + "\n" }
}

fn read_grid(path: &PathBuf) -> Result<GridDiagram> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedInput(format!("cannot read {}: {e}", path.display())))?;
    GridDiagram::from_json(&text)
}

fn parse_window(w: &Option<String>) -> Result<Option<Window>> {
    w.as_deref().map(Window::parse).transpose()
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Human => report.to_human(),
    }
}

fn finish(report: Report, format: Format) -> Outcome {
    let code = if report.passed() { 0 } else { 1 };
    Outcome { code, stdout: render(&report, format), stderr: String::new() }
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    let format = cli.format;
    match cli.command {
        Command::Verify { what } => {
            let report = match what {
                Verify::D2 { grid } => {
                    let mut r = Report::new("verify d2");
                    r.checks = suite_d2(&read_grid(&grid)?);
                    r
                }
                Verify::Vhomotopy { grid } => {
                    let mut r = Report::new("verify vhomotopy");
                    r.checks = suite_vhomotopy(&read_grid(&grid)?);
                    r
                }
                Verify::Commute { grid, col, switch } => {
                    let kind = if switch { MoveKind::Switch } else { MoveKind::Commutation };
                    let mut r = Report::new("verify commute");
                    r.checks = suite_commute(&read_grid(&grid)?, col, kind)?;
                    r
                }
                Verify::Stabilize { grid, col } => {
                    let mut r = Report::new("verify stabilize");
                    let (checks, data) = suite_stabilize(&read_grid(&grid)?, col)?;
                    r.checks = checks;
                    r.data = data;
                    r
                }
                Verify::Fuzz { count, sizes } => {
                    if sizes.iter().any(|&n| n < 2) || sizes.is_empty() {
                        return Err(Error::MalformedInput("sizes must be at least 2".into()));
                    }
                    let mut r = Report::new("verify fuzz");
                    let (checks, data) = suite_fuzz(count, &sizes, cli.seed);
                    r.seed = Some(cli.seed);
                    r.checks = checks;
                    r.data = data;
                    r
                }
            };
            Ok(finish(report, format))
        }
        Command::Homology { grid, theory, window, route } => {
            let g = read_grid(&grid)?;
            let table = homology_report(&g, theory, parse_window(&window)?, route);
            let stdout = match format {
                Format::Json => serde_json::to_string_pretty(&table.to_json()).expect("json") + "\n",
                Format::Csv => table.to_csv(),
                Format::Human => table.to_human(),
            };
            Ok(Outcome { code: 0, stdout, stderr: String::new() })
        }
        Command::CompareVpromotion { grid, window, route } => {
            let g = read_grid(&grid)?;
            let (check, data) = vpromotion_report(&g, parse_window(&window)?, route);
            let stdout = match format {
                Format::Json => serde_json::to_string_pretty(&data).expect("json") + "\n",
                Format::Csv => {
                    let mut s = String::from("table,kind,d,s,power,value\n");
                    for key in ["promoted", "bullet"] {
                        let t = crate::homology::HomologyTable::from_json(&data[key])?;
                        for line in t.to_csv().lines().skip(1) {
                            s += &format!("{key},{line}\n");
                        }
                    }
                    s
                }
                Format::Human => match &check.witness {
                    None => "GH-(K)[v] and GH*(K) agree on the window\n".to_string(),
                    Some(w) => format!("GH-(K)[v] and GH*(K) differ: {w}\n"),
                },
            };
            Ok(Outcome { code: 0, stdout, stderr: String::new() })
        }
        Command::Invariance { grid, script, route } => {
            let g = read_grid(&grid)?;
            let text = std::fs::read_to_string(&script)
                .map_err(|e| Error::MalformedInput(format!("cannot read {}: {e}", script.display())))?;
            let script = MoveScript::from_json(&text)?;
            let (checks, data) = invariance_report(&g, &script, route)?;
            let mut r = Report::new("invariance");
            r.checks = checks;
            r.data = data;
            Ok(finish(r, format))
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => error_outcome(&Error::MalformedInput(e.to_string().trim().to_string())),
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => return error_outcome(&Error::MalformedInput(format!("thread pool: {e}"))),
    };
    pool.install(|| dispatch(cli)).unwrap_or_else(|e| error_outcome(&e))
}
