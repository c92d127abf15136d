//! Command-line interface: parse quiver/loop files, dispatch computations,
//! and emit series and diagnostics.
//!
//! Exit codes: 0 success (and EQUAL verdicts), 1 identity check failed or
//! DIFFER, 2 parse/usage error, 3 not a loop, 4 degenerate loop, 5 positivity
//! failed, 6 pentagon precondition violated, 7 lattice point limit exceeded.

mod json;
mod output;

use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;

use qloop_core::{
    count_lattice_points, dynkin_closed_form_exponent, dynkin_loop, exponent_form,
    partition_series, q_pentagon_check, square_closed_form_exponent, square_loop, theta_check_a3,
    DynkinType, EngineError, ExponentForm, LoopError, MutationLoop, QSeries, Rat, SquareOrder,
    Strategy, SumOptions, VarSysError,
};

pub struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn new(code: i32, message: impl Display) -> Self {
        CliError {
            code,
            message: message.to_string(),
        }
    }

    pub fn parse(message: impl Display) -> Self {
        Self::new(2, message)
    }

    fn silent(code: i32) -> Self {
        CliError {
            code,
            message: String::new(),
        }
    }

    pub fn from_loop_error(e: LoopError) -> Self {
        match &e {
            LoopError::NotALoop { .. } => Self::new(3, e),
            LoopError::Quiver(_) => Self::new(2, e),
            LoopError::PentagonArrow { .. }
            | LoopError::PentagonPattern { .. }
            | LoopError::PositionOutOfRange { .. } => Self::new(6, e),
        }
    }

    fn from_varsys(e: VarSysError) -> Self {
        match &e {
            VarSysError::Degenerate => Self::new(4, e),
            _ => Self::new(1, e),
        }
    }

    fn from_engine(e: EngineError) -> Self {
        match &e {
            EngineError::VarSys(VarSysError::Degenerate) => Self::new(4, e),
            EngineError::PositivityFailed => Self::new(5, e),
            EngineError::MaxTermsExceeded { .. } => Self::new(7, e),
            _ => Self::new(1, e),
        }
    }
}

fn parse_cutoff(s: &str) -> Result<Rat, String> {
    let r = Rat::from_str(s).map_err(|e| format!("invalid cutoff {s:?}: {e}"))?;
    if r.is_negative() {
        return Err(format!("cutoff must be nonnegative, got {s}"));
    }
    Ok(r)
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    #[value(name = "pd-recursive")]
    PdRecursive,
    #[value(name = "simplex-bound")]
    SimplexBound,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::PdRecursive => Strategy::PdRecursive,
            StrategyArg::SimplexBound => Strategy::SimplexBound,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Plus,
    Minus,
}

impl From<OrderArg> for SquareOrder {
    fn from(o: OrderArg) -> SquareOrder {
        match o {
            OrderArg::Plus => SquareOrder::PlusFirst,
            OrderArg::Minus => SquareOrder::MinusFirst,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Truncation cutoff: a rational like 25/2, or a bare integer
    #[arg(long, value_parser = parse_cutoff, default_value = "4")]
    cutoff: Rat,
    /// Output format on stdout
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the lattice sum (partitioned by first coordinate)
    #[arg(long, default_value_t = 1)]
    jobs: u32,
    /// Print the exponent form diagnostics to stderr
    #[arg(long)]
    verbose: bool,
    /// Override the lattice enumeration strategy
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Abort enumerations past this many lattice points
    #[arg(long, default_value_t = 10_000_000)]
    max_terms: u64,
}

#[derive(Args)]
struct ModeFlags {
    /// Only compute the closed-form series
    #[arg(long, conflicts_with_all = ["direct", "both"])]
    closed_form: bool,
    /// Only compute the series directly from the loop (default)
    #[arg(long, conflicts_with = "both")]
    direct: bool,
    /// Compute both and report EQUAL or DIFFER
    #[arg(long)]
    both: bool,
}

#[derive(Parser)]
#[command(name = "qloop", version, about = "Partition q-series of quiver mutation loops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the partition q-series of a loop file
    Compute {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Expand the pentagon move at a position and compare the two series
    VerifyPentagon {
        file: PathBuf,
        /// Position in the normalized mutation list (0-based)
        #[arg(long)]
        pos: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Series of the canonical loop of an alternating Dynkin quiver
    Dynkin {
        /// Type string like A3, D5, E6 (case-insensitive)
        r#type: String,
        #[command(flatten)]
        mode: ModeFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Series of the canonical loop of a square product of Dynkin quivers
    Square {
        type1: String,
        type2: String,
        /// Which sign class is mutated first
        #[arg(long, value_enum, default_value_t = OrderArg::Plus)]
        order: OrderArg,
        #[command(flatten)]
        mode: ModeFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in identity checks and print a pass/fail table
    CheckIdentities {
        #[command(flatten)]
        common: Common,
    },
    /// Print the grading denominator, Gram matrix, positivity certificate,
    /// and normal form of a loop file
    Info {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

/// Sum the partition series of a form, in parallel when requested. The
/// global point limit is enforced by an exact pre-count; worker partials
/// (one residue class of the first coordinate each) add up exactly, so the
/// result is byte-identical for every job count.
fn run_series(form: &ExponentForm, common: &Common) -> Result<QSeries, CliError> {
    if common.verbose {
        eprintln!("delta: {}", form.delta());
        eprintln!("gram: {}", output::gram_text(form.gram()));
        eprintln!("positivity: {}", form.positivity());
    }
    if !form.positivity().is_positive() {
        return Err(CliError::from_engine(EngineError::PositivityFailed));
    }
    let points = count_lattice_points(form, &common.cutoff, Some(common.max_terms))
        .map_err(CliError::from_engine)?;
    if common.verbose {
        eprintln!("lattice points: {points}");
    }
    let strategy = common.strategy.map(Strategy::from);
    let jobs = common.jobs.max(1) as u64;
    if jobs == 1 {
        return partition_series(
            form,
            &common.cutoff,
            &SumOptions {
                strategy,
                ..SumOptions::default()
            },
        )
        .map_err(CliError::from_engine);
    }
    let partials: Vec<Result<QSeries, EngineError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|r| {
                let cutoff = &common.cutoff;
                scope.spawn(move || {
                    partition_series(
                        form,
                        cutoff,
                        &SumOptions {
                            strategy,
                            max_terms: None,
                            first_residue: Some((r, jobs)),
                        },
                    )
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut acc = QSeries::zero(form.delta(), common.cutoff.clone());
    for partial in partials {
        acc = acc.add(&partial.map_err(CliError::from_engine)?);
    }
    Ok(acc)
}

fn loop_series(lp: &MutationLoop, common: &Common) -> Result<QSeries, CliError> {
    let form = exponent_form(lp).map_err(CliError::from_varsys)?;
    run_series(&form, common)
}

fn print_series(z: &QSeries, format: Format) {
    match format {
        Format::Text => println!("{}", output::series_text(z)),
        Format::Json => println!("{}", output::series_json(z)),
    }
}

fn print_pair(
    labels: (&str, &str),
    a: &QSeries,
    b: &QSeries,
    equal: bool,
    format: Format,
) {
    match format {
        Format::Text => {
            println!("{}: {}", labels.0, output::series_text(a));
            println!("{}: {}", labels.1, output::series_text(b));
            println!("{}", if equal { "EQUAL" } else { "DIFFER" });
        }
        Format::Json => {
            println!(
                "{{\"{}\": {}, \"{}\": {}, \"equal\": {equal}}}",
                labels.0.replace('-', "_"),
                output::series_json(a),
                labels.1.replace('-', "_"),
                output::series_json(b),
            );
        }
    }
}

fn parse_type(s: &str) -> Result<DynkinType, CliError> {
    s.parse().map_err(CliError::parse)
}

/// Dispatch for dynkin/square: direct series, closed form, or both.
fn run_mode(
    mode: &ModeFlags,
    common: &Common,
    direct: impl FnOnce() -> Result<QSeries, CliError>,
    closed: impl FnOnce() -> Result<QSeries, CliError>,
) -> Result<(), CliError> {
    if mode.both {
        let d = direct()?;
        let c = closed()?;
        let equal = d.agrees_with(&c);
        print_pair(("direct", "closed-form"), &d, &c, equal, common.format);
        if equal {
            Ok(())
        } else {
            Err(CliError::silent(1))
        }
    } else if mode.closed_form {
        print_series(&closed()?, common.format);
        Ok(())
    } else {
        print_series(&direct()?, common.format);
        Ok(())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compute { file, common } => {
            let lp = json::read_loop_file(&file)?;
            let z = loop_series(&lp, &common)?;
            print_series(&z, common.format);
            Ok(())
        }
        Command::VerifyPentagon { file, pos, common } => {
            let lp = json::read_loop_file(&file)?;
            let expanded = lp.pentagon_expand(pos).map_err(CliError::from_loop_error)?;
            let z = loop_series(&lp, &common)?;
            let z_expanded = loop_series(&expanded, &common)?;
            let equal = z.agrees_with(&z_expanded);
            print_pair(("original", "expanded"), &z, &z_expanded, equal, common.format);
            if equal {
                Ok(())
            } else {
                Err(CliError::silent(1))
            }
        }
        Command::Dynkin { r#type, mode, common } => {
            let t = parse_type(&r#type)?;
            run_mode(
                &mode,
                &common,
                || loop_series(&dynkin_loop(t), &common),
                || run_series(&dynkin_closed_form_exponent(t), &common),
            )
        }
        Command::Square {
            type1,
            type2,
            order,
            mode,
            common,
        } => {
            let t1 = parse_type(&type1)?;
            let t2 = parse_type(&type2)?;
            let order = SquareOrder::from(order);
            run_mode(
                &mode,
                &common,
                || {
                    let lp = square_loop(t1, t2, order).map_err(CliError::parse)?;
                    loop_series(&lp, &common)
                },
                || {
                    let form =
                        square_closed_form_exponent(t1, t2, order).map_err(CliError::parse)?;
                    run_series(&form, &common)
                },
            )
        }
        Command::CheckIdentities { common } => {
            let mut all = true;
            let mut lines = Vec::new();
            for m in 0..=5u64 {
                for n in 0..=5u64 {
                    let pass = q_pentagon_check(m, n, &common.cutoff);
                    all &= pass;
                    lines.push((format!("q-pentagon m={m} n={n}"), pass));
                }
            }
            let theta = theta_check_a3(&common.cutoff);
            all &= theta;
            lines.push(("theta-a3".into(), theta));
            match common.format {
                Format::Text => {
                    for (name, pass) in &lines {
                        println!("{name}: {}", if *pass { "PASS" } else { "FAIL" });
                    }
                }
                Format::Json => {
                    let checks: Vec<String> = lines
                        .iter()
                        .map(|(name, pass)| format!("{{\"name\": \"{name}\", \"pass\": {pass}}}"))
                        .collect();
                    println!(
                        "{{\"checks\": [{}], \"all_pass\": {all}}}",
                        checks.join(", ")
                    );
                }
            }
            if all {
                Ok(())
            } else {
                Err(CliError::silent(1))
            }
        }
        Command::Info { file, common } => {
            let lp = json::read_loop_file(&file)?;
            let form = exponent_form(&lp).map_err(CliError::from_varsys)?;
            let positivity = form.positivity().to_string();
            let nf = lp.normal_form();
            let q = lp.initial_quiver();
            match common.format {
                Format::Text => println!(
                    "{}",
                    output::info_text(q, form.delta(), form.gram(), &positivity, nf)
                ),
                Format::Json => println!(
                    "{}",
                    output::info_json(q, form.delta(), form.gram(), &positivity, nf)
                ),
            }
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        if !e.message.is_empty() {
            eprintln!("error: {}", e.message);
        }
        std::process::exit(e.code);
    }
}
