//! `zones`: build a zone index over point catalogs and query or match it.

mod angle;
mod bench;
mod commands;
mod error;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zones_core::{DistanceUnit, Distribution, MarginPolicy, ObjType};

use crate::angle::parse_angle;
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "zones", version, about = "Zone index for points on the sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an index file from CSV catalogs or a synthetic catalog.
    Build(BuildArgs),
    /// List objects within a radius of a point.
    Near(NearArgs),
    /// Find the closest object to a point.
    Nearest(NearestArgs),
    /// All pairs of neighbors within one dataset.
    Selfmatch(SelfMatchArgs),
    /// All neighbor pairs between two datasets.
    Crossmatch(CrossMatchArgs),
    /// Check the index against brute force on synthetic catalogs.
    Verify(VerifyArgs),
    /// Time batch self-match against a per-point loop and brute force.
    Bench(BenchArgs),
    /// Write a synthetic catalog as CSV (`id,lon,lat`).
    Generate(GenerateArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct IndexShape {
    /// Zone height (degrees, or e.g. `10m`).
    #[arg(long, value_parser = parse_angle, default_value = "10m")]
    zone_height: f64,
    /// Design match radius (degrees, or e.g. `30s`).
    #[arg(long, value_parser = parse_angle, default_value = "1")]
    theta: f64,
    #[arg(long, value_enum, default_value = "full")]
    margin: MarginArg,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum MarginArg {
    Full,
    Trimmed,
}

impl From<MarginArg> for MarginPolicy {
    fn from(m: MarginArg) -> Self {
        match m {
            MarginArg::Full => MarginPolicy::Full,
            MarginArg::Trimmed => MarginPolicy::Trimmed,
        }
    }
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
enum UnitArg {
    #[default]
    Deg,
    Nm,
    Arcmin,
}

impl From<UnitArg> for DistanceUnit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Deg => DistanceUnit::Degrees,
            UnitArg::Nm => DistanceUnit::NauticalMiles,
            UnitArg::Arcmin => DistanceUnit::Arcminutes,
        }
    }
}

fn parse_obj_type(s: &str) -> Result<ObjType, String> {
    s.parse()
}

fn parse_distribution(s: &str) -> Result<Distribution, String> {
    s.parse()
}

#[derive(Args, Debug)]
struct BuildArgs {
    /// Catalog as `TYPE=PATH` or `TYPE=PATH:IDCOL,LONCOL,LATCOL`
    /// (columns default to `id,lon,lat`). Repeatable.
    #[arg(long = "catalog", value_name = "SPEC")]
    catalogs: Vec<String>,
    /// Add a synthetic catalog as `TYPE=N`. Repeatable.
    #[arg(long = "synthetic", value_name = "TYPE=N")]
    synthetic: Vec<String>,
    #[arg(long, value_parser = parse_distribution, default_value = "uniform")]
    distribution: Distribution,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    shape: IndexShape,
    /// Index file to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Clone, Copy)]
struct Point {
    /// Longitude / right ascension.
    #[arg(long, alias = "ra", value_parser = parse_angle, allow_hyphen_values = true)]
    lon: f64,
    /// Latitude / declination.
    #[arg(long, alias = "dec", value_parser = parse_angle, allow_hyphen_values = true)]
    lat: f64,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t)]
    units: UnitArg,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NearArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long = "type", value_parser = parse_obj_type)]
    obj_type: ObjType,
    #[command(flatten)]
    point: Point,
    /// Search radius; defaults to the index design radius.
    #[arg(long, value_parser = parse_angle)]
    theta: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct NearestArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long = "type", value_parser = parse_obj_type)]
    obj_type: ObjType,
    #[command(flatten)]
    point: Point,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SelfMatchArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long = "type", value_parser = parse_obj_type)]
    obj_type: ObjType,
    /// Match radius; defaults to the index design radius.
    #[arg(long, value_parser = parse_angle)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Emit each unordered pair once as (smaller id, larger id).
    #[arg(long)]
    half: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CrossMatchArgs {
    #[arg(long)]
    index: PathBuf,
    /// Second index file; defaults to `--index`.
    #[arg(long)]
    index_b: Option<PathBuf>,
    #[arg(long, value_parser = parse_obj_type)]
    type_a: ObjType,
    #[arg(long, value_parser = parse_obj_type)]
    type_b: ObjType,
    #[arg(long, value_parser = parse_angle)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Points per synthetic catalog.
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// One distribution; all of them when omitted.
    #[arg(long, value_parser = parse_distribution)]
    distribution: Option<Distribution>,
    #[command(flatten)]
    shape: IndexShape,
    #[arg(long, default_value_t = 2)]
    workers: usize,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_parser = parse_distribution, default_value = "uniform")]
    distribution: Distribution,
    #[command(flatten)]
    shape: IndexShape,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Timed runs per method.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Skip the quadratic brute-force run.
    #[arg(long)]
    skip_brute: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_parser = parse_distribution, default_value = "uniform")]
    distribution: Distribution,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build(a) => commands::build(a),
        Command::Near(a) => commands::near(a),
        Command::Nearest(a) => commands::nearest(a),
        Command::Selfmatch(a) => commands::selfmatch(a),
        Command::Crossmatch(a) => commands::crossmatch(a),
        Command::Verify(a) => verify::run(a),
        Command::Bench(a) => bench::run(a),
        Command::Generate(a) => commands::generate(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zones: {e}");
            e.exit_code()
        }
    }
}
