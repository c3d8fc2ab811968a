mod commands;
mod defaults;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fractal_zeta::Error;

/// Fractal strings, complex dimensions, tube formulas and multifractal zeta
/// functions. Rationals are given as `num/den`.
#[derive(Parser, Debug)]
#[command(name = "fzeta", version)]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build and serialize a string.
    #[command(subcommand)]
    String(StringCmd),
    /// Evaluate the geometric zeta function of a lattice string.
    Zeta(ZetaArgs),
    /// List the complex dimensions of a lattice string inside a window.
    Dims(DimsArgs),
    /// Compare the direct and explicit tube volumes on an ε grid.
    Tube(TubeArgs),
    /// Exact census of the construction intervals of a binomial measure.
    MeasureCensus(CensusArgs),
    /// Evaluate one partition zeta function and its abscissa.
    Pzeta(PzetaArgs),
    /// Sample the multifractal spectrum σ(α).
    Spectrum(SpectrumArgs),
    /// Multifractal zeta functions of the Cantor layouts at ±∞.
    Mzeta(MzetaArgs),
    /// Running bounds of V(ε)ε^(D-1) over successive decades.
    ContentBounds(ContentArgs),
    /// Box-counting numbers of a realized layout.
    BoxDim(BoxArgs),
}

#[derive(Args, Debug, Clone)]
struct LatticeArgs {
    /// Scaling ratio r.
    #[arg(long, default_value = defaults::R)]
    r: String,
    /// Copies per generation m.
    #[arg(long, default_value_t = defaults::M)]
    m: u64,
}

#[derive(Subcommand, Debug)]
enum StringCmd {
    /// Lengths of the lattice string with ratio r and multiplicity m.
    Lattice {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = defaults::STRING_TERMS)]
        n_terms: usize,
    },
    /// Intervals of a Cantor layout truncated at a generation.
    Realize {
        #[arg(long)]
        variant: String,
        #[arg(long, default_value_t = defaults::DEPTH)]
        depth: usize,
    },
}

#[derive(Args, Debug)]
struct ZetaArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long, allow_hyphen_values = true)]
    s_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    s_im: f64,
    #[arg(long, default_value_t = defaults::ZETA_TERMS)]
    n_terms: usize,
}

#[derive(Args, Debug)]
struct DimsArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long, default_value_t = defaults::IM_MAX, allow_hyphen_values = true)]
    im_max: f64,
    /// Defaults to `-im_max`.
    #[arg(long, allow_hyphen_values = true)]
    im_min: Option<f64>,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    re_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    re_max: f64,
    /// Cross-check every residue by contour integration.
    #[arg(long)]
    verify: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct TubeArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long, default_value_t = defaults::TUBE_GRID)]
    grid: usize,
    #[arg(long, default_value_t = defaults::TUBE_EPS_MIN)]
    eps_min: f64,
    #[arg(long, default_value_t = defaults::TUBE_EPS_MAX)]
    eps_max: f64,
    /// A single exact ε instead of the grid.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    #[arg(long, default_value_t = defaults::TUBE_TERMS)]
    n_terms: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
struct MeasureArgs {
    #[arg(long, default_value_t = defaults::H)]
    h: u32,
    #[arg(long, default_value = defaults::W)]
    w: String,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    #[arg(long, default_value_t = defaults::CENSUS_DEPTH)]
    n: usize,
    /// Emit every level `1..=n`, not only level `n`.
    #[arg(long)]
    all_levels: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct PzetaArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    #[arg(long)]
    k1: u64,
    #[arg(long)]
    k2: u64,
    #[arg(long, allow_hyphen_values = true)]
    s_re: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    s_im: f64,
    #[arg(long, default_value_t = defaults::PZETA_TERMS)]
    n_terms: usize,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    /// Largest denominator k2.
    #[arg(long = "K", alias = "k", default_value_t = defaults::SPECTRUM_K)]
    k: u64,
    /// Emit the continuous curve on this many points instead of the samples.
    #[arg(long)]
    curve: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct MzetaArgs {
    /// omega1, omega2 or omega3; all three when omitted.
    #[arg(long)]
    variant: Option<String>,
    #[arg(long, default_value = defaults::ETA1)]
    eta1: String,
    #[arg(long, default_value = defaults::ETA_RATIO)]
    eta_ratio: String,
    #[arg(long, default_value_t = defaults::IM_MAX, allow_hyphen_values = true)]
    im_max: f64,
    /// Compare closed forms with stage-by-stage sums up to this stage.
    #[arg(long)]
    verify_stages: Option<usize>,
    /// Real probe points for the comparison.
    #[arg(long, default_value = defaults::VERIFY_S)]
    verify_s: String,
}

#[derive(Args, Debug)]
struct ContentArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    /// Exponent D; the Minkowski dimension when omitted.
    #[arg(long)]
    d: Option<f64>,
    #[arg(long, default_value_t = defaults::CONTENT_EPS_MAX)]
    eps_max: f64,
    #[arg(long, default_value_t = defaults::CONTENT_DECADES)]
    decades: u32,
    /// Points per oscillation period.
    #[arg(long, default_value_t = defaults::CONTENT_GRID)]
    grid: usize,
}

#[derive(Args, Debug)]
struct BoxArgs {
    #[arg(long, default_value = "omega1")]
    variant: String,
    #[arg(long, default_value_t = defaults::DEPTH)]
    depth: usize,
    /// Comma-separated exact scales; defaults to 3^-k for k = 1..=depth.
    #[arg(long)]
    eps: Option<String>,
}

fn run(cli: &Cli) -> Result<String, Error> {
    match &cli.command {
        Command::String(StringCmd::Lattice { lattice, n_terms }) => {
            commands::string_lattice(&lattice.r, lattice.m, *n_terms)
        }
        Command::String(StringCmd::Realize { variant, depth }) => {
            commands::string_realize(variant, *depth)
        }
        Command::Zeta(a) => commands::zeta(&a.lattice.r, a.lattice.m, a.s_re, a.s_im, a.n_terms),
        Command::Dims(a) => commands::dims(
            &a.lattice.r,
            a.lattice.m,
            a.re_min,
            a.re_max,
            a.im_min.unwrap_or(-a.im_max),
            a.im_max,
            a.verify,
        ),
        Command::Tube(a) => commands::tube(&commands::TubeRequest {
            r: &a.lattice.r,
            m: a.lattice.m,
            grid: a.grid,
            eps_min: a.eps_min,
            eps_max: a.eps_max,
            epsilon: a.epsilon.as_deref(),
            n_terms: a.n_terms,
            json: a.format == Format::Json,
        }),
        Command::MeasureCensus(a) => commands::census(
            a.measure.h,
            &a.measure.w,
            a.n,
            a.all_levels,
            a.format == Format::Json,
        ),
        Command::Pzeta(a) => commands::pzeta(
            a.measure.h,
            &a.measure.w,
            a.k1,
            a.k2,
            a.s_re.map(|re| (re, a.s_im)),
            a.n_terms,
        ),
        Command::Spectrum(a) => commands::spectrum(
            a.measure.h,
            &a.measure.w,
            a.k,
            a.curve,
            a.format == Format::Json,
        ),
        Command::Mzeta(a) => commands::mzeta(&commands::MzetaRequest {
            variant: a.variant.as_deref(),
            eta1: &a.eta1,
            eta_ratio: &a.eta_ratio,
            im_max: a.im_max,
            verify_stages: a.verify_stages,
            verify_s: &a.verify_s,
        }),
        Command::ContentBounds(a) => {
            commands::content_bounds(&a.lattice.r, a.lattice.m, a.d, a.eps_max, a.decades, a.grid)
        }
        Command::BoxDim(a) => commands::box_dim(&a.variant, a.depth, a.eps.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            eprintln!("error: usage: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let text = match run(&cli) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {}: {}", e.kind(), e.detail());
            return ExitCode::FAILURE;
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: io: {msg}");
            ExitCode::FAILURE
        }
    }
}
