use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;

use crate::config::{
    BoxRuleChoice, HalfLength, MethodChoice, Mode, PositionsSpec, Preset, RunConfig, SqrtPrimeChain,
};
use crate::error::CliError;

/// Scattering amplitudes, Dirichlet spectra and level statistics for a chain
/// of scale-invariant point defects on a line.
#[derive(Debug, Parser)]
#[command(name = "ftchain", version)]
pub struct Cli {
    /// JSON file mirroring the run configuration; flags override its fields.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// Named geometry; fig3 presets accept --alpha 27, 5 or 2 (default 2).
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,

    /// Coupling strength (nonzero); defaults to 1.5 without a preset.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,

    /// Coupling phase in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,

    /// Explicit, strictly increasing defect positions.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "n"
    )]
    pub positions: Option<Vec<f64>>,

    /// Number of defects on the square-root-prime chain.
    #[arg(long)]
    pub n: Option<usize>,

    /// Box half-length, or `fig3_rule` to derive it from N.
    #[arg(long = "L", visible_alias = "half-length", value_name = "L|fig3_rule")]
    pub half_length: Option<HalfLength>,

    #[arg(long, value_enum)]
    pub box_rule: Option<BoxRuleChoice>,

    /// Amplitude algorithm for scans [default: transfer].
    #[arg(long, value_enum)]
    pub method: Option<MethodChoice>,

    #[arg(long)]
    pub k_min: Option<f64>,

    #[arg(long)]
    pub k_max: Option<f64>,

    #[arg(long)]
    pub k_points: Option<usize>,

    /// Levels wanted; for spacings this counts levels kept after discarding.
    #[arg(long)]
    pub levels: Option<usize>,

    /// Lowest levels dropped before unfolding.
    #[arg(long)]
    pub discard_low: Option<usize>,

    #[arg(long)]
    pub bin_width: Option<f64>,

    #[arg(long)]
    pub histogram_max: Option<f64>,

    /// Largest lag of the autocorrelation, in units of k.
    #[arg(long)]
    pub max_lag: Option<f64>,

    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Recorded in JSON output; the pipeline itself is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Cli {
    /// Config file (if any) overlaid with the flags.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let positions = match (self.positions, self.n) {
            (Some(xs), _) => Some(PositionsSpec::Explicit(xs)),
            (None, Some(n)) => Some(PositionsSpec::Generated(SqrtPrimeChain { sqrt_primes: n })),
            (None, None) => None,
        };
        let flags = RunConfig {
            mode: self.mode,
            preset: self.preset,
            alpha: self.alpha,
            phi: self.phi,
            positions,
            half_length: self.half_length,
            box_rule: self.box_rule,
            method: self.method,
            k_min: self.k_min,
            k_max: self.k_max,
            k_points: self.k_points,
            levels: self.levels,
            discard_low: self.discard_low,
            bin_width: self.bin_width,
            histogram_max: self.histogram_max,
            max_lag: self.max_lag,
            output_path: self.output,
            seed: self.seed,
        };
        Ok(base.overlay(flags))
    }
}

/// Parses `args`, runs, writes the output and returns the exit status.
pub fn execute<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match cli.into_config().and_then(|config| {
        let outcome = crate::run(&config)?;
        crate::write_output(&config, &outcome)?;
        Ok(outcome)
    }) {
        Ok(outcome) => {
            for note in &outcome.notes {
                eprintln!("{note}");
            }
            match &outcome.warning {
                Some(w) => {
                    eprintln!("warning: {w}; partial output written");
                    2
                }
                None => 0,
            }
        }
        Err(e) => {
            eprintln!("ftchain: {e}");
            e.exit_code()
        }
    }
}
