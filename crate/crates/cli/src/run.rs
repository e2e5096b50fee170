//! Resolution of a [`RunConfig`] into a concrete geometry and the five modes.

use rayon::prelude::*;
use serde::Serialize;

use ftchain_core::scattering::{enumerate_frequencies, Method};
use ftchain_core::spectrum::{
    find_spectrum, quantization_residual, SpectralProblem, Spectrum, DEFAULT_GRID_PER_SPACING,
};
use ftchain_core::statistics::{
    compare, local_extrema_density, transmission_autocorrelation, unfold, DEFAULT_BIN_WIDTH,
    DEFAULT_DISCARD_LOW, DEFAULT_HISTOGRAM_MAX,
};
use ftchain_core::{sqrt_prime_positions, Coupling, DefectArray, Error, ScatteringAmplitudes};

use crate::config::{
    BoxRuleChoice, HalfLength, MethodChoice, Mode, PositionsSpec, Preset, RunConfig,
};
use crate::error::CliError;
use crate::format::{self, num, Csv, SCHEMA_VERSION};
use crate::presets::{self, FIG2_ALPHA, FIG3_ALPHAS, FIG3_DEFAULT_ALPHA};

pub const DEFAULT_K_MAX: f64 = 20.0;
pub const DEFAULT_K_POINTS: usize = 4000;
pub const DEFAULT_LEVELS: usize = 2000;
pub const DEFAULT_MAX_LAG: f64 = 2.0;

/// A configuration with the geometry pinned down.
#[derive(Debug, Clone)]
pub struct Setup {
    pub mode: Mode,
    pub preset: Option<Preset>,
    pub coupling: Coupling,
    pub defects: DefectArray,
    pub half_length: Option<f64>,
    pub box_rule: BoxRuleChoice,
    pub method: MethodChoice,
    pub config: RunConfig,
}

/// What a run produced. A `warning` means the document is partial and the
/// process should exit with the numerical status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: String,
    pub notes: Vec<String>,
    pub warning: Option<String>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn resolve(config: &RunConfig) -> Result<Setup, CliError> {
    let box_rule = config.box_rule.unwrap_or_default();
    let (coupling, defects, half_length) = match config.preset {
        Some(preset) => resolve_preset(preset, config, box_rule)?,
        None => resolve_explicit(config, box_rule)?,
    };
    Ok(Setup {
        mode: config.mode.unwrap_or_default(),
        preset: config.preset,
        coupling,
        defects,
        half_length,
        box_rule,
        method: config.method.unwrap_or_default(),
        config: config.clone(),
    })
}

fn resolve_preset(
    preset: Preset,
    config: &RunConfig,
    box_rule: BoxRuleChoice,
) -> Result<(Coupling, DefectArray, Option<f64>), CliError> {
    let name = preset.name();
    if config.positions.is_some() {
        return Err(usage(format!("preset {name} fixes the positions")));
    }
    if config.phi.is_some_and(|p| p != 0.0) {
        return Err(usage(format!("preset {name} fixes phi = 0")));
    }
    let n = preset.defect_count();
    if preset.is_level_statistics() {
        let alpha = config.alpha.unwrap_or(FIG3_DEFAULT_ALPHA);
        if !FIG3_ALPHAS.contains(&alpha) {
            return Err(usage(format!(
                "preset {name} offers alpha in {FIG3_ALPHAS:?}, got {alpha}"
            )));
        }
        if let Some(HalfLength::Value(_)) = config.half_length {
            return Err(usage(format!("preset {name} derives L from the box rule")));
        }
        let (defects, l) = presets::fig3_geometry(n, box_rule.into())?;
        Ok((Coupling::new(alpha, 0.0)?, defects, Some(l)))
    } else {
        if config.alpha.is_some_and(|a| a != FIG2_ALPHA) {
            return Err(usage(format!("preset {name} fixes alpha = {FIG2_ALPHA}")));
        }
        let defects = presets::fig2_defects(n)?;
        let half_length = match config.half_length {
            Some(HalfLength::Value(l)) => Some(l),
            Some(HalfLength::Rule(_)) => Some(presets::fig3_geometry(n, box_rule.into())?.1),
            None => None,
        };
        Ok((Coupling::new(FIG2_ALPHA, 0.0)?, defects, half_length))
    }
}

fn resolve_explicit(
    config: &RunConfig,
    box_rule: BoxRuleChoice,
) -> Result<(Coupling, DefectArray, Option<f64>), CliError> {
    let coupling = Coupling::new(
        config.alpha.unwrap_or(FIG2_ALPHA),
        config.phi.unwrap_or(0.0),
    )?;
    let (defects, generated) = match &config.positions {
        Some(PositionsSpec::Explicit(xs)) => (DefectArray::new(xs.clone())?, None),
        Some(PositionsSpec::Generated(g)) => {
            let defects = if g.sqrt_primes == 0 {
                DefectArray::empty()
            } else {
                sqrt_prime_positions(g.sqrt_primes)?
            };
            (defects, Some(g.sqrt_primes))
        }
        None => return Err(usage("no defects given: use --positions, --n or --preset")),
    };
    match config.half_length {
        None => Ok((coupling, defects, None)),
        Some(HalfLength::Value(l)) => Ok((coupling, defects, Some(l))),
        Some(HalfLength::Rule(_)) => {
            let n = generated
                .filter(|&n| n > 0)
                .ok_or_else(|| usage("L = fig3_rule needs a generated chain with N >= 1 (--n)"))?;
            let (defects, l) = presets::fig3_geometry(n, box_rule.into())?;
            Ok((coupling, defects, Some(l)))
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let setup = resolve(config)?;
    match setup.mode {
        Mode::Scan => scan_mode(&setup),
        Mode::Spectrum => spectrum_mode(&setup),
        Mode::Spacings => spacings_mode(&setup),
        Mode::Freqs => freqs_mode(&setup),
        Mode::Autocorr => autocorr_mode(&setup),
    }
}

/// Uniform grid: `k_min..=k_max` when `k_min` is given, otherwise
/// `h, 2h, ..., k_max` with `h = k_max / k_points`.
pub fn k_grid(config: &RunConfig) -> Result<Vec<f64>, CliError> {
    let k_max = config.k_max.unwrap_or(DEFAULT_K_MAX);
    let points = config.k_points.unwrap_or(DEFAULT_K_POINTS);
    if !(k_max > 0.0 && k_max.is_finite()) {
        return Err(usage(format!(
            "k_max must be positive and finite, got {k_max}"
        )));
    }
    match config.k_min {
        None => {
            if points == 0 {
                return Err(usage("k_points must be at least 1"));
            }
            let h = k_max / points as f64;
            Ok((1..=points)
                .map(|i| if i == points { k_max } else { i as f64 * h })
                .collect())
        }
        Some(k_min) => {
            if !(k_min > 0.0 && k_min < k_max) {
                return Err(usage(format!(
                    "need 0 < k_min < k_max, got k_min = {k_min}, k_max = {k_max}"
                )));
            }
            if points < 2 {
                return Err(usage("k_points must be at least 2 when k_min is given"));
            }
            let h = (k_max - k_min) / (points - 1) as f64;
            Ok((0..points)
                .map(|i| {
                    if i == points - 1 {
                        k_max
                    } else {
                        k_min + i as f64 * h
                    }
                })
                .collect())
        }
    }
}

/// Amplitudes at one momentum plus, for [`MethodChoice::All`], the largest
/// pairwise disagreement between the three methods.
fn evaluate(setup: &Setup, k: f64) -> Result<(ScatteringAmplitudes, Option<f64>), Error> {
    let (c, d) = (&setup.coupling, &setup.defects);
    match setup.method {
        MethodChoice::Recursion => Ok((Method::Recursion.amplitudes(c, d, k)?, None)),
        MethodChoice::Closedform => Ok((Method::ClosedForm.amplitudes(c, d, k)?, None)),
        MethodChoice::Transfer => Ok((Method::TransferMatrix.amplitudes(c, d, k)?, None)),
        MethodChoice::All => {
            let rec = Method::Recursion.amplitudes(c, d, k)?;
            let closed = Method::ClosedForm.amplitudes(c, d, k)?;
            let transfer = Method::TransferMatrix.amplitudes(c, d, k)?;
            let worst = rec
                .max_difference(&closed)
                .max(rec.max_difference(&transfer))
                .max(closed.max_difference(&transfer));
            Ok((transfer, Some(worst)))
        }
    }
}

/// Grid evaluation in parallel; results come back in grid order.
pub fn scan(setup: &Setup) -> Result<Vec<(ScatteringAmplitudes, Option<f64>)>, CliError> {
    let grid = k_grid(&setup.config)?;
    grid.par_iter()
        .map(|&k| evaluate(setup, k))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(CliError::from)
}

fn scan_mode(setup: &Setup) -> Result<Outcome, CliError> {
    let rows = scan(setup)?;
    let all = setup.method == MethodChoice::All;
    let mut header = vec!["k", "re_T", "im_T", "re_R", "im_R", "abs_T_sq"];
    if all {
        header.push("max_disagreement");
    }
    let mut csv = Csv::new(&header);
    let mut worst: f64 = 0.0;
    for (a, disagreement) in &rows {
        let mut values = vec![a.k, a.t.re, a.t.im, a.r.re, a.r.im, a.transmission()];
        if let Some(d) = disagreement {
            worst = worst.max(*d);
            values.push(*d);
        }
        csv.numbers(&values);
    }
    let mut notes = Vec::new();
    if all {
        notes.push(format!("largest method disagreement: {worst:.3e}"));
    }
    Ok(Outcome {
        document: csv.render(),
        notes,
        warning: None,
    })
}

fn autocorr_mode(setup: &Setup) -> Result<Outcome, CliError> {
    let series: Vec<(f64, f64)> = scan(setup)?
        .iter()
        .map(|(a, _)| (a.k, a.transmission()))
        .collect();
    let max_lag = setup.config.max_lag.unwrap_or(DEFAULT_MAX_LAG);
    let ac = transmission_autocorrelation(&series, max_lag)?;
    let mut csv = Csv::new(&["dk", "C"]);
    for &(dk, c) in &ac.lags {
        csv.numbers(&[dk, c]);
    }
    let width = ac
        .correlation_width
        .map_or_else(|| "beyond max_lag".to_string(), |w| format!("{w:.6e}"));
    Ok(Outcome {
        document: csv.render(),
        notes: vec![
            format!("correlation width (C = 1/2): {width}"),
            format!(
                "local extrema per unit k: {:.6e}",
                local_extrema_density(&series)?
            ),
        ],
        warning: None,
    })
}

pub fn spectral_problem(setup: &Setup) -> Result<SpectralProblem, CliError> {
    let l = setup
        .half_length
        .ok_or_else(|| usage("this mode needs the box half-length: use --L or a fig3 preset"))?;
    Ok(SpectralProblem::new(
        setup.coupling,
        setup.defects.clone(),
        l,
    )?)
}

/// Scan ceiling that guarantees at least `levels` roots for a complete
/// spectrum, since the staircase never falls more than `N + 2` below Weyl.
pub fn k_max_for_levels(problem: &SpectralProblem, levels: usize) -> f64 {
    (levels as f64 + problem.weyl_tolerance() + 1.0) * problem.mean_spacing()
}

/// Runs the root search; an incomplete search yields its partial spectrum
/// together with a warning.
fn levels_for(
    problem: &SpectralProblem,
    config: &RunConfig,
    wanted: usize,
) -> Result<(Spectrum, Option<String>), CliError> {
    let k_max = match (config.k_max, config.levels) {
        (Some(_), Some(_)) => return Err(usage("give either k_max or levels, not both")),
        (Some(k), None) => k,
        (None, _) => k_max_for_levels(problem, wanted),
    };
    match find_spectrum(problem, k_max, DEFAULT_GRID_PER_SPACING) {
        Ok(s) => Ok((s, None)),
        Err(Error::IncompleteSpectrum {
            partial,
            suspect_windows,
        }) => {
            let windows: Vec<String> = suspect_windows
                .iter()
                .map(|(a, b)| format!("[{a:.6}, {b:.6}]"))
                .collect();
            let warning = format!(
                "incomplete spectrum: level count unresolved in k windows {}",
                windows.join(" ")
            );
            Ok((partial, Some(warning)))
        }
        Err(e) => Err(e.into()),
    }
}

fn spectrum_mode(setup: &Setup) -> Result<Outcome, CliError> {
    let problem = spectral_problem(setup)?;
    let wanted = setup.config.levels.unwrap_or(DEFAULT_LEVELS);
    let (spectrum, warning) = levels_for(&problem, &setup.config, wanted)?;
    let mut csv = Csv::new(&["n", "k", "abs_F", "abs_quantization_residual"]);
    if let Some(w) = &warning {
        csv.comment(format!("warning: {w}"));
    }
    let mut undefined = 0;
    for (i, (&k, &f)) in spectrum.roots.iter().zip(&spectrum.residuals).enumerate() {
        // the cross-check column must not sink the levels themselves
        let r = quantization_residual(&problem, k).map_or_else(
            |_| {
                undefined += 1;
                f64::NAN
            },
            |z| z.norm(),
        );
        csv.row(vec![(i + 1).to_string(), num(k), num(f), num(r)]);
    }
    let mut notes = vec![format!(
        "{} levels up to k = {:.6e}",
        spectrum.len(),
        spectrum.k_max
    )];
    if undefined > 0 {
        notes.push(format!(
            "amplitude residual undefined (NaN) at {undefined} levels"
        ));
    }
    Ok(Outcome {
        document: csv.render(),
        notes,
        warning,
    })
}

#[derive(Serialize)]
struct GeometryEcho {
    preset: Option<Preset>,
    alpha: f64,
    phi: f64,
    positions: Vec<f64>,
    #[serde(rename = "L")]
    half_length: Option<f64>,
    box_rule: BoxRuleChoice,
    seed: Option<u64>,
}

impl GeometryEcho {
    fn of(setup: &Setup) -> Self {
        GeometryEcho {
            preset: setup.preset,
            alpha: setup.coupling.alpha(),
            phi: setup.coupling.phi(),
            positions: setup.defects.positions().to_vec(),
            half_length: setup.half_length,
            box_rule: setup.box_rule,
            seed: setup.config.seed,
        }
    }
}

#[derive(Serialize)]
struct HistogramDoc<'a> {
    bin_edges: &'a [f64],
    densities: &'a [f64],
}

#[derive(Serialize)]
struct SpacingsDoc<'a> {
    schema_version: u32,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<&'a str>,
    geometry: GeometryEcho,
    k_max: f64,
    n_roots: usize,
    n_levels_used: usize,
    n_discarded_low: usize,
    mean_spacing: f64,
    ks_wigner: f64,
    ks_poisson: f64,
    histogram: HistogramDoc<'a>,
    spacings: &'a [f64],
}

fn spacings_mode(setup: &Setup) -> Result<Outcome, CliError> {
    let problem = spectral_problem(setup)?;
    let discard = setup.config.discard_low.unwrap_or(DEFAULT_DISCARD_LOW);
    let wanted = setup.config.levels.unwrap_or(DEFAULT_LEVELS) + discard;
    let (spectrum, warning) = levels_for(&problem, &setup.config, wanted)?;
    let sample = unfold(&spectrum, discard).map_err(|e| match &warning {
        Some(w) => CliError::Numerical(format!("{w}; partial spectrum too short: {e}")),
        None => e.into(),
    })?;
    let comparison = compare(
        &sample,
        setup.config.bin_width.unwrap_or(DEFAULT_BIN_WIDTH),
        setup.config.histogram_max.unwrap_or(DEFAULT_HISTOGRAM_MAX),
    )?;
    let doc = SpacingsDoc {
        schema_version: SCHEMA_VERSION,
        mode: "spacings",
        warning: warning.as_deref(),
        geometry: GeometryEcho::of(setup),
        k_max: spectrum.k_max,
        n_roots: spectrum.len(),
        n_levels_used: sample.n_levels_used,
        n_discarded_low: sample.n_discarded_low,
        mean_spacing: sample.mean(),
        ks_wigner: comparison.ks_wigner,
        ks_poisson: comparison.ks_poisson,
        histogram: HistogramDoc {
            bin_edges: &comparison.histogram.bin_edges,
            densities: &comparison.histogram.densities,
        },
        spacings: &sample.spacings,
    };
    Ok(Outcome {
        document: format::json(&doc)?,
        notes: vec![format!(
            "{} spacings: ks_wigner = {:.4}, ks_poisson = {:.4}",
            sample.spacings.len(),
            comparison.ks_wigner,
            comparison.ks_poisson
        )],
        warning,
    })
}

fn freqs_mode(setup: &Setup) -> Result<Outcome, CliError> {
    let terms = enumerate_frequencies(&setup.defects)?;
    let beta = setup.coupling.beta();
    let mut csv = Csv::new(&["sum", "frequency", "coefficient", "multiplicity"]);
    for (label, family) in [("D", &terms.d_terms), ("B", &terms.b_terms)] {
        for t in family {
            csv.row(vec![
                label.to_string(),
                num(t.frequency),
                num(t.coefficient(beta)),
                t.multiplicity().to_string(),
            ]);
        }
    }
    Ok(Outcome {
        document: csv.render(),
        notes: vec![format!(
            "{} D frequencies, {} B frequencies",
            terms.d_terms.len(),
            terms.b_terms.len()
        )],
        warning: None,
    })
}
