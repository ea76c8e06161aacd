use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;

use anyon1d::chain::{ChainGeometry, SectorBasis, SectorKey};
use anyon1d::eigen::{
    sector_spectrum_with, LanczosOptions, SpectrumMode, DENSE_RESIDUAL_BOUND, ITERATIVE_RESIDUAL_BOUND,
};
use anyon1d::operator::{operator_self_checks, KymOperator};
use anyon1d::theory::{hilbert_dimension, QuantizationKind, QuantizationRule, Quantum};
use anyon1d::verify::{
    fit_statistical_shift, match_spectrum, sector_levels, two_anyon_sector, verify_all_scattering, verify_dispersion,
    verify_gram_structure, verify_ground_state, verify_momentum_spacing, verify_state_counting, verify_vanishing,
};
use anyon1d::{ModelDescriptor, ReportBuilder, Species, VerificationReport};

use crate::cli::{Cli, Command, Mode, VerifyTarget};
use crate::output::{ReportDocument, SpectrumRow};

/// Random-vector trials per sector in operator self-checks.
const SELF_CHECK_TRIALS: usize = 50;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(anyon1d::Error),
    Io(std::io::Error),
    Csv(csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Csv(_) => 2,
            CliError::Library(anyon1d::Error::InvalidArgument(_)) => 2,
            CliError::Library(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Csv(e) => write!(f, "csv error: {e}"),
        }
    }
}

impl From<anyon1d::Error> for CliError {
    fn from(e: anyon1d::Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

pub struct Outcome {
    pub doc: ReportDocument,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
    pub spectrum: Option<Vec<SpectrumRow>>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn validate(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    if !(g.tol.is_finite() && g.tol > 0.0) {
        return Err(usage(format!("--tol must be positive and finite, got {}", g.tol)));
    }
    if g.dense_limit == 0 {
        return Err(usage("--dense-limit must be at least 1"));
    }
    if g.threads == Some(0) {
        return Err(usage("--threads must be at least 1"));
    }
    Ok(())
}

fn operator(cli: &Cli, n: usize) -> Result<KymOperator<f64>, CliError> {
    Ok(KymOperator::new(n)?.with_dense_limit(cli.global.dense_limit))
}

fn require_even(n: usize) -> Result<(), CliError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(usage(format!("this command needs an even N >= 2, got {n}")));
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    validate(cli)?;
    let mut doc = ReportDocument::new(cli.command_name(), cli.run_config());
    let mut summary = Vec::new();
    let mut spectrum = None;
    let tol = cli.global.tol;

    match &cli.command {
        Command::Spectrum {
            n,
            species,
            holes,
            n_up,
            mode,
            k,
        } => {
            let (report, rows, lines) =
                spectrum_command(cli, *n, species.map(Species::from), *holes, *n_up, *mode, *k)?;
            doc.absorb(&format!("N={n}"), &report);
            summary.extend(lines);
            spectrum = Some(rows);
        }
        Command::Verify { target } => match target {
            VerifyTarget::Ground { n } => {
                let op = operator(cli, *n)?;
                let report = verify_ground_state(&op, tol)?;
                let key = report.model.sector.expect("ground report names its sector");
                let sector = SectorBasis::enumerate(*n, key)?;
                let symmetries = operator_self_checks(&op, &sector, SELF_CHECK_TRIALS, cli.global.seed)?;
                doc.absorb(&format!("N={n}"), &report);
                doc.absorb(&format!("N={n}"), &symmetries);
                if let Some(c) = report.check("ground_energy") {
                    summary.push(c.details.clone());
                }
            }
            VerifyTarget::Spinon { n, vanishing, spectrum } => {
                require_even(*n)?;
                let op = operator(cli, *n)?;
                doc.absorb(&format!("N={n}"), &verify_all_scattering(&op, Species::Spinon, tol)?);
                if *vanishing {
                    doc.absorb(&format!("N={n}"), &verify_vanishing(op.geometry())?);
                }
                if *spectrum {
                    doc.absorb(
                        &format!("N={n}"),
                        &match_spectrum(&sector_levels(&op, Species::Spinon)?, tol)?,
                    );
                }
            }
            VerifyTarget::Holon { n, spectrum } => {
                require_even(*n)?;
                let op = operator(cli, *n)?;
                doc.absorb(&format!("N={n}"), &verify_all_scattering(&op, Species::Holon, tol)?);
                if *spectrum {
                    doc.absorb(
                        &format!("N={n}"),
                        &match_spectrum(&sector_levels(&op, Species::Holon)?, tol)?,
                    );
                }
            }
        },
        Command::FitShift { n, species } => {
            require_even(*n)?;
            let op = operator(cli, *n)?;
            let (fit, report) = fit_statistical_shift(&sector_levels(&op, (*species).into())?)?;
            doc.absorb(&format!("N={n}"), &report);
            summary.push(format!("fitted shift s = {:.9}", fit.shift));
            summary.push(format!(
                "residual at s=0: {:.3e}, at s=1/4: {:.3e}",
                fit.residual_at_zero, fit.residual_at_quarter
            ));
        }
        Command::Spacing {
            n,
            species,
            no_translation,
        } => {
            require_even(*n)?;
            let g = ChainGeometry::<f64>::new(*n)?;
            doc.absorb(
                &format!("N={n}"),
                &verify_momentum_spacing(&g, (*species).into(), !no_translation)?,
            );
        }
        Command::Count { n } => {
            let report = verify_state_counting(*n)?;
            let counts = hilbert_dimension(*n);
            summary.push(counts.total.to_string());
            for c in &counts.per_spinon_number {
                summary.push(format!(
                    "  N_sp={:<3} orbitals={:<3} states={}",
                    c.n_spinons, c.orbitals, c.states
                ));
            }
            doc.absorb(&format!("N={n}"), &report);
        }
        Command::Gram { n } => {
            let g = ChainGeometry::<f64>::new(*n)?;
            doc.absorb(&format!("N={n}"), &verify_gram_structure(&g)?);
        }
        Command::Quantize {
            theta,
            theta_over_pi,
            length,
            plane,
            k,
        } => {
            let (report, lines) = quantize_command(*theta, theta_over_pi.as_deref(), *length, *plane, *k)?;
            doc.absorb("quantize", &report);
            summary.extend(lines);
        }
        Command::Suite { max_n } => {
            for (scope, report) in suite(cli, *max_n)? {
                doc.absorb(&scope, &report);
            }
        }
    }
    Ok(Outcome { doc, summary, spectrum })
}

#[allow(clippy::type_complexity)]
fn spectrum_command(
    cli: &Cli,
    n: usize,
    species: Option<Species>,
    holes: Option<usize>,
    n_up: Option<usize>,
    mode: Mode,
    k: usize,
) -> Result<(VerificationReport, Vec<SpectrumRow>, Vec<String>), CliError> {
    let key = match species {
        Some(s) => {
            require_even(n)?;
            two_anyon_sector(s, n)
        }
        None => {
            let q = holes.unwrap_or(0);
            if q > n {
                return Err(usage(format!("--holes {q} exceeds N={n}")));
            }
            SectorKey::new(q, n_up.unwrap_or((n - q) / 2))
        }
    };
    key.validate(n)?;
    let op = operator(cli, n)?;
    let sector: Arc<SectorBasis> = SectorBasis::enumerate(n, key)?;
    let (spectrum_mode, bound) = match mode {
        Mode::Dense => (SpectrumMode::Dense { vectors: true }, DENSE_RESIDUAL_BOUND),
        Mode::Iterative => (SpectrumMode::Lowest { k }, ITERATIVE_RESIDUAL_BOUND),
    };
    let lanczos = LanczosOptions {
        seed: cli.global.seed,
        ..LanczosOptions::default()
    };
    let spectrum = sector_spectrum_with(&op, &sector, spectrum_mode, &lanczos)?;

    let mut rep = ReportBuilder::new(ModelDescriptor::new(n).with_sector(key));
    let worst = spectrum.residuals.iter().copied().fold(0.0, f64::max);
    rep.upper(
        "eigen_residual",
        worst,
        bound,
        format!("max |Hv - lambda v| / |H| over {} levels", spectrum.values.len()),
    );
    let unit = TAU / n as f64;
    let resolved: Vec<f64> = spectrum.momenta.iter().flatten().copied().collect();
    let lattice = resolved
        .iter()
        .map(|k| (k / unit - (k / unit).round()).abs())
        .fold(0.0, f64::max);
    rep.upper(
        "momentum_lattice",
        lattice,
        1e-8,
        format!(
            "{} of {} momenta resolved, deviation from 2pi/N multiples",
            resolved.len(),
            spectrum.momenta.len()
        ),
    );

    let rows: Vec<SpectrumRow> = spectrum
        .values
        .iter()
        .enumerate()
        .map(|(i, &e)| SpectrumRow {
            sector_q: key.n_holes,
            sector_mup: key.n_up,
            index: i,
            energy: e,
            momentum_k: spectrum.momenta.get(i).copied().flatten(),
        })
        .collect();
    let mut lines = vec![format!(
        "sector {key} of N={n}: dimension {}, {} levels",
        sector.len(),
        rows.len()
    )];
    for r in rows.iter().take(10) {
        let k = r.momentum_k.map_or_else(|| "-".to_string(), |k| format!("{:+.6}", k));
        lines.push(format!("  {:>5}  {:+.12}  K={k}", r.index, r.energy));
    }
    if rows.len() > 10 {
        lines.push(format!("  ... {} more", rows.len() - 10));
    }
    Ok((rep.finish(), rows, lines))
}

fn quantize_command(
    theta: Option<f64>,
    theta_over_pi: Option<&str>,
    length: Option<f64>,
    plane: bool,
    k: usize,
) -> Result<(VerificationReport, Vec<String>), CliError> {
    if k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    let kind = if plane {
        QuantizationKind::RelativeAngularMomentum2D
    } else {
        let length = length.ok_or_else(|| usage("quantize needs --length or --plane"))?;
        QuantizationKind::MomentumSpacing1D { length }
    };
    match (theta, theta_over_pi) {
        (Some(t), None) => quantize_with(QuantizationRule::from_radians(t, kind)?, k),
        (None, Some(text)) => {
            let r: Ratio<i64> = text
                .trim()
                .parse()
                .map_err(|_| usage(format!("--theta-over-pi expects a fraction like 1/2, got {text:?}")))?;
            quantize_with(QuantizationRule::new(r, kind)?, k)
        }
        _ => Err(usage("quantize needs exactly one of --theta or --theta-over-pi")),
    }
}

fn quantize_with<V: Quantum>(
    rule: QuantizationRule<V>,
    k: usize,
) -> Result<(VerificationReport, Vec<String>), CliError> {
    let values = rule.first_allowed(k);
    let bad = values.iter().filter(|v| !rule.allows(**v)).count();
    let shown: Vec<String> = values.iter().map(|v| format!("{:.6}", v.to_f64())).collect();
    let physical: Vec<String> = values.iter().map(|v| format!("{:.6}", rule.physical(*v))).collect();
    let (dimensionless, unit) = match rule.kind() {
        QuantizationKind::RelativeAngularMomentum2D => ("l_z/hbar", "l_z"),
        QuantizationKind::MomentumSpacing1D { .. } => ("dp*L/(2*pi*hbar)", "dp"),
    };
    let mut rep = ReportBuilder::new(ModelDescriptor::new(0));
    rep.record(
        "allowed_values",
        bad == 0,
        bad as f64,
        0.0,
        format!("{dimensionless}: {}", shown.join(", ")),
    );
    let lines = vec![
        format!("theta/pi = {}", rule.theta_over_pi()),
        format!("allowed {dimensionless}: {}", shown.join(", ")),
        format!("allowed {unit}: {}", physical.join(", ")),
    ];
    Ok((rep.finish(), lines))
}

type Job<'a> = Box<dyn Fn() -> anyon1d::Result<VerificationReport> + Send + Sync + 'a>;

fn suite(cli: &Cli, max_n: usize) -> Result<Vec<(String, VerificationReport)>, CliError> {
    if !(2..=16).contains(&max_n) {
        return Err(usage(format!("--max-n must be in 2..=16, got {max_n}")));
    }
    let tol = cli.global.tol;
    let seed = cli.global.seed;
    let dense_limit = cli.global.dense_limit;
    let op = move |n: usize| KymOperator::<f64>::new(n).map(|o| o.with_dense_limit(dense_limit));
    let even: Vec<usize> = (2..=max_n).step_by(2).collect();
    let mut jobs: Vec<(String, Job)> = Vec::new();

    for &n in &even {
        jobs.push((
            format!("ground/N={n}"),
            Box::new(move || verify_ground_state(&op(n)?, tol)),
        ));
    }
    for &n in even.iter().filter(|&&n| n >= 4) {
        for species in [Species::Spinon, Species::Holon] {
            jobs.push((
                format!("{species}/N={n}"),
                Box::new(move || {
                    let o = op(n)?;
                    let mut b = ReportBuilder::new(ModelDescriptor::new(n).with_species(species));
                    b.merge("", verify_all_scattering(&o, species, tol)?);
                    let levels = sector_levels(&o, species)?;
                    b.merge("spectrum/", match_spectrum(&levels, tol)?);
                    if n >= 8 {
                        b.merge("shift/", fit_statistical_shift(&levels)?.1);
                    }
                    Ok(b.finish())
                }),
            ));
        }
    }
    for &n in even.iter().filter(|&&n| n == 6 || n == 8) {
        jobs.push((
            format!("vanishing/N={n}"),
            Box::new(move || verify_vanishing(&ChainGeometry::<f64>::new(n)?)),
        ));
    }
    for &n in &even {
        for species in [Species::Spinon, Species::Holon] {
            jobs.push((
                format!("spacing/{species}/N={n}"),
                Box::new(move || verify_momentum_spacing(&ChainGeometry::<f64>::new(n)?, species, true)),
            ));
        }
    }
    jobs.push((
        "counting".into(),
        Box::new(|| {
            let mut b = ReportBuilder::new(ModelDescriptor::new(24));
            for n in 1..=24u64 {
                b.merge(&format!("N={n}/"), verify_state_counting(n)?);
            }
            Ok(b.finish())
        }),
    ));
    for n in (3..=max_n.min(9)).step_by(2) {
        jobs.push((
            format!("gram/N={n}"),
            Box::new(move || verify_gram_structure(&ChainGeometry::<f64>::new(n)?)),
        ));
    }
    for n in 2..=max_n {
        jobs.push((
            format!("symmetries/N={n}"),
            Box::new(move || {
                let o = op(n)?;
                let mut b = ReportBuilder::new(ModelDescriptor::new(n));
                for q in 0..=n {
                    for up in 0..=n - q {
                        let s = SectorBasis::enumerate(n, SectorKey::new(q, up))?;
                        b.merge(
                            &format!("Q={q},Mup={up}/"),
                            operator_self_checks(&o, &s, SELF_CHECK_TRIALS, seed)?,
                        );
                    }
                }
                Ok(b.finish())
            }),
        ));
    }
    jobs.push(("dispersion".into(), Box::new(|| verify_dispersion(32, 32))));

    let results: Vec<anyon1d::Result<VerificationReport>> = jobs.par_iter().map(|(_, job)| job()).collect();
    jobs.iter()
        .zip(results)
        .map(|((scope, _), r)| Ok((scope.clone(), r?)))
        .collect()
}
