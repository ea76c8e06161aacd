//! Pass/fail checks of the closed-form theory against exact numerics.
//!
//! Every residual is relative: eigen-equation residuals are divided by
//! `‖H‖·‖Ψ‖` with `‖H‖` the max-row-sum estimate of the sector operator,
//! and energy differences by `‖H‖`.

use num_complex::Complex;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::chain::{apply_translation, ChainGeometry, SectorBasis, SectorKey};
use crate::eigen::{hermitian_eigenvalues, sector_spectrum, SpectrumMode};
use crate::error::{Error, Result};
use crate::operator::{KymOperator, PairConvention};
use crate::report::{ModelDescriptor, ReportBuilder, VerificationReport};
use crate::scalar::Real;
use crate::states::{gram_matrix, ground_state, localized_state, two_holon_state, two_spinon_state, ExplicitState};
use crate::theory::{
    dispersion, ground_state_energy, half_fermion_shift, hilbert_dimension, pair_energy, pair_energy_at_shift,
    ratio_to_f64, scattering_terms, single_particle_momenta, PairLabel, QuantizationKind, QuantizationRule, Species,
};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Relative singular-value threshold for Gram ranks.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Tolerance on translation eigenphases.
pub const PHASE_TOLERANCE: f64 = 1e-10;

/// Offsets with a spread below this (relative to `‖H‖`) count as constant.
pub const OFFSET_SPREAD: f64 = 1e-10;

/// Sector holding two anyons of `species` on an even chain.
pub fn two_anyon_sector(species: Species, n_sites: usize) -> SectorKey {
    let m = n_sites.saturating_sub(2) / 2;
    match species {
        Species::Spinon => SectorKey::new(0, m),
        Species::Holon => SectorKey::new(2, m),
    }
}

fn require_even(n_sites: usize) -> Result<()> {
    if n_sites < 2 || !n_sites.is_multiple_of(2) {
        return Err(Error::invalid(format!("needs an even chain, got N={n_sites}")));
    }
    Ok(())
}

fn convention_note(convention: PairConvention) -> &'static str {
    match convention {
        PairConvention::UnorderedPairs => "pairs counted once",
        PairConvention::OrderedPairs => "ordered pairs: every element doubled",
    }
}

/// `‖HΨ - EΨ - Σ c_i Φ_i‖ / (‖H‖·‖Ψ‖)`.
fn relative_residual<T: Real>(
    op: &KymOperator<T>,
    psi: &ExplicitState<T>,
    energy: T,
    extra: &[(T, &ExplicitState<T>)],
) -> Result<f64> {
    let mut r = op.apply(&psi.state)?;
    r.axpy(Complex::new(-energy, T::zero()), &psi.state)?;
    for (c, phi) in extra {
        r.axpy(Complex::new(-*c, T::zero()), &phi.state)?;
    }
    let scale = op.norm_estimate(psi.state.sector()) * psi.norm;
    Ok(if scale > T::zero() {
        (r.norm() / scale).to_f64_lossy()
    } else {
        f64::INFINITY
    })
}

/// Explicit `Ψ₀` is an eigenstate with `E₀ = -π²/(4N)`, and `E₀` is the
/// lowest level of its sector.
pub fn verify_ground_state<T: Real>(op: &KymOperator<T>, tol: f64) -> Result<VerificationReport> {
    let n = op.n_sites();
    let psi = ground_state(op.geometry())?;
    let sector = psi.state.sector().clone();
    let mut rep = ReportBuilder::new(ModelDescriptor::new(n).with_sector(sector.key()));
    let e0 = ground_state_energy::<T>(n);
    let note = convention_note(op.convention());

    let residual = relative_residual(op, &psi, e0, &[])?;
    rep.upper(
        "eigen_residual",
        residual,
        tol,
        format!("|H psi - E0 psi| / (|H||psi|), {note}"),
    );

    let hpsi = op.apply(&psi.state)?;
    let rayleigh = (psi.state.inner(&hpsi)?.re / psi.state.norm_sqr()).to_f64_lossy();
    let e0f = e0.to_f64_lossy();
    rep.upper(
        "ground_energy",
        ((rayleigh - e0f) / e0f).abs(),
        tol,
        format!("measured {rayleigh:.15e}, expected {e0f:.15e}, {note}"),
    );

    let mode = if sector.len() <= op.dense_limit() {
        SpectrumMode::Dense { vectors: false }
    } else {
        SpectrumMode::Lowest { k: 1 }
    };
    let spectrum = sector_spectrum(op, &sector, mode)?;
    let lowest = spectrum.values[0].to_f64_lossy();
    rep.upper(
        "lowest_level",
        ((lowest - e0f) / e0f).abs(),
        tol,
        format!("lowest sector eigenvalue {lowest:.15e}"),
    );
    Ok(rep.finish())
}

fn explicit_state<T: Real>(geom: &ChainGeometry<T>, label: &PairLabel) -> Result<ExplicitState<T>> {
    match label.species {
        Species::Spinon => two_spinon_state(geom, label),
        Species::Holon => two_holon_state(geom, label),
    }
}

fn check_name(label: &PairLabel) -> String {
    format!("scattering({},{})", label.m, label.n)
}

/// Residual of `HΨ_mn = E_mn Ψ_mn + Σ_l V_l Ψ_target(l)` for one label.
///
/// `φ_kk` carries a factor of two relative to the symmetric sum it stands
/// for, so a holon target with equal orbitals enters with `V_l/2`.
pub fn scattering_residual<T: Real>(op: &KymOperator<T>, label: &PairLabel) -> Result<(f64, usize)> {
    label.validate()?;
    let geom = op.geometry();
    let psi = explicit_state(geom, label)?;
    let energy = pair_energy::<T>(label)?;
    let terms = scattering_terms::<T>(label)?;
    let targets: Vec<(T, ExplicitState<T>)> = terms
        .iter()
        .map(|t| {
            let multiplicity = if t.target.m == t.target.n {
                T::lit(2.0)
            } else {
                T::one()
            };
            Ok((t.coefficient / multiplicity, explicit_state(geom, &t.target)?))
        })
        .collect::<Result<_>>()?;
    let refs: Vec<(T, &ExplicitState<T>)> = targets.iter().map(|(c, s)| (*c, s)).collect();
    Ok((relative_residual(op, &psi, energy, &refs)?, terms.len()))
}

/// One label. Spinon labels with an orbital above `M` are checked for
/// vanishing instead.
pub fn verify_scattering_identity<T: Real>(
    op: &KymOperator<T>,
    label: &PairLabel,
    tol: f64,
) -> Result<VerificationReport> {
    let n = op.n_sites();
    require_even(n)?;
    if label.n_sites != n {
        return Err(Error::invalid(format!("label {label} does not fit N={n}")));
    }
    let mut rep = ReportBuilder::new(
        ModelDescriptor::new(n)
            .with_sector(two_anyon_sector(label.species, n))
            .with_species(label.species),
    );
    let overcomplete =
        label.species == Species::Spinon && label.m >= 0 && label.n >= 0 && label.m.max(label.n) > label.liquid_size();
    if overcomplete {
        record_vanishing(&mut rep, op.geometry(), label)?;
    } else {
        let (r, terms) = scattering_residual(op, label)?;
        rep.upper(check_name(label), r, tol, format!("{terms} scattering terms"));
    }
    Ok(rep.finish())
}

/// Every valid label of `species`, one check each.
pub fn verify_all_scattering<T: Real>(op: &KymOperator<T>, species: Species, tol: f64) -> Result<VerificationReport> {
    let n = op.n_sites();
    require_even(n)?;
    let labels = PairLabel::all_valid(species, n);
    let results: Vec<Result<(f64, usize)>> = labels.par_iter().map(|l| scattering_residual(op, l)).collect();
    let mut rep = ReportBuilder::new(
        ModelDescriptor::new(n)
            .with_sector(two_anyon_sector(species, n))
            .with_species(species),
    );
    for (label, res) in labels.iter().zip(results) {
        let (r, terms) = res?;
        let kind = if terms == 0 {
            "exact eigenstate"
        } else {
            "scattering terms"
        };
        rep.upper(check_name(label), r, tol, format!("{terms} {kind}"));
    }
    Ok(rep.finish())
}

fn record_vanishing<T: Real>(rep: &mut ReportBuilder, geom: &ChainGeometry<T>, label: &PairLabel) -> Result<()> {
    let s = two_spinon_state(geom, label)?;
    rep.record(
        format!("vanishing({},{})", label.m, label.n),
        s.vanishes(),
        s.relative_norm().to_f64_lossy(),
        crate::states::vanishing_threshold::<T>().to_f64_lossy(),
        "norm relative to the term-magnitude bound",
    );
    Ok(())
}

/// Two-spinon states with an orbital in `M+1..N` cancel identically.
/// Orbitals are periodic mod `N`, so this covers every out-of-range label.
pub fn verify_vanishing<T: Real>(geom: &ChainGeometry<T>) -> Result<VerificationReport> {
    let n = geom.n_sites();
    require_even(n)?;
    let big_m = (n as i64 - 2) / 2;
    let mut rep = ReportBuilder::new(
        ModelDescriptor::new(n)
            .with_sector(two_anyon_sector(Species::Spinon, n))
            .with_species(Species::Spinon),
    );
    for m in 0..n as i64 {
        for nn in 0..n as i64 {
            if m > big_m || nn > big_m {
                record_vanishing(&mut rep, geom, &PairLabel::spinon(m, nn, n))?;
            }
        }
    }
    Ok(rep.finish())
}

/// Exact eigenvalues of a two-anyon sector.
#[derive(Clone, Debug)]
pub struct SectorLevels {
    pub n_sites: usize,
    pub species: Species,
    /// Ascending.
    pub values: Vec<f64>,
    pub norm: f64,
}

pub fn sector_levels<T: Real>(op: &KymOperator<T>, species: Species) -> Result<SectorLevels> {
    let n = op.n_sites();
    require_even(n)?;
    let sector = SectorBasis::enumerate(n, two_anyon_sector(species, n))?;
    let spectrum = sector_spectrum(op, &sector, SpectrumMode::Dense { vectors: false })?;
    Ok(SectorLevels {
        n_sites: n,
        species,
        values: spectrum.values.iter().map(|v| v.to_f64_lossy()).collect(),
        norm: spectrum.norm_estimate.to_f64_lossy(),
    })
}

/// A predicted level paired with its nearest unused exact level.
#[derive(Clone, Debug)]
pub struct LevelMatch {
    pub label: PairLabel,
    pub predicted: f64,
    pub exact: f64,
    pub exact_index: usize,
}

/// Greedy nearest assignment, predicted levels taken in ascending order and
/// each exact level used at most once.
pub fn assign_levels(levels: &SectorLevels) -> Result<Vec<LevelMatch>> {
    let mut predicted: Vec<(PairLabel, f64)> = PairLabel::all_valid(levels.species, levels.n_sites)
        .into_iter()
        .map(|l| Ok((l, pair_energy::<f64>(&l)?)))
        .collect::<Result<_>>()?;
    predicted.sort_by(|a, b| a.1.total_cmp(&b.1));
    if predicted.len() > levels.values.len() {
        return Err(Error::invalid(format!(
            "{} predicted levels exceed the {} exact ones",
            predicted.len(),
            levels.values.len()
        )));
    }
    let mut used = vec![false; levels.values.len()];
    let mut out = Vec::with_capacity(predicted.len());
    for (label, e) in predicted {
        let (idx, _) = levels
            .values
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, v)| (i, (v - e).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("more exact levels than predictions");
        used[idx] = true;
        out.push(LevelMatch {
            label,
            predicted: e,
            exact: levels.values[idx],
            exact_index: idx,
        });
    }
    Ok(out)
}

/// Every predicted pair energy appears in the exact spectrum within
/// `tol·‖H‖`, with a constant-offset diagnostic.
pub fn match_spectrum(levels: &SectorLevels, tol: f64) -> Result<VerificationReport> {
    let matches = assign_levels(levels)?;
    let scale = levels.norm;
    let mut rep = ReportBuilder::new(
        ModelDescriptor::new(levels.n_sites)
            .with_sector(two_anyon_sector(levels.species, levels.n_sites))
            .with_species(levels.species),
    );
    let offsets: Vec<f64> = matches.iter().map(|m| m.exact - m.predicted).collect();
    let worst = offsets.iter().fold(0.0f64, |a, d| a.max(d.abs())) / scale;
    let matched = offsets.iter().filter(|d| d.abs() <= tol * scale).count();
    let misses: Vec<String> = matches
        .iter()
        .filter(|m| (m.exact - m.predicted).abs() > tol * scale)
        .map(|m| {
            format!(
                "({},{}): predicted {:.12} nearest {:.12}",
                m.label.m, m.label.n, m.predicted, m.exact
            )
        })
        .collect();
    let details = if misses.is_empty() {
        format!("{matched} of {} levels matched", matches.len())
    } else {
        format!(
            "{matched} of {} levels matched; misses {}",
            matches.len(),
            misses.join("; ")
        )
    };
    rep.record("levels_matched", matched == matches.len(), worst, tol, details);

    let count = offsets.len() as f64;
    let mean = offsets.iter().sum::<f64>() / count;
    let std = (offsets.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / count).sqrt();
    let constant = std / scale < OFFSET_SPREAD && (mean / scale).abs() > tol;
    rep.upper(
        "offset_spread",
        std / scale,
        OFFSET_SPREAD,
        format!("std of exact - predicted over {} levels", offsets.len()),
    );
    rep.record(
        "offset_mean",
        (mean / scale).abs() <= tol,
        (mean / scale).abs(),
        tol,
        if constant {
            format!("convention offset c={mean:.6e}")
        } else {
            format!("mean offset {mean:.3e}")
        },
    );
    Ok(rep.finish())
}

/// Least-squares fit of the statistical shift.
#[derive(Clone, Debug)]
pub struct ShiftFit {
    pub shift: f64,
    pub residual_at_fit: f64,
    pub residual_at_zero: f64,
    pub residual_at_quarter: f64,
    /// Local minima of the residual on the scan grid.
    pub scan_minima: usize,
}

const SCAN_POINTS: usize = 1001;

fn shift_objective(labels: &[PairLabel], energies: &[f64], s: f64) -> f64 {
    labels
        .iter()
        .zip(energies)
        .map(|(l, &e)| {
            let d = e - pair_energy_at_shift::<f64>(l, s).expect("validated labels");
            d * d
        })
        .sum()
}

/// Minimise `Σ (E_i - E_i(s))²` over `s ∈ [0, 1/2]`: grid scan, then
/// golden-section search around the best grid point.
pub fn fit_shift(labels: &[PairLabel], energies: &[f64]) -> Result<ShiftFit> {
    if labels.is_empty() || labels.len() != energies.len() {
        return Err(Error::invalid(format!(
            "need matching non-empty label and energy lists, got {} and {}",
            labels.len(),
            energies.len()
        )));
    }
    for l in labels {
        l.validate()?;
    }
    let f = |s: f64| shift_objective(labels, energies, s);
    let h = 0.5 / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| f(i as f64 * h)).collect();
    let scan_minima = (0..SCAN_POINTS)
        .filter(|&i| {
            let left = i == 0 || grid[i - 1] > grid[i];
            let right = i + 1 == SCAN_POINTS || grid[i + 1] > grid[i];
            left && right
        })
        .count();
    let best = (0..SCAN_POINTS)
        .min_by(|&a, &b| grid[a].total_cmp(&grid[b]))
        .expect("non-empty grid");

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = ((best as f64 - 1.0) * h, (best as f64 + 1.0) * h);
    a = a.max(0.0);
    b = b.min(0.5);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-13 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let shift = 0.5 * (a + b);
    Ok(ShiftFit {
        shift,
        residual_at_fit: f(shift),
        residual_at_zero: f(0.0),
        residual_at_quarter: f(0.25),
        scan_minima,
    })
}

fn record_fit(rep: &mut ReportBuilder, fit: &ShiftFit) {
    rep.upper(
        "fitted_shift",
        (fit.shift - 0.25).abs(),
        1e-6,
        format!("s = {:.9}, residual {:.3e}", fit.shift, fit.residual_at_fit),
    );
    rep.upper(
        "discrimination",
        fit.residual_at_quarter / fit.residual_at_zero,
        1e-3,
        format!(
            "residual at s=1/4 {:.3e}, at s=0 {:.3e}",
            fit.residual_at_quarter, fit.residual_at_zero
        ),
    );
    rep.record(
        "unimodal",
        fit.scan_minima == 1,
        fit.scan_minima as f64,
        1.0,
        format!("local minima on a {SCAN_POINTS}-point grid"),
    );
}

/// Fit `s` to the exact levels matched at `s = 1/4`.
pub fn fit_statistical_shift(levels: &SectorLevels) -> Result<(ShiftFit, VerificationReport)> {
    let matches = assign_levels(levels)?;
    let labels: Vec<PairLabel> = matches.iter().map(|m| m.label).collect();
    let energies: Vec<f64> = matches.iter().map(|m| m.exact).collect();
    let fit = fit_shift(&labels, &energies)?;
    let mut rep = ReportBuilder::new(
        ModelDescriptor::new(levels.n_sites)
            .with_sector(two_anyon_sector(levels.species, levels.n_sites))
            .with_species(levels.species),
    );
    record_fit(&mut rep, &fit);
    Ok((fit, rep.finish()))
}

/// Fit against the theory's own `s = 1/4` energies.
pub fn fit_shift_self_test(species: Species, n_sites: usize) -> Result<(ShiftFit, VerificationReport)> {
    require_even(n_sites)?;
    let labels = PairLabel::all_valid(species, n_sites);
    let energies: Vec<f64> = labels.iter().map(pair_energy::<f64>).collect::<Result<_>>()?;
    let fit = fit_shift(&labels, &energies)?;
    let mut rep = ReportBuilder::new(ModelDescriptor::new(n_sites).with_species(species));
    record_fit(&mut rep, &fit);
    Ok((fit, rep.finish()))
}

fn wrap_angle(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    x - tau * (x / tau).round()
}

/// Momentum spacings at `s = 1/4` obey the half-fermion rule exactly; with
/// `translation`, the explicit states carry crystal momenta that track the
/// total theory momentum up to one constant.
pub fn verify_momentum_spacing<T: Real>(
    geom: &ChainGeometry<T>,
    species: Species,
    translation: bool,
) -> Result<VerificationReport> {
    let n = geom.n_sites();
    require_even(n)?;
    let labels = PairLabel::all_valid(species, n);
    let rule = QuantizationRule::new(
        Ratio::new(1, 2),
        QuantizationKind::MomentumSpacing1D { length: n as f64 },
    )?;
    let mut rep = ReportBuilder::new(
        ModelDescriptor::new(n)
            .with_sector(two_anyon_sector(species, n))
            .with_species(species),
    );
    let mut bad = Vec::new();
    let mut momenta = Vec::with_capacity(labels.len());
    for l in &labels {
        let k = single_particle_momenta::<f64>(l, half_fermion_shift())?;
        let spacing = k.spacing_units();
        if !rule.allows(spacing) {
            bad.push(format!("({},{}): {spacing}", l.m, l.n));
        }
        momenta.push(k.first + k.second);
    }
    rep.record(
        "spacing_rule",
        bad.is_empty(),
        bad.len() as f64,
        0.0,
        if bad.is_empty() {
            format!("{} labels, spacing N/2pi in 1/2 + Z>=0", labels.len())
        } else {
            format!("violations {}", bad.join("; "))
        },
    );

    if translation {
        // Labels whose state cancels on a short chain carry no phase.
        let phases: Vec<Result<Option<(f64, f64)>>> = labels
            .par_iter()
            .map(|l| {
                let s = explicit_state(geom, l)?;
                if s.vanishes() {
                    return Ok(None);
                }
                let t = apply_translation(&s.state);
                let lambda = s.state.inner(&t)? / s.state.norm_sqr();
                let mut dev = t;
                dev.axpy(-lambda, &s.state)?;
                let k = -lambda.arg().to_f64_lossy();
                Ok(Some(((dev.norm() / s.norm).to_f64_lossy(), k)))
            })
            .collect();
        let mut worst_eigen = 0.0f64;
        let mut pairs = Vec::with_capacity(labels.len());
        for (p, &total) in phases.into_iter().zip(&momenta) {
            if let Some((dev, k)) = p? {
                worst_eigen = worst_eigen.max(dev);
                pairs.push((k, total));
            }
        }
        let skipped = labels.len() - pairs.len();
        rep.upper(
            "translation_eigenstate",
            worst_eigen,
            PHASE_TOLERANCE,
            format!(
                "max |T psi - lambda psi| / |psi| over {} states, {skipped} vanishing",
                pairs.len()
            ),
        );
        let reference = pairs.first().map_or(0.0, |(k, p)| k - p);
        let worst = pairs
            .iter()
            .map(|(k, p)| wrap_angle(k - p - reference).abs())
            .fold(0.0, f64::max);
        rep.upper(
            "momentum_consistency",
            worst,
            PHASE_TOLERANCE,
            format!("K - (k_m + k_n) constant mod 2pi, offset {reference:.12}"),
        );
    }
    Ok(rep.finish())
}

/// Spin-1/2 boson counting reproduces `2^N`, and each pair of added
/// spinons removes one orbital.
pub fn verify_state_counting(n_sites: u64) -> Result<VerificationReport> {
    if n_sites == 0 {
        return Err(Error::invalid("counting needs N >= 1"));
    }
    let counts = hilbert_dimension(n_sites);
    let mut rep = ReportBuilder::new(ModelDescriptor::new(n_sites as usize));
    let equal = counts.matches_two_to_the_n();
    rep.record(
        "total_states",
        equal,
        if equal { 0.0 } else { 1.0 },
        0.0,
        format!("total {} vs 2^{n_sites}", counts.total),
    );
    let steps = counts.per_spinon_number.windows(2);
    let violations = steps
        .filter(|w| w[0].orbitals != w[1].orbitals + 1 || w[1].n_spinons != w[0].n_spinons + 2)
        .count();
    let orbitals: Vec<String> = counts
        .per_spinon_number
        .iter()
        .map(|c| format!("{}:{}", c.n_spinons, c.orbitals))
        .collect();
    rep.record(
        "orbital_decrement",
        violations == 0,
        violations as f64,
        0.0,
        format!("orbitals per spinon number {}", orbitals.join(" ")),
    );
    Ok(rep.finish())
}

/// Numerical rank of a Hermitian Gram matrix.
pub fn gram_rank<T: Real>(gram: &[Vec<Complex<T>>]) -> Result<usize> {
    let ev = hermitian_eigenvalues(gram)?;
    let top = ev.iter().fold(T::zero(), |a, &b| a.max(b.abs()));
    Ok(ev.iter().filter(|&&x| x > T::lit(RANK_THRESHOLD) * top).count())
}

/// Localised spinons span `M+1 < N` states; localised holons are mutually
/// orthogonal.
pub fn verify_gram_structure<T: Real>(geom: &ChainGeometry<T>) -> Result<VerificationReport> {
    let n = geom.n_sites();
    if n.is_multiple_of(2) || n < 3 {
        return Err(Error::invalid(format!(
            "Gram structure needs an odd chain N >= 3, got {n}"
        )));
    }
    let mut rep = ReportBuilder::new(ModelDescriptor::new(n));
    let expected = (n - 1) / 2 + 1;

    let spinons: Vec<_> = (1..=n)
        .map(|a| Ok(localized_state(geom, Species::Spinon, a)?.state))
        .collect::<Result<_>>()?;
    let rank = gram_rank(&gram_matrix(&spinons)?)?;
    rep.record(
        "spinon_rank",
        rank == expected && rank < n,
        rank as f64,
        expected as f64,
        format!("{n} localised states span {rank}, expected M+1 = {expected}"),
    );

    let holons: Vec<_> = (1..=n)
        .map(|a| Ok(localized_state(geom, Species::Holon, a)?.state))
        .collect::<Result<_>>()?;
    let g = gram_matrix(&holons)?;
    let mut off = T::zero();
    let mut min_diag = T::infinity();
    for (i, row) in g.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i == j {
                min_diag = min_diag.min(x.re);
            } else {
                off = off.max(x.norm());
            }
        }
    }
    rep.record(
        "holon_orthogonal",
        off == T::zero() && min_diag > T::zero(),
        off.to_f64_lossy(),
        0.0,
        format!(
            "largest off-diagonal overlap, smallest norm^2 {}",
            min_diag.to_f64_lossy()
        ),
    );
    Ok(rep.finish())
}

/// Group velocities: analytic derivative, monotonicity over each band and
/// the ordering `v(k_m) > v(k_n)` for every label of every even `N` up to
/// `max_label_n`.
pub fn verify_dispersion(n_sites: usize, max_label_n: usize) -> Result<VerificationReport> {
    if n_sites == 0 {
        return Err(Error::invalid("dispersion needs N >= 1"));
    }
    let pi = std::f64::consts::PI;
    let mut rep = ReportBuilder::new(ModelDescriptor::new(n_sites));
    let fd_step = 1e-5;
    let grid = 1000;
    for species in [Species::Spinon, Species::Holon] {
        let (lo, hi) = match species {
            Species::Spinon => (0.0, pi),
            Species::Holon => (-pi - pi / (2.0 * n_sites as f64), pi / (2.0 * n_sites as f64)),
        };
        let points: Vec<f64> = (1..grid).map(|i| lo + (hi - lo) * i as f64 / grid as f64).collect();
        let fd_err = points
            .iter()
            .map(|&k| {
                let p = dispersion(species, k, n_sites);
                let up = dispersion(species, k + fd_step, n_sites).energy;
                let down = dispersion(species, k - fd_step, n_sites).energy;
                (p.velocity - (up - down) / (2.0 * fd_step)).abs()
            })
            .fold(0.0, f64::max);
        rep.upper(
            format!("{species}_velocity_derivative"),
            fd_err,
            1e-8,
            format!("centred difference, step {fd_step:e}"),
        );
        let v: Vec<f64> = points
            .iter()
            .map(|&k| dispersion(species, k, n_sites).velocity)
            .collect();
        let wrong = v
            .windows(2)
            .filter(|w| match species {
                Species::Spinon => w[1] >= w[0],
                Species::Holon => w[1] <= w[0],
            })
            .count();
        let direction = match species {
            Species::Spinon => "decreasing",
            Species::Holon => "increasing",
        };
        rep.record(
            format!("{species}_velocity_monotone"),
            wrong == 0,
            wrong as f64,
            0.0,
            format!("strictly {direction} on {} interior points", points.len()),
        );

        let mut labels = 0usize;
        let mut bad = Vec::new();
        for n in (2..=max_label_n).step_by(2) {
            for l in PairLabel::all_valid(species, n) {
                let k = single_particle_momenta::<f64>(&l, half_fermion_shift())?;
                let vm = dispersion(species, k.first, n).velocity;
                let vn = dispersion(species, k.second, n).velocity;
                labels += 1;
                if vm <= vn {
                    bad.push(format!("{l}"));
                }
            }
        }
        rep.record(
            format!("{species}_crossing_direction"),
            bad.is_empty(),
            bad.len() as f64,
            0.0,
            if bad.is_empty() {
                format!("v(k_m) > v(k_n) for {labels} labels, N <= {max_label_n}")
            } else {
                format!("violations {}", bad.join("; "))
            },
        );
    }
    Ok(rep.finish())
}

/// Spacing of a label's momenta in units of `2π/N`, as a float.
pub fn spacing_units(label: &PairLabel) -> Result<f64> {
    let k = single_particle_momenta::<f64>(label, half_fermion_shift())?;
    Ok(ratio_to_f64(k.spacing_units()))
}
