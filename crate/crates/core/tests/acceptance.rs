//! End-to-end acceptance run: one line per criterion, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use anyon1d::chain::{ChainGeometry, SectorBasis, SectorKey};
use anyon1d::operator::{operator_self_checks, KymOperator};
use anyon1d::theory::{PairLabel, Species};
use anyon1d::verify::{
    assign_levels, fit_statistical_shift, match_spectrum, sector_levels, verify_all_scattering, verify_dispersion,
    verify_gram_structure, verify_ground_state, verify_momentum_spacing, verify_state_counting, verify_vanishing,
    SectorLevels,
};
use anyon1d::{Result, VerificationReport};

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    pass: bool,
    summary: String,
}

fn worst_value(reports: &[VerificationReport]) -> f64 {
    reports
        .iter()
        .flat_map(|r| r.checks.iter())
        .map(|c| c.value)
        .fold(0.0, f64::max)
}

fn failures(reports: &[VerificationReport]) -> Vec<String> {
    reports
        .iter()
        .flat_map(|r| {
            r.failures()
                .map(move |c| format!("N={} {}={:.3e}", r.model.n_sites, c.name, c.value))
        })
        .collect()
}

fn outcome(reports: &[VerificationReport], extra: bool, summary: String) -> Outcome {
    let fails = failures(reports);
    let pass = fails.is_empty() && extra;
    let summary = if fails.is_empty() {
        summary
    } else {
        format!("{summary}; failing: {}", fails.join(", "))
    };
    Outcome { pass, summary }
}

fn op(n: usize) -> Result<KymOperator<f64>> {
    KymOperator::new(n)
}

fn levels(species: Species, n: usize) -> Result<&'static SectorLevels> {
    static SPINON: [OnceLock<SectorLevels>; 13] = [const { OnceLock::new() }; 13];
    static HOLON: [OnceLock<SectorLevels>; 13] = [const { OnceLock::new() }; 13];
    let cell = match species {
        Species::Spinon => &SPINON[n],
        Species::Holon => &HOLON[n],
    };
    if let Some(l) = cell.get() {
        return Ok(l);
    }
    let l = sector_levels(&op(n)?, species)?;
    Ok(cell.get_or_init(|| l))
}

fn ground_state() -> Result<Outcome> {
    let reports = [2, 4, 6, 8, 10, 12]
        .into_iter()
        .map(|n| verify_ground_state(&op(n)?, 1e-10))
        .collect::<Result<Vec<_>>>()?;
    Ok(outcome(
        &reports,
        true,
        format!(
            "N=2..12, worst relative residual/energy error {:.2e} (tol 1e-10)",
            worst_value(&reports)
        ),
    ))
}

fn spinon_scattering() -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut exact_ok = true;
    let mut count_ok = true;
    let mut exact_worst = 0.0f64;
    for n in [6, 8, 10, 12] {
        let r = verify_all_scattering(&op(n)?, Species::Spinon, 1e-9)?;
        let m = (n - 2) / 2;
        count_ok &= r.checks.len() == (m + 1) * (m + 2) / 2;
        for c in r.checks.iter().filter(|c| c.details.starts_with("0 ")) {
            exact_worst = exact_worst.max(c.value);
            exact_ok &= c.value <= 1e-10;
        }
        reports.push(r);
    }
    Ok(outcome(
        &reports,
        exact_ok && count_ok,
        format!(
            "N=6..12 all labels, worst residual {:.2e} (tol 1e-9); l_max=0 labels worst {:.2e}",
            worst_value(&reports),
            exact_worst
        ),
    ))
}

fn vanishing() -> Result<Outcome> {
    let reports = [6, 8]
        .into_iter()
        .map(|n| verify_vanishing(&ChainGeometry::<f64>::new(n)?))
        .collect::<Result<Vec<_>>>()?;
    let labels: usize = reports.iter().map(|r| r.checks.len()).sum();
    Ok(outcome(
        &reports,
        true,
        format!(
            "N=6,8: {labels} out-of-range labels, worst relative norm {:.2e} (tol 1e-10)",
            worst_value(&reports)
        ),
    ))
}

fn offsets(levels: &SectorLevels) -> Result<(f64, f64)> {
    let d: Vec<f64> = assign_levels(levels)?.iter().map(|m| m.exact - m.predicted).collect();
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let std = (d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / d.len() as f64).sqrt();
    Ok((mean, std))
}

fn spectrum_inclusion() -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut absolute_ok = true;
    let (mut worst_mean, mut worst_std) = (0.0f64, 0.0f64);
    for n in [6, 8, 10] {
        let l = levels(Species::Spinon, n)?;
        reports.push(match_spectrum(l, 1e-9)?);
        let (mean, std) = offsets(l)?;
        worst_mean = worst_mean.max(mean.abs());
        worst_std = worst_std.max(std);
        absolute_ok &= std < 1e-10 && mean.abs() < 1e-9;
    }
    let worst_match = reports
        .iter()
        .filter_map(|r| r.check("levels_matched"))
        .map(|c| c.value)
        .fold(0.0, f64::max);
    Ok(outcome(
        &reports,
        absolute_ok,
        format!(
            "N=6,8,10 worst |dE|/|H| {worst_match:.2e} (tol 1e-9); offset mean {worst_mean:.2e}, std {worst_std:.2e}"
        ),
    ))
}

fn holon_identities() -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut scatter_worst = 0.0f64;
    let mut match_worst = 0.0f64;
    for n in [6, 8, 10] {
        let s = verify_all_scattering(&op(n)?, Species::Holon, 1e-9)?;
        scatter_worst = scatter_worst.max(worst_value(std::slice::from_ref(&s)));
        let m = match_spectrum(levels(Species::Holon, n)?, 1e-8)?;
        match_worst = match_worst.max(m.check("levels_matched").map_or(f64::NAN, |c| c.value));
        reports.push(s);
        reports.push(m);
    }
    Ok(outcome(
        &reports,
        true,
        format!(
            "N=6,8,10 scattering worst {scatter_worst:.2e} (tol 1e-9), spectrum worst {match_worst:.2e} (tol 1e-8)"
        ),
    ))
}

fn statistical_shift() -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut parts = Vec::new();
    for (species, sizes) in [(Species::Spinon, &[8, 10, 12][..]), (Species::Holon, &[8, 10][..])] {
        for &n in sizes {
            let (fit, rep) = fit_statistical_shift(levels(species, n)?)?;
            parts.push(format!(
                "{species} N={n} s={:.9} ratio {:.1e}",
                fit.shift,
                fit.residual_at_zero / fit.residual_at_quarter.max(f64::MIN_POSITIVE)
            ));
            reports.push(rep);
        }
    }
    Ok(outcome(&reports, true, parts.join("; ")))
}

fn momentum_spacing() -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut labels = 0;
    for n in (2..=16).step_by(2) {
        let g = ChainGeometry::<f64>::new(n)?;
        for species in [Species::Spinon, Species::Holon] {
            labels += PairLabel::all_valid(species, n).len();
            reports.push(verify_momentum_spacing(&g, species, true)?);
        }
    }
    let phase_worst = reports
        .iter()
        .flat_map(|r| r.checks.iter())
        .filter(|c| c.name != "spacing_rule")
        .map(|c| c.value)
        .fold(0.0, f64::max);
    Ok(outcome(
        &reports,
        true,
        format!("N=2..16, {labels} labels exact; translation phases worst {phase_worst:.2e} (tol 1e-10)"),
    ))
}

fn counting() -> Result<Outcome> {
    let reports = (1..=24u64).map(verify_state_counting).collect::<Result<Vec<_>>>()?;
    Ok(outcome(
        &reports,
        true,
        "N=1..24 total equals 2^N exactly; orbitals drop by one per two spinons".into(),
    ))
}

fn gram() -> Result<Outcome> {
    let reports = [3, 5, 7, 9]
        .into_iter()
        .map(|n| verify_gram_structure(&ChainGeometry::<f64>::new(n)?))
        .collect::<Result<Vec<_>>>()?;
    let ranks: Vec<String> = reports
        .iter()
        .map(|r| format!("{}", r.check("spinon_rank").map_or(f64::NAN, |c| c.value)))
        .collect();
    Ok(outcome(
        &reports,
        true,
        format!("N=3,5,7,9 spinon ranks {}; holon Gram diagonal", ranks.join(",")),
    ))
}

fn operator_symmetries() -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut sectors = 0;
    for n in 2..=10usize {
        let o = op(n)?;
        for q in 0..=n {
            for up in 0..=n - q {
                let s = SectorBasis::enumerate(n, SectorKey::new(q, up))?;
                reports.push(operator_self_checks(&o, &s, 50, 42)?);
                sectors += 1;
            }
        }
    }
    Ok(outcome(
        &reports,
        true,
        format!(
            "{sectors} sectors N=2..10, worst relative defect {:.2e} (tol 1e-12)",
            worst_value(&reports)
        ),
    ))
}

fn dispersion_properties() -> Result<Outcome> {
    let reports = (2..=32)
        .step_by(2)
        .map(|n| verify_dispersion(n, 32))
        .collect::<Result<Vec<_>>>()?;
    let fd = reports
        .iter()
        .flat_map(|r| r.checks.iter())
        .filter(|c| c.name.ends_with("derivative"))
        .map(|c| c.value)
        .fold(0.0, f64::max);
    Ok(outcome(
        &reports,
        true,
        format!("velocity vs finite difference {fd:.2e} (tol 1e-8); monotone; v(k_m) > v(k_n) for all labels N<=32"),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("ground state", ground_state),
        ("two-spinon scattering", spinon_scattering),
        ("overcomplete labels vanish", vanishing),
        ("spinon spectrum inclusion", spectrum_inclusion),
        ("two-holon identities", holon_identities),
        ("statistical shift", statistical_shift),
        ("momentum spacing", momentum_spacing),
        ("state counting", counting),
        ("Gram structure", gram),
        ("operator symmetries", operator_symmetries),
        ("dispersion properties", dispersion_properties),
    ];
    let mut all = true;
    let start = Instant::now();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run().unwrap_or_else(|e| Outcome {
            pass: false,
            summary: format!("error: {e}"),
        });
        all &= o.pass;
        println!(
            "criterion {:>2} {} {name}: {} [{:.1}s]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.summary,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} in {:.1}s",
        if all { "all criteria pass" } else { "FAILED" },
        start.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
