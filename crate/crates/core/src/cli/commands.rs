use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{Family, RunConfig};
use super::output::{Cell, Report};
use super::CliError;
use crate::anosov_orbits::{count_fixed_points, enumerate_primitive_orbits, identity_residual, load_orbit_spectrum, ToralAutomorphism};
use crate::bv_gauge::{
    build_bf_fields, degenerate_contraction, homotopy_scan, hodge_contraction, metric_gauge, partition_function,
    random_contraction, ContractionFamily,
};
use crate::ruelle_zeta::{closed_form_suspension, fried_report, log_zeta, Degree, Orbits, ZetaError};
use crate::twisted_complex::{
    det_relations_report, load_complex, log_schwarz_partition, mapping_torus_complex, torsion_report, TwistedComplex,
};
use crate::verify::{criterion_ids, run_criterion, CriterionResult};

/// Rendered stdout text, plus lines for stderr that may vary between runs.
pub struct Output {
    pub report: Option<Report>,
    pub text: String,
    pub diagnostics: Vec<String>,
    pub failed: bool,
}

impl Output {
    fn report(report: Report) -> Self {
        Output { report: Some(report), text: String::new(), diagnostics: Vec::new(), failed: false }
    }
}

fn opt(x: Option<f64>) -> Cell {
    x.map_or_else(|| Cell::text("none"), Cell::Num)
}

fn input_complex(cfg: &RunConfig) -> Result<TwistedComplex, CliError> {
    match &cfg.input {
        Some(path) => load_complex(path).map_err(|e| CliError::from_complex(e, Some(path))),
        None => mapping_torus_complex(cfg.monodromy, cfg.theta).map_err(|e| CliError::from_complex(e, None)),
    }
}

pub fn cmd_torsion(cfg: &RunConfig) -> Result<Output, CliError> {
    let tc = input_complex(cfg)?;
    let mut r = Report::with_columns(&["quantity", "value"]);
    for (k, b) in tc.betti_numbers().iter().enumerate() {
        r.push(vec![Cell::text(format!("betti_{k}")), Cell::int(b)]);
    }
    let err = |e| CliError::from_complex(e, None);
    let tor = torsion_report(&tc).map_err(err)?;
    let log_z = log_schwarz_partition(&tc).map_err(err)?;
    let rel = det_relations_report(&tc).map_err(err)?;
    let rows = [
        ("log_tau_laplacian", Cell::Num(tor.log_laplacian_form)),
        ("log_tau_coexact", Cell::Num(tor.log_coexact_form)),
        ("sigma", Cell::int(cfg.convention.sigma())),
        ("tau", Cell::Num(tor.value(cfg.convention))),
        ("schwarz_partition", Cell::Num(log_z.exp())),
        ("relation1", Cell::Num(rel.relation1)),
        ("relation2", opt(rel.relation2)),
        ("relation3", Cell::Num(rel.relation3)),
        ("star_intertwining", opt(rel.star_intertwining)),
    ];
    for (name, value) in rows {
        r.push(vec![Cell::text(name), value]);
    }
    Ok(Output::report(r))
}

pub fn cmd_bf(cfg: &RunConfig) -> Result<Output, CliError> {
    let tc = input_complex(cfg)?;
    let sigma = cfg.convention.sigma();
    let fs = build_bf_fields(&tc)?;
    let tau = torsion_report(&tc).map_err(|e| CliError::from_complex(e, None))?.value(cfg.convention);
    let z_metric = partition_function(&fs, &metric_gauge(&fs)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let family = match cfg.family {
        Family::Constant => ContractionFamily::constant(hodge_contraction(&fs)?),
        Family::Random => ContractionFamily::random_rotation(random_contraction(&fs, &mut rng)?, 0.0, &mut rng),
        Family::Degenerate => {
            // the singular contraction sits on the middle sample
            let mid = (cfg.samples - 1) / 2;
            let t0 = mid as f64 / (cfg.samples - 1) as f64;
            ContractionFamily::random_rotation(degenerate_contraction(&fs, &mut rng)?, t0, &mut rng)
        }
    };
    let scan = homotopy_scan(&fs, &family, cfg.samples)?;
    let mut r = Report::with_columns(&["t", "modulus", "phase", "isotropy_residual", "cross_pairing_min_sv", "deviation"]);
    r.note("sigma", Cell::int(sigma));
    r.note("tau", Cell::Num(tau));
    r.note("z_metric", Cell::Num(z_metric.modulus.powi(sigma)));
    r.note("z_metric_phase", Cell::Num(z_metric.phase));
    r.note("z_contraction", Cell::Num(scan.samples[0].modulus.powi(sigma)));
    r.note("max_deviation", Cell::Num(scan.max_deviation));
    for s in &scan.samples {
        r.push(vec![
            Cell::Num(s.t),
            Cell::Num(s.modulus.powi(sigma)),
            Cell::Num(s.phase),
            Cell::Num(s.isotropy_residual),
            Cell::Num(s.cross_pairing_min_singular_value),
            Cell::Num(s.deviation),
        ]);
    }
    Ok(Output::report(r))
}

const ZETA_COLUMNS: [&str; 10] =
    ["re_lambda", "im_lambda", "k", "re_log_zeta", "im_log_zeta", "tail_bound", "J", "abs_zeta_power", "mode", "status"];

const DEGREES: [Degree; 4] = [Degree::Form(0), Degree::Form(1), Degree::Form(2), Degree::Full];

/// `|ζ_k|^{(−1)^k}`, and `|ζ|^{−1}` for the full product.
fn abs_power(degree: Degree, log: Complex64) -> f64 {
    match degree {
        Degree::Form(k) if k % 2 == 0 => log.re.exp(),
        _ => (-log.re).exp(),
    }
}

pub fn cmd_zeta(cfg: &RunConfig) -> Result<Output, CliError> {
    let suspension = match &cfg.input {
        Some(_) => None,
        None => Some(ToralAutomorphism::new(cfg.monodromy).map_err(ZetaError::from)?),
    };
    if cfg.closed_form && suspension.is_none() {
        return Err(CliError::Domain("closed-form mode needs a monodromy, not an orbit spectrum".into()));
    }
    let orbits = match (&cfg.input, &suspension) {
        (Some(path), _) => Orbits::spectrum(load_orbit_spectrum(path).map_err(|e| CliError::from_orbit(e, path))?),
        (None, Some(map)) if !cfg.closed_form => Orbits::suspension(*map, cfg.truncation)?,
        _ => Orbits::Spectrum(Vec::new()),
    };
    let mut r = Report::with_columns(&ZETA_COLUMNS);
    r.note("theta", Cell::Num(cfg.theta));
    for (re, im) in cfg.grid.points() {
        let lambda = Complex64::new(re, im);
        for degree in DEGREES {
            let k = Cell::text(degree.to_string());
            let row = if let (true, Some(map)) = (cfg.closed_form, &suspension) {
                let cf = closed_form_suspension(map, cfg.theta, lambda);
                let log = match degree {
                    Degree::Form(k) => cf.log_zeta[k],
                    Degree::Full => cf.log_full,
                };
                vec![Cell::Num(log.re), Cell::Num(log.im), Cell::Num(0.0), Cell::int(0), Cell::Num(abs_power(degree, log)), Cell::text("closed"), Cell::text("ok")]
            } else {
                match log_zeta(&orbits, cfg.theta, lambda, degree, cfg.truncation) {
                    Ok(ev) => vec![
                        Cell::Num(ev.value.re),
                        Cell::Num(ev.value.im),
                        Cell::Num(ev.truncation_error_bound),
                        Cell::int(ev.truncation),
                        Cell::Num(abs_power(degree, ev.value)),
                        Cell::text("euler"),
                        Cell::text("ok"),
                    ],
                    Err(ZetaError::DivergentRegion { .. }) => vec![
                        Cell::Num(f64::NAN),
                        Cell::Num(f64::NAN),
                        Cell::Num(f64::NAN),
                        Cell::int(cfg.truncation),
                        Cell::Num(f64::NAN),
                        Cell::text("euler"),
                        Cell::text("divergent"),
                    ],
                    Err(e) => return Err(e.into()),
                }
            };
            let mut full = vec![Cell::Num(re), Cell::Num(im), k];
            full.extend(row);
            r.push(full);
        }
    }
    if cfg.fried {
        let map = suspension.as_ref().ok_or_else(|| CliError::Domain("the Fried comparison needs a monodromy".into()))?;
        let f = fried_report(map.a, cfg.theta, cfg.convention)?;
        r.note("fried_zeta_side", Cell::Num(f.zeta_side));
        r.note("fried_torsion", Cell::Num(f.torsion));
        r.note("fried_exponent", Cell::int(f.exponent));
        r.note("fried_residual", Cell::Num(f.residual));
    }
    Ok(Output::report(r))
}

pub fn cmd_orbits(cfg: &RunConfig) -> Result<Output, CliError> {
    let map = ToralAutomorphism::new(cfg.monodromy).map_err(ZetaError::from)?;
    let records = enumerate_primitive_orbits(&map, cfg.truncation).map_err(ZetaError::from)?;
    let mut r = Report::with_columns(&[
        "period",
        "length",
        "count",
        "primitive",
        "eig1",
        "eig2",
        "re_holonomy",
        "im_holonomy",
        "identity_residual",
        "fixed_points",
    ]);
    r.note("theta", Cell::Num(cfg.theta));
    for rec in &records {
        let rho = rec.character(cfg.theta);
        let fixed = count_fixed_points(map.a, rec.period).map_err(ZetaError::from)?;
        r.push(vec![
            Cell::int(rec.period),
            Cell::Num(rec.length),
            Cell::int(rec.count),
            Cell::text(if rec.primitive { "true" } else { "false" }),
            Cell::Num(rec.poincare_eigs.0),
            Cell::Num(rec.poincare_eigs.1),
            Cell::Num(rho.re),
            Cell::Num(rho.im),
            Cell::Num(identity_residual(rec.poincare_eigs, 1)),
            Cell::int(fixed),
        ]);
    }
    Ok(Output::report(r))
}

/// Timing-free line, so stdout is identical between runs.
fn verdict_line(r: &CriterionResult) -> String {
    format!(
        "[{}] {:>2} {:<34} worst {:.3e} (tol {:.0e})  {}",
        if r.passed() { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.worst,
        r.tolerance,
        r.detail
    )
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Output, CliError> {
    let ids: Vec<u8> = match cfg.criterion {
        Some(id) => vec![id],
        None => criterion_ids().collect(),
    };
    let mut out = Output { report: None, text: String::new(), diagnostics: Vec::new(), failed: false };
    let mut passed = 0;
    for id in ids {
        let r = run_criterion(id, cfg.seed).ok_or_else(|| CliError::Parse(format!("no criterion {id}")))?;
        out.text.push_str(&verdict_line(&r));
        out.text.push('\n');
        out.diagnostics.push(format!("criterion {:>2}: {:.3}s (limit {}s)", r.id, r.elapsed.as_secs_f64(), r.time_limit.as_secs()));
        if r.passed() {
            passed += 1;
        } else {
            out.failed = true;
        }
    }
    let total = out.diagnostics.len();
    out.text.push_str(&format!("{passed}/{total} criteria passed\n"));
    Ok(out)
}
