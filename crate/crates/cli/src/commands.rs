//! Subcommand implementations: each builds a list of named checks,
//! writes the canonical report, prints a one-line summary, and reports
//! whether everything passed.

use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use wavegroup_core::admissibility::{
    admissible_vector_for_subspace, bandlimited_admissible_vector,
    discrete_contrast, multiplier_criterion, no_go_evidence, unimodular_subspace_criterion,
    FrequencyWindow, ProjectionField, Verdict,
};
use wavegroup_core::battery::{
    affine_bump_battery, band_limited_battery, cyclic_battery, AffineBatteryParams,
};
use wavegroup_core::construction::{
    admissible_vector_for_regular, assemble_field, build_a, build_slices, choose_vectors,
    construction_model, regular_reference_model, regular_reference_model_on, standard_u_basis,
    GammaGrid, Granularity,
};
use wavegroup_core::plancherel::{AffineDualSpec, AffineGridSpec};
use wavegroup_core::report::{canonical_json, REPORT_SCHEMA_VERSION};
use wavegroup_core::wavelet::{analyze, RepresentationModel};
use wavegroup_core::{field_norm, GridFunction, GridKind, GroupModel, PlancherelModel};

use crate::config::RunConfig;
use crate::gridio;

/// One named check with its measured value and tolerance.
struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
    passed: bool,
}

impl Check {
    fn upper(name: &'static str, value: f64, tolerance: f64) -> Self {
        Check {
            name,
            value,
            tolerance,
            passed: value < tolerance,
        }
    }

    fn flag(name: &'static str, ok: bool) -> Self {
        Check {
            name,
            value: if ok { 1.0 } else { 0.0 },
            tolerance: 0.5,
            passed: ok,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
        })
    }
}

/// Write the report, print the summary, name the failures, and return
/// whether the run passed.
fn finish(
    cfg: &RunConfig,
    command: &str,
    checks: &[Check],
    extra: Value,
) -> Result<bool> {
    let passed = checks.iter().all(|c| c.passed);
    let mut report = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": command,
        "config": cfg.to_json(),
        "passed": passed,
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
    });
    if let Value::Object(extra_map) = extra {
        let Value::Object(map) = &mut report else {
            unreachable!()
        };
        for (k, v) in extra_map {
            map.insert(k, v);
        }
    }
    std::fs::write(&cfg.out, canonical_json(&report))
        .with_context(|| format!("writing report {}", cfg.out.display()))?;
    for check in checks {
        let status = if check.passed { "ok" } else { "FAILED" };
        println!(
            "{command}: {} = {:.3e} (tolerance {:.1e}) {status}",
            check.name, check.value, check.tolerance
        );
    }
    if passed {
        println!("{command}: all checks passed; report at {}", cfg.out.display());
    } else {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        eprintln!("{command}: failed certificate(s): {}", failed.join(", "));
    }
    Ok(passed)
}

fn write_csv(cfg: &RunConfig, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    if let Some(path) = &cfg.csv_out {
        let mut out = String::from(header);
        out.push('\n');
        for row in rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| wavegroup_core::report::format_float(*v))
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn parseval_battery(pm: &PlancherelModel, battery: &[GridFunction]) -> (f64, f64) {
    let defects: Vec<(f64, f64)> = battery
        .par_iter()
        .map(|f| {
            let parseval = pm.parseval_defect(f).unwrap();
            let field = pm.forward(f).unwrap();
            let back = pm.inverse(&field).unwrap();
            let roundtrip = back.sub(f).unwrap().norm() / f.norm();
            (parseval, roundtrip)
        })
        .collect();
    defects
        .into_iter()
        .fold((0.0, 0.0), |acc, d| (acc.0.max(d.0), acc.1.max(d.1)))
}

pub fn verify_plancherel(cfg: RunConfig, model: &str, n: Option<u64>) -> Result<bool> {
    let mut checks = Vec::new();
    let mut extra = json!({});
    match model {
        "cyclic" => {
            let pm = PlancherelModel::cyclic(n.unwrap_or(cfg.cyclic_n));
            let battery = cyclic_battery(pm.group_grid(), cfg.battery, cfg.seed);
            let (parseval, roundtrip) = parseval_battery(&pm, &battery);
            checks.push(Check::upper("parseval_defect", parseval, cfg.tol_cyclic));
            checks.push(Check::upper("roundtrip_defect", roundtrip, cfg.tol_cyclic));
            extra = json!({ "conventions": conventions_json(&pm) });
        }
        "realline" => {
            let pm = PlancherelModel::real_line(cfg.line_half_extent, cfg.line_points);
            let band = 0.4 * std::f64::consts::PI * cfg.line_points as f64
                / (2.0 * cfg.line_half_extent);
            let battery = band_limited_battery(pm.group_grid(), band, cfg.battery, cfg.seed);
            let (parseval, roundtrip) = parseval_battery(&pm, &battery);
            checks.push(Check::upper("parseval_defect", parseval, cfg.tol_line));
            checks.push(Check::upper("roundtrip_defect", roundtrip, cfg.tol_line));
            extra = json!({ "conventions": conventions_json(&pm) });
        }
        "affine" => {
            let pm =
                PlancherelModel::affine(&AffineGridSpec::reference(), &AffineDualSpec::reference())?;
            let battery = affine_bump_battery(
                pm.group_grid(),
                &AffineBatteryParams::default(),
                cfg.battery,
                cfg.seed,
            );
            let (parseval, roundtrip) = parseval_battery(&pm, &battery);
            checks.push(Check::upper("parseval_defect", parseval, cfg.tol_affine));
            checks.push(Check::upper("roundtrip_defect", roundtrip, 5.0 * cfg.tol_affine));
            extra = json!({ "conventions": conventions_json(&pm) });
        }
        other => bail!("unknown model {other}; expected cyclic, realline or affine"),
    }
    finish(&cfg, &format!("verify plancherel --model {model}"), &checks, extra)
}

fn conventions_json(pm: &PlancherelModel) -> Value {
    Value::Array(
        pm.conventions()
            .into_iter()
            .map(|(k, v)| json!({ "key": k, "value": v }))
            .collect(),
    )
}

pub fn verify_construction(cfg: RunConfig) -> Result<bool> {
    let mut checks = Vec::new();
    // Unit-grid certificates on a log-uniform quotient grid.
    let gamma = GammaGrid::log_uniform(-20.0, 0.0, 40)?;
    let sp = build_slices(cfg.c, &gamma)?;
    let vectors = choose_vectors(&sp, &gamma, 1)?;
    let basis = standard_u_basis(&vectors, &gamma, cfg.shift)?;
    let built = build_a(&basis, &vectors, &gamma, &sp, cfg.shift)?;
    let cert = &built.certificates;
    checks.push(Check::flag("slice_membership_exact", cert.membership_exact));
    checks.push(Check::flag("delta_lower_bounds", cert.delta_lower_bounds_ok));
    checks.push(Check::upper("gram_defect", cert.gram_defect, 1e-10));
    checks.push(Check::upper(
        "operator_norm_bound",
        cert.op_norm_bound,
        cfg.c + 1e-10,
    ));
    checks.push(Check::upper(
        "hs_norm_sq_vs_dyadic_bound",
        cert.hs_norm_sq,
        cert.hs_dyadic_bound,
    ));

    // Assembled field on the construction-grade model.
    let pm = construction_model(cfg.c, 64)?;
    let (field, assembly) = assemble_field(&pm, cfg.c, cfg.shift, Granularity::Slice)?;
    let measured = field_norm(&field)?.powi(2);
    checks.push(Check::upper(
        "field_norm_sq_vs_budget",
        assembly.field_norm_sq,
        assembly.field_budget,
    ));
    checks.push(Check::upper(
        "field_norm_consistency",
        (measured - assembly.field_norm_sq).abs(),
        1e-10 * measured.max(1.0),
    ));
    let extra = json!({
        "unit_certificates": serde_json::to_value(cert)?,
        "assembly": serde_json::to_value(&assembly)?,
    });
    finish(&cfg, "verify construction", &checks, extra)
}

pub fn admissible_affine(cfg: RunConfig, refine: bool, field_out: Option<&Path>) -> Result<bool> {
    let pm = regular_reference_model()?;
    let result = admissible_vector_for_regular(&pm, cfg.c, cfg.shift, Granularity::Cell)?;
    if let Some(path) = field_out {
        let (field, _) = assemble_field(&pm, cfg.c, cfg.shift, Granularity::Cell)?;
        std::fs::write(path, canonical_json(&field.to_json_value()))
            .with_context(|| format!("writing field {}", path.display()))?;
    }
    let mut checks = Vec::new();
    checks.push(Check::flag(
        "multiplier_verdict_admissible",
        result.report.verdict == Verdict::Admissible,
    ));
    checks.push(Check::upper(
        "multiplier_isometry_defect",
        result.report.max_isometry_defect.unwrap_or(f64::INFINITY),
        cfg.tol_exact,
    ));

    let params = AffineBatteryParams::construction();
    let battery_size = cfg.battery.clamp(4, 24);
    let defect_of = |pm: &PlancherelModel, g: &GridFunction| -> f64 {
        let rep = RepresentationModel::LeftRegular(std::sync::Arc::clone(pm.group_grid()));
        let battery = affine_bump_battery(pm.group_grid(), &params, battery_size, cfg.seed);
        battery
            .par_iter()
            .map(|f| {
                let coeffs = analyze(g, f, &rep).unwrap();
                (coeffs.norm_sq() - f.norm_sq()).abs() / f.norm_sq()
            })
            .reduce(|| 0.0, f64::max)
    };
    let quadrature_defect = defect_of(&pm, &result.g);
    checks.push(Check::upper(
        "quadrature_isometry_defect",
        quadrature_defect,
        5.0 * cfg.tol_affine,
    ));

    let mut rows = vec![vec![0.0, quadrature_defect]];
    if refine {
        let fine = AffineGridSpec::construction().refined_translation();
        let pm_fine = regular_reference_model_on(&fine)?;
        let result_fine = admissible_vector_for_regular(&pm_fine, cfg.c, cfg.shift, Granularity::Cell)?;
        let fine_defect = defect_of(&pm_fine, &result_fine.g);
        checks.push(Check::upper(
            "refined_defect_decreases",
            fine_defect,
            quadrature_defect,
        ));
        rows.push(vec![1.0, fine_defect]);
    }
    write_csv(&cfg, "refinement_step,quadrature_isometry_defect", &rows)?;
    let extra = json!({
        "assembly": serde_json::to_value(&result.assembly)?,
        "multiplier_report": result.report.to_json_value(),
        "norm_sq_certified": result.norm_sq_certified,
        "norm_sq_quadrature": result.norm_sq_quadrature,
        "battery": { "kind": "affine bumps (construction window)", "size": battery_size, "seed": cfg.seed },
    });
    finish(&cfg, "admissible affine", &checks, extra)
}

pub fn check_subspace(cfg: RunConfig, model: &str, window: Option<&str>) -> Result<bool> {
    let mut checks = Vec::new();
    let extra = match model {
        "cyclic" => {
            let pm = PlancherelModel::cyclic(cfg.cyclic_n);
            let p = ProjectionField::full(&pm)?;
            let report = unimodular_subspace_criterion(&p, &pm, cfg.tol_cyclic)?;
            let g = admissible_vector_for_subspace(&p, &pm)?;
            let nu_h = report.nu_total.unwrap_or(f64::NAN);
            checks.push(Check::flag("verdict_admissible", report.verdict == Verdict::Admissible));
            checks.push(Check::upper(
                "norm_identity_defect",
                (g.norm_sq() - nu_h).abs(),
                cfg.tol_cyclic,
            ));
            json!({
                "criterion_report": report.to_json_value(),
                "nu_total": nu_h,
                "vector_norm_sq": g.norm_sq(),
            })
        }
        "realline" => {
            let window = parse_window(window.unwrap_or("-1:1"))?;
            let pm = PlancherelModel::real_line(cfg.line_half_extent, cfg.line_points);
            let (g, report) = bandlimited_admissible_vector(&window, &pm)?;
            let nu_h = report.nu_total.unwrap_or(f64::NAN);
            checks.push(Check::flag("verdict_admissible", report.verdict == Verdict::Admissible));
            checks.push(Check::upper(
                "norm_identity_defect",
                (g.norm_sq() - nu_h).abs() / nu_h,
                cfg.tol_line,
            ));
            json!({
                "criterion_report": report.to_json_value(),
                "nu_total": nu_h,
                "vector_norm_sq": g.norm_sq(),
                "window_measure": window.measure(),
            })
        }
        other => bail!("unknown model {other} for subspace checks"),
    };
    finish(&cfg, &format!("check subspace --model {model}"), &checks, extra)
}

fn parse_window(text: &str) -> Result<FrequencyWindow> {
    let mut intervals = Vec::new();
    for part in text.split(',') {
        let Some((lo, hi)) = part.split_once(':') else {
            bail!("window interval `{part}` is not `lo:hi`");
        };
        intervals.push((lo.trim().parse()?, hi.trim().parse()?));
    }
    Ok(FrequencyWindow::new(intervals))
}

pub fn check_vector(cfg: RunConfig, eta_path: &Path) -> Result<bool> {
    let eta = gridio::read_grid_function(eta_path)?;
    let (pm, tol) = match *eta.grid().kind() {
        GridKind::Cyclic { n } => (PlancherelModel::cyclic(n), cfg.tol_cyclic),
        GridKind::RealLine { half_extent, len } => {
            (PlancherelModel::real_line(half_extent, len), cfg.tol_line)
        }
        GridKind::Affine {
            b_half,
            nb,
            log2_a0,
            dlog2_a,
            na,
        } => {
            let gspec = AffineGridSpec {
                b_half,
                nb,
                log2_a0,
                dlog2_a,
                na,
            };
            (
                PlancherelModel::affine(&gspec, &AffineDualSpec::reference())?,
                cfg.tol_affine,
            )
        }
    };
    let g_hat = pm.forward(&eta)?;
    let report = multiplier_criterion(&g_hat, &pm, None, tol)?;
    let checks = vec![Check::flag(
        "multiplier_verdict_admissible",
        report.verdict == Verdict::Admissible,
    )];
    let extra = json!({ "multiplier_report": report.to_json_value() });
    finish(&cfg, "check vector", &checks, extra)
}

pub fn no_go(cfg: RunConfig, model: &str, extents: &[f64]) -> Result<bool> {
    if extents.is_empty() {
        bail!("--extents must list at least one value");
    }
    let mut checks = Vec::new();
    let extra;
    let mut rows = Vec::new();
    match model {
        "realline" => {
            // L = 8 pi keeps integer extents cell-aligned so the doubling
            // ratios are exact.
            let pm = PlancherelModel::real_line(8.0 * std::f64::consts::PI, cfg.line_points);
            let report = no_go_evidence(&pm, extents)?;
            checks.push(Check::flag("strictly_increasing", report.strictly_increasing));
            checks.push(Check::flag("no_fixed_norm_family", report.no_fixed_norm_family));
            for r in &report.doubling_ratios {
                checks.push(Check::upper("doubling_ratio_defect", (r - 2.0).abs(), 1e-6));
            }
            for row in &report.rows {
                rows.push(vec![row.dual_extent, row.required_norm_sq, row.measured_norm_sq]);
            }
            extra = json!({ "no_go_report": report.to_json_value() });
        }
        "cyclic" => {
            let orders: Vec<u64> = extents.iter().map(|w| *w as u64).collect();
            let contrast = discrete_contrast(&orders)?;
            let mut worst = 0.0f64;
            for (order, norm_sq) in &contrast {
                worst = worst.max((norm_sq - 1.0).abs());
                rows.push(vec![*order as f64, *norm_sq, 1.0]);
            }
            checks.push(Check::upper("unit_norm_defect", worst, cfg.tol_cyclic));
            extra = json!({
                "contrast": contrast
                    .iter()
                    .map(|(n, v)| json!({ "order": n, "norm_sq": v }))
                    .collect::<Vec<_>>(),
                "note": "discrete groups admit admissible vectors for the full regular \
                         representation; no obstruction",
            });
        }
        other => bail!("unknown model {other} for no-go evidence"),
    }
    write_csv(&cfg, "extent,required_norm_sq,measured_norm_sq", &rows)?;
    finish(&cfg, &format!("no-go --model {model}"), &checks, extra)
}

pub fn transform(
    cfg: RunConfig,
    rep_name: &str,
    eta_path: &Path,
    phi_path: &Path,
    coeffs_out: Option<&Path>,
) -> Result<bool> {
    let eta = gridio::read_grid_function(eta_path)?;
    let phi = gridio::read_grid_function(phi_path)?;
    let rep = match rep_name {
        "regular" => RepresentationModel::LeftRegular(std::sync::Arc::clone(eta.grid())),
        "quasiregular" => {
            if eta.grid().model() != GroupModel::RealLine {
                bail!("the quasi-regular representation acts on line grid functions");
            }
            RepresentationModel::AffineQuasiRegular {
                line: std::sync::Arc::clone(eta.grid()),
                group: AffineGridSpec::quasi_regular_reference().grid(),
            }
        }
        other => bail!("unknown representation {other}; expected regular or quasiregular"),
    };
    let coeffs = analyze(&eta, &phi, &rep)?;
    if let Some(path) = coeffs_out {
        gridio::write_grid_function(path, &coeffs)?;
    }
    let defect = (coeffs.norm_sq() - phi.norm_sq()).abs() / phi.norm_sq();
    let checks = vec![Check::flag("finite_coefficients", coeffs.norm_sq().is_finite())];
    let extra = json!({
        "phi_norm_sq": phi.norm_sq(),
        "eta_norm_sq": eta.norm_sq(),
        "coefficient_norm_sq": coeffs.norm_sq(),
        "isometry_defect": defect,
    });
    finish(&cfg, &format!("transform --rep {rep_name}"), &checks, extra)
}

pub fn summarize_report(input: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(input)
        .with_context(|| format!("reading {}", input.display()))?;
    let value: Value = serde_json::from_str(&text)?;
    let schema = value
        .get("schema_version")
        .and_then(Value::as_u64)
        .context("report misses schema_version")?;
    if schema != REPORT_SCHEMA_VERSION as u64 {
        bail!("unsupported report schema version {schema}");
    }
    let command = value
        .get("command")
        .and_then(Value::as_str)
        .unwrap_or("<unknown>");
    let passed = value
        .get("passed")
        .and_then(Value::as_bool)
        .context("report misses the passed flag")?;
    let checks = value
        .get("checks")
        .and_then(Value::as_array)
        .map(|c| c.len())
        .unwrap_or(0);
    println!(
        "report for `{command}`: {} ({checks} checks)",
        if passed { "passed" } else { "FAILED" }
    );
    if let Some(items) = value.get("checks").and_then(Value::as_array) {
        for item in items {
            let name = item.get("name").and_then(Value::as_str).unwrap_or("?");
            let ok = item.get("passed").and_then(Value::as_bool).unwrap_or(false);
            println!("  {name}: {}", if ok { "ok" } else { "FAILED" });
        }
    }
    Ok(passed)
}
