//! The table-producing commands.

use landaucap_core::chebyshev::{capacity, capacity_estimate, default_degrees, SampleRule};
use landaucap_core::landau::{
    level_q_matrix, lemma1_from_spectrum, radial_level_diagonal, spectrum, theorem_predictions,
    CapacitySource,
};
use landaucap_core::mp::{to_decimal, Real};
use landaucap_core::orthopoly::{monic_orthogonalize, rho_estimates, theoretical_bounds};
use landaucap_core::weight::{mixed_moments, MomentKind};
use rug::Float;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::output::{num, Report};
use crate::CliError;

pub const DEFAULT_ORTHO_N: usize = 40;
pub const DEFAULT_TOEPLITZ_N: usize = 48;

fn region_value(json: &str) -> Value {
    serde_json::from_str(json).unwrap_or(Value::Null)
}

fn default_n_min(n: usize) -> usize {
    (n / 4).max(1)
}

pub fn cmd_capacity(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let region = cfg.region()?;
    let degrees = cfg.degrees.clone().unwrap_or_else(default_degrees);
    let per = cfg.samples_per_degree.unwrap_or(16);
    let tol = cfg.tol.unwrap_or(1e-4);
    let est = capacity_estimate(&region, &degrees, SampleRule::PerDegree(per), tol)?;

    let mut rep = Report::new("capacity", &["n", "log_norm", "nth_root", "converged"]);
    for r in &est.results {
        rep.push(vec![
            r.degree.to_string(),
            num(r.log_sup_norm),
            num(r.nth_root()),
            r.converged.to_string(),
        ]);
    }
    let c = est.extrapolated;
    rep.summary(vec!["extrapolated".into(), num(c.ln()), num(c), "true".into()]);
    rep.meta("region", region_value(&region.to_json()));
    rep.meta("extrapolated", num(c));
    rep.meta("fit_degrees", est.fit_degrees.clone());
    rep.meta("samples_per_degree", per);
    rep.meta("tol", tol);
    if let Some(known) = region.capacity_known() {
        rep.summary(vec!["closed_form".into(), num(known.ln()), num(known), "true".into()]);
        rep.meta("closed_form", num(known));
    }
    Ok(rep)
}

pub fn cmd_orthopoly(cfg: &ExperimentConfig, precision: Option<u32>) -> Result<Report, CliError> {
    let w = cfg.weight()?;
    let n = cfg.n.unwrap_or(DEFAULT_ORTHO_N);
    let prec = cfg.precision(precision, n)?;
    let table = mixed_moments(&w, MomentKind::Plain, n, prec)?;
    let basis = monic_orthogonalize(&table)?;

    let mut rep = Report::new("orthopoly", &["n", "log_Mn", "Mn_nth_root"]);
    for (k, l) in basis.log_norms().iter().enumerate() {
        let root = if k == 0 {
            String::new()
        } else {
            to_decimal(&Float::with_val(prec, l / k as u32).exp())
        };
        rep.push(vec![k.to_string(), to_decimal(l), root]);
    }
    let n_min = cfg.n_min.unwrap_or(default_n_min(n));
    // a window too short for the tail statistics is not an error for the table
    if let Ok(rho) = rho_estimates(&basis, n_min) {
        rep.summary(vec!["rho_plus_hat".into(), String::new(), num(rho.rho_plus_hat)]);
        rep.summary(vec!["rho_minus_hat".into(), String::new(), num(rho.rho_minus_hat)]);
        rep.meta("rho_plus_hat", num(rho.rho_plus_hat));
        rep.meta("rho_minus_hat", num(rho.rho_minus_hat));
        if let Some(x) = rho.extrapolated {
            rep.summary(vec!["extrapolated".into(), String::new(), num(x)]);
            rep.meta("extrapolated", num(x));
        }
        rep.meta("window", vec![rho.window.0, rho.window.1]);
    }
    let coeffs: Vec<Vec<[String; 2]>> = (0..=n)
        .map(|k| {
            (0..=k)
                .map(|j| {
                    let c = basis.coeff(k, j);
                    [to_decimal(&c.re), to_decimal(&c.im)]
                })
                .collect()
        })
        .collect();
    rep.meta("coefficients", json!(coeffs));
    rep.meta("precision_bits", prec);
    rep.meta("provenance", basis.provenance());
    Ok(rep)
}

pub fn cmd_toeplitz(cfg: &ExperimentConfig, precision: Option<u32>, oracle: bool) -> Result<Report, CliError> {
    let w = cfg.weight()?;
    let q = cfg.q.unwrap_or(0);
    let b0 = cfg.b0();
    let n = cfg.n.unwrap_or(DEFAULT_TOEPLITZ_N);
    if n < q {
        return Err(CliError::Config(format!("N = {n} must be at least q = {q}")));
    }
    let prec = cfg.precision(precision, n + q)?;
    let m = level_q_matrix(&w, q, b0, n, prec)?;
    let spec = spectrum(&m, prec)?;
    let lemma = if q == 0 {
        lemma1_from_spectrum(&w, b0, &spec).ok()
    } else {
        None
    };
    let reference: Option<Vec<Real>> = if oracle {
        let mut d = radial_level_diagonal(&w, q, b0, n, prec)?;
        d.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        Some(d)
    } else {
        None
    };

    let mut cols = vec![
        "n",
        "log_sn",
        "sn",
        "trusted",
        "lhs_nth_root",
        "rhs_nth_root",
        "ratio",
    ];
    if oracle {
        cols.extend(["oracle_sn", "rel_dev"]);
    }
    let mut rep = Report::new("toeplitz", &cols);
    let mut max_dev = 0f64;
    for k in 1..=spec.eigenvalues.len() {
        let mut row = vec![
            k.to_string(),
            to_decimal(&spec.log_eigs[k - 1]),
            to_decimal(spec.s(k)),
            spec.is_trusted(k).to_string(),
        ];
        match lemma.as_ref().and_then(|l| l.n.iter().position(|&j| j == k)) {
            Some(i) => {
                let l = lemma.as_ref().unwrap();
                row.push(num(l.log_lhs[i].exp()));
                row.push(num(l.log_rhs[i].exp()));
                row.push(num(l.ratio[i]));
            }
            None => row.extend([String::new(), String::new(), String::new()]),
        }
        if let Some(r) = &reference {
            let o = &r[k - 1];
            row.push(to_decimal(o));
            if spec.is_trusted(k) && !o.is_zero() {
                let dev = (Float::with_val(prec, spec.s(k) - o) / o).abs().to_f64();
                max_dev = max_dev.max(dev);
                row.push(num(dev));
            } else {
                row.push(String::new());
            }
        }
        rep.push(row);
    }
    if oracle {
        let mut row = vec![String::new(); cols.len()];
        row[0] = "max_rel_dev".into();
        row[cols.len() - 1] = num(max_dev);
        rep.summary(row);
        rep.meta("max_rel_dev", num(max_dev));
    }
    rep.meta("q", q);
    rep.meta("b0", b0);
    rep.meta("N", n);
    rep.meta("precision_bits", prec);
    rep.meta("trusted_count", spec.trusted_count);
    rep.meta("matrix_residual", num(spec.matrix_residual));
    rep.meta("radial_path", m.radial_path);
    rep.meta("provenance", spec.provenance.clone());
    Ok(rep)
}

pub fn cmd_predict(cfg: &ExperimentConfig, precision: Option<u32>) -> Result<Report, CliError> {
    let w = cfg.weight()?;
    let q = cfg.q.unwrap_or(0);
    let b0 = cfg.b0();
    let n = cfg.n.unwrap_or(DEFAULT_ORTHO_N);
    let prec = cfg.precision(precision, n)?;
    let basis = monic_orthogonalize(&mixed_moments(&w, MomentKind::Plain, n, prec)?)?;
    let rho = rho_estimates(&basis, cfg.n_min.unwrap_or(default_n_min(n)))?;
    let support = w.support().clone();
    let cap = match CapacitySource::known(&support) {
        Ok(c) => c,
        Err(_) => {
            let degrees = cfg.degrees.clone().unwrap_or_else(default_degrees);
            let per = cfg.samples_per_degree.unwrap_or(16);
            let est = capacity_estimate(&support, &degrees, SampleRule::PerDegree(per), cfg.tol.unwrap_or(1e-4))?;
            CapacitySource::from_estimate(&support, &est)
        }
    };
    let limits = theorem_predictions(&w, q, b0, &rho, &cap)?;

    let mut rep = Report::new("predict", &["quantity", "value"]);
    let rows: [(&str, f64); 10] = [
        ("theorem1_limsup", limits.theorem1_limsup),
        ("theorem1_liminf", limits.theorem1_liminf),
        ("theorem1_point", limits.theorem1_point),
        ("theorem2_limit", limits.theorem2_limit),
        ("theorem3_limsup", limits.theorem3_limsup),
        ("theorem3_liminf", limits.theorem3_liminf),
        ("theorem3_point", limits.theorem3_point),
        ("log_asymptote_n_log_n", limits.log_asymptote_n_log_n),
        ("log_asymptote_linear", limits.log_asymptote_linear),
        ("capacity", cap.value),
    ];
    for (k, v) in rows {
        rep.push(vec![k.into(), num(v)]);
    }
    rep.push(vec!["rho_plus_hat".into(), num(rho.rho_plus_hat)]);
    rep.push(vec!["rho_minus_hat".into(), num(rho.rho_minus_hat)]);
    if let Some(x) = rho.extrapolated {
        rep.push(vec!["rho_extrapolated".into(), num(x)]);
    }
    if let Ok((lo, hi)) = theoretical_bounds(&w, &capacity) {
        rep.push(vec!["rho_lower_bound".into(), num(lo)]);
        rep.push(vec!["rho_upper_bound".into(), num(hi)]);
    }
    rep.meta("predicted_limits", serde_json::to_value(&limits).expect("serializable"));
    rep.meta("capacity_origin", cap.origin);
    Ok(rep)
}
