//! Command execution: input assembly (flags + optional TOML file),
//! per-subcommand pipelines, and exit-code policy.
//!
//! Exit codes: 0 success; 1 parse/validation error; 2 no matching branch;
//! 3 numeric verification failure; 4 internal bound exhaustion.

use std::collections::BTreeMap;
use std::path::Path;

use hayman_core::classify::{classify, normalize_hayman, Branch, Classification, Coefficients};
use hayman_core::error::SeriesError;
use hayman_core::growth::{growth_report, infinite_order_scenarios};
use hayman_core::series::{
    back_substitution_residual, compare, order_estimate, residual_check, solution_form,
    taylor_solve, ComplexSeries, FormConstants, GridSpec, SolutionFormInstance,
};
use hayman_core::ratfunc::RatFunc;
use hayman_core::Complex64;
use num_traits::{One, Zero};
use serde::Deserialize;

use crate::parser::parse_ratfunc;
use crate::report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_NO_BRANCH: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_BOUNDS: i32 = 4;

#[derive(Debug, Clone, Default)]
pub struct RawInput {
    pub a: Option<String>,
    pub b: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub gamma: Option<String>,
    pub tau1: Option<String>,
    pub tau2: Option<String>,
    pub kappa0: Option<String>,
    pub kappa1: Option<String>,
    pub kappa2: Option<String>,
    pub kappa3: Option<String>,
}

#[derive(Debug, Clone)]
pub struct NumericOptions {
    pub n: usize,
    pub z0: Complex64,
    pub w0: Complex64,
    pub w1: Complex64,
    pub radii: Vec<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub k1: Option<f64>,
    pub tol: f64,
    pub points: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub eps_pole: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            n: 128,
            z0: Complex64::new(0.0, 0.0),
            w0: Complex64::new(1.0, 0.0),
            w1: Complex64::new(0.0, 0.0),
            radii: vec![2.0, 4.0, 8.0, 16.0],
            c1: None,
            c2: None,
            k1: None,
            tol: 1e-9,
            points: 100,
            r_min: 0.5,
            r_max: 2.0,
            eps_pole: 1e-9,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        CliError {
            message: msg.into(),
            exit: EXIT_PARSE,
        }
    }
}

#[derive(Debug, Deserialize, Default)]
pub struct FileSpec {
    #[serde(default)]
    pub coefficients: BTreeMap<String, String>,
    #[serde(default)]
    pub options: FileOptions,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    pub n: Option<usize>,
    pub z0: Option<f64>,
    pub z0_im: Option<f64>,
    pub w0: Option<f64>,
    pub w0_im: Option<f64>,
    pub w1: Option<f64>,
    pub w1_im: Option<f64>,
    pub radii: Option<Vec<f64>>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub k1: Option<f64>,
    pub tol: Option<f64>,
    pub points: Option<usize>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub eps_pole: Option<f64>,
}

pub fn load_file(path: &Path) -> Result<FileSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {}", path.display(), e)))?;
    toml::from_str(&text).map_err(|e| CliError::parse(format!("invalid TOML: {}", e)))
}

/// Merge a TOML file under flag values (flags win) and apply option defaults.
pub fn merge_file(raw: &mut RawInput, opts: &mut NumericOptions, file: &FileSpec) {
    let coeff = |raw_field: &mut Option<String>, key: &str| {
        if raw_field.is_none() {
            if let Some(v) = file.coefficients.get(key) {
                *raw_field = Some(v.clone());
            }
        }
    };
    coeff(&mut raw.a, "a");
    coeff(&mut raw.b, "b");
    coeff(&mut raw.alpha, "alpha");
    coeff(&mut raw.beta, "beta");
    coeff(&mut raw.gamma, "gamma");
    coeff(&mut raw.tau1, "tau1");
    coeff(&mut raw.tau2, "tau2");
    coeff(&mut raw.kappa0, "kappa0");
    coeff(&mut raw.kappa1, "kappa1");
    coeff(&mut raw.kappa2, "kappa2");
    coeff(&mut raw.kappa3, "kappa3");
    let o = &file.options;
    if let Some(n) = o.n {
        opts.n = n;
    }
    if o.z0.is_some() || o.z0_im.is_some() {
        opts.z0 = Complex64::new(o.z0.unwrap_or(0.0), o.z0_im.unwrap_or(0.0));
    }
    if o.w0.is_some() || o.w0_im.is_some() {
        opts.w0 = Complex64::new(o.w0.unwrap_or(0.0), o.w0_im.unwrap_or(0.0));
    }
    if o.w1.is_some() || o.w1_im.is_some() {
        opts.w1 = Complex64::new(o.w1.unwrap_or(0.0), o.w1_im.unwrap_or(0.0));
    }
    if let Some(r) = &o.radii {
        opts.radii = r.clone();
    }
    opts.c1 = opts.c1.or(o.c1);
    opts.c2 = opts.c2.or(o.c2);
    opts.k1 = opts.k1.or(o.k1);
    if let Some(v) = o.tol {
        opts.tol = v;
    }
    if let Some(v) = o.points {
        opts.points = v;
    }
    if let Some(v) = o.r_min {
        opts.r_min = v;
    }
    if let Some(v) = o.r_max {
        opts.r_max = v;
    }
    if let Some(v) = o.eps_pole {
        opts.eps_pole = v;
    }
}

/// Build the coefficient tuple, enforcing that exactly one of the normal and
/// general forms is present.
pub fn build_coefficients(raw: &RawInput) -> Result<(Coefficients, InputEcho), CliError> {
    let normal_present = [&raw.a, &raw.b, &raw.alpha, &raw.beta, &raw.gamma]
        .iter()
        .any(|f| f.is_some());
    let general_present = [
        &raw.tau1, &raw.tau2, &raw.kappa0, &raw.kappa1, &raw.kappa2, &raw.kappa3,
    ]
    .iter()
    .any(|f| f.is_some());
    if normal_present && general_present {
        return Err(CliError::parse(
            "give either the normal-form keys (a, b, alpha, beta, gamma) or the general-form keys (tau1, tau2, kappa0..kappa3), not both",
        ));
    }
    if !normal_present && !general_present {
        return Err(CliError::parse("no coefficients given"));
    }
    let parse = |name: &str, text: &Option<String>| -> Result<RatFunc, CliError> {
        match text {
            None => Ok(RatFunc::zero()),
            Some(t) => parse_ratfunc(t)
                .map_err(|e| CliError::parse(format!("coefficient {}: {}", name, e))),
        }
    };
    let (c, normalized) = if normal_present {
        (
            Coefficients::new(
                parse("a", &raw.a)?,
                parse("b", &raw.b)?,
                parse("alpha", &raw.alpha)?,
                parse("beta", &raw.beta)?,
                parse("gamma", &raw.gamma)?,
            ),
            false,
        )
    } else {
        (
            normalize_hayman(
                &parse("tau1", &raw.tau1)?,
                &parse("tau2", &raw.tau2)?,
                &parse("kappa0", &raw.kappa0)?,
                &parse("kappa1", &raw.kappa1)?,
                &parse("kappa2", &raw.kappa2)?,
                &parse("kappa3", &raw.kappa3)?,
            ),
            true,
        )
    };
    let echo = InputEcho {
        a: format!("{}", c.a),
        b: format!("{}", c.b),
        alpha: format!("{}", c.alpha),
        beta: format!("{}", c.beta),
        gamma: format!("{}", c.gamma),
        normalized_from_general_form: normalized,
    };
    Ok((c, echo))
}

fn base_report(c: &Coefficients, echo: InputEcho) -> (Classification, Report) {
    let cl = classify(c);
    let (classification, derived) = classification_out(&cl);
    let mut warnings = Vec::new();
    warnings.extend(gamma_power_family_flag(c, &cl));
    let report = Report {
        input: echo,
        classification,
        derived,
        growth: None,
        infinite_order: None,
        verification: None,
        series: None,
        order_estimate: None,
        warnings,
    };
    (cl, report)
}

/// Open-question marker: for the family gamma = z^N, beta = 0, a = N/(2z)
/// the source text claims order (1 - N)/2 while the derivation's own formula
/// gives (m3 + 2)/2 = (2 - N)/2; the emitted value follows the derivation and
/// the textual claim is flagged as unverified.
fn gamma_power_family_flag(c: &Coefficients, cl: &Classification) -> Option<String> {
    if !c.beta.is_zero() || c.gamma.is_zero() {
        return None;
    }
    if !matches!(
        cl.primary().map(|r| &r.branch),
        Some(Branch::Case5aRational { .. })
    ) {
        return None;
    }
    // gamma must be a monomial z^N (numerator and denominator monomials).
    let num = c.gamma.numer();
    let den = c.gamma.denom();
    let monomial = |p: &hayman_core::poly::Poly| -> Option<i64> {
        let d = p.degree()?;
        for i in 0..d {
            if !p.coeff(i).is_zero() {
                return None;
            }
        }
        Some(d as i64)
    };
    let n_up = monomial(num)?;
    let n_down = monomial(den)?;
    if !num.coeff(n_up as usize).is_one() {
        return None;
    }
    let n = n_up - n_down;
    // a must equal N/(2z).
    let expected_a = if n == 0 {
        RatFunc::zero()
    } else {
        RatFunc::new(
            hayman_core::poly::Poly::constant(hayman_core::qr(n, 2)),
            hayman_core::poly::Poly::from_i64(&[0, 1]),
        )
        .expect("nonzero denominator")
    };
    if c.a != expected_a {
        return None;
    }
    let claimed = hayman_core::qr(1 - n, 2);
    let emitted = hayman_core::qr(2 - n, 2);
    Some(format!(
        "open question: for gamma = z^{} with a = N/(2z), the source text claims order (1-N)/2 = {} but the derivation's formula (m3+2)/2 gives {}; the emitted order follows the derivation and the textual claim is unverified",
        n, claimed, emitted
    ))
}

fn constants_from(opts: &NumericOptions) -> FormConstants {
    let mut fc = FormConstants::default();
    if let Some(v) = opts.c1 {
        fc.c1 = Complex64::new(v, 0.0);
    }
    if let Some(v) = opts.c2 {
        fc.c2 = Complex64::new(v, 0.0);
    }
    if let Some(v) = opts.k1 {
        fc.k1 = Some(Complex64::new(v, 0.0));
    }
    fc
}

fn grid_from(opts: &NumericOptions) -> GridSpec {
    GridSpec {
        center: opts.z0,
        r_min: opts.r_min,
        r_max: opts.r_max,
        points: opts.points,
        eps_pole: opts.eps_pole,
    }
}

/// First branch (in report order) with an instantiable closed form.
pub fn first_form(
    c: &Coefficients,
    cl: &Classification,
    constants: &FormConstants,
) -> Option<SolutionFormInstance> {
    cl.branches
        .iter()
        .find_map(|b| solution_form(c, cl, &b.branch, constants))
}

fn no_branch_exit(cl: &Classification) -> Option<i32> {
    cl.is_no_branch().then_some(EXIT_NO_BRANCH)
}

pub fn cmd_classify(c: &Coefficients, echo: InputEcho) -> (Report, i32) {
    let (cl, report) = base_report(c, echo);
    let exit = no_branch_exit(&cl).unwrap_or(EXIT_OK);
    (report, exit)
}

pub fn cmd_growth(c: &Coefficients, echo: InputEcho) -> (Report, i32) {
    let (cl, mut report) = base_report(c, echo);
    let g = growth_report(&cl, c);
    report.growth = Some(growth_out(&g));
    report.infinite_order = Some(infinite_order_out(&infinite_order_scenarios(c)));
    let exit = no_branch_exit(&cl).unwrap_or(EXIT_OK);
    (report, exit)
}

pub fn cmd_verify(c: &Coefficients, echo: InputEcho, opts: &NumericOptions) -> (Report, i32) {
    let (cl, mut report) = base_report(c, echo);
    if let Some(exit) = no_branch_exit(&cl) {
        return (report, exit);
    }
    let constants = constants_from(opts);
    let Some(form) = first_form(c, &cl, &constants) else {
        report.warnings.push(
            "no branch closed form is expressible in rational data; nothing to verify numerically"
                .into(),
        );
        return (report, EXIT_OK);
    };
    match residual_check(c, &form, &grid_from(opts)) {
        Ok(res) => {
            let passed = res <= opts.tol;
            report.verification = Some(VerificationOut {
                form_label: form.label.clone(),
                max_residual: res,
                tolerance: opts.tol,
                passed,
                notes: form.notes.clone(),
            });
            (report, if passed { EXIT_OK } else { EXIT_NUMERIC })
        }
        Err(SeriesError::AllPointsExcluded) => {
            report
                .warnings
                .push("every grid point was excluded (poles/zeros); move the grid with --z0".into());
            (report, EXIT_NUMERIC)
        }
        Err(e) => {
            report.warnings.push(format!("verification failed: {}", e));
            (report, EXIT_NUMERIC)
        }
    }
}

fn solve_series(
    c: &Coefficients,
    opts: &NumericOptions,
) -> Result<ComplexSeries, (String, i32)> {
    taylor_solve(c, opts.z0, opts.w0, opts.w1, opts.n).map_err(|e| match e {
        SeriesError::PoleAtBasePoint => (
            "a coefficient has a pole at z0; choose another base point".to_string(),
            EXIT_PARSE,
        ),
        SeriesError::ZeroInitialValue => (
            "w0 must be nonzero (the recurrence divides by w0)".to_string(),
            EXIT_PARSE,
        ),
        other => (format!("{}", other), EXIT_NUMERIC),
    })
}

pub fn cmd_series(c: &Coefficients, echo: InputEcho, opts: &NumericOptions) -> (Report, i32) {
    let (cl, mut report) = base_report(c, echo);
    let s = match solve_series(c, opts) {
        Ok(s) => s,
        Err((msg, exit)) => {
            report.warnings.push(msg);
            return (report, exit);
        }
    };
    let back = match back_substitution_residual(c, &s) {
        Ok(v) => v,
        Err(e) => {
            report.warnings.push(format!("{}", e));
            return (report, EXIT_NUMERIC);
        }
    };
    let constants = constants_from(opts);
    let mut compare_discrepancy = None;
    let mut compare_form = None;
    if let Some(form) = first_form(c, &cl, &constants) {
        if let Ok(d) = compare(&s, &form, 1.0, opts.eps_pole) {
            compare_discrepancy = Some(d);
            compare_form = Some(form.label.clone());
        }
    }
    report.series = Some(SeriesOut {
        z0: [s.z0.re, s.z0.im],
        truncation_order: s.truncation_order(),
        coefficients: s.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        back_substitution_residual: back,
        compare_discrepancy,
        compare_form,
    });
    let exit = if back > 1e-8 {
        EXIT_NUMERIC
    } else {
        no_branch_exit(&cl).unwrap_or(EXIT_OK)
    };
    (report, exit)
}

pub fn cmd_estimate_order(
    c: &Coefficients,
    echo: InputEcho,
    opts: &NumericOptions,
) -> (Report, i32) {
    let (_cl, mut report) = base_report(c, echo);
    let s = match solve_series(c, opts) {
        Ok(s) => s,
        Err((msg, exit)) => {
            report.warnings.push(msg);
            return (report, exit);
        }
    };
    match order_estimate(&s, &opts.radii) {
        Ok(est) => {
            report.order_estimate = Some(order_estimate_out(&est));
            (report, EXIT_OK)
        }
        Err(SeriesError::TruncationDominated { radius_index }) => {
            report.warnings.push(format!(
                "central index at radius #{} is truncation-dominated; increase --n",
                radius_index
            ));
            (report, EXIT_BOUNDS)
        }
        Err(e) => {
            report.warnings.push(format!("{}", e));
            (report, EXIT_PARSE)
        }
    }
}

/// Convenience used by tests: order value of a growth report, if finite.
pub fn finite_order_value(report: &Report) -> Option<f64> {
    report.growth.as_ref().and_then(|g| g.order_value)
}
