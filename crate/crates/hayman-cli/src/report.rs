//! Machine-readable report with stable field names, plus the text renderer.

use std::collections::BTreeMap;

use hayman_core::classify::{
    Branch, BranchReport, Classification, ConsistencyStatus, ExpADiagnostic,
};
use hayman_core::growth::{GrowthKind, GrowthReport, InfiniteOrderScenarios};
use hayman_core::series::OrderEstimate;
use hayman_core::Q;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub input: InputEcho,
    pub classification: ClassificationOut,
    pub derived: DerivedOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinite_order: Option<InfiniteOrderOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_estimate: Option<OrderEstimateOut>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub a: String,
    pub b: String,
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub normalized_from_general_form: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationOut {
    pub no_branch: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primary: Option<String>,
    pub branches: Vec<BranchOut>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchOut {
    pub label: String,
    pub data: BTreeMap<String, String>,
    pub verified_identities: Vec<String>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistency: Option<ConsistencyOut>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyOut {
    pub status: String,
    pub c2: String,
    pub c1: String,
    pub c0: String,
    pub forced_rational: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivedOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap_a: Option<String>,
    pub cap_b: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminator: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthOut {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyper_order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyper_order_is_bound: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    pub provenance: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfiniteOrderOut {
    pub scenario1: bool,
    pub scenario2: bool,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationOut {
    pub form_label: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesOut {
    pub z0: [f64; 2],
    pub truncation_order: usize,
    pub coefficients: Vec<[f64; 2]>,
    pub back_substitution_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compare_discrepancy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compare_form: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderEstimateOut {
    pub sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyper_slope: Option<f64>,
    pub samples: Vec<SampleOut>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleOut {
    pub radius: f64,
    pub central_index: usize,
}

fn q_str(q: &Q) -> String {
    format!("{}", q)
}

pub fn branch_out(report: &BranchReport) -> BranchOut {
    let mut data = BTreeMap::new();
    match &report.branch {
        Branch::HomogeneousSpecial {
            rational_h,
            h_family,
        }
        | Branch::Case3 {
            rational_h,
            h_family,
        } => {
            if let Some(h) = rational_h {
                data.insert("h".into(), format!("{}", h));
            }
            data.insert(
                "search_incomplete".into(),
                format!("{}", h_family.incomplete_search),
            );
        }
        Branch::Case1 => {}
        Branch::Case2 { h } => {
            data.insert("h".into(), format!("{}", h));
        }
        Branch::Case4 { h1, h2, g } => {
            data.insert("h1".into(), format!("{}", h1));
            data.insert("h2".into(), format!("{}", h2));
            data.insert("g".into(), format!("{}", g));
        }
        Branch::Case5aRational {
            k1sq,
            k1sq_free,
            k2sq,
            big_r,
            big_s,
            exp_a,
        } => {
            data.insert("k1_squared".into(), q_str(k1sq));
            data.insert("k1_squared_free".into(), format!("{}", k1sq_free));
            data.insert("k2_squared".into(), q_str(k2sq));
            data.insert("exp_2_int_a".into(), format!("{}", big_r));
            data.insert("exp_int_A_plus_2a".into(), format!("{}", big_s));
            data.insert(
                "exp_int_a".into(),
                match exp_a {
                    ExpADiagnostic::Rational(u) => format!("rational: {}", u),
                    ExpADiagnostic::Algebroid => "algebroid (two-sheeted)".into(),
                },
            );
        }
        Branch::Case5aTranscendental { u1, v1 } => {
            data.insert("u1".into(), format!("{}", u1));
            data.insert("v1".into(), format!("{}", v1));
        }
        Branch::Case5b {
            k1sq,
            k1sq_free,
            big_r,
            exp_neg_a,
        } => {
            data.insert("k1_squared".into(), q_str(k1sq));
            data.insert("k1_squared_free".into(), format!("{}", k1sq_free));
            data.insert("exp_2_int_a".into(), format!("{}", big_r));
            if let Some(u) = exp_neg_a {
                data.insert("exp_neg_int_a".into(), format!("{}", u));
            }
        }
        Branch::Case5c { k1 } => {
            data.insert("k1".into(), q_str(k1));
        }
        Branch::Case5d {
            k1sq,
            special_autonomous,
        } => {
            data.insert("k1_squared".into(), q_str(k1sq));
            data.insert(
                "special_autonomous".into(),
                format!("{}", special_autonomous),
            );
        }
        Branch::Case5e => {}
    }
    let consistency = report.consistency.as_ref().map(|cr| {
        let (status, forced) = match &cr.status {
            ConsistencyStatus::Consistent => ("consistent".to_string(), Vec::new()),
            ConsistencyStatus::ForcedRational(roots) => (
                "forced-rational".to_string(),
                roots.iter().map(|r| format!("{}", r)).collect(),
            ),
            ConsistencyStatus::Inconsistent => ("inconsistent".to_string(), Vec::new()),
        };
        ConsistencyOut {
            status,
            c2: format!("{}", cr.c2),
            c1: format!("{}", cr.c1),
            c0: format!("{}", cr.c0),
            forced_rational: forced,
        }
    });
    BranchOut {
        label: report.branch.label().into(),
        data,
        verified_identities: report.verified_identities.clone(),
        warnings: report.warnings.clone(),
        consistency,
    }
}

pub fn classification_out(cl: &Classification) -> (ClassificationOut, DerivedOut) {
    let out = ClassificationOut {
        no_branch: cl.is_no_branch(),
        primary: cl.primary().map(|r| r.branch.label().to_string()),
        branches: cl.branches.iter().map(branch_out).collect(),
        diagnostics: cl.diagnostics.clone(),
    };
    let derived = DerivedOut {
        cap_a: cl.derived.cap_a.as_ref().map(|f| format!("{}", f)),
        cap_b: format!("{}", cl.derived.cap_b),
        discriminator: cl.derived.discriminator.as_ref().map(|f| format!("{}", f)),
    };
    (out, derived)
}

pub fn growth_out(g: &GrowthReport) -> GrowthOut {
    let mut out = GrowthOut {
        kind: String::new(),
        order: None,
        order_value: None,
        exact: None,
        hyper_order: None,
        hyper_order_is_bound: None,
        diagnostic: None,
        provenance: g.provenance.clone(),
        warnings: g.warnings.clone(),
    };
    match &g.kind {
        GrowthKind::FiniteOrder { order, exact } => {
            out.kind = "finite-order".into();
            out.order = Some(q_str(order));
            out.order_value = order.to_f64();
            out.exact = Some(*exact);
        }
        GrowthKind::HyperOrderExact { n } => {
            out.kind = "hyper-order-exact".into();
            out.hyper_order = Some(*n);
            out.hyper_order_is_bound = Some(false);
        }
        GrowthKind::HyperOrderBound { n } => {
            out.kind = "hyper-order-bound".into();
            out.hyper_order = Some(*n);
            out.hyper_order_is_bound = Some(true);
        }
        GrowthKind::Unknown { diagnostic } => {
            out.kind = "unknown".into();
            out.diagnostic = Some(diagnostic.clone());
        }
    }
    out
}

pub fn infinite_order_out(s: &InfiniteOrderScenarios) -> InfiniteOrderOut {
    InfiniteOrderOut {
        scenario1: s.scenario1,
        scenario2: s.scenario2,
        details: s.details.clone(),
    }
}

pub fn order_estimate_out(e: &OrderEstimate) -> OrderEstimateOut {
    OrderEstimateOut {
        sigma: e.sigma,
        hyper_slope: e.hyper_slope,
        samples: e
            .samples
            .iter()
            .map(|(r, nu)| SampleOut {
                radius: *r,
                central_index: *nu,
            })
            .collect(),
    }
}

pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let push = |s: &mut String, line: String| {
        s.push_str(&line);
        s.push('\n');
    };
    push(&mut s, format!("equation coefficients:"));
    push(&mut s, format!("  a     = {}", r.input.a));
    push(&mut s, format!("  b     = {}", r.input.b));
    push(&mut s, format!("  alpha = {}", r.input.alpha));
    push(&mut s, format!("  beta  = {}", r.input.beta));
    push(&mut s, format!("  gamma = {}", r.input.gamma));
    if r.classification.no_branch {
        push(
            &mut s,
            "classification: no branch matches — no transcendental meromorphic solution".into(),
        );
    } else {
        push(
            &mut s,
            format!(
                "classification: primary branch {}",
                r.classification.primary.as_deref().unwrap_or("-")
            ),
        );
        for b in &r.classification.branches {
            push(&mut s, format!("  [{}]", b.label));
            for (k, v) in &b.data {
                push(&mut s, format!("    {} = {}", k, v));
            }
            for id in &b.verified_identities {
                push(&mut s, format!("    verified: {}", id));
            }
            if let Some(cr) = &b.consistency {
                push(&mut s, format!("    consistency: {}", cr.status));
                for root in &cr.forced_rational {
                    push(&mut s, format!("      forced rational solution: {}", root));
                }
            }
            for w in &b.warnings {
                push(&mut s, format!("    warning: {}", w));
            }
        }
    }
    for d in &r.classification.diagnostics {
        push(&mut s, format!("diagnostic: {}", d));
    }
    if let Some(a) = &r.derived.cap_a {
        push(&mut s, format!("derived: A = {}", a));
    }
    push(&mut s, format!("derived: B = {}", r.derived.cap_b));
    if let Some(g) = &r.growth {
        match g.kind.as_str() {
            "finite-order" => push(
                &mut s,
                format!(
                    "growth: order {}{}",
                    g.order.as_deref().unwrap_or("?"),
                    if g.exact == Some(true) { " (exact)" } else { "" }
                ),
            ),
            "hyper-order-exact" => push(
                &mut s,
                format!("growth: hyper-order = {}", g.hyper_order.unwrap_or(0)),
            ),
            "hyper-order-bound" => push(
                &mut s,
                format!("growth: hyper-order <= {}", g.hyper_order.unwrap_or(0)),
            ),
            _ => push(
                &mut s,
                format!("growth: unknown ({})", g.diagnostic.as_deref().unwrap_or("")),
            ),
        }
        push(&mut s, format!("  provenance: {}", g.provenance));
        for w in &g.warnings {
            push(&mut s, format!("  warning: {}", w));
        }
    }
    if let Some(io) = &r.infinite_order {
        push(
            &mut s,
            format!(
                "infinite-order scenarios: scenario1 = {}, scenario2 = {}",
                io.scenario1, io.scenario2
            ),
        );
        for d in &io.details {
            push(&mut s, format!("  {}", d));
        }
    }
    if let Some(v) = &r.verification {
        push(
            &mut s,
            format!(
                "verification [{}]: max residual {:.3e} (tolerance {:.1e}) — {}",
                v.form_label,
                v.max_residual,
                v.tolerance,
                if v.passed { "PASS" } else { "FAIL" }
            ),
        );
        for n in &v.notes {
            push(&mut s, format!("  note: {}", n));
        }
    }
    if let Some(se) = &r.series {
        push(
            &mut s,
            format!(
                "series at z0 = {} + {}i, order {}: back-substitution residual {:.3e}",
                se.z0[0], se.z0[1], se.truncation_order, se.back_substitution_residual
            ),
        );
        for (n, c) in se.coefficients.iter().enumerate().take(12) {
            push(&mut s, format!("  c[{}] = {:.12e} + {:.12e}i", n, c[0], c[1]));
        }
        if se.coefficients.len() > 12 {
            push(
                &mut s,
                format!("  ... ({} coefficients total)", se.coefficients.len()),
            );
        }
        if let Some(d) = se.compare_discrepancy {
            push(
                &mut s,
                format!(
                    "  closed-form comparison [{}]: max discrepancy {:.3e}",
                    se.compare_form.as_deref().unwrap_or("-"),
                    d
                ),
            );
        }
    }
    if let Some(oe) = &r.order_estimate {
        push(&mut s, format!("order estimate: sigma = {:.4}", oe.sigma));
        if let Some(h) = oe.hyper_slope {
            push(&mut s, format!("  hyper-order proxy slope = {:.4}", h));
        }
        for sample in &oe.samples {
            push(
                &mut s,
                format!(
                    "  nu({}) = {}",
                    sample.radius, sample.central_index
                ),
            );
        }
    }
    for w in &r.warnings {
        push(&mut s, format!("warning: {}", w));
    }
    s
}
