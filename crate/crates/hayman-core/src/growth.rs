//! Order and hyper-order of the transcendental meromorphic solutions,
//! derived from the primary classification branch.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::classify::{Branch, Classification, Coefficients};
use crate::ratfunc::RatFunc;
use crate::toolkit::{exp_integral_form, sqrt_q, ExpIntegralClass};
use crate::{qi, qr, Q};

#[derive(Debug, Clone, PartialEq)]
pub enum GrowthKind {
    /// Order of growth as an exact rational; `exact = false` marks values
    /// inferred for a degenerate family member (possibly rational w).
    FiniteOrder { order: Q, exact: bool },
    /// Hyper-order equals `n` exactly.
    HyperOrderExact { n: u32 },
    /// Hyper-order is at most `n` (solutions of infinite order exist in
    /// this branch; `n` bounds the second-level growth).
    HyperOrderBound { n: u32 },
    Unknown { diagnostic: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub kind: GrowthKind,
    /// Which branch and which formula produced the value.
    pub provenance: String,
    pub warnings: Vec<String>,
}

impl GrowthReport {
    fn new(kind: GrowthKind, provenance: String) -> Self {
        GrowthReport {
            kind,
            provenance,
            warnings: Vec::new(),
        }
    }
}

/// Growth of nontrivial solutions of `y' = f y` (`y = e^{int f}`).
#[derive(Debug, Clone, PartialEq)]
pub enum LinearGrowth {
    /// Order `1 + deg(poly part of f)`.
    Order(u32),
    /// `e^{int f}` is itself rational: order 0, solution not transcendental.
    OrderZeroRational(RatFunc),
    Branched(&'static str),
}

pub fn linear_ode_growth(f: &RatFunc) -> LinearGrowth {
    let p = f.poly_part();
    if let Some(d) = p.degree() {
        return LinearGrowth::Order(d as u32 + 1);
    }
    match exp_integral_form(f) {
        ExpIntegralClass::RationalU { u } => LinearGrowth::OrderZeroRational(u),
        ExpIntegralClass::MeromorphicUeV { v, .. } => {
            // Unreachable when the poly part is zero, but stay total.
            LinearGrowth::Order(v.degree().map(|d| d as u32).unwrap_or(0))
        }
        ExpIntegralClass::HalfIntegerAlgebroid { .. } => {
            LinearGrowth::Branched("half-integer residues: e^{int f} lives on a two-sheeted cover")
        }
        ExpIntegralClass::NotMeromorphic { reason, .. } => LinearGrowth::Branched(reason),
    }
}

/// Coefficient tuples for which the equation admits meromorphic solutions
/// of infinite order (so only hyper-order statements make sense).
#[derive(Debug, Clone, PartialEq)]
pub struct InfiniteOrderScenarios {
    /// `gamma = 0`, `alpha + beta' + a beta = 0`, and `a` does not vanish
    /// at infinity.
    pub scenario1: bool,
    /// `gamma != 0`, `alpha = beta = 0`,
    /// `2(a' + a^2 + b) + (gamma'/gamma)' + a gamma'/gamma = 0`, and `a`
    /// does not vanish at infinity.
    pub scenario2: bool,
    pub details: Vec<String>,
}

fn a_nonvanishing_at_infinity(a: &RatFunc) -> bool {
    match a.degree_at_infinity() {
        Ok((d, _)) => d >= 0,
        Err(_) => false, // a = 0
    }
}

pub fn infinite_order_scenarios(c: &Coefficients) -> InfiniteOrderScenarios {
    let mut details = Vec::new();
    let scenario1 = c.gamma.is_zero()
        && (&(&c.alpha + &c.beta.derivative()) + &(&c.a * &c.beta)).is_zero()
        && a_nonvanishing_at_infinity(&c.a);
    if scenario1 {
        details.push(String::from(
            "gamma = 0, alpha + beta' + a beta = 0, and a does not vanish at infinity: solutions w = e^{int h} shifts with transcendental h have infinite order",
        ));
    }
    let mut scenario2 = false;
    if !c.gamma.is_zero() && c.alpha.is_zero() && c.beta.is_zero() {
        let lg = c.gamma.derivative().div(&c.gamma).expect("gamma nonzero");
        let cond = &(&(&(&c.a.derivative() + &(&c.a * &c.a)) + &c.b) * &qi(2))
            + &(&lg.derivative() + &(&c.a * &lg));
        if cond.is_zero() && a_nonvanishing_at_infinity(&c.a) {
            scenario2 = true;
            details.push(String::from(
                "gamma != 0, alpha = beta = 0, 2(a' + a^2 + b) + (gamma'/gamma)' + a gamma'/gamma = 0, and a does not vanish at infinity: the e^{2 int a} factor forces infinite order",
            ));
        }
    }
    InfiniteOrderScenarios {
        scenario1,
        scenario2,
        details,
    }
}

/// Order of solutions of `w' = g w + forcing` with rational `g`, taking the
/// sign ambiguity of an irrational `k1` multiplier into account when the
/// coefficient is `base + k1 * r`.
fn reduced_linear_order(
    base: &RatFunc,
    scaled: Option<(&Q, &RatFunc)>, // (k1^2, r) with coefficient base + k1 r
    provenance: String,
) -> GrowthReport {
    if let Some((k1sq, r)) = scaled {
        if let Some(k1) = sqrt_q(&k1sq.abs()) {
            if k1sq.is_positive() || k1sq.is_zero() {
                // k1 rational: both sign choices are exact rational coefficients.
                let plus = base + &(r * &k1);
                let minus = base - &(r * &k1);
                let dp = degree_of_poly_part(&plus);
                let dm = degree_of_poly_part(&minus);
                let d = dp.max(dm);
                let mut rep = finite_from_ppart_degree(d, provenance);
                if dp != dm {
                    rep.warnings.push(String::from(
                        "the two sign choices of k1 give different orders; the larger (generic) one is reported",
                    ));
                }
                return rep;
            }
        }
        // Irrational or imaginary k1: the leading terms of base and k1 r
        // cannot cancel, so the degree is the max of the two poly parts.
        let d = degree_of_poly_part(base).max(degree_of_poly_part(r));
        return finite_from_ppart_degree(d, provenance);
    }
    finite_from_ppart_degree(degree_of_poly_part(base), provenance)
}

fn degree_of_poly_part(f: &RatFunc) -> Option<u32> {
    f.poly_part().degree().map(|d| d as u32)
}

fn finite_from_ppart_degree(d: Option<u32>, provenance: String) -> GrowthReport {
    match d {
        Some(d) => GrowthReport::new(
            GrowthKind::FiniteOrder {
                order: qi(1 + d as i64),
                exact: true,
            },
            provenance,
        ),
        None => {
            let mut rep = GrowthReport::new(
                GrowthKind::FiniteOrder {
                    order: qi(1),
                    exact: false,
                },
                provenance,
            );
            rep.warnings.push(String::from(
                "linear coefficient has no polynomial part: order is at most 1",
            ));
            rep
        }
    }
}

fn case3_growth(
    c: &Coefficients,
    rational_h: &Option<RatFunc>,
    search_incomplete: bool,
) -> GrowthReport {
    let p = c.a.poly_part();
    if let Some(d) = p.degree() {
        return GrowthReport::new(
            GrowthKind::HyperOrderBound {
                n: d as u32 + 1,
            },
            String::from(
                "branch (3) with a nonzero polynomial part of a: solutions of infinite order exist; hyper-order <= deg(poly part of a) + 1",
            ),
        );
    }
    match rational_h {
        Some(h) if !h.is_zero() => {
            let m1 = h.degree_at_infinity().expect("h nonzero").0;
            let order = m1 + 1;
            if order >= 1 {
                GrowthReport::new(
                    GrowthKind::FiniteOrder {
                        order: qi(order),
                        exact: true,
                    },
                    String::from(
                        "branch (3) with a vanishing at infinity: order = deg_inf(h) + 1 for the rational h of h' + a h + b = 0",
                    ),
                )
            } else {
                let mut rep = GrowthReport::new(
                    GrowthKind::FiniteOrder {
                        order: qi(0),
                        exact: false,
                    },
                    String::from("branch (3): rational h with deg_inf(h) + 1 <= 0"),
                );
                rep.warnings.push(String::from(
                    "deg_inf(h) < 0 makes e^{int h} of order 0; the corresponding solutions are not transcendental of positive order",
                ));
                rep
            }
        }
        _ => {
            let diag = if search_incomplete {
                "branch (3): rational h search hit its bounds before finding a solution"
            } else {
                "branch (3): no rational h exists, so no meromorphic h at all when a has no polynomial part; the branch family is empty"
            };
            GrowthReport::new(
                GrowthKind::Unknown {
                    diagnostic: String::from(diag),
                },
                String::from("branch (3) reduction h' + a h + b = 0"),
            )
        }
    }
}

/// Growth of the primary branch's solution family.
pub fn growth_report(cl: &Classification, c: &Coefficients) -> GrowthReport {
    let Some(primary) = cl.primary() else {
        return GrowthReport::new(
            GrowthKind::Unknown {
                diagnostic: String::from("no branch matched: nothing to measure"),
            },
            String::from("no classification branch"),
        );
    };
    match &primary.branch {
        Branch::Case1 => GrowthReport::new(
            GrowthKind::FiniteOrder {
                order: qi(1),
                exact: true,
            },
            String::from("branch (1): w = c1^{-2}(cosh(c1 z + c2) + 1) alpha has order 1"),
        ),
        Branch::Case2 { h } => match linear_ode_growth(&(-h)) {
            LinearGrowth::Order(n) => GrowthReport::new(
                GrowthKind::FiniteOrder {
                    order: qi(n as i64),
                    exact: true,
                },
                String::from(
                    "branch (2): w = e^{-int h}, order = deg(poly part of -h) + 1",
                ),
            ),
            LinearGrowth::OrderZeroRational(_) => {
                let mut rep = GrowthReport::new(
                    GrowthKind::FiniteOrder {
                        order: qi(0),
                        exact: false,
                    },
                    String::from("branch (2): e^{-int h} is rational"),
                );
                rep.warnings.push(String::from(
                    "the branch solutions are rational, not transcendental",
                ));
                rep
            }
            LinearGrowth::Branched(reason) => GrowthReport::new(
                GrowthKind::Unknown {
                    diagnostic: format!("branch (2): {}", reason),
                },
                String::from("branch (2) reduction w' + h w = 0"),
            ),
        },
        Branch::HomogeneousSpecial {
            rational_h,
            h_family,
        }
        | Branch::Case3 {
            rational_h,
            h_family,
        } => case3_growth(c, rational_h, h_family.incomplete_search),
        Branch::Case4 { h1, .. } => match linear_ode_growth(h1) {
            LinearGrowth::Order(n) => GrowthReport::new(
                GrowthKind::FiniteOrder {
                    order: qi(n as i64),
                    exact: true,
                },
                String::from(
                    "branch (4): homogeneous part e^{int h1}, order = deg(poly part of h1) + 1",
                ),
            ),
            LinearGrowth::OrderZeroRational(_) => {
                let mut rep = GrowthReport::new(
                    GrowthKind::FiniteOrder {
                        order: qi(0),
                        exact: false,
                    },
                    String::from("branch (4): e^{int h1} is rational"),
                );
                rep.warnings.push(String::from(
                    "the general solution is rational plus a rational multiple of a rational function: not transcendental",
                ));
                rep
            }
            LinearGrowth::Branched(reason) => GrowthReport::new(
                GrowthKind::Unknown {
                    diagnostic: format!("branch (4): {}", reason),
                },
                String::from("branch (4) reduction w' = h1 w + h2"),
            ),
        },
        Branch::Case5aRational { k1sq, big_r, .. } => {
            // u1 = k1^2 e^{-2 int a} = k1^2 / R; m3 = deg_inf(u1) = -deg_inf(R).
            let _ = k1sq;
            let m3 = -big_r.degree_at_infinity().expect("R nonzero").0;
            if m3 < -1 {
                let mut rep = GrowthReport::new(
                    GrowthKind::Unknown {
                        diagnostic: format!(
                            "branch (5a): deg_inf(k1^2 e^{{-2 int a}}) = {} < -1 contradicts the growth derivation",
                            m3
                        ),
                    },
                    String::from("branch (5a) order formula (m3 + 2)/2"),
                );
                rep.warnings.push(String::from(
                    "z * u1 -> 0 at infinity; the central-index argument does not apply",
                ));
                return rep;
            }
            GrowthReport::new(
                GrowthKind::FiniteOrder {
                    order: qr(m3 + 2, 2),
                    exact: true,
                },
                String::from(
                    "branch (5a), rational e^{2 int a}: order = (m3 + 2)/2 with m3 = deg_inf(k1^2 e^{-2 int a})",
                ),
            )
        }
        Branch::Case5aTranscendental { v1, .. } => {
            let m4 = v1.degree().map(|d| d as u32).unwrap_or(0);
            GrowthReport::new(
                GrowthKind::HyperOrderExact { n: m4 },
                String::from(
                    "branch (5a), transcendental e^{2 int a} = u1 e^{v1}: hyper-order = deg v1",
                ),
            )
        }
        Branch::Case5b {
            k1sq, exp_neg_a, ..
        } => {
            let cap_a = cl.derived.cap_a.clone().expect("gamma nonzero in case 5");
            let base = &(-&cap_a) * &qr(1, 2);
            match exp_neg_a {
                Some(r) => reduced_linear_order(
                    &base,
                    Some((k1sq, r)),
                    String::from(
                        "branch (5b): w' = (-A/2 + k1 e^{-int a}) w + shift terms; order = deg(poly part) + 1",
                    ),
                ),
                None => GrowthReport::new(
                    GrowthKind::Unknown {
                        diagnostic: String::from(
                            "branch (5b): e^{-int a} is not rational; the reduced linear coefficient is not rational",
                        ),
                    },
                    String::from("branch (5b) reduced linear equation"),
                ),
            }
        }
        Branch::Case5c { .. } => reduced_linear_order(
            &c.a,
            None,
            String::from(
                "branch (5c): generator equation H' = a H + k1; order = deg(poly part of a) + 1",
            ),
        ),
        Branch::Case5d { .. } | Branch::Case5e => {
            let cap_a = cl.derived.cap_a.clone().expect("gamma nonzero in case 5");
            let base = &(-&cap_a) * &qr(1, 2);
            reduced_linear_order(
                &base,
                None,
                String::from(
                    "branch (5d/5e): reduced equation w' + (A w + beta)/2 = forcing; order = deg(poly part of -A/2) + 1",
                ),
            )
        }
    }
}
