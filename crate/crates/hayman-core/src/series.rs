//! Numeric ground truth: Taylor-series integration of the equation at an
//! ordinary point, residual evaluation of closed-form candidates, and
//! empirical order estimation via the central index.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use crate::classify::{Branch, Classification, Coefficients, ExpADiagnostic};
use crate::error::SeriesError;
use crate::ratfunc::{ComplexValue, RatFunc};
use crate::toolkit::{
    exp_integral_form, rational_antiderivative, rational_solutions_linear_ode,
    ExpIntegralClass, OdeBounds,
};
use crate::{q_to_f64, Complex64, Q};

pub const EPS_POLE: f64 = 1e-9;

/// Truncated Taylor expansion `sum c_n (z - z0)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    pub z0: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl ComplexSeries {
    pub fn truncation_order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation from the highest coefficient down (fixed summation
    /// order: results are bitwise deterministic).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let d = z - self.z0;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * d + c;
        }
        acc
    }

    pub fn derivative(&self) -> ComplexSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c * n as f64)
            .collect();
        ComplexSeries {
            z0: self.z0,
            coeffs,
        }
    }
}

/// Taylor coefficients of `f` at a complex base point, or `None` near a pole.
fn complex_taylor(f: &RatFunc, z0: Complex64, n: usize) -> Option<Vec<Complex64>> {
    fn shifted(p: &crate::poly::Poly, z0: Complex64, len: usize) -> Vec<Complex64> {
        let mut c: Vec<Complex64> = (0..len)
            .map(|i| {
                let q = p.coeff(i);
                Complex64::new(q_to_f64(&q), 0.0)
            })
            .collect();
        // In-place synthetic shift: c becomes the coefficients of p(z + z0).
        for k in 0..c.len() {
            for j in (k..c.len() - 1).rev() {
                let t = c[j + 1] * z0;
                c[j] += t;
            }
        }
        c
    }
    let len = n + 1;
    let num_len = f.numer().coeffs().len().max(len);
    let den_len = f.denom().coeffs().len().max(len);
    let num = shifted(f.numer(), z0, num_len);
    let den = shifted(f.denom(), z0, den_len);
    if den[0].norm() < EPS_POLE {
        return None;
    }
    // Power-series division num/den to order n.
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for k in 0..len {
        let mut acc = if k < num.len() {
            num[k]
        } else {
            Complex64::new(0.0, 0.0)
        };
        for j in 1..=k {
            if j < den.len() {
                acc -= den[j] * out[k - j];
            }
        }
        out[k] = acc / den[0];
    }
    Some(out)
}

fn recurrence(
    ac: &[Complex64],
    bc: &[Complex64],
    alc: &[Complex64],
    bec: &[Complex64],
    gac: &[Complex64],
    w0: Complex64,
    w1: Complex64,
    n: usize,
) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut c = vec![zero; n + 1];
    c[0] = w0;
    if n >= 1 {
        c[1] = w1;
    }
    for m in 0..=n.saturating_sub(2) {
        // Known part of the w''w convolution (the i = m term holds the
        // unknown c_{m+2}).
        let mut t1 = zero;
        for j in 1..=m {
            let i = m - j;
            t1 += c[i + 2] * (((i + 2) * (i + 1)) as f64) * c[j];
        }
        let mut t2 = zero;
        for i in 0..=m {
            let j = m - i;
            t2 += c[i + 1] * (((i + 1) * (j + 1)) as f64) * c[j + 1];
        }
        let mut t3 = zero;
        for k in 0..=m {
            for i in 0..=(m - k) {
                let j = m - k - i;
                t3 += ac[k] * c[i + 1] * ((i + 1) as f64) * c[j];
            }
        }
        let mut t4 = zero;
        for k in 0..=m {
            for i in 0..=(m - k) {
                t4 += bc[k] * c[i] * c[m - k - i];
            }
        }
        let mut t5 = zero;
        for k in 0..=m {
            t5 += alc[k] * c[m - k];
        }
        let mut t6 = zero;
        for k in 0..m {
            t6 += bec[k] * c[m - k] * ((m - k) as f64);
        }
        t6 += bec[m] * c[1];
        let t7 = gac[m];
        c[m + 2] = (t2 - t3 - t4 + t5 + t6 + t7 - t1) / (c[0] * (((m + 2) * (m + 1)) as f64));
    }
    c
}

fn expand_coeff(
    f: &RatFunc,
    z0: Complex64,
    z0_exact: Option<&Q>,
    n: usize,
) -> Result<Vec<Complex64>, SeriesError> {
    if let Some(zq) = z0_exact {
        let exact = f.taylor_q(zq, n).map_err(|_| SeriesError::PoleAtBasePoint)?;
        return Ok(exact
            .iter()
            .map(|q| Complex64::new(q_to_f64(q), 0.0))
            .collect());
    }
    complex_taylor(f, z0, n).ok_or(SeriesError::PoleAtBasePoint)
}

/// Series solution of the equation at the ordinary point `z0` with initial
/// data `w(z0) = w0 != 0`, `w'(z0) = w1`. Real base points that come from
/// exact rationals expand the coefficient functions exactly before a single
/// rounding.
pub fn taylor_solve(
    c: &Coefficients,
    z0: Complex64,
    w0: Complex64,
    w1: Complex64,
    n: usize,
) -> Result<ComplexSeries, SeriesError> {
    if w0.norm() == 0.0 {
        return Err(SeriesError::ZeroInitialValue);
    }
    let z0_exact = if z0.im == 0.0 {
        Q::from_float(z0.re)
    } else {
        None
    };
    // Fully rational initial data: run the recurrence in exact arithmetic and
    // round once at the end.  The f64 recurrence has an absolute noise floor
    // that decays far slower than the true coefficients of entire solutions,
    // which would corrupt central-index readings at large radii.
    if w0.im == 0.0 && w1.im == 0.0 {
        if let (Some(zq), Some(w0q), Some(w1q)) = (
            z0_exact.clone(),
            Q::from_float(w0.re),
            Q::from_float(w1.re),
        ) {
            let exact = taylor_solve_exact(c, &zq, &w0q, &w1q, n)?;
            let coeffs = exact
                .iter()
                .map(|q| Complex64::new(q_to_f64(q), 0.0))
                .collect();
            return Ok(ComplexSeries { z0, coeffs });
        }
    }
    let ac = expand_coeff(&c.a, z0, z0_exact.as_ref(), n)?;
    let bc = expand_coeff(&c.b, z0, z0_exact.as_ref(), n)?;
    let alc = expand_coeff(&c.alpha, z0, z0_exact.as_ref(), n)?;
    let bec = expand_coeff(&c.beta, z0, z0_exact.as_ref(), n)?;
    let gac = expand_coeff(&c.gamma, z0, z0_exact.as_ref(), n)?;
    let coeffs = recurrence(&ac, &bc, &alc, &bec, &gac, w0, w1, n);
    Ok(ComplexSeries { z0, coeffs })
}

/// Exact-rational variant of [`taylor_solve`] for rational initial data;
/// used as the test oracle.
pub fn taylor_solve_exact(
    c: &Coefficients,
    z0: &Q,
    w0: &Q,
    w1: &Q,
    n: usize,
) -> Result<Vec<Q>, SeriesError> {
    if w0.is_zero() {
        return Err(SeriesError::ZeroInitialValue);
    }
    let expand = |f: &RatFunc| -> Result<Vec<Q>, SeriesError> {
        f.taylor_q(z0, n).map_err(|_| SeriesError::PoleAtBasePoint)
    };
    let ac = expand(&c.a)?;
    let bc = expand(&c.b)?;
    let alc = expand(&c.alpha)?;
    let bec = expand(&c.beta)?;
    let gac = expand(&c.gamma)?;
    let zero = Q::zero();
    let mut cs = vec![zero.clone(); n + 1];
    cs[0] = w0.clone();
    if n >= 1 {
        cs[1] = w1.clone();
    }
    for m in 0..=n.saturating_sub(2) {
        let mut acc = Q::zero();
        for j in 1..=m {
            let i = m - j;
            if !cs[i + 2].is_zero() && !cs[j].is_zero() {
                acc -= &cs[i + 2] * crate::qi(((i + 2) * (i + 1)) as i64) * &cs[j];
            }
        }
        for i in 0..=m {
            let j = m - i;
            if !cs[i + 1].is_zero() && !cs[j + 1].is_zero() {
                acc += &cs[i + 1] * crate::qi(((i + 1) * (j + 1)) as i64) * &cs[j + 1];
            }
        }
        for k in 0..=m {
            let skip_a = ac[k].is_zero();
            let skip_b = bc[k].is_zero();
            if skip_a && skip_b {
                continue;
            }
            for i in 0..=(m - k) {
                let j = m - k - i;
                if !skip_a && !cs[i + 1].is_zero() && !cs[j].is_zero() {
                    acc -= &ac[k] * &cs[i + 1] * crate::qi((i + 1) as i64) * &cs[j];
                }
                if !skip_b && !cs[i].is_zero() && !cs[j].is_zero() {
                    acc -= &bc[k] * &cs[i] * &cs[j];
                }
            }
        }
        for k in 0..=m {
            if !alc[k].is_zero() {
                acc += &alc[k] * &cs[m - k];
            }
            if !bec[k].is_zero() {
                if m - k >= 1 {
                    acc += &bec[k] * &cs[m - k + 1] * crate::qi((m - k + 1) as i64);
                } else {
                    acc += &bec[k] * &cs[1];
                }
            }
        }
        acc += &gac[m];
        cs[m + 2] = acc / (&cs[0] * crate::qi(((m + 2) * (m + 1)) as i64));
    }
    Ok(cs)
}

/// Closed-form expression tree, evaluable with exact symbolic derivatives.
#[derive(Debug, Clone)]
pub enum FormExpr {
    Const(Complex64),
    Rat(RatFunc),
    Exp(Box<FormExpr>),
    Cosh(Box<FormExpr>),
    Sinh(Box<FormExpr>),
    Sum(Vec<FormExpr>),
    Prod(Vec<FormExpr>),
    /// Entire function given by a truncated power series (termwise
    /// differentiable); used for forms that are not elementary in rational
    /// data, such as two-sheeted cosh combinations.
    Series(ComplexSeries),
}

impl FormExpr {
    pub fn eval(&self, z: Complex64, eps_pole: f64) -> Option<Complex64> {
        match self {
            FormExpr::Const(c) => Some(*c),
            FormExpr::Rat(f) => match f.eval_complex(z, eps_pole) {
                ComplexValue::Value(v) => Some(v),
                ComplexValue::NearPole => None,
            },
            FormExpr::Exp(g) => Some(g.eval(z, eps_pole)?.exp()),
            FormExpr::Cosh(g) => Some(g.eval(z, eps_pole)?.cosh()),
            FormExpr::Sinh(g) => Some(g.eval(z, eps_pole)?.sinh()),
            FormExpr::Sum(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in terms {
                    acc += t.eval(z, eps_pole)?;
                }
                Some(acc)
            }
            FormExpr::Prod(factors) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for t in factors {
                    acc *= t.eval(z, eps_pole)?;
                }
                Some(acc)
            }
            FormExpr::Series(s) => Some(s.eval(z)),
        }
    }

    pub fn deriv(&self) -> FormExpr {
        match self {
            FormExpr::Const(_) => FormExpr::Const(Complex64::new(0.0, 0.0)),
            FormExpr::Rat(f) => FormExpr::Rat(f.derivative()),
            FormExpr::Exp(g) => {
                FormExpr::Prod(vec![g.deriv(), FormExpr::Exp(g.clone())])
            }
            FormExpr::Cosh(g) => {
                FormExpr::Prod(vec![g.deriv(), FormExpr::Sinh(g.clone())])
            }
            FormExpr::Sinh(g) => {
                FormExpr::Prod(vec![g.deriv(), FormExpr::Cosh(g.clone())])
            }
            FormExpr::Sum(terms) => FormExpr::Sum(terms.iter().map(|t| t.deriv()).collect()),
            FormExpr::Prod(factors) => {
                let mut terms = Vec::with_capacity(factors.len());
                for (i, _) in factors.iter().enumerate() {
                    let mut fs = factors.clone();
                    fs[i] = fs[i].deriv();
                    terms.push(FormExpr::Prod(fs));
                }
                FormExpr::Sum(terms)
            }
            FormExpr::Series(s) => FormExpr::Series(s.derivative()),
        }
    }
}

/// A branch closed form with its free constants instantiated.
#[derive(Debug, Clone)]
pub struct SolutionFormInstance {
    pub label: String,
    pub expr: FormExpr,
    pub notes: Vec<String>,
}

/// Free constants of the closed-form families. `k1` overrides the square
/// root of the branch's `k1^2` when set.
#[derive(Debug, Clone)]
pub struct FormConstants {
    pub c1: Complex64,
    pub c2: Complex64,
    pub k1: Option<Complex64>,
    /// Scale of the homogeneous part in linear reductions.
    pub scale: Complex64,
}

impl Default for FormConstants {
    fn default() -> Self {
        FormConstants {
            c1: Complex64::new(0.0, 0.0),
            c2: Complex64::new(0.0, 0.0),
            k1: None,
            scale: Complex64::new(1.0, 0.0),
        }
    }
}

fn complex_sqrt_q(q: &Q) -> Complex64 {
    Complex64::new(q_to_f64(q), 0.0).sqrt()
}

fn exp_of_poly(v: &crate::poly::Poly) -> FormExpr {
    FormExpr::Exp(Box::new(FormExpr::Rat(RatFunc::from_poly(v.clone()))))
}

/// General solution form `scale * u e^v + particular` of `w' = p w + q`, when
/// the homogeneous factor is meromorphic and a rational particular solution
/// exists (or `q = 0`).
fn linear_reduction_form(p: &RatFunc, q: &RatFunc, scale: Complex64) -> Option<FormExpr> {
    let (u, v) = match exp_integral_form(p) {
        ExpIntegralClass::RationalU { u } => (u, crate::poly::Poly::zero()),
        ExpIntegralClass::MeromorphicUeV { u, v } => (u, v),
        _ => return None,
    };
    let mut hom = vec![FormExpr::Const(scale), FormExpr::Rat(u)];
    if !v.is_zero() {
        hom.push(exp_of_poly(&v));
    }
    let mut terms = vec![FormExpr::Prod(hom)];
    if !q.is_zero() {
        let sols = rational_solutions_linear_ode(p, q, OdeBounds::default());
        let part = sols.particular?;
        terms.push(FormExpr::Rat(part));
    }
    Some(FormExpr::Sum(terms))
}

/// Instantiate the closed form of a classification branch, if it has one
/// expressible over the rationals. Branches whose form needs a transcendental
/// auxiliary function (case 3 without rational h, transcendental case 5(a),
/// case 5(c)) return `None`.
pub fn solution_form(
    c: &Coefficients,
    cl: &Classification,
    branch: &Branch,
    constants: &FormConstants,
) -> Option<SolutionFormInstance> {
    let mut notes = Vec::new();
    let expr = match branch {
        Branch::Case1 => {
            let mut c1 = constants.c1;
            if c1.norm() == 0.0 {
                c1 = Complex64::new(1.0, 0.0);
                notes.push(String::from("c1 = 0 degenerates the cosh form; using c1 = 1"));
            }
            let arg = FormExpr::Sum(vec![
                FormExpr::Prod(vec![FormExpr::Const(c1), FormExpr::Rat(RatFunc::var())]),
                FormExpr::Const(constants.c2),
            ]);
            FormExpr::Prod(vec![
                FormExpr::Const(Complex64::new(1.0, 0.0) / (c1 * c1)),
                FormExpr::Sum(vec![
                    FormExpr::Cosh(Box::new(arg)),
                    FormExpr::Const(Complex64::new(1.0, 0.0)),
                ]),
                FormExpr::Rat(c.alpha.clone()),
            ])
        }
        Branch::Case2 { h } => linear_reduction_form(&(-h), &RatFunc::zero(), constants.scale)?,
        Branch::HomogeneousSpecial { rational_h, .. } => {
            let h = rational_h.as_ref()?;
            linear_reduction_form(h, &RatFunc::zero(), constants.scale)?
        }
        Branch::Case3 { rational_h, .. } => {
            let h = rational_h.as_ref()?;
            linear_reduction_form(h, &(-&c.beta), constants.scale)?
        }
        Branch::Case4 { h1, h2, .. } => linear_reduction_form(h1, h2, constants.scale)?,
        Branch::Case5aRational {
            k1sq,
            k2sq,
            big_r,
            exp_a,
            ..
        } => {
            let r_inv = match exp_a {
                ExpADiagnostic::Rational(u) => u.recip().ok()?,
                ExpADiagnostic::Algebroid => return None,
            };
            // T = int e^{-int a} dz must be rational for an elementary form.
            let t = rational_antiderivative(&r_inv)?;
            let cap_a = cl.derived.cap_a.as_ref()?;
            let half = crate::qr(1, 2);
            let p_exp = match exp_integral_form(&(&(-cap_a) * &half)) {
                ExpIntegralClass::RationalU { u } => FormExpr::Rat(u),
                ExpIntegralClass::MeromorphicUeV { u, v } => {
                    FormExpr::Prod(vec![FormExpr::Rat(u), exp_of_poly(&v)])
                }
                _ => return None,
            };
            let k1 = constants.k1.unwrap_or_else(|| complex_sqrt_q(k1sq));
            let k2 = complex_sqrt_q(k2sq);
            // shift = -(beta A/2 - B) R / (2 k1^2)
            let b_a2_minus_b =
                &(&(&c.beta * cap_a) * &half) - &cl.derived.cap_b;
            let shift = &(&(-&b_a2_minus_b) * big_r) * &half;
            let arg = FormExpr::Sum(vec![
                FormExpr::Const(constants.c1),
                FormExpr::Prod(vec![FormExpr::Const(-k1), FormExpr::Rat(t)]),
            ]);
            FormExpr::Sum(vec![
                FormExpr::Prod(vec![
                    FormExpr::Const(k2),
                    FormExpr::Cosh(Box::new(arg)),
                    p_exp,
                ]),
                FormExpr::Prod(vec![
                    FormExpr::Const(Complex64::new(1.0, 0.0) / (k1 * k1)),
                    FormExpr::Rat(shift),
                ]),
            ])
        }
        Branch::Case5b {
            k1sq,
            big_r,
            exp_neg_a,
            ..
        } => {
            // w = e^{int(-A/2 + k1 e^{-int a})} - (beta A/2 - B) R/(2 k1^2).
            let r_inv = exp_neg_a.as_ref()?;
            let t = rational_antiderivative(r_inv)?;
            let cap_a = cl.derived.cap_a.as_ref()?;
            let half = crate::qr(1, 2);
            let base = match exp_integral_form(&(&(-cap_a) * &half)) {
                ExpIntegralClass::RationalU { u } => FormExpr::Rat(u),
                ExpIntegralClass::MeromorphicUeV { u, v } => {
                    FormExpr::Prod(vec![FormExpr::Rat(u), exp_of_poly(&v)])
                }
                _ => return None,
            };
            let k1 = constants.k1.unwrap_or_else(|| complex_sqrt_q(k1sq));
            let b_a2_minus_b =
                &(&(&c.beta * cap_a) * &half) - &cl.derived.cap_b;
            let shift = &(&(-&b_a2_minus_b) * big_r) * &half;
            FormExpr::Sum(vec![
                FormExpr::Prod(vec![
                    base,
                    FormExpr::Exp(Box::new(FormExpr::Prod(vec![
                        FormExpr::Const(k1),
                        FormExpr::Rat(t),
                    ]))),
                ]),
                FormExpr::Prod(vec![
                    FormExpr::Const(Complex64::new(1.0, 0.0) / (k1 * k1)),
                    FormExpr::Rat(shift),
                ]),
            ])
        }
        Branch::Case5d { k1sq, .. } => {
            // w' + (A w + beta)/2 = k1 e^{-int(A/2 + a)}: build
            // scale * hom + p0 + k1 p1 from rational pieces.
            let cap_a = cl.derived.cap_a.as_ref()?;
            let half = crate::qr(1, 2);
            let p = &(-cap_a) * &half;
            let forcing_base = exp_integral_form(&(-&(&(cap_a * &half) + &c.a)))
                .rational_u()
                .cloned()?;
            let bounds = OdeBounds::default();
            let hom = linear_reduction_form(&p, &RatFunc::zero(), constants.scale)?;
            let mut terms = vec![hom];
            let q0 = &(-&c.beta) * &half;
            if !q0.is_zero() {
                let p0 = rational_solutions_linear_ode(&p, &q0, bounds.clone()).particular?;
                terms.push(FormExpr::Rat(p0));
            }
            let p1 = rational_solutions_linear_ode(&p, &forcing_base, bounds).particular?;
            let k1 = constants.k1.unwrap_or_else(|| complex_sqrt_q(k1sq));
            terms.push(FormExpr::Prod(vec![FormExpr::Const(k1), FormExpr::Rat(p1)]));
            FormExpr::Sum(terms)
        }
        Branch::Case5e => {
            let cap_a = cl.derived.cap_a.as_ref()?;
            let half = crate::qr(1, 2);
            linear_reduction_form(
                &(&(-cap_a) * &half),
                &(&(-&c.beta) * &half),
                constants.scale,
            )?
        }
        Branch::Case5aTranscendental { .. } | Branch::Case5c { .. } => return None,
    };
    Some(SolutionFormInstance {
        label: String::from(branch.label()),
        expr,
        notes,
    })
}

/// Deterministic annulus sample around `center`.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub center: Complex64,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub eps_pole: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            center: Complex64::new(0.0, 0.0),
            r_min: 0.5,
            r_max: 2.0,
            points: 100,
            eps_pole: EPS_POLE,
        }
    }
}

impl GridSpec {
    pub fn points_iter(&self) -> impl Iterator<Item = Complex64> + '_ {
        let n = self.points.max(1);
        (0..n).map(move |k| {
            let frac = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
            let r = self.r_min + (self.r_max - self.r_min) * frac;
            // Golden-angle placement spreads angles over the annulus.
            let theta = 2.0 * core::f64::consts::PI * 0.618_033_988_749_894_9 * k as f64;
            self.center + Complex64::new(r * libm::cos(theta), r * libm::sin(theta))
        })
    }
}

/// Maximum over the grid of
/// `|w''w - w'^2 + a w'w + b w^2 - alpha w - beta w' - gamma| / (1 + |w|^2)`.
pub fn residual_check(
    c: &Coefficients,
    form: &SolutionFormInstance,
    grid: &GridSpec,
) -> Result<f64, SeriesError> {
    let w = &form.expr;
    let w1 = w.deriv();
    let w2 = w1.deriv();
    let eps = grid.eps_pole;
    let mut max_res: Option<f64> = None;
    for z in grid.points_iter() {
        let coeffs: Option<Vec<Complex64>> = [&c.a, &c.b, &c.alpha, &c.beta, &c.gamma]
            .iter()
            .map(|f| match f.eval_complex(z, eps) {
                ComplexValue::Value(v) => Some(v),
                ComplexValue::NearPole => None,
            })
            .collect();
        let Some(cv) = coeffs else { continue };
        let (Some(wv), Some(w1v), Some(w2v)) =
            (w.eval(z, eps), w1.eval(z, eps), w2.eval(z, eps))
        else {
            continue;
        };
        if wv.norm() < eps {
            continue; // grid precondition: avoid zeros of w
        }
        let lhs = w2v * wv - w1v * w1v + cv[0] * w1v * wv + cv[1] * wv * wv;
        let rhs = cv[2] * wv + cv[3] * w1v + cv[4];
        let res = (lhs - rhs).norm() / (1.0 + wv.norm_sqr());
        max_res = Some(match max_res {
            Some(m) if m >= res => m,
            _ => res,
        });
    }
    max_res.ok_or(SeriesError::AllPointsExcluded)
}

/// Central index: argmax over n of |c_n| r^n, ties broken to the largest
/// index. Errors when the maximum falls outside the reliable zone
/// (index > 0.8 N), i.e. the truncation dominates.
pub fn central_index(s: &ComplexSeries, r: f64) -> Result<usize, SeriesError> {
    let mut best = 0usize;
    let mut best_log = f64::NEG_INFINITY;
    let log_r = libm::log(r);
    for (n, c) in s.coeffs.iter().enumerate() {
        let m = c.norm();
        if m == 0.0 {
            continue;
        }
        let val = libm::log(m) + n as f64 * log_r;
        if val >= best_log {
            best_log = val;
            best = n;
        }
    }
    let n_max = s.truncation_order();
    if best as f64 > 0.8 * n_max as f64 {
        return Err(SeriesError::TruncationDominated { radius_index: 0 });
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderEstimate {
    /// Least-squares slope of log nu(r) against log r.
    pub sigma: f64,
    /// Slope of log log nu(r) against log r, when nu >= 2 at every radius.
    pub hyper_slope: Option<f64>,
    /// The accepted (radius, central index) samples.
    pub samples: Vec<(f64, usize)>,
}

fn lsq_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

pub fn order_estimate(s: &ComplexSeries, radii: &[f64]) -> Result<OrderEstimate, SeriesError> {
    let mut samples = Vec::new();
    for (idx, &r) in radii.iter().enumerate() {
        match central_index(s, r) {
            Ok(nu) if nu >= 1 => samples.push((r, nu)),
            Ok(_) => {}
            Err(SeriesError::TruncationDominated { .. }) => {
                return Err(SeriesError::TruncationDominated { radius_index: idx })
            }
            Err(e) => return Err(e),
        }
    }
    if samples.len() < 3 {
        return Err(SeriesError::NotEnoughRadii);
    }
    let xs: Vec<f64> = samples.iter().map(|(r, _)| libm::log(*r)).collect();
    let ys: Vec<f64> = samples
        .iter()
        .map(|(_, nu)| libm::log(*nu as f64))
        .collect();
    let sigma = lsq_slope(&xs, &ys);
    let hyper_slope = if samples.iter().all(|(_, nu)| *nu >= 2) {
        let yys: Vec<f64> = samples
            .iter()
            .map(|(_, nu)| libm::log(libm::log(*nu as f64)))
            .collect();
        Some(lsq_slope(&xs, &yys))
    } else {
        None
    };
    Ok(OrderEstimate {
        sigma,
        hyper_slope,
        samples,
    })
}

/// Max over sample points on two circles |z - z0| in {radius/2, radius} of
/// |series(z) - form(z)| / (1 + |form(z)|).
pub fn compare(
    s: &ComplexSeries,
    form: &SolutionFormInstance,
    radius: f64,
    eps_pole: f64,
) -> Result<f64, SeriesError> {
    let mut max_d: Option<f64> = None;
    for &r in &[radius * 0.5, radius] {
        for k in 0..32usize {
            let theta = 2.0 * core::f64::consts::PI * k as f64 / 32.0;
            let z = s.z0 + Complex64::new(r * libm::cos(theta), r * libm::sin(theta));
            let Some(fv) = form.expr.eval(z, eps_pole) else {
                continue;
            };
            let sv = s.eval(z);
            let d = (sv - fv).norm() / (1.0 + fv.norm());
            max_d = Some(match max_d {
                Some(m) if m >= d => m,
                _ => d,
            });
        }
    }
    max_d.ok_or(SeriesError::AllPointsExcluded)
}

/// Series re-expansion of both sides of the equation from a solved series;
/// returns the maximum relative coefficient mismatch up to order N - 2.
pub fn back_substitution_residual(
    c: &Coefficients,
    s: &ComplexSeries,
) -> Result<f64, SeriesError> {
    let n = s.truncation_order();
    let z0 = s.z0;
    let z0_exact = if z0.im == 0.0 {
        Q::from_float(z0.re)
    } else {
        None
    };
    let ac = expand_coeff(&c.a, z0, z0_exact.as_ref(), n)?;
    let bc = expand_coeff(&c.b, z0, z0_exact.as_ref(), n)?;
    let alc = expand_coeff(&c.alpha, z0, z0_exact.as_ref(), n)?;
    let bec = expand_coeff(&c.beta, z0, z0_exact.as_ref(), n)?;
    let gac = expand_coeff(&c.gamma, z0, z0_exact.as_ref(), n)?;
    let w = &s.coeffs;
    let d1: Vec<Complex64> = (1..=n).map(|i| w[i] * i as f64).collect();
    let d2: Vec<Complex64> = (2..=n)
        .map(|i| w[i] * (i * (i - 1)) as f64)
        .collect();
    let mul = |p: &[Complex64], q: &[Complex64], upto: usize| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); upto + 1];
        for (i, pi) in p.iter().enumerate() {
            if i > upto {
                break;
            }
            for (j, qj) in q.iter().enumerate() {
                if i + j > upto {
                    break;
                }
                out[i + j] += pi * qj;
            }
        }
        out
    };
    let upto = n.saturating_sub(2);
    let w2w = mul(&d2, w, upto);
    let w1w1 = mul(&d1, &d1, upto);
    let aw1w = mul(&ac, &mul(&d1, w, upto), upto);
    let bww = mul(&bc, &mul(w, w, upto), upto);
    let alw = mul(&alc, w, upto);
    let bew1 = mul(&bec, &d1, upto);
    let mut max_rel: f64 = 0.0;
    for m in 0..=upto {
        let lhs = w2w[m] - w1w1[m] + aw1w[m] + bww[m];
        let rhs = alw[m] + bew1[m] + gac[m];
        let scale = 1.0 + lhs.norm().max(rhs.norm());
        let rel = (lhs - rhs).norm() / scale;
        if rel > max_rel {
            max_rel = rel;
        }
    }
    Ok(max_rel)
}

/// Irrational-power series oracle: the entire function
/// `sum_n t^(2n+1) z^(3n+1) / (2n+1)!` with `t = 2/3`, i.e.
/// `sinh((2/3) z^(3/2)) / sqrt(z)` read through its power series.
pub fn half_integer_catalog_series(n: usize) -> ComplexSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    let t = 2.0 / 3.0;
    let mut term = t; // t^(2k+1)/(2k+1)! at k = 0
    let mut k = 0usize;
    loop {
        let idx = 3 * k + 1;
        if idx > n {
            break;
        }
        coeffs[idx] = Complex64::new(term, 0.0);
        k += 1;
        term *= t * t / ((2 * k) as f64 * (2 * k + 1) as f64);
    }
    ComplexSeries {
        z0: Complex64::new(0.0, 0.0),
        coeffs,
    }
}

/// Evaluate a series-backed form for use in residual checks: wraps an
/// entire-series solution as a [`SolutionFormInstance`].
pub fn series_form(label: &str, s: ComplexSeries) -> SolutionFormInstance {
    SolutionFormInstance {
        label: String::from(label),
        expr: FormExpr::Series(s),
        notes: Vec::new(),
    }
}

/// Convenience: f64 of a usize-safe rational (for CLI reporting).
pub fn q_as_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::poly::Poly;
    use crate::{qi, qr};

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_i64(n), Poly::from_i64(d)).unwrap()
    }

    fn zeros() -> RatFunc {
        RatFunc::zero()
    }

    fn coeffs(
        a: RatFunc,
        b: RatFunc,
        alpha: RatFunc,
        beta: RatFunc,
        gamma: RatFunc,
    ) -> Coefficients {
        Coefficients::new(a, b, alpha, beta, gamma)
    }

    fn cx(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn taylor_cosh_plus_one() {
        // (0,0,1,0,0), w0 = 2, w1 = 0: series of cosh(z) + 1.
        let c = coeffs(zeros(), zeros(), RatFunc::one(), zeros(), zeros());
        let exact = taylor_solve_exact(&c, &qi(0), &qi(2), &qi(0), 8).unwrap();
        assert_eq!(exact[0], qi(2));
        assert_eq!(exact[1], qi(0));
        assert_eq!(exact[2], qr(1, 2));
        assert_eq!(exact[3], qi(0));
        assert_eq!(exact[4], qr(1, 24));
        assert_eq!(exact[6], qr(1, 720));

        let s = taylor_solve(&c, cx(0.0), cx(2.0), cx(0.0), 8).unwrap();
        assert!((s.coeffs[4].re - 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn taylor_rejects_bad_initial_data() {
        let c = coeffs(zeros(), zeros(), RatFunc::one(), zeros(), zeros());
        assert!(matches!(
            taylor_solve(&c, cx(0.0), cx(0.0), cx(1.0), 8),
            Err(SeriesError::ZeroInitialValue)
        ));
        // pole of 1/z at z0 = 0
        let c = coeffs(rf(&[1], &[0, 1]), zeros(), RatFunc::one(), zeros(), zeros());
        assert!(matches!(
            taylor_solve(&c, cx(0.0), cx(1.0), cx(0.0), 8),
            Err(SeriesError::PoleAtBasePoint)
        ));
    }

    #[test]
    fn taylor_e_to_ez() {
        // (-1,0,0,0,0) at z0 = 0 with w0 = w1 = e: series of e^{e^z},
        // c_n = e * Bell(n)/n!.
        let c = coeffs(RatFunc::from_i64(-1), zeros(), zeros(), zeros(), zeros());
        let e = libm::exp(1.0);
        let s = taylor_solve(&c, cx(0.0), cx(e), cx(e), 15).unwrap();
        // Bell numbers via the recurrence B_{n+1} = sum C(n,k) B_k.
        let mut bell = vec![1.0f64; 16];
        for n in 0..15 {
            let mut acc = 0.0;
            let mut binom = 1.0f64;
            for k in 0..=n {
                acc += binom * bell[k];
                binom = binom * (n - k) as f64 / (k + 1) as f64;
            }
            bell[n + 1] = acc;
        }
        let mut fact = 1.0f64;
        for n in 0..=15 {
            if n > 0 {
                fact *= n as f64;
            }
            let expect = e * bell[n] / fact;
            assert!(
                (s.coeffs[n].re - expect).abs() <= 1e-8 * expect.abs(),
                "n = {}: {} vs {}",
                n,
                s.coeffs[n].re,
                expect
            );
        }
    }

    #[test]
    fn taylor_case4_exp_z() {
        // (0,0,1-z,0,-z^2) at z0 = 1, w0 = e - 2, w1 = e - 1: w = e^z - z - 1.
        let c = coeffs(zeros(), zeros(), rf(&[1, -1], &[1]), zeros(), rf(&[0, 0, -1], &[1]));
        let e = libm::exp(1.0);
        let s = taylor_solve(&c, cx(1.0), cx(e - 2.0), cx(e - 1.0), 20).unwrap();
        // c_n = e/n! for n >= 2.
        let mut fact = 2.0f64;
        for n in 2..=10 {
            if n > 2 {
                fact *= n as f64;
            }
            assert!((s.coeffs[n].re - e / fact).abs() < 1e-10);
        }
        assert!(back_substitution_residual(&c, &s).unwrap() < 1e-8);
    }

    #[test]
    fn complex_base_point() {
        // w''w - w'^2 = 1 at z0 = i, w = (1/2)cosh(2z):
        let c = coeffs(zeros(), zeros(), zeros(), zeros(), RatFunc::one());
        let z0 = Complex64::new(0.0, 1.0);
        let w0 = (z0 * 2.0).cosh() * 0.5;
        let w1 = (z0 * 2.0).sinh();
        let s = taylor_solve(&c, z0, w0, w1, 24).unwrap();
        let z = Complex64::new(0.3, 1.2);
        let expect = (z * 2.0).cosh() * 0.5;
        assert!((s.eval(z) - expect).norm() < 1e-9);
    }

    #[test]
    fn residual_of_case1_form() {
        let c = coeffs(zeros(), zeros(), RatFunc::one(), zeros(), zeros());
        let cl = classify(&c);
        let branch = cl.primary().unwrap().branch.clone();
        let mut consts = FormConstants::default();
        consts.c1 = cx(1.0);
        let form = solution_form(&c, &cl, &branch, &consts).unwrap();
        let res = residual_check(&c, &form, &GridSpec::default()).unwrap();
        assert!(res < 1e-9, "residual {}", res);

        // Deliberately wrong instance: w = cosh(z) alone.
        let wrong = SolutionFormInstance {
            label: String::from("wrong"),
            expr: FormExpr::Cosh(Box::new(FormExpr::Rat(RatFunc::var()))),
            notes: Vec::new(),
        };
        let res = residual_check(&c, &wrong, &GridSpec::default()).unwrap();
        assert!(res > 1e-2, "wrong-form residual {}", res);
    }

    #[test]
    fn residual_of_case5a_forms() {
        // w''w - w'^2 = 1 with k1 = 2: w = (1/2) cosh(2z).
        let c = coeffs(zeros(), zeros(), zeros(), zeros(), RatFunc::one());
        let cl = classify(&c);
        let branch = match &cl.primary().unwrap().branch {
            Branch::Case5aRational { k2sq, big_r, big_s, exp_a, .. } => {
                Branch::Case5aRational {
                    k1sq: qi(4),
                    k1sq_free: true,
                    k2sq: &qi(1) / &qi(4),
                    big_r: big_r.clone(),
                    big_s: big_s.clone(),
                    exp_a: exp_a.clone(),
                }
            }
            other => panic!("unexpected {:?}", other),
        };
        let _ = match &branch {
            Branch::Case5aRational { k2sq, .. } => assert_eq!(k2sq, &qr(1, 4)),
            _ => unreachable!(),
        };
        let form = solution_form(&c, &cl, &branch, &FormConstants::default()).unwrap();
        let res = residual_check(&c, &form, &GridSpec::default()).unwrap();
        assert!(res < 1e-9, "residual {}", res);

        // (-1/z, -4/z^2, 0, 0, 1/z^2): w = z^{-2} cosh(z^2/2), grid away from 0.
        let c = coeffs(
            rf(&[-1], &[0, 1]),
            rf(&[-4], &[0, 0, 1]),
            zeros(),
            zeros(),
            rf(&[1], &[0, 0, 1]),
        );
        let cl = classify(&c);
        let branch = cl.primary().unwrap().branch.clone();
        let form = solution_form(&c, &cl, &branch, &FormConstants::default()).unwrap();
        let grid = GridSpec {
            center: Complex64::new(3.0, 0.0),
            ..GridSpec::default()
        };
        let res = residual_check(&c, &form, &grid).unwrap();
        assert!(res < 1e-9, "residual {}", res);
    }

    #[test]
    fn residual_of_case4_form() {
        let c = coeffs(zeros(), zeros(), rf(&[1, -1], &[1]), zeros(), rf(&[0, 0, -1], &[1]));
        let cl = classify(&c);
        let branch = cl.primary().unwrap().branch.clone();
        let form = solution_form(&c, &cl, &branch, &FormConstants::default()).unwrap();
        let grid = GridSpec {
            center: Complex64::new(1.0, 0.0),
            ..GridSpec::default()
        };
        let res = residual_check(&c, &form, &grid).unwrap();
        assert!(res < 1e-9, "residual {}", res);
    }

    #[test]
    fn half_integer_series_residual_and_order() {
        // (-1/(2z), -3/(4z^2), 0, 0, -1) with the entire series of
        // sinh((2/3) z^{3/2})/sqrt(z).
        let c = coeffs(
            rf(&[-1], &[0, 2]),
            rf(&[-3], &[0, 0, 4]),
            zeros(),
            zeros(),
            RatFunc::from_i64(-1),
        );
        let s = half_integer_catalog_series(300);
        let form = series_form("case5a-half-integer", s.clone());
        let grid = GridSpec {
            center: Complex64::new(1.0, 0.0),
            ..GridSpec::default()
        };
        let res = residual_check(&c, &form, &grid).unwrap();
        assert!(res < 1e-8, "residual {}", res);
        let est = order_estimate(&s, &[4.0, 8.0, 16.0, 24.0]).unwrap();
        assert!((est.sigma - 1.5).abs() < 0.2, "sigma {}", est.sigma);
    }

    #[test]
    fn central_index_examples() {
        // e^z: nu(5) = 5.
        let mut coeffs = Vec::new();
        let mut f = 1.0f64;
        for n in 0..=64 {
            if n > 0 {
                f *= n as f64;
            }
            coeffs.push(Complex64::new(1.0 / f, 0.0));
        }
        let s = ComplexSeries {
            z0: Complex64::new(0.0, 0.0),
            coeffs,
        };
        assert_eq!(central_index(&s, 5.0).unwrap(), 5);
        // cosh(z) + 1: nu(10) = 10 (even index ties to the largest).
        let c = coeffs_of_cosh_plus_one(64);
        assert_eq!(central_index(&c, 10.0).unwrap(), 10);
        // truncation-dominated request errors
        assert!(central_index(&c, 1.0e3).is_err());
    }

    fn coeffs_of_cosh_plus_one(n: usize) -> ComplexSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[0] = Complex64::new(2.0, 0.0);
        let mut f = 1.0f64;
        for k in 1..=n {
            f *= k as f64;
            if k % 2 == 0 {
                coeffs[k] = Complex64::new(1.0 / f, 0.0);
            }
        }
        ComplexSeries {
            z0: Complex64::new(0.0, 0.0),
            coeffs,
        }
    }

    #[test]
    fn order_estimates() {
        let s = coeffs_of_cosh_plus_one(256);
        let est = order_estimate(&s, &[2.0, 4.0, 8.0, 16.0]).unwrap();
        assert!((est.sigma - 1.0).abs() < 0.15, "sigma {}", est.sigma);

        // e^{z^2/2}: c_{2k} = (1/2)^k / k!.
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 257];
        let mut term = 1.0f64;
        for k in 0..=128 {
            coeffs[2 * k] = Complex64::new(term, 0.0);
            term *= 0.5 / (k + 1) as f64;
        }
        let s = ComplexSeries {
            z0: Complex64::new(0.0, 0.0),
            coeffs,
        };
        let est = order_estimate(&s, &[2.0, 3.0, 4.0, 6.0]).unwrap();
        assert!((est.sigma - 2.0).abs() < 0.2, "sigma {}", est.sigma);
    }

    #[test]
    fn compare_series_to_form() {
        let c = coeffs(zeros(), zeros(), RatFunc::one(), zeros(), zeros());
        let cl = classify(&c);
        let branch = cl.primary().unwrap().branch.clone();
        let mut consts = FormConstants::default();
        consts.c1 = cx(1.0);
        let form = solution_form(&c, &cl, &branch, &consts).unwrap();
        let s = taylor_solve(&c, cx(0.0), cx(2.0), cx(0.0), 32).unwrap();
        let d = compare(&s, &form, 1.0, EPS_POLE).unwrap();
        assert!(d < 1e-8, "discrepancy {}", d);

        // Wrong initial slope: visible discrepancy.
        let s = taylor_solve(&c, cx(0.0), cx(2.0), cx(0.5), 32).unwrap();
        let d = compare(&s, &form, 1.0, EPS_POLE).unwrap();
        assert!(d > 1e-2, "discrepancy {}", d);
    }

    #[test]
    fn determinism() {
        let c = coeffs(RatFunc::from_i64(-1), zeros(), zeros(), zeros(), zeros());
        let e = libm::exp(1.0);
        let a = taylor_solve(&c, cx(0.0), cx(e), cx(e), 64).unwrap();
        let b = taylor_solve(&c, cx(0.0), cx(e), cx(e), 64).unwrap();
        assert_eq!(a, b);
    }
}
