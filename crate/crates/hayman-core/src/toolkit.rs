//! Decidable predicates behind the classifier: residue spectra via the
//! Rothstein--Trager resultant, classification of `e^{int f dz}`, perfect
//! squares in the rational-function field, constancy solving, and rational
//! solutions of first-order linear ODEs.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::resultant::resultant_in_t;
use crate::{qi, Q};

/// Residues of a rational function, computed exactly.
///
/// `spectrum_poly` is `Res_z(n - t * d', d)` over the squarefree part `d`
/// of the denominator; its roots in `t` are the residues at the roots of
/// `d`. Never uses numeric root finding.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueSpectrum {
    pub spectrum_poly: Poly,
    /// `(residue, component)` pairs; the component is the monic factor of
    /// the squarefree denominator carrying the poles with this residue.
    pub rational_residues: Vec<(Q, Poly)>,
    pub all_poles_simple: bool,
    pub nonrational_residues_present: bool,
}

/// What kind of function `e^{int f dz}` is, for rational `f`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExpIntegralClass {
    /// `e^{int f} = const * u` with rational `u`, i.e. `u'/u = f` exactly.
    RationalU { u: RatFunc },
    /// `e^{int f} = const * u e^{v}` with rational `u` and polynomial `v`
    /// of degree >= 1; `u'/u + v' = f` exactly.
    MeromorphicUeV { u: RatFunc, v: Poly },
    /// All poles simple with residues in (1/2)Z, at least one non-integer:
    /// meromorphic only on a two-sheeted cover.
    HalfIntegerAlgebroid { spectrum: ResidueSpectrum },
    NotMeromorphic {
        reason: &'static str,
        spectrum: Option<ResidueSpectrum>,
    },
}

impl ExpIntegralClass {
    pub fn rational_u(&self) -> Option<&RatFunc> {
        match self {
            ExpIntegralClass::RationalU { u } => Some(u),
            _ => None,
        }
    }
}

/// Rothstein--Trager residue spectrum of the proper part of `f`.
pub fn residue_spectrum(f: &RatFunc) -> ResidueSpectrum {
    let proper = f.proper_part();
    if proper.is_zero() {
        return ResidueSpectrum {
            spectrum_poly: Poly::one(),
            rational_residues: Vec::new(),
            all_poles_simple: true,
            nonrational_residues_present: false,
        };
    }
    let d = proper.denom();
    let d_sf = d.radical();
    let all_poles_simple = d_sf.degree() == d.degree();
    let n = proper.numer();
    let dp = d_sf.derivative();
    let z_len = (n.degree().unwrap_or(0) + 1).max(dp.degree().map_or(0, |d| d + 1));
    // z-coefficients of n - t*d_sf' as polynomials in t.
    let p_in_t: Vec<Poly> = (0..z_len)
        .map(|i| Poly::from_coeffs(vec![n.coeff(i), -dp.coeff(i)]))
        .collect();
    let spectrum_poly = resultant_in_t(&p_in_t, &d_sf);
    let mut rational_residues = Vec::new();
    let mut covered = 0usize;
    if let Ok(roots) = spectrum_poly.rational_roots() {
        for (t, _) in roots {
            let shifted = &RatFunc::from_poly(n.clone()) - &(&RatFunc::from_poly(dp.clone()) * &t);
            let component = shifted.numer().gcd(&d_sf);
            if component.is_constant() {
                continue;
            }
            covered += component.degree().unwrap();
            rational_residues.push((t, component));
        }
    }
    let nonrational_residues_present = covered < d_sf.degree().unwrap_or(0);
    ResidueSpectrum {
        spectrum_poly,
        rational_residues,
        all_poles_simple,
        nonrational_residues_present,
    }
}

fn q_to_i64_exact(q: &Q) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Classifies `e^{int f dz}` per the residue structure of `f`.
pub fn exp_integral_form(f: &RatFunc) -> ExpIntegralClass {
    let (ppart, proper) = f.split();
    let spectrum = residue_spectrum(&proper);
    if !spectrum.all_poles_simple {
        return ExpIntegralClass::NotMeromorphic {
            reason: "pole of order >= 2 in the integrand",
            spectrum: Some(spectrum),
        };
    }
    if spectrum.nonrational_residues_present {
        return ExpIntegralClass::NotMeromorphic {
            reason: "nonrational residue spectrum",
            spectrum: Some(spectrum),
        };
    }
    let all_integer = spectrum.rational_residues.iter().all(|(t, _)| t.is_integer());
    if all_integer {
        let mut u = RatFunc::one();
        for (t, component) in &spectrum.rational_residues {
            let Some(e) = q_to_i64_exact(t) else {
                return ExpIntegralClass::NotMeromorphic {
                    reason: "residue exceeds machine range",
                    spectrum: Some(spectrum),
                };
            };
            let powered = RatFunc::from_poly(component.clone())
                .powi(e)
                .expect("component is nonzero");
            u = &u * &powered;
        }
        debug_assert_eq!(
            &u.derivative().div(&u).unwrap(),
            &proper,
            "log-derivative reconstruction"
        );
        let v = ppart.antiderivative();
        if v.degree().is_some_and(|d| d >= 1) {
            return ExpIntegralClass::MeromorphicUeV { u, v };
        }
        return ExpIntegralClass::RationalU { u };
    }
    let all_half_integer = spectrum
        .rational_residues
        .iter()
        .all(|(t, _)| (t * qi(2)).is_integer());
    if all_half_integer {
        return ExpIntegralClass::HalfIntegerAlgebroid { spectrum };
    }
    ExpIntegralClass::NotMeromorphic {
        reason: "residue outside (1/2)Z",
        spectrum: Some(spectrum),
    }
}

pub fn sqrt_q(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let ns = q.numer().sqrt();
    let ds = q.denom().sqrt();
    if &(&ns * &ns) == q.numer() && &(&ds * &ds) == q.denom() {
        Some(Q::new(ns, ds))
    } else {
        None
    }
}

/// Square root in the rational-function field, when it exists. The result
/// is chosen with positive leading coefficient.
pub fn is_square(f: &RatFunc) -> Option<RatFunc> {
    if f.is_zero() {
        return Some(RatFunc::zero());
    }
    let sqrt_part = |p: &Poly| -> Option<(Poly, Q)> {
        let decomp = p.squarefree_decomposition().ok()?;
        let mut root = Poly::one();
        for sf in &decomp.factors {
            if sf.multiplicity % 2 != 0 {
                return None;
            }
            root = &root * &sf.factor.pow(sf.multiplicity / 2);
        }
        Some((root, decomp.unit))
    };
    let (num_root, unit) = sqrt_part(f.numer())?;
    let (den_root, _) = sqrt_part(f.denom())?; // denominator is monic: unit 1
    let unit_root = sqrt_q(&unit)?;
    let s = RatFunc::new(num_root.scale(&unit_root), den_root).expect("nonzero denominator");
    debug_assert_eq!(&(&s * &s), f);
    Some(s)
}

/// Solutions `c` of "`P + c Q` is constant".
#[derive(Debug, Clone, PartialEq)]
pub enum ConstancySolutions {
    Empty,
    One(Q),
    All,
}

fn nonconstant_part(f: &RatFunc) -> RatFunc {
    let (p, proper) = f.split();
    let mut coeffs: Vec<Q> = p.coeffs().to_vec();
    if !coeffs.is_empty() {
        coeffs[0] = Q::zero();
    }
    &RatFunc::from_poly(Poly::from_coeffs(coeffs)) + &proper
}

/// Finds all rational `c` with `P + c Q` constant, by requiring the
/// nonconstant part of `P + c Q` to vanish identically.
pub fn solve_scalar_for_constancy(p: &RatFunc, q: &RatFunc) -> ConstancySolutions {
    let np = nonconstant_part(p);
    let nq = nonconstant_part(q);
    if nq.is_zero() {
        return if np.is_zero() {
            ConstancySolutions::All
        } else {
            ConstancySolutions::Empty
        };
    }
    let ratio = (&-&np).div(&nq).expect("nq nonzero");
    match ratio.constant_value() {
        Some(c) => ConstancySolutions::One(c),
        None => ConstancySolutions::Empty,
    }
}

/// Search bounds for `rational_solutions_linear_ode`.
#[derive(Debug, Clone, Copy)]
pub struct OdeBounds {
    pub max_pole_multiplicity: u32,
    pub max_numer_degree: u32,
}

impl Default for OdeBounds {
    fn default() -> Self {
        OdeBounds {
            max_pole_multiplicity: 30,
            max_numer_degree: 30,
        }
    }
}

/// Rational solutions of `y' = f y + g`, as a particular solution plus a
/// basis of homogeneous rational solutions (the free-constant family).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOdeSolutions {
    pub particular: Option<RatFunc>,
    pub homogeneous: Vec<RatFunc>,
    /// True when a computed local bound had to be clipped to the caps, so
    /// solutions outside the bounds may have been missed.
    pub incomplete_search: bool,
}

impl LinearOdeSolutions {
    pub fn none(incomplete: bool) -> Self {
        LinearOdeSolutions {
            particular: None,
            homogeneous: Vec::new(),
            incomplete_search: incomplete,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.particular.is_none() && self.homogeneous.is_empty()
    }

    /// A representative nonzero solution, preferring the one of largest
    /// degree at infinity (a generic member of the family).
    pub fn representative(&self) -> Option<RatFunc> {
        let mut best: Option<RatFunc> = None;
        let mut candidates: Vec<RatFunc> = Vec::new();
        if let Some(p) = &self.particular {
            if !p.is_zero() {
                candidates.push(p.clone());
            }
            for h in &self.homogeneous {
                candidates.push(p + h);
            }
        }
        candidates.extend(self.homogeneous.iter().cloned());
        for c in candidates {
            if c.is_zero() {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => {
                    c.degree_at_infinity().unwrap().0 > b.degree_at_infinity().unwrap().0
                }
            };
            if better {
                best = Some(c);
            }
        }
        best
    }
}

/// Splits a list of monic polynomials into a pairwise-coprime basis that
/// generates all of them multiplicatively.
fn coprime_basis(mut input: Vec<Poly>) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    while let Some(mut p) = input.pop() {
        if p.is_constant() {
            continue;
        }
        let mut i = 0;
        while i < basis.len() && !p.is_constant() {
            let g = p.gcd(&basis[i]);
            if g.is_constant() {
                i += 1;
                continue;
            }
            let b = basis.swap_remove(i);
            let b_rest = b.exact_div(&g);
            p = p.exact_div(&g);
            for piece in [g, b_rest] {
                if !piece.is_constant() {
                    input.push(piece);
                }
            }
            i = 0;
        }
        if !p.is_constant() {
            basis.push(p);
        }
    }
    basis
}

fn multiplicity_in(q: &Poly, d: &Poly) -> u32 {
    let mut m = 0;
    let mut rest = d.clone();
    loop {
        let (quot, rem) = rest.div_rem(q);
        if !rem.is_zero() {
            return m;
        }
        rest = quot;
        m += 1;
    }
}

fn ceil_q(q: &Q) -> BigInt {
    q.ceil().to_integer()
}

/// All rational solutions of `y' = f y + g` within the configured bounds,
/// via candidate-denominator construction and an exact linear system for
/// the numerator coefficients. Every returned function is re-verified by
/// substitution.
pub fn rational_solutions_linear_ode(
    f: &RatFunc,
    g: &RatFunc,
    bounds: OdeBounds,
) -> LinearOdeSolutions {
    let mut incomplete = false;
    fn clip(m: i64, cap: u32, incomplete: &mut bool) -> u32 {
        if m <= 0 {
            0
        } else if m as u64 > cap as u64 {
            *incomplete = true;
            cap
        } else {
            m as u32
        }
    }

    let basis = coprime_basis(vec![f.denom().radical(), g.denom().radical()]);
    let spectrum = residue_spectrum(&f.proper_part());
    let mut denom = Poly::one();
    for q in &basis {
        let kf = multiplicity_in(q, f.denom());
        let kg = multiplicity_in(q, g.denom());
        let local = match kf {
            0 => kg as i64 - 1,
            1 => {
                // Local balance at a simple pole of f with residue rho:
                // pole order up to max(ceil(-rho), pole order of g).
                let mut m = kg as i64;
                for (t, component) in &spectrum.rational_residues {
                    if component.gcd(q).is_constant() {
                        continue;
                    }
                    let c = ceil_q(&-t);
                    if let Some(ci) = c.to_i64() {
                        m = m.max(ci);
                    } else if c.is_positive() {
                        incomplete = true;
                    }
                }
                m
            }
            _ => kg as i64 - kf as i64,
        };
        let m = clip(local, bounds.max_pole_multiplicity, &mut incomplete);
        if m > 0 {
            denom = &denom * &q.pow(m);
        }
    }

    // Degree bound at infinity for the numerator.
    let dg = if g.is_zero() {
        None
    } else {
        Some(g.degree_at_infinity().unwrap().0)
    };
    let mut extra: i64 = 0;
    if let Some(dg) = dg {
        extra = extra.max(dg + 1);
    }
    if !f.is_zero() {
        let (df, eta) = f.degree_at_infinity().unwrap();
        if df >= 0 {
            extra = dg.map_or(0, |dg| (dg - df).max(0));
        } else if df == -1 {
            if eta.is_integer() && eta.numer().is_positive() {
                if let Some(e) = eta.numer().to_i64() {
                    extra = extra.max(e);
                } else {
                    incomplete = true;
                }
            }
        }
    }
    let base = denom.degree().unwrap_or(0) as i64;
    let n_max_raw = base + extra.max(0);
    let n_max = if n_max_raw as u64 > bounds.max_numer_degree as u64 {
        incomplete = true;
        bounds.max_numer_degree as usize
    } else {
        n_max_raw as usize
    };

    // y = N / denom. Multiply y' - f y - g = 0 by denom^2 * Fd * Gd:
    //   (N' denom - N denom') Fd Gd - Fn N denom Gd - Gn denom^2 Fd = 0.
    let fd = f.denom();
    let fnum = f.numer();
    let gd = g.denom();
    let gnum = g.numer();
    let dprime = denom.derivative();
    let fd_gd = fd * gd;
    let rhs_poly = &(gnum * &(&denom * &denom)) * fd;

    let mut col_polys: Vec<Poly> = Vec::with_capacity(n_max + 1);
    for j in 0..=n_max {
        let zj = Poly::monomial(Q::one(), j);
        let zj_deriv = zj.derivative();
        let lead = &(&zj_deriv * &denom) - &(&zj * &dprime);
        let p = &(&lead * &fd_gd) - &(&(&(fnum * &zj) * &denom) * gd);
        col_polys.push(p);
    }
    let rows = col_polys
        .iter()
        .chain(core::iter::once(&rhs_poly))
        .filter_map(|p| p.degree())
        .max()
        .map_or(0, |d| d + 1);
    let mut a = vec![vec![Q::zero(); n_max + 1]; rows];
    let mut b = vec![Q::zero(); rows];
    for (j, p) in col_polys.iter().enumerate() {
        for r in 0..rows {
            a[r][j] = p.coeff(r);
        }
    }
    for (r, item) in b.iter_mut().enumerate() {
        *item = rhs_poly.coeff(r);
    }

    let Some(sol) = linalg::solve(a, b) else {
        return LinearOdeSolutions::none(incomplete);
    };
    let to_ratfunc = |coeffs: &[Q]| -> RatFunc {
        RatFunc::new(Poly::from_coeffs(coeffs.to_vec()), denom.clone())
            .expect("candidate denominator nonzero")
    };
    let particular = to_ratfunc(&sol.particular);
    // Verified by substitution before return.
    let residual = &(&particular.derivative() - &(f * &particular)) - g;
    debug_assert!(residual.is_zero());
    if !residual.is_zero() {
        return LinearOdeSolutions::none(incomplete);
    }
    let mut homogeneous = Vec::new();
    for v in &sol.nullspace {
        let h = to_ratfunc(v);
        if h.is_zero() {
            continue;
        }
        let hres = &h.derivative() - &(f * &h);
        debug_assert!(hres.is_zero());
        if hres.is_zero() {
            homogeneous.push(h);
        }
    }
    LinearOdeSolutions {
        particular: Some(particular),
        homogeneous,
        incomplete_search: incomplete,
    }
}

/// Exact rational antiderivative, when one exists within the default
/// search bounds.
pub fn rational_antiderivative(f: &RatFunc) -> Option<RatFunc> {
    let sols = rational_solutions_linear_ode(&RatFunc::zero(), f, OdeBounds::default());
    sols.particular
}
