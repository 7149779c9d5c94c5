//! Exact resultants via Sylvester determinants.
//!
//! The bivariate variant `resultant_in_t` eliminates `z` from a polynomial
//! whose coefficients are themselves polynomials in a parameter `t`; it is
//! computed by specializing `t` at enough rational sample points (the
//! Sylvester matrix keeps its formal dimensions, so specialization commutes
//! with taking the resultant) and interpolating the result.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::qi;
use crate::Q;

/// Determinant by fraction Gaussian elimination.
fn determinant(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(pivot) = pivot else {
            return Q::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det * &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let s = &m[col][c] * &factor;
                m[r][c] = &m[r][c] - s;
            }
        }
    }
    det
}

/// Sylvester resultant of two coefficient vectors with *formal* degrees
/// `m = p.len() - 1` and `n = q.len() - 1` (top entries may be zero).
fn sylvester_resultant(p: &[Q], q: &[Q]) -> Q {
    let m = p.len() - 1;
    let n = q.len() - 1;
    if m == 0 && n == 0 {
        return Q::one();
    }
    if m == 0 {
        return pow_q(&p[0], n as u32);
    }
    if n == 0 {
        return pow_q(&q[0], m as u32);
    }
    let size = m + n;
    let mut mat = vec![vec![Q::zero(); size]; size];
    for row in 0..n {
        for (j, c) in p.iter().enumerate() {
            mat[row][row + (m - j)] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in q.iter().enumerate() {
            mat[n + row][row + (n - j)] = c.clone();
        }
    }
    determinant(mat)
}

fn pow_q(base: &Q, e: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc = acc * base;
    }
    acc
}

/// Flips the Sylvester determinant into the "evaluate p at the roots of q"
/// orientation: `lc(q)^deg(p) * prod p(root of q)`.
fn oriented(det: Q, m: usize, n: usize) -> Q {
    if (m * n) % 2 == 1 {
        -det
    } else {
        det
    }
}

/// Resultant with respect to `z`, normalized as
/// `lc(q)^deg(p) * prod_{q(r)=0} p(r)`.
pub fn resultant(p: &Poly, q: &Poly) -> Q {
    if p.is_zero() || q.is_zero() {
        return Q::zero();
    }
    let det = sylvester_resultant(p.coeffs(), q.coeffs());
    oriented(det, p.degree().unwrap(), q.degree().unwrap())
}

/// `Res_z(P(z, t), q(z))` where `P` is given as `z`-coefficients that are
/// polynomials in `t`; the result is a polynomial in `t`.
pub fn resultant_in_t(p_coeffs_in_t: &[Poly], q: &Poly) -> Poly {
    let mut pc: Vec<Poly> = p_coeffs_in_t.to_vec();
    while pc.last().is_some_and(|c| c.is_zero()) {
        pc.pop();
    }
    if pc.is_empty() || q.is_zero() {
        return Poly::zero();
    }
    let n = q.degree().unwrap();
    let max_t_deg = pc.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    // The resultant picks n entries from P-rows, so deg_t <= n * max_t_deg.
    let bound = n * max_t_deg;
    let m = pc.len() - 1;
    let samples: Vec<(Q, Q)> = (0..=bound as i64)
        .map(|k| {
            let t = qi(k);
            let spec: Vec<Q> = pc.iter().map(|c| c.eval_q(&t)).collect();
            let r = oriented(sylvester_resultant(&spec, q.coeffs()), m, n);
            (t, r)
        })
        .collect();
    lagrange_interpolate(&samples)
}

fn lagrange_interpolate(samples: &[(Q, Q)]) -> Poly {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in samples.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = Poly::one();
        let mut denom = Q::one();
        for (j, (xj, _)) in samples.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = &basis * &Poly::from_coeffs(vec![-xj.clone(), Q::one()]);
            denom = denom * (xi - xj);
        }
        acc = &acc + &basis.scale(&(yi / &denom));
    }
    acc
}
