//! L-polynomial reconstruction from power sums.
//!
//! For a subspace `L` in general position among its translates, the
//! generating function `L(T) = exp(sum_r S_r T^r / r)` is, up to the sign
//! convention discussed below, a polynomial of degree `D_L`. This module
//! recovers that polynomial exactly from the power sums `S_1..S_(D+extra)`
//! using Newton's identities, finds its reciprocal roots numerically, and
//! classifies their absolute values as weights.
//!
//! Sign convention: the polynomial computed here is
//! `P(T) = prod_i (1 - alpha_i T)` pinned down by the exact relations
//! `sum_i alpha_i^r = (-1)^d S_r`. With this normalization
//! `P = L(T)^epsilon` where `epsilon = (-1)^(d+1)`; the `orientation`
//! field records `epsilon`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::One;

use crate::characters::MultChar;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::numutil::binomial;
use crate::subspace::{AffineSubspace, PositionClass, PositionReport};
use crate::sums::{char_sum_with_cap, DEFAULT_POINT_CAP};

/// Extra power sums computed beyond the predicted degree, used as an exact
/// consistency check on the recovered polynomial.
pub const DEFAULT_EXTRA: usize = 2;

/// Relative tolerance used when matching a root modulus to `q^(i/2)`.
pub const WEIGHT_REL_TOL: f64 = 1e-6;

/// Elementary symmetric functions `e_0..e_degree` from power sums
/// `p_1..p_degree` (`ps[r-1]` is `p_r`) via Newton's identities:
/// `r e_r = sum_(i=1)^(r) (-1)^(i-1) e_(r-i) p_i`.
pub fn newton_to_coeffs(ps: &[Cyclotomic], degree: usize) -> Result<Vec<Cyclotomic>> {
    if ps.len() < degree {
        return Err(Error::InvalidArgument(format!(
            "need {degree} power sums, got {}",
            ps.len()
        )));
    }
    let order = if degree == 0 { 1 } else { ps[0].order() };
    let mut es = Vec::with_capacity(degree + 1);
    es.push(Cyclotomic::one(order)?);
    for r in 1..=degree {
        let mut acc = Cyclotomic::zero(order)?;
        for i in 1..=r {
            let term = es[r - i].mul(&ps[i - 1])?;
            acc = if i % 2 == 1 {
                acc.add(&term)?
            } else {
                acc.sub(&term)?
            };
        }
        es.push(acc.div_int(r as i64)?);
    }
    Ok(es)
}

/// The continuation `p_r = sum_(i=1)^(D) (-1)^(i-1) e_i p_(r-i)` that must
/// hold exactly for `r > D` when the `p` really are power sums of `D`
/// numbers with elementary symmetric functions `e`.
fn newton_continue(es: &[Cyclotomic], ps: &[Cyclotomic], r: usize) -> Result<Cyclotomic> {
    let d = es.len() - 1;
    debug_assert!(r > d && r >= 1);
    let order = es[0].order();
    let mut acc = Cyclotomic::zero(order)?;
    for i in 1..=d {
        let term = es[i].mul(&ps[r - i - 1])?;
        acc = if i % 2 == 1 {
            acc.add(&term)?
        } else {
            acc.sub(&term)?
        };
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct LPolynomial {
    /// Degree `D_L` predicted by the position classification.
    pub degree: usize,
    /// Exact coefficients `c_0..c_degree` of `P(T)`, `c_0 = 1`.
    pub coeffs: Vec<Cyclotomic>,
    /// The exact sums `S_1..S_(degree+extra)` that produced `P`.
    pub power_sums: Vec<Cyclotomic>,
    /// Reciprocal roots `alpha_i` (roots of `T^degree P(1/T)`).
    pub roots: Vec<Complex64>,
    /// `epsilon` with `P = L^epsilon`; equals `(-1)^(d+1)`.
    pub orientation: i8,
    /// Position data (class, a-counts, D_L) of the underlying subspace.
    pub position: PositionReport,
    /// Max deviation between `sum_i alpha_i^r` and the exact `p_r` over
    /// all computed `r`, as a consistency measure for the numeric roots.
    pub newton_residual: f64,
}

/// Reconstructs `P(T)` for a subspace and character tuple. `extra` further
/// power sums beyond `D_L` are computed and checked against the recovered
/// coefficients, exactly.
pub fn l_polynomial(
    sub: &AffineSubspace,
    chars: &[MultChar],
    extra: usize,
) -> Result<LPolynomial> {
    l_polynomial_with_cap(sub, chars, extra, DEFAULT_POINT_CAP)
}

pub fn l_polynomial_with_cap(
    sub: &AffineSubspace,
    chars: &[MultChar],
    extra: usize,
    cap: u64,
) -> Result<LPolynomial> {
    let position = sub.classify_position();
    if position.class == PositionClass::Neither {
        return Err(Error::NotInPosition);
    }
    if position.d_l < 0 {
        return Err(Error::DegreeMismatch(format!(
            "predicted degree D_L = {} is negative",
            position.d_l
        )));
    }
    let degree = position.d_l as usize;
    let d = sub.dim();

    let mut power_sums = Vec::with_capacity(degree + extra);
    for r in 1..=(degree + extra) as u32 {
        power_sums.push(char_sum_with_cap(sub, chars, r, cap)?.value);
    }
    // p_r = (-1)^d S_r.
    let ps: Vec<Cyclotomic> = power_sums
        .iter()
        .map(|s| if d % 2 == 0 { s.clone() } else { s.neg() })
        .collect();

    let es = newton_to_coeffs(&ps, degree)?;
    if degree > 0 && es[degree].is_zero_value()? {
        return Err(Error::DegreeMismatch(format!(
            "leading Newton coefficient e_{degree} vanishes"
        )));
    }
    // Algebraic integrality: canonical coordinates in Z[zeta] must have
    // unit denominators.
    for (j, e) in es.iter().enumerate() {
        let canonical = e.canonical()?;
        if canonical.iter().any(|c| !c.denom().is_one()) {
            return Err(Error::NonIntegralCoefficient { index: j });
        }
    }
    // Surplus power sums must satisfy the degree-D recurrence exactly.
    for r in (degree + 1)..=(degree + extra) {
        let predicted = newton_continue(&es, &ps, r)?;
        if !predicted.eq_value(&ps[r - 1])? {
            return Err(Error::DegreeMismatch(format!(
                "power sum p_{r} breaks the degree-{degree} recurrence"
            )));
        }
    }

    // P(T) = sum_j (-1)^j e_j T^j.
    let coeffs: Vec<Cyclotomic> = es
        .iter()
        .enumerate()
        .map(|(j, e)| if j % 2 == 0 { e.clone() } else { e.neg() })
        .collect();

    let roots = if degree == 0 {
        Vec::new()
    } else {
        // Reciprocal roots are the roots of the reversed polynomial.
        let rev: Vec<Complex64> = coeffs
            .iter()
            .rev()
            .map(|c| {
                let a = c.embed();
                Complex64::new(a.re, a.im)
            })
            .collect();
        poly_roots(&rev)?
    };

    // Numeric consistency of the roots against every exact p_r.
    let mut newton_residual = 0.0f64;
    let mut powers: Vec<Complex64> = roots.iter().map(|_| Complex64::one()).collect();
    for p in ps.iter() {
        let mut sum = Complex64::new(0.0, 0.0);
        for (pw, root) in powers.iter_mut().zip(&roots) {
            *pw *= root;
            sum += *pw;
        }
        let target = p.embed();
        let dev = (sum - Complex64::new(target.re, target.im)).norm();
        newton_residual = newton_residual.max(dev);
    }

    Ok(LPolynomial {
        degree,
        coeffs,
        power_sums,
        roots,
        orientation: if d % 2 == 1 { 1 } else { -1 },
        position,
        newton_residual,
    })
}

/// All complex roots of `c_0 + c_1 T + ... + c_deg T^deg` by the Aberth
/// simultaneous-iteration method. The leading coefficient must be nonzero.
/// Converges to residuals far below the acceptance threshold
/// `1e-10 * max|c_j|` for the well-conditioned polynomials produced here;
/// fails with `NonConvergence` otherwise.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    if coeffs.is_empty() {
        return Err(Error::InvalidArgument("empty coefficient list".into()));
    }
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    if lead.norm() == 0.0 {
        return Err(Error::InvalidArgument("leading coefficient is zero".into()));
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let accept = 1e-10 * scale;
    let target = 1e-14 * scale;

    // Cauchy bound on root moduli: 1 + max |c_j / c_deg|.
    let radius = 1.0
        + coeffs[..deg]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0f64, f64::max);
    let mut zs: Vec<Complex64> = (0..deg)
        .map(|k| {
            // Irrational-ish angular offset plus a small radial stagger to
            // avoid symmetric stalemates.
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.41;
            let r = radius * (0.85 + 0.3 * (k as f64) / (deg as f64));
            Complex64::from_polar(r, theta)
        })
        .collect();

    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = coeffs[deg];
        let mut dp = Complex64::new(0.0, 0.0);
        for j in (0..deg).rev() {
            dp = dp * z + p;
            p = p * z + coeffs[j];
        }
        (p, dp)
    };

    let max_iter = 800u32;
    let mut iterations = 0u32;
    let mut residual = f64::INFINITY;
    while iterations < max_iter {
        iterations += 1;
        let mut max_step = 0.0f64;
        for k in 0..deg {
            let (p, dp) = eval(zs[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() == 0.0 {
                // Saddle: nudge off the stationary point.
                Complex64::new(1e-8 * (1.0 + zs[k].norm()), 0.0)
            } else {
                p / dp
            };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != k {
                    let diff = zs[k] - zs[j];
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let denom = Complex64::one() - w * s;
            let step = if denom.norm() < 1e-300 { w } else { w / denom };
            zs[k] -= step;
            max_step = max_step.max(step.norm());
        }
        residual = zs.iter().map(|&z| eval(z).0.norm()).fold(0.0f64, f64::max);
        if residual <= target || max_step < 1e-16 * radius.max(1.0) {
            break;
        }
    }
    if residual > accept {
        return Err(Error::NonConvergence {
            iterations,
            residual,
        });
    }
    Ok(zs)
}

/// Histogram of root moduli against the ladder `q^(i/2)`, `0 <= i <= d`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightProfile {
    /// weight i -> number of roots with `|alpha|` within tolerance of
    /// `q^(i/2)`.
    pub counts: BTreeMap<u32, usize>,
    /// Roots whose modulus matches no admissible weight.
    pub unclassified: usize,
}

pub fn weight_profile(roots: &[Complex64], q: u64, d: usize) -> WeightProfile {
    let mut profile = WeightProfile::default();
    let logq = (q as f64).ln();
    for root in roots {
        let m = root.norm();
        if m <= 0.0 {
            profile.unclassified += 1;
            continue;
        }
        let i = (2.0 * m.ln() / logq).round();
        if i < 0.0 || i > d as f64 {
            profile.unclassified += 1;
            continue;
        }
        let expected = (q as f64).powf(i / 2.0);
        if ((m - expected) / expected).abs() < WEIGHT_REL_TOL {
            *profile.counts.entry(i as u32).or_insert(0) += 1;
        } else {
            profile.unclassified += 1;
        }
    }
    profile
}

/// The root-count split expected for a general-position subspace.
pub fn expected_weights_gp(n: usize, d: usize, product_trivial: bool) -> BTreeMap<u32, usize> {
    let mut out = BTreeMap::new();
    let n = n as i64;
    let d_i = d as i64;
    if !product_trivial {
        let c = binomial(n - 1, d_i) as usize;
        if c > 0 {
            out.insert(d as u32, c);
        }
    } else {
        let hi = binomial(n - 2, d_i) as usize;
        if hi > 0 {
            out.insert(d as u32, hi);
        }
        let lo = binomial(n - 2, d_i - 1) as usize;
        if lo > 0 {
            out.insert(d as u32 - 1, lo);
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct BoundCheck {
    pub bound: f64,
    pub observed: f64,
    /// `bound - observed`; nonnegative up to embedding error when the
    /// bound holds.
    pub margin: f64,
}

/// Checks the sum estimate appropriate to the position class:
/// `D_L q^(d/2)` in general position among translates, and the sharper
/// binomial bounds in general position. `instance` is rendered into the
/// error on violation.
#[allow(clippy::too_many_arguments)]
pub fn verify_sum_bound(
    class: PositionClass,
    d_l: i64,
    n: usize,
    d: usize,
    q: u64,
    product_trivial: bool,
    s1: &Cyclotomic,
    instance: impl FnOnce() -> String,
) -> Result<BoundCheck> {
    let qf = q as f64;
    let bound = match class {
        PositionClass::Neither => return Err(Error::NotInPosition),
        PositionClass::GeneralAmongTranslates => d_l as f64 * qf.powf(d as f64 / 2.0),
        PositionClass::GeneralPosition => {
            if !product_trivial {
                binomial(n as i64 - 1, d as i64) as f64 * qf.powf(d as f64 / 2.0)
            } else {
                binomial(n as i64 - 2, d as i64) as f64 * qf.powf(d as f64 / 2.0)
                    + binomial(n as i64 - 2, d as i64 - 1) as f64
                        * qf.powf((d as f64 - 1.0) / 2.0)
            }
        }
    };
    let embedded = s1.embed();
    let observed = embedded.abs();
    let tol = embedded.err_bound + 1e-9 * bound.max(1.0);
    let margin = bound - observed;
    if margin < -tol {
        return Err(Error::BoundViolated {
            detail: format!("|S| = {observed:.12} exceeds bound {bound:.12}"),
            instance_json: instance(),
        });
    }
    Ok(BoundCheck {
        bound,
        observed,
        margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use std::sync::Arc;

    fn ints(m: u64, vals: &[i64]) -> Vec<Cyclotomic> {
        vals.iter()
            .map(|&v| Cyclotomic::from_int(m, v).unwrap())
            .collect()
    }

    fn chars_of(field: &Arc<crate::field::Field>, es: &[u64]) -> Vec<MultChar> {
        es.iter()
            .map(|&e| MultChar::new(Arc::clone(field), e))
            .collect()
    }

    #[test]
    fn newton_small_integer_case() {
        // Roots {2, 3}: p = (5, 13) gives e = (5, 6).
        let es = newton_to_coeffs(&ints(4, &[5, 13]), 2).unwrap();
        assert_eq!(es[0].as_integer().unwrap(), Some(1.into()));
        assert_eq!(es[1].as_integer().unwrap(), Some(5.into()));
        assert_eq!(es[2].as_integer().unwrap(), Some(6.into()));
    }

    #[test]
    fn newton_with_cyclotomic_roots() {
        // Roots zeta_3 and 2 zeta_3^2: e_1 = zeta + 2 zeta^2, e_2 = 2.
        let z = Cyclotomic::root_power(3, 1).unwrap();
        let z2 = Cyclotomic::root_power(3, 2).unwrap();
        let two = Cyclotomic::from_int(3, 2).unwrap();
        let r2 = two.mul(&z2).unwrap();
        let p1 = z.add(&r2).unwrap();
        let p2 = z.mul(&z).unwrap().add(&r2.mul(&r2).unwrap()).unwrap();
        let es = newton_to_coeffs(&[p1.clone(), p2], 2).unwrap();
        assert!(es[1].eq_value(&p1).unwrap());
        assert_eq!(es[2].as_integer().unwrap(), Some(2.into()));
    }

    #[test]
    fn newton_surplus_detects_degree_mismatch() {
        // Power sums of {1, 2, 3} forced into degree 2: the third sum
        // breaks the recurrence.
        let ps = ints(4, &[6, 14, 36]);
        let es = newton_to_coeffs(&ps, 2).unwrap();
        let predicted = newton_continue(&es, &ps, 3).unwrap();
        assert!(!predicted.eq_value(&ps[2]).unwrap());
        // And the true degree-3 continuation does hold at r = 4.
        let ps4 = ints(4, &[6, 14, 36, 98]);
        let es3 = newton_to_coeffs(&ps4, 3).unwrap();
        let predicted4 = newton_continue(&es3, &ps4, 4).unwrap();
        assert!(predicted4.eq_value(&ps4[3]).unwrap());
    }

    #[test]
    fn roots_of_quadratic() {
        // z^2 - 5z + 6: roots {2, 3}.
        let roots = poly_roots(&[
            Complex64::new(6.0, 0.0),
            Complex64::new(-5.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        let mut mags: Vec<f64> = roots.iter().map(|z| z.re).collect();
        mags.sort_by(f64::total_cmp);
        assert!((mags[0] - 2.0).abs() < 1e-10);
        assert!((mags[1] - 3.0).abs() < 1e-10);
        assert!(roots.iter().all(|z| z.im.abs() < 1e-10));
    }

    #[test]
    fn roots_edge_degrees() {
        assert!(poly_roots(&[Complex64::new(3.0, 0.0)]).unwrap().is_empty());
        let r = poly_roots(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!(poly_roots(&[]).is_err());
        assert!(poly_roots(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn roots_with_multiplicity() {
        // (z - 1)^2 (z - 2) = z^3 - 4z^2 + 5z - 2.
        let roots = poly_roots(&[
            Complex64::new(-2.0, 0.0),
            Complex64::new(5.0, 0.0),
            Complex64::new(-4.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        let mut near_one = 0;
        let mut near_two = 0;
        for z in &roots {
            if (z - Complex64::new(1.0, 0.0)).norm() < 1e-4 {
                near_one += 1;
            }
            if (z - Complex64::new(2.0, 0.0)).norm() < 1e-7 {
                near_two += 1;
            }
        }
        assert_eq!(near_one, 2);
        assert_eq!(near_two, 1);
    }

    #[test]
    fn roots_of_unity_polynomial() {
        // z^8 - 1: all roots on the unit circle, residual tiny.
        let mut c = vec![Complex64::new(0.0, 0.0); 9];
        c[0] = Complex64::new(-1.0, 0.0);
        c[8] = Complex64::new(1.0, 0.0);
        let roots = poly_roots(&c).unwrap();
        assert_eq!(roots.len(), 8);
        for z in &roots {
            assert!((z.norm() - 1.0).abs() < 1e-10);
        }
        // All distinct.
        for i in 0..8 {
            for j in 0..i {
                assert!((roots[i] - roots[j]).norm() > 0.5);
            }
        }
    }

    #[test]
    fn lpoly_classical_jacobi_nontrivial_product() {
        // Hyperplane x1 + x2 = 1 over F_5, exponents (1, 2): degree 1,
        // single root of modulus sqrt(5).
        let f = make_field(5, 1).unwrap();
        let sub = AffineSubspace::from_codes(Arc::clone(&f), &[vec![1, 1]], &[1]).unwrap();
        let lp = l_polynomial(&sub, &chars_of(&f, &[1, 2]), 2).unwrap();
        assert_eq!(lp.degree, 1);
        assert_eq!(lp.roots.len(), 1);
        assert!((lp.roots[0].norm() - 5f64.sqrt()).abs() < 1e-9);
        assert_eq!(lp.orientation, 1); // d = 1
        assert!(lp.newton_residual < 1e-9);
        let profile = weight_profile(&lp.roots, 5, 1);
        assert_eq!(profile.counts.get(&1), Some(&1));
        assert_eq!(profile.unclassified, 0);
        assert_eq!(profile.counts, expected_weights_gp(2, 1, false));
    }

    #[test]
    fn lpoly_classical_jacobi_trivial_product() {
        // Same hyperplane, exponents (2, 2): product trivial, the single
        // root drops to modulus q^0 = 1.
        let f = make_field(5, 1).unwrap();
        let sub = AffineSubspace::from_codes(Arc::clone(&f), &[vec![1, 1]], &[1]).unwrap();
        let lp = l_polynomial(&sub, &chars_of(&f, &[2, 2]), 2).unwrap();
        assert_eq!(lp.degree, 1);
        let profile = weight_profile(&lp.roots, 5, 1);
        assert_eq!(profile.counts.get(&0), Some(&1));
        assert_eq!(profile.counts, expected_weights_gp(2, 1, true));
    }

    #[test]
    fn lpoly_gat_line_degree_one() {
        // {(t, t+1, 1)} over F_5: D_L = 1, root weight at most 1.
        let f = make_field(5, 1).unwrap();
        let sub = AffineSubspace::from_codes(
            Arc::clone(&f),
            &[vec![4, 1, 0], vec![0, 0, 1]],
            &[1, 1],
        )
        .unwrap();
        let lp = l_polynomial(&sub, &chars_of(&f, &[1, 2, 3]), 2).unwrap();
        assert_eq!(lp.degree, 1);
        let profile = weight_profile(&lp.roots, 5, 1);
        assert_eq!(profile.unclassified, 0);
    }

    #[test]
    fn lpoly_degree_zero() {
        // x1 = 1 in A^2(F_3): D_L = 0, so P = 1 and every S_r = 0.
        let f = make_field(3, 1).unwrap();
        let sub = AffineSubspace::from_codes(Arc::clone(&f), &[vec![1, 0]], &[1]).unwrap();
        let lp = l_polynomial(&sub, &chars_of(&f, &[1, 1]), 3).unwrap();
        assert_eq!(lp.degree, 0);
        assert!(lp.roots.is_empty());
        for s in &lp.power_sums {
            assert!(s.is_zero_value().unwrap());
        }
    }

    #[test]
    fn lpoly_point_unit_root() {
        // d = 0 point with nonzero coordinates: degree 1, weight 0.
        let f = make_field(5, 1).unwrap();
        let sub = AffineSubspace::from_codes(
            Arc::clone(&f),
            &[vec![1, 0], vec![0, 1]],
            &[2, 3],
        )
        .unwrap();
        let lp = l_polynomial(&sub, &chars_of(&f, &[1, 2]), 2).unwrap();
        assert_eq!(lp.degree, 1);
        assert_eq!(lp.orientation, -1); // d = 0
        assert!((lp.roots[0].norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lpoly_rejects_neither() {
        let f = make_field(3, 1).unwrap();
        let sub = AffineSubspace::from_codes(Arc::clone(&f), &[vec![1, 1]], &[0]).unwrap();
        assert!(matches!(
            l_polynomial(&sub, &chars_of(&f, &[1, 1]), 1),
            Err(Error::NotInPosition)
        ));
    }

    #[test]
    fn weight_profile_rejects_off_ladder_moduli() {
        let roots = vec![
            Complex64::new(1.7, 0.0),              // not a power of sqrt(3)
            Complex64::new(0.0, 3f64.sqrt()),      // weight 1 for q = 3
            Complex64::new(1.0 + 1e-9, 0.0),       // weight 0 within tolerance
        ];
        let profile = weight_profile(&roots, 3, 2);
        assert_eq!(profile.unclassified, 1);
        assert_eq!(profile.counts.get(&1), Some(&1));
        assert_eq!(profile.counts.get(&0), Some(&1));
    }

    #[test]
    fn bound_check_accepts_tight_instances() {
        // GP hyperplane with nontrivial product: |S| equals the bound.
        let f = make_field(5, 1).unwrap();
        let sub = AffineSubspace::from_codes(Arc::clone(&f), &[vec![1, 1]], &[1]).unwrap();
        let s = crate::sums::char_sum(&sub, &chars_of(&f, &[1, 2]), 1).unwrap();
        let check = verify_sum_bound(
            PositionClass::GeneralPosition,
            1,
            2,
            1,
            5,
            false,
            &s.value,
            || "{}".into(),
        )
        .unwrap();
        assert!(check.margin.abs() < 1e-6);
    }

    #[test]
    fn bound_check_rejects_fabricated_violation() {
        // Pretend S = q^d for a GAT instance with D_L = 1, d = 2:
        // bound D_L q^(d/2) = q < q^d.
        let fake = Cyclotomic::from_int(4, 25).unwrap();
        let err = verify_sum_bound(
            PositionClass::GeneralAmongTranslates,
            1,
            3,
            2,
            5,
            false,
            &fake,
            || "\"instance\"".into(),
        );
        assert!(matches!(err, Err(Error::BoundViolated { .. })));
    }

    #[test]
    fn expected_weight_tables() {
        // n = 4, d = 2: nontrivial product puts all C(3,2) = 3 roots at
        // weight 2; trivial product splits C(2,2) = 1 and C(2,1) = 2.
        let nt = expected_weights_gp(4, 2, false);
        assert_eq!(nt.get(&2), Some(&3));
        let t = expected_weights_gp(4, 2, true);
        assert_eq!(t.get(&2), Some(&1));
        assert_eq!(t.get(&1), Some(&2));
    }
}
