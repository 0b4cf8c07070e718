//! Exact arithmetic in cyclotomic fields Q(zeta_m).
//!
//! A value is stored as a full-basis coefficient vector of length `m`
//! over the rationals: `sum_j coeffs[j] * zeta_m^j`. The representation is
//! redundant (the field has degree phi(m)); products and sums stay in the
//! full basis, and reduction modulo the m-th cyclotomic polynomial happens
//! only for equality tests, rationality checks, and serialization. This
//! keeps the hot paths free of polynomial division.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::numutil::{divisors, euler_phi};

/// Ceiling on the root-of-unity order. Full-basis vectors are O(m) and
/// products O(m^2), so huge orders indicate a caller bug.
pub const CYCLO_ORDER_CAP: u64 = 10_000;

/// Floating point image of a cyclotomic value, with a crude but honest
/// error bound for the conversion.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    pub err_bound: f64,
}

impl ComplexApprox {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    m: u64,
    coeffs: Vec<BigRational>,
}

static CYCLO_POLY_CACHE: Lazy<Mutex<HashMap<u64, Vec<BigInt>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The m-th cyclotomic polynomial, coefficients low to high (monic, degree
/// phi(m)), computed by exact division of `x^m - 1` by the polynomials of
/// the proper divisors. Memoized globally.
pub fn cyclotomic_polynomial(m: u64) -> Result<Vec<BigInt>> {
    if m == 0 {
        return Err(Error::InvalidArgument("cyclotomic order must be >= 1".into()));
    }
    if m > CYCLO_ORDER_CAP {
        return Err(Error::CapExceeded {
            what: "cyclotomic order",
            value: m as u128,
            cap: CYCLO_ORDER_CAP as u128,
        });
    }
    let mut cache = CYCLO_POLY_CACHE.lock().expect("cyclotomic cache poisoned");
    if let Some(hit) = cache.get(&m) {
        return Ok(hit.clone());
    }
    // Fill in ascending divisor order; every proper divisor of d also
    // divides m, so it is already present when d is processed.
    for d in divisors(m) {
        if cache.contains_key(&d) {
            continue;
        }
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = -BigInt::one();
        num[d as usize] = BigInt::one();
        for e in divisors(d) {
            if e == d {
                continue;
            }
            let phi_e = cache.get(&e).expect("divisors processed in order");
            num = poly_div_exact(&num, phi_e);
        }
        debug_assert_eq!(num.len() as u64 - 1, euler_phi(d));
        cache.insert(d, num);
    }
    Ok(cache.get(&m).expect("just inserted").clone())
}

/// Exact division of integer polynomials; the divisor must be monic and the
/// remainder must vanish.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().is_some_and(|c| c.is_one()), "divisor must be monic");
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dn >= dd);
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (dd..=dn).rev() {
        let c = std::mem::replace(&mut rem[k], BigInt::zero());
        if c.is_zero() {
            continue;
        }
        quot[k - dd] = c.clone();
        for i in 0..dd {
            let delta = &c * &den[i];
            rem[k - dd + i] -= delta;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

impl Cyclotomic {
    fn check_order(m: u64) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidArgument("cyclotomic order must be >= 1".into()));
        }
        if m > CYCLO_ORDER_CAP {
            return Err(Error::CapExceeded {
                what: "cyclotomic order",
                value: m as u128,
                cap: CYCLO_ORDER_CAP as u128,
            });
        }
        Ok(())
    }

    pub fn zero(m: u64) -> Result<Cyclotomic> {
        Self::check_order(m)?;
        Ok(Cyclotomic {
            m,
            coeffs: vec![BigRational::zero(); m as usize],
        })
    }

    pub fn one(m: u64) -> Result<Cyclotomic> {
        Self::from_int(m, 1)
    }

    pub fn from_int(m: u64, v: i64) -> Result<Cyclotomic> {
        Self::from_rational(m, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(m: u64, v: BigRational) -> Result<Cyclotomic> {
        let mut z = Cyclotomic::zero(m)?;
        z.coeffs[0] = v;
        Ok(z)
    }

    /// The root of unity `zeta_m^j`.
    pub fn root_power(m: u64, j: u64) -> Result<Cyclotomic> {
        let mut z = Cyclotomic::zero(m)?;
        z.coeffs[(j % m) as usize] = BigRational::one();
        Ok(z)
    }

    /// Builds from an exponent histogram: `sum_j hist[j] * zeta_m^j` where
    /// `hist` has length `m`. This is the bridge from integer hot loops.
    pub fn from_histogram(m: u64, hist: &[i64]) -> Result<Cyclotomic> {
        Self::check_order(m)?;
        if hist.len() != m as usize {
            return Err(Error::InvalidArgument(format!(
                "histogram length {} does not match order {m}",
                hist.len()
            )));
        }
        let coeffs = hist
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        Ok(Cyclotomic { m, coeffs })
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    /// Raw full-basis coefficients (length `m`); not canonical.
    pub fn raw_coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &Cyclotomic) -> Result<Cyclotomic> {
        let (a, b) = lift_pair(self, rhs)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x + y)
            .collect();
        Ok(Cyclotomic { m: a.m, coeffs })
    }

    pub fn sub(&self, rhs: &Cyclotomic) -> Result<Cyclotomic> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Cyclotomic) -> Result<Cyclotomic> {
        let (a, b) = lift_pair(self, rhs)?;
        let m = a.m as usize;
        let mut out = vec![BigRational::zero(); m];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let k = (i + j) % m;
                out[k] += x * y;
            }
        }
        Ok(Cyclotomic { m: a.m, coeffs: out })
    }

    pub fn scale(&self, k: &BigRational) -> Cyclotomic {
        Cyclotomic {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Exact division by a nonzero integer.
    pub fn div_int(&self, k: i64) -> Result<Cyclotomic> {
        if k == 0 {
            return Err(Error::ZeroArgument);
        }
        let inv = BigRational::new(BigInt::one(), BigInt::from(k));
        Ok(self.scale(&inv))
    }

    /// Complex conjugation: `zeta^j -> zeta^(m-j)`.
    pub fn conj(&self) -> Cyclotomic {
        let m = self.m as usize;
        let mut out = vec![BigRational::zero(); m];
        for (j, c) in self.coeffs.iter().enumerate() {
            let k = (m - j) % m;
            out[k] = out[k].clone() + c;
        }
        Cyclotomic {
            m: self.m,
            coeffs: out,
        }
    }

    /// Re-expresses the value in Q(zeta_M) for `m | M`.
    pub fn change_order(&self, new_m: u64) -> Result<Cyclotomic> {
        Self::check_order(new_m)?;
        if new_m % self.m != 0 {
            return Err(Error::NotDivisible {
                from: self.m,
                to: new_m,
            });
        }
        let step = (new_m / self.m) as usize;
        let mut out = vec![BigRational::zero(); new_m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[j * step] = c.clone();
        }
        Ok(Cyclotomic {
            m: new_m,
            coeffs: out,
        })
    }

    /// Canonical coefficients modulo the m-th cyclotomic polynomial,
    /// length `phi(m)`.
    pub fn canonical(&self) -> Result<Vec<BigRational>> {
        let phi = cyclotomic_polynomial(self.m)?;
        let deg = phi.len() - 1;
        let mut r = self.coeffs.clone();
        for k in (deg..r.len()).rev() {
            let c = std::mem::replace(&mut r[k], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for i in 0..deg {
                let delta = &c * BigRational::from_integer(phi[i].clone());
                r[k - deg + i] -= delta;
            }
        }
        r.truncate(deg);
        Ok(r)
    }

    pub fn is_zero_value(&self) -> Result<bool> {
        Ok(self.canonical()?.iter().all(|c| c.is_zero()))
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Result<Option<BigRational>> {
        let can = self.canonical()?;
        if can[1..].iter().all(|c| c.is_zero()) {
            Ok(Some(can[0].clone()))
        } else {
            Ok(None)
        }
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Result<Option<BigInt>> {
        Ok(self.as_rational()?.and_then(|r| {
            if r.denom().is_one() {
                Some(r.numer().clone())
            } else {
                None
            }
        }))
    }

    /// Exact equality as field elements, lifting to a common order.
    pub fn eq_value(&self, rhs: &Cyclotomic) -> Result<bool> {
        let (a, b) = lift_pair(self, rhs)?;
        a.sub(&b)?.is_zero_value()
    }

    /// Floating point image under `zeta_m -> exp(2 pi i / m)`.
    pub fn embed(&self) -> ComplexApprox {
        let m = self.m as f64;
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        let mut mass = 0.0f64;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = c.to_f64().unwrap_or(f64::NAN);
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / m;
            re += cf * theta.cos();
            im += cf * theta.sin();
            mass += cf.abs();
        }
        // Each term contributes a handful of rounding errors; `mass * m` is
        // a generous envelope for the accumulated ulps.
        let err_bound = mass * m * 1e-15;
        ComplexApprox { re, im, err_bound }
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

fn lift_pair(a: &Cyclotomic, b: &Cyclotomic) -> Result<(Cyclotomic, Cyclotomic)> {
    if a.m == b.m {
        return Ok((a.clone(), b.clone()));
    }
    let m = lcm(a.m, b.m);
    Ok((a.change_order(m)?, b.change_order(m)?))
}

impl PartialEq for Cyclotomic {
    /// Value equality, independent of representation order. Panics if the
    /// common order would exceed the order cap; use `eq_value` to handle
    /// that case as an error.
    fn eq(&self, other: &Self) -> bool {
        self.eq_value(other)
            .expect("equality comparison exceeded the cyclotomic order cap")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        let as_i64 = |v: Vec<BigInt>| -> Vec<i64> {
            v.iter().map(|c| c.to_i64().unwrap()).collect()
        };
        assert_eq!(as_i64(cyclotomic_polynomial(1).unwrap()), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(2).unwrap()), vec![1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(3).unwrap()), vec![1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(4).unwrap()), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(6).unwrap()), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(8).unwrap()), vec![1, 0, 0, 0, 1]);
        assert_eq!(
            as_i64(cyclotomic_polynomial(12).unwrap()),
            vec![1, 0, -1, 0, 1]
        );
        // Degree phi(m) across a range.
        for m in 1..60u64 {
            let deg = cyclotomic_polynomial(m).unwrap().len() as u64 - 1;
            assert_eq!(deg, euler_phi(m), "degree of Phi_{m}");
        }
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(
            Cyclotomic::zero(CYCLO_ORDER_CAP + 1),
            Err(Error::CapExceeded { .. })
        ));
        assert!(Cyclotomic::zero(0).is_err());
    }

    #[test]
    fn roots_of_unity_relations() {
        // zeta_3 satisfies 1 + zeta + zeta^2 = 0.
        let z = Cyclotomic::root_power(3, 1).unwrap();
        let z2 = Cyclotomic::root_power(3, 2).unwrap();
        let one = Cyclotomic::one(3).unwrap();
        let s = one.add(&z).unwrap().add(&z2).unwrap();
        assert!(s.is_zero_value().unwrap());
        // zeta^3 = 1.
        assert_eq!(z.mul(&z).unwrap().mul(&z).unwrap(), one);
        // zeta_4 is i: zeta_4^2 = -1.
        let i = Cyclotomic::root_power(4, 1).unwrap();
        let m1 = Cyclotomic::from_int(4, -1).unwrap();
        assert_eq!(i.mul(&i).unwrap(), m1);
    }

    #[test]
    fn conjugation() {
        let z = Cyclotomic::root_power(5, 2).unwrap();
        assert_eq!(z.conj(), Cyclotomic::root_power(5, 3).unwrap());
        // conj fixes rationals.
        let r = Cyclotomic::from_rational(5, BigRational::new(BigInt::from(3), BigInt::from(7)))
            .unwrap();
        assert_eq!(r.conj(), r);
        // z * conj(z) = 1 for roots of unity.
        let prod = z.mul(&z.conj()).unwrap();
        assert_eq!(prod, Cyclotomic::one(5).unwrap());
    }

    #[test]
    fn change_order_and_equality() {
        // zeta_3 seen inside Q(zeta_6): zeta_3 = zeta_6^2.
        let z3 = Cyclotomic::root_power(3, 1).unwrap();
        let lifted = z3.change_order(6).unwrap();
        assert_eq!(lifted, Cyclotomic::root_power(6, 2).unwrap());
        assert_eq!(z3, Cyclotomic::root_power(6, 2).unwrap());
        // -1 in Q(zeta_2) equals zeta_6^3 in Q(zeta_6).
        let m1 = Cyclotomic::from_int(2, -1).unwrap();
        assert_eq!(m1, Cyclotomic::root_power(6, 3).unwrap());
        assert!(matches!(
            z3.change_order(4),
            Err(Error::NotDivisible { from: 3, to: 4 })
        ));
    }

    #[test]
    fn rationality_detection() {
        // zeta_3 + zeta_3^2 = -1.
        let s = Cyclotomic::root_power(3, 1)
            .unwrap()
            .add(&Cyclotomic::root_power(3, 2).unwrap())
            .unwrap();
        assert_eq!(s.as_integer().unwrap(), Some(BigInt::from(-1)));
        // zeta_3 itself is not rational.
        let z = Cyclotomic::root_power(3, 1).unwrap();
        assert_eq!(z.as_rational().unwrap(), None);
        // 5/2 is rational but not integral.
        let h = Cyclotomic::from_rational(4, BigRational::new(BigInt::from(5), BigInt::from(2)))
            .unwrap();
        assert!(h.as_rational().unwrap().is_some());
        assert_eq!(h.as_integer().unwrap(), None);
    }

    #[test]
    fn histogram_bridge() {
        // hist over Z/3: 2 at exponent 0, 1 at exponent 1 -> 2 + zeta.
        let h = Cyclotomic::from_histogram(3, &[2, 1, 0]).unwrap();
        let manual = Cyclotomic::from_int(3, 2)
            .unwrap()
            .add(&Cyclotomic::root_power(3, 1).unwrap())
            .unwrap();
        assert_eq!(h, manual);
        assert!(Cyclotomic::from_histogram(3, &[1, 2]).is_err());
    }

    #[test]
    fn embedding_matches_known_values() {
        // zeta_4 = i.
        let i = Cyclotomic::root_power(4, 1).unwrap().embed();
        assert!((i.re - 0.0).abs() < 1e-12 && (i.im - 1.0).abs() < 1e-12);
        // zeta_6 = 1/2 + sqrt(3)/2 i.
        let z = Cyclotomic::root_power(6, 1).unwrap().embed();
        assert!((z.re - 0.5).abs() < 1e-12);
        assert!((z.im - 3f64.sqrt() / 2.0).abs() < 1e-12);
        // |zeta_3 - zeta_3^2| = sqrt(3) (a Gauss sum of the quadratic
        // character mod 3).
        let g = Cyclotomic::root_power(3, 1)
            .unwrap()
            .sub(&Cyclotomic::root_power(3, 2).unwrap())
            .unwrap();
        assert!((g.embed().abs() - 3f64.sqrt()).abs() < 1e-12);
        assert!(g.embed().err_bound < 1e-10);
    }

    #[test]
    fn scale_and_div() {
        let z = Cyclotomic::root_power(8, 3).unwrap();
        let scaled = z.scale(&rat(6)).div_int(3).unwrap();
        assert_eq!(scaled, z.scale(&rat(2)));
        assert!(z.div_int(0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_cyclo(m: u64) -> impl Strategy<Value = Cyclotomic> {
            proptest::collection::vec((-6i64..=6, 1i64..=4), m as usize).prop_map(
                move |pairs| {
                    let coeffs = pairs
                        .into_iter()
                        .map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                        .collect();
                    Cyclotomic { m, coeffs }
                },
            )
        }

        fn orders() -> impl Strategy<Value = u64> {
            prop_oneof![Just(3u64), Just(4), Just(6), Just(8), Just(12)]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn ring_axioms((a, b, c) in orders().prop_flat_map(|m| {
                (arb_cyclo(m), arb_cyclo(m), arb_cyclo(m))
            })) {
                // Associativity and commutativity of both operations, and
                // distributivity, as exact value equalities.
                let ab = a.add(&b).unwrap();
                prop_assert!(ab.eq_value(&b.add(&a).unwrap()).unwrap());
                let ab_c = ab.add(&c).unwrap();
                let a_bc = a.add(&b.add(&c).unwrap()).unwrap();
                prop_assert!(ab_c.eq_value(&a_bc).unwrap());

                let m_ab = a.mul(&b).unwrap();
                prop_assert!(m_ab.eq_value(&b.mul(&a).unwrap()).unwrap());
                let m_ab_c = m_ab.mul(&c).unwrap();
                let m_a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
                prop_assert!(m_ab_c.eq_value(&m_a_bc).unwrap());

                let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
                let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
                prop_assert!(lhs.eq_value(&rhs).unwrap());
            }

            #[test]
            fn conj_is_a_ring_map((a, b) in orders().prop_flat_map(|m| {
                (arb_cyclo(m), arb_cyclo(m))
            })) {
                let lhs = a.mul(&b).unwrap().conj();
                let rhs = a.conj().mul(&b.conj()).unwrap();
                prop_assert!(lhs.eq_value(&rhs).unwrap());
                let ls = a.add(&b).unwrap().conj();
                let rs = a.conj().add(&b.conj()).unwrap();
                prop_assert!(ls.eq_value(&rs).unwrap());
                // Involution.
                prop_assert!(a.conj().conj().eq_value(&a).unwrap());
            }

            #[test]
            fn change_order_preserves_value(a in orders().prop_flat_map(arb_cyclo)) {
                let m = a.order();
                let lifted = a.change_order(m * 2).unwrap();
                prop_assert!(lifted.eq_value(&a).unwrap());
                // Embeddings agree numerically as well.
                let e1 = a.embed();
                let e2 = lifted.embed();
                prop_assert!((e1.re - e2.re).abs() < 1e-9);
                prop_assert!((e1.im - e2.im).abs() < 1e-9);
            }

            #[test]
            fn conj_matches_complex_conjugation(a in orders().prop_flat_map(arb_cyclo)) {
                let e = a.embed();
                let ec = a.conj().embed();
                prop_assert!((e.re - ec.re).abs() < 1e-9);
                prop_assert!((e.im + ec.im).abs() < 1e-9);
            }
        }
    }
}
