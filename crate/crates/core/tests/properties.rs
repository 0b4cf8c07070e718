//! Property tests: algebraic laws that must hold for arbitrary inputs,
//! not just the hand-picked values in the unit tests.

use std::sync::Arc;

use proptest::prelude::*;

use charsum_core::binomial;
use charsum_core::characters::{jacobi_sum, MultChar};
use charsum_core::cyclotomic::Cyclotomic;
use charsum_core::field::{extend_field, make_field, Field};
use charsum_core::lfunc::{newton_to_coeffs, poly_roots};
use charsum_core::linalg::FpMat;
use charsum_core::subspace::{AffineSubspace, PositionClass};
use charsum_core::sums::char_sum;
use num_complex::Complex64;

fn field_params() -> impl Strategy<Value = (u64, u32)> {
    prop_oneof![
        Just((3u64, 1u32)),
        Just((5, 1)),
        Just((7, 1)),
        Just((2, 2)),
        Just((3, 2)),
    ]
}

fn elem_of(field: &Arc<Field>, raw: u64) -> charsum_core::field::Elem {
    field.elem(raw % field.order()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_laws((p, a) in field_params(), x in 0u64..512, y in 0u64..512, z in 0u64..512) {
        let f = make_field(p, a).unwrap();
        let (x, y, z) = (elem_of(&f, x), elem_of(&f, y), elem_of(&f, z));
        prop_assert_eq!(f.add(x, y), f.add(y, x));
        prop_assert_eq!(f.mul(x, y), f.mul(y, x));
        prop_assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.sub(f.add(x, y), y), x);
        // Frobenius is additive in characteristic p.
        let frob = |t| f.pow(t, p);
        prop_assert_eq!(frob(f.add(x, y)), f.add(frob(x), frob(y)));
    }

    #[test]
    fn field_unit_laws((p, a) in field_params(), x in 0u64..512) {
        let f = make_field(p, a).unwrap();
        let x = elem_of(&f, x);
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
            prop_assert_eq!(f.exp(f.dlog(x).unwrap()), x);
            prop_assert_eq!(f.pow(x, f.order() - 1), f.one());
        }
        prop_assert_eq!(f.pow(x, 0), f.one());
    }

    #[test]
    fn norm_is_multiplicative(
        base_params in prop_oneof![Just((3u64, 1u32)), Just((5, 1)), Just((2, 2))],
        r in 2u32..=3,
        x in 0u64..4096,
        y in 0u64..4096,
    ) {
        let base = make_field(base_params.0, base_params.1).unwrap();
        let emb = extend_field(&base, r).unwrap();
        let ext = emb.ext();
        let x = elem_of(ext, x);
        let y = elem_of(ext, y);
        prop_assert_eq!(emb.norm(ext.mul(x, y)), base.mul(emb.norm(x), emb.norm(y)));
        // The embedding is a section of pull_back.
        let b = elem_of(&base, x.code() as u64);
        prop_assert_eq!(emb.pull_back(emb.apply(b)), Some(b));
    }

    #[test]
    fn cyclotomic_ring_laws(
        m1 in prop_oneof![Just(2u64), Just(3), Just(4), Just(6)],
        m2 in prop_oneof![Just(3u64), Just(4), Just(6), Just(12)],
        xs in prop::collection::vec(-3i64..=3, 12),
        ys in prop::collection::vec(-3i64..=3, 12),
        zs in prop::collection::vec(-3i64..=3, 12),
    ) {
        let x = Cyclotomic::from_histogram(m1, &xs[..m1 as usize]).unwrap();
        let y = Cyclotomic::from_histogram(m2, &ys[..m2 as usize]).unwrap();
        let z = Cyclotomic::from_histogram(m2, &zs[..m2 as usize]).unwrap();
        prop_assert!(x.add(&y).unwrap().eq_value(&y.add(&x).unwrap()).unwrap());
        prop_assert!(x.mul(&y).unwrap().eq_value(&y.mul(&x).unwrap()).unwrap());
        let assoc_l = x.mul(&y).unwrap().mul(&z).unwrap();
        let assoc_r = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert!(assoc_l.eq_value(&assoc_r).unwrap());
        let dist_l = x.mul(&y.add(&z).unwrap()).unwrap();
        let dist_r = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        prop_assert!(dist_l.eq_value(&dist_r).unwrap());
        // Conjugation is a ring homomorphism.
        let conj_mul = x.mul(&y).unwrap().conj();
        let mul_conj = x.conj().mul(&y.conj()).unwrap();
        prop_assert!(conj_mul.eq_value(&mul_conj).unwrap());
        // Lifting the order does not change the value.
        let lifted = x.change_order(m1 * m2).unwrap();
        prop_assert!(lifted.eq_value(&x).unwrap());
        // x conj(x) embeds to |x|^2.
        let norm_sq = x.mul(&x.conj()).unwrap().embed();
        let e = x.embed();
        prop_assert!((norm_sq.re - (e.re * e.re + e.im * e.im)).abs() < 1e-9);
        prop_assert!(norm_sq.im.abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classifier_criteria_agree(
        n in 2usize..=4,
        m_seed in 1usize..=3,
        cells in prop::collection::vec(0u64..5, 16),
        rhs_cells in prop::collection::vec(0u64..5, 3),
    ) {
        let f = make_field(5, 1).unwrap();
        let m = 1 + (m_seed % n.min(3));
        if m >= n {
            return Ok(());
        }
        let rows: Vec<Vec<u64>> = (0..m).map(|i| cells[i * n..(i + 1) * n].to_vec()).collect();
        let mat = FpMat::from_rows(Arc::clone(&f), &rows).unwrap();
        if mat.rank() != m {
            return Ok(());
        }
        let b: Vec<u64> = rhs_cells[..m].to_vec();
        let sub = AffineSubspace::from_codes(Arc::clone(&f), &rows, &b).unwrap();
        let report = sub.classify_position();
        let is_gp = report.class == PositionClass::GeneralPosition;
        let admissible = report.class != PositionClass::Neither;
        prop_assert_eq!(sub.minors_criterion(), is_gp);
        prop_assert_eq!(sub.translates_criterion(), admissible);
        let d = n - m;
        if is_gp {
            for (j, &aj) in report.a_counts.iter().enumerate() {
                prop_assert_eq!(aj, binomial(n as i64, j as i64 + 1));
            }
            prop_assert_eq!(report.d_l, binomial(n as i64 - 1, d as i64) as i64);
        }
        // Point enumeration: q^d points, all on the subspace.
        let en = sub.enumerate_points();
        prop_assert_eq!(en.count(), 5u64.pow(d as u32));
        for x in en.points() {
            prop_assert!(sub.contains(&x));
        }
    }

    #[test]
    fn newton_matches_direct_expansion(roots in prop::collection::vec(-5i64..=5, 1..=5)) {
        let degree = roots.len();
        // Exact power sums.
        let ps: Vec<Cyclotomic> = (1..=degree as u32 + 1)
            .map(|r| {
                let sum: i64 = roots.iter().map(|&t| t.pow(r)).sum();
                Cyclotomic::from_int(4, sum).unwrap()
            })
            .collect();
        let es = newton_to_coeffs(&ps, degree).unwrap();
        // Direct expansion of prod (T - root): monic, low-to-high.
        let mut poly = vec![1i128];
        for &root in &roots {
            // Multiply by (T - root).
            let mut next = vec![0i128; poly.len() + 1];
            for (k, &c) in poly.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= root as i128 * c;
            }
            poly = next;
        }
        // e_j = (-1)^j coeff of T^(degree-j).
        for j in 0..=degree {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let expected = sign * poly[degree - j];
            let got = es[j].as_integer().unwrap().unwrap();
            prop_assert_eq!(got, num_bigint::BigInt::from(expected));
        }
    }

    #[test]
    fn root_finder_recovers_integer_roots(
        roots in prop::collection::vec(-6i64..=6, 2..=5)
            .prop_filter("distinct", |v| {
                let mut s = v.clone();
                s.sort_unstable();
                s.windows(2).all(|w| w[0] != w[1])
            }),
    ) {
        let mut poly = vec![1f64];
        for &root in &roots {
            let mut next = vec![0f64; poly.len() + 1];
            for (k, &c) in poly.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= root as f64 * c;
            }
            poly = next;
        }
        let coeffs: Vec<Complex64> = poly.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        let found = poly_roots(&coeffs).unwrap();
        prop_assert_eq!(found.len(), roots.len());
        let mut used = vec![false; found.len()];
        for &root in &roots {
            let target = Complex64::new(root as f64, 0.0);
            let best = found
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .min_by(|(_, x), (_, y)| {
                    (*x - target).norm().total_cmp(&(*y - target).norm())
                })
                .map(|(i, z)| (i, *z))
                .unwrap();
            prop_assert!((best.1 - target).norm() < 1e-6);
            used[best.0] = true;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jacobi_sum_is_symmetric(
        q_params in prop_oneof![Just((5u64, 1u32)), Just((7, 1))],
        exps in prop::collection::vec(1u64..=3, 2..=3),
        swap in any::<bool>(),
    ) {
        let f = make_field(q_params.0, q_params.1).unwrap();
        let chars: Vec<MultChar> = exps
            .iter()
            .map(|&e| MultChar::new(Arc::clone(&f), e))
            .collect();
        let mut permuted = chars.clone();
        if swap {
            permuted.reverse();
        } else {
            permuted.rotate_left(1);
        }
        let a = jacobi_sum(&chars).unwrap();
        let b = jacobi_sum(&permuted).unwrap();
        prop_assert!(a.eq_value(&b).unwrap());
    }

    #[test]
    fn char_sum_scaling_covariance(
        n in 2usize..=3,
        cells in prop::collection::vec(0u64..5, 6),
        rhs in 0u64..5,
        scale_logs in prop::collection::vec(0u64..4, 3),
        exps in prop::collection::vec(1u64..=3, 3),
    ) {
        // For units c_i, y -> diag(c) y maps {sum (a_i c_i) y_i = b} onto
        // {sum a_i x_i = b}, so prod chi_i(c_i) S(scaled) = S(original).
        let f = make_field(5, 1).unwrap();
        let row = &cells[..n];
        if row.iter().all(|&v| v == 0) {
            return Ok(());
        }
        let sub = AffineSubspace::from_codes(Arc::clone(&f), &[row.to_vec()], &[rhs]).unwrap();
        let chars: Vec<MultChar> = exps[..n]
            .iter()
            .map(|&e| MultChar::new(Arc::clone(&f), e))
            .collect();
        let scales: Vec<_> = scale_logs[..n].iter().map(|&j| f.exp(j)).collect();
        let scaled_row: Vec<u64> = row
            .iter()
            .zip(&scales)
            .map(|(&a, &c)| f.mul(f.elem(a).unwrap(), c).code() as u64)
            .collect();
        let scaled = AffineSubspace::from_codes(Arc::clone(&f), &[scaled_row], &[rhs]).unwrap();
        let s = char_sum(&sub, &chars, 1).unwrap().value;
        let s_scaled = char_sum(&scaled, &chars, 1).unwrap().value;
        // prod chi_i(c_i) s_scaled = s.
        let mut factor = Cyclotomic::one(4).unwrap();
        for (chi, &c) in chars.iter().zip(&scales) {
            factor = factor.mul(&chi.eval(c).unwrap()).unwrap();
        }
        let lhs = factor.mul(&s_scaled).unwrap();
        prop_assert!(lhs.eq_value(&s).unwrap());
    }
}
