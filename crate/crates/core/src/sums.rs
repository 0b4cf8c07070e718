//! Character sums over affine subspaces and over parametrized families of
//! linear forms.
//!
//! `S_r(L; chi_1..chi_n) = sum over x in L(k_r) of prod_i chi_i(N(x_i))`
//! where `N` is the norm from the degree-r extension back to the base
//! field. Terms with any zero coordinate vanish (`chi(0) = 0`).
//!
//! The inner loop never touches cyclotomic arithmetic: each point
//! contributes one increment to an integer histogram indexed by the
//! exponent of `zeta_(q-1)`, and the histogram is converted to an exact
//! cyclotomic value once at the end. Chunked parallel evaluation is exact,
//! so the result does not depend on the chunking.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::characters::{jacobi_sum, MultChar};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::field::{extend_field, Elem, Field};
use crate::linalg::FpMat;
use crate::subspace::{AffineSubspace, Combinations, PointEnumerator};

/// Default ceiling on `q^(r d)`, the number of enumerated points.
pub const DEFAULT_POINT_CAP: u64 = 1_000_000_000;

#[derive(Clone, Debug)]
pub struct CharSumResult {
    /// Exact value in Q(zeta_(q-1)), q the base field order.
    pub value: Cyclotomic,
    /// Extension degree the sum was taken over.
    pub r: u32,
    /// Number of points of `L(k_r)`, i.e. `q^(r d)`.
    pub point_count: u64,
    pub elapsed: Duration,
}

fn validate_chars(field: &Arc<Field>, n: usize, chars: &[MultChar]) -> Result<()> {
    if chars.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} characters for ambient dimension {n}",
            chars.len()
        )));
    }
    for c in chars {
        if **c.field() != **field {
            return Err(Error::FieldMismatch);
        }
        if c.is_trivial() {
            return Err(Error::TrivialCharacter);
        }
    }
    Ok(())
}

/// `S_r(L; chars)` with the default point cap.
pub fn char_sum(sub: &AffineSubspace, chars: &[MultChar], r: u32) -> Result<CharSumResult> {
    char_sum_with_cap(sub, chars, r, DEFAULT_POINT_CAP)
}

pub fn char_sum_with_cap(
    sub: &AffineSubspace,
    chars: &[MultChar],
    r: u32,
    cap: u64,
) -> Result<CharSumResult> {
    char_sum_impl(sub, chars, r, cap, false)
}

/// Same sum and exact value as [`char_sum`], evaluated by a plain
/// sequential loop. Exists so the chunk-parallel path can be pinned
/// against it, and for controlled single-thread timing.
pub fn char_sum_serial(
    sub: &AffineSubspace,
    chars: &[MultChar],
    r: u32,
    cap: u64,
) -> Result<CharSumResult> {
    char_sum_impl(sub, chars, r, cap, true)
}

fn char_sum_impl(
    sub: &AffineSubspace,
    chars: &[MultChar],
    r: u32,
    cap: u64,
    serial: bool,
) -> Result<CharSumResult> {
    let start = Instant::now();
    let base = sub.field();
    validate_chars(base, sub.n(), chars)?;
    if r == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    let q1 = base.order() - 1;
    let (ext_sub, nlog) = extension_view(sub, r)?;

    let en = ext_sub.enumerate_points();
    let total = en.count();
    if total > cap {
        return Err(Error::CapExceeded {
            what: "point enumeration",
            value: total as u128,
            cap: cap as u128,
        });
    }
    let weights: Vec<u64> = chars.iter().map(|c| c.exponent()).collect();
    let hist = if serial {
        histogram_serial(&en, &weights, &nlog, q1, total)
    } else {
        histogram_parallel(&en, &weights, &nlog, q1, total)
    };
    let value = Cyclotomic::from_histogram(q1, &hist)?;
    Ok(CharSumResult {
        value,
        r,
        point_count: total,
        elapsed: start.elapsed(),
    })
}

/// Views `L` over the degree-`r` extension and builds the norm-dlog
/// table: for nonzero extension elements `y`, `nlog[y] = dlog_base(N(y))`;
/// `u32::MAX` marks zero.
fn extension_view(sub: &AffineSubspace, r: u32) -> Result<(AffineSubspace, Vec<u32>)> {
    let base = sub.field();
    if r == 1 {
        let mut nlog = vec![u32::MAX; base.order() as usize];
        for y in base.units() {
            nlog[y.0 as usize] = base.dlog(y).expect("unit") as u32;
        }
        return Ok((sub.clone(), nlog));
    }
    let emb = extend_field(base, r)?;
    let ext = emb.ext();
    let mut nlog = vec![u32::MAX; ext.order() as usize];
    for y in ext.units() {
        nlog[y.0 as usize] = emb.norm_dlog(y).expect("unit") as u32;
    }
    let mut rows = Vec::with_capacity(sub.m());
    for i in 0..sub.m() {
        rows.push(
            sub.matrix()
                .row(i)
                .iter()
                .map(|&e| emb.apply(e).code())
                .collect::<Vec<u64>>(),
        );
    }
    let b: Vec<u64> = sub.rhs().iter().map(|&e| emb.apply(e).code()).collect();
    let lifted = AffineSubspace::from_codes(Arc::clone(ext), &rows, &b)?;
    Ok((lifted, nlog))
}

fn histogram_serial(
    en: &PointEnumerator,
    weights: &[u64],
    nlog: &[u32],
    q1: u64,
    total: u64,
) -> Vec<i64> {
    let mut hist = vec![0i64; q1 as usize];
    let mut buf = Vec::new();
    for idx in 0..total {
        en.point_into(idx, &mut buf);
        let mut acc = 0u64;
        let mut dead = false;
        for (i, &xi) in buf.iter().enumerate() {
            let t = nlog[xi.0 as usize];
            if t == u32::MAX {
                dead = true;
                break;
            }
            acc += weights[i] * t as u64;
        }
        if !dead {
            hist[(acc % q1) as usize] += 1;
        }
    }
    hist
}

/// Single-threaded reference evaluation of the same histogram; used to pin
/// down the parallel path in tests.
pub fn char_sum_reference(
    sub: &AffineSubspace,
    chars: &[MultChar],
) -> Result<Cyclotomic> {
    let base = sub.field();
    validate_chars(base, sub.n(), chars)?;
    let q1 = base.order() - 1;
    let weights: Vec<u64> = chars.iter().map(|c| c.exponent()).collect();
    let en = sub.enumerate_points();
    let mut hist = vec![0i64; q1 as usize];
    let mut x = Vec::new();
    for idx in 0..en.count() {
        en.point_into(idx, &mut x);
        accumulate_point(&x, &weights, |y| {
            if y.is_zero() {
                None
            } else {
                Some(base.dlog(y).expect("unit"))
            }
        }, q1, &mut hist);
    }
    Cyclotomic::from_histogram(q1, &hist)
}

fn accumulate_point(
    x: &[Elem],
    weights: &[u64],
    nlog: impl Fn(Elem) -> Option<u64>,
    q1: u64,
    hist: &mut [i64],
) {
    let mut acc = 0u64;
    for (i, &xi) in x.iter().enumerate() {
        match nlog(xi) {
            None => return,
            Some(t) => acc = (acc + weights[i] * t) % q1,
        }
    }
    hist[acc as usize] += 1;
}

fn histogram_parallel(
    en: &PointEnumerator,
    weights: &[u64],
    nlog: &[u32],
    q1: u64,
    total: u64,
) -> Vec<i64> {
    let merge = |mut a: Vec<i64>, b: Vec<i64>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    (0..total as usize)
        .into_par_iter()
        .with_min_len(4096)
        .fold(
            || (vec![0i64; q1 as usize], Vec::new()),
            |(mut hist, mut buf), idx| {
                en.point_into(idx as u64, &mut buf);
                let mut acc = 0u64;
                let mut dead = false;
                for (i, &xi) in buf.iter().enumerate() {
                    let t = nlog[xi.0 as usize];
                    if t == u32::MAX {
                        dead = true;
                        break;
                    }
                    acc += weights[i] * t as u64;
                }
                if !dead {
                    hist[(acc % q1) as usize] += 1;
                }
                (hist, buf)
            },
        )
        .map(|(hist, _)| hist)
        .reduce(|| vec![0i64; q1 as usize], merge)
}

/// Verifies the hyperplane change-of-variables identity exactly:
/// for `L: a_1 x_1 + ... + a_n x_n = b` with all `a_i != 0` and `b != 0`,
///
/// `S(L; chars) = (prod chi_i)(b) * prod_i conj(chi_i)(a_i) * J(chars)`.
pub fn hyperplane_reduction_check(sub: &AffineSubspace, chars: &[MultChar]) -> Result<bool> {
    if sub.m() != 1 {
        return Err(Error::NotAHyperplane(format!(
            "codimension is {}, need 1",
            sub.m()
        )));
    }
    let field = Arc::clone(sub.field());
    validate_chars(&field, sub.n(), chars)?;
    let coeffs = sub.matrix().row(0).to_vec();
    if let Some(i) = coeffs.iter().position(|c| c.is_zero()) {
        return Err(Error::NotAHyperplane(format!("coefficient a_{} is zero", i + 1)));
    }
    let b = sub.rhs()[0];
    if b.is_zero() {
        return Err(Error::NotAHyperplane("constant term is zero".into()));
    }

    let lhs = char_sum(sub, chars, 1)?.value;

    // Twist factor as a single power of zeta_(q-1).
    let q1 = field.order() - 1;
    let log_b = field.dlog(b).expect("b is nonzero");
    let mut exp = 0u64;
    for (chi, &ai) in chars.iter().zip(&coeffs) {
        let log_a = field.dlog(ai).expect("a_i is nonzero");
        let e = chi.exponent();
        // chi_i(b) * conj(chi_i)(a_i) contributes e*log_b - e*log_a.
        exp = (exp + e * log_b + (q1 - e) * log_a) % q1;
    }
    let twist = Cyclotomic::root_power(q1, exp)?;
    let rhs = twist.mul(&jacobi_sum(chars)?)?;
    lhs.eq_value(&rhs)
}

/// A family of affine linear forms `L_i(t) = sum_j a_ij t_j + b_i` on
/// `k^d`, the setting of parametrized character sums.
#[derive(Clone, Debug)]
pub struct LinearFormSystem {
    field: Arc<Field>,
    /// `n x d` coefficient matrix `(a_ij)`.
    coeffs: FpMat,
    /// Constants `b_i`, length n.
    consts: Vec<Elem>,
}

impl LinearFormSystem {
    /// Requires the coefficient matrix to have full column rank `d`.
    pub fn new(coeffs: FpMat, consts: Vec<Elem>) -> Result<LinearFormSystem> {
        let n = coeffs.rows();
        let d = coeffs.cols();
        if n == 0 || d == 0 {
            return Err(Error::InvalidArgument(
                "need at least one form and one parameter".into(),
            ));
        }
        if consts.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} constants for {n} forms",
                consts.len()
            )));
        }
        let rank = coeffs.rank();
        if rank < d {
            return Err(Error::RankDeficient { rank, required: d });
        }
        let field = Arc::clone(coeffs.field());
        Ok(LinearFormSystem {
            field,
            coeffs,
            consts,
        })
    }

    pub fn from_codes(
        field: Arc<Field>,
        forms: &[(Vec<u64>, u64)],
    ) -> Result<LinearFormSystem> {
        let rows: Vec<Vec<u64>> = forms.iter().map(|(a, _)| a.clone()).collect();
        let coeffs = FpMat::from_rows(Arc::clone(&field), &rows)?;
        let consts = forms
            .iter()
            .map(|&(_, b)| field.elem(b))
            .collect::<Result<Vec<Elem>>>()?;
        LinearFormSystem::new(coeffs, consts)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Number of forms.
    pub fn n(&self) -> usize {
        self.coeffs.rows()
    }

    /// Number of parameters.
    pub fn d(&self) -> usize {
        self.coeffs.cols()
    }

    /// Evaluates all forms at a parameter point.
    pub fn eval(&self, t: &[Elem]) -> Vec<Elem> {
        let mut out = self.coeffs.mat_vec(t);
        for (o, &b) in out.iter_mut().zip(&self.consts) {
            *o = self.field.add(*o, b);
        }
        out
    }

    /// Dimension of the intersection of the zero sets `V_i = {L_i = 0}`
    /// for `i` in the given set; -1 when empty.
    pub fn dim_zero_intersection(&self, set: &[usize]) -> i64 {
        let d = self.d();
        let rows: Vec<Vec<Elem>> = set
            .iter()
            .map(|&i| self.coeffs.row(i).to_vec())
            .collect();
        let mut mat = FpMat::zeros(Arc::clone(&self.field), set.len(), d);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                mat.set(r, c, v);
            }
        }
        let rhs: Vec<Elem> = set.iter().map(|&i| self.field.neg(self.consts[i])).collect();
        let aug = mat.augment_col(&rhs);
        let rref = aug.rref();
        if rref.pivots.last() == Some(&d) {
            return -1;
        }
        d as i64 - rref.rank as i64
    }

    /// The image of `t -> (L_1(t), ..., L_n(t))` as an affine subspace of
    /// ambient dimension n; requires `n > d` so the image is proper.
    pub fn image_subspace(&self) -> Result<AffineSubspace> {
        let n = self.n();
        let d = self.d();
        if n <= d {
            return Err(Error::InvalidArgument(
                "image subspace needs more forms than parameters".into(),
            ));
        }
        // Rows annihilating the columns of (a_ij): kernel of the transpose.
        let kernel = self.coeffs.transpose().kernel_basis();
        debug_assert_eq!(kernel.len(), n - d);
        let mut a_mat = FpMat::zeros(Arc::clone(&self.field), n - d, n);
        for (r, v) in kernel.iter().enumerate() {
            for (c, &e) in v.iter().enumerate() {
                a_mat.set(r, c, e);
            }
        }
        let b_vec = a_mat.mat_vec(&self.consts);
        AffineSubspace::new(a_mat, b_vec)
    }
}

#[derive(Clone, Debug)]
pub struct ParamSumResult {
    /// Exact value of `sum over t in k^d of prod_i chi_i(L_i(t))`.
    pub value: Cyclotomic,
    /// Whether `dim(intersection of V_i, i in I) <= d - |I|` held for all
    /// `I` with `|I| <= d + 1`.
    pub hypothesis_ok: bool,
    /// Degree invariant computed from the nonempty-intersection counts.
    pub d_l: i64,
    pub point_count: u64,
    /// Whether the value was cross-checked against the image subspace.
    pub cross_checked: bool,
}

/// Direct evaluation of the parametrized sum of a linear-form system, with
/// the position hypothesis check and (when `n > d`) an exact cross-check
/// against `char_sum` on the image subspace.
pub fn param_sum(sys: &LinearFormSystem, chars: &[MultChar]) -> Result<ParamSumResult> {
    param_sum_with_cap(sys, chars, DEFAULT_POINT_CAP)
}

pub fn param_sum_with_cap(
    sys: &LinearFormSystem,
    chars: &[MultChar],
    cap: u64,
) -> Result<ParamSumResult> {
    let field = Arc::clone(sys.field());
    validate_chars(&field, sys.n(), chars)?;
    let n = sys.n();
    let d = sys.d();
    let q = field.order();
    let q1 = q - 1;

    // Position hypothesis and a_j counts over the zero sets.
    let mut hypothesis_ok = true;
    let mut a_counts = vec![0u64; d];
    for j in 1..=(d + 1).min(n) {
        for set in Combinations::new(n, j) {
            let dim = sys.dim_zero_intersection(&set);
            if dim > d as i64 - j as i64 {
                hypothesis_ok = false;
            }
            if j <= d && dim >= 0 {
                a_counts[j - 1] += 1;
            }
        }
    }
    let mut d_l = if d % 2 == 0 { 1i64 } else { -1i64 };
    for (jm1, &aj) in a_counts.iter().enumerate() {
        let j = jm1 + 1;
        let sign = if (d + j) % 2 == 0 { 1i64 } else { -1i64 };
        d_l += sign * aj as i64;
    }

    // Direct enumeration over t in k^d.
    let mut total = 1u64;
    for _ in 0..d {
        total = total.saturating_mul(q);
    }
    if total > cap {
        return Err(Error::CapExceeded {
            what: "parameter enumeration",
            value: total as u128,
            cap: cap as u128,
        });
    }
    let weights: Vec<u64> = chars.iter().map(|c| c.exponent()).collect();
    let mut hist = vec![0i64; q1 as usize];
    let mut t = vec![Elem::ZERO; d];
    for idx in 0..total {
        let mut rem = idx;
        for slot in t.iter_mut().rev() {
            *slot = Elem((rem % q) as u32);
            rem /= q;
        }
        let vals = sys.eval(&t);
        accumulate_point(&vals, &weights, |y| {
            if y.is_zero() {
                None
            } else {
                Some(field.dlog(y).expect("unit"))
            }
        }, q1, &mut hist);
    }
    let value = Cyclotomic::from_histogram(q1, &hist)?;

    // Cross-check through the image subspace when it is proper. The map
    // t -> (L_i(t)) is injective (rank d), so both sums range over the
    // same multiset of coordinate tuples.
    let mut cross_checked = false;
    if n > d {
        let image = sys.image_subspace()?;
        debug_assert_eq!(image.dim(), d);
        let via_subspace = char_sum_with_cap(&image, chars, 1, cap)?;
        assert!(
            value.eq_value(&via_subspace.value)?,
            "parametrized sum disagrees with its image-subspace evaluation"
        );
        cross_checked = true;
    }

    Ok(ParamSumResult {
        value,
        hypothesis_ok,
        d_l,
        point_count: total,
        cross_checked,
    })
}
