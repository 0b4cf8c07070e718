//! Multiplicative and additive characters of finite fields, with Gauss and
//! Jacobi sums evaluated exactly in cyclotomic fields.
//!
//! A multiplicative character is determined by its exponent `e`: it sends
//! the fixed generator `g` to `zeta_(q-1)^e` and is extended by `chi(0) = 0`.
//! An additive character is `psi_b(x) = zeta_p^(Tr(b x))`.

use std::sync::Arc;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldEmbedding};

#[derive(Clone, Debug)]
pub struct MultChar {
    field: Arc<Field>,
    /// Exponent in `[0, q-1)`; 0 is the trivial character.
    e: u64,
}

impl PartialEq for MultChar {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.e == other.e
    }
}

impl MultChar {
    pub fn new(field: Arc<Field>, e: u64) -> MultChar {
        let m = field.order() - 1;
        MultChar { field, e: e % m }
    }

    pub fn trivial(field: Arc<Field>) -> MultChar {
        MultChar::new(field, 0)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    pub fn is_trivial(&self) -> bool {
        self.e == 0
    }

    /// Order of the character in the dual group.
    pub fn char_order(&self) -> u64 {
        if self.e == 0 {
            return 1;
        }
        let m = self.field.order() - 1;
        m / num_integer::gcd(self.e, m)
    }

    /// The exponent `j` with `chi(x) = zeta_(q-1)^j`, or None at zero.
    pub fn log_value(&self, x: Elem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let m = self.field.order() - 1;
        let j = self.field.dlog(x).expect("nonzero element has a dlog");
        Some(self.e * j % m)
    }

    /// `chi(x)` as an exact cyclotomic value; `chi(0) = 0`.
    pub fn eval(&self, x: Elem) -> Result<Cyclotomic> {
        let m = self.field.order() - 1;
        match self.log_value(x) {
            None => Cyclotomic::zero(m),
            Some(j) => Cyclotomic::root_power(m, j),
        }
    }

    /// Pointwise product of characters on the same field.
    pub fn product(&self, rhs: &MultChar) -> Result<MultChar> {
        if *self.field != *rhs.field {
            return Err(Error::FieldMismatch);
        }
        Ok(MultChar::new(Arc::clone(&self.field), self.e + rhs.e))
    }

    /// Complex conjugate character (the inverse in the dual group).
    pub fn conj(&self) -> MultChar {
        let m = self.field.order() - 1;
        let e = if self.e == 0 { 0 } else { m - self.e };
        MultChar {
            field: Arc::clone(&self.field),
            e,
        }
    }

    /// Composition with the field norm from an extension: the lifted
    /// character `chi o N` on `ext`.
    ///
    /// If `chi(g^j) = zeta_(q-1)^(e j)` then the lift has exponent
    /// `((e * c) mod (q-1)) * stride` where `c` is the embedding's norm
    /// scale and `stride = (q^r - 1)/(q - 1)`.
    pub fn lift(&self, emb: &FieldEmbedding) -> Result<MultChar> {
        if *self.field != **emb.base() {
            return Err(Error::FieldMismatch);
        }
        let q1 = self.field.order() - 1;
        let e_ext = (self.e * emb.norm_scale() % q1) * emb.stride();
        Ok(MultChar::new(Arc::clone(emb.ext()), e_ext))
    }
}

#[derive(Clone, Debug)]
pub struct AddChar {
    field: Arc<Field>,
    b: Elem,
}

impl AddChar {
    pub fn new(field: Arc<Field>, b: Elem) -> AddChar {
        AddChar { field, b }
    }

    /// The canonical additive character `psi_1`.
    pub fn canonical(field: Arc<Field>) -> AddChar {
        AddChar { field, b: Elem::ONE }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn shift(&self) -> Elem {
        self.b
    }

    pub fn is_trivial(&self) -> bool {
        self.b.is_zero()
    }

    /// Exponent `t` with `psi(x) = zeta_p^t`.
    pub fn log_value(&self, x: Elem) -> u64 {
        self.field.trace(self.field.mul(self.b, x))
    }

    pub fn eval(&self, x: Elem) -> Result<Cyclotomic> {
        Cyclotomic::root_power(self.field.p(), self.log_value(x))
    }
}

/// Gauss sum `G(chi, psi) = sum_x chi(x) psi(x)`, exact, at root order
/// `p (q - 1)`.
///
/// With the `chi(0) = 0` convention: if both characters are nontrivial the
/// modulus squared is `q`; a trivial `chi` against a nontrivial `psi`
/// gives -1; a nontrivial `chi` against a trivial `psi` gives 0; both
/// trivial gives `q - 1`.
pub fn gauss_sum(chi: &MultChar, psi: &AddChar) -> Result<Cyclotomic> {
    if *chi.field() != *psi.field() {
        return Err(Error::FieldMismatch);
    }
    let f = chi.field();
    let q1 = f.order() - 1;
    let p = f.p();
    let m = p * q1;
    let mut hist = vec![0i64; m as usize];
    for x in f.units() {
        let s = chi.log_value(x).expect("unit has a character value");
        let t = psi.log_value(x);
        // zeta_(q-1)^s * zeta_p^t = zeta_m^(p s + (q-1) t).
        let idx = (p * s + q1 * t) % m;
        hist[idx as usize] += 1;
    }
    Cyclotomic::from_histogram(m, &hist)
}

/// Jacobi sum `J(chi_1, ..., chi_n) = sum over x_1 + ... + x_n = 1 of
/// prod_i chi_i(x_i)`, exact, at root order `q - 1`.
///
/// All characters must be nontrivial and on a common field. Terms with any
/// zero coordinate vanish because `chi(0) = 0`, so the enumeration walks
/// unit tuples for the first `n - 1` coordinates.
pub fn jacobi_sum(chars: &[MultChar]) -> Result<Cyclotomic> {
    if chars.is_empty() {
        return Err(Error::InvalidArgument("need at least one character".into()));
    }
    let f = chars[0].field();
    for c in chars {
        if **c.field() != **f {
            return Err(Error::FieldMismatch);
        }
        if c.is_trivial() {
            return Err(Error::TrivialCharacter);
        }
    }
    let q1 = f.order() - 1;
    let n = chars.len();
    let mut hist = vec![0i64; q1 as usize];
    if n == 1 {
        // Only x_1 = 1 contributes: J(chi) = chi(1) = 1.
        hist[0] = 1;
        return Cyclotomic::from_histogram(q1, &hist);
    }
    // Odometer over dlogs of the first n-1 coordinates.
    let mut js = vec![0u64; n - 1];
    loop {
        let mut sum = Elem::ZERO;
        let mut log_acc = 0u64;
        for (i, &j) in js.iter().enumerate() {
            let x = f.exp(j);
            sum = f.add(sum, x);
            log_acc = (log_acc + chars[i].exponent() * j) % q1;
        }
        let last = f.sub(Elem::ONE, sum);
        if !last.is_zero() {
            let jl = f.dlog(last).expect("nonzero");
            let idx = (log_acc + chars[n - 1].exponent() * jl) % q1;
            hist[idx as usize] += 1;
        }
        // Advance the odometer.
        let mut k = 0;
        loop {
            if k == n - 1 {
                return Cyclotomic::from_histogram(q1, &hist);
            }
            js[k] += 1;
            if js[k] < q1 {
                break;
            }
            js[k] = 0;
            k += 1;
        }
    }
}

/// The same Jacobi sum computed through Gauss sums against the canonical
/// additive character:
///
/// - product character nontrivial:
///   `J = prod_i G(chi_i) * conj(G(prod chi)) / q`,
/// - product character trivial:
///   `J = - prod_i G(chi_i) / q`.
pub fn jacobi_via_gauss(chars: &[MultChar]) -> Result<Cyclotomic> {
    if chars.is_empty() {
        return Err(Error::InvalidArgument("need at least one character".into()));
    }
    let f = Arc::clone(chars[0].field());
    for c in chars {
        if **c.field() != *f {
            return Err(Error::FieldMismatch);
        }
        if c.is_trivial() {
            return Err(Error::TrivialCharacter);
        }
    }
    let psi = AddChar::canonical(Arc::clone(&f));
    let mut total = MultChar::trivial(Arc::clone(&f));
    let mut prod: Option<Cyclotomic> = None;
    for c in chars {
        let g = gauss_sum(c, &psi)?;
        prod = Some(match prod {
            None => g,
            Some(acc) => acc.mul(&g)?,
        });
        total = total.product(c)?;
    }
    let prod = prod.expect("at least one character");
    let q = f.order() as i64;
    if total.is_trivial() {
        prod.neg().div_int(q)
    } else {
        let g_total = gauss_sum(&total, &psi)?;
        prod.mul(&g_total.conj())?.div_int(q)
    }
}
