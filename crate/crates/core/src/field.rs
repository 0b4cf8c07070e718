//! Finite fields `F_{p^a}` with table-based arithmetic.
//!
//! Elements are stored as integer codes in `[0, q)`. Reading a code in base
//! `p` gives the coefficient vector of the element with respect to the power
//! basis `1, x, ..., x^(a-1)` modulo a fixed irreducible polynomial. Code 0
//! is the zero element and code 1 is the multiplicative identity.
//!
//! Construction is deterministic: the modulus is the first monic irreducible
//! polynomial of degree `a` in the code ordering, and the generator is the
//! least element code of multiplicative order `q - 1`. Two calls with the
//! same `(p, a)` always produce identical fields.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numutil::{factorize, is_prime};

/// Default ceiling on the field order. Table construction is O(q log q) and
/// tables take O(q) memory, so anything far beyond this is a mistake.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// An element of a finite field, by integer code.
///
/// Codes are only meaningful relative to the field that produced them;
/// mixing fields is a logic error that arithmetic cannot detect on its own.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn code(self) -> u64 {
        self.0 as u64
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite field of order `q = p^a`, immutable once built.
pub struct Field {
    p: u64,
    a: u32,
    q: u64,
    /// Monic modulus, coefficients low to high, length `a + 1`, each in `[0, p)`.
    modulus: Vec<u32>,
    generator: Elem,
    /// `exp_table[j]` is the code of `g^j` for `j` in `[0, q-1)`.
    exp_table: Vec<u32>,
    /// `log_table[code]` is the discrete log of `code`; `u32::MAX` at zero.
    log_table: Vec<u32>,
}

impl fmt::Debug for Field {
    // The exp/log tables have q entries; keep Debug output readable.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("a", &self.a)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.a == other.a
            && self.modulus == other.modulus
            && self.generator == other.generator
    }
}

impl Eq for Field {}

/// Builds `F_{p^a}` with the default order cap.
pub fn make_field(p: u64, a: u32) -> Result<Arc<Field>> {
    make_field_with_cap(p, a, DEFAULT_FIELD_CAP)
}

/// Builds `F_{p^a}`, refusing orders above `cap`.
pub fn make_field_with_cap(p: u64, a: u32, cap: u64) -> Result<Arc<Field>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if a == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    let q = checked_order(p, a, cap)?;
    let modulus = first_irreducible(p, a);
    let generator = least_generator(p, a, q, &modulus);
    Ok(Arc::new(Field::build(p, a, q, modulus, generator)))
}

/// Rebuilds a field from a stored modulus and generator, validating both.
pub fn field_from_parts(
    p: u64,
    a: u32,
    modulus: Vec<u32>,
    generator: u64,
    cap: u64,
) -> Result<Arc<Field>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if a == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    let q = checked_order(p, a, cap)?;
    if modulus.len() != a as usize + 1 || modulus[a as usize] != 1 {
        return Err(Error::InvalidArgument(format!(
            "modulus must be monic of degree {a}"
        )));
    }
    if modulus.iter().any(|&c| c as u64 >= p) {
        return Err(Error::InvalidArgument(
            "modulus coefficients must lie in [0, p)".into(),
        ));
    }
    let coeffs: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
    if !poly_is_irreducible(&coeffs, p, a) {
        return Err(Error::InvalidArgument("modulus is not irreducible".into()));
    }
    if generator == 0 || generator >= q {
        return Err(Error::InvalidArgument("generator code out of range".into()));
    }
    if !has_full_order(generator, p, a, q, &modulus) {
        return Err(Error::InvalidArgument(format!(
            "element {generator} does not have order {}",
            q - 1
        )));
    }
    Ok(Arc::new(Field::build(p, a, q, modulus, generator)))
}

fn checked_order(p: u64, a: u32, cap: u64) -> Result<u64> {
    let exact = (p as u128).checked_pow(a).unwrap_or(u128::MAX);
    let mut q = 1u64;
    for _ in 0..a {
        q = q.checked_mul(p).filter(|&v| v <= cap).ok_or(Error::CapExceeded {
            what: "field order",
            value: exact,
            cap: cap as u128,
        })?;
    }
    Ok(q)
}

impl Field {
    fn build(p: u64, a: u32, q: u64, modulus: Vec<u32>, generator: u64) -> Field {
        let mut exp_table = vec![0u32; (q - 1) as usize];
        let mut log_table = vec![u32::MAX; q as usize];
        let mut cur = 1u64;
        for j in 0..(q - 1) {
            debug_assert_eq!(log_table[cur as usize], u32::MAX, "generator cycle repeats early");
            exp_table[j as usize] = cur as u32;
            log_table[cur as usize] = j as u32;
            cur = code_mul(cur, generator, p, a, &modulus);
        }
        debug_assert_eq!(cur, 1, "generator does not close its cycle");
        Field {
            p,
            a,
            q,
            modulus,
            generator: Elem(generator as u32),
            exp_table,
            log_table,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Extension degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.a
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, low to high, length `degree() + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Wraps a raw code, checking range.
    pub fn elem(&self, code: u64) -> Result<Elem> {
        if code < self.q {
            Ok(Elem(code as u32))
        } else {
            Err(Error::InvalidArgument(format!(
                "element code {code} out of range for field of order {}",
                self.q
            )))
        }
    }

    /// Embeds a prime-field residue as a constant polynomial.
    pub fn from_residue(&self, v: u64) -> Elem {
        Elem((v % self.p) as u32)
    }

    /// All elements, ascending by code.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(|c| Elem(c as u32))
    }

    /// All nonzero elements in generator-power order: `g^0, g^1, ...`.
    pub fn units(&self) -> impl Iterator<Item = Elem> + '_ {
        self.exp_table.iter().map(|&c| Elem(c))
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        let mut cx = x.code();
        let mut cy = y.code();
        let mut out = 0u64;
        let mut place = 1u64;
        while cx != 0 || cy != 0 {
            let d = (cx % self.p + cy % self.p) % self.p;
            out += d * place;
            place *= self.p;
            cx /= self.p;
            cy /= self.p;
        }
        Elem(out as u32)
    }

    pub fn neg(&self, x: Elem) -> Elem {
        let mut cx = x.code();
        let mut out = 0u64;
        let mut place = 1u64;
        while cx != 0 {
            let d = cx % self.p;
            if d != 0 {
                out += (self.p - d) * place;
            }
            place *= self.p;
            cx /= self.p;
        }
        Elem(out as u32)
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.is_zero() || y.is_zero() {
            return Elem::ZERO;
        }
        let j = self.log_table[x.0 as usize] as u64 + self.log_table[y.0 as usize] as u64;
        Elem(self.exp_table[(j % (self.q - 1)) as usize])
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let j = self.log_table[x.0 as usize] as u64;
        let k = if j == 0 { 0 } else { self.q - 1 - j };
        Ok(Elem(self.exp_table[k as usize]))
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e` with `0^0 = 1`.
    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        if x.is_zero() {
            return if e == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let j = self.log_table[x.0 as usize] as u64;
        let k = (j % (self.q - 1)) * (e % (self.q - 1)) % (self.q - 1);
        Elem(self.exp_table[k as usize])
    }

    /// `g^j` for the fixed generator `g`.
    pub fn exp(&self, j: u64) -> Elem {
        Elem(self.exp_table[(j % (self.q - 1)) as usize])
    }

    /// Discrete log base the fixed generator. Zero has no logarithm.
    pub fn dlog(&self, x: Elem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(self.log_table[x.0 as usize] as u64)
    }

    /// Absolute trace down to `F_p`, returned as a residue in `[0, p)`.
    pub fn trace(&self, x: Elem) -> u64 {
        let mut acc = Elem::ZERO;
        let mut cur = x;
        for _ in 0..self.a {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.p);
        }
        debug_assert!(acc.code() < self.p, "trace landed outside the prime field");
        acc.code()
    }
}

// Polynomial arithmetic on codes, used during table construction only.
// A code is read base p as coefficients of a polynomial of degree < a.

fn code_mul(x: u64, y: u64, p: u64, a: u32, modulus: &[u32]) -> u64 {
    let a = a as usize;
    let mut prod = vec![0u64; 2 * a];
    let xd = code_digits(x, p, a);
    let yd = code_digits(y, p, a);
    for (i, &xi) in xd.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in yd.iter().enumerate() {
            prod[i + j] = (prod[i + j] + xi * yj) % p;
        }
    }
    // Reduce modulo the monic modulus f: x^a = -(lower part of f).
    for k in (a..2 * a).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..a {
            let m = modulus[i] as u64;
            if m != 0 {
                let idx = k - a + i;
                prod[idx] = (prod[idx] + (p - m % p) * c) % p;
            }
        }
    }
    digits_code(&prod[..a], p)
}

fn code_digits(mut code: u64, p: u64, a: usize) -> Vec<u64> {
    let mut d = vec![0u64; a];
    for slot in d.iter_mut() {
        *slot = code % p;
        code /= p;
    }
    d
}

fn digits_code(digits: &[u64], p: u64) -> u64 {
    let mut out = 0u64;
    for &d in digits.iter().rev() {
        out = out * p + d;
    }
    out
}

fn code_pow(mut base: u64, mut e: u64, p: u64, a: u32, modulus: &[u32]) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = code_mul(acc, base, p, a, modulus);
        }
        base = code_mul(base, base, p, a, modulus);
        e >>= 1;
    }
    acc
}

fn has_full_order(c: u64, p: u64, a: u32, q: u64, modulus: &[u32]) -> bool {
    if c == 0 {
        return false;
    }
    factorize(q - 1)
        .iter()
        .all(|&(ell, _)| code_pow(c, (q - 1) / ell, p, a, modulus) != 1)
}

fn least_generator(p: u64, a: u32, q: u64, modulus: &[u32]) -> u64 {
    (1..q)
        .find(|&c| has_full_order(c, p, a, q, modulus))
        .expect("a finite field always has a primitive element")
}

// Dense polynomials over F_p (coefficients low to high), used only for the
// irreducibility scan. Degrees here are at most a, so nothing is optimized.

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(x: &[u64], y: &[u64], p: u64) -> Vec<u64> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; x.len() + y.len() - 1];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            out[i + j] = (out[i + j] + xi * yj) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder modulo a monic polynomial `f`.
fn poly_rem(x: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = x.to_vec();
    poly_trim(&mut r);
    let df = f.len() - 1;
    while r.len() > df {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - df;
        if lead != 0 {
            for i in 0..df {
                let idx = shift + i;
                r[idx] = (r[idx] + (p - f[i] % p) * lead) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_powmod(x: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = poly_rem(x, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, p), f, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), f, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(x: &[u64], y: &[u64], p: u64) -> Vec<u64> {
    let mut a = x.to_vec();
    let mut b = y.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        // Make b monic so poly_rem applies.
        let lead = *b.last().unwrap();
        if lead != 1 {
            let inv = mod_inv(lead, p);
            for c in b.iter_mut() {
                *c = *c * inv % p;
            }
        }
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn mod_inv(x: u64, p: u64) -> u64 {
    // Fermat; p is prime and x is nonzero mod p.
    let mut acc = 1u64;
    let mut base = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn poly_sub(x: &[u64], y: &[u64], p: u64) -> Vec<u64> {
    let n = x.len().max(y.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let xi = x.get(i).copied().unwrap_or(0);
        let yi = y.get(i).copied().unwrap_or(0);
        out[i] = (xi + p - yi) % p;
    }
    poly_trim(&mut out);
    out
}

/// Irreducibility of a monic degree-`a` polynomial over `F_p`: requires
/// `x^(p^a) = x (mod f)` and `gcd(x^(p^(a/l)) - x, f) = 1` for every prime
/// `l` dividing `a`.
fn poly_is_irreducible(f: &[u64], p: u64, a: u32) -> bool {
    if a == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // Frobenius iterates: x^(p^k) mod f, computed one p-power at a time.
    let frob = |k: u32| -> Vec<u64> {
        let mut t = x.clone();
        for _ in 0..k {
            t = poly_powmod(&t, p, f, p);
        }
        t
    };
    if poly_rem(&poly_sub(&frob(a), &x, p), f, p) != Vec::<u64>::new() {
        return false;
    }
    for (ell, _) in factorize(a as u64) {
        let k = a / ell as u32;
        let g = poly_sub(&frob(k), &x, p);
        let gcd = poly_gcd(f, &g, p);
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible of degree `a` in the code ordering: candidate
/// code `c` encodes the low coefficients, leading coefficient fixed at 1.
fn first_irreducible(p: u64, a: u32) -> Vec<u32> {
    let au = a as usize;
    let mut low_count = 1u64;
    for _ in 0..a {
        low_count *= p;
    }
    for c in 0..low_count {
        let mut coeffs: Vec<u64> = code_digits(c, p, au);
        coeffs.push(1);
        if a > 1 && coeffs[0] == 0 {
            continue; // divisible by x
        }
        if poly_is_irreducible(&coeffs, p, a) {
            return coeffs.iter().map(|&c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// An embedding of `base = F_q` into `ext = F_{q^r}` together with the norm
/// map back down.
///
/// The image of the base generator is found by locating the least root of
/// the base modulus inside the subfield of order `q` in `ext`; the embedding
/// is then coefficient-wise Horner evaluation at that root, which makes it a
/// ring homomorphism by construction.
pub struct FieldEmbedding {
    base: Arc<Field>,
    ext: Arc<Field>,
    r: u32,
    /// `(q^r - 1) / (q - 1)`; the norm is `x -> x^stride`.
    stride: u64,
    /// `image[c]` is the ext code of the base element with code `c`.
    image: Vec<u32>,
    /// Ext code back to base code, for elements in the image.
    preimage: HashMap<u32, u32>,
    /// Constant `c` with `dlog_base(norm(h^t)) = t * c  (mod q - 1)`, where
    /// `h` generates `ext`.
    norm_scale: u64,
}

impl fmt::Debug for FieldEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldEmbedding")
            .field("base_order", &self.base.order())
            .field("ext_order", &self.ext.order())
            .field("r", &self.r)
            .finish()
    }
}

/// Builds `F_{q^r}` over `base` with the default order cap.
pub fn extend_field(base: &Arc<Field>, r: u32) -> Result<FieldEmbedding> {
    extend_field_with_cap(base, r, DEFAULT_FIELD_CAP)
}

pub fn extend_field_with_cap(base: &Arc<Field>, r: u32, cap: u64) -> Result<FieldEmbedding> {
    if r == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    let ext = make_field_with_cap(base.p(), base.degree() * r, cap)?;
    let q = base.order();
    let qr = ext.order();
    let stride = (qr - 1) / (q - 1);

    // Subfield of order q inside ext: zero plus the powers h^(j * stride).
    let mut subfield: Vec<Elem> = Vec::with_capacity(q as usize);
    subfield.push(Elem::ZERO);
    for j in 0..(q - 1) {
        subfield.push(ext.exp(j * stride));
    }
    subfield.sort_unstable();

    // Least root of the base modulus among subfield elements.
    let mod_coeffs: Vec<Elem> = base.modulus().iter().map(|&c| Elem(c)).collect();
    let beta = subfield
        .iter()
        .copied()
        .find(|&b| horner(&ext, &mod_coeffs, b).is_zero())
        .expect("the base modulus splits in any extension of its splitting field");

    let mut image = vec![0u32; q as usize];
    let mut preimage = HashMap::with_capacity(q as usize);
    for code in 0..q {
        let digits: Vec<Elem> = code_digits(code, base.p(), base.degree() as usize)
            .into_iter()
            .map(|d| Elem(d as u32))
            .collect();
        let y = horner(&ext, &digits, beta);
        image[code as usize] = y.0;
        preimage.insert(y.0, code as u32);
    }
    debug_assert_eq!(preimage.len(), q as usize, "embedding is not injective");
    debug_assert_eq!(image[0], 0);
    debug_assert_eq!(image[1], 1);

    // The image of the base generator must again have order q - 1.
    let g_img = Elem(image[base.generator().0 as usize]);
    debug_assert!({
        let lambda = ext.dlog(g_img).unwrap();
        let g = gcd(lambda, qr - 1);
        (qr - 1) / g == q - 1
    });
    let _ = g_img;

    // norm(h) = h^stride lies in the image; its base dlog is the scale.
    let nh = ext.exp(stride);
    let nh_base = *preimage
        .get(&nh.0)
        .expect("norm of the extension generator lies in the base subfield");
    let norm_scale = base.dlog(Elem(nh_base))?;

    Ok(FieldEmbedding {
        base: Arc::clone(base),
        ext,
        r,
        stride,
        image,
        preimage,
        norm_scale,
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Horner evaluation; coefficients stored low to high.
fn horner(f: &Field, coeffs_low_to_high: &[Elem], x: Elem) -> Elem {
    let mut acc = Elem::ZERO;
    for &c in coeffs_low_to_high.iter().rev() {
        acc = f.add(f.mul(acc, x), c);
    }
    acc
}

impl FieldEmbedding {
    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<Field> {
        &self.ext
    }

    /// Relative degree `[ext : base]`.
    pub fn rel_degree(&self) -> u32 {
        self.r
    }

    /// `(q^r - 1) / (q - 1)`.
    pub fn stride(&self) -> u64 {
        self.stride
    }

    /// Scale constant relating ext dlogs to base dlogs through the norm.
    pub fn norm_scale(&self) -> u64 {
        self.norm_scale
    }

    /// Maps a base element up into the extension.
    pub fn apply(&self, x: Elem) -> Elem {
        Elem(self.image[x.0 as usize])
    }

    /// Pulls an extension element back down; None if it is not in the image.
    pub fn pull_back(&self, y: Elem) -> Option<Elem> {
        self.preimage.get(&y.0).map(|&c| Elem(c))
    }

    /// Field norm `ext -> base`: `x -> x^((q^r - 1)/(q - 1))`, with 0 -> 0.
    pub fn norm(&self, x: Elem) -> Elem {
        if x.is_zero() {
            return Elem::ZERO;
        }
        let y = self.ext.pow(x, self.stride);
        self.pull_back(y)
            .expect("norms always land in the base subfield")
    }

    /// Base dlog of `norm(x)` for nonzero `x`, without a table lookup chain:
    /// `dlog(norm(x)) = dlog_ext(x) * norm_scale  (mod q - 1)`.
    pub fn norm_dlog(&self, x: Elem) -> Result<u64> {
        let t = self.ext.dlog(x)?;
        let q1 = self.base.order() - 1;
        Ok((t % q1) * (self.norm_scale % q1) % q1)
    }
}
