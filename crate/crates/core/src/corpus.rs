//! Instance corpora: seeded random generation of admissible subspace and
//! parametrized-sum instances, and exhaustive enumeration of small linear
//! systems for classifier cross-checks.
//!
//! All randomness flows through [`SplitMix64`], so a `(params, seed)` pair
//! determines the corpus exactly, on any platform.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::characters::MultChar;
use crate::error::{Error, Result};
use crate::field::{make_field, Field};
use crate::linalg::FpMat;
use crate::rng::SplitMix64;
use crate::subspace::{AffineSubspace, Combinations, PositionClass, PositionReport};
use crate::sums::LinearFormSystem;

/// Self-contained description of a character-sum instance: the field, the
/// linear system cut out by `A x = b` (element codes), and the character
/// exponents. Everything needed to reproduce a computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub p: u64,
    pub a: u32,
    /// Rows of `A`, as element codes.
    pub rows: Vec<Vec<u64>>,
    /// Right-hand side `b`, as element codes.
    pub rhs: Vec<u64>,
    /// Character exponents `e_i` with `chi_i = chi^(e_i)` for the fixed
    /// generator character; all must be nonzero mod `q - 1`.
    pub exponents: Vec<u64>,
}

/// An [`InstanceSpec`] turned back into live objects.
pub struct RealizedInstance {
    pub field: Arc<Field>,
    pub sub: AffineSubspace,
    pub chars: Vec<MultChar>,
}

impl InstanceSpec {
    pub fn realize(&self) -> Result<RealizedInstance> {
        let field = make_field(self.p, self.a)?;
        let sub = AffineSubspace::from_codes(Arc::clone(&field), &self.rows, &self.rhs)?;
        if self.exponents.len() != sub.n() {
            return Err(Error::InvalidArgument(format!(
                "{} exponents for ambient dimension {}",
                self.exponents.len(),
                sub.n()
            )));
        }
        let chars: Vec<MultChar> = self
            .exponents
            .iter()
            .map(|&e| MultChar::new(Arc::clone(&field), e))
            .collect();
        if chars.iter().any(|c| c.is_trivial()) {
            return Err(Error::TrivialCharacter);
        }
        Ok(RealizedInstance { field, sub, chars })
    }

    /// Whether the product character `prod_i chi_i` is trivial.
    pub fn product_trivial(&self) -> bool {
        // Safe before realization: exponents are reduced mod q - 1.
        let q1 = self.q() - 1;
        self.exponents.iter().fold(0u64, |s, &e| (s + e % q1) % q1) == 0
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.a)
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn d(&self) -> usize {
        self.n() - self.rows.len()
    }
}

/// A generated instance together with its position classification.
#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub spec: InstanceSpec,
    pub report: PositionReport,
}

/// Parameters for seeded random corpus generation.
#[derive(Clone, Debug)]
pub struct CorpusParams {
    pub p: u64,
    pub a: u32,
    /// Ambient dimension.
    pub n: usize,
    /// Subspace dimension; the system has `m = n - d` rows.
    pub d: usize,
    /// Number of admissible instances to produce.
    pub count: usize,
    pub seed: u64,
    /// Keep only instances with `q^((D_L + extra) d) <= point_budget`, so
    /// the full power-sum ladder stays enumerable.
    pub point_budget: u64,
    pub extra: usize,
    /// `Some(true)`: general position only. `Some(false)`: strictly among
    /// translates. `None`: any class except Neither.
    pub require_gp: Option<bool>,
}

fn admissible(params: &CorpusParams, report: &PositionReport) -> bool {
    let class_ok = match params.require_gp {
        None => report.class != PositionClass::Neither,
        Some(true) => report.class == PositionClass::GeneralPosition,
        Some(false) => report.class == PositionClass::GeneralAmongTranslates,
    };
    if !class_ok || report.d_l < 0 {
        return false;
    }
    let q = params.p.pow(params.a) as u128;
    let exponent = (report.d_l as u32 + params.extra as u32) * params.d as u32;
    let points = q.checked_pow(exponent).unwrap_or(u128::MAX);
    points <= params.point_budget as u128
}

/// One uniform draw of a rank-maximal system with nontrivial exponents,
/// or None when the matrix came out rank-deficient.
fn draw_system(
    rng: &mut SplitMix64,
    field: &Arc<Field>,
    p: u64,
    a: u32,
    n: usize,
    m: usize,
) -> Option<InstanceSpec> {
    let q = field.order();
    let rows: Vec<Vec<u64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.below(q)).collect())
        .collect();
    let rhs: Vec<u64> = (0..m).map(|_| rng.below(q)).collect();
    // Nontrivial exponents live in 1..=q-2.
    let exponents: Vec<u64> = (0..n).map(|_| 1 + rng.below(q - 2)).collect();
    let mat = FpMat::from_rows(Arc::clone(field), &rows).ok()?;
    if mat.rank() != m {
        return None;
    }
    Some(InstanceSpec {
        p,
        a,
        rows,
        rhs,
        exponents,
    })
}

fn check_dims(q: u64, n: usize, d: usize) -> Result<()> {
    if d >= n || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= d < n, got d = {d}, n = {n}"
        )));
    }
    if q < 3 {
        return Err(Error::InvalidArgument(
            "no nontrivial characters over F_2".into(),
        ));
    }
    Ok(())
}

/// Draws admissible instances until `count` are collected. Matrices and
/// right-hand sides are uniform over element codes (resampled until the
/// rank is maximal); exponents are uniform over nontrivial characters.
pub fn random_instances(params: &CorpusParams) -> Result<Vec<CorpusInstance>> {
    let field = make_field(params.p, params.a)?;
    check_dims(field.order(), params.n, params.d)?;
    let m = params.n - params.d;
    let mut rng = SplitMix64::new(params.seed);
    let mut out = Vec::with_capacity(params.count);
    let max_attempts = 4000usize.saturating_mul(params.count.max(1));
    let mut attempts = 0usize;
    while out.len() < params.count {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::InvalidArgument(format!(
                "only {} of {} requested instances found after {} draws",
                out.len(),
                params.count,
                attempts - 1
            )));
        }
        let Some(spec) = draw_system(&mut rng, &field, params.p, params.a, params.n, m) else {
            continue;
        };
        let realized = spec.realize()?;
        let report = realized.sub.classify_position();
        if admissible(params, &report) {
            out.push(CorpusInstance { spec, report });
        }
    }
    Ok(out)
}

/// Exactly `count` rank-maximal systems, classified but not filtered by
/// position class: the raw material of a scan campaign.
pub fn random_systems(
    p: u64,
    a: u32,
    n: usize,
    d: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<CorpusInstance>> {
    let field = make_field(p, a)?;
    check_dims(field.order(), n, d)?;
    let m = n - d;
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let Some(spec) = draw_system(&mut rng, &field, p, a, n, m) else {
            continue;
        };
        let report = spec.realize()?.sub.classify_position();
        out.push(CorpusInstance { spec, report });
    }
    Ok(out)
}

/// Instance of the parametrized sum: `n` affine linear forms in `d`
/// variables plus character exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub p: u64,
    pub a: u32,
    /// Coefficient rows `(a_i1 .. a_id)`, one per form.
    pub coeff_rows: Vec<Vec<u64>>,
    /// Constant terms `b_i`.
    pub consts: Vec<u64>,
    pub exponents: Vec<u64>,
}

impl ParamSpec {
    pub fn realize(&self) -> Result<(Arc<Field>, LinearFormSystem, Vec<MultChar>)> {
        let field = make_field(self.p, self.a)?;
        let forms: Vec<(Vec<u64>, u64)> = self
            .coeff_rows
            .iter()
            .cloned()
            .zip(self.consts.iter().copied())
            .collect();
        let sys = LinearFormSystem::from_codes(Arc::clone(&field), &forms)?;
        let chars: Vec<MultChar> = self
            .exponents
            .iter()
            .map(|&e| MultChar::new(Arc::clone(&field), e))
            .collect();
        if chars.iter().any(|c| c.is_trivial()) {
            return Err(Error::TrivialCharacter);
        }
        Ok((field, sys, chars))
    }
}

/// Whether the hyperplane arrangement `V_i = {L_i = 0}` satisfies
/// `dim(intersection over I) <= d - |I|` for all `|I| <= d + 1`.
fn param_hypothesis(sys: &LinearFormSystem) -> bool {
    let n = sys.n();
    let d = sys.d();
    for size in 1..=(d + 1).min(n) {
        for set in Combinations::new(n, size) {
            if sys.dim_zero_intersection(&set) > d as i64 - size as i64 {
                return false;
            }
        }
    }
    true
}

/// Draws `count` parametrized instances with full-rank coefficient matrix,
/// `n > d` (so the image cross-check applies), and the arrangement
/// hypothesis satisfied.
pub fn random_param_instances(
    p: u64,
    a: u32,
    n: usize,
    d: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<ParamSpec>> {
    if d == 0 || d >= n {
        return Err(Error::InvalidArgument(format!(
            "need 0 < d < n, got d = {d}, n = {n}"
        )));
    }
    let field = make_field(p, a)?;
    let q = field.order();
    if q < 3 {
        return Err(Error::InvalidArgument(
            "no nontrivial characters over F_2".into(),
        ));
    }
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    let max_attempts = 4000usize.saturating_mul(count.max(1));
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::InvalidArgument(format!(
                "only {} of {count} requested parametrized instances found",
                out.len()
            )));
        }
        let coeff_rows: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.below(q)).collect())
            .collect();
        let consts: Vec<u64> = (0..n).map(|_| rng.below(q)).collect();
        let exponents: Vec<u64> = (0..n).map(|_| 1 + rng.below(q - 2)).collect();
        let spec = ParamSpec {
            p,
            a,
            coeff_rows,
            consts,
            exponents,
        };
        let (_, sys, _) = match spec.realize() {
            Ok(r) => r,
            Err(Error::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        };
        if param_hypothesis(&sys) {
            out.push(spec);
        }
    }
    Ok(out)
}

/// Tally of an exhaustive classifier census.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CensusOutcome {
    /// Rank-maximal systems examined.
    pub systems: u64,
    pub general_position: u64,
    /// Strictly among translates (not general position).
    pub among_translates: u64,
    pub neither: u64,
    /// Systems where the definition-based classifier disagrees with the
    /// minors or column-span criterion. Zero when all is well.
    pub disagreements: u64,
}

impl CensusOutcome {
    fn absorb(&mut self, other: CensusOutcome) {
        self.systems += other.systems;
        self.general_position += other.general_position;
        self.among_translates += other.among_translates;
        self.neither += other.neither;
        self.disagreements += other.disagreements;
    }
}

/// Enumerates every rank-`m` system `(A, b)` with `A` an `m x n` matrix
/// over the field, classifies each, and cross-checks the classification
/// against the minors criterion and the column-span criterion.
pub fn census_for_rank(field: &Arc<Field>, n: usize, m: usize) -> Result<CensusOutcome> {
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let q = field.order();
    let cells = m * n;
    let total = (q as u128).checked_pow(cells as u32).unwrap_or(u128::MAX);
    if total > 100_000_000 {
        return Err(Error::CapExceeded {
            what: "census matrix count",
            value: total,
            cap: 100_000_000,
        });
    }
    let mut outcome = CensusOutcome::default();
    let mut codes = vec![0u64; cells];
    loop {
        let rows: Vec<Vec<u64>> = (0..m)
            .map(|i| codes[i * n..(i + 1) * n].to_vec())
            .collect();
        let mat = FpMat::from_rows(Arc::clone(field), &rows)?;
        if mat.rank() == m {
            let mut b_codes = vec![0u64; m];
            loop {
                let sub = AffineSubspace::from_codes(Arc::clone(field), &rows, &b_codes)?;
                let report = sub.classify_position();
                outcome.systems += 1;
                match report.class {
                    PositionClass::GeneralPosition => outcome.general_position += 1,
                    PositionClass::GeneralAmongTranslates => outcome.among_translates += 1,
                    PositionClass::Neither => outcome.neither += 1,
                }
                let minors = sub.minors_criterion();
                let translates = sub.translates_criterion();
                let is_gp = report.class == PositionClass::GeneralPosition;
                let is_gat_or_gp = report.class != PositionClass::Neither;
                if minors != is_gp || translates != is_gat_or_gp {
                    outcome.disagreements += 1;
                }
                if !increment(&mut b_codes, q) {
                    break;
                }
            }
        }
        if !increment(&mut codes, q) {
            break;
        }
    }
    Ok(outcome)
}

/// Census over all ranks `m = 1..=n`.
pub fn census(field: &Arc<Field>, n: usize) -> Result<CensusOutcome> {
    let mut outcome = CensusOutcome::default();
    for m in 1..=n {
        outcome.absorb(census_for_rank(field, n, m)?);
    }
    Ok(outcome)
}

/// Odometer step over base-`q` digit vectors; false when wrapped to zero.
fn increment(digits: &mut [u64], q: u64) -> bool {
    for digit in digits.iter_mut() {
        *digit += 1;
        if *digit < q {
            return true;
        }
        *digit = 0;
    }
    false
}
