//! Verification campaigns: the classical identity suites, the exhaustive
//! classifier census, and the full per-instance L-polynomial pipeline.
//!
//! Everything here returns data (suite outcomes, report rows) rather than
//! panicking, so the same entry points back both the CLI and the
//! acceptance tests.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::characters::{gauss_sum, jacobi_sum, jacobi_via_gauss, AddChar, MultChar};
use crate::corpus::{census_for_rank, InstanceSpec, ParamSpec};
use crate::cyclotomic::Cyclotomic;
use crate::error::Result;
use crate::field::{make_field, Field};
use crate::lfunc::{expected_weights_gp, l_polynomial_with_cap, verify_sum_bound, weight_profile};
use crate::report::{ComplexDto, CycloDto, InstanceReport, ParamReport, SuiteOutcome};
use crate::rng::SplitMix64;
use crate::subspace::{AffineSubspace, PositionClass};
use crate::sums::{char_sum_with_cap, hyperplane_reduction_check, param_sum_with_cap};

/// All nontrivial exponent tuples `(e_1..e_n)`, each in `1..=q-2`.
struct ExponentTuples {
    q1: u64,
    cur: Option<Vec<u64>>,
}

impl ExponentTuples {
    fn new(q: u64, n: usize) -> ExponentTuples {
        let cur = if q >= 3 { Some(vec![1; n]) } else { None };
        ExponentTuples { q1: q - 1, cur }
    }
}

impl Iterator for ExponentTuples {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let cur = self.cur.as_mut()?;
        let out = cur.clone();
        let mut i = 0;
        loop {
            if i == cur.len() {
                self.cur = None;
                break;
            }
            cur[i] += 1;
            if cur[i] < self.q1 {
                break;
            }
            cur[i] = 1;
            i += 1;
        }
        Some(out)
    }
}

fn chars_from(field: &Arc<Field>, exponents: &[u64]) -> Vec<MultChar> {
    exponents
        .iter()
        .map(|&e| MultChar::new(Arc::clone(field), e))
        .collect()
}

/// `G(chi) conj(G(chi)) = q` exactly, for every nontrivial character of
/// every listed field.
pub fn gauss_modulus_suite(fields: &[(u64, u32)]) -> Result<SuiteOutcome> {
    let mut suite = SuiteOutcome::new("gauss-modulus");
    for &(p, a) in fields {
        let field = make_field(p, a)?;
        let q = field.order();
        let psi = AddChar::new(Arc::clone(&field), field.one());
        for e in 1..q - 1 {
            let chi = MultChar::new(Arc::clone(&field), e);
            let g = gauss_sum(&chi, &psi)?;
            let prod = g.mul(&g.conj())?;
            let ok = prod.eq_value(&Cyclotomic::from_int(prod.order(), q as i64)?)?;
            suite.check(ok, || format!("|G|^2 != q for q = {q}, e = {e}"));
        }
    }
    Ok(suite)
}

/// `jacobi_sum` agrees exactly with its Gauss-sum expression for every
/// nontrivial tuple of each listed arity.
pub fn jacobi_gauss_suite(fields: &[(u64, u32)], arities: &[usize]) -> Result<SuiteOutcome> {
    let mut suite = SuiteOutcome::new("jacobi-gauss");
    for &(p, a) in fields {
        let field = make_field(p, a)?;
        let q = field.order();
        for &n in arities {
            for exps in ExponentTuples::new(q, n) {
                let chars = chars_from(&field, &exps);
                let direct = jacobi_sum(&chars)?;
                let via = jacobi_via_gauss(&chars)?;
                let ok = direct.eq_value(&via)?;
                suite.check(ok, || {
                    format!("Jacobi mismatch at q = {q}, exponents {exps:?}")
                });
            }
        }
    }
    Ok(suite)
}

/// General-position hyperplanes: `|S|` must equal `q^((n-1)/2)` when the
/// character product is nontrivial and `q^((n-2)/2)` when it is trivial,
/// and the closed-form Jacobi reduction must match the enumerated sum
/// exactly.
pub fn hyperplane_moduli_suite(
    fields: &[(u64, u32)],
    ambients: &[usize],
    hyperplanes_per_case: usize,
    seed: u64,
) -> Result<SuiteOutcome> {
    let mut suite = SuiteOutcome::new("hyperplane-moduli");
    let mut rng = SplitMix64::new(seed);
    for &(p, a) in fields {
        let field = make_field(p, a)?;
        let q = field.order();
        for &n in ambients {
            let mut planes: Vec<(Vec<u64>, u64)> = vec![(vec![1; n], 1)];
            while planes.len() < hyperplanes_per_case {
                // Nonzero coefficients and right-hand side keep the
                // hyperplane in general position.
                let row: Vec<u64> = (0..n).map(|_| 1 + rng.below(q - 1)).collect();
                let b = 1 + rng.below(q - 1);
                planes.push((row, b));
            }
            for (row, b) in &planes {
                let sub = AffineSubspace::from_codes(
                    Arc::clone(&field),
                    std::slice::from_ref(row),
                    &[*b],
                )?;
                for exps in ExponentTuples::new(q, n) {
                    let chars = chars_from(&field, &exps);
                    let product_trivial = exps.iter().sum::<u64>() % (q - 1) == 0;
                    let s = char_sum_with_cap(&sub, &chars, 1, 1 << 30)?;
                    let observed = s.value.embed().abs();
                    let expected = if product_trivial {
                        (q as f64).powf((n as f64 - 2.0) / 2.0)
                    } else {
                        (q as f64).powf((n as f64 - 1.0) / 2.0)
                    };
                    let ok = ((observed - expected) / expected).abs() < 1e-9;
                    suite.check(ok, || {
                        format!(
                            "|S| = {observed} but expected {expected} at q = {q}, \
                             row {row:?}, b = {b}, exponents {exps:?}"
                        )
                    });
                    let reduction = hyperplane_reduction_check(&sub, &chars)?;
                    suite.check(reduction, || {
                        format!(
                            "Jacobi reduction failed at q = {q}, row {row:?}, \
                             b = {b}, exponents {exps:?}"
                        )
                    });
                }
            }
        }
    }
    Ok(suite)
}

/// Per-(n, m) census tallies.
pub type CensusRows = Vec<(usize, usize, crate::corpus::CensusOutcome)>;

/// Exhaustive classifier cross-check over all rank-maximal systems for
/// `n = 1..=max_n`, every rank. Returns the per-(n, m) tallies alongside
/// the suite outcome.
pub fn census_suite(p: u64, a: u32, max_n: usize) -> Result<(SuiteOutcome, CensusRows)> {
    let mut suite = SuiteOutcome::new("census-equivalence");
    let field = make_field(p, a)?;
    let mut rows = Vec::new();
    for n in 1..=max_n {
        for m in 1..=n {
            let outcome = census_for_rank(&field, n, m)?;
            suite.check(outcome.disagreements == 0, || {
                format!(
                    "{} classifier disagreements at n = {n}, m = {m}",
                    outcome.disagreements
                )
            });
            rows.push((n, m, outcome));
        }
    }
    Ok((suite, rows))
}

/// Absolute tolerance on the deviation between exact power sums and the
/// power sums of the numerically recovered roots.
pub const NEWTON_RESIDUAL_TOL: f64 = 1e-6;

/// Full pipeline on one instance: classify, reconstruct the polynomial,
/// profile the weights, and check the sum bound. Failures land in the
/// report row, never in a panic.
pub fn run_instance(spec: &InstanceSpec, extra: usize, cap: u64) -> InstanceReport {
    let start = Instant::now();
    // A first power sum is always needed for the bound check.
    let extra = extra.max(1);
    let realized = match spec.realize() {
        Ok(r) => r,
        Err(e) => return InstanceReport::failed(spec.clone(), format!("realize: {e}")),
    };
    let position = realized.sub.classify_position();
    let q = realized.field.order();
    let n = realized.sub.n();
    let d = realized.sub.dim();
    let product_trivial = spec.product_trivial();

    let mut base = InstanceReport::failed(spec.clone(), String::new());
    base.class = position.class.as_str().to_string();
    base.a_counts = position.a_counts.clone();
    base.d_l = position.d_l;
    base.product_trivial = product_trivial;

    // Failure messages carry a stage tag so downstream consumers can
    // attribute a red row to the degree law, the weight law, the count
    // law, or the bound without re-running anything.
    let lp = match l_polynomial_with_cap(&realized.sub, &realized.chars, extra, cap) {
        Ok(lp) => lp,
        Err(e) => {
            base.failure = Some(format!("lfunc: {e}"));
            base.millis = start.elapsed().as_millis();
            return base;
        }
    };

    let mut failures: Vec<String> = Vec::new();
    let profile = weight_profile(&lp.roots, q, d);
    if profile.unclassified != 0 {
        failures.push(format!(
            "weights: {} roots off the weight ladder",
            profile.unclassified
        ));
    }
    if position.class == PositionClass::GeneralPosition {
        let expected = expected_weights_gp(n, d, product_trivial);
        if profile.counts != expected {
            failures.push(format!(
                "gp-counts: weight counts {:?} differ from predicted {:?}",
                profile.counts, expected
            ));
        }
    }
    if lp.newton_residual > NEWTON_RESIDUAL_TOL {
        failures.push(format!(
            "newton: root power sums deviate by {:.3e}",
            lp.newton_residual
        ));
    }

    let bound_check = verify_sum_bound(
        position.class,
        position.d_l,
        n,
        d,
        q,
        product_trivial,
        &lp.power_sums[0],
        || serde_json::to_string(spec).unwrap_or_default(),
    );
    let (bound, s_abs, margin) = match bound_check {
        Ok(check) => (check.bound, check.observed, check.margin),
        Err(e) => {
            failures.push(format!("bound: {e}"));
            (0.0, lp.power_sums[0].embed().abs(), 0.0)
        }
    };

    let mut coeffs = Vec::with_capacity(lp.coeffs.len());
    for c in &lp.coeffs {
        match CycloDto::from_value(c) {
            Ok(dto) => coeffs.push(dto),
            Err(e) => failures.push(format!("render: coefficient rendering failed: {e}")),
        }
    }

    let rd_points = |r: u32| (q as u128).pow(r * d as u32).min(u64::MAX as u128) as u64;
    let points_enumerated: u64 = (1..=(lp.degree + extra) as u32).map(rd_points).sum();

    InstanceReport {
        instance: spec.clone(),
        class: base.class,
        a_counts: base.a_counts,
        d_l: position.d_l,
        product_trivial,
        degree: lp.degree,
        coeffs,
        roots: lp
            .roots
            .iter()
            .map(|z| ComplexDto { re: z.re, im: z.im })
            .collect(),
        weight_counts: profile.counts,
        unclassified_roots: profile.unclassified,
        s_abs,
        bound,
        margin,
        orientation: lp.orientation,
        newton_residual: lp.newton_residual,
        points_enumerated,
        millis: start.elapsed().as_millis(),
        ok: failures.is_empty(),
        failure: if failures.is_empty() {
            None
        } else {
            Some(failures.join("; "))
        },
    }
}

/// Runs the pipeline over a corpus. Rows come back in input order; the
/// instances themselves are processed by the rayon pool.
pub fn lpoly_campaign(specs: &[InstanceSpec], extra: usize, cap: u64) -> Vec<InstanceReport> {
    specs
        .par_iter()
        .map(|spec| run_instance(spec, extra, cap))
        .collect()
}

/// Parametrized-sum pipeline: direct evaluation, arrangement hypothesis,
/// image-subspace cross-check, and the `D_L q^(d/2)` bound.
pub fn run_param(spec: &ParamSpec, cap: u64) -> ParamReport {
    let start = Instant::now();
    let mut failures: Vec<String> = Vec::new();
    let fail = |spec: &ParamSpec, msg: String, start: Instant| ParamReport {
        instance: spec.clone(),
        hypothesis_ok: false,
        cross_checked: false,
        d_l: 0,
        s_abs: 0.0,
        bound: 0.0,
        margin: 0.0,
        points_enumerated: 0,
        millis: start.elapsed().as_millis(),
        ok: false,
        failure: Some(msg),
    };
    let (field, sys, chars) = match spec.realize() {
        Ok(r) => r,
        Err(e) => return fail(spec, e.to_string(), start),
    };
    let result = match param_sum_with_cap(&sys, &chars, cap) {
        Ok(r) => r,
        Err(e) => return fail(spec, e.to_string(), start),
    };
    if !result.hypothesis_ok {
        failures.push("arrangement hypothesis violated".to_string());
    }
    if sys.n() > sys.d() && !result.cross_checked {
        failures.push("image cross-check did not run".to_string());
    }
    let q = field.order();
    let d = sys.d();
    let s_abs = result.value.embed().abs();
    let bound = (result.d_l.max(0)) as f64 * (q as f64).powf(d as f64 / 2.0);
    let margin = bound - s_abs;
    if result.hypothesis_ok {
        let tol = result.value.embed().err_bound + 1e-9 * bound.max(1.0);
        if margin < -tol {
            failures.push(format!("|S| = {s_abs:.9} exceeds bound {bound:.9}"));
        }
    }
    ParamReport {
        instance: spec.clone(),
        hypothesis_ok: result.hypothesis_ok,
        cross_checked: result.cross_checked,
        d_l: result.d_l,
        s_abs,
        bound,
        margin,
        points_enumerated: result.point_count,
        millis: start.elapsed().as_millis(),
        ok: failures.is_empty(),
        failure: if failures.is_empty() {
            None
        } else {
            Some(failures.join("; "))
        },
    }
}

pub fn param_campaign(specs: &[ParamSpec], cap: u64) -> Vec<ParamReport> {
    specs
        .par_iter()
        .map(|spec| run_param(spec, cap))
        .collect()
}
