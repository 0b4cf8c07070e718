//! Serializable report rows for verification campaigns.
//!
//! A report is self-contained: the instance descriptor embedded in each
//! row is enough to reproduce the computation, and exact quantities are
//! rendered as canonical cyclotomic coordinates (numerator/denominator
//! strings), not floating point.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{InstanceSpec, ParamSpec};
use crate::cyclotomic::Cyclotomic;
use crate::error::Result;

/// Exact cyclotomic value in canonical coordinates: entry `i` is the
/// coefficient of `zeta_order^i`, as a numerator/denominator string pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloDto {
    pub order: u64,
    pub coords: Vec<[String; 2]>,
}

impl CycloDto {
    pub fn from_value(value: &Cyclotomic) -> Result<CycloDto> {
        let coords = value
            .canonical()?
            .iter()
            .map(|c| [c.numer().to_string(), c.denom().to_string()])
            .collect();
        Ok(CycloDto {
            order: value.order(),
            coords,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDto {
    pub re: f64,
    pub im: f64,
}

/// One row of an L-polynomial campaign.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceReport {
    pub instance: InstanceSpec,
    pub class: String,
    pub a_counts: Vec<u64>,
    pub d_l: i64,
    pub product_trivial: bool,
    pub degree: usize,
    pub coeffs: Vec<CycloDto>,
    pub roots: Vec<ComplexDto>,
    pub weight_counts: BTreeMap<u32, usize>,
    pub unclassified_roots: usize,
    /// `|S_1|` under the complex embedding.
    pub s_abs: f64,
    pub bound: f64,
    pub margin: f64,
    pub orientation: i8,
    pub newton_residual: f64,
    /// Total points enumerated across all power sums.
    pub points_enumerated: u64,
    pub millis: u128,
    pub ok: bool,
    pub failure: Option<String>,
}

impl InstanceReport {
    /// Skeleton row for an instance whose pipeline failed before any
    /// numbers were produced.
    pub fn failed(instance: InstanceSpec, failure: String) -> InstanceReport {
        InstanceReport {
            instance,
            class: String::new(),
            a_counts: Vec::new(),
            d_l: 0,
            product_trivial: false,
            degree: 0,
            coeffs: Vec::new(),
            roots: Vec::new(),
            weight_counts: BTreeMap::new(),
            unclassified_roots: 0,
            s_abs: 0.0,
            bound: 0.0,
            margin: 0.0,
            orientation: 0,
            newton_residual: 0.0,
            points_enumerated: 0,
            millis: 0,
            ok: false,
            failure: Some(failure),
        }
    }

    pub fn csv_header() -> &'static str {
        "q,n,d,class,d_l,product_trivial,s_abs,bound,margin,weights,ok,failure"
    }

    pub fn csv_row(&self) -> String {
        let weights = self
            .weight_counts
            .iter()
            .map(|(w, c)| format!("{w}:{c}"))
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{},{},{}",
            self.instance.q(),
            self.instance.n(),
            self.instance.d(),
            self.class,
            self.d_l,
            self.product_trivial,
            self.s_abs,
            self.bound,
            self.margin,
            weights,
            self.ok,
            self.failure.as_deref().unwrap_or("").replace(',', ";"),
        )
    }
}

/// One row of a parametrized-sum campaign.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamReport {
    pub instance: ParamSpec,
    pub hypothesis_ok: bool,
    pub cross_checked: bool,
    pub d_l: i64,
    pub s_abs: f64,
    pub bound: f64,
    pub margin: f64,
    pub points_enumerated: u64,
    pub millis: u128,
    pub ok: bool,
    pub failure: Option<String>,
}

impl ParamReport {
    pub fn csv_header() -> &'static str {
        "q,n,d,hypothesis_ok,cross_checked,d_l,s_abs,bound,margin,ok,failure"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{},{}",
            self.instance.p.pow(self.instance.a),
            self.instance.coeff_rows.len(),
            self.instance
                .coeff_rows
                .first()
                .map(|r| r.len())
                .unwrap_or(0),
            self.hypothesis_ok,
            self.cross_checked,
            self.d_l,
            self.s_abs,
            self.bound,
            self.margin,
            self.ok,
            self.failure.as_deref().unwrap_or("").replace(',', ";"),
        )
    }
}

/// Outcome of a named identity suite (Gauss moduli, Jacobi identities,
/// census cross-checks, and so on).
#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn new(name: impl Into<String>) -> SuiteOutcome {
        SuiteOutcome {
            name: name.into(),
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.ok() {
            format!("{}: {} checks passed", self.name, self.checks)
        } else {
            format!(
                "{}: {} of {} checks FAILED; first: {}",
                self.name,
                self.failures.len(),
                self.checks,
                self.failures.first().map(String::as_str).unwrap_or("")
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclo_dto_renders_canonical_coordinates() {
        // zeta_4 = i: canonical basis {1, zeta}, coordinates (0, 1).
        let z = Cyclotomic::root_power(4, 1).unwrap();
        let dto = CycloDto::from_value(&z).unwrap();
        assert_eq!(dto.order, 4);
        assert_eq!(dto.coords, vec![
            ["0".to_string(), "1".to_string()],
            ["1".to_string(), "1".to_string()],
        ]);
        let text = serde_json::to_string(&dto).unwrap();
        let back: CycloDto = serde_json::from_str(&text).unwrap();
        assert_eq!(dto, back);
    }

    #[test]
    fn csv_rows_have_header_arity() {
        let spec = InstanceSpec {
            p: 3,
            a: 1,
            rows: vec![vec![1, 1]],
            rhs: vec![1],
            exponents: vec![1, 1],
        };
        let report = InstanceReport::failed(spec, "boom, with comma".into());
        let header_fields = InstanceReport::csv_header().split(',').count();
        assert_eq!(report.csv_row().split(',').count(), header_fields);
    }

    #[test]
    fn suite_outcome_tracks_failures() {
        let mut suite = SuiteOutcome::new("demo");
        suite.check(true, || unreachable!());
        suite.check(false, || "bad".into());
        assert!(!suite.ok());
        assert_eq!(suite.checks, 2);
        assert!(suite.summary().contains("FAILED"));
    }
}
