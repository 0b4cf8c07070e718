//! Campaign driver behind the `charsum` binary.
//!
//! A campaign is described by a [`CampaignConfig`], assembled from an
//! optional JSON config file and command-line flags (flags win). The five
//! modes cover the classical identity suites, L-polynomial pipelines on
//! explicit or random instances, raw scans, the exhaustive classifier
//! census, and parametrized sums.
//!
//! Machine output (JSON or CSV) goes to `--out` or stdout; human
//! summaries go to stderr. Row order is deterministic for a fixed config
//! and seed; only embedded timing fields vary between runs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use charsum_core::corpus::{
    census_for_rank, random_instances, random_param_instances, random_systems, CorpusParams,
    InstanceSpec,
};
use charsum_core::field::make_field;
use charsum_core::report::{InstanceReport, ParamReport, SuiteOutcome};
use charsum_core::subspace::PositionClass;
use charsum_core::verify::{
    gauss_modulus_suite, hyperplane_moduli_suite, jacobi_gauss_suite, lpoly_campaign,
    param_campaign,
};
use charsum_core::{Error, Result};

pub const DEFAULT_CAP: u64 = 1_000_000_000;
pub const DEFAULT_EXTRA: usize = 2;

/// Flat campaign description. Every field mirrors a CLI flag; a JSON
/// config file deserializes to the same shape.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CampaignConfig {
    pub mode: Option<String>,
    pub p: Option<u64>,
    pub a: Option<u32>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    /// "all-nontrivial" or a comma list of exponents like "1,2,3".
    pub chars: Option<String>,
    /// "random:COUNT", "exhaustive", or a path to a JSON instance array.
    pub instances: Option<String>,
    pub seed: Option<u64>,
    pub cap: Option<u64>,
    pub extra: Option<usize>,
    pub out: Option<String>,
    pub format: Option<String>,
    pub threads: Option<usize>,
}

impl CampaignConfig {
    pub fn from_file(path: &Path) -> Result<CampaignConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::ConfigInvalid(format!("bad config {}: {e}", path.display())))
    }

    /// Fills unset fields of `self` (the flags) from `file`.
    pub fn overlaid(mut self, file: CampaignConfig) -> CampaignConfig {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if self.$field.is_none() { self.$field = file.$field; })*
            };
        }
        take!(mode, p, a, n, d, chars, instances, seed, cap, extra, out, format, threads);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    VerifyClassic,
    LFunction,
    Scan,
    Census,
    Param,
}

impl Mode {
    fn parse(text: &str) -> Result<Mode> {
        match text {
            "verify-classic" => Ok(Mode::VerifyClassic),
            "lfunction" => Ok(Mode::LFunction),
            "scan" => Ok(Mode::Scan),
            "census" => Ok(Mode::Census),
            "param" => Ok(Mode::Param),
            other => Err(Error::ConfigInvalid(format!(
                "unknown mode {other:?}; expected verify-classic, lfunction, scan, census, or param"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn parse(text: &str) -> Result<Format> {
        match text {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::ConfigInvalid(format!(
                "unknown format {other:?}; expected json or csv"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceSource {
    Path(String),
    Random(usize),
    Exhaustive,
}

impl InstanceSource {
    fn parse(text: &str) -> Result<InstanceSource> {
        if text == "exhaustive" {
            return Ok(InstanceSource::Exhaustive);
        }
        if let Some(count) = text.strip_prefix("random:") {
            let count: usize = count.parse().map_err(|_| {
                Error::ConfigInvalid(format!("bad instance count in {text:?}"))
            })?;
            if count == 0 {
                return Err(Error::ConfigInvalid("instance count must be >= 1".into()));
            }
            return Ok(InstanceSource::Random(count));
        }
        Ok(InstanceSource::Path(text.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharSpec {
    AllNontrivial,
    Fixed(Vec<u64>),
}

impl CharSpec {
    fn parse(text: &str) -> Result<CharSpec> {
        if text == "all-nontrivial" {
            return Ok(CharSpec::AllNontrivial);
        }
        let exps = text
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<u64>, _>>()
            .map_err(|_| Error::ConfigInvalid(format!("bad character list {text:?}")))?;
        if exps.is_empty() {
            return Err(Error::ConfigInvalid("empty character list".into()));
        }
        Ok(CharSpec::Fixed(exps))
    }
}

/// Result of a campaign: whether every assertion held, plus the rendered
/// machine report (already written to `--out` when one was given).
pub struct RunOutcome {
    pub ok: bool,
    pub rendered: String,
    pub summary: String,
}

pub fn run(config: &CampaignConfig) -> Result<RunOutcome> {
    let mode = Mode::parse(
        config
            .mode
            .as_deref()
            .ok_or_else(|| Error::ConfigInvalid("missing mode".into()))?,
    )?;
    let format = match config.format.as_deref() {
        Some(text) => Format::parse(text)?,
        None => Format::Json,
    };
    let outcome = match mode {
        Mode::VerifyClassic => run_verify_classic(config, format)?,
        Mode::LFunction => run_lfunction(config, format)?,
        Mode::Scan => run_scan(config, format)?,
        Mode::Census => run_census(config, format)?,
        Mode::Param => run_param_mode(config, format)?,
    };
    if let Some(out) = &config.out {
        fs::write(out, &outcome.rendered)
            .map_err(|e| Error::ConfigInvalid(format!("cannot write {out}: {e}")))?;
    }
    Ok(outcome)
}

fn need<T: Copy>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| Error::ConfigInvalid(format!("missing {what}")))
}

fn field_pair(config: &CampaignConfig) -> Result<(u64, u32)> {
    Ok((need(config.p, "p")?, config.a.unwrap_or(1)))
}

/// Runs `f` on a dedicated pool when a thread count was requested.
fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::ConfigInvalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn render_suites(suites: &[SuiteOutcome], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(suites).expect("serializable"),
        Format::Csv => {
            let mut text = String::from("suite,checks,failures\n");
            for s in suites {
                let _ = writeln!(text, "{},{},{}", s.name, s.checks, s.failures.len());
            }
            text
        }
    }
}

fn run_verify_classic(config: &CampaignConfig, format: Format) -> Result<RunOutcome> {
    let single: Option<Vec<(u64, u32)>> = config
        .p
        .map(|p| vec![(p, config.a.unwrap_or(1))]);
    let gauss_fields = single
        .clone()
        .unwrap_or_else(|| vec![(3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]);
    let jacobi_fields = single
        .clone()
        .unwrap_or_else(|| vec![(3, 1), (2, 2), (5, 1), (7, 1)]);
    let plane_fields = single.unwrap_or_else(|| vec![(3, 1), (5, 1), (7, 1)]);
    let ambients: Vec<usize> = match config.n {
        Some(n) => vec![n],
        None => vec![2, 3],
    };
    let seed = config.seed.unwrap_or(0);
    let suites = vec![
        gauss_modulus_suite(&gauss_fields)?,
        jacobi_gauss_suite(&jacobi_fields, &ambients)?,
        hyperplane_moduli_suite(&plane_fields, &ambients, 3, seed)?,
    ];
    let ok = suites.iter().all(SuiteOutcome::ok);
    let summary = suites
        .iter()
        .map(SuiteOutcome::summary)
        .collect::<Vec<_>>()
        .join("\n");
    Ok(RunOutcome {
        ok,
        rendered: render_suites(&suites, format),
        summary,
    })
}

fn load_instances(path: &str) -> Result<Vec<InstanceSpec>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::ConfigInvalid(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::ConfigInvalid(format!("bad instance file {path}: {e}")))
}

/// Replaces generated exponents with a fixed tuple, when one was given.
fn apply_chars(specs: &mut [InstanceSpec], chars: &CharSpec) -> Result<()> {
    let CharSpec::Fixed(exps) = chars else {
        return Ok(());
    };
    for spec in specs.iter_mut() {
        if exps.len() != spec.n() {
            return Err(Error::ConfigInvalid(format!(
                "{} exponents for ambient dimension {}",
                exps.len(),
                spec.n()
            )));
        }
        spec.exponents = exps.clone();
        spec.realize()?; // nontriviality check
    }
    Ok(())
}

fn render_instances(rows: &[InstanceReport], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).expect("serializable"),
        Format::Csv => {
            let mut text = String::from(InstanceReport::csv_header());
            text.push('\n');
            for row in rows {
                text.push_str(&row.csv_row());
                text.push('\n');
            }
            text
        }
    }
}

fn instance_summary(rows: &[InstanceReport]) -> String {
    let ok = rows.iter().filter(|r| r.ok).count();
    let mut summary = format!("{ok}/{} instances passed", rows.len());
    for row in rows.iter().filter(|r| !r.ok) {
        let _ = write!(
            summary,
            "\nFAILED {}: {}",
            serde_json::to_string(&row.instance).expect("serializable"),
            row.failure.as_deref().unwrap_or("unknown")
        );
    }
    summary
}

fn run_lfunction(config: &CampaignConfig, format: Format) -> Result<RunOutcome> {
    let source = InstanceSource::parse(
        config
            .instances
            .as_deref()
            .ok_or_else(|| Error::ConfigInvalid("missing instances".into()))?,
    )?;
    let chars = match config.chars.as_deref() {
        Some(text) => CharSpec::parse(text)?,
        None => CharSpec::AllNontrivial,
    };
    let cap = config.cap.unwrap_or(DEFAULT_CAP);
    let extra = config.extra.unwrap_or(DEFAULT_EXTRA);
    let mut specs = match source {
        InstanceSource::Path(path) => load_instances(&path)?,
        InstanceSource::Random(count) => {
            let (p, a) = field_pair(config)?;
            let params = CorpusParams {
                p,
                a,
                n: need(config.n, "n")?,
                d: need(config.d, "d")?,
                count,
                seed: config.seed.unwrap_or(0),
                point_budget: cap,
                extra,
                require_gp: None,
            };
            random_instances(&params)?
                .into_iter()
                .map(|c| c.spec)
                .collect()
        }
        InstanceSource::Exhaustive => {
            return Err(Error::ConfigInvalid(
                "exhaustive enumeration belongs to census mode".into(),
            ));
        }
    };
    apply_chars(&mut specs, &chars)?;
    let rows = with_pool(config.threads, || lpoly_campaign(&specs, extra, cap))?;
    Ok(RunOutcome {
        ok: rows.iter().all(|r| r.ok),
        rendered: render_instances(&rows, format),
        summary: instance_summary(&rows),
    })
}

fn run_scan(config: &CampaignConfig, format: Format) -> Result<RunOutcome> {
    let source = InstanceSource::parse(config.instances.as_deref().unwrap_or("random:100"))?;
    let InstanceSource::Random(count) = source else {
        return Err(Error::ConfigInvalid(
            "scan mode samples randomly; use --instances random:COUNT".into(),
        ));
    };
    let (p, a) = field_pair(config)?;
    let n = need(config.n, "n")?;
    let d = need(config.d, "d")?;
    let cap = config.cap.unwrap_or(DEFAULT_CAP);
    let extra = config.extra.unwrap_or(DEFAULT_EXTRA);
    let systems = random_systems(p, a, n, d, count, config.seed.unwrap_or(0))?;
    let mut tally = [0u64; 3];
    for sys in &systems {
        match sys.report.class {
            PositionClass::GeneralPosition => tally[0] += 1,
            PositionClass::GeneralAmongTranslates => tally[1] += 1,
            PositionClass::Neither => tally[2] += 1,
        }
    }
    // The pipeline runs on the admissible draws that fit the cap.
    let q = p.pow(a) as u128;
    let mut specs = Vec::new();
    for sys in &systems {
        if sys.report.class == PositionClass::Neither || sys.report.d_l < 0 {
            continue;
        }
        let exponent = (sys.report.d_l as u32 + extra as u32) * d as u32;
        if q.checked_pow(exponent).unwrap_or(u128::MAX) <= cap as u128 {
            specs.push(sys.spec.clone());
        }
    }
    if let Some(chars_text) = config.chars.as_deref() {
        apply_chars(&mut specs, &CharSpec::parse(chars_text)?)?;
    }
    let rows = with_pool(config.threads, || lpoly_campaign(&specs, extra, cap))?;
    let summary = format!(
        "{count} draws: {} general position, {} among translates, {} neither; {}",
        tally[0],
        tally[1],
        tally[2],
        instance_summary(&rows)
    );
    Ok(RunOutcome {
        ok: rows.iter().all(|r| r.ok),
        rendered: render_instances(&rows, format),
        summary,
    })
}

#[derive(Serialize)]
struct CensusRow {
    n: usize,
    m: usize,
    #[serde(flatten)]
    outcome: charsum_core::corpus::CensusOutcome,
}

fn run_census(config: &CampaignConfig, format: Format) -> Result<RunOutcome> {
    let (p, a) = field_pair(config)?;
    let max_n = need(config.n, "n")?;
    let field = make_field(p, a)?;
    let mut rows = Vec::new();
    let mut disagreements = 0u64;
    for n in 1..=max_n {
        for m in 1..=n {
            let outcome = census_for_rank(&field, n, m)?;
            disagreements += outcome.disagreements;
            rows.push(CensusRow { n, m, outcome });
        }
    }
    let rendered = match format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("serializable"),
        Format::Csv => {
            let mut text = String::from(
                "n,m,systems,general_position,among_translates,neither,disagreements\n",
            );
            for row in &rows {
                let o = &row.outcome;
                let _ = writeln!(
                    text,
                    "{},{},{},{},{},{},{}",
                    row.n,
                    row.m,
                    o.systems,
                    o.general_position,
                    o.among_translates,
                    o.neither,
                    o.disagreements
                );
            }
            text
        }
    };
    let systems: u64 = rows.iter().map(|r| r.outcome.systems).sum();
    Ok(RunOutcome {
        ok: disagreements == 0,
        rendered,
        summary: format!("{systems} systems, {disagreements} classifier disagreements"),
    })
}

fn render_params(rows: &[ParamReport], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).expect("serializable"),
        Format::Csv => {
            let mut text = String::from(ParamReport::csv_header());
            text.push('\n');
            for row in rows {
                text.push_str(&row.csv_row());
                text.push('\n');
            }
            text
        }
    }
}

fn run_param_mode(config: &CampaignConfig, format: Format) -> Result<RunOutcome> {
    let source = InstanceSource::parse(config.instances.as_deref().unwrap_or("random:50"))?;
    let InstanceSource::Random(count) = source else {
        return Err(Error::ConfigInvalid(
            "param mode samples randomly; use --instances random:COUNT".into(),
        ));
    };
    let (p, a) = field_pair(config)?;
    let n = need(config.n, "n")?;
    let d = need(config.d, "d")?;
    let cap = config.cap.unwrap_or(DEFAULT_CAP);
    let specs = random_param_instances(p, a, n, d, count, config.seed.unwrap_or(0))?;
    let rows = with_pool(config.threads, || param_campaign(&specs, cap))?;
    let ok_count = rows.iter().filter(|r| r.ok).count();
    Ok(RunOutcome {
        ok: ok_count == rows.len(),
        rendered: render_params(&rows, format),
        summary: format!("{ok_count}/{} parametrized instances passed", rows.len()),
    })
}
