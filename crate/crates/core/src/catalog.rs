//! Named distributions, states and signals, and the suite runner that
//! evaluates every implemented inequality over them.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decay::{fujiwara_times, hilgevoord_uffink, mandelstam_tamm_check, modified_times, wigner_form_times};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::extremal::{kay_silverman_bound, solve_mu, ExtremalSolution};
use crate::report::{sig12, BoundReport, Relation};
use crate::spectral::{luo_check, short_time_check, EnergyDistribution, SignalPair, SurvivalAmplitude};
use crate::speed::{luo_zhang_bound, margolus_levitin_bound, mt_orthogonality_bound, pfeifer_self_overlap, yurtsever_chain};
use crate::wigner::GaussianWignerState;

pub const DISTRIBUTION_FAMILIES: &[&str] = &[
    "Luo",
    "Short-time",
    "MT-cosine",
    "MT-rate",
    "MT-halflife",
    "MT-Fleming",
    "Gislason",
    "EqWidth-star",
    "EqWidth-2star",
    "Wigner-form",
    "Fujiwara",
    "HU",
    "ML",
    "LuoZhang",
    "MT-orthogonal",
    "Pfeifer",
    "Yurtsever",
];

pub const STATE_FAMILIES: &[&str] = &["Gaussian-T0", "Gaussian-T0-oracle"];

pub const SIGNAL_FAMILIES: &[&str] = &["Frequency-time", "Kay-Silverman"];

/// `(α, p)` pairs evaluated for the Luo–Zhang family.
pub const LUO_ZHANG_CASES: [(f64, f64); 3] = [(0.0, 1.0), (0.0, 2.0), (0.5, 1.0)];

/// Hilgevoord–Uffink interval content and amplitude level.
pub const HU_ALPHA: f64 = 0.9;
pub const HU_BETA: f64 = 0.5;

pub const YURTSEVER_LINKS: u32 = 3;

/// Agreement required between closed-form and phase-space `T0`.
pub const ORACLE_TOLERANCE: f64 = 1e-5;

/// Tolerance for products measured on sampled signal pairs.
pub const SIGNAL_TOLERANCE: f64 = 1e-6;

pub fn all_families() -> impl Iterator<Item = &'static str> {
    DISTRIBUTION_FAMILIES.iter().chain(STATE_FAMILIES).chain(SIGNAL_FAMILIES).copied()
}

#[derive(Debug, Clone, PartialEq)]
pub enum CatalogObject {
    /// An energy distribution. `nominal_delta_e` replaces an infinite
    /// dispersion in the Mandelstam–Tamm checks, which then become
    /// informational.
    Distribution {
        distribution: EnergyDistribution,
        nominal_delta_e: Option<f64>,
    },
    State(GaussianWignerState),
    Signal(SignalPair),
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    /// Stated in the literature.
    Published,
    /// Follows in one line from the definitions.
    Elementary,
    /// Frozen from an independent computation.
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub bound: String,
    pub lhs: f64,
    pub tol: f64,
    pub origin: Origin,
}

impl Expected {
    pub fn new(bound: &str, lhs: f64, tol: f64, origin: Origin) -> Self {
        Expected { bound: bound.into(), lhs, tol, origin }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub object: CatalogObject,
    pub expected: Vec<Expected>,
}

impl CatalogEntry {
    pub fn distribution(name: &str, p: EnergyDistribution) -> Self {
        CatalogEntry {
            name: name.into(),
            object: CatalogObject::Distribution { distribution: p, nominal_delta_e: None },
            expected: Vec::new(),
        }
    }

    pub fn state(name: &str, s: GaussianWignerState) -> Self {
        CatalogEntry { name: name.into(), object: CatalogObject::State(s), expected: Vec::new() }
    }

    pub fn signal(name: &str, s: SignalPair) -> Self {
        CatalogEntry { name: name.into(), object: CatalogObject::Signal(s), expected: Vec::new() }
    }

    pub fn expect(mut self, bound: &str, lhs: f64, tol: f64, origin: Origin) -> Self {
        self.expected.push(Expected::new(bound, lhs, tol, origin));
        self
    }

    pub fn with_nominal_delta_e(mut self, delta_e: f64) -> Self {
        if let CatalogObject::Distribution { nominal_delta_e, .. } = &mut self.object {
            *nominal_delta_e = Some(delta_e);
        }
        self
    }
}

/// The standard catalog, `ħ = 1`.
pub fn standard_catalog() -> Result<Vec<CatalogEntry>> {
    let mu_free = 1.0 / (2.0 * (3.0f64 - 0.16).sqrt());
    let mut entries = vec![
        CatalogEntry::distribution("lorentzian", EnergyDistribution::lorentzian(0.0, 1.0)?)
            .with_nominal_delta_e(1.0)
            .expect("EqWidth-star", PI / 4.0, 1e-6, Origin::Published)
            .expect("EqWidth-2star", PI / 2.0, 1e-6, Origin::Published)
            .expect("Wigner-form", FRAC_1_SQRT_2, 1e-6, Origin::Published),
        CatalogEntry::distribution("gaussian", EnergyDistribution::gaussian(0.0, 1.0)?)
            .expect("Gislason", PI.sqrt() / 2.0, 1e-6, Origin::Published)
            .expect("Wigner-form", 0.5, 1e-6, Origin::Published),
        CatalogEntry::distribution("truncated-parabola", EnergyDistribution::truncated_parabola(1.0)?)
            .expect("Gislason", 3.0 * PI / (5.0 * 5f64.sqrt()), 1e-6, Origin::Published),
        CatalogEntry::distribution("stepwise", EnergyDistribution::stepwise(1.0)?)
            .expect("Gislason", PI / (2.0 * 3f64.sqrt()), 1e-6, Origin::Published)
            .expect("ML", PI, 1e-9, Origin::Oracle),
        CatalogEntry::distribution("bhattacharyya", EnergyDistribution::bhattacharyya(1.0)?)
            .expect("MT-halflife", 1.5f64.sqrt(), 1e-6, Origin::Published),
        CatalogEntry::distribution("two-level", EnergyDistribution::two_point(0.0, 2.0, 0.5)?)
            .expect("ML", PI / 2.0, 1e-9, Origin::Elementary)
            .expect("MT-orthogonal", PI / 2.0, 1e-9, Origin::Elementary)
            .expect("Yurtsever(1)", PI * PI / 8.0, 1e-9, Origin::Elementary),
        CatalogEntry::distribution("two-level-unequal", EnergyDistribution::two_point(0.0, 2.0, 0.3)?),
        CatalogEntry::state("coherent", GaussianWignerState::coherent(2.0, 0.0, 1.0, 1.0, 1.0)?)
            .expect("Gaussian-T0", FRAC_1_SQRT_2, 1e-9, Origin::Published),
        CatalogEntry::state("thermal", GaussianWignerState::thermal(1.0, 1.0, 1.0, 1.0)?),
        CatalogEntry::state("squeezed-thermal", GaussianWignerState::squeezed_thermal(0.5, 3.0, 1.0, 1.0, 1.0)?),
        CatalogEntry::state("free-packet", GaussianWignerState::free_packet(0.2, 0.5, 2.0, 1.5, 0.4, 1.0, 1.0)?)
            .expect("Gaussian-T0", 1.0 / (2.0 * mu_free.powi(3)).sqrt(), 1e-9, Origin::Published),
        CatalogEntry::state("mixed-correlated", GaussianWignerState::new(0.4, -0.3, 0.9, 1.1, 0.3, 1.3, 0.7, 1.0)?),
        CatalogEntry::signal("gaussian-signal", SignalPair::gaussian(1.0, 4097)?)
            .expect("Frequency-time", ((PI - 2.0) / (4.0 * PI)).sqrt(), 1e-6, Origin::Published),
        CatalogEntry::signal("extremal-signal", ExtremalSolution::new(1.0)?.spectrum)
            .expect("Frequency-time", solve_mu()?, 1e-6, Origin::Published),
    ];
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(entries)
}

/// Which bounds to evaluate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundFilter {
    All,
    /// Family names (`"LuoZhang"`) or full bound names (`"LuoZhang(0.5,1)"`).
    Only(Vec<String>),
}

fn family_of(name: &str) -> Option<&'static str> {
    if let Some(f) = all_families().find(|f| *f == name) {
        return Some(f);
    }
    all_families().find(|f| {
        name.strip_prefix(f)
            .is_some_and(|rest| rest.starts_with('(') || rest == "-lower" || rest == "-upper")
    })
}

impl BoundFilter {
    pub fn only<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for n in &names {
            if family_of(n).is_none() {
                return Err(Error::UnknownBoundName(n.clone()));
            }
        }
        Ok(BoundFilter::Only(names))
    }

    fn wants_family(&self, family: &str) -> bool {
        match self {
            BoundFilter::All => true,
            BoundFilter::Only(names) => names.iter().any(|n| family_of(n) == Some(family)),
        }
    }

    fn selects(&self, family: &str, name: &str) -> bool {
        match self {
            BoundFilter::All => true,
            BoundFilter::Only(names) => names.iter().any(|n| n == family || n == name),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Satisfied,
    /// A guaranteed inequality failed.
    Violated,
    /// An informational check failed, as expected for some inputs.
    Informational,
    NotApplicable,
    /// The evaluation itself failed numerically.
    Error,
}

impl Status {
    fn of(report: &BoundReport) -> Self {
        match (report.satisfied, report.guaranteed) {
            (true, _) => Status::Satisfied,
            (false, true) => Status::Violated,
            (false, false) => Status::Informational,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Satisfied => "satisfied",
            Status::Violated => "violated",
            Status::Informational => "informational",
            Status::NotApplicable => "not-applicable",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRecord {
    pub entry: String,
    pub family: String,
    pub bound: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<BoundReport>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub reason: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub satisfied: usize,
    pub violated: usize,
    pub informational: usize,
    pub not_applicable: usize,
    pub errors: usize,
    pub expectation_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub summary: Summary,
    /// Smallest slack over guaranteed reports; infinite when there are none.
    #[serde(with = "sig12")]
    pub worst_slack: f64,
    pub records: Vec<SuiteRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expectation_failures: Vec<String>,
}

impl SuiteResult {
    /// No guaranteed inequality violated, no numerical failure and every
    /// catalogued expectation met.
    pub fn passed(&self) -> bool {
        self.summary.violated == 0 && self.summary.errors == 0 && self.summary.expectation_failures == 0
    }

    pub fn reports(&self) -> impl Iterator<Item = &BoundReport> {
        self.records.iter().filter_map(|r| r.report.as_ref())
    }

    pub fn find(&self, entry: &str, bound: &str) -> Option<&SuiteRecord> {
        self.records.iter().find(|r| r.entry == entry && r.bound == bound)
    }

    /// Re-judges every report against an absolute slack tolerance `tol`.
    pub fn with_tolerance(self, tol: f64) -> Self {
        let records = self
            .records
            .into_iter()
            .map(|mut r| {
                if let Some(b) = &mut r.report {
                    b.satisfied = b.slack >= -tol;
                    r.status = Status::of(b);
                }
                r
            })
            .collect();
        Self::from_records(records, self.expectation_failures)
    }

    fn from_records(records: Vec<SuiteRecord>, expectation_failures: Vec<String>) -> Self {
        let mut s = Summary { total: records.len(), ..Summary::default() };
        for r in &records {
            match r.status {
                Status::Satisfied => s.satisfied += 1,
                Status::Violated => s.violated += 1,
                Status::Informational => s.informational += 1,
                Status::NotApplicable => s.not_applicable += 1,
                Status::Error => s.errors += 1,
            }
        }
        s.expectation_failures = expectation_failures.len();
        let worst_slack = records
            .iter()
            .filter_map(|r| r.report.as_ref())
            .filter(|r| r.guaranteed && !r.slack.is_nan())
            .map(|r| r.slack)
            .fold(f64::INFINITY, f64::min);
        SuiteResult { summary: s, worst_slack, records, expectation_failures }
    }
}

fn is_not_applicable(e: &Error) -> bool {
    matches!(
        e,
        Error::NotApplicable(_)
            | Error::BoundInapplicable(_)
            | Error::NotReached
            | Error::InfiniteVariance
            | Error::Divergent(_)
            | Error::MomentDivergent(_)
            | Error::LevelNotReached { .. }
            | Error::NoCrossing { .. }
            | Error::ZeroDispersion
            | Error::POutOfRange { .. }
    )
}

struct Collector<'a> {
    entry: &'a str,
    filter: &'a BoundFilter,
    records: Vec<SuiteRecord>,
}

impl Collector<'_> {
    fn wants(&self, family: &str) -> bool {
        self.filter.wants_family(family)
    }

    fn push_error(&mut self, family: &str, e: &Error) {
        if !self.filter.selects(family, family) {
            return;
        }
        self.records.push(SuiteRecord {
            entry: self.entry.into(),
            family: family.into(),
            bound: family.into(),
            status: if is_not_applicable(e) { Status::NotApplicable } else { Status::Error },
            report: None,
            reason: e.to_string(),
        });
    }

    fn push_reports(&mut self, family: &str, reports: Vec<BoundReport>) {
        for r in reports {
            if self.filter.selects(family, &r.name) {
                self.records.push(SuiteRecord {
                    entry: self.entry.into(),
                    family: family.into(),
                    bound: r.name.clone(),
                    status: Status::of(&r),
                    report: Some(r),
                    reason: String::new(),
                });
            }
        }
    }

    fn push(&mut self, family: &str, result: Result<Vec<BoundReport>>) {
        match result {
            Ok(v) => self.push_reports(family, v),
            Err(e) => self.push_error(family, &e),
        }
    }

    fn run(&mut self, family: &str, f: impl FnOnce() -> Result<Vec<BoundReport>>) {
        if self.wants(family) {
            let r = f();
            self.push(family, r);
        }
    }
}

const MT_FAMILIES: [&str; 5] = ["MT-cosine", "MT-rate", "MT-halflife", "MT-Fleming", "Gislason"];

fn evaluate_distribution(c: &mut Collector, p: &EnergyDistribution, nominal: Option<f64>) {
    let q = match SurvivalAmplitude::for_distribution(p) {
        Ok(q) => q,
        Err(e) => {
            for f in DISTRIBUTION_FAMILIES {
                if c.wants(f) {
                    c.push_error(f, &e);
                }
            }
            return;
        }
    };
    q.prefetch_moments();
    let delta_e = p.delta_e();
    c.run("Luo", || Ok(vec![luo_check(&q)?.worst]));
    c.run("Short-time", || Ok(vec![short_time_check(p, &q)?]));

    if MT_FAMILIES.iter().any(|f| c.wants(f)) {
        let mt_delta_e = match delta_e {
            Extended::Finite(d) => Some(d),
            Extended::Infinite => nominal,
        };
        let mt = match mt_delta_e {
            Some(d) => mandelstam_tamm_check(&q, d),
            None => Err(Error::InfiniteVariance),
        };
        match mt {
            Ok(mt) => {
                let mut rate = mt.rate.worst.clone();
                if let Some(w) = mt.exponential_window {
                    let observed = match w.observed {
                        Some((lo, hi)) => format!("[{lo:.6e}, {hi:.6e}]"),
                        None => "none".into(),
                    };
                    rate = rate.with_note(format!(
                        "violation window {observed}, predicted t < {:.9e} (resolution {:.1e})",
                        w.predicted, w.resolution
                    ));
                }
                let missing = |what: &str| Error::NotApplicable(format!("{what} not defined for this law"));
                c.run("MT-cosine", || Ok(vec![mt.cosine.worst.clone()]));
                c.run("MT-rate", || Ok(vec![rate]));
                c.run("MT-halflife", || mt.half_life.clone().map(|r| vec![r]).ok_or_else(|| missing("half-life")));
                c.run("MT-Fleming", || mt.fleming.clone().map(|r| vec![r]).ok_or_else(|| missing("Fleming time")));
                c.run("Gislason", || mt.gislason.clone().map(|r| vec![r]).ok_or_else(|| missing("Fleming time")));
            }
            Err(e) => {
                for f in MT_FAMILIES {
                    if c.wants(f) {
                        c.push_error(f, &e);
                    }
                }
            }
        }
    }

    if c.wants("EqWidth-star") || c.wants("EqWidth-2star") {
        match modified_times(p, &q) {
            Ok(m) => {
                c.run("EqWidth-star", || Ok(vec![m.star_report(p.hbar)]));
                c.run("EqWidth-2star", || Ok(vec![m.double_star_report(p.hbar)]));
            }
            Err(e) => {
                for f in ["EqWidth-star", "EqWidth-2star"] {
                    if c.wants(f) {
                        c.push_error(f, &e);
                    }
                }
            }
        }
    }
    c.run("Wigner-form", || Ok(vec![wigner_form_times(p, &q)?.report(p.hbar)]));
    c.run("Fujiwara", || Ok(vec![fujiwara_times(&q, p)?.report(p.hbar)]));
    c.run("HU", || Ok(vec![hilgevoord_uffink(p, HU_ALPHA, &q, HU_BETA)?.bound]));
    c.run("ML", || Ok(vec![margolus_levitin_bound(p)?]));
    if c.wants("LuoZhang") {
        for (alpha, exponent) in LUO_ZHANG_CASES {
            let name = format!("LuoZhang({alpha},{exponent})");
            if c.filter.selects("LuoZhang", &name) {
                match luo_zhang_bound(p, alpha, exponent) {
                    Ok(r) => c.push_reports("LuoZhang", vec![r]),
                    Err(e) => c.records.push(SuiteRecord {
                        entry: c.entry.into(),
                        family: "LuoZhang".into(),
                        bound: name,
                        status: if is_not_applicable(&e) { Status::NotApplicable } else { Status::Error },
                        report: None,
                        reason: e.to_string(),
                    }),
                }
            }
        }
    }
    c.run("MT-orthogonal", || {
        let d = delta_e.finite().ok_or(Error::InfiniteVariance)?;
        Ok(vec![mt_orthogonality_bound(&q, d)?])
    });
    c.run("Pfeifer", || {
        let d = delta_e.finite().ok_or(Error::InfiniteVariance)?;
        let [lo, hi] = pfeifer_self_overlap(&q, d)?;
        Ok(vec![lo.worst, hi.worst])
    });
    c.run("Yurtsever", || yurtsever_chain(p, YURTSEVER_LINKS));
}

fn evaluate_state(c: &mut Collector, s: &GaussianWignerState) {
    c.run("Gaussian-T0", || Ok(vec![s.stationarity_bound_check()?]));
    c.run("Gaussian-T0-oracle", || {
        let closed = s.stationarity_time().to_f64();
        let oracle = s.wigner_t0_oracle()?.to_f64();
        let tol = if closed.is_finite() { ORACLE_TOLERANCE * closed } else { 0.0 };
        Ok(vec![BoundReport::with_tolerance(
            "Gaussian-T0-oracle",
            oracle,
            Relation::Eq,
            closed,
            "phase-space quadrature of (dW/dt)^2",
            tol,
        )])
    });
}

fn evaluate_signal(c: &mut Collector, s: &SignalPair) {
    c.run("Frequency-time", || {
        let m = s.moments();
        Ok(vec![BoundReport::with_tolerance(
            "Frequency-time",
            m.delta_t * m.delta_omega_plus,
            Relation::Ge,
            solve_mu()?,
            "minimal positive-frequency time-bandwidth product",
            SIGNAL_TOLERANCE,
        )])
    });
    c.run("Kay-Silverman", || Ok(vec![kay_silverman_bound(s)?]));
}

fn evaluate(entry: &CatalogEntry, filter: &BoundFilter) -> Vec<SuiteRecord> {
    let mut c = Collector { entry: &entry.name, filter, records: Vec::new() };
    match &entry.object {
        CatalogObject::Distribution { distribution, nominal_delta_e } => {
            evaluate_distribution(&mut c, distribution, *nominal_delta_e)
        }
        CatalogObject::State(s) => evaluate_state(&mut c, s),
        CatalogObject::Signal(s) => evaluate_signal(&mut c, s),
    }
    c.records
}

fn expectation_failures(entries: &[&CatalogEntry], records: &[SuiteRecord], filter: &BoundFilter) -> Vec<String> {
    let mut out = Vec::new();
    for e in entries {
        for x in &e.expected {
            let Some(family) = family_of(&x.bound) else {
                out.push(format!("{}: unknown bound {}", e.name, x.bound));
                continue;
            };
            if !filter.selects(family, &x.bound) {
                continue;
            }
            let got = records
                .iter()
                .find(|r| r.entry == e.name && r.bound == x.bound)
                .and_then(|r| r.report.as_ref().map(|r| r.lhs));
            match got {
                Some(v) if (v - x.lhs).abs() <= x.tol * x.lhs.abs().max(1.0) => {}
                Some(v) => out.push(format!("{}: {} lhs {v:.12e}, expected {:.12e}", e.name, x.bound, x.lhs)),
                None => out.push(format!("{}: {} produced no report", e.name, x.bound)),
            }
        }
    }
    out
}

/// Evaluates every selected bound on every entry. Entries run in parallel;
/// records come out sorted by entry name, then in a fixed family order.
pub fn run_suite(entries: &[CatalogEntry], filter: &BoundFilter) -> Result<SuiteResult> {
    if let BoundFilter::Only(names) = filter {
        if let Some(bad) = names.iter().find(|n| family_of(n).is_none()) {
            return Err(Error::UnknownBoundName(bad.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    for e in entries {
        if !seen.insert(e.name.as_str()) {
            return Err(Error::domain(format!("duplicate catalog entry `{}`", e.name)));
        }
    }
    let mut sorted: Vec<&CatalogEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    let records: Vec<SuiteRecord> = sorted
        .par_iter()
        .map(|e| evaluate(e, filter))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let failures = expectation_failures(&sorted, &records, filter);
    Ok(SuiteResult::from_records(records, failures))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

pub const CSV_HEADER: [&str; 11] = [
    "entry", "family", "bound", "status", "lhs", "relation", "rhs", "slack", "guaranteed", "provenance", "note",
];

/// Serializes a suite result. JSON leads with the summary block; floats
/// carry 12 significant digits in both formats.
pub fn emit(result: &SuiteResult, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(result)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            for r in &result.records {
                let row: Vec<String> = match &r.report {
                    Some(b) => vec![
                        r.entry.clone(),
                        r.family.clone(),
                        r.bound.clone(),
                        r.status.as_str().into(),
                        sig12::format(b.lhs),
                        b.relation.to_string(),
                        sig12::format(b.rhs),
                        sig12::format(b.slack),
                        b.guaranteed.to_string(),
                        b.provenance.clone(),
                        b.note.clone(),
                    ],
                    None => vec![
                        r.entry.clone(),
                        r.family.clone(),
                        r.bound.clone(),
                        r.status.as_str().into(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        r.reason.clone(),
                    ],
                };
                w.write_record(&row)?;
            }
            w.flush().map_err(|e| Error::Io { path: "<memory>".into(), source: e })?;
            let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

pub fn parse_json(text: &str) -> Result<SuiteResult> {
    Ok(serde_json::from_str(text)?)
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// so that a failed run never leaves a partial file behind.
pub fn write_atomic(path: &std::path::Path, text: &str) -> Result<()> {
    let io = |e| Error::Io { path: path.to_path_buf(), source: e };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
    let file_name = path.file_name().ok_or_else(|| Error::domain("output path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp{}", file_name.to_string_lossy(), std::process::id()));
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}
