//! End-to-end analysis of one polynomial and its serialized report.
//!
//! The JSON form is canonical: object keys sorted, rationals written `p/q`,
//! polynomials in the value variable `t`, no floating point anywhere.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brieskorn::{BrieskornError, BrieskornTruncation, PlateauStatus, Stabilized, TruncationParams};
use crate::invariants::{
    atypical_scan, generic_rank, global_invariants, identity_suite, linear, period_exponents,
    value_label, CandidateSource, GenericRank, GlobalInvariants, IdentityCheck, IdentityKind,
    InvariantsError, PeriodExponents, ValueKind, ValueRecord,
};
use crate::local_algebra::{critical_spectrum, milnor_algebra, rational_root, AlgebraError, CriticalSpectrum};
use crate::picard_fuchs::{
    annihilator, indicial, minimality_probe, verify_annihilation, Annihilator, Location, PfError,
    SearchBounds,
};
use crate::poly::{fmt_rational, parse_in, parse_rational, MultiPoly, ParseError, UniPoly};

/// Extra forms `ω` tried, in order, when the atypical scan from the
/// configured forms does not account for `m - μ`.
pub const ADAPTIVE_FORMS: &[&str] = &["x", "y", "x*y", "x^2", "y^2"];

pub const ENGINE_NAME: &str = "brieskorn";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub polynomial: String,
    pub vars: Vec<String>,
    pub truncation: TruncationParams,
    pub seed: u64,
    /// Extra rational values to probe.
    pub probes: Vec<String>,
    pub pf: SearchBounds,
    /// Forms `ω` (as polynomials) whose Picard-Fuchs operators are derived.
    pub forms: Vec<String>,
    /// Try [`ADAPTIVE_FORMS`] when the scan comes up short.
    pub adaptive_forms: bool,
    /// Depth of the `∂_t^{-i} G^(0)` codimension probe; 0 disables it.
    pub depth: usize,
    /// User-supplied dimension of the non-unipotent part of the vanishing
    /// cycles at infinity, keyed by value (`"p/q"`).
    pub non_unipotent: BTreeMap<String, i64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            polynomial: String::new(),
            vars: vec!["x".into(), "y".into()],
            truncation: TruncationParams::default(),
            seed: 1,
            probes: Vec::new(),
            pf: SearchBounds::default(),
            forms: vec!["1".into()],
            adaptive_forms: true,
            depth: 1,
            non_unipotent: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    pub fn for_polynomial(text: &str) -> RunConfig {
        RunConfig {
            polynomial: text.into(),
            ..RunConfig::default()
        }
    }

    fn validate(&self) -> Result<(), AnalyzeError> {
        let bad = |msg: &str| Err(AnalyzeError::InvalidConfig(msg.into()));
        if self.vars.len() != 2 {
            return bad("exactly two variable names are required");
        }
        if self.vars[0] == self.vars[1] {
            return bad("variable names must differ");
        }
        if self.truncation.window == 0 {
            return bad("plateau window must be positive");
        }
        if self.truncation.d_max == Some(0) || self.truncation.d_start == Some(0) {
            return bad("degree bounds must be positive");
        }
        if self.pf.max_order == 0 {
            return bad("maximal operator order must be positive");
        }
        if self.forms.is_empty() {
            return bad("at least one form is required");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzeError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("f is constant")]
    ConstantMap,
    #[error("the critical locus is not zero-dimensional (non-isolated singularities)")]
    NonIsolatedSingularities,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid probe value `{0}`")]
    InvalidProbe(String),
    #[error("generic-value probes disagree: {0:?}")]
    DisagreeingProbes(Vec<usize>),
    #[error("{0}")]
    Internal(String),
}

impl AnalyzeError {
    /// Process exit status: 2 for bad input, 3 when the engine's bounds were
    /// not enough to determine the answer.
    pub fn exit_code(&self) -> i32 {
        match self {
            AnalyzeError::DisagreeingProbes(_) | AnalyzeError::Internal(_) => 3,
            _ => 2,
        }
    }
}

impl From<AlgebraError> for AnalyzeError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::NonIsolatedSingularities => AnalyzeError::NonIsolatedSingularities,
            other => AnalyzeError::Internal(other.to_string()),
        }
    }
}

impl From<BrieskornError> for AnalyzeError {
    fn from(e: BrieskornError) -> Self {
        match e {
            BrieskornError::ConstantMap => AnalyzeError::ConstantMap,
            other => AnalyzeError::InvalidConfig(other.to_string()),
        }
    }
}

impl From<InvariantsError> for AnalyzeError {
    fn from(e: InvariantsError) -> Self {
        match e {
            InvariantsError::DisagreeingProbes(v) => AnalyzeError::DisagreeingProbes(v),
            other => AnalyzeError::Internal(other.to_string()),
        }
    }
}

/// A Galois orbit of values: its minimal polynomial, the value itself when
/// rational, and the number of conjugates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueJson {
    pub minpoly: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational: Option<String>,
    pub conjugates: usize,
}

impl ValueJson {
    pub fn from_minpoly(p: &UniPoly) -> ValueJson {
        ValueJson {
            minpoly: p.to_string(),
            rational: rational_root(p).map(|q| fmt_rational(&q)),
            conjugates: p.degree().unwrap_or(0),
        }
    }

    pub fn label(&self) -> String {
        self.rational
            .clone()
            .unwrap_or_else(|| format!("root of {}", self.minpoly))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineInfo {
    pub name: String,
    pub version: String,
    pub monomial_order: String,
    pub degree: usize,
    pub d_schedule: Vec<usize>,
    pub forms_used: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumValue {
    pub value: ValueJson,
    pub mu_c: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub mu: usize,
    pub charpoly: String,
    pub values: Vec<SpectrumValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlateauJson {
    pub status: PlateauStatus,
    pub d: usize,
    pub e: usize,
}

impl From<&Stabilized> for PlateauJson {
    fn from(s: &Stabilized) -> Self {
        PlateauJson {
            status: s.status,
            d: s.d,
            e: s.e,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueEntry {
    pub value: ValueJson,
    pub kind: ValueKind,
    pub sources: Vec<CandidateSource>,
    pub mu_c: usize,
    pub r_prime: usize,
    pub n_prime: usize,
    pub nu_c: i64,
    pub h0: i64,
    pub h1: i64,
    pub chi: i64,
    pub r_minus_n_predicted: i64,
    pub period_exponents: PeriodExponents,
    pub plateau_r_prime: PlateauJson,
    pub plateau_n_prime: PlateauJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericProbeJson {
    pub value: String,
    pub r_prime: usize,
    pub n_prime: usize,
    pub plateau_r_prime: PlateauJson,
    pub plateau_n_prime: PlateauJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalJson {
    pub m: usize,
    pub mu: usize,
    pub nu: i64,
    pub tame: bool,
    /// Values with `μ_c + ν_c > 0`.
    pub atypical: Vec<ValueJson>,
    pub generic_probes: Vec<GenericProbeJson>,
    pub generic_fiber_connected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootJson {
    pub root: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub factor: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicialJson {
    /// `None` at infinity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<ValueJson>,
    pub infinity: bool,
    pub polynomial: String,
    pub regular: bool,
    pub rational_roots: Vec<RootJson>,
    pub other_factors: Vec<FactorJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub form: String,
    pub operator: String,
    pub order: usize,
    /// Coefficient of `Dt^j` at index `j`.
    pub coefficients: Vec<String>,
    pub singular_points: Vec<ValueJson>,
    pub indicial: Vec<IndicialJson>,
    pub verified: bool,
    pub minimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthJson {
    pub depth: usize,
    pub codimension: usize,
    pub plateau: PlateauJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub config: RunConfig,
    pub engine: EngineInfo,
    pub spectrum: SpectrumJson,
    pub values: Vec<ValueEntry>,
    pub global: GlobalJson,
    pub operators: Vec<OperatorJson>,
    pub identities: Vec<IdentityCheck>,
    pub depth_probe: Vec<DepthJson>,
    pub caveats: Vec<String>,
}

impl ReportDocument {
    /// Every identity holds.
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|c| c.holds)
    }

    pub fn failed_identities(&self) -> Vec<&IdentityCheck> {
        self.identities.iter().filter(|c| !c.holds).collect()
    }

    /// Entry for the value with the given label (`"p/q"` or `"root of ..."`).
    pub fn value(&self, label: &str) -> Option<&ValueEntry> {
        self.values.iter().find(|v| v.value.label() == label)
    }

    /// Canonical JSON text with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        // serde_json's Map is ordered by key unless `preserve_order` is on
        let value = serde_json::to_value(self).expect("report is serializable");
        let mut s = serde_json::to_string_pretty(&value).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<ReportDocument, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Plain-text report laid out as the fiber invariant table.
    pub fn to_text(&self) -> String {
        render_text(self)
    }
}

struct OperatorRun {
    form: String,
    annihilator: Annihilator,
    verified: bool,
    minimal: bool,
}

fn derive_operator(
    f: &MultiPoly,
    truncation: &BrieskornTruncation,
    form_text: &str,
    omega: &MultiPoly,
    bounds: SearchBounds,
) -> Result<Option<OperatorRun>, AnalyzeError> {
    match annihilator(f, omega, bounds) {
        Ok(a) => Ok(Some(OperatorRun {
            form: form_text.to_string(),
            verified: verify_annihilation(truncation, omega, &a.operator),
            minimal: minimality_probe(f, omega, &a, bounds),
            annihilator: a,
        })),
        Err(PfError::NotFound { .. }) => Ok(None),
        Err(e) => Err(AnalyzeError::Internal(e.to_string())),
    }
}

fn scan_deficit(m: usize, mu: usize, records: &[ValueRecord]) -> i64 {
    let nu: i64 = records.iter().map(|r| r.nu_c * r.conjugates() as i64).sum();
    m as i64 - mu as i64 - nu
}

/// Runs the whole pipeline: Milnor algebra, truncated Brieskorn module,
/// Picard-Fuchs operators, atypical scan, invariants and identities.
pub fn analyze(config: &RunConfig) -> Result<ReportDocument, AnalyzeError> {
    config.validate()?;
    let vars = std::sync::Arc::new(config.vars.clone());
    let f = parse_in(&config.polynomial, &vars)?;
    if f.is_constant() {
        return Err(AnalyzeError::ConstantMap);
    }
    let probes: Vec<UniPoly> = config
        .probes
        .iter()
        .map(|s| {
            parse_rational(s)
                .map(|q| linear(&q))
                .ok_or_else(|| AnalyzeError::InvalidProbe(s.clone()))
        })
        .collect::<Result<_, _>>()?;
    let forms: Vec<MultiPoly> = config
        .forms
        .iter()
        .map(|s| parse_in(s, &vars))
        .collect::<Result<_, _>>()?;

    let qa = milnor_algebra(&f)?;
    let spectrum = critical_spectrum(&qa);
    let truncation = BrieskornTruncation::new(&f, config.truncation.clone())?;

    let (generic, operators) = rayon::join(
        || generic_rank(&truncation, &spectrum, config.seed),
        || {
            forms
                .par_iter()
                .zip(config.forms.par_iter())
                .map(|(omega, text)| derive_operator(&f, &truncation, text, omega, config.pf))
                .collect::<Result<Vec<_>, _>>()
        },
    );
    let generic = generic?;
    let mut operators: Vec<OperatorRun> = operators?.into_iter().flatten().collect();
    let m = generic.m;

    let points = |ops: &[OperatorRun]| -> Vec<UniPoly> {
        ops.iter()
            .flat_map(|o| o.annihilator.operator.singular_points())
            .collect()
    };
    let mut records = atypical_scan(&truncation, &spectrum, m, &points(&operators), &probes)?;
    let mut forms_used: Vec<String> = config.forms.clone();
    if config.adaptive_forms && scan_deficit(m, spectrum.mu, &records) > 0 {
        for text in ADAPTIVE_FORMS {
            if forms_used.iter().any(|s| s == text) {
                continue;
            }
            let omega = parse_in(text, &vars)?;
            forms_used.push(text.to_string());
            if let Some(run) = derive_operator(&f, &truncation, text, &omega, config.pf)? {
                operators.push(run);
                records = atypical_scan(&truncation, &spectrum, m, &points(&operators), &probes)?;
                if scan_deficit(m, spectrum.mu, &records) <= 0 {
                    break;
                }
            }
        }
    }

    let depth_probe: Vec<DepthJson> = truncation
        .depth_probe(config.depth)
        .iter()
        .enumerate()
        .map(|(i, s)| DepthJson {
            depth: i + 1,
            codimension: s.value,
            plateau: s.into(),
        })
        .collect();

    let global = global_invariants(m, spectrum.mu, &records);
    let connected = generic.connected();
    let identities = identity_suite(&global, &records, spectrum.mu, connected);
    let caveats = caveats(&generic, &records, &operators, &forms_used, &depth_probe, config, &global, &spectrum);

    let values = records
        .iter()
        .map(|r| {
            let label = value_label(&r.minpoly);
            ValueEntry {
                value: ValueJson::from_minpoly(&r.minpoly),
                kind: r.kind,
                sources: r.sources.clone(),
                mu_c: r.mu_c,
                r_prime: r.r_prime.value,
                n_prime: r.n_prime.value,
                nu_c: r.nu_c,
                h0: r.h0(),
                h1: r.h1(),
                chi: r.euler_from_betti(),
                r_minus_n_predicted: r.r_minus_n_predicted(m),
                period_exponents: period_exponents(r, config.non_unipotent.get(&label).copied()),
                plateau_r_prime: (&r.r_prime).into(),
                plateau_n_prime: (&r.n_prime).into(),
            }
        })
        .collect();

    Ok(ReportDocument {
        config: config.clone(),
        engine: EngineInfo {
            name: ENGINE_NAME.into(),
            version: ENGINE_VERSION.into(),
            monomial_order: "grevlex".into(),
            degree: truncation.degree(),
            d_schedule: truncation.schedule(),
            forms_used,
        },
        spectrum: spectrum_json(&spectrum),
        values,
        global: global_json(&global, &generic, &records),
        operators: operators.iter().map(operator_json).collect::<Result<_, _>>()?,
        identities,
        depth_probe,
        caveats,
    })
}

fn spectrum_json(s: &CriticalSpectrum) -> SpectrumJson {
    SpectrumJson {
        mu: s.mu,
        charpoly: s.charpoly.to_string(),
        values: s
            .values
            .iter()
            .map(|v| SpectrumValue {
                value: ValueJson::from_minpoly(&v.minpoly),
                mu_c: v.mu_c,
            })
            .collect(),
    }
}

fn global_json(g: &GlobalInvariants, generic: &GenericRank, records: &[ValueRecord]) -> GlobalJson {
    GlobalJson {
        m: g.m,
        mu: g.mu,
        nu: g.nu,
        tame: g.tame,
        atypical: records
            .iter()
            .filter(|r| r.nu_c + r.mu_c as i64 > 0)
            .map(|r| ValueJson::from_minpoly(&r.minpoly))
            .collect(),
        generic_probes: generic
            .probes
            .iter()
            .map(|p| GenericProbeJson {
                value: fmt_rational(&p.value),
                r_prime: p.r_prime.value,
                n_prime: p.n_prime.value,
                plateau_r_prime: (&p.r_prime).into(),
                plateau_n_prime: (&p.n_prime).into(),
            })
            .collect(),
        generic_fiber_connected: generic.connected(),
    }
}

fn operator_json(run: &OperatorRun) -> Result<OperatorJson, AnalyzeError> {
    let op = &run.annihilator.operator;
    let singular = op.singular_points();
    let mut locations: Vec<Location> = singular.iter().cloned().map(Location::Finite).collect();
    locations.push(Location::Infinity);
    let indicial = locations
        .iter()
        .map(|loc| {
            let data = indicial(op, loc).map_err(|e| AnalyzeError::Internal(e.to_string()))?;
            Ok(IndicialJson {
                at: match loc {
                    Location::Finite(p) => Some(ValueJson::from_minpoly(p)),
                    Location::Infinity => None,
                },
                infinity: matches!(loc, Location::Infinity),
                polynomial: data.polynomial.display_in("s"),
                regular: data.regular,
                rational_roots: data
                    .rational_roots
                    .iter()
                    .map(|(q, k)| RootJson {
                        root: fmt_rational(q),
                        multiplicity: *k,
                    })
                    .collect(),
                other_factors: data
                    .other_factors
                    .iter()
                    .map(|(p, k)| FactorJson {
                        factor: p.display_in("s"),
                        multiplicity: *k,
                    })
                    .collect(),
            })
        })
        .collect::<Result<_, AnalyzeError>>()?;
    Ok(OperatorJson {
        form: run.form.clone(),
        operator: op.to_string(),
        order: op.order().unwrap_or(0),
        coefficients: op.coeffs().iter().map(|c| c.to_string()).collect(),
        singular_points: singular.iter().map(ValueJson::from_minpoly).collect(),
        indicial,
        verified: run.verified,
        minimal: run.minimal,
    })
}

#[allow(clippy::too_many_arguments)]
fn caveats(
    generic: &GenericRank,
    records: &[ValueRecord],
    operators: &[OperatorRun],
    forms_used: &[String],
    depth: &[DepthJson],
    config: &RunConfig,
    global: &GlobalInvariants,
    spectrum: &CriticalSpectrum,
) -> Vec<String> {
    let mut out = Vec::new();
    let status = |s: PlateauStatus| serde_json::to_value(s).expect("status").as_str().unwrap_or("").to_string();
    for p in &generic.probes {
        for (name, s) in [("R'", &p.r_prime), ("N'", &p.n_prime)] {
            if !s.is_stable() {
                out.push(format!("plateau: {name} at generic probe {} is {}", fmt_rational(&p.value), status(s.status)));
            }
        }
    }
    if generic.disagreement {
        out.push("generic rank: the first two probes disagreed; a third draw decided by majority".into());
    }
    for r in records {
        for (name, s) in [("R'_c", &r.r_prime), ("N'_c", &r.n_prime)] {
            if !s.is_stable() {
                out.push(format!("plateau: {name} at c = {} is {}", value_label(&r.minpoly), status(s.status)));
            }
        }
    }
    for d in depth {
        if d.plateau.status != PlateauStatus::Stable {
            out.push(format!("plateau: depth probe {} is {}", d.depth, status(d.plateau.status)));
        }
    }
    if generic.connected() {
        out.push("euler characteristic: generic fiber assumed connected (N' = 0 at every generic probe)".into());
    } else {
        out.push("euler characteristic: N' > 0 at a generic probe; connectedness dropped and chi lines unchecked".into());
    }
    let mut sources = vec!["critical values".to_string()];
    if operators.is_empty() {
        out.push(format!(
            "incomplete scan: no Picard-Fuchs operator found for forms [{}] within order {} and coefficient degree {}",
            forms_used.join(", "),
            config.pf.max_order,
            config.pf.max_coeff_degree
        ));
    } else {
        let with_ops: Vec<&str> = operators.iter().map(|o| o.form.as_str()).collect();
        sources.push(format!("operator singular points for forms [{}]", with_ops.join(", ")));
    }
    if !config.probes.is_empty() {
        sources.push(format!("user probes [{}]", config.probes.join(", ")));
    }
    out.push(format!("completeness: atypical candidates came from {}", sources.join("; ")));
    let deficit = global.m as i64 - spectrum.mu as i64 - global.nu;
    if deficit != 0 {
        out.push(format!("completeness: m - mu - nu = {deficit}; some atypical value was not found or probed"));
    }
    for o in operators {
        if !o.verified {
            out.push(format!("operator for form {} failed exact verification", o.form));
        }
        if !o.minimal {
            out.push(format!("operator for form {} has a lower-order annihilator", o.form));
        }
    }
    for r in records {
        let label = value_label(&r.minpoly);
        if r.nu_c > 0 && !config.non_unipotent.contains_key(&label) {
            out.push(format!(
                "period exponents at c = {label} are conditional: nu_c = {} and its non-unipotent part was not supplied",
                r.nu_c
            ));
        }
    }
    out.push("R_c and N_c are not computed individually; only R_c - N_c is predicted".into());
    out
}

fn render_text(doc: &ReportDocument) -> String {
    let mut s = String::new();
    let g = &doc.global;
    let _ = writeln!(s, "f = {}    (variables {})", doc.config.polynomial, doc.config.vars.join(", "));
    let _ = writeln!(
        s,
        "engine {} {}, {} order, degree {}, d schedule {:?}, window {}, seed {}",
        doc.engine.name,
        doc.engine.version,
        doc.engine.monomial_order,
        doc.engine.degree,
        doc.engine.d_schedule,
        doc.config.truncation.window,
        doc.config.seed
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "mu = {}   m = {}   nu = {}   tame = {}", g.mu, g.m, g.nu, if g.tame { "yes" } else { "no" });
    let _ = writeln!(s, "charpoly of f on the Milnor algebra: {}", doc.spectrum.charpoly);
    let atypical: Vec<String> = g.atypical.iter().map(ValueJson::label).collect();
    let _ = writeln!(s, "atypical values: {{{}}}", atypical.join(", "));
    let _ = writeln!(s);

    let header = [
        "c", "kind", "mu_c", "R'_c", "N'_c", "nu_c", "h~0", "h~1", "chi", "R_c-N_c", "m_c", "m'_c",
    ];
    let opt = |x: Option<i64>| x.map_or("?".to_string(), |v| v.to_string());
    let rows: Vec<Vec<String>> = doc
        .values
        .iter()
        .map(|v| {
            let kind = match v.kind {
                ValueKind::Critical => "critical",
                ValueKind::AtypicalOnly => "atypical",
                ValueKind::Regular => "regular",
            };
            let stable = v.plateau_r_prime.status == PlateauStatus::Stable
                && v.plateau_n_prime.status == PlateauStatus::Stable;
            vec![
                v.value.label(),
                kind.to_string(),
                v.mu_c.to_string(),
                v.r_prime.to_string() + if stable { "" } else { "*" },
                v.n_prime.to_string(),
                v.nu_c.to_string(),
                v.h0.to_string(),
                v.h1.to_string(),
                v.chi.to_string(),
                v.r_minus_n_predicted.to_string(),
                opt(v.period_exponents.m_c),
                opt(v.period_exponents.m_prime_c),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<String>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let _ = writeln!(s, "{}", line(header.iter().map(|h| h.to_string()).collect()));
    for r in rows {
        let _ = writeln!(s, "{}", line(r));
    }
    let _ = writeln!(s, "(R_c-N_c is predicted as m - mu_c - nu_c; '?' marks conditional exponents; '*' an unstable plateau)");
    let _ = writeln!(s);

    for op in &doc.operators {
        let _ = writeln!(s, "Picard-Fuchs operator of [{} dx^dy]: {}", op.form, op.operator);
        let pts: Vec<String> = op.singular_points.iter().map(ValueJson::label).collect();
        let _ = writeln!(
            s,
            "  order {}, singular points {{{}}}, verified {}, minimal {}",
            op.order,
            pts.join(", "),
            op.verified,
            op.minimal
        );
        for ind in &op.indicial {
            let at = ind.at.as_ref().map_or("infinity".to_string(), ValueJson::label);
            let roots: Vec<String> = ind
                .rational_roots
                .iter()
                .map(|r| if r.multiplicity > 1 { format!("{}^{}", r.root, r.multiplicity) } else { r.root.clone() })
                .chain(ind.other_factors.iter().map(|f| format!("roots of {}", f.factor)))
                .collect();
            let _ = writeln!(
                s,
                "  at {at}: indicial {} -> exponents {{{}}}{}",
                ind.polynomial,
                roots.join(", "),
                if ind.regular { "" } else { " (irregular)" }
            );
        }
    }
    if !doc.depth_probe.is_empty() {
        let codims: Vec<String> = doc.depth_probe.iter().map(|d| d.codimension.to_string()).collect();
        let _ = writeln!(s, "codim of Dt^-i G^(0) for i = 1..{}: {}", doc.depth_probe.len(), codims.join(", "));
    }
    let _ = writeln!(s);

    let checked = doc.identities.iter().filter(|c| c.kind == IdentityKind::Check).count();
    let failed = doc.failed_identities();
    let _ = writeln!(s, "identities: {} checked, {} failed", checked, failed.len());
    for c in failed {
        let at = c.value.as_deref().map_or(String::new(), |v| format!(" at c = {v}"));
        let _ = writeln!(s, "  FAILED {}{at}: {} vs {}", c.name, c.lhs, c.rhs);
    }
    if !doc.caveats.is_empty() {
        let _ = writeln!(s, "caveats:");
        for c in &doc.caveats {
            let _ = writeln!(s, "  - {c}");
        }
    }
    s
}
