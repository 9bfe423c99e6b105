//! Bundled example polynomials with golden expectations.

use serde::{Deserialize, Serialize};

use crate::picard_fuchs::{operator_equiv, DiffOperator};
use crate::poly::parse_univariate;
use crate::report::{analyze, ReportDocument, RunConfig};

const FIXTURES: &[&str] = &[
    include_str!("../corpus/two_morse_points.json"),
    include_str!("../corpus/infinity_rank_seven.json"),
    include_str!("../corpus/infinity_rank_two.json"),
    include_str!("../corpus/smoke_cylinder.json"),
    include_str!("../corpus/smoke_nine.json"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub polynomial: String,
    /// Overrides on top of the default configuration.
    #[serde(default)]
    pub config: Option<RunConfig>,
    pub expect: Expectation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Expectation {
    pub m: Option<usize>,
    pub mu: Option<usize>,
    pub nu: Option<i64>,
    pub tame: Option<bool>,
    pub mu_positive: Option<bool>,
    pub atypical: Option<Vec<String>>,
    pub values: Vec<ValueExpectation>,
    pub operators: Vec<OperatorExpectation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ValueExpectation {
    pub value: String,
    pub mu_c: Option<usize>,
    pub r_prime: Option<usize>,
    pub n_prime: Option<usize>,
    pub nu_c: Option<i64>,
    pub h0: Option<i64>,
    pub h1: Option<i64>,
    pub r_minus_n_predicted: Option<i64>,
    pub m_c: Option<i64>,
    pub m_prime_c: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OperatorExpectation {
    pub form: String,
    pub order: Option<usize>,
    pub singular_points: Option<Vec<String>>,
    /// Coefficients of `Dt^0, Dt^1, ...` of an operator the derived one must
    /// be equivalent to.
    pub equivalent_to: Option<Vec<String>>,
}

impl Fixture {
    pub fn run_config(&self) -> RunConfig {
        let mut c = self.config.clone().unwrap_or_default();
        c.polynomial = self.polynomial.clone();
        c
    }
}

/// All bundled fixtures, in a fixed order.
pub fn fixtures() -> Vec<Fixture> {
    FIXTURES
        .iter()
        .map(|s| serde_json::from_str(s).expect("bundled fixture parses"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusOutcome {
    pub name: String,
    pub diffs: Vec<String>,
    pub report: Option<ReportDocument>,
}

impl CorpusOutcome {
    pub fn passed(&self) -> bool {
        self.diffs.is_empty()
    }
}

fn diff<T: PartialEq + std::fmt::Debug>(out: &mut Vec<String>, what: &str, expected: Option<T>, actual: T) {
    if let Some(e) = expected {
        if e != actual {
            out.push(format!("{what}: expected {e:?}, got {actual:?}"));
        }
    }
}

/// Differences between a report and the expectations; failed identities
/// count as differences too.
pub fn compare(expect: &Expectation, doc: &ReportDocument) -> Vec<String> {
    let mut out = Vec::new();
    for c in doc.failed_identities() {
        let at = c.value.as_deref().map_or(String::new(), |v| format!(" at c = {v}"));
        out.push(format!("identity {}{at}: {} vs {}", c.name, c.lhs, c.rhs));
    }
    let g = &doc.global;
    diff(&mut out, "m", expect.m, g.m);
    diff(&mut out, "mu", expect.mu, g.mu);
    diff(&mut out, "nu", expect.nu, g.nu);
    diff(&mut out, "tame", expect.tame, g.tame);
    diff(&mut out, "mu > 0", expect.mu_positive, g.mu > 0);
    let atypical: Vec<String> = g.atypical.iter().map(|v| v.label()).collect();
    diff(&mut out, "atypical values", expect.atypical.clone(), atypical);
    for ve in &expect.values {
        let Some(v) = doc.value(&ve.value) else {
            out.push(format!("value {} missing from the report", ve.value));
            continue;
        };
        let at = |name: &str| format!("{name} at c = {}", ve.value);
        diff(&mut out, &at("mu_c"), ve.mu_c, v.mu_c);
        diff(&mut out, &at("R'_c"), ve.r_prime, v.r_prime);
        diff(&mut out, &at("N'_c"), ve.n_prime, v.n_prime);
        diff(&mut out, &at("nu_c"), ve.nu_c, v.nu_c);
        diff(&mut out, &at("h0"), ve.h0, v.h0);
        diff(&mut out, &at("h1"), ve.h1, v.h1);
        diff(&mut out, &at("R_c - N_c"), ve.r_minus_n_predicted, v.r_minus_n_predicted);
        diff(&mut out, &at("m_c"), ve.m_c.map(Some), v.period_exponents.m_c);
        diff(&mut out, &at("m'_c"), ve.m_prime_c.map(Some), v.period_exponents.m_prime_c);
    }
    for oe in &expect.operators {
        let Some(op) = doc.operators.iter().find(|o| o.form == oe.form) else {
            out.push(format!("no operator for form {}", oe.form));
            continue;
        };
        diff(&mut out, &format!("order of operator for {}", oe.form), oe.order, op.order);
        let points: Vec<String> = op.singular_points.iter().map(|v| v.label()).collect();
        diff(
            &mut out,
            &format!("singular points of operator for {}", oe.form),
            oe.singular_points.clone(),
            points,
        );
        if let Some(target) = &oe.equivalent_to {
            let parse = |cs: &[String]| -> Option<DiffOperator> {
                cs.iter()
                    .map(|c| parse_univariate(c, "t").ok())
                    .collect::<Option<Vec<_>>>()
                    .map(DiffOperator::new)
            };
            match (parse(target), parse(&op.coefficients)) {
                (Some(want), Some(got)) if operator_equiv(&want, &got) => {}
                (Some(want), _) => out.push(format!(
                    "operator for {}: expected equivalent to {want}, got {}",
                    oe.form, op.operator
                )),
                (None, _) => out.push(format!("operator for {}: unparsable expectation", oe.form)),
            }
        }
    }
    out
}

pub fn run_fixture(fixture: &Fixture) -> CorpusOutcome {
    match analyze(&fixture.run_config()) {
        Ok(doc) => CorpusOutcome {
            name: fixture.name.clone(),
            diffs: compare(&fixture.expect, &doc),
            report: Some(doc),
        },
        Err(e) => CorpusOutcome {
            name: fixture.name.clone(),
            diffs: vec![format!("analysis failed: {e}")],
            report: None,
        },
    }
}

/// Runs every fixture whose name contains `filter`.
pub fn run_corpus(filter: Option<&str>) -> Vec<CorpusOutcome> {
    fixtures()
        .iter()
        .filter(|f| filter.map_or(true, |s| f.name.contains(s)))
        .map(run_fixture)
        .collect()
}

/// Summary table, one line per fixture plus its differences.
pub fn render_table(outcomes: &[CorpusOutcome]) -> String {
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for o in outcomes {
        let summary = o.report.as_ref().map_or(String::new(), |d| {
            format!("mu = {}  m = {}  nu = {}", d.global.mu, d.global.m, d.global.nu)
        });
        let status = if o.passed() { "PASS" } else { "FAIL" };
        s.push_str(&format!("{status}  {:<width$}  {summary}\n", o.name));
        for d in &o.diffs {
            s.push_str(&format!("      {d}\n"));
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    s.push_str(&format!("{passed}/{} fixtures passed\n", outcomes.len()));
    s
}
