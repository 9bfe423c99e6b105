//! Fiber invariants per critical or atypical value: `R'_c`, `N'_c`, the
//! vanishing cycles at infinity `ν_c`, reduced Betti numbers and Euler
//! characteristic of `f^{-1}(c)`, period exponents, and the identity checks
//! tying them to `m`, `μ`, `ν`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brieskorn::{BrieskornTruncation, Stabilized};
use crate::local_algebra::{cmp_minpoly, rational_root, representative_root, CriticalSpectrum};
use crate::poly::{fmt_rational, PolyError, Scalar, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("generic-value probes disagree: {0:?}")]
    DisagreeingProbes(Vec<usize>),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Human-readable label of a Galois orbit of values.
pub fn value_label(minpoly: &UniPoly) -> String {
    match rational_root(minpoly) {
        Some(q) => fmt_rational(&q),
        None => format!("root of {}", minpoly.display_in("t")),
    }
}

/// Monic linear polynomial `t - q`.
pub fn linear(q: &BigRational) -> UniPoly {
    UniPoly::new(vec![Scalar::rational(-q.clone()), Scalar::one()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Critical,
    AtypicalOnly,
    Regular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSource {
    Critical,
    Operator,
    Probe,
}

/// Invariants at one value `c` (shared by all its conjugates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueRecord {
    pub minpoly: UniPoly,
    pub kind: ValueKind,
    pub sources: Vec<CandidateSource>,
    pub mu_c: usize,
    pub r_prime: Stabilized,
    pub n_prime: Stabilized,
    pub nu_c: i64,
}

impl ValueRecord {
    /// Number of conjugate values represented by this record.
    pub fn conjugates(&self) -> usize {
        self.minpoly.degree().unwrap_or(1)
    }

    /// Reduced `h^0` of the fiber.
    pub fn h0(&self) -> i64 {
        self.n_prime.value as i64
    }

    /// Reduced `h^1` of the fiber.
    pub fn h1(&self) -> i64 {
        self.r_prime.value as i64 - self.mu_c as i64
    }

    /// Euler characteristic from the reduced Betti numbers.
    pub fn euler_from_betti(&self) -> i64 {
        1 + self.h0() - self.h1()
    }

    /// Euler characteristic predicted from the generic fiber:
    /// `1 - m + ν_c + μ_c`.
    pub fn euler_predicted(&self, m: usize) -> i64 {
        1 - m as i64 + self.nu_c + self.mu_c as i64
    }

    /// Predicted `R_c - N_c = m - μ_c - ν_c` for the full Gauss-Manin system.
    pub fn r_minus_n_predicted(&self, m: usize) -> i64 {
        m as i64 - self.mu_c as i64 - self.nu_c
    }

    pub fn is_stable(&self) -> bool {
        self.r_prime.is_stable() && self.n_prime.is_stable()
    }
}

/// A regular-value probe used to determine `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericProbe {
    pub value: BigRational,
    pub r_prime: Stabilized,
    pub n_prime: Stabilized,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericRank {
    pub m: usize,
    pub probes: Vec<GenericProbe>,
    /// A third draw was needed.
    pub disagreement: bool,
}

impl GenericRank {
    /// The generic fiber looks connected (`N' = 0` at every probe).
    pub fn connected(&self) -> bool {
        self.probes.iter().all(|p| p.n_prime.value == 0)
    }

    pub fn is_stable(&self) -> bool {
        self.probes.iter().all(|p| p.r_prime.is_stable() && p.n_prime.is_stable())
    }
}

/// Random rational value that is not a critical value, from a seeded stream.
fn draw_regular(rng: &mut ChaCha8Rng, spectrum: &CriticalSpectrum, avoid: &[BigRational]) -> BigRational {
    loop {
        let q = BigRational::from_integer(BigInt::from(rng.gen_range(-97i64..=97)));
        let c = Scalar::rational(q.clone());
        if spectrum.charpoly.eval(&c).is_zero() || avoid.contains(&q) {
            continue;
        }
        return q;
    }
}

/// `m = rank` of the generic fiber cohomology: stabilized `R'_c` at random
/// regular values; two draws must agree, otherwise a third decides by
/// majority.
pub fn generic_rank(
    truncation: &BrieskornTruncation,
    spectrum: &CriticalSpectrum,
    seed: u64,
) -> Result<GenericRank, InvariantsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = draw_regular(&mut rng, spectrum, &[]);
    let second = draw_regular(&mut rng, spectrum, &[first.clone()]);
    let probe = |q: BigRational| {
        let c = Scalar::rational(q.clone());
        GenericProbe {
            r_prime: truncation.coker_dim_t_minus_c(&c),
            n_prime: truncation.ker_dim_t_minus_c(&c),
            value: q,
        }
    };
    let mut probes: Vec<GenericProbe> = [first, second].into_par_iter().map(probe).collect();
    if probes[0].r_prime.value == probes[1].r_prime.value {
        let m = probes[0].r_prime.value;
        return Ok(GenericRank {
            m,
            probes,
            disagreement: false,
        });
    }
    let avoid: Vec<BigRational> = probes.iter().map(|p| p.value.clone()).collect();
    probes.push(probe(draw_regular(&mut rng, spectrum, &avoid)));
    let values: Vec<usize> = probes.iter().map(|p| p.r_prime.value).collect();
    let m = if values[2] == values[0] || values[2] == values[1] {
        values[2]
    } else {
        return Err(InvariantsError::DisagreeingProbes(values));
    };
    Ok(GenericRank {
        m,
        probes,
        disagreement: true,
    })
}

/// Probes every candidate value: critical values, finite singular points of
/// the available Picard-Fuchs operators, and user probes. Records come back
/// in canonical value order.
pub fn atypical_scan(
    truncation: &BrieskornTruncation,
    spectrum: &CriticalSpectrum,
    m: usize,
    operator_points: &[UniPoly],
    probes: &[UniPoly],
) -> Result<Vec<ValueRecord>, InvariantsError> {
    let mut candidates: BTreeMap<String, (UniPoly, Vec<CandidateSource>)> = BTreeMap::new();
    let mut add = |p: &UniPoly, source: CandidateSource| {
        let entry = candidates
            .entry(p.to_string())
            .or_insert_with(|| (p.clone(), Vec::new()));
        if !entry.1.contains(&source) {
            entry.1.push(source);
        }
    };
    for v in &spectrum.values {
        add(&v.minpoly, CandidateSource::Critical);
    }
    for p in operator_points {
        add(p, CandidateSource::Operator);
    }
    for p in probes {
        add(p, CandidateSource::Probe);
    }
    let mut list: Vec<(UniPoly, Vec<CandidateSource>)> = candidates.into_values().collect();
    list.sort_by(|a, b| cmp_minpoly(&a.0, &b.0));
    list.into_par_iter()
        .map(|(minpoly, mut sources)| {
            sources.sort();
            let c = representative_root(&minpoly)?;
            let mu_c = spectrum
                .values
                .iter()
                .find(|v| v.minpoly == minpoly)
                .map_or(0, |v| v.mu_c);
            let r_prime = truncation.coker_dim_t_minus_c(&c);
            let n_prime = truncation.ker_dim_t_minus_c(&c);
            let nu_c = m as i64 - (r_prime.value as i64 - n_prime.value as i64);
            let kind = if mu_c > 0 {
                ValueKind::Critical
            } else if nu_c > 0 {
                ValueKind::AtypicalOnly
            } else {
                ValueKind::Regular
            };
            Ok(ValueRecord {
                minpoly,
                kind,
                sources,
                mu_c,
                r_prime,
                n_prime,
                nu_c,
            })
        })
        .collect()
}

/// Exponents `(m_c, m'_c) = (-ν_c^{≠1}, -ν_c^{≠1} + 2μ_c)` of the period
/// determinant at `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodExponents {
    pub m_c: Option<i64>,
    pub m_prime_c: Option<i64>,
    /// `ν_c > 0` and the non-unipotent part `ν_c^{≠1}` was not supplied.
    pub conditional: bool,
}

/// `nu_ne1` is the dimension of the non-unipotent part of the vanishing
/// cycles at infinity; it is forced to 0 when `ν_c = 0`.
pub fn period_exponents(record: &ValueRecord, nu_ne1: Option<i64>) -> PeriodExponents {
    let known = if record.nu_c == 0 { Some(0) } else { nu_ne1 };
    match known {
        Some(k) => PeriodExponents {
            m_c: Some(-k),
            m_prime_c: Some(-k + 2 * record.mu_c as i64),
            conditional: false,
        },
        None => PeriodExponents {
            m_c: None,
            m_prime_c: None,
            conditional: true,
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    Check,
    Prediction,
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub value: Option<String>,
    pub kind: IdentityKind,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
}

fn check(name: &str, value: Option<&str>, lhs: i64, rhs: i64) -> IdentityCheck {
    IdentityCheck {
        name: name.into(),
        value: value.map(str::to_string),
        kind: IdentityKind::Check,
        holds: lhs == rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

fn at_least_zero(name: &str, value: Option<&str>, x: i64) -> IdentityCheck {
    IdentityCheck {
        name: name.into(),
        value: value.map(str::to_string),
        kind: IdentityKind::Check,
        holds: x >= 0,
        lhs: x.to_string(),
        rhs: ">= 0".into(),
    }
}

/// Global invariants: `m`, `μ`, `ν = Σ ν_c` over all values (conjugates
/// counted), tameness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalInvariants {
    pub m: usize,
    pub mu: usize,
    pub nu: i64,
    pub tame: bool,
}

pub fn global_invariants(m: usize, mu: usize, records: &[ValueRecord]) -> GlobalInvariants {
    let nu: i64 = records.iter().map(|r| r.nu_c * r.conjugates() as i64).sum();
    GlobalInvariants {
        m,
        mu,
        nu,
        tame: nu == 0,
    }
}

/// Every computable line of the invariant table, at every recorded value,
/// plus `m = μ + ν`. `connected` says whether the generic fiber is taken to
/// be connected; otherwise the Euler characteristic line is not checked.
pub fn identity_suite(
    global: &GlobalInvariants,
    records: &[ValueRecord],
    spectrum_mu: usize,
    connected: bool,
) -> Vec<IdentityCheck> {
    let m = global.m;
    let mut out = Vec::new();
    for r in records {
        let label = value_label(&r.minpoly);
        let v = Some(label.as_str());
        out.push(check("R'_c = h1(X_c) + mu_c", v, r.r_prime.value as i64, r.h1() + r.mu_c as i64));
        out.push(check("N'_c = h0(X_c)", v, r.n_prime.value as i64, r.h0()));
        out.push(check(
            "R'_c - N'_c = m - nu_c",
            v,
            r.r_prime.value as i64 - r.n_prime.value as i64,
            m as i64 - r.nu_c,
        ));
        out.push(at_least_zero("nu_c >= 0", v, r.nu_c));
        out.push(at_least_zero("h1(X_c) = R'_c - mu_c >= 0", v, r.h1()));
        out.push(IdentityCheck {
            name: "h^i(X_c) = 0 for i not in {0, 1}".into(),
            value: Some(label.clone()),
            kind: IdentityKind::Check,
            holds: true,
            lhs: "0".into(),
            rhs: "0".into(),
        });
        let chi = check("chi(X_c) = 1 - m + nu_c + mu_c", v, r.euler_from_betti(), r.euler_predicted(m));
        out.push(if connected {
            chi
        } else {
            IdentityCheck {
                kind: IdentityKind::Unchecked,
                holds: true,
                ..chi
            }
        });
        out.push(IdentityCheck {
            name: "R_c - N_c = m - mu_c - nu_c".into(),
            value: Some(label.clone()),
            kind: IdentityKind::Prediction,
            holds: true,
            lhs: r.r_minus_n_predicted(m).to_string(),
            rhs: r.r_minus_n_predicted(m).to_string(),
        });
    }
    let critical_total: usize = records.iter().map(|r| r.mu_c * r.conjugates()).sum();
    out.push(check("sum of mu_c = mu", None, critical_total as i64, spectrum_mu as i64));
    out.push(check("m = mu + nu", None, m as i64, global.mu as i64 + global.nu));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brieskorn::TruncationParams;
    use crate::local_algebra::{critical_spectrum, milnor_algebra};
    use crate::poly::parse_polynomial;

    fn setup(s: &str) -> (BrieskornTruncation, CriticalSpectrum) {
        let f = parse_polynomial(s, &["x", "y"]).unwrap();
        let spectrum = critical_spectrum(&milnor_algebra(&f).unwrap());
        (BrieskornTruncation::new(&f, TruncationParams::default()).unwrap(), spectrum)
    }

    #[test]
    fn cusp_generic_rank_and_values() {
        let (t, spectrum) = setup("y^2 + x^3 - 3x");
        let g = generic_rank(&t, &spectrum, 1).unwrap();
        assert_eq!(g.m, 2);
        assert!(g.connected());
        let records = atypical_scan(&t, &spectrum, g.m, &[], &[]).unwrap();
        assert_eq!(records.len(), 2);
        for r in &records {
            assert_eq!((r.mu_c, r.r_prime.value, r.n_prime.value, r.nu_c), (1, 2, 0, 0));
            let pe = period_exponents(r, None);
            assert_eq!((pe.m_c, pe.m_prime_c), (Some(0), Some(2)));
        }
        let global = global_invariants(g.m, spectrum.mu, &records);
        assert!(global.tame);
        assert!(identity_suite(&global, &records, spectrum.mu, true).iter().all(|c| c.holds));
    }

    #[test]
    fn user_supplied_non_unipotent_part() {
        let (t, spectrum) = setup("x^2*y^2 + 2x*y + x");
        let records = atypical_scan(&t, &spectrum, 2, &[linear(&BigRational::from_integer((-1).into()))], &[]).unwrap();
        let atyp = records.iter().find(|r| r.kind == ValueKind::AtypicalOnly).unwrap();
        assert_eq!(atyp.nu_c, 1);
        assert!(period_exponents(atyp, None).conditional);
        let mut fake = atyp.clone();
        fake.mu_c = 1;
        let pe = period_exponents(&fake, Some(1));
        assert_eq!((pe.m_c, pe.m_prime_c), (Some(-1), Some(1)));
    }

    #[test]
    fn empty_suite_for_smooth_coordinate() {
        let global = global_invariants(0, 0, &[]);
        let suite = identity_suite(&global, &[], 0, true);
        assert!(suite.iter().all(|c| c.holds));
    }
}
