//! Differential operators `Σ p_i(t) ∂_t^i` with polynomial coefficients,
//! annihilators of forms in the Gauss-Manin system found through iterated
//! `∂_t^{-1}`, and indicial polynomials at finite points and at infinity.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brieskorn::{inverse_dt_poly, to_sparse, Antiderivative, BrieskornTruncation};
use crate::linalg::{factor_rational, SparseEchelon};
use crate::local_algebra::{cmp_minpoly, rational_root, representative_root};
use crate::poly::{jacobian2, Monomial, MultiPoly, PolyError, Scalar, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PfError {
    #[error("no annihilator of order <= {max_order} with coefficient degree <= {max_coeff_degree}")]
    NotFound { max_order: usize, max_coeff_degree: usize },
    #[error("the zero operator has no indicial data")]
    ZeroOperator,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `Σ_i coeffs[i](t) ∂_t^i`, trailing zero coefficients removed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffOperator {
    coeffs: Vec<UniPoly>,
}

fn binomial(n: usize, k: usize) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..k {
        acc = &(&acc * &Scalar::from_int((n - i) as i64)) / &Scalar::from_int((i + 1) as i64);
    }
    acc
}

fn nth_derivative(p: &UniPoly, n: usize) -> UniPoly {
    (0..n).fold(p.clone(), |acc, _| acc.derivative())
}

/// Falling factorial `s (s-1) ... (s-i+1)` in the variable `s`, with `s`
/// replaced by `sign * s`.
fn falling(i: usize, sign: i64) -> UniPoly {
    (0..i).fold(UniPoly::one(), |acc, j| {
        acc.mul(&UniPoly::new(vec![Scalar::from_int(-(j as i64)), Scalar::from_int(sign)]))
    })
}

impl DiffOperator {
    pub fn new(mut coeffs: Vec<UniPoly>) -> DiffOperator {
        while coeffs.last().is_some_and(UniPoly::is_zero) {
            coeffs.pop();
        }
        DiffOperator { coeffs }
    }

    pub fn zero() -> DiffOperator {
        DiffOperator { coeffs: Vec::new() }
    }

    /// Multiplication by a polynomial in `t`.
    pub fn from_poly(p: UniPoly) -> DiffOperator {
        DiffOperator::new(vec![p])
    }

    /// `∂_t^k`.
    pub fn dt_pow(k: usize) -> DiffOperator {
        let mut coeffs = vec![UniPoly::zero(); k + 1];
        coeffs[k] = UniPoly::one();
        DiffOperator { coeffs }
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> UniPoly {
        self.coeffs.last().cloned().unwrap_or_else(UniPoly::zero)
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = UniPoly::zero();
        DiffOperator::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z).add(other.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &DiffOperator) -> DiffOperator {
        self.add(&other.scale_left(&UniPoly::constant(Scalar::from_int(-1))))
    }

    /// `q(t) * self`.
    pub fn scale_left(&self, q: &UniPoly) -> DiffOperator {
        DiffOperator::new(self.coeffs.iter().map(|p| p.mul(q)).collect())
    }

    /// Product in the Weyl algebra, using `∂^i q = Σ_l C(i,l) q^(l) ∂^(i-l)`.
    pub fn weyl_mul(&self, other: &DiffOperator) -> DiffOperator {
        if self.is_zero() || other.is_zero() {
            return DiffOperator::zero();
        }
        let mut out = vec![UniPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            for (j, q) in other.coeffs.iter().enumerate() {
                for l in 0..=i {
                    let dq = nth_derivative(q, l);
                    if dq.is_zero() {
                        break;
                    }
                    let term = p.mul(&dq).scale(&binomial(i, l));
                    out[i - l + j] = out[i - l + j].add(&term);
                }
            }
        }
        DiffOperator::new(out)
    }

    /// Coefficients `r_i` with `self = Σ_i ∂^i r_i(t)` (derivatives to the
    /// left), via `p ∂^i = Σ_l (-1)^l C(i,l) ∂^(i-l) p^(l)`.
    pub fn to_right_form(&self) -> Vec<UniPoly> {
        let mut out = vec![UniPoly::zero(); self.coeffs.len()];
        for (i, p) in self.coeffs.iter().enumerate() {
            for l in 0..=i {
                let dp = nth_derivative(p, l);
                if dp.is_zero() {
                    break;
                }
                let sign = if l % 2 == 0 { 1 } else { -1 };
                let c = &binomial(i, l) * &Scalar::from_int(sign);
                out[i - l] = out[i - l].add(&dp.scale(&c));
            }
        }
        out
    }

    /// `Σ_i ∂^i r_i(t)` in normal form.
    pub fn from_right_form(r: &[UniPoly]) -> DiffOperator {
        r.iter().enumerate().fold(DiffOperator::zero(), |acc, (i, ri)| {
            acc.add(&DiffOperator::dt_pow(i).weyl_mul(&DiffOperator::from_poly(ri.clone())))
        })
    }

    /// Primitive integer content with positive leading coefficient (rational
    /// coefficients), or leading coefficient one otherwise.
    pub fn normalize(&self) -> DiffOperator {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading().leading();
        if !self.coeffs.iter().all(UniPoly::is_rational) {
            let inv = lc.inv().unwrap();
            return DiffOperator::new(self.coeffs.iter().map(|p| p.scale(&inv)).collect());
        }
        // gather all coefficients into one polynomial to reuse the content helper
        let mut flat = Vec::new();
        for p in &self.coeffs {
            flat.extend(p.coeffs().iter().cloned());
        }
        flat.push(lc.clone());
        let (content, _) = UniPoly::new(flat).primitive_integer();
        let mut factor = Scalar::rational(content).inv().unwrap();
        if (&lc * &factor).is_negative() {
            factor = -factor;
        }
        DiffOperator::new(self.coeffs.iter().map(|p| p.scale(&factor)).collect())
    }

    /// Right pseudo-remainder of `self` by `q`: repeatedly replaces `R` by
    /// `lc(q) R - lc(R) ∂^s q`.
    pub fn right_pseudo_rem(&self, q: &DiffOperator) -> DiffOperator {
        let k = q.order().expect("nonzero divisor");
        let qk = DiffOperator::from_poly(q.leading());
        let mut r = self.clone();
        while let Some(n) = r.order() {
            if n < k {
                break;
            }
            let lead = r.leading();
            let shifted = DiffOperator::dt_pow(n - k).weyl_mul(q).scale_left(&lead);
            r = qk.weyl_mul(&r).sub(&shifted);
        }
        r
    }

    /// Finite singular points: irreducible factors of the leading coefficient.
    pub fn singular_points(&self) -> Vec<UniPoly> {
        let lead = self.leading();
        if lead.degree().unwrap_or(0) == 0 || !lead.is_rational() {
            return Vec::new();
        }
        let mut out: Vec<UniPoly> = factor_rational(&lead)
            .expect("nonzero")
            .factors
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        out.sort_by(cmp_minpoly);
        out
    }

    /// Applies the operator to a module element: returns the polynomial
    /// representing `∂_t^{-k} P ω` where `k` is the order, i.e.
    /// `Σ_i (∂_t^{-1})^(k-i) (r_i(f) ω)` for the right form `Σ ∂^i r_i`.
    pub fn apply_inverse_shifted(&self, f: &MultiPoly, omega: &MultiPoly) -> MultiPoly {
        let Some(k) = self.order() else {
            return MultiPoly::zero_in(f.vars_arc().clone());
        };
        let mut total = MultiPoly::zero_in(f.vars_arc().clone());
        for (i, r) in self.to_right_form().iter().enumerate() {
            let mut g = &eval_at(r, f) * omega;
            for _ in 0..k - i {
                g = inverse_dt_poly(f, &g, Antiderivative::AlongX);
            }
            total = &total + &g;
        }
        total
    }
}

/// `p(f)` by Horner's rule.
pub fn eval_at(p: &UniPoly, f: &MultiPoly) -> MultiPoly {
    let vars = f.vars_arc().clone();
    p.coeffs().iter().rev().fold(MultiPoly::zero_in(vars.clone()), |acc, c| {
        &(&acc * f) + &MultiPoly::constant_in(vars.clone(), c.clone())
    })
}

/// Two operators are equivalent when each right-divides the other over the
/// rational Weyl algebra.
pub fn operator_equiv(p: &DiffOperator, q: &DiffOperator) -> bool {
    !p.is_zero() && !q.is_zero() && p.right_pseudo_rem(q).is_zero() && q.right_pseudo_rem(p).is_zero()
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, p) in self.coeffs.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            let dt = match i {
                0 => String::new(),
                1 => "Dt".to_string(),
                _ => format!("Dt^{i}"),
            };
            let nterms = p.coeffs().iter().filter(|c| !c.is_zero()).count();
            let (negative, body) = if nterms == 1 && p.degree() == Some(0) {
                let c = p.coeff(0);
                let neg = c.is_negative();
                let a = if neg { -&c } else { c };
                if dt.is_empty() {
                    (neg, a.to_string())
                } else if a.is_one() {
                    (neg, dt.clone())
                } else {
                    (neg, format!("{a}*{dt}"))
                }
            } else if nterms == 1 {
                let text = p.display_in("t");
                let neg = text.starts_with('-');
                let text = text.trim_start_matches('-').to_string();
                if dt.is_empty() {
                    (neg, text)
                } else {
                    (neg, format!("{text}*{dt}"))
                }
            } else if dt.is_empty() {
                (false, format!("({})", p.display_in("t")))
            } else {
                (false, format!("({})*{dt}", p.display_in("t")))
            };
            match (out.is_empty(), negative) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        write!(f, "{out}")
    }
}

/// Where an indicial polynomial is taken.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    /// A root of the given irreducible polynomial.
    Finite(UniPoly),
    Infinity,
}

/// Indicial polynomial in the exponent variable `s` of the local parameter
/// (`t - c`, or `1/t` at infinity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicialData {
    pub location: Location,
    pub polynomial: UniPoly,
    /// Indicial degree equals the operator order.
    pub regular: bool,
    pub rational_roots: Vec<(BigRational, usize)>,
    pub other_factors: Vec<(UniPoly, usize)>,
}

pub fn indicial(p: &DiffOperator, location: &Location) -> Result<IndicialData, PfError> {
    let k = p.order().ok_or(PfError::ZeroOperator)?;
    let polynomial = match location {
        Location::Finite(minpoly) => {
            let c = representative_root(minpoly)?;
            let shifted: Vec<(usize, UniPoly)> = p
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(|(i, q)| (i, q.shift(&c)))
                .collect();
            let weight = |i: usize, q: &UniPoly| q.valuation().unwrap() as i64 - i as i64;
            let low = shifted.iter().map(|(i, q)| weight(*i, q)).min().unwrap();
            shifted
                .iter()
                .filter(|(i, q)| weight(*i, q) == low)
                .fold(UniPoly::zero(), |acc, (i, q)| {
                    acc.add(&falling(*i, 1).scale(&q.coeff(q.valuation().unwrap())))
                })
        }
        Location::Infinity => {
            let terms: Vec<(usize, &UniPoly)> =
                p.coeffs().iter().enumerate().filter(|(_, q)| !q.is_zero()).collect();
            let weight = |i: usize, q: &UniPoly| q.degree().unwrap() as i64 - i as i64;
            let high = terms.iter().map(|(i, q)| weight(*i, q)).max().unwrap();
            terms
                .iter()
                .filter(|(i, q)| weight(*i, q) == high)
                .fold(UniPoly::zero(), |acc, (i, q)| acc.add(&falling(*i, -1).scale(&q.leading())))
        }
    };
    let regular = polynomial.degree() == Some(k);
    let mut rational_roots = Vec::new();
    let mut other_factors = Vec::new();
    if polynomial.is_rational() && polynomial.degree().unwrap_or(0) > 0 {
        for (factor, mult) in factor_rational(&polynomial).expect("nonzero").factors {
            match rational_root(&factor) {
                Some(r) => rational_roots.push((r, mult)),
                None => other_factors.push((factor, mult)),
            }
        }
    }
    rational_roots.sort();
    Ok(IndicialData {
        location: location.clone(),
        polynomial,
        regular,
        rational_roots,
        other_factors,
    })
}

/// Search bounds for [`annihilator`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_order: usize,
    pub max_coeff_degree: usize,
    /// Relation generators reach `cap_slack` degrees above the vectors.
    pub cap_slack: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_order: 3,
            max_coeff_degree: 4,
            cap_slack: 10,
        }
    }
}

/// An annihilator together with the relation it came from:
/// `Σ_j (∂_t^{-1})^j (q_j(f) ω) ∈ span{J(f, g)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annihilator {
    pub operator: DiffOperator,
    pub relation: Vec<UniPoly>,
    pub search_order: usize,
    pub coeff_degree: usize,
}

/// Smallest-order operator annihilating `[ω dx∧dy]`: for `k = 1..` and
/// coefficient degree `0..`, looks for `q_j` with `Σ_j ∂^{-j} q_j(t) ω = 0`
/// in `G^(0)` and returns `P = Σ_j ∂^(k-j) q_j(t)` normalized.
pub fn annihilator(f: &MultiPoly, omega: &MultiPoly, bounds: SearchBounds) -> Result<Annihilator, PfError> {
    if f.nvars() != 2 {
        return Err(PolyError::NotBivariate(f.nvars()).into());
    }
    let delta = f.total_degree().finite().unwrap_or(0) as usize;
    for k in 1..=bounds.max_order {
        for dc in 0..=bounds.max_coeff_degree {
            if let Some(relation) = find_relation(f, omega, k, dc, delta, bounds.cap_slack) {
                let operator = relation
                    .iter()
                    .enumerate()
                    .fold(DiffOperator::zero(), |acc, (j, q)| {
                        acc.add(&DiffOperator::dt_pow(k - j).weyl_mul(&DiffOperator::from_poly(q.clone())))
                    })
                    .normalize();
                return Ok(Annihilator {
                    operator,
                    relation,
                    search_order: k,
                    coeff_degree: dc,
                });
            }
        }
    }
    Err(PfError::NotFound {
        max_order: bounds.max_order,
        max_coeff_degree: bounds.max_coeff_degree,
    })
}

fn find_relation(f: &MultiPoly, omega: &MultiPoly, k: usize, dc: usize, delta: usize, slack: usize) -> Option<Vec<UniPoly>> {
    // vectors (∂^{-1})^j (f^i ω), tag j*(dc+1)+i
    let ntags = (k + 1) * (dc + 1);
    let mut vectors = Vec::with_capacity(ntags);
    let mut power = omega.clone();
    let mut powers = Vec::with_capacity(dc + 1);
    for _ in 0..=dc {
        powers.push(power.clone());
        power = &power * f;
    }
    let mut current = powers;
    for _ in 0..=k {
        vectors.push(current.clone());
        current = current
            .iter()
            .map(|g| inverse_dt_poly(f, g, Antiderivative::AlongX))
            .collect();
    }
    let top = vectors
        .iter()
        .flatten()
        .filter_map(|v| v.total_degree().finite())
        .max()
        .unwrap_or(0) as usize;
    let mut ech = SparseEchelon::new();
    let gen_max = (top + slack + 2).saturating_sub(delta);
    for deg in 0..=gen_max as u32 {
        for b in 0..=deg {
            let m = MultiPoly::from_terms(f.vars_arc().clone(), [(Monomial(vec![deg - b, b]), Scalar::one())]);
            let row = to_sparse(&jacobian2(f, &m).expect("bivariate"));
            ech.insert(row.into_iter().map(|(i, c)| (i + ntags, c)).collect());
        }
    }
    for (j, row) in vectors.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            let mut sv: Vec<(usize, Scalar)> = vec![(j * (dc + 1) + i, Scalar::one())];
            sv.extend(to_sparse(v).into_iter().map(|(idx, c)| (idx + ntags, c)));
            ech.insert(sv);
        }
    }
    // the row with the smallest pivot is the canonical solution
    let solution = ech.rows_below(ntags).next()?.clone();
    let mut relation = vec![vec![Scalar::zero(); dc + 1]; k + 1];
    for (tag, c) in solution {
        relation[tag / (dc + 1)][tag % (dc + 1)] = c;
    }
    Some(relation.into_iter().map(UniPoly::new).collect())
}

/// Exact annihilation check: `∂_t^{-k} P ω` lies in the relation span.
pub fn verify_annihilation(truncation: &BrieskornTruncation, omega: &MultiPoly, p: &DiffOperator) -> bool {
    truncation.in_relations(&p.apply_inverse_shifted(truncation.f(), omega))
}

/// True when no operator of lower order exists within the same coefficient
/// degree bound.
pub fn minimality_probe(f: &MultiPoly, omega: &MultiPoly, found: &Annihilator, bounds: SearchBounds) -> bool {
    if found.search_order <= 1 {
        return true;
    }
    let lower = SearchBounds {
        max_order: found.search_order - 1,
        ..bounds
    };
    matches!(annihilator(f, omega, lower), Err(PfError::NotFound { .. }))
}
