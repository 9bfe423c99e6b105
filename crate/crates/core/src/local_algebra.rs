//! Gröbner bases in graded reverse lexicographic order, the Milnor algebra
//! `Q[x,y]/(f_x, f_y)` and the critical values of `f` with their Milnor
//! number totals.

use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::linalg::{charpoly, factor_rational, Matrix};
use crate::poly::{Monomial, MultiPoly, NumberField, PolyError, Scalar, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("the critical locus is not zero-dimensional (non-isolated singularities)")]
    NonIsolatedSingularities,
    #[error("an ideal needs at least one generator")]
    NoGenerators,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Graded reverse lexicographic comparison.
pub fn cmp_grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for (x, y) in a.0.iter().zip(&b.0).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

fn leading_term(p: &MultiPoly) -> Option<(&Monomial, &Scalar)> {
    p.terms().max_by(|(a, _), (b, _)| cmp_grevlex(a, b))
}

fn monic(p: &MultiPoly) -> MultiPoly {
    match leading_term(p) {
        Some((_, c)) => p.scale(&c.inv().expect("nonzero")),
        None => p.clone(),
    }
}

/// Reduced Gröbner basis (monic, auto-reduced), sorted by ascending leading
/// monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    vars: Arc<Vec<String>>,
    polys: Vec<MultiPoly>,
}

impl GroebnerBasis {
    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys
            .iter()
            .map(|p| leading_term(p).unwrap().0.clone())
            .collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    /// Fully reduced remainder of `p` modulo the basis.
    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        reduce(p, &self.polys)
    }

    pub fn contains(&self, p: &MultiPoly) -> bool {
        self.normal_form(p).is_zero()
    }
}

fn reduce(p: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let leads: Vec<(Monomial, Scalar)> = basis
        .iter()
        .map(|g| {
            let (m, c) = leading_term(g).unwrap();
            (m.clone(), c.clone())
        })
        .collect();
    let mut rest = p.clone();
    let mut remainder = MultiPoly::zero_in(p.vars_arc().clone());
    while let Some((m, c)) = leading_term(&rest).map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let q = m.quotient(&leads[k].0);
                let factor = &c / &leads[k].1;
                rest = &rest - &basis[k].mul_monomial(&q).scale(&factor);
            }
            None => {
                let term = MultiPoly::from_terms(p.vars_arc().clone(), [(m.clone(), c.clone())]);
                remainder = &remainder + &term;
                rest = &rest - &term;
            }
        }
    }
    remainder
}

fn s_polynomial(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let (ma, ca) = leading_term(a).unwrap();
    let (mb, cb) = leading_term(b).unwrap();
    let l = ma.lcm(mb);
    let left = a.mul_monomial(&l.quotient(ma)).scale(&ca.inv().unwrap());
    let right = b.mul_monomial(&l.quotient(mb)).scale(&cb.inv().unwrap());
    &left - &right
}

/// Buchberger's algorithm with the coprime-leading-monomial criterion and the
/// normal selection strategy.
pub fn buchberger(generators: &[MultiPoly]) -> Result<GroebnerBasis, AlgebraError> {
    let Some(first) = generators.first() else {
        return Err(AlgebraError::NoGenerators);
    };
    let vars = first.vars_arc().clone();
    for g in generators {
        if g.vars() != first.vars() {
            return Err(PolyError::VariableMismatch {
                left: first.vars().to_vec(),
                right: g.vars().to_vec(),
            }
            .into());
        }
    }
    let mut basis: Vec<MultiPoly> = generators.iter().filter(|g| !g.is_zero()).map(monic).collect();
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    while !pairs.is_empty() {
        let lcm_of = |&(i, j): &(usize, usize)| {
            leading_term(&basis[i]).unwrap().0.lcm(leading_term(&basis[j]).unwrap().0)
        };
        let k = (0..pairs.len())
            .min_by(|&a, &b| cmp_grevlex(&lcm_of(&pairs[a]), &lcm_of(&pairs[b])).then(a.cmp(&b)))
            .unwrap();
        let (i, j) = pairs.swap_remove(k);
        let mi = leading_term(&basis[i]).unwrap().0;
        let mj = leading_term(&basis[j]).unwrap().0;
        if mi.lcm(mj) == mi.mul(mj) {
            continue;
        }
        let r = reduce(&s_polynomial(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            let n = basis.len();
            basis.push(monic(&r));
            pairs.extend((0..n).map(|i| (i, n)));
        }
    }
    // minimize, then auto-reduce
    let leads: Vec<Monomial> = basis.iter().map(|p| leading_term(p).unwrap().0.clone()).collect();
    let mut keep = Vec::new();
    for (i, m) in leads.iter().enumerate() {
        let redundant = leads
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && other.divides(m) && (other != m || j < i));
        if !redundant {
            keep.push(basis[i].clone());
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let (lm, _) = leading_term(&keep[i]).unwrap();
        let lead = MultiPoly::from_terms(vars.clone(), [(lm.clone(), Scalar::one())]);
        let others: Vec<MultiPoly> = keep
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let tail = &keep[i] - &lead;
        reduced.push(&lead + &reduce(&tail, &others));
    }
    reduced.sort_by(|a, b| cmp_grevlex(leading_term(a).unwrap().0, leading_term(b).unwrap().0));
    Ok(GroebnerBasis { vars, polys: reduced })
}

/// Standard monomial basis of `Q[x,y]/J_f` with the matrix of multiplication
/// by `f` (column `j` holds the coordinates of `f * basis[j]`).
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    pub basis: Vec<Monomial>,
    pub mult_f: Matrix,
    pub groebner: GroebnerBasis,
}

impl QuotientAlgebra {
    /// Global Milnor number.
    pub fn mu(&self) -> usize {
        self.basis.len()
    }
}

/// Milnor algebra of `f`. Fails with `NonIsolatedSingularities` when some
/// variable has no pure power among the leading monomials.
pub fn milnor_algebra(f: &MultiPoly) -> Result<QuotientAlgebra, AlgebraError> {
    let n = f.nvars();
    let partials: Vec<MultiPoly> = (0..n).map(|i| f.partial_index(i)).collect();
    let gb = if partials.iter().all(MultiPoly::is_zero) {
        return Err(AlgebraError::NonIsolatedSingularities);
    } else {
        buchberger(&partials)?
    };
    let leads = gb.leading_monomials();
    let mut bounds = Vec::with_capacity(n);
    for v in 0..n {
        let pure = leads
            .iter()
            .filter(|m| m.0.iter().enumerate().all(|(i, &e)| i == v || e == 0))
            .map(|m| m.0[v])
            .min();
        match pure {
            Some(b) => bounds.push(b),
            None => return Err(AlgebraError::NonIsolatedSingularities),
        }
    }
    let mut basis = Vec::new();
    let mut exps = vec![0u32; n];
    loop {
        let m = Monomial(exps.clone());
        if !leads.iter().any(|l| l.divides(&m)) {
            basis.push(m);
        }
        // odometer over the box of exponents below the pure-power bounds
        let mut k = 0;
        loop {
            if k == n {
                basis.sort_by(cmp_grevlex);
                return Ok(finish(f, basis, gb));
            }
            exps[k] += 1;
            if exps[k] < bounds[k] {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

fn finish(f: &MultiPoly, basis: Vec<Monomial>, gb: GroebnerBasis) -> QuotientAlgebra {
    let mu = basis.len();
    let mut mult_f = Matrix::zeros(mu, mu);
    for (j, b) in basis.iter().enumerate() {
        let nf = gb.normal_form(&f.mul_monomial(b));
        for (m, c) in nf.terms() {
            let i = basis.iter().position(|x| x == m).expect("normal form uses standard monomials");
            mult_f.set(i, j, c.clone());
        }
    }
    QuotientAlgebra {
        basis,
        mult_f,
        groebner: gb,
    }
}

/// A Galois orbit of critical values: the minimal polynomial over Q and the
/// Milnor number total `mu_c` at each of its roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalValue {
    pub minpoly: UniPoly,
    pub mu_c: usize,
}

/// Critical values with multiplicities and the global Milnor number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalSpectrum {
    pub mu: usize,
    pub charpoly: UniPoly,
    pub values: Vec<CriticalValue>,
}

pub fn critical_spectrum(qa: &QuotientAlgebra) -> CriticalSpectrum {
    let cp = charpoly(&qa.mult_f).expect("square matrix");
    let mut values: Vec<CriticalValue> = if qa.mu() == 0 {
        Vec::new()
    } else {
        factor_rational(&cp)
            .expect("nonzero rational charpoly")
            .factors
            .into_iter()
            .map(|(minpoly, mu_c)| CriticalValue { minpoly, mu_c })
            .collect()
    };
    values.sort_by(|a, b| cmp_minpoly(&a.minpoly, &b.minpoly));
    CriticalSpectrum {
        mu: qa.mu(),
        charpoly: cp,
        values,
    }
}

/// Canonical order on irreducible monic polynomials: rational roots first in
/// ascending order, then higher degrees by coefficients.
pub fn cmp_minpoly(a: &UniPoly, b: &UniPoly) -> Ordering {
    match (rational_root(a), rational_root(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.degree().cmp(&b.degree()).then_with(|| {
            let qa = a.to_rationals().unwrap_or_default();
            let qb = b.to_rationals().unwrap_or_default();
            qa.iter().rev().cmp(qb.iter().rev())
        }),
    }
}

/// Root of a monic linear polynomial.
pub fn rational_root(p: &UniPoly) -> Option<BigRational> {
    (p.degree() == Some(1))
        .then(|| (&(-&p.coeff(0)) / &p.leading()).as_rational().cloned())
        .flatten()
}

/// An exact representative root of an irreducible polynomial: the rational
/// root, or the generator of `Q[a]/(p)`.
pub fn representative_root(p: &UniPoly) -> Result<Scalar, PolyError> {
    match rational_root(p) {
        Some(q) => Ok(Scalar::rational(q)),
        None => Ok(NumberField::new(p)?.generator()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> MultiPoly {
        parse_polynomial(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn buchberger_examples() {
        let gb = buchberger(&[p("x"), p("y")]).unwrap();
        assert_eq!(gb.polys(), &[p("y"), p("x")]);
        let gb = buchberger(&[p("3x^2 - 3"), p("2y")]).unwrap();
        assert_eq!(gb.polys(), &[p("y"), p("x^2 - 1")]);
        let gb = buchberger(&[p("1")]).unwrap();
        assert!(gb.is_unit_ideal());
    }

    #[test]
    fn s_pairs_are_reduced() {
        let gb = buchberger(&[p("x^2*y - 1"), p("x*y^2 - x")]).unwrap();
        for a in gb.polys() {
            for b in gb.polys() {
                assert!(gb.contains(&s_polynomial(a, b)));
            }
        }
        assert!(gb.contains(&p("x^2*y - 1")));
    }

    #[test]
    fn milnor_examples() {
        let qa = milnor_algebra(&p("y^2 + x^3 - 3x")).unwrap();
        assert_eq!(qa.basis, vec![Monomial(vec![0, 0]), Monomial(vec![1, 0])]);
        assert_eq!(charpoly(&qa.mult_f).unwrap(), UniPoly::from_ints(&[-4, 0, 1]));
        assert_eq!(milnor_algebra(&p("x^4*y^2 + 2x^2*y + x*y^2")).unwrap().mu(), 4);
        assert_eq!(milnor_algebra(&p("x")).unwrap().mu(), 0);
        assert_eq!(milnor_algebra(&p("x^2")).unwrap_err(), AlgebraError::NonIsolatedSingularities);
        assert_eq!(milnor_algebra(&p("1")).unwrap_err(), AlgebraError::NonIsolatedSingularities);
    }

    #[test]
    fn spectrum_examples() {
        let spec = critical_spectrum(&milnor_algebra(&p("y^2 + x^3 - 3x")).unwrap());
        let roots: Vec<_> = spec.values.iter().map(|v| (rational_root(&v.minpoly).unwrap(), v.mu_c)).collect();
        assert_eq!(roots, vec![(BigRational::from_integer((-2).into()), 1), (BigRational::from_integer(2.into()), 1)]);
        let spec = critical_spectrum(&milnor_algebra(&p("x^2*y^2 + 2x*y + x")).unwrap());
        assert_eq!(spec.mu, 1);
        assert_eq!(spec.values, vec![CriticalValue { minpoly: UniPoly::from_ints(&[0, 1]), mu_c: 1 }]);
        let spec = critical_spectrum(&milnor_algebra(&p("x^2 + y^2")).unwrap());
        assert_eq!(spec.values, vec![CriticalValue { minpoly: UniPoly::from_ints(&[0, 1]), mu_c: 1 }]);
        let spec = critical_spectrum(&milnor_algebra(&p("x^4*y^2 + 2x^2*y + x*y^2")).unwrap());
        assert_eq!(spec.values, vec![CriticalValue { minpoly: UniPoly::from_ints(&[0, 1]), mu_c: 4 }]);
    }

    #[test]
    fn irrational_critical_values() {
        // critical values of x^3 - 6x + y^2 are +-4*sqrt(2)
        let spec = critical_spectrum(&milnor_algebra(&p("x^3 - 6x + y^2")).unwrap());
        assert_eq!(spec.values.len(), 1);
        assert_eq!(spec.values[0].minpoly, UniPoly::from_ints(&[-32, 0, 1]));
        let root = representative_root(&spec.values[0].minpoly).unwrap();
        assert_eq!(root.charpoly_over_q(), UniPoly::from_ints(&[-32, 0, 1]));
    }
}
