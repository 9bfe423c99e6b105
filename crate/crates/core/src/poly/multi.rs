//! Sparse multivariate polynomials over [`Scalar`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::scalar::{NumberField, Scalar};
use super::uni::push_term;
use super::PolyError;

/// Exponent vector, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Graded lexicographic comparison, used for display.
    pub fn cmp_grlex(&self, other: &Monomial) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }

    pub fn display_with(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        parts.join("*")
    }
}

/// Total degree, with a distinguished value for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

/// Sparse polynomial in named variables. Terms are kept in a sorted map with
/// no zero coefficients, so iteration order is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> MultiPoly {
        MultiPoly::zero_in(Arc::new(vars.iter().map(|s| s.to_string()).collect()))
    }

    pub fn zero_in(vars: Arc<Vec<String>>) -> MultiPoly {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_in(vars: Arc<Vec<String>>, c: Scalar) -> MultiPoly {
        let n = vars.len();
        MultiPoly::from_terms(vars, [(Monomial::one(n), c)])
    }

    /// The variable `name`, if it belongs to `vars`.
    pub fn var_in(vars: Arc<Vec<String>>, name: &str) -> Option<MultiPoly> {
        let idx = vars.iter().position(|v| v == name)?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Some(MultiPoly::from_terms(vars, [(Monomial(e), Scalar::one())]))
    }

    /// Builds a polynomial, summing repeated monomials and dropping zeros.
    pub fn from_terms(
        vars: Arc<Vec<String>>,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> MultiPoly {
        let mut map: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), vars.len());
            let entry = map.entry(m).or_insert_with(Scalar::zero);
            *entry = &*entry + &c;
        }
        map.retain(|_, c| !c.is_zero());
        MultiPoly { vars, terms: map }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn vars_arc(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::degree)
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    /// The number field of the coefficients, or `None` when all are rational.
    pub fn field(&self) -> Option<Arc<NumberField>> {
        self.terms.values().find_map(|c| c.field().cloned())
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(Scalar::is_rational)
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.vars != other.vars {
            return Err(PolyError::VariableMismatch {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            });
        }
        if let (Some(a), Some(b)) = (self.field(), other.field()) {
            if a != b {
                return Err(PolyError::DomainMismatch);
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compatible(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compatible(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Scalar::zero);
            *entry = if negate { &*entry - c } else { &*entry + c };
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms,
        }
    }

    fn mul_unchecked(&self, other: &MultiPoly) -> MultiPoly {
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let entry = terms.entry(ma.mul(mb)).or_insert_with(Scalar::zero);
                *entry = &*entry + &(ca * cb);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms,
        }
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero_in(Arc::clone(&self.vars));
        }
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant_in(Arc::clone(&self.vars), Scalar::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    fn var_index(&self, var: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))
    }

    /// Formal partial derivative.
    pub fn partial(&self, var: &str) -> Result<MultiPoly, PolyError> {
        let i = self.var_index(var)?;
        Ok(self.partial_index(i))
    }

    pub fn partial_index(&self, i: usize) -> MultiPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[i];
            e[i] -= 1;
            (Monomial(e), c * &Scalar::from_int(k as i64))
        });
        MultiPoly::from_terms(Arc::clone(&self.vars), terms)
    }

    /// Formal antiderivative in one variable with zero integration constant.
    pub fn integrate_index(&self, i: usize) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.0.clone();
            e[i] += 1;
            let k = Scalar::from_int(e[i] as i64);
            (Monomial(e), c / &k)
        });
        MultiPoly::from_terms(Arc::clone(&self.vars), terms)
    }

    /// Substitutes the assigned variables and keeps the rest symbolic.
    pub fn eval_partial(&self, assignment: &[(&str, Scalar)]) -> Result<MultiPoly, PolyError> {
        let mut slots: Vec<Option<&Scalar>> = vec![None; self.nvars()];
        for (name, value) in assignment {
            let i = self.var_index(name)?;
            slots[i] = Some(value);
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut coeff = c.clone();
            let mut e = m.0.clone();
            for (i, slot) in slots.iter().enumerate() {
                if let Some(v) = slot {
                    coeff = &coeff * &v.pow(e[i]);
                    e[i] = 0;
                }
            }
            (Monomial(e), coeff)
        });
        Ok(MultiPoly::from_terms(Arc::clone(&self.vars), terms))
    }

    /// Value at a full assignment given in variable order.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in point.iter().zip(&m.0) {
                if *e > 0 {
                    t = &t * &x.pow(*e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// The constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars()))
    }

    /// Terms sorted by descending graded-lex order (display order).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.cmp_grlex(a.0));
        v
    }
}

/// `f_x g_y - f_y g_x` for polynomials in exactly two variables.
pub fn jacobian2(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
    f.check_compatible(g)?;
    if f.nvars() != 2 {
        return Err(PolyError::NotBivariate(f.nvars()));
    }
    let fx = f.partial_index(0);
    let fy = f.partial_index(1);
    let gx = g.partial_index(0);
    let gy = g.partial_index(1);
    Ok(fx.mul_unchecked(&gy).add_unchecked(&fy.mul_unchecked(&gx), true))
}

macro_rules! checked_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> std::ops::$tr<&'a MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            /// # Panics
            /// Panics on mismatched variables or coefficient fields; use the
            /// `try_` method to get an error instead.
            fn $m(self, rhs: &'a MultiPoly) -> MultiPoly {
                self.$checked(rhs).expect("incompatible polynomials")
            }
        }
    };
}
checked_op!(Add, add, try_add);
checked_op!(Sub, sub, try_sub);
checked_op!(Mul, mul, try_mul);

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (m, c) in self.sorted_terms() {
            push_term(&mut out, c, &m.display_with(&self.vars));
        }
        f.write_str(&out)
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
    fn ring_examples() {
        assert_eq!(&p("x + y") + &p("x - y"), p("2*x"));
        assert!((&p("0") * &p("y^2 + x^3")).is_zero());
        assert_eq!(p("x + 1").pow(2), p("x^2 + 2*x + 1"));
    }

    #[test]
    fn partials() {
        let f = p("y^2 + x^3 - 3*x");
        assert_eq!(f.partial("x").unwrap(), p("3*x^2 - 3"));
        assert_eq!(f.partial("y").unwrap(), p("2*y"));
        assert!(p("7/2").partial("x").unwrap().is_zero());
        assert!(matches!(f.partial("z"), Err(PolyError::UnknownVariable(_))));
    }

    #[test]
    fn jacobian_examples() {
        let f = p("y^2 + x^3 - 3*x");
        assert!(jacobian2(&f, &f).unwrap().is_zero());
        assert_eq!(jacobian2(&f, &p("x")).unwrap(), p("-2*y"));
        assert_eq!(jacobian2(&f, &p("y")).unwrap(), p("3*x^2 - 3"));
        let g = parse_polynomial("x + y + z", &["x", "y", "z"]).unwrap();
        assert!(matches!(jacobian2(&g, &g), Err(PolyError::NotBivariate(3))));
    }

    #[test]
    fn evaluation() {
        let f = p("y^2 + x^3 - 3*x");
        let v = f
            .eval_partial(&[("x", Scalar::one()), ("y", Scalar::zero())])
            .unwrap();
        assert_eq!(v, p("-2"));
        assert_eq!(f.eval_partial(&[]).unwrap(), f);
        let g = p("x^2*y^2 + 2*x*y + x");
        let v = g
            .eval_partial(&[("x", Scalar::zero()), ("y", Scalar::from_frac(-1, 2))])
            .unwrap();
        assert!(v.is_zero());
        let partial = g.eval_partial(&[("y", Scalar::from_int(1))]).unwrap();
        assert_eq!(partial, p("x^2 + 3*x"));
    }

    #[test]
    fn mismatch_errors() {
        let a = p("x");
        let b = parse_polynomial("u", &["u", "v"]).unwrap();
        assert!(matches!(a.try_add(&b), Err(PolyError::VariableMismatch { .. })));
    }

    #[test]
    fn degree_of_zero() {
        assert_eq!(p("0").total_degree(), Degree::MinusInfinity);
        assert_eq!(p("x^4*y^2 + x").total_degree(), Degree::Finite(6));
        assert!(Degree::MinusInfinity < Degree::Finite(0));
    }

    #[test]
    fn display_is_graded() {
        assert_eq!(p("x*y^2 + 2*x^2*y + x^4*y^2").to_string(), "x^4*y^2 + 2*x^2*y + x*y^2");
        assert_eq!(p("-x + 1/2").to_string(), "-x + 1/2");
    }
}
