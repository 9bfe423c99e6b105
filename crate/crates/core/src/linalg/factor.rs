//! Factorization of univariate polynomials over Q: squarefree decomposition,
//! then Zassenhaus (modular factoring, Hensel lifting, recombination).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modpoly::{self as mp, Poly};
use super::LinalgError;
use crate::poly::{Scalar, UniPoly};

/// `poly = unit * prod(factor^multiplicity)` with monic irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFactorization {
    pub unit: BigRational,
    pub factors: Vec<(UniPoly, usize)>,
}

impl RationalFactorization {
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(Scalar::rational(self.unit.clone())), |acc, (f, k)| {
                acc.mul(&f.pow(*k as u32))
            })
    }
}

/// Yun's squarefree decomposition of a monic polynomial: pairs `(a_i, i)` with
/// `p = prod a_i^i`, each `a_i` squarefree, monic, nonconstant.
pub fn squarefree_decomposition(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let c = f.gcd(&df);
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut y = df.exact_div(&c).expect("gcd divides");
    let mut z = y.sub(&w.derivative());
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let g = w.gcd(&z);
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        w = w.exact_div(&g).expect("gcd divides");
        y = z.exact_div(&g).expect("gcd divides");
        z = y.sub(&w.derivative());
        i += 1;
    }
    out
}

/// Complete factorization over Q into monic irreducibles, sorted by degree
/// and then by coefficients.
pub fn factor_rational(p: &UniPoly) -> Result<RationalFactorization, LinalgError> {
    if p.is_zero() {
        return Err(LinalgError::ZeroPolynomial);
    }
    if !p.is_rational() {
        return Err(LinalgError::NonRational);
    }
    let unit = p.leading().as_rational().unwrap().clone();
    let mut factors = Vec::new();
    for (part, k) in squarefree_decomposition(p) {
        let (_, prim) = part.primitive_integer();
        for g in factor_squarefree_integer(&prim) {
            factors.push((UniPoly::from_bigints(&g).monic(), k));
        }
    }
    factors.sort_by(|(a, ka), (b, kb)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| cmp_coeffs(a, b))
            .then(ka.cmp(kb))
    });
    Ok(RationalFactorization { unit, factors })
}

fn cmp_coeffs(a: &UniPoly, b: &UniPoly) -> std::cmp::Ordering {
    let qa = a.to_rationals().unwrap_or_default();
    let qb = b.to_rationals().unwrap_or_default();
    qa.iter().rev().cmp(qb.iter().rev())
}

/// Irreducible factors over Z of a primitive squarefree integer polynomial.
fn factor_squarefree_integer(g: &[BigInt]) -> Vec<Poly> {
    let g = mp::trim(g.to_vec());
    let n = g.len() - 1;
    if n <= 1 {
        return vec![g];
    }
    if g[0].is_zero() {
        let mut rest = factor_squarefree_integer(&g[1..]);
        rest.push(vec![BigInt::zero(), BigInt::one()]);
        return rest;
    }
    let lc = g[n].clone();
    let p = choose_prime(&g, &lc);
    let monic_mod_p = mp::make_monic(&mp::reduce(&g, &p), &p);
    let mut modular = factor_mod_p(&monic_mod_p, &p);
    if modular.len() == 1 {
        return vec![g];
    }
    modular.sort();

    let bound = coefficient_bound(&g);
    let mut modulus = p.clone();
    while modulus <= &bound * 2 {
        modulus *= &p;
    }
    let lifted = hensel_lift(&g, &modular, &p, &modulus);
    recombine(g, lifted, &modulus)
}

/// Small odd prime not dividing `lc` with `g mod p` squarefree; among the
/// first few such primes, the one giving the fewest modular factors.
fn choose_prime(g: &[BigInt], lc: &BigInt) -> BigInt {
    let mut best: Option<(usize, BigInt)> = None;
    let mut tried = 0;
    let mut candidate = 3u64;
    while tried < 5 {
        let p = BigInt::from(candidate);
        candidate += 2;
        if !is_prime(candidate - 2) || (lc % &p).is_zero() {
            continue;
        }
        let gp = mp::reduce(g, &p);
        let d = mp::derivative(&gp, &p);
        if mp::deg(&mp::gcd(&gp, &d, &p)) != Some(0) {
            continue;
        }
        tried += 1;
        let count = factor_mod_p(&mp::make_monic(&gp, &p), &p).len();
        if best.as_ref().is_none_or(|(c, _)| count < *c) {
            best = Some((count, p));
        }
    }
    best.unwrap().1
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Mignotte-style bound on the coefficients of any factor of `g`, scaled by
/// the leading coefficient.
fn coefficient_bound(g: &[BigInt]) -> BigInt {
    let n = g.len() - 1;
    let max = g.iter().map(|c| c.abs()).max().unwrap();
    let sqrt = BigInt::from(((n + 1) as f64).sqrt().ceil().to_u64().unwrap() + 1);
    sqrt * (BigInt::one() << n) * max * g[n].abs()
}

/// Monic irreducible factors of a monic squarefree polynomial over `Z/pZ`.
fn factor_mod_p(f: &[BigInt], p: &BigInt) -> Vec<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        equal_degree(&g, d, p, &mut rng, &mut out);
    }
    out
}

fn distinct_degree(f: &[BigInt], p: &BigInt) -> Vec<(Poly, usize)> {
    let x = vec![BigInt::zero(), BigInt::one()];
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let mut h = x.clone();
    let mut i = 0;
    while mp::deg(&rest).unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = mp::pow_mod(&h, p, &rest, p);
        let g = mp::gcd(&mp::sub(&h, &x, p), &rest, p);
        if mp::deg(&g).unwrap_or(0) > 0 {
            rest = mp::div_rem(&rest, &g, p).0;
            h = mp::rem(&h, &rest, p);
            out.push((g, i));
        }
    }
    if mp::deg(&rest).unwrap_or(0) > 0 {
        let d = mp::deg(&rest).unwrap();
        out.push((rest, d));
    }
    out
}

fn equal_degree(f: &[BigInt], d: usize, p: &BigInt, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = mp::deg(f).unwrap();
    if n == d {
        out.push(f.to_vec());
        return;
    }
    let exponent = (p.pow(d as u32) - 1u32) / 2u32;
    let p_u64 = p.to_u64().unwrap();
    loop {
        let a: Poly = mp::trim((0..n).map(|_| BigInt::from(rng.gen_range(0..p_u64))).collect());
        if mp::deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = mp::sub(&mp::pow_mod(&a, &exponent, f, p), &[BigInt::one()], p);
        let g = mp::gcd(&b, f, p);
        let dg = mp::deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = mp::div_rem(f, &g, p).0;
            equal_degree(&g, d, p, rng, out);
            equal_degree(&h, d, p, rng, out);
            return;
        }
    }
}

/// Lifts `g = lc * prod(factors) mod p` to the same identity modulo
/// `modulus` (a power of `p`). Returns monic lifted factors.
fn hensel_lift(g: &[BigInt], factors: &[Poly], p: &BigInt, modulus: &BigInt) -> Vec<Poly> {
    if factors.len() == 1 {
        let lc_inv = mp::inv_mod(g.last().unwrap(), modulus).unwrap();
        return vec![mp::scale(g, &lc_inv, modulus)];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let lc = g.last().unwrap();
    let a0 = mp::scale(&left.iter().fold(vec![BigInt::one()], |acc, f| mp::mul(&acc, f, p)), lc, p);
    let b0 = right.iter().fold(vec![BigInt::one()], |acc, f| mp::mul(&acc, f, p));
    let (a, b) = lift_pair(g, a0, b0, p, modulus);
    let mut out = hensel_lift(&a, left, p, modulus);
    out.extend(hensel_lift(&b, right, p, modulus));
    out
}

/// Quadratic Hensel lifting of `g = a*b mod p` (with `b` monic) to the given
/// modulus.
fn lift_pair(g: &[BigInt], mut a: Poly, mut b: Poly, p: &BigInt, modulus: &BigInt) -> (Poly, Poly) {
    let (one, mut s, mut t) = mp::ext_gcd(&a, &b, p);
    debug_assert_eq!(one, vec![BigInt::one()]);
    let mut m = p.clone();
    while &m < modulus {
        let m2 = &m * &m;
        let e = mp::sub(&mp::reduce(g, &m2), &mp::mul(&a, &b, &m2), &m2);
        let (q, r) = mp::div_rem(&mp::mul(&s, &e, &m2), &b, &m2);
        let a_new = mp::add(&mp::add(&a, &mp::mul(&t, &e, &m2), &m2), &mp::mul(&q, &a, &m2), &m2);
        let b_new = mp::add(&b, &r, &m2);
        let beta = mp::sub(
            &mp::add(&mp::mul(&s, &a_new, &m2), &mp::mul(&t, &b_new, &m2), &m2),
            &[BigInt::one()],
            &m2,
        );
        let (c, d) = mp::div_rem(&mp::mul(&s, &beta, &m2), &b_new, &m2);
        s = mp::sub(&s, &d, &m2);
        t = mp::sub(&mp::sub(&t, &mp::mul(&t, &beta, &m2), &m2), &mp::mul(&c, &a_new, &m2), &m2);
        a = a_new;
        b = b_new;
        m = m2;
    }
    (mp::reduce(&a, modulus), mp::reduce(&b, modulus))
}

/// Zassenhaus recombination: tries products of subsets of lifted factors in
/// increasing size and keeps those that divide over Z.
fn recombine(mut g: Poly, mut lifted: Vec<Poly>, modulus: &BigInt) -> Vec<Poly> {
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut progressed = false;
        for subset in subsets(lifted.len(), size) {
            let lc = g.last().unwrap().clone();
            let product = subset
                .iter()
                .fold(vec![lc], |acc, &i| mp::mul(&acc, &lifted[i], modulus));
            let candidate = primitive(&mp::symmetric(&product, modulus));
            if let Some(q) = exact_integer_div(&g, &candidate) {
                found.push(candidate);
                g = q;
                let mut k = 0;
                lifted.retain(|_| {
                    k += 1;
                    !subset.contains(&(k - 1))
                });
                progressed = true;
                break;
            }
        }
        if !progressed {
            size += 1;
        }
    }
    if g.len() > 1 {
        let sign = if g.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        found.push(g.iter().map(|c| c * &sign).collect());
    }
    found
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn primitive(p: &[BigInt]) -> Poly {
    let mut c = p.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if p.last().is_some_and(|l| l.is_negative()) {
        c = -c;
    }
    p.iter().map(|x| x / &c).collect()
}

/// Quotient `a / b` over Z, if it exists.
fn exact_integer_div(a: &[BigInt], b: &[BigInt]) -> Option<Poly> {
    if b.len() > a.len() {
        return None;
    }
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let (quot, rem) = r[k + db].div_rem(&b[db]);
        if !rem.is_zero() {
            return None;
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &quot * bc;
        }
        q[k] = quot;
    }
    r.iter().all(Zero::is_zero).then(|| mp::trim(q))
}
