//! Dense polynomials over `Z/mZ`, coefficients in `[0, m)`, low degree first.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

pub(crate) type Poly = Vec<BigInt>;

pub(crate) fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub(crate) fn reduce(p: &[BigInt], m: &BigInt) -> Poly {
    trim(p.iter().map(|c| c.mod_floor(m)).collect())
}

/// Symmetric representative in `(-m/2, m/2]`.
pub(crate) fn symmetric(p: &[BigInt], m: &BigInt) -> Poly {
    let half = m / 2;
    trim(
        p.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

pub(crate) fn deg(p: &[BigInt]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

pub(crate) fn scale(a: &[BigInt], c: &BigInt, m: &BigInt) -> Poly {
    trim(a.iter().map(|x| (x * c).mod_floor(m)).collect())
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    reduce(&out, m)
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Division by a polynomial whose leading coefficient is a unit mod `m`.
///
/// # Panics
/// Panics if `b` is zero or its leading coefficient is not invertible.
pub(crate) fn div_rem(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Poly, Poly) {
    let db = deg(b).expect("division by zero polynomial");
    let lc_inv = inv_mod(&b[db], m).expect("leading coefficient must be a unit");
    let mut r = reduce(a, m);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = (r.last().unwrap() * &lc_inv).mod_floor(m);
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = (&r[k + i] - &c * bc).mod_floor(m);
        }
        q[k] = c;
        r = trim(r);
    }
    (trim(q), r)
}

pub(crate) fn rem(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    div_rem(a, b, m).1
}

pub(crate) fn make_monic(a: &[BigInt], m: &BigInt) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(lc) => scale(a, &inv_mod(lc, m).expect("unit leading coefficient"), m),
    }
}

/// Monic gcd over the prime field `Z/pZ`.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Poly {
    let mut a = reduce(a, p);
    let mut b = reduce(b, p);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(&a, p)
}

/// Returns `(g, s, t)` with `s*a + t*b = g` monic, over `Z/pZ`.
pub(crate) fn ext_gcd(a: &[BigInt], b: &[BigInt], p: &BigInt) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (reduce(a, p), reduce(b, p));
    let (mut s0, mut s1) = (vec![BigInt::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![BigInt::one()]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let lc_inv = inv_mod(r0.last().expect("not both zero"), p).unwrap();
    (scale(&r0, &lc_inv, p), scale(&s0, &lc_inv, p), scale(&t0, &lc_inv, p))
}

pub(crate) fn derivative(a: &[BigInt], m: &BigInt) -> Poly {
    reduce(
        &a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect::<Vec<_>>(),
        m,
    )
}

/// `base^e mod (modulus, m)`.
pub(crate) fn pow_mod(base: &[BigInt], e: &BigInt, modulus: &[BigInt], m: &BigInt) -> Poly {
    let mut result = vec![BigInt::one()];
    let mut b = rem(base, modulus, m);
    let (_, digits) = e.to_radix_le(2);
    if e.sign() == Sign::NoSign {
        return rem(&result, modulus, m);
    }
    for (k, bit) in digits.iter().enumerate() {
        if *bit == 1 {
            result = rem(&mul(&result, &b, m), modulus, m);
        }
        if k + 1 < digits.len() {
            b = rem(&mul(&b, &b, m), modulus, m);
        }
    }
    rem(&result, modulus, m)
}
