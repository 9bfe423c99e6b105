//! Test-side oracles and generators, independent of the Gröbner and
//! truncation paths they check.
#![allow(dead_code)]

use std::sync::Arc;

use brieskorn::linalg::factor_rational;
use brieskorn::local_algebra::{critical_spectrum, milnor_algebra, CriticalSpectrum};
use brieskorn::poly::{Monomial, MultiPoly, NumberField, Scalar, UniPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn vars() -> Arc<Vec<String>> {
    Arc::new(vec!["x".to_string(), "y".to_string()])
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Random polynomial with small integer coefficients, total degree
/// `<= max_degree`, and up to `terms` terms.
pub fn random_poly(rng: &mut ChaCha8Rng, max_degree: u32, terms: usize) -> MultiPoly {
    let mut out = Vec::new();
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_degree);
        let a = rng.gen_range(0..=d);
        let c = rng.gen_range(-3i64..=3);
        out.push((Monomial(vec![a, d - a]), Scalar::from_int(c)));
    }
    MultiPoly::from_terms(vars(), out)
}

/// Random polynomial of exact degree `degree` with isolated critical points
/// and `mu >= 1`.
pub fn random_isolated(rng: &mut ChaCha8Rng, degree: u32) -> (MultiPoly, CriticalSpectrum) {
    loop {
        let mut f = random_poly(rng, degree, 5);
        let a = rng.gen_range(0..=degree);
        let lead = MultiPoly::from_terms(vars(), [(Monomial(vec![a, degree - a]), Scalar::from_int(rng.gen_range(1..=3)))]);
        f = &f + &lead;
        if f.total_degree().finite() != Some(degree) {
            continue;
        }
        if let Ok(qa) = milnor_algebra(&f) {
            if qa.mu() > 0 {
                return (f, critical_spectrum(&qa));
            }
        }
    }
}

// ---- dense rational linear algebra, written independently of the crate ----

/// Determinant by fraction-free elimination.
pub fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut sign = BigRational::one();
    let mut prev = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigRational::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester resultant of two dense coefficient vectors (lowest degree
/// first) taken with their formal degrees.
pub fn sylvester_resultant(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m == 0 && n == 0 {
        return BigRational::one();
    }
    let size = m + n;
    let mut rows = vec![vec![BigRational::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    det(rows)
}

/// Newton interpolation through `(xs[i], ys[i])`, coefficients lowest first.
pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut poly = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); n];
        for k in 0..n {
            if poly[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &poly[k];
            }
            next[k] -= &poly[k] * &xs[i];
        }
        next[0] += &dd[i];
        poly = next;
    }
    poly
}

/// Coefficients in `y` of `p(x0, y)` padded to the formal `y`-degree.
fn in_y_at(p: &MultiPoly, x0: &BigRational, deg_y: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); deg_y + 1];
    for (m, c) in p.terms() {
        let c = c.as_rational().expect("rational input").clone();
        let mut xp = BigRational::one();
        for _ in 0..m.0[0] {
            xp *= x0;
        }
        out[m.0[1] as usize] += c * xp;
    }
    out
}

fn deg_y(p: &MultiPoly) -> usize {
    p.terms().map(|(m, _)| m.0[1] as usize).max().unwrap_or(0)
}

fn lead_in_y_is_constant(p: &MultiPoly) -> bool {
    let d = deg_y(p) as u32;
    p.terms().filter(|(m, _)| m.0[1] == d).all(|(m, _)| m.0[0] == 0)
}

/// `Res_y(a, b)` as a polynomial in `x`, by evaluation and interpolation.
pub fn resultant_y(a: &MultiPoly, b: &MultiPoly) -> UniPoly {
    let (da, db) = (deg_y(a), deg_y(b));
    let bound = (a.total_degree().finite().unwrap_or(0) * b.total_degree().finite().unwrap_or(0)) as i64;
    let xs: Vec<BigRational> = (0..=bound).map(q).collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|x0| sylvester_resultant(&in_y_at(a, x0, da), &in_y_at(b, x0, db)))
        .collect();
    UniPoly::new(interpolate(&xs, &ys).into_iter().map(Scalar::rational).collect())
}

/// `f(x + λy, y)`.
pub fn shear(f: &MultiPoly, lambda: i64) -> MultiPoly {
    let x = MultiPoly::var_in(vars(), "x").unwrap();
    let y = MultiPoly::var_in(vars(), "y").unwrap();
    let xs = &x + &y.scale(&Scalar::from_int(lambda));
    let mut out = MultiPoly::zero_in(vars());
    for (m, c) in f.terms() {
        let term = &xs.pow(m.0[0]) * &y.pow(m.0[1]);
        out = &out + &term.scale(c);
    }
    out
}

/// Result of the brute-force path: `Π_p (t - f(p))^{μ_p}` over all affine
/// critical points, and the total count.
pub struct OracleSpectrum {
    pub charpoly: UniPoly,
    pub mu: usize,
    pub shear: i64,
}

/// Critical values with multiplicities from resultants: after a shear
/// making the points have distinct `x`-coordinates and `f_y` monic in `y`,
/// the roots of `r(x) = Res_y(f_x, f_y)` are the `x`-coordinates of critical
/// points with multiplicity `μ_p`; over each irreducible factor of `r` the
/// `y`-coordinate is the root of `gcd(f_x, f_y)`.
pub fn resultant_spectrum(f: &MultiPoly) -> OracleSpectrum {
    for lambda in 1..=20 {
        if let Some(s) = try_shear(f, lambda) {
            return s;
        }
    }
    panic!("no generic shear found for {f}");
}

fn try_shear(f: &MultiPoly, lambda: i64) -> Option<OracleSpectrum> {
    let g = shear(f, lambda);
    let gx = g.partial_index(0);
    let gy = g.partial_index(1);
    if gy.is_zero() || !lead_in_y_is_constant(&gy) {
        return None;
    }
    let r = resultant_y(&gx, &gy);
    assert!(!r.is_zero(), "non-isolated critical locus");
    if r.degree() == Some(0) {
        return Some(OracleSpectrum {
            charpoly: UniPoly::one(),
            mu: 0,
            shear: lambda,
        });
    }
    let fact = factor_rational(&r).ok()?;
    let mut product = UniPoly::one();
    let mut mu = 0;
    for (factor, e) in &fact.factors {
        let xi = if factor.degree() == Some(1) {
            &(-&factor.coeff(0)) / &factor.leading()
        } else {
            NumberField::new(factor).ok()?.generator()
        };
        let at = |p: &MultiPoly| -> UniPoly {
            let mut cs: Vec<Scalar> = vec![Scalar::zero(); deg_y(p) + 1];
            for (m, c) in p.terms() {
                cs[m.0[1] as usize] = &cs[m.0[1] as usize] + &(c * &xi.pow(m.0[0]));
            }
            UniPoly::new(cs)
        };
        // a degenerate point makes the gcd a power of a linear factor
        let h = at(&gx).gcd(&at(&gy));
        let h = h.exact_div(&h.gcd(&h.derivative())).expect("divides");
        if h.degree() != Some(1) {
            return None;
        }
        let eta = &(-&h.coeff(0)) / &h.leading();
        let v = g.eval(&[xi.clone(), eta]);
        // characteristic polynomial of v over Q(ξ), of degree [Q(ξ):Q]
        let cp = v.charpoly_over_q();
        let power = factor.degree().unwrap() / cp.degree().unwrap();
        product = product.mul(&cp.pow((power * e) as u32));
        mu += factor.degree().unwrap() * e;
    }
    Some(OracleSpectrum {
        charpoly: product,
        mu,
        shear: lambda,
    })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
