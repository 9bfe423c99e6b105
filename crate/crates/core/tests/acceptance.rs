//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::process::ExitCode;

use brieskorn::brieskorn::{
    inverse_dt_poly, mono_count, relation_space, to_sparse, Antiderivative, BrieskornTruncation,
    TruncationParams,
};
use brieskorn::corpus::{fixtures, run_fixture};
use brieskorn::picard_fuchs::{annihilator, eval_at, operator_equiv, verify_annihilation, DiffOperator, SearchBounds};
use brieskorn::poly::{jacobian2, parse_polynomial, parse_univariate, MultiPoly, Scalar};
use brieskorn::report::{analyze, ReportDocument, RunConfig};
use common::*;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn outcome(failures: Vec<String>, success: &str) -> Outcome {
    if failures.is_empty() {
        Outcome {
            pass: true,
            detail: success.to_string(),
        }
    } else {
        Outcome {
            pass: false,
            detail: failures.join("; "),
        }
    }
}

fn p(s: &str) -> MultiPoly {
    parse_polynomial(s, &["x", "y"]).unwrap()
}

fn report(s: &str) -> Result<ReportDocument, String> {
    analyze(&RunConfig::for_polynomial(s)).map_err(|e| format!("{s}: {e}"))
}

fn labels(vs: &[brieskorn::report::ValueJson]) -> Vec<String> {
    vs.iter().map(|v| v.label()).collect()
}

fn criterion_1() -> Outcome {
    let mut fail = Vec::new();
    let doc = match report("y^2 + x^3 - 3*x") {
        Ok(d) => d,
        Err(e) => return outcome(vec![e], ""),
    };
    let g = &doc.global;
    check(&mut fail, (g.m, g.mu, g.nu, g.tame) == (2, 2, 0, true), format!("m, mu, nu, tame = {}, {}, {}, {}", g.m, g.mu, g.nu, g.tame));
    let crit: Vec<String> = doc.spectrum.values.iter().map(|v| v.value.label()).collect();
    check(&mut fail, crit == ["-2", "2"], format!("critical values {crit:?}"));
    for c in ["-2", "2"] {
        match doc.value(c) {
            Some(v) => {
                check(&mut fail, (v.mu_c, v.r_prime, v.n_prime) == (1, 2, 0), format!("at {c}: mu_c, R', N' = {}, {}, {}", v.mu_c, v.r_prime, v.n_prime));
                let pe = &v.period_exponents;
                check(&mut fail, (pe.m_c, pe.m_prime_c) == (Some(0), Some(2)), format!("at {c}: exponents {:?}, {:?}", pe.m_c, pe.m_prime_c));
            }
            None => fail.push(format!("value {c} missing")),
        }
    }
    match doc.operators.iter().find(|o| o.form == "1") {
        Some(o) => {
            check(&mut fail, o.order == 2, format!("operator order {}", o.order));
            check(&mut fail, labels(&o.singular_points) == ["-2", "2"], format!("singular points {:?}", labels(&o.singular_points)));
        }
        None => fail.push("no operator".into()),
    }
    outcome(fail, "m = 2, mu = 2, nu = 0, R'_{+-2} = 2, N'_{+-2} = 0, order-2 operator singular at {-2, 2}, exponents (0, 2)")
}

fn criterion_2() -> Outcome {
    let mut fail = Vec::new();
    let doc = match report("x^4*y^2 + 2*x^2*y + x*y^2") {
        Ok(d) => d,
        Err(e) => return outcome(vec![e], ""),
    };
    let g = &doc.global;
    check(&mut fail, (g.m, g.mu, g.nu, g.tame) == (7, 4, 3, false), format!("m, mu, nu, tame = {}, {}, {}, {}", g.m, g.mu, g.nu, g.tame));
    let crit: Vec<(String, usize)> = doc.spectrum.values.iter().map(|v| (v.value.label(), v.mu_c)).collect();
    check(&mut fail, crit == [("0".to_string(), 4)], format!("critical values {crit:?}"));
    match (doc.value("0"), doc.value("-1")) {
        (Some(z), Some(a)) => {
            check(&mut fail, (z.r_prime, z.n_prime, z.r_minus_n_predicted) == (7, 0, 3), format!("at 0: R', N', R-N = {}, {}, {}", z.r_prime, z.n_prime, z.r_minus_n_predicted));
            check(&mut fail, (a.r_prime, a.n_prime, a.nu_c, a.r_minus_n_predicted) == (4, 0, 3, 4), format!("at -1: R', N', nu, R-N = {}, {}, {}, {}", a.r_prime, a.n_prime, a.nu_c, a.r_minus_n_predicted));
        }
        _ => fail.push("values 0 and -1 not both reported".into()),
    }
    outcome(fail, "m = 7, mu = mu_0 = 4, nu_{-1} = 3, R'_0 = 7, N'_0 = 0, R'_{-1} = 4, N'_{-1} = 0, R_0 - N_0 = 3, R_{-1} - N_{-1} = 4")
}

/// `t Dt ((t+1) Dt + 1/2)`.
fn hypergeometric_target() -> DiffOperator {
    let u = |s: &str| parse_univariate(s, "t").unwrap();
    DiffOperator::new(vec![u("0"), u("t")]).weyl_mul(&DiffOperator::new(vec![u("1/2"), u("t + 1")]))
}

fn criterion_3() -> (Outcome, Outcome, String) {
    let mut fail = Vec::new();
    let invariants = match report("x^2*y^2 + 2*x*y + x") {
        Ok(doc) => {
            let g = &doc.global;
            check(&mut fail, (g.m, g.mu, g.nu, g.tame) == (2, 1, 1, false), format!("m, mu, nu, tame = {}, {}, {}, {}", g.m, g.mu, g.nu, g.tame));
            let crit: Vec<(String, usize)> = doc.spectrum.values.iter().map(|v| (v.value.label(), v.mu_c)).collect();
            check(&mut fail, crit == [("0".to_string(), 1)], format!("critical values {crit:?}"));
            match doc.value("-1") {
                Some(v) => check(&mut fail, v.nu_c == 1 && v.mu_c == 0, format!("at -1: nu_c = {}, mu_c = {}", v.nu_c, v.mu_c)),
                None => fail.push("atypical value -1 missing".into()),
            }
            outcome(fail, "m = 2, mu = mu_0 = 1, atypical -1 with nu_{-1} = 1, not tame")
        }
        Err(e) => outcome(vec![e], ""),
    };

    let f = p("x^2*y^2 + 2*x*y + x");
    let target = hypergeometric_target();
    let operator = match annihilator(&f, &p("1"), SearchBounds::default()) {
        Ok(a) => {
            let ok = operator_equiv(&a.operator, &target);
            Outcome {
                pass: ok,
                detail: if ok {
                    format!("annihilator of [dx^dy] is {} ~ t Dt ((t+1) Dt + 1/2)", a.operator)
                } else {
                    format!(
                        "annihilator of [dx^dy] is {} (order {}), not equivalent to t Dt ((t+1) Dt + 1/2) = {}",
                        a.operator,
                        a.operator.order().unwrap_or(0),
                        target
                    )
                },
            }
        }
        Err(e) => Outcome {
            pass: false,
            detail: format!("no annihilator of [dx^dy]: {e}"),
        },
    };
    let note = match annihilator(&f, &p("x*y"), SearchBounds::default()) {
        Ok(a) => format!(
            "annihilator of [x*y dx^dy] is {}; equivalent to the target: {}",
            a.operator,
            operator_equiv(&a.operator, &target)
        ),
        Err(e) => format!("no annihilator of [x*y dx^dy]: {e}"),
    };
    (invariants, operator, note)
}

fn criterion_4() -> Outcome {
    let mut fail = Vec::new();
    let mut count = 0;
    for fixture in fixtures() {
        let out = run_fixture(&fixture);
        count += 1;
        match &out.report {
            Some(doc) => {
                for c in doc.failed_identities() {
                    fail.push(format!("{}: {} at {:?}: {} vs {}", fixture.name, c.name, c.value, c.lhs, c.rhs));
                }
                check(&mut fail, doc.global.mu > 0, format!("{}: mu = 0", fixture.name));
            }
            None => fail.push(format!("{}: {:?}", fixture.name, out.diffs)),
        }
    }
    outcome(fail, &format!("identity suite holds on all {count} corpus polynomials, mu > 0 on each"))
}

fn criterion_5() -> Outcome {
    let mut fail = Vec::new();
    let mut r = rng(0xacce55);
    for i in 0..25 {
        let degree = 2 + (i % 3) as u32;
        let (f, spectrum) = random_isolated(&mut r, degree);
        let oracle = resultant_spectrum(&f);
        check(&mut fail, spectrum.mu == oracle.mu, format!("{f}: mu {} vs oracle {}", spectrum.mu, oracle.mu));
        check(&mut fail, spectrum.charpoly == oracle.charpoly, format!("{f}: critical values {} vs oracle {}", spectrum.charpoly, oracle.charpoly));
    }
    outcome(fail, "25 random polynomials of degree <= 4: mu and critical spectrum equal the resultant oracle")
}

fn dense_in(f: &MultiPoly, g: &MultiPoly, e: usize) -> bool {
    if g.is_zero() {
        return true;
    }
    let d = g.total_degree().finite().unwrap() as usize;
    let mut v = vec![Scalar::zero(); mono_count(d)];
    for (i, c) in to_sparse(g) {
        v[i] = c;
    }
    relation_space(f, d, e).unwrap().contains(&v).unwrap()
}

fn criterion_6() -> Outcome {
    let mut fail = Vec::new();
    let mut r = rng(0x5eed6);

    for _ in 0..100 {
        let f = random_poly(&mut r, 4, 5);
        let g = random_poly(&mut r, 4, 5);
        let h = random_poly(&mut r, 3, 3);
        let fg = jacobian2(&f, &g).unwrap();
        check(&mut fail, fg == jacobian2(&g, &f).unwrap().neg(), format!("J({f}, {g}) not antisymmetric"));
        let lhs = jacobian2(&f, &(&g * &h)).unwrap();
        let rhs = &(&g * &jacobian2(&f, &h).unwrap()) + &(&h * &fg);
        check(&mut fail, lhs == rhs, format!("Leibniz fails for {f}, {g}, {h}"));
    }

    for _ in 0..25 {
        let (f, _) = random_isolated(&mut r, 3);
        let g = random_poly(&mut r, 3, 4);
        let a = inverse_dt_poly(&f, &g, Antiderivative::AlongX);
        let b = inverse_dt_poly(&f, &g, Antiderivative::AlongY);
        let e = g.total_degree().finite().unwrap_or(0) as usize + 2;
        check(&mut fail, dense_in(&f, &(&a - &b), e), format!("inverse_dt choices differ outside the relations for f = {f}, g = {g}"));
    }

    let mut found = 0;
    for s in ["y^2 + x^3 - 3*x", "x^4*y^2 + 2*x^2*y + x*y^2", "x^2*y^2 + 2*x*y + x", "x^2 + y^2"] {
        let f = p(s);
        let omega = p("1");
        match annihilator(&f, &omega, SearchBounds::default()) {
            Ok(ann) => {
                found += 1;
                let mut total = MultiPoly::zero_in(f.vars_arc().clone());
                for (j, q) in ann.relation.iter().enumerate() {
                    let mut g = &eval_at(q, &f) * &omega;
                    for _ in 0..j {
                        g = inverse_dt_poly(&f, &g, Antiderivative::AlongX);
                    }
                    total = &total + &g;
                }
                let e = total.total_degree().finite().unwrap_or(0) as usize + 10;
                check(&mut fail, dense_in(&f, &total, e), format!("{s}: annihilator relation not in the relation span"));
                let t = BrieskornTruncation::new(&f, TruncationParams::default()).unwrap();
                check(&mut fail, verify_annihilation(&t, &omega, &ann.operator), format!("{s}: operator fails verification"));
            }
            Err(e) => fail.push(format!("{s}: {e}")),
        }
    }

    let bases = ["y^2 + x^3 - 3*x", "x^2*y^2 + 2*x*y + x"];
    for i in 0..5 {
        let gamma: i64 = loop {
            let g = r.gen_range(-12..=12);
            if g != 0 {
                break g;
            }
        };
        let s = bases[i % 2];
        let moved = (&p(s) + &MultiPoly::constant_in(vars(), Scalar::from_int(gamma))).to_string();
        match (report(s), report(&moved)) {
            (Ok(a), Ok(b)) => {
                let same_global = (a.global.m, a.global.mu, a.global.nu, a.global.tame)
                    == (b.global.m, b.global.mu, b.global.nu, b.global.tame);
                check(&mut fail, same_global, format!("{moved}: global invariants changed"));
                for v in &a.values {
                    let target = parse_univariate(&v.value.minpoly, "t")
                        .unwrap()
                        .shift(&Scalar::from_int(-gamma))
                        .to_string();
                    let w = b.values.iter().find(|w| w.value.minpoly == target);
                    let same = w.is_some_and(|w| {
                        (w.mu_c, w.r_prime, w.n_prime, w.nu_c, w.chi) == (v.mu_c, v.r_prime, v.n_prime, v.nu_c, v.chi)
                    });
                    check(&mut fail, same, format!("{moved}: value {} not shifted consistently", v.value.label()));
                }
            }
            (Err(e), _) | (_, Err(e)) => fail.push(e),
        }
    }
    outcome(
        fail,
        &format!("100 jacobian pairs, 25 inverse_dt cases, {found} annihilator memberships, 5 translations"),
    )
}

fn criterion_7() -> Outcome {
    let config = RunConfig::for_polynomial("x^2*y^2 + 2*x*y + x");
    match (analyze(&config), analyze(&config)) {
        (Ok(a), Ok(b)) => {
            let (a, b) = (a.to_json(), b.to_json());
            Outcome {
                pass: a == b,
                detail: if a == b {
                    format!("two runs produce identical {}-byte JSON", a.len())
                } else {
                    "JSON differs between runs".into()
                },
            }
        }
        (Err(e), _) | (_, Err(e)) => Outcome {
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn main() -> ExitCode {
    let mut all = true;
    let mut line = |name: &str, o: &Outcome| {
        all &= o.pass;
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    line("1", &criterion_1());
    line("2", &criterion_2());
    let (c3_invariants, c3_operator, c3_note) = criterion_3();
    line("3a", &c3_invariants);
    line("3b", &c3_operator);
    println!("     note: {c3_note}");
    line("4", &criterion_4());
    line("5", &criterion_5());
    line("6", &criterion_6());
    line("7", &criterion_7());
    if all {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("some criteria failed");
        ExitCode::FAILURE
    }
}
