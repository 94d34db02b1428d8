use num_bigint::BigInt;
use proptest::prelude::*;
use singinv::cmeval::{eval_x, poly_eval_cx, Cx, Fx, PrecisionPolicy};
use singinv::curvedata::{curve_coeffs, LevelRegistry};
use singinv::fixtures::{appendix_a, appendix_b, appendix_c};
use singinv::genpoly::*;
use singinv::quadforms::CMPoint;
use singinv::IntPoly;

fn reg() -> &'static LevelRegistry {
    LevelRegistry::global()
}

fn p(s: &str) -> IntPoly {
    IntPoly::parse(s).unwrap()
}

fn value(s: &str) -> Cx {
    Cx::from_real(Fx::parse_decimal(s, 200).unwrap())
}

#[test]
fn printed_pq_give_printed_r() {
    let a = appendix_a().unwrap();
    let b = appendix_b().unwrap();
    assert_eq!(a.len(), b.len());
    for (pa, gb) in a.iter().zip(&b) {
        assert_eq!((pa.level, pa.m), (gb.level, gb.m));
        let r = generating_polynomial(&pa.p, &pa.q, &curve_coeffs(pa.level).unwrap()).unwrap();
        assert_eq!(r, gb.r, "N={} m={}", pa.level, pa.m);
    }
}

#[test]
fn pipeline_reproduces_appendix_b() {
    for e in appendix_b().unwrap().into_iter().filter(|e| e.m <= 3) {
        let r = generating_polynomial_for(reg(), e.level, e.m).unwrap();
        assert_eq!(r, e.r, "N={} m={}", e.level, e.m);
    }
}

#[test]
fn small_examples() {
    let r = generating_polynomial_for(reg(), 141, 2).unwrap();
    assert_eq!(r, p("x^8-4x^7-8x^6+3x^4"));
    let r = generating_polynomial_for(reg(), 143, 2).unwrap();
    assert_eq!(r, p("x^8-4x^7-8x^6+11x^4"));
    // x^4 (x+1)^2 (x^2-6x+3)
    let fp = factor_over_z(&p("x^8-4x^7-8x^6+3x^4"));
    assert_eq!(fp.factors, vec![(p("x"), 4), (p("x+1"), 2), (p("x^2-6x+3"), 1)]);
}

#[test]
fn non_monic_input_is_rejected() {
    let cubic = curve_coeffs(37).unwrap();
    // P^2 = 4x^6 outgrows Q^2 x^3 = x^5
    let q = p("x");
    let r = generating_polynomial(&p("2x^3"), &q, &cubic);
    assert!(r.is_err());
}

#[test]
fn factorizations_multiply_back() {
    for e in appendix_b().unwrap() {
        let fp = factor_over_z(&e.r);
        assert_eq!(fp.expand(), e.r, "N={} m={}", e.level, e.m);
        for (g, _) in &fp.factors {
            assert!(g.lead() > BigInt::from(0));
            assert_eq!(g.content(), BigInt::from(1));
        }
    }
}

#[test]
fn level_37_octic_chain() {
    let r = generating_polynomial_for(reg(), 37, 2).unwrap();
    let fp = factor_over_z(&r);
    let quintic = p("x^5-10x^4-481x^3-4440x^2-16428x-21904");
    assert_eq!(fp.content, BigInt::from(1));
    assert_eq!(fp.factors, vec![(p("x+4"), 1), (p("x+5"), 2), (quintic.clone(), 1)]);
    let pol = PrecisionPolicy::new(40).unwrap();
    let rec = reg().record(37, 600).unwrap();
    let pt = CMPoint::new(37, 0, -4 * 37 * 2).unwrap();
    let x = eval_x(&rec, &pt, &pol).unwrap();
    assert_eq!(select_factor_by_root(&fp, &x.value, DEFAULT_TOL).unwrap(), quintic);
    // the printed 16-digit value is enough at a looser tolerance
    assert_eq!(select_factor_by_root(&fp, &value("30.84491025792583"), 1e-13).unwrap(), quintic);
}

#[test]
fn quadratic_selections() {
    for (level, printed, want) in [
        (141, "5.449489742783178", "x^2-6x+3"),
        (155, "5.162277660168379", "x^2-4x-6"),
    ] {
        let fp = factor_over_z(&generating_polynomial_for(reg(), level, 2).unwrap());
        assert_eq!(select_factor_by_root(&fp, &value(printed), 1e-13).unwrap(), p(want));
    }
}

#[test]
fn selection_failures_are_reported() {
    let fp = factor_over_z(&(&p("x^2-2") * &p("x^2-3")));
    let err = select_factor_by_root(&fp, &value("7.5"), 1e-20).unwrap_err();
    assert!(matches!(err, singinv::Error::Ambiguous(_)));
    let err = select_factor_by_root(&fp, &value("1.5"), 1.0).unwrap_err();
    assert!(err.to_string().contains("2 factors"), "{err}");
}

#[test]
fn selected_factor_root_is_near_the_value() {
    let digits = 40;
    let pol = PrecisionPolicy::new(digits).unwrap();
    for e in appendix_c().unwrap().into_iter().filter(|e| e.m <= 3) {
        let rec = reg().record(e.level, 600).unwrap();
        let n = e.level as i64;
        let pt = CMPoint::new(n, 0, -4 * n * e.m as i64).unwrap();
        let x = eval_x(&rec, &pt, &pol).unwrap();
        let fp = factor_over_z(&generating_polynomial_for(reg(), e.level, e.m).unwrap());
        let g = select_factor_by_root(&fp, &x.value, DEFAULT_TOL).unwrap();
        // one Newton step bounds the distance to the nearest root of a simple factor
        let v = poly_eval_cx(&g, &x.value);
        let dv = poly_eval_cx(&g.derivative(), &x.value);
        let step = v.div(&dv).unwrap();
        let bound = 10f64.powi(-(digits as i32 - 4));
        assert!(step.abs_f64() < bound, "N={} m={}: {:e}", e.level, e.m, step.abs_f64());
    }
}

#[test]
fn squarefree_parts() {
    let f = &(&p("x+1").pow(3) * &p("x^2+1").pow(2)) * &p("x-7");
    let sf = squarefree_decomposition(&f);
    assert_eq!(sf, vec![(p("x-7"), 1), (p("x^2+1"), 2), (p("x+1"), 3)]);
    assert_eq!(gcd_z(&p("x^2-1"), &p("x^2+2x+1")), p("x+1"));
}

/// `x^n + p (a_{n-1} x^{n-1} + ... + a_1 x) + p u`, irreducible by Eisenstein at `p`.
fn eisenstein(n: usize, prime: i64, mid: &[i64], u: i64) -> IntPoly {
    let mut c = vec![BigInt::from(prime * u)];
    c.extend(mid.iter().take(n - 1).map(|&a| BigInt::from(prime * a)));
    c.push(BigInt::from(1));
    IntPoly::new(c)
}

fn nonzero() -> impl Strategy<Value = i64> {
    (-20i64..20).prop_filter("nonzero", |u| *u != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn construct_then_factor(
        prime in prop::sample::select(vec![2i64, 3, 5, 7]),
        mid in prop::collection::vec(-6i64..6, 4),
        u2 in nonzero(), u3 in nonzero(), u5 in nonzero(),
        sign in prop::bool::ANY,
    ) {
        prop_assume!(u2 % prime != 0 && u3 % prime != 0 && u5 % prime != 0);
        let fs = [
            eisenstein(2, prime, &mid, u2),
            eisenstein(3, prime, &mid[1..], u3),
            eisenstein(5, prime, &mid, u5),
        ];
        let mut f = &(&fs[0] * &fs[1]) * &fs[2];
        if sign {
            f = f.scale(&BigInt::from(-6));
        }
        let fp = factor_over_z(&f);
        prop_assert_eq!(fp.expand(), f);
        prop_assert_eq!(fp.content, BigInt::from(if sign { -6 } else { 1 }));
        let mut got: Vec<IntPoly> = fp.factors.iter().flat_map(|(g, e)| std::iter::repeat(g.clone()).take(*e as usize)).collect();
        let mut want = fs.to_vec();
        got.sort_by_key(|g| g.to_string());
        want.sort_by_key(|g| g.to_string());
        prop_assert_eq!(got, want);
    }
}
