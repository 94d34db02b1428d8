//! Acceptance criteria 1-10. Prints one line per criterion (plus non-blocking stretch lines)
//! and exits non-zero if a blocking criterion fails unexpectedly.

use std::collections::{HashMap, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use singinv::classfield::{minpoly, root_residual_log10, MinPolyJob, MinPolyResult};
use singinv::cmeval::{cubic_residual, eval_x, eval_y, poly_eval_cx, Cx, EvalResult, Fx, PrecisionPolicy};
use singinv::curvedata::{
    bootstrap_level, curve_coeffs, fourier_from_parametrization, genus_one_levels, validate_cubic,
    LevelRegistry,
};
use singinv::fixtures::{appendix_a, appendix_b, appendix_c, appendix_d, printed_decimals};
use singinv::genpoly::{factor_over_z, generating_polynomial_for, select_factor_by_root, DEFAULT_TOL};
use singinv::modpoly::{expand_xy, phi_substituted_series, pq_for_level, reduce_to_xy, sigma1_plus};
use singinv::quadforms::{class_number, CMPoint, QuadForm};
use singinv::{IntPoly, YLinearPoly};

/// Closed forms and integral points.
const CLOSED_FORM_TOL: f64 = 1e-12;
/// Residual of `(x, y)` in the cubic.
const CURVE_RESIDUAL_TOL: f64 = 1e-20;
const EVAL_DIGITS: u32 = 40;
const APPENDIX_C_DIGITS: u32 = 30;
/// Wall clock for each primary minimal polynomial.
const MINPOLY_BUDGET: Duration = Duration::from_secs(120);
/// The relation must hold through this exponent for every level.
const BOOTSTRAP_THROUGH: i64 = 200;
const FACTOR_TRIALS: usize = 100;

/// Blocking criteria that cannot pass as stated; see the line printed for each.
const KNOWN_UNATTAINABLE: &[&str] = &["6"];

#[derive(PartialEq)]
enum Tier {
    Primary,
    Stretch,
}

struct Line {
    id: &'static str,
    tier: Tier,
    pass: bool,
    detail: String,
}

fn line(id: &'static str, pass: bool, detail: String) -> Line {
    Line { id, tier: Tier::Primary, pass, detail }
}

fn stretch(id: &'static str, pass: bool, detail: String) -> Line {
    Line { id, tier: Tier::Stretch, pass, detail }
}

fn reg() -> &'static LevelRegistry {
    LevelRegistry::global()
}

fn sqrt_point(level: u32, m: u32) -> CMPoint {
    let n = level as i64;
    CMPoint::new(n, 0, -4 * n * m as i64).unwrap()
}

fn eval_pair(level: u32, m: u32, digits: u32) -> (EvalResult, EvalResult) {
    let rec = reg().record(level, 600).unwrap();
    let pol = PrecisionPolicy::new(digits).unwrap();
    let pt = sqrt_point(level, m);
    (eval_x(&rec, &pt, &pol).unwrap(), eval_y(&rec, &pt, &pol).unwrap())
}

fn dist(v: &EvalResult, want: &Fx) -> f64 {
    let w = Cx::from_real(want.with_prec(v.value.prec()));
    v.value.sub(&w).abs_f64()
}

fn sqrt_fx(n: i64, prec: u32) -> Fx {
    Fx::from_int(n, prec).sqrt().unwrap()
}

/// `a + b sqrt(n)`.
fn quad(a: i64, b: i64, n: i64, prec: u32) -> Fx {
    Fx::from_int(a, prec).add(&sqrt_fx(n, prec).mul_int(&BigInt::from(b)))
}

fn secs(t: Instant) -> String {
    format!("{:.1} s", t.elapsed().as_secs_f64())
}

fn criterion_1() -> Vec<Line> {
    let t = Instant::now();
    let entries = appendix_a().unwrap();
    let check = |tier_primary: bool| -> (usize, Vec<String>) {
        let sel: Vec<_> = entries.iter().filter(|e| (e.m <= 3) == tier_primary).collect();
        let bad: Vec<String> = sel
            .par_iter()
            .filter_map(|e| match pq_for_level(reg(), e.level, e.m) {
                Ok((p, q)) if p == e.p && q == e.q => None,
                Ok(_) => Some(format!("N={} m={} differs", e.level, e.m)),
                Err(err) => Some(format!("N={} m={}: {err}", e.level, e.m)),
            })
            .collect();
        (sel.len(), bad)
    };
    let (n, bad) = check(true);
    let primary = line(
        "1",
        bad.is_empty() && n == 47,
        format!("table A, m in {{2,3}}: {}/{n} exact {:?} ({})", n - bad.len(), bad, secs(t)),
    );
    let t = Instant::now();
    let (n, bad) = check(false);
    let extra = stretch(
        "1s",
        bad.is_empty(),
        format!("table A, m in {{5,7}} and (11,210): {}/{n} exact {:?} ({})", n - bad.len(), bad, secs(t)),
    );
    vec![primary, extra]
}

fn criterion_2() -> Vec<Line> {
    let t = Instant::now();
    let sel: Vec<_> = appendix_b().unwrap().into_iter().filter(|e| e.m <= 3).collect();
    let bad: Vec<String> = sel
        .par_iter()
        .filter_map(|e| match generating_polynomial_for(reg(), e.level, e.m) {
            Ok(r) if r == e.r => None,
            Ok(_) => Some(format!("N={} m={} differs", e.level, e.m)),
            Err(err) => Some(format!("N={} m={}: {err}", e.level, e.m)),
        })
        .collect();
    vec![line(
        "2",
        bad.is_empty() && sel.len() == 47,
        format!("table B, m in {{2,3}}: {}/{} exact {:?} ({})", sel.len() - bad.len(), sel.len(), bad, secs(t)),
    )]
}

fn criterion_3() -> Vec<Line> {
    let t = Instant::now();
    let sel: Vec<_> = appendix_c().unwrap().into_iter().filter(|e| e.m <= 3).collect();
    let bad: Vec<String> = sel
        .par_iter()
        .flat_map(|e| {
            let (x, y) = eval_pair(e.level, e.m, APPENDIX_C_DIGITS);
            let mut out = Vec::new();
            for (name, printed, got) in [("x", &e.x, &x), ("y", &e.y, &y)] {
                let places = printed_decimals(printed).saturating_sub(2) as i32;
                let want = Fx::parse_decimal(printed, got.value.prec()).unwrap();
                if dist(got, &want) > 10f64.powi(-places) {
                    out.push(format!("N={} m={} {name}", e.level, e.m));
                }
            }
            out
        })
        .collect();
    let (x37, y37) = eval_pair(37, 2, APPENDIX_C_DIGITS);
    vec![line(
        "3",
        bad.is_empty(),
        format!(
            "table C, m in {{2,3}}: {} points, {} coordinate mismatches {:?}; x_37 = {}, y_37 = {} ({})",
            sel.len(),
            bad.len(),
            bad,
            x37.value.re.to_decimal(14),
            y37.value.re.to_decimal(13),
            secs(t)
        ),
    )]
}

fn criterion_4() -> Vec<Line> {
    let r = generating_polynomial_for(reg(), 37, 2).unwrap();
    let fp = factor_over_z(&r);
    let quintic = IntPoly::from_i64(&[-21904, -16428, -4440, -481, -10, 1]);
    let want = vec![(IntPoly::from_i64(&[4, 1]), 1), (IntPoly::from_i64(&[5, 1]), 2), (quintic.clone(), 1)];
    let (x, _) = eval_pair(37, 2, EVAL_DIGITS);
    let chosen = select_factor_by_root(&fp, &x.value, DEFAULT_TOL);
    let ok = fp.content == BigInt::from(1) && fp.factors == want && chosen.as_ref().ok() == Some(&quintic);
    vec![line(
        "4",
        ok,
        format!(
            "N=37 m=2: {} ; selected {}",
            fp.factors.iter().map(|(g, e)| format!("({g})^{e}")).collect::<Vec<_>>().join(" "),
            chosen.map(|g| g.to_string()).unwrap_or_else(|e| e.to_string())
        ),
    )]
}

fn criterion_5() -> Vec<Line> {
    let (x, _) = eval_pair(37, 3, EVAL_DIGITS);
    let prec = x.value.prec();
    // (37 + sqrt37 (9 + sqrt(158 + 26 sqrt37))) / 4
    let s37 = sqrt_fx(37, prec);
    let inner = Fx::from_int(158, prec).add(&s37.mul_int(&BigInt::from(26))).sqrt().unwrap();
    let closed = Fx::from_int(37, prec)
        .add(&s37.mul(&Fx::from_int(9, prec).add(&inner)))
        .div_int(&BigInt::from(4));
    let d = dist(&x, &closed);
    let quartic = IntPoly::from_i64(&[-4107, -2738, -592, -37, 1]);
    let v = poly_eval_cx(&quartic, &x.value);
    let dv = poly_eval_cx(&quartic.derivative(), &x.value);
    let step = v.div(&dv).unwrap().abs_f64();
    vec![line(
        "5",
        d < CLOSED_FORM_TOL && step < CLOSED_FORM_TOL,
        format!(
            "x_37(i sqrt(3/37)) = {}: |x - closed form| = {d:.1e}, Newton step to a quartic root {step:.1e}",
            x.value.re.to_decimal(20)
        ),
    )]
}

fn criterion_6() -> Vec<Line> {
    let mut parts = Vec::new();
    let mut ok = true;
    let (x, y) = eval_pair(141, 2, EVAL_DIGITS);
    let prec = x.value.prec();
    let (dx, dy) = (dist(&x, &quad(3, 1, 6, prec)), dist(&y, &quad(6, 3, 6, prec)));
    let r141 = cubic_residual(&x, &y, &curve_coeffs(141).unwrap()).residual;
    ok &= dx < CLOSED_FORM_TOL && dy < CLOSED_FORM_TOL && r141 < CURVE_RESIDUAL_TOL;
    parts.push(format!("N=141: |x-(3+sqrt6)| = {dx:.1e}, |y-(6+3sqrt6)| = {dy:.1e}, residual {r141:.1e}"));
    let (x, y) = eval_pair(155, 2, EVAL_DIGITS);
    let (dx, dy) = (dist(&x, &quad(2, 1, 10, prec)), dist(&y, &quad(4, 2, 10, prec)));
    let dy_on_curve = dist(&y, &quad(6, 2, 10, prec));
    let r155 = cubic_residual(&x, &y, &curve_coeffs(155).unwrap()).residual;
    ok &= dx < CLOSED_FORM_TOL && dy < CLOSED_FORM_TOL && r155 < CURVE_RESIDUAL_TOL;
    parts.push(format!(
        "N=155: |x-(2+sqrt10)| = {dx:.1e}, |y-(4+2sqrt10)| = {dy:.1e}, residual {r155:.1e}; \
         y = {} agrees with 6+2sqrt10 to {dy_on_curve:.1e} (the stated 4+2sqrt10 is not on the curve)",
        y.value.re.to_decimal(15)
    ));
    vec![line("6", ok, parts.join("; "))]
}

/// Primary minimal polynomials, kept for the residual property in criterion 10.
fn criterion_7(kept: &mut Vec<MinPolyResult>) -> Vec<Line> {
    let table = appendix_d().unwrap();
    let printed = |l: u32, d: i64| table.iter().find(|e| e.level == l && e.dk == d).unwrap().poly.clone();
    let mut parts = Vec::new();
    let mut ok = true;
    for (level, dk) in [(37u32, -3i64), (43, -3)] {
        let t = Instant::now();
        let res = minpoly(reg(), &MinPolyJob { level, dk, digits: None, force: false }).unwrap();
        let took = t.elapsed();
        let same = res.poly == printed(level, dk);
        ok &= same && took < MINPOLY_BUDGET;
        parts.push(format!(
            "({level},{dk}) degree {} {} at {} digits in {:.1} s",
            res.poly.degree().unwrap(),
            if same { "exact" } else { "DIFFERS" },
            res.digits,
            took.as_secs_f64()
        ));
        kept.push(res);
    }
    let c15 = kept[0].poly.coeff(0) == BigInt::from(15106542566400u64);
    ok &= c15;
    let primary = line("7", ok, parts.join("; "));

    let t = Instant::now();
    let tier: Vec<_> = table.iter().filter(|e| !matches!((e.level, e.dk), (37, -3) | (43, -3))).collect();
    let listed = [(37, -11), (53, -3), (61, -3), (79, -3), (83, -3), (89, -3), (131, -3), (53, -11), (61, -11)];
    let mut matched = 0;
    let mut differ = Vec::new();
    let mut count = 0;
    for e in &tier {
        if !listed.contains(&(e.level, e.dk)) {
            continue;
        }
        count += 1;
        let res = minpoly(reg(), &MinPolyJob { level: e.level, dk: e.dk, digits: None, force: false }).unwrap();
        if res.poly == e.poly {
            matched += 1;
        } else {
            let k = (0..=res.poly.degree().unwrap()).filter(|&k| res.poly.coeff(k) != e.poly.coeff(k)).count();
            differ.push(format!("({},{}) {k} coefficients", e.level, e.dk));
        }
    }
    let extra = stretch(
        "7s",
        differ.is_empty(),
        format!(
            "stretch tier: {matched}/{count} exact; differing {differ:?} ({}). The computed polynomials for the \
             differing entries split completely at primes represented by the principal form and are stable \
             under doubled precision; the table entries do not split (tests/classfield.rs)",
            secs(t)
        ),
    );
    vec![primary, extra]
}

/// SL2(Z)-orbits of primitive positive forms of discriminant `d` by flood fill under `S`, `T^{+-1}`.
fn orbit_count(d: i64) -> usize {
    let bound = d.abs() + 8;
    let in_box = |f: &QuadForm| f.a.abs() <= bound && f.b.abs() <= bound && f.c.abs() <= bound;
    let mut seen: HashMap<QuadForm, ()> = HashMap::new();
    let mut n = 0;
    for a in 1..=bound {
        for b in -bound..=bound {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let start = QuadForm::new(a, b, num / (4 * a));
            if !in_box(&start) || !start.is_primitive() || seen.contains_key(&start) {
                continue;
            }
            seen.insert(start, ());
            let mut queue = VecDeque::from([start]);
            while let Some(f) = queue.pop_front() {
                for g in [
                    QuadForm::new(f.c, -f.b, f.a),
                    QuadForm::new(f.a, f.b + 2 * f.a, f.a + f.b + f.c),
                    QuadForm::new(f.a, f.b - 2 * f.a, f.a - f.b + f.c),
                ] {
                    if in_box(&g) && !seen.contains_key(&g) {
                        seen.insert(g, ());
                        queue.push_back(g);
                    }
                }
            }
            n += 1;
        }
    }
    n
}

fn criterion_8() -> Vec<Line> {
    let named: Vec<(i64, usize)> = vec![(-296, 10), (-444, 8), (-1036, 12), (-4107, 12)];
    let named_ok = named.iter().all(|&(d, h)| class_number(d).unwrap() == h);
    let ds: Vec<i64> = (-100..=-3).filter(|d: &i64| matches!(d.rem_euclid(4), 0 | 1)).collect();
    let bad: Vec<i64> = ds.iter().copied().filter(|&d| class_number(d).unwrap() != orbit_count(d)).collect();
    vec![line(
        "8",
        named_ok && bad.is_empty(),
        format!(
            "h(-296,-444,-1036,-4107) = {:?}; orbit partition agrees for {}/{} discriminants with |D| <= 100",
            named.iter().map(|&(d, _)| class_number(d).unwrap()).collect::<Vec<_>>(),
            ds.len() - bad.len(),
            ds.len()
        ),
    )]
}

fn criterion_9() -> Vec<Line> {
    let t = Instant::now();
    let a = appendix_a().unwrap();
    let b = appendix_b().unwrap();
    let bad: Vec<String> = genus_one_levels()
        .par_iter()
        .filter_map(|&n| {
            let cubic = curve_coeffs(n).unwrap();
            let rec = fourier_from_parametrization(n, &cubic, BOOTSTRAP_THROUGH as usize + 10).ok()?;
            let chk = validate_cubic(&rec);
            if !chk.ok || chk.checked_through < BOOTSTRAP_THROUGH {
                return Some(format!("N={n}: relation {chk:?}"));
            }
            let data: Vec<_> = a
                .iter()
                .filter(|e| e.level == n)
                .filter_map(|e| {
                    b.iter().find(|r| r.level == n && r.m == e.m).map(|r| (e.m, e.p.clone(), e.q.clone(), r.r.clone()))
                })
                .collect();
            match bootstrap_level(&data) {
                Ok(c) if c == cubic => None,
                Ok(c) => Some(format!("N={n}: solved {:?}", c.as_tuple())),
                Err(e) => Some(format!("N={n}: {e}")),
            }
        })
        .collect();
    vec![line(
        "9",
        bad.is_empty(),
        format!(
            "38 levels: relation through q^{BOOTSTRAP_THROUGH}, cubic from every (A, B) pair agrees; failures {bad:?} ({})",
            secs(t)
        ),
    )]
}

/// `x^n + p (a_{n-1} x^{n-1} + ... + a_1 x) + p u` with `p` not dividing `u`.
fn eisenstein(rng: &mut ChaCha8Rng, n: usize, prime: i64) -> IntPoly {
    let mut u = 0;
    while u % prime == 0 {
        u = rng.gen_range(-20i64..20);
    }
    let mut c = vec![BigInt::from(prime * u)];
    for _ in 1..n {
        c.push(BigInt::from(prime * rng.gen_range(-6i64..6)));
    }
    c.push(BigInt::from(1));
    IntPoly::new(c)
}

fn criterion_10(kept: &[MinPolyResult]) -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let levels = genus_one_levels();
    let mut parts = Vec::new();
    let mut ok = true;

    let mut roundtrips = 0;
    for _ in 0..5 {
        let n = levels[rng.gen_range(0..levels.len())];
        let rec = reg().record(n, 100).unwrap();
        for a in 0..=6usize {
            for b in 0..=1 {
                let mono = if b == 0 {
                    YLinearPoly::x_pow(a)
                } else {
                    YLinearPoly::new(IntPoly::zero(), IntPoly::monomial(BigInt::from(1), a))
                };
                let s = expand_xy(&mono, &rec, 4).unwrap();
                ok &= reduce_to_xy(&s, &rec).ok() == Some(mono);
                roundtrips += 1;
            }
        }
    }
    parts.push(format!("{roundtrips} monomial round-trips"));

    let mut leads = 0;
    for n in [37u32, 43, 89] {
        let rec = reg().record(n, 600).unwrap();
        for m in [2u32, 3, 5] {
            let s = phi_substituted_series(&rec, m, 2).unwrap();
            let v = s.valuation();
            let want = -2 * sigma1_plus(m) as i64;
            let lead = s.get(want).cloned().unwrap_or_default();
            ok &= v == Some(want) && (lead == BigInt::from(1) || lead == BigInt::from(-1));
            leads += 1;
        }
    }
    parts.push(format!("{leads} leading terms +-q^(-2 sigma1+(m))"));

    let mut factored = 0;
    for _ in 0..FACTOR_TRIALS {
        let prime = [2i64, 3, 5, 7][rng.gen_range(0..4)];
        let fs = [eisenstein(&mut rng, 2, prime), eisenstein(&mut rng, 3, prime), eisenstein(&mut rng, 5, prime)];
        let f = &(&fs[0] * &fs[1]) * &fs[2];
        let fp = factor_over_z(&f);
        let mut got: Vec<String> = fp
            .factors
            .iter()
            .flat_map(|(g, e)| std::iter::repeat(g.to_string()).take(*e as usize))
            .collect();
        let mut want: Vec<String> = fs.iter().map(|g| g.to_string()).collect();
        got.sort();
        want.sort();
        if got == want && fp.expand() == f {
            factored += 1;
        }
    }
    ok &= factored == FACTOR_TRIALS;
    parts.push(format!("{factored}/{FACTOR_TRIALS} products factored back"));

    for res in kept {
        let deg = res.poly.degree().unwrap() as f64;
        let r = root_residual_log10(res);
        ok &= r < -(res.digits as f64 - deg - 4.0);
        parts.push(format!("M(x_j) relative residual 10^{r:.0} at {} digits", res.digits));
    }
    vec![line("10", ok, parts.join("; "))]
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut kept = Vec::new();
    let mut lines = Vec::new();
    let mut report = |ls: Vec<Line>| {
        for l in &ls {
            let tag = match l.tier {
                Tier::Primary => "",
                Tier::Stretch => " (non-blocking)",
            };
            println!("criterion {:<3} {}{tag}: {}", l.id, if l.pass { "PASS" } else { "FAIL" }, l.detail);
        }
        lines.extend(ls);
    };
    report(criterion_1());
    report(criterion_2());
    report(criterion_3());
    report(criterion_4());
    report(criterion_5());
    report(criterion_6());
    report(criterion_7(&mut kept));
    report(criterion_8());
    report(criterion_9());
    report(criterion_10(&kept));

    let mut unexpected = Vec::new();
    for l in lines.iter().filter(|l| l.tier == Tier::Primary) {
        let known = KNOWN_UNATTAINABLE.contains(&l.id);
        if l.pass == known {
            unexpected.push(l.id);
        }
    }
    println!(
        "acceptance: {} blocking criteria, known unattainable {:?}, unexpected outcomes {:?} ({:.0} s)",
        lines.iter().filter(|l| l.tier == Tier::Primary).count(),
        KNOWN_UNATTAINABLE,
        unexpected,
        start.elapsed().as_secs_f64()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
