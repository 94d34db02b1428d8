mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use singinv::arith::is_prime;
use singinv::classfield::{eval_with_growth, heegner_points, minpoly, MinPolyJob};
use singinv::cmeval::{Fx, PrecisionPolicy};
use singinv::curvedata::{
    bootstrap_level, curve_coeffs, fourier_from_parametrization, genus_one_levels, save_record,
    validate_cubic, LevelRegistry,
};
use singinv::fixtures::{self, printed_decimals};
use singinv::genpoly::{factor_over_z, generating_polynomial_for, select_factor_by_root, DEFAULT_TOL};
use singinv::modpoly::{phi_polynomial, pq_for_level, required_order, GUARD};
use singinv::quadforms::{cm_root, raise_height, CMPoint, QuadForm};
use singinv::{Error, IntPoly};

use output::{poly_json, value_json, value_text, OutputEnvelope, Timing};

#[derive(Parser)]
#[command(name = "singinv", version, about = "Singular values of x_N, y_N for the genus-one groups Gamma0(N)+")]
struct Cli {
    /// Print a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Appendix {
    A,
    B,
    C,
    D,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the genus-one levels and their cubics.
    Levels,
    /// P_{m,N} and Q_{m,N}.
    Pq {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        m: u32,
    },
    /// Coefficients of the modular polynomial as p(x) + y q(x).
    Phi {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        m: u32,
    },
    /// Generating polynomial, optionally factored.
    Genpoly {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        factor: bool,
    },
    /// x_N and y_N at a CM point.
    Eval {
        #[arg(long)]
        level: u32,
        /// Evaluate at i sqrt(M/N).
        #[arg(long, conflicts_with = "form", required_unless_present = "form")]
        sqrt: Option<u32>,
        /// Evaluate at the root of a x^2 + b x + c in the upper half plane.
        #[arg(long, value_parser = parse_form)]
        form: Option<QuadForm>,
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
    /// Minimal polynomial of x_N(tau_0) for an imaginary quadratic discriminant.
    Minpoly {
        #[arg(long)]
        level: u32,
        #[arg(long, allow_hyphen_values = true)]
        dk: i64,
        /// Fixed precision; chosen automatically when absent.
        #[arg(long)]
        digits: Option<u32>,
        /// Accept composite levels.
        #[arg(long)]
        force: bool,
    },
    /// Heegner points (x_N, y_N) for every class.
    Heegner {
        #[arg(long)]
        level: u32,
        #[arg(long, allow_hyphen_values = true)]
        dk: i64,
        #[arg(long, default_value_t = 30)]
        digits: u32,
        #[arg(long)]
        force: bool,
    },
    /// Compare against the vendored appendix tables.
    Verify {
        #[arg(long, value_enum, ignore_case = true)]
        appendix: Appendix,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Regenerate and validate the Fourier data of a level.
    Bootstrap {
        #[arg(long)]
        level: u32,
        #[arg(long, default_value_t = 600)]
        order: usize,
        /// Directory for the record file (defaults to $SI_DATA_DIR; nothing is written if neither is set).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_form(s: &str) -> Result<QuadForm, String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [a, b, c] => {
            let f = QuadForm::new(*a, *b, *c);
            if f.is_positive_definite() {
                Ok(f)
            } else {
                Err(format!("[{a},{b},{c}] is not positive definite"))
            }
        }
        _ => Err("expected a,b,c".into()),
    }
}

/// Output of one subcommand.
struct Report {
    inputs: BTreeMap<String, Value>,
    result: Value,
    text: String,
    /// False when a verification found a mismatch.
    ok: bool,
    levels: Vec<u32>,
    fixtures: Option<&'static str>,
}

impl Report {
    fn new(inputs: Value, result: Value, text: String) -> Self {
        let inputs = match inputs {
            Value::Object(m) => m.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        Report { inputs, result, text, ok: true, levels: Vec::new(), fixtures: None }
    }

    fn level(mut self, n: u32) -> Self {
        self.levels.push(n);
        self
    }
}

fn reg() -> &'static LevelRegistry {
    LevelRegistry::global()
}

fn sqrt_point(level: u32, m: u32) -> Result<CMPoint, Error> {
    let n = level as i64;
    CMPoint::new(n, 0, -4 * n * m as i64)
}

fn run(cmd: &Cmd) -> Result<Report, Error> {
    match cmd {
        Cmd::Levels => {
            let mut rows = Vec::new();
            let mut text = String::new();
            for n in genus_one_levels() {
                let (a, b, c, d, e) = curve_coeffs(n)?.as_tuple();
                rows.push(json!({"level": n, "cubic": [a, b, c, d, e], "prime": is_prime(n as u64)}));
                text += &format!(
                    "{n:>4}  y^2 = x^3 + ({a})xy + ({b})x^2 + ({c})y + ({d})x + ({e}){}\n",
                    if is_prime(n as u64) { "  prime" } else { "" }
                );
            }
            Ok(Report::new(json!({}), Value::Array(rows), text))
        }
        Cmd::Pq { level, m } => {
            let (p, q) = pq_for_level(reg(), *level, *m)?;
            let text = format!("P = {}\nQ = {}\n", p.to_tex('x'), q.to_tex('x'));
            Ok(Report::new(json!({"level": level, "m": m}), json!({"p": poly_json(&p), "q": poly_json(&q)}), text)
                .level(*level))
        }
        Cmd::Phi { level, m } => {
            let rec = reg().record(*level, required_order(*m, GUARD))?;
            let phi = phi_polynomial(&rec, *m)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for (j, c) in phi.coeffs.iter().enumerate() {
                text += &format!("X^{j}: ({}) + y ({})\n", c.p.to_tex('x'), c.q.to_tex('x'));
                rows.push(json!({"p": poly_json(&c.p), "q": poly_json(&c.q)}));
            }
            Ok(Report::new(json!({"level": level, "m": m}), json!({"coeffs": rows}), text).level(*level))
        }
        Cmd::Genpoly { level, m, factor } => {
            let r = generating_polynomial_for(reg(), *level, *m)?;
            let mut text = format!("R = {}\n", r.to_tex('x'));
            let mut result = json!({"r": poly_json(&r)});
            if *factor {
                let fp = factor_over_z(&r);
                let rec = reg().record(*level, 600)?;
                let pol = PrecisionPolicy::new(40)?;
                let x = eval_with_growth(reg(), rec.level, &sqrt_point(*level, *m)?, &pol, false)?;
                let chosen = select_factor_by_root(&fp, &x.value, DEFAULT_TOL)?;
                let factors: Vec<Value> = fp
                    .factors
                    .iter()
                    .map(|(g, e)| json!({"poly": poly_json(g), "multiplicity": e}))
                    .collect();
                for (g, e) in &fp.factors {
                    let mark = if *g == chosen { "  <- x_N(i sqrt(m/N))" } else { "" };
                    text += &format!("  ({})^{e}{mark}\n", g.to_tex('x'));
                }
                result["content"] = Value::String(fp.content.to_string());
                result["factors"] = Value::Array(factors);
                result["selected"] = poly_json(&chosen);
            }
            Ok(Report::new(json!({"level": level, "m": m, "factor": factor}), result, text).level(*level))
        }
        Cmd::Eval { level, sqrt, form, digits } => {
            let pol = PrecisionPolicy::new(*digits)?;
            let pt = match (sqrt, form) {
                (Some(m), _) => sqrt_point(*level, *m)?,
                (None, Some(f)) => raise_height(cm_root(*f)?, *level as i64),
                (None, None) => unreachable!("clap requires one of --sqrt, --form"),
            };
            curve_coeffs(*level)?;
            let x = eval_with_growth(reg(), *level, &pt, &pol, false)?;
            let y = eval_with_growth(reg(), *level, &pt, &pol, true)?;
            let text = format!("tau = {:.6} + {:.6}i\nx = {}\ny = {}\n", pt.re() + 0.0, pt.im(), value_text(&x, *digits), value_text(&y, *digits));
            let inputs = json!({"level": level, "sqrt": sqrt, "form": form.map(|f| [f.a, f.b, f.c]), "digits": digits});
            let result = json!({"point": [pt.a, pt.b, pt.d], "x": value_json(&x, *digits), "y": value_json(&y, *digits)});
            Ok(Report::new(inputs, result, text).level(*level))
        }
        Cmd::Minpoly { level, dk, digits, force } => {
            let job = MinPolyJob { level: *level, dk: *dk, digits: *digits, force: *force };
            if *force && !is_prime(*level as u64) {
                eprintln!("warning: N={level} is composite; the result is not covered by the prime-level theory");
            }
            let res = minpoly(reg(), &job)?;
            let text = format!(
                "M(X) = {}\ndegree {}, slack {:.2e}, {} digits, {} escalations\n",
                res.poly.to_tex('X'),
                res.poly.degree().unwrap_or(0),
                res.slack,
                res.digits,
                res.escalations
            );
            let result = json!({
                "poly": poly_json(&res.poly),
                "degree": res.poly.degree(),
                "slack": res.slack,
                "digits": res.digits,
                "escalations": res.escalations,
            });
            Ok(Report::new(json!({"level": level, "dk": dk, "digits": digits, "force": force}), result, text).level(*level))
        }
        Cmd::Heegner { level, dk, digits, force } => {
            let pts = heegner_points(reg(), *level, *dk, *digits, *force)?;
            let shown = (*digits).min(30);
            let mut text = String::new();
            let mut rows = Vec::new();
            for h in &pts {
                text += &format!(
                    "{}\n  x = {}\n  y = {}\n  residual {:.1e}\n",
                    h.form,
                    h.x.value.to_decimal(shown),
                    h.y.value.to_decimal(shown),
                    h.residual
                );
                rows.push(json!({
                    "form": [h.form.a, h.form.b, h.form.c],
                    "x": value_json(&h.x, *digits),
                    "y": value_json(&h.y, *digits),
                    "residual": format!("{:e}", h.residual),
                }));
            }
            Ok(Report::new(json!({"level": level, "dk": dk, "digits": digits}), Value::Array(rows), text).level(*level))
        }
        Cmd::Verify { appendix, level, m } => verify(*appendix, *level, *m),
        Cmd::Bootstrap { level, order, out } => bootstrap(*level, *order, out.clone()),
    }
}

/// One compared fixture entry.
struct Check {
    label: String,
    ok: bool,
    detail: String,
}

fn keep(level: Option<u32>, m: Option<i64>, l: u32, k: i64) -> bool {
    level.map_or(true, |x| x == l) && m.map_or(true, |x| x == k)
}

/// Coefficients where two polynomials disagree.
fn poly_diff(want: &IntPoly, got: &IntPoly) -> String {
    let n = want.coeffs().len().max(got.coeffs().len());
    let rows: Vec<String> = (0..n)
        .filter(|&k| want.coeff(k) != got.coeff(k))
        .map(|k| format!("x^{k}: expected {}, got {}", want.coeff(k), got.coeff(k)))
        .collect();
    rows.join("\n    ")
}

fn verify(appendix: Appendix, level: Option<u32>, m: Option<u32>) -> Result<Report, Error> {
    let mi = m.map(|v| v as i64);
    let diff = poly_diff;
    let checks: Vec<Result<Check, Error>> = match appendix {
        Appendix::A => fixtures::appendix_a()?
            .into_par_iter()
            .filter(|e| keep(level, mi, e.level, e.m as i64))
            .map(|e| {
                let (p, q) = pq_for_level(reg(), e.level, e.m)?;
                let ok = p == e.p && q == e.q;
                let detail = if ok { String::new() } else { format!("P {}\n    Q {}", diff(&e.p, &p), diff(&e.q, &q)) };
                Ok(Check { label: format!("N={} m={}", e.level, e.m), ok, detail })
            })
            .collect(),
        Appendix::B => fixtures::appendix_b()?
            .into_par_iter()
            .filter(|e| keep(level, mi, e.level, e.m as i64))
            .map(|e| {
                let r = generating_polynomial_for(reg(), e.level, e.m)?;
                let ok = r == e.r;
                Ok(Check { label: format!("N={} m={}", e.level, e.m), ok, detail: if ok { String::new() } else { diff(&e.r, &r) } })
            })
            .collect(),
        Appendix::C => fixtures::appendix_c()?
            .into_par_iter()
            .filter(|e| keep(level, mi, e.level, e.m as i64))
            .map(|e| {
                let pol = PrecisionPolicy::new(30)?;
                let pt = sqrt_point(e.level, e.m)?;
                let x = eval_with_growth(reg(), e.level, &pt, &pol, false)?;
                let y = eval_with_growth(reg(), e.level, &pt, &pol, true)?;
                let mut ok = true;
                let mut detail = String::new();
                for (name, printed, got) in [("x", &e.x, &x), ("y", &e.y, &y)] {
                    let places = printed_decimals(printed).saturating_sub(2) as u32;
                    let want = Fx::parse_decimal(printed, got.value.prec())?;
                    let d = got.value.re.sub(&want).abs().to_f64();
                    if d > 10f64.powi(-(places as i32)) || got.value.im.abs().to_f64() > 10f64.powi(-(places as i32)) {
                        ok = false;
                        detail += &format!("{name}: printed {printed}, computed {}\n    ", got.value.to_decimal(places + 2));
                    }
                }
                Ok(Check { label: format!("N={} m={}", e.level, e.m), ok, detail: detail.trim_end().to_string() })
            })
            .collect(),
        Appendix::D => fixtures::appendix_d()?
            .into_iter()
            .filter(|e| level.map_or(true, |x| x == e.level))
            .map(|e| {
                let job = MinPolyJob { level: e.level, dk: e.dk, digits: None, force: false };
                let res = minpoly(reg(), &job)?;
                let ok = res.poly == e.poly;
                let detail = if ok { String::new() } else { diff(&e.poly, &res.poly) };
                Ok(Check { label: format!("N={} dK={}", e.level, e.dk), ok, detail })
            })
            .collect(),
    };
    let checks = checks.into_iter().collect::<Result<Vec<_>, _>>()?;
    if checks.is_empty() {
        return Err(Error::Precondition("no fixture entries match the filter".into()));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for c in &checks {
        text += &format!("{:<16} {}\n", c.label, if c.ok { "ok" } else { "MISMATCH" });
        if !c.ok {
            text += &format!("    {}\n", c.detail);
        }
        rows.push(json!({"entry": c.label, "ok": c.ok, "detail": c.detail}));
    }
    let failed = checks.iter().filter(|c| !c.ok).count();
    text += &format!("{} of {} entries match\n", checks.len() - failed, checks.len());
    let name = ["A", "B", "C", "D"][appendix as usize];
    let mut rep = Report::new(json!({"appendix": name, "level": level, "m": m}), json!({"entries": rows, "mismatches": failed}), text);
    rep.ok = failed == 0;
    rep.fixtures = Some(match appendix {
        Appendix::A => "appendixA",
        Appendix::B => "appendixB",
        Appendix::C => "appendixC",
        Appendix::D => "appendixD",
    });
    Ok(rep)
}

fn bootstrap(level: u32, order: usize, out: Option<PathBuf>) -> Result<Report, Error> {
    let cubic = curve_coeffs(level)?;
    let rec = fourier_from_parametrization(level, &cubic, order)?;
    let chk = validate_cubic(&rec);
    let a = fixtures::appendix_a()?;
    let b = fixtures::appendix_b()?;
    let data: Vec<_> = a
        .iter()
        .filter(|e| e.level == level)
        .filter_map(|e| {
            b.iter()
                .find(|r| r.level == level && r.m == e.m)
                .map(|r| (e.m, e.p.clone(), e.q.clone(), r.r.clone()))
        })
        .collect();
    let solved = if data.is_empty() { None } else { Some(bootstrap_level(&data)?) };
    let agrees = solved.map_or(true, |c| c == cubic);
    let dir = out.or_else(|| std::env::var_os("SI_DATA_DIR").map(PathBuf::from));
    let saved = match &dir {
        Some(d) if chk.ok => {
            std::fs::create_dir_all(d)?;
            let path = LevelRegistry::record_path(d, level);
            save_record(&path, &rec)?;
            Some(path)
        }
        _ => None,
    };
    let (ca, cb, cc, cd, ce) = cubic.as_tuple();
    let mut text = format!(
        "N={level} order {order}: cubic relation {} through q^{}\n",
        if chk.ok { "holds" } else { "FAILS" },
        chk.checked_through
    );
    if let Some(c) = solved {
        let (a2, b2, c2, d2, e2) = c.as_tuple();
        text += &format!(
            "appendix solve ({} pairs): ({a2}, {b2}, {c2}, {d2}, {e2}) {} table ({ca}, {cb}, {cc}, {cd}, {ce})\n",
            data.len(),
            if agrees { "matches" } else { "DIFFERS FROM" }
        );
    }
    if let Some(p) = &saved {
        text += &format!("wrote {}\n", p.display());
    }
    let result = json!({
        "valid": chk.ok,
        "checked_through": chk.checked_through,
        "first_failure": chk.first_failure,
        "cubic": [ca, cb, cc, cd, ce],
        "solved_cubic": solved.map(|c| { let t = c.as_tuple(); [t.0, t.1, t.2, t.3, t.4] }),
        "pairs": data.len(),
        "saved": saved.map(|p| p.display().to_string()),
    });
    let mut rep = Report::new(json!({"level": level, "order": order}), result, text);
    rep.ok = chk.ok && agrees;
    rep.fixtures = Some("appendixA+appendixB");
    Ok(rep)
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Precondition(_) | Error::UnknownLevel(_) | Error::Parse(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = match &cli.cmd {
        Cmd::Levels => "levels",
        Cmd::Pq { .. } => "pq",
        Cmd::Phi { .. } => "phi",
        Cmd::Genpoly { .. } => "genpoly",
        Cmd::Eval { .. } => "eval",
        Cmd::Minpoly { .. } => "minpoly",
        Cmd::Heegner { .. } => "heegner",
        Cmd::Verify { .. } => "verify",
        Cmd::Bootstrap { .. } => "bootstrap",
    };
    let start = Instant::now();
    let rep = match run(&cli.cmd) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    if cli.json {
        let mut provenance = BTreeMap::new();
        for n in &rep.levels {
            if let Ok((_, p)) = reg().record_with_provenance(*n, 0) {
                provenance.insert(format!("record N={n}"), p.as_str().to_string());
            }
        }
        if let Some(f) = rep.fixtures {
            provenance.insert("fixtures".into(), format!("{}/{f}", fixtures::fixture_dir().display()));
        }
        let env = OutputEnvelope {
            command: name.into(),
            inputs: rep.inputs,
            result: rep.result,
            timing: Timing { seconds: start.elapsed().as_secs_f64() },
            provenance,
        };
        println!("{}", serde_json::to_string_pretty(&env).expect("serializable envelope"));
    } else {
        print!("{}", rep.text);
    }
    if rep.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
