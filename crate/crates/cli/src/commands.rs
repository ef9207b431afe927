//! Subcommand implementations. Everything user-visible goes through explicit
//! formatting (exact rationals, fixed significant digits, or shortest-f64),
//! so repeated runs print identical bytes; wall-clock lines are the one
//! exception and --reproducible drops them.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use frobeval_core::estimator::{curve_from_profile, predict_max_term, predict_num_terms};
use frobeval_core::frobenius::{analyze, EvalOptions, SeriesSolution, SolutionChoice, SolutionSet};
use frobeval_core::legendre::binomial_demo;
use frobeval_core::numerics::{parse_number, plan_precision, ArbComplex, CRat, Rat};
use frobeval_core::ode::{
    parse_problem, CanonicalProblem, IndicialKind, LoadedProblem, ODEProblem, OriginKind, Poly,
};
use frobeval_core::wkb::{s_profile, ProfileOptions, WkbProfile};
use frobeval_core::{Error, Result};
use num::bigint::BigInt;
use num::complex::Complex64;
use num::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

pub struct Ctx {
    pub json: bool,
    pub reproducible: bool,
    pub jobs: usize,
}

// ---------------------------------------------------------------- input

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf).map_err(|e| {
            Error::Parse { what: "stdin".into(), detail: e.to_string() }
        })?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse {
            what: format!("problem file {}", path.display()),
            detail: e.to_string(),
        })
    }
}

fn load(path: &Path) -> Result<LoadedProblem> {
    parse_problem(&read_input(path)?)
}

/// `re` or `re,im`, each part an integer, fraction, or decimal.
fn parse_complex(s: &str) -> Result<CRat> {
    match s.split_once(',') {
        Some((re, im)) => Ok(CRat::new(parse_number(re)?, parse_number(im)?)),
        None => Ok(CRat::new(parse_number(s)?, Rat::zero())),
    }
}

/// `a0;a1` with complex parts.
fn parse_init(s: &str) -> Result<(CRat, CRat)> {
    let Some((a0, a1)) = s.split_once(';') else {
        return Err(Error::Parse {
            what: "initial data".into(),
            detail: format!("expected a0;a1, got {s:?}"),
        });
    };
    Ok((parse_complex(a0)?, parse_complex(a1)?))
}

/// Semicolon-separated waypoints, with the final target appended.
fn parse_path(s: &str, target: &CRat) -> Result<Vec<CRat>> {
    let mut pts = Vec::new();
    for part in s.split(';') {
        if part.trim().is_empty() {
            continue;
        }
        pts.push(parse_complex(part)?);
    }
    if pts.is_empty() {
        return Err(Error::InvalidInput("continuation path has no points".into()));
    }
    pts.push(target.clone());
    Ok(pts)
}

/// `lo:hi:count` into an evenly spaced grid.
fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = |detail: String| Error::Parse { what: "grid".into(), detail };
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(bad(format!("expected lo:hi:count, got {s:?}")));
    };
    let lo: f64 = lo.trim().parse().map_err(|e| bad(format!("lo: {e}")))?;
    let hi: f64 = hi.trim().parse().map_err(|e| bad(format!("hi: {e}")))?;
    let n: usize = count.trim().parse().map_err(|e| bad(format!("count: {e}")))?;
    if !lo.is_finite() || !hi.is_finite() {
        return Err(bad("endpoints must be finite".into()));
    }
    if n < 2 {
        return Err(bad("count must be at least 2".into()));
    }
    if hi <= lo {
        return Err(bad("hi must exceed lo".into()));
    }
    Ok(uniform(lo, hi, n))
}

fn parse_positive_real(s: &str) -> Result<f64> {
    let x = parse_number(s)?.to_f64().unwrap_or(f64::NAN);
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput(format!(
            "evaluation point must be positive and finite, got {s}"
        )));
    }
    Ok(x)
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + h * i as f64).collect()
}

/// Resolve which series the user asked for, plus a short label describing it.
fn pick_solution(
    set: &SolutionSet,
    choice: Option<&str>,
    init: Option<&str>,
) -> Result<(SeriesSolution, String)> {
    match set.origin() {
        OriginKind::Irregular => Err(Error::IrregularSingularPoint),
        OriginKind::Ordinary => {
            if choice.is_some() {
                return Err(Error::InvalidInput(
                    "--solution selects a branch at a singular origin; this origin is \
                     ordinary, use --init"
                        .into(),
                ));
            }
            let init = match init {
                Some(s) => parse_init(s)?,
                None => (CRat::one(), CRat::one()),
            };
            let label =
                format!("taylor a0={}, a1={}", crat_string(&init.0), crat_string(&init.1));
            Ok((set.taylor(init)?, label))
        }
        _ => {
            if init.is_some() {
                return Err(Error::InvalidInput(
                    "--init fixes a Taylor solution at an ordinary origin; this origin is \
                     singular, use --solution"
                        .into(),
                ));
            }
            let name = choice.unwrap_or("nu1");
            let sol = set.frobenius(SolutionChoice::parse(name)?)?;
            let log = if sol.has_log() { ", with log term" } else { "" };
            let label = format!("{name} (nu = {}{log})", sol.nu());
            Ok((sol, label))
        }
    }
}

// ------------------------------------------------------------- formatting

fn crat_string(z: &CRat) -> String {
    if z.im.is_zero() {
        z.re.to_string()
    } else {
        format!("{},{}", z.re, z.im)
    }
}

fn radius_string(r: f64) -> String {
    if r.is_finite() {
        format!("{r}")
    } else {
        "inf".to_string()
    }
}

fn complex_text(v: &ArbComplex, sig: usize) -> String {
    if v.im.is_zero() {
        v.re.to_decimal(sig)
    } else {
        format!("{}, {}", v.re.to_decimal(sig), v.im.to_decimal(sig))
    }
}

fn complex_json(v: &ArbComplex, sig: usize) -> Value {
    json!({ "re": v.re.to_decimal(sig), "im": v.im.to_decimal(sig) })
}

fn complex_json_exact(z: &CRat) -> Value {
    json!({ "re": z.re.to_string(), "im": z.im.to_string() })
}

fn emit_json(command: &str, result: Value) {
    let envelope = json!({
        "schema_version": "1",
        "command": command,
        "result": result,
    });
    println!("{}", serde_json::to_string_pretty(&envelope).expect("serializable"));
}

fn insert(result: &mut Value, key: &str, v: Value) {
    result.as_object_mut().expect("result is an object").insert(key.into(), v);
}

// ------------------------------------------------------------- commands

pub fn classify(ctx: &Ctx, file: &Path) -> Result<()> {
    let lp = load(file)?;
    let set = analyze(&lp.ode)?;
    let origin = set.origin();
    let radius = radius_string(lp.ode.radius_at(Complex64::new(0.0, 0.0)));

    let mut result = json!({ "origin": origin.as_str(), "radius": radius });
    let mut lines = vec![
        format!("origin: {}", origin.as_str()),
        format!("radius: {radius}"),
    ];
    if let Some(roots) = set.roots() {
        let log2 = set.frobenius(SolutionChoice::Nu2)?.has_log();
        insert(&mut result, "nu1", json!(roots.nu1.to_string()));
        insert(&mut result, "nu2", json!(roots.nu2.to_string()));
        insert(&mut result, "case", json!(roots.kind.as_str()));
        lines.push(format!("nu1: {}", roots.nu1));
        lines.push(format!("nu2: {}", roots.nu2));
        lines.push(format!("case: {}", roots.kind.as_str()));
        if let IndicialKind::IntegerDiff(ell) = roots.kind {
            insert(&mut result, "ell", json!(ell));
            lines.push(format!("ell: {ell}"));
        }
        insert(&mut result, "log_second_solution", json!(log2));
        lines.push(format!("log_second_solution: {log2}"));
    }
    if ctx.json {
        emit_json("classify", result);
    } else {
        for line in &lines {
            println!("{line}");
        }
    }
    if origin == OriginKind::Irregular {
        return Err(Error::IrregularSingularPoint);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn solve(
    ctx: &Ctx,
    file: &Path,
    at: &str,
    precision: u32,
    solution: Option<&str>,
    init: Option<&str>,
    path: Option<&str>,
) -> Result<()> {
    let t0 = Instant::now();
    if precision < 1 {
        return Err(Error::InvalidPrecision);
    }
    let lp = load(file)?;
    let set = analyze(&lp.ode)?;
    let (sol, label) = pick_solution(&set, solution, init)?;
    let z = parse_complex(at)?;
    let opts = EvalOptions::with_digits(precision);
    let sig = precision as usize;

    match path {
        None => {
            let res = sol.evaluate(&z, &opts)?;
            let wall = t0.elapsed().as_millis() as u64;
            if ctx.json {
                let mut result = json!({
                    "at": complex_json_exact(&z),
                    "precision": precision,
                    "solution": label,
                    "value": complex_json(&res.value, sig),
                    "derivative": complex_json(&res.derivative, sig),
                    "terms_used": res.terms_used,
                    "max_term_log10": res.max_term_log10,
                    "achieved_digits": res.achieved_digits,
                });
                if !ctx.reproducible {
                    insert(&mut result, "wall_ms", json!(wall));
                }
                emit_json("solve", result);
            } else {
                println!("solution: {label}");
                println!("at: {}", crat_string(&z));
                println!("precision: {precision}");
                println!("value: {}", complex_text(&res.value, sig));
                println!("derivative: {}", complex_text(&res.derivative, sig));
                println!("terms_used: {}", res.terms_used);
                println!("max_term_log10: {:.3}", res.max_term_log10);
                println!("achieved_digits: {:.1}", res.achieved_digits);
                if !ctx.reproducible {
                    println!("wall_ms: {wall}");
                }
            }
        }
        Some(spec) => {
            let pts = parse_path(spec, &z)?;
            let res = sol.continue_along(&pts, &opts)?;
            let last = res.last();
            let total: usize = res.steps.iter().map(|s| s.terms_used).sum();
            let wall = t0.elapsed().as_millis() as u64;
            if ctx.json {
                let steps: Vec<Value> = res
                    .steps
                    .iter()
                    .map(|s| json!({ "at": complex_json_exact(&s.at), "terms_used": s.terms_used }))
                    .collect();
                let mut result = json!({
                    "at": complex_json_exact(&z),
                    "precision": precision,
                    "solution": label,
                    "value": complex_json(&last.value, sig),
                    "derivative": complex_json(&last.derivative, sig),
                    "terms_used": total,
                    "steps": steps,
                    "step_digits": res.step_digits,
                });
                if !ctx.reproducible {
                    insert(&mut result, "wall_ms", json!(wall));
                }
                emit_json("solve", result);
            } else {
                println!("solution: {label}");
                println!(
                    "path: {}",
                    pts.iter().map(crat_string).collect::<Vec<_>>().join(" -> ")
                );
                println!("precision: {precision}");
                println!("value: {}", complex_text(&last.value, sig));
                println!("derivative: {}", complex_text(&last.derivative, sig));
                for (i, s) in res.steps.iter().enumerate() {
                    println!("step {}: at {}, terms {}", i + 1, crat_string(&s.at), s.terms_used);
                }
                println!("step_digits: {}", res.step_digits);
                if !ctx.reproducible {
                    println!("wall_ms: {wall}");
                }
            }
        }
    }
    Ok(())
}

pub fn coeffs(
    ctx: &Ctx,
    file: &Path,
    count: usize,
    solution: Option<&str>,
    init: Option<&str>,
    precision: u32,
) -> Result<()> {
    if precision < 1 {
        return Err(Error::InvalidPrecision);
    }
    let lp = load(file)?;
    let set = analyze(&lp.ode)?;
    let (sol, _) = pick_solution(&set, solution, init)?;

    // exact rational output when the indicial root allows it, decimal
    // fallback otherwise
    let rows: Vec<[String; 4]> = match sol.coefficients::<CRat>((), count) {
        Ok(pairs) => pairs
            .iter()
            .map(|(a, b)| {
                [a.re.to_string(), a.im.to_string(), b.re.to_string(), b.im.to_string()]
            })
            .collect(),
        Err(Error::InvalidInput(_)) => {
            let plan = plan_precision(precision, 0.0)?;
            let sig = precision as usize;
            sol.coefficients::<ArbComplex>(plan.working_bits, count)?
                .iter()
                .map(|(a, b)| {
                    [
                        a.re.to_decimal(sig),
                        a.im.to_decimal(sig),
                        b.re.to_decimal(sig),
                        b.im.to_decimal(sig),
                    ]
                })
                .collect()
        }
        Err(e) => return Err(e),
    };

    if ctx.json {
        let rows: Vec<Value> = rows.iter().map(|r| json!([r[0], r[1], r[2], r[3]])).collect();
        emit_json("coeffs", json!({ "columns": ["a_re", "a_im", "b_re", "b_im"], "rows": rows }));
    } else {
        println!("m,a_re,a_im,b_re,b_im");
        for (m, r) in rows.iter().enumerate() {
            println!("{m},{},{},{},{}", r[0], r[1], r[2], r[3]);
        }
    }
    Ok(())
}

fn squared_opts() -> ProfileOptions {
    ProfileOptions { squared_variable: true, ..ProfileOptions::default() }
}

fn require_canonical(lp: &LoadedProblem) -> Result<&CanonicalProblem> {
    lp.canonical.as_ref().ok_or_else(|| {
        Error::InvalidInput(
            "this command needs the normal-form potential; provide a problem file with a \
             \"canonical\" block"
                .into(),
        )
    })
}

pub fn estimate(ctx: &Ctx, file: &Path, at: &str, precision: u32, solution: &str) -> Result<()> {
    let t0 = Instant::now();
    if precision < 1 {
        return Err(Error::InvalidPrecision);
    }
    let lp = load(file)?;
    let cp = require_canonical(&lp)?;
    let x = parse_positive_real(at)?;
    let choice = SolutionChoice::parse(solution)?;
    // the coefficient law covers pure power series; a log companion has no
    // single power law to transform
    if choice == SolutionChoice::Log {
        return Err(Error::LogSeriesUnsupported);
    }
    // a singular origin can force a log into the subdominant series; let the
    // recursion decide. An ordinary origin never grows one.
    let set = analyze(&lp.ode)?;
    if set.roots().is_some() && set.frobenius(choice)?.has_log() {
        return Err(Error::LogSeriesUnsupported);
    }
    // the growth profile lives on circles of the squared variable, where the
    // series carries one term per two powers of the original one; the normal
    // form's index offset halves with it
    let nu_y = match choice {
        SolutionChoice::Nu1 => &cp.nu_plus,
        _ => &cp.nu_minus,
    };
    let nu = nu_y
        .to_f64()
        .filter(|t| t.is_finite())
        .ok_or_else(|| Error::InvalidInput("indicial root overflows f64".into()))?
        / 2.0;

    let lnx = x.ln();
    let h = 0.02;
    let mut lo = lnx - 2.0;
    let mut hi = lnx + 1.0;
    let (terms, m_bar, log10_max) = loop {
        let n = ((hi - lo) / h).round() as usize + 1;
        let profile = s_profile(cp, &uniform(lo, hi, n), &squared_opts())?;
        let outcome = curve_from_profile(&profile, nu).and_then(|curve| {
            let m = predict_num_terms(&curve, x, precision)?;
            let crest = predict_max_term(&curve, x)?;
            Ok((m, crest))
        });
        match outcome {
            Ok((m, (m_bar, log10_max))) => break (m, m_bar, log10_max),
            // a flat left edge is the power-law region near the origin; it
            // carries no coefficient law, so anchor the window higher
            Err(Error::ProfileNotConvex { index }) if index < n / 2 && lnx - lo >= 1.0 => {
                lo += 0.5
            }
            // stopping point beyond the tabulated window; widen and retry
            Err(Error::CriterionUnreachable) if hi - lnx < 15.0 => hi += 1.0,
            Err(e) => return Err(e),
        }
    };
    let wall = t0.elapsed().as_millis() as u64;

    if ctx.json {
        let mut result = json!({
            "at": x,
            "precision": precision,
            "solution": solution,
            "m_bar": m_bar,
            "log10_max_term": log10_max,
            "terms_needed": terms,
        });
        if !ctx.reproducible {
            insert(&mut result, "wall_ms", json!(wall));
        }
        emit_json("estimate", result);
    } else {
        println!("at: {x}");
        println!("precision: {precision}");
        println!("solution: {solution}");
        println!("m_bar: {m_bar:.1}");
        println!("log10_max_term: {log10_max:.2}");
        println!("terms_needed: {terms}");
        if !ctx.reproducible {
            println!("wall_ms: {wall}");
        }
    }
    Ok(())
}

/// Split the grid across a worker pool; every point is computed independently
/// of its neighbours, so chunked evaluation reproduces the sequential output.
fn profile_parallel(
    jobs: usize,
    cp: &CanonicalProblem,
    grid: &[f64],
    opts: &ProfileOptions,
) -> Result<WkbProfile> {
    if jobs <= 1 || grid.len() < 2 * jobs {
        return s_profile(cp, grid, opts);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
    let chunk = grid.len().div_ceil(jobs);
    let parts: Vec<Result<WkbProfile>> = pool.install(|| {
        use rayon::prelude::*;
        grid.par_chunks(chunk).map(|c| s_profile(cp, c, opts)).collect()
    });
    let mut out =
        WkbProfile { u: Vec::new(), s: Vec::new(), phi_star: Vec::new(), branch: Vec::new() };
    for part in parts {
        let p = part?;
        out.u.extend_from_slice(&p.u);
        out.s.extend_from_slice(&p.s);
        out.phi_star.extend_from_slice(&p.phi_star);
        out.branch.extend_from_slice(&p.branch);
    }
    Ok(out)
}

pub fn profile(ctx: &Ctx, file: &Path, u: &str, y_variable: bool) -> Result<()> {
    let lp = load(file)?;
    let cp = require_canonical(&lp)?;
    let grid = parse_grid(u)?;
    let opts = ProfileOptions { squared_variable: !y_variable, ..ProfileOptions::default() };
    let prof = profile_parallel(ctx.jobs, cp, &grid, &opts)?;

    if ctx.json {
        let rows: Vec<Value> = (0..prof.u.len())
            .map(|i| json!([prof.u[i], prof.s[i], prof.phi_star[i], prof.branch[i]]))
            .collect();
        emit_json("profile", json!({ "columns": ["u", "S", "phi_star", "branch"], "rows": rows }));
    } else {
        println!("u,S,phi_star,branch");
        for i in 0..prof.u.len() {
            println!("{},{},{},{}", prof.u[i], prof.s[i], prof.phi_star[i], prof.branch[i]);
        }
    }
    Ok(())
}

pub fn demo_binomial(ctx: &Ctx, n: u32) -> Result<()> {
    let rows = binomial_demo(n)?;
    if ctx.json {
        let rows: Vec<Value> =
            rows.iter().map(|r| json!([r.x, r.exact, r.legendre, r.stirling])).collect();
        emit_json(
            "demo-binomial",
            json!({ "columns": ["x", "exact", "legendre", "stirling"], "rows": rows }),
        );
    } else {
        println!("x,exact,legendre,stirling");
        for r in &rows {
            println!("{:.0},{:.6},{:.6},{:.6}", r.x, r.exact, r.legendre, r.stirling);
        }
    }
    Ok(())
}

// ------------------------------------------------------------- validate

fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn v_err(e: Error) -> String {
    e.to_string()
}

fn exponential_ode() -> std::result::Result<ODEProblem, String> {
    ODEProblem::new(
        Poly::from_integers(&[1]),
        Poly::from_integers(&[0]),
        Poly::from_integers(&[-1]),
    )
    .map_err(v_err)
}

fn cylinder_ode() -> std::result::Result<ODEProblem, String> {
    ODEProblem::new(
        Poly::from_integers(&[0, 0, 1]),
        Poly::from_integers(&[0, 1]),
        Poly::from_integers(&[0, 0, 1]),
    )
    .map_err(v_err)
}

/// Relative gap |got - want| / |want| as a log10, from exact-rational want.
fn rel_gap_log10(got: &ArbComplex, want: &Rat) -> f64 {
    let w = ArbComplex::from_rational_pair(want, &Rat::zero(), got.precision());
    got.sub(&w).log10_abs() - w.log10_abs()
}

fn check_exp_ordinary() -> std::result::Result<(), String> {
    let set = analyze(&exponential_ode()?).map_err(v_err)?;
    if set.origin() != OriginKind::Ordinary {
        return Err(format!("classified as {}", set.origin().as_str()));
    }
    Ok(())
}

fn check_cylinder_degenerate() -> std::result::Result<(), String> {
    let set = analyze(&cylinder_ode()?).map_err(v_err)?;
    let Some(roots) = set.roots() else {
        return Err(format!("no indicial roots, origin {}", set.origin().as_str()));
    };
    if roots.kind != IndicialKind::Degenerate {
        return Err(format!("case {}", roots.kind.as_str()));
    }
    if !roots.nu1.is_zero() {
        return Err(format!("nu1 = {}", roots.nu1));
    }
    Ok(())
}

fn check_canonical_roots() -> std::result::Result<(), String> {
    // a 1/z term in the potential keeps the origin singular with the
    // normal form's own indices, and obstructs the subdominant series
    let cp = CanonicalProblem {
        nu_plus: Rat::one(),
        nu_minus: Rat::zero(),
        v: vec![Rat::one()],
        s: Rat::one(),
    };
    let set = analyze(&cp.to_ode()).map_err(v_err)?;
    let Some(roots) = set.roots() else {
        return Err(format!("no indicial roots, origin {}", set.origin().as_str()));
    };
    if roots.kind != IndicialKind::IntegerDiff(1) {
        return Err(format!("case {}", roots.kind.as_str()));
    }
    if roots.nu1.to_string() != "1" || roots.nu2.to_string() != "0" {
        return Err(format!("roots {{{}, {}}}", roots.nu1, roots.nu2));
    }
    if !set.frobenius(SolutionChoice::Nu2).map_err(v_err)?.has_log() {
        return Err("obstructed integer gap should carry a log".into());
    }
    // dropping the 1/z term smooths the origin out entirely
    let quartic = analyze(&CanonicalProblem::anharmonic(&Rat::zero()).to_ode()).map_err(v_err)?;
    if quartic.roots().is_some() {
        return Err(format!("quartic origin {}", quartic.origin().as_str()));
    }
    Ok(())
}

fn check_exp_value() -> std::result::Result<(), String> {
    let set = analyze(&exponential_ode()?).map_err(v_err)?;
    let sol = set.taylor((CRat::one(), CRat::one())).map_err(v_err)?;
    let res = sol.evaluate(&CRat::one(), &EvalOptions::with_digits(100)).map_err(v_err)?;
    // sum_{k<140} 1/k!, exact; the tail is far below the comparison floor
    let mut sum = Rat::zero();
    let mut term = Rat::one();
    for k in 0..140i64 {
        sum += &term;
        term /= rat_int(k + 1);
    }
    let gap = rel_gap_log10(&res.value, &sum);
    if gap > -95.0 {
        return Err(format!("relative gap 1e{gap:.1}"));
    }
    Ok(())
}

fn check_cylinder_value() -> std::result::Result<(), String> {
    let set = analyze(&cylinder_ode()?).map_err(v_err)?;
    let sol = set.frobenius(SolutionChoice::Nu1).map_err(v_err)?;
    let res = sol.evaluate(&CRat::one(), &EvalOptions::with_digits(100)).map_err(v_err)?;
    // sum_{k<60} (-1/4)^k / (k!)^2, exact
    let mut sum = Rat::zero();
    let mut term = Rat::one();
    for k in 0..60i64 {
        sum += &term;
        term = term * Rat::new(BigInt::from(-1), BigInt::from(4)) / rat_int((k + 1) * (k + 1));
    }
    let gap = rel_gap_log10(&res.value, &sum);
    if gap > -95.0 {
        return Err(format!("relative gap 1e{gap:.1}"));
    }
    Ok(())
}

fn check_continuation() -> std::result::Result<(), String> {
    let set = analyze(&exponential_ode()?).map_err(v_err)?;
    let sol = set.taylor((CRat::one(), CRat::one())).map_err(v_err)?;
    let two = CRat::new(rat_int(2), Rat::zero());
    let path = [CRat::one(), two];
    let res = sol.continue_along(&path, &EvalOptions::with_digits(60)).map_err(v_err)?;
    // sum_{k<150} 2^k / k!, exact
    let mut sum = Rat::zero();
    let mut term = Rat::one();
    for k in 0..150i64 {
        sum += &term;
        term = term * rat_int(2) / rat_int(k + 1);
    }
    let gap = rel_gap_log10(&res.last().value, &sum);
    if gap > -55.0 {
        return Err(format!("relative gap 1e{gap:.1}"));
    }
    Ok(())
}

fn check_demo_rows() -> std::result::Result<(), String> {
    let rows = binomial_demo(10).map_err(v_err)?;
    let mid = &rows[5];
    if (mid.legendre - 0.252313).abs() > 1e-6 {
        return Err(format!("legendre mass at 5 tosses = {}", mid.legendre));
    }
    if rows[0].stirling != 0.0 {
        return Err(format!("stirling mass at 0 tosses = {}", rows[0].stirling));
    }
    let rows = binomial_demo(50).map_err(v_err)?;
    let mid = &rows[25];
    let rel = (mid.legendre / mid.exact - 1.0).abs();
    if rel > 0.02 {
        return Err(format!("center relative error {rel:.4}"));
    }
    Ok(())
}

fn check_profile_point() -> std::result::Result<(), String> {
    let cp = CanonicalProblem::anharmonic(&Rat::zero());
    let prof = s_profile(&cp, &uniform(2.5, 3.5, 11), &squared_opts()).map_err(v_err)?;
    let want = (4.5f64).exp() / 3.0;
    let rel = (prof.s[5] / want - 1.0).abs();
    if rel > 1e-3 {
        return Err(format!("S(3) = {}, want {want}, relative error {rel:.2e}", prof.s[5]));
    }
    Ok(())
}

fn check_term_count() -> std::result::Result<(), String> {
    let cp = CanonicalProblem::anharmonic(&Rat::zero());
    let lnx = 100f64.ln();
    let prof = s_profile(&cp, &uniform(lnx - 2.0, lnx + 1.0, 151), &squared_opts()).map_err(v_err)?;
    let curve = curve_from_profile(&prof, 0.0).map_err(v_err)?;
    let m = predict_num_terms(&curve, 100.0, 100).map_err(v_err)?;
    if !(1500..=1850).contains(&m) {
        return Err(format!("predicted {m} terms"));
    }
    Ok(())
}

/// Built-in corpus of end-to-end checks, one line each.
pub fn validate() -> ExitCode {
    let checks: [(&str, fn() -> std::result::Result<(), String>); 9] = [
        ("classify: exponential origin is ordinary", check_exp_ordinary),
        ("classify: cylinder problem has a double indicial root", check_cylinder_degenerate),
        ("classify: normal form keeps its indices at a singular origin", check_canonical_roots),
        ("solve: exponential series matches its partial sums", check_exp_value),
        ("solve: cylinder series matches its partial sums", check_cylinder_value),
        ("solve: continuation along a path matches direct summation", check_continuation),
        ("demo: coin-toss table reproduces its reference rows", check_demo_rows),
        ("profile: single-well growth matches the closed form", check_profile_point),
        ("estimate: term count for the single well lands in range", check_term_count),
    ];
    let mut failed = 0usize;
    for (name, body) in checks {
        match body() {
            Ok(()) => println!("ok      {name}"),
            Err(e) => {
                failed += 1;
                println!("FAILED  {name}: {e}");
            }
        }
    }
    if failed == 0 {
        println!("{} checks passed", checks.len());
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} checks failed", checks.len());
        ExitCode::from(1)
    }
}
