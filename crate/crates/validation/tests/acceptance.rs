//! Acceptance criteria 1-9. Each criterion prints one PASS/FAIL line; the
//! process fails if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;

use fpresum::extrapolant::{delta_term_complex, extrapolate_electric, finite_part_moment, split_limit};
use fpresum::finite_part::{fp_canonical_oracle, fp_exp, fp_laguerre_exp};
use fpresum::heisenberg_euler::{
    continuation_check, exact_electric, exact_magnetic, quad_magnetic_oracle, ContinuationBranch,
};
use fpresum::moment_solver::MomentSolution;
use fpresum::precision::{agree_digits, agreeing_digits, format_sci, BigComplex};
use fpresum::special::{hurwitz_zeta, hurwitz_zeta_sderiv_neg1};
use fpresum::tables::{
    printed_match, Field, Printed, ReferenceTable, RowMethod, TableRunner, TABLE_1, TABLE_2, TABLE_3, TABLE_4,
};
use fpresum::Context;

type Verdict = Result<String, String>;
type Criterion = Box<dyn FnOnce(&mut TableRunner) -> Verdict>;

/// Printed cells of rows selected by `row` in columns selected by `column`.
fn cells(
    table: &'static ReferenceTable,
    row: impl Fn(&RowMethod) -> bool,
    column: impl Fn(&str) -> bool,
) -> Vec<(RowMethod, Field, &'static str, Printed)> {
    let mut out = Vec::new();
    for block in table.blocks {
        for r in block.rows.iter().filter(|r| row(&r.method)) {
            for (col, printed) in block.columns.iter().zip(r.cells) {
                if let (true, Some(p)) = (column(col), printed) {
                    out.push((r.method, block.field, *col, *p));
                }
            }
        }
    }
    out
}

fn show(v: &BigComplex) -> String {
    if v.im.is_zero() {
        format_sci(&v.re, 12)
    } else {
        format!("{} {:+}i", format_sci(&v.re, 12), format_sci(&v.im, 12))
    }
}

/// Evaluate every cell and require each to reproduce its printed digits.
fn check_cells(runner: &mut TableRunner, list: &[(u8, RowMethod, Field, &str, Printed)]) -> Verdict {
    let mut misses = Vec::new();
    for (table, method, field, col, printed) in list {
        match runner.evaluate(*method, *field, col) {
            Ok(v) if printed_match(&v, printed).unwrap_or(false) => {}
            Ok(v) => misses.push(format!(
                "T{table} {} @ {col}: printed {}{} computed {}",
                method.label(),
                printed.re,
                printed.im.map(|i| format!(" {i}i")).unwrap_or_default(),
                show(&v)
            )),
            Err(e) => misses.push(format!("T{table} {} @ {col}: {e}", method.label())),
        }
    }
    if misses.is_empty() {
        Ok(format!("{} printed cells reproduced", list.len()))
    } else {
        Err(format!(
            "{} of {} cells differ: {}",
            misses.len(),
            list.len(),
            misses.join("; ")
        ))
    }
}

fn tagged(
    id: u8,
    v: Vec<(RowMethod, Field, &'static str, Printed)>,
) -> Vec<(u8, RowMethod, Field, &'static str, Printed)> {
    v.into_iter().map(|(m, f, c, p)| (id, m, f, c, p)).collect()
}

fn criterion_1(runner: &mut TableRunner) -> Verdict {
    let list = tagged(
        1,
        cells(&TABLE_1, |m| matches!(m, RowMethod::PartialSum { .. }), |_| true),
    );
    check_cells(runner, &list)
}

fn criterion_2(runner: &mut TableRunner) -> Verdict {
    let mut list = Vec::new();
    for t in [&TABLE_1, &TABLE_2, &TABLE_3, &TABLE_4] {
        list.extend(tagged(t.id, cells(t, |m| *m == RowMethod::Exact, |_| true)));
    }
    check_cells(runner, &list)
}

fn criterion_3() -> Verdict {
    let ctx = Context::with_precision(40).unwrap();
    let bound = ctx.pow10_neg(25);
    let tol = ctx.pow10_neg(32);
    let mut worst = ctx.zero();
    for b in ["0.1", "1", "10"] {
        let beta = ctx.parse(b).unwrap();
        let exact = exact_magnetic(&beta, &ctx).map_err(|e| e.to_string())?;
        let quad = quad_magnetic_oracle(&beta, &tol, &ctx).map_err(|e| e.to_string())?;
        let diff = Float::with_val(ctx.prec(), &exact - &quad).abs();
        if diff > bound {
            return Err(format!("beta = {b}: |exact - quadrature| = {}", format_sci(&diff, 3)));
        }
        worst.max_mut(&diff);
    }
    Ok(format!("max |exact - quadrature| = {}", format_sci(&worst, 3)))
}

fn criterion_4() -> Verdict {
    let ctx = Context::with_precision(60).unwrap();
    let mut least = u32::MAX;
    for k in ["0.2", "1", "100"] {
        let kappa = ctx.parse(k).unwrap();
        let cont = continuation_check(&kappa, ContinuationBranch::Below, &ctx).map_err(|e| e.to_string())?;
        let exact = exact_electric(&kappa, &ctx).map_err(|e| e.to_string())?;
        let digits = agreeing_digits(&cont.re, &exact.re).min(agreeing_digits(&cont.im, &exact.im));
        if !agree_digits(&cont, &exact, 30) {
            return Err(format!("kappa = {k}: only {digits} digits agree"));
        }
        least = least.min(digits);
    }
    Ok(format!(
        "at least {} digits agree",
        if least == u32::MAX {
            "all".into()
        } else {
            least.to_string()
        }
    ))
}

fn criterion_5() -> Verdict {
    let ctx = Context::with_precision(40).unwrap();
    let prec = ctx.prec();
    let mut least = u32::MAX;
    for b in ["0.25", "0.5", "1", "2"] {
        let b = ctx.parse(b).unwrap();
        for m in 1..=4u32 {
            let value = fp_exp(&b, m, &ctx).map_err(|e| e.to_string())?;
            // Taylor coefficients of e^{−bx}
            let mut taylor = Vec::new();
            let mut t = ctx.real(1);
            for k in 0..m {
                taylor.push(t.clone());
                t = -(t * &b) / (k + 1);
            }
            let bb = b.clone();
            let oracle = fp_canonical_oracle(
                &taylor,
                |x| (-Float::with_val(x.prec(), x * &bb)).exp(),
                &(ctx.real(1) / &b),
                m,
                &ctx,
            )
            .map_err(|e| e.to_string())?;
            if !agree_digits(&value, &oracle, 25) {
                return Err(format!(
                    "b = {}, m = {m}: {} vs oracle {}",
                    b.to_f64(),
                    format_sci(&value, 30),
                    format_sci(&oracle, 30)
                ));
            }
            least = least.min(agreeing_digits(&value, &oracle));
        }
    }
    let half = Float::with_val(prec, 0.5);
    for k in 0..=10u32 {
        for l in 0..=2 * k {
            let lhs = fp_laguerre_exp(k, l, &ctx).map_err(|e| e.to_string())?;
            let rhs = fp_exp(&half, 2 * k + 1 - l, &ctx).map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!(
                    "fp_laguerre_exp({k}, {l}) differs from fp_exp(1/2, {})",
                    2 * k + 1 - l
                ));
            }
        }
    }
    Ok(format!(
        "16-point grid agrees to >= {least} digits; Laguerre kernel identical for k <= 10"
    ))
}

const MAGNETIC_STRENGTHS: [&str; 6] = ["1", "4", "1e2", "1e7", "1e12", "1e18"];
const ELECTRIC_STRENGTHS: [&str; 5] = ["0.2", "1", "4", "1e8", "1e12"];

fn criterion_6(runner: &mut TableRunner) -> Verdict {
    let list = tagged(
        2,
        cells(
            &TABLE_2,
            |m| *m == RowMethod::Extrapolant { moments: 100 },
            |c| MAGNETIC_STRENGTHS.contains(&c),
        ),
    );
    if list.len() != MAGNETIC_STRENGTHS.len() {
        return Err(format!(
            "expected {} printed cells, found {}",
            MAGNETIC_STRENGTHS.len(),
            list.len()
        ));
    }
    check_cells(runner, &list)
}

fn criterion_7(runner: &mut TableRunner) -> Verdict {
    let mut list = Vec::new();
    for t in [&TABLE_3, &TABLE_4] {
        list.extend(tagged(
            t.id,
            cells(
                t,
                |m| *m == RowMethod::Extrapolant { moments: 200 },
                |c| ELECTRIC_STRENGTHS.contains(&c),
            ),
        ));
    }
    if list.len() != ELECTRIC_STRENGTHS.len() {
        return Err(format!(
            "expected {} printed cells, found {}",
            ELECTRIC_STRENGTHS.len(),
            list.len()
        ));
    }
    let cells_verdict = check_cells(runner, &list);

    // 100 → 200 moments moves toward the closed form at κ = 1
    let exact = runner
        .evaluate(RowMethod::Exact, Field::Electric, "1")
        .map_err(|e| e.to_string())?;
    let err = |v: BigComplex| {
        (&v - &BigComplex::new(
            Float::with_val(v.prec(), &exact.re),
            Float::with_val(v.prec(), &exact.im),
        ))
            .abs()
    };
    let e100 = err(runner
        .evaluate(RowMethod::Extrapolant { moments: 100 }, Field::Electric, "1")
        .map_err(|e| e.to_string())?);
    let e200 = err(runner
        .evaluate(RowMethod::Extrapolant { moments: 200 }, Field::Electric, "1")
        .map_err(|e| e.to_string())?);
    let trend = format!(
        "|err| at kappa = 1: {} (100) -> {} (200)",
        format_sci(&e100, 3),
        format_sci(&e200, 3)
    );
    let trend_ok = Float::with_val(64, &e200) < Float::with_val(64, &e100);
    match (cells_verdict, trend_ok) {
        (Ok(s), true) => Ok(format!("{s}; {trend}")),
        (Ok(_), false) => Err(format!("error does not decrease; {trend}")),
        (Err(s), ok) => Err(format!("{s}; {trend}{}", if ok { "" } else { " (not decreasing)" })),
    }
}

fn criterion_8(runner: &mut TableRunner) -> Verdict {
    let pade = |m: &RowMethod| *m == RowMethod::Pade { n: 49, m: 50 };
    let mut list = Vec::new();
    for t in [&TABLE_2, &TABLE_3, &TABLE_4] {
        list.extend(tagged(t.id, cells(t, pade, |_| true)));
    }
    let delta = |label: usize| move |m: &RowMethod| matches!(m, RowMethod::Delta { label: l, .. } if *l == label);
    list.extend(tagged(2, cells(&TABLE_2, delta(25), |c| c == "0.1")));
    list.extend(tagged(2, cells(&TABLE_2, delta(100), |c| c == "1")));
    list.extend(tagged(3, cells(&TABLE_3, delta(50), |c| c == "1")));
    check_cells(runner, &list)
}

/// e^{−x/2} Σ c_m L_m(x) at the precision of x, by the three-term recurrence.
fn g_direct(c: &[Float], x: &Float) -> Float {
    let prec = x.prec();
    let mut prev = Float::with_val(prec, 1);
    let mut cur = Float::with_val(prec, 1) - x;
    let mut sum = Float::with_val(prec, &c[0] * &prev);
    for (m, cm) in c.iter().enumerate().skip(1) {
        sum += Float::with_val(prec, cm * &cur);
        let next = (Float::with_val(prec, (2 * m + 1) as u32) - x) * &cur / (m as u32 + 1)
            - Float::with_val(prec, &prev * m as u32) / (m as u32 + 1);
        prev = std::mem::replace(&mut cur, next);
    }
    sum * (-Float::with_val(prec, x / 2u32)).exp()
}

/// Taylor coefficients t_0..t_{n−1} of e^{−x/2} Σ c_m L_m(x), exact and
/// then rounded far below any precision the oracle works at near 0.
fn g_taylor(c: &[Float], n: usize) -> Vec<Float> {
    use rug::{Integer, Rational};
    let exact_c: Vec<Rational> = c.iter().map(|x| x.to_rational().unwrap()).collect();
    // monomial form of Σ c_m L_m: L_m = Σ_l C(m,l)(−x)^l/l!
    let mut poly = vec![Rational::new(); c.len()];
    for (m, cm) in exact_c.iter().enumerate() {
        for (l, p) in poly.iter_mut().enumerate().take(m + 1) {
            let binom = Integer::from(Integer::binomial_u(m as u32, l as u32));
            let fact = Integer::from(Integer::factorial(l as u32));
            let term = cm * Rational::from((binom, fact));
            if l % 2 == 1 {
                *p -= term;
            } else {
                *p += term;
            }
        }
    }
    // e^{−x/2} = Σ (−1/2)^j/j!
    let exp: Vec<Rational> = (0..n)
        .map(|j| {
            let den = Integer::from(Integer::factorial(j as u32)) << j as u32;
            let v = Rational::from((Integer::from(1), den));
            if j % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    (0..n)
        .map(|k| {
            let mut t = Rational::new();
            for (l, p) in poly.iter().enumerate().take(k + 1) {
                t += Rational::from(p * &exp[k - l]);
            }
            Float::with_val(16384, &t)
        })
        .collect()
}

fn criterion_9(runner: &mut TableRunner) -> Verdict {
    let mut failures = Vec::new();
    let mut notes = Vec::new();

    // moment residual of every solution used above
    let bound = Float::with_val(64, 10).pow(-20);
    for moments in [100, 200] {
        let digits = RowMethod::Extrapolant { moments }.digits();
        let (_, sol) = runner.solution(moments, digits).map_err(|e| e.to_string())?;
        let sol: MomentSolution = sol.clone();
        let rel = Float::with_val(64, &sol.relative_residual);
        notes.push(format!(
            "d = {}: residual/a = {}, backward error {}",
            sol.d,
            format_sci(&rel, 3),
            format_sci(&sol.backward_error, 3)
        ));
        if rel > bound {
            failures.push(format!(
                "moment residual {} > 1e-20 at d = {}",
                format_sci(&rel, 3),
                sol.d
            ));
        }
    }

    // Δ(β) is real for real coefficients
    {
        let (ctx, sol) = runner.solution(100, 120).map_err(|e| e.to_string())?;
        let (ctx, sol) = (ctx.clone(), sol.clone());
        let limit = ctx.pow10_neg(ctx.digits() as i64 - 25);
        for b in MAGNETIC_STRENGTHS.iter().chain(&["0.1", "0.2"]) {
            let beta = ctx.parse(b).unwrap();
            let delta = delta_term_complex(&beta, &sol, &ctx);
            let scale = Float::with_val(ctx.prec(), delta.re.abs_ref()).max(&ctx.real(1));
            let residue = Float::with_val(ctx.prec(), delta.im.abs_ref()) / scale;
            if residue >= limit {
                failures.push(format!("Im delta({b}) = {}", format_sci(&residue, 3)));
            }
        }
    }

    // Im f > 0 along the continuation from below
    {
        let (ctx, sol) = runner.solution(200, 220).map_err(|e| e.to_string())?;
        let (ctx, sol) = (ctx.clone(), sol.clone());
        for k in ["0.2", "1", "4", "10", "100", "1e3", "1e8", "1e12"] {
            let kappa = ctx.parse(k).unwrap();
            let r =
                extrapolate_electric(&kappa, &sol, None, ContinuationBranch::Below, &ctx).map_err(|e| e.to_string())?;
            if r.value.im <= 0 {
                failures.push(format!("Im f({k}) = {}", format_sci(&r.value.im, 6)));
            }
        }
    }

    // I + J + L against the finite part of g/x^{2k+1} by quadrature
    {
        let ctx = Context::with_precision(40).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut checked = 0;
        for d in 1..=6usize {
            let c: Vec<Float> = (0..=d).map(|_| ctx.real(rng.gen_range(-1.0..1.0))).collect();
            let sol = MomentSolution {
                d,
                c: c.clone(),
                residual: ctx.zero(),
                relative_residual: ctx.zero(),
                backward_error: ctx.zero(),
                digits_used: ctx.digits(),
                guard_digits: ctx.guard_digits(),
            };
            for k in 0..=(split_limit(d).min(2)) {
                let k = k as usize;
                let m = 2 * k as u32 + 1;
                let split = finite_part_moment(k, &sol, &ctx).map_err(|e| e.to_string())?;
                let taylor = g_taylor(&c, m as usize);
                let oracle = fp_canonical_oracle(&taylor, |x| g_direct(&c, x), &ctx.real(2), m, &ctx)
                    .map_err(|e| e.to_string())?;
                if !agree_digits(&split, &oracle, 30) {
                    failures.push(format!(
                        "I+J+L at d = {d}, k = {k}: {} vs oracle {}",
                        format_sci(&split, 32),
                        format_sci(&oracle, 32)
                    ));
                }
                checked += 1;
            }
        }
        notes.push(format!("{checked} tail coefficients vs quadrature"));
    }

    // Hurwitz ladders on random complex arguments
    {
        let ctx = Context::with_precision(40).unwrap();
        let prec = ctx.prec();
        let tol = ctx.tolerance();
        let mut rng = ChaCha8Rng::seed_from_u64(0x1adde5);
        let one = ctx.real(1);
        for _ in 0..100 {
            let a = ctx.complex(rng.gen_range(0.05..4.0), rng.gen_range(-4.0..4.0));
            let s = ctx.complex(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let a1 = a.add_real(&one);
            let lhs = &hurwitz_zeta(&s, &a, &ctx).map_err(|e| e.to_string())?
                - &hurwitz_zeta(&s, &a1, &ctx).map_err(|e| e.to_string())?;
            let rhs = a.powc(&(-&s));
            let scale = Float::with_val(prec, rhs.abs().max(&one));
            if (&lhs - &rhs).abs() > Float::with_val(prec, &tol * &scale) {
                failures.push(format!("zeta ladder at a = {:?}", (a.re.to_f64(), a.im.to_f64())));
            }
            let dl = &hurwitz_zeta_sderiv_neg1(&a, &ctx).map_err(|e| e.to_string())?
                - &hurwitz_zeta_sderiv_neg1(&a1, &ctx).map_err(|e| e.to_string())?;
            let dr = -(&a * &a.ln());
            let scale = Float::with_val(prec, dr.abs().max(&one));
            if (&dl - &dr).abs() > Float::with_val(prec, &tol * &scale) {
                failures.push(format!("derivative ladder at a = {:?}", (a.re.to_f64(), a.im.to_f64())));
            }
        }
        notes.push("200 ladder identities".into());
    }

    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{}; {}", failures.join("; "), notes.join("; ")))
    }
}

fn main() {
    // libtest flags such as --nocapture or a filter are accepted and ignored
    let mut runner = TableRunner::new();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 Table 1 partial sums", Box::new(criterion_1)),
        ("2 exact closed forms", Box::new(criterion_2)),
        ("3 closed form vs quadrature", Box::new(|_| criterion_3())),
        ("4 continuation consistency", Box::new(|_| criterion_4())),
        ("5 finite-part oracles", Box::new(|_| criterion_5())),
        ("6 magnetic moment pipeline", Box::new(criterion_6)),
        ("7 electric moment pipeline", Box::new(criterion_7)),
        ("8 comparators", Box::new(criterion_8)),
        ("9 property suite", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(|| run(&mut runner))).unwrap_or_else(|p| {
            Err(format!(
                "panicked: {:?}",
                p.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            ))
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {name}: PASS ({secs:.1} s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({secs:.1} s) {detail}");
            }
        }
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
