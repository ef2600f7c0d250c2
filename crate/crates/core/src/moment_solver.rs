//! Laguerre reconstruction of ρ(x) = x g(x) from the weak-field
//! coefficients read as even moments, a_{n+2} = ∫₀^∞ x^{2n} ρ(x) dx.
//!
//! With g(x) = e^{−x/2} Σ_m c_m L_m(x) the moment conditions become the
//! dense system Σ_m P(n,m) c_m = a_{n+2}, n = 0..=d.

use std::path::Path;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg_euler::SeriesCoefficients;
use crate::linalg::{solve_refined, Matrix};
use crate::precision::{format_exact, parse_at, BigComplex, Context};
use crate::special::laguerre_all;

/// Version of the coefficient generator and system layout; part of every
/// cached solution so stale files are rejected.
pub const GENERATOR_VERSION: u32 = 1;
pub const SCHEMA_VERSION: u32 = 1;

/// P(n,m) = m! 2^{2n+2} Σ_{k=0}^{m} (−2)^k (2n+k+1)!/((k!)² (m−k)!), exactly.
pub fn p_entry_exact(n: usize, m: usize) -> Integer {
    let mut sum = Integer::new();
    for k in 0..=m {
        // m!/(k!(m−k)!) · (2n+k+1)!/k!
        let binom = Integer::from(Integer::binomial_u(m as u32, k as u32));
        let rising = falling_ratio(2 * n + k + 1, k);
        let mut term = binom * rising;
        term <<= k as u32;
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    sum << (2 * n as u32 + 2)
}

/// a!/b! for a ≥ b.
fn falling_ratio(a: usize, b: usize) -> Integer {
    let mut out = Integer::from(1);
    for j in b + 1..=a {
        out *= j as u32;
    }
    out
}

pub fn p_entry(n: usize, m: usize, ctx: &Context) -> Float {
    ctx.real(p_entry_exact(n, m))
}

/// All P(n,m), 0 ≤ n,m ≤ d, row-major. Each row is a binomial transform
/// Σ_k C(m,k) x_k of x_k = (−2)^k (2n+k+1)!/k!, done by repeated pairwise
/// sums so only additions appear in the inner loop.
pub fn p_matrix_exact(d: usize) -> Vec<Integer> {
    let size = d + 1;
    let mut out = vec![Integer::new(); size * size];
    for n in 0..size {
        let mut row: Vec<Integer> = Vec::with_capacity(size);
        let mut x = falling_ratio(2 * n + 1, 0);
        for k in 0..size {
            if k > 0 {
                // (2n+k+1)!/k! = (2n+k)!/(k−1)! · (2n+k+1)/k
                x *= (2 * n + k + 1) as u32;
                x /= k as u32;
            }
            let mut v = Integer::from(&x << k as u32);
            if k % 2 == 1 {
                v = -v;
            }
            row.push(v);
        }
        let scale = 2 * n as u32 + 2;
        for m in 0..size {
            out[n * size + m] = Integer::from(&row[0] << scale);
            for k in 0..row.len() - 1 {
                let next = Integer::from(&row[k + 1]);
                row[k] += next;
            }
            row.pop();
        }
    }
    out
}

/// Moment system for d+1 moments.
#[derive(Debug, Clone)]
pub struct MomentSystem {
    pub d: usize,
    pub p: Matrix,
    pub p_exact: Vec<Integer>,
    pub rhs: Vec<Float>,
    pub rhs_exact: Vec<Rational>,
}

/// The precision rule: d+1 moments need at least d+1 working digits.
pub fn check_precision_rule(d: usize, ctx: &Context) -> Result<()> {
    let required = d as u32 + 1;
    if ctx.digits() < required {
        return Err(Error::PrecisionRule {
            digits: ctx.digits(),
            moments: d + 1,
            required,
        });
    }
    Ok(())
}

pub fn build_system(coeffs: &SeriesCoefficients, d: usize, ctx: &Context) -> Result<MomentSystem> {
    check_precision_rule(d, ctx)?;
    if coeffs.n_max < d + 2 {
        return Err(Error::Config(format!(
            "{} moments need coefficients up to n = {}, have n_max = {}",
            d + 1,
            d + 2,
            coeffs.n_max
        )));
    }
    let p_exact = p_matrix_exact(d);
    let size = d + 1;
    let p = Matrix::from_fn(size, |i, j| ctx.real(&p_exact[i * size + j]));
    let rhs_exact: Vec<Rational> = (0..size).map(|n| coeffs.a_exact(n + 2).clone()).collect();
    let rhs = rhs_exact.iter().map(|r| ctx.real(r)).collect();
    Ok(MomentSystem {
        d,
        p,
        p_exact,
        rhs,
        rhs_exact,
    })
}

/// Laguerre coefficients c_0..c_d of g with solve diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSolution {
    pub d: usize,
    pub c: Vec<Float>,
    /// max_n |Σ_m P(n,m) c_m − a_{n+2}| against the exact system
    pub residual: Float,
    /// max_n of the same residual divided by a_{n+2}
    pub relative_residual: Float,
    /// max_n of the residual divided by Σ_m |P(n,m) c_m|; rows cancel by
    /// many orders of magnitude, so this and not the residual relative to
    /// a_{n+2} is what the working precision bounds
    pub backward_error: Float,
    pub digits_used: u32,
    pub guard_digits: u32,
}

pub fn solve(system: &MomentSystem, ctx: &Context) -> Result<MomentSolution> {
    let sol = solve_refined(&system.p, &system.rhs, ctx)?;
    let diag = exact_residual(system, &sol.x, ctx);
    Ok(MomentSolution {
        d: system.d,
        c: sol.x,
        residual: diag.residual,
        relative_residual: diag.relative_residual,
        backward_error: diag.backward_error,
        digits_used: ctx.digits(),
        guard_digits: ctx.guard_digits(),
    })
}

/// Residual measures of a candidate solution.
#[derive(Debug, Clone)]
pub struct ResidualDiagnostics {
    pub residual: Float,
    pub relative_residual: Float,
    pub backward_error: Float,
}

/// Residual of `c` against the unrounded system, accumulated with twice
/// the working bits.
pub fn exact_residual(system: &MomentSystem, c: &[Float], ctx: &Context) -> ResidualDiagnostics {
    let prec = 2 * ctx.prec() + 64;
    let size = system.d + 1;
    let mut worst = Float::new(prec);
    let mut worst_rel = Float::new(prec);
    let mut worst_backward = Float::new(prec);
    for n in 0..size {
        let mut acc = Float::new(prec);
        let mut magnitude = Float::new(prec);
        for (m, cm) in c.iter().enumerate() {
            let term = Float::with_val(prec, &system.p_exact[n * size + m]) * cm;
            magnitude += Float::with_val(prec, term.abs_ref());
            acc += term;
        }
        acc -= Float::with_val(prec, &system.rhs_exact[n]);
        let abs = acc.abs();
        let rel = Float::with_val(prec, &abs / &system.rhs_exact[n]);
        let backward = if magnitude.is_zero() {
            Float::with_val(prec, &abs)
        } else {
            Float::with_val(prec, &abs / &magnitude)
        };
        if abs > worst {
            worst = abs;
        }
        if rel > worst_rel {
            worst_rel = rel;
        }
        if backward > worst_backward {
            worst_backward = backward;
        }
    }
    ResidualDiagnostics {
        residual: ctx.real(worst),
        relative_residual: ctx.real(worst_rel),
        backward_error: ctx.real(worst_backward),
    }
}

/// Convenience: coefficients, system and solve in one call.
pub fn solve_moments(d: usize, ctx: &Context) -> Result<MomentSolution> {
    let coeffs = crate::heisenberg_euler::weak_field_coeffs(d + 2, ctx)?;
    let system = build_system(&coeffs, d, ctx)?;
    solve(&system, ctx)
}

/// g(z) = e^{−z/2} Σ_m c_m L_m(z).
pub fn g_eval(sol: &MomentSolution, z: &BigComplex, ctx: &Context) -> BigComplex {
    let prec = ctx.prec();
    let lag = laguerre_all(sol.d, z, ctx);
    let mut sum = BigComplex::zero(prec);
    for (c, l) in sol.c.iter().zip(&lag) {
        sum = &sum + &l.scale(c);
    }
    let damping = z.scale(&ctx.ratio(-1, 2)).exp();
    &damping * &sum
}

/// ρ(z) = z g(z).
pub fn rho_eval(sol: &MomentSolution, z: &BigComplex, ctx: &Context) -> BigComplex {
    z * &g_eval(sol, z, ctx)
}

#[derive(Debug, Serialize, Deserialize)]
struct SolutionDocument {
    schema: u32,
    generator: u32,
    d: usize,
    digits_used: u32,
    guard_digits: u32,
    precision_bits: u32,
    residual: String,
    relative_residual: String,
    backward_error: String,
    c: Vec<String>,
}

impl MomentSolution {
    pub fn to_json(&self) -> Result<String> {
        let doc = SolutionDocument {
            schema: SCHEMA_VERSION,
            generator: GENERATOR_VERSION,
            d: self.d,
            digits_used: self.digits_used,
            guard_digits: self.guard_digits,
            precision_bits: self.c.first().map_or(0, |x| x.prec()),
            residual: format_exact(&self.residual),
            relative_residual: format_exact(&self.relative_residual),
            backward_error: format_exact(&self.backward_error),
            c: self.c.iter().map(format_exact).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SolutionDocument = serde_json::from_str(text)?;
        if doc.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema {}", doc.schema)));
        }
        if doc.generator != GENERATOR_VERSION {
            return Err(Error::Parse(format!(
                "solution written by generator version {}, expected {GENERATOR_VERSION}",
                doc.generator
            )));
        }
        if doc.c.len() != doc.d + 1 {
            return Err(Error::Parse(format!(
                "expected {} coefficients, found {}",
                doc.d + 1,
                doc.c.len()
            )));
        }
        let prec = doc.precision_bits;
        let c = doc.c.iter().map(|s| parse_at(s, prec)).collect::<Result<Vec<_>>>()?;
        Ok(MomentSolution {
            d: doc.d,
            c,
            residual: parse_at(&doc.residual, prec)?,
            relative_residual: parse_at(&doc.relative_residual, prec)?,
            backward_error: parse_at(&doc.backward_error, prec)?,
            digits_used: doc.digits_used,
            guard_digits: doc.guard_digits,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Cache file name for a solve, keyed by moment count, digits and
    /// coefficient-generator version.
    pub fn cache_file_name(d: usize, digits: u32) -> String {
        format!("solution-d{d}-digits{digits}-gen{GENERATOR_VERSION}.json")
    }

    /// Load the cached solve from `dir` if present, otherwise solve and
    /// store it there.
    pub fn cached(d: usize, ctx: &Context, dir: &Path) -> Result<Self> {
        let path = dir.join(Self::cache_file_name(d, ctx.digits()));
        if path.exists() {
            let sol = Self::load(&path)?;
            if sol.d == d && sol.digits_used == ctx.digits() && sol.guard_digits == ctx.guard_digits() {
                return Ok(sol);
            }
        }
        let sol = solve_moments(d, ctx)?;
        std::fs::create_dir_all(dir)?;
        sol.save(&path)?;
        Ok(sol)
    }

    /// The context this solution was computed under.
    pub fn context(&self) -> Result<Context> {
        Context::with_guard(self.digits_used, self.guard_digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg_euler::weak_field_coeffs;
    use crate::precision::agree_digits;

    /// ∫₀^∞ x^{2n+1} e^{−x/2} L_m(x) dx from the monomial expansion of L_m.
    fn p_oracle(n: usize, m: usize) -> Rational {
        let mut sum = Rational::new();
        for k in 0..=m {
            // L_m = Σ_k C(m,k) (−x)^k / k!
            let coeff = Rational::from((
                Integer::from(Integer::binomial_u(m as u32, k as u32)),
                Integer::from(Integer::factorial(k as u32)),
            ));
            let j = 2 * n + 1 + k;
            // ∫ x^j e^{−x/2} = j! 2^{j+1}
            let moment = Integer::from(Integer::factorial(j as u32)) << (j as u32 + 1);
            let term = coeff * moment;
            if k % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
        }
        sum
    }

    #[test]
    fn p_examples() {
        assert_eq!(p_entry_exact(0, 0), 4);
        assert_eq!(p_entry_exact(0, 1), -12);
        assert_eq!(p_entry_exact(1, 0), 96);
    }

    #[test]
    fn p_matches_monomial_oracle() {
        let all = p_matrix_exact(10);
        for n in 0..=10 {
            for m in 0..=10 {
                let exact = p_entry_exact(n, m);
                assert_eq!(Rational::from(exact.clone()), p_oracle(n, m), "P({n},{m})");
                assert_eq!(all[n * 11 + m], exact, "batched P({n},{m})");
            }
        }
    }

    #[test]
    fn scalar_system() {
        let c = Context::with_precision(30).unwrap();
        let coeffs = weak_field_coeffs(2, &c).unwrap();
        let sol = solve(&build_system(&coeffs, 0, &c).unwrap(), &c).unwrap();
        assert!(agree_digits(&sol.c[0], &c.ratio(7, 1440), 30));
        let system = build_system(&weak_field_coeffs(3, &c).unwrap(), 1, &c).unwrap();
        assert_eq!(*system.p.get(0, 0), 4);
        assert_eq!(*system.p.get(0, 1), -12);
    }

    #[test]
    fn precision_rule_gate() {
        let low = Context::with_precision(50).unwrap();
        let coeffs = weak_field_coeffs(101, &low).unwrap();
        assert!(matches!(
            build_system(&coeffs, 99, &low),
            Err(Error::PrecisionRule { required: 100, .. })
        ));
        let ok = Context::with_precision(100).unwrap();
        assert!(check_precision_rule(99, &ok).is_ok());
    }

    #[test]
    fn residual_and_moments() {
        let c = Context::with_guard(31, 20).unwrap();
        let sol = solve_moments(30, &c).unwrap();
        assert!(sol.backward_error < c.pow10_neg(45));
        // the coefficients themselves agree with a far more precise solve
        let hi = Context::with_precision(160).unwrap();
        let reference = solve_moments(30, &hi).unwrap();
        for (lo, r) in sol.c.iter().zip(&reference.c) {
            assert!(agree_digits(lo, &hi.real(r), 20));
        }
        // Σ_m c_m P(n,m) reproduces a_{n+2} with P from the monomial oracle;
        // rows cancel by up to 65 digits, hence the precise coefficients
        let coeffs = weak_field_coeffs(32, &hi).unwrap();
        for n in [0usize, 5, 30] {
            let mut acc = hi.zero();
            for (m, cm) in reference.c.iter().enumerate() {
                acc += hi.real(p_oracle(n, m)) * cm;
            }
            assert!(agree_digits(&acc, coeffs.a(n + 2), 40), "moment {n}");
        }
    }

    #[test]
    fn g_and_rho_examples() {
        let c = Context::with_precision(30).unwrap();
        let mut sol = MomentSolution {
            d: 3,
            c: vec![c.real(1), c.zero(), c.zero(), c.zero()],
            residual: c.zero(),
            relative_residual: c.zero(),
            backward_error: c.zero(),
            digits_used: 30,
            guard_digits: 20,
        };
        let g0 = g_eval(&sol, &BigComplex::zero(c.prec()), &c);
        assert_eq!(g0.re, 1);
        assert!(rho_eval(&sol, &BigComplex::zero(c.prec()), &c).is_zero());
        sol.c = vec![c.zero(), c.real(1), c.zero(), c.zero()];
        let g2 = g_eval(&sol, &BigComplex::from_real(c.real(2)), &c);
        let expect = -Float::with_val(c.prec(), c.real(-1).exp_ref());
        assert!(agree_digits(&g2.re, &expect, 30));
        let z = BigComplex::new(c.ratio(3, 2), c.ratio(-7, 3));
        sol.c = vec![c.ratio(1, 3), c.real(-2), c.ratio(5, 7), c.real(11)];
        let a = g_eval(&sol, &z.conj(), &c);
        let b = g_eval(&sol, &z, &c).conj();
        assert!(agree_digits(&a, &b, 30));
    }

    #[test]
    fn json_round_trip() {
        let c = Context::with_guard(31, 20).unwrap();
        let sol = solve_moments(12, &c).unwrap();
        let text = sol.to_json().unwrap();
        let back = MomentSolution::from_json(&text).unwrap();
        assert_eq!(back, sol);
        assert_eq!(back.to_json().unwrap(), text);
        assert!(MomentSolution::from_json("{}").is_err());
    }

    #[test]
    fn cache_is_keyed_and_reused() {
        let dir = tempfile::tempdir().unwrap();
        let c = Context::with_guard(31, 20).unwrap();
        let first = MomentSolution::cached(10, &c, dir.path()).unwrap();
        let path = dir.path().join(MomentSolution::cache_file_name(10, 31));
        assert!(path.ends_with("solution-d10-digits31-gen1.json"));
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(MomentSolution::cached(10, &c, dir.path()).unwrap(), first);
        assert_eq!(std::fs::read(&path).unwrap(), bytes);
        // a corrupt entry is an error, not a silent re-solve
        std::fs::write(&path, "{").unwrap();
        assert!(matches!(
            MomentSolution::cached(10, &c, dir.path()),
            Err(Error::Parse(_))
        ));
    }
}
