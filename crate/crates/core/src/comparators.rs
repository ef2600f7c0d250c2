//! Baseline resummations of the weak-field series: Padé approximants and
//! the Weniger δ sequence transformation.
//!
//! Padé indices refer to the reduced series Σ_{n≥0} a_{n+2}(−β)^n; the β²
//! prefactor is applied outside.

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::heisenberg_euler::SeriesCoefficients;
use crate::linalg::{solve_refined, Matrix};
use crate::precision::{ensure_finite, Context};

/// P^N_M = p(x)/q(x) with deg p = N, deg q = M and q_0 = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    pub n: usize,
    pub m: usize,
    pub p: Vec<Float>,
    pub q: Vec<Float>,
}

/// Padé approximant of Σ b_k x^k from b_0..b_{N+M}.
pub fn pade_from_series(b: &[Float], n: usize, m: usize, ctx: &Context) -> Result<PadeApproximant> {
    if b.len() < n + m + 1 {
        return Err(Error::Config(format!(
            "P^{n}_{m} needs {} series coefficients, got {}",
            n + m + 1,
            b.len()
        )));
    }
    let coeff = |i: i64| -> Float {
        if i < 0 {
            ctx.zero()
        } else {
            ctx.real(&b[i as usize])
        }
    };
    let mut q = vec![ctx.real(1)];
    if m > 0 {
        // Σ_{j=1}^{M} q_j b_{i−j} = −b_i for i = N+1..N+M
        let a = Matrix::from_fn(m, |r, col| coeff((n + 1 + r) as i64 - (col + 1) as i64));
        let rhs: Vec<Float> = (0..m).map(|r| -coeff((n + 1 + r) as i64)).collect();
        let sol = solve_refined(&a, &rhs, ctx).map_err(|e| match e {
            Error::SingularPivot { index, magnitude } => Error::DegeneratePade {
                numerator: n,
                denominator: m,
                reason: format!(
                    "denominator system singular at pivot {index} (relative size {magnitude}); \
                     the Padé table has a defective block here"
                ),
            },
            other => other,
        })?;
        q.extend(sol.x);
    }
    let p = (0..=n)
        .map(|i| {
            let mut acc = ctx.zero();
            for (j, qj) in q.iter().enumerate().take(i.min(m) + 1) {
                acc += Float::with_val(ctx.prec(), qj * &coeff((i - j) as i64));
            }
            acc
        })
        .collect();
    Ok(PadeApproximant { n, m, p, q })
}

/// P^N_M of the reduced magnetic series Σ a_{n+2}(−β)^n.
///
/// The precision must cover the N+M+1 coefficients used: digits ≥ N+M.
pub fn pade_build(coeffs: &SeriesCoefficients, n: usize, m: usize, ctx: &Context) -> Result<PadeApproximant> {
    let required = (n + m) as u32;
    if ctx.digits() < required {
        return Err(Error::PrecisionRule {
            digits: ctx.digits(),
            moments: n + m + 1,
            required,
        });
    }
    if coeffs.n_max < n + m + 2 {
        return Err(Error::Config(format!(
            "P^{n}_{m} needs coefficients up to n = {}, have n_max = {}",
            n + m + 2,
            coeffs.n_max
        )));
    }
    let b = coeffs.at(ctx).reduced(-1);
    pade_from_series(&b[..n + m + 1], n, m, ctx)
}

fn horner(coeffs: &[Float], x: &Float, prec: u32) -> (Float, Float) {
    let mut value = Float::new(prec);
    let mut magnitude = Float::new(prec);
    let x_abs = Float::with_val(prec, x.abs_ref());
    for c in coeffs.iter().rev() {
        value *= x;
        value += c;
        magnitude *= &x_abs;
        magnitude += Float::with_val(prec, c.abs_ref());
    }
    (value, magnitude)
}

impl PadeApproximant {
    /// p(x)/q(x) without the prefactor.
    pub fn eval_reduced(&self, x: &Float, ctx: &Context) -> Result<Float> {
        let prec = ctx.prec();
        let x = ctx.real(x);
        let (num, _) = horner(&self.p, &x, prec);
        let (den, den_magnitude) = horner(&self.q, &x, prec);
        if Float::with_val(prec, den.abs_ref()) <= Float::with_val(prec, &den_magnitude * ctx.epsilon()) {
            return Err(Error::Pole(format!(
                "P^{}_{} denominator vanishes at x = {:.6e}",
                self.n,
                self.m,
                x.to_f64()
            )));
        }
        let value = num / den;
        ensure_finite(&value, "Padé value")?;
        Ok(value)
    }

    /// Taylor coefficients of p/q up to order `count − 1`.
    pub fn expand(&self, count: usize, ctx: &Context) -> Vec<Float> {
        let mut out: Vec<Float> = Vec::with_capacity(count);
        for i in 0..count {
            let mut r = self.p.get(i).map_or_else(|| ctx.zero(), |v| ctx.real(v));
            for j in 1..=i.min(self.m) {
                r -= Float::with_val(ctx.prec(), &self.q[j] * &out[i - j]);
            }
            out.push(r);
        }
        out
    }
}

/// β² p(β)/q(β). For the electric field evaluate at β = −κ.
pub fn pade_eval(pade: &PadeApproximant, beta: &Float, ctx: &Context) -> Result<Float> {
    let beta = ctx.real(beta);
    let reduced = pade.eval_reduced(&beta, ctx)?;
    Ok(reduced * beta.square())
}

/// (a)_k = a (a+1) ⋯ (a+k−1) for integer a ≥ 1.
fn pochhammer(a: usize, k: usize) -> Integer {
    let mut out = Integer::from(1);
    for j in 0..k {
        out *= (a + j) as u32;
    }
    out
}

/// Shift parameter ζ of the δ transformation.
pub const DELTA_SHIFT: usize = 1;

/// δ_n from the terms t_0..t_{n+1} of a series, with partial sums
/// s_j = Σ_{k≤j} t_k and remainder estimates ω_j = t_{j+1}:
///
/// δ_n = Σ_j (−1)^j C(n,j) (ζ+j)_{n−1}/(ζ+n)_{n−1} s_j/ω_j
///     / Σ_j (−1)^j C(n,j) (ζ+j)_{n−1}/(ζ+n)_{n−1} /ω_j,  j = 0..n.
pub fn delta_transform(terms: &[Float], n: usize, ctx: &Context) -> Result<Float> {
    if n < 1 {
        return Err(Error::Config("δ_n needs n >= 1".into()));
    }
    if terms.len() < n + 2 {
        return Err(Error::Config(format!(
            "δ_{n} needs {} terms, got {}",
            n + 2,
            terms.len()
        )));
    }
    let prec = ctx.prec();
    let zeta = DELTA_SHIFT;
    let mut partial = ctx.zero();
    let mut numerator = ctx.zero();
    let mut denominator = ctx.zero();
    let mut denominator_magnitude = ctx.zero();
    let scale = ctx.real(pochhammer(zeta + n, n - 1));
    for j in 0..=n {
        partial += &terms[j];
        let omega = ctx.real(&terms[j + 1]);
        if omega.is_zero() {
            return Err(Error::Breakdown(format!("remainder estimate ω_{j} vanishes in δ_{n}")));
        }
        let binom = Integer::from(Integer::binomial_u(n as u32, j as u32));
        let mut weight = ctx.real(binom * pochhammer(zeta + j, n - 1)) / &scale / omega;
        if j % 2 == 1 {
            weight = -weight;
        }
        numerator += Float::with_val(prec, &weight * &partial);
        denominator_magnitude += Float::with_val(prec, weight.abs_ref());
        denominator += weight;
    }
    if Float::with_val(prec, denominator.abs_ref()) <= denominator_magnitude * ctx.epsilon() {
        return Err(Error::Breakdown(format!("denominator of δ_{n} vanishes")));
    }
    let value = numerator / denominator;
    ensure_finite(&value, "δ transformation")?;
    Ok(value)
}

/// δ_n of Σ_{k≥0} a_{k+2} x^{k+2}: x = −β for the magnetic series, x = +κ
/// for the electric one.
pub fn weniger_delta(coeffs: &SeriesCoefficients, n: usize, x: &Float, ctx: &Context) -> Result<Float> {
    if coeffs.n_max < n + 3 {
        return Err(Error::Config(format!(
            "δ_{n} needs coefficients up to n = {}, have n_max = {}",
            n + 3,
            coeffs.n_max
        )));
    }
    let x = ctx.real(x);
    let mut power = Float::with_val(ctx.prec(), x.square_ref());
    let terms: Vec<Float> = (0..n + 2)
        .map(|k| {
            let t = Float::with_val(ctx.prec(), coeffs.a(k + 2) * &power);
            power *= &x;
            t
        })
        .collect();
    delta_transform(&terms, n, ctx)
}
