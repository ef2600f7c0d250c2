//! Bernoulli numbers, digamma at the integers, Laguerre polynomials and the
//! Hurwitz zeta function with its first-argument derivative at s = −1.

use std::sync::RwLock;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::{BigComplex, Context};

static BERNOULLI_EVEN: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Exact even-index Bernoulli numbers B_0, B_2, …, B_{2n}.
///
/// Computed from the tangent numbers (integer recurrence, no rational
/// arithmetic in the inner loop) and cached process-wide.
pub fn bernoulli_exact(n: usize) -> Vec<Rational> {
    {
        let cached = BERNOULLI_EVEN.read().unwrap_or_else(|e| e.into_inner());
        if cached.len() > n {
            return cached[..=n].to_vec();
        }
    }
    let mut cached = BERNOULLI_EVEN.write().unwrap_or_else(|e| e.into_inner());
    if cached.len() <= n {
        let target = (n + 1).max(2 * cached.len());
        *cached = even_bernoulli_from_tangent(target - 1);
    }
    cached[..=n].to_vec()
}

fn even_bernoulli_from_tangent(n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Rational::from(1));
    if n == 0 {
        return out;
    }
    // tangent[k] = T_k, the k-th tangent number (T_1 = 1, T_2 = 2, T_3 = 16, ...)
    let mut tangent: Vec<Integer> = vec![Integer::new(); n + 1];
    tangent[1] = Integer::from(1);
    for k in 2..=n {
        tangent[k] = Integer::from(&tangent[k - 1] * (k as u32 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&tangent[j - 1] * (j - k) as u32);
            let b = Integer::from(&tangent[j] * (j - k + 2) as u32);
            tangent[j] = a + b;
        }
    }
    for (k, t) in tangent.iter().enumerate().skip(1) {
        // B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1))
        let four_k = Integer::from(1) << (2 * k as u32);
        let den = Integer::from(&four_k - 1u32) * four_k;
        let mut num = Integer::from(t * (2 * k as u32));
        if k % 2 == 0 {
            num = -num;
        }
        out.push(Rational::from((num, den)));
    }
    out
}

/// B_0, B_2, …, B_{2N} rounded to the context precision.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    pub values: Vec<Float>,
    pub n: usize,
}

impl BernoulliTable {
    /// B_{2k}
    pub fn even(&self, k: usize) -> &Float {
        &self.values[k]
    }
}

pub fn bernoulli(n: usize, ctx: &Context) -> BernoulliTable {
    let values = bernoulli_exact(n).iter().map(|b| ctx.real(b)).collect();
    BernoulliTable { values, n }
}

/// ψ(m) = −γ + H_{m−1} for integer m ≥ 1.
pub fn digamma_int(m: i64, ctx: &Context) -> Result<Float> {
    if m <= 0 {
        return Err(Error::Domain(format!("digamma_int needs m >= 1, got {m}")));
    }
    let mut h = ctx.zero();
    for k in 1..m {
        h += ctx.ratio(1, k);
    }
    Ok(h - ctx.euler_gamma())
}

/// ψ(1), ψ(2), …, ψ(m_max) accumulated in one pass; index 0 holds ψ(1).
pub fn digamma_table(m_max: usize, ctx: &Context) -> Vec<Float> {
    let mut out = Vec::with_capacity(m_max);
    let mut psi = -ctx.euler_gamma();
    for m in 1..=m_max {
        out.push(psi.clone());
        psi += ctx.ratio(1, m as i64);
    }
    out
}

/// L_m(z) by the three-term recurrence.
pub fn laguerre(m: usize, z: &BigComplex, ctx: &Context) -> BigComplex {
    laguerre_all(m, z, ctx).pop().expect("non-empty")
}

/// L_0(z), …, L_m(z).
pub fn laguerre_all(m: usize, z: &BigComplex, ctx: &Context) -> Vec<BigComplex> {
    let prec = ctx.prec();
    let mut out = Vec::with_capacity(m + 1);
    out.push(BigComplex::one(prec));
    if m == 0 {
        return out;
    }
    let one = BigComplex::one(prec);
    out.push(&one - z);
    for k in 1..m {
        // (k+1) L_{k+1} = (2k+1-z) L_k - k L_{k-1}
        let factor = (-z).add_real(&ctx.real(2 * k + 1));
        let a = &factor * &out[k];
        let b = out[k - 1].scale(&ctx.real(k));
        let next = (&a - &b).scale(&ctx.ratio(1, k as i64 + 1));
        out.push(next);
    }
    out
}

/// Laguerre values at a real point, avoiding complex arithmetic.
pub fn laguerre_all_real(m: usize, x: &Float, ctx: &Context) -> Vec<Float> {
    let mut out = Vec::with_capacity(m + 1);
    out.push(ctx.real(1));
    if m == 0 {
        return out;
    }
    out.push(ctx.real(1) - x);
    for k in 1..m {
        let factor = ctx.real(2 * k + 1) - x;
        let a = Float::with_val(ctx.prec(), &factor * &out[k]);
        let b = Float::with_val(ctx.prec(), &out[k - 1] * k as u32);
        out.push((a - b) / (k as u32 + 1));
    }
    out
}

/// B_{2j}/(2j)! for j = 0, 1, …, enough for the Euler–Maclaurin tail at
/// this context's precision.
fn zeta_coefficients(ctx: &Context) -> &[Float] {
    ctx.zeta_coefficients.get_or_init(|| {
        let j_max = euler_maclaurin_max_terms(ctx);
        let exact = bernoulli_exact(j_max);
        let mut factorial = Integer::from(1);
        let mut out = Vec::with_capacity(j_max + 1);
        for (j, b) in exact.iter().enumerate() {
            if j > 0 {
                factorial *= (2 * j - 1) as u32;
                factorial *= (2 * j) as u32;
            }
            let mut x = ctx.real(b);
            x /= &factorial;
            out.push(x);
        }
        out
    })
}

fn euler_maclaurin_max_terms(ctx: &Context) -> usize {
    ctx.working_digits() as usize + 40
}

/// Smallest |a + N| that makes the Euler–Maclaurin tail reach the working
/// precision: the optimally truncated tail is ~ exp(−2π|a+N|).
fn euler_maclaurin_shift(a: &BigComplex, ctx: &Context) -> usize {
    let target = ctx.working_digits() as f64 * std::f64::consts::LN_10 / (2.0 * std::f64::consts::PI) + 3.0;
    let re = a.re.to_f64();
    if re >= target {
        0
    } else {
        (target - re).ceil() as usize
    }
}

fn check_hurwitz_argument(a: &BigComplex) -> Result<()> {
    if !a.is_finite() {
        return Err(Error::Domain("Hurwitz zeta parameter is not finite".into()));
    }
    if a.im.is_zero() && a.re <= 0 && a.re.is_integer() {
        return Err(Error::Domain(format!(
            "Hurwitz zeta parameter a = {} is a non-positive integer",
            a.re.to_f64()
        )));
    }
    Ok(())
}

/// ζ(s, a) on the principal branch of (a+k)^(−s).
pub fn hurwitz_zeta(s: &BigComplex, a: &BigComplex, ctx: &Context) -> Result<BigComplex> {
    let n = euler_maclaurin_shift(a, ctx);
    hurwitz_zeta_with_shift(s, a, n, ctx)
}

/// Euler–Maclaurin with an explicit direct-sum length `n`.
pub fn hurwitz_zeta_with_shift(s: &BigComplex, a: &BigComplex, n: usize, ctx: &Context) -> Result<BigComplex> {
    check_hurwitz_argument(a)?;
    if s.im.is_zero() && s.re == 1 {
        return Err(Error::Pole("Hurwitz zeta has a pole at s = 1".into()));
    }
    let prec = ctx.prec();
    let minus_s = -s;
    let mut sum = BigComplex::zero(prec);
    for k in 0..n {
        let base = a.add_real(&ctx.real(k));
        sum = &sum + &base.powc(&minus_s);
    }
    let w = a.add_real(&ctx.real(n));
    let w_pow = w.powc(&minus_s); // w^{-s}
    let one = BigComplex::one(prec);
    let s_minus_one = s - &one;
    // w^{1-s}/(s-1) + w^{-s}/2
    sum = &sum + &(&(&w_pow * &w) / &s_minus_one);
    sum = &sum + &w_pow.scale(&ctx.ratio(1, 2));

    let coeffs = zeta_coefficients(ctx);
    let eps = ctx.epsilon();
    let w_inv = w.recip();
    let w_inv2 = w_inv.square();
    // poch = (s)_{2j-1}, power = w^{-s-2j+1}
    let mut poch = s.clone();
    let mut power = &w_pow * &w_inv;
    let mut converged = false;
    for (j, coeff) in coeffs.iter().enumerate().skip(1) {
        if j > 1 {
            let f1 = s.add_real(&ctx.real(2 * j - 3));
            let f2 = s.add_real(&ctx.real(2 * j - 2));
            poch = &(&poch * &f1) * &f2;
            power = &power * &w_inv2;
        }
        let term = (&poch * &power).scale(coeff);
        sum = &sum + &term;
        let tiny = Float::with_val(prec, sum.abs() * &eps);
        if term.abs() <= tiny {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Euler–Maclaurin tail for Hurwitz zeta did not converge with shift {n}"
        )));
    }
    Ok(sum)
}

/// ζ(−1, a) = −(a² − a + 1/6)/2.
pub fn hurwitz_zeta_neg1(a: &BigComplex, ctx: &Context) -> BigComplex {
    let poly = (&a.square() - a).add_real(&ctx.ratio(1, 6));
    poly.scale(&ctx.ratio(-1, 2))
}

/// ζ^(1,0)(−1, a): the s-derivative of the Euler–Maclaurin formula taken
/// term by term and evaluated at s = −1.
pub fn hurwitz_zeta_sderiv_neg1(a: &BigComplex, ctx: &Context) -> Result<BigComplex> {
    let n = euler_maclaurin_shift(a, ctx);
    hurwitz_zeta_sderiv_neg1_with_shift(a, n, ctx)
}

pub fn hurwitz_zeta_sderiv_neg1_with_shift(a: &BigComplex, n: usize, ctx: &Context) -> Result<BigComplex> {
    check_hurwitz_argument(a)?;
    let prec = ctx.prec();
    // d/ds (a+k)^{-s} at s = -1 is -(a+k) ln(a+k)
    let mut sum = BigComplex::zero(prec);
    for k in 0..n {
        let base = a.add_real(&ctx.real(k));
        sum = &sum - &(&base * &base.ln());
    }
    let w = a.add_real(&ctx.real(n));
    let ln_w = w.ln();
    let w2 = w.square();
    // w^2 ln w / 2 - w^2 / 4
    sum = &sum + &(&w2 * &ln_w).scale(&ctx.ratio(1, 2));
    sum = &sum - &w2.scale(&ctx.ratio(1, 4));
    // -(w ln w)/2
    sum = &sum - &(&w * &ln_w).scale(&ctx.ratio(1, 2));
    // j = 1: B_2/2 (1 + ln w)
    let coeffs = zeta_coefficients(ctx);
    sum = &sum + &ln_w.add_real(&ctx.real(1)).scale(&coeffs[1]);
    // j >= 2: -B_{2j}/(2j)! (2j-3)! w^{2-2j}
    let eps = ctx.epsilon();
    let w_inv2 = w.recip().square();
    let mut power = w_inv2.clone();
    let mut fact = ctx.real(1); // (2j-3)! at j = 2
    let mut converged = false;
    for (j, coeff) in coeffs.iter().enumerate().skip(2) {
        if j > 2 {
            fact *= (2 * j - 4) as u32;
            fact *= (2 * j - 3) as u32;
            power = &power * &w_inv2;
        }
        let c = Float::with_val(prec, coeff * &fact);
        let term = power.scale(&c);
        sum = &sum - &term;
        let tiny = Float::with_val(prec, sum.abs() * &eps);
        if term.abs() <= tiny {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Euler–Maclaurin tail for ζ'(-1, a) did not converge with shift {n}"
        )));
    }
    Ok(sum)
}
