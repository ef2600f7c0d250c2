//! Spin-0 Heisenberg–Euler integral in a constant magnetic or electric
//! background: weak-field coefficients, closed forms, a quadrature oracle
//! and the strong-field asymptote.
//!
//! Everything here is the dimensionless f; the m⁴/16π² prefactor of the
//! Lagrangian is never applied.

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::finite_part::{electric_hurwitz_argument, magnetic_hurwitz_argument};
use crate::precision::{ensure_positive, BigComplex, Context};
use crate::quadrature::{exp_sinh, tanh_sinh};
use crate::special::{bernoulli_exact, hurwitz_zeta_sderiv_neg1};

/// Below this modulus χ is summed from its Taylor series.
const CHI_SERIES_RADIUS: f64 = 0.25;

/// Weak-field coefficients a_n (n = 2..=n_max) and the Taylor coefficients
/// c_n of χ, exact and rounded.
#[derive(Debug, Clone)]
pub struct SeriesCoefficients {
    pub n_max: usize,
    /// a_n at index n − 2
    pub a: Vec<Float>,
    /// c_n at index n − 2
    pub c: Vec<Float>,
    pub a_exact: Vec<Rational>,
    pub c_exact: Vec<Rational>,
    pub digits: u32,
}

impl SeriesCoefficients {
    /// a_n, n ≥ 2.
    pub fn a(&self, n: usize) -> &Float {
        &self.a[n - 2]
    }

    pub fn c(&self, n: usize) -> &Float {
        &self.c[n - 2]
    }

    pub fn a_exact(&self, n: usize) -> &Rational {
        &self.a_exact[n - 2]
    }

    /// Reduced series b_n = a_{n+2} x^n as used by the comparators.
    pub fn reduced(&self, sign: i32) -> Vec<Float> {
        self.a
            .iter()
            .enumerate()
            .map(|(n, a)| {
                if sign < 0 && n % 2 == 1 {
                    Float::with_val(a.prec(), -a)
                } else {
                    a.clone()
                }
            })
            .collect()
    }

    /// Round to another context without regenerating the exact values.
    pub fn at(&self, ctx: &Context) -> SeriesCoefficients {
        SeriesCoefficients {
            n_max: self.n_max,
            a: self.a_exact.iter().map(|r| ctx.real(r)).collect(),
            c: self.c_exact.iter().map(|r| ctx.real(r)).collect(),
            a_exact: self.a_exact.clone(),
            c_exact: self.c_exact.clone(),
            digits: ctx.digits(),
        }
    }
}

/// Background field: β = e²B²/m⁴ or κ = e²E²/m⁴.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldStrength {
    Magnetic(Float),
    Electric(Float),
}

impl FieldStrength {
    pub fn magnetic(beta: Float) -> Result<Self> {
        ensure_positive(&beta, "beta")?;
        Ok(FieldStrength::Magnetic(beta))
    }

    pub fn electric(kappa: Float) -> Result<Self> {
        ensure_positive(&kappa, "kappa")?;
        Ok(FieldStrength::Electric(kappa))
    }

    pub fn value(&self) -> &Float {
        match self {
            FieldStrength::Magnetic(v) | FieldStrength::Electric(v) => v,
        }
    }
}

/// Exact c_n = (2 − 2^{2n}) B_{2n}/(2n)! and a_n = (−1)^n (2n−3)! c_n.
pub fn weak_field_coeffs_exact(n_max: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if n_max < 2 {
        return Err(Error::Config(format!("n_max must be at least 2, got {n_max}")));
    }
    let bern = bernoulli_exact(n_max);
    let mut a = Vec::with_capacity(n_max - 1);
    let mut c = Vec::with_capacity(n_max - 1);
    for n in 2..=n_max {
        let two_n = 2 * n as u32;
        let factor = Integer::from(2) - (Integer::from(1) << two_n);
        let cn = Rational::from(&bern[n] * &factor) / Integer::from(Integer::factorial(two_n));
        let mut an = Rational::from(&cn * Integer::from(Integer::factorial(two_n - 3)));
        if n % 2 == 1 {
            an = -an;
        }
        c.push(cn);
        a.push(an);
    }
    Ok((a, c))
}

pub fn weak_field_coeffs(n_max: usize, ctx: &Context) -> Result<SeriesCoefficients> {
    let (a_exact, c_exact) = weak_field_coeffs_exact(n_max)?;
    Ok(SeriesCoefficients {
        n_max,
        a: a_exact.iter().map(|r| ctx.real(r)).collect(),
        c: c_exact.iter().map(|r| ctx.real(r)).collect(),
        a_exact,
        c_exact,
        digits: ctx.digits(),
    })
}

/// Σ_{n=2}^{d+2} a_n (−β)^n, the first d+1 terms of the weak-field series.
pub fn partial_sum_magnetic(beta: &Float, d: usize, ctx: &Context) -> Result<Float> {
    ensure_positive(beta, "beta")?;
    let coeffs = weak_field_coeffs(d + 2, ctx)?;
    let minus_beta = -ctx.real(beta);
    let mut power = Float::with_val(ctx.prec(), minus_beta.square_ref());
    let mut sum = ctx.zero();
    for a in &coeffs.a {
        sum += Float::with_val(ctx.prec(), a * &power);
        power *= &minus_beta;
    }
    Ok(sum)
}

/// χ(x) = x csch x − 1 + x²/6.
pub fn chi(x: &BigComplex, ctx: &Context) -> Result<BigComplex> {
    let prec = ctx.prec();
    let x = BigComplex::new(ctx.real(&x.re), ctx.real(&x.im));
    if x.is_zero() {
        return Ok(BigComplex::zero(prec));
    }
    if x.abs() < CHI_SERIES_RADIUS {
        return chi_series(&x, ctx);
    }
    // χ is even; with Re y ≥ 0, y csch y = 2y e^{−y}/(1 − e^{−2y}) cannot overflow
    let y = if x.re < 0 { -&x } else { x };
    let q = (-&y).exp();
    let denom = (-q.square()).add_real(&ctx.real(1));
    if denom.abs() <= ctx.epsilon() {
        return Err(Error::Domain("χ has a pole at nonzero multiples of iπ".into()));
    }
    let y_csch = (&y * &q).scale(&ctx.real(2)) / denom;
    let sixth = y.square().scale(&ctx.ratio(1, 6));
    Ok((&y_csch + &sixth).add_real(&ctx.real(-1)))
}

fn chi_series(x: &BigComplex, ctx: &Context) -> Result<BigComplex> {
    let prec = ctx.prec();
    // |c_n| ~ 2/π^{2n}: terms shrink like (|x|/π)^{2n}
    let ratio = (x.abs().to_f64() / std::f64::consts::PI).max(1e-300);
    let needed = ctx.working_digits() as f64 * std::f64::consts::LN_10 / (-2.0 * ratio.ln());
    let n_max = (needed.ceil() as usize + 2).max(3);
    let (_, c) = weak_field_coeffs_exact(n_max)?;
    let x2 = x.square();
    let mut power = x2.square();
    let mut sum = BigComplex::zero(prec);
    for cn in &c {
        sum = &sum + &power.scale(&ctx.real(cn));
        power = &power * &x2;
    }
    Ok(sum)
}

/// Extra digits to carry when f is much smaller than the individual terms
/// of a closed form (weak fields, where f ~ a_2 β²).
fn weak_field_guard(x: &Float) -> u32 {
    if *x >= 1 {
        return 0;
    }
    let log10 = -x.to_f64().log10();
    (2.0 * log10).ceil().max(0.0) as u32 + 5
}

/// f(β) = β ln β/12 − ln β/4 + β(ln 4/12 − 1/6) − ln 4/4 − 1/4
///        − 4β ζ^(1,0)(−1, (1+√β)/(2√β)).
pub fn exact_magnetic(beta: &Float, ctx: &Context) -> Result<Float> {
    ensure_positive(beta, "beta")?;
    let work = ctx.raised(weak_field_guard(beta));
    let prec = work.prec();
    let beta = work.real(beta);
    let ln_beta = Float::with_val(prec, beta.ln_ref());
    let ln4 = work.ln2() * 2u32;
    let dzeta = hurwitz_zeta_sderiv_neg1(&magnetic_hurwitz_argument(&beta, &work), &work)?;

    let mut f = Float::with_val(prec, &beta * &ln_beta) / 12u32;
    f -= Float::with_val(prec, &ln_beta / 4u32);
    f += (Float::with_val(prec, &ln4 / 12u32) - work.ratio(1, 6)) * &beta;
    f -= Float::with_val(prec, &ln4 / 4u32);
    f -= work.ratio(1, 4);
    f -= Float::with_val(prec, &dzeta.re * &beta) * 4u32;
    Ok(ctx.real(&f))
}

/// f(κ) = κ/6 − 1/4 − (κ/6 + 1/2) ln(2√κ) + i(π/4 + κπ/12)
///        + 4κ ζ^(1,0)(−1, (√κ+i)/(2√κ)).
pub fn exact_electric(kappa: &Float, ctx: &Context) -> Result<BigComplex> {
    ensure_positive(kappa, "kappa")?;
    let work = ctx.raised(weak_field_guard(kappa));
    let prec = work.prec();
    let kappa = work.real(kappa);
    let dzeta = hurwitz_zeta_sderiv_neg1(&electric_hurwitz_argument(&kappa, &work), &work)?;
    let log = (Float::with_val(prec, kappa.sqrt_ref()) * 2u32).ln();
    let sixth = Float::with_val(prec, &kappa / 6u32);

    let mut re = Float::with_val(prec, &sixth - work.ratio(1, 4));
    re -= Float::with_val(prec, &sixth + work.ratio(1, 2)) * log;
    let pi = work.pi();
    let mut im = Float::with_val(prec, &pi / 4u32);
    im += Float::with_val(prec, &pi * &kappa) / 12u32;
    let f = &BigComplex::new(re, im) + &dzeta.scale(&Float::with_val(prec, &kappa * 4u32));
    Ok(BigComplex::new(ctx.real(&f.re), ctx.real(&f.im)))
}

/// ∫₀^∞ e^{−τ} χ(√β τ)/τ³ dτ, split at τ = 1/√β.
pub fn quad_magnetic_oracle(beta: &Float, tol: &Float, ctx: &Context) -> Result<Float> {
    ensure_positive(beta, "beta")?;
    let prec = ctx.prec();
    let sqrt_beta = Float::with_val(prec, beta.sqrt_ref());
    let split = ctx.real(1) / &sqrt_beta;
    let integrand = |tau: &Float| -> Result<Float> {
        if tau.is_zero() {
            return Ok(ctx.zero());
        }
        let x = BigComplex::from_real(Float::with_val(prec, tau * &sqrt_beta));
        let chi = chi(&x, ctx)?.re;
        let cube = Float::with_val(prec, tau * tau) * tau;
        let weight = Float::with_val(prec, -tau).exp() / cube;
        Ok(chi * weight)
    };
    let head = tanh_sinh(|_, from_zero| integrand(from_zero), &ctx.zero(), &split, tol, ctx)?;
    let tail = exp_sinh(|t, _| integrand(t), &split, &ctx.real(1), tol, ctx)?;
    Ok(head.value + tail.value)
}

/// Side from which β = −κ is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContinuationBranch {
    /// β = e^{−iπ}κ: ln β = ln κ − iπ, √β = −i√κ
    #[default]
    Below,
    /// β = e^{+iπ}κ: ln β = ln κ + iπ, √β = +i√κ
    Above,
}

/// The magnetic closed form continued to β = −κ along `branch`.
///
/// ln β and √β are taken on the chosen side of the cut; ζ^(1,0) is then
/// evaluated with the principal branch at A = (1+√β)/(2√β). `Below`
/// reproduces [`exact_electric`]; `Above` gives its complex conjugate.
pub fn continuation_check(kappa: &Float, branch: ContinuationBranch, ctx: &Context) -> Result<BigComplex> {
    ensure_positive(kappa, "kappa")?;
    let work = ctx.raised(weak_field_guard(kappa));
    let prec = work.prec();
    let kappa = work.real(kappa);
    let sign = match branch {
        ContinuationBranch::Below => -1,
        ContinuationBranch::Above => 1,
    };
    let pi = work.pi();
    let beta = BigComplex::from_real(Float::with_val(prec, -&kappa));
    let ln_beta = BigComplex::new(Float::with_val(prec, kappa.ln_ref()), Float::with_val(prec, &pi * sign));
    let sqrt_beta = BigComplex::new(work.zero(), Float::with_val(prec, kappa.sqrt_ref()) * sign);
    let one = BigComplex::one(prec);
    let a = &(&one + &sqrt_beta) / &sqrt_beta.scale(&work.real(2));
    let dzeta = hurwitz_zeta_sderiv_neg1(&a, &work)?;
    let ln4 = work.ln2() * 2u32;

    let mut f = (&beta * &ln_beta).scale(&work.ratio(1, 12));
    f = &f - &ln_beta.scale(&work.ratio(1, 4));
    f = &f + &beta.scale(&(Float::with_val(prec, &ln4 / 12u32) - work.ratio(1, 6)));
    f = f.add_real(&-(Float::with_val(prec, &ln4 / 4u32) + work.ratio(1, 4)));
    f = &f - &(&beta * &dzeta).scale(&work.real(4));
    Ok(BigComplex::new(ctx.real(&f.re), ctx.real(&f.im)))
}

/// Leading strong-field behaviour β ln β/12 + (ln 2/6) β.
pub fn strong_field_asymptote(beta: &Float, ctx: &Context) -> Result<Float> {
    ensure_positive(beta, "beta")?;
    let prec = ctx.prec();
    let beta = ctx.real(beta);
    let ln_beta = Float::with_val(prec, beta.ln_ref());
    let lead = Float::with_val(prec, &beta * &ln_beta) / 12u32;
    Ok(lead + ctx.ln2() / 6u32 * beta)
}

/// Γ(κ) = 2 Im f(κ).
pub fn pair_production_rate(kappa: &Float, ctx: &Context) -> Result<Float> {
    Ok(exact_electric(kappa, ctx)?.im * 2u32)
}
