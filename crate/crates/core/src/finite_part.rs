//! Closed-form Hadamard finite parts of ∫₀^∞ f(x)/x^m dx for the kernels
//! that appear in the Heisenberg–Euler integrals, plus a quadrature oracle
//! built directly on the cut-off definition.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{ensure_positive, BigComplex, Context};
use crate::quadrature::{exp_sinh, tanh_sinh};
use crate::special::{digamma_int, hurwitz_zeta_neg1, hurwitz_zeta_sderiv_neg1};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinitePartKind {
    /// e^{−bx}
    Exponential,
    /// e^{iax}
    Oscillatory,
    /// e^{−τ} csch(√β τ), order 2
    CschExponential,
    /// e^{−iτ} csch(√κ τ), order 2
    CschOscillatory,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FinitePartScalar {
    Real(Float),
    Complex(BigComplex),
}

/// A finite-part value tagged with its kernel and pole order.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePartValue {
    pub value: FinitePartScalar,
    pub order_m: u32,
    pub kind: FinitePartKind,
}

impl FinitePartValue {
    /// Evaluate `kind` at parameter `param` (b, a, β or κ) and pole order `m`.
    /// The csch kernels only exist at m = 2.
    pub fn evaluate(kind: FinitePartKind, param: &Float, m: u32, ctx: &Context) -> Result<Self> {
        let value = match kind {
            FinitePartKind::Exponential => FinitePartScalar::Real(fp_exp(param, m, ctx)?),
            FinitePartKind::Oscillatory => FinitePartScalar::Complex(fp_osc(param, m, ctx)?),
            FinitePartKind::CschExponential | FinitePartKind::CschOscillatory if m != 2 => {
                return Err(Error::Domain(format!(
                    "csch finite parts are implemented for m = 2 only, got m = {m}"
                )))
            }
            FinitePartKind::CschExponential => FinitePartScalar::Real(fp_csch_exp(param, ctx)?),
            FinitePartKind::CschOscillatory => FinitePartScalar::Complex(fp_csch_osc(param, ctx)?),
        };
        Ok(FinitePartValue {
            value,
            order_m: m,
            kind,
        })
    }
}

fn check_order(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("pole order m must be at least 1".into()));
    }
    Ok(())
}

fn factorial(n: u32, ctx: &Context) -> Float {
    ctx.real(rug::Integer::from(rug::Integer::factorial(n)))
}

/// ⨍₀^∞ e^{−bx}/x^m dx = (−1)^m b^{m−1}/(m−1)! · (ln b − ψ(m)), b > 0.
pub fn fp_exp(b: &Float, m: u32, ctx: &Context) -> Result<Float> {
    check_order(m)?;
    if !(b.is_finite() && *b > 0) {
        return Err(Error::Domain(
            "fp_exp needs b > 0; use fp_osc for imaginary exponents".into(),
        ));
    }
    let b = ctx.real(b);
    let psi = digamma_int(m as i64, ctx)?;
    let log_term = Float::with_val(ctx.prec(), b.ln_ref()) - psi;
    let mut prefactor = b.pow(m - 1) / factorial(m - 1, ctx);
    if m % 2 == 1 {
        prefactor = -prefactor;
    }
    Ok(prefactor * log_term)
}

/// ⨍₀^∞ e^{iax}/x^m dx = −(ia)^{m−1}/(m−1)! · (ln|a| − iπ/2·sgn a − ψ(m)), a ≠ 0.
pub fn fp_osc(a: &Float, m: u32, ctx: &Context) -> Result<BigComplex> {
    check_order(m)?;
    if !a.is_finite() || a.is_zero() {
        return Err(Error::Domain("fp_osc needs a real a != 0".into()));
    }
    let prec = ctx.prec();
    let a = ctx.real(a);
    let psi = digamma_int(m as i64, ctx)?;
    let half_pi = ctx.pi() / 2u32;
    let log_re = Float::with_val(prec, a.abs_ref()).ln() - psi;
    let log_im = if a > 0 { -half_pi } else { half_pi };
    let log_term = BigComplex::new(log_re, log_im);
    let ia = BigComplex::new(ctx.zero(), a);
    let prefactor = ia.powi(m as i64 - 1).scale(&(-ctx.real(1) / factorial(m - 1, ctx)));
    Ok(&prefactor * &log_term)
}

/// Hurwitz argument (1+√β)/(2√β) of the magnetic csch kernel.
pub fn magnetic_hurwitz_argument(beta: &Float, ctx: &Context) -> BigComplex {
    let sqrt_beta = Float::with_val(ctx.prec(), beta.sqrt_ref());
    let a = (Float::with_val(ctx.prec(), &sqrt_beta + 1u32)) / (sqrt_beta * 2u32);
    BigComplex::from_real(a)
}

/// Hurwitz argument (√κ+i)/(2√κ) = 1/2 + i/(2√κ) of the electric kernel.
pub fn electric_hurwitz_argument(kappa: &Float, ctx: &Context) -> BigComplex {
    let sqrt_kappa = Float::with_val(ctx.prec(), kappa.sqrt_ref());
    let im = ctx.real(1) / (sqrt_kappa * 2u32);
    BigComplex::new(ctx.ratio(1, 2), im)
}

/// ⨍₀^∞ e^{−τ} csch(√β τ)/τ² dτ
/// = 2√β[(ln β + ln 4 + 2γ − 2) ζ(−1, A) − 2 ζ^(1,0)(−1, A)], A = (1+√β)/(2√β).
pub fn fp_csch_exp(beta: &Float, ctx: &Context) -> Result<Float> {
    ensure_positive(beta, "beta")?;
    let prec = ctx.prec();
    let beta = ctx.real(beta);
    let a = magnetic_hurwitz_argument(&beta, ctx);
    let zeta = hurwitz_zeta_neg1(&a, ctx);
    let dzeta = hurwitz_zeta_sderiv_neg1(&a, ctx)?;
    let ln4 = ctx.ln2() * 2u32;
    let coeff = Float::with_val(prec, beta.ln_ref()) + ln4 + ctx.euler_gamma() * 2u32 - 2u32;
    let bracket = Float::with_val(prec, &coeff * &zeta.re) - Float::with_val(prec, &dzeta.re * 2u32);
    Ok(Float::with_val(prec, beta.sqrt_ref()) * 2u32 * bracket)
}

/// ⨍₀^∞ e^{−iτ} csch(√κ τ)/τ² dτ
/// = −4√κ[(ψ(2) − ln(2√κ)) ζ(−1, A) + ζ^(1,0)(−1, A)], A = (√κ+i)/(2√κ).
pub fn fp_csch_osc(kappa: &Float, ctx: &Context) -> Result<BigComplex> {
    ensure_positive(kappa, "kappa")?;
    let prec = ctx.prec();
    let kappa = ctx.real(kappa);
    let sqrt_kappa = Float::with_val(prec, kappa.sqrt_ref());
    let a = electric_hurwitz_argument(&kappa, ctx);
    let zeta = hurwitz_zeta_neg1(&a, ctx);
    let dzeta = hurwitz_zeta_sderiv_neg1(&a, ctx)?;
    let psi2 = digamma_int(2, ctx)?;
    let coeff = psi2 - Float::with_val(prec, &sqrt_kappa * 2u32).ln();
    let bracket = &zeta.scale(&coeff) + &dzeta;
    Ok(bracket.scale(&(sqrt_kappa * -4i32)))
}

/// ⨍₀^∞ e^{−x/2}/x^{2k+1−l} dx
/// = (−1)^{1−l} (1/2)^{2k−l}/(2k−l)! · (ln(1/2) − ψ(2k+1−l)), 0 ≤ l ≤ 2k.
pub fn fp_laguerre_exp(k: u32, l: u32, ctx: &Context) -> Result<Float> {
    if l > 2 * k {
        return Err(Error::Domain(format!(
            "fp_laguerre_exp needs l <= 2k, got k = {k}, l = {l} (that moment converges)"
        )));
    }
    let order = 2 * k + 1 - l;
    let psi = digamma_int(order as i64, ctx)?;
    Ok(laguerre_kernel(order, &psi, ctx))
}

/// Same value with ψ supplied by the caller: order n = 2k+1−l.
pub(crate) fn laguerre_kernel(order: u32, psi: &Float, ctx: &Context) -> Float {
    let prec = ctx.prec();
    let n = order - 1; // 2k − l
    let half_pow = Float::with_val(prec, 1) >> n;
    let log_term = -ctx.ln2() - psi;
    let mut value = half_pow / factorial(n, ctx) * log_term;
    // (−1)^{1−l} = (−1)^{order}, since order = 2k+1−l
    if order % 2 == 1 {
        value = -value;
    }
    value
}

/// Finite part from the cut-off definition with the divergent group removed
/// analytically:
///
/// ⨍₀^∞ f/x^m = ∫₀¹ (f − T_{m−1}f)/x^m + Σ_{k=0}^{m−2} t_k/(k+1−m) + ∫₁^∞ f/x^m
///
/// where `taylor[k] = t_k = f^{(k)}(0)/k!` for k < m. `f` must evaluate at the
/// precision of its argument: near the origin the subtraction is done with
/// extra bits to absorb the cancellation. `decay_scale` is the decay length
/// of f on [1, ∞).
pub fn fp_canonical_oracle<F>(taylor: &[Float], f: F, decay_scale: &Float, m: u32, ctx: &Context) -> Result<Float>
where
    F: Fn(&Float) -> Float,
{
    check_order(m)?;
    if taylor.len() < m as usize {
        return Err(Error::Domain(format!(
            "oracle needs {m} Taylor coefficients, got {}",
            taylor.len()
        )));
    }
    let prec = ctx.prec();
    let tol = ctx.tolerance();

    let near = tanh_sinh(
        |_, x| {
            if x.is_zero() {
                return Ok(Float::new(prec));
            }
            // bits lost to cancellation ~ m·log2(1/x)
            let lost = (-x.get_exp().unwrap_or(0)).max(0) as u32;
            let work = prec + m * lost + 64;
            let xw = Float::with_val(work, x);
            let fx = f(&xw);
            let mut poly = Float::new(work);
            for t in taylor[..m as usize].iter().rev() {
                poly *= &xw;
                poly += t;
            }
            let rem = Float::with_val(work, &fx - &poly) / Float::with_val(work, (&xw).pow(m));
            Ok(Float::with_val(prec, rem))
        },
        &ctx.zero(),
        &ctx.real(1),
        &tol,
        ctx,
    )?;

    let mut value = near.value;
    for (k, t) in taylor.iter().enumerate().take(m.saturating_sub(1) as usize) {
        let denom = k as i64 + 1 - m as i64;
        value += Float::with_val(prec, t / denom);
    }

    let far = exp_sinh(
        |x, _| {
            let fx = f(x);
            Ok(Float::with_val(prec, fx / Float::with_val(prec, x.pow(m))))
        },
        &ctx.real(1),
        decay_scale,
        &tol,
        ctx,
    )?;
    value += far.value;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::agree_digits;

    fn ctx() -> Context {
        Context::with_precision(40).unwrap()
    }

    fn exp_taylor(b: &Float, m: u32, ctx: &Context) -> Vec<Float> {
        let mut out = Vec::new();
        let mut t = ctx.real(1);
        for k in 0..m {
            out.push(t.clone());
            t = t * b / (k + 1);
            t = -t;
        }
        out
    }

    fn oracle_exp(b: &Float, m: u32, ctx: &Context) -> Float {
        let taylor = exp_taylor(b, m, ctx);
        let b = b.clone();
        fp_canonical_oracle(
            &taylor,
            |x| (-Float::with_val(x.prec(), x * &b)).exp(),
            &(ctx.real(1) / &b),
            m,
            ctx,
        )
        .unwrap()
    }

    #[test]
    fn fp_exp_examples() {
        let c = ctx();
        let g = c.euler_gamma();
        let one = c.real(1);
        assert!(agree_digits(
            &fp_exp(&one, 1, &c).unwrap(),
            &Float::with_val(c.prec(), -&g),
            55
        ));
        let expected = (c.ratio(3, 2) - &g) / 2u32;
        assert!(agree_digits(&fp_exp(&one, 3, &c).unwrap(), &expected, 55));
        assert!(agree_digits(
            &fp_exp(&one, 3, &c).unwrap(),
            &c.parse("0.4613921675").unwrap(),
            9
        ));
        let half = c.ratio(1, 2);
        assert!(agree_digits(&fp_exp(&half, 1, &c).unwrap(), &(c.ln2() - &g), 55));
        // γ − 1 for m = 2
        assert!(agree_digits(&fp_exp(&one, 2, &c).unwrap(), &(g.clone() - 1u32), 55));
        assert!(fp_exp(&c.real(-1), 1, &c).is_err());
        assert!(fp_exp(&one, 0, &c).is_err());
    }

    #[test]
    fn oracle_examples() {
        let c = ctx();
        let one = c.real(1);
        let g = c.euler_gamma();
        assert!(agree_digits(
            &oracle_exp(&one, 1, &c),
            &Float::with_val(c.prec(), -&g),
            30
        ));
        assert!(agree_digits(&oracle_exp(&one, 2, &c), &(g - 1u32), 30));
        let half = c.ratio(1, 2);
        assert!(agree_digits(
            &oracle_exp(&half, 3, &c),
            &fp_exp(&half, 3, &c).unwrap(),
            30
        ));
    }

    #[test]
    fn fp_osc_examples() {
        let c = ctx();
        let g = c.euler_gamma();
        let half_pi = c.pi() / 2u32;
        let v = fp_osc(&c.real(-1), 1, &c).unwrap();
        assert!(agree_digits(&v.re, &Float::with_val(c.prec(), -&g), 55));
        assert!(agree_digits(&v.im, &Float::with_val(c.prec(), -&half_pi), 55));
        let v = fp_osc(&c.real(1), 1, &c).unwrap();
        assert!(agree_digits(&v.im, &half_pi, 55));
        // m = 3, a = −1: −(−i)²/2 · (iπ/2 − ψ(3)) = (iπ/2 + γ − 3/2)/2
        let v = fp_osc(&c.real(-1), 3, &c).unwrap();
        let re = (g.clone() - c.ratio(3, 2)) / 2u32;
        assert!(agree_digits(&v.re, &re, 55));
        assert!(agree_digits(&v.im, &(half_pi / 2u32), 55));
        assert!(fp_osc(&c.zero(), 1, &c).is_err());
    }

    #[test]
    fn fp_osc_conjugation() {
        let c = ctx();
        for m in 1..=5 {
            for a in ["0.3", "1", "2.5"] {
                let a = c.parse(a).unwrap();
                let neg = Float::with_val(c.prec(), -&a);
                let lhs = fp_osc(&neg, m, &c).unwrap();
                let rhs = fp_osc(&a, m, &c).unwrap().conj();
                assert!((&lhs - &rhs).abs() <= rhs.abs() * c.pow10_neg(55));
            }
        }
    }

    #[test]
    fn laguerre_kernel_matches_fp_exp() {
        let c = ctx();
        let half = c.ratio(1, 2);
        for k in 0..=10u32 {
            for l in 0..=2 * k {
                let lhs = fp_laguerre_exp(k, l, &c).unwrap();
                let rhs = fp_exp(&half, 2 * k + 1 - l, &c).unwrap();
                assert_eq!(lhs, rhs, "k = {k}, l = {l}");
            }
        }
        let g = c.euler_gamma();
        assert!(agree_digits(&fp_laguerre_exp(0, 0, &c).unwrap(), &(c.ln2() - &g), 55));
        assert!(agree_digits(&fp_laguerre_exp(1, 2, &c).unwrap(), &(c.ln2() - &g), 55));
        assert!(fp_laguerre_exp(1, 3, &c).is_err());
    }

    #[test]
    fn csch_exp_at_beta_one() {
        let c = ctx();
        let one = c.real(1);
        let v = fp_csch_exp(&one, &c).unwrap();
        let zp = hurwitz_zeta_sderiv_neg1(&BigComplex::from_real(one.clone()), &c).unwrap();
        let coeff = c.ln2() * 2u32 + c.euler_gamma() * 2u32 - 2u32;
        let expected = (coeff * c.ratio(-1, 12) - zp.re * 2u32) * 2u32;
        assert!(agree_digits(&v, &expected, 55));
        assert!(fp_csch_exp(&c.zero(), &c).is_err());
    }

    #[test]
    fn csch_osc_conjugation() {
        let c = ctx();
        let kappa = c.parse("0.7").unwrap();
        let v = fp_csch_osc(&kappa, &c).unwrap();
        // same formula with the conjugate Hurwitz argument
        let a = electric_hurwitz_argument(&kappa, &c).conj();
        let sqrt_kappa = Float::with_val(c.prec(), kappa.sqrt_ref());
        let coeff = digamma_int(2, &c).unwrap() - Float::with_val(c.prec(), &sqrt_kappa * 2u32).ln();
        let conj = (&hurwitz_zeta_neg1(&a, &c).scale(&coeff) + &hurwitz_zeta_sderiv_neg1(&a, &c).unwrap())
            .scale(&(sqrt_kappa * -4i32));
        assert!((&conj - &v.conj()).abs() <= v.abs() * c.pow10_neg(55));
        assert!(fp_csch_osc(&c.real(-1), &c).is_err());
    }

    #[test]
    fn tagged_values() {
        let c = ctx();
        let v = FinitePartValue::evaluate(FinitePartKind::Exponential, &c.real(1), 1, &c).unwrap();
        assert_eq!(v.order_m, 1);
        assert!(matches!(v.value, FinitePartScalar::Real(_)));
        assert!(FinitePartValue::evaluate(FinitePartKind::CschExponential, &c.real(1), 3, &c).is_err());
    }
}
