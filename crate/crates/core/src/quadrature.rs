//! Double-exponential quadrature in arbitrary precision.
//!
//! `tanh_sinh` covers finite intervals, `exp_sinh` half-lines. Both refine
//! by halving the step and stop once two successive levels agree to the
//! requested relative tolerance.

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::Context;

const MAX_LEVEL: u32 = 14;
const MIN_LEVEL: u32 = 3;

#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub value: Float,
    /// |I_L − I_{L−1}| at the final level.
    pub error_estimate: Float,
    pub levels: u32,
    pub evaluations: usize,
}

/// Abscissa offset from the nearer endpoint together with the weight, for
/// the tanh-sinh map on an interval of unit half-width.
struct TanhSinhNode {
    /// distance to the nearer endpoint divided by (b − a)
    offset: Float,
    weight: Float,
}

fn tanh_sinh_node(t: &Float, prec: u32) -> TanhSinhNode {
    let half_pi = Float::with_val(prec, rug::float::Constant::Pi) / 2u32;
    let sinh = Float::with_val(prec, t.sinh_ref());
    let cosh = Float::with_val(prec, t.cosh_ref());
    let u = Float::with_val(prec, &half_pi * &sinh).abs();
    // e = exp(-2|u|); offset = e / (1 + e); sech^2(u) = 4e / (1+e)^2
    let e = Float::with_val(prec, -(u * 2u32)).exp();
    let one_plus = Float::with_val(prec, &e + 1u32);
    let offset = Float::with_val(prec, &e / &one_plus);
    let sech2 = Float::with_val(prec, &e * 4u32) / Float::with_val(prec, one_plus.square_ref());
    let weight = half_pi * cosh * sech2;
    TanhSinhNode { offset, weight }
}

/// Largest |t| worth sampling: beyond it the weights fall below 10^(−digits).
fn tanh_sinh_extent(digits: f64) -> f64 {
    // weight ~ π cosh t · exp(−π sinh t)
    let target = digits * std::f64::consts::LN_10;
    let mut t = 1.0f64;
    while std::f64::consts::PI * t.sinh() - (std::f64::consts::PI * t.cosh()).ln() < target {
        t += 0.05;
    }
    t
}

/// ∫_a^b f(x) dx. `f` receives the abscissa and its distance to `a`
/// (accurate even when the abscissa rounds to `a`).
pub fn tanh_sinh<F>(mut f: F, a: &Float, b: &Float, tol: &Float, ctx: &Context) -> Result<QuadratureResult>
where
    F: FnMut(&Float, &Float) -> Result<Float>,
{
    let prec = ctx.prec();
    let width = Float::with_val(prec, b - a);
    let extent = tanh_sinh_extent(ctx.working_digits() as f64 + 10.0);
    let mut sum = ctx.zero();
    let mut evaluations = 0usize;
    let mut previous: Option<Float> = None;
    let mut last_diff = ctx.zero();

    let mut sample = |t: &Float, sum: &mut Float, evaluations: &mut usize| -> Result<()> {
        let node = tanh_sinh_node(t, prec);
        let delta = Float::with_val(prec, &node.offset * &width);
        let (x, from_a) = if *t < 0 {
            (Float::with_val(prec, a + &delta), delta)
        } else {
            let x = Float::with_val(prec, b - &delta);
            let from_a = Float::with_val(prec, &width - &delta);
            (x, from_a)
        };
        let fx = f(&x, &from_a)?;
        if !fx.is_finite() {
            return Err(Error::Numerical(format!("integrand not finite at x = {}", x.to_f64())));
        }
        *sum += Float::with_val(prec, &fx * &node.weight);
        *evaluations += 1;
        Ok(())
    };

    for level in 0..=MAX_LEVEL {
        let h = Float::with_val(prec, 1) >> level;
        let count = (extent * (1u64 << level) as f64).ceil() as i64;
        let step = if level == 0 { 1 } else { 2 };
        let start = if level == 0 { 0 } else { 1 };
        let mut k = start;
        while k <= count {
            let t = Float::with_val(prec, &h * k);
            sample(&t, &mut sum, &mut evaluations)?;
            if k != 0 {
                sample(&Float::with_val(prec, -&t), &mut sum, &mut evaluations)?;
            }
            k += step;
        }
        let estimate = Float::with_val(prec, &sum * &h) * &width / 2u32;
        if let Some(prev) = previous.as_ref() {
            last_diff = Float::with_val(prec, &estimate - prev).abs();
            let scale = Float::with_val(prec, estimate.abs_ref());
            if level >= MIN_LEVEL && last_diff <= Float::with_val(prec, tol * &scale) {
                return Ok(QuadratureResult {
                    value: estimate,
                    error_estimate: last_diff,
                    levels: level,
                    evaluations,
                });
            }
            if level >= MIN_LEVEL && scale.is_zero() && last_diff.is_zero() {
                return Ok(QuadratureResult {
                    value: estimate,
                    error_estimate: last_diff,
                    levels: level,
                    evaluations,
                });
            }
        }
        previous = Some(estimate);
    }
    Err(Error::Numerical(format!(
        "tanh-sinh quadrature did not converge after {MAX_LEVEL} levels ({evaluations} evaluations, last difference {:e})",
        last_diff.to_f64()
    )))
}

/// ∫_a^∞ f(x) dx for integrands decaying at least exponentially, with the
/// abscissae x = a + scale·exp(π/2 · sinh t). `scale` should match the
/// decay length of f.
pub fn exp_sinh<F>(mut f: F, a: &Float, scale: &Float, tol: &Float, ctx: &Context) -> Result<QuadratureResult>
where
    F: FnMut(&Float, &Float) -> Result<Float>,
{
    let prec = ctx.prec();
    let half_pi = ctx.pi() / 2u32;
    let digits = ctx.working_digits() as f64 + 10.0;
    // left extent: weight ~ exp(−π/2 · |sinh t|) below 10^(−digits)
    let t_left = {
        let target = digits * std::f64::consts::LN_10 / std::f64::consts::FRAC_PI_2;
        target.asinh() + 0.5
    };
    let negligible = ctx.pow10_neg(ctx.working_digits() as i64 + 10);

    let mut sum = ctx.zero();
    let mut evaluations = 0usize;
    let mut previous: Option<Float> = None;
    let mut last_diff = ctx.zero();

    let mut term = |t: &Float, evaluations: &mut usize| -> Result<Float> {
        let sinh = Float::with_val(prec, t.sinh_ref());
        let cosh = Float::with_val(prec, t.cosh_ref());
        let e = Float::with_val(prec, &half_pi * &sinh).exp();
        let offset = Float::with_val(prec, scale * &e);
        let x = Float::with_val(prec, a + &offset);
        let w = Float::with_val(prec, &half_pi * &cosh) * &offset;
        let fx = f(&x, &offset)?;
        *evaluations += 1;
        if !fx.is_finite() {
            return Err(Error::Numerical(format!("integrand not finite at x = {}", x.to_f64())));
        }
        Ok(fx * w)
    };

    for level in 0..=MAX_LEVEL {
        let h = Float::with_val(prec, 1) >> level;
        let step = if level == 0 { 1 } else { 2 };
        let start = if level == 0 { 0 } else { 1 };
        // left branch down to the weight cut-off
        let left_count = (t_left * (1u64 << level) as f64).ceil() as i64;
        let mut k = start.max(1);
        if level == 0 {
            let v = term(&ctx.zero(), &mut evaluations)?;
            sum += v;
        }
        while k <= left_count {
            let t = Float::with_val(prec, &h * -k);
            let v = term(&t, &mut evaluations)?;
            sum += v;
            k += step;
        }
        // right branch until terms become negligible relative to the sum
        let mut k = start.max(1);
        let mut quiet = 0;
        loop {
            let t = Float::with_val(prec, &h * k);
            let v = term(&t, &mut evaluations)?;
            let small = Float::with_val(prec, v.abs_ref()) <= Float::with_val(prec, sum.abs_ref()) * &negligible;
            sum += v;
            if small {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            if t > 8 {
                break;
            }
            k += step;
        }
        let estimate = Float::with_val(prec, &sum * &h);
        if let Some(prev) = previous.as_ref() {
            last_diff = Float::with_val(prec, &estimate - prev).abs();
            let scale_abs = Float::with_val(prec, estimate.abs_ref());
            if level >= MIN_LEVEL && last_diff <= Float::with_val(prec, tol * &scale_abs) {
                return Ok(QuadratureResult {
                    value: estimate,
                    error_estimate: last_diff,
                    levels: level,
                    evaluations,
                });
            }
        }
        previous = Some(estimate);
    }
    Err(Error::Numerical(format!(
        "exp-sinh quadrature did not converge after {MAX_LEVEL} levels ({evaluations} evaluations, last difference {:e})",
        last_diff.to_f64()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::agree_digits;

    #[test]
    fn polynomial_and_log_endpoint() {
        let c = Context::with_precision(40).unwrap();
        let tol = c.tolerance();
        let r = tanh_sinh(
            |x, _| Ok(Float::with_val(x.prec(), x * x)),
            &c.zero(),
            &c.real(1),
            &tol,
            &c,
        )
        .unwrap();
        assert!(agree_digits(&r.value, &c.ratio(1, 3), 40));
        // ∫_0^1 ln x dx = -1, singular endpoint
        let r = tanh_sinh(
            |_, d| Ok(Float::with_val(d.prec(), d.ln_ref())),
            &c.zero(),
            &c.real(1),
            &tol,
            &c,
        )
        .unwrap();
        assert!(agree_digits(&r.value, &c.real(-1), 40));
    }

    #[test]
    fn half_line_exponential() {
        let c = Context::with_precision(40).unwrap();
        let tol = c.tolerance();
        // ∫_0^∞ x e^{-x} dx = 1
        let r = exp_sinh(
            |x, _| Ok(Float::with_val(x.prec(), -x).exp() * x),
            &c.zero(),
            &c.real(1),
            &tol,
            &c,
        )
        .unwrap();
        assert!(agree_digits(&r.value, &c.real(1), 40));
        // ∫_1^∞ e^{-2x}/x^2 dx against ∫ via tanh-sinh on the mapped interval
        let b = c.real(2);
        let r = exp_sinh(
            |x, _| {
                let e = (-Float::with_val(x.prec(), x * &b)).exp();
                Ok(e / Float::with_val(x.prec(), x.square_ref()))
            },
            &c.real(1),
            &c.ratio(1, 2),
            &tol,
            &c,
        )
        .unwrap();
        // x = 1/u: ∫_0^1 e^{-2/u} du
        let mapped = tanh_sinh(
            |_, u| {
                if u.is_zero() {
                    return Ok(Float::new(u.prec()));
                }
                Ok(Float::with_val(u.prec(), -(Float::with_val(u.prec(), 2u32 / u))).exp())
            },
            &c.zero(),
            &c.real(1),
            &tol,
            &c,
        )
        .unwrap();
        assert!(agree_digits(&r.value, &mapped.value, 38));
    }
}
