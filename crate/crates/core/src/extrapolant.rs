//! Convergent finite-part extrapolants built from a solved Laguerre
//! reconstruction of ρ(x) = x g(x).
//!
//! Magnetic:  f(β) = Σ_{k=0}^{K} (−1)^k β^{1−k} μ_k + β Δ(β)
//! Electric:  f(κ) = −Σ_{k=0}^{K} κ^{1−k} μ_k − κ Λ(κ) + (iπ/2) κ^{3/2} ρ(1/√κ)
//!
//! with μ_k = ⨍₀^∞ ρ(x)/x^{2k+2} dx.

use rug::{Float, Integer};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::finite_part::{fp_laguerre_exp, laguerre_kernel};
use crate::heisenberg_euler::ContinuationBranch;
use crate::moment_solver::{rho_eval, MomentSolution};
use crate::precision::{ensure_finite, ensure_positive, format_exact, BigComplex, Context};
use crate::special::{digamma_table, laguerre_all_real};

/// The four coefficient groups of the finite-part moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailKind {
    I,
    J,
    L,
    M,
}

/// Largest k for which μ_k splits into I_k + J_k + L_k: ⌊(d−1)/2⌋.
pub fn split_limit(d: usize) -> i64 {
    (d as i64 - 1).div_euclid(2)
}

fn factorial(n: usize) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// Coefficient of the Laguerre-to-monomial map: m! (−1)^l / ((l!)² (m−l)!).
fn laguerre_monomial(m: usize, l: usize, ctx: &Context) -> Float {
    let num = factorial(m);
    let l_fact = factorial(l);
    let den = Integer::from(&l_fact * &l_fact) * factorial(m - l);
    let mut v = ctx.real(num) / ctx.real(den);
    if l % 2 == 1 {
        v = -v;
    }
    v
}

fn solution_coefficients(sol: &MomentSolution, ctx: &Context) -> Vec<Float> {
    sol.c.iter().map(|c| ctx.real(c)).collect()
}

/// One of I_k, J_k, L_k, M_k evaluated from its double sum as displayed.
pub fn tail_coefficient(kind: TailKind, k: usize, sol: &MomentSolution, ctx: &Context) -> Result<Float> {
    let d = sol.d;
    let limit = split_limit(d);
    let split = (k as i64) <= limit;
    match kind {
        TailKind::I | TailKind::J | TailKind::L if !split => {
            return Err(Error::Domain(format!(
                "{kind:?}_k needs k <= {limit} for d = {d}, got k = {k}"
            )))
        }
        TailKind::M if split => return Err(Error::Domain(format!("M_k needs k > {limit} for d = {d}, got k = {k}"))),
        _ => {}
    }
    let c = solution_coefficients(sol, ctx);
    let kernel: Vec<Float> = (0..=(2 * k).min(d))
        .map(|l| fp_laguerre_exp(k as u32, l as u32, ctx))
        .collect::<Result<_>>()?;
    let mut total = ctx.zero();
    let (m_range, l_range): (std::ops::RangeInclusive<usize>, fn(usize, usize) -> (usize, usize)) = match kind {
        TailKind::I => (0..=2 * k, |_, m| (0, m)),
        TailKind::J => (2 * k + 1..=d, |k, _| (0, 2 * k)),
        TailKind::L => (2 * k + 1..=d, |k, m| (2 * k + 1, m)),
        TailKind::M => (0..=d, |_, m| (0, m)),
    };
    for m in m_range {
        let (lo, hi) = l_range(k, m);
        let mut inner = ctx.zero();
        for l in lo..=hi {
            let weight = laguerre_monomial(m, l, ctx);
            let factor = if l <= 2 * k {
                kernel[l].clone()
            } else {
                // convergent moment ∫₀^∞ x^{l−2k−1} e^{−x/2} dx
                let j = l - 2 * k - 1;
                ctx.real(factorial(j)) * ctx.real(Integer::from(1) << (j as u32 + 1))
            };
            inner += weight * factor;
        }
        total += inner * &c[m];
    }
    Ok(total)
}

/// μ_k from the displayed split: I_k + J_k + L_k below the limit, M_k above.
pub fn finite_part_moment(k: usize, sol: &MomentSolution, ctx: &Context) -> Result<Float> {
    if (k as i64) <= split_limit(sol.d) {
        let i = tail_coefficient(TailKind::I, k, sol, ctx)?;
        let j = tail_coefficient(TailKind::J, k, sol, ctx)?;
        let l = tail_coefficient(TailKind::L, k, sol, ctx)?;
        Ok(i + j + l)
    } else {
        tail_coefficient(TailKind::M, k, sol, ctx)
    }
}

/// Monomial coefficients e_l of Σ_m c_m L_m(x) = Σ_l e_l x^l.
pub fn monomial_coefficients(sol: &MomentSolution, ctx: &Context) -> Vec<Float> {
    let c = solution_coefficients(sol, ctx);
    (0..=sol.d)
        .map(|l| {
            let mut sum = ctx.zero();
            for (m, cm) in c.iter().enumerate().skip(l) {
                // m!/(m−l)!
                let mut falling = Integer::from(1);
                for j in m - l + 1..=m {
                    falling *= j as u32;
                }
                sum += ctx.real(falling) * cm;
            }
            let l_fact = factorial(l);
            let mut v = sum / ctx.real(Integer::from(&l_fact * &l_fact));
            if l % 2 == 1 {
                v = -v;
            }
            v
        })
        .collect()
}

/// μ_0..μ_K in one pass over the monomial form of ρ, the same double sums
/// regrouped by the exponent j = 2k+1−l of x^{−j} e^{−x/2}.
pub fn finite_part_moments(sol: &MomentSolution, terms: usize, ctx: &Context) -> Vec<Float> {
    let e = monomial_coefficients(sol, ctx);
    let max_order = 2 * terms + 1;
    let psi = digamma_table(max_order, ctx);
    // kernel[j] = ⨍ e^{−x/2}/x^j for j ≥ 1
    let kernel: Vec<Float> = (1..=max_order)
        .map(|j| laguerre_kernel(j as u32, &psi[j - 1], ctx))
        .collect();
    // convergent[j] = ∫ x^j e^{−x/2} = j! 2^{j+1}
    let convergent: Vec<Float> = (0..=sol.d)
        .map(|j| ctx.real(factorial(j)) * ctx.real(Integer::from(1) << (j as u32 + 1)))
        .collect();
    (0..=terms)
        .map(|k| {
            let mut mu = ctx.zero();
            for (l, el) in e.iter().enumerate() {
                let weight = if l <= 2 * k {
                    &kernel[2 * k - l]
                } else {
                    &convergent[l - 2 * k - 1]
                };
                mu += Float::with_val(ctx.prec(), el * weight);
            }
            mu
        })
        .collect()
}

fn real_part_checked(z: BigComplex, what: &str, ctx: &Context) -> Result<Float> {
    let tol = ctx.pow10_neg(ctx.digits() as i64 - ctx.guard_digits() as i64);
    let scale = Float::with_val(ctx.prec(), z.re.abs_ref()).max(&ctx.real(1));
    if Float::with_val(ctx.prec(), z.im.abs_ref()) > Float::with_val(ctx.prec(), &tol * &scale) {
        return Err(Error::Consistency(format!(
            "{what} has imaginary residue {:.3e} for real coefficients",
            z.im.to_f64()
        )));
    }
    Ok(z.re)
}

/// Δ(β) = (π√β/4)(ρ(i/√β) + ρ(−i/√β)) + (√β ln β/(4i))(ρ(i/√β) − ρ(−i/√β)).
pub fn delta_term(beta: &Float, sol: &MomentSolution, ctx: &Context) -> Result<Float> {
    ensure_positive(beta, "beta")?;
    let raw = delta_term_complex(beta, sol, ctx);
    real_part_checked(raw, "Δ(β)", ctx)
}

/// Δ(β) before the imaginary residue is dropped.
pub fn delta_term_complex(beta: &Float, sol: &MomentSolution, ctx: &Context) -> BigComplex {
    let prec = ctx.prec();
    let sqrt_beta = ctx.real(beta.sqrt_ref());
    let t = ctx.real(1) / &sqrt_beta;
    let up = rho_eval(sol, &BigComplex::new(ctx.zero(), t.clone()), ctx);
    let down = rho_eval(sol, &BigComplex::new(ctx.zero(), -t), ctx);
    let sum = &up + &down;
    let diff = &up - &down;
    let first = sum.scale(&(ctx.pi() * &sqrt_beta / 4u32));
    // 1/(4i) = −i/4
    let log_coeff = Float::with_val(prec, &sqrt_beta * Float::with_val(prec, beta.ln_ref())) / 4u32;
    let second = diff.mul_i().scale(&-log_coeff);
    &first + &second
}

fn rho_real(sol: &MomentSolution, x: &Float, ctx: &Context) -> Float {
    let lag = laguerre_all_real(sol.d, x, ctx);
    let mut sum = ctx.zero();
    for (c, l) in sol.c.iter().zip(&lag) {
        sum += Float::with_val(ctx.prec(), c * l);
    }
    let damping = Float::with_val(ctx.prec(), x * ctx.ratio(-1, 2)).exp();
    sum * damping * x
}

/// Λ(κ) = (√κ/2) ln(√κ) (ρ(1/√κ) − ρ(−1/√κ)).
pub fn lambda_term(kappa: &Float, sol: &MomentSolution, ctx: &Context) -> Result<Float> {
    ensure_positive(kappa, "kappa")?;
    let sqrt_kappa = ctx.real(kappa.sqrt_ref());
    let t = ctx.real(1) / &sqrt_kappa;
    let diff = rho_real(sol, &t, ctx) - rho_real(sol, &(-t.clone()), ctx);
    let log = ctx.real(sqrt_kappa.ln_ref());
    Ok(sqrt_kappa / 2u32 * log * diff)
}

/// Which extrapolant produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Magnetic,
    Electric,
}

/// Extrapolant value with the pieces needed for convergence studies.
#[derive(Debug, Clone)]
pub struct ExtrapolantResult {
    pub field: FieldKind,
    pub argument: Float,
    /// real for magnetic (imaginary part exactly zero), complex for electric
    pub value: BigComplex,
    /// K: the tail runs over k = 0..=K
    pub terms_used: usize,
    /// |β^{1−k} μ_k| or |κ^{1−k} μ_k| for k = 0..=K
    pub term_magnitudes: Vec<Float>,
    /// Σ_k of the signed tail terms
    pub tail_sum: Float,
    /// β Δ(β) for magnetic; −κ Λ(κ) + (iπ/2) κ^{3/2} ρ(1/√κ) for electric
    pub closed_part: BigComplex,
}

impl ExtrapolantResult {
    pub fn real_value(&self) -> &Float {
        &self.value.re
    }
}

impl Serialize for ExtrapolantResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ExtrapolantResult", 9)?;
        s.serialize_field("schema", &1)?;
        s.serialize_field(
            "field",
            match self.field {
                FieldKind::Magnetic => "magnetic",
                FieldKind::Electric => "electric",
            },
        )?;
        s.serialize_field("argument", &format_exact(&self.argument))?;
        s.serialize_field("re", &format_exact(&self.value.re))?;
        s.serialize_field("im", &format_exact(&self.value.im))?;
        s.serialize_field("terms_used", &self.terms_used)?;
        s.serialize_field(
            "term_magnitudes",
            &self.term_magnitudes.iter().map(format_exact).collect::<Vec<_>>(),
        )?;
        s.serialize_field("tail_sum", &format_exact(&self.tail_sum))?;
        s.serialize_field(
            "closed_part",
            &[format_exact(&self.closed_part.re), format_exact(&self.closed_part.im)],
        )?;
        s.end()
    }
}

/// Default tail length: K = 2d.
pub fn default_terms(sol: &MomentSolution) -> usize {
    2 * sol.d
}

fn tail(x: &Float, mu: &[Float], alternate: bool, ctx: &Context) -> (Float, Vec<Float>) {
    let prec = ctx.prec();
    let mut sum = ctx.zero();
    let mut magnitudes = Vec::with_capacity(mu.len());
    // x^{1−k}, starting at x and divided down
    let mut power = ctx.real(x);
    for (k, m) in mu.iter().enumerate() {
        let term = Float::with_val(prec, &power * m);
        magnitudes.push(Float::with_val(prec, term.abs_ref()));
        if alternate && k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        power /= x;
    }
    (sum, magnitudes)
}

pub fn extrapolate_magnetic(
    beta: &Float,
    sol: &MomentSolution,
    terms: Option<usize>,
    ctx: &Context,
) -> Result<ExtrapolantResult> {
    ensure_positive(beta, "beta")?;
    let beta = ctx.real(beta);
    let k_max = terms.unwrap_or_else(|| default_terms(sol));
    let mu = finite_part_moments(sol, k_max, ctx);
    let (tail_sum, term_magnitudes) = tail(&beta, &mu, true, ctx);
    let closed = Float::with_val(ctx.prec(), &beta * delta_term(&beta, sol, ctx)?);
    let value = Float::with_val(ctx.prec(), &tail_sum + &closed);
    ensure_finite(&value, "magnetic extrapolant")?;
    Ok(ExtrapolantResult {
        field: FieldKind::Magnetic,
        argument: beta,
        value: BigComplex::from_real(value),
        terms_used: k_max,
        term_magnitudes,
        tail_sum,
        closed_part: BigComplex::from_real(closed),
    })
}

pub fn extrapolate_electric(
    kappa: &Float,
    sol: &MomentSolution,
    terms: Option<usize>,
    branch: ContinuationBranch,
    ctx: &Context,
) -> Result<ExtrapolantResult> {
    ensure_positive(kappa, "kappa")?;
    let prec = ctx.prec();
    let kappa = ctx.real(kappa);
    let k_max = terms.unwrap_or_else(|| default_terms(sol));
    let mu = finite_part_moments(sol, k_max, ctx);
    let (tail_sum, term_magnitudes) = tail(&kappa, &mu, false, ctx);
    let lambda = lambda_term(&kappa, sol, ctx)?;
    let sqrt_kappa = ctx.real(kappa.sqrt_ref());
    let kappa_three_halves = Float::with_val(prec, &kappa * &sqrt_kappa);
    let rho = rho_real(sol, &(ctx.real(1) / &sqrt_kappa), ctx);
    let mut imaginary = ctx.pi() / 2u32 * kappa_three_halves * rho;
    if branch == ContinuationBranch::Above {
        imaginary = -imaginary;
    }
    let closed_re = -Float::with_val(prec, &kappa * &lambda);
    let re = -Float::with_val(prec, &tail_sum) + &closed_re;
    ensure_finite(&re, "electric extrapolant")?;
    ensure_finite(&imaginary, "electric extrapolant")?;
    Ok(ExtrapolantResult {
        field: FieldKind::Electric,
        argument: kappa,
        value: BigComplex::new(re, imaginary.clone()),
        terms_used: k_max,
        term_magnitudes,
        tail_sum,
        closed_part: BigComplex::new(closed_re, imaginary),
    })
}

/// Diagnostics on the tail terms of an extrapolant.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// first index from which the magnitudes never increase
    pub monotone_from: usize,
    pub last_magnitude: Float,
    /// the last term's magnitude
    pub truncation_estimate: Float,
}

pub fn convergence_report(result: &ExtrapolantResult) -> ConvergenceReport {
    convergence_of(&result.term_magnitudes)
}

pub fn convergence_of(magnitudes: &[Float]) -> ConvergenceReport {
    let mut monotone_from = magnitudes.len().saturating_sub(1);
    while monotone_from > 0 && magnitudes[monotone_from - 1] >= magnitudes[monotone_from] {
        monotone_from -= 1;
    }
    let last = magnitudes.last().cloned().unwrap_or_else(|| Float::new(64));
    ConvergenceReport {
        monotone_from,
        truncation_estimate: last.clone(),
        last_magnitude: last,
    }
}
