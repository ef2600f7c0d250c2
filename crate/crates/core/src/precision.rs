//! Working-precision contexts and the multiprecision scalar types.
//!
//! `BigReal` is an MPFR float; `BigComplex` is a pair of them with the
//! handful of elementary operations the rest of the crate needs. Every
//! numeric routine takes a [`Context`] and evaluates at
//! `digits + guard_digits` decimal digits, rounding to nearest.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Arbitrary-precision real scalar.
pub type BigReal = Float;

pub const MIN_DIGITS: u32 = 30;
pub const DEFAULT_GUARD_DIGITS: u32 = 20;

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

#[derive(Debug, Clone)]
struct Constants {
    pi: Float,
    euler_gamma: Float,
    ln2: Float,
}

/// Decimal working precision plus guard digits. Immutable once built; the
/// constant cache is filled on first use and then only read.
#[derive(Debug, Clone)]
pub struct Context {
    digits: u32,
    guard_digits: u32,
    constants: OnceLock<Constants>,
    pub(crate) zeta_coefficients: OnceLock<Vec<Float>>,
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        self.digits == other.digits && self.guard_digits == other.guard_digits
    }
}

impl Context {
    /// Context with `digits` working digits and the default guard.
    pub fn with_precision(digits: u32) -> Result<Self> {
        Self::with_guard(digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(digits: u32, guard_digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::Config(format!(
                "working precision must be at least {MIN_DIGITS} digits, got {digits}"
            )));
        }
        Ok(Context {
            digits,
            guard_digits,
            constants: OnceLock::new(),
            zeta_coefficients: OnceLock::new(),
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Digits actually carried by every intermediate.
    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard_digits
    }

    /// Binary precision of every value produced under this context.
    pub fn prec(&self) -> u32 {
        digits_to_bits(self.working_digits())
    }

    /// A sibling context with `extra` more target digits (same guard).
    pub fn raised(&self, extra: u32) -> Context {
        Context {
            digits: self.digits + extra,
            guard_digits: self.guard_digits,
            constants: OnceLock::new(),
            zeta_coefficients: OnceLock::new(),
        }
    }

    pub fn real<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.prec(), value)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.prec())
    }

    pub fn complex<R, I>(&self, re: R, im: I) -> BigComplex
    where
        Float: rug::Assign<R> + rug::Assign<I>,
    {
        BigComplex::new(self.real(re), self.real(im))
    }

    /// `p / q` rounded once.
    pub fn ratio(&self, p: i64, q: i64) -> Float {
        let mut x = self.real(p);
        x /= q;
        x
    }

    /// Parse a decimal string such as `"1e-2"` or `"0.125"`.
    pub fn parse(&self, s: &str) -> Result<Float> {
        let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let x = Float::with_val(self.prec(), parsed);
        if !x.is_finite() {
            return Err(Error::Parse(format!("{s:?} is not finite")));
        }
        Ok(x)
    }

    fn constants(&self) -> &Constants {
        self.constants.get_or_init(|| {
            let prec = self.prec();
            Constants {
                pi: Float::with_val(prec, Constant::Pi),
                euler_gamma: Float::with_val(prec, Constant::Euler),
                ln2: Float::with_val(prec, Constant::Log2),
            }
        })
    }

    pub fn pi(&self) -> Float {
        self.constants().pi.clone()
    }

    /// Euler–Mascheroni constant γ = −ψ(1).
    pub fn euler_gamma(&self) -> Float {
        self.constants().euler_gamma.clone()
    }

    pub fn ln2(&self) -> Float {
        self.constants().ln2.clone()
    }

    /// 10^(−n) at working precision.
    pub fn pow10_neg(&self, n: i64) -> Float {
        let ten = self.real(10);
        ten.pow(-n)
    }

    /// Relative unit of the working precision, 10^(−(digits+guard)).
    pub fn epsilon(&self) -> Float {
        self.pow10_neg(self.working_digits() as i64)
    }

    /// Target relative accuracy, 10^(−digits).
    pub fn tolerance(&self) -> Float {
        self.pow10_neg(self.digits as i64)
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * BITS_PER_DIGIT).ceil() as u32 + 4
}

/// Complex scalar built from two [`BigReal`] parts.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", format_sci(&self.re, 20), format_sci(&self.im, 20))
    }
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        BigComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        BigComplex {
            re: Float::with_val(prec, 1),
            im: Float::new(prec),
        }
    }

    /// The imaginary unit.
    pub fn i(prec: u32) -> Self {
        BigComplex {
            re: Float::new(prec),
            im: Float::with_val(prec, 1),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    /// |z|
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in (−π, π].
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, k: &Float) -> Self {
        let prec = self.prec();
        BigComplex {
            re: Float::with_val(prec, &self.re * k),
            im: Float::with_val(prec, &self.im * k),
        }
    }

    /// Multiply by i.
    pub fn mul_i(&self) -> Self {
        BigComplex {
            re: Float::with_val(self.im.prec(), -&self.im),
            im: self.re.clone(),
        }
    }

    pub fn add_real(&self, x: &Float) -> Self {
        BigComplex {
            re: Float::with_val(self.prec(), &self.re + x),
            im: self.im.clone(),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Self {
        let prec = self.prec();
        let den = Float::with_val(prec, self.re.square_ref()) + Float::with_val(prec, self.im.square_ref());
        BigComplex {
            re: Float::with_val(prec, &self.re / &den),
            im: Float::with_val(prec, -(&self.im / den)),
        }
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let modulus = Float::with_val(prec, self.re.exp_ref());
        let (sin, cos) = self.im.clone().sin_cos(Float::new(prec));
        BigComplex {
            re: Float::with_val(prec, &modulus * &cos),
            im: Float::with_val(prec, &modulus * &sin),
        }
    }

    /// Principal logarithm; branch cut on the negative real axis.
    pub fn ln(&self) -> Self {
        BigComplex {
            re: self.abs().ln(),
            im: self.arg(),
        }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let prec = self.prec();
        let r = self.abs().sqrt();
        let half_arg = self.arg() / 2u32;
        let (sin, cos) = half_arg.sin_cos(Float::new(prec));
        BigComplex {
            re: Float::with_val(prec, &r * &cos),
            im: Float::with_val(prec, &r * &sin),
        }
    }

    /// z^s on the principal branch, exp(s·ln z).
    pub fn powc(&self, s: &BigComplex) -> Self {
        (s * &self.ln()).exp()
    }

    pub fn powi(&self, n: i64) -> Self {
        let prec = self.prec();
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result = BigComplex::one(prec);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = base.square();
            e >>= 1;
        }
        result
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        BigComplex {
            re: Float::with_val(prec, &self.re + &rhs.re),
            im: Float::with_val(prec, &self.im + &rhs.im),
        }
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        BigComplex {
            re: Float::with_val(prec, &self.re - &rhs.re),
            im: Float::with_val(prec, &self.im - &rhs.im),
        }
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        let ac = Float::with_val(prec, &self.re * &rhs.re);
        let bd = Float::with_val(prec, &self.im * &rhs.im);
        let ad = Float::with_val(prec, &self.re * &rhs.im);
        let bc = Float::with_val(prec, &self.im * &rhs.re);
        BigComplex {
            re: ac - bd,
            im: ad + bc,
        }
    }
}

impl Div for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        self * &rhs.recip()
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex { (&self).$m(&rhs) }
        }
        impl $tr<&BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &BigComplex) -> BigComplex { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

/// Values that can be compared digit-by-digit.
pub trait DigitAgreement {
    fn agrees_with(&self, other: &Self, n: u32) -> bool;
}

fn agree_real(a: &Float, b: &Float, n: u32) -> bool {
    let prec = a.prec().max(b.prec()).max(64);
    let diff = Float::with_val(prec, a - b).abs();
    if diff.is_zero() {
        return true;
    }
    let scale = Float::with_val(prec, a.abs_ref()).max(&Float::with_val(prec, b.abs_ref()));
    let tol = Float::with_val(prec, 10).pow(-(n as i64)) * 5u32 * scale;
    diff <= tol
}

impl DigitAgreement for Float {
    fn agrees_with(&self, other: &Self, n: u32) -> bool {
        agree_real(self, other, n)
    }
}

impl DigitAgreement for BigComplex {
    fn agrees_with(&self, other: &Self, n: u32) -> bool {
        agree_real(&self.re, &other.re, n) && agree_real(&self.im, &other.im, n)
    }
}

/// True iff `|a − b| ≤ 5·10^(−n)·max(|a|, |b|)` (componentwise for complex).
pub fn agree_digits<T: DigitAgreement>(a: &T, b: &T, n: u32) -> bool {
    a.agrees_with(b, n)
}

/// Number of leading significant digits on which `a` and `b` agree under
/// the [`agree_digits`] convention.
pub fn agreeing_digits(a: &Float, b: &Float) -> u32 {
    let mut n = 0;
    while n < 10_000 && agree_real(a, b, n + 1) {
        n += 1;
        if a == b {
            return u32::MAX;
        }
    }
    n
}

/// Scientific notation with `sig` significant digits and an explicit `e`
/// exponent marker, e.g. `1.932384796847e-6`. Zero prints as `0`.
pub fn format_sci(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sig = sig.max(1);
    let (negative, digits, exp) = x.to_sign_string_exp(10, Some(sig));
    let exp = exp.unwrap_or(0) - 1;
    let mut out = String::with_capacity(sig + 8);
    if negative {
        out.push('-');
    }
    let (head, tail) = digits.split_at(1);
    out.push_str(head);
    let tail = tail.trim_end_matches('0');
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    out.push('e');
    out.push_str(&exp.to_string());
    out
}

/// Shortest decimal string that parses back to exactly `x` at its precision.
pub fn format_exact(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let (negative, digits, exp) = x.to_sign_string_exp(10, None);
    let exp = exp.unwrap_or(0) - 1;
    let (head, tail) = digits.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    out.push('e');
    out.push_str(&exp.to_string());
    out
}

/// Parse a decimal string at an explicit binary precision.
pub fn parse_at(s: &str, prec: u32) -> Result<Float> {
    let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    let x = Float::with_val(prec, parsed);
    if !x.is_finite() {
        return Err(Error::Parse(format!("{s:?} is not finite")));
    }
    Ok(x)
}

pub(crate) fn ensure_finite(x: &Float, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Numerical(format!("{what} is not finite")))
    }
}

pub(crate) fn ensure_positive(x: &Float, what: &str) -> Result<()> {
    if x.is_finite() && *x > 0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} must be positive, got {}",
            format_sci(x, 10)
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::with_precision(40).unwrap()
    }

    #[test]
    fn constructor_enforces_minimum() {
        assert_eq!(Context::with_precision(100).unwrap().digits(), 100);
        assert_eq!(Context::with_precision(30).unwrap().digits(), 30);
        assert!(matches!(Context::with_precision(10), Err(Error::Config(_))));
        assert_eq!(Context::with_precision(30).unwrap().guard_digits(), 20);
    }

    #[test]
    fn agreement_examples() {
        let c = ctx();
        let a = c.parse("1.2345").unwrap();
        let b = c.parse("1.2346").unwrap();
        assert!(agree_digits(&a, &b, 3));
        assert!(!agree_digits(&a, &b, 5));
        assert!(agree_digits(&c.zero(), &c.zero(), 10));
    }

    #[test]
    fn complex_agreement_is_componentwise() {
        let c = ctx();
        let a = c.complex(1.0, 2.0);
        let b = BigComplex::new(c.real(1.0), c.parse("2.001").unwrap());
        assert!(agree_digits(&a, &b, 2));
        assert!(!agree_digits(&a, &b, 5));
    }

    fn close(a: &BigComplex, b: &BigComplex, digits: i32) -> bool {
        (a - b).abs() <= b.abs() * Float::with_val(64, 10).pow(-digits)
    }

    #[test]
    fn complex_elementary_functions() {
        let c = ctx();
        let z = c.complex(0.5, -1.25);
        assert!(close(&z.ln().exp(), &z, 55));
        assert!(close(&z.sqrt().square(), &z, 55));
        assert!(close(&(&z / &z), &BigComplex::one(c.prec()), 55));
        let cube = z.powi(3);
        assert!(close(&cube, &(&(&z * &z) * &z), 55));
        assert!(close(&z.powc(&c.complex(3.0, 0.0)), &cube, 55));
        assert!(close(&z.powi(-2), &(&z * &z).recip(), 55));
    }

    #[test]
    fn principal_branch() {
        let c = ctx();
        let minus_one = c.complex(-1.0, 0.0);
        let l = minus_one.ln();
        assert!(l.re.is_zero());
        assert!(agree_digits(&l.im, &c.pi(), 55));
        let s = c.complex(-4.0, 0.0).sqrt();
        assert!(agree_digits(&s.im, &c.real(2), 55));
        assert!(s.re.clone().abs() < 1e-50);
    }

    #[test]
    fn sci_format() {
        let c = ctx();
        assert_eq!(
            format_sci(&c.parse("1.932384796847e-6").unwrap(), 13),
            "1.932384796847e-6"
        );
        assert_eq!(format_sci(&c.parse("-12345.678").unwrap(), 6), "-1.23457e4");
        assert_eq!(format_sci(&c.real(2), 6), "2e0");
        assert_eq!(format_sci(&c.zero(), 6), "0");
    }

    #[test]
    fn exact_format_round_trips() {
        let c = ctx();
        let x = c.real(1) / 3u32 * c.pi();
        let s = format_exact(&x);
        assert_eq!(parse_at(&s, c.prec()).unwrap(), x);
    }

    #[test]
    fn deterministic_constants() {
        let c1 = ctx();
        let c2 = ctx();
        assert_eq!(c1.euler_gamma(), c2.euler_gamma());
        assert!(agree_digits(
            &c1.euler_gamma(),
            &c1.parse("0.57721566490153286060651209008240243104215933593992")
                .unwrap(),
            45
        ));
    }
}
