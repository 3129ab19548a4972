//! Arbitrary-precision complex arithmetic with decimal digit budgets.
//!
//! Every value carries the decimal working precision it was created with.
//! Internally a binary mantissa of `digits * log2(10) + GUARD_BITS` bits is
//! used, so the decimal contract holds with room to spare. Binary operations
//! produce results at the smaller of the two operand budgets.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Exponent, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

const RM: RoundingMode = RoundingMode::ToEven;

/// Extra binary digits carried beyond the requested decimal budget.
pub const GUARD_BITS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrecisionError {
    #[error("malformed decimal literal {0:?}")]
    MalformedDecimal(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("digit budget must be at least 1")]
    ZeroDigits,
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("allocate constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Binary mantissa width used for a decimal budget.
pub fn precision_bits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// BigFloat <-> exact integer helpers

fn zero_float(p: usize) -> BigFloat {
    BigFloat::from_word(0, p)
}

pub(crate) fn float_from_bigint(n: &BigInt, p: usize) -> BigFloat {
    if n.is_zero() {
        return zero_float(p);
    }
    let bitlen = n.bits() as usize;
    let words_len = bitlen.div_ceil(64);
    let shift = words_len * 64 - bitlen;
    let mag: BigUint = n.magnitude() << shift;
    let mut words = mag.to_u64_digits();
    words.resize(words_len, 0);
    let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
    let mut f = BigFloat::from_words(&words, sign, bitlen as Exponent);
    f.set_precision(p.max(64), RM)
        .expect("precision within astro-float limits");
    f
}

/// Exact decomposition `x = mantissa * 2^shift`. `None` for NaN and infinities.
pub(crate) fn exact_parts(x: &BigFloat) -> Option<(BigInt, i64)> {
    if x.is_zero() {
        return Some((BigInt::zero(), 0));
    }
    let (words, _, sign, exp, _) = x.as_raw_parts()?;
    let mag = BigUint::from_slice(
        &words
            .iter()
            .flat_map(|w| [(*w & 0xffff_ffff) as u32, (*w >> 32) as u32])
            .collect::<Vec<_>>(),
    );
    let shift = exp as i64 - 64 * words.len() as i64;
    let s = if sign == Sign::Neg { IntSign::Minus } else { IntSign::Plus };
    Some((BigInt::from_biguint(s, mag), shift))
}

/// Nearest integer, ties away from zero.
pub(crate) fn round_float(x: &BigFloat) -> BigInt {
    let (m, shift) = exact_parts(x).expect("finite value");
    if shift >= 0 {
        return m << shift as usize;
    }
    let s = (-shift) as usize;
    let half = BigInt::one() << (s - 1);
    let mag = m.abs();
    let rounded = (mag + half) >> s;
    if m.is_negative() {
        -rounded
    } else {
        rounded
    }
}

fn ldexp(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

pub(crate) fn float_to_f64(x: &BigFloat) -> f64 {
    let Some((m, shift)) = exact_parts(x) else {
        return f64::NAN;
    };
    if m.is_zero() {
        return 0.0;
    }
    let bits = m.bits() as i64;
    let drop = (bits - 64).max(0);
    let top = (m.abs() >> drop as usize).to_u64().unwrap_or(u64::MAX) as f64;
    let v = ldexp(top, shift + drop);
    if m.is_negative() {
        -v
    } else {
        v
    }
}

/// `log10 |x|`, `-inf` for zero.
pub(crate) fn float_log10_abs(x: &BigFloat) -> f64 {
    let Some((m, shift)) = exact_parts(x) else {
        return f64::NAN;
    };
    if m.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = m.bits() as i64;
    let drop = (bits - 60).max(0);
    let top = (m.abs() >> drop as usize).to_u64().unwrap_or(u64::MAX) as f64;
    top.log10() + (shift + drop) as f64 * std::f64::consts::LOG10_2
}

fn float_cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    match a.cmp(b) {
        Some(c) if c < 0 => Ordering::Less,
        Some(0) => Ordering::Equal,
        Some(_) => Ordering::Greater,
        None => Ordering::Equal,
    }
}

fn float_abs(a: &BigFloat) -> BigFloat {
    let mut r = a.clone();
    if r.is_negative() {
        r.inv_sign();
    }
    r
}

fn float_hypot(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    if b.is_zero() {
        return float_abs(a);
    }
    if a.is_zero() {
        return float_abs(b);
    }
    let s = a.mul(a, p, RM).add(&b.mul(b, p, RM), p, RM);
    s.sqrt(p, RM)
}

fn float_atan2(y: &BigFloat, x: &BigFloat, p: usize) -> BigFloat {
    let pi = with_consts(|cc| cc.pi(p, RM));
    if x.is_zero() {
        if y.is_zero() {
            return zero_float(p);
        }
        let half = pi.div(&BigFloat::from_word(2, p), p, RM);
        return if y.is_negative() { half.neg() } else { half };
    }
    let base = with_consts(|cc| y.div(x, p, RM).atan(p, RM, cc));
    if x.is_positive() {
        base
    } else if y.is_negative() {
        base.sub(&pi, p, RM)
    } else {
        base.add(&pi, p, RM)
    }
}

// ---------------------------------------------------------------------------
// Decimal literals

/// Parses a decimal literal into `mantissa * 10^exponent`.
fn parse_decimal(text: &str) -> Result<(BigInt, i64), PrecisionError> {
    let err = || PrecisionError::MalformedDecimal(text.to_string());
    let s = text.trim();
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let mut exponent: i64 = match exp {
        Some(e) => e.parse().map_err(|_| err())?,
        None => 0,
    };
    let digits = format!("{int_part}{frac_part}");
    let mut m: BigInt = digits.parse().map_err(|_| err())?;
    exponent -= frac_part.len() as i64;
    if neg {
        m = -m;
    }
    Ok((m, exponent))
}

fn float_from_decimal(m: &BigInt, exp10: i64, p: usize) -> BigFloat {
    let ten = BigInt::from(10u32);
    if exp10 >= 0 {
        float_from_bigint(&(m * ten.pow(exp10 as u32)), p)
    } else {
        let num = float_from_bigint(m, p + 64);
        let den = float_from_bigint(&ten.pow((-exp10) as u32), p + 64);
        let mut q = num.div(&den, p, RM);
        q.set_precision(p, RM).expect("precision");
        q
    }
}

/// Renders `x` with `sig` significant decimal digits, trailing zeros removed.
pub(crate) fn format_float(x: &BigFloat, sig: u32) -> String {
    let sig = sig.max(1);
    let Some((m, shift)) = exact_parts(x) else {
        return "NaN".into();
    };
    if m.is_zero() {
        return "0".into();
    }
    let neg = m.is_negative();
    let mag = m.abs();
    let mut d = float_log10_abs(x).floor() as i64;
    let ten = BigInt::from(10u32);
    let lower = ten.pow(sig - 1);
    let upper = ten.pow(sig);
    let q = loop {
        let k = sig as i64 - 1 - d;
        let mut num = mag.clone();
        let mut den = BigInt::one();
        if k >= 0 {
            num *= ten.pow(k as u32);
        } else {
            den *= ten.pow((-k) as u32);
        }
        if shift >= 0 {
            num <<= shift as usize;
        } else {
            den <<= (-shift) as usize;
        }
        let twice: BigInt = num * 2 + &den;
        let q = twice.div_floor(&(den * 2));
        if q >= upper {
            d += 1;
        } else if q < lower {
            d -= 1;
        } else {
            break q;
        }
    };
    let digits = q.to_string();
    let body = if (-6..21).contains(&d) {
        if d >= 0 {
            let int_len = (d + 1) as usize;
            if int_len >= digits.len() {
                format!("{}{}", digits, "0".repeat(int_len - digits.len()))
            } else {
                strip_fraction(format!("{}.{}", &digits[..int_len], &digits[int_len..]))
            }
        } else {
            strip_fraction(format!("0.{}{}", "0".repeat((-d - 1) as usize), digits))
        }
    } else {
        let mantissa = if digits.len() > 1 {
            strip_fraction(format!("{}.{}", &digits[..1], &digits[1..]))
        } else {
            digits
        };
        format!("{mantissa}e{d}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn strip_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}

// ---------------------------------------------------------------------------
// Real

/// A non-complex arbitrary-precision quantity: magnitudes, residuals, bounds.
#[derive(Clone, Debug)]
pub struct Real {
    value: BigFloat,
    digits: u32,
}

impl Real {
    pub(crate) fn from_float(value: BigFloat, digits: u32) -> Self {
        Real { value, digits }
    }

    pub fn zero(digits: u32) -> Self {
        Real {
            value: zero_float(precision_bits(digits)),
            digits,
        }
    }

    pub fn from_f64(v: f64, digits: u32) -> Self {
        Real {
            value: BigFloat::from_f64(v, precision_bits(digits)),
            digits,
        }
    }

    pub fn to_f64(&self) -> f64 {
        float_to_f64(&self.value)
    }

    /// `log10 |self|`; negative infinity for zero.
    pub fn log10(&self) -> f64 {
        float_log10_abs(&self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// True when `|self| < 10^exponent`.
    pub fn below_pow10(&self, exponent: f64) -> bool {
        self.log10() < exponent
    }

    pub fn max(self, other: Real) -> Real {
        if float_cmp(&self.value, &other.value) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn to_decimal_string(&self, sig: u32) -> String {
        format_float(&self.value, sig)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        float_cmp(&self.value, &other.value) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(float_cmp(&self.value, &other.value))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_float(&self.value, 6))
    }
}

// ---------------------------------------------------------------------------
// ArbitraryComplex

/// A complex number carried at an explicit decimal working precision.
#[derive(Clone, Debug)]
pub struct ArbitraryComplex {
    re: BigFloat,
    im: BigFloat,
    digits: u32,
}

impl ArbitraryComplex {
    pub fn zero(digits: u32) -> Self {
        let p = precision_bits(digits);
        ArbitraryComplex {
            re: zero_float(p),
            im: zero_float(p),
            digits,
        }
    }

    pub fn one(digits: u32) -> Self {
        Self::from_i64(1, digits)
    }

    pub fn from_i64(v: i64, digits: u32) -> Self {
        Self::from_integer(&BigInt::from(v), digits)
    }

    pub fn from_integer(v: &BigInt, digits: u32) -> Self {
        let p = precision_bits(digits);
        ArbitraryComplex {
            re: float_from_bigint(v, p),
            im: zero_float(p),
            digits,
        }
    }

    pub fn from_f64(re: f64, im: f64, digits: u32) -> Self {
        let p = precision_bits(digits);
        ArbitraryComplex {
            re: BigFloat::from_f64(re, p),
            im: BigFloat::from_f64(im, p),
            digits,
        }
    }

    pub(crate) fn from_parts(re: BigFloat, im: BigFloat, digits: u32) -> Self {
        ArbitraryComplex { re, im, digits }
    }

    /// Builds a value from two decimal literals.
    pub fn parse(re: &str, im: &str, digits: u32) -> Result<Self, PrecisionError> {
        if digits == 0 {
            return Err(PrecisionError::ZeroDigits);
        }
        let p = precision_bits(digits);
        let (rm, re_exp) = parse_decimal(re)?;
        let (imm, im_exp) = parse_decimal(im)?;
        Ok(ArbitraryComplex {
            re: float_from_decimal(&rm, re_exp, p),
            im: float_from_decimal(&imm, im_exp, p),
            digits,
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn bits(&self) -> usize {
        precision_bits(self.digits)
    }

    /// Re-rounds (or widens) to a new digit budget.
    pub fn with_digits(&self, digits: u32) -> Self {
        let p = precision_bits(digits);
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        re.set_precision(p, RM).expect("precision");
        im.set_precision(p, RM).expect("precision");
        ArbitraryComplex { re, im, digits }
    }

    pub fn re(&self) -> Real {
        Real::from_float(self.re.clone(), self.digits)
    }

    pub fn im(&self) -> Real {
        Real::from_float(self.im.clone(), self.digits)
    }

    /// Replaces a real or imaginary part below `10^-digits · max(1, |z|)` by
    /// an exact zero; for display of values known only to working precision.
    pub fn chopped(&self) -> Self {
        let p = self.bits();
        let floor = -(self.digits as f64) + self.norm().log10().max(0.0);
        let keep = |x: &BigFloat| -> BigFloat {
            if float_log10_abs(x) < floor {
                zero_float(p)
            } else {
                x.clone()
            }
        };
        ArbitraryComplex {
            re: keep(&self.re),
            im: keep(&self.im),
            digits: self.digits,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (float_to_f64(&self.re), float_to_f64(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let digits = self.digits.min(other.digits);
        let p = precision_bits(digits);
        ArbitraryComplex {
            re: self.re.add(&other.re, p, RM),
            im: self.im.add(&other.im, p, RM),
            digits,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let digits = self.digits.min(other.digits);
        let p = precision_bits(digits);
        ArbitraryComplex {
            re: self.re.sub(&other.re, p, RM),
            im: self.im.sub(&other.im, p, RM),
            digits,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let digits = self.digits.min(other.digits);
        let p = precision_bits(digits) + 8;
        let rr = self.re.mul(&other.re, p, RM);
        let ii = self.im.mul(&other.im, p, RM);
        let ri = self.re.mul(&other.im, p, RM);
        let ir = self.im.mul(&other.re, p, RM);
        let q = precision_bits(digits);
        ArbitraryComplex {
            re: rr.sub(&ii, q, RM),
            im: ri.add(&ir, q, RM),
            digits,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        let digits = self.digits.min(other.digits);
        let p = precision_bits(digits) + 16;
        let den = other
            .re
            .mul(&other.re, p, RM)
            .add(&other.im.mul(&other.im, p, RM), p, RM);
        let num_re = self
            .re
            .mul(&other.re, p, RM)
            .add(&self.im.mul(&other.im, p, RM), p, RM);
        let num_im = self
            .im
            .mul(&other.re, p, RM)
            .sub(&self.re.mul(&other.im, p, RM), p, RM);
        let q = precision_bits(digits);
        ArbitraryComplex {
            re: num_re.div(&den, q, RM),
            im: num_im.div(&den, q, RM),
            digits,
        }
    }

    pub fn neg(&self) -> Self {
        ArbitraryComplex {
            re: self.re.neg(),
            im: self.im.neg(),
            digits: self.digits,
        }
    }

    pub fn conj(&self) -> Self {
        ArbitraryComplex {
            re: self.re.clone(),
            im: self.im.neg(),
            digits: self.digits,
        }
    }

    pub fn scale_integer(&self, k: &BigInt) -> Self {
        let p = self.bits();
        let f = float_from_bigint(k, p + 64);
        ArbitraryComplex {
            re: self.re.mul(&f, p, RM),
            im: self.im.mul(&f, p, RM),
            digits: self.digits,
        }
    }

    pub fn div_integer(&self, k: &BigInt) -> Self {
        let p = self.bits();
        let f = float_from_bigint(k, p + 64);
        ArbitraryComplex {
            re: self.re.div(&f, p, RM),
            im: self.im.div(&f, p, RM),
            digits: self.digits,
        }
    }

    /// `self^n` by square-and-multiply; also returns the number of complex
    /// multiplications performed.
    pub fn pow_counted(&self, n: u64) -> (Self, u64) {
        if n == 0 {
            return (Self::one(self.digits), 0);
        }
        let mut count = 0u64;
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut e = n;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => {
                        count += 1;
                        a.mul(&base)
                    }
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
            count += 1;
        }
        (acc.expect("n > 0"), count)
    }

    pub fn powu(&self, n: u64) -> Self {
        self.pow_counted(n).0
    }

    pub fn norm(&self) -> Real {
        Real::from_float(float_hypot(&self.re, &self.im, self.bits()), self.digits)
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> Real {
        Real::from_float(float_atan2(&self.im, &self.re, self.bits()), self.digits)
    }

    pub fn distance(&self, other: &Self) -> Real {
        self.sub(other).norm()
    }

    /// `"a"`, `"a + b i"` or `"a - b i"` with `sig` significant digits per part.
    pub fn to_decimal_string(&self, sig: u32) -> String {
        let re = format_float(&self.re, sig);
        if self.im.is_zero() {
            return re;
        }
        let im = format_float(&float_abs(&self.im), sig);
        let op = if self.im.is_negative() { '-' } else { '+' };
        if self.re.is_zero() {
            return if op == '-' { format!("-{im} i") } else { format!("{im} i") };
        }
        format!("{re} {op} {im} i")
    }

    pub fn re_string(&self, sig: u32) -> String {
        format_float(&self.re, sig)
    }

    pub fn im_string(&self, sig: u32) -> String {
        format_float(&self.im, sig)
    }
}

impl fmt::Display for ArbitraryComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(self.digits))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl std::ops::$tr<&ArbitraryComplex> for &ArbitraryComplex {
            type Output = ArbitraryComplex;
            fn $method(self, rhs: &ArbitraryComplex) -> ArbitraryComplex {
                ArbitraryComplex::$method(self, rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl std::ops::Neg for &ArbitraryComplex {
    type Output = ArbitraryComplex;
    fn neg(self) -> ArbitraryComplex {
        ArbitraryComplex::neg(self)
    }
}

/// Convenience wrapper matching the textual constructor used by the CLI.
pub fn make_complex(re: &str, im: &str, digits: u32) -> Result<ArbitraryComplex, PrecisionError> {
    ArbitraryComplex::parse(re, im, digits)
}

// ---------------------------------------------------------------------------
// Roots of unity and root extraction

/// `zeta_order^power` together with its numeric value.
#[derive(Clone, Debug)]
pub struct RootOfUnityValue {
    pub order: u64,
    pub power: u64,
    pub value: ArbitraryComplex,
}

/// `cos(2 pi k / p) + i sin(2 pi k / p)`; `k` is reduced modulo `p`.
pub fn root_of_unity(p: u64, k: i64, digits: u32) -> Result<RootOfUnityValue, PrecisionError> {
    if !is_prime(p) {
        return Err(PrecisionError::NotPrime(p));
    }
    let power = k.rem_euclid(p as i64) as u64;
    Ok(RootOfUnityValue {
        order: p,
        power,
        value: unit_root_value(p, power, digits),
    })
}

pub(crate) fn unit_root_value(p: u64, power: u64, digits: u32) -> ArbitraryComplex {
    let power = power % p;
    if power == 0 {
        return ArbitraryComplex::one(digits);
    }
    if 2 * power == p {
        return ArbitraryComplex::from_i64(-1, digits);
    }
    let bits = precision_bits(digits);
    let p_work = bits + 32;
    let (cos, sin) = with_consts(|cc| {
        let two_pi = cc.pi(p_work, RM).mul(&BigFloat::from_word(2, p_work), p_work, RM);
        let angle = two_pi
            .mul(&BigFloat::from_u64(power, p_work), p_work, RM)
            .div(&BigFloat::from_u64(p, p_work), p_work, RM);
        (angle.cos(bits, RM, cc), angle.sin(bits, RM, cc))
    });
    ArbitraryComplex::from_parts(cos, sin, digits)
}

/// True when `z` lies on the negative real axis to within `10^(-digits/2)`
/// relative to `|z|`. Such values are treated as exactly negative real so
/// that branch choices stay stable across precisions.
fn on_negative_axis(z: &ArbitraryComplex, r: &BigFloat) -> bool {
    if !z.re.is_negative() {
        return false;
    }
    if z.im.is_zero() {
        return true;
    }
    float_log10_abs(&z.im) - float_log10_abs(r) <= -(z.digits as f64) / 2.0
}

/// The `p`-th root with argument in (-pi/p, pi/p]; exact zero for zero.
pub fn principal_root(z: &ArbitraryComplex, p: u64) -> ArbitraryComplex {
    assert!(p >= 1, "root degree must be positive");
    if z.is_zero() || p == 1 {
        return z.clone();
    }
    let digits = z.digits;
    let bits = precision_bits(digits);
    let w = bits + 32;
    let r = float_hypot(&z.re, &z.im, w);
    let negative_axis = on_negative_axis(z, &r);
    if p == 2 {
        let two = BigFloat::from_word(2, w);
        let a = r.add(&z.re, w, RM).div(&two, w, RM);
        let b = r.sub(&z.re, w, RM).div(&two, w, RM);
        let a = if a.is_negative() { zero_float(w) } else { a.sqrt(bits, RM) };
        let b = if b.is_negative() { zero_float(w) } else { b.sqrt(bits, RM) };
        let b = if negative_axis || !z.im.is_negative() { b } else { b.neg() };
        let a = if negative_axis { zero_float(bits) } else { a };
        return ArbitraryComplex::from_parts(a, b, digits);
    }
    let theta = if negative_axis {
        with_consts(|cc| cc.pi(w, RM))
    } else {
        float_atan2(&z.im, &z.re, w)
    };
    let pf = BigFloat::from_u64(p, w);
    let (re, im) = with_consts(|cc| {
        let mag = r.ln(w, RM, cc).div(&pf, w, RM).exp(w, RM, cc);
        let phi = theta.div(&pf, w, RM);
        let c = phi.cos(w, RM, cc);
        let s = phi.sin(w, RM, cc);
        (mag.mul(&c, bits, RM), mag.mul(&s, bits, RM))
    });
    ArbitraryComplex::from_parts(re, im, digits)
}

/// Nearest integer to the real part, with `max(|re - n|, |im|)` as residual.
pub fn nearest_integer(z: &ArbitraryComplex) -> (BigInt, Real) {
    let n = round_float(&z.re);
    let p = precision_bits(z.digits);
    let nf = float_from_bigint(&n, (n.bits() as usize + 64).max(p));
    let dre = float_abs(&z.re.sub(&nf, p, RM));
    let dim = float_abs(&z.im);
    let residual = if float_cmp(&dre, &dim) == Ordering::Less { dim } else { dre };
    (n, Real::from_float(residual, z.digits))
}
