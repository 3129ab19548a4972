//! Univariate integer polynomials: parsing, monic reduction, evaluation and a
//! cheap irreducibility sanity check.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::precision::ArbitraryComplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolynomialError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("the zero polynomial has no roots to solve for")]
    ZeroPolynomial,
    #[error("polynomial has degree {0}; at least 1 is required")]
    DegreeTooLow(usize),
}

/// Integer coefficients `a_0..a_n`, lowest degree first, `a_n != 0`, `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self, PolynomialError> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(PolynomialError::ZeroPolynomial);
        }
        if coeffs.len() < 2 {
            return Err(PolynomialError::DegreeTooLow(0));
        }
        Ok(IntPolynomial { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self, PolynomialError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Horner evaluation at the precision of `z`.
    pub fn eval(&self, z: &ArbitraryComplex) -> ArbitraryComplex {
        let digits = z.digits();
        let mut acc = ArbitraryComplex::from_integer(self.leading(), digits);
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(z).add(&ArbitraryComplex::from_integer(c, digits));
        }
        acc
    }

    /// Evaluates `f` and `f'` together.
    pub fn eval_with_derivative(&self, z: &ArbitraryComplex) -> (ArbitraryComplex, ArbitraryComplex) {
        let digits = z.digits();
        let mut f = ArbitraryComplex::from_integer(self.leading(), digits);
        let mut df = ArbitraryComplex::zero(digits);
        for c in self.coeffs.iter().rev().skip(1) {
            df = df.mul(z).add(&f);
            f = f.mul(z).add(&ArbitraryComplex::from_integer(c, digits));
        }
        (f, df)
    }

    pub fn eval_integer(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect()
    }
}

pub fn eval_poly(p: &IntPolynomial, z: &ArbitraryComplex) -> ArbitraryComplex {
    p.eval(z)
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parsing

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).ok()?.parse().ok()
    }

    fn error(&self, message: &str) -> PolynomialError {
        PolynomialError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }
}

/// Parses text such as `x^5+20x+32` or `x^2 - 1/2`. Rational coefficients
/// are cleared by the LCM of their denominators.
pub fn parse_polynomial(text: &str) -> Result<IntPolynomial, PolynomialError> {
    let mut cur = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut terms: BTreeMap<usize, BigRational> = BTreeMap::new();
    let mut first = true;
    loop {
        if cur.peek().is_none() {
            if first {
                return Err(cur.error("empty input"));
            }
            break;
        }
        let negative = if cur.eat(b'-') {
            true
        } else if cur.eat(b'+') {
            false
        } else if first {
            false
        } else {
            return Err(cur.error("expected '+' or '-'"));
        };
        first = false;

        let mut coeff: Option<BigRational> = None;
        if let Some(num) = cur.integer() {
            let den = if cur.eat(b'/') {
                let d = cur.integer().ok_or_else(|| cur.error("expected denominator"))?;
                if d.is_zero() {
                    return Err(cur.error("zero denominator"));
                }
                d
            } else {
                BigInt::one()
            };
            coeff = Some(BigRational::new(num, den));
            cur.eat(b'*');
        }
        let mut power = 0usize;
        if cur.eat(b'x') {
            power = 1;
            if cur.eat(b'^') {
                let e = cur.integer().ok_or_else(|| cur.error("expected exponent"))?;
                power = e.to_usize().ok_or_else(|| cur.error("exponent too large"))?;
            }
        } else if coeff.is_none() {
            return Err(cur.error("expected coefficient or 'x'"));
        }
        let mut c = coeff.unwrap_or_else(BigRational::one);
        if negative {
            c = -c;
        }
        *terms.entry(power).or_insert_with(BigRational::zero) += c;
    }

    let degree = terms
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, _)| *k)
        .max()
        .ok_or(PolynomialError::ZeroPolynomial)?;
    if degree == 0 {
        return Err(PolynomialError::DegreeTooLow(0));
    }
    let lcm = terms
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut coeffs = vec![BigInt::zero(); degree + 1];
    for (k, c) in terms {
        coeffs[k] = (c * BigRational::from_integer(lcm.clone())).to_integer();
    }
    IntPolynomial::new(coeffs)
}

impl std::str::FromStr for IntPolynomial {
    type Err = PolynomialError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_polynomial(s)
    }
}

// ---------------------------------------------------------------------------
// Monic reduction

/// `monic(y) = a_n^(n-1) f(y / a_n)`; its roots are `scale` times the roots of
/// the original.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicReduction {
    pub monic: IntPolynomial,
    pub scale: BigInt,
}

impl MonicReduction {
    pub fn describe(&self) -> String {
        if self.scale.is_one() {
            "already monic".to_string()
        } else {
            format!("y = {} x", self.scale)
        }
    }
}

pub fn to_monic(p: &IntPolynomial) -> MonicReduction {
    let an = p.leading().clone();
    if an.is_one() {
        return MonicReduction {
            monic: p.clone(),
            scale: an,
        };
    }
    let n = p.degree();
    let mut coeffs: Vec<BigInt> = p
        .coeffs()
        .iter()
        .enumerate()
        .take(n)
        .map(|(k, a)| a * num_traits::pow(an.clone(), n - 1 - k))
        .collect();
    coeffs.push(BigInt::one());
    MonicReduction {
        monic: IntPolynomial::new(coeffs).expect("degree preserved"),
        scale: an,
    }
}

// ---------------------------------------------------------------------------
// Sanity check

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SanityReport {
    pub square_free: bool,
    pub integer_roots: Vec<BigInt>,
    /// False when `a_0` was too large to enumerate its divisors.
    pub integer_roots_checked: bool,
}

impl SanityReport {
    pub fn passes(&self, degree: usize) -> bool {
        self.square_free && (degree == 1 || self.integer_roots.is_empty())
    }

    pub fn warnings(&self, degree: usize) -> Vec<String> {
        let mut out = Vec::new();
        if !self.square_free {
            out.push("polynomial is not square-free".to_string());
        }
        if degree > 1 && !self.integer_roots.is_empty() {
            let roots: Vec<String> = self.integer_roots.iter().map(|r| r.to_string()).collect();
            out.push(format!("polynomial has integer roots {}", roots.join(", ")));
        }
        if !self.integer_roots_checked {
            out.push("constant term too large for the integer-root scan".to_string());
        }
        out
    }
}

const DIVISOR_SCAN_LIMIT: u64 = 1_000_000_000_000;

fn rational_poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let top = r.len() - 1;
        let q = &r[top] / &lead;
        for (i, bc) in b.iter().enumerate() {
            let idx = top - db + i;
            r[idx] = &r[idx] - &q * bc;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn rational_gcd_degree(a: &[BigInt], b: &[BigInt]) -> usize {
    let to_q = |v: &[BigInt]| -> Vec<BigRational> {
        let mut out: Vec<BigRational> = v.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    };
    let mut x = to_q(a);
    let mut y = to_q(b);
    while !y.is_empty() {
        let r = rational_poly_rem(&x, &y);
        x = y;
        y = r;
    }
    x.len().saturating_sub(1)
}

/// Square-freeness and integer-root scan. Does not prove irreducibility.
pub fn sanity_check(p: &IntPolynomial) -> SanityReport {
    let square_free = rational_gcd_degree(p.coeffs(), &p.derivative()) == 0;
    let a0 = p.coeffs()[0].abs();
    let mut integer_roots = Vec::new();
    let mut checked = true;
    if a0.is_zero() {
        integer_roots.push(BigInt::zero());
    } else if let Some(limit) = a0.to_u64().filter(|v| *v <= DIVISOR_SCAN_LIMIT) {
        let mut candidates = Vec::new();
        let mut d = 1u64;
        while d * d <= limit {
            if limit % d == 0 {
                candidates.push(d);
                if d * d != limit {
                    candidates.push(limit / d);
                }
            }
            d += 1;
        }
        candidates.sort_unstable();
        for d in candidates {
            for r in [BigInt::from(d), -BigInt::from(d)] {
                if p.eval_integer(&r).is_zero() {
                    integer_roots.push(r);
                }
            }
        }
        integer_roots.sort();
    } else {
        checked = false;
    }
    SanityReport {
        square_free,
        integer_roots,
        integer_roots_checked: checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{principal_root, ArbitraryComplex};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_polynomial("x^5+20x+32").unwrap().coeffs(), ints(&[32, 20, 0, 0, 0, 1]).as_slice());
        assert_eq!(parse_polynomial("x").unwrap().coeffs(), ints(&[0, 1]).as_slice());
        assert_eq!(parse_polynomial("x^2 - 1/2").unwrap().coeffs(), ints(&[-1, 0, 2]).as_slice());
        assert_eq!(parse_polynomial(" 3 x ^ 2 + 2*x - x^2 ").unwrap().coeffs(), ints(&[0, 2, 2]).as_slice());
        assert_eq!(parse_polynomial("1/3x^2 + 1/2").unwrap().coeffs(), ints(&[3, 0, 2]).as_slice());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_polynomial(""), Err(PolynomialError::Syntax { .. })));
        assert!(matches!(parse_polynomial("x^2 +"), Err(PolynomialError::Syntax { .. })));
        assert!(matches!(parse_polynomial("x y"), Err(PolynomialError::Syntax { .. })));
        assert!(matches!(parse_polynomial("x - x"), Err(PolynomialError::ZeroPolynomial)));
        assert!(matches!(parse_polynomial("7"), Err(PolynomialError::DegreeTooLow(0))));
        assert!(matches!(parse_polynomial("x/0"), Err(PolynomialError::Syntax { .. })));
    }

    #[test]
    fn render() {
        let p = parse_polynomial("x^5+20x+32").unwrap();
        assert_eq!(p.to_string(), "x^5 + 20x + 32");
        let q = IntPolynomial::from_i64s(&[-1, 0, -2]).unwrap();
        assert_eq!(q.to_string(), "-2x^2 - 1");
    }

    #[test]
    fn monic_examples() {
        let q = parse_polynomial("x^5+20x+32").unwrap();
        let r = to_monic(&q);
        assert_eq!(r.monic, q);
        assert!(r.scale.is_one());

        let r = to_monic(&IntPolynomial::from_i64s(&[-1, 0, 2]).unwrap());
        assert_eq!(r.monic.coeffs(), ints(&[-2, 0, 1]).as_slice());
        assert_eq!(r.scale, BigInt::from(2));

        let r = to_monic(&IntPolynomial::from_i64s(&[1, 0, 0, 3]).unwrap());
        assert_eq!(r.monic.coeffs(), ints(&[9, 0, 0, 1]).as_slice());
        assert_eq!(r.scale, BigInt::from(3));
    }

    #[test]
    fn evaluation() {
        let p = IntPolynomial::from_i64s(&[-2, 0, 1]).unwrap();
        let v = p.eval(&ArbitraryComplex::zero(10));
        assert_eq!(v.to_f64_pair(), (-2.0, 0.0));

        let q = parse_polynomial("x^5+20x+32").unwrap();
        let x1 = ArbitraryComplex::parse("-1.3639621650899", "0", 14).unwrap();
        // 13 decimals of x1 leave |f(x1)| = 1.46e-12 (|f'(x1)| ~ 37).
        let r = q.eval(&x1).norm();
        assert!(r.below_pow10(-11.0) && !r.below_pow10(-12.0));

        let c = IntPolynomial::from_i64s(&[-2, 0, 0, 1]).unwrap();
        let digits = 30;
        let root = principal_root(&ArbitraryComplex::from_i64(2, digits), 3);
        assert!(c.eval(&root).norm().below_pow10(3.0 - digits as f64));
    }

    #[test]
    fn sanity_examples() {
        let r = sanity_check(&IntPolynomial::from_i64s(&[-2, 0, 1]).unwrap());
        assert!(r.square_free && r.integer_roots.is_empty() && r.passes(2));

        let r = sanity_check(&IntPolynomial::from_i64s(&[-1, 0, 1]).unwrap());
        assert_eq!(r.integer_roots, ints(&[-1, 1]));
        assert!(!r.passes(2));

        // (x^2 - 2)^2 = x^4 - 4x^2 + 4
        let r = sanity_check(&IntPolynomial::from_i64s(&[4, 0, -4, 0, 1]).unwrap());
        assert!(!r.square_free);

        let r = sanity_check(&IntPolynomial::from_i64s(&[0, 1]).unwrap());
        assert!(r.passes(1));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly_strategy() -> impl Strategy<Value = IntPolynomial> {
            (prop::collection::vec(-50i64..50, 1..6), 1i64..6, any::<bool>()).prop_map(|(mut v, lead, neg)| {
                v.push(if neg { -lead } else { lead });
                IntPolynomial::from_i64s(&v).unwrap()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn render_parse_idempotent(p in poly_strategy()) {
                let text = p.to_string();
                let back = parse_polynomial(&text).unwrap();
                prop_assert_eq!(&back, &p);
                prop_assert_eq!(back.to_string(), text);
            }

            #[test]
            fn monic_scaling_maps_roots(p in poly_strategy(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
                // monic(scale z) = scale^(n-1) f(z)
                let red = to_monic(&p);
                let digits = 30;
                let z = ArbitraryComplex::from_f64(re, im, digits);
                let lhs = red.monic.eval(&z.scale_integer(&red.scale));
                let rhs = p.eval(&z).scale_integer(&num_traits::pow(red.scale.clone(), p.degree() - 1));
                let tol = lhs.norm().log10().max(0.0) + 5.0 - digits as f64;
                prop_assert!(lhs.distance(&rhs).log10() < tol);
                prop_assert!(red.monic.is_monic());
            }
        }
    }
}
