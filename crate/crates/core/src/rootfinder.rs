//! Simultaneous root finding for monic integer polynomials.
//!
//! Aberth–Ehrlich iteration at a fixed seed precision isolates all roots,
//! then each root is Newton-polished while the precision doubles up to the
//! requested budget.

use std::cmp::Ordering;

use num_traits::Signed;
use thiserror::Error;

use crate::polynomial::IntPolynomial;
use crate::precision::{float_to_f64, ArbitraryComplex, Real};

const SEED_DIGITS: u32 = 40;
const MAX_ABERTH_ITERATIONS: usize = 5000;
const MAX_NEWTON_STEPS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootFindError {
    #[error("root finder expects a monic polynomial")]
    NotMonic,
    #[error("root iteration did not converge: {reason}; best residuals {best_residuals:?}")]
    NonConvergence {
        reason: String,
        best_residuals: Vec<f64>,
    },
}

/// All roots of a polynomial together with their residuals `|f(x)|`.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<ArbitraryComplex>,
    pub digits: u32,
    pub residuals: Vec<Real>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Reorders roots (and residuals) so that `new[i] = old[order[i]]`.
    pub fn permuted(&self, order: &[usize]) -> RootSet {
        RootSet {
            roots: order.iter().map(|&i| self.roots[i].clone()).collect(),
            digits: self.digits,
            residuals: order.iter().map(|&i| self.residuals[i].clone()).collect(),
        }
    }
}

fn magnitude_floor_one(z: &ArbitraryComplex) -> f64 {
    z.norm().to_f64().max(1.0)
}

/// Argument used for canonical ordering: values within `10^(-digits/2)` of
/// the real axis count as real, and negative reals sit at `+pi`.
fn ordering_angle(z: &ArbitraryComplex) -> f64 {
    let (re, im) = z.to_f64_pair();
    let tol = (-(z.digits() as f64) / 2.0) + z.norm().log10().max(0.0);
    let im = if z.im().log10() <= tol { 0.0 } else { im };
    if im == 0.0 {
        if re < 0.0 {
            std::f64::consts::PI
        } else {
            0.0
        }
    } else {
        im.atan2(re)
    }
}

/// Sorts by argument in (-pi, pi], ties broken by magnitude.
pub fn canonical_order(roots: &[ArbitraryComplex]) -> Vec<usize> {
    let keys: Vec<(f64, f64)> = roots
        .iter()
        .map(|z| (ordering_angle(z), z.norm().to_f64()))
        .collect();
    let mut idx: Vec<usize> = (0..roots.len()).collect();
    idx.sort_by(|&a, &b| {
        let (aa, am) = keys[a];
        let (ba, bm) = keys[b];
        if (aa - ba).abs() > 1e-12 {
            aa.partial_cmp(&ba).unwrap_or(Ordering::Equal)
        } else {
            am.partial_cmp(&bm).unwrap_or(Ordering::Equal)
        }
    });
    idx
}

fn initial_guesses(p: &IntPolynomial, digits: u32) -> Vec<ArbitraryComplex> {
    let n = p.degree();
    let max_coeff = p.coeffs()[..n]
        .iter()
        .map(|c| float_to_f64(&crate::precision::float_from_bigint(&c.abs(), 64)))
        .fold(0.0f64, f64::max);
    let radius = 1.0 + max_coeff;
    (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4 + 0.01 * k as f64;
            ArbitraryComplex::from_f64(radius * angle.cos(), radius * angle.sin(), digits)
        })
        .collect()
}

fn aberth(p: &IntPolynomial, digits: u32) -> Result<Vec<ArbitraryComplex>, RootFindError> {
    let n = p.degree();
    let mut z = initial_guesses(p, digits);
    if n == 1 {
        let root = ArbitraryComplex::from_integer(&-p.coeffs()[0].clone(), digits);
        return Ok(vec![root]);
    }
    let one = ArbitraryComplex::one(digits);
    let tol = 5.0 - digits as f64;
    for _ in 0..MAX_ABERTH_ITERATIONS {
        let mut converged = true;
        for k in 0..n {
            let (f, df) = p.eval_with_derivative(&z[k]);
            if f.is_zero() {
                continue;
            }
            let ratio = f.div(&df);
            let mut repulsion = ArbitraryComplex::zero(digits);
            for j in 0..n {
                if j != k {
                    repulsion = repulsion.add(&one.div(&z[k].sub(&z[j])));
                }
            }
            let step = ratio.div(&one.sub(&ratio.mul(&repulsion)));
            let scale = magnitude_floor_one(&z[k]).log10();
            if step.norm().log10() > tol + scale {
                converged = false;
            }
            z[k] = z[k].sub(&step);
        }
        if converged {
            return Ok(z);
        }
    }
    Err(RootFindError::NonConvergence {
        reason: format!("Aberth iteration exceeded {MAX_ABERTH_ITERATIONS} sweeps"),
        best_residuals: z.iter().map(|x| p.eval(x).norm().to_f64()).collect(),
    })
}

fn newton_polish(p: &IntPolynomial, seed: &ArbitraryComplex, target: u32) -> ArbitraryComplex {
    let mut z = seed.clone();
    let mut d = seed.digits();
    loop {
        d = (d * 2).min(target).max(d);
        z = z.with_digits(d);
        let tol = -(d as f64) + magnitude_floor_one(&z).log10();
        for _ in 0..MAX_NEWTON_STEPS {
            let (f, df) = p.eval_with_derivative(&z);
            if f.is_zero() || df.is_zero() {
                break;
            }
            let step = f.div(&df);
            z = z.sub(&step);
            if step.norm().log10() < tol {
                break;
            }
        }
        if d >= target {
            return z;
        }
    }
}

/// All `n` roots of a monic polynomial at `digits` decimal digits, in
/// canonical angular order.
pub fn find_roots(p: &IntPolynomial, digits: u32) -> Result<RootSet, RootFindError> {
    if !p.is_monic() {
        return Err(RootFindError::NotMonic);
    }
    let digits = digits.max(1);
    let seeds = aberth(p, SEED_DIGITS)?;
    let roots: Vec<ArbitraryComplex> = seeds
        .iter()
        .map(|s| newton_polish(p, s, digits.max(SEED_DIGITS)).with_digits(digits))
        .collect();

    let n = p.degree();
    let residuals: Vec<Real> = roots.iter().map(|x| p.eval(x).norm()).collect();
    for (x, r) in roots.iter().zip(&residuals) {
        let bound = 2.0 - digits as f64 + n as f64 * magnitude_floor_one(x).log10();
        if r.log10() >= bound {
            return Err(RootFindError::NonConvergence {
                reason: "residual above contract after polishing".into(),
                best_residuals: residuals.iter().map(Real::to_f64).collect(),
            });
        }
    }
    let sep = -(digits as f64) / 2.0;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i].distance(&roots[j]).log10() < sep {
                return Err(RootFindError::NonConvergence {
                    reason: format!("roots {i} and {j} coincide; polynomial may not be square-free"),
                    best_residuals: residuals.iter().map(Real::to_f64).collect(),
                });
            }
        }
    }
    let set = RootSet {
        roots,
        digits,
        residuals,
    };
    Ok(set.permuted(&canonical_order(&set.roots)))
}

/// `max(1, |x|)` over all roots, rounded up to two significant figures.
pub fn root_magnitude_bound(rs: &RootSet) -> f64 {
    let m = rs.roots.iter().map(magnitude_floor_one).fold(1.0f64, f64::max);
    round_up_two_sig(m)
}

pub(crate) fn round_up_two_sig(v: f64) -> f64 {
    let e = v.log10().floor() as i32;
    let shift = 1 - e;
    let scaled = if shift >= 0 { v * 10f64.powi(shift) } else { v / 10f64.powi(-shift) };
    let up = if (scaled - scaled.round()).abs() < 1e-9 {
        scaled.round()
    } else {
        scaled.ceil()
    };
    if shift >= 0 {
        up / 10f64.powi(shift)
    } else {
        up * 10f64.powi(-shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_polynomial;

    const EQ43: [(&str, &str); 5] = [
        ("-1.3639621650899", "0"),
        ("-1.1078748900075", "-1.7187891044417"),
        ("1.7898559725525", "1.5514288842038"),
        ("1.7898559725525", "-1.5514288842038"),
        ("-1.1078748900075", "1.7187891044417"),
    ];

    #[test]
    fn quintic_roots_match_table() {
        let p = parse_polynomial("x^5+20x+32").unwrap();
        let rs = find_roots(&p, 14).unwrap();
        for (re, im) in EQ43 {
            let target = ArbitraryComplex::parse(re, im, 14).unwrap();
            let hit = rs.roots.iter().any(|r| {
                let d = r.sub(&target);
                d.re().to_f64().abs() <= 1e-13 && d.im().to_f64().abs() <= 1e-13
            });
            assert!(hit, "missing root {re} {im}");
        }
        assert_eq!(root_magnitude_bound(&rs), 2.4);
    }

    #[test]
    fn sqrt2_roots() {
        let p = parse_polynomial("x^2-2").unwrap();
        let rs = find_roots(&p, 14).unwrap();
        // Heron iteration oracle in f64 is exact enough at 14 digits.
        let mut s = 1.5f64;
        for _ in 0..6 {
            s = 0.5 * (s + 2.0 / s);
        }
        let vals: Vec<f64> = rs.roots.iter().map(|r| r.to_f64_pair().0).collect();
        assert!((vals[0] - s).abs() < 1e-13 && (vals[1] + s).abs() < 1e-13, "{vals:?}");
        assert_eq!(rs.roots[0].re_string(14), "1.4142135623731");
        assert_eq!(root_magnitude_bound(&rs), 1.5);
    }

    #[test]
    fn linear_root() {
        let rs = find_roots(&parse_polynomial("x").unwrap(), 10).unwrap();
        assert_eq!(rs.len(), 1);
        assert!(rs.roots[0].is_zero());
        assert_eq!(root_magnitude_bound(&rs), 1.0);
    }

    #[test]
    fn rejects_non_monic() {
        let p = parse_polynomial("2x^2-1").unwrap();
        assert_eq!(find_roots(&p, 10).unwrap_err(), RootFindError::NotMonic);
    }

    #[test]
    fn repeated_roots_reported() {
        let p = parse_polynomial("x^2 - 2x + 1").unwrap();
        assert!(matches!(find_roots(&p, 20), Err(RootFindError::NonConvergence { .. })));
    }

    #[test]
    fn high_precision_is_deterministic_and_stable() {
        let p = parse_polynomial("x^5+20x+32").unwrap();
        let a = find_roots(&p, 60).unwrap();
        let b = find_roots(&p, 60).unwrap();
        let c = find_roots(&p, 120).unwrap();
        for i in 0..5 {
            assert_eq!(a.roots[i].to_decimal_string(60), b.roots[i].to_decimal_string(60));
            assert!(a.roots[i].distance(&c.roots[i]).below_pow10(2.0 - 60.0));
        }
    }

    #[test]
    fn symmetric_functions_consistent() {
        for text in ["x^5+20x+32", "x^3-2", "x^6+x^5+x^4+x^3+x^2+x+1", "x^4-10x^2+1"] {
            let p = parse_polynomial(text).unwrap();
            let digits = 30;
            let rs = find_roots(&p, digits).unwrap();
            let n = p.degree();
            let bound = root_magnitude_bound(&rs);
            let tol = 3.0 - digits as f64 + (n as f64).log10() + n as f64 * bound.log10();
            let sum = rs.roots.iter().fold(ArbitraryComplex::zero(digits), |a, r| a.add(r));
            let expect_sum = ArbitraryComplex::from_integer(&-p.coeffs()[n - 1].clone(), digits);
            assert!(sum.distance(&expect_sum).log10() < tol, "{text}");
            let prod = rs.roots.iter().fold(ArbitraryComplex::one(digits), |a, r| a.mul(r));
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let expect_prod = ArbitraryComplex::from_integer(&(p.coeffs()[0].clone() * sign), digits);
            assert!(prod.distance(&expect_prod).log10() < tol, "{text}");
        }
    }

    #[test]
    fn round_up_rule() {
        assert_eq!(round_up_two_sig(2.369), 2.4);
        assert_eq!(round_up_two_sig(1.0), 1.0);
        assert_eq!(round_up_two_sig(1.4142), 1.5);
        assert_eq!(round_up_two_sig(13.2), 14.0);
    }
}
