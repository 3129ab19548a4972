//! Integrality checks built from orbit-sum invariants: numeric invariant
//! values, the coset product certificate, and root labeling by searching
//! coset representatives of `S_n/G`.

use num_bigint::BigInt;
use thiserror::Error;

use crate::groups::{coset_representatives_with_cap, orbit_sum_invariant, GroupError, Permutation, PermutationGroup};
use crate::precision::{nearest_integer, ArbitraryComplex, Real};
use crate::rootfinder::RootSet;

pub const CERTIFICATE_DEGREE_CAP: usize = 6;
pub const LABELING_DEGREE_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },
    #[error("{what} is {residual:e} away from an integer")]
    ResidualTooLarge { what: String, residual: f64 },
    #[error("{} inequivalent labelings pass every invariant; supply one explicitly", .candidates.len())]
    LabelingAmbiguous { candidates: Vec<Permutation> },
    #[error("no labeling makes every invariant an integer")]
    LabelingFailed,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Σ over the monomials of `x_{σ(j)}^{k_j}`.
fn orbit_value(orbit: &[Vec<u32>], roots: &[ArbitraryComplex], sigma: Option<&Permutation>, digits: u32) -> ArbitraryComplex {
    let mut total = ArbitraryComplex::zero(digits);
    for mono in orbit {
        let mut term = ArbitraryComplex::one(digits);
        for (j, &k) in mono.iter().enumerate() {
            if k > 0 {
                let idx = sigma.map_or(j, |s| s.apply(j));
                term = term.mul(&roots[idx].powu(k as u64));
            }
        }
        total = total.add(&term);
    }
    total
}

/// Nearest integer to the orbit sum over labeled roots, with its residual.
pub fn invariant_value(orbit: &[Vec<u32>], roots: &RootSet) -> (BigInt, Real) {
    nearest_integer(&orbit_value(orbit, &roots.roots, None, roots.digits))
}

pub fn invariant_integer(orbit: &[Vec<u32>], roots: &RootSet, tolerance: f64) -> Result<BigInt, OracleError> {
    let (n, r) = invariant_value(orbit, roots);
    if r.to_f64() < tolerance {
        Ok(n)
    } else {
        Err(OracleError::ResidualTooLarge {
            what: "invariant".into(),
            residual: r.to_f64(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    /// Integer coefficients of `F`, lowest degree first.
    pub coefficients: Vec<BigInt>,
    pub residuals: Vec<f64>,
    pub theta: ArbitraryComplex,
    /// `|F(θ̃)|` for the rounded `F`.
    pub membership: f64,
}

impl Certificate {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// `F(x) = ∏ (x − σθ̃)` over coset representatives, rounded to integers.
pub fn coset_product_certificate(
    group: &PermutationGroup,
    exponents: &[u32],
    roots: &RootSet,
    tolerance: f64,
) -> Result<Certificate, OracleError> {
    let n = group.degree();
    if n > CERTIFICATE_DEGREE_CAP {
        return Err(OracleError::DegreeTooLarge {
            degree: n,
            cap: CERTIFICATE_DEGREE_CAP,
        });
    }
    let digits = roots.digits;
    let orbit = orbit_sum_invariant(group, exponents);
    let reps = coset_representatives_with_cap(group, CERTIFICATE_DEGREE_CAP)?;
    // poly[i] is the coefficient of x^i
    let mut poly = vec![ArbitraryComplex::one(digits)];
    for sigma in &reps {
        let v = orbit_value(&orbit, &roots.roots, Some(sigma), digits);
        let mut next = vec![ArbitraryComplex::zero(digits); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(&v));
        }
        poly = next;
    }
    let mut coefficients = Vec::with_capacity(poly.len());
    let mut residuals = Vec::with_capacity(poly.len());
    for (i, c) in poly.iter().enumerate() {
        let (k, r) = nearest_integer(c);
        let r = r.to_f64();
        if !(r < tolerance) {
            return Err(OracleError::ResidualTooLarge {
                what: format!("coefficient of x^{i}"),
                residual: r,
            });
        }
        coefficients.push(k);
        residuals.push(r);
    }
    let theta = orbit_value(&orbit, &roots.roots, None, digits);
    let mut f = ArbitraryComplex::zero(digits);
    for c in coefficients.iter().rev() {
        f = f.mul(&theta).add(&ArbitraryComplex::from_integer(c, digits));
    }
    let membership = f.norm().to_f64();
    let bound = tolerance * (1.0 + theta.norm().to_f64()).powi(reps.len() as i32);
    if !(membership <= bound) {
        return Err(OracleError::ResidualTooLarge {
            what: "F(theta)".into(),
            residual: membership,
        });
    }
    Ok(Certificate {
        coefficients,
        residuals,
        theta,
        membership,
    })
}

/// Orbit sums of `x1·x2²`, `x1·x2·x3²` and `x1²·x2`, keeping those that fit
/// in `n` variables.
pub fn default_invariants(n: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = [vec![1, 2], vec![1, 1, 2], vec![2, 1]]
        .into_iter()
        .filter(|e| e.len() <= n)
        .map(|mut e| {
            e.resize(n, 0);
            e
        })
        .collect();
    // distinct exponents: the orbit sum is fixed by exactly the group itself,
    // which separates cosets the sparse monomials can miss (cyclotomic roots)
    if n > 3 {
        out.push((0..n as u32).collect());
    }
    out
}

#[derive(Clone, Debug)]
pub struct Labeling {
    /// `labeled[k] = unlabeled[order[k]]`, for use with `RootSet::permuted`.
    pub order: Vec<usize>,
    pub sigma: Permutation,
    /// Coset representatives that passed every invariant.
    pub passing: usize,
}

/// Tolerance for "is an integer" during the labeling search.
pub fn labeling_tolerance(value: &ArbitraryComplex, digits: u32) -> f64 {
    10f64.powf(-(digits as f64) / 2.0) * value.norm().to_f64().max(1.0)
}

/// Finds `σ` such that relabeling `x_k := r_{σ(k)}` makes every invariant an
/// integer. Passing candidates that differ by an element of the normalizer
/// of `G` are equivalent; the first is returned.
pub fn label_roots(group: &PermutationGroup, roots: &RootSet, invariants: &[Vec<u32>]) -> Result<Labeling, OracleError> {
    let n = group.degree();
    let reps = coset_representatives_with_cap(group, LABELING_DEGREE_CAP).map_err(|e| match e {
        GroupError::DegreeCapExceeded { degree, cap } => OracleError::DegreeTooLarge { degree, cap },
        other => OracleError::Group(other),
    })?;
    let orbits: Vec<Vec<Vec<u32>>> = invariants.iter().map(|e| orbit_sum_invariant(group, e)).collect();
    let digits = roots.digits;
    // a G-invariant stays integral after the integer shift x -> x + 1, while
    // accidental integrality from multiplicative relations (roots of unity)
    // rarely survives it
    let one = ArbitraryComplex::from_i64(1, digits);
    let shifted: Vec<ArbitraryComplex> = roots.roots.iter().map(|r| r.add(&one)).collect();
    let passing: Vec<Permutation> = reps
        .into_iter()
        .filter(|sigma| {
            [&roots.roots, &shifted].iter().all(|set| {
                orbits.iter().all(|orbit| {
                    let v = orbit_value(orbit, set, Some(sigma), digits);
                    let (_, r) = nearest_integer(&v);
                    r.to_f64() < labeling_tolerance(&v, digits)
                })
            })
        })
        .collect();
    let first = passing.first().ok_or(OracleError::LabelingFailed)?.clone();
    let first_inv = first.inverse();
    let inequivalent: Vec<Permutation> = passing
        .iter()
        .filter(|s| !group.normalized_by(&first_inv.compose(s)))
        .cloned()
        .collect();
    if !inequivalent.is_empty() {
        let mut candidates = vec![first];
        candidates.extend(inequivalent);
        return Err(OracleError::LabelingAmbiguous { candidates });
    }
    Ok(Labeling {
        order: (0..n).map(|k| first.apply(k)).collect(),
        sigma: first,
        passing: passing.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{closure, parse_generators};
    use crate::polynomial::parse_polynomial;
    use crate::rootfinder::find_roots;

    fn d5() -> PermutationGroup {
        closure(&parse_generators("(1,2,3,4,5);(1,4)(2,3)", Some(5)).unwrap(), 5).unwrap()
    }

    fn quintic_labeled(digits: u32) -> RootSet {
        find_roots(&parse_polynomial("x^5+20x+32").unwrap(), digits)
            .unwrap()
            .permuted(&[4, 0, 2, 1, 3])
    }

    #[test]
    fn invariant_examples() {
        let q = quintic_labeled(20);
        let s5 = PermutationGroup::symmetric(5);
        let (n, r) = invariant_value(&orbit_sum_invariant(&s5, &[1, 0, 0, 0, 0]), &q);
        assert_eq!(n, BigInt::from(0));
        assert!(r.below_pow10(-15.0));

        let r2 = find_roots(&parse_polynomial("x^2-2").unwrap(), 20).unwrap();
        let s2 = PermutationGroup::symmetric(2);
        assert_eq!(invariant_integer(&orbit_sum_invariant(&s2, &[2, 0]), &r2, 1e-10).unwrap(), BigInt::from(4));

        let (_, r) = invariant_value(&orbit_sum_invariant(&d5(), &[1, 1, 0, 0, 0]), &q);
        assert!(r.below_pow10(-6.0));
    }

    #[test]
    fn certificates() {
        let r2 = find_roots(&parse_polynomial("x^2-2").unwrap(), 20).unwrap();
        let c = coset_product_certificate(&PermutationGroup::symmetric(2), &[2, 0], &r2, 1e-4).unwrap();
        assert_eq!(c.coefficients, vec![BigInt::from(-4), BigInt::from(1)]);

        let c = coset_product_certificate(&d5(), &[1, 1, 0, 0, 0], &quintic_labeled(20), 1e-4).unwrap();
        assert_eq!(c.degree(), 12);
        assert_eq!(c.coefficients[12], BigInt::from(1));
        assert!(c.max_residual() < 1e-4);

        assert!(matches!(
            coset_product_certificate(&PermutationGroup::symmetric(7), &[1], &quintic_labeled(20), 1e-4),
            Err(OracleError::DegreeTooLarge { degree: 7, cap: 6 })
        ));
    }

    #[test]
    fn labeling_recovers_a_consistent_order() {
        let canonical = find_roots(&parse_polynomial("x^5+20x+32").unwrap(), 30).unwrap();
        let shuffled = canonical.permuted(&[3, 1, 4, 0, 2]);
        let g = d5();
        let lab = label_roots(&g, &shuffled, &default_invariants(5)).unwrap();
        let labeled = shuffled.permuted(&lab.order);
        // the recovered labeling differs from the known one by a normalizer element
        let known = quintic_labeled(30);
        let mut pi = vec![0; 5];
        for (k, x) in labeled.roots.iter().enumerate() {
            pi[k] = known.roots.iter().position(|y| y.distance(x).below_pow10(-20.0)).unwrap();
        }
        assert!(g.normalized_by(&Permutation::from_images(pi).unwrap()));
        assert_eq!(lab.passing, 2);
    }

    #[test]
    fn labeling_edge_cases() {
        let r = find_roots(&parse_polynomial("x^3-2").unwrap(), 20).unwrap();
        let lab = label_roots(&PermutationGroup::symmetric(3), &r, &default_invariants(3)).unwrap();
        assert_eq!(lab.order, vec![0, 1, 2]);

        // symmetric invariants cannot tell the twelve cosets apart
        let sym = vec![vec![1, 0, 0, 0, 0], vec![2, 0, 0, 0, 0]];
        assert!(matches!(
            label_roots(&d5(), &quintic_labeled(20), &sym),
            Err(OracleError::LabelingAmbiguous { .. })
        ));

        // the Galois group of x^3 - 2 is S3, so no A3 labeling exists
        let a3 = PermutationGroup::alternating(3);
        assert!(matches!(
            label_roots(&a3, &r, &default_invariants(3)),
            Err(OracleError::LabelingFailed)
        ));
    }
}
