//! End-to-end solve: monic reduction, roots, composition series, precision
//! plan, forward pass, rounding, reconstruction and verification.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::groups::{composition_series, CompositionSeries, GroupError, Permutation, PermutationGroup};
use crate::oracle::{default_invariants, label_roots, OracleError};
use crate::polynomial::{sanity_check, to_monic, IntPolynomial, MonicReduction, PolynomialError};
use crate::precision::{ArbitraryComplex, Real};
use crate::radical::{reconstruct, verify, RadicalError, RadicalExpr, Reconstruction};
use crate::resolvent::{
    build_theta0, forward_pass, plan_precision_for_radices, position_roots, round_theta_m, ForwardPass,
    IntegerThetaTensor, MultiplicationCounter, PrecisionPlan, ResolventError, DEFAULT_DIGIT_CAP, DEFAULT_TOLERANCE,
};
use crate::rootfinder::{find_roots, root_magnitude_bound, RootFindError, RootSet};

pub const DEFAULT_MARGIN: u32 = 6;
pub const DEFAULT_RETRIES: u32 = 3;
const BOUND_DIGITS: u32 = 40;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Polynomial(#[from] PolynomialError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    RootFind(#[from] RootFindError),
    #[error(transparent)]
    Resolvent(#[from] ResolventError),
    #[error(transparent)]
    Radical(#[from] RadicalError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("polynomial has degree {poly} but the group acts on {group} points")]
    DegreeMismatch { poly: usize, group: usize },
    #[error("the group is not transitive, so the polynomial would be reducible")]
    Intransitive,
    #[error("root order must be a permutation of 1..{0}")]
    BadRootOrder(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelingMode {
    Auto,
    /// `labels[r]` is the 1-based label of the `r`-th root in canonical order.
    Given(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub digits: Option<u32>,
    pub margin: u32,
    pub tolerance: f64,
    pub labeling: LabelingMode,
    pub invariants: Option<Vec<Vec<u32>>>,
    pub verify: bool,
    pub max_retries: u32,
    pub digit_cap: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            digits: None,
            margin: DEFAULT_MARGIN,
            tolerance: DEFAULT_TOLERANCE,
            labeling: LabelingMode::Auto,
            invariants: None,
            verify: true,
            max_retries: DEFAULT_RETRIES,
            digit_cap: DEFAULT_DIGIT_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub polynomial: IntPolynomial,
    pub monic: MonicReduction,
    pub series: CompositionSeries,
    pub group_order: usize,
    pub plan: PrecisionPlan,
    /// Working digits of the successful attempt.
    pub digits: u32,
    pub attempts: u32,
    /// `labeled[k] = canonical[order[k]]`.
    pub label_order: Vec<usize>,
    /// Roots of the monic polynomial, labeled.
    pub monic_roots: RootSet,
    /// Roots of the original polynomial, labeled.
    pub roots: Vec<ArbitraryComplex>,
    pub forward: ForwardPass,
    pub theta_m: IntegerThetaTensor,
    pub reconstruction: Reconstruction,
    /// Expressions for the monic roots.
    pub monic_expressions: Vec<RadicalExpr>,
    /// Expressions for the original roots.
    pub expressions: Vec<RadicalExpr>,
    pub counter: MultiplicationCounter,
    pub deviations: Option<Vec<Real>>,
    pub warnings: Vec<String>,
}

impl SolveReport {
    pub fn max_deviation(&self) -> Option<f64> {
        self.deviations
            .as_ref()
            .map(|d| d.iter().map(Real::to_f64).fold(0.0, f64::max))
    }
}

/// Converts 1-based labels of canonical roots into a `permuted` order.
pub fn order_from_labels(labels: &[usize]) -> Result<Vec<usize>, SolveError> {
    let n = labels.len();
    let mut order = vec![usize::MAX; n];
    for (r, &l) in labels.iter().enumerate() {
        if l == 0 || l > n || order[l - 1] != usize::MAX {
            return Err(SolveError::BadRootOrder(n));
        }
        order[l - 1] = r;
    }
    Ok(order)
}

/// `x = y / a_n` as an expression.
fn unscale(expr: &RadicalExpr, an: &BigInt) -> RadicalExpr {
    if an.is_one() {
        return expr.clone();
    }
    let e = RadicalExpr::scale(an.abs(), expr.clone());
    if an.is_negative() {
        RadicalExpr::product(vec![RadicalExpr::integer(-1), e])
    } else {
        e
    }
}

pub fn prepare_group(generators: &[Permutation], degree: usize) -> Result<(PermutationGroup, CompositionSeries), SolveError> {
    let group = PermutationGroup::closure(generators, degree)?;
    if !group.is_transitive() {
        return Err(SolveError::Intransitive);
    }
    let series = composition_series(&group)?;
    Ok((group, series))
}

pub fn solve(poly: &IntPolynomial, generators: &[Permutation], opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    let n = poly.degree();
    let group_degree = generators.first().map_or(n, Permutation::degree);
    if group_degree != n {
        return Err(SolveError::DegreeMismatch {
            poly: n,
            group: group_degree,
        });
    }
    let sanity = sanity_check(poly);
    let warnings = sanity.warnings(n);
    let monic = to_monic(poly);
    let (group, series) = prepare_group(generators, n)?;

    let coarse = find_roots(&monic.monic, BOUND_DIGITS)?;
    let x0 = root_magnitude_bound(&coarse);
    let plan = plan_precision_for_radices(&series.radices(), x0, opts.margin, opts.digit_cap)?;
    let base_digits = opts.digits.unwrap_or(plan.digits);

    let label_order = match &opts.labeling {
        LabelingMode::Given(labels) => {
            if labels.len() != n {
                return Err(SolveError::BadRootOrder(n));
            }
            order_from_labels(labels)?
        }
        LabelingMode::Auto => {
            let probe = find_roots(&monic.monic, base_digits.max(BOUND_DIGITS))?;
            let invariants = opts.invariants.clone().unwrap_or_else(|| default_invariants(n));
            label_roots(&group, &probe, &invariants)?.order
        }
    };

    let mut attempt = 0;
    loop {
        let digits = base_digits.saturating_mul(1 << attempt);
        if digits > opts.digit_cap {
            return Err(ResolventError::PrecisionInfeasible {
                required: digits as u64,
                cap: opts.digit_cap,
            }
            .into());
        }
        let monic_roots = find_roots(&monic.monic, digits)?.permuted(&label_order);
        let forward = forward_pass(build_theta0(&monic_roots, &series)?);
        let theta_m = round_theta_m(forward.theta_m(), opts.tolerance)?;
        let reconstruction = match reconstruct(&theta_m, &forward) {
            Ok(r) => r,
            Err(RadicalError::PhaseAmbiguous { .. }) if attempt < opts.max_retries => {
                attempt += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let monic_expressions = reconstruction.root_expressions(&position_roots(&series), n);
        let deviations = if opts.verify {
            Some(verify(&monic_expressions, &monic_roots, digits)?)
        } else {
            None
        };
        let expressions = monic_expressions.iter().map(|e| unscale(e, &monic.scale)).collect();
        let roots = monic_roots
            .roots
            .iter()
            .map(|y| y.div_integer(&monic.scale))
            .collect();
        let counter = forward.counter;
        return Ok(SolveReport {
            polynomial: poly.clone(),
            monic,
            group_order: group.order(),
            series,
            plan,
            digits,
            attempts: attempt + 1,
            label_order,
            monic_roots,
            roots,
            forward,
            theta_m,
            reconstruction,
            monic_expressions,
            expressions,
            counter,
            deviations,
            warnings,
        });
    }
}
