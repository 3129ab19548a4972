//! Exact radical formulas for the roots of monic integer polynomials with a
//! known solvable Galois group, found by rounding high-precision Lagrange
//! resolvents to integers and rebuilding the radicals level by level.

pub mod groups;
pub mod oracle;
pub mod pipeline;
pub mod polynomial;
pub mod precision;
pub mod radical;
pub mod resolvent;
pub mod rootfinder;

pub use groups::{
    composition_series, coset_representatives, orbit_sum_invariant, parse_cycles, parse_generators, CompositionSeries,
    GroupError, Permutation, PermutationGroup, SeriesStep,
};
pub use oracle::{coset_product_certificate, default_invariants, invariant_value, label_roots, Labeling, OracleError};
pub use pipeline::{solve, LabelingMode, SolveError, SolveOptions, SolveReport};
pub use polynomial::{parse_polynomial, to_monic, IntPolynomial, MonicReduction, PolynomialError};
pub use precision::{principal_root, root_of_unity, ArbitraryComplex, PrecisionError, Real, RootOfUnityValue};
pub use radical::{emit, evaluate, from_json, reconstruct, to_json, verify, OutputFormat, RadicalError, RadicalExpr};
pub use resolvent::{
    build_theta0, forward_pass, plan_precision, round_theta_m, IntegerThetaTensor, MultiplicationCounter,
    PrecisionPlan, ResolventError, ResolventTensor,
};
pub use rootfinder::{find_roots, RootFindError, RootSet};
