//! Forward pass: the Θ₀ tensor, per-level Lagrange resolvent transforms,
//! precision planning, multiplication accounting and final rounding.
//!
//! Tensors are flat, row-major over `(j_1, …, j_m)` with `j_m` fastest.
//! Level `i` transforms along axis `i - 1`.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::groups::{CompositionSeries, Permutation};
use crate::precision::{nearest_integer, unit_root_value, ArbitraryComplex, Real};
use crate::rootfinder::RootSet;

pub const DEFAULT_TOLERANCE: f64 = 0.25;
pub const DEFAULT_DIGIT_CAP: u32 = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResolventError {
    #[error("group acts on {expected} points but {found} roots were given")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("theta entry {index:?} is {residual:e} away from an integer")]
    ResidualTooLarge { index: Vec<usize>, residual: f64 },
    #[error("precision plan needs {required} digits, above the cap of {cap}")]
    PrecisionInfeasible { required: u64, cap: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorKind {
    Theta,
    Lagrange,
}

impl fmt::Display for TensorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TensorKind::Theta => "theta",
            TensorKind::Lagrange => "L",
        })
    }
}

// ---------------------------------------------------------------------------
// Mixed-radix indexing

pub(crate) fn strides(radices: &[usize]) -> Vec<usize> {
    let mut s = vec![1; radices.len()];
    for a in (0..radices.len().saturating_sub(1)).rev() {
        s[a] = s[a + 1] * radices[a + 1];
    }
    s
}

pub fn flat_index(radices: &[usize], index: &[usize]) -> usize {
    index
        .iter()
        .zip(strides(radices))
        .map(|(&j, s)| j * s)
        .sum()
}

pub fn multi_index(radices: &[usize], mut flat: usize) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for a in (0..radices.len()).rev() {
        out[a] = flat % radices[a];
        flat /= radices[a];
    }
    out
}

/// Flat offsets of index 0 for every line along `axis`.
pub(crate) fn line_bases(radices: &[usize], axis: usize) -> Vec<usize> {
    let total: usize = radices.iter().product();
    let stride = strides(radices)[axis];
    let span = stride * radices[axis];
    (0..total).filter(|f| f % span < stride).collect()
}

// ---------------------------------------------------------------------------
// ResolventTensor

#[derive(Clone, Debug)]
pub struct ResolventTensor {
    radices: Vec<usize>,
    data: Vec<ArbitraryComplex>,
    level: usize,
    kind: TensorKind,
}

impl ResolventTensor {
    pub fn new(radices: Vec<usize>, data: Vec<ArbitraryComplex>, level: usize, kind: TensorKind) -> Self {
        assert_eq!(radices.iter().product::<usize>(), data.len(), "tensor shape");
        ResolventTensor {
            radices,
            data,
            level,
            kind,
        }
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn data(&self) -> &[ArbitraryComplex] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn kind(&self) -> TensorKind {
        self.kind
    }

    pub fn digits(&self) -> u32 {
        self.data.iter().map(|z| z.digits()).min().unwrap_or(0)
    }

    pub fn get(&self, index: &[usize]) -> &ArbitraryComplex {
        &self.data[flat_index(&self.radices, index)]
    }

    /// `new[…, j, …] = old[…, j + by, …]` along `axis`.
    pub fn shifted_along(&self, axis: usize, by: usize) -> ResolventTensor {
        let p = self.radices[axis];
        let stride = strides(&self.radices)[axis];
        let mut data = self.data.clone();
        for base in line_bases(&self.radices, axis) {
            for j in 0..p {
                data[base + j * stride] = self.data[base + ((j + by) % p) * stride].clone();
            }
        }
        ResolventTensor {
            data,
            radices: self.radices.clone(),
            level: self.level,
            kind: self.kind,
        }
    }

    /// Largest entrywise distance to another tensor of the same shape.
    pub fn max_distance(&self, other: &ResolventTensor) -> Real {
        assert_eq!(self.radices, other.radices);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.distance(b))
            .fold(Real::zero(self.digits()), Real::max)
    }
}

// ---------------------------------------------------------------------------
// Roots of unity and multiplication accounting

/// `ζ^e` for `e = 0..p`, where `ζ = exp(2πi·k/p)` for a chosen generator `k`.
#[derive(Clone, Debug)]
pub struct ZetaTable {
    p: usize,
    generator: u64,
    powers: Vec<ArbitraryComplex>,
}

impl ZetaTable {
    pub fn new(p: usize, digits: u32) -> Self {
        Self::with_generator(p, 1, digits)
    }

    pub fn with_generator(p: usize, k: u64, digits: u32) -> Self {
        assert!(k % p as u64 != 0 || p == 1, "generator must be a unit");
        let powers = (0..p as u64)
            .map(|e| unit_root_value(p as u64, (e * k) % p as u64, digits))
            .collect();
        ZetaTable {
            p,
            generator: k % p as u64,
            powers,
        }
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn get(&self, e: i64) -> &ArbitraryComplex {
        &self.powers[e.rem_euclid(self.p as i64) as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicationCounter {
    pub count: u64,
    pub budget: u64,
}

impl MultiplicationCounter {
    /// Budget `|G|·Σ(3p_i − 1)`.
    pub fn for_radices(radices: &[usize]) -> Self {
        let order: u64 = radices.iter().map(|&p| p as u64).product();
        let per: u64 = radices.iter().map(|&p| 3 * p as u64 - 1).sum();
        MultiplicationCounter {
            count: 0,
            budget: order * per,
        }
    }

    pub fn add(&mut self, n: u64) {
        self.count += n;
    }

    pub fn within_budget(&self) -> bool {
        self.count <= self.budget
    }
}

// ---------------------------------------------------------------------------
// Precision plan

#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionPlan {
    pub n_bound: BigInt,
    pub group_order: usize,
    pub x0_bound: f64,
    /// `log10(2·N·|G|·x0^(|G|−1))`.
    pub log10_bound: f64,
    pub required_digits: u32,
    pub margin: u32,
    pub digits: u32,
}

pub fn plan_precision(series: &CompositionSeries, x0_bound: f64, margin: u32) -> Result<PrecisionPlan, ResolventError> {
    plan_precision_for_radices(&series.radices(), x0_bound, margin, DEFAULT_DIGIT_CAP)
}

pub fn plan_precision_for_radices(
    radices: &[usize],
    x0_bound: f64,
    margin: u32,
    cap: u32,
) -> Result<PrecisionPlan, ResolventError> {
    let x0 = x0_bound.max(1.0);
    let order: usize = radices.iter().product();
    let mut n_bound = BigInt::from(1);
    let mut log_n = 0.0;
    for i in 0..radices.len() {
        let e: usize = radices[i..].iter().product();
        n_bound *= BigInt::from(radices[i]).pow(e as u32);
        log_n += e as f64 * (radices[i] as f64).log10();
    }
    let log10_bound = 2f64.log10() + log_n + (order as f64).log10() + (order as f64 - 1.0) * x0.log10();
    let snapped = if (log10_bound - log10_bound.round()).abs() < 1e-12 {
        log10_bound.round()
    } else {
        log10_bound
    };
    let required = snapped.ceil().max(1.0);
    if required + margin as f64 > cap as f64 {
        return Err(ResolventError::PrecisionInfeasible {
            required: (required + margin as f64).min(u64::MAX as f64) as u64,
            cap,
        });
    }
    let required_digits = required as u32;
    Ok(PrecisionPlan {
        n_bound,
        group_order: order,
        x0_bound: x0,
        log10_bound,
        required_digits,
        margin,
        digits: required_digits + margin,
    })
}

// ---------------------------------------------------------------------------
// Forward pass

/// `σ_m^{j_m} ∘ … ∘ σ_1^{j_1}` for a tensor index.
pub fn position_permutation(series: &CompositionSeries, index: &[usize]) -> Permutation {
    let mut acc = Permutation::identity(series.degree);
    for (step, &j) in series.steps.iter().zip(index) {
        acc = step.generator.pow(j as i64).compose(&acc);
    }
    acc
}

/// 0-based root index held by each tensor position.
pub fn position_roots(series: &CompositionSeries) -> Vec<usize> {
    let radices = series.radices();
    let total: usize = radices.iter().product();
    (0..total)
        .map(|f| position_permutation(series, &multi_index(&radices, f)).apply(0))
        .collect()
}

/// `Θ₀[j_1..j_m] = σ_m^{j_m} … σ_1^{j_1} x_1` over labeled roots.
pub fn build_theta0(roots: &RootSet, series: &CompositionSeries) -> Result<ResolventTensor, ResolventError> {
    if roots.len() != series.degree {
        return Err(ResolventError::ShapeMismatch {
            expected: series.degree,
            found: roots.len(),
        });
    }
    let data = position_roots(series)
        .into_iter()
        .map(|r| roots.roots[r].clone())
        .collect();
    Ok(ResolventTensor::new(series.radices(), data, 0, TensorKind::Theta))
}

/// One level of the forward pass, returning `(L_{i−1}, Θ_i)`.
pub fn forward_level(
    theta_prev: &ResolventTensor,
    axis: usize,
    zeta: &ZetaTable,
    counter: &mut MultiplicationCounter,
) -> (ResolventTensor, ResolventTensor) {
    forward_level_with(theta_prev, axis, zeta, zeta, counter)
}

/// As [`forward_level`], with separate roots of unity for the resolvent
/// sums and for the inverse transform.
pub fn forward_level_with(
    theta_prev: &ResolventTensor,
    axis: usize,
    resolvent_zeta: &ZetaTable,
    inverse_zeta: &ZetaTable,
    counter: &mut MultiplicationCounter,
) -> (ResolventTensor, ResolventTensor) {
    let radices = theta_prev.radices().to_vec();
    let p = radices[axis];
    assert_eq!(p, resolvent_zeta.order());
    assert_eq!(p, inverse_zeta.order());
    let stride = strides(&radices)[axis];
    let digits = theta_prev.digits();
    let inv_p = BigInt::from(p);
    let mut l_data = theta_prev.data().to_vec();
    let mut t_data = theta_prev.data().to_vec();
    for base in line_bases(&radices, axis) {
        let line: Vec<&ArbitraryComplex> = (0..p).map(|j| &theta_prev.data()[base + j * stride]).collect();
        let mut powered = Vec::with_capacity(p);
        for k in 0..p {
            let mut acc = ArbitraryComplex::zero(digits);
            for (j, v) in line.iter().enumerate() {
                let e = (j * k) % p;
                if e == 0 {
                    acc = acc.add(v);
                } else {
                    acc = acc.add(&resolvent_zeta.get(e as i64).mul(v));
                    counter.add(1);
                }
            }
            let (pw, c) = acc.pow_counted(p as u64);
            counter.add(c);
            powered.push(pw);
            l_data[base + k * stride] = acc;
        }
        for j in 0..p {
            let mut acc = ArbitraryComplex::zero(digits);
            for (k, v) in powered.iter().enumerate() {
                let e = (j * k) % p;
                if e == 0 {
                    acc = acc.add(v);
                } else {
                    acc = acc.add(&inverse_zeta.get(-(e as i64)).mul(v));
                    counter.add(1);
                }
            }
            t_data[base + j * stride] = acc.div_integer(&inv_p);
        }
    }
    let level = axis + 1;
    (
        ResolventTensor::new(radices.clone(), l_data, axis, TensorKind::Lagrange),
        ResolventTensor::new(radices, t_data, level, TensorKind::Theta),
    )
}

/// `(1/p)·Σ_k ζ^(−jk)·L[…,k,…]` along `axis`; recovers `Θ_{i−1}` from `L_{i−1}`.
pub fn inverse_level(l: &ResolventTensor, axis: usize, zeta: &ZetaTable) -> ResolventTensor {
    let radices = l.radices().to_vec();
    let p = radices[axis];
    let stride = strides(&radices)[axis];
    let digits = l.digits();
    let mut data = l.data().to_vec();
    for base in line_bases(&radices, axis) {
        for j in 0..p {
            let mut acc = ArbitraryComplex::zero(digits);
            for k in 0..p {
                acc = acc.add(&zeta.get(-((j * k) as i64)).mul(&l.data()[base + k * stride]));
            }
            data[base + j * stride] = acc.div_integer(&BigInt::from(p));
        }
    }
    ResolventTensor::new(radices, data, axis, TensorKind::Theta)
}

/// All tensors of a forward pass: `thetas[i] = Θ_i` for `i = 0..=m` and
/// `lagranges[i] = L_i` for `i = 0..m`.
#[derive(Clone, Debug)]
pub struct ForwardPass {
    pub thetas: Vec<ResolventTensor>,
    pub lagranges: Vec<ResolventTensor>,
    pub zetas: Vec<ZetaTable>,
    pub counter: MultiplicationCounter,
}

impl ForwardPass {
    pub fn theta_m(&self) -> &ResolventTensor {
        self.thetas.last().expect("theta_0 always present")
    }
}

pub fn forward_pass(theta0: ResolventTensor) -> ForwardPass {
    let radices = theta0.radices().to_vec();
    let digits = theta0.digits();
    let zetas: Vec<ZetaTable> = radices.iter().map(|&p| ZetaTable::new(p, digits)).collect();
    forward_pass_with(theta0, zetas.clone(), zetas)
}

pub fn forward_pass_with(
    theta0: ResolventTensor,
    resolvent_zetas: Vec<ZetaTable>,
    inverse_zetas: Vec<ZetaTable>,
) -> ForwardPass {
    let radices = theta0.radices().to_vec();
    let mut counter = MultiplicationCounter::for_radices(&radices);
    let mut thetas = vec![theta0];
    let mut lagranges = Vec::new();
    for axis in 0..radices.len() {
        let (l, t) = forward_level_with(
            thetas.last().expect("nonempty"),
            axis,
            &resolvent_zetas[axis],
            &inverse_zetas[axis],
            &mut counter,
        );
        lagranges.push(l);
        thetas.push(t);
    }
    ForwardPass {
        thetas,
        lagranges,
        zetas: inverse_zetas,
        counter,
    }
}

// ---------------------------------------------------------------------------
// Rounding

#[derive(Clone, Debug)]
pub struct IntegerThetaTensor {
    pub radices: Vec<usize>,
    pub values: Vec<BigInt>,
    pub residuals: Vec<Real>,
}

impl IntegerThetaTensor {
    pub fn get(&self, index: &[usize]) -> &BigInt {
        &self.values[flat_index(&self.radices, index)]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(Real::to_f64).fold(0.0, f64::max)
    }
}

pub fn round_theta_m(theta_m: &ResolventTensor, tolerance: f64) -> Result<IntegerThetaTensor, ResolventError> {
    let mut values = Vec::with_capacity(theta_m.len());
    let mut residuals = Vec::with_capacity(theta_m.len());
    for (f, z) in theta_m.data().iter().enumerate() {
        let (n, r) = nearest_integer(z);
        let rf = r.to_f64();
        if !(rf < tolerance) {
            return Err(ResolventError::ResidualTooLarge {
                index: multi_index(theta_m.radices(), f),
                residual: rf,
            });
        }
        values.push(n);
        residuals.push(r);
    }
    Ok(IntegerThetaTensor {
        radices: theta_m.radices().to_vec(),
        values,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{closure, composition_series, parse_generators};
    use crate::polynomial::parse_polynomial;
    use crate::rootfinder::find_roots;

    fn series(gens: &str, n: usize) -> CompositionSeries {
        let g = parse_generators(gens, Some(n)).unwrap();
        composition_series(&closure(&g, n).unwrap()).unwrap()
    }

    fn c(re: f64, im: f64, d: u32) -> ArbitraryComplex {
        ArbitraryComplex::from_f64(re, im, d)
    }

    #[test]
    fn indexing() {
        let r = [5, 2];
        assert_eq!(flat_index(&r, &[3, 1]), 7);
        assert_eq!(multi_index(&r, 7), vec![3, 1]);
        assert_eq!(line_bases(&r, 0), vec![0, 1]);
        assert_eq!(line_bases(&r, 1), vec![0, 2, 4, 6, 8]);
    }

    #[test]
    fn plans() {
        let p = plan_precision_for_radices(&[5, 2], 2.4, 1, DEFAULT_DIGIT_CAP).unwrap();
        assert_eq!(p.n_bound, BigInt::from(5).pow(10) * 4);
        assert!((p.log10_bound - 12.315).abs() < 1e-3);
        assert_eq!((p.required_digits, p.digits), (13, 14));
        assert_eq!(plan_precision_for_radices(&[2], 1.5, 2, DEFAULT_DIGIT_CAP).unwrap().digits, 4);
        // log10(16) = 1.204
        assert_eq!(plan_precision_for_radices(&[2], 1.0, 0, DEFAULT_DIGIT_CAP).unwrap().digits, 2);
        assert_eq!(
            plan_precision_for_radices(&[2], 1.0, 0, 1),
            Err(ResolventError::PrecisionInfeasible { required: 2, cap: 1 })
        );
        // small roots never shrink the bound
        assert_eq!(
            plan_precision_for_radices(&[2], 0.1, 0, DEFAULT_DIGIT_CAP).unwrap().digits,
            2
        );
    }

    #[test]
    fn sqrt2_level() {
        let rs = find_roots(&parse_polynomial("x^2-2").unwrap(), 20).unwrap();
        let s = series("(1,2)", 2);
        let t0 = build_theta0(&rs, &s).unwrap();
        // canonical order puts +√2 first
        assert!((t0.data()[0].to_f64_pair().0 - 2f64.sqrt()).abs() < 1e-15);
        assert!((t0.data()[1].to_f64_pair().0 + 2f64.sqrt()).abs() < 1e-15);
        let fp = forward_pass(t0);
        let l = fp.lagranges[0].data();
        assert!(l[0].norm().to_f64() < 1e-18);
        assert!((l[1].to_f64_pair().0 - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        let it = round_theta_m(fp.theta_m(), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(it.values, vec![BigInt::from(4), BigInt::from(-4)]);
    }

    #[test]
    fn constant_axis_gives_vanishing_resolvents() {
        let d = 30;
        let t = ResolventTensor::new(vec![3], vec![c(1.5, -0.5, d); 3], 0, TensorKind::Theta);
        let mut counter = MultiplicationCounter::for_radices(&[3]);
        let (l, _) = forward_level(&t, 0, &ZetaTable::new(3, d), &mut counter);
        assert!(l.data()[1].norm().below_pow10(-25.0));
        assert!(l.data()[2].norm().below_pow10(-25.0));
    }

    #[test]
    fn rounding_rejects_far_entries() {
        let t = ResolventTensor::new(vec![2], vec![c(3.0, 0.0, 20), c(0.4, 0.0, 20)], 1, TensorKind::Theta);
        match round_theta_m(&t, 0.25) {
            Err(ResolventError::ResidualTooLarge { index, residual }) => {
                assert_eq!(index, vec![1]);
                assert!((residual - 0.4).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trivial_group() {
        let rs = find_roots(&parse_polynomial("x - 7").unwrap(), 10).unwrap();
        let s = CompositionSeries { degree: 1, steps: vec![] };
        let fp = forward_pass(build_theta0(&rs, &s).unwrap());
        assert_eq!(fp.counter.count, 0);
        assert_eq!(round_theta_m(fp.theta_m(), 0.25).unwrap().values, vec![BigInt::from(7)]);
    }

    #[test]
    fn multiplication_counts() {
        let rs = find_roots(&parse_polynomial("x^5+20x+32").unwrap(), 20).unwrap();
        let rs = rs.permuted(&[4, 0, 2, 1, 3]);
        let s = series("(1,2,3,4,5);(1,4)(2,3)", 5);
        let fp = forward_pass(build_theta0(&rs, &s).unwrap());
        assert_eq!(fp.counter.budget, 190);
        // lines × (2(p−1)² + p·cost(p^p)): 2·(32 + 15) + 5·(2 + 2)
        assert_eq!(fp.counter.count, 114);
    }
}
