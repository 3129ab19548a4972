//! Backward pass: exact radical expressions rebuilt from the integer top
//! tensor, with p-th root branches matched against the stored numeric
//! resolvents. Also evaluation, emitters and a JSON reader.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::precision::{principal_root, unit_root_value, ArbitraryComplex, Real};
use crate::resolvent::{flat_index, line_bases, multi_index, strides, ForwardPass, IntegerThetaTensor};
use crate::rootfinder::RootSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadicalError {
    #[error(
        "ambiguous branch at level {level}, index {index:?}: best distance {best:e}, runner-up {second:e}, tolerance {delta:e}"
    )]
    PhaseAmbiguous {
        level: usize,
        index: Vec<usize>,
        best: f64,
        second: f64,
        delta: f64,
    },
    #[error("root {root} deviates by {deviation:e} (threshold {threshold:e})")]
    VerificationFailed { root: usize, deviation: f64, threshold: f64 },
    #[error("expected {expected} expressions, got {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("invalid expression JSON: {0}")]
    Json(String),
}

// ---------------------------------------------------------------------------
// Expression tree

#[derive(Debug, PartialEq, Eq)]
pub enum RadicalNode {
    Integer(BigInt),
    /// `(1/denominator)·child`.
    Scale { denominator: BigInt, child: RadicalExpr },
    /// `ζ_p^power` with `ζ_p = exp(2πi/p)`.
    Zeta { order: u64, power: u64 },
    Sum(Vec<RadicalExpr>),
    Product(Vec<RadicalExpr>),
    /// `ζ_p^branch · principal p-th root of radicand`.
    Root { degree: u64, branch: u64, radicand: RadicalExpr },
}

/// Immutable, cheaply cloned handle on a shared expression node.
#[derive(Clone, Debug, Eq)]
pub struct RadicalExpr(Arc<RadicalNode>);

impl PartialEq for RadicalExpr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl RadicalExpr {
    /// Wraps a node as is, without simplification.
    pub fn from_node(node: RadicalNode) -> Self {
        RadicalExpr(Arc::new(node))
    }

    pub fn node(&self) -> &RadicalNode {
        &self.0
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::from_node(RadicalNode::Integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self.node() {
            RadicalNode::Integer(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_integer().is_some_and(Zero::is_zero)
    }

    /// `ζ_p^k`, reduced: `ζ^0 = 1`, `ζ_2 = −1`.
    pub fn zeta(p: u64, k: i64) -> Self {
        let k = k.rem_euclid(p as i64) as u64;
        if k == 0 {
            Self::integer(1)
        } else if p == 2 {
            Self::integer(-1)
        } else {
            Self::from_node(RadicalNode::Zeta { order: p, power: k })
        }
    }

    /// Sum with zero terms dropped and integer terms folded into one.
    pub fn sum(terms: Vec<RadicalExpr>) -> Self {
        let mut constant = BigInt::zero();
        let mut rest = Vec::new();
        for t in terms {
            match t.as_integer() {
                Some(n) => constant += n,
                None => rest.push(t),
            }
        }
        if rest.is_empty() {
            return Self::integer(constant);
        }
        if !constant.is_zero() {
            rest.insert(0, Self::integer(constant));
        }
        Self::from_node(RadicalNode::Sum(rest))
    }

    /// Product with integers folded, nested products flattened and powers of
    /// the same root of unity combined.
    pub fn product(factors: Vec<RadicalExpr>) -> Self {
        let mut coefficient = BigInt::one();
        let mut zetas: Vec<(u64, u64)> = Vec::new();
        let mut rest = Vec::new();
        let mut stack: Vec<RadicalExpr> = factors.into_iter().rev().collect();
        while let Some(f) = stack.pop() {
            match f.node() {
                RadicalNode::Integer(n) => coefficient *= n,
                RadicalNode::Zeta { order, power } => match zetas.iter_mut().find(|(p, _)| p == order) {
                    Some(z) => z.1 = (z.1 + power) % order,
                    None => zetas.push((*order, *power)),
                },
                RadicalNode::Product(inner) => stack.extend(inner.iter().rev().cloned()),
                _ => rest.push(f.clone()),
            }
        }
        if coefficient.is_zero() {
            return Self::zero();
        }
        zetas.sort();
        let mut out = Vec::new();
        for (p, k) in zetas {
            match Self::zeta(p, k as i64).as_integer() {
                Some(n) => coefficient *= n,
                None => out.push(Self::zeta(p, k as i64)),
            }
        }
        out.extend(rest);
        if out.is_empty() {
            return Self::integer(coefficient);
        }
        if !coefficient.is_one() {
            out.insert(0, Self::integer(coefficient));
        }
        if out.len() == 1 {
            return out.pop().expect("one factor");
        }
        Self::from_node(RadicalNode::Product(out))
    }

    /// `(1/d)·child`; exact integer quotients are folded.
    pub fn scale(denominator: impl Into<BigInt>, child: RadicalExpr) -> Self {
        let d: BigInt = denominator.into();
        assert!(!d.is_zero(), "zero denominator");
        if d.is_one() {
            return child;
        }
        if let Some(n) = child.as_integer() {
            if n.is_multiple_of(&d) {
                return Self::integer(n / &d);
            }
        }
        Self::from_node(RadicalNode::Scale { denominator: d, child })
    }

    /// Branch `s` of the p-th root; zero radicands give zero.
    pub fn root(p: u64, branch: u64, radicand: RadicalExpr) -> Self {
        if radicand.is_zero() {
            return Self::zero();
        }
        Self::from_node(RadicalNode::Root {
            degree: p,
            branch: branch % p,
            radicand,
        })
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(Arc::as_ptr(&e.0) as usize) {
                continue;
            }
            stack.extend(e.children());
        }
        seen.len()
    }

    fn children(&self) -> Vec<RadicalExpr> {
        match self.node() {
            RadicalNode::Integer(_) | RadicalNode::Zeta { .. } => vec![],
            RadicalNode::Scale { child, .. } => vec![child.clone()],
            RadicalNode::Sum(v) | RadicalNode::Product(v) => v.clone(),
            RadicalNode::Root { radicand, .. } => vec![radicand.clone()],
        }
    }
}

/// `Σ_e c_e ζ_p^e` reduced with `ζ^(p−1) = −(1 + ζ + … + ζ^(p−2))`.
pub fn cyclotomic_normal_form(p: u64, coefficients: &[BigInt]) -> RadicalExpr {
    let p_us = p as usize;
    let mut c = vec![BigInt::zero(); p_us];
    for (e, v) in coefficients.iter().enumerate() {
        c[e % p_us] += v;
    }
    let top = c[p_us - 1].clone();
    let terms = (0..p_us - 1)
        .map(|e| {
            let coeff = &c[e] - &top;
            RadicalExpr::product(vec![RadicalExpr::integer(coeff), RadicalExpr::zeta(p, e as i64)])
        })
        .collect();
    RadicalExpr::sum(terms)
}

// ---------------------------------------------------------------------------
// Evaluation

/// Memoizing evaluator at a fixed working precision.
pub struct Evaluator {
    digits: u32,
    memo: HashMap<usize, (RadicalExpr, ArbitraryComplex)>,
}

impl Evaluator {
    pub fn new(digits: u32) -> Self {
        Evaluator {
            digits,
            memo: HashMap::new(),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn eval(&mut self, expr: &RadicalExpr) -> ArbitraryComplex {
        let key = Arc::as_ptr(&expr.0) as usize;
        if let Some((_, v)) = self.memo.get(&key) {
            return v.clone();
        }
        let d = self.digits;
        let v = match expr.node() {
            RadicalNode::Integer(n) => ArbitraryComplex::from_integer(n, d),
            RadicalNode::Scale { denominator, child } => self.eval(child).div_integer(denominator),
            RadicalNode::Zeta { order, power } => unit_root_value(*order, *power, d),
            RadicalNode::Sum(terms) => terms
                .iter()
                .fold(ArbitraryComplex::zero(d), |acc, t| acc.add(&self.eval(t))),
            RadicalNode::Product(factors) => factors
                .iter()
                .fold(ArbitraryComplex::one(d), |acc, f| acc.mul(&self.eval(f))),
            RadicalNode::Root { degree, branch, radicand } => {
                let w = principal_root(&self.eval(radicand), *degree);
                if *branch == 0 {
                    w
                } else {
                    unit_root_value(*degree, *branch, d).mul(&w)
                }
            }
        };
        self.memo.insert(key, (expr.clone(), v.clone()));
        v
    }
}

pub fn evaluate(expr: &RadicalExpr, digits: u32) -> ArbitraryComplex {
    Evaluator::new(digits).eval(expr)
}

// ---------------------------------------------------------------------------
// Emitters

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Latex,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "latex" => Ok(OutputFormat::Latex),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}'")),
        }
    }
}

pub fn emit(expr: &RadicalExpr, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => to_text(expr),
        OutputFormat::Latex => to_latex(expr),
        OutputFormat::Json => to_json(expr).to_string(),
    }
}

pub fn to_text(expr: &RadicalExpr) -> String {
    let mut s = String::new();
    write_text(expr, &mut s, true);
    s
}

fn write_text(expr: &RadicalExpr, out: &mut String, top: bool) {
    match expr.node() {
        RadicalNode::Integer(n) => {
            if n.is_negative() && !top {
                let _ = write!(out, "({n})");
            } else {
                let _ = write!(out, "{n}");
            }
        }
        RadicalNode::Scale { denominator, child } => {
            let _ = write!(out, "(1/{denominator})*");
            if matches!(child.node(), RadicalNode::Sum(_)) {
                write_text(child, out, false);
            } else {
                out.push('(');
                write_text(child, out, true);
                out.push(')');
            }
        }
        RadicalNode::Zeta { order, power } => {
            let _ = write!(out, "zeta_{order}^{power}");
        }
        RadicalNode::Sum(terms) => {
            out.push('(');
            for (i, t) in terms.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                write_text(t, out, false);
            }
            out.push(')');
        }
        RadicalNode::Product(factors) => {
            for (i, f) in factors.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                if matches!(f.node(), RadicalNode::Scale { .. }) {
                    out.push('(');
                    write_text(f, out, true);
                    out.push(')');
                } else {
                    write_text(f, out, false);
                }
            }
        }
        RadicalNode::Root { degree, branch, radicand } => {
            let _ = write!(out, "root({degree},{branch}; ");
            write_text(radicand, out, true);
            out.push(')');
        }
    }
}

pub fn to_latex(expr: &RadicalExpr) -> String {
    let mut s = String::new();
    write_latex(expr, &mut s, true);
    s
}

fn write_latex(expr: &RadicalExpr, out: &mut String, top: bool) {
    match expr.node() {
        RadicalNode::Integer(n) => {
            if n.is_negative() && !top {
                let _ = write!(out, "\\left({n}\\right)");
            } else {
                let _ = write!(out, "{n}");
            }
        }
        RadicalNode::Scale { denominator, child } => {
            let _ = write!(out, "\\frac{{1}}{{{denominator}}}");
            if matches!(child.node(), RadicalNode::Sum(_)) {
                write_latex(child, out, false);
            } else {
                out.push_str("\\left(");
                write_latex(child, out, true);
                out.push_str("\\right)");
            }
        }
        RadicalNode::Zeta { order, power } => {
            let _ = write!(out, "\\zeta_{{{order}}}^{{{power}}}");
        }
        RadicalNode::Sum(terms) => {
            out.push_str("\\left(");
            for (i, t) in terms.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                write_latex(t, out, false);
            }
            out.push_str("\\right)");
        }
        RadicalNode::Product(factors) => {
            for (i, f) in factors.iter().enumerate() {
                if i > 0 {
                    out.push_str(" \\cdot ");
                }
                if matches!(f.node(), RadicalNode::Scale { .. }) {
                    out.push_str("\\left(");
                    write_latex(f, out, true);
                    out.push_str("\\right)");
                } else {
                    write_latex(f, out, false);
                }
            }
        }
        RadicalNode::Root { degree, branch, radicand } => {
            if *branch != 0 {
                let _ = write!(out, "\\zeta_{{{degree}}}^{{{branch}}}");
            }
            if *degree == 2 {
                out.push_str("\\sqrt{");
            } else {
                let _ = write!(out, "\\sqrt[{degree}]{{");
            }
            write_latex(radicand, out, true);
            out.push('}');
        }
    }
}

pub fn to_json(expr: &RadicalExpr) -> Value {
    match expr.node() {
        RadicalNode::Integer(n) => json!({ "int": n.to_string() }),
        RadicalNode::Scale { denominator, child } => {
            let mut m = Map::new();
            m.insert("scale".into(), Value::String(format!("1/{denominator}")));
            match child.node() {
                RadicalNode::Sum(terms) => {
                    m.insert("sum".into(), Value::Array(terms.iter().map(to_json).collect()));
                }
                _ => {
                    m.insert("expr".into(), to_json(child));
                }
            }
            Value::Object(m)
        }
        RadicalNode::Zeta { order, power } => json!({ "zeta": { "p": order, "k": power } }),
        RadicalNode::Sum(terms) => json!({ "sum": terms.iter().map(to_json).collect::<Vec<_>>() }),
        RadicalNode::Product(f) => json!({ "product": f.iter().map(to_json).collect::<Vec<_>>() }),
        RadicalNode::Root { degree, branch, radicand } => json!({
            "root": { "p": degree, "branch": branch, "radicand": to_json(radicand) }
        }),
    }
}

/// Reads the tree written by [`to_json`], node for node.
pub fn from_json(v: &Value) -> Result<RadicalExpr, RadicalError> {
    let bad = |m: &str| RadicalError::Json(m.to_string());
    let obj = v.as_object().ok_or_else(|| bad("node must be an object"))?;
    let list = |v: &Value| -> Result<Vec<RadicalExpr>, RadicalError> {
        v.as_array()
            .ok_or_else(|| bad("expected an array"))?
            .iter()
            .map(from_json)
            .collect()
    };
    let uint = |v: Option<&Value>, what: &str| -> Result<u64, RadicalError> {
        v.and_then(Value::as_u64)
            .ok_or_else(|| RadicalError::Json(format!("missing or invalid '{what}'")))
    };
    let node = if let Some(n) = obj.get("int") {
        let s = n.as_str().ok_or_else(|| bad("'int' must be a string"))?;
        RadicalNode::Integer(s.parse().map_err(|_| bad("malformed integer"))?)
    } else if let Some(s) = obj.get("scale") {
        let s = s.as_str().ok_or_else(|| bad("'scale' must be a string"))?;
        let d = s.strip_prefix("1/").ok_or_else(|| bad("scale must look like 1/d"))?;
        let denominator: BigInt = d.parse().map_err(|_| bad("malformed denominator"))?;
        let child = if let Some(terms) = obj.get("sum") {
            RadicalExpr::from_node(RadicalNode::Sum(list(terms)?))
        } else {
            from_json(obj.get("expr").ok_or_else(|| bad("scale needs 'sum' or 'expr'"))?)?
        };
        RadicalNode::Scale { denominator, child }
    } else if let Some(z) = obj.get("zeta") {
        RadicalNode::Zeta {
            order: uint(z.get("p"), "p")?,
            power: uint(z.get("k"), "k")?,
        }
    } else if let Some(terms) = obj.get("sum") {
        RadicalNode::Sum(list(terms)?)
    } else if let Some(f) = obj.get("product") {
        RadicalNode::Product(list(f)?)
    } else if let Some(r) = obj.get("root") {
        RadicalNode::Root {
            degree: uint(r.get("p"), "p")?,
            branch: uint(r.get("branch"), "branch")?,
            radicand: from_json(r.get("radicand").ok_or_else(|| bad("root needs 'radicand'"))?)?,
        }
    } else {
        return Err(bad("unknown node tag"));
    };
    Ok(RadicalExpr::from_node(node))
}

// ---------------------------------------------------------------------------
// Reconstruction

/// One accepted p-th root extraction.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchRecord {
    pub level: usize,
    /// Index into `L_{level−1}`.
    pub index: Vec<usize>,
    pub branch: u64,
    pub best: f64,
    pub second: f64,
    pub delta: f64,
}

/// A resolvent whose radicand evaluated to zero; the branch is irrelevant
/// and the resolvent is replaced by 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroRadicandNote {
    pub level: usize,
    pub index: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    /// `thetas[i]`: exact `Θ_i` entries, `i = 0..=m`.
    pub thetas: Vec<Vec<RadicalExpr>>,
    /// `lagranges[i]`: exact `L_i` entries, `i = 0..m`.
    pub lagranges: Vec<Vec<RadicalExpr>>,
    pub branches: Vec<BranchRecord>,
    pub zero_notes: Vec<ZeroRadicandNote>,
}

impl Reconstruction {
    /// One expression per root, in label order, given which root each
    /// tensor position holds.
    pub fn root_expressions(&self, position_roots: &[usize], n: usize) -> Vec<RadicalExpr> {
        let mut out: Vec<Option<RadicalExpr>> = vec![None; n];
        for (f, &r) in position_roots.iter().enumerate() {
            if out[r].is_none() {
                out[r] = Some(self.thetas[0][f].clone());
            }
        }
        out.into_iter()
            .map(|e| e.expect("transitive action covers every root"))
            .collect()
    }
}

/// Branch tolerance exponent: `δ = 10^(−digits/4)·max(1, |target|)`.
pub const BRANCH_EXPONENT_DIVISOR: f64 = 4.0;

pub fn reconstruct(int_theta: &IntegerThetaTensor, forward: &ForwardPass) -> Result<Reconstruction, RadicalError> {
    let radices = int_theta.radices.clone();
    let m = radices.len();
    let digits = forward.thetas[0].digits();
    let mut ev = Evaluator::new(digits);
    let mut branches = Vec::new();
    let mut zero_notes = Vec::new();
    let mut thetas: Vec<Vec<RadicalExpr>> = vec![Vec::new(); m + 1];
    let mut lagranges: Vec<Vec<RadicalExpr>> = vec![Vec::new(); m];
    thetas[m] = int_theta.values.iter().map(|v| RadicalExpr::integer(v.clone())).collect();
    let delta_log = -(digits as f64) / BRANCH_EXPONENT_DIVISOR;
    let zero_log = -(digits as f64) / 2.0;

    for level in (1..=m).rev() {
        let axis = level - 1;
        let p = radices[axis];
        let pu = p as u64;
        let stride = strides(&radices)[axis];
        let upper = &thetas[level];
        let stored = forward.lagranges[axis].data();
        let mut l_exact = vec![RadicalExpr::zero(); upper.len()];
        let mut lower = vec![RadicalExpr::zero(); upper.len()];
        for base in line_bases(&radices, axis) {
            for k in 0..p {
                let pos = base + k * stride;
                let radicand = if level == m {
                    let mut coeffs = vec![BigInt::zero(); p];
                    for j in 0..p {
                        coeffs[(j * k) % p] += &int_theta.values[base + j * stride];
                    }
                    cyclotomic_normal_form(pu, &coeffs)
                } else {
                    RadicalExpr::sum(
                        (0..p)
                            .map(|j| {
                                RadicalExpr::product(vec![
                                    RadicalExpr::zeta(pu, (j * k) as i64),
                                    upper[base + j * stride].clone(),
                                ])
                            })
                            .collect(),
                    )
                };
                if radicand.is_zero() {
                    zero_notes.push(ZeroRadicandNote {
                        level,
                        index: multi_index(&radices, pos),
                    });
                    continue;
                }
                let value = ev.eval(&radicand);
                let target = &stored[pos];
                let scale_log = target.norm().log10().max(0.0);
                if value.norm().log10() < zero_log + scale_log * pu as f64 {
                    zero_notes.push(ZeroRadicandNote {
                        level,
                        index: multi_index(&radices, pos),
                    });
                    continue;
                }
                let w = principal_root(&value, pu);
                let mut dists: Vec<(f64, u64)> = (0..pu)
                    .map(|s| {
                        let cand = unit_root_value(pu, s, digits).mul(&w);
                        (cand.distance(target).log10(), s)
                    })
                    .collect();
                dists.sort_by(|a, b| a.0.total_cmp(&b.0));
                let d_log = delta_log + scale_log;
                let (best, s) = dists[0];
                let second = dists.get(1).map_or(f64::INFINITY, |d| d.0);
                let ok = best < d_log && second > d_log + 2f64.log10();
                if !ok {
                    return Err(RadicalError::PhaseAmbiguous {
                        level,
                        index: multi_index(&radices, pos),
                        best: 10f64.powf(best),
                        second: 10f64.powf(second),
                        delta: 10f64.powf(d_log),
                    });
                }
                branches.push(BranchRecord {
                    level,
                    index: multi_index(&radices, pos),
                    branch: s,
                    best: 10f64.powf(best),
                    second: 10f64.powf(second),
                    delta: 10f64.powf(d_log),
                });
                l_exact[pos] = RadicalExpr::root(pu, s, radicand);
            }
            for j in 0..p {
                let terms = (0..p)
                    .map(|k| {
                        RadicalExpr::product(vec![
                            RadicalExpr::zeta(pu, -((j * k) as i64)),
                            l_exact[base + k * stride].clone(),
                        ])
                    })
                    .collect();
                lower[base + j * stride] = RadicalExpr::scale(p, RadicalExpr::sum(terms));
            }
        }
        lagranges[axis] = l_exact;
        thetas[axis] = lower;
    }
    Ok(Reconstruction {
        thetas,
        lagranges,
        branches,
        zero_notes,
    })
}

/// Position in the flat tensor for a multi-index, re-exported for callers
/// that inspect branch records.
pub fn position_of(radices: &[usize], index: &[usize]) -> usize {
    flat_index(radices, index)
}

// ---------------------------------------------------------------------------
// Verification

/// `|eval(expr_r) − x_r|` for each labeled root; fails at `10^(−digits/2)`.
pub fn verify(exprs: &[RadicalExpr], roots: &RootSet, digits: u32) -> Result<Vec<Real>, RadicalError> {
    if exprs.len() != roots.len() {
        return Err(RadicalError::CountMismatch {
            expected: roots.len(),
            found: exprs.len(),
        });
    }
    let threshold = -(digits as f64) / 2.0;
    let mut ev = Evaluator::new(digits);
    let mut out = Vec::with_capacity(exprs.len());
    for (r, (e, x)) in exprs.iter().zip(&roots.roots).enumerate() {
        let dev = ev.eval(e).distance(&x.with_digits(digits));
        if !dev.below_pow10(threshold) {
            return Err(RadicalError::VerificationFailed {
                root: r,
                deviation: dev.to_f64(),
                threshold: 10f64.powf(threshold),
            });
        }
        out.push(dev);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{closure, composition_series, parse_generators};
    use crate::polynomial::parse_polynomial;
    use crate::resolvent::{build_theta0, forward_pass, position_roots, round_theta_m};
    use crate::rootfinder::find_roots;

    fn sqrt8_over_2() -> RadicalExpr {
        let r = RadicalExpr::root(2, 0, RadicalExpr::integer(8));
        RadicalExpr::scale(2, RadicalExpr::sum(vec![RadicalExpr::zero(), r]))
    }

    #[test]
    fn emit_examples() {
        let e = sqrt8_over_2();
        assert_eq!(to_text(&e), "(1/2)*(root(2,0; 8))");
        assert_eq!(to_latex(&e), "\\frac{1}{2}\\left(\\sqrt{8}\\right)");
        assert_eq!(
            to_json(&e).to_string(),
            r#"{"scale":"1/2","sum":[{"root":{"p":2,"branch":0,"radicand":{"int":"8"}}}]}"#
        );
        let z = RadicalExpr::root(3, 2, RadicalExpr::integer(-4));
        assert_eq!(to_latex(&z), "\\zeta_{3}^{2}\\sqrt[3]{-4}");
        assert_eq!(to_text(&z), "root(3,2; -4)");
    }

    #[test]
    fn evaluate_examples() {
        let r = evaluate(&RadicalExpr::root(2, 0, RadicalExpr::integer(8)), 20);
        assert!((r.to_f64_pair().0 - 2.8284271247462).abs() < 1e-13);
        let z = evaluate(&RadicalExpr::from_node(RadicalNode::Zeta { order: 5, power: 0 }), 20);
        assert_eq!(z.to_f64_pair(), (1.0, 0.0));
        let s = evaluate(&sqrt8_over_2(), 20);
        assert!((s.to_f64_pair().0 - 1.4142135623731).abs() < 1e-13);
        // branch 1 of the cube root of 8 is 2ω
        let w = evaluate(&RadicalExpr::root(3, 1, RadicalExpr::integer(8)), 20).to_f64_pair();
        assert!((w.0 + 1.0).abs() < 1e-15 && (w.1 - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn simplification_rules() {
        assert!(RadicalExpr::root(5, 3, RadicalExpr::zero()).is_zero());
        assert_eq!(RadicalExpr::zeta(2, 1), RadicalExpr::integer(-1));
        assert_eq!(RadicalExpr::zeta(7, 14), RadicalExpr::integer(1));
        let z = RadicalExpr::product(vec![RadicalExpr::zeta(5, 2), RadicalExpr::integer(3), RadicalExpr::zeta(5, 3)]);
        assert_eq!(z, RadicalExpr::integer(3));
        let s = RadicalExpr::sum(vec![RadicalExpr::integer(2), RadicalExpr::integer(-2)]);
        assert!(s.is_zero());
        assert_eq!(RadicalExpr::scale(4, RadicalExpr::integer(-12)), RadicalExpr::integer(-3));
        // 1 + ζ + ζ² = 0
        assert!(cyclotomic_normal_form(3, &[BigInt::from(1), BigInt::from(1), BigInt::from(1)]).is_zero());
        assert_eq!(
            cyclotomic_normal_form(2, &[BigInt::from(-324), BigInt::from(648)]),
            RadicalExpr::integer(-972)
        );
    }

    #[test]
    fn json_round_trip_fixed() {
        let e = RadicalExpr::product(vec![
            RadicalExpr::integer(-7),
            RadicalExpr::zeta(5, 2),
            RadicalExpr::root(5, 4, RadicalExpr::scale(3, RadicalExpr::zeta(7, 1))),
        ]);
        assert_eq!(from_json(&to_json(&e)).unwrap(), e);
        assert!(from_json(&serde_json::json!({"nope": 1})).is_err());
    }

    fn solve_small(poly: &str, gens: &str, n: usize, digits: u32) -> (RootSet, Vec<RadicalExpr>, Reconstruction) {
        let rs = find_roots(&parse_polynomial(poly).unwrap(), digits).unwrap();
        let g = closure(&parse_generators(gens, Some(n)).unwrap(), n).unwrap();
        let s = composition_series(&g).unwrap();
        let fp = forward_pass(build_theta0(&rs, &s).unwrap());
        let it = round_theta_m(fp.theta_m(), 0.25).unwrap();
        let rec = reconstruct(&it, &fp).unwrap();
        let exprs = rec.root_expressions(&position_roots(&s), n);
        (rs, exprs, rec)
    }

    #[test]
    fn sqrt2_reconstruction() {
        let (rs, exprs, rec) = solve_small("x^2-2", "(1,2)", 2, 20);
        assert_eq!(to_text(&exprs[0]), "(1/2)*(root(2,0; 8))");
        assert_eq!(rec.zero_notes.len(), 1);
        let dev = verify(&exprs, &rs, 20).unwrap();
        assert!(dev.iter().all(|d| d.below_pow10(-10.0)));
    }

    #[test]
    fn cube_root_two_reconstruction() {
        // every labeling of x^3 - 2 is consistent with S3
        let (rs, exprs, rec) = solve_small("x^3-2", "(1,2,3);(1,2)", 3, 30);
        let level2: Vec<&BranchRecord> = rec.branches.iter().filter(|b| b.level == 2).collect();
        assert!(level2.iter().all(|b| b.best < b.delta && b.second > 2.0 * b.delta));
        verify(&exprs, &rs, 30).unwrap();
        assert!(verify(&exprs, &rs.permuted(&[1, 0, 2]), 30).is_err());
    }
}
