//! Permutation groups given by generators: closure, derived series,
//! composition series with prime-order cyclic quotients, coset
//! representatives in `S_n`, and monomial orbits.
//!
//! Points are 0-based internally and 1-based in every textual form.
//! Composition is `(a ∘ b)(j) = a(b(j))`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub const DEFAULT_ORDER_CAP: usize = 1_000_000;
pub const DEFAULT_DEGREE_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cycle syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),
    #[error("point {point} is outside 1..{degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("permutation degree {found} does not match group degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group order exceeds the cap of {0}")]
    OrderCapExceeded(usize),
    #[error("group is not solvable: derived series stalls at order {stalled_order}")]
    NotSolvable { stalled_order: usize },
    #[error("degree {degree} exceeds the cap of {cap} for S_n enumeration")]
    DegreeCapExceeded { degree: usize, cap: usize },
}

// ---------------------------------------------------------------------------
// Permutation

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From 0-based images; `None` unless `images` is a bijection.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation { images })
    }

    /// From 1-based images, e.g. `[2, 3, 4, 5, 1]` for `(1,2,3,4,5)`.
    pub fn from_one_based(images: &[usize]) -> Option<Self> {
        if images.contains(&0) {
            return None;
        }
        Self::from_images(images.iter().map(|&i| i - 1).collect())
    }

    pub fn one_based_images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, e: i64) -> Permutation {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Permutation::identity(self.degree());
        for _ in 0..e.unsigned_abs() {
            acc = base.compose(&acc);
        }
        acc
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.compose(self).compose(&g.inverse())
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

/// Parses disjoint-cycle notation such as `(1,4)(2,3)`. Empty text or `()`
/// is the identity.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, GroupError> {
    let bytes = text.as_bytes();
    let mut images: Vec<usize> = (0..degree).collect();
    let mut used = vec![false; degree];
    let mut pos = 0;
    let syntax = |position: usize, message: &str| GroupError::Syntax {
        position,
        message: message.to_string(),
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] != b'(' {
            return Err(syntax(pos, "expected '('"));
        }
        pos += 1;
        let mut cycle: Vec<usize> = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b')' && cycle.is_empty() {
                pos += 1;
                break;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(syntax(pos, "expected a point"));
            }
            let point: usize = std::str::from_utf8(&bytes[start..pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| syntax(start, "point too large"))?;
            if point == 0 || point > degree {
                return Err(GroupError::PointOutOfRange { point, degree });
            }
            if used[point - 1] {
                return Err(GroupError::RepeatedPoint(point));
            }
            used[point - 1] = true;
            cycle.push(point - 1);
            skip_ws(&mut pos);
            match bytes.get(pos) {
                Some(b',') => pos += 1,
                Some(b')') => {
                    pos += 1;
                    break;
                }
                _ => return Err(syntax(pos, "expected ',' or ')'")),
            }
        }
        for (i, &p) in cycle.iter().enumerate() {
            images[p] = cycle[(i + 1) % cycle.len()];
        }
    }
    Ok(Permutation { images })
}

/// Largest point mentioned in a list of cycle strings.
pub fn infer_degree(texts: &[&str]) -> usize {
    texts
        .iter()
        .flat_map(|t| {
            t.split(|c: char| !c.is_ascii_digit())
                .filter_map(|s| s.parse::<usize>().ok())
        })
        .max()
        .unwrap_or(1)
}

/// Splits `"(1,2,3,4,5);(1,4)(2,3)"` and parses each generator.
pub fn parse_generators(text: &str, degree: Option<usize>) -> Result<Vec<Permutation>, GroupError> {
    let parts: Vec<&str> = text.split(';').map(str::trim).collect();
    let n = degree.unwrap_or_else(|| infer_degree(&parts));
    parts.iter().map(|p| parse_cycles(p, n)).collect()
}

// ---------------------------------------------------------------------------
// PermutationGroup

/// A finite permutation group with all elements enumerated.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    members: HashSet<Permutation>,
}

impl PermutationGroup {
    pub fn closure(generators: &[Permutation], degree: usize) -> Result<Self, GroupError> {
        Self::closure_with_cap(generators, degree, DEFAULT_ORDER_CAP)
    }

    pub fn closure_with_cap(
        generators: &[Permutation],
        degree: usize,
        cap: usize,
    ) -> Result<Self, GroupError> {
        for g in generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let gens: Vec<Permutation> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        let id = Permutation::identity(degree);
        let mut members = HashSet::new();
        members.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for g in &gens {
                let next = g.compose(&e);
                if members.insert(next.clone()) {
                    if members.len() > cap {
                        return Err(GroupError::OrderCapExceeded(cap));
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut elements: Vec<Permutation> = members.iter().cloned().collect();
        elements.sort();
        Ok(PermutationGroup {
            degree,
            generators: generators.to_vec(),
            elements,
            members,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::closure(&[], degree).expect("trivial group")
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(cycle_perm(n, &[0, 1]));
            gens.push(cycle_perm(n, &(0..n).collect::<Vec<_>>()));
        }
        Self::closure(&gens, n).expect("S_n within cap")
    }

    pub fn alternating(n: usize) -> Self {
        let gens: Vec<Permutation> = (2..n).map(|k| cycle_perm(n, &[0, 1, k])).collect();
        Self::closure(&gens, n).expect("A_n within cap")
    }

    pub fn cyclic(n: usize) -> Self {
        Self::closure(&[cycle_perm(n, &(0..n).collect::<Vec<_>>())], n).expect("C_n")
    }

    /// Symmetries of the regular `n`-gon acting on its vertices.
    pub fn dihedral(n: usize) -> Self {
        let rot = cycle_perm(n, &(0..n).collect::<Vec<_>>());
        let refl = Permutation {
            images: (0..n).map(|i| (n - i) % n).collect(),
        };
        Self::closure(&[rot, refl], n).expect("D_n")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements in lexicographic order of their images.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.members.contains(p)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    /// Normal in `over` (assumed to contain `self`).
    pub fn is_normal_in(&self, over: &PermutationGroup) -> bool {
        over.generators.iter().all(|g| {
            self.generators
                .iter()
                .all(|h| self.contains(&h.conjugate_by(g)))
        })
    }

    /// Whether conjugation by `pi` maps the group onto itself.
    pub fn normalized_by(&self, pi: &Permutation) -> bool {
        self.generators.iter().all(|g| self.contains(&g.conjugate_by(pi)))
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        if self.degree == 0 {
            return true;
        }
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(p) = stack.pop() {
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Smallest `t ≥ 1` with `g^t` in `self`.
    pub fn relative_order(&self, g: &Permutation) -> usize {
        let mut p = g.clone();
        let mut t = 1;
        while !self.contains(&p) {
            p = g.compose(&p);
            t += 1;
        }
        t
    }

    /// Commutator subgroup, as the normal closure of generator commutators.
    pub fn derived_subgroup(&self) -> PermutationGroup {
        let mut gens: Vec<Permutation> = Vec::new();
        for a in &self.generators {
            for b in &self.generators {
                let c = a.inverse().compose(&b.inverse()).compose(a).compose(b);
                if !c.is_identity() && !gens.contains(&c) {
                    gens.push(c);
                }
            }
        }
        self.normal_closure(gens)
    }

    fn normal_closure(&self, mut gens: Vec<Permutation>) -> PermutationGroup {
        loop {
            let h = PermutationGroup::closure(&gens, self.degree).expect("subgroup of a capped group");
            let mut extra = None;
            'search: for x in &gens {
                for g in &self.generators {
                    let c = x.conjugate_by(g);
                    if !h.contains(&c) {
                        extra = Some(c);
                        break 'search;
                    }
                }
            }
            match extra {
                Some(c) => gens.push(c),
                None => return h,
            }
        }
    }

    /// `G ⊇ G' ⊇ G'' ⊇ …` until it stabilises.
    pub fn derived_series(&self) -> Vec<PermutationGroup> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().expect("nonempty");
            let next = last.derived_subgroup();
            if next.order() == last.order() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(|g| g.is_trivial())
    }
}

fn cycle_perm(n: usize, cycle: &[usize]) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    for (i, &p) in cycle.iter().enumerate() {
        images[p] = cycle[(i + 1) % cycle.len()];
    }
    Permutation { images }
}

pub fn closure(generators: &[Permutation], degree: usize) -> Result<PermutationGroup, GroupError> {
    PermutationGroup::closure(generators, degree)
}

// ---------------------------------------------------------------------------
// Composition series

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesStep {
    pub generator: Permutation,
    pub prime: u64,
}

/// `{e} = G_0 ⊲ G_1 ⊲ … ⊲ G_m = G` with `G_i = ⟨G_{i-1}, σ_i⟩` and
/// `[G_i : G_{i-1}] = p_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionSeries {
    pub degree: usize,
    pub steps: Vec<SeriesStep>,
}

impl CompositionSeries {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn primes(&self) -> Vec<u64> {
        self.steps.iter().map(|s| s.prime).collect()
    }

    pub fn radices(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.prime as usize).collect()
    }

    pub fn group_order(&self) -> usize {
        self.steps.iter().map(|s| s.prime as usize).product()
    }

    /// `G_0, G_1, …, G_m`.
    pub fn subgroups(&self) -> Vec<PermutationGroup> {
        let mut gens: Vec<Permutation> = Vec::new();
        let mut out = vec![PermutationGroup::trivial(self.degree)];
        for s in &self.steps {
            gens.push(s.generator.clone());
            out.push(PermutationGroup::closure(&gens, self.degree).expect("subgroup"));
        }
        out
    }

    /// Checks normality, indices and `G_m = G`; returns a description of the
    /// first violated condition.
    pub fn validate(&self, group: &PermutationGroup) -> Result<(), String> {
        let subs = self.subgroups();
        for (i, s) in self.steps.iter().enumerate() {
            let (lower, upper) = (&subs[i], &subs[i + 1]);
            if !crate::precision::is_prime(s.prime) {
                return Err(format!("step {} has non-prime index {}", i + 1, s.prime));
            }
            if upper.order() != lower.order() * s.prime as usize {
                return Err(format!("step {} has index {} not {}", i + 1, upper.order() / lower.order(), s.prime));
            }
            if !lower.contains(&s.generator.pow(s.prime as i64)) {
                return Err(format!("sigma_{}^{} not in G_{}", i + 1, s.prime, i));
            }
            for h in lower.elements() {
                if !lower.contains(&h.conjugate_by(&s.generator)) {
                    return Err(format!("G_{} not normal in G_{}", i, i + 1));
                }
            }
        }
        if self.group_order() != group.order() {
            return Err(format!("product of primes {} != |G| = {}", self.group_order(), group.order()));
        }
        if !group.elements().iter().all(|e| subs.last().expect("nonempty").contains(e)) {
            return Err("G_m differs from G".into());
        }
        Ok(())
    }
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..=n).find(|d| n % d == 0).expect("n >= 2")
}

/// Builds a composition series by refining the derived series. Within each
/// abelian layer the next step is taken from the first input generator not
/// yet captured, falling back to the lexicographically smallest such
/// element; a prime-order power of it is adjoined.
pub fn composition_series(group: &PermutationGroup) -> Result<CompositionSeries, GroupError> {
    let derived = group.derived_series();
    let bottom = derived.last().expect("nonempty");
    if !bottom.is_trivial() {
        return Err(GroupError::NotSolvable {
            stalled_order: bottom.order(),
        });
    }
    let n = group.degree();
    let mut steps = Vec::new();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut current = PermutationGroup::trivial(n);
    for layer in derived.iter().rev().skip(1) {
        while current.order() < layer.order() {
            let candidate = group
                .generators()
                .iter()
                .find(|g| layer.contains(g) && !current.contains(g))
                .or_else(|| layer.elements().iter().find(|e| !current.contains(e)))
                .expect("layer strictly larger")
                .clone();
            let o = current.relative_order(&candidate);
            let q = smallest_prime_factor(o);
            let sigma = candidate.pow((o / q) as i64);
            gens.push(sigma.clone());
            current = PermutationGroup::closure(&gens, n)?;
            steps.push(SeriesStep {
                generator: sigma,
                prime: q as u64,
            });
        }
    }
    Ok(CompositionSeries { degree: n, steps })
}

// ---------------------------------------------------------------------------
// S_n cosets and monomial orbits

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// One representative (the lexicographically smallest) of each coset `σG`
/// in `S_n`, so that `σθ` is well defined for `G`-invariant `θ`.
pub fn coset_representatives(group: &PermutationGroup) -> Result<Vec<Permutation>, GroupError> {
    coset_representatives_with_cap(group, DEFAULT_DEGREE_CAP)
}

pub fn coset_representatives_with_cap(
    group: &PermutationGroup,
    cap: usize,
) -> Result<Vec<Permutation>, GroupError> {
    let n = group.degree();
    if n > cap {
        return Err(GroupError::DegreeCapExceeded { degree: n, cap });
    }
    let mut covered: HashSet<Permutation> = HashSet::new();
    let mut reps = Vec::new();
    let mut images: Vec<usize> = (0..n).collect();
    loop {
        let sigma = Permutation {
            images: images.clone(),
        };
        if !covered.contains(&sigma) {
            for g in group.elements() {
                covered.insert(sigma.compose(g));
            }
            reps.push(sigma);
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    Ok(reps)
}

/// Orbit of `x_1^{k_1} … x_n^{k_n}` under `G`, where `σ` sends `x_j` to
/// `x_{σ(j)}`.
pub fn orbit_sum_invariant(group: &PermutationGroup, exponents: &[u32]) -> Vec<Vec<u32>> {
    let n = group.degree();
    let mut k: Vec<u32> = exponents.to_vec();
    k.resize(n, 0);
    let orbit: BTreeSet<Vec<u32>> = group
        .elements()
        .iter()
        .map(|g| {
            let mut out = vec![0; n];
            for j in 0..n {
                out[g.apply(j)] = k[j];
            }
            out
        })
        .collect();
    orbit.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Permutation {
        parse_cycles(text, n).unwrap()
    }

    #[test]
    fn cycle_parsing() {
        assert_eq!(p("(1,2,3,4,5)", 5).one_based_images(), vec![2, 3, 4, 5, 1]);
        assert_eq!(p("(1,4)(2,3)", 5).one_based_images(), vec![4, 3, 2, 1, 5]);
        assert!(p("", 5).is_identity());
        assert!(p("()", 5).is_identity());
        assert!(p(" ( 1 , 2 ) ", 3).one_based_images() == vec![2, 1, 3]);
        assert_eq!(parse_cycles("(1,2)(2,3)", 3), Err(GroupError::RepeatedPoint(2)));
        assert_eq!(
            parse_cycles("(1,6)", 5),
            Err(GroupError::PointOutOfRange { point: 6, degree: 5 })
        );
        assert!(matches!(parse_cycles("(1,2", 3), Err(GroupError::Syntax { .. })));
        assert!(matches!(parse_cycles("1,2)", 3), Err(GroupError::Syntax { .. })));
    }

    #[test]
    fn display_round_trip() {
        for t in ["(1,2,3,4,5)", "(1,4)(2,3)", "()"] {
            assert_eq!(p(t, 5).to_string(), t);
        }
    }

    #[test]
    fn composition_convention() {
        // σ2 σ1 sends 1 to 3 for the dihedral generators.
        let s1 = p("(1,2,3,4,5)", 5);
        let s2 = p("(1,4)(2,3)", 5);
        assert_eq!(s2.compose(&s1).apply(0), 2);
    }

    #[test]
    fn closure_orders() {
        let d5 = closure(&[p("(1,2,3,4,5)", 5), p("(1,4)(2,3)", 5)], 5).unwrap();
        assert_eq!(d5.order(), 10);
        assert_eq!(closure(&[Permutation::identity(4)], 4).unwrap().order(), 1);
        let s3 = closure(&[p("(1,2)", 3), p("(1,2,3)", 3)], 3).unwrap();
        // brute force: every permutation of three points appears
        let mut all = vec![0usize, 1, 2];
        let mut count = 0;
        loop {
            assert!(s3.contains(&Permutation::from_images(all.clone()).unwrap()));
            count += 1;
            if !next_permutation(&mut all) {
                break;
            }
        }
        assert_eq!((s3.order(), count), (6, 6));
        assert_eq!(
            PermutationGroup::closure_with_cap(&[p("(1,2)", 5), p("(1,2,3,4,5)", 5)], 5, 50).unwrap_err(),
            GroupError::OrderCapExceeded(50)
        );
    }

    #[test]
    fn d5_series_matches_generators() {
        let s1 = p("(1,2,3,4,5)", 5);
        let s2 = p("(1,4)(2,3)", 5);
        let g = closure(&[s1.clone(), s2.clone()], 5).unwrap();
        let cs = composition_series(&g).unwrap();
        assert_eq!(
            cs.steps,
            vec![
                SeriesStep { generator: s1, prime: 5 },
                SeriesStep { generator: s2, prime: 2 }
            ]
        );
        cs.validate(&g).unwrap();
        assert_eq!(composition_series(&g).unwrap(), cs);
    }

    #[test]
    fn small_series() {
        let c2 = closure(&[p("(1,2)", 2)], 2).unwrap();
        let cs = composition_series(&c2).unwrap();
        assert_eq!(cs.primes(), vec![2]);
        assert_eq!(cs.steps[0].generator, p("(1,2)", 2));

        let s3 = closure(&[p("(1,2)", 3), p("(1,2,3)", 3)], 3).unwrap();
        let cs = composition_series(&s3).unwrap();
        assert_eq!(cs.primes(), vec![3, 2]);
        assert_eq!(cs.steps[0].generator, p("(1,2,3)", 3));
        assert_eq!(cs.steps[1].generator, p("(1,2)", 3));
        cs.validate(&s3).unwrap();

        let trivial = PermutationGroup::trivial(1);
        assert!(composition_series(&trivial).unwrap().is_empty());
    }

    #[test]
    fn s3_series_checked_against_subgroup_lattice() {
        // Exhaustive: every subset of S3 closed under composition is a subgroup;
        // each G_i of the series must be one, with the required index.
        let s3 = PermutationGroup::symmetric(3);
        let elems = s3.elements().to_vec();
        let mut subgroups: Vec<BTreeSet<Permutation>> = Vec::new();
        for mask in 1u32..(1 << 6) {
            let set: BTreeSet<Permutation> = (0..6).filter(|i| mask >> i & 1 == 1).map(|i| elems[i].clone()).collect();
            let closed = set.iter().all(|a| set.iter().all(|b| set.contains(&a.compose(b))));
            if closed {
                subgroups.push(set);
            }
        }
        assert_eq!(subgroups.len(), 6);
        let cs = composition_series(&s3).unwrap();
        for (i, sub) in cs.subgroups().iter().enumerate() {
            let set: BTreeSet<Permutation> = sub.elements().iter().cloned().collect();
            assert!(subgroups.contains(&set), "G_{i} is not a subgroup");
        }
    }

    #[test]
    fn non_solvable_groups() {
        assert!(matches!(
            composition_series(&PermutationGroup::symmetric(5)),
            Err(GroupError::NotSolvable { stalled_order: 60 })
        ));
        assert!(matches!(
            composition_series(&PermutationGroup::alternating(5)),
            Err(GroupError::NotSolvable { stalled_order: 60 })
        ));
        assert!(PermutationGroup::symmetric(4).is_solvable());
    }

    #[test]
    fn cosets() {
        let d5 = PermutationGroup::dihedral(5);
        let reps = coset_representatives(&d5).unwrap();
        assert_eq!(reps.len(), 12);
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                assert!(!d5.contains(&a.inverse().compose(b)), "{a} and {b} share a coset");
            }
        }
        assert_eq!(coset_representatives(&PermutationGroup::symmetric(4)).unwrap().len(), 1);
        assert_eq!(coset_representatives(&PermutationGroup::trivial(3)).unwrap().len(), 6);
        assert!(matches!(
            coset_representatives(&PermutationGroup::trivial(9)),
            Err(GroupError::DegreeCapExceeded { degree: 9, cap: 8 })
        ));
    }

    #[test]
    fn orbits() {
        let s3 = PermutationGroup::symmetric(3);
        assert_eq!(orbit_sum_invariant(&s3, &[1, 0, 0]), vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        let d5 = PermutationGroup::dihedral(5);
        let orbit = orbit_sum_invariant(&d5, &[1, 2, 0, 0, 0]);
        // direct enumeration: images of (x1 x2^2) are x_a x_b^2 with b = a ± 1 mod 5
        let mut brute = BTreeSet::new();
        for a in 0..5 {
            for b in [(a + 1) % 5, (a + 4) % 5] {
                let mut v = vec![0; 5];
                v[a] = 1;
                v[b] = 2;
                brute.insert(v);
            }
        }
        assert_eq!(orbit, brute.into_iter().collect::<Vec<_>>());
        assert_eq!(10 % orbit.len(), 0);
        assert_eq!(orbit_sum_invariant(&d5, &[1; 5]), vec![vec![1; 5]]);
    }

    #[test]
    fn transitivity_and_normalizer() {
        assert!(PermutationGroup::dihedral(5).is_transitive());
        assert!(!closure(&[p("(1,2)", 3)], 3).unwrap().is_transitive());
        let d5 = closure(&[p("(1,2,3,4,5)", 5), p("(1,4)(2,3)", 5)], 5).unwrap();
        assert!(d5.normalized_by(&p("(2,4,5,3)", 5)));
        assert!(!d5.normalized_by(&p("(1,2)", 5)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn group_laws(images in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
                          other in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
                let a = Permutation::from_images(images).unwrap();
                let b = Permutation::from_images(other).unwrap();
                prop_assert!(a.compose(&a.inverse()).is_identity());
                prop_assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
                prop_assert!(a.pow(a.order() as i64).is_identity());
                prop_assert_eq!(parse_cycles(&a.to_string(), 6).unwrap(), a);
            }
        }
    }
}
