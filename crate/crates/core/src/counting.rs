//! Exact coefficient profiles of the independence and matching polynomials.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphUnion};

/// Components larger than this cannot be handled by the bitmask recursion.
pub const MAX_COMPONENT: usize = 64;
/// Memoise the branching recursion for components up to this size.
pub const MEMO_LIMIT: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProfileKind {
    #[serde(rename = "is")]
    IndependentSets,
    #[serde(rename = "match")]
    Matchings,
}

impl ProfileKind {
    pub fn token(self) -> &'static str {
        match self {
            ProfileKind::IndependentSets => "is",
            ProfileKind::Matchings => "match",
        }
    }
}

/// `coeffs[k]` is the number of independent sets (or matchings) of size `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientProfile {
    pub kind: ProfileKind,
    pub coeffs: Vec<BigUint>,
}

impl CoefficientProfile {
    /// The coefficient of `λ^k`, zero beyond the stored range.
    pub fn get(&self, k: usize) -> BigUint {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn evaluate(&self, lambda: &BigRational) -> BigRational {
        evaluate(&self.coeffs, lambda)
    }

    pub fn convolve(&self, other: &CoefficientProfile) -> CoefficientProfile {
        CoefficientProfile {
            kind: self.kind,
            coeffs: convolve(&self.coeffs, &other.coeffs, usize::MAX),
        }
    }
}

/// `Σ coeffs[k] λ^k`, exactly (Horner).
pub fn evaluate(coeffs: &[BigUint], lambda: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
        acc * lambda + BigRational::from_integer(BigInt::from(c.clone()))
    })
}

/// Product of two polynomials, truncated to degree `max_degree`.
pub fn convolve(a: &[BigUint], b: &[BigUint], max_degree: usize) -> Vec<BigUint> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = (a.len() + b.len() - 1).min(max_degree.saturating_add(1));
    let mut out = vec![BigUint::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn trim(mut v: Vec<BigUint>) -> Vec<BigUint> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn convolve_u128(a: &[u128], b: &[u128]) -> Vec<u128> {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_shifted(acc: &mut Vec<u128>, p: &[u128], shift: usize) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, 0);
    }
    for (i, &x) in p.iter().enumerate() {
        acc[i + shift] += x;
    }
}

/// Independence profile of a graph with at most 64 vertices, given by
/// neighbourhood masks.
struct IndependenceSolver<'a> {
    adj: &'a [u64],
    memo: Option<HashMap<u64, Vec<u128>>>,
}

impl IndependenceSolver<'_> {
    fn component(&self, start: usize, within: u64) -> u64 {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & within & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    fn solve(&mut self, set: u64) -> Vec<u128> {
        if set == 0 {
            return vec![1];
        }
        if set.count_ones() == 1 {
            return vec![1, 1];
        }
        let first = self.component(set.trailing_zeros() as usize, set);
        if first != set {
            let a = self.solve(first);
            let b = self.solve(set & !first);
            return convolve_u128(&a, &b);
        }
        if let Some(hit) = self.memo.as_ref().and_then(|m| m.get(&set)) {
            return hit.clone();
        }
        let mut best = usize::MAX;
        let mut best_deg = 0;
        let mut bits = set;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let deg = (self.adj[v] & set).count_ones();
            if best == usize::MAX || deg > best_deg {
                best = v;
                best_deg = deg;
            }
        }
        let v = best;
        let mut out = self.solve(set & !(1u64 << v));
        let closed = (self.adj[v] | 1u64 << v) & set;
        let with_v = self.solve(set & !closed);
        add_shifted(&mut out, &with_v, 1);
        if let Some(m) = self.memo.as_mut() {
            m.insert(set, out.clone());
        }
        out
    }
}

fn component_masks(g: &Graph, comp: &[usize]) -> Vec<u64> {
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in comp.iter().enumerate() {
        index[v] = i;
    }
    comp.iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .fold(0u64, |m, &u| m | 1u64 << index[u])
        })
        .collect()
}

fn independence_of_component(g: &Graph, comp: &[usize]) -> Result<Vec<u128>> {
    if comp.len() > MAX_COMPONENT {
        return Err(Error::TooLarge {
            vertices: comp.len(),
            limit: MAX_COMPONENT,
        });
    }
    let adj = component_masks(g, comp);
    let mut solver = IndependenceSolver {
        adj: &adj,
        memo: (comp.len() <= MEMO_LIMIT).then(HashMap::new),
    };
    let full = if comp.len() == 64 {
        u64::MAX
    } else {
        (1u64 << comp.len()) - 1
    };
    Ok(solver.solve(full))
}

fn to_big(v: Vec<u128>) -> Vec<BigUint> {
    trim(v.into_iter().map(BigUint::from).collect())
}

/// Exact independence profile `(i_0, i_1, …)`. Components are handled
/// separately and convolved; each must have at most 64 vertices.
pub fn independence_profile(g: &Graph) -> Result<CoefficientProfile> {
    let mut coeffs = vec![BigUint::one()];
    for comp in g.components() {
        let p = to_big(independence_of_component(g, &comp)?);
        coeffs = convolve(&coeffs, &p, usize::MAX);
    }
    Ok(CoefficientProfile {
        kind: ProfileKind::IndependentSets,
        coeffs,
    })
}

/// Exact matching profile `(m_0, m_1, …)`, computed as the independence
/// profile of the line graph.
pub fn matching_profile(g: &Graph) -> Result<CoefficientProfile> {
    let mut p = independence_profile(&g.line_graph())?;
    p.kind = ProfileKind::Matchings;
    Ok(p)
}

/// Matching profile by direct branching on the lowest uncovered vertex:
/// either it stays unmatched or it is matched to one of its neighbours.
/// Independent of the line-graph route.
pub fn matching_profile_direct(g: &Graph) -> Result<CoefficientProfile> {
    fn go(adj: &[u64], set: u64, memo: &mut HashMap<u64, Vec<u128>>) -> Vec<u128> {
        if set == 0 {
            return vec![1];
        }
        if let Some(hit) = memo.get(&set) {
            return hit.clone();
        }
        let v = set.trailing_zeros() as usize;
        let rest = set & !(1u64 << v);
        let mut out = go(adj, rest, memo);
        let mut nbrs = adj[v] & rest;
        while nbrs != 0 {
            let u = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            let sub = go(adj, rest & !(1u64 << u), memo);
            add_shifted(&mut out, &sub, 1);
        }
        memo.insert(set, out.clone());
        out
    }
    let mut coeffs = vec![BigUint::one()];
    for comp in g.components() {
        if comp.len() > MAX_COMPONENT {
            return Err(Error::TooLarge {
                vertices: comp.len(),
                limit: MAX_COMPONENT,
            });
        }
        let adj = component_masks(g, &comp);
        let full = if comp.len() == 64 {
            u64::MAX
        } else {
            (1u64 << comp.len()) - 1
        };
        let p = to_big(go(&adj, full, &mut HashMap::new()));
        coeffs = convolve(&coeffs, &p, usize::MAX);
    }
    Ok(CoefficientProfile {
        kind: ProfileKind::Matchings,
        coeffs,
    })
}

pub fn profile(g: &Graph, kind: ProfileKind) -> Result<CoefficientProfile> {
    match kind {
        ProfileKind::IndependentSets => independence_profile(g),
        ProfileKind::Matchings => matching_profile(g),
    }
}

/// Independence profile by enumerating all vertex subsets. Exponential;
/// exposed as a cross-check for small graphs.
pub fn independence_profile_brute(g: &Graph) -> Result<CoefficientProfile> {
    if g.n() > 24 {
        return Err(Error::TooLarge {
            vertices: g.n(),
            limit: 24,
        });
    }
    let edges: Vec<_> = g.edges().collect();
    let mut counts = vec![0u64; g.n() + 1];
    for s in 0u32..(1u32 << g.n()) {
        if edges.iter().all(|&(u, v)| s >> u & 1 == 0 || s >> v & 1 == 0) {
            counts[s.count_ones() as usize] += 1;
        }
    }
    Ok(CoefficientProfile {
        kind: ProfileKind::IndependentSets,
        coeffs: trim(counts.into_iter().map(BigUint::from).collect()),
    })
}

/// `P^m` truncated to degree `max_degree`, for `P(0) = 1`, via
/// `P^m = Σ_j C(m,j) (P−1)^j`; only `j <= max_degree` contribute.
pub fn power_truncated(p: &[BigUint], m: &BigUint, max_degree: usize) -> Vec<BigUint> {
    debug_assert!(p.first().is_some_and(One::is_one));
    let mut q: Vec<BigUint> = p.iter().take(max_degree + 1).cloned().collect();
    q[0] = BigUint::zero();
    let mut out = vec![BigUint::zero(); max_degree + 1];
    out[0] = BigUint::one();
    let mut q_pow = vec![BigUint::one()];
    let mut binom = BigUint::one();
    for j in 1..=max_degree {
        if m < &BigUint::from(j) {
            break;
        }
        q_pow = convolve(&q_pow, &q, max_degree);
        binom = binom * (m - BigUint::from(j - 1)) / BigUint::from(j);
        for (i, c) in q_pow.iter().enumerate() {
            out[i] += &binom * c;
        }
    }
    trim(out)
}

/// Profile of a union of component classes, truncated to degree `max_degree`.
pub fn union_profile(u: &GraphUnion, kind: ProfileKind, max_degree: usize) -> Result<CoefficientProfile> {
    let mut coeffs = vec![BigUint::one()];
    for (g, m) in u.parts() {
        let p = profile(g, kind)?;
        let pm = power_truncated(&p.coeffs, m, max_degree);
        coeffs = convolve(&coeffs, &pm, max_degree);
    }
    Ok(CoefficientProfile { kind, coeffs })
}

/// Bounds on `i_t(G) / i_{t+1}(G)` for a `d`-regular graph on `n` vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioBounds {
    pub t: usize,
    /// `(t+1)/n`
    pub lower: BigRational,
    /// `(t+1)/(n−t)`, never below `lower`.
    pub lower_sharp: BigRational,
    /// `(t+1)/(n−(d+1)t)`
    pub upper: BigRational,
}

impl RatioBounds {
    pub fn contains(&self, ratio: &BigRational) -> bool {
        &self.lower_sharp <= ratio && ratio <= &self.upper
    }
}

/// Every independent set of size `t+1` arises from at least `n−(d+1)t` and at
/// most `n−t` extensions of a size-`t` set, counted with multiplicity `t+1`.
pub fn ratio_bounds(n: usize, d: usize, t: usize) -> Result<RatioBounds> {
    let blocked = (d + 1)
        .checked_mul(t)
        .ok_or_else(|| Error::Precondition("(d+1)t overflows".into()))?;
    if n <= blocked {
        return Err(Error::Precondition(format!(
            "ratio bound is vacuous: n={n} <= (d+1)t={blocked}"
        )));
    }
    let num = BigInt::from(t + 1);
    Ok(RatioBounds {
        t,
        lower: BigRational::new(num.clone(), BigInt::from(n)),
        lower_sharp: BigRational::new(num.clone(), BigInt::from(n - t)),
        upper: BigRational::new(num, BigInt::from(n - blocked)),
    })
}

/// `i_k` as `u128` when it fits, for cheap comparisons in tests and reports.
pub fn coeff_u128(p: &CoefficientProfile, k: usize) -> Option<u128> {
    p.get(k).to_u128()
}
