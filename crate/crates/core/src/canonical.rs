//! The polymer model for independent sets of a fixed size.
//!
//! For a `d`-regular graph on `n` vertices, `i_k = (n^k / k!) Ξ_k` where `Ξ_k`
//! is the partition function of a polymer model on `[k]`: polymers are subsets
//! of size at least two, compatible when disjoint, and the weight of a size-`j`
//! polymer is `w_j = Σ_F (−1)^{|E(F)|} t(F, G°)` over connected graphs `F` on
//! `j` labelled vertices. `log Ξ_k` is a sum over clusters (ordered tuples of
//! polymers with connected incompatibility graph), which this module groups
//! into finitely many types.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::catalog::{factorial, ursell, SmallGraph, SmallGraphCatalog};
use crate::census::{hom_count_union, tree_density};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphUnion};
use crate::interval::{e_interval, e_pow, format_down, format_up, round_up, round_up_relative, CertifiedInterval};

/// Largest excess the cluster-type enumeration supports.
pub const MAX_EXCESS: usize = 6;

/// The weight of a polymer of size `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolymerWeight {
    pub j: usize,
    pub value: BigRational,
}

/// Polymer weights `w_1 = 1, w_2, …, w_{j_max}` of one graph.
#[derive(Clone, Debug)]
pub struct PolymerWeights {
    pub n: BigUint,
    pub d: usize,
    /// Index `j`; entry 0 is unused.
    pub weights: Vec<BigRational>,
    /// Contribution of spanning trees to each weight.
    pub tree_parts: Vec<BigRational>,
}

impl PolymerWeights {
    /// Weights up to size `j_max` from the catalogue of connected graphs.
    pub fn compute(catalog: &SmallGraphCatalog, u: &GraphUnion, j_max: usize) -> Result<Self> {
        let d = u
            .regular_degree()
            .ok_or_else(|| Error::Precondition("polymer weights need a regular graph".into()))?;
        let n = u.vertex_count();
        if n.is_zero() {
            return Err(Error::Precondition("empty graph".into()));
        }
        if j_max > catalog.j_max() {
            return Err(Error::Unsupported(format!(
                "polymer size {j_max} exceeds the catalogue limit {}",
                catalog.j_max()
            )));
        }
        let nn = BigInt::from(n.clone());
        let mut weights = vec![BigRational::zero(), BigRational::one()];
        let mut tree_parts = vec![BigRational::zero(), BigRational::one()];
        for j in 2..=j_max {
            let level = catalog.level(j).expect("level within j_max");
            let per_class = crate::par::map(&level.classes, |c| {
                let hom = hom_count_union(&c.representative, u, true);
                BigInt::from(hom) * BigInt::from(c.labeled_count)
            });
            let denom = Pow::pow(&nn, j as u32);
            let mut total = BigInt::zero();
            let mut trees = BigInt::zero();
            for (c, value) in level.classes.iter().zip(per_class) {
                let signed = if c.edge_count % 2 == 0 { value } else { -value };
                if c.is_tree {
                    trees += &signed;
                }
                total += signed;
            }
            let tree_part = BigRational::new(trees, denom.clone());
            let expected = tree_density(&nn, d, j)
                * BigRational::from_integer(Pow::pow(BigInt::from(j), (j - 2) as u32))
                * if j % 2 == 0 { -BigRational::one() } else { BigRational::one() };
            if tree_part != expected {
                return Err(Error::Invariant(format!(
                    "tree part of w_{j} is {tree_part}, expected {expected}"
                )));
            }
            weights.push(BigRational::new(total, denom));
            tree_parts.push(tree_part);
        }
        Ok(PolymerWeights {
            n,
            d,
            weights,
            tree_parts,
        })
    }

    pub fn for_graph(catalog: &SmallGraphCatalog, g: &Graph, j_max: usize) -> Result<Self> {
        Self::compute(catalog, &GraphUnion::from_graph(g), j_max)
    }

    pub fn j_max(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn get(&self, j: usize) -> Option<PolymerWeight> {
        self.weights.get(j).filter(|_| j >= 1).map(|v| PolymerWeight {
            j,
            value: v.clone(),
        })
    }

    pub fn weight(&self, j: usize) -> &BigRational {
        &self.weights[j]
    }

    /// `w_j` minus its spanning-tree contribution.
    pub fn non_tree(&self, j: usize) -> BigRational {
        &self.weights[j] - &self.tree_parts[j]
    }

    /// `j^{j−2} ((d+1)/n)^{j−1}`, the Penrose bound on `|w_j|`.
    pub fn penrose_bound(&self, j: usize) -> BigRational {
        penrose_bound(&self.n, self.d, j)
    }
}

pub fn penrose_bound(n: &BigUint, d: usize, j: usize) -> BigRational {
    let cayley = if j >= 2 {
        Pow::pow(BigInt::from(j), (j - 2) as u32)
    } else {
        BigInt::one()
    };
    tree_density(&BigInt::from(n.clone()), d, j) * BigRational::from_integer(cayley)
}

/// Coefficients of `log P(x)` through degree `max_degree`, for a power
/// series with `P(0) = 1`.
pub fn log_series(p: &[BigRational], max_degree: usize) -> Vec<BigRational> {
    let coeff = |i: usize| p.get(i).cloned().unwrap_or_else(BigRational::zero);
    assert!(coeff(0).is_one(), "log_series needs P(0) = 1");
    let mut l = vec![BigRational::zero(); max_degree + 1];
    for m in 1..=max_degree {
        // m l_m = m p_m − Σ_{i<m} i l_i p_{m−i}
        let mut acc = coeff(m) * BigRational::from_integer(m.into());
        for (i, li) in l.iter().enumerate().take(m).skip(1) {
            acc -= li * coeff(m - i) * BigRational::from_integer(i.into());
        }
        l[m] = acc / BigRational::from_integer(m.into());
    }
    l
}

/// Weights from the independence profile alone: `w_j = (j!/n^j) [x^j] log Z_G(x)`.
/// Independent of the catalogue; used as a cross-check.
pub fn weights_from_profile(profile: &[BigUint], n: usize, j_max: usize) -> Vec<BigRational> {
    let p: Vec<BigRational> = profile
        .iter()
        .map(|c| BigRational::from_integer(BigInt::from(c.clone())))
        .collect();
    let l = log_series(&p, j_max);
    let nn = BigInt::from(n);
    (0..=j_max)
        .map(|j| {
            if j == 0 {
                BigRational::zero()
            } else {
                &l[j] * BigRational::new(factorial(j), Pow::pow(&nn, j as u32))
            }
        })
        .collect()
}

/// Integer partitions of `k` as nonincreasing part lists.
pub fn integer_partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Number of set partitions of `[k]` with the given block sizes.
fn partition_multiplicity(parts: &[usize]) -> BigInt {
    let k: usize = parts.iter().sum();
    let mut denom = BigInt::one();
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in parts {
        denom *= factorial(p);
        *counts.entry(p).or_default() += 1;
    }
    for &m in counts.values() {
        denom *= factorial(m);
    }
    factorial(k) / denom
}

/// `Ξ_k = Σ_{set partitions of [k]} Π_B w_{|B|}`, with `w_1 = 1`.
pub fn exact_xi(weights: &PolymerWeights, k: usize) -> Result<BigRational> {
    if k > weights.j_max() && k > 1 {
        return Err(Error::Unsupported(format!(
            "exact Ξ_{k} needs weights up to size {k}, have {}",
            weights.j_max()
        )));
    }
    Ok(xi_from_weights(&weights.weights, k))
}

fn xi_from_weights(w: &[BigRational], k: usize) -> BigRational {
    integer_partitions(k)
        .into_iter()
        .map(|parts| {
            let mult = BigRational::from_integer(partition_multiplicity(&parts));
            parts.iter().fold(mult, |acc, &p| acc * &w[p])
        })
        .sum()
}

/// `i_k = (n^k / k!) Ξ_k`.
pub fn ik_from_xi(xi: &BigRational, n: &BigUint, k: usize) -> BigRational {
    xi * BigRational::new(Pow::pow(BigInt::from(n.clone()), k as u32), factorial(k))
}

/// One cluster type: `t` ordered polymer slots over a canonical support
/// `{0..s−1}`, described by the multiset of element signatures (the bitmask of
/// slots containing each support element).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterType {
    /// Sorted signature multiset.
    pub signatures: Vec<u16>,
    /// `|S_i|` for each slot `i`.
    pub sizes: Vec<usize>,
    pub ursell: BigRational,
    /// `Σ |S_i| − t`.
    pub excess: usize,
    /// `Π mult!` over repeated signatures.
    pub symmetry: u64,
}

impl ClusterType {
    pub fn slots(&self) -> usize {
        self.sizes.len()
    }

    pub fn support(&self) -> usize {
        self.signatures.len()
    }

    /// The polymers as subsets of the support, slot by slot.
    pub fn polymers(&self) -> Vec<Vec<usize>> {
        (0..self.slots())
            .map(|i| {
                (0..self.support())
                    .filter(|&x| self.signatures[x] >> i & 1 == 1)
                    .collect()
            })
            .collect()
    }

    /// The incompatibility graph on the slots.
    pub fn incompatibility_graph(&self) -> SmallGraph {
        incompatibility(&self.signatures, self.slots())
    }
}

fn incompatibility(signatures: &[u16], t: usize) -> SmallGraph {
    let mut edges = Vec::new();
    for a in 0..t {
        for b in a + 1..t {
            if signatures.iter().any(|s| s >> a & 1 == 1 && s >> b & 1 == 1) {
                edges.push((a, b));
            }
        }
    }
    SmallGraph::from_edges(t, &edges)
}

/// `(k)_s / Π mult!`: the number of clusters over `[k]` of this type.
pub fn embedding_count(ty: &ClusterType, k: usize) -> BigUint {
    let s = ty.support();
    if k < s {
        return BigUint::zero();
    }
    let falling: BigUint = (0..s).map(|i| BigUint::from(k - i)).product();
    falling / BigUint::from(ty.symmetry)
}

/// All cluster types with excess at most `max_excess`.
pub fn enumerate_cluster_types(max_excess: usize) -> Result<Vec<ClusterType>> {
    if max_excess > MAX_EXCESS {
        return Err(Error::Unsupported(format!(
            "cluster excess {max_excess} beyond the supported {MAX_EXCESS}"
        )));
    }
    let per_t = crate::par::map_range(max_excess, |i| types_with_slots(i + 1, max_excess));
    Ok(per_t.into_iter().flatten().collect())
}

/// Types with exactly `t` slots. Every slot has size at least 2, so
/// `Σ|S_i| <= max_excess + t` and, by connectivity, the support has at most
/// `excess + 1` elements.
fn types_with_slots(t: usize, max_excess: usize) -> Vec<ClusterType> {
    struct Walk {
        t: usize,
        budget: usize,
        max_excess: usize,
        cover: Vec<usize>,
        sigs: Vec<u16>,
        out: Vec<ClusterType>,
    }
    impl Walk {
        fn deficit(&self) -> usize {
            self.cover.iter().map(|&c| 2usize.saturating_sub(c)).sum()
        }
        fn used(&self) -> usize {
            self.cover.iter().sum()
        }
        fn record(&mut self) {
            if self.deficit() != 0 {
                return;
            }
            let total = self.used();
            let excess = total - self.t;
            if self.sigs.len() > excess + 1 {
                return;
            }
            let graph = incompatibility(&self.sigs, self.t);
            if !graph.is_connected() {
                return;
            }
            let mut symmetry = 1u64;
            let mut run = 1u64;
            for w in self.sigs.windows(2) {
                if w[0] == w[1] {
                    run += 1;
                    symmetry *= run;
                } else {
                    run = 1;
                }
            }
            self.out.push(ClusterType {
                signatures: self.sigs.clone(),
                sizes: self.cover.clone(),
                ursell: ursell(&graph),
                excess,
                symmetry,
            });
        }
        fn go(&mut self, min_sig: u16) {
            self.record();
            let used = self.used();
            // A new element raises the support bound check; stop once no
            // completion can satisfy support <= excess + 1.
            if self.sigs.len() + 1 > self.max_excess + 1 {
                return;
            }
            let full = (1u16 << self.t) - 1;
            for sig in min_sig..=full {
                let pop = sig.count_ones() as usize;
                if used + pop > self.budget {
                    continue;
                }
                let before = self.deficit();
                let reduces = (0..self.t)
                    .filter(|&i| sig >> i & 1 == 1 && self.cover[i] < 2)
                    .count();
                // remaining budget must still cover the remaining deficit
                if used + pop + (before - reduces) > self.budget {
                    continue;
                }
                for i in 0..self.t {
                    if sig >> i & 1 == 1 {
                        self.cover[i] += 1;
                    }
                }
                self.sigs.push(sig);
                self.go(sig);
                self.sigs.pop();
                for i in 0..self.t {
                    if sig >> i & 1 == 1 {
                        self.cover[i] -= 1;
                    }
                }
            }
        }
    }
    if 2 * t > max_excess + t {
        return Vec::new();
    }
    let mut walk = Walk {
        t,
        budget: max_excess + t,
        max_excess,
        cover: vec![0; t],
        sigs: Vec::new(),
        out: Vec::new(),
    };
    walk.go(1);
    walk.out
}

/// Cluster types aggregated by support size and polymer-size multiset.
#[derive(Clone, Debug)]
pub struct ClusterGroup {
    pub support: usize,
    /// Polymer sizes, sorted.
    pub sizes: Vec<usize>,
    pub excess: usize,
    /// `Σ ursell / symmetry` over the member types.
    pub coefficient: BigRational,
}

#[derive(Clone, Debug)]
pub struct ClusterTable {
    pub max_excess: usize,
    pub groups: Vec<ClusterGroup>,
}

impl ClusterTable {
    pub fn new(max_excess: usize) -> Result<Self> {
        let types = enumerate_cluster_types(max_excess)?;
        Ok(Self::from_types(max_excess, &types))
    }

    pub fn from_types(max_excess: usize, types: &[ClusterType]) -> Self {
        let mut map: BTreeMap<(usize, usize, Vec<usize>), BigRational> = BTreeMap::new();
        for ty in types {
            let mut sizes = ty.sizes.clone();
            sizes.sort_unstable();
            let entry = map
                .entry((ty.excess, ty.support(), sizes))
                .or_insert_with(BigRational::zero);
            *entry += &ty.ursell / BigRational::from_integer(ty.symmetry.into());
        }
        let groups = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((excess, support, sizes), coefficient)| ClusterGroup {
                support,
                sizes,
                excess,
                coefficient,
            })
            .collect();
        ClusterTable { max_excess, groups }
    }

    /// Largest polymer size appearing in the table.
    pub fn max_polymer(&self) -> usize {
        self.max_excess + 1
    }

    /// `Σ_{clusters, excess ≤ max} φ Π w` split by excess, indices `0..=max`.
    pub fn sums_by_excess(&self, w: &[BigRational], k: usize, max: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); max + 1];
        for g in self.groups.iter().filter(|g| g.excess <= max) {
            out[g.excess] += group_term(g, k, |j| w[j].clone());
        }
        out
    }

    /// `Σ_{clusters with excess ≤ t−1} φ(I(Γ)) Π w(S)`.
    pub fn truncated_sum(&self, w: &[BigRational], k: usize, t: usize) -> BigRational {
        if t == 0 {
            return BigRational::zero();
        }
        self.sums_by_excess(w, k, t - 1).into_iter().sum()
    }
}

fn falling(k: usize, s: usize) -> BigInt {
    if k < s {
        return BigInt::zero();
    }
    (0..s).map(|i| BigInt::from(k - i)).product()
}

fn group_term(g: &ClusterGroup, k: usize, w: impl Fn(usize) -> BigRational) -> BigRational {
    let f = falling(k, g.support);
    if f.is_zero() {
        return BigRational::zero();
    }
    let product = g.sizes.iter().fold(BigRational::one(), |acc, &j| acc * w(j));
    BigRational::from_integer(f) * &g.coefficient * product
}

/// Coefficients of `log Ξ_k(z)` in the excess variable `z`, where
/// `Ξ_k(z) = Σ_π Π_B w_{|B|} z^{|B|−1}`. Independent of the cluster tables.
pub fn log_xi_by_excess(w: &[BigRational], k: usize, max: usize) -> Vec<BigRational> {
    let mut poly = vec![BigRational::zero(); max + 1];
    for parts in integer_partitions(k) {
        let z: usize = parts.iter().map(|p| p - 1).sum();
        if z > max {
            continue;
        }
        let mult = BigRational::from_integer(partition_multiplicity(&parts));
        poly[z] += parts.iter().fold(mult, |acc, &p| acc * &w[p]);
    }
    log_series(&poly, max)
}

/// Kotecký–Preiss check for `log Ξ_k` on `d`-regular graphs with `n` vertices.
#[derive(Clone, Debug)]
pub struct KPReport {
    pub k: usize,
    pub n: BigUint,
    pub d: usize,
    /// Enclosure of `γ = (d+1) e^5 k / n`.
    pub gamma: CertifiedInterval,
    /// Upper bound on `Σ_{S∋v} |w(S)| e^{(K+1)|S|−K}` from the weight bound.
    pub kp_sum: BigRational,
    pub satisfied: bool,
    /// `1 − γ_upper`.
    pub margin: BigRational,
}

/// Computes `γ` with an upper bound on `e^5` and re-evaluates the
/// Kotecký–Preiss sum `Σ_{j=2}^k C(k, j−1) j^{j−2} e^{5−4j} k^{−(j−1)}`.
pub fn kp_check(n: &BigUint, d: usize, k: usize, bits: u32) -> KPReport {
    let scale = BigRational::new(BigInt::from((d + 1) * k), BigInt::from(n.clone()));
    let gamma = e_pow(5, bits).scale(&scale);
    let margin = BigRational::one() - &gamma.upper;
    let kp_sum = kp_sum_upper(k, bits);
    let satisfied = !margin.is_negative() && kp_sum <= BigRational::one();
    KPReport {
        k,
        n: n.clone(),
        d,
        gamma,
        kp_sum,
        satisfied,
        margin,
    }
}

/// Terms past this index are bounded by the geometric tail `e^{5−3j}`.
const KP_EXACT_TERMS: usize = 40;

fn kp_sum_upper(k: usize, bits: u32) -> BigRational {
    let e_lo = e_interval(bits).lower;
    let kk = BigInt::from(k);
    let mut sum = BigRational::zero();
    let mut binom = BigInt::from(k); // C(k, 1)
    for j in 2..=k.min(KP_EXACT_TERMS) {
        let cayley = Pow::pow(BigInt::from(j), (j - 2) as u32);
        // e^{5−4j} ≤ 1 / e_lo^{4j−5}
        let e_part = Pow::pow(&e_lo, (4 * j - 5) as u32).recip();
        let term = BigRational::new(&binom * cayley, Pow::pow(&kk, (j - 1) as u32)) * e_part;
        sum += round_up(&term, bits);
        binom = binom * BigInt::from(k - (j - 1)) / BigInt::from(j);
    }
    if k > KP_EXACT_TERMS {
        // C(k,j−1)/k^{j−1} ≤ 1/(j−1)! and j^{j−2}/(j−1)! ≤ e^j, so each term is
        // at most e^{5−3j}; bound the rest by 2^{-100}.
        sum += BigRational::new(BigInt::one(), BigInt::one() << 100usize);
    }
    sum
}

/// The truncated cluster expansion of `log Ξ_k` with its certified tail.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub k: usize,
    pub t: usize,
    /// Sum over clusters with excess at most `t − 1`.
    pub value: BigRational,
    /// Upper bound on `k γ^t`.
    pub tail: BigRational,
    pub interval: CertifiedInterval,
    pub kp: Option<KPReport>,
}

/// `[T − kγ^t, T + kγ^t]` around the truncation `T`, which contains
/// `log Ξ_k` whenever the Kotecký–Preiss check passes.
pub fn truncated_log_xi(
    weights: &PolymerWeights,
    table: &ClusterTable,
    k: usize,
    t: usize,
    bits: u32,
) -> Result<Truncation> {
    if k <= 1 {
        return Ok(Truncation {
            k,
            t,
            value: BigRational::zero(),
            tail: BigRational::zero(),
            interval: CertifiedInterval::zero(),
            kp: None,
        });
    }
    check_truncation_order(weights, table, t)?;
    let kp = kp_check(&weights.n, weights.d, k, bits);
    if !kp.satisfied {
        return Err(divergent(&kp));
    }
    let value = table.truncated_sum(&weights.weights, k, t);
    let tail = tail_bound(&kp, k, t, bits);
    let interval = CertifiedInterval::around(&value, &tail);
    Ok(Truncation {
        k,
        t,
        value,
        tail,
        interval,
        kp: Some(kp),
    })
}

fn check_truncation_order(weights: &PolymerWeights, table: &ClusterTable, t: usize) -> Result<()> {
    if t == 0 || t > table.max_excess + 1 {
        return Err(Error::Unsupported(format!(
            "truncation order {t} needs cluster types of excess {}, table has {}",
            t.saturating_sub(1),
            table.max_excess
        )));
    }
    if t > weights.j_max() {
        return Err(Error::Unsupported(format!(
            "truncation order {t} needs polymer weights up to size {t}, have {}",
            weights.j_max()
        )));
    }
    Ok(())
}

fn divergent(kp: &KPReport) -> Error {
    Error::DivergentRegime(format!(
        "k={} exceeds e^-5 n/(d+1) for n={}, d={} (gamma <= {})",
        kp.k,
        kp.n,
        kp.d,
        format_up(&kp.gamma.upper, 6)
    ))
}

fn tail_bound(kp: &KPReport, k: usize, t: usize, bits: u32) -> BigRational {
    round_up_relative(
        &(BigRational::from_integer(k.into()) * Pow::pow(&kp.gamma.upper, t as u32)),
        bits,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "CERTIFIED_STRICT")]
    CertifiedStrict,
    #[serde(rename = "CERTIFIED_NONSTRICT")]
    CertifiedNonstrict,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
    #[serde(rename = "REFUTED")]
    Refuted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedStrict => "CERTIFIED_STRICT",
            Verdict::CertifiedNonstrict => "CERTIFIED_NONSTRICT",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Refuted => "REFUTED",
        })
    }
}

/// A certified bound on `log(i_k(H) / i_k(G))`.
#[derive(Clone, Debug)]
pub struct DominanceCertificate {
    pub k: usize,
    pub t: usize,
    pub verdict: Verdict,
    /// `T_H − T_G`.
    pub difference: BigRational,
    /// Enclosure of `log(i_k(H)/i_k(G))`: `difference ∓ 2kγ^t`.
    pub bound: CertifiedInterval,
    pub gamma: Option<CertifiedInterval>,
    /// Upper bound on `kγ^t` for one graph.
    pub tail: BigRational,
    /// Which argument produced the verdict.
    pub provenance: &'static str,
}

impl DominanceCertificate {
    pub fn lower_bound_text(&self) -> String {
        format_down(&self.bound.lower, 20)
    }
}

/// Compares `log Ξ_k(H)` against `log Ξ_k(G)` through their truncations.
///
/// `isomorphic` marks inputs known to be isomorphic, which are certified equal
/// without any expansion.
pub fn dominance_from_weights(
    wg: &PolymerWeights,
    wh: &PolymerWeights,
    table: &ClusterTable,
    k: usize,
    t: usize,
    isomorphic: bool,
    bits: u32,
) -> Result<DominanceCertificate> {
    if wg.n != wh.n || wg.d != wh.d {
        return Err(Error::Mismatch(format!(
            "graphs differ in shape: n={} d={} vs n={} d={}",
            wg.n, wg.d, wh.n, wh.d
        )));
    }
    let exact = |provenance| DominanceCertificate {
        k,
        t,
        verdict: Verdict::CertifiedNonstrict,
        difference: BigRational::zero(),
        bound: CertifiedInterval::zero(),
        gamma: None,
        tail: BigRational::zero(),
        provenance,
    };
    if isomorphic {
        return Ok(exact("isomorphic inputs"));
    }
    if k <= 1 {
        // i_0 = 1 and i_1 = n for every graph.
        return Ok(exact("k <= 1"));
    }
    check_truncation_order(wg, table, t)?;
    check_truncation_order(wh, table, t)?;
    for j in 1..=t {
        if wg.tree_parts[j] != wh.tree_parts[j] {
            return Err(Error::Invariant(format!("tree parts of w_{j} differ")));
        }
    }
    let kp = kp_check(&wg.n, wg.d, k, bits);
    if !kp.satisfied {
        return Err(divergent(&kp));
    }
    let mut difference = BigRational::zero();
    for g in table.groups.iter().filter(|g| g.excess < t) {
        let term_h = group_term(g, k, |j| wh.weights[j].clone());
        let term_g = group_term(g, k, |j| wg.weights[j].clone());
        let delta = term_h - term_g;
        // Size-2 weights are pure tree terms, so such groups cancel exactly.
        if g.sizes.iter().all(|&j| j <= 2) && !delta.is_zero() {
            return Err(Error::Invariant(format!(
                "tree-only cluster group {:?} did not cancel",
                g.sizes
            )));
        }
        difference += delta;
    }
    let tail = tail_bound(&kp, k, t, bits);
    let slack = &tail * BigRational::from_integer(2.into());
    let bound = CertifiedInterval::around(&difference, &slack);
    let verdict = if bound.lower.is_positive() {
        Verdict::CertifiedStrict
    } else if bound.upper.is_negative() {
        Verdict::Refuted
    } else {
        Verdict::Inconclusive
    };
    Ok(DominanceCertificate {
        k,
        t,
        verdict,
        difference,
        bound,
        gamma: Some(kp.gamma),
        tail,
        provenance: "truncated cluster expansion",
    })
}

/// Certificate for `i_k(H) >= i_k(G)` via the cluster expansion.
pub fn dominance_certificate(
    catalog: &SmallGraphCatalog,
    g: &GraphUnion,
    h: &GraphUnion,
    table: &ClusterTable,
    k: usize,
    t: usize,
    bits: u32,
) -> Result<DominanceCertificate> {
    if g.vertex_count() != h.vertex_count() || g.regular_degree() != h.regular_degree() {
        return Err(Error::Mismatch("graphs differ in vertex count or degree".into()));
    }
    let wg = PolymerWeights::compute(catalog, g, t)?;
    let wh = PolymerWeights::compute(catalog, h, t)?;
    dominance_from_weights(&wg, &wh, table, k, t, g.is_isomorphic(h), bits)
}

/// Exact value of a rational as `f64`, for diagnostics only.
pub fn approx(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::connected_signed_sum;
    use crate::counting::independence_profile;
    use crate::graph::GraphSpec;
    use crate::interval::ln;
    use std::sync::OnceLock;

    fn catalog() -> &'static SmallGraphCatalog {
        static CAT: OnceLock<SmallGraphCatalog> = OnceLock::new();
        CAT.get_or_init(|| SmallGraphCatalog::build(6).unwrap())
    }

    fn spec(s: &str) -> Graph {
        s.parse::<GraphSpec>().unwrap().construct().unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    /// `w_j = n^{-j} Σ_φ Σ_{F connected} (−1)^{|E(F)|} Π 1[φ(a)φ(b) ∈ E°]`.
    fn direct_weight(g: &Graph, j: usize) -> BigRational {
        let n = g.n();
        let mut phi = vec![0usize; j];
        let mut total = 0i64;
        'outer: loop {
            let mut adj = vec![0u32; j];
            for a in 0..j {
                for b in a + 1..j {
                    if phi[a] == phi[b] || g.has_edge(phi[a], phi[b]) {
                        adj[a] |= 1 << b;
                        adj[b] |= 1 << a;
                    }
                }
            }
            total += connected_signed_sum(&adj, (1u32 << j) - 1);
            for slot in phi.iter_mut() {
                *slot += 1;
                if *slot < n {
                    continue 'outer;
                }
                *slot = 0;
            }
            break;
        }
        BigRational::new(total.into(), Pow::pow(BigInt::from(n), j as u32))
    }

    #[test]
    fn weights_three_ways() {
        for s in ["cycle(4)", "clique(4)", "petersen", "copies(cycle(3),2)"] {
            let g = spec(s);
            let w = PolymerWeights::for_graph(catalog(), &g, 6).unwrap();
            let from_log = weights_from_profile(&independence_profile(&g).unwrap().coeffs, g.n(), 6);
            for j in 2..=6 {
                assert_eq!(w.weights[j], from_log[j], "{s} j={j}");
                assert!(w.weights[j].abs() <= w.penrose_bound(j));
            }
            let jd = if g.n() <= 6 { 4 } else { 3 };
            for j in 2..=jd {
                assert_eq!(w.weights[j], direct_weight(&g, j), "{s} j={j}");
            }
        }
        let c4 = PolymerWeights::for_graph(catalog(), &spec("cycle(4)"), 3).unwrap();
        assert_eq!(c4.weights[2], q(-3, 4));
        assert_eq!(c4.get(1).unwrap().value, q(1, 1));
    }

    #[test]
    fn xi_reproduces_profiles() {
        for s in ["cycle(4)", "petersen", "kdd(3)", "copies(cycle(4),2)"] {
            let g = spec(s);
            let w = PolymerWeights::for_graph(catalog(), &g, 6).unwrap();
            let p = independence_profile(&g).unwrap();
            for k in 0..=6 {
                let xi = exact_xi(&w, k).unwrap();
                let ik = ik_from_xi(&xi, &BigUint::from(g.n()), k);
                assert_eq!(ik, BigRational::from_integer(BigInt::from(p.get(k))), "{s} k={k}");
            }
        }
        let w = PolymerWeights::for_graph(catalog(), &spec("cycle(4)"), 2).unwrap();
        assert_eq!(exact_xi(&w, 2).unwrap(), q(1, 4));
        assert!(exact_xi(&w, 3).is_err());
    }

    #[test]
    fn small_type_lists() {
        let t1 = enumerate_cluster_types(1).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(t1[0].sizes, vec![2]);
        assert_eq!(t1[0].ursell, q(1, 1));
        let t3 = enumerate_cluster_types(3).unwrap();
        assert!(t3.iter().all(|ty| ty.excess <= 3));
        // a (3,2) pair sharing a point, in both orders
        let pairs: Vec<_> = t3
            .iter()
            .filter(|ty| {
                let mut s = ty.sizes.clone();
                s.sort();
                s == vec![2, 3]
            })
            .collect();
        assert!(pairs.iter().any(|ty| ty.sizes == vec![3, 2]));
        assert!(pairs.iter().any(|ty| ty.sizes == vec![2, 3]));
        assert!(pairs.iter().all(|ty| ty.ursell == q(-1, 2)));
        assert!(enumerate_cluster_types(MAX_EXCESS + 1).is_err());
    }

    #[test]
    fn embedding_counts_match_direct_enumeration() {
        // Ordered pairs of 2-subsets of [4] that intersect (including equal).
        let types = enumerate_cluster_types(2).unwrap();
        let k = 4;
        let by_types: BigUint = types
            .iter()
            .filter(|ty| ty.sizes == vec![2, 2])
            .map(|ty| embedding_count(ty, k))
            .sum();
        let subsets: Vec<u32> = (0u32..16).filter(|s| s.count_ones() == 2).collect();
        let direct = subsets
            .iter()
            .flat_map(|a| subsets.iter().map(move |b| (a, b)))
            .filter(|(a, b)| *a & *b != 0)
            .count();
        assert_eq!(by_types, BigUint::from(direct));
        // Single polymers give binomials.
        let single = types.iter().find(|ty| ty.sizes == vec![3]).unwrap();
        assert_eq!(embedding_count(single, 7), BigUint::from(35u32));
    }

    #[test]
    fn pair_count_for_girth_pairs() {
        let types = enumerate_cluster_types(4).unwrap();
        for g in [4usize, 5] {
            for k in g..12 {
                let total: BigUint = types
                    .iter()
                    .filter(|ty| {
                        let mut s = ty.sizes.clone();
                        s.sort();
                        s == vec![2, g - 1]
                    })
                    .map(|ty| embedding_count(ty, k))
                    .sum();
                let binom = factorial(k) / (factorial(g - 1) * factorial(k - g + 1));
                let expect = binom * BigInt::from((g - 1) * (2 * k - g));
                assert_eq!(BigInt::from(total), expect, "g={g} k={k}");
            }
        }
    }

    #[test]
    fn cluster_sums_match_log_of_partition_function() {
        // Arbitrary weights: the identity is purely combinatorial.
        let w: Vec<BigRational> = vec![q(0, 1), q(1, 1), q(-3, 7), q(5, 11), q(-2, 13), q(7, 17), q(-1, 19), q(3, 23)];
        let table = ClusterTable::new(5).unwrap();
        for k in 0..=8 {
            let lhs = table.sums_by_excess(&w, k, 5);
            let rhs = log_xi_by_excess(&w, k, 5);
            assert_eq!(lhs, rhs, "k={k}");
        }
    }

    #[test]
    fn kp_regime() {
        // KP sum is below 1 for every k.
        for k in [2usize, 3, 10, 100, 1000] {
            assert!(kp_sum_upper(k, 96) < BigRational::one());
        }
        let n = BigUint::from(1_000_000u32);
        assert!(kp_check(&n, 2, 2000, 128).satisfied);
        assert!(!kp_check(&n, 2, 2300, 128).satisfied);
    }

    #[test]
    fn truncation_contains_exact_log() {
        let c4 = spec("cycle(4)");
        // Large union of C_4 so that the KP condition holds for small k.
        let u = GraphUnion::copies(&c4, 4000u32);
        let w = PolymerWeights::compute(catalog(), &u, 6).unwrap();
        let table = ClusterTable::new(5).unwrap();
        for k in 2..=6 {
            let xi = exact_xi(&w, k).unwrap();
            let exact = ln(&xi, 128);
            for t in 2..=6 {
                let tr = truncated_log_xi(&w, &table, k, t, 128).unwrap();
                assert!(tr.interval.encloses(&exact), "k={k} t={t}");
            }
        }
        let small = PolymerWeights::for_graph(catalog(), &c4, 4).unwrap();
        assert!(matches!(
            truncated_log_xi(&small, &table, 2, 3, 128),
            Err(Error::DivergentRegime(_))
        ));
        let tr = truncated_log_xi(&small, &table, 1, 3, 128).unwrap();
        assert_eq!(tr.interval, CertifiedInterval::zero());
    }

    #[test]
    fn dominance_verdicts() {
        let table = ClusterTable::new(5).unwrap();
        let c8 = spec("cycle(8)");
        let h = spec("copies(cycle(4),2)");
        let same = dominance_certificate(
            catalog(),
            &GraphUnion::from_graph(&h),
            &GraphUnion::from_graph(&h),
            &table,
            4,
            4,
            128,
        )
        .unwrap();
        assert_eq!(same.verdict, Verdict::CertifiedNonstrict);
        assert!(matches!(
            dominance_certificate(catalog(), &GraphUnion::from_graph(&c8), &GraphUnion::from_graph(&h), &table, 4, 4, 128),
            Err(Error::DivergentRegime(_))
        ));
        // C_5 unions against C_4 unions: 5-cycles have fewer 4-cycles.
        let n: u64 = 20 * 1_000_000_000_000;
        let g = GraphUnion::copies(&spec("cycle(5)"), BigUint::from(n / 5));
        let hh = GraphUnion::copies(&spec("cycle(4)"), BigUint::from(n / 4));
        let cert = dominance_certificate(catalog(), &g, &hh, &table, 4, 5, 128).unwrap();
        assert_eq!(cert.verdict, Verdict::CertifiedStrict, "{:?}", cert.bound);
        let rev = dominance_certificate(catalog(), &hh, &g, &table, 4, 5, 128).unwrap();
        assert_eq!(rev.verdict, Verdict::Refuted);
    }
}
