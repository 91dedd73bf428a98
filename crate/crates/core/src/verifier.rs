//! Batch checks of extremal statements over corpora of regular graphs.
//!
//! Asymptotic statements are treated as expectations: a violation at small
//! `n` is reported as an alarm rather than raised as an error.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::catalog::SmallGraph;
use crate::census::inj_count;
use crate::counting::{profile, CoefficientProfile, ProfileKind};
use crate::error::{Error, Result};
use crate::graph::{Girth, Graph};

/// Which side of the comparison the reference is expected to be on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `p_k(G) <= p_k(H_n)`: the reference maximises.
    Max,
    /// `p_k(G) >= p_k(H_n)`: the reference minimises.
    Min,
}

/// Coefficient of `G` compared with the coefficient of `H_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Comparison {
    #[serde(rename = "LT")]
    Lt,
    #[serde(rename = "EQ")]
    Eq,
    #[serde(rename = "GT")]
    Gt,
}

impl Comparison {
    fn of(a: &BigUint, b: &BigUint) -> Self {
        match a.cmp(b) {
            std::cmp::Ordering::Less => Comparison::Lt,
            std::cmp::Ordering::Equal => Comparison::Eq,
            std::cmp::Ordering::Greater => Comparison::Gt,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Lt => "LT",
            Comparison::Eq => "EQ",
            Comparison::Gt => "GT",
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub kind: ProfileKind,
    pub direction: Direction,
    /// Graphs of smaller girth are skipped and counted as filtered.
    pub girth_min: Option<usize>,
    /// Largest `k` compared; defaults to the full profile.
    pub k_max: Option<usize>,
    /// Strictness is expected for `strict_from <= k <= n/2` on
    /// non-isomorphic inputs; defaults to the girth of the reference.
    pub strict_from: Option<usize>,
}

impl VerifyOptions {
    pub fn new(kind: ProfileKind, direction: Direction) -> Self {
        VerifyOptions {
            kind,
            direction,
            girth_min: None,
            k_max: None,
            strict_from: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientResult {
    pub k: usize,
    pub graph: String,
    pub reference: String,
    pub comparison: Comparison,
    pub strict_expected: bool,
    pub alarm: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphStatus {
    Checked,
    Filtered,
    Rejected,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphReport {
    pub index: usize,
    pub n: usize,
    pub status: GraphStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub girth: Option<String>,
    pub isomorphic_to_reference: bool,
    pub results: Vec<CoefficientResult>,
    pub alarms: usize,
}

impl GraphReport {
    fn skipped(index: usize, n: usize, status: GraphStatus, reason: String) -> Self {
        GraphReport {
            index,
            n,
            status,
            reason: Some(reason),
            girth: None,
            isomorphic_to_reference: false,
            results: Vec::new(),
            alarms: 0,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ReportSummary {
    pub graphs: usize,
    pub checked: usize,
    pub filtered: usize,
    pub rejected: usize,
    pub lt: usize,
    pub eq: usize,
    pub gt: usize,
    pub strict_expected: usize,
    pub alarms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DominanceReport {
    pub reference: String,
    pub d: usize,
    pub kind: ProfileKind,
    pub direction: Direction,
    pub graphs: Vec<GraphReport>,
    pub summary: ReportSummary,
}

impl DominanceReport {
    pub fn has_alarms(&self) -> bool {
        self.summary.alarms > 0
    }
}

/// Compares every corpus graph against `H_n`, the union of `n/|H|` copies
/// of the reference.
pub fn verify_dominance(corpus: &[Graph], reference: &Graph, options: &VerifyOptions) -> Result<DominanceReport> {
    let d = reference
        .regular_degree()
        .ok_or_else(|| Error::Precondition("reference graph is not regular".into()))?;
    if reference.n() == 0 {
        return Err(Error::Precondition("empty reference graph".into()));
    }
    let strict_from = options.strict_from.unwrap_or(match reference.girth() {
        Girth::Finite(g) => g,
        Girth::Infinite => usize::MAX,
    });
    // H_n profiles, one per vertex count.
    let mut sizes: Vec<usize> = corpus.iter().map(Graph::n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut references: HashMap<usize, (Graph, CoefficientProfile)> = HashMap::new();
    for n in sizes {
        if n == 0 || n % reference.n() != 0 {
            continue;
        }
        let hn = reference.copies(n / reference.n());
        let p = profile(&hn, options.kind)?;
        references.insert(n, (hn, p));
    }
    let indexed: Vec<(usize, &Graph)> = corpus.iter().enumerate().collect();
    let reports = crate::par::map(&indexed, |&(index, g)| {
        check_graph(index, g, d, &references, options, strict_from)
    });
    let graphs = reports.into_iter().collect::<Result<Vec<_>>>()?;
    let mut summary = ReportSummary {
        graphs: graphs.len(),
        ..Default::default()
    };
    for r in &graphs {
        match r.status {
            GraphStatus::Checked => summary.checked += 1,
            GraphStatus::Filtered => summary.filtered += 1,
            GraphStatus::Rejected => summary.rejected += 1,
        }
        for c in &r.results {
            match c.comparison {
                Comparison::Lt => summary.lt += 1,
                Comparison::Eq => summary.eq += 1,
                Comparison::Gt => summary.gt += 1,
            }
            summary.strict_expected += c.strict_expected as usize;
        }
        summary.alarms += r.alarms;
    }
    Ok(DominanceReport {
        reference: format!("{} vertices, degree {d}", reference.n()),
        d,
        kind: options.kind,
        direction: options.direction,
        graphs,
        summary,
    })
}

fn check_graph(
    index: usize,
    g: &Graph,
    d: usize,
    references: &HashMap<usize, (Graph, CoefficientProfile)>,
    options: &VerifyOptions,
    strict_from: usize,
) -> Result<GraphReport> {
    let n = g.n();
    if !g.check_regular(d) {
        return Ok(GraphReport::skipped(
            index,
            n,
            GraphStatus::Rejected,
            format!("not {d}-regular"),
        ));
    }
    let Some((hn, hp)) = references.get(&n) else {
        return Ok(GraphReport::skipped(
            index,
            n,
            GraphStatus::Rejected,
            format!("{n} vertices is not a multiple of the reference size"),
        ));
    };
    let girth = g.girth();
    if let Some(gm) = options.girth_min {
        if !girth.at_least(gm) {
            let mut r = GraphReport::skipped(index, n, GraphStatus::Filtered, format!("girth {girth} below {gm}"));
            r.girth = Some(girth.to_string());
            return Ok(r);
        }
    }
    let gp = profile(g, options.kind)?;
    let isomorphic = g.is_isomorphic(hn);
    let top = gp.degree().max(hp.degree());
    let k_max = options.k_max.map_or(top, |k| k.min(top));
    let mut results = Vec::with_capacity(k_max + 1);
    let mut alarms = 0;
    for k in 0..=k_max {
        let (a, b) = (gp.get(k), hp.get(k));
        let comparison = Comparison::of(&a, &b);
        let strict_expected = !isomorphic && k >= strict_from && 2 * k <= n;
        let wrong_side = match options.direction {
            Direction::Max => comparison == Comparison::Gt,
            Direction::Min => comparison == Comparison::Lt,
        };
        let alarm = wrong_side || (strict_expected && comparison == Comparison::Eq);
        alarms += alarm as usize;
        results.push(CoefficientResult {
            k,
            graph: a.to_string(),
            reference: b.to_string(),
            comparison,
            strict_expected,
            alarm,
        });
    }
    Ok(GraphReport {
        index,
        n,
        status: GraphStatus::Checked,
        reason: None,
        girth: Some(girth.to_string()),
        isomorphic_to_reference: isomorphic,
        results,
        alarms,
    })
}

/// Per-graph cycle-density comparison against a reference graph.
#[derive(Clone, Debug)]
pub struct OptimalityGap {
    pub index: usize,
    pub n: usize,
    /// `inj(C_g, G) / n`.
    pub density: BigRational,
    /// `inj(C_g, H) / |H|`.
    pub reference_density: BigRational,
    /// `reference_density − density`.
    pub gap: BigRational,
    pub equal_to_reference: bool,
    /// For `g = 4` against `K_{d,d}`: whether `density <= d(d−1)^2 − 1`.
    pub vertex_bound: Option<bool>,
}

/// Cycle-density gaps of connected `d`-regular graphs of girth at least
/// `g − 1` against `H`.
pub fn optimality_scan(corpus: &[Graph], h: &Graph, g: usize) -> Result<Vec<OptimalityGap>> {
    if !(3..=crate::catalog::MAX_SMALL_J).contains(&g) {
        return Err(Error::Unsupported(format!("cycle length {g}")));
    }
    let d = h
        .regular_degree()
        .ok_or_else(|| Error::Precondition("reference graph is not regular".into()))?;
    let cycle = SmallGraph::cycle(g);
    let density = |x: &Graph| BigRational::new(BigInt::from(inj_count(&cycle, x)), BigInt::from(x.n()));
    let reference_density = density(h);
    let kdd = h.is_isomorphic(&crate::graph::GraphSpec::CompleteBipartite(d).construct()?);
    for (i, x) in corpus.iter().enumerate() {
        if !x.is_connected() {
            return Err(Error::Precondition(format!("graph {i} is disconnected")));
        }
        if !x.check_regular(d) {
            return Err(Error::Precondition(format!("graph {i} is not {d}-regular")));
        }
        if !x.girth().at_least(g - 1) {
            return Err(Error::Precondition(format!("graph {i} has girth below {}", g - 1)));
        }
    }
    let indexed: Vec<(usize, &Graph)> = corpus.iter().enumerate().collect();
    let limit = BigRational::from_integer(BigInt::from(d * (d - 1) * (d - 1)) - BigInt::one());
    Ok(crate::par::map(&indexed, |&(index, x)| {
        let dens = density(x);
        let equal = x.is_isomorphic(h);
        let vertex_bound = (g == 4 && kdd && !equal).then(|| dens <= limit);
        OptimalityGap {
            index,
            n: x.n(),
            gap: &reference_density - &dens,
            density: dens,
            reference_density: reference_density.clone(),
            equal_to_reference: equal,
            vertex_bound,
        }
    }))
}

/// Vertex count of a `d`-regular Moore graph of girth `g`.
pub fn moore_vertex_count(d: usize, g: usize) -> BigUint {
    assert!(d >= 2 && g >= 3, "moore_vertex_count needs d >= 2, g >= 3");
    let dm1 = BigUint::from(d - 1);
    let geometric = |top: usize| -> BigUint { (0..=top).map(|j| Pow::pow(&dm1, j as u32)).sum() };
    if g.is_multiple_of(2) {
        let head = Pow::pow(&dm1, ((g - 2) / 2) as u32);
        let body = if g >= 4 { geometric((g - 4) / 2) } else { BigUint::zero() };
        BigUint::one() + head + BigUint::from(d) * body
    } else {
        BigUint::one() + BigUint::from(d) * geometric((g - 3) / 2)
    }
}
