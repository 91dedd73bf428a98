//! The monomer–dimer model as a polymer model on edges.
//!
//! Polymers are the edges of `G`, two edges are compatible when they share no
//! vertex, and every edge has weight `λ`. The cluster expansion of
//! `log Z^m_G(λ)` is computed exactly through order 3 and the rest is bounded
//! by `n K^{−t}` with `K = (e λ (D+1))^{−1}`, `D = 2(d−1)`.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::canonical::Verdict;
use crate::catalog::{ursell, SmallGraph};
use crate::census::inj_count;
use crate::counting::matching_profile;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphSpec};
use crate::interval::{e_interval, round_up_relative, CertifiedInterval};

/// Highest truncation order supported: clusters of up to 3 edges.
pub const MAX_MD_ORDER: usize = 4;

/// Cluster counts of the monomer–dimer model through order 3.
///
/// Counts are of ordered tuples of edges, grouped by the shape of the
/// incompatibility graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MDClusterTerms {
    pub n: usize,
    /// Single edges.
    pub edges: BigUint,
    /// Unordered pairs of distinct edges sharing a vertex.
    pub incident_pairs: BigUint,
    /// Unordered triples of edges sharing one vertex.
    pub claws: BigUint,
    /// Ordered triples of distinct edges forming a triangle: `inj(C_3, G)`.
    pub triangle_clusters: BigUint,
    /// Ordered triples forming a path on four vertices: `3 inj(P_4, G)`.
    pub path_clusters: BigUint,
}

impl MDClusterTerms {
    pub fn compute(g: &Graph) -> Self {
        let mut pairs = BigUint::zero();
        let mut claws = BigUint::zero();
        for v in 0..g.n() {
            let d = g.degree(v) as u64;
            pairs += BigUint::from(d * d.saturating_sub(1) / 2);
            claws += BigUint::from(d * d.saturating_sub(1) * d.saturating_sub(2) / 6);
        }
        MDClusterTerms {
            n: g.n(),
            edges: BigUint::from(g.edge_count()),
            incident_pairs: pairs,
            claws,
            triangle_clusters: inj_count(&SmallGraph::cycle(3), g),
            path_clusters: inj_count(&SmallGraph::path(4), g) * BigUint::from(3u32),
        }
    }

    /// Coefficients `c_0..=c_3` of `log Z^m_G(λ) = Σ c_i λ^i + O(λ^4)`.
    ///
    /// Each cluster contributes its Ursell factor: a triple whose
    /// incompatibility graph is a triangle carries `φ(K_3)`, a 3-edge path
    /// carries `φ(P_3)`.
    pub fn coefficients(&self) -> [BigRational; 4] {
        let int = |x: &BigUint| BigRational::from_integer(BigInt::from(x.clone()));
        let phi1 = ursell(&SmallGraph::single_vertex());
        let phi2 = ursell(&SmallGraph::edge());
        let phi_tri = ursell(&SmallGraph::complete(3));
        let phi_path = ursell(&SmallGraph::path(3));
        let m = int(&self.edges);
        let pairs = int(&self.incident_pairs);
        let two = BigRational::from_integer(2.into());
        let six = BigRational::from_integer(6.into());
        // Ordered tuples with a complete incompatibility graph on 3 slots:
        // (e,e,e), arrangements of (e,e,f) with f incident, and three distinct
        // pairwise-incident edges (claws and triangles).
        let complete3 = &m + BigRational::from_integer(6.into()) * &pairs
            + &six * int(&self.claws)
            + int(&self.triangle_clusters);
        [
            BigRational::zero(),
            phi1 * &m,
            phi2 * (&m + &two * &pairs),
            phi_tri * complete3 + phi_path * int(&self.path_clusters),
        ]
    }

    /// `Σ_{i<t} c_i λ^i`.
    pub fn truncated(&self, lambda: &BigRational, t: usize) -> BigRational {
        let c = self.coefficients();
        let mut power = BigRational::one();
        let mut sum = BigRational::zero();
        for ci in c.iter().take(t.min(MAX_MD_ORDER)) {
            sum += ci * &power;
            power *= lambda;
        }
        sum
    }
}

/// The truncated expansion of `log Z^m_G(λ)` with its tail.
#[derive(Clone, Debug)]
pub struct MDTruncation {
    pub lambda: BigRational,
    pub t: usize,
    pub value: BigRational,
    /// Upper bound on `n K^{−t}`.
    pub tail: BigRational,
    /// Lower bound on `K`.
    pub k_lower: Option<BigRational>,
    pub interval: CertifiedInterval,
}

fn regular_degree(g: &Graph) -> Result<usize> {
    g.regular_degree()
        .ok_or_else(|| Error::Precondition("graph is not regular".into()))
}

/// `e λ (2d − 1)` rounded up, i.e. an upper bound on `1/K`.
fn inverse_k_upper(lambda: &BigRational, d: usize, bits: u32) -> BigRational {
    e_interval(bits).upper * lambda * BigRational::from_integer(BigInt::from(2 * d - 1))
}

/// Interval containing `log Z^m_G(λ)`, from clusters of fewer than `t` edges.
pub fn md_truncated_log(g: &Graph, lambda: &BigRational, t: usize, bits: u32) -> Result<MDTruncation> {
    if lambda.is_negative() {
        return Err(Error::Precondition("λ must be nonnegative".into()));
    }
    if t == 0 || t > MAX_MD_ORDER {
        return Err(Error::Unsupported(format!(
            "monomer-dimer truncation order {t} outside 1..={MAX_MD_ORDER}"
        )));
    }
    let d = regular_degree(g)?;
    if lambda.is_zero() || d == 0 {
        return Ok(MDTruncation {
            lambda: lambda.clone(),
            t,
            value: BigRational::zero(),
            tail: BigRational::zero(),
            k_lower: None,
            interval: CertifiedInterval::zero(),
        });
    }
    let inv_k = inverse_k_upper(lambda, d, bits);
    if inv_k > BigRational::one() {
        return Err(Error::DivergentRegime(format!(
            "λ={lambda} exceeds 1/(e(2d-1)) for d={d}"
        )));
    }
    let terms = MDClusterTerms::compute(g);
    let value = terms.truncated(lambda, t);
    let tail = round_up_relative(
        &(BigRational::from_integer(g.n().into()) * Pow::pow(&inv_k, t as u32)),
        bits,
    );
    let interval = CertifiedInterval::around(&value, &tail);
    Ok(MDTruncation {
        lambda: lambda.clone(),
        t,
        value,
        tail,
        k_lower: Some(inv_k.recip()),
        interval,
    })
}

/// Parameters of the clique-minimisation certificate.
#[derive(Clone, Debug)]
pub struct CliqueMinConfig {
    pub d: usize,
    pub lambda: BigRational,
    /// Enclosure of `1/(96 e^4)`.
    pub c: CertifiedInterval,
    /// Enclosure of `K = (e λ (2d−1))^{−1}`.
    pub k: CertifiedInterval,
}

impl CliqueMinConfig {
    /// Checks `0 < λ < c d^{−4}` against the lower end of `c`.
    pub fn new(d: usize, lambda: BigRational, bits: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Precondition("clique certificate needs d >= 2".into()));
        }
        let e = e_interval(bits);
        let e4 = e.pow_nonneg(4);
        let c = e4
            .scale(&BigRational::from_integer(96.into()))
            .recip_pos();
        let bound = &c.lower / BigRational::from_integer(Pow::pow(BigInt::from(d), 4u32));
        if !lambda.is_positive() || lambda >= bound {
            return Err(Error::Precondition(format!(
                "λ={lambda} outside (0, c d^-4) with c d^-4 >= {}",
                crate::interval::format_down(&bound, 6)
            )));
        }
        let width = BigRational::from_integer(BigInt::from(2 * d - 1));
        let k = e.scale(&(&lambda * width)).recip_pos();
        Ok(CliqueMinConfig { d, lambda, c, k })
    }
}

#[derive(Clone, Debug)]
pub struct CliqueMinCertificate {
    pub verdict: Verdict,
    pub config: CliqueMinConfig,
    /// `inj(C_3, G) / n`.
    pub triangle_density: BigRational,
    /// Lower bound `λ³/3 − 2K^{−4}`.
    pub simplified_bound: BigRational,
    /// Lower bound `(λ³/6)(d(d−1) − inj(C_3,G)/n) − 2K^{−4}`.
    pub sharp_bound: BigRational,
    /// Upper bound on `2K^{−4}`.
    pub tail: BigRational,
}

/// Lower bound on `(1/n) log Z^m_G(λ) − (1/(d+1)) log Z^m_{K_{d+1}}(λ)`.
pub fn clique_min_certificate(g: &Graph, lambda: &BigRational, bits: u32) -> Result<CliqueMinCertificate> {
    let d = regular_degree(g)?;
    let config = CliqueMinConfig::new(d, lambda.clone(), bits)?;
    let clique = GraphSpec::Clique(d + 1).construct()?;
    if g.component_graphs().iter().any(|c| c.is_isomorphic(&clique)) {
        return Err(Error::Precondition(format!(
            "graph has a K_{} component; split it off first",
            d + 1
        )));
    }
    let n = BigRational::from_integer(g.n().into());
    let triangle_density =
        BigRational::from_integer(BigInt::from(inj_count(&SmallGraph::cycle(3), g))) / &n;
    let dd = BigRational::from_integer(BigInt::from(d * (d - 1)));
    let two = BigRational::from_integer(2.into());
    if triangle_density > &dd - &two {
        return Err(Error::Invariant(format!(
            "triangle density {triangle_density} above d(d-1)-2 without a K_{} component",
            d + 1
        )));
    }
    let inv_k4 = round_up_relative(&Pow::pow(&config.k.lower.recip(), 4u32), bits);
    let tail = &two * inv_k4;
    let cube = Pow::pow(lambda, 3u32);
    let simplified_bound = &cube / BigRational::from_integer(3.into()) - &tail;
    let sharp_bound = &cube / BigRational::from_integer(6.into()) * (&dd - &triangle_density) - &tail;
    let verdict = if simplified_bound.is_positive() {
        Verdict::CertifiedStrict
    } else {
        Verdict::Inconclusive
    };
    Ok(CliqueMinCertificate {
        verdict,
        config,
        triangle_density,
        simplified_bound,
        sharp_bound,
        tail,
    })
}

/// Exact comparison of `Z^m_G(λ)^{d+1}` against `Z^m_{K_{d+1}}(λ)^n`.
#[derive(Clone, Debug)]
pub struct MDComparison {
    pub lambda: BigRational,
    pub z_graph: BigRational,
    pub z_clique: BigRational,
    /// Ordering of the left side against the right side.
    pub ordering: Ordering,
}

impl MDComparison {
    /// `(1/n) log Z_G ≥ (1/(d+1)) log Z_{K_{d+1}}`.
    pub fn holds(&self) -> bool {
        self.ordering != Ordering::Less
    }

    pub fn strict(&self) -> bool {
        self.ordering == Ordering::Greater
    }
}

pub fn exact_md_inequality(g: &Graph, lambda: &BigRational) -> Result<MDComparison> {
    if lambda.is_negative() {
        return Err(Error::Precondition("λ must be nonnegative".into()));
    }
    let d = regular_degree(g)?;
    let clique = GraphSpec::Clique(d + 1).construct()?;
    let z_graph = matching_profile(g)?.evaluate(lambda);
    let z_clique = matching_profile(&clique)?.evaluate(lambda);
    let lhs: BigRational = Pow::pow(&z_graph, (d + 1) as u32);
    let rhs: BigRational = Pow::pow(&z_clique, g.n() as u32);
    Ok(MDComparison {
        lambda: lambda.clone(),
        ordering: lhs.cmp(&rhs),
        z_graph,
        z_clique,
    })
}
