//! Homomorphism, injective-homomorphism and subgraph counts of small graphs,
//! homomorphism densities, and the density gaps between two graphs.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::catalog::SmallGraph;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphUnion, LoopedView};

/// Visiting order for `F`: each vertex after the first of its component has
/// an earlier neighbour (`parent`), and `back` lists all earlier neighbours.
struct Plan {
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    back: Vec<Vec<usize>>,
}

impl Plan {
    fn new(f: &SmallGraph) -> Plan {
        let j = f.vertex_count();
        let adj = f.adjacency();
        let mut order = Vec::with_capacity(j);
        let mut placed = 0u32;
        // Start each component at its highest-degree vertex, then grow by the
        // vertex with the most already-placed neighbours.
        while order.len() < j {
            let next = (0..j)
                .filter(|v| placed >> v & 1 == 0)
                .max_by_key(|&v| {
                    let back = (adj[v] & placed).count_ones();
                    (back, adj[v].count_ones(), std::cmp::Reverse(v))
                })
                .unwrap();
            order.push(next);
            placed |= 1 << next;
        }
        let pos: Vec<usize> = {
            let mut p = vec![0; j];
            for (i, &v) in order.iter().enumerate() {
                p[v] = i;
            }
            p
        };
        let mut parent = Vec::with_capacity(j);
        let mut back = Vec::with_capacity(j);
        for (i, &v) in order.iter().enumerate() {
            let earlier: Vec<usize> = (0..j)
                .filter(|&u| adj[v] >> u & 1 == 1 && pos[u] < i)
                .map(|u| pos[u])
                .collect();
            parent.push(earlier.first().copied());
            back.push(earlier);
        }
        Plan { order, parent, back }
    }
}

struct Search<'a> {
    plan: &'a Plan,
    g: &'a Graph,
    loops: bool,
    injective: bool,
    image: Vec<usize>,
}

impl Search<'_> {
    fn adjacent(&self, a: usize, b: usize) -> bool {
        if self.loops {
            LoopedView::new(self.g).has_edge(a, b)
        } else {
            self.g.has_edge(a, b)
        }
    }

    fn admissible(&self, i: usize, x: usize) -> bool {
        if self.injective && self.image[..i].contains(&x) {
            return false;
        }
        self.plan.back[i].iter().all(|&p| self.adjacent(self.image[p], x))
    }

    fn count(&mut self, i: usize) -> u128 {
        if i == self.plan.order.len() {
            return 1;
        }
        let mut total = 0u128;
        match self.plan.parent[i] {
            Some(p) => {
                let anchor = self.image[p];
                if self.loops && self.admissible(i, anchor) {
                    self.image[i] = anchor;
                    total += self.count(i + 1);
                }
                for idx in 0..self.g.neighbors(anchor).len() {
                    let x = self.g.neighbors(anchor)[idx];
                    if self.admissible(i, x) {
                        self.image[i] = x;
                        total += self.count(i + 1);
                    }
                }
            }
            None => {
                for x in 0..self.g.n() {
                    if self.admissible(i, x) {
                        self.image[i] = x;
                        total += self.count(i + 1);
                    }
                }
            }
        }
        total
    }
}

fn count_maps(f: &SmallGraph, g: &Graph, loops: bool, injective: bool) -> BigUint {
    let plan = Plan::new(f);
    let mut search = Search {
        plan: &plan,
        g,
        loops,
        injective,
        image: vec![0; f.vertex_count()],
    };
    BigUint::from(search.count(0))
}

/// Number of homomorphisms `F → G`, or `F → G°` when `loops` is set.
pub fn hom_count(f: &SmallGraph, g: &Graph, loops: bool) -> BigUint {
    // Homomorphism counts factor over the components of F.
    let comps = f.components();
    if comps.len() <= 1 {
        return count_maps(f, g, loops, false);
    }
    comps
        .into_iter()
        .map(|c| count_maps(&f.induced(c), g, loops, false))
        .product()
}

/// Number of injective homomorphisms `F → G`.
pub fn inj_count(f: &SmallGraph, g: &Graph) -> BigUint {
    count_maps(f, g, false, true)
}

/// Number of subgraphs of `G` isomorphic to `F`: `inj(F,G) / |Aut(F)|`.
pub fn sub_count(f: &SmallGraph, g: &Graph) -> BigUint {
    inj_count(f, g) / BigUint::from(f.automorphism_count())
}

/// `t(F, G°) = hom(F, G°) / n^{|V(F)|}`.
pub fn density_t(f: &SmallGraph, g: &Graph) -> BigRational {
    if g.n() == 0 {
        return BigRational::zero();
    }
    let n = BigInt::from(g.n());
    BigRational::new(
        BigInt::from(hom_count(f, g, true)),
        n.pow(f.vertex_count() as u32),
    )
}

/// `hom(F, U)` (or into `U°`) for a union given by component classes.
pub fn hom_count_union(f: &SmallGraph, u: &GraphUnion, loops: bool) -> BigUint {
    f.components()
        .into_iter()
        .map(|c| {
            let comp = f.induced(c);
            u.parts()
                .iter()
                .map(|(g, m)| m * hom_count(&comp, g, loops))
                .sum::<BigUint>()
        })
        .product()
}

/// `inj(F, U)` for connected `F`.
pub fn inj_count_union(f: &SmallGraph, u: &GraphUnion) -> Result<BigUint> {
    if !f.is_connected() {
        return Err(Error::Unsupported(
            "injective counts into a union need a connected pattern".into(),
        ));
    }
    Ok(u.parts().iter().map(|(g, m)| m * inj_count(f, g)).sum())
}

pub fn density_t_union(f: &SmallGraph, u: &GraphUnion) -> BigRational {
    let n = BigInt::from(u.vertex_count());
    if n.is_zero() {
        return BigRational::zero();
    }
    BigRational::new(
        BigInt::from(hom_count_union(f, u, true)),
        n.pow(f.vertex_count() as u32),
    )
}

/// `t(F, H°) − t(F, G°)`, or its line-graph analogue.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityGap {
    pub f: SmallGraph,
    pub value: BigRational,
}

fn check_same_shape(h: &Graph, g: &Graph) -> Result<()> {
    if h.n() != g.n() {
        return Err(Error::Mismatch(format!(
            "vertex counts differ: {} vs {}",
            h.n(),
            g.n()
        )));
    }
    if h.regular_degree() != g.regular_degree() {
        return Err(Error::Mismatch("degrees differ".into()));
    }
    Ok(())
}

fn gap(f: &SmallGraph, h: &Graph, g: &Graph) -> Result<DensityGap> {
    let value = density_t(f, h) - density_t(f, g);
    if f.is_tree() && !value.is_zero() && h.regular_degree().is_some() {
        return Err(Error::Invariant(format!(
            "nonzero density gap {value} for a tree on regular graphs"
        )));
    }
    Ok(DensityGap { f: *f, value })
}

/// `t(F) = t(F, H_n°) − t(F, G°)`.
pub fn density_gap(f: &SmallGraph, h_n: &Graph, g: &Graph) -> Result<DensityGap> {
    check_same_shape(h_n, g)?;
    gap(f, h_n, g)
}

/// `τ(F) = t(F, L(H_n)°) − t(F, L(G)°)`.
pub fn tau_gap(f: &SmallGraph, h_n: &Graph, g: &Graph) -> Result<DensityGap> {
    check_same_shape(h_n, g)?;
    let (lh, lg) = (h_n.line_graph(), g.line_graph());
    check_same_shape(&lh, &lg)?;
    gap(f, &lh, &lg)
}

/// One term of the contraction identity `hom(F, G°) = Σ_π inj(F/π, G)`.
#[derive(Clone, Debug)]
pub struct Contraction {
    /// Blocks of the partition of `V(F)`, each sorted, ordered by least element.
    pub partition: Vec<Vec<usize>>,
    /// `F/π` with loops and parallel edges deleted.
    pub quotient: SmallGraph,
    pub inj: BigUint,
}

/// All set partitions of `0..j` as block labels (restricted growth strings).
pub fn set_partitions(j: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, j: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == j {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            go(i + 1, j, cur, max.max(b + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, j, &mut Vec::new(), 0, &mut out);
    out
}

/// Quotient of `F` by the partition given as block labels.
pub fn quotient(f: &SmallGraph, labels: &[usize]) -> SmallGraph {
    let blocks = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut edges = Vec::new();
    for (a, b) in f.edges() {
        let (x, y) = (labels[a], labels[b]);
        if x != y {
            edges.push((x.min(y), x.max(y)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    SmallGraph::from_edges(blocks, &edges)
}

/// Every partition `π` of `V(F)` with `inj(F/π, G)`. The counts sum to
/// `hom(F, G°)`.
pub fn contraction_decompose(f: &SmallGraph, g: &Graph) -> Vec<Contraction> {
    let j = f.vertex_count();
    set_partitions(j)
        .into_iter()
        .map(|labels| {
            let q = quotient(f, &labels);
            let blocks = q.vertex_count();
            let partition = (0..blocks)
                .map(|b| (0..j).filter(|&v| labels[v] == b).collect())
                .collect();
            Contraction {
                partition,
                inj: inj_count(&q, g),
                quotient: q,
            }
        })
        .collect()
}

/// `((d+1)/n)^{j-1}`: the density of any tree on `j` vertices in `G°` for a
/// `d`-regular `G` on `n` vertices.
pub fn tree_density(n: &BigInt, d: usize, j: usize) -> BigRational {
    if j == 0 {
        return BigRational::one();
    }
    BigRational::new(BigInt::from(d + 1), n.clone()).pow((j - 1) as i32)
}
