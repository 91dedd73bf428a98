//! Simple undirected graphs, the reference constructions, and structural
//! queries (regularity, girth, components, line graphs, isomorphism).

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A simple undirected graph on vertices `0..n`.
///
/// Adjacency is kept twice: sorted neighbor lists for iteration and a dense
/// bitset per vertex for constant-time edge tests. Graphs are immutable once
/// built.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    words: usize,
    rows: Vec<u64>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Length of the shortest cycle; forests have infinite girth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn at_least(self, g: usize) -> bool {
        match self {
            Girth::Finite(x) => x >= g,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "INFINITE"),
        }
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            adj: vec![Vec::new(); n],
            words,
            rows: vec![0; n * words],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Precondition(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::Precondition(format!("self-loop at vertex {u}")));
            }
            g.set_edge(u, v);
        }
        g.finish();
        Ok(g)
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1u64 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1u64 << (u % 64);
    }

    /// Rebuilds neighbor lists from the bitset rows.
    fn finish(&mut self) {
        for v in 0..self.n {
            let mut list = Vec::new();
            for w in 0..self.words {
                let mut bits = self.rows[v * self.words + w];
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    list.push(w * 64 + b);
                    bits &= bits - 1;
                }
            }
            self.adj[v] = list;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Neighborhood of `v` as a single word. Only valid when `n <= 64`.
    #[inline]
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.rows[v]
    }

    /// Edges in lexicographic order on `(min endpoint, max endpoint)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// The common degree if the graph is regular. The empty graph on zero
    /// vertices reports `Some(0)`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn check_regular(&self, d: usize) -> bool {
        (0..self.n).all(|v| self.degree(v) == d)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Subgraph induced on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::empty(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && j > i {
                    g.set_edge(i, j);
                }
            }
        }
        g.finish();
        g
    }

    pub fn component_graphs(&self) -> Vec<Graph> {
        self.components().iter().map(|c| self.induced(c)).collect()
    }

    /// Disjoint union; vertices of later parts are shifted past earlier ones.
    pub fn disjoint_union(parts: &[&Graph]) -> Graph {
        let n = parts.iter().map(|g| g.n).sum();
        let mut g = Graph::empty(n);
        let mut offset = 0;
        for part in parts {
            for (u, v) in part.edges() {
                g.set_edge(u + offset, v + offset);
            }
            offset += part.n;
        }
        g.finish();
        g
    }

    pub fn copies(&self, count: usize) -> Graph {
        let parts: Vec<&Graph> = std::iter::repeat_n(self, count).collect();
        Graph::disjoint_union(&parts)
    }

    pub fn girth(&self) -> Girth {
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        for root in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }

    /// Line graph. Vertex `i` of the result is the `i`-th edge of
    /// [`Graph::edges`], i.e. edges in lexicographic order.
    pub fn line_graph(&self) -> Graph {
        let edges: Vec<(usize, usize)> = self.edges().collect();
        let mut at: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            at[u].push(i);
            at[v].push(i);
        }
        let mut g = Graph::empty(edges.len());
        for incident in &at {
            for (a, &e) in incident.iter().enumerate() {
                for &f in &incident[a + 1..] {
                    g.set_edge(e, f);
                }
            }
        }
        g.finish();
        g
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        isomorphic(self, other)
    }
}

/// Stable colouring of `a ⊔ b` by iterated degree refinement. Colours are
/// shared between the two graphs so they can be compared directly.
fn refine_pair(a: &Graph, b: &Graph) -> (Vec<usize>, Vec<usize>) {
    let mut ca: Vec<usize> = (0..a.n).map(|v| a.degree(v)).collect();
    let mut cb: Vec<usize> = (0..b.n).map(|v| b.degree(v)).collect();
    let mut classes = count_distinct(&ca, &cb);
    loop {
        let mut table: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let sig = |g: &Graph, c: &[usize], v: usize| {
            let mut ns: Vec<usize> = g.neighbors(v).iter().map(|&w| c[w]).collect();
            ns.sort_unstable();
            (c[v], ns)
        };
        let sa: Vec<_> = (0..a.n).map(|v| sig(a, &ca, v)).collect();
        let sb: Vec<_> = (0..b.n).map(|v| sig(b, &cb, v)).collect();
        for s in sa.iter().chain(sb.iter()) {
            let next = table.len();
            table.entry(s.clone()).or_insert(next);
        }
        let na: Vec<usize> = sa.iter().map(|s| table[s]).collect();
        let nb: Vec<usize> = sb.iter().map(|s| table[s]).collect();
        let next_classes = table.len();
        ca = na;
        cb = nb;
        if next_classes == classes {
            return (ca, cb);
        }
        classes = next_classes;
    }
}

fn count_distinct(a: &[usize], b: &[usize]) -> usize {
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// Exhaustive isomorphism test with colour-refinement pruning. Intended for
/// graphs of at most a few dozen vertices.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n != b.n || a.edge_count() != b.edge_count() {
        return false;
    }
    if a.degree_sequence() != b.degree_sequence() {
        return false;
    }
    if a.n == 0 {
        return true;
    }
    let (ca, cb) = refine_pair(a, b);
    let mut ha = ca.clone();
    let mut hb = cb.clone();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return false;
    }
    // Map vertices of `a` in BFS order so each new vertex usually has an
    // already-mapped neighbour constraining its image.
    let mut order = Vec::with_capacity(a.n);
    let mut seen = vec![false; a.n];
    for s in 0..a.n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in a.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; a.n];
    let mut used = vec![false; b.n];
    extend_iso(a, b, &ca, &cb, &order, 0, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend_iso(
    a: &Graph,
    b: &Graph,
    ca: &[usize],
    cb: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    let mapped_nbr = a.neighbors(v).iter().copied().find(|&w| map[w] != usize::MAX);
    let candidates: Vec<usize> = match mapped_nbr {
        Some(w) => b.neighbors(map[w]).to_vec(),
        None => (0..b.n).collect(),
    };
    'cand: for x in candidates {
        if used[x] || cb[x] != ca[v] {
            continue;
        }
        for &u in &order[..depth] {
            if a.has_edge(u, v) != b.has_edge(map[u], x) {
                continue 'cand;
            }
        }
        map[v] = x;
        used[x] = true;
        if extend_iso(a, b, ca, cb, order, depth + 1, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[x] = false;
    }
    false
}

/// Named constructions used as extremal references.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GraphSpec {
    /// `K_{d,d}`
    CompleteBipartite(usize),
    /// `K_m`
    Clique(usize),
    /// `C_len`
    Cycle(usize),
    /// The (3,6)-Moore graph on 14 vertices.
    Heawood,
    /// The (3,5)-Moore graph on 10 vertices.
    Petersen,
    DisjointCopies(Box<GraphSpec>, usize),
}

impl GraphSpec {
    pub fn vertex_count(&self) -> usize {
        match self {
            GraphSpec::CompleteBipartite(d) => 2 * d,
            GraphSpec::Clique(m) => *m,
            GraphSpec::Cycle(len) => *len,
            GraphSpec::Heawood => 14,
            GraphSpec::Petersen => 10,
            GraphSpec::DisjointCopies(inner, c) => inner.vertex_count() * c,
        }
    }

    /// The spec describing one connected building block (unwraps copies).
    pub fn base(&self) -> &GraphSpec {
        match self {
            GraphSpec::DisjointCopies(inner, _) => inner.base(),
            other => other,
        }
    }

    pub fn construct(&self) -> Result<Graph> {
        construct(self)
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::CompleteBipartite(d) => write!(f, "kdd({d})"),
            GraphSpec::Clique(m) => write!(f, "clique({m})"),
            GraphSpec::Cycle(len) => write!(f, "cycle({len})"),
            GraphSpec::Heawood => write!(f, "heawood"),
            GraphSpec::Petersen => write!(f, "petersen"),
            GraphSpec::DisjointCopies(inner, c) => write!(f, "copies({inner},{c})"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    /// Grammar: `kdd(d)`, `clique(m)`, `cycle(len)`, `heawood`, `petersen`,
    /// `copies(<spec>,c)`.
    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Spec {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.to_ascii_lowercase();
        match t.as_str() {
            "heawood" => return Ok(GraphSpec::Heawood),
            "petersen" => return Ok(GraphSpec::Petersen),
            _ => {}
        }
        let open = t.find('(').ok_or_else(|| fail("expected `name(args)`"))?;
        if !t.ends_with(')') {
            return Err(fail("missing closing parenthesis"));
        }
        let name = &t[..open];
        let args = &t[open + 1..t.len() - 1];
        let int = |a: &str| -> Result<usize> {
            a.parse::<usize>()
                .map_err(|_| fail(&format!("`{a}` is not a non-negative integer")))
        };
        let spec = match name {
            "kdd" => GraphSpec::CompleteBipartite(int(args)?),
            "clique" => GraphSpec::Clique(int(args)?),
            "cycle" => GraphSpec::Cycle(int(args)?),
            "copies" => {
                let comma = args.rfind(',').ok_or_else(|| fail("copies needs `<spec>,count`"))?;
                let inner: GraphSpec = args[..comma].parse()?;
                GraphSpec::DisjointCopies(Box::new(inner), int(&args[comma + 1..])?)
            }
            other => return Err(fail(&format!("unknown graph kind `{other}`"))),
        };
        spec.validate().map_err(|e| fail(&e))?;
        Ok(spec)
    }
}

impl GraphSpec {
    fn validate(&self) -> std::result::Result<(), String> {
        match self {
            GraphSpec::CompleteBipartite(d) if *d == 0 => Err("kdd needs d >= 1".into()),
            GraphSpec::Clique(m) if *m == 0 => Err("clique needs m >= 1".into()),
            GraphSpec::Cycle(len) if *len < 3 => Err("cycle needs length >= 3".into()),
            GraphSpec::DisjointCopies(_, 0) => Err("copies needs count >= 1".into()),
            GraphSpec::DisjointCopies(inner, _) => inner.validate(),
            _ => Ok(()),
        }
    }
}

pub fn construct(spec: &GraphSpec) -> Result<Graph> {
    spec.validate().map_err(|reason| Error::Spec {
        input: spec.to_string(),
        reason,
    })?;
    let g = match spec {
        GraphSpec::CompleteBipartite(d) => {
            let d = *d;
            let edges: Vec<_> = (0..d).flat_map(|u| (d..2 * d).map(move |v| (u, v))).collect();
            Graph::from_edges(2 * d, &edges)?
        }
        GraphSpec::Clique(m) => {
            let m = *m;
            let edges: Vec<_> = (0..m).flat_map(|u| (u + 1..m).map(move |v| (u, v))).collect();
            Graph::from_edges(m, &edges)?
        }
        GraphSpec::Cycle(len) => {
            let len = *len;
            let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
            Graph::from_edges(len, &edges)?
        }
        GraphSpec::Heawood => {
            // Point-line incidence graph of the Fano plane: points 0..7,
            // lines 7..14, line l = {l, l+1, l+3} mod 7.
            let edges: Vec<_> = (0..7)
                .flat_map(|l| [0, 1, 3].map(|s| ((l + s) % 7, 7 + l)))
                .collect();
            Graph::from_edges(14, &edges)?
        }
        GraphSpec::Petersen => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            Graph::from_edges(10, &edges)?
        }
        GraphSpec::DisjointCopies(inner, c) => construct(inner)?.copies(*c),
    };
    Ok(g)
}

/// `G°`: the graph with a loop added at every vertex. Never stored as loops.
#[derive(Clone, Copy, Debug)]
pub struct LoopedView<'a> {
    pub base: &'a Graph,
}

impl<'a> LoopedView<'a> {
    pub fn new(base: &'a Graph) -> Self {
        LoopedView { base }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u == v || self.base.has_edge(u, v)
    }
}

/// `G = G_0 ∪ G_H`, with `G_H` the components isomorphic to a reference.
#[derive(Clone, Debug)]
pub struct ComponentSplit {
    pub g0: Graph,
    pub gh: Graph,
    /// `|V(G_0)| / n`
    pub alpha: BigRational,
}

pub fn split_by_reference(g: &Graph, h: &Graph) -> ComponentSplit {
    let mut rest = Vec::new();
    let mut matched = Vec::new();
    for comp in g.components() {
        let sub = g.induced(&comp);
        if sub.is_isomorphic(h) {
            matched.extend(comp);
        } else {
            rest.extend(comp);
        }
    }
    let alpha = if g.n() == 0 {
        BigRational::zero()
    } else {
        BigRational::new(rest.len().into(), g.n().into())
    };
    ComponentSplit {
        g0: g.induced(&rest),
        gh: g.induced(&matched),
        alpha,
    }
}

/// A disjoint union described by its connected components up to
/// isomorphism, each with an arbitrary-precision multiplicity.
///
/// This lets vertex-count-dependent quantities be evaluated on unions far
/// larger than could ever be materialised (e.g. `10^13` copies of `C_4`).
#[derive(Clone, Debug)]
pub struct GraphUnion {
    parts: Vec<(Graph, BigUint)>,
}

impl GraphUnion {
    pub fn new() -> Self {
        GraphUnion { parts: Vec::new() }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut u = GraphUnion::new();
        for comp in g.component_graphs() {
            u.add(comp, BigUint::one());
        }
        u
    }

    /// `count` disjoint copies of `g`.
    pub fn copies(g: &Graph, count: impl Into<BigUint>) -> Self {
        let count = count.into();
        let mut u = GraphUnion::new();
        for comp in g.component_graphs() {
            u.add(comp, count.clone());
        }
        u
    }

    /// Adds `count` copies of the connected graph `component`.
    pub fn add(&mut self, component: Graph, count: BigUint) {
        if count.is_zero() {
            return;
        }
        debug_assert!(component.is_connected());
        for (g, m) in &mut self.parts {
            if g.is_isomorphic(&component) {
                *m += count;
                return;
            }
        }
        self.parts.push((component, count));
    }

    pub fn merge(&mut self, other: &GraphUnion) {
        for (g, m) in &other.parts {
            self.add(g.clone(), m.clone());
        }
    }

    pub fn parts(&self) -> &[(Graph, BigUint)] {
        &self.parts
    }

    pub fn vertex_count(&self) -> BigUint {
        self.parts
            .iter()
            .map(|(g, m)| m * BigUint::from(g.n()))
            .sum()
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let mut degree = None;
        for (g, _) in &self.parts {
            let d = g.regular_degree()?;
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        degree
    }

    pub fn girth(&self) -> Girth {
        self.parts
            .iter()
            .map(|(g, _)| g.girth())
            .min()
            .unwrap_or(Girth::Infinite)
    }

    /// Same component classes with the same multiplicities.
    pub fn is_isomorphic(&self, other: &GraphUnion) -> bool {
        if self.parts.len() != other.parts.len() {
            return false;
        }
        self.parts.iter().all(|(g, m)| {
            other
                .parts
                .iter()
                .any(|(h, k)| m == k && g.is_isomorphic(h))
        })
    }

    /// Materialises the union when it has at most `limit` vertices.
    pub fn to_graph(&self, limit: usize) -> Option<Graph> {
        let n = self.vertex_count().to_usize()?;
        if n > limit {
            return None;
        }
        let mut pieces = Vec::new();
        for (g, m) in &self.parts {
            for _ in 0..m.to_usize()? {
                pieces.push(g);
            }
        }
        Some(Graph::disjoint_union(&pieces))
    }
}

impl Default for GraphUnion {
    fn default() -> Self {
        Self::new()
    }
}

impl From<&Graph> for GraphUnion {
    fn from(g: &Graph) -> Self {
        GraphUnion::from_graph(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn constructions_have_expected_shape() {
        let k22 = construct(&GraphSpec::CompleteBipartite(2)).unwrap();
        assert!(k22.check_regular(2));
        assert_eq!(k22.n(), 4);
        assert_eq!(k22.girth(), Girth::Finite(4));
        assert!(k22.is_isomorphic(&construct(&GraphSpec::Cycle(4)).unwrap()));

        let heawood = construct(&GraphSpec::Heawood).unwrap();
        assert_eq!(heawood.n(), 14);
        assert_eq!(heawood.edge_count(), 21);
        assert!(heawood.check_regular(3));
        assert_eq!(heawood.girth(), Girth::Finite(6));

        let petersen = construct(&GraphSpec::Petersen).unwrap();
        assert_eq!((petersen.n(), petersen.edge_count()), (10, 15));
        assert_eq!(petersen.girth(), Girth::Finite(5));

        let k4 = construct(&GraphSpec::Clique(4)).unwrap();
        assert!(k4.check_regular(3));
        assert_eq!(k4.girth(), Girth::Finite(3));

        for d in 2..6 {
            assert_eq!(
                construct(&GraphSpec::CompleteBipartite(d)).unwrap().girth(),
                Girth::Finite(4)
            );
        }
    }

    #[test]
    fn girth_of_forest_is_infinite() {
        assert_eq!(path(5).girth(), Girth::Infinite);
        assert_eq!(Graph::empty(3).girth(), Girth::Infinite);
        assert!(Girth::Finite(100) < Girth::Infinite);
    }

    #[test]
    fn disjoint_copies_component_multiset() {
        let spec: GraphSpec = "copies(kdd(3),4)".parse().unwrap();
        let g = spec.construct().unwrap();
        assert_eq!(g.n(), 24);
        let comps = g.component_graphs();
        assert_eq!(comps.len(), 4);
        let k33 = construct(&GraphSpec::CompleteBipartite(3)).unwrap();
        assert!(comps.iter().all(|c| c.is_isomorphic(&k33)));
    }

    #[test]
    fn spec_grammar_round_trips() {
        for s in ["kdd(3)", "clique(5)", "cycle(7)", "heawood", "petersen", "copies(copies(cycle(4),2),3)"] {
            let spec: GraphSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("cycle(2)".parse::<GraphSpec>().is_err());
        assert!("copies(kdd(2),0)".parse::<GraphSpec>().is_err());
        assert!("wheel(5)".parse::<GraphSpec>().is_err());
        assert_eq!("copies(heawood,3)".parse::<GraphSpec>().unwrap().vertex_count(), 42);
    }

    #[test]
    fn line_graph_of_k4_is_octahedron() {
        let k4 = construct(&GraphSpec::Clique(4)).unwrap();
        let l = k4.line_graph();
        assert_eq!(l.n(), 6);
        assert!(l.check_regular(4));
        // Octahedron: complement of a perfect matching on 6 vertices.
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                if !(u % 3 == v % 3) {
                    edges.push((u, v));
                }
            }
        }
        let octa = Graph::from_edges(6, &edges).unwrap();
        assert!(l.is_isomorphic(&octa));
        // Brute force: adjacency iff the two edges share an endpoint.
        let es: Vec<_> = k4.edges().collect();
        for i in 0..es.len() {
            for j in 0..es.len() {
                let share = i != j
                    && (es[i].0 == es[j].0
                        || es[i].0 == es[j].1
                        || es[i].1 == es[j].0
                        || es[i].1 == es[j].1);
                assert_eq!(l.has_edge(i, j), share);
            }
        }
    }

    #[test]
    fn line_graph_regularity() {
        let c7 = construct(&GraphSpec::Cycle(7)).unwrap();
        assert!(c7.line_graph().is_isomorphic(&c7));
        let heawood = construct(&GraphSpec::Heawood).unwrap();
        let l = heawood.line_graph();
        assert_eq!(l.n(), 21);
        assert!(l.check_regular(4));
        assert_eq!(l.girth(), Girth::Finite(3));
    }

    #[test]
    fn split_examples() {
        let c4 = construct(&GraphSpec::Cycle(4)).unwrap();
        let c8 = construct(&GraphSpec::Cycle(8)).unwrap();
        let h28 = c4.copies(2);
        assert_eq!(split_by_reference(&h28, &c4).alpha, BigRational::zero());
        assert_eq!(split_by_reference(&c8, &c4).alpha, BigRational::one());
        let mixed = Graph::disjoint_union(&[&c4, &c8]);
        let split = split_by_reference(&mixed, &c4);
        assert_eq!(split.alpha, BigRational::new(8.into(), 12.into()));
        assert!(split.g0.is_isomorphic(&c8));
        assert!(split.gh.is_isomorphic(&c4));
    }

    #[test]
    fn isomorphism_distinguishes_cubic_pairs() {
        // The two cubic graphs on 6 vertices.
        let k33 = construct(&GraphSpec::CompleteBipartite(3)).unwrap();
        let prism = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        assert!(!k33.is_isomorphic(&prism));
        let relabelled = Graph::from_edges(
            6,
            &[(5, 4), (4, 3), (3, 5), (2, 1), (1, 0), (0, 2), (5, 0), (4, 2), (3, 1)],
        )
        .unwrap();
        assert!(prism.is_isomorphic(&relabelled));
    }

    #[test]
    fn union_grouping_and_counts() {
        let c4 = construct(&GraphSpec::Cycle(4)).unwrap();
        let c5 = construct(&GraphSpec::Cycle(5)).unwrap();
        let g = Graph::disjoint_union(&[&c4, &c5, &c4]);
        let u = GraphUnion::from_graph(&g);
        assert_eq!(u.parts().len(), 2);
        assert_eq!(u.vertex_count(), BigUint::from(13u32));
        assert_eq!(u.regular_degree(), Some(2));
        let big = GraphUnion::copies(&c4, BigUint::from(10u32).pow(13));
        assert_eq!(big.vertex_count(), BigUint::from(4u32) * BigUint::from(10u32).pow(13));
        assert!(u.to_graph(64).unwrap().is_isomorphic(&g));
    }
}
