//! Small labelled graphs, Ursell functions, and the catalogue of all
//! connected labelled graphs on `{0..j-1}` for `j <= j_max`.
//!
//! Edges of a [`SmallGraph`] on `j` vertices are bits of a `u32`, one per pair
//! in lexicographic order `(0,1), (0,2), …, (0,j-1), (1,2), …`.

use std::io::{BufRead, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest `j` a catalogue may be built for (`C(7,2) = 21` edge bits).
pub const MAX_CATALOG_J: usize = 7;
pub const DEFAULT_J_MAX: usize = 7;
/// Largest vertex count a [`SmallGraph`] can hold.
pub const MAX_SMALL_J: usize = 8;

pub fn pair_count(j: usize) -> usize {
    j * j.saturating_sub(1) / 2
}

/// Bit position of the pair `{a, b}` for graphs on `j` vertices.
pub fn pair_index(j: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    a * (2 * j - a - 1) / 2 + (b - a - 1)
}

/// All pairs in bit order.
pub fn pairs(j: usize) -> Vec<(usize, usize)> {
    (0..j).flat_map(|a| (a + 1..j).map(move |b| (a, b))).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SmallGraph {
    j: u8,
    mask: u32,
}

impl SmallGraph {
    pub fn from_mask(j: usize, mask: u32) -> Self {
        assert!(j <= MAX_SMALL_J, "small graphs hold at most {MAX_SMALL_J} vertices");
        debug_assert!(pair_count(j) == 32 || mask >> pair_count(j) == 0);
        SmallGraph { j: j as u8, mask }
    }

    pub fn from_edges(j: usize, edges: &[(usize, usize)]) -> Self {
        let mut mask = 0u32;
        for &(a, b) in edges {
            assert!(a != b && a < j && b < j, "bad edge ({a},{b}) for {j} vertices");
            mask |= 1 << pair_index(j, a, b);
        }
        SmallGraph::from_mask(j, mask)
    }

    pub fn from_graph(g: &Graph) -> Result<Self> {
        if g.n() > MAX_SMALL_J {
            return Err(Error::Unsupported(format!(
                "small graphs hold at most {MAX_SMALL_J} vertices, got {}",
                g.n()
            )));
        }
        Ok(SmallGraph::from_edges(g.n(), &g.edges().collect::<Vec<_>>()))
    }

    pub fn single_vertex() -> Self {
        SmallGraph::from_mask(1, 0)
    }

    pub fn edge() -> Self {
        SmallGraph::from_edges(2, &[(0, 1)])
    }

    pub fn cycle(len: usize) -> Self {
        let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        SmallGraph::from_edges(len, &edges)
    }

    /// Path on `j` vertices.
    pub fn path(j: usize) -> Self {
        let edges: Vec<_> = (1..j).map(|i| (i - 1, i)).collect();
        SmallGraph::from_edges(j, &edges)
    }

    pub fn complete(j: usize) -> Self {
        SmallGraph::from_edges(j, &pairs(j))
    }

    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        SmallGraph::from_edges(leaves + 1, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.j as usize
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn edge_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.mask >> pair_index(self.vertex_count(), a, b) & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        pairs(self.vertex_count())
            .into_iter()
            .enumerate()
            .filter(|(i, _)| self.mask >> i & 1 == 1)
            .map(|(_, p)| p)
            .collect()
    }

    /// Neighbourhood bitmask of each vertex.
    pub fn adjacency(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.vertex_count()];
        for (a, b) in self.edges() {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let j = self.vertex_count();
        j <= 1 || mask_connected(&self.adjacency(), (1u32 << j) - 1)
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count() >= 1 && self.edge_count() + 1 == self.vertex_count() && self.is_connected()
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.vertex_count(), &self.edges()).expect("small graph edges are valid")
    }

    /// Connected components as vertex bitmasks.
    pub fn components(&self) -> Vec<u32> {
        let adj = self.adjacency();
        let mut left = (1u32 << self.vertex_count()) - 1;
        let mut out = Vec::new();
        while left != 0 {
            let comp = reach(&adj, left.trailing_zeros() as usize, left);
            out.push(comp);
            left &= !comp;
        }
        out
    }

    /// Subgraph induced by the vertex bitmask, relabelled in increasing order.
    pub fn induced(&self, vertices: u32) -> SmallGraph {
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|v| vertices >> v & 1 == 1).collect();
        let mut edges = Vec::new();
        for (x, &a) in keep.iter().enumerate() {
            for (y, &b) in keep.iter().enumerate().skip(x + 1) {
                if self.has_edge(a, b) {
                    edges.push((x, y));
                }
            }
        }
        SmallGraph::from_edges(keep.len(), &edges)
    }

    /// Number of automorphisms, by brute force over all permutations.
    pub fn automorphism_count(&self) -> u64 {
        let j = self.vertex_count();
        let edges = self.edges();
        permutations(j)
            .iter()
            .filter(|p| edges.iter().all(|&(a, b)| self.has_edge(p[a], p[b])))
            .count() as u64
    }
}

fn reach(adj: &[u32], start: usize, within: u32) -> u32 {
    let mut seen = 1u32 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[v] & within & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen
}

fn mask_connected(adj: &[u32], vertices: u32) -> bool {
    vertices == 0 || reach(adj, vertices.trailing_zeros() as usize, vertices) == vertices
}

/// All permutations of `0..j` in lexicographic order.
pub fn permutations(j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..j).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..j).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let k = (i..j).rev().find(|&k| p[k] > p[i - 1]).unwrap();
        p.swap(i - 1, k);
        p[i..].reverse();
    }
}

/// `Σ (-1)^{|A|}` over edge sets `A` that are spanning and connected on the
/// vertex set `vertices`, for the graph with neighbourhood masks `adj`.
///
/// Uses `Σ_{A ⊆ E(S)} (-1)^{|A|} = [E(S) = ∅]` grouped by the component of
/// the lowest vertex, giving an `O(3^|S|)` recursion over subsets.
pub fn connected_signed_sum(adj: &[u32], vertices: u32) -> i64 {
    let j = adj.len();
    let full = (1usize << j) - 1;
    let independent = |s: u32| (0..j).all(|v| s >> v & 1 == 0 || adj[v] & s == 0);
    let mut conn = vec![0i64; full + 1];
    let mut subsets: Vec<u32> = (1..=full as u32).filter(|s| s & !vertices == 0).collect();
    subsets.sort_by_key(|s| s.count_ones());
    for s in subsets {
        let low = s & s.wrapping_neg();
        let mut value = independent(s) as i64;
        // proper subsets T of s containing the lowest vertex
        let rest = s & !low;
        let mut sub = rest;
        loop {
            let t = sub | low;
            if t != s && independent(s & !t) {
                value -= conn[t as usize];
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        conn[s as usize] = value;
    }
    conn[vertices as usize]
}

pub fn factorial(j: usize) -> BigInt {
    (1..=j).map(BigInt::from).product()
}

/// Ursell function `φ(F) = (1/|V(F)|!) Σ_{A spanning connected} (-1)^{|A|}`.
pub fn ursell(f: &SmallGraph) -> BigRational {
    let j = f.vertex_count();
    if j == 0 {
        return BigRational::one();
    }
    let signed = connected_signed_sum(&f.adjacency(), ((1u64 << j) - 1) as u32);
    BigRational::new(BigInt::from(signed), factorial(j))
}

/// One isomorphism class of connected labelled graphs on `j` vertices.
#[derive(Clone, Debug)]
pub struct CatalogClass {
    /// The numerically smallest labelled mask in the class.
    pub representative: SmallGraph,
    /// Number of labelled graphs on `{0..j-1}` in the class (`j!/|Aut|`).
    pub labeled_count: u64,
    pub edge_count: usize,
    pub ursell: BigRational,
    pub is_tree: bool,
}

/// All connected labelled graphs on `j` vertices.
#[derive(Clone, Debug)]
pub struct CatalogLevel {
    pub j: usize,
    /// Edge masks in increasing order.
    pub masks: Vec<u32>,
    /// Class index of each mask.
    pub class_of: Vec<u32>,
    pub classes: Vec<CatalogClass>,
}

impl CatalogLevel {
    pub fn labeled_count(&self) -> usize {
        self.masks.len()
    }

    pub fn tree_count(&self) -> u64 {
        self.classes
            .iter()
            .filter(|c| c.is_tree)
            .map(|c| c.labeled_count)
            .sum()
    }

    pub fn build(j: usize) -> Result<Self> {
        if j == 0 || j > MAX_CATALOG_J {
            return Err(Error::Unsupported(format!(
                "catalogue level j={j} outside 1..={MAX_CATALOG_J}"
            )));
        }
        let e = pair_count(j);
        let pair_list = pairs(j);
        // For each permutation, where each edge bit goes.
        let perm_maps: Vec<Vec<u8>> = permutations(j)
            .iter()
            .map(|p| {
                pair_list
                    .iter()
                    .map(|&(a, b)| pair_index(j, p[a], p[b]) as u8)
                    .collect()
            })
            .collect();
        let total = 1usize << e;
        let mut visited = vec![false; total];
        let mut records: Vec<(u32, u32)> = Vec::new();
        let mut classes = Vec::new();
        let full = ((1u64 << j) - 1) as u32;
        for mask in 0..total as u32 {
            if visited[mask as usize] {
                continue;
            }
            let f = SmallGraph::from_mask(j, mask);
            if !mask_connected(&f.adjacency(), full) {
                continue;
            }
            let class = classes.len() as u32;
            let mut size = 0u64;
            for map in &perm_maps {
                let mut image = 0u32;
                let mut bits = mask;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    image |= 1 << map[b];
                    bits &= bits - 1;
                }
                if !visited[image as usize] {
                    visited[image as usize] = true;
                    records.push((image, class));
                    size += 1;
                }
            }
            classes.push(CatalogClass {
                representative: f,
                labeled_count: size,
                edge_count: f.edge_count(),
                ursell: ursell(&f),
                is_tree: f.edge_count() + 1 == j,
            });
        }
        records.sort_unstable();
        Ok(CatalogLevel {
            j,
            masks: records.iter().map(|r| r.0).collect(),
            class_of: records.iter().map(|r| r.1).collect(),
            classes,
        })
    }

    pub fn ursell_of(&self, index: usize) -> &BigRational {
        &self.classes[self.class_of[index] as usize].ursell
    }
}

/// Connected labelled graphs on `j` vertices for every `1 <= j <= j_max`.
#[derive(Clone, Debug)]
#[derive(Default)]
pub struct SmallGraphCatalog {
    levels: Vec<CatalogLevel>,
}

const CACHE_MAGIC: &str = "polyclust-catalog";
const CACHE_VERSION: u32 = 1;

impl SmallGraphCatalog {
    pub fn build(j_max: usize) -> Result<Self> {
        let levels = crate::par::map_range(j_max, |i| CatalogLevel::build(i + 1))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(SmallGraphCatalog { levels })
    }

    pub fn j_max(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, j: usize) -> Option<&CatalogLevel> {
        j.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    /// Writes the cache: a header line, then one record per labelled graph:
    /// `j mask ursell_num/ursell_den class`.
    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CACHE_MAGIC} v{CACHE_VERSION} jmax={}", self.j_max())?;
        for level in &self.levels {
            for (i, &mask) in level.masks.iter().enumerate() {
                let u = level.ursell_of(i);
                writeln!(w, "{} {} {}/{} {}", level.j, mask, u.numer(), u.denom(), level.class_of[i])?;
            }
        }
        Ok(())
    }

    pub fn read_cache<R: BufRead>(r: R) -> Result<Self> {
        let bad = |line: usize, what: &str| Error::Cache(format!("line {line}: {what}"));
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| bad(1, "missing header"))??;
        let mut parts = header.split_whitespace();
        if parts.next() != Some(CACHE_MAGIC) || parts.next() != Some(&format!("v{CACHE_VERSION}")) {
            return Err(bad(1, "unrecognised header"));
        }
        let j_max: usize = parts
            .next()
            .and_then(|p| p.strip_prefix("jmax="))
            .and_then(|p| p.parse().ok())
            .filter(|&j| (1..=MAX_CATALOG_J).contains(&j))
            .ok_or_else(|| bad(1, "bad jmax"))?;
        let mut levels: Vec<CatalogLevel> = (1..=j_max)
            .map(|j| CatalogLevel {
                j,
                masks: Vec::new(),
                class_of: Vec::new(),
                classes: Vec::new(),
            })
            .collect();
        for (i, line) in lines.enumerate() {
            let line = line?;
            let lineno = i + 2;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(bad(lineno, "expected 4 fields"));
            }
            let j: usize = f[0].parse().map_err(|_| bad(lineno, "bad j"))?;
            let mask: u32 = f[1].parse().map_err(|_| bad(lineno, "bad mask"))?;
            let (num, den) = f[2].split_once('/').ok_or_else(|| bad(lineno, "bad ursell"))?;
            let ursell = BigRational::new(
                num.parse().map_err(|_| bad(lineno, "bad ursell numerator"))?,
                den.parse().map_err(|_| bad(lineno, "bad ursell denominator"))?,
            );
            let class: usize = f[3].parse().map_err(|_| bad(lineno, "bad class"))?;
            let level = levels
                .get_mut(j.wrapping_sub(1))
                .ok_or_else(|| bad(lineno, "j out of range"))?;
            if mask >> pair_count(j) != 0 && pair_count(j) < 32 {
                return Err(bad(lineno, "mask out of range"));
            }
            if class > level.classes.len() {
                return Err(bad(lineno, "class index out of order"));
            }
            let g = SmallGraph::from_mask(j, mask);
            if class == level.classes.len() {
                level.classes.push(CatalogClass {
                    representative: g,
                    labeled_count: 0,
                    edge_count: g.edge_count(),
                    ursell: ursell.clone(),
                    is_tree: g.edge_count() + 1 == j,
                });
            }
            let c = &mut level.classes[class];
            c.labeled_count += 1;
            if mask < c.representative.mask() {
                c.representative = g;
            }
            if c.ursell != ursell || c.edge_count != g.edge_count() {
                return Err(bad(lineno, "record disagrees with its class"));
            }
            level.masks.push(mask);
            level.class_of.push(class as u32);
        }
        for level in &levels {
            if level.masks.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Cache(format!("level {} masks not strictly increasing", level.j)));
            }
        }
        Ok(SmallGraphCatalog { levels })
    }

    /// Loads `catalog-j{j_max}.txt` from `dir`, building and writing it when
    /// absent or unreadable.
    pub fn load_or_build(dir: &Path, j_max: usize) -> Result<Self> {
        let path = dir.join(format!("catalog-j{j_max}.txt"));
        if let Ok(file) = std::fs::File::open(&path) {
            if let Ok(cat) = Self::read_cache(std::io::BufReader::new(file)) {
                if cat.j_max() == j_max {
                    return Ok(cat);
                }
            }
        }
        let cat = Self::build(j_max)?;
        std::fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        {
            let mut w = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
            cat.write_cache(&mut w)?;
            w.flush()?;
        }
        std::fs::rename(&tmp, &path)?;
        Ok(cat)
    }
}

/// Brute-force Ursell value: enumerate every edge subset. Exponential in the
/// edge count; exposed for cross-checking.
pub fn ursell_by_enumeration(f: &SmallGraph) -> BigRational {
    let j = f.vertex_count();
    let edges = f.edges();
    let full = if j == 0 { 0 } else { ((1u64 << j) - 1) as u32 };
    let mut total = 0i64;
    for a in 0u64..(1u64 << edges.len()) {
        let mut adj = vec![0u32; j];
        for (i, &(x, y)) in edges.iter().enumerate() {
            if a >> i & 1 == 1 {
                adj[x] |= 1 << y;
                adj[y] |= 1 << x;
            }
        }
        if j == 0 || mask_connected(&adj, full) {
            total += if a.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    BigRational::new(total.into(), factorial(j))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ursell_reference_values() {
        assert_eq!(ursell(&SmallGraph::single_vertex()), q(1, 1));
        assert_eq!(ursell(&SmallGraph::edge()), q(-1, 2));
        assert_eq!(ursell(&SmallGraph::path(3)), q(1, 6));
        assert_eq!(ursell(&SmallGraph::cycle(3)), q(1, 3));
        // Disconnected graphs have no spanning connected subset.
        assert_eq!(ursell(&SmallGraph::from_mask(2, 0)), q(0, 1));
    }

    #[test]
    fn ursell_recursion_matches_enumeration() {
        for j in 1..=5 {
            for mask in 0..(1u32 << pair_count(j)) {
                let f = SmallGraph::from_mask(j, mask);
                assert_eq!(ursell(&f), ursell_by_enumeration(&f), "j={j} mask={mask}");
            }
        }
    }

    #[test]
    fn catalogue_counts_small_levels() {
        let cat = SmallGraphCatalog::build(5).unwrap();
        let expected = [1usize, 1, 4, 38, 728];
        for j in 1..=5 {
            let level = cat.level(j).unwrap();
            assert_eq!(level.labeled_count(), expected[j - 1]);
            assert_eq!(level.tree_count(), (j as u64).pow(j.saturating_sub(2) as u32));
            let total: u64 = level.classes.iter().map(|c| c.labeled_count).sum();
            assert_eq!(total as usize, level.labeled_count());
            for c in &level.classes {
                let aut = c.representative.automorphism_count();
                assert_eq!(c.labeled_count * aut, (1..=j as u64).product::<u64>());
            }
        }
        // unlabelled connected graphs: 1, 1, 2, 6, 21
        let classes: Vec<usize> = (1..=5).map(|j| cat.level(j).unwrap().classes.len()).collect();
        assert_eq!(classes, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn cache_round_trip() {
        let cat = SmallGraphCatalog::build(4).unwrap();
        let mut buf = Vec::new();
        cat.write_cache(&mut buf).unwrap();
        let back = SmallGraphCatalog::read_cache(buf.as_slice()).unwrap();
        assert_eq!(back.j_max(), 4);
        for j in 1..=4 {
            let (a, b) = (cat.level(j).unwrap(), back.level(j).unwrap());
            assert_eq!(a.masks, b.masks);
            assert_eq!(a.class_of, b.class_of);
            assert_eq!(a.classes.len(), b.classes.len());
            for (x, y) in a.classes.iter().zip(&b.classes) {
                assert_eq!(x.labeled_count, y.labeled_count);
                assert_eq!(x.ursell, y.ursell);
                assert_eq!(x.representative, y.representative);
            }
        }
        let mut corrupt = String::from_utf8(buf).unwrap();
        corrupt = corrupt.replacen("v1", "v9", 1);
        assert!(SmallGraphCatalog::read_cache(corrupt.as_bytes()).is_err());
    }

    #[test]
    fn small_graph_helpers() {
        assert!(SmallGraph::path(4).is_tree());
        assert!(SmallGraph::star(3).is_tree());
        assert!(!SmallGraph::cycle(4).is_tree());
        assert_eq!(SmallGraph::cycle(5).automorphism_count(), 10);
        assert_eq!(SmallGraph::complete(4).edge_count(), 6);
        let two = SmallGraph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(two.components().len(), 2);
        assert_eq!(two.induced(0b0011), SmallGraph::edge());
        assert_eq!(permutations(4).len(), 24);
    }
}
