//! Small exhaustive corpora of regular graphs.
//!
//! `two_regular` lists 2-regular graphs as cycle-length partitions. The general
//! generator enumerates connected `d`-regular graphs by breadth-first
//! labelling: vertices are processed in label order and each one's missing
//! neighbours are either already-labelled vertices or fresh consecutive
//! labels. Every connected graph has such labellings, and a labelling is kept
//! only if its adjacency code is the largest over all of them, so each
//! isomorphism class appears exactly once.

use crate::canonical::integer_partitions;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest vertex count the generator accepts.
pub const MAX_GENERATED: usize = 20;

/// All 2-regular graphs on `n` vertices, one per multiset of cycle lengths.
pub fn two_regular(n: usize) -> Vec<Graph> {
    integer_partitions(n)
        .into_iter()
        .filter(|parts| parts.iter().all(|&p| p >= 3))
        .map(|parts| {
            let mut edges = Vec::new();
            let mut base = 0;
            for len in parts.iter().rev() {
                for i in 0..*len {
                    edges.push((base + i, base + (i + 1) % len));
                }
                base += len;
            }
            Graph::from_edges(n, &edges).expect("cycle edges are simple")
        })
        .collect()
}

/// Connected `d`-regular graphs on `n` vertices, up to isomorphism.
pub fn connected_regular(n: usize, d: usize) -> Result<Vec<Graph>> {
    connected_regular_with_girth(n, d, 3)
}

/// Connected `d`-regular graphs on `n` vertices with girth at least `girth_min`.
pub fn connected_regular_with_girth(n: usize, d: usize, girth_min: usize) -> Result<Vec<Graph>> {
    if n > MAX_GENERATED {
        return Err(Error::TooLarge {
            vertices: n,
            limit: MAX_GENERATED,
        });
    }
    if n == 0 || d >= n || (n * d) % 2 == 1 {
        return Ok(Vec::new());
    }
    let mut walk = Walk {
        n,
        d,
        girth_min: girth_min.max(3),
        adj: vec![0; n],
        deg: vec![0; n],
        out: Vec::new(),
    };
    walk.process(0, 1);
    let keep = crate::par::map(&walk.out, |adj| is_canonical(adj));
    Ok(walk
        .out
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(adj, _)| to_graph(adj))
        .collect())
}

/// All `d`-regular graphs on `n` vertices (connected or not), up to
/// isomorphism, as multisets of connected components.
pub fn regular(n: usize, d: usize) -> Result<Vec<Graph>> {
    let mut by_size: Vec<Vec<Graph>> = vec![Vec::new(); n + 1];
    for (m, slot) in by_size.iter_mut().enumerate().skip(1) {
        *slot = connected_regular(m, d)?;
    }
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    collect_unions(&by_size, n, (usize::MAX, usize::MAX), &mut chosen, &mut out);
    Ok(out)
}

fn collect_unions(
    by_size: &[Vec<Graph>],
    rest: usize,
    max: (usize, usize),
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<Graph>,
) {
    if rest == 0 {
        let parts: Vec<&Graph> = chosen.iter().map(|&(s, i)| &by_size[s][i]).collect();
        out.push(Graph::disjoint_union(&parts));
        return;
    }
    // Components in nonincreasing (size, index) order.
    for size in (1..=rest.min(max.0)).rev() {
        for i in 0..by_size[size].len() {
            if (size, i) > max {
                continue;
            }
            chosen.push((size, i));
            collect_unions(by_size, rest - size, (size, i), chosen, out);
            chosen.pop();
        }
    }
}

fn to_graph(adj: &[u64]) -> Graph {
    let n = adj.len();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).filter(move |&v| adj[u] >> v & 1 == 1).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges).expect("generated graphs are simple")
}

struct Walk {
    n: usize,
    d: usize,
    girth_min: usize,
    adj: Vec<u64>,
    deg: Vec<usize>,
    out: Vec<Vec<u64>>,
}

impl Walk {
    /// Fill the remaining slots of vertex `i`; labels below `next` are in use.
    fn process(&mut self, i: usize, next: usize) {
        if i == self.n {
            if next == self.n {
                self.out.push(self.adj.clone());
            }
            return;
        }
        if i >= next {
            return;
        }
        let need = self.d - self.deg[i];
        let candidates: Vec<usize> = (i + 1..next)
            .filter(|&j| self.deg[j] < self.d && self.adj[i] >> j & 1 == 0)
            .collect();
        self.choose(i, next, need, &candidates, 0);
    }

    fn choose(&mut self, i: usize, next: usize, need: usize, candidates: &[usize], from: usize) {
        // Slots left over go to fresh vertices.
        if next + need <= self.n {
            let fresh: Vec<usize> = (next..next + need).collect();
            for &v in &fresh {
                self.link(i, v);
            }
            self.process(i + 1, next + need);
            for &v in &fresh {
                self.unlink(i, v);
            }
        }
        if need == 0 {
            return;
        }
        for (idx, &j) in candidates.iter().enumerate().skip(from) {
            if !self.girth_allows(i, j) {
                continue;
            }
            self.link(i, j);
            self.choose(i, next, need - 1, candidates, idx + 1);
            self.unlink(i, j);
        }
    }

    fn link(&mut self, a: usize, b: usize) {
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        self.deg[a] += 1;
        self.deg[b] += 1;
    }

    fn unlink(&mut self, a: usize, b: usize) {
        self.adj[a] &= !(1 << b);
        self.adj[b] &= !(1 << a);
        self.deg[a] -= 1;
        self.deg[b] -= 1;
    }

    /// Adding `ab` closes a cycle of length `dist(a,b) + 1`.
    fn girth_allows(&self, a: usize, b: usize) -> bool {
        let limit = self.girth_min - 2;
        let mut seen = 1u64 << a;
        let mut frontier = 1u64 << a;
        for _ in 0..limit {
            let mut reach = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                reach |= self.adj[v];
            }
            frontier = reach & !seen;
            seen |= reach;
            if seen >> b & 1 == 1 {
                return false;
            }
        }
        true
    }
}

/// True when no breadth-first relabelling yields a larger row sequence.
fn is_canonical(adj: &[u64]) -> bool {
    let n = adj.len();
    let code: Vec<u64> = adj.to_vec();
    let mut search = Canon {
        adj,
        code: &code,
        label: vec![usize::MAX; n],
        order: Vec::with_capacity(n),
    };
    for root in 0..n {
        search.label.iter_mut().for_each(|l| *l = usize::MAX);
        search.order.clear();
        search.label[root] = 0;
        search.order.push(root);
        if search.beats(0, 1) {
            return false;
        }
    }
    true
}

struct Canon<'a> {
    adj: &'a [u64],
    code: &'a [u64],
    label: Vec<usize>,
    order: Vec<usize>,
}

impl Canon<'_> {
    /// Extends the labelling from position `pos`; true if some completion has
    /// a strictly larger code.
    fn beats(&mut self, pos: usize, next: usize) -> bool {
        if pos == self.adj.len() {
            return false;
        }
        if pos >= self.order.len() {
            // disconnected; cannot happen for generated graphs
            return false;
        }
        let v = self.order[pos];
        let mut fresh = Vec::new();
        let mut row = 0u64;
        let mut m = self.adj[v];
        while m != 0 {
            let w = m.trailing_zeros() as usize;
            m &= m - 1;
            if self.label[w] == usize::MAX {
                fresh.push(w);
            } else {
                row |= 1 << self.label[w];
            }
        }
        for k in 0..fresh.len() {
            row |= 1 << (next + k);
        }
        match row.cmp(&self.code[pos]) {
            std::cmp::Ordering::Greater => return true,
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Equal => {}
        }
        let mut perm = fresh.clone();
        permute(&mut perm, 0, &mut |p| {
            for (k, &w) in p.iter().enumerate() {
                self.label[w] = next + k;
                self.order.push(w);
            }
            let r = self.beats(pos + 1, next + p.len());
            for &w in p {
                self.label[w] = usize::MAX;
                self.order.pop();
            }
            r
        })
    }
}

/// Visits every permutation of `items[k..]`, stopping at the first `true`.
fn permute(items: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k + 1 >= items.len() {
        return f(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        let hit = permute(items, k + 1, f);
        items.swap(k, i);
        if hit {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphSpec;

    fn pairwise_distinct(graphs: &[Graph]) -> bool {
        (0..graphs.len()).all(|i| (i + 1..graphs.len()).all(|j| !graphs[i].is_isomorphic(&graphs[j])))
    }

    #[test]
    fn cubic_counts() {
        let counts: Vec<usize> = [4, 6, 8, 10, 12]
            .iter()
            .map(|&n| connected_regular(n, 3).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 2, 5, 19, 85]);
        let ten = connected_regular(10, 3).unwrap();
        assert!(pairwise_distinct(&ten));
        assert!(ten.iter().all(|g| g.is_connected() && g.check_regular(3)));
    }

    #[test]
    fn other_degrees() {
        // quartic: n=5..9 gives 1, 1, 2, 6, 16
        let counts: Vec<usize> = (5..=9).map(|n| connected_regular(n, 4).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 16]);
        assert_eq!(connected_regular(8, 2).unwrap().len(), 1);
        assert!(connected_regular(7, 3).unwrap().is_empty());
        assert_eq!(connected_regular(6, 5).unwrap().len(), 1);
    }

    #[test]
    fn girth_filter() {
        let petersen = GraphSpec::Petersen.construct().unwrap();
        let g5 = connected_regular_with_girth(10, 3, 5).unwrap();
        assert_eq!(g5.len(), 1);
        assert!(g5[0].is_isomorphic(&petersen));
        let heawood = GraphSpec::Heawood.construct().unwrap();
        let g6 = connected_regular_with_girth(14, 3, 6).unwrap();
        assert_eq!(g6.len(), 1);
        assert!(g6[0].is_isomorphic(&heawood));
        // cubic girth >= 5 on 14 vertices: 9 graphs
        assert_eq!(connected_regular_with_girth(14, 3, 5).unwrap().len(), 9);
    }

    #[test]
    fn two_regular_routes_agree() {
        for n in 3..=12 {
            let a = two_regular(n);
            let b = regular(n, 2).unwrap();
            assert_eq!(a.len(), b.len(), "n={n}");
            assert!(a.iter().all(|g| b.iter().any(|h| g.is_isomorphic(h))));
        }
        assert_eq!(two_regular(8).len(), 3);
        assert_eq!(two_regular(12).len(), 9);
    }

    #[test]
    fn cubic_unions() {
        // cubic graphs on 8 vertices: 5 connected plus K_4 ∪ K_4
        assert_eq!(regular(8, 3).unwrap().len(), 6);
    }
}
