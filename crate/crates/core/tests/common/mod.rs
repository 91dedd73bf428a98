#![allow(dead_code)]

use polyclust_core::corpus::{connected_regular, two_regular};
use polyclust_core::{Graph, GraphSpec};

pub fn spec(s: &str) -> Graph {
    s.parse::<GraphSpec>().unwrap().construct().unwrap()
}

/// Connected cubic graphs on at most 10 vertices, 2-regular graphs on at
/// most 12, `K_{d,d}` for `d <= 5`, Petersen and Heawood.
pub fn base_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in (4..=10).step_by(2) {
        for (i, g) in connected_regular(n, 3).unwrap().into_iter().enumerate() {
            out.push((format!("cubic{n}#{i}"), g));
        }
    }
    for n in 3..=12 {
        for (i, g) in two_regular(n).into_iter().enumerate() {
            out.push((format!("2reg{n}#{i}"), g));
        }
    }
    for d in 1..=5 {
        out.push((format!("kdd({d})"), spec(&format!("kdd({d})"))));
    }
    out.push(("petersen".into(), spec("petersen")));
    out.push(("heawood".into(), spec("heawood")));
    out
}

/// Up to `count` connected `d`-regular graphs, smallest first.
pub fn regular_sample(d: usize, count: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    let mut n = d + 1;
    while out.len() < count && n <= 12 {
        if d == 2 {
            out.extend(two_regular(n));
        } else {
            out.extend(connected_regular(n, d).unwrap());
        }
        n += 1;
    }
    out.truncate(count);
    out
}

/// All connected cubic graphs on at most `n_max` vertices.
pub fn cubic_upto(n_max: usize) -> Vec<Graph> {
    (4..=n_max)
        .step_by(2)
        .flat_map(|n| connected_regular(n, 3).unwrap())
        .collect()
}

/// A uniformly paired random `d`-regular simple graph on `n` vertices
/// (configuration model with rejection).
pub fn random_regular<R: rand::Rng>(n: usize, d: usize, rng: &mut R) -> Graph {
    use rand::seq::SliceRandom;
    assert!((n * d).is_multiple_of(2) && d < n);
    loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        stubs.shuffle(rng);
        let edges: Vec<(usize, usize)> = stubs.chunks(2).map(|p| (p[0], p[1])).collect();
        if let Ok(g) = Graph::from_edges(n, &edges) {
            if g.check_regular(d) {
                return g;
            }
        }
    }
}
