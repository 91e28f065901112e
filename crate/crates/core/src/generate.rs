//! Seeded random plane instances.
//!
//! Nodes are distinct points on a 0..=100 integer grid. Candidate pipes are
//! all point pairs, shortest first, kept when they neither cross a kept
//! pipe nor pass through a point; this yields a triangulation. A minimum
//! spanning tree of it is always kept, and further triangulation pipes are
//! drawn at random until the requested count is reached. Demands are
//! integers uniform in 1..=20 l/s and one random node is the source.
//!
//! The same parameters always give the same network.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netmodel::Network;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub nodes: usize,
    pub edges: usize,
    pub seed: u64,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GenError {
    #[error("need at least 2 nodes and between nodes-1 and 3*nodes-6 pipes")]
    Shape,
    #[error("no drawing with {0} pipes found")]
    Exhausted(usize),
}

type Pt = [i64; 2];

fn orient(a: Pt, b: Pt, c: Pt) -> i64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(p: Pt, a: Pt, b: Pt) -> bool {
    orient(a, b, p) == 0
        && p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

fn cross(a: Pt, b: Pt, c: Pt, d: Pt) -> bool {
    let (o1, o2) = (orient(a, b, c).signum(), orient(a, b, d).signum());
    let (o3, o4) = (orient(c, d, a).signum(), orient(c, d, b).signum());
    o1 * o2 < 0 && o3 * o4 < 0
}

fn triangulate(pts: &[Pt]) -> Vec<(usize, usize)> {
    let n = pts.len();
    let mut pairs: Vec<(i64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (dx, dy) = (pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
            pairs.push((dx * dx + dy * dy, i, j));
        }
    }
    pairs.sort();
    let mut kept: Vec<(usize, usize)> = Vec::new();
    for (_, i, j) in pairs {
        let (a, b) = (pts[i], pts[j]);
        let blocked = (0..n).any(|k| k != i && k != j && on_segment(pts[k], a, b))
            || kept.iter().any(|&(k, l)| cross(a, b, pts[k], pts[l]));
        if !blocked {
            kept.push((i, j));
        }
    }
    kept
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

pub fn generate(params: GenParams) -> Result<Network, GenError> {
    let GenParams {
        nodes: n,
        edges: m,
        seed,
    } = params;
    if n < 2 || m + 1 < n || (n >= 3 && m > 3 * n - 6) || (n == 2 && m != 1) {
        return Err(GenError::Shape);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let mut pts: Vec<Pt> = Vec::with_capacity(n);
        while pts.len() < n {
            let p = [rng.random_range(0..=100), rng.random_range(0..=100)];
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let tri = triangulate(&pts);
        if tri.len() < m {
            continue;
        }
        // shortest-first order makes this Kruskal
        let mut parent: Vec<usize> = (0..n).collect();
        let mut chosen = Vec::with_capacity(m);
        let mut spare = Vec::new();
        for &(i, j) in &tri {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
                chosen.push((i, j));
            } else {
                spare.push((i, j));
            }
        }
        spare.shuffle(&mut rng);
        chosen.extend(spare.into_iter().take(m - chosen.len()));
        chosen.sort();

        let source = rng.random_range(0..n) + 1;
        let mut b = Network::builder()
            .name(format!("random-n{n}-m{m}-s{seed}"))
            .nodes(1..=n)
            .source(source);
        for (k, p) in pts.iter().enumerate() {
            b = b.coord(k + 1, p[0] as f64, p[1] as f64);
        }
        for (i, j) in chosen {
            let w = rng.random_range(1..=20u32);
            b = b.edge(format!("e{}_{}", i + 1, j + 1), i + 1, j + 1, w as f64);
        }
        return Ok(b.build().expect("generated network is valid"));
    }
    Err(GenError::Exhausted(m))
}

/// `count` instances with 5 to 8 pipes, seeds `seed`, `seed+1`, ...
pub fn corpus(count: usize, seed: u64) -> Vec<Network> {
    (0..count as u64)
        .map(|i| {
            let s = seed.wrapping_add(i);
            let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x5eed);
            let edges = rng.random_range(5..=8);
            let nodes = rng.random_range((edges + 8) / 3..=edges);
            generate(GenParams {
                nodes,
                edges,
                seed: s,
            })
            .expect("corpus shape is valid")
        })
        .collect()
}
