//! Small-graph corpus: every graph on `n ≤ 7` vertices up to isomorphism.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_CORPUS_N: usize = 7;

/// Canonical edge mask: the smallest edge bitmask over all relabelings that
/// list vertices in nondecreasing degree order. Pair `{i, j}` (0-based,
/// `i < j`) owns bit `j(j−1)/2 + i`.
pub fn canonical_mask(g: &Graph) -> u64 {
    let n = g.n();
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&v| g.degree(v));
    // blocks of equal degree; only permutations inside blocks are tried
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || g.degree(order[k]) != g.degree(order[start]) {
            blocks.push((start, k));
            start = k;
        }
    }
    let mut best = u64::MAX;
    let mut pos = order.clone();
    permute_blocks(g, &blocks, 0, &mut pos, &mut best);
    best
}

fn permute_blocks(
    g: &Graph,
    blocks: &[(usize, usize)],
    b: usize,
    pos: &mut Vec<usize>,
    best: &mut u64,
) {
    if b == blocks.len() {
        // pos[k] is the original vertex placed at slot k
        let mut mask = 0u64;
        for j in 1..pos.len() {
            for i in 0..j {
                if g.has_edge(pos[i], pos[j]) {
                    mask |= 1 << (j * (j - 1) / 2 + i);
                }
            }
        }
        *best = (*best).min(mask);
        return;
    }
    let (lo, hi) = blocks[b];
    heap_permutations(pos, lo, hi - lo, &mut |p| permute_blocks(g, blocks, b + 1, p, best));
}

fn heap_permutations(
    v: &mut Vec<usize>,
    lo: usize,
    k: usize,
    f: &mut dyn FnMut(&mut Vec<usize>),
) {
    if k <= 1 {
        f(v);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(v, lo, k - 1, f);
        if k % 2 == 0 {
            v.swap(lo + i, lo + k - 1);
        } else {
            v.swap(lo, lo + k - 1);
        }
    }
    heap_permutations(v, lo, k - 1, f);
}

fn from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if mask >> (j * (j - 1) / 2 + i) & 1 == 1 {
                edges.push((i + 1, j + 1));
            }
        }
    }
    Graph::new(n, &edges).expect("mask encodes a simple graph")
}

/// All graphs on exactly `n` vertices up to isomorphism, ordered by edge
/// count and then canonical mask. Each graph is returned in canonical labeling.
pub fn graphs_on(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > MAX_CORPUS_N {
        return Err(Error::SizeLimit {
            what: "corpus vertex count",
            got: n,
            limit: MAX_CORPUS_N,
        });
    }
    let mut level: BTreeSet<u64> = BTreeSet::from([0]);
    for k in 2..=n {
        let mut next = BTreeSet::new();
        for &mask in &level {
            let base = from_mask(k - 1, mask);
            for nb in 0u32..(1 << (k - 1)) {
                let mut edges = base.edges().to_vec();
                edges.extend((1..k).filter(|&v| nb >> (v - 1) & 1 == 1).map(|v| (v, k)));
                let g = Graph::new(k, &edges).expect("valid extension");
                next.insert(canonical_mask(&g));
            }
        }
        level = next;
    }
    let mut graphs: Vec<Graph> = level.into_iter().map(|m| from_mask(n, m)).collect();
    graphs.sort_by_key(|g| (g.edge_count(), canonical_mask(g)));
    Ok(graphs)
}

/// All graphs with `1 ≤ n ≤ max_n` vertices; connected ones only if asked.
pub fn corpus(max_n: usize, connected_only: bool) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(
            graphs_on(n)?
                .into_iter()
                .filter(|g| !connected_only || g.is_connected()),
        );
    }
    Ok(out)
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && canonical_mask(a) == canonical_mask(b)
}
