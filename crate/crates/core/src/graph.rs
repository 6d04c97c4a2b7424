//! Simple undirected graphs on `{1..n}` with bitmask subsets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracles;
use crate::symmat::SymMatrix;

pub const MAX_VERTICES: usize = 30;
/// Brute-force perfection test limit.
pub const MAX_PERFECT_N: usize = 10;

/// A subset `U ⊆ V`; bit `i - 1` is set iff vertex `i ∈ U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(n: usize) -> SubsetMask {
        if n >= 32 {
            SubsetMask(u32::MAX)
        } else {
            SubsetMask((1u32 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> SubsetMask {
        SubsetMask(1 << (v - 1))
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> SubsetMask {
        SubsetMask(vs.into_iter().fold(0, |m, v| m | (1 << (v - 1))))
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.0 >> (v - 1) & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// 1-based vertices in increasing order.
    pub fn vertices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut bits = self.0;
        while bits != 0 {
            out.push(bits.trailing_zeros() as usize + 1);
            bits &= bits - 1;
        }
        out
    }

    /// Incidence vector `χ_U ∈ {0,1}^n`.
    pub fn incidence(self, n: usize) -> Vec<f64> {
        (1..=n).map(|v| if self.contains(v) { 1.0 } else { 0.0 }).collect()
    }

    pub fn complement_in(self, n: usize) -> SubsetMask {
        SubsetMask(!self.0 & SubsetMask::full(n).0)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices().iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", vs.join(","))
    }
}

/// Integral weights indexed by vertices or by edges (in [`Graph::edges`] order).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVec(pub Vec<i64>);

impl WeightVec {
    pub fn ones(len: usize) -> Self {
        WeightVec(vec![1; len])
    }

    pub fn zeros(len: usize) -> Self {
        WeightVec(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&x| x as f64).collect()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `Σ_{v ∈ U} w_v` for vertex weights.
    pub fn dot_mask(&self, u: SubsetMask) -> i64 {
        u.vertices().iter().map(|&v| self.0[v - 1]).sum()
    }
}

impl From<Vec<i64>> for WeightVec {
    fn from(v: Vec<i64>) -> Self {
        WeightVec(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bipartition {
    /// One colour class of a proper 2-colouring.
    Bipartite(SubsetMask),
    /// Vertices of an odd closed walk, first vertex repeated at the end.
    OddCycle(Vec<usize>),
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Bipartite(_))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, E={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Builds a graph from 1-based edges. Rejects loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidGraph(format!(
                "vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        let mut adj = vec![0u32; n];
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidGraph(format!("edge {a}-{b} out of range 1..={n}")));
            }
            if adj[a - 1] >> (b - 1) & 1 == 1 {
                return Err(Error::InvalidGraph(format!("duplicate edge {a}-{b}")));
            }
            adj[a - 1] |= 1 << (b - 1);
            adj[b - 1] |= 1 << (a - 1);
        }
        Ok(Self::from_adjacency(adj))
    }

    pub(crate) fn from_adjacency(adj: Vec<u32>) -> Graph {
        let n = adj.len();
        let mut edges = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                if adj[i - 1] >> (j - 1) & 1 == 1 {
                    edges.push((i, j));
                }
            }
        }
        Graph { n, adj, edges }
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n, &[]).expect("valid vertex count")
    }

    pub fn complete(n: usize) -> Graph {
        Graph::empty(n).complement()
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        Graph::new(n, &edges).expect("cycle needs n >= 3")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).expect("valid path")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Pairs `{i, j}` that are not edges, `i < j`, sorted.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                if !self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i - 1] >> (j - 1) & 1 == 1
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.edges.binary_search(&key).ok()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> SubsetMask {
        SubsetMask(self.adj[v - 1])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].count_ones() as usize
    }

    pub fn vertex_set(&self) -> SubsetMask {
        SubsetMask::full(self.n)
    }

    pub fn complement(&self) -> Graph {
        let full = SubsetMask::full(self.n).0;
        let adj = (0..self.n)
            .map(|i| !self.adj[i] & full & !(1 << i))
            .collect();
        Graph::from_adjacency(adj)
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n - 1) / 2
    }

    pub fn is_clique(&self, u: SubsetMask) -> bool {
        u.vertices()
            .iter()
            .all(|&v| u.0 & !(1 << (v - 1)) & !self.adj[v - 1] == 0)
    }

    pub fn is_stable(&self, u: SubsetMask) -> bool {
        u.vertices().iter().all(|&v| self.adj[v - 1] & u.0 == 0)
    }

    pub fn is_connected(&self) -> bool {
        let full = SubsetMask::full(self.n).0;
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let mut next = 0;
            let mut bits = frontier;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                next |= self.adj[v];
                bits &= bits - 1;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen & full == full
    }

    /// Induced subgraph `G[U]`, relabelled to `1..=|U|` in increasing order.
    pub fn induced(&self, u: SubsetMask) -> Result<Graph> {
        let vs = u.vertices();
        if vs.is_empty() {
            return Err(Error::InvalidGraph("empty induced subgraph".into()));
        }
        let adj = vs
            .iter()
            .map(|&a| {
                vs.iter()
                    .enumerate()
                    .filter(|(_, &b)| self.has_edge(a, b))
                    .fold(0u32, |m, (k, _)| m | (1 << k))
            })
            .collect();
        Ok(Graph::from_adjacency(adj))
    }

    /// Relabel by `perm`: vertex `v` becomes `perm[v - 1]` (1-based).
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::dims(self.n, perm.len()));
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a - 1], perm[b - 1]))
            .collect();
        Graph::new(self.n, &edges)
    }

    fn check_edge_weights(&self, w: &WeightVec) -> Result<()> {
        if w.len() != self.edges.len() {
            return Err(Error::dims(self.edges.len(), w.len()));
        }
        Ok(())
    }

    /// Laplacian `Σ_{ij∈E} w_ij (e_i − e_j)(e_i − e_j)ᵀ`.
    pub fn laplacian(&self, w: &WeightVec) -> Result<SymMatrix> {
        self.check_edge_weights(w)?;
        let mut l = SymMatrix::zeros(self.n);
        for (&(i, j), &we) in self.edges.iter().zip(w.as_slice()) {
            let we = we as f64;
            l.add_to(i - 1, i - 1, we);
            l.add_to(j - 1, j - 1, we);
            l.add_to(i - 1, j - 1, -we);
        }
        Ok(l)
    }

    /// Weight of the edges with exactly one end in `u`.
    pub fn cut_weight(&self, w: &WeightVec, u: SubsetMask) -> Result<i64> {
        self.check_edge_weights(w)?;
        Ok(self
            .edges
            .iter()
            .zip(w.as_slice())
            .filter(|(&(i, j), _)| u.contains(i) != u.contains(j))
            .map(|(_, &we)| we)
            .sum())
    }

    /// Weighted degrees `w(δ(i))`.
    pub fn weighted_degrees(&self, w: &WeightVec) -> Result<Vec<i64>> {
        self.check_edge_weights(w)?;
        let mut d = vec![0; self.n];
        for (&(i, j), &we) in self.edges.iter().zip(w.as_slice()) {
            d[i - 1] += we;
            d[j - 1] += we;
        }
        Ok(d)
    }

    /// All nonempty cliques in increasing mask order.
    pub fn enumerate_cliques(&self) -> Vec<SubsetMask> {
        let mut out = Vec::new();
        self.extend_cliques(0, self.vertex_set().0, &mut out);
        out.sort_unstable();
        out
    }

    fn extend_cliques(&self, current: u32, candidates: u32, out: &mut Vec<SubsetMask>) {
        let mut cand = candidates;
        while cand != 0 {
            let v = cand.trailing_zeros();
            cand &= cand - 1;
            let next = current | (1 << v);
            out.push(SubsetMask(next));
            // only higher-indexed vertices, so each clique is produced once
            self.extend_cliques(next, cand & self.adj[v as usize], out);
        }
    }

    /// Inclusion-maximal cliques in increasing mask order.
    pub fn maximal_cliques(&self) -> Vec<SubsetMask> {
        let mut out = Vec::new();
        self.bron_kerbosch(0, self.vertex_set().0, 0, &mut out);
        out.sort_unstable();
        out
    }

    fn bron_kerbosch(&self, r: u32, mut p: u32, mut x: u32, out: &mut Vec<SubsetMask>) {
        if p == 0 {
            if x == 0 {
                out.push(SubsetMask(r));
            }
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut cand = p & !self.adj[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let nv = self.adj[v];
            self.bron_kerbosch(r | (1 << v), p & nv, x & nv, out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }

    /// Two-colouring by breadth-first search, or an odd closed walk.
    pub fn is_bipartite(&self) -> Bipartition {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        let mut parent = vec![0usize; self.n];
        for start in 1..=self.n {
            if color[start - 1].is_some() {
                continue;
            }
            color[start - 1] = Some(false);
            parent[start - 1] = start;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(a) = queue.pop_front() {
                let ca = color[a - 1].unwrap();
                for b in self.neighbors(a).vertices() {
                    match color[b - 1] {
                        None => {
                            color[b - 1] = Some(!ca);
                            parent[b - 1] = a;
                            queue.push_back(b);
                        }
                        Some(cb) if cb == ca => {
                            return Bipartition::OddCycle(odd_walk(&parent, a, b));
                        }
                        _ => {}
                    }
                }
            }
        }
        let side = (1..=self.n)
            .filter(|&v| color[v - 1] == Some(false))
            .fold(0u32, |m, v| m | (1 << (v - 1)));
        Bipartition::Bipartite(SubsetMask(side))
    }

    /// `ω(G[U]) = χ(G[U])` for every `U ⊆ V` (exhaustive; `n ≤ 10`).
    pub fn is_perfect(&self) -> Result<bool> {
        if self.n > MAX_PERFECT_N {
            return Err(Error::SizeLimit {
                what: "vertex count for perfection test",
                got: self.n,
                limit: MAX_PERFECT_N,
            });
        }
        let omega = oracles::clique_numbers_all_subsets(self);
        let chi = oracles::chromatic_numbers_all_subsets(self);
        Ok(omega.iter().zip(&chi).all(|(a, b)| a == b))
    }
}

/// Closed walk through the tree paths of `a` and `b` plus the edge `ab`.
fn odd_walk(parent: &[usize], a: usize, b: usize) -> Vec<usize> {
    let path_to_root = |mut v: usize| {
        let mut p = vec![v];
        while parent[v - 1] != v {
            v = parent[v - 1];
            p.push(v);
        }
        p
    };
    let pa = path_to_root(a);
    let pb = path_to_root(b);
    let lca = *pa.iter().find(|v| pb.contains(v)).expect("same component");
    let mut walk: Vec<usize> = pa.iter().copied().take_while(|&v| v != lca).collect();
    walk.push(lca);
    let tail: Vec<usize> = pb.iter().copied().take_while(|&v| v != lca).collect();
    walk.extend(tail.into_iter().rev());
    walk.push(a);
    walk
}
