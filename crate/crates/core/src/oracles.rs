//! Exact combinatorial oracles: weighted stability number, clique and
//! chromatic numbers, clique covers, maximum cuts and the integer duals of the
//! MaxCut SDP.
//!
//! Everything here is exact integer arithmetic. Argmax ties are broken towards
//! the numerically smallest subset mask.

use std::collections::{BTreeMap, HashMap};

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, SubsetMask, WeightVec};

pub const MAX_ALPHA_N: usize = 30;
pub const MAX_OMEGA_N: usize = 20;
pub const MAX_CHI_N: usize = 10;
pub const MAX_COVER_N: usize = 12;
pub const MAX_MAXCUT_N: usize = 24;
pub const MAX_INTEGER_DUAL_N: usize = 10;

/// Nonnegative integer multiplicities on nonempty vertex subsets.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Multiset {
    counts: BTreeMap<SubsetMask, u64>,
    total: u64,
}

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `mult` copies of `set`. The empty set is rejected.
    pub fn add(&mut self, set: SubsetMask, mult: u64) -> Result<()> {
        if set.is_empty() {
            return Err(Error::InvalidInput("multiset keys must be nonempty".into()));
        }
        if mult > 0 {
            *self.counts.entry(set).or_insert(0) += mult;
            self.total += mult;
        }
        Ok(())
    }

    pub fn from_pairs<I: IntoIterator<Item = (SubsetMask, u64)>>(pairs: I) -> Result<Self> {
        let mut m = Multiset::new();
        for (s, k) in pairs {
            m.add(s, k)?;
        }
        Ok(m)
    }

    pub fn get(&self, set: SubsetMask) -> u64 {
        self.counts.get(&set).copied().unwrap_or(0)
    }

    /// `1ᵀm`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetMask, u64)> + '_ {
        self.counts.iter().map(|(&s, &k)| (s, k))
    }

    pub fn support(&self) -> Vec<SubsetMask> {
        self.counts.keys().copied().collect()
    }

    /// Largest vertex appearing in any key, or 0.
    pub fn max_vertex(&self) -> usize {
        self.counts
            .keys()
            .map(|s| 32 - s.0.leading_zeros() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `Σ_A m_A χ_A`.
    pub fn coverage(&self, n: usize) -> Vec<i64> {
        let mut u = vec![0i64; n];
        for (s, k) in self.iter() {
            for v in s.vertices() {
                u[v - 1] += k as i64;
            }
        }
        u
    }

    /// `Σ_{A ⊇ {i,j}} m_A`.
    pub fn pair_coverage(&self, i: usize, j: usize) -> i64 {
        let pair = SubsetMask::from_vertices([i, j]);
        self.iter()
            .filter(|(s, _)| pair.is_subset_of(*s))
            .map(|(_, k)| k as i64)
            .sum()
    }
}

#[derive(Serialize, Deserialize)]
struct MultisetEntry {
    set: Vec<usize>,
    mult: u64,
}

impl Serialize for Multiset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<MultisetEntry> = self
            .iter()
            .map(|(set, mult)| MultisetEntry {
                set: set.vertices(),
                mult,
            })
            .collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multiset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<MultisetEntry>::deserialize(d)?;
        let mut m = Multiset::new();
        for e in entries {
            if e.set.iter().any(|&v| v == 0 || v > 32) {
                return Err(serde::de::Error::custom("vertex out of range"));
            }
            m.add(SubsetMask::from_vertices(e.set), e.mult)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(m)
    }
}

/// A covering family with its objective `1ᵀm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    pub m: Multiset,
    pub value: i64,
    /// Vertices where `Σ m_A χ_A` meets the demand with equality.
    pub tight_vertices: Vec<usize>,
    /// Whether every set in the support is a clique of the ambient graph.
    pub clique_cover: bool,
}

impl CoverSolution {
    pub fn new(g: &Graph, m: Multiset, demand: &[i64]) -> Self {
        let cov = m.coverage(g.n());
        let tight_vertices = (1..=g.n()).filter(|&v| cov[v - 1] == demand[v - 1]).collect();
        let clique_cover = m.iter().all(|(s, _)| g.is_clique(s));
        CoverSolution {
            value: m.total() as i64,
            m,
            tight_vertices,
            clique_cover,
        }
    }
}

impl Serialize for CoverSolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CoverSolution", 2)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("cover", &self.m)?;
        st.end()
    }
}

fn check_vertex_weights(g: &Graph, w: &WeightVec) -> Result<()> {
    if w.len() != g.n() {
        return Err(Error::dims(g.n(), w.len()));
    }
    Ok(())
}

fn check_edge_weights(g: &Graph, w: &WeightVec) -> Result<()> {
    if w.len() != g.edge_count() {
        return Err(Error::dims(g.edge_count(), w.len()));
    }
    Ok(())
}

fn size_limit(what: &'static str, got: usize, limit: usize) -> Result<()> {
    if got > limit {
        return Err(Error::SizeLimit { what, got, limit });
    }
    Ok(())
}

/// Weighted stability number `α(G, w)` and the smallest-mask optimal stable set.
pub fn alpha(g: &Graph, w: &WeightVec) -> Result<(i64, SubsetMask)> {
    check_vertex_weights(g, w)?;
    size_limit("vertex count for alpha", g.n(), MAX_ALPHA_N)?;
    // vertices of weight <= 0 never enter the smallest optimal mask
    let positive = (1..=g.n())
        .filter(|&v| w.0[v - 1] > 0)
        .fold(0u32, |m, v| m | 1 << (v - 1));
    let mut search = AlphaSearch {
        g,
        w: w.as_slice(),
        best: (0, 0),
    };
    search.run(0, 0, positive);
    Ok((search.best.0, SubsetMask(search.best.1)))
}

struct AlphaSearch<'a> {
    g: &'a Graph,
    w: &'a [i64],
    best: (i64, u32),
}

impl AlphaSearch<'_> {
    fn run(&mut self, chosen: u32, value: i64, cand: u32) {
        if value > self.best.0 || (value == self.best.0 && chosen < self.best.1) {
            self.best = (value, chosen);
        }
        let bound: i64 = value + mask_weight(cand, self.w);
        if cand == 0 || bound < self.best.0 {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        let rest = cand & !(1 << v);
        self.run(
            chosen | 1 << v,
            value + self.w[v],
            rest & !self.g.neighbors(v + 1).0,
        );
        self.run(chosen, value, rest);
    }
}

fn mask_weight(mask: u32, w: &[i64]) -> i64 {
    let mut s = 0;
    let mut bits = mask;
    while bits != 0 {
        s += w[bits.trailing_zeros() as usize];
        bits &= bits - 1;
    }
    s
}

/// Clique number `ω(G)`.
pub fn omega(g: &Graph) -> Result<usize> {
    size_limit("vertex count for omega", g.n(), MAX_OMEGA_N)?;
    Ok(alpha(&g.complement(), &WeightVec::ones(g.n()))?.0 as usize)
}

/// Chromatic number `χ(G)` by dynamic programming over vertex subsets.
pub fn chi(g: &Graph) -> Result<usize> {
    size_limit("vertex count for chi", g.n(), MAX_CHI_N)?;
    let table = chromatic_numbers_all_subsets(g);
    Ok(table[table.len() - 1] as usize)
}

/// `ω(G[S])` for every mask `S`.
pub(crate) fn clique_numbers_all_subsets(g: &Graph) -> Vec<u8> {
    let size = 1usize << g.n();
    let mut om = vec![0u8; size];
    for s in 1..size {
        let v = s.trailing_zeros() as usize;
        let without = s & !(1 << v);
        let with = s & g.neighbors(v + 1).0 as usize;
        om[s] = om[without].max(1 + om[with]);
    }
    om
}

/// `χ(G[S])` for every mask `S`.
pub(crate) fn chromatic_numbers_all_subsets(g: &Graph) -> Vec<u8> {
    let size = 1usize << g.n();
    let mut stable = vec![true; size];
    for s in 1..size {
        let v = s.trailing_zeros() as usize;
        let rest = s & !(1 << v);
        stable[s] = stable[rest] && (g.neighbors(v + 1).0 as usize & rest) == 0;
    }
    let mut chi = vec![0u8; size];
    for s in 1..size {
        let low = s & s.wrapping_neg();
        let rest = s & !low;
        let mut best = u8::MAX;
        // colour classes containing the lowest vertex of s
        let mut sub = rest;
        loop {
            let class = sub | low;
            if stable[class] {
                best = best.min(1 + chi[s & !class]);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        chi[s] = best;
    }
    chi
}

/// Weighted clique covering number `χ̄(G, w)` with an optimal cover.
///
/// Exact search over residual demand vectors, branching on the maximal
/// cliques through the first uncovered vertex. A greedy weighted stable set
/// of the residual demand gives the lower bound used to stop early. Supports
/// are maximal cliques; vertices with `w ≤ 0` need no cover.
pub fn clique_cover_number(g: &Graph, w: &WeightVec) -> Result<CoverSolution> {
    check_vertex_weights(g, w)?;
    size_limit("vertex count for clique cover", g.n(), MAX_COVER_N)?;
    let demand: Vec<i64> = w.0.iter().map(|&x| x.max(0)).collect();
    let cliques = g.maximal_cliques();
    let mut solver = CoverSearch {
        g,
        cliques: &cliques,
        memo: HashMap::new(),
    };
    solver.solve(&demand);

    let mut m = Multiset::new();
    let mut r = demand.clone();
    while let Some(&(_, Some(k))) = solver.memo.get(&r) {
        m.add(k, 1)?;
        for v in k.vertices() {
            r[v - 1] = (r[v - 1] - 1).max(0);
        }
    }
    Ok(CoverSolution::new(g, m, &w.0))
}

struct CoverSearch<'a> {
    g: &'a Graph,
    cliques: &'a [SubsetMask],
    memo: HashMap<Vec<i64>, (u64, Option<SubsetMask>)>,
}

impl CoverSearch<'_> {
    fn solve(&mut self, r: &[i64]) -> u64 {
        let Some(v) = r.iter().position(|&x| x > 0).map(|i| i + 1) else {
            return 0;
        };
        if let Some(&(val, _)) = self.memo.get(r) {
            return val;
        }
        let lb = greedy_stable_bound(self.g, r);
        let mut best = (u64::MAX, None);
        for &k in self.cliques.iter().filter(|k| k.contains(v)) {
            let next: Vec<i64> = r
                .iter()
                .enumerate()
                .map(|(i, &x)| if k.contains(i + 1) { (x - 1).max(0) } else { x })
                .collect();
            let val = 1 + self.solve(&next);
            if val < best.0 {
                best = (val, Some(k));
                if val == lb {
                    break;
                }
            }
        }
        self.memo.insert(r.to_vec(), best);
        best.0
    }
}

/// Each clique meets a stable set at most once, so the residual weight of any
/// stable set bounds the number of cliques still needed.
fn greedy_stable_bound(g: &Graph, r: &[i64]) -> u64 {
    let mut order: Vec<usize> = (1..=g.n()).filter(|&v| r[v - 1] > 0).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(r[v - 1]), g.degree(v), v));
    let mut taken = 0u32;
    let mut total = 0;
    for v in order {
        if g.neighbors(v).0 & taken == 0 {
            taken |= 1 << (v - 1);
            total += r[v - 1];
        }
    }
    total as u64
}

/// Maximum cut by exhaustive enumeration in Gray-code order.
///
/// With `nontrivial` set, only shores `∅ ≠ U ⊊ V` are allowed.
pub fn maxcut_bruteforce(g: &Graph, w: &WeightVec, nontrivial: bool) -> Result<(i64, SubsetMask)> {
    check_edge_weights(g, w)?;
    size_limit("vertex count for maxcut", g.n(), MAX_MAXCUT_N)?;
    let n = g.n();
    if nontrivial && n < 2 {
        return Err(Error::InvalidInput("no nontrivial cut on one vertex".into()));
    }
    let full = SubsetMask::full(n).0;
    // adjacency with weights per vertex
    let mut nbrs: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (&(i, j), &we) in g.edges().iter().zip(w.as_slice()) {
        nbrs[i - 1].push((j - 1, we));
        nbrs[j - 1].push((i - 1, we));
    }
    let mut mask = 0u32;
    let mut value = 0i64;
    let mut best: Option<(i64, u32)> = None;
    let consider = |mask: u32, value: i64, best: &mut Option<(i64, u32)>| {
        if nontrivial && (mask == 0 || mask == full) {
            return;
        }
        let better = match *best {
            None => true,
            Some((bv, bm)) => value > bv || (value == bv && mask < bm),
        };
        if better {
            *best = Some((value, mask));
        }
    };
    consider(mask, value, &mut best);
    for k in 1u64..(1u64 << n) {
        let v = k.trailing_zeros() as usize;
        let inside = mask >> v & 1 == 1;
        // flipping v toggles every edge at v between cut and uncut
        for &(u, we) in &nbrs[v] {
            let u_inside = mask >> u & 1 == 1;
            if u_inside == inside {
                value += we;
            } else {
                value -= we;
            }
        }
        mask ^= 1 << v;
        consider(mask, value, &mut best);
    }
    let (v, m) = best.expect("at least one feasible shore");
    Ok((v, SubsetMask(m)))
}

/// Optimal solution of the capped integer dual of the homogeneous MaxCut SDP
/// together with the number of distinct optimal solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerDualSolution {
    pub cover: CoverSolution,
    pub optimal_count: u64,
}

/// Solves `min 1ᵀm` over `m` supported on nonempty cliques with
/// `Σ_{A∋i} m_A ≥ w(δ(i))` at every vertex and `Σ_{A⊇e} m_A ≤ w_e` on every
/// edge, for `w ≥ 0` integral. Exhaustive branch-and-bound; it counts every
/// optimal solution, so uniqueness is part of the output.
pub fn maxcut_integer_dual_solve(g: &Graph, w: &WeightVec) -> Result<IntegerDualSolution> {
    check_edge_weights(g, w)?;
    size_limit("vertex count for integer dual", g.n(), MAX_INTEGER_DUAL_N)?;
    if w.0.iter().any(|&x| x < 0) {
        return Err(Error::InvalidInput(
            "edge weights must be nonnegative; use maxcut_integer_dual_signed".into(),
        ));
    }
    let demand = g.weighted_degrees(w)?;
    let (m, count) = capped_cover_search(g, &demand, w.as_slice())?;
    Ok(IntegerDualSolution {
        cover: CoverSolution::new(g, m, &demand),
        optimal_count: count,
    })
}

/// Optimal `(m, y)` of the integer dual with the extra edge variable
/// `y ∈ R₊^E`, for signed integral `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedIntegerDualSolution {
    pub m: Multiset,
    pub y: Vec<i64>,
    pub value: i64,
    pub optimal_count: u64,
}

/// Solves the signed-weight integer dual exactly.
///
/// For fixed `y` the problem is the capped problem of
/// [`maxcut_integer_dual_solve`] with weights `w + y`. An optimal `y` can be
/// taken integral (lowering `y_e` to `max(0, Σ_{A⊇e} m_A − w_e)` keeps
/// feasibility) and `y ≥ max(0, −w)`. Every feasible point costs at least
/// `Σ_e (w_e + y_e)`, because each clique `K` satisfies
/// `1 ≥ |K| − C(|K|,2)`. So only the `y` with `Σ(w + y)` below the incumbent
/// need to be enumerated.
pub fn maxcut_integer_dual_signed(g: &Graph, w: &WeightVec) -> Result<SignedIntegerDualSolution> {
    check_edge_weights(g, w)?;
    size_limit("vertex count for integer dual", g.n(), MAX_INTEGER_DUAL_N)?;
    let y_lo: Vec<i64> = w.0.iter().map(|&x| (-x).max(0)).collect();
    let shifted = |y: &[i64]| -> Vec<i64> { w.0.iter().zip(y).map(|(a, b)| a + b).collect() };

    // incumbent: the zero extension of w + y_lo, checked rather than trusted
    let base = shifted(&y_lo);
    let incumbent = zero_extension(g, &base)?;
    let demand = g.weighted_degrees(&WeightVec(base.clone()))?;
    if !capped_cover_feasible(g, &incumbent, &demand, &base) {
        return Err(Error::Internal("zero extension infeasible".into()));
    }
    let upper = incumbent.total() as i64;
    let slack_budget = upper - base.iter().sum::<i64>();

    let mut best: Option<(i64, Multiset, Vec<i64>)> = None;
    let mut count = 0u64;
    let mut y = y_lo.clone();
    for_each_composition(g.edge_count(), slack_budget.max(0) as u64, &mut |extra| {
        for (e, &x) in extra.iter().enumerate() {
            y[e] = y_lo[e] + x as i64;
        }
        let wy = shifted(&y);
        let demand = g.weighted_degrees(&WeightVec(wy.clone()))?;
        let (m, c) = capped_cover_search(g, &demand, &wy)?;
        let val = m.total() as i64;
        match &best {
            Some((bv, _, _)) if val > *bv => {}
            Some((bv, _, _)) if val == *bv => count += c,
            _ => {
                best = Some((val, m, y.clone()));
                count = c;
            }
        }
        Ok(())
    })?;
    let (value, m, y) = best.ok_or_else(|| Error::Internal("no feasible y found".into()))?;
    Ok(SignedIntegerDualSolution {
        m,
        y,
        value,
        optimal_count: count,
    })
}

/// Calls `f` with every vector of `len` nonnegative integers summing to at
/// most `budget`.
fn for_each_composition(
    len: usize,
    budget: u64,
    f: &mut dyn FnMut(&[u64]) -> Result<()>,
) -> Result<()> {
    fn rec(
        pos: usize,
        left: u64,
        cur: &mut Vec<u64>,
        f: &mut dyn FnMut(&[u64]) -> Result<()>,
    ) -> Result<()> {
        if pos == cur.len() {
            return f(cur);
        }
        for x in 0..=left {
            cur[pos] = x;
            rec(pos + 1, left - x, cur, f)?;
        }
        cur[pos] = 0;
        Ok(())
    }
    let mut cur = vec![0; len];
    rec(0, budget, &mut cur, f)
}

/// `m_w`: multiplicity `w_e` on each edge `e`, zero elsewhere.
pub fn zero_extension(g: &Graph, w: &[i64]) -> Result<Multiset> {
    let mut m = Multiset::new();
    for (&(i, j), &we) in g.edges().iter().zip(w) {
        if we < 0 {
            return Err(Error::InvalidInput("negative multiplicity".into()));
        }
        m.add(SubsetMask::from_vertices([i, j]), we as u64)?;
    }
    Ok(m)
}

/// Feasibility for the capped problem: clique support, vertex demand, edge caps.
pub fn capped_cover_feasible(g: &Graph, m: &Multiset, demand: &[i64], cap: &[i64]) -> bool {
    if !m.iter().all(|(s, _)| g.is_clique(s)) {
        return false;
    }
    let cov = m.coverage(g.n());
    if cov.iter().zip(demand).any(|(c, d)| c < d) {
        return false;
    }
    g.edges()
        .iter()
        .zip(cap)
        .all(|(&(i, j), &c)| m.pair_coverage(i, j) <= c)
}

/// Exhaustive search for the capped covering problem. Returns one optimal
/// multiset (the first in search order) and the number of optimal ones.
fn capped_cover_search(g: &Graph, demand: &[i64], cap: &[i64]) -> Result<(Multiset, u64)> {
    let n = g.n();
    if cap.iter().any(|&c| c < 0) {
        return Err(Error::InvalidInput("negative edge capacity".into()));
    }
    // non-singleton cliques, larger first; their edge sets as masks over E
    let mut cliques: Vec<SubsetMask> = g
        .enumerate_cliques()
        .into_iter()
        .filter(|c| c.len() >= 2)
        .collect();
    cliques.sort_by_key(|c| (std::cmp::Reverse(c.len()), *c));
    let edge_sets: Vec<u64> = cliques
        .iter()
        .map(|c| {
            g.edges()
                .iter()
                .enumerate()
                .filter(|(_, &(i, j))| c.contains(i) && c.contains(j))
                .fold(0u64, |m, (k, _)| m | 1 << k)
        })
        .collect();
    // live[p]: edges still usable by cliques at positions >= p
    let mut live = vec![0u64; cliques.len() + 1];
    for p in (0..cliques.len()).rev() {
        live[p] = live[p + 1] | edge_sets[p];
    }

    let mut st = CappedSearch {
        demand,
        cap,
        cliques: &cliques,
        edge_sets: &edge_sets,
        live: &live,
        cov: vec![0; n],
        used: vec![0; cap.len()],
        mult: vec![0; cliques.len()],
        cost: 0,
        best: i64::MAX,
        best_mult: Vec::new(),
        count: 0,
    };
    st.dfs(0);
    if st.best == i64::MAX {
        return Err(Error::Internal("capped cover search found no solution".into()));
    }
    let mut m = Multiset::new();
    for (p, &k) in st.best_mult.iter().enumerate().take(cliques.len()) {
        m.add(cliques[p], k as u64)?;
    }
    for v in 1..=n {
        let k = st.best_mult[cliques.len() + v - 1];
        m.add(SubsetMask::singleton(v), k as u64)?;
    }
    Ok((m, st.count))
}

struct CappedSearch<'a> {
    demand: &'a [i64],
    cap: &'a [i64],
    cliques: &'a [SubsetMask],
    edge_sets: &'a [u64],
    live: &'a [u64],
    cov: Vec<i64>,
    used: Vec<i64>,
    mult: Vec<i64>,
    cost: i64,
    best: i64,
    best_mult: Vec<i64>,
    count: u64,
}

impl CappedSearch<'_> {
    fn residual_demand(&self) -> i64 {
        self.cov
            .iter()
            .zip(self.demand)
            .map(|(c, d)| (d - c).max(0))
            .sum()
    }

    /// Any completion costs at least `coverage − edge usage` of what it adds.
    fn lower_bound(&self, p: usize) -> i64 {
        let mut live_cap = 0;
        let mut bits = self.live[p];
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            live_cap += self.cap[e] - self.used[e];
            bits &= bits - 1;
        }
        self.cost + self.residual_demand() - live_cap
    }

    fn dfs(&mut self, p: usize) {
        if self.lower_bound(p) > self.best {
            return;
        }
        if p == self.cliques.len() {
            let total = self.cost + self.residual_demand();
            if total < self.best {
                self.best = total;
                self.count = 0;
            }
            if total == self.best {
                self.count += 1;
                if self.count == 1 {
                    self.best_mult = self.mult.clone();
                    self.best_mult.extend(
                        self.cov
                            .iter()
                            .zip(self.demand)
                            .map(|(c, d)| (d - c).max(0)),
                    );
                }
            }
            return;
        }
        let es = self.edge_sets[p];
        let mut max_k = i64::MAX;
        let mut bits = es;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            max_k = max_k.min(self.cap[e] - self.used[e]);
            bits &= bits - 1;
        }
        let verts = self.cliques[p].vertices();
        let order: Vec<i64> = if self.cliques[p].len() == 2 {
            (0..=max_k).rev().collect()
        } else {
            (0..=max_k).collect()
        };
        for k in order {
            self.apply(es, &verts, k);
            self.mult[p] = k;
            self.dfs(p + 1);
            self.apply(es, &verts, -k);
            self.mult[p] = 0;
        }
    }

    fn apply(&mut self, es: u64, verts: &[usize], k: i64) {
        self.cost += k;
        for &v in verts {
            self.cov[v - 1] += k;
        }
        let mut bits = es;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            self.used[e] += k;
            bits &= bits - 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_alpha(g: &Graph, w: &[i64]) -> (i64, u32) {
        let mut best = (i64::MIN, 0);
        for m in 0..(1u32 << g.n()) {
            if g.is_stable(SubsetMask(m)) {
                let v = mask_weight(m, w);
                if v > best.0 {
                    best = (v, m);
                }
            }
        }
        best
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(&Graph::cycle(5), &WeightVec::ones(5)).unwrap().0, 2);
        assert_eq!(alpha(&Graph::complete(4), &WeightVec::ones(4)).unwrap().0, 1);
        let (v, u) = alpha(&Graph::complete(2), &WeightVec(vec![3, -1])).unwrap();
        assert_eq!((v, u), (3, SubsetMask::singleton(1)));
        let (v, u) = alpha(&Graph::empty(3), &WeightVec(vec![0, -2, 0])).unwrap();
        assert_eq!((v, u), (0, SubsetMask::EMPTY));
    }

    #[test]
    fn omega_chi_examples() {
        let c5 = Graph::cycle(5);
        assert_eq!((omega(&c5).unwrap(), chi(&c5).unwrap()), (2, 3));
        let k4 = Graph::complete(4);
        assert_eq!((omega(&k4).unwrap(), chi(&k4).unwrap()), (4, 4));
        let e = Graph::empty(6);
        assert_eq!((omega(&e).unwrap(), chi(&e).unwrap()), (1, 1));
        assert!(chi(&Graph::empty(11)).is_err());
    }

    #[test]
    fn cover_examples() {
        let s = clique_cover_number(&Graph::complete(3), &WeightVec::ones(3)).unwrap();
        assert_eq!(s.value, 1);
        assert_eq!(s.m.get(SubsetMask(0b111)), 1);
        assert!(s.clique_cover);
        assert_eq!(s.tight_vertices, vec![1, 2, 3]);

        let s = clique_cover_number(&Graph::cycle(5), &WeightVec::ones(5)).unwrap();
        assert_eq!(s.value, 3);

        let s = clique_cover_number(&Graph::cycle(5), &WeightVec::zeros(5)).unwrap();
        assert_eq!(s.value, 0);
        assert!(s.m.is_empty());
    }

    /// Every multiset of at most `t` cliques with coverage >= w.
    fn brute_cover(g: &Graph, w: &[i64], t: usize) -> Option<usize> {
        let cliques = g.enumerate_cliques();
        fn rec(cl: &[SubsetMask], start: usize, left: usize, cov: &mut Vec<i64>, w: &[i64]) -> bool {
            if cov.iter().zip(w).all(|(c, x)| c >= x) {
                return true;
            }
            if left == 0 {
                return false;
            }
            for k in start..cl.len() {
                for v in cl[k].vertices() {
                    cov[v - 1] += 1;
                }
                let ok = rec(cl, k, left - 1, cov, w);
                for v in cl[k].vertices() {
                    cov[v - 1] -= 1;
                }
                if ok {
                    return true;
                }
            }
            false
        }
        (0..=t).find(|&k| rec(&cliques, 0, k, &mut vec![0; g.n()], w))
    }

    #[test]
    fn c5_cover_matches_exhaustive_multisets() {
        let c5 = Graph::cycle(5);
        assert_eq!(brute_cover(&c5, &[1; 5], 3), Some(3));
    }

    #[test]
    fn maxcut_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(maxcut_bruteforce(&k3, &WeightVec::ones(3), false).unwrap().0, 2);
        let p4 = Graph::path(4);
        let neg = WeightVec(vec![-1; 3]);
        assert_eq!(maxcut_bruteforce(&p4, &neg, true).unwrap().0, -1);
        assert_eq!(maxcut_bruteforce(&p4, &neg, false).unwrap(), (0, SubsetMask::EMPTY));
        let c6 = Graph::cycle(6);
        assert_eq!(maxcut_bruteforce(&c6, &WeightVec::ones(6), false).unwrap().0, 6);
        assert!(maxcut_bruteforce(&Graph::empty(1), &WeightVec(vec![]), true).is_err());
    }

    #[test]
    fn integer_dual_examples() {
        let k3 = Graph::complete(3);
        let s = maxcut_integer_dual_solve(&k3, &WeightVec::ones(3)).unwrap();
        assert_eq!(s.cover.value, 3);
        assert_eq!(s.cover.m, zero_extension(&k3, &[1, 1, 1]).unwrap());
        assert_eq!(s.optimal_count, 1);

        let s = maxcut_integer_dual_solve(&Graph::cycle(5), &WeightVec::zeros(5)).unwrap();
        assert_eq!(s.cover.value, 0);
        assert!(s.cover.m.is_empty());

        let star = Graph::new(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let s = maxcut_integer_dual_solve(&star, &WeightVec(vec![2, 2, 2])).unwrap();
        assert_eq!(s.cover.value, 6);
        assert_eq!(s.cover.m, zero_extension(&star, &[2, 2, 2]).unwrap());

        assert!(maxcut_integer_dual_solve(&k3, &WeightVec(vec![1, -1, 1])).is_err());
    }

    #[test]
    fn signed_integer_dual_examples() {
        let k2 = Graph::complete(2);
        let s = maxcut_integer_dual_signed(&k2, &WeightVec(vec![-3])).unwrap();
        assert!(s.m.is_empty());
        assert_eq!((s.y.clone(), s.value), (vec![3], 0));

        let k3 = Graph::complete(3);
        let s = maxcut_integer_dual_signed(&k3, &WeightVec::ones(3)).unwrap();
        assert_eq!(s.m, zero_extension(&k3, &[1, 1, 1]).unwrap());
        assert_eq!((s.y.clone(), s.value), (vec![0, 0, 0], 3));

        let s = maxcut_integer_dual_signed(&k2, &WeightVec(vec![2])).unwrap();
        assert_eq!(s.m.get(SubsetMask(0b11)), 2);
        assert_eq!((s.y.clone(), s.value, s.optimal_count), (vec![0], 2, 1));
    }

    #[test]
    fn multiset_rejects_empty_key_and_serializes() {
        let mut m = Multiset::new();
        assert!(m.add(SubsetMask::EMPTY, 1).is_err());
        m.add(SubsetMask::from_vertices([1, 3]), 2).unwrap();
        m.add(SubsetMask::from_vertices([2]), 1).unwrap();
        assert_eq!(m.total(), 3);
        let sol = CoverSolution::new(&Graph::empty(3), m.clone(), &[1, 1, 1]);
        let json = serde_json::to_string(&sol).unwrap();
        assert_eq!(json, r#"{"value":3,"cover":[{"set":[2],"mult":1},{"set":[1,3],"mult":2}]}"#);
        assert!(!sol.clique_cover);
        let back: Multiset = serde_json::from_str(r#"[{"set":[2],"mult":1},{"set":[1,3],"mult":2}]"#).unwrap();
        assert_eq!(back, m);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for i in 1..=n {
                    for j in (i + 1)..=n {
                        if bits[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                Graph::new(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn alpha_matches_enumeration(g in arb_graph(9), seed in any::<u64>()) {
            let w: Vec<i64> = (0..g.n()).map(|i| ((seed >> (3 * i)) & 7) as i64 - 2).collect();
            let (v, u) = alpha(&g, &WeightVec(w.clone())).unwrap();
            let (bv, _) = brute_alpha(&g, &w);
            prop_assert_eq!(v, bv);
            prop_assert!(g.is_stable(u));
            prop_assert_eq!(mask_weight(u.0, &w), v);
        }

        #[test]
        fn cover_matches_small_enumeration(g in arb_graph(5), seed in any::<u64>()) {
            let w: Vec<i64> = (0..g.n()).map(|i| ((seed >> (2 * i)) & 3) as i64 % 3).collect();
            let s = clique_cover_number(&g, &WeightVec(w.clone())).unwrap();
            let cov = s.m.coverage(g.n());
            prop_assert!(cov.iter().zip(&w).all(|(c, x)| c >= x));
            prop_assert!(s.clique_cover);
            prop_assert_eq!(Some(s.value as usize), brute_cover(&g, &w, 10));
        }

        #[test]
        fn chi_and_omega_sandwich(g in arb_graph(8)) {
            let om = omega(&g).unwrap();
            let ch = chi(&g).unwrap();
            prop_assert!(om <= ch);
            let cover = clique_cover_number(&g, &WeightVec::ones(g.n())).unwrap();
            prop_assert_eq!(cover.value as usize, chi(&g.complement()).unwrap());
        }
    }
}
