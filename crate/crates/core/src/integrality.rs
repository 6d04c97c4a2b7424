//! Integral primal and dual certificates built from multisets of vertex
//! subsets, the clique cover ↔ integral dual correspondence for the θ
//! family, and searches for rank-one dual slacks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulations::{
    all_pairs, build_theta_dual_parts, build_theta_prime_trace, build_theta_variant, pair_index,
    ThetaDualParts, ThetaVariant,
};
use crate::graph::{Graph, SubsetMask, WeightVec};
use crate::oracles::{CoverSolution, Multiset};
use crate::sdp::dual_slack;
use crate::symmat::{SymMatrix, RANK_TOL};

/// Entries closer than this to an integer count as integral.
pub const INT_TOL: f64 = 1e-5;
/// Entrywise tolerance when comparing an assembled matrix with a given one.
pub const ASSEMBLY_TOL: f64 = 1e-9;
/// Residual bound for rank-one slacks reported as found.
pub const RANK_ONE_TOL: f64 = 1e-8;

pub const MAX_DECOMPOSITION_N: usize = 5;
pub const MAX_DECOMPOSITION_TOTAL: u64 = 6;
pub const MAX_THETA_PROBE_N: usize = 5;
pub const MAX_TRACE_PROBE_N: usize = 6;

fn signed_term(n: usize, set: SubsetMask, sign: f64) -> Vec<f64> {
    let mut v = vec![1.0];
    v.extend(set.incidence(n).into_iter().map(|x| sign * x));
    v
}

fn assemble(m: &Multiset, n: usize, sign: f64) -> SymMatrix {
    let mut out = SymMatrix::zeros_lifted(n);
    for (set, k) in m.iter() {
        out.add_scaled(&SymMatrix::sym_outer(&signed_term(n, set, sign)), k as f64)
            .expect("terms share the lifted dimension");
    }
    out
}

fn check_keys(m: &Multiset, n: usize) -> Result<()> {
    if m.max_vertex() > n {
        return Err(Error::InvalidInput(format!(
            "multiset uses vertex {} but n = {n}",
            m.max_vertex()
        )));
    }
    Ok(())
}

/// `Σ_A m_A [1, χ_Aᵀ; χ_A, χ_Aχ_Aᵀ]`.
pub fn assemble_primal(m: &Multiset, n: usize) -> Result<SymMatrix> {
    check_keys(m, n)?;
    Ok(assemble(m, n, 1.0))
}

/// `Σ_A m_A [1, −χ_Aᵀ; −χ_A, χ_Aχ_Aᵀ]`.
pub fn assemble_dual(m: &Multiset, n: usize) -> Result<SymMatrix> {
    check_keys(m, n)?;
    Ok(assemble(m, n, -1.0))
}

/// Whether `s` is the dual-integral sum of `m`. Each term `[1, −χᵀ; −χ, χχᵀ]`
/// has unit corner and `diag = −(0-column tail)`; both are re-checked.
pub fn verify_dual_integral(s: &SymMatrix, m: &Multiset) -> bool {
    if !s.is_lifted() || s.dim() == 0 {
        return false;
    }
    let n = s.dim() - 1;
    let Ok(assembled) = assemble_dual(m, n) else {
        return false;
    };
    let terms_ok = m.iter().all(|(set, _)| {
        let t = SymMatrix::sym_outer(&signed_term(n, set, -1.0));
        t.get(0, 0) == 1.0 && (1..=n).all(|j| 2.0 * t.get(j, j) + 2.0 * t.get(j, 0) == 0.0)
    });
    terms_ok && s.max_abs_diff(&assembled).is_ok_and(|d| d <= ASSEMBLY_TOL)
}

/// A dual-integral decomposition. The empty set is a legal term
/// (`e₀e₀ᵀ`) but not a key of [`Multiset`], so it is counted separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualDecomposition {
    pub m: Multiset,
    pub empty_count: u64,
}

impl DualDecomposition {
    pub fn total(&self) -> u64 {
        self.m.total() + self.empty_count
    }

    pub fn assemble(&self, n: usize) -> Result<SymMatrix> {
        let mut s = assemble_dual(&self.m, n)?;
        s.add_to(0, 0, self.empty_count as f64);
        Ok(s)
    }
}

fn nearest_int(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() <= ASSEMBLY_TOL).then_some(r as i64)
}

/// Exhaustive search for `m` with `assemble_dual(m) = s`. Every term puts a
/// one in the corner, so the term count is forced to `s₀₀` and the search is
/// finite. Returns `None` when no decomposition with at most `total_bound`
/// terms exists.
pub fn search_dual_decomposition(
    s: &SymMatrix,
    total_bound: u64,
) -> Result<Option<DualDecomposition>> {
    if s.dim() == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let n = s.dim() - 1;
    if n > MAX_DECOMPOSITION_N {
        return Err(Error::SizeLimit {
            what: "decomposition vertex count",
            got: n,
            limit: MAX_DECOMPOSITION_N,
        });
    }
    if total_bound > MAX_DECOMPOSITION_TOTAL {
        return Err(Error::SizeLimit {
            what: "decomposition total",
            got: total_bound as usize,
            limit: MAX_DECOMPOSITION_TOTAL as usize,
        });
    }
    let Some(total) = nearest_int(s.get(0, 0)) else {
        return Ok(None);
    };
    if total < 0 || total as u64 > total_bound {
        return Ok(None);
    }
    // the vertex block must be Diag(u) + pair counts with u = −(0-column tail)
    let mut diag = vec![0i64; n];
    let mut pairs = vec![vec![0i64; n]; n];
    for j in 1..=n {
        let (Some(tail), Some(d)) = (nearest_int(s.get(j, 0)), nearest_int(s.get(j, j))) else {
            return Ok(None);
        };
        if tail > 0 || d != -tail {
            return Ok(None);
        }
        diag[j - 1] = d;
        for i in 1..j {
            let Some(p) = nearest_int(s.get(j, i)) else {
                return Ok(None);
            };
            if p < 0 {
                return Ok(None);
            }
            pairs[i - 1][j - 1] = p;
        }
    }
    let mut search = Decomposer {
        n,
        diag,
        pairs,
        chosen: Vec::new(),
    };
    if !search.run(total as u64, (1u32 << n) - 1) {
        return Ok(None);
    }
    let mut m = Multiset::new();
    for &set in &search.chosen {
        m.add(SubsetMask(set), 1)?;
    }
    let empty_count = total as u64 - search.chosen.len() as u64;
    Ok(Some(DualDecomposition { m, empty_count }))
}

struct Decomposer {
    n: usize,
    diag: Vec<i64>,
    pairs: Vec<Vec<i64>>,
    chosen: Vec<u32>,
}

impl Decomposer {
    fn done(&self) -> bool {
        self.diag.iter().all(|&d| d == 0) && self.pairs.iter().flatten().all(|&p| p == 0)
    }

    fn apply(&mut self, set: u32, delta: i64) {
        for j in 0..self.n {
            if set >> j & 1 == 1 {
                self.diag[j] += delta;
                for i in 0..j {
                    if set >> i & 1 == 1 {
                        self.pairs[i][j] += delta;
                    }
                }
            }
        }
    }

    fn fits(&self, set: u32) -> bool {
        (0..self.n).all(|j| {
            set >> j & 1 == 0
                || (self.diag[j] > 0 && (0..j).all(|i| set >> i & 1 == 0 || self.pairs[i][j] > 0))
        })
    }

    /// Chooses terms in nonincreasing mask order, at most `slots` of them.
    fn run(&mut self, slots: u64, max_set: u32) -> bool {
        if self.done() {
            return true;
        }
        if slots == 0 || self.diag.iter().any(|&d| d as u64 > slots) {
            return false;
        }
        for set in (1..=max_set).rev() {
            if self.fits(set) {
                self.apply(set, -1);
                self.chosen.push(set);
                if self.run(slots - 1, set) {
                    return true;
                }
                self.chosen.pop();
                self.apply(set, 1);
            }
        }
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Primal,
    Dual,
}

/// A (PZ) or (DZ) certificate. Dual certificates for the θ family carry the
/// structured integer multipliers `(η, u, z, y)`, with `y` indexed by
/// [`pair_index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CertificateJson", into = "CertificateJson")]
pub struct IntegralCertificate {
    pub side: Side,
    pub m: Multiset,
    pub assembled: SymMatrix,
    pub eta: Option<i64>,
    pub u: Option<Vec<i64>>,
    pub z: Option<Vec<i64>>,
    pub y: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    side: Side,
    m: Multiset,
    /// Ground set size; optional on input when `u` fixes it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    eta: Option<i64>,
    u: Option<Vec<i64>>,
    z: Option<Vec<i64>>,
    y: Option<Vec<i64>>,
}

impl From<IntegralCertificate> for CertificateJson {
    fn from(c: IntegralCertificate) -> Self {
        let n = c.assembled.dim() - 1;
        CertificateJson {
            side: c.side,
            n: c.u.is_none().then_some(n),
            m: c.m,
            eta: c.eta,
            u: c.u,
            z: c.z,
            y: c.y,
        }
    }
}

impl TryFrom<CertificateJson> for IntegralCertificate {
    type Error = Error;

    fn try_from(j: CertificateJson) -> Result<Self> {
        let n = j
            .n
            .or_else(|| j.u.as_ref().map(Vec::len))
            .unwrap_or_else(|| j.m.max_vertex());
        let assembled = match j.side {
            Side::Primal => assemble_primal(&j.m, n)?,
            Side::Dual => assemble_dual(&j.m, n)?,
        };
        Ok(IntegralCertificate {
            side: j.side,
            m: j.m,
            assembled,
            eta: j.eta,
            u: j.u,
            z: j.z,
            y: j.y,
        })
    }
}

impl IntegralCertificate {
    /// Primal certificate `Σ m_A X̂_A`, e.g. a stable set with multiplicity 1.
    pub fn primal(m: Multiset, n: usize) -> Result<Self> {
        let assembled = assemble_primal(&m, n)?;
        Ok(IntegralCertificate {
            side: Side::Primal,
            m,
            assembled,
            eta: None,
            u: None,
            z: None,
            y: None,
        })
    }

    pub fn n(&self) -> usize {
        self.assembled.dim() - 1
    }

    /// The structured parts as a dual point of the given θ variant; `w` is
    /// recovered as `u − z`.
    pub fn theta_dual_parts(&self, variant: ThetaVariant) -> Result<ThetaDualParts> {
        let (Some(eta), Some(u), Some(z), Some(y)) = (self.eta, &self.u, &self.z, &self.y) else {
            return Err(Error::InvalidInput("certificate has no dual multipliers".into()));
        };
        let w: Vec<f64> = u.iter().zip(z).map(|(a, b)| (a - b) as f64).collect();
        let mut parts = ThetaDualParts {
            variant,
            eta: eta as f64,
            u: u.iter().map(|&v| v as f64).collect(),
            z: z.iter().map(|&v| v as f64).collect(),
            y: y.iter().map(|&v| v as f64).collect(),
            slack: SymMatrix::zeros_lifted(u.len()),
            residual: 0.0,
        };
        parts.slack = parts.assembled_slack(&w);
        parts.residual = parts.slack.sub(&self.assembled)?.frobenius_norm();
        Ok(parts)
    }
}

fn check_demand(g: &Graph, w: &WeightVec) -> Result<()> {
    if w.len() != g.n() {
        return Err(Error::dims(g.n(), w.len()));
    }
    if w.0.iter().any(|&x| x < 0) {
        return Err(Error::InvalidInput("clique cover demand must be nonnegative".into()));
    }
    Ok(())
}

/// The integral dual solution of a clique cover: `η = 1ᵀm`, `u = Σ m_Aχ_A`,
/// `z = u − w`, `y_ij = Σ_{A ⊇ ij} m_A`, slack `assemble_dual(m)`. It is
/// feasible for the duals of all three θ variants.
pub fn clique_cover_to_integral_dual(
    g: &Graph,
    w: &WeightVec,
    m: &Multiset,
) -> Result<IntegralCertificate> {
    check_demand(g, w)?;
    let n = g.n();
    check_keys(m, n)?;
    if let Some((set, _)) = m.iter().find(|(s, _)| !g.is_clique(*s)) {
        return Err(Error::InfeasibleCover(format!(
            "{:?} is not a clique",
            set.vertices()
        )));
    }
    let u = m.coverage(n);
    let z: Vec<i64> = u.iter().zip(&w.0).map(|(a, b)| a - b).collect();
    if let Some(v) = z.iter().position(|&x| x < 0) {
        return Err(Error::InfeasibleCover(format!(
            "vertex {} covered {} times, demand {}",
            v + 1,
            u[v],
            w.0[v]
        )));
    }
    let y = all_pairs(n)
        .into_iter()
        .map(|(i, j)| m.pair_coverage(i, j))
        .collect();
    Ok(IntegralCertificate {
        side: Side::Dual,
        assembled: assemble_dual(m, n)?,
        eta: Some(m.total() as i64),
        u: Some(u),
        z: Some(z),
        y: Some(y),
        m: m.clone(),
    })
}

/// Reads the clique cover back off an integral dual certificate. A support
/// set that is not a clique of `g` is reported as a theorem violation.
pub fn integral_dual_to_clique_cover(
    cert: &IntegralCertificate,
    g: &Graph,
) -> Result<CoverSolution> {
    if cert.side != Side::Dual {
        return Err(Error::InvalidInput("expected a dual certificate".into()));
    }
    let n = g.n();
    if cert.n() != n {
        return Err(Error::dims(n, cert.n()));
    }
    let (Some(eta), Some(u), Some(z), Some(y)) = (cert.eta, &cert.u, &cert.z, &cert.y) else {
        return Err(Error::InvalidInput("certificate has no dual multipliers".into()));
    };
    if u.len() != n || z.len() != n {
        return Err(Error::dims(n, u.len().min(z.len())));
    }
    if y.len() != n * (n - 1) / 2 {
        return Err(Error::dims(n * (n - 1) / 2, y.len()));
    }
    if !verify_dual_integral(&cert.assembled, &cert.m) {
        return Err(Error::InvalidInput("slack is not the dual sum of m".into()));
    }
    let consistent = eta == cert.m.total() as i64
        && *u == cert.m.coverage(n)
        && all_pairs(n)
            .into_iter()
            .all(|(i, j)| y[pair_index(n, i, j)] == cert.m.pair_coverage(i, j));
    if !consistent {
        return Err(Error::InvalidInput(
            "multipliers do not match the multiset".into(),
        ));
    }
    if let Some((set, _)) = cert.m.iter().find(|(s, _)| !g.is_clique(*s)) {
        return Err(Error::TheoremViolation(format!(
            "integral dual support contains the non-clique {:?}",
            set.vertices()
        )));
    }
    if z.iter().any(|&v| v < 0) {
        return Err(Error::SignPattern("z has a negative entry".into()));
    }
    let demand: Vec<i64> = u.iter().zip(z).map(|(a, b)| a - b).collect();
    Ok(CoverSolution::new(g, cert.m.clone(), &demand))
}

/// Outcome of a bounded search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Probe<T> {
    Found(T),
    NotFound,
}

impl<T> Probe<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Probe::Found(_))
    }

    pub fn found(self) -> Option<T> {
        match self {
            Probe::Found(t) => Some(t),
            Probe::NotFound => None,
        }
    }
}

/// A rank-one feasible dual point of the lifted θ′ formulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaRankOne {
    pub parts: ThetaDualParts,
    /// Distance from the rank-one matrix `[η, −uᵀ; −u, uuᵀ/η]`, plus the
    /// residual of the assembled multipliers against the solver rows.
    pub residual: f64,
    pub rank: usize,
}

fn positive_weights(w: &WeightVec, n: usize) -> Result<Vec<f64>> {
    if w.len() != n {
        return Err(Error::dims(n, w.len()));
    }
    if w.0.iter().any(|&x| x <= 0) {
        return Err(Error::InvalidInput("weights must be strictly positive".into()));
    }
    Ok(w.to_f64())
}

/// Infeasibility of the rank-one ansatz `Ŝ = [η, −uᵀ; −u, uuᵀ/η]`: the
/// diagonal forces `z = 2u − w − u∘u/η`, the pairs force `y_ij = u_iu_j/η`,
/// and θ′ needs `z ≥ 0` and `y ≤ 0` off the edges.
fn theta_ansatz_violation(g: &Graph, w: &[f64], u: &[f64], eta: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..u.len() {
        let z = 2.0 * u[i] - w[i] - u[i] * u[i] / eta;
        worst = worst.max(-z);
    }
    for (i, j) in g.non_edges() {
        worst = worst.max(u[i - 1] * u[j - 1] / eta);
    }
    worst
}

fn theta_ansatz_point(g: &Graph, w: &WeightVec, u: &[f64], eta: f64) -> Result<ThetaRankOne> {
    let n = g.n();
    let wf = w.to_f64();
    let z: Vec<f64> = (0..n)
        .map(|i| 2.0 * u[i] - wf[i] - u[i] * u[i] / eta)
        .collect();
    let y: Vec<f64> = all_pairs(n)
        .into_iter()
        .map(|(i, j)| u[i - 1] * u[j - 1] / eta)
        .collect();
    let mut parts = ThetaDualParts {
        variant: ThetaVariant::ThetaPrime,
        eta,
        u: u.to_vec(),
        z,
        y,
        slack: SymMatrix::zeros_lifted(n),
        residual: 0.0,
    };
    let mut target = vec![eta];
    target.extend(u.iter().map(|x| -x));
    let rank_one = SymMatrix::sym_outer(&target).scaled(1.0 / eta).with_lifted(true);
    let assembled = parts.assembled_slack(&wf);
    // the multipliers must reproduce the same slack through the solver rows
    let via_rows = build_theta_dual_parts(g, w, ThetaVariant::ThetaPrime, &parts.to_multipliers(g))
        .map(|p| p.slack)
        .or_else(|e| match e {
            // sign violations are measured separately below
            Error::SignPattern(_) => {
                let p = build_theta_variant(g, w, ThetaVariant::ThetaPrime)?;
                dual_slack(&p, &parts.to_multipliers(g))
            }
            other => Err(other),
        })?;
    parts.residual = assembled.sub(&via_rows)?.frobenius_norm();
    let residual = assembled.sub(&rank_one)?.frobenius_norm() + parts.residual;
    let rank = assembled.numeric_rank(RANK_TOL);
    parts.slack = assembled;
    Ok(ThetaRankOne {
        parts,
        residual,
        rank,
    })
}

/// Grid search, then pattern-search refinement, for a feasible dual point of
/// the lifted θ′ formulation whose slack has rank one.
///
/// Complete graphs admit the single-clique point `u = η·1` with
/// `η = max w`; for incomplete graphs the ansatz forces `u > 0` through the
/// diagonal and then `y_ij > 0` on a non-edge, so nothing is found.
pub fn rank_one_slack_theta_probe(g: &Graph, w: &WeightVec) -> Result<Probe<ThetaRankOne>> {
    let n = g.n();
    if n > MAX_THETA_PROBE_N {
        return Err(Error::SizeLimit {
            what: "rank-one probe vertex count",
            got: n,
            limit: MAX_THETA_PROBE_N,
        });
    }
    let wf = positive_weights(w, n)?;
    let wmax = wf.iter().cloned().fold(0.0, f64::max);
    let step = wmax / 4.0;
    let levels: Vec<f64> = (0..=8).map(|k| k as f64 * step).collect();
    let etas: Vec<f64> = levels[1..].to_vec();

    // best grid point per η, merged in η order so the result is deterministic
    let per_eta: Vec<(f64, Vec<f64>, f64)> = etas
        .par_iter()
        .map(|&eta| {
            let mut best = (f64::INFINITY, Vec::new());
            let mut idx = vec![0usize; n];
            loop {
                let u: Vec<f64> = idx.iter().map(|&k| levels[k]).collect();
                let v = theta_ansatz_violation(g, &wf, &u, eta);
                if v < best.0 {
                    best = (v, u);
                }
                // odometer over the grid, last coordinate fastest
                let mut pos = n;
                while pos > 0 {
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < levels.len() {
                        break;
                    }
                    idx[pos] = 0;
                    if pos == 0 {
                        return (best.0, best.1, eta);
                    }
                }
                if n == 0 {
                    return (best.0, best.1, eta);
                }
            }
        })
        .collect();
    let (mut viol, mut u, mut eta) = per_eta
        .into_iter()
        .fold((f64::INFINITY, Vec::new(), 0.0), |acc, cand| {
            if cand.0 < acc.0 {
                cand
            } else {
                acc
            }
        });

    // pattern search on (u, η) from the best grid point, confined to the box
    // (0, B]^{1+n} with B = 2·1ᵀw; without a bound the violation of an
    // incomplete graph tends to 0 as η → ∞ without ever reaching it
    let bound = 2.0 * wf.iter().sum::<f64>();
    let mut h = step / 2.0;
    let mut rounds = 0;
    while viol > 1e-12 && h > 1e-10 && rounds < 10_000 {
        rounds += 1;
        let mut improved = false;
        for coord in 0..=n {
            for dir in [-1.0, 1.0] {
                let (mut u2, mut eta2) = (u.clone(), eta);
                if coord < n {
                    u2[coord] += dir * h;
                } else {
                    eta2 += dir * h;
                }
                if eta2 <= 0.0 || eta2 > bound || u2.iter().any(|&x| !(0.0..=bound).contains(&x)) {
                    continue;
                }
                let v = theta_ansatz_violation(g, &wf, &u2, eta2);
                if v < viol {
                    (viol, u, eta) = (v, u2, eta2);
                    improved = true;
                }
            }
        }
        if !improved {
            h /= 2.0;
        }
    }

    if viol > 1e-12 {
        return Ok(Probe::NotFound);
    }
    let point = theta_ansatz_point(g, w, &u, eta)?;
    let sign_ok = point.parts.sign_violation(g) <= 1e-12;
    if sign_ok && point.residual <= RANK_ONE_TOL && point.rank == 1 {
        Ok(Probe::Found(point))
    } else {
        Ok(Probe::NotFound)
    }
}

/// A rank-one slack `S = uuᵀ` of the MaxCut dual `S = Diag(y) − ¼L_G(w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxcutRankOne {
    pub u: Vec<f64>,
    pub y: Vec<f64>,
    pub slack: SymMatrix,
    pub objective: f64,
    pub residual: f64,
    pub rank: usize,
}

/// Looks for a rank-one dual slack of the MaxCut SDP. Off the diagonal the
/// slack equation reads `u_iu_j = w_ij/4` on edges and `0` elsewhere, so a
/// solution needs a complete graph and product-form weights; `u` is found by
/// propagation from vertex 1 and then checked on every pair.
pub fn rank_one_slack_maxcut(g: &Graph, w: &WeightVec) -> Result<Option<MaxcutRankOne>> {
    let n = g.n();
    if w.len() != g.edge_count() {
        return Err(Error::dims(g.edge_count(), w.len()));
    }
    if w.0.contains(&0) {
        return Err(Error::InvalidInput("edge weights must be nonzero".into()));
    }
    if let Some(v) = (1..=n).find(|&v| g.degree(v) == 0) {
        return Err(Error::InvalidInput(format!("vertex {v} is isolated")));
    }
    if n < 2 || !g.is_complete() {
        return Ok(None);
    }
    let q = |i: usize, j: usize| -> f64 {
        w.0[g.edge_index(i, j).expect("complete graph")] as f64 / 4.0
    };
    let u1 = if n == 2 {
        q(1, 2).abs().sqrt()
    } else {
        let sq = q(1, 2) * q(1, 3) / q(2, 3);
        if sq <= 0.0 {
            return Ok(None);
        }
        sq.sqrt()
    };
    let mut u = vec![u1];
    u.extend((2..=n).map(|j| q(1, j) / u1));
    let l = g.laplacian(w)?;
    let y: Vec<f64> = (0..n).map(|i| u[i] * u[i] + 0.25 * l.get(i, i)).collect();
    let mut slack = SymMatrix::diag_embed(&y);
    slack.add_scaled(&l, -0.25)?;
    let residual = slack.sub(&SymMatrix::sym_outer(&u))?.frobenius_norm();
    let scale = 1.0 + w.0.iter().map(|x| x.abs()).max().unwrap_or(0) as f64;
    if residual > RANK_ONE_TOL * scale {
        return Ok(None);
    }
    Ok(Some(MaxcutRankOne {
        objective: y.iter().sum(),
        rank: slack.numeric_rank(RANK_TOL),
        u,
        y,
        slack,
        residual,
    }))
}

/// A rank-one slack `ssᵀ` for the dual of the trace form of θ′, with
/// `s = Diag(2χ_U − 1)√(λ1 − w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRankOne {
    pub lambda: f64,
    pub shore: Vec<usize>,
    pub s: Vec<f64>,
    /// Multipliers in the row order of [`build_theta_prime_trace`].
    pub multipliers: Vec<f64>,
    pub residual: f64,
    pub rank: usize,
}

/// Runs the parametric construction over shores `U` and dual values `λ`.
/// A non-edge inside `U` or inside its complement always fails, and a
/// crossing non-edge `ij` needs `λ ≥ w_i + w_j`; the candidates for `λ` are
/// these breakpoints and `max w`.
pub fn rank_one_slack_theta_trace(g: &Graph, w: &WeightVec) -> Result<Probe<TraceRankOne>> {
    let n = g.n();
    if n > MAX_TRACE_PROBE_N {
        return Err(Error::SizeLimit {
            what: "trace probe vertex count",
            got: n,
            limit: MAX_TRACE_PROBE_N,
        });
    }
    let wf = positive_weights(w, n)?;
    let p = build_theta_prime_trace(g, w)?;
    let wmax = wf.iter().cloned().fold(0.0, f64::max);
    let mut lambdas = vec![wmax];
    for i in 0..n {
        for j in i + 1..n {
            lambdas.push(wf[i] + wf[j]);
        }
    }
    lambdas.retain(|&l| l >= wmax);
    lambdas.sort_by(f64::total_cmp);
    lambdas.dedup();
    let non_edges = g.non_edges();
    let sqrt_w: Vec<f64> = wf.iter().map(|x| x.sqrt()).collect();

    let found = (0u32..1 << n).into_par_iter().find_map_first(|mask| {
        let shore = SubsetMask(mask);
        lambdas.iter().find_map(|&lambda| {
            let s: Vec<f64> = (0..n)
                .map(|i| {
                    let sign = if shore.contains(i + 1) { 1.0 } else { -1.0 };
                    sign * (lambda - wf[i]).max(0.0).sqrt()
                })
                .collect();
            // non-edge multipliers must be ≤ 0 (rows X_ij ≥ 0)
            let pair_mult = |i: usize, j: usize| 2.0 * (s[i - 1] * s[j - 1] + sqrt_w[i - 1] * sqrt_w[j - 1]);
            if non_edges.iter().any(|&(i, j)| pair_mult(i, j) > 1e-12) {
                return None;
            }
            let mut mult = vec![lambda];
            mult.extend(g.edges().iter().map(|&(i, j)| pair_mult(i, j)));
            mult.extend(non_edges.iter().map(|&(i, j)| pair_mult(i, j)));
            let slack = dual_slack(&p, &mult).ok()?;
            let residual = slack.sub(&SymMatrix::sym_outer(&s)).ok()?.frobenius_norm();
            (residual <= RANK_ONE_TOL * (1.0 + lambda)).then(|| TraceRankOne {
                lambda,
                shore: shore.vertices(),
                rank: slack.numeric_rank(RANK_TOL),
                s: s.clone(),
                multipliers: mult,
                residual,
            })
        })
    });
    Ok(match found {
        Some(f) => Probe::Found(f),
        None => Probe::NotFound,
    })
}
