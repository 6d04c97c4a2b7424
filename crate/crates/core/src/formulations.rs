//! Builders mapping a graph, or LP data, to the SDPs studied here.
//!
//! The lifted formulations live on `{0} ∪ V` with vertex `j` at index `j`.
//! Rows are emitted in a fixed order so that solver multipliers line up with
//! the structured dual variables `(η, u, z, y)`:
//!
//! | rows                | matrix                       | sense | multiplier |
//! |---------------------|------------------------------|-------|------------|
//! | `0`                 | `e₀e₀ᵀ`                      | `=1`  | `η`        |
//! | `1..=n`             | `2·Sym(e_j(e_j − e₀)ᵀ)`      | `=0`  | `u_j`      |
//! | `n+1..=2n`          | `e_je_jᵀ`                    | `≥0`  | `−z_j`     |
//! | after that          | `2·Sym(e_ie_jᵀ)`, pair rows  | varies| `y_ij`     |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, WeightVec};
use crate::sdp::{dual_slack, Constraint, SdpProblem, Sense};
use crate::symmat::SymMatrix;

/// Entry tolerance for sign patterns of recovered multipliers.
pub const SIGN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaVariant {
    Theta,
    ThetaPrime,
    ThetaPlus,
}

impl ThetaVariant {
    pub const ALL: [ThetaVariant; 3] = [
        ThetaVariant::ThetaPrime,
        ThetaVariant::Theta,
        ThetaVariant::ThetaPlus,
    ];
}

/// Index of the pair `{i, j}` (1-based, `i ≠ j`) in lexicographic order of
/// `C(V, 2)`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

/// All pairs `{i, j}`, `i < j`, in the order used by [`pair_index`].
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect()
}

fn unit_outer(dim: usize, i: usize) -> SymMatrix {
    let mut m = SymMatrix::zeros(dim);
    m.set(i, i, 1.0);
    m
}

/// `2·Sym(e_j(e_j − e₀)ᵀ)`: `2` at `(j,j)`, `−1` at `(0,j)` and `(j,0)`.
fn diag_link(n: usize, j: usize) -> SymMatrix {
    let mut m = SymMatrix::zeros_lifted(n);
    m.set(j, j, 2.0);
    m.set(j, 0, -1.0);
    m
}

fn lifted_pair(n: usize, i: usize, j: usize) -> SymMatrix {
    SymMatrix::sym2_unit(n + 1, i, j).with_lifted(true)
}

/// The rows saying that `X̂₀₀ = 1`, `X̂₀ⱼ = X̂ⱼⱼ` and `X̂ⱼⱼ ≥ 0`.
pub fn base_constraints_01(n: usize) -> Vec<Constraint> {
    let mut rows = vec![Constraint::new(
        unit_outer(n + 1, 0).with_lifted(true),
        Sense::Eq,
        1.0,
    )];
    for j in 1..=n {
        rows.push(Constraint::new(diag_link(n, j), Sense::Eq, 0.0));
    }
    for j in 1..=n {
        rows.push(Constraint::new(
            unit_outer(n + 1, j).with_lifted(true),
            Sense::Ge,
            0.0,
        ));
    }
    rows
}

/// [`base_constraints_01`] plus `X̂ᵢⱼ ≥ 0` for every pair, written as
/// `⟨2·Sym(e_ie_jᵀ), X̂⟩ ≥ 0`.
pub fn base_constraints_01geq(n: usize) -> Vec<Constraint> {
    let mut rows = base_constraints_01(n);
    for (i, j) in all_pairs(n) {
        rows.push(Constraint::new(lifted_pair(n, i, j), Sense::Ge, 0.0));
    }
    rows
}

fn diag_objective(w: &[f64]) -> SymMatrix {
    SymMatrix::direct_sum(0.0, &SymMatrix::diag_embed(w)).with_lifted(true)
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

/// Lifted θ-family formulation with objective `Diag(0 ⊕ w)`.
pub fn build_theta_variant(g: &Graph, w: &WeightVec, variant: ThetaVariant) -> Result<SdpProblem> {
    check_vertex_weights(g, w)?;
    let n = g.n();
    let mut p = SdpProblem::new(diag_objective(&w.to_f64()), true);
    p.constraints = base_constraints_01(n);
    let edge_sense = match variant {
        ThetaVariant::ThetaPlus => Sense::Le,
        _ => Sense::Eq,
    };
    for &(i, j) in g.edges() {
        p.push(lifted_pair(n, i, j), edge_sense, 0.0);
    }
    if variant == ThetaVariant::ThetaPrime {
        for (i, j) in g.non_edges() {
            p.push(lifted_pair(n, i, j), Sense::Ge, 0.0);
        }
    }
    Ok(p)
}

pub fn build_theta(g: &Graph, w: &WeightVec) -> Result<SdpProblem> {
    build_theta_variant(g, w, ThetaVariant::Theta)
}

pub fn build_theta_prime(g: &Graph, w: &WeightVec) -> Result<SdpProblem> {
    build_theta_variant(g, w, ThetaVariant::ThetaPrime)
}

pub fn build_theta_plus(g: &Graph, w: &WeightVec) -> Result<SdpProblem> {
    build_theta_variant(g, w, ThetaVariant::ThetaPlus)
}

/// Positive definite point with `X̂₀₀ = 1` and `X̂₀ⱼ = X̂ⱼⱼ = ε`, all other
/// entries zero. It satisfies every equality row of the θ-family and is
/// positive definite for `0 < ε < 1/n`.
pub fn slater_point(n: usize, eps: f64) -> Result<SymMatrix> {
    if !(eps > 0.0 && eps * n as f64 <= 1.0 - 1e-12) {
        return Err(Error::InvalidInput(format!("ε = {eps} outside (0, 1/n)")));
    }
    let mut x = SymMatrix::zeros_lifted(n);
    x.set(0, 0, 1.0);
    for j in 1..=n {
        x.set(j, 0, eps);
        x.set(j, j, eps);
    }
    Ok(x)
}

/// The default witness, `ε = 1/(2(n+1))`.
pub fn default_slater_point(n: usize) -> SymMatrix {
    slater_point(n, 0.5 / (n as f64 + 1.0)).expect("ε is in range")
}

/// Rank-one embedding `[1, χ_Uᵀ; χ_U, χ_Uχ_Uᵀ]` of a vertex subset.
pub fn embed_subset(n: usize, u: crate::graph::SubsetMask) -> SymMatrix {
    let mut v = vec![1.0];
    v.extend(u.incidence(n));
    SymMatrix::sym_outer(&v).with_lifted(true)
}

/// Structured parts of a dual solution of a lifted θ-family formulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaDualParts {
    pub variant: ThetaVariant,
    pub eta: f64,
    pub u: Vec<f64>,
    pub z: Vec<f64>,
    /// Indexed by [`pair_index`]; zero for pairs without a row.
    pub y: Vec<f64>,
    pub slack: SymMatrix,
    /// Frobenius norm of the assembled dual equation's defect.
    pub residual: f64,
}

impl ThetaDualParts {
    /// `[η, −uᵀ; −u, Diag(2u − z)] + Σ y_ij (0 ⊕ 2·Sym(e_ie_jᵀ)) − Diag(0 ⊕ w)`.
    pub fn assembled_slack(&self, w: &[f64]) -> SymMatrix {
        let n = self.u.len();
        let mut s = SymMatrix::zeros_lifted(n);
        s.set(0, 0, self.eta);
        for j in 1..=n {
            s.set(j, 0, -self.u[j - 1]);
            s.set(j, j, 2.0 * self.u[j - 1] - self.z[j - 1] - w[j - 1]);
        }
        for (k, (i, j)) in all_pairs(n).into_iter().enumerate() {
            s.add_to(j, i, self.y[k]);
        }
        s
    }

    /// The multiplier vector in the row order of [`build_theta_variant`].
    pub fn to_multipliers(&self, g: &Graph) -> Vec<f64> {
        let n = g.n();
        let mut y = vec![self.eta];
        y.extend(&self.u);
        y.extend(self.z.iter().map(|z| -z));
        for &(i, j) in g.edges() {
            y.push(self.y[pair_index(n, i, j)]);
        }
        if self.variant == ThetaVariant::ThetaPrime {
            for (i, j) in g.non_edges() {
                y.push(self.y[pair_index(n, i, j)]);
            }
        }
        y
    }

    /// Largest violation of the variant's sign pattern: `z ≥ 0`, plus
    /// `y|_Ē ≤ 0` (θ′), `y|_Ē = 0` (θ) or `y|_Ē = 0, y|_E ≥ 0` (θ⁺).
    pub fn sign_violation(&self, g: &Graph) -> f64 {
        let n = g.n();
        let mut worst = self.z.iter().map(|&z| (-z).max(0.0)).fold(0.0, f64::max);
        for (i, j) in g.non_edges() {
            let v = self.y[pair_index(n, i, j)];
            worst = worst.max(match self.variant {
                ThetaVariant::ThetaPrime => v.max(0.0),
                _ => v.abs(),
            });
        }
        if self.variant == ThetaVariant::ThetaPlus {
            for &(i, j) in g.edges() {
                worst = worst.max((-self.y[pair_index(n, i, j)]).max(0.0));
            }
        }
        worst
    }
}

/// Splits a multiplier vector of [`build_theta_variant`] into `(η, u, z, y)`
/// and reassembles the slack.
pub fn build_theta_dual_parts(
    g: &Graph,
    w: &WeightVec,
    variant: ThetaVariant,
    y_raw: &[f64],
) -> Result<ThetaDualParts> {
    let p = build_theta_variant(g, w, variant)?;
    if y_raw.len() != p.constraints.len() {
        return Err(Error::dims(p.constraints.len(), y_raw.len()));
    }
    let n = g.n();
    let mut y = vec![0.0; n * (n - 1) / 2];
    let mut k = 2 * n + 1;
    for &(i, j) in g.edges() {
        y[pair_index(n, i, j)] = y_raw[k];
        k += 1;
    }
    if variant == ThetaVariant::ThetaPrime {
        for (i, j) in g.non_edges() {
            y[pair_index(n, i, j)] = y_raw[k];
            k += 1;
        }
    }
    let slack = dual_slack(&p, y_raw)?;
    let mut parts = ThetaDualParts {
        variant,
        eta: y_raw[0],
        u: y_raw[1..=n].to_vec(),
        z: y_raw[n + 1..=2 * n].iter().map(|v| -v).collect(),
        y,
        slack,
        residual: 0.0,
    };
    parts.residual = parts.assembled_slack(&w.to_f64()).sub(&parts.slack)?.frobenius_norm();
    let viol = parts.sign_violation(g);
    if viol > SIGN_TOL {
        return Err(Error::SignPattern(format!(
            "multiplier sign violated by {viol:e} for {variant:?}"
        )));
    }
    Ok(parts)
}

/// Which linear map carries weights into the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LiftKind {
    /// `w ↦ Diag(0 ⊕ w)`.
    DiagZeroOplus,
    /// `w ↦ 0 ⊕ L_G(w)`.
    LaplacianZeroOplus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftMap {
    pub kind: LiftKind,
    /// Ground set size `n`; the lifted dimension is `n + 1`.
    pub n: usize,
    /// Needed for the Laplacian lift.
    pub graph: Option<Graph>,
}

impl LiftMap {
    pub fn diag(n: usize) -> Self {
        LiftMap {
            kind: LiftKind::DiagZeroOplus,
            n,
            graph: None,
        }
    }

    pub fn laplacian(g: &Graph) -> Self {
        LiftMap {
            kind: LiftKind::LaplacianZeroOplus,
            n: g.n(),
            graph: Some(g.clone()),
        }
    }

    /// Length of the weight vectors this map accepts.
    pub fn weight_len(&self) -> usize {
        match self.kind {
            LiftKind::DiagZeroOplus => self.n,
            LiftKind::LaplacianZeroOplus => self.graph.as_ref().map_or(0, |g| g.edge_count()),
        }
    }

    pub fn apply(&self, w: &WeightVec) -> Result<SymMatrix> {
        if w.len() != self.weight_len() {
            return Err(Error::dims(self.weight_len(), w.len()));
        }
        match self.kind {
            LiftKind::DiagZeroOplus => Ok(diag_objective(&w.to_f64())),
            LiftKind::LaplacianZeroOplus => {
                let g = self.graph.as_ref().expect("Laplacian lift carries its graph");
                Ok(SymMatrix::direct_sum(0.0, &g.laplacian(w)?).with_lifted(true))
            }
        }
    }

    /// `𝓛*(X̂)`: `diag(X̂[V])`, or `X̂ᵢᵢ + X̂ⱼⱼ − 2X̂ᵢⱼ` per edge.
    pub fn adjoint(&self, x: &SymMatrix) -> Result<Vec<f64>> {
        if x.dim() != self.n + 1 {
            return Err(Error::dims(self.n + 1, x.dim()));
        }
        Ok(match self.kind {
            LiftKind::DiagZeroOplus => (1..=self.n).map(|j| x.get(j, j)).collect(),
            LiftKind::LaplacianZeroOplus => self
                .graph
                .as_ref()
                .expect("Laplacian lift carries its graph")
                .edges()
                .iter()
                .map(|&(i, j)| x.get(i, i) + x.get(j, j) - 2.0 * x.get(i, j))
                .collect(),
        })
    }
}

/// Integer LP data `max{cᵀx : Ax ≤ b, x ∈ {0,1}ⁿ}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpData {
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
    pub n: usize,
}

impl LpData {
    pub fn new(n: usize, a: Vec<Vec<i64>>, b: Vec<i64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("LP needs at least one variable".into()));
        }
        if a.len() != b.len() {
            return Err(Error::dims(a.len(), b.len()));
        }
        if let Some(row) = a.iter().find(|r| r.len() != n) {
            return Err(Error::dims(n, row.len()));
        }
        Ok(LpData { a, b, n })
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    /// `Aᵀy`.
    pub fn at_y(&self, y: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|j| self.a.iter().zip(y).map(|(r, yi)| r[j] * yi).sum())
            .collect()
    }
}

/// Diagonal embedding of an LP: the `01geq` rows plus
/// `⟨Diag(−b_i ⊕ Aᵀe_i), X̂⟩ ≤ 0` per LP row, objective `Diag(0 ⊕ c)`.
pub fn build_lp_embedding(lp: &LpData, c: &WeightVec) -> Result<(SdpProblem, LiftMap)> {
    if c.len() != lp.n {
        return Err(Error::dims(lp.n, c.len()));
    }
    let n = lp.n;
    let mut p = SdpProblem::new(diag_objective(&c.to_f64()), true);
    p.constraints = base_constraints_01geq(n);
    for (row, &bi) in lp.a.iter().zip(&lp.b) {
        let mut d = vec![-bi as f64];
        d.extend(row.iter().map(|&x| x as f64));
        p.push(SymMatrix::diag_embed(&d).with_lifted(true), Sense::Le, 0.0);
    }
    Ok((p, LiftMap::diag(n)))
}

/// Number of rows that precede the LP rows in [`build_lp_embedding`].
pub fn lp_embedding_base_rows(n: usize) -> usize {
    1 + 2 * n + n * (n - 1) / 2
}

/// The MaxCut SDP: `max ⟨¼L_G(w), Y⟩` with `diag(Y) = 1`.
pub fn build_maxcut(g: &Graph, w: &WeightVec) -> Result<SdpProblem> {
    check_edge_weights(g, w)?;
    let n = g.n();
    let mut p = SdpProblem::new(g.laplacian(w)?.scaled(0.25), true);
    for i in 0..n {
        p.push(unit_outer(n, i), Sense::Eq, 1.0);
    }
    Ok(p)
}

/// Scaling note recorded on the homogeneous problem.
pub const HOMOGENEOUS_SCALING: &str = "objective 0 ⊕ L_G(w), no factor 1/4: under X = B Y Bᵀ \
     with B = ½[2 0; 1 I] it equals ⟨0 ⊕ ¼L_G(w), Y⟩, so the optimum equals the plain MaxCut SDP value";

/// Homogeneous MaxCut SDP on the lifted space: objective `0 ⊕ L_G(w)` with
/// the `01` rows.
pub fn homogenize_maxcut(g: &Graph, w: &WeightVec) -> Result<SdpProblem> {
    check_edge_weights(g, w)?;
    let lift = LiftMap::laplacian(g);
    let mut p = SdpProblem::new(lift.apply(w)?, true);
    p.constraints = base_constraints_01(g.n());
    p.objective_scaling = Some(HOMOGENEOUS_SCALING.to_string());
    Ok(p)
}

/// Change of variable `X̂ = B̂ŶB̂ᵀ`. A lifted `Ŷ ⪰ 0` with unit diagonal (for
/// instance `1 ⊕ Y` for feasible `Y` of [`build_maxcut`], or `ŝŝᵀ` with
/// `ŝ = (1, s)`) maps to a feasible point of [`homogenize_maxcut`] with the
/// same objective value; rank is preserved.
pub fn homogenize_point(yh: &SymMatrix) -> SymMatrix {
    let n = yh.dim() - 1;
    // B̂ = ½ [2 0ᵀ; 1 I]
    let bmat = |r: usize, c: usize| -> f64 {
        match (r, c) {
            (0, 0) => 1.0,
            (0, _) => 0.0,
            (_, 0) => 0.5,
            (r, c) if r == c => 0.5,
            _ => 0.0,
        }
    };
    let mut x = SymMatrix::zeros_lifted(n);
    for i in 0..=n {
        for j in 0..=i {
            let mut acc = 0.0;
            for k in 0..=n {
                let bik = bmat(i, k);
                if bik == 0.0 {
                    continue;
                }
                for l in 0..=n {
                    let bjl = bmat(j, l);
                    if bjl != 0.0 {
                        acc += bik * yh.get(k, l) * bjl;
                    }
                }
            }
            x.set(i, j, acc);
        }
    }
    x
}

/// [`build_maxcut`] plus `⟨11ᵀ, Y⟩ ≤ (n − 2)²`, which cuts off the trivial
/// shores.
pub fn build_maxcut_strengthened(g: &Graph, w: &WeightVec) -> Result<SdpProblem> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidInput(
            "strengthened MaxCut SDP needs at least two vertices".into(),
        ));
    }
    let mut p = build_maxcut(g, w)?;
    p.push(SymMatrix::sym_outer(&vec![1.0; n]), Sense::Le, ((n - 2) * (n - 2)) as f64);
    Ok(p)
}

fn sqrt_weights(w: &WeightVec) -> Result<Vec<f64>> {
    if w.0.iter().any(|&x| x < 0) {
        return Err(Error::InvalidInput("trace formulation needs w >= 0".into()));
    }
    Ok(w.0.iter().map(|&x| (x as f64).sqrt()).collect())
}

fn half_pair(n: usize, i: usize, j: usize) -> SymMatrix {
    let mut m = SymMatrix::zeros(n);
    m.set(i - 1, j - 1, 0.5);
    m
}

/// Trace formulation: `max ⟨√w√wᵀ, X⟩`, `tr X = 1`, `X_ij = 0` on edges.
pub fn build_theta_trace(g: &Graph, w: &WeightVec) -> Result<SdpProblem> {
    check_vertex_weights(g, w)?;
    let n = g.n();
    let mut p = SdpProblem::new(SymMatrix::sym_outer(&sqrt_weights(w)?), true);
    p.push(SymMatrix::identity(n), Sense::Eq, 1.0);
    for &(i, j) in g.edges() {
        p.push(half_pair(n, i, j), Sense::Eq, 0.0);
    }
    Ok(p)
}

/// [`build_theta_trace`] plus `X_ij ≥ 0` on non-edges.
pub fn build_theta_prime_trace(g: &Graph, w: &WeightVec) -> Result<SdpProblem> {
    let mut p = build_theta_trace(g, w)?;
    let n = g.n();
    for (i, j) in g.non_edges() {
        p.push(half_pair(n, i, j), Sense::Ge, 0.0);
    }
    Ok(p)
}

/// Vector chromatic number in the `σ`-form: minimize `σ` subject to
/// `diag(Y) = 1` and `Y_ij ≤ σ` on edges. The free scalar is carried as
/// `σ = t − 1` with `t` an extra diagonal cone entry (`σ ≥ −1` holds for
/// every feasible `Y`). Use [`vector_chromatic_from_t`] on the optimum.
pub fn build_vector_chromatic(g: &Graph) -> Result<SdpProblem> {
    if g.edge_count() == 0 {
        return Err(Error::InvalidInput("vector chromatic number needs an edge".into()));
    }
    let n = g.n();
    let mut obj = SymMatrix::zeros(n + 1);
    obj.set(n, n, 1.0);
    let mut p = SdpProblem::new(obj, false);
    for i in 0..n {
        p.push(unit_outer(n + 1, i), Sense::Eq, 1.0);
    }
    for &(i, j) in g.edges() {
        let mut m = SymMatrix::zeros(n + 1);
        m.set(i - 1, j - 1, 0.5);
        m.set(n, n, -1.0);
        p.push(m, Sense::Le, -1.0);
    }
    Ok(p)
}

/// `τ* = 1 − 1/σ*` with `σ* = t* − 1`.
pub fn vector_chromatic_from_t(t: f64) -> f64 {
    1.0 - 1.0 / (t - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SubsetMask;

    fn satisfies(p: &SdpProblem, x: &SymMatrix) -> bool {
        p.primal_residual(x).unwrap() < 1e-12
    }

    #[test]
    fn base_row_counts() {
        assert_eq!(base_constraints_01(1).len(), 3);
        assert_eq!(base_constraints_01geq(2).len(), 6);
        let senses: Vec<Sense> = base_constraints_01(1).iter().map(|c| c.sense).collect();
        assert_eq!(senses, vec![Sense::Eq, Sense::Eq, Sense::Ge]);
    }

    #[test]
    fn subset_embedding_satisfies_base_rows() {
        let x = embed_subset(2, SubsetMask::singleton(1));
        let mut p = SdpProblem::new(SymMatrix::zeros_lifted(2), true);
        p.constraints = base_constraints_01geq(2);
        assert!(satisfies(&p, &x));
    }

    #[test]
    fn stable_set_embeddings_feasible_for_theta_family() {
        let g = Graph::cycle(5);
        let w = WeightVec(vec![1, 2, 3, 4, 5]);
        for mask in 0..32u32 {
            let u = SubsetMask(mask);
            if !g.is_stable(u) {
                continue;
            }
            let x = embed_subset(5, u);
            for v in ThetaVariant::ALL {
                let p = build_theta_variant(&g, &w, v).unwrap();
                assert!(satisfies(&p, &x));
                assert_eq!(p.objective.inner(&x).unwrap(), w.dot_mask(u) as f64);
            }
        }
    }

    #[test]
    fn pair_indexing() {
        let pairs = all_pairs(5);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            assert_eq!(pair_index(5, i, j), k);
            assert_eq!(pair_index(5, j, i), k);
        }
    }

    #[test]
    fn slater_point_is_positive_definite() {
        for n in 1..8 {
            let x = default_slater_point(n);
            assert!(x.min_eigenvalue().unwrap() > 0.0);
            let p = build_theta(&Graph::complete(n), &WeightVec::ones(n)).unwrap();
            assert!(satisfies(&p, &x));
        }
        assert!(slater_point(3, 0.4).is_err());
    }

    #[test]
    fn dual_parts_round_trip() {
        let g = Graph::path(3);
        let w = WeightVec::ones(3);
        let parts = ThetaDualParts {
            variant: ThetaVariant::ThetaPrime,
            eta: 2.0,
            u: vec![1.0, 1.0, 1.0],
            z: vec![0.0, 0.5, 0.0],
            y: vec![1.0, -0.5, 1.0],
            slack: SymMatrix::zeros_lifted(3),
            residual: 0.0,
        };
        let raw = parts.to_multipliers(&g);
        let back = build_theta_dual_parts(&g, &w, ThetaVariant::ThetaPrime, &raw).unwrap();
        assert_eq!(back.eta, 2.0);
        assert_eq!(back.y, parts.y);
        assert_eq!(back.z, parts.z);
        assert!(back.residual < 1e-12);
        // positive multiplier on a non-edge breaks the θ′ sign pattern
        let mut bad = raw.clone();
        *bad.last_mut().unwrap() = 1.0;
        assert!(matches!(
            build_theta_dual_parts(&g, &w, ThetaVariant::ThetaPrime, &bad),
            Err(Error::SignPattern(_))
        ));
    }

    #[test]
    fn lp_embedding_shape() {
        let lp = LpData::new(2, vec![vec![1, 1]], vec![1]).unwrap();
        let (p, lift) = build_lp_embedding(&lp, &WeightVec::ones(2)).unwrap();
        assert_eq!(p.constraints.len(), lp_embedding_base_rows(2) + 1);
        let x = embed_subset(2, SubsetMask::singleton(1));
        assert!(satisfies(&p, &x));
        let both = embed_subset(2, SubsetMask(0b11));
        assert!(!satisfies(&p, &both));
        assert_eq!(lift.adjoint(&x).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn laplacian_lift_adjoint() {
        let g = Graph::path(3);
        let lift = LiftMap::laplacian(&g);
        let x = embed_subset(3, SubsetMask(0b001));
        // edge 12 is cut, edge 23 is not
        assert_eq!(lift.adjoint(&x).unwrap(), vec![1.0, 0.0]);
        let w = WeightVec(vec![2, 5]);
        let lw = lift.apply(&w).unwrap();
        let lhs = lw.inner(&x).unwrap();
        let rhs: f64 = lift.adjoint(&x).unwrap().iter().zip(w.to_f64()).map(|(a, b)| a * b).sum();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn homogenized_point_is_feasible_with_equal_value() {
        let g = Graph::complete(3);
        let w = WeightVec(vec![1, 2, 3]);
        let plain = build_maxcut(&g, &w).unwrap();
        let homog = homogenize_maxcut(&g, &w).unwrap();
        let s = [1.0, -1.0, 1.0];
        let y = SymMatrix::sym_outer(&s);
        for yh in [
            SymMatrix::direct_sum(1.0, &y),
            SymMatrix::sym_outer(&[1.0, 1.0, -1.0, 1.0]),
        ] {
            let x = homogenize_point(&yh);
            assert!(satisfies(&homog, &x));
            assert!(x.is_psd(1e-12));
            let a = plain.objective.inner(&y).unwrap();
            let b = homog.objective.inner(&x).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        // the shore {i : s_i = 1} embeds as χ_U
        let x = homogenize_point(&SymMatrix::sym_outer(&[1.0, 1.0, -1.0, 1.0]));
        assert_eq!(x, embed_subset(3, SubsetMask(0b101)));
    }

    #[test]
    fn strengthened_maxcut_rejects_tiny_graphs() {
        assert!(build_maxcut_strengthened(&Graph::empty(1), &WeightVec(vec![])).is_err());
        let p = build_maxcut_strengthened(&Graph::path(4), &WeightVec(vec![-1; 3])).unwrap();
        assert_eq!(p.constraints.last().unwrap().rhs, 4.0);
    }

    #[test]
    fn trace_embedding_of_stable_set() {
        let g = Graph::cycle(5);
        let w = WeightVec(vec![1, 2, 3, 4, 5]);
        let p = build_theta_prime_trace(&g, &w).unwrap();
        let u = SubsetMask::from_vertices([2, 4]);
        let wu = w.dot_mask(u) as f64;
        let v: Vec<f64> = (1..=5)
            .map(|i| if u.contains(i) { (w.0[i - 1] as f64).sqrt() } else { 0.0 })
            .collect();
        let x = SymMatrix::sym_outer(&v).scaled(1.0 / wu);
        assert!(satisfies(&p, &x));
        assert!((p.objective.inner(&x).unwrap() - wu).abs() < 1e-12);
        assert!(build_theta_trace(&g, &WeightVec(vec![1, -1, 1, 1, 1])).is_err());
    }

    #[test]
    fn vector_chromatic_needs_an_edge() {
        assert!(build_vector_chromatic(&Graph::empty(3)).is_err());
        assert_eq!(vector_chromatic_from_t(0.0), 2.0);
    }
}
