//! Semidefinite programs in inequality form and a primal-dual interior-point
//! solver.
//!
//! A problem is `max` (or `min`) `⟨C, X⟩` over `X ⪰ 0` subject to rows
//! `⟨A_i, X⟩ {≤, =, ≥} b_i`. The dual multipliers follow the usual sign
//! conventions for the stated sense: for a maximization problem `y_i ≥ 0` on
//! `≤` rows, `y_i ≤ 0` on `≥` rows, free on `=` rows, and the dual slack is
//! `Σ y_i A_i − C ⪰ 0`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symmat::SymMatrix;

pub const DEFAULT_GAP_TOL: f64 = 1e-8;
pub const DEFAULT_FEAS_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 100;
pub const DEFAULT_STEP_FRACTION: f64 = 0.98;
pub const MAX_DIM: usize = 60;
pub const MAX_CONSTRAINTS: usize = 2500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "LE")]
    Le,
    #[serde(rename = "EQ")]
    Eq,
    #[serde(rename = "GE")]
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub matrix: SymMatrix,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(matrix: SymMatrix, sense: Sense, rhs: f64) -> Self {
        Constraint { matrix, sense, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    pub dim: usize,
    pub objective: SymMatrix,
    pub constraints: Vec<Constraint>,
    pub maximize: bool,
    /// Free-form note on how the objective was normalized, copied into the report.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective_scaling: Option<String>,
}

impl SdpProblem {
    pub fn new(objective: SymMatrix, maximize: bool) -> Self {
        SdpProblem {
            dim: objective.dim(),
            objective,
            constraints: Vec::new(),
            maximize,
            objective_scaling: None,
        }
    }

    pub fn push(&mut self, matrix: SymMatrix, sense: Sense, rhs: f64) {
        self.constraints.push(Constraint::new(matrix, sense, rhs));
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.dim() != self.dim {
            return Err(Error::dims(self.dim, self.objective.dim()));
        }
        for c in &self.constraints {
            if c.matrix.dim() != self.dim {
                return Err(Error::dims(self.dim, c.matrix.dim()));
            }
            if !c.rhs.is_finite() {
                return Err(Error::InvalidInput("non-finite right-hand side".into()));
            }
        }
        if self.dim > MAX_DIM {
            return Err(Error::SizeLimit {
                what: "cone dimension",
                got: self.dim,
                limit: MAX_DIM,
            });
        }
        if self.constraints.len() > MAX_CONSTRAINTS {
            return Err(Error::SizeLimit {
                what: "constraint count",
                got: self.constraints.len(),
                limit: MAX_CONSTRAINTS,
            });
        }
        Ok(())
    }

    /// `𝒜(X)`: the vector of row values `⟨A_i, X⟩`.
    pub fn apply(&self, x: &SymMatrix) -> Result<Vec<f64>> {
        self.constraints.iter().map(|c| c.matrix.inner(x)).collect()
    }

    /// `𝒜*(y) = Σ y_i A_i`.
    pub fn adjoint(&self, y: &[f64]) -> Result<SymMatrix> {
        if y.len() != self.constraints.len() {
            return Err(Error::dims(self.constraints.len(), y.len()));
        }
        let mut out = SymMatrix::zeros(self.dim);
        for (c, &yi) in self.constraints.iter().zip(y) {
            if yi != 0.0 {
                out.add_scaled(&c.matrix, yi)?;
            }
        }
        Ok(out.with_lifted(self.objective.is_lifted()))
    }

    /// Largest violation of a row by `x`, relative to `1 + max |b_i|`.
    pub fn primal_residual(&self, x: &SymMatrix) -> Result<f64> {
        let vals = self.apply(x)?;
        let bmax = self.constraints.iter().map(|c| c.rhs.abs()).fold(0.0, f64::max);
        let worst = self
            .constraints
            .iter()
            .zip(vals)
            .map(|(c, v)| match c.sense {
                Sense::Eq => (v - c.rhs).abs(),
                Sense::Le => (v - c.rhs).max(0.0),
                Sense::Ge => (c.rhs - v).max(0.0),
            })
            .fold(0.0, f64::max);
        Ok(worst / (1.0 + bmax))
    }

    /// Largest sign violation of a multiplier vector.
    pub fn dual_sign_violation(&self, y: &[f64]) -> f64 {
        let flip = if self.maximize { 1.0 } else { -1.0 };
        self.constraints
            .iter()
            .zip(y)
            .map(|(c, &yi)| match c.sense {
                Sense::Eq => 0.0,
                Sense::Le => (-flip * yi).max(0.0),
                Sense::Ge => (flip * yi).max(0.0),
            })
            .fold(0.0, f64::max)
    }
}

/// `Σ y_i A_i − C` for a maximization problem and `C − Σ y_i A_i` for a
/// minimization problem, i.e. the matrix that dual feasibility requires to be
/// positive semidefinite.
pub fn dual_slack(p: &SdpProblem, y: &[f64]) -> Result<SymMatrix> {
    let ay = p.adjoint(y)?;
    if p.maximize {
        ay.sub(&p.objective)
    } else {
        p.objective.sub(&ay)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iter: usize,
    pub step_fraction: f64,
    /// Positive definite starting point; the default start is a multiple of `I`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_x: Option<SymMatrix>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            gap_tol: DEFAULT_GAP_TOL,
            feas_tol: DEFAULT_FEAS_TOL,
            max_iter: DEFAULT_MAX_ITER,
            step_fraction: DEFAULT_STEP_FRACTION,
            initial_x: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    SlaterFail,
    IterLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub primal_value: f64,
    pub dual_value: f64,
    /// `|primal_value − dual_value|`.
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub step_fraction: f64,
    pub max_iter: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective_scaling: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimalSolution {
    pub x: SymMatrix,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualSolution {
    pub y: Vec<f64>,
    /// See [`dual_slack`].
    pub slack: SymMatrix,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub primal: PrimalSolution,
    pub dual: DualSolution,
    pub report: SolveReport,
}

impl Solution {
    /// The optimal value, taken as the midpoint of the certified bracket.
    pub fn value(&self) -> f64 {
        0.5 * (self.primal.value + self.dual.value)
    }
}

/// One row in internal standard form, `⟨A, X⟩ + g·s = b` with `s ≥ 0`.
struct Row {
    /// Full-square nonzeros `(k, l, a_kl)`, both triangles listed.
    entries: Vec<(usize, usize, f64)>,
    g: f64,
    b: f64,
}

fn sparse_rows(p: &SdpProblem) -> (Vec<Row>, Vec<f64>) {
    let mut rows = Vec::with_capacity(p.constraints.len());
    let mut scales = Vec::with_capacity(p.constraints.len());
    for c in &p.constraints {
        let norm = c.matrix.frobenius_norm();
        let s = if norm > 0.0 { 1.0 / norm } else { 1.0 };
        let mut entries = Vec::new();
        for (i, j, v) in c.matrix.lower_entries() {
            if v != 0.0 {
                entries.push((i, j, v * s));
                if i != j {
                    entries.push((j, i, v * s));
                }
            }
        }
        let g = match c.sense {
            Sense::Le => 1.0,
            Sense::Eq => 0.0,
            Sense::Ge => -1.0,
        };
        rows.push(Row {
            entries,
            g,
            b: c.rhs * s,
        });
        scales.push(s);
    }
    (rows, scales)
}

fn dense(m: &SymMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| m.get(i, j))
}

fn to_sym(m: &DMatrix<f64>, lifted: bool) -> SymMatrix {
    let mut out = SymMatrix::zeros(m.nrows());
    for i in 0..m.nrows() {
        for j in 0..=i {
            out.set(i, j, 0.5 * (m[(i, j)] + m[(j, i)]));
        }
    }
    out.with_lifted(lifted)
}

fn row_apply(r: &Row, x: &DMatrix<f64>) -> f64 {
    r.entries.iter().map(|&(k, l, v)| v * x[(k, l)]).sum()
}

fn adjoint(rows: &[Row], y: &DVector<f64>, n: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(n, n);
    for (r, &yi) in rows.iter().zip(y.iter()) {
        if yi != 0.0 {
            for &(k, l, v) in &r.entries {
                out[(k, l)] += yi * v;
            }
        }
    }
    out
}

/// Least-squares projector onto the equality rows, used to strip rounding
/// error from primal directions.
struct EqProjector {
    idx: Vec<usize>,
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

impl EqProjector {
    fn new(rows: &[Row], n: usize) -> Option<Self> {
        let idx: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].g == 0.0).collect();
        if idx.is_empty() {
            return None;
        }
        let dense_rows: Vec<DMatrix<f64>> = idx
            .iter()
            .map(|&i| adjoint(&rows[i..=i], &DVector::from_element(1, 1.0), n))
            .collect();
        let k = idx.len();
        let gram = DMatrix::from_fn(k, k, |a, b| frob_inner(&dense_rows[a], &dense_rows[b]));
        let dmax = (0..k).map(|a| gram[(a, a)]).fold(0.0, f64::max);
        let chol = gram.cholesky()?;
        // reject numerically dependent equality systems
        let l = chol.l();
        if (0..k).any(|a| l[(a, a)] * l[(a, a)] < 1e-12 * dmax) {
            return None;
        }
        Some(EqProjector { idx, chol })
    }

    /// Adjusts `dx` so the equality rows reproduce `rp` exactly.
    fn correct(&self, rows: &[Row], rp: &DVector<f64>, dx: &mut DMatrix<f64>) {
        let r = DVector::from_iterator(
            self.idx.len(),
            self.idx.iter().map(|&i| rp[i] - row_apply(&rows[i], dx)),
        );
        let c = self.chol.solve(&r);
        for (a, &i) in self.idx.iter().enumerate() {
            for &(k, l, v) in &rows[i].entries {
                dx[(k, l)] += c[a] * v;
            }
        }
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            let a = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = a;
            m[(j, i)] = a;
        }
    }
}

fn frob_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Largest `α ≤ 1/fraction`-capped step keeping `L Lᵀ + αΔ ⪰ 0`.
fn max_step_psd(l: &DMatrix<f64>, delta: &DMatrix<f64>) -> Option<f64> {
    let b = l.solve_lower_triangular(delta)?;
    let mut c = l.solve_lower_triangular(&b.transpose())?;
    symmetrize(&mut c);
    let lam = c.symmetric_eigenvalues().min();
    Some(if lam < 0.0 { -1.0 / lam } else { f64::INFINITY })
}

fn max_step_vec(s: &[f64], ds: &[f64], mask: &[bool]) -> f64 {
    let mut a = f64::INFINITY;
    for i in 0..s.len() {
        if mask[i] && ds[i] < 0.0 {
            a = a.min(-s[i] / ds[i]);
        }
    }
    a
}

/// Newton system data reused by predictor and corrector.
struct NtSystem {
    g_mat: DMatrix<f64>,
    d: Vec<f64>,
    /// Rows in scaled coordinates, `GᵀA_jG`.
    scaled: Vec<DMatrix<f64>>,
    schur: SchurSolver,
}

/// Factorization of `M = BᵀB`: QR of `B` when it has full column rank,
/// otherwise a slightly regularized Cholesky factor of `M`.
enum SchurSolver {
    Qr { b: DMatrix<f64>, r: DMatrix<f64> },
    Chol { m: DMatrix<f64>, chol: nalgebra::Cholesky<f64, nalgebra::Dyn> },
}

impl SchurSolver {
    fn new(b: DMatrix<f64>) -> Option<Self> {
        let m = b.ncols();
        if b.nrows() >= m {
            let r = b.clone().qr().r();
            let dmax = (0..m).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
            if (0..m).all(|i| r[(i, i)].abs() > 1e-14 * dmax) {
                return Some(SchurSolver::Qr { b, r });
            }
        }
        let mm = b.transpose() * &b;
        let scale = (0..m).map(|i| mm[(i, i)]).fold(0.0, f64::max).max(1e-300);
        let reg = &mm + DMatrix::identity(m, m) * (1e-13 * scale);
        let chol = reg.cholesky()?;
        Some(SchurSolver::Chol { m: mm, chol })
    }

    fn solve_once(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        match self {
            SchurSolver::Qr { r, .. } => {
                let t = r.tr_solve_upper_triangular(rhs)?;
                r.solve_upper_triangular(&t)
            }
            SchurSolver::Chol { chol, .. } => Some(chol.solve(rhs)),
        }
    }

    fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        match self {
            SchurSolver::Qr { b, .. } => b.tr_mul(&(b * v)),
            SchurSolver::Chol { m, .. } => m * v,
        }
    }

    /// Solve with two rounds of iterative refinement.
    fn solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let mut x = self.solve_once(rhs)?;
        for _ in 0..2 {
            let res = rhs - self.apply(&x);
            x += self.solve_once(&res)?;
        }
        Some(x)
    }
}

struct Direction {
    dx: DMatrix<f64>,
    dz: DMatrix<f64>,
    /// `dx` and `dz` in scaled coordinates.
    dx_s: DMatrix<f64>,
    dz_s: DMatrix<f64>,
    dy: DVector<f64>,
    ds: Vec<f64>,
    dzl: Vec<f64>,
}

/// Solves an SDP with an infeasible primal-dual path-following method using
/// Nesterov–Todd scaling and Mehrotra predictor-corrector steps.
///
/// Returns `Error::NotOptimal` carrying the report when the tolerances are
/// not met; the report then says whether progress stalled (`SlaterFail`) or
/// the iteration cap was hit.
///
/// A run that stalls is repeated with shorter steps (fractions 0.95 and 0.9
/// of the distance to the cone boundary), which keeps iterates better
/// centered on degenerate instances.
pub fn solve(p: &SdpProblem, opts: &SolveOptions) -> Result<Solution> {
    p.validate()?;
    let mut fracs = vec![opts.step_fraction];
    fracs.extend([0.95, 0.9].into_iter().filter(|&f| f < opts.step_fraction));
    let mut last = None;
    for frac in fracs {
        let o = SolveOptions { step_fraction: frac, ..opts.clone() };
        match solve_with(p, &o) {
            Err(Error::NotOptimal(r)) if r.status == SolveStatus::SlaterFail => {
                last = Some(Error::NotOptimal(r));
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt ran"))
}

fn solve_with(p: &SdpProblem, opts: &SolveOptions) -> Result<Solution> {
    let n = p.dim;
    let m = p.constraints.len();
    let (rows, scales) = sparse_rows(p);
    let c_norm = p.objective.frobenius_norm();
    let c_scale = if c_norm > 1.0 { c_norm } else { 1.0 };
    let sign = if p.maximize { -1.0 } else { 1.0 };
    let cm = dense(&p.objective) * (sign / c_scale);
    let b = DVector::from_iterator(m, rows.iter().map(|r| r.b));
    let g: Vec<f64> = rows.iter().map(|r| r.g).collect();
    let ineq: Vec<bool> = g.iter().map(|&x| x != 0.0).collect();
    let n_ineq = ineq.iter().filter(|&&f| f).count();
    let b_user_max = p.constraints.iter().map(|c| c.rhs.abs()).fold(0.0, f64::max);
    let c_user_max = p.objective.lower_entries().map(|e| e.2.abs()).fold(0.0, f64::max);

    // starting point
    let sqrt_n = (n as f64).sqrt();
    let xi = rows
        .iter()
        .map(|r| n as f64 * (1.0 + r.b.abs()) / 2.0)
        .fold(10f64.max(sqrt_n), f64::max);
    let zeta = 10f64.max(sqrt_n);
    let mut x = match &opts.initial_x {
        Some(x0) => {
            if x0.dim() != n {
                return Err(Error::dims(n, x0.dim()));
            }
            dense(x0)
        }
        None => DMatrix::identity(n, n) * xi,
    };
    let mut z = DMatrix::identity(n, n) * zeta;
    let mut y = DVector::zeros(m);
    let mut s: Vec<f64> = ineq.iter().map(|&f| if f { xi } else { 0.0 }).collect();
    let mut zl: Vec<f64> = ineq.iter().map(|&f| if f { zeta } else { 0.0 }).collect();
    if opts.initial_x.is_some() {
        // slack consistent with the supplied point where it is positive
        for (i, r) in rows.iter().enumerate() {
            if ineq[i] {
                let v = (r.b - row_apply(r, &x)) / r.g;
                s[i] = v.max(1.0);
            }
        }
    }

    let mut report = SolveReport {
        status: SolveStatus::IterLimit,
        primal_value: f64::NAN,
        dual_value: f64::NAN,
        gap: f64::INFINITY,
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        iterations: 0,
        gap_tol: opts.gap_tol,
        feas_tol: opts.feas_tol,
        step_fraction: opts.step_fraction,
        max_iter: opts.max_iter,
        objective_scaling: p.objective_scaling.clone(),
    };
    let mut stalled = 0usize;
    let eq = EqProjector::new(&rows, n);

    for iter in 0..=opts.max_iter {
        report.iterations = iter;
        // residuals
        let ax: Vec<f64> = rows.iter().map(|r| row_apply(r, &x)).collect();
        let rp = DVector::from_fn(m, |i, _| b[i] - ax[i] - g[i] * s[i]);
        let rd = &cm - adjoint(&rows, &y, n) - &z;
        let rdl: Vec<f64> = (0..m)
            .map(|i| if ineq[i] { -g[i] * y[i] - zl[i] } else { 0.0 })
            .collect();

        // progress in the user's scale
        let pres = (0..m)
            .map(|i| (rp[i] / scales[i]).abs())
            .fold(0.0, f64::max)
            / (1.0 + b_user_max);
        let dres = rd.iter().map(|v| v.abs()).fold(0.0, f64::max) * c_scale / (1.0 + c_user_max);
        let lres = rdl.iter().map(|v| v.abs()).fold(0.0, f64::max) * c_scale / (1.0 + c_user_max);
        let pobj = frob_inner(&cm, &x) * c_scale;
        let dobj = b.dot(&y) * c_scale;
        let gap = (pobj - dobj).abs();
        report.primal_residual = pres;
        report.dual_residual = dres.max(lres);
        report.primal_value = sign * pobj;
        report.dual_value = sign * dobj;
        report.gap = gap;
        if pres <= opts.feas_tol && report.dual_residual <= opts.feas_tol && gap <= opts.gap_tol {
            report.status = SolveStatus::Optimal;
            break;
        }
        if iter == opts.max_iter {
            break;
        }

        let cs: f64 = (0..m).filter(|&i| ineq[i]).map(|i| s[i] * zl[i]).sum();
        let mu = (frob_inner(&x, &z) + cs) / (n + n_ineq) as f64;

        let sys = match nt_system(&rows, &x, &z, &s, &zl, &g, &ineq) {
            Some(sys) => sys,
            None => {
                report.status = SolveStatus::SlaterFail;
                break;
            }
        };

        // predictor
        let rc = DMatrix::from_fn(n, n, |i, j| if i == j { -sys.d[i] } else { 0.0 });
        let rcl: Vec<f64> = (0..m).map(|i| if ineq[i] { -s[i] } else { 0.0 }).collect();
        let Some(pred) = direction(&rows, eq.as_ref(), &sys, &rp, &rd, &rdl, &rc, &rcl, &s, &zl, &g, &ineq)
        else {
            report.status = SolveStatus::SlaterFail;
            break;
        };
        let lx = x.clone().cholesky().map(|c| c.l());
        let lz = z.clone().cholesky().map(|c| c.l());
        let (Some(lx), Some(lz)) = (lx, lz) else {
            report.status = SolveStatus::SlaterFail;
            break;
        };
        let ap = step_len(&lx, &pred.dx, &s, &pred.ds, &ineq, 1.0);
        let ad = step_len(&lz, &pred.dz, &zl, &pred.dzl, &ineq, 1.0);
        let (Some(ap), Some(ad)) = (ap, ad) else {
            report.status = SolveStatus::SlaterFail;
            break;
        };
        let xa = &x + &pred.dx * ap;
        let za = &z + &pred.dz * ad;
        let csa: f64 = (0..m)
            .filter(|&i| ineq[i])
            .map(|i| (s[i] + ap * pred.ds[i]) * (zl[i] + ad * pred.dzl[i]))
            .sum();
        let mu_aff = (frob_inner(&xa, &za) + csa) / (n + n_ineq) as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector
        let second = &pred.dx_s * &pred.dz_s + &pred.dz_s * &pred.dx_s;
        let kmat = DMatrix::from_fn(n, n, |i, j| {
            let mut h = -second[(i, j)];
            if i == j {
                h += 2.0 * sigma * mu - 2.0 * sys.d[i] * sys.d[i];
            }
            h / (sys.d[i] + sys.d[j])
        });
        let rc = kmat;
        let rcl: Vec<f64> = (0..m)
            .map(|i| {
                if ineq[i] {
                    (sigma * mu - s[i] * zl[i] - pred.ds[i] * pred.dzl[i]) / zl[i]
                } else {
                    0.0
                }
            })
            .collect();
        let Some(dir) = direction(&rows, eq.as_ref(), &sys, &rp, &rd, &rdl, &rc, &rcl, &s, &zl, &g, &ineq)
        else {
            report.status = SolveStatus::SlaterFail;
            break;
        };
        let tau = opts.step_fraction;
        let ap = step_len(&lx, &dir.dx, &s, &dir.ds, &ineq, tau);
        let ad = step_len(&lz, &dir.dz, &zl, &dir.dzl, &ineq, tau);
        let (Some(ap), Some(ad)) = (ap, ad) else {
            report.status = SolveStatus::SlaterFail;
            break;
        };

        x += &dir.dx * ap;
        symmetrize(&mut x);
        z += &dir.dz * ad;
        symmetrize(&mut z);
        y += &dir.dy * ad;
        for i in 0..m {
            if ineq[i] {
                s[i] += ap * dir.ds[i];
                zl[i] += ad * dir.dzl[i];
            }
        }
        if ap.max(ad) < 1e-10 {
            stalled += 1;
            if stalled >= 3 {
                report.status = SolveStatus::SlaterFail;
                break;
            }
        } else {
            stalled = 0;
        }
    }

    if report.status != SolveStatus::Optimal {
        return Err(Error::NotOptimal(Box::new(report)));
    }

    let lifted = p.objective.is_lifted();
    let x_user = to_sym(&x, lifted);
    // user multipliers: undo the row and objective scaling and the min/max flip
    let y_user: Vec<f64> = (0..m)
        .map(|i| y[i] * scales[i] * c_scale * sign)
        .collect();
    let slack = dual_slack(p, &y_user)?;
    let primal_value = p.objective.inner(&x_user)?;
    let dual_value: f64 = p.constraints.iter().zip(&y_user).map(|(c, yi)| c.rhs * yi).sum();
    report.primal_value = primal_value;
    report.dual_value = dual_value;
    report.gap = (primal_value - dual_value).abs();
    report.primal_residual = p.primal_residual(&x_user)?;
    Ok(Solution {
        primal: PrimalSolution {
            x: x_user,
            value: primal_value,
        },
        dual: DualSolution {
            y: y_user,
            slack,
            value: dual_value,
        },
        report,
    })
}

fn step_len(
    l: &DMatrix<f64>,
    dm: &DMatrix<f64>,
    v: &[f64],
    dv: &[f64],
    mask: &[bool],
    tau: f64,
) -> Option<f64> {
    let a = max_step_psd(l, dm)?.min(max_step_vec(v, dv, mask));
    Some((tau * a).min(1.0))
}

fn nt_system(
    rows: &[Row],
    x: &DMatrix<f64>,
    z: &DMatrix<f64>,
    s: &[f64],
    zl: &[f64],
    g: &[f64],
    ineq: &[bool],
) -> Option<NtSystem> {
    let n = x.nrows();
    let m = rows.len();
    let l = x.clone().cholesky()?.l();
    let r = z.clone().cholesky()?.l();
    let svd = (r.transpose() * &l).svd(false, true);
    let vt = svd.v_t?;
    let d: Vec<f64> = svd.singular_values.iter().copied().collect();
    if d.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
        return None;
    }
    let v = vt.transpose();
    let dm_half = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 / d[i].sqrt() } else { 0.0 });
    let g_mat = &l * &v * dm_half;

    // Schur complement M = BᵀB with column j of B holding svec(GᵀA_jG) and
    // the scaled linear-cone entry; factoring B by QR avoids squaring its
    // condition number.
    let sdim = n * (n + 1) / 2;
    let n_ineq = ineq.iter().filter(|&&f| f).count();
    let mut bmat = DMatrix::zeros(sdim + n_ineq, m);
    let mut t = DMatrix::zeros(n, n);
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut lin_row = sdim;
    let mut scaled = Vec::with_capacity(m);
    for (j, rj) in rows.iter().enumerate() {
        t.fill(0.0);
        for &(p, q, a) in &rj.entries {
            for k in 0..n {
                let gpk = g_mat[(p, k)] * a;
                if gpk != 0.0 {
                    for l2 in 0..n {
                        t[(k, l2)] += gpk * g_mat[(q, l2)];
                    }
                }
            }
        }
        let mut idx = 0;
        for k in 0..n {
            bmat[(idx, j)] = t[(k, k)];
            idx += 1;
            for l2 in 0..k {
                bmat[(idx, j)] = sqrt2 * 0.5 * (t[(k, l2)] + t[(l2, k)]);
                idx += 1;
            }
        }
        if ineq[j] {
            bmat[(lin_row, j)] = g[j].abs() * (s[j] / zl[j]).sqrt();
            lin_row += 1;
        }
        symmetrize(&mut t);
        scaled.push(t.clone());
    }
    let schur = SchurSolver::new(bmat)?;
    Some(NtSystem {
        g_mat,
        d,
        scaled,
        schur,
    })
}

#[allow(clippy::too_many_arguments)]
fn direction(
    rows: &[Row],
    eq: Option<&EqProjector>,
    sys: &NtSystem,
    rp: &DVector<f64>,
    rd: &DMatrix<f64>,
    rdl: &[f64],
    rc_s: &DMatrix<f64>,
    rcl: &[f64],
    s: &[f64],
    zl: &[f64],
    g: &[f64],
    ineq: &[bool],
) -> Option<Direction> {
    let n = rd.nrows();
    let m = rows.len();
    // everything below lives in the scaled space where X and Z both equal D
    let rd_s = sys.g_mat.transpose() * rd * &sys.g_mat;
    let inner = rc_s - &rd_s;
    let rhs = DVector::from_fn(m, |i, _| {
        let mut v = rp[i] - frob_inner(&sys.scaled[i], &inner);
        if ineq[i] {
            v -= g[i] * (rcl[i] - s[i] / zl[i] * rdl[i]);
        }
        v
    });
    let dy = sys.schur.solve(&rhs)?;
    if dy.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let mut dz = rd - adjoint(rows, &dy, n);
    symmetrize(&mut dz);
    let mut dz_s = rd_s;
    for (a, &yi) in sys.scaled.iter().zip(dy.iter()) {
        dz_s -= a * yi;
    }
    symmetrize(&mut dz_s);
    let dx_s = rc_s - &dz_s;
    let mut dx = &sys.g_mat * &dx_s * sys.g_mat.transpose();
    symmetrize(&mut dx);
    if let Some(eq) = eq {
        eq.correct(rows, rp, &mut dx);
    }
    let mut dzl = vec![0.0; m];
    let mut ds = vec![0.0; m];
    for i in 0..m {
        if ineq[i] {
            dzl[i] = rdl[i] - g[i] * dy[i];
            // slack from the row itself so the primal rows stay exact
            ds[i] = (rp[i] - row_apply(&rows[i], &dx)) / g[i];
        }
    }
    Some(Direction { dx, dz, dx_s, dz_s, dy, ds, dzl })
}

/// Values of the four programs in the weak-duality chain: integral primal,
/// primal, dual, integral dual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub isdp: Option<f64>,
    pub sdp: f64,
    pub sdd: f64,
    pub isdd: Option<f64>,
    pub tol: f64,
    pub ordered: bool,
    /// Each chain link that fails, e.g. `"sdp <= sdd"`.
    pub violations: Vec<String>,
}

pub const CHAIN_TOL: f64 = 1e-7;

/// Checks `ISDP ≤ SDP ≤ SDD ≤ ISDD` (reversed for minimization) within
/// [`CHAIN_TOL`]. The SDP and SDD values are recomputed from the supplied
/// points, which must be feasible to within the solver tolerances.
pub fn verify_chain(
    p: &SdpProblem,
    primal: &PrimalSolution,
    dual: &DualSolution,
    integral_primal: Option<f64>,
    integral_dual: Option<f64>,
) -> Result<ChainReport> {
    let sdp = p.objective.inner(&primal.x)?;
    if dual.y.len() != p.constraints.len() {
        return Err(Error::dims(p.constraints.len(), dual.y.len()));
    }
    let sdd: f64 = p.constraints.iter().zip(&dual.y).map(|(c, y)| c.rhs * y).sum();
    let tol = CHAIN_TOL;
    let mut chain: Vec<(&str, f64)> = Vec::new();
    if let Some(v) = integral_primal {
        chain.push(("isdp", v));
    }
    chain.push(("sdp", sdp));
    chain.push(("sdd", sdd));
    if let Some(v) = integral_dual {
        chain.push(("isdd", v));
    }
    if !p.maximize {
        chain.reverse();
    }
    let violations: Vec<String> = chain
        .windows(2)
        .filter(|w| w[0].1 > w[1].1 + tol * (1.0 + w[1].1.abs()))
        .map(|w| format!("{} <= {}", w[0].0, w[1].0))
        .collect();
    Ok(ChainReport {
        isdp: integral_primal,
        sdp,
        sdd,
        isdd: integral_dual,
        tol,
        ordered: violations.is_empty(),
        violations,
    })
}
