//! Dense symmetric matrices over a plain index set `{0..dim}` or over the
//! lifted index set `{0} ∪ V`, where index `0` is the embedding coordinate and
//! vertex `j` sits at index `j`.
//!
//! Only the lower triangle is stored, so every value of [`SymMatrix`] is
//! symmetric by construction.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default relative tolerance for [`SymMatrix::is_psd`].
pub const PSD_TOL: f64 = 1e-8;
/// Default relative tolerance for [`SymMatrix::numeric_rank`].
pub const RANK_TOL: f64 = 1e-7;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TARGET: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    lifted: bool,
    data: Vec<f64>,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        SymMatrix {
            dim,
            lifted: false,
            data: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    /// Zero matrix indexed by `{0} ∪ [n]`, i.e. of dimension `n + 1`.
    pub fn zeros_lifted(n: usize) -> Self {
        let mut m = Self::zeros(n + 1);
        m.lifted = true;
        m
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from full square rows, rejecting asymmetry above `1e-12`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::dims(dim, row.len()));
            }
            for j in 0..=i {
                let (a, b) = (rows[i][j], rows[j][i]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(Error::InvalidInput(format!(
                        "matrix not symmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
                m.set(i, j, 0.5 * (a + b));
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_lifted(&self) -> bool {
        self.lifted
    }

    pub fn with_lifted(mut self, lifted: bool) -> Self {
        self.lifted = lifted;
        self
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[packed(i, j)]
    }

    /// Sets entries `(i,j)` and `(j,i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[packed(i, j)] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[packed(i, j)] += v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Iterates over the stored lower triangle as `(i, j, value)` with `i >= j`.
    pub fn lower_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| (0..=i).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut m = self.clone();
        m.data.iter_mut().for_each(|x| *x *= s);
        m
    }

    pub fn add_scaled(&mut self, other: &SymMatrix, s: f64) -> Result<()> {
        if other.dim != self.dim {
            return Err(Error::dims(self.dim, other.dim));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
        Ok(())
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        let mut out = self.clone();
        out.add_scaled(other, -1.0)?;
        Ok(out)
    }

    /// Frobenius inner product `Σ_ij a_ij b_ij` over the full square.
    pub fn inner(&self, other: &SymMatrix) -> Result<f64> {
        if other.dim != self.dim {
            return Err(Error::dims(self.dim, other.dim));
        }
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..i {
                acc += 2.0 * self.get(i, j) * other.get(i, j);
            }
            acc += self.get(i, i) * other.get(i, i);
        }
        Ok(acc)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner(self).unwrap_or(0.0).sqrt()
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> Result<f64> {
        if other.dim != self.dim {
            return Err(Error::dims(self.dim, other.dim));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Trailing principal block `X[V]` of a lifted matrix.
    pub fn vertex_block(&self) -> SymMatrix {
        let n = self.dim - 1;
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                out.set(i, j, self.get(i + 1, j + 1));
            }
        }
        out
    }

    /// Direct sum `a ⊕ B`, a lifted matrix with `a` at `(0,0)`.
    pub fn direct_sum(a: f64, block: &SymMatrix) -> SymMatrix {
        let n = block.dim;
        let mut out = SymMatrix::zeros_lifted(n);
        out.set(0, 0, a);
        for i in 0..n {
            for j in 0..=i {
                out.set(i + 1, j + 1, block.get(i, j));
            }
        }
        out
    }

    /// `u uᵀ`.
    pub fn sym_outer(u: &[f64]) -> SymMatrix {
        let mut m = SymMatrix::zeros(u.len().max(1));
        for i in 0..u.len() {
            for j in 0..=i {
                m.set(i, j, u[i] * u[j]);
            }
        }
        m
    }

    /// `(A + Aᵀ)/2` of a square, possibly asymmetric matrix.
    pub fn symmetrize(a: &[Vec<f64>]) -> Result<SymMatrix> {
        let dim = a.len();
        if dim == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let mut m = SymMatrix::zeros(dim);
        for i in 0..dim {
            if a[i].len() != dim {
                return Err(Error::dims(dim, a[i].len()));
            }
            for j in 0..=i {
                m.set(i, j, 0.5 * (a[i][j] + a[j][i]));
            }
        }
        Ok(m)
    }

    /// `2·Sym(e_i e_jᵀ)`: ones at `(i,j)` and `(j,i)`, or `2` at `(i,i)`.
    pub fn sym2_unit(dim: usize, i: usize, j: usize) -> SymMatrix {
        let mut m = SymMatrix::zeros(dim);
        m.set(i, j, if i == j { 2.0 } else { 1.0 });
        m
    }

    pub fn diag_embed(v: &[f64]) -> SymMatrix {
        let mut m = SymMatrix::zeros(v.len().max(1));
        for (i, &x) in v.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn diag_extract(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Eigendecomposition by cyclic Jacobi rotations.
    pub fn eig_sym(&self) -> Result<EigenDecomp> {
        jacobi(self)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eig_sym()?.values)
    }

    /// `λ_min(X) >= -tol·(1 + ‖X‖₂)`.
    pub fn is_psd(&self, tol: f64) -> bool {
        match self.eigenvalues() {
            Ok(vals) => {
                let norm2 = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                let min = vals.last().copied().unwrap_or(0.0);
                min >= -tol * (1.0 + norm2)
            }
            Err(_) => false,
        }
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("dim >= 1"))
    }

    /// Number of eigenvalues with `|λ| > tol·max(1, |λ|_max)`.
    pub fn numeric_rank(&self, tol: f64) -> usize {
        let vals = match self.eigenvalues() {
            Ok(v) => v,
            Err(_) => return self.dim,
        };
        let top = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let thresh = tol * top.max(1.0);
        vals.iter().filter(|v| v.abs() > thresh).count()
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            dim: self.dim,
            rows: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.rows.len() != raw.dim {
            return Err(serde::de::Error::custom(format!(
                "dim {} does not match {} rows",
                raw.dim,
                raw.rows.len()
            )));
        }
        SymMatrix::from_rows(&raw.rows).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

/// Eigenvalues in nonincreasing order; `vectors[k]` is the unit eigenvector of
/// `values[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomp {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl EigenDecomp {
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.values.len();
        let mut m = SymMatrix::zeros(n);
        for (lam, v) in self.values.iter().zip(&self.vectors) {
            for i in 0..n {
                for j in 0..=i {
                    m.add_to(i, j, lam * v[i] * v[j]);
                }
            }
        }
        m
    }
}

fn jacobi(x: &SymMatrix) -> Result<EigenDecomp> {
    let n = x.dim;
    let mut a: Vec<f64> = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = x.get(i, j);
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = x.frobenius_norm();
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= 1e-15 * scale || off == 0.0 {
            break;
        }
        if sweeps >= JACOBI_MAX_SWEEPS {
            if off > JACOBI_OFF_TARGET * scale {
                return Err(Error::EigenConvergence { sweeps, off });
            }
            break;
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                if s == 0.0 {
                    continue;
                }
                rotated = true;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]).then(i.cmp(&j)));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i * n + k]).collect())
        .collect();
    Ok(EigenDecomp { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn inner_products() {
        let i3 = SymMatrix::identity(3);
        assert_eq!(i3.inner(&i3).unwrap(), 3.0);

        let x = SymMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 5.0, 7.0],
            vec![3.0, 7.0, 11.0],
        ])
        .unwrap();
        let w = [2.0, -1.0, 0.5];
        let d = SymMatrix::diag_embed(&w);
        assert_eq!(d.inner(&x).unwrap(), 2.0 - 5.0 + 5.5);
        let e12 = SymMatrix::sym2_unit(3, 0, 1);
        assert_eq!(e12.inner(&x).unwrap(), 2.0 * 2.0);
        assert!(SymMatrix::identity(2).inner(&i3).is_err());
    }

    #[test]
    fn builders() {
        let o = SymMatrix::sym_outer(&[1.0, 1.0]);
        assert_eq!(o.to_rows(), vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let s = SymMatrix::symmetrize(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(s.to_rows(), vec![vec![0.0, 0.5], vec![0.5, 0.0]]);
        let v = vec![3.0, -2.0, 0.25];
        assert_eq!(SymMatrix::diag_embed(&v).diag_extract(), v);
    }

    #[test]
    fn asymmetric_rows_rejected() {
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.5, 1.0]]).is_err());
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0]]).is_err());
    }

    #[test]
    fn eigen_examples() {
        let e = SymMatrix::identity(4).eig_sym().unwrap();
        assert!(e.values.iter().all(|&l| l == 1.0));

        let swap = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = swap.eig_sym().unwrap();
        assert!(approx(e.values[0], 1.0, 1e-14) && approx(e.values[1], -1.0, 1e-14));

        let u = [1.0, -2.0, 2.0];
        let e = SymMatrix::sym_outer(&u).eig_sym().unwrap();
        assert!(approx(e.values[0], 9.0, 1e-12));
        assert!(e.values[1..].iter().all(|l| l.abs() < 1e-12));
    }

    #[test]
    fn eigen_reconstruction_and_orthogonality() {
        let x = SymMatrix::from_rows(&[
            vec![4.0, 1.0, -2.0, 0.5],
            vec![1.0, 3.0, 0.0, 1.0],
            vec![-2.0, 0.0, 1.0, 2.0],
            vec![0.5, 1.0, 2.0, -1.0],
        ])
        .unwrap();
        let e = x.eig_sym().unwrap();
        let err = e.reconstruct().sub(&x).unwrap().frobenius_norm();
        assert!(err <= 1e-10 * (1.0 + x.frobenius_norm()));
        for a in 0..4 {
            for b in 0..4 {
                let dot: f64 = (0..4).map(|k| e.vectors[a][k] * e.vectors[b][k]).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!(approx(dot, expect, 1e-10));
            }
        }
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn psd_and_rank() {
        assert!(SymMatrix::identity(3).is_psd(PSD_TOL));
        assert!(!SymMatrix::identity(3).scaled(-1.0).is_psd(PSD_TOL));
        assert!(SymMatrix::sym_outer(&[1.0, 2.0, -1.0]).is_psd(PSD_TOL));
        assert_eq!(SymMatrix::zeros(3).numeric_rank(RANK_TOL), 0);
        assert_eq!(SymMatrix::identity(4).numeric_rank(RANK_TOL), 4);
    }

    #[test]
    fn lifted_embedding_of_subset() {
        // [1; χ_U][1; χ_U]ᵀ for U = {1, 3} ⊆ [3]
        let x = SymMatrix::sym_outer(&[1.0, 1.0, 0.0, 1.0]).with_lifted(true);
        assert_eq!(x.get(0, 0), 1.0);
        for j in 1..4 {
            assert_eq!(x.get(j, j), x.get(j, 0));
        }
        assert_eq!(x.numeric_rank(RANK_TOL), 1);
        assert!(x.is_psd(PSD_TOL));
    }

    #[test]
    fn json_round_trip() {
        let x = SymMatrix::from_rows(&[vec![1.0, -0.5], vec![-0.5, 2.0]]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"dim":2,"rows":[[1.0,-0.5],[-0.5,2.0]]}"#);
        let back: SymMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<SymMatrix>(r#"{"dim":2,"rows":[[1,2],[3,1]]}"#).is_err());
    }
}
