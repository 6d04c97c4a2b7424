//! Exact rational symmetric matrices, for certificates that must be checked
//! without rounding.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::graph::{Graph, WeightVec};
use crate::symmat::SymMatrix;

pub type Q = Rational64;

/// Dense symmetric matrix over `ℚ` (full storage; symmetry enforced on input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSymMatrix {
    dim: usize,
    data: Vec<Q>,
}

impl QSymMatrix {
    pub fn zeros(dim: usize) -> Self {
        QSymMatrix {
            dim,
            data: vec![zero(); dim * dim],
        }
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = QSymMatrix::zeros(dim);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::dims(dim, r.len()));
            }
            for (j, &v) in r.iter().enumerate() {
                if j < i && rows[j][i] != v {
                    return Err(Error::InvalidInput(format!("entry ({i},{j}) is not symmetric")));
                }
                m.data[i * dim + j] = v;
            }
        }
        Ok(m)
    }

    /// Integer matrix as a rational one.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let q: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Q::from_integer(x)).collect())
            .collect();
        QSymMatrix::from_rows(&q)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn scaled(&self, s: Q) -> Self {
        QSymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// Trace inner product `⟨A, B⟩`.
    pub fn inner(&self, other: &QSymMatrix) -> Result<Q> {
        if self.dim != other.dim {
            return Err(Error::dims(self.dim, other.dim));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(zero(), |acc, (&a, &b)| acc + a * b))
    }

    /// Sum of all entries, i.e. `⟨11ᵀ, A⟩`.
    pub fn total(&self) -> Q {
        self.data.iter().fold(zero(), |acc, &x| acc + x)
    }

    pub fn diagonal(&self) -> Vec<Q> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Exact positive semidefiniteness by symmetric Gaussian elimination:
    /// a zero pivot forces its whole row to vanish, a negative one refutes.
    pub fn is_psd(&self) -> bool {
        let n = self.dim;
        let mut a = self.data.clone();
        for k in 0..n {
            let p = a[k * n + k];
            if p < zero() {
                return false;
            }
            if p == zero() {
                if (k + 1..n).any(|j| a[k * n + j] != zero()) {
                    return false;
                }
                continue;
            }
            for i in k + 1..n {
                let f = a[i * n + k] / p;
                if f == zero() {
                    continue;
                }
                for j in k..n {
                    let v = a[k * n + j];
                    a[i * n + j] -= f * v;
                }
            }
        }
        true
    }

    pub fn to_f64(&self) -> SymMatrix {
        let rows: Vec<Vec<f64>> = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let q = self.get(i, j);
                        *q.numer() as f64 / *q.denom() as f64
                    })
                    .collect()
            })
            .collect();
        SymMatrix::from_rows(&rows).expect("symmetric by construction")
    }
}

/// `¼ L_G(w)` over `ℚ`.
pub fn quarter_laplacian(g: &Graph, w: &WeightVec) -> Result<QSymMatrix> {
    let l = g.laplacian(w)?;
    let mut q = QSymMatrix::zeros(g.n());
    for i in 0..g.n() {
        for j in 0..=i {
            // the Laplacian of integer weights has integer entries
            q.set(i, j, Q::new(l.get(i, j).round() as i64, 4));
        }
    }
    Ok(q)
}

fn zero() -> Q {
    Q::from_integer(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn psd_decisions() {
        let id = QSymMatrix::from_int_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(id.is_psd());
        let ones = QSymMatrix::from_int_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(ones.is_psd());
        let indef = QSymMatrix::from_int_rows(&[vec![1, 2], vec![2, 1]]).unwrap();
        assert!(!indef.is_psd());
        let zero_pivot = QSymMatrix::from_int_rows(&[vec![0, 1], vec![1, 1]]).unwrap();
        assert!(!zero_pivot.is_psd());
        let half = QSymMatrix::from_rows(&[vec![q(1, 1), q(-1, 2)], vec![q(-1, 2), q(1, 1)]]).unwrap();
        assert!(half.is_psd());
        assert!(QSymMatrix::from_int_rows(&[vec![1, 2], vec![3, 1]]).is_err());
    }

    #[test]
    fn inner_and_laplacian() {
        let g = Graph::complete(2);
        let l = quarter_laplacian(&g, &WeightVec(vec![2])).unwrap();
        assert_eq!(l.get(0, 1), q(-1, 2));
        let y = QSymMatrix::from_int_rows(&[vec![1, -1], vec![-1, 1]]).unwrap();
        assert_eq!(l.inner(&y).unwrap(), q(2, 1));
        assert_eq!(y.total(), zero());
        assert_eq!(y.to_f64().get(0, 1), -1.0);
    }
}
