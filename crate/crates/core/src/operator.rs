//! Linear operators between level function spaces, stored dense or CSR.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};

/// Below this fill ratio a matrix is kept in CSR form.
pub const SPARSE_DENSITY: f64 = 0.25;

#[derive(Clone, Debug)]
pub enum Operator {
    Dense(DMatrix<f64>),
    Sparse(CsrMatrix<f64>),
}

impl Operator {
    pub fn identity(n: usize) -> Self {
        Operator::Sparse(CsrMatrix::identity(n))
    }

    /// Assemble from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut coo = CooMatrix::new(nrows, ncols);
        for &(i, j, v) in triplets {
            coo.push(i, j, v);
        }
        Operator::Sparse(CsrMatrix::from(&coo)).normalized()
    }

    pub fn nrows(&self) -> usize {
        match self {
            Operator::Dense(m) => m.nrows(),
            Operator::Sparse(m) => m.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            Operator::Dense(m) => m.ncols(),
            Operator::Sparse(m) => m.ncols(),
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self, Operator::Sparse(_))
    }

    pub fn nnz(&self) -> usize {
        match self {
            Operator::Dense(m) => m.iter().filter(|v| **v != 0.0).count(),
            Operator::Sparse(m) => m.nnz(),
        }
    }

    pub fn density(&self) -> f64 {
        let cells = (self.nrows() * self.ncols()).max(1);
        self.nnz() as f64 / cells as f64
    }

    /// Re-pick the storage based on the fill ratio.
    pub fn normalized(self) -> Self {
        let dense_wanted = self.density() >= SPARSE_DENSITY;
        match (self, dense_wanted) {
            (Operator::Sparse(m), true) => Operator::Dense(csr_to_dense(&m)),
            (Operator::Dense(m), false) => Operator::Sparse(CsrMatrix::from(&m)),
            (op, _) => op,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            Operator::Dense(m) => m.clone(),
            Operator::Sparse(m) => csr_to_dense(m),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            Operator::Dense(m) => m[(i, j)],
            Operator::Sparse(m) => m
                .get_entry(i, j)
                .map(|e| e.into_value())
                .unwrap_or(0.0),
        }
    }

    /// Non-zero entries of row `i`.
    pub fn row(&self, i: usize) -> Vec<(usize, f64)> {
        match self {
            Operator::Dense(m) => m
                .row(i)
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(j, v)| (j, *v))
                .collect(),
            Operator::Sparse(m) => {
                let r = m.row(i);
                r.col_indices().iter().copied().zip(r.values().iter().copied()).collect()
            }
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.nrows())
            .map(|i| match self {
                Operator::Dense(m) => m.row(i).sum(),
                Operator::Sparse(m) => m.row(i).values().iter().sum(),
            })
            .collect()
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        match self {
            Operator::Dense(m) => m * v,
            Operator::Sparse(m) => m * v,
        }
    }

    pub fn apply_slice(&self, v: &[f64]) -> Vec<f64> {
        self.apply(&DVector::from_column_slice(v)).as_slice().to_vec()
    }

    pub fn apply_matrix(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            Operator::Dense(m) => m * b,
            Operator::Sparse(m) => m * b,
        }
    }

    pub fn transpose(&self) -> Operator {
        match self {
            Operator::Dense(m) => Operator::Dense(m.transpose()),
            Operator::Sparse(m) => Operator::Sparse(m.transpose()),
        }
    }

    /// `self * rhs` as matrices, i.e. apply `rhs` first when acting on functions.
    pub fn compose(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.ncols(), rhs.nrows(), "operator shapes do not chain");
        let out = match (self, rhs) {
            (Operator::Sparse(a), Operator::Sparse(b)) => Operator::Sparse(a * b),
            (Operator::Sparse(a), Operator::Dense(b)) => Operator::Dense(a * b),
            (Operator::Dense(a), Operator::Dense(b)) => Operator::Dense(a * b),
            (Operator::Dense(a), Operator::Sparse(b)) => {
                let bt = b.transpose();
                Operator::Dense((&bt * &a.transpose()).transpose())
            }
        };
        out.normalized()
    }

    /// `Σ c_i A_i` for operators of equal shape.
    pub fn linear_combination(terms: &[(f64, &Operator)]) -> Operator {
        assert!(!terms.is_empty(), "empty linear combination");
        let (r, c) = (terms[0].1.nrows(), terms[0].1.ncols());
        if terms.iter().all(|(_, op)| op.is_sparse()) {
            let mut acc: Option<CsrMatrix<f64>> = None;
            for (coef, op) in terms {
                let Operator::Sparse(m) = op else { unreachable!() };
                let scaled = m * *coef;
                acc = Some(match acc {
                    None => scaled,
                    Some(a) => &a + &scaled,
                });
            }
            return Operator::Sparse(acc.unwrap()).normalized();
        }
        let mut acc = DMatrix::zeros(r, c);
        for (coef, op) in terms {
            match op {
                Operator::Dense(m) => acc += m * *coef,
                Operator::Sparse(m) => {
                    for (i, j, v) in m.triplet_iter() {
                        acc[(i, j)] += coef * v;
                    }
                }
            }
        }
        Operator::Dense(acc).normalized()
    }

    /// Visit every stored entry mutably.
    pub fn map_entries(&mut self, mut f: impl FnMut(f64) -> f64) {
        match self {
            Operator::Dense(m) => m.iter_mut().for_each(|v| *v = f(*v)),
            Operator::Sparse(m) => m.values_mut().iter_mut().for_each(|v| *v = f(*v)),
        }
    }

    /// Smallest stored entry together with its position.
    pub fn min_entry(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        let mut visit = |i, j, v: f64| {
            if best.is_none_or(|b| v < b.2) {
                best = Some((i, j, v));
            }
        };
        match self {
            Operator::Dense(m) => {
                for j in 0..m.ncols() {
                    for i in 0..m.nrows() {
                        visit(i, j, m[(i, j)]);
                    }
                }
            }
            Operator::Sparse(m) => {
                for (i, j, v) in m.triplet_iter() {
                    visit(i, j, *v);
                }
            }
        }
        best
    }

    /// Largest `|Π(s)M(s,t) − Π(t)M(t,s)|`.
    pub fn adjoint_defect(&self, measure: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        match self {
            Operator::Dense(m) => {
                for i in 0..m.nrows() {
                    for j in i + 1..m.ncols() {
                        let d = (measure[i] * m[(i, j)] - measure[j] * m[(j, i)]).abs();
                        worst = worst.max(d);
                    }
                }
            }
            Operator::Sparse(m) => {
                for (i, j, v) in m.triplet_iter() {
                    let back = self.get(j, i);
                    worst = worst.max((measure[i] * v - measure[j] * back).abs());
                }
            }
        }
        worst
    }

    /// Largest entrywise `|A − B|`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        let diff = Operator::linear_combination(&[(1.0, self), (-1.0, other)]);
        match diff {
            Operator::Dense(m) => m.amax(),
            Operator::Sparse(m) => m.values().iter().fold(0.0f64, |a, v| a.max(v.abs())),
        }
    }
}

fn csr_to_dense(m: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.triplet_iter() {
        d[(i, j)] += *v;
    }
    d
}
