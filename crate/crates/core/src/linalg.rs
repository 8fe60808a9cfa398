//! Weighted inner products and eigen-solvers for reversible operators.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::operator::Operator;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Above this size the full eigendecomposition is replaced by a Krylov sweep.
pub const DENSE_EIGEN_LIMIT: usize = 2500;

/// `⟨f, g⟩_Π = Σ Π(x) f(x) g(x)`.
pub fn inner(measure: &[f64], f: &[f64], g: &[f64]) -> f64 {
    measure.iter().zip(f).zip(g).map(|((p, a), b)| p * a * b).sum()
}

pub fn norm(measure: &[f64], f: &[f64]) -> f64 {
    inner(measure, f, f).sqrt()
}

pub fn mean(measure: &[f64], f: &[f64]) -> f64 {
    measure.iter().zip(f).map(|(p, a)| p * a).sum()
}

pub fn variance(measure: &[f64], f: &[f64]) -> f64 {
    let m = mean(measure, f);
    measure.iter().zip(f).map(|(p, a)| p * (a - m) * (a - m)).sum()
}

/// `Π^{1/2} M Π^{-1/2}`, symmetrized to remove round-off.
pub fn symmetrize(m: &Operator, measure: &[f64]) -> DMatrix<f64> {
    let n = m.nrows();
    let sq: Vec<f64> = measure.iter().map(|p| p.sqrt()).collect();
    let mut s = m.to_dense();
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] *= sq[i] / sq[j];
        }
    }
    (&s + s.transpose()) * 0.5
}

/// Eigenvalues of an operator reversible with respect to `measure`, in decreasing order.
pub fn reversible_spectrum(m: &Operator, measure: &[f64]) -> Vec<f64> {
    let mut vals: Vec<f64> = SymmetricEigen::new(symmetrize(m, measure))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals
}

/// Result of a Lanczos sweep.
#[derive(Clone, Debug)]
pub struct KrylovSpectrum {
    /// Ritz values in decreasing order.
    pub values: Vec<f64>,
    /// True when the Krylov space became invariant, so the values are exact eigenvalues.
    pub invariant: bool,
}

/// Distinct eigenvalues of a reversible operator via Lanczos with full reorthogonalization.
///
/// When the operator has few distinct eigenvalues the Krylov space of a random start vector
/// becomes invariant after that many steps, and the Ritz values are the distinct spectrum.
pub fn krylov_distinct_spectrum(
    m: &Operator,
    measure: &[f64],
    max_steps: usize,
    seed: u64,
) -> KrylovSpectrum {
    let n = m.nrows();
    let sq: Vec<f64> = measure.iter().map(|p| p.sqrt()).collect();
    let apply = |v: &DVector<f64>| -> DVector<f64> {
        let x = DVector::from_fn(n, |i, _| v[i] / sq[i]);
        let y = m.apply(&x);
        DVector::from_fn(n, |i, _| y[i] * sq[i])
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = DVector::from_fn(n, |_, _| rng.gen::<f64>() - 0.5);
    q /= q.norm();
    let mut basis: Vec<DVector<f64>> = vec![q];
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut invariant = false;
    let steps = max_steps.min(n);
    for step in 0..steps {
        let mut w = apply(&basis[step]);
        let a = basis[step].dot(&w);
        alphas.push(a);
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let beta = w.norm();
        let scale = alphas.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        if beta <= 1e-9 * scale {
            invariant = true;
            break;
        }
        if step + 1 == steps {
            break;
        }
        betas.push(beta);
        basis.push(w / beta);
    }
    let dim = alphas.len();
    let t = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    let mut values: Vec<f64> = SymmetricEigen::new(t).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    KrylovSpectrum { values, invariant }
}

/// A `measure`-orthonormal basis of the column space of `a`.
pub fn weighted_range_basis(a: &DMatrix<f64>, measure: &[f64]) -> DMatrix<f64> {
    let n = a.nrows();
    if a.ncols() == 0 {
        return DMatrix::zeros(n, 0);
    }
    let sq: Vec<f64> = measure.iter().map(|p| p.sqrt()).collect();
    let b = DMatrix::from_fn(n, a.ncols(), |i, j| a[(i, j)] * sq[i]);
    let q = euclidean_range(&b);
    DMatrix::from_fn(n, q.ncols(), |i, j| q[(i, j)] / sq[i])
}

/// A `measure`-orthonormal basis of the `measure`-orthogonal complement of `col(a)`.
pub fn weighted_complement_basis(a: &DMatrix<f64>, measure: &[f64]) -> DMatrix<f64> {
    let n = a.nrows();
    let sq: Vec<f64> = measure.iter().map(|p| p.sqrt()).collect();
    let b = DMatrix::from_fn(n, a.ncols(), |i, j| a[(i, j)] * sq[i]);
    let q = euclidean_range(&b);
    if q.ncols() == n {
        return DMatrix::zeros(n, 0);
    }
    let projector = DMatrix::identity(n, n) - &q * q.transpose();
    let eig = SymmetricEigen::new(projector);
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    DMatrix::from_fn(n, keep.len(), |i, j| eig.eigenvectors[(i, keep[j])] / sq[i])
}

/// Orthonormal basis of `col(b)` with a rank-revealing cutoff.
fn euclidean_range(b: &DMatrix<f64>) -> DMatrix<f64> {
    if b.ncols() == 0 || b.nrows() == 0 {
        return DMatrix::zeros(b.nrows(), 0);
    }
    let svd = b.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return DMatrix::zeros(b.nrows(), 0);
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > RANK_TOL * smax)
        .collect();
    DMatrix::from_fn(b.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Numerical rank with the shared cutoff.
pub fn rank(b: &DMatrix<f64>) -> usize {
    euclidean_range(b).ncols()
}

/// Operator norm of `(M − λ) restricted to col(basis)`, in the weighted norm.
///
/// `basis` must be `measure`-orthonormal.
pub fn restricted_residual(m: &Operator, basis: &DMatrix<f64>, lambda: f64, measure: &[f64]) -> f64 {
    if basis.ncols() == 0 {
        return 0.0;
    }
    let mut r = m.apply_matrix(basis);
    r -= basis * lambda;
    let sq: Vec<f64> = measure.iter().map(|p| p.sqrt()).collect();
    let rw = DMatrix::from_fn(r.nrows(), r.ncols(), |i, j| r[(i, j)] * sq[i]);
    let gram = rw.transpose() * rw;
    let top = SymmetricEigen::new(gram).eigenvalues.max();
    top.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Operator {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, (i + 1) % n, 0.5));
            t.push((i, (i + n - 1) % n, 0.5));
        }
        Operator::from_triplets(n, n, &t)
    }

    #[test]
    fn cycle_spectrum() {
        let n = 6;
        let spec = reversible_spectrum(&cycle(n), &vec![1.0 / n as f64; n]);
        let mut expect: Vec<f64> = (0..n)
            .map(|j| (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos())
            .collect();
        expect.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in spec.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn krylov_recovers_distinct_values() {
        let n = 8;
        let k = krylov_distinct_spectrum(&cycle(n), &vec![1.0 / n as f64; n], 50, 1);
        assert!(k.invariant);
        // C_8: cos(2πj/8) takes 5 distinct values
        assert_eq!(k.values.len(), 5);
        assert!((k.values[0] - 1.0).abs() < 1e-10);
        assert!((k.values[4] + 1.0).abs() < 1e-10);
    }

    #[test]
    fn weighted_bases() {
        let measure = [0.1, 0.2, 0.3, 0.4];
        let a = DMatrix::from_column_slice(4, 1, &[1.0, 1.0, 1.0, 1.0]);
        let range = weighted_range_basis(&a, &measure);
        assert_eq!(range.ncols(), 1);
        let col: Vec<f64> = range.column(0).iter().copied().collect();
        assert!((norm(&measure, &col) - 1.0).abs() < 1e-12);
        let comp = weighted_complement_basis(&a, &measure);
        assert_eq!(comp.ncols(), 3);
        for j in 0..3 {
            let g: Vec<f64> = comp.column(j).iter().copied().collect();
            assert!(mean(&measure, &g).abs() < 1e-12);
            assert!((norm(&measure, &g) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_of_exact_eigenvector_is_zero() {
        let n = 5;
        let ones = DMatrix::from_element(n, 1, 1.0);
        let measure = vec![0.2; n];
        assert!(restricted_residual(&cycle(n), &ones, 1.0, &measure) < 1e-12);
        assert!((restricted_residual(&cycle(n), &ones, 0.0, &measure) - 1.0).abs() < 1e-12);
    }
}
