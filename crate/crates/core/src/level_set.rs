//! The HD-Level-Set decomposition `f = f_0 + … + f_k`, `f_i = U^k_i g_i`, `g_i ∈ Ker(D_i)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::complex::Complex;
use crate::error::{HdxError, Result};
use crate::linalg::{self, inner, norm};
use crate::local_spectral;
use crate::walk::{down_operator, up_composite, up_operator};

/// A real function on `X(level)` in canonical face order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelFunction {
    pub level: usize,
    pub values: Vec<f64>,
}

impl LevelFunction {
    pub fn new(complex: &Complex, level: usize, values: Vec<f64>) -> Result<Self> {
        if level > complex.dim() || values.len() != complex.level_size(level) {
            return Err(HdxError::MalformedInput(format!(
                "function of length {} does not match X({level})",
                values.len()
            )));
        }
        Ok(LevelFunction { level, values })
    }

    pub fn constant(complex: &Complex, level: usize, c: f64) -> Self {
        LevelFunction {
            level,
            values: vec![c; complex.level_size(level)],
        }
    }

    /// `1_S` for a list of face indices.
    pub fn indicator(complex: &Complex, level: usize, members: &[usize]) -> Self {
        let mut values = vec![0.0; complex.level_size(level)];
        for &i in members {
            values[i] = 1.0;
        }
        LevelFunction { level, values }
    }

    pub fn inner(&self, other: &LevelFunction, complex: &Complex) -> f64 {
        inner(complex.weights(self.level), &self.values, &other.values)
    }

    pub fn norm(&self, complex: &Complex) -> f64 {
        norm(complex.weights(self.level), &self.values)
    }

    pub fn mean(&self, complex: &Complex) -> f64 {
        linalg::mean(complex.weights(self.level), &self.values)
    }
}

/// A `Π_i`-orthonormal basis of `H^i` (columns), `H^0 = C_0`.
pub fn kernel_basis(complex: &Complex, i: usize) -> Result<DMatrix<f64>> {
    if i > complex.dim() {
        return Err(HdxError::MalformedInput(format!(
            "level {i} above the dimension {}",
            complex.dim()
        )));
    }
    if i == 0 {
        return Ok(DMatrix::from_element(1, 1, 1.0));
    }
    // Ker(D_i) is the Π_i-orthogonal complement of the range of its adjoint U_{i-1}
    let u = up_operator(complex, i - 1)?.matrix.to_dense();
    Ok(linalg::weighted_complement_basis(&u, complex.weights(i)))
}

/// Rank of `D_i` under the shared cutoff.
pub fn down_rank(complex: &Complex, i: usize) -> Result<usize> {
    Ok(linalg::rank(&down_operator(complex, i)?.matrix.to_dense()))
}

/// Kernel bases for every level up to `k`, their lifts to `X(k)` and the stacked solver.
#[derive(Clone, Debug)]
pub struct LevelSetBasis {
    pub k: usize,
    pub kernels: Vec<DMatrix<f64>>,
    /// `U^k_i` applied to each kernel basis.
    pub lifted: Vec<DMatrix<f64>>,
    pub dims: Vec<usize>,
    pub gamma: f64,
    measure: Vec<f64>,
    solver: DMatrix<f64>,
}

impl LevelSetBasis {
    pub fn new(complex: &Complex, k: usize) -> Result<Self> {
        if k > complex.dim() {
            return Err(HdxError::MalformedInput(format!(
                "level {k} above the dimension {}",
                complex.dim()
            )));
        }
        let gamma = if complex.dim() >= 2 {
            local_spectral::gamma(complex)?
        } else {
            0.0
        };
        let mut kernels = Vec::with_capacity(k + 1);
        let mut lifted = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let h = kernel_basis(complex, i)?;
            let up = up_composite(complex, i, k)?;
            lifted.push(up.matrix.apply_matrix(&h));
            kernels.push(h);
        }
        let dims: Vec<usize> = kernels.iter().map(|h| h.ncols()).collect();
        let columns: usize = dims.iter().sum();
        let n = complex.level_size(k);
        let mut stacked = DMatrix::zeros(n, columns);
        let mut offset = 0;
        for l in &lifted {
            stacked.columns_mut(offset, l.ncols()).copy_from(l);
            offset += l.ncols();
        }
        let rank = linalg::rank(&stacked);
        if columns != n || rank != columns {
            return Err(HdxError::DecompositionDegenerate {
                rank,
                columns,
                level_size: n,
                gamma,
            });
        }
        let solver = stacked
            .clone()
            .try_inverse()
            .ok_or(HdxError::DecompositionDegenerate {
                rank,
                columns,
                level_size: n,
                gamma,
            })?;
        Ok(LevelSetBasis {
            k,
            kernels,
            lifted,
            dims,
            gamma,
            measure: complex.weights(k).to_vec(),
            solver,
        })
    }

    /// `γ < 1/d`, the regime in which existence and uniqueness are guaranteed.
    pub fn in_guaranteed_regime(&self, d: usize) -> bool {
        self.gamma < 1.0 / d as f64
    }

    /// A `Π_k`-orthonormal basis of `V^i_k`.
    pub fn component_space(&self, i: usize) -> DMatrix<f64> {
        linalg::weighted_range_basis(&self.lifted[i], &self.measure)
    }

    /// The `Π_k`-orthogonal projection of `f` onto `V^i_k`.
    pub fn project(&self, f: &[f64], i: usize) -> Vec<f64> {
        let q = self.component_space(i);
        let weighted: Vec<f64> = f.iter().zip(&self.measure).map(|(a, p)| a * p).collect();
        let coeffs = q.transpose() * DVector::from_column_slice(&weighted);
        (q * coeffs).iter().copied().collect()
    }

    pub fn decompose(&self, f: &[f64]) -> Result<LevelSetDecomposition> {
        if f.len() != self.measure.len() {
            return Err(HdxError::MalformedInput(format!(
                "function of length {} on a level of size {}",
                f.len(),
                self.measure.len()
            )));
        }
        let coeffs = &self.solver * DVector::from_column_slice(f);
        let mut components = Vec::with_capacity(self.k + 1);
        let mut lifts = Vec::with_capacity(self.k + 1);
        let mut offset = 0;
        for (h, l) in self.kernels.iter().zip(&self.lifted) {
            let c = coeffs.rows(offset, h.ncols());
            lifts.push((h * c).as_slice().to_vec());
            components.push((l * c).as_slice().to_vec());
            offset += h.ncols();
        }
        let mut rest = f.to_vec();
        for comp in &components {
            for (r, c) in rest.iter_mut().zip(comp) {
                *r -= c;
            }
        }
        let fnorm = norm(&self.measure, f);
        let residual = if fnorm > 0.0 {
            norm(&self.measure, &rest) / fnorm
        } else {
            norm(&self.measure, &rest)
        };
        Ok(LevelSetDecomposition {
            k: self.k,
            components,
            lifts,
            residual,
            measure: self.measure.clone(),
            f: f.to_vec(),
        })
    }
}

/// Result of [`decompose`].
#[derive(Clone, Debug)]
pub struct LevelSetDecomposition {
    pub k: usize,
    /// `f_0 .. f_k` on `X(k)`.
    pub components: Vec<Vec<f64>>,
    /// `g_0 .. g_k`, `g_i` on `X(i)`.
    pub lifts: Vec<Vec<f64>>,
    /// `‖f − Σ f_i‖ / ‖f‖`.
    pub residual: f64,
    measure: Vec<f64>,
    f: Vec<f64>,
}

impl LevelSetDecomposition {
    pub fn function(&self) -> &[f64] {
        &self.f
    }

    /// `⟨f_i, f_j⟩` in `Π_k`.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.components
            .iter()
            .map(|a| {
                self.components
                    .iter()
                    .map(|b| inner(&self.measure, a, b))
                    .collect()
            })
            .collect()
    }

    pub fn component_norms(&self) -> Vec<f64> {
        self.components.iter().map(|c| norm(&self.measure, c)).collect()
    }

    /// `⟨f, f_i⟩`.
    pub fn projection(&self, i: usize) -> f64 {
        inner(&self.measure, &self.f, &self.components[i])
    }

    pub fn to_export(&self) -> DecompositionExport {
        DecompositionExport {
            k: self.k,
            residual: self.residual,
            component_norms: self.component_norms(),
            gram: self.gram(),
        }
    }
}

/// Decompose `f` on `X(k)`, building the level bases on the way.
pub fn decompose(complex: &Complex, k: usize, f: &[f64]) -> Result<LevelSetDecomposition> {
    LevelSetBasis::new(complex, k)?.decompose(f)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionExport {
    pub k: usize,
    pub residual: f64,
    pub component_norms: Vec<f64>,
    pub gram: Vec<Vec<f64>>,
}

/// Gram matrix and the largest normalized cross term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub gram: Vec<Vec<f64>>,
    /// `⟨f, f⟩`.
    pub norm_sq: f64,
    /// `max_{i≠j} |⟨f_i, f_j⟩|`.
    pub max_cross: f64,
    /// `max_cross / ⟨f, f⟩`.
    pub max_cross_normalized: f64,
    pub argmax: (usize, usize),
}

pub fn orthogonality_report(dec: &LevelSetDecomposition) -> OrthogonalityReport {
    let gram = dec.gram();
    let norm_sq = inner(&dec.measure, &dec.f, &dec.f);
    let mut max_cross = 0.0f64;
    let mut argmax = (0, 0);
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j && v.abs() > max_cross {
                max_cross = v.abs();
                argmax = (i, j);
            }
        }
    }
    OrthogonalityReport {
        gram,
        norm_sq,
        max_cross,
        max_cross_normalized: if norm_sq > 0.0 { max_cross / norm_sq } else { 0.0 },
        argmax,
    }
}

/// `C(k,i) ‖U^k_i g‖² / ‖g‖²` for `g ∈ Ker(D_i)`.
pub fn norm_ratio(complex: &Complex, k: usize, i: usize, g: &[f64]) -> Result<f64> {
    if i > k || k > complex.dim() || g.len() != complex.level_size(i) {
        return Err(HdxError::MalformedInput(format!(
            "norm ratio needs i <= k <= d and g on X({i})"
        )));
    }
    let pi = complex.weights(i);
    let gnorm = norm(pi, g);
    if gnorm == 0.0 {
        return Err(HdxError::MalformedInput("g is zero".into()));
    }
    if i >= 1 {
        let dg = down_operator(complex, i)?.apply(g);
        let dnorm = norm(complex.weights(i - 1), &dg);
        if dnorm > 1e-6 * gnorm {
            return Err(HdxError::MalformedInput(format!(
                "g is not in Ker(D_{i}): ‖D g‖ / ‖g‖ = {:e}",
                dnorm / gnorm
            )));
        }
    }
    let lifted = up_composite(complex, i, k)?.apply(g);
    let lnorm = norm(complex.weights(k), &lifted);
    Ok(binomial(k, i) * lnorm * lnorm / (gnorm * gnorm))
}
