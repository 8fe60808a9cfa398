//! Link skeletons and two-sided local-spectral expansion.

use std::collections::{HashMap, VecDeque};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Face};
use crate::error::{HdxError, Result};
use crate::operator::Operator;

/// Symmetric non-negative edge weights with self-loops allowed, plus the stationary vertex
/// measure (normalized row sums).
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    vertices: Vec<Face>,
    weights: Operator,
    measure: Vec<f64>,
}

impl WeightedGraph {
    /// Build from a symmetric weight matrix. Fails if a row sums to zero or symmetry is
    /// violated beyond `1e-12`.
    pub fn new(vertices: Vec<Face>, weights: Operator) -> Result<Self> {
        let n = vertices.len();
        if weights.nrows() != n || weights.ncols() != n {
            return Err(HdxError::MalformedInput(format!(
                "{n} vertices but a {}x{} weight matrix",
                weights.nrows(),
                weights.ncols()
            )));
        }
        let ones = vec![1.0; n];
        let defect = weights.adjoint_defect(&ones);
        if defect > 1e-12 {
            return Err(HdxError::MalformedInput(format!(
                "weight matrix asymmetric by {defect:e}"
            )));
        }
        if let Some((i, j, v)) = weights.min_entry() {
            if v < 0.0 {
                return Err(HdxError::MalformedInput(format!(
                    "negative weight {v} on ({i}, {j})"
                )));
            }
        }
        let sums = weights.row_sums();
        if let Some(i) = sums.iter().position(|&s| s <= 0.0) {
            return Err(HdxError::MalformedInput(format!(
                "vertex {} has no incident weight",
                vertices[i]
            )));
        }
        let total: f64 = sums.iter().sum();
        let measure = sums.iter().map(|s| s / total).collect();
        Ok(WeightedGraph {
            vertices,
            weights,
            measure,
        })
    }

    /// Like [`WeightedGraph::new`] but trusts the caller for symmetry and row sums and
    /// accepts an explicit measure. Used for graphs whose measure is already known exactly.
    pub(crate) fn from_parts(vertices: Vec<Face>, weights: Operator, measure: Vec<f64>) -> Self {
        WeightedGraph {
            vertices,
            weights,
            measure,
        }
    }

    pub fn vertices(&self) -> &[Face] {
        &self.vertices
    }

    pub fn weights(&self) -> &Operator {
        &self.weights
    }

    pub fn vertex_measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.row_sums().iter().sum()
    }

    /// Neighbors of vertex `i` over positive-weight edges, self-loops included.
    pub fn neighbors(&self, i: usize) -> Vec<(usize, f64)> {
        self.weights.row(i).into_iter().filter(|(_, w)| *w > 0.0).collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for (v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// The degree-normalized random walk `P(u,v) = W(u,v) / Σ_w W(u,w)`.
    pub fn walk_matrix(&self) -> Operator {
        let sums = self.weights.row_sums();
        let mut triplets = Vec::new();
        for (i, s) in sums.iter().enumerate() {
            for (j, w) in self.weights.row(i) {
                triplets.push((i, j, w / s));
            }
        }
        Operator::from_triplets(self.len(), self.len(), &triplets)
    }
}

/// Second eigenvalue in absolute value of a graph's normalized walk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondEigenvalue {
    pub value: f64,
    pub disconnected: bool,
}

/// `max_{i≥2} |λ_i|` of the normalized walk; `1.0` with the disconnected flag if the graph
/// is not connected.
pub fn second_eigenvalue(graph: &WeightedGraph) -> SecondEigenvalue {
    if graph.len() < 2 || !graph.is_connected() {
        return SecondEigenvalue {
            value: 1.0,
            disconnected: true,
        };
    }
    let n = graph.len();
    let sums = graph.weights.row_sums();
    let w = graph.weights.to_dense();
    let s = DMatrix::from_fn(n, n, |i, j| w[(i, j)] / (sums[i] * sums[j]).sqrt());
    let s = (&s + s.transpose()) * 0.5;
    let mut vals: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    let value = vals[1..].iter().fold(0.0f64, |a, v| a.max(v.abs())).min(1.0);
    SecondEigenvalue {
        value,
        disconnected: false,
    }
}

/// The 1-skeleton `(X(1), X(2))` with edge weights `Π_2`.
pub fn skeleton_graph(complex: &Complex) -> Result<WeightedGraph> {
    if complex.dim() < 2 {
        return Err(HdxError::MalformedInput(format!(
            "skeleton needs dimension >= 2, got {}",
            complex.dim()
        )));
    }
    let vertices = complex.faces(1).to_vec();
    let mut triplets = Vec::new();
    for (edge, &w) in complex.faces(2).iter().zip(complex.weights(2)) {
        let (u, v) = (edge.vertices()[0], edge.vertices()[1]);
        let iu = complex.index_of(&Face::from_sorted(vec![u])).expect("closed");
        let iv = complex.index_of(&Face::from_sorted(vec![v])).expect("closed");
        triplets.push((iu, iv, w));
        triplets.push((iv, iu, w));
    }
    let weights = Operator::from_triplets(vertices.len(), vertices.len(), &triplets);
    // row sum of v is 2 Π_1(v) by downward closure
    Ok(WeightedGraph::from_parts(
        vertices,
        weights,
        complex.weights(1).to_vec(),
    ))
}

/// The skeleton of the link of `tau`, built without materializing the link complex.
///
/// Vertices are the `v` with `tau ∪ {v}` a face; the edge `{u,v}` carries the mass of
/// `tau ∪ {u,v}` (proportional to the link's `Π_2`). Links of dimension below 2 give an
/// edgeless graph, reported disconnected by [`second_eigenvalue`].
pub fn link_skeleton(complex: &Complex, tau: &Face) -> WeightedGraph {
    let i = tau.level();
    let mut vertices = Vec::new();
    let mut index = HashMap::new();
    if i < complex.dim() {
        for f in complex.faces(i + 1) {
            if f.contains(tau) {
                let v = f.minus(tau);
                index.insert(v.clone(), vertices.len());
                vertices.push(v);
            }
        }
    }
    let mut triplets = Vec::new();
    if i + 2 <= complex.dim() {
        for (f, &w) in complex.faces(i + 2).iter().zip(complex.weights(i + 2)) {
            if !f.contains(tau) {
                continue;
            }
            let rest = f.minus(tau);
            let (a, b) = (rest.vertices()[0], rest.vertices()[1]);
            let ia = index[&Face::from_sorted(vec![a])];
            let ib = index[&Face::from_sorted(vec![b])];
            triplets.push((ia, ib, w));
            triplets.push((ib, ia, w));
        }
    }
    let n = vertices.len();
    let weights = Operator::from_triplets(n, n, &triplets);
    let sums = weights.row_sums();
    let total: f64 = sums.iter().sum();
    let measure = if total > 0.0 {
        sums.iter().map(|s| s / total).collect()
    } else {
        vec![0.0; n]
    };
    WeightedGraph::from_parts(vertices, weights, measure)
}

/// One entry of the link sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkLambda {
    pub face: Face,
    pub level: usize,
    pub lambda2: f64,
    pub disconnected: bool,
}

/// Two-sided local-spectral expansion of a complex with the per-link breakdown.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaReport {
    pub gamma: f64,
    pub argmax_face: Face,
    pub links: Vec<LinkLambda>,
}

impl GammaReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("gamma report serializes")
    }

    pub fn any_disconnected(&self) -> bool {
        self.links.iter().any(|l| l.disconnected)
    }
}

/// Sweep every link `X_s`, `s ∈ X(i)`, `0 ≤ i ≤ d−2`.
pub fn gamma_report(complex: &Complex) -> Result<GammaReport> {
    let d = complex.dim();
    if d < 2 {
        return Err(HdxError::MalformedInput(format!(
            "local-spectral expansion needs dimension >= 2, got {d}"
        )));
    }
    let mut links = Vec::new();
    let mut best = (f64::NEG_INFINITY, Face::empty());
    for i in 0..=d - 2 {
        for tau in complex.faces(i) {
            let l2 = second_eigenvalue(&link_skeleton(complex, tau));
            if l2.value > best.0 {
                best = (l2.value, tau.clone());
            }
            links.push(LinkLambda {
                face: tau.clone(),
                level: i,
                lambda2: l2.value,
                disconnected: l2.disconnected,
            });
        }
    }
    Ok(GammaReport {
        gamma: best.0,
        argmax_face: best.1,
        links,
    })
}

/// `γ(X)`: the largest link second eigenvalue.
pub fn gamma(complex: &Complex) -> Result<f64> {
    Ok(gamma_report(complex)?.gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, complete_complex, punctured_complete_complex};

    fn complete_graph(m: usize) -> WeightedGraph {
        let mut t = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    t.push((i, j, 1.0));
                }
            }
        }
        let verts = (0..m).map(|v| Face::from_sorted(vec![v])).collect();
        WeightedGraph::new(verts, Operator::from_triplets(m, m, &t)).unwrap()
    }

    #[test]
    fn complete_graph_second_eigenvalue() {
        for m in 3..9 {
            let l = second_eigenvalue(&complete_graph(m));
            assert!(!l.disconnected);
            assert!((l.value - 1.0 / (m as f64 - 1.0)).abs() < 1e-12);
        }
        let k2 = second_eigenvalue(&complete_graph(2));
        assert!((k2.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_invariance() {
        let g = complete_graph(5);
        let mut w = g.weights().clone();
        w.map_entries(|v| 7.5 * v);
        let scaled = WeightedGraph::new(g.vertices().to_vec(), w).unwrap();
        let a = second_eigenvalue(&g).value;
        let b = second_eigenvalue(&scaled).value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn skeleton_of_complete_and_low_dimension() {
        let c = complete_complex(6, 2).unwrap();
        let g = skeleton_graph(&c).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.neighbors(0).len(), 5);
        assert!((second_eigenvalue(&g).value - 0.2).abs() < 1e-12);
        let line = build_complex(vec![vec![1], vec![2]], None).unwrap();
        assert!(matches!(skeleton_graph(&line), Err(HdxError::MalformedInput(_))));
    }

    #[test]
    fn punctured_link_skeleton_misses_one_edge() {
        let p = punctured_complete_complex(8).unwrap();
        let g = link_skeleton(&p, &Face::new(vec![1]).unwrap());
        assert_eq!(g.len(), 7);
        let edges: usize = (0..g.len()).map(|i| g.neighbors(i).len()).sum::<usize>() / 2;
        assert_eq!(edges, 20);
        let i2 = g.vertices().iter().position(|f| f.vertices() == [2]).unwrap();
        let i3 = g.vertices().iter().position(|f| f.vertices() == [3]).unwrap();
        assert_eq!(g.weights().get(i2, i3), 0.0);
        // same graph through the materialized link
        let link = p.link(&Face::new(vec![1]).unwrap()).unwrap();
        let via_link = skeleton_graph(&link.complex).unwrap();
        let a = second_eigenvalue(&g).value;
        let b = second_eigenvalue(&via_link).value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn gamma_of_complete_complex() {
        let c = complete_complex(8, 3).unwrap();
        let r = gamma_report(&c).unwrap();
        assert!((r.gamma - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(r.links.len(), 1 + 8);
        assert!(!r.any_disconnected());
    }

    #[test]
    fn disconnected_link_reports_one() {
        // two triangles glued at vertex 1: the link of 1 is two disjoint edges
        let c = build_complex(vec![vec![1, 2, 3], vec![1, 4, 5]], None).unwrap();
        let r = gamma_report(&c).unwrap();
        assert_eq!(r.gamma, 1.0);
        assert!(r.any_disconnected());
    }
}
