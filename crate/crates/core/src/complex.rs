//! Weighted pure simplicial complexes.
//!
//! A complex is given by its top faces (all of size `d`) and a probability distribution on
//! them. Every lower level is the downward closure, with the induced distribution
//!
//! ```text
//! Pi_i(x) = 1/(i+1) * sum_{y in X(i+1), y ⊃ x} Pi_{i+1}(y)
//! ```
//!
//! An `i`-face has exactly `i` vertices, so `X(0) = {∅}`. Faces within a level are kept in
//! lexicographic order of their sorted vertex tuples and every vector or matrix indexed by a
//! level uses that order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, combinations, is_subset};
use crate::error::{HdxError, Result};
use crate::local_spectral;

/// Tolerance for distribution sums and the downward-closure recurrence.
pub const DISTRIBUTION_TOL: f64 = 1e-12;

/// Tolerance accepted on the weight sum of a complex file.
const FILE_WEIGHT_TOL: f64 = 1e-9;

/// Attempts made by the sparsified generator before giving up.
const SPARSIFY_ATTEMPTS: usize = 100;

/// A face in canonical form: strictly increasing vertex identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<usize>);

impl Face {
    /// Canonicalizes `vertices`; fails on repeated vertices.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(HdxError::MalformedInput(format!(
                "face {vertices:?} repeats a vertex"
            )));
        }
        Ok(Face(vertices))
    }

    /// Wraps an already sorted, duplicate-free vertex list.
    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Face(vertices)
    }

    pub fn empty() -> Self {
        Face(Vec::new())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// The level of the face, i.e. its number of vertices.
    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, other: &Face) -> bool {
        is_subset(&other.0, &self.0)
    }

    pub fn union(&self, other: &Face) -> Face {
        let set: BTreeSet<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        Face(set.into_iter().collect())
    }

    /// `self ∖ other`.
    pub fn minus(&self, other: &Face) -> Face {
        Face(
            self.0
                .iter()
                .copied()
                .filter(|v| other.0.binary_search(v).is_err())
                .collect(),
        )
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        crate::combinatorics::intersection_size(&self.0, &other.0) == 0
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl From<&[usize]> for Face {
    fn from(v: &[usize]) -> Self {
        let set: BTreeSet<usize> = v.iter().copied().collect();
        Face(set.into_iter().collect())
    }
}

/// One level `X(i)` together with its distribution `Pi_i`.
#[derive(Clone, Debug)]
pub struct Level {
    faces: Vec<Face>,
    index: HashMap<Face, usize>,
    weights: Vec<f64>,
}

impl Level {
    fn from_map(map: BTreeMap<Face, f64>) -> Self {
        let (faces, weights): (Vec<Face>, Vec<f64>) = map.into_iter().unzip();
        let index = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        Level {
            faces,
            index,
            weights,
        }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn index_of(&self, face: &Face) -> Option<usize> {
        self.index.get(face).copied()
    }
}

/// A weighted pure simplicial complex with every level materialized.
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct Complex {
    n: usize,
    levels: Vec<Level>,
    uniform: bool,
}

impl Complex {
    /// Vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i]
    }

    pub fn faces(&self, i: usize) -> &[Face] {
        &self.levels[i].faces
    }

    pub fn weights(&self, i: usize) -> &[f64] {
        &self.levels[i].weights
    }

    pub fn level_size(&self, i: usize) -> usize {
        self.levels[i].len()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Level::len).collect()
    }

    /// Whether the top distribution was declared uniform.
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn index_of(&self, face: &Face) -> Option<usize> {
        self.levels.get(face.level())?.index_of(face)
    }

    fn check_level(&self, k: usize) -> Result<()> {
        if k > self.dim() {
            return Err(HdxError::MalformedInput(format!(
                "level {k} out of range for a {}-dimensional complex",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Build a complex from its top faces. Weights are normalized by their total; `None`
    /// means uniform.
    pub fn build(top_faces: Vec<Vec<usize>>, weights: Option<Vec<f64>>) -> Result<Self> {
        build_complex(top_faces, weights)
    }

    /// The `k`-faces containing `tau` together with their `Pi_k` masses.
    pub fn link_faces(&self, tau: &Face, k: usize) -> Result<Vec<(usize, f64)>> {
        self.check_level(k)?;
        if tau.level() > k {
            return Err(HdxError::MalformedInput(format!(
                "level {k} is below the level of {tau}"
            )));
        }
        if self.index_of(tau).is_none() {
            return Err(HdxError::UnknownFace(tau.clone()));
        }
        let level = &self.levels[k];
        Ok(level
            .faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.contains(tau))
            .map(|(i, _)| (i, level.weights[i]))
            .collect())
    }

    /// The link `X_tau` with its renormalized distribution.
    pub fn link(&self, tau: &Face) -> Result<Link<'_>> {
        if self.index_of(tau).is_none() {
            return Err(HdxError::UnknownFace(tau.clone()));
        }
        if tau.level() >= self.dim() {
            return Err(HdxError::MalformedInput(format!(
                "link of {tau} is empty: face level must be below the dimension {}",
                self.dim()
            )));
        }
        let top = &self.levels[self.dim()];
        let mut faces = Vec::new();
        let mut weights = Vec::new();
        for (face, &w) in top.faces.iter().zip(&top.weights) {
            if face.contains(tau) {
                faces.push(face.minus(tau).0);
                weights.push(w);
            }
        }
        let mut complex = build_complex(faces, Some(weights))?;
        complex.uniform = self.uniform;
        Ok(Link {
            base: self,
            tau: tau.clone(),
            complex,
        })
    }

    /// Largest absolute violation of the downward-closure recurrence over all levels.
    pub fn recurrence_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            let mut acc = vec![0.0; self.level_size(i)];
            for (y, &w) in self.levels[i + 1].faces.iter().zip(&self.levels[i + 1].weights) {
                for skip in 0..y.level() {
                    let mut sub = y.0.clone();
                    sub.remove(skip);
                    let idx = self.levels[i].index[&Face(sub)];
                    acc[idx] += w;
                }
            }
            for (a, &p) in acc.iter().zip(&self.levels[i].weights) {
                worst = worst.max((a / (i + 1) as f64 - p).abs());
            }
        }
        worst
    }

    /// Serialize to the complex file format.
    pub fn to_file(&self) -> ComplexFile {
        let d = self.dim();
        ComplexFile {
            n: self.n,
            d,
            top_faces: self.levels[d].faces.iter().map(|f| f.0.clone()).collect(),
            weights: if self.uniform {
                WeightSpec::Named("uniform".to_string())
            } else {
                WeightSpec::Explicit(self.levels[d].weights.clone())
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(&self.to_file()).expect("complex file serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile =
            serde_json::from_str(text).map_err(|e| HdxError::ParseError(e.to_string()))?;
        file.into_complex()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

/// The link of a face: `X_tau = { t ∖ tau : t ⊇ tau }` with the renormalized distribution.
#[derive(Clone, Debug)]
pub struct Link<'a> {
    pub base: &'a Complex,
    pub tau: Face,
    pub complex: Complex,
}

/// Build a complex from top faces and optional weights (uniform when omitted).
pub fn build_complex(top_faces: Vec<Vec<usize>>, weights: Option<Vec<f64>>) -> Result<Complex> {
    if top_faces.is_empty() {
        return Err(HdxError::MalformedInput("no top faces".into()));
    }
    let d = top_faces[0].len();
    if d == 0 {
        return Err(HdxError::MalformedInput("top faces must be non-empty".into()));
    }
    if let Some(bad) = top_faces.iter().find(|f| f.len() != d) {
        return Err(HdxError::MalformedInput(format!(
            "mixed face sizes: {bad:?} has {} vertices, expected {d}",
            bad.len()
        )));
    }
    let uniform = weights.is_none();
    let weights = weights.unwrap_or_else(|| vec![1.0; top_faces.len()]);
    if weights.len() != top_faces.len() {
        return Err(HdxError::MalformedInput(format!(
            "{} weights for {} top faces",
            weights.len(),
            top_faces.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(HdxError::MalformedInput("weights must be finite and non-negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(HdxError::MalformedInput("zero total weight".into()));
    }
    if weights.contains(&0.0) {
        return Err(HdxError::MalformedInput(
            "every top face needs positive weight".into(),
        ));
    }
    let scale = if (total - 1.0).abs() <= DISTRIBUTION_TOL { 1.0 } else { total };

    let mut top = BTreeMap::new();
    for (face, w) in top_faces.into_iter().zip(weights) {
        let face = Face::new(face)?;
        if top.insert(face.clone(), w / scale).is_some() {
            return Err(HdxError::MalformedInput(format!("duplicate top face {face}")));
        }
    }
    let vertex_count = top
        .keys()
        .flat_map(|f: &Face| f.0.iter().copied())
        .collect::<BTreeSet<_>>()
        .len();

    let mut maps = vec![top];
    for i in (1..=d).rev() {
        let mut lower: BTreeMap<Face, f64> = BTreeMap::new();
        for (y, &w) in maps.last().unwrap() {
            for skip in 0..i {
                let mut sub = y.0.clone();
                sub.remove(skip);
                *lower.entry(Face(sub)).or_insert(0.0) += w / i as f64;
            }
        }
        maps.push(lower);
    }
    maps.reverse();
    // Π_0(∅) is 1 by definition; the summed value can be off by round-off
    if let Some(w) = maps[0].values_mut().next() {
        *w = 1.0;
    }
    Ok(Complex {
        n: vertex_count,
        levels: maps.into_iter().map(Level::from_map).collect(),
        uniform,
    })
}

/// The complete complex `J(n, d)`: all `d`-subsets of `{1..n}` with uniform weights.
pub fn complete_complex(n: usize, d: usize) -> Result<Complex> {
    if d == 0 || d > n {
        return Err(HdxError::MalformedInput(format!(
            "complete complex needs 1 <= d <= n, got n={n}, d={d}"
        )));
    }
    let vertices: Vec<usize> = (1..=n).collect();
    build_complex(combinations(&vertices, d), None)
}

/// All triangles on `{1..n}` except `{1,2,3}`, uniformly weighted.
pub fn punctured_complete_complex(n: usize) -> Result<Complex> {
    if n < 5 {
        return Err(HdxError::MalformedInput(format!(
            "punctured complete complex needs n >= 5, got {n}"
        )));
    }
    let vertices: Vec<usize> = (1..=n).collect();
    let faces = combinations(&vertices, 3)
        .into_iter()
        .filter(|f| f != &[1, 2, 3])
        .collect();
    build_complex(faces, None)
}

/// Keep each `d`-subset of `{1..n}` independently with probability `p`, resampling until the
/// 1-skeleton of every link at levels `0..=d-2` is connected.
pub fn sparsified_complex(n: usize, d: usize, p: f64, seed: u64) -> Result<Complex> {
    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
        return Err(HdxError::MalformedInput(format!("keep probability {p} not in (0, 1]")));
    }
    if d == 0 || d > n {
        return Err(HdxError::MalformedInput(format!(
            "sparsified complex needs 1 <= d <= n, got n={n}, d={d}"
        )));
    }
    let vertices: Vec<usize> = (1..=n).collect();
    let all = combinations(&vertices, d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SPARSIFY_ATTEMPTS {
        let kept: Vec<Vec<usize>> = all
            .iter()
            .filter(|_| rng.gen::<f64>() < p)
            .cloned()
            .collect();
        if kept.is_empty() {
            continue;
        }
        let complex = build_complex(kept, None)?;
        if links_connected(&complex) {
            return Ok(complex);
        }
    }
    Err(HdxError::GenerationFailed(format!(
        "no connected sample of J({n},{d}) at p={p} in {SPARSIFY_ATTEMPTS} attempts"
    )))
}

fn links_connected(complex: &Complex) -> bool {
    let d = complex.dim();
    if d < 2 {
        return true;
    }
    (0..=d - 2).all(|i| {
        complex
            .faces(i)
            .iter()
            .all(|tau| local_spectral::link_skeleton(complex, tau).is_connected())
    })
}

/// Top-face weights in a complex file: an explicit vector or the string `"uniform"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Named(String),
    Explicit(Vec<f64>),
}

/// On-disk representation of a complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub n: usize,
    pub d: usize,
    pub top_faces: Vec<Vec<usize>>,
    pub weights: WeightSpec,
}

impl ComplexFile {
    pub fn into_complex(self) -> Result<Complex> {
        let parse = |msg: String| HdxError::ParseError(msg);
        if self.d == 0 {
            return Err(parse("d must be at least 1".into()));
        }
        for face in &self.top_faces {
            if face.len() != self.d {
                return Err(parse(format!("face {face:?} does not have d={} vertices", self.d)));
            }
            if face.windows(2).any(|w| w[0] >= w[1]) {
                return Err(parse(format!("face {face:?} is not strictly increasing")));
            }
        }
        let distinct: BTreeSet<usize> = self.top_faces.iter().flatten().copied().collect();
        if distinct.len() > self.n {
            return Err(parse(format!(
                "{} distinct vertices but n={}",
                distinct.len(),
                self.n
            )));
        }
        let weights = match self.weights {
            WeightSpec::Named(ref s) if s == "uniform" => None,
            WeightSpec::Named(s) => return Err(parse(format!("unknown weight spec {s:?}"))),
            WeightSpec::Explicit(w) => {
                if w.len() != self.top_faces.len() {
                    return Err(parse(format!(
                        "{} weights for {} faces",
                        w.len(),
                        self.top_faces.len()
                    )));
                }
                if w.iter().any(|x| !x.is_finite() || *x <= 0.0) {
                    return Err(parse("weights must be positive and finite".into()));
                }
                let total: f64 = w.iter().sum();
                if (total - 1.0).abs() > FILE_WEIGHT_TOL {
                    return Err(parse(format!("weights sum to {total}, expected 1")));
                }
                Some(w)
            }
        };
        let mut complex = build_complex(self.top_faces, weights).map_err(|e| match e {
            HdxError::MalformedInput(m) => HdxError::ParseError(m),
            other => other,
        })?;
        complex.n = self.n;
        Ok(complex)
    }
}

/// `C(k, i) * Pi_i(tau)`: the `Pi_k` mass of the `k`-faces containing an `i`-face.
pub fn link_mass(complex: &Complex, tau: &Face, k: usize) -> Option<f64> {
    let i = tau.level();
    let idx = complex.index_of(tau)?;
    Some(binomial(k, i) * complex.weights(i)[idx])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum(v: &[f64]) -> f64 {
        v.iter().sum()
    }

    #[test]
    fn triangle_boundary() {
        let c = build_complex(vec![vec![1, 2], vec![1, 3], vec![2, 3]], None).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.level_sizes(), vec![1, 3, 3]);
        for &w in c.weights(1) {
            assert!((w - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(c.weights(0), &[1.0]);
    }

    #[test]
    fn complete_complex_levels() {
        let c = complete_complex(4, 2).unwrap();
        assert_eq!(c.level_size(2), 6);
        for &w in c.weights(1) {
            assert!((w - 0.25).abs() < 1e-15);
        }
        let c = complete_complex(12, 4).unwrap();
        assert_eq!(c.level_size(4), 495);
        let c = complete_complex(8, 3).unwrap();
        for &w in c.weights(3) {
            assert!((w - 1.0 / 56.0).abs() < 1e-15);
        }
        assert!(matches!(complete_complex(3, 4), Err(HdxError::MalformedInput(_))));
    }

    #[test]
    fn punctured_weights_follow_closed_form() {
        let c = punctured_complete_complex(8).unwrap();
        assert_eq!(c.level_size(3), 55);
        let w12 = c.weights(2)[c.index_of(&Face::new(vec![1, 2]).unwrap()).unwrap()];
        let w14 = c.weights(2)[c.index_of(&Face::new(vec![1, 4]).unwrap()).unwrap()];
        assert!((w12 - 5.0 / 165.0).abs() < 1e-15);
        assert!((w14 - 6.0 / 165.0).abs() < 1e-15);
        for n in 5..10 {
            let c = punctured_complete_complex(n).unwrap();
            let w = c.weights(2)[c.index_of(&Face::new(vec![2, 3]).unwrap()).unwrap()];
            let expected = (n as f64 - 3.0) / (3.0 * binomial(n, 3) - 3.0);
            assert!((w - expected).abs() < 1e-15);
        }
        assert!(matches!(punctured_complete_complex(4), Err(HdxError::MalformedInput(_))));
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(
            build_complex(vec![vec![1, 2], vec![1, 2, 3]], None),
            Err(HdxError::MalformedInput(_))
        ));
        assert!(matches!(
            build_complex(vec![vec![1, 2], vec![2, 3]], Some(vec![0.0, 0.0])),
            Err(HdxError::MalformedInput(_))
        ));
        assert!(matches!(
            build_complex(vec![vec![1, 2], vec![2, 1]], None),
            Err(HdxError::MalformedInput(_))
        ));
    }

    #[test]
    fn distributions_and_recurrence() {
        for c in [
            complete_complex(7, 3).unwrap(),
            punctured_complete_complex(7).unwrap(),
            build_complex(
                vec![vec![1, 2, 3], vec![2, 3, 4], vec![1, 4, 5]],
                Some(vec![0.5, 0.3, 0.2]),
            )
            .unwrap(),
        ] {
            for i in 0..=c.dim() {
                assert!((sum(c.weights(i)) - 1.0).abs() < DISTRIBUTION_TOL);
            }
            assert!(c.recurrence_defect() < DISTRIBUTION_TOL);
            assert_eq!(c.level_size(0), 1);
            assert_eq!(c.weights(0)[0], 1.0);
        }
    }

    #[test]
    fn links_of_complete_and_punctured() {
        let c = complete_complex(4, 2).unwrap();
        let l = c.link(&Face::new(vec![1]).unwrap()).unwrap();
        assert_eq!(l.complex.faces(1).len(), 3);
        assert_eq!(l.complex.faces(1)[0].vertices(), &[2]);
        for &w in l.complex.weights(1) {
            assert!((w - 1.0 / 3.0).abs() < 1e-15);
        }

        let p = punctured_complete_complex(8).unwrap();
        let l = p.link(&Face::new(vec![1]).unwrap()).unwrap();
        assert_eq!(l.complex.dim(), 2);
        let verts: Vec<usize> = l.complex.faces(1).iter().map(|f| f.vertices()[0]).collect();
        assert_eq!(verts, (2..=8).collect::<Vec<_>>());
        assert_eq!(l.complex.level_size(2), 20);
        assert!(l.complex.index_of(&Face::new(vec![2, 3]).unwrap()).is_none());

        assert!(matches!(
            c.link(&Face::new(vec![9]).unwrap()),
            Err(HdxError::UnknownFace(_))
        ));
    }

    #[test]
    fn link_faces_mass_identity() {
        let c = complete_complex(5, 3).unwrap();
        let faces = c.link_faces(&Face::new(vec![1]).unwrap(), 3).unwrap();
        assert_eq!(faces.len(), 6);
        assert_eq!(c.link_faces(&Face::empty(), 2).unwrap().len(), 10);

        let c = complete_complex(6, 3).unwrap();
        let tau = Face::new(vec![1, 2]).unwrap();
        let mass: f64 = c.link_faces(&tau, 3).unwrap().iter().map(|(_, m)| m).sum();
        // brute force: 4 triples containing {1,2}, each of mass 1/20
        assert!((mass - 4.0 / 20.0).abs() < 1e-12);
        assert!((mass - link_mass(&c, &tau, 3).unwrap()).abs() < 1e-12);
        assert!(matches!(c.link_faces(&tau, 4), Err(HdxError::MalformedInput(_))));
    }

    #[test]
    fn sparsified_generator() {
        let full = sparsified_complex(7, 3, 1.0, 3).unwrap();
        let complete = complete_complex(7, 3).unwrap();
        assert_eq!(full.to_json(), complete.to_json());
        assert!(matches!(
            sparsified_complex(7, 3, 0.0, 1),
            Err(HdxError::GenerationFailed(_))
        ));
        let a = sparsified_complex(10, 4, 0.7, 1).unwrap();
        let b = sparsified_complex(10, 4, 0.7, 1).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.recurrence_defect() < DISTRIBUTION_TOL);
    }

    #[test]
    fn file_round_trip_and_validation() {
        let c = complete_complex(5, 2).unwrap();
        let text = c.to_json();
        let back = Complex::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);

        let weighted = build_complex(
            vec![vec![1, 2], vec![2, 3], vec![1, 3]],
            Some(vec![0.2, 0.3, 0.5]),
        )
        .unwrap();
        let text = weighted.to_json();
        assert_eq!(Complex::from_json(&text).unwrap().to_json(), text);

        let unsorted = r#"{"n":3,"d":2,"top_faces":[[2,1]],"weights":"uniform"}"#;
        assert!(matches!(Complex::from_json(unsorted), Err(HdxError::ParseError(_))));
        let half = r#"{"n":3,"d":2,"top_faces":[[1,2],[2,3]],"weights":[0.25,0.25]}"#;
        assert!(matches!(Complex::from_json(half), Err(HdxError::ParseError(_))));
        let reordered = r#"{"n":3,"d":2,"top_faces":[[2,3],[1,2]],"weights":"uniform"}"#;
        let c = Complex::from_json(reordered).unwrap();
        assert_eq!(c.faces(2)[0].vertices(), &[1, 2]);
    }
}
