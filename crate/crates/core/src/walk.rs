//! Averaging operators, pure walks and HD-walks.
//!
//! Walk words are written in the order the walk moves: `Up` climbs one level through a
//! coface, `Down` drops a vertex. As a transition matrix an `Up` step out of level `l` is
//! `D_{l+1}` and a `Down` step out of level `l` is `U_{l-1}`, so the word `[Up, Down]` at
//! level `k` is the canonical walk `N^1_k = D_{k+1} U_k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, combinations};
use crate::complex::{Complex, Face};
use crate::error::{HdxError, Result};
use crate::local_spectral::WeightedGraph;
use crate::operator::Operator;

/// Entries above this negative value are treated as round-off and clamped to zero.
pub const CLAMP_TOL: f64 = 1e-12;
/// Entries below this are a hard error for general affine combinations.
pub const NEGATIVE_TOL: f64 = 1e-8;
/// Entries below this are a hard error for the alternating swap construction.
pub const AJT_NEGATIVE_TOL: f64 = 1e-6;
/// Row sums must equal one within this.
pub const ROW_SUM_TOL: f64 = 1e-10;
/// `|Π(s)M(s,t) − Π(t)M(t,s)|` allowed for a self-adjoint walk.
pub const ADJOINT_TOL: f64 = 1e-10;
/// Asymmetry allowed when turning a walk into a weighted graph.
pub const GRAPH_ADJOINT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    Up,
    Down,
}

/// Parse a word such as `"UUDD"`.
pub fn parse_word(s: &str) -> Result<Vec<Step>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            'U' | 'u' => Ok(Step::Up),
            'D' | 'd' => Ok(Step::Down),
            other => Err(HdxError::MalformedWalk(format!("unknown step {other:?}"))),
        })
        .collect()
}

pub fn format_word(word: &[Step]) -> String {
    word.iter()
        .map(|s| match s {
            Step::Up => 'U',
            Step::Down => 'D',
        })
        .collect()
}

/// `Up^j Down^j`.
pub fn canonical_word(j: usize) -> Vec<Step> {
    let mut w = vec![Step::Up; j];
    w.extend(vec![Step::Down; j]);
    w
}

/// `(Down Up)^t`, the walk `(U_{k-1} D_k)^t`.
pub fn lower_word(t: usize) -> Vec<Step> {
    [Step::Down, Step::Up].repeat(t)
}

/// 1-indexed positions of the `Down` steps.
pub fn down_positions(word: &[Step]) -> Vec<usize> {
    word.iter()
        .enumerate()
        .filter(|(_, s)| **s == Step::Down)
        .map(|(i, _)| i + 1)
        .collect()
}

/// Check that `word` is balanced and stays within `[0, d]` starting from `k`.
pub fn validate_word(word: &[Step], k: usize, d: usize) -> Result<()> {
    let mut level = k as isize;
    for (pos, step) in word.iter().enumerate() {
        level += match step {
            Step::Up => 1,
            Step::Down => -1,
        };
        if level < 0 || level > d as isize {
            return Err(HdxError::MalformedWalk(format!(
                "{} leaves [0, {d}] at step {} starting from level {k}",
                format_word(word),
                pos + 1
            )));
        }
    }
    if level != k as isize {
        return Err(HdxError::MalformedWalk(format!(
            "{} is unbalanced: ends at level {level}, started at {k}",
            format_word(word)
        )));
    }
    Ok(())
}

/// A linear map `C_source → C_target`; the matrix has rows indexed by `X(target)`.
#[derive(Clone, Debug)]
pub struct LevelOperator {
    pub source_level: usize,
    pub target_level: usize,
    pub matrix: Operator,
}

impl LevelOperator {
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.matrix.apply_slice(f)
    }
}

fn check_levels(complex: &Complex, low: usize, high: usize) -> Result<()> {
    if low > high || high > complex.dim() {
        return Err(HdxError::MalformedInput(format!(
            "levels {low}..{high} out of range for a {}-dimensional complex",
            complex.dim()
        )));
    }
    Ok(())
}

/// Index of every `i`-subset of each face in `X(k)`, face by face.
fn subface_indices(complex: &Complex, k: usize, i: usize) -> Vec<Vec<usize>> {
    complex
        .faces(k)
        .iter()
        .map(|s| {
            combinations(s.vertices(), i)
                .into_iter()
                .map(|sub| complex.index_of(&Face::from_sorted(sub)).expect("closed under subsets"))
                .collect()
        })
        .collect()
}

/// `U^k_i : C_i → C_k`, `U^k_i g(s) = E_{τ ⊂ s, |τ| = i}[g(τ)]`.
pub fn up_composite(complex: &Complex, i: usize, k: usize) -> Result<LevelOperator> {
    check_levels(complex, i, k)?;
    let scale = 1.0 / binomial(k, i);
    let mut triplets = Vec::new();
    for (row, subs) in subface_indices(complex, k, i).into_iter().enumerate() {
        for col in subs {
            triplets.push((row, col, scale));
        }
    }
    Ok(LevelOperator {
        source_level: i,
        target_level: k,
        matrix: Operator::from_triplets(complex.level_size(k), complex.level_size(i), &triplets),
    })
}

/// `D^k_i : C_k → C_i`, `D^k_i f(τ) = Σ_{s ⊃ τ} Π_k(s) / (C(k,i) Π_i(τ)) f(s)`.
pub fn down_composite(complex: &Complex, k: usize, i: usize) -> Result<LevelOperator> {
    check_levels(complex, i, k)?;
    let c = binomial(k, i);
    let pk = complex.weights(k);
    let pi = complex.weights(i);
    let mut triplets = Vec::new();
    for (col, subs) in subface_indices(complex, k, i).into_iter().enumerate() {
        for row in subs {
            triplets.push((row, col, pk[col] / (c * pi[row])));
        }
    }
    Ok(LevelOperator {
        source_level: k,
        target_level: i,
        matrix: Operator::from_triplets(complex.level_size(i), complex.level_size(k), &triplets),
    })
}

/// `U_k : C_k → C_{k+1}`.
pub fn up_operator(complex: &Complex, k: usize) -> Result<LevelOperator> {
    if k >= complex.dim() {
        return Err(HdxError::MalformedInput(format!(
            "U_{k} needs k < d = {}",
            complex.dim()
        )));
    }
    up_composite(complex, k, k + 1)
}

/// `D_k : C_k → C_{k-1}`.
pub fn down_operator(complex: &Complex, k: usize) -> Result<LevelOperator> {
    if k == 0 || k > complex.dim() {
        return Err(HdxError::MalformedInput(format!(
            "D_{k} needs 1 <= k <= d = {}",
            complex.dim()
        )));
    }
    down_composite(complex, k, k - 1)
}

/// Transition matrix of a word: runs of equal steps are taken as one composite operator.
fn word_matrix(complex: &Complex, k: usize, word: &[Step]) -> Result<Operator> {
    validate_word(word, k, complex.dim())?;
    let mut m = Operator::identity(complex.level_size(k));
    let mut level = k;
    let mut pos = 0;
    while pos < word.len() {
        let step = word[pos];
        let run = word[pos..].iter().take_while(|s| **s == step).count();
        let (factor, next) = match step {
            // walking up from `level` to `level + run` averages over cofaces: D^{level+run}_{level}
            Step::Up => (down_composite(complex, level + run, level)?, level + run),
            Step::Down => (up_composite(complex, level - run, level)?, level - run),
        };
        m = m.compose(&factor.matrix);
        level = next;
        pos += run;
    }
    Ok(m)
}

/// A single composition of averaging steps returning to level `k`.
#[derive(Clone, Debug)]
pub struct PureWalk {
    pub k: usize,
    pub word: Vec<Step>,
    pub down_positions: Vec<usize>,
    pub matrix: Operator,
}

impl PureWalk {
    pub fn height(&self) -> usize {
        self.down_positions.len()
    }
}

pub fn pure_walk(complex: &Complex, k: usize, word: &[Step]) -> Result<PureWalk> {
    if k > complex.dim() {
        return Err(HdxError::MalformedWalk(format!(
            "level {k} above the dimension {}",
            complex.dim()
        )));
    }
    let matrix = word_matrix(complex, k, word)?;
    Ok(PureWalk {
        k,
        word: word.to_vec(),
        down_positions: down_positions(word),
        matrix,
    })
}

/// One term `α_Y · Y` of an affine combination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkTerm {
    pub coefficient: f64,
    pub word: Vec<Step>,
}

/// How the walk was specified, which determines its predicted strip values.
#[derive(Clone, Debug, PartialEq)]
pub enum WalkForm {
    /// An affine combination of pure walks.
    Terms(Vec<WalkTerm>),
    /// The partial-swap walk `S^j_k` built by restriction and renormalization.
    Swap { j: usize },
}

/// An affine combination of pure walks on `X(k)` with its materialized matrix.
#[derive(Clone, Debug)]
pub struct HdWalk {
    pub k: usize,
    pub label: String,
    pub form: WalkForm,
    pub matrix: Operator,
    /// `X(k)` in canonical order.
    pub faces: Vec<Face>,
    /// `Π_k`.
    pub measure: Vec<f64>,
    /// A measure the walk is reversible for; equals `Π_k` unless noted by `adjoint_defect`.
    pub stationary: Vec<f64>,
    pub is_complete: bool,
    /// Largest magnitude of a negative entry that was clamped to zero.
    pub negativity: f64,
    /// `max |Π_k(s)M(s,t) − Π_k(t)M(t,s)|`.
    pub adjoint_defect: f64,
}

impl HdWalk {
    pub fn size(&self) -> usize {
        self.faces.len()
    }

    /// The pure-walk terms, with a swap walk expanded into its alternating canonical sum.
    pub fn terms(&self) -> Vec<WalkTerm> {
        match &self.form {
            WalkForm::Terms(t) => t.clone(),
            WalkForm::Swap { j } => ajt_terms(self.k, *j),
        }
    }

    /// `w(M) = Σ |α_Y|`.
    pub fn weight(&self) -> f64 {
        self.terms().iter().map(|t| t.coefficient.abs()).sum()
    }

    /// `h(M)`: the largest number of down steps among the terms.
    pub fn height(&self) -> usize {
        self.terms()
            .iter()
            .map(|t| down_positions(&t.word).len())
            .max()
            .unwrap_or(0)
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.adjoint_defect <= ADJOINT_TOL
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.matrix.apply_slice(f)
    }
}

impl fmt::Display for HdWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on X({}) ({} faces)", self.label, self.k, self.size())
    }
}

/// Clamp negatives above `-hard` to zero; error at the most negative entry otherwise.
fn clamp_negatives(
    m: &mut Operator,
    hard: f64,
    err: impl Fn(usize, usize, f64) -> HdxError,
) -> Result<f64> {
    let mut worst = 0.0f64;
    if let Some((i, j, v)) = m.min_entry() {
        if v < -hard {
            return Err(err(i, j, v));
        }
        worst = (-v).max(0.0);
    }
    m.map_entries(|v| if v < 0.0 { 0.0 } else { v });
    Ok(worst)
}

fn check_rows(m: &Operator) -> Result<()> {
    for (i, s) in m.row_sums().iter().enumerate() {
        if (s - 1.0).abs() > ROW_SUM_TOL {
            return Err(HdxError::NotAWalk {
                row: i,
                col: i,
                value: *s,
            });
        }
    }
    Ok(())
}

fn is_canonical_word(word: &[Step]) -> bool {
    let j = word.len() / 2;
    word.len().is_multiple_of(2) && word == canonical_word(j).as_slice()
}

/// Validate and assemble `Σ α_Y Y`.
///
/// The walk is flagged complete when it is a convex combination of canonical walks.
pub fn hd_walk(complex: &Complex, k: usize, terms: &[WalkTerm]) -> Result<HdWalk> {
    if terms.is_empty() {
        return Err(HdxError::MalformedInput("no walk terms".into()));
    }
    let total: f64 = terms.iter().map(|t| t.coefficient).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(HdxError::MalformedInput(format!(
            "coefficients sum to {total}, expected 1"
        )));
    }
    let mut pure = Vec::with_capacity(terms.len());
    for t in terms {
        pure.push(pure_walk(complex, k, &t.word)?);
    }
    let pairs: Vec<(f64, &Operator)> = terms
        .iter()
        .zip(&pure)
        .map(|(t, p)| (t.coefficient, &p.matrix))
        .collect();
    let mut matrix = Operator::linear_combination(&pairs);
    check_rows(&matrix)?;
    let negativity = clamp_negatives(&mut matrix, NEGATIVE_TOL, |row, col, value| {
        HdxError::NotAWalk { row, col, value }
    })?;
    let measure = complex.weights(k).to_vec();
    let adjoint_defect = matrix.adjoint_defect(&measure);
    if adjoint_defect > ADJOINT_TOL {
        return Err(HdxError::NotSelfAdjoint(adjoint_defect));
    }
    let is_complete = terms
        .iter()
        .all(|t| t.coefficient >= 0.0 && is_canonical_word(&t.word));
    let label = terms
        .iter()
        .map(|t| format!("{}*{}", t.coefficient, display_word(&t.word)))
        .collect::<Vec<_>>()
        .join(" + ");
    Ok(HdWalk {
        k,
        label,
        form: WalkForm::Terms(terms.to_vec()),
        matrix,
        faces: complex.faces(k).to_vec(),
        stationary: measure.clone(),
        measure,
        is_complete,
        negativity,
        adjoint_defect,
    })
}

fn display_word(word: &[Step]) -> String {
    if word.is_empty() {
        "I".into()
    } else {
        format_word(word)
    }
}

fn check_room(complex: &Complex, k: usize, j: usize) -> Result<()> {
    if k + j > complex.dim() {
        return Err(HdxError::MalformedInput(format!(
            "walk needs k + j <= d, got k={k}, j={j}, d={}",
            complex.dim()
        )));
    }
    Ok(())
}

/// `N^j_k = D^{k+j}_k U^{k+j}_k`.
pub fn canonical_walk(complex: &Complex, k: usize, j: usize) -> Result<HdWalk> {
    check_room(complex, k, j)?;
    let mut walk = hd_walk(
        complex,
        k,
        &[WalkTerm {
            coefficient: 1.0,
            word: canonical_word(j),
        }],
    )?;
    walk.label = format!("N^{j}_{k}");
    walk.is_complete = true;
    Ok(walk)
}

/// The identity walk on `X(k)`.
pub fn identity_walk(complex: &Complex, k: usize) -> Result<HdWalk> {
    let mut walk = canonical_walk(complex, k, 0)?;
    walk.label = format!("I_{k}");
    Ok(walk)
}

/// `(U_{k-1} D_k)^t`.
pub fn lower_walk(complex: &Complex, k: usize, t: usize) -> Result<HdWalk> {
    if k == 0 || k > complex.dim() {
        return Err(HdxError::MalformedInput(format!(
            "lower walk needs 1 <= k <= d, got k={k}"
        )));
    }
    let mut walk = hd_walk(
        complex,
        k,
        &[WalkTerm {
            coefficient: 1.0,
            word: lower_word(t),
        }],
    )?;
    walk.label = format!("(UD)^{t}_{k}");
    Ok(walk)
}

/// Coefficients of `S^j_k = Σ_i c_i N^i_k`:
/// `c_i = (−1)^{j−i} C(j,i) C(k+i,i) / C(k,k−j)`.
pub fn ajt_coefficients(k: usize, j: usize) -> Vec<f64> {
    let norm = binomial(k, k - j);
    (0..=j)
        .map(|i| {
            let sign = if (j - i).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * binomial(j, i) * binomial(k + i, i) / norm
        })
        .collect()
}

fn ajt_terms(k: usize, j: usize) -> Vec<WalkTerm> {
    ajt_coefficients(k, j)
        .into_iter()
        .enumerate()
        .map(|(i, c)| WalkTerm {
            coefficient: c,
            word: canonical_word(i),
        })
        .collect()
}

/// `S^j_k(s,s') = α_s N^j_k(s,s')` for `|s ∩ s'| = k − j`, zero otherwise.
///
/// Only pairs with `s ∪ s' ∈ X(k+j)` can carry mass, and for them
/// `N^j_k(s,s') = Π_{k+j}(s ∪ s') / (C(k+j,k)^2 Π_k(s))`, so the restriction is assembled
/// directly from the top-level faces without forming `N^j_k`.
///
/// On complexes where `α_s` varies the result is reversible for `Π_k / α` rather than
/// `Π_k`; that measure is stored in `stationary` and the `Π_k` defect in `adjoint_defect`.
pub fn swap_walk_direct(complex: &Complex, k: usize, j: usize) -> Result<HdWalk> {
    if j > k {
        return Err(HdxError::MalformedInput(format!("swap walk needs j <= k, got j={j}, k={k}")));
    }
    check_room(complex, k, j)?;
    let top = k + j;
    let c2 = binomial(top, k).powi(2);
    let pk = complex.weights(k);
    let full: u64 = (1u64 << top) - 1;
    // k-subsets of a (k+j)-face as position masks; identical for every face
    let masks: Vec<u64> = combinations(&(0..top).collect::<Vec<_>>(), k)
        .into_iter()
        .map(|c| c.iter().fold(0u64, |m, &p| m | (1 << p)))
        .collect();
    let mut triplets = Vec::new();
    let mut idx = vec![0usize; masks.len()];
    for (y, &w) in complex.faces(top).iter().zip(complex.weights(top)) {
        let v = y.vertices();
        for (slot, &mask) in masks.iter().enumerate() {
            let sub: Vec<usize> = (0..top).filter(|p| mask >> p & 1 == 1).map(|p| v[p]).collect();
            idx[slot] = complex.index_of(&Face::from_sorted(sub)).expect("closed under subsets");
        }
        for (a, &ma) in masks.iter().enumerate() {
            for (b, &mb) in masks.iter().enumerate() {
                if ma | mb == full {
                    let s = idx[a];
                    triplets.push((s, idx[b], w / (c2 * pk[s])));
                }
            }
        }
    }
    let n = complex.level_size(k);
    let raw = Operator::from_triplets(n, n, &triplets);
    let sums = raw.row_sums();
    if let Some(i) = sums.iter().position(|&s| s <= 0.0) {
        return Err(HdxError::DegenerateRow(complex.faces(k)[i].clone()));
    }
    let mut scaled = Vec::with_capacity(raw.nnz());
    for (i, s) in sums.iter().enumerate() {
        for (c, v) in raw.row(i) {
            scaled.push((i, c, v / s));
        }
    }
    let matrix = Operator::from_triplets(n, n, &scaled);
    let measure = pk.to_vec();
    let adjoint_defect = matrix.adjoint_defect(&measure);
    // Π_k(s) S(s,s') / α_s = Π_k(s) N(s,s') is symmetric
    let raw_stationary: Vec<f64> = measure.iter().zip(&sums).map(|(p, s)| p * s).collect();
    let total: f64 = raw_stationary.iter().sum();
    let stationary = raw_stationary.iter().map(|p| p / total).collect();
    Ok(HdWalk {
        k,
        label: format!("S^{j}_{k}"),
        form: WalkForm::Swap { j },
        matrix,
        faces: complex.faces(k).to_vec(),
        measure,
        stationary,
        is_complete: true,
        negativity: 0.0,
        adjoint_defect,
    })
}

/// `S^j_k` as the alternating hypergeometric sum of canonical walks.
pub fn swap_walk_ajt(complex: &Complex, k: usize, j: usize) -> Result<HdWalk> {
    if j > k {
        return Err(HdxError::MalformedInput(format!("swap walk needs j <= k, got j={j}, k={k}")));
    }
    check_room(complex, k, j)?;
    let terms = ajt_terms(k, j);
    let mut pure = Vec::with_capacity(terms.len());
    for t in &terms {
        pure.push(pure_walk(complex, k, &t.word)?);
    }
    let pairs: Vec<(f64, &Operator)> = terms
        .iter()
        .zip(&pure)
        .map(|(t, p)| (t.coefficient, &p.matrix))
        .collect();
    let mut matrix = Operator::linear_combination(&pairs);
    let negativity = clamp_negatives(&mut matrix, AJT_NEGATIVE_TOL, |row, col, value| {
        HdxError::ConstructionMismatch { row, col, value }
    })?;
    // cancellation leaves round-off where the exact value is zero
    matrix.map_entries(|v| if v.abs() <= CLAMP_TOL { 0.0 } else { v });
    let matrix = prune(matrix);
    let measure = complex.weights(k).to_vec();
    let adjoint_defect = matrix.adjoint_defect(&measure);
    Ok(HdWalk {
        k,
        label: format!("S^{j}_{k} (alternating sum)"),
        form: WalkForm::Terms(terms),
        matrix,
        faces: complex.faces(k).to_vec(),
        stationary: measure.clone(),
        measure,
        is_complete: true,
        negativity,
        adjoint_defect,
    })
}

fn prune(m: Operator) -> Operator {
    let n = m.nrows();
    let mut t = Vec::new();
    for i in 0..n {
        for (j, v) in m.row(i) {
            t.push((i, j, v));
        }
    }
    Operator::from_triplets(n, m.ncols(), &t)
}

/// `Σ α_i M_i` with `α_i ≥ 0` summing to one.
pub fn convex_combination(walks: &[(f64, &HdWalk)]) -> Result<HdWalk> {
    let Some((_, first)) = walks.first() else {
        return Err(HdxError::MalformedInput("empty combination".into()));
    };
    if walks.iter().any(|(a, _)| *a < 0.0) {
        return Err(HdxError::MalformedInput("convex weights must be non-negative".into()));
    }
    let total: f64 = walks.iter().map(|(a, _)| a).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(HdxError::MalformedInput(format!("weights sum to {total}, expected 1")));
    }
    if walks.iter().any(|(_, w)| w.k != first.k || w.faces != first.faces) {
        return Err(HdxError::MalformedInput("walks live on different levels".into()));
    }
    let pairs: Vec<(f64, &Operator)> = walks.iter().map(|(a, w)| (*a, &w.matrix)).collect();
    let matrix = Operator::linear_combination(&pairs);
    let mut terms: Vec<WalkTerm> = Vec::new();
    for (a, w) in walks {
        for t in w.terms() {
            match terms.iter_mut().find(|x| x.word == t.word) {
                Some(x) => x.coefficient += a * t.coefficient,
                None => terms.push(WalkTerm {
                    coefficient: a * t.coefficient,
                    word: t.word,
                }),
            }
        }
    }
    let measure = first.measure.clone();
    let adjoint_defect = matrix.adjoint_defect(&measure);
    let label = walks
        .iter()
        .map(|(a, w)| format!("{a}*{}", w.label))
        .collect::<Vec<_>>()
        .join(" + ");
    let stationary = if walks.iter().all(|(_, w)| w.stationary == first.stationary) {
        first.stationary.clone()
    } else {
        measure.clone()
    };
    Ok(HdWalk {
        k: first.k,
        label,
        form: WalkForm::Terms(terms),
        matrix,
        faces: first.faces.clone(),
        measure,
        stationary,
        is_complete: walks.iter().all(|(_, w)| w.is_complete),
        negativity: walks.iter().fold(0.0f64, |a, (_, w)| a.max(w.negativity)),
        adjoint_defect,
    })
}

/// The weighted graph `W(s,t) = Π_k(s) M(s,t)` whose random walk is `M`.
pub fn walk_graph(walk: &HdWalk) -> Result<WeightedGraph> {
    if walk.adjoint_defect > GRAPH_ADJOINT_TOL {
        return Err(HdxError::NotSelfAdjoint(walk.adjoint_defect));
    }
    let n = walk.size();
    // each stored entry contributes half to both orientations, giving the symmetrized weight
    let mut triplets = Vec::with_capacity(2 * walk.matrix.nnz());
    for i in 0..n {
        for (j, v) in walk.matrix.row(i) {
            let w = 0.5 * walk.measure[i] * v;
            triplets.push((i, j, w));
            triplets.push((j, i, w));
        }
    }
    let weights = Operator::from_triplets(n, n, &triplets);
    Ok(WeightedGraph::from_parts(
        walk.faces.clone(),
        weights,
        walk.measure.clone(),
    ))
}

/// The random walk of a weighted graph, `M(s,t) = W(s,t) / Σ_u W(s,u)`.
pub fn walk_of(graph: &WeightedGraph) -> Operator {
    graph.walk_matrix()
}

/// `Σ_v Π_k(v) M(v,v)`.
pub fn laziness(walk: &HdWalk) -> f64 {
    walk.measure
        .iter()
        .enumerate()
        .map(|(i, p)| p * walk.matrix.get(i, i))
        .sum()
}

/// A parsed walk specification.
///
/// Grammar: `N:k:j`, `S:k:j`, `UD^t:k`, `I:k`, `combo:k:[[α,"UUDD"],...]`.
#[derive(Clone, Debug, PartialEq)]
pub enum WalkSpec {
    Canonical { k: usize, j: usize },
    Swap { k: usize, j: usize },
    Lower { k: usize, t: usize },
    Identity { k: usize },
    Combo { k: usize, terms: Vec<WalkTerm> },
}

impl WalkSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |why: &str| HdxError::MalformedWalk(format!("walk spec {spec:?}: {why}"));
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("expected an integer"));
        if let Some(rest) = spec.strip_prefix("combo:") {
            let (k, json) = rest.split_once(':').ok_or_else(|| bad("expected combo:k:[...]"))?;
            let raw: Vec<(f64, String)> =
                serde_json::from_str(json).map_err(|e| bad(&e.to_string()))?;
            let terms = raw
                .into_iter()
                .map(|(c, w)| {
                    Ok(WalkTerm {
                        coefficient: c,
                        word: parse_word(&w)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(WalkSpec::Combo { k: num(k)?, terms });
        }
        if let Some(rest) = spec.strip_prefix("UD^") {
            let (t, k) = rest.split_once(':').ok_or_else(|| bad("expected UD^t:k"))?;
            return Ok(WalkSpec::Lower {
                k: num(k)?,
                t: num(t)?,
            });
        }
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            ["N", k, j] => Ok(WalkSpec::Canonical { k: num(k)?, j: num(j)? }),
            ["S", k, j] => Ok(WalkSpec::Swap { k: num(k)?, j: num(j)? }),
            ["I", k] => Ok(WalkSpec::Identity { k: num(k)? }),
            _ => Err(bad("unknown form")),
        }
    }

    pub fn level(&self) -> usize {
        match self {
            WalkSpec::Canonical { k, .. }
            | WalkSpec::Swap { k, .. }
            | WalkSpec::Lower { k, .. }
            | WalkSpec::Identity { k }
            | WalkSpec::Combo { k, .. } => *k,
        }
    }

    pub fn build(&self, complex: &Complex) -> Result<HdWalk> {
        match self {
            WalkSpec::Canonical { k, j } => canonical_walk(complex, *k, *j),
            WalkSpec::Swap { k, j } => swap_walk_direct(complex, *k, *j),
            WalkSpec::Lower { k, t } => lower_walk(complex, *k, *t),
            WalkSpec::Identity { k } => identity_walk(complex, *k),
            WalkSpec::Combo { k, terms } => hd_walk(complex, *k, terms),
        }
    }
}

impl fmt::Display for WalkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalkSpec::Canonical { k, j } => write!(f, "N:{k}:{j}"),
            WalkSpec::Swap { k, j } => write!(f, "S:{k}:{j}"),
            WalkSpec::Lower { k, t } => write!(f, "UD^{t}:{k}"),
            WalkSpec::Identity { k } => write!(f, "I:{k}"),
            WalkSpec::Combo { k, terms } => {
                let raw: Vec<(f64, String)> = terms
                    .iter()
                    .map(|t| (t.coefficient, format_word(&t.word)))
                    .collect();
                write!(f, "combo:{k}:{}", serde_json::to_string(&raw).unwrap_or_default())
            }
        }
    }
}
