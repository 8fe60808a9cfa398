//! Edge expansion of level sets under HD-walks, pseudorandomness profiles and the
//! expansion bounds built from them.

use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::complex::{complete_complex, Complex, Face};
use crate::error::{HdxError, Result};
use crate::level_set::LevelSetDecomposition;
use crate::linalg::{inner, mean, variance};
use crate::strips::{predicted_rank, walk_lambdas};
use crate::walk::{down_composite, swap_walk_direct, HdWalk};

/// Allowed gap between the definitional and quadratic-form expansion.
pub const AGREEMENT_TOL: f64 = 1e-10;

/// Expansion of one set under one walk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionRecord {
    /// Face indices of `S` in `X(k)`.
    pub members: Vec<usize>,
    pub alpha: f64,
    /// `E_{v∼Π|S}[M(v, X(k)∖S)]`.
    pub phi: f64,
    /// `1 − ⟨1_S, M 1_S⟩ / α`.
    pub phi_quadratic: f64,
    pub bound: Option<f64>,
    pub bound_measured: Option<f64>,
    pub epsilons: Vec<f64>,
}

fn membership(n: usize, members: &[usize]) -> Result<Vec<bool>> {
    let mut inside = vec![false; n];
    for &i in members {
        if i >= n {
            return Err(HdxError::MalformedInput(format!("face index {i} outside X(k)")));
        }
        inside[i] = true;
    }
    if !inside.iter().any(|b| *b) {
        return Err(HdxError::MalformedInput("empty set".into()));
    }
    Ok(inside)
}

/// `φ(S)` computed both from its definition and as a quadratic form.
pub fn expansion(walk: &HdWalk, members: &[usize]) -> Result<ExpansionRecord> {
    let inside = membership(walk.size(), members)?;
    let pi = &walk.measure;
    let mut alpha = 0.0;
    let mut leave = 0.0;
    let mut stay = 0.0;
    for (v, _) in inside.iter().enumerate().filter(|(_, b)| **b) {
        alpha += pi[v];
        for (t, m) in walk.matrix.row(v) {
            if inside[t] {
                stay += pi[v] * m;
            } else {
                leave += pi[v] * m;
            }
        }
    }
    let phi = leave / alpha;
    let phi_quadratic = 1.0 - stay / alpha;
    if (phi - phi_quadratic).abs() > AGREEMENT_TOL {
        return Err(HdxError::NotAWalk {
            row: members[0],
            col: members[0],
            value: phi - phi_quadratic,
        });
    }
    let mut sorted: Vec<usize> = inside
        .iter()
        .enumerate()
        .filter(|(_, b)| **b)
        .map(|(i, _)| i)
        .collect();
    sorted.dedup();
    Ok(ExpansionRecord {
        members: sorted,
        alpha,
        phi,
        phi_quadratic,
        bound: None,
        bound_measured: None,
        epsilons: Vec::new(),
    })
}

/// `D^k_i f`, the expectation of `f` over each `i`-link.
pub fn local_expectation(complex: &Complex, k: usize, f: &[f64], i: usize) -> Result<Vec<f64>> {
    Ok(down_composite(complex, k, i)?.apply(f))
}

/// The same quantity by averaging over `link_faces` directly.
pub fn local_expectation_direct(
    complex: &Complex,
    k: usize,
    f: &[f64],
    i: usize,
) -> Result<Vec<f64>> {
    complex
        .faces(i)
        .iter()
        .map(|tau| {
            let faces = complex.link_faces(tau, k)?;
            let mass: f64 = faces.iter().map(|(_, m)| m).sum();
            Ok(faces.iter().map(|(s, m)| m * f[*s]).sum::<f64>() / mass)
        })
        .collect()
}

/// `ε_i = Var(D^k_i f) / |E f|` for `i = 1..=r`.
pub fn ell2_profile(complex: &Complex, k: usize, f: &[f64], r: usize) -> Result<Vec<f64>> {
    let e = mean(complex.weights(k), f).abs();
    (1..=r.min(k))
        .map(|i| {
            let low = local_expectation(complex, k, f, i)?;
            let var = variance(complex.weights(i), &low);
            Ok(if e > 0.0 { var / e } else { var })
        })
        .collect()
}

/// `‖D^k_i f − E f‖_∞` for `i = 1..=r`.
pub fn ellinf_profile(complex: &Complex, k: usize, f: &[f64], r: usize) -> Result<Vec<f64>> {
    let e = mean(complex.weights(k), f);
    (1..=r.min(k))
        .map(|i| {
            let low = local_expectation(complex, k, f, i)?;
            Ok(low.iter().fold(0.0f64, |a, v| a.max((v - e).abs())))
        })
        .collect()
}

/// `|Var(D^k_ℓ f) − Σ_{j=1}^{ℓ} C(ℓ,j)/C(k,j) ⟨f, f_j⟩| / ⟨f, f⟩`.
pub fn variance_identity_check(
    complex: &Complex,
    k: usize,
    dec: &LevelSetDecomposition,
    l: usize,
) -> Result<f64> {
    let f = dec.function();
    let low = local_expectation(complex, k, f, l)?;
    let var = variance(complex.weights(l), &low);
    let predicted: f64 = (1..=l)
        .map(|j| binomial(l, j) / binomial(k, j) * dec.projection(j))
        .sum();
    let ff = inner(complex.weights(k), f, f);
    Ok(if ff > 0.0 { (var - predicted).abs() / ff } else { 0.0 })
}

/// Slack in `⟨f, f_i⟩ ≤ C(k,i) ε_i |E f| + cγ⟨f,f⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSlack {
    pub projection: f64,
    /// `C(k,i) ε_i |E f|`, the bound without the `γ` term.
    pub bound: f64,
    pub norm_sq: f64,
    /// `bound − projection`.
    pub slack: f64,
    /// `slack / ⟨f, f⟩`.
    pub slack_normalized: f64,
}

pub fn projection_bound_check(
    complex: &Complex,
    k: usize,
    dec: &LevelSetDecomposition,
    i: usize,
) -> Result<ProjectionSlack> {
    if i == 0 || i > k {
        return Err(HdxError::MalformedInput(format!("level {i} not in 1..={k}")));
    }
    let f = dec.function();
    let eps = ell2_profile(complex, k, f, i)?[i - 1];
    let e = mean(complex.weights(k), f).abs();
    let projection = dec.projection(i);
    let bound = binomial(k, i) * eps * e;
    let norm_sq = inner(complex.weights(k), f, f);
    let slack = bound - projection;
    Ok(ProjectionSlack {
        projection,
        bound,
        norm_sq,
        slack,
        slack_normalized: if norm_sq > 0.0 { slack / norm_sq } else { 0.0 },
    })
}

/// Expansion of one link `X_τ ∩ X(k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkExpansion {
    pub face: Face,
    pub level: usize,
    pub alpha: f64,
    pub phi: f64,
    /// `φ − (1 − λ_i)`.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelExpansion {
    pub level: usize,
    pub lambda: f64,
    pub predicted_phi: f64,
    pub max_deviation: f64,
    pub links: Vec<LinkExpansion>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkExpansionProfile {
    pub k: usize,
    pub levels: Vec<LevelExpansion>,
    /// `d = k`: only the one-sided (upper) comparison is meaningful.
    pub top_level_regime: bool,
}

impl LinkExpansionProfile {
    pub fn max_deviation(&self) -> f64 {
        self.levels.iter().fold(0.0f64, |a, l| a.max(l.max_deviation))
    }

    /// One row per link: `face,level,alpha,phi,predicted,deviation`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("face,level,alpha,phi,predicted,deviation\n");
        for lvl in &self.levels {
            for l in &lvl.links {
                let face = l
                    .face
                    .vertices()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push_str(&format!(
                    "{face},{},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                    l.level, l.alpha, l.phi, lvl.predicted_phi, l.deviation
                ));
            }
        }
        out
    }
}

/// `φ(X_τ)` for every `τ ∈ X(i)`, `i ≤ k`, against `1 − λ_i(M)`.
pub fn link_expansion_profile(complex: &Complex, walk: &HdWalk) -> Result<LinkExpansionProfile> {
    let k = walk.k;
    let lambdas = walk_lambdas(walk);
    let mut levels = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let predicted_phi = 1.0 - lambdas[i];
        let mut links = Vec::with_capacity(complex.level_size(i));
        let mut worst = 0.0f64;
        for tau in complex.faces(i) {
            let members: Vec<usize> = complex.link_faces(tau, k)?.iter().map(|(s, _)| *s).collect();
            let rec = expansion(walk, &members)?;
            let deviation = rec.phi - predicted_phi;
            worst = worst.max(deviation.abs());
            links.push(LinkExpansion {
                face: tau.clone(),
                level: i,
                alpha: rec.alpha,
                phi: rec.phi,
                deviation,
            });
        }
        levels.push(LevelExpansion {
            level: i,
            lambda: lambdas[i],
            predicted_phi,
            max_deviation: worst,
            links,
        });
    }
    Ok(LinkExpansionProfile {
        k,
        levels,
        top_level_regime: complex.dim() == k,
    })
}

/// Lower bound on `φ(S)` from the pseudorandomness profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionBound {
    pub delta: f64,
    /// `R_δ(M) − 1`.
    pub r: usize,
    pub alpha: f64,
    pub epsilons: Vec<f64>,
    /// The bound with the `cγ` term dropped.
    pub bound: f64,
    /// The bound with `c_gamma` subtracted.
    pub bound_measured: f64,
    pub phi: f64,
}

/// `1 − α − (1−α)δ − cγ − Σ_{i=1}^{r} (λ_i − δ) C(k,i) ε_i`, `r = R_δ(M) − 1`.
pub fn expansion_lower_bound(
    complex: &Complex,
    walk: &HdWalk,
    members: &[usize],
    delta: f64,
    c_gamma: f64,
) -> Result<ExpansionBound> {
    if !walk.is_complete {
        return Err(HdxError::NotApplicable(format!(
            "{} is not a complete walk",
            walk.label
        )));
    }
    let k = walk.k;
    let rec = expansion(walk, members)?;
    let lambdas = walk_lambdas(walk);
    let r = predicted_rank(&lambdas, delta).saturating_sub(1).min(k);
    let f = indicator(walk.size(), &rec.members);
    let epsilons = ell2_profile(complex, k, &f, r)?;
    let alpha = rec.alpha;
    let penalty: f64 = (1..=r)
        .map(|i| (lambdas[i] - delta) * binomial(k, i) * epsilons[i - 1])
        .sum();
    let bound = 1.0 - alpha - (1.0 - alpha) * delta - penalty;
    Ok(ExpansionBound {
        delta,
        r,
        alpha,
        epsilons,
        bound,
        bound_measured: bound - c_gamma,
        phi: rec.phi,
    })
}

pub fn indicator(n: usize, members: &[usize]) -> Vec<f64> {
    let mut f = vec![0.0; n];
    for &i in members {
        f[i] = 1.0;
    }
    f
}

/// The set `B_m = C([n/m], k)` on `J(n, d)` and its expansion under `S^{k−t}_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightnessFixture {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub t: usize,
    pub d: usize,
    pub members: Vec<usize>,
    /// `1 − C(n/m − k, k−t) / C(n−k, k−t)`.
    pub exact_phi: f64,
    pub measured_phi: f64,
    pub alpha: f64,
    /// Measured `ε_1 .. ε_k`.
    pub epsilons: Vec<f64>,
    /// `C(n/m − i, k−i) / C(n−i, k−i)`, an upper bound on `ε_i`.
    pub epsilon_bounds: Vec<f64>,
    /// `C(n/m−i, k−i)/C(n−i, k−i) · (1 − C(n/m, i)/C(n, i))`, the exact profile.
    pub epsilon_exact: Vec<f64>,
}

pub fn tightness_fixture_bm(n: usize, m: usize, k: usize, t: usize, d: usize) -> Result<TightnessFixture> {
    if m == 0 || !n.is_multiple_of(m) {
        return Err(HdxError::MalformedInput(format!("{m} does not divide {n}")));
    }
    if t > k || 2 * k - t > d || d > n {
        return Err(HdxError::MalformedInput(format!(
            "need t <= k, 2k - t <= d <= n; got n={n}, k={k}, t={t}, d={d}"
        )));
    }
    let block = n / m;
    let complex = complete_complex(n, d)?;
    let walk = swap_walk_direct(&complex, k, k - t)?;
    let members: Vec<usize> = complex
        .faces(k)
        .iter()
        .enumerate()
        .filter(|(_, f)| f.vertices().iter().all(|v| *v <= block))
        .map(|(i, _)| i)
        .collect();
    if members.is_empty() {
        return Err(HdxError::MalformedInput(format!(
            "B_{m} is empty: n/m = {block} < k = {k}"
        )));
    }
    let rec = expansion(&walk, &members)?;
    let f = indicator(walk.size(), &members);
    let epsilons = ell2_profile(&complex, k, &f, k)?;
    let epsilon_bounds: Vec<f64> = (1..=k)
        .map(|i| binomial(block - i.min(block), k - i) / binomial(n - i, k - i))
        .collect();
    let epsilon_exact = (1..=k)
        .map(|i| epsilon_bounds[i - 1] * (1.0 - binomial(block, i) / binomial(n, i)))
        .collect();
    Ok(TightnessFixture {
        n,
        m,
        k,
        t,
        d,
        members,
        exact_phi: 1.0 - binomial(block.saturating_sub(k), k - t) / binomial(n - k, k - t),
        measured_phi: rec.phi,
        alpha: rec.alpha,
        epsilons,
        epsilon_bounds,
        epsilon_exact,
    })
}

/// The most correlated link at one level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkCorrelation {
    pub level: usize,
    pub face: Face,
    /// `E_{X_τ}[1_S] − α`.
    pub excess: f64,
    /// `δ / (c_2 R C(k,i) λ_i)`.
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonExpansionReport {
    pub alpha: f64,
    pub phi: f64,
    /// Whether `φ(S) < 1 − α − (1−α)δ`, the premise of the correlation guarantee.
    pub non_expanding: bool,
    /// `R_{δ/2}(M)`.
    pub rank: usize,
    pub levels: Vec<LinkCorrelation>,
}

impl NonExpansionReport {
    pub fn best(&self) -> Option<&LinkCorrelation> {
        self.levels
            .iter()
            .max_by(|a, b| a.excess.total_cmp(&b.excess).then(b.level.cmp(&a.level)))
    }

    /// Some level meets its threshold.
    pub fn witnessed(&self) -> bool {
        self.levels.iter().any(|l| l.excess >= l.threshold)
    }
}

/// Exhaustive search over `i`-links, `1 ≤ i ≤ R_{δ/2}(M)`, for the largest excess density.
/// Ties go to the lexicographically smallest face.
pub fn nonexpansion_link_search(
    complex: &Complex,
    walk: &HdWalk,
    members: &[usize],
    delta: f64,
    c2: f64,
) -> Result<NonExpansionReport> {
    let k = walk.k;
    let rec = expansion(walk, members)?;
    let lambdas = walk_lambdas(walk);
    let rank = predicted_rank(&lambdas, delta / 2.0);
    let f = indicator(walk.size(), &rec.members);
    let mut levels = Vec::new();
    for i in 1..=rank.min(k) {
        let local = local_expectation(complex, k, &f, i)?;
        let mut best = 0;
        for (idx, v) in local.iter().enumerate() {
            if *v > local[best] {
                best = idx;
            }
        }
        levels.push(LinkCorrelation {
            level: i,
            face: complex.faces(i)[best].clone(),
            excess: local[best] - rec.alpha,
            threshold: delta / (c2 * rank as f64 * binomial(k, i) * lambdas[i]),
        });
    }
    Ok(NonExpansionReport {
        alpha: rec.alpha,
        phi: rec.phi,
        non_expanding: rec.phi < 1.0 - rec.alpha - (1.0 - rec.alpha) * delta,
        rank,
        levels,
    })
}

/// Spread of per-vertex expansion inside a link.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexDeviation {
    /// `φ(X_τ)`.
    pub phi: f64,
    /// `E_{v∼X_τ}|φ_{X_τ}(v) − φ(X_τ)|`.
    pub mean_abs: f64,
    /// `max_v |φ_{X_τ}(v) − φ(X_τ)|`.
    pub max_abs: f64,
}

pub fn vertex_expansion_deviation(
    complex: &Complex,
    walk: &HdWalk,
    tau: &Face,
) -> Result<VertexDeviation> {
    let faces = complex.link_faces(tau, walk.k)?;
    let members: Vec<usize> = faces.iter().map(|(s, _)| *s).collect();
    let inside = membership(walk.size(), &members)?;
    let per_vertex: Vec<(f64, f64)> = faces
        .iter()
        .map(|(v, m)| {
            let out: f64 = walk
                .matrix
                .row(*v)
                .iter()
                .filter(|(t, _)| !inside[*t])
                .map(|(_, p)| p)
                .sum();
            (*m, out)
        })
        .collect();
    let mass: f64 = per_vertex.iter().map(|(m, _)| m).sum();
    let phi = per_vertex.iter().map(|(m, o)| m * o).sum::<f64>() / mass;
    let mean_abs = per_vertex.iter().map(|(m, o)| m * (o - phi).abs()).sum::<f64>() / mass;
    let max_abs = per_vertex.iter().fold(0.0f64, |a, (_, o)| a.max((o - phi).abs()));
    Ok(VertexDeviation {
        phi,
        mean_abs,
        max_abs,
    })
}
