//! Affine unique games on HD-walk constraint graphs and an iterated link-rounding solver.
//!
//! The local solver is exact propagation along a maximum-weight spanning forest followed by
//! best-response sweeps. No approximation guarantee is certified by this module.

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Face};
use crate::error::{HdxError, Result};
use crate::local_spectral::WeightedGraph;
use crate::operator::Operator;
use crate::strips::{predicted_rank, walk_lambdas, walk_spectrum};
use crate::walk::{laziness, walk_graph, HdWalk};

pub const MAX_SWEEPS: usize = 20;

// independent ChaCha streams so that equal seeds never correlate planting and solving
const PLANT_STREAM: u64 = 1;
const BASELINE_STREAM: u64 = 2;
const LEFTOVER_STREAM: u64 = 3;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
/// Laziness above which the walk is treated as trivially solvable.
pub const LAZY_THRESHOLD: f64 = 0.1;

/// One unordered constraint `X_u − X_v ≡ s (mod m)`, `u ≤ v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constraint {
    pub u: usize,
    pub v: usize,
    /// Probability of drawing the edge in either orientation.
    pub weight: f64,
    pub shift: usize,
}

/// An affine unique game over `Z_m`.
#[derive(Clone, Debug)]
pub struct AffineUGInstance {
    graph: WeightedGraph,
    m: usize,
    constraints: Vec<Constraint>,
    /// Constraint indices incident to each vertex.
    incident: Vec<Vec<usize>>,
}

impl AffineUGInstance {
    /// Constraints over the positive-weight edges of `graph`, all with shift 0.
    pub fn consistent(graph: WeightedGraph, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(HdxError::MalformedInput("alphabet size must be at least 1".into()));
        }
        let n = graph.len();
        let mut constraints = Vec::new();
        for u in 0..n {
            for (v, w) in graph.neighbors(u) {
                if v < u {
                    continue;
                }
                let weight = if v == u { w } else { 2.0 * w };
                constraints.push(Constraint { u, v, weight, shift: 0 });
            }
        }
        let total: f64 = constraints.iter().map(|c| c.weight).sum();
        for c in &mut constraints {
            c.weight /= total;
        }
        let mut incident = vec![Vec::new(); n];
        for (e, c) in constraints.iter().enumerate() {
            incident[c.u].push(e);
            if c.v != c.u {
                incident[c.v].push(e);
            }
        }
        Ok(Self {
            graph,
            m,
            constraints,
            incident,
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// `s_uv`, with `s_vu = −s_uv`. `None` if `{u,v}` is not an edge.
    pub fn shift(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        let c = self.incident[a]
            .iter()
            .map(|e| &self.constraints[*e])
            .find(|c| c.u == a && c.v == b)?;
        Some(if u <= v { c.shift } else { (self.m - c.shift) % self.m })
    }

    /// Set `s_uv` (and `s_vu` implicitly).
    pub fn set_shift(&mut self, u: usize, v: usize, s: usize) -> Result<()> {
        let m = self.m;
        let (a, b, s) = if u <= v { (u, v, s % m) } else { (v, u, (m - s % m) % m) };
        let e = self.incident[a]
            .iter()
            .copied()
            .find(|e| self.constraints[*e].u == a && self.constraints[*e].v == b)
            .ok_or_else(|| HdxError::MalformedInput(format!("no edge between {u} and {v}")))?;
        self.constraints[e].shift = s;
        Ok(())
    }

    fn satisfied(&self, c: &Constraint, xu: usize, xv: usize) -> bool {
        (xu + self.m - xv) % self.m == c.shift
    }

    pub fn to_file(&self) -> InstanceFile {
        let faces = self.graph.vertices();
        InstanceFile {
            m: self.m,
            edges: self
                .constraints
                .iter()
                .map(|c| EdgeRecord {
                    u: faces[c.u].clone(),
                    v: faces[c.v].clone(),
                    w: c.weight,
                    s: c.shift,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: Face,
    pub v: Face,
    pub w: f64,
    pub s: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub m: usize,
    pub edges: Vec<EdgeRecord>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<AffineUGInstance> {
        let mut faces: Vec<Face> = self
            .edges
            .iter()
            .flat_map(|e| [e.u.clone(), e.v.clone()])
            .collect();
        faces.sort();
        faces.dedup();
        let index: BTreeMap<Face, usize> =
            faces.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let mut triplets = Vec::new();
        for e in &self.edges {
            if e.w.is_nan() || e.w <= 0.0 {
                return Err(HdxError::ParseError(format!("non-positive weight on {}-{}", e.u, e.v)));
            }
            let (u, v) = (index[&e.u], index[&e.v]);
            if u == v {
                triplets.push((u, u, e.w));
            } else {
                triplets.push((u, v, e.w / 2.0));
                triplets.push((v, u, e.w / 2.0));
            }
        }
        let n = faces.len();
        let graph = WeightedGraph::new(faces, Operator::from_triplets(n, n, &triplets))?;
        let mut inst = AffineUGInstance::consistent(graph, self.m)?;
        for e in &self.edges {
            inst.set_shift(index[&e.u], index[&e.v], e.s)?;
        }
        Ok(inst)
    }
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<AffineUGInstance> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str::<InstanceFile>(&text)
        .map_err(|e| HdxError::ParseError(e.to_string()))?
        .into_instance()
}

/// Values in `Z_m`; `None` marks an unassigned vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub values: Vec<Option<usize>>,
}

impl Assignment {
    pub fn unassigned(n: usize) -> Self {
        Self { values: vec![None; n] }
    }

    pub fn total(values: Vec<usize>) -> Self {
        Self {
            values: values.into_iter().map(Some).collect(),
        }
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(|v| v.is_some())
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.values[v]
    }

    /// Add `c` to every assigned value.
    pub fn shifted(&self, c: usize, m: usize) -> Self {
        Self {
            values: self.values.iter().map(|v| v.map(|x| (x + c) % m)).collect(),
        }
    }
}

/// The constraint graph of `walk` with a planted assignment and `ε` corruption.
pub fn plant_instance(
    walk: &HdWalk,
    m: usize,
    eps: f64,
    seed: u64,
) -> Result<(AffineUGInstance, Assignment)> {
    if m < 2 || !(0.0..1.0 + 1e-12).contains(&eps) {
        return Err(HdxError::MalformedInput(format!(
            "need m >= 2 and eps in [0, 1]; got m={m}, eps={eps}"
        )));
    }
    let mut inst = AffineUGInstance::consistent(walk_graph(walk)?, m)?;
    let mut rng = rng(seed, PLANT_STREAM);
    let truth: Vec<usize> = (0..inst.len()).map(|_| rng.gen_range(0..m)).collect();
    for c in &mut inst.constraints {
        c.shift = (truth[c.u] + m - truth[c.v]) % m;
    }
    let mut order: Vec<usize> = (0..inst.constraints.len()).collect();
    order.shuffle(&mut rng);
    let mut used = 0.0;
    for e in order {
        let c = &mut inst.constraints[e];
        if used + c.weight > eps + 1e-12 {
            continue;
        }
        used += c.weight;
        c.shift = rng.gen_range(0..m);
    }
    Ok((inst, Assignment::total(truth)))
}

/// `Pr_{(u,v)∼E}[X_u − X_v = s_uv]` for a total assignment.
pub fn value(inst: &AffineUGInstance, x: &Assignment) -> Result<f64> {
    if x.values.len() != inst.len() || !x.is_total() {
        return Err(HdxError::MalformedInput(
            "value needs a total assignment of every vertex".into(),
        ));
    }
    // same summation order for both sums, so a fully satisfied instance gives exactly 1
    let mut satisfied = 0.0;
    let mut total = 0.0;
    for c in &inst.constraints {
        total += c.weight;
        if inst.satisfied(c, x.values[c.u].unwrap(), x.values[c.v].unwrap()) {
            satisfied += c.weight;
        }
    }
    Ok(satisfied / total)
}

/// Satisfied and total weight of constraints with both ends assigned and in `subset`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictedValue {
    pub satisfied: f64,
    pub weight: f64,
}

impl RestrictedValue {
    /// `satisfied / weight`, or 1 when there are no internal constraints.
    pub fn value(&self) -> f64 {
        if self.weight > 0.0 {
            self.satisfied / self.weight
        } else {
            1.0
        }
    }
}

pub fn restricted_value(inst: &AffineUGInstance, x: &Assignment, subset: &[usize]) -> RestrictedValue {
    let mut inside = vec![false; inst.len()];
    for &v in subset {
        inside[v] = true;
    }
    let mut out = RestrictedValue {
        satisfied: 0.0,
        weight: 0.0,
    };
    for c in &inst.constraints {
        if !(inside[c.u] && inside[c.v]) {
            continue;
        }
        if let (Some(a), Some(b)) = (x.values[c.u], x.values[c.v]) {
            out.weight += c.weight;
            if inst.satisfied(c, a, b) {
                out.satisfied += c.weight;
            }
        }
    }
    out
}

pub fn random_baseline(inst: &AffineUGInstance, seed: u64) -> Assignment {
    let mut rng = rng(seed, BASELINE_STREAM);
    Assignment::total((0..inst.len()).map(|_| rng.gen_range(0..inst.m)).collect())
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// Solve the subgraph induced by `subset`: propagate along a maximum-weight spanning forest
/// from each component's smallest vertex (value 0), then best-response sweeps.
/// Vertices outside `subset` stay unassigned.
pub fn propagation_solve(inst: &AffineUGInstance, subset: &[usize]) -> Result<Assignment> {
    if subset.is_empty() {
        return Err(HdxError::MalformedInput("empty vertex subset".into()));
    }
    let n = inst.len();
    let m = inst.m;
    let mut inside = vec![false; n];
    for &v in subset {
        inside[v] = true;
    }
    let mut members: Vec<usize> = subset.to_vec();
    members.sort_unstable();
    members.dedup();

    let mut edges: Vec<usize> = (0..inst.constraints.len())
        .filter(|e| {
            let c = &inst.constraints[*e];
            c.u != c.v && inside[c.u] && inside[c.v]
        })
        .collect();
    edges.sort_by(|a, b| inst.constraints[*b].weight.total_cmp(&inst.constraints[*a].weight).then(a.cmp(b)));
    let mut parent: Vec<usize> = (0..n).collect();
    let mut tree: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for e in edges {
        let c = inst.constraints[e];
        let (a, b) = (find(&mut parent, c.u), find(&mut parent, c.v));
        if a != b {
            parent[a.max(b)] = a.min(b);
            tree[c.u].push((c.v, e));
            tree[c.v].push((c.u, e));
        }
    }

    let mut x = Assignment::unassigned(n);
    for &root in &members {
        if x.values[root].is_some() {
            continue;
        }
        x.values[root] = Some(0);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            let xu = x.values[u].unwrap();
            for &(v, _) in &tree[u] {
                if x.values[v].is_none() {
                    // X_u − X_v = s_uv
                    let s = inst.shift(u, v).unwrap();
                    x.values[v] = Some((xu + m - s) % m);
                    stack.push(v);
                }
            }
        }
    }

    for _ in 0..MAX_SWEEPS {
        let mut changed = false;
        for &v in &members {
            let mut score = vec![0.0; m];
            for &e in &inst.incident[v] {
                let c = inst.constraints[e];
                let other = if c.u == v { c.v } else { c.u };
                if !inside[other] {
                    continue;
                }
                if other == v {
                    if c.shift == 0 {
                        score.iter_mut().for_each(|s| *s += c.weight);
                    }
                    continue;
                }
                // X_v − X_o = s_vo
                let s = inst.shift(v, other).unwrap();
                score[(x.values[other].unwrap() + s) % m] += c.weight;
            }
            let current = x.values[v].unwrap();
            let mut best = current;
            for (a, s) in score.iter().enumerate() {
                if *s > score[best] + 1e-15 {
                    best = a;
                }
            }
            if best != current {
                x.values[v] = Some(best);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(x)
}

/// Which solving route the walk's shape calls for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FallbackBranch {
    /// Laziness at least 0.1.
    Lazy,
    /// Spectral gap at least `16ε`.
    Expander,
    LinkRounding,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FallbackDecision {
    pub laziness: f64,
    /// `1 − λ_2(M)`.
    pub gap: f64,
    pub branch: FallbackBranch,
}

impl FallbackDecision {
    pub fn flagged(&self) -> bool {
        self.branch != FallbackBranch::LinkRounding
    }
}

pub fn expander_fallback_check(walk: &HdWalk, eps: f64) -> FallbackDecision {
    let lazy = laziness(walk);
    let spectrum = walk_spectrum(walk);
    let second = spectrum.values.get(1).copied().unwrap_or(0.0);
    let gap = 1.0 - second;
    let branch = if lazy >= LAZY_THRESHOLD {
        FallbackBranch::Lazy
    } else if gap >= 16.0 * eps {
        FallbackBranch::Expander
    } else {
        FallbackBranch::LinkRounding
    };
    FallbackDecision {
        laziness: lazy,
        gap,
        branch,
    }
}

/// `max(R_{1−16ε}(M) − 1, 0)`, clamped to `⌊k/2⌋`.
pub fn rounding_depth(walk: &HdWalk, eps: f64) -> usize {
    let r = predicted_rank(&walk_lambdas(walk), 1.0 - 16.0 * eps).saturating_sub(1);
    r.min(walk.k / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingConfig {
    pub eps: f64,
    pub seed: u64,
    /// Replaces the link level chosen from the ST-rank.
    pub r_override: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub face: Face,
    pub assigned: usize,
    /// Value restricted to the newly assigned vertices.
    pub restricted_value: f64,
    /// Weight of the constraints inside the newly assigned set.
    pub internal_weight: f64,
    /// Satisfied weight gained by the commit, crossing constraints included.
    pub gain: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingReport {
    pub r: usize,
    pub rounds: Vec<Round>,
    pub value: f64,
    pub baseline: f64,
    /// Vertices assigned at random after the rounds stopped.
    pub leftover: usize,
    #[serde(skip)]
    pub assignment: Vec<usize>,
}

impl RoundingReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The final value is at least the first link's satisfied share.
    pub fn accounting_holds(&self) -> bool {
        self.rounds
            .first()
            .is_none_or(|r| self.value + 1e-12 >= r.restricted_value * r.internal_weight)
    }
}

/// Satisfied weight of constraints touching `fresh` whose other end is assigned in `x`.
fn gain(inst: &AffineUGInstance, x: &Assignment, fresh: &[usize], is_fresh: &[bool]) -> f64 {
    let mut total = 0.0;
    for &v in fresh {
        for &e in &inst.incident[v] {
            let c = inst.constraints[e];
            let other = if c.u == v { c.v } else { c.u };
            // count fresh-fresh constraints once, from the smaller endpoint
            if is_fresh[other] && other < v {
                continue;
            }
            if let (Some(a), Some(b)) = (x.values[c.u], x.values[c.v]) {
                if inst.satisfied(&c, a, b) {
                    total += c.weight;
                }
            }
        }
    }
    total
}

/// Solve the unassigned part of one link and align each of its components with `x`.
fn solve_link(inst: &AffineUGInstance, x: &Assignment, fresh: &[usize]) -> Result<Assignment> {
    let m = inst.m;
    let local = propagation_solve(inst, fresh)?;
    let n = inst.len();
    let mut is_fresh = vec![false; n];
    for &v in fresh {
        is_fresh[v] = true;
    }
    // components of the induced subgraph
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &s in fresh {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in &inst.incident[u] {
                let c = inst.constraints[e];
                let o = if c.u == u { c.v } else { c.u };
                if is_fresh[o] && comp[o] == usize::MAX {
                    comp[o] = id;
                    members.push(o);
                    stack.push(o);
                }
            }
        }
        comps.push(members);
    }
    let mut out = x.clone();
    for members in comps {
        let mut score = vec![0.0; m];
        for &v in &members {
            let lv = local.values[v].unwrap();
            for &e in &inst.incident[v] {
                let c = inst.constraints[e];
                let o = if c.u == v { c.v } else { c.u };
                if is_fresh[o] {
                    continue;
                }
                if let Some(xo) = x.values[o] {
                    // (lv + a) − xo = s_vo
                    let s = inst.shift(v, o).unwrap();
                    score[(xo + s + 2 * m - lv) % m] += c.weight;
                }
            }
        }
        let mut best = 0;
        for (a, s) in score.iter().enumerate() {
            if *s > score[best] + 1e-15 {
                best = a;
            }
        }
        for &v in &members {
            out.values[v] = Some((local.values[v].unwrap() + best) % m);
        }
    }
    Ok(out)
}

/// Repeatedly solve every `r`-link on its unassigned vertices and commit the link with the
/// largest satisfied-weight gain. Ties go to the lexicographically smallest face.
pub fn iterated_link_rounding(
    complex: &Complex,
    walk: &HdWalk,
    inst: &AffineUGInstance,
    config: &RoundingConfig,
) -> Result<RoundingReport> {
    let n = inst.len();
    if n != walk.size() {
        return Err(HdxError::MalformedInput(format!(
            "instance has {n} vertices, X({}) has {}",
            walk.k,
            walk.size()
        )));
    }
    let r = config
        .r_override
        .unwrap_or_else(|| rounding_depth(walk, config.eps))
        .min(walk.k);
    let links: Vec<(Face, Vec<usize>)> = complex
        .faces(r)
        .iter()
        .map(|tau| {
            let members = complex.link_faces(tau, walk.k)?.into_iter().map(|(s, _)| s).collect();
            Ok((tau.clone(), members))
        })
        .collect::<Result<_>>()?;

    let mut x = Assignment::unassigned(n);
    let mut rounds = Vec::new();
    loop {
        let mut best: Option<(f64, usize, Assignment, Vec<usize>)> = None;
        for (li, (_, members)) in links.iter().enumerate() {
            let fresh: Vec<usize> = members.iter().copied().filter(|v| x.values[*v].is_none()).collect();
            if fresh.is_empty() {
                continue;
            }
            let candidate = solve_link(inst, &x, &fresh)?;
            let mut is_fresh = vec![false; n];
            for &v in &fresh {
                is_fresh[v] = true;
            }
            let g = gain(inst, &candidate, &fresh, &is_fresh);
            if best.as_ref().is_none_or(|(bg, ..)| g > *bg + 1e-15) {
                best = Some((g, li, candidate, fresh));
            }
        }
        let Some((g, li, candidate, fresh)) = best else {
            break;
        };
        if g <= 0.0 && !rounds.is_empty() {
            break;
        }
        let inner = restricted_value(inst, &candidate, &fresh);
        rounds.push(Round {
            face: links[li].0.clone(),
            assigned: fresh.len(),
            restricted_value: inner.value(),
            internal_weight: inner.weight,
            gain: g,
        });
        x = candidate;
    }

    let mut rng = rng(config.seed, LEFTOVER_STREAM);
    let mut leftover = 0;
    for v in x.values.iter_mut().filter(|v| v.is_none()) {
        *v = Some(rng.gen_range(0..inst.m));
        leftover += 1;
    }
    let value = value(inst, &x)?;
    let baseline = self::value(inst, &random_baseline(inst, config.seed))?;
    Ok(RoundingReport {
        r,
        rounds,
        value,
        baseline,
        leftover,
        assignment: x.values.into_iter().map(|v| v.unwrap()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::complete_complex;
    use crate::walk::{canonical_walk, identity_walk};

    #[test]
    fn planted_zero_noise() {
        let c = complete_complex(9, 3).unwrap();
        let w = canonical_walk(&c, 2, 1).unwrap();
        let (inst, truth) = plant_instance(&w, 4, 0.0, 3).unwrap();
        assert_eq!(value(&inst, &truth).unwrap(), 1.0);
        for e in inst.constraints() {
            let (a, b) = (inst.shift(e.u, e.v).unwrap(), inst.shift(e.v, e.u).unwrap());
            assert_eq!((a + b) % 4, 0);
        }
        for s in 0..4 {
            assert_eq!(value(&inst, &truth.shifted(s, 4)).unwrap(), 1.0);
        }
    }

    #[test]
    fn partial_assignment_rejected() {
        let c = complete_complex(6, 3).unwrap();
        let w = canonical_walk(&c, 2, 1).unwrap();
        let (inst, _) = plant_instance(&w, 3, 0.1, 1).unwrap();
        let x = Assignment::unassigned(inst.len());
        assert!(matches!(value(&inst, &x), Err(HdxError::MalformedInput(_))));
        assert!(matches!(propagation_solve(&inst, &[]), Err(HdxError::MalformedInput(_))));
    }

    #[test]
    fn single_vertex_solve() {
        let c = complete_complex(6, 3).unwrap();
        let w = canonical_walk(&c, 2, 1).unwrap();
        let (inst, _) = plant_instance(&w, 3, 0.2, 1).unwrap();
        let x = propagation_solve(&inst, &[4]).unwrap();
        assert_eq!(x.values[4], Some(0));
        assert_eq!(x.values.iter().filter(|v| v.is_some()).count(), 1);
    }

    #[test]
    fn identity_is_lazy() {
        let c = complete_complex(6, 3).unwrap();
        let d = expander_fallback_check(&identity_walk(&c, 2).unwrap(), 0.05);
        assert!((d.laziness - 1.0).abs() < 1e-12);
        assert_eq!(d.branch, FallbackBranch::Lazy);
    }

    #[test]
    fn file_round_trip() {
        let c = complete_complex(6, 3).unwrap();
        let w = canonical_walk(&c, 2, 1).unwrap();
        let (inst, truth) = plant_instance(&w, 5, 0.3, 9).unwrap();
        let back = inst.to_file().into_instance().unwrap();
        assert_eq!(back.constraints().len(), inst.constraints().len());
        let v0 = value(&inst, &truth).unwrap();
        let v1 = value(&back, &truth).unwrap();
        assert!((v0 - v1).abs() < 1e-12);
    }
}
