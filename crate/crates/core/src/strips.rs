//! Predicted strip values of HD-walks and their comparison with the true spectrum.

use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::error::{HdxError, Result};
use crate::level_set::LevelSetBasis;
use crate::linalg::{self, DENSE_EIGEN_LIMIT};
use crate::walk::{down_positions, HdWalk, WalkForm};

/// Tolerance used when strip values are compared for equality.
pub const LAMBDA_TIE: f64 = 1e-12;

/// Slack added to the measured bound so that exact eigenspaces (zero residual) pass.
const BOUND_SLACK: f64 = 1e-10;

/// `∏_s (1 − ℓ / max{ℓ, i_s − 2s + k + 1})` for 1-indexed down positions `i_s`.
pub fn pure_walk_lambda(k: usize, down_positions: &[usize], l: usize) -> f64 {
    down_positions
        .iter()
        .enumerate()
        .map(|(s0, &i)| {
            let s = s0 as isize + 1;
            // level just before the s-th down step
            let level = i as isize - 2 * s + k as isize + 1;
            let denom = (l as isize).max(level);
            if denom <= 0 {
                1.0
            } else {
                1.0 - l as f64 / denom as f64
            }
        })
        .product()
}

/// `λ_ℓ(S^j_k) = C(k−j, ℓ) / C(k, ℓ)`.
pub fn swap_lambda(k: usize, j: usize, l: usize) -> f64 {
    binomial(k - j, l) / binomial(k, l)
}

/// `λ_0 .. λ_k` of a walk.
pub fn walk_lambdas(walk: &HdWalk) -> Vec<f64> {
    let k = walk.k;
    match &walk.form {
        WalkForm::Swap { j } => (0..=k).map(|l| swap_lambda(k, *j, l)).collect(),
        WalkForm::Terms(terms) => (0..=k)
            .map(|l| {
                terms
                    .iter()
                    .map(|t| t.coefficient * pure_walk_lambda(k, &down_positions(&t.word), l))
                    .sum()
            })
            .collect(),
    }
}

/// `c_i = ‖(M − λ_i)|_{V^i}‖` in the `Π_k` norm.
pub fn measured_residuals(walk: &HdWalk, basis: &LevelSetBasis, lambdas: &[f64]) -> Vec<f64> {
    (0..=walk.k)
        .map(|i| {
            let space = basis.component_space(i);
            linalg::restricted_residual(&walk.matrix, &space, lambdas[i], &walk.measure)
        })
        .collect()
}

/// True eigenvalues of a walk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Decreasing. With `distinct_only` these are the distinct values.
    pub values: Vec<f64>,
    pub distinct_only: bool,
}

/// Full spectrum up to [`DENSE_EIGEN_LIMIT`] faces, distinct values by Lanczos above it.
pub fn walk_spectrum(walk: &HdWalk) -> Spectrum {
    if walk.size() <= DENSE_EIGEN_LIMIT {
        Spectrum {
            values: linalg::reversible_spectrum(&walk.matrix, &walk.stationary),
            distinct_only: false,
        }
    } else {
        let k = linalg::krylov_distinct_spectrum(&walk.matrix, &walk.stationary, 200, 0x5eed);
        Spectrum {
            values: k.values,
            distinct_only: true,
        }
    }
}

/// Eigenvalues assigned to one predicted value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    pub lambda: f64,
    /// `None` when only distinct eigenvalues are known.
    pub count: Option<usize>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    /// Index of the merged group this strip belongs to.
    pub group: usize,
}

/// Comparison of predicted strip values with the true spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripReport {
    pub lambdas: Vec<f64>,
    pub residuals: Option<Vec<f64>>,
    pub spectrum: Spectrum,
    /// Strip index of every entry of `spectrum.values`.
    pub assignment: Vec<usize>,
    pub max_deviation: f64,
    pub bound_zhang: Option<f64>,
    /// `None` when two predicted values coincide (`λ_dif = 0`).
    pub bound_ko: Option<f64>,
    pub pass: Option<bool>,
    pub strips: Vec<Strip>,
    /// Strip indices merged because their predicted values are too close to separate.
    pub merged_groups: Vec<Vec<usize>>,
}

impl StripReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("strip report serializes")
    }

    /// Largest deviation among eigenvalues assigned to strip `i`.
    pub fn strip_deviation(&self, i: usize) -> f64 {
        self.spectrum
            .values
            .iter()
            .zip(&self.assignment)
            .filter(|(_, a)| **a == i)
            .fold(0.0f64, |acc, (v, _)| acc.max((v - self.lambdas[i]).abs()))
    }
}

/// Index of the nearest predicted value; ties go to the lower index.
pub fn nearest_strip(lambdas: &[f64], mu: f64) -> usize {
    let mut best = 0;
    for (i, l) in lambdas.iter().enumerate() {
        let d = (mu - l).abs();
        let b = (mu - lambdas[best]).abs();
        if d < b - LAMBDA_TIE {
            best = i;
        }
    }
    best
}

/// `sqrt(K c (c + (2/λ_dif)(λ_max + (λ_max + c)√(2K))²))` with `K = k+1` components.
pub fn ko_bound(lambdas: &[f64], c_max: f64) -> Option<f64> {
    let kk = lambdas.len() as f64;
    let mut dif = f64::INFINITY;
    for i in 0..lambdas.len() {
        for j in i + 1..lambdas.len() {
            dif = dif.min((lambdas[i] - lambdas[j]).abs());
        }
    }
    if dif <= LAMBDA_TIE {
        return None;
    }
    if !dif.is_finite() {
        return Some(0.0);
    }
    let lmax = lambdas.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    let inner = lmax + (lmax + c_max) * (2.0 * kk).sqrt();
    Some((kk * c_max * (c_max + 2.0 / dif * inner * inner)).sqrt())
}

/// Group strip indices whose predicted values lie within `radius` of each other (chained).
pub fn merge_groups(lambdas: &[f64], radius: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..lambdas.len()).collect();
    order.sort_by(|a, b| lambdas[*b].total_cmp(&lambdas[*a]).then(a.cmp(b)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(g) if (lambdas[*g.last().unwrap()] - lambdas[i]).abs() <= radius => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    groups.sort_by_key(|g| g[0]);
    groups
}

/// Assign every true eigenvalue to its nearest strip and compare against the bounds.
///
/// Without residuals only the deviation is reported; strips merge when their predicted values
/// coincide, or with residuals when they differ by less than `2 · bound_zhang`.
pub fn stripping_report(walk: &HdWalk, residuals: Option<Vec<f64>>) -> StripReport {
    let lambdas = walk_lambdas(walk);
    let spectrum = walk_spectrum(walk);
    report_from_parts(walk.k, lambdas, spectrum, residuals)
}

pub fn report_from_parts(
    k: usize,
    lambdas: Vec<f64>,
    spectrum: Spectrum,
    residuals: Option<Vec<f64>>,
) -> StripReport {
    let c_max = residuals
        .as_ref()
        .map(|r| r.iter().fold(0.0f64, |a, c| a.max(*c)));
    let bound_zhang = c_max.map(|c| ((k + 1) as f64).sqrt() * c);
    let bound_ko = c_max.and_then(|c| ko_bound(&lambdas, c));
    let assignment: Vec<usize> = spectrum
        .values
        .iter()
        .map(|mu| nearest_strip(&lambdas, *mu))
        .collect();
    let max_deviation = spectrum
        .values
        .iter()
        .zip(&assignment)
        .fold(0.0f64, |a, (mu, i)| a.max((mu - lambdas[*i]).abs()));
    let pass = bound_zhang.map(|b| max_deviation <= b + BOUND_SLACK);
    let radius = bound_zhang.map_or(LAMBDA_TIE, |b| (2.0 * b).max(LAMBDA_TIE));
    let merged_groups = merge_groups(&lambdas, radius);
    let group_of = |i: usize| merged_groups.iter().position(|g| g.contains(&i)).unwrap();
    let strips = lambdas
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let members: Vec<f64> = spectrum
                .values
                .iter()
                .zip(&assignment)
                .filter(|(_, a)| **a == i)
                .map(|(v, _)| *v)
                .collect();
            Strip {
                lambda,
                count: if spectrum.distinct_only { None } else { Some(members.len()) },
                min: members.iter().copied().reduce(f64::min),
                max: members.iter().copied().reduce(f64::max),
                group: group_of(i),
            }
        })
        .collect();
    StripReport {
        lambdas,
        residuals,
        spectrum,
        assignment,
        max_deviation,
        bound_zhang,
        bound_ko,
        pass,
        strips,
        merged_groups: merged_groups.into_iter().filter(|g| g.len() > 1).collect(),
    }
}

/// Predicted and empirical stripped threshold rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StRank {
    /// Number of distinct predicted values above `δ`.
    pub predicted: usize,
    /// Number of (merged) strips holding a true eigenvalue above `δ`.
    pub empirical: usize,
}

pub fn st_rank(report: &StripReport, delta: f64) -> StRank {
    let radius = report
        .bound_zhang
        .map_or(LAMBDA_TIE, |b| (2.0 * b).max(LAMBDA_TIE));
    let groups = merge_groups(&report.lambdas, radius);
    let predicted = groups
        .iter()
        .filter(|g| g.iter().any(|&i| report.lambdas[i] > delta))
        .count();
    let empirical = groups
        .iter()
        .filter(|g| {
            report
                .spectrum
                .values
                .iter()
                .zip(&report.assignment)
                .any(|(v, a)| g.contains(a) && *v > delta)
        })
        .count();
    StRank {
        predicted,
        empirical,
    }
}

/// `R_δ` from predicted values alone.
pub fn predicted_rank(lambdas: &[f64], delta: f64) -> usize {
    merge_groups(lambdas, LAMBDA_TIE)
        .iter()
        .filter(|g| g.iter().any(|&i| lambdas[i] > delta))
        .count()
}

/// Outcome of the monotone-strip check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monotonicity {
    pub monotone: bool,
    /// Pairs `(i, i+1)` with `λ_{i+1} > λ_i + 1e-12`.
    pub violations: Vec<(usize, usize)>,
}

pub fn monotonicity_check(walk: &HdWalk) -> Result<Monotonicity> {
    if !walk.is_complete {
        return Err(HdxError::NotApplicable(format!(
            "{} is not declared complete",
            walk.label
        )));
    }
    Ok(monotonicity_of(&walk_lambdas(walk)))
}

pub fn monotonicity_of(lambdas: &[f64]) -> Monotonicity {
    let violations: Vec<(usize, usize)> = lambdas
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0] + LAMBDA_TIE)
        .map(|(i, _)| (i, i + 1))
        .collect();
    Monotonicity {
        monotone: violations.is_empty(),
        violations,
    }
}
