use hdx_core::combinatorics::{binomial, combinations, intersection_size};
use hdx_core::complex::{complete_complex, punctured_complete_complex};
use hdx_core::level_set::LevelSetBasis;
use hdx_core::strips::{
    measured_residuals, monotonicity_check, st_rank, stripping_report, walk_lambdas, walk_spectrum,
};
use hdx_core::walk::{
    canonical_walk, hd_walk, identity_walk, parse_word, swap_walk_ajt, swap_walk_direct,
    WalkSpec, WalkTerm,
};
use hdx_core::{Complex, HdxError};
use proptest::prelude::*;

/// Eberlein polynomial: eigenvalue of the distance-`j` relation of the Johnson scheme
/// `J(n, k)` on the `ℓ`-th eigenspace.
fn eberlein(n: usize, k: usize, j: usize, l: usize) -> f64 {
    (0..=j)
        .map(|h| {
            let sign = if h % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(l, h) * binomial(k.saturating_sub(l), j - h)
                * binomial((n - k).saturating_sub(l), j - h)
        })
        .sum()
}

/// Distinct eigenvalues of the uniform walk to `k`-sets at distance `j` (sharing `k − j`).
fn johnson_eigenvalues(n: usize, k: usize, j: usize) -> Vec<f64> {
    let valency = binomial(k, j) * binomial(n - k, j);
    (0..=k).map(|l| eberlein(n, k, j, l) / valency).collect()
}

fn sorted_distinct(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    v
}

#[test]
fn swap_walk_spectrum_is_johnson() {
    let c = complete_complex(11, 5).unwrap();
    for (k, j) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let w = swap_walk_direct(&c, k, j).unwrap();
        let got = sorted_distinct(walk_spectrum(&w).values);
        let expect = sorted_distinct(johnson_eigenvalues(11, k, j));
        assert_eq!(got.len(), expect.len(), "S^{j}_{k}");
        for (a, b) in got.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-10, "S^{j}_{k}: {a} vs {b}");
        }
        // on J(n, d) the swap walk's eigenvalues are its strip values only asymptotically
        let lambdas = walk_lambdas(&w);
        assert_eq!(lambdas[0], 1.0);
    }
}

#[test]
fn canonical_walk_matches_lazy_johnson_oracle() {
    // N^1_k on J(n, d): stay w.p. 1/(k+1), else move to a uniform set at distance 1
    let (n, d, k) = (9, 4, 3);
    let c = complete_complex(n, d).unwrap();
    let w = canonical_walk(&c, k, 1).unwrap();
    let m = w.matrix.to_dense();
    let faces = combinations(&(1..=n).collect::<Vec<_>>(), k);
    let step = 1.0 / ((k + 1) as f64 * (n - k) as f64);
    for (s, a) in faces.iter().enumerate() {
        for (t, b) in faces.iter().enumerate() {
            let expect = match intersection_size(a, b) {
                x if x == k => 1.0 / (k + 1) as f64,
                x if x == k - 1 => step,
                _ => 0.0,
            };
            assert!((m[(s, t)] - expect).abs() < 1e-14);
        }
    }
    // its spectrum through the oracle
    let expect: Vec<f64> = johnson_eigenvalues(n, k, 1)
        .iter()
        .map(|e| 1.0 / (k + 1) as f64 + k as f64 / (k + 1) as f64 * e)
        .collect();
    let got = sorted_distinct(walk_spectrum(&w).values);
    for (a, b) in got.iter().zip(sorted_distinct(expect).iter()) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn canonical_strips_on_j12_4() {
    let c = complete_complex(12, 4).unwrap();
    let w = canonical_walk(&c, 3, 1).unwrap();
    assert_eq!(walk_lambdas(&w), vec![1.0, 0.75, 0.5, 0.25]);
    let basis = LevelSetBasis::new(&c, 3).unwrap();
    let res = measured_residuals(&w, &basis, &walk_lambdas(&w));
    let report = stripping_report(&w, Some(res.clone()));
    // oracle values 1, 2/3, 7/18, 1/6 with multiplicities 1, 11, 54, 154
    let counts: Vec<usize> = report.strips.iter().map(|s| s.count.unwrap()).collect();
    assert_eq!(counts, vec![1, 11, 54, 154]);
    let expect = [1.0, 2.0 / 3.0, 7.0 / 18.0, 1.0 / 6.0];
    for (s, e) in report.strips.iter().zip(expect) {
        assert!((s.min.unwrap() - e).abs() < 1e-10 && (s.max.unwrap() - e).abs() < 1e-10);
    }
    assert!((report.max_deviation - 1.0 / 9.0).abs() < 1e-10);
    assert_eq!(report.pass, Some(true));
    assert!(res[0].abs() < 1e-12);
}

#[test]
fn spec_examples_of_strips() {
    let c = complete_complex(12, 4).unwrap();
    let s33 = WalkSpec::parse("S:3:3").unwrap().build(&complete_complex(12, 6).unwrap()).unwrap();
    assert_eq!(walk_lambdas(&s33), vec![1.0, 0.0, 0.0, 0.0]);
    let id = identity_walk(&c, 3).unwrap();
    let report = stripping_report(&id, None);
    assert_eq!(report.merged_groups.len(), 1);
    assert_eq!(st_rank(&report, 0.5).predicted, 1);
}

#[test]
fn non_complete_walks_are_not_checked_for_monotonicity() {
    let c = complete_complex(8, 4).unwrap();
    let terms = [
        WalkTerm { coefficient: 1.2, word: parse_word("UUDD").unwrap() },
        WalkTerm { coefficient: -0.2, word: parse_word("UD").unwrap() },
    ];
    let w = hd_walk(&c, 2, &terms).unwrap();
    assert!(!w.is_complete);
    assert!(matches!(monotonicity_check(&w), Err(HdxError::NotApplicable(_))));
}

#[test]
fn punctured_swap_walk_records_adjoint_defect() {
    let c = punctured_complete_complex(8).unwrap();
    let w = swap_walk_direct(&c, 1, 1).unwrap();
    for row in w.matrix.row_sums() {
        assert!((row - 1.0).abs() < 1e-12);
    }
    // reversible for the stored stationary measure
    assert!(w.matrix.adjoint_defect(&w.stationary) < 1e-12);
}

fn arb_word(max_ups: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('U'), Just('D')], 1..8).prop_filter_map(
        "balanced and bounded",
        move |steps| {
            let mut level = 0isize;
            let mut top = 0isize;
            for s in &steps {
                level += if *s == 'U' { 1 } else { -1 };
                top = top.max(level);
            }
            (level == 0 && top as usize <= max_ups).then(|| steps.into_iter().collect())
        },
    )
}

fn fixture() -> Complex {
    punctured_complete_complex(7).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn pure_walks_are_reversible_markov(word in arb_word(1)) {
        let c = fixture();
        let w = hd_walk(&c, 2, &[WalkTerm { coefficient: 1.0, word: parse_word(&word).unwrap() }]);
        let Ok(w) = w else { return Ok(()) };
        for r in w.matrix.row_sums() {
            prop_assert!((r - 1.0).abs() < 1e-12);
        }
        prop_assert!(w.matrix.min_entry().is_none_or(|(_, _, v)| v >= 0.0));
        prop_assert!(w.adjoint_defect < 1e-12);
    }

    #[test]
    fn swap_constructions_agree(k in 1usize..=3, j in 1usize..=3) {
        prop_assume!(j <= k && k + j <= 6);
        let c = complete_complex(9, 6).unwrap();
        let a = swap_walk_direct(&c, k, j).unwrap();
        let b = swap_walk_ajt(&c, k, j).unwrap();
        prop_assert!(a.matrix.max_abs_diff(&b.matrix) < 1e-9);
    }

    #[test]
    fn spectrum_stays_in_unit_interval(j in 1usize..=2) {
        let c = complete_complex(8, 4).unwrap();
        let w = canonical_walk(&c, 2, j).unwrap();
        for v in walk_spectrum(&w).values {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&v));
        }
    }
}
