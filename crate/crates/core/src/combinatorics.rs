/// Binomial coefficient as a float; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// All `k`-element subsets of `items` in lexicographic order (items assumed sorted).
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let n = items.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Size of the intersection of two sorted slices.
pub fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Whether sorted `sub` is contained in sorted `sup`.
pub fn is_subset(sub: &[usize], sup: &[usize]) -> bool {
    sub.len() <= sup.len() && intersection_size(sub, sup) == sub.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 4), 495.0);
        assert_eq!(binomial(4, 5), 0.0);
        assert_eq!(binomial(7, 0), 1.0);
        assert_eq!(binomial(30, 15), 155117520.0);
    }

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let items: Vec<usize> = (1..=5).collect();
        let c = combinations(&items, 3);
        assert_eq!(c.len(), 10);
        assert_eq!(c[0], vec![1, 2, 3]);
        assert_eq!(c[9], vec![3, 4, 5]);
        let mut sorted = c.clone();
        sorted.sort();
        assert_eq!(sorted, c);
        assert_eq!(combinations(&items, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(&items, 6).is_empty());
        assert_eq!(combinations(&items, 5).len(), 1);
    }

    #[test]
    fn set_helpers() {
        assert_eq!(intersection_size(&[1, 3, 5], &[2, 3, 5, 7]), 2);
        assert!(is_subset(&[3, 5], &[1, 3, 5]));
        assert!(!is_subset(&[3, 4], &[1, 3, 5]));
        assert!(is_subset(&[], &[1]));
    }
}
