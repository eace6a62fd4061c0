//! Interval construction and structural predicates for the pattern poset.

use std::collections::HashSet;

use crate::perm::Permutation;
use crate::poset::Interval;
use crate::{Error, Result};

/// All permutations of length `n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut letters: Vec<u8> = (1..=n as u8).collect();
    loop {
        out.push(Permutation::from_letters(letters.clone()).expect("standard form"));
        if !next_permutation(&mut letters) {
            break;
        }
    }
    out
}

fn next_permutation(letters: &mut [u8]) -> bool {
    let n = letters.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && letters[i - 1] >= letters[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while letters[j] <= letters[i - 1] {
        j -= 1;
    }
    letters.swap(i - 1, j);
    letters[i..].reverse();
    true
}

/// Every distinct permutation below `tau` (including ∅ and `tau` itself),
/// obtained by deleting each subset of positions and flattening.
pub fn elements_below(tau: &Permutation) -> Vec<Permutation> {
    let n = tau.len();
    assert!(n <= 20, "subset enumeration is limited to desk scale");
    let mut seen = HashSet::new();
    for mask in 0u64..(1 << n) {
        seen.insert(tau.delete_mask(mask));
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort();
    out
}

/// The closed interval `[sigma, tau]` as an explicit poset, graded by length.
pub fn build_interval(sigma: &Permutation, tau: &Permutation) -> Result<Interval<Permutation>> {
    if !sigma.is_contained_in(tau) {
        return Err(Error::NotComparable(sigma.to_string(), tau.to_string()));
    }
    let elements: Vec<Permutation> = elements_below(tau)
        .into_iter()
        .filter(|pi| sigma.is_contained_in(pi))
        .collect();
    Ok(Interval::from_elements(
        elements,
        |pi| pi.len(),
        |a, b| a.is_contained_in(b),
    ))
}

/// Chain test by the run criterion: `[sigma, tau]` is a chain exactly when
/// the removable letters of `tau` all sit in a single run.
pub fn is_chain(sigma: &Permutation, tau: &Permutation) -> Result<bool> {
    let removable = tau.removable_positions(sigma)?;
    let Some(&first) = removable.first() else {
        return Ok(true); // sigma == tau
    };
    let (lo, hi) = tau.run_containing(first);
    Ok(removable.iter().all(|&p| lo <= p && p <= hi))
}

/// The elements of rank 1 in `[sigma, tau]` that lie strictly below `tau`;
/// empty when the interval has rank at most 1.
pub fn rank1_elements(sigma: &Permutation, tau: &Permutation) -> Result<Vec<Permutation>> {
    if !sigma.is_contained_in(tau) {
        return Err(Error::NotComparable(sigma.to_string(), tau.to_string()));
    }
    let want = sigma.len() + 1;
    if tau.len() <= want {
        return Ok(Vec::new());
    }
    let mut out: Vec<Permutation> = elements_below(tau)
        .into_iter()
        .filter(|pi| pi.len() == want && sigma.is_contained_in(pi))
        .collect();
    out.sort();
    Ok(out)
}

/// Number of runs of `tau` consisting of letters removable with respect to
/// `sigma`; by the rank-two classification this equals the rank-1 level size
/// when `|tau| - |sigma| = 2`.
pub fn removable_run_count(sigma: &Permutation, tau: &Permutation) -> Result<usize> {
    let removable = tau.removable_positions(sigma)?;
    Ok(tau
        .runs()
        .into_iter()
        .filter(|&(lo, _)| removable.contains(&lo))
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn all_permutations_is_lexicographic() {
        let threes = all_permutations(3);
        let shown: Vec<String> = threes.iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, vec!["123", "132", "213", "231", "312", "321"]);
        assert_eq!(all_permutations(0), vec![Permutation::empty()]);
    }

    #[test]
    fn interval_examples() {
        let fig1 = build_interval(&p("1342"), &p("1342675")).unwrap();
        assert_eq!(fig1.size(), 10);
        assert_eq!(fig1.rank_sizes(), vec![1, 3, 5, 1]);

        let point = build_interval(&p("2413"), &p("2413")).unwrap();
        assert_eq!(point.size(), 1);
        assert!(point.covers().is_empty());

        let worked = build_interval(&p("12"), &p("24136857")).unwrap();
        assert_eq!(worked.size(), 62);
        assert_eq!(worked.covers().len(), 223);

        assert!(build_interval(&p("2413"), &p("3142")).is_err());
    }

    // Oracle: elements of [sigma, tau] found by scanning every permutation of
    // each intermediate length.
    #[test]
    fn interval_elements_match_full_scan() {
        for tau_len in 1..=5 {
            for tau in all_permutations(tau_len) {
                for sigma in elements_below(&tau) {
                    let iv = build_interval(&sigma, &tau).unwrap();
                    let mut expected = Vec::new();
                    for mid_len in sigma.len()..=tau.len() {
                        for pi in all_permutations(mid_len) {
                            if sigma.is_contained_in(&pi) && pi.is_contained_in(&tau) {
                                expected.push(pi);
                            }
                        }
                    }
                    expected.sort();
                    assert_eq!(iv.elements(), &expected[..], "[{sigma}, {tau}]");
                }
            }
        }
    }

    #[test]
    fn intervals_are_graded_by_length() {
        // Every non-top element has an upper cover and every non-bottom one
        // a lower cover, so all maximal chains run the full rank.
        for (sigma, tau) in [("1342", "1342675"), ("12", "24136857"), ("123", "351624")] {
            let iv = build_interval(&p(sigma), &p(tau)).unwrap();
            let mut has_up = vec![false; iv.size()];
            let mut has_down = vec![false; iv.size()];
            for &(u, l) in iv.covers() {
                assert_eq!(iv.rank_of(u), iv.rank_of(l) + 1);
                has_up[l] = true;
                has_down[u] = true;
            }
            for i in 0..iv.size() {
                assert!(has_up[i] || iv.rank_of(i) == iv.rank());
                assert!(has_down[i] || iv.rank_of(i) == 0);
            }
        }
    }

    #[test]
    fn chain_examples() {
        assert!(is_chain(&p("21"), &p("51234")).unwrap());
        assert!(!is_chain(&p("1342"), &p("1342675")).unwrap());
        assert!(is_chain(&p("2413"), &p("2413")).unwrap());
    }

    #[test]
    fn chain_criterion_matches_built_interval() {
        for tau_len in 1..=6 {
            for tau in all_permutations(tau_len) {
                for sigma in elements_below(&tau) {
                    let by_runs = is_chain(&sigma, &tau).unwrap();
                    let iv = build_interval(&sigma, &tau).unwrap();
                    let sizes = iv.rank_sizes();
                    let totally_ordered = sizes.iter().all(|&s| s == 1);
                    assert_eq!(by_runs, totally_ordered, "[{sigma}, {tau}]");
                }
            }
        }
    }

    #[test]
    fn rank1_examples() {
        assert_eq!(
            rank1_elements(&p("12"), &p("2134")).unwrap(),
            vec![p("123"), p("213")]
        );
        assert_eq!(
            rank1_elements(&p("1342"), &p("1342675")).unwrap(),
            vec![p("12453"), p("13425"), p("21453")]
        );
        assert!(rank1_elements(&p("21"), &p("213")).unwrap().is_empty());
    }

    // Rank-two classification: the rank-1 level size equals the number of
    // removable runs. Exhaustive over rank-2 intervals.
    #[test]
    fn rank_two_level_sizes() {
        for tau_len in 3..=7 {
            for tau in all_permutations(tau_len) {
                for sigma in elements_below(&tau) {
                    if sigma.len() + 2 != tau.len() {
                        continue;
                    }
                    let level = rank1_elements(&sigma, &tau).unwrap();
                    let runs = removable_run_count(&sigma, &tau).unwrap();
                    assert_eq!(level.len(), runs, "[{sigma}, {tau}]");
                }
            }
        }
    }

    #[test]
    fn interval_json_shape() {
        let iv = build_interval(&p("12"), &p("2134")).unwrap();
        let json = iv.to_json();
        assert_eq!(json["bottom"], "12");
        assert_eq!(json["top"], "2134");
        assert_eq!(json["elements"].as_array().unwrap().len(), 4);
        for pair in json["covers"].as_array().unwrap() {
            assert_eq!(pair.as_array().unwrap().len(), 2);
        }
    }
}
