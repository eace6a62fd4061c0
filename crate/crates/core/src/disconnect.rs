//! Disconnectivity of open intervals: the embedding-partition test, its use
//! as a decision procedure, augmentation constructors, subinterval scanning,
//! and the seeded Monte Carlo experiment measuring how common disconnected
//! subintervals are.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::pattern::build_interval;
use crate::perm::{Embedding, Permutation};
use crate::{Error, Result};

/// A partition of the embeddings of a pattern into two sides, with the zero
/// positions touched by each side.
#[derive(Clone, Debug)]
pub struct EmbeddingPartition {
    pub side_one: Vec<Embedding>,
    pub side_two: Vec<Embedding>,
}

impl EmbeddingPartition {
    pub fn zero_union(side: &[Embedding]) -> BTreeSet<usize> {
        side.iter().flat_map(|e| e.zero_set()).collect()
    }
}

/// Witness that filling one zero in each of two embeddings produced the same
/// permutation, defeating a candidate partition.
#[derive(Clone, Debug, Serialize)]
pub struct FillingWitness {
    pub embedding_one: String,
    pub filled_one: usize,
    pub embedding_two: String,
    pub filled_two: usize,
    pub common: String,
}

#[derive(Clone, Debug)]
pub enum PartitionCheck {
    Ok,
    /// The two sides touch a common zero position.
    FailsDisjointness {
        position: usize,
    },
    /// Condition on filled zeros fails, with the witness pair.
    FailsFilling(FillingWitness),
}

/// Checks the two disconnectivity conditions against a user-supplied
/// partition. Requires rank at least 3.
pub fn check_partition(
    sigma: &Permutation,
    tau: &Permutation,
    partition: &EmbeddingPartition,
) -> Result<PartitionCheck> {
    require_rank_at_least_three(sigma, tau)?;
    validate_partition(
        sigma,
        tau,
        &[partition.side_one.clone(), partition.side_two.clone()],
    )?;
    Ok(check_pair(tau, &partition.side_one, &partition.side_two))
}

fn require_rank_at_least_three(sigma: &Permutation, tau: &Permutation) -> Result<()> {
    if !sigma.is_contained_in(tau) {
        return Err(Error::NotComparable(sigma.to_string(), tau.to_string()));
    }
    let rank = tau.len() - sigma.len();
    if rank < 3 {
        return Err(Error::RankTooSmall(rank, 3));
    }
    Ok(())
}

fn validate_partition(
    sigma: &Permutation,
    tau: &Permutation,
    parts: &[Vec<Embedding>],
) -> Result<()> {
    let mut all: Vec<Embedding> = parts.iter().flatten().cloned().collect();
    let total: usize = all.len();
    all.sort();
    all.dedup();
    if all.len() != total {
        return Err(Error::InvalidPartition("sides overlap".into()));
    }
    if parts.iter().any(|side| side.is_empty()) {
        return Err(Error::InvalidPartition("a side is empty".into()));
    }
    let mut expected = tau.embeddings_of(sigma);
    expected.sort();
    if all != expected {
        return Err(Error::InvalidPartition(
            "sides do not cover the embedding set".into(),
        ));
    }
    Ok(())
}

/// Both conditions for one unordered pair of sides.
fn check_pair(tau: &Permutation, one: &[Embedding], two: &[Embedding]) -> PartitionCheck {
    let union_one = EmbeddingPartition::zero_union(one);
    let union_two = EmbeddingPartition::zero_union(two);
    if let Some(&position) = union_one.intersection(&union_two).next() {
        return PartitionCheck::FailsDisjointness { position };
    }
    for eta_one in one {
        for eta_two in two {
            if let Some(witness) = filling_conflict(tau, eta_one, eta_two) {
                return PartitionCheck::FailsFilling(witness);
            }
        }
    }
    PartitionCheck::Ok
}

/// Looks for zeros z1, z2 whose filling makes the two embeddings meet in a
/// common covering permutation.
fn filling_conflict(
    tau: &Permutation,
    eta_one: &Embedding,
    eta_two: &Embedding,
) -> Option<FillingWitness> {
    let mask_one = eta_one.zero_mask();
    let mask_two = eta_two.zero_mask();
    for z_one in eta_one.zero_set() {
        let filled_one = tau.delete_mask(mask_one & !(1 << (z_one - 1)));
        for z_two in eta_two.zero_set() {
            let filled_two = tau.delete_mask(mask_two & !(1 << (z_two - 1)));
            if filled_one == filled_two {
                return Some(FillingWitness {
                    embedding_one: eta_one.to_string(),
                    filled_one: z_one,
                    embedding_two: eta_two.to_string(),
                    filled_two: z_two,
                    common: filled_one.to_string(),
                });
            }
        }
    }
    None
}

fn embeddings_conflict(tau: &Permutation, a: &Embedding, b: &Embedding) -> bool {
    (a.zero_mask() & b.zero_mask()) != 0 || filling_conflict(tau, a, b).is_some()
}

/// Decides disconnectivity of the open interval. For rank at least 3 this
/// searches for a valid two-sided partition of the embeddings: embeddings
/// forced together (shared zero position, or a filling conflict) are merged
/// into blocks, and any split of the blocks is valid. For smaller ranks it
/// falls back to the component count of the built interval.
pub fn is_disconnected(
    sigma: &Permutation,
    tau: &Permutation,
) -> Result<(bool, Option<EmbeddingPartition>)> {
    if !sigma.is_contained_in(tau) {
        return Err(Error::NotComparable(sigma.to_string(), tau.to_string()));
    }
    if tau.len() - sigma.len() < 3 {
        let interval = build_interval(sigma, tau)?;
        return Ok((interval.open_components().len() > 1, None));
    }
    let embeddings = tau.embeddings_of(sigma);
    let n = embeddings.len();
    let mut block = vec![usize::MAX; n];
    let mut block_count = 0usize;
    for start in 0..n {
        if block[start] != usize::MAX {
            continue;
        }
        let id = block_count;
        block_count += 1;
        let mut stack = vec![start];
        block[start] = id;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if block[w] == usize::MAX
                    && embeddings_conflict(tau, &embeddings[v], &embeddings[w])
                {
                    block[w] = id;
                    stack.push(w);
                }
            }
        }
    }
    if block_count < 2 {
        return Ok((false, None));
    }
    let partition = EmbeddingPartition {
        side_one: embeddings
            .iter()
            .zip(&block)
            .filter(|(_, &b)| b == 0)
            .map(|(e, _)| e.clone())
            .collect(),
        side_two: embeddings
            .iter()
            .zip(&block)
            .filter(|(_, &b)| b != 0)
            .map(|(e, _)| e.clone())
            .collect(),
    };
    debug_assert!(matches!(
        check_partition(sigma, tau, &partition),
        Ok(PartitionCheck::Ok)
    ));
    Ok((true, Some(partition)))
}

/// Verifies a user-supplied partition into `k` sides, each pair of which
/// must satisfy both conditions; the open interval then has at least `k`
/// connected components.
pub fn component_count_lower_bound(
    sigma: &Permutation,
    tau: &Permutation,
    parts: &[Vec<Embedding>],
) -> Result<usize> {
    require_rank_at_least_three(sigma, tau)?;
    validate_partition(sigma, tau, parts)?;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            match check_pair(tau, &parts[i], &parts[j]) {
                PartitionCheck::Ok => {}
                PartitionCheck::FailsDisjointness { position } => {
                    return Err(Error::InvalidPartition(format!(
                        "sides {i} and {j} share zero position {position}"
                    )))
                }
                PartitionCheck::FailsFilling(w) => {
                    return Err(Error::InvalidPartition(format!(
                        "sides {i} and {j} meet at {} after filling",
                        w.common
                    )))
                }
            }
        }
    }
    Ok(parts.len())
}

/// The canonical disconnected interval over a given bottom: `(sigma,
/// sigma + sigma)` with the sum matching sigma's indecomposability.
pub fn make_disconnected(sigma: &Permutation) -> Result<(Permutation, Permutation)> {
    if sigma.len() < 2 {
        return Err(Error::InvalidInput(
            "need length at least 2 to build a disconnected interval".into(),
        ));
    }
    let top = if sigma.is_indecomposable() {
        sigma.direct_sum(sigma)
    } else {
        sigma.skew_sum(sigma)
    };
    Ok((sigma.clone(), top))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AugmentMode {
    SumLeft,
    SkewLeft,
    SumRight,
    SkewRight,
}

/// The four augmentations that preserve disconnectivity.
pub fn augment(
    sigma: &Permutation,
    tau: &Permutation,
    alpha: &Permutation,
    mode: AugmentMode,
) -> (Permutation, Permutation) {
    match mode {
        AugmentMode::SumLeft => (alpha.direct_sum(sigma), alpha.direct_sum(tau)),
        AugmentMode::SkewLeft => (alpha.skew_sum(sigma), alpha.skew_sum(tau)),
        AugmentMode::SumRight => (sigma.direct_sum(alpha), tau.direct_sum(alpha)),
        AugmentMode::SkewRight => (sigma.skew_sum(alpha), tau.skew_sum(alpha)),
    }
}

/// Scans all subinterval pairs of rank at least 3 for a disconnected one,
/// returning the least witness under the output order.
pub fn has_nontrivial_disconnected_subinterval(
    sigma: &Permutation,
    tau: &Permutation,
) -> Result<Option<(Permutation, Permutation)>> {
    let interval = build_interval(sigma, tau)?;
    let n = interval.size();
    let mut pairs = Vec::new();
    for lower in 0..n {
        for upper in 0..n {
            if interval.rank_of(upper) >= interval.rank_of(lower) + 3
                && interval.leq_idx(lower, upper)
            {
                pairs.push((lower, upper));
            }
        }
    }
    let mut witnesses: Vec<(Permutation, Permutation)> = pairs
        .into_par_iter()
        .filter_map(|(lower, upper)| {
            let x = interval.element(lower);
            let y = interval.element(upper);
            match is_disconnected(x, y) {
                Ok((true, _)) => Some((x.clone(), y.clone())),
                _ => None,
            }
        })
        .collect();
    witnesses.sort();
    Ok(witnesses.into_iter().next())
}

/// Outcome of the sampling experiment for the prevalence of the canonical
/// disconnected subinterval inside random intervals.
#[derive(Clone, Debug, Serialize)]
pub struct PrevalenceReport {
    pub sigma: String,
    pub target: String,
    pub n: usize,
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub analytic_lower_bound: f64,
    pub std_error: f64,
    pub seed: u64,
}

/// Samples uniform permutations of length `n` with a seeded generator and
/// measures how often they contain `sigma + sigma`; reports the observed
/// frequency next to the analytic lower bound
/// `1 - (1 - 1/k!)^(n/k)` with `k` the target length.
pub fn monte_carlo_prevalence(
    sigma: &Permutation,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<PrevalenceReport> {
    if sigma.len() < 2 {
        return Err(Error::InvalidInput(
            "the sampled pattern must have length at least 2".into(),
        ));
    }
    let (_, target) = make_disconnected(sigma)?;
    let k = target.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut letters: Vec<u8> = (1..=n as u8).collect();
    let mut hits = 0u64;
    for _ in 0..trials {
        fisher_yates(&mut letters, &mut rng);
        let candidate = Permutation::from_letters(letters.clone())?;
        if candidate.contains(&target) {
            hits += 1;
        }
    }
    let frequency = hits as f64 / trials as f64;
    Ok(PrevalenceReport {
        sigma: sigma.to_string(),
        target: target.to_string(),
        n,
        trials,
        hits,
        frequency,
        analytic_lower_bound: prevalence_lower_bound(k, n),
        std_error: (frequency * (1.0 - frequency) / trials as f64).sqrt(),
        seed,
    })
}

/// `1 - (1 - 1/k!)^(floor(n/k))`.
pub fn prevalence_lower_bound(k: usize, n: usize) -> f64 {
    let factorial: f64 = (1..=k).map(|x| x as f64).product();
    1.0 - (1.0 - 1.0 / factorial).powi((n / k) as i32)
}

/// Exact prevalence by enumerating all permutations of length `n`; test
/// oracle for the sampler at tiny sizes.
pub fn exhaustive_prevalence(sigma: &Permutation, n: usize) -> Result<f64> {
    let (_, target) = make_disconnected(sigma)?;
    let all = crate::pattern::all_permutations(n);
    let hits = all.iter().filter(|t| t.contains(&target)).count();
    Ok(hits as f64 / all.len() as f64)
}

fn fisher_yates(letters: &mut [u8], rng: &mut ChaCha8Rng) {
    for i in (1..letters.len()).rev() {
        let j = rng.random_range(0..=i);
        letters.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{all_permutations, elements_below};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn e(s: &str) -> Embedding {
        s.parse().unwrap()
    }

    #[test]
    fn partition_for_1342_1342675_is_valid() {
        let partition = EmbeddingPartition {
            side_one: vec![e("1342000")],
            side_two: vec![e("1000342"), e("0100342"), e("0010342"), e("0001342")],
        };
        let verdict = check_partition(&p("1342"), &p("1342675"), &partition).unwrap();
        assert!(matches!(verdict, PartitionCheck::Ok));
    }

    #[test]
    fn filling_counterexample() {
        let partition = EmbeddingPartition {
            side_one: vec![e("02305104")],
            side_two: vec![e("23510040")],
        };
        let verdict = check_partition(&p("23514"), &p("24618357"), &partition).unwrap();
        match verdict {
            PartitionCheck::FailsFilling(w) => {
                assert_eq!(w.filled_one, 7);
                assert_eq!(w.filled_two, 6);
                assert_eq!(w.common, "246135");
            }
            other => panic!("expected filling failure, got {other:?}"),
        }
    }

    #[test]
    fn disjointness_counterexample() {
        let partition = EmbeddingPartition {
            side_one: vec![e("12000")],
            side_two: vec![e("00012")],
        };
        let verdict = check_partition(&p("12"), &p("45312"), &partition).unwrap();
        assert!(matches!(verdict, PartitionCheck::FailsDisjointness { .. }));
    }

    #[test]
    fn rank_guard() {
        let partition = EmbeddingPartition {
            side_one: vec![e("100")],
            side_two: vec![e("001")],
        };
        assert!(matches!(
            check_partition(&p("1"), &p("213"), &partition),
            Err(Error::RankTooSmall(2, 3))
        ));
    }

    #[test]
    fn partition_validation() {
        // Wrong embedding set for the interval.
        let bogus = EmbeddingPartition {
            side_one: vec![e("1342000")],
            side_two: vec![e("1000342")],
        };
        assert!(matches!(
            check_partition(&p("1342"), &p("1342675"), &bogus),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn disconnection_examples() {
        assert!(is_disconnected(&p("1342"), &p("1342675")).unwrap().0);
        assert!(!is_disconnected(&p("123"), &p("1342675")).unwrap().0);
        assert!(is_disconnected(&p("321"), &p("321654")).unwrap().0);
        // Rank-2 fallback: (21, 2143) is a two-element antichain.
        assert!(is_disconnected(&p("21"), &p("2143")).unwrap().0);
        assert!(!is_disconnected(&p("1"), &p("12")).unwrap().0);
    }

    // Partition-test soundness and completeness against graph components,
    // for every pair with room for rank 3. Full length-7 coverage runs in
    // the acceptance suite.
    #[test]
    fn partition_test_agrees_with_components_to_length_six() {
        for tau_len in 4..=6 {
            for tau in all_permutations(tau_len) {
                let interval = build_interval(&Permutation::empty(), &tau).unwrap();
                for sigma in interval.elements() {
                    if sigma.len() + 3 > tau.len() || sigma.is_empty() {
                        continue;
                    }
                    let (verdict, partition) = is_disconnected(sigma, &tau).unwrap();
                    let open = build_interval(sigma, &tau).unwrap();
                    assert_eq!(
                        verdict,
                        open.open_components().len() > 1,
                        "[{sigma}, {tau}]"
                    );
                    if let Some(partition) = partition {
                        assert!(matches!(
                            check_partition(sigma, &tau, &partition).unwrap(),
                            PartitionCheck::Ok
                        ));
                    }
                }
            }
        }
    }

    // Final assertion of the partition test: side zero sets identify the two
    // graph components, and every open element sits on exactly one side.
    #[test]
    fn partition_sides_are_the_components() {
        let sigma = p("1342");
        let tau = p("1342675");
        let (_, partition) = is_disconnected(&sigma, &tau).unwrap();
        let partition = partition.unwrap();
        let interval = build_interval(&sigma, &tau).unwrap();

        let union_one = EmbeddingPartition::zero_union(&partition.side_one);
        let union_two = EmbeddingPartition::zero_union(&partition.side_two);
        let reachable = |union: &BTreeSet<usize>| {
            let mut out = std::collections::HashSet::new();
            let positions: Vec<usize> = union.iter().copied().collect();
            for mask in 1u64..(1 << positions.len()) {
                let delete = positions
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .fold(0u64, |m, (_, &pos)| m | 1 << (pos - 1));
                let pi = tau.delete_mask(delete);
                if pi.len() < tau.len() && pi.len() > sigma.len() && sigma.is_contained_in(&pi) {
                    out.insert(pi);
                }
            }
            out
        };
        let side_one = reachable(&union_one);
        let side_two = reachable(&union_two);
        assert!(side_one.is_disjoint(&side_two));

        let components = interval.open_components();
        assert_eq!(components.len(), 2);
        let open_elements: std::collections::HashSet<Permutation> = interval
            .open_indices()
            .into_iter()
            .map(|i| interval.element(i).clone())
            .collect();
        let union: std::collections::HashSet<Permutation> =
            side_one.union(&side_two).cloned().collect();
        assert_eq!(union, open_elements);
        for component in components {
            let members: std::collections::HashSet<Permutation> = component
                .into_iter()
                .map(|i| interval.element(i).clone())
                .collect();
            assert!(members == side_one || members == side_two);
        }
    }

    #[test]
    fn three_component_partition_verifies() {
        let sigma = p("321").direct_sum(&p("321"));
        let tau = sigma.direct_sum(&p("321"));
        let embeddings = tau.embeddings_of(&sigma);
        assert_eq!(embeddings.len(), 3);
        let parts: Vec<Vec<Embedding>> = embeddings.iter().map(|e| vec![e.clone()]).collect();
        assert_eq!(
            component_count_lower_bound(&sigma, &tau, &parts).unwrap(),
            3
        );
        let interval = build_interval(&sigma, &tau).unwrap();
        let components = interval.open_components();
        assert_eq!(components.len(), 3);
        // Each component is a chain of length 1.
        for component in components {
            assert_eq!(component.len(), 2);
        }
        // Trivial one-part partition verifies with bound 1.
        let whole: Vec<Vec<Embedding>> = vec![embeddings];
        assert_eq!(
            component_count_lower_bound(&sigma, &tau, &whole).unwrap(),
            1
        );
    }

    #[test]
    fn two_part_bound_for_1342_1342675() {
        let parts = vec![
            vec![e("1342000")],
            vec![e("1000342"), e("0100342"), e("0010342"), e("0001342")],
        ];
        assert_eq!(
            component_count_lower_bound(&p("1342"), &p("1342675"), &parts).unwrap(),
            2
        );
    }

    #[test]
    fn make_disconnected_examples() {
        assert_eq!(
            make_disconnected(&p("321")).unwrap(),
            (p("321"), p("321654"))
        );
        assert_eq!(make_disconnected(&p("21")).unwrap(), (p("21"), p("2143")));
        assert_eq!(
            make_disconnected(&p("2413")).unwrap(),
            (p("2413"), p("24136857"))
        );
        assert!(make_disconnected(&p("1")).is_err());
        for (sigma, tau) in [
            make_disconnected(&p("21")).unwrap(),
            make_disconnected(&p("321")).unwrap(),
            make_disconnected(&p("132")).unwrap(),
        ] {
            let interval = build_interval(&sigma, &tau).unwrap();
            assert!(interval.open_components().len() > 1, "({sigma}, {tau})");
        }
    }

    #[test]
    fn augmentation_examples() {
        assert_eq!(
            augment(&p("321"), &p("321654"), &p("1"), AugmentMode::SumLeft),
            (p("1432"), p("1432765"))
        );
        let (s, t) = augment(&p("321"), &p("321654"), &p("1"), AugmentMode::SumLeft);
        assert!(is_disconnected(&s, &t).unwrap().0);

        let empty = Permutation::empty();
        for mode in [
            AugmentMode::SumLeft,
            AugmentMode::SkewLeft,
            AugmentMode::SumRight,
            AugmentMode::SkewRight,
        ] {
            assert_eq!(
                augment(&p("21"), &p("2143"), &empty, mode),
                (p("21"), p("2143"))
            );
        }

        assert_eq!(
            augment(&p("21"), &p("2143"), &p("1"), AugmentMode::SkewLeft),
            (p("321"), p("52143"))
        );
        let (s, t) = augment(&p("21"), &p("2143"), &p("1"), AugmentMode::SkewLeft);
        let interval = build_interval(&s, &t).unwrap();
        assert!(interval.open_components().len() > 1);
    }

    // Augmentation preserves disconnectivity: exhaustive over all
    // disconnected intervals with |tau| <= 5 and all alpha with |alpha| <= 2.
    #[test]
    fn augmentation_preserves_disconnectivity() {
        let mut alphas = vec![Permutation::empty()];
        alphas.extend(all_permutations(1));
        alphas.extend(all_permutations(2));
        for tau_len in 3..=5 {
            for tau in all_permutations(tau_len) {
                for sigma in elements_below(&tau) {
                    if sigma.is_empty() || sigma.len() + 2 > tau.len() {
                        continue;
                    }
                    let interval = build_interval(&sigma, &tau).unwrap();
                    if interval.open_components().len() < 2 {
                        continue;
                    }
                    for alpha in &alphas {
                        let (s, t) = augment(&sigma, &tau, alpha, AugmentMode::SumLeft);
                        let augmented = build_interval(&s, &t).unwrap();
                        assert!(
                            augmented.open_components().len() > 1,
                            "({sigma}, {tau}) + {alpha}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn subinterval_scan_examples() {
        let witness = has_nontrivial_disconnected_subinterval(&p("123"), &p("1342675"))
            .unwrap()
            .expect("disconnected subinterval exists");
        assert_eq!(witness, (p("1342"), p("1342675")));
        assert!(
            has_nontrivial_disconnected_subinterval(&p("123"), &p("3416725"))
                .unwrap()
                .is_none()
        );
        assert!(has_nontrivial_disconnected_subinterval(&p("12"), &p("123"))
            .unwrap()
            .is_none());
    }

    #[test]
    fn monte_carlo_against_exhaustive_oracle() {
        let exact = exhaustive_prevalence(&p("321"), 6).unwrap();
        let report = monte_carlo_prevalence(&p("321"), 6, 4000, 11).unwrap();
        assert!(
            (report.frequency - exact).abs() < 5.0 * (exact * (1.0 - exact) / 4000.0).sqrt(),
            "sampled {} vs exact {exact}",
            report.frequency
        );
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = monte_carlo_prevalence(&p("21"), 12, 500, 7).unwrap();
        let b = monte_carlo_prevalence(&p("21"), 12, 500, 7).unwrap();
        assert_eq!(a.hits, b.hits);
        let c = monte_carlo_prevalence(&p("21"), 12, 500, 8).unwrap();
        assert!(a.hits != c.hits || a.frequency == c.frequency);
    }

    #[test]
    fn monte_carlo_too_short_never_hits() {
        let report = monte_carlo_prevalence(&p("21"), 3, 200, 1).unwrap();
        assert_eq!(report.hits, 0);
    }
}
