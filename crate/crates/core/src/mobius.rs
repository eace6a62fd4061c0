//! The Möbius function of pattern-poset intervals, by the defining recursion
//! over an explicitly built interval and by the recursive formulas available
//! when the top element is decomposable. The two routes are cross-validated
//! by the test suites; neither is ever substituted for the other.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::pattern::build_interval;
use crate::perm::{recombine, DecompKind, Permutation};
use crate::{Error, Result};

/// Möbius values of every element of `[base, top]` against the base.
pub struct MobiusTable {
    pub base: Permutation,
    pub values: Vec<(Permutation, BigInt)>,
}

impl MobiusTable {
    pub fn build(base: &Permutation, top: &Permutation) -> Result<MobiusTable> {
        let interval = build_interval(base, top)?;
        let mu = interval.mobius_from_bottom();
        Ok(MobiusTable {
            base: base.clone(),
            values: interval.elements().iter().cloned().zip(mu).collect(),
        })
    }

    pub fn value_of(&self, pi: &Permutation) -> Option<&BigInt> {
        self.values
            .iter()
            .find(|(candidate, _)| candidate == pi)
            .map(|(_, v)| v)
    }
}

/// `mu(sigma, tau)` by the defining recursion over the built interval.
pub fn mobius_brute(sigma: &Permutation, tau: &Permutation) -> Result<BigInt> {
    let interval = build_interval(sigma, tau)?;
    Ok(interval
        .mobius_from_bottom()
        .pop()
        .expect("interval is nonempty"))
}

/// Memoizing evaluator used inside the recursive formulas: 0 when the
/// arguments are incomparable, 1 on equality, otherwise the defining
/// recursion. Shared across a sweep via the cache argument.
pub struct MobiusCache {
    memo: HashMap<(Permutation, Permutation), BigInt>,
    by_top: HashMap<Permutation, HashMap<Permutation, BigInt>>,
}

impl MobiusCache {
    pub fn new() -> Self {
        MobiusCache {
            memo: HashMap::new(),
            by_top: HashMap::new(),
        }
    }

    pub fn mu(&mut self, sigma: &Permutation, tau: &Permutation) -> BigInt {
        if sigma == tau {
            return BigInt::one();
        }
        if !sigma.is_contained_in(tau) {
            return BigInt::zero();
        }
        if let Some(v) = self.memo.get(&(sigma.clone(), tau.clone())) {
            return v.clone();
        }
        if !self.by_top.contains_key(tau) {
            let interval = build_interval(&Permutation::empty(), tau)
                .expect("the empty permutation lies below everything");
            let mu = interval.mobius_to_top();
            let table: HashMap<Permutation, BigInt> =
                interval.elements().iter().cloned().zip(mu).collect();
            self.by_top.insert(tau.clone(), table);
        }
        let value = self.by_top[tau][sigma].clone();
        self.memo
            .insert((sigma.clone(), tau.clone()), value.clone());
        value
    }
}

impl Default for MobiusCache {
    fn default() -> Self {
        Self::new()
    }
}

/// One summand of the decomposable recursion: the splitting of the bottom
/// into consecutive blocks aligned with the top's components, and its
/// contribution to the sum.
pub struct SplittingTerm {
    pub blocks: Vec<Permutation>,
    pub contribution: BigInt,
}

/// `mu(sigma, tau)` through the unified recursion for decomposable tops:
/// sum over all splittings `sigma = s_1 ⊕ ... ⊕ s_t` (blocks may be empty,
/// `s_m <= tau_m`) of the product of per-component Möbius values, with a +1
/// adjustment when a block is empty and its component repeats the previous
/// one. Skew sums mirror the direct case.
pub fn mobius_decomposable_kind(
    sigma: &Permutation,
    tau: &Permutation,
    kind: DecompKind,
) -> Result<BigInt> {
    Ok(decomposable_terms_kind(sigma, tau, kind)?
        .into_iter()
        .map(|t| t.contribution)
        .sum())
}

pub fn mobius_decomposable(sigma: &Permutation, tau: &Permutation) -> Result<BigInt> {
    mobius_decomposable_kind(sigma, tau, DecompKind::Direct)
}

/// The skew-decomposition variant of the unified recursion.
pub fn mobius_skew_variant(sigma: &Permutation, tau: &Permutation) -> Result<BigInt> {
    mobius_decomposable_kind(sigma, tau, DecompKind::Skew)
}

pub fn decomposable_terms(sigma: &Permutation, tau: &Permutation) -> Result<Vec<SplittingTerm>> {
    decomposable_terms_kind(sigma, tau, DecompKind::Direct)
}

pub fn decomposable_terms_kind(
    sigma: &Permutation,
    tau: &Permutation,
    kind: DecompKind,
) -> Result<Vec<SplittingTerm>> {
    let mut cache = MobiusCache::new();
    decomposable_terms_cached(sigma, tau, kind, &mut cache)
}

pub fn decomposable_terms_cached(
    sigma: &Permutation,
    tau: &Permutation,
    kind: DecompKind,
    cache: &mut MobiusCache,
) -> Result<Vec<SplittingTerm>> {
    if !sigma.is_contained_in(tau) {
        return Err(Error::NotComparable(sigma.to_string(), tau.to_string()));
    }
    if tau.is_empty() {
        return Ok(vec![SplittingTerm {
            blocks: vec![Permutation::empty()],
            contribution: BigInt::one(),
        }]);
    }
    let tau_parts = tau.finest_decomposition(kind)?.components;
    let t = tau_parts.len();
    if t == 1 {
        // Indecomposable top: base case, the defining recursion.
        return Ok(vec![SplittingTerm {
            blocks: vec![sigma.clone()],
            contribution: mobius_brute(sigma, tau)?,
        }]);
    }
    let sigma_parts = if sigma.is_empty() {
        Vec::new()
    } else {
        sigma.finest_decomposition(kind)?.components
    };
    let s = sigma_parts.len();

    // Splittings of sigma into t consecutive blocks = weak compositions of
    // the component list, i.e. cut vectors 0 <= c_1 <= ... <= c_{t-1} <= s.
    let mut terms = Vec::new();
    let mut cuts = vec![0usize; t + 1];
    cuts[t] = s;
    enumerate_splittings(
        &sigma_parts,
        &tau_parts,
        kind,
        &mut cuts,
        1,
        cache,
        &mut terms,
    );
    Ok(terms)
}

fn enumerate_splittings(
    sigma_parts: &[Permutation],
    tau_parts: &[Permutation],
    kind: DecompKind,
    cuts: &mut Vec<usize>,
    at: usize,
    cache: &mut MobiusCache,
    terms: &mut Vec<SplittingTerm>,
) {
    let t = tau_parts.len();
    let s = sigma_parts.len();
    if at == t {
        let blocks: Vec<Permutation> = (0..t)
            .map(|m| recombine(&sigma_parts[cuts[m]..cuts[m + 1]], kind))
            .collect();
        let mut contribution = BigInt::one();
        for (m, block) in blocks.iter().enumerate() {
            if !block.is_contained_in(&tau_parts[m]) {
                return; // not a splitting admitted by the sum
            }
            let mut factor = cache.mu(block, &tau_parts[m]);
            if block.is_empty() && m >= 1 && tau_parts[m - 1] == tau_parts[m] {
                factor += BigInt::one();
            }
            contribution *= factor;
        }
        terms.push(SplittingTerm {
            blocks,
            contribution,
        });
        return;
    }
    for cut in cuts[at - 1]..=s {
        cuts[at] = cut;
        enumerate_splittings(sigma_parts, tau_parts, kind, cuts, at + 1, cache, terms);
    }
}

fn leading_equal_count(parts: &[Permutation], to: &Permutation) -> usize {
    parts.iter().take_while(|c| *c == to).count()
}

fn tail(parts: &[Permutation], from: usize, kind: DecompKind) -> Permutation {
    if from >= parts.len() {
        Permutation::empty()
    } else {
        recombine(&parts[from..], kind)
    }
}

fn head(parts: &[Permutation], upto: usize, kind: DecompKind) -> Permutation {
    recombine(&parts[..upto.min(parts.len())], kind)
}

/// The first recursive formula for decomposable tops, applicable when the
/// finest decomposition of `tau` has at least two components and starts
/// with 1: with `k` leading 1-components in `tau` and `l` in `sigma`,
///
/// ```text
/// mu(sigma, tau) = 0                                   if k-1 > l
///                = -mu(sigma_{>k-1}, tau_{>k})         if k-1 = l
///                = mu(sigma_{>k}, tau_{>k})
///                  - mu(sigma_{>k-1}, tau_{>k})        if k-1 < l
/// ```
pub fn mobius_head_ones(sigma: &Permutation, tau: &Permutation) -> Result<BigInt> {
    mobius_head_ones_kind(sigma, tau, DecompKind::Direct)
}

pub fn mobius_head_ones_kind(
    sigma: &Permutation,
    tau: &Permutation,
    kind: DecompKind,
) -> Result<BigInt> {
    let (sigma_parts, tau_parts) = head_formula_preconditions(sigma, tau, kind)?;
    let unit = Permutation::one();
    if tau_parts[0] != unit {
        return Err(Error::InvalidInput(
            "first-component-1 formula requires the top to start with a singleton component".into(),
        ));
    }
    let k = leading_equal_count(&tau_parts, &unit);
    let l = leading_equal_count(&sigma_parts, &unit);
    let mut cache = MobiusCache::new();
    let tau_after_k = tail(&tau_parts, k, kind);
    let value = if k - 1 > l {
        BigInt::zero()
    } else if k - 1 == l {
        -cache.mu(&tail(&sigma_parts, k - 1, kind), &tau_after_k)
    } else {
        cache.mu(&tail(&sigma_parts, k, kind), &tau_after_k)
            - cache.mu(&tail(&sigma_parts, k - 1, kind), &tau_after_k)
    };
    Ok(value)
}

/// The second recursive formula, applicable when the finest decomposition of
/// `tau` has at least two components and the first has length over 1: with
/// `k` leading components of `tau` equal to the first,
///
/// ```text
/// mu(sigma, tau) = sum_{i=1..s} sum_{j=1..k}
///                      mu(sigma_{<=i}, tau_1) * mu(sigma_{>i}, tau_{>j})
/// ```
pub fn mobius_head_repeated(sigma: &Permutation, tau: &Permutation) -> Result<BigInt> {
    mobius_head_repeated_kind(sigma, tau, DecompKind::Direct)
}

pub fn mobius_head_repeated_kind(
    sigma: &Permutation,
    tau: &Permutation,
    kind: DecompKind,
) -> Result<BigInt> {
    let (sigma_parts, tau_parts) = head_formula_preconditions(sigma, tau, kind)?;
    if tau_parts[0].len() <= 1 {
        return Err(Error::InvalidInput(
            "double-sum formula requires the top's first component to have length over 1".into(),
        ));
    }
    let k = leading_equal_count(&tau_parts, &tau_parts[0]);
    let s = sigma_parts.len();
    let mut cache = MobiusCache::new();
    let mut total = BigInt::zero();
    for i in 1..=s {
        let left = cache.mu(&head(&sigma_parts, i, kind), &tau_parts[0]);
        if left.is_zero() {
            continue;
        }
        for j in 1..=k {
            let right = cache.mu(&tail(&sigma_parts, i, kind), &tail(&tau_parts, j, kind));
            total += &left * right;
        }
    }
    Ok(total)
}

fn head_formula_preconditions(
    sigma: &Permutation,
    tau: &Permutation,
    kind: DecompKind,
) -> Result<(Vec<Permutation>, Vec<Permutation>)> {
    if sigma.is_empty() || tau.is_empty() {
        return Err(Error::InvalidInput(
            "component formulas require nonempty permutations".into(),
        ));
    }
    let tau_parts = tau.finest_decomposition(kind)?.components;
    if tau_parts.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "{tau} does not split into two or more components"
        )));
    }
    let sigma_parts = sigma.finest_decomposition(kind)?.components;
    Ok((sigma_parts, tau_parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::all_permutations;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn worked_example_values() {
        assert_eq!(mobius_brute(&p("12"), &p("2413")).unwrap(), int(3));
        assert_eq!(mobius_brute(&p("1"), &p("2413")).unwrap(), int(-3));
        let sigma = p("2413");
        assert_eq!(mobius_brute(&sigma, &sigma).unwrap(), int(1));
        assert_eq!(mobius_brute(&p("12"), &p("24136857")).unwrap(), int(12));
    }

    #[test]
    fn empty_bottom_values() {
        assert_eq!(
            mobius_brute(&Permutation::empty(), &p("1")).unwrap(),
            int(-1)
        );
        assert_eq!(
            mobius_decomposable(&Permutation::empty(), &p("12")).unwrap(),
            int(0)
        );
        for tau in ["12", "21", "231", "2413"] {
            assert_eq!(
                mobius_brute(&Permutation::empty(), &p(tau)).unwrap(),
                int(0),
                "mu(empty, {tau})"
            );
        }
    }

    #[test]
    fn decomposable_worked_example_terms() {
        let terms = decomposable_terms(&p("12"), &p("24136857")).unwrap();
        assert_eq!(terms.len(), 3);
        let by_blocks: Vec<(Vec<String>, BigInt)> = terms
            .into_iter()
            .map(|t| {
                (
                    t.blocks.iter().map(|b| b.to_string()).collect(),
                    t.contribution,
                )
            })
            .collect();
        assert!(by_blocks.contains(&(vec!["1".into(), "1".into()], int(9))));
        assert!(by_blocks.contains(&(vec!["".into(), "12".into()], int(0))));
        assert!(by_blocks.contains(&(vec!["12".into(), "".into()], int(3))));
        assert_eq!(
            mobius_decomposable(&p("12"), &p("24136857")).unwrap(),
            int(12)
        );
    }

    #[test]
    fn first_formula_examples() {
        // 1243 = 1 + 1 + 21, so k = 2 while sigma = 21 gives l = 0.
        assert_eq!(mobius_head_ones(&p("21"), &p("1243")).unwrap(), int(0));
        assert_eq!(mobius_brute(&p("21"), &p("1243")).unwrap(), int(0));

        // 132 = 1 + 21 and 12543 = 1 + 1 + 321: the k-1 = l case.
        let by_formula = mobius_head_ones(&p("132"), &p("12543")).unwrap();
        assert_eq!(by_formula, mobius_brute(&p("132"), &p("12543")).unwrap());

        assert!(mobius_head_ones(&p("12"), &p("2413")).is_err());
        assert!(mobius_head_ones(&p("12"), &p("24136857")).is_err());
    }

    #[test]
    fn second_formula_examples() {
        assert_eq!(
            mobius_head_repeated(&p("12"), &p("24136857")).unwrap(),
            int(12)
        );
        let with_tail = mobius_head_repeated(&p("12"), &p("24135")).unwrap();
        assert_eq!(with_tail, mobius_brute(&p("12"), &p("24135")).unwrap());
        assert!(mobius_head_repeated(&p("1"), &p("1243")).is_err());
    }

    #[test]
    fn skew_variant_examples() {
        let tau = p("2143").skew_sum(&p("2143"));
        assert_eq!(
            mobius_skew_variant(&p("21"), &tau).unwrap(),
            mobius_brute(&p("21"), &tau).unwrap()
        );
        let sigma = p("321");
        assert_eq!(mobius_skew_variant(&sigma, &sigma).unwrap(), int(1));
    }

    #[test]
    fn mobius_is_reverse_invariant() {
        for tau_len in 2..=6 {
            for tau in all_permutations(tau_len) {
                let forward = build_interval(&Permutation::empty(), &tau).unwrap();
                let backward = build_interval(&Permutation::empty(), &tau.reverse()).unwrap();
                let forward_mu = forward.mobius_to_top();
                let backward_mu = backward.mobius_to_top();
                for (idx, sigma) in forward.elements().iter().enumerate() {
                    let mirror = backward.index_of(&sigma.reverse()).expect("reverse below");
                    assert_eq!(forward_mu[idx], backward_mu[mirror], "[{sigma}, {tau}]");
                }
            }
        }
    }

    // The downward table recursion used by the sweeps agrees with the
    // upward defining recursion on every interval below length 6.
    #[test]
    fn table_recursion_matches_brute_force() {
        for tau_len in 1..=5 {
            for tau in all_permutations(tau_len) {
                let master = build_interval(&Permutation::empty(), &tau).unwrap();
                let table = master.mobius_to_top();
                for (idx, sigma) in master.elements().iter().enumerate() {
                    assert_eq!(
                        table[idx],
                        mobius_brute(sigma, &tau).unwrap(),
                        "[{sigma}, {tau}]"
                    );
                }
            }
        }
    }

    #[test]
    fn table_column_sums_vanish() {
        for (sigma, tau) in [("1", "2413"), ("12", "24135"), ("123", "351624")] {
            let sigma = p(sigma);
            let tau = p(tau);
            let interval = build_interval(&sigma, &tau).unwrap();
            let mu = interval.mobius_from_bottom();
            for pi_idx in 1..interval.size() {
                let sum: BigInt = (0..interval.size())
                    .filter(|&z| interval.leq_idx(z, pi_idx))
                    .map(|z| mu[z].clone())
                    .sum();
                assert!(sum.is_zero(), "column for {}", interval.element(pi_idx));
            }
        }
    }

    #[test]
    fn table_lookup() {
        let table = MobiusTable::build(&p("1"), &p("2413")).unwrap();
        assert_eq!(table.value_of(&p("1")).unwrap(), &int(1));
        assert_eq!(table.value_of(&p("2413")).unwrap(), &int(-3));
        assert!(table.value_of(&p("321")).is_none());
    }

    // Cross-validation of every route on everything below length-6 tops.
    #[test]
    fn all_routes_agree_to_length_six() {
        let mut cache = MobiusCache::new();
        for tau_len in 1..=6 {
            for tau in all_permutations(tau_len) {
                let interval = build_interval(&Permutation::empty(), &tau).unwrap();
                let table = interval.mobius_to_top();
                for (idx, sigma) in interval.elements().iter().enumerate() {
                    let brute = table[idx].clone();
                    assert_eq!(cache.mu(sigma, &tau), brute, "cache [{sigma}, {tau}]");
                    if tau
                        .finest_decomposition(DecompKind::Direct)
                        .map(|d| d.components.len() > 1)
                        .unwrap_or(false)
                    {
                        assert_eq!(
                            mobius_decomposable(sigma, &tau).unwrap(),
                            brute,
                            "decomposable [{sigma}, {tau}]"
                        );
                    }
                    if tau
                        .finest_decomposition(DecompKind::Skew)
                        .map(|d| d.components.len() > 1)
                        .unwrap_or(false)
                    {
                        assert_eq!(
                            mobius_skew_variant(sigma, &tau).unwrap(),
                            brute,
                            "skew [{sigma}, {tau}]"
                        );
                    }
                }
            }
        }
    }
}
