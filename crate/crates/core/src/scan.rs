//! Batch scanners over all intervals up to a length bound, and regression
//! fixtures pinning the worked interval posets, labeled chains, and Möbius
//! computations exercised throughout the suite. Scanners emit self-contained
//! JSON-lines records whose witnesses re-check independently; output is
//! sorted, so worker count never changes the bytes.

use std::collections::HashSet;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::disconnect;
use crate::mobius::{self, MobiusCache};
use crate::pattern::{all_permutations, build_interval};
use crate::perm::{DecompKind, Permutation};
use crate::subword::{self, ChainLabel, Forest, Word};
use crate::{Error, Result};

/// Exhaustive scans enumerate every permutation of each length; beyond this
/// bound the interval machinery leaves desk scale.
pub const SCAN_LENGTH_LIMIT: usize = 9;

fn check_scan_bound(max_n: usize) -> Result<()> {
    if max_n > SCAN_LENGTH_LIMIT {
        return Err(Error::InvalidInput(format!(
            "scan bound {max_n} exceeds the configured limit {SCAN_LENGTH_LIMIT}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRecord {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ScanRecord {
    fn new(kind: &str, sigma: &Permutation, tau: &Permutation, verdict: &str) -> ScanRecord {
        ScanRecord {
            kind: kind.to_string(),
            sigma: Some(sigma.to_string()),
            tau: Some(tau.to_string()),
            verdict: verdict.to_string(),
            witness: None,
            wall_ms: None,
            seed: None,
        }
    }
}

/// All disconnected open intervals of rank at least 3 with the top length
/// bounded by `max_n`, with their embedding partitions as witnesses.
pub fn scan_disconnected(max_n: usize, timings: bool) -> Result<Vec<ScanRecord>> {
    check_scan_bound(max_n)?;
    let mut tops = Vec::new();
    for n in 4..=max_n {
        tops.extend(all_permutations(n));
    }
    let mut records: Vec<((usize, String, String), ScanRecord)> = tops
        .par_iter()
        .flat_map_iter(|tau| {
            let started = Instant::now();
            let mut found = Vec::new();
            for sigma in crate::pattern::elements_below(tau) {
                if sigma.is_empty() || sigma.len() + 3 > tau.len() {
                    continue;
                }
                let (disconnected, partition) =
                    disconnect::is_disconnected(&sigma, tau).expect("sigma below tau");
                if !disconnected {
                    continue;
                }
                let witness = partition.map(|p| {
                    json!({
                        "side_one": p.side_one.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                        "side_two": p.side_two.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    })
                });
                let mut record = ScanRecord::new("disconnected", &sigma, tau, "disconnected");
                record.witness = witness;
                if timings {
                    record.wall_ms = Some(started.elapsed().as_millis() as u64);
                }
                found.push(((tau.len(), tau.to_string(), sigma.to_string()), record));
            }
            found
        })
        .collect();
    records.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

/// Rank-unimodality violations over all intervals with top length bounded by
/// `max_n`; expected to stream nothing.
pub fn scan_unimodal(max_n: usize, timings: bool) -> Result<Vec<ScanRecord>> {
    check_scan_bound(max_n)?;
    let mut tops = Vec::new();
    for n in 1..=max_n {
        tops.extend(all_permutations(n));
    }
    let mut records: Vec<((usize, String, String), ScanRecord)> = tops
        .par_iter()
        .flat_map_iter(|tau| {
            let started = Instant::now();
            let mut found = Vec::new();
            let below = build_interval(&Permutation::empty(), tau).expect("empty is below");
            // Rank sizes of [sigma, tau] read off the master order matrix.
            for sigma_idx in 0..below.size() {
                let sigma = below.element(sigma_idx);
                let mut sizes = vec![0usize; tau.len() - sigma.len() + 1];
                for z in 0..below.size() {
                    if below.leq_idx(sigma_idx, z) {
                        sizes[below.element(z).len() - sigma.len()] += 1;
                    }
                }
                if !crate::poset::is_unimodal(&sizes) {
                    let mut record = ScanRecord::new("unimodality", sigma, tau, "violated");
                    record.witness = Some(json!({ "rank_sizes": sizes }));
                    if timings {
                        record.wall_ms = Some(started.elapsed().as_millis() as u64);
                    }
                    found.push(((tau.len(), tau.to_string(), sigma.to_string()), record));
                }
            }
            found
        })
        .collect();
    records.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

/// Disagreements between the defining recursion and the decomposable
/// formulas over all intervals with top length bounded by `max_n`; expected
/// to stream nothing.
pub fn scan_mobius_agreement(max_n: usize, timings: bool) -> Result<Vec<ScanRecord>> {
    check_scan_bound(max_n)?;
    let mut tops = Vec::new();
    for n in 1..=max_n {
        tops.extend(all_permutations(n));
    }
    let mut records: Vec<((usize, String, String), ScanRecord)> = tops
        .par_iter()
        .flat_map_iter(|tau| mobius_disagreements_for_top(tau, timings))
        .collect();
    records.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

type Keyed = ((usize, String, String), ScanRecord);

fn mobius_disagreements_for_top(tau: &Permutation, timings: bool) -> Vec<Keyed> {
    let started = Instant::now();
    let mut found = Vec::new();
    let interval = build_interval(&Permutation::empty(), tau).expect("empty is below");
    let brute_table = interval.mobius_to_top();
    let direct_parts = tau
        .finest_decomposition(DecompKind::Direct)
        .map(|d| d.components.len())
        .unwrap_or(1);
    let skew_parts = tau
        .finest_decomposition(DecompKind::Skew)
        .map(|d| d.components.len())
        .unwrap_or(1);
    let mut cache = MobiusCache::new();
    let mismatch = |sigma: &Permutation,
                    method: &str,
                    value: &num_bigint::BigInt,
                    brute: &num_bigint::BigInt| {
        let mut record = ScanRecord::new("mobius-agreement", sigma, tau, "disagreement");
        record.witness = Some(json!({
            "method": method,
            "value": value.to_string(),
            "brute": brute.to_string(),
        }));
        if timings {
            record.wall_ms = Some(started.elapsed().as_millis() as u64);
        }
        ((tau.len(), tau.to_string(), sigma.to_string()), record)
    };
    for (idx, sigma) in interval.elements().iter().enumerate() {
        let brute = &brute_table[idx];
        if direct_parts > 1 {
            let terms =
                mobius::decomposable_terms_cached(sigma, tau, DecompKind::Direct, &mut cache)
                    .expect("sigma below tau");
            let value: num_bigint::BigInt = terms.into_iter().map(|t| t.contribution).sum();
            if value != *brute {
                found.push(mismatch(sigma, "decomposable", &value, brute));
            }
            if !sigma.is_empty() {
                let first_is_one = tau
                    .finest_decomposition(DecompKind::Direct)
                    .map(|d| d.components[0] == Permutation::one())
                    .unwrap_or(false);
                let formula = if first_is_one {
                    mobius::mobius_head_ones(sigma, tau)
                } else {
                    mobius::mobius_head_repeated(sigma, tau)
                };
                let name = if first_is_one {
                    "head-ones"
                } else {
                    "head-repeated"
                };
                match formula {
                    Ok(value) if value != *brute => {
                        found.push(mismatch(sigma, name, &value, brute))
                    }
                    _ => {}
                }
            }
        }
        if skew_parts > 1 {
            let value = mobius::mobius_skew_variant(sigma, tau).expect("sigma below tau");
            if value != *brute {
                found.push(mismatch(sigma, "skew", &value, brute));
            }
        }
    }
    found
}

// ---------------------------------------------------------------------------
// Pinned regression fixtures
// ---------------------------------------------------------------------------

const PINNED_1342_1342675: (&str, &str, &[&str], &[(&str, &str)]) = (
    "1342",
    "1342675",
    &[
        "1342", "21453", "12453", "13425", "231564", "132564", "123564", "134265", "134256",
        "1342675",
    ],
    &[
        ("21453", "1342"),
        ("12453", "1342"),
        ("13425", "1342"),
        ("231564", "21453"),
        ("132564", "21453"),
        ("231564", "12453"),
        ("132564", "12453"),
        ("123564", "12453"),
        ("134265", "13425"),
        ("134256", "13425"),
        ("1342675", "231564"),
        ("1342675", "132564"),
        ("1342675", "123564"),
        ("1342675", "134265"),
        ("1342675", "134256"),
    ],
);

const PINNED_123_356124: (&str, &str, &[&str], &[(&str, &str)]) = (
    "123",
    "356124",
    &[
        "123", "4123", "3124", "1342", "2341", "45123", "35124", "24513", "34512", "356124",
    ],
    &[
        ("4123", "123"),
        ("3124", "123"),
        ("1342", "123"),
        ("2341", "123"),
        ("45123", "4123"),
        ("35124", "4123"),
        ("35124", "3124"),
        ("24513", "1342"),
        ("24513", "2341"),
        ("34512", "2341"),
        ("356124", "45123"),
        ("356124", "35124"),
        ("356124", "24513"),
        ("356124", "34512"),
    ],
);

const PINNED_123_351624: (&str, &str, &[&str], &[(&str, &str)]) = (
    "123",
    "351624",
    &[
        "123", "1423", "4123", "3124", "1342", "2341", "2314", "41523", "31524", "35124", "24513",
        "24153", "34152", "351624",
    ],
    &[
        ("1423", "123"),
        ("4123", "123"),
        ("3124", "123"),
        ("1342", "123"),
        ("2341", "123"),
        ("2314", "123"),
        ("41523", "1423"),
        ("31524", "1423"),
        ("41523", "4123"),
        ("35124", "4123"),
        ("31524", "3124"),
        ("35124", "3124"),
        ("24513", "1342"),
        ("24153", "1342"),
        ("24513", "2341"),
        ("34152", "2341"),
        ("24153", "2314"),
        ("34152", "2314"),
        ("351624", "41523"),
        ("351624", "31524"),
        ("351624", "35124"),
        ("351624", "24513"),
        ("351624", "24153"),
        ("351624", "34152"),
    ],
);

#[derive(Clone, Debug, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureReport {
    pub results: Vec<FixtureResult>,
}

impl FixtureReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

fn fixture(
    name: &str,
    check: impl FnOnce() -> std::result::Result<String, String>,
) -> FixtureResult {
    match check() {
        Ok(detail) => FixtureResult {
            name: name.to_string(),
            passed: true,
            detail,
        },
        Err(detail) => FixtureResult {
            name: name.to_string(),
            passed: false,
            detail,
        },
    }
}

fn check_pinned_interval(
    data: (&str, &str, &[&str], &[(&str, &str)]),
) -> std::result::Result<String, String> {
    let (sigma, tau, elements, covers) = data;
    let sigma: Permutation = sigma.parse().map_err(|e| format!("{e}"))?;
    let tau: Permutation = tau.parse().map_err(|e| format!("{e}"))?;
    let interval = build_interval(&sigma, &tau).map_err(|e| format!("{e}"))?;
    let mut expected_elements: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
    expected_elements.sort();
    let mut built_elements: Vec<String> =
        interval.elements().iter().map(|e| e.to_string()).collect();
    built_elements.sort();
    if expected_elements != built_elements {
        return Err(format!(
            "element mismatch: expected {expected_elements:?}, built {built_elements:?}"
        ));
    }
    let mut expected_covers: Vec<(String, String)> = covers
        .iter()
        .map(|&(a, b)| (a.to_string(), b.to_string()))
        .collect();
    expected_covers.sort();
    let mut built_covers: Vec<(String, String)> = interval
        .covers()
        .iter()
        .map(|&(u, l)| {
            (
                interval.element(u).to_string(),
                interval.element(l).to_string(),
            )
        })
        .collect();
    built_covers.sort();
    if expected_covers != built_covers {
        return Err(format!(
            "cover mismatch: expected {expected_covers:?}, built {built_covers:?}"
        ));
    }
    Ok(format!(
        "{} elements, {} covers match",
        built_elements.len(),
        built_covers.len()
    ))
}

/// Rebuilds every pinned poset and worked chain from scratch and diffs
/// the result against the pinned data.
pub fn run_fixtures() -> FixtureReport {
    let mut results = Vec::new();

    results.push(fixture("interval [1342, 1342675]", || {
        check_pinned_interval(PINNED_1342_1342675)?;
        let interval = build_interval(&"1342".parse().unwrap(), &"1342675".parse().unwrap())
            .map_err(|e| e.to_string())?;
        let mut sizes: Vec<usize> = interval.open_components().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        if sizes != vec![3, 5] {
            return Err(format!("component sizes {sizes:?}, expected [3, 5]"));
        }
        Ok("matches; open components of sizes 3 and 5".into())
    }));

    results.push(fixture("interval [123, 356124]", || {
        check_pinned_interval(PINNED_123_356124)?;
        let interval = build_interval(&"123".parse().unwrap(), &"356124".parse().unwrap())
            .map_err(|e| e.to_string())?;
        // Dropping interior elements with vanishing Möbius value must leave
        // the open interval disconnected.
        let mu = interval.mobius_from_bottom();
        let survivors: Vec<usize> = interval
            .open_indices()
            .into_iter()
            .filter(|&i| !mu[i].is_zero())
            .collect();
        if survivors.is_empty() {
            return Err("no interior elements with nonzero Möbius value".into());
        }
        let components = components_within(&interval, &survivors);
        if components < 2 {
            return Err(format!(
                "only {components} component(s) after removing zero-Möbius elements"
            ));
        }
        Ok(format!(
            "matches; still {components} components after removing zero-Möbius elements"
        ))
    }));

    results.push(fixture("interval [123, 351624]", || {
        check_pinned_interval(PINNED_123_351624)?;
        let interval = build_interval(&"123".parse().unwrap(), &"351624".parse().unwrap())
            .map_err(|e| e.to_string())?;
        let sizes: Vec<usize> = interval.open_components().iter().map(|c| c.len()).collect();
        if sizes != vec![6, 6] {
            return Err(format!("component sizes {sizes:?}, expected [6, 6]"));
        }
        Ok("matches; two components of size 6".into())
    }));

    results.push(fixture("minimal-length twin of [1342, 1342675]", || {
        let small = build_interval(&"213".parse().unwrap(), &"254613".parse().unwrap())
            .map_err(|e| e.to_string())?;
        let pinned = build_interval(&"1342".parse().unwrap(), &"1342675".parse().unwrap())
            .map_err(|e| e.to_string())?;
        match small.isomorphism_to(&pinned) {
            Some(witness) if small.is_isomorphism_witness(&pinned, &witness) => {
                Ok("[213, 254613] is isomorphic to [1342, 1342675]".into())
            }
            Some(_) => Err("isomorphism witness failed verification".into()),
            None => Err("[213, 254613] is not isomorphic to [1342, 1342675]".into()),
        }
    }));

    results.push(fixture("descent chain 3212 \u{2192} 112 labels", || {
        let forest = Forest::chain(3);
        let chain: Vec<Word> = ["3212", "2212", "2112", "212", "112"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let labels = subword::position_labels(&forest, &chain).map_err(|e| e.to_string())?;
        let positions: Vec<usize> = labels.iter().map(|l| l.position).collect();
        if positions != vec![1, 2, 2, 1] {
            return Err(format!("labels {positions:?}, expected [1, 2, 2, 1]"));
        }
        Ok("labels (1, 2, 2, 1)".into())
    }));

    results.push(fixture("descent chain 2211 \u{2192} 2 labels", || {
        let forest = Forest::chain(2);
        let chain: Vec<Word> = ["2211", "1211", "211", "21", "2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let labels =
            subword::modified_position_labels(&forest, &chain).map_err(|e| e.to_string())?;
        let positions: Vec<usize> = labels.iter().map(|l| l.position).collect();
        if positions != vec![1, 1, 3, 4] || labels.iter().any(|l| l.checked) {
            return Err(format!("labels {labels:?}, expected plain [1, 1, 3, 4]"));
        }
        Ok("labels (1, 1, 3, 4), no modifications".into())
    }));

    results.push(fixture("three chains of [22, 222]", || {
        let forest = Forest::chain(2);
        let interval =
            subword::build_word_interval(&forest, &"22".parse().unwrap(), &"222".parse().unwrap())
                .map_err(|e| e.to_string())?;
        let elements: Vec<String> = interval.elements().iter().map(|x| x.to_string()).collect();
        if elements != vec!["22", "122", "212", "221", "222"] {
            return Err(format!("elements {elements:?}"));
        }
        let chains: Vec<Vec<Word>> = ["122", "212", "221"]
            .iter()
            .map(|mid| {
                vec![
                    "222".parse().unwrap(),
                    mid.parse().unwrap(),
                    "22".parse().unwrap(),
                ]
            })
            .collect();
        let mut modified = Vec::new();
        for chain in &chains {
            modified.push(
                subword::modified_position_labels(&forest, chain).map_err(|e| e.to_string())?,
            );
        }
        let expected = [
            vec![ChainLabel::plain(1), ChainLabel::plain(1)],
            vec![ChainLabel::plain(2), ChainLabel::checked(2)],
            vec![ChainLabel::plain(3), ChainLabel::checked(3)],
        ];
        if modified != expected {
            return Err(format!("modified labels {modified:?}"));
        }
        let increasing = modified
            .iter()
            .filter(|labels| labels.windows(2).all(|p| p[0] <= p[1]))
            .count();
        if increasing != 1 {
            return Err(format!("{increasing} weakly increasing chains, expected 1"));
        }
        Ok("labels (1,1), (2,2\u{030C}), (3,3\u{030C}); one increasing chain".into())
    }));

    results.push(fixture("worked example mu(12, 24136857)", || {
        let sigma: Permutation = "12".parse().unwrap();
        let tau: Permutation = "24136857".parse().unwrap();
        let interval = build_interval(&sigma, &tau).map_err(|e| e.to_string())?;
        if interval.size() != 62 || interval.covers().len() != 223 {
            return Err(format!(
                "{} elements and {} covers, expected 62 and 223",
                interval.size(),
                interval.covers().len()
            ));
        }
        let brute = mobius::mobius_brute(&sigma, &tau).map_err(|e| e.to_string())?;
        if brute != 12.into() {
            return Err(format!("brute value {brute}, expected 12"));
        }
        let terms = mobius::decomposable_terms(&sigma, &tau).map_err(|e| e.to_string())?;
        let mut by_blocks: Vec<(Vec<String>, String)> = terms
            .iter()
            .map(|t| {
                (
                    t.blocks.iter().map(|b| b.to_string()).collect(),
                    t.contribution.to_string(),
                )
            })
            .collect();
        by_blocks.sort();
        let expected: Vec<(Vec<String>, String)> = vec![
            (vec!["".into(), "12".into()], "0".into()),
            (vec!["1".into(), "1".into()], "9".into()),
            (vec!["12".into(), "".into()], "3".into()),
        ];
        if by_blocks != expected {
            return Err(format!("terms {by_blocks:?}"));
        }
        Ok("62 elements, 223 covers; contributions 9 + 0 + 3 = 12".into())
    }));

    FixtureReport { results }
}

/// Connected components of the Hasse graph induced on a subset of elements.
fn components_within(interval: &crate::Interval<Permutation>, members: &[usize]) -> usize {
    let member_set: HashSet<usize> = members.iter().copied().collect();
    let mut seen: HashSet<usize> = HashSet::new();
    let mut components = 0usize;
    for &start in members {
        if seen.contains(&start) {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            for &(up, lo) in interval.covers() {
                let next = if up == v {
                    lo
                } else if lo == v {
                    up
                } else {
                    continue;
                };
                if member_set.contains(&next) && seen.insert(next) {
                    stack.push(next);
                }
            }
        }
    }
    components
}
