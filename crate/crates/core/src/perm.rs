//! Permutations in one-line notation and the pattern-containment order.
//!
//! A [`Permutation`] is always kept in standard form: a sequence of length
//! `n` using each letter of `{1..n}` exactly once. The empty permutation is
//! a first-class value and lies below every permutation. Positions are
//! 1-based throughout.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A permutation of `{1..n}` in one-line notation, `n >= 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    letters: Vec<u8>,
}

impl Permutation {
    pub fn empty() -> Self {
        Permutation {
            letters: Vec::new(),
        }
    }

    /// The increasing permutation `12...k`, i.e. a direct sum of `k` copies of 1.
    pub fn increasing(k: usize) -> Self {
        Permutation {
            letters: (1..=k as u8).collect(),
        }
    }

    /// The decreasing permutation `k(k-1)...1`.
    pub fn decreasing(k: usize) -> Self {
        Permutation {
            letters: (1..=k as u8).rev().collect(),
        }
    }

    pub fn one() -> Self {
        Permutation { letters: vec![1] }
    }

    /// Builds a permutation from letters that must already be in standard
    /// form (a rearrangement of `1..n`).
    pub fn from_letters(letters: Vec<u8>) -> Result<Self> {
        let n = letters.len();
        if n > u8::MAX as usize {
            return Err(Error::InvalidInput(format!(
                "permutation length {n} exceeds the supported maximum {}",
                u8::MAX
            )));
        }
        let mut seen = vec![false; n + 1];
        for &x in &letters {
            if x == 0 || x as usize > n || seen[x as usize] {
                return Err(Error::InvalidInput(format!(
                    "letters are not a rearrangement of 1..{n}"
                )));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation { letters })
    }

    /// Standard form of a sequence of distinct values: the unique
    /// permutation whose letters appear in the same relative order.
    pub fn flatten(word: &[u32]) -> Result<Self> {
        let n = word.len();
        if n > u8::MAX as usize {
            return Err(Error::InvalidInput(format!(
                "word length {n} exceeds the supported maximum"
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| word[i]);
        for pair in order.windows(2) {
            if word[pair[0]] == word[pair[1]] {
                return Err(Error::InvalidInput(format!(
                    "duplicate entry {} in word",
                    word[pair[0]]
                )));
            }
        }
        let mut letters = vec![0u8; n];
        for (value, &i) in order.iter().enumerate() {
            letters[i] = value as u8 + 1;
        }
        Ok(Permutation { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Letter at a 1-based position.
    pub fn letter(&self, position: usize) -> u8 {
        self.letters[position - 1]
    }

    /// Pattern order: `self` occurs in `other`. Distinct from the derived
    /// `Ord`, which is the (length, lexicographic) output order.
    pub fn is_contained_in(&self, other: &Permutation) -> bool {
        other.contains(self)
    }

    /// True when `pattern` occurs in `self` as a classical pattern.
    pub fn contains(&self, pattern: &Permutation) -> bool {
        if pattern.len() > self.len() {
            return false;
        }
        if pattern.is_empty() {
            return true;
        }
        let mut chosen = Vec::with_capacity(pattern.len());
        self.search(pattern, 0, &mut chosen, &mut |_| false)
    }

    /// All occurrences of `pattern` in `self`, as sorted 1-based position
    /// sets in lexicographic order.
    pub fn occurrences_of(&self, pattern: &Permutation) -> Vec<Vec<usize>> {
        if pattern.len() > self.len() {
            return Vec::new();
        }
        if pattern.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(pattern.len());
        self.search(pattern, 0, &mut chosen, &mut |positions: &[usize]| {
            out.push(positions.iter().map(|p| p + 1).collect());
            true // keep searching
        });
        out
    }

    /// All embeddings of `pattern` in `self`, bijective with
    /// [`occurrences_of`](Self::occurrences_of) and in the same order.
    pub fn embeddings_of(&self, pattern: &Permutation) -> Vec<Embedding> {
        self.occurrences_of(pattern)
            .into_iter()
            .map(|occ| {
                let mut entries = vec![0u8; self.len()];
                for (&p, &letter) in occ.iter().zip(pattern.letters.iter()) {
                    entries[p - 1] = letter;
                }
                Embedding { entries }
            })
            .collect()
    }

    /// Backtracking occurrence search with prefix order-isomorphism pruning.
    /// `on_found` returns true to continue enumerating.
    fn search(
        &self,
        pattern: &Permutation,
        start: usize,
        chosen: &mut Vec<usize>,
        on_found: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        let depth = chosen.len();
        if depth == pattern.len() {
            return !on_found(chosen);
        }
        let remaining = pattern.len() - depth;
        let pat_letter = pattern.letters[depth];
        for j in start..=self.len().saturating_sub(remaining) {
            let candidate = self.letters[j];
            let consistent = chosen
                .iter()
                .enumerate()
                .all(|(m, &p)| (pattern.letters[m] < pat_letter) == (self.letters[p] < candidate));
            if consistent {
                chosen.push(j);
                let stop = self.search(pattern, j + 1, chosen, on_found);
                chosen.pop();
                if stop {
                    return true;
                }
            }
        }
        false
    }

    /// Deletes the letters at the given 1-based positions and flattens.
    pub fn delete(&self, positions: &[usize]) -> Result<Permutation> {
        let mut mask = 0u64;
        for &p in positions {
            if p == 0 || p > self.len() {
                return Err(Error::InvalidInput(format!(
                    "position {p} out of range 1..={}",
                    self.len()
                )));
            }
            mask |= 1 << (p - 1);
        }
        Ok(self.delete_mask(mask))
    }

    /// Deletion by position bitmask (bit `i` set deletes 1-based position `i+1`).
    pub fn delete_mask(&self, mask: u64) -> Permutation {
        let kept: Vec<u32> = self
            .letters
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) == 0)
            .map(|(_, &x)| x as u32)
            .collect();
        Permutation::flatten(&kept).expect("letters of a permutation are distinct")
    }

    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.len() as u8;
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().map(|&x| x + shift));
        Permutation { letters }
    }

    pub fn skew_sum(&self, other: &Permutation) -> Permutation {
        let shift = other.len() as u8;
        let mut letters: Vec<u8> = self.letters.iter().map(|&x| x + shift).collect();
        letters.extend_from_slice(&other.letters);
        Permutation { letters }
    }

    /// The finest splitting into indecomposable (direct) or skew
    /// indecomposable (skew) components.
    pub fn finest_decomposition(&self, kind: DecompKind) -> Result<Decomposition> {
        if self.is_empty() {
            return Err(Error::InvalidInput(
                "cannot decompose the empty permutation".into(),
            ));
        }
        let n = self.len();
        let mut components = Vec::new();
        let mut block_start = 0usize;
        let mut extreme = match kind {
            DecompKind::Direct => 0u8,
            DecompKind::Skew => u8::MAX,
        };
        for i in 0..n {
            let cut = match kind {
                DecompKind::Direct => {
                    extreme = extreme.max(self.letters[i]);
                    extreme as usize == i + 1
                }
                DecompKind::Skew => {
                    extreme = extreme.min(self.letters[i]);
                    extreme as usize == n - i
                }
            };
            if cut {
                let segment: Vec<u32> = self.letters[block_start..=i]
                    .iter()
                    .map(|&x| x as u32)
                    .collect();
                components.push(Permutation::flatten(&segment)?);
                block_start = i + 1;
            }
        }
        Ok(Decomposition { kind, components })
    }

    pub fn is_indecomposable(&self) -> bool {
        !self.is_empty()
            && self
                .finest_decomposition(DecompKind::Direct)
                .map(|d| d.components.len() == 1)
                .unwrap_or(false)
    }

    pub fn is_skew_indecomposable(&self) -> bool {
        !self.is_empty()
            && self
                .finest_decomposition(DecompKind::Skew)
                .map(|d| d.components.len() == 1)
                .unwrap_or(false)
    }

    pub fn complement(&self) -> Permutation {
        let n = self.len() as u8;
        Permutation {
            letters: self.letters.iter().map(|&x| n + 1 - x).collect(),
        }
    }

    pub fn reverse(&self) -> Permutation {
        Permutation {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    /// The maximal runs of `self`, partitioning positions left to right.
    /// Each run is a contiguous segment of letters of the form
    /// `a, a+1, ..., a+k` or `a, a-1, ..., a-k`, returned as a 1-based
    /// inclusive position interval.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        let mut start = 0usize;
        while start < n {
            let mut end = start;
            if start + 1 < n {
                let step = self.letters[start + 1] as i16 - self.letters[start] as i16;
                if step == 1 || step == -1 {
                    end += 1;
                    while end + 1 < n
                        && self.letters[end + 1] as i16 - self.letters[end] as i16 == step
                    {
                        end += 1;
                    }
                }
            }
            out.push((start + 1, end + 1));
            start = end + 1;
        }
        out
    }

    /// 1-based positions of the run containing `position`.
    pub fn run_containing(&self, position: usize) -> (usize, usize) {
        *self
            .runs()
            .iter()
            .find(|&&(lo, hi)| lo <= position && position <= hi)
            .expect("position in range")
    }

    /// Positions `i` such that deleting the letter at `i` from `self`
    /// leaves a permutation still containing `pattern`.
    pub fn removable_positions(&self, pattern: &Permutation) -> Result<Vec<usize>> {
        if !pattern.is_contained_in(self) {
            return Err(Error::NotComparable(pattern.to_string(), self.to_string()));
        }
        Ok((1..=self.len())
            .filter(|&i| self.delete_mask(1 << (i - 1)).contains(pattern))
            .collect())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&encode_entries(&self.letters))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = parse_entries(s)?;
        Permutation::from_letters(entries).map_err(|e| Error::Parse(s.to_string(), e.to_string()))
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by length, then lexicographically; a deterministic total order
/// used for output, unrelated to pattern containment.
impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len(), &self.letters).cmp(&(other.len(), &other.letters))
    }
}

/// One-line encoding: digits juxtaposed when every entry is below 10,
/// comma-separated otherwise. Zeros are legal (used by embeddings).
fn encode_entries(entries: &[u8]) -> String {
    if entries.iter().all(|&x| x <= 9) {
        entries.iter().map(|x| x.to_string()).collect()
    } else {
        entries
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn parse_entries(s: &str) -> Result<Vec<u8>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(',') {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<u8>()
                    .map_err(|e| Error::Parse(s.to_string(), e.to_string()))
            })
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(s.to_string(), format!("bad character {c:?}")))
            })
            .collect()
    }
}

/// An embedding of a pattern in a host permutation: the host's length with
/// the pattern's letters at the positions of one occurrence and zeros at the
/// deleted positions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    entries: Vec<u8>,
}

impl Embedding {
    pub fn from_entries(entries: Vec<u8>) -> Self {
        Embedding { entries }
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based positions carrying zeros, in increasing order.
    pub fn zero_set(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == 0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Zero set as a bitmask (bit `i` ↔ 1-based position `i+1`).
    pub fn zero_mask(&self) -> u64 {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == 0)
            .fold(0u64, |m, (i, _)| m | 1 << i)
    }

    /// The embedded pattern, recovered by dropping zeros.
    pub fn pattern(&self) -> Permutation {
        let kept: Vec<u32> = self
            .entries
            .iter()
            .filter(|&&x| x != 0)
            .map(|&x| x as u32)
            .collect();
        Permutation::flatten(&kept).expect("pattern letters are distinct")
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&encode_entries(&self.entries))
    }
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({self})")
    }
}

impl FromStr for Embedding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Embedding {
            entries: parse_entries(s)?,
        })
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum DecompKind {
    Direct,
    Skew,
}

/// The finest decomposition of a permutation into nonempty components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub kind: DecompKind,
    pub components: Vec<Permutation>,
}

impl Decomposition {
    /// Recombines the components; inverse of `finest_decomposition`.
    pub fn recompose(&self) -> Permutation {
        recombine(&self.components, self.kind)
    }
}

/// Direct or skew sum of a slice of permutations; empty slice gives ∅.
pub fn recombine(components: &[Permutation], kind: DecompKind) -> Permutation {
    components
        .iter()
        .fold(Permutation::empty(), |acc, c| match kind {
            DecompKind::Direct => acc.direct_sum(c),
            DecompKind::Skew => acc.skew_sum(c),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(Permutation::flatten(&[4, 1, 6, 3, 5]).unwrap(), p("31524"));
        assert_eq!(Permutation::flatten(&[1, 2, 3]).unwrap(), p("123"));
        assert_eq!(Permutation::flatten(&[4, 6, 3]).unwrap(), p("231"));
        assert_eq!(Permutation::flatten(&[]).unwrap(), Permutation::empty());
    }

    #[test]
    fn flatten_rejects_duplicates() {
        assert!(Permutation::flatten(&[2, 7, 2]).is_err());
    }

    #[test]
    fn flatten_is_idempotent() {
        for word in [&[9u32, 2, 11, 4][..], &[1, 2][..], &[5][..]] {
            let once = Permutation::flatten(word).unwrap();
            let letters: Vec<u32> = once.letters().iter().map(|&x| x as u32).collect();
            assert_eq!(Permutation::flatten(&letters).unwrap(), once);
        }
    }

    #[test]
    fn containment_examples() {
        assert!(p("1342675").contains(&p("1342")));
        let sigma = p("2413");
        assert!(sigma.contains(&sigma));
        assert!(!p("3142").contains(&p("2413")));
        assert!(p("416325").contains(&p("231")));
        // The empty permutation lies below everything.
        assert!(p("1").contains(&Permutation::empty()));
        assert!(Permutation::empty().contains(&Permutation::empty()));
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(
            p("416325").occurrences_of(&p("231")),
            vec![vec![1, 3, 4], vec![1, 3, 5]]
        );
        assert_eq!(p("21").occurrences_of(&p("1")), vec![vec![1], vec![2]]);
        assert!(p("123").occurrences_of(&p("321")).is_empty());
    }

    #[test]
    fn embedding_examples() {
        let embeddings = p("21453").embeddings_of(&p("213"));
        let shown: Vec<String> = embeddings.iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, vec!["21300", "21030", "21003"]);

        let self_embedding = p("2413").embeddings_of(&p("2413"));
        assert_eq!(self_embedding.len(), 1);
        assert!(self_embedding[0].zero_set().is_empty());

        let five = p("1342675").embeddings_of(&p("1342"));
        let shown: Vec<String> = five.iter().map(|e| e.to_string()).collect();
        assert_eq!(
            shown,
            vec!["1342000", "1000342", "0100342", "0010342", "0001342"]
        );
    }

    #[test]
    fn embeddings_match_occurrences() {
        let tau = p("416325");
        let sigma = p("231");
        for (occ, emb) in tau
            .occurrences_of(&sigma)
            .iter()
            .zip(tau.embeddings_of(&sigma))
        {
            assert_eq!(emb.pattern(), sigma);
            let nonzero: Vec<usize> = (1..=emb.len())
                .filter(|&i| emb.entries()[i - 1] != 0)
                .collect();
            assert_eq!(&nonzero, occ);
            assert_eq!(emb.zero_set().len(), tau.len() - sigma.len());
        }
    }

    #[test]
    fn delete_examples() {
        assert_eq!(p("21453").delete(&[4, 5]).unwrap(), p("213"));
        // The descent 21453 -> 2134 -> 213 removes position 5, then the
        // letter 4 of the result.
        assert_eq!(p("21453").delete(&[5]).unwrap(), p("2134"));
        assert_eq!(p("2134").delete(&[3]).unwrap(), p("213"));
        assert_eq!(p("21453").delete(&[]).unwrap(), p("21453"));
        assert!(p("21453").delete(&[6]).is_err());
    }

    #[test]
    fn sum_examples() {
        assert_eq!(p("213").direct_sum(&p("3142")), p("2136475"));
        assert_eq!(p("213").skew_sum(&p("3142")), p("6573142"));
        assert_eq!(Permutation::empty().direct_sum(&p("312")), p("312"));
        assert_eq!(p("312").skew_sum(&Permutation::empty()), p("312"));
    }

    #[test]
    fn finest_decomposition_examples() {
        let d = p("32154687")
            .finest_decomposition(DecompKind::Direct)
            .unwrap();
        assert_eq!(d.components, vec![p("321"), p("21"), p("1"), p("21")]);
        assert_eq!(d.recompose(), p("32154687"));

        let ind = p("2413").finest_decomposition(DecompKind::Direct).unwrap();
        assert_eq!(ind.components, vec![p("2413")]);

        let skew = p("4321").finest_decomposition(DecompKind::Skew).unwrap();
        assert_eq!(skew.components, vec![p("1"), p("1"), p("1"), p("1")]);
        assert_eq!(skew.recompose(), p("4321"));

        assert!(Permutation::empty()
            .finest_decomposition(DecompKind::Direct)
            .is_err());
    }

    // Brute-force oracle: a permutation splits as a direct (skew) sum at cut
    // position c iff every letter left of the cut is smaller (larger) than
    // every letter right of it.
    fn splits_at(perm: &Permutation, c: usize, kind: DecompKind) -> bool {
        let letters = perm.letters();
        letters[..c].iter().all(|&a| {
            letters[c..].iter().all(|&b| match kind {
                DecompKind::Direct => a < b,
                DecompKind::Skew => a > b,
            })
        })
    }

    #[test]
    fn finest_decomposition_matches_cut_oracle() {
        for n in 1..=6 {
            for perm in crate::pattern::all_permutations(n) {
                for kind in [DecompKind::Direct, DecompKind::Skew] {
                    let d = perm.finest_decomposition(kind).unwrap();
                    assert_eq!(d.recompose(), perm);
                    let mut cuts = vec![0usize];
                    let mut acc = 0;
                    for comp in &d.components {
                        assert!(!comp.is_empty());
                        acc += comp.len();
                        cuts.push(acc);
                    }
                    // Components cut exactly at the valid split points.
                    for c in 1..n {
                        assert_eq!(splits_at(&perm, c, kind), cuts.contains(&c));
                    }
                    // Each component is itself indecomposable of the kind.
                    for comp in &d.components {
                        let sub = comp.finest_decomposition(kind).unwrap();
                        assert_eq!(sub.components.len(), 1);
                    }
                }
            }
        }
    }

    // Doubling an indecomposable permutation yields exactly two occurrences,
    // the two halves; likewise for the skew case.
    #[test]
    fn doubled_patterns_have_exactly_two_occurrences() {
        for n in 2..=4 {
            for sigma in crate::pattern::all_permutations(n) {
                if sigma.is_indecomposable() {
                    let doubled = sigma.direct_sum(&sigma);
                    let occurrences = doubled.occurrences_of(&sigma);
                    assert_eq!(occurrences.len(), 2, "{sigma} in {doubled}");
                    assert_eq!(occurrences[0], (1..=n).collect::<Vec<_>>());
                    assert_eq!(occurrences[1], (n + 1..=2 * n).collect::<Vec<_>>());
                }
                if sigma.is_skew_indecomposable() {
                    let doubled = sigma.skew_sum(&sigma);
                    assert_eq!(doubled.occurrences_of(&sigma).len(), 2, "{sigma} skew");
                }
            }
        }
    }

    // Containment matches nonempty embedding sets and is preserved by the
    // reverse and complement symmetries, over every pair of lengths <= 5.
    #[test]
    fn containment_embeddings_and_symmetries_exhaustive() {
        let mut all = Vec::new();
        for n in 0..=5 {
            all.extend(crate::pattern::all_permutations(n));
        }
        for sigma in &all {
            for tau in &all {
                let contained = sigma.is_contained_in(tau);
                assert_eq!(contained, !tau.embeddings_of(sigma).is_empty());
                assert_eq!(
                    contained,
                    sigma.reverse().is_contained_in(&tau.reverse()),
                    "{sigma} {tau} reverse"
                );
                assert_eq!(
                    contained,
                    sigma.complement().is_contained_in(&tau.complement()),
                    "{sigma} {tau} complement"
                );
            }
        }
    }

    #[test]
    fn every_permutation_is_indecomposable_or_skew_indecomposable() {
        for n in 1..=7 {
            for perm in crate::pattern::all_permutations(n) {
                assert!(
                    perm.is_indecomposable() || perm.is_skew_indecomposable(),
                    "{perm}"
                );
            }
        }
    }

    #[test]
    fn complement_and_reverse() {
        assert_eq!(p("132").complement(), p("312"));
        assert_eq!(p("213").reverse(), p("312"));
        for perm in crate::pattern::all_permutations(5) {
            assert_eq!(perm.complement().complement(), perm);
            assert_eq!(perm.reverse().reverse(), perm);
        }
    }

    #[test]
    fn run_examples() {
        assert_eq!(p("543126").runs(), vec![(1, 3), (4, 5), (6, 6)]);
        assert_eq!(p("1").runs(), vec![(1, 1)]);
        assert_eq!(p("2134").runs(), vec![(1, 2), (3, 4)]);
        assert_eq!(p("51234").runs(), vec![(1, 1), (2, 5)]);
    }

    // Deleting positions i and j gives the same permutation iff the
    // positions lie in the same run. Exhaustive in both directions.
    #[test]
    fn runs_agree_with_deletion_equivalence() {
        for n in 1..=7 {
            for perm in crate::pattern::all_permutations(n) {
                let runs = perm.runs();
                let run_of = |pos: usize| {
                    runs.iter()
                        .position(|&(lo, hi)| lo <= pos && pos <= hi)
                        .unwrap()
                };
                for i in 1..=n {
                    for j in 1..=n {
                        let same_delete = perm.delete(&[i]).unwrap() == perm.delete(&[j]).unwrap();
                        assert_eq!(same_delete, run_of(i) == run_of(j), "{perm} {i} {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn removable_position_examples() {
        assert_eq!(
            p("51234").removable_positions(&p("21")).unwrap(),
            vec![2, 3, 4, 5]
        );
        let sigma = p("2413");
        assert!(sigma.removable_positions(&sigma).unwrap().is_empty());
        assert_eq!(
            p("2134").removable_positions(&p("12")).unwrap(),
            vec![1, 2, 3, 4]
        );
        assert!(p("123").removable_positions(&p("321")).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["", "1", "21453", "123456789"] {
            assert_eq!(p(s).to_string(), s);
        }
        let big: Permutation = "10,2,3,4,5,6,7,8,9,1".parse().unwrap();
        assert_eq!(big.to_string(), "10,2,3,4,5,6,7,8,9,1");
        assert!("120".parse::<Permutation>().is_err());
        assert!("11".parse::<Permutation>().is_err());
        assert!("1,x".parse::<Permutation>().is_err());
    }
}
