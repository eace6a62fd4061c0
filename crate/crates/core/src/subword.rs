//! Generalized subword order over a rooted-forest alphabet.
//!
//! Words are sequences over the nonzero elements of `P0`, the forest with a
//! global bottom 0 adjoined. `u <= w` when some subword of `w` dominates `u`
//! letterwise in the forest order. Rank is the sum of letter ranks. With the
//! positive integers as a chain alphabet this is exactly pattern containment
//! restricted to layered permutations, keyed by compositions of layer
//! lengths.
//!
//! The shellability machinery labels each cover of a maximal chain by the
//! position of the host word that is decreased or deleted, under canonical
//! bookkeeping (deletions take the leftmost letter of a block of equal
//! minimal letters). A targeted modification marks the second label of a
//! decrease-then-delete pair acting past the head of a block, and the
//! certifier checks that each rooted subinterval then has a unique weakly
//! increasing maximal chain that is also lexicographically first.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;

use crate::perm::{DecompKind, Permutation};
use crate::poset::Interval;
use crate::{Error, Result};

/// A rooted forest: every node covers exactly one element, either another
/// node or the adjoined bottom 0. Node ids are `1..=n`; parent 0 marks a
/// root.
#[derive(Clone, Debug)]
pub struct Forest {
    parent: Vec<u32>,
    rank: Vec<u32>,
}

impl Forest {
    /// The chain `1 < 2 < ... < max`: the positive integers truncated.
    pub fn chain(max: u32) -> Forest {
        let parent: Vec<u32> = (0..max).collect();
        let rank: Vec<u32> = (1..=max).collect();
        Forest { parent, rank }
    }

    /// Builds a forest from `(id, parent)` pairs; ids must be exactly
    /// `1..=n` and parents must form no cycle.
    pub fn from_nodes(nodes: &[(u32, u32)]) -> Result<Forest> {
        let n = nodes.len();
        let mut parent = vec![u32::MAX; n];
        for &(id, par) in nodes {
            if id == 0 || id as usize > n {
                return Err(Error::InvalidInput(format!(
                    "node ids must be 1..={n}, got {id}"
                )));
            }
            if parent[id as usize - 1] != u32::MAX {
                return Err(Error::InvalidInput(format!("duplicate node id {id}")));
            }
            if par as usize > n {
                return Err(Error::InvalidInput(format!(
                    "parent {par} of node {id} is not a node"
                )));
            }
            parent[id as usize - 1] = par;
        }
        let mut rank = vec![0u32; n];
        for id in 1..=n as u32 {
            let mut depth = 0u32;
            let mut at = id;
            loop {
                depth += 1;
                if depth as usize > n + 1 {
                    return Err(Error::InvalidInput("parent links contain a cycle".into()));
                }
                let up = parent[at as usize - 1];
                if up == 0 {
                    break;
                }
                at = up;
            }
            rank[id as usize - 1] = depth;
        }
        Ok(Forest { parent, rank })
    }

    pub fn from_json(text: &str) -> Result<Forest> {
        #[derive(Deserialize)]
        struct NodeSpec {
            id: u32,
            parent: u32,
        }
        #[derive(Deserialize)]
        struct ForestSpec {
            nodes: Vec<NodeSpec>,
        }
        let spec: ForestSpec = serde_json::from_str(text)?;
        Forest::from_nodes(
            &spec
                .nodes
                .iter()
                .map(|n| (n.id, n.parent))
                .collect::<Vec<_>>(),
        )
    }

    pub fn node_count(&self) -> u32 {
        self.parent.len() as u32
    }

    pub fn contains_id(&self, id: u32) -> bool {
        id >= 1 && id <= self.node_count()
    }

    /// Parent in `P0`; 0 for roots.
    pub fn parent(&self, id: u32) -> u32 {
        self.parent[id as usize - 1]
    }

    /// Rank in `P0`: 0 for the bottom, depth otherwise.
    pub fn rank(&self, id: u32) -> u32 {
        if id == 0 {
            0
        } else {
            self.rank[id as usize - 1]
        }
    }

    pub fn is_minimal(&self, id: u32) -> bool {
        id != 0 && self.parent(id) == 0
    }

    /// Order of `P0`: `a <= b` when `a` is an ancestor of `b` or the bottom.
    pub fn leq0(&self, a: u32, b: u32) -> bool {
        if a == 0 {
            return true;
        }
        let mut at = b;
        while at != 0 {
            if at == a {
                return true;
            }
            at = self.parent(at);
        }
        false
    }

    fn check_word(&self, word: &Word) -> Result<()> {
        for &letter in word.letters() {
            if !self.contains_id(letter) {
                return Err(Error::AlphabetMismatch(letter));
            }
        }
        Ok(())
    }
}

/// A word over the nonzero alphabet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Result<Word> {
        if letters.contains(&0) {
            return Err(Error::InvalidInput("words cannot contain 0".into()));
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    /// Number of letters.
    pub fn parts(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Letter at a 1-based position.
    pub fn letter(&self, position: usize) -> u32 {
        self.0[position - 1]
    }

    /// Sum of the letter ranks.
    pub fn rank_in(&self, forest: &Forest) -> u32 {
        self.0.iter().map(|&x| forest.rank(x)).sum()
    }

    pub fn delete_position(&self, position: usize) -> Word {
        let mut letters = self.0.clone();
        letters.remove(position - 1);
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&encode_ids(&self.0))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Word::new(parse_ids(s)?)
    }
}

/// A word padded with zeros to the length of a host word: an embedding, or
/// the running bookkeeping of a chain.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PaddedWord(Vec<u32>);

impl PaddedWord {
    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based entry.
    pub fn entry(&self, position: usize) -> u32 {
        self.0[position - 1]
    }

    /// The word left after dropping zeros.
    pub fn word(&self) -> Word {
        Word(self.0.iter().copied().filter(|&x| x != 0).collect())
    }

    /// 1-based positions of the nonzero entries, in order.
    pub fn nonzero_positions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

impl fmt::Display for PaddedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&encode_ids(&self.0))
    }
}

impl fmt::Debug for PaddedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PaddedWord({self})")
    }
}

impl FromStr for PaddedWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<PaddedWord> {
        Ok(PaddedWord(parse_ids(s)?))
    }
}

fn encode_ids(ids: &[u32]) -> String {
    if ids.iter().all(|&x| x <= 9) {
        ids.iter().map(|x| x.to_string()).collect()
    } else {
        ids.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn parse_ids(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(',') {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(s.to_string(), e.to_string()))
            })
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::Parse(s.to_string(), format!("bad character {c:?}")))
            })
            .collect()
    }
}

/// Generalized subword order: some subword of `w` dominates `u` letterwise.
pub fn word_leq(forest: &Forest, u: &Word, w: &Word) -> Result<bool> {
    forest.check_word(u)?;
    forest.check_word(w)?;
    // Greedy leftmost matching is complete: any witness can be pushed left.
    let mut matched = 0usize;
    for &host in w.letters() {
        if matched < u.parts() && forest.leq0(u.letters()[matched], host) {
            matched += 1;
        }
    }
    Ok(matched == u.parts())
}

/// All embeddings of `u` in `w`, ordered lexicographically by the position
/// set used.
pub fn word_embeddings(forest: &Forest, u: &Word, w: &Word) -> Result<Vec<PaddedWord>> {
    embeddings_in_padded(forest, u, &PaddedWord(w.letters().to_vec()))
}

/// Embeddings into a zero-padded host; zeros of the host can only receive
/// zeros, so these are the embeddings into the host's word spread over the
/// host's support.
pub fn embeddings_in_padded(
    forest: &Forest,
    u: &Word,
    host: &PaddedWord,
) -> Result<Vec<PaddedWord>> {
    forest.check_word(u)?;
    forest.check_word(&host.word())?;
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(u.parts());
    fn dfs(
        forest: &Forest,
        u: &Word,
        host: &PaddedWord,
        start: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<PaddedWord>,
    ) {
        let depth = chosen.len();
        if depth == u.parts() {
            let mut entries = vec![0u32; host.len()];
            for (j, &pos) in chosen.iter().enumerate() {
                entries[pos] = u.letters()[j];
            }
            out.push(PaddedWord(entries));
            return;
        }
        let remaining = u.parts() - depth;
        for pos in start..=host.len().saturating_sub(remaining) {
            let target = host.entries()[pos];
            if target != 0 && forest.leq0(u.letters()[depth], target) {
                chosen.push(pos);
                dfs(forest, u, host, pos + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    dfs(forest, u, host, 0, &mut chosen, &mut out);
    if out.is_empty() && !u.is_empty() {
        return Err(Error::NotComparable(u.to_string(), host.to_string()));
    }
    Ok(out)
}

/// The rightmost embedding: every matched letter sits weakly further right
/// than in any other embedding.
pub fn rightmost_embedding(forest: &Forest, u: &Word, w: &Word) -> Result<PaddedWord> {
    rightmost_in_padded(forest, u, &PaddedWord(w.letters().to_vec()))
}

pub fn rightmost_in_padded(forest: &Forest, u: &Word, host: &PaddedWord) -> Result<PaddedWord> {
    if !word_leq(forest, u, &host.word())? {
        return Err(Error::NotComparable(u.to_string(), host.to_string()));
    }
    let mut entries = vec![0u32; host.len()];
    let mut j = u.parts();
    for pos in (1..=host.len()).rev() {
        let target = host.entry(pos);
        if j > 0 && target != 0 && forest.leq0(u.letters()[j - 1], target) {
            entries[pos - 1] = u.letters()[j - 1];
            j -= 1;
        }
    }
    debug_assert_eq!(j, 0);
    Ok(PaddedWord(entries))
}

/// Every word below `w`, by independently lowering each letter through its
/// ancestor path (or to 0) and dropping zeros.
pub fn elements_below_word(forest: &Forest, w: &Word) -> Result<Vec<Word>> {
    forest.check_word(w)?;
    let mut product: u64 = 1;
    for &letter in w.letters() {
        product = product.saturating_mul(forest.rank(letter) as u64 + 1);
        if product > 5_000_000 {
            return Err(Error::InvalidInput(format!(
                "word {w} is too large for exhaustive enumeration"
            )));
        }
    }
    let downsets: Vec<Vec<u32>> = w
        .letters()
        .iter()
        .map(|&letter| {
            let mut path = vec![0u32];
            let mut at = letter;
            while at != 0 {
                path.push(at);
                at = forest.parent(at);
            }
            path
        })
        .collect();
    let mut seen: HashSet<Word> = HashSet::new();
    let mut current: Vec<u32> = Vec::with_capacity(w.parts());
    fn walk(downsets: &[Vec<u32>], at: usize, current: &mut Vec<u32>, seen: &mut HashSet<Word>) {
        if at == downsets.len() {
            seen.insert(Word(current.iter().copied().filter(|&x| x != 0).collect()));
            return;
        }
        for &choice in &downsets[at] {
            current.push(choice);
            walk(downsets, at + 1, current, seen);
            current.pop();
        }
    }
    walk(&downsets, 0, &mut current, &mut seen);
    let mut out: Vec<Word> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// The closed interval `[u, w]` in the word poset, graded by rank.
pub fn build_word_interval(forest: &Forest, u: &Word, w: &Word) -> Result<Interval<Word>> {
    if !word_leq(forest, u, w)? {
        return Err(Error::NotComparable(u.to_string(), w.to_string()));
    }
    let elements: Vec<Word> = elements_below_word(forest, w)?
        .into_iter()
        .filter(|v| word_leq(forest, u, v).unwrap_or(false))
        .collect();
    Ok(Interval::from_elements(
        elements,
        |v| v.rank_in(forest) as usize,
        |a, b| word_leq(forest, a, b).expect("letters validated"),
    ))
}

/// Direct test for a disconnected open interval of rank at least 3: `u` is
/// `w` with one member of an adjacent equal pair deleted.
pub fn is_disconnected_word(forest: &Forest, u: &Word, w: &Word) -> Result<bool> {
    if !word_leq(forest, u, w)? {
        return Err(Error::NotComparable(u.to_string(), w.to_string()));
    }
    let rank_gap = w.rank_in(forest) - u.rank_in(forest);
    if rank_gap < 3 {
        return Err(Error::RankTooSmall(rank_gap as usize, 3));
    }
    Ok(adjacent_pair_deletion(u, w))
}

fn adjacent_pair_deletion(u: &Word, w: &Word) -> bool {
    (2..=w.parts()).any(|i| w.letter(i - 1) == w.letter(i) && &w.delete_position(i) == u)
}

/// The embedding form of the same condition: some embedding of `u` matches
/// `w` exactly except for one zero whose left neighbor in `w` repeats the
/// zeroed letter.
pub fn disconnected_by_embedding(forest: &Forest, u: &Word, w: &Word) -> Result<bool> {
    let embeddings = word_embeddings(forest, u, w)?;
    Ok(embeddings.iter().any(|eta| {
        (2..=w.parts()).any(|i| {
            eta.entry(i) == 0
                && w.letter(i - 1) == w.letter(i)
                && (1..=w.parts()).all(|j| j == i || eta.entry(j) == w.letter(j))
        })
    }))
}

/// Witness for a non-trivial disconnected subinterval inside `[u, w]`.
#[derive(Clone, Debug)]
pub struct SubintervalWitness {
    pub embedding: PaddedWord,
    pub letter: u32,
    pub i: usize,
    pub j: usize,
    pub lower: Word,
    pub upper: Word,
}

/// Searches for an embedding, a letter of rank at least 3, and a zero gap
/// witnessing a disconnected subinterval of rank at least 3.
pub fn has_disconnected_subinterval(
    forest: &Forest,
    u: &Word,
    w: &Word,
) -> Result<Option<SubintervalWitness>> {
    forest.check_word(u)?;
    forest.check_word(w)?;
    if !word_leq(forest, u, w)? {
        return Ok(None);
    }
    let embeddings = word_embeddings(forest, u, w)?;
    for eta in &embeddings {
        for a in 1..=forest.node_count() {
            if forest.rank(a) < 3 {
                continue;
            }
            for i in 1..=w.parts() {
                if !(forest.leq0(a, w.letter(i)) && forest.leq0(eta.entry(i), a)) {
                    continue;
                }
                for j in i + 1..=w.parts() {
                    if (i + 1..=j).all(|k| eta.entry(k) == 0) && forest.leq0(a, w.letter(j)) {
                        let mut lower = eta.0.clone();
                        lower[i - 1] = a;
                        let mut upper = lower.clone();
                        upper[j - 1] = a;
                        return Ok(Some(SubintervalWitness {
                            embedding: eta.clone(),
                            letter: a,
                            i,
                            j,
                            lower: PaddedWord(lower).word(),
                            upper: PaddedWord(upper).word(),
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// One edge label of a maximal chain: the 1-based position of the host word
/// that the cover decreases or deletes, optionally checked. A checked label
/// sits strictly between the plain labels `k-1` and `k`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChainLabel {
    pub position: usize,
    pub checked: bool,
}

impl ChainLabel {
    pub fn plain(position: usize) -> ChainLabel {
        ChainLabel {
            position,
            checked: false,
        }
    }

    pub fn checked(position: usize) -> ChainLabel {
        ChainLabel {
            position,
            checked: true,
        }
    }
}

impl PartialOrd for ChainLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ChainLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        // checked labels precede the plain label at the same position
        (self.position, !self.checked as u8).cmp(&(other.position, !other.checked as u8))
    }
}

impl fmt::Display for ChainLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.position)?;
        if self.checked {
            write!(f, "\u{030C}")?;
        }
        Ok(())
    }
}

/// A maximal chain with its canonical embeddings in the top element and the
/// per-cover labels.
#[derive(Clone, Debug)]
pub struct LabeledChain {
    pub elements: Vec<Word>,
    pub embeddings: Vec<PaddedWord>,
    pub labels: Vec<ChainLabel>,
}

impl LabeledChain {
    pub fn modified_labels(&self, forest: &Forest) -> Vec<ChainLabel> {
        let mut labels = self.labels.clone();
        for k in 0..labels.len().saturating_sub(1) {
            let position = labels[k].position;
            if labels[k + 1].position != position {
                continue;
            }
            let before = &self.embeddings[k];
            if forest.rank(before.entry(position)) != 2 {
                continue;
            }
            // The cover pair decreases a rank-2 letter to its minimal child
            // and then deletes it. Find the letter's index inside its block
            // of equal letters in the upper element, zeros dropped.
            let word = before.word();
            let word_pos = before
                .nonzero_positions()
                .iter()
                .position(|&p| p == position)
                .expect("tracked position is nonzero before the decrease")
                + 1;
            let letter = word.letter(word_pos);
            let mut block_start = word_pos;
            while block_start > 1 && word.letter(block_start - 1) == letter {
                block_start -= 1;
            }
            if word_pos - block_start + 1 > 1 {
                labels[k + 1].checked = true;
            }
        }
        labels
    }
}

/// Labels a saturated chain, read top to bottom, by the canonical
/// bookkeeping: each cover decreases one tracked position of the top word
/// one step down the forest (to zero when the letter is minimal), and a
/// deletion always removes the leftmost letter of its block of equal
/// letters.
pub fn label_chain(forest: &Forest, elements_top_down: &[Word]) -> Result<LabeledChain> {
    if elements_top_down.is_empty() {
        return Err(Error::NonMaximalChain("chain is empty".into()));
    }
    for word in elements_top_down {
        forest.check_word(word)?;
    }
    let top = &elements_top_down[0];
    let mut embedding = PaddedWord(top.letters().to_vec());
    let mut embeddings = vec![embedding.clone()];
    let mut labels = Vec::new();
    for step in elements_top_down.windows(2) {
        let (x, y) = (&step[0], &step[1]);
        let word_pos = cover_word_position(forest, x, y)?;
        let tracked = embedding.nonzero_positions()[word_pos - 1];
        embedding.0[tracked - 1] = forest.parent(embedding.0[tracked - 1]);
        embeddings.push(embedding.clone());
        labels.push(ChainLabel::plain(tracked));
    }
    Ok(LabeledChain {
        elements: elements_top_down.to_vec(),
        embeddings,
        labels,
    })
}

/// The 1-based position of `x` acted on by the cover `x -> y`: the unique
/// decreased position, or the leftmost deletion position yielding `y`.
fn cover_word_position(forest: &Forest, x: &Word, y: &Word) -> Result<usize> {
    let not_cover = || Error::NonMaximalChain(format!("{x} -> {y} is not a covering step"));
    if x.parts() == y.parts() {
        let mut difference = None;
        for pos in 1..=x.parts() {
            if x.letter(pos) != y.letter(pos) {
                if difference.is_some() {
                    return Err(not_cover());
                }
                difference = Some(pos);
            }
        }
        let pos = difference.ok_or_else(not_cover)?;
        if forest.parent(x.letter(pos)) != y.letter(pos) || y.letter(pos) == 0 {
            return Err(not_cover());
        }
        Ok(pos)
    } else if x.parts() == y.parts() + 1 {
        let deletion = (1..=x.parts())
            .find(|&pos| forest.is_minimal(x.letter(pos)) && &x.delete_position(pos) == y)
            .ok_or_else(not_cover)?;
        Ok(deletion)
    } else {
        Err(not_cover())
    }
}

/// Unmodified position labels of a saturated top-to-bottom chain.
pub fn position_labels(forest: &Forest, elements_top_down: &[Word]) -> Result<Vec<ChainLabel>> {
    Ok(label_chain(forest, elements_top_down)?.labels)
}

/// Position labels after the decrease-then-delete modification.
pub fn modified_position_labels(
    forest: &Forest,
    elements_top_down: &[Word],
) -> Result<Vec<ChainLabel>> {
    let chain = label_chain(forest, elements_top_down)?;
    Ok(chain.modified_labels(forest))
}

fn weakly_increasing(labels: &[ChainLabel]) -> bool {
    labels.windows(2).all(|pair| pair[0] <= pair[1])
}

/// Outcome of the dual CL-shellability certificate.
#[derive(Clone, Debug)]
pub enum CertifyOutcome {
    Certified,
    /// A non-trivial disconnected subinterval rules shellability out.
    Refuted {
        witness: SubintervalWitness,
    },
    /// A rooted subinterval failed the unique-increasing-chain check. Not
    /// expected for rooted-forest alphabets; kept as a diagnostic.
    LabelCheckFailed {
        lower: Word,
        upper: Word,
    },
}

impl CertifyOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, CertifyOutcome::Certified)
    }
}

/// Certifies `[u, w]` dual CL-shellable, or refutes via a disconnected
/// subinterval. Every subinterval pair is checked under the modified
/// position labeling for exactly one weakly increasing maximal chain,
/// lexicographically first; support reduction lets each pair stand for all
/// of its rooted occurrences.
pub fn certify_dual_cl(forest: &Forest, u: &Word, w: &Word) -> Result<CertifyOutcome> {
    if !word_leq(forest, u, w)? {
        return Err(Error::NotComparable(u.to_string(), w.to_string()));
    }
    if let Some(witness) = has_disconnected_subinterval(forest, u, w)? {
        return Ok(CertifyOutcome::Refuted { witness });
    }
    let interval = build_word_interval(forest, u, w)?;
    let n = interval.size();
    let mut pairs = Vec::new();
    for lower in 0..n {
        for upper in 0..n {
            if interval.leq_idx(lower, upper)
                && interval.rank_of(upper) >= interval.rank_of(lower) + 2
            {
                pairs.push((lower, upper));
            }
        }
    }
    let failures: Vec<Result<(usize, usize)>> = pairs
        .into_par_iter()
        .filter_map(
            |(lower, upper)| match check_pair_labeling(forest, &interval, lower, upper) {
                Ok(true) => None,
                Ok(false) => Some(Ok((lower, upper))),
                Err(e) => Some(Err(e)),
            },
        )
        .collect();
    let mut found = Vec::new();
    for f in failures {
        found.push(f?);
    }
    found.sort_unstable();
    Ok(match found.first() {
        Some(&(lower, upper)) => CertifyOutcome::LabelCheckFailed {
            lower: interval.element(lower).clone(),
            upper: interval.element(upper).clone(),
        },
        None => CertifyOutcome::Certified,
    })
}

fn check_pair_labeling(
    forest: &Forest,
    interval: &Interval<Word>,
    lower: usize,
    upper: usize,
) -> Result<bool> {
    let chains = maximal_chains_between(interval, lower, upper);
    let mut sequences = Vec::with_capacity(chains.len());
    for chain in &chains {
        let words: Vec<Word> = chain.iter().map(|&i| interval.element(i).clone()).collect();
        sequences.push(modified_position_labels(forest, &words)?);
    }
    // Labels determine the chain, so distinct chains cannot share sequences.
    let mut sorted = sequences.clone();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::InvalidInput(format!(
                "two maximal chains of [{}, {}] share a label sequence",
                interval.element(lower),
                interval.element(upper)
            )));
        }
    }
    let increasing: Vec<&Vec<ChainLabel>> =
        sequences.iter().filter(|s| weakly_increasing(s)).collect();
    Ok(increasing.len() == 1 && increasing[0] == &sorted[0])
}

/// All saturated chains from `upper` down to `lower`, as element indices.
fn maximal_chains_between(
    interval: &Interval<Word>,
    lower: usize,
    upper: usize,
) -> Vec<Vec<usize>> {
    let mut down_covers: Vec<Vec<usize>> = vec![Vec::new(); interval.size()];
    for &(up, lo) in interval.covers() {
        down_covers[up].push(lo);
    }
    let mut chains = Vec::new();
    let mut stack = vec![upper];
    fn descend(
        at: usize,
        lower: usize,
        interval: &Interval<Word>,
        down_covers: &[Vec<usize>],
        stack: &mut Vec<usize>,
        chains: &mut Vec<Vec<usize>>,
    ) {
        if at == lower {
            chains.push(stack.clone());
            return;
        }
        for &next in &down_covers[at] {
            if interval.leq_idx(lower, next) {
                stack.push(next);
                descend(next, lower, interval, down_covers, stack, chains);
                stack.pop();
            }
        }
    }
    descend(
        upper,
        lower,
        interval,
        &down_covers,
        &mut stack,
        &mut chains,
    );
    chains
}

/// Composition of layer lengths of a layered permutation.
pub fn layered_to_word(perm: &Permutation) -> Result<Word> {
    if perm.is_empty() {
        return Ok(Word::empty());
    }
    let decomposition = perm.finest_decomposition(DecompKind::Direct)?;
    let mut letters = Vec::new();
    for component in &decomposition.components {
        if *component != Permutation::decreasing(component.len()) {
            return Err(Error::NotLayered(perm.to_string()));
        }
        letters.push(component.len() as u32);
    }
    Word::new(letters)
}

/// The layered permutation with the given composition of layer lengths.
pub fn word_to_layered(word: &Word) -> Result<Permutation> {
    let mut out = Permutation::empty();
    for &layer in word.letters() {
        out = out.direct_sum(&Permutation::decreasing(layer as usize));
    }
    Ok(out)
}

pub fn is_layered(perm: &Permutation) -> bool {
    layered_to_word(perm).is_ok()
}

/// The chain alphabet just large enough for the given words.
pub fn chain_for(words: &[&Word]) -> Forest {
    let max = words
        .iter()
        .flat_map(|w| w.letters().iter().copied())
        .max()
        .unwrap_or(1);
    Forest::chain(max)
}
