//! Explicit graded intervals: element list, order matrix, Hasse diagram.
//!
//! The same structure backs intervals of the pattern poset and of
//! generalized subword order; only the construction differs. Elements are
//! stored sorted by (rank, natural order of `E`), so the bottom is index 0,
//! the top is the last index, and all derived output is deterministic.

use std::collections::HashMap;
use std::fmt::Display;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone)]
pub struct Interval<E> {
    elements: Vec<E>,
    ranks: Vec<usize>,
    leq: Vec<bool>,
    covers: Vec<(usize, usize)>,
}

impl<E: Clone + Eq + Hash + Ord> Interval<E> {
    /// Builds an interval from its element set. `rank_of` must be the grading
    /// (bottom at the minimum, every cover raising rank by one) and `leq` the
    /// order relation restricted to the elements.
    pub fn from_elements(
        mut elements: Vec<E>,
        rank_of: impl Fn(&E) -> usize,
        leq: impl Fn(&E, &E) -> bool,
    ) -> Self {
        elements.sort_by(|a, b| (rank_of(a), a).cmp(&(rank_of(b), b)));
        elements.dedup();
        let n = elements.len();
        let base = elements.first().map(&rank_of).unwrap_or(0);
        let ranks: Vec<usize> = elements.iter().map(|e| rank_of(e) - base).collect();
        let mut matrix = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                matrix[i * n + j] = if i == j {
                    true
                } else if ranks[i] < ranks[j] {
                    leq(&elements[i], &elements[j])
                } else {
                    false
                };
            }
        }
        let mut covers = Vec::new();
        for upper in 0..n {
            for lower in 0..n {
                if ranks[lower] + 1 == ranks[upper] && matrix[lower * n + upper] {
                    covers.push((upper, lower));
                }
            }
        }
        covers.sort_unstable();
        Interval {
            elements,
            ranks,
            leq: matrix,
            covers,
        }
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &E {
        &self.elements[idx]
    }

    pub fn bottom(&self) -> &E {
        &self.elements[0]
    }

    pub fn top(&self) -> &E {
        self.elements.last().expect("interval is nonempty")
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.elements.iter().position(|x| x == e)
    }

    /// Rank of the whole interval (rank of its top element).
    pub fn rank(&self) -> usize {
        *self.ranks.last().expect("interval is nonempty")
    }

    pub fn rank_of(&self, idx: usize) -> usize {
        self.ranks[idx]
    }

    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.size() + j]
    }

    pub fn lt_idx(&self, i: usize, j: usize) -> bool {
        i != j && self.leq_idx(i, j)
    }

    /// Cover relations as (upper, lower) index pairs, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn rank_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.rank() + 1];
        for &r in &self.ranks {
            sizes[r] += 1;
        }
        sizes
    }

    /// Rises then falls: `a0 <= ... <= ak >= ... >= al`.
    pub fn is_rank_unimodal(&self) -> bool {
        is_unimodal(&self.rank_sizes())
    }

    /// Indices of elements strictly between bottom and top.
    pub fn open_indices(&self) -> Vec<usize> {
        let top_rank = self.rank();
        (0..self.size())
            .filter(|&i| self.ranks[i] > 0 && self.ranks[i] < top_rank)
            .collect()
    }

    /// Connected components of the Hasse graph of the open interval, each
    /// sorted, ordered by smallest member. Empty when the open interval is.
    pub fn open_components(&self) -> Vec<Vec<usize>> {
        let open = self.open_indices();
        let adjacent = |a: usize, b: usize| {
            self.covers.binary_search(&(a, b)).is_ok() || self.covers.binary_search(&(b, a)).is_ok()
        };
        self.components_of(&open, adjacent)
    }

    /// Components of the comparability graph of the open interval; must agree
    /// with [`open_components`](Self::open_components) for graded intervals.
    pub fn open_comparability_components(&self) -> Vec<Vec<usize>> {
        let open = self.open_indices();
        self.components_of(&open, |a, b| self.lt_idx(a, b) || self.lt_idx(b, a))
    }

    fn components_of(
        &self,
        nodes: &[usize],
        adjacent: impl Fn(usize, usize) -> bool,
    ) -> Vec<Vec<usize>> {
        let mut seen: HashMap<usize, bool> = nodes.iter().map(|&i| (i, false)).collect();
        let mut components = Vec::new();
        for &start in nodes {
            if seen[&start] {
                continue;
            }
            let mut stack = vec![start];
            let mut component = Vec::new();
            seen.insert(start, true);
            while let Some(v) = stack.pop() {
                component.push(v);
                for &w in nodes {
                    if !seen[&w] && adjacent(v, w) {
                        seen.insert(w, true);
                        stack.push(w);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components.sort_by_key(|c| c[0]);
        components
    }

    /// Möbius values `mu(x, top)` for every element, by the defining
    /// recursion run downward from the top.
    #[allow(clippy::needless_range_loop)]
    pub fn mobius_to_top(&self) -> Vec<BigInt> {
        let n = self.size();
        let mut mu = vec![BigInt::zero(); n];
        if n == 0 {
            return mu;
        }
        mu[n - 1] = BigInt::one();
        for x in (0..n - 1).rev() {
            let mut sum = BigInt::zero();
            for z in x + 1..n {
                if self.leq_idx(x, z) {
                    sum += &mu[z];
                }
            }
            mu[x] = -sum;
        }
        mu
    }

    /// Möbius values `mu(bottom, x)` for every element.
    #[allow(clippy::needless_range_loop)]
    pub fn mobius_from_bottom(&self) -> Vec<BigInt> {
        let n = self.size();
        let mut mu = vec![BigInt::zero(); n];
        if n == 0 {
            return mu;
        }
        mu[0] = BigInt::one();
        for x in 1..n {
            let mut sum = BigInt::zero();
            for z in 0..x {
                if self.leq_idx(z, x) {
                    sum += &mu[z];
                }
            }
            mu[x] = -sum;
        }
        mu
    }

    /// Maximum antichain size by Dilworth's theorem: the minimum chain cover
    /// equals the element count minus a maximum matching of the (transitive)
    /// comparability relation split into a bipartite graph.
    pub fn max_antichain_size(&self, open_only: bool) -> usize {
        let nodes: Vec<usize> = if open_only {
            self.open_indices()
        } else {
            (0..self.size()).collect()
        };
        let n = nodes.len();
        if n == 0 {
            return 0;
        }
        let adjacency: Vec<Vec<usize>> = nodes
            .iter()
            .map(|&a| {
                nodes
                    .iter()
                    .enumerate()
                    .filter(|&(_, &b)| self.lt_idx(a, b))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let mut matched_to: Vec<Option<usize>> = vec![None; n];
        let mut matching = 0usize;
        for v in 0..n {
            let mut used = vec![false; n];
            if augment(v, &adjacency, &mut matched_to, &mut used) {
                matching += 1;
            }
        }
        n - matching
    }

    pub fn is_sperner(&self, open_only: bool) -> bool {
        let max_rank_size = if open_only {
            let mut sizes = self.rank_sizes();
            if sizes.len() >= 2 {
                sizes.pop();
                sizes.remove(0);
            } else {
                sizes.clear();
            }
            sizes.into_iter().max().unwrap_or(0)
        } else {
            self.rank_sizes().into_iter().max().unwrap_or(0)
        };
        self.max_antichain_size(open_only) == max_rank_size
    }

    /// Poset isomorphism by invariant refinement plus backtracking. Returns
    /// a map from `self` indices to `other` indices when one exists.
    pub fn isomorphism_to<F: Clone + Eq + Hash + Ord>(
        &self,
        other: &Interval<F>,
    ) -> Option<Vec<usize>> {
        if self.size() != other.size() || self.rank_sizes() != other.rank_sizes() {
            return None;
        }
        let colors_a = self.refined_colors();
        let colors_b = other.refined_colors();
        let mut sorted_a = colors_a.clone();
        let mut sorted_b = colors_b.clone();
        sorted_a.sort_unstable();
        sorted_b.sort_unstable();
        if sorted_a != sorted_b {
            return None;
        }

        let n = self.size();
        // Assign rare colors first to cut the search space.
        let mut color_count: HashMap<u64, usize> = HashMap::new();
        for &c in &colors_a {
            *color_count.entry(c).or_insert(0) += 1;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (color_count[&colors_a[i]], colors_a[i], i));

        let mut mapping = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if self.iso_search(
            other,
            &colors_a,
            &colors_b,
            &order,
            0,
            &mut mapping,
            &mut used,
        ) {
            Some(mapping)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn iso_search<F: Clone + Eq + Hash + Ord>(
        &self,
        other: &Interval<F>,
        colors_a: &[u64],
        colors_b: &[u64],
        order: &[usize],
        depth: usize,
        mapping: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for w in 0..other.size() {
            if used[w] || colors_a[v] != colors_b[w] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&u| {
                self.leq_idx(u, v) == other.leq_idx(mapping[u], w)
                    && self.leq_idx(v, u) == other.leq_idx(w, mapping[u])
            });
            if consistent {
                mapping[v] = w;
                used[w] = true;
                if self.iso_search(other, colors_a, colors_b, order, depth + 1, mapping, used) {
                    return true;
                }
                used[w] = false;
                mapping[v] = usize::MAX;
            }
        }
        false
    }

    /// Iterated (rank, up-degree, down-degree) refinement over the Hasse
    /// diagram, producing a stable coloring invariant under isomorphism.
    fn refined_colors(&self) -> Vec<u64> {
        let n = self.size();
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut down: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(upper, lower) in &self.covers {
            up[lower].push(upper);
            down[upper].push(lower);
        }
        let mut colors: Vec<u64> = (0..n)
            .map(|i| {
                fold_hash(&[
                    self.ranks[i] as u64,
                    up[i].len() as u64,
                    down[i].len() as u64,
                ])
            })
            .collect();
        for _ in 0..n {
            let mut next = Vec::with_capacity(n);
            for i in 0..n {
                let mut up_colors: Vec<u64> = up[i].iter().map(|&j| colors[j]).collect();
                let mut down_colors: Vec<u64> = down[i].iter().map(|&j| colors[j]).collect();
                up_colors.sort_unstable();
                down_colors.sort_unstable();
                let mut items = vec![colors[i], 0x75];
                items.extend(up_colors);
                items.push(0x76);
                items.extend(down_colors);
                next.push(fold_hash(&items));
            }
            if next == colors {
                break;
            }
            colors = next;
        }
        colors
    }

    /// Checks that `mapping` is an order isomorphism onto `other`.
    pub fn is_isomorphism_witness<F: Clone + Eq + Hash + Ord>(
        &self,
        other: &Interval<F>,
        mapping: &[usize],
    ) -> bool {
        let n = self.size();
        if other.size() != n || mapping.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &w in mapping {
            if w >= n || seen[w] {
                return false;
            }
            seen[w] = true;
        }
        (0..n).all(|i| (0..n).all(|j| self.leq_idx(i, j) == other.leq_idx(mapping[i], mapping[j])))
    }
}

impl<E: Clone + Eq + Hash + Ord + Display> Interval<E> {
    /// JSON form: `{bottom, top, elements[], covers[][2]}` with covers as
    /// (upper, lower) pairs in the element encoding.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bottom": self.bottom().to_string(),
            "top": self.top().to_string(),
            "elements": self.elements.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "covers": self
                .covers
                .iter()
                .map(|&(u, l)| vec![self.elements[u].to_string(), self.elements[l].to_string()])
                .collect::<Vec<_>>(),
        })
    }
}

fn augment(
    v: usize,
    adjacency: &[Vec<usize>],
    matched_to: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    for &to in &adjacency[v] {
        if used[to] {
            continue;
        }
        used[to] = true;
        if matched_to[to].is_none() || augment(matched_to[to].unwrap(), adjacency, matched_to, used)
        {
            matched_to[to] = Some(v);
            return true;
        }
    }
    false
}

/// Rises to some peak, then falls.
pub fn is_unimodal(sizes: &[usize]) -> bool {
    let peak = sizes
        .iter()
        .enumerate()
        .max_by_key(|&(i, &s)| (s, std::cmp::Reverse(i)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    sizes
        .windows(2)
        .enumerate()
        .all(|(i, w)| if i < peak { w[0] <= w[1] } else { w[0] >= w[1] })
}

fn fold_hash(items: &[u64]) -> u64 {
    // FNV-1a over the word stream; stable across runs.
    let mut h: u64 = 0xcbf29ce484222325;
    for &x in items {
        for byte in x.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// Exhaustive maximum-antichain search; oracle for the Dilworth route on
/// small posets.
pub fn max_antichain_brute<E: Clone + Eq + Hash + Ord>(
    interval: &Interval<E>,
    open_only: bool,
) -> usize {
    let nodes: Vec<usize> = if open_only {
        interval.open_indices()
    } else {
        (0..interval.size()).collect()
    };
    fn recurse<E: Clone + Eq + Hash + Ord>(
        interval: &Interval<E>,
        nodes: &[usize],
        at: usize,
        chosen: &mut Vec<usize>,
        best: &mut usize,
    ) {
        if chosen.len() + (nodes.len() - at) <= *best {
            return;
        }
        if at == nodes.len() {
            *best = (*best).max(chosen.len());
            return;
        }
        let v = nodes[at];
        let compatible = chosen
            .iter()
            .all(|&u| !interval.lt_idx(u, v) && !interval.lt_idx(v, u));
        if compatible {
            chosen.push(v);
            recurse(interval, nodes, at + 1, chosen, best);
            chosen.pop();
        }
        recurse(interval, nodes, at + 1, chosen, best);
    }
    let mut best = 0;
    recurse(interval, &nodes, 0, &mut Vec::new(), &mut best);
    best
}
