//! Order complexes of open intervals and their reduced homology.
//!
//! The order complex of `(bottom, top)` has the strictly-interior elements
//! as vertices and the chains as faces. Reduced homology is computed from
//! boundary-matrix ranks with the empty face included, so the Möbius value
//! of the interval must reappear as the reduced Euler characteristic, and a
//! certified interval must show all homology in the top dimension.

use std::collections::HashMap;
use std::fmt::Display;
use std::hash::Hash;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::linalg;
use crate::poset::Interval;
use crate::{Error, Result};

pub const DEFAULT_MAX_FACES: usize = 500_000;

/// Coefficients for homology: exact rationals or a prime field.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// The chains of an open interval as a simplicial complex. `faces[d]` holds
/// the d-dimensional faces as sorted vertex-index lists; `facets` are the
/// maximal chains. `dim` is rank(interval) - 2, so an empty open interval
/// has dimension -1 and carries only the empty face.
pub struct OrderComplex {
    pub vertex_count: usize,
    pub faces: Vec<Vec<Vec<u32>>>,
    pub facets: Vec<Vec<u32>>,
    pub dim: isize,
}

impl OrderComplex {
    pub fn face_count(&self) -> usize {
        self.faces.iter().map(|level| level.len()).sum()
    }

    /// f-vector indexed by dimension, starting at dimension 0.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|level| level.len()).collect()
    }
}

/// Builds the order complex of the open interval of `interval`.
pub fn order_complex<E: Clone + Eq + Hash + Ord>(
    interval: &Interval<E>,
    max_faces: usize,
) -> Result<OrderComplex> {
    let open = interval.open_indices();
    let n = open.len();
    let dim = interval.rank() as isize - 2;
    let less = |a: usize, b: usize| interval.lt_idx(open[a], open[b]);

    // Chains are enumerated by ascending DFS; vertices are rank-sorted, so
    // every chain comes out as an increasing index list.
    let mut faces: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut facets: Vec<Vec<u32>> = Vec::new();
    let mut total = 0usize;
    let mut stack: Vec<u32> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn extend(
        v: usize,
        n: usize,
        less: &impl Fn(usize, usize) -> bool,
        stack: &mut Vec<u32>,
        faces: &mut Vec<Vec<Vec<u32>>>,
        facets: &mut Vec<Vec<u32>>,
        total: &mut usize,
        max_faces: usize,
    ) -> Result<()> {
        stack.push(v as u32);
        *total += 1;
        if *total > max_faces {
            return Err(Error::ComplexTooLarge {
                faces: *total,
                cap: max_faces,
            });
        }
        let d = stack.len() - 1;
        if faces.len() <= d {
            faces.push(Vec::new());
        }
        faces[d].push(stack.clone());
        let mut extendable = false;
        for w in v + 1..n {
            if less(v, w) {
                extendable = true;
                extend(w, n, less, stack, faces, facets, total, max_faces)?;
            }
        }
        if !extendable && is_maximal_chain(stack, n, less) {
            facets.push(stack.clone());
        }
        stack.pop();
        Ok(())
    }

    for v in 0..n {
        extend(
            v,
            n,
            &less,
            &mut stack,
            &mut faces,
            &mut facets,
            &mut total,
            max_faces,
        )?;
    }
    Ok(OrderComplex {
        vertex_count: n,
        faces,
        facets,
        dim,
    })
}

/// A chain that cannot be extended upward may still admit an insertion below
/// or between members; a facet admits none anywhere.
fn is_maximal_chain(chain: &[u32], n: usize, less: &impl Fn(usize, usize) -> bool) -> bool {
    (0..n).all(|z| {
        let z32 = z as u32;
        if chain.contains(&z32) {
            return true;
        }
        !chain
            .iter()
            .all(|&c| less(z, c as usize) || less(c as usize, z))
    })
}

/// Reduced Euler characteristic: -1 + sum of (-1)^i f_i.
pub fn reduced_euler_characteristic(complex: &OrderComplex) -> BigInt {
    let mut chi = BigInt::from(-1);
    for (d, level) in complex.faces.iter().enumerate() {
        let count = BigInt::from(level.len());
        if d % 2 == 0 {
            chi += count;
        } else {
            chi -= count;
        }
    }
    chi
}

/// Reduced Betti numbers over a field, indexed from dimension -1.
#[derive(Clone, Debug)]
pub struct BettiVector {
    pub field: Field,
    betti: Vec<usize>,
    pub dim: isize,
}

impl BettiVector {
    /// The reduced Betti number in dimension `d`, for -1 <= d <= dim.
    pub fn get(&self, d: isize) -> usize {
        let idx = d + 1;
        if idx < 0 || idx as usize >= self.betti.len() {
            0
        } else {
            self.betti[idx as usize]
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.betti
    }

    /// Anything nonzero strictly below the top dimension?
    pub fn concentrated_on_top(&self) -> bool {
        (-1..self.dim).all(|d| self.get(d) == 0)
    }

    /// Sum of (-1)^d betti_d over -1 <= d <= dim; equals the reduced Euler
    /// characteristic.
    pub fn alternating_sum(&self) -> BigInt {
        let mut chi = BigInt::from(0);
        for d in -1..=self.dim {
            let term = BigInt::from(self.get(d));
            if d.rem_euclid(2) == 0 {
                chi += term;
            } else {
                chi -= term;
            }
        }
        chi
    }
}

/// Reduced homology ranks from boundary-matrix ranks, empty face included.
pub fn betti_numbers(complex: &OrderComplex, field: Field) -> BettiVector {
    let dim = complex.dim;
    if dim < -1 {
        return BettiVector {
            field,
            betti: vec![],
            dim,
        };
    }
    // dims[d+1] = number of d-faces, with the empty face at index 0.
    let levels = (dim + 2) as usize;
    let mut dims = vec![0usize; levels];
    dims[0] = 1;
    for d in 0..levels - 1 {
        dims[d + 1] = complex.faces.get(d).map(|f| f.len()).unwrap_or(0);
    }
    // ranks[i] = rank of the boundary map from i-dimensional chains (index
    // shifted by one) down one level; ranks[0] is the map to dimension -2,
    // which is zero.
    let mut ranks = vec![0usize; levels + 1];
    for d in 0..levels - 1 {
        let matrix = boundary_matrix(complex, d as isize);
        ranks[d + 1] = match field {
            Field::Rational => linalg::rank_rational(&matrix),
            Field::Prime(p) => linalg::rank_mod_p(&matrix, p),
        };
    }
    let betti: Vec<usize> = (0..levels)
        .map(|level| dims[level] - ranks[level] - ranks[level + 1])
        .collect();
    BettiVector { field, betti, dim }
}

/// Boundary from d-faces to (d-1)-faces as integer rows indexed by the
/// lower-dimensional faces. For d = 0 this is the augmentation to the empty
/// face: a single all-ones row.
fn boundary_matrix(complex: &OrderComplex, d: isize) -> Vec<Vec<i64>> {
    if d < 0 {
        return Vec::new();
    }
    let d = d as usize;
    let cols = complex.faces.get(d).map(|f| f.len()).unwrap_or(0);
    if d == 0 {
        return vec![vec![1i64; cols]];
    }
    let lower = &complex.faces[d - 1];
    let lower_index: HashMap<&[u32], usize> = lower
        .iter()
        .enumerate()
        .map(|(i, face)| (face.as_slice(), i))
        .collect();
    let mut matrix = vec![vec![0i64; cols]; lower.len()];
    for (col, face) in complex.faces[d].iter().enumerate() {
        let mut sign = 1i64;
        for omit in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(omit);
            let row = lower_index[sub.as_slice()];
            matrix[row][col] = sign;
            sign = -sign;
        }
    }
    matrix
}

/// All reduced homology of every open subinterval concentrated in top
/// dimension. Returns the first failing pair otherwise.
pub fn is_cohen_macaulay<E: Clone + Eq + Hash + Ord + Sync + Send>(
    interval: &Interval<E>,
    field: Field,
    max_faces: usize,
) -> Result<(bool, Option<(E, E)>)> {
    let n = interval.size();
    let mut pairs = Vec::new();
    for lower in 0..n {
        for upper in 0..n {
            if interval.lt_idx(lower, upper) {
                pairs.push((lower, upper));
            }
        }
    }
    let failures: Vec<Result<(usize, usize)>> = pairs
        .into_par_iter()
        .filter_map(|(lower, upper)| {
            match open_subinterval_betti(interval, lower, upper, field, max_faces) {
                Ok(betti) => {
                    if betti.concentrated_on_top() {
                        None
                    } else {
                        Some(Ok((lower, upper)))
                    }
                }
                Err(e) => Some(Err(e)),
            }
        })
        .collect();
    let mut found: Vec<(usize, usize)> = Vec::new();
    for f in failures {
        found.push(f?);
    }
    found.sort_unstable();
    Ok(match found.first() {
        Some(&(lower, upper)) => (
            false,
            Some((
                interval.element(lower).clone(),
                interval.element(upper).clone(),
            )),
        ),
        None => (true, None),
    })
}

fn open_subinterval_betti<E: Clone + Eq + Hash + Ord>(
    interval: &Interval<E>,
    lower: usize,
    upper: usize,
    field: Field,
    max_faces: usize,
) -> Result<BettiVector> {
    let members: Vec<usize> = (0..interval.size())
        .filter(|&z| interval.leq_idx(lower, z) && interval.leq_idx(z, upper))
        .collect();
    let sub = Interval::from_elements(
        members.clone(),
        |&z| interval.rank_of(z),
        |&a, &b| interval.leq_idx(a, b),
    );
    let complex = order_complex(&sub, max_faces)?;
    Ok(betti_numbers(&complex, field))
}

/// Homology free and concentrated in the top dimension with total rank equal
/// to |mu(bottom, top)|.
pub fn wedge_of_spheres_check<E: Clone + Eq + Hash + Ord>(
    interval: &Interval<E>,
    field: Field,
    max_faces: usize,
) -> Result<bool> {
    let complex = order_complex(interval, max_faces)?;
    let betti = betti_numbers(&complex, field);
    let mu = interval.mobius_to_top()[0].clone();
    let mu_abs = if mu < BigInt::from(0) { -mu } else { mu };
    Ok(betti.concentrated_on_top() && BigInt::from(betti.get(betti.dim)) == mu_abs)
}
