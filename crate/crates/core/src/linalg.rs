//! Exact matrix rank over the rationals and over prime fields.
//!
//! Boundary matrices have entries in {-1, 0, 1}; their rank over the
//! rationals equals the integer rank, computed here by fraction-free
//! elimination. The fast path works in checked i128 with row gcd
//! normalization; any overflow falls back to arbitrary precision.

// Elimination kernels index rows and columns directly; iterator forms fight
// the simultaneous pivot-row/target-row borrows.
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Rank over the rationals of an integer matrix given by rows.
pub fn rank_rational(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    match rank_i128(rows) {
        Some(rank) => rank,
        None => rank_bigint(rows),
    }
}

fn rank_i128(rows: &[Vec<i64>]) -> Option<usize> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let nrows = m.len();
    let ncols = m[0].len();
    let mut rank = 0usize;
    for _ in 0..nrows.min(ncols) {
        // Pick the smallest-magnitude nonzero entry in the active block as
        // the pivot, which keeps fill-in and growth down for sparse inputs.
        let mut pivot: Option<(usize, usize)> = None;
        for i in rank..nrows {
            for j in rank..ncols {
                if m[i][j] != 0
                    && pivot
                        .map(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(rank, pi);
        for row in m.iter_mut() {
            row.swap(rank, pj);
        }
        let pivot_value = m[rank][rank];
        for i in rank + 1..nrows {
            let factor = m[i][rank];
            if factor == 0 {
                continue;
            }
            let mut gcd: i128 = 0;
            for j in rank..ncols {
                let a = pivot_value.checked_mul(m[i][j])?;
                let b = factor.checked_mul(m[rank][j])?;
                m[i][j] = a.checked_sub(b)?;
                gcd = gcd_i128(gcd, m[i][j]);
            }
            if gcd > 1 {
                for j in rank..ncols {
                    m[i][j] /= gcd;
                }
            }
        }
        rank += 1;
    }
    Some(rank)
}

fn rank_bigint(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nrows = m.len();
    let ncols = m[0].len();
    let mut rank = 0usize;
    for _ in 0..nrows.min(ncols) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in rank..nrows {
            for j in rank..ncols {
                if !m[i][j].is_zero() {
                    let better = match pivot {
                        Some((pi, pj)) => m[i][j].abs() < m[pi][pj].abs(),
                        None => true,
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(rank, pi);
        for row in m.iter_mut() {
            row.swap(rank, pj);
        }
        let pivot_value = m[rank][rank].clone();
        for i in rank + 1..nrows {
            if m[i][rank].is_zero() {
                continue;
            }
            let factor = m[i][rank].clone();
            let mut gcd = BigInt::zero();
            for j in rank..ncols {
                m[i][j] = &pivot_value * &m[i][j] - &factor * &m[rank][j];
                gcd = gcd_bigint(gcd, m[i][j].clone());
            }
            if gcd > BigInt::from(1) {
                for j in rank..ncols {
                    m[i][j] = &m[i][j] / &gcd;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over GF(p).
pub fn rank_mod_p(rows: &[Vec<i64>], p: u64) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    if p == 2 {
        return rank_mod_two(rows);
    }
    let p = p as i128;
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| (x as i128).rem_euclid(p)).collect())
        .collect();
    let nrows = m.len();
    let ncols = m[0].len();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..nrows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let inv = mod_inverse(m[rank][col], p);
        for j in col..ncols {
            m[rank][j] = m[rank][j] * inv % p;
        }
        for i in 0..nrows {
            if i != rank && m[i][col] != 0 {
                let factor = m[i][col];
                for j in col..ncols {
                    m[i][j] = (m[i][j] - factor * m[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

fn rank_mod_two(rows: &[Vec<i64>]) -> usize {
    let ncols = rows[0].len();
    let words = ncols.div_ceil(64);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut packed = vec![0u64; words];
            for (j, &x) in r.iter().enumerate() {
                if x.rem_euclid(2) == 1 {
                    packed[j / 64] |= 1 << (j % 64);
                }
            }
            packed
        })
        .collect();
    let mut rank = 0usize;
    for col in 0..ncols {
        let word = col / 64;
        let bit = 1u64 << (col % 64);
        let Some(pivot_row) = (rank..m.len()).find(|&i| m[i][word] & bit != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[word] & bit != 0 {
                for (w, p) in row.iter_mut().zip(&pivot) {
                    *w ^= p;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn mod_inverse(a: i128, p: i128) -> i128 {
    // Fermat: p is prime.
    mod_pow(a.rem_euclid(p), p - 2, p)
}

fn mod_pow(mut base: i128, mut exp: i128, p: i128) -> i128 {
    let mut acc: i128 = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_bigint(a: BigInt, b: BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}
