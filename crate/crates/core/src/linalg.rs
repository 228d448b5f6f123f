//! Exact linear algebra: Gauss–Jordan over a field, fraction-free Bareiss
//! elimination over the integers, and rank modulo a prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, Signed, Zero};
use std::ops::Neg;

/// Brings `m` to reduced row echelon form in place and returns the pivot
/// column of each nonzero row.
pub fn rref<T>(m: &mut [Vec<T>]) -> Vec<usize>
where
    T: Num + Clone + Neg<Output = T>,
{
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = T::one() / m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..cols {
                    let delta = f.clone() * m[row][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Solution set `{ x0 + Σ t_k basis[k] }` of a linear system, with one basis
/// vector per free column.
#[derive(Debug, Clone)]
pub struct AffineSolution<T> {
    pub particular: Vec<T>,
    pub free: Vec<usize>,
    pub basis: Vec<Vec<T>>,
}

/// Solves `A x = b` exactly; `None` when inconsistent.
pub fn solve_affine<T>(a: &[Vec<T>], b: &[T], cols: usize) -> Option<AffineSolution<T>>
where
    T: Num + Clone + Neg<Output = T>,
{
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut particular = vec![T::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = m[r][cols].clone();
    }
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution {
        particular,
        free,
        basis,
    })
}

/// Fraction-free row echelon form. Returns the rank, the pivot columns and
/// the last pivot (the determinant, up to sign, for a full-rank square
/// matrix). Every intermediate entry is a minor of the input, so entries
/// stay integral.
pub fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> (usize, Vec<usize>, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut pivots = Vec::new();
    let mut negate = false;
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        if p != row {
            m.swap(row, p);
            negate = !negate;
        }
        for i in row + 1..rows {
            for j in col + 1..cols {
                let v = &m[row][col] * &m[i][j] - &m[i][col] * &m[row][j];
                m[i][j] = v.div_floor(&prev);
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    (row, pivots, negate)
}

/// Exact determinant of a square integer matrix.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a = m.to_vec();
    let (rank, _, negate) = bareiss_echelon(&mut a);
    if rank < n {
        return BigInt::zero();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rank and pivot columns of an integer matrix.
pub fn integer_rank(m: &[Vec<BigInt>]) -> (usize, Vec<usize>) {
    let mut a = m.to_vec();
    let (rank, pivots, _) = bareiss_echelon(&mut a);
    (rank, pivots)
}

/// A 61-bit prime used for modular rank.
pub const RANK_PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Rank over `Z/p`. Never exceeds the rational rank, and agrees with it
/// unless `p` divides every maximal nonzero minor.
pub fn rank_mod_p(m: &[Vec<BigInt>], p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let r = x.mod_floor(&pb);
                    u64::try_from(r).expect("reduced below p")
                })
                .collect()
        })
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(piv) = (row..rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(row, piv);
        let inv = pow_mod(a[row][col], p - 2, p);
        for i in row + 1..rows {
            if a[i][col] == 0 {
                continue;
            }
            let f = mul_mod(a[i][col], inv, p);
            for j in col..cols {
                let s = mul_mod(f, a[row][j], p);
                a[i][j] = (a[i][j] + p - s) % p;
            }
        }
        row += 1;
    }
    row
}

/// Greatest absolute entry, for size guards.
pub fn max_abs(m: &[Vec<BigInt>]) -> BigInt {
    m.iter()
        .flatten()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}
