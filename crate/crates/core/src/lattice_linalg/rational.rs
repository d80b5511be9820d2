//! Exact elimination over `Q` and over `F_p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{IntMatrix, IntVector};

pub type Rational = BigRational;

pub fn rat(x: &BigInt) -> Rational {
    BigRational::from_integer(x.clone())
}

/// Row echelon form in place; returns the pivot columns.
fn echelon(a: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..cols {
                    let v = &a[row][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut a = rows.to_vec();
    echelon(&mut a, cols).len()
}

/// Rank over `Q` of an integer matrix.
pub fn rank_over_q(m: &IntMatrix) -> usize {
    let rows: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).0.iter().map(rat).collect()).collect();
    rational_rank(&rows)
}

/// Unique solution of the square or overdetermined system `A·x = b` over `Q`;
/// `None` if the system is inconsistent or underdetermined.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> =
        a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain(std::iter::once(x.clone())).collect()).collect();
    let pivots = echelon(&mut aug, cols + 1);
    if pivots.len() != cols || pivots.contains(&cols) {
        return None;
    }
    Some((0..cols).map(|i| aug[i][cols].clone()).collect())
}

/// Rank modulo a prime `p`.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let p = p as i128;
    let mut a: Vec<Vec<i128>> = (0..m.rows())
        .map(|i| {
            m.row(i)
                .0
                .iter()
                .map(|x| {
                    let r = x.mod_floor(&BigInt::from(p));
                    i128::try_from(r).expect("residue fits")
                })
                .collect()
        })
        .collect();
    let cols = m.cols();
    let mut row = 0;
    for col in 0..cols {
        if row == a.len() {
            break;
        }
        let Some(piv) = (row..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(row, piv);
        let inv = mod_inverse(a[row][col], p);
        for x in a[row].iter_mut() {
            *x = (*x * inv).rem_euclid(p);
        }
        for i in 0..a.len() {
            if i != row && a[i][col] != 0 {
                let f = a[i][col];
                for j in col..cols {
                    a[i][j] = (a[i][j] - f * a[row][j]).rem_euclid(p);
                }
            }
        }
        row += 1;
    }
    row
}

fn mod_inverse(x: i128, p: i128) -> i128 {
    // p prime: x^(p-2)
    let mut base = x.rem_euclid(p);
    let mut e = p - 2;
    let mut acc = 1i128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Rational vector as a common-denominator pair `(numerator, denominator)`.
pub fn to_integral(v: &[Rational]) -> (IntVector, BigInt) {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let num = v.iter().map(|x| (x * rat(&den)).to_integer()).collect();
    (IntVector(num), den)
}
