use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, IntVector};

/// Smith normal form `U·A·V = S` together with the inverses of the
/// transforming matrices.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    /// Number of nonzero diagonal entries of `s`.
    pub rank: usize,
}

impl SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

/// Computes the Smith normal form by elementary row and column operations,
/// always pivoting on an entry of least absolute value.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (r, c) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = min_abs_entry(&s, t) else {
            break;
        };
        row_swap(&mut s, &mut u, &mut u_inv, t, pi);
        col_swap(&mut s, &mut v, &mut v_inv, t, pj);

        loop {
            // clear column t below the pivot
            let mut dirty = false;
            for i in t + 1..r {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                row_add(&mut s, &mut u, &mut u_inv, i, t, &-q);
                if !s[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..c {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                col_add(&mut s, &mut v, &mut v_inv, j, t, &-q);
                if !s[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder appeared; move it to the pivot
                let (pi, pj) = min_abs_in_cross(&s, t);
                row_swap(&mut s, &mut u, &mut u_inv, t, pi);
                col_swap(&mut s, &mut v, &mut v_inv, t, pj);
                continue;
            }
            // divisibility: the pivot must divide the rest of the submatrix
            let offender = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| !(&s[(i, j)] % &s[(t, t)]).is_zero());
            match offender {
                Some((i, _)) => row_add(&mut s, &mut u, &mut u_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }

    debug_assert_eq!(&u.mul(a).mul(&v), &s);
    SmithForm { u, s, v, u_inv, v_inv, rank: t }
}

fn min_abs_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| x.abs() < s[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_abs_in_cross(s: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let cands = (t..s.rows()).map(|i| (i, t)).chain((t..s.cols()).map(|j| (t, j)));
    for (i, j) in cands {
        let x = &s[(i, j)];
        if !x.is_zero() && (s[best].is_zero() || x.abs() < s[best].abs()) {
            best = (i, j);
        }
    }
    best
}

fn row_swap(s: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i: usize, j: usize) {
    s.swap_rows(i, j);
    u.swap_rows(i, j);
    u_inv.swap_cols(i, j);
}

fn col_swap(s: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, i: usize, j: usize) {
    s.swap_cols(i, j);
    v.swap_cols(i, j);
    v_inv.swap_rows(i, j);
}

// row[target] += q row[source]; the inverse picks up col[source] -= q col[target].
fn row_add(
    s: &mut IntMatrix,
    u: &mut IntMatrix,
    u_inv: &mut IntMatrix,
    target: usize,
    source: usize,
    q: &BigInt,
) {
    s.add_row_multiple(target, source, q);
    u.add_row_multiple(target, source, q);
    u_inv.add_col_multiple(source, target, &-q);
}

// col[target] += q col[source]; the inverse picks up row[source] -= q row[target].
fn col_add(
    s: &mut IntMatrix,
    v: &mut IntMatrix,
    v_inv: &mut IntMatrix,
    target: usize,
    source: usize,
    q: &BigInt,
) {
    s.add_col_multiple(target, source, q);
    v.add_col_multiple(target, source, q);
    v_inv.add_row_multiple(source, target, &-q);
}

/// Some integer solution of `A·x = b`, or `None` when the system has no
/// solution over the integers. The particular solution sets every free
/// Smith coordinate to zero, so the result is deterministic.
pub fn solve_integer_system(a: &IntMatrix, b: &IntVector) -> Option<IntVector> {
    assert_eq!(a.rows(), b.len(), "right-hand side has wrong length");
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let mut y = IntVector::zeros(a.cols());
    for i in 0..a.rows() {
        if i < snf.rank {
            let (q, rem) = ub[i].div_rem(&snf.s[(i, i)]);
            if !rem.is_zero() {
                return None;
            }
            y.0[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Lattice basis (as columns) of the integer kernel `{x : A·x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let idx: Vec<usize> = (snf.rank..a.cols()).collect();
    snf.v.select_columns(&idx)
}

/// Lattice basis (as columns) of the subgroup of `Z^rows` generated by the
/// columns of `g`.
pub fn image_basis(g: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(g);
    let cols: Vec<IntVector> = (0..snf.rank).map(|i| snf.u_inv.column(i).scaled(&snf.s[(i, i)])).collect();
    IntMatrix::from_columns(g.rows(), &cols)
}

pub fn rank(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank
}
