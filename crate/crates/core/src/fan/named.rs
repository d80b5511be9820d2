//! Library of standard fans.

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice_linalg::IntVector;

pub const NAMES: &[&str] = &["P1", "P2", "P3", "P1xP1", "F1", "F2", "F3", "P112"];

/// Looks up a standard fan by name.
pub fn named_fan(name: &str) -> Option<Fan> {
    let fan = match name {
        "P1" => projective_space(1),
        "P2" => projective_space(2),
        "P3" => projective_space(3),
        "P1xP1" => hirzebruch(0),
        "F1" => hirzebruch(1),
        "F2" => hirzebruch(2),
        "F3" => hirzebruch(3),
        "P112" => Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[2, 0]]),
        _ => return None,
    };
    Some(fan.expect("named fans are well formed"))
}

/// `P^n`: rays `e_1, ..., e_n, e_0 = -e_1 - ... - e_n`, with maximal cones
/// the `n`-element subsets of the rays. Cone `i` omits ray `i + n` (mod
/// `n + 1`), so for `P^2` the cones are `{0,1}, {1,2}, {2,0}`.
pub fn projective_space(n: usize) -> Result<Fan> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    let mut rays: Vec<IntVector> = (0..n).map(|i| IntVector::unit(n, i)).collect();
    rays.push(IntVector::from_i64(&vec![-1; n]));
    let cones = (0..=n).map(|i| (0..n).map(|k| (i + k) % (n + 1)).collect()).collect();
    Fan::new(n, rays, cones)
}

/// Hirzebruch surface `F_a` with rays `(1,0), (0,1), (-1,a), (0,-1)` and
/// cones of adjacent rays; `a = 0` is `P^1 × P^1`.
pub fn hirzebruch(a: i64) -> Result<Fan> {
    Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, a], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}
