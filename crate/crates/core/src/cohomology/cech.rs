//! The degree-`m` piece of the Čech complex of `O(D)` on the maximal-cone
//! cover. It depends on `m` only through the set of rays with
//! `<m, u_ρ> + a_ρ >= 0`, so everything here is keyed by that ray mask.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice_linalg::rational::{rank_mod_p, rank_over_q};
use crate::lattice_linalg::IntMatrix;

/// Largest cover handled; the complex has `2^k - 1` simplices.
pub const MAX_COVER: usize = 16;

pub(crate) type RayMask = u128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Field {
    Rationals,
    Prime(u64),
}

/// Rays of `σ_{i_0} ∩ … ∩ σ_{i_k}` for every nonempty subset of charts.
pub(crate) struct Cover {
    charts: usize,
    common: Vec<RayMask>,
}

impl Cover {
    pub fn new(fan: &Fan) -> Result<Cover> {
        let cones = fan.max_cones();
        let k = cones.len();
        if k > MAX_COVER {
            return Err(Error::TooManyCones(k));
        }
        if fan.num_rays() > RayMask::BITS as usize {
            return Err(Error::InvalidFan(format!("{} rays exceed the cover limit", fan.num_rays())));
        }
        let mut common = vec![0 as RayMask; 1 << k];
        for (i, c) in cones.iter().enumerate() {
            common[1 << i] = c.ray_indices().iter().fold(0, |acc, &r| acc | (1 << r));
        }
        for s in 1usize..(1 << k) {
            if s.count_ones() > 1 {
                let low = s & s.wrapping_neg();
                common[s] = common[low] & common[s ^ low];
            }
        }
        Ok(Cover { charts: k, common })
    }

    fn in_support(&self, subset: usize, nonneg: RayMask) -> bool {
        self.common[subset] & !nonneg == 0
    }

    /// Support simplices grouped by size: `out[c]` holds the subsets with
    /// `c + 1` charts, ascending.
    fn chains(&self, nonneg: RayMask) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.charts];
        for s in 1usize..(1 << self.charts) {
            if self.in_support(s, nonneg) {
                out[s.count_ones() as usize - 1].push(s);
            }
        }
        out
    }

    /// `dim H^c` for `c = 0..charts`.
    pub fn cohomology(&self, nonneg: RayMask, field: Field) -> Vec<usize> {
        let chains = self.chains(nonneg);
        let k = self.charts;
        let ranks: Vec<usize> =
            (0..k.saturating_sub(1)).map(|c| differential_rank(&chains[c], &chains[c + 1], field)).collect();
        (0..k)
            .map(|c| {
                let out_rank = ranks.get(c).copied().unwrap_or(0);
                let in_rank = if c == 0 { 0 } else { ranks[c - 1] };
                chains[c].len() - out_rank - in_rank
            })
            .collect()
    }

    /// `Σ (-1)^c dim C^c`, read off the chain groups alone.
    pub fn chain_euler(&self, nonneg: RayMask) -> i64 {
        self.chains(nonneg)
            .iter()
            .enumerate()
            .map(|(c, ch)| if c % 2 == 0 { ch.len() as i64 } else { -(ch.len() as i64) })
            .sum()
    }
}

/// `d: C^c → C^{c+1}`, `(dα)(T) = Σ_j (-1)^j α(T \ t_j)` with `t_0 < t_1 < …`.
fn differential_rank(source: &[usize], target: &[usize], field: Field) -> usize {
    if source.is_empty() || target.is_empty() {
        return 0;
    }
    let index: HashMap<usize, usize> = source.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut d = IntMatrix::zeros(target.len(), source.len());
    for (row, &t) in target.iter().enumerate() {
        let mut bits = t;
        let mut j = 0;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            if let Some(&col) = index.get(&(t ^ low)) {
                d[(row, col)] = BigInt::from(if j % 2 == 0 { 1 } else { -1 });
            }
            bits ^= low;
            j += 1;
        }
    }
    match field {
        Field::Rationals => rank_over_q(&d),
        Field::Prime(p) => rank_mod_p(&d, p),
    }
}
