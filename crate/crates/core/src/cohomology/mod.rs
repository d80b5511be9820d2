//! `H^i(X_Σ, O(D))` for complete simplicial fans, graded by `M`.
//!
//! The degree-`m` part of the Čech complex on the maximal-cone cover has one
//! basis element per set of charts `I` with `<m, u_ρ> >= -a_ρ` for every ray
//! of `∩_{i∈I} σ_i`. Degrees are scanned over a finite box; those sharing a
//! sign pattern share a complex, which is computed once.

mod cech;
mod vanishing;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::divisor::{divisor_polytope, TDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice_linalg::rational::{rat, solve_unique, Rational};
use crate::lattice_linalg::IntVector;

use cech::{Cover, Field, RayMask};

pub use cech::MAX_COVER;
pub use vanishing::{batyrev_borisov_check, demazure_vanishing_check, BbReport, Verdict};

/// Upper bound on the number of lattice points scanned per computation.
pub const MAX_REGION_POINTS: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    /// `i ↦ dim H^i` for `i = 0..=n`.
    pub dims: BTreeMap<usize, u64>,
    /// `i ↦ [(m, dim H^i_m)]` over degrees with a nonzero piece, sorted by `m`.
    pub graded: Option<BTreeMap<usize, Vec<(IntVector, u64)>>>,
    pub modp: Option<ModpCheck>,
}

impl CohomologyTable {
    pub fn dim(&self, i: usize) -> u64 {
        self.dims.get(&i).copied().unwrap_or(0)
    }

    /// `Σ (-1)^i dim H^i`.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().map(|(&i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    /// Degrees of the nonzero graded pieces of `H^i` (requires graded output).
    pub fn degrees(&self, i: usize) -> Option<Vec<IntVector>> {
        let g = self.graded.as_ref()?;
        Some(g.get(&i).map_or_else(Vec::new, |v| v.iter().map(|(m, _)| m.clone()).collect()))
    }
}

/// The same computation with ranks taken modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModpCheck {
    pub p: u64,
    pub dims: BTreeMap<usize, u64>,
    pub agrees: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CohomologyOptions {
    pub graded: bool,
    /// Recompute every rank over `F_p` as well.
    pub modp: Option<u64>,
}

/// Box `lo <= m <= hi` holding every degree with nonzero cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportRegion {
    pub lo: Vec<BigInt>,
    pub hi: Vec<BigInt>,
}

impl SupportRegion {
    pub fn contains(&self, m: &IntVector) -> bool {
        m.entries().iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (a, b))| a <= x && x <= b)
    }

    pub fn num_points(&self) -> BigInt {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a + 1).fold(BigInt::one(), |acc, w| acc * w)
    }
}

fn check_preconditions(fan: &Fan, d: &TDivisor) -> Result<()> {
    if d.coeffs().len() != fan.num_rays() {
        return Err(Error::DimensionMismatch { expected: fan.num_rays(), found: d.coeffs().len() });
    }
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    Ok(())
}

/// The integer hull of the local data `m_σ` (rational when `D` is only
/// `Q`-Cartier) together with the vertices of `P_D`, widened by one in every
/// coordinate.
pub fn support_region(fan: &Fan, d: &TDivisor) -> Result<SupportRegion> {
    check_preconditions(fan, d)?;
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for cone in fan.max_cones() {
        let a: Vec<Vec<Rational>> =
            cone.ray_indices().iter().map(|&r| fan.ray(r).entries().iter().map(rat).collect()).collect();
        let b: Vec<Rational> = cone.ray_indices().iter().map(|&r| rat(&-d.coeff(r))).collect();
        points.push(solve_unique(&a, &b).ok_or(Error::NotSimplicial)?);
    }
    points.extend(divisor_polytope(fan, d)?.vertices().iter().cloned());
    let n = fan.rank();
    let lo = (0..n)
        .map(|k| points.iter().map(|p| p[k].floor().to_integer()).min().expect("nonempty") - 1)
        .collect();
    let hi = (0..n)
        .map(|k| points.iter().map(|p| p[k].ceil().to_integer()).max().expect("nonempty") + 1)
        .collect();
    Ok(SupportRegion { lo, hi })
}

fn nonneg_mask(fan: &Fan, d: &TDivisor, m: &IntVector) -> RayMask {
    fan.rays()
        .iter()
        .enumerate()
        .filter(|(r, u)| m.dot(u) + d.coeff(*r) >= BigInt::zero())
        .fold(0, |acc, (r, _)| acc | (1 << r))
}

/// `dim H^i(X, O(D))_m` for `i = 0..=n`.
pub fn graded_piece_cohomology(fan: &Fan, d: &TDivisor, m: &IntVector) -> Result<Vec<u64>> {
    check_preconditions(fan, d)?;
    if m.len() != fan.rank() {
        return Err(Error::DimensionMismatch { expected: fan.rank(), found: m.len() });
    }
    let cover = Cover::new(fan)?;
    let h = cover.cohomology(nonneg_mask(fan, d, m), Field::Rationals);
    Ok(truncate(&h, fan.rank()))
}

fn truncate(h: &[usize], n: usize) -> Vec<u64> {
    debug_assert!(h.iter().skip(n + 1).all(|&x| x == 0), "Čech cohomology above the dimension");
    (0..=n).map(|i| h.get(i).copied().unwrap_or(0) as u64).collect()
}

pub fn cohomology(fan: &Fan, d: &TDivisor, want_graded: bool) -> Result<CohomologyTable> {
    cohomology_with(fan, d, &CohomologyOptions { graded: want_graded, modp: None })
}

/// Lattice points of the box, each with its ray mask. Uses machine integers
/// when everything fits.
fn scan_region(fan: &Fan, d: &TDivisor, region: &SupportRegion) -> Result<Vec<(IntVector, RayMask)>> {
    let total = region.num_points();
    if total > BigInt::from(MAX_REGION_POINTS) {
        return Err(Error::SearchRegionTooLarge(total.to_string()));
    }
    let small = |x: &BigInt| x.to_i64().filter(|v| v.unsigned_abs() < 1 << 40);
    let rays: Option<Vec<Vec<i64>>> =
        fan.rays().iter().map(|u| u.entries().iter().map(small).collect()).collect();
    let coeffs: Option<Vec<i64>> = d.coeffs().entries().iter().map(small).collect();
    let lo: Option<Vec<i64>> = region.lo.iter().map(small).collect();
    let hi: Option<Vec<i64>> = region.hi.iter().map(small).collect();

    let mut out = Vec::with_capacity(total.to_usize().unwrap_or(0));
    if let (Some(rays), Some(coeffs), Some(lo), Some(hi)) = (rays, coeffs, lo, hi) {
        let n = lo.len();
        let mut m = lo.clone();
        loop {
            let mut mask: RayMask = 0;
            for (r, u) in rays.iter().enumerate() {
                let v: i128 =
                    u.iter().zip(&m).map(|(a, b)| *a as i128 * *b as i128).sum::<i128>() + coeffs[r] as i128;
                if v >= 0 {
                    mask |= 1 << r;
                }
            }
            out.push((IntVector::from_i64(&m), mask));
            // odometer, last coordinate fastest
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if m[k] < hi[k] {
                    m[k] += 1;
                    break;
                }
                m[k] = lo[k];
            }
        }
    }
    for m in crate::divisor::box_points(&region.lo, &region.hi) {
        let mask = nonneg_mask(fan, d, &m);
        out.push((m, mask));
    }
    Ok(out)
}

pub fn cohomology_with(fan: &Fan, d: &TDivisor, opts: &CohomologyOptions) -> Result<CohomologyTable> {
    let region = support_region(fan, d)?;
    let cover = Cover::new(fan)?;
    let n = fan.rank();
    let points = scan_region(fan, d, &region)?;

    let mut memo: HashMap<RayMask, (Vec<u64>, Option<Vec<u64>>)> = HashMap::new();
    let mut dims = vec![0u64; n + 1];
    let mut modp_dims = vec![0u64; n + 1];
    let mut graded: BTreeMap<usize, Vec<(IntVector, u64)>> = BTreeMap::new();
    for (m, mask) in points {
        let (h, hp) = memo.entry(mask).or_insert_with(|| {
            let h = truncate(&cover.cohomology(mask, Field::Rationals), n);
            let hp = opts.modp.map(|p| truncate(&cover.cohomology(mask, Field::Prime(p)), n));
            (h, hp)
        });
        for i in 0..=n {
            dims[i] += h[i];
            if let Some(hp) = hp {
                modp_dims[i] += hp[i];
            }
            if opts.graded && h[i] > 0 {
                graded.entry(i).or_default().push((m.clone(), h[i]));
            }
        }
    }
    let dims: BTreeMap<usize, u64> = dims.into_iter().enumerate().collect();
    let modp = opts.modp.map(|p| {
        let mdims: BTreeMap<usize, u64> = modp_dims.into_iter().enumerate().collect();
        ModpCheck { p, agrees: mdims == dims, dims: mdims }
    });
    Ok(CohomologyTable { dims, graded: opts.graded.then_some(graded), modp })
}

/// `Σ_pattern (#lattice points with that pattern) · χ(complex)`, where the
/// Euler characteristic of each complex is taken from its chain groups
/// rather than its cohomology.
pub fn chamber_euler_sum(fan: &Fan, d: &TDivisor) -> Result<i64> {
    let region = support_region(fan, d)?;
    let cover = Cover::new(fan)?;
    let mut counts: HashMap<RayMask, i64> = HashMap::new();
    for (_, mask) in scan_region(fan, d, &region)? {
        *counts.entry(mask).or_default() += 1;
    }
    Ok(counts.into_iter().map(|(mask, c)| c * cover.chain_euler(mask)).sum())
}
