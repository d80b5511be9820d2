//! Line bundles on the perfectoid cover: the tower of `p`-power maps on a
//! smooth complete toric variety.
//!
//! `Pic` of the cover is `Pic(X)[1/p]`. A bundle is stored as a pair
//! `(c, k)` meaning the formal `p^k`-th root of the class `c ∈ Pic(X)`,
//! reduced so that `k` is minimal. Classes are taken modulo the `p`-primary
//! torsion of `Pic(X)`, which dies after inverting `p`; this makes
//! division by `p` unique and the reduced pair canonical.

mod series;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::divisor::{picard_group, PicardGroup, TDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice_linalg::rational::Rational;
use crate::lattice_linalg::{AbelianGroupPresentation, GroupElement, IntVector};

pub use series::{
    cohomology_series, d_l, perfectoid_bb, perfectoid_demazure, LevelSeries, PerfectoidBbReport,
    PerfectoidDemazureReport, SeriesVerdict,
};

pub fn is_prime(p: u64) -> bool {
    num_prime::nt_funcs::is_prime64(p)
}

/// Strips every factor `p` from `d`.
fn prime_to_p_part(d: &BigInt, p: &BigInt) -> BigInt {
    let mut d = d.clone();
    while (&d % p).is_zero() {
        d /= p;
    }
    d
}

/// The fan, its Picard group and the prime `p`.
#[derive(Debug, PartialEq, Eq)]
pub struct PerfectoidContext {
    fan: Fan,
    pic: PicardGroup,
    p: u64,
    /// Invariant factors of `Pic(X)` with their `p`-parts removed.
    reduced_factors: Vec<BigInt>,
}

impl PerfectoidContext {
    /// Requires a complete smooth fan, where every Cartier divisor
    /// trivializes on the affine charts.
    pub fn new(fan: Fan, p: u64) -> Result<Arc<Self>> {
        if !fan.is_smooth() {
            return Err(Error::NotSmooth);
        }
        Self::assuming_trivialization(fan, p)
    }

    /// Skips the smoothness requirement; the caller vouches that the line
    /// bundles in play trivialize on the charts.
    pub fn assuming_trivialization(fan: Fan, p: u64) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let pic = picard_group(&fan)?;
        let pb = BigInt::from(p);
        let reduced_factors =
            pic.presentation.invariant_factors.iter().map(|d| prime_to_p_part(d, &pb)).collect();
        Ok(Arc::new(PerfectoidContext { fan, pic, p, reduced_factors }))
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn pic(&self) -> &PicardGroup {
        &self.pic
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    fn reduce(&self, g: GroupElement) -> GroupElement {
        let torsion = g.torsion.iter().zip(&self.reduced_factors).map(|(x, d)| x.mod_floor(d)).collect();
        GroupElement { free: g.free, torsion }
    }

    fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.reduce(GroupElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a.torsion.iter().zip(&b.torsion).map(|(x, y)| x + y).collect(),
        })
    }

    fn scale(&self, a: &GroupElement, t: &BigInt) -> GroupElement {
        self.reduce(GroupElement {
            free: a.free.iter().map(|x| x * t).collect(),
            torsion: a.torsion.iter().map(|x| x * t).collect(),
        })
    }

    /// `a / p`, unique when it exists (`p` is invertible on the torsion).
    fn divide_by_p(&self, a: &GroupElement) -> Option<GroupElement> {
        let p = self.p_big();
        let mut free = Vec::with_capacity(a.free.len());
        for x in &a.free {
            let (q, r) = x.div_rem(&p);
            if !r.is_zero() {
                return None;
            }
            free.push(q);
        }
        let torsion = a
            .torsion
            .iter()
            .zip(&self.reduced_factors)
            .map(|(x, d)| {
                if d.is_one() {
                    return BigInt::zero();
                }
                let inv = p.extended_gcd(d).x;
                (x * inv).mod_floor(d)
            })
            .collect();
        Some(GroupElement { free, torsion })
    }

    fn bundle(self: &Arc<Self>, class: GroupElement, level: u32) -> PerfectoidBundle {
        let mut class = self.reduce(class);
        let mut level = level;
        while level > 0 {
            match self.divide_by_p(&class) {
                Some(q) => {
                    class = q;
                    level -= 1;
                }
                None => break,
            }
        }
        PerfectoidBundle { ctx: Arc::clone(self), class, level }
    }

    /// The bundle `O(D)^{1/p^k}`.
    pub fn from_divisor(self: &Arc<Self>, d: &TDivisor, level: u32) -> Result<PerfectoidBundle> {
        let class = self.pic.class_of(d)?;
        Ok(self.bundle(class, level))
    }

    pub fn trivial(self: &Arc<Self>) -> PerfectoidBundle {
        self.bundle(self.pic.presentation.zero(), 0)
    }

    /// Bundle from raw Picard coordinates (free then torsion).
    pub fn from_class(self: &Arc<Self>, coords: &IntVector, level: u32) -> PerfectoidBundle {
        self.bundle(self.pic.presentation.element(coords), level)
    }
}

/// `O(D)^{1/p^k}` in reduced form: `k = 0` or the class is not divisible by
/// `p`.
#[derive(Clone, Debug)]
pub struct PerfectoidBundle {
    ctx: Arc<PerfectoidContext>,
    class: GroupElement,
    level: u32,
}

impl PartialEq for PerfectoidBundle {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.level == other.level && self.class == other.class
    }
}

impl Eq for PerfectoidBundle {}

impl PerfectoidBundle {
    pub fn context(&self) -> &Arc<PerfectoidContext> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn class(&self) -> &GroupElement {
        &self.class
    }

    pub fn is_trivial(&self) -> bool {
        self.level == 0 && self.ctx.pic.presentation.is_zero(&self.class)
    }

    fn same_ambient(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || (self.ctx.p == other.ctx.p && self.ctx.fan == other.ctx.fan)
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ctx.p != other.ctx.p {
            return Err(Error::AmbientMismatch(format!("p = {} vs p = {}", self.ctx.p, other.ctx.p)));
        }
        if !self.same_ambient(other) {
            return Err(Error::AmbientMismatch("bundles live on different fans".into()));
        }
        Ok(())
    }

    /// Class at a higher level: `(c, k) = (p^{j-k} c, j)`.
    fn class_at_level(&self, level: u32) -> GroupElement {
        debug_assert!(level >= self.level);
        let t = self.ctx.p_big().pow(level - self.level);
        self.ctx.scale(&self.class, &t)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let level = self.level.max(other.level);
        let sum = self.ctx.add(&self.class_at_level(level), &other.class_at_level(level));
        Ok(self.ctx.bundle(sum, level))
    }

    pub fn inverse(&self) -> Self {
        let neg = self.ctx.scale(&self.class, &BigInt::from(-1));
        self.ctx.bundle(neg, self.level)
    }

    /// Pullback along the `p`-power map, i.e. multiplication by `p`.
    pub fn frobenius_pullback(&self) -> Self {
        if self.level > 0 {
            self.ctx.bundle(self.class.clone(), self.level - 1)
        } else {
            let c = self.ctx.scale(&self.class, &self.ctx.p_big());
            self.ctx.bundle(c, 0)
        }
    }

    /// The formal `p`-th root, inverse to [`Self::frobenius_pullback`].
    pub fn pth_root(&self) -> Self {
        self.ctx.bundle(self.class.clone(), self.level + 1)
    }

    /// `L^{⊗t}` for any integer `t`.
    pub fn power(&self, t: &BigInt) -> Self {
        self.ctx.bundle(self.ctx.scale(&self.class, t), self.level)
    }

    /// A Cartier divisor `D` with `L = O(D)^{1/p^k}`, `k` the level.
    pub fn representative(&self) -> TDivisor {
        self.ctx.pic.representative(&self.class)
    }

    /// Free coordinates of the class in `Pic(X) ⊗ Q`, i.e. divided by `p^k`.
    pub fn rational_coordinates(&self) -> Vec<Rational> {
        let den = self.ctx.p_big().pow(self.level);
        self.class.free.iter().map(|x| Rational::new(x.clone(), den.clone())).collect()
    }
}

impl fmt::Display for PerfectoidBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, level {})", self.class.coordinates(), self.level)
    }
}

/// `Pic(X) ⊗ Z[1/p]` described from a presentation of `Pic(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectoidPic {
    pub p: u64,
    pub free_rank: usize,
    /// Prime-to-`p` parts of the torsion factors that survive.
    pub torsion: Vec<BigInt>,
    pub base: String,
}

impl PerfectoidPic {
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(format!("Z[1/{}]", self.p)),
            r => parts.push(format!("Z[1/{}]^{r}", self.p)),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

/// Inverts `p` in a finitely generated abelian group.
pub fn localize_at_p(g: &AbelianGroupPresentation, p: u64) -> PerfectoidPic {
    let pb = BigInt::from(p);
    PerfectoidPic {
        p,
        free_rank: g.free_rank,
        torsion: g
            .invariant_factors
            .iter()
            .map(|d| prime_to_p_part(d, &pb))
            .filter(|d| !d.is_one())
            .collect(),
        base: g.describe(),
    }
}

/// `Pic` of the perfectoid cover of a smooth complete toric variety.
pub fn perfectoid_pic(fan: &Fan, p: u64) -> Result<PerfectoidPic> {
    let ctx = PerfectoidContext::new(fan.clone(), p)?;
    Ok(localize_at_p(&ctx.pic.presentation, p))
}
