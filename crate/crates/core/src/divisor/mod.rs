//! Torus-invariant divisors and everything built from them: the class group,
//! Cartier data and the Picard group, monomial Čech cocycles, and divisor
//! polytopes.

mod cartier;
mod cocycle;
mod polytope;

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice_linalg::{cokernel, rank, AbelianGroupPresentation, GroupElement, IntMatrix, IntVector};

pub use cartier::{is_basepoint_free, is_cartier, picard_group, CartierData, PicardGroup};
pub use cocycle::{cocycle_class_equal, divisor_to_cocycle, pullback_by_power_map, MonomialCocycle};
pub(crate) use polytope::box_points;
pub use polytope::{divisor_polytope, DivisorPolytope};

/// `D = Σ a_ρ D_ρ`, coefficients aligned with the fan's ray order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TDivisor {
    coeffs: IntVector,
}

impl TDivisor {
    pub fn new(fan: &Fan, coeffs: IntVector) -> Result<Self> {
        if coeffs.len() != fan.num_rays() {
            return Err(Error::DimensionMismatch { expected: fan.num_rays(), found: coeffs.len() });
        }
        Ok(TDivisor { coeffs })
    }

    pub fn from_i64(fan: &Fan, coeffs: &[i64]) -> Result<Self> {
        Self::new(fan, IntVector::from_i64(coeffs))
    }

    pub fn zero(fan: &Fan) -> Self {
        TDivisor { coeffs: IntVector::zeros(fan.num_rays()) }
    }

    /// The prime divisor `D_ρ` of ray `ρ`.
    pub fn prime(fan: &Fan, ray: usize) -> Self {
        TDivisor { coeffs: IntVector::unit(fan.num_rays(), ray) }
    }

    pub fn coeffs(&self) -> &IntVector {
        &self.coeffs
    }

    pub fn coeff(&self, ray: usize) -> &BigInt {
        &self.coeffs[ray]
    }

    pub fn add(&self, other: &TDivisor) -> TDivisor {
        TDivisor { coeffs: self.coeffs.add(&other.coeffs) }
    }

    pub fn sub(&self, other: &TDivisor) -> TDivisor {
        TDivisor { coeffs: self.coeffs.sub(&other.coeffs) }
    }

    pub fn neg(&self) -> TDivisor {
        TDivisor { coeffs: self.coeffs.neg() }
    }

    pub fn scaled(&self, t: &BigInt) -> TDivisor {
        TDivisor { coeffs: self.coeffs.scaled(t) }
    }

    pub fn scaled_i64(&self, t: i64) -> TDivisor {
        self.scaled(&BigInt::from(t))
    }
}

impl fmt::Display for TDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeffs)
    }
}

/// `div(χ^m) = Σ <m, u_ρ> D_ρ`.
pub fn principal_divisor(fan: &Fan, m: &IntVector) -> Result<TDivisor> {
    if m.len() != fan.rank() {
        return Err(Error::DimensionMismatch { expected: fan.rank(), found: m.len() });
    }
    Ok(TDivisor { coeffs: fan.ray_matrix().mul_vec(m) })
}

/// `Cl(X) = coker(M → ⊕ Z·D_ρ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroup {
    pub presentation: AbelianGroupPresentation,
    /// `#rays × n` matrix of `m ↦ (<m, u_ρ>)_ρ`.
    pub div_map: IntMatrix,
}

impl ClassGroup {
    pub fn class_of(&self, d: &TDivisor) -> GroupElement {
        self.presentation.project(&d.coeffs)
    }

    pub fn representative(&self, g: &GroupElement) -> TDivisor {
        TDivisor { coeffs: self.presentation.lift(g) }
    }

    pub fn linearly_equivalent(&self, a: &TDivisor, b: &TDivisor) -> bool {
        self.class_of(a) == self.class_of(b)
    }
}

pub fn class_group(fan: &Fan) -> Result<ClassGroup> {
    let div_map = fan.ray_matrix();
    if rank(&div_map) != fan.rank() {
        return Err(Error::RaysDoNotSpan);
    }
    Ok(ClassGroup { presentation: cokernel(&div_map), div_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::named::named_fan;
    use crate::lattice_linalg::smith_normal_form;

    #[test]
    fn principal_divisors() {
        let p2 = named_fan("P2").unwrap();
        let d = principal_divisor(&p2, &IntVector::from_i64(&[1, 0])).unwrap();
        assert_eq!(d, TDivisor::from_i64(&p2, &[1, 0, -1]).unwrap());
        assert_eq!(principal_divisor(&p2, &IntVector::zeros(2)).unwrap(), TDivisor::zero(&p2));
        let f1 = named_fan("F1").unwrap();
        let d = principal_divisor(&f1, &IntVector::from_i64(&[0, 1])).unwrap();
        assert_eq!(d, TDivisor::from_i64(&f1, &[0, 1, 1, -1]).unwrap());
        assert!(principal_divisor(&f1, &IntVector::zeros(3)).is_err());
    }

    // Oracle: the SNF of the ray matrix directly, independent of the
    // cokernel bookkeeping.
    fn snf_free_rank_and_torsion(fan: &Fan) -> (usize, Vec<BigInt>) {
        let s = smith_normal_form(&fan.ray_matrix());
        let torsion = s.invariant_factors().into_iter().filter(|d| d != &BigInt::from(1)).collect();
        (fan.num_rays() - s.rank, torsion)
    }

    #[test]
    fn class_groups() {
        for (name, rank) in [("P2", 1), ("F1", 2), ("P112", 1), ("P3", 1), ("P1xP1", 2)] {
            let f = named_fan(name).unwrap();
            let cl = class_group(&f).unwrap();
            assert_eq!(cl.presentation.free_rank, rank, "{name}");
            assert!(cl.presentation.invariant_factors.is_empty(), "{name}");
            assert_eq!(snf_free_rank_and_torsion(&f), (rank, vec![]), "{name}");
        }
    }

    #[test]
    fn torsion_class_group() {
        // P^2 / (Z/3): rays (1,0), (0,1), (-1,-1) in the lattice with (1,2)/3
        // adjoined, written in a basis: u = (2,-1), (-1,2), (-1,-1).
        let f = Fan::from_i64(2, &[&[2, -1], &[-1, 2], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]).unwrap();
        let cl = class_group(&f).unwrap();
        assert_eq!(cl.presentation.free_rank, 1);
        assert_eq!(cl.presentation.invariant_factors, vec![BigInt::from(3)]);
    }

    #[test]
    fn spanning_required() {
        let f = Fan::from_i64(2, &[&[1, 0]], &[&[0]]).unwrap();
        assert_eq!(class_group(&f).unwrap_err(), Error::RaysDoNotSpan);
    }

    #[test]
    fn principal_divisors_are_trivial_classes() {
        let f = named_fan("F2").unwrap();
        let cl = class_group(&f).unwrap();
        for m in [[1, 0], [0, 1], [3, -7]] {
            let d = principal_divisor(&f, &IntVector::from_i64(&m)).unwrap();
            assert!(cl.presentation.is_zero(&cl.class_of(&d)));
        }
    }
}
