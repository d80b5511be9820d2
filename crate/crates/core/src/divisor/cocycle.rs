//! Čech cocycles of monic monomials on the maximal-cone cover.
//!
//! A line bundle is glued by units `λ_ij χ^{m_ij}` on `U_{σ_i} ∩ U_{σ_j}`.
//! The constants never affect the cohomology class, so a cocycle is stored
//! as its exponents `m_ij` alone. Coboundaries come from units `χ^{m_i}` on
//! the charts `U_{σ_i}`, i.e. `m_i ∈ σ_i^⊥ ∩ M`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::cartier::cartier_data;
use super::TDivisor;
use crate::error::Result;
use crate::fan::Fan;
use crate::lattice_linalg::{kernel_basis, solve_integer_system, IntMatrix, IntVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialCocycle {
    cones: usize,
    rank: usize,
    /// Row-major `cones × cones` table of exponents.
    entries: Vec<IntVector>,
}

impl MonomialCocycle {
    pub fn zero(fan: &Fan) -> Self {
        let k = fan.max_cones().len();
        MonomialCocycle { cones: k, rank: fan.rank(), entries: vec![IntVector::zeros(fan.rank()); k * k] }
    }

    /// The coboundary-style cocycle `m_ij = m_i - m_j`.
    pub fn from_differences(rank: usize, points: &[IntVector]) -> Self {
        let k = points.len();
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                entries.push(points[i].sub(&points[j]));
            }
        }
        MonomialCocycle { cones: k, rank, entries }
    }

    pub fn num_cones(&self) -> usize {
        self.cones
    }

    pub fn entry(&self, i: usize, j: usize) -> &IntVector {
        &self.entries[i * self.cones + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, m: IntVector) {
        assert_eq!(m.len(), self.rank);
        self.entries[i * self.cones + j] = m;
    }

    pub fn sub(&self, other: &MonomialCocycle) -> MonomialCocycle {
        assert_eq!(self.cones, other.cones);
        MonomialCocycle {
            cones: self.cones,
            rank: self.rank,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(IntVector::is_zero)
    }

    /// Checks antisymmetry, the cocycle identity and that every `χ^{m_ij}`
    /// is a unit on `U_{σ_i ∩ σ_j}`, i.e. `m_ij ∈ (σ_i ∩ σ_j)^⊥` (which puts
    /// it in the dual cone as well). Returns the first violation.
    pub fn check(&self, fan: &Fan) -> std::result::Result<(), String> {
        let k = self.cones;
        if k != fan.max_cones().len() {
            return Err(format!("cocycle has {k} charts, fan has {}", fan.max_cones().len()));
        }
        for i in 0..k {
            for j in 0..k {
                if self.entry(i, j) != &self.entry(j, i).neg() {
                    return Err(format!("m_{i}{j} != -m_{j}{i}"));
                }
                for l in 0..k {
                    if self.entry(i, j).add(self.entry(j, l)) != *self.entry(i, l) {
                        return Err(format!("m_{i}{j} + m_{j}{l} != m_{i}{l}"));
                    }
                }
                let cones = fan.max_cones();
                for r in cones[i].common_rays(&cones[j]) {
                    let pairing = self.entry(i, j).dot(fan.ray(r));
                    if !pairing.is_zero() {
                        return Err(format!("m_{i}{j} pairs to {pairing} with ray {r} of the common face"));
                    }
                }
            }
        }
        Ok(())
    }

    /// `m_ij ∈ (σ_i ∩ σ_j)^∨` for every pair.
    pub fn in_dual_cones(&self, fan: &Fan) -> bool {
        let cones = fan.max_cones();
        (0..self.cones).all(|i| {
            (0..self.cones).all(|j| {
                cones[i]
                    .common_rays(&cones[j])
                    .iter()
                    .all(|&r| !self.entry(i, j).dot(fan.ray(r)).is_negative())
            })
        })
    }
}

/// `m_ij = m_{σ_i} - m_{σ_j}` from the Cartier data of `D`.
pub fn divisor_to_cocycle(fan: &Fan, d: &TDivisor) -> Result<MonomialCocycle> {
    let data = cartier_data(fan, d)?;
    Ok(MonomialCocycle::from_differences(fan.rank(), &data.witnesses))
}

/// Pullback along the `t`-th power map: `χ^{m_ij} ↦ χ^{t·m_ij}`.
pub fn pullback_by_power_map(alpha: &MonomialCocycle, t: &BigInt) -> MonomialCocycle {
    MonomialCocycle {
        cones: alpha.cones,
        rank: alpha.rank,
        entries: alpha.entries.iter().map(|m| m.scaled(t)).collect(),
    }
}

/// Whether `α - β` is a coboundary `m_i - m_j` of units `χ^{m_i}` on the
/// charts, i.e. with `m_i ∈ σ_i^⊥ ∩ M`.
pub fn cocycle_class_equal(fan: &Fan, alpha: &MonomialCocycle, beta: &MonomialCocycle) -> bool {
    let diff = alpha.sub(beta);
    let n = fan.rank();
    let k = diff.cones;
    // units on each chart: kernel of the cone's generator matrix
    let unit_bases: Vec<IntMatrix> = fan
        .max_cones()
        .iter()
        .map(|c| {
            let g = fan.cone_generators(c);
            if g.rows() == 0 {
                IntMatrix::identity(n)
            } else {
                kernel_basis(&g)
            }
        })
        .collect();
    let offsets: Vec<usize> = unit_bases
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.cols();
            Some(o)
        })
        .collect();
    let unknowns: usize = unit_bases.iter().map(IntMatrix::cols).sum();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let mut system = IntMatrix::zeros(pairs.len() * n, unknowns);
    let mut rhs = IntVector::zeros(pairs.len() * n);
    for (p, &(i, j)) in pairs.iter().enumerate() {
        for row in 0..n {
            let r = p * n + row;
            for c in 0..unit_bases[i].cols() {
                system[(r, offsets[i] + c)] += &unit_bases[i][(row, c)];
            }
            for c in 0..unit_bases[j].cols() {
                system[(r, offsets[j] + c)] -= &unit_bases[j][(row, c)];
            }
            rhs.0[r] = diff.entry(i, j)[row].clone();
        }
    }
    solve_integer_system(&system, &rhs).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::principal_divisor;
    use crate::fan::named::named_fan;

    #[test]
    fn hyperplane_cocycle_on_plane() {
        let f = named_fan("P2").unwrap();
        let h = TDivisor::prime(&f, 2);
        let data = cartier_data(&f, &h).unwrap();
        assert_eq!(
            data.witnesses,
            vec![IntVector::from_i64(&[0, 0]), IntVector::from_i64(&[1, 0]), IntVector::from_i64(&[0, 1])]
        );
        let c = divisor_to_cocycle(&f, &h).unwrap();
        assert_eq!(c.entry(0, 1), &IntVector::from_i64(&[-1, 0]));
        assert_eq!(c.entry(0, 2), &IntVector::from_i64(&[0, -1]));
        assert_eq!(c.entry(1, 2), &IntVector::from_i64(&[1, -1]));
        c.check(&f).unwrap();
        assert!(c.in_dual_cones(&f));
    }

    #[test]
    fn principal_and_zero() {
        let f = named_fan("F2").unwrap();
        let d = principal_divisor(&f, &IntVector::from_i64(&[2, -5])).unwrap();
        assert!(divisor_to_cocycle(&f, &d).unwrap().is_zero());
        assert!(divisor_to_cocycle(&f, &TDivisor::zero(&f)).unwrap().is_zero());
    }

    #[test]
    fn class_equality() {
        let f = named_fan("P2").unwrap();
        let h = TDivisor::prime(&f, 2);
        let a = divisor_to_cocycle(&f, &h).unwrap();
        assert!(cocycle_class_equal(&f, &a, &a));
        let shifted = h.add(&principal_divisor(&f, &IntVector::from_i64(&[3, -1])).unwrap());
        let b = divisor_to_cocycle(&f, &shifted).unwrap();
        assert!(cocycle_class_equal(&f, &a, &b));
        let two = divisor_to_cocycle(&f, &h.scaled_i64(2)).unwrap();
        assert!(!cocycle_class_equal(&f, &a, &two));
    }

    #[test]
    fn power_map_pullback() {
        let f = named_fan("P2").unwrap();
        let h = TDivisor::prime(&f, 2);
        let a = divisor_to_cocycle(&f, &h).unwrap();
        assert_eq!(pullback_by_power_map(&a, &BigInt::from(1)), a);
        let doubled = pullback_by_power_map(&a, &BigInt::from(2));
        let two_h = divisor_to_cocycle(&f, &h.scaled_i64(2)).unwrap();
        assert!(cocycle_class_equal(&f, &doubled, &two_h));
        let z = MonomialCocycle::zero(&f);
        assert_eq!(pullback_by_power_map(&z, &BigInt::from(7)), z);
    }

    #[test]
    fn broken_cocycles_detected() {
        let f = named_fan("P2").unwrap();
        let mut c = divisor_to_cocycle(&f, &TDivisor::prime(&f, 0)).unwrap();
        c.set_entry(0, 1, IntVector::from_i64(&[5, 5]));
        assert!(c.check(&f).is_err());
    }

    #[test]
    fn coboundaries_on_lower_dimensional_charts() {
        // fan of P^1 × A^1: charts have one-dimensional unit groups
        let f = Fan::from_i64(2, &[&[1, 0], &[-1, 0]], &[&[0], &[1]]).unwrap();
        let mut c = MonomialCocycle::zero(&f);
        c.set_entry(0, 1, IntVector::from_i64(&[0, 4]));
        c.set_entry(1, 0, IntVector::from_i64(&[0, -4]));
        c.check(&f).unwrap();
        assert!(cocycle_class_equal(&f, &c, &MonomialCocycle::zero(&f)));
        let mut d = MonomialCocycle::zero(&f);
        d.set_entry(0, 1, IntVector::from_i64(&[1, 0]));
        d.set_entry(1, 0, IntVector::from_i64(&[-1, 0]));
        assert!(!cocycle_class_equal(&f, &d, &MonomialCocycle::zero(&f)));
    }
}
