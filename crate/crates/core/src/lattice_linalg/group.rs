use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{IntMatrix, IntVector};
use super::smith::smith_normal_form;

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_t` presented as
/// a quotient of an ambient lattice `Z^a`.
///
/// Group coordinates list the `r` free coordinates first and then one
/// coordinate per invariant factor. `projection` maps ambient coordinates to
/// group coordinates and `section` maps group coordinates back to a
/// representative in the ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupPresentation {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
    pub projection: IntMatrix,
    pub section: IntMatrix,
}

/// An element in group coordinates: free part plus torsion residues reduced
/// into `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl GroupElement {
    pub fn coordinates(&self) -> IntVector {
        IntVector(self.free.iter().chain(&self.torsion).cloned().collect())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let all: Vec<String> = self
            .free
            .iter()
            .map(|x| x.to_string())
            .chain(self.torsion.iter().map(|x| format!("{x}̄")))
            .collect();
        write!(f, "{})", all.join(","))
    }
}

/// Presentation of `Z^rows / im(A)`.
pub fn cokernel(a: &IntMatrix) -> AbelianGroupPresentation {
    let snf = smith_normal_form(a);
    let rows = a.rows();
    let torsion_idx: Vec<usize> = (0..snf.rank).filter(|&i| !snf.s[(i, i)].is_one()).collect();
    let free_idx: Vec<usize> = (snf.rank..rows).collect();
    let order: Vec<usize> = free_idx.iter().chain(&torsion_idx).copied().collect();
    AbelianGroupPresentation {
        free_rank: free_idx.len(),
        invariant_factors: torsion_idx.iter().map(|&i| snf.s[(i, i)].clone()).collect(),
        projection: snf.u.select_rows(&order),
        section: snf.u_inv.select_columns(&order),
    }
}

impl AbelianGroupPresentation {
    pub fn ambient_rank(&self) -> usize {
        self.projection.cols()
    }

    pub fn num_coordinates(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.num_coordinates() == 0
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: vec![BigInt::zero(); self.invariant_factors.len()],
        }
    }

    /// Reduces raw group coordinates (free then torsion).
    pub fn element(&self, coords: &IntVector) -> GroupElement {
        assert_eq!(coords.len(), self.num_coordinates(), "wrong number of group coordinates");
        let free = coords.0[..self.free_rank].to_vec();
        let torsion = coords.0[self.free_rank..]
            .iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| x.mod_floor(d))
            .collect();
        GroupElement { free, torsion }
    }

    /// Class of an ambient vector.
    pub fn project(&self, x: &IntVector) -> GroupElement {
        self.element(&self.projection.mul_vec(x))
    }

    /// A representative in the ambient lattice.
    pub fn lift(&self, g: &GroupElement) -> IntVector {
        self.section.mul_vec(&g.coordinates())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.element(&a.coordinates().add(&b.coordinates()))
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.element(&a.coordinates().neg())
    }

    pub fn scale(&self, a: &GroupElement, t: &BigInt) -> GroupElement {
        self.element(&a.coordinates().scaled(t))
    }

    pub fn is_zero(&self, a: &GroupElement) -> bool {
        a.free.iter().all(Zero::is_zero) && a.torsion.iter().all(Zero::is_zero)
    }

    /// Solves `t·x = a`, returning the coordinatewise smallest non-negative
    /// torsion solution when several exist.
    pub fn divide(&self, a: &GroupElement, t: &BigInt) -> Option<GroupElement> {
        assert!(t > &BigInt::zero(), "division by a non-positive integer");
        let mut free = Vec::with_capacity(a.free.len());
        for x in &a.free {
            let (q, r) = x.div_rem(t);
            if !r.is_zero() {
                return None;
            }
            free.push(q);
        }
        let mut torsion = Vec::with_capacity(a.torsion.len());
        for (c, d) in a.torsion.iter().zip(&self.invariant_factors) {
            torsion.push(solve_congruence(t, c, d)?);
        }
        Some(GroupElement { free, torsion })
    }

    /// `Z^2 ⊕ Z/2` style description; `0` for the trivial group.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

/// Smallest `x` in `[0, d)` with `t·x ≡ c (mod d)`.
fn solve_congruence(t: &BigInt, c: &BigInt, d: &BigInt) -> Option<BigInt> {
    let g = t.extended_gcd(d);
    if !(c % &g.gcd).is_zero() {
        return None;
    }
    let modulus = d / &g.gcd;
    if modulus.is_one() {
        return Some(BigInt::zero());
    }
    let x = (&g.x * (c / &g.gcd)).mod_floor(&modulus);
    Some(x)
}
