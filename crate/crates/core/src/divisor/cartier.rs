use num_bigint::BigInt;
use num_traits::Signed;

use super::{class_group, ClassGroup, TDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice_linalg::{
    cokernel, image_basis, kernel_basis, solve_integer_system, AbelianGroupPresentation, GroupElement,
    IntMatrix, IntVector,
};

/// Cartier data `{m_σ}`: one lattice point per maximal cone with
/// `<m_σ, u_ρ> = -a_ρ` for every ray `ρ` of `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData {
    pub witnesses: Vec<IntVector>,
}

/// Cartier data for `D`, or `None` when some maximal cone has no integral
/// solution.
pub fn is_cartier(fan: &Fan, d: &TDivisor) -> Option<CartierData> {
    let mut witnesses = Vec::with_capacity(fan.max_cones().len());
    for cone in fan.max_cones() {
        let a = fan.cone_generators(cone);
        let rhs = IntVector(cone.ray_indices().iter().map(|&r| -d.coeff(r)).collect());
        witnesses.push(solve_integer_system(&a, &rhs)?);
    }
    Some(CartierData { witnesses })
}

pub(crate) fn cartier_data(fan: &Fan, d: &TDivisor) -> Result<CartierData> {
    is_cartier(fan, d).ok_or(Error::NotCartier)
}

/// Every witness `m_σ` lies in `P_D`.
pub fn is_basepoint_free(fan: &Fan, d: &TDivisor) -> Result<bool> {
    let data = cartier_data(fan, d)?;
    Ok(data
        .witnesses
        .iter()
        .all(|m| fan.rays().iter().enumerate().all(|(r, u)| !(m.dot(u) + d.coeff(r)).is_negative())))
}

/// `Pic(X) ⊆ Cl(X)`: classes of Cartier divisors.
///
/// The Cartier divisors form a sublattice `CDiv ⊆ Z^rays` with basis
/// `cartier_basis`; the Picard group is `CDiv / div(M)`, presented on
/// coordinates with respect to that basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardGroup {
    pub presentation: AbelianGroupPresentation,
    /// Columns form a basis of the Cartier divisors.
    pub cartier_basis: IntMatrix,
    pub class_group: ClassGroup,
}

impl PicardGroup {
    /// Picard class of a Cartier divisor.
    pub fn class_of(&self, d: &TDivisor) -> Result<GroupElement> {
        let z = solve_integer_system(&self.cartier_basis, d.coeffs()).ok_or(Error::NotCartier)?;
        Ok(self.presentation.project(&z))
    }

    /// A Cartier divisor in the given class.
    pub fn representative(&self, g: &GroupElement) -> TDivisor {
        let z = self.presentation.lift(g);
        TDivisor { coeffs: self.cartier_basis.mul_vec(&z) }
    }

    /// Image of a Picard class in the class group.
    pub fn to_class_group(&self, g: &GroupElement) -> GroupElement {
        self.class_group.class_of(&self.representative(g))
    }

    /// `[Cl : Pic]`, or `None` when the index is infinite.
    pub fn index_in_class_group(&self) -> Option<BigInt> {
        let b = &self.cartier_basis;
        (b.cols() == b.rows()).then(|| b.determinant().abs())
    }

    pub fn describe(&self) -> String {
        self.presentation.describe()
    }
}

/// The Picard group of the toric variety of a complete fan. Only the fan
/// enters the computation.
pub fn picard_group(fan: &Fan) -> Result<PicardGroup> {
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    let cl = class_group(fan)?;
    let nrays = fan.num_rays();
    let n = fan.rank();
    let cones = fan.max_cones();

    // unknowns (a, m_0, ..., m_{s-1});  <m_σ, u_ρ> + a_ρ = 0 for ρ ∈ σ
    let eq_rows: usize = cones.iter().map(|c| c.ray_indices().len()).sum();
    let mut system = IntMatrix::zeros(eq_rows, nrays + n * cones.len());
    let mut row = 0;
    for (ci, cone) in cones.iter().enumerate() {
        for &r in cone.ray_indices() {
            system[(row, r)] = BigInt::from(1);
            for k in 0..n {
                system[(row, nrays + ci * n + k)] = fan.ray(r)[k].clone();
            }
            row += 1;
        }
    }
    let kernel = kernel_basis(&system);
    let a_rows: Vec<usize> = (0..nrays).collect();
    let cartier_generators = kernel.select_rows(&a_rows);
    let cartier_basis = image_basis(&cartier_generators);

    // principal divisors in Cartier coordinates
    let div_cols: Vec<IntVector> = cl
        .div_map
        .column_vectors()
        .iter()
        .map(|col| solve_integer_system(&cartier_basis, col).expect("principal divisors are Cartier"))
        .collect();
    let relations = IntMatrix::from_columns(cartier_basis.cols(), &div_cols);
    Ok(PicardGroup { presentation: cokernel(&relations), cartier_basis, class_group: cl })
}
