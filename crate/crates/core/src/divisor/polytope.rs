use itertools::Itertools;
use num_bigint::BigInt;

use super::TDivisor;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice_linalg::rational::{rat, rational_rank, solve_unique, Rational};
use crate::lattice_linalg::IntVector;

/// `P_D = {m ∈ M_R : <m, u_ρ> >= -a_ρ for all ρ}` with its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorPolytope {
    rank: usize,
    normals: Vec<IntVector>,
    /// Right-hand sides `-a_ρ`.
    bounds: Vec<BigInt>,
    vertices: Vec<Vec<Rational>>,
    /// `-1` for the empty polytope.
    dim: isize,
    /// Rows tight on the whole polytope (the affine hull constraints).
    implicit_equalities: Vec<usize>,
}

/// Builds `P_D`. The polytope must be bounded, which holds exactly when the
/// rays positively span `N_R` (in particular for complete fans).
pub fn divisor_polytope(fan: &Fan, d: &TDivisor) -> Result<DivisorPolytope> {
    if d.coeffs().len() != fan.num_rays() {
        return Err(Error::DimensionMismatch { expected: fan.num_rays(), found: d.coeffs().len() });
    }
    if !recession_cone_is_trivial(fan) {
        return Err(Error::Unbounded);
    }
    let n = fan.rank();
    let normals = fan.rays().to_vec();
    let bounds: Vec<BigInt> = d.coeffs().entries().iter().map(|a| -a).collect();

    let rows: Vec<Vec<Rational>> = normals.iter().map(|u| u.0.iter().map(rat).collect()).collect();
    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    for subset in (0..normals.len()).combinations(n) {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| rat(&bounds[i])).collect();
        let Some(x) = solve_unique(&a, &b) else {
            continue;
        };
        let feasible = rows.iter().zip(&bounds).all(|(u, bd)| dot_q(u, &x) >= rat(bd));
        if feasible && !vertices.contains(&x) {
            vertices.push(x);
        }
    }
    vertices.sort();

    let dim = match vertices.split_first() {
        None => -1,
        Some((v0, rest)) => {
            let diffs: Vec<Vec<Rational>> =
                rest.iter().map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect()).collect();
            rational_rank(&diffs) as isize
        }
    };
    let implicit_equalities = if vertices.is_empty() {
        Vec::new()
    } else {
        (0..normals.len())
            .filter(|&i| vertices.iter().all(|v| dot_q(&rows[i], v) == rat(&bounds[i])))
            .collect()
    };
    Ok(DivisorPolytope { rank: n, normals, bounds, vertices, dim, implicit_equalities })
}

fn dot_q(u: &[Rational], x: &[Rational]) -> Rational {
    u.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// `{x : <x, u_ρ> >= 0 ∀ρ} = {0}`.
fn recession_cone_is_trivial(fan: &Fan) -> bool {
    use crate::fan::geometry::{extreme_rays, span_rank};
    span_rank(fan.rank(), fan.rays()) == fan.rank() && extreme_rays(fan.rank(), fan.rays(), &[]).is_empty()
}

impl DivisorPolytope {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    /// Inequalities `(u_ρ, -a_ρ)` meaning `<m, u_ρ> >= -a_ρ`.
    pub fn inequalities(&self) -> impl Iterator<Item = (&IntVector, &BigInt)> {
        self.normals.iter().zip(&self.bounds)
    }

    pub fn implicit_equalities(&self) -> &[usize] {
        &self.implicit_equalities
    }

    pub fn contains(&self, m: &IntVector) -> bool {
        self.inequalities().all(|(u, b)| &m.dot(u) >= b)
    }

    /// In `P_D` and strictly inside every facet that is not an implicit
    /// equality, i.e. in the relative interior.
    pub fn in_relative_interior(&self, m: &IntVector) -> bool {
        !self.is_empty()
            && self.inequalities().enumerate().all(|(i, (u, b))| {
                let v = m.dot(u);
                if self.implicit_equalities.contains(&i) {
                    &v == b
                } else {
                    &v > b
                }
            })
    }

    /// Integer bounding box of the vertices: `(lo, hi)` per coordinate.
    pub fn bounding_box(&self) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
        let first = self.vertices.first()?;
        let mut lo: Vec<BigInt> = first.iter().map(|x| x.floor().to_integer()).collect();
        let mut hi: Vec<BigInt> = first.iter().map(|x| x.ceil().to_integer()).collect();
        for v in &self.vertices {
            for (k, x) in v.iter().enumerate() {
                lo[k] = lo[k].clone().min(x.floor().to_integer());
                hi[k] = hi[k].clone().max(x.ceil().to_integer());
            }
        }
        Some((lo, hi))
    }

    /// Lattice points of `P_D` (or of its relative interior), scanning the
    /// integer bounding box of the vertices. Lexicographic order.
    pub fn lattice_points(&self, interior_only: bool) -> Vec<IntVector> {
        let Some((lo, hi)) = self.bounding_box() else {
            return Vec::new();
        };
        box_points(&lo, &hi)
            .filter(|m| if interior_only { self.in_relative_interior(m) } else { self.contains(m) })
            .collect()
    }
}

/// All integer points of the box `lo <= x <= hi`, lexicographically.
pub(crate) fn box_points(lo: &[BigInt], hi: &[BigInt]) -> impl Iterator<Item = IntVector> {
    let ranges: Vec<Vec<BigInt>> = lo
        .iter()
        .zip(hi)
        .map(|(a, b)| {
            let mut v = Vec::new();
            let mut x = a.clone();
            while &x <= b {
                v.push(x.clone());
                x += 1;
            }
            v
        })
        .collect();
    ranges.into_iter().multi_cartesian_product().map(IntVector)
}
