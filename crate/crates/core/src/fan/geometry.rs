//! Polyhedral geometry of cones given by generators: facets, faces,
//! pointedness and extreme rays of an H-representation.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::lattice_linalg::{kernel_basis, rank, IntMatrix, IntVector};

pub(crate) fn span_rank(n: usize, vecs: &[IntVector]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    rank(&IntMatrix::from_rows(n, vecs))
}

/// Lattice basis of `{m : <m, v> = 0 for all v in vecs}`.
pub(crate) fn orthogonal_basis(n: usize, vecs: &[IntVector]) -> Vec<IntVector> {
    if vecs.is_empty() {
        return (0..n).map(|i| IntVector::unit(n, i)).collect();
    }
    kernel_basis(&IntMatrix::from_rows(n, vecs)).column_vectors()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Facet {
    /// Inward normal inside the linear span of the cone.
    pub normal: IntVector,
    /// Local generator indices on the facet.
    pub tight: Vec<usize>,
}

/// A cone `cone(gens)` together with its facet description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ConeGeometry {
    pub n: usize,
    pub gens: Vec<IntVector>,
    pub dim: usize,
    /// Basis of the orthogonal complement of the span.
    pub perp: Vec<IntVector>,
    pub facets: Vec<Facet>,
}

impl ConeGeometry {
    pub fn new(n: usize, gens: Vec<IntVector>) -> Self {
        let dim = span_rank(n, &gens);
        let perp = orthogonal_basis(n, &gens);
        let mut facets: Vec<Facet> = Vec::new();
        if dim > 0 {
            for subset in (0..gens.len()).combinations(dim - 1) {
                let chosen: Vec<IntVector> = subset.iter().map(|&i| gens[i].clone()).collect();
                if span_rank(n, &chosen) != dim - 1 {
                    continue;
                }
                let mut rows = chosen;
                rows.extend(perp.iter().cloned());
                let kernel = orthogonal_basis(n, &rows);
                debug_assert_eq!(kernel.len(), 1);
                let m = &kernel[0];
                let pairings: Vec<_> = gens.iter().map(|g| g.dot(m)).collect();
                let normal = if pairings.iter().all(|x| !x.is_negative()) {
                    m.clone()
                } else if pairings.iter().all(|x| !x.is_positive()) {
                    m.neg()
                } else {
                    continue;
                };
                let tight: Vec<usize> = (0..gens.len()).filter(|&i| pairings[i].is_zero()).collect();
                if !facets.iter().any(|f| f.tight == tight) {
                    facets.push(Facet { normal, tight });
                }
            }
        }
        ConeGeometry { n, gens, dim, perp, facets }
    }

    /// No line through the origin lies in the cone.
    pub fn is_pointed(&self) -> bool {
        if self.dim == 0 {
            return true;
        }
        let mut rows: Vec<IntVector> = self.facets.iter().map(|f| f.normal.clone()).collect();
        rows.extend(self.perp.iter().cloned());
        span_rank(self.n, &rows) == self.n
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        self.perp.iter().all(|p| p.dot(x).is_zero())
            && self.facets.iter().all(|f| !f.normal.dot(x).is_negative())
    }

    /// Every face as a sorted set of local generator indices, including the
    /// zero face and the cone itself. Assumes the cone is pointed.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        all.insert((0..self.gens.len()).collect());
        let mut frontier: Vec<Vec<usize>> = self.facets.iter().map(|f| f.tight.clone()).collect();
        while let Some(face) = frontier.pop() {
            if !all.insert(face.clone()) {
                continue;
            }
            for f in &self.facets {
                let meet: Vec<usize> = face.iter().copied().filter(|i| f.tight.contains(i)).collect();
                if !all.contains(&meet) {
                    frontier.push(meet);
                }
            }
        }
        all.into_iter().collect()
    }

    /// Whether the given local index set is a face.
    pub fn is_face(&self, local: &[usize]) -> bool {
        if local.len() == self.gens.len() {
            return true;
        }
        // a face is the intersection of the facets containing it
        let mut meet: Vec<usize> = (0..self.gens.len()).collect();
        for f in &self.facets {
            if local.iter().all(|i| f.tight.contains(i)) {
                meet.retain(|i| f.tight.contains(i));
            }
        }
        meet == local
    }
}

/// Extreme rays of the pointed cone `{x : eqs·x = 0, ineqs·x >= 0}`.
pub(crate) fn extreme_rays(n: usize, ineqs: &[IntVector], eqs: &[IntVector]) -> Vec<IntVector> {
    let e = span_rank(n, eqs);
    if e + 1 > n {
        return Vec::new();
    }
    let need = n - 1 - e;
    let mut found: Vec<IntVector> = Vec::new();
    for subset in (0..ineqs.len()).combinations(need) {
        let mut rows: Vec<IntVector> = eqs.to_vec();
        rows.extend(subset.iter().map(|&i| ineqs[i].clone()));
        if span_rank(n, &rows) != n - 1 {
            continue;
        }
        let kernel = orthogonal_basis(n, &rows);
        let r = &kernel[0];
        for cand in [r.clone(), r.neg()] {
            if ineqs.iter().all(|h| !h.dot(&cand).is_negative()) && !found.contains(&cand) {
                found.push(cand);
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64(x)
    }

    #[test]
    fn square_cone_faces() {
        let g = ConeGeometry::new(3, vec![v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), v(&[0, -1, 1])]);
        assert_eq!(g.dim, 3);
        assert!(g.is_pointed());
        assert_eq!(g.facets.len(), 4);
        let faces = g.faces();
        let by_size = |k| faces.iter().filter(|f| f.len() == k).count();
        assert_eq!((by_size(0), by_size(1), by_size(2), by_size(4)), (1, 4, 4, 1));
        assert!(!g.is_face(&[0, 2]));
        assert!(g.is_face(&[0, 1]));
    }

    #[test]
    fn half_plane_is_not_pointed() {
        let g = ConeGeometry::new(2, vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])]);
        assert!(!g.is_pointed());
        let line = ConeGeometry::new(2, vec![v(&[1, 1]), v(&[-1, -1])]);
        assert!(!line.is_pointed());
    }

    #[test]
    fn ray_and_zero_cone() {
        let ray = ConeGeometry::new(2, vec![v(&[1, 2])]);
        assert_eq!(ray.faces(), vec![vec![], vec![0]]);
        let zero = ConeGeometry::new(2, vec![]);
        assert_eq!(zero.faces(), vec![Vec::<usize>::new()]);
        assert!(zero.is_pointed());
    }

    #[test]
    fn intersection_rays() {
        // first quadrant ∩ cone((1,1),(-1,1)) = cone((1,1),(0,1))
        let ineqs = vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[-1, 1])];
        let mut rays = extreme_rays(2, &ineqs, &[]);
        rays.sort();
        assert_eq!(rays, vec![v(&[0, 1]), v(&[1, 1])]);
    }
}
