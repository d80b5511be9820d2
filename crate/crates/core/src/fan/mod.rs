//! Rational polyhedral fans stored by their maximal cones.

pub(crate) mod geometry;
pub mod named;
pub mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::lattice_linalg::{smith_normal_form, IntMatrix, IntVector};
use geometry::{extreme_rays, span_rank, ConeGeometry};

/// Largest supported lattice rank.
pub const MAX_RANK: usize = 6;

/// A cone of a fan, as a sorted set of indices into the fan's ray list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    ray_indices: Vec<usize>,
    dim: usize,
}

impl Cone {
    pub fn ray_indices(&self) -> &[usize] {
        &self.ray_indices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains_ray(&self, ray: usize) -> bool {
        self.ray_indices.binary_search(&ray).is_ok()
    }

    pub fn is_zero(&self) -> bool {
        self.ray_indices.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.ray_indices.len() == self.dim
    }

    /// Common rays of the two cones.
    pub fn common_rays(&self, other: &Cone) -> Vec<usize> {
        self.ray_indices.iter().copied().filter(|r| other.contains_ray(*r)).collect()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.ray_indices.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// Outcome of fan validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanReport {
    pub valid: bool,
    pub smooth: bool,
    pub complete: bool,
    pub simplicial: bool,
    pub diagnostics: Vec<String>,
}

/// A fan in `N_R ≅ R^n`, stored by primitive rays and maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<IntVector>,
    max_cones: Vec<Cone>,
    geometry: Vec<ConeGeometry>,
}

impl Fan {
    /// Builds a fan. Rays are made primitive (divided by their content);
    /// zero rays, wrong lengths, duplicate rays and out-of-range indices are
    /// rejected. Geometric validity is checked separately by
    /// [`Fan::validate`].
    pub fn new(rank: usize, rays: Vec<IntVector>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if rank > MAX_RANK {
            return Err(Error::RankTooLarge(rank));
        }
        if rays.is_empty() {
            return Err(Error::NoRays);
        }
        if max_cones.is_empty() {
            return Err(Error::NoCones);
        }
        let mut prim = Vec::with_capacity(rays.len());
        for (index, r) in rays.into_iter().enumerate() {
            if r.len() != rank {
                return Err(Error::RayDimension { index, expected: rank, found: r.len() });
            }
            if r.is_zero() {
                return Err(Error::ZeroRay(index));
            }
            let g = r.content();
            let p = IntVector(r.0.iter().map(|x| x / &g).collect());
            if let Some(first) = prim.iter().position(|q: &IntVector| *q == p) {
                return Err(Error::DuplicateRay { first, second: index });
            }
            prim.push(p);
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (ci, idx) in max_cones.into_iter().enumerate() {
            if let Some(&bad) = idx.iter().find(|&&i| i >= prim.len()) {
                return Err(Error::RayIndexOutOfRange { cone: ci, index: bad });
            }
            let set: BTreeSet<usize> = idx.into_iter().collect();
            cones.push(set.into_iter().collect::<Vec<_>>());
        }
        let geometry: Vec<ConeGeometry> = cones
            .iter()
            .map(|c| ConeGeometry::new(rank, c.iter().map(|&i| prim[i].clone()).collect()))
            .collect();
        let max_cones = cones
            .into_iter()
            .zip(&geometry)
            .map(|(ray_indices, g)| Cone { ray_indices, dim: g.dim })
            .collect();
        Ok(Fan { rank, rays: prim, max_cones, geometry })
    }

    pub fn from_i64(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Result<Fan> {
        Fan::new(
            rank,
            rays.iter().map(|r| IntVector::from_i64(r)).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &IntVector {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    /// Rays as the rows of a `#rays × n` matrix: the map `m ↦ (<m,u_ρ>)_ρ`.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.rank, &self.rays)
    }

    /// The cone spanned by the given rays.
    pub fn cone(&self, ray_indices: &[usize]) -> Cone {
        let set: BTreeSet<usize> = ray_indices.iter().copied().collect();
        let ray_indices: Vec<usize> = set.into_iter().collect();
        let gens: Vec<IntVector> = ray_indices.iter().map(|&i| self.rays[i].clone()).collect();
        Cone { dim: span_rank(self.rank, &gens), ray_indices }
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones.iter().all(Cone::is_simplicial)
    }

    /// Whether every maximal cone has dimension `n`.
    pub fn is_pure_full_dimensional(&self) -> bool {
        self.max_cones.iter().all(|c| c.dim == self.rank)
    }

    /// Runs every structural check and reports the findings.
    pub fn validate(&self) -> FanReport {
        let mut diagnostics = Vec::new();
        let valid = self.check_valid(&mut diagnostics);
        let smooth = self.is_smooth();
        let simplicial = self.is_simplicial();
        let complete = if valid {
            self.completeness(&mut diagnostics)
        } else {
            diagnostics.push("completeness not evaluated: fan is invalid".to_string());
            false
        };
        FanReport { valid, smooth, complete, simplicial, diagnostics }
    }

    fn check_valid(&self, diag: &mut Vec<String>) -> bool {
        for (ci, g) in self.geometry.iter().enumerate() {
            if !g.is_pointed() {
                diag.push(format!("cone {ci} {} is not strongly convex", self.max_cones[ci]));
                return false;
            }
        }
        for (ci, g) in self.geometry.iter().enumerate() {
            let cone = &self.max_cones[ci];
            for local in 0..cone.ray_indices.len() {
                if !g.is_face(&[local]) {
                    diag.push(format!(
                        "ray {} is not an extremal ray of cone {ci} {cone}",
                        cone.ray_indices[local]
                    ));
                    return false;
                }
            }
        }
        for r in 0..self.rays.len() {
            if !self.max_cones.iter().any(|c| c.contains_ray(r)) {
                diag.push(format!("ray {r} {} lies in no cone", self.rays[r]));
                return false;
            }
        }
        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                if let Err(msg) = self.check_pair(i, j) {
                    diag.push(msg);
                    return false;
                }
            }
        }
        for (i, a) in self.max_cones.iter().enumerate() {
            for (j, b) in self.max_cones.iter().enumerate() {
                if i != j && a.ray_indices.iter().all(|r| b.contains_ray(*r)) {
                    diag.push(format!("cone {i} {a} is a face of cone {j} {b} and not maximal"));
                }
            }
        }
        true
    }

    /// Checks that `σ_i ∩ σ_j` is a face of both, spanned by the common rays.
    fn check_pair(&self, i: usize, j: usize) -> std::result::Result<(), String> {
        let (a, b) = (&self.max_cones[i], &self.max_cones[j]);
        let common = a.common_rays(b);
        for (ci, cone) in [(i, a), (j, b)] {
            let local: Vec<usize> =
                common.iter().map(|r| cone.ray_indices.binary_search(r).expect("common ray")).collect();
            if !self.geometry[ci].is_face(&local) {
                return Err(format!(
                    "common rays {common:?} of cones {i} {a} and {j} {b} do not form a face of cone {ci}"
                ));
            }
        }
        let (ga, gb) = (&self.geometry[i], &self.geometry[j]);
        let ineqs: Vec<IntVector> = ga.facets.iter().chain(&gb.facets).map(|f| f.normal.clone()).collect();
        let eqs: Vec<IntVector> = ga.perp.iter().chain(&gb.perp).cloned().collect();
        let common_gens: Vec<IntVector> = common.iter().map(|&r| self.rays[r].clone()).collect();
        let common_rank = span_rank(self.rank, &common_gens);
        for r in extreme_rays(self.rank, &ineqs, &eqs) {
            let mut with = common_gens.clone();
            with.push(r.clone());
            if span_rank(self.rank, &with) != common_rank {
                return Err(format!("cones {i} {a} and {j} {b} meet along {r}, outside their common face"));
            }
        }
        Ok(())
    }

    /// Every cone's generators extend to a basis of `N`.
    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| self.cone_is_smooth(c))
    }

    pub fn cone_is_smooth(&self, cone: &Cone) -> bool {
        if cone.is_zero() {
            return true;
        }
        let gens: Vec<IntVector> = cone.ray_indices.iter().map(|&i| self.rays[i].clone()).collect();
        let snf = smith_normal_form(&IntMatrix::from_rows(self.rank, &gens));
        snf.rank == gens.len() && snf.invariant_factors().iter().all(One::is_one)
    }

    /// Support equals `N_R`: facet-pairing criterion on a valid fan.
    pub fn is_complete(&self) -> bool {
        let mut diag = Vec::new();
        self.check_valid(&mut diag) && self.completeness(&mut diag)
    }

    fn completeness(&self, diag: &mut Vec<String>) -> bool {
        if let Some((i, c)) = self.max_cones.iter().enumerate().find(|(_, c)| c.dim != self.rank) {
            diag.push(format!("cone {i} {c} has dimension {} < {}; fan is not complete", c.dim, self.rank));
            return false;
        }
        let mut incidence: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, g) in self.geometry.iter().enumerate() {
            let cone = &self.max_cones[ci];
            for f in &g.facets {
                let global: Vec<usize> = f.tight.iter().map(|&l| cone.ray_indices[l]).collect();
                incidence.entry(global).or_default().push(ci);
            }
        }
        for (facet, owners) in &incidence {
            if owners.len() != 2 {
                diag.push(format!(
                    "facet {facet:?} lies in {} maximal cone(s); fan is not complete",
                    owners.len()
                ));
                return false;
            }
        }
        // dual graph connectivity
        let k = self.max_cones.len();
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for owners in incidence.values() {
                if owners.contains(&c) {
                    for &o in owners {
                        if !seen[o] {
                            seen[o] = true;
                            stack.push(o);
                        }
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            diag.push("dual graph of maximal cones is disconnected".to_string());
            return false;
        }
        true
    }

    fn containing_max_cone(&self, cone: &Cone) -> Option<usize> {
        self.max_cones.iter().position(|m| cone.ray_indices.iter().all(|r| m.contains_ray(*r)))
    }

    /// All faces of a cone of the fan, including the zero cone and the cone
    /// itself.
    pub fn faces(&self, cone: &Cone) -> Vec<Cone> {
        let geom = match self.max_cones.iter().position(|m| m == cone) {
            Some(i) => self.geometry[i].clone(),
            None => {
                ConeGeometry::new(self.rank, cone.ray_indices.iter().map(|&i| self.rays[i].clone()).collect())
            }
        };
        let mut out: Vec<Cone> = geom
            .faces()
            .into_iter()
            .map(|local| {
                let global: Vec<usize> = local.iter().map(|&l| cone.ray_indices[l]).collect();
                self.cone(&global)
            })
            .collect();
        out.sort_by(|a, b| (a.dim, &a.ray_indices).cmp(&(b.dim, &b.ray_indices)));
        out
    }

    /// `c1 ∩ c2` as a cone of the fan. Fails when the two cones do not meet
    /// in a common face.
    pub fn cone_intersection(&self, c1: &Cone, c2: &Cone) -> Result<Cone> {
        let common = c1.common_rays(c2);
        let (Some(i), Some(j)) = (self.containing_max_cone(c1), self.containing_max_cone(c2)) else {
            return Err(Error::InvalidFan("cone does not belong to the fan".to_string()));
        };
        if i != j {
            self.check_pair(i, j).map_err(Error::InvalidFan)?;
        }
        Ok(self.cone(&common))
    }

    /// Generator matrix (rows) of a cone.
    pub fn cone_generators(&self, cone: &Cone) -> IntMatrix {
        let gens: Vec<IntVector> = cone.ray_indices.iter().map(|&i| self.rays[i].clone()).collect();
        IntMatrix::from_rows(self.rank, &gens)
    }

    /// `|det|` of the generators of a full-dimensional simplicial cone.
    pub fn multiplicity(&self, cone: &Cone) -> Option<BigInt> {
        (cone.is_simplicial() && cone.dim == self.rank)
            .then(|| self.cone_generators(cone).determinant().abs())
    }

    /// Indices of the maximal cones containing `v`.
    pub fn cones_containing(&self, v: &IntVector) -> Vec<usize> {
        (0..self.max_cones.len()).filter(|&i| self.geometry[i].contains(v)).collect()
    }

    /// Same fan with rays and cones reordered: `ray_perm[new] = old` and
    /// `cone_perm[new] = old`.
    pub fn permuted(&self, ray_perm: &[usize], cone_perm: &[usize]) -> Result<Fan> {
        let mut inverse = vec![0; ray_perm.len()];
        for (new, &old) in ray_perm.iter().enumerate() {
            inverse[old] = new;
        }
        let rays = ray_perm.iter().map(|&o| self.rays[o].clone()).collect();
        let cones = cone_perm
            .iter()
            .map(|&o| self.max_cones[o].ray_indices.iter().map(|&r| inverse[r]).collect())
            .collect();
        Fan::new(self.rank, rays, cones)
    }
}
