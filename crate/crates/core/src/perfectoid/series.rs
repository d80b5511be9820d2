use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Pow;

use super::PerfectoidBundle;
use crate::cohomology::{cohomology, Verdict};
use crate::divisor::{divisor_polytope, is_basepoint_free, TDivisor};
use crate::error::Result;
use crate::lattice_linalg::rational::Rational;
use crate::lattice_linalg::IntVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesVerdict {
    Vanishes,
    StabilizesToBasis,
    Growing,
}

impl SeriesVerdict {
    pub fn label(self) -> &'static str {
        match self {
            SeriesVerdict::Vanishes => "vanishes",
            SeriesVerdict::StabilizesToBasis => "stabilizes-to-basis",
            SeriesVerdict::Growing => "growing",
        }
    }
}

/// `dim H^i(X, O(p^n D))` for `n = 0..=n_max`, with the degrees carrying
/// each level's cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSeries {
    pub degree: usize,
    pub dims: Vec<u64>,
    /// `bases[n]`: degrees `m` with `H^i(X, O(p^n D))_m != 0`, sorted.
    pub bases: Vec<Vec<IntVector>>,
    /// `embeddings[n]`: whether `m ↦ p·m` sends `bases[n]` into `bases[n+1]`.
    pub embeddings: Vec<bool>,
    pub verdict: SeriesVerdict,
}

fn scaled_representative(l: &PerfectoidBundle, n: u32) -> TDivisor {
    l.representative().scaled(&BigInt::from(l.p()).pow(n))
}

fn embeds(p: u64, from: &[IntVector], into: &[IntVector]) -> bool {
    let target: BTreeSet<&IntVector> = into.iter().collect();
    let p = BigInt::from(p);
    from.iter().all(|m| target.contains(&m.scaled(&p)))
}

/// Level-wise cohomology of `L` computed on the representative `D`:
/// level `n` uses `p^n D`.
pub fn cohomology_series(l: &PerfectoidBundle, i: usize, n_max: u32) -> Result<LevelSeries> {
    let fan = l.context().fan();
    let mut dims = Vec::new();
    let mut bases = Vec::new();
    for n in 0..=n_max {
        let t = cohomology(fan, &scaled_representative(l, n), true)?;
        dims.push(t.dim(i));
        bases.push(t.degrees(i).unwrap_or_default());
    }
    let embeddings: Vec<bool> = bases.windows(2).map(|w| embeds(l.p(), &w[0], &w[1])).collect();
    let verdict = if dims.iter().all(|&d| d == 0) {
        SeriesVerdict::Vanishes
    } else if embeddings.iter().all(|&e| e) {
        SeriesVerdict::StabilizesToBasis
    } else {
        SeriesVerdict::Growing
    };
    Ok(LevelSeries { degree: i, dims, bases, embeddings, verdict })
}

/// `dim P_D` for a representative `D`; `-1` when `P_D` is empty.
pub fn d_l(l: &PerfectoidBundle) -> Result<isize> {
    Ok(divisor_polytope(l.context().fan(), &l.representative())?.dim())
}

/// First `t <= n_max` with `p^t D` basepoint free.
fn basepoint_free_level(l: &PerfectoidBundle, n_max: u32) -> Result<Option<u32>> {
    let fan = l.context().fan();
    for t in 0..=n_max {
        if is_basepoint_free(fan, &scaled_representative(l, t))? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectoidDemazureReport {
    pub verdict: Verdict,
    pub basepoint_free_level: Option<u32>,
    /// One series per degree `1..=n`.
    pub series: Vec<LevelSeries>,
}

/// For globally generated `L`: the level series vanish in every positive
/// degree.
pub fn perfectoid_demazure(l: &PerfectoidBundle, n_max: u32) -> Result<PerfectoidDemazureReport> {
    let Some(t) = basepoint_free_level(l, n_max)? else {
        return Ok(PerfectoidDemazureReport {
            verdict: Verdict::NotApplicable(format!("no basepoint-free representative up to level {n_max}")),
            basepoint_free_level: None,
            series: Vec::new(),
        });
    };
    let n = l.context().fan().rank();
    let series = (1..=n).map(|i| cohomology_series(l, i, n_max)).collect::<Result<Vec<_>>>()?;
    let failures: Vec<String> = series
        .iter()
        .filter(|s| s.verdict != SeriesVerdict::Vanishes)
        .map(|s| format!("H^{} series {:?}", s.degree, s.dims))
        .collect();
    Ok(PerfectoidDemazureReport {
        verdict: if failures.is_empty() { Verdict::Pass } else { Verdict::Fail(failures.join("; ")) },
        basepoint_free_level: Some(t),
        series,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectoidBbReport {
    pub verdict: Verdict,
    pub d_l: isize,
    /// `dims[n][i] = dim H^i(X, O(-p^n D))`.
    pub dims: Vec<Vec<u64>>,
    /// `|Relint(p^n P_D) ∩ M|` per level.
    pub interior_counts: Vec<u64>,
    /// Cohomology degrees in `H^{d_L}` per level; these are `-(Relint(p^n P_D) ∩ M)`.
    pub level_bases: Vec<Vec<IntVector>>,
    pub embeddings: Vec<bool>,
    /// `Relint(P_D) ∩ p^{-n_max} M`, read off the last level.
    pub truncated_basis: Vec<Vec<Rational>>,
}

/// For globally generated `L`, the cohomology of `L^{-1}`: zero outside
/// degree `d_L`, and in degree `d_L` spanned level by level by the relative
/// interior points of `p^n P_D`, compatibly with `m ↦ p·m`.
pub fn perfectoid_bb(l: &PerfectoidBundle, n_max: u32) -> Result<PerfectoidBbReport> {
    let fan = l.context().fan();
    let empty = |verdict| PerfectoidBbReport {
        verdict,
        d_l: -1,
        dims: Vec::new(),
        interior_counts: Vec::new(),
        level_bases: Vec::new(),
        embeddings: Vec::new(),
        truncated_basis: Vec::new(),
    };
    if basepoint_free_level(l, n_max)?.is_none() {
        return Ok(empty(Verdict::NotApplicable(format!(
            "no basepoint-free representative up to level {n_max}"
        ))));
    }
    let top = d_l(l)?;
    if top < 0 {
        return Ok(empty(Verdict::NotApplicable("P_D is empty".into())));
    }
    let mut problems = Vec::new();
    let mut dims = Vec::new();
    let mut interior_counts = Vec::new();
    let mut level_bases = Vec::new();
    for n in 0..=n_max {
        let d = scaled_representative(l, n);
        let interior = divisor_polytope(fan, &d)?.lattice_points(true);
        let t = cohomology(fan, &d.neg(), true)?;
        let mut expected: Vec<IntVector> = interior.iter().map(IntVector::neg).collect();
        expected.sort();
        let found = t.degrees(top as usize).unwrap_or_default();
        for (&i, &dim) in &t.dims {
            let want = if i as isize == top { interior.len() as u64 } else { 0 };
            if dim != want {
                problems.push(format!("level {n}: H^{i} has dimension {dim}, expected {want}"));
            }
        }
        if found != expected {
            problems.push(format!("level {n}: graded basis differs from -Relint(p^n P_D)"));
        }
        dims.push(t.dims.values().copied().collect());
        interior_counts.push(interior.len() as u64);
        level_bases.push(found);
    }
    let embeddings: Vec<bool> = level_bases.windows(2).map(|w| embeds(l.p(), &w[0], &w[1])).collect();
    for (n, ok) in embeddings.iter().enumerate() {
        if !ok {
            problems.push(format!("m ↦ {}·m does not embed level {n} into level {}", l.p(), n + 1));
        }
    }
    let den = BigInt::from(l.p()).pow(n_max);
    let mut truncated_basis: Vec<Vec<Rational>> = level_bases
        .last()
        .map(|b| {
            b.iter().map(|m| m.entries().iter().map(|x| Rational::new(-x, den.clone())).collect()).collect()
        })
        .unwrap_or_default();
    truncated_basis.sort();
    Ok(PerfectoidBbReport {
        verdict: if problems.is_empty() { Verdict::Pass } else { Verdict::Fail(problems.join("; ")) },
        d_l: top,
        dims,
        interior_counts,
        level_bases,
        embeddings,
        truncated_basis,
    })
}
