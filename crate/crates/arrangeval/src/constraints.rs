//! Linear descriptions of the graded valuation spaces.
//!
//! The graded piece `V_k` of the degree filtration, written in flag
//! coordinates (one value per rank-`k` flag), is cut out by explicit linear
//! constraints:
//!
//! * **Reciprocity rows.** For every partial flag missing one interior
//!   codimension `m` (`0 < m < k`), the plain sum of the values over all
//!   completions vanishes. The per-edge orientation signs built into the
//!   jump operator make every coefficient `+1`; each row has at least two
//!   terms because a codimension-gap-two pair is always connected by at
//!   least two intermediate flats.
//!
//! * **Period rows** (toric). A flag value measures the jump of an
//!   underlying function on the cells of the flag's base flat; following a
//!   loop generating the base torus's first homology, the jumps must sum to
//!   zero. For a rank-`(k−1)` flag ending at `F` and a loop `ℓ`, the
//!   coefficient of the completion by a wall `M` is
//!   `ε(F, M) · Σ direction signs` over the crossings of `ℓ` through `M`.
//!
//! * **Compactified period rows** (affine, top level). A one-dimensional
//!   flat traversed from end to end must also see jumps summing to zero
//!   when the function vanishes far out — the constraint satisfied exactly
//!   by the compactly supported part of the valuation space.
//!
//! `verify_toric_descriptions` / `verify_pseudoaffine_descriptions` /
//! `verify_compact_description` confirm that the solution spaces of these
//! systems coincide with the graded pieces computed independently from the
//! jump filtration — exact subspace equality, no tolerances.

use crate::affine::AffineGeometry;
use crate::chains::{degree_filtration, flag_values, Filtration};
use crate::geometry::{
    completions, enumerate_anchors, enumerate_flags, extension_sign, flag_label, FlatId, Geometry,
    GeometryError,
};
use crate::linalg::{kernel_basis, Matrix, Subspace, subspace_equal};
use crate::rational::Q;
use crate::toric::ToricGeometry;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Coordinate layout of flag functions at one level: one coordinate per
/// rank-`level` flag, in lexicographic flag order.
#[derive(Debug, Clone)]
pub struct FlagBasis {
    level: usize,
    flags: Vec<Vec<FlatId>>,
    index: BTreeMap<Vec<FlatId>, usize>,
}

impl FlagBasis {
    /// Flags of the given rank, ordered.
    pub fn new<G: Geometry + ?Sized>(g: &G, level: usize) -> FlagBasis {
        let flags = enumerate_flags(g, level);
        let index = flags
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        FlagBasis {
            level,
            flags,
            index,
        }
    }

    /// The rank of the flags.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Number of flags (the coordinate dimension).
    pub fn dim(&self) -> usize {
        self.flags.len()
    }

    /// The flags in coordinate order.
    pub fn flags(&self) -> &[Vec<FlatId>] {
        &self.flags
    }

    /// Coordinate of a flag.
    pub fn position(&self, flag: &[FlatId]) -> Option<usize> {
        self.index.get(flag).copied()
    }
}

/// Reciprocity rows at the basis level: one row per anchor (partial flag
/// missing an interior codimension), coefficient `+1` on each completion.
pub fn reciprocity_rows<G: Geometry + ?Sized>(g: &G, basis: &FlagBasis) -> Vec<Vec<Q>> {
    let k = basis.level();
    let mut rows = Vec::new();
    for m in 1..k {
        for anchor in enumerate_anchors(g, k, m) {
            let above = anchor[m - 1];
            let below = anchor[m];
            let mut row = vec![Q::zero(); basis.dim()];
            for mid in completions(g, above, below, m) {
                let mut flag = anchor[..m].to_vec();
                flag.push(mid);
                flag.extend_from_slice(&anchor[m..]);
                let pos = basis
                    .position(&flag)
                    .expect("completed anchors are flags");
                row[pos] += Q::from_integer(BigInt::from(1));
            }
            rows.push(row);
        }
    }
    rows
}

/// Period rows at the basis level: one row per (rank `k−1` flag, homology
/// loop of its base flat). The coefficient of the completion through a wall
/// `M` is `ε(F, M)` times the sum of the loop's crossing direction signs
/// at `M`.
pub fn period_rows<G: Geometry + ?Sized>(
    g: &G,
    basis: &FlagBasis,
) -> Result<Vec<Vec<Q>>, GeometryError> {
    let k = basis.level();
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    for prefix in enumerate_flags(g, k - 1) {
        let base = *prefix.last().expect("flags are nonempty");
        for l in g.h1_loops(base) {
            let mut row = vec![Q::zero(); basis.dim()];
            for crossing in g.loop_crossings(base, l) {
                let eps = extension_sign(g, base, crossing.wall_flat)?;
                let mut flag = prefix.clone();
                flag.push(crossing.wall_flat);
                let pos = basis.position(&flag).expect("walls complete flags");
                row[pos] += Q::from_integer(BigInt::from(
                    i32::from(eps) * i32::from(crossing.direction_sign),
                ));
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Compactified period rows at the basis level: for rank `k−1` flags whose
/// base flat is a line, the jumps along a full traversal must sum to zero
/// (the contribution at infinity vanishes for compactly supported
/// valuations).
pub fn compact_period_rows(
    g: &AffineGeometry,
    basis: &FlagBasis,
) -> Result<Vec<Vec<Q>>, GeometryError> {
    let k = basis.level();
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    for prefix in enumerate_flags(g, k - 1) {
        let base = *prefix.last().expect("flags are nonempty");
        if g.dim() - g.codim(base) != 1 {
            continue;
        }
        let line = g.line_loop(base);
        let mut row = vec![Q::zero(); basis.dim()];
        for crossing in g.loop_crossings(base, &line) {
            let eps = extension_sign(g, base, crossing.wall_flat)?;
            let mut flag = prefix.clone();
            flag.push(crossing.wall_flat);
            let pos = basis.position(&flag).expect("walls complete flags");
            row[pos] += Q::from_integer(BigInt::from(
                i32::from(eps) * i32::from(crossing.direction_sign),
            ));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Solution space of a homogeneous row system over `dim` coordinates.
pub fn solution_space(dim: usize, rows: &[Vec<Q>]) -> Subspace {
    if rows.is_empty() {
        let identity: Vec<Vec<Q>> = (0..dim)
            .map(|i| {
                let mut e = vec![Q::zero(); dim];
                e[i] = Q::from_integer(BigInt::from(1));
                e
            })
            .collect();
        return Subspace::from_rows(dim, &identity);
    }
    let kernel = kernel_basis(&Matrix::from_rows(rows.to_vec()));
    Subspace::from_rows(dim, &kernel)
}

/// A violated cocycle condition: the anchor whose completion sum is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cocycle violated at anchor {anchor} (missing codimension {missing_level}): sum = {residual}")]
pub struct CocycleViolation {
    /// Label of the partial flag whose completions fail to cancel.
    pub anchor: String,
    /// The missing interior codimension.
    pub missing_level: usize,
    /// The nonzero completion sum, as a string.
    pub residual: String,
}

/// Check the reciprocity (cocycle) conditions for an explicit flag function,
/// reporting the first violated anchor.
pub fn cocycle_check<G: Geometry + ?Sized>(
    g: &G,
    basis: &FlagBasis,
    values: &[Q],
) -> Result<(), CocycleViolation> {
    assert_eq!(values.len(), basis.dim());
    let k = basis.level();
    for m in 1..k {
        for anchor in enumerate_anchors(g, k, m) {
            let mut sum = Q::zero();
            for mid in completions(g, anchor[m - 1], anchor[m], m) {
                let mut flag = anchor[..m].to_vec();
                flag.push(mid);
                flag.extend_from_slice(&anchor[m..]);
                let pos = basis.position(&flag).expect("completed anchors are flags");
                sum += &values[pos];
            }
            if !sum.is_zero() {
                return Err(CocycleViolation {
                    anchor: flag_label(g, &anchor),
                    missing_level: m,
                    residual: crate::rational::format_q(&sum),
                });
            }
        }
    }
    Ok(())
}

/// Comparison of one graded piece against its linear description.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LevelCheck {
    /// The level (flag rank).
    pub level: usize,
    /// Number of flags at this level.
    pub flag_count: usize,
    /// Dimension of the graded piece from the jump filtration.
    pub graded_dim: usize,
    /// Dimension of the solution space of the description.
    pub solution_dim: usize,
    /// Exact subspace equality.
    pub equal: bool,
}

/// Per-level comparison results for a whole arrangement.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DescriptionReport {
    /// One entry per level `0..=n`.
    pub levels: Vec<LevelCheck>,
    /// All levels matched.
    pub all_equal: bool,
}

fn check_levels<G: Geometry + ?Sized>(
    g: &G,
    filt: &Filtration,
    with_periods: bool,
) -> Result<DescriptionReport, GeometryError> {
    let n = g.dim();
    let mut levels = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let basis = FlagBasis::new(g, k);
        let mut rows = reciprocity_rows(g, &basis);
        if with_periods {
            rows.extend(period_rows(g, &basis)?);
        }
        let sol = solution_space(basis.dim(), &rows);
        let graded = &filt.graded[k];
        levels.push(LevelCheck {
            level: k,
            flag_count: basis.dim(),
            graded_dim: graded.dim(),
            solution_dim: sol.dim(),
            equal: subspace_equal(&sol, graded),
        });
    }
    let all_equal = levels.iter().all(|l| l.equal);
    Ok(DescriptionReport { levels, all_equal })
}

/// Verify that every toric graded piece equals the solutions of its
/// reciprocity-plus-period description.
pub fn verify_toric_descriptions(g: &ToricGeometry) -> Result<DescriptionReport, GeometryError> {
    let filt = degree_filtration(g)?;
    check_levels(g, &filt, true)
}

/// Verify that every affine graded piece equals the solutions of the
/// reciprocity-only description (the finite-flag form of the pseudoaffine
/// description: the unknowns at infinity are already eliminated).
pub fn verify_pseudoaffine_descriptions(
    g: &AffineGeometry,
) -> Result<DescriptionReport, GeometryError> {
    let filt = degree_filtration(g)?;
    check_levels(g, &filt, false)
}

/// Comparison of the compactly supported top-level space against its
/// description.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CompactDescriptionReport {
    /// Number of top-level flags.
    pub flag_count: usize,
    /// Dimension of the span of jump images of bounded-cell indicators.
    pub compact_dim: usize,
    /// Dimension of the reciprocity + compactified-period solution space.
    pub solution_dim: usize,
    /// Exact subspace equality.
    pub equal: bool,
    /// The compact space lies inside the reciprocity-only solutions.
    pub contained_in_reciprocity: bool,
}

/// Verify the description of the compactly supported part at the top level
/// of an affine arrangement: the span of `P_n`-images of bounded-chamber
/// indicators equals the solutions of reciprocity plus compactified period
/// rows, and is contained in the reciprocity-only solutions.
pub fn verify_compact_description(
    g: &AffineGeometry,
) -> Result<CompactDescriptionReport, GeometryError> {
    let n = g.dim();
    let filt = degree_filtration(g)?;
    let basis = FlagBasis::new(g, n);
    let ambient = crate::geometry::ambient_flat(g);
    let c0 = filt.spaces[0].dim();
    let mut image_rows = Vec::new();
    for cell in 0..g.cell_count(ambient) {
        if !g.cell_bounded(ambient, crate::geometry::CellId(cell)) {
            continue;
        }
        let mut e = vec![Q::zero(); c0];
        e[cell] = Q::from_integer(BigInt::from(1));
        let image = filt.composed[n].apply(&e);
        let values = flag_values(&filt.spaces[n], &image)
            .expect("top-level chains are flag-constant");
        image_rows.push(values);
    }
    let compact = Subspace::from_rows(basis.dim(), &image_rows);
    let mut rows = reciprocity_rows(g, &basis);
    let rec_only = solution_space(basis.dim(), &rows);
    rows.extend(compact_period_rows(g, &basis)?);
    let sol = solution_space(basis.dim(), &rows);
    Ok(CompactDescriptionReport {
        flag_count: basis.dim(),
        compact_dim: compact.dim(),
        solution_dim: sol.dim(),
        equal: subspace_equal(&compact, &sol),
        contained_in_reciprocity: compact.is_contained_in(&rec_only),
    })
}
