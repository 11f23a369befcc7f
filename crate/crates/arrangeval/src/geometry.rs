//! The common interface of affine and toric arrangement geometries.
//!
//! Both backends expose the same combinatorial skeleton:
//!
//! - a finite poset of **flats** (connected components of intersections of
//!   hyperplanes, the ambient space included), each carrying a canonical
//!   *reference frame* — the Hermite-normal-form basis of its saturated
//!   conormal lattice — a lattice basis of its direction space, and a base
//!   point;
//! - per flat, a finite list of **top cells** (chambers of the induced
//!   arrangement on the flat) with generic interior points, a wall-crossing
//!   adjacency structure, and point location;
//! - per flat, generating **loops** of its first homology (empty in the
//!   affine case) with their transversal wall crossings.
//!
//! The chain, constraint, integration, and invariant layers are written
//! against this trait only, so every theorem-level computation runs uniformly
//! on both geometries.

use crate::lattice::IntMatrix;
use crate::linalg::{relative_orientation, Matrix};
use crate::rational::Q;
use num_bigint::BigInt;
use num_traits::Zero;

/// Index of a flat in an arrangement's flat table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlatId(pub usize);

/// Index of a top cell within a flat's cell table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub usize);

/// A generating loop of a flat's first homology, in the flat's local
/// lattice coordinates: `t ↦ base + t · direction`, `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopClass {
    /// Base point in local coordinates, generic for every induced hyperplane.
    pub base: Vec<Q>,
    /// Primitive lattice direction in local coordinates.
    pub direction: Vec<BigInt>,
}

/// A transversal crossing of a loop with a wall flat.
#[derive(Debug, Clone)]
pub struct LoopCrossing {
    /// The wall flat crossed.
    pub wall_flat: FlatId,
    /// The top cell of the wall flat containing the crossing point.
    pub wall_cell: CellId,
    /// Sign of `u_M · d`: `+1` when the loop crosses toward the positive
    /// side of the wall's canonical relative conormal `u_M`.
    pub direction_sign: i8,
}

/// A directed wall crossing between two top cells of a flat.
#[derive(Debug, Clone)]
pub struct WallCrossing {
    /// Cell the crossing starts in.
    pub from: CellId,
    /// Cell the crossing ends in.
    pub to: CellId,
    /// The codimension-one flat containing the shared facet.
    pub wall_flat: FlatId,
    /// The top cell of the wall flat containing the facet's interior.
    pub wall_cell: CellId,
    /// `+1` when `to` lies on the positive side of the wall's canonical
    /// relative conormal, locally at this crossing.
    pub to_side: i8,
}

/// Errors raised by geometric queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    /// The query point does not lie on the flat.
    #[error("point does not lie on flat {0}")]
    NotInFlat(String),
    /// The query point lies on an induced hyperplane and no direction was
    /// given to break the tie.
    #[error("point lies on an induced hyperplane of flat {0}; a direction is required")]
    OnHyperplane(String),
    /// The tie-break direction is tangent to the separating hyperplane.
    #[error("direction is tangent to an induced hyperplane of flat {0}")]
    TangentDirection(String),
    /// A direction vector does not lie in the flat's direction space.
    #[error("direction does not lie in the direction space of flat {0}")]
    DirectionNotInFlat(String),
    /// Internal table lookup failed; indicates an enumeration bug.
    #[error("located cell is missing from the cell table of flat {0}")]
    UnknownCell(String),
    /// Frame comparison failed (row spaces differ).
    #[error("frames span different spaces: {0}")]
    FrameMismatch(String),
}

/// The common interface of arrangement geometries.
pub trait Geometry {
    /// Ambient dimension `n`.
    fn dim(&self) -> usize;

    /// Number of flats (the ambient flat included).
    fn flat_count(&self) -> usize;

    /// Codimension of a flat.
    fn codim(&self, f: FlatId) -> usize;

    /// Reference frame: HNF basis of the saturated conormal lattice,
    /// `codim × n`. Empty (0-row) for the ambient flat.
    fn frame(&self, f: FlatId) -> &IntMatrix;

    /// Lattice basis of the direction space, `(n − codim) × n` rows.
    fn direction_basis(&self, f: FlatId) -> &IntMatrix;

    /// A point on the flat, in ambient coordinates.
    fn base_point(&self, f: FlatId) -> &[Q];

    /// Flats of codimension `codim(f) + 1` contained in `f`, ascending.
    fn walls(&self, f: FlatId) -> &[FlatId];

    /// Containment of flats (`inner ⊆ outer`).
    fn contains_flat(&self, outer: FlatId, inner: FlatId) -> bool;

    /// Number of top cells of the induced arrangement on the flat.
    fn cell_count(&self, f: FlatId) -> usize;

    /// Generic interior point of a top cell, in ambient coordinates.
    fn interior_point(&self, f: FlatId, c: CellId) -> &[Q];

    /// Whether the top cell is bounded (always true on the torus).
    fn cell_bounded(&self, f: FlatId, c: CellId) -> bool;

    /// Lattice-normalized volume of the cell. `None` for unbounded cells
    /// and for flats of dimension greater than three.
    fn cell_volume(&self, f: FlatId, c: CellId) -> Option<Q>;

    /// Whether an ambient point lies on the flat.
    fn on_flat(&self, f: FlatId, q: &[Q]) -> bool;

    /// Locate the top cell of `f` containing `q` (ambient coordinates),
    /// nudged by `+ε·w` when a direction `w` is supplied.
    fn locate(&self, f: FlatId, q: &[Q], w: Option<&[Q]>) -> Result<CellId, GeometryError>;

    /// All directed wall crossings between top cells of `f`.
    fn adjacency(&self, f: FlatId) -> &[WallCrossing];

    /// Generators of the flat's first homology (empty for affine flats).
    fn h1_loops(&self, f: FlatId) -> &[LoopClass];

    /// Transversal crossings of a loop of `f` with the walls of `f`,
    /// in a deterministic order.
    fn loop_crossings(&self, f: FlatId, l: &LoopClass) -> Vec<LoopCrossing>;

    /// Canonical human-readable label of a flat (stable across runs).
    fn flat_label(&self, f: FlatId) -> String;
}

/// The ambient flat (codimension zero). Both backends sort flats by
/// codimension first, so it is always index zero.
pub fn ambient_flat<G: Geometry + ?Sized>(g: &G) -> FlatId {
    debug_assert_eq!(g.codim(FlatId(0)), 0);
    FlatId(0)
}

/// All flags of rank `k`: chains `L⁰ ⊃ L¹ ⊃ … ⊃ Lᵏ` with `codim(Lⁱ) = i`,
/// as vectors of flat ids, in lexicographic order.
pub fn enumerate_flags<G: Geometry + ?Sized>(g: &G, k: usize) -> Vec<Vec<FlatId>> {
    let mut result = Vec::new();
    let mut stack = vec![vec![ambient_flat(g)]];
    while let Some(chain) = stack.pop() {
        if chain.len() == k + 1 {
            result.push(chain);
            continue;
        }
        let last = *chain.last().expect("chain is nonempty");
        for &w in g.walls(last) {
            let mut next = chain.clone();
            next.push(w);
            stack.push(next);
        }
    }
    result.sort();
    result
}

/// Partial flags of rank `k` with the level of codimension `m` removed
/// (`0 < m < k`): chains with codimensions `{0,…,k} \ {m}`.
pub fn enumerate_anchors<G: Geometry + ?Sized>(g: &G, k: usize, m: usize) -> Vec<Vec<FlatId>> {
    assert!(m > 0 && m < k, "anchor level must be interior");
    let mut result = Vec::new();
    // Build chains level by level, skipping codimension m: from a flat of
    // codimension m−1 jump to contained flats of codimension m+1.
    let mut stack = vec![vec![ambient_flat(g)]];
    while let Some(chain) = stack.pop() {
        let depth = chain.len(); // codims covered: 0..depth, with the gap applied later
        let covered = if depth <= m { depth - 1 } else { depth };
        if covered == k {
            result.push(chain);
            continue;
        }
        let last = *chain.last().expect("chain is nonempty");
        if covered + 1 == m {
            // Skip codimension m: extend by grandchildren.
            for &w in g.walls(last) {
                for &w2 in g.walls(w) {
                    let mut next = chain.clone();
                    next.push(w2);
                    stack.push(next);
                }
            }
        } else {
            for &w in g.walls(last) {
                let mut next = chain.clone();
                next.push(w);
                stack.push(next);
            }
        }
    }
    result.sort();
    result.dedup();
    result
}

/// Completions of an anchor: flats `M` of codimension `m` with
/// `above ⊃ M ⊃ below`.
pub fn completions<G: Geometry + ?Sized>(
    g: &G,
    above: FlatId,
    below: FlatId,
    m: usize,
) -> Vec<FlatId> {
    (0..g.flat_count())
        .map(FlatId)
        .filter(|&f| {
            g.codim(f) == m && g.contains_flat(above, f) && g.contains_flat(f, below)
        })
        .collect()
}

/// The canonical relative conormal of `inner` within `outer`: the first row
/// of `inner`'s reference frame that does not lie in the rational row span
/// of `outer`'s frame.
pub fn relative_conormal<G: Geometry + ?Sized>(
    g: &G,
    outer: FlatId,
    inner: FlatId,
) -> Vec<BigInt> {
    let outer_frame = g.frame(outer).to_rational();
    let inner_frame = g.frame(inner);
    let outer_rank = outer_frame.rank();
    for i in 0..inner_frame.nrows() {
        let row: Vec<Q> = inner_frame
            .row(i)
            .iter()
            .map(|x| Q::from_integer(x.clone()))
            .collect();
        let mut stacked = outer_frame.to_rows();
        stacked.push(row);
        if Matrix::from_rows(stacked).rank() > outer_rank {
            return inner_frame.row(i).to_vec();
        }
    }
    panic!("inner frame does not extend outer frame (flats are not nested)");
}

/// Sign relating an explicit coorientation frame of a flat to the flat's
/// reference frame: `+1` when the frame rows express positively oriented
/// against the reference rows.
pub fn sign_against_reference<G: Geometry + ?Sized>(
    g: &G,
    frame_rows: &IntMatrix,
    flat: FlatId,
) -> Result<i8, GeometryError> {
    relative_orientation(&frame_rows.to_rational(), &g.frame(flat).to_rational())
        .map_err(|e| GeometryError::FrameMismatch(e.to_string()))
}

/// The composed coorientation frame of a flag: the reference frame of the
/// parent flag's base, extended by the canonical relative conormal of the
/// last flat. Equals the whole-flag frame used to express jump values.
pub fn flag_step_frame<G: Geometry + ?Sized>(g: &G, parent_base: FlatId, base: FlatId) -> IntMatrix {
    let u = relative_conormal(g, parent_base, base);
    let parent = g.frame(parent_base);
    let mut rows = parent.to_rows();
    rows.push(u);
    IntMatrix::from_rows(rows)
}

/// The sign `ε` of a flag extension: orientation of the composed frame
/// (parent reference + canonical relative conormal) against the reference
/// frame of the extension's base flat.
pub fn extension_sign<G: Geometry + ?Sized>(
    g: &G,
    parent_base: FlatId,
    base: FlatId,
) -> Result<i8, GeometryError> {
    let frame = flag_step_frame(g, parent_base, base);
    sign_against_reference(g, &frame, base)
}

/// Ambient jump direction across a wall flat within its parent: the
/// projection of the canonical relative conormal onto the parent's direction
/// space, an ambient vector positively paired with the conormal.
pub fn jump_direction<G: Geometry + ?Sized>(g: &G, parent: FlatId, wall: FlatId) -> Vec<Q> {
    let u = relative_conormal(g, parent, wall);
    let w = g.direction_basis(parent); // rows span the parent's directions
    // w_loc = W uᵀ, ambient = Wᵀ w_loc; then u · ambient = |W uᵀ|² > 0.
    let u_q: Vec<Q> = u.iter().map(|x| Q::from_integer(x.clone())).collect();
    let w_loc = w.to_rational().mul_vec(&u_q);
    debug_assert!(!w_loc.iter().all(Zero::is_zero), "wall conormal tangent to parent");
    let wt = w.to_rational().transpose();
    wt.mul_vec(&w_loc)
}

/// Human-readable flag label, stable across runs.
pub fn flag_label<G: Geometry + ?Sized>(g: &G, flag: &[FlatId]) -> String {
    flag.iter()
        .map(|&f| g.flat_label(f))
        .collect::<Vec<_>>()
        .join(" > ")
}
