//! Hadwiger invariants: face-flag detection, signed face volumes, and the
//! decomposition of cell functionals into Hadwiger combinations.
//!
//! A *label* is a flag together with an orientation sign for the base
//! flat's reference coorientation. The invariant `Υ` of a label evaluates a
//! polytope geometrically: find the face chain `F⁰ ⊃ … ⊃ F^k` whose affine
//! spans match the flag's flats (up to lattice translation on the torus),
//! orient it by the determinant of the base flat's reference frame against
//! the outward barycenter vectors `w_i = bary(F^k) − bary(F^i)`, and take
//! the signed lattice-normalized volume of `F^k`. Summing over all matching
//! face chains makes `Υ` a valuation: parallel faces of one polytope that
//! project to the same flat cancel or combine exactly as their indicator
//! chains do.
//!
//! The same number is computed homologically: `Υ` equals
//! `±(vol ∘ π_flag ∘ D^k)` on indicator chains, where `π_flag` projects a
//! level-`k` chain to one flag component and `vol` integrates against the
//! cell volumes. The sign relating the two routes is `(−1)^{k(k+1)/2}`:
//! each jump step differentiates along the inward vector between adjacent
//! face barycenters, while the geometric frame lists the outward vectors in
//! reversed order — one reflection per step plus one column reversal.
//! Both routes are
//! implemented and must agree exactly — this is the main internal
//! consistency check of the whole sign calculus.
//!
//! `valuation_decompose` peels a functional on top cells rank by rank:
//! whatever vanishes on chains of degree `< k` is matched by a combination
//! of rank-`k` invariants with coefficients `½ ν(1_label)`, read off
//! through the pivot coordinates of the graded piece; the table reproduces
//! the functional on every chain.

use crate::chains::Filtration;
use crate::geometry::{flag_label, FlatId, Geometry, GeometryError};
use crate::integration::{lift_to_chain, ChoiceStrategy, IntegrationError};
use crate::linalg::{subspace_equal, Matrix, Subspace};
use crate::polytope::{barycenter_of, volume_in_basis, Face, Polytope, PolytopeError};
use crate::rational::Q;
use crate::toric::ToricGeometry;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// An oriented flag: the flats of a flag plus a sign against the base
/// flat's reference coorientation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HadwigerLabel {
    /// The flag, ambient flat first.
    pub flag: Vec<FlatId>,
    /// Orientation sign, `+1` or `−1`, relative to the reference frame.
    pub orientation: i8,
}

impl HadwigerLabel {
    /// The rank (flag length minus one).
    pub fn rank(&self) -> usize {
        self.flag.len() - 1
    }

    /// The same flag with the opposite orientation.
    pub fn flipped(&self) -> HadwigerLabel {
        HadwigerLabel {
            flag: self.flag.clone(),
            orientation: -self.orientation,
        }
    }

    /// Human-readable label.
    pub fn display<G: Geometry + ?Sized>(&self, g: &G) -> String {
        format!(
            "{}{}",
            if self.orientation > 0 { "+" } else { "-" },
            flag_label(g, &self.flag)
        )
    }
}

/// Errors raised by Hadwiger evaluations.
#[derive(Debug, thiserror::Error)]
pub enum HadwigerError {
    /// A facet of the polytope does not lie on any arrangement hyperplane.
    #[error("facet not in arrangement: the facet spanned at {0} lies on no flat")]
    FacetNotInArrangement(String),
    /// A needed cell volume is undefined (unbounded cell).
    #[error("volume undefined on cell {cell} of flat {flat}")]
    VolumeUndefined {
        /// Flat label.
        flat: String,
        /// Cell index.
        cell: usize,
    },
    /// A geometric query failed.
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    /// A polytope computation failed.
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    /// A lift inside the decomposition failed.
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    /// A hyperplane map violates its preconditions.
    #[error("invalid hyperplane map: {0}")]
    InvalidMap(String),
}

/// Whether the affine span of a face matches a flat: equal direction
/// spans and a base vertex lying on the flat (lattice-translated on the
/// torus, exactly in affine space).
fn face_spans_flat<G: Geometry + ?Sized>(g: &G, face: &Face, flat: FlatId) -> bool {
    let n = g.dim();
    if face.dim != n - g.codim(flat) {
        return false;
    }
    let v0 = &face.vertices[0];
    if !g.on_flat(flat, v0) {
        return false;
    }
    let edges: Vec<Vec<Q>> = face.vertices[1..]
        .iter()
        .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    let span = Subspace::from_rows(n, &edges);
    let dir = Subspace::from_rows(n, &g.direction_basis(flat).to_rational().to_rows());
    subspace_equal(&span, &dir)
}

/// One matching face chain: the faces (outermost first) and the geometric
/// orientation sign of the innermost face against the reference frame.
#[derive(Debug, Clone)]
pub struct FaceChain {
    /// The face chain `F⁰ ⊃ … ⊃ F^k`, each as its vertex set.
    pub faces: Vec<Face>,
    /// Sign of the reference frame against the outward barycenter vectors.
    pub sign: i8,
}

fn contains_all(outer: &Face, inner: &Face) -> bool {
    inner.vertices.iter().all(|v| outer.vertices.contains(v))
}

/// All face chains of `p` matching a flag, with orientation signs.
pub fn matching_face_chains<G: Geometry + ?Sized>(
    g: &G,
    p: &Polytope,
    flag: &[FlatId],
) -> Result<Vec<FaceChain>, HadwigerError> {
    let n = g.dim();
    let k = flag.len() - 1;
    let faces = p.faces();
    let mut chains = Vec::new();
    'last: for last in faces.iter().filter(|f| f.dim == n - k) {
        if !face_spans_flat(g, last, flag[k]) {
            continue;
        }
        let mut chain = vec![last.clone()];
        for (i, &fi) in flag.iter().enumerate().take(k).skip(1).rev() {
            let step = faces.iter().find(|f| {
                f.dim == n - i && contains_all(f, last) && face_spans_flat(g, f, fi)
            });
            match step {
                Some(f) => chain.push(f.clone()),
                None => continue 'last,
            }
        }
        chain.push(Face {
            vertices: p.vertices().to_vec(),
            dim: p.affine_dim(),
        });
        chain.reverse();
        let sign = chain_sign(g, flag, &chain)?;
        chains.push(FaceChain { faces: chain, sign });
    }
    Ok(chains)
}

/// Determinant sign of `frame(L^k) · [w_{k−1}, …, w_0]` with outward
/// vectors `w_i = bary(F^k) − bary(F^i)`. `+1` for rank zero.
fn chain_sign<G: Geometry + ?Sized>(
    g: &G,
    flag: &[FlatId],
    chain: &[Face],
) -> Result<i8, HadwigerError> {
    let k = flag.len() - 1;
    if k == 0 {
        return Ok(1);
    }
    let last = barycenter_of(&chain[k].vertices);
    let frame = g.frame(flag[k]).to_rational();
    let cols: Vec<Vec<Q>> = (0..k)
        .rev()
        .map(|i| {
            let b = barycenter_of(&chain[i].vertices);
            last.iter().zip(&b).map(|(a, c)| a - c).collect()
        })
        .collect();
    let m = Matrix::from_fn(k, k, |r, c| {
        let row = frame.row(r);
        row.iter().zip(&cols[c]).map(|(a, b)| a * b).sum()
    });
    let det = m.det();
    assert!(
        !det.is_zero(),
        "matching face chains are transverse to the reference frame"
    );
    Ok(if det > Q::zero() { 1 } else { -1 })
}

/// Verify every facet of the polytope lies on a codimension-one flat.
pub fn ensure_arrangement_polytope<G: Geometry + ?Sized>(
    g: &G,
    p: &Polytope,
) -> Result<(), HadwigerError> {
    let n = g.dim();
    if p.affine_dim() < n {
        return Ok(());
    }
    let walls: Vec<FlatId> = (0..g.flat_count())
        .map(FlatId)
        .filter(|&f| g.codim(f) == 1)
        .collect();
    for face in p.faces().iter().filter(|f| f.dim == n - 1) {
        if !walls.iter().any(|&w| face_spans_flat(g, face, w)) {
            return Err(HadwigerError::FacetNotInArrangement(format!(
                "{:?}",
                face.vertices[0]
                    .iter()
                    .map(crate::rational::format_q)
                    .collect::<Vec<_>>()
            )));
        }
    }
    Ok(())
}

/// Detect whether a flag is a flag of the polytope; when exactly one face
/// chain matches, return its orientation sign (the first chain's sign when
/// several parallel faces match).
pub fn flag_of_polytope<G: Geometry + ?Sized>(
    g: &G,
    p: &Polytope,
    flag: &[FlatId],
) -> Result<Option<i8>, HadwigerError> {
    ensure_arrangement_polytope(g, p)?;
    let chains = matching_face_chains(g, p, flag)?;
    Ok(chains.first().map(|c| c.sign))
}

/// Geometric evaluation of a Hadwiger invariant on a polytope: the sum of
/// signed lattice-normalized volumes of matching faces.
pub fn hadwiger_eval<G: Geometry + ?Sized>(
    g: &G,
    label: &HadwigerLabel,
    p: &Polytope,
) -> Result<Q, HadwigerError> {
    ensure_arrangement_polytope(g, p)?;
    let base = label.flag[label.rank()];
    let mut total = Q::zero();
    for chain in matching_face_chains(g, p, &label.flag)? {
        let last = &chain.faces[label.rank()];
        let nvol = if last.dim == 0 {
            Q::one()
        } else {
            volume_in_basis(&last.vertices, &g.direction_basis(base).to_rational())?
        };
        total += sign_q(label.orientation) * sign_q(chain.sign) * nvol;
    }
    Ok(total)
}

fn sign_q(s: i8) -> Q {
    Q::from_integer(BigInt::from(i32::from(s)))
}

/// Homological evaluation of a Hadwiger invariant on a chain of top cells:
/// `(−1)^{k(k+1)/2} · orientation · Σ_σ vol(σ) · (D^k c)(flag, σ)`.
pub fn hadwiger_eval_chain<G: Geometry + ?Sized>(
    g: &G,
    filt: &Filtration,
    label: &HadwigerLabel,
    chain: &[Q],
) -> Result<Q, HadwigerError> {
    let k = label.rank();
    let image = filt.composed[k].apply(chain);
    let space = &filt.spaces[k];
    let fi = space
        .flag_position(&label.flag)
        .expect("label flags are flags of the geometry");
    let base = label.flag[k];
    let mut sum = Q::zero();
    for c in 0..space.cells_of(fi) {
        let coeff = &image[space.coord(fi, crate::geometry::CellId(c))];
        if coeff.is_zero() {
            continue;
        }
        let vol = g
            .cell_volume(base, crate::geometry::CellId(c))
            .ok_or_else(|| HadwigerError::VolumeUndefined {
                flat: g.flat_label(base),
                cell: c,
            })?;
        sum += vol * coeff;
    }
    Ok(sign_q(route_parity(k)) * sign_q(label.orientation) * sum)
}

/// The route-relating parity `(−1)^{k(k+1)/2}` between flag coordinates
/// (iterated jumps toward positive conormals) and geometric labels
/// (outward barycenter frames).
fn route_parity(k: usize) -> i8 {
    if (k * (k + 1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The canonical flag function of a label: value `(−1)^{k(k+1)/2} ·
/// orientation` on its flag, in reference coordinates — so that the label's
/// own functional pairs to `+1` with it and flipping the orientation
/// negates it.
pub fn one_flag_chain(space: &crate::chains::ChainSpace, label: &HadwigerLabel) -> Vec<Q> {
    let mut v = vec![Q::zero(); space.flags().len()];
    let fi = space
        .flag_position(&label.flag)
        .expect("label flags are flags of the geometry");
    v[fi] = sign_q(route_parity(label.rank())) * sign_q(label.orientation);
    v
}

/// Pairing of a label's functional with a flag function:
/// `(−1)^{k(k+1)/2} · orientation · f(flag)`.
pub fn flag_functional(label: &HadwigerLabel, space: &crate::chains::ChainSpace, f: &[Q]) -> Q {
    let fi = space
        .flag_position(&label.flag)
        .expect("label flags are flags of the geometry");
    sign_q(route_parity(label.rank())) * sign_q(label.orientation) * &f[fi]
}

/// One row of a decomposition table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TableEntry {
    /// Rank of the label.
    pub rank: usize,
    /// Canonical flag label.
    pub flag: String,
    /// Orientation, `+1` or `−1`.
    pub orientation: i8,
    /// Coefficient of the Hadwiger invariant, as `p/q`.
    pub coefficient: String,
}

/// A functional written as a combination of Hadwiger invariants.
#[derive(Debug, Clone)]
pub struct DecompositionTable {
    /// Per rank, the coefficient of every oriented label.
    pub coefficients: Vec<BTreeMap<HadwigerLabel, Q>>,
}

impl DecompositionTable {
    /// Flatten to serializable rows, zero coefficients skipped.
    pub fn rows<G: Geometry + ?Sized>(&self, g: &G) -> Vec<TableEntry> {
        let mut out = Vec::new();
        for (k, block) in self.coefficients.iter().enumerate() {
            for (label, c) in block {
                if c.is_zero() {
                    continue;
                }
                out.push(TableEntry {
                    rank: k,
                    flag: flag_label(g, &label.flag),
                    orientation: label.orientation,
                    coefficient: crate::rational::format_q(c),
                });
            }
        }
        out
    }

    /// The functional the table represents, as one value per top cell.
    pub fn functional<G: Geometry + ?Sized>(
        &self,
        g: &G,
        filt: &Filtration,
    ) -> Result<Vec<Q>, HadwigerError> {
        let c0 = filt.spaces[0].dim();
        let mut out = vec![Q::zero(); c0];
        for block in &self.coefficients {
            for (label, coeff) in block {
                if coeff.is_zero() {
                    continue;
                }
                for cell in 0..c0 {
                    let mut e = vec![Q::zero(); c0];
                    e[cell] = Q::one();
                    out[cell] += coeff * hadwiger_eval_chain(g, filt, label, &e)?;
                }
            }
        }
        Ok(out)
    }
}

/// Decompose a functional on top torus cells into Hadwiger invariants by
/// rank peeling: at each rank the residual functional factors through the
/// `k`-fold jump image, is read off on the graded piece through its pivot
/// coordinates, and the matched combination is subtracted.
///
/// The returned table reproduces the input functional on every top cell.
pub fn valuation_decompose(
    g: &ToricGeometry,
    filt: &Filtration,
    mu: &[Q],
) -> Result<DecompositionTable, HadwigerError> {
    let n = g.dim();
    let c0 = filt.spaces[0].dim();
    assert_eq!(mu.len(), c0, "one value per top cell");
    let mut residual = mu.to_vec();
    let mut coefficients = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let space = &filt.spaces[k];
        let graded = &filt.graded[k];
        // ν reads the residual through the pivot coordinates of the graded
        // piece: ν(basis row j) = residual(lift of row j).
        let mut nu = vec![Q::zero(); space.flags().len()];
        for j in 0..graded.dim() {
            let f = graded.basis().row(j).to_vec();
            let lift = lift_to_chain(g, filt, k, &f, ChoiceStrategy::LexMinimalCell)?;
            let value: Q = lift.iter().zip(&residual).map(|(a, b)| a * b).sum();
            nu[graded.pivots()[j]] = value;
        }
        let mut block = BTreeMap::new();
        for (fi, flag) in space.flags().iter().enumerate() {
            for orientation in [1i8, -1] {
                let label = HadwigerLabel {
                    flag: flag.clone(),
                    orientation,
                };
                // f_k(label) = ½ ν(1_label), the label's pairing sign folded.
                let coeff = sign_q(route_parity(k)) * sign_q(orientation) * &nu[fi]
                    / Q::from_integer(BigInt::from(2));
                block.insert(label, coeff);
            }
        }
        // Subtract the matched combination: Σ_s f_k(l,s) Υ_(l,s) collapses
        // to Σ_flags ν(flag) · (vol ∘ π_flag ∘ D^k).
        for (fi, flag) in space.flags().iter().enumerate() {
            if nu[fi].is_zero() {
                continue;
            }
            let base = flag[k];
            for c in 0..space.cells_of(fi) {
                let cell = crate::geometry::CellId(c);
                let vol = g
                    .cell_volume(base, cell)
                    .expect("toric cells have volumes");
                let row = filt.composed[k].row(space.coord(fi, cell));
                for (col, entry) in row {
                    residual[*col] -= &nu[fi] * &vol * entry;
                }
            }
        }
        coefficients.push(block);
    }
    assert!(
        residual.iter().all(Q::is_zero),
        "rank peeling exhausts every functional on the torus"
    );
    Ok(DecompositionTable { coefficients })
}

/// A hyperplane-respecting map between two toric arrangements, realized on
/// flats, flags, and labels.
#[derive(Debug, Clone)]
pub struct LabelMap {
    flat_map: BTreeMap<FlatId, FlatId>,
}

impl LabelMap {
    /// Image of a flat.
    pub fn flat(&self, f: FlatId) -> FlatId {
        self.flat_map[&f]
    }

    /// Image of a flag.
    pub fn flag(&self, flag: &[FlatId]) -> Vec<FlatId> {
        flag.iter().map(|&f| self.flat(f)).collect()
    }

    /// Image of an oriented label. Reference frames of corresponding flats
    /// coincide (parallelism preserves conormal lattices), so the
    /// orientation sign carries over unchanged.
    pub fn label(&self, label: &HadwigerLabel) -> HadwigerLabel {
        HadwigerLabel {
            flag: self.flag(&label.flag),
            orientation: label.orientation,
        }
    }

    /// Compose two maps (`self` after `first`).
    pub fn compose(&self, first: &LabelMap) -> LabelMap {
        LabelMap {
            flat_map: first
                .flat_map
                .iter()
                .map(|(&a, &b)| (a, self.flat(b)))
                .collect(),
        }
    }
}

/// Build the induced map on flats and labels from an assignment of source
/// hyperplanes to parallel target hyperplanes.
///
/// Each source flat is carried to the target flat cut out by the images of
/// the hyperplanes through it, translated consistently; the map must be a
/// codimension-preserving bijection with corresponding intersections, or an
/// error describing the violation is returned.
pub fn induced_label_map(
    src: &ToricGeometry,
    dst: &ToricGeometry,
    assignment: &[usize],
) -> Result<LabelMap, HadwigerError> {
    let n = src.dim();
    if dst.dim() != n {
        return Err(HadwigerError::InvalidMap(
            "ambient dimensions differ".into(),
        ));
    }
    if assignment.len() != src.hyperplanes().len() {
        return Err(HadwigerError::InvalidMap(format!(
            "assignment length {} for {} hyperplanes",
            assignment.len(),
            src.hyperplanes().len()
        )));
    }
    for (i, &j) in assignment.iter().enumerate() {
        let Some(target) = dst.hyperplanes().get(j) else {
            return Err(HadwigerError::InvalidMap(format!(
                "hyperplane {i} mapped to missing index {j}"
            )));
        };
        if target.normal != src.hyperplanes()[i].normal {
            return Err(HadwigerError::InvalidMap(format!(
                "hyperplane {i} is not parallel to its image {j}"
            )));
        }
    }
    let src_h_flats: Vec<FlatId> = (0..src.hyperplanes().len())
        .map(|i| src.subfamily_flats(&[i])[0])
        .collect();
    let mut flat_map = BTreeMap::new();
    let mut image_seen = BTreeMap::new();
    for f in 0..src.flat_count() {
        let f = FlatId(f);
        // Hyperplanes through the source flat, as indices.
        let through: Vec<usize> = (0..src.hyperplanes().len())
            .filter(|&i| src.contains_flat(src_h_flats[i], f))
            .collect();
        // Translate the base point onto the mapped hyperplanes: solve
        // normal_i · t ≡ offset′ − normal_i · base (mod 1). When the
        // intersection has several components the particular solution picks
        // one deterministically.
        let base = src.base_point(f);
        let rows: Vec<Vec<BigInt>> = through
            .iter()
            .map(|&i| src.hyperplanes()[i].normal.clone())
            .collect();
        let rhs: Vec<Q> = through
            .iter()
            .map(|&i| {
                let dot: Q = src.hyperplanes()[i]
                    .normal
                    .iter()
                    .zip(base)
                    .map(|(a, b)| Q::from_integer(a.clone()) * b)
                    .sum();
                &dst.hyperplanes()[assignment[i]].offset - dot
            })
            .collect();
        let t = if through.is_empty() {
            // The ambient flat lies on no hyperplane; translate by zero.
            vec![Q::zero(); src.dim()]
        } else {
            crate::lattice::solve_mod1(&crate::lattice::IntMatrix::from_rows(rows), &rhs)
                .ok_or_else(|| {
                    HadwigerError::InvalidMap(format!(
                        "intersections do not correspond at flat {}",
                        src.flat_label(f)
                    ))
                })?
        };
        let moved: Vec<Q> = base.iter().zip(&t).map(|(a, b)| a + b).collect();
        let shifted = (0..dst.flat_count())
            .map(FlatId)
            .find(|&h| {
                dst.codim(h) == src.codim(f)
                    && dst.direction_basis(h) == src.direction_basis(f)
                    && dst.on_flat(h, &moved)
            })
            .ok_or_else(|| {
                HadwigerError::InvalidMap(format!(
                    "no target flat matches {}",
                    src.flat_label(f)
                ))
            })?;
        if image_seen.insert(shifted, f).is_some() {
            return Err(HadwigerError::InvalidMap(format!(
                "two flats map to {}",
                dst.flat_label(shifted)
            )));
        }
        flat_map.insert(f, shifted);
    }
    if image_seen.len() != dst.flat_count() {
        return Err(HadwigerError::InvalidMap(
            "the induced flat map is not onto".into(),
        ));
    }
    let map = LabelMap { flat_map };
    for outer in 0..src.flat_count() {
        for inner in 0..src.flat_count() {
            let (o, i) = (FlatId(outer), FlatId(inner));
            if src.contains_flat(o, i) != dst.contains_flat(map.flat(o), map.flat(i)) {
                return Err(HadwigerError::InvalidMap(format!(
                    "containment of {} in {} is not preserved",
                    src.flat_label(i),
                    src.flat_label(o)
                )));
            }
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{AffineArrangement, AffineGeometry, AffineHyperplane};
    use crate::chains::{degree_filtration, indicator_chain_toric};
    use crate::geometry::ambient_flat;
    use crate::rational::{q, qi};
    use crate::toric::{ToricArrangement, ToricHyperplane};

    fn circle2() -> ToricGeometry {
        ToricGeometry::new(&ToricArrangement {
            dim: 1,
            hyperplanes: vec![
                ToricHyperplane::new(vec![1], qi(0)),
                ToricHyperplane::new(vec![1], q(1, 2)),
            ],
        })
        .unwrap()
    }

    fn grid() -> ToricGeometry {
        ToricGeometry::new(&ToricArrangement {
            dim: 2,
            hyperplanes: vec![
                ToricHyperplane::new(vec![1, 0], qi(0)),
                ToricHyperplane::new(vec![1, 0], q(1, 2)),
                ToricHyperplane::new(vec![0, 1], qi(0)),
                ToricHyperplane::new(vec![0, 1], q(1, 2)),
            ],
        })
        .unwrap()
    }

    fn seg(a: Q, b: Q) -> Polytope {
        Polytope::from_vertices(1, &[vec![a], vec![b]]).unwrap()
    }

    fn square(x0: Q, x1: Q, y0: Q, y1: Q) -> Polytope {
        Polytope::from_vertices(
            2,
            &[
                vec![x0.clone(), y0.clone()],
                vec![x1.clone(), y0],
                vec![x1, y1.clone()],
                vec![x0, y1],
            ],
        )
        .unwrap()
    }

    fn point_flag(g: &ToricGeometry, x: Q) -> Vec<FlatId> {
        let flat = (0..g.flat_count())
            .map(FlatId)
            .find(|&f| g.codim(f) == 1 && g.on_flat(f, std::slice::from_ref(&x)))
            .unwrap();
        vec![ambient_flat(g), flat]
    }

    #[test]
    fn interval_ending_at_zero_evaluates_to_one() {
        let g = circle2();
        let label = HadwigerLabel {
            flag: point_flag(&g, qi(0)),
            orientation: 1,
        };
        let p = seg(q(-1, 2), qi(0));
        assert_eq!(hadwiger_eval(&g, &label, &p).unwrap(), qi(1));
        // Flip of orientation negates; the other endpoint contributes at
        // the other flat.
        assert_eq!(hadwiger_eval(&g, &label.flipped(), &p).unwrap(), qi(-1));
        let other = HadwigerLabel {
            flag: point_flag(&g, q(1, 2)),
            orientation: 1,
        };
        assert_eq!(hadwiger_eval(&g, &other, &p).unwrap(), qi(-1));
    }

    #[test]
    fn rank_zero_label_measures_normalized_volume() {
        let g = grid();
        let label = HadwigerLabel {
            flag: vec![ambient_flat(&g)],
            orientation: 1,
        };
        let p = square(qi(0), q(1, 2), qi(0), q(1, 2));
        assert_eq!(hadwiger_eval(&g, &label, &p).unwrap(), q(1, 4));
    }

    #[test]
    fn grid_edge_label_evaluates_to_minus_half_on_both_routes() {
        let g = grid();
        let filt = degree_filtration(&g).unwrap();
        let x_axis = (0..g.flat_count())
            .map(FlatId)
            .find(|&f| g.codim(f) == 1 && g.on_flat(f, &[qi(0), q(1, 4)]))
            .unwrap();
        let label = HadwigerLabel {
            flag: vec![ambient_flat(&g), x_axis],
            orientation: 1,
        };
        let p = square(qi(0), q(1, 2), qi(0), q(1, 2));
        assert_eq!(hadwiger_eval(&g, &label, &p).unwrap(), q(-1, 2));
        let chain = indicator_chain_toric(&g, &p);
        assert_eq!(
            hadwiger_eval_chain(&g, &filt, &label, &chain).unwrap(),
            q(-1, 2)
        );
    }

    #[test]
    fn both_evaluation_routes_agree_on_all_labels() {
        let g = grid();
        let filt = degree_filtration(&g).unwrap();
        let polys = [
            square(qi(0), q(1, 2), qi(0), q(1, 2)),
            square(q(1, 2), qi(1), qi(0), q(1, 2)),
            square(qi(0), q(3, 2), qi(0), q(1, 2)),
        ];
        for p in &polys {
            let chain = indicator_chain_toric(&g, p);
            for k in 0..=2 {
                for flag in filt.spaces[k].flags() {
                    for orientation in [1, -1] {
                        let label = HadwigerLabel {
                            flag: flag.clone(),
                            orientation,
                        };
                        assert_eq!(
                            hadwiger_eval(&g, &label, p).unwrap(),
                            hadwiger_eval_chain(&g, &filt, &label, &chain).unwrap(),
                            "label {} on {:?}",
                            label.display(&g),
                            p.vertices()[0]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn parallel_faces_on_one_flat_cancel() {
        let g = circle2();
        // The unit interval wraps the circle; both endpoints of [0,1] project
        // to the same point flat and cancel.
        let label = HadwigerLabel {
            flag: point_flag(&g, qi(0)),
            orientation: 1,
        };
        let p = seg(qi(0), qi(1));
        assert_eq!(hadwiger_eval(&g, &label, &p).unwrap(), qi(0));
        // flag_of_polytope still detects the (double) incidence.
        assert!(flag_of_polytope(&g, &p, &label.flag).unwrap().is_some());
    }

    #[test]
    fn absent_flags_evaluate_to_zero() {
        let g = ToricGeometry::new(&ToricArrangement {
            dim: 1,
            hyperplanes: (0..3)
                .map(|j| ToricHyperplane::new(vec![1], q(j, 3)))
                .collect(),
        })
        .unwrap();
        // The segment [0, 1/3] never touches the point {2/3}.
        let p = seg(qi(0), q(1, 3));
        let absent = point_flag(&g, q(2, 3));
        assert_eq!(flag_of_polytope(&g, &p, &absent).unwrap(), None);
        let label = HadwigerLabel {
            flag: absent,
            orientation: 1,
        };
        assert_eq!(hadwiger_eval(&g, &label, &p).unwrap(), qi(0));
    }

    #[test]
    fn facets_off_the_arrangement_are_rejected() {
        let g = grid();
        let p = square(qi(0), q(1, 4), qi(0), q(1, 4));
        let label = HadwigerLabel {
            flag: vec![ambient_flat(&g)],
            orientation: 1,
        };
        assert!(matches!(
            hadwiger_eval(&g, &label, &p),
            Err(HadwigerError::FacetNotInArrangement(_))
        ));
    }

    #[test]
    fn rank_k_invariants_vanish_on_lower_filtration() {
        let g = grid();
        let filt = degree_filtration(&g).unwrap();
        for k in 1..=2 {
            let lower = &filt.filtration[k - 1];
            for flag in filt.spaces[k].flags() {
                let label = HadwigerLabel {
                    flag: flag.clone(),
                    orientation: 1,
                };
                for j in 0..lower.dim() {
                    let chain = lower.basis().row(j).to_vec();
                    assert!(hadwiger_eval_chain(&g, &filt, &label, &chain)
                        .unwrap()
                        .is_zero());
                }
            }
        }
    }

    #[test]
    fn invariants_satisfy_reciprocity_on_cell_indicators() {
        let g = grid();
        let filt = degree_filtration(&g).unwrap();
        let anchors = crate::geometry::enumerate_anchors(&g, 2, 1);
        assert!(!anchors.is_empty());
        for anchor in anchors {
            for cell in 0..filt.spaces[0].dim() {
                let mut e = vec![qi(0); filt.spaces[0].dim()];
                e[cell] = qi(1);
                let mut sum = Q::zero();
                for mid in crate::geometry::completions(&g, anchor[0], anchor[1], 1) {
                    let label = HadwigerLabel {
                        flag: vec![anchor[0], mid, anchor[1]],
                        orientation: 1,
                    };
                    sum += hadwiger_eval_chain(&g, &filt, &label, &e).unwrap();
                }
                assert!(sum.is_zero());
            }
        }
    }

    #[test]
    fn one_flag_chain_pairs_to_one_with_its_label() {
        let g = grid();
        let filt = degree_filtration(&g).unwrap();
        for k in 0..=2 {
            let space = &filt.spaces[k];
            let label = HadwigerLabel {
                flag: space.flags()[0].clone(),
                orientation: 1,
            };
            let chain = one_flag_chain(space, &label);
            assert_eq!(flag_functional(&label, space, &chain), qi(1));
            assert_eq!(flag_functional(&label.flipped(), space, &chain), qi(-1));
            let flipped = one_flag_chain(space, &label.flipped());
            assert_eq!(
                flipped,
                chain.iter().map(|x| -x).collect::<Vec<Q>>(),
                "1 of the flipped label is the negation"
            );
        }
    }

    #[test]
    fn decomposition_recovers_volume_at_rank_zero() {
        let g = grid();
        let filt = degree_filtration(&g).unwrap();
        let amb = ambient_flat(&g);
        let mu: Vec<Q> = (0..filt.spaces[0].dim())
            .map(|c| g.cell_volume(amb, crate::geometry::CellId(c)).unwrap())
            .collect();
        let table = valuation_decompose(&g, &filt, &mu).unwrap();
        let label = HadwigerLabel {
            flag: vec![amb],
            orientation: 1,
        };
        let folded = &table.coefficients[0][&label] - &table.coefficients[0][&label.flipped()];
        assert_eq!(folded, qi(1));
        assert!(table.coefficients[1].values().all(Q::is_zero));
        assert!(table.coefficients[2].values().all(Q::is_zero));
    }

    #[test]
    fn decomposition_recovers_a_pivot_rank_one_invariant() {
        let g = circle2();
        let filt = degree_filtration(&g).unwrap();
        let pivot_flag = filt.spaces[1].flags()[filt.graded[1].pivots()[0]].clone();
        let label = HadwigerLabel {
            flag: pivot_flag,
            orientation: 1,
        };
        let c0 = filt.spaces[0].dim();
        let mut mu = vec![Q::zero(); c0];
        for cell in 0..c0 {
            let mut e = vec![Q::zero(); c0];
            e[cell] = Q::one();
            mu[cell] = hadwiger_eval_chain(&g, &filt, &label, &e).unwrap();
        }
        let table = valuation_decompose(&g, &filt, &mu).unwrap();
        let folded = &table.coefficients[1][&label] - &table.coefficients[1][&label.flipped()];
        assert_eq!(folded, qi(1));
        assert!(table.coefficients[0].values().all(Q::is_zero));
    }

    #[test]
    fn decomposition_reconstructs_arbitrary_functionals() {
        let g = grid();
        let filt = degree_filtration(&g).unwrap();
        let mu: Vec<Q> = (0..filt.spaces[0].dim())
            .map(|c| q(3 * c as i64 + 1, 7))
            .collect();
        let table = valuation_decompose(&g, &filt, &mu).unwrap();
        assert_eq!(table.functional(&g, &filt).unwrap(), mu);
    }

    #[test]
    fn scaling_multiplies_values_by_lambda_to_the_flat_dimension() {
        // Dilation by 3 preserves the half-integer grid; the experiment
        // finds exponent n − k (the base flat's dimension), not k.
        let g = circle2();
        let p = seg(q(-1, 2), qi(0));
        let tripled = p.dilate(&qi(3));
        let point = HadwigerLabel {
            flag: point_flag(&g, qi(0)),
            orientation: 1,
        };
        let whole = HadwigerLabel {
            flag: vec![ambient_flat(&g)],
            orientation: 1,
        };
        // k = n = 1: exponent 0.
        assert_eq!(hadwiger_eval(&g, &point, &p).unwrap(), qi(1));
        assert_eq!(hadwiger_eval(&g, &point, &tripled).unwrap(), qi(1));
        // k = 0: exponent n = 1.
        assert_eq!(
            hadwiger_eval(&g, &whole, &tripled).unwrap(),
            qi(3) * hadwiger_eval(&g, &whole, &p).unwrap()
        );
        let g2 = grid();
        let sq = square(qi(0), q(1, 2), qi(0), q(1, 2));
        let sq3 = sq.dilate(&qi(3));
        let x_axis = (0..g2.flat_count())
            .map(FlatId)
            .find(|&f| g2.codim(f) == 1 && g2.on_flat(f, &[qi(0), q(1, 4)]))
            .unwrap();
        let edge = HadwigerLabel {
            flag: vec![ambient_flat(&g2), x_axis],
            orientation: 1,
        };
        // k = 1, n = 2: exponent 1.
        assert_eq!(
            hadwiger_eval(&g2, &edge, &sq3).unwrap(),
            qi(3) * hadwiger_eval(&g2, &edge, &sq).unwrap()
        );
    }

    #[test]
    fn affine_triangle_vertex_flag_detection() {
        let g = AffineGeometry::new(&AffineArrangement {
            dim: 2,
            hyperplanes: vec![
                AffineHyperplane::new(vec![1, 0], qi(0)),
                AffineHyperplane::new(vec![0, 1], qi(0)),
                AffineHyperplane::new(vec![1, 1], qi(1)),
            ],
        })
        .unwrap();
        let tri = Polytope::from_vertices(
            2,
            &[vec![qi(0), qi(0)], vec![qi(1), qi(0)], vec![qi(0), qi(1)]],
        )
        .unwrap();
        let x_axis = (0..g.flat_count())
            .map(FlatId)
            .find(|&f| g.codim(f) == 1 && g.on_flat(f, &[qi(0), q(1, 2)]))
            .unwrap();
        let origin = (0..g.flat_count())
            .map(FlatId)
            .find(|&f| g.codim(f) == 2 && g.on_flat(f, &[qi(0), qi(0)]))
            .unwrap();
        let flag = vec![ambient_flat(&g), x_axis, origin];
        let sign = flag_of_polytope(&g, &tri, &flag).unwrap().unwrap();
        // Reference frame of the origin is the identity; outward vectors
        // from the vertex to the edge and triangle barycenters give
        // det [[0,-1/3],[-1/2,-1/3]] < 0.
        assert_eq!(sign, -1);
        let skew = (0..g.flat_count())
            .map(FlatId)
            .find(|&f| g.codim(f) == 1 && g.on_flat(f, &[q(1, 2), q(1, 2)]))
            .unwrap();
        assert_eq!(
            flag_of_polytope(&g, &tri, &[ambient_flat(&g), skew, origin]).unwrap(),
            None,
            "the skew line does not pass through the origin's faces"
        );
    }

    #[test]
    fn label_maps_respect_shifts_and_compose() {
        let src = circle2();
        let dst = ToricGeometry::new(&ToricArrangement {
            dim: 1,
            hyperplanes: vec![
                ToricHyperplane::new(vec![1], q(1, 4)),
                ToricHyperplane::new(vec![1], q(3, 4)),
            ],
        })
        .unwrap();
        let ident = induced_label_map(&src, &src, &[0, 1]).unwrap();
        for f in 0..src.flat_count() {
            assert_eq!(ident.flat(FlatId(f)), FlatId(f));
        }
        let shift = induced_label_map(&src, &dst, &[0, 1]).unwrap();
        let zero_flat = point_flag(&src, qi(0))[1];
        assert!(dst.on_flat(shift.flat(zero_flat), &[q(1, 4)]));
        let back = induced_label_map(&dst, &src, &[0, 1]).unwrap();
        let round = back.compose(&shift);
        for f in 0..src.flat_count() {
            assert_eq!(round.flat(FlatId(f)), FlatId(f));
        }
    }

    #[test]
    fn non_parallel_maps_are_rejected() {
        let g = grid();
        // Sending an x-hyperplane to a y-hyperplane breaks parallelism.
        let err = induced_label_map(&g, &g, &[2, 1, 0, 3]).unwrap_err();
        assert!(matches!(err, HadwigerError::InvalidMap(_)));
        // A non-injective assignment collapses two flats onto one.
        let src = circle2();
        let err = induced_label_map(&src, &src, &[1, 1]).unwrap_err();
        assert!(matches!(err, HadwigerError::InvalidMap(_)));
    }
}
