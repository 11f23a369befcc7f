//! Convex chains over an arrangement and the wall-jump operator.
//!
//! A level-`k` chain assigns a rational to every pair (flag, cell), where a
//! flag is a chain of flats `L⁰ ⊃ L¹ ⊃ … ⊃ Lᵏ` with `codim Lⁱ = i` and the
//! cell ranges over the top cells of `Lᵏ`. Level 0 is the space of convex
//! chains of the arrangement in top-cell coordinates: the indicator function
//! of a polytope cut out by the arrangement lives there.
//!
//! The **jump operator** `D_k` maps level `k` to level `k+1`: for a flag
//! extended by a wall `L^{k+1}` of `Lᵏ` and a cell `σ ⊂ L^{k+1}` with
//! interior point `q`,
//!
//! ```text
//! (Dξ)(…, L^{k+1}; σ) = ε · [ ξ(…, Lᵏ; cell at q + δw) − ξ(…, Lᵏ; cell at q − δw) ]
//! ```
//!
//! where `w` is the jump direction across the wall (positively paired with
//! the canonical relative conormal) and `ε` the orientation sign of the
//! extended coorientation frame against the wall's reference frame. The
//! jump is independent of the choice of `q` inside `σ`, and `ker D_k` is
//! exactly the space of chains constant along each flag.
//!
//! The **degree filtration** composes jumps: `P_k = D_{k−1}⋯D_0`, the
//! filtration space `V_{≤k} = ker P_{k+1}` inside level 0 (with `V_{≤n}`
//! everything), and the graded piece `V_k = P_k(V_{≤k})` written in flag
//! coordinates — flag-constancy of the image is guaranteed by
//! `D_k P_k = P_{k+1}` and is asserted. Dimensions telescope:
//! `Σ_k dim V_k` equals the number of top cells.

use crate::affine::AffineGeometry;
use crate::geometry::{
    ambient_flat, enumerate_flags, extension_sign, jump_direction, CellId, FlatId, Geometry,
    GeometryError,
};
use crate::linalg::{kernel_basis, Matrix, Subspace};
use crate::polytope::Polytope;
use crate::rational::{floor_int, Q};
use crate::toric::ToricGeometry;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Coordinate layout of level-`k` chains: one block of cell coordinates per
/// flag of rank `k`, flags in lexicographic order.
#[derive(Debug, Clone)]
pub struct ChainSpace {
    level: usize,
    flags: Vec<Vec<FlatId>>,
    offsets: Vec<usize>,
    cell_counts: Vec<usize>,
    total: usize,
    flag_index: BTreeMap<Vec<FlatId>, usize>,
}

impl ChainSpace {
    /// The chain space at a level (flags of rank `level`).
    pub fn new<G: Geometry + ?Sized>(g: &G, level: usize) -> ChainSpace {
        let flags = enumerate_flags(g, level);
        let mut offsets = Vec::with_capacity(flags.len());
        let mut cell_counts = Vec::with_capacity(flags.len());
        let mut total = 0;
        for flag in &flags {
            offsets.push(total);
            let cells = g.cell_count(*flag.last().expect("flags are nonempty"));
            cell_counts.push(cells);
            total += cells;
        }
        let flag_index = flags
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        ChainSpace {
            level,
            flags,
            offsets,
            cell_counts,
            total,
            flag_index,
        }
    }

    /// The level (rank of the flags).
    pub fn level(&self) -> usize {
        self.level
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.total
    }

    /// The flags, in coordinate-block order.
    pub fn flags(&self) -> &[Vec<FlatId>] {
        &self.flags
    }

    /// Number of cells in the block of one flag.
    pub fn cells_of(&self, flag: usize) -> usize {
        self.cell_counts[flag]
    }

    /// Coordinate of (flag, cell).
    pub fn coord(&self, flag: usize, cell: CellId) -> usize {
        debug_assert!(cell.0 < self.cell_counts[flag]);
        self.offsets[flag] + cell.0
    }

    /// Index of a flag in the layout.
    pub fn flag_position(&self, flag: &[FlatId]) -> Option<usize> {
        self.flag_index.get(flag).copied()
    }
}

/// A sparse linear map between chain spaces, stored by rows.
#[derive(Debug, Clone)]
pub struct SparseMap {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, Q)>>,
}

impl SparseMap {
    /// The zero map.
    pub fn zero(rows: usize, cols: usize) -> SparseMap {
        SparseMap {
            rows,
            cols,
            entries: vec![Vec::new(); rows],
        }
    }

    /// The identity map.
    pub fn identity(n: usize) -> SparseMap {
        let mut m = SparseMap::zero(n, n);
        for i in 0..n {
            m.entries[i].push((i, Q::one()));
        }
        m
    }

    /// Number of rows (target dimension).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns (source dimension).
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Add `coeff` at `(row, col)`, coalescing and dropping zeros.
    pub fn add(&mut self, row: usize, col: usize, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let entries = &mut self.entries[row];
        match entries.binary_search_by_key(&col, |e| e.0) {
            Ok(i) => {
                entries[i].1 += coeff;
                if entries[i].1.is_zero() {
                    entries.remove(i);
                }
            }
            Err(i) => entries.insert(i, (col, coeff)),
        }
    }

    /// The nonzero entries of one row, sorted by column.
    pub fn row(&self, r: usize) -> &[(usize, Q)] {
        &self.entries[r]
    }

    /// Matrix product `self ∘ inner`.
    pub fn compose(&self, inner: &SparseMap) -> SparseMap {
        assert_eq!(self.cols, inner.rows);
        let mut out = SparseMap::zero(self.rows, inner.cols);
        for r in 0..self.rows {
            for (j, a) in &self.entries[r] {
                for (k, b) in &inner.entries[*j] {
                    out.add(r, *k, a * b);
                }
            }
        }
        out
    }

    /// Apply to a coordinate vector.
    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        self.entries
            .iter()
            .map(|row| {
                let mut acc = Q::zero();
                for (c, a) in row {
                    if !v[*c].is_zero() {
                        acc += a * &v[*c];
                    }
                }
                acc
            })
            .collect()
    }

    /// Dense form.
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zero(self.rows, self.cols);
        for (r, row) in self.entries.iter().enumerate() {
            for (c, a) in row {
                m[(r, *c)] = a.clone();
            }
        }
        m
    }
}

/// The jump operator from level `from.level()` to level `to.level()`
/// (which must be one higher). Each output coordinate depends on at most
/// two input coordinates of its prefix flag.
pub fn leray_d<G: Geometry + ?Sized>(
    g: &G,
    from: &ChainSpace,
    to: &ChainSpace,
) -> Result<SparseMap, GeometryError> {
    assert_eq!(to.level(), from.level() + 1);
    let mut d = SparseMap::zero(to.dim(), from.dim());
    for (fi, flag) in to.flags().iter().enumerate() {
        let parent = flag[flag.len() - 2];
        let wall = flag[flag.len() - 1];
        let prefix = &flag[..flag.len() - 1];
        let pi = from
            .flag_position(prefix)
            .expect("prefix of a flag is a flag");
        let eps = extension_sign(g, parent, wall)?;
        let w = jump_direction(g, parent, wall);
        let neg_w: Vec<Q> = w.iter().map(|x| -x).collect();
        let eps_q = Q::from_integer(BigInt::from(eps));
        for cell in 0..to.cells_of(fi) {
            let q = g.interior_point(wall, CellId(cell));
            let plus = g.locate(parent, q, Some(&w))?;
            let minus = g.locate(parent, q, Some(&neg_w))?;
            let out = to.coord(fi, CellId(cell));
            d.add(out, from.coord(pi, plus), eps_q.clone());
            d.add(out, from.coord(pi, minus), -eps_q.clone());
        }
    }
    Ok(d)
}

/// Values of a flag-constant chain, one per flag; `None` when some flag's
/// cell block is not constant.
pub fn flag_values(space: &ChainSpace, chain: &[Q]) -> Option<Vec<Q>> {
    assert_eq!(chain.len(), space.dim());
    let mut out = Vec::with_capacity(space.flags().len());
    for fi in 0..space.flags().len() {
        let first = &chain[space.coord(fi, CellId(0))];
        for cell in 1..space.cells_of(fi) {
            if &chain[space.coord(fi, CellId(cell))] != first {
                return None;
            }
        }
        out.push(first.clone());
    }
    Some(out)
}

/// Embed per-flag values as a constant-on-each-flag chain.
pub fn flag_embed(space: &ChainSpace, values: &[Q]) -> Vec<Q> {
    assert_eq!(values.len(), space.flags().len());
    let mut out = vec![Q::zero(); space.dim()];
    for (fi, v) in values.iter().enumerate() {
        for cell in 0..space.cells_of(fi) {
            out[space.coord(fi, CellId(cell))] = v.clone();
        }
    }
    out
}

/// The degree filtration of the convex-chain space of an arrangement.
#[derive(Debug, Clone)]
pub struct Filtration {
    /// Chain spaces at levels `0..=n`.
    pub spaces: Vec<ChainSpace>,
    /// Jump operators `D_k : C_k → C_{k+1}` for `k = 0..n`.
    pub jumps: Vec<SparseMap>,
    /// Composites `P_k = D_{k−1}⋯D_0 : C_0 → C_k` for `k = 0..=n`
    /// (`P_0` is the identity).
    pub composed: Vec<SparseMap>,
    /// `V_{≤k} ⊆ C_0` for `k = 0..=n`: kernel of `P_{k+1}`, with
    /// `V_{≤n} = C_0`.
    pub filtration: Vec<Subspace>,
    /// Graded pieces `V_k = P_k(V_{≤k})` in flag coordinates at level `k`.
    pub graded: Vec<Subspace>,
}

impl Filtration {
    /// Dimensions of the graded pieces.
    pub fn graded_dims(&self) -> Vec<usize> {
        self.graded.iter().map(Subspace::dim).collect()
    }
}

/// Compute jumps, composites, filtration spaces, and graded pieces.
pub fn degree_filtration<G: Geometry + ?Sized>(g: &G) -> Result<Filtration, GeometryError> {
    let n = g.dim();
    let spaces: Vec<ChainSpace> = (0..=n).map(|k| ChainSpace::new(g, k)).collect();
    let mut jumps = Vec::with_capacity(n);
    for k in 0..n {
        jumps.push(leray_d(g, &spaces[k], &spaces[k + 1])?);
    }
    let mut composed = vec![SparseMap::identity(spaces[0].dim())];
    for k in 0..n {
        composed.push(jumps[k].compose(&composed[k]));
    }
    let c0 = spaces[0].dim();
    let mut filtration = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k == n {
            let identity: Vec<Vec<Q>> = (0..c0)
                .map(|i| {
                    let mut e = vec![Q::zero(); c0];
                    e[i] = Q::one();
                    e
                })
                .collect();
            filtration.push(Subspace::from_rows(c0, &identity));
        } else {
            let kernel = kernel_basis(&composed[k + 1].to_matrix());
            filtration.push(Subspace::from_rows(c0, &kernel));
        }
    }
    let mut graded = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut rows = Vec::new();
        for basis_row in filtration[k].basis().to_rows() {
            let image = composed[k].apply(&basis_row);
            let values =
                flag_values(&spaces[k], &image).expect("graded images are flag-constant");
            rows.push(values);
        }
        graded.push(Subspace::from_rows(spaces[k].flags().len(), &rows));
    }
    Ok(Filtration {
        spaces,
        jumps,
        composed,
        filtration,
        graded,
    })
}

/// Indicator chain of a polytope in the top-cell coordinates of an affine
/// arrangement. Exact whenever the polytope's facets lie on arrangement
/// hyperplanes (cell interior points then never meet the boundary).
pub fn indicator_chain_affine(g: &AffineGeometry, p: &Polytope) -> Vec<Q> {
    let ambient = ambient_flat(g);
    (0..g.cell_count(ambient))
        .map(|c| {
            if p.contains(g.interior_point(ambient, CellId(c))) {
                Q::one()
            } else {
                Q::zero()
            }
        })
        .collect()
}

/// Indicator chain of the image of a polytope on the torus: the value at a
/// cell counts the lattice translates of the polytope covering its interior
/// point. Exact whenever the polytope's facets lie on lifts of arrangement
/// hyperplanes.
pub fn indicator_chain_toric(g: &ToricGeometry, p: &Polytope) -> Vec<Q> {
    let ambient = ambient_flat(g);
    let n = g.dim();
    let verts = p.vertices();
    (0..g.cell_count(ambient))
        .map(|c| {
            let q = g.interior_point(ambient, CellId(c));
            // Ranges of v with q + v possibly in p, from the bounding box.
            let mut lo = Vec::with_capacity(n);
            let mut hi = Vec::with_capacity(n);
            for i in 0..n {
                let min = verts.iter().map(|v| &v[i]).min().expect("polytope has vertices");
                let max = verts.iter().map(|v| &v[i]).max().expect("polytope has vertices");
                lo.push(floor_int(&(min - &q[i])));
                hi.push(floor_int(&(max - &q[i])) + BigInt::one());
            }
            let mut count = 0usize;
            let mut v = lo.clone();
            'outer: loop {
                let shifted: Vec<Q> = q
                    .iter()
                    .zip(&v)
                    .map(|(qi, vi)| qi + Q::from_integer(vi.clone()))
                    .collect();
                if p.contains(&shifted) {
                    count += 1;
                }
                for i in 0..n {
                    v[i] += 1;
                    if v[i] <= hi[i] {
                        continue 'outer;
                    }
                    v[i] = lo[i].clone();
                }
                break;
            }
            Q::from_integer(BigInt::from(count))
        })
        .collect()
}

/// `true` when the jump of the chain across every wall of every flag is
/// zero, i.e. the chain is constant along each flag block.
pub fn is_flag_constant(space: &ChainSpace, chain: &[Q]) -> bool {
    flag_values(space, chain).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{AffineArrangement, AffineHyperplane};
    use crate::polytope::Polytope;
    use crate::rational::{q, qi};
    use crate::toric::{ToricArrangement, ToricHyperplane};

    fn circle(points: Vec<Q>) -> ToricGeometry {
        ToricGeometry::new(&ToricArrangement {
            dim: 1,
            hyperplanes: points
                .into_iter()
                .map(|c| ToricHyperplane {
                    normal: vec![BigInt::one()],
                    offset: c,
                })
                .collect(),
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

    fn tri_toric() -> ToricGeometry {
        ToricGeometry::new(&ToricArrangement {
            dim: 2,
            hyperplanes: vec![
                ToricHyperplane::new(vec![1, 0], qi(0)),
                ToricHyperplane::new(vec![0, 1], qi(0)),
                ToricHyperplane::new(vec![1, 1], qi(0)),
            ],
        })
        .unwrap()
    }

    fn tri_affine() -> AffineGeometry {
        AffineGeometry::new(&AffineArrangement {
            dim: 2,
            hyperplanes: vec![
                AffineHyperplane::new(vec![1, 0], qi(0)),
                AffineHyperplane::new(vec![0, 1], qi(0)),
                AffineHyperplane::new(vec![1, 1], qi(1)),
            ],
        })
        .unwrap()
    }

    #[test]
    fn jump_of_arc_indicator_has_unit_endpoint_values() {
        // Circle with points {0, 1/2}; the arc (0, 1/2) jumps by +1 at 0
        // (entering in the positive direction) and −1 at 1/2.
        let g = circle(vec![qi(0), q(1, 2)]);
        let ambient = ambient_flat(&g);
        let c0 = ChainSpace::new(&g, 0);
        let c1 = ChainSpace::new(&g, 1);
        let arc = Polytope::from_vertices(1, &[vec![qi(0)], vec![q(1, 2)]]).unwrap();
        let chain = indicator_chain_toric(&g, &arc);
        // Sanity: exactly one of the two arcs is covered once.
        let covered = g.locate(ambient, &[q(1, 4)], None).unwrap();
        assert_eq!(chain[c0.coord(0, covered)], qi(1));
        let d = leray_d(&g, &c0, &c1).unwrap();
        let jumps = d.apply(&chain);
        for (fi, flag) in c1.flags().iter().enumerate() {
            let point = g.base_point(flag[1]);
            let value = &jumps[c1.coord(fi, CellId(0))];
            if point == [qi(0)] {
                assert_eq!(*value, qi(1));
            } else {
                assert_eq!(point, [q(1, 2)]);
                assert_eq!(*value, qi(-1));
            }
        }
    }

    #[test]
    fn jump_values_are_location_independent() {
        // The jump at a wall cell must not depend on which interior point
        // is probed: recompute with a second embedded representative.
        let g = grid();
        let c0 = ChainSpace::new(&g, 0);
        let c1 = ChainSpace::new(&g, 1);
        let d = leray_d(&g, &c0, &c1).unwrap();
        // Indicator of the square [0,1/2]².
        let square = Polytope::from_vertices(
            2,
            &[
                vec![qi(0), qi(0)],
                vec![q(1, 2), qi(0)],
                vec![qi(0), q(1, 2)],
                vec![q(1, 2), q(1, 2)],
            ],
        )
        .unwrap();
        let chain = indicator_chain_toric(&g, &square);
        let jumps = d.apply(&chain);
        // Each arc of each circle borders the square along either its full
        // closure or not at all, so jump values are ±1 or 0; their total
        // squared sum counts the 8 (arc, side) incidences of the square
        // boundary: 4 edges each fully covering one arc.
        let nonzero = jumps.iter().filter(|v| !v.is_zero()).count();
        assert_eq!(nonzero, 4);
        assert!(jumps.iter().all(|v| *v == qi(0) || *v == qi(1) || *v == qi(-1)));
    }

    #[test]
    fn filtration_dimensions_on_the_grid() {
        let g = grid();
        let filt = degree_filtration(&g).unwrap();
        assert_eq!(filt.graded_dims(), vec![1, 2, 1]);
        let total: usize = filt.graded_dims().iter().sum();
        assert_eq!(total, g.cell_count(ambient_flat(&g)));
        // V_{≤k} dimensions grow 1, 3, 4.
        let leq: Vec<usize> = filt.filtration.iter().map(Subspace::dim).collect();
        assert_eq!(leq, vec![1, 3, 4]);
    }

    #[test]
    fn filtration_dimensions_on_the_toric_triangle() {
        let g = tri_toric();
        let filt = degree_filtration(&g).unwrap();
        assert_eq!(filt.graded_dims(), vec![1, 1, 0]);
    }

    #[test]
    fn filtration_dimensions_on_circles() {
        for n in 2..=5 {
            let g = circle((0..n).map(|j| q(j, n)).collect());
            let filt = degree_filtration(&g).unwrap();
            assert_eq!(filt.graded_dims(), vec![1, (n - 1) as usize]);
        }
    }

    #[test]
    fn filtration_dimensions_on_the_affine_triangle() {
        let g = tri_affine();
        let filt = degree_filtration(&g).unwrap();
        let leq: Vec<usize> = filt.filtration.iter().map(Subspace::dim).collect();
        assert_eq!(leq, vec![1, 4, 7]);
        assert_eq!(filt.graded_dims(), vec![1, 3, 3]);
    }

    #[test]
    fn graded_pieces_embed_back_into_kernels() {
        let g = grid();
        let filt = degree_filtration(&g).unwrap();
        for k in 0..=2 {
            for row in filt.graded[k].basis().to_rows() {
                let chain = flag_embed(&filt.spaces[k], &row);
                if k < 2 {
                    let image = filt.jumps[k].apply(&chain);
                    assert!(image.iter().all(Zero::is_zero), "graded lies in ker D");
                }
            }
        }
    }

    #[test]
    fn toric_indicator_counts_translates()
 {
        // Segment [0, 3/2] wraps: its image covers (0,1/2) twice, (1/2,1) once.
        let g = circle(vec![qi(0), q(1, 2)]);
        let ambient = ambient_flat(&g);
        let seg = Polytope::from_vertices(1, &[vec![qi(0)], vec![q(3, 2)]]).unwrap();
        let chain = indicator_chain_toric(&g, &seg);
        let low = g.locate(ambient, &[q(1, 4)], None).unwrap();
        let high = g.locate(ambient, &[q(3, 4)], None).unwrap();
        assert_eq!(chain[low.0], qi(2));
        assert_eq!(chain[high.0], qi(1));
    }

    #[test]
    fn affine_indicator_matches_membership() {
        let g = tri_affine();
        let ambient = ambient_flat(&g);
        let triangle = Polytope::from_vertices(
            2,
            &[vec![qi(0), qi(0)], vec![qi(1), qi(0)], vec![qi(0), qi(1)]],
        )
        .unwrap();
        let chain = indicator_chain_affine(&g, &triangle);
        let ones = chain.iter().filter(|v| **v == qi(1)).count();
        assert_eq!(ones, 1, "only the bounded chamber is inside");
        let inside = g.locate(ambient, &[q(1, 4), q(1, 4)], None).unwrap();
        assert_eq!(chain[inside.0], qi(1));
    }

    #[test]
    fn sparse_compose_matches_dense_product() {
        let mut a = SparseMap::zero(2, 3);
        a.add(0, 0, qi(2));
        a.add(0, 2, qi(-1));
        a.add(1, 1, q(1, 2));
        let mut b = SparseMap::zero(3, 2);
        b.add(0, 0, qi(1));
        b.add(1, 0, qi(4));
        b.add(2, 1, qi(3));
        let ab = a.compose(&b);
        assert_eq!(ab.to_matrix(), a.to_matrix().mul(&b.to_matrix()));
    }
}
