//! Toric arrangements: finite families of rational hyperplanes in Tⁿ = ℝⁿ/ℤⁿ.
//!
//! A toric hyperplane is `{x : a·x ≡ c (mod 1)}` with a primitive integer
//! normal `a` and a rational offset `c ∈ [0, 1)`. An arrangement is *valid*
//! when its normals span ℚⁿ; equivalently, a zero-dimensional flat exists;
//! equivalently, every chamber of the periodic lift to ℝⁿ is bounded.
//!
//! **Flats** are the connected components of intersections of subfamilies.
//! A subfamily with integer matrix `A` and offsets `c` is solved through the
//! Smith normal form `U·A·V = D`: it is consistent iff the entries of `U·c`
//! beyond the rank are integers, splits into `d₁⋯d_r` components, and its
//! direction lattice is spanned by the last columns of `V`. Every flat is
//! identified by the canonical key (codimension, HNF basis of the saturated
//! conormal lattice `R`, fractional vector `R·p mod 1`) — the set
//! `{x : R·x ≡ σ}` is connected because saturated lattices have unit
//! elementary divisors, so the key determines the flat.
//!
//! **Top cells** of the induced arrangement on a flat are computed on the
//! periodic lift in the flat's lattice coordinates. A chamber of the lift is
//! exactly an intersection of open slabs, one per induced hyperplane,
//! between consecutive integer translates; it is therefore determined by its
//! vector of slab offsets, and a torus cell is the orbit of a chamber under
//! the translation action on offset vectors. Offset vectors are reduced to
//! canonical coset representatives against the Hermite form of the
//! translation image, which yields stable cell identities, canonical
//! representative polytopes, interior points, volumes, wall adjacency, and
//! exact point location — including the symbolic `+ε·w` nudge used to locate
//! cells adjacent to a wall point.

use crate::geometry::{
    relative_conormal, CellId, FlatId, Geometry, GeometryError, LoopClass,
    LoopCrossing, WallCrossing,
};
use crate::lattice::{
    gcd_vec, hnf, kernel_lattice, lattice_contains, lex_positive, row_saturation, smith,
    IntMatrix,
};
use crate::linalg::{solve, Matrix};
use crate::polytope::{affine_rank, barycenter_of, vertices_from_halfspaces, volume};
use crate::rational::{floor_int, format_q, frac, is_integer, sign, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// A toric hyperplane `{x : normal·x ≡ offset (mod 1)}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ToricHyperplane {
    /// Primitive integer normal vector.
    pub normal: Vec<BigInt>,
    /// Offset in `[0, 1)`.
    pub offset: Q,
}

impl ToricHyperplane {
    /// Construct from machine integers and a rational offset.
    pub fn new(normal: Vec<i64>, offset: Q) -> Self {
        ToricHyperplane {
            normal: normal.into_iter().map(BigInt::from).collect(),
            offset,
        }
    }

    /// The same hyperplane with a lex-positive normal and offset in `[0,1)`.
    /// (`{a·x ≡ c}` and `{-a·x ≡ -c}` are the same subset of the torus.)
    pub fn canonicalized(&self) -> ToricHyperplane {
        let flipped = lex_positive(&self.normal);
        if flipped == self.normal {
            ToricHyperplane {
                normal: self.normal.clone(),
                offset: frac(&self.offset),
            }
        } else {
            ToricHyperplane {
                normal: flipped,
                offset: frac(&-self.offset.clone()),
            }
        }
    }
}

/// A finite toric arrangement in `T^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricArrangement {
    /// Ambient dimension `n`.
    pub dim: usize,
    /// The hyperplanes (order is preserved and used in reports).
    pub hyperplanes: Vec<ToricHyperplane>,
}

/// Validation facts about a toric arrangement. The last three booleans are
/// equivalent for toric arrangements (full normal rank ⟺ existence of a
/// zero-dimensional flat ⟺ bounded chambers of the periodic lift); they are
/// reported separately because each is a distinct observable failure mode.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ToricValidationReport {
    /// Number of hyperplanes.
    pub hyperplane_count: usize,
    /// Per-hyperplane: normal is nonzero and primitive.
    pub primitive_normals: Vec<bool>,
    /// No two hyperplanes coincide as subsets of the torus.
    pub distinct: bool,
    /// The normals span ℚⁿ.
    pub full_rank: bool,
    /// Some subfamily cuts out a zero-dimensional flat.
    pub has_zero_dimensional_flat: bool,
    /// Every chamber of the periodic lift is bounded.
    pub lifted_cells_bounded: bool,
    /// All of the above hold.
    pub valid: bool,
}

/// Validate a toric arrangement without building its geometry.
pub fn validate_toric(a: &ToricArrangement) -> ToricValidationReport {
    let primitive_normals: Vec<bool> = a
        .hyperplanes
        .iter()
        .map(|h| {
            !h.normal.iter().all(Zero::is_zero)
                && gcd_vec(&h.normal).is_one()
                && h.normal.len() == a.dim
        })
        .collect();
    let canon: Vec<ToricHyperplane> = a.hyperplanes.iter().map(|h| h.canonicalized()).collect();
    let mut sorted = canon.clone();
    sorted.sort();
    sorted.dedup();
    let distinct = sorted.len() == canon.len();
    let normals = IntMatrix::from_rows(a.hyperplanes.iter().map(|h| h.normal.clone()).collect());
    let full_rank = !a.hyperplanes.is_empty() && normals.rank() == a.dim;
    let valid = primitive_normals.iter().all(|&b| b) && distinct && full_rank;
    ToricValidationReport {
        hyperplane_count: a.hyperplanes.len(),
        primitive_normals,
        distinct,
        full_rank,
        has_zero_dimensional_flat: full_rank,
        lifted_cells_bounded: full_rank,
        valid,
    }
}

/// Errors from toric arrangement construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToricError {
    /// The arrangement failed validation.
    #[error("invalid toric arrangement: {0}")]
    Invalid(String),
    /// A geometric query failed.
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// An induced hyperplane of the restriction of the arrangement to a flat,
/// in the flat's local lattice coordinates.
#[derive(Debug, Clone)]
pub struct Induced {
    /// Primitive lex-positive local normal (length = flat dimension).
    pub normal: Vec<BigInt>,
    /// Offset in `[0, 1)`.
    pub offset: Q,
    /// The ambient flat equal to this induced hyperplane.
    pub wall_flat: FlatId,
    /// Sign of `(local image of the wall's canonical relative conormal) ·
    /// normal`; converts slab-crossing directions to conormal sides.
    side_sign: i8,
}

#[derive(Debug, Clone)]
struct CellData {
    key: Vec<BigInt>,
    vertices: Vec<Vec<Q>>,
    interior_local: Vec<Q>,
    interior: Vec<Q>,
    volume: Option<Q>,
}

#[derive(Debug, Clone)]
struct FlatData {
    codim: usize,
    frame: IntMatrix,
    direction: IntMatrix,
    base: Vec<Q>,
    label: String,
    walls: Vec<FlatId>,
    induced: Vec<Induced>,
    /// SNF transforms of `directionᵀ` for exact local coordinates.
    solver_u: IntMatrix,
    solver_v: IntMatrix,
    /// HNF of the translation image `{(b_j·v)_j : v ∈ Z^m}` for key reduction.
    reduction: IntMatrix,
    cells: Vec<CellData>,
    cell_ids: BTreeMap<Vec<BigInt>, usize>,
    adjacency: Vec<WallCrossing>,
    loops: Vec<LoopClass>,
}

/// The fully computed geometry of a valid toric arrangement.
#[derive(Debug, Clone)]
pub struct ToricGeometry {
    n: usize,
    hyperplanes: Vec<ToricHyperplane>,
    flats: Vec<FlatData>,
    contains: Vec<Vec<bool>>,
    key_index: BTreeMap<(usize, IntMatrix, Vec<Q>), usize>,
}

type FlatKey = (usize, IntMatrix, Vec<Q>);
/// In-progress cell record: local vertices and a local interior point.
type CellDraft = (Vec<Vec<Q>>, Vec<Q>);
/// A crossing `(from key, to key, induced hyperplane, sign, facet barycenter)`.
type RawEdge = (Vec<BigInt>, Vec<BigInt>, usize, i8, Vec<Q>);
/// A sorted cell entry `(key, vertices, local interior, ambient interior)`.
type CellEntry = (Vec<BigInt>, Vec<Vec<Q>>, Vec<Q>, Vec<Q>);

impl ToricGeometry {
    /// Build the full geometry (flats, cells, adjacency, loops) of a valid
    /// arrangement. Fails with a descriptive message when validation fails.
    pub fn new(arrangement: &ToricArrangement) -> Result<ToricGeometry, ToricError> {
        let report = validate_toric(arrangement);
        if !report.valid {
            let mut why = Vec::new();
            if report.primitive_normals.iter().any(|b| !b) {
                why.push("non-primitive or zero normal".to_string());
            }
            if !report.distinct {
                why.push("duplicate hyperplanes".to_string());
            }
            if !report.full_rank {
                why.push("normals do not span (lifted chambers unbounded)".to_string());
            }
            return Err(ToricError::Invalid(why.join("; ")));
        }
        let n = arrangement.dim;
        let hyperplanes: Vec<ToricHyperplane> = arrangement
            .hyperplanes
            .iter()
            .map(|h| h.canonicalized())
            .collect();

        // Enumerate flats: components of intersections of all subfamilies.
        let mut keys: BTreeMap<FlatKey, ()> = BTreeMap::new();
        let indices: Vec<usize> = (0..hyperplanes.len()).collect();
        for size in 0..=hyperplanes.len() {
            for subset in crate::polytope::subsets_of_size(&indices, size) {
                for base in subfamily_components(n, &hyperplanes, &subset) {
                    let a = subset_matrix(n, &hyperplanes, &subset);
                    let frame = row_saturation(&a);
                    let codim = frame.nrows();
                    let sigma = frac_vec(&frame.to_rational().mul_vec(&base));
                    keys.insert((codim, frame, sigma), ());
                }
            }
        }
        let key_index: BTreeMap<FlatKey, usize> = keys
            .keys()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();

        // Skeleton data per flat.
        let mut flats: Vec<FlatData> = Vec::with_capacity(key_index.len());
        for ((codim, frame, sigma), _) in key_index.iter().map(|(k, v)| (k.clone(), v)) {
            let base = canonical_base(&frame, &sigma);
            let direction = kernel_lattice(&frame);
            let m = n - codim;
            debug_assert_eq!(direction.nrows(), m);
            let (solver_u, solver_v) = local_solver(&direction);
            let label = flat_label_string(codim, &frame, &sigma);
            flats.push(FlatData {
                codim,
                frame,
                direction,
                base,
                label,
                walls: Vec::new(),
                induced: Vec::new(),
                solver_u,
                solver_v,
                reduction: IntMatrix::zero(0, 0),
                cells: Vec::new(),
                cell_ids: BTreeMap::new(),
                adjacency: Vec::new(),
                loops: Vec::new(),
            });
        }

        // Containment: inner ⊆ outer ⟺ conormal(outer) ⊆ conormal(inner)
        // as lattices, and outer's congruences hold at inner's base point.
        let count = flats.len();
        let mut contains = vec![vec![false; count]; count];
        for outer in 0..count {
            for inner in 0..count {
                if flats[outer].codim > flats[inner].codim {
                    continue;
                }
                let lat_ok = lattice_contains(&flats[inner].frame, &flats[outer].frame);
                if !lat_ok {
                    continue;
                }
                let vals = flats[outer].frame.to_rational().mul_vec(&flats[inner].base);
                let sigma_outer =
                    frac_vec(&flats[outer].frame.to_rational().mul_vec(&flats[outer].base));
                contains[outer][inner] = frac_vec(&vals) == sigma_outer;
            }
        }
        for f in 0..count {
            let walls: Vec<FlatId> = (0..count)
                .filter(|&g| flats[g].codim == flats[f].codim + 1 && contains[f][g])
                .map(FlatId)
                .collect();
            flats[f].walls = walls;
        }

        let mut geom = ToricGeometry {
            n,
            hyperplanes,
            flats,
            contains,
            key_index,
        };

        // Cells, adjacency, loops: deepest flats first so that wall-flat
        // cell tables exist when parents reference them.
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(geom.flats[i].codim));
        for i in order {
            geom.build_flat_cells(i)?;
        }
        Ok(geom)
    }

    /// The canonicalized hyperplane list.
    pub fn hyperplanes(&self) -> &[ToricHyperplane] {
        &self.hyperplanes
    }

    /// Induced hyperplanes of the restriction to a flat, with wall flats.
    pub fn induced(&self, f: FlatId) -> &[Induced] {
        &self.flats[f.0].induced
    }

    /// Vertices of the canonical representative chamber of a cell, in the
    /// flat's local lattice coordinates.
    pub fn cell_vertices_local(&self, f: FlatId, c: CellId) -> &[Vec<Q>] {
        &self.flats[f.0].cells[c.0].vertices
    }

    /// Interior point of a cell in local coordinates (lying inside the
    /// canonical representative chamber).
    pub fn interior_point_local(&self, f: FlatId, c: CellId) -> &[Q] {
        &self.flats[f.0].cells[c.0].interior_local
    }

    /// Canonical slab-offset identity of a cell.
    pub fn cell_key(&self, f: FlatId, c: CellId) -> &[BigInt] {
        &self.flats[f.0].cells[c.0].key
    }

    /// Flats cut out by a subfamily of hyperplane indices: the connected
    /// components of the intersection, as flat ids.
    pub fn subfamily_flats(&self, subset: &[usize]) -> Vec<FlatId> {
        let mut out = Vec::new();
        for base in subfamily_components(self.n, &self.hyperplanes, subset) {
            let a = subset_matrix(self.n, &self.hyperplanes, subset);
            let frame = row_saturation(&a);
            let codim = frame.nrows();
            let sigma = frac_vec(&frame.to_rational().mul_vec(&base));
            let id = self.key_index[&(codim, frame, sigma)];
            out.push(FlatId(id));
        }
        out.sort();
        out.dedup();
        out
    }

    /// Find a flat by its canonical key, if present.
    pub fn flat_by_key(&self, codim: usize, frame: &IntMatrix, sigma: &[Q]) -> Option<FlatId> {
        self.key_index
            .get(&(codim, frame.clone(), sigma.to_vec()))
            .copied()
            .map(FlatId)
    }

    /// Local lattice coordinates of an ambient point of the flat (any
    /// preimage under the covering; all choices differ by local lattice
    /// translations and identify the same torus point).
    pub fn to_local(&self, f: FlatId, q: &[Q]) -> Result<Vec<Q>, GeometryError> {
        let fd = &self.flats[f.0];
        let m = self.n - fd.codim;
        let z: Vec<Q> = q.iter().zip(&fd.base).map(|(a, b)| a - b).collect();
        let uz = fd.solver_u.mul_qvec(&z);
        for value in uz.iter().skip(m) {
            if !is_integer(value) {
                return Err(GeometryError::NotInFlat(fd.label.clone()));
            }
        }
        Ok(fd.solver_v.mul_qvec(&uz[0..m]))
    }

    /// Ambient representative of a local point, reduced into `[0,1)ⁿ`.
    pub fn embed(&self, f: FlatId, y: &[Q]) -> Vec<Q> {
        let fd = &self.flats[f.0];
        let wt = fd.direction.to_rational().transpose();
        let x = wt.mul_vec(y);
        frac_vec(
            &x.iter()
                .zip(&fd.base)
                .map(|(a, b)| a + b)
                .collect::<Vec<Q>>(),
        )
    }

    fn build_flat_cells(&mut self, idx: usize) -> Result<(), ToricError> {
        let n = self.n;
        let codim = self.flats[idx].codim;
        let m = n - codim;
        if m == 0 {
            let base = self.flats[idx].base.clone();
            self.flats[idx].cells = vec![CellData {
                key: Vec::new(),
                vertices: vec![Vec::new()],
                interior_local: Vec::new(),
                interior: base,
                volume: Some(Q::one()),
            }];
            self.flats[idx].cell_ids = BTreeMap::from([(Vec::new(), 0)]);
            self.flats[idx].reduction = IntMatrix::zero(0, 0);
            return Ok(());
        }

        // ---- induced hyperplanes ----
        let (induced, reduction) = self.build_induced(idx)?;
        self.flats[idx].induced = induced;
        self.flats[idx].reduction = reduction;

        // ---- cells by breadth-first slab traversal ----
        let seed = generic_point(m, &self.flats[idx].induced);
        let seed_key = {
            let raw: Vec<BigInt> = self.flats[idx]
                .induced
                .iter()
                .map(|h| floor_int(&(dot_int_q(&h.normal, &seed) - &h.offset)))
                .collect();
            reduce_key(&self.flats[idx].reduction, &raw)
        };
        let mut cells: BTreeMap<Vec<BigInt>, CellDraft> = BTreeMap::new();
        let mut raw_edges: Vec<RawEdge> = Vec::new();
        let mut queue = vec![seed_key];
        while let Some(key) = queue.pop() {
            if cells.contains_key(&key) {
                continue;
            }
            let (verts, interior) = self.cell_polytope(idx, &key);
            cells.insert(key.clone(), (verts.clone(), interior));
            // Facets: tight lower/upper slab bounds with enough vertices.
            for (j, h) in self.flats[idx].induced.iter().enumerate() {
                for upper in [false, true] {
                    let bound = if upper {
                        &h.offset + Q::from_integer(&key[j] + BigInt::one())
                    } else {
                        &h.offset + Q::from_integer(key[j].clone())
                    };
                    let on: Vec<Vec<Q>> = verts
                        .iter()
                        .filter(|v| dot_int_q(&h.normal, v) == bound)
                        .cloned()
                        .collect();
                    if on.is_empty() || affine_rank(&on) + 1 != m {
                        continue;
                    }
                    let mut raw = key.clone();
                    if upper {
                        raw[j] += 1;
                    } else {
                        raw[j] -= 1;
                    }
                    let neighbor = reduce_key(&self.flats[idx].reduction, &raw);
                    let crossing_sign = if upper { 1i8 } else { -1i8 };
                    raw_edges.push((
                        key.clone(),
                        neighbor.clone(),
                        j,
                        crossing_sign,
                        barycenter_of(&on),
                    ));
                    if !cells.contains_key(&neighbor) {
                        queue.push(neighbor);
                    }
                }
            }
        }

        // Deterministic cell order: by ambient interior point.
        let mut entries: Vec<CellEntry> = cells
            .into_iter()
            .map(|(key, (verts, interior_local))| {
                let interior = self.embed(FlatId(idx), &interior_local);
                (key, verts, interior_local, interior)
            })
            .collect();
        entries.sort_by(|a, b| a.3.cmp(&b.3));
        let cell_ids: BTreeMap<Vec<BigInt>, usize> = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.0.clone(), i))
            .collect();
        let cell_data: Vec<CellData> = entries
            .into_iter()
            .map(|(key, vertices, interior_local, interior)| {
                let vol = if m <= 3 {
                    Some(volume(&vertices).expect("cell volume in supported dimension"))
                } else {
                    None
                };
                CellData {
                    key,
                    vertices,
                    interior_local,
                    interior,
                    volume: vol,
                }
            })
            .collect();
        self.flats[idx].cells = cell_data;
        self.flats[idx].cell_ids = cell_ids;

        // ---- adjacency with wall cells ----
        let mut adjacency = Vec::new();
        for (from_key, to_key, j, crossing_sign, facet_bary) in raw_edges {
            let h = &self.flats[idx].induced[j];
            let wall_flat = h.wall_flat;
            let ambient = self.embed(FlatId(idx), &facet_bary);
            let wall_cell = self.locate(wall_flat, &ambient, None)?;
            let to_side = crossing_sign * h.side_sign;
            adjacency.push(WallCrossing {
                from: CellId(self.flats[idx].cell_ids[&from_key]),
                to: CellId(self.flats[idx].cell_ids[&to_key]),
                wall_flat,
                wall_cell,
                to_side,
            });
        }
        adjacency.sort_by_key(|e| (e.from.0, e.wall_flat.0, e.wall_cell.0, e.to.0, e.to_side));
        self.flats[idx].adjacency = adjacency;

        // ---- homology loops ----
        self.flats[idx].loops = make_loops(m, &self.flats[idx].induced);
        Ok(())
    }

    /// Induced hyperplanes of flat `idx`, plus the key-reduction basis.
    fn build_induced(&self, idx: usize) -> Result<(Vec<Induced>, IntMatrix), ToricError> {
        let fd = &self.flats[idx];
        let n = self.n;
        let m = n - fd.codim;
        // Collect split, canonicalized local hyperplanes with one ambient
        // representative covector each.
        let mut reps: BTreeMap<(Vec<BigInt>, Q), Vec<BigInt>> = BTreeMap::new();
        for h in &self.hyperplanes {
            let b_raw: Vec<BigInt> = (0..m)
                .map(|i| {
                    fd.direction
                        .row(i)
                        .iter()
                        .zip(&h.normal)
                        .map(|(w, a)| w * a)
                        .sum()
                })
                .collect();
            if b_raw.iter().all(Zero::is_zero) {
                continue;
            }
            let g = gcd_vec(&b_raw);
            let b0: Vec<BigInt> = b_raw.iter().map(|x| x / &g).collect();
            let shift = &h.offset - dot_int_q(&h.normal, &fd.base);
            let g_q = Q::from_integer(g.clone());
            let mut j = BigInt::zero();
            while j < g {
                let off = frac(&((&shift + Q::from_integer(j.clone())) / &g_q));
                let (bc, oc) = canonical_local(&b0, &off);
                reps.entry((bc, oc)).or_insert_with(|| h.normal.clone());
                j += 1;
            }
        }
        debug_assert!(!reps.is_empty(), "valid arrangements induce on every flat");
        // Resolve wall flats via a generic point on each induced hyperplane.
        let all: Vec<(Vec<BigInt>, Q)> = reps.keys().cloned().collect();
        let mut induced = Vec::new();
        for ((b, c), a_rep) in &reps {
            let y_star = generic_point_on(m, &all, b, c);
            let x_star = self.embed(FlatId(idx), &y_star);
            let stacked = {
                let mut rows = fd.frame.to_rows();
                rows.push(a_rep.clone());
                IntMatrix::from_rows(rows)
            };
            let wall_frame = row_saturation(&stacked);
            let sigma = frac_vec(&wall_frame.to_rational().mul_vec(&x_star));
            let wall = self
                .flat_by_key(fd.codim + 1, &wall_frame, &sigma)
                .expect("induced hyperplane is a flat of the arrangement");
            // Local image of the wall's canonical relative conormal.
            let u = relative_conormal(self, FlatId(idx), wall);
            let u_loc: Vec<BigInt> = (0..m)
                .map(|i| {
                    fd.direction
                        .row(i)
                        .iter()
                        .zip(&u)
                        .map(|(w, x)| w * x)
                        .sum()
                })
                .collect();
            let pairing: BigInt = u_loc.iter().zip(b).map(|(x, y)| x * y).sum();
            debug_assert!(!pairing.is_zero());
            let side_sign = if pairing.is_positive() { 1 } else { -1 };
            induced.push(Induced {
                normal: b.clone(),
                offset: c.clone(),
                wall_flat: wall,
                side_sign,
            });
        }
        // Key reduction basis: HNF of the translation image Bᵀ.
        let bt = IntMatrix::from_rows(
            (0..m)
                .map(|i| induced.iter().map(|h| h.normal[i].clone()).collect())
                .collect(),
        );
        let reduction = hnf(&bt);
        assert_eq!(
            reduction.nrows(),
            m,
            "induced normals of a valid arrangement span the flat"
        );
        Ok((induced, reduction))
    }

    /// Vertices and interior point of the canonical representative chamber
    /// with slab offsets `key`.
    fn cell_polytope(&self, idx: usize, key: &[BigInt]) -> (Vec<Vec<Q>>, Vec<Q>) {
        let fd = &self.flats[idx];
        let m = self.n - fd.codim;
        let mut halfspaces: Vec<(Vec<Q>, Q)> = Vec::new();
        for (j, h) in fd.induced.iter().enumerate() {
            let bq: Vec<Q> = h.normal.iter().map(|x| Q::from_integer(x.clone())).collect();
            let lo = &h.offset + Q::from_integer(key[j].clone());
            let hi = &lo + Q::one();
            halfspaces.push((bq.iter().map(|x| -x).collect(), -lo));
            halfspaces.push((bq, hi));
        }
        let verts = vertices_from_halfspaces(m, &halfspaces);
        assert!(!verts.is_empty(), "chambers of a valid lift are bounded polytopes");
        let interior = barycenter_of(&verts);
        (verts, interior)
    }
}

impl Geometry for ToricGeometry {
    fn dim(&self) -> usize {
        self.n
    }

    fn flat_count(&self) -> usize {
        self.flats.len()
    }

    fn codim(&self, f: FlatId) -> usize {
        self.flats[f.0].codim
    }

    fn frame(&self, f: FlatId) -> &IntMatrix {
        &self.flats[f.0].frame
    }

    fn direction_basis(&self, f: FlatId) -> &IntMatrix {
        &self.flats[f.0].direction
    }

    fn base_point(&self, f: FlatId) -> &[Q] {
        &self.flats[f.0].base
    }

    fn walls(&self, f: FlatId) -> &[FlatId] {
        &self.flats[f.0].walls
    }

    fn contains_flat(&self, outer: FlatId, inner: FlatId) -> bool {
        self.contains[outer.0][inner.0]
    }

    fn cell_count(&self, f: FlatId) -> usize {
        self.flats[f.0].cells.len()
    }

    fn interior_point(&self, f: FlatId, c: CellId) -> &[Q] {
        &self.flats[f.0].cells[c.0].interior
    }

    fn cell_bounded(&self, _f: FlatId, _c: CellId) -> bool {
        true
    }

    fn cell_volume(&self, f: FlatId, c: CellId) -> Option<Q> {
        self.flats[f.0].cells[c.0].volume.clone()
    }

    fn on_flat(&self, f: FlatId, q: &[Q]) -> bool {
        let fd = &self.flats[f.0];
        if self.n == fd.codim {
            return q.iter().zip(&fd.base).all(|(a, b)| is_integer(&(a - b)));
        }
        self.to_local(f, q).is_ok()
    }

    fn locate(&self, f: FlatId, q: &[Q], w: Option<&[Q]>) -> Result<CellId, GeometryError> {
        let fd = &self.flats[f.0];
        let m = self.n - fd.codim;
        if m == 0 {
            let onto: Vec<Q> = q.iter().zip(&fd.base).map(|(a, b)| a - b).collect();
            if onto.iter().all(is_integer) {
                return Ok(CellId(0));
            }
            return Err(GeometryError::NotInFlat(fd.label.clone()));
        }
        let y = self.to_local(f, q)?;
        let w_loc: Option<Vec<Q>> = match w {
            None => None,
            Some(wv) => {
                let wt = fd.direction.to_rational().transpose();
                Some(
                    solve(&wt, wv)
                        .ok_or_else(|| GeometryError::DirectionNotInFlat(fd.label.clone()))?,
                )
            }
        };
        let mut raw = Vec::with_capacity(fd.induced.len());
        for h in &fd.induced {
            let v = dot_int_q(&h.normal, &y) - &h.offset;
            if is_integer(&v) {
                let Some(wl) = &w_loc else {
                    return Err(GeometryError::OnHyperplane(fd.label.clone()));
                };
                let s = sign(&dot_int_q(&h.normal, wl));
                if s == 0 {
                    return Err(GeometryError::TangentDirection(fd.label.clone()));
                }
                let base = v.numer().clone();
                raw.push(if s > 0 { base } else { base - BigInt::one() });
            } else {
                raw.push(floor_int(&v));
            }
        }
        let key = reduce_key(&fd.reduction, &raw);
        fd.cell_ids
            .get(&key)
            .map(|&i| CellId(i))
            .ok_or_else(|| GeometryError::UnknownCell(fd.label.clone()))
    }

    fn adjacency(&self, f: FlatId) -> &[WallCrossing] {
        &self.flats[f.0].adjacency
    }

    fn h1_loops(&self, f: FlatId) -> &[LoopClass] {
        &self.flats[f.0].loops
    }

    fn loop_crossings(&self, f: FlatId, l: &LoopClass) -> Vec<LoopCrossing> {
        let fd = &self.flats[f.0];
        let mut out = Vec::new();
        for h in &fd.induced {
            let s: BigInt = h.normal.iter().zip(&l.direction).map(|(a, b)| a * b).sum();
            if s.is_zero() {
                continue;
            }
            let v = dot_int_q(&h.normal, &l.base) - &h.offset;
            debug_assert!(!is_integer(&v), "loop base must be generic");
            let dir_sign = if s.is_positive() { 1i8 } else { -1i8 };
            let count: BigInt = s.abs();
            let first = if s.is_positive() {
                floor_int(&v) + BigInt::one()
            } else {
                floor_int(&v)
            };
            let mut step = BigInt::zero();
            while step < count {
                let k = if s.is_positive() {
                    &first + &step
                } else {
                    &first - &step
                };
                let t = (Q::from_integer(k) - &v) / Q::from_integer(s.clone());
                debug_assert!(t >= Q::zero() && t < Q::one());
                let point: Vec<Q> = l
                    .base
                    .iter()
                    .zip(&l.direction)
                    .map(|(b, d)| b + &t * Q::from_integer(d.clone()))
                    .collect();
                let ambient = self.embed(f, &point);
                let wall_cell = self
                    .locate(h.wall_flat, &ambient, None)
                    .expect("loop crossings are generic wall points");
                out.push(LoopCrossing {
                    wall_flat: h.wall_flat,
                    wall_cell,
                    direction_sign: dir_sign * h.side_sign,
                });
                step += 1;
            }
        }
        out
    }

    fn flat_label(&self, f: FlatId) -> String {
        self.flats[f.0].label.clone()
    }
}

// ---------- free helpers ----------

/// `Σ aᵢ·xᵢ` with integer `a` and rational `x`.
fn dot_int_q(a: &[BigInt], x: &[Q]) -> Q {
    debug_assert_eq!(a.len(), x.len());
    let mut acc = Q::zero();
    for (ai, xi) in a.iter().zip(x) {
        if !ai.is_zero() {
            acc += Q::from_integer(ai.clone()) * xi;
        }
    }
    acc
}

/// Componentwise fractional part.
fn frac_vec(xs: &[Q]) -> Vec<Q> {
    xs.iter().map(frac).collect()
}

/// Matrix of the normals of a subfamily (|subset| × n).
fn subset_matrix(n: usize, hps: &[ToricHyperplane], subset: &[usize]) -> IntMatrix {
    if subset.is_empty() {
        return IntMatrix::zero(0, n);
    }
    IntMatrix::from_rows(subset.iter().map(|&i| hps[i].normal.clone()).collect())
}

/// Base points (reduced into `[0,1)ⁿ`) of the components of the intersection
/// of a subfamily, via the Smith normal form. Empty when inconsistent.
fn subfamily_components(n: usize, hps: &[ToricHyperplane], subset: &[usize]) -> Vec<Vec<Q>> {
    let a = subset_matrix(n, hps, subset);
    let c: Vec<Q> = subset.iter().map(|&i| hps[i].offset.clone()).collect();
    let s = smith(&a);
    let uc = s.u.mul_qvec(&c);
    for row in uc.iter().skip(s.rank) {
        if !is_integer(row) {
            return Vec::new();
        }
    }
    // y_i = ((Uc)_i + t_i) / d_i for t_i in 0..d_i, free coordinates zero.
    let divisors = s.divisors();
    let mut choices: Vec<Vec<Q>> = vec![Vec::new()];
    for (i, d) in divisors.iter().enumerate() {
        let mut next = Vec::new();
        let d_q = Q::from_integer(d.clone());
        let mut t = BigInt::zero();
        while &t < d {
            for c in &choices {
                let mut c2 = c.clone();
                c2.push((&uc[i] + Q::from_integer(t.clone())) / &d_q);
                next.push(c2);
            }
            t += 1;
        }
        choices = next;
    }
    choices
        .into_iter()
        .map(|mut y| {
            y.resize(n, Q::zero());
            frac_vec(&s.v.to_rational().mul_vec(&y))
        })
        .collect()
}

/// Deterministic base point of a flat from its canonical key.
fn canonical_base(frame: &IntMatrix, sigma: &[Q]) -> Vec<Q> {
    if frame.nrows() == 0 {
        return vec![Q::zero(); frame.ncols()];
    }
    let x = solve(&frame.to_rational(), sigma).expect("frame rows are independent");
    frac_vec(&x)
}

/// SNF transforms of `directionᵀ` (n × m): returns `(U, V)` with all
/// elementary divisors one, so local coordinates of `z` are
/// `V · (U·z)[0..m]` with the tail of `U·z` integral exactly on the flat.
fn local_solver(direction: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let s = smith(&direction.transpose());
    debug_assert!(s.divisors().iter().all(|d| d.is_one()), "basis is saturated");
    (s.u, s.v)
}

/// Canonical form of a local hyperplane: lex-positive normal, offset in [0,1).
fn canonical_local(b: &[BigInt], c: &Q) -> (Vec<BigInt>, Q) {
    let flipped = lex_positive(b);
    if flipped == b {
        (flipped, frac(c))
    } else {
        (flipped, frac(&-c.clone()))
    }
}

/// Reduce a slab-offset vector to its canonical coset representative
/// against the HNF rows of the translation image.
fn reduce_key(reduction: &IntMatrix, t: &[BigInt]) -> Vec<BigInt> {
    let mut t = t.to_vec();
    for i in 0..reduction.nrows() {
        let p = (0..reduction.ncols())
            .find(|&j| !reduction[(i, j)].is_zero())
            .expect("reduction rows are nonzero");
        let q = num_integer::Integer::div_floor(&t[p], &reduction[(i, p)]);
        if q.is_zero() {
            continue;
        }
        for j in 0..t.len() {
            let step = &q * &reduction[(i, j)];
            t[j] -= step;
        }
    }
    t
}

/// First point `(1/q, 1/q², …)` that lies on no induced hyperplane lift.
fn generic_point(m: usize, induced: &[Induced]) -> Vec<Q> {
    let mut q = BigInt::from(2);
    loop {
        let y = power_point(m, &q);
        if induced
            .iter()
            .all(|h| !is_integer(&(dot_int_q(&h.normal, &y) - &h.offset)))
        {
            return y;
        }
        q += 1;
    }
}

/// `(1/q, 1/q², …, 1/q^m)`.
fn power_point(m: usize, q: &BigInt) -> Vec<Q> {
    let mut y = Vec::with_capacity(m);
    let mut denom = BigInt::one();
    for _ in 0..m {
        denom *= q;
        y.push(Q::new(BigInt::one(), denom.clone()));
    }
    y
}

/// Deterministic generic point on the induced hyperplane `(b, c)`:
/// a particular solution plus a generic kernel combination avoiding every
/// other induced hyperplane lift.
fn generic_point_on(_m: usize, all: &[(Vec<BigInt>, Q)], b: &[BigInt], c: &Q) -> Vec<Q> {
    let bq = Matrix::from_rows(vec![b
        .iter()
        .map(|x| Q::from_integer(x.clone()))
        .collect::<Vec<Q>>()]);
    let particular = solve(&bq, std::slice::from_ref(c)).expect("induced normal is nonzero");
    let kernel = crate::linalg::kernel_basis(&bq);
    let mut q = BigInt::from(2);
    loop {
        let mut y = particular.clone();
        let mut denom = BigInt::one();
        for kv in &kernel {
            denom *= &q;
            let w = Q::new(BigInt::one(), denom.clone());
            for (yi, ki) in y.iter_mut().zip(kv) {
                *yi += &w * ki;
            }
        }
        let ok = all.iter().all(|(b2, c2)| {
            if b2 == b && c2 == c {
                return true;
            }
            !is_integer(&(dot_int_q(b2, &y) - c2))
        });
        if ok {
            debug_assert_eq!(dot_int_q(b, &y), *c);
            return y;
        }
        q += 1;
    }
}

/// Loops generating the first homology of the flat's torus: coordinate
/// directions from a shared generic base point whose crossings with every
/// induced hyperplane avoid all other induced hyperplanes.
fn make_loops(m: usize, induced: &[Induced]) -> Vec<LoopClass> {
    if m == 0 {
        return Vec::new();
    }
    let mut q = BigInt::from(2);
    let base = loop {
        let y = power_point(m, &q);
        if loop_base_ok(&y, m, induced) {
            break y;
        }
        q += 1;
    };
    (0..m)
        .map(|i| {
            let mut direction = vec![BigInt::zero(); m];
            direction[i] = BigInt::one();
            LoopClass {
                base: base.clone(),
                direction,
            }
        })
        .collect()
}

/// Crossing-genericity of a loop base point: the base avoids every induced
/// hyperplane, and each coordinate loop meets lifts one hyperplane at a time.
fn loop_base_ok(y0: &[Q], m: usize, induced: &[Induced]) -> bool {
    for h in induced {
        if is_integer(&(dot_int_q(&h.normal, y0) - &h.offset)) {
            return false;
        }
    }
    for i in 0..m {
        for (j, h) in induced.iter().enumerate() {
            let s = h.normal[i].clone();
            if s.is_zero() {
                continue;
            }
            let v = dot_int_q(&h.normal, y0) - &h.offset;
            let count = s.abs();
            let first = if s.is_positive() {
                floor_int(&v) + BigInt::one()
            } else {
                floor_int(&v)
            };
            let mut step = BigInt::zero();
            while step < count {
                let k = if s.is_positive() {
                    &first + &step
                } else {
                    &first - &step
                };
                let t = (Q::from_integer(k) - &v) / Q::from_integer(s.clone());
                let mut point = y0.to_vec();
                point[i] += t;
                for (j2, h2) in induced.iter().enumerate() {
                    if j2 == j {
                        continue;
                    }
                    if is_integer(&(dot_int_q(&h2.normal, &point) - &h2.offset)) {
                        return false;
                    }
                }
                step += 1;
            }
        }
    }
    true
}

/// Canonical flat label: codimension, frame rows, fractional congruences.
fn flat_label_string(codim: usize, frame: &IntMatrix, sigma: &[Q]) -> String {
    let rows: Vec<String> = (0..frame.nrows())
        .map(|i| {
            frame
                .row(i)
                .iter()
                .map(BigInt::to_string)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let sig: Vec<String> = sigma.iter().map(format_q).collect();
    format!("T{}[{}@{}]", codim, rows.join(";"), sig.join(","))
}
