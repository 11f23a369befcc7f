//! Affine arrangements: finite families of rational hyperplanes in ℝⁿ.
//!
//! An affine hyperplane is `{x : a·x = c}` with a primitive integer normal
//! `a` and rational offset `c`. An arrangement is *essential* when its
//! normals span ℚⁿ; this backend requires essentiality, which is exactly
//! the condition under which zero-dimensional flats (vertices) exist.
//!
//! **Flats** are the nonempty intersections of subfamilies — affine
//! subspaces, so no component splitting occurs. A flat is identified by the
//! canonical key (codimension, HNF basis of the saturated conormal lattice
//! `R`, exact value vector `R·p`).
//!
//! **Top cells** of the induced arrangement on a flat are its chambers:
//! connected components of the complement of the induced hyperplanes. A
//! chamber is exactly a feasible strict sign vector over the induced
//! hyperplanes, which this module enumerates by depth-first search with
//! Fourier–Motzkin pruning. Chambers may be unbounded; boundedness is
//! decided exactly through the recession cone, interior points come from
//! deterministic Fourier–Motzkin witnesses (or vertex averages for bounded
//! chambers), and bounded chambers in dimension ≤ 3 get exact volumes.
//!
//! Affine flats are simply connected, so `h1_loops` is empty; for
//! one-dimensional flats, [`AffineGeometry::line_loop`] yields a traversal
//! of the whole line whose crossing list drives compactified period
//! constraints.

use crate::fm::LinearSystem;
use crate::geometry::{
    relative_conormal, CellId, FlatId, Geometry, GeometryError, LoopClass, LoopCrossing,
    WallCrossing,
};
use crate::lattice::{gcd_vec, kernel_lattice, lattice_contains, lex_positive, row_saturation, IntMatrix};
use crate::linalg::{solve, Matrix};
use crate::polytope::{barycenter_of, vertices_from_halfspaces, volume};
use crate::rational::{format_q, sign, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// An affine hyperplane `{x : normal·x = offset}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffineHyperplane {
    /// Primitive integer normal vector.
    pub normal: Vec<BigInt>,
    /// Rational offset.
    pub offset: Q,
}

impl AffineHyperplane {
    /// Construct from machine integers and a rational offset.
    pub fn new(normal: Vec<i64>, offset: Q) -> Self {
        AffineHyperplane {
            normal: normal.into_iter().map(BigInt::from).collect(),
            offset,
        }
    }

    /// The same hyperplane with a lex-positive normal.
    pub fn canonicalized(&self) -> AffineHyperplane {
        let flipped = lex_positive(&self.normal);
        if flipped == self.normal {
            self.clone()
        } else {
            AffineHyperplane {
                normal: flipped,
                offset: -self.offset.clone(),
            }
        }
    }
}

/// A finite affine arrangement in ℝ^dim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineArrangement {
    /// Ambient dimension `n`.
    pub dim: usize,
    /// The hyperplanes (order is preserved and used in reports).
    pub hyperplanes: Vec<AffineHyperplane>,
}

/// Validation facts about an affine arrangement. Essentiality (normals span)
/// is equivalent to the existence of a vertex.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AffineValidationReport {
    /// Number of hyperplanes.
    pub hyperplane_count: usize,
    /// Per-hyperplane: normal is nonzero and primitive.
    pub primitive_normals: Vec<bool>,
    /// No two hyperplanes coincide.
    pub distinct: bool,
    /// The normals span ℚⁿ.
    pub essential: bool,
    /// Some subfamily has a zero-dimensional intersection.
    pub has_vertex: bool,
    /// All of the above hold.
    pub valid: bool,
}

/// Validate an affine arrangement without building its geometry.
pub fn validate_affine(a: &AffineArrangement) -> AffineValidationReport {
    let primitive_normals: Vec<bool> = a
        .hyperplanes
        .iter()
        .map(|h| {
            !h.normal.iter().all(Zero::is_zero)
                && gcd_vec(&h.normal).is_one()
                && h.normal.len() == a.dim
        })
        .collect();
    let canon: Vec<AffineHyperplane> = a.hyperplanes.iter().map(|h| h.canonicalized()).collect();
    let mut sorted = canon.clone();
    sorted.sort();
    sorted.dedup();
    let distinct = sorted.len() == canon.len();
    let normals = IntMatrix::from_rows(a.hyperplanes.iter().map(|h| h.normal.clone()).collect());
    let essential = !a.hyperplanes.is_empty() && normals.rank() == a.dim;
    let valid = primitive_normals.iter().all(|&b| b) && distinct && essential;
    AffineValidationReport {
        hyperplane_count: a.hyperplanes.len(),
        primitive_normals,
        distinct,
        essential,
        has_vertex: essential,
        valid,
    }
}

/// Errors from affine arrangement construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AffineError {
    /// The arrangement failed validation.
    #[error("invalid affine arrangement: {0}")]
    Invalid(String),
    /// A geometric query failed.
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// An induced hyperplane of the restriction to a flat, in local coordinates.
#[derive(Debug, Clone)]
pub struct AffineInduced {
    /// Primitive lex-positive local normal (length = flat dimension).
    pub normal: Vec<BigInt>,
    /// Rational offset.
    pub offset: Q,
    /// The ambient flat equal to this induced hyperplane.
    pub wall_flat: FlatId,
    side_sign: i8,
}

#[derive(Debug, Clone)]
struct CellData {
    signs: Vec<i8>,
    interior_local: Vec<Q>,
    interior: Vec<Q>,
    bounded: bool,
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
    induced: Vec<AffineInduced>,
    cells: Vec<CellData>,
    cell_ids: BTreeMap<Vec<i8>, usize>,
    adjacency: Vec<WallCrossing>,
}

/// The fully computed geometry of a valid (essential) affine arrangement.
#[derive(Debug, Clone)]
pub struct AffineGeometry {
    n: usize,
    hyperplanes: Vec<AffineHyperplane>,
    flats: Vec<FlatData>,
    contains: Vec<Vec<bool>>,
    key_index: BTreeMap<(usize, IntMatrix, Vec<Q>), usize>,
}

impl AffineGeometry {
    /// Build the full geometry (flats, chambers, adjacency) of a valid
    /// arrangement. Fails with a descriptive message when validation fails.
    pub fn new(arrangement: &AffineArrangement) -> Result<AffineGeometry, AffineError> {
        let report = validate_affine(arrangement);
        if !report.valid {
            let mut why = Vec::new();
            if report.primitive_normals.iter().any(|b| !b) {
                why.push("non-primitive or zero normal".to_string());
            }
            if !report.distinct {
                why.push("duplicate hyperplanes".to_string());
            }
            if !report.essential {
                why.push("normals do not span (no vertices)".to_string());
            }
            return Err(AffineError::Invalid(why.join("; ")));
        }
        let n = arrangement.dim;
        let hyperplanes: Vec<AffineHyperplane> = arrangement
            .hyperplanes
            .iter()
            .map(|h| h.canonicalized())
            .collect();

        // Enumerate flats: nonempty intersections of subfamilies.
        let mut keys: BTreeMap<(usize, IntMatrix, Vec<Q>), ()> = BTreeMap::new();
        let indices: Vec<usize> = (0..hyperplanes.len()).collect();
        for size in 0..=hyperplanes.len() {
            for subset in crate::polytope::subsets_of_size(&indices, size) {
                let Some(point) = subfamily_point(n, &hyperplanes, &subset) else {
                    continue;
                };
                let a = subset_matrix(n, &hyperplanes, &subset);
                let frame = row_saturation(&a);
                let codim = frame.nrows();
                let sigma = frame.to_rational().mul_vec(&point);
                keys.insert((codim, frame, sigma), ());
            }
        }
        let key_index: BTreeMap<(usize, IntMatrix, Vec<Q>), usize> = keys
            .keys()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();

        let mut flats: Vec<FlatData> = Vec::with_capacity(key_index.len());
        for (codim, frame, sigma) in key_index.keys().cloned() {
            let base = if codim == 0 {
                vec![Q::zero(); n]
            } else {
                solve(&frame.to_rational(), &sigma).expect("frame rows are independent")
            };
            let direction = kernel_lattice(&frame);
            let label = flat_label_string(codim, &frame, &sigma);
            flats.push(FlatData {
                codim,
                frame,
                direction,
                base,
                label,
                walls: Vec::new(),
                induced: Vec::new(),
                cells: Vec::new(),
                cell_ids: BTreeMap::new(),
                adjacency: Vec::new(),
            });
        }

        let count = flats.len();
        let mut contains = vec![vec![false; count]; count];
        for outer in 0..count {
            for inner in 0..count {
                if flats[outer].codim > flats[inner].codim {
                    continue;
                }
                if !lattice_contains(&flats[inner].frame, &flats[outer].frame) {
                    continue;
                }
                let vals = flats[outer].frame.to_rational().mul_vec(&flats[inner].base);
                let sigma_outer = flats[outer].frame.to_rational().mul_vec(&flats[outer].base);
                contains[outer][inner] = vals == sigma_outer;
            }
        }
        for f in 0..count {
            let walls: Vec<FlatId> = (0..count)
                .filter(|&g| flats[g].codim == flats[f].codim + 1 && contains[f][g])
                .map(FlatId)
                .collect();
            flats[f].walls = walls;
        }

        let mut geom = AffineGeometry {
            n,
            hyperplanes,
            flats,
            contains,
            key_index,
        };
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(geom.flats[i].codim));
        for i in order {
            geom.build_flat_cells(i)?;
        }
        Ok(geom)
    }

    /// The canonicalized hyperplane list.
    pub fn hyperplanes(&self) -> &[AffineHyperplane] {
        &self.hyperplanes
    }

    /// Induced hyperplanes of the restriction to a flat, with wall flats.
    pub fn induced(&self, f: FlatId) -> &[AffineInduced] {
        &self.flats[f.0].induced
    }

    /// Local coordinates of an ambient point of the flat.
    pub fn to_local(&self, f: FlatId, q: &[Q]) -> Result<Vec<Q>, GeometryError> {
        let fd = &self.flats[f.0];
        let z: Vec<Q> = q.iter().zip(&fd.base).map(|(a, b)| a - b).collect();
        let wt = fd.direction.to_rational().transpose();
        let y = solve(&wt, &z).ok_or_else(|| GeometryError::NotInFlat(fd.label.clone()))?;
        // Unlike the toric covering there is nothing to reduce, but the
        // solution must reproduce the point exactly.
        let back = wt.mul_vec(&y);
        if back != z {
            return Err(GeometryError::NotInFlat(fd.label.clone()));
        }
        Ok(y)
    }

    /// Ambient point of a local point of the flat.
    pub fn embed(&self, f: FlatId, y: &[Q]) -> Vec<Q> {
        let fd = &self.flats[f.0];
        let x = fd.direction.to_rational().transpose().mul_vec(y);
        x.iter().zip(&fd.base).map(|(a, b)| a + b).collect()
    }

    /// Strict sign vector of a chamber over the induced hyperplanes.
    pub fn cell_signs(&self, f: FlatId, c: CellId) -> &[i8] {
        &self.flats[f.0].cells[c.0].signs
    }

    /// Interior point of a chamber in local coordinates.
    pub fn interior_point_local(&self, f: FlatId, c: CellId) -> &[Q] {
        &self.flats[f.0].cells[c.0].interior_local
    }

    /// A traversal of a one-dimensional flat as a line `base + t·e₁`,
    /// `t ∈ ℝ`, with a deterministic generic base point. Its
    /// [`Geometry::loop_crossings`] lists each induced point exactly once.
    pub fn line_loop(&self, f: FlatId) -> LoopClass {
        let fd = &self.flats[f.0];
        assert_eq!(self.n - fd.codim, 1, "line loops require 1-dimensional flats");
        let mut q = BigInt::from(2);
        let base = loop {
            let y = vec![Q::new(BigInt::one(), q.clone())];
            if fd
                .induced
                .iter()
                .all(|h| dot_int_q(&h.normal, &y) != h.offset)
            {
                break y;
            }
            q += 1;
        };
        LoopClass {
            base,
            direction: vec![BigInt::one()],
        }
    }

    fn build_flat_cells(&mut self, idx: usize) -> Result<(), AffineError> {
        let n = self.n;
        let codim = self.flats[idx].codim;
        let m = n - codim;
        if m == 0 {
            let base = self.flats[idx].base.clone();
            self.flats[idx].cells = vec![CellData {
                signs: Vec::new(),
                interior_local: Vec::new(),
                interior: base,
                bounded: true,
                volume: Some(Q::one()),
            }];
            self.flats[idx].cell_ids = BTreeMap::from([(Vec::new(), 0)]);
            return Ok(());
        }

        let induced = self.build_induced(idx);
        self.flats[idx].induced = induced;

        // Chambers: feasible strict sign vectors, in lexicographic order.
        let sign_vectors = {
            let induced = &self.flats[idx].induced;
            let mut out: Vec<Vec<i8>> = Vec::new();
            let mut partial: Vec<i8> = Vec::new();
            enumerate_signs(m, induced, &mut partial, &mut out);
            out
        };
        assert!(!sign_vectors.is_empty());

        let mut cells = Vec::with_capacity(sign_vectors.len());
        let mut cell_ids = BTreeMap::new();
        for (i, signs) in sign_vectors.iter().enumerate() {
            let induced = &self.flats[idx].induced;
            let system = chamber_system(m, induced, signs, &[]);
            let bounded = chamber_bounded(m, induced, signs);
            let (interior_local, vol) = if bounded {
                let hs: Vec<(Vec<Q>, Q)> = induced
                    .iter()
                    .zip(signs)
                    .map(|(h, &s)| closure_halfspace(h, s))
                    .collect();
                let verts = vertices_from_halfspaces(m, &hs);
                let vol = if m <= 3 {
                    Some(volume(&verts).expect("chamber volume in supported dimension"))
                } else {
                    None
                };
                (barycenter_of(&verts), vol)
            } else {
                (
                    system.witness().expect("feasible chambers have witnesses"),
                    None,
                )
            };
            let interior = self.embed(FlatId(idx), &interior_local);
            cell_ids.insert(signs.clone(), i);
            cells.push(CellData {
                signs: signs.clone(),
                interior_local,
                interior,
                bounded,
                volume: vol,
            });
        }
        self.flats[idx].cells = cells;
        self.flats[idx].cell_ids = cell_ids;

        // Adjacency across facets: flip one tight sign.
        let mut adjacency = Vec::new();
        for (i, signs) in sign_vectors.iter().enumerate() {
            let induced = &self.flats[idx].induced;
            for (j, h) in induced.iter().enumerate() {
                let facet = chamber_system(m, induced, signs, &[j]);
                let Some(witness) = facet.witness() else {
                    continue;
                };
                let mut flipped = signs.clone();
                flipped[j] = -flipped[j];
                let Some(&to) = self.flats[idx].cell_ids.get(&flipped) else {
                    continue;
                };
                let ambient = self.embed(FlatId(idx), &witness);
                let wall_cell = self.locate(h.wall_flat, &ambient, None)?;
                adjacency.push(WallCrossing {
                    from: CellId(i),
                    to: CellId(to),
                    wall_flat: h.wall_flat,
                    wall_cell,
                    to_side: flipped[j] * h.side_sign,
                });
            }
        }
        adjacency.sort_by_key(|e| (e.from.0, e.wall_flat.0, e.wall_cell.0, e.to.0, e.to_side));
        self.flats[idx].adjacency = adjacency;
        Ok(())
    }

    fn build_induced(&self, idx: usize) -> Vec<AffineInduced> {
        let fd = &self.flats[idx];
        let m = self.n - fd.codim;
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
            let off = (&h.offset - dot_int_q(&h.normal, &fd.base)) / Q::from_integer(g);
            let (bc, oc) = canonical_local(&b0, &off);
            reps.entry((bc, oc)).or_insert_with(|| h.normal.clone());
        }
        debug_assert!(m == 0 || !reps.is_empty(), "essential arrangements induce everywhere");
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
            let sigma = wall_frame.to_rational().mul_vec(&x_star);
            let wall = self
                .key_index
                .get(&(fd.codim + 1, wall_frame, sigma))
                .copied()
                .map(FlatId)
                .expect("induced hyperplane is a flat of the arrangement");
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
            induced.push(AffineInduced {
                normal: b.clone(),
                offset: c.clone(),
                wall_flat: wall,
                side_sign: if pairing.is_positive() { 1 } else { -1 },
            });
        }
        induced
    }
}

impl Geometry for AffineGeometry {
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

    fn cell_bounded(&self, f: FlatId, c: CellId) -> bool {
        self.flats[f.0].cells[c.0].bounded
    }

    fn cell_volume(&self, f: FlatId, c: CellId) -> Option<Q> {
        self.flats[f.0].cells[c.0].volume.clone()
    }

    fn on_flat(&self, f: FlatId, q: &[Q]) -> bool {
        let fd = &self.flats[f.0];
        if self.n == fd.codim {
            return q == fd.base;
        }
        self.to_local(f, q).is_ok()
    }

    fn locate(&self, f: FlatId, q: &[Q], w: Option<&[Q]>) -> Result<CellId, GeometryError> {
        let fd = &self.flats[f.0];
        let m = self.n - fd.codim;
        if m == 0 {
            if q == fd.base {
                return Ok(CellId(0));
            }
            return Err(GeometryError::NotInFlat(fd.label.clone()));
        }
        let y = self.to_local(f, q)?;
        let w_loc: Option<Vec<Q>> = match w {
            None => None,
            Some(wv) => {
                let wt = fd.direction.to_rational().transpose();
                let sol = solve(&wt, wv)
                    .filter(|s| wt.mul_vec(s) == wv)
                    .ok_or_else(|| GeometryError::DirectionNotInFlat(fd.label.clone()))?;
                Some(sol)
            }
        };
        let mut signs = Vec::with_capacity(fd.induced.len());
        for h in &fd.induced {
            let v = dot_int_q(&h.normal, &y) - &h.offset;
            let s = sign(&v);
            if s != 0 {
                signs.push(s);
                continue;
            }
            let Some(wl) = &w_loc else {
                return Err(GeometryError::OnHyperplane(fd.label.clone()));
            };
            let sw = sign(&dot_int_q(&h.normal, wl));
            if sw == 0 {
                return Err(GeometryError::TangentDirection(fd.label.clone()));
            }
            signs.push(sw);
        }
        fd.cell_ids
            .get(&signs)
            .map(|&i| CellId(i))
            .ok_or_else(|| GeometryError::UnknownCell(fd.label.clone()))
    }

    fn adjacency(&self, f: FlatId) -> &[WallCrossing] {
        &self.flats[f.0].adjacency
    }

    fn h1_loops(&self, _f: FlatId) -> &[LoopClass] {
        &[]
    }

    /// Crossings of the full affine line `base + t·direction`, `t ∈ ℝ`, with
    /// the induced hyperplanes of the flat: each non-parallel hyperplane is
    /// crossed exactly once.
    fn loop_crossings(&self, f: FlatId, l: &LoopClass) -> Vec<LoopCrossing> {
        let fd = &self.flats[f.0];
        let mut out = Vec::new();
        for h in &fd.induced {
            let s: BigInt = h.normal.iter().zip(&l.direction).map(|(a, b)| a * b).sum();
            if s.is_zero() {
                continue;
            }
            let t = (&h.offset - dot_int_q(&h.normal, &l.base)) / Q::from_integer(s.clone());
            let point: Vec<Q> = l
                .base
                .iter()
                .zip(&l.direction)
                .map(|(b, d)| b + &t * Q::from_integer(d.clone()))
                .collect();
            let ambient = self.embed(f, &point);
            let wall_cell = self
                .locate(h.wall_flat, &ambient, None)
                .expect("line crossings are generic wall points");
            out.push(LoopCrossing {
                wall_flat: h.wall_flat,
                wall_cell,
                direction_sign: if s.is_positive() { 1 } else { -1 } * h.side_sign,
            });
        }
        out
    }

    fn flat_label(&self, f: FlatId) -> String {
        self.flats[f.0].label.clone()
    }
}

// ---------- free helpers ----------

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

fn subset_matrix(n: usize, hps: &[AffineHyperplane], subset: &[usize]) -> IntMatrix {
    if subset.is_empty() {
        return IntMatrix::zero(0, n);
    }
    IntMatrix::from_rows(subset.iter().map(|&i| hps[i].normal.clone()).collect())
}

/// A point of the intersection of a subfamily, or `None` when empty.
fn subfamily_point(n: usize, hps: &[AffineHyperplane], subset: &[usize]) -> Option<Vec<Q>> {
    if subset.is_empty() {
        return Some(vec![Q::zero(); n]);
    }
    let a = subset_matrix(n, hps, subset).to_rational();
    let c: Vec<Q> = subset.iter().map(|&i| hps[i].offset.clone()).collect();
    solve(&a, &c)
}

/// Canonical form of a local hyperplane: lex-positive normal.
fn canonical_local(b: &[BigInt], c: &Q) -> (Vec<BigInt>, Q) {
    let flipped = lex_positive(b);
    if flipped == b {
        (flipped, c.clone())
    } else {
        (flipped, -c.clone())
    }
}

/// Deterministic generic point on the induced hyperplane `(b, c)` avoiding
/// all other induced hyperplanes.
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
            dot_int_q(b2, &y) != *c2
        });
        if ok {
            return y;
        }
        q += 1;
    }
}

/// Depth-first enumeration of feasible strict sign vectors.
fn enumerate_signs(
    m: usize,
    induced: &[AffineInduced],
    partial: &mut Vec<i8>,
    out: &mut Vec<Vec<i8>>,
) {
    if !chamber_system(m, induced, partial, &[]).is_feasible() {
        return;
    }
    if partial.len() == induced.len() {
        out.push(partial.clone());
        return;
    }
    for s in [-1i8, 1] {
        partial.push(s);
        enumerate_signs(m, induced, partial, out);
        partial.pop();
    }
}

/// The strict system of a (partial) sign vector, with the listed indices
/// replaced by equalities.
fn chamber_system(
    m: usize,
    induced: &[AffineInduced],
    signs: &[i8],
    tight: &[usize],
) -> LinearSystem {
    let mut sys = LinearSystem::new(m);
    for (j, s) in signs.iter().enumerate() {
        let h = &induced[j];
        let coeffs: Vec<Q> = h.normal.iter().map(|x| Q::from_integer(x.clone())).collect();
        if tight.contains(&j) {
            sys.eq(coeffs, h.offset.clone());
        } else if *s > 0 {
            sys.gt(coeffs, h.offset.clone());
        } else {
            sys.lt(coeffs, h.offset.clone());
        }
    }
    sys
}

/// Exact boundedness via the recession cone `{v : s_j·(b_j·v) ≥ 0}`:
/// the chamber is unbounded iff the cone contains a vector with some
/// coordinate reaching ±1.
fn chamber_bounded(m: usize, induced: &[AffineInduced], signs: &[i8]) -> bool {
    for i in 0..m {
        for dir in [1i64, -1] {
            let mut sys = LinearSystem::new(m);
            for (j, s) in signs.iter().enumerate() {
                let h = &induced[j];
                let coeffs: Vec<Q> = h
                    .normal
                    .iter()
                    .map(|x| Q::from_integer(x.clone()) * Q::from_integer(BigInt::from(*s)))
                    .collect();
                sys.ge(coeffs, Q::zero());
            }
            let mut probe = vec![Q::zero(); m];
            probe[i] = Q::from_integer(BigInt::from(dir));
            sys.ge(probe, Q::one());
            if sys.is_feasible() {
                return false;
            }
        }
    }
    true
}

/// Closed halfspace of the chamber's closure for one induced hyperplane.
fn closure_halfspace(h: &AffineInduced, s: i8) -> (Vec<Q>, Q) {
    let coeffs: Vec<Q> = h.normal.iter().map(|x| Q::from_integer(x.clone())).collect();
    if s > 0 {
        (coeffs.iter().map(|x| -x).collect(), -h.offset.clone())
    } else {
        (coeffs, h.offset.clone())
    }
}

/// Canonical flat label: codimension, frame rows, exact values.
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
    format!("A{}[{}={}]", codim, rows.join(";"), sig.join(","))
}
