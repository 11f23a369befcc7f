//! Rational convex polytopes: hulls, faces, and exact volumes.
//!
//! Polytopes are stored by their vertex set (extreme points only) together
//! with facet halfspaces, both exact. Input points that are not extreme are
//! dropped on construction. Faces are computed as intersections of facets,
//! which for polytopes yields the full face lattice.
//!
//! Volumes are exact rationals, computed purely from determinants (angular
//! sorting + fan triangulation, coned from an interior average point), in
//! local coordinates chosen by the caller; this keeps every volume a lattice
//! covolume rather than a Euclidean measure. Supported up to local
//! dimension 3, which covers every ambient dimension this crate's volume
//! consumers use.

use crate::fm::LinearSystem;
use crate::lattice::primitive_integer_direction;
use crate::linalg::{dot, kernel_basis, solve, vec_is_zero, vec_sub, Matrix};
use crate::rational::{sign, Q};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeSet;

/// Errors from polytope construction and measurement.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolytopeError {
    /// No vertices were given.
    #[error("a polytope needs at least one vertex")]
    Empty,
    /// A point has the wrong length.
    #[error("point dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch {
        /// Ambient dimension of the polytope.
        expected: usize,
        /// Length of the offending point.
        got: usize,
    },
    /// The operation requires a full-dimensional polytope.
    #[error("polytope is not full-dimensional: affine dimension {found} < ambient {ambient}")]
    NotFullDimensional {
        /// Ambient dimension.
        ambient: usize,
        /// Affine dimension of the vertex set.
        found: usize,
    },
    /// Exact volume is implemented for local dimension at most three.
    #[error("volume unsupported in dimension {0} (supported: 0..=3)")]
    UnsupportedDimension(usize),
}

/// A face of a polytope: its vertex set in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Extreme points of the face, sorted lexicographically.
    pub vertices: Vec<Vec<Q>>,
    /// Affine dimension of the face.
    pub dim: usize,
}

/// A rational convex polytope in `Q^dim`, stored as extreme points plus
/// facet halfspaces `a·x ≤ b` of its affine span (ambient halfspaces when
/// the polytope is full-dimensional).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<Q>>,
    /// Affine dimension.
    adim: usize,
    /// Base point of the affine span (lexicographically smallest vertex).
    base: Vec<Q>,
    /// Rows: a basis of the direction space of the affine span (RREF).
    span: Matrix,
    /// Local coordinates of each vertex in the span basis.
    local: Vec<Vec<Q>>,
    /// Facets in local coordinates: `a·y ≤ b` with primitive integer `a`.
    facets_local: Vec<(Vec<BigInt>, Q)>,
}

impl Polytope {
    /// Convex hull of the given points. Non-extreme points are dropped.
    pub fn from_vertices(dim: usize, points: &[Vec<Q>]) -> Result<Polytope, PolytopeError> {
        if points.is_empty() {
            return Err(PolytopeError::Empty);
        }
        for p in points {
            if p.len() != dim {
                return Err(PolytopeError::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        let mut pts: Vec<Vec<Q>> = points.to_vec();
        pts.sort();
        pts.dedup();
        let base = pts[0].clone();
        let diffs: Vec<Vec<Q>> = pts.iter().map(|p| vec_sub(p, &base)).collect();
        let span = {
            let mut m = Matrix::from_rows(diffs.clone());
            let pivots = m.rref();
            Matrix::from_fn(pivots.len(), dim, |i, j| m[(i, j)].clone())
        };
        let adim = span.nrows();
        let span_t = span.transpose();
        let local: Vec<Vec<Q>> = diffs
            .iter()
            .map(|d| solve(&span_t, d).expect("vertex lies in its own affine span"))
            .collect();
        // Drop non-extreme points.
        let keep: Vec<bool> = (0..pts.len())
            .map(|i| {
                let others: Vec<&[Q]> = (0..pts.len())
                    .filter(|&j| j != i)
                    .map(|j| local[j].as_slice())
                    .collect();
                !convex_combination_exists(&others, &local[i])
            })
            .collect();
        let vertices: Vec<Vec<Q>> = pts
            .iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(p, _)| p.clone())
            .collect();
        let local: Vec<Vec<Q>> = local
            .into_iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(p, _)| p)
            .collect();
        let facets_local = supporting_halfspaces(&local, adim);
        Ok(Polytope {
            dim,
            vertices,
            adim,
            base,
            span,
            local,
            facets_local,
        })
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Affine dimension of the polytope.
    pub fn affine_dim(&self) -> usize {
        self.adim
    }

    /// Extreme points, sorted lexicographically.
    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    /// Facet halfspaces `a·x ≤ b` in ambient coordinates. Only available for
    /// full-dimensional polytopes, where local and ambient coordinates agree
    /// up to the base-point shift.
    pub fn facets(&self) -> Result<Vec<(Vec<Q>, Q)>, PolytopeError> {
        if self.adim != self.dim {
            return Err(PolytopeError::NotFullDimensional {
                ambient: self.dim,
                found: self.adim,
            });
        }
        // y = S (x - base) with S the square RREF span matrix; a·y ≤ b
        // becomes (aᵀS)·x ≤ b + (aᵀS)·base.
        Ok(self
            .facets_local
            .iter()
            .map(|(a, b)| {
                let aq: Vec<Q> = a.iter().map(|x| Q::from_integer(x.clone())).collect();
                let arow = Matrix::from_rows(vec![aq]);
                let amb = arow.mul(&self.span);
                let a_amb = amb.row(0).to_vec();
                let b_amb = b + dot(&a_amb, &self.base);
                (a_amb, b_amb)
            })
            .collect())
    }

    /// Barycenter (vertex average).
    pub fn barycenter(&self) -> Vec<Q> {
        barycenter_of(&self.vertices)
    }

    /// Strict interior membership (full-dimensional polytopes).
    pub fn contains_interior(&self, x: &[Q]) -> Result<bool, PolytopeError> {
        let facets = self.facets()?;
        Ok(facets.iter().all(|(a, b)| dot(a, x) < *b))
    }

    /// Closure membership for arbitrary (possibly lower-dimensional) polytopes.
    pub fn contains(&self, x: &[Q]) -> bool {
        // x must lie in the affine span...
        let d = vec_sub(x, &self.base);
        let Some(y) = solve(&self.span.transpose(), &d) else {
            return false;
        };
        // ...and satisfy all local facets weakly.
        self.facets_local.iter().all(|(a, b)| {
            let aq: Vec<Q> = a.iter().map(|v| Q::from_integer(v.clone())).collect();
            dot(&aq, &y) <= *b
        })
    }

    /// Translate by `delta`.
    pub fn translate(&self, delta: &[Q]) -> Polytope {
        assert_eq!(delta.len(), self.dim, "translation dimension mismatch");
        let verts: Vec<Vec<Q>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(delta).map(|(a, b)| a + b).collect())
            .collect();
        Polytope::from_vertices(self.dim, &verts).expect("translate preserves validity")
    }

    /// Dilate by a positive rational factor about the origin.
    pub fn dilate(&self, factor: &Q) -> Polytope {
        assert!(*factor > Q::zero(), "dilation factor must be positive");
        let verts: Vec<Vec<Q>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|a| a * factor).collect())
            .collect();
        Polytope::from_vertices(self.dim, &verts).expect("dilate preserves validity")
    }

    /// All nonempty faces (the polytope itself included), each as its vertex
    /// set, ordered by decreasing dimension and then lexicographically.
    pub fn faces(&self) -> Vec<Face> {
        // Faces of a polytope are exactly the intersections of subsets of
        // facets (plus the whole polytope); close under single intersections.
        let nv = self.local.len();
        let all: BTreeSet<usize> = (0..nv).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: Vec<BTreeSet<usize>> = vec![all.clone()];
        seen.insert(all.iter().copied().collect());
        let mut result = Vec::new();
        while let Some(f) = queue.pop() {
            result.push(f.clone());
            for (a, b) in &self.facets_local {
                let aq: Vec<Q> = a.iter().map(|v| Q::from_integer(v.clone())).collect();
                let sub: BTreeSet<usize> = f
                    .iter()
                    .copied()
                    .filter(|&i| dot(&aq, &self.local[i]) == *b)
                    .collect();
                if sub.is_empty() {
                    continue;
                }
                let key: Vec<usize> = sub.iter().copied().collect();
                if seen.insert(key) {
                    queue.push(sub);
                }
            }
        }
        let mut faces: Vec<Face> = result
            .into_iter()
            .map(|idx| {
                let verts: Vec<Vec<Q>> = idx.iter().map(|&i| self.vertices[i].clone()).collect();
                let dim = affine_rank(&verts);
                Face { vertices: verts, dim }
            })
            .collect();
        faces.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.vertices.cmp(&b.vertices)));
        faces
    }
}

/// Vertex average of a point set.
pub fn barycenter_of(points: &[Vec<Q>]) -> Vec<Q> {
    assert!(!points.is_empty(), "barycenter of empty set");
    let n = points[0].len();
    let k = Q::from_integer(BigInt::from(points.len() as i64));
    (0..n)
        .map(|j| {
            let mut acc = Q::zero();
            for p in points {
                acc += &p[j];
            }
            acc / &k
        })
        .collect()
}

/// Affine dimension of a point set.
pub fn affine_rank(points: &[Vec<Q>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<Vec<Q>> = points[1..].iter().map(|p| vec_sub(p, base)).collect();
    Matrix::from_rows(diffs).rank()
}

/// Is `p` a convex combination of `points`? Exact LP feasibility.
fn convex_combination_exists(points: &[&[Q]], p: &[Q]) -> bool {
    if points.is_empty() {
        return false;
    }
    let k = points.len();
    let d = p.len();
    let mut sys = LinearSystem::new(k);
    for i in 0..k {
        let mut a = vec![Q::zero(); k];
        a[i] = Q::from_integer(1.into());
        sys.ge(a, Q::zero());
    }
    sys.eq(vec![Q::from_integer(1.into()); k], Q::from_integer(1.into()));
    for j in 0..d {
        let a: Vec<Q> = points.iter().map(|q| q[j].clone()).collect();
        sys.eq(a, p[j].clone());
    }
    sys.is_feasible()
}

/// The supporting halfspaces of a full-dimensional point set in `Q^adim`:
/// all hyperplanes spanned by `adim`-subsets with every point weakly on one
/// side, oriented outward and deduplicated canonically.
fn supporting_halfspaces(local: &[Vec<Q>], adim: usize) -> Vec<(Vec<BigInt>, Q)> {
    if adim == 0 {
        return Vec::new();
    }
    let mut out: BTreeSet<(Vec<BigInt>, Q)> = BTreeSet::new();
    let idx: Vec<usize> = (0..local.len()).collect();
    for sub in subsets_of_size(&idx, adim) {
        // Normal = kernel of the difference matrix of the subset.
        let base = &local[sub[0]];
        let diffs: Vec<Vec<Q>> = sub[1..].iter().map(|&i| vec_sub(&local[i], base)).collect();
        let m = if diffs.is_empty() {
            Matrix::zero(0, adim)
        } else {
            Matrix::from_rows(diffs)
        };
        let ker = kernel_basis(&m);
        if ker.len() != 1 {
            continue; // subset does not span a hyperplane
        }
        let a = primitive_integer_direction(&ker[0]);
        let aq: Vec<Q> = a.iter().map(|v| Q::from_integer(v.clone())).collect();
        let b = dot(&aq, base);
        // Orient outward if supporting.
        let mut pos = false;
        let mut neg = false;
        for p in local {
            match sign(&(dot(&aq, p) - &b)) {
                1 => pos = true,
                -1 => neg = true,
                _ => {}
            }
        }
        if pos && neg {
            continue;
        }
        let (a, b) = if pos {
            (a.iter().map(|v| -v).collect::<Vec<_>>(), -b)
        } else {
            (a, b)
        };
        out.insert((a, b));
    }
    out.into_iter().collect()
}

/// All size-`k` subsets of `items`, in lexicographic index order.
pub fn subsets_of_size<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i].clone()).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of the (possibly lower-dimensional) polyhedron
/// `{x : a_i·x ≤ b_i}`: all basic solutions that satisfy every constraint.
/// The polyhedron must be bounded for this to be its full vertex set.
pub fn vertices_from_halfspaces(n: usize, halfspaces: &[(Vec<Q>, Q)]) -> Vec<Vec<Q>> {
    let idx: Vec<usize> = (0..halfspaces.len()).collect();
    let mut verts: BTreeSet<Vec<Q>> = BTreeSet::new();
    for sub in subsets_of_size(&idx, n) {
        let m = Matrix::from_rows(sub.iter().map(|&i| halfspaces[i].0.clone()).collect());
        if m.rank() != n {
            continue;
        }
        let rhs: Vec<Q> = sub.iter().map(|&i| halfspaces[i].1.clone()).collect();
        let x = solve(&m, &rhs).expect("full-rank square system is solvable");
        if halfspaces.iter().all(|(a, b)| dot(a, &x) <= *b) {
            verts.insert(x);
        }
    }
    verts.into_iter().collect()
}

/// Exact volume of the convex hull of `points` in its own coordinates
/// (dimension = point length, must be at most 3). Returns zero when the
/// hull is not full-dimensional.
pub fn volume(points: &[Vec<Q>]) -> Result<Q, PolytopeError> {
    if points.is_empty() {
        return Err(PolytopeError::Empty);
    }
    let d = points[0].len();
    if d > 3 {
        return Err(PolytopeError::UnsupportedDimension(d));
    }
    if affine_rank(points) < d {
        return Ok(Q::zero());
    }
    match d {
        0 => Ok(Q::from_integer(1.into())),
        1 => {
            let mut lo = points[0][0].clone();
            let mut hi = lo.clone();
            for p in points {
                if p[0] < lo {
                    lo = p[0].clone();
                }
                if p[0] > hi {
                    hi = p[0].clone();
                }
            }
            Ok(hi - lo)
        }
        2 => {
            let hull = hull_2d(points);
            Ok(shoelace(&hull))
        }
        3 => {
            let c = barycenter_of(points);
            let mut total = Q::zero();
            for (_, _, face_pts) in facet_planes_3d(points) {
                // Fan-triangulate the facet and cone from the interior point.
                let ordered = order_planar_cycle(&face_pts);
                for i in 1..ordered.len() - 1 {
                    let m = Matrix::from_rows(vec![
                        vec_sub(&ordered[0], &c),
                        vec_sub(&ordered[i], &c),
                        vec_sub(&ordered[i + 1], &c),
                    ]);
                    let det = m.det();
                    total += if det < Q::zero() { -det } else { det };
                }
            }
            Ok(total / Q::from_integer(6.into()))
        }
        _ => unreachable!(),
    }
}

/// Volume of the hull of ambient points measured in the lattice basis given
/// by the rows of `basis` (each point is expressed as
/// `origin + Σ y_i basis_i` and the volume is taken in `y`). Differences of
/// the points must lie in the row span.
pub fn volume_in_basis(points: &[Vec<Q>], basis: &Matrix) -> Result<Q, PolytopeError> {
    if points.is_empty() {
        return Err(PolytopeError::Empty);
    }
    let bt = basis.transpose();
    let base = &points[0];
    let local: Vec<Vec<Q>> = points
        .iter()
        .map(|p| solve(&bt, &vec_sub(p, base)).expect("point outside the basis span"))
        .collect();
    volume(&local)
}

/// Convex hull of planar points in counterclockwise order (monotone chain).
fn hull_2d(points: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut pts: Vec<Vec<Q>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &[Q], a: &[Q], b: &[Q]| -> Q {
        (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
    };
    let mut lower: Vec<Vec<Q>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Q::zero()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<Q>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Q::zero()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Signed area of a counterclockwise polygon, exact.
fn shoelace(cycle: &[Vec<Q>]) -> Q {
    let mut acc = Q::zero();
    let k = cycle.len();
    for i in 0..k {
        let a = &cycle[i];
        let b = &cycle[(i + 1) % k];
        acc += &a[0] * &b[1] - &a[1] * &b[0];
    }
    let two = Q::from_integer(2.into());
    let v = acc / two;
    if v < Q::zero() {
        -v
    } else {
        v
    }
}

/// Supporting facet planes of a full-dimensional 3D point set:
/// `(outward primitive normal, rhs, points on the plane)`.
fn facet_planes_3d(points: &[Vec<Q>]) -> Vec<(Vec<BigInt>, Q, Vec<Vec<Q>>)> {
    let mut planes: BTreeSet<(Vec<BigInt>, Q)> = BTreeSet::new();
    let idx: Vec<usize> = (0..points.len()).collect();
    for sub in subsets_of_size(&idx, 3) {
        let u = vec_sub(&points[sub[1]], &points[sub[0]]);
        let v = vec_sub(&points[sub[2]], &points[sub[0]]);
        let normal = vec![
            &u[1] * &v[2] - &u[2] * &v[1],
            &u[2] * &v[0] - &u[0] * &v[2],
            &u[0] * &v[1] - &u[1] * &v[0],
        ];
        if vec_is_zero(&normal) {
            continue;
        }
        let a = primitive_integer_direction(&normal);
        let aq: Vec<Q> = a.iter().map(|x| Q::from_integer(x.clone())).collect();
        let b = dot(&aq, &points[sub[0]]);
        let mut pos = false;
        let mut neg = false;
        for p in points {
            match sign(&(dot(&aq, p) - &b)) {
                1 => pos = true,
                -1 => neg = true,
                _ => {}
            }
        }
        if pos && neg {
            continue;
        }
        if pos {
            planes.insert((a.iter().map(|x| -x).collect(), -b));
        } else {
            planes.insert((a, b));
        }
    }
    planes
        .into_iter()
        .map(|(a, b)| {
            let aq: Vec<Q> = a.iter().map(|x| Q::from_integer(x.clone())).collect();
            let pts: Vec<Vec<Q>> = points
                .iter()
                .filter(|p| dot(&aq, p) == b)
                .cloned()
                .collect();
            (a, b, pts)
        })
        .collect()
}

/// Order coplanar 3D points into a convex cycle by projecting out one
/// coordinate (the first with a nonzero normal component).
fn order_planar_cycle(points: &[Vec<Q>]) -> Vec<Vec<Q>> {
    // The points span a plane; find its normal again from the point set.
    let base = &points[0];
    let diffs: Vec<Vec<Q>> = points[1..].iter().map(|p| vec_sub(p, base)).collect();
    let ker = kernel_basis(&Matrix::from_rows(diffs));
    assert_eq!(ker.len(), 1, "points are not coplanar in 3D");
    let drop = ker[0]
        .iter()
        .position(|x| !x.is_zero())
        .expect("nonzero normal");
    let projected: Vec<Vec<Q>> = points
        .iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .filter(|(j, _)| *j != drop)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect();
    let hull = hull_2d(&projected);
    // Map hull order back to the 3D points.
    hull.iter()
        .map(|h| {
            let i = projected
                .iter()
                .position(|p| p == h)
                .expect("hull point is a projection");
            points[i].clone()
        })
        .collect()
}
