//! The standard example arrangements used across the test suite and the
//! command-line tools.
//!
//! Four small arrangements exercise every code path and have all their
//! derived quantities (flat counts, cell counts, graded dimensions) frozen
//! in tests:
//!
//! | fixture | ambient | hyperplanes | graded dims |
//! |---|---|---|---|
//! | [`fix_1d`]`(N)` | `T¹` | points `k/N`, `k = 0..N` | `(1, N−1)` |
//! | [`fix_t2_grid`] | `T²` | `x≡0`, `y≡0`, `x≡1/2`, `y≡1/2` | `(1, 2, 1)` |
//! | [`fix_t2_tri`] | `T²` | `x≡0`, `y≡0`, `x−y≡0` | `(1, 1, 0)` |
//! | [`fix_aff_tri`] | `ℝ²` | `x=0`, `y=0`, `x+y=1` | `(1, 3, 3)` |

use crate::affine::{AffineArrangement, AffineGeometry, AffineHyperplane};
use crate::rational::{q, qi};
use crate::toric::{ToricArrangement, ToricGeometry, ToricHyperplane};

/// `N` evenly spaced points `k/N` on the circle `T¹`.
pub fn fix_1d(n: usize) -> ToricArrangement {
    assert!(n >= 1, "need at least one point on the circle");
    ToricArrangement {
        dim: 1,
        hyperplanes: (0..n)
            .map(|k| ToricHyperplane::new(vec![1], q(k as i64, n as i64)))
            .collect(),
    }
}

/// The half-integer grid on `T²`: `x≡0`, `y≡0`, `x≡1/2`, `y≡1/2`.
pub fn fix_t2_grid() -> ToricArrangement {
    ToricArrangement {
        dim: 2,
        hyperplanes: vec![
            ToricHyperplane::new(vec![1, 0], qi(0)),
            ToricHyperplane::new(vec![0, 1], qi(0)),
            ToricHyperplane::new(vec![1, 0], q(1, 2)),
            ToricHyperplane::new(vec![0, 1], q(1, 2)),
        ],
    }
}

/// The unit square cut by its diagonal, on `T²`: `x≡0`, `y≡0`, `x−y≡0`.
pub fn fix_t2_tri() -> ToricArrangement {
    ToricArrangement {
        dim: 2,
        hyperplanes: vec![
            ToricHyperplane::new(vec![1, 0], qi(0)),
            ToricHyperplane::new(vec![0, 1], qi(0)),
            ToricHyperplane::new(vec![1, -1], qi(0)),
        ],
    }
}

/// The affine triangle arrangement in `ℝ²`: lines `x=0`, `y=0`, `x+y=1`.
pub fn fix_aff_tri() -> AffineArrangement {
    AffineArrangement {
        dim: 2,
        hyperplanes: vec![
            AffineHyperplane::new(vec![1, 0], qi(0)),
            AffineHyperplane::new(vec![0, 1], qi(0)),
            AffineHyperplane::new(vec![1, 1], qi(1)),
        ],
    }
}

/// [`fix_1d`] as a built geometry.
pub fn fix_1d_geometry(n: usize) -> ToricGeometry {
    ToricGeometry::new(&fix_1d(n)).expect("the circle fixtures are valid")
}

/// [`fix_t2_grid`] as a built geometry.
pub fn fix_t2_grid_geometry() -> ToricGeometry {
    ToricGeometry::new(&fix_t2_grid()).expect("the grid fixture is valid")
}

/// [`fix_t2_tri`] as a built geometry.
pub fn fix_t2_tri_geometry() -> ToricGeometry {
    ToricGeometry::new(&fix_t2_tri()).expect("the triangle fixture is valid")
}

/// [`fix_aff_tri`] as a built geometry.
pub fn fix_aff_tri_geometry() -> AffineGeometry {
    AffineGeometry::new(&fix_aff_tri()).expect("the affine triangle fixture is valid")
}

/// The unit interval `[0, 1]ⁿ`-style box `[0, 1/2]ⁿ`-compatible square used
/// in pushforward examples: `[0, 1/2]²` as a polytope.
pub fn half_square() -> crate::polytope::Polytope {
    crate::polytope::Polytope::from_vertices(
        2,
        &[
            vec![qi(0), qi(0)],
            vec![q(1, 2), qi(0)],
            vec![q(1, 2), q(1, 2)],
            vec![qi(0), q(1, 2)],
        ],
    )
    .expect("the half square is a valid polytope")
}

/// A `Q`-valued shorthand used by downstream callers building fixture
/// polytopes: the vertex list of the triangle with legs on the axes and
/// hypotenuse `x + y = 1`.
pub fn unit_corner_triangle() -> crate::polytope::Polytope {
    crate::polytope::Polytope::from_vertices(
        2,
        &[vec![qi(0), qi(0)], vec![qi(1), qi(0)], vec![qi(0), qi(1)]],
    )
    .expect("the corner triangle is a valid polytope")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::degree_filtration;
    use crate::geometry::{ambient_flat, Geometry};

    #[test]
    fn fixture_flat_and_cell_counts() {
        let c3 = fix_1d_geometry(3);
        assert_eq!(c3.flat_count(), 4, "T¹ and three points");
        assert_eq!(c3.cell_count(ambient_flat(&c3)), 3, "three arcs");

        let grid = fix_t2_grid_geometry();
        assert_eq!(grid.flat_count(), 9, "T², 4 circles, 4 points");
        assert_eq!(grid.cell_count(ambient_flat(&grid)), 4);

        let tri = fix_t2_tri_geometry();
        assert_eq!(tri.flat_count(), 5, "T², 3 circles, 1 point");
        assert_eq!(tri.cell_count(ambient_flat(&tri)), 2);

        let aff = fix_aff_tri_geometry();
        assert_eq!(aff.flat_count(), 7, "ℝ², 3 lines, 3 points");
        assert_eq!(aff.cell_count(ambient_flat(&aff)), 7);
    }

    #[test]
    fn fixture_graded_dimensions() {
        assert_eq!(
            degree_filtration(&fix_1d_geometry(3)).unwrap().graded_dims(),
            vec![1, 2]
        );
        assert_eq!(
            degree_filtration(&fix_t2_grid_geometry()).unwrap().graded_dims(),
            vec![1, 2, 1]
        );
        assert_eq!(
            degree_filtration(&fix_t2_tri_geometry()).unwrap().graded_dims(),
            vec![1, 1, 0]
        );
        assert_eq!(
            degree_filtration(&fix_aff_tri_geometry()).unwrap().graded_dims(),
            vec![1, 3, 3]
        );
    }
}
