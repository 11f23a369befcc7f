//! Seeded generation of small valid arrangements for property suites.
//!
//! Randomized verification runs over many arrangements, but every
//! arrangement drawn here is valid by construction: normals are nonzero,
//! primitive, and lex-positive; hyperplanes are pairwise distinct after
//! canonicalization; and the normal matrix has full rank, so 0-flats exist
//! and lifted chambers are bounded. Sizes are kept at desk scale — flat and
//! cell enumeration is exponential in the hyperplane count — with ranges
//! per ambient dimension:
//!
//! | ambient dim | hyperplanes | normal entries | offset denominators |
//! |---|---|---|---|
//! | 1 | 2–8 | `{1}` | ≤ 4 |
//! | 2 | 3–6 | `[−2, 2]` | ≤ 4 |
//! | 3 | 4–5 | `[−1, 1]` | ≤ 3 |
//!
//! All draws are deterministic functions of the caller's RNG state, so a
//! fixed seed reproduces the full suite byte for byte.

use crate::affine::{AffineArrangement, AffineGeometry, AffineHyperplane};
use crate::lattice::{lex_positive, primitive_vector};
use crate::rational::{frac, q, Q};
use crate::toric::{ToricArrangement, ToricGeometry, ToricHyperplane};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use std::collections::BTreeSet;

/// Hyperplane-count range per ambient dimension (desk scale).
fn count_range(dim: usize) -> (usize, usize) {
    match dim {
        1 => (2, 8),
        2 => (3, 6),
        _ => (4, 5),
    }
}

/// Largest absolute normal entry per ambient dimension.
fn entry_bound(dim: usize) -> i64 {
    match dim {
        1 => 1,
        2 => 2,
        _ => 1,
    }
}

/// Largest offset denominator per ambient dimension.
fn denominator_bound(dim: usize) -> i64 {
    if dim >= 3 {
        3
    } else {
        4
    }
}

fn random_primitive_normal<R: Rng>(rng: &mut R, dim: usize) -> Vec<BigInt> {
    let bound = entry_bound(dim);
    loop {
        let v: Vec<BigInt> = (0..dim)
            .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
            .collect();
        if v.iter().any(|x| !x.is_zero()) {
            return lex_positive(&primitive_vector(&v));
        }
    }
}

fn random_offset<R: Rng>(rng: &mut R, dim: usize) -> Q {
    let d = rng.gen_range(1..=denominator_bound(dim));
    let k = rng.gen_range(0..d.max(1));
    q(k, d)
}

/// Draw a valid toric arrangement in dimension `dim ∈ {1, 2, 3}`.
pub fn random_toric_arrangement<R: Rng>(rng: &mut R, dim: usize) -> ToricArrangement {
    let (lo, hi) = count_range(dim);
    loop {
        let n = rng.gen_range(lo..=hi);
        let mut set: BTreeSet<ToricHyperplane> = BTreeSet::new();
        let mut attempts = 0;
        while set.len() < n && attempts < 200 {
            attempts += 1;
            let h = ToricHyperplane {
                normal: random_primitive_normal(rng, dim),
                offset: frac(&random_offset(rng, dim)),
            };
            set.insert(h.canonicalized());
        }
        let hyperplanes: Vec<ToricHyperplane> = set.into_iter().collect();
        let rank = crate::lattice::IntMatrix::from_rows(
            hyperplanes.iter().map(|h| h.normal.clone()).collect(),
        )
        .rank();
        if hyperplanes.len() >= lo && rank == dim {
            return ToricArrangement { dim, hyperplanes };
        }
    }
}

/// Draw a valid affine arrangement in dimension `dim ∈ {1, 2, 3}`.
///
/// Offsets may be negative (unlike toric offsets, which live in `[0, 1)`).
pub fn random_affine_arrangement<R: Rng>(rng: &mut R, dim: usize) -> AffineArrangement {
    let (lo, hi) = count_range(dim);
    loop {
        let n = rng.gen_range(lo..=hi);
        let mut set: BTreeSet<AffineHyperplane> = BTreeSet::new();
        let mut attempts = 0;
        while set.len() < n && attempts < 200 {
            attempts += 1;
            let offset = random_offset(rng, dim) - q(rng.gen_range(0..=2), 1);
            let h = AffineHyperplane {
                normal: random_primitive_normal(rng, dim),
                offset,
            };
            set.insert(h.canonicalized());
        }
        let hyperplanes: Vec<AffineHyperplane> = set.into_iter().collect();
        let rank = crate::lattice::IntMatrix::from_rows(
            hyperplanes.iter().map(|h| h.normal.clone()).collect(),
        )
        .rank();
        if hyperplanes.len() >= lo && rank == dim {
            return AffineArrangement { dim, hyperplanes };
        }
    }
}

/// Draw a toric arrangement and build its geometry.
pub fn random_toric_geometry<R: Rng>(rng: &mut R, dim: usize) -> ToricGeometry {
    let arrangement = random_toric_arrangement(rng, dim);
    ToricGeometry::new(&arrangement).expect("random arrangements are valid by construction")
}

/// Draw an affine arrangement and build its geometry.
pub fn random_affine_geometry<R: Rng>(rng: &mut R, dim: usize) -> AffineGeometry {
    let arrangement = random_affine_arrangement(rng, dim);
    AffineGeometry::new(&arrangement).expect("random arrangements are valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::validate_affine;
    use crate::geometry::Geometry;
    use crate::toric::validate_toric;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn toric_draws_are_valid_and_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for dim in 1..=3 {
            let (lo, hi) = count_range(dim);
            for _ in 0..20 {
                let a = random_toric_arrangement(&mut rng, dim);
                assert!(validate_toric(&a).valid);
                assert!(a.hyperplanes.len() >= lo && a.hyperplanes.len() <= hi);
            }
        }
    }

    #[test]
    fn affine_draws_are_valid_and_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for dim in 1..=2 {
            for _ in 0..20 {
                let a = random_affine_arrangement(&mut rng, dim);
                assert!(validate_affine(&a).valid);
            }
        }
    }

    #[test]
    fn draws_are_deterministic_in_the_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for dim in 1..=3 {
            assert_eq!(
                random_toric_arrangement(&mut a, dim).hyperplanes,
                random_toric_arrangement(&mut b, dim).hyperplanes
            );
        }
        assert_eq!(
            random_affine_arrangement(&mut a, 2).hyperplanes,
            random_affine_arrangement(&mut b, 2).hyperplanes
        );
    }

    #[test]
    fn random_geometries_build() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in 1..=2 {
            let g = random_toric_geometry(&mut rng, dim);
            assert!(g.flat_count() > 0);
            let a = random_affine_geometry(&mut rng, dim);
            assert!(a.flat_count() > 0);
        }
    }
}
