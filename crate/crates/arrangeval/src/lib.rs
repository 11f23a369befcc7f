//! # arrangeval: exact valuations on arrangement polytopes
//!
//! This crate computes, in exact rational arithmetic, the space of simple
//! translation-invariant valuations attached to a finite rational hyperplane
//! arrangement — either an affine arrangement in ℝⁿ or a toric arrangement in
//! Tⁿ = ℝⁿ/ℤⁿ — together with the combinatorial machinery that describes it:
//!
//! - **Flats and flags.** A flat is a connected component of an intersection
//!   of arrangement hyperplanes; a flag is a chain of flats, one per
//!   codimension `0..=k`. Flags of rank `k` index the degree-`k` pieces of
//!   everything below.
//! - **Convex chains.** The vector space `V` spanned by indicators of the
//!   arrangement's top cells, and the auxiliary spaces `E^k` of "elementary
//!   chains": functions assigning a value to each top cell of the base flat of
//!   each rank-`k` flag, stored under reference coorientations.
//! - **The jump operator `D : E^k → E^{k+1}`.** For each flag extension the
//!   difference of values across a wall, taken with a coorientation sign. Its
//!   iterated kernels produce the *degree filtration*
//!   `V_0 ⊆ V_{≤1} ⊆ … ⊆ V_{≤n} = V`, whose graded pieces `V_k` embed into
//!   flag functions.
//! - **Linear descriptions.** `V_k` is cut out inside the space of rank-`k`
//!   flag functions by *reciprocity* rows (sums over completions of a partial
//!   flag vanish) and, in the toric case, *period* rows (signed crossing sums
//!   along loops generating the homology of a flat vanish). The crate builds
//!   both systems exactly and verifies the equality of subspaces.
//! - **Hadwiger-type invariants.** For each cooriented flag, a functional on
//!   polytopes: a signed sum of normalized volumes over face chains matching
//!   the flag. Evaluation has two independent routes — the geometric
//!   face-chain formula and `vol ∘ π ∘ D^k` on indicator chains — which agree
//!   exactly, and every valuation on `V` decomposes into these invariants by
//!   rank peeling.
//! - **Integration.** A one-sided inverse `I_φ` to `D` built from a choice
//!   function (anchor cell per flag): breadth-first accumulation of wall
//!   jumps, with period obstructions checked before traversal and corrected by
//!   exact linear solves when lifting flag functions all the way down to `V`.
//! - **Scissors congruence.** Exact ℤⁿ-congruence testing of rational
//!   polytopes via indicator chains in a joint toric arrangement, and the
//!   two-dimensional Hadwiger–Glur criterion (equal area + equal edge
//!   functionals per direction class) for translation congruence.
//!
//! ## Exactness
//!
//! All arithmetic is over arbitrary-precision rationals
//! ([`num_rational::BigRational`]); there are no floating-point numbers
//! anywhere in the core. Subspace comparisons are equalities of canonical
//! reduced row echelon bases, never tolerance checks. Integer lattice work
//! (Hermite and Smith normal forms, saturations) is exact over `BigInt`.
//!
//! ## Module map
//!
//! | module | contents |
//! |---|---|
//! | [`rational`] | scalar type alias, canonical `"p/q"` (de)serialization |
//! | [`linalg`] | dense rational matrices, RREF, kernels, subspaces, block lifts |
//! | [`lattice`] | integer matrices, Hermite/Smith normal forms, saturation |
//! | [`fm`] | Fourier–Motzkin feasibility with deterministic witnesses |
//! | [`polytope`] | rational V/H-polytopes, faces, exact volumes |
//! | [`affine`] | affine arrangements: flats, sign-vector cells, restriction |
//! | [`toric`] | toric arrangements: flats via Smith form, lifted cells, loops |
//! | [`geometry`] | the common flat/cell/flag interface both backends satisfy |
//! | [`chains`] | convex chains, elementary chains, the jump operator, filtration |
//! | [`constraints`] | reciprocity and period systems, cocycle checks, verification |
//! | [`integration`] | choice functions, `I_φ`, lifting flag functions to chains |
//! | [`hadwiger`] | cooriented-flag invariants, evaluation, decomposition, maps |
//! | [`scissors`] | ℤⁿ-congruence and the planar Hadwiger–Glur criterion |
//! | [`io`] | serde input/output types and report schemas |
//! | [`random`] | seeded generation of small valid arrangements for testing |
//! | [`fixtures`] | the standard example arrangements used across the test suite |

#![forbid(unsafe_code)]
#![warn(missing_docs)]
#![warn(missing_debug_implementations)]

pub mod rational;
#[macro_use]
pub mod linalg;
pub mod lattice;
pub mod fm;
pub mod polytope;
pub mod affine;
pub mod toric;
pub mod geometry;
pub mod chains;
pub mod constraints;
pub mod integration;
pub mod hadwiger;
pub mod scissors;
pub mod io;
pub mod random;
pub mod fixtures;

pub use rational::Q;

/// Version of the report schema emitted by this crate and its CLI.
pub const SCHEMA: &str = "arrangeval/1";
