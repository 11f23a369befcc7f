//! Discrete integration: the one-sided inverse of the jump operator.
//!
//! A level-`k` chain assigns a value to every wall cell of every rank-`k`
//! flag; when those values arise as jumps of a function on the cells of the
//! flag's parent flat, the function can be recovered by *integration*: fix a
//! choice function `φ` assigning to every rank-`(k−1)` flag an anchor cell
//! of its base flat, declare the function zero there, and propagate values
//! across walls, adding the prescribed jump at every crossing.
//!
//! The result is well defined exactly when the prescribed jumps sum to zero
//! along every cycle of the dual cell graph. Cycles come in two kinds:
//! local cycles around deeper flats — vanishing is the cocycle condition —
//! and homology loops of a toric flat — vanishing is the period condition.
//! [`integrate_step`] checks the loop sums explicitly up front and the local
//! sums on the fly (any non-tree crossing whose value disagrees is reported
//! as a witness), so `leray_d ∘ integrate_step = id` holds on its entire
//! domain of definition.
//!
//! [`lift_to_chain`] iterates the step from level `k` down to level `0`.
//! The intermediate chains are only determined up to a flag function, and
//! the anchor normalization need not have vanishing periods one level down;
//! between steps the accumulated chain is corrected by subtracting a flag
//! function with the same periods. Subtracting an embedded flag function
//! never changes the jump image (flag-constant chains are in the kernel of
//! the jump operator), so the final chain `g` satisfies `D^k g` = the
//! embedded input exactly. [`lift_to_chain_direct`] solves the same problem
//! as one dense linear system and serves as the oracle for the structured
//! implementation.

use crate::chains::{flag_embed, ChainSpace, Filtration};
use crate::constraints::{period_rows, reciprocity_rows, FlagBasis};
use crate::geometry::{
    extension_sign, flag_label, CellId, FlatId, Geometry, GeometryError,
};
use crate::linalg::{solve, Matrix};
use crate::rational::{format_q, Q};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{BTreeMap, VecDeque};

/// How a choice function picks its anchor cell in each base flat.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiceStrategy {
    /// The top cell whose canonical interior point is lexicographically
    /// minimal.
    LexMinimalCell,
    /// An unbounded top cell when one exists (so that integration constants
    /// vanish near infinity), falling back to the lexicographically minimal
    /// cell otherwise.
    UnboundedCell,
}

/// An assignment of an anchor point — interior to a top cell of the base
/// flat — to every flag of one rank.
#[derive(Debug, Clone)]
pub struct ChoiceFunction {
    level: usize,
    strategy: ChoiceStrategy,
    assignment: BTreeMap<Vec<FlatId>, Vec<Q>>,
}

impl ChoiceFunction {
    /// Build the assignment for all flags of the given rank.
    pub fn new<G: Geometry + ?Sized>(
        g: &G,
        level: usize,
        strategy: ChoiceStrategy,
    ) -> ChoiceFunction {
        let mut assignment = BTreeMap::new();
        for flag in crate::geometry::enumerate_flags(g, level) {
            let base = *flag.last().expect("flags are nonempty");
            let cell = choose_cell(g, base, strategy);
            assignment.insert(flag.clone(), g.interior_point(base, cell).to_vec());
        }
        ChoiceFunction {
            level,
            strategy,
            assignment,
        }
    }

    /// The flag rank this choice function is defined on.
    pub fn level(&self) -> usize {
        self.level
    }

    /// The strategy used to build the assignment.
    pub fn strategy(&self) -> ChoiceStrategy {
        self.strategy
    }

    /// The anchor point assigned to a flag.
    pub fn anchor_point(&self, flag: &[FlatId]) -> &[Q] {
        &self.assignment[flag]
    }

    /// The anchor cell containing the assigned point.
    pub fn anchor_cell<G: Geometry + ?Sized>(
        &self,
        g: &G,
        flag: &[FlatId],
    ) -> Result<CellId, GeometryError> {
        let base = *flag.last().expect("flags are nonempty");
        g.locate(base, self.anchor_point(flag), None)
    }
}

fn choose_cell<G: Geometry + ?Sized>(g: &G, base: FlatId, strategy: ChoiceStrategy) -> CellId {
    let count = g.cell_count(base);
    let candidates: Vec<CellId> = match strategy {
        ChoiceStrategy::LexMinimalCell => (0..count).map(CellId).collect(),
        ChoiceStrategy::UnboundedCell => {
            let unbounded: Vec<CellId> = (0..count)
                .map(CellId)
                .filter(|&c| !g.cell_bounded(base, c))
                .collect();
            if unbounded.is_empty() {
                (0..count).map(CellId).collect()
            } else {
                unbounded
            }
        }
    };
    candidates
        .into_iter()
        .min_by(|&a, &b| g.interior_point(base, a).cmp(g.interior_point(base, b)))
        .expect("flats have at least one cell")
}

/// Failure modes of integration.
#[derive(Debug, Clone, thiserror::Error)]
pub enum IntegrationError {
    /// The input has a nonzero sum along a homology loop of a base flat.
    #[error("nonzero period along loop {loop_index} of flag {flag}: {residual}")]
    Period {
        /// The rank-`(k−1)` flag whose base flat carries the loop.
        flag: String,
        /// Index of the violating loop among the flat's homology loops.
        loop_index: usize,
        /// The nonzero loop sum.
        residual: String,
    },
    /// The input has a nonzero sum along a local cycle of the dual graph.
    #[error("inconsistent jumps around a cycle at flag {flag}, crossing wall {wall}: discrepancy {residual}")]
    Cycle {
        /// The flag whose base flat contains the cycle.
        flag: String,
        /// The wall at which the two propagated values disagree.
        wall: String,
        /// The difference between the two propagated values.
        residual: String,
    },
    /// The flag function handed to the lift violates its linear description.
    #[error("flag function outside the solution space: {0}")]
    NotInSolutionSpace(String),
    /// No flag-function correction matches the required periods.
    #[error("no flag-function correction with the required periods at level {0}")]
    CorrectionFailed(usize),
    /// A geometric query failed.
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// One-step integration output.
#[derive(Debug, Clone)]
pub struct IntegrationResult {
    /// The integrated chain, in the coordinates of the lower chain space.
    pub chain: Vec<Q>,
    /// Per-flag propagation order: `(cell, predecessor)` pairs, anchors
    /// first with no predecessor.
    pub path_log: Vec<PathLogEntry>,
}

/// The breadth-first propagation record for one flag.
#[derive(Debug, Clone)]
pub struct PathLogEntry {
    /// Label of the flag.
    pub flag: String,
    /// Visit order as `(cell, predecessor cell)`.
    pub steps: Vec<(usize, Option<usize>)>,
}

fn sign_q(s: i8) -> Q {
    Q::from_integer(BigInt::from(i32::from(s)))
}

/// Sum of a chain's prescribed jumps along one loop of a prefix flag's base.
fn loop_sum<G: Geometry + ?Sized>(
    g: &G,
    from: &ChainSpace,
    x: &[Q],
    prefix: &[FlatId],
    l: &crate::geometry::LoopClass,
) -> Result<Q, GeometryError> {
    let base = *prefix.last().expect("flags are nonempty");
    let mut sum = Q::zero();
    for cr in g.loop_crossings(base, l) {
        let eps = extension_sign(g, base, cr.wall_flat)?;
        let mut flag = prefix.to_vec();
        flag.push(cr.wall_flat);
        let fi = from
            .flag_position(&flag)
            .expect("loop crossings complete flags");
        sum += sign_q(eps * cr.direction_sign) * &x[from.coord(fi, cr.wall_cell)];
    }
    Ok(sum)
}

/// All loop sums of a chain, in the row order of
/// [`period_rows`](crate::constraints::period_rows) one level down.
pub fn chain_periods<G: Geometry + ?Sized>(
    g: &G,
    from: &ChainSpace,
    x: &[Q],
) -> Result<Vec<Q>, GeometryError> {
    let mut periods = Vec::new();
    for prefix in crate::geometry::enumerate_flags(g, from.level() - 1) {
        let base = *prefix.last().expect("flags are nonempty");
        for l in g.h1_loops(base) {
            periods.push(loop_sum(g, from, x, &prefix, l)?);
        }
    }
    Ok(periods)
}

/// Integrate a level-`k` chain to a level-`(k−1)` chain whose jump image is
/// the input, vanishing on the anchor cell of every flag.
///
/// Errors report a witness: the violating loop for a nonzero period, or the
/// crossing at which two propagation paths disagree for a violated cocycle
/// condition.
pub fn integrate_step<G: Geometry + ?Sized>(
    g: &G,
    from: &ChainSpace,
    to: &ChainSpace,
    x: &[Q],
    phi: &ChoiceFunction,
) -> Result<IntegrationResult, IntegrationError> {
    assert_eq!(from.level(), to.level() + 1, "spaces must be adjacent levels");
    assert_eq!(phi.level(), to.level(), "choice function level mismatch");
    assert_eq!(x.len(), from.dim(), "chain length mismatch");
    propagate(g, from, to, x, phi, false)
}

fn propagate<G: Geometry + ?Sized>(
    g: &G,
    from: &ChainSpace,
    to: &ChainSpace,
    x: &[Q],
    phi: &ChoiceFunction,
    reverse_neighbors: bool,
) -> Result<IntegrationResult, IntegrationError> {
    let mut chain = vec![Q::zero(); to.dim()];
    let mut path_log = Vec::with_capacity(to.flags().len());
    for (pi, prefix) in to.flags().iter().enumerate() {
        let base = *prefix.last().expect("flags are nonempty");
        for (li, l) in g.h1_loops(base).iter().enumerate() {
            let sum = loop_sum(g, from, x, prefix, l)?;
            if !sum.is_zero() {
                return Err(IntegrationError::Period {
                    flag: flag_label(g, prefix),
                    loop_index: li,
                    residual: format_q(&sum),
                });
            }
        }
        let ncells = to.cells_of(pi);
        let mut neighbors: Vec<Vec<&crate::geometry::WallCrossing>> = vec![Vec::new(); ncells];
        for cr in g.adjacency(base) {
            neighbors[cr.from.0].push(cr);
        }
        if reverse_neighbors {
            for list in &mut neighbors {
                list.reverse();
            }
        }
        let anchor = phi.anchor_cell(g, prefix)?;
        let mut values: Vec<Option<Q>> = vec![None; ncells];
        values[anchor.0] = Some(Q::zero());
        let mut steps = vec![(anchor.0, None)];
        let mut queue = VecDeque::from([anchor.0]);
        while let Some(cur) = queue.pop_front() {
            let cur_value = values[cur].clone().expect("queued cells have values");
            for cr in &neighbors[cur] {
                let eps = extension_sign(g, base, cr.wall_flat)?;
                let mut flag = prefix.clone();
                flag.push(cr.wall_flat);
                let fi = from
                    .flag_position(&flag)
                    .expect("wall crossings complete flags");
                let jump = sign_q(eps * cr.to_side) * &x[from.coord(fi, cr.wall_cell)];
                let next = &cur_value + jump;
                match &values[cr.to.0] {
                    None => {
                        values[cr.to.0] = Some(next);
                        steps.push((cr.to.0, Some(cur)));
                        queue.push_back(cr.to.0);
                    }
                    Some(existing) => {
                        if *existing != next {
                            return Err(IntegrationError::Cycle {
                                flag: flag_label(g, prefix),
                                wall: format!(
                                    "{} (cell {})",
                                    g.flat_label(cr.wall_flat),
                                    cr.wall_cell.0
                                ),
                                residual: format_q(&(next - existing)),
                            });
                        }
                    }
                }
            }
        }
        for (c, v) in values.into_iter().enumerate() {
            chain[to.coord(pi, CellId(c))] =
                v.expect("dual cell graphs of flats are connected");
        }
        path_log.push(PathLogEntry {
            flag: flag_label(g, prefix),
            steps,
        });
    }
    Ok(IntegrationResult { chain, path_log })
}

/// Subtract an embedded flag function so the chain's loop sums vanish.
///
/// Prefers a correction that also satisfies the reciprocity rows (keeping
/// intermediate flag data inside its linear description); when the stacked
/// system has no solution, any period-matching flag function is used — the
/// jump image is unchanged either way.
fn correct_periods<G: Geometry + ?Sized>(
    g: &G,
    space: &ChainSpace,
    x: &mut [Q],
) -> Result<(), IntegrationError> {
    let periods = chain_periods(g, space, x)?;
    if periods.iter().all(Q::is_zero) {
        return Ok(());
    }
    let basis = FlagBasis::new(g, space.level());
    let period_matrix = period_rows(g, &basis)?;
    let rec = reciprocity_rows(g, &basis);
    let mut stacked = period_matrix.clone();
    stacked.extend(rec.iter().cloned());
    let mut rhs = periods.clone();
    rhs.extend(std::iter::repeat_n(Q::zero(), rec.len()));
    let correction = solve(&Matrix::from_rows(stacked), &rhs).or_else(|| {
        solve(&Matrix::from_rows(period_matrix), &periods)
    });
    let Some(c) = correction else {
        return Err(IntegrationError::CorrectionFailed(space.level()));
    };
    let embedded = flag_embed(space, &c);
    for (xi, ei) in x.iter_mut().zip(&embedded) {
        *xi -= ei;
    }
    Ok(())
}

/// Lift a flag function in the level-`k` solution space to a top-level
/// chain whose `k`-fold jump image is the embedded input.
///
/// Implemented by iterated [`integrate_step`], correcting periods between
/// steps by subtracting embedded flag functions (which the jump operator
/// kills, so the final identity is exact).
pub fn lift_to_chain<G: Geometry + ?Sized>(
    g: &G,
    filt: &Filtration,
    level: usize,
    f: &[Q],
    strategy: ChoiceStrategy,
) -> Result<Vec<Q>, IntegrationError> {
    let basis = FlagBasis::new(g, level);
    assert_eq!(f.len(), basis.dim(), "flag function length mismatch");
    let mut rows = reciprocity_rows(g, &basis);
    rows.extend(period_rows(g, &basis)?);
    for row in &rows {
        let mut sum = Q::zero();
        for (c, v) in row.iter().zip(f) {
            sum += c * v;
        }
        if !sum.is_zero() {
            return Err(IntegrationError::NotInSolutionSpace(format!(
                "a constraint row has residual {}",
                format_q(&sum)
            )));
        }
    }
    let mut x = flag_embed(&filt.spaces[level], f);
    for j in (1..=level).rev() {
        if j < level {
            correct_periods(g, &filt.spaces[j], &mut x)?;
        }
        let phi = ChoiceFunction::new(g, j - 1, strategy);
        let result = integrate_step(g, &filt.spaces[j], &filt.spaces[j - 1], &x, &phi)?;
        x = result.chain;
    }
    Ok(x)
}

/// Reference implementation of [`lift_to_chain`]: solve `P_k · gc = embed(f)`
/// as one exact linear system, with no structural machinery. Used as an
/// oracle for the structured lift.
pub fn lift_to_chain_direct<G: Geometry + ?Sized>(
    g: &G,
    filt: &Filtration,
    level: usize,
    f: &[Q],
) -> Option<Vec<Q>> {
    let _ = g;
    let target = flag_embed(&filt.spaces[level], f);
    solve(&filt.composed[level].to_matrix(), &target)
}
