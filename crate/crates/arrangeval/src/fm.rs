//! Exact Fourier–Motzkin elimination with deterministic witnesses.
//!
//! Feasibility of mixed strict/weak rational linear systems is decided by
//! eliminating variables from the last to the first. When the system is
//! feasible, a witness point is produced by deterministic back-substitution:
//! each variable is set to the midpoint of its residual interval, to the
//! finite bound itself when the interval is one-sided and weak, one unit
//! inside when one-sided and strict, and zero when unconstrained. The same
//! system always yields the same witness.

use crate::rational::{sign, Q};
use num_traits::Zero;
use std::collections::BTreeSet;

/// Comparison operator of a [`Constraint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rel {
    /// `a·x ≤ b`
    Le,
    /// `a·x < b`
    Lt,
}

/// A linear constraint `coeffs · x REL rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Constraint {
    /// Coefficient vector, one entry per variable.
    pub coeffs: Vec<Q>,
    /// Comparison operator.
    pub rel: Rel,
    /// Right-hand side.
    pub rhs: Q,
}

/// A system of rational linear constraints in `n` variables.
#[derive(Debug, Clone, Default)]
pub struct LinearSystem {
    n: usize,
    cons: Vec<Constraint>,
}

impl LinearSystem {
    /// Empty system in `n` variables.
    pub fn new(n: usize) -> Self {
        LinearSystem { n, cons: Vec::new() }
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.n
    }

    fn push(&mut self, coeffs: Vec<Q>, rel: Rel, rhs: Q) {
        assert_eq!(coeffs.len(), self.n, "coefficient length mismatch");
        self.cons.push(Constraint { coeffs, rel, rhs });
    }

    /// Add `a·x ≤ b`.
    pub fn le(&mut self, a: Vec<Q>, b: Q) {
        self.push(a, Rel::Le, b);
    }

    /// Add `a·x < b`.
    pub fn lt(&mut self, a: Vec<Q>, b: Q) {
        self.push(a, Rel::Lt, b);
    }

    /// Add `a·x ≥ b`.
    pub fn ge(&mut self, a: Vec<Q>, b: Q) {
        self.push(a.iter().map(|x| -x).collect(), Rel::Le, -b);
    }

    /// Add `a·x > b`.
    pub fn gt(&mut self, a: Vec<Q>, b: Q) {
        self.push(a.iter().map(|x| -x).collect(), Rel::Lt, -b);
    }

    /// Add `a·x = b` (as a pair of weak inequalities).
    pub fn eq(&mut self, a: Vec<Q>, b: Q) {
        self.le(a.clone(), b.clone());
        self.ge(a, b);
    }

    /// Add a sign condition `a·x <0 / =0 / >0` according to `s`.
    pub fn sign_condition(&mut self, a: Vec<Q>, b: Q, s: i8) {
        match s {
            0 => self.eq(a, b),
            1 => self.gt(a, b),
            -1 => self.lt(a, b),
            _ => panic!("sign must be -1, 0, or 1"),
        }
    }

    /// Decide feasibility and return the deterministic witness if feasible.
    pub fn witness(&self) -> Option<Vec<Q>> {
        // levels[k] = constraints in variables 0..=k (before eliminating k).
        let mut levels: Vec<Vec<Constraint>> = Vec::with_capacity(self.n + 1);
        let mut current = normalize(self.cons.clone());
        for k in (0..self.n).rev() {
            levels.push(current.clone());
            current = normalize(eliminate(&current, k));
        }
        // Ground level: constraints with no free variable left.
        for c in &current {
            debug_assert!(c.coeffs.iter().all(Zero::is_zero));
            let ok = match c.rel {
                Rel::Le => c.rhs >= Q::zero(),
                Rel::Lt => c.rhs > Q::zero(),
            };
            if !ok {
                return None;
            }
        }
        // Back-substitute from x_0 up to x_{n-1}.
        let mut x = vec![Q::zero(); self.n];
        for k in 0..self.n {
            let level = &levels[self.n - 1 - k];
            let mut lo: Option<(Q, bool)> = None; // (value, strict)
            let mut hi: Option<(Q, bool)> = None;
            for c in level {
                let a = &c.coeffs[k];
                if a.is_zero() {
                    continue;
                }
                // a x_k <= rhs - Σ_{j<k} coeff_j x_j  (coeffs beyond k are zero here)
                let mut rest = c.rhs.clone();
                for (j, xj) in x.iter().enumerate().take(k) {
                    if !c.coeffs[j].is_zero() {
                        rest -= &c.coeffs[j] * xj;
                    }
                }
                let bound = &rest / a;
                let strict = c.rel == Rel::Lt;
                if sign(a) > 0 {
                    // upper bound
                    hi = Some(match hi {
                        None => (bound, strict),
                        Some((b, s)) => {
                            if bound < b || (bound == b && strict) {
                                (bound, strict)
                            } else {
                                (b, s)
                            }
                        }
                    });
                } else {
                    // lower bound
                    lo = Some(match lo {
                        None => (bound, strict),
                        Some((b, s)) => {
                            if bound > b || (bound == b && strict) {
                                (bound, strict)
                            } else {
                                (b, s)
                            }
                        }
                    });
                }
            }
            x[k] = match (&lo, &hi) {
                (None, None) => Q::zero(),
                (Some((l, ls)), None) => {
                    if *ls {
                        l + Q::from_integer(1.into())
                    } else {
                        l.clone()
                    }
                }
                (None, Some((h, hs))) => {
                    if *hs {
                        h - Q::from_integer(1.into())
                    } else {
                        h.clone()
                    }
                }
                (Some((l, ls)), Some((h, hs))) => {
                    if l == h {
                        assert!(!*ls && !*hs, "elimination left an empty interval");
                        l.clone()
                    } else {
                        assert!(l < h, "elimination left an empty interval");
                        (l + h) / Q::from_integer(2.into())
                    }
                }
            };
        }
        Some(x)
    }

    /// Feasibility without a witness.
    pub fn is_feasible(&self) -> bool {
        self.witness().is_some()
    }
}

/// Eliminate variable `k`: combine every lower bound with every upper bound.
fn eliminate(cons: &[Constraint], k: usize) -> Vec<Constraint> {
    let mut out = Vec::new();
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    for c in cons {
        match sign(&c.coeffs[k]) {
            0 => out.push(c.clone()),
            1 => uppers.push(c),
            _ => lowers.push(c),
        }
    }
    for l in &lowers {
        for u in &uppers {
            // l: -a x_k + ... <= bl (a > 0),  u: a' x_k + ... <= bu (a' > 0)
            // scale to cancel x_k: u * a + l * a'  with a = -l.coeffs[k], a' = u.coeffs[k]
            let a = -l.coeffs[k].clone();
            let ap = u.coeffs[k].clone();
            let coeffs: Vec<Q> = (0..l.coeffs.len())
                .map(|j| &u.coeffs[j] * &a + &l.coeffs[j] * &ap)
                .collect();
            debug_assert!(coeffs[k].is_zero());
            let rhs = &u.rhs * &a + &l.rhs * &ap;
            let rel = if l.rel == Rel::Lt || u.rel == Rel::Lt {
                Rel::Lt
            } else {
                Rel::Le
            };
            out.push(Constraint { coeffs, rel, rhs });
        }
    }
    out
}

/// Scale each constraint so its first nonzero coefficient (or the rhs) has
/// magnitude one, and drop exact duplicates. Tautologies `0 ≤ b` with
/// `b ≥ 0` (resp. `<` with `b > 0`) are dropped as well.
fn normalize(cons: Vec<Constraint>) -> Vec<Constraint> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mut c in cons {
        let lead = c.coeffs.iter().find(|x| !x.is_zero()).cloned();
        match lead {
            None => {
                let tautology = match c.rel {
                    Rel::Le => c.rhs >= Q::zero(),
                    Rel::Lt => c.rhs > Q::zero(),
                };
                if tautology {
                    continue;
                }
                // Keep one infeasibility marker.
                out.push(c);
                continue;
            }
            Some(l) => {
                let f = l.recip() * Q::from_integer(num_bigint::BigInt::from(sign(&l)));
                // f = 1/|l|, preserving inequality direction.
                for x in c.coeffs.iter_mut() {
                    *x *= f.clone();
                }
                c.rhs *= f;
            }
        }
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn open_triangle_witness_is_deterministic() {
        // x > 0, y > 0, x + y < 1
        let mut s = LinearSystem::new(2);
        s.gt(qvec![1, 0], qi(0));
        s.gt(qvec![0, 1], qi(0));
        s.lt(qvec![1, 1], qi(1));
        let w = s.witness().unwrap();
        // Strictly interior.
        assert!(w[0] > qi(0) && w[1] > qi(0) && &w[0] + &w[1] < qi(1));
        // Frozen value: determinism is part of the contract.
        assert_eq!(s.witness().unwrap(), w);
    }

    #[test]
    fn infeasible_systems_are_detected() {
        let mut s = LinearSystem::new(1);
        s.lt(qvec![1], qi(0));
        s.gt(qvec![1], qi(1));
        assert!(!s.is_feasible());

        // Weak vs strict at the same bound.
        let mut s = LinearSystem::new(1);
        s.ge(qvec![1], qi(2));
        s.lt(qvec![1], qi(2));
        assert!(!s.is_feasible());
    }

    #[test]
    fn equalities_are_respected() {
        let mut s = LinearSystem::new(2);
        s.eq(qvec![1, 1], qi(1));
        s.eq(qvec![1, -1], qi(0));
        assert_eq!(s.witness().unwrap(), vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn one_sided_and_unconstrained_variables() {
        let mut s = LinearSystem::new(2);
        s.gt(qvec![1, 0], qi(3)); // x > 3, y free
        let w = s.witness().unwrap();
        assert_eq!(w, vec![qi(4), qi(0)]);

        let mut s = LinearSystem::new(1);
        s.le(qvec![1], qi(-2));
        assert_eq!(s.witness().unwrap(), vec![qi(-2)]);
    }

    #[test]
    fn mixed_system_in_three_variables() {
        // 0 < x < 1, 0 < y < 1, 0 < z < 1, x + y + z = 3/2
        let mut s = LinearSystem::new(3);
        for i in 0..3 {
            let mut a = qvec![0, 0, 0];
            a[i] = qi(1);
            s.gt(a.clone(), qi(0));
            s.lt(a, qi(1));
        }
        s.eq(qvec![1, 1, 1], q(3, 2));
        let w = s.witness().unwrap();
        assert_eq!(&w[0] + &w[1] + &w[2], q(3, 2));
        assert!(w.iter().all(|c| *c > qi(0) && *c < qi(1)));
    }

    #[test]
    fn degenerate_equality_point() {
        let mut s = LinearSystem::new(2);
        s.eq(qvec![1, 0], qi(2));
        s.eq(qvec![0, 1], qi(-1));
        assert_eq!(s.witness().unwrap(), vec![qi(2), qi(-1)]);
    }
}
