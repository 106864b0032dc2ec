//! Kunz-balanced posets on finite abelian groups.
//!
//! The relation is stored as a dense boolean matrix over the group's element
//! indices; ground sets stay small enough that this dominates every
//! alternative in simplicity.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::abelian::{all_subgroups, FiniteAbelianGroup};
use crate::error::{Error, Result};

/// First axiom failure found in lexicographic scan order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosetViolation {
    NotReflexive { a: usize },
    Antisymmetry { a: usize, b: usize },
    Transitivity { a: usize, b: usize, c: usize },
    Balance { a: usize, b: usize },
}

impl fmt::Display for PosetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetViolation::NotReflexive { a } => write!(f, "{a} is not related to itself"),
            PosetViolation::Antisymmetry { a, b } => {
                write!(f, "both {a} <= {b} and {b} <= {a} hold")
            }
            PosetViolation::Transitivity { a, b, c } => {
                write!(f, "{a} <= {b} and {b} <= {c} but {a} <= {c} fails")
            }
            PosetViolation::Balance { a, b } => {
                write!(f, "{a} <= {b} but (b - a) <= {b} fails")
            }
        }
    }
}

/// Checks the partial-order axioms plus the balance condition
/// `a <= b implies (b - a) <= b`. Returns the first violation in scan order,
/// or `None` when the relation is a Kunz-balanced partial order.
pub fn validate_kunz_balanced(
    ground: &FiniteAbelianGroup,
    rel: &[bool],
) -> Option<PosetViolation> {
    let n = ground.order();
    debug_assert_eq!(rel.len(), n * n);
    for a in 0..n {
        if !rel[a * n + a] {
            return Some(PosetViolation::NotReflexive { a });
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && rel[a * n + b] && rel[b * n + a] {
                return Some(PosetViolation::Antisymmetry { a, b });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !rel[a * n + b] {
                continue;
            }
            for c in 0..n {
                if rel[b * n + c] && !rel[a * n + c] {
                    return Some(PosetViolation::Transitivity { a, b, c });
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if rel[a * n + b] && !rel[ground.sub(b, a) * n + b] {
                return Some(PosetViolation::Balance { a, b });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KunzPoset {
    ground: FiniteAbelianGroup,
    rel: Vec<bool>,
}

/// Structural findings from the diamond and cycle checks; empty vectors mean
/// the poset passes both.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructuralReport {
    /// Triples `(a, b, c)` with `a < a+b < a+b+c` where `a < a+c < a+b+c`
    /// fails.
    pub diamond_violations: Vec<(usize, usize, usize)>,
    /// Pairs (odd subgroup elements, coset representative) where one full
    /// relation family is present but the forced family is not.
    pub cycle_violations: Vec<(Vec<usize>, usize)>,
}

impl StructuralReport {
    pub fn is_clean(&self) -> bool {
        self.diamond_violations.is_empty() && self.cycle_violations.is_empty()
    }
}

impl KunzPoset {
    /// Wraps a relation matrix after validating it.
    pub fn new(ground: FiniteAbelianGroup, rel: Vec<bool>) -> Result<Self> {
        if rel.len() != ground.order() * ground.order() {
            return Err(Error::Invalid("relation matrix has the wrong shape"));
        }
        if let Some(v) = validate_kunz_balanced(&ground, &rel) {
            return Err(Error::InvalidPoset(v));
        }
        Ok(KunzPoset { ground, rel })
    }

    /// Builds a poset from sparse relations: reflexivity, the minimality of
    /// 0, transitivity, and balance are all closed over before validating.
    pub fn from_relations(ground: FiniteAbelianGroup, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = ground.order();
        if pairs.iter().any(|&(a, b)| a >= n || b >= n) {
            return Err(Error::ElementNotInGroup);
        }
        let mut rel = vec![false; n * n];
        for a in 0..n {
            rel[a * n + a] = true;
            rel[a] = true; // 0 <= a
        }
        for &(a, b) in pairs {
            rel[a * n + b] = true;
        }
        close_relation(&ground, &mut rel);
        KunzPoset::new(ground, rel)
    }

    /// The discrete Kunz poset: 0 below everything, nothing else related.
    pub fn discrete(ground: FiniteAbelianGroup) -> Self {
        KunzPoset::from_relations(ground, &[]).expect("discrete poset is valid")
    }

    pub fn ground(&self) -> &FiniteAbelianGroup {
        &self.ground
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.rel[a * self.ground.order() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    pub fn relation_matrix(&self) -> &[bool] {
        &self.rel
    }

    /// Non-reflexive related pairs in lexicographic order.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.ground.order();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.rel[a * n + b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Elements covering 0.
    pub fn atoms(&self) -> Vec<usize> {
        let n = self.ground.order();
        (1..n)
            .filter(|&b| !(1..n).any(|a| a != b && self.lt(a, b)))
            .collect()
    }

    /// All cover relations `(a, b, b - a)`; labels of covers land in the atom
    /// set for posets that come from faces.
    pub fn covers(&self) -> Vec<(usize, usize, usize)> {
        let n = self.ground.order();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if !self.lt(a, b) {
                    continue;
                }
                let has_mid = (0..n).any(|c| self.lt(a, c) && self.lt(c, b));
                if !has_mid {
                    out.push((a, b, self.ground.sub(b, a)));
                }
            }
        }
        out
    }

    /// Longest-chain height of each element above 0.
    pub fn heights(&self) -> Vec<usize> {
        let n = self.ground.order();
        let mut height = vec![0usize; n];
        // count of strict predecessors gives a valid processing order
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&b| (0..n).filter(|&a| self.lt(a, b)).count());
        for &b in &order {
            for a in 0..n {
                if self.lt(a, b) {
                    height[b] = height[b].max(height[a] + 1);
                }
            }
        }
        height
    }

    /// True when every relation of `other` also holds here.
    pub fn refines(&self, other: &KunzPoset) -> Result<bool> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        Ok(self
            .rel
            .iter()
            .zip(&other.rel)
            .all(|(mine, theirs)| *mine || !*theirs))
    }

    /// Relabels the ground set by a permutation (`perm[a]` is the image of
    /// `a`); used for automorphism actions.
    pub fn relabeled(&self, perm: &[usize]) -> Result<KunzPoset> {
        let n = self.ground.order();
        if perm.len() != n {
            return Err(Error::GroundMismatch);
        }
        let mut rel = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                if self.rel[a * n + b] {
                    rel[perm[a] * n + perm[b]] = true;
                }
            }
        }
        KunzPoset::new(self.ground.clone(), rel)
    }

    /// Diamond and cycle checks: necessary conditions for the poset to arise
    /// from a face with trivial Kunz subgroup.
    pub fn check_structural_properties(&self) -> StructuralReport {
        let g = &self.ground;
        let n = g.order();
        let mut report = StructuralReport::default();

        for a in 1..n {
            for b in 1..n {
                let ab = g.add(a, b);
                if !self.lt(a, ab) {
                    continue;
                }
                for c in 1..n {
                    let abc = g.add(ab, c);
                    if !self.lt(ab, abc) {
                        continue;
                    }
                    let ac = g.add(a, c);
                    if !(self.lt(a, ac) && self.lt(ac, abc)) {
                        report.diamond_violations.push((a, b, c));
                    }
                }
            }
        }

        for sub in all_subgroups(g) {
            if sub.order() % 2 == 0 || sub.order() == g.order() {
                continue;
            }
            let elems: Vec<usize> = sub.elements().to_vec();
            for a in 1..n {
                if sub.contains(a) || sub.contains(g.add(a, a)) {
                    continue;
                }
                // handle each coset once, via its least element
                if elems.iter().any(|&h| g.add(a, h) < a) {
                    continue;
                }
                let cond_a = elems.iter().any(|&b| {
                    elems.iter().all(|&h| {
                        let i = g.add(a, h);
                        self.lt(i, g.add(g.add(i, i), b))
                    })
                });
                let cond_b = elems.iter().all(|&h| {
                    elems.iter().all(|&h2| {
                        let i = g.add(a, h);
                        let j = g.add(g.add(a, a), h2);
                        self.lt(i, j)
                    })
                });
                if cond_a && !cond_b {
                    report.cycle_violations.push((elems.clone(), a));
                }
            }
        }
        report
    }
}

/// Fixpoint of transitive closure (by iterated squaring) and balance closure.
fn close_relation(ground: &FiniteAbelianGroup, rel: &mut [bool]) {
    let n = ground.order();
    loop {
        let mut changed = false;
        // transitive closure by squaring until stable
        loop {
            let mut step = false;
            let snapshot = rel.to_vec();
            for a in 0..n {
                for b in 0..n {
                    if rel[a * n + b] {
                        continue;
                    }
                    if (0..n).any(|c| snapshot[a * n + c] && snapshot[c * n + b]) {
                        rel[a * n + b] = true;
                        step = true;
                    }
                }
            }
            if !step {
                break;
            }
            changed = true;
        }
        for a in 0..n {
            for b in 0..n {
                if rel[a * n + b] {
                    let d = ground.sub(b, a);
                    if !rel[d * n + b] {
                        rel[d * n + b] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}
