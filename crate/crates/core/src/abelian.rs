//! Finite abelian groups as products of cyclic groups.
//!
//! Elements are identified by their index in the lexicographic ordering of
//! coordinate tuples, so for a cyclic group `Z_m` the element `i` has index
//! `i`. Index 0 is always the identity, and indices `1..order` enumerate the
//! nonzero elements in the order used for cone coordinates.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::smith_normal_form;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    elements: Vec<Vec<u64>>,
}

impl FiniteAbelianGroup {
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_cyclic_presentation(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn element(&self, idx: usize) -> &[u64] {
        &self.elements[idx]
    }

    /// Mixed-radix index of a coordinate tuple; `None` when out of range.
    pub fn index_of(&self, tuple: &[u64]) -> Option<usize> {
        if tuple.len() != self.factors.len() {
            return None;
        }
        let mut idx = 0usize;
        for (t, f) in tuple.iter().zip(&self.factors) {
            if t >= f {
                return None;
            }
            idx = idx * (*f as usize) + *t as usize;
        }
        Some(idx)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let mut sum = Vec::with_capacity(self.factors.len());
        for ((x, y), f) in self.elements[a]
            .iter()
            .zip(&self.elements[b])
            .zip(&self.factors)
        {
            sum.push((x + y) % f);
        }
        self.index_of(&sum).expect("componentwise sum stays in range")
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut out = Vec::with_capacity(self.factors.len());
        for (x, f) in self.elements[a].iter().zip(&self.factors) {
            out.push((f - x) % f);
        }
        self.index_of(&out).expect("componentwise negation stays in range")
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Additive order of an element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut cur = a;
        let mut ord = 1;
        while cur != 0 {
            cur = self.add(cur, a);
            ord += 1;
        }
        ord
    }
}

/// Builds the group `Z_{d1} x ... x Z_{dk}` with its canonical element order.
pub fn make_group(invariant_factors: &[u64]) -> Result<FiniteAbelianGroup> {
    if let Some(&bad) = invariant_factors.iter().find(|&&f| f < 2) {
        return Err(Error::InvalidGroup(alloc::format!(
            "invariant factor {bad} is smaller than 2"
        )));
    }
    let order: usize = invariant_factors
        .iter()
        .map(|&f| f as usize)
        .product::<usize>();
    let k = invariant_factors.len();
    let mut elements = Vec::with_capacity(order);
    let mut cur = vec![0u64; k];
    for _ in 0..order {
        elements.push(cur.clone());
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < invariant_factors[pos] {
                break;
            }
            cur[pos] = 0;
        }
    }
    Ok(FiniteAbelianGroup {
        factors: invariant_factors.to_vec(),
        elements,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteAbelianGroup,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    /// Sorted element indices; always contains 0.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.elements.binary_search(&idx).is_ok()
    }
}

/// Smallest subgroup containing the given elements, computed by closure.
pub fn subgroup_generated(group: &FiniteAbelianGroup, gens: &[usize]) -> Result<Subgroup> {
    if gens.iter().any(|&g| g >= group.order()) {
        return Err(Error::ElementNotInGroup);
    }
    let mut member = vec![false; group.order()];
    member[0] = true;
    let mut stack: Vec<usize> = vec![0];
    while let Some(e) = stack.pop() {
        for &g in gens {
            let s = group.add(e, g);
            if !member[s] {
                member[s] = true;
                stack.push(s);
            }
        }
    }
    let elements: Vec<usize> = (0..group.order()).filter(|&i| member[i]).collect();
    Ok(Subgroup {
        parent: group.clone(),
        elements,
    })
}

/// All subgroups of the group, grown by repeatedly adjoining elements.
pub fn all_subgroups(group: &FiniteAbelianGroup) -> Vec<Subgroup> {
    let trivial = subgroup_generated(group, &[]).expect("trivial subgroup");
    let mut seen: Vec<Vec<usize>> = vec![trivial.elements.clone()];
    let mut queue: Vec<Vec<usize>> = vec![trivial.elements.clone()];
    while let Some(cur) = queue.pop() {
        for e in 0..group.order() {
            if cur.binary_search(&e).is_ok() {
                continue;
            }
            let mut gens = cur.clone();
            gens.push(e);
            let sub = subgroup_generated(group, &gens).expect("indices in range");
            if !seen.contains(&sub.elements) {
                seen.push(sub.elements.clone());
                queue.push(sub.elements);
            }
        }
    }
    seen.sort();
    seen.into_iter()
        .map(|elements| Subgroup {
            parent: group.clone(),
            elements,
        })
        .collect()
}

/// The quotient `G/H` as a canonical group plus the projection, given as the
/// quotient element index for every parent element index.
///
/// Invariant factors come from the Smith normal form of the relation lattice
/// spanned by the parent's cyclic orders together with lifts of `H`.
pub fn quotient_map(
    group: &FiniteAbelianGroup,
    subgroup: &Subgroup,
) -> Result<(FiniteAbelianGroup, Vec<usize>)> {
    if subgroup.parent() != group {
        return Err(Error::GroundMismatch);
    }
    let k = group.factors().len();
    if k == 0 {
        return Ok((group.clone(), vec![0; group.order()]));
    }
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (i, &f) in group.factors().iter().enumerate() {
        let mut row = vec![0i64; k];
        row[i] = f as i64;
        rows.push(row);
    }
    for &h in subgroup.elements() {
        rows.push(group.element(h).iter().map(|&x| x as i64).collect());
    }
    let (d, v) = smith_normal_form(&rows, k);
    let kept: Vec<usize> = (0..k).filter(|&j| d[j] > 1).collect();
    let quotient = make_group(&kept.iter().map(|&j| d[j] as u64).collect::<Vec<_>>())?;
    let mut projection = Vec::with_capacity(group.order());
    for idx in 0..group.order() {
        let t = group.element(idx);
        let mut tuple = Vec::with_capacity(kept.len());
        for &j in &kept {
            let mut acc: i64 = 0;
            for (c, &tc) in t.iter().enumerate() {
                acc += tc as i64 * v[c][j];
            }
            tuple.push(acc.rem_euclid(d[j]) as u64);
        }
        projection.push(
            quotient
                .index_of(&tuple)
                .expect("projected tuple lies in the quotient"),
        );
    }
    Ok((quotient, projection))
}

/// Units modulo `m`, ascending.
pub fn units(m: u64) -> Vec<u64> {
    (1..m).filter(|&u| num_integer::gcd(u, m) == 1).collect()
}

fn check_unit(m: u64, u: u64) -> Result<()> {
    if m < 2 || num_integer::gcd(u % m, m) != 1 {
        return Err(Error::NotAUnit { unit: u, modulus: m });
    }
    Ok(())
}

/// Action of the unit `u` on a coordinate index of `Z_m` (indices `1..m`).
pub fn unit_action_index(m: u64, u: u64, i: usize) -> Result<usize> {
    check_unit(m, u)?;
    debug_assert!(i >= 1 && (i as u64) < m);
    Ok(((u * i as u64) % m) as usize)
}

/// Coordinate permutation `x'_{u*i mod m} = x_i` on a point of length `m-1`.
pub fn unit_action_point<T: Clone>(m: u64, u: u64, x: &[T]) -> Result<Vec<T>> {
    check_unit(m, u)?;
    if x.len() + 1 != m as usize {
        return Err(Error::Invalid("point length must be m - 1"));
    }
    let mut out: Vec<Option<T>> = vec![None; x.len()];
    for (pos, val) in x.iter().enumerate() {
        let i = pos + 1;
        let image = ((u * i as u64) % m) as usize;
        out[image - 1] = Some(val.clone());
    }
    Ok(out.into_iter().map(|v| v.expect("permutation is total")).collect())
}
