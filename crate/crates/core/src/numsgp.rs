//! Numerical semigroups: membership, Apéry sets, Kunz coordinates, Kunz
//! posets, and enumeration oracles.
//!
//! Two independent Apéry set routines are provided. [`apery_bfs`] is the
//! queue relaxation that walks up the Kunz poset; [`apery_naive`] scans the
//! integers upward over a dynamic-programming membership table and serves as
//! the correctness oracle (and performance baseline).

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::abelian::make_group;
use crate::error::{Error, Result};
use crate::poset::KunzPoset;

/// Default cap on the gap count for oversemigroup enumeration.
pub const DEFAULT_GAP_GUARD: usize = 24;
/// Default cap on the genus for Kunz-point and gap-tree enumerations.
pub const DEFAULT_GENUS_GUARD: u64 = 512;

/// The Apéry set `{0, a_1, ..., a_{m-1}}` with `a_i` the least element
/// congruent to `i` modulo `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperySet {
    pub modulus: u64,
    pub elements: Vec<u64>,
}

impl AperySet {
    pub fn max(&self) -> u64 {
        self.elements.iter().copied().max().unwrap_or(0)
    }
}

fn gcd_all(m: u64, generators: &[u64]) -> u64 {
    generators
        .iter()
        .fold(m, |acc, &g| num_integer::gcd(acc, g))
}

fn check_apery_pre(m: u64, generators: &[u64]) -> Result<()> {
    if m == 0 || generators.is_empty() || generators.contains(&0) {
        return Err(Error::Invalid("modulus and generators must be positive"));
    }
    if gcd_all(m, generators) != 1 {
        return Err(Error::GcdNotOne);
    }
    if generators.contains(&m) {
        return Ok(());
    }
    // m must be representable by the generators
    let mm = m as usize;
    let mut reach = vec![false; mm + 1];
    reach[0] = true;
    for v in 1..=mm {
        reach[v] = generators
            .iter()
            .any(|&g| (g as usize) <= v && reach[v - g as usize]);
    }
    if !reach[mm] {
        return Err(Error::NotInSemigroup { value: m });
    }
    Ok(())
}

/// Apéry set via the queue relaxation: dequeue `n`, discard it when a smaller
/// element of its class is already known, otherwise try to improve every
/// class reachable by one generator step. The queue is plain FIFO.
pub fn apery_bfs(m: u64, generators: &[u64]) -> Result<AperySet> {
    check_apery_pre(m, generators)?;
    let mm = m as usize;
    let mut a = vec![u64::MAX; mm];
    a[0] = 0;
    let mut queue: VecDeque<u64> = VecDeque::new();
    queue.push_back(0);
    while let Some(n) = queue.pop_front() {
        if n > a[(n % m) as usize] {
            continue;
        }
        for &g in generators {
            let s = n + g;
            let idx = (s % m) as usize;
            if s < a[idx] {
                a[idx] = s;
                queue.push_back(s);
            }
        }
    }
    Ok(AperySet {
        modulus: m,
        elements: a,
    })
}

/// Growable bit-packed membership table for the naive scan.
struct GrowBits {
    words: Vec<u64>,
    len: usize,
}

impl GrowBits {
    fn with_len(len: usize) -> Self {
        GrowBits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn grow_to(&mut self, len: usize) {
        self.words.resize(len.div_ceil(64), 0);
        self.len = len;
    }
}

/// Apéry set by scanning each positive integer in turn over a membership
/// table, stopping once every residue class has been filled.
pub fn apery_naive(m: u64, generators: &[u64]) -> Result<AperySet> {
    check_apery_pre(m, generators)?;
    let mm = m as usize;
    let mut a = vec![u64::MAX; mm];
    a[0] = 0;
    let mut found = 1usize;
    let max_gen = *generators.iter().max().expect("nonempty") as usize;
    let mut bound = (max_gen + 1).max(2 * mm);
    let mut reach = GrowBits::with_len(bound);
    reach.set(0);
    let mut filled_to = 0usize;
    let mut v = 1usize;
    loop {
        if v >= bound {
            bound *= 2;
            reach.grow_to(bound);
        }
        if v > filled_to {
            // extend the DP table one entry at a time
            for w in (filled_to + 1)..=v {
                if generators
                    .iter()
                    .any(|&g| (g as usize) <= w && reach.get(w - g as usize))
                {
                    reach.set(w);
                }
            }
            filled_to = v;
        }
        if reach.get(v) {
            let idx = v % mm;
            if a[idx] == u64::MAX {
                a[idx] = v as u64;
                found += 1;
                if found == mm {
                    break;
                }
            }
        }
        v += 1;
    }
    Ok(AperySet {
        modulus: m,
        elements: a,
    })
}

/// A numerical semigroup given by its minimal generators, with cached
/// multiplicity, Apéry set, Frobenius number, and genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    multiplicity: u64,
    apery_mult: Vec<u64>,
    frobenius: i64,
    genus: u64,
}

impl NumericalSemigroup {
    pub fn new(generators: &[u64]) -> Result<Self> {
        if generators.is_empty() || generators.contains(&0) {
            return Err(Error::Invalid("generators must be positive"));
        }
        let mut gens: Vec<u64> = generators.to_vec();
        gens.sort_unstable();
        gens.dedup();
        if gens.iter().fold(0u64, |acc, &g| num_integer::gcd(acc, g)) != 1 {
            return Err(Error::GcdNotOne);
        }
        // minimalization: g is redundant when g - h lies in the semigroup for
        // some other generator h
        let max_gen = *gens.last().expect("nonempty") as usize;
        let mut reach = vec![false; max_gen + 1];
        reach[0] = true;
        for v in 1..=max_gen {
            reach[v] = gens
                .iter()
                .any(|&g| (g as usize) <= v && reach[v - g as usize]);
        }
        let minimal: Vec<u64> = gens
            .iter()
            .copied()
            .filter(|&g| {
                !gens
                    .iter()
                    .any(|&h| h < g && reach[(g - h) as usize])
            })
            .collect();
        let multiplicity = minimal[0];
        let apery = apery_bfs(multiplicity, &minimal)?;
        let genus: u64 = apery
            .elements
            .iter()
            .enumerate()
            .map(|(i, &ai)| (ai - i as u64) / multiplicity)
            .sum();
        let frobenius = apery.max() as i64 - multiplicity as i64;
        Ok(NumericalSemigroup {
            generators: minimal,
            multiplicity,
            apery_mult: apery.elements,
            frobenius,
            genus,
        })
    }

    /// Rebuilds a semigroup from its gap set.
    pub fn from_gaps(gaps: &[u64]) -> Result<Self> {
        if gaps.is_empty() {
            return NumericalSemigroup::new(&[1]);
        }
        let f = *gaps.iter().max().expect("nonempty") as usize;
        let mut member = vec![true; 2 * f + 3];
        for &g in gaps {
            member[g as usize] = false;
        }
        let gens = minimal_generators_of_table(&member);
        NumericalSemigroup::new(&gens)
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn frobenius(&self) -> i64 {
        self.frobenius
    }

    /// Membership by the Apéry criterion: `n` is in the semigroup exactly
    /// when it is at least the cached class representative.
    pub fn contains(&self, n: u64) -> bool {
        n >= self.apery_mult[(n % self.multiplicity) as usize]
    }

    pub fn contains_signed(&self, n: i64) -> bool {
        n >= 0 && self.contains(n as u64)
    }

    pub fn gaps(&self) -> Vec<u64> {
        if self.frobenius < 0 {
            return Vec::new();
        }
        (1..=self.frobenius as u64)
            .filter(|&n| !self.contains(n))
            .collect()
    }

    /// Apéry set with respect to any element of the semigroup.
    pub fn apery(&self, m: u64) -> Result<AperySet> {
        if !self.contains(m) || m == 0 {
            return Err(Error::NotInSemigroup { value: m });
        }
        apery_bfs(m, &self.generators)
    }
}

/// Kunz coordinates `k_i = (a_i - i) / m` with respect to an element `m`.
pub fn kunz_coords(s: &NumericalSemigroup, m: u64) -> Result<Vec<u64>> {
    let apery = s.apery(m)?;
    Ok(apery
        .elements
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ai)| (ai - i as u64) / m)
        .collect())
}

/// The Kunz poset `A(S; m)` on `Z_m`: `i <= j` when `a_j - a_i` lies in `S`.
pub fn kunz_poset_of(s: &NumericalSemigroup, m: u64) -> Result<KunzPoset> {
    let apery = s.apery(m)?;
    let mm = m as usize;
    let ground = make_group(&[m])?;
    let mut rel = vec![false; mm * mm];
    for i in 0..mm {
        for j in 0..mm {
            let d = apery.elements[j] as i64 - apery.elements[i] as i64;
            if s.contains_signed(d) {
                rel[i * mm + j] = true;
            }
        }
    }
    KunzPoset::new(ground, rel)
}

fn minimal_generators_of_table(member: &[bool]) -> Vec<u64> {
    let mut gens = Vec::new();
    for t in 1..member.len() {
        if !member[t] {
            continue;
        }
        let splittable = (1..t).any(|s| member[s] && member[t - s]);
        if !splittable {
            gens.push(t as u64);
        }
    }
    gens
}

/// All oversemigroups of `s`, found by walking the tree in which each
/// oversemigroup hangs below the one obtained by re-removing its smallest
/// added element. Candidate gaps are tried largest first.
pub fn enumerate_oversemigroups(
    s: &NumericalSemigroup,
    max_gaps: usize,
) -> Result<Vec<NumericalSemigroup>> {
    let gaps = s.gaps();
    if gaps.len() > max_gaps {
        return Err(Error::TooLarge {
            what: "oversemigroup gap set",
            limit: max_gaps,
        });
    }
    if s.frobenius < 0 {
        return Ok(vec![s.clone()]);
    }
    let fu = s.frobenius as usize;
    let mut member: Vec<bool> = (0..=fu).map(|v| s.contains(v as u64)).collect();
    let mut out = Vec::new();
    walk_oversemigroups(&mut member, usize::MAX, &mut out)?;
    out.sort_by(|a, b| {
        a.genus()
            .cmp(&b.genus())
            .then_with(|| a.generators().cmp(b.generators()))
    });
    Ok(out)
}

fn walk_oversemigroups(
    member: &mut Vec<bool>,
    min_added: usize,
    out: &mut Vec<NumericalSemigroup>,
) -> Result<()> {
    let fu = member.len() - 1;
    let mut full = vec![true; 2 * fu + 3];
    full[..=fu].copy_from_slice(member);
    out.push(NumericalSemigroup::new(&minimal_generators_of_table(
        &full,
    ))?);
    for g in (1..min_added.min(member.len())).rev() {
        if member[g] {
            continue;
        }
        let closed = (1..=fu - g).all(|t| !(member[t] || t == g) || member[g + t]);
        if closed {
            member[g] = true;
            walk_oversemigroups(member, g, out)?;
            member[g] = false;
        }
    }
    Ok(())
}

/// Kunz rows of `P_m` as index triples: `(i, j, t, wraps)` encodes
/// `z_i + z_j >= z_t` when `wraps` is false and `z_i + z_j + 1 >= z_t`
/// otherwise.
pub fn kunz_rows(m: u64) -> Vec<(usize, usize, usize, bool)> {
    let mm = m as usize;
    let mut rows = Vec::new();
    for i in 1..mm {
        for j in i..mm {
            if i + j < mm {
                rows.push((i, j, i + j, false));
            } else if i + j > mm {
                rows.push((i, j, i + j - mm, true));
            }
        }
    }
    rows
}

/// Walks all integer points of the strict Kunz polyhedron with coordinate sum
/// `g`, invoking the callback on each.
pub(crate) fn walk_strict_kunz_points<F: FnMut(&[u64])>(
    m: u64,
    g: u64,
    mut visit: F,
) -> Result<()> {
    if m < 2 {
        return Err(Error::Invalid("multiplicity must be at least 2"));
    }
    if g + 1 < m {
        return Ok(());
    }
    let mm = m as usize;
    let rows = kunz_rows(m);
    // rows become checkable once every referenced index is assigned
    let mut by_depth: Vec<Vec<(usize, usize, usize, bool)>> = vec![Vec::new(); mm];
    for &(i, j, t, w) in &rows {
        by_depth[i.max(j).max(t)].push((i, j, t, w));
    }
    let dim = mm - 1;
    let mut z = vec![0u64; mm]; // 1-based, z[0] unused
    fn rec<F: FnMut(&[u64])>(
        depth: usize,
        dim: usize,
        g: u64,
        sum: u64,
        z: &mut Vec<u64>,
        by_depth: &[Vec<(usize, usize, usize, bool)>],
        visit: &mut F,
    ) {
        if depth == dim {
            let rest = g - sum;
            if rest < 1 {
                return;
            }
            z[dim] = rest;
            let ok = by_depth[dim]
                .iter()
                .all(|&(i, j, t, w)| z[i] + z[j] + u64::from(w) >= z[t]);
            if ok {
                visit(&z[1..]);
            }
            return;
        }
        // remaining coordinates (dim - depth + 1 of them) each need >= 1
        let slack = (dim - depth) as u64;
        let mut v = 1u64;
        while sum + v + slack <= g {
            z[depth] = v;
            let ok = by_depth[depth]
                .iter()
                .all(|&(i, j, t, w)| z[i] + z[j] + u64::from(w) >= z[t]);
            if ok {
                rec(depth + 1, dim, g, sum + v, z, by_depth, visit);
            }
            v += 1;
        }
        z[depth] = 0;
    }
    if dim == 1 {
        if g >= 1 {
            z[1] = g;
            visit(&z[1..]);
        }
        return Ok(());
    }
    rec(1, dim, g, 0, &mut z, &by_depth, &mut visit);
    Ok(())
}

/// All numerical semigroups with multiplicity `m` and genus `g`, enumerated
/// through integer points of the strict Kunz polyhedron with coordinate sum
/// `g`.
pub fn enumerate_by_multiplicity_genus(
    m: u64,
    g: u64,
    max_genus: u64,
) -> Result<Vec<NumericalSemigroup>> {
    if m < 2 || g + 1 < m {
        return Err(Error::Invalid(
            "need multiplicity >= 2 and genus >= multiplicity - 1",
        ));
    }
    if g > max_genus {
        return Err(Error::TooLarge {
            what: "genus enumeration",
            limit: max_genus as usize,
        });
    }
    let mut out = Vec::new();
    walk_strict_kunz_points(m, g, |z| {
        let mut gens = vec![m];
        for (i, &zi) in z.iter().enumerate() {
            gens.push(zi * m + (i as u64 + 1));
        }
        out.push(NumericalSemigroup::new(&gens).expect("Kunz points give semigroups"));
    })?;
    for s in &out {
        debug_assert_eq!(s.multiplicity(), m);
        debug_assert_eq!(s.genus(), g);
    }
    Ok(out)
}

/// Gap-tree census: all numerical semigroups of the exact genus, generated by
/// walking the tree that removes minimal generators beyond the Frobenius
/// number. Independent of the Kunz-coordinate enumeration.
pub fn semigroups_by_genus(genus: u64, max_genus: u64) -> Result<Vec<NumericalSemigroup>> {
    if genus > max_genus {
        return Err(Error::TooLarge {
            what: "gap tree",
            limit: max_genus as usize,
        });
    }
    let bound = (3 * genus + 4) as usize;
    let mut member = vec![true; bound];
    let mut out = Vec::new();
    fn rec(
        member: &mut Vec<bool>,
        frobenius: i64,
        cur: u64,
        target: u64,
        out: &mut Vec<NumericalSemigroup>,
    ) {
        if cur == target {
            out.push(
                NumericalSemigroup::new(&minimal_generators_of_table(member))
                    .expect("tree nodes are semigroups"),
            );
            return;
        }
        let gens = minimal_generators_of_table(member);
        for &x in &gens {
            if (x as i64) > frobenius {
                member[x as usize] = false;
                rec(member, x as i64, cur + 1, target, out);
                member[x as usize] = true;
            }
        }
    }
    rec(&mut member, -1, 0, genus, &mut out);
    out.sort_by(|a, b| a.generators().cmp(b.generators()));
    Ok(out)
}
