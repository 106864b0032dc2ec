//! Exact rational polyhedral core for pointed cones.
//!
//! An [`HCone`] is a list of primitive integer inequality normals `a` with
//! `a . x >= 0`. Extreme rays are enumerated by the incremental double
//! description method; faces are identified by their set of extreme rays,
//! which is a unique key for faces of pointed cones.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::linalg::{
    dot_int, dot_int_rat, int, kernel_basis, primitive, rank_int, rank_rat, solve_square, to_rat_vec,
    Int, Rat,
};

/// Default cap on the number of faces materialized by [`PointedCone::face_lattice`].
pub const DEFAULT_FACE_CAP: usize = 1_000_000;

/// Provenance tag for an inequality row. The meaning of the payload is up to
/// the cone's builder (element indices for group cones, 1-based coordinates
/// for oversemigroup cones).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowLabel {
    Unlabeled,
    /// Subadditivity row produced by an unordered pair.
    Pair(usize, usize),
    /// Non-negativity row for a coordinate.
    NonNeg(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HCone {
    ambient_dim: usize,
    rows: Vec<Vec<Int>>,
    labels: Vec<RowLabel>,
}

impl HCone {
    pub fn new(ambient_dim: usize, rows: Vec<Vec<Int>>) -> Result<Self> {
        let labels = vec![RowLabel::Unlabeled; rows.len()];
        HCone::with_labels(ambient_dim, rows, labels)
    }

    pub fn with_labels(
        ambient_dim: usize,
        rows: Vec<Vec<Int>>,
        labels: Vec<RowLabel>,
    ) -> Result<Self> {
        if labels.len() != rows.len() {
            return Err(Error::Invalid("one label per inequality row required"));
        }
        let mut normalized = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != ambient_dim {
                return Err(Error::Invalid("inequality row has the wrong length"));
            }
            if row.iter().all(|c| c.is_zero()) {
                return Err(Error::Invalid("zero inequality row"));
            }
            normalized.push(primitive(&row));
        }
        Ok(HCone {
            ambient_dim,
            rows: normalized,
            labels,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn labels(&self) -> &[RowLabel] {
        &self.labels
    }

    /// Basis of the lineality space `{x : a.x = 0 for all rows}`.
    pub fn lineality_basis(&self) -> Vec<Vec<Int>> {
        let rat_rows: Vec<Vec<Rat>> = self.rows.iter().map(|r| to_rat_vec(r)).collect();
        kernel_basis(&rat_rows, self.ambient_dim)
    }

    pub fn is_pointed(&self) -> bool {
        rank_int(&self.rows) == self.ambient_dim
    }

    pub fn contains_int(&self, x: &[Int]) -> bool {
        self.rows.iter().all(|r| !dot_int(r, x).is_negative())
    }

    pub fn contains_rat(&self, x: &[Rat]) -> bool {
        self.rows.iter().all(|r| !dot_int_rat(r, x).is_negative())
    }

    /// First violated row index, if any.
    pub fn violated_row_rat(&self, x: &[Rat]) -> Option<usize> {
        self.rows.iter().position(|r| dot_int_rat(r, x).is_negative())
    }
}

/// Primitive integer direction of an extreme ray.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ray {
    pub direction: Vec<Int>,
}

/// A face of a pointed cone, identified by its extreme-ray set.
///
/// `equality_set` is closed: it lists every inequality tight on the whole
/// face, and `dim` is the rank of the rays it contains.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    dim: usize,
    ray_set: Vec<usize>,
    equality_set: Vec<usize>,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ray_set(&self) -> &[usize] {
        &self.ray_set
    }

    pub fn equality_set(&self) -> &[usize] {
        &self.equality_set
    }

    pub fn is_ray(&self) -> bool {
        self.dim == 1
    }
}

/// Complete extreme-ray enumeration via incremental double description.
///
/// Inequalities are inserted sorted by number of nonzero entries and then
/// lexicographically; adjacency of rays is decided by the algebraic rank
/// test on their common tight set.
pub fn extreme_rays(h: &HCone) -> Result<Vec<Ray>> {
    dd_rays(h).map(|dirs| dirs.into_iter().map(|direction| Ray { direction }).collect())
}

fn row_order(h: &HCone) -> Vec<usize> {
    let mut order: Vec<usize> = (0..h.rows.len()).collect();
    order.sort_by(|&a, &b| {
        let nz_a = h.rows[a].iter().filter(|c| !c.is_zero()).count();
        let nz_b = h.rows[b].iter().filter(|c| !c.is_zero()).count();
        nz_a.cmp(&nz_b).then_with(|| h.rows[a].cmp(&h.rows[b])).then(a.cmp(&b))
    });
    order
}

fn dd_rays(h: &HCone) -> Result<Vec<Vec<Int>>> {
    let d = h.ambient_dim;
    let rows = &h.rows;
    if rank_int(rows) != d {
        return Err(Error::NotPointed {
            lineality: h.lineality_basis(),
        });
    }
    let order = row_order(h);

    // greedy prefix of the insertion order forming a rank-d basis
    let mut basis: Vec<usize> = Vec::new();
    let mut basis_rows: Vec<Vec<Int>> = Vec::new();
    for &i in &order {
        if basis.len() == d {
            break;
        }
        basis_rows.push(rows[i].clone());
        if rank_int(&basis_rows) == basis.len() + 1 {
            basis.push(i);
        } else {
            basis_rows.pop();
        }
    }
    debug_assert_eq!(basis.len(), d);

    // initial simplicial cone: ray i solves a_j . r = delta_ij over the basis
    let a_rat: Vec<Vec<Rat>> = basis_rows.iter().map(|r| to_rat_vec(r)).collect();
    let mut rays: Vec<Vec<Int>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut e = vec![Rat::zero(); d];
        e[i] = Rat::from_integer(int(1));
        let sol = solve_square(&a_rat, &e).expect("basis rows are independent");
        rays.push(crate::linalg::primitive_from_rat(&sol));
    }

    let nrows = rows.len();
    let mut processed = BitSet::new(nrows);
    for &i in &basis {
        processed.set(i);
    }
    let tight_mask = |dir: &[Int]| -> BitSet {
        let mut m = BitSet::new(nrows);
        for (i, row) in rows.iter().enumerate() {
            if dot_int(row, dir).is_zero() {
                m.set(i);
            }
        }
        m
    };
    let mut tights: Vec<BitSet> = rays.iter().map(|r| tight_mask(r)).collect();

    for &j in &order {
        if processed.get(j) {
            continue;
        }
        let dots: Vec<Int> = rays.iter().map(|r| dot_int(&rows[j], r)).collect();
        let mut keep: Vec<usize> = Vec::new();
        let mut pos: Vec<usize> = Vec::new();
        let mut neg: Vec<usize> = Vec::new();
        for (k, dv) in dots.iter().enumerate() {
            if dv.is_negative() {
                neg.push(k);
            } else {
                keep.push(k);
                if dv.is_positive() {
                    pos.push(k);
                }
            }
        }
        if neg.is_empty() {
            processed.set(j);
            continue;
        }

        let mut new_dirs: BTreeSet<Vec<Int>> = BTreeSet::new();
        for &p in &pos {
            for &n in &neg {
                let mut common = tights[p].intersect(&tights[n]);
                common.intersect_in_place(&processed);
                if common.count() + 2 < d {
                    continue;
                }
                let common_rows: Vec<Vec<Int>> =
                    common.ones().iter().map(|&i| rows[i].clone()).collect();
                if rank_int(&common_rows) + 2 != d {
                    continue;
                }
                let coeff_n = dots[p].clone();
                let coeff_p = -dots[n].clone();
                let dir: Vec<Int> = rays[p]
                    .iter()
                    .zip(&rays[n])
                    .map(|(rp, rn)| &coeff_p * rp + &coeff_n * rn)
                    .collect();
                debug_assert!(dir.iter().any(|c| !c.is_zero()));
                new_dirs.insert(primitive(&dir));
            }
        }

        let mut next_rays: Vec<Vec<Int>> = keep.iter().map(|&k| rays[k].clone()).collect();
        let mut next_tights: Vec<BitSet> = keep.iter().map(|&k| tights[k].clone()).collect();
        for dir in new_dirs {
            next_tights.push(tight_mask(&dir));
            next_rays.push(dir);
        }
        rays = next_rays;
        tights = next_tights;
        processed.set(j);
    }

    let mut out: Vec<Vec<Int>> = rays;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Brute-force reference enumeration of extreme rays: every `(d-1)`-subset of
/// inequalities with rank `d-1` contributes its kernel direction when
/// feasible. Independent of the double description path; intended for cross
/// checks at ambient dimension <= 4.
pub fn brute_force_extreme_rays(h: &HCone) -> Result<Vec<Ray>> {
    let d = h.ambient_dim;
    if rank_int(&h.rows) != d {
        return Err(Error::NotPointed {
            lineality: h.lineality_basis(),
        });
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let n = h.rows.len();
    let k = d - 1;
    let mut found: BTreeSet<Vec<Int>> = BTreeSet::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&i| to_rat_vec(&h.rows[i])).collect();
        if rank_rat(&rows) == k {
            for dir in kernel_basis(&rows, d) {
                if h.contains_int(&dir) {
                    found.insert(dir.clone());
                }
                let neg: Vec<Int> = dir.iter().map(|c| -c).collect();
                if h.contains_int(&neg) {
                    found.insert(neg);
                }
            }
        }
        // next k-combination of 0..n
        if k == 0 {
            break;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(found.into_iter().map(|direction| Ray { direction }).collect());
            }
            i -= 1;
            if subset[i] + (k - i) < n {
                subset[i] += 1;
                for j in (i + 1)..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
    Ok(found.into_iter().map(|direction| Ray { direction }).collect())
}

/// A pointed cone with its extreme rays and full ray/row incidence.
#[derive(Debug, Clone)]
pub struct PointedCone {
    hcone: HCone,
    rays: Vec<Ray>,
    /// per ray: which rows are tight
    ray_tight: Vec<BitSet>,
    /// per row: which rays are tight
    row_tight: Vec<BitSet>,
}

impl PointedCone {
    pub fn from_hcone(hcone: HCone) -> Result<Self> {
        let rays = extreme_rays(&hcone)?;
        let nrows = hcone.rows().len();
        let mut ray_tight = Vec::with_capacity(rays.len());
        let mut row_tight = vec![BitSet::new(rays.len()); nrows];
        for (k, ray) in rays.iter().enumerate() {
            let mut mask = BitSet::new(nrows);
            for (i, row) in hcone.rows().iter().enumerate() {
                if dot_int(row, &ray.direction).is_zero() {
                    mask.set(i);
                    row_tight[i].set(k);
                }
            }
            ray_tight.push(mask);
        }
        Ok(PointedCone {
            hcone,
            rays,
            ray_tight,
            row_tight,
        })
    }

    pub fn hcone(&self) -> &HCone {
        &self.hcone
    }

    pub fn ambient_dim(&self) -> usize {
        self.hcone.ambient_dim()
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ray_index(&self, direction: &[Int]) -> Option<usize> {
        self.rays
            .binary_search_by(|r| r.direction.as_slice().cmp(direction))
            .ok()
    }

    pub fn tight_rows_of_ray(&self, ray: usize) -> &BitSet {
        &self.ray_tight[ray]
    }

    /// Indices of inequalities that support facets: their tight rays span a
    /// codimension-1 subspace. Duplicate normals are reported once.
    pub fn irredundant_facets(&self) -> Vec<usize> {
        let d = self.ambient_dim();
        let mut seen_normals: BTreeSet<Vec<Int>> = BTreeSet::new();
        let mut facets = Vec::new();
        for (i, mask) in self.row_tight.iter().enumerate() {
            let dirs: Vec<Vec<Int>> = mask
                .ones()
                .iter()
                .map(|&k| self.rays[k].direction.clone())
                .collect();
            if dirs.len() + 1 < d {
                continue;
            }
            if rank_int(&dirs) + 1 == d && seen_normals.insert(self.hcone.rows()[i].clone()) {
                facets.push(i);
            }
        }
        facets
    }

    fn face_from_ray_mask(&self, mask: &BitSet) -> Face {
        let ray_set = mask.ones();
        let nrows = self.hcone.rows().len();
        let equality_set;
        let dim;
        if ray_set.is_empty() {
            equality_set = (0..nrows).collect::<Vec<_>>();
            dim = 0;
        } else {
            let mut common = self.ray_tight[ray_set[0]].clone();
            for &k in &ray_set[1..] {
                common.intersect_in_place(&self.ray_tight[k]);
            }
            equality_set = common.ones();
            let dirs: Vec<Vec<Int>> = ray_set
                .iter()
                .map(|&k| self.rays[k].direction.clone())
                .collect();
            dim = rank_int(&dirs);
            debug_assert_eq!(
                dim,
                self.ambient_dim()
                    - rank_int(
                        &equality_set
                            .iter()
                            .map(|&i| self.hcone.rows()[i].clone())
                            .collect::<Vec<_>>()
                    ),
                "ray rank and equality corank disagree"
            );
        }
        Face {
            dim,
            ray_set,
            equality_set,
        }
    }

    /// The smallest face on which every inequality in `eqs` is tight.
    ///
    /// The returned equality set is the closure of `eqs`; an empty
    /// intersection yields the apex.
    pub fn face_from_equalities(&self, eqs: &[usize]) -> Result<Face> {
        let nrows = self.hcone.rows().len();
        if eqs.iter().any(|&i| i >= nrows) {
            return Err(Error::Invalid("equality index out of range"));
        }
        let mut mask = BitSet::full(self.rays.len());
        for &i in eqs {
            mask.intersect_in_place(&self.row_tight[i]);
        }
        Ok(self.face_from_ray_mask(&mask))
    }

    /// The smallest face containing the given extreme rays.
    pub fn face_from_rays(&self, ray_indices: &[usize]) -> Result<Face> {
        if ray_indices.iter().any(|&k| k >= self.rays.len()) {
            return Err(Error::Invalid("ray index out of range"));
        }
        if ray_indices.is_empty() {
            return Ok(self.face_from_ray_mask(&BitSet::new(self.rays.len())));
        }
        let mut common = self.ray_tight[ray_indices[0]].clone();
        for &k in &ray_indices[1..] {
            common.intersect_in_place(&self.ray_tight[k]);
        }
        self.face_from_equalities(&common.ones())
    }

    pub fn full_face(&self) -> Face {
        let all: Vec<usize> = (0..self.rays.len()).collect();
        self.face_from_ray_mask(&BitSet::from_indices(self.rays.len(), &all))
    }

    pub fn apex(&self) -> Face {
        self.face_from_ray_mask(&BitSet::new(self.rays.len()))
    }

    /// Minimal face whose relative interior contains the point, i.e. the face
    /// cut out by the rows tight at the point.
    pub fn minimal_face_containing(&self, x: &[Rat]) -> Result<Face> {
        if let Some(row) = self.hcone.violated_row_rat(x) {
            return Err(Error::NotAMember { row });
        }
        let tight: Vec<usize> = self
            .hcone
            .rows()
            .iter()
            .enumerate()
            .filter(|(_, r)| dot_int_rat(r, x).is_zero())
            .map(|(i, _)| i)
            .collect();
        self.face_from_equalities(&tight)
    }

    /// All faces, graded by dimension, with cover relations.
    ///
    /// Enumeration intersects facet ray sets breadth-first starting from the
    /// full cone and memoizes on the ray set.
    pub fn face_lattice(&self, cap: usize) -> Result<FaceLattice> {
        let facets = self.irredundant_facets();
        let nrays = self.rays.len();
        let full_mask = BitSet::full(nrays);
        let mut seen: BTreeMap<Vec<usize>, Face> = BTreeMap::new();
        let full = self.face_from_ray_mask(&full_mask);
        let mut queue: VecDeque<BitSet> = VecDeque::new();
        seen.insert(full.ray_set.clone(), full);
        queue.push_back(full_mask);
        while let Some(mask) = queue.pop_front() {
            for &f in &facets {
                let inter = mask.intersect(&self.row_tight[f]);
                if inter == mask {
                    continue;
                }
                let key = inter.ones();
                if seen.contains_key(&key) {
                    continue;
                }
                if seen.len() >= cap {
                    return Err(Error::TooLarge {
                        what: "face lattice",
                        limit: cap,
                    });
                }
                let face = self.face_from_ray_mask(&inter);
                seen.insert(key, face);
                queue.push_back(inter);
            }
        }
        let mut faces: Vec<Face> = seen.into_values().collect();
        faces.sort();
        let max_dim = faces.iter().map(Face::dim).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); max_dim + 1];
        for (i, f) in faces.iter().enumerate() {
            by_dim[f.dim].push(i);
        }
        let mut covers = Vec::new();
        for upper_dim in 1..=max_dim {
            for &hi in &by_dim[upper_dim] {
                let hi_mask = BitSet::from_indices(nrays, &faces[hi].ray_set);
                for &lo in &by_dim[upper_dim - 1] {
                    let lo_mask = BitSet::from_indices(nrays, &faces[lo].ray_set);
                    if lo_mask.is_subset_of(&hi_mask) {
                        covers.push((lo, hi));
                    }
                }
            }
        }
        Ok(FaceLattice {
            faces,
            by_dim,
            covers,
        })
    }
}

#[derive(Debug, Clone)]
pub struct FaceLattice {
    faces: Vec<Face>,
    by_dim: Vec<Vec<usize>>,
    covers: Vec<(usize, usize)>,
}

impl FaceLattice {
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn by_dim(&self) -> &[Vec<usize>] {
        &self.by_dim
    }

    /// Cover pairs `(lower, upper)` as indices into `faces`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }
}
