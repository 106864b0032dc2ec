//! The group cone of a finite abelian group and its face combinatorics.
//!
//! `C(G)` lives in `R^{|G|-1}` with coordinates indexed by the nonzero
//! elements of `G` (in the canonical element order) and is cut out by the
//! subadditivity inequalities `x_a + x_b >= x_{a+b}` over unordered pairs of
//! nonzero elements with `a + b != 0`. Explicit non-negativity rows are kept
//! in the pool: they make `C(Z_2)` the non-negative ray and are redundant for
//! larger cyclic groups, which the test suite verifies.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::abelian::{
    quotient_map, subgroup_generated, unit_action_index, FiniteAbelianGroup, Subgroup,
};
use crate::cone::{Face, HCone, PointedCone, RowLabel};
use crate::error::{Error, Result};
use crate::linalg::{primitive_from_rat, Int, Rat};
use crate::poset::KunzPoset;

#[derive(Debug, Clone)]
pub struct GroupCone {
    group: FiniteAbelianGroup,
    cone: PointedCone,
}

/// The subgroup of forced-zero coordinates and the induced partial order on
/// the quotient, as read off a face.
#[derive(Debug, Clone)]
pub struct FacePair {
    pub face: Face,
    pub kunz_subgroup: Subgroup,
    /// Quotient group `G/H` in canonical form.
    pub quotient: FiniteAbelianGroup,
    /// Projection from parent element index to quotient element index.
    pub projection: Vec<usize>,
    pub poset: KunzPoset,
}

/// Result of realizing a (subgroup, poset) pair as a face.
#[derive(Debug, Clone)]
pub struct RealizedPair {
    pub face: Face,
    pub realized: FacePair,
    /// Set when the face's pair strictly refines the requested one, i.e. the
    /// requested poset is not realizable as stated.
    pub strictly_refined: bool,
}

/// Completion of a trivial-subgroup Kunz poset from atom coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    /// Coordinates indexed by the nonzero elements in canonical order.
    pub coords: Vec<Rat>,
    /// `|M|`, the upper bound for the dimension of any face with this poset.
    pub atom_bound: usize,
}

/// Builds `C(G)` and enumerates its extreme rays.
pub fn build_group_cone(group: FiniteAbelianGroup) -> Result<GroupCone> {
    if group.order() < 2 {
        return Err(Error::TrivialGroup);
    }
    let n = group.order();
    let dim = n - 1;
    let mut rows: Vec<Vec<Int>> = Vec::new();
    let mut labels: Vec<RowLabel> = Vec::new();
    for a in 1..n {
        for b in a..n {
            let s = group.add(a, b);
            if s == 0 {
                continue;
            }
            let mut row = vec![Int::zero(); dim];
            row[a - 1] += 1;
            row[b - 1] += 1;
            row[s - 1] -= 1;
            if row.iter().all(Zero::is_zero) {
                // a = s would need b = 0; unreachable for nonzero b
                continue;
            }
            rows.push(row);
            labels.push(RowLabel::Pair(a, b));
        }
    }
    for a in 1..n {
        let mut row = vec![Int::zero(); dim];
        row[a - 1] += 1;
        rows.push(row);
        labels.push(RowLabel::NonNeg(a));
    }
    let hcone = HCone::with_labels(dim, rows, labels)?;
    let cone = PointedCone::from_hcone(hcone)?;
    Ok(GroupCone { group, cone })
}

impl GroupCone {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn cone(&self) -> &PointedCone {
        &self.cone
    }

    /// Row indices of the subadditivity pool (excludes non-negativity rows).
    pub fn subadditivity_rows(&self) -> Vec<usize> {
        self.cone
            .hcone()
            .labels()
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, RowLabel::Pair(_, _)))
            .map(|(i, _)| i)
            .collect()
    }

    fn nonneg_row(&self, elem: usize) -> usize {
        self.cone
            .hcone()
            .labels()
            .iter()
            .position(|l| matches!(l, RowLabel::NonNeg(a) if *a == elem))
            .expect("every nonzero element has a non-negativity row")
    }

    /// The pair `(H, poset)` of a face: `H` collects the coordinates that
    /// vanish on the face, and `a-bar <= (a+b)-bar` exactly when
    /// `x_a + x_b = x_{a+b}` is tight on the face.
    pub fn face_to_pair(&self, face: &Face) -> Result<FacePair> {
        let g = &self.group;
        let n = g.order();
        let mut zero_elems: Vec<usize> = Vec::new();
        for a in 1..n {
            if face.equality_set().contains(&self.nonneg_row(a)) {
                zero_elems.push(a);
            }
        }
        let subgroup = subgroup_generated(g, &zero_elems)?;
        // the zero set must already be a subgroup
        if subgroup.elements().len() != zero_elems.len() + 1 {
            return Err(Error::Invalid("zero coordinates of a face must form a subgroup"));
        }
        let (quotient, projection) = quotient_map(g, &subgroup)?;
        let k = quotient.order();
        let mut rel = vec![false; k * k];
        for a in 0..k {
            rel[a * k + a] = true;
            rel[a] = true;
        }
        for &row in face.equality_set() {
            if let RowLabel::Pair(a, b) = self.cone.hcone().labels()[row] {
                let s = g.add(a, b);
                rel[projection[a] * k + projection[s]] = true;
                rel[projection[b] * k + projection[s]] = true;
            }
        }
        let poset = KunzPoset::new(quotient.clone(), rel)?;
        Ok(FacePair {
            face: face.clone(),
            kunz_subgroup: subgroup,
            quotient,
            projection,
            poset,
        })
    }

    /// Realizes a `(H, poset)` pair as the smallest face whose equalities
    /// contain the pair's forced equations, and reports whether the realized
    /// pair strictly refines the request.
    pub fn pair_to_face(&self, subgroup: &Subgroup, poset: &KunzPoset) -> Result<RealizedPair> {
        if subgroup.parent() != &self.group {
            return Err(Error::GroundMismatch);
        }
        let (quotient, projection) = quotient_map(&self.group, subgroup)?;
        if poset.ground() != &quotient {
            return Err(Error::GroundMismatch);
        }
        let g = &self.group;
        let mut eqs: Vec<usize> = Vec::new();
        for (row, label) in self.cone.hcone().labels().iter().enumerate() {
            match label {
                RowLabel::Pair(a, b) => {
                    let s = g.add(*a, *b);
                    if poset.le(projection[*a], projection[s]) {
                        eqs.push(row);
                    }
                }
                RowLabel::NonNeg(a) => {
                    if subgroup.contains(*a) {
                        eqs.push(row);
                    }
                }
                RowLabel::Unlabeled => {}
            }
        }
        let face = self.cone.face_from_equalities(&eqs)?;
        let realized = self.face_to_pair(&face)?;
        let strictly_refined = if realized.kunz_subgroup.elements() != subgroup.elements() {
            true
        } else {
            realized.poset != *poset
        };
        Ok(RealizedPair {
            face,
            realized,
            strictly_refined,
        })
    }

    /// Injects a face of `C(G/H)` into `C(G)` along `y_a = x_{a-bar}`.
    pub fn inject_quotient_face(
        &self,
        subgroup: &Subgroup,
        quotient_cone: &GroupCone,
        face: &Face,
    ) -> Result<Face> {
        if subgroup.parent() != &self.group {
            return Err(Error::GroundMismatch);
        }
        let (quotient, projection) = quotient_map(&self.group, subgroup)?;
        if &quotient != quotient_cone.group() {
            return Err(Error::GroundMismatch);
        }
        let n = self.group.order();
        let mut image_rays: Vec<usize> = Vec::new();
        for &k in face.ray_set() {
            let x = &quotient_cone.cone.rays()[k].direction;
            let mut y: Vec<Int> = Vec::with_capacity(n - 1);
            for a in 1..n {
                let p = projection[a];
                if p == 0 {
                    y.push(Int::zero());
                } else {
                    y.push(x[p - 1].clone());
                }
            }
            let idx = self
                .cone
                .ray_index(&y)
                .ok_or(Error::Invalid("injected ray is not extreme in the big cone"))?;
            image_rays.push(idx);
        }
        image_rays.sort_unstable();
        let image = self.cone.face_from_rays(&image_rays)?;
        if image.ray_set() != image_rays {
            return Err(Error::Invalid("injected rays do not span a face"));
        }
        Ok(image)
    }

    /// Image of a face under the unit `u` acting on `C(Z_m)` by coordinate
    /// permutation. Only cyclic presentations are supported.
    pub fn act_on_face(&self, u: u64, face: &Face) -> Result<Face> {
        if !self.group.is_cyclic_presentation() {
            return Err(Error::Invalid("automorphism action implemented for cyclic groups"));
        }
        let m = self.group.factors()[0];
        let mut image_rays: Vec<usize> = Vec::new();
        for &k in face.ray_set() {
            let dir = &self.cone.rays()[k].direction;
            let permuted = crate::abelian::unit_action_point(m, u, dir)?;
            let idx = self
                .cone
                .ray_index(&permuted)
                .expect("unit action permutes extreme rays");
            image_rays.push(idx);
        }
        image_rays.sort_unstable();
        if face.ray_set().is_empty() {
            // validate u even when there is nothing to permute
            unit_action_index(m, u, 1)?;
        }
        let image = self.cone.face_from_rays(&image_rays)?;
        debug_assert_eq!(image.ray_set(), image_rays);
        debug_assert_eq!(image.dim(), face.dim());
        Ok(image)
    }

    /// Unit orbit of a face, deduplicated, with a representative unit each.
    pub fn face_orbit(&self, face: &Face) -> Result<Vec<(u64, Face)>> {
        if !self.group.is_cyclic_presentation() {
            return Err(Error::Invalid("automorphism action implemented for cyclic groups"));
        }
        let m = self.group.factors()[0];
        let mut orbit: Vec<(u64, Face)> = Vec::new();
        for u in crate::abelian::units(m) {
            let img = self.act_on_face(u, face)?;
            if !orbit.iter().any(|(_, f)| f.ray_set() == img.ray_set()) {
                orbit.push((u, img));
            }
        }
        Ok(orbit)
    }
}

/// Completes the coordinates of a point on a face with trivial Kunz subgroup
/// from the values at the poset's atoms, walking covers by height and
/// verifying every relation-forced equality afterwards.
pub fn reconstruct_from_atoms(
    poset: &KunzPoset,
    atom_values: &BTreeMap<usize, Rat>,
) -> Result<Reconstruction> {
    let g = poset.ground();
    let n = g.order();
    let atoms = poset.atoms();
    for &m in &atoms {
        if !atom_values.contains_key(&m) {
            return Err(Error::MissingAtomValue { atom: m });
        }
    }
    let heights = poset.heights();
    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by_key(|&b| (heights[b], b));
    let mut coords: Vec<Option<Rat>> = vec![None; n];
    coords[0] = Some(Rat::zero());
    for &b in &order {
        if let Some(v) = atom_values.get(&b) {
            coords[b] = Some(v.clone());
            continue;
        }
        // b is not an atom: find the least nonzero a < b; the balance
        // condition puts b - a strictly below b as well, so both terms of
        // x_b = x_a + x_{b-a} are already known.
        let a = (1..n)
            .find(|&a| poset.lt(a, b))
            .ok_or(Error::MissingAtomValue { atom: b })?;
        let d = g.sub(b, a);
        let xa = coords[a].clone().expect("heights are processed in order");
        let xd = coords[d]
            .clone()
            .expect("balance places the difference below b");
        coords[b] = Some(xa + xd);
    }
    let coords: Vec<Rat> = coords
        .into_iter()
        .map(|c| c.expect("all elements reachable from atoms"))
        .collect();
    for a in 0..n {
        for b in 0..n {
            if a == b || !poset.le(a, b) {
                continue;
            }
            let d = g.sub(b, a);
            if &coords[a] + &coords[d] != coords[b] {
                return Err(Error::InconsistentPropagation { a, b });
            }
        }
    }
    Ok(Reconstruction {
        coords: coords[1..].to_vec(),
        atom_bound: atoms.len(),
    })
}

/// Primitive direction of a rational coordinate vector, for comparing
/// reconstructed points against rays.
pub fn direction_of(coords: &[Rat]) -> Vec<Int> {
    primitive_from_rat(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::make_group;
    use crate::cone::DEFAULT_FACE_CAP;
    use crate::linalg::{int_vec, rat};

    fn z(m: u64) -> FiniteAbelianGroup {
        make_group(&[m]).unwrap()
    }

    fn ray_dirs(gc: &GroupCone) -> Vec<Vec<Int>> {
        gc.cone().rays().iter().map(|r| r.direction.clone()).collect()
    }

    #[test]
    fn z2_cone_is_the_nonnegative_ray() {
        let gc = build_group_cone(z(2)).unwrap();
        assert_eq!(ray_dirs(&gc), alloc::vec![int_vec(&[1])]);
        assert_eq!(gc.subadditivity_rows().len(), 0);
    }

    #[test]
    fn z4_cone_matches_published_census() {
        let gc = build_group_cone(z(4)).unwrap();
        assert_eq!(gc.subadditivity_rows().len(), 4);
        let expected = [
            int_vec(&[1, 0, 1]),
            int_vec(&[1, 2, 1]),
            int_vec(&[1, 2, 3]),
            int_vec(&[3, 2, 1]),
        ];
        assert_eq!(ray_dirs(&gc), expected.to_vec());
        // all four subadditivity rows are facets, the non-negativity rows are not
        let facets = gc.cone().irredundant_facets();
        assert_eq!(facets, gc.subadditivity_rows());
        let lattice = gc.cone().face_lattice(DEFAULT_FACE_CAP).unwrap();
        assert_eq!(lattice.f_vector(), alloc::vec![1, 4, 4, 1]);
    }

    #[test]
    fn trivial_group_rejected() {
        assert!(matches!(
            build_group_cone(make_group(&[]).unwrap()),
            Err(Error::TrivialGroup)
        ));
    }

    #[test]
    fn face_pairs_of_z6_rays() {
        let gc = build_group_cone(z(6)).unwrap();
        assert_eq!(gc.cone().rays().len(), 11);

        let ray_face = |dir: &[i64]| {
            let idx = gc.cone().ray_index(&int_vec(dir)).unwrap();
            gc.cone().face_from_rays(&[idx]).unwrap()
        };

        let pair = gc.face_to_pair(&ray_face(&[1, 0, 1, 0, 1])).unwrap();
        assert_eq!(pair.kunz_subgroup.elements(), &[0, 2, 4]);
        assert_eq!(pair.quotient.order(), 2);

        let pair = gc.face_to_pair(&ray_face(&[1, 2, 0, 1, 2])).unwrap();
        assert_eq!(pair.kunz_subgroup.elements(), &[0, 3]);
        let pair = gc.face_to_pair(&ray_face(&[2, 1, 0, 2, 1])).unwrap();
        assert_eq!(pair.kunz_subgroup.elements(), &[0, 3]);

        let pair = gc.face_to_pair(&ray_face(&[1, 2, 3, 4, 5])).unwrap();
        assert!(pair.kunz_subgroup.is_trivial());
        assert_eq!(pair.poset.atoms(), alloc::vec![1]);
        for i in 0..5 {
            assert!(pair.poset.lt(i, i + 1));
        }

        let full = gc.cone().full_face();
        let pair = gc.face_to_pair(&full).unwrap();
        assert!(pair.kunz_subgroup.is_trivial());
        assert!(pair.poset.relation_pairs().iter().all(|&(a, _)| a == 0));
    }

    #[test]
    fn facet_of_z4_from_single_equality() {
        let gc = build_group_cone(z(4)).unwrap();
        let row = gc
            .cone()
            .hcone()
            .labels()
            .iter()
            .position(|l| matches!(l, crate::cone::RowLabel::Pair(1, 2)))
            .unwrap();
        let face = gc.cone().face_from_equalities(&[row]).unwrap();
        assert_eq!(face.dim(), 2);
        let dirs: Vec<&Vec<Int>> = face
            .ray_set()
            .iter()
            .map(|&k| &gc.cone().rays()[k].direction)
            .collect();
        // substituting into x_1 + x_2 = x_3 keeps exactly two of the four rays
        assert_eq!(
            dirs,
            [int_vec(&[1, 0, 1]), int_vec(&[1, 2, 3])]
                .iter()
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn pair_to_face_round_trips_chain() {
        let gc = build_group_cone(z(6)).unwrap();
        let h = subgroup_generated(gc.group(), &[]).unwrap();
        let chain = KunzPoset::from_relations(z(6), &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
            .unwrap();
        let realized = gc.pair_to_face(&h, &chain).unwrap();
        assert!(!realized.strictly_refined);
        assert_eq!(realized.face.dim(), 1);
        let idx = gc.cone().ray_index(&int_vec(&[1, 2, 3, 4, 5])).unwrap();
        assert_eq!(realized.face.ray_set(), &[idx]);
    }

    #[test]
    fn unrealizable_relations_collapse_to_a_small_face() {
        // on Z_8, forcing x_1 + x_5 = x_6 and x_3 + x_7 = x_2 produces a face
        // of dimension 2 whose poset strictly refines the requested closure
        let g = z(8);
        let gc = build_group_cone(g.clone()).unwrap();
        let h = subgroup_generated(&g, &[]).unwrap();
        let poset = KunzPoset::from_relations(g, &[(1, 6), (3, 2)]).unwrap();
        let realized = gc.pair_to_face(&h, &poset).unwrap();
        assert_eq!(realized.face.dim(), 2);
        assert!(realized.strictly_refined);
        assert!(realized.realized.poset.refines(&poset).unwrap());
        assert_ne!(realized.realized.poset, poset);
    }

    #[test]
    fn face_lattice_cap_is_enforced() {
        let gc = build_group_cone(z(5)).unwrap();
        assert!(matches!(
            gc.cone().face_lattice(5),
            Err(Error::TooLarge { what: "face lattice", limit: 5 })
        ));
    }

    #[test]
    fn discrete_pair_gives_full_cone() {
        let gc = build_group_cone(z(4)).unwrap();
        let h = subgroup_generated(gc.group(), &[]).unwrap();
        let discrete = KunzPoset::discrete(z(4));
        let realized = gc.pair_to_face(&h, &discrete).unwrap();
        assert_eq!(realized.face.dim(), 3);
        assert_eq!(realized.face.ray_set().len(), 4);
        assert!(!realized.strictly_refined);
    }

    #[test]
    fn injection_embeds_quotient_rays() {
        let g6 = z(6);
        let gc6 = build_group_cone(g6.clone()).unwrap();

        let h = subgroup_generated(&g6, &[2]).unwrap();
        let (q, _) = quotient_map(&g6, &h).unwrap();
        let gc_q = build_group_cone(q).unwrap();
        let full = gc_q.cone().full_face(); // C(Z_2) = its single ray
        let image = gc6.inject_quotient_face(&h, &gc_q, &full).unwrap();
        assert_eq!(image.dim(), 1);
        let dir = &gc6.cone().rays()[image.ray_set()[0]].direction;
        assert_eq!(dir, &int_vec(&[1, 0, 1, 0, 1]));

        let h = subgroup_generated(&g6, &[3]).unwrap();
        let (q, _) = quotient_map(&g6, &h).unwrap();
        let gc_q = build_group_cone(q).unwrap();
        let r12 = gc_q.cone().ray_index(&int_vec(&[1, 2])).unwrap();
        let face = gc_q.cone().face_from_rays(&[r12]).unwrap();
        let image = gc6.inject_quotient_face(&h, &gc_q, &face).unwrap();
        let dir = &gc6.cone().rays()[image.ray_set()[0]].direction;
        assert_eq!(dir, &int_vec(&[1, 2, 0, 1, 2]));

        let r21 = gc_q.cone().ray_index(&int_vec(&[2, 1])).unwrap();
        let face = gc_q.cone().face_from_rays(&[r21]).unwrap();
        let image = gc6.inject_quotient_face(&h, &gc_q, &face).unwrap();
        let dir = &gc6.cone().rays()[image.ray_set()[0]].direction;
        assert_eq!(dir, &int_vec(&[2, 1, 0, 2, 1]));
    }

    #[test]
    fn unit_action_moves_and_fixes_rays() {
        let gc = build_group_cone(z(6)).unwrap();
        let ray = |d: &[i64]| {
            let idx = gc.cone().ray_index(&int_vec(d)).unwrap();
            gc.cone().face_from_rays(&[idx]).unwrap()
        };
        let moved = gc.act_on_face(5, &ray(&[1, 2, 3, 4, 2])).unwrap();
        assert_eq!(
            gc.cone().rays()[moved.ray_set()[0]].direction,
            int_vec(&[2, 4, 3, 2, 1])
        );
        let fixed = gc.act_on_face(5, &ray(&[1, 2, 1, 2, 1])).unwrap();
        assert_eq!(
            gc.cone().rays()[fixed.ray_set()[0]].direction,
            int_vec(&[1, 2, 1, 2, 1])
        );
        let identity = gc.act_on_face(1, &ray(&[1, 2, 3, 4, 5])).unwrap();
        assert_eq!(
            gc.cone().rays()[identity.ray_set()[0]].direction,
            int_vec(&[1, 2, 3, 4, 5])
        );
        assert!(matches!(
            gc.act_on_face(2, &ray(&[1, 2, 3, 4, 5])),
            Err(Error::NotAUnit { .. })
        ));
    }

    #[test]
    fn reconstruction_from_atoms() {
        // chain on Z_6 with x_1 = 1 gives (1,2,3,4,5)
        let chain = KunzPoset::from_relations(z(6), &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
            .unwrap();
        let mut values = BTreeMap::new();
        values.insert(1usize, rat(1, 1));
        let rec = reconstruct_from_atoms(&chain, &values).unwrap();
        assert_eq!(rec.atom_bound, 1);
        assert_eq!(
            rec.coords,
            alloc::vec![rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1), rat(5, 1)]
        );

        // facet poset x_1 + x_2 = x_3 on Z_4 with x_1 = 1, x_2 = 2
        let facet = KunzPoset::from_relations(z(4), &[(1, 3), (2, 3)]).unwrap();
        let mut values = BTreeMap::new();
        values.insert(1usize, rat(1, 1));
        values.insert(2usize, rat(2, 1));
        let rec = reconstruct_from_atoms(&facet, &values).unwrap();
        assert_eq!(rec.atom_bound, 2);
        assert_eq!(rec.coords, alloc::vec![rat(1, 1), rat(2, 1), rat(3, 1)]);

        // ray (1,2,1,2,1) of C(Z_6): atoms {1,3,5}, dim 1 < 3
        let gc = build_group_cone(z(6)).unwrap();
        let idx = gc.cone().ray_index(&int_vec(&[1, 2, 1, 2, 1])).unwrap();
        let face = gc.cone().face_from_rays(&[idx]).unwrap();
        let pair = gc.face_to_pair(&face).unwrap();
        assert_eq!(pair.poset.atoms(), alloc::vec![1, 3, 5]);
        let mut values = BTreeMap::new();
        for atom in [1usize, 3, 5] {
            values.insert(atom, rat(1, 1));
        }
        let rec = reconstruct_from_atoms(&pair.poset, &values).unwrap();
        assert_eq!(
            rec.coords,
            alloc::vec![rat(1, 1), rat(2, 1), rat(1, 1), rat(2, 1), rat(1, 1)]
        );
        assert_eq!(rec.atom_bound, 3);
        assert!(face.dim() < rec.atom_bound);

        // missing atom value is reported
        let mut missing = BTreeMap::new();
        missing.insert(1usize, rat(1, 1));
        assert!(matches!(
            reconstruct_from_atoms(&pair.poset, &missing),
            Err(Error::MissingAtomValue { .. })
        ));
    }
}
