//! The Kunz polyhedron `P_m` and its semigroup structure.
//!
//! `P_m` is represented through its group-cone counterpart: it is the
//! translate of `C(Z_m)` by the vertex `(-1/m, ..., -(m-1)/m)`, so all face
//! computations delegate to the cone and points move back and forth through
//! the translation.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::abelian::{make_group, units};
use crate::cone::{Face, RowLabel};
use crate::error::{Error, Result};
use crate::groupcone::{build_group_cone, GroupCone};
use crate::linalg::{Int, Rat};
use crate::numsgp::{kunz_coords, kunz_poset_of, NumericalSemigroup};

/// Default coordinate bound for integer-point searches on faces of dimension
/// at least 2, as a multiple of `m`.
pub const DEFAULT_WITNESS_BOUND_FACTOR: u64 = 4;

/// An affine inequality `coeffs . z + constant >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineRow {
    pub coeffs: Vec<Int>,
    pub constant: Rat,
    pub label: RowLabel,
}

#[derive(Debug, Clone)]
pub struct KunzPolyhedron {
    m: u64,
    group_cone: GroupCone,
    vertex: Vec<Rat>,
    rows: Vec<AffineRow>,
}

/// Outcome of the integer-point search on a face of `P_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessStatus {
    /// An integer point of the face, with its semigroup.
    Witness {
        point: Vec<u64>,
        semigroup: NumericalSemigroup,
    },
    /// The face provably contains no semigroup point.
    ProvenEmpty(EmptyReason),
    /// Bounded search exhausted without a decision.
    NoneFound { bound: u64 },
}

impl WitnessStatus {
    pub fn has_witness(&self) -> bool {
        matches!(self, WitnessStatus::Witness { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptyReason {
    /// A coordinate is negative throughout the face (nontrivial Kunz
    /// subgroup); the 1-based coordinate is attached.
    NegativeCoordinate(usize),
    /// The lattice congruence along the ray has no solution.
    RayCongruence,
}

/// Builds `P_m`, verifying symbolically that translating each group-cone row
/// by the vertex reproduces the defining affine inequalities.
pub fn build_kunz_polyhedron(m: u64) -> Result<KunzPolyhedron> {
    if m < 2 {
        return Err(Error::Invalid("the Kunz polyhedron needs m >= 2"));
    }
    let group = make_group(&[m])?;
    let group_cone = build_group_cone(group)?;
    let dim = (m - 1) as usize;
    let vertex: Vec<Rat> = (1..=dim as i64)
        .map(|i| Rat::new(Int::from(-i), Int::from(m)))
        .collect();
    let mut rows = Vec::new();
    for (coeffs, label) in group_cone
        .cone()
        .hcone()
        .rows()
        .iter()
        .zip(group_cone.cone().hcone().labels())
    {
        // a . (x + v) >= 0 becomes a . z - a . v >= 0
        let mut shift = Rat::zero();
        for (c, v) in coeffs.iter().zip(&vertex) {
            shift += Rat::from_integer(c.clone()) * v;
        }
        let constant = -shift;
        // subadditivity rows must reproduce the textbook constants 0 or 1
        match label {
            RowLabel::Pair(i, j) => {
                let expected = if i + j < m as usize {
                    Rat::zero()
                } else {
                    Rat::from_integer(Int::from(1))
                };
                if constant != expected {
                    return Err(Error::Invalid(
                        "translation does not reproduce the Kunz inequalities",
                    ));
                }
            }
            RowLabel::NonNeg(i) => {
                let expected = Rat::new(Int::from(*i as i64), Int::from(m));
                if constant != expected {
                    return Err(Error::Invalid(
                        "translation does not reproduce the coordinate bounds",
                    ));
                }
            }
            RowLabel::Unlabeled => {}
        }
        rows.push(AffineRow {
            coeffs: coeffs.clone(),
            constant,
            label: *label,
        });
    }
    Ok(KunzPolyhedron {
        m,
        group_cone,
        vertex,
        rows,
    })
}

impl KunzPolyhedron {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn group_cone(&self) -> &GroupCone {
        &self.group_cone
    }

    pub fn vertex(&self) -> &[Rat] {
        &self.vertex
    }

    pub fn rows(&self) -> &[AffineRow] {
        &self.rows
    }

    /// Translates a polyhedron point to its cone counterpart `z - v`.
    pub fn to_cone_point(&self, z: &[Rat]) -> Vec<Rat> {
        z.iter().zip(&self.vertex).map(|(a, b)| a - b).collect()
    }

    /// First violated affine row of an integer point, if any.
    pub fn violated_row(&self, z: &[i64]) -> Option<usize> {
        self.rows.iter().position(|row| {
            let mut acc = row.constant.clone();
            for (c, &zi) in row.coeffs.iter().zip(z) {
                acc += Rat::from_integer(c * Int::from(zi));
            }
            acc.is_negative()
        })
    }

    pub fn contains_int(&self, z: &[i64]) -> bool {
        self.violated_row(z).is_none()
    }

    /// Membership in the strict polyhedron: all coordinates at least 1.
    pub fn contains_strict(&self, z: &[i64]) -> bool {
        self.contains_int(z) && z.iter().all(|&zi| zi >= 1)
    }

    /// The semigroup of an integer point: it is generated by `m` together
    /// with `a_i = z_i m + i`.
    pub fn semigroup_of_point(&self, z: &[i64]) -> Result<NumericalSemigroup> {
        if z.len() != (self.m - 1) as usize {
            return Err(Error::Invalid("point length must be m - 1"));
        }
        if let Some(row) = self.violated_row(z) {
            return Err(Error::NotAMember { row });
        }
        let mut gens = alloc::vec![self.m];
        for (i, &zi) in z.iter().enumerate() {
            debug_assert!(zi >= 0, "integer points of P_m are non-negative");
            gens.push(zi as u64 * self.m + i as u64 + 1);
        }
        NumericalSemigroup::new(&gens)
    }

    /// Kunz coordinates of a semigroup containing `m`; inverse of
    /// [`Self::semigroup_of_point`].
    pub fn point_of_semigroup(&self, s: &NumericalSemigroup) -> Result<Vec<u64>> {
        kunz_coords(s, self.m)
    }

    /// The minimal face of `P_m` whose relative interior contains the Kunz
    /// point of `s`.
    pub fn face_of_semigroup(&self, s: &NumericalSemigroup) -> Result<Face> {
        let z = kunz_coords(s, self.m)?;
        let zr: Vec<Rat> = z.iter().map(|&v| Rat::from_integer(Int::from(v))).collect();
        let x = self.to_cone_point(&zr);
        self.group_cone.cone().minimal_face_containing(&x)
    }

    /// Decides whether a face of `P_m` (given by its cone counterpart)
    /// contains an integer point corresponding to a numerical semigroup.
    ///
    /// Faces with nontrivial Kunz subgroup are empty because some coordinate
    /// stays negative; rays are decided exactly by a congruence; faces of
    /// dimension at least 2 are searched up to the coordinate bound.
    pub fn face_witness(&self, face: &Face, bound: u64) -> Result<WitnessStatus> {
        let pair = self.group_cone.face_to_pair(face)?;
        if !pair.kunz_subgroup.is_trivial() {
            let h = pair.kunz_subgroup.elements()[1];
            return Ok(WitnessStatus::ProvenEmpty(EmptyReason::NegativeCoordinate(h)));
        }
        if face.dim() == 0 {
            // apex with trivial subgroup cannot happen for m >= 2
            return Ok(WitnessStatus::ProvenEmpty(EmptyReason::RayCongruence));
        }
        if face.dim() == 1 {
            return self.ray_witness(face);
        }
        self.search_witness(face, bound)
    }

    /// Exact decision on a ray: `v + (u/m) r` is integral precisely when
    /// `u r_i = i (mod m)` for all `i`, which only depends on `u mod m`.
    fn ray_witness(&self, face: &Face) -> Result<WitnessStatus> {
        let ray = &self.group_cone.cone().rays()[face.ray_set()[0]].direction;
        let m = self.m;
        let r: Vec<u64> = ray
            .iter()
            .map(|c| u64::try_from(c).expect("ray coordinates are small non-negative") % m)
            .collect();
        for u in 1..m {
            let solves = r
                .iter()
                .enumerate()
                .all(|(pos, &ri)| (u * ri) % m == pos as u64 + 1);
            if solves {
                // z = v + (u/m) r is integral and lies on the ray
                let z: Vec<i64> = ray
                    .iter()
                    .enumerate()
                    .map(|(pos, c)| {
                        let big = Int::from(u) * c - Int::from(pos as i64 + 1);
                        let q = big / Int::from(m);
                        i64::try_from(&q).expect("desk-scale witness point")
                    })
                    .collect();
                let semigroup = self.semigroup_of_point(&z)?;
                return Ok(WitnessStatus::Witness {
                    point: z.iter().map(|&v| v as u64).collect(),
                    semigroup,
                });
            }
        }
        Ok(WitnessStatus::ProvenEmpty(EmptyReason::RayCongruence))
    }

    /// Lexicographic bounded search for an integer point on the face.
    ///
    /// Rows are scaled by `m` to stay integral; each inequality or face
    /// equality is checked as soon as its support is assigned.
    fn search_witness(&self, face: &Face, bound: u64) -> Result<WitnessStatus> {
        let dim = (self.m - 1) as usize;
        let m = self.m as i64;
        // (coeffs, m * constant, must_be_tight, last supported index)
        let mut scaled: Vec<(Vec<i64>, i64, bool, usize)> = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let coeffs: Vec<i64> = row
                .coeffs
                .iter()
                .map(|c| i64::try_from(c).expect("desk-scale coefficients"))
                .collect();
            let c = (row.constant.clone() * Rat::from_integer(Int::from(m)))
                .to_integer();
            let c = i64::try_from(&c).expect("desk-scale constants");
            let last = coeffs
                .iter()
                .rposition(|&v| v != 0)
                .expect("rows are nonzero");
            let tight = face.equality_set().contains(&i);
            scaled.push((coeffs, c, tight, last));
        }
        let mut by_depth: Vec<Vec<usize>> = alloc::vec![Vec::new(); dim];
        for (i, row) in scaled.iter().enumerate() {
            by_depth[row.3].push(i);
        }
        let mut z = alloc::vec![0i64; dim];
        fn rec(
            depth: usize,
            dim: usize,
            bound: i64,
            m: i64,
            z: &mut Vec<i64>,
            scaled: &[(Vec<i64>, i64, bool, usize)],
            by_depth: &[Vec<usize>],
        ) -> Option<Vec<i64>> {
            if depth == dim {
                return Some(z.clone());
            }
            for v in 0..=bound {
                z[depth] = v;
                let ok = by_depth[depth].iter().all(|&i| {
                    let (coeffs, c, tight, _) = &scaled[i];
                    let val: i64 = coeffs
                        .iter()
                        .zip(z.iter())
                        .map(|(a, b)| a * b)
                        .sum::<i64>()
                        * m
                        + c;
                    if *tight {
                        val == 0
                    } else {
                        val >= 0
                    }
                });
                if ok {
                    if let Some(hit) = rec(depth + 1, dim, bound, m, z, scaled, by_depth) {
                        return Some(hit);
                    }
                }
            }
            z[depth] = 0;
            None
        }
        match rec(0, dim, bound as i64, m, &mut z, &scaled, &by_depth) {
            Some(point) => {
                let semigroup = self.semigroup_of_point(&point)?;
                Ok(WitnessStatus::Witness {
                    point: point.iter().map(|&v| v as u64).collect(),
                    semigroup,
                })
            }
            None => Ok(WitnessStatus::NoneFound { bound }),
        }
    }

    /// Witness statuses across the unit orbit of a face, with transported
    /// witnesses built from the base witness as in the symmetry argument:
    /// acting by `g` sends the Apéry tuple `(a_i)` to `(g a_{ih mod m})`.
    pub fn orbit_witness_report(&self, face: &Face, bound: u64) -> Result<OrbitReport> {
        let orbit = self.group_cone.face_orbit(face)?;
        let mut statuses = Vec::new();
        for (_, f) in &orbit {
            statuses.push(self.face_witness(f, bound)?);
        }
        let witnesses: Vec<bool> = statuses.iter().map(WitnessStatus::has_witness).collect();
        let any_undecided = statuses
            .iter()
            .any(|s| matches!(s, WitnessStatus::NoneFound { .. }));
        let consistent = witnesses.iter().all(|&w| w == witnesses[0]) || any_undecided;

        let mut transported = Vec::new();
        if let WitnessStatus::Witness { semigroup, .. } = &statuses[0] {
            let m = self.m;
            let apery = semigroup.apery(m)?;
            for &(u, _) in &orbit {
                let h = units(m)
                    .into_iter()
                    .find(|&v| (v * u) % m == 1)
                    .expect("units are invertible");
                let mut gens = alloc::vec![m];
                for i in 1..m {
                    let src = ((i * h) % m) as usize;
                    gens.push(u * apery.elements[src]);
                }
                let t = NumericalSemigroup::new(&gens)?;
                // the transported tuple is again an Apéry set
                let t_apery = t.apery(m)?;
                for i in 1..m as usize {
                    let expected = u * apery.elements[(i * h as usize) % m as usize];
                    debug_assert_eq!(t_apery.elements[(expected % m) as usize], expected);
                }
                transported.push((u, t));
            }
        }
        Ok(OrbitReport {
            orbit,
            statuses,
            consistent,
            transported,
        })
    }
}

/// Orbit data for a face of `P_m` under the unit action.
#[derive(Debug, Clone)]
pub struct OrbitReport {
    /// Distinct faces with a representative unit each.
    pub orbit: Vec<(u64, Face)>,
    pub statuses: Vec<WitnessStatus>,
    /// All decided statuses agree across the orbit.
    pub consistent: bool,
    /// Semigroups transported from the base witness, one per orbit member.
    pub transported: Vec<(u64, NumericalSemigroup)>,
}

/// Produces an oversemigroup-compatible lift: a semigroup `T` with
/// multiplicity exactly `n` and the same Kunz poset as `S` at `n`, built by
/// pushing the Kunz point of `S` away from the vertex until every coordinate
/// is at least 1.
pub fn lift_oversemigroup(s: &NumericalSemigroup, n: u64) -> Result<NumericalSemigroup> {
    if n < 2 {
        return Err(Error::Invalid("lift needs n >= 2"));
    }
    let kv = kunz_coords(s, n)?;
    if kv.iter().all(|&k| k >= 1) {
        return Ok(s.clone());
    }
    // z' = kv + k (kv - v) stays on the same minimal face for every k > 0 and
    // is integral for k a multiple of n; k = n already clears the bound since
    // z'_i = (n+1) kv_i + i >= 1.
    let mut step = n;
    let t = loop {
        let z: Vec<i64> = kv
            .iter()
            .enumerate()
            .map(|(pos, &k)| {
                let i = pos as i64 + 1;
                ((1 + step) as i64) * k as i64 + (step / n) as i64 * i
            })
            .collect();
        if z.iter().all(|&v| v >= 1) {
            let poly = build_kunz_polyhedron(n)?;
            break poly.semigroup_of_point(&z)?;
        }
        step += n;
    };
    assert_eq!(t.multiplicity(), n);
    assert_eq!(kunz_poset_of(&t, n)?, kunz_poset_of(s, n)?);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, rat};

    #[test]
    fn kunz_rows_for_m3() {
        let p = build_kunz_polyhedron(3).unwrap();
        // subadditivity rows: 2z_1 >= z_2 and 2z_2 + 1 >= z_1
        let sub: Vec<&AffineRow> = p
            .rows()
            .iter()
            .filter(|r| matches!(r.label, RowLabel::Pair(_, _)))
            .collect();
        assert_eq!(sub.len(), 2);
        assert_eq!(sub[0].coeffs, int_vec(&[2, -1]));
        assert_eq!(sub[0].constant, rat(0, 1));
        assert_eq!(sub[1].coeffs, int_vec(&[-1, 2]));
        assert_eq!(sub[1].constant, rat(1, 1));
    }

    #[test]
    fn p2_is_a_translated_half_line() {
        let p = build_kunz_polyhedron(2).unwrap();
        assert_eq!(p.rows().len(), 1);
        assert_eq!(p.rows()[0].coeffs, int_vec(&[1]));
        assert_eq!(p.rows()[0].constant, rat(1, 2));
        assert!(p.contains_int(&[0]));
        assert!(!p.contains_int(&[-1]));
    }

    #[test]
    fn p6_has_eleven_rays_and_integral_vertex_shift() {
        let p = build_kunz_polyhedron(6).unwrap();
        assert_eq!(p.group_cone().cone().rays().len(), 11);
        assert_eq!(p.vertex()[0], rat(-1, 6));
        assert_eq!(p.vertex()[4], rat(-5, 6));
    }

    #[test]
    fn point_bijection_examples() {
        let p = build_kunz_polyhedron(3).unwrap();
        let s = p.semigroup_of_point(&[3, 1]).unwrap();
        assert_eq!(s.generators(), &[3, 5]);
        assert_eq!(p.point_of_semigroup(&s).unwrap(), alloc::vec![3, 1]);

        let n = p.semigroup_of_point(&[0, 0]).unwrap();
        assert_eq!(n.generators(), &[1]);
        assert_eq!(n.multiplicity(), 1);

        let s = p.semigroup_of_point(&[1, 1]).unwrap();
        assert_eq!(s.generators(), &[3, 4, 5]);
        assert_eq!(s.genus(), 2);

        // strict membership tracks multiplicity exactly m
        assert!(p.contains_strict(&[3, 1]));
        assert!(!p.contains_strict(&[0, 0]));
        assert!(matches!(
            p.semigroup_of_point(&[-1, 0]),
            Err(Error::NotAMember { .. })
        ));
    }

    #[test]
    fn round_trip_over_small_strict_points() {
        for m in 2..=6u64 {
            let p = build_kunz_polyhedron(m).unwrap();
            let dim = (m - 1) as usize;
            let mut z = alloc::vec![1i64; dim];
            loop {
                let sum: i64 = z.iter().sum();
                if sum <= 12 && p.contains_strict(&z) {
                    let s = p.semigroup_of_point(&z).unwrap();
                    assert_eq!(s.multiplicity(), m);
                    let back: Vec<i64> = p
                        .point_of_semigroup(&s)
                        .unwrap()
                        .iter()
                        .map(|&v| v as i64)
                        .collect();
                    assert_eq!(back, z);
                }
                // odometer over [1, 12]^dim
                let mut pos = 0;
                loop {
                    if pos == dim {
                        break;
                    }
                    z[pos] += 1;
                    if z[pos] <= 12 {
                        break;
                    }
                    z[pos] = 1;
                    pos += 1;
                }
                if pos == dim {
                    break;
                }
            }
        }
    }

    #[test]
    fn ray_witness_census_of_p6() {
        let p = build_kunz_polyhedron(6).unwrap();
        let gc = p.group_cone();
        let expect = |dir: &[i64]| {
            let idx = gc.cone().ray_index(&int_vec(dir)).unwrap();
            let face = gc.cone().face_from_rays(&[idx]).unwrap();
            p.face_witness(&face, 24).unwrap()
        };
        match expect(&[1, 2, 3, 4, 5]) {
            WitnessStatus::Witness { point, semigroup } => {
                assert_eq!(point, alloc::vec![0, 0, 0, 0, 0]);
                assert_eq!(semigroup.generators(), &[1]);
            }
            other => panic!("expected witness, got {other:?}"),
        }
        match expect(&[5, 4, 3, 2, 1]) {
            WitnessStatus::Witness { point, semigroup } => {
                assert_eq!(point, alloc::vec![4, 3, 2, 1, 0]);
                assert_eq!(semigroup.generators(), &[5, 6]);
            }
            other => panic!("expected witness, got {other:?}"),
        }
        for dir in [[1, 0, 1, 0, 1], [1, 2, 0, 1, 2], [2, 1, 0, 2, 1]] {
            match expect(&dir) {
                WitnessStatus::ProvenEmpty(EmptyReason::NegativeCoordinate(_)) => {}
                other => panic!("expected negative-coordinate emptiness, got {other:?}"),
            }
        }
        for dir in [
            [1, 2, 3, 4, 2],
            [2, 4, 3, 2, 1],
            [1, 2, 3, 1, 2],
            [2, 1, 3, 2, 1],
            [1, 2, 3, 2, 1],
            [1, 2, 1, 2, 1],
        ] {
            match expect(&dir) {
                WitnessStatus::ProvenEmpty(EmptyReason::RayCongruence) => {}
                other => panic!("expected congruence emptiness, got {other:?}"),
            }
        }
    }

    #[test]
    fn orbit_reports_are_consistent() {
        let p = build_kunz_polyhedron(6).unwrap();
        let gc = p.group_cone();
        let face_of = |dir: &[i64]| {
            let idx = gc.cone().ray_index(&int_vec(dir)).unwrap();
            gc.cone().face_from_rays(&[idx]).unwrap()
        };
        let report = p
            .orbit_witness_report(&face_of(&[1, 2, 3, 4, 5]), 24)
            .unwrap();
        assert_eq!(report.orbit.len(), 2);
        assert!(report.consistent);
        assert!(report.statuses.iter().all(WitnessStatus::has_witness));
        assert_eq!(report.transported.len(), 2);

        let report = p
            .orbit_witness_report(&face_of(&[1, 2, 3, 4, 2]), 24)
            .unwrap();
        assert_eq!(report.orbit.len(), 2);
        assert!(report.consistent);
        assert!(report.statuses.iter().all(|s| !s.has_witness()));

        // fixed ray: orbit of size 1
        let report = p
            .orbit_witness_report(&face_of(&[1, 2, 1, 2, 1]), 24)
            .unwrap();
        assert_eq!(report.orbit.len(), 1);
        assert!(report.consistent);
    }

    #[test]
    fn lift_examples() {
        let n = NumericalSemigroup::new(&[1]).unwrap();
        let t = lift_oversemigroup(&n, 3).unwrap();
        assert_eq!(t.multiplicity(), 3);
        assert_eq!(
            kunz_poset_of(&t, 3).unwrap(),
            kunz_poset_of(&n, 3).unwrap()
        );

        let s = NumericalSemigroup::new(&[3, 5]).unwrap();
        let t = lift_oversemigroup(&s, 3).unwrap();
        assert_eq!(t, s);

        let s = NumericalSemigroup::new(&[2, 3]).unwrap();
        let t = lift_oversemigroup(&s, 6).unwrap();
        assert_eq!(t.multiplicity(), 6);
        assert_eq!(
            kunz_poset_of(&t, 6).unwrap(),
            kunz_poset_of(&s, 6).unwrap()
        );
    }
}
