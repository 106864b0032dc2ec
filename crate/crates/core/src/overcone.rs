//! The oversemigroup cone `O_n` and its bridge to the group cone.
//!
//! The textbook inequality families `y_i + y_j <= y_{i+j}` (for `i + j < n`)
//! and `y_i + y_j <= y_{i+j-n} + y_n` (for `i + j > n`) all vanish on the
//! line through `(1, 2, ..., n)`, so on their own they cut out a cone with
//! lineality. Two convention row families are kept in the pool to make the
//! cone pointed with the intended ray census: `y_1 >= 0`, and the pullbacks
//! `i y_n - n y_i >= 0` of the group-cone coordinate bounds, which are
//! constant along the `(1, ..., n)` direction and redundant for `n >= 3`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::cone::{HCone, PointedCone, RowLabel};
use crate::error::{Error, Result};
use crate::linalg::{primitive, Int, Rat};
use crate::numsgp::NumericalSemigroup;

/// Default cap on the number of lattice points visited by a slice count.
pub const DEFAULT_SLICE_GUARD: usize = 100_000_000;

#[derive(Debug, Clone)]
pub struct OversemigroupCone {
    n: u64,
    cone: PointedCone,
}

/// Builds `O_n` in `R^n` and enumerates its extreme rays.
pub fn build_oversemigroup_cone(n: u64) -> Result<OversemigroupCone> {
    if n < 2 {
        return Err(Error::Invalid("the oversemigroup cone needs n >= 2"));
    }
    let nn = n as usize;
    let mut rows: Vec<Vec<Int>> = Vec::new();
    let mut labels: Vec<RowLabel> = Vec::new();
    for i in 1..nn {
        for j in i..nn {
            if i + j < nn {
                // y_{i+j} - y_i - y_j >= 0
                let mut row = vec![Int::zero(); nn];
                row[i + j - 1] += 1;
                row[i - 1] -= 1;
                row[j - 1] -= 1;
                rows.push(row);
                labels.push(RowLabel::Pair(i, j));
            } else if i + j > nn {
                // y_{i+j-n} + y_n - y_i - y_j >= 0
                let mut row = vec![Int::zero(); nn];
                row[i + j - nn - 1] += 1;
                row[nn - 1] += 1;
                row[i - 1] -= 1;
                row[j - 1] -= 1;
                rows.push(row);
                labels.push(RowLabel::Pair(i, j));
            }
        }
    }
    // y_1 >= 0 separates the ray (1, ..., n) from its negative
    let mut row = vec![Int::zero(); nn];
    row[0] += 1;
    rows.push(row);
    labels.push(RowLabel::NonNeg(0));
    // pullbacks of the group-cone bounds x_i >= 0: i y_n - n y_i >= 0
    for i in 1..nn {
        let mut row = vec![Int::zero(); nn];
        row[nn - 1] += i as i64;
        row[i - 1] -= n as i64;
        rows.push(row);
        labels.push(RowLabel::NonNeg(i));
    }
    let hcone = HCone::with_labels(nn, rows, labels)?;
    let cone = PointedCone::from_hcone(hcone)?;
    Ok(OversemigroupCone { n, cone })
}

impl OversemigroupCone {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn cone(&self) -> &PointedCone {
        &self.cone
    }

    pub fn contains_int(&self, y: &[Int]) -> bool {
        self.cone.hcone().contains_int(y)
    }

    /// Unique decomposition `y = y' + y_1 (1, 2, ..., n)` with `y'_1 = 0`.
    pub fn decompose_point(&self, y: &[Rat]) -> Result<(Vec<Rat>, Rat)> {
        if y.len() != self.n as usize {
            return Err(Error::Invalid("point length must be n"));
        }
        if let Some(row) = self.cone.hcone().violated_row_rat(y) {
            return Err(Error::NotAMember { row });
        }
        let t = y[0].clone();
        let yprime: Vec<Rat> = y
            .iter()
            .enumerate()
            .map(|(pos, v)| v - &t * Rat::from_integer(Int::from(pos as i64 + 1)))
            .collect();
        debug_assert!(self.cone.hcone().contains_rat(&yprime));
        Ok((yprime, t))
    }

    /// The semigroup of an integer point whose last coordinate is coprime to
    /// `n`: its Apéry set at `n` is `{i q - n y_i}` with `q = y_n`.
    pub fn point_to_semigroup(&self, y: &[i64]) -> Result<NumericalSemigroup> {
        let nn = self.n as usize;
        if y.len() != nn {
            return Err(Error::Invalid("point length must be n"));
        }
        let ints: Vec<Int> = y.iter().map(|&v| Int::from(v)).collect();
        if let Some(row) = self
            .cone
            .hcone()
            .rows()
            .iter()
            .position(|r| crate::linalg::dot_int(r, &ints).is_negative())
        {
            return Err(Error::NotAMember { row });
        }
        let q = y[nn - 1];
        if q <= 0 || num_integer::gcd(q as u64, self.n) != 1 {
            return Err(Error::NotCoprime {
                q: q.max(0) as u64,
                n: self.n,
            });
        }
        let mut gens = vec![self.n, q as u64];
        for i in 1..nn {
            let a = i as i64 * q - self.n as i64 * y[i - 1];
            debug_assert!(a >= 1, "cone membership forces positive entries");
            gens.push(a as u64);
        }
        let s = NumericalSemigroup::new(&gens)?;
        // the listed values must be the Apéry set of the result
        debug_assert_eq!(
            {
                let mut ap = s.apery(self.n).expect("n lies in the semigroup").elements;
                ap.sort_unstable();
                ap
            },
            {
                let mut expected: Vec<u64> = gens[2..].to_vec();
                expected.push(0);
                expected.sort_unstable();
                expected
            }
        );
        Ok(s)
    }

    /// The linear bijection from `O'_n = O_n intersect {y_1 = 0}` onto
    /// `C(Z_n)`: `x_i = (i y_n - n y_i) / n` with `y_1 = 0`.
    pub fn map_to_group_cone(&self, y: &[Rat]) -> Result<Vec<Rat>> {
        let nn = self.n as usize;
        if y.len() != nn {
            return Err(Error::Invalid("point length must be n"));
        }
        if !y[0].is_zero() {
            return Err(Error::NonzeroFirstCoordinate);
        }
        if let Some(row) = self.cone.hcone().violated_row_rat(y) {
            return Err(Error::NotAMember { row });
        }
        let n_rat = Rat::from_integer(Int::from(self.n));
        Ok((1..nn)
            .map(|i| {
                let scaled = Rat::from_integer(Int::from(i as i64)) * &y[nn - 1]
                    - n_rat.clone() * &y[i - 1];
                scaled / n_rat.clone()
            })
            .collect())
    }

    /// Inverse of [`Self::map_to_group_cone`]: `y_n = n x_1`, and
    /// `y_i = i x_1 - x_i` for `2 <= i <= n-1`, with `y_1 = 0`.
    pub fn map_from_group_cone(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        let nn = self.n as usize;
        if x.len() + 1 != nn {
            return Err(Error::Invalid("point length must be n - 1"));
        }
        let mut y = vec![Rat::zero(); nn];
        for i in 2..nn {
            y[i - 1] = Rat::from_integer(Int::from(i as i64)) * &x[0] - &x[i - 1];
        }
        y[nn - 1] = Rat::from_integer(Int::from(self.n)) * &x[0];
        Ok(y)
    }

    /// Image of an integer ray direction under the map to the group cone,
    /// reduced to a primitive vector.
    pub fn map_ray_direction(&self, r: &[Int]) -> Result<Vec<Int>> {
        let nn = self.n as usize;
        if r.len() != nn || !r[0].is_zero() {
            return Err(Error::NonzeroFirstCoordinate);
        }
        let image: Vec<Int> = (1..nn)
            .map(|i| Int::from(i as i64) * &r[nn - 1] - Int::from(self.n) * &r[i - 1])
            .collect();
        Ok(primitive(&image))
    }

    /// Number of integer points of `O_n` on the slice `{y_n = q}`.
    ///
    /// Coordinate ranges come from the ray description (every ray has a
    /// positive last coordinate, so the slice is a polytope); the remaining
    /// rows prune a lexicographic scan. For `gcd(n, q) = 1` this equals the
    /// number of oversemigroups of the semigroup generated by `n` and `q`.
    pub fn slice_count(&self, q: u64, guard: usize) -> Result<u64> {
        let nn = self.n as usize;
        let q_rat = Rat::from_integer(Int::from(q));
        let mut lo = vec![Rat::zero(); nn - 1];
        let mut hi = vec![Rat::zero(); nn - 1];
        let mut first = true;
        for ray in self.cone.rays() {
            let last = &ray.direction[nn - 1];
            if last.is_zero() {
                return Err(Error::Invalid("slice is unbounded"));
            }
            for i in 0..nn - 1 {
                let v = Rat::new(ray.direction[i].clone() * q_rat.numer(), last.clone());
                if first || v < lo[i] {
                    lo[i] = v.clone();
                }
                if first || v > hi[i] {
                    hi[i] = v;
                }
            }
            first = false;
        }
        let lo: Vec<i64> = lo
            .iter()
            .map(|v| i64::try_from(&v.ceil().to_integer()).expect("desk-scale bound"))
            .collect();
        let hi: Vec<i64> = hi
            .iter()
            .map(|v| i64::try_from(&v.floor().to_integer()).expect("desk-scale bound"))
            .collect();
        let mut budget: u128 = 1;
        for (l, h) in lo.iter().zip(&hi) {
            budget = budget.saturating_mul((h - l + 1).max(0) as u128);
        }
        if budget > guard as u128 {
            return Err(Error::TooLarge {
                what: "slice enumeration",
                limit: guard,
            });
        }

        // integer rows with their last referenced coordinate below n
        let rows: Vec<(Vec<i64>, i64, usize)> = self
            .cone
            .hcone()
            .rows()
            .iter()
            .map(|r| {
                let coeffs: Vec<i64> = r[..nn - 1]
                    .iter()
                    .map(|c| i64::try_from(c).expect("desk-scale rows"))
                    .collect();
                let qcoeff = i64::try_from(&r[nn - 1]).expect("desk-scale rows") * q as i64;
                let last = coeffs.iter().rposition(|&v| v != 0).unwrap_or(0);
                (coeffs, qcoeff, last)
            })
            .collect();
        let mut by_depth: Vec<Vec<usize>> = vec![Vec::new(); nn - 1];
        for (i, row) in rows.iter().enumerate() {
            by_depth[row.2].push(i);
        }

        let mut y = vec![0i64; nn - 1];
        let mut count = 0u64;
        fn rec(
            depth: usize,
            dim: usize,
            lo: &[i64],
            hi: &[i64],
            y: &mut Vec<i64>,
            rows: &[(Vec<i64>, i64, usize)],
            by_depth: &[Vec<usize>],
            count: &mut u64,
        ) {
            if depth == dim {
                *count += 1;
                return;
            }
            for v in lo[depth]..=hi[depth] {
                y[depth] = v;
                let ok = by_depth[depth].iter().all(|&i| {
                    let (coeffs, qc, _) = &rows[i];
                    coeffs.iter().zip(y.iter()).map(|(a, b)| a * b).sum::<i64>() + qc >= 0
                });
                if ok {
                    rec(depth + 1, dim, lo, hi, y, rows, by_depth, count);
                }
            }
        }
        rec(0, nn - 1, &lo, &hi, &mut y, &rows, &by_depth, &mut count);
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, rat, to_rat_vec};
    use crate::numsgp::{enumerate_oversemigroups, kunz_poset_of};

    fn dirs(oc: &OversemigroupCone) -> Vec<Vec<Int>> {
        oc.cone().rays().iter().map(|r| r.direction.clone()).collect()
    }

    #[test]
    fn o2_rays() {
        let oc = build_oversemigroup_cone(2).unwrap();
        assert_eq!(dirs(&oc), alloc::vec![int_vec(&[0, 1]), int_vec(&[1, 2])]);
    }

    #[test]
    fn o3_rays_include_inverse_images() {
        let oc = build_oversemigroup_cone(3).unwrap();
        // (1,2,3) plus the preimages of the C(Z_3) rays (1,2) and (2,1)
        assert_eq!(
            dirs(&oc),
            alloc::vec![int_vec(&[0, 0, 1]), int_vec(&[0, 1, 2]), int_vec(&[1, 2, 3])]
        );
    }

    #[test]
    fn o6_ray_census_matches_published_list() {
        let oc = build_oversemigroup_cone(6).unwrap();
        let mut expected: Vec<Vec<Int>> = [
            [0, 1, 1, 2, 2, 3],
            [0, 0, 1, 1, 1, 2],
            [0, 1, 2, 2, 3, 4],
            [0, 0, 0, 0, 0, 1],
            [0, 1, 2, 3, 4, 5],
            [0, 0, 0, 0, 1, 2],
            [0, 0, 1, 2, 3, 4],
            [0, 0, 0, 1, 1, 2],
            [0, 1, 1, 2, 3, 4],
            [0, 0, 1, 1, 2, 3],
            [0, 0, 0, 1, 2, 3],
        ]
        .iter()
        .map(|r| int_vec(&r.map(i64::from)))
        .collect();
        expected.push(int_vec(&[1, 2, 3, 4, 5, 6]));
        expected.sort();
        assert_eq!(dirs(&oc), expected);
    }

    #[test]
    fn lambda_ray_is_unique_with_positive_first_coordinate() {
        for n in 2..=6 {
            let oc = build_oversemigroup_cone(n).unwrap();
            let positive: Vec<Vec<Int>> = dirs(&oc)
                .into_iter()
                .filter(|d| d[0].is_positive())
                .collect();
            let want: Vec<Int> = (1..=n as i64).map(Int::from).collect();
            assert_eq!(positive, alloc::vec![want]);
        }
    }

    #[test]
    fn decomposition_is_an_exact_section() {
        let oc = build_oversemigroup_cone(6).unwrap();
        let y = to_rat_vec(&int_vec(&[1, 3, 4, 6, 7, 9]));
        let (yp, t) = oc.decompose_point(&y).unwrap();
        assert_eq!(t, rat(1, 1));
        assert_eq!(yp, to_rat_vec(&int_vec(&[0, 1, 1, 2, 2, 3])));
        // re-adding restores bit for bit
        let back: Vec<Rat> = yp
            .iter()
            .enumerate()
            .map(|(pos, v)| v + &t * rat(pos as i64 + 1, 1))
            .collect();
        assert_eq!(back, y);

        let whole = to_rat_vec(&int_vec(&[1, 2, 3, 4, 5, 6]));
        let (yp, t) = oc.decompose_point(&whole).unwrap();
        assert!(yp.iter().all(Zero::is_zero));
        assert_eq!(t, rat(1, 1));

        let flat = to_rat_vec(&int_vec(&[0, 1, 1, 2, 2, 3]));
        let (_, t) = oc.decompose_point(&flat).unwrap();
        assert_eq!(t, rat(0, 1));
    }

    #[test]
    fn decomposed_points_give_the_same_semigroup() {
        let oc = build_oversemigroup_cone(6).unwrap();
        let y = [1i64, 3, 5, 7, 9, 11];
        let s = oc.point_to_semigroup(&y).unwrap();
        let yp = [0i64, 1, 2, 3, 4, 5];
        let sp = oc.point_to_semigroup(&yp).unwrap();
        assert_eq!(s, sp);
        // y_n in Ap(S; n) exactly when y_1 = 0
        assert!(sp.apery(6).unwrap().elements.contains(&5));
        assert!(!s.apery(6).unwrap().elements.contains(&11));
    }

    #[test]
    fn point_to_semigroup_examples() {
        let oc = build_oversemigroup_cone(6).unwrap();
        let s = oc.point_to_semigroup(&[0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(s.generators(), &[1]);

        let oc3 = build_oversemigroup_cone(3).unwrap();
        let s = oc3.point_to_semigroup(&[0, 0, 5]).unwrap();
        assert_eq!(s.generators(), &[3, 5]);

        // the slice point of N at q = 5, and the Apery point of <5, 6>
        let s = oc.point_to_semigroup(&[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(s.generators(), &[1]);
        for g in [5u64, 6] {
            assert!(s.contains(g));
        }
        let s = oc.point_to_semigroup(&[0, 0, 0, 0, 0, 5]).unwrap();
        assert_eq!(s.generators(), &[5, 6]);

        assert!(matches!(
            oc.point_to_semigroup(&[0, 0, 0, 0, 0, 2]),
            Err(Error::NotCoprime { q: 2, n: 6 })
        ));
    }

    #[test]
    fn map_sends_published_rays_to_group_cone_rays() {
        let oc = build_oversemigroup_cone(6).unwrap();
        let img = oc
            .map_ray_direction(&int_vec(&[0, 0, 0, 0, 0, 1]))
            .unwrap();
        assert_eq!(img, int_vec(&[1, 2, 3, 4, 5]));
        let img = oc.map_ray_direction(&int_vec(&[0, 1, 2, 3, 4, 5])).unwrap();
        assert_eq!(img, int_vec(&[5, 4, 3, 2, 1]));
        // zero maps to zero
        let zero = alloc::vec![rat(0, 1); 6];
        let img = oc.map_to_group_cone(&zero).unwrap();
        assert!(img.iter().all(Zero::is_zero));
    }

    #[test]
    fn map_is_a_bijection_on_rays() {
        use crate::abelian::make_group;
        use crate::groupcone::build_group_cone;
        for n in 2..=7u64 {
            let oc = build_oversemigroup_cone(n).unwrap();
            let gc = build_group_cone(make_group(&[n]).unwrap()).unwrap();
            let mut images: Vec<Vec<Int>> = Vec::new();
            for ray in oc.cone().rays() {
                if !ray.direction[0].is_zero() {
                    continue;
                }
                let img = oc.map_ray_direction(&ray.direction).unwrap();
                // inverse returns the original direction
                let img_rat = to_rat_vec(&img);
                let back = oc.map_from_group_cone(&img_rat).unwrap();
                let back_primitive = crate::linalg::primitive_from_rat(&back);
                assert_eq!(back_primitive, primitive(&ray.direction));
                images.push(img);
            }
            images.sort();
            let expected: Vec<Vec<Int>> = gc
                .cone()
                .rays()
                .iter()
                .map(|r| r.direction.clone())
                .collect();
            assert_eq!(images, expected);
        }
    }

    #[test]
    fn group_cone_rows_pull_back_to_overcone_rows() {
        use crate::abelian::make_group;
        use crate::groupcone::build_group_cone;
        for n in 3..=6u64 {
            let nn = n as usize;
            let oc = build_oversemigroup_cone(n).unwrap();
            let gc = build_group_cone(make_group(&[n]).unwrap()).unwrap();
            for (row, label) in gc
                .cone()
                .hcone()
                .rows()
                .iter()
                .zip(gc.cone().hcone().labels())
            {
                // substitute x_i = (i y_n - n y_i) / n and scale by n
                let mut pulled = alloc::vec![Int::zero(); nn];
                for (pos, c) in row.iter().enumerate() {
                    let i = pos + 1;
                    pulled[nn - 1] += c * Int::from(i as i64);
                    pulled[pos] -= c * Int::from(n);
                }
                let pulled = primitive(&pulled);
                let found = oc.cone().hcone().rows().contains(&pulled);
                assert!(found, "pullback of {label:?} missing for n={n}");
            }
        }
    }

    #[test]
    fn slice_counts_match_oversemigroup_counts() {
        let oc3 = build_oversemigroup_cone(3).unwrap();
        assert_eq!(oc3.slice_count(4, DEFAULT_SLICE_GUARD).unwrap(), 4);
        assert_eq!(oc3.slice_count(1, DEFAULT_SLICE_GUARD).unwrap(), 1);
        let oc2 = build_oversemigroup_cone(2).unwrap();
        assert_eq!(oc2.slice_count(3, DEFAULT_SLICE_GUARD).unwrap(), 2);
        // spot checks against the enumeration oracle
        for (n, q) in [(2u64, 5u64), (3, 5), (3, 7), (4, 5), (5, 6)] {
            let oc = build_oversemigroup_cone(n).unwrap();
            let s = NumericalSemigroup::new(&[n, q]).unwrap();
            let over = enumerate_oversemigroups(&s, 64).unwrap();
            assert_eq!(
                oc.slice_count(q, DEFAULT_SLICE_GUARD).unwrap(),
                over.len() as u64,
                "n={n} q={q}"
            );
        }
    }

    #[test]
    fn semigroup_points_map_to_faces_with_relabeled_posets() {
        // a smoke test of the poset relabeling; the acceptance suite runs the
        // randomized version
        use crate::abelian::make_group;
        use crate::groupcone::build_group_cone;
        let n = 4u64;
        let oc = build_oversemigroup_cone(n).unwrap();
        let gc = build_group_cone(make_group(&[n]).unwrap()).unwrap();
        let s = NumericalSemigroup::new(&[4, 7]).unwrap();
        let apery = s.apery(n).unwrap();
        let q = 7u64;
        let y: Vec<i64> = (1..=n)
            .map(|i| {
                let cls = ((i * q) % n) as usize;
                ((i * q - apery.elements[cls]) / n) as i64
            })
            .collect();
        assert_eq!(y[0], 0);
        let y_rat = to_rat_vec(&int_vec(&y));
        let x = oc.map_to_group_cone(&y_rat).unwrap();
        let face = gc.cone().minimal_face_containing(&x).unwrap();
        let pair = gc.face_to_pair(&face).unwrap();
        let a_poset = kunz_poset_of(&s, n).unwrap();
        let perm: Vec<usize> = (0..n as usize).map(|e| (e * q as usize) % n as usize).collect();
        let relabeled = a_poset.relabeled(&perm).unwrap();
        assert_eq!(relabeled, pair.poset);
    }
}
