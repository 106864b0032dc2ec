//! Triangulations, cross-section volumes, leading quasipolynomial
//! coefficients, lattice-point counts, and exact quasipolynomial fitting.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::abelian::make_group;
use crate::error::{Error, Result};
use crate::groupcone::build_group_cone;
use crate::linalg::{det_int, det_rat, dot_int, kernel_basis, rank_int, to_rat_vec, Int, Rat};
use crate::numsgp::walk_strict_kunz_points;

/// Default bound on `g` for the lattice-point counters.
pub const DEFAULT_COUNT_GUARD: u64 = 4096;
/// Scale guard for the leading-coefficient computations.
pub const MAX_LEADING_M: u64 = 8;

/// A full-dimensional simplicial cone spanned by linearly independent
/// primitive rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialCone {
    pub rays: Vec<Vec<Int>>,
}

impl SimplicialCone {
    pub fn determinant(&self) -> Int {
        det_int(&self.rays)
    }
}

/// Placing triangulation with rays inserted in lexicographic order.
pub fn triangulate_cone(rays: &[Vec<Int>]) -> Result<Vec<SimplicialCone>> {
    let mut sorted: Vec<Vec<Int>> = rays.to_vec();
    sorted.sort();
    placing_triangulation(&sorted)
}

/// Placing triangulation that consumes the rays in the order given; used to
/// cross-check order independence of triangulation invariants.
pub fn placing_triangulation(rays: &[Vec<Int>]) -> Result<Vec<SimplicialCone>> {
    if rays.is_empty() {
        return Err(Error::DegenerateRays);
    }
    let d = rays[0].len();
    if rays.iter().any(|r| r.len() != d) {
        return Err(Error::Invalid("rays of mixed dimension"));
    }
    if rank_int(rays) != d {
        return Err(Error::DegenerateRays);
    }
    if d == 1 {
        return Ok(vec![SimplicialCone {
            rays: vec![rays[0].clone()],
        }]);
    }

    // initial simplex: first d linearly independent rays
    let mut init: Vec<usize> = Vec::new();
    let mut init_rows: Vec<Vec<Int>> = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        if init.len() == d {
            break;
        }
        init_rows.push(r.clone());
        if rank_int(&init_rows) == init.len() + 1 {
            init.push(i);
        } else {
            init_rows.pop();
        }
    }
    let mut simplices: Vec<Vec<usize>> = vec![init.clone()];

    for (p, pray) in rays.iter().enumerate() {
        if init.contains(&p) {
            continue;
        }
        // boundary faces appear in exactly one simplex
        let mut face_owner: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (sid, simplex) in simplices.iter().enumerate() {
            for skip in 0..d {
                let mut face: Vec<usize> = simplex.clone();
                face.remove(skip);
                face_owner.entry(face).or_default().push(sid);
            }
        }
        let mut additions: Vec<Vec<usize>> = Vec::new();
        for (face, owners) in &face_owner {
            if owners.len() != 1 {
                continue;
            }
            let simplex = &simplices[owners[0]];
            let opposite = simplex
                .iter()
                .copied()
                .find(|i| !face.contains(i))
                .expect("face omits exactly one vertex");
            let face_rows: Vec<Vec<Rat>> =
                face.iter().map(|&i| to_rat_vec(&rays[i])).collect();
            let normals = kernel_basis(&face_rows, d);
            debug_assert_eq!(normals.len(), 1);
            let mut w = normals.into_iter().next().expect("facet hyperplane normal");
            if dot_int(&w, &rays[opposite]).is_positive() {
                for c in &mut w {
                    *c = -c.clone();
                }
            }
            if dot_int(&w, pray).is_positive() {
                let mut s = face.clone();
                s.push(p);
                s.sort_unstable();
                additions.push(s);
            }
        }
        simplices.extend(additions);
    }

    Ok(simplices
        .into_iter()
        .map(|idx| SimplicialCone {
            rays: idx.iter().map(|&i| rays[i].clone()).collect(),
        })
        .collect())
}

fn l1_norm(v: &[Int]) -> Int {
    v.iter().map(|c| c.abs()).sum()
}

fn factorial(n: usize) -> Int {
    let mut f = Int::one();
    for k in 2..=n {
        f *= Int::from(k as u64);
    }
    f
}

/// Relative volume of the cross-section of a simplicial cone by the
/// hyperplane where the coordinates sum to 1:
/// `|det(r_1, ..., r_d)| / ((d-1)! * prod_i |r_i|_1)`.
pub fn cross_section_volume(t: &SimplicialCone) -> Rat {
    let d = t.rays.len();
    let det = t.determinant().abs();
    let mut denom = factorial(d - 1);
    for r in &t.rays {
        denom *= l1_norm(r);
    }
    Rat::new(det, denom)
}

fn group_cone_ray_dirs(m: u64) -> Result<Vec<Vec<Int>>> {
    let gc = build_group_cone(make_group(&[m])?)?;
    Ok(gc.cone().rays().iter().map(|r| r.direction.clone()).collect())
}

fn check_leading_scale(m: u64) -> Result<()> {
    if !(3..=MAX_LEADING_M).contains(&m) {
        return Err(Error::TooLarge {
            what: "leading coefficient computation",
            limit: MAX_LEADING_M as usize,
        });
    }
    Ok(())
}

/// Sum of cross-section volumes over a triangulation of the group cone: the
/// top coefficient shared by the slice counter and the multiplicity-genus
/// counter.
pub fn leading_gamma(m: u64) -> Result<Rat> {
    check_leading_scale(m)?;
    let rays = group_cone_ray_dirs(m)?;
    let tri = triangulate_cone(&rays)?;
    Ok(gamma_from_triangulation(&tri))
}

pub fn gamma_from_triangulation(tri: &[SimplicialCone]) -> Rat {
    tri.iter().map(cross_section_volume).sum()
}

/// Top coefficient of the oversemigroup counting quasipolynomial, computed
/// from a triangulation of the group cone two ways: the per-simplex product
/// formula, and the pyramid factor chain through the `x_1 = 1/m` slice. Both
/// routes must agree; the factorial sandwich bound is asserted as well.
pub fn leading_lambda(m: u64) -> Result<Rat> {
    check_leading_scale(m)?;
    let rays = group_cone_ray_dirs(m)?;
    for r in &rays {
        if r[0].is_zero() {
            return Err(Error::ZeroFirstRayCoordinate);
        }
    }
    let tri = triangulate_cone(&rays)?;
    let by_formula = lambda_by_formula(m, &tri);
    let by_pyramid = lambda_by_pyramid(m, &tri);
    assert_eq!(by_formula, by_pyramid, "volume normalization mismatch");
    let lower = Rat::new(Int::one(), factorial(m as usize - 1) * factorial(m as usize));
    let upper = Rat::new(
        Int::one(),
        Int::from(m - 1) * factorial(m as usize),
    );
    assert!(lower <= by_formula && by_formula <= upper, "sandwich violated");
    Ok(by_formula)
}

/// `1/(m^{m-1}(m-1)) * sum_T V(T) * prod_i |r_i|_1 / r_{i,1}`.
pub fn lambda_by_formula(m: u64, tri: &[SimplicialCone]) -> Rat {
    let mm = m as usize;
    let mut total = Rat::zero();
    for t in tri {
        let mut term = cross_section_volume(t);
        for r in &t.rays {
            term *= Rat::new(l1_norm(r), r[0].clone());
        }
        total += term;
    }
    let mut scale = Int::from(m - 1);
    for _ in 0..(mm - 1) {
        scale *= Int::from(m);
    }
    total / Rat::from_integer(scale)
}

/// Pyramid route: `lambda = vol(C intersect {x_1 = 1/m}) / (m (m-1))`, the
/// slice volume computed per simplex from the projected edge determinant.
pub fn lambda_by_pyramid(m: u64, tri: &[SimplicialCone]) -> Rat {
    let d = tri.first().map_or(0, |t| t.rays.len());
    let mut slice_volume = Rat::zero();
    for t in tri {
        // vertices r_i / (m r_{i,1}) all lie on x_1 = 1/m
        let verts: Vec<Vec<Rat>> = t
            .rays
            .iter()
            .map(|r| {
                let scale = Rat::new(Int::one(), Int::from(m) * &r[0]);
                r.iter().map(|c| Rat::from_integer(c.clone()) * &scale).collect()
            })
            .collect();
        // edge vectors with the first coordinate dropped
        let edges: Vec<Vec<Rat>> = verts[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&verts[0])
                    .skip(1)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        slice_volume += det_rat(&edges).abs() / Rat::from_integer(factorial(d - 1));
    }
    slice_volume / Rat::from_integer(Int::from(m) * Int::from(m - 1))
}

/// Number of integer points of the group cone on the hyperplane where the
/// coordinates sum to `g`.
pub fn count_group_cone_points(m: u64, g: u64, guard: u64) -> Result<u64> {
    if !(2..=6).contains(&m) {
        return Err(Error::TooLarge {
            what: "group cone slice count",
            limit: 6,
        });
    }
    if g > guard {
        return Err(Error::TooLarge {
            what: "slice height",
            limit: guard as usize,
        });
    }
    let mm = m as usize;
    let dim = mm - 1;
    // subadditivity triples (a, b, s): x_a + x_b >= x_s, 1-based
    let group = make_group(&[m])?;
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    for a in 1..mm {
        for b in a..mm {
            let s = group.add(a, b);
            if s != 0 {
                triples.push((a, b, s));
            }
        }
    }
    let mut by_depth: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); mm];
    for &(a, b, s) in &triples {
        by_depth[a.max(b).max(s)].push((a, b, s));
    }
    let mut x = vec![0u64; mm];
    let mut count = 0u64;
    fn rec(
        depth: usize,
        dim: usize,
        g: u64,
        sum: u64,
        x: &mut Vec<u64>,
        by_depth: &[Vec<(usize, usize, usize)>],
        count: &mut u64,
    ) {
        if depth == dim {
            x[dim] = g - sum;
            if by_depth[dim]
                .iter()
                .all(|&(a, b, s)| x[a] + x[b] >= x[s])
            {
                *count += 1;
            }
            return;
        }
        for v in 0..=(g - sum) {
            x[depth] = v;
            if by_depth[depth]
                .iter()
                .all(|&(a, b, s)| x[a] + x[b] >= x[s])
            {
                rec(depth + 1, dim, g, sum + v, x, by_depth, count);
            }
        }
        x[depth] = 0;
    }
    if dim == 1 {
        return Ok(1); // x_1 = g always satisfies the empty constraint pool
    }
    rec(1, dim, g, 0, &mut x, &by_depth, &mut count);
    Ok(count)
}

/// Number of numerical semigroups with multiplicity `m` and genus `g`,
/// counted as integer points of the strict Kunz polyhedron with coordinate
/// sum `g`.
pub fn count_multiplicity_genus(m: u64, g: u64, guard: u64) -> Result<u64> {
    if !(2..=6).contains(&m) {
        return Err(Error::TooLarge {
            what: "multiplicity-genus count",
            limit: 6,
        });
    }
    if g > guard {
        return Err(Error::TooLarge {
            what: "genus",
            limit: guard as usize,
        });
    }
    let mut count = 0u64;
    walk_strict_kunz_points(m, g, |_| count += 1)?;
    Ok(count)
}

/// A quasipolynomial of fixed degree and period with exact rational
/// coefficient rows, one per residue class, in ascending powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quasipolynomial {
    degree: usize,
    period: u64,
    coeffs: Vec<Vec<Rat>>,
}

impl Quasipolynomial {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Coefficient rows by residue class, ascending powers.
    pub fn coefficient_rows(&self) -> &[Vec<Rat>] {
        &self.coeffs
    }

    pub fn eval(&self, g: u64) -> Rat {
        let row = &self.coeffs[(g % self.period) as usize];
        let mut acc = Rat::zero();
        let mut power = Rat::one();
        let gr = Rat::from_integer(Int::from(g));
        for c in row {
            acc += c * &power;
            power *= &gr;
        }
        acc
    }

    /// Top coefficient per residue class.
    pub fn leading_row(&self) -> Vec<Rat> {
        self.coeffs.iter().map(|row| row[self.degree].clone()).collect()
    }

    /// The leading coefficient when it is the same in every residue class.
    pub fn leading_constant(&self) -> Option<Rat> {
        let row = self.leading_row();
        if row.iter().all(|c| *c == row[0]) {
            Some(row[0].clone())
        } else {
            None
        }
    }

    /// Smallest divisor of the period for which the coefficient rows repeat.
    pub fn minimal_period(&self) -> u64 {
        'outer: for p in 1..=self.period {
            if self.period % p != 0 {
                continue;
            }
            for r in 0..self.period {
                if self.coeffs[r as usize] != self.coeffs[(r % p) as usize] {
                    continue 'outer;
                }
            }
            return p;
        }
        self.period
    }
}

/// Exact per-residue polynomial interpolation. Each residue class needs
/// `degree + 2` samples: `degree + 1` interpolation nodes plus at least one
/// held-out sample, all of which must match the fit exactly.
pub fn fit_quasipolynomial(
    samples: &[(u64, Int)],
    degree: usize,
    period: u64,
) -> Result<Quasipolynomial> {
    if period == 0 {
        return Err(Error::Invalid("period must be positive"));
    }
    let mut by_residue: Vec<Vec<(u64, Int)>> = vec![Vec::new(); period as usize];
    for (g, v) in samples {
        by_residue[(g % period) as usize].push((*g, v.clone()));
    }
    let mut coeffs = Vec::with_capacity(period as usize);
    for (r, class) in by_residue.iter_mut().enumerate() {
        class.sort();
        class.dedup();
        if class.len() < degree + 2 {
            return Err(Error::InsufficientSamples {
                residue: r as u64,
                needed: degree + 2,
            });
        }
        let nodes = &class[..degree + 1];
        let poly = lagrange(nodes);
        debug_assert_eq!(poly.len(), degree + 1);
        for (g, v) in &class[degree + 1..] {
            if eval_poly(&poly, *g) != Rat::from_integer(v.clone()) {
                return Err(Error::FitMismatch { witness: *g });
            }
        }
        coeffs.push(poly);
    }
    Ok(Quasipolynomial {
        degree,
        period,
        coeffs,
    })
}

fn eval_poly(poly: &[Rat], g: u64) -> Rat {
    let gr = Rat::from_integer(Int::from(g));
    let mut acc = Rat::zero();
    let mut power = Rat::one();
    for c in poly {
        acc += c * &power;
        power *= &gr;
    }
    acc
}

/// Lagrange interpolation through the nodes, ascending coefficients.
fn lagrange(nodes: &[(u64, Int)]) -> Vec<Rat> {
    let k = nodes.len();
    let mut acc = vec![Rat::zero(); k];
    for (i, (gi, vi)) in nodes.iter().enumerate() {
        // basis polynomial prod_{j != i} (X - g_j) / (g_i - g_j)
        let mut basis = vec![Rat::zero(); k];
        basis[0] = Rat::one();
        let mut deg = 0usize;
        let mut denom = Rat::one();
        for (j, (gj, _)) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            let c = Rat::from_integer(Int::from(*gj));
            // multiply in place by (X - g_j), highest coefficient first
            for t in (0..=deg + 1).rev() {
                let x_part = if t == 0 {
                    Rat::zero()
                } else {
                    basis[t - 1].clone()
                };
                let c_part = if t <= deg {
                    &basis[t] * &c
                } else {
                    Rat::zero()
                };
                basis[t] = x_part - c_part;
            }
            deg += 1;
            denom *= Rat::from_integer(Int::from(*gi as i64 - *gj as i64));
        }
        let scale = Rat::from_integer(vi.clone()) / denom;
        for (a, b) in acc.iter_mut().zip(&basis) {
            *a += b * &scale;
        }
    }
    acc
}
