//! Exact dense linear algebra over arbitrary-precision integers and rationals.
//!
//! Everything here is desk scale: matrices have at most a few dozen rows and
//! columns, so plain Gaussian elimination with `BigRational` entries and a
//! fraction-free Bareiss determinant are the right tools.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Int::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn dot_int_rat(a: &[Int], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += Rat::from_integer(x.clone()) * y;
    }
    acc
}

/// Divides an integer vector by the gcd of its entries, keeping the sign
/// pattern. The zero vector is returned unchanged.
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let mut g = Int::zero();
    for x in v {
        g = num_integer::gcd(g, x.clone());
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators of a rational vector and reduces to a primitive
/// integer vector.
pub fn primitive_from_rat(v: &[Rat]) -> Vec<Int> {
    let mut lcm = Int::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(&ints)
}

/// Row echelon rank of a rational matrix.
pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].clone();
        for r in (rank + 1)..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &inv;
            for c in col..cols {
                let sub = &factor * &m[rank][c];
                m[r][c] -= sub;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

pub fn rank_int(rows: &[Vec<Int>]) -> usize {
    let rat_rows: Vec<Vec<Rat>> = rows.iter().map(|r| to_rat_vec(r)).collect();
    rank_rat(&rat_rows)
}

/// Bareiss fraction-free determinant of a square integer matrix.
pub fn det_int(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut sign = 1i64;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = ((k + 1)..n).find(|&r| !a[r][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn det_rat(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col].clone();
        let inv = a[col][col].clone();
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &inv;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Basis of the right kernel {x : Ax = 0} of a rational matrix, as primitive
/// integer vectors in a deterministic order (one per free column).
pub fn kernel_basis(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Int>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].clone();
        for c in col..cols {
            m[rank][c] = &m[rank][c] / &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..cols {
                    let sub = &factor * &m[rank][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivot_col_of_row.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(primitive_from_rat(&v));
    }
    basis
}

/// Solves a square rational system `Ax = b`. Returns `None` when `A` is
/// singular.
pub fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    debug_assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return None;
        };
        m.swap(col, pivot);
        let inv = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n {
                    let sub = &factor * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Smith normal form of an integer matrix, tracking only the right transform.
///
/// Returns `(d, v)` where `d` holds the `cols` diagonal entries (non-negative,
/// each dividing the next) of `D = U A V` and `v` is the unimodular `cols x
/// cols` right transform. Row operations are discarded.
pub fn smith_normal_form(a: &[Vec<i64>], cols: usize) -> (Vec<i64>, Vec<Vec<i64>>) {
    let rows = a.len();
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut v: Vec<Vec<i64>> = (0..cols)
        .map(|i| (0..cols).map(|j| i64::from(i == j)).collect())
        .collect();
    let steps = rows.min(cols);

    let col_add = |m: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, dst: usize, src: usize, q: i64| {
        for row in m.iter_mut() {
            row[dst] -= q * row[src];
        }
        for row in v.iter_mut() {
            row[dst] -= q * row[src];
        }
    };
    let col_swap = |m: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };

    let mut t = 0;
    while t < steps {
        // Locate the smallest nonzero entry in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        if bj != t {
            col_swap(&mut m, &mut v, t, bj);
        }

        let mut clean = true;
        for i in (t + 1)..rows {
            if m[i][t] != 0 {
                let q = m[i][t].div_euclid(m[t][t]);
                for j in t..cols {
                    m[i][j] -= q * m[t][j];
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
        }
        for j in (t + 1)..cols {
            if m[t][j] != 0 {
                let q = m[t][j].div_euclid(m[t][t]);
                col_add(&mut m, &mut v, j, t, q);
                if m[t][j] != 0 {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // Enforce divisibility of the remaining block by the pivot.
        let pivot = m[t][t];
        let mut fixed = true;
        'outer: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if m[i][j] % pivot != 0 {
                    for c in t..cols {
                        m[t][c] += m[i][c];
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }

    let mut d: Vec<i64> = (0..cols)
        .map(|i| if i < rows { m[i][i].abs() } else { 0 })
        .collect();
    // Sign normalization is free since only |d| matters downstream, but keep
    // the right transform consistent by flipping columns.
    for (j, entry) in d.iter_mut().enumerate() {
        if j < rows && m[j][j] < 0 {
            for row in v.iter_mut() {
                row[j] = -row[j];
            }
        }
        *entry = entry.abs();
    }
    (d, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_rows(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter().map(|r| int_vec(r)).collect()
    }

    #[test]
    fn primitive_reduces_gcd() {
        assert_eq!(primitive(&int_vec(&[2, 4, 6])), int_vec(&[1, 2, 3]));
        assert_eq!(primitive(&int_vec(&[0, 0])), int_vec(&[0, 0]));
        assert_eq!(primitive(&int_vec(&[-3, 6])), int_vec(&[-1, 2]));
    }

    #[test]
    fn bareiss_determinant() {
        let m = int_rows(&[&[1, 1, 1], &[0, 2, 2], &[1, 1, 3]]);
        assert_eq!(det_int(&m), int(4));
        let m = int_rows(&[&[1, 1, 3], &[0, 2, 2], &[1, 1, 1]]);
        assert_eq!(det_int(&m), int(-4));
        let singular = int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(det_int(&singular), int(0));
    }

    #[test]
    fn rank_and_kernel() {
        let rows = int_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank_int(&rows), 2);
        let rat_rows: Vec<Vec<Rat>> = rows.iter().map(|r| to_rat_vec(r)).collect();
        let kb = kernel_basis(&rat_rows, 3);
        assert_eq!(kb.len(), 1);
        for row in &rows {
            assert!(dot_int(row, &kb[0]).is_zero());
        }
    }

    #[test]
    fn solve_small_system() {
        let a: Vec<Vec<Rat>> = alloc::vec![
            alloc::vec![rat(2, 1), rat(1, 1)],
            alloc::vec![rat(1, 1), rat(-1, 1)],
        ];
        let b = alloc::vec![rat(5, 1), rat(1, 1)];
        let x = solve_square(&a, &b).unwrap();
        assert_eq!(x, alloc::vec![rat(2, 1), rat(1, 1)]);
    }

    #[test]
    fn smith_form_of_stacked_relations() {
        // Z_6 with subgroup {0, 3}: relation lattice rows (6), (0), (3).
        let (d, v) = smith_normal_form(&[alloc::vec![6], alloc::vec![0], alloc::vec![3]], 1);
        assert_eq!(d, alloc::vec![3]);
        assert_eq!(v, alloc::vec![alloc::vec![1]]);
        // Klein four-group modulo the diagonal: Z_2 x Z_2 over {(0,0),(1,1)}.
        let rows = alloc::vec![
            alloc::vec![2, 0],
            alloc::vec![0, 2],
            alloc::vec![1, 1],
        ];
        let (d, _v) = smith_normal_form(&rows, 2);
        assert_eq!(d, alloc::vec![1, 2]);
    }

    #[test]
    fn smith_form_divisibility_chain() {
        let rows = alloc::vec![alloc::vec![4, 0, 0], alloc::vec![0, 6, 0], alloc::vec![0, 0, 10]];
        let (d, _) = smith_normal_form(&rows, 3);
        assert_eq!(d, alloc::vec![2, 2, 60]);
        for w in d.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }
}
