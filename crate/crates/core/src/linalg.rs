//! Exact rational linear algebra and a division-free determinant.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Reduces `mat` to row echelon form in place; returns the rank.
pub(crate) fn row_echelon(mat: &mut [Vec<Rational>]) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, piv);
        let lead = mat[rank][col].clone();
        for r in (rank + 1)..rows {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = &mat[r][col] / &lead;
            for c in col..cols {
                let t = &factor * &mat[rank][c];
                mat[r][c] = &mat[r][c] - &t;
            }
        }
        rank += 1;
    }
    rank
}

pub(crate) fn rank(mut mat: Vec<Vec<Rational>>) -> usize {
    row_echelon(&mut mat)
}

/// Basis of the right kernel of `mat` (rows are covectors on `ncols`
/// coordinates). Deterministic: free columns in increasing order, each basis
/// vector has a 1 in its free column.
pub(crate) fn kernel_basis(mat: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = mat.to_vec();
    let rows = m.len();
    // Full reduced echelon form for clean back-substitution.
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let lead = m[rank][col].clone();
        for c in col..ncols {
            m[rank][c] = &m[rank][c] / &lead;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    let t = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for &(r, c) in &pivots {
            v[c] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Exact determinant by fraction-producing Gaussian elimination.
pub(crate) fn det_rational(mut mat: Vec<Vec<Rational>>) -> Rational {
    let n = mat.len();
    debug_assert!(mat.iter().all(|r| r.len() == n));
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !mat[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            mat.swap(piv, col);
            det = -det;
        }
        let lead = mat[col][col].clone();
        det *= &lead;
        for r in (col + 1)..n {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = &mat[r][col] / &lead;
            for c in (col + 1)..n {
                let t = &factor * &mat[col][c];
                mat[r][c] = &mat[r][c] - &t;
            }
        }
    }
    det
}

/// Division-free determinant by signed permutation expansion (Heap's
/// algorithm); for the small matrices of Wronskian work, n ≤ 6.
pub(crate) fn det_by_permutations<T: Clone>(
    n: usize,
    entry: impl Fn(usize, usize) -> T,
    zero: T,
    add: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
    neg: impl Fn(&T) -> T,
) -> T {
    if n == 0 {
        return zero;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut acc = zero;
    let mut even = true;
    let add_term = |perm: &[usize], even: bool, acc: &T| -> T {
        let mut prod = entry(0, perm[0]);
        for (i, &j) in perm.iter().enumerate().skip(1) {
            prod = mul(&prod, &entry(i, j));
        }
        if !even {
            prod = neg(&prod);
        }
        add(acc, &prod)
    };
    acc = add_term(&perm, even, &acc);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            even = !even;
            acc = add_term(&perm, even, &acc);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect()
    }

    #[test]
    fn rank_and_det_agree_on_small_cases() {
        assert_eq!(rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(m(&[&[1, 2], &[3, 4]])), 2);
        assert_eq!(det_rational(m(&[&[1, 2], &[3, 4]])), rat_int(-2));
        assert_eq!(det_rational(m(&[&[1, 2], &[2, 4]])), rat_int(0));
    }

    #[test]
    fn kernel_vectors_annihilate_rows() {
        let mat = m(&[&[1, 2, 3], &[4, 5, 6]]);
        let basis = kernel_basis(&mat, 3);
        assert_eq!(basis.len(), 1);
        for row in &mat {
            let dot = row
                .iter()
                .zip(basis[0].iter())
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn permutation_det_matches_gaussian() {
        let mat = m(&[&[2, 7, 1], &[0, 3, -1], &[5, 4, 4]]);
        let by_perm = det_by_permutations(
            3,
            |i, j| mat[i][j].clone(),
            Rational::zero(),
            |a, b| a + b,
            |a, b| a * b,
            |a| -a,
        );
        assert_eq!(by_perm, det_rational(mat));
    }
}
