use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::RationalMatrix;
use crate::rational::Rational;

/// Basis of `{x : Hx = 0}` from the reduced row echelon form: one vector
/// per free column, with a 1 in that column.
pub fn kernel_basis(h: &RationalMatrix) -> Vec<Vec<Rational>> {
    let n = h.dim();
    let mut a: Vec<Vec<Rational>> = h.rows().map(<[Rational]>::to_vec).collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let delta = &f * &a[row][c];
                    a[r][c] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// A kernel vector with no zero entry, if one exists.
///
/// With kernel basis `u_1..u_m`, every coordinate of
/// `v(t) = Σ_j t^(j-1) u_j` is a polynomial in `t` of degree `< m`, nonzero
/// unless that coordinate vanishes on the whole kernel. Each such polynomial
/// has at most `m - 1` roots, so some `t ≤ (m - 1) n + 1` works; the search
/// returns the smallest positive integer `t`.
pub fn supersingular_witness(h: &RationalMatrix) -> Option<Vec<Rational>> {
    witness_from_basis(&kernel_basis(h), h.dim())
}

/// The power-combination search of [`supersingular_witness`] over a given
/// basis of vectors of length `n`.
pub fn witness_from_basis(basis: &[Vec<Rational>], n: usize) -> Option<Vec<Rational>> {
    let m = basis.len();
    if m == 0 || (0..n).any(|i| basis.iter().all(|u| u[i].is_zero())) {
        return None;
    }
    let bound = (m - 1) * n + 1;
    for t in 1..=bound {
        let t = Rational::from_integer(BigInt::from(t));
        let mut v = vec![Rational::zero(); n];
        let mut power = Rational::one();
        for u in basis {
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi += &power * ui;
            }
            power *= &t;
        }
        if v.iter().all(|x| !x.is_zero()) {
            return Some(v);
        }
    }
    unreachable!("a nowhere-zero combination exists within the root bound")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_int;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| from_int(x)).collect()
    }

    #[test]
    fn kernels() {
        let h = RationalMatrix::from_int_rows(&[&[1, -1], &[-1, 1]]);
        assert_eq!(kernel_basis(&h), vec![ints(&[1, 1])]);
        assert!(kernel_basis(&RationalMatrix::identity(2)).is_empty());
        assert_eq!(kernel_basis(&RationalMatrix::zeros(2)).len(), 2);
    }

    #[test]
    fn witness_needs_second_power() {
        // t = 1 gives (1, 1, 0); t = 2 gives (1, 2, -1).
        let basis = vec![ints(&[1, 0, 1]), ints(&[0, 1, -1])];
        assert_eq!(witness_from_basis(&basis, 3), Some(ints(&[1, 2, -1])));
        // Same kernel through a matrix: the echelon basis is (1,1,0), (1,0,1).
        let h = RationalMatrix::from_int_rows(&[&[-1, 1, 1], &[1, -1, -1], &[-1, 1, 1]]);
        assert_eq!(kernel_basis(&h), vec![ints(&[1, 1, 0]), ints(&[1, 0, 1])]);
        assert_eq!(supersingular_witness(&h), Some(ints(&[2, 1, 1])));
    }

    #[test]
    fn witness_trivial_and_absent() {
        let h = RationalMatrix::from_int_rows(&[&[1, -1], &[-1, 1]]);
        assert_eq!(supersingular_witness(&h), Some(ints(&[1, 1])));
        let h = RationalMatrix::from_int_rows(&[&[1, 0], &[0, 0]]);
        assert_eq!(kernel_basis(&h), vec![ints(&[0, 1])]);
        assert_eq!(supersingular_witness(&h), None);
        assert_eq!(supersingular_witness(&RationalMatrix::identity(3)), None);
    }

    #[test]
    fn zero_matrix_witness_is_all_ones() {
        assert_eq!(
            supersingular_witness(&RationalMatrix::zeros(3)),
            Some(ints(&[1, 1, 1]))
        );
    }
}
