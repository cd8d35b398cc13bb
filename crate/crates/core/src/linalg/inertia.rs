use num_traits::{Signed, Zero};

use super::{LinalgError, RationalMatrix};
use crate::rational::Rational;

/// Counts of positive, zero and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

impl Inertia {
    pub fn new(n_plus: usize, n_zero: usize, n_minus: usize) -> Self {
        Inertia {
            n_plus,
            n_zero,
            n_minus,
        }
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }

    pub fn is_psd(&self) -> bool {
        self.n_minus == 0
    }
}

/// Exact inertia by symmetric congruence elimination.
///
/// Each step either pivots on the nonzero diagonal entry of largest absolute
/// value, or, when the remaining diagonal vanishes, splits off a hyperbolic
/// 2×2 block `[[0, c], [c, 0]]` contributing one positive and one negative
/// eigenvalue. The Schur complement is congruent to the remainder.
pub fn inertia(h: &RationalMatrix) -> Result<Inertia, LinalgError> {
    eliminate(h, false)
}

/// Whether `h` has a negative eigenvalue; stops at the first negative pivot.
pub fn has_negative_eigenvalue(h: &RationalMatrix) -> Result<bool, LinalgError> {
    Ok(eliminate(h, true)?.n_minus > 0)
}

fn eliminate(h: &RationalMatrix, stop_on_negative: bool) -> Result<Inertia, LinalgError> {
    if let Some((i, j)) = h.asymmetry() {
        return Err(LinalgError::NotSymmetric(i, j));
    }
    let mut a: Vec<Vec<Rational>> = h.rows().map(<[Rational]>::to_vec).collect();
    let mut active: Vec<usize> = (0..h.dim()).collect();
    let mut out = Inertia::default();

    while !active.is_empty() {
        if stop_on_negative && out.n_minus > 0 {
            break;
        }
        let pivot = active
            .iter()
            .copied()
            .filter(|&i| !a[i][i].is_zero())
            .max_by(|&i, &j| a[i][i].abs().cmp(&a[j][j].abs()).then(j.cmp(&i)));
        if let Some(p) = pivot {
            if a[p][p].is_positive() {
                out.n_plus += 1;
            } else {
                out.n_minus += 1;
            }
            active.retain(|&i| i != p);
            let d = a[p][p].clone();
            for &r in &active {
                if a[r][p].is_zero() {
                    continue;
                }
                let factor = &a[r][p] / &d;
                for &c in &active {
                    if !a[p][c].is_zero() {
                        let delta = &factor * &a[p][c];
                        a[r][c] -= delta;
                    }
                }
            }
            continue;
        }
        let pair = active
            .iter()
            .enumerate()
            .flat_map(|(x, &i)| active[x + 1..].iter().map(move |&j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero());
        let Some((p, q)) = pair else {
            out.n_zero += active.len();
            break;
        };
        out.n_plus += 1;
        out.n_minus += 1;
        active.retain(|&i| i != p && i != q);
        // Schur complement of [[0, c], [c, 0]]: a_rs -= (a_rp a_qs + a_rq a_ps) / c
        let c = a[p][q].clone();
        for &r in &active {
            for &s in &active {
                let t = &a[r][p] * &a[q][s] + &a[r][q] * &a[p][s];
                if !t.is_zero() {
                    a[r][s] -= t / &c;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inertia_of(rows: &[&[i64]]) -> (usize, usize, usize) {
        let i = inertia(&RationalMatrix::from_int_rows(rows)).unwrap();
        (i.n_plus, i.n_zero, i.n_minus)
    }

    #[test]
    fn small_cases() {
        assert_eq!(inertia_of(&[&[1, -1], &[-1, 1]]), (1, 1, 0));
        assert_eq!(inertia_of(&[&[0, 1], &[1, 0]]), (1, 0, 1));
        assert_eq!(inertia_of(&[&[-2]]), (0, 0, 1));
        assert_eq!(inertia_of(&[&[0, 0], &[0, 0]]), (0, 2, 0));
        assert_eq!(inertia_of(&[]), (0, 0, 0));
    }

    #[test]
    fn hyperbolic_pair_with_remainder() {
        // diag zero, off-diagonal couples all three: eigenvalues of
        // [[0,1,1],[1,0,1],[1,1,0]] are 2, -1, -1.
        assert_eq!(inertia_of(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]), (1, 0, 2));
        // [[0,1,0],[1,0,0],[0,0,0]]: ±1 and 0
        assert_eq!(inertia_of(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]), (1, 1, 1));
    }

    #[test]
    fn rejects_asymmetric() {
        let m = RationalMatrix::from_int_rows(&[&[1, 2], &[3, 1]]);
        assert_eq!(inertia(&m), Err(LinalgError::NotSymmetric(0, 1)));
    }

    #[test]
    fn early_exit_agrees() {
        let m = RationalMatrix::from_int_rows(&[&[-1, 0, 0], &[0, 2, 1], &[0, 1, 2]]);
        assert!(has_negative_eigenvalue(&m).unwrap());
        let psd = RationalMatrix::from_int_rows(&[&[2, -1], &[-1, 2]]);
        assert!(!has_negative_eigenvalue(&psd).unwrap());
    }
}
