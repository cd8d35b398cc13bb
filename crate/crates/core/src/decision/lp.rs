//! Two-phase simplex with Bland's rule over an ordered field.
//!
//! Problems here are tiny (a few dozen variables), so a dense tableau is
//! used. All variables are non-negative; free variables are split by the
//! caller. Over [`Rational`] the solver is exact; over `f64` it uses an
//! absolute zero tolerance and serves only as a heuristic.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Field operations the tableau needs.
pub trait Scalar: Clone + PartialOrd + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    /// Sign, up to the tolerance of the type.
    fn sign(&self) -> Ordering;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_zero_s(&self) -> bool {
        self.sign() == Ordering::Equal
    }
    fn is_neg_s(&self) -> bool {
        self.sign() == Ordering::Less
    }
    fn is_pos_s(&self) -> bool {
        self.sign() == Ordering::Greater
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Values within this distance of zero count as zero in `f64` solves.
pub const F64_TOLERANCE: f64 = 1e-9;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn sign(&self) -> Ordering {
        if *self > F64_TOLERANCE {
            Ordering::Greater
        } else if *self < -F64_TOLERANCE {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T = Rational> {
    pub coeffs: Vec<T>,
    pub rel: Relation,
    pub rhs: T,
}

/// Minimize `objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T = Rational> {
    pub n_vars: usize,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T = Rational> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            n_vars,
            objective: vec![T::zero(); n_vars],
            constraints: Vec::new(),
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<T>, rel: Relation, rhs: T) {
        assert_eq!(coeffs.len(), self.n_vars);
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Whether `x` satisfies every constraint and sign bound (up to the
    /// tolerance of `T`).
    pub fn is_feasible(&self, x: &[T]) -> bool {
        x.len() == self.n_vars
            && x.iter().all(|v| !v.is_neg_s())
            && self.constraints.iter().all(|c| {
                let slack = dot(&c.coeffs, x).sub(&c.rhs);
                match c.rel {
                    Relation::Le => !slack.is_pos_s(),
                    Relation::Eq => slack.is_zero_s(),
                    Relation::Ge => !slack.is_neg_s(),
                }
            })
    }

    pub fn solve(&self) -> LpOutcome<T> {
        Tableau::build(self).run(self)
    }
}

struct Tableau<T> {
    /// `rows[i]` has `cols + 1` entries; the last is the right-hand side.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
    /// First artificial column; artificials occupy `art_start..cols`.
    art_start: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Tableau<T> {
        let m = lp.constraints.len();
        let n_slack = lp
            .constraints
            .iter()
            .filter(|c| c.rel != Relation::Eq)
            .count();
        let art_start = lp.n_vars + n_slack;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = lp.n_vars;
        let mut n_art = 0;
        let mut pending_art = Vec::new();
        for c in &lp.constraints {
            let flip = c.rhs.is_neg_s();
            let sgn = |x: &T| if flip { x.neg() } else { x.clone() };
            let rel = match (c.rel, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            let mut row: Vec<T> = c.coeffs.iter().map(sgn).collect();
            row.resize(art_start, T::zero());
            match rel {
                Relation::Le => {
                    row[slack] = T::one();
                    basis.push(slack);
                    slack += 1;
                    pending_art.push(None);
                }
                Relation::Ge => {
                    row[slack] = T::one().neg();
                    slack += 1;
                    basis.push(usize::MAX);
                    pending_art.push(Some(n_art));
                    n_art += 1;
                }
                Relation::Eq => {
                    basis.push(usize::MAX);
                    pending_art.push(Some(n_art));
                    n_art += 1;
                }
            }
            row.push(sgn(&c.rhs));
            rows.push(row);
        }
        let cols = art_start + n_art;
        for (i, row) in rows.iter_mut().enumerate() {
            let rhs = row.pop().expect("rhs");
            row.resize(cols, T::zero());
            if let Some(k) = pending_art[i] {
                row[art_start + k] = T::one();
                basis[i] = art_start + k;
            }
            row.push(rhs);
        }
        Tableau {
            rows,
            basis,
            cols,
            art_start,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let pivot = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.div(&pivot);
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero_s() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero_s() {
                    *x = x.sub(&f.mul(p));
                }
            }
            // exact zero in the pivot column, also under rounding
            row[c] = T::zero();
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost` over columns `0..allowed`. Returns `false` when
    /// unbounded.
    fn optimize(&mut self, cost: &[T], allowed: usize) -> bool {
        // reduced costs r_j = c_j - Σ_i c_{B(i)} a_ij, kept up to date by
        // the same row operations as the tableau
        let mut reduced: Vec<T> = cost[..self.cols].to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero_s() {
                continue;
            }
            for (r, a) in reduced.iter_mut().zip(row) {
                if !a.is_zero_s() {
                    *r = r.sub(&cb.mul(a));
                }
            }
        }
        let mut in_basis = vec![false; self.cols];
        for &b in &self.basis {
            in_basis[b] = true;
        }
        loop {
            let entering = (0..allowed).find(|&j| !in_basis[j] && reduced[j].is_neg_s());
            let Some(j) = entering else {
                return true;
            };
            let mut best: Option<(T, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[j].is_pos_s() {
                    let ratio = row[self.cols].div(&row[j]);
                    let better = match &best {
                        None => true,
                        Some((br, _, bb)) => match ratio.sub(br).sign() {
                            Ordering::Less => true,
                            Ordering::Equal => self.basis[i] < *bb,
                            Ordering::Greater => false,
                        },
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            let Some((_, r, _)) = best else {
                return false;
            };
            in_basis[self.basis[r]] = false;
            in_basis[j] = true;
            self.pivot(r, j);
            let f = reduced[j].clone();
            for (x, p) in reduced.iter_mut().zip(&self.rows[r]) {
                if !p.is_zero_s() {
                    *x = x.sub(&f.mul(p));
                }
            }
        }
    }

    fn objective_value(&self, cost: &[T]) -> T {
        self.rows
            .iter()
            .zip(&self.basis)
            .fold(T::zero(), |acc, (row, &b)| acc.add(&cost[b].mul(&row[self.cols])))
    }

    fn run(mut self, lp: &LinearProgram<T>) -> LpOutcome<T> {
        let mut phase1 = vec![T::zero(); self.cols];
        for c in phase1.iter_mut().skip(self.art_start) {
            *c = T::one();
        }
        if self.art_start < self.cols {
            self.optimize(&phase1, self.cols);
            if !self.objective_value(&phase1).is_zero_s() {
                return LpOutcome::Infeasible;
            }
            // drive remaining (zero-valued) artificials out of the basis
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.art_start {
                    match (0..self.art_start).find(|&j| !self.rows[i][j].is_zero_s()) {
                        Some(j) => {
                            self.pivot(i, j);
                            i += 1;
                        }
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        let mut cost = lp.objective.clone();
        cost.resize(self.cols, T::zero());
        if !self.optimize(&cost, self.art_start) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![T::zero(); lp.n_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < lp.n_vars {
                x[b] = row[self.cols].clone();
            }
        }
        let value = dot(&lp.objective, &x);
        LpOutcome::Optimal { x, value }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, from_int};

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| from_int(x)).collect()
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.objective = q(&[-3, -5]);
        lp.constrain(q(&[1, 0]), Relation::Le, from_int(4));
        lp.constrain(q(&[0, 2]), Relation::Le, from_int(12));
        lp.constrain(q(&[3, 2]), Relation::Le, from_int(18));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                x: q(&[2, 6]),
                value: from_int(-36)
            }
        );
    }

    #[test]
    fn equality_and_ge() {
        // min x + y s.t. x + 2y = 3, x ≥ 1/2
        let mut lp = LinearProgram::new(2);
        lp.objective = q(&[1, 1]);
        lp.constrain(q(&[1, 2]), Relation::Eq, from_int(3));
        lp.constrain(q(&[1, 0]), Relation::Ge, frac(1, 2));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![frac(1, 2), frac(5, 4)]);
                assert_eq!(value, frac(7, 4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(q(&[1]), Relation::Le, from_int(-1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.objective = q(&[-1, 0]);
        lp.constrain(q(&[1, -1]), Relation::Le, from_int(1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.objective = q(&[1, 0]);
        lp.constrain(q(&[1, 1]), Relation::Eq, from_int(2));
        lp.constrain(q(&[2, 2]), Relation::Eq, from_int(4));
        match lp.solve() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, from_int(0));
                assert_eq!(x, q(&[0, 2]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook largest-coefficient rule.
        let mut lp = LinearProgram::new(4);
        lp.objective = vec![frac(-3, 4), from_int(150), frac(-1, 50), from_int(6)];
        lp.constrain(
            vec![frac(1, 4), from_int(-60), frac(-1, 25), from_int(9)],
            Relation::Le,
            from_int(0),
        );
        lp.constrain(
            vec![frac(1, 2), from_int(-90), frac(-1, 50), from_int(3)],
            Relation::Le,
            from_int(0),
        );
        lp.constrain(q(&[0, 0, 1, 0]), Relation::Le, from_int(1));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, frac(-1, 20)),
            other => panic!("{other:?}"),
        }
    }
}
