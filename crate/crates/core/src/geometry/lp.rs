//! Dense two-phase simplex with Bland's rule.
//!
//! Small and generic over [`Scalar`]; on rationals the result is exact and
//! Bland's rule guarantees termination.

use crate::linalg::Vector;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { value: S, x: Vector<S> },
    Infeasible,
    Unbounded,
}

impl<S: Scalar> LpOutcome<S> {
    pub fn optimal(self) -> Option<(S, Vector<S>)> {
        match self {
            LpOutcome::Optimal { value, x } => Some((value, x)),
            _ => None,
        }
    }
}

/// `maximize ⟨objective, x⟩` subject to `≤` and `=` rows.
#[derive(Clone, Debug)]
pub struct LinearProgram<S> {
    objective: Vector<S>,
    le: Vec<(Vector<S>, S)>,
    eq: Vec<(Vector<S>, S)>,
    free: bool,
}

impl<S: Scalar> LinearProgram<S> {
    /// Variables are unrestricted in sign.
    pub fn maximize_free(objective: Vector<S>) -> Self {
        LinearProgram {
            objective,
            le: Vec::new(),
            eq: Vec::new(),
            free: true,
        }
    }

    /// Variables are constrained to be nonnegative.
    pub fn maximize_nonneg(objective: Vector<S>) -> Self {
        LinearProgram {
            objective,
            le: Vec::new(),
            eq: Vec::new(),
            free: false,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.dim()
    }

    pub fn le(mut self, a: Vector<S>, b: S) -> Self {
        debug_assert_eq!(a.dim(), self.num_vars());
        self.le.push((a, b));
        self
    }

    pub fn eq(mut self, a: Vector<S>, b: S) -> Self {
        debug_assert_eq!(a.dim(), self.num_vars());
        self.eq.push((a, b));
        self
    }

    pub fn add_le(&mut self, a: Vector<S>, b: S) {
        self.le.push((a, b));
    }

    pub fn add_eq(&mut self, a: Vector<S>, b: S) {
        self.eq.push((a, b));
    }

    pub fn solve(&self) -> LpOutcome<S> {
        self.solve_with_tol(&S::default_tol())
    }

    pub fn solve_with_tol(&self, tol: &S) -> LpOutcome<S> {
        let n = self.num_vars();
        let n_struct = if self.free { 2 * n } else { n };
        let n_le = self.le.len();
        let m = n_le + self.eq.len();

        let expand = |a: &Vector<S>| -> Vec<S> {
            if self.free {
                a.iter().cloned().chain(a.iter().map(|x| -x.clone())).collect()
            } else {
                a.0.clone()
            }
        };

        // Columns: structural | slacks | artificials | rhs
        let n_slack = n_le;
        let mut needs_art = Vec::with_capacity(m);
        let mut rows: Vec<Vec<S>> = Vec::with_capacity(m);
        for (k, (a, b)) in self.le.iter().chain(&self.eq).enumerate() {
            let mut row = expand(a);
            row.extend((0..n_slack).map(|s| if s == k { S::one() } else { S::zero() }));
            let mut rhs = b.clone();
            let is_le = k < n_le;
            if rhs < S::zero() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                rhs = -rhs;
                needs_art.push(true);
            } else {
                needs_art.push(!is_le);
            }
            row.push(rhs);
            rows.push(row);
        }
        let art_rows: Vec<usize> = (0..m).filter(|&i| needs_art[i]).collect();
        let n_art = art_rows.len();
        let n_cols = n_struct + n_slack + n_art;
        let mut basis = vec![0usize; m];
        for (i, row) in rows.iter_mut().enumerate() {
            let rhs = row.pop().expect("rhs present");
            row.extend((0..n_art).map(|_| S::zero()));
            row.push(rhs);
            if !needs_art[i] {
                basis[i] = n_struct + i;
            }
        }
        for (a, &i) in art_rows.iter().enumerate() {
            rows[i][n_struct + n_slack + a] = S::one();
            basis[i] = n_struct + n_slack + a;
        }

        let mut tab = Tableau {
            rows,
            basis,
            n_cols,
            tol: tol.clone(),
        };

        if n_art > 0 {
            let mut phase1 = vec![S::zero(); n_cols];
            for c in phase1.iter_mut().skip(n_struct + n_slack) {
                *c = -S::one();
            }
            if tab.run(&phase1, n_cols).is_err() {
                return LpOutcome::Infeasible;
            }
            let infeas: S = tab
                .rows
                .iter()
                .zip(&tab.basis)
                .filter(|(_, &b)| b >= n_struct + n_slack)
                .fold(S::zero(), |acc, (r, _)| acc + r[n_cols].clone());
            if infeas > *tol {
                return LpOutcome::Infeasible;
            }
            // Drive remaining artificials out of the basis; drop redundant rows.
            let mut i = 0;
            while i < tab.rows.len() {
                if tab.basis[i] >= n_struct + n_slack {
                    let col = (0..n_struct + n_slack).find(|&j| tab.rows[i][j].abs() > *tol);
                    match col {
                        Some(j) => tab.pivot(i, j),
                        None => {
                            tab.rows.remove(i);
                            tab.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }

        let mut phase2 = expand(&self.objective);
        phase2.extend((0..n_slack + n_art).map(|_| S::zero()));
        if tab.run(&phase2, n_struct + n_slack).is_err() {
            return LpOutcome::Unbounded;
        }

        let mut z = vec![S::zero(); n_cols];
        for (r, &b) in tab.rows.iter().zip(&tab.basis) {
            z[b] = r[n_cols].clone();
        }
        let x: Vec<S> = if self.free {
            (0..n).map(|j| z[j].clone() - z[n + j].clone()).collect()
        } else {
            z[..n].to_vec()
        };
        let x = Vector(x);
        let value = self.objective.dot(&x);
        LpOutcome::Optimal { value, x }
    }
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    basis: Vec<usize>,
    n_cols: usize,
    tol: S,
}

struct Unbounded;

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, pr) in row.iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *x = x.clone() - f.clone() * pr.clone();
                }
            }
            if !S::is_exact() {
                row[c] = S::zero();
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` using only columns `< allowed`.
    fn run(&mut self, cost: &[S], allowed: usize) -> Result<(), Unbounded> {
        let rhs = self.n_cols;
        loop {
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let reduced = self
                    .rows
                    .iter()
                    .zip(&self.basis)
                    .fold(cost[j].clone(), |acc, (row, &b)| acc - cost[b].clone() * row[j].clone());
                if reduced > self.tol {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, S)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > self.tol {
                    let ratio = row[rhs].clone() / row[c].clone();
                    let better = match &leaving {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leaving else {
                return Err(Unbounded);
            };
            self.pivot(r, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn vq(xs: &[i64]) -> Vector<Rational> {
        Vector(xs.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn box_maximum_at_corner() {
        let lp = LinearProgram::maximize_free(vq(&[1, 1]))
            .le(vq(&[1, 0]), q(1))
            .le(vq(&[-1, 0]), q(1))
            .le(vq(&[0, 1]), q(1))
            .le(vq(&[0, -1]), q(1));
        let (value, x) = lp.solve().optimal().unwrap();
        assert_eq!(value, q(2));
        assert_eq!(x, vq(&[1, 1]));
    }

    #[test]
    fn negative_rhs_and_equalities() {
        // minimize x + y s.t. x + y ≥ 2 (as -x - y ≤ -2), x - y = 0, x,y ≥ 0
        let lp = LinearProgram::maximize_nonneg(vq(&[-1, -1]))
            .le(vq(&[-1, -1]), q(-2))
            .eq(vq(&[1, -1]), q(0));
        let (value, x) = lp.solve().optimal().unwrap();
        assert_eq!(value, q(-2));
        assert_eq!(x, vq(&[1, 1]));
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let infeasible = LinearProgram::maximize_free(vq(&[1]))
            .le(vq(&[1]), q(0))
            .le(vq(&[-1]), q(-1));
        assert_eq!(infeasible.solve(), LpOutcome::Infeasible);
        let unbounded = LinearProgram::maximize_free(vq(&[1])).le(vq(&[-1]), q(0));
        assert_eq!(unbounded.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let lp = LinearProgram::maximize_nonneg(vq(&[1, 2]))
            .eq(vq(&[1, 1]), q(1))
            .eq(vq(&[2, 2]), q(2));
        let (value, _) = lp.solve().optimal().unwrap();
        assert_eq!(value, q(2));
    }

    #[test]
    fn float_backend_agrees() {
        let lp = LinearProgram::maximize_free(Vector(vec![3.0, 1.0]))
            .le(Vector(vec![1.0, 1.0]), 4.0)
            .le(Vector(vec![1.0, 3.0]), 6.0)
            .le(Vector(vec![-1.0, 0.0]), 0.0)
            .le(Vector(vec![0.0, -1.0]), 0.0);
        let (value, x) = lp.solve().optimal().unwrap();
        assert!((value - 12.0f64).abs() < 1e-12);
        assert!((x[0] - 4.0f64).abs() < 1e-12);
    }
}
