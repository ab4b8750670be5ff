//! Dense two-phase simplex method over any [`Scalar`].
//!
//! With rationals every pivot is exact, so feasibility verdicts are
//! unambiguous. Bland's rule (lowest eligible index enters, lowest basic
//! index leaves among ratio ties) rules out cycling.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub x: Vec<T>,
    pub objective: T,
    /// Phase I optimum: total artificial mass left, `0` when feasible.
    pub infeasibility: T,
    /// Rows whose artificial variable stayed positive, when infeasible.
    pub violated_rows: Vec<usize>,
}

fn positive<T: Scalar>(v: &T, tol: f64) -> bool {
    (-v.clone()).is_negative_tol(tol)
}

fn nonzero<T: Scalar>(v: &T, tol: f64) -> bool {
    positive(v, tol) || v.is_negative_tol(tol)
}

struct Tableau<T> {
    /// `rows x (cols + 1)`; last column is the right-hand side.
    t: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
    tol: f64,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let pv = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v = v.clone() / pv.clone();
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || !nonzero(&row[c], 0.0) {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if nonzero(p, 0.0) {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj · x` over the allowed columns; `false` if unbounded.
    fn optimize(&mut self, obj: &[T], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            // reduced costs d_j = obj_j − Σ_i obj_{basis_i} t_ij
            let entering = (0..self.cols).filter(|&j| allowed(j) && !self.basis.contains(&j)).find(|&j| {
                let mut d = obj[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if nonzero(&obj[b], 0.0) && nonzero(&self.t[i][j], 0.0) {
                        d = d - obj[b].clone() * self.t[i][j].clone();
                    }
                }
                positive(&d, self.tol)
            });
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.t.len() {
                if !positive(&self.t[i][c], self.tol) {
                    continue;
                }
                let ratio = self.t[i][self.cols].clone() / self.t[i][c].clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        let better = ratio < lr
                            || (!nonzero(&(ratio.clone() - lr.clone()), self.tol) && self.basis[i] < self.basis[li]);
                        if better { Some((i, ratio)) } else { Some((li, lr)) }
                    }
                };
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }
}

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0`.
///
/// `tol` is ignored for exact scalars; for floats it is the pivoting and
/// feasibility tolerance.
pub fn solve_standard<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T], tol: f64) -> LpSolution<T> {
    let rows = a.len();
    let n = c.len();
    let cols = n + rows;
    let mut t: Vec<Vec<T>> = Vec::with_capacity(rows);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative_tol(0.0);
        let mut r: Vec<T> = row.iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        r.extend((0..rows).map(|k| if k == i { T::one() } else { T::zero() }));
        r.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(r);
    }
    let mut tab = Tableau { t, basis: (n..cols).collect(), cols, tol };

    // Phase I: maximize −Σ artificials.
    let phase1: Vec<T> = (0..cols).map(|j| if j >= n { -T::one() } else { T::zero() }).collect();
    tab.optimize(&phase1, &|_| true);
    let mut infeasibility = T::zero();
    let mut violated_rows = Vec::new();
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv >= n {
            let v = tab.t[i][cols].clone();
            if positive(&v, tol) {
                violated_rows.push(bv - n);
            }
            infeasibility = infeasibility + v;
        }
    }
    if positive(&infeasibility, tol) {
        violated_rows.sort_unstable();
        return LpSolution {
            status: LpStatus::Infeasible,
            x: vec![T::zero(); n],
            objective: T::zero(),
            infeasibility,
            violated_rows,
        };
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| nonzero(&tab.t[i][j], tol)) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // Phase II over the original columns.
    let obj: Vec<T> = (0..cols).map(|j| if j < n { c[j].clone() } else { T::zero() }).collect();
    let bounded = tab.optimize(&obj, &|j| j < n);
    let mut x = vec![T::zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.t[i][cols].clone();
        }
    }
    let objective = x.iter().zip(c).fold(T::zero(), |acc, (xv, cv)| acc + xv.clone() * cv.clone());
    LpSolution {
        status: if bounded { LpStatus::Optimal } else { LpStatus::Unbounded },
        x,
        objective,
        infeasibility: T::zero(),
        violated_rows: Vec::new(),
    }
}

/// Whether `target` lies in the relative interior of the convex hull of
/// `points`: some strictly positive convex combination reproduces it.
pub fn in_relative_interior<T: Scalar>(points: &[Vec<T>], target: &[T], tol: f64) -> bool {
    // variables: y_W = q_W − t ≥ 0 and t ≥ 0, with Σ y + K t = 1 and
    // Σ_W (y_W + t) s_W = target; maximize t.
    let k = points.len();
    let d = target.len();
    let mut a = Vec::with_capacity(d + 1);
    let mut b = Vec::with_capacity(d + 1);
    let mut row: Vec<T> = vec![T::one(); k];
    row.push(T::from_u64(k as u64));
    a.push(row);
    b.push(T::one());
    for i in 0..d {
        let mut row: Vec<T> = points.iter().map(|p| p[i].clone()).collect();
        row.push(points.iter().fold(T::zero(), |acc, p| acc + p[i].clone()));
        a.push(row);
        b.push(target[i].clone());
    }
    let mut c = vec![T::zero(); k];
    c.push(T::one());
    let sol = solve_standard(&a, &b, &c, tol);
    sol.status == LpStatus::Optimal && positive(&sol.objective, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    #[test]
    fn small_rational_lp() {
        // maximize x + y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![
            vec![rat(1, 1), rat(2, 1), rat(1, 1), rat(0, 1)],
            vec![rat(3, 1), rat(1, 1), rat(0, 1), rat(1, 1)],
        ];
        let b = vec![rat(4, 1), rat(6, 1)];
        let c = vec![rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1)];
        let s = solve_standard(&a, &b, &c, 0.0);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective, rat(14, 5));
        assert_eq!(s.x[0], rat(8, 5));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![rat(1, 1), rat(1, 1)]];
        let s = solve_standard(&a, &[rat(-1, 1)], &[rat(0, 1), rat(0, 1)], 0.0);
        assert_eq!(s.status, LpStatus::Infeasible);
        let a = vec![vec![rat(1, 1), rat(-1, 1)]];
        let s = solve_standard(&a, &[rat(1, 1)], &[rat(1, 1), rat(0, 1)], 0.0);
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn relative_interior() {
        let pts: Vec<Vec<Rational>> = vec![vec![rat(0, 1)], vec![rat(1, 1)], vec![rat(2, 1)]];
        assert!(in_relative_interior(&pts, &[rat(1, 2)], 0.0));
        assert!(!in_relative_interior(&pts, &[rat(2, 1)], 0.0));
        assert!(!in_relative_interior(&pts, &[rat(0, 1)], 0.0));
        let pts_f: Vec<Vec<f64>> = vec![vec![0.0], vec![1.0]];
        assert!(in_relative_interior(&pts_f, &[0.3], 1e-9));
    }
}
