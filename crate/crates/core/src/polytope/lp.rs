//! Two-phase dense tableau simplex over exact rationals, Bland's rule.
//!
//! Solves `max c·x` subject to `A_le x <= b_le`, `A_eq x = b_eq` with `x`
//! free (split as `x = x⁺ − x⁻`).

use num_traits::{One, Signed, Zero};

use crate::rational::{dot, QVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, argmax: QVector },
    /// Objective grows without bound along `ray` (a recession direction).
    Unbounded { ray: QVector },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infeasible;

struct Tableau {
    rows: Vec<Vec<Rational>>, // last entry = rhs
    obj: Vec<Rational>,       // reduced costs; last entry = −objective value
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Maximizes with the current objective row over columns `< allowed`.
    /// Returns the entering column when unbounded.
    fn run(&mut self, allowed: usize) -> Option<usize> {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return None;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.ncols] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Some(c),
            }
        }
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.iter().map(|c| -c).collect();
        obj.resize(self.ncols + 1, Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if b < cost.len() && !cost[b].is_zero() {
                let f = cost[b].clone();
                for (o, x) in obj.iter_mut().zip(&self.rows[i]) {
                    *o += &f * x;
                }
            }
        }
        self.obj = obj;
    }

    fn column_values(&self) -> Vec<Rational> {
        let mut z = vec![Rational::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            z[b] = self.rows[i][self.ncols].clone();
        }
        z
    }
}

pub fn maximize(
    n: usize,
    le: &[(QVector, Rational)],
    eq: &[(QVector, Rational)],
    c: &[Rational],
) -> Result<LpOutcome, Infeasible> {
    let m_le = le.len();
    let m = m_le + eq.len();
    let structural = 2 * n + m_le;

    // Rows needing an artificial: equalities and `<=` rows with negative rhs.
    let mut needs_art = Vec::with_capacity(m);
    for (_, b) in le {
        needs_art.push(b.is_negative());
    }
    needs_art.extend(std::iter::repeat_n(true, eq.len()));
    let n_art = needs_art.iter().filter(|&&x| x).count();
    let ncols = structural + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = structural;
    for (i, (a, b)) in le.iter().chain(eq).enumerate() {
        let mut row = vec![Rational::zero(); ncols + 1];
        for j in 0..n {
            row[j] = a[j].clone();
            row[n + j] = -a[j].clone();
        }
        if i < m_le {
            row[2 * n + i] = Rational::one();
        }
        row[ncols] = b.clone();
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        if needs_art[i] {
            row[art] = Rational::one();
            basis.push(art);
            art += 1;
        } else {
            basis.push(2 * n + i);
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        ncols,
    };

    if n_art > 0 {
        let mut cost = vec![Rational::zero(); ncols];
        for x in cost[structural..].iter_mut() {
            *x = -Rational::one();
        }
        t.set_objective(&cost);
        t.run(ncols);
        if t.obj[ncols].is_negative() {
            // −(−Σ art) = Σ art > 0 at the optimum
            return Err(Infeasible);
        }
        // Drive remaining artificials out of the basis.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= structural {
                match (0..structural).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut cost = vec![Rational::zero(); ncols];
    for j in 0..n {
        cost[j] = c[j].clone();
        cost[n + j] = -c[j].clone();
    }
    t.set_objective(&cost);
    let z = |t: &Tableau| t.column_values();
    if let Some(enter) = t.run(structural) {
        let mut dir = vec![Rational::zero(); ncols];
        dir[enter] = Rational::one();
        for (i, &b) in t.basis.iter().enumerate() {
            dir[b] = -t.rows[i][enter].clone();
        }
        let ray = (0..n).map(|j| &dir[j] - &dir[n + j]).collect();
        return Ok(LpOutcome::Unbounded { ray });
    }
    let vals = z(&t);
    let argmax: QVector = (0..n).map(|j| &vals[j] - &vals[n + j]).collect();
    Ok(LpOutcome::Optimal {
        value: dot(c, &argmax),
        argmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec_int, rat, rint};

    fn le(a: &[i64], b: i64) -> (QVector, Rational) {
        (qvec_int(a), rint(b))
    }

    #[test]
    fn unit_square() {
        let rows = vec![le(&[1, 0], 1), le(&[0, 1], 1), le(&[-1, 0], 0), le(&[0, -1], 0)];
        let out = maximize(2, &rows, &[], &qvec_int(&[1, 1])).unwrap();
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: rint(2),
                argmax: qvec_int(&[1, 1])
            }
        );
    }

    #[test]
    fn negative_rhs_and_equality() {
        // x + y = 3, x >= 1 (−x <= −1), y >= 1/2 ; max x
        let rows = vec![le(&[-1, 0], -1), (qvec_int(&[0, -1]), rat(-1, 2))];
        let eq = vec![le(&[1, 1], 3)];
        let out = maximize(2, &rows, &eq, &qvec_int(&[1, 0])).unwrap();
        let LpOutcome::Optimal { value, .. } = out else { panic!() };
        assert_eq!(value, rat(5, 2));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let rows = vec![le(&[1], 0), le(&[-1], -1)];
        assert_eq!(maximize(1, &rows, &[], &qvec_int(&[1])), Err(Infeasible));
        let rows = vec![le(&[-1, 0], 0)];
        let out = maximize(2, &rows, &[], &qvec_int(&[1, 0])).unwrap();
        let LpOutcome::Unbounded { ray } = out else { panic!() };
        assert!(ray[0].is_positive());
    }

    #[test]
    fn zero_objective() {
        let rows = vec![le(&[1], 5), le(&[-1], -2)];
        let LpOutcome::Optimal { value, .. } = maximize(1, &rows, &[], &qvec_int(&[0])).unwrap() else {
            panic!()
        };
        assert_eq!(value, rint(0));
    }
}
