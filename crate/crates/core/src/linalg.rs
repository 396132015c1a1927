//! Dense linear algebra over the rationals: row reduction, null spaces,
//! affine solution sets.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{check_dim, dot, sub, QVector, Rational};

/// A dense m×n rational matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    ncols: usize,
    rows: Vec<QVector>,
}

impl QMatrix {
    pub fn new(ncols: usize, rows: Vec<QVector>) -> Result<Self> {
        for r in &rows {
            check_dim(ncols, r.len())?;
        }
        Ok(QMatrix { ncols, rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        QMatrix { ncols: n, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn mul_vec(&self, x: &[Rational]) -> QVector {
        self.rows.iter().map(|r| dot(r, x)).collect()
    }

    /// Reduced row echelon form; returns the nonzero rows and pivot columns.
    pub fn rref(&self) -> (Vec<QVector>, Vec<usize>) {
        rref_rows(self.rows.clone(), self.ncols)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of { x : Mx = 0 }, one vector per free column.
    pub fn nullspace(&self) -> Vec<QVector> {
        let (rows, pivots) = self.rref();
        nullspace_from_rref(&rows, &pivots, self.ncols)
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.ncols;
        if self.nrows() != n {
            return None;
        }
        let aug: Vec<QVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let (red, pivots) = rref_rows(aug, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let rows = red.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(QMatrix { ncols: n, rows })
    }
}

/// Gauss-Jordan elimination restricted to the first `ncols` columns (extra
/// columns, e.g. a right-hand side, are carried along).
pub fn rref_rows(mut rows: Vec<QVector>, ncols: usize) -> (Vec<QVector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][col];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

fn nullspace_from_rref(rows: &[QVector], pivots: &[usize], ncols: usize) -> Vec<QVector> {
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in rows.iter().zip(pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn rank_of(vectors: &[QVector], ncols: usize) -> usize {
    rref_rows(vectors.to_vec(), ncols).1.len()
}

/// An affine subspace `point + span(basis)` with linearly independent basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubspace {
    point: QVector,
    basis: Vec<QVector>,
}

impl AffineSubspace {
    /// Builds the subspace, reducing `directions` to an independent set.
    pub fn new(point: QVector, directions: &[QVector]) -> Result<Self> {
        let n = point.len();
        for d in directions {
            check_dim(n, d.len())?;
        }
        let (basis, _) = rref_rows(directions.to_vec(), n);
        Ok(AffineSubspace { point, basis })
    }

    pub fn whole_space(n: usize) -> Self {
        AffineSubspace {
            point: vec![Rational::zero(); n],
            basis: QMatrix::identity(n).rows,
        }
    }

    /// Affine hull of a finite point set; `None` for the empty set.
    pub fn from_points(points: &[QVector]) -> Option<Self> {
        let first = points.first()?;
        let dirs: Vec<QVector> = points[1..].iter().map(|p| sub(p, first)).collect();
        Some(AffineSubspace::new(first.clone(), &dirs).expect("points share a dimension"))
    }

    pub fn point(&self) -> &QVector {
        &self.point
    }

    pub fn basis(&self) -> &[QVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    /// Normals `C` and right-hand side `d` with `self = { x : Cx = d }`.
    pub fn equations(&self) -> (Vec<QVector>, QVector) {
        let normals = if self.basis.is_empty() {
            QMatrix::identity(self.ambient_dim()).rows
        } else {
            QMatrix::new(self.ambient_dim(), self.basis.clone())
                .expect("basis dimension")
                .nullspace()
        };
        let rhs = normals.iter().map(|c| dot(c, &self.point)).collect();
        (normals, rhs)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        if x.len() != self.ambient_dim() {
            return false;
        }
        let (normals, rhs) = self.equations();
        normals.iter().zip(&rhs).all(|(c, d)| &dot(c, x) == d)
    }

    pub fn is_subspace_of(&self, other: &AffineSubspace) -> bool {
        other.contains(&self.point)
            && self
                .basis
                .iter()
                .all(|b| other.contains(&crate::rational::add(&self.point, b)))
    }

    pub fn same_as(&self, other: &AffineSubspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }
}

/// Solution set of `Cx = d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineSolution {
    NoSolution,
    Subspace(AffineSubspace),
}

pub fn solve_affine(c: &QMatrix, d: &[Rational]) -> Result<AffineSolution> {
    if c.nrows() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: c.nrows(),
            found: d.len(),
        });
    }
    let n = c.ncols();
    let aug: Vec<QVector> = c
        .rows
        .iter()
        .zip(d)
        .map(|(r, di)| {
            let mut row = r.clone();
            row.push(di.clone());
            row
        })
        .collect();
    let (red, pivots) = rref_rows(aug, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(AffineSolution::NoSolution);
    }
    let mut point = vec![Rational::zero(); n];
    for (row, &p) in red.iter().zip(&pivots) {
        point[p] = row[n].clone();
    }
    let lhs: Vec<QVector> = red.iter().map(|r| r[..n].to_vec()).collect();
    let basis = nullspace_from_rref(&lhs, &pivots, n);
    Ok(AffineSolution::Subspace(AffineSubspace { point, basis }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec_int, rint};

    fn m(rows: &[&[i64]]) -> QMatrix {
        let n = rows.first().map_or(0, |r| r.len());
        QMatrix::new(n, rows.iter().map(|r| qvec_int(r)).collect()).unwrap()
    }

    #[test]
    fn identity_system_has_unique_point() {
        let sol = solve_affine(&QMatrix::identity(2), &qvec_int(&[1, 2])).unwrap();
        let AffineSolution::Subspace(s) = sol else { panic!() };
        assert_eq!(s.point(), &qvec_int(&[1, 2]));
        assert_eq!(s.dim(), 0);
    }

    #[test]
    fn single_equation_gives_line() {
        let sol = solve_affine(&m(&[&[1, 1]]), &qvec_int(&[1])).unwrap();
        let AffineSolution::Subspace(s) = sol else { panic!() };
        assert_eq!(s.point(), &qvec_int(&[1, 0]));
        assert_eq!(s.basis(), &[qvec_int(&[-1, 1])]);
        assert!(s.contains(&qvec_int(&[0, 1])));
        assert!(!s.contains(&qvec_int(&[1, 1])));
    }

    #[test]
    fn inconsistent_system() {
        let sol = solve_affine(&m(&[&[1, 1], &[2, 2]]), &qvec_int(&[1, 3])).unwrap();
        assert_eq!(sol, AffineSolution::NoSolution);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert!(solve_affine(&m(&[&[1, 1]]), &qvec_int(&[1, 2])).is_err());
        assert!(QMatrix::new(2, vec![qvec_int(&[1])]).is_err());
    }

    #[test]
    fn inverse_and_rank() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.rows()[0], qvec_int(&[1, -1]));
        assert_eq!(inv.rows()[1], qvec_int(&[-1, 2]));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn affine_hull_of_points() {
        let pts = vec![qvec_int(&[0, 0, 1]), qvec_int(&[1, 0, 1]), qvec_int(&[0, 1, 1])];
        let s = AffineSubspace::from_points(&pts).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&qvec_int(&[5, -3, 1])));
        assert!(!s.contains(&qvec_int(&[0, 0, 0])));
        let (normals, rhs) = s.equations();
        assert_eq!(normals.len(), 1);
        assert_eq!(rhs[0], rint(1));
        assert!(s.same_as(&AffineSubspace::from_points(&[qvec_int(&[2, 2, 1]), qvec_int(&[3, 2, 1]), qvec_int(&[2, 5, 1])]).unwrap()));
    }
}
