//! Integer matrices, the column-style Hermite normal form, and the lattice
//! bases derived from it.
//!
//! Convention: for an m×n integer matrix `M` the routine returns a unimodular
//! `U` with `M·U = H`, where `H` is in column echelon form. Each pivot is
//! positive, the pivot of row `i` sits strictly right of the pivot of any
//! earlier row, and every entry left of a pivot lies in `[0, pivot)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{check_dim, gcd_all, IntVector};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    ncols: usize,
    rows: Vec<IntVector>,
}

impl IntMatrix {
    pub fn new(ncols: usize, rows: Vec<IntVector>) -> Result<Self> {
        for r in &rows {
            check_dim(ncols, r.len())?;
        }
        Ok(IntMatrix { ncols, rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols);
                r.iter().map(|&x| BigInt::from(x)).collect()
            })
            .collect();
        IntMatrix { ncols, rows }
    }

    pub fn from_columns(nrows: usize, cols: &[IntVector]) -> Self {
        let rows = (0..nrows)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        IntMatrix { ncols: cols.len(), rows }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| crate::rational::unit_vector(n, i)).collect();
        IntMatrix { ncols: n, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[IntVector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> IntVector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.ncols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ncols, &self.rows)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.nrows());
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols)
                    .map(|j| r.iter().zip(&other.rows).map(|(a, b)| a * &b[j]).sum())
                    .collect()
            })
            .collect();
        IntMatrix { ncols: other.ncols, rows }
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> IntVector {
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.ncols;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip_row)
            .map(|(_, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip_col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        IntMatrix { ncols: self.ncols - 1, rows }
    }

    /// Classical adjugate, `adj(A)·A = det(A)·I`.
    pub fn adjugate(&self) -> IntMatrix {
        assert!(self.is_square());
        let n = self.ncols;
        if n == 1 {
            return IntMatrix::identity(1);
        }
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let d = self.minor(i, j).determinant();
                rows[j][i] = if (i + j) % 2 == 0 { d } else { -d };
            }
        }
        IntMatrix { ncols: n, rows }
    }

    /// Integer inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NotUnimodular("non-square".into()));
        }
        let det = self.determinant();
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        let adj = self.adjugate();
        Ok(if det.is_one() {
            adj
        } else {
            IntMatrix {
                ncols: adj.ncols,
                rows: adj
                    .rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|x| -x).collect())
                    .collect(),
            }
        })
    }
}

/// Column-style Hermite normal form: returns `(H, U)` with `M·U = H`,
/// `|det U| = 1`. Defined for every integer matrix, rank-deficient included.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (nrows, n) = (m.nrows(), m.ncols());
    let mut h = m.columns();
    let mut u = IntMatrix::identity(n).columns();
    let mut col = 0;
    for i in 0..nrows {
        if col == n {
            break;
        }
        for j in col + 1..n {
            if h[j][i].is_zero() {
                continue;
            }
            if h[col][i].is_zero() {
                h.swap(col, j);
                u.swap(col, j);
                continue;
            }
            let (a, b) = (h[col][i].clone(), h[j][i].clone());
            let e = a.extended_gcd(&b);
            let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
            combine(&mut h, col, j, &e.x, &e.y, &bg, &ag);
            combine(&mut u, col, j, &e.x, &e.y, &bg, &ag);
        }
        if h[col][i].is_zero() {
            continue;
        }
        if h[col][i].is_negative() {
            negate(&mut h[col]);
            negate(&mut u[col]);
        }
        let p = h[col][i].clone();
        for j in 0..col {
            let q = h[j][i].div_floor(&p);
            if !q.is_zero() {
                axpy(&mut h, j, col, &q);
                axpy(&mut u, j, col, &q);
            }
        }
        col += 1;
    }
    (
        IntMatrix::from_columns(nrows, &h),
        IntMatrix::from_columns(n, &u),
    )
}

// (c_a, c_b) <- (x·c_a + y·c_b, -bg·c_a + ag·c_b); the 2×2 transform has
// determinant (x·a + y·b)/g = 1.
fn combine(cols: &mut [IntVector], a: usize, b: usize, x: &BigInt, y: &BigInt, bg: &BigInt, ag: &BigInt) {
    let (ca, cb) = (cols[a].clone(), cols[b].clone());
    cols[a] = ca.iter().zip(&cb).map(|(p, q)| x * p + y * q).collect();
    cols[b] = ca.iter().zip(&cb).map(|(p, q)| ag * q - bg * p).collect();
}

fn negate(v: &mut IntVector) {
    for x in v.iter_mut() {
        *x = -&*x;
    }
}

// cols[target] -= q * cols[source]
fn axpy(cols: &mut [IntVector], target: usize, source: usize, q: &BigInt) {
    let s = cols[source].clone();
    for (t, s) in cols[target].iter_mut().zip(&s) {
        *t -= q * s;
    }
}

/// `v / gcd(v)`: the primitive integer vector in the direction of `v`.
pub fn primitive(v: &[BigInt]) -> Result<IntVector> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Basis of the integer kernel lattice `{ z ∈ Z^n : Mz = 0 }`.
pub fn kernel_lattice(rows: &[IntVector], n: usize) -> Vec<IntVector> {
    if rows.is_empty() {
        return IntMatrix::identity(n).columns();
    }
    let m = IntMatrix::new(n, rows.to_vec()).expect("row dimension");
    let (h, u) = hnf(&m);
    let rank = (0..n).filter(|&j| h.rows.iter().any(|r| !r[j].is_zero())).count();
    (rank..n).map(|j| u.column(j)).collect()
}

/// A unimodular `V` whose first `r` columns form a basis of the saturated
/// lattice `span(vectors) ∩ Z^n`, where `r` is the rank of `vectors`.
pub fn span_lattice_completion(vectors: &[IntVector], n: usize) -> (IntMatrix, usize) {
    let kernel = kernel_lattice(vectors, n);
    let r = n - kernel.len();
    if kernel.is_empty() || r == 0 {
        return (IntMatrix::identity(n), r);
    }
    let kt = IntMatrix::new(n, kernel).expect("kernel dimension");
    let (_, w) = hnf(&kt);
    let cols = w.columns();
    let reordered: Vec<IntVector> = cols[n - r..].iter().chain(&cols[..n - r]).cloned().collect();
    (IntMatrix::from_columns(n, &reordered), r)
}
