//! Unimodular affine maps `x ↦ Ux + v` (U integer with |det U| = 1, v integer).

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::hnf::IntMatrix;
use crate::polytope::{Constraint, HPolyhedron};
use crate::rational::{check_dim, dot_ii, int_to_q, IntVector, QVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularMap {
    matrix: IntMatrix,
    shift: IntVector,
}

impl UnimodularMap {
    pub fn new(matrix: IntMatrix, shift: IntVector) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotUnimodular("non-square matrix".into()));
        }
        check_dim(matrix.ncols(), shift.len())?;
        let det = matrix.determinant();
        if det.abs() != BigInt::from(1) {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(UnimodularMap { matrix, shift })
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMap {
            matrix: IntMatrix::identity(n),
            shift: vec![BigInt::from(0); n],
        }
    }

    pub fn translation(shift: IntVector) -> Self {
        UnimodularMap {
            matrix: IntMatrix::identity(shift.len()),
            shift,
        }
    }

    pub fn linear(matrix: IntMatrix) -> Result<Self> {
        let n = matrix.ncols();
        UnimodularMap::new(matrix, vec![BigInt::from(0); n])
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn shift(&self) -> &IntVector {
        &self.shift
    }

    pub fn apply(&self, x: &[Rational]) -> QVector {
        self.matrix
            .rows()
            .iter()
            .zip(&self.shift)
            .map(|(row, s)| crate::rational::dot_iq(row, x) + Rational::from_integer(s.clone()))
            .collect()
    }

    pub fn apply_int(&self, x: &[BigInt]) -> IntVector {
        self.matrix
            .rows()
            .iter()
            .zip(&self.shift)
            .map(|(row, s)| dot_ii(row, x) + s)
            .collect()
    }

    /// `x ↦ U⁻¹(x − v)`, with `U⁻¹` from the integer adjugate.
    pub fn inverse(&self) -> UnimodularMap {
        let inv = self
            .matrix
            .unimodular_inverse()
            .expect("validated at construction");
        let shift = inv.mul_vec(&self.shift).into_iter().map(|x| -x).collect();
        UnimodularMap { matrix: inv, shift }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        let matrix = self.matrix.mul(&other.matrix);
        let shift = self
            .matrix
            .mul_vec(&other.shift)
            .into_iter()
            .zip(&self.shift)
            .map(|(a, b)| a + b)
            .collect();
        UnimodularMap { matrix, shift }
    }
}

/// Image `u(P)`. A row `a·x <= b` becomes `(aU⁻¹)·y <= b + aU⁻¹v`; the new
/// normal stays primitive because `U⁻¹` is unimodular.
pub fn apply_unimodular(u: &UnimodularMap, p: &HPolyhedron) -> Result<HPolyhedron> {
    check_dim(u.dim(), p.dim())?;
    let inv = u.matrix.unimodular_inverse()?;
    let cols = inv.columns();
    let shift_q = int_to_q(&u.shift);
    let rows = p
        .rows()
        .iter()
        .map(|r| {
            let normal: IntVector = cols.iter().map(|c| dot_ii(&r.normal, c)).collect();
            let rhs = &r.rhs + crate::rational::dot_iq(&normal, &shift_q);
            Constraint {
                normal,
                rhs,
                equality: r.equality,
            }
        })
        .collect();
    Ok(HPolyhedron::new(p.dim(), rows)?.canonicalize())
}
