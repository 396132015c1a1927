//! Rational polyhedra in H- and V-representation.
//!
//! An [`HPolyhedron`] is a system of rows `a·x <= b` / `a·x == b` with
//! primitive integer normals and rational right-hand sides. Its canonical
//! form is computed from minimal generators: implicit equalities become
//! explicit rows in reduced echelon form, facet normals are reduced modulo
//! those equalities, and rows are sorted. Two polyhedra are equal exactly
//! when their canonical forms agree row for row.

mod dd;
pub mod io;
pub mod lp;

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use crate::linalg::AffineSubspace;
pub use dd::{cone_generators, ConeGenerators};
pub use lp::LpOutcome;

use crate::error::{Error, Result};
use crate::linalg::{rref_rows, solve_affine, AffineSolution, QMatrix};
use crate::rational::{
    check_dim, dot_iq, format_int_vector, int_to_q, primitive_multiple, QVector, Rational, IntVector,
};

/// One row of an H-representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub normal: IntVector,
    pub rhs: Rational,
    pub equality: bool,
}

impl Constraint {
    /// `normal·x <= rhs`, rescaled by a positive factor to a primitive normal.
    pub fn leq(normal: &[Rational], rhs: Rational) -> Self {
        Self::build(normal, rhs, false)
    }

    pub fn geq(normal: &[Rational], rhs: Rational) -> Self {
        let neg: QVector = normal.iter().map(|x| -x).collect();
        Self::build(&neg, -rhs, false)
    }

    pub fn eq(normal: &[Rational], rhs: Rational) -> Self {
        Self::build(normal, rhs, true)
    }

    pub fn leq_int(normal: &[i64], rhs: Rational) -> Self {
        Self::leq(&crate::rational::qvec_int(normal), rhs)
    }

    pub fn eq_int(normal: &[i64], rhs: Rational) -> Self {
        Self::eq(&crate::rational::qvec_int(normal), rhs)
    }

    fn build(normal: &[Rational], rhs: Rational, equality: bool) -> Self {
        match primitive_multiple(normal) {
            Some((normal, f)) => Constraint {
                normal,
                rhs: rhs * f,
                equality,
            },
            None => Constraint {
                normal: vec![BigInt::zero(); normal.len()],
                rhs,
                equality,
            },
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        let v = dot_iq(&self.normal, x);
        if self.equality {
            v == self.rhs
        } else {
            v <= self.rhs
        }
    }

    pub fn tight_at(&self, x: &[Rational]) -> bool {
        dot_iq(&self.normal, x) == self.rhs
    }

    fn canonical_order(&self, other: &Self) -> Ordering {
        other
            .equality
            .cmp(&self.equality)
            .then_with(|| self.normal.cmp(&other.normal))
            .then_with(|| self.rhs.cmp(&other.rhs))
    }
}

/// Minimal generators of a polyhedron: `conv(points) + cone(rays) + span(lines)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Generators {
    pub points: Vec<QVector>,
    pub rays: Vec<IntVector>,
    pub lines: Vec<IntVector>,
}

impl Generators {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    /// A recession direction when unbounded.
    pub fn recession_direction(&self) -> Option<&IntVector> {
        self.rays.first().or(self.lines.first())
    }
}

#[derive(Debug, Clone)]
pub struct HPolyhedron {
    dim: usize,
    rows: Vec<Constraint>,
    canonical: bool,
    generators: Arc<OnceLock<Generators>>,
}

impl PartialEq for HPolyhedron {
    /// Syntactic comparison of the stored rows. Use [`equals`] for set equality.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rows == other.rows
    }
}

impl Eq for HPolyhedron {}

impl HPolyhedron {
    pub fn new(dim: usize, rows: Vec<Constraint>) -> Result<Self> {
        for r in &rows {
            check_dim(dim, r.normal.len())?;
        }
        let mut kept = Vec::with_capacity(rows.len());
        for r in rows {
            if r.is_trivial() {
                let ok = if r.equality { r.rhs.is_zero() } else { !r.rhs.is_negative() };
                if !ok {
                    return Ok(HPolyhedron::empty(dim));
                }
            } else {
                kept.push(r);
            }
        }
        Ok(HPolyhedron {
            dim,
            rows: kept,
            canonical: false,
            generators: Arc::default(),
        })
    }

    /// The whole space `R^dim`.
    pub fn universe(dim: usize) -> Self {
        HPolyhedron {
            dim,
            rows: Vec::new(),
            canonical: true,
            generators: Arc::default(),
        }
    }

    /// Canonical empty polyhedron, stored as the single row `0·x <= -1`.
    pub fn empty(dim: usize) -> Self {
        let gens = OnceLock::new();
        let _ = gens.set(Generators::default());
        HPolyhedron {
            dim,
            rows: vec![Constraint {
                normal: vec![BigInt::zero(); dim],
                rhs: -Rational::one(),
                equality: false,
            }],
            canonical: true,
            generators: Arc::new(gens),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn equality_rows(&self) -> impl Iterator<Item = &Constraint> {
        self.rows.iter().filter(|r| r.equality)
    }

    pub fn inequality_rows(&self) -> impl Iterator<Item = &Constraint> {
        self.rows.iter().filter(|r| !r.equality && !r.is_trivial())
    }

    /// Minimal generators, computed once by double description.
    pub fn generators(&self) -> &Generators {
        self.generators.get_or_init(|| compute_generators(self))
    }

    pub fn is_empty(&self) -> bool {
        self.generators().is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.generators().is_bounded()
    }

    /// Vertices of a nonempty polytope, sorted lexicographically.
    pub fn vertices(&self) -> Result<&[QVector]> {
        let g = self.generators();
        if let Some(d) = g.recession_direction() {
            return Err(Error::Unbounded(format_int_vector(d)));
        }
        if g.is_empty() {
            return Err(Error::Empty);
        }
        Ok(&g.points)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.rows.iter().all(|r| r.satisfied_by(x))
    }

    pub fn canonicalize(&self) -> HPolyhedron {
        if self.canonical {
            return self.clone();
        }
        let gens = self.generators();
        if gens.is_empty() {
            return HPolyhedron::empty(self.dim);
        }
        let mut out = from_generators(self.dim, gens);
        out.generators = self.generators.clone();
        out
    }

    /// Rows of both systems; not canonicalized.
    pub fn intersect(&self, other: &HPolyhedron) -> Result<HPolyhedron> {
        check_dim(self.dim, other.dim)?;
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        HPolyhedron::new(self.dim, rows)
    }

    pub fn with_rows(&self, extra: impl IntoIterator<Item = Constraint>) -> Result<HPolyhedron> {
        let rows = self.rows.iter().cloned().chain(extra).collect();
        HPolyhedron::new(self.dim, rows)
    }

    /// Max and min of `c·x` over a nonempty polytope, read off its vertices.
    pub fn extent(&self, c: &[BigInt]) -> Result<(Rational, Rational)> {
        let verts = self.vertices()?;
        let mut it = verts.iter().map(|v| dot_iq(c, v));
        let first = it.next().expect("nonempty");
        let (mut lo, mut hi) = (first.clone(), first);
        for v in it {
            if v < lo {
                lo = v;
            } else if v > hi {
                hi = v;
            }
        }
        Ok((hi, lo))
    }
}

/// Vertex list of a bounded polyhedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<QVector>,
}

impl VPolytope {
    /// Accepts any finite point list; use [`vrep`]`(`[`hrep`]`(..))` to prune
    /// to extreme points.
    pub fn new(dim: usize, points: Vec<QVector>) -> Result<Self> {
        for p in &points {
            check_dim(dim, p.len())?;
        }
        Ok(VPolytope { dim, vertices: points })
    }

    pub fn from_int_points(dim: usize, points: &[IntVector]) -> Result<Self> {
        VPolytope::new(dim, points.iter().map(|p| int_to_q(p)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }
}

fn homogenized_rows(p: &HPolyhedron) -> Vec<IntVector> {
    let n = p.dim;
    let mut rows = Vec::with_capacity(p.rows.len() * 2 + 1);
    let mut t_row = vec![BigInt::zero(); n + 1];
    t_row[n] = -BigInt::one();
    rows.push(t_row);
    for r in &p.rows {
        let d = r.rhs.denom().clone();
        let mut row: IntVector = r.normal.iter().map(|a| a * &d).collect();
        row.push(-r.rhs.numer().clone());
        if r.equality {
            rows.push(row.iter().map(|x| -x).collect());
        }
        rows.push(row);
    }
    rows
}

fn compute_generators(p: &HPolyhedron) -> Generators {
    let n = p.dim;
    let cone = cone_generators(&homogenized_rows(p), n + 1);
    let mut g = Generators::default();
    for r in cone.rays {
        let t = r[n].clone();
        if t.is_zero() {
            g.rays.push(r[..n].to_vec());
        } else {
            let t = Rational::from_integer(t);
            g.points
                .push(r[..n].iter().map(|x| Rational::from_integer(x.clone()) / &t).collect());
        }
    }
    g.lines = cone.lines.into_iter().map(|l| l[..n].to_vec()).collect();
    if g.points.is_empty() {
        return Generators::default();
    }
    g.points.sort();
    g.rays.sort();
    g
}

/// Canonical H-representation of `conv(points) + cone(rays) + span(lines)`.
/// `gens.points` must be nonempty.
fn from_generators(n: usize, gens: &Generators) -> HPolyhedron {
    // Dual cone in (a, β): a·p − β <= 0, a·r <= 0, a·l = 0.
    let mut rows: Vec<IntVector> = Vec::new();
    for p in &gens.points {
        let (lcm, scaled) = scale_point(p);
        let mut row = scaled;
        row.push(-lcm);
        rows.push(row);
    }
    for r in &gens.rays {
        let mut row = r.clone();
        row.push(BigInt::zero());
        rows.push(row);
    }
    for l in &gens.lines {
        let mut row = l.clone();
        row.push(BigInt::zero());
        rows.push(row.iter().map(|x| -x).collect());
        rows.push(row);
    }
    let dual = cone_generators(&rows, n + 1);

    let eq_rows: Vec<QVector> = dual.lines.iter().map(|l| int_to_q(l)).collect();
    let (eq_rref, pivots) = rref_rows(eq_rows, n);

    let mut out: Vec<Constraint> = eq_rref
        .iter()
        .map(|row| Constraint::eq(&row[..n], row[n].clone()))
        .collect();

    for ray in &dual.rays {
        let mut a = int_to_q(ray);
        for (e, &p) in eq_rref.iter().zip(&pivots) {
            if !a[p].is_zero() {
                let f = a[p].clone();
                for (x, y) in a.iter_mut().zip(e) {
                    *x -= &f * y;
                }
            }
        }
        if a[..n].iter().all(Zero::is_zero) {
            continue;
        }
        let beta = a[n].clone();
        out.push(Constraint::leq(&a[..n], beta));
    }
    out.sort_by(Constraint::canonical_order);
    out.dedup();
    HPolyhedron {
        dim: n,
        rows: out,
        canonical: true,
        generators: Arc::default(),
    }
}

fn scale_point(p: &[Rational]) -> (BigInt, IntVector) {
    use num_integer::Integer;
    let lcm = p.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled = p
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    (lcm, scaled)
}

/// Exact vertex list of a bounded nonempty polyhedron.
pub fn vrep(p: &HPolyhedron) -> Result<VPolytope> {
    let verts = p.vertices()?;
    Ok(VPolytope {
        dim: p.dim,
        vertices: verts.to_vec(),
    })
}

/// Canonical irredundant H-representation of the convex hull of `v`.
pub fn hrep(v: &VPolytope) -> HPolyhedron {
    if v.vertices.is_empty() {
        return HPolyhedron::empty(v.dim);
    }
    let gens = Generators {
        points: v.vertices.clone(),
        ..Default::default()
    };
    from_generators(v.dim, &gens)
}

pub fn hrep_of_points(dim: usize, points: Vec<QVector>) -> HPolyhedron {
    hrep(&VPolytope { dim, vertices: points })
}

pub fn canonicalize(p: &HPolyhedron) -> HPolyhedron {
    p.canonicalize()
}

fn lp_rows(p: &HPolyhedron) -> (Vec<(QVector, Rational)>, Vec<(QVector, Rational)>) {
    let mut le = Vec::new();
    let mut eq = Vec::new();
    for r in &p.rows {
        let row = (int_to_q(&r.normal), r.rhs.clone());
        if r.equality {
            eq.push(row);
        } else {
            le.push(row);
        }
    }
    (le, eq)
}

/// `max c·x` over `p` by the rational simplex method.
pub fn lp_max(p: &HPolyhedron, c: &[Rational]) -> Result<LpOutcome> {
    check_dim(p.dim, c.len())?;
    let (le, eq) = lp_rows(p);
    lp::maximize(p.dim, &le, &eq, c).map_err(|_| Error::Empty)
}

pub fn contains(p: &HPolyhedron, x: &[Rational]) -> Result<bool> {
    check_dim(p.dim, x.len())?;
    Ok(p.contains(x))
}

/// `p ⊆ q`, decided row by row with `lp_max` over `p`. The empty set is a
/// subset of everything.
pub fn is_subset(p: &HPolyhedron, q: &HPolyhedron) -> Result<bool> {
    check_dim(p.dim, q.dim)?;
    let (le, eq) = lp_rows(p);
    for r in &q.rows {
        let a = int_to_q(&r.normal);
        let mut dirs = vec![(a.clone(), r.rhs.clone())];
        if r.equality {
            dirs.push((a.iter().map(|x| -x).collect(), -r.rhs.clone()));
        }
        for (c, b) in dirs {
            match lp::maximize(p.dim, &le, &eq, &c) {
                Err(_) => return Ok(true),
                Ok(LpOutcome::Unbounded { .. }) => return Ok(false),
                Ok(LpOutcome::Optimal { value, .. }) => {
                    if value > b {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Set equality via canonical forms.
pub fn equals(p: &HPolyhedron, q: &HPolyhedron) -> bool {
    p.dim == q.dim && p.canonicalize().rows == q.canonicalize().rows
}

/// The affine hull of a nonempty polyhedron; its dimension is `dim(p)`.
pub fn affine_hull(p: &HPolyhedron) -> Result<AffineSubspace> {
    let c = p.canonicalize();
    if c.is_empty() {
        return Err(Error::Empty);
    }
    let eqs: Vec<&Constraint> = c.equality_rows().collect();
    let m = QMatrix::new(c.dim, eqs.iter().map(|r| int_to_q(&r.normal)).collect())?;
    let d: QVector = eqs.iter().map(|r| r.rhs.clone()).collect();
    match solve_affine(&m, &d)? {
        AffineSolution::Subspace(s) => Ok(s),
        AffineSolution::NoSolution => Err(Error::Empty),
    }
}

/// Largest `r` with `center + r·[-1,1]^n ⊆ p`, by one LP in `(center, r)`.
pub fn chebyshev_linf(p: &HPolyhedron) -> Result<(QVector, Rational)> {
    let c = p.canonicalize();
    if c.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(d) = c.generators().recession_direction() {
        return Err(Error::Unbounded(format_int_vector(d)));
    }
    if c.equality_rows().next().is_some() {
        return Err(Error::NoInscribedBox);
    }
    let n = c.dim;
    let le: Vec<(QVector, Rational)> = c
        .inequality_rows()
        .map(|r| {
            let mut a = int_to_q(&r.normal);
            let l1: BigInt = r.normal.iter().map(|x| x.abs()).sum();
            a.push(Rational::from_integer(l1));
            (a, r.rhs.clone())
        })
        .collect();
    let mut obj = vec![Rational::zero(); n + 1];
    obj[n] = Rational::one();
    match lp::maximize(n + 1, &le, &[], &obj) {
        Ok(LpOutcome::Optimal { value, argmax }) => {
            if !value.is_positive() {
                return Err(Error::NoInscribedBox);
            }
            Ok((argmax[..n].to_vec(), value))
        }
        _ => Err(Error::NoInscribedBox),
    }
}
