//! The Chvátal-Gomory closure operator and the quantities built on it.
//!
//! The closure of a polytope is computed exactly through a TDI system: at each
//! vertex the normals of the tight rows generate the normal cone (equality
//! normals span its lineality), a Hilbert basis of every normal cone is
//! collected, and every collected `c` yields the cut `c·x <= ⌊max_P c·x⌋`.

pub mod hilbert;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

pub use hilbert::{hilbert_basis, Cone};

use crate::error::{Error, Result};
use crate::lattice::{affine_hull_integer, integer_hull};
use crate::polytope::{equals, Constraint, HPolyhedron};
use crate::rational::{dot_iq, floor, format_int_vector, int_to_q, max_abs, sub, IntVector, QVector, Rational};

fn bounded_canonical(p: &HPolyhedron) -> Result<HPolyhedron> {
    let c = p.canonicalize();
    if let Some(d) = c.generators().recession_direction() {
        return Err(Error::ClosureUnbounded(format_int_vector(d)));
    }
    Ok(c)
}

fn max_over(verts: &[QVector], c: &[BigInt]) -> Rational {
    verts
        .iter()
        .map(|v| dot_iq(c, v))
        .max()
        .expect("nonempty vertex list")
}

/// Normal cone of the canonical polytope `p` at its vertex `v`.
pub fn normal_cone(p: &HPolyhedron, v: &[Rational]) -> Result<Cone> {
    let gens = p
        .inequality_rows()
        .filter(|r| r.tight_at(v))
        .map(|r| r.normal.clone())
        .collect();
    let lin = p.equality_rows().map(|r| r.normal.clone()).collect();
    Cone::new(p.dim(), gens, lin)
}

/// Union of the Hilbert bases of all vertex normal cones, sorted. These are
/// the left-hand sides of a TDI system for `p`.
pub fn tdi_directions(p: &HPolyhedron) -> Result<Vec<IntVector>> {
    let c = bounded_canonical(p)?;
    if c.is_empty() || c.dim() == 0 {
        return Ok(Vec::new());
    }
    let verts = c.vertices()?;
    let bases: Vec<Vec<IntVector>> = verts
        .par_iter()
        .map(|v| normal_cone(&c, v).map(|k| hilbert_basis(&k)))
        .collect::<Result<_>>()?;
    let set: BTreeSet<IntVector> = bases.into_iter().flatten().collect();
    Ok(set.into_iter().collect())
}

/// A cut `c·x <= floor` that rounds a fractional maximum.
pub type Cut = (IntVector, BigInt);

fn rounded_cuts(verts: &[QVector], dirs: &[IntVector]) -> Vec<Cut> {
    dirs.iter()
        .filter_map(|c| {
            let delta = max_over(verts, c);
            (!delta.is_integer()).then(|| (c.clone(), floor(&delta)))
        })
        .collect()
}

fn apply_cuts(p: &HPolyhedron, cuts: &[Cut]) -> Result<HPolyhedron> {
    let rows = cuts.iter().map(|(c, f)| Constraint {
        normal: c.clone(),
        rhs: Rational::from_integer(f.clone()),
        equality: false,
    });
    Ok(p.with_rows(rows)?.canonicalize())
}

/// The CG closure `P'` together with the cuts that rounded a fractional
/// right-hand side.
pub fn cg_closure_with_cuts(p: &HPolyhedron) -> Result<(HPolyhedron, Vec<Cut>)> {
    let c = bounded_canonical(p)?;
    if c.is_empty() {
        return Ok((c, Vec::new()));
    }
    // an integral vertex v gives floor(c·v) = c·v for every c in its normal
    // cone, so only fractional vertices contribute cuts
    let verts = c.vertices()?;
    let bases: Vec<Vec<IntVector>> = verts
        .par_iter()
        .filter(|v| v.iter().any(|x| !x.is_integer()))
        .map(|v| normal_cone(&c, v).map(|k| hilbert_basis(&k)))
        .collect::<Result<_>>()?;
    let dirs: BTreeSet<IntVector> = bases.into_iter().flatten().collect();
    let dirs: Vec<IntVector> = dirs.into_iter().collect();
    let cuts = rounded_cuts(verts, &dirs);
    Ok((apply_cuts(&c, &cuts)?, cuts))
}

/// The CG closure `P'` of a polytope, canonical. Unbounded input is rejected.
pub fn cg_closure(p: &HPolyhedron) -> Result<HPolyhedron> {
    cg_closure_with_cuts(p).map(|(q, _)| q)
}

/// `P` cut by every CG inequality with `0 < ‖c‖∞ <= bound`. Always contains
/// the true closure.
pub fn cg_closure_bruteforce(p: &HPolyhedron, bound: u32) -> Result<HPolyhedron> {
    let c = bounded_canonical(p)?;
    if c.is_empty() {
        return Ok(c);
    }
    let n = c.dim();
    let b = bound as i64;
    let mut dirs = Vec::new();
    let mut cur = vec![-b; n];
    'outer: loop {
        let v: IntVector = cur.iter().map(|&x| BigInt::from(x)).collect();
        if crate::rational::gcd_all(&v) == BigInt::from(1) {
            dirs.push(v);
        }
        let mut i = n;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                for x in cur[i + 1..].iter_mut() {
                    *x = -b;
                }
                break;
            }
        }
    }
    let cuts = rounded_cuts(c.vertices()?, &dirs);
    apply_cuts(&c, &cuts)
}

/// True when every TDI direction of `p` has `‖c‖∞ <= bound`, so that the
/// brute-force closure with that bound is exact.
pub fn bruteforce_certified(p: &HPolyhedron, bound: u32) -> Result<bool> {
    let b = BigInt::from(bound);
    Ok(tdi_directions(p)?.iter().all(|c| max_abs(c) <= b))
}

/// `P = Q^(0), Q^(1), …` with the cuts applied at each step.
#[derive(Debug, Clone)]
pub struct ClosureTrace {
    pub steps: Vec<HPolyhedron>,
    /// `cut_log[k]` produced `steps[k + 1]` from `steps[k]`.
    pub cut_log: Vec<Vec<Cut>>,
    /// First index `j` with `steps[j + 1] = steps[j]`, if reached.
    pub fixpoint_at: Option<usize>,
}

impl ClosureTrace {
    pub fn last(&self) -> &HPolyhedron {
        self.steps.last().expect("trace holds at least P")
    }
}

/// Up to `k` closure rounds; stops at the first fixpoint.
pub fn iterate_closure(p: &HPolyhedron, k: usize) -> Result<ClosureTrace> {
    let mut steps = vec![bounded_canonical(p)?];
    let mut cut_log = Vec::new();
    let mut fixpoint_at = None;
    for j in 0..k {
        let (next, cuts) = cg_closure_with_cuts(&steps[j])?;
        let same = next.rows() == steps[j].rows();
        steps.push(next);
        cut_log.push(cuts);
        if same {
            fixpoint_at = Some(j);
            break;
        }
    }
    Ok(ClosureTrace {
        steps,
        cut_log,
        fixpoint_at,
    })
}

/// An integer quantity searched up to a cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capped {
    Value(usize),
    /// Not reached within the cap (the cap is carried along).
    ExceedsCap(usize),
}

impl Capped {
    pub fn value(self) -> Option<usize> {
        match self {
            Capped::Value(v) => Some(v),
            Capped::ExceedsCap(_) => None,
        }
    }

    /// True when the quantity is known to be at least `t`.
    pub fn at_least(self, t: usize) -> bool {
        match self {
            Capped::Value(v) => v >= t,
            Capped::ExceedsCap(c) => c + 1 >= t,
        }
    }
}

impl std::fmt::Display for Capped {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Capped::Value(v) => write!(f, "{v}"),
            Capped::ExceedsCap(c) => write!(f, ">{c}"),
        }
    }
}

// Smallest p <= cap with pred(Q^(p)); closure steps computed lazily.
fn first_step(p: &HPolyhedron, cap: usize, mut pred: impl FnMut(&HPolyhedron) -> Result<bool>) -> Result<Capped> {
    let mut cur = bounded_canonical(p)?;
    for j in 0..=cap {
        if pred(&cur)? {
            return Ok(Capped::Value(j));
        }
        if j == cap {
            break;
        }
        let next = cg_closure(&cur)?;
        if next.rows() == cur.rows() {
            break;
        }
        cur = next;
    }
    Ok(Capped::ExceedsCap(cap))
}

/// CG rank: least `p` with `Q^(p) = Q_I`.
pub fn cg_rank(p: &HPolyhedron, cap: usize) -> Result<Capped> {
    let target = integer_hull(p)?;
    first_step(p, cap, |q| Ok(equals(q, &target)))
}

/// Least `p` with `Q^(p) ⊆ aff(Q_I)`.
pub fn affine_rank(p: &HPolyhedron, cap: usize) -> Result<Capped> {
    let aff = affine_hull_integer(p)?.ok_or(Error::NoIntegerPoints)?;
    first_step(p, cap, |q| {
        if q.is_empty() {
            return Ok(true);
        }
        Ok(q.vertices()?.iter().all(|v| aff.contains(v)))
    })
}

/// Checks `F^(t) = F ∩ P^(t)` for a nonempty face `F` of `P`.
pub fn face_closure_check(p: &HPolyhedron, f: &HPolyhedron, t: usize) -> Result<bool> {
    let pc = bounded_canonical(p)?;
    let fc = f.canonicalize();
    if fc.is_empty() || pc.dim() != fc.dim() {
        return Err(Error::NotAFace);
    }
    let fv = fc.vertices()?;
    let tight: Vec<Constraint> = pc
        .rows()
        .iter()
        .map(|r| {
            let mut r = r.clone();
            if fv.iter().all(|v| r.tight_at(v)) {
                r.equality = true;
            }
            r
        })
        .collect();
    let face = HPolyhedron::new(pc.dim(), tight)?;
    if !equals(&face, &fc) {
        return Err(Error::NotAFace);
    }
    let lhs = iterate_closure(&fc, t)?;
    let rhs = iterate_closure(&pc, t)?;
    let both = fc.intersect(rhs.last())?;
    Ok(equals(lhs.last(), &both))
}

/// Least `k` with `c·x <= δ` valid for `Q^(k)`; the inequality must be valid
/// for the integer hull.
pub fn cut_depth(p: &HPolyhedron, c: &[BigInt], delta: &Rational, cap: usize) -> Result<Capped> {
    crate::rational::check_dim(p.dim(), c.len())?;
    let hull = integer_hull(p)?;
    if !hull.is_empty() && max_over(hull.vertices()?, c) > *delta {
        return Err(Error::InvalidArgument("inequality is not valid for the integer hull".into()));
    }
    first_step(p, cap, |q| {
        if q.is_empty() {
            return Ok(true);
        }
        Ok(max_over(q.vertices()?, c) <= *delta)
    })
}

/// Outcome of [`cch_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CchReport {
    pub hypothesis_ok: bool,
    /// `x^j = x − j·v` for `j = 1..=p`.
    pub points: Vec<QVector>,
}

/// Sufficient test for the hypothesis of the cone-chain lemma.
///
/// **This is not the lemma's exact hypothesis.** The lemma asks that every
/// valid inequality `c·x <= δ` of `P_I` with `c·v < 1` satisfy `c·x^j <= δ`;
/// for integral `v` and `c` that means `c·v <= 0`. This function instead
/// checks `x^j ∈ P_I + cone(v)` for each `j`, which implies the hypothesis:
/// writing `x^j = y + λv` with `y ∈ P_I`, `λ >= 0` gives
/// `c·x^j = c·y + λ c·v <= δ`. When it returns true, the lemma yields
/// `x^j ∈ P^(j)` for `j = 1..=p`; those points are returned.
pub fn cch_check(p: &HPolyhedron, x: &[Rational], v: &[BigInt], steps: usize) -> Result<CchReport> {
    crate::rational::check_dim(p.dim(), x.len())?;
    crate::rational::check_dim(p.dim(), v.len())?;
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    if !p.contains(x) {
        return Err(Error::PointOutside);
    }
    let hull = integer_hull(p)?;
    let vq = int_to_q(v);
    let points: Vec<QVector> = (1..=steps)
        .map(|j| {
            let shift: QVector = vq.iter().map(|a| a * Rational::from_integer(BigInt::from(j))).collect();
            sub(x, &shift)
        })
        .collect();
    let hypothesis_ok = !hull.is_empty() && points.iter().all(|xj| in_hull_plus_ray(&hull, xj, v));
    Ok(CchReport { hypothesis_ok, points })
}

// ∃ λ >= 0 with x − λv in the polyhedron: an interval problem in λ.
fn in_hull_plus_ray(h: &HPolyhedron, x: &[Rational], v: &[BigInt]) -> bool {
    let mut lo = Rational::zero();
    let mut hi: Option<Rational> = None;
    for r in h.rows() {
        // a·x − λ a·v  (<=|==)  b
        let av = Rational::from_integer(crate::rational::dot_ii(&r.normal, v));
        let slack = &r.rhs - dot_iq(&r.normal, x);
        if av.is_zero() {
            let ok = if r.equality { slack.is_zero() } else { !slack.is_negative() };
            if !ok {
                return false;
            }
            continue;
        }
        // −λ·av <= slack
        let bound = -(&slack / &av);
        if r.equality {
            lo = lo.max(bound.clone());
            hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
        } else if av.is_positive() {
            lo = lo.max(bound);
        } else {
            hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
        }
    }
    hi.is_none_or(|h| lo <= h)
}
