//! Hilbert bases of rational cones.
//!
//! The cone is first split as `K ⊕ L` with `L` its lineality space, in a
//! lattice basis adapted to `L ∩ Z^n ⊆ span(C) ∩ Z^n`. The pointed part `K` is
//! triangulated (pulling triangulation, first ray first), the integer points
//! of every half-open fundamental parallelepiped are listed through Hermite
//! coset representatives, and the candidates are reduced to irreducibles in
//! order of a positive grading.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hnf::{hnf, kernel_lattice, span_lattice_completion, IntMatrix};
use crate::linalg::rank_of;
use crate::lattice::enumerate_lattice_points;
use crate::polytope::{cone_generators, hrep_of_points};
use crate::rational::{check_dim, dot_ii, int_to_q, make_primitive, IntVector, Rational};

/// `cone(generators) + span(lineality)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    generators: Vec<IntVector>,
    lineality: Vec<IntVector>,
}

impl Cone {
    /// Vectors are scaled to primitive ones; zero vectors are rejected.
    pub fn new(dim: usize, generators: Vec<IntVector>, lineality: Vec<IntVector>) -> Result<Self> {
        if generators.is_empty() && lineality.is_empty() {
            return Err(Error::InvalidArgument("cone without generators".into()));
        }
        let prim = |v: Vec<IntVector>| -> Result<Vec<IntVector>> {
            v.into_iter()
                .map(|x| {
                    check_dim(dim, x.len())?;
                    crate::hnf::primitive(&x)
                })
                .collect()
        };
        Ok(Cone {
            dim,
            generators: prim(generators)?,
            lineality: prim(lineality)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn lineality(&self) -> &[IntVector] {
        &self.lineality
    }
}

/// A generating set of the semigroup `C ∩ Z^n`, sorted. For a pointed cone
/// this is the unique minimal Hilbert basis; otherwise it is the minimal
/// Hilbert basis of the pointed quotient, lifted with zero lineality
/// coordinates, together with `±` a basis of `L ∩ Z^n`.
pub fn hilbert_basis(c: &Cone) -> Vec<IntVector> {
    let n = c.dim;
    let mut dual_rows: Vec<IntVector> = c.generators.clone();
    for l in &c.lineality {
        dual_rows.push(l.clone());
        dual_rows.push(l.iter().map(|x| -x).collect());
    }
    let dual = cone_generators(&dual_rows, n);
    let mut all_dual: Vec<IntVector> = dual.rays.clone();
    all_dual.extend(dual.lines.iter().cloned());
    let lin_basis = kernel_lattice(&all_dual, n);
    let span_basis = kernel_lattice(&dual.lines, n);
    let (l, s) = (lin_basis.len(), span_basis.len());

    let m = adapted_basis(&lin_basis, &span_basis, n);
    let mcols = m.columns();
    let d = s - l;

    let mut out: BTreeSet<IntVector> = BTreeSet::new();
    for col in &mcols[..l] {
        out.insert(col.clone());
        out.insert(col.iter().map(|x| -x).collect());
    }
    if d > 0 {
        // K = { q : f·q <= 0 } in quotient coordinates q = coefficients of
        // columns l..s.
        let facets: Vec<IntVector> = dual
            .rays
            .iter()
            .map(|r| make_primitive(&mcols[l..s].iter().map(|col| dot_ii(r, col)).collect::<Vec<_>>()))
            .filter(|f: &IntVector| f.iter().any(|x| !x.is_zero()))
            .collect();
        for q in pointed_hilbert_basis(&facets, d) {
            let mut x = vec![BigInt::zero(); n];
            for (qj, col) in q.iter().zip(&mcols[l..s]) {
                for (xi, ci) in x.iter_mut().zip(col) {
                    *xi += qj * ci;
                }
            }
            out.insert(x);
        }
    }
    out.into_iter().collect()
}

// Unimodular M whose first l columns are a basis of L ∩ Z^n and whose first s
// columns are a basis of S ∩ Z^n; `lin` and `span` are saturated bases.
fn adapted_basis(lin: &[IntVector], span: &[IntVector], n: usize) -> IntMatrix {
    let (w, s) = span_lattice_completion(span, n);
    debug_assert_eq!(s, span.len());
    if lin.is_empty() || s == 0 {
        return w;
    }
    let winv = w.unimodular_inverse().expect("unimodular");
    let coords: Vec<IntVector> = lin.iter().map(|v| winv.mul_vec(v)[..s].to_vec()).collect();
    let (vp, _) = span_lattice_completion(&coords, s);
    let wcols = w.columns();
    let mut cols = Vec::with_capacity(n);
    for j in 0..s {
        let mut col = vec![BigInt::zero(); n];
        for (i, wc) in wcols[..s].iter().enumerate() {
            let f = vp.get(i, j);
            if !f.is_zero() {
                for (c, x) in col.iter_mut().zip(wc) {
                    *c += f * x;
                }
            }
        }
        cols.push(col);
    }
    cols.extend(wcols[s..].iter().cloned());
    IntMatrix::from_columns(n, &cols)
}

/// Total `|det|` of the triangulation above which the completion algorithm
/// replaces parallelepiped enumeration.
const PARALLELEPIPED_LIMIT: u64 = 20_000;

/// Minimal Hilbert basis of the full-dimensional pointed cone
/// `{ q ∈ R^d : f·q <= 0 for every row f }`.
pub(crate) fn pointed_hilbert_basis(facets: &[IntVector], d: usize) -> Vec<IntVector> {
    let (rays, inner) = rays_and_inner(facets, d);
    let simplices = triangulate(&rays, &inner, (0..rays.len()).collect(), d);
    let volume: BigInt = simplices
        .iter()
        .map(|s| IntMatrix::from_columns(d, &s.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>()).determinant().abs())
        .sum();
    if volume > BigInt::from(PARALLELEPIPED_LIMIT) {
        if let Some(h) = completion_basis(&rays, &inner, d) {
            return h;
        }
    }
    parallelepiped_basis(&rays, &inner, &simplices, d)
}

// Primitive extreme rays, and inner normals `a = −f` with `a·q >= 0` on the
// cone.
fn rays_and_inner(facets: &[IntVector], d: usize) -> (Vec<IntVector>, Vec<IntVector>) {
    let gens = cone_generators(facets, d);
    debug_assert!(gens.lines.is_empty());
    let mut rays: Vec<IntVector> = gens.rays.iter().map(|r| make_primitive(r)).collect();
    rays.sort();
    rays.dedup();
    let inner = facets.iter().map(|f| f.iter().map(|x| -x).collect()).collect();
    (rays, inner)
}

fn parallelepiped_basis(rays: &[IntVector], inner: &[IntVector], simplices: &[Vec<usize>], d: usize) -> Vec<IntVector> {
    let mut candidates: BTreeSet<IntVector> = rays.iter().cloned().collect();
    for s in simplices {
        let cols: Vec<IntVector> = s.iter().map(|&i| rays[i].clone()).collect();
        simplicial_candidates(cols, d, &mut candidates);
    }
    reduce_candidates(candidates, inner)
}

/// Determinant above which a simplicial cone is subdivided at a low lattice
/// point before its parallelepiped is listed.
const SUBDIVIDE_ABOVE: u64 = 1_000;

// Lattice points of cone(gens) that contain its Hilbert basis. Large cones
// are split at a point x = Σ λ_i g_i with Σ λ_i < 1; the children replacing
// g_i by x have determinants |det|·λ_i.
fn simplicial_candidates(gens: Vec<IntVector>, d: usize, out: &mut BTreeSet<IntVector>) {
    let det = IntMatrix::from_columns(d, &gens).determinant().abs();
    if det > BigInt::from(SUBDIVIDE_ABOVE) {
        if let Some((x, lambda)) = low_point(&gens, d, &det) {
            out.insert(x.clone());
            for (i, l) in lambda.iter().enumerate() {
                if !l.is_zero() {
                    let mut child = gens.clone();
                    child[i] = x.clone();
                    simplicial_candidates(child, d, out);
                }
            }
            return;
        }
    }
    out.extend(parallelepiped_points(&gens, d));
}

// The nonzero lattice point of cone(gens) with least Σ λ_i, if that is below
// 1. Lattice points of t·conv(0, g_1..g_d) are listed for t = 2^-k, doubling
// from roughly `t^d·|det|/d! = 8` expected points.
fn low_point(gens: &[IntVector], d: usize, det: &BigInt) -> Option<(IntVector, Vec<Rational>)> {
    let g = IntMatrix::from_columns(d, gens);
    let adj = g.adjugate();
    let detq = Rational::from_integer(g.determinant());
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    let ratio = det.to_f64().unwrap_or(f64::MAX) / (8.0 * fact);
    let mut k = (ratio.log2() / d as f64).floor().max(0.0) as u32;
    loop {
        let t = Rational::new(BigInt::from(1), BigInt::from(2).pow(k));
        let mut pts = vec![vec![Rational::zero(); d]];
        pts.extend(gens.iter().map(|v| v.iter().map(|x| Rational::from_integer(x.clone()) * &t).collect()));
        let simplex = hrep_of_points(d, pts);
        let best = enumerate_lattice_points(&simplex)
            .ok()?
            .into_iter()
            .filter(|x| x.iter().any(|c| !c.is_zero()))
            .map(|x| {
                let lambda: Vec<Rational> = adj.mul_vec(&x).into_iter().map(|a| Rational::from_integer(a) / &detq).collect();
                (lambda.iter().sum::<Rational>(), x, lambda)
            })
            .filter(|(s, _, _)| *s < Rational::from_integer(BigInt::from(1)))
            .min();
        if let Some((_, x, lambda)) = best {
            return Some((x, lambda));
        }
        if k == 0 {
            return None;
        }
        k -= 1;
    }
}

#[cfg(test)]
pub(crate) fn hilbert_by_parallelepipeds(facets: &[IntVector], d: usize) -> Vec<IntVector> {
    let (rays, inner) = rays_and_inner(facets, d);
    let simplices = triangulate(&rays, &inner, (0..rays.len()).collect(), d);
    parallelepiped_basis(&rays, &inner, &simplices, d)
}

#[cfg(test)]
pub(crate) fn hilbert_by_completion(facets: &[IntVector], d: usize) -> Option<Vec<IntVector>> {
    let (rays, inner) = rays_and_inner(facets, d);
    completion_basis(&rays, &inner, d)
}

// Hilbert basis by successive halfspace cuts. The cone starts as a unimodular
// cone `U = {x : Bx >= 0}` containing it, whose Hilbert basis is the columns
// of `B^{-1}`; each facet `σ` is then added with a completion step. Elements
// carry their coordinates followed by their values on `B` and on the facets,
// all of which are additive. `None` on i128 overflow.
fn completion_basis(rays: &[IntVector], inner: &[IntVector], d: usize) -> Option<Vec<IntVector>> {
    let p = make_primitive(&(0..d).map(|j| inner.iter().map(|a| a[j].clone()).sum()).collect::<Vec<BigInt>>());
    let (w, _) = span_lattice_completion(std::slice::from_ref(&p), d);
    let mut b = vec![p.clone()];
    for wi in &w.columns()[1..] {
        // smallest k >= 0 with (w_i + k p)·r >= 0 on every ray; p·r > 0
        let k = rays
            .iter()
            .map(|r| (-dot_ii(wi, r)).div_ceil(&dot_ii(&p, r)))
            .fold(BigInt::zero(), |acc, x| acc.max(x));
        b.push(wi.iter().zip(&p).map(|(x, y)| x + &k * y).collect());
    }
    let binv = IntMatrix::new(d, b.clone()).ok()?.unimodular_inverse().ok()?;
    let forms: Vec<IntVector> = b.into_iter().chain(inner.iter().cloned()).collect();
    let small_forms: Vec<Vec<i128>> = forms.iter().map(|f| to_i128(f)).collect::<Option<_>>()?;
    let mut elems: Vec<Vec<i128>> = Vec::new();
    for col in binv.columns() {
        let x = to_i128(&col)?;
        let mut e = x.clone();
        for f in &small_forms {
            e.push(f.iter().zip(&x).try_fold(0i128, |acc, (a, b)| acc.checked_add(a.checked_mul(*b)?))?);
        }
        elems.push(e);
    }
    for j in d..forms.len() {
        let bounds = [norm_bound(&forms[..=j], true, d)?, norm_bound(&forms[..=j], false, d)?];
        elems = completion_step(elems, d, d + j, bounds)?;
    }
    let mut out: Vec<IntVector> = elems.iter().map(|e| e[..d].iter().map(|&x| BigInt::from(x)).collect()).collect();
    out.sort();
    Some(out)
}

// Upper bound for `Σ_{i<j} f_i·x + |f_j·x|` over the Hilbert basis of
// `{ f_i·x >= 0 (i < j), ±f_j·x >= 0 }`: every element lies in the half-open
// parallelepiped of some `d` extreme rays, so the sum of the `d` largest ray
// norms bounds it.
fn norm_bound(forms: &[IntVector], positive: bool, d: usize) -> Option<i128> {
    let (last, earlier) = forms.split_last().expect("nonempty");
    let sign = if positive { BigInt::from(1) } else { BigInt::from(-1) };
    let mut rows: Vec<IntVector> = earlier.iter().map(|f| f.iter().map(|x| -x).collect()).collect();
    rows.push(last.iter().map(|x| -(x * &sign)).collect());
    let gens = cone_generators(&rows, d);
    let mut norms: Vec<BigInt> = gens
        .rays
        .iter()
        .map(|r| {
            let r = make_primitive(r);
            earlier.iter().map(|f| dot_ii(f, &r)).sum::<BigInt>() + (dot_ii(last, &r) * &sign)
        })
        .collect();
    norms.sort_by(|a, b| b.cmp(a));
    norms.iter().take(d).sum::<BigInt>().to_i128()
}

// From the Hilbert basis of `D` (values `d..c` nonnegative) to the Hilbert
// bases of `D ∩ {σ >= 0}` and `D ∩ {σ <= 0}`, `σ` the value at index `c`;
// the first is returned. Write `g ⊑ s` when `g <= s` on the earlier values and
// `g_c` is sign-compatible with `s_c` and no larger in absolute value. Sums of
// opposite-sign pairs are visited in order of the norm `Σ values + |σ|` and
// kept unless some kept element is `⊑` them; sums above the side's norm bound
// cannot be irreducible and are skipped.
fn completion_step(elems: Vec<Vec<i128>>, d: usize, c: usize, bounds: [i128; 2]) -> Option<Vec<Vec<i128>>> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let below = |g: &[i128], s: &[i128]| {
        (g[c] == 0 || (g[c].signum() == s[c].signum() && g[c].abs() <= s[c].abs()))
            && g[d..c].iter().zip(&s[d..c]).all(|(a, b)| a <= b)
    };
    let norm = |s: &[i128]| -> Option<i128> { s[d..c].iter().try_fold(s[c].checked_abs()?, |acc, x| acc.checked_add(*x)) };
    let bound = |s: &[i128]| if s[c] >= 0 { bounds[0] } else { bounds[1] };
    let add = |x: &[i128], y: &[i128]| -> Option<Vec<i128>> { x.iter().zip(y).map(|(a, b)| a.checked_add(*b)).collect() };

    let mut all: Vec<(i128, Vec<i128>)> = Vec::new();
    let (mut pos, mut neg): (Vec<usize>, Vec<usize>) = (Vec::new(), Vec::new());
    let mut heap: BinaryHeap<Reverse<(i128, usize, usize)>> = BinaryHeap::new();
    let mut admit = |e: Vec<i128>, all: &mut Vec<(i128, Vec<i128>)>, heap: &mut BinaryHeap<_>| -> Option<()> {
        let i = all.len();
        let ne = norm(&e)?;
        let (mine, other) = match e[c].signum() {
            1 => (&mut pos, &neg),
            -1 => (&mut neg, &pos),
            _ => {
                all.push((ne, e));
                return Some(());
            }
        };
        for &j in other.iter() {
            let s = add(&e, all[j].1.as_slice())?;
            let ns = norm(&s)?;
            if ns <= bound(&s) {
                heap.push(Reverse((ns, i.min(j), i.max(j))));
            }
        }
        mine.push(i);
        all.push((ne, e));
        Some(())
    };
    for e in elems {
        admit(e, &mut all, &mut heap)?;
    }
    while let Some(Reverse((ns, i, j))) = heap.pop() {
        let s = add(&all[i].1, &all[j].1)?;
        if !all.iter().any(|(ng, g)| *ng <= ns && below(g, &s)) {
            admit(s, &mut all, &mut heap)?;
        }
    }
    let kept: Vec<(Vec<i128>, Vec<i128>)> = all
        .into_iter()
        .filter(|(_, e)| e[c] >= 0)
        .map(|(_, e)| (e[d..=c].to_vec(), e))
        .collect();
    Some(irreducibles(kept, |v| v.iter().sum::<i128>()))
}

fn to_i128(v: &[BigInt]) -> Option<Vec<i128>> {
    v.iter().map(|x| x.to_i128()).collect()
}

// Irreducible elements among the candidates. With `vals(x) = (a·x)_a` over
// the inner normals, `x − h` lies in the cone iff `vals(h) <= vals(x)`
// componentwise, so candidates are compared through their value vectors in
// order of degree `Σ vals`. Candidates of equal degree cannot reduce one
// another.
fn reduce_candidates(candidates: BTreeSet<IntVector>, inner: &[IntVector]) -> Vec<IntVector> {
    let valued: Vec<(Vec<BigInt>, IntVector)> = candidates
        .into_iter()
        .map(|x| (inner.iter().map(|a| dot_ii(a, &x)).collect(), x))
        .collect();
    let small: Option<Vec<(Vec<i64>, IntVector)>> = valued
        .iter()
        .map(|(v, x)| Some((v.iter().map(|t| t.to_i64()).collect::<Option<Vec<_>>>()?, x.clone())))
        .collect();
    let mut basis = match small {
        Some(s) => irreducibles(s, |v| v.iter().map(|&t| i128::from(t)).sum::<i128>()),
        None => irreducibles(valued, |v| v.iter().sum::<BigInt>()),
    };
    basis.sort();
    basis
}

fn irreducibles<T, P, D>(mut valued: Vec<(Vec<T>, P)>, degree: impl Fn(&[T]) -> D) -> Vec<P>
where
    T: Ord + Clone + Send + Sync,
    P: Clone + Send + Sync,
    D: Ord,
{
    valued.sort_by_cached_key(|(v, _)| (degree(v), v.clone()));
    let mut kept: Vec<usize> = Vec::new();
    let mut start = 0;
    for block in valued.chunk_by(|a, b| degree(&a.0) == degree(&b.0)) {
        let fresh: Vec<bool> = block
            .par_iter()
            .map(|(v, _)| !kept.iter().any(|&h| valued[h].0.iter().zip(v).all(|(a, b)| a <= b)))
            .collect();
        kept.extend((start..start + block.len()).filter(|&k| fresh[k - start]));
        start += block.len();
    }
    kept.into_iter().map(|k| valued[k].1.clone()).collect()
}

/// Pulling triangulation of the `k`-dimensional cone spanned by the rays in
/// `face`: cone the first ray with a triangulation of every facet not
/// containing it.
fn triangulate(rays: &[IntVector], inner: &[IntVector], face: Vec<usize>, k: usize) -> Vec<Vec<usize>> {
    if face.len() == k {
        return vec![face];
    }
    let v = face[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in inner {
        let g: Vec<usize> = face.iter().copied().filter(|&i| dot_ii(a, &rays[i]).is_zero()).collect();
        if g.len() == face.len() || g.contains(&v) || g.len() + 1 < k {
            continue;
        }
        let q: Vec<_> = g.iter().map(|&i| int_to_q(&rays[i])).collect();
        if rank_of(&q, rays[v].len()) == k - 1 {
            facets.insert(g);
        }
    }
    let mut out = Vec::new();
    for g in facets {
        for mut s in triangulate(rays, inner, g, k - 1) {
            s.insert(0, v);
            out.push(s);
        }
    }
    out
}

/// Nonzero integer points of `{ Σ λ_i g_i : 0 <= λ_i < 1 }` for linearly
/// independent `g_1..g_d` in `Z^d`. Coset representatives `z` of
/// `Z^d / GZ^d` are read off the Hermite form of `G`; with `D = |det G|` and
/// `A = ±adj G` the point is `Σ ((A z)_i mod D) g_i / D`.
/// Nonzero lattice points `Σ (u_i/D) g_i` of the half-open parallelepiped
/// of `gens` (`D = |det|`) that are minimal in the componentwise order on
/// `u`. Sums of parallelepiped points stay inside it only when no coordinate
/// wraps, so these together with `gens` form the Hilbert basis of the
/// simplicial cone.
pub(crate) fn parallelepiped_points(gens: &[IntVector], d: usize) -> Vec<IntVector> {
    let g = IntMatrix::from_columns(d, gens);
    let (h, _) = hnf(&g);
    let diag: Vec<BigInt> = (0..d).map(|i| h.get(i, i).clone()).collect();
    let det = g.determinant();
    assert!(!det.is_zero(), "independent generators");
    let sign = det.signum();
    let adj: Vec<IntVector> = g.adjugate().rows().iter().map(|r| r.iter().map(|x| x * &sign).collect()).collect();
    let det = det.abs();
    if let Some(out) = parallelepiped_small(gens, &adj, &det, &diag) {
        return out;
    }
    let mut coords = Vec::new();
    let mut z = vec![BigInt::zero(); d];
    loop {
        let u: IntVector = adj.iter().map(|r| dot_ii(r, &z).mod_floor(&det)).collect();
        if u.iter().any(|x| !x.is_zero()) {
            coords.push((u.clone(), u));
        }
        if !odometer(&mut z, &diag, BigInt::zero(), |x| *x += 1) {
            break;
        }
    }
    irreducibles(coords, |u| u.iter().sum::<BigInt>())
        .into_iter()
        .map(|u| (0..d).map(|i| gens.iter().zip(&u).map(|(gc, ui)| &gc[i] * ui).sum::<BigInt>() / &det).collect())
        .collect()
}

// The same enumeration in i128; `None` on overflow.
fn parallelepiped_small(gens: &[IntVector], adj: &[IntVector], det: &BigInt, diag: &[BigInt]) -> Option<Vec<IntVector>> {
    let small = |v: &[BigInt]| v.iter().map(|x| x.to_i128()).collect::<Option<Vec<i128>>>();
    let gens: Vec<Vec<i128>> = gens.iter().map(|v| small(v)).collect::<Option<_>>()?;
    let adj: Vec<Vec<i128>> = adj.iter().map(|v| small(v)).collect::<Option<_>>()?;
    let diag = small(diag)?;
    let det = det.to_i128()?;
    let d = diag.len();
    let dot = |a: &[i128], b: &[i128]| {
        a.iter().zip(b).try_fold(0i128, |acc, (x, y)| acc.checked_add(x.checked_mul(*y)?))
    };
    let mut coords = Vec::new();
    let mut z = vec![0i128; d];
    loop {
        let u: Vec<i128> = adj.iter().map(|r| Some(dot(r, &z)?.rem_euclid(det))).collect::<Option<_>>()?;
        if u.iter().any(|&x| x != 0) {
            coords.push((u.clone(), u));
        }
        if !odometer(&mut z, &diag, 0, |x| *x += 1) {
            break;
        }
    }
    let mut out = Vec::new();
    for u in irreducibles(coords, |u| u.iter().sum::<i128>()) {
        let mut p = Vec::with_capacity(d);
        for i in 0..d {
            let col: Vec<i128> = gens.iter().map(|g| g[i]).collect();
            p.push(BigInt::from(dot(&col, &u)? / det));
        }
        out.push(p);
    }
    Some(out)
}

// Advances `z` over the box `0 <= z_i < bound_i`; false once it wraps.
fn odometer<T: PartialOrd + Clone>(z: &mut [T], bound: &[T], zero: T, inc: impl Fn(&mut T)) -> bool {
    for (zi, b) in z.iter_mut().zip(bound) {
        inc(zi);
        if *zi < *b {
            return true;
        }
        *zi = zero.clone();
    }
    false
}
