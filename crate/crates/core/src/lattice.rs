//! Integer points of polytopes: enumeration, integer hulls, affine hulls of
//! integer points, lattice width and unimodular normalization.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hnf::{span_lattice_completion, IntMatrix};
use crate::linalg::AffineSubspace;
use crate::polytope::lp::{self, LpOutcome};
use crate::polytope::{chebyshev_linf, hrep_of_points, HPolyhedron};
use crate::rational::{
    ceil, check_dim, dot_iq, floor, format_int_vector, gcd_all, int_to_q, leading_positive, sub,
    IntVector, QVector, Rational,
};
use crate::unimodular::{apply_unimodular, UnimodularMap};

/// Default box `‖c‖∞ <= 10` for the width search.
pub const DEFAULT_WIDTH_BOUND: u32 = 10;

// A row restricted to the coordinates from `start` on, with the fixed prefix
// moved to the right-hand side.
struct Row<'a> {
    normal: &'a [BigInt],
    rhs: &'a Rational,
    equality: bool,
}

fn residual(row: &Row, prefix: &[BigInt]) -> Rational {
    row.rhs - Rational::from_integer(prefix.iter().zip(row.normal).map(|(x, a)| x * a).sum())
}

fn bounded_rows(p: &HPolyhedron) -> Result<Option<HPolyhedron>> {
    let c = p.canonicalize();
    if c.is_empty() {
        return Ok(None);
    }
    if let Some(d) = c.generators().recession_direction() {
        return Err(Error::Unbounded(format_int_vector(d)));
    }
    Ok(Some(c))
}

/// Integer range of coordinate `k` over the fiber with `x_0..x_{k-1}` fixed,
/// or `None` when the fiber is empty.
fn fiber_range(rows: &[Row], n: usize, prefix: &[BigInt]) -> Option<(BigInt, BigInt)> {
    let k = prefix.len();
    if k + 1 == n {
        return last_range(rows, prefix);
    }
    let m = n - k;
    let mut le = Vec::new();
    let mut eq = Vec::new();
    for r in rows {
        let a = int_to_q(&r.normal[k..]);
        let b = residual(r, prefix);
        if a.iter().all(Zero::is_zero) {
            let ok = if r.equality { b.is_zero() } else { !b.is_negative() };
            if !ok {
                return None;
            }
            continue;
        }
        if r.equality {
            eq.push((a, b));
        } else {
            le.push((a, b));
        }
    }
    let mut c = vec![Rational::zero(); m];
    c[0] = Rational::one();
    let hi = match lp::maximize(m, &le, &eq, &c).ok()? {
        LpOutcome::Optimal { value, .. } => floor(&value),
        LpOutcome::Unbounded { .. } => return None,
    };
    c[0] = -Rational::one();
    let lo = match lp::maximize(m, &le, &eq, &c).ok()? {
        LpOutcome::Optimal { value, .. } => ceil(&-value),
        LpOutcome::Unbounded { .. } => return None,
    };
    (lo <= hi).then_some((lo, hi))
}

fn last_range(rows: &[Row], prefix: &[BigInt]) -> Option<(BigInt, BigInt)> {
    let k = prefix.len();
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for r in rows {
        let a = &r.normal[k];
        let s = residual(r, prefix);
        if a.is_zero() {
            let ok = if r.equality { s.is_zero() } else { !s.is_negative() };
            if !ok {
                return None;
            }
            continue;
        }
        let q = s / Rational::from_integer(a.clone());
        if r.equality {
            if !q.is_integer() {
                return None;
            }
            let v = q.to_integer();
            lo = Some(lo.map_or(v.clone(), |l| l.max(v.clone())));
            hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
        } else if a.is_positive() {
            let v = floor(&q);
            hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
        } else {
            let v = ceil(&q);
            lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) if l <= h => Some((l, h)),
        _ => None,
    }
}

fn enumerate_from(rows: &[Row], n: usize, prefix: &mut IntVector, out: &mut Vec<IntVector>) {
    let Some((lo, hi)) = fiber_range(rows, n, prefix) else {
        return;
    };
    let mut v = lo;
    while v <= hi {
        prefix.push(v.clone());
        if prefix.len() == n {
            out.push(prefix.clone());
        } else {
            enumerate_from(rows, n, prefix, out);
        }
        prefix.pop();
        v += 1;
    }
}

/// `P ∩ Z^n` in lexicographic order, by fiber recursion: each coordinate is
/// bounded by two LPs over the current fiber, the last one directly from the
/// rows. The fibers of the first coordinate are processed in parallel and
/// concatenated in order.
pub fn enumerate_lattice_points(p: &HPolyhedron) -> Result<Vec<IntVector>> {
    let Some(c) = bounded_rows(p)? else {
        return Ok(Vec::new());
    };
    let n = c.dim();
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    let rows: Vec<Row> = c
        .rows()
        .iter()
        .map(|r| Row {
            normal: &r.normal,
            rhs: &r.rhs,
            equality: r.equality,
        })
        .collect();
    let Some((lo, hi)) = fiber_range(&rows, n, &[]) else {
        return Ok(Vec::new());
    };
    let firsts: Vec<BigInt> = num_iter_range(&lo, &hi);
    let chunks: Vec<Vec<IntVector>> = firsts
        .par_iter()
        .map(|x0| {
            let mut out = Vec::new();
            let mut prefix = vec![x0.clone()];
            if n == 1 {
                out.push(prefix);
            } else {
                enumerate_from(&rows, n, &mut prefix, &mut out);
            }
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

fn num_iter_range(lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
    let mut v = lo.clone();
    let mut out = Vec::new();
    while &v <= hi {
        out.push(v.clone());
        v += 1;
    }
    out
}

/// `conv(P ∩ Z^n)`; the empty polyhedron when there are no integer points.
pub fn integer_hull(p: &HPolyhedron) -> Result<HPolyhedron> {
    let pts = enumerate_lattice_points(p)?;
    if pts.is_empty() {
        return Ok(HPolyhedron::empty(p.dim()));
    }
    Ok(hrep_of_points(p.dim(), pts.iter().map(|x| int_to_q(x)).collect()))
}

/// `aff(P ∩ Z^n)`, or `None` when `P` has no integer points.
pub fn affine_hull_integer(p: &HPolyhedron) -> Result<Option<AffineSubspace>> {
    let pts = enumerate_lattice_points(p)?;
    let q: Vec<QVector> = pts.iter().map(|x| int_to_q(x)).collect();
    Ok(AffineSubspace::from_points(&q))
}

/// Integer points in the relative interior of a bounded polyhedron: those
/// satisfying every facet inequality of the canonical form strictly.
pub fn relative_interior_lattice_points(p: &HPolyhedron) -> Result<Vec<IntVector>> {
    let Some(c) = bounded_rows(p)? else {
        return Ok(Vec::new());
    };
    let pts = enumerate_lattice_points(&c)?;
    Ok(pts
        .into_iter()
        .filter(|x| {
            let xq = int_to_q(x);
            c.inequality_rows().all(|r| dot_iq(&r.normal, &xq) < r.rhs)
        })
        .collect())
}

/// Result of a lattice width search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthResult {
    /// `None` stands for `+∞`.
    pub width: Option<Rational>,
    /// Primitive minimizing direction with its first nonzero entry positive.
    pub direction: Option<IntVector>,
    /// True when no direction outside the searched box can do better.
    pub certified: bool,
    pub search_bound: u32,
}

/// Primitive integer directions with `‖c‖∞ <= bound` and first nonzero entry
/// positive, in lexicographic order.
pub fn search_directions(n: usize, bound: u32) -> Vec<IntVector> {
    let b = bound as i64;
    let mut out = Vec::new();
    let mut cur = vec![-b; n];
    loop {
        let c: IntVector = cur.iter().map(|&x| BigInt::from(x)).collect();
        if leading_positive(&c) && gcd_all(&c).is_one() {
            out.push(c);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
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
}

/// Minimum of `max c·x − min c·x` over primitive `c` with `‖c‖∞ <= bound`.
///
/// Lower-dimensional polyhedra get width 0 along their first equality normal.
/// For full-dimensional polytopes the result is certified when
/// `width <= 2·r·bound`, where `r` is the inscribed ℓ∞ radius: a box of radius
/// `r` has extent `2r‖c‖₁` along `c`, so any better direction satisfies
/// `‖c‖∞ <= ‖c‖₁ < width/(2r) <= bound`. Ties go to the lexicographically
/// smallest direction.
pub fn lattice_width(p: &HPolyhedron, bound: u32) -> Result<WidthResult> {
    if bound == 0 {
        return Err(Error::InvalidArgument("search bound must be positive".into()));
    }
    let c = p.canonicalize();
    if c.is_empty() {
        return Err(Error::Empty);
    }
    let n = c.dim();
    if let Some(eq) = c.equality_rows().next() {
        let mut d = eq.normal.clone();
        if !leading_positive(&d) {
            d = d.iter().map(|x| -x).collect();
        }
        return Ok(WidthResult {
            width: Some(Rational::zero()),
            direction: Some(d),
            certified: true,
            search_bound: bound,
        });
    }
    let gens = c.generators();
    let recession: Vec<&IntVector> = gens.rays.iter().chain(&gens.lines).collect();
    let verts = &gens.points;
    let dirs = search_directions(n, bound);
    let best = dirs
        .par_iter()
        .filter(|d| recession.iter().all(|r| crate::rational::dot_ii(d, r).is_zero()))
        .map(|d| {
            let mut it = verts.iter().map(|v| dot_iq(d, v));
            let first = it.next().expect("nonempty");
            let (mut lo, mut hi) = (first.clone(), first);
            for v in it {
                if v < lo {
                    lo = v;
                } else if v > hi {
                    hi = v;
                }
            }
            (hi - lo, d)
        })
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let Some((w, d)) = best else {
        return Ok(WidthResult {
            width: None,
            direction: None,
            certified: false,
            search_bound: bound,
        });
    };
    let certified = gens.is_bounded()
        && match chebyshev_linf(&c) {
            Ok((_, r)) => w <= Rational::from_integer(BigInt::from(2 * bound)) * r,
            Err(_) => false,
        };
    Ok(WidthResult {
        width: Some(w),
        direction: Some(d.clone()),
        certified,
        search_bound: bound,
    })
}

/// A unimodular `u` mapping `aff(P ∩ Z^n)` onto `R^d × {0}^{n−d}`, together
/// with `u(P)`. Built from the saturated lattice spanned by differences of
/// integer points: `u(x) = V⁻¹(x − z₀)`.
pub fn unimodular_normalize(p: &HPolyhedron) -> Result<(HPolyhedron, UnimodularMap)> {
    let pts = enumerate_lattice_points(p)?;
    let Some(z0) = pts.first() else {
        return Err(Error::NoIntegerPoints);
    };
    let n = p.dim();
    let dirs: Vec<IntVector> = pts[1..]
        .iter()
        .map(|x| x.iter().zip(z0).map(|(a, b)| a - b).collect())
        .collect();
    let (v, r) = span_lattice_completion(&dirs, n);
    let mut cols = v.columns();
    for c in cols.iter_mut().take(r) {
        if !leading_positive(c) {
            *c = c.iter().map(|x| -x).collect();
        }
    }
    let inv = IntMatrix::from_columns(n, &cols).unimodular_inverse()?;
    let shift = inv.mul_vec(z0).into_iter().map(|x| -x).collect();
    let u = UnimodularMap::new(inv, shift)?;
    let image = apply_unimodular(&u, p)?;
    Ok((image, u))
}

/// Whether the polytope, centrally symmetric about the integer point
/// `center`, contains an integer point other than `center`.
pub fn minkowski_check(p: &HPolyhedron, center: &[BigInt]) -> Result<bool> {
    check_dim(p.dim(), center.len())?;
    let c = p.canonicalize();
    let verts = c.vertices()?;
    if c.equality_rows().next().is_some() {
        return Err(Error::NoInscribedBox);
    }
    let twice: QVector = center
        .iter()
        .map(|x| Rational::from_integer(x * 2))
        .collect();
    let set: BTreeSet<&QVector> = verts.iter().collect();
    let symmetric = verts.iter().all(|v| set.contains(&sub(&twice, v)));
    if !symmetric {
        return Err(Error::NotSymmetric);
    }
    let pts = enumerate_lattice_points(&c)?;
    Ok(pts.iter().any(|x| x.as_slice() != center))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{equals, Constraint};
    use crate::rational::{ivec, qvec, qvec_int, rat, rint};

    fn cube(n: usize) -> HPolyhedron {
        let mut rows = Vec::new();
        for i in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            rows.push(Constraint::leq(&e, rint(1)));
            rows.push(Constraint::geq(&e, rint(0)));
        }
        HPolyhedron::new(n, rows).unwrap()
    }

    fn q2() -> HPolyhedron {
        hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[0, 1]), qvec(&[(2, 1), (1, 2)])])
    }

    #[test]
    fn unit_square_points() {
        let pts = enumerate_lattice_points(&cube(2)).unwrap();
        assert_eq!(pts, vec![ivec(&[0, 0]), ivec(&[0, 1]), ivec(&[1, 0]), ivec(&[1, 1])]);
    }

    #[test]
    fn thin_triangle_points_and_hull() {
        assert_eq!(enumerate_lattice_points(&q2()).unwrap(), vec![ivec(&[0, 0]), ivec(&[0, 1])]);
        let hull = integer_hull(&q2()).unwrap();
        let seg = hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[0, 1])]);
        assert!(equals(&hull, &seg));
        let aff = affine_hull_integer(&q2()).unwrap().unwrap();
        assert_eq!(aff.dim(), 1);
        assert!(aff.contains(&qvec_int(&[0, 7])));
        assert!(!aff.contains(&qvec_int(&[1, 0])));
    }

    #[test]
    fn unbounded_is_rejected() {
        let half = HPolyhedron::new(1, vec![Constraint::leq_int(&[-1], rint(0))]).unwrap();
        assert!(matches!(enumerate_lattice_points(&half), Err(Error::Unbounded(_))));
    }

    #[test]
    fn no_points_gives_empty_hull() {
        let p = hrep_of_points(1, vec![qvec(&[(1, 3)]), qvec(&[(2, 3)])]);
        assert!(enumerate_lattice_points(&p).unwrap().is_empty());
        assert!(integer_hull(&p).unwrap().is_empty());
        assert_eq!(affine_hull_integer(&p).unwrap(), None);
    }

    #[test]
    fn equality_fibers() {
        // 2x + 2y = 3 has no integer points; x + y = 1 in [0,1]^2 has two.
        let p = cube(2).with_rows([Constraint::eq_int(&[2, 2], rint(3))]).unwrap();
        assert!(enumerate_lattice_points(&p).unwrap().is_empty());
        let p = cube(2).with_rows([Constraint::eq_int(&[1, 1], rint(1))]).unwrap();
        assert_eq!(enumerate_lattice_points(&p).unwrap(), vec![ivec(&[0, 1]), ivec(&[1, 0])]);
    }

    #[test]
    fn widths() {
        for n in 1..=3 {
            let w = lattice_width(&cube(n), DEFAULT_WIDTH_BOUND).unwrap();
            assert_eq!(w.width, Some(rint(1)));
            assert!(w.certified);
            assert_eq!(w.direction, Some(crate::rational::unit_vector(n, n - 1)));
        }
        let seg = hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[0, 1])]);
        let w = lattice_width(&seg, 10).unwrap();
        assert_eq!(w.width, Some(rint(0)));
        assert_eq!(w.direction, Some(ivec(&[1, 0])));
        let t = hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[2, 0]), qvec_int(&[0, 2])]);
        assert_eq!(lattice_width(&t, 10).unwrap().width, Some(rint(2)));
        let thin = hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec(&[(1, 3), (1, 1)])]);
        assert_eq!(lattice_width(&thin, 10).unwrap().width, Some(rint(0)));
        let small = hrep_of_points(1, vec![qvec(&[(1, 3)]), qvec(&[(1, 2)])]);
        let w = lattice_width(&small, 10).unwrap();
        assert_eq!(w.width, Some(rat(1, 6)));
        assert!(w.certified);
    }

    #[test]
    fn direction_count() {
        // primitive vectors of [-1,1]^2 up to sign: (0,1),(1,-1),(1,0),(1,1)
        assert_eq!(search_directions(2, 1), vec![ivec(&[0, 1]), ivec(&[1, -1]), ivec(&[1, 0]), ivec(&[1, 1])]);
    }

    #[test]
    fn normalize_diagonal_segment() {
        let seg = hrep_of_points(2, vec![qvec_int(&[1, 1]), qvec_int(&[3, 3])]);
        let (img, u) = unimodular_normalize(&seg).unwrap();
        let verts = img.vertices().unwrap();
        assert!(verts.iter().all(|v| v[1].is_zero()));
        assert_eq!(u.apply_int(&ivec(&[2, 2])), ivec(&[1, 0]));
        assert_eq!(enumerate_lattice_points(&img).unwrap().len(), 3);
    }

    #[test]
    fn minkowski() {
        let sym = hrep_of_points(2, vec![qvec_int(&[-1, -1]), qvec_int(&[1, -1]), qvec_int(&[1, 1]), qvec_int(&[-1, 1])]);
        assert!(minkowski_check(&sym, &ivec(&[0, 0])).unwrap());
        let tiny = hrep_of_points(
            2,
            vec![qvec(&[(-1, 3), (-1, 3)]), qvec(&[(1, 3), (-1, 3)]), qvec(&[(1, 3), (1, 3)]), qvec(&[(-1, 3), (1, 3)])],
        );
        assert!(!minkowski_check(&tiny, &ivec(&[0, 0])).unwrap());
        let tri = hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[2, 0]), qvec_int(&[0, 2])]);
        assert_eq!(minkowski_check(&tri, &ivec(&[0, 0])), Err(Error::NotSymmetric));
    }
}
