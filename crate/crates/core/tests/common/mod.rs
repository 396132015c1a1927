//! Shared corpora and reference implementations for the integration tests.
#![allow(dead_code)]

use cglab::hnf::IntMatrix;
use cglab::lattice::integer_hull;
use cglab::polytope::{hrep_of_points, HPolyhedron};
use cglab::rational::{int_to_q, QVector, Rational};
use cglab::unimodular::UnimodularMap;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Random integer points in `[lo, hi]^n`.
pub fn random_int_points(r: &mut ChaCha8Rng, n: usize, count: usize, lo: i64, hi: i64) -> Vec<QVector> {
    (0..count)
        .map(|_| (0..n).map(|_| Rational::from_integer(BigInt::from(r.gen_range(lo..=hi)))).collect())
        .collect()
}

/// Integral polytopes: integer hulls of random point sets in `[-5,5]^n`,
/// `n ∈ {1,2,3}`.
pub fn integral_corpus(seed: u64, count: usize) -> Vec<HPolyhedron> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = 1 + i % 3;
            let k = r.gen_range(1..=n + 3);
            let pts = random_int_points(&mut r, n, k, -5, 5);
            let p = hrep_of_points(n, pts);
            integer_hull(&p).unwrap()
        })
        .collect()
}

/// Rational polytopes `conv` of a few points with coordinates `p/q`,
/// `q ∈ {1,2,3}`, in `[-3,3]^n`; at least one point is fractional.
pub fn rational_corpus(seed: u64, count: usize) -> Vec<HPolyhedron> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = 1 + out.len() % 3;
        let k = r.gen_range(2..=n + 2);
        let pts: Vec<QVector> = (0..k)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let d = r.gen_range(1..=3);
                        q(r.gen_range(-3 * d..=3 * d), d)
                    })
                    .collect()
            })
            .collect();
        let p = hrep_of_points(n, pts);
        if p.vertices().unwrap().iter().any(|v| v.iter().any(|x| !x.is_integer())) {
            out.push(p);
        }
    }
    out
}

/// A random unimodular map: a product of elementary column operations,
/// sign flips and a permutation, plus a small translation.
pub fn random_unimodular(r: &mut ChaCha8Rng, n: usize) -> UnimodularMap {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n > 1 {
        for _ in 0..3 {
            let i = r.gen_range(0..n);
            let mut j = r.gen_range(0..n);
            while j == i {
                j = r.gen_range(0..n);
            }
            let f = r.gen_range(-2..=2);
            for row in m.iter_mut() {
                row[j] += f * row[i];
            }
        }
        let a = r.gen_range(0..n);
        let b = r.gen_range(0..n);
        m.swap(a, b);
    }
    if r.gen_bool(0.5) {
        let i = r.gen_range(0..n);
        for x in m[i].iter_mut() {
            *x = -*x;
        }
    }
    let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
    let shift = (0..n).map(|_| BigInt::from(r.gen_range(-3..=3))).collect();
    UnimodularMap::new(IntMatrix::from_i64(&rows), shift).unwrap()
}

/// Integer points found by testing every point of the box `[lo, hi]^n`.
pub fn box_points(p: &HPolyhedron, lo: i64, hi: i64) -> Vec<Vec<BigInt>> {
    let n = p.dim();
    let mut out = Vec::new();
    let mut cur = vec![lo; n];
    loop {
        let z: Vec<BigInt> = cur.iter().map(|&x| BigInt::from(x)).collect();
        if p.contains(&int_to_q(&z)) {
            out.push(z);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < hi {
                cur[i] += 1;
                for x in cur[i + 1..].iter_mut() {
                    *x = lo;
                }
                break;
            }
        }
    }
}

fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let v = &f * &a[c][j];
                a[i][j] -= v;
            }
        }
    }
    d
}

fn affine_rank(points: &[&QVector]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(a, b)| a - b).collect())
        .collect();
    let n = points[0].len();
    let mut a = rows;
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                for j in 0..n {
                    let v = &f * &a[rank][j];
                    a[i][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

// Pulling triangulation over vertex index sets; facets of a face are cut out
// by the tight sets of the polytope's facets.
fn simplices(verts: &[QVector], tight: &[Vec<usize>], face: Vec<usize>, k: usize) -> Vec<Vec<usize>> {
    if face.len() == k + 1 {
        return vec![face];
    }
    let v = face[0];
    let mut subfaces: Vec<Vec<usize>> = Vec::new();
    for t in tight {
        let g: Vec<usize> = face.iter().copied().filter(|i| t.contains(i)).collect();
        if g.len() == face.len() || g.contains(&v) || g.is_empty() {
            continue;
        }
        let pts: Vec<&QVector> = g.iter().map(|&i| &verts[i]).collect();
        if affine_rank(&pts) == k - 1 && !subfaces.contains(&g) {
            subfaces.push(g);
        }
    }
    let mut out = Vec::new();
    for g in subfaces {
        for mut s in simplices(verts, tight, g, k - 1) {
            s.insert(0, v);
            out.push(s);
        }
    }
    out
}

/// Exact volume of a full-dimensional polytope.
pub fn volume(p: &HPolyhedron) -> Rational {
    let c = p.canonicalize();
    let verts = c.vertices().unwrap().to_vec();
    let n = c.dim();
    if c.equality_rows().next().is_some() {
        return Rational::zero();
    }
    let tight: Vec<Vec<usize>> = c
        .rows()
        .iter()
        .map(|r| (0..verts.len()).filter(|&i| r.tight_at(&verts[i])).collect())
        .collect();
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    let mut total = Rational::zero();
    for s in simplices(&verts, &tight, (0..verts.len()).collect(), n) {
        let m: Vec<Vec<Rational>> = s[1..]
            .iter()
            .map(|&i| verts[i].iter().zip(&verts[s[0]]).map(|(a, b)| a - b).collect())
            .collect();
        total += det(&m).abs();
    }
    total / Rational::from_integer(fact)
}
