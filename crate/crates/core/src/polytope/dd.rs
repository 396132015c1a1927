//! Double description method over the integers.
//!
//! Computes minimal generators (extreme rays modulo the lineality space, plus
//! a basis of the lineality space) of a cone `{ y : h·y <= 0 for each row h }`.
//! Rows are inserted in the given order; adjacency uses the combinatorial test
//! on tight-constraint sets. All vectors are kept primitive.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::rational::{dot_ii, make_primitive, IntVector};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConeGenerators {
    pub rays: Vec<IntVector>,
    pub lines: Vec<IntVector>,
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    v: IntVector,
    tight: Bits,
}

pub fn cone_generators(rows: &[IntVector], dim: usize) -> ConeGenerators {
    let nbits = rows.len();
    let mut lines: Vec<IntVector> = (0..dim).map(|i| crate::rational::unit_vector(dim, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, h) in rows.iter().enumerate() {
        debug_assert_eq!(h.len(), dim);
        if let Some(pos) = lines.iter().position(|l| !dot_ii(h, l).is_zero()) {
            let mut l0 = lines.swap_remove(pos);
            let mut s = dot_ii(h, &l0);
            if s.is_positive() {
                l0 = l0.iter().map(|x| -x).collect();
                s = -s;
            }
            // s < 0 from here on
            for l in lines.iter_mut() {
                let hl = dot_ii(h, l);
                if !hl.is_zero() {
                    let v: IntVector = l.iter().zip(&l0).map(|(a, b)| &s * a - &hl * b).collect();
                    *l = make_primitive(&v);
                }
            }
            for r in rays.iter_mut() {
                let hr = dot_ii(h, &r.v);
                if !hr.is_zero() {
                    let v: IntVector = r.v.iter().zip(&l0).map(|(a, b)| -&s * a + &hr * b).collect();
                    r.v = make_primitive(&v);
                }
                r.tight.set(k);
            }
            let mut tight = Bits::new(nbits);
            for j in 0..k {
                tight.set(j);
            }
            rays.push(Ray { v: l0, tight });
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|r| dot_ii(h, &r.v)).collect();
        if !vals.iter().any(Signed::is_positive) {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.tight.set(k);
                }
            }
            continue;
        }
        let min_common = (dim - lines.len()).saturating_sub(2);
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();

        let mut created = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.and(&rays[q].tight);
                if common.count() < min_common {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !common.subset_of(&r.tight));
                if !adjacent {
                    continue;
                }
                let (hp, hq) = (&vals[p], &vals[q]);
                let v: IntVector = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(b, a)| hp * b - hq * a)
                    .collect();
                let mut tight = common;
                tight.set(k);
                created.push(Ray { v: make_primitive(&v), tight });
            }
        }

        let mut next = Vec::with_capacity(rays.len() + created.len());
        for (mut r, v) in rays.into_iter().zip(vals) {
            if v.is_zero() {
                r.tight.set(k);
                next.push(r);
            } else if v.is_negative() {
                next.push(r);
            }
        }
        next.extend(created);
        rays = next;
    }

    ConeGenerators {
        rays: rays.into_iter().map(|r| r.v).collect(),
        lines,
    }
}
