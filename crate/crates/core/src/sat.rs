//! 3SAT to affine-hull membership of integer hulls.
//!
//! A clause `ℓ_1 ∨ ℓ_2 ∨ ℓ_3` becomes `a·x >= b` with `a_i = ±1` and
//! `b = 1 − #negations`. With one extra variable `x_{n+1}` the system
//!
//! ```text
//! a^j·x >= b_j − 4(1 − x_{n+1})      for every clause j
//! 0 <= x_i <= 3 − 2x_{n+1}           for i = 1..n
//! 0 <= x_{n+1}
//! ```
//!
//! has `e^{n+1}` in the affine hull of its integer points exactly when the
//! formula is satisfiable.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::enumerate_lattice_points;
use crate::linalg::AffineSubspace;
use crate::polytope::{Constraint, HPolyhedron};
use crate::rational::{int_to_q, IntVector, QVector, Rational};

/// A literal `v` (positive) or `−v` (negated), `1 <= v <= n`.
pub type Literal = i64;

/// Clauses of 1 to 3 literals over distinct variables. Literals inside a
/// clause are sorted by variable; repeated literals are merged and repeated
/// clauses dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in clauses {
            let c = normalize_clause(num_vars, c)?;
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
        Ok(CnfFormula { num_vars, clauses: out })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = assignment[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    v
                } else {
                    !v
                }
            })
        })
    }
}

fn normalize_clause(n: usize, mut c: Vec<Literal>) -> Result<Vec<Literal>> {
    if c.is_empty() {
        return Err(Error::InvalidArgument("empty clause".into()));
    }
    for &l in &c {
        if l == 0 || l.unsigned_abs() as usize > n {
            return Err(Error::InvalidArgument(format!("literal {l} out of range for {n} variables")));
        }
    }
    c.sort_by_key(|l| (l.unsigned_abs(), *l));
    c.dedup();
    if c.windows(2).any(|w| w[0] == -w[1]) {
        return Err(Error::InvalidArgument(format!("tautological clause {c:?}")));
    }
    if c.len() > 3 {
        return Err(Error::InvalidArgument(format!("clause with {} literals: not 3CNF", c.len())));
    }
    Ok(c)
}

/// DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header, and
/// clauses as zero-terminated literal lists (possibly spanning lines).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut num_vars: Option<usize> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<Literal> = Vec::new();
    let mut cur_line = 0;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse {
                line: ln,
                msg: format!("bad header '{line}', expected 'p cnf <vars> <clauses>'"),
            };
            if parts.len() != 4 || parts[1] != "cnf" || num_vars.is_some() {
                return Err(bad());
            }
            num_vars = Some(parts[2].parse().map_err(|_| bad())?);
            parts[3].parse::<usize>().map_err(|_| bad())?;
            continue;
        }
        let Some(n) = num_vars else {
            return Err(Error::Parse {
                line: ln,
                msg: "clause before the 'p cnf' header".into(),
            });
        };
        for tok in line.split_whitespace() {
            let l: Literal = tok.parse().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("invalid literal '{tok}'"),
            })?;
            if l == 0 {
                if cur.is_empty() {
                    return Err(Error::Parse {
                        line: ln,
                        msg: "empty clause".into(),
                    });
                }
                let c = normalize_clause(n, std::mem::take(&mut cur)).map_err(|e| match e {
                    Error::InvalidArgument(msg) => Error::Parse { line: ln, msg },
                    other => other,
                })?;
                clauses.push(c);
            } else {
                if cur.is_empty() {
                    cur_line = ln;
                }
                cur.push(l);
            }
        }
    }
    if !cur.is_empty() {
        return Err(Error::Parse {
            line: cur_line,
            msg: "clause not terminated by 0".into(),
        });
    }
    let n = num_vars.ok_or(Error::Parse {
        line: 1,
        msg: "missing 'p cnf' header".into(),
    })?;
    CnfFormula::new(n, clauses)
}

pub fn format_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            out.push_str(&format!("{l} "));
        }
        out.push_str("0\n");
    }
    out
}

/// `(a, b)` with the clause equivalent to `a·x >= b` on `{0,1}^n`.
pub fn clause_inequality(clause: &[Literal], n: usize) -> (IntVector, BigInt) {
    let mut a = vec![BigInt::zero(); n];
    let mut b = BigInt::one();
    for &l in clause {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            a[i] = BigInt::one();
        } else {
            a[i] = -BigInt::one();
            b -= 1;
        }
    }
    (a, b)
}

/// A query point and a polyhedron.
#[derive(Debug, Clone)]
pub struct AffihullInstance {
    pub x: QVector,
    pub q: HPolyhedron,
}

/// The reduction. Rows are kept in the order clauses, variable bounds,
/// `x_{n+1} >= 0` and are not canonicalized.
pub fn reduce(f: &CnfFormula) -> AffihullInstance {
    let n = f.num_vars;
    let mut rows = Vec::new();
    let row = |normal: IntVector, rhs: BigInt| Constraint {
        normal,
        rhs: Rational::from_integer(rhs),
        equality: false,
    };
    for c in &f.clauses {
        let (a, b) = clause_inequality(c, n);
        // −a·x + 4x_{n+1} <= 4 − b
        let mut normal: IntVector = a.iter().map(|x| -x).collect();
        normal.push(BigInt::from(4));
        rows.push(row(normal, BigInt::from(4) - b));
    }
    for i in 0..n {
        let mut lo = vec![BigInt::zero(); n + 1];
        lo[i] = -BigInt::one();
        rows.push(row(lo, BigInt::zero()));
        let mut hi = vec![BigInt::zero(); n + 1];
        hi[i] = BigInt::one();
        hi[n] = BigInt::from(2);
        rows.push(row(hi, BigInt::from(3)));
    }
    let mut last = vec![BigInt::zero(); n + 1];
    last[n] = -BigInt::one();
    rows.push(row(last, BigInt::zero()));
    let q = HPolyhedron::new(n + 1, rows).expect("dimensions agree");
    let mut x = vec![Rational::zero(); n + 1];
    x[n] = Rational::one();
    AffihullInstance { x, q }
}

/// Answer to an affine-hull membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffihullDecision {
    pub member: bool,
    /// Dimension of `aff(Q_I)`, `None` when `Q` has no integer points.
    pub hull_dim: Option<usize>,
}

/// Decides `x ∈ aff(Q ∩ Z^n)` by enumerating the integer points.
pub fn affihull_decide(inst: &AffihullInstance) -> Result<AffihullDecision> {
    crate::rational::check_dim(inst.q.dim(), inst.x.len())?;
    let pts: Vec<QVector> = enumerate_lattice_points(&inst.q)?
        .iter()
        .map(|z| int_to_q(z))
        .collect();
    Ok(match AffineSubspace::from_points(&pts) {
        None => AffihullDecision {
            member: false,
            hull_dim: None,
        },
        Some(aff) => AffihullDecision {
            member: aff.contains(&inst.x),
            hull_dim: Some(aff.dim()),
        },
    })
}

/// A satisfying assignment found by trying all `2^n` assignments.
pub fn brute_force_sat(f: &CnfFormula) -> Option<Vec<bool>> {
    let n = f.num_vars;
    (0u64..1 << n)
        .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect::<Vec<_>>())
        .find(|a| f.eval(a))
}

/// The four structural facts of the reduction, checked by enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuralReport {
    /// Every integer point has `x_{n+1} ∈ {0,1}`.
    pub a: bool,
    /// `{0,1}^n × {0}` consists of integer points of `Q`.
    pub b: bool,
    /// Every integer point with `x_{n+1} = 1` lies in `{0,1}^n × {1}`.
    pub c: bool,
    /// Some integer point lies in `{0,1}^n × {1}` iff the formula is
    /// satisfiable.
    pub d: bool,
}

impl StructuralReport {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c && self.d
    }
}

pub fn structural_checks(f: &CnfFormula) -> Result<StructuralReport> {
    let n = f.num_vars;
    let inst = reduce(f);
    let pts: BTreeSet<IntVector> = enumerate_lattice_points(&inst.q)?.into_iter().collect();
    let zero = BigInt::zero();
    let one = BigInt::one();
    let binary = |z: &[BigInt]| z.iter().all(|x| *x == zero || *x == one);
    let a = pts.iter().all(|z| z[n] == zero || z[n] == one);
    let b = (0u64..1 << n).all(|m| {
        let mut z: IntVector = (0..n).map(|i| BigInt::from(m >> i & 1)).collect();
        z.push(BigInt::zero());
        pts.contains(&z)
    });
    let c = pts.iter().filter(|z| z[n] == one).all(|z| binary(&z[..n]));
    let lifted = pts.iter().any(|z| z[n] == one && binary(&z[..n]));
    let d = lifted == brute_force_sat(f).is_some();
    Ok(StructuralReport { a, b, c, d })
}

/// Largest absolute entry of the constraint matrix of `Q`. Right-hand sides
/// are `4 - b`, `3` or `0` and are not counted.
pub fn max_abs_coefficient(q: &HPolyhedron) -> BigInt {
    use num_traits::Signed;
    q.rows()
        .iter()
        .flat_map(|r| r.normal.iter().cloned())
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ivec;

    #[test]
    fn dimacs_parsing() {
        let f = parse_dimacs("c demo\np cnf 3 1 \n 1 2 -3 0\n").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.clauses(), &[vec![1, 2, -3]]);
        assert!(matches!(parse_dimacs("p cnf 2 1\n0\n"), Err(Error::Parse { line: 2, .. })));
        let err = parse_dimacs("p cnf 4 1\n1 2 3 4 0\n").unwrap_err();
        assert!(err.to_string().contains("not 3CNF"));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 x 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_dimacs("1 2 0\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn duplicates_and_tautologies() {
        let f = CnfFormula::new(2, vec![vec![1, 1, 2], vec![2, 1], vec![-1]]).unwrap();
        assert_eq!(f.clauses(), &[vec![1, 2], vec![-1]]);
        assert!(CnfFormula::new(2, vec![vec![1, -1]]).is_err());
    }

    #[test]
    fn clause_rows() {
        assert_eq!(clause_inequality(&[1, 2, -3], 3), (ivec(&[1, 1, -1]), BigInt::from(0)));
        assert_eq!(clause_inequality(&[-1, -2, -3], 3), (ivec(&[-1, -1, -1]), BigInt::from(-2)));
    }

    #[test]
    fn empty_formula_instance() {
        let inst = reduce(&CnfFormula::new(1, vec![]).unwrap());
        assert_eq!(crate::polytope::io::format_hrep(&inst.q), "2 3\n-1 0 <= 0\n1 2 <= 3\n0 -1 <= 0\n");
    }

    #[test]
    fn small_decisions() {
        let sat = CnfFormula::new(1, vec![vec![1]]).unwrap();
        assert!(affihull_decide(&reduce(&sat)).unwrap().member);
        let unsat = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        let d = affihull_decide(&reduce(&unsat)).unwrap();
        assert!(!d.member);
        assert_eq!(d.hull_dim, Some(1));
        assert!(structural_checks(&unsat).unwrap().all());
    }
}
