//! Explicit polytope families and exact evaluators for the bound functions
//! of affine-hull convergence.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{enumerate_lattice_points, integer_hull, relative_interior_lattice_points};
use crate::polytope::{equals, hrep_of_points, HPolyhedron};
use crate::rational::{check_dim, dot_iq, qvec_int, QVector, Rational};

/// `conv{(0,0), (0,1), (t,1/2)}`.
pub fn qt(t: u64) -> Result<HPolyhedron> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    Ok(hrep_of_points(
        2,
        vec![qvec_int(&[0, 0]), qvec_int(&[0, 1]), vec![Rational::from_integer(t.into()), Rational::new(1.into(), 2.into())]],
    ))
}

/// `conv{±(k,1), ±(1,0)}`.
pub fn pik_parallelogram(k: u64) -> Result<HPolyhedron> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let k = k as i64;
    Ok(hrep_of_points(
        2,
        vec![qvec_int(&[k, 1]), qvec_int(&[-k, -1]), qvec_int(&[1, 0]), qvec_int(&[-1, 0])],
    ))
}

fn barycenter(points: &[QVector]) -> QVector {
    let n = points[0].len();
    let m = Rational::from_integer(BigInt::from(points.len()));
    (0..n)
        .map(|i| points.iter().map(|p| p[i].clone()).sum::<Rational>() / &m)
        .collect()
}

/// `conv(P ∪ {x̄ + (k+1)e^n})` for an integral, relatively lattice-free
/// polytope `P ⊆ R^{n−1} × {0}`; `x̄` defaults to the vertex barycenter and
/// must lie in `relint(P)`. The result is checked to have the same integer
/// points as `P`.
pub fn thm2_relaxation(p: &HPolyhedron, k: u64, xbar: Option<&[Rational]>) -> Result<HPolyhedron> {
    let n = p.dim();
    let c = p.canonicalize();
    let verts = c.vertices()?.to_vec();
    if n == 0 || verts.iter().any(|v| !v[n - 1].is_zero()) {
        return Err(Error::InvalidArgument(
            "polytope must lie in the hyperplane x_n = 0; normalize it first".into(),
        ));
    }
    if !equals(&c, &integer_hull(&c)?) {
        return Err(Error::InvalidForIntegerHull);
    }
    let inner = relative_interior_lattice_points(&c)?;
    if let Some(z) = inner.first() {
        return Err(Error::NotRelativelyLatticeFree(crate::rational::format_int_vector(z)));
    }
    let xbar: QVector = match xbar {
        Some(x) => {
            check_dim(n, x.len())?;
            x.to_vec()
        }
        None => barycenter(&verts),
    };
    let in_relint = c.equality_rows().all(|r| r.satisfied_by(&xbar))
        && c.inequality_rows().all(|r| dot_iq(&r.normal, &xbar) < r.rhs);
    if !in_relint {
        return Err(Error::NotInRelativeInterior);
    }
    let mut apex = xbar;
    apex[n - 1] += Rational::from_integer(BigInt::from(k + 1));
    let mut pts = verts;
    pts.push(apex);
    let q = hrep_of_points(n, pts);
    if enumerate_lattice_points(&q)? != enumerate_lattice_points(&c)? {
        return Err(Error::InvalidArgument("construction gained integer points".into()));
    }
    Ok(q)
}

/// The first `n` Sylvester numbers `t_1 = 2`, `t_i = (t_{i−1} − 1)t_{i−1} + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylvesterData {
    pub n: usize,
    pub t: Vec<BigInt>,
}

impl SylvesterData {
    /// `Σ_{i<n} 1/t_i + 1/(t_n − 1)`, which equals 1.
    pub fn unit_fraction_sum(&self) -> Rational {
        let (last, init) = self.t.split_last().expect("n >= 1");
        let mut s: Rational = init.iter().map(|t| Rational::new(BigInt::one(), t.clone())).sum();
        s += Rational::new(BigInt::one(), last - 1);
        s
    }

    pub fn last(&self) -> &BigInt {
        self.t.last().expect("n >= 1")
    }
}

pub fn sylvester(n: usize) -> Result<SylvesterData> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut t = vec![BigInt::from(2)];
    while t.len() < n {
        let p = t.last().expect("nonempty");
        t.push((p - 1) * p + 1);
    }
    Ok(SylvesterData { n, t })
}

fn sylvester_points(s: &SylvesterData) -> Vec<QVector> {
    let n = s.n;
    let mut pts = vec![vec![Rational::zero(); n]];
    for (i, ti) in s.t[..n - 1].iter().enumerate() {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::from_integer(ti.clone());
        pts.push(e);
    }
    pts
}

/// `T = conv{0, t_1e^1, …, t_{n−1}e^{n−1}, (t_n − 1)e^n}` and its facet
/// `P = conv{0, t_1e^1, …, t_{n−1}e^{n−1}}`.
pub fn sylvester_simplex(n: usize) -> Result<(HPolyhedron, HPolyhedron)> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let s = sylvester(n)?;
    let base = sylvester_points(&s);
    let mut top = vec![Rational::zero(); n];
    top[n - 1] = Rational::from_integer(s.last() - 1);
    let mut all = base.clone();
    all.push(top);
    Ok((hrep_of_points(n, all), hrep_of_points(n, base)))
}

/// The apex `p = (1−λ)(t_n − 1)e^n + λ·barycenter(T)`, interior to `T`.
pub fn sylvester_apex(n: usize, lambda: &Rational) -> Result<QVector> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    if !lambda.is_positive() || *lambda >= Rational::one() {
        return Err(Error::InvalidArgument("lambda must lie in (0,1)".into()));
    }
    let s = sylvester(n)?;
    let mut verts = sylvester_points(&s);
    let mut top = vec![Rational::zero(); n];
    top[n - 1] = Rational::from_integer(s.last() - 1);
    verts.push(top.clone());
    let bary = barycenter(&verts);
    let mu = Rational::one() - lambda;
    Ok(top.iter().zip(&bary).map(|(t, b)| &mu * t + lambda * b).collect())
}

/// `Q = conv{0, t_1e^1, …, t_{n−1}e^{n−1}, p}` with `p` from
/// [`sylvester_apex`].
pub fn sylvester_relaxation(n: usize, lambda: &Rational) -> Result<HPolyhedron> {
    let apex = sylvester_apex(n, lambda)?;
    let s = sylvester(n)?;
    let mut pts = sylvester_points(&s);
    pts.push(apex);
    Ok(hrep_of_points(n, pts))
}

/// `γ(P, x)`: the least `γ` with `(1/γ)(P − x) ⊆ −(P − x)`.
///
/// With `P − x = { y : a·y <= b' }` (all `b' > 0` for interior `x`), the
/// point `−w/μ` lies in `P − x` iff `μ >= −a·w / b'` for every row, so the
/// value is `max_w max_rows (−a·w)/b'` over the vertices `w` of `P − x`.
pub fn coefficient_of_asymmetry(p: &HPolyhedron, x: &[Rational]) -> Result<Rational> {
    check_dim(p.dim(), x.len())?;
    let c = p.canonicalize();
    let verts = c.vertices()?;
    if c.equality_rows().next().is_some() {
        return Err(Error::NoInscribedBox);
    }
    let slack: Vec<Rational> = c.rows().iter().map(|r| &r.rhs - dot_iq(&r.normal, x)).collect();
    if slack.iter().any(|s| !s.is_positive()) {
        return Err(Error::InvalidArgument("point is not in the interior".into()));
    }
    let mut gamma = Rational::zero();
    for v in verts {
        let w: QVector = v.iter().zip(x).map(|(a, b)| a - b).collect();
        for (r, s) in c.rows().iter().zip(&slack) {
            let mu = -dot_iq(&r.normal, &w) / s;
            if mu > gamma {
                gamma = mu;
            }
        }
    }
    Ok(gamma)
}

/// `rational + coeff·√radicand` with a square-free radicand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    pub rational: Rational,
    pub coeff: Rational,
    pub radicand: BigInt,
}

impl Surd {
    /// `coeff·√m`, with square factors of `m` pulled out.
    pub fn scaled_sqrt(coeff: Rational, m: u64) -> Surd {
        let mut free = m;
        let mut out = 1u64;
        let mut f = 2u64;
        while f * f <= free {
            while free.is_multiple_of(f * f) {
                free /= f * f;
                out *= f;
            }
            f += 1;
        }
        let coeff = coeff * Rational::from_integer(BigInt::from(out));
        if free == 1 {
            return Surd {
                rational: coeff,
                coeff: Rational::zero(),
                radicand: BigInt::one(),
            };
        }
        Surd {
            rational: Rational::zero(),
            coeff,
            radicand: BigInt::from(free),
        }
    }

    fn map(&self, f: impl Fn(&Rational) -> Rational) -> Surd {
        Surd {
            rational: f(&self.rational),
            coeff: f(&self.coeff),
            radicand: self.radicand.clone(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Surd {
        self.map(|x| x * s)
    }

    pub fn add_rational(&self, q: &Rational) -> Surd {
        Surd {
            rational: &self.rational + q,
            ..self.clone()
        }
    }

    /// Exact comparison `self >= q`.
    pub fn ge_rational(&self, q: &Rational) -> bool {
        // coeff·√r >= q − rational
        let rhs = q - &self.rational;
        let c = &self.coeff;
        if self.radicand.is_one() || c.is_zero() {
            return c * Rational::from_integer(self.radicand.sqrt()) >= rhs;
        }
        let r = Rational::from_integer(self.radicand.clone());
        match (c.is_negative(), rhs.is_negative()) {
            (false, true) => true,
            (true, false) => false,
            (false, false) => c * c * r >= &rhs * &rhs,
            (true, true) => c * c * r <= &rhs * &rhs,
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "{}", self.rational);
        }
        if self.rational.is_zero() {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        } else {
            write!(f, "{} + {}*sqrt({})", self.rational, self.coeff, self.radicand)
        }
    }
}

/// Exact values of the bound functions at `n`.
///
/// `ω(n) = C·n^{3/2}` has no known constant `C`. When `omega_constant` is
/// `None` the fields `omega`, `psi` and `beta_formula` are symbolic: their
/// irrational part must be multiplied by `C` (their rational part carries no
/// `C`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub phi: BigInt,
    pub theta: BigInt,
    pub sigma: BigInt,
    pub nu: Rational,
    pub k: BigInt,
    pub omega_constant: Option<Rational>,
    pub omega: Surd,
    pub psi: Surd,
    pub beta_formula: Surd,
    /// `2^{2^{n−2}} − 2`, for `n >= 2`.
    pub beta_lower: Option<BigInt>,
}

impl BoundReport {
    pub fn symbolic(&self) -> bool {
        self.omega_constant.is_none()
    }
}

/// Largest `n` evaluated without `allow_large`.
pub const BOUNDS_DEFAULT_MAX_N: usize = 4;

pub fn phi(n: usize) -> BigInt {
    BigInt::from(n).pow(3 * n as u32)
}

pub fn theta(n: usize) -> BigInt {
    phi(n - 1) + 1
}

pub fn sigma(n: usize) -> BigInt {
    let e = 1u64 << (2 * n + 1);
    BigInt::from(8 * n) * BigInt::from(15).pow(e as u32)
}

pub fn beta_lower(n: usize) -> Option<BigInt> {
    (n >= 2).then(|| BigInt::from(2).pow(1u32 << (n - 2)) - 2)
}

/// Evaluates every bound at `n >= 1`. Values of `σ` grow like
/// `15^{2^{2n+1}}`; `n > 4` is refused unless `allow_large`.
pub fn bounds(n: usize, omega_constant: Option<&Rational>, allow_large: bool) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if n > BOUNDS_DEFAULT_MAX_N && !allow_large {
        return Err(Error::InvalidArgument(format!(
            "n = {n} exceeds {BOUNDS_DEFAULT_MAX_N}; sigma(n) would have about {} digits (override to force)",
            (2f64.powi(2 * n as i32 + 1) * 15f64.log10()).ceil()
        )));
    }
    if let Some(c) = omega_constant {
        if !c.is_positive() {
            return Err(Error::InvalidArgument("omega constant must be positive".into()));
        }
    }
    let phi_n = phi(n);
    let theta_n = theta(n);
    let sigma_n = sigma(n);
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    let two_n = BigInt::from(2).pow(n as u32);
    let nu = Rational::new(two_n, Pow::pow(&sigma_n, n as u32) * &fact);
    let k = (Rational::from_integer(BigInt::from(2).pow(n as u32 - 1) * BigInt::from(n)) / &nu).ceil().to_integer();
    let c = omega_constant.cloned().unwrap_or_else(Rational::one);
    let omega = Surd::scaled_sqrt(c * Rational::from_integer(BigInt::from(n)), n as u64);
    let psi = omega.scale(&Rational::from_integer(BigInt::from(2) * &k));
    let n_q = Rational::from_integer(BigInt::from(n));
    let beta_formula = psi
        .scale(&Rational::from_integer(theta_n.clone()))
        .scale(&n_q)
        .add_rational(&n_q);
    Ok(BoundReport {
        n,
        phi: phi_n,
        theta: theta_n,
        sigma: sigma_n,
        nu,
        k,
        omega_constant: omega_constant.cloned(),
        omega,
        psi,
        beta_formula,
        beta_lower: beta_lower(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::lp_max;
    use crate::polytope::LpOutcome;
    use crate::rational::{ivec, qvec, rat, rint};

    #[test]
    fn qt_vertices() {
        let q = qt(1).unwrap();
        assert_eq!(q.vertices().unwrap(), &[qvec_int(&[0, 0]), qvec_int(&[0, 1]), qvec(&[(1, 1), (1, 2)])]);
        assert_eq!(enumerate_lattice_points(&qt(4).unwrap()).unwrap(), vec![ivec(&[0, 0]), ivec(&[0, 1])]);
    }

    #[test]
    fn sylvester_numbers() {
        assert_eq!(sylvester(1).unwrap().t, vec![BigInt::from(2)]);
        let s = sylvester(4).unwrap();
        assert_eq!(s.t, [2, 3, 7, 43].iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        for n in 1..=6 {
            assert_eq!(sylvester(n).unwrap().unit_fraction_sum(), rint(1));
        }
    }

    #[test]
    fn sylvester_simplex_two() {
        let (t, p) = sylvester_simplex(2).unwrap();
        let expect = hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[2, 0]), qvec_int(&[0, 2])]);
        assert!(equals(&t, &expect));
        assert!(equals(&p, &hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[2, 0])])));
    }

    #[test]
    fn sylvester_relaxation_two() {
        let q = sylvester_relaxation(2, &rat(1, 10)).unwrap();
        let (_, p) = sylvester_simplex(2).unwrap();
        assert!(equals(&integer_hull(&q).unwrap(), &p));
        let LpOutcome::Optimal { value, .. } = lp_max(&q, &qvec_int(&[0, 1])).unwrap() else { panic!() };
        assert!(value > rint(1));
        assert!(sylvester_relaxation(2, &rint(1)).is_err());
    }

    #[test]
    fn thm2_segment() {
        let p = hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[1, 0])]);
        let q = thm2_relaxation(&p, 1, None).unwrap();
        let expect = hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[1, 0]), qvec(&[(1, 2), (2, 1)])]);
        assert!(equals(&q, &expect));
        let long = hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[2, 0])]);
        assert!(matches!(thm2_relaxation(&long, 1, None), Err(Error::NotRelativelyLatticeFree(_))));
        let end = qvec_int(&[0, 0]);
        assert_eq!(thm2_relaxation(&p, 1, Some(&end)), Err(Error::NotInRelativeInterior));
    }

    #[test]
    fn asymmetry() {
        let sym = pik_parallelogram(3).unwrap();
        assert_eq!(coefficient_of_asymmetry(&sym, &qvec_int(&[0, 0])).unwrap(), rint(1));
        let tri = hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[3, 0]), qvec_int(&[0, 3])]);
        // the centroid of a triangle has asymmetry 2
        assert_eq!(coefficient_of_asymmetry(&tri, &qvec_int(&[1, 1])).unwrap(), rint(2));
        assert!(coefficient_of_asymmetry(&tri, &qvec_int(&[0, 0])).is_err());
    }

    #[test]
    fn bound_values() {
        let b = bounds(2, None, false).unwrap();
        assert_eq!(b.phi, BigInt::from(64));
        assert_eq!(b.theta, BigInt::from(2));
        assert!(b.symbolic());
        assert_eq!(bounds(3, None, false).unwrap().phi, BigInt::from(19683));
        assert_eq!(bounds(4, None, false).unwrap().beta_lower, Some(BigInt::from(14)));
        assert!(bounds(5, None, false).is_err());
        let b = bounds(4, Some(&rint(1)), false).unwrap();
        // n = 4 is a perfect square: ω(4) = 4·2 = 8
        assert_eq!(b.omega.rational, rint(8));
        assert!(b.beta_formula.ge_rational(&Rational::from_integer(b.beta_lower.clone().unwrap())));
    }

    #[test]
    fn surd_comparison() {
        let s = Surd::scaled_sqrt(rint(1), 2); // √2
        assert!(s.ge_rational(&rat(14, 10)));
        assert!(!s.ge_rational(&rat(15, 10)));
        assert_eq!(Surd::scaled_sqrt(rint(3), 12), Surd { rational: rint(0), coeff: rint(6), radicand: BigInt::from(3) });
    }
}
