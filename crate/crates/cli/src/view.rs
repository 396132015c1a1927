//! JSON views of library values. Exact numbers are written as strings
//! (`"p/q"` or `"p"`) so no precision is lost.

use cglab::cg::{Capped, ClosureTrace, Cut};
use cglab::constructions::{BoundReport, Surd};
use cglab::lattice::WidthResult;
use cglab::linalg::AffineSubspace;
use cglab::polytope::{HPolyhedron, VPolytope};
use cglab::rational::Rational;
use num_bigint::BigInt;
use serde_json::{json, Value};

pub fn q(x: &Rational) -> Value {
    Value::String(x.to_string())
}

pub fn qv(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

pub fn z(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn zv(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(z).collect())
}

pub fn hpoly(p: &HPolyhedron) -> Value {
    let rows: Vec<Value> = p
        .rows()
        .iter()
        .map(|r| {
            json!({
                "normal": zv(&r.normal),
                "rel": if r.equality { "==" } else { "<=" },
                "rhs": q(&r.rhs),
            })
        })
        .collect();
    json!({ "dim": p.dim(), "rows": rows })
}

pub fn vpoly(v: &VPolytope) -> Value {
    json!({
        "dim": v.dim(),
        "vertices": v.vertices().iter().map(|p| qv(p)).collect::<Vec<_>>(),
    })
}

pub fn cut(c: &Cut) -> Value {
    json!({ "normal": zv(&c.0), "rhs": z(&c.1) })
}

pub fn trace(t: &ClosureTrace) -> Value {
    json!({
        "steps": t.steps.iter().map(hpoly).collect::<Vec<_>>(),
        "cuts": t.cut_log.iter().map(|cs| cs.iter().map(cut).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "fixpoint_at": t.fixpoint_at,
    })
}

pub fn capped(c: Capped) -> Value {
    match c {
        Capped::Value(v) => json!({ "value": v, "exceeds_cap": false }),
        Capped::ExceedsCap(cap) => json!({ "value": null, "exceeds_cap": true, "cap": cap }),
    }
}

pub fn width(w: &WidthResult) -> Value {
    json!({
        "width": w.width.as_ref().map(q),
        "direction": w.direction.as_ref().map(|d| zv(d)),
        "certified": w.certified,
        "bound": w.search_bound,
    })
}

pub fn affine(a: &AffineSubspace) -> Value {
    let (normals, rhs) = a.equations();
    json!({
        "dim": a.dim(),
        "point": qv(a.point()),
        "basis": a.basis().iter().map(|b| qv(b)).collect::<Vec<_>>(),
        "equations": normals.iter().zip(&rhs).map(|(c, d)| json!({ "normal": qv(c), "rhs": q(d) })).collect::<Vec<_>>(),
    })
}

fn surd(s: &Surd) -> Value {
    json!({
        "value": s.to_string(),
        "rational": q(&s.rational),
        "coeff": q(&s.coeff),
        "radicand": z(&s.radicand),
    })
}

pub fn bounds(b: &BoundReport) -> Value {
    json!({
        "n": b.n,
        "phi": z(&b.phi),
        "theta": z(&b.theta),
        "sigma": z(&b.sigma),
        "nu": q(&b.nu),
        "k": z(&b.k),
        "omega_constant": b.omega_constant.as_ref().map(q),
        "symbolic": b.symbolic(),
        "omega": surd(&b.omega),
        "psi": surd(&b.psi),
        "beta_formula": surd(&b.beta_formula),
        "beta_lower": b.beta_lower.as_ref().map(z),
    })
}
