//! Batch drivers. Each produces one report per instance; every quantity is
//! exact except `wall_time_s`.

use std::time::Instant;

use clap::Subcommand;
use cglab::cg::{affine_rank, cch_check, cg_closure, cg_rank, iterate_closure};
use cglab::constructions::{qt, sylvester, sylvester_apex, sylvester_relaxation, sylvester_simplex, thm2_relaxation};
use cglab::lattice::{enumerate_lattice_points, integer_hull};
use cglab::polytope::{equals, hrep_of_points, is_subset, lp_max, HPolyhedron, LpOutcome};
use cglab::rational::{int_to_q, qvec, qvec_int, unit_vector, QVector, Rational};
use cglab::sat::{affihull_decide, brute_force_sat, reduce, structural_checks, CnfFormula};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::view;

#[derive(Subcommand)]
pub enum Experiment {
    /// Ranks of the triangles Q_t.
    Figure1 {
        #[arg(long, default_value_t = 5)]
        t_max: u64,
        #[arg(long, default_value_t = 10)]
        cap: usize,
    },
    /// Affine ranks of the relaxations of conv{0, e^1}.
    Thm2 {
        #[arg(long, default_value_t = 3)]
        k_max: u64,
    },
    /// Sylvester relaxation: integer hull, height and the chain certificate.
    Sylvester {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "1/100")]
        lambda: String,
        /// Also iterate closures exactly (default only for n = 2).
        #[arg(long)]
        iterate: bool,
    },
    /// Random 3CNF formulas: reduction versus truth tables.
    Satgrid {
        #[arg(long, default_value_t = 3)]
        max_vars: usize,
        #[arg(long, default_value_t = 5)]
        max_clauses: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Affine and CG ranks of random rational polytopes.
    AffrankRandom {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn unit_segment() -> HPolyhedron {
    hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[1, 0])])
}

struct Report {
    fields: Map<String, Value>,
    start: Instant,
}

impl Report {
    fn new(experiment: &str, instance: Value) -> Self {
        let mut fields = Map::new();
        fields.insert("experiment".into(), json!(experiment));
        fields.insert("instance".into(), instance);
        Report { fields, start: Instant::now() }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.fields.insert(key.into(), v);
    }

    fn finish(mut self) -> Value {
        self.set("wall_time_s", json!(self.start.elapsed().as_secs_f64()));
        Value::Object(self.fields)
    }
}

pub fn run(e: Experiment, as_json: bool) -> anyhow::Result<String> {
    let reports = match e {
        Experiment::Figure1 { t_max, cap } => figure1(t_max, cap)?,
        Experiment::Thm2 { k_max } => thm2(k_max)?,
        Experiment::Sylvester { n, lambda, iterate } => vec![sylvester_report(n, &cglab::rational::parse_rational(&lambda)?, iterate)?],
        Experiment::Satgrid { max_vars, max_clauses, samples, seed } => satgrid(max_vars, max_clauses, samples, seed)?,
        Experiment::AffrankRandom { count, dim, cap, seed } => affrank_random(count, dim, cap, seed)?,
    };
    Ok(if as_json {
        Value::Array(reports).to_string() + "\n"
    } else {
        reports.iter().map(|r| table_line(r) + "\n").collect()
    })
}

fn table_line(r: &Value) -> String {
    let Value::Object(m) = r else { return r.to_string() };
    m.iter()
        .filter(|(k, _)| k.as_str() != "experiment")
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            Value::Number(x) if k == "wall_time_s" => format!("{k}={:.3}", x.as_f64().unwrap_or(0.0)),
            Value::Object(c) if c.contains_key("exceeds_cap") => match (&c["value"], c.get("cap")) {
                (Value::Null, Some(cap)) => format!("{k}>{cap}"),
                (v, _) => format!("{k}={v}"),
            },
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn figure1(t_max: u64, cap: usize) -> anyhow::Result<Vec<Value>> {
    let segment = hrep_of_points(2, vec![qvec_int(&[0, 0]), qvec_int(&[0, 1])]);
    let mut out = Vec::new();
    for t in 1..=t_max {
        let mut r = Report::new("figure1", json!({ "t": t }));
        let q = qt(t)?;
        r.set("hull_is_segment", json!(equals(&integer_hull(&q)?, &segment)));
        r.set("inside_next_closure", json!(is_subset(&q, &cg_closure(&qt(t + 1)?)?)?));
        r.set("rank", view::capped(cg_rank(&q, cap)?));
        r.set("affine_rank", view::capped(affine_rank(&q, cap)?));
        out.push(r.finish());
    }
    Ok(out)
}

fn thm2(k_max: u64) -> anyhow::Result<Vec<Value>> {
    let p = unit_segment();
    let witness = qvec(&[(1, 2), (1, 1)]);
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut r = Report::new("thm2", json!({ "k": k }));
        let q = thm2_relaxation(&p, k, None)?;
        let pts = enumerate_lattice_points(&q)?;
        r.set("integer_points", Value::Array(pts.iter().map(|z| view::zv(z)).collect()));
        r.set("affine_rank", view::capped(affine_rank(&q, k as usize)?));
        let trace = iterate_closure(&q, k as usize)?;
        let qk = trace.steps.get(k as usize).unwrap_or(trace.last());
        r.set("witness", view::qv(&witness));
        r.set("witness_in_kth_closure", json!(qk.contains(&witness)));
        out.push(r.finish());
    }
    Ok(out)
}

fn sylvester_report(n: usize, lambda: &Rational, iterate: bool) -> anyhow::Result<Value> {
    let mut r = Report::new("sylvester", json!({ "n": n, "lambda": view::q(lambda) }));
    let s = sylvester(n)?;
    let steps = s.last() - BigInt::from(2);
    let (_, p) = sylvester_simplex(n)?;
    let q = sylvester_relaxation(n, lambda)?;
    r.set("t", view::zv(&s.t));
    r.set("hull_is_P", json!(equals(&integer_hull(&q)?, &p)));
    let en = int_to_q(&unit_vector(n, n - 1));
    let height = match lp_max(&q, &en)? {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Unbounded { .. } => anyhow::bail!("relaxation is unbounded"),
    };
    r.set("height", view::q(&height));
    r.set("height_exceeds", json!(height > Rational::from_integer(steps.clone())));
    r.set("steps", view::z(&steps));
    let rounds: usize = steps.to_string().parse()?;
    if rounds > 0 {
        let apex = sylvester_apex(n, lambda)?;
        let rep = cch_check(&q, &apex, &unit_vector(n, n - 1), rounds)?;
        let last = rep.points.last().expect("rounds > 0");
        r.set("certificate_ok", json!(rep.hypothesis_ok && !p.contains(last)));
        r.set("certificate_point", view::qv(last));
        if iterate || n == 2 {
            let trace = iterate_closure(&q, rounds)?;
            let differs = (1..=rounds).all(|i| !equals(trace.steps.get(i).unwrap_or(trace.last()), &p));
            r.set("iterated_differs_from_P", json!(differs));
        }
    }
    Ok(r.finish())
}

fn random_formula(rng: &mut ChaCha8Rng, n: usize, m: usize) -> anyhow::Result<CnfFormula> {
    let clauses = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=n.min(3));
            let mut vars: Vec<i64> = (1..=n as i64).collect();
            for i in 0..size {
                let j = rng.gen_range(i..n);
                vars.swap(i, j);
            }
            vars[..size].iter().map(|&v| if rng.gen_bool(0.5) { -v } else { v }).collect()
        })
        .collect();
    Ok(CnfFormula::new(n, clauses)?)
}

fn satgrid(max_vars: usize, max_clauses: usize, samples: usize, seed: u64) -> anyhow::Result<Vec<Value>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 1..=max_vars {
        for m in 1..=max_clauses {
            let mut r = Report::new("satgrid", json!({ "n": n, "m": m, "samples": samples }));
            let (mut sat, mut agree, mut structural) = (0, 0, 0);
            for _ in 0..samples {
                let f = random_formula(&mut rng, n, m)?;
                let truth = brute_force_sat(&f).is_some();
                let decided = affihull_decide(&reduce(&f))?.member;
                sat += usize::from(truth);
                agree += usize::from(truth == decided);
                structural += usize::from(structural_checks(&f)?.all());
            }
            r.set("satisfiable", json!(sat));
            r.set("agree", json!(agree));
            r.set("structural_ok", json!(structural));
            out.push(r.finish());
        }
    }
    Ok(out)
}

fn affrank_random(count: usize, dim: usize, cap: usize, seed: u64) -> anyhow::Result<Vec<Value>> {
    if dim == 0 {
        anyhow::bail!("dim must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for i in 0..count {
        let k = rng.gen_range(2..=dim + 2);
        let pts: Vec<QVector> = (0..k)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let d = rng.gen_range(1..=3i64);
                        Rational::new(BigInt::from(rng.gen_range(-3 * d..=3 * d)), BigInt::from(d))
                    })
                    .collect()
            })
            .collect();
        let p = hrep_of_points(dim, pts.clone());
        let mut r = Report::new("affrank-random", json!({ "index": i, "points": pts.iter().map(|x| view::qv(x)).collect::<Vec<_>>() }));
        // a polytope without integer points has no integer hull to reach
        let shown = |c: cglab::Result<cglab::cg::Capped>| match c {
            Ok(c) => view::capped(c),
            Err(e) => json!({ "error": e.to_string() }),
        };
        r.set("affine_rank", shown(affine_rank(&p, cap)));
        r.set("rank", shown(cg_rank(&p, cap)));
        out.push(r.finish());
    }
    Ok(out)
}
