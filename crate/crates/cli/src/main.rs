//! `cglab`: command-line front end for the exact polyhedral toolkit.

mod experiments;
mod view;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cglab::cg::{
    affine_rank, cg_closure_with_cuts, cg_rank, cut_depth, iterate_closure, Capped,
};
use cglab::constructions::{bounds, pik_parallelogram, qt, sylvester_relaxation, sylvester_simplex, thm2_relaxation};
use cglab::lattice::{affine_hull_integer, enumerate_lattice_points, integer_hull, lattice_width};
use cglab::polytope::io::{format_hrep, format_vrep, parse_hrep, parse_vrep};
use cglab::polytope::{affine_hull, hrep, lp_max, vrep, HPolyhedron, LpOutcome};
use cglab::rational::{format_int_vector, format_vector, parse_rational, unit_vector, QVector, Rational};
use cglab::sat::{affihull_decide, parse_dimacs, reduce, AffihullInstance};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cglab", version, about = "Exact Chvátal-Gomory closures, integer hulls and lattice widths")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone, Default)]
struct Input {
    /// Input file; stdin when absent.
    #[arg(value_name = "FILE")]
    file: Option<PathBuf>,
    /// Input file (same as the positional argument).
    #[arg(long = "in", value_name = "FILE", conflicts_with = "file")]
    input: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Vertices of an H-rep polytope.
    Vrep(Input),
    /// H-rep of the convex hull of a V-rep point list.
    Hrep(Input),
    /// Maximize (or minimize) a linear objective.
    Lp {
        #[command(flatten)]
        input: Input,
        /// Objective coefficients, e.g. "1 -1/2".
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        min: bool,
    },
    /// Integer points, in lexicographic order.
    Points(Input),
    /// Integer hull.
    Ihull(Input),
    /// Affine hull of the integer points (of the polyhedron itself with
    /// `--real`).
    Affhull {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        real: bool,
    },
    /// Lattice width with a search over directions `‖c‖∞ <= bound`.
    Width {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 10)]
        bound: u32,
    },
    /// Chvátal-Gomory closure.
    Closure(Input),
    /// Iterated closures `P, P', …, P^(k)`.
    Iterate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// Chvátal-Gomory rank, searched up to a cap.
    Rank {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 25)]
        cap: usize,
    },
    /// Least p with P^(p) inside the affine hull of the integer hull.
    Affrank {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 25)]
        cap: usize,
    },
    /// Closure round at which `c·x <= delta` becomes valid.
    Cutdepth {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, default_value_t = 25)]
        cap: usize,
    },
    /// Explicit polytope families.
    Construct {
        #[command(subcommand)]
        what: Construct,
        #[arg(long, global = true)]
        json: bool,
    },
    /// Exact values of the bound functions.
    Bounds {
        #[arg(long)]
        n: usize,
        /// Constant C in ω(n) = C·n^{3/2}; symbolic when absent.
        #[arg(long)]
        omega_const: Option<String>,
        /// Evaluate n > 4 (σ(n) has millions of digits).
        #[arg(long)]
        allow_large: bool,
        /// Accepted for uniformity; the output is always JSON.
        #[arg(long)]
        json: bool,
    },
    /// Reduce a DIMACS 3CNF formula to an affine-hull membership instance.
    ReduceSat {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Emit::Hrep)]
        emit: Emit,
    },
    /// Is the point in the affine hull of the integer points?
    Affihull {
        #[command(flatten)]
        input: Input,
        /// Coordinates, or `e_last` for the last unit vector.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Batch drivers producing JSON reports.
    Experiment {
        #[command(subcommand)]
        name: experiments::Experiment,
        /// Emit JSON instead of a table.
        #[arg(long, global = true)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Triangle conv{(0,0), (0,1), (t, 1/2)}.
    Qt {
        #[arg(long)]
        t: u64,
    },
    /// Relaxation conv(P ∪ {x̄ + (k+1)e^n}) of P = conv{0, e^1} ⊆ R^2, or of
    /// the polytope given with --in.
    Thm2 {
        #[arg(long)]
        k: u64,
        #[arg(long, allow_hyphen_values = true)]
        xbar: Option<String>,
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
    },
    /// Relaxation Q of the Sylvester facet P (or T and P with --simplex).
    Sylvester {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/100")]
        lambda: String,
        #[arg(long)]
        simplex: bool,
    },
    /// Parallelogram P_k.
    Pik {
        #[arg(long)]
        k: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Hrep,
    Json,
}

fn read_text(input: &Input) -> anyhow::Result<String> {
    match input.file.as_ref().or(input.input.as_ref()) {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn read_h(input: &Input) -> anyhow::Result<HPolyhedron> {
    Ok(parse_hrep(&read_text(input)?)?)
}

pub(crate) fn parse_qvec(s: &str) -> anyhow::Result<QVector> {
    let v = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(parse_rational)
        .collect::<Result<QVector, _>>()?;
    if v.is_empty() {
        bail!("empty vector '{s}'");
    }
    Ok(v)
}

fn parse_ivec(s: &str) -> anyhow::Result<Vec<BigInt>> {
    parse_qvec(s)?
        .iter()
        .map(|x| if x.is_integer() { Ok(x.to_integer()) } else { bail!("'{x}' is not an integer") })
        .collect()
}

fn check_len(n: usize, v: &[Rational]) -> anyhow::Result<()> {
    if v.len() != n {
        bail!("dimension mismatch: expected {n}, found {}", v.len());
    }
    Ok(())
}

fn emit_h(p: &HPolyhedron, as_json: bool) -> String {
    if as_json {
        view::hpoly(p).to_string() + "\n"
    } else {
        format_hrep(p)
    }
}

fn capped_text(c: Capped) -> String {
    c.to_string() + "\n"
}

fn run(cli: Cli) -> anyhow::Result<String> {
    Ok(match cli.cmd {
        Command::Vrep(i) => {
            let v = vrep(&read_h(&i)?)?;
            if i.json { view::vpoly(&v).to_string() + "\n" } else { format_vrep(&v) }
        }
        Command::Hrep(i) => emit_h(&hrep(&parse_vrep(&read_text(&i)?)?), i.json),
        Command::Lp { input, c, min } => {
            let p = read_h(&input)?;
            let mut c = parse_qvec(&c)?;
            check_len(p.dim(), &c)?;
            if min {
                c = c.iter().map(|x| -x).collect();
            }
            let sign = |x: &Rational| if min { -x } else { x.clone() };
            match lp_max(&p, &c)? {
                LpOutcome::Optimal { value, argmax } => {
                    if input.json {
                        json!({ "status": "optimal", "value": view::q(&sign(&value)), "argmax": view::qv(&argmax) }).to_string() + "\n"
                    } else {
                        format!("optimal {}\nargmax {}\n", sign(&value), format_vector(&argmax))
                    }
                }
                LpOutcome::Unbounded { ray } => {
                    if input.json {
                        json!({ "status": "unbounded", "ray": view::qv(&ray) }).to_string() + "\n"
                    } else {
                        format!("unbounded\nray {}\n", format_vector(&ray))
                    }
                }
            }
        }
        Command::Points(i) => {
            let pts = enumerate_lattice_points(&read_h(&i)?)?;
            if i.json {
                Value::Array(pts.iter().map(|z| view::zv(z)).collect()).to_string() + "\n"
            } else {
                pts.iter().map(|z| format_int_vector(z) + "\n").collect()
            }
        }
        Command::Ihull(i) => emit_h(&integer_hull(&read_h(&i)?)?, i.json),
        Command::Affhull { input, real } => {
            let p = read_h(&input)?;
            let aff = if real { Some(affine_hull(&p)?) } else { affine_hull_integer(&p)? };
            match (aff, input.json) {
                (None, true) => "null\n".into(),
                (None, false) => "empty\n".into(),
                (Some(a), true) => view::affine(&a).to_string() + "\n",
                (Some(a), false) => {
                    let (normals, rhs) = a.equations();
                    let mut out = format!("dim {}\npoint {}\n", a.dim(), format_vector(a.point()));
                    for (c, d) in normals.iter().zip(&rhs) {
                        out.push_str(&format!("{} == {}\n", format_vector(c), d));
                    }
                    out
                }
            }
        }
        Command::Width { input, bound } => {
            let w = lattice_width(&read_h(&input)?, bound)?;
            if input.json {
                view::width(&w).to_string() + "\n"
            } else {
                let width = w.width.as_ref().map_or("inf".to_string(), |x| x.to_string());
                let dir = w.direction.as_ref().map_or("-".to_string(), |d| format_int_vector(d));
                format!("width {width}\ndirection {dir}\ncertified {}\nbound {}\n", w.certified, w.search_bound)
            }
        }
        Command::Closure(i) => {
            let (c, cuts) = cg_closure_with_cuts(&read_h(&i)?)?;
            if i.json {
                json!({ "closure": view::hpoly(&c), "cuts": cuts.iter().map(view::cut).collect::<Vec<_>>() }).to_string() + "\n"
            } else {
                format_hrep(&c)
            }
        }
        Command::Iterate { input, k } => {
            let t = iterate_closure(&read_h(&input)?, k)?;
            if input.json {
                view::trace(&t).to_string() + "\n"
            } else {
                let mut out = String::new();
                for (j, s) in t.steps.iter().enumerate() {
                    out.push_str(&format!("# step {j}\n{}", format_hrep(s)));
                }
                if let Some(f) = t.fixpoint_at {
                    out.push_str(&format!("# fixpoint at {f}\n"));
                }
                out
            }
        }
        Command::Rank { input, cap } => {
            let r = cg_rank(&read_h(&input)?, cap)?;
            if input.json { view::capped(r).to_string() + "\n" } else { capped_text(r) }
        }
        Command::Affrank { input, cap } => {
            let r = affine_rank(&read_h(&input)?, cap)?;
            if input.json { view::capped(r).to_string() + "\n" } else { capped_text(r) }
        }
        Command::Cutdepth { input, c, delta, cap } => {
            let p = read_h(&input)?;
            let c = parse_ivec(&c)?;
            let delta = parse_rational(&delta)?;
            let r = cut_depth(&p, &c, &delta, cap)?;
            if input.json { view::capped(r).to_string() + "\n" } else { capped_text(r) }
        }
        Command::Construct { what, json: as_json } => construct(what, as_json)?,
        Command::Bounds { n, omega_const, allow_large, json: _ } => {
            let c = omega_const.as_deref().map(parse_rational).transpose()?;
            view::bounds(&bounds(n, c.as_ref(), allow_large)?).to_string() + "\n"
        }
        Command::ReduceSat { input, emit } => {
            let f = parse_dimacs(&read_text(&input)?)?;
            let inst = reduce(&f);
            match (emit, input.json) {
                (Emit::Json, _) | (_, true) => {
                    json!({ "point": view::qv(&inst.x), "polyhedron": view::hpoly(&inst.q) }).to_string() + "\n"
                }
                (Emit::Hrep, false) => format_hrep(&inst.q),
            }
        }
        Command::Affihull { input, point } => {
            let q = read_h(&input)?;
            let x = if point == "e_last" {
                if q.dim() == 0 {
                    bail!("e_last needs a positive dimension");
                }
                cglab::rational::int_to_q(&unit_vector(q.dim(), q.dim() - 1))
            } else {
                parse_qvec(&point)?
            };
            check_len(q.dim(), &x)?;
            let d = affihull_decide(&AffihullInstance { x, q })?;
            if input.json {
                json!({ "member": d.member, "hull_dim": d.hull_dim }).to_string() + "\n"
            } else {
                format!("{}\n", d.member)
            }
        }
        Command::Experiment { name, json: as_json } => experiments::run(name, as_json)?,
    })
}

fn construct(what: Construct, as_json: bool) -> anyhow::Result<String> {
    let p = match what {
        Construct::Qt { t } => qt(t)?,
        Construct::Pik { k } => pik_parallelogram(k)?,
        Construct::Thm2 { k, xbar, input } => {
            let base = match input {
                Some(path) => parse_hrep(&std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?)?,
                None => experiments::unit_segment(),
            };
            let xbar = xbar.as_deref().map(parse_qvec).transpose()?;
            thm2_relaxation(&base, k, xbar.as_deref())?
        }
        Construct::Sylvester { n, lambda, simplex } => {
            if simplex {
                let (t, p) = sylvester_simplex(n)?;
                return Ok(if as_json {
                    json!({ "T": view::hpoly(&t), "P": view::hpoly(&p) }).to_string() + "\n"
                } else {
                    format!("# T\n{}# P\n{}", format_hrep(&t), format_hrep(&p))
                });
            }
            sylvester_relaxation(n, &parse_rational(&lambda)?)?
        }
    };
    Ok(emit_h(&p, as_json))
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("CGLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().with_context(|| format!("CGLAB_THREADS must be a number, found '{v}'"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe downstream is not an error of ours
            let _ = stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
