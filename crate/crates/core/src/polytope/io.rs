//! Plain-text H- and V-representation formats.
//!
//! H-rep: a header line `n m`, then `m` rows `a_1 … a_n <= b` or
//! `a_1 … a_n == b`. V-rep: a header line `n k`, then `k` rows of
//! coordinates. Entries are rationals written `p` or `p/q`. Blank lines and
//! lines starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::rational::{format_int_vector, format_vector, parse_rational, QVector, Rational};

use super::{Constraint, HPolyhedron, VPolytope};

pub fn format_hrep(p: &HPolyhedron) -> String {
    let mut out = format!("{} {}\n", p.dim(), p.rows().len());
    for r in p.rows() {
        let rel = if r.equality { "==" } else { "<=" };
        out.push_str(&format!("{} {} {}\n", format_int_vector(&r.normal), rel, r.rhs));
    }
    out
}

pub fn format_vrep(v: &VPolytope) -> String {
    let mut out = format!("{} {}\n", v.dim(), v.vertices().len());
    for p in v.vertices() {
        out.push_str(&format_vector(p));
        out.push('\n');
    }
    out
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<(usize, usize)> {
    let (ln, line) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let parts: Vec<&str> = line.split_whitespace().collect();
    let bad = || Error::Parse {
        line: ln,
        msg: format!("expected header 'n m', found '{line}'"),
    };
    if parts.len() != 2 {
        return Err(bad());
    }
    let n = parts[0].parse().map_err(|_| bad())?;
    let m = parts[1].parse().map_err(|_| bad())?;
    Ok((n, m))
}

fn parse_entries(ln: usize, tokens: &[&str]) -> Result<QVector> {
    tokens
        .iter()
        .map(|t| parse_rational(t).map_err(|e| e.at_line(ln)))
        .collect()
}

pub fn parse_hrep(text: &str) -> Result<HPolyhedron> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(&mut lines)?;
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, line) = lines.next().ok_or(Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {m} constraint rows"),
        })?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != n + 2 {
            return Err(Error::Parse {
                line: ln,
                msg: format!("expected {n} coefficients, a relation and a right-hand side"),
            });
        }
        let a = parse_entries(ln, &tokens[..n])?;
        let b: Rational = parse_rational(tokens[n + 1]).map_err(|e| e.at_line(ln))?;
        let row = match tokens[n] {
            "<=" => Constraint::leq(&a, b),
            ">=" => Constraint::geq(&a, b),
            "==" | "=" => Constraint::eq(&a, b),
            other => {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("unknown relation '{other}'"),
                })
            }
        };
        rows.push(row);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse {
            line: ln,
            msg: "trailing content after the declared rows".into(),
        });
    }
    HPolyhedron::new(n, rows)
}

pub fn parse_vrep(text: &str) -> Result<VPolytope> {
    let mut lines = content_lines(text);
    let (n, k) = parse_header(&mut lines)?;
    let mut pts = Vec::with_capacity(k);
    for _ in 0..k {
        let (ln, line) = lines.next().ok_or(Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {k} vertex rows"),
        })?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != n {
            return Err(Error::Parse {
                line: ln,
                msg: format!("expected {n} coordinates"),
            });
        }
        pts.push(parse_entries(ln, &tokens)?);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse {
            line: ln,
            msg: "trailing content after the declared vertices".into(),
        });
    }
    VPolytope::new(n, pts)
}
