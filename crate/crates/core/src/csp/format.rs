//! Native text format for binary CSP instances.
//!
//! ```text
//! c optional comments, anywhere
//! p bcsp <n> <d> <m>
//! k <var_a> <var_b> <npairs>
//! f <value_a> <value_b>        (npairs lines)
//! ...
//! s <v_1> ... <v_n>            (optional hidden solution)
//! ```
//!
//! All indices are 0-based.

use std::fmt::Write as _;

use super::{Assignment, Constraint, CspInstance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspFile {
    pub instance: CspInstance,
    pub hidden: Option<Assignment>,
}

pub fn parse_csp(text: &str) -> Result<CspFile> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut constraints: Vec<Constraint> = Vec::new();
    // (line of the `k` record, declared pair count)
    let mut open: Option<(usize, usize)> = None;
    let mut hidden: Option<Vec<u32>> = None;

    let close = |open: &mut Option<(usize, usize)>, constraints: &[Constraint]| -> Result<()> {
        if let Some((line, want)) = open.take() {
            let got = constraints.last().map_or(0, |c| c.disallowed.len());
            if got != want {
                return Err(Error::parse(
                    line,
                    format!("constraint declares {want} pairs but {got} follow"),
                ));
            }
        }
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(tag) = tok.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(Error::parse(lineno, "duplicate header"));
                }
                if tok.next() != Some("bcsp") {
                    return Err(Error::parse(lineno, "expected `p bcsp <n> <d> <m>`"));
                }
                let n = number(&mut tok, lineno, "n")?;
                let d = number(&mut tok, lineno, "d")?;
                let m = number(&mut tok, lineno, "m")?;
                trailing(&mut tok, lineno)?;
                header = Some((n, d, m));
            }
            "k" => {
                let (n, _, _) = require_header(header, lineno)?;
                if hidden.is_some() {
                    return Err(Error::parse(lineno, "constraint after solution line"));
                }
                close(&mut open, &constraints)?;
                let a = number(&mut tok, lineno, "var_a")?;
                let b = number(&mut tok, lineno, "var_b")?;
                let np = number(&mut tok, lineno, "npairs")?;
                trailing(&mut tok, lineno)?;
                if a >= n || b >= n {
                    return Err(Error::parse(lineno, format!("variable out of range for n={n}")));
                }
                constraints.push(Constraint::new(index(a, lineno)?, index(b, lineno)?, Vec::with_capacity(np)));
                open = Some((lineno, np));
            }
            "f" => {
                let (_, d, _) = require_header(header, lineno)?;
                let Some((_, want)) = open else {
                    return Err(Error::parse(lineno, "pair line outside a constraint"));
                };
                let a = number(&mut tok, lineno, "value_a")?;
                let b = number(&mut tok, lineno, "value_b")?;
                trailing(&mut tok, lineno)?;
                if a >= d || b >= d {
                    return Err(Error::parse(lineno, format!("value out of range for d={d}")));
                }
                let con = constraints.last_mut().expect("open constraint exists");
                if con.disallowed.len() == want {
                    return Err(Error::parse(lineno, format!("more than {want} pairs for constraint")));
                }
                con.disallowed.push((index(a, lineno)?, index(b, lineno)?));
            }
            "s" => {
                let (n, d, _) = require_header(header, lineno)?;
                if hidden.is_some() {
                    return Err(Error::parse(lineno, "duplicate solution line"));
                }
                close(&mut open, &constraints)?;
                let mut values = Vec::with_capacity(n);
                for t in tok.by_ref() {
                    let v: usize = t
                        .parse()
                        .map_err(|_| Error::parse(lineno, format!("bad value `{t}`")))?;
                    if v >= d {
                        return Err(Error::parse(lineno, format!("solution value {v} outside domain of size {d}")));
                    }
                    values.push(index(v, lineno)?);
                }
                if values.len() != n {
                    return Err(Error::parse(
                        lineno,
                        format!("solution has {} values, expected {n}", values.len()),
                    ));
                }
                hidden = Some(values);
            }
            other => return Err(Error::parse(lineno, format!("unknown record `{other}`"))),
        }
    }
    close(&mut open, &constraints)?;
    let Some((n, d, m)) = header else {
        return Err(Error::parse(0, "missing `p bcsp` header"));
    };
    if constraints.len() != m {
        return Err(Error::parse(
            0,
            format!("header declares {m} constraints, found {}", constraints.len()),
        ));
    }
    let instance = CspInstance::new(n, d, constraints)?;
    let hidden = hidden.map(Assignment::from_values);
    Ok(CspFile { instance, hidden })
}

pub fn emit_csp(instance: &CspInstance, hidden: Option<&Assignment>, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(
        out,
        "p bcsp {} {} {}",
        instance.num_vars(),
        instance.domain_size(),
        instance.num_constraints()
    );
    for con in instance.constraints() {
        let _ = writeln!(out, "k {} {} {}", con.var_a, con.var_b, con.disallowed.len());
        for (a, b) in &con.disallowed {
            let _ = writeln!(out, "f {a} {b}");
        }
    }
    if let Some(h) = hidden {
        out.push('s');
        for v in h.values() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

fn require_header(
    header: Option<(usize, usize, usize)>,
    lineno: usize,
) -> Result<(usize, usize, usize)> {
    header.ok_or_else(|| Error::parse(lineno, "record before `p bcsp` header"))
}

fn number<'t>(tok: &mut impl Iterator<Item = &'t str>, lineno: usize, what: &str) -> Result<usize> {
    let t = tok
        .next()
        .ok_or_else(|| Error::parse(lineno, format!("missing {what}")))?;
    t.parse()
        .map_err(|_| Error::parse(lineno, format!("bad {what} `{t}`")))
}

fn index(v: usize, lineno: usize) -> Result<u32> {
    u32::try_from(v)
        .ok()
        .filter(|&v| v != u32::MAX)
        .ok_or_else(|| Error::parse(lineno, format!("index {v} too large")))
}

fn trailing<'t>(tok: &mut impl Iterator<Item = &'t str>, lineno: usize) -> Result<()> {
    match tok.next() {
        Some(t) => Err(Error::parse(lineno, format!("unexpected trailing token `{t}`"))),
        None => Ok(()),
    }
}
