//! Text formats for algorithms and equivalence transforms.
//!
//! Algorithm files (`mmalg-v1`):
//!
//! ```text
//! mmalg-v1 m k n R
//! U
//! i j p/q
//! ...
//!
//! V
//! ...
//!
//! W
//! ...
//! ```
//!
//! with one `U`, `V`, `W` block per product, in product order. Blocks list the nonzero
//! coefficients of the slice and are separated by blank lines. The writer sorts entries
//! and always spells values as `p/q`; the reader accepts any order, bare integers,
//! repeated positions (summed) and `#` comment lines.
//!
//! Transform files (`mmequiv-v1`): a header `mmequiv-v1 m k n R`, then the six matrices
//! `sigma gamma nabla lambda mu beta`, each as its name on a line followed by its rows,
//! and finally `perm` followed by one line with the one-based source product of every
//! output slot.

use std::fmt::Write as _;

use crate::algorithm::{BilinearAlgorithm, CoeffMatrix, DimensionTriple, Product};
use crate::matrix::Matrix;
use crate::scalar::{format_fraction, parse_rational, Rational};
use crate::transforms::EquivalenceTransform;
use crate::{Error, Result};

pub const ALGORITHM_MAGIC: &str = "mmalg-v1";
pub const TRANSFORM_MAGIC: &str = "mmequiv-v1";

pub fn write_algorithm(alg: &BilinearAlgorithm) -> String {
    let d = alg.dims();
    let mut out = format!("{ALGORITHM_MAGIC} {} {} {} {}\n", d.m(), d.k(), d.n(), alg.rank());
    for p in alg.products() {
        for (name, cm) in [("U", &p.u), ("V", &p.v), ("W", &p.w)] {
            out.push_str(name);
            out.push('\n');
            for (r, c, x) in cm.entries() {
                let _ = writeln!(out, "{r} {c} {}", format_fraction(x));
            }
            out.push('\n');
        }
    }
    out
}

/// Numbered, trimmed lines with comments removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'))
}

fn parse_header(line: Option<(usize, &str)>, magic: &str) -> Result<(usize, [usize; 4])> {
    let (lno, header) = line.ok_or_else(|| Error::parse(1, "empty file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some(magic) {
        return Err(Error::parse(lno, format!("expected `{magic} m k n R` header")));
    }
    let nums: Vec<usize> = toks
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::parse(lno, "header sizes must be non-negative integers"))?;
    let sizes: [usize; 4] = nums
        .try_into()
        .map_err(|_| Error::parse(lno, format!("expected `{magic} m k n R` header")))?;
    if sizes.contains(&0) {
        return Err(Error::parse(lno, "sizes must be positive"));
    }
    Ok((lno, sizes))
}

pub fn parse_algorithm(text: &str) -> Result<BilinearAlgorithm> {
    let mut lines = content_lines(text).filter(|(_, l)| !l.is_empty()).peekable();
    let (hline, [m, k, n, rank]) = parse_header(lines.next(), ALGORITHM_MAGIC)?;
    let dims = DimensionTriple::new(m, k, n).map_err(|e| Error::parse(hline, e.to_string()))?;
    let shapes = [("U", m, k), ("V", k, n), ("W", m, n)];

    let mut products = Vec::with_capacity(rank);
    let mut last_line = hline;
    for s in 0..rank {
        let mut slices = Vec::with_capacity(3);
        for (name, rows, cols) in shapes {
            let (lno, tag) = lines.next().ok_or_else(|| {
                Error::parse(
                    last_line + 1,
                    format!("unexpected end of file: expected {name} block of product {}", s + 1),
                )
            })?;
            if tag != name {
                return Err(Error::parse(lno, format!("expected `{name}`, found `{tag}`")));
            }
            last_line = lno;
            let mut entries = Vec::new();
            while let Some(&(lno, line)) = lines.peek() {
                if matches!(line, "U" | "V" | "W") {
                    break;
                }
                lines.next();
                last_line = lno;
                let toks: Vec<&str> = line.split_whitespace().collect();
                let [r, c, x] = toks[..] else {
                    return Err(Error::parse(lno, "expected `row col value`"));
                };
                let r: usize = r.parse().map_err(|_| Error::parse(lno, format!("bad row `{r}`")))?;
                let c: usize = c.parse().map_err(|_| Error::parse(lno, format!("bad column `{c}`")))?;
                let x: Rational = parse_rational(x).ok_or_else(|| Error::parse(lno, format!("bad value `{x}`")))?;
                if r >= rows || c >= cols {
                    return Err(Error::parse(
                        lno,
                        format!("position ({r}, {c}) outside the {rows}x{cols} {name} slice"),
                    ));
                }
                entries.push((r, c, x));
            }
            slices.push(CoeffMatrix::from_entries(rows, cols, entries).map_err(|e| Error::parse(lno, e.to_string()))?);
        }
        let w = slices.pop().expect("three slices");
        let v = slices.pop().expect("three slices");
        let u = slices.pop().expect("three slices");
        products.push(Product { u, v, w });
    }
    if let Some((lno, _)) = lines.next() {
        return Err(Error::parse(lno, format!("content after the {rank} declared products")));
    }
    BilinearAlgorithm::new(dims, products).map_err(|e| Error::parse(hline, e.to_string()))
}

pub fn write_transform(t: &EquivalenceTransform) -> String {
    let d = t.dims();
    let mut out = format!("{TRANSFORM_MAGIC} {} {} {} {}\n", d.m(), d.k(), d.n(), t.rank());
    for (name, m) in t.matrices() {
        out.push_str(name);
        out.push('\n');
        for r in 0..m.rows() {
            let row: Vec<String> = m.row(r).iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    let perm: Vec<String> = t.perm().iter().map(|s| (s + 1).to_string()).collect();
    let _ = writeln!(out, "perm\n{}", perm.join(" "));
    out
}

pub fn parse_transform(text: &str) -> Result<EquivalenceTransform> {
    let mut lines = content_lines(text).filter(|(_, l)| !l.is_empty());
    let (hline, [m, k, n, rank]) = parse_header(lines.next(), TRANSFORM_MAGIC)?;
    let mut last = hline;
    let mut next = |what: &str| {
        let item = lines.next();
        match item {
            Some((lno, l)) => {
                last = lno;
                Ok((lno, l))
            }
            None => Err(Error::parse(
                last + 1,
                format!("unexpected end of file: expected {what}"),
            )),
        }
    };

    let mut mats: Vec<Matrix<Rational>> = Vec::with_capacity(6);
    for (name, size) in [
        ("sigma", m),
        ("gamma", m),
        ("nabla", k),
        ("lambda", k),
        ("mu", n),
        ("beta", n),
    ] {
        let (lno, tag) = next(name)?;
        if tag != name {
            return Err(Error::parse(lno, format!("expected `{name}`, found `{tag}`")));
        }
        let mut data = Vec::with_capacity(size * size);
        for _ in 0..size {
            let (lno, row) = next(&format!("row of {name}"))?;
            let vals: Vec<Rational> = row
                .split_whitespace()
                .map(|t| parse_rational(t).ok_or_else(|| Error::parse(lno, format!("bad value `{t}`"))))
                .collect::<Result<_>>()?;
            if vals.len() != size {
                return Err(Error::parse(lno, format!("{name} rows need {size} entries")));
            }
            data.extend(vals);
        }
        mats.push(Matrix::new(size, size, data)?);
    }
    let (lno, tag) = next("perm")?;
    if tag != "perm" {
        return Err(Error::parse(lno, format!("expected `perm`, found `{tag}`")));
    }
    let (lno, row) = next("permutation")?;
    let perm: Vec<usize> = row
        .split_whitespace()
        .map(|t| match t.parse::<usize>() {
            Ok(s) if s >= 1 => Ok(s - 1),
            _ => Err(Error::parse(lno, format!("bad product index `{t}`"))),
        })
        .collect::<Result<_>>()?;
    if perm.len() != rank {
        return Err(Error::parse(lno, format!("expected {rank} product indices")));
    }
    if let Some((lno, _)) = lines.next() {
        return Err(Error::parse(lno, "trailing content"));
    }
    let mut it = mats.into_iter();
    let mut take = || it.next().expect("six matrices");
    EquivalenceTransform::new(take(), take(), take(), take(), take(), take(), perm)
}
