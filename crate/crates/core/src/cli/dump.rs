//! Text dump of a density operator: a `dims d_A d_B` header, then one
//! `row col re im` line per entry with modulus above [`DUMP_THRESHOLD`].
//! Values carry 17 significant digits, so a dump round-trips exactly.

use std::io::Write;

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::operators::{BipartiteDims, DensityOperator};

pub const DUMP_THRESHOLD: f64 = 1e-14;

pub fn write_density<W: Write>(rho: &DensityOperator, mut out: W) -> std::io::Result<()> {
    let dims = rho.dims();
    writeln!(out, "dims {} {}", dims.d_a(), dims.d_b())?;
    let m = rho.matrix();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            if z.norm() > DUMP_THRESHOLD {
                writeln!(out, "{i} {j} {:.16e} {:.16e}", z.re, z.im)?;
            }
        }
    }
    Ok(())
}

pub fn density_to_string(rho: &DensityOperator) -> String {
    let mut buf = Vec::new();
    write_density(rho, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("dump is ASCII")
}

/// Whitespace-separated tokens with their byte offsets.
fn tokens(line: &str, start: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut pos = 0;
    for tok in line.split_ascii_whitespace() {
        let at = pos + line[pos..].find(tok).expect("token is in line");
        out.push((start + at, tok));
        pos = at + tok.len();
    }
    out
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

/// Raw matrix and dimensions from a dump; no density validation.
pub fn parse_density_matrix(text: &str) -> Result<(Mat<c64>, BipartiteDims)> {
    let mut dims: Option<BipartiteDims> = None;
    let mut matrix = Mat::<c64>::zeros(0, 0);
    let mut filled: Vec<bool> = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let start = offset;
        offset += raw.len();
        let toks = tokens(raw, start);
        if toks.is_empty() {
            continue;
        }
        let Some(d) = dims else {
            if toks[0].1 != "dims" || toks.len() != 3 {
                return Err(parse_err(toks[0].0, "expected header 'dims d_A d_B'"));
            }
            let size = |(at, t): (usize, &str)| -> Result<usize> {
                t.parse::<usize>()
                    .ok()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| parse_err(at, format!("invalid dimension '{t}'")))
            };
            let d = BipartiteDims::new(size(toks[1])?, size(toks[2])?)
                .map_err(|e| parse_err(toks[1].0, e.to_string()))?;
            matrix = Mat::zeros(d.total(), d.total());
            filled = vec![false; d.total() * d.total()];
            dims = Some(d);
            continue;
        };
        if toks.len() != 4 {
            return Err(parse_err(toks[0].0, "expected 'row col re im'"));
        }
        let total = d.total();
        let index = |(at, t): (usize, &str)| -> Result<usize> {
            let v = t
                .parse::<usize>()
                .map_err(|_| parse_err(at, format!("invalid index '{t}'")))?;
            if v >= total {
                return Err(parse_err(
                    at,
                    format!("index {v} out of range (dimension {total})"),
                ));
            }
            Ok(v)
        };
        let real = |(at, t): (usize, &str)| -> Result<f64> {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(at, format!("invalid number '{t}'")))
        };
        let (i, j) = (index(toks[0])?, index(toks[1])?);
        let z = c64::new(real(toks[2])?, real(toks[3])?);
        if std::mem::replace(&mut filled[i * total + j], true) {
            return Err(parse_err(toks[0].0, format!("duplicate entry ({i}, {j})")));
        }
        matrix[(i, j)] = z;
    }
    match dims {
        Some(d) => Ok((matrix, d)),
        None => Err(parse_err(text.len(), "missing 'dims' header")),
    }
}

/// Parses and validates a dump.
pub fn read_density(text: &str) -> Result<DensityOperator> {
    let (m, dims) = parse_density_matrix(text)?;
    DensityOperator::new(m, dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> DensityOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = c64::new(0.0, 0.0);
        DensityOperator::from_pure(
            &[c64::new(s, 0.0), z, z, c64::new(0.0, s)],
            BipartiteDims::new(2, 2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let rho = bell();
        let text = density_to_string(&rho);
        assert!(text.starts_with("dims 2 2\n"));
        assert_eq!(text.lines().count(), 5);
        let back = read_density(&text).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(back.matrix()[(i, j)], rho.matrix()[(i, j)]);
            }
        }
    }

    #[test]
    fn byte_offsets() {
        let cases: [(&str, usize); 6] = [
            ("", 0),
            ("dim 2 2\n", 0),
            ("dims 2 x\n", 7),
            ("dims 2 2\n0 0 0.5\n", 9),
            ("dims 2 2\n0 4 1 0\n", 11),
            ("dims 2 2\n0 0 0.5 0\n 0 0 0.5 0\n", 20),
        ];
        for (text, want) in cases {
            match parse_density_matrix(text) {
                Err(Error::Parse { offset, .. }) => assert_eq!(offset, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        match parse_density_matrix("dims 1 2\n0 0 1 nan\n") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_density_is_reported() {
        let text = "dims 1 2\n0 0 2 0\n";
        assert!(matches!(read_density(text), Err(Error::InvalidDensity(_))));
    }
}
