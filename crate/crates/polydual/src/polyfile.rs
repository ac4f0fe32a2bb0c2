//! Polytope files: a `POLY m v` header line, then `v` lines of `m`
//! whitespace-separated rationals in `p/q` (or integer) form. Blank lines and
//! lines starting with `#` are ignored.

use std::fs;
use std::path::Path;

use polydual_core::search::realization_text;
use polydual_core::{QVector, Rational, VPolytope};

#[derive(Debug, thiserror::Error)]
pub enum PolyFileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: expected header `POLY m v`")]
    Header { line: usize },
    #[error("line {line}: expected {expected} coordinates, found {found}")]
    Arity { line: usize, expected: usize, found: usize },
    #[error("line {line}: bad rational {token:?}")]
    Rational { line: usize, token: String },
    #[error("expected {expected} vertices, found {found}")]
    VertexCount { expected: usize, found: usize },
    #[error("{0}")]
    Geometry(#[from] polydual_core::Error),
}

/// Parses the coordinates without building the hull.
pub fn parse_points(text: &str) -> Result<Vec<QVector>, PolyFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(PolyFileError::Header { line: 1 })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (m, v) = match fields.as_slice() {
        ["POLY", m, v] => match (m.parse::<usize>(), v.parse::<usize>()) {
            (Ok(m), Ok(v)) => (m, v),
            _ => return Err(PolyFileError::Header { line: hline }),
        },
        _ => return Err(PolyFileError::Header { line: hline }),
    };
    let mut points = Vec::with_capacity(v);
    for (line, body) in lines {
        let coords = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Rational>()
                    .map_err(|_| PolyFileError::Rational { line, token: tok.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if coords.len() != m {
            return Err(PolyFileError::Arity { line, expected: m, found: coords.len() });
        }
        points.push(QVector::new(coords));
    }
    if points.len() != v {
        return Err(PolyFileError::VertexCount { expected: v, found: points.len() });
    }
    Ok(points)
}

pub fn parse(text: &str) -> Result<VPolytope, PolyFileError> {
    Ok(VPolytope::new(parse_points(text)?)?)
}

pub fn serialize(p: &VPolytope) -> String {
    realization_text(p.vertices())
}

pub fn read(path: impl AsRef<Path>) -> Result<VPolytope, PolyFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|source| PolyFileError::Io { path: path.display().to_string(), source })?;
    parse(&text)
}

pub fn write(path: impl AsRef<Path>, p: &VPolytope) -> Result<(), PolyFileError> {
    let path = path.as_ref();
    fs::write(path, serialize(p))
        .map_err(|source| PolyFileError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use polydual_core::construct::{ngon, truncate_vertices};

    #[test]
    fn round_trip_is_exact() {
        let p = truncate_vertices(&ngon(5).unwrap(), &"1/3".parse().unwrap()).unwrap();
        let text = serialize(&p);
        let back = parse(&text).unwrap();
        assert_eq!(back.vertices(), p.vertices());
        assert_eq!(serialize(&back), text);
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = parse("# square\nPOLY 2 4\n0 0\n\n1 0\n0 1\n2/2 3/3\n").unwrap();
        assert_eq!(p.num_vertices(), 4);
        assert_eq!(serialize(&p), "POLY 2 4\n0 0\n1 0\n0 1\n1 1\n");
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(parse(""), Err(PolyFileError::Header { .. })));
        assert!(matches!(parse("POLY 2\n"), Err(PolyFileError::Header { .. })));
        assert!(matches!(parse("POLY 2 1\n1 2 3\n"), Err(PolyFileError::Arity { line: 2, .. })));
        assert!(matches!(parse("POLY 1 2\n0\n0.5\n"), Err(PolyFileError::Rational { line: 3, .. })));
        assert!(matches!(parse("POLY 1 2\n0\n1/0\n"), Err(PolyFileError::Rational { .. })));
        assert!(matches!(parse("POLY 1 3\n0\n1\n"), Err(PolyFileError::VertexCount { .. })));
        assert!(matches!(parse("POLY 2 3\n0 0\n1 1\n2 2\n"), Err(PolyFileError::Geometry(_))));
    }
}
