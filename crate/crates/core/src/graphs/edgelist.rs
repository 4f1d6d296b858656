//! Plain-text edge lists: one undirected edge "u v [weight]" per line.
//!
//! Blank lines and lines starting with `#` are skipped. Weights are integers,
//! fractions "p/q" or decimals and default to 1. Vertices are numbered in
//! order of first appearance.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ratfun::Scalar;
use crate::reduction::LabeledMatrix;

fn parse_weight<T: Scalar>(s: &str, line: usize) -> Result<T> {
    let bad = || Error::Parse(format!("line {line}: invalid weight `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(T::from_ratio(p, q));
    }
    if let Ok(v) = s.parse::<i64>() {
        return Ok(T::from_i64(v));
    }
    let v: f64 = s.parse().map_err(|_| bad())?;
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(T::from_f64(v))
}

pub fn parse_edge_list<T: Scalar>(text: &str) -> Result<LabeledMatrix<T>> {
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, usize, T)> = Vec::new();
    let id = |l: &str, labels: &mut Vec<String>| match labels.iter().position(|x| x == l) {
        Some(i) => i,
        None => {
            labels.push(l.to_string());
            labels.len() - 1
        }
    };
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&f.len()) {
            return Err(Error::Parse(format!("line {}: expected `u v [weight]`", k + 1)));
        }
        let w = match f.get(2) {
            Some(s) => parse_weight(s, k + 1)?,
            None => T::one(),
        };
        let u = id(f[0], &mut labels);
        let v = id(f[1], &mut labels);
        edges.push((u, v, w));
    }
    let n = labels.len();
    let mut data = vec![T::zero(); n * n];
    for (u, v, w) in edges {
        data[u * n + v] = w.clone();
        data[v * n + u] = w;
    }
    LabeledMatrix::new(labels, Matrix::new(n, n, data)?)
}

/// Writes the nonzero upper triangle (diagonal included) of a real symmetric matrix.
pub fn write_edge_list<T: Scalar>(g: &LabeledMatrix<T>) -> Result<String> {
    let m = g.matrix();
    let mut out = String::new();
    for i in 0..g.size() {
        for j in i..g.size() {
            let z = m[(i, j)].to_c64();
            if m[(i, j)] != m[(j, i)] || z.im != 0.0 {
                return Err(Error::NotRealSymmetric((z - m[(j, i)].to_c64()).norm().max(z.im.abs())));
            }
            if m[(i, j)].is_zero() {
                continue;
            }
            let w = if T::EXACT { m[(i, j)].to_string() } else { format!("{}", z.re) };
            out.push_str(&format!("{} {} {}\n", g.labels()[i], g.labels()[j], w));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{ExactRational as Q, FloatComplex};

    #[test]
    fn round_trip() {
        let text = "# triangle with a pendant\na b\nb c 2\nc a 1/2\nc d 0.25\n";
        let g = parse_edge_list::<Q>(text).unwrap();
        assert_eq!(g.labels(), &["a", "b", "c", "d"]);
        assert_eq!(g.matrix()[(2, 0)], Q::from_ratio(1, 2));
        assert_eq!(g.matrix()[(3, 2)], Q::from_ratio(1, 4));
        let back = parse_edge_list::<Q>(&write_edge_list(&g).unwrap()).unwrap();
        assert_eq!(back, g);
        let f = parse_edge_list::<FloatComplex>(text).unwrap();
        assert_eq!(parse_edge_list::<FloatComplex>(&write_edge_list(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(parse_edge_list::<Q>("a b c d"), Err(Error::Parse(_))));
        assert!(matches!(parse_edge_list::<Q>("a b x"), Err(Error::Parse(_))));
        assert!(matches!(parse_edge_list::<Q>("a b 1/0"), Err(Error::Parse(_))));
    }
}
