//! Text formats: edge lists, graph6 strings and weight files.

use crate::error::{Error, Result};
use crate::graph::{Graph, WeightVec};

/// Parses an edge list: the first non-comment line holds `n`, every further
/// line one edge `i j`. Blank lines and lines starting with `#` are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Parse("edge list is empty".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("vertex count: {e}")))?;
    let mut edges = Vec::new();
    for (k, line) in lines.enumerate() {
        let nums: Vec<&str> = line.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(Error::Parse(format!("edge line {}: expected `i j`, got `{line}`", k + 1)));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| Error::Parse(format!("edge line {}: {e}", k + 1)))
        };
        edges.push((parse(nums[0])?, parse(nums[1])?));
    }
    Graph::new(n, &edges)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("{}\n", g.n());
    for &(i, j) in g.edges() {
        s.push_str(&format!("{i} {j}\n"));
    }
    s
}

/// Reads a graph6 string (vertex counts up to 62).
pub fn parse_graph6(s: &str) -> Result<Graph> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse("empty graph6 string".into()));
    }
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse("graph6 characters must lie in 63..=126".into()));
    }
    if bytes[0] == 126 {
        return Err(Error::Parse("graph6 with more than 62 vertices is not supported".into()));
    }
    let n = (bytes[0] - 63) as usize;
    let need = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if bytes.len() - 1 != need {
        return Err(Error::Parse(format!(
            "graph6 body has {} bytes, expected {need}",
            bytes.len() - 1
        )));
    }
    let bit = |k: usize| -> bool {
        let byte = bytes[1 + k / 6] - 63;
        byte >> (5 - k % 6) & 1 == 1
    };
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i + 1, j + 1));
            }
            k += 1;
        }
    }
    Graph::new(n, &edges)
}

/// Writes the graph6 string of `g`.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = vec![(n as u8) + 63];
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i + 1, j + 1) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Whether a weight file addresses vertices or edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Vertex,
    Edge,
}

/// Parses integer weights for `g`: either a JSON array in vertex or edge
/// order, or lines `i w` (vertices) / `i j w` (edges). Unlisted entries are 0.
pub fn parse_weights(text: &str, g: &Graph, kind: WeightKind) -> Result<WeightVec> {
    let len = match kind {
        WeightKind::Vertex => g.n(),
        WeightKind::Edge => g.edge_count(),
    };
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let vals: Vec<serde_json::Value> =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("weights: {e}")))?;
        let w = vals
            .iter()
            .map(|v| {
                v.as_i64()
                    .ok_or_else(|| Error::Parse(format!("weight {v} is not an integer")))
            })
            .collect::<Result<Vec<i64>>>()?;
        if w.len() != len {
            return Err(Error::dims(len, w.len()));
        }
        return Ok(WeightVec(w));
    }
    let mut w = vec![0i64; len];
    let mut seen = vec![false; len];
    for line in trimmed
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let f: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<i64>()
                .map_err(|e| Error::Parse(format!("weights line `{line}`: {e}")))
        };
        let (idx, val) = match (kind, f.len()) {
            (WeightKind::Vertex, 2) => {
                let v = num(f[0])?;
                if v < 1 || v as usize > g.n() {
                    return Err(Error::Parse(format!("vertex {v} out of range")));
                }
                (v as usize - 1, num(f[1])?)
            }
            (WeightKind::Edge, 3) => {
                let (a, b) = (num(f[0])?, num(f[1])?);
                let e = (a >= 1 && b >= 1)
                    .then(|| g.edge_index(a as usize, b as usize))
                    .flatten()
                    .ok_or_else(|| Error::Parse(format!("{a} {b} is not an edge")))?;
                (e, num(f[2])?)
            }
            _ => return Err(Error::Parse(format!("malformed weights line `{line}`"))),
        };
        if seen[idx] {
            return Err(Error::Parse(format!("weight given twice in `{line}`")));
        }
        seen[idx] = true;
        w[idx] = val;
    }
    Ok(WeightVec(w))
}

/// Formats a float with 9 significant digits in the style of C's `%.9g`.
pub fn fmt_g9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mant.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::cycle(5);
        let text = to_edge_list(&g);
        assert_eq!(parse_edge_list(&text).unwrap(), g);
        let g2 = parse_edge_list("# c4\n4\n1 2\n\n2 3\n3 4\n4 1\n").unwrap();
        assert_eq!(g2, Graph::cycle(4));
        assert!(parse_edge_list("3\n1 1\n").is_err());
        assert!(parse_edge_list("3\n1 x\n").is_err());
        assert!(parse_edge_list("").is_err());
    }

    #[test]
    fn graph6_known_strings() {
        // standard examples: C5 = "Dhc", K4 = "C~", P3 (1-2-3) = "Bo"
        assert_eq!(to_graph6(&Graph::cycle(5)), "Dhc");
        assert_eq!(to_graph6(&Graph::complete(4)), "C~");
        assert_eq!(parse_graph6("C~").unwrap(), Graph::complete(4));
        assert_eq!(parse_graph6("@").unwrap(), Graph::empty(1));
        assert!(parse_graph6("C~~").is_err());
    }

    #[test]
    fn graph6_round_trip() {
        for n in 1..=9 {
            for g in [Graph::cycle(n.max(3)), Graph::path(n), Graph::complete(n)] {
                assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
            }
        }
    }

    #[test]
    fn weights_formats() {
        let g = Graph::path(3);
        let w = parse_weights("[1, -2, 3]", &g, WeightKind::Vertex).unwrap();
        assert_eq!(w.0, vec![1, -2, 3]);
        let w = parse_weights("2 3 5\n1 2 -1\n", &g, WeightKind::Edge).unwrap();
        assert_eq!(w.0, vec![-1, 5]);
        let w = parse_weights("3 7\n", &g, WeightKind::Vertex).unwrap();
        assert_eq!(w.0, vec![0, 0, 7]);
        assert!(parse_weights("1 3 1", &g, WeightKind::Edge).is_err());
        assert!(parse_weights("[1.5, 2]", &g, WeightKind::Edge).is_err());
        assert!(parse_weights("[1]", &g, WeightKind::Edge).is_err());
    }

    #[test]
    fn g9_formatting() {
        assert_eq!(fmt_g9(5f64.sqrt()), "2.23606798");
        assert_eq!(fmt_g9(1.0), "1");
        assert_eq!(fmt_g9(0.0), "0");
        assert_eq!(fmt_g9(-1.5), "-1.5");
        assert_eq!(fmt_g9(1e-9), "1e-09");
        assert_eq!(fmt_g9(123456789.0), "123456789");
        assert_eq!(fmt_g9(1234567890.0), "1.23456789e+09");
        assert_eq!(fmt_g9(0.000123), "0.000123");
    }
}
