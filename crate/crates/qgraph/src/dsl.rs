//! Text format for graphs (`.qg` files): one directive per line, `#` comments.
//!
//! ```text
//! graph edge-unit n=4      # kinds: edge-unit | vertex | edge-loop
//! edge 1 2 1               # weight mandatory for edge-unit/edge-loop
//! edge 1 4 0+1i            # rectangular a, bi, a+bi, a-bi
//! edge 2 3 1@1.5707963     # or polar r@theta (radians)
//! loop 1 0.5               # edge-loop only
//! vw 1 -1i                 # vertex kind only, required for every vertex
//! ```
//!
//! The serializer emits a canonical form (header, `vw` lines ascending, edges
//! sorted by (from, to), loops ascending) so `parse(serialize(g)) == g` and
//! golden files stay stable.

use crate::graph::{GraphError, GraphKind, WeightedDigraph};
use crate::spectra::Complex;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub kind: ParseErrorKind,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}: {} error: {}",
            self.line,
            self.column,
            match self.kind {
                ParseErrorKind::Syntax => "syntax",
                ParseErrorKind::Semantic => "semantic",
            },
            self.message
        )
    }
}

impl std::error::Error for ParseError {}

type EdgeRec = (usize, usize, Complex, usize, usize);

fn syn(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
        kind: ParseErrorKind::Syntax,
    }
}

fn sem(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
        kind: ParseErrorKind::Semantic,
    }
}

fn parse_f64(s: &str) -> Option<f64> {
    let v: f64 = s.parse().ok()?;
    v.is_finite().then_some(v)
}

/// Parse a complex literal: rectangular `a`, `bi`, `a+bi`, `a-bi`, or polar
/// `r@theta` with theta in radians. Bare `i`, `+i`, `-i` mean `1i`, `-1i`.
pub fn parse_complex(s: &str) -> Option<Complex> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((r, theta)) = s.split_once('@') {
        let r = parse_f64(r)?;
        let theta = parse_f64(theta)?;
        return Some(Complex::from_polar(r, theta));
    }
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Find the +/- separating real and imaginary parts (not an exponent
        // sign, not the leading sign).
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let b = bytes[k];
            if (b == b'+' || b == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let imag_of = |t: &str| -> Option<f64> {
            match t {
                "" | "+" => Some(1.0),
                "-" => Some(-1.0),
                _ => parse_f64(t),
            }
        };
        return match split {
            Some(k) => {
                let re = parse_f64(&body[..k])?;
                let im = imag_of(&body[k..])?;
                Some(Complex::new(re, im))
            }
            None => Some(Complex::new(0.0, imag_of(body)?)),
        };
    }
    parse_f64(s).map(|re| Complex::new(re, 0.0))
}

/// Shortest round-trip decimal form of a float (Rust's Display).
fn fmt_f64(x: f64) -> String {
    // Normalize -0.0 so canonical output is stable.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

/// Canonical rectangular rendering of a complex literal.
pub fn format_complex(z: Complex) -> String {
    if z.im == 0.0 {
        fmt_f64(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt_f64(z.im))
    } else if z.im < 0.0 {
        format!("{}-{}i", fmt_f64(z.re), fmt_f64(-z.im))
    } else {
        format!("{}+{}i", fmt_f64(z.re), fmt_f64(z.im))
    }
}

struct Tok<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut toks = Vec::new();
    let mut start = None;
    for (idx, ch) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                toks.push(Tok {
                    text: &line[s..idx],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(idx);
        }
    }
    toks
}

/// Parse `.qg` text into a validated graph.
pub fn parse_graph(text: &str) -> Result<WeightedDigraph, ParseError> {
    let mut kind: Option<GraphKind> = None;
    let mut n = 0usize;
    let mut header_line = 0usize;
    let mut edges: Vec<EdgeRec> = Vec::new(); // from, to, weight, line, column
    let mut loops: Vec<(usize, f64, usize, usize)> = Vec::new();
    let mut vws: Vec<(usize, Complex, usize, usize)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        };
        let toks = tokenize(line);
        if toks.is_empty() {
            continue;
        }
        let directive = &toks[0];
        match directive.text {
            "graph" => {
                if kind.is_some() {
                    return Err(syn(lineno, directive.column, "duplicate graph header"));
                }
                if toks.len() != 3 {
                    return Err(syn(lineno, directive.column, "expected: graph KIND n=INT"));
                }
                kind = Some(match toks[1].text {
                    "edge-unit" => GraphKind::EdgeUnit,
                    "vertex" => GraphKind::VertexWeighted,
                    "edge-loop" => GraphKind::EdgeLoop,
                    other => {
                        return Err(syn(
                            lineno,
                            toks[1].column,
                            format!(
                                "unknown graph kind `{other}` (edge-unit | vertex | edge-loop)"
                            ),
                        ))
                    }
                });
                let nspec = toks[2]
                    .text
                    .strip_prefix("n=")
                    .ok_or_else(|| syn(lineno, toks[2].column, "expected n=INT"))?;
                n = nspec.parse::<usize>().map_err(|_| {
                    syn(
                        lineno,
                        toks[2].column,
                        format!("bad vertex count `{nspec}`"),
                    )
                })?;
                if n == 0 {
                    return Err(sem(lineno, toks[2].column, "vertex count must be positive"));
                }
                header_line = lineno;
            }
            "edge" => {
                let k = kind
                    .ok_or_else(|| syn(lineno, directive.column, "graph header must come first"))?;
                let weight_expected = k != GraphKind::VertexWeighted;
                let want = if weight_expected { 4 } else { 3 };
                if toks.len() != want {
                    let msg = if weight_expected {
                        "expected: edge FROM TO WEIGHT"
                    } else {
                        "expected: edge FROM TO (no weight for vertex kind)"
                    };
                    return Err(syn(lineno, directive.column, msg));
                }
                let from = parse_vertex(&toks[1], lineno)?;
                let to = parse_vertex(&toks[2], lineno)?;
                let w = if weight_expected {
                    parse_complex(toks[3].text).ok_or_else(|| {
                        syn(
                            lineno,
                            toks[3].column,
                            format!("bad complex literal `{}`", toks[3].text),
                        )
                    })?
                } else {
                    Complex::new(1.0, 0.0)
                };
                edges.push((from, to, w, lineno, directive.column));
            }
            "loop" => {
                let k = kind
                    .ok_or_else(|| syn(lineno, directive.column, "graph header must come first"))?;
                if k != GraphKind::EdgeLoop {
                    return Err(sem(
                        lineno,
                        directive.column,
                        "loops are only allowed for edge-loop graphs",
                    ));
                }
                if toks.len() != 3 {
                    return Err(syn(
                        lineno,
                        directive.column,
                        "expected: loop VERTEX WEIGHT",
                    ));
                }
                let v = parse_vertex(&toks[1], lineno)?;
                let r = parse_f64(toks[2].text).ok_or_else(|| {
                    syn(
                        lineno,
                        toks[2].column,
                        format!("bad number `{}`", toks[2].text),
                    )
                })?;
                loops.push((v, r, lineno, directive.column));
            }
            "vw" => {
                let k = kind
                    .ok_or_else(|| syn(lineno, directive.column, "graph header must come first"))?;
                if k != GraphKind::VertexWeighted {
                    return Err(sem(
                        lineno,
                        directive.column,
                        "vw lines are only allowed for vertex graphs",
                    ));
                }
                if toks.len() != 3 {
                    return Err(syn(lineno, directive.column, "expected: vw VERTEX WEIGHT"));
                }
                let v = parse_vertex(&toks[1], lineno)?;
                let w = parse_complex(toks[2].text).ok_or_else(|| {
                    syn(
                        lineno,
                        toks[2].column,
                        format!("bad complex literal `{}`", toks[2].text),
                    )
                })?;
                vws.push((v, w, lineno, directive.column));
            }
            other => {
                return Err(syn(
                    lineno,
                    directive.column,
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }

    let kind = kind.ok_or_else(|| syn(1, 1, "missing graph header"))?;

    // Range-check weighted vertices first so errors point at their own lines.
    let mut weights = vec![None; n];
    for &(v, w, line, col) in &vws {
        if v < 1 || v > n {
            return Err(sem(line, col, format!("vertex {v} out of range 1..={n}")));
        }
        if weights[v - 1].replace(w).is_some() {
            return Err(sem(line, col, format!("duplicate vw for vertex {v}")));
        }
    }
    let vertex_weights: Vec<Complex> = if kind == GraphKind::VertexWeighted {
        let mut out = Vec::with_capacity(n);
        for (i, w) in weights.into_iter().enumerate() {
            match w {
                Some(w) => out.push(w),
                None => {
                    return Err(sem(
                        header_line,
                        1,
                        format!("missing vw for vertex {}", i + 1),
                    ))
                }
            }
        }
        out
    } else {
        vec![]
    };

    let build = match kind {
        GraphKind::EdgeUnit => {
            WeightedDigraph::edge_unit(n, edges.iter().map(|&(f, t, w, _, _)| (f, t, w)).collect())
        }
        GraphKind::VertexWeighted => WeightedDigraph::vertex_weighted(
            n,
            edges.iter().map(|&(f, t, _, _, _)| (f, t)).collect(),
            vertex_weights,
        ),
        GraphKind::EdgeLoop => WeightedDigraph::edge_loop(
            n,
            edges.iter().map(|&(f, t, w, _, _)| (f, t, w)).collect(),
            loops.iter().map(|&(v, r, _, _)| (v, r)).collect(),
        ),
    };
    build.map_err(|e| {
        // Point the error at the offending directive where possible.
        let pos = match &e {
            GraphError::DuplicateEdge(a, b) => edges
                .iter()
                .rfind(|(f, t, ..)| (f.min(t), f.max(t)) == (a.min(b), a.max(b)))
                .map(|&(.., l, c)| (l, c)),
            GraphError::VertexOutOfRange(v, _) => edges
                .iter()
                .find(|(f, t, ..)| f == v || t == v)
                .map(|&(.., l, c)| (l, c))
                .or_else(|| {
                    loops
                        .iter()
                        .find(|(lv, ..)| lv == v)
                        .map(|&(.., l, c)| (l, c))
                }),
            GraphError::SelfEdge(v) => edges
                .iter()
                .find(|(f, t, ..)| f == v && t == v)
                .map(|&(.., l, c)| (l, c)),
            GraphError::NonPositiveLoop(_) | GraphError::DuplicateLoop(_) => {
                loops.last().map(|&(.., l, c)| (l, c))
            }
            GraphError::NotUnitModulus(_) => edges
                .iter()
                .find(|(_, _, w, ..)| (w.norm() - 1.0).abs() > crate::graph::UNIT_MODULUS_TOL)
                .map(|&(.., l, c)| (l, c)),
            GraphError::ZeroEdgeWeight => edges
                .iter()
                .find(|(_, _, w, ..)| w.norm() == 0.0)
                .map(|&(.., l, c)| (l, c)),
            _ => None,
        };
        let (line, column) = pos.unwrap_or((header_line.max(1), 1));
        sem(line, column, e.to_string())
    })
}

fn parse_vertex(tok: &Tok, lineno: usize) -> Result<usize, ParseError> {
    tok.text
        .parse::<usize>()
        .map_err(|_| syn(lineno, tok.column, format!("bad vertex id `{}`", tok.text)))
}

/// Canonical text form; `parse_graph(serialize_graph(g))` reproduces `g`.
pub fn serialize_graph(g: &WeightedDigraph) -> String {
    let mut out = String::new();
    let kind = match g.kind() {
        GraphKind::EdgeUnit => "edge-unit",
        GraphKind::VertexWeighted => "vertex",
        GraphKind::EdgeLoop => "edge-loop",
    };
    let _ = writeln!(out, "graph {kind} n={}", g.vertex_count());
    if g.kind() == GraphKind::VertexWeighted {
        for (i, w) in g.vertex_weights().iter().enumerate() {
            let _ = writeln!(out, "vw {} {}", i + 1, format_complex(*w));
        }
    }
    let mut edges = g.edges().to_vec();
    edges.sort_by_key(|e| (e.from, e.to));
    for e in &edges {
        if g.kind() == GraphKind::VertexWeighted {
            let _ = writeln!(out, "edge {} {}", e.from, e.to);
        } else {
            let _ = writeln!(out, "edge {} {} {}", e.from, e.to, format_complex(e.weight));
        }
    }
    let mut loops = g.loops().to_vec();
    loops.sort_by_key(|l| l.vertex);
    for l in &loops {
        let _ = writeln!(out, "loop {} {}", l.vertex, fmt_f64(l.weight));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_k2() {
        let g = parse_graph("graph edge-unit n=2\nedge 1 2 1").unwrap();
        assert_eq!(g.kind(), GraphKind::EdgeUnit);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges()[0].weight, Complex::new(1.0, 0.0));
    }

    #[test]
    fn parse_example_2_2_file() {
        let text = "graph edge-unit n=4\nedge 1 2 1\nedge 1 4 0+1i\nedge 2 3 0+1i\nedge 4 2 0+1i";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.edges().len(), 4);
        assert_eq!(g.edges()[1].weight, Complex::new(0.0, 1.0));
        assert_eq!(g.degree(2).unwrap(), 3.0);
    }

    #[test]
    fn missing_vertex_weights_is_semantic() {
        let text = "graph vertex n=4\nvw 1 -1i\nvw 2 1\nedge 1 2";
        let err = parse_graph(text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Semantic);
        assert!(err.message.contains("missing vw for vertex 3"));
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1").unwrap(), Complex::new(1.0, 0.0));
        assert_eq!(parse_complex("-2.5").unwrap(), Complex::new(-2.5, 0.0));
        assert_eq!(parse_complex("1i").unwrap(), Complex::new(0.0, 1.0));
        assert_eq!(parse_complex("-1i").unwrap(), Complex::new(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), Complex::new(0.0, 1.0));
        assert_eq!(parse_complex("0+1i").unwrap(), Complex::new(0.0, 1.0));
        assert_eq!(parse_complex("3-4i").unwrap(), Complex::new(3.0, -4.0));
        assert_eq!(
            parse_complex("1e-3+2e2i").unwrap(),
            Complex::new(1e-3, 200.0)
        );
        let z = parse_complex("1@0.5").unwrap();
        assert!((z - Complex::from_polar(1.0, 0.5)).norm() < 1e-15);
        assert!(parse_complex("nan").is_none());
        assert!(parse_complex("1+2j").is_none());
        assert!(parse_complex("").is_none());
    }

    #[test]
    fn polar_weight_is_unit_modulus() {
        let g = parse_graph("graph edge-unit n=2\nedge 1 2 1@2.2").unwrap();
        assert!((g.edges()[0].weight.norm() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn error_positions() {
        let err = parse_graph("graph edge-unit n=2\nedge 1 2 bogus").unwrap_err();
        assert_eq!((err.line, err.kind), (2, ParseErrorKind::Syntax));
        assert_eq!(err.column, 10);

        let err = parse_graph("graph edge-unit n=2\nedge 1 2 1\nedge 2 1 1").unwrap_err();
        assert_eq!((err.line, err.kind), (3, ParseErrorKind::Semantic));

        let err = parse_graph("graph edge-unit n=2\nedge 1 2 0.5").unwrap_err();
        assert_eq!((err.line, err.kind), (2, ParseErrorKind::Semantic));

        let err = parse_graph("edge 1 2 1").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);

        let err = parse_graph("graph edge-loop n=2\nloop 1 -1").unwrap_err();
        assert_eq!((err.line, err.kind), (2, ParseErrorKind::Semantic));
    }

    #[test]
    fn comments_and_blank_lines() {
        let g =
            parse_graph("# a comment\n\ngraph edge-unit n=2  # trailing\nedge 1 2 1\n").unwrap();
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn crlf_line_endings() {
        let g = parse_graph("graph edge-unit n=2\r\nedge 1 2 1\r\n").unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].weight, Complex::new(1.0, 0.0));
    }

    #[test]
    fn canonical_k2() {
        let g = parse_graph("graph edge-unit n=2\nedge 1 2 1").unwrap();
        assert_eq!(serialize_graph(&g), "graph edge-unit n=2\nedge 1 2 1\n");
    }

    #[test]
    fn vertex_weighted_serialization() {
        let text = "graph vertex n=4\nvw 1 -1i\nvw 2 1\nvw 3 1i\nvw 4 1\nedge 1 2\nedge 1 4\nedge 2 3\nedge 4 2";
        let g = parse_graph(text).unwrap();
        let s = serialize_graph(&g);
        assert!(s.contains("vw 1 -1i\n"));
        assert!(s.contains("vw 3 1i\n"));
        let g2 = parse_graph(&s).unwrap();
        assert_eq!(g, g2);
    }
}
