//! MOG v1 text format.
//!
//! ```text
//! MOG 1
//! nodes <N> edges <E> objectives <d>
//! source <id> goal <id>
//! edge <u> <v> <c1> ... <cd>        (E lines)
//! h <v> <h1> ... <hd>               (optional, N lines)
//! ```
//!
//! Tokens are whitespace separated and `#` starts a comment. Heuristic
//! components may be `inf` for nodes that cannot reach the goal.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use super::{Graph, GraphError, NodeId};

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    let text = fs::read_to_string(path)?;
    parse_graph(&text)
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    let mut file = std::io::BufWriter::new(fs::File::create(path)?);
    write_graph_to(g, &mut file)?;
    file.flush()?;
    Ok(())
}

pub fn write_graph_to(g: &Graph, out: &mut impl Write) -> Result<(), GraphError> {
    let mut buf = String::new();
    let d = g.num_objectives();
    let _ = writeln!(buf, "MOG 1");
    let _ = writeln!(buf, "nodes {} edges {} objectives {}", g.num_nodes(), g.num_edges(), d);
    let _ = writeln!(buf, "source {} goal {}", g.source(), g.goal());
    for (u, v, c) in g.edges() {
        let _ = write!(buf, "edge {u} {v}");
        for x in c {
            let _ = write!(buf, " {x}");
        }
        buf.push('\n');
        if buf.len() > 1 << 16 {
            out.write_all(buf.as_bytes())?;
            buf.clear();
        }
    }
    if g.has_heuristics() {
        for v in 0..g.num_nodes() as NodeId {
            let _ = write!(buf, "h {v}");
            for x in g.heuristic(v).unwrap() {
                let _ = write!(buf, " {x}");
            }
            buf.push('\n');
        }
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    tokens.push(Token { text: &content[s..pos], line: i + 1, column: s + 1 });
                    start = None;
                }
                (false, None) => start = Some(pos),
                _ => {}
            }
        }
        if !tokens.is_empty() {
            lines.push(Line { number: i + 1, tokens });
        }
    }
    lines
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse { line, column, message: message.into() }
}

fn number<T: FromStr>(tok: &Token<'_>, what: &str) -> Result<T, GraphError> {
    tok.text
        .parse()
        .map_err(|_| parse_err(tok.line, tok.column, format!("expected {what}, found '{}'", tok.text)))
}

fn keyword(tok: &Token<'_>, expected: &str) -> Result<(), GraphError> {
    if tok.text == expected {
        Ok(())
    } else {
        Err(parse_err(
            tok.line,
            tok.column,
            format!("expected '{expected}', found '{}'", tok.text),
        ))
    }
}

fn expect_len(line: &Line<'_>, n: usize, what: &str) -> Result<(), GraphError> {
    if line.tokens.len() == n {
        return Ok(());
    }
    // first surplus token, or the last one present when fields are missing
    let column = line
        .tokens
        .get(n)
        .or(line.tokens.last())
        .map_or(1, |t| t.column);
    Err(parse_err(
        line.number,
        column,
        format!("{what} line expects {n} fields, found {}", line.tokens.len()),
    ))
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let lines = tokenize(text);
    let mut it = lines.iter();
    let eof = |what: &str| parse_err(text.lines().count().max(1), 1, format!("unexpected end of file, expected {what}"));

    let header = it.next().ok_or_else(|| eof("'MOG 1' header"))?;
    expect_len(header, 2, "header")?;
    keyword(&header.tokens[0], "MOG")?;
    keyword(&header.tokens[1], "1")?;

    let sizes = it.next().ok_or_else(|| eof("size line"))?;
    expect_len(sizes, 6, "size")?;
    keyword(&sizes.tokens[0], "nodes")?;
    let num_nodes: usize = number(&sizes.tokens[1], "node count")?;
    keyword(&sizes.tokens[2], "edges")?;
    let num_edges: usize = number(&sizes.tokens[3], "edge count")?;
    keyword(&sizes.tokens[4], "objectives")?;
    let d: usize = number(&sizes.tokens[5], "objective count")?;
    if d == 0 {
        return Err(parse_err(sizes.number, sizes.tokens[5].column, "objective count must be at least 1"));
    }

    let ends = it.next().ok_or_else(|| eof("source/goal line"))?;
    expect_len(ends, 4, "source/goal")?;
    keyword(&ends.tokens[0], "source")?;
    let source: NodeId = number(&ends.tokens[1], "source id")?;
    keyword(&ends.tokens[2], "goal")?;
    let goal: NodeId = number(&ends.tokens[3], "goal id")?;

    let mut edge_src = Vec::with_capacity(num_edges);
    let mut edge_dst = Vec::with_capacity(num_edges);
    let mut costs = Vec::with_capacity(num_edges * d);
    let mut heuristics: Option<Vec<f64>> = None;
    let mut seen_h = Vec::new();

    for line in it {
        let head = &line.tokens[0];
        match head.text {
            "edge" => {
                if heuristics.is_some() {
                    return Err(parse_err(line.number, head.column, "edge line after heuristic section"));
                }
                if line.tokens.len() != 3 + d {
                    return Err(GraphError::Validation(format!(
                        "objective-count mismatch at line {}: expected {d} costs, found {}",
                        line.number,
                        line.tokens.len().saturating_sub(3)
                    )));
                }
                edge_src.push(number(&line.tokens[1], "node id")?);
                edge_dst.push(number(&line.tokens[2], "node id")?);
                for tok in &line.tokens[3..] {
                    costs.push(number::<f64>(tok, "cost")?);
                }
            }
            "h" => {
                if line.tokens.len() != 2 + d {
                    return Err(GraphError::Validation(format!(
                        "objective-count mismatch at line {}: expected {d} heuristic values, found {}",
                        line.number,
                        line.tokens.len().saturating_sub(2)
                    )));
                }
                let h = heuristics.get_or_insert_with(|| {
                    seen_h = vec![false; num_nodes];
                    vec![0.0; num_nodes * d]
                });
                let v: usize = number(&line.tokens[1], "node id")?;
                if v >= num_nodes {
                    return Err(GraphError::Validation(format!(
                        "dangling node id {v} in heuristic at line {}",
                        line.number
                    )));
                }
                if std::mem::replace(&mut seen_h[v], true) {
                    return Err(parse_err(line.number, line.tokens[1].column, format!("duplicate heuristic for node {v}")));
                }
                for (i, tok) in line.tokens[2..].iter().enumerate() {
                    h[v * d + i] = number(tok, "heuristic value")?;
                }
            }
            other => {
                return Err(parse_err(line.number, head.column, format!("unknown record '{other}'")));
            }
        }
    }

    if edge_src.len() != num_edges {
        return Err(GraphError::Validation(format!(
            "edge count mismatch: header declares {num_edges}, file has {}",
            edge_src.len()
        )));
    }
    if heuristics.is_some() && seen_h.iter().any(|s| !s) {
        return Err(GraphError::Validation("heuristic section must cover every node".into()));
    }
    Graph::from_parts(num_nodes, d, edge_src, edge_dst, costs, source, goal, heuristics)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_legal_graph() {
        let g = parse_graph("MOG 1\nnodes 2 edges 1 objectives 2\nsource 0 goal 1\nedge 0 1 1.0 2.0\n").unwrap();
        assert_eq!(g.num_objectives(), 2);
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.edge_cost(0), &[1.0, 2.0]);
        assert!(!g.has_heuristics());
    }

    #[test]
    fn negative_cost_is_a_validation_error() {
        let err = parse_graph("MOG 1\nnodes 2 edges 1 objectives 1\nsource 0 goal 1\nedge 0 1 -1.0\n").unwrap_err();
        assert!(matches!(err, GraphError::Validation(_)));
        assert!(err.to_string().contains("negative cost"));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_graph("MOG 1\nnodes 2 edges 1 objectives 1\nsource 0 goal 1\nedge 0 x 1\n").unwrap_err();
        match err {
            GraphError::Parse { line, column, .. } => assert_eq!((line, column), (4, 8)),
            other => panic!("unexpected {other}"),
        }
        let err = parse_graph("MOG 2\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, column: 5, .. }));
        let err = parse_graph("MOG 1\nnodes 2 edges 1 objectives 1\nsource 0 goal 1\nbogus\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 4, column: 1, .. }));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a graph\nMOG 1 # version\n\nnodes 3 edges 1 objectives 1\nsource 0 goal 2\nedge 0 2 4 # direct\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.num_nodes(), 3);
        assert_eq!(g.out_degree(1), 0);
    }

    #[test]
    fn objective_and_edge_count_mismatches() {
        let err = parse_graph("MOG 1\nnodes 2 edges 1 objectives 2\nsource 0 goal 1\nedge 0 1 1\n").unwrap_err();
        assert!(err.to_string().contains("objective-count mismatch"));
        let err = parse_graph("MOG 1\nnodes 2 edges 2 objectives 1\nsource 0 goal 1\nedge 0 1 1\n").unwrap_err();
        assert!(err.to_string().contains("edge count mismatch"));
        let err = parse_graph("MOG 1\nnodes 2 edges 1 objectives 1\nsource 0 goal 3\nedge 0 1 1\n").unwrap_err();
        assert!(err.to_string().contains("dangling"));
    }

    #[test]
    fn heuristic_section_only_when_present() {
        let g = parse_graph("MOG 1\nnodes 3 edges 1 objectives 1\nsource 0 goal 1\nedge 0 1 2\n").unwrap();
        let mut out = Vec::new();
        write_graph_to(&g, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(!text.contains("\nh "));

        let g = g.with_heuristics(vec![2.0, 0.0, f64::INFINITY]).unwrap();
        let mut out = Vec::new();
        write_graph_to(&g, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.ends_with("h 0 2\nh 1 0\nh 2 inf\n"), "{text}");
        let back = parse_graph(&text).unwrap();
        assert_eq!(back, g);
        assert!(!back.reaches_goal(2));
    }

    #[test]
    fn file_round_trip_preserves_graph() {
        let g = Graph::new(
            4,
            2,
            vec![(0, 1, vec![0.5, 3.0]), (1, 3, vec![1.0, 0.0]), (0, 3, vec![7.25, 1e-3])],
            0,
            3,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.mog");
        write_graph(&g, &path).unwrap();
        let back = load_graph(&path).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.out_degree(2), 0);
        assert!(matches!(load_graph(dir.path().join("missing.mog")), Err(GraphError::Io(_))));
    }

    #[test]
    fn partial_heuristic_section_rejected() {
        let err = parse_graph("MOG 1\nnodes 2 edges 1 objectives 1\nsource 0 goal 1\nedge 0 1 2\nh 1 0\n").unwrap_err();
        assert!(err.to_string().contains("every node"));
    }
}
