//! Graph text formats.
//!
//! Arc-list form: the first line holds `n`, each further line one arc `u v`
//! (0-indexed, `u -> v`). Blank lines and `#` comments are ignored.
//!
//! Compact form: `n:` followed by the ternary pair digits in row-major order,
//! e.g. `3:102` for arcs `0 -> 1` and `2 -> 1`.

use crate::error::{Error, Result};
use crate::graph::{pair_count, OrientedGraph};

pub fn write_arc_text(g: &OrientedGraph) -> String {
    let mut s = format!("{}\n", g.n());
    for (u, v) in g.arcs() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn to_compact(g: &OrientedGraph) -> String {
    let digits: String = g
        .pair_digits()
        .into_iter()
        .map(|d| char::from(b'0' + d))
        .collect();
    format!("{}:{}", g.n(), digits)
}

pub fn parse_compact(s: &str) -> Result<OrientedGraph> {
    let s = s.trim();
    let (n, digits) = s
        .split_once(':')
        .ok_or_else(|| Error::parse(1, format!("compact graph `{s}` lacks `n:` prefix")))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| Error::parse(1, format!("bad vertex count `{n}`")))?;
    if digits.len() != pair_count(n) {
        return Err(Error::parse(
            1,
            format!(
                "{} pair digits for {n} vertices, expected {}",
                digits.len(),
                pair_count(n)
            ),
        ));
    }
    let digits = digits
        .bytes()
        .map(|b| match b {
            b'0'..=b'2' => Ok(b - b'0'),
            _ => Err(Error::parse(1, format!("bad pair digit `{}`", b as char))),
        })
        .collect::<Result<Vec<u8>>>()?;
    OrientedGraph::from_pair_digits(n, &digits)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub fn parse_arc_text(text: &str) -> Result<OrientedGraph> {
    let mut lines = content_lines(text);
    let (first, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty graph file"))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::parse(first, format!("expected vertex count, got `{header}`")))?;
    let mut g = OrientedGraph::empty(n);
    for (line, content) in lines {
        let mut it = content.split_whitespace();
        let (u, v) = match (it.next(), it.next(), it.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => return Err(Error::parse(line, format!("expected `u v`, got `{content}`"))),
        };
        let u: usize = u
            .parse()
            .map_err(|_| Error::parse(line, format!("bad vertex `{u}`")))?;
        let v: usize = v
            .parse()
            .map_err(|_| Error::parse(line, format!("bad vertex `{v}`")))?;
        g.add_arc(u, v).map_err(|e| Error::parse(line, e.to_string()))?;
    }
    Ok(g)
}

/// Accepts either form; the compact form is recognised by its `n:` prefix.
pub fn parse_graph(text: &str) -> Result<OrientedGraph> {
    match content_lines(text).next() {
        Some((_, first)) if first.contains(':') => parse_compact(first),
        _ => parse_arc_text(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_text_round_trip() {
        let g = OrientedGraph::from_arcs(5, &[(4, 0), (0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let text = write_arc_text(&g);
        assert_eq!(text, "5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
        assert_eq!(parse_arc_text(&text).unwrap(), g);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# C3\n\n3\n0 1 # first arc\n\n1 2\n2 0\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.arc_count(), 3);
        assert!(g.has_arc(2, 0));
    }

    #[test]
    fn compact_form() {
        let c5 = OrientedGraph::directed_cycle(5).unwrap();
        let s = to_compact(&c5);
        assert_eq!(s, "5:1002100101");
        assert_eq!(parse_graph(&s).unwrap(), c5);
        assert_eq!(to_compact(&OrientedGraph::empty(1)), "1:");
        assert!(parse_compact("3:12").is_err());
        assert!(parse_compact("3:123").is_err());
    }

    #[test]
    fn parse_errors_carry_lines() {
        match parse_arc_text("3\n0 1\n1 0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_arc_text("x\n").is_err());
        assert!(parse_arc_text("2\n0 1 1\n").is_err());
    }
}
