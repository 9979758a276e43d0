//! The workload line protocol: a `graph n=<N>` header, then one command
//! per line. Blank lines and lines starting with `#` are skipped.

use std::fmt;

use dynscc::{Edge, VertexId};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Query {
    EdgeCount(Edge),
    EdgeMax(Edge),
    EdgeMin(Edge),
    EdgeList(Edge),
    EdgeConn(VertexId, VertexId, Edge),
    SepEdges(VertexId, VertexId),
    VertCount(VertexId),
    VertMax(VertexId),
    VertMin(VertexId),
    VertList(VertexId),
    VertConn(VertexId, VertexId, VertexId),
    SepVerts(VertexId, VertexId),
    TwoVcc,
    TwoVccPair(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Insert(VertexId, VertexId),
    Query(Query),
}

/// A command together with the 1-based line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub number: usize,
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub n: usize,
    pub lines: Vec<Line>,
}

impl Script {
    pub fn new(n: usize) -> Script {
        Script { n, lines: Vec::new() }
    }

    pub fn push(&mut self, command: Command) {
        let number = self.lines.last().map_or(2, |l| l.number + 1);
        self.lines.push(Line { number, command });
    }

    pub fn commands(&self) -> impl Iterator<Item = &Command> {
        self.lines.iter().map(|l| &l.command)
    }

    pub fn parse(text: &str) -> Result<Script, CliError> {
        let mut rows = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = rows.next().ok_or(CliError::Parse {
            line: 1,
            msg: "missing `graph n=<N>` header".into(),
        })?;
        let n = header
            .strip_prefix("graph n=")
            .and_then(|t| t.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Parse {
                line: hl,
                msg: format!("expected `graph n=<N>` with N > 0, got `{header}`"),
            })?;
        let mut lines = Vec::new();
        for (number, row) in rows {
            let command = parse_command(row, n).map_err(|msg| CliError::Parse { line: number, msg })?;
            lines.push(Line { number, command });
        }
        Ok(Script { n, lines })
    }
}

fn parse_command(row: &str, n: usize) -> Result<Command, String> {
    let words: Vec<&str> = row.split_whitespace().collect();
    let ids = |args: &[&str], want: usize| -> Result<Vec<VertexId>, String> {
        if args.len() != want {
            return Err(format!("`{row}`: expected {want} vertex ids, got {}", args.len()));
        }
        args.iter()
            .map(|a| {
                let v: VertexId = a.parse().map_err(|_| format!("`{a}` is not a vertex id"))?;
                if v >= n {
                    return Err(format!("vertex {v} out of range for n={n}"));
                }
                Ok(v)
            })
            .collect()
    };
    match words.as_slice() {
        ["insert", rest @ ..] => {
            let v = ids(rest, 2)?;
            Ok(Command::Insert(v[0], v[1]))
        }
        ["q", kind, rest @ ..] => {
            let q = match *kind {
                "edge-scc-count" => ids(rest, 2).map(|v| Query::EdgeCount((v[0], v[1]))),
                "edge-max" => ids(rest, 2).map(|v| Query::EdgeMax((v[0], v[1]))),
                "edge-min" => ids(rest, 2).map(|v| Query::EdgeMin((v[0], v[1]))),
                "edge-list" => ids(rest, 2).map(|v| Query::EdgeList((v[0], v[1]))),
                "edge-conn" => ids(rest, 4).map(|v| Query::EdgeConn(v[0], v[1], (v[2], v[3]))),
                "sep-edges" => ids(rest, 2).map(|v| Query::SepEdges(v[0], v[1])),
                "vert-scc-count" => ids(rest, 1).map(|v| Query::VertCount(v[0])),
                "vert-max" => ids(rest, 1).map(|v| Query::VertMax(v[0])),
                "vert-min" => ids(rest, 1).map(|v| Query::VertMin(v[0])),
                "vert-list" => ids(rest, 1).map(|v| Query::VertList(v[0])),
                "vert-conn" => ids(rest, 3).map(|v| Query::VertConn(v[0], v[1], v[2])),
                "sep-verts" => ids(rest, 2).map(|v| Query::SepVerts(v[0], v[1])),
                "2vcc" => ids(rest, 0).map(|_| Query::TwoVcc),
                "2vcc-pair" => ids(rest, 2).map(|v| Query::TwoVccPair(v[0], v[1])),
                other => Err(format!("unknown query `{other}`")),
            }?;
            Ok(Command::Query(q))
        }
        _ => Err(format!("unrecognized command `{row}`")),
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Query::EdgeCount((x, y)) => write!(f, "q edge-scc-count {x} {y}"),
            Query::EdgeMax((x, y)) => write!(f, "q edge-max {x} {y}"),
            Query::EdgeMin((x, y)) => write!(f, "q edge-min {x} {y}"),
            Query::EdgeList((x, y)) => write!(f, "q edge-list {x} {y}"),
            Query::EdgeConn(u, v, (x, y)) => write!(f, "q edge-conn {u} {v} {x} {y}"),
            Query::SepEdges(u, v) => write!(f, "q sep-edges {u} {v}"),
            Query::VertCount(v) => write!(f, "q vert-scc-count {v}"),
            Query::VertMax(v) => write!(f, "q vert-max {v}"),
            Query::VertMin(v) => write!(f, "q vert-min {v}"),
            Query::VertList(v) => write!(f, "q vert-list {v}"),
            Query::VertConn(u, w, v) => write!(f, "q vert-conn {u} {w} {v}"),
            Query::SepVerts(u, w) => write!(f, "q sep-verts {u} {w}"),
            Query::TwoVcc => write!(f, "q 2vcc"),
            Query::TwoVccPair(u, v) => write!(f, "q 2vcc-pair {u} {v}"),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Insert(x, y) => write!(f, "insert {x} {y}"),
            Command::Query(q) => q.fmt(f),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph n={}", self.n)?;
        for l in &self.lines {
            writeln!(f, "{}", l.command)?;
        }
        Ok(())
    }
}

/// `{a,b};{c}`, or `none` for an empty list.
pub fn render_sets(sets: &[Vec<VertexId>]) -> String {
    if sets.is_empty() {
        return "none".into();
    }
    sets.iter()
        .map(|s| format!("{{{}}}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn render_edges(edges: &[Edge]) -> String {
    if edges.is_empty() {
        return "none".into();
    }
    edges
        .iter()
        .map(|(x, y)| format!("({x},{y})"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_vertices(vs: &[VertexId]) -> String {
    if vs.is_empty() {
        return "none".into();
    }
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "graph n=4\ninsert 0 1\nq edge-conn 0 1 0 1\nq sep-verts 2 3\nq 2vcc\nq 2vcc-pair 0 3\n";
        let s = Script::parse(text).unwrap();
        assert_eq!(s.n, 4);
        assert_eq!(s.lines[1].command, Command::Query(Query::EdgeConn(0, 1, (0, 1))));
        assert_eq!(s.to_string(), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = Script::parse("graph n=3\ninsert 0 1\n\ninsert 0 5\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 4, .. }), "{err}");
        let err = Script::parse("graph n=3\nq edge-max 0\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }));
        let err = Script::parse("insert 0 1\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 1, .. }));
        assert!(Script::parse("graph n=3\nfrobnicate\n").is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(render_sets(&[vec![0, 1], vec![2]]), "{0,1};{2}");
        assert_eq!(render_sets(&[]), "none");
        assert_eq!(render_edges(&[(0, 1), (2, 0)]), "(0,1) (2,0)");
        assert_eq!(render_vertices(&[1, 4]), "1 4");
    }
}
