//! Script replay against the incremental manager, optionally diffed
//! against brute-force answers on the current graph.

use dynscc::oracle;
use dynscc::partition::Manager;
use dynscc::query::Summary;
use dynscc::twovcc::PairAnswer;
use dynscc::{Digraph, VertexId};

use crate::script::{render_edges, render_sets, render_vertices, Command, Query, Script};
use crate::CliError;

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub oracle: bool,
    pub stats: bool,
}

/// The first answer that differs from the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub line: usize,
    pub query: String,
    pub engine: String,
    pub oracle: String,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    /// One line per query executed, in order.
    pub answers: Vec<String>,
    /// Set when the oracle disagreed; replay stops there.
    pub divergence: Option<Divergence>,
    /// `# `-prefixed counter lines, filled when stats were asked for.
    pub stats: Vec<String>,
}

fn summary_field(s: Summary, q: &Query) -> usize {
    match q {
        Query::EdgeCount(_) | Query::VertCount(_) => s.count,
        Query::EdgeMax(_) | Query::VertMax(_) => s.max,
        _ => s.min,
    }
}

fn pair_text(a: PairAnswer) -> String {
    match a {
        PairAnswer::Yes => "true".into(),
        PairAnswer::Edge((x, y)) => format!("false edge ({x},{y})"),
        PairAnswer::Vertex(x) => format!("false vertex {x}"),
        PairAnswer::Apart => "false".into(),
    }
}

/// The engine's answer to one query.
pub fn answer(m: &Manager, q: &Query) -> dynscc::Result<String> {
    Ok(match *q {
        Query::EdgeCount(e) | Query::EdgeMax(e) | Query::EdgeMin(e) => summary_field(m.edge_summary(e)?, q).to_string(),
        Query::EdgeList(e) => render_sets(&m.edge_list(e)?),
        Query::EdgeConn(u, v, e) => m.edge_connected(u, v, e)?.to_string(),
        Query::SepEdges(u, v) => render_edges(&m.separating_edges(u, v)?),
        Query::VertCount(v) | Query::VertMax(v) | Query::VertMin(v) => {
            summary_field(m.vertex_summary(v)?, q).to_string()
        }
        Query::VertList(v) => render_sets(&m.vertex_list(v)?),
        Query::VertConn(u, w, v) => m.vertex_connected(u, w, v)?.to_string(),
        Query::SepVerts(u, w) => render_vertices(&m.separating_vertices(u, w)?),
        Query::TwoVcc => render_sets(&m.two_vccs()),
        Query::TwoVccPair(u, v) => pair_text(m.two_vcc_pair(u, v)?),
    })
}

fn sizes(sets: &[Vec<VertexId>], q: &Query) -> usize {
    let s = Summary::of(sets.iter().map(|c| c.len()));
    summary_field(s, q)
}

/// Brute-force 2VCCs: the maximal vertex sets, of size at least two,
/// whose pairs are all 2-vertex-connected (Bron-Kerbosch on the pair graph).
fn oracle_two_vccs(g: &Digraph) -> Vec<Vec<VertexId>> {
    let n = g.n();
    let ok: Vec<Vec<bool>> = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| u != v && oracle::two_vertex_connected(g, u, v))
                .collect()
        })
        .collect();
    fn grow(
        ok: &[Vec<bool>],
        r: &mut Vec<VertexId>,
        p: Vec<VertexId>,
        mut x: Vec<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        if p.is_empty() && x.is_empty() {
            if r.len() >= 2 {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return;
        }
        let mut p = p;
        while let Some(v) = p.pop() {
            r.push(v);
            let np = p.iter().copied().filter(|&w| ok[v][w]).collect();
            let nx = x.iter().copied().filter(|&w| ok[v][w]).collect();
            grow(ok, r, np, nx, out);
            r.pop();
            x.push(v);
        }
    }
    let mut out = Vec::new();
    grow(&ok, &mut Vec::new(), (0..n).collect(), Vec::new(), &mut out);
    out.sort_unstable();
    out
}

/// The expected answer, computed from scratch on the current graph.
pub fn oracle_answer(g: &Digraph, q: &Query) -> String {
    match *q {
        Query::EdgeCount(e) | Query::EdgeMax(e) | Query::EdgeMin(e) => {
            sizes(&oracle::failure_edge(g, e), q).to_string()
        }
        Query::EdgeList(e) => render_sets(&oracle::failure_edge(g, e)),
        Query::EdgeConn(u, v, e) => {
            (oracle::strongly_connected(g, u, v) && oracle::connected_without_edge(g, e, u, v)).to_string()
        }
        Query::SepEdges(u, v) => render_edges(&oracle::separating_edges(g, u, v)),
        Query::VertCount(v) | Query::VertMax(v) | Query::VertMin(v) => {
            sizes(&oracle::failure_vertex(g, v), q).to_string()
        }
        Query::VertList(v) => render_sets(&oracle::failure_vertex(g, v)),
        Query::VertConn(u, w, v) => oracle::connected_without_vertex(g, v, u, w).to_string(),
        Query::SepVerts(u, w) => render_vertices(&oracle::separating_vertices(g, u, w)),
        Query::TwoVcc => render_sets(&oracle_two_vccs(g)),
        Query::TwoVccPair(u, v) => {
            if oracle::two_vertex_connected(g, u, v) {
                return "true".into();
            }
            if let Some(&e) = oracle::separating_edges(g, u, v).first() {
                return pair_text(PairAnswer::Edge(e));
            }
            if let Some(&x) = oracle::separating_vertices(g, u, v).first() {
                return pair_text(PairAnswer::Vertex(x));
            }
            "false".into()
        }
    }
}

pub fn stats_lines(m: &Manager) -> Vec<String> {
    let t = m.engine_totals();
    let depth = m.stats.effective_depth.iter().copied().max().unwrap_or(0);
    vec![
        format!("# sccs {}", m.scc_count()),
        format!("# merges {}", m.stats.merges),
        format!("# engine-insertions {}", t.insertions),
        format!("# restarts {}", t.restarts),
        format!("# scanned {}", t.scanned),
        format!("# affected {}", t.affected),
        format!("# l-affected-not-scanned {}", t.l_affected),
        format!("# probes {}", t.probes),
        format!("# strong-bridges-seen {}", m.stats.strong_bridges_seen.len()),
        format!("# max-effective-depth {depth}"),
    ]
}

/// Replays a script. Invalid ids or unknown edges abort with the line.
pub fn run(script: &Script, opts: Options) -> Result<Report, CliError> {
    let mut m = Manager::new(script.n)?;
    let mut report = Report::default();
    for l in &script.lines {
        let engine = |source| CliError::Engine { line: l.number, source };
        match l.command {
            Command::Insert(x, y) => {
                m.insert(x, y).map_err(engine)?;
            }
            Command::Query(q) => {
                let got = answer(&m, &q).map_err(engine)?;
                if opts.oracle {
                    let want = oracle_answer(m.graph(), &q);
                    if got != want {
                        report.divergence = Some(Divergence {
                            line: l.number,
                            query: q.to_string(),
                            engine: got.clone(),
                            oracle: want,
                        });
                        report.answers.push(got);
                        break;
                    }
                }
                report.answers.push(got);
            }
        }
    }
    if opts.stats {
        report.stats = stats_lines(&m);
    }
    Ok(report)
}
