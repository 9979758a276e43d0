//! Definition-level reference implementations. Everything here is quadratic
//! or worse on purpose and shares no code with the engine beyond the
//! `Digraph` container itself.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::{Digraph, Edge, VertexId, NIL};

/// Forward search honouring an allowed-vertex mask and one banned edge.
fn bfs(g: &Digraph, s: VertexId, allowed: &[bool], banned: Option<Edge>, backward: bool) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    if !allowed[s] {
        return seen;
    }
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        let next = if backward { g.in_adj(v) } else { g.out_adj(v) };
        for &w in next {
            let e = if backward { (w, v) } else { (v, w) };
            if !allowed[w] || seen[w] || Some(e) == banned {
                continue;
            }
            seen[w] = true;
            queue.push_back(w);
        }
    }
    seen
}

fn all(n: usize) -> Vec<bool> {
    vec![true; n]
}

/// SCCs of the subgraph induced by `allowed` minus `banned`, as sorted
/// lists ordered by minimum element, via pairwise reachability.
pub fn sccs_masked(g: &Digraph, allowed: &[bool], banned: Option<Edge>) -> Vec<Vec<VertexId>> {
    let n = g.n();
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for v in 0..n {
        if !allowed[v] || done[v] {
            continue;
        }
        let f = bfs(g, v, allowed, banned, false);
        let b = bfs(g, v, allowed, banned, true);
        let comp: Vec<VertexId> = (0..n).filter(|&u| f[u] && b[u]).collect();
        for &u in &comp {
            done[u] = true;
        }
        out.push(comp);
    }
    out
}

pub fn sccs(g: &Digraph) -> Vec<Vec<VertexId>> {
    sccs_masked(g, &all(g.n()), None)
}

/// SCCs of G minus one edge.
pub fn failure_edge(g: &Digraph, e: Edge) -> Vec<Vec<VertexId>> {
    sccs_masked(g, &all(g.n()), Some(e))
}

/// SCCs of G minus one vertex (the vertex itself is not listed).
pub fn failure_vertex(g: &Digraph, v: VertexId) -> Vec<Vec<VertexId>> {
    let mut allowed = all(g.n());
    allowed[v] = false;
    sccs_masked(g, &allowed, None)
}

fn same_comp(comps: &[Vec<VertexId>], a: VertexId, b: VertexId) -> bool {
    comps.iter().any(|c| c.contains(&a) && c.contains(&b))
}

pub fn connected_without_edge(g: &Digraph, e: Edge, a: VertexId, b: VertexId) -> bool {
    a == b || same_comp(&failure_edge(g, e), a, b)
}

pub fn connected_without_vertex(g: &Digraph, v: VertexId, a: VertexId, b: VertexId) -> bool {
    if a == v || b == v {
        return false;
    }
    a == b || same_comp(&failure_vertex(g, v), a, b)
}

pub fn strongly_connected(g: &Digraph, a: VertexId, b: VertexId) -> bool {
    let f = bfs(g, a, &all(g.n()), None, false);
    let b_ = bfs(g, a, &all(g.n()), None, true);
    f[b] && b_[b]
}

/// Edges whose removal increases the number of SCCs.
pub fn strong_bridges(g: &Digraph) -> Vec<Edge> {
    let base = sccs(g).len();
    let mut out: Vec<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|&e| failure_edge(g, e).len() > base)
        .collect();
    out.sort_unstable();
    out
}

/// Edges whose removal splits a strongly connected pair, sorted. Empty
/// when the pair is not strongly connected to begin with.
pub fn separating_edges(g: &Digraph, a: VertexId, b: VertexId) -> Vec<Edge> {
    if a == b || !strongly_connected(g, a, b) {
        return Vec::new();
    }
    let mut out: Vec<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|&e| !connected_without_edge(g, e, a, b))
        .collect();
    out.sort_unstable();
    out
}

/// Vertices other than a, b whose removal splits the pair, sorted.
pub fn separating_vertices(g: &Digraph, a: VertexId, b: VertexId) -> Vec<VertexId> {
    if a == b || !strongly_connected(g, a, b) {
        return Vec::new();
    }
    (0..g.n())
        .filter(|&v| v != a && v != b && !connected_without_vertex(g, v, a, b))
        .collect()
}

/// Immediate dominators by the definition: u dominates w iff w is not
/// reachable once u is removed. `NIL` for s and unreachable vertices.
pub fn dominators(g: &Digraph, s: VertexId) -> Vec<VertexId> {
    let n = g.n();
    let reach = bfs(g, s, &all(n), None, false);
    // dom[u][w]: u is a proper dominator of w
    let mut doms: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for u in 0..n {
        if !reach[u] {
            continue;
        }
        if u == s {
            for w in (0..n).filter(|&w| w != s && reach[w]) {
                doms[w].push(s);
            }
            continue;
        }
        let mut allowed = all(n);
        allowed[u] = false;
        let r = bfs(g, s, &allowed, None, false);
        for w in 0..n {
            if w != u && reach[w] && !r[w] {
                doms[w].push(u);
            }
        }
    }
    let mut parent = vec![NIL; n];
    for w in 0..n {
        if w == s || !reach[w] {
            continue;
        }
        // the immediate dominator is the proper dominator dominated by all others
        let cand = &doms[w];
        parent[w] = *cand
            .iter()
            .find(|&&c| cand.iter().all(|&o| o == c || o == s || doms[c].contains(&o)))
            .expect("dominators form a chain");
    }
    parent
}

/// Flow-graph bridges: edges (u,v) such that v becomes unreachable from s.
pub fn bridges(g: &Digraph, s: VertexId) -> Vec<Edge> {
    let n = g.n();
    let reach = bfs(g, s, &all(n), None, false);
    let mut out: Vec<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| reach[u] && v != s && !bfs(g, s, &all(n), Some((u, v)), false)[v])
        .collect();
    out.sort_unstable();
    out
}

fn descendants(parent: &[VertexId], r: VertexId, reach: &[bool]) -> Vec<bool> {
    let n = parent.len();
    (0..n)
        .map(|v| {
            if !reach[v] {
                return false;
            }
            let mut x = v;
            loop {
                if x == r {
                    return true;
                }
                if parent[x] == NIL {
                    return false;
                }
                x = parent[x];
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleDecomposition {
    pub parent: Vec<VertexId>,
    pub bridges: Vec<Edge>,
    pub root: Vec<VertexId>,
    pub level: Vec<usize>,
    pub canonical: Vec<VertexId>,
    /// ℓ per canonical vertex, `NIL` elsewhere and at the top tree.
    pub ell: Vec<VertexId>,
}

/// Dominators, bridges, bridge decomposition, auxiliary components and
/// the hyperloop parent map, all straight from their definitions.
pub fn decomposition(g: &Digraph, s: VertexId) -> OracleDecomposition {
    let n = g.n();
    let reach = bfs(g, s, &all(n), None, false);
    let parent = dominators(g, s);
    let bridges = bridges(g, s);
    let is_bridge_head: Vec<bool> = (0..n)
        .map(|v| parent[v] != NIL && bridges.contains(&(parent[v], v)))
        .collect();

    let mut root = vec![NIL; n];
    let mut level = vec![0; n];
    for v in 0..n {
        if !reach[v] {
            continue;
        }
        let mut x = v;
        while x != s && !is_bridge_head[x] {
            x = parent[x];
        }
        root[v] = x;
        let mut k = 0;
        let mut y = v;
        while y != s {
            if is_bridge_head[y] {
                k += 1;
            }
            y = parent[y];
        }
        level[v] = k;
    }

    // per decomposition root r: SCCs of G[D(r)]
    let roots: BTreeSet<VertexId> = root.iter().copied().filter(|&r| r != NIL).collect();
    let mut scc_of_root: Vec<Vec<Vec<VertexId>>> = vec![Vec::new(); n];
    for &r in &roots {
        let mask = descendants(&parent, r, &reach);
        scc_of_root[r] = sccs_masked(g, &mask, None);
    }

    let mut canonical = vec![NIL; n];
    for v in 0..n {
        if !reach[v] {
            continue;
        }
        let r = root[v];
        let comp = scc_of_root[r].iter().find(|c| c.contains(&v)).unwrap();
        canonical[v] = *comp.iter().find(|&&u| root[u] == r).unwrap();
    }

    let mut ell = vec![NIL; n];
    for v in 0..n {
        if !reach[v] || canonical[v] != v || root[v] == s {
            continue;
        }
        // climb decomposition trees; the first one sharing an SCC with v wins
        let mut r = root[parent[root[v]]];
        loop {
            let comp = scc_of_root[r].iter().find(|c| c.contains(&v)).unwrap();
            if let Some(&u) = comp.iter().find(|&&u| root[u] == r) {
                ell[v] = canonical[u];
                break;
            }
            if r == s {
                break;
            }
            r = root[parent[r]];
        }
    }

    OracleDecomposition {
        parent,
        bridges,
        root,
        level,
        canonical,
        ell,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleLoops {
    pub h: Vec<VertexId>,
    pub dfs_parent: Vec<VertexId>,
    pub preorder: Vec<usize>,
}

/// Loop nesting forest by restricted backward search per header. The DFS
/// visits successors in adjacency order; `allowed` restricts the graph.
pub fn loop_forest(g: &Digraph, root: VertexId, allowed: &[bool]) -> OracleLoops {
    let n = g.n();
    let mut pre = vec![NIL; n];
    let mut size = vec![0usize; n];
    let mut dfs_parent = vec![NIL; n];
    let mut order = Vec::new();
    // recursive DFS is fine at oracle sizes
    fn visit(
        g: &Digraph,
        v: VertexId,
        allowed: &[bool],
        pre: &mut Vec<usize>,
        size: &mut Vec<usize>,
        dfs_parent: &mut Vec<VertexId>,
        order: &mut Vec<VertexId>,
    ) {
        pre[v] = order.len();
        order.push(v);
        for &w in g.out_adj(v) {
            if allowed[w] && pre[w] == NIL {
                dfs_parent[w] = v;
                visit(g, w, allowed, pre, size, dfs_parent, order);
            }
        }
        size[v] = order.len() - pre[v];
    }
    visit(g, root, allowed, &mut pre, &mut size, &mut dfs_parent, &mut order);

    let is_desc = |x: VertexId, u: VertexId| pre[x] != NIL && pre[u] <= pre[x] && pre[x] < pre[u] + size[u];
    let mut h = vec![NIL; n];
    // loop(u): descendants reaching u through descendants only
    let mut body: Vec<Vec<bool>> = vec![Vec::new(); n];
    for &u in &order {
        let mask: Vec<bool> = (0..n).map(|x| allowed[x] && is_desc(x, u)).collect();
        body[u] = bfs(g, u, &mask, None, true);
    }
    for &v in &order {
        // nearest proper ancestor whose loop contains v
        let mut a = dfs_parent[v];
        while a != NIL {
            if body[a][v] {
                h[v] = a;
                break;
            }
            a = dfs_parent[a];
        }
    }
    OracleLoops {
        h,
        dfs_parent,
        preorder: pre,
    }
}

/// Vertex-resilient pair: strongly connected after removing any third vertex.
pub fn vertex_resilient(g: &Digraph, a: VertexId, b: VertexId) -> bool {
    strongly_connected(g, a, b)
        && (0..g.n())
            .filter(|&z| z != a && z != b)
            .all(|z| connected_without_vertex(g, z, a, b))
}

/// Two edge-disjoint paths each way, i.e. no single edge separates the pair.
pub fn two_edge_connected(g: &Digraph, a: VertexId, b: VertexId) -> bool {
    strongly_connected(g, a, b) && g.edges().iter().all(|&e| connected_without_edge(g, e, a, b))
}

/// Unit-capacity max flow from u to v in the vertex-split graph, stopping
/// once the value reaches `cap`. Internal vertices carry capacity one.
fn split_flow(g: &Digraph, u: VertexId, v: VertexId, cap: usize) -> usize {
    let n = g.n();
    // node 2x = x_in, 2x+1 = x_out
    let nodes = 2 * n;
    let mut to: Vec<usize> = Vec::new();
    let mut rest: Vec<i32> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let big = 1_000_000;
    let mut add = |a: usize, b: usize, c: i32, to: &mut Vec<usize>, rest: &mut Vec<i32>| {
        adj[a].push(to.len());
        to.push(b);
        rest.push(c);
        adj[b].push(to.len());
        to.push(a);
        rest.push(0);
    };
    for x in 0..n {
        let c = if x == u || x == v { big } else { 1 };
        add(2 * x, 2 * x + 1, c, &mut to, &mut rest);
    }
    for &(x, y) in g.edges() {
        add(2 * x + 1, 2 * y, 1, &mut to, &mut rest);
    }
    let (src, dst) = (2 * u + 1, 2 * v);
    let mut flow = 0;
    while flow < cap {
        let mut prev = vec![usize::MAX; nodes];
        let mut seen = vec![false; nodes];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(a) = queue.pop_front() {
            for &id in &adj[a] {
                let b = to[id];
                if rest[id] > 0 && !seen[b] {
                    seen[b] = true;
                    prev[b] = id;
                    queue.push_back(b);
                }
            }
        }
        if !seen[dst] {
            break;
        }
        let mut b = dst;
        while b != src {
            let id = prev[b];
            rest[id] -= 1;
            rest[id ^ 1] += 1;
            b = to[id ^ 1];
        }
        flow += 1;
    }
    flow
}

/// Two internally vertex-disjoint paths in both directions.
pub fn two_vertex_connected(g: &Digraph, u: VertexId, v: VertexId) -> bool {
    split_flow(g, u, v, 2) >= 2 && split_flow(g, v, u, 2) >= 2
}
