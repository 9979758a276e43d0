//! Simple digraph with an append-only edge log, plus static SCC and
//! reachability helpers shared by the rest of the crate.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type Edge = (VertexId, VertexId);

/// Marker for "no vertex" in dense parent arrays.
pub const NIL: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    edge_log: Vec<Edge>,
}

impl Digraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(Digraph {
            n,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            edge_log: Vec::new(),
        })
    }

    /// Builds a graph by inserting `edges` in order; duplicates and
    /// self-loops are dropped like in [`Digraph::insert_edge`].
    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self> {
        let mut g = Digraph::new(n)?;
        for &(x, y) in edges {
            g.insert_edge(x, y)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edge_log.len()
    }

    /// Returns `Ok(true)` iff the edge was new. Self-loops and duplicates are
    /// ignored because neither can ever separate anything.
    pub fn insert_edge(&mut self, x: VertexId, y: VertexId) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        if x == y || self.has_edge(x, y) {
            return Ok(false);
        }
        self.out_adj[x].push(y);
        self.in_adj[y].push(x);
        self.edge_log.push((x, y));
        Ok(true)
    }

    pub fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        if x >= self.n || y >= self.n {
            return false;
        }
        // scan the shorter list
        if self.out_adj[x].len() <= self.in_adj[y].len() {
            self.out_adj[x].contains(&y)
        } else {
            self.in_adj[y].contains(&x)
        }
    }

    pub fn check(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { v, n: self.n })
        }
    }

    pub fn out_adj(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v]
    }

    pub fn in_adj(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edge_log
    }

    pub fn view(&self, dir: Dir) -> View<'_> {
        View { g: self, dir }
    }

    /// Copy of the graph with every edge reversed, in log order.
    pub fn reversed(&self) -> Digraph {
        let rev: Vec<Edge> = self.edge_log.iter().map(|&(x, y)| (y, x)).collect();
        Digraph::from_edges(self.n, &rev).expect("same vertex count")
    }

    /// Subgraph induced by `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[VertexId]) -> Digraph {
        let mut local = vec![NIL; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut g = Digraph::new(vertices.len().max(1)).expect("nonzero");
        for &(x, y) in &self.edge_log {
            if local[x] != NIL && local[y] != NIL {
                g.insert_edge(local[x], local[y]).expect("in range");
            }
        }
        g
    }
}

/// Orientation in which a flow graph reads its digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Forward,
    Reverse,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Forward => Dir::Reverse,
            Dir::Reverse => Dir::Forward,
        }
    }

    /// Maps an edge of the underlying digraph to this orientation.
    pub fn orient(self, (x, y): Edge) -> Edge {
        match self {
            Dir::Forward => (x, y),
            Dir::Reverse => (y, x),
        }
    }
}

#[derive(Clone, Copy)]
pub struct View<'a> {
    g: &'a Digraph,
    dir: Dir,
}

impl<'a> View<'a> {
    pub fn n(&self) -> usize {
        self.g.n
    }

    pub fn dir(&self) -> Dir {
        self.dir
    }

    pub fn succ(&self, v: VertexId) -> &'a [VertexId] {
        match self.dir {
            Dir::Forward => &self.g.out_adj[v],
            Dir::Reverse => &self.g.in_adj[v],
        }
    }

    pub fn pred(&self, v: VertexId) -> &'a [VertexId] {
        match self.dir {
            Dir::Forward => &self.g.in_adj[v],
            Dir::Reverse => &self.g.out_adj[v],
        }
    }

    pub fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        match self.dir {
            Dir::Forward => self.g.has_edge(x, y),
            Dir::Reverse => self.g.has_edge(y, x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    pub component_id: Vec<usize>,
    pub components: Vec<Vec<VertexId>>,
}

impl SccPartition {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn size(&self, c: usize) -> usize {
        self.components[c].len()
    }

    pub fn same(&self, u: VertexId, v: VertexId) -> bool {
        self.component_id[u] == self.component_id[v]
    }

    /// Components as sorted vertex lists, ordered by minimum element.
    pub fn canonical(&self) -> Vec<Vec<VertexId>> {
        let mut out: Vec<Vec<VertexId>> = self
            .components
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        out.sort();
        out
    }
}

/// Tarjan's algorithm, iterative. Component ids follow completion order,
/// which is deterministic given adjacency order.
pub fn scc(g: &Digraph) -> SccPartition {
    let n = g.n();
    let mut index = vec![NIL; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![NIL; n];
    let mut components: Vec<Vec<VertexId>> = Vec::new();
    let mut counter = 0;
    let mut call: Vec<(VertexId, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != NIL {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            let adj = g.out_adj(v);
            if *i < adj.len() {
                let w = adj[*i];
                *i += 1;
                if index[w] == NIL {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let id = components.len();
                    let mut members = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = id;
                        members.push(w);
                        if w == v {
                            break;
                        }
                    }
                    components.push(members);
                }
            }
        }
    }
    SccPartition {
        component_id: comp,
        components,
    }
}

/// Vertices reachable from `s` while avoiding an optional edge and an
/// optional vertex.
pub fn reachable(g: &Digraph, s: VertexId, banned_edge: Option<Edge>, banned_vertex: Option<VertexId>) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    if banned_vertex == Some(s) {
        return seen;
    }
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &w in g.out_adj(v) {
            if seen[w] || Some(w) == banned_vertex || Some((v, w)) == banned_edge {
                continue;
            }
            seen[w] = true;
            queue.push_back(w);
        }
    }
    seen
}

/// Convenience wrapper returning the reachable set as a sorted list.
pub fn reachable_set(
    g: &Digraph,
    s: VertexId,
    banned_edge: Option<Edge>,
    banned_vertex: Option<VertexId>,
) -> Vec<VertexId> {
    reachable(g, s, banned_edge, banned_vertex)
        .into_iter()
        .enumerate()
        .filter_map(|(v, r)| r.then_some(v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn g3() -> Digraph {
        Digraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (1, 3), (3, 4), (4, 1)]).unwrap()
    }

    #[test]
    fn construction_and_insert_rules() {
        assert!(Digraph::new(0).is_err());
        let mut g = Digraph::new(3).unwrap();
        assert_eq!(g.m(), 0);
        assert!(g.insert_edge(0, 1).unwrap());
        assert!(!g.insert_edge(0, 1).unwrap());
        assert!(!g.insert_edge(2, 2).unwrap());
        assert!(g.insert_edge(0, 3).is_err());
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(Digraph::new(1).unwrap().n(), 1);
    }

    #[test]
    fn scc_examples() {
        let cycle = Digraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(scc(&cycle).canonical(), vec![vec![0, 1, 2]]);
        let path = Digraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(scc(&path).count(), 3);
        assert_eq!(scc(&g3()).canonical(), vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn reachable_examples() {
        let g = g3();
        assert_eq!(reachable_set(&g, 0, Some((1, 3)), None), vec![0, 1, 2]);
        assert_eq!(reachable_set(&g, 0, None, None), vec![0, 1, 2, 3, 4]);
        assert_eq!(reachable_set(&g, 0, None, Some(1)), vec![0]);
    }

    #[test]
    fn views_swap_adjacency() {
        let g = g3();
        let r = g.view(Dir::Reverse);
        assert_eq!(r.succ(1), g.in_adj(1));
        assert!(r.has_edge(1, 0));
        assert_eq!(g.reversed().out_adj(1), &[0, 4]);
    }
}
