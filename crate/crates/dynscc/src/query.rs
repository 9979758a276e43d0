//! Failure queries on one strongly connected digraph.
//!
//! Edge failures are answered from the dominator trees D, D^R and the trees
//! Ĥ, Ĥ^R derived from the hyperloop forests. Vertex failures go through a
//! mirror graph in which every vertex x gets a twin x̄ that carries all of
//! x's incoming edges, so that failing x becomes failing the edge (x̄,x).

use std::cell::{Cell, OnceCell, RefCell};
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Dir, Edge, VertexId, NIL};
use crate::hyperloop::FlowEngine;

/// One strongly connected piece of G∖e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    /// e is not a strong bridge; nothing splits.
    Whole,
    /// Ĥ(w) for a forward root w.
    Forward(VertexId),
    /// Ĥ^R(z) for a reverse root z.
    Reverse(VertexId),
    /// Everything outside D(v) ∪ D^R(u).
    Outer,
}

/// Count and extreme sizes of the SCCs left after a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub count: usize,
    pub max: usize,
    pub min: usize,
}

impl Summary {
    /// Count, largest and smallest of a list of SCC sizes; all zero when empty.
    pub fn of(sizes: impl Iterator<Item = usize>) -> Summary {
        let mut s = Summary {
            count: 0,
            max: 0,
            min: 0,
        };
        for z in sizes {
            s.min = if s.count == 0 { z } else { s.min.min(z) };
            s.max = s.max.max(z);
            s.count += 1;
        }
        s
    }
}

/// Euler intervals of D and Ĥ for one direction, with jump pointers on Ĥ.
#[derive(Debug, Clone)]
struct Side {
    d_tin: Vec<usize>,
    d_end: Vec<usize>,
    d_order: Vec<VertexId>,
    hat: Vec<VertexId>,
    h_tin: Vec<usize>,
    h_end: Vec<usize>,
    h_order: Vec<VertexId>,
    up: Vec<Vec<VertexId>>,
    level: Vec<usize>,
}

fn euler(n: usize, root: VertexId, children: &[Vec<VertexId>]) -> (Vec<usize>, Vec<usize>, Vec<VertexId>) {
    let mut tin = vec![NIL; n];
    let mut end = vec![NIL; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![(root, false)];
    while let Some((v, done)) = stack.pop() {
        if done {
            end[v] = order.len();
            continue;
        }
        tin[v] = order.len();
        order.push(v);
        stack.push((v, true));
        for &c in children[v].iter().rev() {
            stack.push((c, false));
        }
    }
    (tin, end, order)
}

/// Ĥ parent of every vertex: the canonical vertex for non-canonical ones,
/// ℓ for canonical ones, none for the canonical vertex of the start tree.
pub fn hat_parents(f: &FlowEngine) -> Vec<VertexId> {
    let n = f.dom.n();
    let cs = f.dec.canonical[f.start()];
    (0..n)
        .map(|u| {
            let c = f.dec.canonical[u];
            if c != u {
                c
            } else if u == cs {
                NIL
            } else {
                f.ell[u]
            }
        })
        .collect()
}

impl Side {
    fn build(f: &FlowEngine) -> Side {
        let n = f.dom.n();
        let d_children: Vec<Vec<VertexId>> = (0..n).map(|v| f.dom.children(v).to_vec()).collect();
        let (d_tin, d_end, d_order) = euler(n, f.start(), &d_children);
        let hat = hat_parents(f);
        let mut h_children = vec![Vec::new(); n];
        let mut root = NIL;
        for u in 0..n {
            if hat[u] == NIL {
                root = u;
            } else {
                h_children[hat[u]].push(u);
            }
        }
        let (h_tin, h_end, h_order) = euler(n, root, &h_children);
        debug_assert_eq!(h_order.len(), n, "Ĥ must span the graph");
        let k = (usize::BITS - n.leading_zeros()).max(1) as usize;
        let mut up = vec![hat.clone()];
        for j in 1..k {
            let prev = &up[j - 1];
            let next = (0..n)
                .map(|v| if prev[v] == NIL { NIL } else { prev[prev[v]] })
                .collect();
            up.push(next);
        }
        Side {
            d_tin,
            d_end,
            d_order,
            hat,
            h_tin,
            h_end,
            h_order,
            up,
            level: f.dec.level.clone(),
        }
    }

    fn in_d(&self, r: VertexId, u: VertexId) -> bool {
        self.d_tin[r] <= self.d_tin[u] && self.d_tin[u] < self.d_end[r]
    }

    fn in_h(&self, r: VertexId, u: VertexId) -> bool {
        self.h_tin[r] <= self.h_tin[u] && self.h_tin[u] < self.h_end[r]
    }

    fn h_size(&self, w: VertexId) -> usize {
        self.h_end[w] - self.h_tin[w]
    }

    /// Highest Ĥ-ancestor of u whose level is at least `lvl`. Levels never
    /// increase going up Ĥ, so this is a jump-pointer descent.
    fn rep(&self, u: VertexId, lvl: usize, probes: &Cell<u64>) -> VertexId {
        let mut z = u;
        for j in (0..self.up.len()).rev() {
            probes.set(probes.get() + 1);
            let a = self.up[j][z];
            if a != NIL && self.level[a] >= lvl {
                z = a;
            }
        }
        z
    }
}

#[derive(Debug, Clone)]
struct Index {
    f: Side,
    r: Side,
}

/// Both flow-graph engines of one strongly connected digraph plus a lazily
/// built query index.
#[derive(Debug, Clone)]
pub struct StrongEngine {
    g: Digraph,
    pub fwd: FlowEngine,
    pub rev: FlowEngine,
    index: OnceCell<Index>,
    summaries: RefCell<HashMap<Edge, Summary>>,
    probes: Cell<u64>,
}

impl StrongEngine {
    /// `g` must be strongly connected.
    pub fn new(g: Digraph, start: VertexId) -> StrongEngine {
        let fwd = FlowEngine::initialize(&g, Dir::Forward, start, true);
        let rev = FlowEngine::initialize(&g, Dir::Reverse, start, true);
        StrongEngine {
            g,
            fwd,
            rev,
            index: OnceCell::new(),
            summaries: RefCell::new(HashMap::new()),
            probes: Cell::new(0),
        }
    }

    pub fn graph(&self) -> &Digraph {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn start(&self) -> VertexId {
        self.fwd.start()
    }

    /// Inserts an edge between two of its vertices. Returns whether it was
    /// new and whether either direction restarted.
    pub fn insert(&mut self, x: VertexId, y: VertexId) -> Result<(bool, bool)> {
        if !self.g.insert_edge(x, y)? {
            return Ok((false, false));
        }
        let a = self.fwd.insert(&self.g, (x, y));
        let b = self.rev.insert(&self.g, (x, y));
        self.index = OnceCell::new();
        self.summaries.get_mut().clear();
        Ok((true, a || b))
    }

    fn index(&self) -> &Index {
        self.index.get_or_init(|| Index {
            f: Side::build(&self.fwd),
            r: Side::build(&self.rev),
        })
    }

    /// Index probes spent so far by connectivity queries.
    pub fn probes(&self) -> u64 {
        self.probes.get()
    }

    pub fn hat(&self, dir: Dir) -> Vec<VertexId> {
        match dir {
            Dir::Forward => hat_parents(&self.fwd),
            Dir::Reverse => hat_parents(&self.rev),
        }
    }

    fn is_forward_bridge(&self, (a, b): Edge) -> bool {
        self.fwd.dom.parent[b] == a && self.fwd.dom.bridge[b]
    }

    fn is_reverse_bridge(&self, (a, b): Edge) -> bool {
        self.rev.dom.parent[a] == b && self.rev.dom.bridge[a]
    }

    pub fn is_strong_bridge(&self, e: Edge) -> bool {
        self.is_forward_bridge(e) || self.is_reverse_bridge(e)
    }

    pub fn strong_bridges(&self) -> Vec<Edge> {
        let mut out = self.fwd.dom.bridges();
        out.extend(self.rev.dom.bridges().into_iter().map(|(p, v)| (v, p)));
        out.sort_unstable();
        out.dedup();
        out
    }

    fn check_edge(&self, (a, b): Edge) -> Result<()> {
        self.g.check(a)?;
        self.g.check(b)?;
        if !self.g.has_edge(a, b) {
            return Err(Error::UnknownEdge(a, b));
        }
        Ok(())
    }

    /// The SCCs of G∖e with their sizes.
    pub fn blocks(&self, e: Edge) -> Result<Vec<(Block, usize)>> {
        self.check_edge(e)?;
        let (a, b) = e;
        let fb = self.is_forward_bridge(e);
        let rb = self.is_reverse_bridge(e);
        let n = self.n();
        if !fb && !rb {
            return Ok(vec![(Block::Whole, n)]);
        }
        let ix = self.index();
        let mut out = Vec::new();
        let mut covered = 0;
        if fb {
            for &w in &ix.f.d_order[ix.f.d_tin[b]..ix.f.d_end[b]] {
                let h = ix.f.hat[w];
                if h == NIL || !ix.f.in_d(b, h) {
                    out.push((Block::Forward(w), ix.f.h_size(w)));
                }
            }
            covered += ix.f.d_end[b] - ix.f.d_tin[b];
        }
        if rb {
            for &z in &ix.r.d_order[ix.r.d_tin[a]..ix.r.d_end[a]] {
                if fb && ix.f.in_d(b, z) {
                    continue;
                }
                covered += 1;
                let h = ix.r.hat[z];
                if h == NIL || !ix.r.in_d(a, h) {
                    out.push((Block::Reverse(z), ix.r.h_size(z)));
                }
            }
        }
        if covered < n {
            out.push((Block::Outer, n - covered));
        }
        Ok(out)
    }

    /// The block of G∖e holding u.
    pub fn block_of(&self, u: VertexId, e: Edge) -> Result<Block> {
        self.check_edge(e)?;
        self.g.check(u)?;
        Ok(self.block_unchecked(u, e))
    }

    fn block_unchecked(&self, u: VertexId, (a, b): Edge) -> Block {
        let fb = self.is_forward_bridge((a, b));
        let rb = self.is_reverse_bridge((a, b));
        if !fb && !rb {
            return Block::Whole;
        }
        let ix = self.index();
        let p = &self.probes;
        if fb {
            p.set(p.get() + 1);
            if ix.f.in_d(b, u) {
                return Block::Forward(ix.f.rep(u, ix.f.level[b], p));
            }
        }
        if rb {
            p.set(p.get() + 1);
            if ix.r.in_d(a, u) {
                return Block::Reverse(ix.r.rep(u, ix.r.level[a], p));
            }
        }
        Block::Outer
    }

    pub fn summary(&self, e: Edge) -> Result<Summary> {
        if let Some(s) = self.summaries.borrow().get(&e) {
            return Ok(*s);
        }
        let s = Summary::of(self.blocks(e)?.into_iter().map(|(_, z)| z));
        self.summaries.borrow_mut().insert(e, s);
        Ok(s)
    }

    /// Vertices of one block, ascending.
    pub fn members(&self, blk: Block, e: Edge) -> Vec<VertexId> {
        let (a, b) = e;
        let ix = self.index();
        let mut out: Vec<VertexId> = match blk {
            Block::Whole => (0..self.n()).collect(),
            Block::Forward(w) => ix.f.h_order[ix.f.h_tin[w]..ix.f.h_end[w]].to_vec(),
            Block::Reverse(z) => ix.r.h_order[ix.r.h_tin[z]..ix.r.h_end[z]].to_vec(),
            Block::Outer => {
                let fb = self.is_forward_bridge(e);
                let rb = self.is_reverse_bridge(e);
                (0..self.n())
                    .filter(|&u| !(fb && ix.f.in_d(b, u)) && !(rb && ix.r.in_d(a, u)))
                    .collect()
            }
        };
        out.sort_unstable();
        out
    }

    /// All SCCs of G∖e, each sorted, ordered by smallest member.
    pub fn list(&self, e: Edge) -> Result<Vec<Vec<VertexId>>> {
        let mut out: Vec<Vec<VertexId>> = self
            .blocks(e)?
            .into_iter()
            .map(|(blk, _)| self.members(blk, e))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Whether u and v stay strongly connected in G∖e.
    pub fn connected(&self, u: VertexId, v: VertexId, e: Edge) -> Result<bool> {
        self.check_edge(e)?;
        self.g.check(u)?;
        self.g.check(v)?;
        Ok(self.connected_unchecked(u, v, e))
    }

    fn connected_unchecked(&self, u: VertexId, v: VertexId, (a, b): Edge) -> bool {
        if u == v {
            return true;
        }
        let blk = self.block_unchecked(u, (a, b));
        let ix = self.index();
        let p = &self.probes;
        p.set(p.get() + 1);
        match blk {
            Block::Whole => true,
            Block::Forward(w) => ix.f.in_h(w, v),
            Block::Reverse(z) => ix.r.in_h(z, v),
            Block::Outer => {
                let fb = self.is_forward_bridge((a, b));
                let rb = self.is_reverse_bridge((a, b));
                p.set(p.get() + 1);
                !(fb && ix.f.in_d(b, v)) && !(rb && ix.r.in_d(a, v))
            }
        }
    }

    /// Strong bridges whose removal separates u from v. Only bridges that
    /// dominate u or v in D or D^R can do so; each candidate is tested.
    pub fn separating_edges(&self, u: VertexId, v: VertexId) -> Result<Vec<Edge>> {
        self.g.check(u)?;
        self.g.check(v)?;
        if u == v {
            return Ok(Vec::new());
        }
        let mut cand = Vec::new();
        for f in [&self.fwd, &self.rev] {
            let s = f.start();
            for &z in &[u, v] {
                let mut q = f.dec.root[z];
                while q != s {
                    let p = f.dom.parent[q];
                    cand.push(f.dir().orient((p, q)));
                    q = f.dec.root[p];
                }
            }
        }
        cand.sort_unstable();
        cand.dedup();
        cand.retain(|&e| !self.connected_unchecked(u, v, e));
        Ok(cand)
    }
}

/// A strongly connected digraph together with its mirror, answering both
/// edge- and vertex-failure queries.
#[derive(Debug, Clone)]
pub struct FailureIndex {
    pub base: StrongEngine,
    pub mirror: StrongEngine,
    vertex_summaries: RefCell<HashMap<VertexId, Summary>>,
}

/// The mirror graph on 2k vertices; x̄ is numbered k + x.
pub fn mirror_graph(g: &Digraph) -> Digraph {
    let k = g.n();
    let mut m = Digraph::new(2 * k).expect("nonempty");
    for x in 0..k {
        m.insert_edge(k + x, x).expect("in range");
        m.insert_edge(x, k + x).expect("in range");
    }
    for &(u, y) in g.edges() {
        m.insert_edge(u, k + y).expect("in range");
    }
    m
}

impl FailureIndex {
    /// `g` must be strongly connected.
    pub fn new(g: Digraph, start: VertexId) -> FailureIndex {
        let k = g.n();
        let mirror = StrongEngine::new(mirror_graph(&g), k + start);
        FailureIndex {
            base: StrongEngine::new(g, start),
            mirror,
            vertex_summaries: RefCell::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn insert(&mut self, x: VertexId, y: VertexId) -> Result<(bool, bool)> {
        let (new, r1) = self.base.insert(x, y)?;
        if !new {
            return Ok((false, false));
        }
        let k = self.n();
        let (_, r2) = self.mirror.insert(x, k + y)?;
        self.vertex_summaries.get_mut().clear();
        Ok((true, r1 || r2))
    }

    fn failed(&self, v: VertexId) -> Result<Edge> {
        self.base.graph().check(v)?;
        Ok((self.n() + v, v))
    }

    /// SCC blocks of G∖v as mirror blocks, without the singletons {v}, {v̄}.
    fn vertex_blocks(&self, v: VertexId) -> Result<Vec<(Block, usize)>> {
        let e = self.failed(v)?;
        let own = self.mirror.block_unchecked(v, e);
        let twin = self.mirror.block_unchecked(e.0, e);
        Ok(self
            .mirror
            .blocks(e)?
            .into_iter()
            .filter(|&(b, _)| b != own && b != twin)
            .map(|(b, z)| (b, z / 2))
            .collect())
    }

    pub fn vertex_summary(&self, v: VertexId) -> Result<Summary> {
        if let Some(s) = self.vertex_summaries.borrow().get(&v) {
            return Ok(*s);
        }
        let s = Summary::of(self.vertex_blocks(v)?.into_iter().map(|(_, z)| z));
        self.vertex_summaries.borrow_mut().insert(v, s);
        Ok(s)
    }

    pub fn vertex_list(&self, v: VertexId) -> Result<Vec<Vec<VertexId>>> {
        let e = self.failed(v)?;
        let k = self.n();
        let mut out: Vec<Vec<VertexId>> = self
            .vertex_blocks(v)?
            .into_iter()
            .map(|(b, _)| self.mirror.members(b, e).into_iter().filter(|&x| x < k).collect())
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Whether u and w stay strongly connected in G∖v. A failed endpoint is
    /// never connected.
    pub fn vertex_connected(&self, u: VertexId, w: VertexId, v: VertexId) -> Result<bool> {
        let e = self.failed(v)?;
        self.base.graph().check(u)?;
        self.base.graph().check(w)?;
        if u == v || w == v {
            return Ok(false);
        }
        Ok(self.mirror.connected_unchecked(u, w, e))
    }

    /// Strong articulation points separating u from w, other than u and w.
    pub fn separating_vertices(&self, u: VertexId, w: VertexId) -> Result<Vec<VertexId>> {
        let k = self.n();
        self.base.graph().check(u)?;
        self.base.graph().check(w)?;
        let mut out: Vec<VertexId> = self
            .mirror
            .separating_edges(u, w)?
            .into_iter()
            .filter(|&(a, b)| b < k && a == k + b && b != u && b != w)
            .map(|(_, b)| b)
            .collect();
        out.sort_unstable();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn g3() -> Digraph {
        Digraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (1, 3), (3, 4), (4, 1)]).unwrap()
    }

    #[test]
    fn hat_examples() {
        let e = StrongEngine::new(g3(), 0);
        assert_eq!(e.hat(Dir::Forward), vec![NIL, 0, 0, 1, 1]);
        let g4 = Digraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 1), (1, 3)]).unwrap();
        let e = StrongEngine::new(g4, 0);
        let h = e.hat(Dir::Forward);
        assert_eq!((h[1], h[2], h[3]), (0, 1, 1));
        let e = StrongEngine::new(Digraph::new(1).unwrap(), 0);
        assert_eq!(e.hat(Dir::Forward), vec![NIL]);
    }

    #[test]
    fn edge_examples() {
        let e = StrongEngine::new(g3(), 0);
        assert_eq!(
            e.summary((1, 3)).unwrap(),
            Summary {
                count: 3,
                max: 3,
                min: 1
            }
        );
        assert_eq!(e.list((1, 3)).unwrap(), vec![vec![0, 1, 2], vec![3], vec![4]]);
        assert_eq!(e.list((0, 1)).unwrap(), oracle::failure_edge(e.graph(), (0, 1)));
        assert!(e.connected(0, 2, (1, 3)).unwrap());
        assert!(!e.connected(3, 4, (1, 3)).unwrap());
        assert!(e.connected(3, 3, (0, 1)).unwrap());
        assert_eq!(e.separating_edges(0, 2).unwrap(), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(e.blocks((2, 3)), Err(Error::UnknownEdge(2, 3)));
    }

    #[test]
    fn vertex_examples() {
        let f = FailureIndex::new(g3(), 0);
        assert_eq!(f.mirror.n(), 10);
        assert_eq!(f.mirror.graph().m(), 16);
        assert_eq!(
            f.vertex_summary(1).unwrap(),
            Summary {
                count: 4,
                max: 1,
                min: 1
            }
        );
        assert_eq!(f.separating_vertices(0, 2).unwrap(), vec![1]);
        let k3 = Digraph::from_edges(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]).unwrap();
        let f = FailureIndex::new(k3, 0);
        assert_eq!(f.vertex_summary(1).unwrap().count, 1);
        let f = FailureIndex::new(Digraph::new(1).unwrap(), 0);
        assert_eq!(
            f.vertex_summary(0).unwrap(),
            Summary {
                count: 0,
                max: 0,
                min: 0
            }
        );
        assert!(f.vertex_list(0).unwrap().is_empty());
    }

    #[test]
    fn insert_reaches_mirror() {
        let mut f = FailureIndex::new(g3(), 0);
        f.insert(2, 1).unwrap();
        assert!(f.mirror.graph().has_edge(2, 6));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn workload() -> impl Strategy<Value = (usize, Vec<usize>, Vec<Edge>)> {
            (1usize..9).prop_flat_map(|n| {
                (
                    Just(n),
                    Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                    prop::collection::vec((0..n, 0..n), 0..25),
                )
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]
            #[test]
            fn every_query_matches_brute_force((n, perm, extra) in workload()) {
                let cycle: Vec<Edge> = if n == 1 { vec![] } else { (0..n).map(|i| (perm[i], perm[(i + 1) % n])).collect() };
                let g = Digraph::from_edges(n, &cycle).unwrap();
                let mut f = FailureIndex::new(g.clone(), perm[0]);
                let mut g = g;
                let mut steps = vec![None];
                steps.extend(extra.into_iter().map(Some));
                for step in steps {
                    if let Some((x, y)) = step {
                        g.insert_edge(x, y).unwrap();
                        f.insert(x, y).unwrap();
                    }
                    for &e in g.edges() {
                        let want = oracle::failure_edge(&g, e);
                        prop_assert_eq!(&f.base.list(e).unwrap(), &want);
                        let s = f.base.summary(e).unwrap();
                        prop_assert_eq!(s.count, want.len());
                        prop_assert_eq!(s.max, want.iter().map(|c| c.len()).max().unwrap());
                        prop_assert_eq!(s.min, want.iter().map(|c| c.len()).min().unwrap());
                        for a in 0..n {
                            for b in 0..n {
                                prop_assert_eq!(f.base.connected(a, b, e).unwrap(), oracle::connected_without_edge(&g, e, a, b));
                            }
                        }
                    }
                    for v in 0..n {
                        let want = oracle::failure_vertex(&g, v);
                        prop_assert_eq!(&f.vertex_list(v).unwrap(), &want);
                        let s = f.vertex_summary(v).unwrap();
                        prop_assert_eq!(s.count, want.len());
                        prop_assert_eq!(s.max, want.iter().map(|c| c.len()).max().unwrap_or(0));
                        prop_assert_eq!(s.min, want.iter().map(|c| c.len()).min().unwrap_or(0));
                        for a in 0..n {
                            for b in 0..n {
                                prop_assert_eq!(f.vertex_connected(a, b, v).unwrap(), oracle::connected_without_vertex(&g, v, a, b));
                            }
                        }
                    }
                    for a in 0..n {
                        for b in 0..n {
                            prop_assert_eq!(f.base.separating_edges(a, b).unwrap(), oracle::separating_edges(&g, a, b));
                            prop_assert_eq!(f.separating_vertices(a, b).unwrap(), oracle::separating_vertices(&g, a, b));
                        }
                    }
                }
            }
        }
    }
}
