//! General digraphs: the SCC partition under insertions, with one failure
//! index per strongly connected component.

use std::cell::OnceCell;
use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{reachable, Digraph, Edge, VertexId};
use crate::query::{FailureIndex, Summary};
use crate::twovcc::{PairAnswer, TwoVcc};

/// What an insertion did to the partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertEvent {
    /// The edge was already present or is a self-loop.
    Ignored,
    /// Both endpoints were in one SCC; `restarted` if an engine
    /// reinitialized because a bridge was locally canceled.
    Intra { restarted: bool },
    /// SCCs merged into one; listed by their members, principal first.
    Merge { components: Vec<Vec<VertexId>> },
    /// An edge between SCCs that closes no cycle.
    Cross,
}

/// One SCC. Singletons carry no index.
#[derive(Debug, Clone)]
pub struct Component {
    /// Members in local order: `members[i]` is local vertex `i`.
    pub members: Vec<VertexId>,
    pub start: VertexId,
    pub index: Option<FailureIndex>,
    twovcc: OnceCell<TwoVcc>,
}

impl Component {
    /// 2-vertex-connected components in local ids, computed on first use.
    pub fn two_vcc(&self) -> Option<&TwoVcc> {
        let ix = self.index.as_ref()?;
        Some(self.twovcc.get_or_init(|| TwoVcc::compute(ix)))
    }
}

#[derive(Debug, Clone, Default)]
pub struct ManagerStats {
    pub merges: usize,
    /// Sum over merges of each vertex's depth in the new dominator tree,
    /// counted only when its old SCC was not the principal one.
    pub effective_depth: Vec<usize>,
    pub strong_bridges_seen: HashSet<Edge>,
    /// Engine counters of indices dropped by merges.
    pub retired: EngineTotals,
}

/// Counters summed over the four flow engines of each failure index.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineTotals {
    pub insertions: usize,
    pub restarts: usize,
    pub scanned: usize,
    pub affected: usize,
    pub l_affected: usize,
    pub probes: u64,
}

impl EngineTotals {
    fn add_index(&mut self, ix: &FailureIndex) {
        for s in [&ix.base, &ix.mirror] {
            for f in [&s.fwd, &s.rev] {
                self.insertions += f.stats.insertions;
                self.restarts += f.stats.restarts;
                self.scanned += f.stats.scanned_total;
                self.affected += f.stats.affected_total;
                self.l_affected += f.stats.l_affected_not_scanned_total;
            }
            self.probes += s.probes();
        }
    }
}

#[derive(Debug, Clone)]
pub struct Manager {
    g: Digraph,
    comp: Vec<usize>,
    local: Vec<VertexId>,
    comps: Vec<Option<Component>>,
    free: Vec<usize>,
    sizes: BTreeMap<usize, usize>,
    count: usize,
    pub stats: ManagerStats,
}

impl Manager {
    pub fn new(n: usize) -> Result<Manager> {
        let g = Digraph::new(n)?;
        let comps = (0..n)
            .map(|v| {
                Some(Component {
                    members: vec![v],
                    start: v,
                    index: None,
                    twovcc: OnceCell::new(),
                })
            })
            .collect();
        let mut sizes = BTreeMap::new();
        sizes.insert(1, n);
        Ok(Manager {
            g,
            comp: (0..n).collect(),
            local: vec![0; n],
            comps,
            free: Vec::new(),
            sizes,
            count: n,
            stats: ManagerStats {
                effective_depth: vec![0; n],
                ..Default::default()
            },
        })
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn graph(&self) -> &Digraph {
        &self.g
    }

    pub fn component(&self, v: VertexId) -> &Component {
        self.comps[self.comp[v]].as_ref().expect("live component")
    }

    pub fn components(&self) -> impl Iterator<Item = &Component> {
        self.comps.iter().flatten()
    }

    pub fn local_id(&self, v: VertexId) -> VertexId {
        self.local[v]
    }

    pub fn scc_count(&self) -> usize {
        self.count
    }

    /// SCCs as sorted lists ordered by minimum member.
    pub fn sccs(&self) -> Vec<Vec<VertexId>> {
        let mut out: Vec<Vec<VertexId>> = self
            .components()
            .map(|c| {
                let mut m = c.members.clone();
                m.sort_unstable();
                m
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn same_scc(&self, u: VertexId, v: VertexId) -> bool {
        self.comp[u] == self.comp[v]
    }

    fn size_add(&mut self, z: usize, d: isize) {
        let e = self.sizes.entry(z).or_insert(0);
        *e = (*e as isize + d) as usize;
        if *e == 0 {
            self.sizes.remove(&z);
        }
    }

    pub fn insert(&mut self, x: VertexId, y: VertexId) -> Result<InsertEvent> {
        if !self.g.insert_edge(x, y)? {
            return Ok(InsertEvent::Ignored);
        }
        let (cx, cy) = (self.comp[x], self.comp[y]);
        if cx == cy {
            let (lx, ly) = (self.local[x], self.local[y]);
            let c = self.comps[cx].as_mut().expect("live component");
            let ix = c.index.as_mut().expect("an edge inside an SCC needs two vertices");
            let (_, restarted) = ix.insert(lx, ly)?;
            c.twovcc = OnceCell::new();
            self.record_bridges(cx);
            return Ok(InsertEvent::Intra { restarted });
        }
        let fwd = reachable(&self.g, y, None, None);
        if !fwd[x] {
            return Ok(InsertEvent::Cross);
        }
        // vertices on a cycle through (x,y): reached from y and reaching x
        let mut back = vec![false; self.n()];
        back[x] = true;
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            for &u in self.g.in_adj(v) {
                if fwd[u] && !back[u] {
                    back[u] = true;
                    stack.push(u);
                }
            }
        }
        let mut ids: Vec<usize> = (0..self.n()).filter(|&v| back[v]).map(|v| self.comp[v]).collect();
        ids.sort_unstable();
        ids.dedup();
        Ok(self.merge(ids))
    }

    fn merge(&mut self, ids: Vec<usize>) -> InsertEvent {
        let mut old: Vec<Component> = ids.iter().map(|&i| self.comps[i].take().expect("live")).collect();
        for c in &old {
            self.size_add(c.members.len(), -1);
        }
        self.free.extend(&ids);
        for ix in old.iter().filter_map(|c| c.index.as_ref()) {
            self.stats.retired.add_index(ix);
        }
        // principal: largest, then smallest start vertex
        old.sort_by_key(|c| (std::cmp::Reverse(c.members.len()), c.start));
        let start = old[0].start;
        let mut members: Vec<VertexId> = old.iter().flat_map(|c| c.members.iter().copied()).collect();
        members.sort_unstable();
        let id = self.free.pop().expect("at least two freed ids");
        for (i, &v) in members.iter().enumerate() {
            self.comp[v] = id;
            self.local[v] = i;
        }
        let sub = self.g.induced(&members);
        let ix = FailureIndex::new(sub, self.local[start]);
        for c in old.iter().skip(1) {
            for &v in &c.members {
                self.stats.effective_depth[v] += ix.base.fwd.dom.depth[self.local[v]];
            }
        }
        self.size_add(members.len(), 1);
        self.count -= old.len() - 1;
        self.stats.merges += 1;
        self.comps[id] = Some(Component {
            members,
            start,
            index: Some(ix),
            twovcc: OnceCell::new(),
        });
        self.record_bridges(id);
        InsertEvent::Merge {
            components: old
                .into_iter()
                .map(|c| {
                    let mut m = c.members;
                    m.sort_unstable();
                    m
                })
                .collect(),
        }
    }

    fn record_bridges(&mut self, id: usize) {
        let c = self.comps[id].as_ref().expect("live");
        if let Some(ix) = &c.index {
            for (a, b) in ix.base.strong_bridges() {
                self.stats.strong_bridges_seen.insert((c.members[a], c.members[b]));
            }
        }
    }

    /// All strong bridges of the current graph, sorted.
    pub fn strong_bridges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .components()
            .filter_map(|c| c.index.as_ref().map(|ix| (c, ix)))
            .flat_map(|(c, ix)| {
                ix.base
                    .strong_bridges()
                    .into_iter()
                    .map(|(a, b)| (c.members[a], c.members[b]))
            })
            .collect();
        out.sort_unstable();
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

    /// The component an edge lies inside, if any.
    fn inner(&self, (a, b): Edge) -> Option<(&Component, &FailureIndex, Edge)> {
        if self.comp[a] != self.comp[b] {
            return None;
        }
        let c = self.component(a);
        Some((c, c.index.as_ref()?, (self.local[a], self.local[b])))
    }

    /// Combines the SCCs of one failed component with all untouched ones.
    fn combine(&self, failed: usize, inside: Summary) -> Summary {
        let mut count = self.count - 1 + inside.count;
        let others = |asc: bool| -> Option<usize> {
            let mut it: Box<dyn Iterator<Item = (&usize, &usize)>> = if asc {
                Box::new(self.sizes.iter())
            } else {
                Box::new(self.sizes.iter().rev())
            };
            it.find(|&(&z, &k)| k > 1 || z != failed).map(|(&z, _)| z)
        };
        let mut max = inside.max;
        let mut min = if inside.count == 0 { usize::MAX } else { inside.min };
        if let Some(z) = others(false) {
            max = max.max(z);
        }
        if let Some(z) = others(true) {
            min = min.min(z);
        }
        if min == usize::MAX {
            min = 0;
            count = 0;
        }
        Summary { count, max, min }
    }

    fn intact(&self) -> Summary {
        Summary {
            count: self.count,
            max: *self.sizes.keys().next_back().expect("nonempty"),
            min: *self.sizes.keys().next().expect("nonempty"),
        }
    }

    pub fn edge_summary(&self, e: Edge) -> Result<Summary> {
        self.check_edge(e)?;
        match self.inner(e) {
            Some((c, ix, le)) => Ok(self.combine(c.members.len(), ix.base.summary(le)?)),
            None => Ok(self.intact()),
        }
    }

    fn lists_with(&self, skip: usize, inside: Vec<Vec<VertexId>>, members: &[VertexId]) -> Vec<Vec<VertexId>> {
        let mut out: Vec<Vec<VertexId>> = inside
            .into_iter()
            .map(|l| {
                let mut m: Vec<VertexId> = l.into_iter().map(|i| members[i]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        for (i, c) in self.comps.iter().enumerate() {
            if let (Some(c), true) = (c, i != skip) {
                let mut m = c.members.clone();
                m.sort_unstable();
                out.push(m);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn edge_list(&self, e: Edge) -> Result<Vec<Vec<VertexId>>> {
        self.check_edge(e)?;
        match self.inner(e) {
            Some((c, ix, le)) => Ok(self.lists_with(self.comp[e.0], ix.base.list(le)?, &c.members)),
            None => Ok(self.sccs()),
        }
    }

    pub fn edge_connected(&self, u: VertexId, v: VertexId, e: Edge) -> Result<bool> {
        self.check_edge(e)?;
        self.g.check(u)?;
        self.g.check(v)?;
        if self.comp[u] != self.comp[v] {
            return Ok(false);
        }
        if u == v || self.comp[e.0] != self.comp[u] {
            return Ok(true);
        }
        match self.inner(e) {
            Some((_, ix, le)) => ix.base.connected(self.local[u], self.local[v], le),
            None => Ok(true),
        }
    }

    pub fn separating_edges(&self, u: VertexId, v: VertexId) -> Result<Vec<Edge>> {
        self.g.check(u)?;
        self.g.check(v)?;
        if u == v || self.comp[u] != self.comp[v] {
            return Ok(Vec::new());
        }
        let c = self.component(u);
        let ix = c.index.as_ref().expect("two distinct members");
        let mut out: Vec<Edge> = ix
            .base
            .separating_edges(self.local[u], self.local[v])?
            .into_iter()
            .map(|(a, b)| (c.members[a], c.members[b]))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    pub fn vertex_summary(&self, v: VertexId) -> Result<Summary> {
        self.g.check(v)?;
        let c = self.component(v);
        let inside = match &c.index {
            Some(ix) => ix.vertex_summary(self.local[v])?,
            None => Summary {
                count: 0,
                max: 0,
                min: 0,
            },
        };
        Ok(self.combine(c.members.len(), inside))
    }

    pub fn vertex_list(&self, v: VertexId) -> Result<Vec<Vec<VertexId>>> {
        self.g.check(v)?;
        let c = self.component(v);
        let inside = match &c.index {
            Some(ix) => ix.vertex_list(self.local[v])?,
            None => Vec::new(),
        };
        Ok(self.lists_with(self.comp[v], inside, &c.members))
    }

    /// Whether u and w stay strongly connected once v fails. A failed
    /// endpoint is never connected.
    pub fn vertex_connected(&self, u: VertexId, w: VertexId, v: VertexId) -> Result<bool> {
        self.g.check(u)?;
        self.g.check(w)?;
        self.g.check(v)?;
        if u == v || w == v || self.comp[u] != self.comp[w] {
            return Ok(false);
        }
        if u == w || self.comp[v] != self.comp[u] {
            return Ok(true);
        }
        let ix = self.component(u).index.as_ref().expect("two distinct members");
        ix.vertex_connected(self.local[u], self.local[w], self.local[v])
    }

    pub fn separating_vertices(&self, u: VertexId, w: VertexId) -> Result<Vec<VertexId>> {
        self.g.check(u)?;
        self.g.check(w)?;
        if u == w || self.comp[u] != self.comp[w] {
            return Ok(Vec::new());
        }
        let c = self.component(u);
        let ix = c.index.as_ref().expect("two distinct members");
        let mut out: Vec<VertexId> = ix
            .separating_vertices(self.local[u], self.local[w])?
            .into_iter()
            .map(|x| c.members[x])
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// All 2-vertex-connected components, sorted.
    pub fn two_vccs(&self) -> Vec<Vec<VertexId>> {
        let mut out: Vec<Vec<VertexId>> = self
            .components()
            .filter_map(|c| c.two_vcc().map(|t| (c, t)))
            .flat_map(|(c, t)| {
                t.components.iter().map(move |l| {
                    let mut m: Vec<VertexId> = l.iter().map(|&i| c.members[i]).collect();
                    m.sort_unstable();
                    m
                })
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Whether u and v are 2-vertex-connected, with a witness when not.
    pub fn two_vcc_pair(&self, u: VertexId, v: VertexId) -> Result<PairAnswer> {
        self.g.check(u)?;
        self.g.check(v)?;
        if u == v {
            return Err(Error::SamePair(u));
        }
        if self.comp[u] != self.comp[v] {
            return Ok(PairAnswer::Apart);
        }
        let c = self.component(u);
        let ix = c.index.as_ref().expect("two distinct members");
        let t = c.two_vcc().expect("indexed component");
        Ok(match t.pair(ix, self.local[u], self.local[v])? {
            PairAnswer::Edge((a, b)) => PairAnswer::Edge((c.members[a], c.members[b])),
            PairAnswer::Vertex(x) => PairAnswer::Vertex(c.members[x]),
            other => other,
        })
    }

    /// Engine counters over live indices plus those retired by merges.
    pub fn engine_totals(&self) -> EngineTotals {
        let mut t = self.stats.retired;
        for ix in self.components().filter_map(|c| c.index.as_ref()) {
            t.add_index(ix);
        }
        t
    }

    /// Index probes made by queries so far, over live indices only.
    pub fn probes(&self) -> u64 {
        self.components()
            .filter_map(|c| c.index.as_ref())
            .map(|ix| ix.base.probes() + ix.mirror.probes())
            .sum()
    }

    /// Whether u's component has a failure index.
    pub fn index_of(&self, u: VertexId) -> Option<&FailureIndex> {
        self.component(u).index.as_ref()
    }
}
