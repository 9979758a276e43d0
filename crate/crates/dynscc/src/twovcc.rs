//! Vertex-resilient, 2-edge-connected and 2-vertex-connected components of
//! one strongly connected digraph.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Edge, VertexId, NIL};
use crate::query::FailureIndex;

/// Replaces each block B by the sets B ∩ (S ∪ {x}) of size at least two,
/// for every S in the partition. `x` must lie outside the partition.
pub fn refine(blocks: &[Vec<VertexId>], partition: &[Vec<VertexId>], x: VertexId) -> Result<Vec<Vec<VertexId>>> {
    let mut label: HashMap<VertexId, usize> = HashMap::new();
    for (i, s) in partition.iter().enumerate() {
        for &v in s {
            if v == x {
                return Err(Error::PivotInPartition(x));
            }
            label.insert(v, i);
        }
    }
    let mut out = Vec::new();
    for b in blocks {
        out.extend(split_block(b, x, |v| label.get(&v).copied()));
    }
    Ok(out)
}

fn split_block(b: &[VertexId], x: VertexId, label: impl Fn(VertexId) -> Option<usize>) -> Vec<Vec<VertexId>> {
    let has_x = b.contains(&x);
    let mut groups: Vec<(usize, Vec<VertexId>)> = Vec::new();
    for &v in b {
        if v == x {
            continue;
        }
        if let Some(l) = label(v) {
            match groups.iter_mut().find(|(k, _)| *k == l) {
                Some((_, g)) => g.push(v),
                None => groups.push((l, vec![v])),
            }
        }
    }
    groups
        .into_iter()
        .map(|(_, mut g)| {
            if has_x {
                g.push(x);
            }
            g.sort_unstable();
            g
        })
        .filter(|g| g.len() >= 2)
        .collect()
}

/// Bipartite vertex/block incidence. Dead blocks keep their slot.
#[derive(Debug, Clone, Default)]
pub struct BlockForest {
    blocks: Vec<Option<Vec<VertexId>>>,
    of_vertex: Vec<Vec<usize>>,
}

impl BlockForest {
    fn new(n: usize) -> Self {
        BlockForest {
            blocks: Vec::new(),
            of_vertex: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, mut b: Vec<VertexId>) {
        if b.len() < 2 {
            return;
        }
        b.sort_unstable();
        let id = self.blocks.len();
        for &v in &b {
            self.of_vertex[v].push(id);
        }
        self.blocks.push(Some(b));
    }

    fn live_of(&self, v: VertexId) -> impl Iterator<Item = usize> + '_ {
        self.of_vertex[v]
            .iter()
            .copied()
            .filter(|&id| self.blocks[id].is_some())
    }

    pub fn blocks(&self) -> Vec<Vec<VertexId>> {
        let mut out: Vec<Vec<VertexId>> = self.blocks.iter().flatten().cloned().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Acyclic as an undirected bipartite graph.
    pub fn is_forest(&self) -> bool {
        let n = self.of_vertex.len();
        let mut dsu: Vec<usize> = (0..n + self.blocks.len()).collect();
        fn find(d: &mut [usize], mut v: usize) -> usize {
            while d[v] != v {
                d[v] = d[d[v]];
                v = d[v];
            }
            v
        }
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b.iter().flatten() {
                let (a, c) = (find(&mut dsu, v), find(&mut dsu, n + i));
                if a == c {
                    return false;
                }
                dsu[a] = c;
            }
        }
        true
    }

    /// Blocks holding at least two vertices of `scope`.
    fn touching(&self, scope: &[VertexId]) -> Vec<usize> {
        let mut hits: HashMap<usize, usize> = HashMap::new();
        for &v in scope {
            for id in self.live_of(v) {
                *hits.entry(id).or_insert(0) += 1;
            }
        }
        let mut ids: Vec<usize> = hits.into_iter().filter(|&(_, k)| k >= 2).map(|(id, _)| id).collect();
        ids.sort_unstable();
        ids
    }

    /// Refines the given blocks in place; returns the ids of the results.
    fn refine_ids(&mut self, ids: &[usize], x: VertexId, label: &HashMap<VertexId, usize>) -> Vec<usize> {
        let mut out = Vec::new();
        for &id in ids {
            let b = self.blocks[id].take().expect("live block");
            for part in split_block(&b, x, |v| label.get(&v).copied()) {
                out.push(self.blocks.len());
                self.add(part);
            }
        }
        out
    }

    fn remove_vertex(&mut self, id: usize, v: VertexId) {
        let mut b = self.blocks[id].take().expect("live block");
        b.retain(|&w| w != v);
        self.add(b);
    }
}

/// The sets C(u,v) keyed by (u,v): every z sits in C(d(z),d^R(z)),
/// C(z,d^R(z)), C(z,z) and C(d(z),z), where defined.
fn c_sets(d: &[VertexId], dr: &[VertexId]) -> Vec<Vec<VertexId>> {
    let mut sets: HashMap<(VertexId, VertexId), Vec<VertexId>> = HashMap::new();
    for z in 0..d.len() {
        let keys = [(d[z], dr[z]), (z, dr[z]), (z, z), (d[z], z)];
        for (i, &(a, b)) in keys.iter().enumerate() {
            if a == NIL || b == NIL || keys[..i].contains(&(a, b)) {
                continue;
            }
            sets.entry((a, b)).or_default().push(z);
        }
    }
    let mut out: Vec<Vec<VertexId>> = sets.into_values().filter(|s| s.len() >= 2).collect();
    out.sort_unstable();
    out
}

/// Maximal vertex-resilient sets of size at least two, as a block forest.
pub fn vertex_resilient_forest(ix: &FailureIndex) -> BlockForest {
    let k = ix.n();
    let base = &ix.base;
    let d = &base.fwd.dom.parent;
    let dr = &base.rev.dom.parent;
    let s = base.start();
    let mut f = BlockForest::new(k);
    for b in c_sets(d, dr) {
        f.add(b);
    }

    for (pass, tree) in [&base.fwd.dom, &base.rev.dom].into_iter().enumerate() {
        let mut order = tree.preorder();
        order.reverse();
        for u in order {
            let kids = tree.children(u);
            if kids.is_empty() {
                continue;
            }
            let mut scope = kids.to_vec();
            scope.push(u);
            let ids = f.touching(&scope);
            if ids.is_empty() {
                continue;
            }
            // SCCs of G∖u restricted to the children of u
            let label: HashMap<VertexId, usize> = if pass == 0 {
                let canon = &ix.mirror.fwd.dec.canonical;
                kids.iter().map(|&x| (x, canon[k + x])).collect()
            } else {
                let e = (k + u, u);
                let mut reps: HashMap<crate::query::Block, usize> = HashMap::new();
                kids.iter()
                    .map(|&x| {
                        let b = ix.mirror.block_of(x, e).expect("valid vertex");
                        let next = reps.len();
                        (x, *reps.entry(b).or_insert(next))
                    })
                    .collect()
            };
            let refined = f.refine_ids(&ids, u, &label);
            if u == s {
                continue;
            }
            let du = tree.parent[u];
            for id in refined {
                let Some(b) = &f.blocks[id] else { continue };
                if !b.contains(&u) {
                    continue;
                }
                let v = *b.iter().find(|&&w| w != u).expect("two members");
                // u stays only if it keeps up with the block once d(u) fails
                if !ix.vertex_connected(u, v, du).expect("valid vertices") {
                    f.remove_vertex(id, u);
                }
            }
        }
    }
    f
}

/// 2-edge-connected classes: a label per vertex, equal iff no single edge
/// separates the pair.
pub fn two_edge_classes(ix: &FailureIndex) -> Vec<usize> {
    let k = ix.n();
    let mut label = vec![0usize; k];
    for e in ix.base.strong_bridges() {
        let mut next: HashMap<(usize, usize), usize> = HashMap::new();
        let mut piece = vec![0usize; k];
        for (i, part) in ix.base.list(e).expect("bridge is an edge").into_iter().enumerate() {
            for v in part {
                piece[v] = i;
            }
        }
        for v in 0..k {
            let n = next.len();
            label[v] = *next.entry((label[v], piece[v])).or_insert(n);
        }
    }
    label
}

/// 2-vertex-connected components of one strongly connected digraph.
#[derive(Debug, Clone)]
pub struct TwoVcc {
    pub resilient: Vec<Vec<VertexId>>,
    pub edge_class: Vec<usize>,
    pub components: Vec<Vec<VertexId>>,
    /// Components holding each vertex.
    of_vertex: Vec<Vec<usize>>,
}

/// Answer to a pair query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairAnswer {
    Yes,
    /// No by a separating edge.
    Edge(Edge),
    /// No by a separating vertex.
    Vertex(VertexId),
    /// No, the pair is not even strongly connected.
    Apart,
}

impl TwoVcc {
    pub fn compute(ix: &FailureIndex) -> TwoVcc {
        let resilient = vertex_resilient_forest(ix).blocks();
        let edge_class = two_edge_classes(ix);
        let mut components = Vec::new();
        for b in &resilient {
            let mut by: HashMap<usize, Vec<VertexId>> = HashMap::new();
            for &v in b {
                by.entry(edge_class[v]).or_default().push(v);
            }
            components.extend(by.into_values().filter(|c| c.len() >= 2));
        }
        for c in components.iter_mut() {
            c.sort_unstable();
        }
        components.sort_unstable();
        components.dedup();
        let mut of_vertex = vec![Vec::new(); ix.n()];
        for (i, c) in components.iter().enumerate() {
            for &v in c {
                of_vertex[v].push(i);
            }
        }
        TwoVcc {
            resilient,
            edge_class,
            components,
            of_vertex,
        }
    }

    pub fn together(&self, u: VertexId, v: VertexId) -> bool {
        self.of_vertex[u].iter().any(|c| self.of_vertex[v].contains(c))
    }

    /// Pair query with the smallest witness when the answer is no.
    pub fn pair(&self, ix: &FailureIndex, u: VertexId, v: VertexId) -> Result<PairAnswer> {
        if u == v {
            return Err(Error::SamePair(u));
        }
        if self.together(u, v) {
            return Ok(PairAnswer::Yes);
        }
        if let Some(&e) = ix.base.separating_edges(u, v)?.first() {
            return Ok(PairAnswer::Edge(e));
        }
        if let Some(&x) = ix.separating_vertices(u, v)?.first() {
            return Ok(PairAnswer::Vertex(x));
        }
        Ok(PairAnswer::Apart)
    }
}
