//! Dominator tree and flow-graph bridges, built with Lengauer-Tarjan and
//! kept current under edge insertions with a depth-based search.

use std::collections::BTreeSet;

use crate::graph::{Digraph, Dir, Edge, VertexId, View, NIL};

/// What one insertion did to a dominator tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UpdateReport {
    /// The inserted edge in the orientation of this tree.
    pub edge: Edge,
    /// Vertices whose parent changed, sorted.
    pub affected: Vec<VertexId>,
    /// Old-tree descendants of affected vertices, sorted.
    pub scanned: Vec<VertexId>,
    pub nca: VertexId,
    /// Bridges lost while the head kept its parent, as (u,v) pairs in the
    /// orientation of this tree.
    pub locally_canceled: Vec<Edge>,
    /// Old ancestors strictly between nca and each affected vertex, plus
    /// y itself. These are the only non-scanned vertices whose subtree can
    /// shrink.
    pub path: Vec<VertexId>,
    /// The insertion made new vertices reachable and forced a rebuild.
    pub rebuilt: bool,
    /// The edge was a duplicate, a self-loop or starts outside the tree.
    pub noop: bool,
}

#[derive(Debug, Clone)]
pub struct DomTree {
    pub dir: Dir,
    pub start: VertexId,
    pub parent: Vec<VertexId>,
    pub depth: Vec<usize>,
    /// `bridge[v]`: the edge (parent[v], v) is a bridge of the flow graph.
    pub bridge: Vec<bool>,
    children: Vec<Vec<VertexId>>,
    pre: Vec<usize>,
    post: Vec<usize>,
    /// Depth at the last rebuild and scanned counts since then.
    pub segment_depth: Vec<usize>,
    pub scan_count: Vec<usize>,
}

impl DomTree {
    pub fn build(g: &Digraph, dir: Dir, start: VertexId) -> DomTree {
        let view = g.view(dir);
        let parent = lengauer_tarjan(view, start);
        let n = g.n();
        let mut t = DomTree {
            dir,
            start,
            parent,
            depth: vec![0; n],
            bridge: vec![false; n],
            children: vec![Vec::new(); n],
            pre: vec![NIL; n],
            post: vec![NIL; n],
            segment_depth: Vec::new(),
            scan_count: vec![0; n],
        };
        for v in 0..n {
            if t.parent[v] != NIL {
                let p = t.parent[v];
                t.children[p].push(v);
            }
        }
        t.renumber();
        for v in 0..n {
            t.bridge[v] = t.bridge_rule(view, v);
        }
        t.segment_depth = t.depth.clone();
        t
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.pre[v] != NIL
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    /// `a` is an ancestor of `b` (reflexive).
    pub fn is_ancestor(&self, a: VertexId, b: VertexId) -> bool {
        self.pre[a] != NIL && self.pre[b] != NIL && self.pre[a] <= self.pre[b] && self.post[b] <= self.post[a]
    }

    pub fn preorder_index(&self, v: VertexId) -> usize {
        self.pre[v]
    }

    /// Vertices in preorder of the tree (children in insertion order).
    pub fn preorder(&self) -> Vec<VertexId> {
        let mut order = Vec::with_capacity(self.n());
        let mut stack = vec![self.start];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        order
    }

    pub fn nca(&self, u: VertexId, v: VertexId) -> VertexId {
        let (mut a, mut b) = (u, v);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b];
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
        }
        a
    }

    /// Bridge edges as (parent, child) pairs in this tree's orientation.
    pub fn bridges(&self) -> Vec<Edge> {
        (0..self.n())
            .filter(|&v| self.bridge[v])
            .map(|v| (self.parent[v], v))
            .collect()
    }

    pub fn bridge_count(&self) -> usize {
        self.bridge.iter().filter(|&&b| b).count()
    }

    /// (d(v),v) is a bridge iff the edge exists and every other reachable
    /// predecessor of v lies inside D(v).
    fn bridge_rule(&self, view: View<'_>, v: VertexId) -> bool {
        let p = self.parent[v];
        if p == NIL {
            return false;
        }
        let mut has_edge = false;
        for &w in view.pred(v) {
            if w == p {
                has_edge = true;
            } else if self.contains(w) && !self.is_ancestor(v, w) {
                return false;
            }
        }
        has_edge
    }

    fn renumber(&mut self) {
        self.pre.iter_mut().for_each(|x| *x = NIL);
        self.post.iter_mut().for_each(|x| *x = NIL);
        let mut counter = 0;
        let mut stack: Vec<(VertexId, usize)> = vec![(self.start, 0)];
        self.pre[self.start] = counter;
        self.depth[self.start] = 0;
        counter += 1;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < self.children[v].len() {
                let c = self.children[v][*i];
                *i += 1;
                self.pre[c] = counter;
                self.depth[c] = self.depth[v] + 1;
                counter += 1;
                stack.push((c, 0));
            } else {
                self.post[v] = counter;
                counter += 1;
                stack.pop();
            }
        }
    }

    fn subtree(&self, r: VertexId, out: &mut Vec<VertexId>) {
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend_from_slice(&self.children[v]);
        }
    }

    /// Updates the tree after (x,y), already present in `g`, was inserted.
    /// Oriented edges: pass the pair as stored in `g`; the reverse tree
    /// flips it internally.
    pub fn insert(&mut self, g: &Digraph, edge: Edge) -> UpdateReport {
        let (x, y) = self.dir.orient(edge);
        let view = g.view(self.dir);
        if x == y || !self.contains(x) {
            return UpdateReport {
                noop: true,
                nca: NIL,
                ..Default::default()
            };
        }
        if !self.contains(y) {
            let fresh = DomTree::build(g, self.dir, self.start);
            *self = fresh;
            return UpdateReport {
                rebuilt: true,
                nca: NIL,
                ..Default::default()
            };
        }
        let nca = self.nca(x, y);
        let mut report = UpdateReport {
            edge: (x, y),
            nca,
            ..Default::default()
        };
        let limit = self.depth[nca] + 1;

        if self.depth[y] > limit {
            report.affected = self.affected_search(view, y, limit);
        }

        if report.affected.is_empty() {
            // no parent changes; only y can lose its bridge
            if y != nca && self.bridge[y] && !self.bridge_rule(view, y) {
                self.bridge[y] = false;
                report.locally_canceled.push((self.parent[y], y));
            }
            if y != nca {
                report.path.push(y);
            }
            return report;
        }

        // old subtrees and old ancestor paths, before moving anything
        let mut scanned = Vec::new();
        let mut path = BTreeSet::new();
        let mut is_affected = vec![false; self.n()];
        for &a in &report.affected {
            is_affected[a] = true;
        }
        for &a in &report.affected {
            self.subtree(a, &mut scanned);
            let mut w = self.parent[a];
            while w != nca {
                path.insert(w);
                w = self.parent[w];
            }
        }
        if !is_affected[y] && y != nca {
            path.insert(y);
        }
        scanned.sort_unstable();
        scanned.dedup();

        for &a in &report.affected {
            let p = self.parent[a];
            let pos = self.children[p].iter().position(|&c| c == a).expect("child link");
            self.children[p].remove(pos);
            self.children[nca].push(a);
            self.parent[a] = nca;
        }
        self.renumber();

        for &a in &report.affected {
            self.bridge[a] = self.bridge_rule(view, a);
        }
        for &w in &path {
            if is_affected[w] {
                continue;
            }
            if self.bridge[w] && !self.bridge_rule(view, w) {
                self.bridge[w] = false;
                report.locally_canceled.push((self.parent[w], w));
            }
        }
        for &v in &scanned {
            self.scan_count[v] += 1;
        }
        report.path = path.into_iter().filter(|&w| !is_affected[w]).collect();
        report.scanned = scanned;
        report
    }

    /// Depth-based search from y. Every vertex is pulled from a max-depth
    /// bucket queue; searching from z visits deeper vertices freely and
    /// marks shallower ones (still below nca's children) as affected.
    fn affected_search(&self, view: View<'_>, y: VertexId, limit: usize) -> Vec<VertexId> {
        let n = self.n();
        let mut visited = vec![false; n];
        let mut affected = Vec::new();
        let mut buckets: Vec<Vec<VertexId>> = vec![Vec::new(); self.depth[y] + 1];
        let mut top = self.depth[y];
        visited[y] = true;
        affected.push(y);
        buckets[top].push(y);
        let mut stack = Vec::new();
        loop {
            while top > limit && buckets[top].is_empty() {
                top -= 1;
            }
            let Some(z) = buckets[top].pop() else { break };
            let dz = self.depth[z];
            stack.push(z);
            while let Some(v) = stack.pop() {
                for &w in view.succ(v) {
                    if visited[w] || !self.contains(w) {
                        continue;
                    }
                    let dw = self.depth[w];
                    if dw > dz {
                        visited[w] = true;
                        stack.push(w);
                    } else if dw > limit {
                        visited[w] = true;
                        affected.push(w);
                        buckets[dw].push(w);
                    }
                }
            }
        }
        affected.sort_unstable();
        affected
    }

    /// Checks the tree against a from-scratch build; used by tests.
    pub fn same_as(&self, other: &DomTree) -> bool {
        self.parent == other.parent && self.depth == other.depth && self.bridge == other.bridge
    }
}

/// Iterative Lengauer-Tarjan with path compression. Returns immediate
/// dominators (`NIL` at the root and for unreachable vertices).
pub fn lengauer_tarjan(view: View<'_>, start: VertexId) -> Vec<VertexId> {
    let n = view.n();
    let mut num = vec![NIL; n];
    let mut vertex = Vec::with_capacity(n);
    let mut dfs_parent = vec![NIL; n];
    let mut stack: Vec<(VertexId, usize)> = vec![(start, 0)];
    num[start] = 0;
    vertex.push(start);
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        let succ = view.succ(v);
        if *i < succ.len() {
            let w = succ[*i];
            *i += 1;
            if num[w] == NIL {
                num[w] = vertex.len();
                vertex.push(w);
                dfs_parent[w] = v;
                stack.push((w, 0));
            }
        } else {
            stack.pop();
        }
    }
    let k = vertex.len();
    // everything below is indexed by DFS number
    let mut semi: Vec<usize> = (0..k).collect();
    let mut label: Vec<usize> = (0..k).collect();
    let mut ancestor = vec![NIL; k];
    let mut idom = vec![0usize; k];
    let mut bucket: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut path = Vec::new();

    for wi in (1..k).rev() {
        let w = vertex[wi];
        for &v in view.pred(w) {
            let vi = num[v];
            if vi == NIL {
                continue;
            }
            let u = eval(vi, &mut ancestor, &mut label, &semi, &mut path);
            if semi[u] < semi[wi] {
                semi[wi] = semi[u];
            }
        }
        bucket[semi[wi]].push(wi);
        let pi = num[dfs_parent[w]];
        ancestor[wi] = pi;
        for vi in std::mem::take(&mut bucket[pi]) {
            let u = eval(vi, &mut ancestor, &mut label, &semi, &mut path);
            idom[vi] = if semi[u] < semi[vi] { u } else { pi };
        }
    }
    for wi in 1..k {
        if idom[wi] != semi[wi] {
            idom[wi] = idom[idom[wi]];
        }
    }
    let mut out = vec![NIL; n];
    for wi in 1..k {
        out[vertex[wi]] = vertex[idom[wi]];
    }
    out
}

fn eval(v: usize, ancestor: &mut [usize], label: &mut [usize], semi: &[usize], path: &mut Vec<usize>) -> usize {
    if ancestor[v] == NIL {
        return v;
    }
    // collect the chain up to the forest root's child, then compress top-down
    path.clear();
    let mut x = v;
    while ancestor[ancestor[x]] != NIL {
        path.push(x);
        x = ancestor[x];
    }
    while let Some(y) = path.pop() {
        let a = ancestor[y];
        if semi[label[a]] < semi[label[y]] {
            label[y] = label[a];
        }
        ancestor[y] = ancestor[a];
    }
    label[v]
}
