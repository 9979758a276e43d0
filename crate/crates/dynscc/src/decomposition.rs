//! Bridge decomposition of a dominator tree and the auxiliary components
//! of each decomposition tree.

use crate::dominators::{DomTree, UpdateReport};
use crate::graph::{Digraph, VertexId, View, NIL};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Root of the decomposition tree holding each vertex.
    pub root: Vec<VertexId>,
    /// Number of bridges on the dominator-tree path from the start.
    pub level: Vec<usize>,
    /// Minimum-id member of each vertex's auxiliary component.
    pub canonical: Vec<VertexId>,
    /// Set once the flow graph is known to be strongly connected; the top
    /// tree is then a single component and never needs recomputing.
    strongly_connected: bool,
}

impl Decomposition {
    pub fn build(g: &Digraph, t: &DomTree, strongly_connected: bool) -> Decomposition {
        let n = t.n();
        let mut dec = Decomposition {
            root: vec![NIL; n],
            level: vec![0; n],
            canonical: vec![NIL; n],
            strongly_connected,
        };
        dec.assign_roots(t, t.start);
        let view = g.view(t.dir);
        let mut scratch = Scratch::new(n);
        for v in t.preorder() {
            if dec.root[v] == v {
                dec.components_of_tree(view, t, v, &mut scratch);
            }
        }
        dec
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strongly_connected
    }

    /// Roots and levels for the subtree of `top`, whose parent is current.
    fn assign_roots(&mut self, t: &DomTree, top: VertexId) {
        let mut stack = vec![top];
        while let Some(v) = stack.pop() {
            let p = t.parent[v];
            if p == NIL || t.bridge[v] {
                self.root[v] = v;
                self.level[v] = if p == NIL { 0 } else { self.level[p] + 1 };
            } else {
                self.root[v] = self.root[p];
                self.level[v] = self.level[p];
            }
            stack.extend_from_slice(t.children(v));
        }
    }

    /// Members of the decomposition tree rooted at `r`.
    pub fn tree_members(&self, t: &DomTree, r: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            out.push(v);
            for &c in t.children(v) {
                if !t.bridge[c] {
                    stack.push(c);
                }
            }
        }
        out
    }

    /// Nearest ancestor of `u` inside the decomposition tree rooted at `r`.
    /// `u` must lie in D(r).
    pub fn ancestor_in_tree(&self, t: &DomTree, mut u: VertexId, r: VertexId) -> VertexId {
        while self.root[u] != r {
            u = t.parent[self.root[u]];
        }
        u
    }

    /// Recomputes the auxiliary components of the tree rooted at `r` and
    /// reports whether any canonical vertex changed. A path that dips below
    /// a bridge (p,q) can only come back through vertices of D(q), so it
    /// contracts to an edge leaving p.
    fn components_of_tree(&mut self, view: View<'_>, t: &DomTree, r: VertexId, sc: &mut Scratch) -> bool {
        sc.members.clear();
        sc.stack.push(r);
        while let Some(v) = sc.stack.pop() {
            sc.members.push(v);
            sc.stack.extend(t.children(v).iter().copied().filter(|&c| !t.bridge[c]));
        }
        let members = std::mem::take(&mut sc.members);
        let mut changed = false;
        if r == t.start && self.strongly_connected {
            let c = *members.iter().min().expect("nonempty tree");
            for &v in &members {
                changed |= self.canonical[v] != c;
                self.canonical[v] = c;
            }
            sc.members = members;
            return changed;
        }
        for (i, &v) in members.iter().enumerate() {
            sc.local[v] = i;
        }
        let k = members.len();
        sc.edges.clear();
        for (i, &v) in members.iter().enumerate() {
            for &u in view.pred(v) {
                if !t.contains(u) || !t.is_ancestor(r, u) {
                    continue;
                }
                let j = sc.local[self.ancestor_in_tree(t, u, r)];
                if j != i {
                    sc.edges.push((j, i));
                }
            }
        }
        // compressed adjacency
        sc.offsets.clear();
        sc.offsets.resize(k + 1, 0);
        for &(j, _) in &sc.edges {
            sc.offsets[j + 1] += 1;
        }
        for i in 0..k {
            sc.offsets[i + 1] += sc.offsets[i];
        }
        sc.targets.clear();
        sc.targets.resize(sc.edges.len(), 0);
        sc.fill.clear();
        sc.fill.extend_from_slice(&sc.offsets[..k]);
        for &(j, i) in &sc.edges {
            sc.targets[sc.fill[j]] = i;
            sc.fill[j] += 1;
        }
        let comp = tarjan_local(&sc.offsets, &sc.targets);
        sc.best.clear();
        sc.best.resize(k, NIL);
        for (i, &v) in members.iter().enumerate() {
            let c = comp[i];
            if sc.best[c] == NIL || v < sc.best[c] {
                sc.best[c] = v;
            }
        }
        for (i, &v) in members.iter().enumerate() {
            let c = sc.best[comp[i]];
            changed |= self.canonical[v] != c;
            self.canonical[v] = c;
            sc.local[v] = NIL;
        }
        sc.members = members;
        changed
    }

    /// Brings the decomposition in line with `t` after an insertion that
    /// produced `report` without canceling any bridge locally. Returns true
    /// when some canonical vertex changed.
    pub fn update(&mut self, g: &Digraph, t: &DomTree, report: &UpdateReport) -> bool {
        if report.noop {
            return false;
        }
        if report.rebuilt {
            *self = Decomposition::build(g, t, self.strongly_connected);
            return true;
        }
        if report.affected.is_empty() {
            return self.add_edge(g, t, report);
        }
        for &a in &report.affected {
            self.assign_roots(t, a);
        }
        let mut roots: Vec<VertexId> = Vec::new();
        let nca = report.nca;
        roots.push(self.root[nca]);
        roots.extend(report.path.iter().map(|&v| self.root[v]));
        roots.extend(report.scanned.iter().map(|&v| self.root[v]));
        roots.sort_unstable();
        roots.dedup();

        let view = g.view(t.dir);
        let mut scratch = Scratch::new(t.n());
        let mut changed = false;
        for r in roots {
            changed |= self.components_of_tree(view, t, r, &mut scratch);
        }
        changed
    }

    /// No parent changed, so every tree keeps its members and the only new
    /// auxiliary edge enters y's tree. Components there merge only if the
    /// edge joins two different ones.
    fn add_edge(&mut self, g: &Digraph, t: &DomTree, report: &UpdateReport) -> bool {
        let (x, y) = report.edge;
        let r = self.root[y];
        if !t.is_ancestor(r, x) || (r == t.start && self.strongly_connected) {
            return false;
        }
        let a = self.ancestor_in_tree(t, x, r);
        if self.canonical[a] == self.canonical[y] {
            return false;
        }
        self.components_of_tree(g.view(t.dir), t, r, &mut Scratch::new(t.n()))
    }

    /// Canonical vertices of the flow graph in ascending order.
    pub fn canonical_vertices(&self) -> Vec<VertexId> {
        (0..self.canonical.len()).filter(|&v| self.canonical[v] == v).collect()
    }
}

/// Buffers reused across the trees of one build or update.
struct Scratch {
    local: Vec<usize>,
    members: Vec<VertexId>,
    stack: Vec<VertexId>,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    fill: Vec<usize>,
    targets: Vec<usize>,
    best: Vec<VertexId>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            local: vec![NIL; n],
            members: Vec::new(),
            stack: Vec::new(),
            edges: Vec::new(),
            offsets: Vec::new(),
            fill: Vec::new(),
            targets: Vec::new(),
            best: Vec::new(),
        }
    }
}

/// Tarjan over a compressed local adjacency; returns component ids.
fn tarjan_local(offsets: &[usize], targets: &[usize]) -> Vec<usize> {
    let k = offsets.len() - 1;
    let mut index = vec![NIL; k];
    let mut low = vec![0; k];
    let mut on = vec![false; k];
    let mut comp = vec![NIL; k];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..k {
        if index[root] != NIL {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on[root] = true;
        call.push((root, offsets[root]));
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < offsets[v + 1] {
                let w = targets[*i];
                *i += 1;
                if index[w] == NIL {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on[w] = true;
                    call.push((w, offsets[w]));
                } else if on[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("stack");
                        on[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}
