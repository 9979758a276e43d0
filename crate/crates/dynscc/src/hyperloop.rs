//! The hyperloop nesting forest L of one flow graph and its maintenance
//! under edge insertions. `FlowEngine` bundles L with the dominator tree
//! and the decomposition it is defined over.

use crate::decomposition::Decomposition;
use crate::dominators::{DomTree, UpdateReport};
use crate::graph::{Digraph, Dir, Edge, VertexId, NIL};
use crate::loops::LoopForest;

/// Counters kept per engine. Segment counters reset on every restart.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub insertions: usize,
    pub restarts: usize,
    pub scanned_total: usize,
    pub affected_total: usize,
    pub l_affected_not_scanned_total: usize,
    /// Per vertex: times its component was L-affected without being
    /// scanned, since the last (re)initialization.
    pub l_affected_segment: Vec<usize>,
}

/// What the last insertion touched; kept for invariant checks.
#[derive(Debug, Clone, Default)]
pub struct LastUpdate {
    pub restarted: bool,
    pub report: UpdateReport,
    /// r'_y, the root of y's decomposition tree after the update.
    pub ry: VertexId,
    /// Canonical vertices whose parent moved to a different component.
    pub l_changed: Vec<VertexId>,
}

#[derive(Debug, Clone)]
pub struct FlowEngine {
    pub dom: DomTree,
    pub dec: Decomposition,
    /// ℓ, indexed by canonical vertex; `NIL` elsewhere.
    pub ell: Vec<VertexId>,
    pub stats: EngineStats,
    pub last: LastUpdate,
    strongly_connected: bool,
    /// Visit every vertex reaching x instead of jumping over loop covers.
    pub full_search: bool,
}

fn lvl(dec: &Decomposition, v: VertexId) -> i64 {
    if v == NIL {
        -1
    } else {
        dec.level[v] as i64
    }
}

fn canon(dec: &Decomposition, v: VertexId) -> VertexId {
    if v == NIL {
        NIL
    } else {
        dec.canonical[v]
    }
}

impl FlowEngine {
    /// Builds D, the decomposition, a loop nesting forest H, and L by
    /// contracting H.
    pub fn initialize(g: &Digraph, dir: Dir, start: VertexId, strongly_connected: bool) -> FlowEngine {
        let dom = DomTree::build(g, dir, start);
        let dec = Decomposition::build(g, &dom, strongly_connected);
        let ell = contract_loops(g, &dom, &dec);
        FlowEngine {
            stats: EngineStats {
                l_affected_segment: vec![0; g.n()],
                ..Default::default()
            },
            dom,
            dec,
            ell,
            last: LastUpdate::default(),
            strongly_connected,
            full_search: false,
        }
    }

    pub fn dir(&self) -> Dir {
        self.dom.dir
    }

    pub fn start(&self) -> VertexId {
        self.dom.start
    }

    fn restart(&mut self, g: &Digraph) {
        let stats = std::mem::take(&mut self.stats);
        let full = self.full_search;
        *self = FlowEngine::initialize(g, self.dom.dir, self.dom.start, self.strongly_connected);
        self.full_search = full;
        self.stats = EngineStats {
            restarts: stats.restarts + 1,
            l_affected_segment: vec![0; g.n()],
            ..stats
        };
    }

    /// Handles an edge already added to `g`. Returns true on a restart.
    pub fn insert(&mut self, g: &Digraph, edge: Edge) -> bool {
        self.stats.insertions += 1;
        let report = self.dom.insert(g, edge);
        self.last = LastUpdate {
            report: report.clone(),
            ry: NIL,
            ..Default::default()
        };
        if report.noop {
            return false;
        }
        if report.rebuilt || !report.locally_canceled.is_empty() {
            self.restart(g);
            self.last.restarted = true;
            self.last.report = report;
            return true;
        }
        self.stats.scanned_total += report.scanned.len();
        self.stats.affected_total += report.affected.len();
        let old_dec = self.dec.clone();
        let changed = self.dec.update(g, &self.dom, &report);
        let (x, y) = self.dom.dir.orient(edge);
        self.update_ell(g, x, y, &report, &old_dec, changed);
        false
    }

    fn update_ell(
        &mut self,
        g: &Digraph,
        x: VertexId,
        y: VertexId,
        report: &UpdateReport,
        old: &Decomposition,
        changed: bool,
    ) {
        let n = self.dom.n();
        let t = &self.dom;
        let dec = &self.dec;
        let ell_old = std::mem::take(&mut self.ell);
        // default: every component keeps the component of its old parent
        let mut ell_new = if changed {
            (0..n)
                .map(|v| {
                    if dec.canonical[v] != v {
                        return NIL;
                    }
                    canon(dec, ell_old[old.canonical[v]])
                })
                .collect()
        } else {
            ell_old.clone()
        };
        let ry = dec.root[y];
        let yc = dec.canonical[y];
        let in_ry = |v: VertexId| t.is_ancestor(ry, v);
        // old L-chain from the old canonical vertex of v, self included
        let chain_find = |v: VertexId, pred: &dyn Fn(VertexId) -> bool| -> VertexId {
            let mut w = old.canonical[v];
            while w != NIL {
                if pred(w) {
                    return w;
                }
                w = ell_old[w];
            }
            NIL
        };
        let mut writes: Vec<(VertexId, VertexId)> = Vec::new();

        // parent of y's component
        let ly = canon(dec, chain_find(y, &|w| !in_ry(w)));
        writes.push((yc, ly));

        let mut scanned = vec![false; n];
        let mut comp_scanned = vec![false; n];
        for &v in &report.scanned {
            scanned[v] = true;
            comp_scanned[dec.canonical[v]] = true;
        }

        if !report.scanned.is_empty() {
            let view = g.view(t.dir);
            let hs = LoopForest::build(view, y, Some(&scanned));
            // top of each vertex within its own decomposition tree in H_scanned
            let mut top = vec![NIL; n];
            for v in hs.h_preorder() {
                let h = hs.h[v];
                top[v] = if h != NIL && dec.root[h] == dec.root[v] {
                    top[h]
                } else {
                    v
                };
            }
            // scanned vertices that reach y's component inside G'[S]
            let mut reach_y = vec![false; n];
            let mut stack = Vec::new();
            for &v in &report.scanned {
                if view.succ(v).iter().any(|&w| dec.canonical[w] == yc) || dec.canonical[v] == yc {
                    reach_y[v] = true;
                    stack.push(v);
                }
            }
            while let Some(v) = stack.pop() {
                for &u in view.pred(v) {
                    if scanned[u] && !reach_y[u] {
                        reach_y[u] = true;
                        stack.push(u);
                    }
                }
            }
            let ry_level = dec.level[ry] as i64;
            for &v in &report.scanned {
                let vc = dec.canonical[v];
                if dec.root[v] == ry {
                    if vc != yc {
                        let w = chain_find(v, &|w| !in_ry(w));
                        writes.push((vc, canon(dec, w)));
                    }
                    continue;
                }
                let cand = if top[v] == NIL { NIL } else { hs.h[top[v]] };
                if cand != NIL && dec.root[cand] != ry {
                    writes.push((vc, dec.canonical[cand]));
                } else if reach_y[v] && in_ry(v) {
                    writes.push((vc, yc));
                } else {
                    let w = chain_find(v, &|w| lvl(dec, w) <= ry_level);
                    writes.push((vc, canon(dec, w)));
                }
            }
        }
        for &(v, p) in &writes {
            ell_new[v] = p;
        }

        // L-affected vertices outside S: backward search from x inside D'(r'_y)
        let mut touched: Vec<VertexId> = Vec::new();
        if in_ry(x) {
            let y_parent_level = lvl(dec, ly);
            let ry_level = dec.level[ry];
            let mut visited = vec![false; n];
            let mut stack = vec![x];
            visited[x] = true;
            let view = g.view(t.dir);
            while let Some(v) = stack.pop() {
                let vc = dec.canonical[v];
                let expand = if scanned[v] || comp_scanned[vc] || vc == yc {
                    true
                } else {
                    let lo = ell_old[old.canonical[v]];
                    let default = canon(dec, lo);
                    let nv = if dec.root[v] == ry {
                        if lo == NIL || lvl(dec, lo) < y_parent_level {
                            ly
                        } else {
                            default
                        }
                    } else {
                        let q = self.bridge_below(v, ry_level + 1);
                        let p = t.parent[q];
                        let cp = dec.canonical[p];
                        if cp == yc {
                            if lo == NIL || lvl(dec, lo) < lvl(dec, cp) {
                                cp
                            } else {
                                default
                            }
                        } else if lo == NIL || lvl(dec, lo) < y_parent_level {
                            ly
                        } else {
                            default
                        }
                    };
                    if nv != default {
                        if ell_new[vc] != nv {
                            touched.push(vc);
                        }
                        ell_new[vc] = nv;
                        true
                    } else if self.full_search {
                        true
                    } else if dec.root[v] != ry {
                        // jump over the loop cover to the tail of its bridge
                        if let Some(p) = self.loop_cover_tail(v, &ell_old, old, &in_ry) {
                            if !visited[p] {
                                visited[p] = true;
                                stack.push(p);
                            }
                        }
                        false
                    } else {
                        false
                    }
                };
                if expand {
                    for &u in view.pred(v) {
                        if !visited[u] && in_ry(u) {
                            visited[u] = true;
                            stack.push(u);
                        }
                    }
                }
            }
        }
        touched.sort_unstable();
        touched.dedup();
        for &v in &touched {
            self.stats.l_affected_segment[v] += 1;
        }
        self.stats.l_affected_not_scanned_total += touched.len();

        let l_changed: Vec<VertexId> = (0..n)
            .filter(|&v| dec.canonical[v] == v)
            .filter(|&v| ell_new[v] != canon(dec, ell_old[old.canonical[v]]))
            .collect();
        self.last.ry = ry;
        self.last.l_changed = l_changed;
        self.ell = ell_new;
    }

    /// Head q of the bridge at level `level` on the dominator path to v.
    fn bridge_below(&self, v: VertexId, level: usize) -> VertexId {
        let dec = &self.dec;
        let mut q = dec.root[v];
        while dec.level[q] > level {
            q = dec.root[self.dom.parent[q]];
        }
        q
    }

    /// Tail p = d'(q) of the loop-cover bridge (p,q) of v, if any.
    fn loop_cover_tail(
        &self,
        v: VertexId,
        ell_old: &[VertexId],
        old: &Decomposition,
        in_ry: &dyn Fn(VertexId) -> bool,
    ) -> Option<VertexId> {
        let w = old.canonical[v];
        if ell_old[w] == NIL || !in_ry(ell_old[w]) {
            return None;
        }
        let mut lmin = ell_old[w];
        while ell_old[lmin] != NIL && in_ry(ell_old[lmin]) {
            lmin = ell_old[lmin];
        }
        let q = self.bridge_below(v, self.dec.level[lmin] + 1);
        Some(self.dom.parent[q])
    }

    /// Loop cover of every canonical vertex relative to the scope of the
    /// last insertion (the whole graph after initialization).
    pub fn loop_covers(&self) -> Vec<VertexId> {
        let n = self.dom.n();
        let ry = if self.last.ry == NIL {
            self.dom.start
        } else {
            self.last.ry
        };
        let in_ry = |v: VertexId| self.dom.is_ancestor(ry, v);
        (0..n)
            .map(|w| {
                if self.dec.canonical[w] != w || !in_ry(w) || self.ell[w] == NIL || !in_ry(self.ell[w]) {
                    return NIL;
                }
                let mut lmin = self.ell[w];
                while self.ell[lmin] != NIL && in_ry(self.ell[lmin]) {
                    lmin = self.ell[lmin];
                }
                self.bridge_below(w, self.dec.level[lmin] + 1)
            })
            .collect()
    }
}

/// L from a loop nesting forest: ℓ(c_v) = c of the H-parent of the top of
/// v's decomposition tree in H.
pub fn contract_loops(g: &Digraph, t: &DomTree, dec: &Decomposition) -> Vec<VertexId> {
    let n = t.n();
    let h = LoopForest::build(g.view(t.dir), t.start, None);
    let mut top = vec![NIL; n];
    let mut ell = vec![NIL; n];
    for v in h.h_preorder() {
        if !t.contains(v) {
            continue;
        }
        let p = h.h[v];
        top[v] = if p != NIL && dec.root[p] == dec.root[v] {
            top[p]
        } else {
            v
        };
        let c = dec.canonical[v];
        if c == v && dec.root[v] != t.start {
            let hp = h.h[top[v]];
            ell[v] = if hp == NIL { NIL } else { dec.canonical[hp] };
        }
    }
    ell
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn engine(n: usize, e: &[Edge]) -> (Digraph, FlowEngine) {
        let g = Digraph::from_edges(n, e).unwrap();
        let f = FlowEngine::initialize(&g, Dir::Forward, 0, true);
        (g, f)
    }

    fn g3() -> Vec<Edge> {
        vec![(0, 1), (1, 2), (2, 0), (1, 3), (3, 4), (4, 1)]
    }

    #[test]
    fn initialize_examples() {
        let (_, f) = engine(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(f.ell, vec![NIL, 0, 0]);
        let (_, f) = engine(5, &g3());
        assert_eq!(f.ell, vec![NIL, 0, 0, 1, 1]);
        let (_, f) = engine(1, &[]);
        assert_eq!(f.ell, vec![NIL]);
    }

    #[test]
    fn g5_restarts() {
        let (mut g, mut f) = engine(4, &[(0, 1), (1, 2), (1, 3), (2, 0), (3, 0)]);
        g.insert_edge(3, 2).unwrap();
        assert!(f.insert(&g, (3, 2)));
        assert_eq!(f.stats.restarts, 1);
    }

    #[test]
    fn g3_back_edge_moves_two() {
        let (mut g, mut f) = engine(5, &g3());
        g.insert_edge(2, 1).unwrap();
        assert!(!f.insert(&g, (2, 1)));
        assert!(f.last.report.affected.is_empty());
        assert_eq!(f.ell[2], 1);
        assert_eq!(f.ell[3], 1);
        assert_eq!(f.ell[4], 1);
    }

    #[test]
    fn g3_inner_edge_forms_loop() {
        let (mut g, mut f) = engine(5, &g3());
        g.insert_edge(4, 3).unwrap();
        f.insert(&g, (4, 3));
        assert_eq!(f.ell[4], 3);
        assert_eq!(f.ell, oracle::decomposition(&g, 0).ell);
    }

    #[test]
    fn g4_merges_component() {
        let (mut g, mut f) = engine(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 1)]);
        g.insert_edge(1, 3).unwrap();
        assert!(!f.insert(&g, (1, 3)));
        assert_eq!(f.last.report.scanned, vec![3]);
        assert_eq!(f.dec.canonical[3], 1);
        assert_eq!(f.ell[2], 1);
    }

    #[test]
    fn loop_cover_at_initialization() {
        let (_, f) = engine(5, &g3());
        assert_eq!(f.loop_covers()[4], 1);
        assert_eq!(f.loop_covers()[3], 1);
        assert_eq!(f.loop_covers()[0], NIL);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn workload() -> impl Strategy<Value = (usize, Vec<usize>, Vec<Edge>)> {
            (2usize..13).prop_flat_map(|n| {
                (
                    Just(n),
                    Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                    prop::collection::vec((0..n, 0..n), 0..40),
                )
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(500))]
            #[test]
            fn matches_oracle_after_every_insertion((n, perm, extra) in workload(), rev in any::<bool>(), full in any::<bool>()) {
                let cycle: Vec<Edge> = (0..n).map(|i| (perm[i], perm[(i + 1) % n])).collect();
                let mut g = Digraph::from_edges(n, &cycle).unwrap();
                let dir = if rev { Dir::Reverse } else { Dir::Forward };
                let s = perm[0];
                let mut f = FlowEngine::initialize(&g, dir, s, true);
                f.full_search = full;
                let oracle_ell = |g: &Digraph| {
                    let og = if rev { g.reversed() } else { g.clone() };
                    oracle::decomposition(&og, s).ell
                };
                prop_assert_eq!(&f.ell, &oracle_ell(&g));
                for (x, y) in extra {
                    if !g.insert_edge(x, y).unwrap() {
                        continue;
                    }
                    let restarted = f.insert(&g, (x, y));
                    let want = oracle_ell(&g);
                    prop_assert_eq!(&f.ell, &want, "after ({}, {}) restarted={}", x, y, restarted);
                    if !restarted && f.last.ry != NIL {
                        for &v in &f.last.l_changed {
                            prop_assert!(f.dom.is_ancestor(f.last.ry, v));
                        }
                    }
                    for v in 0..n {
                        prop_assert!(f.stats.l_affected_segment[v] < n.max(2));
                    }
                }
            }
        }
    }
}
