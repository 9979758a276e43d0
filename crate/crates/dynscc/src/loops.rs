//! Loop nesting forest of a flow graph relative to a depth-first search,
//! built with union-find in reverse preorder.

use crate::decomposition::Decomposition;
use crate::graph::{VertexId, View, NIL};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopForest {
    /// Parent in H, `NIL` for roots and unvisited vertices.
    pub h: Vec<VertexId>,
    pub dfs_parent: Vec<VertexId>,
    pub pre: Vec<usize>,
    /// Visited vertices in DFS preorder.
    pub order: Vec<VertexId>,
    size: Vec<usize>,
}

impl LoopForest {
    /// DFS from `root` in adjacency order over vertices allowed by `mask`
    /// (all vertices when `None`), then loop detection per header.
    pub fn build(view: View<'_>, root: VertexId, mask: Option<&[bool]>) -> LoopForest {
        let n = view.n();
        let allowed = |v: VertexId| mask.is_none_or(|m| m[v]);
        let mut pre = vec![NIL; n];
        let mut size = vec![0; n];
        let mut dfs_parent = vec![NIL; n];
        let mut order = Vec::new();
        let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
        pre[root] = 0;
        order.push(root);
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            let succ = view.succ(v);
            if *i < succ.len() {
                let w = succ[*i];
                *i += 1;
                if allowed(w) && pre[w] == NIL {
                    pre[w] = order.len();
                    order.push(w);
                    dfs_parent[w] = v;
                    stack.push((w, 0));
                }
            } else {
                size[v] = order.len() - pre[v];
                stack.pop();
            }
        }

        let desc = |u: VertexId, w: VertexId| pre[w] != NIL && pre[u] <= pre[w] && pre[w] < pre[u] + size[u];
        let mut dsu: Vec<VertexId> = (0..n).collect();
        let mut h = vec![NIL; n];
        // tails of edges entering each collapsed set from outside it
        let mut tails: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for &v in &order {
            tails[v] = view.pred(v).iter().copied().filter(|&w| pre[w] != NIL).collect();
        }
        let mut in_body = vec![false; n];
        let mut body = Vec::new();
        let mut work = Vec::new();
        for &u in order.iter().rev() {
            let mut keep = Vec::new();
            let own = std::mem::take(&mut tails[u]);
            absorb(u, own, &desc, &mut dsu, &mut in_body, &mut work, &mut keep);
            while let Some(z) = work.pop() {
                body.push(z);
                let list = std::mem::take(&mut tails[z]);
                absorb(u, list, &desc, &mut dsu, &mut in_body, &mut work, &mut keep);
            }
            for z in body.drain(..) {
                in_body[z] = false;
                dsu[z] = u;
                h[z] = u;
            }
            tails[u] = keep;
        }
        LoopForest {
            h,
            dfs_parent,
            pre,
            order,
            size,
        }
    }

    pub fn visited(&self, v: VertexId) -> bool {
        self.pre[v] != NIL
    }

    pub fn is_dfs_descendant(&self, u: VertexId, w: VertexId) -> bool {
        self.visited(w) && self.pre[u] <= self.pre[w] && self.pre[w] < self.pre[u] + self.size[u]
    }

    /// Vertices of H in preorder (children by DFS preorder).
    pub fn h_preorder(&self) -> Vec<VertexId> {
        let n = self.h.len();
        let mut kids: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for &v in &self.order {
            if self.h[v] == NIL {
                roots.push(v);
            } else {
                kids[self.h[v]].push(v);
            }
        }
        let mut out = Vec::with_capacity(self.order.len());
        for r in roots {
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                out.push(v);
                stack.extend(kids[v].iter().rev());
            }
        }
        out
    }

    /// The H-ancestor of v inside v's decomposition tree whose H-parent
    /// leaves that tree; the start vertex for members of the top tree.
    pub fn head_in_tree(&self, dec: &Decomposition, start: VertexId, v: VertexId) -> VertexId {
        let r = dec.root[v];
        if r == start {
            return start;
        }
        let mut x = v;
        while self.h[x] != NIL && dec.root[self.h[x]] == r {
            x = self.h[x];
        }
        x
    }
}

fn find(dsu: &mut [VertexId], v: VertexId) -> VertexId {
    let mut r = v;
    while dsu[r] != r {
        r = dsu[r];
    }
    let mut x = v;
    while dsu[x] != r {
        let next = dsu[x];
        dsu[x] = r;
        x = next;
    }
    r
}

/// Pulls the tails that lie below header `u` into its body; the rest stay
/// on `u`'s list for enclosing headers.
fn absorb(
    u: VertexId,
    list: Vec<VertexId>,
    desc: &impl Fn(VertexId, VertexId) -> bool,
    dsu: &mut [VertexId],
    in_body: &mut [bool],
    work: &mut Vec<VertexId>,
    keep: &mut Vec<VertexId>,
) {
    for w in list {
        if !desc(u, w) {
            keep.push(w);
            continue;
        }
        let r = find(dsu, w);
        if r != u && !in_body[r] {
            in_body[r] = true;
            work.push(r);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Digraph, Dir, Edge};
    use crate::oracle;

    fn forest(n: usize, e: &[Edge]) -> LoopForest {
        let g = Digraph::from_edges(n, e).unwrap();
        LoopForest::build(g.view(Dir::Forward), 0, None)
    }

    #[test]
    fn examples() {
        assert_eq!(forest(3, &[(0, 1), (1, 2), (2, 0)]).h, vec![NIL, 0, 0]);
        assert_eq!(
            forest(5, &[(0, 1), (1, 2), (2, 0), (1, 3), (3, 4), (4, 1)]).h,
            vec![NIL, 0, 0, 1, 1]
        );
        assert_eq!(forest(3, &[(0, 1), (0, 2)]).h, vec![NIL; 3]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn matches_restricted_backward_search(
                (n, edges, mask) in (2usize..10).prop_flat_map(|n| (
                    Just(n),
                    prop::collection::vec((0..n, 0..n), 0..35),
                    prop::collection::vec(any::<bool>(), n),
                )),
                rev in any::<bool>(),
            ) {
                let g = Digraph::from_edges(n, &edges).unwrap();
                let mut mask = mask;
                mask[0] = true;
                let (dir, og) = if rev { (Dir::Reverse, g.reversed()) } else { (Dir::Forward, g.clone()) };
                let lf = LoopForest::build(g.view(dir), 0, Some(&mask));
                let o = oracle::loop_forest(&og, 0, &mask);
                prop_assert_eq!(&lf.dfs_parent, &o.dfs_parent);
                prop_assert_eq!(&lf.h, &o.h);
            }
        }
    }
}
