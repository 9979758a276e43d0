//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use dynscc::hyperloop::FlowEngine;
use dynscc::oracle;
use dynscc::partition::Manager;
use dynscc::query::{hat_parents, mirror_graph, FailureIndex};
use dynscc::twovcc::{vertex_resilient_forest, PairAnswer};
use dynscc::{Digraph, Edge, VertexId, NIL};
use dynscc_cli::bench::bench;
use dynscc_cli::generate::{edges, generate, Model, Params};
use dynscc_cli::script::Command;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORKLOADS: u64 = 500;
const BIG_N: usize = 1000;
const BIG_M: usize = 20000;
const BIG_SEED: u64 = 2024;
/// The baseline rebuilds after every STRIDE-th insertion of the big
/// workload and its time is scaled up to all insertions.
const STRIDE: usize = 200;

/// First failure of one criterion plus a running tally of checks.
#[derive(Default)]
struct Verdict {
    checks: u64,
    failure: Option<String>,
}

impl Verdict {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, got: T, want: T, what: impl FnOnce() -> String) {
        self.checks += 1;
        if got != want && self.failure.is_none() {
            self.failure = Some(format!("{}: got {got:?}, want {want:?}", what()));
        }
    }

    fn line(&self, id: usize, name: &str, detail: String) -> bool {
        match &self.failure {
            None => println!("criterion {id} {name}: PASS ({detail})"),
            Some(f) => println!("criterion {id} {name}: FAIL ({f})"),
        }
        self.failure.is_none()
    }
}

fn workload(i: u64) -> (usize, Vec<Edge>) {
    let mut rng = ChaCha8Rng::seed_from_u64(i);
    let n = rng.gen_range(3..=12);
    let m = rng.gen_range(1..=30).min(n * (n - 1));
    let model = if i.is_multiple_of(2) {
        Model::Uniform
    } else {
        Model::CycleFirst
    };
    (n, edges(n, m, model, &mut rng).expect("m fits"))
}

fn comp_ids(n: usize, sets: &[Vec<VertexId>]) -> Vec<usize> {
    let mut id = vec![NIL; n];
    for (i, s) in sets.iter().enumerate() {
        for &v in s {
            id[v] = i;
        }
    }
    id
}

fn sizes(sets: &[Vec<VertexId>]) -> (usize, usize, usize) {
    let max = sets.iter().map(Vec::len).max().unwrap_or(0);
    let min = sets.iter().map(Vec::len).min().unwrap_or(0);
    (sets.len(), max, min)
}

/// The four flow engines of an index with the graphs they run on.
fn engines<'a>(ix: &'a FailureIndex, local: &Digraph) -> Vec<(&'static str, &'a FlowEngine, Digraph)> {
    let mg = mirror_graph(local);
    vec![
        ("base forward", &ix.base.fwd, local.clone()),
        ("base reverse", &ix.base.rev, local.reversed()),
        ("mirror forward", &ix.mirror.fwd, mg.clone()),
        ("mirror reverse", &ix.mirror.rev, mg.reversed()),
    ]
}

fn check_state(v: &mut Verdict, ix: &FailureIndex, local: &Digraph, tag: &dyn Fn() -> String) {
    for (name, f, og) in engines(ix, local) {
        let o = oracle::decomposition(&og, f.start());
        let mut bridges = f.dom.bridges();
        bridges.sort_unstable();
        let mut want_bridges = o.bridges.clone();
        want_bridges.sort_unstable();
        v.eq(&f.dom.parent, &o.parent, || {
            format!("{}: {name} dominator parents", tag())
        });
        v.eq(bridges, want_bridges, || format!("{}: {name} bridges", tag()));
        v.eq(&f.dec.level, &o.level, || format!("{}: {name} levels", tag()));
        v.eq(&f.dec.root, &o.root, || {
            format!("{}: {name} decomposition roots", tag())
        });
        v.eq(&f.dec.canonical, &o.canonical, || {
            format!("{}: {name} auxiliary components", tag())
        });
        v.eq(&f.ell, &o.ell, || format!("{}: {name} hyperloop parents", tag()));
    }
}

fn check_queries(v: &mut Verdict, m: &Manager, tag: &dyn Fn() -> String) {
    let g = m.graph();
    let n = g.n();
    let base = comp_ids(n, &oracle::sccs(g));
    let mut separating: Vec<Vec<Vec<Edge>>> = vec![vec![Vec::new(); n]; n];
    for &e in g.edges() {
        let fl = oracle::failure_edge(g, e);
        let id = comp_ids(n, &fl);
        let s = m.edge_summary(e).expect("edge exists");
        v.eq((s.count, s.max, s.min), sizes(&fl), || {
            format!("{}: summary under edge {e:?}", tag())
        });
        v.eq(m.edge_list(e).expect("edge exists"), fl.clone(), || {
            format!("{}: list under edge {e:?}", tag())
        });
        for a in 0..n {
            for b in 0..n {
                let want = a == b || id[a] == id[b];
                let got = m.edge_connected(a, b, e).expect("valid ids");
                v.eq(got, want, || format!("{}: connected({a},{b}) under edge {e:?}", tag()));
                if a != b && base[a] == base[b] && id[a] != id[b] {
                    separating[a][b].push(e);
                }
            }
        }
    }
    for (a, row) in separating.iter_mut().enumerate() {
        for (b, want) in row.iter_mut().enumerate() {
            want.sort_unstable();
            v.eq(
                m.separating_edges(a, b).expect("valid ids"),
                std::mem::take(want),
                || format!("{}: separating edges of ({a},{b})", tag()),
            );
        }
    }
    let mut cut: Vec<Vec<Vec<VertexId>>> = vec![vec![Vec::new(); n]; n];
    for x in 0..n {
        let fl = oracle::failure_vertex(g, x);
        let id = comp_ids(n, &fl);
        let s = m.vertex_summary(x).expect("valid id");
        v.eq((s.count, s.max, s.min), sizes(&fl), || {
            format!("{}: summary under vertex {x}", tag())
        });
        v.eq(m.vertex_list(x).expect("valid id"), fl.clone(), || {
            format!("{}: list under vertex {x}", tag())
        });
        for a in 0..n {
            for b in 0..n {
                let want = a != x && b != x && (a == b || id[a] == id[b]);
                let got = m.vertex_connected(a, b, x).expect("valid ids");
                v.eq(got, want, || format!("{}: connected({a},{b}) under vertex {x}", tag()));
                if a != b && a != x && b != x && base[a] == base[b] && id[a] != id[b] {
                    cut[a][b].push(x);
                }
            }
        }
    }
    for (a, row) in cut.iter_mut().enumerate() {
        for (b, want) in row.iter_mut().enumerate() {
            v.eq(
                m.separating_vertices(a, b).expect("valid ids"),
                std::mem::take(want),
                || format!("{}: separating vertices of ({a},{b})", tag()),
            );
        }
    }
}

fn subtree_sets(parent: &[VertexId]) -> Vec<Vec<bool>> {
    let n = parent.len();
    (0..n)
        .map(|z| {
            (0..n)
                .map(|w| {
                    let mut u = w;
                    while u != NIL {
                        if u == z {
                            return true;
                        }
                        u = parent[u];
                    }
                    false
                })
                .collect()
        })
        .collect()
}

fn laminar(family: &[Vec<bool>]) -> bool {
    let sub = |a: &Vec<bool>, b: &Vec<bool>| a.iter().zip(b).all(|(&x, &y)| !x || y);
    family.iter().enumerate().all(|(i, a)| {
        family[i + 1..].iter().all(|b| {
            let meet = a.iter().zip(b).any(|(&x, &y)| x && y);
            !meet || sub(a, b) || sub(b, a)
        })
    })
}

fn check_structure(v: &mut Verdict, ix: &FailureIndex, local: &Digraph, tag: &dyn Fn() -> String) {
    for (name, f, og) in engines(ix, local) {
        let k = og.n();
        let t = &f.dom;
        let hat = hat_parents(f);
        let h = oracle::loop_forest(&og, f.start(), &vec![true; k]).h;
        let hat_sets = subtree_sets(&hat);
        let h_sets = subtree_sets(&h);
        // Ĥ and H give the same SCC families below every bridge
        for (_, q) in t.bridges() {
            let inside = |z: VertexId| t.is_ancestor(q, z);
            let family = |p: &[VertexId], sets: &[Vec<bool>]| {
                let mut fam: Vec<Vec<bool>> = (0..k)
                    .filter(|&z| inside(z) && (p[z] == NIL || !inside(p[z])))
                    .map(|z| sets[z].clone())
                    .collect();
                fam.sort();
                fam
            };
            v.eq(family(&hat, &hat_sets), family(&h, &h_sets), || {
                format!("{}: {name} Ĥ and H families below bridge into {q}", tag())
            });
        }
        // every L-ancestor chain visits each level at most once
        for c in (0..k).filter(|&c| f.dec.canonical[c] == c) {
            let mut seen = Vec::new();
            let mut u = c;
            while u != NIL {
                seen.push(f.dec.level[u]);
                u = f.ell[u];
            }
            let len = seen.len();
            seen.sort_unstable();
            seen.dedup();
            v.eq(seen.len(), len, || {
                format!("{}: {name} levels on the L chain of {c}", tag())
            });
        }
        // hyperloops: vertex sets of L-subtrees, expanded to whole components
        let ell_all: Vec<VertexId> = (0..k)
            .map(|u| {
                if f.dec.canonical[u] == u {
                    f.ell[u]
                } else {
                    f.dec.canonical[u]
                }
            })
            .collect();
        let hloops: Vec<Vec<bool>> = subtree_sets(&ell_all)
            .into_iter()
            .enumerate()
            .filter(|&(c, _)| f.dec.canonical[c] == c)
            .map(|(_, s)| s)
            .collect();
        v.check(laminar(&hloops), || {
            format!("{}: {name} hyperloops are not laminar", tag())
        });
        // SCCs of G[D(q)] over all bridges (p,q), plus those of G itself
        let mut family: Vec<Vec<bool>> = Vec::new();
        let mut heads: Vec<VertexId> = t.bridges().into_iter().map(|(_, q)| q).collect();
        heads.push(f.start());
        for q in heads {
            let mask: Vec<bool> = (0..k).map(|z| t.is_ancestor(q, z)).collect();
            for c in oracle::sccs_masked(&og, &mask, None) {
                let mut set = vec![false; k];
                for z in c {
                    set[z] = true;
                }
                family.push(set);
            }
        }
        v.check(laminar(&family), || {
            format!("{}: {name} bridge-dominated components are not laminar", tag())
        });
    }
    v.check(vertex_resilient_forest(ix).is_forest(), || {
        format!("{}: block forest has a cycle", tag())
    });
}

fn check_two_vcc(v: &mut Verdict, m: &Manager, tag: &dyn Fn() -> String) {
    let g = m.graph();
    let n = g.n();
    let comps = m.two_vccs();
    for a in 0..n {
        for b in a + 1..n {
            let want = oracle::two_vertex_connected(g, a, b);
            let together = comps.iter().any(|c| c.contains(&a) && c.contains(&b));
            v.eq(together, want, || format!("{}: 2VCC membership of ({a},{b})", tag()));
            let ans = m.two_vcc_pair(a, b).expect("distinct valid ids");
            v.eq(ans == PairAnswer::Yes, want, || {
                format!("{}: pair answer for ({a},{b}) was {ans:?}", tag())
            });
            let witnessed = match ans {
                PairAnswer::Yes => true,
                PairAnswer::Edge(e) => g.has_edge(e.0, e.1) && !oracle::connected_without_edge(g, e, a, b),
                PairAnswer::Vertex(x) => x != a && x != b && !oracle::connected_without_vertex(g, x, a, b),
                PairAnswer::Apart => !oracle::strongly_connected(g, a, b),
            };
            v.check(witnessed, || {
                format!("{}: witness {ans:?} does not separate ({a},{b})", tag())
            });
        }
    }
}

fn check_counters(v: &mut Verdict, m: &Manager, tag: &dyn Fn() -> String) {
    let n = m.n();
    for c in m.components() {
        let Some(ix) = &c.index else { continue };
        for s in [&ix.base, &ix.mirror] {
            for f in [&s.fwd, &s.rev] {
                let k = f.dom.n();
                for u in 0..k {
                    v.check(f.dom.scan_count[u] <= f.dom.segment_depth[u], || {
                        format!(
                            "{}: vertex {u} scanned {} times from depth {}",
                            tag(),
                            f.dom.scan_count[u],
                            f.dom.segment_depth[u]
                        )
                    });
                    v.check(f.stats.l_affected_segment[u] < k, || {
                        format!(
                            "{}: vertex {u} L-affected {} times on {k} vertices",
                            tag(),
                            f.stats.l_affected_segment[u]
                        )
                    });
                }
            }
        }
    }
    let seen = m.stats.strong_bridges_seen.len();
    v.check(seen <= 2 * (n - 1), || {
        format!("{}: {seen} distinct strong bridges on {n} vertices", tag())
    });
    for (u, &d) in m.stats.effective_depth.iter().enumerate() {
        v.check(d <= 4 * n, || {
            format!("{}: effective depth {d} of vertex {u} exceeds 4n", tag())
        });
    }
}

fn main() -> ExitCode {
    let mut c1 = Verdict::default();
    let mut c2 = Verdict::default();
    let mut c3 = Verdict::default();
    let mut c4 = Verdict::default();
    let t0 = Instant::now();
    let mut insertions = 0;
    for i in 0..WORKLOADS {
        let (n, es) = workload(i);
        let mut m = Manager::new(n).expect("n > 0");
        for (j, &(x, y)) in es.iter().enumerate() {
            m.insert(x, y).expect("valid edge");
            insertions += 1;
            let tag = || format!("workload {i} after insertion {j} ({x},{y})");
            for c in m.components() {
                let Some(ix) = &c.index else { continue };
                let local = m.graph().induced(&c.members);
                check_state(&mut c1, ix, &local, &tag);
                check_structure(&mut c2, ix, &local, &tag);
            }
            check_queries(&mut c1, &m, &tag);
            check_two_vcc(&mut c3, &m, &tag);
            check_counters(&mut c4, &m, &tag);
        }
    }
    let small = t0.elapsed();
    let mut ok = c1.line(
        1,
        "oracle equivalence",
        format!(
            "{WORKLOADS} workloads, {insertions} insertions, {} checks, {:.1}s",
            c1.checks,
            small.as_secs_f64()
        ),
    );
    ok &= c2.line(2, "structural invariants", format!("{} checks", c2.checks));
    ok &= c3.line(3, "2VCC equivalence", format!("{} checks", c3.checks));

    let script = generate(Params {
        n: BIG_N,
        m: BIG_M,
        seed: BIG_SEED,
        model: Model::CycleFirst,
        query_rate: 0.0,
    })
    .expect("m fits");
    let inserts: Vec<Edge> = script
        .commands()
        .filter_map(|c| match *c {
            Command::Insert(x, y) => Some((x, y)),
            Command::Query(_) => None,
        })
        .collect();

    // query locality, measured at checkpoints while the big graph fills up
    let mut c6 = Verdict::default();
    let bound = (BIG_N as f64).log2().ceil() as u64 + 8;
    let mut worst = 0;
    let mut m = Manager::new(BIG_N).expect("n > 0");
    let mut rng = ChaCha8Rng::seed_from_u64(BIG_SEED);
    let checkpoints = [BIG_N, BIG_N + 50, 2 * BIG_N, 5 * BIG_N, BIG_M];
    for (j, &(x, y)) in inserts.iter().enumerate() {
        m.insert(x, y).expect("valid edge");
        if !checkpoints.contains(&(j + 1)) {
            continue;
        }
        let mut probe_edges = m.strong_bridges();
        probe_edges.truncate(200);
        let g = m.graph();
        for _ in 0..200 {
            probe_edges.push(g.edges()[rng.gen_range(0..g.m())]);
        }
        for &e in &probe_edges {
            let (a, b) = (rng.gen_range(0..BIG_N), rng.gen_range(0..BIG_N));
            let before = m.probes();
            m.edge_connected(a, b, e).expect("valid query");
            let used = m.probes() - before;
            worst = worst.max(used);
            c6.check(used <= bound, || {
                format!(
                    "edge query ({a},{b}) under {e:?} after {} insertions used {used} probes",
                    j + 1
                )
            });
        }
        for _ in 0..400 {
            let (a, b, z) = (
                rng.gen_range(0..BIG_N),
                rng.gen_range(0..BIG_N),
                rng.gen_range(0..BIG_N),
            );
            let before = m.probes();
            m.vertex_connected(a, b, z).expect("valid query");
            let used = m.probes() - before;
            worst = worst.max(used);
            c6.check(used <= bound, || {
                format!(
                    "vertex query ({a},{b}) under {z} after {} insertions used {used} probes",
                    j + 1
                )
            });
        }
    }
    check_counters(&mut c4, &m, &|| format!("n={BIG_N} workload"));
    ok &= c4.line(4, "charging counters", format!("{} checks", c4.checks));

    let mut c5 = Verdict::default();
    let report = bench(&script, STRIDE).expect("valid script");
    c5.check(report.incremental.mul_f64(3.0) <= report.recompute, || {
        format!(
            "incremental {:.1}s vs recompute {:.1}s, speedup {:.1}x",
            report.incremental.as_secs_f64(),
            report.recompute.as_secs_f64(),
            report.speedup()
        )
    });
    ok &= c5.line(
        5,
        "incremental speedup",
        format!(
            "incremental {:.1}s, recompute {:.1}s extrapolated from {} rebuilds, speedup {:.1}x",
            report.incremental.as_secs_f64(),
            report.recompute.as_secs_f64(),
            report.sampled,
            report.speedup()
        ),
    );
    ok &= c6.line(
        6,
        "query locality",
        format!("{} queries, worst {worst} probes, bound {bound}", c6.checks),
    );

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
