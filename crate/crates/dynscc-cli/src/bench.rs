//! Incremental maintenance against rebuilding every structure from
//! scratch after each insertion.

use std::time::{Duration, Instant};

use dynscc::graph::scc;
use dynscc::partition::Manager;
use dynscc::query::FailureIndex;
use dynscc::{Digraph, Edge};

use crate::script::{Command, Script};
use crate::CliError;

#[derive(Debug, Clone, Copy)]
pub struct BenchReport {
    pub insertions: usize,
    pub incremental: Duration,
    /// Baseline time, extrapolated when only a sample was rebuilt.
    pub recompute: Duration,
    /// Insertions after which the baseline actually rebuilt.
    pub sampled: usize,
}

impl BenchReport {
    pub fn speedup(&self) -> f64 {
        self.recompute.as_secs_f64() / self.incremental.as_secs_f64().max(1e-9)
    }

    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("# bench insertions {}", self.insertions),
            format!("# bench incremental-ms {:.1}", self.incremental.as_secs_f64() * 1e3),
            format!(
                "# bench recompute-ms {:.1} (rebuilt after {} of {} insertions)",
                self.recompute.as_secs_f64() * 1e3,
                self.sampled,
                self.insertions
            ),
            format!("# bench speedup {:.1}x", self.speedup()),
        ]
    }
}

/// One from-scratch rebuild: SCCs, then a failure index per nontrivial SCC.
pub fn rebuild(g: &Digraph) -> usize {
    let p = scc(g);
    let mut built = 0;
    for c in p.components.iter().filter(|c| c.len() >= 2) {
        let ix = FailureIndex::new(g.induced(c), 0);
        built += ix.n();
    }
    built
}

fn insertions(script: &Script) -> Vec<Edge> {
    script
        .commands()
        .filter_map(|c| match *c {
            Command::Insert(x, y) => Some((x, y)),
            Command::Query(_) => None,
        })
        .collect()
}

/// Times the insertions of a script both ways. The baseline rebuilds after
/// every `stride`-th insertion and scales its time up to all of them.
pub fn bench(script: &Script, stride: usize) -> Result<BenchReport, CliError> {
    let es = insertions(script);
    let stride = stride.max(1);

    let t = Instant::now();
    let mut m = Manager::new(script.n)?;
    for &(x, y) in &es {
        m.insert(x, y)?;
    }
    let incremental = t.elapsed();

    let mut g = Digraph::new(script.n)?;
    let mut spent = Duration::ZERO;
    let mut sampled = 0;
    for (i, &(x, y)) in es.iter().enumerate() {
        g.insert_edge(x, y)?;
        if i % stride == stride - 1 || i + 1 == es.len() {
            let t = Instant::now();
            std::hint::black_box(rebuild(&g));
            spent += t.elapsed();
            sampled += 1;
        }
    }
    let recompute = if sampled == 0 {
        spent
    } else {
        spent.mul_f64(es.len() as f64 / sampled as f64)
    };
    Ok(BenchReport {
        insertions: es.len(),
        incremental,
        recompute,
        sampled,
    })
}
