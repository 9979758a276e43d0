//! Seeded workload generation.

use std::collections::HashSet;
use std::str::FromStr;

use dynscc::{Edge, Error, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::script::{Command, Query, Script};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Distinct edges drawn uniformly at random.
    Uniform,
    /// A random Hamiltonian cycle first, then uniform edges.
    CycleFirst,
}

impl FromStr for Model {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Model, CliError> {
        match s {
            "uniform" => Ok(Model::Uniform),
            "cycle-first" => Ok(Model::CycleFirst),
            other => Err(CliError::Usage(format!(
                "unknown model `{other}` (uniform | cycle-first)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub model: Model,
    /// Expected queries emitted after each insertion.
    pub query_rate: f64,
}

/// The m distinct non-loop edges of a workload, in insertion order.
pub fn edges(n: usize, m: usize, model: Model, rng: &mut ChaCha8Rng) -> Result<Vec<Edge>, CliError> {
    let cap = n * n.saturating_sub(1);
    if m > cap {
        return Err(Error::TooManyEdges { n, m, max: cap }.into());
    }
    let mut out: Vec<Edge> = Vec::with_capacity(m);
    let mut seen: HashSet<Edge> = HashSet::with_capacity(m);
    if model == Model::CycleFirst && n >= 2 {
        let mut perm: Vec<VertexId> = (0..n).collect();
        perm.shuffle(rng);
        for i in 0..n.min(m) {
            let e = (perm[i], perm[(i + 1) % n]);
            seen.insert(e);
            out.push(e);
        }
    }
    let rest = m - out.len();
    if 2 * m > cap {
        // dense: shuffle everything that is left
        let mut pool: Vec<Edge> = (0..n)
            .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
            .filter(|e| !seen.contains(e))
            .collect();
        pool.shuffle(rng);
        out.extend(pool.into_iter().take(rest));
    } else {
        while out.len() < m {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if x != y && seen.insert((x, y)) {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

fn random_query(n: usize, inserted: &[Edge], rng: &mut ChaCha8Rng) -> Query {
    let v = |rng: &mut ChaCha8Rng| rng.gen_range(0..n);
    let kind = rng.gen_range(0..14);
    if kind < 5 && !inserted.is_empty() {
        let e = inserted[rng.gen_range(0..inserted.len())];
        return match kind {
            0 => Query::EdgeCount(e),
            1 => Query::EdgeMax(e),
            2 => Query::EdgeMin(e),
            3 => Query::EdgeList(e),
            _ => Query::EdgeConn(v(rng), v(rng), e),
        };
    }
    match kind {
        5 => Query::SepEdges(v(rng), v(rng)),
        6 => Query::VertCount(v(rng)),
        7 => Query::VertMax(v(rng)),
        8 => Query::VertMin(v(rng)),
        9 => Query::VertList(v(rng)),
        10 => Query::VertConn(v(rng), v(rng), v(rng)),
        11 => Query::SepVerts(v(rng), v(rng)),
        12 => Query::TwoVcc,
        _ if n >= 2 => {
            let a = v(rng);
            let b = (a + rng.gen_range(1..n)) % n;
            Query::TwoVccPair(a, b)
        }
        _ => Query::VertCount(v(rng)),
    }
}

/// Builds a reproducible workload: the same parameters give the same script.
pub fn generate(p: Params) -> Result<Script, CliError> {
    if p.n == 0 {
        return Err(CliError::Usage("n must be positive".into()));
    }
    if !(p.query_rate >= 0.0 && p.query_rate.is_finite()) {
        return Err(CliError::Usage(format!(
            "query rate {} must be a finite non-negative number",
            p.query_rate
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let es = edges(p.n, p.m, p.model, &mut rng)?;
    let mut script = Script::new(p.n);
    for (i, &(x, y)) in es.iter().enumerate() {
        script.push(Command::Insert(x, y));
        let mut budget = p.query_rate;
        while budget > 0.0 {
            if budget >= 1.0 || rng.gen_bool(budget) {
                script.push(Command::Query(random_query(p.n, &es[..=i], &mut rng)));
            }
            budget -= 1.0;
        }
    }
    Ok(script)
}
