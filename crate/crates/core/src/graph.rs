//! Erdős–Rényi graphs, explicit and lazy.
//!
//! Both representations decide the unordered pair `{u, v}` with the same
//! counter-based rule: a hash of `(edge_seed, min(u,v), max(u,v))` mapped to
//! `[0,1)` and compared with `p`. A pair therefore always gets the same
//! answer, and an explicit graph sampled from an edge seed is exactly the
//! graph the lazy oracle with that seed would reveal.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::model::{mix64, ModelParams};

/// Default vertex cap for [`sample_explicit`].
pub const DEFAULT_EXPLICIT_CAP: usize = 10_000;

/// Anything that can answer "is `{u, v}` an edge?".
pub trait EdgeSource {
    fn vertex_count(&self) -> usize;

    fn is_edge(&mut self, u: usize, v: usize) -> Result<bool>;
}

#[inline]
fn pair_key(u: usize, v: usize) -> u64 {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    ((lo as u64) << 32) | hi as u64
}

#[inline]
fn pair_uniform(edge_seed: u64, u: usize, v: usize) -> f64 {
    let h = mix64(edge_seed.wrapping_add(mix64(pair_key(u, v))));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_pair(n: usize, u: usize, v: usize) -> Result<()> {
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    for w in [u, v] {
        if w >= n {
            return Err(Error::UnknownVertex { vertex: w, n });
        }
    }
    Ok(())
}

/// Lazily decided adjacency for large `n`.
#[derive(Debug, Clone)]
pub struct EdgeOracle {
    n: usize,
    p: f64,
    edge_seed: u64,
    queries: u64,
}

impl EdgeOracle {
    pub fn new(params: &ModelParams, edge_seed: u64) -> Self {
        Self::with_probability(params.n, params.p, edge_seed)
    }

    pub fn with_probability(n: usize, p: f64, edge_seed: u64) -> Self {
        EdgeOracle { n, p, edge_seed, queries: 0 }
    }

    /// Number of queries answered, including repeats.
    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn query_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        check_pair(self.n, u, v)?;
        self.queries += 1;
        Ok(pair_uniform(self.edge_seed, u, v) < self.p)
    }
}

impl EdgeSource for EdgeOracle {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn is_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.query_edge(u, v)
    }
}

/// Fully materialised undirected simple graph on `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGraph {
    n: usize,
    adjacency: Vec<Vec<u32>>,
}

impl ExplicitGraph {
    pub fn empty(n: usize) -> Self {
        ExplicitGraph { n, adjacency: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list; duplicates are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            check_pair(n, u, v)?;
            g.adjacency[u].push(v as u32);
            g.adjacency[v].push(u as u32);
        }
        for list in &mut g.adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(g)
    }

    /// Samples `ER_n(p)` with the counter-based pair rule.
    pub fn sample(n: usize, p: f64, edge_seed: u64, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        if n > u32::MAX as usize {
            return Err(Error::CapExceeded { n, cap: u32::MAX as usize });
        }
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if pair_uniform(edge_seed, u, v) < p {
                    g.adjacency[u].push(v as u32);
                    g.adjacency[v].push(u as u32);
                }
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Full neighbour list of `v`, ascending.
    pub fn neighbours(&self, v: usize) -> Result<&[u32]> {
        self.adjacency
            .get(v)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownVertex { vertex: v, n: self.n })
    }

    pub fn has_edge(&self, u: usize, v: usize) -> Result<bool> {
        check_pair(self.n, u, v)?;
        Ok(self.adjacency[u].binary_search(&(v as u32)).is_ok())
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter().map(|&v| v as usize).filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// Writes the `n=<count>` header and one `u v` line per edge.
    pub fn dump<W: Write>(&self, mut out: W) -> Result<()> {
        let mut buf = String::new();
        writeln!(buf, "n={}", self.n).unwrap();
        for (u, v) in self.edges() {
            writeln!(buf, "{u} {v}").unwrap();
        }
        out.write_all(buf.as_bytes())?;
        Ok(())
    }

    pub fn load<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))??;
        let n: usize = header
            .trim()
            .strip_prefix("n=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => return Err(Error::Parse(format!("bad edge line {line:?}"))),
            }
        }
        Self::from_edges(n, &edges)
    }
}

impl EdgeSource for ExplicitGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn is_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.has_edge(u, v)
    }
}

/// Samples the explicit graph for `params` with the default cap.
pub fn sample_explicit(params: &ModelParams, edge_seed: u64) -> Result<ExplicitGraph> {
    ExplicitGraph::sample(params.n, params.p, edge_seed, DEFAULT_EXPLICIT_CAP)
}

/// Run-local removal overlay over an explicit graph.
#[derive(Debug, Clone)]
pub struct LiveGraph<'g> {
    graph: &'g ExplicitGraph,
    removed: Vec<bool>,
    live: usize,
}

impl<'g> LiveGraph<'g> {
    pub fn new(graph: &'g ExplicitGraph) -> Self {
        LiveGraph { graph, removed: vec![false; graph.n], live: graph.n }
    }

    pub fn graph(&self) -> &'g ExplicitGraph {
        self.graph
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn is_live(&self, v: usize) -> bool {
        v < self.graph.n && !self.removed[v]
    }

    pub fn remove(&mut self, v: usize) -> Result<()> {
        if v >= self.graph.n {
            return Err(Error::UnknownVertex { vertex: v, n: self.graph.n });
        }
        if !self.removed[v] {
            self.removed[v] = true;
            self.live -= 1;
        }
        Ok(())
    }

    /// Live neighbours of `v`, ascending.
    pub fn neighbourhood(&self, v: usize) -> Result<Vec<usize>> {
        if !self.is_live(v) {
            return Err(Error::UnknownVertex { vertex: v, n: self.graph.n });
        }
        Ok(self.graph.adjacency[v]
            .iter()
            .map(|&u| u as usize)
            .filter(|&u| !self.removed[u])
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::derive_params;

    fn path3() -> ExplicitGraph {
        ExplicitGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn forced_and_empty() {
        let g = ExplicitGraph::sample(2, 1.0, 9, DEFAULT_EXPLICIT_CAP).unwrap();
        assert_eq!(g.edge_count(), 1);
        let g = ExplicitGraph::sample(100, 0.0, 9, DEFAULT_EXPLICIT_CAP).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn edge_count_binomial() {
        let params = derive_params(200, 2.0, 0.5, 1.0).unwrap();
        let pairs = 19_900.0;
        let mean = pairs * params.p;
        let sd = (pairs * params.p * (1.0 - params.p)).sqrt();
        let g = sample_explicit(&params, 12345).unwrap();
        assert!((g.edge_count() as f64 - mean).abs() < 3.0 * sd, "{} vs {mean}", g.edge_count());
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            ExplicitGraph::sample(20_001, 0.01, 1, DEFAULT_EXPLICIT_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn oracle_cache_and_symmetry() {
        let mut o = EdgeOracle::with_probability(100, 0.3, 77);
        let a = o.query_edge(3, 7).unwrap();
        assert_eq!(a, o.query_edge(3, 7).unwrap());
        assert_eq!(a, o.query_edge(7, 3).unwrap());
        assert!(matches!(o.query_edge(4, 4), Err(Error::SelfLoop(4))));
        assert!(o.query_edge(4, 100).is_err());
    }

    #[test]
    fn oracle_hit_fraction() {
        let n = 1_000;
        let mut o = EdgeOracle::with_probability(n, 0.01, 5);
        let mut hits = 0u32;
        let mut count = 0u32;
        'outer: for u in 0..n {
            for v in (u + 1)..n {
                hits += o.query_edge(u, v).unwrap() as u32;
                count += 1;
                if count == 100_000 {
                    break 'outer;
                }
            }
        }
        let sd = (1e5f64 * 0.01 * 0.99).sqrt();
        assert!((hits as f64 - 1000.0).abs() < 3.0 * sd, "{hits}");
    }

    #[test]
    fn oracle_matches_explicit() {
        let params = derive_params(150, 2.0, 0.5, 1.0).unwrap();
        let g = sample_explicit(&params, 31).unwrap();
        let mut o = EdgeOracle::new(&params, 31);
        for u in 0..150 {
            for v in 0..150 {
                if u != v {
                    assert_eq!(g.has_edge(u, v).unwrap(), o.query_edge(u, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn mean_degree() {
        let params = derive_params(1000, 3.0, 0.5, 1.0).unwrap();
        let mut total = 0usize;
        let reps = 20;
        for seed in 0..reps {
            let g = sample_explicit(&params, seed).unwrap();
            total += g.edge_count() * 2;
        }
        let mean_degree = total as f64 / (reps as f64 * 1000.0);
        let expected = params.p * 999.0;
        assert!((mean_degree - expected).abs() / expected < 0.01, "{mean_degree} vs {expected}");
    }

    #[test]
    fn neighbourhood_with_removal() {
        let g = path3();
        let mut live = LiveGraph::new(&g);
        assert_eq!(live.neighbourhood(1).unwrap(), vec![0, 2]);
        live.remove(0).unwrap();
        assert_eq!(live.neighbourhood(1).unwrap(), vec![2]);
        assert!(live.neighbourhood(0).is_err());
        assert_eq!(live.live_count(), 2);

        let iso = ExplicitGraph::empty(4);
        assert!(LiveGraph::new(&iso).neighbourhood(2).unwrap().is_empty());
        assert!(LiveGraph::new(&iso).neighbourhood(9).is_err());
    }

    #[test]
    fn dump_load_roundtrip() {
        let params = derive_params(60, 2.0, 0.5, 1.0).unwrap();
        let g = sample_explicit(&params, 3).unwrap();
        let mut buf = Vec::new();
        g.dump(&mut buf).unwrap();
        assert!(buf.starts_with(b"n=60\n"));
        let h = ExplicitGraph::load(buf.as_slice()).unwrap();
        assert_eq!(g, h);
        assert!(ExplicitGraph::load("x=3\n".as_bytes()).is_err());
        assert!(ExplicitGraph::load("n=3\n0 0\n".as_bytes()).is_err());
    }
}
