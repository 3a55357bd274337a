//! Gradient descent (full neighbourhood), approximate gradient descent
//! (block-restricted neighbourhood) and a first-improvement baseline.
//!
//! Costs are revealed lazily through a [`CostSource`]; with [`StreamCosts`]
//! the k-th revealed cost is the k-th value of the [`CostStream`], whatever
//! the algorithm or the graph size.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSource, ExplicitGraph, LiveGraph};
use crate::model::{CostStream, ModelParams};

/// Read access to the costs revealed so far.
pub trait CostLookup {
    fn cost_of(&self, v: usize) -> Option<f64>;
}

/// Reveals vertex costs on first exploration.
pub trait CostSource: CostLookup {
    fn reveal(&mut self, v: usize) -> f64;

    /// Vertices revealed so far, in reveal order.
    fn revealed(&self) -> &[usize];
}

/// Costs drawn from a [`CostStream`] in reveal order.
#[derive(Debug, Clone)]
pub struct StreamCosts {
    stream: CostStream,
    order: Vec<usize>,
    values: HashMap<usize, f64>,
}

impl StreamCosts {
    pub fn new(stream: CostStream) -> Self {
        StreamCosts { stream, order: Vec::new(), values: HashMap::new() }
    }

    pub fn stream(&self) -> &CostStream {
        &self.stream
    }

    /// Revealed costs in reveal order.
    pub fn revealed_costs(&self) -> Vec<f64> {
        self.order.iter().map(|v| self.values[v]).collect()
    }
}

impl CostLookup for StreamCosts {
    fn cost_of(&self, v: usize) -> Option<f64> {
        self.values.get(&v).copied()
    }
}

impl CostSource for StreamCosts {
    fn reveal(&mut self, v: usize) -> f64 {
        if let Some(&c) = self.values.get(&v) {
            return c;
        }
        let c = self.stream.next_cost();
        self.values.insert(v, c);
        self.order.push(v);
        c
    }

    fn revealed(&self) -> &[usize] {
        &self.order
    }
}

/// A fixed per-vertex cost table, for hand-built instances.
#[derive(Debug, Clone)]
pub struct FixedCosts {
    costs: Vec<f64>,
    seen: Vec<bool>,
    order: Vec<usize>,
}

impl FixedCosts {
    pub fn new(costs: Vec<f64>) -> Self {
        let n = costs.len();
        FixedCosts { costs, seen: vec![false; n], order: Vec::new() }
    }
}

impl CostLookup for FixedCosts {
    fn cost_of(&self, v: usize) -> Option<f64> {
        self.costs.get(v).copied()
    }
}

impl CostSource for FixedCosts {
    fn reveal(&mut self, v: usize) -> f64 {
        if !self.seen[v] {
            self.seen[v] = true;
            self.order.push(v);
        }
        self.costs[v]
    }

    fn revealed(&self) -> &[usize] {
        &self.order
    }
}

/// Result of one local-search run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Block-steps (AGD, baseline) or neighbourhood scans (GD).
    pub steps: u64,
    /// Vertices visited, the start included.
    pub visits: u64,
    /// Costs revealed after the start vertex.
    pub explorations: u64,
    pub final_vertex: usize,
    pub final_cost: f64,
    pub verified_local_min: bool,
}

/// Per-step record: size of the partial neighbourhood and the current cost after the step.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchTrace {
    pub revealed_per_step: Vec<u32>,
    pub cost_after_step: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MoveRule {
    Minimum,
    FirstImproving,
}

/// Approximate gradient descent with the block size from `params`.
pub fn run_agd<G, C>(source: &mut G, params: &ModelParams, costs: &mut C, start: usize) -> Result<SearchOutcome>
where
    G: EdgeSource,
    C: CostSource,
{
    block_walk(source, params.block, costs, start, MoveRule::Minimum, None)
}

/// Approximate gradient descent with an explicit block size.
pub fn run_agd_blocks<G, C>(source: &mut G, block: usize, costs: &mut C, start: usize) -> Result<SearchOutcome>
where
    G: EdgeSource,
    C: CostSource,
{
    block_walk(source, block, costs, start, MoveRule::Minimum, None)
}

pub fn run_agd_traced<G, C>(
    source: &mut G,
    block: usize,
    costs: &mut C,
    start: usize,
) -> Result<(SearchOutcome, SearchTrace)>
where
    G: EdgeSource,
    C: CostSource,
{
    let mut trace = SearchTrace::default();
    let out = block_walk(source, block, costs, start, MoveRule::Minimum, Some(&mut trace))?;
    Ok((out, trace))
}

/// First-improvement local search: same blocks, same termination, but moves
/// to the first revealed neighbour that beats the current cost.
pub fn run_baseline<G, C>(source: &mut G, params: &ModelParams, costs: &mut C, start: usize) -> Result<SearchOutcome>
where
    G: EdgeSource,
    C: CostSource,
{
    block_walk(source, params.block, costs, start, MoveRule::FirstImproving, None)
}

pub fn run_baseline_blocks<G, C>(source: &mut G, block: usize, costs: &mut C, start: usize) -> Result<SearchOutcome>
where
    G: EdgeSource,
    C: CostSource,
{
    block_walk(source, block, costs, start, MoveRule::FirstImproving, None)
}

pub fn run_baseline_traced<G, C>(
    source: &mut G,
    block: usize,
    costs: &mut C,
    start: usize,
) -> Result<(SearchOutcome, SearchTrace)>
where
    G: EdgeSource,
    C: CostSource,
{
    let mut trace = SearchTrace::default();
    let out = block_walk(source, block, costs, start, MoveRule::FirstImproving, Some(&mut trace))?;
    Ok((out, trace))
}

fn block_walk<G, C>(
    source: &mut G,
    block: usize,
    costs: &mut C,
    start: usize,
    rule: MoveRule,
    mut trace: Option<&mut SearchTrace>,
) -> Result<SearchOutcome>
where
    G: EdgeSource,
    C: CostSource,
{
    let n = source.vertex_count();
    if start >= n {
        return Err(Error::UnknownVertex { vertex: start, n });
    }
    if block == 0 {
        return Err(Error::InvalidParameter("block size must be at least 1".into()));
    }
    let mut removed = vec![false; n];
    let mut v = start;
    let mut x = costs.reveal(v);
    let mut steps = 0u64;
    let mut visits = 1u64;
    let mut explorations = 0u64;
    let mut partial: Vec<(usize, f64)> = Vec::new();

    // One residence per iteration: sweep the live candidates in index order,
    // `block` at a time, until a jump restarts the sweep or the sweep runs out.
    'residence: loop {
        if visits > n as u64 {
            return Err(Error::ExhaustedGraph { steps });
        }
        let mut cursor = 0usize;
        loop {
            partial.clear();
            let mut scanned = 0usize;
            while scanned < block && cursor < n {
                let u = cursor;
                cursor += 1;
                if u == v || removed[u] {
                    continue;
                }
                scanned += 1;
                if source.is_edge(v, u)? {
                    partial.push((u, f64::NAN));
                }
            }
            if scanned == 0 {
                break 'residence;
            }
            steps += 1;
            for entry in partial.iter_mut() {
                entry.1 = costs.reveal(entry.0);
            }
            explorations += partial.len() as u64;

            let target = match rule {
                MoveRule::Minimum => partial
                    .iter()
                    .copied()
                    .filter(|&(_, c)| c < x)
                    .fold(None, |best: Option<(usize, f64)>, cand| match best {
                        Some(b) if b.1 <= cand.1 => Some(b),
                        _ => Some(cand),
                    }),
                MoveRule::FirstImproving => partial.iter().copied().find(|&(_, c)| c < x),
            };

            match target {
                Some((w, c)) => {
                    removed[v] = true;
                    for &(u, _) in &partial {
                        if u != w {
                            removed[u] = true;
                        }
                    }
                    v = w;
                    x = c;
                    visits += 1;
                    if let Some(t) = trace.as_deref_mut() {
                        t.revealed_per_step.push(partial.len() as u32);
                        t.cost_after_step.push(x);
                    }
                    continue 'residence;
                }
                None => {
                    for &(u, _) in &partial {
                        removed[u] = true;
                    }
                    if let Some(t) = trace.as_deref_mut() {
                        t.revealed_per_step.push(partial.len() as u32);
                        t.cost_after_step.push(x);
                    }
                }
            }
        }
    }

    let verified = revealed_neighbours_costlier(source, v, x, costs)?;
    Ok(SearchOutcome {
        steps,
        visits,
        explorations,
        final_vertex: v,
        final_cost: x,
        verified_local_min: verified,
    })
}

/// Every revealed vertex adjacent to `v` costs strictly more than `x`.
fn revealed_neighbours_costlier<G, C>(source: &mut G, v: usize, x: f64, costs: &C) -> Result<bool>
where
    G: EdgeSource,
    C: CostSource,
{
    for &u in costs.revealed() {
        if u != v && source.is_edge(v, u)? {
            match costs.cost_of(u) {
                Some(c) if c > x => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// Full gradient descent on an explicit graph.
pub fn run_gd<C: CostSource>(graph: &ExplicitGraph, costs: &mut C, start: usize) -> Result<SearchOutcome> {
    let mut live = LiveGraph::new(graph);
    let mut v = start;
    live.neighbourhood(v)?;
    let mut x = costs.reveal(v);
    let mut steps = 0u64;
    let mut visits = 1u64;
    let mut explorations = 0u64;
    loop {
        let nbrs = live.neighbourhood(v)?;
        steps += 1;
        explorations += nbrs.len() as u64;
        let mut best: Option<(usize, f64)> = None;
        for &u in &nbrs {
            let c = costs.reveal(u);
            if best.map_or(true, |b| c < b.1) {
                best = Some((u, c));
            }
        }
        match best {
            Some((w, c)) if c < x => {
                live.remove(v)?;
                for &u in &nbrs {
                    if u != w {
                        live.remove(u)?;
                    }
                }
                v = w;
                x = c;
                visits += 1;
            }
            _ => break,
        }
    }
    let verified = verify_local_min(graph, v, costs)?;
    Ok(SearchOutcome {
        steps,
        visits,
        explorations,
        final_vertex: v,
        final_cost: x,
        verified_local_min: verified,
    })
}

/// True iff `v` is strictly cheaper than each of its neighbours in `graph`.
/// A neighbour whose cost is unknown fails the check.
pub fn verify_local_min<L: CostLookup + ?Sized>(graph: &ExplicitGraph, v: usize, costs: &L) -> Result<bool> {
    let nbrs = graph.neighbours(v)?;
    let Some(own) = costs.cost_of(v) else {
        return Ok(false);
    };
    Ok(nbrs
        .iter()
        .all(|&u| costs.cost_of(u as usize).is_some_and(|c| own < c)))
}
