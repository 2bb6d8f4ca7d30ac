//! Random geometric set-covering instances in the style of safety-landing-site
//! placement: candidate sites with covering radii in the unit square, and
//! demand points taken from a random air-network graph.
//!
//! This is an analogue of the published construction, not a replica. Sites,
//! radii and cost draws come first, then the network nodes. The network joins
//! every node to its two nearest neighbours. Demand points are the nodes plus
//! (in [`DensityMode::Edges`]) points every `spacing` along each edge; a row
//! is kept for each distinct set of sites covering some demand point, so the
//! row count tracks the number of coverage patterns met along the network
//! rather than the sampling density.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::instance::ScpInstance;

/// Neighbours each network node is joined to.
const NETWORK_DEGREE: usize = 2;
const MAX_COST: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMode {
    /// Only the network nodes are demand points.
    Nodes,
    /// Nodes plus points sampled along network edges.
    Edges,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostModel {
    /// Integers uniform in `1..=100`, independent of the radius.
    Uniform,
    /// Proportional to the covered area: `100 (r / r_max)^2` scaled by a
    /// factor uniform in `[0.75, 1.25]`, rounded, at least 1.
    Area,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlsParams {
    /// Candidate sites, i.e. columns.
    pub n_sites: usize,
    /// Network nodes.
    pub n_nodes: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub seed: u64,
    pub density: DensityMode,
    /// Distance between consecutive sample points along an edge.
    pub spacing: f64,
    pub costs: CostModel,
}

impl SlsParams {
    /// Standard parameters for `n` sites: `0.3 n` nodes, radii in
    /// `[0.11, 0.19]`, uniform costs.
    pub fn with_sites(n: usize) -> Self {
        SlsParams {
            n_sites: n,
            n_nodes: ((0.3 * n as f64).round() as usize).max(1),
            r_min: 0.11,
            r_max: 0.19,
            seed: 0,
            density: DensityMode::Edges,
            spacing: 2e-4,
            costs: CostModel::Uniform,
        }
    }

    fn check(&self) -> Result<()> {
        if self.n_sites == 0 {
            return Err(Error::InvalidParams("need at least one site".into()));
        }
        if self.n_nodes == 0 {
            return Err(Error::InvalidParams("need at least one network node".into()));
        }
        if !(self.r_min > 0.0 && self.r_min <= self.r_max && self.r_max.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "radius interval [{}, {}] must satisfy 0 < r_min <= r_max",
                self.r_min, self.r_max
            )));
        }
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::InvalidParams(format!("spacing {} must be positive", self.spacing)));
        }
        Ok(())
    }
}

type Point = (f64, f64);

fn dist2(a: Point, b: Point) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

struct Layout {
    sites: Vec<Point>,
    radii: Vec<f64>,
    costs: Vec<f64>,
    demand: Vec<Point>,
}

fn layout(params: &SlsParams, stream: u64) -> Layout {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(stream);
    let n = params.n_sites;
    let sites: Vec<Point> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    // uniform draws first so radii scale monotonically with the interval
    let radii: Vec<f64> = (0..n)
        .map(|_| {
            let t: f64 = rng.gen();
            params.r_min + t * (params.r_max - params.r_min)
        })
        .collect();
    let costs = radii
        .iter()
        .map(|&r| {
            let draw: f64 = rng.gen();
            match params.costs {
                CostModel::Uniform => (1.0 + (draw * MAX_COST as f64).floor()).min(MAX_COST as f64),
                CostModel::Area => {
                    let area = (r / params.r_max).powi(2);
                    (MAX_COST as f64 * area * (0.75 + 0.5 * draw)).round().max(1.0)
                }
            }
        })
        .collect();
    let nodes: Vec<Point> = (0..params.n_nodes).map(|_| (rng.gen(), rng.gen())).collect();

    let mut demand = nodes.clone();
    if params.density == DensityMode::Edges {
        for (a, b) in network_edges(&nodes) {
            let (pa, pb) = (nodes[a], nodes[b]);
            let count = (dist2(pa, pb).sqrt() / params.spacing).floor() as usize;
            for s in 1..=count {
                let t = s as f64 / (count + 1) as f64;
                demand.push((pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1)));
            }
        }
    }
    Layout {
        sites,
        radii,
        costs,
        demand,
    }
}

/// Undirected k-nearest-neighbour graph, edges as sorted `(a, b)` pairs.
fn network_edges(nodes: &[Point]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..nodes.len() {
        let mut others: Vec<(f64, usize)> = (0..nodes.len())
            .filter(|&b| b != a)
            .map(|b| (dist2(nodes[a], nodes[b]), b))
            .collect();
        others.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for &(_, b) in others.iter().take(NETWORK_DEGREE) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Covering sets of every demand point, before empty and repeated sets are
/// dropped. Sites are bucketed on a grid of cell size `r_max`, so only the
/// 3 x 3 cells around a point need checking.
fn raw_coverage(lay: &Layout) -> Vec<Vec<usize>> {
    let reach = lay.radii.iter().copied().fold(0.0f64, f64::max).max(1e-9);
    let cells = ((1.0 / reach).ceil() as usize).clamp(1, 1024);
    let cell_of = |x: f64| ((x * cells as f64).floor().max(0.0) as usize).min(cells - 1);
    let mut grid = vec![Vec::new(); cells * cells];
    for (j, &(x, y)) in lay.sites.iter().enumerate() {
        grid[cell_of(y) * cells + cell_of(x)].push(j);
    }
    lay.demand
        .iter()
        .map(|&p| {
            let (cx, cy) = (cell_of(p.0), cell_of(p.1));
            let mut row = Vec::new();
            for gy in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
                for gx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
                    row.extend(
                        grid[gy * cells + gx]
                            .iter()
                            .copied()
                            .filter(|&j| dist2(p, lay.sites[j]) <= lay.radii[j] * lay.radii[j]),
                    );
                }
            }
            row.sort_unstable();
            row
        })
        .collect()
}

fn build(params: &SlsParams, stream: u64) -> Result<ScpInstance> {
    params.check()?;
    let lay = layout(params, stream);
    let coverage = raw_coverage(&lay);
    let total = coverage.len();
    let mut seen = HashSet::new();
    let rows: Vec<Vec<usize>> = coverage
        .into_iter()
        .filter(|r| !r.is_empty() && seen.insert(r.clone()))
        .collect();
    log::debug!(
        "sls seed {} stream {stream}: {} demand points, {} distinct covered rows",
        params.seed,
        total,
        rows.len()
    );
    if rows.is_empty() {
        return Err(Error::Degenerate);
    }
    ScpInstance::new(lay.costs, rows)
}

/// Generates one instance. Deterministic in `params`.
pub fn generate(params: &SlsParams) -> Result<ScpInstance> {
    build(params, 0)
}

/// Generates `count` instances; instance `k` uses RNG stream `k` of the base
/// seed, so `generate_batch(p, 1)[0] == generate(p)` and the batch does not
/// depend on evaluation order.
pub fn generate_batch(params: &SlsParams, count: usize) -> Result<Vec<ScpInstance>> {
    generate_batch_with(params, count, Execution::default())
}

pub fn generate_batch_with(
    params: &SlsParams,
    count: usize,
    exec: Execution,
) -> Result<Vec<ScpInstance>> {
    params.check()?;
    exec::map_range(count, exec, |k| build(params, k as u64))
        .into_iter()
        .collect()
}
