//! Slow reference detectors for small instances.
//!
//! These share no code with [`crate::events`] or [`crate::cluster`]: the
//! lower oracle runs a unit-vertex-capacity max-flow from every centre
//! vertex, and the upper oracle labels clusters by breadth-first search.

use std::collections::{HashMap, VecDeque};

use crate::lattice::{BlockGeometry, Grid, OccupancySample, RectGeometry, Region};
use crate::{Error, Result};

pub const MAX_ORACLE_BLOCK_SIDE: usize = 16;
pub const MAX_ORACLE_RECT_SIDE: usize = 8;

/// Explicit undirected adjacency lists of the open subgraph.
fn open_adjacency(sample: &OccupancySample) -> Vec<Vec<usize>> {
    let grid = sample.grid();
    let n = grid.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for v in 0..n {
        let c = grid.coords(v);
        for axis in 0..3 {
            if c[axis] + 1 >= grid.dims()[axis] {
                continue;
            }
            let mut d = c;
            d[axis] += 1;
            let w = grid.index(d);
            let open = match sample.kind() {
                crate::Kind::Bond => sample.bits()[3 * v + axis],
                crate::Kind::Site => sample.bits()[v] && sample.bits()[w],
            };
            if open {
                adj[v].push(w);
                adj[w].push(v);
            }
        }
    }
    adj
}

/// Directed graph with integer capacities, augmented by depth-first search.
struct FlowGraph {
    arcs: Vec<(usize, i32)>,
    out: Vec<Vec<usize>>,
}

impl FlowGraph {
    fn new(n: usize) -> Self {
        FlowGraph {
            arcs: Vec::new(),
            out: vec![Vec::new(); n],
        }
    }

    fn arc(&mut self, from: usize, to: usize, cap: i32) {
        self.out[from].push(self.arcs.len());
        self.arcs.push((to, cap));
        self.out[to].push(self.arcs.len());
        self.arcs.push((from, 0));
    }

    fn dfs(&mut self, x: usize, sink: usize, seen: &mut [bool]) -> bool {
        if x == sink {
            return true;
        }
        seen[x] = true;
        for i in 0..self.out[x].len() {
            let e = self.out[x][i];
            let (y, cap) = self.arcs[e];
            if cap > 0 && !seen[y] && self.dfs(y, sink, seen) {
                self.arcs[e].1 -= 1;
                self.arcs[e ^ 1].1 += 1;
                return true;
            }
        }
        false
    }

    /// Ford-Fulkerson, stopping once `limit` units are found.
    fn max_flow(&mut self, source: usize, sink: usize, limit: i32) -> i32 {
        let mut flow = 0;
        while flow < limit {
            let mut seen = vec![false; self.out.len()];
            if !self.dfs(source, sink, &mut seen) {
                break;
            }
            flow += 1;
        }
        flow
    }
}

/// Reference for [`crate::events::lower_event`]: true iff some centre vertex
/// sends two units of vertex-disjoint flow to the surface.
pub fn lower_event_oracle(sample: &OccupancySample, g: &BlockGeometry) -> Result<bool> {
    if g.side() > MAX_ORACLE_BLOCK_SIDE {
        return Err(Error::OracleRefused(format!(
            "block side {} exceeds oracle limit {MAX_ORACLE_BLOCK_SIDE}",
            g.side()
        )));
    }
    if sample.grid() != g.grid() || sample.kind() != g.kind() {
        return Err(Error::Contract(
            "sample does not match block geometry".into(),
        ));
    }
    let grid = g.grid();
    let n = grid.vertex_count();
    let adj = open_adjacency(sample);
    let open_vertex = |v: usize| match sample.kind() {
        crate::Kind::Bond => true,
        crate::Kind::Site => sample.bits()[v],
    };
    let on_surface = |v: usize| grid.coords(v).iter().any(|&x| x == 0 || x == g.side() - 1);
    let in_centre = |v: usize| {
        let lo = g.side() / 4;
        let hi = 3 * g.side() / 4;
        grid.coords(v).iter().all(|&x| lo <= x && x < hi)
    };

    // Candidates must at least share a component with two surface vertices.
    let mut comp = vec![usize::MAX; n];
    let mut surface_in_comp = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX || !open_vertex(start) {
            continue;
        }
        let id = surface_in_comp.len();
        let mut hits = 0usize;
        let mut queue = VecDeque::from([start]);
        comp[start] = id;
        while let Some(x) = queue.pop_front() {
            if on_surface(x) {
                hits += 1;
            }
            for &y in &adj[x] {
                if comp[y] == usize::MAX {
                    comp[y] = id;
                    queue.push_back(y);
                }
            }
        }
        surface_in_comp.push(hits);
    }

    let sink = 2 * n;
    for v in 0..n {
        if !in_centre(v) || !open_vertex(v) || surface_in_comp[comp[v]] < 2 {
            continue;
        }
        // in(x) = 2x, out(x) = 2x + 1
        let mut net = FlowGraph::new(2 * n + 1);
        for x in 0..n {
            if comp[x] != comp[v] {
                continue;
            }
            net.arc(2 * x, 2 * x + 1, 1);
            for &y in &adj[x] {
                net.arc(2 * x + 1, 2 * y, 1);
            }
            if on_surface(x) {
                net.arc(2 * x + 1, sink, 1);
            }
        }
        if net.max_flow(2 * v + 1, sink, 2) >= 2 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// BFS cluster sizes within `region`, keyed by a representative vertex.
fn bfs_clusters(
    sample: &OccupancySample,
    adj: &[Vec<usize>],
    grid: &Grid,
    region: &Region,
) -> (Vec<Option<usize>>, HashMap<usize, usize>) {
    let n = grid.vertex_count();
    let mut rep = vec![None; n];
    let mut sizes = HashMap::new();
    for start in 0..n {
        let inside = region.contains(grid.coords(start));
        let open = match sample.kind() {
            crate::Kind::Bond => true,
            crate::Kind::Site => sample.bits()[start],
        };
        if !inside || !open || rep[start].is_some() {
            continue;
        }
        let mut size = 0;
        let mut queue = VecDeque::from([start]);
        rep[start] = Some(start);
        while let Some(x) = queue.pop_front() {
            size += 1;
            for &y in &adj[x] {
                if rep[y].is_none() && region.contains(grid.coords(y)) {
                    rep[y] = Some(start);
                    queue.push_back(y);
                }
            }
        }
        sizes.insert(start, size);
    }
    (rep, sizes)
}

/// Reference for [`crate::events::upper_event`].
pub fn upper_event_oracle(sample: &OccupancySample, r: &RectGeometry) -> Result<bool> {
    if r.side() > MAX_ORACLE_RECT_SIDE {
        return Err(Error::OracleRefused(format!(
            "rectangle side {} exceeds oracle limit {MAX_ORACLE_RECT_SIDE}",
            r.side()
        )));
    }
    if sample.grid() != r.grid() || sample.kind() != r.kind() {
        return Err(Error::Contract(
            "sample does not match rectangle geometry".into(),
        ));
    }
    let grid = r.grid();
    let adj = open_adjacency(sample);

    let unique_largest = |region: Region| -> Option<usize> {
        let (_, sizes) = bfs_clusters(sample, &adj, &grid, &region);
        let mut by_size: Vec<(usize, usize)> = sizes.into_iter().map(|(k, s)| (s, k)).collect();
        by_size.sort_unstable_by(|a, b| b.cmp(a));
        match by_size.as_slice() {
            [] => None,
            [(_, k)] => Some(*k),
            [(s0, k), (s1, _), ..] => (s0 > s1).then_some(*k),
        }
    };

    let Some(a) = unique_largest(r.half_u()) else {
        return Ok(false);
    };
    let Some(b) = unique_largest(r.half_v()) else {
        return Ok(false);
    };
    let (rep, _) = bfs_clusters(sample, &adj, &grid, &grid.full_region());
    Ok(rep[a].is_some() && rep[a] == rep[b])
}
