//! Detectors for the two block events.
//!
//! * Lower event: some centre vertex `v` of a block has two open arms to
//!   distinct surface vertices that share only `v`. Add a super-node `T`
//!   joined to every surface vertex; the event holds iff some centre vertex
//!   lies in a biconnected component together with `T` (Menger). One
//!   iterative Tarjan pass rooted at `T` decides it in linear time.
//! * Upper event: both halves of a double cube have a strictly unique
//!   largest open cluster and the two are joined inside the double cube.

use std::collections::VecDeque;

use crate::cluster::{label_clusters, label_clusters_in};
use crate::lattice::{BlockGeometry, Grid, OccupancySample, RectGeometry};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventResult {
    pub holds: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Lower(LowerWitness),
    Upper(UpperWitness),
}

/// A centre vertex and two arms from it to the surface. Each arm starts at
/// `centre` and ends at its first surface vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerWitness {
    pub centre: usize,
    pub arms: [Vec<usize>; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpperWitness {
    pub u_label: usize,
    pub u_size: usize,
    pub v_label: usize,
    pub v_size: usize,
    /// Label of the double-cube cluster containing both.
    pub joined_label: usize,
}

impl LowerWitness {
    pub fn endpoints(&self) -> [usize; 2] {
        [
            *self.arms[0].last().expect("non-empty arm"),
            *self.arms[1].last().expect("non-empty arm"),
        ]
    }
}

impl Witness {
    /// One-line description with endpoint coordinates only.
    pub fn summary(&self, grid: &Grid) -> String {
        let fmt = |v: usize| {
            let [x, y, z] = grid.coords(v);
            format!("({x},{y},{z})")
        };
        match self {
            Witness::Lower(w) => {
                let [a, b] = w.endpoints();
                format!("centre={} ends={};{}", fmt(w.centre), fmt(a), fmt(b))
            }
            Witness::Upper(w) => format!(
                "u={}#{} v={}#{} joined={}",
                fmt(w.u_label),
                w.u_size,
                fmt(w.v_label),
                w.v_size,
                fmt(w.joined_label)
            ),
        }
    }
}

fn check_block(sample: &OccupancySample, g: &BlockGeometry) -> Result<()> {
    if sample.grid() != g.grid() || sample.kind() != g.kind() {
        return Err(Error::Contract(format!(
            "sample ({:?}, {}) was not generated on block side {} ({})",
            sample.grid().dims(),
            sample.kind(),
            g.side(),
            g.kind()
        )));
    }
    Ok(())
}

fn check_rect(sample: &OccupancySample, r: &RectGeometry) -> Result<()> {
    if sample.grid() != r.grid() || sample.kind() != r.kind() {
        return Err(Error::Contract(format!(
            "sample ({:?}, {}) was not generated on rectangle side {} ({})",
            sample.grid().dims(),
            sample.kind(),
            r.side(),
            r.kind()
        )));
    }
    Ok(())
}

const UNSEEN: u32 = u32::MAX;

/// Neighbours of lattice vertices and of the surface super-node.
struct AugmentedBlock<'a> {
    sample: &'a OccupancySample,
    g: &'a BlockGeometry,
    grid: Grid,
    surface: Vec<usize>,
    terminal: usize,
}

impl<'a> AugmentedBlock<'a> {
    fn new(sample: &'a OccupancySample, g: &'a BlockGeometry) -> Self {
        let grid = g.grid();
        let surface = g
            .surface_vertices()
            .into_iter()
            .filter(|&s| sample.is_active(s))
            .collect();
        AugmentedBlock {
            sample,
            g,
            grid,
            surface,
            terminal: grid.vertex_count(),
        }
    }

    /// Advances `cursor` and returns the next neighbour of `u`, if any.
    #[inline]
    fn next_neighbor(&self, u: usize, cursor: &mut usize) -> Option<usize> {
        if u == self.terminal {
            let w = self.surface.get(*cursor).copied();
            *cursor += 1;
            return w;
        }
        while *cursor < 7 {
            let c = *cursor;
            *cursor += 1;
            if c < 6 {
                if let Some(w) = self.sample.open_neighbor(u, c) {
                    return Some(w);
                }
            } else if self.sample.is_active(u) && self.g.is_surface(self.grid.coords(u)) {
                return Some(self.terminal);
            }
        }
        None
    }

    /// Vertices of the first biconnected component containing both the
    /// super-node and a centre vertex, plus the smallest such centre vertex.
    fn find_component(&self) -> Option<(usize, Vec<usize>)> {
        let t = self.terminal;
        let mut disc = vec![UNSEEN; t + 1];
        let mut low = vec![UNSEEN; t + 1];
        let mut vstack: Vec<usize> = Vec::new();
        // (vertex, parent, neighbour cursor)
        let mut frames: Vec<(usize, usize, usize)> = Vec::new();
        let mut clock = 0u32;

        disc[t] = clock;
        low[t] = clock;
        clock += 1;
        vstack.push(t);
        frames.push((t, usize::MAX, 0));

        while let Some(frame) = frames.last_mut() {
            let (u, parent) = (frame.0, frame.1);
            if let Some(w) = self.next_neighbor(u, &mut frame.2) {
                if w == parent {
                    continue;
                }
                if disc[w] == UNSEEN {
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    vstack.push(w);
                    frames.push((w, u, 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
                continue;
            }
            frames.pop();
            let Some(&(p, _, _)) = frames.last() else {
                break;
            };
            low[p] = low[p].min(low[u]);
            if low[u] >= disc[p] {
                let mut component = Vec::new();
                loop {
                    let x = vstack.pop().expect("vertex stack underflow");
                    component.push(x);
                    if x == u {
                        break;
                    }
                }
                if p == t {
                    let centre = component
                        .iter()
                        .copied()
                        .filter(|&x| self.g.is_centre(self.grid.coords(x)))
                        .min();
                    if let Some(v) = centre {
                        component.push(t);
                        return Some((v, component));
                    }
                }
            }
        }
        None
    }
}

/// Lower (block) event: two open arms from a centre vertex to distinct
/// surface vertices, disjoint except at the centre vertex.
pub fn lower_event(sample: &OccupancySample, g: &BlockGeometry) -> Result<EventResult> {
    check_block(sample, g)?;
    let block = AugmentedBlock::new(sample, g);
    let Some((centre, component)) = block.find_component() else {
        return Ok(EventResult {
            holds: false,
            witness: None,
        });
    };
    let arms = two_arms(&block, centre, &component).ok_or_else(|| {
        Error::Numeric("biconnected component did not yield two disjoint arms".into())
    })?;
    Ok(EventResult {
        holds: true,
        witness: Some(Witness::Lower(LowerWitness { centre, arms })),
    })
}

/// Two internally disjoint paths from `centre` to the super-node inside one
/// biconnected component, via two augmenting paths on the vertex-split graph.
fn two_arms(
    block: &AugmentedBlock<'_>,
    centre: usize,
    component: &[usize],
) -> Option<[Vec<usize>; 2]> {
    let t = block.terminal;
    let mut local = std::collections::HashMap::with_capacity(component.len());
    for (i, &v) in component.iter().enumerate() {
        local.insert(v, i);
    }
    let n = component.len();
    // node 2i = in(i), 2i+1 = out(i)
    let mut net = Network::new(2 * n);
    for (i, &v) in component.iter().enumerate() {
        net.add_arc(2 * i, 2 * i + 1);
        if v == t {
            continue;
        }
        let mut cursor = 0;
        while let Some(w) = block.next_neighbor(v, &mut cursor) {
            if let Some(&j) = local.get(&w) {
                net.add_arc(2 * i + 1, 2 * j);
            }
        }
    }
    let source = 2 * local[&centre] + 1;
    let sink = 2 * local[&t];
    for _ in 0..2 {
        if !net.augment(source, sink) {
            return None;
        }
    }
    let mut arms: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for arm in arms.iter_mut() {
        arm.push(centre);
        let mut node = source;
        loop {
            let next = net.take_flow_arc(node)?;
            let vertex = component[next / 2];
            if vertex == t {
                break;
            }
            arm.push(vertex);
            if block.g.is_surface(block.grid.coords(vertex)) {
                break;
            }
            node = next + 1;
        }
    }
    Some(arms)
}

/// Unit-capacity residual network.
struct Network {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u8>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add_arc(&mut self, a: usize, b: usize) {
        self.head[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(1);
        self.head[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut via = vec![usize::MAX; self.head.len()];
        let mut queue = VecDeque::from([s]);
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for &e in &self.head[x] {
                let y = self.to[e];
                if self.cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    via[y] = e;
                    queue.push_back(y);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut x = t;
        while x != s {
            let e = via[x];
            self.cap[e] -= 1;
            self.cap[e ^ 1] += 1;
            x = self.to[e ^ 1];
        }
        true
    }

    /// Consumes one unit of flow leaving `node` along a forward arc and
    /// returns the arc's head.
    fn take_flow_arc(&mut self, node: usize) -> Option<usize> {
        let e = self.head[node]
            .iter()
            .copied()
            .find(|&e| e % 2 == 0 && self.cap[e] == 0 && self.cap[e ^ 1] > 0)?;
        self.cap[e ^ 1] -= 1;
        Some(self.to[e])
    }
}

/// Upper (double-cube) event.
pub fn upper_event(sample: &OccupancySample, r: &RectGeometry) -> Result<EventResult> {
    check_rect(sample, r)?;
    let fail = EventResult {
        holds: false,
        witness: None,
    };
    let (hu, hv) = (r.half_u(), r.half_v());
    let lab_u = label_clusters_in(sample, &hu);
    let Some(big_u) = lab_u.largest_in_box(&hu).filter(|c| c.unique) else {
        return Ok(fail);
    };
    let lab_v = label_clusters_in(sample, &hv);
    let Some(big_v) = lab_v.largest_in_box(&hv).filter(|c| c.unique) else {
        return Ok(fail);
    };
    let full = label_clusters(sample);
    let (ju, jv) = (full.label(big_u.label), full.label(big_v.label));
    match (ju, jv) {
        (Some(a), Some(b)) if a == b => Ok(EventResult {
            holds: true,
            witness: Some(Witness::Upper(UpperWitness {
                u_label: big_u.label,
                u_size: big_u.size,
                v_label: big_v.label,
                v_size: big_v.size,
                joined_label: a,
            })),
        }),
        _ => Ok(fail),
    }
}

/// Re-checks a lower witness by walking its arms.
pub fn verify_lower_witness(sample: &OccupancySample, g: &BlockGeometry, w: &LowerWitness) -> bool {
    let grid = g.grid();
    if !g.is_centre(grid.coords(w.centre)) || !sample.is_active(w.centre) {
        return false;
    }
    let mut used = std::collections::HashSet::new();
    for arm in &w.arms {
        if arm.len() < 2 || arm[0] != w.centre {
            return false;
        }
        for pair in arm.windows(2) {
            let joined = (0..6).any(|d| sample.open_neighbor(pair[0], d) == Some(pair[1]));
            if !joined {
                return false;
            }
        }
        let end = *arm.last().unwrap();
        if !g.is_surface(grid.coords(end)) {
            return false;
        }
        for &v in &arm[1..] {
            if !used.insert(v) {
                return false;
            }
        }
    }
    let [a, b] = w.endpoints();
    a != b
}

/// Re-checks an upper witness with a plain breadth-first search.
pub fn verify_upper_witness(sample: &OccupancySample, r: &RectGeometry, w: &UpperWitness) -> bool {
    let grid = r.grid();
    let reach = |start: usize, region: Option<crate::Region>| {
        let mut seen = vec![false; grid.vertex_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut count = 0;
        while let Some(x) = queue.pop_front() {
            count += 1;
            for d in 0..6 {
                if let Some(y) = sample.open_neighbor(x, d) {
                    let inside = region.is_none_or(|reg| reg.contains(grid.coords(y)));
                    if inside && !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        (seen, count)
    };
    let in_u = r.half_u().contains(grid.coords(w.u_label));
    let in_v = r.half_v().contains(grid.coords(w.v_label));
    if !in_u || !in_v || !sample.is_active(w.u_label) || !sample.is_active(w.v_label) {
        return false;
    }
    let (_, su) = reach(w.u_label, Some(r.half_u()));
    let (_, sv) = reach(w.v_label, Some(r.half_v()));
    let (full, _) = reach(w.u_label, None);
    su == w.u_size && sv == w.v_size && full[w.v_label] && full[w.joined_label]
}

/// True if some open cluster holds a centre vertex and at least two surface
/// vertices. Necessary for the lower event.
pub fn centre_cluster_reaches_surface_twice(sample: &OccupancySample, g: &BlockGeometry) -> bool {
    let lab = label_clusters(sample);
    let grid = g.grid();
    let mut surface_hits = std::collections::HashMap::new();
    for v in g.surface_vertices() {
        if let Some(l) = lab.label(v) {
            *surface_hits.entry(l).or_insert(0usize) += 1;
        }
    }
    g.centre().vertices(&grid).into_iter().any(|v| {
        lab.label(v)
            .is_some_and(|l| surface_hits.get(&l).copied().unwrap_or(0) >= 2)
    })
}
