//! Open-cluster labeling by union-find.

use std::collections::{BTreeMap, HashMap};

use crate::lattice::{Grid, OccupancySample, Region};

/// Label carried by vertices that belong to no cluster (closed sites, or
/// vertices outside the labeled region).
pub const NO_CLUSTER: usize = usize::MAX;

/// Disjoint-set forest with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

/// Per-vertex cluster labels of one sample, restricted to a region.
///
/// A cluster's label is the smallest vertex index it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterLabeling {
    grid: Grid,
    region: Region,
    labels: Vec<usize>,
    sizes: BTreeMap<usize, usize>,
}

/// Answer of [`ClusterLabeling::largest_in_region`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LargestCluster {
    pub label: usize,
    /// Number of region vertices carrying `label`.
    pub size: usize,
    /// Strictly larger than every other cluster's share of the region.
    pub unique: bool,
}

pub fn label_clusters(sample: &OccupancySample) -> ClusterLabeling {
    label_clusters_in(sample, &sample.grid().full_region())
}

/// Labels clusters of the subgraph induced by `region`: only bonds with both
/// endpoints inside the region are used.
pub fn label_clusters_in(sample: &OccupancySample, region: &Region) -> ClusterLabeling {
    let grid = sample.grid();
    let n = grid.vertex_count();
    let mut uf = UnionFind::new(n);
    let vertices = region.vertices(&grid);
    for &v in &vertices {
        if !sample.is_active(v) {
            continue;
        }
        // Positive directions only: each bond is visited once.
        for dir in [0, 2, 4] {
            if let Some(w) = sample.open_neighbor(v, dir) {
                if region.contains(grid.coords(w)) {
                    uf.union(v, w);
                }
            }
        }
    }

    let mut labels = vec![NO_CLUSTER; n];
    let mut canonical: HashMap<usize, usize> = HashMap::new();
    let mut sizes = BTreeMap::new();
    // Vertices come in increasing index order, so the first vertex seen for a
    // root is the minimum of its cluster.
    for &v in &vertices {
        if !sample.is_active(v) {
            continue;
        }
        let root = uf.find(v);
        let label = *canonical.entry(root).or_insert(v);
        labels[v] = label;
        *sizes.entry(label).or_insert(0) += 1;
    }

    ClusterLabeling {
        grid,
        region: *region,
        labels,
        sizes,
    }
}

impl ClusterLabeling {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn label(&self, v: usize) -> Option<usize> {
        let l = self.labels[v];
        (l != NO_CLUSTER).then_some(l)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn sizes(&self) -> &BTreeMap<usize, usize> {
        &self.sizes
    }

    pub fn cluster_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn labeled_count(&self) -> usize {
        self.sizes.values().sum()
    }

    /// The label with the most vertices satisfying `in_region`. Ties are
    /// reported with `unique = false` and the smallest tied label. `None` if
    /// no labeled vertex satisfies the predicate.
    pub fn largest_in_region<F>(&self, in_region: F) -> Option<LargestCluster>
    where
        F: Fn(usize) -> bool,
    {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for (v, &l) in self.labels.iter().enumerate() {
            if l != NO_CLUSTER && in_region(v) {
                *counts.entry(l).or_insert(0) += 1;
            }
        }
        let mut best: Option<(usize, usize)> = None;
        let mut second = 0;
        for (&label, &count) in &counts {
            match best {
                None => best = Some((label, count)),
                Some((bl, bc)) => {
                    if count > bc || (count == bc && label < bl) {
                        second = second.max(bc);
                        best = Some((label, count));
                    } else {
                        second = second.max(count);
                    }
                }
            }
        }
        best.map(|(label, size)| LargestCluster {
            label,
            size,
            unique: size > second,
        })
    }

    /// Largest cluster among vertices of a box region.
    pub fn largest_in_box(&self, region: &Region) -> Option<LargestCluster> {
        let grid = self.grid;
        self.largest_in_region(|v| region.contains(grid.coords(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Kind;

    #[test]
    fn all_open_cube_is_one_cluster() {
        let s = OccupancySample::open(Grid::cube(2), Kind::Bond);
        let lab = label_clusters(&s);
        assert_eq!(lab.cluster_count(), 1);
        assert_eq!(lab.sizes()[&0], 8);
    }

    #[test]
    fn all_closed_bonds_give_singletons() {
        let s = OccupancySample::closed(Grid::cube(2), Kind::Bond);
        let lab = label_clusters(&s);
        assert_eq!(lab.cluster_count(), 8);
        assert!(lab.sizes().values().all(|&c| c == 1));
        for v in 0..8 {
            assert_eq!(lab.label(v), Some(v));
        }
    }

    #[test]
    fn closed_sites_are_unlabeled() {
        let grid = Grid::cube(3);
        let mut s = OccupancySample::closed(grid, Kind::Site);
        s.set_site(0, true).unwrap();
        s.set_site(1, true).unwrap();
        s.set_site(26, true).unwrap();
        let lab = label_clusters(&s);
        assert_eq!(lab.label(2), None);
        assert_eq!(lab.label(1), Some(0));
        assert_eq!(lab.labeled_count(), 3);
        let best = lab.largest_in_region(|_| true).unwrap();
        assert_eq!((best.label, best.size, best.unique), (0, 2, true));
        assert!(lab.largest_in_region(|v| v == 5).is_none());
    }

    #[test]
    fn tied_dimers_are_not_unique() {
        let grid = Grid::cube(4);
        let mut s = OccupancySample::closed(grid, Kind::Site);
        s.open_path(&[grid.index([0, 0, 0]), grid.index([1, 0, 0])])
            .unwrap();
        s.open_path(&[grid.index([3, 3, 3]), grid.index([3, 3, 2])])
            .unwrap();
        let best = label_clusters(&s).largest_in_region(|_| true).unwrap();
        assert!(!best.unique);
        assert_eq!(best.label, 0);
        assert_eq!(best.size, 2);
    }

    #[test]
    fn region_restriction_uses_interior_bonds_only() {
        let grid = Grid::new([1, 1, 4]);
        let s = OccupancySample::open(grid, Kind::Bond);
        let lower = Region {
            lo: [0, 0, 0],
            hi: [1, 1, 2],
        };
        let upper = Region {
            lo: [0, 0, 2],
            hi: [1, 1, 4],
        };
        let a = label_clusters_in(&s, &lower);
        let b = label_clusters_in(&s, &upper);
        assert_eq!(a.label(1), Some(0));
        assert_eq!(a.label(2), None);
        assert_eq!(b.label(3), Some(2));
        assert_eq!(label_clusters(&s).label(3), Some(0));
    }

    #[test]
    fn union_find_tracks_sizes() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert!(uf.union(1, 4));
        assert_eq!(uf.set_size(3), 4);
        assert_eq!(uf.set_size(2), 1);
    }
}
