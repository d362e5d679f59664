//! Block geometry and seeded occupancy samples on boxes of the cubic lattice.
//!
//! Vertices of a `nx × ny × nz` box are indexed linearly with x fastest, then
//! y, then z. A bond is stored at slot `3 * v + axis`, where `v` is its lower
//! endpoint; bonds that would leave the box are never represented.

use bitvec::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::symmetry::CubeSymmetry;
use crate::{Error, Result};

/// Identifies the variate stream. Written into every result file.
pub const GENERATOR_ID: &str =
    "rand_chacha 0.3 ChaCha8Rng::seed_from_u64; f64 variates on [0,1); open iff u < p";

/// Bond or site percolation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Bond,
    Site,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Bond => "bond",
            Kind::Site => "site",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bond" => Ok(Kind::Bond),
            "site" => Ok(Kind::Site),
            other => Err(Error::Config(format!("unknown percolation kind {other:?}"))),
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Unit steps: +x, -x, +y, -y, +z, -z.
pub const DIRECTIONS: [(usize, bool); 6] = [
    (0, true),
    (0, false),
    (1, true),
    (1, false),
    (2, true),
    (2, false),
];

/// A box of lattice vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    dims: [usize; 3],
}

impl Grid {
    pub fn new(dims: [usize; 3]) -> Self {
        Grid { dims }
    }

    pub fn cube(side: usize) -> Self {
        Grid::new([side; 3])
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn vertex_count(&self) -> usize {
        self.dims.iter().product()
    }

    /// Number of bonds with both endpoints inside the box.
    pub fn bond_count(&self) -> usize {
        let [nx, ny, nz] = self.dims;
        (nx - 1) * ny * nz + nx * (ny - 1) * nz + nx * ny * (nz - 1)
    }

    #[inline]
    pub fn index(&self, c: [usize; 3]) -> usize {
        c[0] + self.dims[0] * (c[1] + self.dims[1] * c[2])
    }

    #[inline]
    pub fn coords(&self, v: usize) -> [usize; 3] {
        let x = v % self.dims[0];
        let rest = v / self.dims[0];
        [x, rest % self.dims[1], rest / self.dims[1]]
    }

    /// Neighbour of `v` one step along `axis`, if it lies inside the box.
    #[inline]
    pub fn step(&self, v: usize, axis: usize, positive: bool) -> Option<usize> {
        let c = self.coords(v);
        let stride = match axis {
            0 => 1,
            1 => self.dims[0],
            _ => self.dims[0] * self.dims[1],
        };
        if positive {
            (c[axis] + 1 < self.dims[axis]).then(|| v + stride)
        } else {
            (c[axis] > 0).then(|| v - stride)
        }
    }

    /// Slot of the bond between two adjacent vertices.
    pub fn bond_slot(&self, a: usize, b: usize) -> Option<usize> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        (0..3).find_map(|axis| (self.step(lo, axis, true) == Some(hi)).then_some(3 * lo + axis))
    }

    pub fn full_region(&self) -> Region {
        Region {
            lo: [0; 3],
            hi: self.dims,
        }
    }
}

/// Axis-aligned sub-box `[lo, hi)` of a [`Grid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    pub lo: [usize; 3],
    pub hi: [usize; 3],
}

impl Region {
    #[inline]
    pub fn contains(&self, c: [usize; 3]) -> bool {
        (0..3).all(|i| self.lo[i] <= c[i] && c[i] < self.hi[i])
    }

    pub fn vertex_count(&self) -> usize {
        (0..3)
            .map(|i| self.hi[i].saturating_sub(self.lo[i]))
            .product()
    }

    /// Linear indices of the region's vertices inside `grid`, in index order.
    pub fn vertices(&self, grid: &Grid) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.vertex_count());
        for z in self.lo[2]..self.hi[2] {
            for y in self.lo[1]..self.hi[1] {
                for x in self.lo[0]..self.hi[0] {
                    out.push(grid.index([x, y, z]));
                }
            }
        }
        out
    }
}

/// A cubic simulation block of `side` vertices per axis.
///
/// The centre is the middle `(side/2)^3` sub-cube and the surface is the
/// outer shell of thickness one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockGeometry {
    side: usize,
    kind: Kind,
}

impl BlockGeometry {
    pub fn new(side: usize, kind: Kind) -> Result<Self> {
        if side < 8 || !side.is_multiple_of(4) {
            return Err(Error::InvalidGeometry(format!(
                "block side must be at least 8 and a multiple of 4, got {side}"
            )));
        }
        Ok(BlockGeometry { side, kind })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn grid(&self) -> Grid {
        Grid::cube(self.side)
    }

    pub fn centre_lo(&self) -> usize {
        self.side / 4
    }

    pub fn centre_hi(&self) -> usize {
        3 * self.side / 4
    }

    pub fn centre(&self) -> Region {
        Region {
            lo: [self.centre_lo(); 3],
            hi: [self.centre_hi(); 3],
        }
    }

    pub fn centre_count(&self) -> usize {
        (self.side / 2).pow(3)
    }

    pub fn surface_count(&self) -> usize {
        self.side.pow(3) - (self.side - 2).pow(3)
    }

    #[inline]
    pub fn is_centre(&self, c: [usize; 3]) -> bool {
        let (lo, hi) = (self.centre_lo(), self.centre_hi());
        c.iter().all(|&x| lo <= x && x < hi)
    }

    #[inline]
    pub fn is_surface(&self, c: [usize; 3]) -> bool {
        c.iter().any(|&x| x == 0 || x == self.side - 1)
    }

    /// Surface vertices in index order.
    pub fn surface_vertices(&self) -> Vec<usize> {
        let grid = self.grid();
        (0..grid.vertex_count())
            .filter(|&v| self.is_surface(grid.coords(v)))
            .collect()
    }
}

/// Two adjacent cubes `S_u ∪ S_v` of `side` vertices each, stacked along z.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RectGeometry {
    side: usize,
    kind: Kind,
}

impl RectGeometry {
    pub fn new(side: usize, kind: Kind) -> Result<Self> {
        if side < 2 {
            return Err(Error::InvalidGeometry(format!(
                "rectangle cube side must be at least 2, got {side}"
            )));
        }
        Ok(RectGeometry { side, kind })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn grid(&self) -> Grid {
        Grid::new([self.side, self.side, 2 * self.side])
    }

    pub fn half_u(&self) -> Region {
        Region {
            lo: [0; 3],
            hi: [self.side, self.side, self.side],
        }
    }

    pub fn half_v(&self) -> Region {
        Region {
            lo: [0, 0, self.side],
            hi: [self.side, self.side, 2 * self.side],
        }
    }
}

/// Where a seeded sample came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleOrigin {
    pub p: f64,
    pub seed: u64,
}

/// Open/closed state of every bond (or site) of a box, one bit per element.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancySample {
    grid: Grid,
    kind: Kind,
    origin: Option<SampleOrigin>,
    bits: BitVec<u64, Lsb0>,
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "probability must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

pub fn sample_block(g: &BlockGeometry, p: f64, seed: u64) -> Result<OccupancySample> {
    OccupancySample::generate(g.grid(), g.kind(), p, seed)
}

pub fn sample_rect(r: &RectGeometry, p: f64, seed: u64) -> Result<OccupancySample> {
    OccupancySample::generate(r.grid(), r.kind(), p, seed)
}

impl OccupancySample {
    /// Draws one uniform variate per represented element in traversal order
    /// (vertices x-fastest; for bonds the axes x, y, z within each vertex) and
    /// opens the element iff the variate is below `p`.
    pub fn generate(grid: Grid, kind: Kind, p: f64, seed: u64) -> Result<Self> {
        check_probability(p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sample = OccupancySample::closed(grid, kind);
        let n = grid.vertex_count();
        match kind {
            Kind::Site => {
                for v in 0..n {
                    let u: f64 = rng.gen();
                    sample.bits.set(v, u < p);
                }
            }
            Kind::Bond => {
                let [nx, ny, nz] = grid.dims();
                let mut v = 0;
                for z in 0..nz {
                    for y in 0..ny {
                        for x in 0..nx {
                            let has = [x + 1 < nx, y + 1 < ny, z + 1 < nz];
                            for (axis, &present) in has.iter().enumerate() {
                                if present {
                                    let u: f64 = rng.gen();
                                    sample.bits.set(3 * v + axis, u < p);
                                }
                            }
                            v += 1;
                        }
                    }
                }
            }
        }
        sample.origin = Some(SampleOrigin { p, seed });
        Ok(sample)
    }

    /// A sample with every element closed and no seed provenance.
    pub fn closed(grid: Grid, kind: Kind) -> Self {
        let len = match kind {
            Kind::Bond => 3 * grid.vertex_count(),
            Kind::Site => grid.vertex_count(),
        };
        OccupancySample {
            grid,
            kind,
            origin: None,
            bits: bitvec![u64, Lsb0; 0; len],
        }
    }

    /// A sample with every represented element open.
    pub fn open(grid: Grid, kind: Kind) -> Self {
        let mut s = OccupancySample::closed(grid, kind);
        match kind {
            Kind::Site => s.bits.fill(true),
            Kind::Bond => {
                for v in 0..grid.vertex_count() {
                    for axis in 0..3 {
                        if grid.step(v, axis, true).is_some() {
                            s.bits.set(3 * v + axis, true);
                        }
                    }
                }
            }
        }
        s
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn origin(&self) -> Option<SampleOrigin> {
        self.origin
    }

    pub fn p(&self) -> Option<f64> {
        self.origin.map(|o| o.p)
    }

    pub fn seed(&self) -> Option<u64> {
        self.origin.map(|o| o.seed)
    }

    /// Opens or closes the bond between adjacent vertices `a` and `b`.
    pub fn set_bond(&mut self, a: usize, b: usize, open: bool) -> Result<()> {
        if self.kind != Kind::Bond {
            return Err(Error::Contract("set_bond on a site sample".into()));
        }
        let slot = self
            .grid
            .bond_slot(a, b)
            .ok_or_else(|| Error::Contract(format!("vertices {a} and {b} are not adjacent")))?;
        self.bits.set(slot, open);
        self.origin = None;
        Ok(())
    }

    pub fn set_site(&mut self, v: usize, open: bool) -> Result<()> {
        if self.kind != Kind::Site {
            return Err(Error::Contract("set_site on a bond sample".into()));
        }
        self.bits.set(v, open);
        self.origin = None;
        Ok(())
    }

    /// Opens every bond (or site) along a path of adjacent vertices.
    pub fn open_path(&mut self, path: &[usize]) -> Result<()> {
        match self.kind {
            Kind::Bond => {
                for w in path.windows(2) {
                    self.set_bond(w[0], w[1], true)?;
                }
            }
            Kind::Site => {
                for &v in path {
                    self.set_site(v, true)?;
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn is_bond_open(&self, v: usize, axis: usize) -> bool {
        self.bits[3 * v + axis]
    }

    /// Vertices that can belong to a cluster: every vertex for bonds, open
    /// vertices for sites.
    #[inline]
    pub fn is_active(&self, v: usize) -> bool {
        match self.kind {
            Kind::Bond => true,
            Kind::Site => self.bits[v],
        }
    }

    /// The neighbour of `v` in direction `dir` (index into [`DIRECTIONS`]),
    /// if the two are joined by an open bond (or are both open sites).
    #[inline]
    pub fn open_neighbor(&self, v: usize, dir: usize) -> Option<usize> {
        let (axis, positive) = DIRECTIONS[dir];
        let w = self.grid.step(v, axis, positive)?;
        let joined = match self.kind {
            Kind::Bond => {
                let lo = if positive { v } else { w };
                self.bits[3 * lo + axis]
            }
            Kind::Site => self.bits[v] && self.bits[w],
        };
        joined.then_some(w)
    }

    /// Number of represented elements.
    pub fn element_count(&self) -> usize {
        match self.kind {
            Kind::Bond => self.grid.bond_count(),
            Kind::Site => self.grid.vertex_count(),
        }
    }

    pub fn open_count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn bits(&self) -> &BitSlice<u64, Lsb0> {
        &self.bits
    }

    /// Element-wise inclusion of open sets. Samples must share grid and kind.
    pub fn is_subset_of(&self, other: &OccupancySample) -> bool {
        self.grid == other.grid
            && self.kind == other.kind
            && self
                .bits
                .as_raw_slice()
                .iter()
                .zip(other.bits.as_raw_slice())
                .all(|(a, b)| a & !b == 0)
    }

    /// Image of the sample under a cube symmetry acting on the box.
    pub fn transformed(&self, sym: &CubeSymmetry) -> Result<OccupancySample> {
        let dims = self.grid.dims();
        if !sym.preserves_dims(dims) {
            return Err(Error::Contract(format!(
                "symmetry {sym:?} does not map a {dims:?} box onto itself"
            )));
        }
        let map = |v: usize| {
            let c = sym
                .apply_in_box(self.grid.coords(v), dims)
                .expect("dims preserved");
            self.grid.index(c)
        };
        let mut out = OccupancySample::closed(self.grid, self.kind);
        match self.kind {
            Kind::Site => {
                for v in self.bits.iter_ones() {
                    out.bits.set(map(v), true);
                }
            }
            Kind::Bond => {
                for slot in self.bits.iter_ones() {
                    let (v, axis) = (slot / 3, slot % 3);
                    let w = self.grid.step(v, axis, true).expect("represented bond");
                    let s = self
                        .grid
                        .bond_slot(map(v), map(w))
                        .expect("adjacency preserved");
                    out.bits.set(s, true);
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_geometry_counts() {
        let g = BlockGeometry::new(8, Kind::Bond).unwrap();
        assert_eq!(g.surface_count(), 296);
        assert_eq!(g.centre_count(), 64);
        assert_eq!(g.surface_vertices().len(), 296);
        let grid = g.grid();
        let centre = (0..grid.vertex_count())
            .filter(|&v| g.is_centre(grid.coords(v)))
            .count();
        assert_eq!(centre, 64);
        assert_eq!(g.centre().vertex_count(), 64);
    }

    #[test]
    fn block_geometry_rejects_bad_sides() {
        for side in [0, 4, 6, 7, 9, 10, 14] {
            assert!(matches!(
                BlockGeometry::new(side, Kind::Site),
                Err(Error::InvalidGeometry(_))
            ));
        }
        let big = BlockGeometry::new(6500, Kind::Bond).unwrap();
        assert_eq!(big.centre_lo(), 1625);
        assert_eq!(big.centre_hi(), 4875);
        assert_eq!(big.centre_count(), 3250usize.pow(3));
    }

    #[test]
    fn centre_and_surface_disjoint() {
        for side in [8, 12, 16] {
            let g = BlockGeometry::new(side, Kind::Bond).unwrap();
            let grid = g.grid();
            for v in 0..grid.vertex_count() {
                let c = grid.coords(v);
                assert!(!(g.is_centre(c) && g.is_surface(c)));
            }
            assert_eq!(g.surface_count(), side.pow(3) - (side - 2).pow(3));
        }
    }

    #[test]
    fn rect_halves_partition() {
        let r = RectGeometry::new(3, Kind::Bond).unwrap();
        let grid = r.grid();
        assert_eq!(grid.dims(), [3, 3, 6]);
        for v in 0..grid.vertex_count() {
            let c = grid.coords(v);
            assert!(r.half_u().contains(c) ^ r.half_v().contains(c));
        }
        assert!(RectGeometry::new(1, Kind::Bond).is_err());
    }

    #[test]
    fn index_coords_roundtrip_and_steps() {
        let grid = Grid::new([3, 4, 5]);
        for v in 0..grid.vertex_count() {
            assert_eq!(grid.index(grid.coords(v)), v);
        }
        assert_eq!(grid.step(0, 0, false), None);
        assert_eq!(grid.step(0, 1, true), Some(3));
        assert_eq!(grid.step(0, 2, true), Some(12));
        assert_eq!(grid.bond_slot(3, 0), Some(1));
        assert_eq!(grid.bond_slot(0, 4), None);
        assert_eq!(grid.bond_count(), 2 * 4 * 5 + 3 * 3 * 5 + 3 * 4 * 4);
    }

    #[test]
    fn extreme_probabilities() {
        let g = BlockGeometry::new(8, Kind::Bond).unwrap();
        let none = sample_block(&g, 0.0, 7).unwrap();
        assert_eq!(none.open_count(), 0);
        let all = sample_block(&g, 1.0, 7).unwrap();
        assert_eq!(all.open_count(), g.grid().bond_count());
        assert_eq!(
            all.bits(),
            OccupancySample::open(g.grid(), Kind::Bond).bits()
        );

        let r = RectGeometry::new(3, Kind::Site).unwrap();
        assert_eq!(sample_rect(&r, 1.0, 1).unwrap().open_count(), 54);
        assert_eq!(sample_rect(&r, 0.0, 1).unwrap().open_count(), 0);
    }

    #[test]
    fn probability_domain() {
        let g = BlockGeometry::new(8, Kind::Bond).unwrap();
        for p in [-0.1, 1.5, f64::NAN] {
            assert!(matches!(sample_block(&g, p, 1), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let g = BlockGeometry::new(8, Kind::Bond).unwrap();
        let a = sample_block(&g, 0.25, 42).unwrap();
        let b = sample_block(&g, 0.25, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_block(&g, 0.25, 43).unwrap();
        assert_ne!(a.bits(), c.bits());
        assert_eq!(a.seed(), Some(42));
    }

    #[test]
    fn open_fraction_concentrates() {
        let p = 0.25;
        for kind in [Kind::Bond, Kind::Site] {
            let g = BlockGeometry::new(32, kind).unwrap();
            for seed in [1u64, 2, 3, 99] {
                let s = sample_block(&g, p, seed).unwrap();
                let n = s.element_count() as f64;
                let frac = s.open_count() as f64 / n;
                let tol = 4.0 * (p * (1.0 - p) / n).sqrt();
                assert!((frac - p).abs() < tol, "{kind} seed {seed}: {frac}");
            }
        }
    }

    #[test]
    fn boundary_bonds_not_represented() {
        let grid = Grid::cube(4);
        let s = OccupancySample::generate(grid, Kind::Bond, 1.0, 5).unwrap();
        for v in 0..grid.vertex_count() {
            for axis in 0..3 {
                assert_eq!(s.is_bond_open(v, axis), grid.step(v, axis, true).is_some());
            }
        }
    }

    #[test]
    fn transform_preserves_open_count() {
        let g = BlockGeometry::new(8, Kind::Bond).unwrap();
        let s = sample_block(&g, 0.4, 11).unwrap();
        for sym in CubeSymmetry::all() {
            let t = s.transformed(&sym).unwrap();
            assert_eq!(t.open_count(), s.open_count());
        }
    }
}
