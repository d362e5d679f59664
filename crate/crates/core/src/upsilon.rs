//! The independence lattice: neighbours of a block that cannot overlap it.
//!
//! Blocks are indexed by the integer centres of their unit-cube cores. Two
//! blocks overlap iff their centres are within Chebyshev distance 1; the
//! neighbours of a block are the blocks one unit step outside the 3×3×3 cube
//! `C` of blocks around it, i.e. one coordinate ±2 and the other two in
//! {-1, 0, 1}. There are 9 per face of `C`, 54 in all.

use std::collections::BTreeMap;

use crate::{Error, Result};

pub type Offset = [i32; 3];

/// Which feature of a face of `C` the neighbour sits against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairType {
    FaceCentre,
    FaceEdge,
    FaceCorner,
}

impl PairType {
    pub const ALL: [PairType; 3] = [
        PairType::FaceCentre,
        PairType::FaceEdge,
        PairType::FaceCorner,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn multiplicity(self) -> usize {
        match self {
            PairType::FaceCentre => 6,
            PairType::FaceEdge | PairType::FaceCorner => 24,
        }
    }

    /// A fixed neighbour of the origin of this type.
    pub fn representative(self) -> Offset {
        match self {
            PairType::FaceCentre => [2, 0, 0],
            PairType::FaceEdge => [2, 1, 0],
            PairType::FaceCorner => [2, 1, 1],
        }
    }
}

pub fn chebyshev(o: Offset) -> i32 {
    o.iter().map(|c| c.abs()).max().unwrap_or(0)
}

/// True iff two blocks with these centres overlap (or coincide).
pub fn overlaps(a: Offset, b: Offset) -> bool {
    chebyshev(sub(a, b)) <= 1
}

pub fn sub(a: Offset, b: Offset) -> Offset {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: Offset, b: Offset) -> Offset {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Classifies a neighbour offset; errors if `offset` is not one of the 54.
pub fn pair_type(offset: Offset) -> Result<PairType> {
    let twos = offset.iter().filter(|c| c.abs() == 2).count();
    let ones = offset.iter().filter(|c| c.abs() == 1).count();
    let zeros = offset.iter().filter(|&&c| c == 0).count();
    if twos != 1 || ones + zeros != 2 {
        return Err(Error::Domain(format!(
            "{offset:?} is not a neighbour in the independence lattice"
        )));
    }
    Ok(match ones {
        0 => PairType::FaceCentre,
        1 => PairType::FaceEdge,
        _ => PairType::FaceCorner,
    })
}

pub fn is_neighbor(a: Offset, b: Offset) -> bool {
    pair_type(sub(a, b)).is_ok()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpsilonNeighborhood {
    offsets: Vec<Offset>,
    types: BTreeMap<Offset, PairType>,
}

impl UpsilonNeighborhood {
    pub fn offsets(&self) -> &[Offset] {
        &self.offsets
    }

    pub fn type_of(&self, o: Offset) -> Option<PairType> {
        self.types.get(&o).copied()
    }

    pub fn multiplicities(&self) -> [usize; 3] {
        let mut m = [0; 3];
        for t in self.types.values() {
            m[t.index()] += 1;
        }
        m
    }
}

/// The 54 neighbour offsets, face by face (±x, ±y, ±z).
pub fn upsilon_neighbors() -> UpsilonNeighborhood {
    let mut offsets = Vec::with_capacity(54);
    for axis in 0..3 {
        for s in [2, -2] {
            for u in -1..=1 {
                for w in -1..=1 {
                    let mut o = [0; 3];
                    o[axis] = s;
                    o[(axis + 1) % 3] = u;
                    o[(axis + 2) % 3] = w;
                    offsets.push(o);
                }
            }
        }
    }
    let types = offsets
        .iter()
        .map(|&o| (o, pair_type(o).expect("constructed neighbour")))
        .collect();
    UpsilonNeighborhood { offsets, types }
}

/// How blocks are joined in the d-dimensional generalisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adjacency {
    /// Centres sharing a face, edge or corner: `5^d - 3^d` neighbours.
    CornerAdjacent,
    /// Centres sharing a face only: `2d·3^(d-1)` neighbours.
    FaceAdjacent,
}

pub fn upsilon_degree(d: u32, mode: Adjacency) -> Result<u64> {
    if d < 1 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    Ok(match mode {
        Adjacency::CornerAdjacent => 5u64.pow(d) - 3u64.pow(d),
        Adjacency::FaceAdjacent => 2 * u64::from(d) * 3u64.pow(d - 1),
    })
}
