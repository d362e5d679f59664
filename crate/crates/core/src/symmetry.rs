//! The 48 isometries of the cube fixing the origin (signed axis permutations).

/// A signed permutation of the three coordinate axes.
///
/// Maps `v` to `w` with `w[i] = sign[i] * v[perm[i]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CubeSymmetry {
    perm: [usize; 3],
    flip: [bool; 3],
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl CubeSymmetry {
    pub const IDENTITY: CubeSymmetry = CubeSymmetry {
        perm: [0, 1, 2],
        flip: [false; 3],
    };

    /// All 48 symmetries, identity first.
    pub fn all() -> Vec<CubeSymmetry> {
        let mut out = Vec::with_capacity(48);
        for perm in PERMUTATIONS {
            for bits in 0..8u8 {
                let flip = [bits & 1 != 0, bits & 2 != 0, bits & 4 != 0];
                out.push(CubeSymmetry { perm, flip });
            }
        }
        out
    }

    pub fn perm(&self) -> [usize; 3] {
        self.perm
    }

    pub fn apply(&self, v: [i32; 3]) -> [i32; 3] {
        let mut w = [0; 3];
        for i in 0..3 {
            let c = v[self.perm[i]];
            w[i] = if self.flip[i] { -c } else { c };
        }
        w
    }

    /// Applies the symmetry to a vertex of a `dims` box, reflecting flipped
    /// axes about the box centre. `None` if the image box has different dims.
    pub fn apply_in_box(&self, c: [usize; 3], dims: [usize; 3]) -> Option<[usize; 3]> {
        let mut w = [0; 3];
        for i in 0..3 {
            let src = self.perm[i];
            if dims[src] != dims[i] {
                return None;
            }
            let x = c[src];
            w[i] = if self.flip[i] { dims[i] - 1 - x } else { x };
        }
        Some(w)
    }

    /// True if the permutation maps a box with these dims onto itself.
    pub fn preserves_dims(&self, dims: [usize; 3]) -> bool {
        (0..3).all(|i| dims[self.perm[i]] == dims[i])
    }

    pub fn compose(&self, inner: &CubeSymmetry) -> CubeSymmetry {
        // (self . inner)(v)[i] = s_i * inner(v)[p_i] = s_i * t_{p_i} * v[q_{p_i}]
        let mut perm = [0; 3];
        let mut flip = [false; 3];
        for i in 0..3 {
            perm[i] = inner.perm[self.perm[i]];
            flip[i] = self.flip[i] ^ inner.flip[self.perm[i]];
        }
        CubeSymmetry { perm, flip }
    }
}
