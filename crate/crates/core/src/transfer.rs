//! Minimal-path counting in the independence lattice and the 3×3 transfer
//! matrices built from it.
//!
//! Paths start from an adjacent pair `(B0, B1)` and add blocks one at a
//! time. A new block must be a neighbour of the last block and, under the
//! chosen [`Exclusion`], must avoid every earlier block. Counts are tallied
//! by the type of the starting pair and of the final pair.
//!
//! Enumeration is a depth-first search over a padded occupancy grid: each
//! block already behind the walk stamps its forbidden footprint into the
//! grid, so a candidate is accepted with a single lookup.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::symmetry::CubeSymmetry;
use crate::upsilon::{add, chebyshev, pair_type, upsilon_neighbors, Offset, PairType};
use crate::{Error, Result};

/// Which earlier blocks a new block must avoid (besides being distinct).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exclusion {
    /// Chordless: not adjacent in the independence lattice to any block
    /// other than its predecessor.
    Minimal,
    /// Chordless and additionally not overlapping any earlier block, so all
    /// blocks of the path are mutually independent.
    Independent,
}

/// What `k` counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathLength {
    /// `k` blocks added beyond the starting pair.
    NewBlocks,
    /// `k` steps in total, the starting pair's step included.
    TotalSteps,
}

/// How start and end types index the matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Entry `(i, j)`: paths starting in type `j` and ending in type `i`, so
    /// that end-type counts evolve as `n ↦ M n`.
    EndByStart,
    /// Entry `(i, j)`: paths starting in type `i` and ending in type `j`.
    StartByEnd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Convention {
    pub exclusion: Exclusion,
    pub length: PathLength,
    pub orientation: Orientation,
}

impl Default for Convention {
    fn default() -> Self {
        Convention {
            exclusion: Exclusion::Independent,
            length: PathLength::NewBlocks,
            orientation: Orientation::EndByStart,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exclusion = match self.exclusion {
            Exclusion::Minimal => "minimal",
            Exclusion::Independent => "independent",
        };
        let length = match self.length {
            PathLength::NewBlocks => "new-blocks",
            PathLength::TotalSteps => "total-steps",
        };
        let orientation = match self.orientation {
            Orientation::EndByStart => "rows=end-type,cols=start-type",
            Orientation::StartByEnd => "rows=start-type,cols=end-type",
        };
        write!(f, "exclusion={exclusion} length={length} {orientation}")
    }
}

impl Convention {
    /// Blocks added beyond the starting pair for step count `k`.
    pub fn new_blocks(&self, k: usize) -> usize {
        match self.length {
            PathLength::NewBlocks => k,
            PathLength::TotalSteps => k - 1,
        }
    }
}

/// The matrix as printed for `k = 6`, rows and columns in the order
/// face-centre, face-edge, face-corner.
pub const REFERENCE_M6: [[u64; 3]; 3] = [
    [139_068_488, 147_798_994, 145_131_436],
    [708_801_255, 754_445_397, 740_361_638],
    [438_727_951, 465_222_047, 455_921_413],
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    k: usize,
    /// `None` for a matrix taken from print rather than enumerated.
    convention: Option<Convention>,
    entries: [[BigUint; 3]; 3],
}

impl TransferMatrix {
    pub fn from_u64(k: usize, convention: Option<Convention>, rows: [[u64; 3]; 3]) -> Self {
        TransferMatrix {
            k,
            convention,
            entries: rows.map(|r| r.map(BigUint::from)),
        }
    }

    /// The printed `k = 6` matrix.
    pub fn reference() -> Self {
        TransferMatrix::from_u64(6, None, REFERENCE_M6)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn convention(&self) -> Option<Convention> {
        self.convention
    }

    pub fn entries(&self) -> &[[BigUint; 3]; 3] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i][j]
    }

    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        let conv = |x: &BigUint| x.to_string().parse::<f64>().expect("decimal integer");
        [0, 1, 2].map(|i| [0, 1, 2].map(|j| conv(&self.entries[i][j])))
    }

    /// Text block: metadata lines followed by the three rows.
    pub fn render(&self) -> String {
        let mut out = format!("k: {}\n", self.k);
        match self.convention {
            Some(c) => out.push_str(&format!("convention: {c}\n")),
            None => out.push_str("convention: reference (printed)\n"),
        }
        out.push_str("types: face-centre face-edge face-corner\n");
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Raw counts `[start type][end type]` of paths adding `new_blocks` blocks
/// to a fixed starting pair of each type.
pub fn count_paths(new_blocks: usize, exclusion: Exclusion, use_symmetry: bool) -> [[u64; 3]; 3] {
    let mut counts = [[0u64; 3]; 3];
    if new_blocks == 0 {
        for (t, row) in counts.iter_mut().enumerate() {
            row[t] = 1;
        }
        return counts;
    }
    let neighbors = upsilon_neighbors();
    let layout = Layout::new(new_blocks, exclusion, neighbors.offsets());

    // (start type, first added block offset from B1, multiplicity)
    let mut tasks: Vec<(usize, Offset, u64)> = Vec::new();
    for start in PairType::ALL {
        let rep = start.representative();
        let stabilizer: Vec<CubeSymmetry> = CubeSymmetry::all()
            .into_iter()
            .filter(|g| g.apply(rep) == rep)
            .collect();
        let mut done = std::collections::HashSet::new();
        for &o in neighbors.offsets() {
            if done.contains(&o) {
                continue;
            }
            if use_symmetry {
                let orbit: std::collections::HashSet<Offset> =
                    stabilizer.iter().map(|g| g.apply(o)).collect();
                let weight = orbit.len() as u64;
                done.extend(orbit);
                tasks.push((start.index(), o, weight));
            } else {
                done.insert(o);
                tasks.push((start.index(), o, 1));
            }
        }
    }

    let partials: Vec<(usize, [u64; 3])> = tasks
        .par_iter()
        .map(|&(start, first, weight)| {
            let mut walker = Walker::new(&layout);
            let b0 = layout.index([0, 0, 0]);
            let b1 = layout.index(PairType::ALL[start].representative());
            let b2 = layout.index(add(PairType::ALL[start].representative(), first));
            let mut tally = [0u64; 3];
            walker.stamp(b0, 1);
            if walker.free(b2) {
                if new_blocks == 1 {
                    tally[pair_type(first).expect("neighbour").index()] += 1;
                } else {
                    walker.stamp(b1, 1);
                    walker.extend(b2, new_blocks - 1, &mut tally);
                }
            }
            (start, tally.map(|c| c * weight))
        })
        .collect();
    for (start, tally) in partials {
        for t in 0..3 {
            counts[start][t] += tally[t];
        }
    }
    counts
}

/// Padded cubic grid large enough to hold any path of the requested length
/// plus the footprint of its blocks.
struct Layout {
    radius: i32,
    width: i32,
    steps: Vec<(isize, usize)>,
    footprint: Vec<isize>,
}

impl Layout {
    fn new(new_blocks: usize, exclusion: Exclusion, neighbors: &[Offset]) -> Self {
        let radius = 2 * (new_blocks as i32 + 1) + 3;
        let width = 2 * radius + 1;
        let delta = |o: Offset| -> isize {
            (o[0] as isize)
                + (width as isize) * ((o[1] as isize) + (width as isize) * (o[2] as isize))
        };
        let steps = neighbors
            .iter()
            .map(|&o| (delta(o), pair_type(o).expect("neighbour").index()))
            .collect();
        let mut shape: Vec<Offset> = neighbors.to_vec();
        shape.push([0, 0, 0]);
        if exclusion == Exclusion::Independent {
            for x in -1..=1 {
                for y in -1..=1 {
                    for z in -1..=1 {
                        let o = [x, y, z];
                        if chebyshev(o) == 1 {
                            shape.push(o);
                        }
                    }
                }
            }
        }
        let footprint = shape.into_iter().map(delta).collect();
        Layout {
            radius,
            width,
            steps,
            footprint,
        }
    }

    fn index(&self, o: Offset) -> isize {
        let r = self.radius;
        let w = self.width as isize;
        ((o[0] + r) as isize) + w * (((o[1] + r) as isize) + w * ((o[2] + r) as isize))
    }

    fn cells(&self) -> usize {
        (self.width as usize).pow(3)
    }
}

struct Walker<'a> {
    layout: &'a Layout,
    blocked: Vec<u8>,
}

impl<'a> Walker<'a> {
    fn new(layout: &'a Layout) -> Self {
        Walker {
            layout,
            blocked: vec![0; layout.cells()],
        }
    }

    #[inline]
    fn free(&self, cell: isize) -> bool {
        self.blocked[cell as usize] == 0
    }

    fn stamp(&mut self, block: isize, sign: i8) {
        for &d in &self.layout.footprint {
            let c = (block + d) as usize;
            self.blocked[c] = self.blocked[c].wrapping_add_signed(sign);
        }
    }

    /// Adds `left` more blocks after `last`. Every block before `last` is
    /// stamped; `last` itself is not.
    fn extend(&mut self, last: isize, left: usize, tally: &mut [u64; 3]) {
        let layout = self.layout;
        if left == 1 {
            for &(d, t) in &layout.steps {
                if self.free(last + d) {
                    tally[t] += 1;
                }
            }
            return;
        }
        let mut next = [0isize; 54];
        let mut n = 0;
        for &(d, _) in &layout.steps {
            if self.free(last + d) {
                next[n] = last + d;
                n += 1;
            }
        }
        if n == 0 {
            return;
        }
        self.stamp(last, 1);
        for &c in &next[..n] {
            self.extend(c, left - 1, tally);
        }
        self.stamp(last, -1);
    }
}

/// Arranges raw `[start][end]` counts per the orientation.
pub fn orient(counts: &[[u64; 3]; 3], orientation: Orientation) -> [[u64; 3]; 3] {
    match orientation {
        Orientation::StartByEnd => *counts,
        Orientation::EndByStart => [0, 1, 2].map(|i| [0, 1, 2].map(|j| counts[j][i])),
    }
}

pub fn transfer_matrix_with(k: usize, convention: Convention) -> Result<TransferMatrix> {
    if k < 1 {
        return Err(Error::Domain(
            "transfer matrix step count must be at least 1".into(),
        ));
    }
    let counts = count_paths(convention.new_blocks(k), convention.exclusion, true);
    Ok(TransferMatrix::from_u64(
        k,
        Some(convention),
        orient(&counts, convention.orientation),
    ))
}

/// `M_k` under the default convention.
pub fn transfer_matrix(k: usize) -> Result<TransferMatrix> {
    transfer_matrix_with(k, Convention::default())
}

/// One point of the convention search: an enumerated matrix, the type
/// relabeling that brings it closest to the target, and how close that is.
#[derive(Clone, Debug)]
pub struct ConventionFit {
    pub convention: Convention,
    /// `permutation[i]` is the enumerated type shown in target row/col `i`.
    pub permutation: [usize; 3],
    pub matrix: [[u64; 3]; 3],
    pub max_relative_error: f64,
}

impl ConventionFit {
    pub fn is_exact(&self) -> bool {
        self.max_relative_error == 0.0
    }

    pub fn transfer_matrix(&self, k: usize) -> TransferMatrix {
        TransferMatrix::from_u64(k, Some(self.convention), self.matrix)
    }
}

/// Result of matching enumerated matrices against a printed one.
#[derive(Clone, Debug)]
pub struct ConventionSearch {
    pub k: usize,
    pub target: [[u64; 3]; 3],
    /// Best fit for every (exclusion, length, orientation) triple.
    pub fits: Vec<ConventionFit>,
}

impl ConventionSearch {
    pub fn matched(&self) -> Option<&ConventionFit> {
        self.fits.iter().find(|f| f.is_exact())
    }

    pub fn closest(&self) -> &ConventionFit {
        self.fits
            .iter()
            .min_by(|a, b| a.max_relative_error.total_cmp(&b.max_relative_error))
            .expect("non-empty search")
    }
}

impl ConventionSearch {
    /// Human-readable account of how each convention compares with the
    /// target, and which matrix certification should use.
    pub fn report(&self) -> String {
        let mut out = format!("convention search, k = {}\n", self.k);
        out.push_str("target:\n");
        out.push_str(&render_rows(&self.target));
        out.push_str(&format!(
            "target reversal-balanced under some type order: {}\n",
            reversal_balanced_any(&self.target)
        ));
        let describe = |m: &[[u64; 3]; 3]| -> String {
            let tm = TransferMatrix::from_u64(self.k, None, *m);
            let eig = crate::certificate::dominant_eigenvalue(&tm)
                .map(|(v, r)| format!("dominant eigenvalue {v:.6e}, per-step {r:.5}"))
                .unwrap_or_else(|e| format!("eigenvalue unavailable: {e}"));
            let cert = if self.k == 6 {
                match crate::certificate::verify_threshold(&tm) {
                    Ok(_) => "sign check passes".to_string(),
                    Err(e) => format!("sign check fails ({e})"),
                }
            } else {
                "sign check needs k = 6".to_string()
            };
            format!("{eig}; {cert}")
        };
        out.push_str(&format!("target: {}\n", describe(&self.target)));
        for fit in &self.fits {
            out.push_str(&format!(
                "\n{}\n  type order {:?}, max relative error {:.4e}{}\n",
                fit.convention,
                fit.permutation,
                fit.max_relative_error,
                if fit.is_exact() { " (exact)" } else { "" }
            ));
            for line in render_rows(&fit.matrix).lines() {
                out.push_str(&format!("  {line}\n"));
            }
            out.push_str(&format!("  {}\n", describe(&fit.matrix)));
        }
        match self.matched() {
            Some(fit) => out.push_str(&format!("\nmatched: {}\n", fit.convention)),
            None => out.push_str(&format!(
                "\nno convention reproduces the target; closest is {} (max relative error \
                 {:.4e}). Certification uses the target matrix as printed.\n",
                self.closest().convention,
                self.closest().max_relative_error
            )),
        }
        out
    }
}

fn render_rows(m: &[[u64; 3]; 3]) -> String {
    m.iter()
        .map(|r| format!("{} {} {}\n", r[0], r[1], r[2]))
        .collect()
}

/// Path reversal swaps start and end types, so any count matrix built from
/// a reversal-closed rule satisfies `mult(j) m[i][j] = mult(i) m[j][i]`
/// (rows = end type). Checked for every assignment of types to rows, in
/// both orientations.
pub fn reversal_balanced_any(m: &[[u64; 3]; 3]) -> bool {
    let mult = PairType::ALL.map(|t| t.multiplicity() as u128);
    TYPE_PERMUTATIONS.iter().any(|perm| {
        let w = perm.map(|t| mult[t]);
        let balanced = |transpose: bool| {
            (0..3).all(|i| {
                (0..3).all(|j| {
                    let (a, b) = if transpose {
                        (w[i], w[j])
                    } else {
                        (w[j], w[i])
                    };
                    a * m[i][j] as u128 == b * m[j][i] as u128
                })
            })
        };
        balanced(false) || balanced(true)
    })
}

const TYPE_PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn max_relative_error(a: &[[u64; 3]; 3], b: &[[u64; 3]; 3]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let diff = (a[i][j] as f64 - b[i][j] as f64).abs();
            worst = worst.max(diff / (b[i][j].max(1) as f64));
        }
    }
    worst
}

/// Enumerates every exclusion rule and length reading for step count `k`,
/// then tries both orientations and all six type relabelings against
/// `target`.
pub fn search_conventions(k: usize, target: &[[u64; 3]; 3]) -> Result<ConventionSearch> {
    if k < 1 {
        return Err(Error::Domain(
            "transfer matrix step count must be at least 1".into(),
        ));
    }
    let mut fits = Vec::new();
    for exclusion in [Exclusion::Independent, Exclusion::Minimal] {
        for length in [PathLength::NewBlocks, PathLength::TotalSteps] {
            let probe = Convention {
                exclusion,
                length,
                orientation: Orientation::EndByStart,
            };
            let counts = count_paths(probe.new_blocks(k), exclusion, true);
            for orientation in [Orientation::EndByStart, Orientation::StartByEnd] {
                let base = orient(&counts, orientation);
                let best = TYPE_PERMUTATIONS
                    .iter()
                    .map(|&perm| {
                        let m = [0, 1, 2].map(|i| [0, 1, 2].map(|j| base[perm[i]][perm[j]]));
                        (perm, m, max_relative_error(&m, target))
                    })
                    .min_by(|a, b| a.2.total_cmp(&b.2))
                    .expect("six permutations");
                fits.push(ConventionFit {
                    convention: Convention {
                        exclusion,
                        length,
                        orientation,
                    },
                    permutation: best.0,
                    matrix: best.1,
                    max_relative_error: best.2,
                });
            }
        }
    }
    Ok(ConventionSearch {
        k,
        target: *target,
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::upsilon::{is_neighbor, overlaps};

    /// Independent oracle: grow explicit block lists and check every pair.
    fn brute_force(new_blocks: usize, exclusion: Exclusion) -> [[u64; 3]; 3] {
        fn ok(path: &[Offset], c: Offset, exclusion: Exclusion) -> bool {
            let last = path.len() - 1;
            path.iter().enumerate().all(|(i, &b)| {
                if b == c {
                    return false;
                }
                if i == last {
                    return true;
                }
                let chord = is_neighbor(b, c);
                let overlap = exclusion == Exclusion::Independent && overlaps(b, c);
                !chord && !overlap
            })
        }
        fn go(
            path: &mut Vec<Offset>,
            left: usize,
            ex: Exclusion,
            nb: &[Offset],
            out: &mut [u64; 3],
        ) {
            if left == 0 {
                let n = path.len();
                let o = crate::upsilon::sub(path[n - 1], path[n - 2]);
                out[pair_type(o).unwrap().index()] += 1;
                return;
            }
            let last = *path.last().unwrap();
            for &o in nb {
                let c = add(last, o);
                if ok(path, c, ex) {
                    path.push(c);
                    go(path, left - 1, ex, nb, out);
                    path.pop();
                }
            }
        }
        let nb = upsilon_neighbors().offsets().to_vec();
        let mut counts = [[0; 3]; 3];
        for t in PairType::ALL {
            let mut path = vec![[0, 0, 0], t.representative()];
            go(
                &mut path,
                new_blocks,
                exclusion,
                &nb,
                &mut counts[t.index()],
            );
        }
        counts
    }

    #[test]
    fn small_counts_match_brute_force() {
        for exclusion in [Exclusion::Minimal, Exclusion::Independent] {
            for k in 1..=3 {
                let fast = count_paths(k, exclusion, true);
                assert_eq!(fast, brute_force(k, exclusion), "{exclusion:?} k={k}");
                assert_eq!(fast, count_paths(k, exclusion, false));
            }
        }
    }

    #[test]
    fn single_step_counts() {
        // Frozen from the brute-force oracle above.
        assert_eq!(
            count_paths(1, Exclusion::Minimal, true),
            [[5, 20, 16], [5, 18, 20], [4, 20, 19]]
        );
        assert_eq!(
            count_paths(1, Exclusion::Independent, true),
            [[5, 16, 12], [4, 15, 16], [3, 16, 17]]
        );
        let m1 = transfer_matrix(1).unwrap();
        assert_eq!(m1.entry(0, 2), &BigUint::from(3u32));
    }

    #[test]
    fn reversal_balance() {
        // Reversing a path swaps its start and end types, so
        // mult(i) * N(i -> j) = mult(j) * N(j -> i).
        for exclusion in [Exclusion::Minimal, Exclusion::Independent] {
            let c = count_paths(3, exclusion, true);
            for i in PairType::ALL {
                for j in PairType::ALL {
                    assert_eq!(
                        i.multiplicity() as u64 * c[i.index()][j.index()],
                        j.multiplicity() as u64 * c[j.index()][i.index()]
                    );
                }
            }
        }
    }

    #[test]
    fn zero_new_blocks_is_identity() {
        let m = transfer_matrix_with(
            1,
            Convention {
                length: PathLength::TotalSteps,
                ..Convention::default()
            },
        )
        .unwrap();
        assert_eq!(
            m.to_f64(),
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        );
        assert!(transfer_matrix(0).is_err());
    }

    #[test]
    fn printed_matrix_is_not_reversal_balanced() {
        assert!(!reversal_balanced_any(&REFERENCE_M6));
        for exclusion in [Exclusion::Minimal, Exclusion::Independent] {
            let c = count_paths(2, exclusion, true);
            assert!(reversal_balanced_any(&orient(&c, Orientation::EndByStart)));
            assert!(reversal_balanced_any(&c));
        }
    }

    #[test]
    fn submultiplicative() {
        // Splicing an a-step and a b-step path at a shared pair drops the
        // constraints across the splice, so it can only over-count.
        let m = |k| {
            let c = count_paths(k, Exclusion::Independent, true);
            orient(&c, Orientation::EndByStart)
        };
        let mul = |a: [[u64; 3]; 3], b: [[u64; 3]; 3]| {
            [0, 1, 2].map(|i| [0, 1, 2].map(|j| (0..3).map(|t| a[i][t] * b[t][j]).sum::<u64>()))
        };
        for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
            let whole = m(a + b);
            let spliced = mul(m(b), m(a));
            for i in 0..3 {
                for j in 0..3 {
                    assert!(whole[i][j] <= spliced[i][j], "a={a} b={b} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn search_report_small_k() {
        let target = orient(
            &count_paths(2, Exclusion::Minimal, true),
            Orientation::StartByEnd,
        );
        let search = search_conventions(2, &target).unwrap();
        let hit = search.matched().expect("own counts are found");
        assert_eq!(hit.convention.exclusion, Exclusion::Minimal);
        assert!(search.report().contains("matched: exclusion=minimal"));
    }

    #[test]
    fn render_lists_rows() {
        let text = TransferMatrix::reference().render();
        assert!(text.contains("139068488 147798994 145131436"));
        assert!(text.contains("convention: reference"));
    }
}
