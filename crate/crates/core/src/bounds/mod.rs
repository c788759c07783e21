//! Genus bounds for complete bipartite graphs, the Kleitman parity invariant,
//! amalgamation inequalities and search-based upper-bound certificates.

mod amalgamation;
mod search;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::drawing::{convex_base_drawing, move_effects, CrosscapDrawing, Graph};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::tournament::{verify_block_bound, BlockBoundReport, BlockTournamentInstance};

pub use amalgamation::{
    amalgamation_check, amalgamation_k, two_component_reduction, AmalgamationInput, AmalgamationReport,
    InequalityCheck, InequalityStatus, Interval, TwoComponentReduction,
};
pub use search::{upper_bound_search, BoundKind, SearchConfig, UpperBoundCertificate};

/// `⌈(m−2)(n−2)/4⌉`, the orientable genus of `K_{m,n}`.
pub fn ringel_genus(m: usize, n: usize) -> Result<usize> {
    check_ringel(m, n)?;
    Ok(((m - 2) * (n - 2)).div_ceil(4))
}

/// `⌈(m−2)(n−2)/2⌉`, the Euler genus of `K_{m,n}`.
pub fn ringel_euler_genus(m: usize, n: usize) -> Result<usize> {
    check_ringel(m, n)?;
    Ok(((m - 2) * (n - 2)).div_ceil(2))
}

fn check_ringel(m: usize, n: usize) -> Result<()> {
    if m < 2 || n < 2 {
        return Err(Error::Domain(format!("K_{{{m},{n}}} needs both sides of size at least 2")));
    }
    Ok(())
}

pub(crate) mod ratio_text {
    use num_rational::Ratio;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KmnBoundReport {
    pub m: usize,
    pub n: usize,
    pub g_ringel: usize,
    pub eg_ringel: usize,
    pub g0_lower: usize,
    pub eg0_lower: usize,
    #[serde(with = "ratio_text")]
    pub g0_raw: Ratio<i64>,
    #[serde(with = "ratio_text")]
    pub eg0_raw: Ratio<i64>,
    /// `g0_lower / g_ringel`.
    #[serde(with = "ratio_text")]
    pub ratio: Ratio<i64>,
}

impl KmnBoundReport {
    /// Both lower bounds sit below the genus values.
    pub fn consistent(&self) -> bool {
        self.g0_lower <= self.g_ringel && self.eg0_lower <= self.eg_ringel
    }
}

fn ceil_clamped(r: Ratio<i64>) -> usize {
    r.ceil().to_integer().max(0) as usize
}

/// Lower bounds on `g₀(K_{m,n})` and `eg₀(K_{m,n})`. The sides are sorted,
/// so `(5, 3)` is read as `K_{3,5}`.
pub fn thm1_lower_bounds(m: usize, n: usize) -> Result<KmnBoundReport> {
    let (m, n) = (m.min(n), m.max(n));
    if m < 3 {
        return Err(Error::Domain(format!("the K_{{m,n}} lower bounds need m, n ≥ 3, got {m}")));
    }
    let (mi, ni) = (m as i64, n as i64);
    let product = Ratio::from_integer((mi - 2) * (ni - 2));
    let g0_raw = product / 4 - Ratio::new(mi - 3, 2);
    let eg0_raw = product / 2 - Ratio::from_integer(mi - 3);
    let g_ringel = ringel_genus(m, n)?;
    let g0_lower = ceil_clamped(g0_raw);
    Ok(KmnBoundReport {
        m,
        n,
        g_ringel,
        eg_ringel: ringel_euler_genus(m, n)?,
        g0_lower,
        eg0_lower: ceil_clamped(eg0_raw),
        g0_raw,
        eg0_raw,
        ratio: Ratio::new(g0_lower as i64, g_ringel as i64),
    })
}

/// Vertex roles in a drawing of `K_{m,n}`: `left[i]` is `u_i`, `right[j]` is `v_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KmnLabeling {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl KmnLabeling {
    /// Labeling of [`Graph::complete_bipartite`]: `u_i = i`, `v_j = m + j`.
    pub fn standard(m: usize, n: usize) -> Self {
        Self {
            left: (0..m).collect(),
            right: (m..m + n).collect(),
        }
    }

    /// Edge index of `u_i v_j` for every pair, after checking that the graph
    /// is exactly the complete bipartite graph on the labelled sides.
    fn edge_grid(&self, g: &Graph) -> Result<Vec<Vec<usize>>> {
        let (m, n) = (self.left.len(), self.right.len());
        let mut seen = vec![false; g.vertex_count()];
        for &v in self.left.iter().chain(&self.right) {
            if v >= g.vertex_count() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Structure(format!("labeling repeats or misses vertex {v}")));
            }
        }
        if m + n != g.vertex_count() || g.edge_count() != m * n {
            return Err(Error::Structure(format!(
                "graph with {} vertices and {} edges is not K_{{{m},{n}}}",
                g.vertex_count(),
                g.edge_count()
            )));
        }
        self.left
            .iter()
            .map(|&u| {
                self.right
                    .iter()
                    .map(|&v| {
                        g.edge_index(u, v)
                            .ok_or_else(|| Error::Structure(format!("edge ({u}, {v}) is missing")))
                    })
                    .collect()
            })
            .collect()
    }
}

fn require_even(d: &CrosscapDrawing) -> Result<()> {
    if let Some((e, f)) = d.first_odd_independent_pair() {
        return Err(Error::Precondition(format!(
            "drawing is not independently even: edges {e} and {f} cross oddly"
        )));
    }
    Ok(())
}

fn require_zero_vectors(d: &CrosscapDrawing, edges: impl IntoIterator<Item = usize>) -> Result<()> {
    for e in edges {
        if d.y(e).iter().any(|&b| b) {
            return Err(Error::Precondition(format!("edge {e} has a nonzero crosscap vector")));
        }
    }
    Ok(())
}

/// `y_{b1}·y_{c2} + y_{c1}·y_{b2}` for a drawing of `K_{3,3}` with sides
/// `{a, b, c}` and `{0, 1, 2}`, where the star edges at `a` and at `0` carry
/// zero vectors. On every independently even drawing this is 1.
pub fn kleitman_check(d: &CrosscapDrawing, labeling: &KmnLabeling) -> Result<bool> {
    if labeling.left.len() != 3 || labeling.right.len() != 3 {
        return Err(Error::Structure("the Kleitman labeling needs three vertices per side".into()));
    }
    let grid = labeling.edge_grid(d.graph())?;
    require_even(d)?;
    require_zero_vectors(d, grid[0].iter().copied().chain([grid[1][0], grid[2][0]]))?;
    Ok(d.dot(grid[1][1], grid[2][2]) ^ d.dot(grid[2][1], grid[1][2]))
}

/// Sum of the independent-pair parities across the move span of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParitySweep {
    pub pairs: usize,
    pub dimension: usize,
    pub points: u64,
    pub odd_points: u64,
}

impl ParitySweep {
    pub fn all_odd(&self) -> bool {
        self.odd_points == self.points
    }
}

/// Enumerates every parity vector reachable by vertex-edge moves from the
/// convex drawing and counts those with an odd number of odd pairs.
pub fn parity_sweep(g: &Graph, max_dimension: usize) -> Result<ParitySweep> {
    let fx = move_effects(g);
    let pairs = fx.pairs.len();
    if pairs > 64 {
        return Err(Error::Capacity { bits: pairs, limit: 64 });
    }
    let basis = fx.effects.row_basis();
    let dimension = basis.rows();
    if dimension > max_dimension {
        return Err(Error::Capacity {
            bits: dimension,
            limit: max_dimension,
        });
    }
    let pack = |bits: &[bool]| bits.iter().enumerate().fold(0u64, |w, (k, &b)| w | (b as u64) << k);
    let rows: Vec<u64> = (0..dimension).map(|r| pack(&basis.row_bits(r))).collect();
    let mut current = pack(&fx.parities(&convex_base_drawing(g)));
    let points = 1u64 << dimension;
    let mut odd_points = (current.count_ones() & 1) as u64;
    for step in 1..points {
        current ^= rows[step.trailing_zeros() as usize];
        odd_points += (current.count_ones() & 1) as u64;
    }
    Ok(ParitySweep {
        pairs,
        dimension,
        points,
        odd_points,
    })
}

/// Gram blocks of a normalized even drawing of `K_{m,n}` and their
/// tournament decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KmnBlockReport {
    pub m: usize,
    pub n: usize,
    /// `(m−1)(n−1)` square matrix of blocks `y_{u_i v_j} · y_{u_k v_l}`, `i, j, k, l ≥ 1`.
    pub matrix: Gf2Matrix,
    /// Every off-diagonal block is a tournament matrix.
    pub tournament_blocks: bool,
    /// Present when the blocks split as `B + D` or `J + B + D` for one tournament `B`.
    pub decomposition: Option<BlockTournamentInstance>,
    pub bound: Option<BlockBoundReport>,
}

impl KmnBlockReport {
    pub fn holds(&self) -> bool {
        self.tournament_blocks && self.bound.is_some_and(|b| b.holds)
    }
}

pub fn kmn_block_matrix(d: &CrosscapDrawing, labeling: &KmnLabeling) -> Result<KmnBlockReport> {
    let (m, n) = (labeling.left.len(), labeling.right.len());
    if m < 3 || n < 2 {
        return Err(Error::Domain(format!("block matrix needs K_{{m,n}} with m ≥ 3, n ≥ 2, got ({m}, {n})")));
    }
    let grid = labeling.edge_grid(d.graph())?;
    require_even(d)?;
    require_zero_vectors(d, grid[0].iter().copied().chain((1..m).map(|i| grid[i][0])))?;
    let idx: Vec<usize> = (1..m).flat_map(|i| grid[i][1..].iter().copied()).collect();
    let matrix = d.gram_matrix().principal(&idx);
    let size = n - 1;
    let mut tournament_blocks = true;
    for i in 0..m - 1 {
        for k in 0..m - 1 {
            if i != k {
                let block = matrix.submatrix(i * size, k * size, size, size)?;
                tournament_blocks &= crate::tournament::is_tournament(&block)?;
            }
        }
    }
    let decomposition = BlockTournamentInstance::from_full(m - 1, size, matrix.clone()).ok();
    let bound = decomposition.as_ref().map(verify_block_bound).transpose()?;
    Ok(KmnBlockReport {
        m,
        n,
        matrix,
        tournament_blocks,
        decomposition,
        bound,
    })
}

/// Ranks entering the rank inequality for a symmetric matrix partitioned into
/// edge classes `E₁, F₁, F₂, E₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub rank_e1_f1: usize,
    pub rank_e1: usize,
    pub rank_e2_f2: usize,
    pub rank_e2: usize,
    pub lhs: i64,
    pub rhs: usize,
    pub holds: bool,
}

/// `2(rank[A_{E₁E₁} A_{E₁F₁}] + rank[A_{E₂E₂} A_{E₂F₂}]) − rank A_{E₁E₁} − rank A_{E₂E₂} ≤ rank b`.
/// The blocks `(E₁, F₂)`, `(E₁, E₂)` and `(F₁, E₂)` must vanish.
pub fn claim_rank_inequality_check(b: &Gf2Matrix, sizes: [usize; 4]) -> Result<ClaimReport> {
    b.require_symmetric("claim_rank_inequality_check")?;
    let total: usize = sizes.iter().sum();
    if b.rows() != total {
        return Err(Error::Structure(format!(
            "class sizes sum to {total} but the matrix is {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let offsets = [0, sizes[0], sizes[0] + sizes[1], sizes[0] + sizes[1] + sizes[2]];
    let block = |i: usize, j: usize| b.submatrix(offsets[i], offsets[j], sizes[i], sizes[j]);
    const NAMES: [&str; 4] = ["E1", "F1", "F2", "E2"];
    for (i, j) in [(0, 2), (0, 3), (1, 3)] {
        if !block(i, j)?.is_zero() {
            return Err(Error::Structure(format!(
                "block ({}, {}) must be zero",
                NAMES[i], NAMES[j]
            )));
        }
    }
    let rank_e1_f1 = block(0, 0)?.hstack(&block(0, 1)?)?.rank();
    let rank_e2_f2 = block(3, 3)?.hstack(&block(3, 2)?)?.rank();
    let rank_e1 = block(0, 0)?.rank();
    let rank_e2 = block(3, 3)?.rank();
    let lhs = 2 * (rank_e1_f1 + rank_e2_f2) as i64 - (rank_e1 + rank_e2) as i64;
    let rhs = b.rank();
    Ok(ClaimReport {
        rank_e1_f1,
        rank_e1,
        rank_e2_f2,
        rank_e2,
        lhs,
        rhs,
        holds: lhs <= rhs as i64,
    })
}
