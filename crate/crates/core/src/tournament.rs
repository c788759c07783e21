//! Tournament matrices and rank bounds for block matrices built from them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::drawing::{convex_base_drawing, move_effects, CrosscapDrawing, Graph, SpanningForest};
use crate::error::{Error, Result};
use crate::gf2::{gram_factor, Gf2Matrix};

/// `a_ij + a_ji = 1` for every `i ≠ j`; the diagonal is unconstrained.
pub fn is_tournament(a: &Gf2Matrix) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "is_tournament",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    Ok((0..n).all(|i| (i + 1..n).all(|j| a.get(i, j) != a.get(j, i))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeCaenReport {
    pub n: usize,
    pub rank: usize,
    pub bound: usize,
    pub holds: bool,
}

/// Compares the rank of a tournament matrix with `⌈(n−1)/2⌉`.
pub fn decaen_check(a: &Gf2Matrix) -> Result<DeCaenReport> {
    if !is_tournament(a)? {
        return Err(Error::Structure("decaen_check requires a tournament matrix".into()));
    }
    let n = a.rows();
    let rank = a.rank();
    let bound = n.saturating_sub(1).div_ceil(2);
    Ok(DeCaenReport {
        n,
        rank,
        bound,
        holds: rank >= bound,
    })
}

fn half_ceil_product(m: usize, n: usize) -> i64 {
    (((m - 1) * n.saturating_sub(1)).div_ceil(2)) as i64
}

/// `⌈(m−1)(n−1)/2⌉ − (m−2)`, clamped at zero.
pub fn block_bound(m: usize, n: usize) -> Result<usize> {
    check_block_dims(m, n)?;
    Ok((half_ceil_product(m, n) - (m as i64 - 2)).max(0) as usize)
}

/// The variant with `−(n−2)` in place of `−(m−2)`, clamped at zero.
pub fn block_bound_proof_tail(m: usize, n: usize) -> Result<usize> {
    check_block_dims(m, n)?;
    Ok((half_ceil_product(m, n) - (n as i64 - 2)).max(0) as usize)
}

fn check_block_dims(m: usize, n: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Domain(format!("block count must be at least 2, got {m}")));
    }
    if n < 1 {
        return Err(Error::Domain("block size must be at least 1".into()));
    }
    Ok(())
}

/// How an off-diagonal block relates to the base tournament.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockStructure {
    pub row: usize,
    pub col: usize,
    pub uses_j: bool,
    pub diag_perturbation: Vec<bool>,
}

/// Symmetric `m×m` grid of `n×n` blocks whose off-diagonal blocks are
/// `B + D` or `J + B + D` for one tournament `B` and diagonal `D`s.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTournamentInstance {
    pub m: usize,
    pub n: usize,
    pub base: Gf2Matrix,
    pub full: Gf2Matrix,
    pub structure: Vec<BlockStructure>,
}

impl BlockTournamentInstance {
    /// Decomposes a full matrix. The base tournament is read off block `(0, 1)`.
    pub fn from_full(m: usize, n: usize, full: Gf2Matrix) -> Result<Self> {
        check_block_dims(m, n)?;
        if full.rows() != m * n {
            return Err(Error::DimensionMismatch {
                op: "block tournament",
                left_rows: m * n,
                left_cols: m * n,
                right_rows: full.rows(),
                right_cols: full.cols(),
            });
        }
        full.require_symmetric("block tournament")?;
        let block = |i: usize, j: usize| full.submatrix(i * n, j * n, n, n).expect("in range");
        let mut base = block(0, 1);
        for k in 0..n {
            base.set(k, k, false);
        }
        if !is_tournament(&base)? {
            return Err(Error::Structure("off-diagonal block (0, 1) is not a tournament".into()));
        }
        let complement = base.add(&Gf2Matrix::ones(n, n))?.add(&Gf2Matrix::identity(n))?;
        let mut structure = Vec::with_capacity(m * (m - 1));
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let b = block(i, j);
                let mut off = b.clone();
                for k in 0..n {
                    off.set(k, k, false);
                }
                let uses_j = if off == base {
                    false
                } else if off == complement {
                    true
                } else {
                    return Err(Error::Structure(format!(
                        "off-diagonal block ({i}, {j}) is neither B nor J + B off the diagonal"
                    )));
                };
                let diag_perturbation = (0..n).map(|k| b.get(k, k) ^ uses_j).collect();
                structure.push(BlockStructure {
                    row: i,
                    col: j,
                    uses_j,
                    diag_perturbation,
                });
            }
        }
        Ok(Self {
            m,
            n,
            base,
            full,
            structure,
        })
    }

    /// Same off-diagonal blocks, random symmetric diagonal blocks.
    pub fn with_random_diagonal_blocks(&self, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut full = self.full.clone();
        for b in 0..self.m {
            for i in 0..self.n {
                for j in i..self.n {
                    let v = rng.gen_bool(0.5);
                    full.set(b * self.n + i, b * self.n + j, v);
                    full.set(b * self.n + j, b * self.n + i, v);
                }
            }
        }
        Self { full, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockBoundReport {
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    pub bound_stmt: usize,
    pub bound_proof_tail: usize,
    pub holds: bool,
    pub holds_proof_tail: bool,
    /// The two bounds disagree on whether this instance satisfies them.
    pub separates: bool,
}

pub fn verify_block_bound(inst: &BlockTournamentInstance) -> Result<BlockBoundReport> {
    let bound_stmt = block_bound(inst.m, inst.n)?;
    let bound_proof_tail = block_bound_proof_tail(inst.m, inst.n)?;
    let rank = inst.full.rank();
    let holds = rank >= bound_stmt;
    let holds_proof_tail = rank >= bound_proof_tail;
    Ok(BlockBoundReport {
        m: inst.m,
        n: inst.n,
        rank,
        bound_stmt,
        bound_proof_tail,
        holds,
        holds_proof_tail,
        separates: holds != holds_proof_tail,
    })
}

/// Uniformly random `n×n` tournament matrix with a random diagonal.
pub fn random_tournament(n: usize, rng: &mut impl Rng) -> Gf2Matrix {
    let mut a = Gf2Matrix::zeros(n, n);
    for i in 0..n {
        a.set(i, i, rng.gen_bool(0.5));
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                a.set(i, j, true);
            } else {
                a.set(j, i, true);
            }
        }
    }
    a
}

/// Star forest of `K_{m,n}` at `u_0` and `v_0`: edges `u_0 v_j` and `u_i v_0`.
pub fn kmn_star_forest(g: &Graph, m: usize, n: usize) -> Result<SpanningForest> {
    let mut edges: Vec<usize> = (0..n).map(|j| j).collect();
    edges.extend((1..m).map(|i| i * n));
    SpanningForest::from_edges(g, &edges)
}

/// Gram blocks `y_{u_i v_j} · y_{u_k v_l}` over `i, k ≥ 1`, `j, l ≥ 1` of a
/// drawing of `K_{m,n}`, as one `(m−1)(n−1)` square matrix.
pub fn kmn_gram_blocks(d: &CrosscapDrawing, m: usize, n: usize) -> Gf2Matrix {
    let idx: Vec<usize> = (1..m).flat_map(|i| (1..n).map(move |j| i * n + j)).collect();
    d.gram_matrix().principal(&idx)
}

/// A random independently even drawing of `K_{m,n}`, normalized on the star
/// forest at `u_0` and `v_0`.
pub fn random_even_kmn_drawing(m: usize, n: usize, rng: &mut impl Rng) -> Result<CrosscapDrawing> {
    let g = Graph::complete_bipartite(m, n);
    let fx = move_effects(&g);
    let mut plane = convex_base_drawing(&g);
    for &(v, e) in &fx.moves {
        if rng.gen_bool(0.5) {
            plane = plane.vertex_edge_move(v, e)?;
        }
    }
    let mut a = plane.representing_matrix(crate::drawing::AdjacentFill::Zero);
    for e in 0..g.edge_count() {
        for f in e..g.edge_count() {
            if !g.independent(e, f) && rng.gen_bool(0.5) {
                a.set(e, f, true);
                a.set(f, e, true);
            }
        }
    }
    let factor = gram_factor(&a)?.factor;
    let (d, even) = plane.synthesize(&factor)?;
    debug_assert!(even);
    d.normalize_forest(&kmn_star_forest(&g, m, n)?)
}

/// Block tournament instance from a random even drawing of `K_{m+1,n+1}`.
pub fn generate_instance(m: usize, n: usize, seed: u64) -> Result<BlockTournamentInstance> {
    check_block_dims(m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = random_even_kmn_drawing(m + 1, n + 1, &mut rng)?;
    BlockTournamentInstance::from_full(m, n, kmn_gram_blocks(&d, m + 1, n + 1))
}
