//! Minimum-rank completion of partial symmetric block matrices.
//!
//! Unknown blocks sit on the block diagonal and range over symmetric matrices.
//! The closed forms below come with explicit witnesses obtained by running
//! the congruence reduction in a [`workspace::Workspace`] and pulling an
//! optimal reduced completion back to the original coordinates. Every result
//! is re-checked by substitution.

mod oracle;
mod partial;
mod workspace;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use workspace::Workspace;

pub use oracle::{brute_force_minrank, DEFAULT_ORACLE_BITS};
pub use partial::{Block, Layout, PartialSymmetricMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompletionKind {
    Exact,
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionResult {
    pub value: usize,
    /// One symmetric matrix per unknown block, in block order.
    pub witnesses: Vec<Gf2Matrix>,
    pub achieved_rank: usize,
    pub kind: CompletionKind,
}

fn hcat(blocks: &[&Gf2Matrix]) -> Result<Gf2Matrix> {
    Gf2Matrix::block_assemble(&[blocks.iter().map(|b| (*b).clone()).collect()])
}

fn vcat(blocks: &[&Gf2Matrix]) -> Result<Gf2Matrix> {
    let grid: Vec<Vec<Gf2Matrix>> = blocks.iter().map(|b| vec![(*b).clone()]).collect();
    Gf2Matrix::block_assemble(&grid)
}

fn rows_match(op: &'static str, a: &Gf2Matrix, b: &Gf2Matrix) -> Result<()> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            op,
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    Ok(())
}

/// Substitutes the witnesses and measures the rank.
fn finish(p: &PartialSymmetricMatrix, value: usize, witnesses: Vec<Gf2Matrix>, kind: CompletionKind) -> Result<CompletionResult> {
    let full = p.complete(&witnesses)?;
    let achieved_rank = full.rank();
    Ok(CompletionResult {
        value,
        witnesses,
        achieved_rank,
        kind,
    })
}

/// `min_X rank [[a11, a12], [a12ᵀ, X]]` over symmetric `X`.
///
/// Equals `2·rank[a11 a12] − rank(a11)`.
pub fn minrank_corner(a11: &Gf2Matrix, a12: &Gf2Matrix) -> Result<CompletionResult> {
    a11.require_symmetric("minrank_corner")?;
    rows_match("minrank_corner", a11, a12)?;
    let p = PartialSymmetricMatrix::corner(a11, a12)?;
    let value = 2 * hcat(&[a11, a12])?.rank() - a11.rank();

    let mut ws = Workspace::new(p.zero_filled(), p.sizes(), vec![false, true]);
    let (pivots, _) = ws.reduce_symmetric(&ws.block(0));
    ws.isolate(&pivots, &ws.block(1));
    let q = a12.cols();
    let witnesses = ws.witnesses(&[(1, Gf2Matrix::zeros(q, q))]);
    finish(&p, value, witnesses, CompletionKind::Exact)
}

/// `min rank [[X₁, a12], [a12ᵀ, X₂]]` over symmetric `X₁, X₂`; equals `rank(a12)`.
///
/// `a12` may be rectangular.
pub fn minrank_two_diag(a12: &Gf2Matrix) -> Result<CompletionResult> {
    let p = PartialSymmetricMatrix::two_diag(a12)?;
    let mut ws = Workspace::new(p.zero_filled(), p.sizes(), vec![true, true]);
    let pairs = ws.smith(&ws.block(0), &ws.block(1), &[]);
    let (s1, s2) = (a12.rows(), a12.cols());
    let mut y1 = Gf2Matrix::zeros(s1, s1);
    let mut y2 = Gf2Matrix::zeros(s2, s2);
    for &(r, c) in &pairs {
        y1.set(r, r, true);
        y2.set(c - s1, c - s1, true);
    }
    let witnesses = ws.witnesses(&[(0, y1), (1, y2)]);
    finish(&p, pairs.len(), witnesses, CompletionKind::Exact)
}

/// Upper bound for `min rank [[a11, a12, a13], [a12ᵀ, X₂, a23], [a13ᵀ, a23ᵀ, X₃]]`
/// over symmetric `X₂, X₃`:
///
/// `2ρ[a11 a12 a13] + ρ[[a11, a12], [a13ᵀ, a23ᵀ]] − ρ[a11 a12] − ρ[a11 a13]`.
///
/// The witnesses reach the bound exactly.
pub fn minrank_three_upper(a11: &Gf2Matrix, a12: &Gf2Matrix, a13: &Gf2Matrix, a23: &Gf2Matrix) -> Result<CompletionResult> {
    a11.require_symmetric("minrank_three_upper")?;
    rows_match("minrank_three_upper", a11, a12)?;
    rows_match("minrank_three_upper", a11, a13)?;
    if a23.rows() != a12.cols() || a23.cols() != a13.cols() {
        return Err(Error::DimensionMismatch {
            op: "minrank_three_upper",
            left_rows: a12.cols(),
            left_cols: a13.cols(),
            right_rows: a23.rows(),
            right_cols: a23.cols(),
        });
    }
    let p = PartialSymmetricMatrix::three_upper(a11, a12, a13, a23)?;
    let mixed = Gf2Matrix::block_assemble(&[
        vec![a11.clone(), a12.clone()],
        vec![a13.transpose(), a23.transpose()],
    ])?;
    let value = 2 * hcat(&[a11, a12, a13])?.rank() + mixed.rank()
        - hcat(&[a11, a12])?.rank()
        - hcat(&[a11, a13])?.rank();

    let mut ws = Workspace::new(p.zero_filled(), p.sizes(), vec![false, true, true]);
    let (blk1, blk2, blk3) = (ws.block(0), ws.block(1), ws.block(2));
    let (pivots, z) = ws.reduce_symmetric(&blk1);
    let outer: Vec<usize> = blk2.iter().chain(&blk3).copied().collect();
    ws.isolate(&pivots, &outer);

    // Rows of the first block that reach the third block, then those that only reach the second.
    let pairs_b = ws.smith(&z, &blk3, &[]);
    let z_rest: Vec<usize> = z.iter().copied().filter(|r| !pairs_b.iter().any(|p| p.0 == *r)).collect();
    let pairs_a = ws.smith(&z_rest, &blk2, &[]);
    for &(b, _) in &pairs_b {
        for &(a, c) in &pairs_a {
            if ws.m.get(b, c) {
                ws.add(a, b);
            }
        }
    }
    let c21: Vec<usize> = pairs_a.iter().map(|p| p.1).collect();
    let b_rows: Vec<usize> = pairs_b.iter().map(|p| p.0).collect();
    let rest2: Vec<usize> = blk2.iter().copied().filter(|c| !c21.contains(c)).collect();
    let pairs_b1 = ws.smith(&b_rows, &rest2, &pairs_b);

    // Clear the (second, third) block on the columns matched above.
    for &(src, c) in pairs_a.iter().chain(&pairs_b1) {
        for &j in &blk3 {
            if ws.m.get(c, j) {
                ws.add(src, j);
            }
        }
    }
    let c23: Vec<usize> = rest2.iter().copied().filter(|c| !pairs_b1.iter().any(|p| p.1 == *c)).collect();
    for &i in &c23 {
        for &(b, c31) in &pairs_b {
            if ws.m.get(i, c31) {
                ws.add(b, i);
            }
        }
    }
    let c32: Vec<usize> = blk3.iter().copied().filter(|c| !pairs_b.iter().any(|p| p.1 == *c)).collect();
    let tail = ws.smith(&c23, &c32, &[]);

    let (q, s, off2, off3) = (a12.cols(), a13.cols(), a11.rows(), a11.rows() + a12.cols());
    let mut y2 = Gf2Matrix::zeros(q, q);
    let mut y3 = Gf2Matrix::zeros(s, s);
    for &(u, w) in &tail {
        y2.set(u - off2, u - off2, true);
        y3.set(w - off3, w - off3, true);
    }
    let witnesses = ws.witnesses(&[(1, y2), (2, y3)]);
    finish(&p, value, witnesses, CompletionKind::UpperBound)
}

/// Minimum rank of `[[a11, a12], [a21, X]]` over arbitrary `X`:
/// `ρ[a11 a12] + ρ[a11; a21] − ρ(a11)`.
pub fn davis_woerdeman(a11: &Gf2Matrix, a12: &Gf2Matrix, a21: &Gf2Matrix) -> Result<usize> {
    rows_match("davis_woerdeman", a11, a12)?;
    if a21.cols() != a11.cols() {
        return Err(Error::DimensionMismatch {
            op: "davis_woerdeman",
            left_rows: a11.rows(),
            left_cols: a11.cols(),
            right_rows: a21.rows(),
            right_cols: a21.cols(),
        });
    }
    Ok(hcat(&[a11, a12])?.rank() + vcat(&[a11, a21])?.rank() - a11.rank())
}

/// The ranks entering the three-block minimum-rank formula for general
/// (not necessarily symmetric) block matrices with unknown `X₂, X₃`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohenRanks {
    /// ρ[A11 A12 A13]
    pub row_all: usize,
    /// ρ[A11; A21; A31]
    pub col_all: usize,
    /// ρ[[A11, A12], [A31, A32]]
    pub mixed_12_31: usize,
    /// ρ[A11 A12]
    pub row_12: usize,
    /// ρ[A11; A31]
    pub col_31: usize,
    /// ρ[[A11, A13], [A21, A23]]
    pub mixed_13_21: usize,
    /// ρ[A11 A13]
    pub row_13: usize,
    /// ρ[A11; A21]
    pub col_21: usize,
}

impl CohenRanks {
    /// Ranks of the symmetric instance with `A21 = a12ᵀ`, `A31 = a13ᵀ`, `A32 = a23ᵀ`.
    pub fn of_symmetric(a11: &Gf2Matrix, a12: &Gf2Matrix, a13: &Gf2Matrix, a23: &Gf2Matrix) -> Result<Self> {
        let (a21, a31, a32) = (a12.transpose(), a13.transpose(), a23.transpose());
        Ok(Self {
            row_all: hcat(&[a11, a12, a13])?.rank(),
            col_all: vcat(&[a11, &a21, &a31])?.rank(),
            mixed_12_31: Gf2Matrix::block_assemble(&[vec![a11.clone(), a12.clone()], vec![a31.clone(), a32]])?.rank(),
            row_12: hcat(&[a11, a12])?.rank(),
            col_31: vcat(&[a11, &a31])?.rank(),
            mixed_13_21: Gf2Matrix::block_assemble(&[vec![a11.clone(), a13.clone()], vec![a21.clone(), a23.clone()]])?.rank(),
            row_13: hcat(&[a11, a13])?.rank(),
            col_21: vcat(&[a11, &a21])?.rank(),
        })
    }
}

/// Evaluates the three-block formula exactly as stated for characteristic
/// other than two. Over GF(2) it is only a point of comparison; it may even
/// come out negative on inconsistent inputs, hence the signed result.
pub fn cohen_minrank(r: &CohenRanks) -> i64 {
    let i = |x: usize| x as i64;
    let first = i(r.mixed_12_31) - (i(r.row_12) + i(r.col_31));
    let second = i(r.mixed_13_21) - (i(r.row_13) + i(r.col_21));
    i(r.row_all) + i(r.col_all) + first.min(second)
}
