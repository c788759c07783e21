use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Block {
    Known(Gf2Matrix),
    Unknown,
}

/// Symmetric block matrix whose unknown blocks lie on the block diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialSymmetricMatrix {
    sizes: Vec<usize>,
    blocks: Vec<Block>,
}

/// Block layouts with a closed-form minimum rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// Fully known.
    Known,
    /// `[[A11, A12], [A21, X]]`.
    Corner,
    /// `[[X1, A12], [A21, X2]]`.
    TwoDiag,
    /// `[[A11, A12, A13], [A21, X2, A23], [A31, A32, X3]]`.
    ThreeUpper,
    Other,
}

impl PartialSymmetricMatrix {
    /// Validates shapes, pattern symmetry and `A_ji = A_ijᵀ`.
    pub fn new(sizes: Vec<usize>, blocks: Vec<Block>) -> Result<Self> {
        let k = sizes.len();
        if blocks.len() != k * k {
            return Err(Error::Structure(format!("expected {} blocks for a {k}x{k} grid, got {}", k * k, blocks.len())));
        }
        for i in 0..k {
            for j in 0..k {
                match &blocks[i * k + j] {
                    Block::Unknown if i != j => {
                        return Err(Error::Structure(format!("unknown block at ({i}, {j}) is off the diagonal")));
                    }
                    Block::Unknown => {}
                    Block::Known(m) => {
                        if m.rows() != sizes[i] || m.cols() != sizes[j] {
                            return Err(Error::DimensionMismatch {
                                op: "partial block",
                                left_rows: sizes[i],
                                left_cols: sizes[j],
                                right_rows: m.rows(),
                                right_cols: m.cols(),
                            });
                        }
                        if let Block::Known(t) = &blocks[j * k + i] {
                            if *t != m.transpose() {
                                return Err(Error::Structure(format!("block ({j}, {i}) is not the transpose of block ({i}, {j})")));
                            }
                        }
                    }
                }
            }
        }
        Ok(Self { sizes, blocks })
    }

    pub fn corner(a11: &Gf2Matrix, a12: &Gf2Matrix) -> Result<Self> {
        Self::new(
            vec![a11.rows(), a12.cols()],
            vec![Block::Known(a11.clone()), Block::Known(a12.clone()), Block::Known(a12.transpose()), Block::Unknown],
        )
    }

    pub fn two_diag(a12: &Gf2Matrix) -> Result<Self> {
        Self::new(
            vec![a12.rows(), a12.cols()],
            vec![Block::Unknown, Block::Known(a12.clone()), Block::Known(a12.transpose()), Block::Unknown],
        )
    }

    pub fn three_upper(a11: &Gf2Matrix, a12: &Gf2Matrix, a13: &Gf2Matrix, a23: &Gf2Matrix) -> Result<Self> {
        Self::new(
            vec![a11.rows(), a12.cols(), a13.cols()],
            vec![
                Block::Known(a11.clone()),
                Block::Known(a12.clone()),
                Block::Known(a13.clone()),
                Block::Known(a12.transpose()),
                Block::Unknown,
                Block::Known(a23.clone()),
                Block::Known(a13.transpose()),
                Block::Known(a23.transpose()),
                Block::Unknown,
            ],
        )
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn block(&self, i: usize, j: usize) -> &Block {
        &self.blocks[i * self.sizes.len() + j]
    }

    /// The known block at `(i, j)`; panics if it is unknown.
    pub fn known(&self, i: usize, j: usize) -> &Gf2Matrix {
        match self.block(i, j) {
            Block::Known(m) => m,
            Block::Unknown => panic!("block ({i}, {j}) is unknown"),
        }
    }

    pub fn dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn offset(&self, b: usize) -> usize {
        self.sizes[..b].iter().sum()
    }

    pub fn unknown_blocks(&self) -> Vec<usize> {
        (0..self.sizes.len())
            .filter(|&i| matches!(self.block(i, i), Block::Unknown))
            .collect()
    }

    pub fn layout(&self) -> Layout {
        let unknown = self.unknown_blocks();
        match (self.sizes.len(), unknown.as_slice()) {
            (_, []) => Layout::Known,
            (2, [1]) => Layout::Corner,
            (2, [0, 1]) => Layout::TwoDiag,
            (3, [1, 2]) => Layout::ThreeUpper,
            _ => Layout::Other,
        }
    }

    /// Known diagonal blocks must also be symmetric for any completion to be.
    pub(crate) fn require_symmetric_diagonal(&self) -> Result<()> {
        for i in 0..self.sizes.len() {
            if let Block::Known(m) = self.block(i, i) {
                m.require_symmetric("partial diagonal block")?;
            }
        }
        Ok(())
    }

    /// The full matrix with every unknown block set to zero.
    pub fn zero_filled(&self) -> Gf2Matrix {
        let k = self.sizes.len();
        let grid: Vec<Vec<Gf2Matrix>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| match self.block(i, j) {
                        Block::Known(m) => m.clone(),
                        Block::Unknown => Gf2Matrix::zeros(self.sizes[i], self.sizes[j]),
                    })
                    .collect()
            })
            .collect();
        Gf2Matrix::block_assemble(&grid).expect("shapes validated on construction")
    }

    /// Substitutes one symmetric witness per unknown block.
    pub fn complete(&self, witnesses: &[Gf2Matrix]) -> Result<Gf2Matrix> {
        let unknown = self.unknown_blocks();
        if witnesses.len() != unknown.len() {
            return Err(Error::Structure(format!("expected {} witnesses, got {}", unknown.len(), witnesses.len())));
        }
        let mut full = self.zero_filled();
        for (&b, w) in unknown.iter().zip(witnesses) {
            w.require_symmetric("completion witness")?;
            if w.rows() != self.sizes[b] {
                return Err(Error::DimensionMismatch {
                    op: "completion witness",
                    left_rows: self.sizes[b],
                    left_cols: self.sizes[b],
                    right_rows: w.rows(),
                    right_cols: w.cols(),
                });
            }
            let off = self.offset(b);
            full.paste(off, off, w);
        }
        Ok(full)
    }

    /// Global coordinates `(i, j)`, `i ≤ j`, of the free entries of the unknown
    /// blocks, in block order and row-major within a block.
    pub fn free_positions(&self, alternate: bool) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in self.unknown_blocks() {
            let off = self.offset(b);
            let s = self.sizes[b];
            for i in 0..s {
                for j in i..s {
                    if !(alternate && i == j) {
                        out.push((off + i, off + j));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for PartialSymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ;", self.sizes.len())?;
        for s in &self.sizes {
            write!(f, " {s}")?;
        }
        writeln!(f)?;
        for b in &self.blocks {
            match b {
                Block::Unknown => writeln!(f, "?")?,
                Block::Known(m) => write!(f, "{m}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for PartialSymmetricMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
        let (ln, header) = lines
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or_else(|| Error::parse(1, 1, "empty input"))?;
        let (count, rest) = header
            .split_once(';')
            .ok_or_else(|| Error::parse(ln, 1, "header must look like \"<k> ; <size_1> ... <size_k>\""))?;
        let k: usize = count
            .trim()
            .parse()
            .map_err(|_| Error::parse(ln, 1, format!("invalid block count {:?}", count.trim())))?;
        let mut sizes = Vec::with_capacity(k);
        for tok in rest.split_whitespace() {
            let col = tok.as_ptr() as usize - header.as_ptr() as usize + 1;
            sizes.push(tok.parse().map_err(|_| Error::parse(ln, col, format!("invalid block size {tok:?}")))?);
        }
        if sizes.len() != k {
            return Err(Error::parse(ln, header.len() + 1, format!("expected {k} block sizes, found {}", sizes.len())));
        }
        let mut blocks = Vec::with_capacity(k * k);
        for idx in 0..k * k {
            while lines.peek().is_some_and(|(_, l)| l.trim().is_empty()) {
                lines.next();
            }
            let Some(&(ln, line)) = lines.peek() else {
                return Err(Error::parse(ln + 1, 1, format!("expected {} blocks, found {idx}", k * k)));
            };
            let (i, j) = (idx / k, idx % k);
            if line.trim() == "?" {
                lines.next();
                blocks.push(Block::Unknown);
                continue;
            }
            let m = Gf2Matrix::parse_lines(&mut lines)?;
            if m.rows() != sizes[i] || m.cols() != sizes[j] {
                return Err(Error::parse(
                    ln,
                    1,
                    format!("block ({i}, {j}) is {}x{}, expected {}x{}", m.rows(), m.cols(), sizes[i], sizes[j]),
                ));
            }
            blocks.push(Block::Known(m));
        }
        if let Some((ln, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::parse(ln, 1, "trailing content after last block"));
        }
        Self::new(sizes, blocks)
    }
}
