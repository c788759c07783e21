use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// Dense matrix over GF(2).
///
/// Rows are packed into `u64` words, least significant bit first. Bits past
/// `cols` in the last word of every row are kept at zero, so word-level
/// equality and hashing agree with entry-wise equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// The all-ones matrix.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of `0`/`1` characters. Panics on bad input;
    /// meant for literals in code and tests. Use [`FromStr`] for user data.
    pub fn from_bit_rows(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged bit rows");
            for (j, c) in r.bytes().enumerate() {
                match c {
                    b'0' => {}
                    b'1' => m.set(i, j, true),
                    _ => panic!("invalid bit character {:?}", c as char),
                }
            }
        }
        m
    }

    /// Builds a diagonal matrix from the given bits.
    pub fn diagonal(bits: &[bool]) -> Self {
        let mut m = Self::zeros(bits.len(), bits.len());
        for (i, &b) in bits.iter().enumerate() {
            m.set(i, i, b);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// XORs row `src` into row `dst`.
    #[inline]
    pub fn add_row(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..src * s + s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s] as &[u64], &mut lo[dst * s..dst * s + s])
        };
        for (d, x) in b.iter_mut().zip(a) {
            *d ^= x;
        }
    }

    /// XORs column `src` into column `dst`.
    #[inline]
    pub fn add_col(&mut self, src: usize, dst: usize) {
        for r in 0..self.rows {
            if self.get(r, src) {
                self.flip(r, dst);
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.data.swap(a * s + k, b * s + k);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let (x, y) = (self.get(r, a), self.get(r, b));
            if x != y {
                self.flip(r, a);
                self.flip(r, b);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    /// Dot product of two rows.
    pub fn row_dot(&self, a: usize, b: usize) -> bool {
        let ones: u32 = self
            .row_words(a)
            .iter()
            .zip(self.row_words(b))
            .map(|(x, y)| (x & y).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Column `c` as a vector of bits.
    pub fn column(&self, c: usize) -> Vec<bool> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_bits(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    /// GF(2) rank by forward elimination on a copy.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.stride == 1 {
            let mut rows: Vec<u64> = self.data.clone();
            return rank_single_word(&mut rows);
        }
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in rank + 1..m.rows {
                if m.get(r, c) {
                    m.add_row(rank, r);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Nonzero rows of the reduced row echelon form.
    pub fn row_basis(&self) -> Self {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.add_row(rank, r);
                }
            }
            rank += 1;
        }
        let idx: Vec<usize> = (0..rank).collect();
        let cols: Vec<usize> = (0..m.cols).collect();
        m.select(&idx, &cols)
    }

    /// Coefficients `x` with `Σ x_i · row_i = target`, if the target lies in the row space.
    pub fn solve_left(&self, target: &[bool]) -> Result<Option<Vec<bool>>> {
        if target.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "solve_left",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: 1,
                right_cols: target.len(),
            });
        }
        let mut m = self.clone();
        let mut combo = Self::identity(self.rows);
        let mut t = Self::zeros(1, self.cols);
        for (c, &b) in target.iter().enumerate() {
            t.set(0, c, b);
        }
        let mut tc = Self::zeros(1, self.rows);
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            combo.swap_rows(rank, p);
            for r in rank + 1..m.rows {
                if m.get(r, c) {
                    m.add_row(rank, r);
                    combo.add_row(rank, r);
                }
            }
            if t.get(0, c) {
                for (d, s) in t.data.iter_mut().zip(m.row_words(rank)) {
                    *d ^= s;
                }
                for (d, s) in tc.data.iter_mut().zip(combo.row_words(rank)) {
                    *d ^= s;
                }
            }
            rank += 1;
        }
        Ok(t.is_zero().then(|| tc.row_bits(0)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        let mut out = self.clone();
        for (d, s) in out.data.iter_mut().zip(&other.data) {
            *d ^= s;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(self.mismatch(other, "multiply"));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let s = other.stride;
        for r in 0..self.rows {
            let dst = &mut out.data[r * s..(r + 1) * s];
            for k in 0..self.cols {
                if self.get(r, k) {
                    for (d, x) in dst.iter_mut().zip(other.row_words(k)) {
                        *d ^= x;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `cᵀ · self · c`.
    pub fn congruence(&self, c: &Self) -> Result<Self> {
        c.transpose().mul(self)?.mul(c)
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Result<Option<Self>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "inverse",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| m.get(r, c)) else {
                return Ok(None);
            };
            m.swap_rows(c, p);
            inv.swap_rows(c, p);
            for r in 0..n {
                if r != c && m.get(r, c) {
                    m.add_row(c, r);
                    inv.add_row(c, r);
                }
            }
        }
        Ok(Some(inv))
    }

    /// Submatrix on the given (not necessarily contiguous) row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    /// Contiguous submatrix `[r0, r0+h) x [c0, c0+w)`.
    pub fn submatrix(&self, r0: usize, c0: usize, h: usize, w: usize) -> Result<Self> {
        if r0 + h > self.rows || c0 + w > self.cols {
            return Err(Error::DimensionMismatch {
                op: "submatrix",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: r0 + h,
                right_cols: c0 + w,
            });
        }
        let rows: Vec<usize> = (r0..r0 + h).collect();
        let cols: Vec<usize> = (c0..c0 + w).collect();
        Ok(self.select(&rows, &cols))
    }

    /// Principal submatrix on `idx`.
    pub fn principal(&self, idx: &[usize]) -> Self {
        self.select(idx, idx)
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        Self::block_assemble(&[vec![self.clone(), other.clone()]])
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        Self::block_assemble(&[vec![self.clone()], vec![other.clone()]])
    }

    /// Assembles a rectangular grid of blocks. Every block in a grid row must
    /// share a row count and every block in a grid column a column count.
    pub fn block_assemble(grid: &[Vec<Gf2Matrix>]) -> Result<Self> {
        let Some(first) = grid.first() else {
            return Ok(Self::zeros(0, 0));
        };
        let width = first.len();
        let col_sizes: Vec<usize> = first.iter().map(|b| b.cols).collect();
        let mut row_sizes = Vec::with_capacity(grid.len());
        for row in grid {
            if row.len() != width {
                return Err(Error::Structure(format!(
                    "block grid is ragged: expected {width} blocks per row, found {}",
                    row.len()
                )));
            }
            let h = row.first().map_or(0, |b| b.rows);
            for (j, b) in row.iter().enumerate() {
                if b.rows != h || b.cols != col_sizes[j] {
                    return Err(Error::DimensionMismatch {
                        op: "block_assemble",
                        left_rows: h,
                        left_cols: col_sizes[j],
                        right_rows: b.rows,
                        right_cols: b.cols,
                    });
                }
            }
            row_sizes.push(h);
        }
        let mut out = Self::zeros(row_sizes.iter().sum(), col_sizes.iter().sum());
        let mut r0 = 0;
        for (row, h) in grid.iter().zip(&row_sizes) {
            let mut c0 = 0;
            for (b, w) in row.iter().zip(&col_sizes) {
                out.paste(r0, c0, b);
                c0 += w;
            }
            r0 += h;
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none() && self.is_square()
    }

    fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return None;
        }
        for r in 0..self.rows {
            for c in r + 1..self.cols {
                if self.get(r, c) != self.get(c, r) {
                    return Some((r, c));
                }
            }
        }
        None
    }

    /// Errors unless the matrix is square and symmetric.
    pub fn require_symmetric(&self, op: &'static str) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            });
        }
        if let Some((row, col)) = self.first_asymmetry() {
            return Err(Error::NotSymmetric { op, row, col });
        }
        Ok(())
    }

    /// Symmetric with an all-zero diagonal.
    pub fn is_alternate(&self) -> Result<bool> {
        self.require_symmetric("is_alternate")?;
        Ok(self.zero_diagonal())
    }

    pub(crate) fn zero_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| !self.get(i, i))
    }

    /// Concatenated row bitstrings, used as a lexicographic tie-break key.
    pub fn bit_key(&self) -> String {
        let mut s = String::with_capacity(self.rows * self.cols);
        for r in 0..self.rows {
            self.push_row_string(r, &mut s);
        }
        s
    }

    fn push_row_string(&self, r: usize, s: &mut String) {
        for c in 0..self.cols {
            s.push(if self.get(r, c) { '1' } else { '0' });
        }
    }

    pub fn row_string(&self, r: usize) -> String {
        let mut s = String::with_capacity(self.cols);
        self.push_row_string(r, &mut s);
        s
    }

    fn check_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other, op));
        }
        Ok(())
    }

    fn mismatch(&self, other: &Self, op: &'static str) -> Error {
        Error::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    /// Parses the text format starting at 1-based line `first_line` of some
    /// larger document. Returns the matrix and the number of lines consumed.
    pub(crate) fn parse_lines<'a>(
        lines: &mut impl Iterator<Item = (usize, &'a str)>,
    ) -> Result<Self> {
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, 1, "missing matrix header"))?;
        let mut parts = header.split_whitespace();
        let rows = parse_count(parts.next(), ln, header, "row count")?;
        let cols = parse_count(parts.next(), ln, header, "column count")?;
        if let Some(extra) = parts.next() {
            return Err(Error::parse(ln, column_of(header, extra), "unexpected token after header"));
        }
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            let (ln, raw) = lines.next().ok_or_else(|| {
                Error::parse(ln + r + 1, 1, format!("expected {rows} rows, found {r}"))
            })?;
            let line = raw.trim_end_matches('\r');
            if line.chars().count() != cols {
                return Err(Error::parse(
                    ln,
                    line.chars().count().min(cols) + 1,
                    format!("row has {} entries, expected {cols}", line.chars().count()),
                ));
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    other => {
                        return Err(Error::parse(ln, c + 1, format!("invalid bit character {other:?}")))
                    }
                }
            }
        }
        Ok(m)
    }
}

fn column_of(line: &str, token: &str) -> usize {
    token.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn parse_count(tok: Option<&str>, ln: usize, line: &str, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(ln, line.len() + 1, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(ln, column_of(line, tok), format!("invalid {what} {tok:?}")))
}

fn rank_single_word(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot = rows[i];
        if pivot == 0 {
            continue;
        }
        rank += 1;
        let low = pivot & pivot.wrapping_neg();
        for r in rows[i + 1..].iter_mut() {
            if *r & low != 0 {
                *r ^= pivot;
            }
        }
    }
    rank
}

/// Rank of up to 64-column rows given as words. Consumes the buffer.
pub fn rank_of_words(rows: &mut [u64]) -> usize {
    rank_single_word(rows)
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "{}", self.row_string(r))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Matrix({}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, " {}", self.row_string(r))?;
        }
        write!(f, ")")
    }
}

impl FromStr for Gf2Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l));
        let m = Self::parse_lines(&mut lines)?;
        for (ln, rest) in lines {
            if !rest.trim().is_empty() {
                return Err(Error::parse(ln, 1, "trailing content after matrix"));
            }
        }
        Ok(m)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<String>,
}

impl Serialize for Gf2Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            data: (0..self.rows).map(|r| self.row_string(r)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Gf2Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        if repr.data.len() != repr.rows {
            return Err(D::Error::custom("row count does not match data"));
        }
        let mut m = Gf2Matrix::zeros(repr.rows, repr.cols);
        for (r, line) in repr.data.iter().enumerate() {
            if line.len() != repr.cols {
                return Err(D::Error::custom(format!("row {r} has wrong length")));
            }
            for (c, ch) in line.bytes().enumerate() {
                match ch {
                    b'0' => {}
                    b'1' => m.set(r, c, true),
                    _ => return Err(D::Error::custom("invalid bit character")),
                }
            }
        }
        Ok(m)
    }
}
