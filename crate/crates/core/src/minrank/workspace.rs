use crate::gf2::Gf2Matrix;

/// Pivot left by symmetric reduction of a known block.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Pivot {
    Unit(usize),
    Pair(usize, usize),
}

/// Congruence workspace over a block layout with some unknown diagonal blocks.
///
/// Holds `m = t · a₀ · tᵀ`, where `a₀` is the input with unknown blocks set to
/// zero. Rows are only ever added within a block or out of a known block, so
/// `t` is block lower triangular in the sense that matters: an unknown block
/// `X_q` influences only the `(q, q)` block of `t · a(X) · tᵀ`, and it does so
/// bijectively. Any desired symmetric value of that block can therefore be
/// pulled back to a witness.
pub(crate) struct Workspace {
    pub m: Gf2Matrix,
    t: Gf2Matrix,
    block_of: Vec<usize>,
    unknown: Vec<bool>,
    offsets: Vec<usize>,
}

impl Workspace {
    pub fn new(a0: Gf2Matrix, sizes: &[usize], unknown: Vec<bool>) -> Self {
        let n = a0.rows();
        let mut block_of = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        offsets.push(0);
        for (b, &s) in sizes.iter().enumerate() {
            block_of.extend(std::iter::repeat(b).take(s));
            offsets.push(offsets[b] + s);
        }
        Self {
            m: a0,
            t: Gf2Matrix::identity(n),
            block_of,
            unknown,
            offsets,
        }
    }

    pub fn block(&self, b: usize) -> Vec<usize> {
        (self.offsets[b]..self.offsets[b + 1]).collect()
    }

    /// Symmetric operation: row and column `src` added into `dst`.
    pub fn add(&mut self, src: usize, dst: usize) {
        let (bs, bd) = (self.block_of[src], self.block_of[dst]);
        debug_assert!(bs == bd || !self.unknown[bs], "row of unknown block {bs} added into block {bd}");
        self.m.add_row(src, dst);
        self.m.add_col(src, dst);
        self.t.add_row(src, dst);
    }

    /// Reduces the principal submatrix on `idx` to unit and hyperbolic pivots.
    /// Returns the pivots and the indices whose rows vanish on `idx`.
    pub fn reduce_symmetric(&mut self, idx: &[usize]) -> (Vec<Pivot>, Vec<usize>) {
        let mut rest = idx.to_vec();
        let mut pivots = Vec::new();
        loop {
            if let Some(pos) = rest.iter().position(|&i| self.m.get(i, i)) {
                let i = rest.remove(pos);
                for &j in &rest {
                    if self.m.get(j, i) {
                        self.add(i, j);
                    }
                }
                pivots.push(Pivot::Unit(i));
                continue;
            }
            let pair = (0..rest.len())
                .flat_map(|x| (x + 1..rest.len()).map(move |y| (x, y)))
                .find(|&(x, y)| self.m.get(rest[x], rest[y]));
            let Some((x, y)) = pair else { break };
            let (i, j) = (rest[x], rest[y]);
            rest.remove(y);
            rest.remove(x);
            for &l in &rest {
                if self.m.get(l, i) {
                    self.add(j, l);
                }
                if self.m.get(l, j) {
                    self.add(i, l);
                }
            }
            pivots.push(Pivot::Pair(i, j));
        }
        (pivots, rest)
    }

    /// Clears the pivot columns in every row of `targets`.
    pub fn isolate(&mut self, pivots: &[Pivot], targets: &[usize]) {
        for &x in targets {
            let mut sources = Vec::new();
            for p in pivots {
                match *p {
                    Pivot::Unit(c) => {
                        if self.m.get(x, c) {
                            sources.push(c);
                        }
                    }
                    Pivot::Pair(c1, c2) => {
                        if self.m.get(x, c2) {
                            sources.push(c1);
                        }
                        if self.m.get(x, c1) {
                            sources.push(c2);
                        }
                    }
                }
            }
            for c in sources {
                self.add(c, x);
            }
        }
    }

    /// Reduces `m[rows, cols]` to a partial permutation using row operations
    /// within `rows` and column operations within `cols`. Returns the matched
    /// `(row, col)` pairs in pivot order.
    ///
    /// `tied` lists row/column pairs already matched elsewhere: when a row
    /// operation touches two tied rows, the matching column operation restores
    /// the pairing.
    pub fn smith(&mut self, rows: &[usize], cols: &[usize], tied: &[(usize, usize)]) -> Vec<(usize, usize)> {
        let partner = |r: usize| tied.iter().find(|p| p.0 == r).map(|p| p.1);
        let mut free_rows = rows.to_vec();
        let mut free_cols = cols.to_vec();
        let mut pairs = Vec::new();
        loop {
            let hit = free_rows.iter().enumerate().find_map(|(x, &r)| {
                free_cols
                    .iter()
                    .position(|&c| self.m.get(r, c))
                    .map(|y| (x, y))
            });
            let Some((x, y)) = hit else { break };
            let i = free_rows.remove(x);
            let j = free_cols.remove(y);
            for &r in rows {
                if r != i && self.m.get(r, j) {
                    self.add(i, r);
                    if let (Some(ci), Some(cr)) = (partner(i), partner(r)) {
                        self.add(cr, ci);
                    }
                }
            }
            for &c in cols {
                if c != j && self.m.get(i, c) {
                    self.add(j, c);
                }
            }
            pairs.push((i, j));
        }
        pairs
    }

    /// Pulls desired values of the unknown diagonal blocks back to witnesses.
    pub fn witnesses(&self, desired: &[(usize, Gf2Matrix)]) -> Vec<Gf2Matrix> {
        let mut b = self.m.clone();
        for (blk, y) in desired {
            b.paste(self.offsets[*blk], self.offsets[*blk], y);
        }
        let inv = self
            .t
            .inverse()
            .expect("square")
            .expect("elementary operations keep the transform invertible");
        let a = inv.mul(&b).expect("square").mul(&inv.transpose()).expect("square");
        desired
            .iter()
            .map(|(blk, _)| self.block(*blk))
            .map(|idx| a.principal(&idx))
            .collect()
    }
}
