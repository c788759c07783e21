//! Drawings of graphs in the plane with crosscaps, modelled by crossing parities.
//!
//! A drawing stores, for every edge `e`, its crosscap vector `y_e ∈ GF(2)^h`
//! and, for every pair of independent edges, the crossing parity `base(e, f)`
//! of the planarization. The crossing parity on the surface is
//! `base(e, f) + y_e·y_f`. Adjacent pairs carry no information here: every
//! consumer leaves those entries free.

mod graph;
mod moves;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

pub use graph::{Graph, SpanningForest};
pub use moves::{move_effects, solve_moves, MoveEffects};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscapDrawing {
    graph: Graph,
    /// Row `e` is `y_e`.
    y: Gf2Matrix,
    /// Symmetric, zero on the diagonal and on adjacent pairs.
    base: Gf2Matrix,
}

/// How to fill the entries of a representing matrix that the drawing leaves free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjacentFill {
    Zero,
    Gram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusUpperBounds {
    pub eg0_upper: usize,
    pub g0_upper: Option<usize>,
}

impl CrosscapDrawing {
    /// Builds a drawing from parts. `base` entries on adjacent pairs must be zero.
    pub fn new(graph: Graph, y: Gf2Matrix, base: Gf2Matrix) -> Result<Self> {
        let m = graph.edge_count();
        if y.rows() != m {
            return Err(Error::Structure(format!("{} crosscap vectors for {m} edges", y.rows())));
        }
        base.require_symmetric("drawing base")?;
        if base.rows() != m {
            return Err(Error::Structure(format!("base is {}x{} for {m} edges", base.rows(), base.cols())));
        }
        for e in 0..m {
            for f in e..m {
                if base.get(e, f) && !graph.independent(e, f) {
                    return Err(Error::Structure(format!("base parity set on non-independent pair ({e}, {f})")));
                }
            }
        }
        Ok(Self { graph, y, base })
    }

    /// Drawing with `h = 0` and the given base.
    pub fn plane(graph: Graph, base: Gf2Matrix) -> Result<Self> {
        let m = graph.edge_count();
        Self::new(graph, Gf2Matrix::zeros(m, 0), base)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn crosscaps(&self) -> usize {
        self.y.cols()
    }

    pub fn y(&self, e: usize) -> Vec<bool> {
        self.y.row_bits(e)
    }

    pub fn y_matrix(&self) -> &Gf2Matrix {
        &self.y
    }

    pub fn base(&self) -> &Gf2Matrix {
        &self.base
    }

    pub fn dot(&self, e: usize, f: usize) -> bool {
        self.y.row_dot(e, f)
    }

    /// Crossing parity of `(e, f)` on the surface.
    pub fn surface_parity(&self, e: usize, f: usize) -> bool {
        self.base.get(e, f) ^ self.dot(e, f)
    }

    fn check_edge(&self, e: usize) -> Result<()> {
        if e >= self.graph.edge_count() {
            return Err(Error::Structure(format!("edge {e} out of range")));
        }
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.graph.vertex_count() {
            return Err(Error::Structure(format!("vertex {v} out of range")));
        }
        Ok(())
    }

    /// Pulls edge `e` over vertex `v`: flips `base(e, f)` for every edge `f`
    /// at `v` independent of `e`. When `v` lies on `e` nothing changes.
    pub fn vertex_edge_move(&self, v: usize, e: usize) -> Result<Self> {
        self.check_vertex(v)?;
        self.check_edge(e)?;
        let mut out = self.clone();
        for &f in self.graph.incident(v) {
            if self.graph.independent(e, f) {
                out.base.flip(e, f);
                out.base.flip(f, e);
            }
        }
        Ok(out)
    }

    /// Pushes the vertex set `s` through the crosscaps selected by `w`:
    /// `y_e += w` for every edge with exactly one endpoint in `s`. The base is
    /// adjusted so that every surface parity stays the same.
    pub fn subset_push(&self, s: &[usize], w: &[bool]) -> Result<Self> {
        let h = self.crosscaps();
        if w.len() != h {
            return Err(Error::Structure(format!("push vector has length {}, expected {h}", w.len())));
        }
        let mut inside = vec![false; self.graph.vertex_count()];
        for &v in s {
            self.check_vertex(v)?;
            inside[v] = true;
        }
        let cut: Vec<usize> = (0..self.graph.edge_count())
            .filter(|&e| {
                let (a, b) = self.graph.edge(e);
                inside[a] != inside[b]
            })
            .collect();
        if cut.is_empty() || !w.iter().any(|&b| b) {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        for &e in &cut {
            for (k, &b) in w.iter().enumerate() {
                if b {
                    out.y.flip(e, k);
                }
            }
        }
        let m = self.graph.edge_count();
        let mut in_cut = vec![false; m];
        for &e in &cut {
            in_cut[e] = true;
        }
        for &e in &cut {
            for f in 0..m {
                if (in_cut[f] && f < e) || !self.graph.independent(e, f) {
                    continue;
                }
                if self.dot(e, f) != out.dot(e, f) {
                    out.base.flip(e, f);
                    out.base.flip(f, e);
                }
            }
        }
        Ok(out)
    }

    /// Zeroes the crosscap vector of every forest edge by pushing subtrees.
    pub fn normalize_forest(&self, forest: &SpanningForest) -> Result<Self> {
        if !forest.spans(&self.graph) {
            return Err(Error::Structure("forest does not span the drawing's graph".into()));
        }
        let mut d = self.clone();
        for (_, child, e) in forest.tree_edges() {
            let w = d.y(e);
            if w.iter().any(|&b| b) {
                d = d.subset_push(&forest.subtree(child), &w)?;
            }
        }
        Ok(d)
    }

    /// Every pair of independent edges crosses evenly on the surface.
    pub fn is_independently_even(&self) -> bool {
        self.first_odd_independent_pair().is_none()
    }

    pub fn first_odd_independent_pair(&self) -> Option<(usize, usize)> {
        self.graph
            .independent_pairs()
            .into_iter()
            .find(|&(e, f)| self.surface_parity(e, f))
    }

    /// Every cycle meets each crosscap an even number of times.
    pub fn is_orientable(&self) -> bool {
        let forest = SpanningForest::dfs(&self.graph, &[]).expect("no preferred roots");
        let h = self.crosscaps();
        let mut potential = Gf2Matrix::zeros(self.graph.vertex_count(), h);
        for &v in &forest.order {
            if let Some((p, e)) = forest.parent[v] {
                for k in 0..h {
                    potential.set(v, k, potential.get(p, k) ^ self.y.get(e, k));
                }
            }
        }
        (0..self.graph.edge_count()).all(|e| {
            let (a, b) = self.graph.edge(e);
            (0..h).all(|k| !(potential.get(a, k) ^ potential.get(b, k) ^ self.y.get(e, k)))
        })
    }

    /// `y_e · y_f` for all pairs.
    pub fn gram_matrix(&self) -> Gf2Matrix {
        self.y.mul(&self.y.transpose()).expect("compatible")
    }

    /// Symmetric matrix with the base parities on independent pairs; the other
    /// entries follow `fill`.
    pub fn representing_matrix(&self, fill: AdjacentFill) -> Gf2Matrix {
        let mut a = match fill {
            AdjacentFill::Zero => Gf2Matrix::zeros(self.graph.edge_count(), self.graph.edge_count()),
            AdjacentFill::Gram => self.gram_matrix(),
        };
        for (e, f) in self.graph.independent_pairs() {
            let b = self.base.get(e, f);
            a.set(e, f, b);
            a.set(f, e, b);
        }
        a
    }

    /// Replaces the crosscap vectors by the columns of `factor` and keeps the base.
    /// The flag reports whether the result is independently even.
    pub fn synthesize(&self, factor: &Gf2Matrix) -> Result<(Self, bool)> {
        if factor.cols() != self.graph.edge_count() {
            return Err(Error::DimensionMismatch {
                op: "synthesize_drawing",
                left_rows: factor.rows(),
                left_cols: self.graph.edge_count(),
                right_rows: factor.rows(),
                right_cols: factor.cols(),
            });
        }
        let d = Self {
            graph: self.graph.clone(),
            y: factor.transpose(),
            base: self.base.clone(),
        };
        let even = d.is_independently_even();
        Ok((d, even))
    }

    /// Principal submatrix of `a` on `keep`, provided every independent pair
    /// leaving `keep` crosses evenly in the plane drawing.
    pub fn essential_restrict(&self, a: &Gf2Matrix, keep: &[usize]) -> Result<Gf2Matrix> {
        let m = self.graph.edge_count();
        if a.rows() != m || a.cols() != m {
            return Err(Error::DimensionMismatch {
                op: "essential_restrict",
                left_rows: m,
                left_cols: m,
                right_rows: a.rows(),
                right_cols: a.cols(),
            });
        }
        let mut kept = vec![false; m];
        for &e in keep {
            self.check_edge(e)?;
            kept[e] = true;
        }
        for (e, f) in self.graph.independent_pairs() {
            if (!kept[e] || !kept[f]) && self.base.get(e, f) {
                return Err(Error::Precondition(format!(
                    "independent pair ({e}, {f}) outside the kept edges crosses oddly"
                )));
            }
        }
        Ok(a.principal(keep))
    }
}

/// Canonical plane drawing: vertices on a circle in order `0..n`, straight edges.
pub fn convex_base_drawing(g: &Graph) -> CrosscapDrawing {
    let m = g.edge_count();
    let mut base = Gf2Matrix::zeros(m, m);
    for (e, f) in g.independent_pairs() {
        if interleaved(g.edge(e), g.edge(f)) {
            base.set(e, f, true);
            base.set(f, e, true);
        }
    }
    CrosscapDrawing::plane(g.clone(), base).expect("convex parities live on independent pairs")
}

fn interleaved((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    let (lo, hi) = (a.min(b), a.max(b));
    let inside = |x: usize| lo < x && x < hi;
    inside(c) != inside(d)
}

/// Synthesizes a drawing from a plane drawing and a factor whose columns
/// become the crosscap vectors.
pub fn synthesize_drawing(plane: &CrosscapDrawing, factor: &Gf2Matrix) -> Result<(CrosscapDrawing, bool)> {
    plane.synthesize(factor)
}

/// Genus bounds implied by a matrix representing some plane drawing.
pub fn genus_upper_bounds(a: &Gf2Matrix) -> Result<GenusUpperBounds> {
    let alternate = a.is_alternate()?;
    let r = a.rank();
    Ok(GenusUpperBounds {
        eg0_upper: r,
        g0_upper: alternate.then_some(r / 2),
    })
}

#[derive(Serialize, Deserialize)]
struct DrawingRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
    h: usize,
    y: Vec<String>,
    base: Vec<(usize, usize)>,
}

impl Serialize for CrosscapDrawing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m = self.graph.edge_count();
        DrawingRepr {
            n: self.graph.vertex_count(),
            edges: self.graph.edges().to_vec(),
            h: self.crosscaps(),
            y: (0..m).map(|e| self.y.row_string(e)).collect(),
            base: self
                .graph
                .independent_pairs()
                .into_iter()
                .filter(|&(e, f)| self.base.get(e, f))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CrosscapDrawing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = DrawingRepr::deserialize(d)?;
        let graph = Graph::new(r.n, r.edges).map_err(D::Error::custom)?;
        let m = graph.edge_count();
        if r.y.len() != m {
            return Err(D::Error::custom(format!("{} crosscap vectors for {m} edges", r.y.len())));
        }
        let mut y = Gf2Matrix::zeros(m, r.h);
        for (e, bits) in r.y.iter().enumerate() {
            if bits.len() != r.h {
                return Err(D::Error::custom(format!("crosscap vector {e} has length {}, expected {}", bits.len(), r.h)));
            }
            for (k, c) in bits.bytes().enumerate() {
                match c {
                    b'0' => {}
                    b'1' => y.set(e, k, true),
                    _ => return Err(D::Error::custom("invalid bit character")),
                }
            }
        }
        let mut base = Gf2Matrix::zeros(m, m);
        for (e, f) in r.base {
            if e >= m || f >= m {
                return Err(D::Error::custom(format!("base pair ({e}, {f}) out of range")));
            }
            base.set(e, f, true);
            base.set(f, e, true);
        }
        CrosscapDrawing::new(graph, y, base).map_err(D::Error::custom)
    }
}
