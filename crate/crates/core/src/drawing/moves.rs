use super::{CrosscapDrawing, Graph};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// Effect of every vertex-edge move on the independent-pair parities.
#[derive(Debug, Clone)]
pub struct MoveEffects {
    /// Independent pairs `(e, f)`, `e < f`, indexing the columns of `effects`.
    pub pairs: Vec<(usize, usize)>,
    /// Moves `(v, e)` with `v ∉ e`, indexing the rows of `effects`.
    pub moves: Vec<(usize, usize)>,
    pub effects: Gf2Matrix,
}

impl MoveEffects {
    /// Independent-pair parities of a drawing's base, in `pairs` order.
    pub fn parities(&self, d: &CrosscapDrawing) -> Vec<bool> {
        self.pairs.iter().map(|&(e, f)| d.base().get(e, f)).collect()
    }

    /// Dimension of the space of parity changes reachable by moves.
    pub fn span_dimension(&self) -> usize {
        self.effects.rank()
    }
}

pub fn move_effects(g: &Graph) -> MoveEffects {
    let pairs = g.independent_pairs();
    let col = |e: usize, f: usize| pairs.binary_search(&(e.min(f), e.max(f))).ok();
    let mut moves = Vec::new();
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.vertex_count() {
        for e in 0..g.edge_count() {
            if g.touches(e, v) {
                continue;
            }
            let hits: Vec<usize> = g
                .incident(v)
                .iter()
                .filter(|&&f| g.independent(e, f))
                .filter_map(|&f| col(e, f))
                .collect();
            if !hits.is_empty() {
                moves.push((v, e));
                rows.push(hits);
            }
        }
    }
    let mut effects = Gf2Matrix::zeros(moves.len(), pairs.len());
    for (r, hits) in rows.iter().enumerate() {
        for &c in hits {
            effects.flip(r, c);
        }
    }
    MoveEffects { pairs, moves, effects }
}

/// A move sequence turning the base of `from` into `target` on independent
/// pairs, if one exists.
pub fn solve_moves(fx: &MoveEffects, from: &CrosscapDrawing, target: &[bool]) -> Result<Option<Vec<(usize, usize)>>> {
    if target.len() != fx.pairs.len() {
        return Err(Error::Structure(format!(
            "target has {} parities, graph has {} independent pairs",
            target.len(),
            fx.pairs.len()
        )));
    }
    let diff: Vec<bool> = fx.parities(from).iter().zip(target).map(|(a, b)| a ^ b).collect();
    let Some(x) = fx.effects.solve_left(&diff)? else {
        return Ok(None);
    };
    Ok(Some(
        x.iter()
            .zip(&fx.moves)
            .filter(|(b, _)| **b)
            .map(|(_, &mv)| mv)
            .collect(),
    ))
}
