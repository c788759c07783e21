//! Beam search over vertex-edge moves for drawings whose representing
//! matrices have small rank.
//!
//! A state is the vector of independent-pair parities of a plane drawing,
//! reached from the convex drawing by moves. Its score is the least rank of a
//! symmetric matrix agreeing with those parities (alternate if requested),
//! found by deciding `A = BᵀMB` with `B` having `r` rows for increasing `r`,
//! where `M` is `I_r` or `H ⊕ … ⊕ H`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::drawing::{convex_base_drawing, move_effects, solve_moves, CrosscapDrawing, Graph};
use crate::error::{Error, Result};
use crate::gf2::{gram_factor, Gf2Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    G0,
    Eg0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Restrict to alternate witnesses and bound `g₀` instead of `eg₀`.
    pub alternate: bool,
    /// Maximum number of parity vectors scored.
    pub budget: usize,
    pub beam: usize,
    pub seed: u64,
    /// Backtracking nodes allowed per factorization attempt.
    pub node_limit: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            alternate: false,
            budget: 100_000,
            beam: 64,
            seed: 0,
            node_limit: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperBoundCertificate {
    pub graph: Graph,
    pub witness_matrix: Gf2Matrix,
    /// Moves `(v, e)` applied to the convex drawing.
    pub move_sequence: Vec<(usize, usize)>,
    pub alternate: bool,
    pub bound_kind: BoundKind,
    pub value: usize,
    /// The witness has the least rank among completions of its parities.
    pub completion_exact: bool,
    /// The best state differs from the convex seed.
    pub improved_on_seed: bool,
    pub drawings_evaluated: usize,
}

impl UpperBoundCertificate {
    /// Replays the moves and checks the witness against the resulting
    /// drawing, without any search state.
    pub fn verify(&self) -> Result<()> {
        let d = self.replay()?;
        let a = &self.witness_matrix;
        let m = self.graph.edge_count();
        if a.rows() != m || a.cols() != m {
            return Err(Error::Structure(format!("witness is {}x{} for {m} edges", a.rows(), a.cols())));
        }
        a.require_symmetric("certificate witness")?;
        if let Some((e, f)) = self
            .graph
            .independent_pairs()
            .into_iter()
            .find(|&(e, f)| a.get(e, f) != d.base().get(e, f))
        {
            return Err(Error::Structure(format!(
                "witness entry ({e}, {f}) disagrees with the replayed drawing"
            )));
        }
        let alternate = a.is_alternate()?;
        if self.alternate && !alternate {
            return Err(Error::Structure("witness is not alternate".into()));
        }
        if self.alternate != (self.bound_kind == BoundKind::G0) {
            return Err(Error::Structure("bound kind does not match alternateness".into()));
        }
        let rank = a.rank();
        let value = if self.alternate { rank / 2 } else { rank };
        if value != self.value {
            return Err(Error::Structure(format!(
                "witness rank {rank} gives value {value}, certificate claims {}",
                self.value
            )));
        }
        Ok(())
    }

    /// The convex drawing after the recorded moves.
    pub fn replay(&self) -> Result<CrosscapDrawing> {
        let mut d = convex_base_drawing(&self.graph);
        for &(v, e) in &self.move_sequence {
            d = d.vertex_edge_move(v, e)?;
        }
        Ok(d)
    }

    /// Independently even drawing realizing the witness with crosscaps.
    pub fn drawing(&self) -> Result<CrosscapDrawing> {
        let factor = gram_factor(&self.witness_matrix)?.factor;
        let (d, even) = self.replay()?.synthesize(&factor)?;
        if !even {
            return Err(Error::Structure("synthesized drawing is not independently even".into()));
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    Identity,
    Hyperbolic,
}

const EVEN_BITS: u32 = 0x5555_5555;

fn form(kind: Form, x: u32, y: u32) -> bool {
    let y = match kind {
        Form::Identity => y,
        Form::Hyperbolic => ((y & EVEN_BITS) << 1) | ((y >> 1) & EVEN_BITS),
    };
    (x & y).count_ones() & 1 == 1
}

enum Outcome {
    Found(Vec<u32>),
    Infeasible,
    Limit,
}

/// Constraint system `form(b_e, b_f) = target` over independent pairs.
struct FactorProblem {
    /// Variables in assignment order.
    order: Vec<usize>,
    /// For position `p`, constraints against earlier positions.
    checks: Vec<Vec<(usize, bool)>>,
}

impl FactorProblem {
    fn new(edges: usize, constraints: &[(usize, usize, bool)]) -> Self {
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); edges];
        for &(e, f, t) in constraints {
            adj[e].push((f, t));
            adj[f].push((e, t));
        }
        let mut placed = vec![usize::MAX; edges];
        let mut order = Vec::with_capacity(edges);
        let mut links = vec![0usize; edges];
        for _ in 0..edges {
            let next = (0..edges)
                .filter(|&e| placed[e] == usize::MAX)
                .max_by_key(|&e| (links[e], adj[e].len(), std::cmp::Reverse(e)))
                .expect("unplaced variable");
            placed[next] = order.len();
            order.push(next);
            for &(f, _) in &adj[next] {
                links[f] += 1;
            }
        }
        let checks = order
            .iter()
            .map(|&e| {
                adj[e]
                    .iter()
                    .filter(|&&(f, _)| placed[f] < placed[e])
                    .map(|&(f, t)| (placed[f], t))
                    .collect()
            })
            .collect();
        Self { order, checks }
    }

    fn solve(&self, r: usize, kind: Form, node_limit: u64) -> Outcome {
        let n = self.order.len();
        if n == 0 {
            return Outcome::Found(Vec::new());
        }
        if r > 24 {
            return Outcome::Limit;
        }
        let size = 1u32 << r;
        // Isometries move the first vector to a representative: a prefix of
        // ones for the identity form, zero or the first basis vector otherwise.
        let first: Vec<u32> = match kind {
            Form::Identity => (0..=r).map(|w| (1u32 << w) - 1).collect(),
            Form::Hyperbolic => {
                if r == 0 {
                    vec![0]
                } else {
                    vec![0, 1]
                }
            }
        };
        let mut vals = vec![0u32; n];
        let mut next = vec![0u32; n];
        let mut nodes = 0u64;
        let mut p = 0usize;
        loop {
            let candidate = if p == 0 {
                first.get(next[0] as usize).copied()
            } else if next[p] < size {
                Some(next[p])
            } else {
                None
            };
            let Some(v) = candidate else {
                if p == 0 {
                    return Outcome::Infeasible;
                }
                next[p] = 0;
                p -= 1;
                continue;
            };
            next[p] += 1;
            nodes += 1;
            if nodes > node_limit {
                return Outcome::Limit;
            }
            if self.checks[p].iter().all(|&(q, t)| form(kind, v, vals[q]) == t) {
                vals[p] = v;
                if p + 1 == n {
                    let mut out = vec![0u32; n];
                    for (pos, &e) in self.order.iter().enumerate() {
                        out[e] = vals[pos];
                    }
                    return Outcome::Found(out);
                }
                p += 1;
            }
        }
    }
}

/// Least-rank completion found for one parity vector.
#[derive(Debug, Clone)]
pub(crate) struct Completion {
    pub matrix: Gf2Matrix,
    pub rank: usize,
    pub exact: bool,
}

fn matrix_from_vectors(vectors: &[u32], kind: Form) -> Gf2Matrix {
    let m = vectors.len();
    Gf2Matrix::from_fn(m, m, |e, f| form(kind, vectors[e], vectors[f]))
}

/// Flips free entries while that lowers the rank.
fn greedy_completion(start: &Gf2Matrix, free: &[(usize, usize)]) -> (Gf2Matrix, usize) {
    let mut a = start.clone();
    let mut rank = a.rank();
    let mut improved = true;
    while improved && rank > 0 {
        improved = false;
        for &(e, f) in free {
            a.flip(e, f);
            if e != f {
                a.flip(f, e);
            }
            let r = a.rank();
            if r < rank {
                rank = r;
                improved = true;
            } else {
                a.flip(e, f);
                if e != f {
                    a.flip(f, e);
                }
            }
        }
    }
    (a, rank)
}

pub(crate) struct Completer {
    edges: usize,
    constraints: Vec<(usize, usize, bool)>,
    free: Vec<(usize, usize)>,
    alternate: bool,
    node_limit: u64,
}

impl Completer {
    pub fn new(g: &Graph, alternate: bool, node_limit: u64) -> Self {
        let m = g.edge_count();
        let free = (0..m)
            .flat_map(|e| (e..m).map(move |f| (e, f)))
            .filter(|&(e, f)| !g.independent(e, f) && !(alternate && e == f))
            .collect();
        Self {
            edges: m,
            constraints: Vec::new(),
            free,
            alternate,
            node_limit,
        }
    }

    /// `pairs[k]` has parity `parities[k]`.
    pub fn complete(&mut self, pairs: &[(usize, usize)], parities: &[bool]) -> Completion {
        self.constraints.clear();
        self.constraints
            .extend(pairs.iter().zip(parities).map(|(&(e, f), &t)| (e, f, t)));
        let mut start = Gf2Matrix::zeros(self.edges, self.edges);
        for &(e, f, t) in &self.constraints {
            start.set(e, f, t);
            start.set(f, e, t);
        }
        let (greedy, upper) = greedy_completion(&start, &self.free);
        let problem = FactorProblem::new(self.edges, &self.constraints);
        let step = if self.alternate { 2 } else { 1 };
        for r in (0..upper).step_by(step) {
            let forms: &[Form] = match (self.alternate, r % 2 == 0) {
                (true, _) => &[Form::Hyperbolic],
                (false, true) => &[Form::Identity, Form::Hyperbolic],
                (false, false) => &[Form::Identity],
            };
            for &kind in forms {
                match problem.solve(r, kind, self.node_limit) {
                    Outcome::Found(vectors) => {
                        let matrix = matrix_from_vectors(&vectors, kind);
                        let rank = matrix.rank();
                        return Completion { matrix, rank, exact: true };
                    }
                    Outcome::Infeasible => {}
                    Outcome::Limit => {
                        return Completion {
                            matrix: greedy,
                            rank: upper,
                            exact: false,
                        }
                    }
                }
            }
        }
        Completion {
            matrix: greedy,
            rank: upper,
            exact: true,
        }
    }
}

type Key = Vec<u64>;

fn pack(bits: &[bool]) -> Key {
    let mut key = vec![0u64; bits.len().div_ceil(64)];
    for (k, &b) in bits.iter().enumerate() {
        if b {
            key[k / 64] |= 1 << (k % 64);
        }
    }
    key
}

fn unpack(key: &Key, len: usize) -> Vec<bool> {
    (0..len).map(|k| key[k / 64] >> (k % 64) & 1 == 1).collect()
}

struct Scored {
    key: Key,
    completion: Completion,
    odd: u32,
}

impl Scored {
    fn score(&self) -> (usize, u32) {
        (self.completion.rank, self.odd)
    }
}

/// Beam search for a drawing whose representing matrix has small rank.
/// The result is an upper bound on `eg₀`, or on `g₀` with `alternate`.
pub fn upper_bound_search(g: &Graph, config: &SearchConfig) -> Result<UpperBoundCertificate> {
    if config.beam == 0 || config.budget == 0 {
        return Err(Error::Domain("beam width and budget must be positive".into()));
    }
    let fx = move_effects(g);
    let len = fx.pairs.len();
    let effects: Vec<Key> = (0..fx.moves.len()).map(|r| pack(&fx.effects.row_bits(r))).collect();
    let seed_drawing = convex_base_drawing(g);
    let seed_key = pack(&fx.parities(&seed_drawing));

    let evaluate = |key: &Key| {
        let mut completer = Completer::new(g, config.alternate, config.node_limit);
        let parities = unpack(key, len);
        let completion = completer.complete(&fx.pairs, &parities);
        let odd = key.iter().map(|w| w.count_ones()).sum();
        Scored {
            key: key.clone(),
            completion,
            odd,
        }
    };

    // Rank 0 needs the all-even parity vector; when moves cannot reach it,
    // value 1 cannot be improved and the search stops there.
    let floor = match solve_moves(&fx, &seed_drawing, &vec![false; len])? {
        Some(_) => 0,
        None => 1,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut move_order: Vec<usize> = (0..effects.len()).collect();
    move_order.shuffle(&mut rng);

    let mut visited: HashSet<Key> = HashSet::new();
    visited.insert(seed_key.clone());
    let seed = evaluate(&seed_key);
    let mut evaluated = 1usize;
    let mut best = Scored {
        key: seed.key.clone(),
        completion: seed.completion.clone(),
        odd: seed.odd,
    };
    let mut beam = vec![seed];

    let value_of = |rank: usize| if config.alternate { rank / 2 } else { rank };
    while evaluated < config.budget && value_of(best.completion.rank) > floor {
        let mut fresh: Vec<Key> = Vec::new();
        'expand: for s in &beam {
            for &mv in &move_order {
                let next: Key = s.key.iter().zip(&effects[mv]).map(|(a, b)| a ^ b).collect();
                if visited.insert(next.clone()) {
                    fresh.push(next);
                    if evaluated + fresh.len() >= config.budget {
                        break 'expand;
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        evaluated += fresh.len();
        let mut scored: Vec<Scored> = fresh.par_iter().map(evaluate).collect();
        // Stable: equal scores keep generation order.
        scored.sort_by_key(Scored::score);
        let quality = |s: &Scored| (s.completion.rank, !s.completion.exact);
        if let Some(top) = scored.iter().min_by_key(|s| quality(s)).filter(|s| quality(s) < quality(&best)) {
            best = Scored {
                key: top.key.clone(),
                completion: top.completion.clone(),
                odd: top.odd,
            };
        }
        scored.truncate(config.beam);
        beam = scored;
    }

    let target = unpack(&best.key, len);
    let move_sequence = solve_moves(&fx, &seed_drawing, &target)?
        .ok_or_else(|| Error::Structure("best state is not reachable from the seed".into()))?;
    let rank = best.completion.rank;
    Ok(UpperBoundCertificate {
        graph: g.clone(),
        witness_matrix: best.completion.matrix,
        move_sequence,
        alternate: config.alternate,
        bound_kind: if config.alternate { BoundKind::G0 } else { BoundKind::Eg0 },
        value: value_of(rank),
        completion_exact: best.completion.exact,
        improved_on_seed: best.key != seed_key,
        drawings_evaluated: evaluated,
    })
}
