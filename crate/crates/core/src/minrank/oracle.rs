use rayon::prelude::*;

use super::{CompletionKind, CompletionResult, PartialSymmetricMatrix};
use crate::error::{Error, Result};
use crate::gf2::{rank_of_words, Gf2Matrix};

pub const DEFAULT_ORACLE_BITS: usize = 24;

/// Low bits enumerated sequentially inside one parallel task.
const TASK_BITS: usize = 12;

/// Exhaustive minimum over all symmetric completions (zero-diagonal ones if
/// `require_alternate`). Among minimisers the witness whose concatenated free
/// bits are lexicographically smallest is reported.
pub fn brute_force_minrank(p: &PartialSymmetricMatrix, require_alternate: bool, bit_limit: usize) -> Result<CompletionResult> {
    p.require_symmetric_diagonal()?;
    let free = p.free_positions(require_alternate);
    let bits = free.len();
    if bits > bit_limit {
        return Err(Error::Capacity { bits, limit: bit_limit });
    }
    let base = p.zero_filled();
    if require_alternate {
        let unknown = p.unknown_blocks();
        let fixed_one = (0..base.rows()).find(|&i| {
            base.get(i, i) && !unknown.iter().any(|&b| (p.offset(b)..p.offset(b) + p.sizes()[b]).contains(&i))
        });
        if let Some(i) = fixed_one {
            return Err(Error::Precondition(format!("known diagonal entry {i} is 1, no alternate completion exists")));
        }
    }
    let (rank, code) = if base.cols() <= 64 {
        search_narrow(&base, &free)
    } else {
        search_wide(&base, &free)
    };
    let mut full = base;
    apply(&mut full, &free, code);
    let witnesses: Vec<Gf2Matrix> = p
        .unknown_blocks()
        .into_iter()
        .map(|b| {
            let idx: Vec<usize> = (p.offset(b)..p.offset(b) + p.sizes()[b]).collect();
            full.principal(&idx)
        })
        .collect();
    Ok(CompletionResult {
        value: rank,
        witnesses,
        achieved_rank: rank,
        kind: CompletionKind::Exact,
    })
}

/// Bit `k` of the assignment is free entry `k`; entry 0 is the most significant.
#[inline]
fn bit(code: u64, k: usize, total: usize) -> bool {
    (code >> (total - 1 - k)) & 1 == 1
}

fn apply(m: &mut Gf2Matrix, free: &[(usize, usize)], code: u64) {
    for (k, &(i, j)) in free.iter().enumerate() {
        if bit(code, k, free.len()) {
            m.set(i, j, true);
            m.set(j, i, true);
        }
    }
}

/// Splits `0..2^bits` into tasks and keeps the minimum `(rank, code)`, which is
/// independent of scheduling.
fn search_tasks(bits: usize, eval: impl Fn(u64, u64) -> (usize, u64) + Sync) -> (usize, u64) {
    let low = bits.min(TASK_BITS);
    let tasks = 1u64 << (bits - low);
    (0..tasks)
        .into_par_iter()
        .map(|t| eval(t << low, 1u64 << low))
        .min()
        .expect("at least one task")
}

fn search_narrow(base: &Gf2Matrix, free: &[(usize, usize)]) -> (usize, u64) {
    let n = base.rows();
    let rows: Vec<u64> = (0..n).map(|r| base.row_words(r).first().copied().unwrap_or(0)).collect();
    let total = free.len();
    // Toggle masks indexed by code bit position (bit 0 = least significant).
    let toggles: Vec<(usize, usize)> = (0..total).map(|b| free[total - 1 - b]).collect();
    search_tasks(total, |start, len| {
        let mut cur = rows.clone();
        for (b, &(i, j)) in toggles.iter().enumerate() {
            if (start >> b) & 1 == 1 {
                toggle(&mut cur, i, j);
            }
        }
        // Gray-code walk over the low bits of this task.
        let mut gray = 0u64;
        let mut best = (usize::MAX, u64::MAX);
        let mut scratch = vec![0u64; n];
        for step in 0..len {
            if step > 0 {
                let b = step.trailing_zeros() as usize;
                gray ^= 1 << b;
                let (i, j) = toggles[b];
                toggle(&mut cur, i, j);
            }
            scratch.copy_from_slice(&cur);
            let r = rank_of_words(&mut scratch);
            let code = start | gray;
            if (r, code) < best {
                best = (r, code);
            }
        }
        best
    })
}

#[inline]
fn toggle(rows: &mut [u64], i: usize, j: usize) {
    rows[i] ^= 1 << j;
    if i != j {
        rows[j] ^= 1 << i;
    }
}

fn search_wide(base: &Gf2Matrix, free: &[(usize, usize)]) -> (usize, u64) {
    search_tasks(free.len(), |start, len| {
        let mut best = (usize::MAX, u64::MAX);
        for code in start..start + len {
            let mut m = base.clone();
            apply(&mut m, free, code);
            let r = m.rank();
            if (r, code) < best {
                best = (r, code);
            }
        }
        best
    })
}
