use serde::{Deserialize, Serialize};

use super::Gf2Matrix;
use crate::error::{Error, Result};

/// `transformᵀ · core · transform = input`, with `core = diag(D₁₁, 0)`.
///
/// `D₁₁` is a direct sum of `[1]` blocks followed by `[[0,1],[1,0]]` blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReduction {
    pub transform: Gf2Matrix,
    pub core: Gf2Matrix,
    pub core_rank: usize,
    /// Number of leading `[1]` blocks in the core.
    pub unit_blocks: usize,
    /// The inverse of `transformᵀ`: `reducer · input · reducerᵀ = core`.
    pub reducer: Gf2Matrix,
}

struct Reducer {
    m: Gf2Matrix,
    p: Gf2Matrix,
}

impl Reducer {
    /// Adds row/column `src` into row/column `dst`.
    fn add(&mut self, src: usize, dst: usize) {
        self.m.add_row(src, dst);
        self.m.add_col(src, dst);
        self.p.add_row(src, dst);
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.m.swap_cols(a, b);
        self.p.swap_rows(a, b);
    }
}

/// Symmetric elimination to the normal form `I_s ⊕ H^t ⊕ 0`.
///
/// Pivots are chosen by row-major first fit over the unreduced block: a unit
/// diagonal entry if any exists, otherwise the first off-diagonal one, which
/// yields a 2×2 hyperbolic block.
pub fn congruence_reduce(a: &Gf2Matrix) -> Result<CongruenceReduction> {
    a.require_symmetric("congruence_reduce")?;
    let n = a.rows();
    let mut w = Reducer {
        m: a.clone(),
        p: Gf2Matrix::identity(n),
    };
    let mut k = 0;
    let mut unit_blocks = 0;
    while k < n {
        if let Some(i) = (k..n).find(|&i| w.m.get(i, i)) {
            w.swap(k, i);
            for j in k + 1..n {
                if w.m.get(j, k) {
                    w.add(k, j);
                }
            }
            k += 1;
            unit_blocks += 1;
            continue;
        }
        let Some((i, j)) = (k..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| w.m.get(i, j))
        else {
            break;
        };
        w.swap(k, i);
        w.swap(k + 1, j);
        for l in k + 2..n {
            if w.m.get(l, k) {
                w.add(k + 1, l);
            }
            if w.m.get(l, k + 1) {
                w.add(k, l);
            }
        }
        k += 2;
    }
    let transform = w
        .p
        .inverse()?
        .expect("elementary operations keep the reducer invertible")
        .transpose();
    Ok(CongruenceReduction {
        transform,
        core: w.m,
        core_rank: k,
        unit_blocks,
        reducer: w.p,
    })
}

/// Congruence test for symmetric matrices of equal size.
///
/// Alternate status is a congruence invariant, and within each class the rank
/// is a complete invariant.
pub fn congruent(a: &Gf2Matrix, b: &Gf2Matrix) -> Result<bool> {
    a.require_symmetric("congruent")?;
    b.require_symmetric("congruent")?;
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            op: "congruent",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    if a.zero_diagonal() != b.zero_diagonal() {
        return Ok(false);
    }
    Ok(a.rank() == b.rank())
}

/// `factorᵀ · factor = input`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramFactor {
    pub factor: Gf2Matrix,
    pub input_rank: usize,
    pub factor_rank: usize,
}

/// `E` with `Eᵀ E = I_s ⊕ H^t`, for `s ≥ 1`.
///
/// Uses `[1] ⊕ H = Fᵀ F` with `F` invertible to absorb each hyperbolic block
/// into the last unit block.
fn normal_form_root(units: usize, pairs: usize) -> Gf2Matrix {
    debug_assert!(units >= 1 || pairs == 0);
    let r = units + 2 * pairs;
    let mut e = Gf2Matrix::identity(r);
    let pivot = units.saturating_sub(1);
    for t in 0..pairs {
        let (x, y) = (units + 2 * t, units + 2 * t + 1);
        // Columns of F on coordinates (pivot, x, y): (1,1,1), (1,1,0), (1,0,1).
        let mut g = Gf2Matrix::identity(r);
        g.set(x, pivot, true);
        g.set(y, pivot, true);
        g.set(pivot, x, true);
        g.set(x, x, true);
        g.set(y, x, false);
        g.set(pivot, y, true);
        g.set(x, y, false);
        g.set(y, y, true);
        e = g.mul(&e).expect("square of equal size");
    }
    e
}

/// Factors a symmetric matrix as `Bᵀ B`.
///
/// Non-alternate inputs get a factor with exactly `rank(a)` rows. Nonzero
/// alternate inputs first receive a dummy unit row and column, which is
/// dropped afterwards; the factor then has `rank(a) + 1` rows.
pub fn gram_factor(a: &Gf2Matrix) -> Result<GramFactor> {
    a.require_symmetric("gram_factor")?;
    let n = a.rows();
    let input_rank = a.rank();
    let augment = input_rank > 0 && a.zero_diagonal();
    let work = if augment {
        let mut w = Gf2Matrix::zeros(n + 1, n + 1);
        w.set(0, 0, true);
        w.paste(1, 1, a);
        w
    } else {
        a.clone()
    };
    let red = congruence_reduce(&work)?;
    let r = red.core_rank;
    let root = normal_form_root(red.unit_blocks, (r - red.unit_blocks) / 2);
    let mut padded = Gf2Matrix::zeros(r, work.rows());
    padded.paste(0, 0, &root);
    let full = padded.mul(&red.transform)?;
    let factor = if augment {
        full.submatrix(0, 1, r, n)?
    } else {
        full
    };
    let factor_rank = factor.rank();
    Ok(GramFactor {
        factor,
        input_rank,
        factor_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn h() -> Gf2Matrix {
        Gf2Matrix::from_bit_rows(&["01", "10"])
    }

    fn check_reduction(a: &Gf2Matrix) -> CongruenceReduction {
        let red = congruence_reduce(a).unwrap();
        assert_eq!(red.core.congruence(&red.transform).unwrap(), *a);
        assert!(red.transform.inverse().unwrap().is_some());
        assert_eq!(red.core_rank, a.rank());
        let r = red.core_rank;
        let d11 = red.core.submatrix(0, 0, r, r).unwrap();
        assert!(d11.inverse().unwrap().is_some());
        let mut rest = red.core.clone();
        rest.paste(0, 0, &Gf2Matrix::zeros(r, r));
        assert!(rest.is_zero());
        assert_eq!(red.reducer.mul(a).unwrap().mul(&red.reducer.transpose()).unwrap(), red.core);
        red
    }

    #[test]
    fn reduction_examples() {
        let red = check_reduction(&Gf2Matrix::identity(2));
        assert_eq!(red.transform, Gf2Matrix::identity(2));
        assert_eq!(red.core, Gf2Matrix::identity(2));

        let red = check_reduction(&Gf2Matrix::from_bit_rows(&["00", "01"]));
        assert_eq!(red.core, Gf2Matrix::from_bit_rows(&["10", "00"]));
        assert_eq!(red.transform, h());

        let red = check_reduction(&h());
        assert_eq!(red.core, h());
        assert_eq!(red.core_rank, 2);
        assert_eq!(red.unit_blocks, 0);
    }

    #[test]
    fn reduction_rejects_asymmetric() {
        let a = Gf2Matrix::from_bit_rows(&["01", "00"]);
        assert!(matches!(congruence_reduce(&a), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn congruent_examples() {
        assert!(congruent(&h(), &h()).unwrap());
        assert!(!congruent(&h(), &Gf2Matrix::identity(2)).unwrap());
        assert!(congruent(&Gf2Matrix::zeros(2, 2), &Gf2Matrix::zeros(2, 2)).unwrap());
        assert!(congruent(&Gf2Matrix::zeros(2, 2), &Gf2Matrix::zeros(3, 3)).is_err());
    }

    fn check_factor(a: &Gf2Matrix) -> GramFactor {
        let g = gram_factor(a).unwrap();
        assert_eq!(g.factor.cols(), a.cols());
        assert_eq!(g.factor.transpose().mul(&g.factor).unwrap(), *a);
        assert_eq!(g.factor_rank, g.factor.rank());
        assert_eq!(g.input_rank, a.rank());
        if a.zero_diagonal() {
            assert!(g.factor_rank == g.input_rank || g.factor_rank == g.input_rank + 1);
        } else {
            assert_eq!(g.factor_rank, g.input_rank);
        }
        g
    }

    #[test]
    fn factor_examples() {
        let g = check_factor(&Gf2Matrix::identity(1));
        assert_eq!(g.factor, Gf2Matrix::identity(1));
        assert_eq!(g.factor_rank, 1);

        let g = check_factor(&Gf2Matrix::zeros(2, 2));
        assert_eq!(g.factor_rank, 0);

        let g = check_factor(&h());
        assert_eq!(g.factor.rows(), 3);
        assert_eq!(g.factor_rank, 2);
    }

    /// Smallest number of rows of any `B` with `Bᵀ B = a`, by exhaustion.
    fn min_factor_rows(a: &Gf2Matrix, max_rows: usize) -> Option<usize> {
        let n = a.cols();
        (0..=max_rows).find(|&h| {
            (0u64..1 << (h * n)).any(|bits| {
                let b = Gf2Matrix::from_fn(h, n, |i, j| (bits >> (i * n + j)) & 1 == 1);
                b.transpose().mul(&b).unwrap() == *a
            })
        })
    }

    #[test]
    fn hyperbolic_plane_needs_three_rows() {
        assert_eq!(min_factor_rows(&h(), 3), Some(3));
        assert_eq!(min_factor_rows(&Gf2Matrix::identity(2), 3), Some(2));
    }

    fn all_symmetric(n: usize) -> Vec<Gf2Matrix> {
        let free: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        (0u32..1 << free.len())
            .map(|bits| {
                let mut m = Gf2Matrix::zeros(n, n);
                for (k, &(i, j)) in free.iter().enumerate() {
                    if bits >> k & 1 == 1 {
                        m.set(i, j, true);
                        m.set(j, i, true);
                    }
                }
                m
            })
            .collect()
    }

    fn invertible(n: usize) -> Vec<Gf2Matrix> {
        (0u32..1 << (n * n))
            .map(|bits| Gf2Matrix::from_fn(n, n, |i, j| bits >> (i * n + j) & 1 == 1))
            .filter(|c| c.rank() == n)
            .collect()
    }

    #[test]
    fn congruence_classes_match_exhaustive_orbits() {
        for n in 1..=4 {
            let group = invertible(n);
            let mats = all_symmetric(n);
            let mut orbit_of: Vec<Option<usize>> = vec![None; mats.len()];
            let index = |m: &Gf2Matrix| mats.iter().position(|x| x == m).unwrap();
            let mut orbits = 0;
            for i in 0..mats.len() {
                if orbit_of[i].is_some() {
                    continue;
                }
                let orbit: HashSet<Gf2Matrix> =
                    group.iter().map(|c| mats[i].congruence(c).unwrap()).collect();
                for m in &orbit {
                    orbit_of[index(m)] = Some(orbits);
                }
                orbits += 1;
            }
            for i in 0..mats.len() {
                for j in 0..mats.len() {
                    assert_eq!(
                        congruent(&mats[i], &mats[j]).unwrap(),
                        orbit_of[i] == orbit_of[j],
                        "n={n}: {:?} vs {:?}",
                        mats[i],
                        mats[j]
                    );
                }
            }
        }
    }

    prop_compose! {
        fn symmetric(max: usize)(n in 0..=max)
            (bits in proptest::collection::vec(any::<bool>(), n * n), n in Just(n)) -> Gf2Matrix {
            Gf2Matrix::from_fn(n, n, |i, j| bits[i.min(j) * n + i.max(j)])
        }
    }

    proptest! {
        #[test]
        fn reduction_is_exact(a in symmetric(14)) {
            check_reduction(&a);
        }

        #[test]
        fn factor_is_exact(a in symmetric(14)) {
            check_factor(&a);
        }

        #[test]
        fn alternate_factor_has_even_columns(a in symmetric(12)) {
            let mut a = a;
            for i in 0..a.rows() {
                a.set(i, i, false);
            }
            let g = check_factor(&a);
            for c in 0..a.cols() {
                prop_assert_eq!(g.factor.column(c).iter().filter(|&&b| b).count() % 2, 0);
            }
        }
    }
}
