//! Exact maximum-likelihood estimation by exhaustive search.
//!
//! Maximizes y^T (2A - 11^T + I) y over all sign vectors. The search space
//! collapses to 2^(n-1) candidates because y and -y give the same Y = yy^T;
//! the first coordinate is pinned to +1. This is the ground-truth oracle for
//! the relaxation solver, so it favors exactness and determinism over scale:
//! n is capped at 24.

use ndarray::Array2;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{validate_adjacency, LabelVector};

pub const MAX_EXACT_N: usize = 24;

#[derive(Clone, Debug, Serialize)]
pub struct MleResult {
    /// Lexicographically first optimum (+1 ordered before -1, first entry
    /// pinned to +1).
    pub best_labels: LabelVector,
    /// y^T (2A - 11^T + I) y at the optimum; exact integer.
    pub best_objective: i64,
    /// Number of distinct optimal Y = yy^T (sign pairs counted once).
    pub num_optima: u64,
    pub is_unique: bool,
    /// Whether the search was restricted to balanced sign vectors. The
    /// unrestricted estimator does not impose balance (the -11^T term
    /// penalizes imbalance by itself), but balanced-only search is useful
    /// when studying the exact-recovery analyses, which compare against
    /// balanced ground truths.
    pub balanced_only: bool,
}

/// d(Y) = <Y*, Y* - Y>: twice the number of entries where yy^T differs from
/// y*y*^T. Zero iff the labelings agree up to a global flip; the smallest
/// value over disagreeing labelings is 4(n-1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct YDistance {
    pub value: i64,
    /// Hamming distance to the closer of y* and -y*.
    pub min_flips: usize,
}

/// Candidate masks are indexed so that ascending index is ascending
/// lexicographic order of the label vector, with +1 ordered before -1:
/// node 0 is always +1 and node j reads the (n-1-j)-th bit, cleared for +1.
/// The returned mask has bit i set iff node i gets +1.
fn mask_from_index(idx: u64, n: usize) -> u32 {
    let mut mask = 1u32;
    for j in 1..n {
        if (idx >> (n - 1 - j)) & 1 == 0 {
            mask |= 1 << j;
        }
    }
    mask
}

fn labels_from_mask(mask: u32, n: usize) -> LabelVector {
    let signs: Vec<i8> = (0..n)
        .map(|i| if (mask >> i) & 1 == 1 { 1 } else { -1 })
        .collect();
    LabelVector::signs(signs).expect("mask yields valid signs")
}

/// y^T (2A - 11^T + I) y for the +1-set described by `mask`, computed in
/// exact integer arithmetic as 2 y^T A y - (sum y)^2 + n.
fn objective_for_mask(rows: &[u32], degrees: &[i64], mask: u32) -> i64 {
    let n = rows.len();
    let mut quad = 0i64;
    for i in 0..n {
        let within = (rows[i] & mask).count_ones() as i64;
        let s_i = 2 * within - degrees[i];
        quad += if (mask >> i) & 1 == 1 { s_i } else { -s_i };
    }
    let sum_y = 2 * i64::from(mask.count_ones()) - n as i64;
    2 * quad - sum_y * sum_y + n as i64
}

struct ChunkBest {
    objective: i64,
    count: u64,
    first_index: u64,
}

/// Exhaustively maximize the estimator objective. With `balanced_only` the
/// search is restricted to sign vectors with equally many +1 and -1 entries
/// (n must then be even). Ties are counted, never broken silently: the
/// reported optimum is the lexicographically first and `num_optima` says how
/// many sign classes attain the maximum.
pub fn brute_force_mle(a: &Array2<u8>, balanced_only: bool) -> Result<MleResult> {
    validate_adjacency(a)?;
    let n = a.nrows();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "exact search needs at least 2 nodes, got {n}"
        )));
    }
    if n > MAX_EXACT_N {
        return Err(Error::ResourceLimit {
            n,
            max: MAX_EXACT_N,
        });
    }
    if balanced_only && n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "balanced search needs even n, got {n}"
        )));
    }
    let rows: Vec<u32> = (0..n)
        .map(|i| {
            let mut row = 0u32;
            for j in 0..n {
                if a[[i, j]] == 1 {
                    row |= 1 << j;
                }
            }
            row
        })
        .collect();
    let degrees: Vec<i64> = rows.iter().map(|r| i64::from(r.count_ones())).collect();

    let total: u64 = 1 << (n - 1);
    let num_chunks = total.min(256);
    let half = n as u32 / 2;

    // Fixed chunking plus an in-order fold keeps the result identical for
    // any thread count.
    let chunks: Vec<Option<ChunkBest>> = (0..num_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * total / num_chunks;
            let hi = (c + 1) * total / num_chunks;
            let mut best: Option<ChunkBest> = None;
            for idx in lo..hi {
                let mask = mask_from_index(idx, n);
                if balanced_only && mask.count_ones() != half {
                    continue;
                }
                let obj = objective_for_mask(&rows, &degrees, mask);
                match &mut best {
                    Some(b) if obj > b.objective => {
                        *b = ChunkBest {
                            objective: obj,
                            count: 1,
                            first_index: idx,
                        }
                    }
                    Some(b) if obj == b.objective => b.count += 1,
                    Some(_) => {}
                    None => {
                        best = Some(ChunkBest {
                            objective: obj,
                            count: 1,
                            first_index: idx,
                        })
                    }
                }
            }
            best
        })
        .collect();

    let mut overall: Option<ChunkBest> = None;
    for chunk in chunks.into_iter().flatten() {
        match &mut overall {
            Some(o) if chunk.objective > o.objective => overall = Some(chunk),
            Some(o) if chunk.objective == o.objective => o.count += chunk.count,
            Some(_) => {}
            None => overall = Some(chunk),
        }
    }
    let best = overall.expect("candidate space is never empty");

    Ok(MleResult {
        best_labels: labels_from_mask(mask_from_index(best.first_index, n), n),
        best_objective: best.objective,
        num_optima: best.count,
        is_unique: best.count == 1,
        balanced_only,
    })
}

/// Exact integer objective y^T (2A - 11^T + I) y for a given labeling.
pub fn mle_objective(a: &Array2<u8>, labels: &LabelVector) -> Result<i64> {
    validate_adjacency(a)?;
    let n = a.nrows();
    if labels.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "adjacency is {n}x{n} but labels have length {}",
            labels.len()
        )));
    }
    let signs = labels.as_slice();
    let mut quad = 0i64;
    for i in 0..n {
        for j in 0..n {
            if a[[i, j]] == 1 {
                quad += (signs[i] * signs[j]) as i64;
            }
        }
    }
    let sum_y: i64 = signs.iter().map(|&s| s as i64).sum();
    Ok(2 * quad - sum_y * sum_y + n as i64)
}

/// d(Y) = <Y*, Y* - Y> = n^2 - (y^T y*)^2, with y^T y* = n - 2k for k label
/// disagreements, so the value is 4 k (n - k).
pub fn y_distance(labels: &LabelVector, y_star: &LabelVector) -> Result<YDistance> {
    let n = labels.len();
    if y_star.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "label vectors have lengths {n} and {}",
            y_star.len()
        )));
    }
    let k = labels
        .as_slice()
        .iter()
        .zip(y_star.as_slice())
        .filter(|(a, b)| a != b)
        .count();
    let value = 4 * k as i64 * (n - k) as i64;
    Ok(YDistance {
        value,
        min_flips: k.min(n - k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn adjacency(n: usize, edges: &[(usize, usize)]) -> Array2<u8> {
        let mut a = Array2::<u8>::zeros((n, n));
        for &(i, j) in edges {
            a[[i, j]] = 1;
            a[[j, i]] = 1;
        }
        a
    }

    fn complete(n: usize) -> Array2<u8> {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        adjacency(n, &edges)
    }

    #[test]
    fn perfect_four_unique_optimum() {
        let a = adjacency(4, &[(0, 1), (2, 3)]);
        for balanced in [false, true] {
            let result = brute_force_mle(&a, balanced).unwrap();
            assert_eq!(result.best_labels.as_slice(), &[1, 1, -1, -1]);
            assert_eq!(result.best_objective, 12);
            assert_eq!(result.num_optima, 1);
            assert!(result.is_unique);
        }
    }

    #[test]
    fn empty_graph_balanced_ties() {
        // Objective n - (sum y)^2: every balanced class attains 4; there are
        // three such classes at n=4 and the lexicographically first is
        // (+,+,-,-).
        let result = brute_force_mle(&adjacency(4, &[]), false).unwrap();
        assert_eq!(result.best_objective, 4);
        assert_eq!(result.num_optima, 3);
        assert!(!result.is_unique);
        assert_eq!(result.best_labels.as_slice(), &[1, 1, -1, -1]);
    }

    #[test]
    fn complete_graph_modes() {
        // Objective (sum y)^2 - n: unrestricted optimum is the all-ones
        // class; balanced classes tie below it.
        let result = brute_force_mle(&complete(4), false).unwrap();
        assert_eq!(result.best_objective, 12);
        assert_eq!(result.num_optima, 1);
        assert_eq!(result.best_labels.as_slice(), &[1, 1, 1, 1]);

        let result = brute_force_mle(&complete(4), true).unwrap();
        assert_eq!(result.best_objective, -4);
        assert_eq!(result.num_optima, 3);
        assert!(result.balanced_only);
    }

    #[test]
    fn objective_fixtures() {
        let empty = adjacency(4, &[]);
        // All ones: 2*0 - 16 + 4 = -12.
        let ones = LabelVector::signs(vec![1, 1, 1, 1]).unwrap();
        assert_eq!(mle_objective(&empty, &ones).unwrap(), -12);
        // Balanced: the imbalance term vanishes.
        let balanced = LabelVector::signs(vec![1, 1, -1, -1]).unwrap();
        assert_eq!(mle_objective(&empty, &balanced).unwrap(), 4);
        // Perfect graph at its planted labels.
        let perfect = adjacency(4, &[(0, 1), (2, 3)]);
        assert_eq!(mle_objective(&perfect, &balanced).unwrap(), 12);
    }

    #[test]
    fn objective_flip_invariance() {
        let a = adjacency(6, &[(0, 1), (1, 2), (3, 4), (0, 5)]);
        let y = LabelVector::signs(vec![1, -1, 1, 1, -1, -1]).unwrap();
        let flipped = LabelVector::signs(vec![-1, 1, -1, -1, 1, 1]).unwrap();
        assert_eq!(
            mle_objective(&a, &y).unwrap(),
            mle_objective(&a, &flipped).unwrap()
        );
    }

    #[test]
    fn optimum_dominates_random_candidates() {
        use rand::Rng;
        let mut rng = rng::stream(99, &[0x5eed]);
        let n = 10;
        let mut a = Array2::<u8>::zeros((n, n));
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < 0.4 {
                    a[[i, j]] = 1;
                    a[[j, i]] = 1;
                }
            }
        }
        let best = brute_force_mle(&a, false).unwrap();
        for _ in 0..1000 {
            let signs: Vec<i8> = (0..n)
                .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                .collect();
            let y = LabelVector::signs(signs).unwrap();
            assert!(mle_objective(&a, &y).unwrap() <= best.best_objective);
        }
        // The reported optimum value is attained by the reported labels.
        assert_eq!(
            mle_objective(&a, &best.best_labels).unwrap(),
            best.best_objective
        );
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        assert_eq!(mask_from_index(0, 4), 0b1111);
        assert_eq!(mask_from_index(1, 4), 0b0111);
        assert_eq!(mask_from_index(2, 4), 0b1011);
        assert_eq!(mask_from_index(7, 4), 0b0001);
        // Walking indices in order walks label vectors in lexicographic
        // order with +1 before -1.
        let mut prev: Option<Vec<i8>> = None;
        for idx in 0..8u64 {
            let labels = labels_from_mask(mask_from_index(idx, 4), 4);
            let key: Vec<i8> = labels.as_slice().iter().map(|&s| -s).collect();
            if let Some(p) = prev {
                assert!(p < key);
            }
            prev = Some(key);
        }
    }

    #[test]
    fn resource_cap_enforced() {
        let a = Array2::<u8>::zeros((25, 25));
        assert!(matches!(
            brute_force_mle(&a, false),
            Err(Error::ResourceLimit { n: 25, max: 24 })
        ));
        assert!(brute_force_mle(&adjacency(2, &[]), false).is_ok());
    }

    #[test]
    fn balanced_only_rejects_odd_n() {
        let a = Array2::<u8>::zeros((5, 5));
        assert!(brute_force_mle(&a, true).is_err());
        assert!(brute_force_mle(&a, false).is_ok());
    }

    #[test]
    fn y_distance_fixtures() {
        let y = LabelVector::signs(vec![1, 1, -1, -1]).unwrap();
        let same = y_distance(&y, &y).unwrap();
        assert_eq!(same.value, 0);
        assert_eq!(same.min_flips, 0);

        let flipped = LabelVector::signs(vec![-1, -1, 1, 1]).unwrap();
        let d = y_distance(&flipped, &y).unwrap();
        assert_eq!(d.value, 0);
        assert_eq!(d.min_flips, 0);

        // One disagreement at n=4: 4 * 1 * 3 = 12 = 4(n-1).
        let one_off = LabelVector::signs(vec![1, 1, -1, 1]).unwrap();
        let d = y_distance(&one_off, &y).unwrap();
        assert_eq!(d.value, 12);
        assert_eq!(d.min_flips, 1);
    }

    #[test]
    fn y_distance_matches_entry_count() {
        // Independent route: count differing entries of yy^T and y*y*^T
        // directly; d(Y) is twice that count.
        let y = LabelVector::signs(vec![1, -1, -1, 1, 1, -1]).unwrap();
        let y_star = LabelVector::signs(vec![1, 1, -1, -1, 1, -1]).unwrap();
        let d = y_distance(&y, &y_star).unwrap();
        let a = y.as_slice();
        let b = y_star.as_slice();
        let mut differing = 0i64;
        for i in 0..6 {
            for j in 0..6 {
                if a[i] * a[j] != b[i] * b[j] {
                    differing += 1;
                }
            }
        }
        assert_eq!(d.value, 2 * differing);
        assert!(d.value % 4 == 0);
    }

    #[test]
    fn y_distance_rejects_length_mismatch() {
        let y = LabelVector::signs(vec![1, -1]).unwrap();
        let z = LabelVector::signs(vec![1, -1, 1, -1]).unwrap();
        assert!(y_distance(&y, &z).is_err());
    }
}
