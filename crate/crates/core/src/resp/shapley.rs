use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::{PayoffGame, ReportEntry, RespError, ResponsibilityReport};

/// Largest player count for which the exact value is attempted.
pub const DEFAULT_SHAPLEY_CAP: usize = 24;

/// `w[k] = k! (n-k-1)! / n!`, the weight of a switching pair whose coalition
/// has `k` players.
pub fn shapley_weights(n: usize) -> Vec<BigRational> {
    if n == 0 {
        return Vec::new();
    }
    let mut w = Vec::with_capacity(n);
    let mut cur = BigRational::new(BigInt::from(1), BigInt::from(n));
    for k in 0..n {
        w.push(cur.clone());
        if k + 1 < n {
            cur *= BigRational::new(BigInt::from(k + 1), BigInt::from(n - k - 1));
        }
    }
    w
}

/// Next integer with the same popcount.
fn next_same_popcount(v: u64) -> u64 {
    let t = v | (v - 1);
    (t + 1) | (((!t & (!t).wrapping_neg()) - 1) >> (v.trailing_zeros() + 1))
}

fn masks_of_size(n: usize, k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut m = (1u64 << k) - 1;
    while m < limit {
        out.push(m);
        m = next_same_popcount(m);
    }
    out
}

/// Exact Shapley values of every player of `pg`.
///
/// Fills a one-bit-per-coalition table layer by layer. A coalition is
/// winning without a solve whenever one of its direct subsets already is.
pub fn shapley_exact(pg: &PayoffGame<'_>, cap: usize) -> Result<ResponsibilityReport, RespError> {
    let players = pg.players();
    let n = players.len();
    if n > cap.min(63) {
        return Err(RespError::CapExceeded { players: n, cap });
    }
    let setting = pg.setting();
    let mut entries: Vec<ReportEntry> = players
        .iter()
        .map(|p| ReportEntry {
            name: p.name.clone(),
            members: p.members.clone(),
            value: BigRational::zero(),
        })
        .collect();
    let report = |entries, stats| ResponsibilityReport {
        mode: setting.mode,
        kind: players.kind(),
        entries,
        stats,
    };
    if n == 0 {
        return Ok(report(entries, pg.stats()));
    }
    let full: u64 = (1u64 << n) - 1;
    let mut solved = 2u64;
    let mut inferred = 0u64;
    let empty_wins = setting.value(&players.flatten_mask(0));
    let full_wins = setting.value(&players.flatten_mask(full));
    if empty_wins || !full_wins {
        pg.add_stats(solved, inferred);
        return Ok(report(entries, pg.stats()));
    }

    let mut table = FixedBitSet::with_capacity(1usize << n);
    table.insert(full as usize);
    for k in 1..n {
        let layer = masks_of_size(n, k);
        let values: Vec<(bool, bool)> = layer
            .par_iter()
            .map(|&m| {
                let mut bits = m;
                while bits != 0 {
                    let i = bits.trailing_zeros();
                    bits &= bits - 1;
                    if table.contains((m ^ (1u64 << i)) as usize) {
                        return (true, false);
                    }
                }
                (setting.value(&players.flatten_mask(m)), true)
            })
            .collect();
        for (&m, &(v, fresh)) in layer.iter().zip(&values) {
            if fresh {
                solved += 1;
            } else {
                inferred += 1;
            }
            if v {
                table.insert(m as usize);
            }
        }
    }
    pg.add_stats(solved, inferred);

    // counts[p * n + k]: losing coalitions of size k that p turns winning
    let counts = (0..=full)
        .into_par_iter()
        .fold(
            || vec![0u64; n * n],
            |mut acc, m| {
                if !table.contains(m as usize) {
                    let k = m.count_ones() as usize;
                    let mut free = full & !m;
                    while free != 0 {
                        let p = free.trailing_zeros() as usize;
                        free &= free - 1;
                        if table.contains((m | (1u64 << p)) as usize) {
                            acc[p * n + k] += 1;
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; n * n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let weights = shapley_weights(n);
    for (p, entry) in entries.iter_mut().enumerate() {
        let mut v = BigRational::zero();
        for (k, w) in weights.iter().enumerate() {
            let c = counts[p * n + k];
            if c != 0 {
                v += w * BigRational::from_integer(BigInt::from(c));
            }
        }
        entry.value = v;
    }
    Ok(report(entries, pg.stats()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gosper_enumerates_binomial() {
        assert_eq!(masks_of_size(5, 2).len(), 10);
        assert_eq!(masks_of_size(6, 3).len(), 20);
        assert_eq!(masks_of_size(4, 4), vec![15]);
    }

    #[test]
    fn weights_sum_to_one_per_player() {
        // Σ_k C(n-1, k) w_k = 1
        for n in 1..12usize {
            let w = shapley_weights(n);
            let mut total = BigRational::zero();
            let mut binom = BigInt::from(1);
            for (k, wk) in w.iter().enumerate() {
                total += wk * BigRational::from_integer(binom.clone());
                binom = binom * BigInt::from(n - 1 - k) / BigInt::from(k + 1);
            }
            assert_eq!(total, BigRational::from_integer(BigInt::from(1)));
        }
    }
}
