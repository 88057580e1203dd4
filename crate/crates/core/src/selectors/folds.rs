use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::seed;

/// Partitions rows `0..n` into `k` folds.
///
/// The rows are shuffled with a stream derived from `seed` and cut into
/// contiguous blocks whose sizes differ by at most one; every fold is
/// returned sorted. `k == n` yields singletons in row order without touching
/// the generator.
pub fn assign_folds(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 || k > n {
        return Err(Error::InvalidConfig(format!(
            "fold count must satisfy 1 < K <= n = {n}, got {k}"
        )));
    }
    if k == n {
        return Ok((0..n).map(|i| vec![i]).collect());
    }
    let mut rows: Vec<usize> = (0..n).collect();
    rows.shuffle(&mut seed::stream(seed, &[0x0F01D]));
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        let mut fold = rows[start..start + len].to_vec();
        fold.sort_unstable();
        folds.push(fold);
        start += len;
    }
    Ok(folds)
}
