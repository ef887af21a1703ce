//! Sample statistics used to check simulated default times against the model.

/// Kendall's tau-b in `O(n log n)` (Knight's algorithm).
///
/// Sorts by `x` (ties broken by `y`), then counts discordant pairs as the
/// number of swaps a merge sort on `y` performs. Returns `None` for fewer
/// than two points or when either coordinate is constant.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "kendall_tau: length mismatch");
    let n = x.len();
    if n < 2 {
        return None;
    }
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let n0 = pair_count(n as u64);
    let ties_x = tie_pairs(pairs.iter().map(|p| p.0));
    let ties_xy = tie_pairs_by(&pairs, |a, b| a.0 == b.0 && a.1 == b.1);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; n];
    let swaps = merge_count(&mut ys, &mut buf);
    let ties_y = tie_pairs(ys.iter().copied());

    let denom = ((n0 - ties_x) as f64) * ((n0 - ties_y) as f64);
    if denom == 0.0 {
        return None;
    }
    let numer = n0 as i128 - ties_x as i128 - ties_y as i128 + ties_xy as i128 - 2 * swaps as i128;
    Some(numer as f64 / denom.sqrt())
}

fn pair_count(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

fn tie_pairs(sorted: impl Iterator<Item = f64>) -> u64 {
    let mut total = 0;
    let mut run = 0u64;
    let mut prev: Option<f64> = None;
    for v in sorted {
        if prev == Some(v) {
            run += 1;
        } else {
            total += pair_count(run);
            run = 1;
        }
        prev = Some(v);
    }
    total + pair_count(run)
}

fn tie_pairs_by<T>(sorted: &[T], same: impl Fn(&T, &T) -> bool) -> u64 {
    let mut total = 0;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if same(&w[0], &w[1]) {
            run += 1;
        } else {
            total += pair_count(run);
            run = 1;
        }
    }
    total + pair_count(run)
}

/// Bottom-up merge sort of `v`, returning the number of inversions.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    let mut swaps = 0u64;
    let mut width = 1;
    while width < n {
        let mut start = 0;
        while start < n {
            let mid = (start + width).min(n);
            let end = (start + 2 * width).min(n);
            let (mut i, mut j, mut k) = (start, mid, start);
            while i < mid && j < end {
                if v[j] < v[i] {
                    buf[k] = v[j];
                    swaps += (mid - i) as u64;
                    j += 1;
                } else {
                    buf[k] = v[i];
                    i += 1;
                }
                k += 1;
            }
            buf[k..k + (mid - i)].copy_from_slice(&v[i..mid]);
            k += mid - i;
            buf[k..k + (end - j)].copy_from_slice(&v[j..end]);
            start = end;
        }
        v.copy_from_slice(buf);
        width *= 2;
    }
    swaps
}
