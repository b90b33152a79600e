/// Relative tolerance for merging cadence and dyadic times.
const MERGE_TOL: f64 = 1e-12;

/// Sample times in `[0, t_end]`: the cadence `kΔ` together with the dyadic
/// times `2^m`, sorted and merged. `t_end` itself is only included when it
/// lands on one of them.
pub fn sample_times(interval: f64, t_end: f64) -> Vec<f64> {
    let mut times: Vec<f64> = Vec::new();
    let mut k: u64 = 0;
    loop {
        let t = k as f64 * interval;
        if t > t_end * (1.0 + MERGE_TOL) {
            break;
        }
        times.push(t.min(t_end));
        k += 1;
    }
    let mut d = 1.0;
    while d <= t_end * (1.0 + MERGE_TOL) {
        times.push(d);
        d *= 2.0;
    }
    times.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::with_capacity(times.len());
    for t in times {
        match merged.last_mut() {
            Some(last) if (t - *last).abs() <= MERGE_TOL * t.max(1.0) => {
                // keep the exact dyadic value when a cadence point rounds near it
                if is_dyadic(t) {
                    *last = t;
                }
            }
            _ => merged.push(t),
        }
    }
    merged
}

/// `Some(m)` when `t = 2^m` exactly with `m ≥ 0`.
pub fn dyadic_index(t: f64) -> Option<i32> {
    if t >= 1.0 && is_dyadic(t) {
        Some(t.log2().round() as i32)
    } else {
        None
    }
}

fn is_dyadic(t: f64) -> bool {
    t > 0.0 && t == 2f64.powi(t.log2().round() as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_cadence_and_dyadic() {
        assert_eq!(
            sample_times(0.75, 4.0),
            vec![0.0, 0.75, 1.0, 1.5, 2.0, 2.25, 3.0, 3.75, 4.0]
        );
        assert_eq!(sample_times(0.5, 0.3), vec![0.0]);
        assert_eq!(sample_times(3.0, 2.5), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn dyadic_detection() {
        assert_eq!(dyadic_index(1.0), Some(0));
        assert_eq!(dyadic_index(64.0), Some(6));
        assert_eq!(dyadic_index(0.5), None);
        assert_eq!(dyadic_index(3.0), None);
    }
}
