use super::DiagnosticsError;

/// Least-squares power law `value ≈ A t^p` on a window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    /// `ln A`.
    pub log_prefactor: f64,
    pub r_squared: f64,
    pub samples: usize,
}

/// Minimum number of samples inside the window.
pub const MIN_FIT_SAMPLES: usize = 8;

/// Fits `log value` against `log t` over samples with `t ∈ [t_a, t_b]`.
pub fn decay_fit(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit, DiagnosticsError> {
    let (ta, tb) = window;
    if !(ta >= 1.0 && tb > ta && tb.is_finite()) {
        return Err(DiagnosticsError::InvalidWindow { start: ta, end: tb });
    }
    let pts: Vec<(f64, f64)> = series.iter().copied().filter(|&(t, _)| t >= ta && t <= tb).collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(DiagnosticsError::TooFewSamples {
            found: pts.len(),
            needed: MIN_FIT_SAMPLES,
        });
    }
    if let Some(&(t, value)) = pts.iter().find(|&&(_, v)| !(v > 0.0 && v.is_finite())) {
        return Err(DiagnosticsError::NonPositive { t, value });
    }
    let xy: Vec<(f64, f64)> = pts.iter().map(|&(t, v)| (t.ln(), v.ln())).collect();
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xy.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    // a constant series has no variance to explain
    let r_squared = if syy > 1e-24 * n * my.abs().max(1.0).powi(2) {
        1.0 - sse / syy
    } else {
        1.0
    };
    Ok(DecayFit {
        exponent: slope,
        log_prefactor: intercept,
        r_squared,
        samples: xy.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(p: f64) -> Vec<(f64, f64)> {
        (0..40)
            .map(|i| {
                let t = 1.0 + 0.5 * i as f64;
                (t, 3.0 * t.powf(p))
            })
            .collect()
    }

    #[test]
    fn recovers_power_laws() {
        for p in [-0.5, -1.0, -1.5, 0.0] {
            let fit = decay_fit(&series(p), (1.0, 20.0)).unwrap();
            assert!((fit.exponent - p).abs() < 1e-6, "{p}: {fit:?}");
            assert!((fit.r_squared - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let s = series(-1.5);
        assert!(matches!(
            decay_fit(&s, (0.5, 10.0)),
            Err(DiagnosticsError::InvalidWindow { .. })
        ));
        assert!(matches!(
            decay_fit(&s, (1.0, 3.0)),
            Err(DiagnosticsError::TooFewSamples { .. })
        ));
        let mut bad = s.clone();
        bad[3].1 = 0.0;
        assert!(matches!(
            decay_fit(&bad, (1.0, 20.0)),
            Err(DiagnosticsError::NonPositive { .. })
        ));
    }
}
