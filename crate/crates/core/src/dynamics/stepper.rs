use num_complex::Complex64;

use super::{DynamicsError, HartreeKernel, Scheme, SimConfig, State};
use crate::spectral::{forward_raw, frac_symbol, inverse_raw, ComplexField, Grid};

/// Relative slack when deciding whether a span is an integer number of steps.
const STEP_SLACK: f64 = 1e-9;

/// Splitting integrator with the multipliers for the configured step cached.
///
/// The potential sub-flow `i∂ₜu = V u` keeps `|u|` fixed pointwise, so it is
/// solved exactly as the phase rotation `u ← e^{-i dt V} u`.
#[derive(Clone, Debug)]
pub struct Stepper {
    cfg: SimConfig,
    grid: Grid,
    symbol: Vec<f64>,
    kernel: HartreeKernel,
    half_phase: Vec<Complex64>,
    full_phase: Vec<Complex64>,
}

impl Stepper {
    pub fn new(cfg: &SimConfig) -> Result<Self, DynamicsError> {
        cfg.validate()?;
        let grid = cfg.grid()?;
        let symbol: Vec<f64> = frac_symbol(&grid, cfg.alpha)?.values().iter().map(|z| z.re).collect();
        let kernel = HartreeKernel::new(&grid, cfg.gamma, cfg.dealias)?;
        let half_phase = phases(&symbol, 0.5 * cfg.dt);
        let full_phase = phases(&symbol, cfg.dt);
        Ok(Self {
            cfg: cfg.clone(),
            grid,
            symbol,
            kernel,
            half_phase,
            full_phase,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kernel(&self) -> &HartreeKernel {
        &self.kernel
    }

    fn linear(&self, data: &mut Vec<Complex64>, tau: f64) {
        forward_raw(&self.grid, data);
        if tau == 0.5 * self.cfg.dt {
            mul_in_place(data, &self.half_phase);
        } else if tau == self.cfg.dt {
            mul_in_place(data, &self.full_phase);
        } else {
            for (z, s) in data.iter_mut().zip(&self.symbol) {
                *z *= Complex64::cis(-tau * s);
            }
        }
        inverse_raw(&self.grid, data);
    }

    fn nonlinear(&self, data: &mut [Complex64], tau: f64) {
        if self.cfg.lambda == 0.0 {
            return;
        }
        let v = self.kernel.potential_raw(data, self.cfg.lambda);
        for (z, p) in data.iter_mut().zip(&v) {
            *z *= Complex64::cis(-tau * p.re);
        }
    }

    /// One splitting step of length `dt`.
    pub fn step(&self, state: &State, dt: f64) -> Result<State, DynamicsError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(DynamicsError::InvalidParameter {
                name: "dt",
                value: dt,
                range: "(0, ∞)",
            });
        }
        state.u.check_grid(&self.grid)?;
        let mut data = state.u.values().to_vec();
        self.step_raw(&mut data, dt);
        let t = state.t + dt;
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(DynamicsError::BlowUp { t });
        }
        Ok(State::new(t, ComplexField::from_raw(&self.grid, data)))
    }

    fn step_raw(&self, data: &mut Vec<Complex64>, dt: f64) {
        match self.cfg.scheme {
            Scheme::Strang => {
                self.linear(data, 0.5 * dt);
                self.nonlinear(data, dt);
                self.linear(data, 0.5 * dt);
            }
            Scheme::Lie => {
                self.linear(data, dt);
                self.nonlinear(data, dt);
            }
        }
    }

    /// Steps with the configured `dt` until `t_target`, shortening the last
    /// step to land on it exactly. Splitting a span at a point of the `dt`
    /// grid gives bit-identical results to stepping it in one go.
    pub fn advance(&self, state: &State, t_target: f64) -> Result<State, DynamicsError> {
        if t_target < state.t {
            return Err(DynamicsError::BackwardsInTime {
                current: state.t,
                target: t_target,
            });
        }
        state.u.check_grid(&self.grid)?;
        let dt = self.cfg.dt;
        let span = t_target - state.t;
        let full_steps = (span / dt + STEP_SLACK).floor() as u64;
        let remainder = span - full_steps as f64 * dt;
        let mut data = state.u.values().to_vec();
        for k in 1..=full_steps {
            self.step_raw(&mut data, dt);
            if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(DynamicsError::BlowUp {
                    t: state.t + k as f64 * dt,
                });
            }
        }
        if remainder > STEP_SLACK * dt {
            self.step_raw(&mut data, remainder);
            if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(DynamicsError::BlowUp { t: t_target });
            }
        }
        Ok(State::new(t_target, ComplexField::from_raw(&self.grid, data)))
    }
}

fn phases(symbol: &[f64], tau: f64) -> Vec<Complex64> {
    symbol.iter().map(|s| Complex64::cis(-tau * s)).collect()
}

fn mul_in_place(data: &mut [Complex64], m: &[Complex64]) {
    for (z, p) in data.iter_mut().zip(m) {
        *z *= p;
    }
}

/// One step of the configured scheme (Strang by default).
pub fn strang_step(state: &State, dt: f64, cfg: &SimConfig) -> Result<State, DynamicsError> {
    Stepper::new(cfg)?.step(state, dt)
}

/// Evolves from `state0` to `cfg.t_end`, calling every observer at each sample
/// time in `sample_times` that falls in `[state0.t, cfg.t_end]`.
pub fn evolve(
    state0: State,
    cfg: &SimConfig,
    sample_times: &[f64],
    observers: &mut [&mut dyn FnMut(&State)],
) -> Result<State, DynamicsError> {
    if cfg.t_end < state0.t {
        return Err(DynamicsError::BackwardsInTime {
            current: state0.t,
            target: cfg.t_end,
        });
    }
    let stepper = Stepper::new(cfg)?;
    let mut times: Vec<f64> = sample_times
        .iter()
        .copied()
        .filter(|&t| t >= state0.t && t <= cfg.t_end)
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut state = state0;
    for t in times {
        state = stepper.advance(&state, t)?;
        for obs in observers.iter_mut() {
            obs(&state);
        }
    }
    stepper.advance(&state, cfg.t_end)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{linear_propagate, mass};

    fn gaussian_state(g: &Grid, amp: f64) -> State {
        let u = ComplexField::from_position_fn(g, |x| {
            let r2 = (x[0] - 0.4).powi(2) + x[1] * x[1] + (x[2] + 0.2).powi(2);
            Complex64::new(amp * (-r2 / 2.0).exp(), 0.0) * Complex64::cis(0.3 * x[0])
        });
        State::new(0.0, u)
    }

    fn cfg16() -> SimConfig {
        SimConfig {
            dt: 0.05,
            ..SimConfig::new(16, 10.0, 1.8, 1.0)
        }
    }

    #[test]
    fn zero_lambda_is_free_flow() {
        let cfg = SimConfig { lambda: 0.0, ..cfg16() };
        let g = cfg.grid().unwrap();
        let s = gaussian_state(&g, 1.0);
        let stepped = strang_step(&s, cfg.dt, &cfg).unwrap();
        let free = linear_propagate(&s.u, 0.05, 1.8).unwrap();
        for (a, b) in stepped.u.values().iter().zip(free.values()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn mass_is_conserved_per_step() {
        let cfg = SimConfig {
            lambda: -2.0,
            ..cfg16()
        };
        let g = cfg.grid().unwrap();
        let s0 = gaussian_state(&g, 1.0);
        let s1 = strang_step(&s0, cfg.dt, &cfg).unwrap();
        let (m0, m1) = (mass(&s0.u), mass(&s1.u));
        assert!(((m1 - m0) / m0).abs() < 1e-12);
        assert!((s1.t - 0.05).abs() < 1e-15);
    }

    #[test]
    fn gauge_covariance() {
        let cfg = cfg16();
        let g = cfg.grid().unwrap();
        let s0 = gaussian_state(&g, 1.0);
        let phase = Complex64::cis(0.7);
        let rotated = State::new(0.0, s0.u.scale(phase));
        let a = strang_step(&s0, cfg.dt, &cfg).unwrap();
        let b = strang_step(&rotated, cfg.dt, &cfg).unwrap();
        for (x, y) in a.u.values().iter().zip(b.u.values()) {
            assert!((x * phase - y).norm() < 1e-13);
        }
    }

    #[test]
    fn evolve_to_current_time_is_identity() {
        let cfg = cfg16();
        let g = cfg.grid().unwrap();
        let s0 = State::new(1.0, gaussian_state(&g, 1.0).u);
        let out = evolve(s0.clone(), &cfg, &[], &mut []).unwrap();
        assert_eq!(out, s0);
    }

    #[test]
    fn split_evolution_is_bit_identical() {
        let cfg = SimConfig { t_end: 0.6, ..cfg16() };
        let g = cfg.grid().unwrap();
        let s0 = gaussian_state(&g, 1.0);
        let full = evolve(s0.clone(), &cfg, &[], &mut []).unwrap();
        let half_cfg = SimConfig {
            t_end: 0.3,
            ..cfg.clone()
        };
        let mid = evolve(s0, &half_cfg, &[], &mut []).unwrap();
        let rest = evolve(mid, &cfg, &[], &mut []).unwrap();
        assert_eq!(full, rest);
    }

    #[test]
    fn last_step_is_shortened() {
        let cfg = SimConfig { t_end: 0.12, ..cfg16() };
        let g = cfg.grid().unwrap();
        let out = evolve(gaussian_state(&g, 0.1), &cfg, &[], &mut []).unwrap();
        assert_eq!(out.t, 0.12);
    }

    #[test]
    fn observers_fire_at_sample_times() {
        let cfg = SimConfig { t_end: 0.5, ..cfg16() };
        let g = cfg.grid().unwrap();
        let mut seen = Vec::new();
        let mut obs = |s: &State| seen.push(s.t);
        evolve(gaussian_state(&g, 0.1), &cfg, &[0.0, 0.25, 0.5, 0.9], &mut [&mut obs]).unwrap();
        assert_eq!(seen, vec![0.0, 0.25, 0.5]);
    }

    #[test]
    fn blow_up_is_reported() {
        let cfg = cfg16();
        let g = cfg.grid().unwrap();
        let mut u = gaussian_state(&g, 1.0).u;
        u.values_mut()[3] = Complex64::new(f64::NAN, 0.0);
        let err = Stepper::new(&cfg).unwrap().step(&State::new(0.0, u), 0.05).unwrap_err();
        assert!(matches!(err, DynamicsError::BlowUp { .. }));
    }

    #[test]
    fn backwards_target_rejected() {
        let cfg = cfg16();
        let g = cfg.grid().unwrap();
        let s = State::new(1.0, gaussian_state(&g, 1.0).u);
        assert!(Stepper::new(&cfg).unwrap().advance(&s, 0.5).is_err());
    }
}
