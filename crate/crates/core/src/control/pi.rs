use super::PiGains;

/// Integrator state of a PI loop with output clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiState {
    pub integral: f64,
    pub last_output: f64,
    pub output_limits: (f64, f64),
}

impl PiState {
    pub fn new(output_limits: (f64, f64)) -> Self {
        assert!(output_limits.0 <= output_limits.1);
        Self {
            integral: 0.0,
            last_output: 0.0,
            output_limits,
        }
    }

    pub fn unbounded() -> Self {
        Self::new((f64::NEG_INFINITY, f64::INFINITY))
    }
}

fn advance(state: &mut PiState, gains: &PiGains, p_error: f64, error: f64, dt: f64) -> f64 {
    let (lo, hi) = state.output_limits;
    let p = gains.kp * p_error;
    let mut integral = state.integral + error * dt;
    // anti-windup: the integral may only hold what the actuator can deliver
    if gains.ki > 0.0 {
        if p + gains.ki * integral > hi {
            integral = (hi - p) / gains.ki;
        } else if p + gains.ki * integral < lo {
            integral = (lo - p) / gains.ki;
        }
    }
    state.integral = integral;
    state.last_output = (p + gains.ki * integral).clamp(lo, hi);
    state.last_output
}

/// One PI update: `integral += error·dt`, clamped so that
/// `kp·error + ki·integral` stays inside the output limits.
pub fn pi_step(state: &PiState, gains: &PiGains, error: f64, dt: f64) -> (f64, PiState) {
    let mut next = *state;
    let out = advance(&mut next, gains, error, error, dt);
    (out, next)
}

/// PI loop with a proportional setpoint weight `b`:
/// `u = kp·(b·r − y) + ki·∫(r − y)`. `b = 1` is the textbook PI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiController {
    pub gains: PiGains,
    pub setpoint_weight: f64,
    pub state: PiState,
}

impl PiController {
    pub fn new(gains: PiGains, setpoint_weight: f64, output_limits: (f64, f64)) -> Self {
        Self {
            gains,
            setpoint_weight,
            state: PiState::new(output_limits),
        }
    }

    pub fn update(&mut self, setpoint: f64, measured: f64, dt: f64) -> f64 {
        let p_error = self.setpoint_weight * setpoint - measured;
        advance(
            &mut self.state,
            &self.gains,
            p_error,
            setpoint - measured,
            dt,
        )
    }

    /// Sets the integral so that the next output with zero error equals
    /// `output` at the given operating point (bumpless hand-over).
    pub fn preload(&mut self, setpoint: f64, measured: f64, output: f64) {
        if self.gains.ki > 0.0 {
            let p = self.gains.kp * (self.setpoint_weight * setpoint - measured);
            self.state.integral = (output - p) / self.gains.ki;
        }
        self.state.last_output = output;
    }

    pub fn reset(&mut self) {
        self.state.integral = 0.0;
        self.state.last_output = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: PiGains = PiGains { kp: 27.0, ki: 28.0 };

    #[test]
    fn rest() {
        let (u, s) = pi_step(&PiState::unbounded(), &G, 0.0, 0.01);
        assert_eq!(u, 0.0);
        assert_eq!(s.integral, 0.0);
    }

    #[test]
    fn constant_error_is_linear_in_time() {
        let mut s = PiState::unbounded();
        let e = 0.7;
        let mut u = 0.0;
        for _ in 0..250 {
            (u, s) = pi_step(&s, &G, e, 0.004);
        }
        let expect = G.kp * e + G.ki * e * 1.0;
        assert!((u - expect).abs() < 1e-9, "{u} vs {expect}");
    }

    #[test]
    fn integral_stops_at_clamp() {
        let mut s = PiState::new((0.0, 100.0));
        let mut peak: f64 = 0.0;
        for _ in 0..10_000 {
            let (u, n) = pi_step(&s, &G, 2.0, 0.01);
            assert!(u <= 100.0);
            s = n;
            peak = peak.max(s.integral);
        }
        let cap = (100.0 - G.kp * 2.0) / G.ki;
        assert!((s.integral - cap).abs() < 1e-12);
        assert!(peak <= cap + 1e-12);
        // recovers as soon as the error reverses
        let (u, _) = pi_step(&s, &G, -0.5, 0.01);
        assert!(u < 100.0);
    }

    #[test]
    fn weighted_matches_plain_when_b_is_one() {
        let mut c = PiController::new(G, 1.0, (-1e9, 1e9));
        let mut s = PiState::new((-1e9, 1e9));
        for k in 0..100 {
            let r = (k as f64 * 0.1).sin();
            let y = 0.3;
            let a = c.update(r, y, 0.01);
            let (b, n) = pi_step(&s, &G, r - y, 0.01);
            s = n;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn preload_is_bumpless() {
        let mut c = PiController::new(G, 14.0 / 27.0, (-10.0, 400.0));
        c.preload(20.0, 20.0, 20.0);
        let u = c.update(20.0, 20.0, 0.01);
        assert!((u - 20.0).abs() < 1e-12);
    }
}
