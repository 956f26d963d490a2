/// First-order lag `K/(τs + 1)` with an exact zero-order-hold update.
///
/// The gain map lives outside: callers pass `K(u)` for the held input each
/// step. For constant `K` the state after `t` seconds is
/// `K(1 − e^(−t/τ)) + y₀e^(−t/τ)` regardless of how `t` is split into steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderPlant {
    tau_s: f64,
    state: f64,
}

impl FirstOrderPlant {
    pub fn new(tau_s: f64, initial: f64) -> Self {
        assert!(tau_s > 0.0, "time constant must be positive");
        Self {
            tau_s,
            state: initial,
        }
    }

    pub fn tau_s(&self) -> f64 {
        self.tau_s
    }

    pub fn state(&self) -> f64 {
        self.state
    }

    pub fn set_state(&mut self, value: f64) {
        self.state = value;
    }

    pub fn step(&mut self, target: f64, dt_s: f64) -> f64 {
        self.state = relax(self.state, target, self.tau_s, dt_s);
        self.state
    }

    /// Closed-form response from `y0` to a held `target` after `t` seconds.
    pub fn analytic(y0: f64, target: f64, tau_s: f64, t: f64) -> f64 {
        let decay = (-t / tau_s).exp();
        target * (1.0 - decay) + y0 * decay
    }
}

pub(crate) fn relax(x: f64, target: f64, tau_s: f64, dt_s: f64) -> f64 {
    x + (-(-dt_s / tau_s).exp_m1()) * (target - x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_time_constant_is_63_percent() {
        let mut p = FirstOrderPlant::new(0.3, 0.0);
        for _ in 0..300 {
            p.step(1.0, 0.001);
        }
        assert!((p.state() - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn matches_closed_form(
            tau in 0.05f64..10.0,
            k in -500.0f64..500.0,
            y0 in -100.0f64..100.0,
            dt in 1e-5f64..0.01,
            n in 1usize..2000,
        ) {
            let mut p = FirstOrderPlant::new(tau, y0);
            for _ in 0..n {
                p.step(k, dt);
            }
            let exact = FirstOrderPlant::analytic(y0, k, tau, n as f64 * dt);
            prop_assert!((p.state() - exact).abs() <= 1e-6 * k.abs().max(y0.abs()).max(1.0));
        }
    }
}
