use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

/// Planar position, metres north and east.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FlatState {
    pub p_n: f64,
    pub p_e: f64,
}

/// Planar velocity, m/s north and east.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FlatInput {
    pub v_n: f64,
    pub v_e: f64,
}

impl FlatState {
    pub fn vector(&self) -> Vector2<f64> {
        Vector2::new(self.p_n, self.p_e)
    }

    pub fn distance(&self, other: &FlatState) -> f64 {
        (self.p_n - other.p_n).hypot(self.p_e - other.p_e)
    }
}

impl FlatInput {
    pub fn vector(&self) -> Vector2<f64> {
        Vector2::new(self.v_n, self.v_e)
    }

    pub fn from_vector(v: Vector2<f64>) -> Self {
        Self {
            v_n: v[0],
            v_e: v[1],
        }
    }

    pub fn speed(&self) -> f64 {
        self.v_n.hypot(self.v_e)
    }
}

/// Recovers state and input from the flat output and its first
/// derivative: `x = y`, `u = ẏ`.
pub fn flat_from_output(y: Vector2<f64>, y_dot: Vector2<f64>) -> (FlatState, FlatInput) {
    (
        FlatState {
            p_n: y[0],
            p_e: y[1],
        },
        FlatInput::from_vector(y_dot),
    )
}

/// Integrates the ideal tracking error `ẋ̃ = −k x̃` with classical RK4 and
/// returns `(t, |x̃|)` at every step, starting at `t = 0`.
pub fn error_dynamics_check(
    x0: Vector2<f64>,
    k: &Matrix2<f64>,
    horizon_s: f64,
    dt: f64,
) -> Vec<(f64, f64)> {
    let n = (horizon_s / dt).round() as usize;
    let f = |x: &Vector2<f64>| -(k * x);
    let mut x = x0;
    let mut out = Vec::with_capacity(n + 1);
    out.push((0.0, x.norm()));
    for i in 1..=n {
        let k1 = f(&x);
        let k2 = f(&(x + k1 * (dt / 2.0)));
        let k3 = f(&(x + k2 * (dt / 2.0)));
        let k4 = f(&(x + k3 * dt));
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        out.push((i as f64 * dt, x.norm()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_maps_are_identity() {
        let (x, u) = flat_from_output(Vector2::new(3.0, -2.0), Vector2::new(0.5, 8.0));
        assert_eq!((x.p_n, x.p_e), (3.0, -2.0));
        assert_eq!((u.v_n, u.v_e), (0.5, 8.0));
    }

    #[test]
    fn unit_gain_decay() {
        let traj = error_dynamics_check(Vector2::new(1.0, 1.0), &Matrix2::identity(), 1.0, 0.01);
        let (t, e) = *traj.last().unwrap();
        assert!((t - 1.0).abs() < 1e-12);
        let exact = 2f64.sqrt() * (-1.0f64).exp();
        assert!((e - exact).abs() < 0.01 * exact);
    }

    #[test]
    fn equilibrium_stays_put() {
        let traj = error_dynamics_check(Vector2::zeros(), &Matrix2::identity(), 3.0, 0.01);
        assert!(traj.iter().all(|&(_, e)| e == 0.0));
    }

    #[test]
    fn doubling_gain_halves_time_constant() {
        let one = error_dynamics_check(Vector2::new(1.0, 0.0), &Matrix2::identity(), 2.0, 0.001);
        let two = error_dynamics_check(
            Vector2::new(1.0, 0.0),
            &(Matrix2::identity() * 2.0),
            1.0,
            0.001,
        );
        // |x̃| for k = 2I at t equals |x̃| for k = I at 2t
        assert!((one.last().unwrap().1 - two.last().unwrap().1).abs() < 1e-9);
    }
}
