use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::FollowerError;

/// Diagonal LQR weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LqrWeights {
    pub q: [f64; 2],
    pub r: [f64; 2],
}

impl Default for LqrWeights {
    fn default() -> Self {
        Self {
            q: [1.0, 1.0],
            r: [1.0, 1.0],
        }
    }
}

/// Optimal state feedback for `ẋ = u` (A = 0, B = I).
///
/// With A = 0 the Riccati equation reduces to `P R⁻¹ P = Q`; for diagonal
/// weights `P = diag(√(q_i r_i))` and `k = R⁻¹P = diag(√(q_i / r_i))`.
pub fn lqr_gain(w: &LqrWeights) -> Result<Matrix2<f64>, FollowerError> {
    if !w.r.iter().all(|&r| r.is_finite() && r > 0.0) {
        return Err(FollowerError::SingularR(w.r));
    }
    if !w.q.iter().all(|&q| q.is_finite() && q >= 0.0) {
        return Err(FollowerError::NegativeQ(w.q));
    }
    let p = [(w.q[0] * w.r[0]).sqrt(), (w.q[1] * w.r[1]).sqrt()];
    Ok(Matrix2::new(p[0] / w.r[0], 0.0, 0.0, p[1] / w.r[1]))
}

/// Frobenius norm of the Riccati residual `A'P + PA − P B R⁻¹ B' P + Q`
/// for A = 0, B = I, with `P = R k` recovered from the gain.
pub fn riccati_residual(w: &LqrWeights, k: &Matrix2<f64>) -> f64 {
    let q = Matrix2::from_diagonal(&w.q.into());
    let r = Matrix2::from_diagonal(&w.r.into());
    let p = r * k;
    let r_inv = r.try_inverse().expect("validated positive");
    (q - p * r_inv * p).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_weights() {
        let k = lqr_gain(&LqrWeights::default()).unwrap();
        assert_eq!(k, Matrix2::identity());
    }

    #[test]
    fn scaled_state_weight() {
        let k = lqr_gain(&LqrWeights {
            q: [4.0, 4.0],
            r: [1.0, 1.0],
        })
        .unwrap();
        assert_eq!(k, Matrix2::identity() * 2.0);
    }

    #[test]
    fn zero_r_rejected() {
        let w = LqrWeights {
            q: [1.0, 1.0],
            r: [0.0, 1.0],
        };
        assert_eq!(lqr_gain(&w), Err(FollowerError::SingularR([0.0, 1.0])));
        let w = LqrWeights {
            q: [-1.0, 1.0],
            r: [1.0, 1.0],
        };
        assert!(lqr_gain(&w).is_err());
    }

    /// Fixed-point iteration on the Hamiltonian-free form P = (Q R)^(1/2)
    /// is circular; instead integrate the Riccati ODE -Ṗ = Q − P R⁻¹ P to
    /// steady state as an independent route.
    fn riccati_flow(w: &LqrWeights) -> Matrix2<f64> {
        let q = Matrix2::from_diagonal(&w.q.into());
        let r_inv = Matrix2::from_diagonal(&w.r.into()).try_inverse().unwrap();
        let mut p = Matrix2::zeros();
        let dt = 1e-3;
        for _ in 0..200_000 {
            p += (q - p * r_inv * p) * dt;
        }
        r_inv * p
    }

    #[test]
    fn agrees_with_riccati_flow() {
        let w = LqrWeights {
            q: [2.0, 0.5],
            r: [0.5, 3.0],
        };
        let k = lqr_gain(&w).unwrap();
        let flow = riccati_flow(&w);
        assert!((k - flow).norm() < 1e-6, "{k} vs {flow}");
    }

    proptest! {
        #[test]
        fn residual_vanishes(q0 in 0.0f64..100.0, q1 in 0.0f64..100.0, r0 in 0.01f64..100.0, r1 in 0.01f64..100.0) {
            let w = LqrWeights { q: [q0, q1], r: [r0, r1] };
            let k = lqr_gain(&w).unwrap();
            prop_assert!(riccati_residual(&w, &k) < 1e-9);
        }
    }
}
