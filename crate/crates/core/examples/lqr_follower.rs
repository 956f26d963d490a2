//! LQR gain for the single-integrator tracking model and the decay of a
//! tracking error under it.

use canpilot::follower::{error_dynamics_check, lqr_gain, riccati_residual, LqrWeights};
use nalgebra::Vector2;

fn main() {
    for w in [
        LqrWeights::default(),
        LqrWeights {
            q: [4.0, 9.0],
            r: [1.0, 0.5],
        },
    ] {
        let k = lqr_gain(&w).unwrap();
        println!(
            "Q {:?} R {:?} -> k diag ({:.4}, {:.4}), residual {:.1e}",
            w.q,
            w.r,
            k[(0, 0)],
            k[(1, 1)],
            riccati_residual(&w, &k)
        );
    }
    let k = lqr_gain(&LqrWeights::default()).unwrap();
    let x0 = Vector2::new(3.0, -4.0);
    println!("\n   t     |e|   5 e^-t");
    for (t, e) in error_dynamics_check(x0, &k, 5.0, 0.01)
        .into_iter()
        .step_by(50)
    {
        println!("{t:>4.1}  {e:>6.4}  {:>6.4}", 5.0 * (-t).exp());
    }
}
