//! The simplex minimizer on its own: a shifted bowl, Rosenbrock, and the
//! effect of the optional coordinate tolerance.
//!
//! ```bash
//! cargo run --example nelder_mead
//! ```

use qdt_choice::estimator::{nelder_mead_minimize, SimplexConfig};

fn main() {
    let bowl = |x: &[f64]| x.iter().map(|v| (v - 3.0).powi(2)).sum::<f64>();
    let rosenbrock = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);

    for (label, config) in [
        ("spread only", SimplexConfig::default()),
        ("spread + x_tol 1e-6", SimplexConfig::default().with_x_tolerance(1e-6)),
    ] {
        let m = nelder_mead_minimize(bowl, &[0.0; 4], &config);
        let err = m.point.iter().map(|v| (v - 3.0).abs()).fold(0.0, f64::max);
        println!(
            "bowl       {label:<20} iterations {:>5}  value {:.2e}  max |x - 3| {err:.2e}",
            m.iterations, m.value
        );
        let m = nelder_mead_minimize(rosenbrock, &[-1.2, 1.0], &config);
        println!(
            "rosenbrock {label:<20} iterations {:>5}  value {:.2e}  at ({:.6}, {:.6})",
            m.iterations, m.value, m.point[0], m.point[1]
        );
    }

    // infeasible points get a flat penalty instead of NaN
    let config = SimplexConfig::default();
    let bounded = |x: &[f64]| {
        if x[0] <= 0.0 {
            config.penalty_value
        } else {
            x[0].ln().powi(2) + (x[1] + 1.0).powi(2)
        }
    };
    let m = nelder_mead_minimize(bounded, &[0.2, 0.0], &config);
    println!("bounded    x = ({:.4}, {:.4}) converged {}", m.point[0], m.point[1], m.converged);
}
