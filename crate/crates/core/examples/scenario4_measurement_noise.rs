//! The derivative-free controller on `y_m` with and without measurement
//! noise of standard deviation 0.5.

use std::path::Path;

use neuroloop::harness::{compute_metrics, parse_config, run_closed_loop, ScenarioSpec};

fn main() -> neuroloop::Result<()> {
    let noisy = parse_config(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/scenario4.json"))?;
    let quiet = ScenarioSpec { measurement_noise_sd: 0.0, ..noisy.clone() };
    for (label, spec) in [("noiseless", &quiet), ("noise 0.5", &noisy)] {
        let m = compute_metrics(&run_closed_loop(spec)?, spec);
        println!(
            "{label:>10}: RMSE {:.3}  u in [{:.2}, {:.2}]  sign changes of du {}",
            m.tracking_rmse.unwrap_or(f64::NAN),
            m.u_min_obs,
            m.u_max_obs,
            m.chattering_count
        );
    }
    Ok(())
}
