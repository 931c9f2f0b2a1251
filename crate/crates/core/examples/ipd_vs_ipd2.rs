//! The two control laws side by side: iPD differentiates the error, iPD2
//! works on `Y = y + K_D ∫ y` and needs no derivative of the measurement.

use std::path::Path;

use neuroloop::harness::{compute_metrics, parse_config, run_closed_loop, ScenarioSpec};
use neuroloop::mfc::ControlMode;

fn main() -> neuroloop::Result<()> {
    let base = parse_config(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/scenario1.json"))?;
    for noise in [0.0, 0.5] {
        for mode in [ControlMode::Ipd, ControlMode::Ipd2] {
            let mut spec = ScenarioSpec { measurement_noise_sd: noise, ..base.clone() };
            spec.controller.mode = mode;
            let m = compute_metrics(&run_closed_loop(&spec)?, &spec);
            println!(
                "noise {noise:.1} {mode:?}: RMSE {:.3}  u in [{:.2}, {:.2}]  sign changes of du {}",
                m.tracking_rmse.unwrap_or(f64::NAN),
                m.u_min_obs,
                m.u_max_obs,
                m.chattering_count
            );
        }
    }
    Ok(())
}
