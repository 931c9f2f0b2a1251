//! Stimulation regulates the excitatory feedback `y1` to a constant level
//! once the seizure is detected.

use std::path::Path;

use neuroloop::harness::{compute_metrics, parse_config, run_closed_loop};

fn main() -> neuroloop::Result<()> {
    let spec = parse_config(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/scenario1.json"))?;
    let rec = run_closed_loop(&spec)?;
    let m = compute_metrics(&rec, &spec);
    println!("activation at {:?} s", m.activation_time);
    println!(
        "tracking RMSE {:.3} mV ({:.2}% of the set-point)",
        m.tracking_rmse.unwrap_or(f64::NAN),
        100.0 * m.tracking_rmse.unwrap_or(f64::NAN) / m.reference_amplitude.unwrap_or(f64::NAN)
    );
    println!("stimulation range [{:.3}, {:.3}]", m.u_min_obs, m.u_max_obs);
    println!();
    println!("    t       y1     y*      u");
    for r in rec.rows.iter().step_by(256) {
        println!("{:5.2}  {:7.3}  {:5.1}  {:7.3}", r.t, r.y[1], r.ystar, r.u);
    }
    Ok(())
}
