//! Tracking the patient's own crisis-free trajectory on `y1`. The recorded
//! reference sits well below what `y1` can reach once the pulse density is
//! high, which the printout makes visible.

use std::path::Path;

use neuroloop::harness::{compute_metrics, parse_config, run_closed_loop};

fn main() -> neuroloop::Result<()> {
    let spec = parse_config(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/scenario2.json"))?;
    let rec = run_closed_loop(&spec)?;
    let m = compute_metrics(&rec, &spec);
    let pp = spec.patient_params()?;
    let floor = pp.exc_gain / pp.exc_rate * spec.perturbation.elevated;
    println!("lowest reachable y1 at p = {}: {floor:.1} mV", spec.perturbation.elevated);
    println!(
        "reference mean {:.2} mV, sd {:.3}; tracking RMSE {:.3}",
        m.reference_amplitude.unwrap_or(f64::NAN),
        m.reference_std.unwrap_or(f64::NAN),
        m.tracking_rmse.unwrap_or(f64::NAN)
    );
    println!("stimulation range [{:.2}, {:.2}]", m.u_min_obs, m.u_max_obs);
    Ok(())
}
