//! One set of gains on `y_m` for three virtual patients whose connectivity
//! constants are scaled by 0.9, 1.0 and 1.1.

use std::path::Path;

use neuroloop::harness::{compute_metrics, parse_config, run_closed_loop};

fn main() -> neuroloop::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    println!("patient  activation  RMSE     ref sd   u range");
    for name in ["scenario3a.json", "scenario3c.json", "scenario3b.json"] {
        let spec = parse_config(dir.join(name))?;
        let rec = run_closed_loop(&spec)?;
        let m = compute_metrics(&rec, &spec);
        println!(
            "C x {:.1}  {:>10}  {:>7}  {:>7}  [{:.2}, {:.2}]",
            spec.c_scale,
            m.activation_time.map_or("never".into(), |t| format!("{t:.3}")),
            m.tracking_rmse.map_or("-".into(), |r| format!("{r:.3}")),
            m.reference_std.map_or("-".into(), |r| format!("{r:.3}")),
            m.u_min_obs,
            m.u_max_obs
        );
    }
    Ok(())
}
