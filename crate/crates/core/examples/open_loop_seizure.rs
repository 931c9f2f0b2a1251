//! Unstimulated patient: pulse density jumps from 200 to 800 at t = 2 s.
//! Runs the bundled configuration over several seeds and reports when the
//! detector raises the seizure flag.

use std::path::Path;

use neuroloop::harness::{compute_metrics, parse_config, run_open_loop, ScenarioSpec};

fn main() -> neuroloop::Result<()> {
    let base = parse_config(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/open_loop.json"))?;
    println!("seed  latency   false+  ptp pre  ptp post  maxima");
    for seed in 0..10 {
        let spec = ScenarioSpec { seed, ..base.clone() };
        let rec = run_open_loop(&spec)?;
        let m = compute_metrics(&rec, &spec);
        println!(
            "{seed:>4}  {:>7}  {:>6}  {:>7.2}  {:>8.2}  {:>6}",
            m.detection_latency.map_or("-".into(), |l| format!("{l:.3}")),
            m.false_positive_count,
            m.ym_ptp_pre.unwrap_or(f64::NAN),
            m.ym_ptp_post.unwrap_or(f64::NAN),
            m.event_count
        );
    }
    Ok(())
}
